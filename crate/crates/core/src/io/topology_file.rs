//! Plain-text topology files.
//!
//! ```text
//! # comments start with '#'
//! [nodes]
//! <id> <name>
//! [links]
//! <id_a> <id_b> length_km=<base length>
//! ```
//!
//! Both sections are required and must be non-empty. Node ids are unsigned
//! integers, names are single whitespace-free tokens. Links are undirected,
//! each may appear once.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::network::TopologySpec;

/// Built-in seven-node reference mesh.
pub const DEFAULT_TOPOLOGY: &str = include_str!("../../data/spain7.topo");

#[derive(Clone, Copy, PartialEq)]
enum Section {
    None,
    Nodes,
    Links,
}

struct Cursor<'a> {
    source: &'a str,
    line: usize,
}

impl Cursor<'_> {
    fn err(&self, column: usize, message: impl Into<String>) -> Error {
        Error::Parse {
            source_name: self.source.to_string(),
            line: self.line,
            column,
            message: message.into(),
        }
    }
}

/// (1-based column, token) for each whitespace-separated token.
fn tokens(content: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in content.char_indices() {
        match (ch.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                out.push((content[..s].chars().count() + 1, &content[s..i]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((content[..s].chars().count() + 1, &content[s..]));
    }
    out
}

pub fn parse_topology(text: &str, source_name: &str) -> Result<TopologySpec> {
    let mut cur = Cursor {
        source: source_name,
        line: 0,
    };
    let mut section = Section::None;
    let mut seen_sections = BTreeSet::new();
    let mut nodes: Vec<(u32, String)> = Vec::new();
    let mut ids = BTreeMap::new();
    let mut links = Vec::new();
    let mut link_keys = BTreeSet::new();

    for (idx, raw) in text.lines().enumerate() {
        cur.line = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        let toks = tokens(content);
        let Some(&(col0, first)) = toks.first() else {
            continue;
        };
        if first.starts_with('[') {
            if toks.len() != 1 {
                return Err(cur.err(toks[1].0, "unexpected text after section header"));
            }
            section = match first {
                "[nodes]" => Section::Nodes,
                "[links]" => Section::Links,
                other => return Err(cur.err(col0, format!("unknown section '{other}'"))),
            };
            if !seen_sections.insert(first.to_string()) {
                return Err(cur.err(col0, format!("section {first} appears twice")));
            }
            continue;
        }
        match section {
            Section::None => {
                return Err(cur.err(col0, "expected a section header '[nodes]' or '[links]'"));
            }
            Section::Nodes => {
                if toks.len() != 2 {
                    return Err(cur.err(
                        col0,
                        format!("node line needs 'id name', found {} field(s)", toks.len()),
                    ));
                }
                let id: u32 = first
                    .parse()
                    .map_err(|_| cur.err(col0, format!("node id must be an unsigned integer, found '{first}'")))?;
                let (col1, name) = toks[1];
                if ids.insert(id, name.to_string()).is_some() {
                    return Err(cur.err(col0, format!("duplicate node id {id}")));
                }
                if nodes.iter().any(|(_, n)| n == name) {
                    return Err(cur.err(col1, format!("duplicate node name '{name}'")));
                }
                nodes.push((id, name.to_string()));
            }
            Section::Links => {
                if nodes.is_empty() {
                    return Err(cur.err(col0, "missing or empty [nodes] section before links"));
                }
                if toks.len() != 3 {
                    return Err(cur.err(
                        col0,
                        format!(
                            "link line needs 'id_a id_b length_km=<km>', found {} field(s)",
                            toks.len()
                        ),
                    ));
                }
                let mut ends = [0u32; 2];
                for (slot, &(col, tok)) in ends.iter_mut().zip(&toks[..2]) {
                    *slot = tok
                        .parse()
                        .map_err(|_| cur.err(col, format!("node id must be an unsigned integer, found '{tok}'")))?;
                    if !ids.contains_key(slot) {
                        return Err(cur.err(col, format!("link references unknown node {tok}")));
                    }
                }
                let (col2, len_tok) = toks[2];
                let value = len_tok
                    .strip_prefix("length_km=")
                    .ok_or_else(|| cur.err(col2, format!("expected 'length_km=<km>', found '{len_tok}'")))?;
                let length: f64 = value
                    .parse()
                    .ok()
                    .filter(|l: &f64| *l > 0.0 && l.is_finite())
                    .ok_or_else(|| cur.err(col2 + "length_km=".len(), format!("invalid length '{value}'")))?;
                let (a, b) = (ends[0], ends[1]);
                if a == b {
                    return Err(cur.err(col0, format!("self-loop at node {}", ids[&a])));
                }
                if !link_keys.insert((a.min(b), a.max(b))) {
                    return Err(cur.err(col0, format!("duplicate link {}-{}", ids[&a], ids[&b])));
                }
                links.push((a, b, length));
            }
        }
    }
    cur.line += 1;
    if nodes.is_empty() {
        return Err(cur.err(1, "missing or empty [nodes] section"));
    }
    if links.is_empty() {
        return Err(cur.err(1, "missing or empty [links] section"));
    }
    Ok(TopologySpec { nodes, links })
}

/// Canonical text form; parsing it yields the same spec.
pub fn serialize_topology(spec: &TopologySpec) -> String {
    let mut out = String::from("[nodes]\n");
    for (id, name) in &spec.nodes {
        out.push_str(&format!("{id} {name}\n"));
    }
    out.push_str("\n[links]\n");
    for (a, b, len) in &spec.links {
        out.push_str(&format!("{a} {b} length_km={len}\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_topology_matches_builtin_spec() {
        let spec = parse_topology(DEFAULT_TOPOLOGY, "spain7.topo").unwrap();
        assert_eq!(spec.nodes.len(), 7);
        assert_eq!(spec.links.len(), 8);
        assert_eq!(spec, TopologySpec::spain7());
    }

    #[test]
    fn missing_nodes_section_is_named() {
        let err = parse_topology("[links]\n", "t").unwrap_err().to_string();
        assert!(err.contains("[nodes]"), "{err}");
        let err = parse_topology("[nodes]\n[links]\n1 2 length_km=3\n", "t")
            .unwrap_err()
            .to_string();
        assert!(err.contains("[nodes]"), "{err}");
        let err = parse_topology("[nodes]\n1 A\n2 B\n", "t").unwrap_err().to_string();
        assert!(err.contains("[links]"), "{err}");
    }

    #[test]
    fn unknown_node_is_named_with_position() {
        let text = "[nodes]\n1 A\n2 B\n[links]\n1 2 length_km=5\n2  7 length_km=5\n";
        match parse_topology(text, "t.topo").unwrap_err() {
            Error::Parse {
                line, column, message, ..
            } => {
                assert_eq!((line, column), (6, 4));
                assert!(message.contains("unknown node 7"), "{message}");
            }
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn duplicate_link_either_direction() {
        let text = "[nodes]\n1 A\n2 B\n[links]\n1 2 length_km=5\n2 1 length_km=6\n";
        let err = parse_topology(text, "t").unwrap_err().to_string();
        assert!(err.contains("duplicate link B-A"), "{err}");
    }

    #[test]
    fn length_needs_unit_key() {
        let text = "[nodes]\n1 A\n2 B\n[links]\n1 2 5\n";
        let err = parse_topology(text, "t").unwrap_err().to_string();
        assert!(err.contains("length_km="), "{err}");
        let text = "[nodes]\n1 A\n2 B\n[links]\n1 2 length_km=-5\n";
        assert!(parse_topology(text, "t").is_err());
    }

    #[test]
    fn lines_outside_sections_rejected() {
        assert!(parse_topology("1 A\n", "t").is_err());
        assert!(parse_topology("[routers]\n", "t").is_err());
    }

    #[test]
    fn serialize_then_parse_is_identity() {
        let spec = TopologySpec::spain7();
        let text = serialize_topology(&spec);
        assert_eq!(parse_topology(&text, "t").unwrap(), spec);
    }
}
