mod common;

use common::{enumerate_simple_paths, oracle_route_load};
use proptest::prelude::*;
use qnetplan::network::{
    build_topology, k_shortest_paths, route_qkd, uniform_qkd_demands, QkdDemand, TopologySpec, LAMBDA_RANGE,
};

fn spain(lambda: f64) -> qnetplan::network::Topology {
    build_topology(&TopologySpec::spain7(), lambda).unwrap()
}

#[test]
fn madrid_to_murcia_goes_via_valencia() {
    let t = spain(1.0);
    let (m, v, mu) = (
        t.node_by_name("Madrid").unwrap(),
        t.node_by_name("Valencia").unwrap(),
        t.node_by_name("Murcia").unwrap(),
    );
    let best = &k_shortest_paths(&t, m, mu, 1)[0];
    assert_eq!(best.nodes, vec![m, v, mu]);
    assert_eq!(best.length_km, 479.0);
}

#[test]
fn yen_matches_exhaustive_enumeration_for_all_pairs() {
    for lambda in [1.0, 0.05] {
        let t = spain(lambda);
        for s in 0..t.node_count() {
            for d in 0..t.node_count() {
                if s == d {
                    continue;
                }
                let all = enumerate_simple_paths(&t, s, d);
                for k in 1..=5 {
                    let ours = k_shortest_paths(&t, s, d, k);
                    assert_eq!(ours.len(), k.min(all.len()));
                    for (p, (len, nodes)) in ours.iter().zip(&all) {
                        assert_eq!(&p.nodes, nodes, "{s}->{d} k={k}");
                        assert!((p.length_km - len).abs() <= 1e-9 * len);
                    }
                }
            }
        }
    }
}

#[test]
fn lambda_scales_lengths() {
    let a = spain(1.0);
    let b = spain(0.05);
    for l in 0..a.link_count() {
        assert!((b.effective_length_km(l) - 0.05 * a.effective_length_km(l)).abs() < 1e-12);
    }
    assert!(build_topology(&TopologySpec::spain7(), LAMBDA_RANGE.0 / 2.0).is_err());
    assert!(build_topology(&TopologySpec::spain7(), 1.5).is_err());
}

#[test]
fn qkd_routing_matches_oracle_and_conserves_rate() {
    let t = spain(0.05);
    let demands = uniform_qkd_demands(&t, 280e6);
    assert_eq!(demands.len(), 21);
    let load = route_qkd(&t, &demands).unwrap();
    let oracle = oracle_route_load(
        &t,
        &demands
            .iter()
            .map(|d| (d.src, d.dst, d.key_rate_bps))
            .collect::<Vec<_>>(),
    );
    for (a, b) in load.iter().zip(&oracle) {
        assert!((a - b).abs() <= 1e-6, "{a} vs {b}");
    }
    // every demand contributes rate × hop count
    let expected: f64 = demands
        .iter()
        .map(|d| d.key_rate_bps * (k_shortest_paths(&t, d.src, d.dst, 1)[0].nodes.len() - 1) as f64)
        .sum();
    assert!((load.iter().sum::<f64>() - expected).abs() <= 1e-6 * expected);
}

#[test]
fn invalid_demands_rejected() {
    let t = spain(0.05);
    let bad = [
        QkdDemand {
            src: 0,
            dst: 0,
            key_rate_bps: 1.0,
        },
        QkdDemand {
            src: 0,
            dst: 9,
            key_rate_bps: 1.0,
        },
        QkdDemand {
            src: 0,
            dst: 1,
            key_rate_bps: -1.0,
        },
    ];
    for d in bad {
        assert!(route_qkd(&t, &[d]).is_err());
    }
}

fn arb_topology() -> impl Strategy<Value = TopologySpec> {
    (
        3u32..7,
        proptest::collection::vec((0u32..7, 0u32..7, 1.0f64..100.0), 3..14),
    )
        .prop_map(|(n, raw)| {
            let nodes = (0..n).map(|i| (i + 1, format!("N{i}"))).collect();
            // a ring keeps the graph connected, then random chords
            let mut links: Vec<(u32, u32, f64)> = (0..n).map(|i| (i + 1, (i + 1) % n + 1, 10.0 + i as f64)).collect();
            for (a, b, len) in raw {
                let (a, b) = (a % n + 1, b % n + 1);
                if a != b && !links.iter().any(|&(x, y, _)| (x, y) == (a, b) || (x, y) == (b, a)) {
                    links.push((a, b, len.round()));
                }
            }
            TopologySpec { nodes, links }
        })
}

proptest! {
    #[test]
    fn yen_on_random_graphs(spec in arb_topology(), k in 1usize..6) {
        let t = build_topology(&spec, 1.0).unwrap();
        for s in 0..t.node_count() {
            for d in (0..t.node_count()).filter(|&d| d != s) {
                let all = enumerate_simple_paths(&t, s, d);
                let ours = k_shortest_paths(&t, s, d, k);
                prop_assert_eq!(ours.len(), k.min(all.len()));
                for (p, (_, nodes)) in ours.iter().zip(&all) {
                    prop_assert_eq!(&p.nodes, nodes);
                }
            }
        }
    }
}
