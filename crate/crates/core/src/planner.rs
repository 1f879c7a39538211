//! QKD-first network planning.
//!
//! QKD demands are routed and checked against each link's zero-load key
//! rate, less a capacity margin. Every link direction then gets a noise
//! budget: the largest aggregate SpRS power at which its quantum channel
//! still delivers the allocated key rate. Classical lightpaths are admitted
//! online, one at a time, only where their SpRS fits the remaining budget of
//! every fiber they cross.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, LinkViolation, Result};
use crate::network::{k_shortest_paths, route_qkd, ClassicalDemand, LinkIdx, NodeIdx, Path, QkdDemand, Topology};
use crate::physmodels::{dbm_to_w, raman_power_from_load, skr_with_raman_power, CvQkdParams, FiberParams};
use crate::spectrum::{first_fit_order, placement_sweep, qawa_order, slot_spurs, WdmGrid};

/// Relative tolerance of the noise-headroom bisection.
pub const HEADROOM_REL_TOL: f64 = 1e-6;

const MAX_BISECTION_STEPS: usize = 400;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WavelengthPolicy {
    NaiveFirstFit,
    Qawa,
}

impl WavelengthPolicy {
    pub fn label(self) -> &'static str {
        match self {
            WavelengthPolicy::NaiveFirstFit => "naive",
            WavelengthPolicy::Qawa => "qawa",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QPlacement {
    Fixed(usize),
    SweepOptimal,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlannerConfig {
    pub margin: f64,
    pub wavelength_policy: WavelengthPolicy,
    pub p_classical_dbm: f64,
    pub k_paths: usize,
    pub q_placement: QPlacement,
    /// Reference run: no QKD, unlimited noise headroom on every link.
    #[serde(default)]
    pub classical_only: bool,
}

impl Default for PlannerConfig {
    fn default() -> Self {
        PlannerConfig {
            margin: 0.0,
            wavelength_policy: WavelengthPolicy::NaiveFirstFit,
            p_classical_dbm: 0.0,
            k_paths: 3,
            q_placement: QPlacement::SweepOptimal,
            classical_only: false,
        }
    }
}

impl PlannerConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.margin >= 0.0 && self.margin < 1.0) {
            return Err(Error::invalid(format!("margin must be in [0, 1), got {}", self.margin)));
        }
        if !self.p_classical_dbm.is_finite() {
            return Err(Error::invalid("classical launch power must be finite"));
        }
        if self.k_paths == 0 {
            return Err(Error::invalid("k_paths must be >= 1"));
        }
        Ok(())
    }

    pub fn label(&self) -> &'static str {
        if self.classical_only {
            "reference"
        } else {
            self.wavelength_policy.label()
        }
    }
}

/// Everything physical that a planning run needs.
#[derive(Clone, Debug)]
pub struct PlanContext {
    pub topology: Topology,
    pub grid: WdmGrid,
    pub fiber: FiberParams,
    /// `nu_q_thz` is overwritten with the frequency of the resolved quantum slot.
    pub cvqkd: CvQkdParams,
}

impl PlanContext {
    /// Quantum slot for a placement rule. The sweep-optimal slot is the same
    /// for every span length, so it is computed on a 1 km reference span.
    pub fn resolve_q_slot(&self, placement: QPlacement) -> Result<usize> {
        match placement {
            QPlacement::Fixed(slot) if slot < self.grid.n_slots => Ok(slot),
            QPlacement::Fixed(slot) => Err(Error::invalid(format!(
                "quantum slot {slot} outside grid of {} slots",
                self.grid.n_slots
            ))),
            QPlacement::SweepOptimal => {
                Ok(placement_sweep(&self.grid, &self.fiber, 1.0, 0.0, self.cvqkd.b_q_ghz)?.argmin)
            }
        }
    }

    pub fn params_for_slot(&self, q_slot: usize) -> CvQkdParams {
        CvQkdParams {
            nu_q_thz: self.grid.slot_freq_thz(q_slot),
            ..self.cvqkd.clone()
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LinkState {
    pub link: LinkIdx,
    pub length_km: f64,
    pub q_slot: usize,
    /// Slot occupancy per direction (index by `Direction::index`).
    pub occupied: [Vec<bool>; 2],
    pub qkd_allocated_bps: f64,
    pub skr_capacity_bps: f64,
    /// Total SpRS budget of each direction's quantum channel (W); infinite when unconstrained.
    pub noise_headroom_w: f64,
    /// SpRS already committed per direction (W).
    pub spurs_w: [f64; 2],
}

impl LinkState {
    pub fn residual_headroom_w(&self, dir: usize) -> f64 {
        (self.noise_headroom_w - self.spurs_w[dir]).max(0.0)
    }

    pub fn utilization(&self) -> f64 {
        let usable = 2 * (self.occupied[0].len() - 1);
        let used: usize = self.occupied.iter().map(|o| o.iter().filter(|&&b| b).count()).sum();
        used as f64 / usable as f64
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Admission {
    Accepted { path: Path, slot: usize },
    Blocked,
}

/// Largest aggregate SpRS power (W) at which a span still carries `allocated_bps`.
///
/// With nothing allocated the bound is where the key rate reaches zero.
pub fn noise_headroom(
    fiber: &FiberParams,
    length_km: f64,
    params: &CvQkdParams,
    allocated_bps: f64,
    rel_tol: f64,
) -> Result<f64> {
    let ok = |p: f64| -> Result<bool> {
        let skr = skr_with_raman_power(fiber, length_km, params, p)?;
        Ok(if allocated_bps > 0.0 {
            skr >= allocated_bps
        } else {
            skr > 0.0
        })
    };
    let skr0 = skr_with_raman_power(fiber, length_km, params, 0.0)?;
    // a link carrying its full capacity is clogged: no noise can be added
    if skr0 <= allocated_bps || !ok(0.0)? {
        return Ok(0.0);
    }
    let mut lo = 0.0;
    let mut hi = 1e-12;
    let mut steps = 0;
    while ok(hi)? {
        lo = hi;
        hi *= 2.0;
        steps += 1;
        if steps > MAX_BISECTION_STEPS {
            return Err(Error::NumericFailure(format!(
                "no upper bracket for noise headroom on a {length_km} km span"
            )));
        }
    }
    for _ in 0..MAX_BISECTION_STEPS {
        if hi - lo <= rel_tol * hi {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if ok(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

/// One planning run's mutable network state.
#[derive(Clone, Debug)]
pub struct Planner<'a> {
    ctx: &'a PlanContext,
    config: PlannerConfig,
    q_slot: usize,
    params: CvQkdParams,
    slot_order: Vec<usize>,
    /// Per-link SpRS of one classical channel at the configured power, by slot.
    contrib: Vec<Vec<f64>>,
    paths: BTreeMap<(NodeIdx, NodeIdx), Vec<Path>>,
    links: Vec<LinkState>,
}

impl<'a> Planner<'a> {
    pub fn new(ctx: &'a PlanContext, config: PlannerConfig) -> Result<Self> {
        config.validate()?;
        let q_slot = ctx.resolve_q_slot(config.q_placement)?;
        let params = ctx.params_for_slot(q_slot);
        params.validate()?;
        // Slot ranking depends only on the Raman coefficient; any positive length gives it.
        let slot_order = match config.wavelength_policy {
            WavelengthPolicy::NaiveFirstFit => first_fit_order(&ctx.grid, q_slot),
            WavelengthPolicy::Qawa => qawa_order(&ctx.grid, q_slot, &ctx.fiber, 1.0, params.b_q_ghz)?,
        };
        let p_w = dbm_to_w(config.p_classical_dbm);
        let topo = &ctx.topology;
        let mut contrib = Vec::with_capacity(topo.link_count());
        let mut links = Vec::with_capacity(topo.link_count());
        for link in 0..topo.link_count() {
            let length_km = topo.effective_length_km(link);
            let per_slot = (0..ctx.grid.n_slots)
                .map(|s| {
                    if s == q_slot {
                        Ok(0.0)
                    } else {
                        slot_spurs(&ctx.grid, q_slot, s, p_w, &ctx.fiber, length_km, params.b_q_ghz)
                    }
                })
                .collect::<Result<Vec<_>>>()?;
            contrib.push(per_slot);
            links.push(LinkState {
                link,
                length_km,
                q_slot,
                occupied: [vec![false; ctx.grid.n_slots], vec![false; ctx.grid.n_slots]],
                qkd_allocated_bps: 0.0,
                skr_capacity_bps: 0.0,
                noise_headroom_w: f64::INFINITY,
                spurs_w: [0.0; 2],
            });
        }
        Ok(Planner {
            ctx,
            config,
            q_slot,
            params,
            slot_order,
            contrib,
            paths: BTreeMap::new(),
            links,
        })
    }

    pub fn config(&self) -> &PlannerConfig {
        &self.config
    }

    pub fn q_slot(&self) -> usize {
        self.q_slot
    }

    pub fn params(&self) -> &CvQkdParams {
        &self.params
    }

    pub fn slot_order(&self) -> &[usize] {
        &self.slot_order
    }

    pub fn links(&self) -> &[LinkState] {
        &self.links
    }

    /// SpRS one channel in `slot` adds to `link` at the configured launch power.
    pub fn slot_contribution(&self, link: LinkIdx, slot: usize) -> f64 {
        self.contrib[link][slot]
    }

    /// Routes QKD demands and sets capacities and noise budgets. All-or-nothing:
    /// any link whose load exceeds `(1 - margin)` of its capacity fails the whole set.
    pub fn allocate_qkd(&mut self, demands: &[QkdDemand]) -> Result<()> {
        let ctx = self.ctx;
        if self.config.classical_only {
            for l in &mut self.links {
                l.qkd_allocated_bps = 0.0;
                l.skr_capacity_bps = 0.0;
                l.noise_headroom_w = f64::INFINITY;
            }
            return Ok(());
        }
        let load = route_qkd(&ctx.topology, demands)?;
        let mut violations = Vec::new();
        for (l, &load_bps) in self.links.iter_mut().zip(&load) {
            let capacity = skr_with_raman_power(&ctx.fiber, l.length_km, &self.params, 0.0)?;
            let admissible = (1.0 - self.config.margin) * capacity;
            l.qkd_allocated_bps = load_bps;
            l.skr_capacity_bps = capacity;
            if load_bps > admissible {
                violations.push(LinkViolation {
                    link: ctx.topology.link_name(l.link),
                    load_bps,
                    capacity_bps: capacity,
                    admissible_bps: admissible,
                });
            }
        }
        if !violations.is_empty() {
            return Err(Error::Infeasible(violations));
        }
        for l in &mut self.links {
            l.noise_headroom_w = noise_headroom(
                &ctx.fiber,
                l.length_km,
                &self.params,
                l.qkd_allocated_bps,
                HEADROOM_REL_TOL,
            )?;
        }
        Ok(())
    }

    fn candidate_paths(&mut self, src: NodeIdx, dst: NodeIdx) -> Vec<Path> {
        let (topo, k) = (&self.ctx.topology, self.config.k_paths);
        self.paths
            .entry((src, dst))
            .or_insert_with(|| k_shortest_paths(topo, src, dst, k))
            .clone()
    }

    /// Admits a single lightpath: first (path, slot) in candidate-path then
    /// policy order that is free end to end and fits every fiber's noise budget.
    pub fn admit_lightpath(&mut self, src: NodeIdx, dst: NodeIdx) -> Admission {
        for path in self.candidate_paths(src, dst) {
            let hops = path.hops(&self.ctx.topology);
            let fits = |slot: usize, links: &[LinkState], contrib: &[Vec<f64>]| {
                hops.iter().all(|&(link, dir)| {
                    let l = &links[link];
                    let d = dir.index();
                    !l.occupied[d][slot] && l.spurs_w[d] + contrib[link][slot] <= l.noise_headroom_w
                })
            };
            let found = self
                .slot_order
                .iter()
                .copied()
                .find(|&slot| fits(slot, &self.links, &self.contrib));
            if let Some(slot) = found {
                for &(link, dir) in &hops {
                    let l = &mut self.links[link];
                    l.occupied[dir.index()][slot] = true;
                    l.spurs_w[dir.index()] += self.contrib[link][slot];
                }
                return Admission::Accepted { path, slot };
            }
        }
        Admission::Blocked
    }

    /// Admits `demand.lightpaths_requested` lightpaths; returns how many were accepted.
    pub fn admit_demand(&mut self, demand: &ClassicalDemand) -> u32 {
        (0..demand.lightpaths_requested)
            .filter(|_| matches!(self.admit_lightpath(demand.src, demand.dst), Admission::Accepted { .. }))
            .count() as u32
    }

    /// Classical load (W, THz) on one fiber direction, rebuilt from occupancy.
    pub fn classical_load(&self, link: LinkIdx, dir: usize) -> Vec<(f64, f64)> {
        let p_w = dbm_to_w(self.config.p_classical_dbm);
        self.links[link].occupied[dir]
            .iter()
            .enumerate()
            .filter(|(_, &o)| o)
            .map(|(s, _)| (p_w, self.ctx.grid.slot_freq_thz(s)))
            .collect()
    }

    /// From-scratch key rate of each fiber direction given its actual occupancy.
    pub fn recompute_skr(&self) -> Result<Vec<[f64; 2]>> {
        (0..self.links.len())
            .map(|link| {
                let mut out = [0.0; 2];
                for (dir, slot) in out.iter_mut().enumerate() {
                    let load = self.classical_load(link, dir);
                    *slot =
                        crate::physmodels::link_skr(&self.ctx.fiber, self.links[link].length_km, &self.params, &load)?;
                }
                Ok(out)
            })
            .collect()
    }

    /// From-scratch remaining SpRS budget per direction.
    pub fn recompute_residual_headroom(&self, rel_tol: f64) -> Result<Vec<[f64; 2]>> {
        self.links
            .iter()
            .map(|l| {
                let total = if self.config.classical_only {
                    f64::INFINITY
                } else {
                    noise_headroom(&self.ctx.fiber, l.length_km, &self.params, l.qkd_allocated_bps, rel_tol)?
                };
                let mut out = [0.0; 2];
                for (dir, slot) in out.iter_mut().enumerate() {
                    let used = raman_power_from_load(
                        &self.ctx.fiber,
                        l.length_km,
                        &self.params,
                        &self.classical_load(l.link, dir),
                    )?;
                    *slot = (total - used).max(0.0);
                }
                Ok(out)
            })
            .collect()
    }

    fn link_reports(&self) -> Vec<LinkReport> {
        self.links
            .iter()
            .map(|l| {
                let residual = l.residual_headroom_w(0).min(l.residual_headroom_w(1));
                LinkReport {
                    link: self.ctx.topology.link_name(l.link),
                    length_km: l.length_km,
                    utilization: l.utilization(),
                    qkd_allocated_bps: l.qkd_allocated_bps,
                    skr_capacity_bps: l.skr_capacity_bps,
                    residual_headroom_w: residual.is_finite().then_some(residual),
                }
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinkReport {
    pub link: String,
    pub length_km: f64,
    pub utilization: f64,
    pub qkd_allocated_bps: f64,
    pub skr_capacity_bps: f64,
    /// Smaller of the two directions; `None` when unconstrained.
    pub residual_headroom_w: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlanReport {
    pub policy: String,
    pub margin: f64,
    pub p_dbm: f64,
    pub q_slot: usize,
    pub offered_lightpaths: u64,
    pub blocked_lightpaths: u64,
    pub blocking_ratio: f64,
    pub qkd_feasible: bool,
    /// SHA-256 of the offered request sequence.
    pub request_digest: String,
    pub per_link: Vec<LinkReport>,
}

/// Blocked over offered, with 0/0 taken as 0.
pub fn blocking_ratio(blocked: u64, offered: u64) -> f64 {
    if offered == 0 {
        0.0
    } else {
        blocked as f64 / offered as f64
    }
}

/// Seeded sequence of single-lightpath requests between uniformly drawn distinct nodes.
pub fn generate_requests(node_count: usize, count: usize, seed: u64) -> Vec<ClassicalDemand> {
    assert!(node_count >= 2, "need at least two nodes");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let src = rng.gen_range(0..node_count);
            let mut dst = rng.gen_range(0..node_count - 1);
            if dst >= src {
                dst += 1;
            }
            ClassicalDemand {
                src,
                dst,
                lightpaths_requested: 1,
            }
        })
        .collect()
}

fn digest_hex(hasher: &Sha256) -> String {
    hasher.clone().finalize().iter().map(|b| format!("{b:02x}")).collect()
}

/// Runs one configuration over a sweep of offered loads. Levels share one
/// seeded request sequence, each level taking a prefix of it, so a single
/// sequential pass yields every level.
pub fn run_scenario(
    ctx: &PlanContext,
    qkd_demands: &[QkdDemand],
    offered_load_sweep: &[usize],
    config: &PlannerConfig,
    seed: u64,
) -> Result<Vec<PlanReport>> {
    let mut planner = Planner::new(ctx, config.clone())?;
    planner.allocate_qkd(qkd_demands)?;

    let max_level = offered_load_sweep.iter().copied().max().unwrap_or(0);
    let requests = generate_requests(ctx.topology.node_count(), max_level, seed);
    let mut levels: Vec<usize> = offered_load_sweep.to_vec();
    levels.sort_unstable();
    levels.dedup();

    let mut snapshots: BTreeMap<usize, PlanReport> = BTreeMap::new();
    let mut hasher = Sha256::new();
    let mut blocked = 0u64;
    let mut next = levels.iter().peekable();
    let snapshot = |done: usize, blocked: u64, hasher: &Sha256, planner: &Planner| PlanReport {
        policy: config.label().to_string(),
        margin: config.margin,
        p_dbm: config.p_classical_dbm,
        q_slot: planner.q_slot,
        offered_lightpaths: done as u64,
        blocked_lightpaths: blocked,
        blocking_ratio: blocking_ratio(blocked, done as u64),
        qkd_feasible: true,
        request_digest: digest_hex(hasher),
        per_link: planner.link_reports(),
    };
    while next.peek() == Some(&&0) {
        snapshots.insert(0, snapshot(0, 0, &hasher, &planner));
        next.next();
    }
    for (i, req) in requests.iter().enumerate() {
        hasher.update((req.src as u64).to_le_bytes());
        hasher.update((req.dst as u64).to_le_bytes());
        let accepted = planner.admit_demand(req);
        blocked += u64::from(req.lightpaths_requested - accepted);
        let done = i + 1;
        while next.peek() == Some(&&done) {
            snapshots.insert(done, snapshot(done, blocked, &hasher, &planner));
            next.next();
        }
    }
    Ok(offered_load_sweep.iter().map(|lvl| snapshots[lvl].clone()).collect())
}

/// The five configurations of the coexistence comparison, in output order.
pub fn comparison_configs(base: &PlannerConfig, margin: f64) -> Vec<PlannerConfig> {
    let with = |policy, m, p, classical_only| PlannerConfig {
        margin: m,
        wavelength_policy: policy,
        p_classical_dbm: p,
        classical_only,
        ..base.clone()
    };
    use WavelengthPolicy::*;
    vec![
        with(NaiveFirstFit, 0.0, 0.0, false),
        with(NaiveFirstFit, 0.0, -10.0, false),
        with(Qawa, 0.0, 0.0, false),
        with(Qawa, margin, -10.0, false),
        with(NaiveFirstFit, 0.0, -10.0, true),
    ]
}

/// Runs every comparison configuration with the same seed; rows are grouped by configuration.
pub fn compare_policies(
    ctx: &PlanContext,
    qkd_demands: &[QkdDemand],
    sweep: &[usize],
    seed: u64,
    base: &PlannerConfig,
    margin: f64,
) -> Result<Vec<PlanReport>> {
    let mut out = Vec::new();
    for config in comparison_configs(base, margin) {
        out.extend(run_scenario(ctx, qkd_demands, sweep, &config, seed)?);
    }
    Ok(out)
}
