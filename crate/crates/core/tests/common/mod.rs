//! Independent oracles shared by the integration tests. Nothing here calls
//! into the code path it is used to check.

#![allow(dead_code)]

use nalgebra::{DMatrix, SymmetricEigen};

use qnetplan::network::{NodeIdx, Topology};
use qnetplan::physmodels::{CvQkdParams, Detection};

// ---------------------------------------------------------------------------
// Gaussian-state oracle: covariance matrices and numeric symplectic spectra
// ---------------------------------------------------------------------------

/// Mode ordering is (x1, p1, x2, p2, ...).
fn omega(modes: usize) -> DMatrix<f64> {
    let mut w = DMatrix::zeros(2 * modes, 2 * modes);
    for m in 0..modes {
        w[(2 * m, 2 * m + 1)] = 1.0;
        w[(2 * m + 1, 2 * m)] = -1.0;
    }
    w
}

/// Symplectic eigenvalues from the spectrum of (√γ Ω √γ)ᵀ(√γ Ω √γ), ascending.
pub fn numeric_symplectic_eigenvalues(gamma: &DMatrix<f64>) -> Vec<f64> {
    let n = gamma.nrows();
    let eig = SymmetricEigen::new(gamma.clone());
    let sqrt_vals = DMatrix::from_diagonal(&eig.eigenvalues.map(|v| v.max(0.0).sqrt()));
    let root = &eig.eigenvectors * sqrt_vals * eig.eigenvectors.transpose();
    let k = &root * omega(n / 2) * &root;
    let m = k.transpose() * &k;
    let m = (&m + m.transpose()) * 0.5;
    let mut sq: Vec<f64> = SymmetricEigen::new(m).eigenvalues.iter().copied().collect();
    sq.sort_by(f64::total_cmp);
    sq.chunks(2).map(|p| (0.5 * (p[0] + p[1])).max(0.0).sqrt()).collect()
}

fn place(dst: &mut DMatrix<f64>, r: usize, c: usize, block: &DMatrix<f64>) {
    dst.view_mut((r, c), (block.nrows(), block.ncols())).copy_from(block);
}

fn diag2(a: f64, b: f64) -> DMatrix<f64> {
    DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![a, b]))
}

/// Entanglement-based picture after the channel and Bob's detector beam
/// splitter. Modes: A, B' (detected), F, G (detector noise purification).
pub fn detector_state(p: &CvQkdParams, t: f64, xi: f64) -> DMatrix<f64> {
    let v = p.v_a + 1.0;
    let b = t * (v - 1.0) + 1.0 + t * xi;
    let c = (t * (v * v - 1.0)).sqrt();
    let eta = p.eta_det;
    let nu = if eta < 1.0 {
        match p.detection {
            Detection::Homodyne => 1.0 + p.v_el / (1.0 - eta),
            Detection::Heterodyne => 1.0 + 2.0 * p.v_el / (1.0 - eta),
        }
    } else {
        1.0
    };
    let e = (nu * nu - 1.0).max(0.0).sqrt();
    let mut g = DMatrix::zeros(8, 8);
    place(&mut g, 0, 0, &diag2(v, v));
    place(&mut g, 2, 2, &diag2(b, b));
    place(&mut g, 0, 2, &diag2(c, -c));
    place(&mut g, 2, 0, &diag2(c, -c));
    place(&mut g, 4, 4, &diag2(nu, nu));
    place(&mut g, 6, 6, &diag2(nu, nu));
    place(&mut g, 4, 6, &diag2(e, -e));
    place(&mut g, 6, 4, &diag2(e, -e));

    // beam splitter mixing B (modes 1) and F0 (mode 2)
    let (st, sr) = (eta.sqrt(), (1.0 - eta).sqrt());
    let mut s = DMatrix::identity(8, 8);
    for q in 0..2 {
        s[(2 + q, 2 + q)] = st;
        s[(2 + q, 4 + q)] = sr;
        s[(4 + q, 2 + q)] = -sr;
        s[(4 + q, 4 + q)] = st;
    }
    &s * g * s.transpose()
}

fn select(g: &DMatrix<f64>, rows: &[usize], cols: &[usize]) -> DMatrix<f64> {
    DMatrix::from_fn(rows.len(), cols.len(), |i, j| g[(rows[i], cols[j])])
}

/// Oracle for (λ1, λ2) and (λ3, λ4, λ5), each ascending.
pub fn oracle_symplectic(p: &CvQkdParams, t: f64, xi: f64) -> (Vec<f64>, Vec<f64>) {
    let v = p.v_a + 1.0;
    let b = t * (v - 1.0) + 1.0 + t * xi;
    let c = (t * (v * v - 1.0)).sqrt();
    let mut ab = DMatrix::zeros(4, 4);
    place(&mut ab, 0, 0, &diag2(v, v));
    place(&mut ab, 2, 2, &diag2(b, b));
    place(&mut ab, 0, 2, &diag2(c, -c));
    place(&mut ab, 2, 0, &diag2(c, -c));
    let before = numeric_symplectic_eigenvalues(&ab);

    let full = detector_state(p, t, xi);
    let rest = [0, 1, 4, 5, 6, 7];
    let meas = [2, 3];
    let g_r = select(&full, &rest, &rest);
    let sigma = select(&full, &rest, &meas);
    let g_m = select(&full, &meas, &meas);
    let cond = match p.detection {
        Detection::Homodyne => {
            let col = sigma.column(0).into_owned();
            g_r - (&col * col.transpose()) / g_m[(0, 0)]
        }
        Detection::Heterodyne => {
            let inv = (g_m + DMatrix::identity(2, 2)).try_inverse().unwrap();
            g_r - &sigma * inv * sigma.transpose()
        }
    };
    (before, numeric_symplectic_eigenvalues(&cond))
}

fn g_entropy(nu: f64) -> f64 {
    let x = ((nu - 1.0) / 2.0).max(0.0);
    if x == 0.0 {
        0.0
    } else {
        (x + 1.0) * (x + 1.0).log2() - x * x.log2()
    }
}

/// Mutual information of Alice's heterodyne data and Bob's outcomes, from
/// determinants of the outcome covariance.
pub fn oracle_mutual_information(p: &CvQkdParams, t: f64, xi: f64) -> f64 {
    let full = detector_state(p, t, xi);
    let a = select(&full, &[0, 1], &[0, 1]);
    let sa = (a + DMatrix::identity(2, 2)) * 0.5;
    match p.detection {
        Detection::Heterodyne => {
            let joint = (select(&full, &[0, 1, 2, 3], &[0, 1, 2, 3]) + DMatrix::identity(4, 4)) * 0.5;
            let sb = select(&joint, &[2, 3], &[2, 3]);
            0.5 * (sa.determinant() * sb.determinant() / joint.determinant()).log2()
        }
        Detection::Homodyne => {
            let mut joint = DMatrix::zeros(3, 3);
            place(&mut joint, 0, 0, &sa);
            let s2 = std::f64::consts::FRAC_1_SQRT_2;
            joint[(0, 2)] = full[(0, 2)] * s2;
            joint[(2, 0)] = joint[(0, 2)];
            joint[(1, 2)] = full[(1, 2)] * s2;
            joint[(2, 1)] = joint[(1, 2)];
            joint[(2, 2)] = full[(2, 2)];
            0.5 * (sa.determinant() * full[(2, 2)] / joint.determinant()).log2()
        }
    }
}

/// Key rate (bits/s) computed entirely from the oracle spectra.
pub fn oracle_skr(p: &CvQkdParams, t: f64, xi: f64) -> f64 {
    let (before, after) = oracle_symplectic(p, t, xi);
    let chi: f64 = before.iter().map(|&l| g_entropy(l)).sum::<f64>() - after.iter().map(|&l| g_entropy(l)).sum::<f64>();
    let i_ab = oracle_mutual_information(p, t, xi);
    p.f_sym * (p.beta * i_ab - chi).max(0.0)
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

// ---------------------------------------------------------------------------
// Graph oracles
// ---------------------------------------------------------------------------

/// Every loop-free path between `src` and `dst`, sorted by (length, node sequence).
pub fn enumerate_simple_paths(topo: &Topology, src: NodeIdx, dst: NodeIdx) -> Vec<(f64, Vec<NodeIdx>)> {
    fn dfs(topo: &Topology, dst: NodeIdx, path: &mut Vec<NodeIdx>, len: f64, out: &mut Vec<(f64, Vec<NodeIdx>)>) {
        let u = *path.last().unwrap();
        if u == dst {
            out.push((len, path.clone()));
            return;
        }
        for &(v, link) in topo.neighbors(u) {
            if path.contains(&v) {
                continue;
            }
            path.push(v);
            dfs(topo, dst, path, len + topo.effective_length_km(link), out);
            path.pop();
        }
    }
    let mut out = Vec::new();
    dfs(topo, dst, &mut vec![src], 0.0, &mut out);
    for entry in &mut out {
        // re-sum in path order so lengths compare bit-for-bit with the planner's
        entry.0 = entry
            .1
            .windows(2)
            .map(|w| {
                let link = topo.neighbors(w[0]).iter().find(|e| e.0 == w[1]).unwrap().1;
                topo.effective_length_km(link)
            })
            .sum();
    }
    out.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    out
}

/// Per-link QKD load recomputed from enumerated shortest paths.
pub fn oracle_route_load(topo: &Topology, demands: &[(NodeIdx, NodeIdx, f64)]) -> Vec<f64> {
    let mut load = vec![0.0; topo.link_count()];
    for &(s, d, rate) in demands {
        let best = &enumerate_simple_paths(topo, s, d)[0].1;
        for w in best.windows(2) {
            let link = topo.neighbors(w[0]).iter().find(|e| e.0 == w[1]).unwrap().1;
            load[link] += rate;
        }
    }
    load
}

// ---------------------------------------------------------------------------
// Headroom oracle
// ---------------------------------------------------------------------------

/// Plain bisection on a monotone predicate with the given relative tolerance.
pub fn bisect_max(ok: impl Fn(f64) -> bool, rel_tol: f64) -> f64 {
    if !ok(0.0) {
        return 0.0;
    }
    let mut hi = 1e-15;
    while ok(hi) {
        hi *= 4.0;
    }
    let mut lo = 0.0;
    while hi - lo > rel_tol * hi {
        let mid = lo + 0.5 * (hi - lo);
        if ok(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}
