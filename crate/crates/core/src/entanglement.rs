//! Geometric measure of entanglement and producibility quantities.
//!
//! Pure states: `E_G = 1 - max_φ |⟨φ_1 ⊗ … ⊗ φ_N|ψ⟩|²`, found by alternating
//! single-site updates (the higher-order power method for a rank-one tensor
//! approximation) from Haar-random starts.
//!
//! GHZ–white-noise mixtures: a one-dimensional maximisation over `μ` of a
//! closed-form objective, plus the error estimate of that objective against
//! `p/2`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::families::{genuine_threshold, pow2_neg};
use crate::linalg::{qubits_for_dim, PureState, C64};
use crate::optimize::grid_golden_max;
use crate::random::{self, product_vector};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GmeOptions {
    pub restarts: usize,
    pub seed: u64,
    /// Stop once a sweep improves the overlap by less than this.
    pub tolerance: f64,
    pub max_sweeps: usize,
}

impl Default for GmeOptions {
    fn default() -> Self {
        Self { restarts: 32, seed: 0, tolerance: 1e-12, max_sweeps: 10_000 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GmeResult {
    pub value: f64,
    /// `|⟨φ|ψ⟩|` for the reported product state.
    pub overlap: f64,
    /// One unit vector per qubit, site 0 first.
    pub product_state: Vec<[C64; 2]>,
    pub restarts_used: usize,
    /// Index of the restart that produced the reported optimum.
    pub best_restart: usize,
    pub converged: bool,
    pub sweeps: usize,
}

/// Outcome of one alternating-optimisation run.
#[derive(Clone, Debug)]
pub struct SweepTrace {
    pub sites: Vec<[C64; 2]>,
    /// Overlap `|⟨φ|ψ⟩|` after each full sweep.
    pub history: Vec<f64>,
    pub converged: bool,
}

/// Contracts `psi` with `conj(φ_m)` for every site `m ≠ site`, leaving a 2-vector.
fn contract_except(psi: &[C64], sites: &[[C64; 2]], site: usize) -> [C64; 2] {
    let n = sites.len();
    let mut t: Vec<C64> = psi.to_vec();
    // Trailing sites are the least significant bits.
    for m in (site + 1..n).rev() {
        let (a, b) = (sites[m][0].conj(), sites[m][1].conj());
        t = t.chunks_exact(2).map(|c| a * c[0] + b * c[1]).collect();
    }
    // Leading sites are now the most significant bits of what remains.
    for m in 0..site {
        let (a, b) = (sites[m][0].conj(), sites[m][1].conj());
        let half = t.len() / 2;
        t = (0..half).map(|i| a * t[i] + b * t[half + i]).collect();
    }
    [t[0], t[1]]
}

fn overlap(psi: &[C64], sites: &[[C64; 2]]) -> f64 {
    product_vector(sites).iter().zip(psi).map(|(a, b)| a.conj() * b).sum::<C64>().norm()
}

/// Alternating optimisation from `start`. Each single-site update replaces
/// `φ_n` by the normalised contraction of ψ with the other sites, which can
/// only increase the overlap.
pub fn alternating_overlap(
    psi: &PureState,
    start: Vec<[C64; 2]>,
    tolerance: f64,
    max_sweeps: usize,
) -> Result<SweepTrace> {
    let n = qubits_for_dim(psi.dim()).ok_or(Error::NotPowerOfTwo(psi.dim()))?;
    if start.len() != n {
        return Err(Error::DimensionMismatch(n, start.len()));
    }
    let amps = psi.amplitudes();
    let mut sites = start;
    let mut history = Vec::new();
    let mut prev = overlap(amps, &sites);
    let mut converged = false;
    for _ in 0..max_sweeps {
        let mut ov = prev;
        for s in 0..n {
            let v = contract_except(amps, &sites, s);
            let norm = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
            if norm == 0.0 {
                // ψ is orthogonal to every choice at this site; keep φ_s.
                ov = 0.0;
                continue;
            }
            sites[s] = [v[0] / norm, v[1] / norm];
            ov = norm;
        }
        history.push(ov);
        if (ov - prev).abs() < tolerance {
            converged = true;
            break;
        }
        prev = ov;
    }
    Ok(SweepTrace { sites, history, converged })
}

/// Geometric measure of a pure qubit state with the default options and the given restarts and seed.
pub fn gme_pure(psi: &PureState, restarts: usize, seed: u64) -> Result<GmeResult> {
    gme_pure_with(psi, &GmeOptions { restarts, seed, ..GmeOptions::default() })
}

pub fn gme_pure_with(psi: &PureState, opts: &GmeOptions) -> Result<GmeResult> {
    let n = qubits_for_dim(psi.dim()).ok_or(Error::NotPowerOfTwo(psi.dim()))?;
    if opts.restarts == 0 {
        return Err(Error::InvalidParameter("at least one restart is required".into()));
    }
    let mut rng = random::rng(opts.seed);
    let mut best: Option<(usize, f64, SweepTrace)> = None;
    for r in 0..opts.restarts {
        let start = random::product_sites(n, &mut rng);
        let trace = alternating_overlap(psi, start, opts.tolerance, opts.max_sweeps)?;
        let ov = overlap(psi.amplitudes(), &trace.sites);
        if best.as_ref().map_or(true, |(_, b, _)| ov > *b) {
            best = Some((r, ov, trace));
        }
    }
    let (best_restart, ov, trace) = best.expect("restarts >= 1");
    let ov = ov.min(1.0);
    Ok(GmeResult {
        value: (1.0 - ov * ov).max(0.0),
        overlap: ov,
        sweeps: trace.history.len(),
        converged: trace.converged,
        product_state: trace.sites,
        restarts_used: opts.restarts,
        best_restart,
    })
}

fn check_werner_n(n: usize) -> Result<()> {
    if n < 3 {
        return Err(Error::Unsupported(format!(
            "the white-noise GHZ objective needs N >= 3 (got {n}); its search endpoint is undefined at N = 2"
        )));
    }
    Ok(())
}

/// Upper end `2^{N-3}/(2^{N-2} - 1)` of the μ search interval.
pub fn werner_mu_m(n: usize) -> Result<f64> {
    check_werner_n(n)?;
    Ok(0.5 / (1.0 - 4.0 * pow2_neg(n)))
}

/// Search interval end actually used: `μ_m` kept away from the pole at 1.
pub fn werner_mu_limit(n: usize) -> Result<f64> {
    Ok(werner_mu_m(n)?.min(1.0 - 1e-9))
}

/// `f(μ) = ½[1 - μ - √γ + 2pμ + (1-p)/2^N (2μ + μ(μ + √α)/(μ - 1))]`,
/// `γ = (μ-1)² + 2^{3-N}μ`, `α = 1 - μ + μ²`.
pub fn werner_gme_objective(n: usize, p: f64, mu: f64) -> Result<f64> {
    check_werner_n(n)?;
    if !(0.0..1.0).contains(&mu) {
        return Err(Error::Domain(format!("mu = {mu} must lie in [0, 1)")));
    }
    Ok(objective(n, p, mu))
}

fn objective(n: usize, p: f64, mu: f64) -> f64 {
    let gamma = (mu - 1.0) * (mu - 1.0) + 8.0 * pow2_neg(n) * mu;
    let alpha = 1.0 - mu + mu * mu;
    let noise = (1.0 - p) * pow2_neg(n) * (2.0 * mu + mu * (mu + alpha.sqrt()) / (mu - 1.0));
    0.5 * (1.0 - mu - gamma.sqrt() + 2.0 * p * mu + noise)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct WernerGmeCurvePoint {
    pub n: usize,
    pub p: f64,
    pub mu_star: f64,
    pub value: f64,
    pub mu_m: f64,
    /// Error estimate against `p/2`; defined for `N ≥ 4`.
    pub gap_bound: Option<f64>,
}

/// Grid resolution and bracket width of the μ maximisation.
pub const WERNER_GRID: usize = 2048;
pub const WERNER_BRACKET: f64 = 1e-12;

/// `E_G` of `p|GHZ⟩⟨GHZ| + (1-p)𝟙/2^N` as the maximum of the objective on `[0, μ_m]`.
pub fn gme_werner(n: usize, p: f64) -> Result<WernerGmeCurvePoint> {
    check_werner_n(n)?;
    if !(p.is_finite() && (0.0..=1.0).contains(&p)) {
        return Err(Error::InvalidParameter(format!("p = {p} outside [0, 1]")));
    }
    let mu_m = werner_mu_m(n)?;
    let hi = werner_mu_limit(n)?;
    let (mu_star, value) = grid_golden_max(|mu| objective(n, p, mu), 0.0, hi, WERNER_GRID, WERNER_BRACKET);
    let gap_bound = if n >= 4 { Some(werner_gme_gap_bound(n)?) } else { None };
    Ok(WernerGmeCurvePoint { n, p, mu_star, value: value.max(0.0), mu_m, gap_bound })
}

/// `E_G` on a `p` grid at fixed `N`.
pub fn werner_curve(n: usize, ps: &[f64]) -> Result<Vec<WernerGmeCurvePoint>> {
    ps.iter().map(|&p| gme_werner(n, p)).collect()
}

/// `4/3 + 2(2 + √7)/3`.
pub fn werner_beta() -> f64 {
    4.0 / 3.0 + 2.0 * (2.0 + 7f64.sqrt()) / 3.0
}

/// `d + √d/2 + β/2^N` with `d = 1/(2^{N-2} - 1)`.
pub fn werner_gme_gap_bound(n: usize) -> Result<f64> {
    if n < 4 {
        return Err(Error::Unsupported(format!("gap estimate holds for N >= 4 (got {n})")));
    }
    let q = 4.0 * pow2_neg(n);
    let d = q / (1.0 - q);
    Ok(d + 0.5 * d.sqrt() + werner_beta() * pow2_neg(n))
}

/// `((F_Q - kN)/(6N²))²` when `F_Q > kN`, else 0.
pub fn ek_prod_lower_bound(qfi: f64, n: usize, k: usize) -> Result<f64> {
    check_nk(n, k)?;
    if !(qfi.is_finite() && qfi >= 0.0) {
        return Err(Error::InvalidParameter(format!("QFI {qfi} must be finite and non-negative")));
    }
    let (nf, kf) = (n as f64, k as f64);
    let excess = qfi - kf * nf;
    if excess <= 0.0 {
        return Ok(0.0);
    }
    let r = excess / (6.0 * nf * nf);
    Ok(r * r)
}

pub(crate) fn check_nk(n: usize, k: usize) -> Result<()> {
    if n == 0 || k == 0 || k > n {
        return Err(Error::InvalidParameter(format!("need 1 <= k <= N, got k = {k}, N = {n}")));
    }
    Ok(())
}

/// Mixing weight above which the white-noise GHZ state is genuinely N-partite
/// entangled: `(2^{N-1} - 1)/(2^N - 1)`.
pub fn werner_genuine_threshold(n: usize) -> f64 {
    genuine_threshold(n)
}

/// The product of the given single-qubit vectors as a [`PureState`].
pub fn product_state(sites: &[[C64; 2]]) -> Result<PureState> {
    PureState::normalized(product_vector(sites))
}
