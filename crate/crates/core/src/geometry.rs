//! Uhlmann fidelity, Bures and trace distances, and the Fuchs–van de Graaf chain
//! `1 - F ≤ T ≤ √(1 - F²) ≤ D_B ≤ √(2T)`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{sqrt_from_eigen, DensityMatrix, HermitianMatrix, PureState};
use crate::tol;

fn check_dims(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<()> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch(rho.dim(), sigma.dim()));
    }
    Ok(())
}

/// `F(ρ, σ) = ‖√ρ √σ‖₁`, clamped to `[0, 1]`; values within the
/// noise floor of one are returned as exactly one.
pub fn fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    check_dims(rho, sigma)?;
    let rr = sqrt_from_eigen(rho.eigen())?;
    let rs = sqrt_from_eigen(sigma.eigen())?;
    // Singular values carry absolute error ~ε; the eigenvalues of √σρ√σ would
    // need a square root, turning ε into √ε.
    let f = match rr.matrix().matmul(rs.matrix())?.trace_norm() {
        Ok(f) => f,
        Err(Error::NoConvergence) => fidelity_via_eigen(rho, &rs)?,
        Err(e) => return Err(e),
    };
    // Rounding just below one would surface as √ε in D_B; snap it.
    if 1.0 - f <= tol::noise_floor(rho.dim(), 1.0) {
        return Ok(1.0);
    }
    Ok(f.clamp(0.0, 1.0))
}

fn fidelity_via_eigen(rho: &DensityMatrix, rs: &HermitianMatrix) -> Result<f64> {
    let inner = rs.matrix().matmul(rho.matrix())?.matmul(rs.matrix())?;
    let eig = HermitianMatrix::symmetrized(inner).eigen()?;
    let min = eig.min_value();
    if min < -tol::PSD_CLAMP {
        return Err(Error::NotPositive(min));
    }
    Ok(eig.values().iter().map(|l| l.max(0.0).sqrt()).sum())
}

pub fn fidelity_pure(rho: &DensityMatrix, phi: &PureState) -> Result<f64> {
    if rho.dim() != phi.dim() {
        return Err(Error::DimensionMismatch(rho.dim(), phi.dim()));
    }
    let e = rho.hermitian().expectation(phi.amplitudes())?;
    Ok(e.max(0.0).sqrt().min(1.0))
}

/// `|⟨ψ|φ⟩|`.
pub fn fidelity_pure_pure(psi: &PureState, phi: &PureState) -> Result<f64> {
    Ok(psi.inner(phi)?.norm().min(1.0))
}

pub fn bures_from_fidelity(f: f64) -> f64 {
    (2.0 * (1.0 - f)).max(0.0).sqrt()
}

/// `D_B = √(2(1 - F))`.
pub fn bures(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    Ok(bures_from_fidelity(fidelity(rho, sigma)?))
}

/// `T = ‖ρ - σ‖₁ / 2`.
pub fn trace_distance(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    check_dims(rho, sigma)?;
    let diff = HermitianMatrix::symmetrized(rho.matrix().checked_sub(sigma.matrix())?);
    Ok(0.5 * diff.trace_norm()?)
}

/// Residuals of each link in the distance chain; all are non-negative in exact arithmetic.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ChainSlacks {
    /// `T - (1 - F)`.
    pub fvdg_lower: f64,
    /// `√(1 - F²) - T`.
    pub fvdg_upper: f64,
    /// `D_B - √(1 - F²)`.
    pub bures_lower: f64,
    /// `√(2T) - D_B`.
    pub bures_upper: f64,
}

impl ChainSlacks {
    pub fn from_distances(f: f64, t: f64) -> Self {
        let root = (1.0 - f * f).max(0.0).sqrt();
        let db = bures_from_fidelity(f);
        Self {
            fvdg_lower: t - (1.0 - f),
            fvdg_upper: root - t,
            bures_lower: db - root,
            bures_upper: (2.0 * t).sqrt() - db,
        }
    }

    pub fn min(&self) -> f64 {
        self.fvdg_lower.min(self.fvdg_upper).min(self.bures_lower).min(self.bures_upper)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DistanceReport {
    pub fidelity: f64,
    pub bures: f64,
    pub trace: f64,
    pub chain_slacks: ChainSlacks,
}

impl DistanceReport {
    /// `√(1 - F²)`.
    pub fn fidelity_root(&self) -> f64 {
        (1.0 - self.fidelity * self.fidelity).max(0.0).sqrt()
    }
}

/// All three distances plus the chain residuals; a residual below
/// `-CHAIN_SLACK` is reported as a numerical fault.
pub fn distance_report(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<DistanceReport> {
    let f = fidelity(rho, sigma)?;
    let t = trace_distance(rho, sigma)?;
    let chain_slacks = ChainSlacks::from_distances(f, t);
    if chain_slacks.min() < -tol::CHAIN_SLACK {
        return Err(Error::Numerical(format!("distance chain violated: {chain_slacks:?}")));
    }
    Ok(DistanceReport { fidelity: f, bures: bures_from_fidelity(f), trace: t, chain_slacks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{build_state, DenseCap, StateFamilySpec};
    use crate::random;
    use approx::assert_abs_diff_eq;

    #[test]
    fn identical_states() {
        let mut rng = random::rng(1);
        let rho = random::hilbert_schmidt(4, &mut rng).unwrap();
        let r = distance_report(&rho, &rho).unwrap();
        assert_abs_diff_eq!(r.fidelity, 1.0, epsilon = 1e-12);
        assert!(r.trace < 1e-14);
        assert!(r.bures < 1e-6);
    }

    #[test]
    fn orthogonal_pure_states() {
        let a = PureState::basis(2, 0).unwrap().to_density().unwrap();
        let b = PureState::basis(2, 1).unwrap().to_density().unwrap();
        assert_eq!(fidelity(&a, &b).unwrap(), 0.0);
        assert_abs_diff_eq!(bures(&a, &b).unwrap(), 2f64.sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(trace_distance(&a, &b).unwrap(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn pure_fast_path_agrees() {
        let mut rng = random::rng(2);
        for _ in 0..20 {
            let rho = random::hilbert_schmidt(8, &mut rng).unwrap();
            let phi = random::haar_state(8, &mut rng);
            let slow = fidelity(&rho, &phi.to_density().unwrap()).unwrap();
            let slow_rev = fidelity(&phi.to_density().unwrap(), &rho).unwrap();
            let fast = fidelity_pure(&rho, &phi).unwrap();
            assert_abs_diff_eq!(slow, fast, epsilon = 1e-9);
            assert_abs_diff_eq!(slow_rev, fast, epsilon = 1e-9);
        }
    }

    #[test]
    fn bures_identity() {
        let mut rng = random::rng(3);
        let rho = random::hilbert_schmidt(4, &mut rng).unwrap();
        let sigma = random::hilbert_schmidt(4, &mut rng).unwrap();
        let f = fidelity(&rho, &sigma).unwrap();
        let db = bures(&rho, &sigma).unwrap();
        assert_abs_diff_eq!((1.0 - f * f).sqrt(), db * ((1.0 + f) / 2.0).sqrt(), epsilon = 1e-12);
    }

    #[test]
    fn trace_distance_of_pure_pair() {
        let mut rng = random::rng(4);
        let psi = random::haar_state(4, &mut rng);
        let phi = random::haar_state(4, &mut rng);
        let f = fidelity_pure_pure(&psi, &phi).unwrap();
        let t = trace_distance(&psi.to_density().unwrap(), &phi.to_density().unwrap()).unwrap();
        assert_abs_diff_eq!(t, (1.0 - f * f).sqrt(), epsilon = 1e-12);
    }

    #[test]
    fn qubit_trace_distance_from_eigenvalues() {
        let mut rng = random::rng(5);
        let rho = random::hilbert_schmidt(2, &mut rng).unwrap();
        let sigma = random::hilbert_schmidt(2, &mut rng).unwrap();
        // For a traceless 2×2 Hermitian difference the eigenvalues are ±√(-det).
        let d = rho.matrix() - sigma.matrix();
        let det = d[(0, 0)] * d[(1, 1)] - d[(0, 1)] * d[(1, 0)];
        let expected = (-det.re).sqrt();
        assert_abs_diff_eq!(trace_distance(&rho, &sigma).unwrap(), expected, epsilon = 1e-13);
    }

    #[test]
    fn ghz_vs_werner_chain() {
        let cap = DenseCap::default();
        let a = build_state(&StateFamilySpec::ghz(), 3, cap).unwrap();
        let b = build_state(&StateFamilySpec::werner(0.5).unwrap(), 3, cap).unwrap();
        let r = distance_report(&a, &b).unwrap();
        assert!(r.chain_slacks.min() >= 0.0);
        // F = √⟨GHZ|ρ_p|GHZ⟩ = √(p + (1-p)/8).
        assert_abs_diff_eq!(r.fidelity, (0.5f64 + 0.5 / 8.0).sqrt(), epsilon = 1e-12);
    }

    #[test]
    fn dimension_mismatch() {
        let a = DensityMatrix::maximally_mixed(2).unwrap();
        let b = DensityMatrix::maximally_mixed(4).unwrap();
        assert!(matches!(fidelity(&a, &b), Err(Error::DimensionMismatch(2, 4))));
        assert!(trace_distance(&a, &b).is_err());
    }
}
