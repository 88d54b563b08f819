//! Quantum Fisher information under unitary encoding `e^{-iφH}`.
//!
//! The QFI does not depend on φ, so no encoded state is ever formed; every
//! route works from the spectrum of ρ and the matrix of `H` in its eigenbasis.
//!
//! Three independent routes are provided and cross-checked in tests:
//! the spectral sum ([`qfi_eigen`]), `Tr(ρL²)` with the symmetric logarithmic
//! derivative ([`sld`]), and the variance of `H ⊗ 𝟙 + 𝟙 ⊗ h_E` on the canonical
//! purification with the optimal environment generator ([`qfi_purification`]).

use faer::Mat;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, DensityMatrix, EigenSystem, HermitianMatrix, PureState, C64, ZERO};
use crate::random;
use crate::tol;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum QfiMethod {
    Eigendecomposition,
    Sld,
    Purification,
    PureVariance,
    ConvexRoofSample,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct QfiResult {
    pub value: f64,
    pub method: QfiMethod,
    pub rank_tolerance: f64,
}

fn check_dims(rho: &DensityMatrix, h: &HermitianMatrix) -> Result<()> {
    if rho.dim() != h.dim() {
        return Err(Error::DimensionMismatch(rho.dim(), h.dim()));
    }
    Ok(())
}

/// Clamped spectrum and the absolute pair cutoff `RANK · max λ`.
fn spectrum_and_cutoff(eig: &EigenSystem) -> (Vec<f64>, f64) {
    let lam: Vec<f64> = eig.values().iter().map(|l| l.max(0.0)).collect();
    let max = lam.iter().copied().fold(0.0, f64::max);
    (lam, tol::RANK * max)
}

/// `2 Σ_{k,l} (λ_k - λ_l)²/(λ_k + λ_l) |⟨ξ_k|H|ξ_l⟩|²`, dropping pairs below the rank cutoff.
pub fn qfi_eigen(rho: &DensityMatrix, h: &HermitianMatrix) -> Result<QfiResult> {
    check_dims(rho, h)?;
    let eig = rho.eigen();
    let (lam, cutoff) = spectrum_and_cutoff(eig);
    // A pair survives only if one member is at least cutoff/2, so only those
    // rows of V†HV are needed — one row for a pure state.
    let rows: Vec<usize> = (0..lam.len()).filter(|&k| lam[k] >= cutoff / 2.0).collect();
    let mut in_rows = vec![false; lam.len()];
    rows.iter().for_each(|&k| in_rows[k] = true);
    let b = eig.transform_rows(h, &rows)?;
    let mut sum = 0.0;
    for (r, &k) in rows.iter().enumerate() {
        for (l, &ll) in lam.iter().enumerate() {
            let s = lam[k] + ll;
            if s < cutoff || s == 0.0 {
                continue;
            }
            // Pairs with both ends in `rows` are visited twice, the rest once.
            let w = if in_rows[l] { 1.0 } else { 2.0 };
            let d = lam[k] - ll;
            sum += w * d * d / s * b[(r, l)].norm_sqr();
        }
    }
    Ok(QfiResult { value: 2.0 * sum, method: QfiMethod::Eigendecomposition, rank_tolerance: cutoff })
}

/// `4 (⟨H²⟩ - ⟨H⟩²)`, evaluated as `4‖(H - ⟨H⟩)ψ‖²`.
pub fn qfi_pure(psi: &PureState, h: &HermitianMatrix) -> Result<QfiResult> {
    let v = variance(psi.amplitudes(), h)?;
    Ok(QfiResult { value: 4.0 * v, method: QfiMethod::PureVariance, rank_tolerance: 0.0 })
}

fn variance(psi: &[C64], h: &HermitianMatrix) -> Result<f64> {
    let hpsi = h.matrix().apply(psi)?;
    let mean: f64 = psi.iter().zip(&hpsi).map(|(a, b)| (a.conj() * b).re).sum();
    Ok(hpsi.iter().zip(psi).map(|(hp, p)| (hp - p * mean).norm_sqr()).sum())
}

/// Symmetric logarithmic derivative of `ρ_φ = e^{-iφH} ρ e^{iφH}` at φ = 0,
/// together with the state and generator it was built from.
#[derive(Clone, Debug)]
pub struct Sld<'a> {
    l: HermitianMatrix,
    rho: &'a DensityMatrix,
    h: &'a HermitianMatrix,
}

impl<'a> Sld<'a> {
    pub fn operator(&self) -> &HermitianMatrix {
        &self.l
    }

    /// `Tr(ρ L²)`, computed in the computational basis.
    pub fn fisher_information(&self) -> Result<QfiResult> {
        let rl = self.rho.matrix().matmul(self.l.matrix())?;
        let n = self.l.dim();
        let mut tr = ZERO;
        for i in 0..n {
            for j in 0..n {
                tr += rl[(i, j)] * self.l.matrix()[(j, i)];
            }
        }
        let cutoff = tol::RANK * self.rho.eigen().max_value().max(0.0);
        Ok(QfiResult { value: tr.re, method: QfiMethod::Sld, rank_tolerance: cutoff })
    }

    /// Operator norm of `(Lρ + ρL)/2 + i[H, ρ]`, which vanishes for the exact SLD.
    pub fn lyapunov_residual(&self) -> Result<f64> {
        let rho = self.rho.matrix();
        let l = self.l.matrix();
        let h = self.h.matrix();
        let anti = (&(l * rho) + &(rho * l)).scale_real(0.5);
        let comm = (&(h * rho) - &(rho * h)).scale(C64::new(0.0, 1.0));
        HermitianMatrix::symmetrized(&anti + &comm).operator_norm()
    }
}

/// `L = Σ 2i(λ_k - λ_l)/(λ_k + λ_l) ⟨ξ_k|H|ξ_l⟩ |ξ_k⟩⟨ξ_l|` over pairs above the rank cutoff.
pub fn sld<'a>(rho: &'a DensityMatrix, h: &'a HermitianMatrix) -> Result<Sld<'a>> {
    check_dims(rho, h)?;
    let eig = rho.eigen();
    let (lam, cutoff) = spectrum_and_cutoff(eig);
    let hk = eig.transform(h)?;
    let n = lam.len();
    let lk = Mat::from_fn(n, n, |k, l| {
        let s = lam[k] + lam[l];
        if s < cutoff || s == 0.0 {
            ZERO
        } else {
            C64::new(0.0, 2.0 * (lam[k] - lam[l]) / s) * hk[(k, l)]
        }
    });
    let v = eig.vectors().as_mat();
    let full = v * &lk * v.adjoint();
    Ok(Sld { l: HermitianMatrix::symmetrized(ComplexMatrix::from_mat(full)), rho, h })
}

/// Support of ρ: eigenvalue indices with `λ ≥ RANK · max λ`.
fn support(lam: &[f64], cutoff: f64) -> Vec<usize> {
    (0..lam.len()).filter(|&k| lam[k] >= cutoff && lam[k] > 0.0).collect()
}

/// Environment generator minimising the purification variance:
/// `h_ij = -2√(λ_iλ_j)/(λ_i + λ_j) ⟨ξ_j|H|ξ_i⟩` on the support of ρ.
pub fn optimal_env_hamiltonian(rho: &DensityMatrix, h: &HermitianMatrix) -> Result<HermitianMatrix> {
    check_dims(rho, h)?;
    let eig = rho.eigen();
    let (lam, cutoff) = spectrum_and_cutoff(eig);
    let s = support(&lam, cutoff);
    let hs = eig.transform_rows(h, &s)?;
    let r = s.len();
    let m = ComplexMatrix::from_fn(r, |i, j| {
        let (li, lj) = (lam[s[i]], lam[s[j]]);
        hs[(j, s[i])] * (-2.0 * (li * lj).sqrt() / (li + lj))
    });
    Ok(HermitianMatrix::symmetrized(m))
}

/// `4 ⟨ψ|(H ⊗ 𝟙 + 𝟙 ⊗ h_E)²|ψ⟩` on `ψ = Σ √λ_i |ξ_i⟩|i⟩` with the optimal `h_E`.
pub fn qfi_purification(rho: &DensityMatrix, h: &HermitianMatrix) -> Result<QfiResult> {
    let he = optimal_env_hamiltonian(rho, h)?;
    let eig = rho.eigen();
    let (lam, cutoff) = spectrum_and_cutoff(eig);
    let s = support(&lam, cutoff);
    let n = rho.dim();
    let v = eig.vectors();
    // ψ as an n × r matrix; (H ⊗ 𝟙 + 𝟙 ⊗ h_E)ψ becomes Hψ + ψ h_Eᵀ.
    let psi = Mat::from_fn(n, s.len(), |i, c| v[(i, s[c])] * lam[s[c]].sqrt());
    let hpsi = h.matrix().as_mat() * &psi;
    let w = &hpsi + &psi * he.matrix().as_mat().transpose();
    let value = 4.0 * w.norm_l2().powi(2);
    Ok(QfiResult { value, method: QfiMethod::Purification, rank_tolerance: cutoff })
}

/// Sampled convex-roof upper bound `min Σ_k p_k 4 Var(H, ψ_k)` with the default
/// environment dimension `2 · rank ρ`.
pub fn convex_roof_upper_bound(rho: &DensityMatrix, h: &HermitianMatrix, samples: usize, seed: u64) -> Result<f64> {
    let trace = convex_roof_trace(rho, h, samples, seed, None)?;
    Ok(*trace.last().expect("samples >= 1"))
}

/// Running minimum of the sampled convex roof after each sample.
///
/// Sample 0 is the eigen-ensemble. Sample `s > 0` takes the ensemble
/// `ψ̃_k = Σ_i U_ki √λ_i ξ_i` from the first `rank` columns of a Haar unitary
/// of size `env_dim`. Samples are drawn sequentially from one seeded stream,
/// so a longer run extends a shorter one.
pub fn convex_roof_trace(
    rho: &DensityMatrix,
    h: &HermitianMatrix,
    samples: usize,
    seed: u64,
    env_dim: Option<usize>,
) -> Result<Vec<f64>> {
    check_dims(rho, h)?;
    if samples == 0 {
        return Err(Error::InvalidParameter("convex roof needs at least one sample".into()));
    }
    let eig = rho.eigen();
    let (lam, cutoff) = spectrum_and_cutoff(eig);
    let s = support(&lam, cutoff);
    let r = s.len();
    let k_dim = env_dim.unwrap_or(2 * r);
    if k_dim < r {
        return Err(Error::InvalidParameter(format!("environment dimension {k_dim} below rank {r}")));
    }
    let sq: Vec<f64> = s.iter().map(|&i| lam[i].sqrt()).collect();
    let hs = eig.transform_rows(h, &s)?;
    // A_ij = √λ_i ⟨ξ_i|H|ξ_j⟩ √λ_j on the support.
    let a = Mat::from_fn(r, r, |i, j| hs[(i, s[j])] * (sq[i] * sq[j]));
    // Tr(ρH²) = Σ_i λ_i ‖Hξ_i‖², and ‖Hξ_i‖² = Σ_l |⟨ξ_l|H|ξ_i⟩|².
    let tr_rho_h2: f64 = (0..r)
        .map(|i| lam[s[i]] * (0..rho.dim()).map(|l| hs[(i, l)].norm_sqr()).sum::<f64>())
        .sum();

    let ensemble_value = |u: &dyn Fn(usize, usize) -> C64| -> f64 {
        let mut explained = 0.0;
        for k in 0..k_dim {
            let p: f64 = (0..r).map(|i| u(k, i).norm_sqr() * lam[s[i]]).sum();
            if p <= 0.0 {
                continue;
            }
            let mut m = ZERO;
            for i in 0..r {
                let ui = u(k, i).conj();
                if ui == ZERO {
                    continue;
                }
                for j in 0..r {
                    m += ui * a[(i, j)] * u(k, j);
                }
            }
            explained += m.re * m.re / p;
        }
        (4.0 * (tr_rho_h2 - explained)).max(0.0)
    };

    let mut out = Vec::with_capacity(samples);
    let eigen_ensemble = ensemble_value(&|k, i| if k == i { C64::new(1.0, 0.0) } else { ZERO });
    out.push(eigen_ensemble);
    let mut best = eigen_ensemble;
    let mut rng = random::rng(seed);
    for _ in 1..samples {
        let u = random::haar_unitary(k_dim, &mut rng);
        best = best.min(ensemble_value(&|k, i| u[(k, i)]));
        out.push(best);
    }
    Ok(out)
}

/// Cramér–Rao bound `1/(ν F_Q)`; infinite when the QFI vanishes.
pub fn qcrb(qfi: f64, nu: u64) -> Result<f64> {
    if nu == 0 {
        return Err(Error::InvalidParameter("number of repetitions must be at least 1".into()));
    }
    if !(qfi.is_finite() && qfi >= 0.0) {
        return Err(Error::InvalidParameter(format!("QFI {qfi} must be finite and non-negative")));
    }
    if qfi == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(1.0 / (nu as f64 * qfi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{build_state, local_hamiltonian, pure_vector, DenseCap, StateFamilySpec};
    use approx::assert_relative_eq;

    fn sz2() -> HermitianMatrix {
        HermitianMatrix::from_real_diagonal(&[0.5, -0.5])
    }

    #[test]
    fn maximally_mixed_has_zero_qfi() {
        let mut rng = random::rng(1);
        let rho = DensityMatrix::maximally_mixed(8).unwrap();
        let h = random::hermitian(8, &mut rng);
        assert_eq!(qfi_eigen(&rho, &h).unwrap().value, 0.0);
        assert!(qfi_purification(&rho, &h).unwrap().value.abs() < 1e-12);
    }

    #[test]
    fn ghz3_is_nine() {
        let cap = DenseCap::default();
        let rho = build_state(&StateFamilySpec::ghz(), 3, cap).unwrap();
        let h = local_hamiltonian(3, cap).unwrap();
        assert_relative_eq!(qfi_eigen(&rho, &h).unwrap().value, 9.0, max_relative = 1e-12);
    }

    #[test]
    fn rank_two_qubit_eigen_matches_purification() {
        let mut rng = random::rng(9);
        for _ in 0..20 {
            let rho = random::hilbert_schmidt(2, &mut rng).unwrap();
            let a = qfi_eigen(&rho, &sz2()).unwrap().value;
            let b = qfi_purification(&rho, &sz2()).unwrap().value;
            assert!((a - b).abs() <= 1e-10 * (1.0 + a));
        }
    }

    #[test]
    fn pure_variance_examples() {
        let cap = DenseCap::default();
        let zero = PureState::basis(8, 0).unwrap();
        let h = local_hamiltonian(3, cap).unwrap();
        assert_eq!(qfi_pure(&zero, &h).unwrap().value, 0.0);
        let psi = pure_vector(&StateFamilySpec::non_max(0.3).unwrap(), 5, cap).unwrap();
        let h5 = local_hamiltonian(5, cap).unwrap();
        assert_relative_eq!(qfi_pure(&psi, &h5).unwrap().value, 4.0 * 0.3 * 0.7 * 25.0, max_relative = 1e-13);
    }

    #[test]
    fn pure_variance_agrees_with_projector() {
        let mut rng = random::rng(17);
        let psi = random::haar_state(8, &mut rng);
        let h = random::hermitian(8, &mut rng);
        let a = qfi_pure(&psi, &h).unwrap().value;
        let b = qfi_eigen(&psi.to_density().unwrap(), &h).unwrap().value;
        assert!((a - b).abs() <= 1e-10 * (1.0 + a));
    }

    #[test]
    fn sld_vanishes_for_commuting_state() {
        let rho = DensityMatrix::new(HermitianMatrix::from_real_diagonal(&[0.7, 0.3])).unwrap();
        let h = sz2();
        let l = sld(&rho, &h).unwrap();
        assert_eq!(l.operator().matrix().max_abs(), 0.0);
    }

    #[test]
    fn sld_ghz2_gives_four() {
        let cap = DenseCap::default();
        let rho = build_state(&StateFamilySpec::ghz(), 2, cap).unwrap();
        let h = local_hamiltonian(2, cap).unwrap();
        let l = sld(&rho, &h).unwrap();
        assert_relative_eq!(l.fisher_information().unwrap().value, 4.0, max_relative = 1e-12);
        assert!(l.lyapunov_residual().unwrap() < 1e-12);
    }

    #[test]
    fn sld_residual_random_two_qubit() {
        let mut rng = random::rng(23);
        for _ in 0..10 {
            let rho = random::hilbert_schmidt(4, &mut rng).unwrap();
            let h = random::hermitian(4, &mut rng);
            assert!(sld(&rho, &h).unwrap().lyapunov_residual().unwrap() <= 1e-8);
        }
    }

    #[test]
    fn env_hamiltonian_examples() {
        let mut rng = random::rng(31);
        let psi = random::haar_state(4, &mut rng);
        let h = random::hermitian(4, &mut rng);
        let he = optimal_env_hamiltonian(&psi.to_density().unwrap(), &h).unwrap();
        assert_eq!(he.dim(), 1);
        assert!((he.matrix()[(0, 0)].re + h.expectation(psi.amplitudes()).unwrap()).abs() < 1e-12);

        let mixed = DensityMatrix::maximally_mixed(2).unwrap();
        let he = optimal_env_hamiltonian(&mixed, &sz2()).unwrap();
        assert_eq!(he.real_diagonal().unwrap(), vec![-0.5, 0.5]);
        assert_eq!(he.operator_norm().unwrap(), 0.5);
    }

    #[test]
    fn convex_roof_examples() {
        let mut rng = random::rng(5);
        let psi = random::haar_state(4, &mut rng);
        let h = random::hermitian(4, &mut rng);
        let pure = psi.to_density().unwrap();
        let exact = qfi_pure(&psi, &h).unwrap().value;
        for seed in 0..3 {
            let v = convex_roof_upper_bound(&pure, &h, 20, seed).unwrap();
            assert!((v - exact).abs() <= 1e-10 * (1.0 + exact));
        }

        let rho = random::hilbert_schmidt(4, &mut rng).unwrap();
        let eig = rho.eigen();
        let eigen_avg: f64 = (0..4)
            .map(|k| eig.values()[k].max(0.0) * 4.0 * variance(eig.vector(k), &h).unwrap())
            .sum();
        let v = convex_roof_upper_bound(&rho, &h, 1, 0).unwrap();
        assert!((v - eigen_avg).abs() <= 1e-10 * (1.0 + eigen_avg));
    }

    #[test]
    fn qcrb_values() {
        assert_relative_eq!(qcrb(100.0, 1).unwrap(), 0.01);
        assert_relative_eq!(qcrb(10.0, 10).unwrap(), 0.01);
        assert_eq!(qcrb(0.0, 1).unwrap(), f64::INFINITY);
        assert!(qcrb(1.0, 0).is_err());
        assert!(qcrb(-1.0, 1).is_err());
    }
}
