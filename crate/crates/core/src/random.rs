//! Seeded random states, unitaries and observables.
//!
//! Everything draws from a caller-supplied [`Rng`] so results are a pure
//! function of the seed. [`rng`] gives the canonical generator (ChaCha8).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::Result;
use crate::linalg::{l2_norm, ComplexMatrix, DensityMatrix, HermitianMatrix, PureState, C64, ZERO};

pub type StdRng = ChaCha8Rng;

pub fn rng(seed: u64) -> StdRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Standard complex Gaussian with `E|z|² = 1`.
pub fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

fn gaussian_vec<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<C64> {
    (0..n).map(|_| complex_normal(rng)).collect()
}

/// Haar-random pure state.
pub fn haar_state<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> PureState {
    loop {
        // A zero draw has probability zero; retry rather than panic.
        if let Ok(s) = PureState::normalized(gaussian_vec(dim, rng)) {
            return s;
        }
    }
}

/// Square Ginibre matrix with unit-variance complex Gaussian entries.
pub fn ginibre<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    let entries = gaussian_vec(dim * dim, rng);
    ComplexMatrix::from_fn(dim, |i, j| entries[i * dim + j])
}

/// Hilbert–Schmidt random density matrix `G G† / Tr(G G†)`.
pub fn hilbert_schmidt<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Result<DensityMatrix> {
    induced(dim, dim, rng)
}

/// Random density matrix of rank at most `k`, `G G† / Tr` with `G` of shape `dim × k`
/// (the induced measure; `k = dim` is Hilbert–Schmidt).
pub fn induced<R: Rng + ?Sized>(dim: usize, k: usize, rng: &mut R) -> Result<DensityMatrix> {
    let cols: Vec<Vec<C64>> = (0..k).map(|_| gaussian_vec(dim, rng)).collect();
    let total: f64 = cols.iter().map(|c| c.iter().map(|z| z.norm_sqr()).sum::<f64>()).sum();
    let m = ComplexMatrix::from_fn(dim, |i, j| {
        cols.iter().map(|c| c[i] * c[j].conj()).sum::<C64>() / total
    });
    DensityMatrix::new(HermitianMatrix::symmetrized(m))
}

/// Haar-random unitary via Gram–Schmidt on a Ginibre matrix.
pub fn haar_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(dim);
    while cols.len() < dim {
        let mut v = gaussian_vec(dim, rng);
        // Two passes keep the columns orthonormal to machine precision.
        for _ in 0..2 {
            for q in &cols {
                let ov: C64 = q.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                v.iter_mut().zip(q).for_each(|(x, y)| *x -= ov * y);
            }
        }
        let n = l2_norm(&v);
        if n > 1e-8 {
            v.iter_mut().for_each(|x| *x /= n);
            cols.push(v);
        }
    }
    ComplexMatrix::from_fn(dim, |i, j| cols[j][i])
}

/// Random Hermitian matrix `(G + G†)/2`.
pub fn hermitian<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> HermitianMatrix {
    let g = ginibre(dim, rng);
    HermitianMatrix::symmetrized(&g + &g.adjoint())
}

/// Random Hermitian matrix rescaled to operator norm `norm`.
pub fn hermitian_with_norm<R: Rng + ?Sized>(dim: usize, norm: f64, rng: &mut R) -> Result<HermitianMatrix> {
    let h = hermitian(dim, rng);
    let n = h.operator_norm()?;
    Ok(if n > 0.0 { h.scale(norm / n) } else { h })
}

/// One Haar-random qubit per site.
pub fn product_sites<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<[C64; 2]> {
    (0..n)
        .map(|_| {
            let s = haar_state(2, rng);
            [s.amplitudes()[0], s.amplitudes()[1]]
        })
        .collect()
}

/// Tensor product of single-qubit vectors; site 0 is the most significant bit.
pub fn product_vector(sites: &[[C64; 2]]) -> Vec<C64> {
    let mut v = vec![C64::new(1.0, 0.0)];
    for s in sites {
        let mut next = vec![ZERO; v.len() * 2];
        for (i, a) in v.iter().enumerate() {
            next[2 * i] = a * s[0];
            next[2 * i + 1] = a * s[1];
        }
        v = next;
    }
    v
}

/// Haar-random product state on `n` qubits.
pub fn product_state<R: Rng + ?Sized>(n: usize, rng: &mut R) -> PureState {
    PureState::normalized(product_vector(&product_sites(n, rng))).expect("product of unit vectors")
}

/// Random mixture of product states: a separable state on `n` qubits.
pub fn separable_state<R: Rng + ?Sized>(n: usize, terms: usize, rng: &mut R) -> Result<DensityMatrix> {
    let dim = 1usize << n;
    let weights: Vec<f64> = (0..terms).map(|_| rng.random::<f64>() + 1e-3).collect();
    let total: f64 = weights.iter().sum();
    let mut m = ComplexMatrix::zeros(dim);
    for w in weights {
        let psi = product_state(n, rng);
        m = &m + &psi.projector().scale_real(w / total);
    }
    DensityMatrix::new(HermitianMatrix::symmetrized(m))
}

/// `⊗_n U_n` for independent Haar single-qubit unitaries.
pub fn local_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    let mut u = ComplexMatrix::identity(1);
    for _ in 0..n {
        u = u.kron(&haar_unitary(2, rng));
    }
    u
}
