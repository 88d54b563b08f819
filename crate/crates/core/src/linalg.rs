//! Dense complex linear algebra for qubit registers.
//!
//! Matrices are stored densely. [`HermitianMatrix`] and [`DensityMatrix`]
//! are validated wrappers around [`ComplexMatrix`]; once constructed their
//! invariants hold, so downstream routines never re-check them. A
//! [`DensityMatrix`] carries its own [`EigenSystem`], computed once at
//! construction, because almost every quantity derived from a state (QFI,
//! SLD, fidelity, purity) starts from the spectrum.
//!
//! The eigensolver is faer's self-adjoint divide-and-conquer, run
//! sequentially so results are bit-reproducible for a given input.

use std::ops::{Add, Index, IndexMut, Mul, Sub};

use faer::{Mat, MatRef, Side};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tol;

pub type C64 = Complex64;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);

/// Square `dim × dim` complex matrix.
#[derive(Clone, Debug)]
pub struct ComplexMatrix {
    inner: Mat<C64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self { inner: Mat::zeros(dim, dim) }
    }

    pub fn identity(dim: usize) -> Self {
        Self { inner: Mat::identity(dim, dim) }
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        Self { inner: Mat::from_fn(dim, dim, |i, j| f(i, j)) }
    }

    /// Builds a matrix from `dim²` entries in row-major order.
    pub fn from_row_major(dim: usize, entries: &[C64]) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidParameter("matrix dimension must be at least 1".into()));
        }
        if entries.len() != dim * dim {
            return Err(Error::Shape { expected: dim * dim, found: entries.len() });
        }
        Ok(Self::from_fn(dim, |i, j| entries[i * dim + j]))
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = C64::new(d, 0.0);
        }
        m
    }

    /// `|u⟩⟨v|`.
    pub fn outer(u: &[C64], v: &[C64]) -> Result<Self> {
        if u.len() != v.len() {
            return Err(Error::DimensionMismatch(u.len(), v.len()));
        }
        Ok(Self::from_fn(u.len(), |i, j| u[i] * v[j].conj()))
    }

    pub(crate) fn from_mat(inner: Mat<C64>) -> Self {
        debug_assert_eq!(inner.nrows(), inner.ncols());
        Self { inner }
    }

    pub(crate) fn as_mat(&self) -> MatRef<'_, C64> {
        self.inner.as_ref()
    }

    pub fn dim(&self) -> usize {
        self.inner.nrows()
    }

    /// Entries in row-major order.
    pub fn to_row_major(&self) -> Vec<C64> {
        let n = self.dim();
        let mut out = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                out.push(self.inner[(i, j)]);
            }
        }
        out
    }

    /// Column `j` as a contiguous slice.
    pub fn col(&self, j: usize) -> &[C64] {
        self.inner.col_as_slice(j)
    }

    pub fn adjoint(&self) -> Self {
        Self { inner: self.inner.adjoint().to_owned() }
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim()).map(|i| self.inner[(i, i)]).sum()
    }

    pub fn scale(&self, s: C64) -> Self {
        let n = self.dim();
        Self::from_fn(n, |i, j| self.inner[(i, j)] * s)
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(C64::new(s, 0.0))
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[C64]) -> Result<Vec<C64>> {
        let n = self.dim();
        if v.len() != n {
            return Err(Error::DimensionMismatch(n, v.len()));
        }
        let mut out = vec![ZERO; n];
        for (j, &vj) in v.iter().enumerate() {
            if vj == ZERO {
                continue;
            }
            for (i, o) in self.col(j).iter().zip(out.iter_mut()) {
                *o += *i * vj;
            }
        }
        Ok(out)
    }

    /// Largest entrywise modulus.
    pub fn max_abs(&self) -> f64 {
        let n = self.dim();
        (0..n)
            .flat_map(|j| self.col(j).iter().map(|z| z.norm()))
            .fold(0.0, f64::max)
    }

    /// Largest absolute row sum; an upper bound on the operator norm.
    pub fn inf_norm(&self) -> f64 {
        let n = self.dim();
        let mut rows = vec![0.0; n];
        for j in 0..n {
            for (r, z) in rows.iter_mut().zip(self.col(j)) {
                *r += z.norm();
            }
        }
        rows.into_iter().fold(0.0, f64::max)
    }

    /// `max_ij |A_ij - conj(A_ji)|`.
    pub fn hermitian_deviation(&self) -> f64 {
        let n = self.dim();
        let mut dev: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                dev = dev.max((self.inner[(i, j)] - self.inner[(j, i)].conj()).norm());
            }
        }
        dev
    }

    pub fn is_diagonal(&self) -> bool {
        let n = self.dim();
        (0..n).all(|j| self.col(j).iter().enumerate().all(|(i, z)| i == j || *z == ZERO))
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if self.dim() != rhs.dim() {
            return Err(Error::DimensionMismatch(self.dim(), rhs.dim()));
        }
        Ok(Self { inner: &self.inner * &rhs.inner })
    }

    /// Tensor product `self ⊗ rhs`.
    pub fn kron(&self, rhs: &Self) -> Self {
        let (a, b) = (self.dim(), rhs.dim());
        Self::from_fn(a * b, |i, j| self.inner[(i / b, j / b)] * rhs.inner[(i % b, j % b)])
    }

    /// Sum of singular values.
    pub fn trace_norm(&self) -> Result<f64> {
        let sv = self.inner.singular_values().map_err(|_| Error::NoConvergence)?;
        Ok(sv.into_iter().sum())
    }

    fn zip_with(&self, rhs: &Self, f: impl Fn(C64, C64) -> C64) -> Result<Self> {
        if self.dim() != rhs.dim() {
            return Err(Error::DimensionMismatch(self.dim(), rhs.dim()));
        }
        Ok(Self::from_fn(self.dim(), |i, j| f(self.inner[(i, j)], rhs.inner[(i, j)])))
    }

    pub fn checked_add(&self, rhs: &Self) -> Result<Self> {
        self.zip_with(rhs, |a, b| a + b)
    }

    pub fn checked_sub(&self, rhs: &Self) -> Result<Self> {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    fn index(&self, idx: (usize, usize)) -> &C64 {
        &self.inner[idx]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, idx: (usize, usize)) -> &mut C64 {
        &mut self.inner[idx]
    }
}

/// Panics on dimension mismatch; use [`ComplexMatrix::checked_add`] otherwise.
impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: Self) -> ComplexMatrix {
        self.checked_add(rhs).expect("matrix dimensions differ")
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: Self) -> ComplexMatrix {
        self.checked_sub(rhs).expect("matrix dimensions differ")
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: Self) -> ComplexMatrix {
        self.matmul(rhs).expect("matrix dimensions differ")
    }
}

/// Hermitian matrix. Construction symmetrises the input after checking it is
/// Hermitian within [`tol::HERMITIAN`].
#[derive(Clone, Debug)]
pub struct HermitianMatrix {
    m: ComplexMatrix,
}

impl HermitianMatrix {
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        let deviation = m.hermitian_deviation();
        let tolerance = tol::HERMITIAN * (1.0 + m.inf_norm());
        if deviation > tolerance {
            return Err(Error::NotHermitian { deviation, tolerance });
        }
        Ok(Self::symmetrized(m))
    }

    /// Replaces `A` by `(A + A†)/2` without validation.
    pub(crate) fn symmetrized(m: ComplexMatrix) -> Self {
        let n = m.dim();
        let mut out = m;
        for i in 0..n {
            out[(i, i)] = C64::new(out[(i, i)].re, 0.0);
            for j in (i + 1)..n {
                let avg = (out[(i, j)] + out[(j, i)].conj()) * 0.5;
                out[(i, j)] = avg;
                out[(j, i)] = avg.conj();
            }
        }
        Self { m: out }
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        Self { m: ComplexMatrix::from_real_diagonal(diag) }
    }

    pub fn identity(dim: usize) -> Self {
        Self { m: ComplexMatrix::identity(dim) }
    }

    pub fn dim(&self) -> usize {
        self.m.dim()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.m
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.m
    }

    /// Real diagonal when the matrix is diagonal.
    pub fn real_diagonal(&self) -> Option<Vec<f64>> {
        self.m.is_diagonal().then(|| (0..self.dim()).map(|i| self.m[(i, i)].re).collect())
    }

    /// `⟨v|A|v⟩` (real part; the imaginary part vanishes for Hermitian `A`).
    pub fn expectation(&self, v: &[C64]) -> Result<f64> {
        let av = self.m.apply(v)?;
        Ok(v.iter().zip(&av).map(|(a, b)| (a.conj() * b).re).sum())
    }

    pub fn eigen(&self) -> Result<EigenSystem> {
        eigendecompose(self)
    }

    pub fn operator_norm(&self) -> Result<f64> {
        operator_norm(self)
    }

    /// `Σ |λ_k|`.
    pub fn trace_norm(&self) -> Result<f64> {
        Ok(self.eigen()?.values.iter().map(|l| l.abs()).sum())
    }

    pub fn kron(&self, rhs: &Self) -> Self {
        Self { m: self.m.kron(&rhs.m) }
    }

    pub fn checked_add(&self, rhs: &Self) -> Result<Self> {
        Ok(Self { m: self.m.checked_add(&rhs.m)? })
    }

    pub fn scale(&self, s: f64) -> Self {
        Self { m: self.m.scale_real(s) }
    }

    /// `U A U†`.
    pub fn conjugate_by(&self, u: &ComplexMatrix) -> Result<Self> {
        let m = u.matmul(&self.m)?.matmul(&u.adjoint())?;
        Ok(Self::symmetrized(m))
    }
}

/// Normalised pure state vector.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    amps: Vec<C64>,
}

impl PureState {
    pub fn new(amps: Vec<C64>) -> Result<Self> {
        if amps.is_empty() {
            return Err(Error::InvalidParameter("empty state vector".into()));
        }
        let norm = l2_norm(&amps);
        if (norm - 1.0).abs() > tol::NORM {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self { amps })
    }

    /// Rescales to unit norm; fails on the zero vector.
    pub fn normalized(mut amps: Vec<C64>) -> Result<Self> {
        let norm = l2_norm(&amps);
        if amps.is_empty() || norm == 0.0 || !norm.is_finite() {
            return Err(Error::NotNormalized(norm));
        }
        amps.iter_mut().for_each(|a| *a /= norm);
        Ok(Self { amps })
    }

    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        if index >= dim {
            return Err(Error::InvalidParameter(format!("basis index {index} >= dim {dim}")));
        }
        let mut amps = vec![ZERO; dim];
        amps[index] = ONE;
        Ok(Self { amps })
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> Result<C64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch(self.dim(), other.dim()));
        }
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum())
    }

    pub fn kron(&self, rhs: &Self) -> Self {
        let amps = self
            .amps
            .iter()
            .flat_map(|a| rhs.amps.iter().map(move |b| a * b))
            .collect();
        Self { amps }
    }

    pub fn projector(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.dim(), |i, j| self.amps[i] * self.amps[j].conj())
    }

    /// Applies a unitary; the result is renormalised to absorb rounding.
    pub fn evolve(&self, u: &ComplexMatrix) -> Result<Self> {
        Self::normalized(u.apply(&self.amps)?)
    }

    pub fn to_density(&self) -> Result<DensityMatrix> {
        DensityMatrix::from_pure(self)
    }
}

pub(crate) fn l2_norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Eigenvalues in ascending order with matching orthonormal eigenvectors,
/// stored as the columns of `vectors`.
#[derive(Clone, Debug)]
pub struct EigenSystem {
    values: Vec<f64>,
    vectors: ComplexMatrix,
}

impl EigenSystem {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn vector(&self, k: usize) -> &[C64] {
        self.vectors.col(k)
    }

    pub fn vectors(&self) -> &ComplexMatrix {
        &self.vectors
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn max_value(&self) -> f64 {
        *self.values.last().expect("non-empty spectrum")
    }

    pub fn min_value(&self) -> f64 {
        self.values[0]
    }

    /// `Σ f(λ_k) |ξ_k⟩⟨ξ_k|`.
    pub fn map_spectrum(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.len();
        let v = self.vectors.as_mat();
        let scaled = Mat::from_fn(n, n, |i, j| v[(i, j)] * f(self.values[j]));
        ComplexMatrix::from_mat(&scaled * v.adjoint())
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.map_spectrum(|l| l)
    }

    /// Rows `⟨ξ_r|A|ξ_l⟩` for the requested `rows`, all `l`; shape `rows.len() × n`.
    pub(crate) fn transform_rows(&self, a: &HermitianMatrix, rows: &[usize]) -> Result<Mat<C64>> {
        let n = self.len();
        if a.dim() != n {
            return Err(Error::DimensionMismatch(n, a.dim()));
        }
        let v = self.vectors.as_mat();
        let av = match a.real_diagonal() {
            Some(d) => Mat::from_fn(n, n, |i, j| v[(i, j)] * d[i]),
            None => a.matrix().as_mat() * v,
        };
        let vs = Mat::from_fn(n, rows.len(), |i, r| v[(i, rows[r])]);
        Ok(vs.adjoint() * &av)
    }

    /// `⟨ξ_k|A|ξ_l⟩` for all `k, l`.
    pub(crate) fn transform(&self, a: &HermitianMatrix) -> Result<Mat<C64>> {
        let all: Vec<usize> = (0..self.len()).collect();
        self.transform_rows(a, &all)
    }
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues ascending.
///
/// Diagonal inputs are handled by a stable sort of the diagonal, so
/// degenerate diagonal entries keep their basis order.
pub fn eigendecompose(a: &HermitianMatrix) -> Result<EigenSystem> {
    let n = a.dim();
    if let Some(d) = a.real_diagonal() {
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| d[i].total_cmp(&d[j]));
        let values = order.iter().map(|&i| d[i]).collect();
        let vectors = ComplexMatrix::from_fn(n, |i, j| if i == order[j] { ONE } else { ZERO });
        return Ok(EigenSystem { values, vectors });
    }
    let m = a.matrix().as_mat();
    let blocks = coupled_blocks(m);
    if blocks.len() == 1 {
        let (values, u) = dense_eigen(m)?;
        return Ok(EigenSystem { values, vectors: ComplexMatrix::from_mat(u) });
    }
    // Direct sum: solve each coupled block on its own, then merge the spectra.
    let mut pairs: Vec<(f64, usize, usize)> = Vec::with_capacity(n);
    let mut locals = Vec::with_capacity(blocks.len());
    for (b, idx) in blocks.iter().enumerate() {
        let sub = Mat::from_fn(idx.len(), idx.len(), |i, j| m[(idx[i], idx[j])]);
        let (vals, u) = dense_eigen(sub.as_ref())?;
        pairs.extend(vals.iter().enumerate().map(|(k, &v)| (v, b, k)));
        locals.push(u);
    }
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut vectors = Mat::<C64>::zeros(n, n);
    for (col, &(_, b, k)) in pairs.iter().enumerate() {
        for (i, &row) in blocks[b].iter().enumerate() {
            vectors[(row, col)] = locals[b][(i, k)];
        }
    }
    let values = pairs.iter().map(|p| p.0).collect();
    Ok(EigenSystem { values, vectors: ComplexMatrix::from_mat(vectors) })
}

/// Index sets of the connected components of the nonzero pattern.
fn coupled_blocks(m: MatRef<'_, C64>) -> Vec<Vec<usize>> {
    let n = m.nrows();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for j in 0..n {
        for i in j + 1..n {
            if m[(i, j)] != ZERO || m[(j, i)] != ZERO {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri.max(rj)] = ri.min(rj);
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; n];
    for i in 0..n {
        let r = find(&mut parent, i);
        if slot[r] == usize::MAX {
            slot[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[slot[r]].push(i);
    }
    groups
}

/// Dense Hermitian EVD. If the solver stalls on a structured input, retry
/// once in a fixed random basis, which breaks the structure.
fn dense_eigen(m: MatRef<'_, C64>) -> Result<(Vec<f64>, Mat<C64>)> {
    let n = m.nrows();
    if n == 1 {
        return Ok((vec![m[(0, 0)].re], Mat::identity(1, 1)));
    }
    let unpack = |evd: faer::linalg::solvers::SelfAdjointEigen<C64>| {
        let s = evd.S().column_vector();
        ((0..n).map(|k| s[k].re).collect::<Vec<f64>>(), evd.U().to_owned())
    };
    if let Ok(evd) = m.self_adjoint_eigen(Side::Lower) {
        return Ok(unpack(evd));
    }
    let q = crate::random::haar_unitary(n, &mut crate::random::rng(0x5eed));
    let q = q.as_mat();
    let rotated = q.adjoint() * m * q;
    let rotated = Mat::from_fn(n, n, |i, j| (rotated[(i, j)] + rotated[(j, i)].conj()) * 0.5);
    let evd = rotated.self_adjoint_eigen(Side::Lower).map_err(|_| Error::NoConvergence)?;
    let (values, u) = unpack(evd);
    Ok((values, q * &u))
}

/// Principal square root of a PSD matrix. Eigenvalues in `[-1e-10, 0)` are
/// clamped to zero, as is rounding noise below the dimension-scaled floor.
pub fn sqrt_psd(a: &HermitianMatrix) -> Result<HermitianMatrix> {
    let eig = a.eigen()?;
    sqrt_from_eigen(&eig)
}

pub(crate) fn sqrt_from_eigen(eig: &EigenSystem) -> Result<HermitianMatrix> {
    let min = eig.min_value();
    if min < -tol::PSD_CLAMP {
        return Err(Error::NotPositive(min));
    }
    let floor = tol::noise_floor(eig.len(), eig.max_value().max(0.0));
    let root = eig.map_spectrum(|l| if l <= floor { 0.0 } else { l.sqrt() });
    Ok(HermitianMatrix::symmetrized(root))
}

/// Largest eigenvalue modulus.
pub fn operator_norm(a: &HermitianMatrix) -> Result<f64> {
    if let Some(d) = a.real_diagonal() {
        return Ok(d.iter().fold(0.0, |m, x| m.max(x.abs())));
    }
    let eig = a.eigen()?;
    Ok(eig.min_value().abs().max(eig.max_value().abs()))
}

/// Trace norm of a general square matrix (sum of singular values).
pub fn trace_norm(a: &ComplexMatrix) -> Result<f64> {
    a.trace_norm()
}

pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kron(b)
}

/// Trace-one positive-semidefinite Hermitian matrix together with its spectrum.
#[derive(Clone, Debug)]
pub struct DensityMatrix {
    h: HermitianMatrix,
    eigen: EigenSystem,
}

impl DensityMatrix {
    pub fn new(h: HermitianMatrix) -> Result<Self> {
        let tr = h.matrix().trace().re;
        if (tr - 1.0).abs() > tol::TRACE {
            return Err(Error::InvalidTrace(tr));
        }
        let eigen = h.eigen()?;
        if eigen.min_value() < -tol::PSD_CLAMP {
            return Err(Error::NotPositive(eigen.min_value()));
        }
        Ok(Self { h, eigen })
    }

    pub fn from_matrix(m: ComplexMatrix) -> Result<Self> {
        Self::new(HermitianMatrix::new(m)?)
    }

    pub fn from_pure(psi: &PureState) -> Result<Self> {
        Self::new(HermitianMatrix::symmetrized(psi.projector()))
    }

    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        Self::new(HermitianMatrix::identity(dim).scale(1.0 / dim as f64))
    }

    /// `w ρ + (1 - w) σ`.
    pub fn mixture(w: f64, rho: &Self, sigma: &Self) -> Result<Self> {
        if !(0.0..=1.0).contains(&w) {
            return Err(Error::InvalidParameter(format!("mixing weight {w} outside [0, 1]")));
        }
        let m = rho.matrix().scale_real(w).checked_add(&sigma.matrix().scale_real(1.0 - w))?;
        Self::new(HermitianMatrix::symmetrized(m))
    }

    pub fn dim(&self) -> usize {
        self.h.dim()
    }

    /// Number of qubits when the dimension is a power of two.
    pub fn qubit_count(&self) -> Option<usize> {
        qubits_for_dim(self.dim())
    }

    pub fn hermitian(&self) -> &HermitianMatrix {
        &self.h
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        self.h.matrix()
    }

    pub fn eigen(&self) -> &EigenSystem {
        &self.eigen
    }

    /// Eigenvalues clamped at zero.
    pub fn spectrum(&self) -> Vec<f64> {
        self.eigen.values.iter().map(|l| l.max(0.0)).collect()
    }

    pub fn is_pure(&self) -> bool {
        self.eigen.max_value() >= 1.0 - tol::PURITY
    }

    /// Dominant eigenvector, when the state is pure.
    pub fn as_pure(&self) -> Option<PureState> {
        self.is_pure()
            .then(|| PureState::normalized(self.eigen.vector(self.dim() - 1).to_vec()).ok())
            .flatten()
    }

    pub fn kron(&self, rhs: &Self) -> Result<Self> {
        Self::new(self.h.kron(&rhs.h))
    }

    /// `U ρ U†`.
    pub fn evolve(&self, u: &ComplexMatrix) -> Result<Self> {
        Self::new(self.h.conjugate_by(u)?)
    }
}

pub(crate) fn qubits_for_dim(dim: usize) -> Option<usize> {
    dim.is_power_of_two().then(|| dim.trailing_zeros() as usize)
}
