//! GHZ-type state families, the collective `σ_z/2` Hamiltonian, and their
//! closed-form QFI, geometric measure and relative entangled-block size.
//!
//! Dense constructors are limited by a [`DenseCap`]; the closed forms work for
//! any `N` (they are what makes million-qubit sweeps free).

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, DensityMatrix, HermitianMatrix, PureState, C64, ZERO};

/// Largest register dimension that dense routines will build.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DenseCap {
    pub max_dim: usize,
}

impl DenseCap {
    pub const DEFAULT_MAX_DIM: usize = 1 << 12;

    pub fn new(max_dim: usize) -> Self {
        Self { max_dim }
    }

    pub fn allows(&self, n: usize) -> bool {
        n < usize::BITS as usize && (1usize << n) <= self.max_dim
    }

    /// Dimension `2^n`, or a capacity error.
    pub fn check(&self, n: usize) -> Result<usize> {
        if self.allows(n) {
            Ok(1usize << n)
        } else {
            Err(Error::Capacity { qubits: n, cap: self.max_dim })
        }
    }
}

impl Default for DenseCap {
    fn default() -> Self {
        Self::new(Self::DEFAULT_MAX_DIM)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyKind {
    Ghz,
    NonMaxEntangled,
    TailoredPure,
    WernerGhz,
    TailoredWerner,
    ProductZero,
    MaximallyMixed,
}

impl FamilyKind {
    pub const ALL: [FamilyKind; 7] = [
        FamilyKind::Ghz,
        FamilyKind::NonMaxEntangled,
        FamilyKind::TailoredPure,
        FamilyKind::WernerGhz,
        FamilyKind::TailoredWerner,
        FamilyKind::ProductZero,
        FamilyKind::MaximallyMixed,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FamilyKind::Ghz => "ghz",
            FamilyKind::NonMaxEntangled => "non-max",
            FamilyKind::TailoredPure => "tailored-pure",
            FamilyKind::WernerGhz => "werner",
            FamilyKind::TailoredWerner => "tailored-werner",
            FamilyKind::ProductZero => "product",
            FamilyKind::MaximallyMixed => "maximally-mixed",
        }
    }

    pub fn is_pure(self) -> bool {
        matches!(
            self,
            FamilyKind::Ghz | FamilyKind::NonMaxEntangled | FamilyKind::TailoredPure | FamilyKind::ProductZero
        )
    }

    pub fn takes_p(self) -> bool {
        matches!(
            self,
            FamilyKind::NonMaxEntangled | FamilyKind::TailoredPure | FamilyKind::WernerGhz | FamilyKind::TailoredWerner
        )
    }

    pub fn takes_l(self) -> bool {
        matches!(self, FamilyKind::TailoredPure | FamilyKind::TailoredWerner)
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FamilyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let k = match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "ghz" => FamilyKind::Ghz,
            "non-max" | "nonmax" | "non-max-entangled" => FamilyKind::NonMaxEntangled,
            "tailored-pure" | "tailored" => FamilyKind::TailoredPure,
            "werner" | "werner-ghz" => FamilyKind::WernerGhz,
            "tailored-werner" => FamilyKind::TailoredWerner,
            "product" | "product-zero" => FamilyKind::ProductZero,
            "maximally-mixed" | "mixed" => FamilyKind::MaximallyMixed,
            other => return Err(Error::InvalidParameter(format!("unknown family '{other}'"))),
        };
        Ok(k)
    }
}

/// A member of one of the state families. `p` and `l` are present exactly
/// when the kind uses them.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct StateFamilySpec {
    kind: FamilyKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    p: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    l: Option<usize>,
}

fn check_p(p: f64) -> Result<f64> {
    if p.is_finite() && (0.0..=1.0).contains(&p) {
        Ok(p)
    } else {
        Err(Error::InvalidParameter(format!("p = {p} outside [0, 1]")))
    }
}

fn check_l(l: usize) -> Result<usize> {
    if l >= 1 {
        Ok(l)
    } else {
        Err(Error::InvalidParameter("block size l must be at least 1".into()))
    }
}

// |ψ_p⟩ and |ψ_{1-p}⟩ differ by a bit flip, so every quantity here is symmetric.
fn fold_pure_p(p: f64) -> f64 {
    if p > 0.5 {
        1.0 - p
    } else {
        p
    }
}

impl StateFamilySpec {
    pub fn ghz() -> Self {
        Self { kind: FamilyKind::Ghz, p: None, l: None }
    }

    /// `√p|0…0⟩ + √(1-p)|1…1⟩`; `p > 1/2` is folded to `1 - p`.
    pub fn non_max(p: f64) -> Result<Self> {
        Ok(Self { kind: FamilyKind::NonMaxEntangled, p: Some(fold_pure_p(check_p(p)?)), l: None })
    }

    /// `|ψ_p^l⟩ ⊗ |0⟩^{N-l}`; `p > 1/2` is folded to `1 - p`.
    pub fn tailored_pure(p: f64, l: usize) -> Result<Self> {
        Ok(Self { kind: FamilyKind::TailoredPure, p: Some(fold_pure_p(check_p(p)?)), l: Some(check_l(l)?) })
    }

    /// `p |GHZ⟩⟨GHZ| + (1-p) 𝟙/2^N`.
    pub fn werner(p: f64) -> Result<Self> {
        Ok(Self { kind: FamilyKind::WernerGhz, p: Some(check_p(p)?), l: None })
    }

    /// `p |GHZ_l, 0…0⟩⟨GHZ_l, 0…0| + (1-p) 𝟙/2^N`.
    pub fn tailored_werner(p: f64, l: usize) -> Result<Self> {
        Ok(Self { kind: FamilyKind::TailoredWerner, p: Some(check_p(p)?), l: Some(check_l(l)?) })
    }

    pub fn product_zero() -> Self {
        Self { kind: FamilyKind::ProductZero, p: None, l: None }
    }

    pub fn maximally_mixed() -> Self {
        Self { kind: FamilyKind::MaximallyMixed, p: None, l: None }
    }

    /// Generic constructor; `p` and `l` must be given exactly when the kind uses them.
    pub fn from_parts(kind: FamilyKind, p: Option<f64>, l: Option<usize>) -> Result<Self> {
        let need = |name: &str| Error::InvalidParameter(format!("family {kind} requires {name}"));
        let extra = |name: &str| Error::InvalidParameter(format!("family {kind} does not take {name}"));
        if !kind.takes_p() && p.is_some() {
            return Err(extra("p"));
        }
        if !kind.takes_l() && l.is_some() {
            return Err(extra("l"));
        }
        match kind {
            FamilyKind::Ghz => Ok(Self::ghz()),
            FamilyKind::ProductZero => Ok(Self::product_zero()),
            FamilyKind::MaximallyMixed => Ok(Self::maximally_mixed()),
            FamilyKind::NonMaxEntangled => Self::non_max(p.ok_or_else(|| need("p"))?),
            FamilyKind::WernerGhz => Self::werner(p.ok_or_else(|| need("p"))?),
            FamilyKind::TailoredPure => {
                Self::tailored_pure(p.ok_or_else(|| need("p"))?, l.ok_or_else(|| need("l"))?)
            }
            FamilyKind::TailoredWerner => {
                Self::tailored_werner(p.ok_or_else(|| need("p"))?, l.ok_or_else(|| need("l"))?)
            }
        }
    }

    pub fn kind(&self) -> FamilyKind {
        self.kind
    }

    pub fn p(&self) -> Option<f64> {
        self.p
    }

    pub fn l(&self) -> Option<usize> {
        self.l
    }

    /// Weight of the entangled component: 1/2 for GHZ and the Werner kinds' inner GHZ.
    fn pure_weight(&self) -> f64 {
        match self.kind {
            FamilyKind::NonMaxEntangled | FamilyKind::TailoredPure => self.p.unwrap_or(0.5),
            _ => 0.5,
        }
    }

    /// Size of the block carrying the GHZ-type component.
    pub fn block(&self, n: usize) -> Result<usize> {
        if n == 0 {
            return Err(Error::InvalidParameter("N must be at least 1".into()));
        }
        match self.l {
            Some(l) if l > n => Err(Error::InvalidParameter(format!("block size l = {l} exceeds N = {n}"))),
            Some(l) => Ok(l),
            None => Ok(n),
        }
    }
}

impl fmt::Display for StateFamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind)?;
        if let Some(p) = self.p {
            write!(f, "(p={p}")?;
            if let Some(l) = self.l {
                write!(f, ", l={l}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

/// Whether a closed-form value is exact or only an upper bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Exactness {
    Exact,
    UpperBound,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AnalyticValue {
    pub value: f64,
    pub exactness: Exactness,
}

impl AnalyticValue {
    pub fn exact(value: f64) -> Self {
        Self { value, exactness: Exactness::Exact }
    }

    pub fn upper(value: f64) -> Self {
        Self { value, exactness: Exactness::UpperBound }
    }

    pub fn is_exact(&self) -> bool {
        self.exactness == Exactness::Exact
    }
}

/// `2^{-k}` without overflow for large `k`.
pub(crate) fn pow2_neg(k: usize) -> f64 {
    if k > 1100 {
        0.0
    } else {
        0.5f64.powi(k as i32)
    }
}

/// Amplitudes of the pure family members (GHZ, ψ_p, ψ_{p,l}, |0…0⟩).
pub fn pure_vector(spec: &StateFamilySpec, n: usize, cap: DenseCap) -> Result<PureState> {
    let dim = cap.check(n)?;
    let l = spec.block(n)?;
    let mut amps = vec![ZERO; dim];
    match spec.kind {
        FamilyKind::ProductZero => amps[0] = C64::new(1.0, 0.0),
        FamilyKind::Ghz | FamilyKind::NonMaxEntangled | FamilyKind::TailoredPure => {
            let p = spec.pure_weight();
            // The first l qubits (most significant bits) are all ones.
            let ones = ((1usize << l) - 1) << (n - l);
            amps[0] += C64::new(p.sqrt(), 0.0);
            amps[ones] += C64::new((1.0 - p).sqrt(), 0.0);
        }
        _ => return Err(Error::Unsupported(format!("family {} is mixed", spec.kind))),
    }
    PureState::normalized(amps)
}

/// Dense density matrix of a family member on `n` qubits.
pub fn build_state(spec: &StateFamilySpec, n: usize, cap: DenseCap) -> Result<DensityMatrix> {
    let dim = cap.check(n)?;
    spec.block(n)?;
    match spec.kind {
        FamilyKind::MaximallyMixed => DensityMatrix::maximally_mixed(dim),
        FamilyKind::WernerGhz | FamilyKind::TailoredWerner => {
            let p = spec.p.expect("werner kinds carry p");
            let ghz = pure_vector(&StateFamilySpec::tailored_pure(0.5, spec.block(n)?)?, n, cap)?;
            let noise = (1.0 - p) / dim as f64;
            let mut m = ghz.projector().scale_real(p);
            for i in 0..dim {
                m[(i, i)] += noise;
            }
            DensityMatrix::new(HermitianMatrix::new(m)?)
        }
        _ => pure_vector(spec, n, cap)?.to_density(),
    }
}

/// Diagonal of `Σ_n σ_z^{(n)}/2`: entry `b` is `(N - 2·popcount(b))/2`.
pub fn local_hamiltonian_diagonal(n: usize, cap: DenseCap) -> Result<Vec<f64>> {
    let dim = cap.check(n)?;
    Ok((0..dim).map(|b: usize| (n as f64 - 2.0 * b.count_ones() as f64) / 2.0).collect())
}

pub fn local_hamiltonian(n: usize, cap: DenseCap) -> Result<HermitianMatrix> {
    Ok(HermitianMatrix::from_real_diagonal(&local_hamiltonian_diagonal(n, cap)?))
}

/// Single-site generator `σ_z/2` embedded at `site` (site 0 is the most significant qubit).
pub fn site_operator(single: &ComplexMatrix, site: usize, n: usize) -> ComplexMatrix {
    let left = ComplexMatrix::identity(1 << site);
    let right = ComplexMatrix::identity(1 << (n - site - 1));
    left.kron(single).kron(&right)
}

/// Exact QFI under the collective `σ_z/2` Hamiltonian.
///
/// The tailored-Werner value `l²p²/[p + (1-p)/2^{N-1}]` follows from its
/// two-level spectrum: the noise eigenvalue `(1-p)/2^N` depends on `N`, not `l`.
pub fn analytic_qfi(spec: &StateFamilySpec, n: usize) -> Result<f64> {
    let l = spec.block(n)? as f64;
    let nf = n as f64;
    let v = match spec.kind {
        FamilyKind::Ghz => nf * nf,
        FamilyKind::NonMaxEntangled | FamilyKind::TailoredPure => {
            let p = spec.pure_weight();
            4.0 * p * (1.0 - p) * l * l
        }
        FamilyKind::WernerGhz | FamilyKind::TailoredWerner => {
            let p = spec.p.expect("werner kinds carry p");
            if p == 0.0 {
                0.0
            } else {
                l * l * p * p / (p + (1.0 - p) * pow2_neg(n - 1))
            }
        }
        FamilyKind::ProductZero | FamilyKind::MaximallyMixed => 0.0,
    };
    Ok(v)
}

/// Geometric measure of entanglement: exact for pure kinds, `p/2` upper bound for Werner kinds.
pub fn analytic_gme(spec: &StateFamilySpec, n: usize) -> Result<AnalyticValue> {
    let l = spec.block(n)?;
    // A one-qubit "block" is a product state.
    if l < 2 {
        return Ok(AnalyticValue::exact(0.0));
    }
    let v = match spec.kind {
        FamilyKind::Ghz => AnalyticValue::exact(0.5),
        FamilyKind::NonMaxEntangled | FamilyKind::TailoredPure => AnalyticValue::exact(spec.pure_weight()),
        FamilyKind::WernerGhz | FamilyKind::TailoredWerner => {
            let p = spec.p.expect("werner kinds carry p");
            if p == 0.0 {
                AnalyticValue::exact(0.0)
            } else {
                AnalyticValue::upper(p / 2.0)
            }
        }
        FamilyKind::ProductZero | FamilyKind::MaximallyMixed => AnalyticValue::exact(0.0),
    };
    Ok(v)
}

/// `p > (2^{N-1} - 1)/(2^N - 1)`, evaluated without cancellation.
pub(crate) fn genuine_threshold(n: usize) -> f64 {
    let t = pow2_neg(n);
    (0.5 - t) / (1.0 - t)
}

/// Largest entangled block divided by `N`.
pub fn r_leb(spec: &StateFamilySpec, n: usize) -> Result<AnalyticValue> {
    let l = spec.block(n)?;
    let nf = n as f64;
    let single = AnalyticValue::exact(1.0 / nf);
    let p = spec.p.unwrap_or(0.5);
    if l < 2 || p == 0.0 {
        return Ok(single);
    }
    let v = match spec.kind {
        FamilyKind::Ghz | FamilyKind::NonMaxEntangled => AnalyticValue::exact(1.0),
        FamilyKind::TailoredPure => AnalyticValue::exact(l as f64 / nf),
        FamilyKind::TailoredWerner => AnalyticValue::upper(l as f64 / nf),
        FamilyKind::WernerGhz => {
            if p > genuine_threshold(n) {
                AnalyticValue::exact(1.0)
            } else {
                AnalyticValue::upper(1.0)
            }
        }
        FamilyKind::ProductZero | FamilyKind::MaximallyMixed => single,
    };
    Ok(v)
}

/// Power-law schedule `p(N) = N^{-ε₁}`, `l(N) = ⌈N^{1-ε₂}⌉`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ScheduleSpec {
    pub eps1: f64,
    pub eps2: f64,
}

impl ScheduleSpec {
    pub fn new(eps1: f64, eps2: f64) -> Result<Self> {
        for (name, e) in [("eps1", eps1), ("eps2", eps2)] {
            if !(e.is_finite() && e > 0.0) {
                return Err(Error::InvalidSchedule(format!("{name} = {e} must be positive")));
            }
        }
        Ok(Self { eps1, eps2 })
    }

    /// Rejects schedules whose target exponent `2 - ε₁ - 2ε₂` is not positive.
    pub fn check_sweepable(&self) -> Result<()> {
        if self.eps1 + 2.0 * self.eps2 < 2.0 {
            Ok(())
        } else {
            Err(Error::InvalidSchedule(format!(
                "eps1 + 2 eps2 = {} must be below 2",
                self.eps1 + 2.0 * self.eps2
            )))
        }
    }

    pub fn p_at(&self, n: usize) -> f64 {
        (n as f64).powf(-self.eps1)
    }

    pub fn l_at(&self, n: usize) -> usize {
        let raw = (n as f64).powf(1.0 - self.eps2).ceil();
        (raw as usize).clamp(1, n.max(1))
    }

    /// The family member at `n`. GHZ, product and maximally mixed ignore the schedule;
    /// the untailored kinds use only `p(N)`.
    pub fn instantiate(&self, kind: FamilyKind, n: usize) -> Result<StateFamilySpec> {
        let p = self.p_at(n);
        let l = self.l_at(n);
        match kind {
            FamilyKind::TailoredPure => StateFamilySpec::tailored_pure(p, l),
            FamilyKind::TailoredWerner => StateFamilySpec::tailored_werner(p, l),
            FamilyKind::NonMaxEntangled => StateFamilySpec::non_max(p),
            FamilyKind::WernerGhz => StateFamilySpec::werner(p),
            other => StateFamilySpec::from_parts(other, None, None),
        }
    }

    /// Exponent the schedule is designed to reach: `F_Q ~ N^{target}`.
    pub fn target_exponent(&self, kind: FamilyKind) -> f64 {
        match kind {
            FamilyKind::TailoredPure | FamilyKind::TailoredWerner => 2.0 - self.eps1 - 2.0 * self.eps2,
            FamilyKind::NonMaxEntangled | FamilyKind::WernerGhz => 2.0 - self.eps1,
            FamilyKind::Ghz => 2.0,
            FamilyKind::ProductZero | FamilyKind::MaximallyMixed => 0.0,
        }
    }
}
