//! QFI continuity relations, producibility and entanglement caps, and audits
//! that evaluate every applicable inequality on concrete states.
//!
//! Continuity relations bound `|F_Q[ρ] - F_Q[σ]|` by a constant times a
//! distance term times `‖H‖²` (or `N²` for collective local Hamiltonians with
//! `‖h^{(n)}‖ ≤ 1/2`). Constants: 32 in general, 24 when one state is pure;
//! for two pure states also `12‖ψ - φ‖₁`. Local forms use 8 and 6.

use std::fmt;

use serde::Serialize;

use crate::entanglement::{check_nk, ek_prod_lower_bound, gme_werner};
use crate::error::{Error, Result};
use crate::families::{
    analytic_gme, analytic_qfi, build_state, local_hamiltonian, r_leb, AnalyticValue, DenseCap, Exactness,
    FamilyKind, StateFamilySpec,
};
use crate::geometry::{distance_report, DistanceReport};
use crate::linalg::{DensityMatrix, HermitianMatrix};
use crate::qfi::qfi_eigen;
use crate::tol;

/// Distance term multiplying the continuity constant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DistanceTerm {
    /// `√(1 - F²)`.
    FidelityRoot,
    /// `D_B = √(2(1 - F))`.
    Bures,
    /// `√‖ρ - σ‖₁ = √(2T)`.
    TraceRoot,
    /// `‖ψ - φ‖₁ = 2T`; only for two pure states.
    TraceNorm,
}

impl DistanceTerm {
    pub const ALL: [DistanceTerm; 4] =
        [DistanceTerm::FidelityRoot, DistanceTerm::Bures, DistanceTerm::TraceRoot, DistanceTerm::TraceNorm];

    pub fn evaluate(self, d: &DistanceReport) -> f64 {
        match self {
            DistanceTerm::FidelityRoot => d.fidelity_root(),
            DistanceTerm::Bures => d.bures,
            DistanceTerm::TraceRoot => (2.0 * d.trace).sqrt(),
            DistanceTerm::TraceNorm => 2.0 * d.trace,
        }
    }

    fn name(self) -> &'static str {
        match self {
            DistanceTerm::FidelityRoot => "fidelity-root",
            DistanceTerm::Bures => "bures",
            DistanceTerm::TraceRoot => "trace-root",
            DistanceTerm::TraceNorm => "trace-norm",
        }
    }
}

/// Which arguments the continuity relation may assume pure.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PurityCase {
    General,
    OnePure,
    BothPure,
}

impl PurityCase {
    pub fn of(rho: &DensityMatrix, sigma: &DensityMatrix) -> Self {
        match (rho.is_pure(), sigma.is_pure()) {
            (true, true) => PurityCase::BothPure,
            (false, false) => PurityCase::General,
            _ => PurityCase::OnePure,
        }
    }

    fn admits(self, actual: PurityCase) -> bool {
        match self {
            PurityCase::General => true,
            PurityCase::OnePure => actual != PurityCase::General,
            PurityCase::BothPure => actual == PurityCase::BothPure,
        }
    }

    fn name(self) -> &'static str {
        match self {
            PurityCase::General => "general",
            PurityCase::OnePure => "one-pure",
            PurityCase::BothPure => "both-pure",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ContinuityVariant {
    pub metric: DistanceTerm,
    pub purity: PurityCase,
}

impl ContinuityVariant {
    pub fn new(metric: DistanceTerm, purity: PurityCase) -> Result<Self> {
        if metric == DistanceTerm::TraceNorm && purity != PurityCase::BothPure {
            return Err(Error::InvalidParameter("the trace-norm form needs two pure states".into()));
        }
        Ok(Self { metric, purity })
    }

    /// Every valid variant.
    pub fn all() -> Vec<Self> {
        let mut out = Vec::new();
        for purity in [PurityCase::General, PurityCase::OnePure, PurityCase::BothPure] {
            for metric in DistanceTerm::ALL {
                if let Ok(v) = Self::new(metric, purity) {
                    out.push(v);
                }
            }
        }
        out
    }

    /// Constant of the `‖H‖²` form.
    pub fn constant(&self) -> f64 {
        match (self.metric, self.purity) {
            (DistanceTerm::TraceNorm, _) => 12.0,
            (_, PurityCase::General) => 32.0,
            _ => 24.0,
        }
    }

    /// Constant of the `N²` form for collective local Hamiltonians, if one exists.
    pub fn local_constant(&self) -> Option<f64> {
        match (self.metric, self.purity) {
            (DistanceTerm::TraceNorm, _) => None,
            (_, PurityCase::General) => Some(8.0),
            _ => Some(6.0),
        }
    }
}

impl fmt::Display for ContinuityVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.metric.name(), self.purity.name())
    }
}

/// A fixed variant, or the tightest one the inputs admit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VariantChoice {
    Auto,
    Fixed(ContinuityVariant),
}

fn check_purity(rho: &DensityMatrix, sigma: &DensityMatrix, v: ContinuityVariant) -> Result<PurityCase> {
    let actual = PurityCase::of(rho, sigma);
    if !v.purity.admits(actual) {
        let top = rho.eigen().max_value().min(sigma.eigen().max_value());
        return Err(Error::PurityMismatch(top));
    }
    Ok(actual)
}

fn select(
    actual: PurityCase,
    choice: VariantChoice,
    d: &DistanceReport,
    local: bool,
) -> Result<(ContinuityVariant, f64)> {
    let value = |v: ContinuityVariant| -> Option<f64> {
        let c = if local { v.local_constant()? } else { v.constant() };
        Some(c * v.metric.evaluate(d))
    };
    match choice {
        VariantChoice::Fixed(v) => {
            let c = value(v).ok_or_else(|| Error::Unsupported(format!("{v} has no local form")))?;
            Ok((v, c))
        }
        VariantChoice::Auto => ContinuityVariant::all()
            .into_iter()
            .filter(|v| v.purity.admits(actual))
            .filter_map(|v| value(v).map(|c| (v, c)))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .ok_or_else(|| Error::Unsupported("no applicable continuity variant".into())),
    }
}

/// `ξ · term · ‖H‖²`. The purity assumed by a fixed variant must hold for the inputs.
pub fn continuity_bound(
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    h: &HermitianMatrix,
    choice: VariantChoice,
) -> Result<f64> {
    Ok(continuity_bound_detailed(rho, sigma, h, choice)?.1)
}

pub fn continuity_bound_detailed(
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    h: &HermitianMatrix,
    choice: VariantChoice,
) -> Result<(ContinuityVariant, f64)> {
    if let VariantChoice::Fixed(v) = choice {
        check_purity(rho, sigma, v)?;
    }
    let d = distance_report(rho, sigma)?;
    let hn = h.operator_norm()?;
    let (v, b) = select(PurityCase::of(rho, sigma), choice, &d, false)?;
    Ok((v, b * hn * hn))
}

/// `ξ · term · N²` with `ξ ∈ {8, 6}`, valid for `H = Σ_n h^{(n)}` with `‖h^{(n)}‖ ≤ 1/2`.
pub fn continuity_bound_local(
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    n: usize,
    choice: VariantChoice,
) -> Result<f64> {
    if let VariantChoice::Fixed(v) = choice {
        check_purity(rho, sigma, v)?;
    }
    let d = distance_report(rho, sigma)?;
    let (_, b) = select(PurityCase::of(rho, sigma), choice, &d, true)?;
    Ok(b * (n * n) as f64)
}

/// Whether `6√(2T)N² < N²`, i.e. whether every state within trace distance `t`
/// of GHZ keeps `F_Q ≥ (1 - 6√(2t))N²`, a positive fraction of `N²`.
/// True exactly when `t < 1/72`.
pub fn ghz_neighbourhood_keeps_heisenberg(t: f64) -> bool {
    6.0 * (2.0 * t).sqrt() < 1.0
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct KprodCap {
    /// `⌊N/k⌋k² + (N - ⌊N/k⌋k)²`.
    pub floor_form: f64,
    /// `kN`.
    pub relaxed: f64,
    /// `R_LEB · N²` with `R_LEB = k/N`; equal to `kN`.
    pub r_leb_form: f64,
}

/// QFI cap for k-producible states under a collective `σ_z/2` Hamiltonian.
pub fn kprod_qfi_cap(n: usize, k: usize) -> Result<KprodCap> {
    check_nk(n, k)?;
    let q = (n / k) as f64;
    let r = (n % k) as f64;
    let (nf, kf) = (n as f64, k as f64);
    Ok(KprodCap { floor_form: q * kf * kf + r * r, relaxed: kf * nf, r_leb_form: kf / nf * nf * nf })
}

/// `kN + 6√(E_k) N²`.
pub fn gme_qfi_cap(n: usize, k: usize, ek: f64) -> Result<f64> {
    check_nk(n, k)?;
    if !(0.0..=1.0).contains(&ek) {
        return Err(Error::InvalidParameter(format!("E_k = {ek} outside [0, 1]")));
    }
    let nf = n as f64;
    Ok(k as f64 * nf + 6.0 * ek.sqrt() * nf * nf)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum CheckStatus {
    Pass,
    Fail,
    NotApplicable,
}

/// One inequality `lhs ≤ bound`, with `slack = bound - lhs`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundCheck {
    pub name: String,
    pub lhs: f64,
    pub bound: f64,
    pub slack: f64,
    pub status: CheckStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl BoundCheck {
    /// Fails only when the slack is below `-AUDIT_SLACK_PER_N2 · N²`.
    pub fn evaluate(name: impl Into<String>, lhs: f64, bound: f64, n: usize) -> Self {
        let slack = bound - lhs;
        let allowed = tol::AUDIT_SLACK_PER_N2 * (n * n).max(1) as f64;
        let status = if slack.is_nan() || slack < -allowed { CheckStatus::Fail } else { CheckStatus::Pass };
        Self { name: name.into(), lhs, bound, slack, status, note: None }
    }

    pub fn not_applicable(name: impl Into<String>, note: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            lhs: f64::NAN,
            bound: f64::NAN,
            slack: f64::NAN,
            status: CheckStatus::NotApplicable,
            note: Some(note.into()),
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn failed(&self) -> bool {
        self.status == CheckStatus::Fail
    }
}

/// All continuity relations evaluated on one pair of states.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PairAudit {
    pub n: Option<usize>,
    pub qfi_rho: f64,
    pub qfi_sigma: f64,
    pub qfi_difference: f64,
    pub distances: DistanceReport,
    pub purity: PurityCase,
    pub operator_norm: f64,
    pub checks: Vec<BoundCheck>,
    pub pass: bool,
}

/// Evaluates every continuity variant admitted by the inputs. With `local_n`
/// set, `H` must satisfy `‖H‖ ≤ N/2` and the `N²` forms are checked as well.
pub fn audit_pair(
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    h: &HermitianMatrix,
    local_n: Option<usize>,
) -> Result<PairAudit> {
    let qr = qfi_eigen(rho, h)?.value;
    let qs = qfi_eigen(sigma, h)?.value;
    let diff = (qr - qs).abs();
    let d = distance_report(rho, sigma)?;
    let hn = h.operator_norm()?;
    let purity = PurityCase::of(rho, sigma);
    let scale_n = local_n.unwrap_or_else(|| (2.0 * hn).ceil() as usize);
    if let Some(n) = local_n {
        if hn > n as f64 / 2.0 * (1.0 + 1e-12) {
            return Err(Error::InvalidParameter(format!("‖H‖ = {hn} exceeds N/2 = {}", n as f64 / 2.0)));
        }
    }
    let mut checks = Vec::new();
    for v in ContinuityVariant::all() {
        if !v.purity.admits(purity) {
            continue;
        }
        let term = v.metric.evaluate(&d);
        checks.push(BoundCheck::evaluate(format!("continuity {v}"), diff, v.constant() * term * hn * hn, scale_n));
        if let (Some(n), Some(c)) = (local_n, v.local_constant()) {
            checks.push(BoundCheck::evaluate(
                format!("continuity-local {v}"),
                diff,
                c * term * (n * n) as f64,
                n,
            ));
        }
    }
    let pass = !checks.iter().any(BoundCheck::failed);
    Ok(PairAudit {
        n: local_n,
        qfi_rho: qr,
        qfi_sigma: qs,
        qfi_difference: diff,
        distances: d,
        purity,
        operator_norm: hn,
        checks,
        pass,
    })
}

/// QFI, entanglement quantifiers and every applicable cap for one family member.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AuditReport {
    pub spec: StateFamilySpec,
    pub n: usize,
    pub k: usize,
    pub qfi: f64,
    pub qfi_analytic: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub qfi_dense: Option<f64>,
    pub e_g: AnalyticValue,
    pub e_g_source: &'static str,
    pub r_leb: AnalyticValue,
    pub checks: Vec<BoundCheck>,
    pub pass: bool,
}

/// Audits a family member. Uses the dense QFI when `2^N` fits the cap and the
/// closed form otherwise. `E_G` is the closed form, except for white-noise GHZ
/// states with `N ≥ 3`, where the exact μ-maximisation replaces the `p/2` bound.
pub fn audit_state(spec: &StateFamilySpec, n: usize, k: usize, cap: DenseCap) -> Result<AuditReport> {
    check_nk(n, k)?;
    let qfi_analytic = analytic_qfi(spec, n)?;
    let qfi_dense = if cap.allows(n) {
        let rho = build_state(spec, n, cap)?;
        Some(qfi_eigen(&rho, &local_hamiltonian(n, cap)?)?.value)
    } else {
        None
    };
    let qfi = qfi_dense.unwrap_or(qfi_analytic);

    let (e_g, e_g_source) = match spec.kind() {
        FamilyKind::WernerGhz if n >= 3 && spec.p().unwrap_or(0.0) > 0.0 => {
            let pt = gme_werner(n, spec.p().expect("werner carries p"))?;
            (AnalyticValue::exact(pt.value), "mu-maximisation")
        }
        _ => (analytic_gme(spec, n)?, "closed-form"),
    };
    let r = r_leb(spec, n)?;
    let nf = n as f64;
    let n2 = nf * nf;

    let mut checks = Vec::new();
    if let Some(dense) = qfi_dense {
        let tol = 1e-8 * (1.0 + qfi_analytic);
        checks.push(
            BoundCheck::evaluate("qfi dense vs closed form", (dense - qfi_analytic).abs(), tol, 1)
                .with_note("relative tolerance 1e-8"),
        );
    }
    checks.push(BoundCheck::evaluate("heisenberg cap", qfi, n2, n));

    let leb = (r.value * nf).round() as usize;
    let kp = kprod_qfi_cap(n, k)?;
    if leb <= k {
        let note = match r.exactness {
            Exactness::Exact => "largest entangled block is at most k",
            Exactness::UpperBound => "largest entangled block bounded above by k",
        };
        checks.push(BoundCheck::evaluate("k-producible cap", qfi, kp.floor_form, n).with_note(note));
        checks.push(BoundCheck::evaluate("k-producible relaxed cap", qfi, kp.relaxed, n).with_note(note));
    } else {
        let why = format!("entangled block of size {leb} exceeds k = {k}");
        checks.push(BoundCheck::not_applicable("k-producible cap", why.clone()));
        checks.push(BoundCheck::not_applicable("k-producible relaxed cap", why));
    }

    let eg_note = match e_g.exactness {
        Exactness::Exact => "exact E_G",
        Exactness::UpperBound => "upper bound on E_G; the check is correspondingly weaker",
    };
    checks.push(BoundCheck::evaluate("gme cap (k=1)", qfi, gme_qfi_cap(n, 1, e_g.value)?, n).with_note(eg_note));
    if k > 1 {
        // E_k ≤ E_1, so the E_1 value gives a valid (looser) k-block cap.
        checks.push(
            BoundCheck::evaluate(format!("gme cap (k={k})"), qfi, gme_qfi_cap(n, k, e_g.value)?, n)
                .with_note("E_1 used as an upper bound on E_k"),
        );
    }
    let lower = ek_prod_lower_bound(qfi.max(0.0), n, 1)?;
    checks.push(BoundCheck::evaluate("gme lower bound from qfi", lower, e_g.value, n).with_note(eg_note));

    let pass = !checks.iter().any(BoundCheck::failed);
    Ok(AuditReport { spec: *spec, n, k, qfi, qfi_analytic, qfi_dense, e_g, e_g_source, r_leb: r, checks, pass })
}
