use qmetro::bounds::{audit_pair, audit_state, CheckStatus, PairAudit};
use qmetro::entanglement::{gme_pure, gme_werner, werner_curve};
use qmetro::families::{
    analytic_gme, analytic_qfi, build_state, local_hamiltonian, pure_vector, FamilyKind, ScheduleSpec,
    StateFamilySpec,
};
use qmetro::qfi::{qcrb, qfi_eigen, qfi_purification, sld, QfiMethod};
use qmetro::random;
use qmetro::scaling::{default_grid, fit_exponent_from, sweep, ScalingFit, DEFAULT_FIT_MIN_N};
use qmetro::DensityMatrix;
use serde::Serialize;

use crate::args::{AuditArgs, FamilyArgs, FigureArgs, Format, GmeArgs, QfiArgs, QfiRoute, ScalingArgs};
use crate::error::{CliError, EXIT_VIOLATION};
use crate::output::{emit, json_envelope, Cell, Table};
use crate::settings::{parse_list, Settings};
use crate::state_file::{self, LoadedState};

/// What a family-or-file argument group resolved to.
enum Subject {
    Family(StateFamilySpec, usize),
    File(LoadedState),
}

fn subject(s: &Settings, fa: &FamilyArgs) -> Result<Subject, CliError> {
    if let Some(path) = s.path(&fa.state, "state") {
        return Ok(Subject::File(state_file::load(&path)?));
    }
    let family: String = s
        .get(fa.family.clone(), "family")?
        .ok_or_else(|| CliError::Usage("give --family (with --n) or --state".into()))?;
    let kind: FamilyKind = family.parse()?;
    let n: usize = s.get(fa.n, "n")?.ok_or_else(|| CliError::Usage("--n is required with --family".into()))?;
    // Config values only fill parameters the family actually takes.
    let p = if kind.takes_p() { s.get(fa.p, "p")? } else { fa.p };
    let l = if kind.takes_l() { s.get(fa.l, "l")? } else { fa.l };
    let spec = StateFamilySpec::from_parts(kind, p, l)?;
    spec.block(n)?;
    Ok(Subject::Family(spec, n))
}

fn method_name(m: QfiMethod) -> &'static str {
    match m {
        QfiMethod::Eigendecomposition => "eigen",
        QfiMethod::Sld => "sld",
        QfiMethod::Purification => "purification",
        QfiMethod::PureVariance => "pure-variance",
        QfiMethod::ConvexRoofSample => "convex-roof",
    }
}

#[derive(Serialize)]
struct QfiOut {
    family: String,
    n: usize,
    p: Option<f64>,
    l: Option<usize>,
    method: &'static str,
    qfi: f64,
    analytic_qfi: Option<f64>,
    qcrb: f64,
    nu: u64,
}

fn dense_qfi(rho: &DensityMatrix, n: usize, route: QfiRoute, s: &Settings) -> Result<(f64, &'static str), CliError> {
    let h = local_hamiltonian(n, s.cap)?;
    let r = match route {
        QfiRoute::Eigen => qfi_eigen(rho, &h)?,
        QfiRoute::Sld => sld(rho, &h)?.fisher_information()?,
        QfiRoute::Purification => qfi_purification(rho, &h)?,
        QfiRoute::Analytic => unreachable!("handled by the caller"),
    };
    Ok((r.value, method_name(r.method)))
}

pub fn qfi(a: &QfiArgs, s: &Settings) -> Result<u8, CliError> {
    let route: QfiRoute = match a.method {
        Some(m) => m,
        None => match s.get::<String>(None, "method")? {
            Some(m) => clap::ValueEnum::from_str(&m, true).map_err(|_| CliError::Usage(format!("unknown method '{m}'")))?,
            None => QfiRoute::Eigen,
        },
    };
    let nu = s.get(a.nu, "nu")?.unwrap_or(1);
    let out = match subject(s, &a.family)? {
        Subject::Family(spec, n) => {
            let analytic = analytic_qfi(&spec, n)?;
            let (value, method) = if route == QfiRoute::Analytic {
                (analytic, "analytic")
            } else {
                dense_qfi(&build_state(&spec, n, s.cap)?, n, route, s)?
            };
            QfiOut {
                family: spec.kind().name().into(),
                n,
                p: spec.p(),
                l: spec.l(),
                method,
                qfi: value,
                analytic_qfi: Some(analytic),
                qcrb: qcrb(value, nu)?,
                nu,
            }
        }
        Subject::File(state) => {
            if route == QfiRoute::Analytic {
                return Err(CliError::Usage("closed forms need a --family".into()));
            }
            let n = state.qubits()?;
            if !s.cap.allows(n) {
                return Err(qmetro::Error::Capacity { qubits: n, cap: s.cap.max_dim }.into());
            }
            let (value, method) = dense_qfi(&state.density()?, n, route, s)?;
            QfiOut { family: "state-file".into(), n, p: None, l: None, method, qfi: value, analytic_qfi: None, qcrb: qcrb(value, nu)?, nu }
        }
    };
    let text = match s.format {
        Format::Json => json_envelope("qfi", s.seed, &out)?,
        Format::Csv => {
            let mut t = Table::new(&["family", "N", "p", "l", "method", "qfi", "analytic_qfi", "qcrb"]);
            t.push(vec![
                out.family.into(),
                out.n.into(),
                out.p.into(),
                out.l.into(),
                out.method.into(),
                out.qfi.into(),
                out.analytic_qfi.into(),
                out.qcrb.into(),
            ]);
            t.to_csv("qfi", s.seed)
        }
    };
    emit(s, &text)?;
    Ok(0)
}

#[derive(Serialize)]
struct GmeOut {
    family: String,
    n: usize,
    p: Option<f64>,
    l: Option<usize>,
    method: &'static str,
    e_g: f64,
    closed_form: Option<f64>,
    closed_form_exact: Option<bool>,
    overlap: Option<f64>,
    mu_star: Option<f64>,
    restarts: Option<usize>,
    converged: Option<bool>,
}

pub fn gme(a: &GmeArgs, s: &Settings) -> Result<u8, CliError> {
    let restarts = s.get(a.restarts, "restarts")?.unwrap_or(32);
    let blank = |family: String, n, p, l, method, e_g| GmeOut {
        family,
        n,
        p,
        l,
        method,
        e_g,
        closed_form: None,
        closed_form_exact: None,
        overlap: None,
        mu_star: None,
        restarts: None,
        converged: None,
    };
    let out = match subject(s, &a.family)? {
        Subject::File(LoadedState::Pure(psi)) => {
            let n = psi.dim().trailing_zeros() as usize;
            let r = gme_pure(&psi, restarts, s.seed)?;
            GmeOut {
                overlap: Some(r.overlap),
                restarts: Some(r.restarts_used),
                converged: Some(r.converged),
                ..blank("state-file".into(), n, None, None, "alternating", r.value)
            }
        }
        Subject::File(LoadedState::Mixed(_)) => {
            return Err(CliError::Usage(
                "mixed-state E_G is a convex roof; only pure state files and the built-in families are supported".into(),
            ))
        }
        Subject::Family(spec, n) => {
            let cf = analytic_gme(&spec, n)?;
            let name = spec.kind().name().to_string();
            let mut o = match spec.kind() {
                k if k.is_pure() => {
                    let r = gme_pure(&pure_vector(&spec, n, s.cap)?, restarts, s.seed)?;
                    GmeOut {
                        overlap: Some(r.overlap),
                        restarts: Some(r.restarts_used),
                        converged: Some(r.converged),
                        ..blank(name, n, spec.p(), spec.l(), "alternating", r.value)
                    }
                }
                FamilyKind::WernerGhz => {
                    let w = gme_werner(n, spec.p().expect("werner carries p"))?;
                    GmeOut { mu_star: Some(w.mu_star), ..blank(name, n, spec.p(), None, "mu-maximisation", w.value) }
                }
                _ => blank(name, n, spec.p(), spec.l(), if cf.is_exact() { "closed-form" } else { "closed-form-upper-bound" }, cf.value),
            };
            o.closed_form = Some(cf.value);
            o.closed_form_exact = Some(cf.is_exact());
            o
        }
    };
    let text = match s.format {
        Format::Json => json_envelope("gme", s.seed, &out)?,
        Format::Csv => {
            let mut t = Table::new(&[
                "family", "N", "p", "l", "method", "e_g", "closed_form", "closed_form_exact", "overlap", "mu_star",
            ]);
            t.push(vec![
                out.family.into(),
                out.n.into(),
                out.p.into(),
                out.l.into(),
                out.method.into(),
                out.e_g.into(),
                out.closed_form.into(),
                out.closed_form_exact.into(),
                out.overlap.into(),
                out.mu_star.into(),
            ]);
            t.to_csv("gme", s.seed)
        }
    };
    emit(s, &text)?;
    Ok(0)
}

#[derive(Serialize)]
struct PairSweep {
    n: usize,
    pairs: usize,
    violations: usize,
    min_slack: f64,
    pass: bool,
    audits: Vec<PairAudit>,
}

fn random_qubit_state(i: usize, n: usize, rng: &mut random::StdRng) -> Result<DensityMatrix, CliError> {
    let dim = 1 << n;
    Ok(match i % 4 {
        0 => random::hilbert_schmidt(dim, rng)?,
        1 => random::haar_state(dim, rng).to_density()?,
        2 => random::separable_state(n, 2, rng)?,
        _ => random::induced(dim, 2.min(dim), rng)?,
    })
}

fn check_rows(t: &mut Table, item: &str, checks: &[qmetro::bounds::BoundCheck]) {
    for c in checks {
        let (status, applies) = match c.status {
            CheckStatus::Pass => ("PASS", true),
            CheckStatus::Fail => ("FAIL", true),
            CheckStatus::NotApplicable => ("N/A", false),
        };
        let num = |v: f64| if applies { Cell::from(v) } else { Cell::Empty };
        t.push(vec![
            item.into(),
            c.name.as_str().into(),
            num(c.lhs),
            num(c.bound),
            num(c.slack),
            status.into(),
            c.note.clone().into(),
        ]);
    }
}

const CHECK_HEADER: &[&str] = &["item", "check", "lhs", "bound", "slack", "status", "note"];

pub fn audit(a: &AuditArgs, s: &Settings) -> Result<u8, CliError> {
    let random_pairs: Option<usize> = s.get(a.random_pairs, "random-pairs")?;
    let (text, pass) = if let Some(m) = random_pairs {
        let n: usize = s.get(a.family.n, "n")?.unwrap_or(3);
        let h = local_hamiltonian(n, s.cap)?;
        let mut rng = random::rng(s.seed);
        let mut audits = Vec::with_capacity(m);
        for i in 0..m {
            let rho = random_qubit_state(i, n, &mut rng)?;
            let sigma = random_qubit_state(i / 4 + 1, n, &mut rng)?;
            audits.push(audit_pair(&rho, &sigma, &h, Some(n))?);
        }
        let violations = audits.iter().flat_map(|a| &a.checks).filter(|c| c.failed()).count();
        let min_slack = audits.iter().flat_map(|a| &a.checks).map(|c| c.slack).fold(f64::INFINITY, f64::min);
        let sweep = PairSweep { n, pairs: m, violations, min_slack, pass: violations == 0, audits };
        let text = match s.format {
            Format::Json => json_envelope("audit", s.seed, &sweep)?,
            Format::Csv => {
                let mut t = Table::new(CHECK_HEADER);
                for (i, a) in sweep.audits.iter().enumerate() {
                    check_rows(&mut t, &format!("pair-{i}"), &a.checks);
                }
                t.to_csv("audit", s.seed)
            }
        };
        (text, sweep.pass)
    } else {
        let against = s.path(&a.against, "against");
        match (subject(s, &a.family)?, against, a.self_audit) {
            (Subject::Family(spec, n), None, false) => {
                let k = s.get(a.k, "k")?.unwrap_or(1);
                let r = audit_state(&spec, n, k, s.cap)?;
                let text = match s.format {
                    Format::Json => json_envelope("audit", s.seed, &r)?,
                    Format::Csv => {
                        let mut t = Table::new(CHECK_HEADER);
                        check_rows(&mut t, "state", &r.checks);
                        t.to_csv("audit", s.seed)
                    }
                };
                (text, r.pass)
            }
            (subject, against, self_audit) => {
                let (rho, n) = match subject {
                    Subject::Family(spec, n) => (build_state(&spec, n, s.cap)?, n),
                    Subject::File(st) => (st.density()?, st.qubits()?),
                };
                let sigma = match (against, self_audit) {
                    (Some(path), _) => state_file::load(&path)?.density()?,
                    (None, true) => rho.clone(),
                    (None, false) => return Err(CliError::Usage("a state file needs --against or --self-audit".into())),
                };
                let pa = audit_pair(&rho, &sigma, &local_hamiltonian(n, s.cap)?, Some(n))?;
                let text = match s.format {
                    Format::Json => json_envelope("audit", s.seed, &pa)?,
                    Format::Csv => {
                        let mut t = Table::new(CHECK_HEADER);
                        check_rows(&mut t, "pair", &pa.checks);
                        t.to_csv("audit", s.seed)
                    }
                };
                (text, pa.pass)
            }
        }
    };
    emit(s, &text)?;
    if !pass {
        eprintln!("audit: at least one bound is violated");
        return Ok(EXIT_VIOLATION);
    }
    Ok(0)
}

#[derive(Serialize)]
struct ScalingOut {
    family: &'static str,
    eps1: f64,
    eps2: f64,
    target_exponent: f64,
    fit_min_n: usize,
    fit: Option<ScalingFit>,
    fit_error: Option<String>,
    records: Vec<qmetro::scaling::ScalingRecord>,
}

pub fn scaling(a: &ScalingArgs, s: &Settings) -> Result<u8, CliError> {
    let kind: FamilyKind = s.get(a.family.clone(), "family")?.unwrap_or_else(|| "tailored-pure".to_string()).parse()?;
    let eps1 = s.get(a.eps1, "eps1")?.unwrap_or(0.1);
    let eps2 = s.get(a.eps2, "eps2")?.unwrap_or(0.1);
    let grid = match s.get::<String>(a.n_grid.clone(), "n-grid")? {
        None => default_grid(),
        Some(g) if g == "default" => default_grid(),
        Some(g) => parse_list(&g)?,
    };
    let fit_min_n = s.get(a.fit_min_n, "fit-min-n")?.unwrap_or(DEFAULT_FIT_MIN_N);
    let schedule = ScheduleSpec::new(eps1, eps2)?;
    let records = sweep(kind, &schedule, &grid, s.cap)?;
    let target = schedule.target_exponent(kind);
    let (fit, fit_error) = match fit_exponent_from(&records, fit_min_n) {
        Ok(f) => (Some(f), None),
        Err(e) => (None, Some(e.to_string())),
    };
    match (&fit, &fit_error) {
        (Some(f), _) => eprintln!(
            "fit: exponent {:.6} (target {target:.6}, |diff| {:.2e}) from {} sizes in [{}, {}], rms residual {:.2e}",
            f.exponent,
            (f.exponent - target).abs(),
            f.points,
            f.n_min,
            f.n_max,
            f.residual_rms
        ),
        (None, Some(e)) => eprintln!("fit: not available ({e})"),
        _ => {}
    }
    let out = ScalingOut { family: kind.name(), eps1, eps2, target_exponent: target, fit_min_n, fit, fit_error, records };
    let text = match s.format {
        Format::Json => json_envelope("scaling", s.seed, &out)?,
        Format::Csv => {
            let mut t = Table::new(&["N", "p", "l", "qfi", "e_g", "r_leb", "target_exponent", "fitted_exponent"]);
            let fitted = out.fit.as_ref().map(|f| f.exponent);
            for r in &out.records {
                t.push(vec![
                    r.n.into(),
                    r.p.into(),
                    r.l.into(),
                    r.qfi.into(),
                    r.e_g.into(),
                    r.r_leb.into(),
                    target.into(),
                    fitted.into(),
                ]);
            }
            t.to_csv("scaling", s.seed)
        }
    };
    emit(s, &text)?;
    Ok(0)
}

#[derive(Serialize)]
struct FigureRow {
    n: usize,
    p: f64,
    e_g: f64,
    mu_star: f64,
    upper_bound_half_p: f64,
}

pub fn figure_eg(a: &FigureArgs, s: &Settings) -> Result<u8, CliError> {
    let ns = match s.get::<String>(a.n_grid.clone(), "n-grid")? {
        Some(g) => parse_list(&g)?,
        None => vec![3, 4, 10],
    };
    if let Some(&bad) = ns.iter().find(|&&n| n < 3) {
        return Err(CliError::Usage(format!(
            "figure-eg: N = {bad} is unsupported; the white-noise GHZ objective needs N >= 3 \
             (the end of its mu interval, 2^(N-3)/(2^(N-2)-1), is undefined at N = 2)"
        )));
    }
    let step = s.get(a.p_step, "p-step")?.unwrap_or(0.01);
    let count = (1.0 / step).round();
    if !(step > 0.0 && count >= 1.0 && (count * step - 1.0).abs() < 1e-9) {
        return Err(CliError::Usage(format!("p-step {step} must divide 1")));
    }
    let ps: Vec<f64> = (0..=count as usize).map(|i| i as f64 / count).collect();
    let mut rows = Vec::new();
    for &n in &ns {
        for c in werner_curve(n, &ps)? {
            rows.push(FigureRow { n, p: c.p, e_g: c.value, mu_star: c.mu_star, upper_bound_half_p: c.p / 2.0 });
        }
    }
    let text = match s.format {
        Format::Json => json_envelope("figure-eg", s.seed, &rows)?,
        Format::Csv => {
            let mut t = Table::new(&["N", "p", "e_g", "mu_star", "upper_bound_half_p"]);
            for r in &rows {
                t.push(vec![r.n.into(), r.p.into(), r.e_g.into(), r.mu_star.into(), Cell::from(r.upper_bound_half_p)]);
            }
            t.to_csv("figure-eg", s.seed)
        }
    };
    emit(s, &text)?;
    Ok(0)
}
