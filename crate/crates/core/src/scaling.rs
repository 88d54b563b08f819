//! Sweeps of scheduled families over `N` and log–log fits of the QFI exponent.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::families::{
    analytic_gme, analytic_qfi, build_state, local_hamiltonian, r_leb, DenseCap, Exactness, FamilyKind,
    ScheduleSpec,
};
use crate::qfi::{qcrb, qfi_eigen};

/// Records below this `N` are left out of fits by default.
pub const DEFAULT_FIT_MIN_N: usize = 100;

/// Relative tolerance of the automatic dense cross-check in [`sweep`].
pub const DENSE_CHECK_TOL: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScalingRecord {
    pub n: usize,
    pub p: Option<f64>,
    pub l: Option<usize>,
    pub qfi: f64,
    pub e_g: f64,
    pub e_g_exactness: Exactness,
    pub r_leb: f64,
    pub r_leb_exactness: Exactness,
    pub qcrb: f64,
    /// Dense QFI, when `2^N` fits the cap.
    pub dense_qfi: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScalingFit {
    pub exponent: f64,
    pub intercept: f64,
    pub residual_rms: f64,
    pub n_min: usize,
    pub n_max: usize,
    pub points: usize,
}

/// Evaluates a scheduled family on an ascending grid of at least six sizes
/// from the closed forms; sizes that fit the cap are also built densely and
/// must agree to [`DENSE_CHECK_TOL`].
pub fn sweep(kind: FamilyKind, schedule: &ScheduleSpec, grid: &[usize], cap: DenseCap) -> Result<Vec<ScalingRecord>> {
    schedule.check_sweepable()?;
    if grid.len() < 6 {
        return Err(Error::InvalidParameter(format!("a sweep needs at least 6 sizes, got {}", grid.len())));
    }
    if grid[0] < 2 || grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParameter("sizes must be strictly ascending and at least 2".into()));
    }
    grid.iter().map(|&n| record(kind, schedule, n, cap)).collect()
}

fn record(kind: FamilyKind, schedule: &ScheduleSpec, n: usize, cap: DenseCap) -> Result<ScalingRecord> {
    let spec = schedule.instantiate(kind, n)?;
    let qfi = analytic_qfi(&spec, n)?;
    let dense_qfi = if cap.allows(n) {
        let rho = build_state(&spec, n, cap)?;
        let dense = qfi_eigen(&rho, &local_hamiltonian(n, cap)?)?.value;
        if (dense - qfi).abs() > DENSE_CHECK_TOL * qfi.abs().max(1e-12) {
            return Err(Error::Numerical(format!("dense QFI {dense} disagrees with closed form {qfi} at N = {n}")));
        }
        Some(dense)
    } else {
        None
    };
    let e_g = analytic_gme(&spec, n)?;
    let r = r_leb(&spec, n)?;
    Ok(ScalingRecord {
        n,
        p: spec.p(),
        l: spec.l(),
        qfi,
        e_g: e_g.value,
        e_g_exactness: e_g.exactness,
        r_leb: r.value,
        r_leb_exactness: r.exactness,
        qcrb: qcrb(qfi, 1)?,
        dense_qfi,
    })
}

/// OLS fit of `log F_Q` against `log N` over records with `N ≥ DEFAULT_FIT_MIN_N`.
pub fn fit_exponent(records: &[ScalingRecord]) -> Result<ScalingFit> {
    fit_exponent_from(records, DEFAULT_FIT_MIN_N)
}

pub fn fit_exponent_from(records: &[ScalingRecord], n_min: usize) -> Result<ScalingFit> {
    let (ns, ys): (Vec<f64>, Vec<f64>) =
        records.iter().filter(|r| r.n >= n_min).map(|r| (r.n as f64, r.qfi)).unzip();
    fit_power_law(&ns, &ys)
}

/// OLS fit of `log y = intercept + exponent · log x`.
pub fn fit_power_law(xs: &[f64], ys: &[f64]) -> Result<ScalingFit> {
    if xs.len() != ys.len() {
        return Err(Error::DimensionMismatch(xs.len(), ys.len()));
    }
    if xs.len() < 6 {
        return Err(Error::InvalidParameter(format!("a fit needs at least 6 points, got {}", xs.len())));
    }
    if let Some(bad) = xs.iter().chain(ys).find(|v| !(v.is_finite() && **v > 0.0)) {
        return Err(Error::Domain(format!("log-log fit needs positive values, got {bad}")));
    }
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let m = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / m;
    let my = ly.iter().sum::<f64>() / m;
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    if sxx == 0.0 {
        return Err(Error::Domain("all sizes are equal".into()));
    }
    let exponent = sxy / sxx;
    let intercept = my - exponent * mx;
    let rss: f64 = lx.iter().zip(&ly).map(|(x, y)| (y - intercept - exponent * x).powi(2)).sum();
    let n_min = xs.iter().copied().fold(f64::INFINITY, f64::min) as usize;
    let n_max = xs.iter().copied().fold(0.0, f64::max) as usize;
    Ok(ScalingFit { exponent, intercept, residual_rms: (rss / m).sqrt(), n_min, n_max, points: xs.len() })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TargetCheck {
    pub target: f64,
    pub fitted: f64,
    /// `tol - |fitted - target|`.
    pub slack: f64,
    pub pass: bool,
}

/// `|α̂ - target| ≤ tol`, with the target the schedule's design exponent for `kind`.
pub fn verify_target(fit: &ScalingFit, schedule: &ScheduleSpec, kind: FamilyKind, tol: f64) -> TargetCheck {
    let target = schedule.target_exponent(kind);
    let slack = tol - (fit.exponent - target).abs();
    TargetCheck { target, fitted: fit.exponent, slack, pass: slack >= 0.0 }
}

/// `10^a, 10^{a+step}, …, 10^b` rounded to integers, duplicates removed.
pub fn geometric_grid(start_exp: f64, end_exp: f64, step: f64) -> Result<Vec<usize>> {
    if !(step > 0.0 && start_exp <= end_exp && start_exp >= 0.0) {
        return Err(Error::InvalidParameter("grid needs 0 <= start <= end and a positive step".into()));
    }
    let count = ((end_exp - start_exp) / step + 1e-9).floor() as usize + 1;
    let mut out: Vec<usize> =
        (0..count).map(|i| 10f64.powf(start_exp + step * i as f64).round() as usize).collect();
    out.dedup();
    Ok(out)
}

/// `{10², 10^{2.5}, …, 10⁶}`.
pub fn default_grid() -> Vec<usize> {
    geometric_grid(2.0, 6.0, 0.5).expect("static grid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn synthetic_power_law() {
        let xs: Vec<f64> = (0..8).map(|i| 10f64.powf(2.0 + 0.5 * i as f64)).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 3.0 * x.powf(1.7)).collect();
        let fit = fit_power_law(&xs, &ys).unwrap();
        assert!((fit.exponent - 1.7).abs() < 1e-10);
        assert!((fit.intercept - 3f64.ln()).abs() < 1e-9);
        assert!(fit.residual_rms < 1e-12);
    }

    #[test]
    fn fit_rejects_bad_input() {
        assert!(matches!(fit_power_law(&[1.0; 6], &[1.0, 2.0, 3.0, 0.0, 1.0, 1.0]), Err(Error::Domain(_))));
        assert!(fit_power_law(&[1.0; 5], &[1.0; 5]).is_err());
    }

    #[test]
    fn default_grid_values() {
        let g = default_grid();
        assert_eq!(g, vec![100, 316, 1000, 3162, 10000, 31623, 100000, 316228, 1000000]);
    }

    #[test]
    fn ghz_sweep_is_exact() {
        let s = ScheduleSpec::new(0.1, 0.1).unwrap();
        let recs = sweep(FamilyKind::Ghz, &s, &default_grid(), DenseCap::default()).unwrap();
        for r in &recs {
            assert_eq!(r.qfi, (r.n * r.n) as f64);
        }
        let fit = fit_exponent(&recs).unwrap();
        assert!((fit.exponent - 2.0).abs() < 1e-12);
        assert!(fit.residual_rms <= 1e-6);
        assert!(verify_target(&fit, &s, FamilyKind::Ghz, 1e-9).pass);
    }

    #[test]
    fn tailored_pure_records_follow_closed_form() {
        let s = ScheduleSpec::new(0.1, 0.1).unwrap();
        let recs = sweep(FamilyKind::TailoredPure, &s, &default_grid(), DenseCap::default()).unwrap();
        for r in &recs {
            let p = r.p.unwrap();
            let l = r.l.unwrap() as f64;
            assert!((r.qfi - 4.0 * p * (1.0 - p) * l * l).abs() <= 1e-12 * r.qfi);
        }
    }

    #[test]
    fn dense_cross_check_runs_on_small_sizes() {
        let s = ScheduleSpec::new(0.1, 0.1).unwrap();
        let recs = sweep(FamilyKind::TailoredWerner, &s, &[2, 3, 4, 5, 6, 8, 10], DenseCap::default()).unwrap();
        assert!(recs.iter().all(|r| r.dense_qfi.is_some()));
        let r10 = recs.last().unwrap();
        assert!((r10.dense_qfi.unwrap() - r10.qfi).abs() <= 1e-6 * r10.qfi);
    }

    #[test]
    fn schedule_and_grid_validation() {
        let bad = ScheduleSpec::new(1.5, 0.5).unwrap();
        assert!(matches!(sweep(FamilyKind::TailoredPure, &bad, &default_grid(), DenseCap::default()), Err(Error::InvalidSchedule(_))));
        let s = ScheduleSpec::new(0.1, 0.1).unwrap();
        assert!(sweep(FamilyKind::TailoredPure, &s, &[100, 200, 300], DenseCap::default()).is_err());
        assert!(sweep(FamilyKind::TailoredPure, &s, &[100, 90, 300, 400, 500, 600], DenseCap::default()).is_err());
    }

    #[test]
    fn sub_sql_target_is_reported() {
        let s = ScheduleSpec::new(1.9, 0.01).unwrap();
        assert!((s.target_exponent(FamilyKind::TailoredPure) - 0.08).abs() < 1e-12);
    }
}
