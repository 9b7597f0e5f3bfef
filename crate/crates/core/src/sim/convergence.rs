//! Grid-refinement studies.

use num_complex::Complex64;

use super::field::{init_field, InitKind, SpinField};
use super::integrate::integrate;
use super::monitor::{constraint_monitor, measure_residuals, pde_monitors, GridJets};
use crate::error::{Error, Result};
use crate::scalar::ModelParams;

/// Errors below this are treated as rounding noise.
pub const FLOOR: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct Series {
    pub name: String,
    pub errors: Vec<f64>,
    /// Least-squares slope of log(error) against log(h); `None` at the floor.
    pub slope: Option<f64>,
    pub floor: bool,
    /// Errors strictly decrease under refinement.
    pub monotone: bool,
}

impl Series {
    fn new(name: &str, hs: &[f64], errors: Vec<f64>) -> Self {
        let floor = errors.iter().all(|&e| e <= FLOOR);
        let monotone = errors.windows(2).all(|w| w[1] < w[0]);
        let slope = (!floor).then(|| ls_slope(hs, &errors));
        Series { name: name.into(), errors, slope, floor, monotone }
    }

    pub fn slope_text(&self) -> String {
        match self.slope {
            Some(s) => format!("{s:.4}"),
            None => "floor".into(),
        }
    }
}

pub fn ls_slope(hs: &[f64], errs: &[f64]) -> f64 {
    let x: Vec<f64> = hs.iter().map(|h| h.ln()).collect();
    let y: Vec<f64> = errs.iter().map(|e| e.max(f64::MIN_POSITIVE).ln()).collect();
    let n = x.len() as f64;
    let (mx, my) = (x.iter().sum::<f64>() / n, y.iter().sum::<f64>() / n);
    let sxy: f64 = x.iter().zip(&y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceReport {
    pub grids: Vec<usize>,
    pub hs: Vec<f64>,
    pub t_final: f64,
    pub series: Vec<Series>,
    pub max_drift: f64,
}

impl ConvergenceReport {
    pub fn get(&self, name: &str) -> Option<&Series> {
        self.series.iter().find(|s| s.name == name)
    }
}

fn exact_at(kind: &InitKind, f0: &SpinField, t: f64) -> Option<(SpinField, Vec<[f64; 3]>)> {
    let g = f0.params.gamma2;
    match kind {
        InitKind::Constant(_) => Some((f0.clone(), vec![[0.0; 3]; f0.s.len()])),
        InitKind::PlaneWave(w) => {
            let mut f = f0.clone();
            let mut v = Vec::with_capacity(f.s.len());
            for k in 0..f.s.len() {
                let (x, y) = f.coords(k);
                f.s[k] = w.value(g, x, y, t);
                v.push(w.velocity(g, x, y, t));
            }
            Some((f, v))
        }
        InitKind::RandomSmooth { .. } => None,
    }
}

/// Run `kind` to `t_final` on each grid. Series: `solution_error` (L∞ against
/// the exact solution), `pde_residual` (monitor on the exact solution with its
/// exact time derivative), `constraint` (after the run). The first two exist
/// only for kinds with a known exact solution.
pub fn convergence_study(
    kind: &InitKind,
    grids: &[usize],
    p: &ModelParams,
    t_final: f64,
    dt_safety: f64,
) -> Result<ConvergenceReport> {
    if grids.len() < 3 || grids.windows(2).any(|w| w[1] != 2 * w[0]) {
        return Err(Error::InvalidParameter("need at least three grids with refinement factor 2".into()));
    }
    let one = Complex64::new(1.0, 0.0);
    let (mut sol, mut pde, mut con, mut hs) = (vec![], vec![], vec![], vec![]);
    let mut max_drift = 0.0f64;
    for &n in grids {
        let f0 = init_field(kind, n, p)?;
        hs.push(f0.h);
        let (f, stats) = integrate(&f0, t_final, dt_safety)?;
        max_drift = max_drift.max(stats.max_drift);
        con.push(f.max_constraint());
        if let Some((exact, v)) = exact_at(kind, &f0, t_final) {
            sol.push(f.max_abs_diff(&exact));
            let g = GridJets { field: &exact, velocity: Some(&v), t: t_final };
            let r = measure_residuals(&g, &pde_monitors(p), one)?;
            pde.push(r.monitors.iter().map(|m| m.max).fold(0.0, f64::max));
        }
    }
    let mut series = Vec::new();
    if !sol.is_empty() {
        series.push(Series::new("solution_error", &hs, sol));
        series.push(Series::new("pde_residual", &hs, pde));
    }
    series.push(Series::new(&constraint_monitor(p).name, &hs, con));
    Ok(ConvergenceReport { grids: grids.to_vec(), hs, t_final, series, max_drift })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_of_power_law() {
        let hs = [0.4, 0.2, 0.1];
        let e: Vec<f64> = hs.iter().map(|h| 3.0 * h * h).collect();
        assert!((ls_slope(&hs, &e) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn constant_sits_at_floor() {
        let r = convergence_study(&InitKind::Constant([0.0, 0.0, 1.0]), &[8, 16, 32], &ModelParams::compact(), 0.01, 0.9)
            .unwrap();
        assert!(r.series.iter().all(|s| s.floor && s.slope_text() == "floor"));
    }

    #[test]
    fn rejects_bad_grids() {
        let k = InitKind::Constant([0.0, 0.0, 1.0]);
        assert!(convergence_study(&k, &[8, 16], &ModelParams::compact(), 0.01, 0.9).is_err());
        assert!(convergence_study(&k, &[8, 16, 24], &ModelParams::compact(), 0.01, 0.9).is_err());
    }

    #[test]
    fn plane_wave_second_order() {
        for p in [ModelParams::compact(), ModelParams::noncompact()] {
            let k = InitKind::PlaneWave(crate::sim::PlaneWave::default());
            let r = convergence_study(&k, &[32, 64, 128], &p, 0.1, 0.9).unwrap();
            for name in ["solution_error", "pde_residual"] {
                let s = r.get(name).unwrap();
                let slope = s.slope.unwrap();
                assert!((1.8..=2.2).contains(&slope) && s.monotone, "{} {name}: {:?} {slope}", p.gamma2, s.errors);
            }
            assert!(r.max_drift <= 1e-12);
        }
    }
}
