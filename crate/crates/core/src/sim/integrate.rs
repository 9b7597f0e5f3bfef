//! Explicit RK4 with constraint projection.

use rayon::prelude::*;

use super::field::{project, SpinField};
use crate::error::{Error, Result};

fn cross(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

/// 5-point Laplacian at node (i, j).
pub fn laplacian(f: &SpinField, i: usize, j: usize) -> [f64; 3] {
    let (i, j) = (i as isize, j as isize);
    let c = f.at(i, j);
    let (e, w, n, s) = (f.at(i + 1, j), f.at(i - 1, j), f.at(i, j + 1), f.at(i, j - 1));
    let h2 = f.h * f.h;
    std::array::from_fn(|d| (e[d] + w[d] + n[d] + s[d] - 4.0 * c[d]) / h2)
}

/// `S_t = Γ⁻¹(S × ΔS)` at every node; rows in parallel.
pub fn rhs(f: &SpinField) -> Vec<[f64; 3]> {
    let g = [1.0, 1.0, f.params.gamma2.as_f64()];
    let mut out = vec![[0.0; 3]; f.s.len()];
    out.par_chunks_mut(f.nx).enumerate().for_each(|(j, row)| {
        for (i, v) in row.iter_mut().enumerate() {
            let c = cross(&f.s[j * f.nx + i], &laplacian(f, i, j));
            *v = [c[0] * g[0], c[1] * g[1], c[2] * g[2]];
        }
    });
    out
}

/// Explicit-scheme bound h²/4.
pub fn dt_bound(f: &SpinField) -> f64 {
    f.h * f.h / 4.0
}

fn axpy(f: &SpinField, k: &[[f64; 3]], a: f64) -> SpinField {
    let s = f.s.iter().zip(k).map(|(s, k)| [s[0] + a * k[0], s[1] + a * k[1], s[2] + a * k[2]]).collect();
    SpinField { s, ..f.clone() }
}

/// One RK4 step followed by projection; `|dt|` must respect the bound.
pub fn step(f: &SpinField, dt: f64) -> Result<SpinField> {
    let bound = dt_bound(f);
    if dt.abs() > bound {
        return Err(Error::StepTooLarge { dt, bound });
    }
    let k1 = rhs(f);
    let k2 = rhs(&axpy(f, &k1, dt / 2.0));
    let k3 = rhs(&axpy(f, &k2, dt / 2.0));
    let k4 = rhs(&axpy(f, &k3, dt));
    let mut s = Vec::with_capacity(f.s.len());
    for n in 0..f.s.len() {
        let v: [f64; 3] = std::array::from_fn(|d| {
            f.s[n][d] + dt / 6.0 * (k1[n][d] + 2.0 * k2[n][d] + 2.0 * k3[n][d] + k4[n][d])
        });
        if v.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite(0));
        }
        s.push(project(&f.params, v).map_err(|_| Error::NonFinite(0))?);
    }
    Ok(SpinField { s, ..f.clone() })
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunStats {
    pub steps: usize,
    pub dt: f64,
    /// Largest constraint violation seen after any step.
    pub max_drift: f64,
}

/// Integrate to `t_final` with equal steps `dt ≤ dt_safety·h²/4`.
pub fn integrate(f: &SpinField, t_final: f64, dt_safety: f64) -> Result<(SpinField, RunStats)> {
    if dt_safety.is_nan() || dt_safety <= 0.0 {
        return Err(Error::InvalidParameter(format!("dt_safety must be positive, got {dt_safety}")));
    }
    let target = dt_safety * dt_bound(f);
    let steps = (t_final / target).ceil().max(1.0) as usize;
    let dt = t_final / steps as f64;
    let mut cur = f.clone();
    let mut max_drift = 0.0f64;
    for n in 0..steps {
        cur = step(&cur, dt).map_err(|e| match e {
            Error::NonFinite(_) => Error::NonFinite(n),
            e => e,
        })?;
        max_drift = max_drift.max(cur.max_constraint());
    }
    Ok((cur, RunStats { steps, dt, max_drift }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ModelParams;
    use crate::sim::field::{init_field, InitKind, PlaneWave};

    #[test]
    fn constant_is_fixed() {
        for (p, v) in [(ModelParams::compact(), [0.0, 0.6, 0.8]), (ModelParams::noncompact(), [0.0, 0.0, 1.0])] {
            let f = init_field(&InitKind::Constant(v), 16, &p).unwrap();
            let (g, _) = integrate(&f, 0.01, 0.9).unwrap();
            assert!(g.max_abs_diff(&f) <= 1e-15);
        }
    }

    #[test]
    fn too_large_step_rejected() {
        let f = init_field(&InitKind::Constant([0.0, 0.0, 1.0]), 16, &ModelParams::compact()).unwrap();
        assert!(matches!(step(&f, dt_bound(&f) * 1.01), Err(Error::StepTooLarge { .. })));
    }

    #[test]
    fn time_reversal() {
        let p = ModelParams::compact();
        let f = init_field(&InitKind::PlaneWave(PlaneWave::default()), 32, &p).unwrap();
        let dt = dt_bound(&f) / 2.0;
        let back = step(&step(&f, dt).unwrap(), -dt).unwrap();
        assert!(back.max_abs_diff(&f) < 1e-9, "{}", back.max_abs_diff(&f));
    }

    #[test]
    fn drift_bounded_both_signs() {
        for p in [ModelParams::compact(), ModelParams::noncompact()] {
            let f = init_field(&InitKind::RandomSmooth { seed: 3, modes: 2, amplitude: 0.2 }, 16, &p).unwrap();
            let (_, st) = integrate(&f, 0.02, 0.9).unwrap();
            assert!(st.max_drift <= 1e-12, "{}", st.max_drift);
        }
    }

    #[test]
    fn nan_reports_step() {
        let mut f = init_field(&InitKind::Constant([0.0, 0.0, 1.0]), 8, &ModelParams::compact()).unwrap();
        f.s[3] = [f64::NAN, 0.0, 1.0];
        assert!(matches!(integrate(&f, 0.01, 0.9), Err(Error::NonFinite(0))));
    }
}
