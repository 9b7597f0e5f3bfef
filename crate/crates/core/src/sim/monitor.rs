//! Numeric evaluation of jet polynomials on a grid field.

use num_complex::Complex64;

use super::field::SpinField;
use crate::error::{Error, Result};
use crate::exterior::evolution_rhs;
use crate::scalar::{Coord, Jet, JetSymbol, ModelParams, ScalarExpr};

#[derive(Clone, Debug, PartialEq)]
pub struct Monitor {
    pub name: String,
    pub expr: ScalarExpr,
}

impl Monitor {
    pub fn new(name: impl Into<String>, expr: ScalarExpr) -> Self {
        Monitor { name: name.into(), expr }
    }
}

/// `S_i,t − Γ_i(S × ΔS)_i`, one monitor per component.
pub fn pde_monitors(p: &ModelParams) -> Vec<Monitor> {
    (1..=3)
        .map(|i| {
            let st = ScalarExpr::symbol(JetSymbol::jet(i, 0, 0, 1));
            Monitor::new(format!("pde_{i}"), st.sub(&evolution_rhs(p, i)))
        })
        .collect()
}

/// `(ΓS)·S − γ²`.
pub fn constraint_monitor(p: &ModelParams) -> Monitor {
    let mut e = ScalarExpr::scalar(p.gamma2.value()).neg();
    for i in 1..=3 {
        e = e.add(&ScalarExpr::symbol(JetSymbol::s(i)).pow(2).scale(&p.gamma_entry(i)));
    }
    Monitor::new("constraint", e)
}

/// One monitor per entry of a matrix-valued expression.
pub fn matrix_monitors(name: &str, e: &crate::spectral::MatExpr) -> Vec<Monitor> {
    let mut out = Vec::new();
    for r in 0..2 {
        for c in 0..2 {
            out.push(Monitor::new(format!("{name}[{r}{c}]"), e.map_coeffs(|m| m.m[r][c].clone())));
        }
    }
    out
}

/// Field plus an optional time derivative, read through centered differences.
pub struct GridJets<'a> {
    pub field: &'a SpinField,
    pub velocity: Option<&'a [[f64; 3]]>,
    pub t: f64,
}

impl GridJets<'_> {
    fn sample(&self, src: &[[f64; 3]], i: isize, j: isize, c: usize) -> f64 {
        let f = self.field;
        let ii = i.rem_euclid(f.nx as isize) as usize;
        let jj = j.rem_euclid(f.ny as isize) as usize;
        src[jj * f.nx + ii][c]
    }

    fn jet(&self, node: usize, jet: &Jet) -> Result<f64> {
        let f = self.field;
        let src: &[[f64; 3]] = match jet.dt {
            0 => &f.s,
            1 => self.velocity.ok_or_else(|| Error::Unsupported("time-derivative jets need a velocity field".into()))?,
            _ => return Err(Error::Unsupported(format!("jet {jet} needs a second time derivative"))),
        };
        let (i, j) = ((node % f.nx) as isize, (node / f.nx) as isize);
        let c = jet.comp as usize - 1;
        let v = |di: isize, dj: isize| self.sample(src, i + di, j + dj, c);
        let h = f.h;
        Ok(match (jet.dx, jet.dy) {
            (0, 0) => v(0, 0),
            (1, 0) => (v(1, 0) - v(-1, 0)) / (2.0 * h),
            (0, 1) => (v(0, 1) - v(0, -1)) / (2.0 * h),
            (2, 0) => (v(1, 0) - 2.0 * v(0, 0) + v(-1, 0)) / (h * h),
            (0, 2) => (v(0, 1) - 2.0 * v(0, 0) + v(0, -1)) / (h * h),
            (1, 1) => (v(1, 1) - v(1, -1) - v(-1, 1) + v(-1, -1)) / (4.0 * h * h),
            _ => return Err(Error::Unsupported(format!("jet {jet}"))),
        })
    }

    fn symbol(&self, node: usize, s: &JetSymbol) -> Result<f64> {
        match s {
            JetSymbol::Field(j) => self.jet(node, j),
            JetSymbol::Coord(Coord::X) => Ok(self.field.coords(node).0),
            JetSymbol::Coord(Coord::Y) => Ok(self.field.coords(node).1),
            JetSymbol::Coord(Coord::T) => Ok(self.t),
            other => Err(Error::Unsupported(format!("cannot evaluate `{other}` numerically"))),
        }
    }
}

fn check_depth(m: &Monitor) -> Result<()> {
    for s in m.expr.symbols() {
        if s.jet_order() > 2 {
            return Err(Error::JetTooDeep { monitor: m.name.clone(), symbol: s.to_string() });
        }
    }
    Ok(())
}

/// Term-by-term substitution at one node.
fn eval_direct(m: &Monitor, g: &GridJets, node: usize, lambda: Complex64) -> Result<Complex64> {
    let mut acc = Complex64::new(0.0, 0.0);
    for (mono, c) in m.expr.terms() {
        let mut v = c.eval(lambda);
        for (s, e) in mono.factors() {
            v *= g.symbol(node, s)?.powi(*e as i32);
        }
        acc += v;
    }
    Ok(acc)
}

/// Slot-indexed form: symbol values computed once per node.
struct Compiled {
    slots: Vec<JetSymbol>,
    terms: Vec<(Complex64, Vec<(usize, i32)>)>,
}

impl Compiled {
    fn new(m: &Monitor, lambda: Complex64) -> Self {
        let slots: Vec<JetSymbol> = m.expr.symbols().into_iter().collect();
        let terms = m
            .expr
            .terms()
            .map(|(mono, c)| {
                let f = mono
                    .factors()
                    .iter()
                    .map(|(s, e)| (slots.binary_search(s).expect("symbol collected"), *e as i32))
                    .collect();
                (c.eval(lambda), f)
            })
            .collect();
        Compiled { slots, terms }
    }

    fn eval(&self, g: &GridJets, node: usize, buf: &mut Vec<f64>) -> Result<Complex64> {
        buf.clear();
        for s in &self.slots {
            buf.push(g.symbol(node, s)?);
        }
        Ok(self.terms.iter().map(|(c, f)| f.iter().fold(*c, |a, (k, e)| a * buf[*k].powi(*e))).sum())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MonitorStats {
    pub name: String,
    pub max: f64,
    pub mean: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ResidualReport {
    pub n: usize,
    pub h: f64,
    pub t: f64,
    pub monitors: Vec<MonitorStats>,
    /// Largest relative disagreement between the two evaluation paths.
    pub path_discrepancy: f64,
}

impl ResidualReport {
    pub fn get(&self, name: &str) -> Option<&MonitorStats> {
        self.monitors.iter().find(|m| m.name == name)
    }

    pub fn paths_agree(&self) -> bool {
        self.path_discrepancy <= 1e-12
    }
}

pub fn measure_residuals(g: &GridJets, monitors: &[Monitor], lambda: Complex64) -> Result<ResidualReport> {
    let f = g.field;
    let mut stats = Vec::new();
    let mut worst = 0.0f64;
    let mut buf = Vec::new();
    for m in monitors {
        check_depth(m)?;
        let compiled = Compiled::new(m, lambda);
        let (mut max, mut sum) = (0.0f64, 0.0f64);
        for node in 0..f.s.len() {
            let a = eval_direct(m, g, node, lambda)?;
            let b = compiled.eval(g, node, &mut buf)?;
            let scale = a.norm().max(b.norm()).max(1.0);
            worst = worst.max((a - b).norm() / scale);
            max = max.max(a.norm());
            sum += a.norm();
        }
        stats.push(MonitorStats { name: m.name.clone(), max, mean: sum / f.s.len() as f64 });
    }
    Ok(ResidualReport { n: f.nx, h: f.h, t: g.t, monitors: stats, path_discrepancy: worst })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ExactScalar;
    use crate::sim::field::{init_field, InitKind, PlaneWave};

    fn plane(n: usize) -> (SpinField, Vec<[f64; 3]>) {
        let p = ModelParams::compact();
        let w = PlaneWave::default();
        let f = init_field(&InitKind::PlaneWave(w), n, &p).unwrap();
        let v = (0..f.s.len())
            .map(|k| {
                let (x, y) = f.coords(k);
                w.velocity(p.gamma2, x, y, 0.0)
            })
            .collect();
        (f, v)
    }

    fn pde_max(n: usize) -> f64 {
        let (f, v) = plane(n);
        let g = GridJets { field: &f, velocity: Some(&v), t: 0.0 };
        let r = measure_residuals(&g, &pde_monitors(&f.params), Complex64::new(1.0, 0.0)).unwrap();
        assert!(r.paths_agree());
        r.monitors.iter().map(|m| m.max).fold(0.0, f64::max)
    }

    #[test]
    fn pde_residual_is_second_order() {
        let (a, b) = (pde_max(32), pde_max(64));
        let ratio = a / b;
        assert!((3.5..4.5).contains(&ratio), "{a} {b} {ratio}");
    }

    #[test]
    fn constraint_monitor_small() {
        let (f, _) = plane(16);
        let g = GridJets { field: &f, velocity: None, t: 0.0 };
        let r = measure_residuals(&g, &[constraint_monitor(&f.params)], Complex64::new(1.0, 0.0)).unwrap();
        assert!(r.get("constraint").unwrap().max <= 1e-12);
    }

    #[test]
    fn third_order_jet_rejected() {
        let (f, _) = plane(16);
        let g = GridJets { field: &f, velocity: None, t: 0.0 };
        let m = Monitor::new("deep", ScalarExpr::symbol(JetSymbol::jet(1, 3, 0, 0)));
        assert!(matches!(measure_residuals(&g, &[m], Complex64::new(1.0, 0.0)), Err(Error::JetTooDeep { .. })));
    }

    #[test]
    fn lambda_enters_coefficients() {
        let (f, _) = plane(16);
        let g = GridJets { field: &f, velocity: None, t: 0.0 };
        let e = ScalarExpr::scalar(ExactScalar::lambda_pow(2));
        let r = measure_residuals(&g, &[Monitor::new("l2", e)], Complex64::new(0.0, 3.0)).unwrap();
        assert!((r.monitors[0].max - 9.0).abs() < 1e-14);
    }
}
