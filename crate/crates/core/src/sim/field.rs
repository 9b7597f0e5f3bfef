//! Spin fields on a periodic square grid.

use std::f64::consts::PI;
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::scalar::{Gamma2, ModelParams};

pub const DOMAIN: f64 = 2.0 * PI;

#[derive(Clone, Debug, PartialEq)]
pub struct SpinField {
    pub nx: usize,
    pub ny: usize,
    pub h: f64,
    pub params: ModelParams,
    /// Row-major: node (i, j) at `j * nx + i`, x = i·h, y = j·h.
    pub s: Vec<[f64; 3]>,
}

/// Plane-wave parameters: polar angle u and integer wavenumbers.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PlaneWave {
    pub u: f64,
    pub k1: i32,
    pub k2: i32,
}

impl Default for PlaneWave {
    fn default() -> Self {
        PlaneWave { u: 0.7, k1: 1, k2: 1 }
    }
}

impl PlaneWave {
    /// ω = −(k1²+k2²) cos u on the sphere, −(k1²+k2²) cosh u on the hyperboloid.
    pub fn omega(&self, g: Gamma2) -> f64 {
        let k2 = (self.k1 * self.k1 + self.k2 * self.k2) as f64;
        match g {
            Gamma2::Compact => -k2 * self.u.cos(),
            Gamma2::Noncompact => -k2 * self.u.cosh(),
        }
    }

    fn profile(&self, g: Gamma2) -> (f64, f64) {
        match g {
            Gamma2::Compact => (self.u.sin(), self.u.cos()),
            Gamma2::Noncompact => (self.u.sinh(), self.u.cosh()),
        }
    }

    pub fn value(&self, g: Gamma2, x: f64, y: f64, t: f64) -> [f64; 3] {
        let (r, z) = self.profile(g);
        let phi = self.k1 as f64 * x + self.k2 as f64 * y + self.omega(g) * t;
        [r * phi.cos(), r * phi.sin(), z]
    }

    pub fn velocity(&self, g: Gamma2, x: f64, y: f64, t: f64) -> [f64; 3] {
        let (r, _) = self.profile(g);
        let w = self.omega(g);
        let phi = self.k1 as f64 * x + self.k2 as f64 * y + w * t;
        [-r * w * phi.sin(), r * w * phi.cos(), 0.0]
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum InitKind {
    Constant([f64; 3]),
    PlaneWave(PlaneWave),
    RandomSmooth { seed: u64, modes: i32, amplitude: f64 },
}

impl InitKind {
    pub fn parse(name: &str, seed: u64) -> Result<Self> {
        match name {
            "constant" => Ok(InitKind::Constant([0.0, 0.0, 1.0])),
            "plane_wave" => Ok(InitKind::PlaneWave(PlaneWave::default())),
            "random_smooth" => Ok(InitKind::RandomSmooth { seed, modes: 3, amplitude: 0.3 }),
            _ => Err(Error::InvalidParameter(format!("unknown initial field `{name}`"))),
        }
    }
}

/// `(ΓS)·S − γ²`.
pub fn constraint_value(p: &ModelParams, s: &[f64; 3]) -> f64 {
    let g = p.gamma2.as_f64();
    s[0] * s[0] + s[1] * s[1] + g * s[2] * s[2] - g
}

/// Normalize onto the sphere, or onto the upper sheet of the hyperboloid.
pub fn project(p: &ModelParams, s: [f64; 3]) -> Result<[f64; 3]> {
    let n2 = match p.gamma2 {
        Gamma2::Compact => s[0] * s[0] + s[1] * s[1] + s[2] * s[2],
        Gamma2::Noncompact => {
            if s[2] <= 0.0 {
                return Err(Error::InvalidParameter("hyperboloid point must have S3 > 0".into()));
            }
            s[2] * s[2] - s[0] * s[0] - s[1] * s[1]
        }
    };
    if n2.is_nan() || n2 <= 0.0 || !n2.is_finite() {
        return Err(Error::InvalidParameter(format!("cannot project ({}, {}, {})", s[0], s[1], s[2])));
    }
    let n = n2.sqrt();
    Ok([s[0] / n, s[1] / n, s[2] / n])
}

impl SpinField {
    pub fn index(&self, i: usize, j: usize) -> usize {
        (j % self.ny) * self.nx + (i % self.nx)
    }

    pub fn at(&self, i: isize, j: isize) -> &[f64; 3] {
        let i = i.rem_euclid(self.nx as isize) as usize;
        let j = j.rem_euclid(self.ny as isize) as usize;
        &self.s[j * self.nx + i]
    }

    pub fn coords(&self, k: usize) -> (f64, f64) {
        ((k % self.nx) as f64 * self.h, (k / self.nx) as f64 * self.h)
    }

    pub fn from_fn(n: usize, p: &ModelParams, f: impl Fn(f64, f64) -> [f64; 3]) -> Result<Self> {
        if n < 8 {
            return Err(Error::InvalidParameter(format!("grid size {n} is below 8")));
        }
        let h = DOMAIN / n as f64;
        let mut s = Vec::with_capacity(n * n);
        for j in 0..n {
            for i in 0..n {
                s.push(project(p, f(i as f64 * h, j as f64 * h))?);
            }
        }
        Ok(SpinField { nx: n, ny: n, h, params: *p, s })
    }

    pub fn max_constraint(&self) -> f64 {
        self.s.iter().map(|s| constraint_value(&self.params, s).abs()).fold(0.0, f64::max)
    }

    pub fn projected(&self) -> Result<Self> {
        let s = self.s.iter().map(|v| project(&self.params, *v)).collect::<Result<Vec<_>>>()?;
        Ok(SpinField { s, ..self.clone() })
    }

    pub fn max_abs_diff(&self, o: &SpinField) -> f64 {
        self.s
            .iter()
            .zip(&o.s)
            .flat_map(|(a, b)| (0..3).map(move |c| (a[c] - b[c]).abs()))
            .fold(0.0, f64::max)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("i,j,S1,S2,S3\n");
        for (k, v) in self.s.iter().enumerate() {
            let _ = writeln!(out, "{},{},{:e},{:e},{:e}", k % self.nx, k / self.nx, v[0], v[1], v[2]);
        }
        out
    }
}

pub fn init_field(kind: &InitKind, n: usize, p: &ModelParams) -> Result<SpinField> {
    match kind {
        InitKind::Constant(v) => {
            if p.gamma2 == Gamma2::Noncompact && (v[2] <= 0.0 || v[2] * v[2] <= v[0] * v[0] + v[1] * v[1]) {
                return Err(Error::InvalidParameter("noncompact initial value needs S3² > S1² + S2², S3 > 0".into()));
            }
            SpinField::from_fn(n, p, |_, _| *v)
        }
        InitKind::PlaneWave(w) => SpinField::from_fn(n, p, |x, y| w.value(p.gamma2, x, y, 0.0)),
        InitKind::RandomSmooth { seed, modes, amplitude } => {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let mut terms = Vec::new();
            for kx in -modes..=*modes {
                for ky in -modes..=*modes {
                    let c: [f64; 3] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
                    let ph: f64 = rng.gen_range(0.0..2.0 * PI);
                    let decay = amplitude / (1 + kx * kx + ky * ky) as f64;
                    terms.push((kx as f64, ky as f64, c.map(|v| v * decay), ph));
                }
            }
            let g = p.gamma2;
            SpinField::from_fn(n, p, |x, y| {
                let mut v = [0.0; 3];
                for (kx, ky, c, ph) in &terms {
                    let w = (kx * x + ky * y + ph).cos();
                    for d in 0..3 {
                        v[d] += c[d] * w;
                    }
                }
                match g {
                    Gamma2::Compact => [v[0], v[1], 1.0 + v[2]],
                    Gamma2::Noncompact => [v[0], v[1], (1.0 + v[0] * v[0] + v[1] * v[1]).sqrt()],
                }
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plane_wave_on_manifold() {
        for p in [ModelParams::compact(), ModelParams::noncompact()] {
            let f = init_field(&InitKind::PlaneWave(PlaneWave::default()), 16, &p).unwrap();
            assert!(f.max_constraint() <= 1e-12);
        }
    }

    #[test]
    fn projection_idempotent() {
        for p in [ModelParams::compact(), ModelParams::noncompact()] {
            let f = init_field(&InitKind::RandomSmooth { seed: 7, modes: 3, amplitude: 0.3 }, 16, &p).unwrap();
            assert!(f.max_constraint() <= 1e-12);
            assert!(f.projected().unwrap().max_abs_diff(&f) <= 1e-15);
        }
    }

    #[test]
    fn noncompact_lower_cone_rejected() {
        let p = ModelParams::noncompact();
        assert!(init_field(&InitKind::Constant([1.0, 0.0, 0.5]), 8, &p).is_err());
        assert!(init_field(&InitKind::Constant([0.0, 0.0, 1.0]), 8, &p).is_ok());
    }

    #[test]
    fn random_smooth_is_seeded() {
        let p = ModelParams::compact();
        let k = |s| InitKind::RandomSmooth { seed: s, modes: 2, amplitude: 0.3 };
        assert_eq!(init_field(&k(1), 8, &p).unwrap(), init_field(&k(1), 8, &p).unwrap());
        assert_ne!(init_field(&k(1), 8, &p).unwrap(), init_field(&k(2), 8, &p).unwrap());
    }

    #[test]
    fn csv_header() {
        let f = init_field(&InitKind::Constant([0.0, 0.0, 1.0]), 8, &ModelParams::compact()).unwrap();
        let csv = f.to_csv();
        assert!(csv.starts_with("i,j,S1,S2,S3\n0,0,"));
        assert_eq!(csv.lines().count(), 65);
    }
}
