use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `6u^5 - 15u^4 + 10u^3` clamped to `[0, 1]`.
fn smoothstep(u: f64) -> f64 {
    if u <= 0.0 {
        0.0
    } else if u >= 1.0 {
        1.0
    } else {
        u * u * u * (u * (u * 6.0 - 15.0) + 10.0)
    }
}

/// Cutoffs attached to the chart size `R`.
///
/// `rho(x)` is 1 for `x <= e^{-9R/10}` and 0 for `x >= e^{-8R/10}`;
/// `beta(x)` is 1 for `x >= e^{R/10}` and satisfies `beta(x) + beta(1/x) = 1`.
/// Both interpolate with a quintic smoothstep in `log x`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CutoffPair {
    pub r: f64,
}

impl CutoffPair {
    pub fn new(r: f64) -> Result<Self> {
        if !(r.is_finite() && r > 0.0) {
            return Err(Error::Domain(format!("chart size must be positive, got {r}")));
        }
        Ok(CutoffPair { r })
    }

    pub fn rho(&self, x: f64) -> f64 {
        self.rho_log(x.ln())
    }

    pub fn rho_log(&self, u: f64) -> f64 {
        1.0 - smoothstep((u + 0.9 * self.r) / (0.1 * self.r))
    }

    pub fn beta(&self, x: f64) -> f64 {
        self.beta_log(x.ln())
    }

    /// `beta(e^u)`. Negative `u` goes through the symmetry so the identity
    /// holds up to a single rounding.
    pub fn beta_log(&self, u: f64) -> f64 {
        if u < 0.0 {
            1.0 - self.beta_log(-u)
        } else {
            smoothstep((u + 0.1 * self.r) / (0.2 * self.r))
        }
    }

    /// Largest `|Q|` for which gluing after cutting reproduces the map.
    pub fn gluing_bound(&self) -> f64 {
        (-2.0 * self.r).exp()
    }
}

/// Values of a vector-valued map at points `(z+, Q/z+)` of the annulus
/// `z+ z- = Q`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnnulusSamples {
    pub q: Complex64,
    pub z_plus: Vec<Complex64>,
    pub values: Vec<Vec<Complex64>>,
}

impl AnnulusSamples {
    /// `n_radii x n_angles` points with `log |z+|` evenly spaced over
    /// `[log |Q|, 0]` and the angle evenly spaced over the circle.
    pub fn log_polar(q: Complex64, n_radii: usize, n_angles: usize, f: impl Fn(Complex64, Complex64) -> Vec<Complex64> + Sync) -> Self {
        let lo = q.norm().ln();
        let z_plus: Vec<Complex64> = (0..n_radii)
            .flat_map(|i| {
                let t = if n_radii > 1 { lo * (1.0 - i as f64 / (n_radii - 1) as f64) } else { lo / 2.0 };
                (0..n_angles).map(move |j| Complex64::from_polar(t.exp(), std::f64::consts::TAU * j as f64 / n_angles as f64))
            })
            .collect();
        let values = z_plus.par_iter().map(|&zp| f(zp, q / zp)).collect();
        AnnulusSamples { q, z_plus, values }
    }

    pub fn z_minus(&self) -> Vec<Complex64> {
        self.z_plus.iter().map(|&z| self.q / z).collect()
    }

    fn check(&self) -> Result<()> {
        let lq = self.q.norm().ln();
        if !(lq.is_finite() && lq < 0.0) {
            return Err(Error::Domain(format!("annulus parameter must satisfy 0 < |Q| < 1, got {}", self.q)));
        }
        if self.z_plus.len() != self.values.len() || self.z_plus.is_empty() {
            return Err(Error::Data(format!("{} points but {} values", self.z_plus.len(), self.values.len())));
        }
        let d = self.values[0].len();
        if self.values.iter().any(|v| v.len() != d) {
            return Err(Error::Data("sample values have different lengths".into()));
        }
        if self.values.iter().flatten().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Data("sample value is not finite".into()));
        }
        let mut logs: Vec<f64> = Vec::with_capacity(self.z_plus.len());
        for z in &self.z_plus {
            let t = z.norm().ln();
            if !(t.is_finite() && t >= lq - 1e-12 && t <= 1e-12) {
                return Err(Error::Data(format!("sample {z} lies outside the annulus")));
            }
            logs.push(t);
        }
        logs.sort_by(f64::total_cmp);
        logs.dedup();
        // The radial spacing must resolve the cutoff transition.
        let max_gap = -lq / 8.0;
        let mut prev = lq;
        for t in logs.iter().copied().chain([0.0]) {
            if t - prev > max_gap {
                return Err(Error::Data(format!("no samples with log|z+| in ({prev}, {t})")));
            }
            prev = t;
        }
        Ok(())
    }
}

/// Paired samples of maps on the two halves of a gluing chart.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GluingSamples {
    pub z_plus: Vec<Complex64>,
    pub z_minus: Vec<Complex64>,
    pub phi_plus: Vec<Vec<Complex64>>,
    pub phi_minus: Vec<Vec<Complex64>>,
}

/// `phi+-(z+-) = beta(|z+-|^2 / |Q|) phi`.
pub fn cut(samples: &AnnulusSamples, cutoffs: &CutoffPair) -> Result<GluingSamples> {
    samples.check()?;
    let lq = samples.q.norm().ln();
    let z_minus = samples.z_minus();
    let scaled = |z: &Complex64, v: &[Complex64]| {
        let b = cutoffs.beta_log(2.0 * z.norm().ln() - lq);
        v.iter().map(|x| x * b).collect::<Vec<_>>()
    };
    Ok(GluingSamples {
        phi_plus: samples.z_plus.par_iter().zip(&samples.values).map(|(z, v)| scaled(z, v)).collect(),
        phi_minus: z_minus.par_iter().zip(&samples.values).map(|(z, v)| scaled(z, v)).collect(),
        z_plus: samples.z_plus.clone(),
        z_minus,
    })
}

/// `G(z+, z-) = rho(|z-|) phi+(z+) + rho(|z+|) phi-(z-)`.
pub fn glue(samples: &GluingSamples, cutoffs: &CutoffPair) -> Result<Vec<Vec<Complex64>>> {
    let n = samples.z_plus.len();
    if samples.z_minus.len() != n || samples.phi_plus.len() != n || samples.phi_minus.len() != n {
        return Err(Error::Data("gluing samples have mismatched lengths".into()));
    }
    let bound = -2.0 * cutoffs.r;
    for (i, (zp, zm)) in samples.z_plus.iter().zip(&samples.z_minus).enumerate() {
        let lq = zp.norm().ln() + zm.norm().ln();
        if lq > bound + 1e-12 {
            return Err(Error::Precondition(format!("sample {i} has |z+ z-| = e^{lq} above e^{bound}")));
        }
        let vanishes = |z: &Complex64, v: &[Complex64]| z.norm() != 0.0 || v.iter().all(|x| x.norm() == 0.0);
        if !vanishes(zp, &samples.phi_plus[i]) || !vanishes(zm, &samples.phi_minus[i]) {
            return Err(Error::Precondition(format!("sample {i}: maps must vanish at the node")));
        }
    }
    let rho = |z: &Complex64| if z.norm() == 0.0 { 1.0 } else { cutoffs.rho_log(z.norm().ln()) };
    (0..n)
        .into_par_iter()
        .map(|i| {
            let (a, b) = (rho(&samples.z_minus[i]), rho(&samples.z_plus[i]));
            let (p, m) = (&samples.phi_plus[i], &samples.phi_minus[i]);
            if p.len() != m.len() {
                return Err(Error::Data(format!("sample {i}: maps have different target dimensions")));
            }
            Ok(p.iter().zip(m).map(|(x, y)| x * a + y * b).collect())
        })
        .collect()
}
