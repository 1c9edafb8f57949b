use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Samples of a map from the annulus `e^{-(R+1)} <= |z| <= e^{R+1}` into
/// `(C*)^k x R^{d-2k}`, on circles `|z| = e^{t_i}` at angles `2 pi j / n_theta`.
///
/// `complex` is indexed `[circle][angle][coordinate]` and flattened, likewise `real`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CylinderSamples {
    pub r: f64,
    pub t: Vec<f64>,
    pub n_theta: usize,
    pub k: usize,
    #[serde(default)]
    pub n_real: usize,
    pub complex: Vec<Complex64>,
    #[serde(default)]
    pub real: Vec<f64>,
}

impl CylinderSamples {
    /// Evenly spaced circles over the full annulus.
    pub fn tabulate(
        r: f64,
        n_circles: usize,
        n_theta: usize,
        k: usize,
        n_real: usize,
        f: impl Fn(Complex64) -> (Vec<Complex64>, Vec<f64>) + Sync,
    ) -> Self {
        let t: Vec<f64> = (0..n_circles)
            .map(|i| if n_circles > 1 { -(r + 1.0) + 2.0 * (r + 1.0) * i as f64 / (n_circles - 1) as f64 } else { 0.0 })
            .collect();
        let rows: Vec<(Vec<Complex64>, Vec<f64>)> = t
            .par_iter()
            .flat_map_iter(|&ti| (0..n_theta).map(move |j| Complex64::from_polar(ti.exp(), TAU * j as f64 / n_theta as f64)))
            .map(|z| f(z))
            .collect();
        let mut complex = Vec::with_capacity(rows.len() * k);
        let mut real = Vec::with_capacity(rows.len() * n_real);
        for (c, x) in rows {
            complex.extend(c);
            real.extend(x);
        }
        CylinderSamples { r, t, n_theta, k, n_real, complex, real }
    }

    fn point(&self, i: usize, j: usize) -> Complex64 {
        Complex64::from_polar(self.t[i].exp(), TAU * j as f64 / self.n_theta as f64)
    }

    fn c(&self, i: usize, j: usize, a: usize) -> Complex64 {
        self.complex[(i * self.n_theta + j) * self.k + a]
    }

    fn x(&self, i: usize, j: usize, b: usize) -> f64 {
        self.real[(i * self.n_theta + j) * self.n_real + b]
    }

    fn check(&self) -> Result<()> {
        let n = self.t.len() * self.n_theta;
        if !(self.r.is_finite() && self.r > 0.0) {
            return Err(Error::Domain(format!("annulus size must be positive, got {}", self.r)));
        }
        if self.t.is_empty() || self.n_theta < 3 {
            return Err(Error::Data("need at least one circle with 3 angular samples".into()));
        }
        if self.complex.len() != n * self.k || self.real.len() != n * self.n_real {
            return Err(Error::Data(format!(
                "expected {} complex and {} real values, got {} and {}",
                n * self.k,
                n * self.n_real,
                self.complex.len(),
                self.real.len()
            )));
        }
        if self.t.iter().any(|t| !t.is_finite() || t.abs() > self.r + 1.0 + 1e-9) {
            return Err(Error::Data("circle radius outside the annulus".into()));
        }
        if self.t.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Data("circle log-radii must increase".into()));
        }
        if self.complex.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) || self.real.iter().any(|x| !x.is_finite()) {
            return Err(Error::Data("sample value is not finite".into()));
        }
        if let Some(p) = self.complex.iter().position(|z| z.norm() == 0.0) {
            return Err(Error::Domain(format!("complex sample {p} is zero")));
        }
        Ok(())
    }
}

/// `F(z) = (c_1 z^{alpha_1}, ..., c_k z^{alpha_k}, x_1, ..., x_{d-2k})` with the
/// residual profile of the samples against it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CylinderModel {
    pub alpha: Vec<i64>,
    pub c: Vec<[f64; 2]>,
    /// Tropical offsets; samples carry no tropical part, so these are zero.
    pub offsets: Vec<String>,
    pub real_constants: Vec<f64>,
    pub delta_hat: f64,
    pub sup_residual: f64,
    /// Smallest `C` with residual `<= C e^{-delta R} (|z|^delta + |z|^{-delta})`
    /// for the requested `delta`.
    pub bound_constant: f64,
}

/// Residuals below this are treated as exact.
const NOISE_FLOOR: f64 = 1e-11;

fn wrap(a: f64) -> f64 {
    let w = a.rem_euclid(TAU);
    if w > PI { w - TAU } else { w }
}

pub fn fit_cylinder_model(samples: &CylinderSamples, delta: f64) -> Result<CylinderModel> {
    samples.check()?;
    if !(delta.is_finite() && delta >= 0.0) {
        return Err(Error::Domain(format!("target exponent must be nonnegative, got {delta}")));
    }
    let n = samples.n_theta;
    let center = (0..samples.t.len()).min_by(|&a, &b| samples.t[a].abs().total_cmp(&samples.t[b].abs())).expect("checked nonempty");
    let mut alpha = Vec::with_capacity(samples.k);
    let mut c = Vec::with_capacity(samples.k);
    for a in 0..samples.k {
        let mut total = 0.0;
        for j in 0..n {
            let step = wrap(samples.c(center, (j + 1) % n, a).arg() - samples.c(center, j, a).arg());
            if step.abs() >= PI / 2.0 {
                return Err(Error::Resolution(format!(
                    "coordinate {a}: phase jump {step:.3} between angular samples {j} and {}; sample more densely",
                    (j + 1) % n
                )));
            }
            total += step;
        }
        let winding = (total / TAU).round() as i64;
        // Geometric mean of f / z^alpha along the centre circle, with the
        // phase unwrapped.
        let mut log_sum = Complex64::new(0.0, 0.0);
        let mut phase = 0.0;
        let mut prev = 0.0;
        for j in 0..n {
            let g = samples.c(center, j, a) / samples.point(center, j).powi(winding as i32);
            phase = if j == 0 { g.arg() } else { phase + wrap(g.arg() - prev) };
            prev = g.arg();
            log_sum += Complex64::new(g.norm().ln(), phase);
        }
        let lc = log_sum / n as f64;
        let ci = Complex64::from_polar(lc.re.exp(), wrap(lc.im));
        alpha.push(winding);
        c.push(ci);
    }
    let real_constants: Vec<f64> =
        (0..samples.n_real).map(|b| (0..n).map(|j| samples.x(center, j, b)).sum::<f64>() / n as f64).collect();

    // Residual of each sample in log coordinates on the (C*)^k factor.
    let envelope: Vec<f64> = (0..samples.t.len())
        .into_par_iter()
        .map(|i| {
            (0..n)
                .map(|j| {
                    let z = samples.point(i, j);
                    let cx = (0..samples.k).map(|a| {
                        let ratio = samples.c(i, j, a) / (c[a] * z.powi(alpha[a] as i32));
                        Complex64::new(ratio.norm().ln(), ratio.arg()).norm()
                    });
                    let rx = (0..samples.n_real).map(|b| (samples.x(i, j, b) - real_constants[b]).abs());
                    cx.chain(rx).fold(0.0, f64::max)
                })
                .fold(0.0, f64::max)
        })
        .collect();
    let sup_residual = envelope.iter().copied().fold(0.0, f64::max);
    let r = samples.r;
    let bound_constant = samples
        .t
        .iter()
        .zip(&envelope)
        .map(|(t, e)| e / ((-delta * r).exp() * ((delta * t).exp() + (-delta * t).exp())))
        .fold(0.0, f64::max);
    Ok(CylinderModel {
        alpha,
        c: c.iter().map(|z| [z.re, z.im]).collect(),
        offsets: vec!["0".into(); samples.k],
        real_constants,
        delta_hat: decay_exponent(&samples.t, &envelope),
        sup_residual,
        bound_constant,
    })
}

/// Slope of `log envelope` against `|t|` over the outer half of the annulus,
/// pairing each circle with its mirror image.
fn decay_exponent(t: &[f64], envelope: &[f64]) -> f64 {
    let reach = t.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let mirror = |i: usize| -> f64 {
        let target = -t[i];
        let (j, _) = t.iter().enumerate().fold((i, f64::INFINITY), |best, (j, x)| {
            let d = (x - target).abs();
            if d < best.1 { (j, d) } else { best }
        });
        envelope[i].max(envelope[j])
    };
    let points: Vec<(f64, f64)> = (0..t.len())
        .filter(|&i| t[i].abs() >= reach / 2.0)
        .map(|i| (t[i].abs(), mirror(i)))
        .filter(|&(_, e)| e > NOISE_FLOOR)
        .map(|(x, e)| (x, e.ln()))
        .collect();
    if points.len() < 2 {
        return 0.0;
    }
    let m = points.len() as f64;
    let (mx, my) = points.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x / m, b + y / m));
    let (sxy, sxx) = points.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + (x - mx) * (y - my), b + (x - mx) * (x - mx)));
    if sxx == 0.0 { 0.0 } else { sxy / sxx }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_monomial() {
        let s = CylinderSamples::tabulate(4.0, 17, 64, 1, 0, |z| (vec![z.powi(3) * 5.0], vec![]));
        let fit = fit_cylinder_model(&s, 0.5).unwrap();
        assert_eq!(fit.alpha, [3]);
        assert!((fit.c[0][0] - 5.0).abs() < 1e-9 && fit.c[0][1].abs() < 1e-9);
        assert!(fit.sup_residual < 1e-9);
        assert_eq!(fit.delta_hat, 0.0);
    }

    #[test]
    fn perturbed_inverse() {
        let s = CylinderSamples::tabulate(6.0, 29, 256, 1, 1, |z| (vec![2.0 / z * (0.1 * z).exp()], vec![1.5]));
        let fit = fit_cylinder_model(&s, 0.5).unwrap();
        assert_eq!(fit.alpha, [-1]);
        assert!((fit.c[0][0] - 2.0).abs() < 1e-9);
        assert_eq!(fit.real_constants, [1.5]);
    }

    #[test]
    fn undersampled_winding_is_ambiguous() {
        let s = CylinderSamples::tabulate(2.0, 5, 8, 1, 0, |z| (vec![z.powi(3)], vec![]));
        assert!(matches!(fit_cylinder_model(&s, 0.5), Err(Error::Resolution(_))));
    }
}
