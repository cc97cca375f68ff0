//! Morse-potential fits of bond-stretch curves and the derived
//! spectroscopic constants.
//!
//! `E(r) = D_e (1 - exp(-a (r - r_e)))^2 + E_min`, with
//! `omega_e = a sqrt(2 D_e / mu)` and `omega_e x_e = omega_e^2 / (4 D_e)`.

use log::warn;
use nalgebra::{Matrix4, Vector4};

use crate::constants::{AMU_TO_ME, HARTREE_TO_CM};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MorseParams {
    /// Well depth, hartree.
    pub d_e: f64,
    /// Equilibrium distance, bohr.
    pub r_e: f64,
    /// Range parameter, 1/bohr.
    pub a: f64,
    /// Energy at the minimum, hartree.
    pub e_min: f64,
}

impl MorseParams {
    pub fn energy(&self, r: f64) -> f64 {
        let u = (-self.a * (r - self.r_e)).exp();
        self.d_e * (1.0 - u).powi(2) + self.e_min
    }

    /// Partial derivatives with respect to `(d_e, r_e, a, e_min)`.
    fn jacobian_row(&self, r: f64) -> Vector4<f64> {
        let u = (-self.a * (r - self.r_e)).exp();
        let one_u = 1.0 - u;
        Vector4::new(
            one_u * one_u,
            -2.0 * self.d_e * one_u * self.a * u,
            2.0 * self.d_e * one_u * (r - self.r_e) * u,
            1.0,
        )
    }

    fn to_vec(self) -> Vector4<f64> {
        Vector4::new(self.d_e, self.r_e, self.a, self.e_min)
    }

    fn from_vec(v: &Vector4<f64>) -> Self {
        Self {
            d_e: v[0],
            r_e: v[1],
            a: v[2],
            e_min: v[3],
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MorseFit {
    pub d_e: f64,
    pub r_e: f64,
    pub a: f64,
    pub e_min: f64,
    /// Root-mean-square residual, hartree.
    pub rms: f64,
    /// cm^-1.
    pub omega_e: f64,
    /// cm^-1.
    pub omega_e_x_e: f64,
    /// amu.
    pub reduced_mass: f64,
    /// The data barely constrain the well depth (nearly harmonic sample).
    pub weak_d_e: bool,
}

impl MorseFit {
    pub fn params(&self) -> MorseParams {
        MorseParams {
            d_e: self.d_e,
            r_e: self.r_e,
            a: self.a,
            e_min: self.e_min,
        }
    }
}

/// `(omega_e, omega_e x_e)` in cm^-1 from `d_e` (hartree), `a` (1/bohr) and
/// the reduced mass in amu.
pub fn spectroscopic_constants(d_e: f64, a: f64, reduced_mass_amu: f64) -> (f64, f64) {
    let mu = reduced_mass_amu * AMU_TO_ME;
    let omega = a * (2.0 * d_e / mu).sqrt() * HARTREE_TO_CM;
    let omega_x = omega * omega / (4.0 * d_e * HARTREE_TO_CM);
    (omega, omega_x)
}

struct LmOutcome {
    params: MorseParams,
    sse: f64,
    jtj: Matrix4<f64>,
}

fn sse(p: &MorseParams, points: &[(f64, f64)]) -> f64 {
    points.iter().map(|(r, e)| (p.energy(*r) - e).powi(2)).sum()
}

fn levenberg_marquardt(points: &[(f64, f64)], start: MorseParams, max_iter: usize) -> LmOutcome {
    let mut p = start;
    let mut cost = sse(&p, points);
    let mut lambda = 1e-3;
    let mut jtj = Matrix4::zeros();
    for _ in 0..max_iter {
        jtj = Matrix4::zeros();
        let mut jtr = Vector4::zeros();
        for (r, e) in points {
            let j = p.jacobian_row(*r);
            let res = p.energy(*r) - e;
            jtj += j * j.transpose();
            jtr += j * res;
        }
        let mut improved = false;
        for _ in 0..30 {
            let mut a = jtj;
            for k in 0..4 {
                a[(k, k)] += lambda * jtj[(k, k)].max(1e-30);
            }
            let Some(step) = a.lu().solve(&(-jtr)) else {
                lambda *= 10.0;
                continue;
            };
            let trial = MorseParams::from_vec(&(p.to_vec() + step));
            let c = sse(&trial, points);
            if c.is_finite() && c <= cost && trial.a > 0.0 && trial.d_e > 0.0 {
                let rel = step.component_div(&p.to_vec().map(|v| v.abs().max(1e-12))).amax();
                p = trial;
                let done = rel < 1e-14 || cost - c <= 1e-30;
                cost = c;
                lambda = (lambda * 0.3).max(1e-15);
                improved = true;
                if done {
                    return LmOutcome { params: p, sse: cost, jtj };
                }
                break;
            }
            lambda *= 10.0;
        }
        if !improved {
            break;
        }
    }
    LmOutcome { params: p, sse: cost, jtj }
}

/// Least-squares Morse fit to `(r [bohr], E [hartree])` points.
pub fn fit_morse(points: &[(f64, f64)], reduced_mass_amu: f64) -> Result<MorseFit> {
    if points.len() < 4 {
        return Err(Error::Fit(format!("need at least 4 points, got {}", points.len())));
    }
    if !(reduced_mass_amu > 0.0) {
        return Err(Error::Fit("reduced mass must be positive".into()));
    }
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    let (imin, &(r0, e0)) = pts
        .iter()
        .enumerate()
        .min_by(|a, b| a.1 .1.total_cmp(&b.1 .1))
        .expect("nonempty");
    if imin == 0 || imin == pts.len() - 1 {
        return Err(Error::Fit("the lowest point is at the edge; no bracketed minimum".into()));
    }

    // parabola through the lowest point and its neighbours
    let (r1, e1) = pts[imin - 1];
    let (r2, e2) = pts[imin + 1];
    let d1 = (e1 - e0) / (r1 - r0);
    let d2 = (e2 - e0) / (r2 - r0);
    let curvature = ((d2 - d1) / (r2 - r1)).max(1e-8);
    let r_e0 = 0.5 * (r0 + r1) - d1 / (2.0 * curvature);
    let r_e0 = if r_e0.is_finite() && r_e0 > r1 && r_e0 < r2 { r_e0 } else { r0 };
    let e_min0 = e0 - curvature * (r0 - r_e0).powi(2);

    let span = pts.iter().map(|p| p.1).fold(f64::MIN, f64::max) - e0;
    let mut best: Option<LmOutcome> = None;
    for mult in [0.5, 1.0, 2.0, 4.0, 10.0] {
        let d0 = (span * mult).max(1e-6);
        let start = MorseParams {
            d_e: d0,
            r_e: r_e0,
            a: (curvature / d0).sqrt(),
            e_min: e_min0,
        };
        let out = levenberg_marquardt(&pts, start, 500);
        if best.as_ref().is_none_or(|b| out.sse < b.sse) {
            best = Some(out);
        }
    }
    let out = best.expect("at least one start");
    let p = out.params;
    if ![p.d_e, p.r_e, p.a, p.e_min].iter().all(|v| v.is_finite()) || p.d_e <= 0.0 || p.a <= 0.0 {
        return Err(Error::Fit(format!("fit diverged to {p:?}")));
    }

    let dof = (pts.len() as f64 - 4.0).max(1.0);
    let s2 = out.sse / dof;
    let rel_err = out
        .jtj
        .try_inverse()
        .map(|inv| (s2 * inv[(0, 0)]).max(0.0).sqrt() / p.d_e)
        .unwrap_or(f64::INFINITY);
    let weak_d_e = p.d_e > 20.0 * span || rel_err > 0.1;
    if weak_d_e {
        warn!(
            "Morse fit: D_e = {:.6} is weakly determined by data spanning {:.3e} hartree",
            p.d_e, span
        );
    }
    let (omega_e, omega_e_x_e) = spectroscopic_constants(p.d_e, p.a, reduced_mass_amu);
    Ok(MorseFit {
        d_e: p.d_e,
        r_e: p.r_e,
        a: p.a,
        e_min: p.e_min,
        rms: (out.sse / pts.len() as f64).sqrt(),
        omega_e,
        omega_e_x_e,
        reduced_mass: reduced_mass_amu,
        weak_d_e,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const N2: MorseParams = MorseParams {
        d_e: 0.4022,
        r_e: 2.115,
        a: 1.335,
        e_min: -109.2821,
    };

    #[test]
    fn nitrogen_constants() {
        let (w, wx) = spectroscopic_constants(N2.d_e, N2.a, 7.00155);
        assert!((w - 2326.0).abs() < 2.0, "{w}");
        assert!((wx - 15.3).abs() < 0.2, "{wx}");
    }

    #[test]
    fn recovers_exact_parameters() {
        let pts: Vec<(f64, f64)> = (0..15)
            .map(|i| {
                let r = 1.7 + 0.1 * i as f64;
                (r, N2.energy(r))
            })
            .collect();
        let fit = fit_morse(&pts, 7.00155).unwrap();
        assert!((fit.d_e - N2.d_e).abs() < 1e-8);
        assert!((fit.r_e - N2.r_e).abs() < 1e-8);
        assert!((fit.a - N2.a).abs() < 1e-8);
        assert!((fit.e_min - N2.e_min).abs() < 1e-8);
        assert!(!fit.weak_d_e);
        let expected = fit.omega_e * fit.omega_e / (4.0 * fit.d_e * HARTREE_TO_CM);
        assert_eq!(fit.omega_e_x_e, expected);
    }

    #[test]
    fn quadratic_data_is_flagged() {
        let pts: Vec<(f64, f64)> = (0..9)
            .map(|i| {
                let r = 1.0 + 0.05 * i as f64;
                (r, 0.3 * (r - 1.2).powi(2) - 1.0)
            })
            .collect();
        let fit = fit_morse(&pts, 1.0).unwrap();
        assert!(fit.weak_d_e);
    }

    #[test]
    fn rejects_unbracketed_or_short_input() {
        assert!(fit_morse(&[(1.0, 0.0), (2.0, 1.0), (3.0, 2.0)], 1.0).is_err());
        assert!(fit_morse(&[(1.0, 0.0), (2.0, 1.0), (3.0, 2.0), (4.0, 3.0)], 1.0).is_err());
    }
}
