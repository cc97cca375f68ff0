//! Quasi-Newton minimization with analytic gradients.

use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct BfgsOptions {
    pub gradient_tolerance: f64,
    pub max_iterations: usize,
}

impl Default for BfgsOptions {
    fn default() -> Self {
        Self {
            gradient_tolerance: 1e-8,
            max_iterations: 500,
        }
    }
}

#[derive(Clone, Debug)]
pub struct BfgsOutcome {
    pub x: Vec<f64>,
    pub value: f64,
    pub gradient_norm: f64,
    pub iterations: usize,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Minimizes `f`, which returns the value and gradient at a point.
///
/// Inverse-Hessian BFGS with a backtracking Armijo line search; the update
/// is skipped when the curvature condition fails.
pub fn minimize<F>(mut f: F, x0: &[f64], opts: &BfgsOptions) -> Result<BfgsOutcome>
where
    F: FnMut(&[f64]) -> Result<(f64, Vec<f64>)>,
{
    let n = x0.len();
    let mut x = x0.to_vec();
    let (mut fx, mut g) = f(&x)?;
    let mut h_inv = identity(n);

    for iter in 0..opts.max_iterations {
        let gnorm = norm(&g);
        if gnorm < opts.gradient_tolerance {
            return Ok(BfgsOutcome {
                x,
                value: fx,
                gradient_norm: gnorm,
                iterations: iter,
            });
        }
        let mut p: Vec<f64> = (0..n).map(|i| -dot(&h_inv[i], &g)).collect();
        let mut slope = dot(&p, &g);
        if slope >= 0.0 {
            // lost positive definiteness: fall back to steepest descent
            h_inv = identity(n);
            p = g.iter().map(|v| -v).collect();
            slope = -gnorm * gnorm;
        }

        let mut step = 1.0;
        let mut accepted = None;
        for _ in 0..60 {
            let trial: Vec<f64> = x.iter().zip(&p).map(|(xi, pi)| xi + step * pi).collect();
            let (ft, gt) = f(&trial)?;
            if ft <= fx + 1e-4 * step * slope {
                accepted = Some((trial, ft, gt));
                break;
            }
            step *= 0.5;
        }
        let Some((x_new, f_new, g_new)) = accepted else {
            // no decrease possible at working precision
            return if gnorm < opts.gradient_tolerance.sqrt() {
                Ok(BfgsOutcome {
                    x,
                    value: fx,
                    gradient_norm: gnorm,
                    iterations: iter,
                })
            } else {
                Err(Error::NotConverged {
                    what: "BFGS line search",
                    iterations: iter,
                    residual: gnorm,
                })
            };
        };

        let s: Vec<f64> = x_new.iter().zip(&x).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = g_new.iter().zip(&g).map(|(a, b)| a - b).collect();
        let sy = dot(&s, &y);
        if sy > 1e-12 * norm(&s) * norm(&y) {
            let rho = 1.0 / sy;
            let hy: Vec<f64> = (0..n).map(|i| dot(&h_inv[i], &y)).collect();
            let yhy = dot(&y, &hy);
            for i in 0..n {
                for j in 0..n {
                    h_inv[i][j] += -rho * (hy[i] * s[j] + s[i] * hy[j])
                        + (rho * rho * yhy + rho) * s[i] * s[j];
                }
            }
        }
        x = x_new;
        fx = f_new;
        g = g_new;
    }
    let gnorm = norm(&g);
    if gnorm < opts.gradient_tolerance {
        Ok(BfgsOutcome {
            x,
            value: fx,
            gradient_norm: gnorm,
            iterations: opts.max_iterations,
        })
    } else {
        Err(Error::NotConverged {
            what: "BFGS",
            iterations: opts.max_iterations,
            residual: gnorm,
        })
    }
}

fn identity(n: usize) -> Vec<Vec<f64>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect()
}
