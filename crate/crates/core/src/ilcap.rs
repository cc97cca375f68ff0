//! Involutory linear combinations of anti-commuting Paulis (ILCAP).
//!
//! For mutually anti-commuting `T_k` and unit `alpha`, `T = sum alpha_k T_k`
//! squares to one, so `exp(-i t T/2) |0> = C_0 |0> + sum_k C_k |phi_k>`
//! with `|phi_k> = -i T_k |0>`, `C_0 = cos(t/2)`, `C_k = alpha_k sin(t/2)`.
//! Minimizing the energy over `(t, alpha)` is the lowest eigenproblem of
//! `H` in the basis `{|0>, |phi_1>, ..}`.
//!
//! Sectors left out of that basis can be folded back in with an
//! energy-dependent Brillouin-Wigner downfolding, or estimated with an
//! Epstein-Nesbet second-order sum.

use std::collections::{HashMap, HashSet};

use log::warn;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::acset::AnticommutingSet;
use crate::bits::BitVector;
use crate::error::{Error, Result};
use crate::pauli::{Phase, PauliSum, PauliWord, ReferenceState};
use crate::screen::ising_decompose;

/// Denominators smaller than this are skipped in the BW and EN sums.
pub const SINGULAR_DENOMINATOR: f64 = 1e-8;

/// `sin(t/2)` below this is treated as the identity rotation.
pub const IDENTITY_ROTATION_TOL: f64 = 1e-10;

/// Terms grouped by x-mask for fast `<a|H|b>`.
struct ByXMask<'a> {
    groups: HashMap<&'a BitVector, Vec<(&'a PauliWord, f64)>>,
}

impl<'a> ByXMask<'a> {
    fn new(h: &'a PauliSum) -> Self {
        let mut groups: HashMap<&BitVector, Vec<_>> = HashMap::new();
        for (w, c) in h.iter() {
            groups.entry(w.x_mask()).or_default().push((w, c));
        }
        Self { groups }
    }

    /// `<bra|H|ket>` between computational basis states.
    fn element(&self, bra: &BitVector, ket: &BitVector) -> Complex64 {
        let flip = bra.xor(ket);
        let mut acc = Complex64::new(0.0, 0.0);
        if let Some(terms) = self.groups.get(&flip) {
            for (w, c) in terms {
                let (_, ph) = w.act_on_basis(ket);
                acc += ph.scale(Complex64::new(*c, 0.0));
            }
        }
        acc
    }
}

/// `|phi_k> = amp * |bits>`; the reference itself has amplitude one.
fn basis_vectors(set: &AnticommutingSet, state: &ReferenceState) -> Vec<(BitVector, Complex64)> {
    let mut out = vec![(state.bits().clone(), Complex64::new(1.0, 0.0))];
    for g in &set.generators {
        let (bits, ph) = g.act_on_basis(state.bits());
        out.push((bits, (Phase::MINUS_I * ph).to_complex()));
    }
    out
}

fn reality_tolerance(h: &PauliSum) -> f64 {
    1e-12 * (1.0 + h.l1_norm())
}

#[derive(Clone, Debug)]
pub struct IlcapProblem {
    pub h_matrix: DMatrix<f64>,
    pub generators: AnticommutingSet,
    pub reference: ReferenceState,
}

impl IlcapProblem {
    pub fn dim(&self) -> usize {
        self.h_matrix.nrows()
    }
}

/// Assembles `H_00 = <0|H|0>`, `H_k0 = i <0|T_k H|0>`,
/// `H_0k = -i <0|H T_k|0>`, `H_kj = <0|T_k H T_j|0>`.
pub fn build_h_matrix(
    h: &PauliSum,
    set: &AnticommutingSet,
    state: &ReferenceState,
) -> Result<IlcapProblem> {
    if state.n() != h.n() {
        return Err(Error::QubitMismatch {
            left: h.n(),
            right: state.n(),
        });
    }
    if let Some(g) = set.generators.iter().find(|g| g.n() != h.n()) {
        return Err(Error::QubitMismatch {
            left: h.n(),
            right: g.n(),
        });
    }
    let index = ByXMask::new(h);
    let basis = basis_vectors(set, state);
    let dim = basis.len();
    let tol = reality_tolerance(h);
    let rows: Vec<Vec<f64>> = (0..dim)
        .into_par_iter()
        .map(|i| {
            (0..dim)
                .map(|j| {
                    let (bi, ai) = &basis[i];
                    let (bj, aj) = &basis[j];
                    let v = ai.conj() * aj * index.element(bi, bj);
                    if v.im.abs() > tol {
                        Err(Error::ImaginaryElement {
                            row: i,
                            col: j,
                            value: v.im,
                        })
                    } else {
                        Ok(v.re)
                    }
                })
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<_>>()?;
    let h_matrix = DMatrix::from_fn(dim, dim, |i, j| rows[i][j]);
    Ok(IlcapProblem {
        h_matrix,
        generators: set.clone(),
        reference: state.clone(),
    })
}

/// Eigen-decomposition of a real symmetric matrix by cyclic Jacobi
/// rotations. Eigenvalues ascend; eigenvectors are the matching columns.
pub fn jacobi_eigen(a: &DMatrix<f64>) -> Result<(DVector<f64>, DMatrix<f64>)> {
    let n = a.nrows();
    if a.ncols() != n {
        return Err(Error::Dimension {
            expected: n,
            got: a.ncols(),
        });
    }
    let mut m = a.clone();
    let mut v = DMatrix::<f64>::identity(n, n);
    let scale = m.iter().fold(0.0f64, |s, x| s.max(x.abs())).max(f64::MIN_POSITIVE);
    const MAX_SWEEPS: usize = 100;
    let mut converged = n <= 1;
    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| m[(i, j)] * m[(i, j)])
            .sum::<f64>()
            .sqrt();
        if off <= f64::EPSILON * scale * n as f64 {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[(p, q)];
                if apq.abs() <= 1e-300 {
                    continue;
                }
                let theta = (m[(q, q)] - m[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let mkp = m[(k, p)];
                    let mkq = m[(k, q)];
                    m[(k, p)] = c * mkp - s * mkq;
                    m[(k, q)] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[(p, k)];
                    let mqk = m[(q, k)];
                    m[(p, k)] = c * mpk - s * mqk;
                    m[(q, k)] = s * mpk + c * mqk;
                }
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }
    if !converged {
        return Err(Error::NotConverged {
            what: "Jacobi eigensolver",
            iterations: MAX_SWEEPS,
            residual: f64::NAN,
        });
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(i, i)].total_cmp(&m[(j, j)]));
    let values = DVector::from_iterator(n, order.iter().map(|&i| m[(i, i)]));
    let vectors = DMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    Ok((values, vectors))
}

/// Lowest eigenvalue of a real symmetric matrix.
pub fn lowest_eigenvalue(a: &DMatrix<f64>) -> Result<f64> {
    Ok(jacobi_eigen(a)?.0[0])
}

#[derive(Clone, Debug)]
pub struct IlcapSolution {
    pub energy: f64,
    /// Unit eigenvector with `c[0] >= 0`.
    pub c: DVector<f64>,
    pub t: f64,
    pub alpha: Vec<f64>,
    /// `sin(t/2)` vanished, so `alpha` is undetermined and set to zero.
    pub identity_rotation: bool,
}

pub fn solve_ilcap(p: &IlcapProblem) -> Result<IlcapSolution> {
    let (values, vectors) = jacobi_eigen(&p.h_matrix)?;
    let mut c: DVector<f64> = vectors.column(0).into_owned();
    let lead = c.iter().position(|x| *x != 0.0).unwrap_or(0);
    if c[0] < 0.0 || (c[0] == 0.0 && c[lead] < 0.0) {
        c = -c;
    }
    let c0 = c[0].clamp(-1.0, 1.0);
    let t = 2.0 * c0.acos();
    let s = (t / 2.0).sin();
    let identity_rotation = s.abs() <= IDENTITY_ROTATION_TOL;
    let alpha = if identity_rotation {
        vec![0.0; p.dim() - 1]
    } else {
        c.iter().skip(1).map(|ci| ci / s).collect()
    };
    Ok(IlcapSolution {
        energy: values[0],
        c,
        t,
        alpha,
        identity_rotation,
    })
}

/// Energy of a trial state with given `(t, alpha)` from the matrix form.
pub fn ilcap_energy(p: &IlcapProblem, t: f64, alpha: &[f64]) -> Result<f64> {
    if alpha.len() + 1 != p.dim() {
        return Err(Error::Dimension {
            expected: p.dim() - 1,
            got: alpha.len(),
        });
    }
    let (s, c) = (t / 2.0).sin_cos();
    let v = DVector::from_iterator(p.dim(), std::iter::once(c).chain(alpha.iter().map(|a| a * s)));
    Ok((v.transpose() * &p.h_matrix * &v)[(0, 0)])
}

/// `U^† H U` for `U = cos(t/2) - i sin(t/2) T`, `T = sum alpha_k T_k`:
/// `c^2 H + i c s (T H - H T) + s^2 T H T`.
pub fn dress_ilcap(
    h: &PauliSum,
    generators: &[PauliWord],
    solution: &IlcapSolution,
    threshold: f64,
) -> Result<PauliSum> {
    if generators.len() != solution.alpha.len() {
        return Err(Error::Dimension {
            expected: generators.len(),
            got: solution.alpha.len(),
        });
    }
    if solution.identity_rotation {
        return Ok(h.truncate(threshold));
    }
    let (s, c) = (solution.t / 2.0).sin_cos();
    let mut terms: Vec<(PauliWord, Complex64)> = h
        .iter()
        .map(|(w, v)| (w.clone(), Complex64::new(c * c * v, 0.0)))
        .collect();
    for (g, &a) in generators.iter().zip(&solution.alpha) {
        if a == 0.0 {
            continue;
        }
        for (w, v) in h.iter() {
            if w.commutes_unchecked(g) {
                continue;
            }
            // T H - H T = 2 T P for anti-commuting terms
            let (tp, ph) = g.mul_unchecked(w);
            let coef = Complex64::I * (2.0 * c * s * a * v);
            terms.push((tp, ph.scale(coef)));
        }
    }
    for (gk, &ak) in generators.iter().zip(&solution.alpha) {
        if ak == 0.0 {
            continue;
        }
        for (w, v) in h.iter() {
            let (kp, ph1) = gk.mul_unchecked(w);
            for (gj, &aj) in generators.iter().zip(&solution.alpha) {
                if aj == 0.0 {
                    continue;
                }
                let (kpj, ph2) = kp.mul_unchecked(gj);
                terms.push((kpj, (ph1 * ph2).scale(Complex64::new(s * s * ak * aj * v, 0.0))));
            }
        }
    }
    Ok(PauliSum::from_complex_terms(h.n(), terms, reality_tolerance(h))?.truncate(threshold))
}

#[derive(Clone, Debug)]
pub struct BwPartition {
    /// `(M+1) x K` couplings `<phi_k|H|m>`.
    pub b: DMatrix<f64>,
    /// `<m|H|m>` for every excluded sector.
    pub d: DVector<f64>,
    pub excluded_masks: Vec<BitVector>,
}

/// Couplings to every Ising sector whose x-mask is not a generator x-mask.
pub fn bw_partition(h: &PauliSum, p: &IlcapProblem) -> Result<BwPartition> {
    let used: HashSet<&BitVector> = p.generators.generators.iter().map(|g| g.x_mask()).collect();
    let decomposition = ising_decompose(h);
    let excluded: Vec<BitVector> = decomposition
        .sectors
        .keys()
        .filter(|m| !used.contains(m))
        .cloned()
        .collect();
    let index = ByXMask::new(h);
    let basis = basis_vectors(&p.generators, &p.reference);
    let tol = reality_tolerance(h);
    let columns: Vec<(Vec<f64>, f64)> = excluded
        .par_iter()
        .enumerate()
        .map(|(col, m)| {
            let ket = p.reference.bits().xor(m);
            let b = basis
                .iter()
                .enumerate()
                .map(|(row, (bits, amp))| {
                    let v = amp.conj() * index.element(bits, &ket);
                    if v.im.abs() > tol {
                        Err(Error::ImaginaryElement {
                            row,
                            col,
                            value: v.im,
                        })
                    } else {
                        Ok(v.re)
                    }
                })
                .collect::<Result<Vec<f64>>>()?;
            Ok((b, h.basis_expectation(&ket)))
        })
        .collect::<Result<_>>()?;
    let k = excluded.len();
    let b = DMatrix::from_fn(p.dim(), k, |i, j| columns[j].0[i]);
    let d = DVector::from_iterator(k, columns.iter().map(|c| c.1));
    Ok(BwPartition {
        b,
        d,
        excluded_masks: excluded,
    })
}

#[derive(Clone, Debug)]
pub struct BwOutcome {
    pub energy: f64,
    pub iterations: usize,
    /// Sectors dropped at the final iterate for near-zero denominators.
    pub skipped: usize,
}

/// Fixed point of `E -> lambda_min(H - b (D - E)^-1 b^T)` starting from
/// `lambda_min(H)`.
pub fn bw_correct(
    p: &IlcapProblem,
    part: &BwPartition,
    tol: f64,
    max_iter: usize,
) -> Result<BwOutcome> {
    if part.b.nrows() != p.dim() || part.b.ncols() != part.d.len() {
        return Err(Error::Dimension {
            expected: p.dim(),
            got: part.b.nrows(),
        });
    }
    let mut e = lowest_eigenvalue(&p.h_matrix)?;
    let mut prev_delta = f64::INFINITY;
    let mut growing = 0;
    for it in 1..=max_iter {
        let mut heff = p.h_matrix.clone();
        let mut skipped = 0;
        for m in 0..part.d.len() {
            let denom = part.d[m] - e;
            if denom.abs() < SINGULAR_DENOMINATOR {
                skipped += 1;
                continue;
            }
            let col = part.b.column(m);
            heff -= (col * col.transpose()) / denom;
        }
        if skipped > 0 {
            warn!("Brillouin-Wigner: skipped {skipped} near-singular denominators at E = {e}");
        }
        let e_new = lowest_eigenvalue(&heff)?;
        let delta = (e_new - e).abs();
        e = e_new;
        if delta < tol {
            return Ok(BwOutcome {
                energy: e,
                iterations: it,
                skipped,
            });
        }
        if delta > prev_delta {
            growing += 1;
            if growing >= 3 {
                return Err(Error::Divergence { step: it, delta });
            }
        } else {
            growing = 0;
        }
        prev_delta = delta;
    }
    Err(Error::NotConverged {
        what: "Brillouin-Wigner iterations",
        iterations: max_iter,
        residual: prev_delta,
    })
}

/// Epstein-Nesbet second-order estimate over singly X-flipped references:
/// `E_0 + sum_m |<0|I_m|0>|^2 / (E_0 - <m|H|m>)`.
pub fn en_correct(h: &PauliSum, state: &ReferenceState) -> Result<f64> {
    let e0 = h.expectation(state)?;
    let d = ising_decompose(h);
    let mut e = e0;
    let mut skipped = 0;
    for (mask, sector) in &d.sectors {
        let w2 = sector.reference_value(state)?.norm_sqr();
        if w2 == 0.0 {
            continue;
        }
        let dm = d.diagonal.basis_expectation(&state.bits().xor(mask));
        let denom = e0 - dm;
        if denom.abs() < SINGULAR_DENOMINATOR {
            skipped += 1;
            continue;
        }
        e += w2 / denom;
    }
    if skipped > 0 {
        warn!("Epstein-Nesbet: skipped {skipped} near-degenerate sectors");
    }
    Ok(e)
}
