//! Exact references at desk scale: dense matrices, matrix-free products and
//! ground states.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::pauli::{PauliSum, PauliWord, ReferenceState};

pub const DENSE_LIMIT: usize = 14;
pub const MATRIX_FREE_LIMIT: usize = 20;

/// Above this many qubits [`ground_state`] switches from dense
/// diagonalization to Lanczos.
pub const DENSE_SOLVE_LIMIT: usize = 10;

pub type DenseOperator = DMatrix<Complex64>;
pub type StateVector = DVector<Complex64>;

fn guard(n: usize, limit: usize) -> Result<()> {
    if n > limit {
        Err(Error::SizeGuard { n, limit })
    } else {
        Ok(())
    }
}

/// Terms as `(x, z, c * i^y)` so that `<k ^ x| W |k> = coef * (-1)^{z.k}`.
fn compiled(op: &PauliSum) -> Vec<(u64, u64, Complex64)> {
    op.iter()
        .map(|(w, c)| {
            let phase = Complex64::I.powu(w.y_count() as u32);
            (w.x_mask().low_word(), w.z_mask().low_word(), phase * c)
        })
        .collect()
}

#[inline]
fn sign(z: u64, k: u64) -> f64 {
    if (z & k).count_ones() % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

pub fn to_dense(op: &PauliSum) -> Result<DenseOperator> {
    guard(op.n(), DENSE_LIMIT)?;
    let dim = 1usize << op.n();
    let terms = compiled(op);
    let mut m = DMatrix::<Complex64>::zeros(dim, dim);
    for k in 0..dim as u64 {
        for &(x, z, c) in &terms {
            m[((k ^ x) as usize, k as usize)] += c * sign(z, k);
        }
    }
    Ok(m)
}

pub fn word_to_dense(w: &PauliWord) -> Result<DenseOperator> {
    to_dense(&PauliSum::from_word(w.clone(), 1.0))
}

/// Basis vector of a reference state.
pub fn reference_vector(state: &ReferenceState) -> Result<StateVector> {
    guard(state.n(), MATRIX_FREE_LIMIT)?;
    let mut v = StateVector::zeros(1 << state.n());
    v[state.bits().low_word() as usize] = Complex64::new(1.0, 0.0);
    Ok(v)
}

/// `op |bits>` as a full state vector.
pub fn apply_to_basis_state(op: &PauliSum, bits: u64) -> Result<StateVector> {
    guard(op.n(), MATRIX_FREE_LIMIT)?;
    let dim = 1usize << op.n();
    if bits as usize >= dim {
        return Err(Error::IndexOutOfRange {
            index: bits as usize,
            len: dim,
        });
    }
    let mut out = StateVector::zeros(dim);
    for (x, z, c) in compiled(op) {
        out[(bits ^ x) as usize] += c * sign(z, bits);
    }
    Ok(out)
}

/// Matrix-free `op * psi`, parallel over output amplitudes.
pub fn apply(op: &PauliSum, psi: &[Complex64]) -> Result<Vec<Complex64>> {
    guard(op.n(), MATRIX_FREE_LIMIT)?;
    let dim = 1usize << op.n();
    if psi.len() != dim {
        return Err(Error::Dimension {
            expected: dim,
            got: psi.len(),
        });
    }
    let terms = compiled(op);
    let mut out = vec![Complex64::new(0.0, 0.0); dim];
    out.par_chunks_mut(1024).enumerate().for_each(|(chunk, slice)| {
        let base = chunk * 1024;
        for (off, o) in slice.iter_mut().enumerate() {
            let b = (base + off) as u64;
            let mut acc = Complex64::new(0.0, 0.0);
            for &(x, z, c) in &terms {
                let k = b ^ x;
                acc += c * sign(z, k) * psi[k as usize];
            }
            *o = acc;
        }
    });
    Ok(out)
}

/// Lowest eigenpair by dense diagonalization.
pub fn ground_state_dense(op: &PauliSum) -> Result<(f64, StateVector)> {
    let m = to_dense(op)?;
    lowest_hermitian(m)
}

fn lowest_hermitian(m: DenseOperator) -> Result<(f64, StateVector)> {
    let eig = m.symmetric_eigen();
    let (i, e) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .ok_or(Error::EmptyInput("operator"))?;
    Ok((*e, eig.eigenvectors.column(i).into_owned()))
}

#[derive(Clone, Debug)]
pub struct LanczosOptions {
    pub krylov_dim: usize,
    pub restarts: usize,
    pub tolerance: f64,
    pub seed: u64,
}

impl Default for LanczosOptions {
    fn default() -> Self {
        Self {
            krylov_dim: 80,
            restarts: 3,
            tolerance: 1e-10,
            seed: 7,
        }
    }
}

fn vdot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn vnorm(a: &[Complex64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// Lowest eigenpair by Lanczos with full reorthogonalization, restarted
/// from the Ritz vector.
pub fn ground_state_lanczos(op: &PauliSum, opts: &LanczosOptions) -> Result<(f64, StateVector)> {
    guard(op.n(), MATRIX_FREE_LIMIT)?;
    let dim = 1usize << op.n();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut start: Vec<Complex64> = (0..dim)
        .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    let mut last = (f64::NAN, f64::INFINITY);
    for _ in 0..=opts.restarts {
        let (e, v, residual) = lanczos_pass(op, &start, opts.krylov_dim.min(dim))?;
        last = (e, residual);
        if residual < opts.tolerance {
            return Ok((e, StateVector::from_vec(v)));
        }
        start = v;
    }
    Err(Error::NotConverged {
        what: "Lanczos",
        iterations: opts.restarts + 1,
        residual: last.1,
    })
}

fn lanczos_pass(op: &PauliSum, start: &[Complex64], m: usize) -> Result<(f64, Vec<Complex64>, f64)> {
    let n0 = vnorm(start);
    let mut basis: Vec<Vec<Complex64>> = vec![start.iter().map(|x| x / n0).collect()];
    let mut alpha = Vec::new();
    let mut beta: Vec<f64> = Vec::new();
    loop {
        let k = basis.len() - 1;
        let mut w = apply(op, &basis[k])?;
        let a = vdot(&basis[k], &w).re;
        alpha.push(a);
        // full reorthogonalization, twice for stability
        for _ in 0..2 {
            for q in &basis {
                let proj = vdot(q, &w);
                for (wi, qi) in w.iter_mut().zip(q) {
                    *wi -= proj * qi;
                }
            }
        }
        let b = vnorm(&w);
        if basis.len() == m || b < 1e-14 {
            let (theta, s) = tridiagonal_lowest(&alpha, &beta);
            let dim = start.len();
            let mut ritz = vec![Complex64::new(0.0, 0.0); dim];
            for (sj, q) in s.iter().zip(&basis) {
                for (r, qi) in ritz.iter_mut().zip(q) {
                    *r += qi * *sj;
                }
            }
            let rn = vnorm(&ritz);
            ritz.iter_mut().for_each(|r| *r /= rn);
            let hr = apply(op, &ritz)?;
            let residual = hr
                .iter()
                .zip(&ritz)
                .map(|(h, r)| (h - r * theta).norm_sqr())
                .sum::<f64>()
                .sqrt();
            return Ok((theta, ritz, residual));
        }
        beta.push(b);
        basis.push(w.iter().map(|x| x / b).collect());
    }
}

fn tridiagonal_lowest(alpha: &[f64], beta: &[f64]) -> (f64, Vec<f64>) {
    let m = alpha.len();
    let t = DMatrix::from_fn(m, m, |i, j| {
        if i == j {
            alpha[i]
        } else if i + 1 == j {
            beta[i]
        } else if j + 1 == i {
            beta[j]
        } else {
            0.0
        }
    });
    let eig = t.symmetric_eigen();
    let (i, e) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .expect("nonempty");
    (*e, eig.eigenvectors.column(i).iter().copied().collect())
}

/// Lowest eigenpair, dense up to [`DENSE_SOLVE_LIMIT`] qubits and Lanczos
/// beyond.
pub fn ground_state(op: &PauliSum) -> Result<(f64, StateVector)> {
    if op.n() <= DENSE_SOLVE_LIMIT {
        ground_state_dense(op)
    } else {
        ground_state_lanczos(op, &LanczosOptions::default())
    }
}

/// Lowest eigenvalue restricted to basis states with `n_e` set bits, the
/// fixed-electron-number block of a number-conserving Hamiltonian.
pub fn sector_ground_energy(op: &PauliSum, n_e: usize) -> Result<f64> {
    guard(op.n(), MATRIX_FREE_LIMIT)?;
    let states: Vec<u64> = (0..1u64 << op.n())
        .filter(|b| b.count_ones() as usize == n_e)
        .collect();
    if states.is_empty() {
        return Err(Error::EmptyInput("electron-number sector"));
    }
    let dim = states.len();
    if dim > 6000 {
        return Err(Error::SizeGuard {
            n: op.n(),
            limit: DENSE_LIMIT,
        });
    }
    let terms = compiled(op);
    let mut m = DMatrix::<Complex64>::zeros(dim, dim);
    for (col, &k) in states.iter().enumerate() {
        for &(x, z, c) in &terms {
            if let Ok(row) = states.binary_search(&(k ^ x)) {
                m[(row, col)] += c * sign(z, k);
            }
        }
    }
    Ok(lowest_hermitian(m)?.0)
}

/// `exp(-i theta/2 P) = cos(theta/2) - i sin(theta/2) P` as a dense matrix.
pub fn word_rotation(w: &PauliWord, theta: f64) -> Result<DenseOperator> {
    let p = word_to_dense(w)?;
    let dim = p.nrows();
    let (s, c) = (theta / 2.0).sin_cos();
    Ok(DenseOperator::identity(dim, dim) * Complex64::new(c, 0.0) - p * Complex64::new(0.0, s))
}

/// `prod_k exp(-i t_k T_k / 2)` with `k = 1` leftmost.
pub fn qcc_unitary(n: usize, generators: &[PauliWord], amplitudes: &[f64]) -> Result<DenseOperator> {
    guard(n, DENSE_LIMIT)?;
    let dim = 1usize << n;
    let mut u = DenseOperator::identity(dim, dim);
    for (g, &t) in generators.iter().zip(amplitudes) {
        u *= word_rotation(g, t)?;
    }
    Ok(u)
}

/// `<psi|op|psi>` for a normalized dense state.
pub fn dense_expectation(op: &DenseOperator, psi: &StateVector) -> f64 {
    (psi.adjoint() * op * psi)[(0, 0)].re
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::parse_word;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sum(n: usize, terms: &[(f64, &str)]) -> PauliSum {
        PauliSum::from_terms(n, terms.iter().map(|(c, w)| (parse_word(w, n).unwrap(), *c))).unwrap()
    }

    #[test]
    fn single_qubit_matrices() {
        let z = word_to_dense(&parse_word("Z0", 1).unwrap()).unwrap();
        assert_eq!(z, DMatrix::from_row_slice(2, 2, &[c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.)]));
        let x = word_to_dense(&parse_word("X0", 1).unwrap()).unwrap();
        assert_eq!(x, DMatrix::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)]));
        let y = word_to_dense(&parse_word("Y0", 1).unwrap()).unwrap();
        assert_eq!(y, DMatrix::from_row_slice(2, 2, &[c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)]));
    }

    #[test]
    fn ground_energies() {
        let (e, _) = ground_state(&sum(1, &[(1.0, "Z0"), (0.3, "X0")])).unwrap();
        assert!((e + 1.09f64.sqrt()).abs() < 1e-12);
        let (e, _) = ground_state(&sum(2, &[(1.0, "Z0 Z1")])).unwrap();
        assert!((e + 1.0).abs() < 1e-12);
    }

    #[test]
    fn basis_actions() {
        let x = sum(3, &[(1.0, "X0")]);
        let v = apply_to_basis_state(&x, 0).unwrap();
        assert_eq!(v[1], c(1.0, 0.0));
        let z = sum(3, &[(1.0, "Z0")]);
        let v = apply_to_basis_state(&z, 1).unwrap();
        assert_eq!(v[1], c(-1.0, 0.0));
        assert!(apply_to_basis_state(&z, 8).is_err());
    }

    #[test]
    fn lanczos_agrees_with_dense() {
        let h = sum(
            6,
            &[
                (0.5, "Z0"),
                (-0.3, "Z1 Z2"),
                (0.2, "X0 X1"),
                (0.15, "Y2 Y3"),
                (0.4, "X4 Z5"),
                (-0.25, "Z3 Z4"),
                (0.1, "X1 Y3 Y5"),
            ],
        );
        let (ed, _) = ground_state_dense(&h).unwrap();
        let (el, v) = ground_state_lanczos(&h, &LanczosOptions::default()).unwrap();
        assert!((ed - el).abs() < 1e-9);
        let hv = apply(&h, v.as_slice()).unwrap();
        let rq: Complex64 = v.iter().zip(&hv).map(|(a, b)| a.conj() * b).sum();
        assert!((rq.re - ed).abs() < 1e-9);
    }

    #[test]
    fn guards() {
        let big = PauliSum::zero(15);
        assert!(matches!(to_dense(&big), Err(Error::SizeGuard { .. })));
        let huge = PauliSum::zero(21);
        assert!(matches!(apply(&huge, &[]), Err(Error::SizeGuard { .. })));
    }
}
