#![allow(dead_code)]

use std::path::PathBuf;

use qcc_ilcap::pauli::parse_word;
use qcc_ilcap::{BitVector, PauliSum, PauliWord};
use rand::Rng;

pub fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

/// pyscf FCI energies of the bundled FCIDUMPs.
pub const H2_R14_FCI: f64 = -1.1372759436170439;
pub const H2_R14_HF: f64 = -1.116714325062551;
pub const H4_FCI: f64 = -2.1754111409507257;
pub const H4_HF: f64 = -2.1134289151264123;

pub fn sum(n: usize, terms: &[(f64, &str)]) -> PauliSum {
    PauliSum::from_terms(n, terms.iter().map(|(c, w)| (parse_word(w, n).unwrap(), *c))).unwrap()
}

pub fn word(n: usize, text: &str) -> PauliWord {
    parse_word(text, n).unwrap()
}

pub fn random_mask(rng: &mut impl Rng, n: usize) -> BitVector {
    BitVector::from_indices(n, (0..n).filter(|_| rng.random_bool(0.5)))
}

pub fn random_word(rng: &mut impl Rng, n: usize) -> PauliWord {
    PauliWord::from_masks(random_mask(rng, n), random_mask(rng, n)).unwrap()
}

/// Word with an even number of y factors (real matrix).
pub fn random_real_word(rng: &mut impl Rng, n: usize) -> PauliWord {
    loop {
        let w = random_word(rng, n);
        if !w.is_imaginary() {
            return w;
        }
    }
}

pub fn random_odd_word(rng: &mut impl Rng, n: usize) -> PauliWord {
    loop {
        let w = random_word(rng, n);
        if w.is_imaginary() {
            return w;
        }
    }
}

/// Real Hamiltonian with `terms` random words, a strong diagonal part so
/// the reference is a sensible starting point, and coefficients in [-1, 1].
pub fn random_real_hamiltonian(rng: &mut impl Rng, n: usize, terms: usize) -> PauliSum {
    let mut out = Vec::new();
    for q in 0..n {
        let z = PauliWord::z_word(BitVector::from_indices(n, [q]));
        out.push((z, rng.random_range(-1.0..1.0)));
    }
    for _ in 0..terms {
        out.push((random_real_word(rng, n), rng.random_range(-0.5..0.5)));
    }
    PauliSum::from_terms(n, out).unwrap()
}

/// `count` mutually anti-commuting odd-y words taken from the standard
/// Majorana images after a random Clifford frame change.
pub fn random_anticommuting(rng: &mut impl Rng, n: usize, count: usize) -> Vec<PauliWord> {
    use qcc_ilcap::acset::{cnot_conjugate, standard_f, standard_majorana_d, swap_conjugate};
    let mut all: Vec<PauliWord> = (0..n).map(|i| standard_majorana_d(i, n).unwrap()).collect();
    all.extend((1..n).map(|i| standard_f(i, n).unwrap()));
    for _ in 0..3 * n {
        let a = rng.random_range(0..n);
        let b = rng.random_range(0..n);
        if a == b {
            continue;
        }
        let cnot = rng.random_bool(0.5);
        for w in &mut all {
            *w = if cnot { cnot_conjugate(w, a, b) } else { swap_conjugate(w, a, b) };
        }
    }
    // a Clifford frame change can move the y parity; keep odd ones
    let mut odd: Vec<PauliWord> = all.into_iter().filter(|w| w.is_imaginary()).collect();
    for i in (1..odd.len()).rev() {
        let j = rng.random_range(0..=i);
        odd.swap(i, j);
    }
    odd.truncate(count);
    odd
}
