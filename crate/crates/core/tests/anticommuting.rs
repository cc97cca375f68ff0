mod common;

use common::*;
use proptest::prelude::*;
use qcc_ilcap::acset::{
    build_anticommuting_set, canonical_generator, cnot_conjugate, swap_conjugate, XWord,
};
use qcc_ilcap::oracle::word_to_dense;
use qcc_ilcap::pauli::commutes;
use qcc_ilcap::BitVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_xwords(r: &mut impl Rng, n: usize, m: usize) -> Vec<XWord> {
    let mut out = Vec::with_capacity(m);
    while out.len() < m {
        let b = random_mask(r, n);
        if !b.is_zero() {
            let i = out.len();
            out.push(XWord::new(b, 1.0 / (1 + i) as f64, i));
        }
    }
    out
}

/// `e_0 .. e_{n-1}` followed by `e_0 + e_i`: every column is usable.
fn maximal_input(n: usize) -> Vec<XWord> {
    let mut masks: Vec<BitVector> = (0..n).map(|i| BitVector::from_indices(n, [i])).collect();
    masks.extend((1..n).map(|i| BitVector::from_indices(n, [0, i])));
    XWord::from_masks(masks)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn construction_invariants(seed in any::<u64>(), n in 1usize..17, m in 1usize..120) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let words = random_xwords(&mut r, n, m);
        let set = build_anticommuting_set(&words, n).unwrap();
        prop_assert!(!set.is_empty());
        prop_assert!(set.len() <= 2 * n - 1);
        prop_assert!(set.is_valid());
        for (g, &src) in set.generators.iter().zip(&set.x_sources) {
            prop_assert!(g.is_imaginary());
            prop_assert_eq!(g.x_mask(), &words[src].mask);
        }
        for i in 0..set.len() {
            for j in i + 1..set.len() {
                prop_assert!(!commutes(&set.generators[i], &set.generators[j]).unwrap());
            }
        }
        // output follows the input column order
        prop_assert!(set.x_sources.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn clifford_covariance(seed in any::<u64>(), n in 2usize..9) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let set = random_anticommuting(&mut r, n, 2 * n - 1);
        let a = r.random_range(0..n);
        let b = (a + 1 + r.random_range(0..n - 1)) % n;
        for conj in [cnot_conjugate, swap_conjugate] {
            let mapped: Vec<_> = set.iter().map(|w| conj(w, a, b)).collect();
            for i in 0..mapped.len() {
                for j in i + 1..mapped.len() {
                    prop_assert_eq!(
                        commutes(&mapped[i], &mapped[j]).unwrap(),
                        commutes(&set[i], &set[j]).unwrap()
                    );
                }
            }
        }
    }
}

#[test]
fn maximal_input_reaches_full_size() {
    for n in [4, 6, 8] {
        let set = build_anticommuting_set(&maximal_input(n), n).unwrap();
        assert_eq!(set.len(), 2 * n - 1, "n = {n}");
        assert!(set.is_valid());
    }
}

#[test]
fn cnot_and_swap_are_unitary_conjugations() {
    // compare against the dense CNOT / SWAP action on every 3-qubit word
    let n = 3;
    let dim = 1usize << n;
    let perm = |f: &dyn Fn(usize) -> usize| {
        let mut m = nalgebra::DMatrix::<num_complex::Complex64>::zeros(dim, dim);
        for b in 0..dim {
            m[(f(b), b)] = 1.0.into();
        }
        m
    };
    let cnot = perm(&|b| if b & 1 != 0 { b ^ 0b100 } else { b });
    let swap = perm(&|b| {
        let (x, y) = (b & 1, (b >> 1) & 1);
        (b & !0b11) | (x << 1) | y
    });
    for code in 0..(1u64 << (2 * n)) {
        let w = qcc_ilcap::PauliWord::from_masks(
            BitVector::from_u64(n, code & 0b111),
            BitVector::from_u64(n, code >> 3),
        )
        .unwrap();
        let d = word_to_dense(&w).unwrap();
        for (u, mapped) in [(&cnot, cnot_conjugate(&w, 0, 2)), (&swap, swap_conjugate(&w, 0, 1))] {
            let conj = u * &d * u.adjoint();
            let target = word_to_dense(&mapped).unwrap();
            // equal up to a sign
            let plus = (&conj - &target).iter().all(|z| z.norm() < 1e-12);
            let minus = (&conj + &target).iter().all(|z| z.norm() < 1e-12);
            assert!(plus || minus, "{w} -> {mapped}");
        }
    }
}

#[test]
fn canonical_generator_has_single_y() {
    let mut r = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..200 {
        let n = r.random_range(1..20);
        let m = random_mask(&mut r, n);
        if m.is_zero() {
            continue;
        }
        let g = canonical_generator(&m).unwrap();
        assert_eq!(g.y_count(), 1);
        assert_eq!(g.x_mask(), &m);
        assert_eq!(g.z_mask().first_one(), m.first_one());
    }
}
