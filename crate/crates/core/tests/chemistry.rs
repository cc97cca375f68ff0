mod common;

use common::*;
use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;
use qcc_ilcap::chemio::{
    jw_transform, number_operator, parse_fcidump, read_fcidump, spin_penalty, spin_squared, spin_z,
    FcidumpData,
};
use qcc_ilcap::oracle::{ground_state_dense, ground_state_lanczos, sector_ground_energy, to_dense, LanczosOptions};
use qcc_ilcap::PauliSum;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Dense = DMatrix<Complex64>;

/// Creation operator on spin orbital `j` in the occupation-number basis,
/// bit `j` of the index being orbital `j`.
fn creation(n: usize, j: usize) -> Dense {
    let dim = 1usize << n;
    let mut m = Dense::zeros(dim, dim);
    for b in 0..dim {
        if b >> j & 1 == 0 {
            let sign = if (b & ((1 << j) - 1)).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
            m[(b | 1 << j, b)] = sign.into();
        }
    }
    m
}

/// Second-quantized Hamiltonian assembled from ladder matrices.
fn second_quantized(data: &FcidumpData) -> Dense {
    let n = data.n_qubits();
    let dim = 1usize << n;
    let cr: Vec<Dense> = (0..n).map(|j| creation(n, j)).collect();
    let an: Vec<Dense> = cr.iter().map(|c| c.adjoint()).collect();
    let mut h = Dense::identity(dim, dim) * Complex64::from(data.e_core);
    let so = |p: usize, s: usize| 2 * p + s;
    let k = data.n_orb;
    for p in 0..k {
        for q in 0..k {
            for s in 0..2 {
                h += &cr[so(p, s)] * &an[so(q, s)] * Complex64::from(data.one_body(p, q));
            }
        }
    }
    for p in 0..k {
        for q in 0..k {
            for r in 0..k {
                for t in 0..k {
                    let v = data.two_body(p, q, r, t);
                    if v == 0.0 {
                        continue;
                    }
                    for s1 in 0..2 {
                        for s2 in 0..2 {
                            let op = &cr[so(p, s1)] * &cr[so(r, s2)] * &an[so(t, s2)] * &an[so(q, s1)];
                            h += op * Complex64::from(0.5 * v);
                        }
                    }
                }
            }
        }
    }
    h
}

fn random_integrals(r: &mut impl Rng, n_orb: usize, n_elec: usize) -> FcidumpData {
    let mut d = FcidumpData::new(n_orb, n_elec, 0);
    d.e_core = r.random_range(-1.0..1.0);
    for p in 0..n_orb {
        for q in 0..=p {
            d.set_one_body(p, q, r.random_range(-1.0..1.0));
        }
    }
    for p in 0..n_orb {
        for q in 0..n_orb {
            for s in 0..n_orb {
                for t in 0..n_orb {
                    if d.two_body(p, q, s, t) == 0.0 {
                        d.set_two_body(p, q, s, t, r.random_range(-0.5..0.5));
                    }
                }
            }
        }
    }
    d
}

fn commutator_norm(a: &PauliSum, b: &PauliSum) -> f64 {
    let (da, db) = (to_dense(a).unwrap(), to_dense(b).unwrap());
    (&da * &db - &db * &da).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Closed-shell determinant energy from the integrals.
fn slater_energy(d: &FcidumpData) -> f64 {
    let occ = d.n_elec / 2;
    let mut e = d.e_core;
    for i in 0..occ {
        e += 2.0 * d.one_body(i, i);
        for j in 0..occ {
            e += 2.0 * d.two_body(i, i, j, j) - d.two_body(i, j, j, i);
        }
    }
    e
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn jordan_wigner_matches_ladder_operators(seed in any::<u64>(), n_orb in 1usize..4) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let d = random_integrals(&mut r, n_orb, n_orb);
        let h = jw_transform(&d).unwrap();
        let diff = (to_dense(&h).unwrap() - second_quantized(&d)).iter().map(|z| z.norm()).fold(0.0, f64::max);
        prop_assert!(diff < 1e-11, "{}", diff);
    }

    #[test]
    fn symmetries_commute_with_hamiltonian(seed in any::<u64>(), n_orb in 1usize..4, mu in 0.0f64..2.0) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let d = random_integrals(&mut r, n_orb, n_orb);
        let h = jw_transform(&d).unwrap();
        let n = d.n_qubits();
        let number = number_operator(n).unwrap();
        let (s2, sz) = (spin_squared(n_orb).unwrap(), spin_z(n_orb).unwrap());
        prop_assert!(commutator_norm(&h, &number) < 1e-11);
        prop_assert!(commutator_norm(&h, &s2) < 1e-11);
        prop_assert!(commutator_norm(&h, &sz) < 1e-11);
        prop_assert!(commutator_norm(&s2, &sz) < 1e-12);
        let penalty = spin_penalty(n_orb, mu).unwrap();
        prop_assert!(commutator_norm(&h, &penalty.operator) < 1e-11);
    }

    #[test]
    fn reference_energy_follows_slater_rules(seed in any::<u64>(), n_orb in 1usize..5) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let n_elec = 2 * r.random_range(0..=n_orb);
        let d = random_integrals(&mut r, n_orb, n_elec);
        let h = jw_transform(&d).unwrap();
        let e = h.expectation(&d.reference_state().unwrap()).unwrap();
        prop_assert!((e - slater_energy(&d)).abs() < 1e-11);
    }
}

#[test]
fn spin_operators_have_expected_spectra() {
    // two orbitals: S^2 eigenvalues s(s+1) for s in {0, 1/2, 1}
    let s2 = to_dense(&spin_squared(2).unwrap()).unwrap();
    let eig = s2.symmetric_eigen();
    for v in eig.eigenvalues.iter() {
        assert!([0.0, 0.75, 2.0].iter().any(|e| (v - e).abs() < 1e-12), "{v}");
    }
    let sz = to_dense(&spin_z(2).unwrap()).unwrap();
    for b in 0..16usize {
        let up = (b & 0b0101).count_ones() as f64;
        let down = (b & 0b1010).count_ones() as f64;
        assert!((sz[(b, b)].re - 0.5 * (up - down)).abs() < 1e-12);
    }
}

#[test]
fn bundled_hamiltonians_reproduce_reference_energies() {
    let cases = [
        ("h2_sto3g_r1.4.fcidump", H2_R14_HF, H2_R14_FCI),
        ("h4_chain_sto3g_r1.8.fcidump", H4_HF, H4_FCI),
    ];
    for (file, hf, fci) in cases {
        let d = read_fcidump(&data(file)).unwrap();
        let h = jw_transform(&d).unwrap();
        let state = d.reference_state().unwrap();
        assert!((h.expectation(&state).unwrap() - hf).abs() < 1e-9, "{file}");
        assert!((slater_energy(&d) - hf).abs() < 1e-9, "{file}");
        let e = sector_ground_energy(&h, d.n_elec).unwrap();
        assert!((e - fci).abs() < 1e-9, "{file}: {e}");
    }
}

#[test]
fn spin_penalty_vanishes_on_closed_shell_reference() {
    for file in ["h2_sto3g_r1.4.fcidump", "h4_chain_sto3g_r1.8.fcidump"] {
        let d = read_fcidump(&data(file)).unwrap();
        let p = spin_penalty(d.n_orb, 1.0).unwrap();
        let v = p.operator.expectation(&d.reference_state().unwrap()).unwrap();
        assert!(v.abs() < 1e-12, "{file}: {v}");
        // the penalized Hamiltonian keeps the singlet ground state
        let h = jw_transform(&d).unwrap();
        let e = sector_ground_energy(&p.apply(&h).unwrap(), d.n_elec).unwrap();
        assert!(e >= sector_ground_energy(&h, d.n_elec).unwrap() - 1e-9);
    }
}

#[test]
fn lanczos_agrees_with_dense() {
    let mut r = ChaCha8Rng::seed_from_u64(5);
    for n in [6, 8, 10] {
        let h = random_real_hamiltonian(&mut r, n, 4 * n);
        let (dense, _) = ground_state_dense(&h).unwrap();
        let (lanczos, v) = ground_state_lanczos(&h, &LanczosOptions::default()).unwrap();
        assert!((dense - lanczos).abs() < 1e-8, "n = {n}: {dense} vs {lanczos}");
        let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        assert!((norm - 1.0).abs() < 1e-10);
    }
}

#[test]
fn malformed_fcidump_is_rejected() {
    assert!(parse_fcidump("").is_err());
    assert!(parse_fcidump("&FCI NORB=2,NELEC=2,MS2=0,\n&END\n 1.0 1 1 x 1\n").is_err());
    let ok = parse_fcidump("&FCI NORB=1,NELEC=2,MS2=0,\n ORBSYM=1,\n ISYM=1,\n&END\n 0.5 1 1 1 1\n -1.0 1 1 0 0\n 0.25 0 0 0 0\n")
        .unwrap();
    assert_eq!(ok.n_orb, 1);
    assert_eq!(ok.two_body(0, 0, 0, 0), 0.5);
    assert_eq!(ok.one_body(0, 0), -1.0);
    assert_eq!(ok.e_core, 0.25);
}
