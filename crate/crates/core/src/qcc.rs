//! Exponential QCC ansatz, amplitude optimization, dressing and the
//! iterative outer loop.
//!
//! `U(t) = prod_{k=1..L} exp(-i t_k T_k / 2)`. Energies are evaluated in the
//! Heisenberg picture: `U^† H U` is built by conjugating `H` with `T_1`,
//! then `T_2`, up to `T_L`, and the result is measured on the reference.

use std::fmt::Write as _;
use std::path::Path;

use log::{debug, info};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::acset::canonical_generator;
use crate::error::{Error, Result};
use crate::optim::{self, BfgsOptions};
use crate::pauli::{header_value, PauliSum, PauliWord, ReferenceState};
use crate::screen::{ising_decompose, rank_sectors, RankingMeasure};

#[derive(Clone, Debug, Default, PartialEq)]
pub struct QccAnsatz {
    pub generators: Vec<PauliWord>,
    pub amplitudes: Vec<f64>,
}

impl QccAnsatz {
    pub fn new(generators: Vec<PauliWord>, amplitudes: Vec<f64>) -> Result<Self> {
        if generators.len() != amplitudes.len() {
            return Err(Error::Dimension {
                expected: generators.len(),
                got: amplitudes.len(),
            });
        }
        if let Some(g) = generators.iter().find(|g| !g.is_imaginary()) {
            return Err(Error::InvalidArgument(format!(
                "generator {g} has an even number of y factors"
            )));
        }
        Ok(Self {
            generators,
            amplitudes,
        })
    }

    /// All amplitudes zero.
    pub fn at_zero(generators: Vec<PauliWord>) -> Result<Self> {
        let l = generators.len();
        Self::new(generators, vec![0.0; l])
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }
}

fn check_n(h: &PauliSum, generators: &[PauliWord], state: &ReferenceState) -> Result<()> {
    if state.n() != h.n() {
        return Err(Error::QubitMismatch {
            left: h.n(),
            right: state.n(),
        });
    }
    if let Some(g) = generators.iter().find(|g| g.n() != h.n()) {
        return Err(Error::QubitMismatch {
            left: h.n(),
            right: g.n(),
        });
    }
    Ok(())
}

/// `<0|U^† H U|0>` without truncation.
pub fn qcc_energy(h: &PauliSum, ansatz: &QccAnsatz, state: &ReferenceState) -> Result<f64> {
    check_n(h, &ansatz.generators, state)?;
    dress(h, ansatz, 0.0)?.expectation(state)
}

/// `U^† H U`, truncating with `threshold` after every generator.
pub fn dress(h: &PauliSum, ansatz: &QccAnsatz, threshold: f64) -> Result<PauliSum> {
    Ok(dress_tracked(h, ansatz, threshold)?.0)
}

/// [`dress`] also returning the summed magnitude of dropped coefficients,
/// which bounds the error of any reference expectation.
pub fn dress_tracked(h: &PauliSum, ansatz: &QccAnsatz, threshold: f64) -> Result<(PauliSum, f64)> {
    let mut out = h.clone();
    let mut dropped = 0.0;
    for (g, &t) in ansatz.generators.iter().zip(&ansatz.amplitudes) {
        if t != 0.0 {
            out = out.conjugate_by_word(g, t)?;
        }
        if threshold > 0.0 {
            let kept = out.truncate(threshold);
            dropped += out.l1_norm() - kept.l1_norm();
            out = kept;
        }
    }
    Ok((out, dropped))
}

/// `(i/2) [T, A]`: only terms anti-commuting with `T` survive, each as
/// `i T P`.
fn half_commutator(t: &PauliWord, a: &PauliSum) -> PauliSum {
    let terms = a
        .iter()
        .filter(|(w, _)| !w.commutes_unchecked(t))
        .map(|(w, c)| {
            let (tp, ph) = t.mul_unchecked(w);
            let v = (crate::pauli::Phase::I * ph).to_complex();
            debug_assert!(v.im == 0.0);
            (tp, v.re * c)
        })
        .collect();
    PauliSum::from_sorted_merge(a.n(), terms)
}

/// Energy and its gradient with respect to every amplitude.
pub fn energy_and_gradient(
    h: &PauliSum,
    ansatz: &QccAnsatz,
    state: &ReferenceState,
) -> Result<(f64, Vec<f64>)> {
    check_n(h, &ansatz.generators, state)?;
    let l = ansatz.len();
    let mut partial = Vec::with_capacity(l);
    let mut cur = h.clone();
    for (g, &t) in ansatz.generators.iter().zip(&ansatz.amplitudes) {
        cur = cur.conjugate_by_word(g, t)?;
        partial.push(cur.clone());
    }
    let energy = cur.expectation(state)?;
    let mut grad = Vec::with_capacity(l);
    for k in 0..l {
        let mut d = half_commutator(&ansatz.generators[k], &partial[k]);
        for j in k + 1..l {
            d = d.conjugate_by_word(&ansatz.generators[j], ansatz.amplitudes[j])?;
        }
        grad.push(d.expectation(state)?);
    }
    Ok((energy, grad))
}

/// For a single generator, `E(t) = e0 + slope sin t + curvature (1 - cos t)`
/// with `slope = <[H,T]>/2i` and `curvature = <T H T - H>/2`.
pub fn single_generator_coefficients(
    h: &PauliSum,
    t: &PauliWord,
    state: &ReferenceState,
) -> Result<(f64, f64, f64)> {
    check_n(h, std::slice::from_ref(t), state)?;
    let e0 = h.expectation(state)?;
    let mut slope = Complex64::new(0.0, 0.0);
    let mut curvature = 0.0;
    for (w, c) in h.iter() {
        if w.commutes_unchecked(t) {
            continue;
        }
        // anti-commuting part H_a: T H T - H = -2 H_a, [H, T] = 2 H_a T
        curvature -= c * state.value(w);
        let (prod, ph) = w.mul_unchecked(t);
        slope += ph.scale(Complex64::new(c * state.value(&prod), 0.0));
    }
    Ok((e0, (slope / Complex64::I).re, curvature))
}

#[derive(Clone, Debug)]
pub struct OptimizerOptions {
    pub bfgs: BfgsOptions,
    /// Random restarts tried when the start point is stationary.
    pub restarts: usize,
    pub restart_scale: f64,
    pub seed: u64,
}

impl Default for OptimizerOptions {
    fn default() -> Self {
        Self {
            bfgs: BfgsOptions::default(),
            restarts: 4,
            restart_scale: 0.5,
            seed: 0x5eed,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Optimized {
    pub amplitudes: Vec<f64>,
    pub energy: f64,
    pub gradient_norm: f64,
    pub iterations: usize,
}

/// Minimizes [`qcc_energy`] over the amplitudes.
///
/// If the start is a stationary point and BFGS cannot leave it, seeded
/// random perturbations are tried and the lowest result kept.
pub fn optimize_amplitudes(
    h: &PauliSum,
    generators: &[PauliWord],
    state: &ReferenceState,
    initial: &[f64],
    opts: &OptimizerOptions,
) -> Result<Optimized> {
    if generators.is_empty() {
        return Err(Error::EmptyInput("generator list"));
    }
    check_n(h, generators, state)?;
    let template = QccAnsatz::new(generators.to_vec(), initial.to_vec())?;
    let objective = |x: &[f64]| {
        let a = QccAnsatz {
            generators: template.generators.clone(),
            amplitudes: x.to_vec(),
        };
        energy_and_gradient(h, &a, state)
    };

    let (e_start, g_start) = objective(initial)?;
    let run = |x0: &[f64]| -> Result<Optimized> {
        let out = optim::minimize(objective, x0, &opts.bfgs)?;
        Ok(Optimized {
            amplitudes: out.x,
            energy: out.value,
            gradient_norm: out.gradient_norm,
            iterations: out.iterations,
        })
    };
    let mut best = run(initial)?;

    let stalled = g_start.iter().map(|g| g * g).sum::<f64>().sqrt() < opts.bfgs.gradient_tolerance
        && best.energy >= e_start - 1e-14;
    if stalled && opts.restarts > 0 {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        for r in 0..opts.restarts {
            let x0: Vec<f64> = initial
                .iter()
                .map(|v| v + opts.restart_scale * rng.random_range(-1.0..1.0))
                .collect();
            match run(&x0) {
                Ok(cand) if cand.energy < best.energy - 1e-14 => {
                    debug!("restart {r} lowered energy to {:.12}", cand.energy);
                    best = cand;
                }
                Ok(_) => {}
                Err(e) => debug!("restart {r} failed: {e}"),
            }
        }
    }
    Ok(best)
}

#[derive(Clone, Debug)]
pub struct IqccConfig {
    /// Generators per iteration.
    pub generators: usize,
    /// Sectors with gradient at or below this are ignored.
    pub gradient_threshold: f64,
    pub optimizer: OptimizerOptions,
}

impl Default for IqccConfig {
    fn default() -> Self {
        Self {
            generators: 1,
            gradient_threshold: 1e-10,
            optimizer: OptimizerOptions::default(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct IqccState {
    pub hamiltonian: PauliSum,
    pub reference: ReferenceState,
    pub iteration: usize,
    /// Reference energy followed by the optimized energy of every iteration.
    pub energy_history: Vec<f64>,
    pub truncation_threshold: f64,
    pub converged: bool,
    pub last_ansatz: Option<QccAnsatz>,
}

impl IqccState {
    pub fn new(hamiltonian: PauliSum, reference: ReferenceState, truncation_threshold: f64) -> Result<Self> {
        let e0 = hamiltonian.expectation(&reference)?;
        Ok(Self {
            hamiltonian,
            reference,
            iteration: 0,
            energy_history: vec![e0],
            truncation_threshold,
            converged: false,
            last_ansatz: None,
        })
    }

    pub fn energy(&self) -> f64 {
        *self.energy_history.last().expect("history starts with the reference energy")
    }
}

/// Picks the top generators of the current Hamiltonian: canonical
/// single-`y` words of the highest-ranked sectors.
pub fn select_generators(
    h: &PauliSum,
    state: &ReferenceState,
    count: usize,
    threshold: f64,
    ranking: &dyn RankingMeasure,
) -> Result<Vec<PauliWord>> {
    let ranked = rank_sectors(&ising_decompose(h), state, ranking)?.above(threshold);
    ranked
        .top(count)
        .iter()
        .map(|w| canonical_generator(&w.mask))
        .collect()
}

/// One outer iteration: rank, optimize, dress, truncate.
pub fn iqcc_iterate(
    mut state: IqccState,
    ranking: &dyn RankingMeasure,
    config: &IqccConfig,
) -> Result<IqccState> {
    if config.generators == 0 {
        return Err(Error::InvalidArgument("at least one generator per iteration".into()));
    }
    let gens = select_generators(
        &state.hamiltonian,
        &state.reference,
        config.generators,
        config.gradient_threshold,
        ranking,
    )?;
    if gens.is_empty() {
        state.converged = true;
        return Ok(state);
    }
    let zeros = vec![0.0; gens.len()];
    let opt = optimize_amplitudes(&state.hamiltonian, &gens, &state.reference, &zeros, &config.optimizer)?;
    let ansatz = QccAnsatz::new(gens, opt.amplitudes)?;
    let dressed = dress(&state.hamiltonian, &ansatz, state.truncation_threshold)?;
    state.iteration += 1;
    info!(
        "iQCC iteration {}: E = {:.12}, {} terms",
        state.iteration,
        opt.energy,
        dressed.len()
    );
    state.hamiltonian = dressed;
    state.energy_history.push(opt.energy);
    state.last_ansatz = Some(ansatz);
    Ok(state)
}

/// Iterates until convergence, `max_iterations`, or an energy change below
/// `energy_tolerance`.
pub fn run_iqcc(
    mut state: IqccState,
    ranking: &dyn RankingMeasure,
    config: &IqccConfig,
    max_iterations: usize,
    energy_tolerance: f64,
    mut on_iteration: impl FnMut(&IqccState) -> Result<()>,
) -> Result<IqccState> {
    for _ in 0..max_iterations {
        let before = state.energy();
        state = iqcc_iterate(state, ranking, config)?;
        if state.converged {
            break;
        }
        on_iteration(&state)?;
        if (before - state.energy()).abs() < energy_tolerance {
            state.converged = true;
            break;
        }
    }
    Ok(state)
}

/// Checkpoint text: metadata comment lines followed by the dressed
/// Hamiltonian in the word format.
pub fn checkpoint_text(state: &IqccState) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "# iteration: {}", state.iteration);
    let _ = writeln!(s, "# energy: {:?}", state.energy());
    let _ = writeln!(s, "# electrons: {}", state.reference.n_electrons());
    if let Some(a) = &state.last_ansatz {
        let amps: Vec<String> = a.amplitudes.iter().map(|t| format!("{t:?}")).collect();
        let gens: Vec<String> = a.generators.iter().map(|g| g.to_string()).collect();
        let _ = writeln!(s, "# amplitudes: {}", amps.join(", "));
        let _ = writeln!(s, "# generators: {}", gens.join("; "));
    }
    s.push_str(&state.hamiltonian.to_text());
    s
}

pub fn write_checkpoint(path: &Path, state: &IqccState) -> Result<()> {
    std::fs::write(path, checkpoint_text(state)).map_err(|e| Error::io(path, e))
}

/// Restores the Hamiltonian, iteration and energy of a checkpoint.
pub fn read_checkpoint(path: &Path, truncation_threshold: f64) -> Result<IqccState> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let h = PauliSum::parse_text(&text, None)?;
    let iteration: usize = header_value(&text, "iteration")
        .ok_or_else(|| Error::Config("checkpoint lacks '# iteration:'".into()))?;
    let energy: f64 = header_value(&text, "energy")
        .ok_or_else(|| Error::Config("checkpoint lacks '# energy:'".into()))?;
    let n_e: usize = header_value(&text, "electrons")
        .ok_or_else(|| Error::Config("checkpoint lacks '# electrons:'".into()))?;
    let reference = ReferenceState::new(h.n(), n_e)?;
    Ok(IqccState {
        hamiltonian: h,
        reference,
        iteration,
        energy_history: vec![energy],
        truncation_threshold,
        converged: false,
        last_ansatz: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::parse_word;
    use crate::screen::GradientRanking;

    fn sum(n: usize, terms: &[(f64, &str)]) -> PauliSum {
        PauliSum::from_terms(n, terms.iter().map(|(c, w)| (parse_word(w, n).unwrap(), *c))).unwrap()
    }

    #[test]
    fn empty_ansatz_is_reference_energy() {
        let h = sum(2, &[(0.4, "Z0"), (0.1, "X0 X1")]);
        let s = ReferenceState::new(2, 1).unwrap();
        let e = qcc_energy(&h, &QccAnsatz::default(), &s).unwrap();
        assert_eq!(e, -0.4);
    }

    #[test]
    fn two_level_minimum() {
        let h = sum(1, &[(1.0, "Z0"), (0.3, "X0")]);
        let s = ReferenceState::new(1, 0).unwrap();
        let y = parse_word("Y0", 1).unwrap();
        let opt = optimize_amplitudes(&h, &[y.clone()], &s, &[0.0], &OptimizerOptions::default()).unwrap();
        assert!((opt.energy + 1.09f64.sqrt()).abs() < 1e-9, "{}", opt.energy);
        // restarting at the optimum stays there
        let again =
            optimize_amplitudes(&h, &[y], &s, &opt.amplitudes, &OptimizerOptions::default()).unwrap();
        assert!((again.amplitudes[0] - opt.amplitudes[0]).abs() < 1e-8);
    }

    #[test]
    fn three_term_form() {
        let h = sum(2, &[(0.7, "Z0"), (-0.2, "Z1"), (0.3, "X0 Z1"), (0.25, "Y0 Y1"), (0.1, "X1")]);
        let s = ReferenceState::new(2, 1).unwrap();
        let t = parse_word("Y0 X1", 2).unwrap();
        let (e0, slope, curv) = single_generator_coefficients(&h, &t, &s).unwrap();
        for k in 0..100 {
            let a = -3.0 + 0.06 * k as f64;
            let ans = QccAnsatz::new(vec![t.clone()], vec![a]).unwrap();
            let e = qcc_energy(&h, &ans, &s).unwrap();
            let model = e0 + slope * a.sin() + curv * (1.0 - a.cos());
            assert!((e - model).abs() < 1e-12);
        }
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let h = sum(
            3,
            &[(0.5, "Z0"), (-0.3, "Z1 Z2"), (0.2, "X0 X1"), (0.15, "Y0 Z1 Y2"), (0.1, "X1 X2")],
        );
        let s = ReferenceState::new(3, 1).unwrap();
        let gens = vec![
            parse_word("Y0 X1", 3).unwrap(),
            parse_word("X0 Z1 Y2", 3).unwrap(),
            parse_word("Y1 X2", 3).unwrap(),
        ];
        let ans = QccAnsatz::new(gens.clone(), vec![0.3, -0.7, 1.1]).unwrap();
        let (_, g) = energy_and_gradient(&h, &ans, &s).unwrap();
        for k in 0..3 {
            let mut p = ans.clone();
            let mut m = ans.clone();
            p.amplitudes[k] += 1e-5;
            m.amplitudes[k] -= 1e-5;
            let fd = (qcc_energy(&h, &p, &s).unwrap() - qcc_energy(&h, &m, &s).unwrap()) / 2e-5;
            assert!((fd - g[k]).abs() <= 1e-6 * g[k].abs().max(1e-3), "{k}: {fd} vs {}", g[k]);
        }
    }

    #[test]
    fn zero_amplitudes_leave_h_unchanged() {
        let h = sum(2, &[(0.4, "Z0"), (0.1, "X0 X1")]);
        let a = QccAnsatz::at_zero(vec![parse_word("Y0 X1", 2).unwrap()]).unwrap();
        assert_eq!(dress(&h, &a, 0.0).unwrap(), h);
    }

    #[test]
    fn rejects_even_y_generators() {
        assert!(QccAnsatz::new(vec![parse_word("X0", 1).unwrap()], vec![0.0]).is_err());
        assert!(QccAnsatz::new(vec![parse_word("Y0", 1).unwrap()], vec![]).is_err());
    }

    #[test]
    fn iteration_converges_without_gradients() {
        let h = sum(2, &[(0.4, "Z0"), (0.2, "Z0 Z1")]);
        let st = IqccState::new(h, ReferenceState::new(2, 1).unwrap(), 0.0).unwrap();
        let st = iqcc_iterate(st, &GradientRanking, &IqccConfig::default()).unwrap();
        assert!(st.converged);
        assert_eq!(st.iteration, 0);
    }

    #[test]
    fn checkpoint_round_trip() {
        let h = sum(2, &[(0.4, "Z0"), (0.1, "X0 X1")]);
        let st = IqccState::new(h.clone(), ReferenceState::new(2, 1).unwrap(), 0.0).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("ck.txt");
        write_checkpoint(&p, &st).unwrap();
        let back = read_checkpoint(&p, 0.0).unwrap();
        assert_eq!(back.hamiltonian, h);
        assert_eq!(back.energy(), st.energy());
        assert_eq!(back.reference, st.reference);
    }
}
