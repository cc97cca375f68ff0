//! Run configuration, the energy-estimate schemes, bond scans and CSV output
//! shared by the command-line tool and the examples.

use std::collections::HashMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use log::{info, warn};
use rayon::prelude::*;
use serde::Deserialize;

use crate::acset::{build_anticommuting_set_capped, AnticommutingSet};
use crate::chemio::{jw_transform, parse_fcidump, spin_penalty};
use crate::error::{Error, Result};
use crate::ilcap::{build_h_matrix, bw_correct, bw_partition, dress_ilcap, en_correct, solve_ilcap};
use crate::oracle::{ground_state, sector_ground_energy, MATRIX_FREE_LIMIT};
use crate::pauli::{header_value, PauliSum, ReferenceState};
use crate::qcc::{run_iqcc, write_checkpoint, IqccConfig, IqccState, OptimizerOptions};
use crate::screen::{gradients, ising_decompose, GradientRanking};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    #[default]
    Iqcc,
    IlcapPre,
    IlcapPost,
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "iqcc" => Ok(Scheme::Iqcc),
            "ilcap-pre" | "pre" => Ok(Scheme::IlcapPre),
            "ilcap-post" | "post" => Ok(Scheme::IlcapPost),
            _ => Err(Error::Config(format!(
                "unknown scheme '{s}' (expected iqcc, ilcap-pre or ilcap-post)"
            ))),
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scheme::Iqcc => "iqcc",
            Scheme::IlcapPre => "ilcap-pre",
            Scheme::IlcapPost => "ilcap-post",
        })
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IqccSection {
    pub iterations: usize,
    /// Generators per iteration.
    pub generators: usize,
    /// Dressed-Hamiltonian coefficients below this are dropped.
    pub truncation: f64,
    /// Sectors whose gradient does not exceed this are ignored; iQCC stops
    /// when none remain.
    pub gradient_threshold: f64,
}

impl Default for IqccSection {
    fn default() -> Self {
        Self {
            iterations: 5,
            generators: 2,
            truncation: 1e-8,
            gradient_threshold: 1e-8,
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IlcapSection {
    /// Keep at most this many anti-commuting generators.
    pub max_generators: Option<usize>,
    pub bw_tolerance: f64,
    pub bw_max_iterations: usize,
}

impl Default for IlcapSection {
    fn default() -> Self {
        Self {
            max_generators: None,
            bw_tolerance: 1e-10,
            bw_max_iterations: 200,
        }
    }
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSection {
    pub csv: Option<PathBuf>,
    /// Directory receiving one checkpoint per iQCC iteration.
    pub checkpoints: Option<PathBuf>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub inputs: Vec<PathBuf>,
    pub scheme: Scheme,
    /// Overrides the electron count of the input.
    pub electrons: Option<usize>,
    /// Spin-penalty strength; zero disables it.
    pub penalty_mu: f64,
    pub seed: u64,
    /// Adds the exact ground energy as `E_exact`.
    pub exact: bool,
    /// Parallel scan workers; zero uses all cores.
    pub workers: usize,
    pub iqcc: IqccSection,
    pub ilcap: IlcapSection,
    pub output: OutputSection,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            inputs: Vec::new(),
            scheme: Scheme::default(),
            electrons: None,
            penalty_mu: 0.0,
            seed: OptimizerOptions::default().seed,
            exact: false,
            workers: 0,
            iqcc: IqccSection::default(),
            ilcap: IlcapSection::default(),
            output: OutputSection::default(),
        }
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml(&text)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("iqcc.truncation", self.iqcc.truncation),
            ("iqcc.gradient_threshold", self.iqcc.gradient_threshold),
            ("ilcap.bw_tolerance", self.ilcap.bw_tolerance),
        ];
        for (name, v) in positive {
            if !(v > 0.0) {
                return Err(Error::Config(format!("{name} must be > 0, got {v}")));
            }
        }
        if !(self.penalty_mu >= 0.0) {
            return Err(Error::Config(format!("penalty_mu must be >= 0, got {}", self.penalty_mu)));
        }
        if self.scheme != Scheme::IlcapPre && self.iqcc.generators == 0 {
            return Err(Error::Config("iqcc.generators must be at least 1".into()));
        }
        Ok(())
    }

    fn iqcc_config(&self) -> IqccConfig {
        IqccConfig {
            generators: self.iqcc.generators,
            gradient_threshold: self.iqcc.gradient_threshold,
            optimizer: OptimizerOptions {
                seed: self.seed,
                ..OptimizerOptions::default()
            },
        }
    }
}

/// A qubit Hamiltonian with its reference.
#[derive(Clone, Debug)]
pub struct Problem {
    pub hamiltonian: PauliSum,
    pub reference: ReferenceState,
    /// Built from fermionic integrals, so the electron count is conserved.
    pub number_conserving: bool,
}

/// Reads an FCIDUMP (mapped with Jordan-Wigner) or a Pauli-word text file.
/// Text files take the electron count from a `# electrons: N` header unless
/// `electrons` is given.
pub fn load_problem(path: &Path, electrons: Option<usize>, penalty_mu: f64) -> Result<Problem> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let is_fcidump = text.trim_start().to_ascii_uppercase().starts_with("&FCI");
    let (mut h, n_e, number_conserving) = if is_fcidump {
        let data = parse_fcidump(&text)?;
        (jw_transform(&data)?, electrons.unwrap_or(data.n_elec), true)
    } else {
        let h = PauliSum::parse_text(&text, None)?;
        let n_e = electrons
            .or_else(|| header_value(&text, "electrons"))
            .ok_or_else(|| {
                Error::Config(format!(
                    "{}: no '# electrons:' header; pass the electron count explicitly",
                    path.display()
                ))
            })?;
        (h, n_e, false)
    };
    if penalty_mu > 0.0 {
        if h.n() % 2 != 0 {
            return Err(Error::Config("spin penalty needs an even qubit count".into()));
        }
        h = spin_penalty(h.n() / 2, penalty_mu)?.apply(&h)?;
    }
    let reference = ReferenceState::new(h.n(), n_e)?;
    Ok(Problem {
        hamiltonian: h,
        reference,
        number_conserving,
    })
}

/// Text form of a Hamiltonian with its electron count.
pub fn hamiltonian_text(p: &Problem) -> String {
    format!(
        "# electrons: {}\n{}",
        p.reference.n_electrons(),
        p.hamiltonian.to_text()
    )
}

#[derive(Clone, Debug, Default)]
pub struct SchemeResult {
    /// `(label, energy)` in reporting order.
    pub estimates: Vec<(String, f64)>,
    /// Reference energy followed by the energy after each iQCC iteration.
    pub energy_history: Vec<f64>,
    /// Set when a step failed; estimates computed before it are kept.
    pub error: Option<String>,
}

impl SchemeResult {
    pub fn get(&self, label: &str) -> Option<f64> {
        self.estimates.iter().find(|(l, _)| l == label).map(|(_, e)| *e)
    }
}

/// Column labels produced by a scheme, in order.
pub fn estimator_labels(config: &RunConfig) -> Vec<String> {
    let i = config.iqcc.iterations;
    let mut labels: Vec<String> = match config.scheme {
        Scheme::Iqcc => vec![format!("E_QCC({i})")],
        Scheme::IlcapPre => vec!["E_ILCAP".into(), "E_ILCAP+BW".into(), "E_ILCAP+EN".into()],
        Scheme::IlcapPost => vec![
            format!("E_QCC({i})"),
            format!("E_QCC({i})+EN"),
            format!("E_QCC({i})+ILCAP"),
            format!("E_QCC({i})+ILCAP+BW"),
        ],
    };
    if config.exact {
        labels.push("E_exact".into());
    }
    labels
}

/// Anti-commuting generators from the gradient-ranked sectors of `h`.
pub fn ilcap_generators(
    h: &PauliSum,
    state: &ReferenceState,
    gradient_threshold: f64,
    max_generators: Option<usize>,
) -> Result<AnticommutingSet> {
    let ranked = gradients(&ising_decompose(h), state)?.above(gradient_threshold);
    if ranked.is_empty() {
        return Ok(AnticommutingSet::default());
    }
    build_anticommuting_set_capped(&ranked.entries, h.n(), max_generators)
}

/// ILCAP energy, its BW-corrected value, and the dressed Hamiltonian.
fn ilcap_family(
    h: &PauliSum,
    state: &ReferenceState,
    config: &RunConfig,
) -> Result<(f64, f64, PauliSum)> {
    let set = ilcap_generators(h, state, config.iqcc.gradient_threshold, config.ilcap.max_generators)?;
    let problem = build_h_matrix(h, &set, state)?;
    let sol = solve_ilcap(&problem)?;
    let part = bw_partition(h, &problem)?;
    let bw = bw_correct(&problem, &part, config.ilcap.bw_tolerance, config.ilcap.bw_max_iterations)?;
    let dressed = dress_ilcap(h, &set.generators, &sol, config.iqcc.truncation)?;
    info!(
        "ILCAP: {} generators, {} excluded sectors, E = {:.12}, BW = {:.12}",
        set.len(),
        part.excluded_masks.len(),
        sol.energy,
        bw.energy
    );
    Ok((sol.energy, bw.energy, dressed))
}

/// Exact ground energy: within the electron-number block when the
/// Hamiltonian conserves it, otherwise over the full space.
pub fn exact_energy(p: &Problem) -> Result<f64> {
    if p.hamiltonian.n() > MATRIX_FREE_LIMIT {
        return Err(Error::SizeGuard {
            n: p.hamiltonian.n(),
            limit: MATRIX_FREE_LIMIT,
        });
    }
    if p.number_conserving {
        sector_ground_energy(&p.hamiltonian, p.reference.n_electrons())
    } else {
        Ok(ground_state(&p.hamiltonian)?.0)
    }
}

fn run_iqcc_stage(p: &Problem, config: &RunConfig, out: &mut SchemeResult) -> Result<IqccState> {
    let state = IqccState::new(p.hamiltonian.clone(), p.reference.clone(), config.iqcc.truncation)?;
    out.energy_history = state.energy_history.clone();
    if config.iqcc.iterations == 0 {
        return Ok(state);
    }
    let ckpt = config.output.checkpoints.clone();
    if let Some(dir) = &ckpt {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    let state = run_iqcc(
        state,
        &GradientRanking,
        &config.iqcc_config(),
        config.iqcc.iterations,
        0.0,
        |s| {
            if let Some(dir) = &ckpt {
                write_checkpoint(&dir.join(format!("iter_{:03}.txt", s.iteration)), s)?;
            }
            Ok(())
        },
    )?;
    out.energy_history = state.energy_history.clone();
    Ok(state)
}

fn run_steps(p: &Problem, config: &RunConfig, out: &mut SchemeResult) -> Result<()> {
    let i = config.iqcc.iterations;
    match config.scheme {
        Scheme::Iqcc => {
            let st = run_iqcc_stage(p, config, out)?;
            out.estimates.push((format!("E_QCC({i})"), st.energy()));
        }
        Scheme::IlcapPre => {
            let (e, bw, dressed) = ilcap_family(&p.hamiltonian, &p.reference, config)?;
            out.estimates.push(("E_ILCAP".into(), e));
            out.estimates.push(("E_ILCAP+BW".into(), bw));
            out.estimates.push(("E_ILCAP+EN".into(), en_correct(&dressed, &p.reference)?));
        }
        Scheme::IlcapPost => {
            let st = run_iqcc_stage(p, config, out)?;
            let h = &st.hamiltonian;
            out.estimates.push((format!("E_QCC({i})"), st.energy()));
            out.estimates.push((format!("E_QCC({i})+EN"), en_correct(h, &p.reference)?));
            let (e, bw, _) = ilcap_family(h, &p.reference, config)?;
            out.estimates.push((format!("E_QCC({i})+ILCAP"), e));
            out.estimates.push((format!("E_QCC({i})+ILCAP+BW"), bw));
        }
    }
    if config.exact {
        out.estimates.push(("E_exact".into(), exact_energy(p)?));
    }
    Ok(())
}

/// Runs the configured scheme. A failing step stops the run; what was
/// computed before it is returned with the error message.
pub fn run_scheme(p: &Problem, config: &RunConfig) -> SchemeResult {
    let mut out = SchemeResult::default();
    if let Err(e) = run_steps(p, config, &mut out) {
        warn!("{} scheme stopped: {e}", config.scheme);
        out.error = Some(e.to_string());
    }
    out
}

/// Decimal with `digits` significant digits.
pub fn format_significant(x: f64, digits: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{:.*}", digits.saturating_sub(1), x);
    }
    let magnitude = x.abs().log10().floor() as i64;
    let decimals = (digits as i64 - 1 - magnitude).max(0) as usize;
    format!("{x:.decimals$}")
}

/// `<coordinate> <path>` per line; relative paths resolve against `base`.
pub fn parse_scan_manifest(text: &str, base: &Path) -> Result<Vec<(f64, PathBuf)>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (coord, path) = line.split_once(char::is_whitespace).ok_or(Error::Parse {
            line: i + 1,
            msg: "expected '<coordinate> <path>'".into(),
        })?;
        let coord: f64 = coord.parse().map_err(|_| Error::Parse {
            line: i + 1,
            msg: format!("bad coordinate '{coord}'"),
        })?;
        let path = PathBuf::from(path.trim());
        out.push((coord, if path.is_absolute() { path } else { base.join(path) }));
    }
    Ok(out)
}

/// One CSV row per geometry, sorted by coordinate. Failed cells are empty.
pub fn scan(entries: &[(f64, PathBuf)], config: &RunConfig) -> Result<String> {
    let labels = estimator_labels(config);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .map_err(|e| Error::Config(e.to_string()))?;
    let rows: Vec<(f64, HashMap<String, f64>)> = pool.install(|| {
        entries
            .par_iter()
            .map(|(coord, path)| {
                let values = match load_problem(path, config.electrons, config.penalty_mu) {
                    Ok(p) => {
                        let r = run_scheme(&p, config);
                        if let Some(e) = &r.error {
                            warn!("{}: {e}", path.display());
                        }
                        r.estimates.into_iter().collect()
                    }
                    Err(e) => {
                        warn!("{}: {e}", path.display());
                        HashMap::new()
                    }
                };
                (*coord, values)
            })
            .collect()
    });
    let mut order: Vec<usize> = (0..rows.len()).collect();
    order.sort_by(|&a, &b| rows[a].0.total_cmp(&rows[b].0));

    let mut csv = String::from("coordinate");
    for l in &labels {
        csv.push(',');
        csv.push_str(l);
    }
    csv.push('\n');
    for i in order {
        let (coord, values) = &rows[i];
        csv.push_str(&format!("{coord}"));
        for l in &labels {
            csv.push(',');
            if let Some(v) = values.get(l) {
                csv.push_str(&format_significant(*v, 12));
            }
        }
        csv.push('\n');
    }
    Ok(csv)
}

/// `(coordinate, value)` pairs of one CSV column, skipping empty cells.
pub fn csv_column(text: &str, column: &str) -> Result<Vec<(f64, f64)>> {
    let mut lines = text.lines();
    let header: Vec<&str> = lines
        .next()
        .ok_or(Error::EmptyInput("CSV"))?
        .split(',')
        .map(str::trim)
        .collect();
    let idx = header
        .iter()
        .position(|h| *h == column)
        .ok_or_else(|| Error::Config(format!("CSV has no column '{column}'")))?;
    let mut out = Vec::new();
    for (i, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let cells: Vec<&str> = line.split(',').map(str::trim).collect();
        let parse = |s: &str| -> Result<f64> {
            s.parse().map_err(|_| Error::Parse {
                line: i + 2,
                msg: format!("bad number '{s}'"),
            })
        };
        match cells.get(idx) {
            Some(v) if !v.is_empty() => out.push((parse(cells[0])?, parse(v)?)),
            _ => {}
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits() {
        assert_eq!(format_significant(-1.137270174660903, 12), "-1.13727017466");
        assert_eq!(format_significant(-109.28210000001, 12), "-109.282100000");
        assert_eq!(format_significant(0.0, 12), "0.00000000000");
        assert_eq!(format_significant(0.00123456789012345, 12), "0.00123456789012");
    }

    #[test]
    fn config_parsing_and_validation() {
        let cfg = RunConfig::from_toml(
            "scheme = \"ilcap-post\"\nseed = 3\n[iqcc]\niterations = 2\ngenerators = 1\n",
        )
        .unwrap();
        assert_eq!(cfg.scheme, Scheme::IlcapPost);
        assert_eq!(cfg.iqcc.iterations, 2);
        assert_eq!(cfg.iqcc.truncation, 1e-8);
        assert!(RunConfig::from_toml("[iqcc]\ntruncation = 0.0\n").is_err());
        assert!(RunConfig::from_toml("bogus = 1\n").is_err());
        assert!(RunConfig::from_toml("penalty_mu = -1.0\n").is_err());
    }

    #[test]
    fn labels() {
        let mut cfg = RunConfig {
            scheme: Scheme::IlcapPost,
            exact: true,
            ..RunConfig::default()
        };
        cfg.iqcc.iterations = 2;
        assert_eq!(
            estimator_labels(&cfg),
            vec!["E_QCC(2)", "E_QCC(2)+EN", "E_QCC(2)+ILCAP", "E_QCC(2)+ILCAP+BW", "E_exact"]
        );
    }

    #[test]
    fn manifest_and_column() {
        let m = parse_scan_manifest("# r file\n1.4 a.fcidump\n1.0 /abs/b\n", Path::new("/d")).unwrap();
        assert_eq!(m[0], (1.4, PathBuf::from("/d/a.fcidump")));
        assert_eq!(m[1], (1.0, PathBuf::from("/abs/b")));
        let col = csv_column("coordinate,E_x\n1.0,-1.5\n2.0,\n", "E_x").unwrap();
        assert_eq!(col, vec![(1.0, -1.5)]);
        assert!(csv_column("coordinate\n", "E_y").is_err());
    }
}
