//! FCIDUMP integrals, the Jordan-Wigner map and spin operators.
//!
//! Spin orbitals are interleaved: spatial orbital `p` with spin alpha sits on
//! qubit `2p`, spin beta on `2p + 1`. Occupied means `|1>`, and
//! `a_j = Z_0 .. Z_{j-1} (X_j + i Y_j) / 2`.

use std::collections::HashMap;
use std::path::Path;

use log::{debug, warn};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::pauli::{Pauli, PauliSum, PauliWord, ReferenceState};

/// Spatial integrals in chemists' notation, expanded to full permutational
/// symmetry. Indices are zero-based.
#[derive(Clone, Debug, PartialEq)]
pub struct FcidumpData {
    pub n_orb: usize,
    pub n_elec: usize,
    pub ms2: i64,
    pub e_core: f64,
    one_body: Vec<f64>,
    two_body: Vec<f64>,
}

impl FcidumpData {
    pub fn new(n_orb: usize, n_elec: usize, ms2: i64) -> Self {
        Self {
            n_orb,
            n_elec,
            ms2,
            e_core: 0.0,
            one_body: vec![0.0; n_orb * n_orb],
            two_body: vec![0.0; n_orb.pow(4)],
        }
    }

    pub fn n_qubits(&self) -> usize {
        2 * self.n_orb
    }

    /// `h_pq`.
    pub fn one_body(&self, p: usize, q: usize) -> f64 {
        self.one_body[p * self.n_orb + q]
    }

    /// `(pq|rs)`.
    pub fn two_body(&self, p: usize, q: usize, r: usize, s: usize) -> f64 {
        self.two_body[self.eri_index(p, q, r, s)]
    }

    pub fn set_one_body(&mut self, p: usize, q: usize, value: f64) {
        let n = self.n_orb;
        self.one_body[p * n + q] = value;
        self.one_body[q * n + p] = value;
    }

    /// Stores `(pq|rs)` at all eight equivalent positions.
    pub fn set_two_body(&mut self, p: usize, q: usize, r: usize, s: usize, value: f64) {
        for (a, b, c, d) in eri_images(p, q, r, s) {
            let i = self.eri_index(a, b, c, d);
            self.two_body[i] = value;
        }
    }

    fn eri_index(&self, p: usize, q: usize, r: usize, s: usize) -> usize {
        let n = self.n_orb;
        ((p * n + q) * n + r) * n + s
    }

    pub fn reference_state(&self) -> Result<ReferenceState> {
        reference_state(self.n_qubits(), self.n_elec)
    }
}

fn eri_images(p: usize, q: usize, r: usize, s: usize) -> [(usize, usize, usize, usize); 8] {
    [
        (p, q, r, s),
        (q, p, r, s),
        (p, q, s, r),
        (q, p, s, r),
        (r, s, p, q),
        (s, r, p, q),
        (r, s, q, p),
        (s, r, q, p),
    ]
}

fn canonical_eri(p: usize, q: usize, r: usize, s: usize) -> (usize, usize, usize, usize) {
    eri_images(p, q, r, s).into_iter().min().unwrap()
}

pub fn read_fcidump(path: &Path) -> Result<FcidumpData> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_fcidump(&text)
}

/// Parses the `&FCI ... &END` namelist and the `value i j k l` lines.
///
/// Repeated entries keep the last value; a warning is logged when a line
/// repeats or when a symmetry-equivalent entry disagrees.
pub fn parse_fcidump(text: &str) -> Result<FcidumpData> {
    let mut lines = text.lines().enumerate();
    let mut header = String::new();
    let mut closed = false;
    for (_, line) in lines.by_ref() {
        header.push_str(line);
        header.push(',');
        let upper = line.trim().to_ascii_uppercase();
        if upper.ends_with("&END") || upper == "/" || upper.ends_with("/") {
            closed = true;
            break;
        }
    }
    if !closed {
        return Err(Error::Parse {
            line: 1,
            msg: "FCIDUMP header is not terminated by &END or /".into(),
        });
    }
    let fields = namelist_fields(&header)?;
    let get = |key: &str| -> Result<Option<i64>> {
        fields
            .get(key)
            .map(|v| {
                v.parse::<i64>().map_err(|_| Error::Parse {
                    line: 1,
                    msg: format!("{key} must be an integer, got '{v}'"),
                })
            })
            .transpose()
    };
    let n_orb = get("NORB")?.ok_or(Error::Parse {
        line: 1,
        msg: "header lacks NORB".into(),
    })?;
    let n_elec = get("NELEC")?.ok_or(Error::Parse {
        line: 1,
        msg: "header lacks NELEC".into(),
    })?;
    if n_orb < 0 || n_elec < 0 || n_elec > 2 * n_orb {
        return Err(Error::Parse {
            line: 1,
            msg: format!("inconsistent NORB={n_orb}, NELEC={n_elec}"),
        });
    }
    let mut data = FcidumpData::new(n_orb as usize, n_elec as usize, get("MS2")?.unwrap_or(0));
    let n = data.n_orb;

    let mut seen: HashMap<[usize; 4], (f64, [usize; 4])> = HashMap::new();
    for (idx, line) in lines {
        let lineno = idx + 1;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with('!') {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != 5 {
            return Err(Error::Parse {
                line: lineno,
                msg: format!("expected 'value i j k l', got {} fields", toks.len()),
            });
        }
        let value: f64 = toks[0].replace(['D', 'd'], "e").parse().map_err(|_| Error::Parse {
            line: lineno,
            msg: format!("bad value '{}'", toks[0]),
        })?;
        let mut ix = [0usize; 4];
        for (slot, tok) in ix.iter_mut().zip(&toks[1..]) {
            let v: usize = tok.parse().map_err(|_| Error::Parse {
                line: lineno,
                msg: format!("bad index '{tok}'"),
            })?;
            if v > n {
                return Err(Error::Parse {
                    line: lineno,
                    msg: format!("index {v} exceeds NORB={n}"),
                });
            }
            *slot = v;
        }
        let key = match ix {
            [0, 0, 0, 0] => [0; 4],
            [i, j, 0, 0] if i > 0 && j > 0 => {
                let (a, b) = (i.min(j), i.max(j));
                [a, b, 0, 0]
            }
            [i, j, k, l] if i > 0 && j > 0 && k > 0 && l > 0 => {
                let (a, b, c, d) = canonical_eri(i, j, k, l);
                [a, b, c, d]
            }
            _ => {
                debug!("line {lineno}: ignoring entry {ix:?}");
                continue;
            }
        };
        if let Some((old, raw)) = seen.insert(key, (value, ix)) {
            if raw == ix {
                warn!("line {lineno}: integral {ix:?} repeated; keeping the last value");
            } else if (old - value).abs() > 1e-10 {
                warn!(
                    "line {lineno}: integral {ix:?} = {value} disagrees with equivalent {raw:?} = {old}; keeping the last value"
                );
            }
        }
        match ix {
            [0, 0, 0, 0] => data.e_core = value,
            [i, j, 0, 0] => data.set_one_body(i - 1, j - 1, value),
            [i, j, k, l] => data.set_two_body(i - 1, j - 1, k - 1, l - 1, value),
        }
    }
    Ok(data)
}

fn namelist_fields(header: &str) -> Result<HashMap<String, String>> {
    let body = header.trim_start();
    let body = body
        .strip_prefix("&FCI")
        .or_else(|| body.strip_prefix("&fci"))
        .ok_or(Error::Parse {
            line: 1,
            msg: "FCIDUMP must start with &FCI".into(),
        })?;
    let mut out = HashMap::new();
    for tok in body.split(',') {
        let tok = tok.trim().trim_end_matches("&END").trim_end_matches('/').trim();
        if let Some((k, v)) = tok.split_once('=') {
            out.insert(k.trim().to_ascii_uppercase(), v.trim().to_string());
        }
    }
    Ok(out)
}

/// Lowest `n_e` qubits occupied.
pub fn reference_state(n: usize, n_e: usize) -> Result<ReferenceState> {
    ReferenceState::new(n, n_e)
}

/// Sum of phased Pauli words, used while the intermediate operators are
/// not Hermitian.
#[derive(Clone, Debug)]
struct ComplexSum {
    n: usize,
    terms: Vec<(PauliWord, Complex64)>,
}

impl ComplexSum {
    fn ladder(n: usize, j: usize, create: bool) -> Self {
        let mut x = vec![(j, Pauli::X)];
        let mut y = vec![(j, Pauli::Y)];
        for k in 0..j {
            x.push((k, Pauli::Z));
            y.push((k, Pauli::Z));
        }
        let xw = PauliWord::from_factors(n, &x).expect("valid index");
        let yw = PauliWord::from_factors(n, &y).expect("valid index");
        let sign = if create { -0.5 } else { 0.5 };
        Self {
            n,
            terms: vec![(xw, Complex64::new(0.5, 0.0)), (yw, Complex64::new(0.0, sign))],
        }
    }

    fn mul(&self, other: &Self) -> Self {
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let (w, ph) = a.mul_unchecked(b);
                terms.push((w, ph.scale(ca * cb)));
            }
        }
        Self { n: self.n, terms }
    }

    fn scale(mut self, f: f64) -> Self {
        for (_, c) in &mut self.terms {
            *c *= f;
        }
        self
    }

    fn into_real(self) -> Result<PauliSum> {
        PauliSum::from_complex_terms(self.n, self.terms, 1e-10)
    }
}

fn ladder_product(n: usize, ops: &[(usize, bool)]) -> ComplexSum {
    let mut acc = ComplexSum::ladder(n, ops[0].0, ops[0].1);
    for &(j, create) in &ops[1..] {
        acc = acc.mul(&ComplexSum::ladder(n, j, create));
    }
    acc
}

/// Qubit Hamiltonian
/// `E_core + sum h_pq a_p^† a_q + 1/2 sum (pq|rs) a_p^† a_r^† a_s a_q`.
pub fn jw_transform(data: &FcidumpData) -> Result<PauliSum> {
    let n = data.n_qubits();
    let spatial = |j: usize| j / 2;
    let spin = |j: usize| j % 2;
    let mut terms: Vec<(PauliWord, Complex64)> =
        vec![(PauliWord::identity(n), Complex64::new(data.e_core, 0.0))];

    for p in 0..n {
        for q in 0..n {
            if spin(p) != spin(q) {
                continue;
            }
            let h = data.one_body(spatial(p), spatial(q));
            if h != 0.0 {
                terms.extend(ladder_product(n, &[(p, true), (q, false)]).scale(h).terms);
            }
        }
    }

    // a_p^† a_r^† a_s a_q with p < r, s < q after antisymmetrization
    let two: Vec<Vec<(PauliWord, Complex64)>> = (0..n)
        .into_par_iter()
        .map(|p| {
            let mut out = Vec::new();
            for r in p + 1..n {
                for s in 0..n {
                    for q in s + 1..n {
                        let direct = if spin(p) == spin(q) && spin(r) == spin(s) {
                            data.two_body(spatial(p), spatial(q), spatial(r), spatial(s))
                        } else {
                            0.0
                        };
                        let exchange = if spin(p) == spin(s) && spin(r) == spin(q) {
                            data.two_body(spatial(p), spatial(s), spatial(r), spatial(q))
                        } else {
                            0.0
                        };
                        let w = direct - exchange;
                        if w != 0.0 {
                            out.extend(
                                ladder_product(n, &[(p, true), (r, true), (s, false), (q, false)])
                                    .scale(w)
                                    .terms,
                            );
                        }
                    }
                }
            }
            out
        })
        .collect();
    terms.extend(two.into_iter().flatten());
    PauliSum::from_complex_terms(n, terms, 1e-10)
}

/// `sum_j a_j^† a_j`.
pub fn number_operator(n_qubits: usize) -> Result<PauliSum> {
    let terms = (0..n_qubits).flat_map(|j| {
        [
            (PauliWord::identity(n_qubits), 0.5),
            (PauliWord::single(n_qubits, j, Pauli::Z).expect("valid index"), -0.5),
        ]
    });
    PauliSum::from_terms(n_qubits, terms)
}

/// `S_z = 1/2 sum_p (n_{p alpha} - n_{p beta})`.
pub fn spin_z(n_orb: usize) -> Result<PauliSum> {
    let n = 2 * n_orb;
    let terms = (0..n_orb).flat_map(|p| {
        [
            (PauliWord::single(n, 2 * p, Pauli::Z).expect("valid index"), -0.25),
            (PauliWord::single(n, 2 * p + 1, Pauli::Z).expect("valid index"), 0.25),
        ]
    });
    PauliSum::from_terms(n, terms)
}

fn spin_raise_lower(n_orb: usize, raise: bool) -> ComplexSum {
    let n = 2 * n_orb;
    let mut terms = Vec::new();
    for p in 0..n_orb {
        let (up, down) = (2 * p, 2 * p + 1);
        let ops = if raise {
            [(up, true), (down, false)]
        } else {
            [(down, true), (up, false)]
        };
        terms.extend(ladder_product(n, &ops).terms);
    }
    ComplexSum { n, terms }
}

/// `S^2 = S_- S_+ + S_z (S_z + 1)`.
pub fn spin_squared(n_orb: usize) -> Result<PauliSum> {
    let s_minus_plus = spin_raise_lower(n_orb, false)
        .mul(&spin_raise_lower(n_orb, true))
        .into_real()?;
    let sz = spin_z(n_orb)?;
    s_minus_plus.add(&sz.mul(&sz)?)?.add(&sz)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpinPenalty {
    pub mu: f64,
    /// `W = S^2 - S_z`, which vanishes on singlets with `S_z = 0`.
    pub operator: PauliSum,
}

impl SpinPenalty {
    /// `H + (mu/2) W`.
    pub fn apply(&self, h: &PauliSum) -> Result<PauliSum> {
        h.add(&self.operator.scaled(self.mu / 2.0))
    }
}

pub fn spin_penalty(n_orb: usize, mu: f64) -> Result<SpinPenalty> {
    if !(mu >= 0.0) {
        return Err(Error::InvalidArgument(format!("penalty strength must be >= 0, got {mu}")));
    }
    let operator = spin_squared(n_orb)?.sub(&spin_z(n_orb)?)?;
    Ok(SpinPenalty { mu, operator })
}

#[cfg(test)]
mod tests {
    use super::*;

    const H2: &str = include_str!("../data/h2_sto3g_r1.4.fcidump");

    #[test]
    fn parses_bundled_h2() {
        let d = parse_fcidump(H2).unwrap();
        assert_eq!((d.n_orb, d.n_elec, d.ms2), (2, 2, 0));
        assert_eq!(d.e_core, 0.7142857142857143);
        assert_eq!(d.one_body(1, 1), -0.4756022993742506);
        assert_eq!(d.two_body(1, 0, 1, 0), 0.1812579147931083);
        assert_eq!(d.two_body(0, 1, 0, 1), 0.1812579147931083);
        assert_eq!(d.two_body(0, 1, 1, 0), 0.1812579147931083);
    }

    #[test]
    fn core_only_file() {
        let d = parse_fcidump("&FCI NORB=1,NELEC=0,MS2=0, &END\n 1.5 0 0 0 0\n").unwrap();
        assert_eq!(d.e_core, 1.5);
        assert_eq!(d.one_body(0, 0), 0.0);
        let h = jw_transform(&d).unwrap();
        assert_eq!(h.len(), 1);
        assert_eq!(h.coefficient(&PauliWord::identity(2)), 1.5);
    }

    #[test]
    fn malformed_inputs() {
        assert!(parse_fcidump("NORB=2\n").is_err());
        assert!(parse_fcidump("&FCI NELEC=2 &END\n").is_err());
        assert!(parse_fcidump("&FCI NORB=1,NELEC=2 &END\n x 1 1 0 0\n").is_err());
        assert!(parse_fcidump("&FCI NORB=1,NELEC=2 &END\n 1.0 2 1 0 0\n").is_err());
        assert!(parse_fcidump("&FCI NORB=1,NELEC=2 &END\n 1.0 1 1 0\n").is_err());
    }

    #[test]
    fn duplicates_keep_last() {
        let d = parse_fcidump("&FCI NORB=1,NELEC=2 &END\n 1.0 1 1 0 0\n 2.0 1 1 0 0\n").unwrap();
        assert_eq!(d.one_body(0, 0), 2.0);
    }

    #[test]
    fn number_operator_image() {
        let mut d = FcidumpData::new(1, 2, 0);
        d.set_one_body(0, 0, 0.7);
        let h = jw_transform(&d).unwrap();
        let expected = number_operator(2).unwrap().scaled(0.7);
        assert_eq!(h, expected);
    }

    #[test]
    fn reference_states() {
        let r = reference_state(4, 2).unwrap();
        assert_eq!(r.bits().ones().collect::<Vec<_>>(), vec![0, 1]);
        assert!(reference_state(4, 0).unwrap().bits().is_zero());
        assert_eq!(reference_state(3, 3).unwrap().bits().count_ones(), 3);
        assert!(reference_state(2, 3).is_err());
    }

    #[test]
    fn penalty_values() {
        let w = spin_penalty(1, 1.0).unwrap();
        let closed = reference_state(2, 2).unwrap();
        assert!(w.operator.expectation(&closed).unwrap().abs() < 1e-14);
        let doublet = reference_state(2, 1).unwrap();
        assert!((w.operator.expectation(&doublet).unwrap() - 0.25).abs() < 1e-14);
        assert!(spin_penalty(1, -1.0).is_err());
    }
}
