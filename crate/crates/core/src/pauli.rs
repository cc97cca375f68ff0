//! Pauli words in symplectic (x-mask, z-mask) form and real-coefficient sums
//! of them.
//!
//! A word is always the Hermitian product `Π_j σ_j` with `σ_j` picked by the
//! bit pair `(x_j, z_j)`: `(0,0)=I`, `(1,0)=X`, `(1,1)=Y`, `(0,1)=Z`. Words
//! carry no phase; phases only appear as the result of [`multiply`].

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::bits::BitVector;
use crate::error::{Error, Result};

/// Power of `i`: `0 -> +1`, `1 -> +i`, `2 -> -1`, `3 -> -i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Phase(u8);

impl Phase {
    pub const ONE: Phase = Phase(0);
    pub const I: Phase = Phase(1);
    pub const MINUS_ONE: Phase = Phase(2);
    pub const MINUS_I: Phase = Phase(3);

    pub fn from_power(power: u32) -> Self {
        Phase((power % 4) as u8)
    }

    pub fn power(self) -> u8 {
        self.0
    }

    pub fn is_real(self) -> bool {
        self.0 % 2 == 0
    }

    pub fn to_complex(self) -> Complex64 {
        match self.0 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        }
    }

    /// `self * (a + b i)` without rounding.
    #[inline]
    pub fn scale(self, value: Complex64) -> Complex64 {
        match self.0 {
            0 => value,
            1 => Complex64::new(-value.im, value.re),
            2 => -value,
            _ => Complex64::new(value.im, -value.re),
        }
    }
}

impl std::ops::Mul for Phase {
    type Output = Phase;

    fn mul(self, rhs: Phase) -> Phase {
        Phase((self.0 + rhs.0) % 4)
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self.0 {
            0 => "+1",
            1 => "+i",
            2 => "-1",
            _ => "-i",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    fn bits(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }

    fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliWord {
    x: BitVector,
    z: BitVector,
}

impl PauliWord {
    pub fn identity(n: usize) -> Self {
        Self {
            x: BitVector::zeros(n),
            z: BitVector::zeros(n),
        }
    }

    pub fn from_masks(x: BitVector, z: BitVector) -> Result<Self> {
        if x.len() != z.len() {
            return Err(Error::QubitMismatch {
                left: x.len(),
                right: z.len(),
            });
        }
        Ok(Self { x, z })
    }

    /// Word from `(qubit, factor)` pairs; identity factors are ignored.
    pub fn from_factors(n: usize, factors: &[(usize, Pauli)]) -> Result<Self> {
        let mut w = Self::identity(n);
        for &(q, p) in factors {
            if q >= n {
                return Err(Error::IndexOutOfRange { index: q, len: n });
            }
            let (x, z) = p.bits();
            w.x.set(q, x);
            w.z.set(q, z);
        }
        Ok(w)
    }

    pub fn single(n: usize, qubit: usize, p: Pauli) -> Result<Self> {
        Self::from_factors(n, &[(qubit, p)])
    }

    /// Pure-X word with the given mask.
    pub fn x_word(mask: BitVector) -> Self {
        let n = mask.len();
        Self {
            x: mask,
            z: BitVector::zeros(n),
        }
    }

    /// Pure-Z word with the given mask.
    pub fn z_word(mask: BitVector) -> Self {
        let n = mask.len();
        Self {
            x: BitVector::zeros(n),
            z: mask,
        }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.x.len()
    }

    #[inline]
    pub fn x_mask(&self) -> &BitVector {
        &self.x
    }

    #[inline]
    pub fn z_mask(&self) -> &BitVector {
        &self.z
    }

    pub fn factor(&self, qubit: usize) -> Pauli {
        Pauli::from_bits(self.x.get(qubit), self.z.get(qubit))
    }

    pub fn is_identity(&self) -> bool {
        self.x.is_zero() && self.z.is_zero()
    }

    /// Diagonal in the z basis.
    pub fn is_diagonal(&self) -> bool {
        self.x.is_zero()
    }

    #[inline]
    pub fn y_count(&self) -> usize {
        self.x.and_count(&self.z)
    }

    /// Odd y-count: purely imaginary matrix in the z basis.
    pub fn is_imaginary(&self) -> bool {
        self.y_count() % 2 == 1
    }

    pub fn weight(&self) -> usize {
        self.x.words()
            .iter()
            .zip(self.z.words())
            .map(|(a, b)| (a | b).count_ones() as usize)
            .sum()
    }

    fn check_same_n(&self, other: &Self) -> Result<()> {
        if self.n() != other.n() {
            return Err(Error::QubitMismatch {
                left: self.n(),
                right: other.n(),
            });
        }
        Ok(())
    }

    /// Product without the shape check, for hot loops over words already
    /// known to share `n`.
    #[inline]
    pub(crate) fn mul_unchecked(&self, other: &Self) -> (PauliWord, Phase) {
        let x = self.x.xor(&other.x);
        let z = self.z.xor(&other.z);
        // P = i^{y(P)} X^x Z^z, so P_a P_b = i^{ya + yb} (-1)^{za.xb} X^{xa^xb} Z^{za^zb}
        let ya = self.y_count();
        let yb = other.y_count();
        let yw = x.and_count(&z);
        let swap = self.z.and_count(&other.x);
        // -yw == 3 yw (mod 4)
        let power = (ya + yb + 3 * yw + 2 * swap) as u32;
        (PauliWord { x, z }, Phase::from_power(power))
    }

    #[inline]
    pub(crate) fn commutes_unchecked(&self, other: &Self) -> bool {
        (self.x.and_count(&other.z) + self.z.and_count(&other.x)) % 2 == 0
    }

    /// Bit vector of the computational basis state `self |bits>` lands on,
    /// with the accumulated phase.
    pub fn act_on_basis(&self, bits: &BitVector) -> (BitVector, Phase) {
        // W = i^y X^x Z^z
        let sign = self.z.and_count(bits) as u32;
        (
            bits.xor(&self.x),
            Phase::from_power(self.y_count() as u32 + 2 * sign),
        )
    }
}

/// `a * b = phase * word`.
pub fn multiply(a: &PauliWord, b: &PauliWord) -> Result<(PauliWord, Phase)> {
    a.check_same_n(b)?;
    Ok(a.mul_unchecked(b))
}

/// The phase-free product: XOR of both masks.
pub fn phaseless_product(a: &PauliWord, b: &PauliWord) -> Result<PauliWord> {
    a.check_same_n(b)?;
    Ok(PauliWord {
        x: a.x.xor(&b.x),
        z: a.z.xor(&b.z),
    })
}

/// Symplectic form: words commute iff `<a.x, b.z> + <a.z, b.x>` is even.
pub fn commutes(a: &PauliWord, b: &PauliWord) -> Result<bool> {
    a.check_same_n(b)?;
    Ok(a.commutes_unchecked(b))
}

impl fmt::Display for PauliWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return f.write_str("I");
        }
        let mut first = true;
        for q in 0..self.n() {
            let c = match self.factor(q) {
                Pauli::I => continue,
                Pauli::X => 'X',
                Pauli::Y => 'Y',
                Pauli::Z => 'Z',
            };
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            write!(f, "{c}{q}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for PauliWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PauliWord[{}]({})", self.n(), self)
    }
}

/// Parses whitespace-separated `X<j>`/`Y<j>`/`Z<j>` factors with strictly
/// increasing qubit indices, or the literal `I`.
pub fn parse_word(text: &str, n: usize) -> std::result::Result<PauliWord, String> {
    let tokens: Vec<&str> = text.split_whitespace().collect();
    if tokens.is_empty() {
        return Err("missing Pauli word".into());
    }
    if tokens == ["I"] {
        return Ok(PauliWord::identity(n));
    }
    let mut factors = Vec::with_capacity(tokens.len());
    let mut last: Option<usize> = None;
    for tok in tokens {
        let mut chars = tok.chars();
        let p = match chars.next() {
            Some('X') => Pauli::X,
            Some('Y') => Pauli::Y,
            Some('Z') => Pauli::Z,
            _ => return Err(format!("bad factor '{tok}'")),
        };
        let q: usize = chars
            .as_str()
            .parse()
            .map_err(|_| format!("bad qubit index in '{tok}'"))?;
        if let Some(prev) = last {
            if q == prev {
                return Err(format!("duplicate qubit index {q}"));
            }
            if q < prev {
                return Err(format!("qubit indices not increasing at {q}"));
            }
        }
        if q >= n {
            return Err(format!("qubit index {q} out of range for {n} qubits"));
        }
        last = Some(q);
        factors.push((q, p));
    }
    PauliWord::from_factors(n, &factors).map_err(|e| e.to_string())
}

/// Reference product state: qubits `0..n_e` in `|1>` (spin down, occupied),
/// the rest in `|0>`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReferenceState {
    n: usize,
    n_e: usize,
    occupied: BitVector,
}

impl ReferenceState {
    pub fn new(n: usize, n_e: usize) -> Result<Self> {
        if n_e > n {
            return Err(Error::InvalidArgument(format!(
                "electron count {n_e} exceeds qubit count {n}"
            )));
        }
        Ok(Self {
            n,
            n_e,
            occupied: BitVector::prefix(n, n_e),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn n_electrons(&self) -> usize {
        self.n_e
    }

    pub fn bits(&self) -> &BitVector {
        &self.occupied
    }

    /// `<0|W|0>` for a Hermitian word: zero off the diagonal, else the product
    /// of z eigenvalues.
    #[inline]
    pub fn value(&self, word: &PauliWord) -> f64 {
        basis_value(&self.occupied, word)
    }
}

/// `<b|W|b>` for a computational basis state given by its occupied bits.
#[inline]
pub fn basis_value(bits: &BitVector, word: &PauliWord) -> f64 {
    if !word.x.is_zero() {
        return 0.0;
    }
    if word.z.and_count(bits) % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Real linear combination of Pauli words in canonical order.
#[derive(Clone, PartialEq)]
pub struct PauliSum {
    n: usize,
    terms: Vec<(PauliWord, f64)>,
}

impl PauliSum {
    pub fn zero(n: usize) -> Self {
        Self {
            n,
            terms: Vec::new(),
        }
    }

    pub fn from_word(word: PauliWord, coefficient: f64) -> Self {
        let n = word.n();
        Self::from_sorted_merge(n, vec![(word, coefficient)])
    }

    /// Merges duplicate words and drops exact zeros.
    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (PauliWord, f64)>) -> Result<Self> {
        let terms: Vec<_> = terms.into_iter().collect();
        if let Some((w, _)) = terms.iter().find(|(w, _)| w.n() != n) {
            return Err(Error::QubitMismatch {
                left: n,
                right: w.n(),
            });
        }
        Ok(Self::from_sorted_merge(n, terms))
    }

    /// Canonical-order merge: stable sort by word, then sum runs in their
    /// original order. The result depends only on the input sequence.
    pub(crate) fn from_sorted_merge(n: usize, mut terms: Vec<(PauliWord, f64)>) -> Self {
        terms.sort_by(|a, b| a.0.cmp(&b.0));
        let mut out: Vec<(PauliWord, f64)> = Vec::with_capacity(terms.len());
        for (w, c) in terms {
            match out.last_mut() {
                Some((lw, lc)) if *lw == w => *lc += c,
                _ => out.push((w, c)),
            }
        }
        out.retain(|(_, c)| *c != 0.0);
        Self { n, terms: out }
    }

    /// Accumulates phased contributions and keeps the real part, failing if
    /// any merged coefficient keeps an imaginary part above `tol`.
    pub(crate) fn from_complex_terms(
        n: usize,
        mut terms: Vec<(PauliWord, Complex64)>,
        tol: f64,
    ) -> Result<Self> {
        terms.sort_by(|a, b| a.0.cmp(&b.0));
        let mut merged: Vec<(PauliWord, Complex64)> = Vec::with_capacity(terms.len());
        for (w, c) in terms {
            match merged.last_mut() {
                Some((lw, lc)) if *lw == w => *lc += c,
                _ => merged.push((w, c)),
            }
        }
        let mut out = Vec::with_capacity(merged.len());
        for (w, c) in merged {
            if c.im.abs() > tol {
                return Err(Error::InvalidArgument(format!(
                    "operator is not Hermitian: term {w} has imaginary coefficient {:e}",
                    c.im
                )));
            }
            if c.re != 0.0 {
                out.push((w, c.re));
            }
        }
        Ok(Self { n, terms: out })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[(PauliWord, f64)] {
        &self.terms
    }

    pub fn iter(&self) -> impl Iterator<Item = (&PauliWord, f64)> + '_ {
        self.terms.iter().map(|(w, c)| (w, *c))
    }

    pub fn coefficient(&self, word: &PauliWord) -> f64 {
        self.terms
            .binary_search_by(|(w, _)| w.cmp(word))
            .map(|i| self.terms[i].1)
            .unwrap_or(0.0)
    }

    /// Sum of absolute coefficients.
    pub fn l1_norm(&self) -> f64 {
        self.terms.iter().map(|(_, c)| c.abs()).sum()
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self::from_sorted_merge(
            self.n,
            self.terms.iter().map(|(w, c)| (w.clone(), c * factor)).collect(),
        )
    }

    pub fn add(&self, other: &PauliSum) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::QubitMismatch {
                left: self.n,
                right: other.n,
            });
        }
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Ok(Self::from_sorted_merge(self.n, terms))
    }

    pub fn sub(&self, other: &PauliSum) -> Result<Self> {
        self.add(&other.scaled(-1.0))
    }

    /// Full operator product; the result must be Hermitian with real
    /// coefficients (e.g. products of commuting Hermitian operators).
    pub fn mul(&self, other: &PauliSum) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::QubitMismatch {
                left: self.n,
                right: other.n,
            });
        }
        let mut out = Vec::with_capacity(self.len() * other.len());
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let (w, ph) = a.mul_unchecked(b);
                out.push((w, ph.scale(Complex64::new(ca * cb, 0.0))));
            }
        }
        Self::from_complex_terms(self.n, out, 1e-10)
    }

    /// Drops terms with `|c| < threshold`.
    pub fn truncate(&self, threshold: f64) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(_, c)| c.abs() >= threshold)
            .cloned()
            .collect();
        Self { n: self.n, terms }
    }

    /// Diagonal (pure-z) part.
    pub fn diagonal_part(&self) -> Self {
        Self {
            n: self.n,
            terms: self
                .terms
                .iter()
                .filter(|(w, _)| w.is_diagonal())
                .cloned()
                .collect(),
        }
    }

    /// `<b|H|b>` on an arbitrary basis state.
    pub fn basis_expectation(&self, bits: &BitVector) -> f64 {
        self.terms
            .iter()
            .filter(|(w, _)| w.is_diagonal())
            .map(|(w, c)| c * basis_value(bits, w))
            .sum()
    }

    /// Parses the one-term-per-line text format. Blank lines and lines
    /// starting with `#` are skipped, except a `# qubits: N` header which
    /// fixes the qubit count when `n` is `None`.
    pub fn parse_text(text: &str, n: Option<usize>) -> Result<Self> {
        let mut n = n.or_else(|| header_value(text, "qubits"));
        if n.is_none() {
            // infer from the largest index
            let mut max_q = 0usize;
            for line in text.lines() {
                let line = line.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                for tok in line.split_whitespace().skip(1) {
                    if let Some(q) = tok.get(1..).and_then(|s| s.parse::<usize>().ok()) {
                        max_q = max_q.max(q + 1);
                    }
                }
            }
            n = Some(max_q.max(1));
        }
        let n = n.unwrap();
        let mut terms = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (coef, rest) = line.split_once(char::is_whitespace).ok_or(Error::Parse {
                line: lineno + 1,
                msg: "expected '<coefficient> <word>'".into(),
            })?;
            let c: f64 = coef.parse().map_err(|_| Error::Parse {
                line: lineno + 1,
                msg: format!("bad coefficient '{coef}'"),
            })?;
            let w = parse_word(rest, n).map_err(|msg| Error::Parse {
                line: lineno + 1,
                msg,
            })?;
            terms.push((w, c));
        }
        Ok(Self::from_sorted_merge(n, terms))
    }

    /// Text form with a `# qubits:` header. Coefficients use the shortest
    /// representation that round-trips exactly.
    pub fn to_text(&self) -> String {
        let mut s = format!("# qubits: {}\n", self.n);
        for (w, c) in &self.terms {
            s.push_str(&format!("{c:?} {w}\n"));
        }
        s
    }

    /// `exp(+i t G/2) H exp(-i t G/2)`.
    ///
    /// Terms commuting with `G` pass through; an anti-commuting term `P`
    /// becomes `cos t P - i sin t P G`.
    pub fn conjugate_by_word(&self, generator: &PauliWord, t: f64) -> Result<Self> {
        if generator.n() != self.n {
            return Err(Error::QubitMismatch {
                left: self.n,
                right: generator.n(),
            });
        }
        let (s, c) = t.sin_cos();
        let expand = |(w, coef): &(PauliWord, f64)| -> [Option<(PauliWord, f64)>; 2] {
            if w.commutes_unchecked(generator) {
                [Some((w.clone(), *coef)), None]
            } else {
                let (pg, ph) = w.mul_unchecked(generator);
                // -i * ph is real because P G is anti-Hermitian
                let sign = match (Phase::MINUS_I * ph).power() {
                    0 => 1.0,
                    2 => -1.0,
                    _ => unreachable!("anti-commuting Hermitian words give an imaginary product"),
                };
                [Some((w.clone(), coef * c)), Some((pg, sign * s * coef))]
            }
        };
        let out: Vec<(PauliWord, f64)> = if self.terms.len() > PARALLEL_TERMS {
            self.terms
                .par_iter()
                .flat_map_iter(|t| expand(t).into_iter().flatten())
                .collect()
        } else {
            self.terms
                .iter()
                .flat_map(|t| expand(t).into_iter().flatten())
                .collect()
        };
        Ok(Self::from_sorted_merge(self.n, out))
    }

    /// `<0|H|0>` on a reference state.
    pub fn expectation(&self, state: &ReferenceState) -> Result<f64> {
        if state.n() != self.n {
            return Err(Error::QubitMismatch {
                left: self.n,
                right: state.n(),
            });
        }
        Ok(self.basis_expectation(state.bits()))
    }

    /// Largest `|c|` among the terms.
    pub fn max_abs_coefficient(&self) -> f64 {
        self.terms.iter().fold(0.0, |m, (_, c)| m.max(c.abs()))
    }
}

pub(crate) const PARALLEL_TERMS: usize = 8192;

/// Free-function form of [`PauliSum::expectation`].
pub fn expectation(state: &ReferenceState, op: &PauliSum) -> Result<f64> {
    op.expectation(state)
}

/// Free-function form of [`PauliSum::conjugate_by_word`].
pub fn conjugate_by_word(target: &PauliSum, generator: &PauliWord, t: f64) -> Result<PauliSum> {
    target.conjugate_by_word(generator, t)
}

/// Free-function form of [`PauliSum::truncate`].
pub fn truncate(op: &PauliSum, threshold: f64) -> PauliSum {
    op.truncate(threshold)
}

pub(crate) fn header_value<T: FromStr>(text: &str, key: &str) -> Option<T> {
    text.lines()
        .map(str::trim)
        .take_while(|l| l.is_empty() || l.starts_with('#'))
        .filter_map(|l| l.trim_start_matches('#').split_once(':'))
        .find(|(k, _)| k.trim() == key)
        .and_then(|(_, v)| v.trim().parse().ok())
}

impl fmt::Debug for PauliSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PauliSum[{}] {{", self.n)?;
        for (i, (w, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, " {c} {w}")?;
        }
        f.write_str(" }")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(n: usize, s: &str) -> PauliWord {
        parse_word(s, n).unwrap()
    }

    #[test]
    fn single_qubit_table() {
        let (p, ph) = multiply(&w(1, "X0"), &w(1, "Y0")).unwrap();
        assert_eq!(p, w(1, "Z0"));
        assert_eq!(ph, Phase::I);
        let (p, ph) = multiply(&w(1, "Z0"), &w(1, "Y0")).unwrap();
        assert_eq!(p, w(1, "X0"));
        assert_eq!(ph, Phase::MINUS_I);
        let (p, ph) = multiply(&w(3, "X0 X2"), &w(3, "X0 X2")).unwrap();
        assert!(p.is_identity());
        assert_eq!(ph, Phase::ONE);
    }

    #[test]
    fn phaseless_examples() {
        assert_eq!(phaseless_product(&w(1, "X0"), &w(1, "Z0")).unwrap(), w(1, "Y0"));
        assert_eq!(
            phaseless_product(&w(4, "X0 X1 X2 X3"), &w(4, "Z0 Z2 Z3")).unwrap(),
            w(4, "Y0 X1 Y2 Y3")
        );
        let a = w(4, "Y0 Z1 X3");
        assert!(phaseless_product(&a, &a).unwrap().is_identity());
    }

    #[test]
    fn commutation_examples() {
        assert!(!commutes(&w(1, "X0"), &w(1, "Z0")).unwrap());
        assert!(commutes(&w(2, "X0 X1"), &w(2, "Z0 Z1")).unwrap());
        assert!(matches!(
            commutes(&w(2, "X0"), &w(3, "X0")),
            Err(Error::QubitMismatch { .. })
        ));
    }

    #[test]
    fn expectation_examples() {
        let r = ReferenceState::new(2, 2).unwrap();
        let h = PauliSum::from_word(w(2, "Z0 Z1"), 0.5);
        assert_eq!(h.expectation(&r).unwrap(), 0.5);
        let r = ReferenceState::new(2, 1).unwrap();
        let h = PauliSum::parse_text("1 Z0\n1 Z1\n", Some(2)).unwrap();
        assert_eq!(h.expectation(&r).unwrap(), 0.0);
        let r = ReferenceState::new(4, 2).unwrap();
        let h = PauliSum::from_word(w(4, "X0 X1"), 1.0);
        assert_eq!(h.expectation(&r).unwrap(), 0.0);
    }

    #[test]
    fn conjugation_examples() {
        let h = PauliSum::parse_text("1 Z0\n0.3 X0\n", Some(1)).unwrap();
        let g = w(1, "Y0");
        assert_eq!(h.conjugate_by_word(&g, 0.0).unwrap(), h);
        let flipped = PauliSum::from_word(w(1, "Z0"), 1.0)
            .conjugate_by_word(&g, std::f64::consts::PI)
            .unwrap()
            .truncate(1e-12);
        assert_eq!(flipped, PauliSum::from_word(w(1, "Z0"), -1.0));
        // E(t) = cos t + 0.3 sin t on |0>, minimum at tan t = 0.3 shifted by pi
        let t = 0.3f64.atan() + std::f64::consts::PI;
        let r = ReferenceState::new(1, 0).unwrap();
        let e = h.conjugate_by_word(&g, t).unwrap().expectation(&r).unwrap();
        assert!((e + 1.09f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn truncation_examples() {
        let h = PauliSum::parse_text("1.0 Z0\n1e-9 X0\n", Some(1)).unwrap();
        assert_eq!(h.truncate(0.0), h);
        assert_eq!(h.truncate(1e-8), PauliSum::from_word(w(1, "Z0"), 1.0));
    }

    #[test]
    fn parser_rejects_duplicates_and_disorder() {
        assert!(PauliSum::parse_text("1 X0 Z0\n", Some(2)).is_err());
        assert!(PauliSum::parse_text("1 X1 Z0\n", Some(2)).is_err());
        assert!(PauliSum::parse_text("abc X0\n", Some(2)).is_err());
        let h = PauliSum::parse_text("# qubits: 3\n0.174348 Z0 Z1\n-0.5 I\n", None).unwrap();
        assert_eq!(h.n(), 3);
        assert_eq!(h.coefficient(&PauliWord::identity(3)), -0.5);
    }

    #[test]
    fn text_round_trip() {
        let h = PauliSum::parse_text("0.1812888082114958 X0 Y1 Y2 X3\n-1e-9 Z3\n0.5 I\n", Some(4))
            .unwrap();
        let back = PauliSum::parse_text(&h.to_text(), None).unwrap();
        assert_eq!(back, h);
    }

    #[test]
    fn canonical_merge_drops_zeros() {
        let x = w(2, "X0");
        let h = PauliSum::from_terms(2, vec![(x.clone(), 1.0), (x, -1.0)]).unwrap();
        assert!(h.is_empty());
    }
}
