//! Fully anti-commuting generator sets from ranked X-words.
//!
//! The X-word masks become the columns of a binary matrix `M`. Gauss-Jordan
//! elimination brings `M` to reduced form `R M`, where unit columns `e_i` and
//! columns `e_0 + e_i` stand for `x_i` and `x_0 x_i` in a rotated frame. In
//! that frame the Jordan-Wigner Majorana images
//!
//! * `D_i = z_0 .. z_{i-1} y_i`            (Z partner `z_0 .. z_i`)
//! * `F_i = x_0 y_i z_{i+1} .. z_{n-1}`    (Z partner `z_i .. z_{n-1}`)
//!
//! form `2n - 1` mutually anti-commuting words with one `y` each. Their Z
//! partners go back to the original frame through `Rᵀ`, and each generator is
//! the phase-free product of the source X-word and the mapped Z-word.

use crate::bits::BitVector;
use crate::error::{Error, Result};
use crate::gf2::{apply_transpose, classify_columns, rref_with_transform, BinaryMatrix};
use crate::pauli::{Pauli, PauliWord};

/// A pure-X word with its importance weight and position in the ranking.
#[derive(Clone, Debug, PartialEq)]
pub struct XWord {
    pub mask: BitVector,
    pub weight: f64,
    pub source_index: usize,
}

impl XWord {
    pub fn new(mask: BitVector, weight: f64, source_index: usize) -> Self {
        Self {
            mask,
            weight,
            source_index,
        }
    }

    /// Unit-weight words in the given order.
    pub fn from_masks(masks: impl IntoIterator<Item = BitVector>) -> Vec<XWord> {
        masks
            .into_iter()
            .enumerate()
            .map(|(i, m)| XWord::new(m, 1.0, i))
            .collect()
    }

    pub fn word(&self) -> PauliWord {
        PauliWord::x_word(self.mask.clone())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GeneratorKind {
    Primary,
    Secondary,
}

impl std::fmt::Display for GeneratorKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.pad(match self {
            GeneratorKind::Primary => "primary",
            GeneratorKind::Secondary => "secondary",
        })
    }
}

/// Mutually anti-commuting generators, each with an odd number of `y`
/// factors, in the column order of the ranked input.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct AnticommutingSet {
    pub generators: Vec<PauliWord>,
    /// `source_index` of the X-word each generator was built from.
    pub x_sources: Vec<usize>,
    /// Weight of that X-word.
    pub weights: Vec<f64>,
    pub kinds: Vec<GeneratorKind>,
}

impl AnticommutingSet {
    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// Keeps the first `m` generators.
    pub fn truncated(mut self, m: usize) -> Self {
        self.generators.truncate(m);
        self.x_sources.truncate(m);
        self.weights.truncate(m);
        self.kinds.truncate(m);
        self
    }

    /// Checks pairwise anti-commutation and odd y-parity.
    pub fn is_valid(&self) -> bool {
        let g = &self.generators;
        g.iter().all(PauliWord::is_imaginary)
            && (0..g.len()).all(|i| (i + 1..g.len()).all(|j| !g[i].commutes_unchecked(&g[j])))
    }
}

/// `y_i z_0 .. z_{i-1}`.
pub fn standard_majorana_d(i: usize, n: usize) -> Result<PauliWord> {
    if i >= n {
        return Err(Error::IndexOutOfRange { index: i, len: n });
    }
    let mut factors: Vec<(usize, Pauli)> = (0..i).map(|j| (j, Pauli::Z)).collect();
    factors.push((i, Pauli::Y));
    PauliWord::from_factors(n, &factors)
}

/// `x_0 y_i z_{i+1} .. z_{n-1}` for `1 <= i < n`.
pub fn standard_f(i: usize, n: usize) -> Result<PauliWord> {
    if i == 0 || i >= n {
        return Err(Error::IndexOutOfRange { index: i, len: n });
    }
    let mut factors = vec![(0, Pauli::X), (i, Pauli::Y)];
    factors.extend((i + 1..n).map(|j| (j, Pauli::Z)));
    PauliWord::from_factors(n, &factors)
}

/// The single-`y` generator of plain iQCC: the lowest-index `x` of the word
/// turned into `y`.
pub fn canonical_generator(mask: &BitVector) -> Result<PauliWord> {
    let first = mask
        .first_one()
        .ok_or(Error::InvalidArgument("canonical generator of an empty X-word".into()))?;
    PauliWord::from_masks(
        mask.clone(),
        BitVector::from_indices(mask.len(), [first]),
    )
}

/// Builds the anti-commuting set for X-words given in ranked order.
///
/// Only primary and secondary columns of the reduced matrix yield
/// generators; no complementary operators are invented when fewer than
/// `2n - 1` usable columns exist.
pub fn build_anticommuting_set(xwords: &[XWord], n: usize) -> Result<AnticommutingSet> {
    if xwords.is_empty() {
        return Err(Error::EmptyInput("X-word list"));
    }
    if let Some(bad) = xwords.iter().find(|w| w.mask.len() != n) {
        return Err(Error::QubitMismatch {
            left: n,
            right: bad.mask.len(),
        });
    }
    let columns: Vec<BitVector> = xwords.iter().map(|w| w.mask.clone()).collect();
    let m = BinaryMatrix::from_columns(n, &columns)?;
    let reduced = rref_with_transform(&m);
    let classes = classify_columns(&reduced);

    let mut usable: Vec<(usize, GeneratorKind, BitVector)> =
        Vec::with_capacity(classes.primary.len() + classes.secondary.len());
    for &(col, row) in &classes.primary {
        usable.push((col, GeneratorKind::Primary, BitVector::prefix(n, row + 1)));
    }
    for &(col, partner) in &classes.secondary {
        usable.push((
            col,
            GeneratorKind::Secondary,
            BitVector::from_indices(n, partner..n),
        ));
    }
    usable.sort_by_key(|(col, _, _)| *col);

    let mut set = AnticommutingSet::default();
    for (col, kind, z_std) in usable {
        let z = apply_transpose(&reduced.transform, &z_std)?;
        let source = &xwords[col];
        set.generators
            .push(PauliWord::from_masks(source.mask.clone(), z)?);
        set.x_sources.push(source.source_index);
        set.weights.push(source.weight);
        set.kinds.push(kind);
    }
    Ok(set)
}

/// [`build_anticommuting_set`] keeping at most `max_size` generators.
pub fn build_anticommuting_set_capped(
    xwords: &[XWord],
    n: usize,
    max_size: Option<usize>,
) -> Result<AnticommutingSet> {
    let set = build_anticommuting_set(xwords, n)?;
    Ok(match max_size {
        Some(m) => set.truncated(m),
        None => set,
    })
}

/// Phase-free conjugation by `CNOT(control, target)`:
/// `x_c -> x_c x_t`, `z_t -> z_c z_t`.
pub fn cnot_conjugate(word: &PauliWord, control: usize, target: usize) -> PauliWord {
    let mut x = word.x_mask().clone();
    let mut z = word.z_mask().clone();
    if x.get(control) {
        x.flip(target);
    }
    if z.get(target) {
        z.flip(control);
    }
    PauliWord::from_masks(x, z).expect("same length")
}

/// Conjugation by `SWAP(a, b)`.
pub fn swap_conjugate(word: &PauliWord, a: usize, b: usize) -> PauliWord {
    let mut x = word.x_mask().clone();
    let mut z = word.z_mask().clone();
    x.swap_bits(a, b);
    z.swap_bits(a, b);
    PauliWord::from_masks(x, z).expect("same length")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::parse_word;

    fn mask(n: usize, idx: &[usize]) -> BitVector {
        BitVector::from_indices(n, idx.iter().copied())
    }

    #[test]
    fn majorana_examples() {
        assert_eq!(standard_majorana_d(0, 4).unwrap(), parse_word("Y0", 4).unwrap());
        assert_eq!(
            standard_majorana_d(2, 4).unwrap(),
            parse_word("Z0 Z1 Y2", 4).unwrap()
        );
        assert_eq!(standard_f(1, 4).unwrap(), parse_word("X0 Y1 Z2 Z3", 4).unwrap());
        assert_eq!(standard_f(3, 4).unwrap(), parse_word("X0 Y3", 4).unwrap());
        assert!(standard_f(0, 4).is_err());
        assert!(standard_majorana_d(4, 4).is_err());
        for i in 0..4 {
            assert_eq!(standard_majorana_d(i, 4).unwrap().y_count(), 1);
        }
    }

    #[test]
    fn standard_system_is_maximal() {
        let n = 4;
        let mut set = AnticommutingSet::default();
        for i in 0..n {
            set.generators.push(standard_majorana_d(i, n).unwrap());
        }
        for i in 1..n {
            set.generators.push(standard_f(i, n).unwrap());
        }
        assert_eq!(set.generators.len(), 2 * n - 1);
        assert!(set.is_valid());
    }

    #[test]
    fn single_word() {
        for n in 1..6 {
            let set = build_anticommuting_set(&XWord::from_masks([mask(n, &[0])]), n).unwrap();
            assert_eq!(set.generators, vec![parse_word("Y0", n).unwrap()]);
        }
    }

    #[test]
    fn five_word_example() {
        let n = 4;
        let words = XWord::from_masks([
            mask(n, &[0, 2]),
            mask(n, &[1, 3]),
            mask(n, &[0, 1, 2]),
            mask(n, &[1, 2, 3]),
            mask(n, &[0, 1, 2, 3]),
        ]);
        let set = build_anticommuting_set(&words, n).unwrap();
        let expected: Vec<PauliWord> = [
            "Y0 Z1 X2 Z3",
            "Y1 Z2 X3",
            "X0 X1 Y2 Z3",
            "Z0 X1 X2 Y3",
            "X0 Y1 X2 X3",
        ]
        .iter()
        .map(|w| parse_word(w, n).unwrap())
        .collect();
        assert_eq!(set.generators, expected);
        assert_eq!(set.x_sources, vec![0, 1, 2, 3, 4]);
        assert_eq!(set.kinds[4], GeneratorKind::Secondary);
        assert!(set.is_valid());
    }

    #[test]
    fn canonical_examples() {
        assert_eq!(
            canonical_generator(&mask(4, &[0, 2])).unwrap(),
            parse_word("Y0 X2", 4).unwrap()
        );
        assert_eq!(canonical_generator(&mask(4, &[3])).unwrap(), parse_word("Y3", 4).unwrap());
        assert_eq!(
            canonical_generator(&mask(4, &[1, 2, 3])).unwrap(),
            parse_word("Y1 X2 X3", 4).unwrap()
        );
        assert!(canonical_generator(&BitVector::zeros(4)).is_err());
    }

    #[test]
    fn input_validation() {
        assert!(matches!(
            build_anticommuting_set(&[], 4),
            Err(Error::EmptyInput(_))
        ));
        assert!(build_anticommuting_set(&XWord::from_masks([mask(3, &[0])]), 4).is_err());
    }

    #[test]
    fn cap_keeps_leading_generators() {
        let n = 4;
        let words = XWord::from_masks((0..n).map(|i| mask(n, &[i])));
        let full = build_anticommuting_set(&words, n).unwrap();
        let capped = build_anticommuting_set_capped(&words, n, Some(2)).unwrap();
        assert_eq!(capped.generators, full.generators[..2].to_vec());
    }
}
