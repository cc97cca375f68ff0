//! Generalized Ising decomposition and gradient ranking of X-words.
//!
//! Every word factors as `P = (-i)^{y} Z^z X^x`, so a Hamiltonian splits
//! into `H = I_0(z) + sum_m I_m(z) X^m` with one z-side operator per distinct
//! x-mask `m`. The energy gradient of any generator whose x-mask is `m`
//! depends only on `<0|I_m|0>`.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::acset::XWord;
use crate::bits::BitVector;
use crate::error::{Error, Result};
use crate::pauli::{PauliSum, PauliWord, ReferenceState};

/// `I_m = real + i * imag`, both pure-z sums with the `(-i)^y` phase of
/// each source term folded into the coefficient.
#[derive(Clone, Debug, PartialEq)]
pub struct SectorOperator {
    pub real: PauliSum,
    pub imag: PauliSum,
}

impl SectorOperator {
    /// `<0|I_m|0>`.
    pub fn reference_value(&self, state: &ReferenceState) -> Result<Complex64> {
        Ok(Complex64::new(
            self.real.expectation(state)?,
            self.imag.expectation(state)?,
        ))
    }

    pub fn len(&self) -> usize {
        self.real.len() + self.imag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.real.is_empty() && self.imag.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct IsingDecomposition {
    pub n: usize,
    pub diagonal: PauliSum,
    pub sectors: BTreeMap<BitVector, SectorOperator>,
}

impl IsingDecomposition {
    /// Rebuilds the Pauli-word form.
    pub fn recompose(&self) -> Result<PauliSum> {
        let mut terms: Vec<(PauliWord, Complex64)> = self
            .diagonal
            .iter()
            .map(|(w, c)| (w.clone(), Complex64::new(c, 0.0)))
            .collect();
        for (mask, sector) in &self.sectors {
            for (part, unit) in [(&sector.real, Complex64::ONE), (&sector.imag, Complex64::I)] {
                for (zw, c) in part.iter() {
                    let word = PauliWord::from_masks(mask.clone(), zw.z_mask().clone())?;
                    // Z^z X^x = i^y P
                    let phase = Complex64::I.powu(word.y_count() as u32);
                    terms.push((word, unit * phase * c));
                }
            }
        }
        PauliSum::from_complex_terms(self.n, terms, 1e-12)
    }
}

pub fn ising_decompose(h: &PauliSum) -> IsingDecomposition {
    let n = h.n();
    let mut diagonal = Vec::new();
    let mut raw: BTreeMap<BitVector, (Vec<(PauliWord, f64)>, Vec<(PauliWord, f64)>)> =
        BTreeMap::new();
    for (w, c) in h.iter() {
        if w.is_diagonal() {
            diagonal.push((w.clone(), c));
            continue;
        }
        let entry = raw.entry(w.x_mask().clone()).or_default();
        let zw = PauliWord::z_word(w.z_mask().clone());
        match w.y_count() % 4 {
            0 => entry.0.push((zw, c)),
            1 => entry.1.push((zw, -c)),
            2 => entry.0.push((zw, -c)),
            _ => entry.1.push((zw, c)),
        }
    }
    let sectors = raw
        .into_iter()
        .map(|(mask, (re, im))| {
            (
                mask,
                SectorOperator {
                    real: PauliSum::from_sorted_merge(n, re),
                    imag: PauliSum::from_sorted_merge(n, im),
                },
            )
        })
        .collect();
    IsingDecomposition {
        n,
        diagonal: PauliSum::from_sorted_merge(n, diagonal),
        sectors,
    }
}

/// Scores an x-mask sector; larger means more important.
pub trait RankingMeasure: Sync {
    fn weight(&self, mask: &BitVector, sector: &SectorOperator, state: &ReferenceState) -> Result<f64>;
}

/// Absolute energy gradient at zero amplitude of any generator built on the
/// sector: `|Re <0|I_m|0>|`. For real Hamiltonians `I_m` has no imaginary
/// part and this is `|<0|I_m|0>|`.
#[derive(Clone, Copy, Debug, Default)]
pub struct GradientRanking;

impl RankingMeasure for GradientRanking {
    fn weight(&self, _mask: &BitVector, sector: &SectorOperator, state: &ReferenceState) -> Result<f64> {
        Ok(sector.reference_value(state)?.re.abs())
    }
}

/// X-words sorted by descending weight, ties broken by mask order.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct RankedXWords {
    pub entries: Vec<XWord>,
}

impl RankedXWords {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn top(&self, k: usize) -> &[XWord] {
        &self.entries[..k.min(self.entries.len())]
    }

    /// Entries with weight strictly above `threshold`.
    pub fn above(&self, threshold: f64) -> RankedXWords {
        RankedXWords {
            entries: self
                .entries
                .iter()
                .filter(|w| w.weight > threshold)
                .cloned()
                .collect(),
        }
    }
}

pub fn rank_sectors(
    d: &IsingDecomposition,
    state: &ReferenceState,
    measure: &dyn RankingMeasure,
) -> Result<RankedXWords> {
    if state.n() != d.n {
        return Err(Error::QubitMismatch {
            left: d.n,
            right: state.n(),
        });
    }
    let sectors: Vec<_> = d.sectors.iter().collect();
    let weights: Vec<f64> = sectors
        .par_iter()
        .map(|(m, s)| measure.weight(m, s, state))
        .collect::<Result<_>>()?;
    let mut scored: Vec<(BitVector, f64)> = sectors
        .into_iter()
        .zip(weights)
        .map(|((m, _), w)| (m.clone(), w))
        .collect();
    scored.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    Ok(RankedXWords {
        entries: scored
            .into_iter()
            .enumerate()
            .map(|(i, (m, w))| XWord::new(m, w, i))
            .collect(),
    })
}

/// Sectors ranked by [`GradientRanking`].
pub fn gradients(d: &IsingDecomposition, state: &ReferenceState) -> Result<RankedXWords> {
    rank_sectors(d, state, &GradientRanking)
}

/// `|Im <0|H T|0>|`, the absolute slope of `<0|U(t)^† H U(t)|0>` at `t = 0`
/// for `U(t) = exp(-i t T/2)`.
pub fn gradient_single(h: &PauliSum, t: &PauliWord, state: &ReferenceState) -> Result<f64> {
    if h.n() != t.n() || state.n() != t.n() {
        return Err(Error::QubitMismatch {
            left: h.n(),
            right: t.n(),
        });
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for (w, c) in h.iter() {
        if w.x_mask() != t.x_mask() {
            continue;
        }
        let (prod, phase) = w.mul_unchecked(t);
        acc += phase.scale(Complex64::new(c * state.value(&prod), 0.0));
    }
    Ok(acc.im.abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::parse_word;

    fn sum(n: usize, terms: &[(f64, &str)]) -> PauliSum {
        PauliSum::from_terms(n, terms.iter().map(|(c, w)| (parse_word(w, n).unwrap(), *c))).unwrap()
    }

    #[test]
    fn diagonal_only() {
        let h = sum(2, &[(0.5, "Z0 Z1")]);
        let d = ising_decompose(&h);
        assert!(d.sectors.is_empty());
        assert_eq!(d.diagonal, h);
        let ranked = gradients(&d, &ReferenceState::new(2, 1).unwrap()).unwrap();
        assert!(ranked.is_empty());
    }

    #[test]
    fn xx_plus_yy_sector() {
        let h = sum(2, &[(0.2, "X0 X1"), (0.1, "Y0 Y1")]);
        let d = ising_decompose(&h);
        assert_eq!(d.sectors.len(), 1);
        let (mask, s) = d.sectors.iter().next().unwrap();
        assert_eq!(*mask, BitVector::from_indices(2, [0, 1]));
        assert_eq!(s.real, sum(2, &[(0.2, "I"), (-0.1, "Z0 Z1")]));
        assert!(s.imag.is_empty());
        assert_eq!(d.recompose().unwrap(), h);
        // on |11>, <Z0 Z1> = 1
        let w = gradients(&d, &ReferenceState::new(2, 2).unwrap()).unwrap();
        assert!((w.entries[0].weight - 0.1).abs() < 1e-15);
    }

    #[test]
    fn single_y_sector_is_imaginary() {
        let h = sum(1, &[(0.3, "Y0")]);
        let d = ising_decompose(&h);
        let s = &d.sectors[&BitVector::from_indices(1, [0])];
        let state = ReferenceState::new(1, 1).unwrap();
        let v = s.reference_value(&state).unwrap();
        assert!((v.norm() - 0.3).abs() < 1e-15);
        // H is proportional to its only candidate generator, so no slope
        assert_eq!(gradients(&d, &state).unwrap().entries[0].weight, 0.0);
        let t = parse_word("Y0", 1).unwrap();
        assert_eq!(gradient_single(&h, &t, &state).unwrap(), 0.0);
        assert_eq!(d.recompose().unwrap(), h);
    }

    #[test]
    fn z_with_y_generator_has_no_slope() {
        let h = sum(1, &[(1.0, "Z0")]);
        let t = parse_word("Y0", 1).unwrap();
        assert_eq!(gradient_single(&h, &t, &ReferenceState::new(1, 0).unwrap()).unwrap(), 0.0);
    }

    #[test]
    fn x_with_y_generator() {
        // d/dt (cos t <Z> + sin t * 0.3 <X ...>) style slope
        let h = sum(1, &[(1.0, "Z0"), (0.3, "X0")]);
        let t = parse_word("Y0", 1).unwrap();
        let g = gradient_single(&h, &t, &ReferenceState::new(1, 0).unwrap()).unwrap();
        assert!((g - 0.3).abs() < 1e-15);
        let d = ising_decompose(&h);
        let w = gradients(&d, &ReferenceState::new(1, 0).unwrap()).unwrap();
        assert!((w.entries[0].weight - 0.3).abs() < 1e-15);
    }

    #[test]
    fn commuting_generator_has_zero_gradient() {
        let h = sum(2, &[(0.7, "X0 Y1"), (0.2, "Z0")]);
        let t = parse_word("X0 Y1", 2).unwrap();
        assert_eq!(gradient_single(&h, &t, &ReferenceState::new(2, 1).unwrap()).unwrap(), 0.0);
    }

    #[test]
    fn ranking_order_and_ties() {
        let h = sum(
            3,
            &[(0.1, "X0 X1"), (0.1, "X2"), (0.5, "X1 X2"), (1.0, "Z0")],
        );
        let ranked = gradients(&ising_decompose(&h), &ReferenceState::new(3, 0).unwrap()).unwrap();
        let masks: Vec<_> = ranked.entries.iter().map(|e| e.mask.clone()).collect();
        assert_eq!(
            masks,
            vec![
                BitVector::from_indices(3, [1, 2]),
                BitVector::from_indices(3, [0, 1]),
                BitVector::from_indices(3, [2]),
            ]
        );
        assert_eq!(ranked.top(1).len(), 1);
        assert_eq!(ranked.above(0.2).len(), 1);
    }
}
