//! Fixed-length bit vectors packed into 64-bit words.
//!
//! Shared by the Pauli masks and the GF(2) matrix rows. Bits past `len` in
//! the last word are always zero, so word-level equality, hashing and
//! popcounts are exact.

use std::cmp::Ordering;
use std::fmt;

use smallvec::SmallVec;

const WORD: usize = 64;

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitVector {
    len: usize,
    words: SmallVec<[u64; 2]>,
}

#[inline]
fn word_count(len: usize) -> usize {
    len.div_ceil(WORD)
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: SmallVec::from_elem(0, word_count(len)),
        }
    }

    /// Bits `0..count` set.
    pub fn prefix(len: usize, count: usize) -> Self {
        let mut v = Self::zeros(len);
        for i in 0..count.min(len) {
            v.set(i, true);
        }
        v
    }

    pub fn from_indices(len: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut v = Self::zeros(len);
        for i in indices {
            v.set(i, true);
        }
        v
    }

    /// Builds from 0/1 values, index 0 first.
    pub fn from_bools(bits: &[bool]) -> Self {
        Self::from_indices(
            bits.len(),
            bits.iter().enumerate().filter(|(_, b)| **b).map(|(i, _)| i),
        )
    }

    /// Low `len` bits of `value`; `len` must be at most 64.
    pub fn from_u64(len: usize, value: u64) -> Self {
        assert!(len <= WORD);
        let mut v = Self::zeros(len);
        if len > 0 {
            let mask = if len == WORD { u64::MAX } else { (1u64 << len) - 1 };
            v.words[0] = value & mask;
        }
        v
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// First word, for vectors of at most 64 bits used as basis-state masks.
    #[inline]
    pub fn low_word(&self) -> u64 {
        self.words.first().copied().unwrap_or(0)
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit {i} out of range for length {}", self.len);
        let bit = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= bit;
        } else {
            self.words[i / WORD] &= !bit;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|w| *w == 0)
    }

    #[inline]
    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    #[inline]
    pub fn xor_assign(&mut self, other: &Self) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= *b;
        }
    }

    /// XOR restricted to words `from_word..`.
    #[inline]
    pub(crate) fn xor_assign_from(&mut self, other: &Self, from_word: usize) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words[from_word..].iter_mut().zip(&other.words[from_word..]) {
            *a ^= *b;
        }
    }

    pub fn xor(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    pub fn and(&self, other: &Self) -> Self {
        debug_assert_eq!(self.len, other.len);
        let mut out = self.clone();
        for (a, b) in out.words.iter_mut().zip(&other.words) {
            *a &= *b;
        }
        out
    }

    /// Popcount of `self AND other`.
    #[inline]
    pub fn and_count(&self, other: &Self) -> usize {
        debug_assert_eq!(self.len, other.len);
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    /// GF(2) inner product.
    #[inline]
    pub fn dot(&self, other: &Self) -> bool {
        self.and_count(other) % 2 == 1
    }

    pub fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, w)| **w != 0)
            .map(|(k, w)| k * WORD + w.trailing_zeros() as usize)
    }

    pub fn ones(&self) -> Ones<'_> {
        Ones {
            words: &self.words,
            index: 0,
            current: self.words.first().copied().unwrap_or(0),
        }
    }

    pub fn swap_bits(&mut self, i: usize, j: usize) {
        let (a, b) = (self.get(i), self.get(j));
        self.set(i, b);
        self.set(j, a);
    }
}

pub struct Ones<'a> {
    words: &'a [u64],
    index: usize,
    current: u64,
}

impl Iterator for Ones<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        loop {
            if self.current != 0 {
                let tz = self.current.trailing_zeros() as usize;
                self.current &= self.current - 1;
                return Some(self.index * WORD + tz);
            }
            self.index += 1;
            if self.index >= self.words.len() {
                return None;
            }
            self.current = self.words[self.index];
        }
    }
}

impl Ord for BitVector {
    /// Length first, then the mask read as an unsigned integer with qubit 0
    /// as the least significant bit.
    fn cmp(&self, other: &Self) -> Ordering {
        self.len.cmp(&other.len).then_with(|| {
            for (a, b) in self.words.iter().rev().zip(other.words.iter().rev()) {
                match a.cmp(b) {
                    Ordering::Equal => continue,
                    ord => return ord,
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for BitVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector(")?;
        for i in 0..self.len {
            write!(f, "{}", u8::from(self.get(i)))?;
        }
        write!(f, ")")
    }
}
