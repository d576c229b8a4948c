//! Cyclic binary lattices packed 64 cells to a word.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{domain, Error, Result};

pub(crate) const WORD_BITS: usize = 64;

pub(crate) fn words_for(n_cells: usize) -> usize {
    n_cells.div_ceil(WORD_BITS)
}

/// A ring of `n_cells` binary cells. Cell `i` lives in bit `i % 64` of word
/// `i / 64`; padding bits past `n_cells` are always zero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Lattice {
    n_cells: usize,
    words: Vec<u64>,
}

impl Lattice {
    pub fn zeros(n_cells: usize) -> Self {
        assert!(n_cells > 0, "lattice must have at least one cell");
        Lattice {
            n_cells,
            words: vec![0; words_for(n_cells)],
        }
    }

    pub fn ones(n_cells: usize) -> Self {
        let mut l = Lattice::zeros(n_cells);
        l.words.fill(u64::MAX);
        l.clear_padding();
        l
    }

    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let bits: Vec<bool> = bits.into_iter().collect();
        let mut l = Lattice::zeros(bits.len());
        for (i, b) in bits.into_iter().enumerate() {
            if b {
                l.set(i, true);
            }
        }
        l
    }

    /// Lattice with exactly the listed cells ON.
    pub fn with_ones(n_cells: usize, positions: impl IntoIterator<Item = usize>) -> Self {
        let mut l = Lattice::zeros(n_cells);
        for i in positions {
            l.set(i, true);
        }
        l
    }

    /// Exactly `k` ON cells at uniformly chosen positions.
    pub fn random_with_count<R: Rng + ?Sized>(n_cells: usize, k: usize, rng: &mut R) -> Self {
        assert!(k <= n_cells, "{k} ON cells do not fit in {n_cells}");
        Lattice::with_ones(n_cells, rand::seq::index::sample(rng, n_cells, k))
    }

    /// Each cell independently ON with probability 1/2.
    pub fn random<R: Rng + ?Sized>(n_cells: usize, rng: &mut R) -> Self {
        let mut l = Lattice::zeros(n_cells);
        for w in &mut l.words {
            *w = rng.next_u64();
        }
        l.clear_padding();
        l
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.n_cells
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub(crate) fn words_mut(&mut self) -> &mut [u64] {
        &mut self.words
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.n_cells, "cell {i} out of range {}", self.n_cells);
        (self.words[i / WORD_BITS] >> (i % WORD_BITS)) & 1 == 1
    }

    /// Cyclic access: any integer index, taken mod `len`.
    #[inline]
    pub fn get_cyclic(&self, i: isize) -> bool {
        self.get(i.rem_euclid(self.n_cells as isize) as usize)
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.n_cells, "cell {i} out of range {}", self.n_cells);
        let mask = 1u64 << (i % WORD_BITS);
        if value {
            self.words[i / WORD_BITS] |= mask;
        } else {
            self.words[i / WORD_BITS] &= !mask;
        }
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// ON cells in `start..end`.
    pub fn count_ones_in(&self, start: usize, end: usize) -> usize {
        assert!(start <= end && end <= self.n_cells);
        (start..end).filter(|&i| self.get(i)).count()
    }

    pub fn density(&self) -> f64 {
        self.count_ones() as f64 / self.n_cells as f64
    }

    pub fn is_all_off(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_all_on(&self) -> bool {
        self.count_ones() == self.n_cells
    }

    /// `Some(value)` when every cell holds `value`.
    pub fn uniform_value(&self) -> Option<bool> {
        if self.is_all_off() {
            Some(false)
        } else if self.is_all_on() {
            Some(true)
        } else {
            None
        }
    }

    /// Rotates right by `k`: the cell at `x` moves to `x + k` (mod len).
    pub fn rotate(&self, k: isize) -> Lattice {
        let n = self.n_cells as isize;
        let mut out = Lattice::zeros(self.n_cells);
        for x in 0..n {
            if self.get(x as usize) {
                out.set((x + k).rem_euclid(n) as usize, true);
            }
        }
        out
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.n_cells).map(move |i| self.get(i))
    }

    pub fn to_bools(&self) -> Vec<bool> {
        self.iter().collect()
    }

    fn clear_padding(&mut self) {
        let rem = self.n_cells % WORD_BITS;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }
}

impl fmt::Display for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Lattice({self})")
    }
}

/// Parses a string of `0`/`1` characters, cell 0 first.
impl FromStr for Lattice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.is_empty() {
            return Err(domain("lattice string is empty"));
        }
        let mut bits = Vec::with_capacity(s.len());
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => bits.push(false),
                '1' => bits.push(true),
                _ => return Err(domain(format!("invalid cell {c:?} at position {i}"))),
            }
        }
        Ok(Lattice::from_bits(bits))
    }
}
