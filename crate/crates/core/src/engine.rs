//! Synchronous update engine.
//!
//! The kernel works on the packed lattice words. Each step first builds a
//! haloed copy of the ring (three wrapped cells on each side, shifted in at
//! the word seams), then produces output cells eight at a time: a 14-bit
//! window of the haloed ring indexes a precomputed byte table holding the
//! rule's outputs for eight consecutive cells.

use crate::lattice::{words_for, Lattice, WORD_BITS};
use crate::rule::{RuleTable, NEIGHBORHOOD, RADIUS, TABLE_SIZE};

const CHUNK: usize = 8;
const WINDOW_BITS: usize = CHUNK + NEIGHBORHOOD - 1;
const WINDOW_MASK: u128 = (1 << WINDOW_BITS) - 1;

/// Step budget used when none is given: `2 * n_cells + 22`.
pub fn default_t_max(n_cells: usize) -> usize {
    2 * n_cells + 22
}

/// A rule expanded into the eight-cell lookup table the kernel runs on.
#[derive(Clone)]
pub struct CompiledRule {
    rule: RuleTable,
    chunk_table: Box<[u8]>,
}

impl CompiledRule {
    pub fn new(rule: RuleTable) -> Self {
        // window bit j is the cell j positions right of the chunk's leftmost
        // neighbor, so a 7-bit slice of the window is a neighborhood with the
        // leftmost cell in the low bit; reversing it gives the table index
        let mut by_slice = [false; TABLE_SIZE];
        for (slice, out) in by_slice.iter_mut().enumerate() {
            let n = (slice as u8).reverse_bits() >> 1;
            *out = rule.output(n as usize);
        }
        let mut chunk_table = vec![0u8; 1 << WINDOW_BITS].into_boxed_slice();
        for (window, slot) in chunk_table.iter_mut().enumerate() {
            let mut out = 0u8;
            for m in 0..CHUNK {
                if by_slice[(window >> m) & (TABLE_SIZE - 1)] {
                    out |= 1 << m;
                }
            }
            *slot = out;
        }
        CompiledRule { rule, chunk_table }
    }

    pub fn rule(&self) -> RuleTable {
        self.rule
    }

    pub fn step(&self, src: &Lattice) -> Lattice {
        let mut dst = Lattice::zeros(src.len());
        self.step_into(src, &mut dst, &mut Vec::new());
        dst
    }

    /// Writes the successor of `src` into `dst`. `halo` is scratch space and
    /// may be reused across calls.
    pub fn step_into(&self, src: &Lattice, dst: &mut Lattice, halo: &mut Vec<u64>) {
        let n = src.len();
        assert_eq!(n, dst.len(), "lattice sizes differ");
        let nw = words_for(n);
        fill_halo(src, halo);

        let out = dst.words_mut();
        for (w, slot) in out.iter_mut().enumerate() {
            let pair = halo[w] as u128 | (halo[w + 1] as u128) << WORD_BITS;
            let mut word = 0u64;
            for k in 0..WORD_BITS / CHUNK {
                let window = ((pair >> (CHUNK * k)) & WINDOW_MASK) as usize;
                word |= (self.chunk_table[window] as u64) << (CHUNK * k);
            }
            *slot = word;
        }
        let rem = n % WORD_BITS;
        if rem != 0 {
            out[nw - 1] &= (1u64 << rem) - 1;
        }
    }

    /// Whether `value` everywhere is a fixed point of the rule.
    pub fn uniform_is_fixed(&self, value: bool) -> bool {
        if value {
            self.rule.output((1 << NEIGHBORHOOD) - 1)
        } else {
            !self.rule.output(0)
        }
    }

    /// Iterates without recording states. See [`run`] for halting.
    pub fn settle(&self, initial: &Lattice, t_max: usize) -> Settled {
        let mut cur = initial.clone();
        let mut next = Lattice::zeros(initial.len());
        let mut halo = Vec::new();
        let mut t = 0;
        loop {
            if let Some(v) = cur.uniform_value() {
                if self.uniform_is_fixed(v) {
                    return Settled {
                        state: cur,
                        steps: t,
                        halt: HaltReason::UniformFixedPoint,
                    };
                }
            }
            if t == t_max {
                return Settled {
                    state: cur,
                    steps: t,
                    halt: HaltReason::BudgetExhausted,
                };
            }
            self.step_into(&cur, &mut next, &mut halo);
            std::mem::swap(&mut cur, &mut next);
            t += 1;
        }
    }

    pub fn run(&self, initial: &Lattice, t_max: usize) -> Trajectory {
        assert!(t_max >= 1, "t_max must be at least 1");
        let mut states = vec![initial.clone()];
        let mut halo = Vec::new();
        loop {
            let t = states.len() - 1;
            let cur = &states[t];
            if let Some(v) = cur.uniform_value() {
                if self.uniform_is_fixed(v) {
                    return Trajectory {
                        rule: self.rule,
                        states,
                        halted_at: Some(t),
                        halt_reason: HaltReason::UniformFixedPoint,
                    };
                }
            }
            if t == t_max {
                return Trajectory {
                    rule: self.rule,
                    states,
                    halted_at: None,
                    halt_reason: HaltReason::BudgetExhausted,
                };
            }
            let mut next = Lattice::zeros(cur.len());
            self.step_into(cur, &mut next, &mut halo);
            states.push(next);
        }
    }
}

/// Lays the ring out with `RADIUS` wrapped cells on both sides: bit `j` of
/// the halo holds cell `(j - RADIUS) mod n`. One spare zero word is kept at
/// the end so the kernel can always read word pairs.
fn fill_halo(src: &Lattice, halo: &mut Vec<u64>) {
    let n = src.len();
    let words = src.words();
    let nw = words.len();
    halo.clear();
    halo.resize(nw + 2, 0);
    let shift = RADIUS as u32;
    for w in 0..nw {
        halo[w] |= words[w] << shift;
        halo[w + 1] |= words[w] >> (WORD_BITS as u32 - shift);
    }
    for j in 0..RADIUS {
        if src.get_cyclic(j as isize - RADIUS as isize) {
            halo[0] |= 1 << j;
        }
        if src.get_cyclic(j as isize) {
            let bit = n + RADIUS + j;
            halo[bit / WORD_BITS] |= 1 << (bit % WORD_BITS);
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HaltReason {
    /// Reached all-ON or all-OFF and the rule keeps it there.
    UniformFixedPoint,
    /// Ran the full step budget.
    BudgetExhausted,
}

/// Final state of a run whose intermediate states were not kept.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Settled {
    pub state: Lattice,
    pub steps: usize,
    pub halt: HaltReason,
}

/// A recorded run: `states[0]` is the initial configuration and each later
/// state is the step of the one before.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trajectory {
    pub rule: RuleTable,
    pub states: Vec<Lattice>,
    pub halted_at: Option<usize>,
    pub halt_reason: HaltReason,
}

impl Trajectory {
    pub fn initial(&self) -> &Lattice {
        &self.states[0]
    }

    pub fn last(&self) -> &Lattice {
        self.states.last().expect("trajectory is never empty")
    }

    pub fn n_cells(&self) -> usize {
        self.initial().len()
    }

    /// Number of recorded states, including the initial one.
    pub fn rows(&self) -> usize {
        self.states.len()
    }
}

/// Runs exactly `steps` updates with no early halt.
pub fn run_full(rule: RuleTable, initial: &Lattice, steps: usize) -> Trajectory {
    let compiled = CompiledRule::new(rule);
    let mut states = Vec::with_capacity(steps + 1);
    states.push(initial.clone());
    let mut halo = Vec::new();
    for t in 0..steps {
        let mut next = Lattice::zeros(initial.len());
        compiled.step_into(&states[t], &mut next, &mut halo);
        states.push(next);
    }
    Trajectory {
        rule,
        states,
        halted_at: None,
        halt_reason: HaltReason::BudgetExhausted,
    }
}

/// One synchronous update of `lattice` under `rule`.
pub fn step(rule: RuleTable, lattice: &Lattice) -> Lattice {
    CompiledRule::new(rule).step(lattice)
}

/// Iterates `rule` from `initial` for at most `t_max` steps, stopping early
/// at the first state that is uniform and a fixed point of the rule.
pub fn run(rule: RuleTable, initial: &Lattice, t_max: usize) -> Trajectory {
    CompiledRule::new(rule).run(initial, t_max)
}
