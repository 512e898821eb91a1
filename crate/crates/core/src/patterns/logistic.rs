//! Logistic-weight order (ORBGRAND).
//!
//! Logistic weight `LW` runs from 1 to `lw_max`. At each `LW` the patterns
//! are the partitions of `LW` into distinct parts `≤ n`; fewer parts come
//! first, and patterns with the same number of parts are in colexicographic
//! order (largest rank compared first).

use super::{PatternSource, TepBlock};
use crate::{Error, Result};

/// Largest logistic weight for length `n`: all ranks flipped.
pub fn max_logistic_weight(n: usize) -> usize {
    n * (n + 1) / 2
}

#[inline]
fn tri(w: usize) -> usize {
    w * (w + 1) / 2
}

/// Fills `out[..w]` with the colex-smallest strictly increasing tuple of
/// positive integers `≤ hi` summing to `sum`.
fn fill_first(out: &mut [usize], sum: usize, hi: usize) -> bool {
    let w = out.len();
    if w == 0 {
        return sum == 0;
    }
    if sum < tri(w) {
        return false;
    }
    // smallest top value v with w·v − w(w−1)/2 ≥ sum
    let top = (sum + tri(w - 1)).div_ceil(w).max(w);
    if top > hi {
        return false;
    }
    out[w - 1] = top;
    fill_first(&mut out[..w - 1], sum - top, top - 1)
}

#[derive(Clone, Debug)]
pub struct LogisticSource {
    n: usize,
    lw_max: usize,
    p_max: usize,
    lw: usize,
    parts: Vec<usize>,
    started: bool,
}

impl LogisticSource {
    pub fn new(n: usize, lw_max: usize, p_max: usize) -> Result<Self> {
        if lw_max > max_logistic_weight(n) {
            return Err(Error::InvalidParameter(format!(
                "maximum logistic weight {lw_max} exceeds {} for length {n}",
                max_logistic_weight(n)
            )));
        }
        Ok(Self {
            n,
            lw_max,
            p_max,
            lw: 0,
            parts: Vec::new(),
            started: false,
        })
    }

    pub fn lw_max(&self) -> usize {
        self.lw_max
    }

    pub fn p_max(&self) -> usize {
        self.p_max
    }

    /// Colex successor with the same sum and part count.
    fn advance_same_shape(&mut self) -> bool {
        let w = self.parts.len();
        // slot 0 is pinned by the sum once the others are fixed
        let mut below = self.parts[0];
        for j in 1..w {
            let bound = if j + 1 < w {
                self.parts[j + 1] - 1
            } else {
                self.n
            };
            let v = self.parts[j] + 1;
            let rest = below + self.parts[j] - v;
            if v <= bound && rest >= tri(j) && fill_first(&mut self.parts[..j], rest, v - 1) {
                self.parts[j] = v;
                return true;
            }
            below += self.parts[j];
        }
        false
    }

    /// First pattern at logistic weight `self.lw` with at least `from` parts.
    fn first_with_parts(&mut self, from: usize) -> bool {
        let max_parts = self.p_max.min(self.n);
        for w in from..=max_parts {
            if tri(w) > self.lw {
                break;
            }
            self.parts.resize(w, 0);
            if fill_first(&mut self.parts, self.lw, self.n) {
                return true;
            }
        }
        false
    }

    fn advance(&mut self) -> bool {
        if self.started && self.advance_same_shape() {
            return true;
        }
        if self.started && self.first_with_parts(self.parts.len() + 1) {
            return true;
        }
        self.started = true;
        loop {
            self.lw += 1;
            if self.lw > self.lw_max {
                return false;
            }
            if self.first_with_parts(1) {
                return true;
            }
        }
    }
}

impl PatternSource for LogisticSource {
    fn next_block(&mut self) -> Option<TepBlock<'_>> {
        if !self.advance() {
            return None;
        }
        let (&last, prefix) = self.parts.split_last()?;
        Some(TepBlock {
            prefix,
            last: last..=last,
        })
    }

    fn reset(&mut self) {
        self.lw = 0;
        self.parts.clear();
        self.started = false;
    }
}

/// Number of patterns in the stream, by dynamic programming over parts.
pub fn count_logistic_patterns(n: usize, lw_max: usize, p_max: usize) -> u128 {
    let p = p_max.min(n);
    // ways[j][s]: subsets of the parts seen so far with j elements summing to s
    let mut ways = vec![vec![0u128; lw_max + 1]; p + 1];
    ways[0][0] = 1;
    for v in 1..=n.min(lw_max) {
        for j in (1..=p).rev() {
            for s in (v..=lw_max).rev() {
                let add = ways[j - 1][s - v];
                if add != 0 {
                    ways[j][s] += add;
                }
            }
        }
    }
    ways.iter().skip(1).flat_map(|row| row.iter().skip(1)).sum()
}
