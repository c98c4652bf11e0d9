//! Point enumeration over `GF(q)^n` and budget accounting.

use crate::error::{Error, Result};

/// Default cap on points (or search nodes) visited by a single sweep.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// `q^n`, or `None` on overflow.
pub fn space_size(q: u32, n: usize) -> Option<u128> {
    (q as u128).checked_pow(n as u32)
}

pub fn check_budget(needed: u128, limit: u64) -> Result<()> {
    if needed > limit as u128 {
        Err(Error::Budget { needed, limit })
    } else {
        Ok(())
    }
}

/// Lexicographic index of a point: `sum a_j q^(n-1-j)`.
pub fn point_index(q: u32, point: &[u32]) -> u64 {
    point.iter().fold(0u64, |acc, &a| acc * q as u64 + a as u64)
}

pub fn point_from_index(q: u32, n: usize, mut idx: u64) -> Vec<u32> {
    let mut out = vec![0u32; n];
    for slot in out.iter_mut().rev() {
        *slot = (idx % q as u64) as u32;
        idx /= q as u64;
    }
    out
}

/// Advances `point` to the next vector in lexicographic order; false after the last one.
pub fn next_point(q: u32, point: &mut [u32]) -> bool {
    for slot in point.iter_mut().rev() {
        *slot += 1;
        if *slot < q {
            return true;
        }
        *slot = 0;
    }
    false
}

/// Nonzero vectors whose first nonzero coordinate is 1, in lexicographic order.
///
/// Every nonzero vector of `GF(q)^n` is a unique unit multiple of exactly one of these.
pub struct ProjectivePoints {
    q: u32,
    current: Vec<u32>,
    lead: usize,
    done: bool,
}

impl ProjectivePoints {
    pub fn new(q: u32, n: usize) -> Self {
        let mut current = vec![0u32; n];
        if n > 0 {
            current[n - 1] = 1;
        }
        ProjectivePoints { q, current, lead: n.saturating_sub(1), done: n == 0 }
    }

    /// `(q^n - 1) / (q - 1)`.
    pub fn count(q: u32, n: usize) -> u128 {
        (0..n).map(|j| (q as u128).pow(j as u32)).sum()
    }
}

impl Iterator for ProjectivePoints {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Vec<u32>> {
        if self.done {
            return None;
        }
        let out = self.current.clone();
        // advance the tail after the leading 1, then move the lead left
        if !next_point(self.q, &mut self.current[self.lead + 1..]) {
            if self.lead == 0 {
                self.done = true;
            } else {
                self.current[self.lead] = 0;
                self.lead -= 1;
                self.current[self.lead] = 1;
            }
        }
        Some(out)
    }
}
