//! Global enumeration cap shared by every exhaustive search in the crate.

use std::sync::OnceLock;

use crate::error::{Error, Result};

pub const DEFAULT_MAX_ENUM: u64 = 1 << 20;
pub const MAX_ENUM_ENV: &str = "MQD_MAX_ENUM";

static MAX_ENUM: OnceLock<u64> = OnceLock::new();

/// Largest number of elements any single enumeration may visit.
///
/// Read once from `MQD_MAX_ENUM`; unparsable values fall back to the default.
pub fn max_enum() -> u64 {
    *MAX_ENUM.get_or_init(|| {
        std::env::var(MAX_ENUM_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<u64>().ok())
            .filter(|&v| v > 0)
            .unwrap_or(DEFAULT_MAX_ENUM)
    })
}

/// Fixes the cap before first use; returns `false` if it was already fixed.
pub fn set_max_enum(v: u64) -> bool {
    v > 0 && MAX_ENUM.set(v).is_ok()
}

/// `base^exp`, saturating at `u64::MAX`.
pub fn checked_pow(base: u64, exp: usize) -> u64 {
    let mut acc: u64 = 1;
    for _ in 0..exp {
        acc = acc.saturating_mul(base);
    }
    acc
}

/// Errors unless `p^dim` elements fit under the cap.
pub(crate) fn ensure_enumerable(p: u32, dim: usize, what: &str) -> Result<u64> {
    let n = checked_pow(p as u64, dim);
    if n > max_enum() {
        return Err(Error::CapExceeded(format!(
            "{what}: {p}^{dim} elements exceeds cap {}",
            max_enum()
        )));
    }
    Ok(n)
}

/// Iterates all coefficient vectors of length `dim` over GF(p) in
/// lexicographic order (last coordinate fastest), starting at zero.
pub(crate) struct CoeffIter {
    p: u32,
    cur: Option<Vec<u32>>,
}

impl CoeffIter {
    pub(crate) fn new(p: u32, dim: usize) -> Self {
        CoeffIter {
            p,
            cur: Some(vec![0; dim]),
        }
    }
}

impl Iterator for CoeffIter {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Vec<u32>> {
        let out = self.cur.clone()?;
        let mut next = out.clone();
        let mut i = next.len();
        loop {
            if i == 0 {
                self.cur = None;
                break;
            }
            i -= 1;
            next[i] += 1;
            if next[i] < self.p {
                self.cur = Some(next);
                break;
            }
            next[i] = 0;
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coeff_iter_counts() {
        assert_eq!(CoeffIter::new(3, 2).count(), 9);
        assert_eq!(CoeffIter::new(2, 0).count(), 1);
        let all: Vec<_> = CoeffIter::new(2, 2).collect();
        assert_eq!(all, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
    }
}
