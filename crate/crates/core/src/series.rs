//! Two-sided lattice sums truncated outward from the dominant index.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::scalar::TruncationBudget;

/// Terms below `SAFETY * tol` count as negligible.
const SAFETY: f64 = 0.1;
const MAX_RATIO: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesSum {
    pub value: Complex64,
    /// Number of indices summed on each side of the center.
    pub terms: usize,
    /// Geometric bound on the discarded tail, both sides combined.
    pub tail_bound: f64,
}

#[derive(Default)]
struct Side {
    last: f64,
    before: f64,
}

impl Side {
    fn push(&mut self, modulus: f64) {
        self.before = self.last;
        self.last = modulus;
    }

    fn ratio(&self) -> f64 {
        if self.last == 0.0 {
            0.0
        } else if self.before == 0.0 {
            f64::INFINITY
        } else {
            self.last / self.before
        }
    }

    fn settled(&self, threshold: f64) -> bool {
        self.last < threshold && self.before < threshold && self.ratio() < MAX_RATIO
    }

    fn tail(&self) -> f64 {
        let r = self.ratio();
        if r < 1.0 {
            self.last * r / (1.0 - r)
        } else {
            f64::INFINITY
        }
    }
}

/// Sums `term(n)` over all integers, starting at `center` and adding the
/// pair `center +- k` for `k = 1, 2, ...`.
///
/// Stops once, on both sides, the last two terms are below
/// `0.1 * tol * max(1, |partial sum|)` and the ratio of successive moduli is
/// below one half. More than `max_terms` pairs is a truncation error.
pub fn sum_outward<F>(center: i64, budget: &TruncationBudget, mut term: F) -> Result<SeriesSum>
where
    F: FnMut(i64) -> Complex64,
{
    let mut value = term(center);
    let mut up = Side::default();
    let mut down = Side::default();
    let mut k = 0usize;
    loop {
        k += 1;
        let offset = k as i64;
        let hi = term(center + offset);
        let lo = term(center - offset);
        value += hi + lo;
        up.push(hi.norm());
        down.push(lo.norm());
        if !(value.re.is_finite() && value.im.is_finite()) {
            return Err(Error::Range(format!("lattice sum overflowed after {k} terms")));
        }
        let threshold = SAFETY * budget.tol() * value.norm().max(1.0);
        if k >= 2 && up.settled(threshold) && down.settled(threshold) {
            return Ok(SeriesSum { value, terms: k, tail_bound: up.tail() + down.tail() });
        }
        if k >= budget.max_terms() {
            let achieved = (up.last + down.last).max(up.tail() + down.tail());
            return Err(Error::Truncation { terms: k, achieved });
        }
    }
}
