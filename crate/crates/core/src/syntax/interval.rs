//! Integer intervals with possibly infinite ends.
//!
//! An interval keeps the bracket shape it was written with, so that the
//! pretty-printer can reproduce it and the release/trigger expansion can key
//! on it. Membership is always decided on the canonical open-open form
//! `(m..n)`, where a closed end is shifted outwards by one.

use std::cmp::Ordering;
use std::fmt;

use thiserror::Error;

/// One end of an interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Bound {
    NegInf,
    Finite(i64),
    PosInf,
}

impl Bound {
    fn rank(self) -> (i8, i64) {
        match self {
            Bound::NegInf => (0, 0),
            Bound::Finite(v) => (1, v),
            Bound::PosInf => (2, 0),
        }
    }

    fn shift(self, by: i64) -> Bound {
        match self {
            Bound::Finite(v) => Bound::Finite(v + by),
            inf => inf,
        }
    }

    fn negate(self) -> Bound {
        match self {
            Bound::NegInf => Bound::PosInf,
            Bound::Finite(v) => Bound::Finite(-v),
            Bound::PosInf => Bound::NegInf,
        }
    }

    pub fn finite(self) -> Option<i64> {
        match self {
            Bound::Finite(v) => Some(v),
            _ => None,
        }
    }

    /// True when `self < value` as extended integers.
    fn below(self, value: i64) -> bool {
        match self {
            Bound::NegInf => true,
            Bound::Finite(v) => v < value,
            Bound::PosInf => false,
        }
    }

    /// True when `value < self` as extended integers.
    fn above(self, value: i64) -> bool {
        match self {
            Bound::NegInf => false,
            Bound::Finite(v) => value < v,
            Bound::PosInf => true,
        }
    }
}

impl PartialOrd for Bound {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Bound {
    fn cmp(&self, other: &Self) -> Ordering {
        self.rank().cmp(&other.rank())
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::NegInf => f.write_str("-w"),
            Bound::Finite(v) => write!(f, "{v}"),
            Bound::PosInf => f.write_str("w"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IntervalError {
    #[error("interval end {0} cannot be closed")]
    ClosedInfinite(Bound),
    #[error("lower end of an interval cannot be {0}")]
    BadLower(Bound),
    #[error("upper end of an interval cannot be {0}")]
    BadUpper(Bound),
}

/// An interval `(m..n)`, `[m..n]`, `[m..n)` or `(m..n]` over the integers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Interval {
    lo: Bound,
    hi: Bound,
    lo_open: bool,
    hi_open: bool,
}

impl Default for Interval {
    fn default() -> Self {
        Interval::unbounded()
    }
}

impl Interval {
    /// Builds an interval with the given bracket shape.
    ///
    /// A closed end at `-w` or `w` is rejected, as is a lower end of `w` or
    /// an upper end of `-w`.
    pub fn new(lo: Bound, lo_open: bool, hi: Bound, hi_open: bool) -> Result<Self, IntervalError> {
        if lo == Bound::PosInf {
            return Err(IntervalError::BadLower(lo));
        }
        if hi == Bound::NegInf {
            return Err(IntervalError::BadUpper(hi));
        }
        if !lo_open && lo == Bound::NegInf {
            return Err(IntervalError::ClosedInfinite(lo));
        }
        if !hi_open && hi == Bound::PosInf {
            return Err(IntervalError::ClosedInfinite(hi));
        }
        Ok(Interval {
            lo,
            hi,
            lo_open,
            hi_open,
        })
    }

    /// `(-w..w)`, the interval omitted from unindexed operators.
    pub const fn unbounded() -> Self {
        Interval {
            lo: Bound::NegInf,
            hi: Bound::PosInf,
            lo_open: true,
            hi_open: true,
        }
    }

    /// `(m..n)`
    pub fn open(lo: Bound, hi: Bound) -> Result<Self, IntervalError> {
        Interval::new(lo, true, hi, true)
    }

    /// `[m..n]`
    pub fn closed(m: i64, n: i64) -> Self {
        Interval {
            lo: Bound::Finite(m),
            hi: Bound::Finite(n),
            lo_open: false,
            hi_open: false,
        }
    }

    /// `[m..n)`; `n` may be `w`.
    pub fn closed_open(m: i64, hi: Bound) -> Result<Self, IntervalError> {
        Interval::new(Bound::Finite(m), false, hi, true)
    }

    /// `(m..n]`; `m` may be `-w`.
    pub fn open_closed(lo: Bound, n: i64) -> Result<Self, IntervalError> {
        Interval::new(lo, true, Bound::Finite(n), false)
    }

    /// `[m..m]`, a single point.
    pub fn point(m: i64) -> Self {
        Interval::closed(m, m)
    }

    /// `(-w..n]`, written `<= n`.
    pub fn at_most(n: i64) -> Self {
        Interval {
            lo: Bound::NegInf,
            hi: Bound::Finite(n),
            lo_open: true,
            hi_open: false,
        }
    }

    /// `[m..w)`, written `>= m`.
    pub fn at_least(m: i64) -> Self {
        Interval {
            lo: Bound::Finite(m),
            hi: Bound::PosInf,
            lo_open: false,
            hi_open: true,
        }
    }

    pub fn lo(&self) -> Bound {
        self.lo
    }

    pub fn hi(&self) -> Bound {
        self.hi
    }

    pub fn lo_open(&self) -> bool {
        self.lo_open
    }

    pub fn hi_open(&self) -> bool {
        self.hi_open
    }

    pub fn is_unbounded(&self) -> bool {
        self.lo == Bound::NegInf && self.hi == Bound::PosInf
    }

    /// The equivalent open-open interval: `[m..` becomes `(m-1..` and
    /// `..n]` becomes `..n+1)`.
    pub fn canonical(&self) -> Interval {
        let lo = if self.lo_open {
            self.lo
        } else {
            self.lo.shift(-1)
        };
        let hi = if self.hi_open {
            self.hi
        } else {
            self.hi.shift(1)
        };
        Interval {
            lo,
            hi,
            lo_open: true,
            hi_open: true,
        }
    }

    pub fn contains(&self, i: i64) -> bool {
        let c = self.canonical();
        c.lo.below(i) && c.hi.above(i)
    }

    /// `-(m..n) = (-n..-m)`, with the bracket shapes swapped accordingly.
    pub fn invert(&self) -> Interval {
        Interval {
            lo: self.hi.negate(),
            hi: self.lo.negate(),
            lo_open: self.hi_open,
            hi_open: self.lo_open,
        }
    }

    /// Smallest member, `None` when the interval is empty, `Some(NegInf)`
    /// when unbounded below.
    pub fn min_member(&self) -> Option<Bound> {
        let c = self.canonical();
        let first = c.lo.shift(1);
        match (first, c.hi) {
            (Bound::NegInf, _) => Some(Bound::NegInf),
            (Bound::Finite(v), hi) if hi.above(v) => Some(Bound::Finite(v)),
            _ => None,
        }
    }

    /// Members lying in `lo..=hi`; used by tests and interval sampling.
    pub fn members_within(&self, lo: i64, hi: i64) -> impl Iterator<Item = i64> + '_ {
        (lo..=hi).filter(move |&i| self.contains(i))
    }

    /// Same set of integers, regardless of bracket shape.
    pub fn same_set(&self, other: &Interval) -> bool {
        let (a, b) = (self.canonical(), other.canonical());
        let empty = |c: &Interval| match c.lo.shift(1) {
            Bound::Finite(v) => !c.hi.above(v),
            _ => false,
        };
        (empty(&a) && empty(&b)) || (a.lo == b.lo && a.hi == b.hi)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let open = if self.lo_open { '(' } else { '[' };
        let close = if self.hi_open { ')' } else { ']' };
        write!(f, "{open}{}..{}{close}", self.lo, self.hi)
    }
}
