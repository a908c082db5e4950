//! Timed here-and-there traces, their JSON form, and bounded enumeration.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Most atoms a trace can carry; states are stored as 64-bit masks.
pub const MAX_ATOMS: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TraceError {
    #[error("schema error: {0}")]
    Schema(String),
    #[error("duplicate atom `{0}` in alphabet")]
    DuplicateAtom(String),
    #[error("alphabet has {0} atoms, at most {MAX_ATOMS} are supported")]
    AlphabetTooLarge(usize),
    #[error("atom `{0}` is not in the alphabet")]
    UnknownAtom(String),
    #[error("sequence lengths differ: {0}")]
    LengthMismatch(String),
    #[error("here state is not a subset of there state at position {0}")]
    NotSubset(usize),
    #[error("time must start at 0, found {0}")]
    TimeOrigin(i64),
    #[error("time is not strictly increasing at position {0}")]
    NotStrict(usize),
}

/// An ordered, duplicate-free set of atom names.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Alphabet(Arc<[String]>);

impl Alphabet {
    pub fn new<I, S>(names: I) -> Result<Self, TraceError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.len() > MAX_ATOMS {
            return Err(TraceError::AlphabetTooLarge(names.len()));
        }
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(TraceError::DuplicateAtom(n.clone()));
            }
        }
        Ok(Alphabet(names.into()))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    pub fn index_of(&self, atom: &str) -> Option<usize> {
        self.0.iter().position(|n| n == atom)
    }

    pub fn state<S: AsRef<str>>(&self, atoms: &[S]) -> Result<StateSet, TraceError> {
        let mut mask = 0u64;
        for a in atoms {
            let idx = self
                .index_of(a.as_ref())
                .ok_or_else(|| TraceError::UnknownAtom(a.as_ref().to_string()))?;
            mask |= 1 << idx;
        }
        Ok(StateSet(mask))
    }

    pub fn names_of(&self, s: StateSet) -> Vec<String> {
        self.0
            .iter()
            .enumerate()
            .filter(|(i, _)| s.contains(*i))
            .map(|(_, n)| n.clone())
            .collect()
    }

    /// Every state over this alphabet as a mask, `0..2^n`.
    fn full_mask(&self) -> u64 {
        if self.len() == 64 {
            u64::MAX
        } else {
            (1u64 << self.len()) - 1
        }
    }
}

/// A set of atoms, as a bitmask over the positions of an [`Alphabet`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct StateSet(pub u64);

impl StateSet {
    pub const EMPTY: StateSet = StateSet(0);

    pub fn contains(self, atom: usize) -> bool {
        self.0 >> atom & 1 == 1
    }

    pub fn is_subset(self, other: StateSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn len(self) -> u32 {
        self.0.count_ones()
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }
}

/// A finite timed HT-trace `<H, T, tau>` with `H_i ⊆ T_i`, `tau(0) = 0`
/// and strictly increasing `tau`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TimedHTTrace {
    alphabet: Alphabet,
    here: Vec<StateSet>,
    there: Vec<StateSet>,
    tau: Vec<i64>,
}

impl TimedHTTrace {
    pub fn new(
        alphabet: Alphabet,
        here: Vec<StateSet>,
        there: Vec<StateSet>,
        tau: Vec<i64>,
    ) -> Result<Self, TraceError> {
        if here.len() != there.len() || there.len() != tau.len() {
            return Err(TraceError::LengthMismatch(format!(
                "here has {}, there has {}, tau has {}",
                here.len(),
                there.len(),
                tau.len()
            )));
        }
        let full = alphabet.full_mask();
        for (i, (h, t)) in here.iter().zip(&there).enumerate() {
            if !h.is_subset(*t) {
                return Err(TraceError::NotSubset(i));
            }
            if t.0 & !full != 0 {
                return Err(TraceError::Schema(format!(
                    "state at position {i} uses atoms outside the alphabet"
                )));
            }
        }
        if let Some(&t0) = tau.first() {
            if t0 != 0 {
                return Err(TraceError::TimeOrigin(t0));
            }
        }
        if let Some(i) = tau.windows(2).position(|w| w[0] >= w[1]) {
            return Err(TraceError::NotStrict(i + 1));
        }
        Ok(TimedHTTrace {
            alphabet,
            here,
            there,
            tau,
        })
    }

    /// A total trace `<T, T, tau>`.
    pub fn total(
        alphabet: Alphabet,
        there: Vec<StateSet>,
        tau: Vec<i64>,
    ) -> Result<Self, TraceError> {
        TimedHTTrace::new(alphabet, there.clone(), there, tau)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    /// The length `lambda`.
    pub fn len(&self) -> usize {
        self.tau.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tau.is_empty()
    }

    pub fn here(&self) -> &[StateSet] {
        &self.here
    }

    pub fn there(&self) -> &[StateSet] {
        &self.there
    }

    pub fn tau(&self) -> &[i64] {
        &self.tau
    }

    pub fn is_total(&self) -> bool {
        self.here == self.there
    }

    /// `<T, T, tau>`.
    pub fn total_of(&self) -> TimedHTTrace {
        TimedHTTrace {
            alphabet: self.alphabet.clone(),
            here: self.there.clone(),
            there: self.there.clone(),
            tau: self.tau.clone(),
        }
    }

    /// Same states, different time function. The new `tau` is validated.
    pub fn with_tau(&self, tau: Vec<i64>) -> Result<TimedHTTrace, TraceError> {
        TimedHTTrace::new(
            self.alphabet.clone(),
            self.here.clone(),
            self.there.clone(),
            tau,
        )
    }

    /// Same there-trace and time function, different here-trace.
    pub fn with_here(&self, here: Vec<StateSet>) -> Result<TimedHTTrace, TraceError> {
        TimedHTTrace::new(
            self.alphabet.clone(),
            here,
            self.there.clone(),
            self.tau.clone(),
        )
    }

    pub fn to_document(&self) -> TraceDocument {
        let names =
            |states: &[StateSet]| states.iter().map(|s| self.alphabet.names_of(*s)).collect();
        TraceDocument {
            alphabet: self.alphabet.names().to_vec(),
            lambda: self.len(),
            tau: self.tau.clone(),
            here: Some(names(&self.here)),
            there: names(&self.there),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_document()).expect("trace documents always serialize")
    }
}

impl fmt::Display for TimedHTTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("<empty>");
        }
        let show = |s: StateSet| {
            let names = self.alphabet.names_of(s);
            format!("{{{}}}", names.join(","))
        };
        for i in 0..self.len() {
            if i > 0 {
                f.write_str(" · ")?;
            }
            if self.here[i] == self.there[i] {
                write!(f, "{}", show(self.there[i]))?;
            } else {
                write!(f, "({}<{})", show(self.here[i]), show(self.there[i]))?;
            }
            write!(f, "@{}", self.tau[i])?;
        }
        Ok(())
    }
}

/// The structured-text form of a trace. `here` defaults to `there`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceDocument {
    pub alphabet: Vec<String>,
    pub lambda: usize,
    pub tau: Vec<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub here: Option<Vec<Vec<String>>>,
    pub there: Vec<Vec<String>>,
}

impl TraceDocument {
    pub fn into_trace(self) -> Result<TimedHTTrace, TraceError> {
        let alphabet = Alphabet::new(self.alphabet)?;
        let states = |rows: &[Vec<String>]| -> Result<Vec<StateSet>, TraceError> {
            rows.iter().map(|r| alphabet.state(r)).collect()
        };
        let there = states(&self.there)?;
        let here = match &self.here {
            Some(h) => states(h)?,
            None => there.clone(),
        };
        if self.lambda != there.len() || self.lambda != here.len() || self.lambda != self.tau.len()
        {
            return Err(TraceError::LengthMismatch(format!(
                "lambda is {} but here/there/tau have {}/{}/{} entries",
                self.lambda,
                here.len(),
                there.len(),
                self.tau.len()
            )));
        }
        TimedHTTrace::new(alphabet, here, there, self.tau)
    }
}

/// Parses and validates a trace document.
pub fn load_trace(document: &str) -> Result<TimedHTTrace, TraceError> {
    let doc: TraceDocument =
        serde_json::from_str(document).map_err(|e| TraceError::Schema(e.to_string()))?;
    doc.into_trace()
}

/// `H < T`: `H_i ⊆ T_i` everywhere and `H != T`.
pub fn strictly_below(here: &[StateSet], there: &[StateSet]) -> Result<bool, TraceError> {
    if here.len() != there.len() {
        return Err(TraceError::LengthMismatch(format!(
            "{} vs {}",
            here.len(),
            there.len()
        )));
    }
    let below = here.iter().zip(there).all(|(h, t)| h.is_subset(*t));
    Ok(below && here != there)
}

/// The finite search space for trace enumeration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceBounds {
    pub alphabet: Alphabet,
    pub lambda_max: usize,
    /// Largest `tau(i+1) - tau(i)`; at least 1.
    pub max_gap: i64,
    pub total_only: bool,
    /// When set, time stamps are drawn from this grid instead of from gaps
    /// `1..=max_gap`: `tau` ranges over the increasing sequences of grid
    /// values that start at 0.
    pub time_grid: Option<Vec<i64>>,
}

impl TraceBounds {
    pub fn new(alphabet: Alphabet, lambda_max: usize, max_gap: i64, total_only: bool) -> Self {
        TraceBounds {
            alphabet,
            lambda_max,
            max_gap: max_gap.max(1),
            total_only,
            time_grid: None,
        }
    }

    pub fn with_grid(mut self, grid: Vec<i64>) -> Self {
        let mut grid = grid;
        grid.sort_unstable();
        grid.dedup();
        self.time_grid = Some(grid);
        self
    }

    pub fn total(mut self) -> Self {
        self.total_only = true;
        self
    }

    /// All time functions of length `lambda`, in lexicographic order of
    /// their gap sequences.
    pub fn time_functions(&self, lambda: usize) -> Vec<Vec<i64>> {
        if lambda == 0 {
            return vec![Vec::new()];
        }
        let mut out = Vec::new();
        let mut tau = vec![0i64];
        match &self.time_grid {
            None => extend_gaps(&mut tau, lambda, self.max_gap, &mut out),
            Some(grid) => {
                let later: Vec<i64> = grid.iter().copied().filter(|&t| t > 0).collect();
                extend_grid(&mut tau, lambda, &later, 0, &mut out)
            }
        }
        out
    }

    /// Number of here/there state pairs per position.
    fn states_per_position(&self) -> u64 {
        let n = self.alphabet.len() as u32;
        if self.total_only {
            1u64 << n
        } else {
            3u64.pow(n)
        }
    }

    /// How many traces of length exactly `lambda` the bounds admit.
    pub fn count(&self, lambda: usize) -> u64 {
        self.states_per_position().pow(lambda as u32) * self.time_functions(lambda).len() as u64
    }

    pub fn total_count(&self) -> u64 {
        (0..=self.lambda_max).map(|l| self.count(l)).sum()
    }

    /// One line summary used in reports.
    pub fn summary(&self) -> String {
        let time = match &self.time_grid {
            Some(g) => format!("tau grid {g:?}"),
            None => format!("gaps<={}", self.max_gap),
        };
        format!(
            "|A|={} ({}), lambda<={}, {}, {}",
            self.alphabet.len(),
            self.alphabet.names().join(","),
            self.lambda_max,
            time,
            if self.total_only {
                "total traces"
            } else {
                "HT traces"
            }
        )
    }
}

fn extend_gaps(tau: &mut Vec<i64>, lambda: usize, max_gap: i64, out: &mut Vec<Vec<i64>>) {
    if tau.len() == lambda {
        out.push(tau.clone());
        return;
    }
    let last = *tau.last().expect("starts at 0");
    for gap in 1..=max_gap {
        tau.push(last + gap);
        extend_gaps(tau, lambda, max_gap, out);
        tau.pop();
    }
}

fn extend_grid(
    tau: &mut Vec<i64>,
    lambda: usize,
    grid: &[i64],
    from: usize,
    out: &mut Vec<Vec<i64>>,
) {
    if tau.len() == lambda {
        out.push(tau.clone());
        return;
    }
    for i in from..grid.len() {
        tau.push(grid[i]);
        extend_grid(tau, lambda, grid, i + 1, out);
        tau.pop();
    }
}

/// The `(here, there)` pairs a single position can take, ordered by the
/// there-mask and then the here-mask.
fn position_states(alphabet: &Alphabet, total_only: bool) -> Vec<(StateSet, StateSet)> {
    let full = alphabet.full_mask();
    let mut out = Vec::new();
    for t in 0..=full {
        if total_only {
            out.push((StateSet(t), StateSet(t)));
            continue;
        }
        let mut subs: Vec<u64> = submasks(t).collect();
        subs.sort_unstable();
        out.extend(subs.into_iter().map(|h| (StateSet(h), StateSet(t))));
    }
    out
}

/// All submasks of `mask`, including 0 and `mask` itself.
pub fn submasks(mask: u64) -> impl Iterator<Item = u64> {
    let mut next = Some(mask);
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == 0 {
            None
        } else {
            Some((cur - 1) & mask)
        };
        Some(cur)
    })
}

/// Deterministic stream of every trace within `bounds`: by ascending
/// length, then by time function (lexicographic in the gaps), then by the
/// states, position 0 most significant, each position ordered by its
/// there-mask and then its here-mask.
pub struct TraceIter {
    bounds: TraceBounds,
    per_position: Vec<(StateSet, StateSet)>,
    lambda: usize,
    taus: Vec<Vec<i64>>,
    tau_idx: usize,
    digits: Vec<usize>,
    exhausted_lambda: bool,
}

impl TraceIter {
    fn start_lambda(&mut self, lambda: usize) {
        self.lambda = lambda;
        self.taus = self.bounds.time_functions(lambda);
        self.tau_idx = 0;
        self.digits = vec![0; lambda];
        self.exhausted_lambda =
            self.taus.is_empty() || (lambda > 0 && self.per_position.is_empty());
    }

    fn advance_digits(&mut self) -> bool {
        let radix = self.per_position.len();
        for d in self.digits.iter_mut().rev() {
            *d += 1;
            if *d < radix {
                return true;
            }
            *d = 0;
        }
        false
    }
}

impl Iterator for TraceIter {
    type Item = TimedHTTrace;

    fn next(&mut self) -> Option<TimedHTTrace> {
        loop {
            if self.lambda > self.bounds.lambda_max {
                return None;
            }
            if self.exhausted_lambda {
                let next = self.lambda + 1;
                self.start_lambda(next);
                continue;
            }
            let (here, there) = self.digits.iter().map(|&d| self.per_position[d]).unzip();
            let tau = self.taus[self.tau_idx].clone();
            let trace = TimedHTTrace {
                alphabet: self.bounds.alphabet.clone(),
                here,
                there,
                tau,
            };
            if !self.advance_digits() {
                self.tau_idx += 1;
                if self.tau_idx == self.taus.len() {
                    self.exhausted_lambda = true;
                }
            }
            return Some(trace);
        }
    }
}

/// Every trace within `bounds`, each exactly once, in the order documented on
/// [`TraceIter`].
pub fn enumerate_traces(bounds: &TraceBounds) -> TraceIter {
    let per_position = position_states(&bounds.alphabet, bounds.total_only);
    let mut it = TraceIter {
        bounds: bounds.clone(),
        per_position,
        lambda: 0,
        taus: Vec::new(),
        tau_idx: 0,
        digits: Vec::new(),
        exhausted_lambda: false,
    };
    it.start_lambda(0);
    it
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn abc(names: &[&str]) -> Alphabet {
        Alphabet::new(names.iter().copied()).unwrap()
    }

    #[test]
    fn loads_counterexample_trace() {
        let t =
            load_trace(r#"{"alphabet":["a","b"],"lambda":3,"tau":[0,1,4],"there":[["a"],[],[]]}"#)
                .unwrap();
        assert_eq!(t.len(), 3);
        assert!(t.is_total());
        assert_eq!(t.tau(), &[0, 1, 4]);
        assert_eq!(t.there()[0], StateSet(1));
    }

    #[test]
    fn empty_trace_accepted() {
        let t =
            load_trace(r#"{"alphabet":["a"],"lambda":0,"tau":[],"here":[],"there":[]}"#).unwrap();
        assert!(t.is_empty());
    }

    #[test]
    fn rejects_invalid_documents() {
        let strict = load_trace(r#"{"alphabet":["a"],"lambda":2,"tau":[0,0],"there":[[],[]]}"#);
        assert_eq!(strict, Err(TraceError::NotStrict(1)));
        let origin = load_trace(r#"{"alphabet":["a"],"lambda":1,"tau":[3],"there":[[]]}"#);
        assert_eq!(origin, Err(TraceError::TimeOrigin(3)));
        let subset =
            load_trace(r#"{"alphabet":["a"],"lambda":1,"tau":[0],"here":[["a"]],"there":[[]]}"#);
        assert_eq!(subset, Err(TraceError::NotSubset(0)));
        let unknown = load_trace(r#"{"alphabet":["a"],"lambda":1,"tau":[0],"there":[["q"]]}"#);
        assert_eq!(unknown, Err(TraceError::UnknownAtom("q".into())));
        let lambda = load_trace(r#"{"alphabet":["a"],"lambda":2,"tau":[0],"there":[[]]}"#);
        assert!(matches!(lambda, Err(TraceError::LengthMismatch(_))));
        assert!(matches!(load_trace("{}"), Err(TraceError::Schema(_))));
        assert!(matches!(
            Alphabet::new(["a", "a"]),
            Err(TraceError::DuplicateAtom(_))
        ));
    }

    #[test]
    fn document_round_trip() {
        let ab = abc(&["a", "b"]);
        let t = TimedHTTrace::new(
            ab,
            vec![StateSet(0), StateSet(2)],
            vec![StateSet(1), StateSet(3)],
            vec![0, 2],
        )
        .unwrap();
        assert_eq!(load_trace(&t.to_json()).unwrap(), t);
    }

    #[test]
    fn total_of_is_idempotent() {
        let t =
            TimedHTTrace::new(abc(&["a"]), vec![StateSet(0)], vec![StateSet(1)], vec![0]).unwrap();
        let total = t.total_of();
        assert_eq!(total.here(), t.there());
        assert_eq!(total.total_of(), total);
    }

    #[test]
    fn strictly_below_cases() {
        let e = StateSet::EMPTY;
        let a = StateSet(1);
        assert_eq!(strictly_below(&[e, e], &[a, e]), Ok(true));
        assert_eq!(strictly_below(&[a, e], &[a, e]), Ok(false));
        assert_eq!(strictly_below(&[a], &[e]), Ok(false));
        assert!(strictly_below(&[a], &[a, e]).is_err());
    }

    #[test]
    fn strictly_below_is_a_strict_partial_order() {
        // Every length-2 sequence of states over two atoms.
        let seqs: Vec<Vec<StateSet>> = (0..16u64)
            .map(|x| vec![StateSet(x & 3), StateSet(x >> 2)])
            .collect();
        for x in &seqs {
            assert!(!strictly_below(x, x).unwrap());
            for y in &seqs {
                for z in &seqs {
                    if strictly_below(x, y).unwrap() && strictly_below(y, z).unwrap() {
                        assert!(strictly_below(x, z).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn enumeration_counts() {
        let a = abc(&["a"]);
        let total = TraceBounds::new(a.clone(), 1, 1, true);
        assert_eq!(enumerate_traces(&total).count(), 3);
        let ht = TraceBounds::new(a.clone(), 1, 1, false);
        assert_eq!(enumerate_traces(&ht).filter(|t| t.len() == 1).count(), 3);
        let gaps = TraceBounds::new(a, 3, 2, true);
        let taus: HashSet<Vec<i64>> = enumerate_traces(&gaps)
            .filter(|t| t.len() == 3)
            .map(|t| t.tau().to_vec())
            .collect();
        assert_eq!(taus.len(), 4);
    }

    #[test]
    fn enumeration_matches_closed_form_and_has_no_duplicates() {
        for total_only in [true, false] {
            let b = TraceBounds::new(abc(&["a", "b"]), 3, 2, total_only);
            let all: Vec<_> = enumerate_traces(&b).collect();
            let distinct: HashSet<_> = all.iter().cloned().collect();
            assert_eq!(all.len(), distinct.len());
            for lambda in 0..=3usize {
                let per = if total_only { 4u64 } else { 9 };
                let expected = per.pow(lambda as u32) * 2u64.pow(lambda.saturating_sub(1) as u32);
                let got = all.iter().filter(|t| t.len() == lambda).count() as u64;
                assert_eq!(got, expected, "lambda {lambda}");
                assert_eq!(b.count(lambda), expected);
            }
            for t in &all {
                let again = TimedHTTrace::new(
                    t.alphabet().clone(),
                    t.here().to_vec(),
                    t.there().to_vec(),
                    t.tau().to_vec(),
                );
                assert_eq!(again.as_ref(), Ok(t));
                assert!(!total_only || t.is_total());
            }
            // Lengths never decrease along the stream.
            assert!(all.windows(2).all(|w| w[0].len() <= w[1].len()));
        }
    }

    #[test]
    fn grid_time_functions() {
        let b = TraceBounds::new(abc(&["a"]), 3, 1, true).with_grid(vec![0, 40, 45, 50]);
        assert_eq!(
            b.time_functions(3),
            vec![vec![0, 40, 45], vec![0, 40, 50], vec![0, 45, 50]]
        );
        assert_eq!(b.time_functions(1), vec![vec![0]]);
    }

    #[test]
    fn submasks_cover_all() {
        let mut s: Vec<u64> = submasks(0b101).collect();
        s.sort_unstable();
        assert_eq!(s, vec![0, 1, 4, 5]);
        assert_eq!(submasks(0).collect::<Vec<_>>(), vec![0]);
    }
}
