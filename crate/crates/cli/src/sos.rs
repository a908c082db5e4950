//! Shape families of the accident/SOS/help example.
//!
//! The theory is `alw (a -> [(!h)*; !h]<=W s)`, `alw>=S (s -> ev<=R h)`
//! and `ev[A..A] a` over atoms `a`, `s`, `h`. Its equilibrium models have
//! the accident at one position `i` with `tau(i) = A` and then:
//!
//! 1. `a` is the last state;
//! 2. an empty state follows at `tau > A + W`;
//! 3. a block of `{s}` ending at `j` with `tau(j) < S`, then empty states;
//! 4. a block of `{s}` ending in `{s,h}` at `j` with `tau(j) = S`;
//! 5. a block of `{s}` ending at `j` with `tau(j) = S`, then one `{h}` at
//!    `k` with `tau(k) <= S + R`, everything else empty.

use std::fmt;

use mdel::traces::TimedHTTrace;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SosConstants {
    pub accident: i64,
    pub station: i64,
    pub window: i64,
    pub reply: i64,
}

impl SosConstants {
    /// Parses `A,S,W,R`.
    pub fn parse(text: &str) -> Result<SosConstants, String> {
        let parts: Vec<i64> = text
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<i64>()
                    .map_err(|e| format!("bad constant `{p}`: {e}"))
            })
            .collect::<Result<_, _>>()?;
        match parts[..] {
            [accident, station, window, reply] => Ok(SosConstants {
                accident,
                station,
                window,
                reply,
            }),
            _ => Err(format!(
                "expected four constants A,S,W,R, got {}",
                parts.len()
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Family {
    AccidentLast,
    NoCall,
    Unanswered,
    ImmediateHelp,
    DelayedHelp,
}

impl Family {
    pub fn number(self) -> usize {
        self as usize + 1
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Family::AccidentLast => "accident last",
            Family::NoCall => "no call",
            Family::Unanswered => "unanswered calls",
            Family::ImmediateHelp => "immediate help",
            Family::DelayedHelp => "delayed help",
        };
        write!(f, "F{} ({name})", self.number())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Sym {
    Empty,
    A,
    S,
    H,
    SH,
    Other,
}

/// The family of a total trace, or `None` if it matches no family.
pub fn classify(t: &TimedHTTrace, c: &SosConstants) -> Option<Family> {
    let ab = t.alphabet();
    let (a, s, h) = (ab.index_of("a")?, ab.index_of("s")?, ab.index_of("h")?);
    let syms: Vec<Sym> = t
        .there()
        .iter()
        .map(|st| match st.0 {
            0 => Sym::Empty,
            x if x == 1 << a => Sym::A,
            x if x == 1 << s => Sym::S,
            x if x == 1 << h => Sym::H,
            x if x == (1 << s | 1 << h) => Sym::SH,
            _ => Sym::Other,
        })
        .collect();
    let tau = t.tau();
    let i = syms.iter().position(|&x| x != Sym::Empty)?;
    if syms[i] != Sym::A || tau[i] != c.accident {
        return None;
    }
    let rest = &syms[i + 1..];
    let calls = rest.iter().take_while(|&&x| x == Sym::S).count();
    let all_empty = |xs: &[Sym]| xs.iter().all(|&x| x == Sym::Empty);
    if rest.is_empty() {
        return Some(Family::AccidentLast);
    }
    if calls == 0 {
        return match rest[0] {
            Sym::Empty if all_empty(rest) && tau[i + 1] > c.accident + c.window => {
                Some(Family::NoCall)
            }
            Sym::SH if all_empty(&rest[1..]) && tau[i + 1] == c.station => {
                Some(Family::ImmediateHelp)
            }
            _ => None,
        };
    }
    let j = i + calls;
    let after = &syms[j + 1..];
    match after.first() {
        Some(Sym::SH) if all_empty(&after[1..]) && tau[j + 1] == c.station => {
            Some(Family::ImmediateHelp)
        }
        _ if all_empty(after) && tau[j] < c.station => Some(Family::Unanswered),
        _ if tau[j] == c.station => {
            let k = after.iter().position(|&x| x != Sym::Empty)? + j + 1;
            let ok =
                syms[k] == Sym::H && all_empty(&syms[k + 1..]) && tau[k] <= c.station + c.reply;
            ok.then_some(Family::DelayedHelp)
        }
        _ => None,
    }
}
