//! Sign and activity patterns of iterates, and detection of the iteration at
//! which the pattern settles.

use std::fmt;

use crate::prox::BoxBounds;

pub const DEFAULT_ZERO_TOL: f64 = 1e-9;
pub const DEFAULT_WINDOW: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Symbol {
    Neg,
    Zero,
    Pos,
    AtLower,
    Interior,
    AtUpper,
}

impl Symbol {
    fn as_char(self) -> char {
        match self {
            Symbol::Neg => '-',
            Symbol::Zero => '0',
            Symbol::Pos => '+',
            Symbol::AtLower => 'L',
            Symbol::Interior => 'I',
            Symbol::AtUpper => 'U',
        }
    }
}

/// Per-coordinate pattern of an iterate.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SignPattern(pub Vec<Symbol>);

impl SignPattern {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Coordinates that are neither zero nor at a bound.
    pub fn support_size(&self) -> usize {
        self.0
            .iter()
            .filter(|s| matches!(s, Symbol::Neg | Symbol::Pos | Symbol::Interior))
            .count()
    }

    /// Indices of nonzero (or interior) coordinates.
    pub fn support(&self) -> Vec<usize> {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, s)| matches!(s, Symbol::Neg | Symbol::Pos | Symbol::Interior))
            .map(|(i, _)| i)
            .collect()
    }
}

impl fmt::Display for SignPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.iter().try_for_each(|s| write!(f, "{}", s.as_char()))
    }
}

/// Sign pattern with zero tolerance `zeta`, or activity pattern against
/// `bounds` when given (a coordinate within `zeta` of a bound is at it).
///
/// # Panics
///
/// If `bounds` has a different length from `x`.
pub fn pattern_of(x: &[f64], zeta: f64, bounds: Option<&BoxBounds>) -> SignPattern {
    let zeta = zeta.max(0.0);
    let symbols = match bounds {
        None => x
            .iter()
            .map(|v| {
                if v.abs() <= zeta {
                    Symbol::Zero
                } else if *v > 0.0 {
                    Symbol::Pos
                } else {
                    Symbol::Neg
                }
            })
            .collect(),
        Some(b) => {
            assert_eq!(b.len(), x.len(), "bounds and iterate lengths differ");
            x.iter()
                .zip(b.lower().iter().zip(b.upper()))
                .map(|(v, (lo, hi))| {
                    if (v - lo).abs() <= zeta {
                        Symbol::AtLower
                    } else if (v - hi).abs() <= zeta {
                        Symbol::AtUpper
                    } else {
                        Symbol::Interior
                    }
                })
                .collect()
        }
    };
    SignPattern(symbols)
}

/// First `k` such that patterns `k..k+W` all equal the final pattern.
/// `None` for an empty sequence, `W = 0`, or when no window fits.
pub fn identification_iter(patterns: &[SignPattern], window: usize) -> Option<usize> {
    let last = patterns.last()?;
    if window == 0 || patterns.len() < window {
        return None;
    }
    // length of the trailing run equal to the final pattern
    let run = patterns.iter().rev().take_while(|p| *p == last).count();
    if run < window {
        return None;
    }
    Some(patterns.len() - run)
}
