//! Identifiers of reals in the toy semantics.

use alloc::format;
use alloc::string::String;
use core::cmp::Ordering;
use core::fmt;

use num_traits::ToPrimitive;

use crate::rational::{self, Rational};

/// A syntactic name for a real, with its description size.
///
/// Identifiers are ordered by text length, then bytes. Equality is on the
/// text alone.
#[derive(Debug, Clone)]
pub struct RealId {
    text: String,
    size: u32,
    compound: bool,
}

impl RealId {
    /// An opaque atom of size 1, e.g. `sqrt2` or `witness_real_2`.
    pub fn atom(name: impl Into<String>) -> Self {
        RealId {
            text: name.into(),
            size: 1,
            compound: false,
        }
    }

    /// A rational literal (`4/3`, `-2`); its size is the height `max(|p|, q)`.
    pub fn rational(q: &Rational) -> Self {
        RealId {
            text: rational::to_text(q),
            size: rational::height(q).to_u32().unwrap_or(u32::MAX),
            compound: false,
        }
    }

    pub fn witness(level: u32) -> Self {
        RealId::atom(format!("witness_real_{level}"))
    }

    pub fn plus(a: &RealId, b: &RealId) -> Self {
        Self::binary("plus", a, b)
    }

    pub fn times(a: &RealId, b: &RealId) -> Self {
        Self::binary("times", a, b)
    }

    pub fn neg(a: &RealId) -> Self {
        RealId {
            text: format!("neg_{}", a.wrapped()),
            size: a.size.saturating_add(1),
            compound: true,
        }
    }

    /// Commutative combination with the larger child first.
    fn binary(op: &str, a: &RealId, b: &RealId) -> Self {
        let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
        RealId {
            text: format!("{}_{op}_{}", hi.wrapped(), lo.wrapped()),
            size: hi.size.saturating_add(lo.size).saturating_add(1),
            compound: true,
        }
    }

    fn wrapped(&self) -> String {
        if self.compound {
            format!("({})", self.text)
        } else {
            self.text.clone()
        }
    }

    pub fn text(&self) -> &str {
        &self.text
    }

    pub fn size(&self) -> u32 {
        self.size
    }

    pub fn is_compound(&self) -> bool {
        self.compound
    }
}

impl PartialEq for RealId {
    fn eq(&self, other: &Self) -> bool {
        self.text == other.text
    }
}

impl Eq for RealId {}

impl Ord for RealId {
    fn cmp(&self, other: &Self) -> Ordering {
        self.text
            .len()
            .cmp(&other.text.len())
            .then_with(|| self.text.as_bytes().cmp(other.text.as_bytes()))
    }
}

impl PartialOrd for RealId {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for RealId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}
