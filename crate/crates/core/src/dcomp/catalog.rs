use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::search::{fractal_degree, Ladder, Target};
use super::{DCompError, DCompResult, Status};
use crate::creal::{self, CReal};
use crate::oracle_tower::{sum_real, witness_real, OracleReal, Program, SetDescriptor, SumReal, specker};
use crate::rational::{self, Rational};

#[derive(Debug, Clone, Copy)]
pub enum Constructor {
    Constructive(fn() -> CReal),
    Limit(fn() -> OracleReal),
}

#[derive(Debug, Clone, Copy)]
pub struct CatalogEntry {
    pub id: &'static str,
    pub constructor: Constructor,
    pub declared_level: u32,
    /// Exact value `p/q` known by construction.
    pub certificate: Option<(i64, i64)>,
    pub notes: &'static str,
}

impl CatalogEntry {
    pub fn target(&self) -> Result<Target, DCompError> {
        Ok(match self.constructor {
            Constructor::Constructive(f) => Target::Constructive {
                real: f(),
                certificate: self.certificate.map(|(p, q)| rational::ratio(p, q)),
            },
            Constructor::Limit(f) => Target::Limit(f()),
        })
    }

    pub fn real(&self) -> Option<CReal> {
        match self.constructor {
            Constructor::Constructive(f) => Some(f()),
            Constructor::Limit(_) => None,
        }
    }

    pub fn certificate(&self) -> Option<Rational> {
        self.certificate.map(|(p, q)| rational::ratio(p, q))
    }
}

fn sum_evens() -> CReal {
    match sum_real(&SetDescriptor::Decidable(Program::evens())) {
        Ok(SumReal::Constructive(r)) => r,
        _ => unreachable!("evens decider halts on every input"),
    }
}

fn sum_halting() -> OracleReal {
    match sum_real(&SetDescriptor::Halting) {
        Ok(SumReal::Limit(r)) => r,
        _ => unreachable!("halting sums are limits"),
    }
}

const CATALOG: &[CatalogEntry] = &[
    CatalogEntry {
        id: "1",
        constructor: Constructor::Constructive(|| creal::from_rational(rational::int(1))),
        declared_level: 0,
        certificate: Some((1, 1)),
        notes: "rational constant",
    },
    CatalogEntry {
        id: "3/4",
        constructor: Constructor::Constructive(|| creal::from_rational(rational::ratio(3, 4))),
        declared_level: 0,
        certificate: Some((3, 4)),
        notes: "rational constant",
    },
    CatalogEntry {
        id: "r_4_3",
        constructor: Constructor::Constructive(creal::geometric_quarter),
        declared_level: 0,
        certificate: Some((4, 3)),
        notes: "geometric series sum_k 4^-k, modulus n/2 + 1 terms",
    },
    CatalogEntry {
        id: "sum_evens",
        constructor: Constructor::Constructive(sum_evens),
        declared_level: 0,
        certificate: Some((2, 3)),
        notes: "sum over even k of 2^-(k+1), decided by a halting program; modulus n + 1",
    },
    CatalogEntry {
        id: "sqrt2",
        constructor: Constructor::Constructive(creal::sqrt2),
        declared_level: 1,
        certificate: None,
        notes: "heron iteration x -> x/2 + 1/x from 1, quadratic convergence modulus",
    },
    CatalogEntry {
        id: "pi",
        constructor: Constructor::Constructive(creal::pi_machin),
        declared_level: 1,
        certificate: None,
        notes: "machin 16 atan(1/5) - 4 atan(1/239), modulus least j with 4*2^n <= 25^j",
    },
    CatalogEntry {
        id: "pi_leibniz",
        constructor: Constructor::Constructive(creal::pi_leibniz),
        declared_level: 1,
        certificate: None,
        notes: "leibniz series 4 sum (-1)^k/(2k+1), alternating tail modulus 2^(n+2)",
    },
    CatalogEntry {
        id: "e",
        constructor: Constructor::Constructive(creal::e_series),
        declared_level: 1,
        certificate: None,
        notes: "sum 1/k!, modulus least N with (N+1)! >= 2^(n+1)",
    },
    CatalogEntry {
        id: "sin_sqrt2_over_6",
        constructor: Constructor::Constructive(|| {
            let x = creal::scale(&rational::ratio(1, 6), &creal::sqrt2());
            creal::sin_taylor(&x).expect("sqrt2/6 lies in the sine domain")
        }),
        declared_level: 1,
        certificate: None,
        notes: "taylor series of sin at heron(sqrt2)/6, lagrange tail modulus",
    },
    CatalogEntry {
        id: "ackermann",
        constructor: Constructor::Constructive(|| {
            creal::ackermann_real(creal::ACKERMANN_MAX_CUTOFF).expect("supported cutoff")
        }),
        declared_level: 1,
        certificate: None,
        notes: "sum 2^-A(k,k), exact through k = 3, tail below 2^-A(4,4)",
    },
    CatalogEntry {
        id: "witness_real_1",
        constructor: Constructor::Limit(|| witness_real(1).expect("level 1")),
        declared_level: 2,
        certificate: None,
        notes: "stage sums over the first jump",
    },
    CatalogEntry {
        id: "witness_real_2",
        constructor: Constructor::Limit(|| witness_real(2).expect("level 2")),
        declared_level: 3,
        certificate: None,
        notes: "stage sums over the second jump",
    },
    CatalogEntry {
        id: "specker",
        constructor: Constructor::Limit(specker),
        declared_level: 2,
        certificate: None,
        notes: "monotone computable sequence from halting times, no computable modulus",
    },
    CatalogEntry {
        id: "sum_halting",
        constructor: Constructor::Limit(sum_halting),
        declared_level: 2,
        certificate: None,
        notes: "sum over the enumerable, undecidable diagonal halting set",
    },
];

/// Rows carried only as static lines: `(id, reason)`.
pub const EXCLUDED: &[(&str, &str)] = &[
    ("non_constructive", "non-constructive existence: no chain exists"),
    ("hamel_basis", "choice-dependent: no chain exists"),
    ("r_H", "hyperarithmetical: out of scope"),
    ("alpha", "physical constant: out of scope"),
    ("feigenbaum", "dynamical constant: out of scope"),
];

pub fn catalog() -> &'static [CatalogEntry] {
    CATALOG
}

pub fn lookup(id: &str) -> Option<&'static CatalogEntry> {
    CATALOG.iter().find(|e| e.id == id)
}

#[derive(Debug, Clone)]
pub struct LayerRow {
    pub id: &'static str,
    pub declared_level: u32,
    pub result: Result<DCompResult, DCompError>,
    /// Set when the declared level undercuts the resolved one.
    pub flag: Option<String>,
}

#[derive(Debug, Clone)]
pub struct LayerTable {
    pub rows: Vec<LayerRow>,
    pub excluded: &'static [(&'static str, &'static str)],
}

impl LayerTable {
    /// Ids resolved to level `n`, in catalog order.
    pub fn bucket(&self, n: u32) -> Vec<&LayerRow> {
        self.rows
            .iter()
            .filter(|r| matches!(&r.result, Ok(d) if d.level == n))
            .collect()
    }

    pub fn max_level(&self) -> Option<u32> {
        self.rows.iter().filter_map(|r| r.result.as_ref().ok()).map(|d| d.level).max()
    }
}

/// Resolves every catalog entry and groups them by level.
pub fn layer_table(ladder: &Ladder, budget: u64) -> LayerTable {
    let rows = CATALOG
        .iter()
        .map(|e| {
            let result = e.target().and_then(|t| fractal_degree(&t, ladder, budget));
            let flag = match &result {
                Ok(d) if e.declared_level < d.level => Some(format!(
                    "declared level {} below resolved level {}",
                    e.declared_level, d.level
                )),
                _ => None,
            };
            LayerRow {
                id: e.id,
                declared_level: e.declared_level,
                result,
                flag,
            }
        })
        .collect();
    LayerTable {
        rows,
        excluded: EXCLUDED,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Membership {
    True,
    False,
    Unconfirmed,
}

/// Whether `id` lies in the `n`-th definability increment, with the search
/// result as certificate. An upper bound `L` only rules out `n > L`.
pub fn delta_membership(id: &str, n: u32, budget: u64) -> Result<(Membership, DCompResult), DCompError> {
    let d = super::dcomp(id, budget)?;
    let m = match d.status {
        Status::Exact if d.level == n => Membership::True,
        Status::Exact => Membership::False,
        Status::UpperBound if n > d.level => Membership::False,
        Status::UpperBound => Membership::Unconfirmed,
    };
    Ok((m, d))
}
