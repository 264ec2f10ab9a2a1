//! Weighted orders of divisors given by the support of a local equation.

use std::fmt;
use std::str::FromStr;

use num_traits::Signed;

use crate::error::{Error, Result};
use crate::rational::{int, Rat};

/// Exponent vectors of the monomials with nonzero coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialSupport {
    dim: usize,
    exponents: Vec<Vec<u32>>,
}

impl MonomialSupport {
    /// Duplicates are dropped; an empty list is accepted (the zero divisor)
    /// but has no order.
    pub fn new(dim: usize, mut exponents: Vec<Vec<u32>>) -> Result<Self> {
        if let Some(bad) = exponents.iter().find(|v| v.len() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: bad.len(),
            });
        }
        exponents.sort();
        exponents.dedup();
        Ok(Self { dim, exponents })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn exponents(&self) -> &[Vec<u32>] {
        &self.exponents
    }

    pub fn is_empty(&self) -> bool {
        self.exponents.is_empty()
    }

    /// Support of a product of two equations (all pairwise sums).
    pub fn minkowski_sum(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: other.dim,
            });
        }
        let sums = self
            .exponents
            .iter()
            .flat_map(|u| {
                other
                    .exponents
                    .iter()
                    .map(move |v| u.iter().zip(v).map(|(a, b)| a + b).collect())
            })
            .collect();
        Self::new(self.dim, sums)
    }
}

impl fmt::Display for MonomialSupport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .exponents
            .iter()
            .map(|v| v.iter().map(u32::to_string).collect::<Vec<_>>().join(","))
            .collect();
        f.write_str(&parts.join(";"))
    }
}

/// `4,0,0;0,3,0;0,0,2`
impl FromStr for MonomialSupport {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let rows = s
            .split(';')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.split(',')
                    .map(|x| {
                        x.trim()
                            .parse::<u32>()
                            .map_err(|_| Error::Parse(format!("bad exponent '{x}' in '{t}'")))
                    })
                    .collect::<Result<Vec<u32>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let dim = rows.first().map_or(0, Vec::len);
        Self::new(dim, rows)
    }
}

/// Lowest weighted degree of a monomial in the support.
pub fn weighted_order(s: &MonomialSupport, weights: &[Rat]) -> Result<Rat> {
    if weights.len() != s.dim {
        return Err(Error::DimensionMismatch {
            expected: s.dim,
            got: weights.len(),
        });
    }
    if weights.iter().any(|w| !w.is_positive()) {
        return Err(Error::Validation("weights must be positive".into()));
    }
    s.exponents
        .iter()
        .map(|v| {
            v.iter()
                .zip(weights)
                .map(|(&b, w)| w * int(b as i64))
                .sum::<Rat>()
        })
        .min()
        .ok_or(Error::EmptySupport)
}

/// `r` times the weighted order for weights `(a, r - a, 1) / r`, computed in
/// integers. Every monomial must be invariant under `Z_r(a, -a, 1)`.
pub fn kawamata_wmult_divisor(s: &MonomialSupport, r: u32, a: u32) -> Result<Rat> {
    if r < 2 || a == 0 || a >= r || num_integer::gcd(a, r) != 1 {
        return Err(Error::Validation(format!(
            "need 0 < a < r with gcd(r,a)=1; got r={r}, a={a}"
        )));
    }
    if s.dim != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            got: s.dim,
        });
    }
    let (r, a) = (r as u64, a as u64);
    let mut best: Option<u64> = None;
    for v in &s.exponents {
        let (i, j, k) = (v[0] as u64, v[1] as u64, v[2] as u64);
        if (a * i + (r - a) * j + k) % r != 0 {
            return Err(Error::Validation(format!(
                "monomial ({i},{j},{k}) is not invariant"
            )));
        }
        let deg = a * i + (r - a) * j + k;
        best = Some(best.map_or(deg, |b| b.min(deg)));
    }
    best.map(|b| int(b as i64)).ok_or(Error::EmptySupport)
}
