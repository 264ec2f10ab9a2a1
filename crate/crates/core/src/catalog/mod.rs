//! Models of singular points and their weighted multiplicities.
//!
//! Each model knows its closed-form weighted multiplicity and how to turn
//! itself into counting data ([`CongruenceCone`] or [`BasisFamily`] sets), so
//! that the closed form can be checked against extraction and against the
//! analytic density oracle.
//!
//! Every model has a canonical one-line text form, e.g.
//! `quotient r=5 a=(1,2,3)`, `terminal cA r=5 a=2`,
//! `subvariety S2 r=4 a=3 b=3 n=2`.

mod quotient;
mod subvariety;
mod terminal;
mod verify;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::lattice::{BasisFamily, CongruenceCone};
use crate::rational::{int, Rat};

pub use quotient::{
    build_cone, kawamata_bound_check, smooth_graded_enumerated, smooth_graded_floor_sum,
    wmult_closed_quotient, BlowupKind, BlowupSpec, CyclicQuotient, KawamataBoundReport,
};
pub use subvariety::{wmult_closed_subvariety, SubvarietyKind, SubvarietyModel};
pub use terminal::{
    mori_basis, wmult_closed_terminal, CdThreeForm, CdTwoForm, MoriCase, TerminalModel,
};
pub use verify::{verify_quotient, verify_subvariety, verify_terminal, verify_wmult, WmultReport};

/// `min { 0 < i <= r : a_j i = i (mod r) for all j }`.
pub fn compute_l(r: u32, residues: &[u32]) -> u32 {
    let r64 = r as u64;
    (1..=r)
        .find(|&i| {
            residues
                .iter()
                .all(|&a| ((a as u64 % r64) * i as u64) % r64 == i as u64 % r64)
        })
        .unwrap_or(r)
}

/// Inverse of `a` mod `r`; `0` when `r == 1`.
pub(crate) fn inverse_mod(a: u32, r: u32) -> Option<u32> {
    if r == 1 {
        return Some(0);
    }
    (1..r).find(|&e| (a as u64 * e as u64) % r as u64 == 1)
}

pub(crate) fn coprime(a: u32, r: u32) -> bool {
    a.gcd(&r) == 1
}

/// Builds a family from ambient residues and weights; the prefix monomial
/// determines the residue and weight offsets.
pub(crate) fn ambient_family(
    label: &str,
    r: u32,
    residues: &[u32],
    weights: &[Rat],
    prefix: &[u32],
    free: &[usize],
) -> Result<BasisFamily> {
    let cone = CongruenceCone::new(
        r,
        free.iter().map(|&i| residues[i]).collect(),
        free.iter().map(|&i| weights[i].clone()).collect(),
    )?;
    let residue_offset = prefix
        .iter()
        .zip(residues)
        .map(|(&e, &g)| e as u64 * g as u64)
        .sum::<u64>()
        % r as u64;
    let weight_offset = prefix
        .iter()
        .zip(weights)
        .map(|(&e, w)| w * int(e as i64))
        .sum::<Rat>();
    BasisFamily::new(
        label,
        prefix.to_vec(),
        free.to_vec(),
        cone,
        residue_offset as u32,
        weight_offset,
    )
}

/// Any catalog model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Model {
    Quotient(CyclicQuotient),
    Terminal(TerminalModel),
    Subvariety(SubvarietyModel),
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Model::Quotient(q) => q.fmt(f),
            Model::Terminal(t) => t.fmt(f),
            Model::Subvariety(s) => s.fmt(f),
        }
    }
}

impl FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.split_whitespace().next() {
            Some("quotient") => s.parse().map(Model::Quotient),
            Some("terminal") => s.parse().map(Model::Terminal),
            Some("subvariety") => s.parse().map(Model::Subvariety),
            _ => Err(Error::Parse(format!("unknown model '{s}'"))),
        }
    }
}

/// `head kind key=value ...` split into its pieces.
pub(crate) struct TextForm {
    pub kind: Option<String>,
    pub fields: BTreeMap<String, String>,
}

impl TextForm {
    pub fn parse(s: &str, head: &str) -> Result<Self> {
        let mut tokens = s.split_whitespace();
        if tokens.next() != Some(head) {
            return Err(Error::Parse(format!("expected '{head} ...', got '{s}'")));
        }
        let mut kind = None;
        let mut fields = BTreeMap::new();
        for tok in tokens {
            match tok.split_once('=') {
                Some((k, v)) => {
                    if fields.insert(k.to_string(), v.to_string()).is_some() {
                        return Err(Error::Parse(format!("repeated field '{k}'")));
                    }
                }
                None if kind.is_none() && fields.is_empty() => kind = Some(tok.to_string()),
                None => return Err(Error::Parse(format!("unexpected token '{tok}'"))),
            }
        }
        Ok(Self { kind, fields })
    }

    pub fn u32(&self, key: &str) -> Result<Option<u32>> {
        self.fields
            .get(key)
            .map(|v| {
                v.parse::<u32>()
                    .map_err(|_| Error::Parse(format!("{key}={v} is not an integer")))
            })
            .transpose()
    }

    pub fn require_u32(&self, key: &str) -> Result<u32> {
        self.u32(key)?
            .ok_or_else(|| Error::Parse(format!("missing field '{key}'")))
    }

    pub fn reject_unknown(&self, allowed: &[&str]) -> Result<()> {
        match self.fields.keys().find(|k| !allowed.contains(&k.as_str())) {
            Some(k) => Err(Error::Parse(format!("unknown field '{k}'"))),
            None => Ok(()),
        }
    }
}
