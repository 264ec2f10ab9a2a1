use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;

use super::{compute_l, coprime, TextForm};
use crate::error::{Error, Result};
use crate::lattice::{extract_cone, graded_slice, CongruenceCone};
use crate::rational::{fmt_rat, int, parse_rat_list, parse_u32_list, rat, Rat};

/// `C^n / Z_r(a_0, ..., a_{n-1})`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicQuotient {
    r: u32,
    residues: Vec<u32>,
}

impl CyclicQuotient {
    pub fn new(r: u32, residues: Vec<u32>) -> Result<Self> {
        if r == 0 {
            return Err(Error::Validation("group order must be at least 1".into()));
        }
        if residues.is_empty() {
            return Err(Error::Validation(
                "quotient needs at least one coordinate".into(),
            ));
        }
        Ok(Self {
            r,
            residues: residues.into_iter().map(|a| a % r).collect(),
        })
    }

    /// `C^n / Z_r(1, a_1, ..., a_{n-1})`.
    pub fn with_unit_first(r: u32, rest: &[u32]) -> Result<Self> {
        let mut residues = vec![1];
        residues.extend_from_slice(rest);
        Self::new(r, residues)
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn dim(&self) -> usize {
        self.residues.len()
    }

    pub fn residues(&self) -> &[u32] {
        &self.residues
    }

    /// `a_0 = 1` and `gcd(r, a_1) = 1`.
    pub fn validate_uniform(&self) -> Result<()> {
        if self.residues[0] != 1 % self.r {
            return Err(Error::Validation(format!(
                "{self}: first residue must be 1"
            )));
        }
        if let Some(&a1) = self.residues.get(1) {
            if !coprime(a1, self.r) {
                return Err(Error::Validation(format!("{self}: gcd(r, a_1) must be 1")));
            }
        }
        Ok(())
    }

    pub fn l(&self) -> u32 {
        compute_l(self.r, &self.residues[1..])
    }
}

impl fmt::Display for CyclicQuotient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list: Vec<String> = self.residues.iter().map(u32::to_string).collect();
        write!(f, "quotient r={} a=({})", self.r, list.join(","))
    }
}

impl FromStr for CyclicQuotient {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let form = TextForm::parse(s, "quotient")?;
        form.reject_unknown(&["r", "a"])?;
        if form.kind.is_some() {
            return Err(Error::Parse(format!("unexpected kind in '{s}'")));
        }
        let r = form.require_u32("r")?;
        let a = form
            .fields
            .get("a")
            .ok_or_else(|| Error::Parse("missing field 'a'".into()))?;
        let inner = a.trim_start_matches('(').trim_end_matches(')');
        Self::new(r, parse_u32_list(inner)?)
    }
}

/// `r^{n-1} / l^n`.
pub fn wmult_closed_quotient(q: &CyclicQuotient) -> Result<Rat> {
    q.validate_uniform()?;
    let l = q.l() as i64;
    let n = q.dim() as u32;
    Ok(Rat::new(
        BigInt::from(q.r).pow(n - 1),
        BigInt::from(l).pow(n),
    ))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BlowupKind {
    /// All weights `l / r`.
    Uniform,
    /// Weights `g_i / r` on `C^3 / Z_r(a, r - a, 1)`.
    Kawamata,
    Custom,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlowupSpec {
    pub kind: BlowupKind,
    pub weights: Vec<Rat>,
}

impl BlowupSpec {
    pub fn uniform(q: &CyclicQuotient) -> Self {
        let w = rat(q.l() as i64, q.r as i64);
        Self {
            kind: BlowupKind::Uniform,
            weights: vec![w; q.dim()],
        }
    }

    /// The residues must be `{1, a, r - a}` in some order with `gcd(r, a) = 1`.
    pub fn kawamata(q: &CyclicQuotient) -> Result<Self> {
        let r = q.r;
        let bad = || {
            Error::Validation(format!(
                "{q}: Kawamata blow-up needs type (a, r-a, 1) with gcd(r,a)=1"
            ))
        };
        if q.dim() != 3 || r < 2 {
            return Err(bad());
        }
        let g = q.residues();
        let ok = (0..3).any(|i| {
            let (j, k) = ((i + 1) % 3, (i + 2) % 3);
            g[i] == 1 && g[j] != 0 && (g[j] + g[k]).is_multiple_of(r) && coprime(g[j], r)
        });
        if !ok {
            return Err(bad());
        }
        Ok(Self {
            kind: BlowupKind::Kawamata,
            weights: g.iter().map(|&a| rat(a as i64, r as i64)).collect(),
        })
    }

    pub fn custom(weights: Vec<Rat>) -> Self {
        Self {
            kind: BlowupKind::Custom,
            weights,
        }
    }

    /// `uniform`, `kawamata`, or `custom W1,W2,...`.
    pub fn parse_for(q: &CyclicQuotient, s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "uniform" => Ok(Self::uniform(q)),
            "kawamata" => Self::kawamata(q),
            _ => match s.strip_prefix("custom") {
                Some(rest) => Ok(Self::custom(parse_rat_list(rest.trim())?)),
                None => Err(Error::Parse(format!("unknown blow-up '{s}'"))),
            },
        }
    }
}

impl fmt::Display for BlowupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            BlowupKind::Uniform => write!(f, "uniform"),
            BlowupKind::Kawamata => write!(f, "kawamata"),
            BlowupKind::Custom => {
                let ws: Vec<String> = self.weights.iter().map(fmt_rat).collect();
                write!(f, "custom {}", ws.join(","))
            }
        }
    }
}

pub fn build_cone(q: &CyclicQuotient, b: &BlowupSpec) -> Result<CongruenceCone> {
    if b.weights.len() != q.dim() {
        return Err(Error::DimensionMismatch {
            expected: q.dim(),
            got: b.weights.len(),
        });
    }
    CongruenceCone::new(q.r, q.residues.clone(), b.weights.clone())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KawamataBoundReport {
    pub r: u32,
    pub a: u32,
    pub extracted: Rat,
    /// `r^2 / (r - 1)`.
    pub general_bound: Rat,
    /// `r^2 / (a (r - a))`.
    pub specific_bound: Rat,
}

impl KawamataBoundReport {
    pub fn pass(&self) -> bool {
        self.extracted <= self.general_bound && self.extracted <= self.specific_bound
    }
}

/// Extracts the multiplicity of `C^3 / Z_r(a, r - a, 1)` under the Kawamata
/// blow-up and compares it with both upper bounds.
pub fn kawamata_bound_check(r: u32, a: u32) -> Result<KawamataBoundReport> {
    if r < 2 || a == 0 || a >= r || !coprime(a, r) {
        return Err(Error::Validation(format!(
            "need r > 1, 0 < a < r, gcd(r,a)=1; got r={r}, a={a}"
        )));
    }
    let q = CyclicQuotient::new(r, vec![a, r - a, 1])?;
    let cone = build_cone(&q, &BlowupSpec::kawamata(&q)?)?;
    let extracted = extract_cone(&cone)?;
    let (r, ai) = (r as i64, a as i64);
    Ok(KawamataBoundReport {
        r: r as u32,
        a,
        extracted,
        general_bound: rat(r * r, r - 1),
        specific_bound: rat(r * r, ai * (r - ai)),
    })
}

/// Graded dimension at a smooth point blown up with weights `(1, a, b)`,
/// as the floor sum `sum_l ( floor((h - l(a+b))/a) + floor((h - l(a+b))/b) + 1 )`.
pub fn smooth_graded_floor_sum(a: u64, b: u64, h: u64) -> u64 {
    (0..=h / (a + b))
        .map(|l| {
            let rest = h - l * (a + b);
            rest / a + rest / b + 1
        })
        .sum()
}

/// The same graded dimension from the enumeration layer.
pub fn smooth_graded_enumerated(a: u32, b: u32, h: u32) -> Result<u64> {
    let cone = CongruenceCone::new(1, vec![0, 0, 0], vec![int(1), int(a as i64), int(b as i64)])?;
    Ok(graded_slice(&cone, &int(h as i64))? as u64)
}
