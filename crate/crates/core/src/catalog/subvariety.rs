use std::fmt;
use std::str::FromStr;

use super::{ambient_family, compute_l, coprime, inverse_mod, TextForm};
use crate::error::{Error, Result};
use crate::lattice::BasisFamily;
use crate::rational::{int, rat, Rat};

/// Curves and surfaces through the origin of `C^3 / Z_r(1, a, b)`.
///
/// The first four kinds are blown up with the uniform weights `l / r`; the
/// last five live in the unit-weight setting of a terminal point.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SubvarietyKind {
    /// The `x`-axis.
    C,
    /// `{z = 0}`.
    S1,
    /// `{xy + z^n = 0}`.
    S2 {
        n: u32,
    },
    /// `{x^2 + f(y, z) = 0}`.
    S3,
    /// The `x`-axis, unit weights.
    Cr,
    T1 {
        n: u32,
    },
    T2 {
        n: u32,
    },
    T3,
    T4,
}

impl SubvarietyKind {
    /// Kinds blown up with weights `l / r`.
    pub fn uses_uniform_weights(self) -> bool {
        matches!(self, Self::C | Self::S1 | Self::S2 { .. } | Self::S3)
    }

    pub fn dim(self) -> usize {
        match self {
            Self::C | Self::Cr => 1,
            _ => 2,
        }
    }

    fn tag(self) -> &'static str {
        match self {
            Self::C => "C",
            Self::S1 => "S1",
            Self::S2 { .. } => "S2",
            Self::S3 => "S3",
            Self::Cr => "Cr",
            Self::T1 { .. } => "T1",
            Self::T2 { .. } => "T2",
            Self::T3 => "T3",
            Self::T4 => "T4",
        }
    }

    fn exponent(self) -> Option<u32> {
        match self {
            Self::S2 { n } | Self::T1 { n } | Self::T2 { n } => Some(n),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SubvarietyModel {
    kind: SubvarietyKind,
    r: u32,
    a: u32,
    b: u32,
    /// `a e = 1 (mod r)`.
    e: u32,
}

impl SubvarietyModel {
    /// `a` and `b` are reduced mod `r`. The uniform-weight kinds need both
    /// coprime to `r`; the unit-weight kinds need only `a`.
    pub fn new(kind: SubvarietyKind, r: u32, a: u32, b: u32) -> Result<Self> {
        if r == 0 {
            return Err(Error::Validation("group order must be at least 1".into()));
        }
        let (a, b) = (a % r, b % r);
        if !coprime(a, r) {
            return Err(Error::Validation(format!(
                "gcd(a, r) must be 1 (r={r}, a={a})"
            )));
        }
        if kind.uses_uniform_weights() && !coprime(b, r) {
            return Err(Error::Validation(format!(
                "gcd(b, r) must be 1 (r={r}, b={b})"
            )));
        }
        if kind.exponent() == Some(0) {
            return Err(Error::Validation("exponent n must be positive".into()));
        }
        let e = inverse_mod(a, r)
            .ok_or_else(|| Error::Validation(format!("{a} has no inverse mod {r}")))?;
        Ok(Self { kind, r, a, b, e })
    }

    pub fn kind(&self) -> SubvarietyKind {
        self.kind
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn a(&self) -> u32 {
        self.a
    }

    pub fn b(&self) -> u32 {
        self.b
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    /// `e b mod r`.
    pub fn eb(&self) -> u32 {
        ((self.e as u64 * self.b as u64) % self.r as u64) as u32
    }

    pub fn l(&self) -> u32 {
        compute_l(self.r, &[self.a, self.b])
    }

    pub fn weight(&self) -> Rat {
        if self.kind.uses_uniform_weights() {
            rat(self.l() as i64, self.r as i64)
        } else {
            int(1)
        }
    }

    /// Monomial basis families in `(x, y, z)` and the doubly counted overlap.
    pub fn basis(&self) -> Result<(Vec<BasisFamily>, Option<BasisFamily>)> {
        let r = self.r;
        let w = vec![self.weight(); 3];
        let (a, b, e, eb) = (self.a, self.b, self.e, self.eb());
        let fam = |label: &str, g: [u32; 3], prefix: [u32; 3], free: &[usize]| {
            ambient_family(label, r, &g, &w, &prefix, free)
        };
        let none = [0; 3];
        let x = [1, 0, 0];
        Ok(match self.kind {
            SubvarietyKind::C | SubvarietyKind::Cr => {
                (vec![fam("x^s", [1, 0, 0], none, &[0])?], None)
            }
            SubvarietyKind::S1 => (vec![fam("x^s y^u", [1, a, 0], none, &[0, 1])?], None),
            SubvarietyKind::S2 { .. } | SubvarietyKind::T1 { .. } => (
                vec![
                    fam("x^s z^u", [1, 0, b], none, &[0, 2])?,
                    fam("y^t z^u", [0, 1, eb], none, &[1, 2])?,
                ],
                Some(fam("z^u", [0, 0, b], none, &[2])?),
            ),
            SubvarietyKind::T2 { .. } => (
                vec![
                    fam("x^s z^u", [eb, 0, 1], none, &[0, 2])?,
                    fam("y^t z^u", [0, e, 1], none, &[1, 2])?,
                ],
                Some(fam("z^u", [0, 0, 1], none, &[2])?),
            ),
            SubvarietyKind::S3 | SubvarietyKind::T3 => {
                let g = [e, 1, eb];
                (
                    vec![
                        fam("y^t z^u", g, none, &[1, 2])?,
                        fam("x y^t z^u", g, x, &[1, 2])?,
                    ],
                    None,
                )
            }
            SubvarietyKind::T4 => {
                let g = [b, 1, a];
                (
                    vec![
                        fam("y^t z^u", g, none, &[1, 2])?,
                        fam("x y^t z^u", g, x, &[1, 2])?,
                    ],
                    None,
                )
            }
        })
    }
}

impl fmt::Display for SubvarietyModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "subvariety {} r={} a={} b={}",
            self.kind.tag(),
            self.r,
            self.a,
            self.b
        )?;
        match self.kind.exponent() {
            Some(n) => write!(f, " n={n}"),
            None => Ok(()),
        }
    }
}

impl FromStr for SubvarietyModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let form = TextForm::parse(s, "subvariety")?;
        let tag = form
            .kind
            .as_deref()
            .ok_or_else(|| Error::Parse("missing subvariety kind".into()))?;
        let n = || form.require_u32("n");
        let kind = match tag {
            "C" => SubvarietyKind::C,
            "S1" => SubvarietyKind::S1,
            "S2" => SubvarietyKind::S2 { n: n()? },
            "S3" => SubvarietyKind::S3,
            "Cr" => SubvarietyKind::Cr,
            "T1" => SubvarietyKind::T1 { n: n()? },
            "T2" => SubvarietyKind::T2 { n: n()? },
            "T3" => SubvarietyKind::T3,
            "T4" => SubvarietyKind::T4,
            other => return Err(Error::Parse(format!("unknown subvariety kind '{other}'"))),
        };
        if kind.exponent().is_some() {
            form.reject_unknown(&["r", "a", "b", "n"])?;
        } else {
            form.reject_unknown(&["r", "a", "b"])?;
        }
        let b = form.u32("b")?.unwrap_or(0);
        Self::new(kind, form.require_u32("r")?, form.require_u32("a")?, b)
    }
}

pub fn wmult_closed_subvariety(s: &SubvarietyModel) -> Rat {
    let (r, l) = (s.r as i64, s.l() as i64);
    match s.kind {
        SubvarietyKind::C => rat(1, l),
        SubvarietyKind::S1 => rat(r, l * l),
        SubvarietyKind::S2 { .. } | SubvarietyKind::S3 => rat(2 * r, l * l),
        SubvarietyKind::Cr => rat(1, r),
        _ => rat(2, r),
    }
}
