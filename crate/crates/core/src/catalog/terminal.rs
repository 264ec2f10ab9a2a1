use std::fmt;
use std::str::FromStr;

use super::{ambient_family, coprime, TextForm};
use crate::error::{Error, Result};
use crate::lattice::BasisFamily;
use crate::rational::{int, rat, Rat};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CdTwoForm {
    /// `u^2 + y^3 + x z^2 + ...`
    Cubic,
    /// `u^2 + xyz + x^n + ...`, `n >= 4`.
    Xyz { n: u32 },
    /// `u^2 + y^2 z + x^n + ...`, `n >= 3`.
    Y2z { n: u32 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CdThreeForm {
    /// `u^2 + x^3 + y^3 + z^3`
    Fermat,
    /// `u^2 + x^3 + y z^2`
    Yz2,
    /// `u^2 + x^3 + y^3`
    Y3,
}

/// Non-quotient terminal point types, one per family in Mori's list.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MoriCase {
    CA { a: u32 },
    CAx4,
    CAx2,
    CD2(CdTwoForm),
    CD3(CdThreeForm),
    CE2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TerminalModel {
    case: MoriCase,
    r: u32,
}

impl TerminalModel {
    pub fn new(case: MoriCase, r: u32) -> Result<Self> {
        let need = |ok: bool, what: &str| {
            if ok {
                Ok(())
            } else {
                Err(Error::Validation(format!("{what} (got r={r})")))
            }
        };
        match case {
            MoriCase::CA { a } => {
                need(r >= 2, "cA/r needs r >= 2")?;
                need(
                    a > 0 && a < r && coprime(a, r),
                    "cA/r needs 0 < a < r with gcd(a, r) = 1",
                )?;
            }
            MoriCase::CAx4 => need(r == 4, "cAx/4 has r = 4")?,
            MoriCase::CAx2 | MoriCase::CE2 => need(r == 2, "this case has r = 2")?,
            MoriCase::CD2(form) => {
                need(r == 2, "cD/2 has r = 2")?;
                match form {
                    CdTwoForm::Xyz { n } => need(n >= 4, "cD/2 xyz form needs n >= 4")?,
                    CdTwoForm::Y2z { n } => need(n >= 3, "cD/2 y2z form needs n >= 3")?,
                    CdTwoForm::Cubic => {}
                }
            }
            MoriCase::CD3(_) => need(r == 3, "cD/3 has r = 3")?,
        }
        Ok(Self { case, r })
    }

    pub fn ca(r: u32, a: u32) -> Result<Self> {
        Self::new(MoriCase::CA { a }, r)
    }

    pub fn case(&self) -> MoriCase {
        self.case
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    /// Group action on `(x, y, z, u)`.
    pub fn group_residues(&self) -> [u32; 4] {
        match self.case {
            MoriCase::CA { a } => [a, self.r - a, 0, 1],
            MoriCase::CAx4 => [1, 3, 2, 1],
            MoriCase::CAx2 => [1, 0, 1, 1],
            MoriCase::CD2(_) => [1, 1, 0, 1],
            MoriCase::CD3(_) => [1, 2, 2, 0],
            MoriCase::CE2 => [0, 1, 1, 1],
        }
    }

    /// Defining equation in normal form (higher-order terms omitted).
    pub fn equation(&self) -> String {
        match self.case {
            MoriCase::CA { .. } => format!("xy + f(z^{}, u)", self.r),
            MoriCase::CAx4 => "x^2 + y^2 + f(z, u)".into(),
            MoriCase::CAx2 => "x^2 + y^2 + f(z, u)".into(),
            MoriCase::CD2(CdTwoForm::Cubic) => "u^2 + y^3 + x z^2 + ...".into(),
            MoriCase::CD2(CdTwoForm::Xyz { n }) => format!("u^2 + xyz + x^{n} + ..."),
            MoriCase::CD2(CdTwoForm::Y2z { n }) => format!("u^2 + y^2 z + x^{n} + ..."),
            MoriCase::CD3(CdThreeForm::Fermat) => "u^2 + x^3 + y^3 + z^3".into(),
            MoriCase::CD3(CdThreeForm::Yz2) => "u^2 + x^3 + y z^2".into(),
            MoriCase::CD3(CdThreeForm::Y3) => "u^2 + x^3 + y^3".into(),
            MoriCase::CE2 => "u^2 + x^3 + g(y, z) x + h(y, z)".into(),
        }
    }

    fn tag(&self) -> &'static str {
        match self.case {
            MoriCase::CA { .. } => "cA",
            MoriCase::CAx4 => "cAx4",
            MoriCase::CAx2 => "cAx2",
            MoriCase::CD2(_) => "cD2",
            MoriCase::CD3(_) => "cD3",
            MoriCase::CE2 => "cE2",
        }
    }
}

impl fmt::Display for TerminalModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "terminal {} r={}", self.tag(), self.r)?;
        match self.case {
            MoriCase::CA { a } => write!(f, " a={a}"),
            MoriCase::CD2(CdTwoForm::Cubic) => write!(f, " form=cubic"),
            MoriCase::CD2(CdTwoForm::Xyz { n }) => write!(f, " form=xyz n={n}"),
            MoriCase::CD2(CdTwoForm::Y2z { n }) => write!(f, " form=y2z n={n}"),
            MoriCase::CD3(CdThreeForm::Fermat) => write!(f, " form=fermat"),
            MoriCase::CD3(CdThreeForm::Yz2) => write!(f, " form=yz2"),
            MoriCase::CD3(CdThreeForm::Y3) => write!(f, " form=y3"),
            _ => Ok(()),
        }
    }
}

impl FromStr for TerminalModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let form = TextForm::parse(s, "terminal")?;
        let kind = form
            .kind
            .as_deref()
            .ok_or_else(|| Error::Parse("missing terminal case".into()))?;
        let r = form.require_u32("r")?;
        let shape = form.fields.get("form").map(String::as_str);
        let case = match kind {
            "cA" => {
                form.reject_unknown(&["r", "a"])?;
                MoriCase::CA {
                    a: form.require_u32("a")?,
                }
            }
            "cAx4" | "cAx2" | "cE2" => {
                form.reject_unknown(&["r"])?;
                match kind {
                    "cAx4" => MoriCase::CAx4,
                    "cAx2" => MoriCase::CAx2,
                    _ => MoriCase::CE2,
                }
            }
            "cD2" => {
                form.reject_unknown(&["r", "form", "n"])?;
                MoriCase::CD2(match shape {
                    Some("cubic") | None => CdTwoForm::Cubic,
                    Some("xyz") => CdTwoForm::Xyz {
                        n: form.require_u32("n")?,
                    },
                    Some("y2z") => CdTwoForm::Y2z {
                        n: form.require_u32("n")?,
                    },
                    Some(other) => return Err(Error::Parse(format!("unknown cD2 form '{other}'"))),
                })
            }
            "cD3" => {
                form.reject_unknown(&["r", "form"])?;
                MoriCase::CD3(match shape {
                    Some("fermat") | None => CdThreeForm::Fermat,
                    Some("yz2") => CdThreeForm::Yz2,
                    Some("y3") => CdThreeForm::Y3,
                    Some(other) => return Err(Error::Parse(format!("unknown cD3 form '{other}'"))),
                })
            }
            other => return Err(Error::Parse(format!("unknown terminal case '{other}'"))),
        };
        Self::new(case, r)
    }
}

/// Monomial basis of the local ring modulo the equation, as families of
/// invariant monomials in `(x, y, z, u)` with unit weights, plus the overlap
/// family counted twice (cA/r only).
pub fn mori_basis(m: &TerminalModel) -> Result<(Vec<BasisFamily>, Option<BasisFamily>)> {
    let g = m.group_residues();
    let w = vec![int(1); 4];
    let r = m.r;
    let fam = |label: &str, prefix: [u32; 4], free: &[usize]| {
        ambient_family(label, r, &g, &w, &prefix, free)
    };
    let none = [0; 4];
    match m.case {
        MoriCase::CA { .. } => Ok((
            vec![
                fam("x^s z^l u^m", none, &[0, 2, 3])?,
                fam("y^t z^l u^m", none, &[1, 2, 3])?,
            ],
            Some(fam("z^l u^m", none, &[2, 3])?),
        )),
        MoriCase::CAx4 | MoriCase::CAx2 => Ok((
            vec![
                fam("y^t z^l u^m", none, &[1, 2, 3])?,
                fam("x y^t z^l u^m", [1, 0, 0, 0], &[1, 2, 3])?,
            ],
            None,
        )),
        MoriCase::CD2(_) | MoriCase::CD3(_) | MoriCase::CE2 => Ok((
            vec![
                fam("x^i y^j z^k", none, &[0, 1, 2])?,
                fam("u x^i y^j z^k", [0, 0, 0, 1], &[0, 1, 2])?,
            ],
            None,
        )),
    }
}

/// `2 / r` in every case.
pub fn wmult_closed_terminal(m: &TerminalModel) -> Rat {
    rat(2, m.r as i64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{count_families, families_period, graded_slice_families};

    #[test]
    fn validation() {
        assert!(TerminalModel::ca(5, 2).is_ok());
        assert!(TerminalModel::ca(4, 2).is_err());
        assert!(TerminalModel::ca(1, 0).is_err());
        assert!(TerminalModel::new(MoriCase::CAx4, 2).is_err());
        assert!(TerminalModel::new(MoriCase::CD2(CdTwoForm::Xyz { n: 3 }), 2).is_err());
        assert!(TerminalModel::new(MoriCase::CD2(CdTwoForm::Y2z { n: 3 }), 2).is_ok());
    }

    #[test]
    fn closed_forms() {
        assert_eq!(
            wmult_closed_terminal(&TerminalModel::ca(5, 2).unwrap()),
            rat(2, 5)
        );
        assert_eq!(
            wmult_closed_terminal(&TerminalModel::new(MoriCase::CAx4, 4).unwrap()),
            rat(1, 2)
        );
        assert_eq!(
            wmult_closed_terminal(&TerminalModel::new(MoriCase::CE2, 2).unwrap()),
            int(1)
        );
    }

    #[test]
    fn cd3_basis_shape() {
        let m = TerminalModel::new(MoriCase::CD3(CdThreeForm::Fermat), 3).unwrap();
        let (fams, overlap) = mori_basis(&m).unwrap();
        assert!(overlap.is_none());
        assert_eq!(fams[0].cone.residues(), &[1, 2, 2]);
        assert_eq!(fams[1].residue_offset, 0);
        assert_eq!(fams[1].weight_offset, int(1));
    }

    #[test]
    fn ca_overlap_removes_double_count() {
        let m = TerminalModel::ca(3, 1).unwrap();
        let (fams, overlap) = mori_basis(&m).unwrap();
        let h = int(7);
        let mut union: Vec<Vec<u32>> = fams
            .iter()
            .flat_map(|f| f.monomials_below(&h).unwrap())
            .collect();
        union.sort();
        union.dedup();
        assert_eq!(
            count_families(&fams, overlap.as_ref(), &h).unwrap() as usize,
            union.len()
        );
        assert!(count_families(&fams, None, &h).unwrap() as usize > union.len());
        assert_eq!(families_period(&fams, overlap.as_ref()).unwrap(), 3);
    }

    #[test]
    fn cax2_first_graded_piece() {
        let m = TerminalModel::new(MoriCase::CAx2, 2).unwrap();
        let (fams, overlap) = mori_basis(&m).unwrap();
        // degree 1: only y is invariant; x, z, u are odd
        assert_eq!(
            graded_slice_families(&fams, overlap.as_ref(), &int(1)).unwrap(),
            1
        );
        assert_eq!(
            graded_slice_families(&fams, overlap.as_ref(), &int(0)).unwrap(),
            1
        );
    }

    #[test]
    fn text_forms() {
        let m: TerminalModel = "terminal cD2 r=2 form=y2z n=3".parse().unwrap();
        assert_eq!(m.case(), MoriCase::CD2(CdTwoForm::Y2z { n: 3 }));
        assert!("terminal cA r=4 a=2".parse::<TerminalModel>().is_err());
        assert!("terminal cD3 r=3 form=quartic"
            .parse::<TerminalModel>()
            .is_err());
        assert!("terminal cA r=5 a=2 b=1".parse::<TerminalModel>().is_err());
    }
}
