//! Numerical freeness thresholds for adjoint systems `|K_X + L|` at a point.
//!
//! Conditions read `(L^p . W)^(1/p) >= sigma_p`; both sides are compared
//! after raising to the `p`-th power, so every check is an exact rational
//! comparison.

mod lemma33;

use std::fmt;

use crate::error::{Error, Result};
use crate::rational::{fmt_rat, int, rat, Rat};

pub use lemma33::{
    lemma33_lambda_bound, lemma33_lhs, lemma33_rhs, step22_feasibility, step22_lhs, AuxParams,
    Lemma33Value, Step22Report,
};

/// The point `x0` at which freeness is tested.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PointKind {
    /// Index one (smooth or Gorenstein terminal).
    Gorenstein,
    /// `C^3 / Z_r(1, a, b)`.
    Quotient { r: u32, a: u32, b: u32 },
    /// Terminal, neither a hypersurface nor a quotient point; index `r > 1`.
    Terminal { r: u32 },
}

impl PointKind {
    pub fn index(&self) -> u32 {
        match *self {
            PointKind::Gorenstein => 1,
            PointKind::Quotient { r, .. } | PointKind::Terminal { r } => r,
        }
    }
}

impl fmt::Display for PointKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PointKind::Gorenstein => write!(f, "gorenstein r=1"),
            PointKind::Quotient { r, a, b } => write!(f, "quotient 1/{r}(1,{a},{b})"),
            PointKind::Terminal { r } => write!(f, "terminal non-quotient r={r}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreenessInput {
    pub point: PointKind,
    pub l3: Rat,
    /// Minimum of `L^2 . S` over surfaces through the point.
    pub l2s: Rat,
    /// Minimum of `L . C` over curves through the point.
    pub lc: Rat,
}

impl FreenessInput {
    pub fn new(point: PointKind, l3: Rat, l2s: Rat, lc: Rat) -> Result<Self> {
        if point.index() == 0 {
            return Err(Error::Validation("index must be positive".into()));
        }
        for (name, v) in [("L3", &l3), ("L2S", &l2s), ("LC", &lc)] {
            if v <= &Rat::default() {
                return Err(Error::Validation(format!(
                    "{name} must be positive, got {}",
                    fmt_rat(v)
                )));
            }
        }
        Ok(Self { point, l3, l2s, lc })
    }
}

/// One `sigma_p` condition, stored as `p`-th powers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Condition {
    pub name: String,
    pub power: u32,
    pub threshold: Rat,
    pub attained: Rat,
    pub strict: bool,
    pub margin: Rat,
    pub pass: bool,
}

impl Condition {
    pub fn new(power: u32, threshold: Rat, attained: Rat, strict: bool) -> Self {
        let pass = if strict {
            attained > threshold
        } else {
            attained >= threshold
        };
        Self {
            name: format!("sigma{power}"),
            power,
            margin: &attained - &threshold,
            threshold,
            attained,
            strict,
            pass,
        }
    }

    /// Failed exactly at equality.
    pub fn is_boundary_failure(&self) -> bool {
        !self.pass && self.attained == self.threshold
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreenessVerdict {
    pub checker: String,
    pub pass: bool,
    pub conditions: Vec<Condition>,
    pub notes: Vec<String>,
}

impl FreenessVerdict {
    fn new(checker: &str, conditions: Vec<Condition>, notes: Vec<String>) -> Self {
        Self {
            checker: checker.into(),
            pass: conditions.iter().all(|c| c.pass),
            conditions,
            notes,
        }
    }

    pub fn failed(&self) -> Vec<&str> {
        self.conditions
            .iter()
            .filter(|c| !c.pass)
            .map(|c| c.name.as_str())
            .collect()
    }

    /// `pass`, or e.g. `fail: sigma3 boundary` / `fail: sigma1`.
    pub fn summary(&self) -> String {
        if self.pass {
            return "pass".into();
        }
        let parts: Vec<String> = self
            .conditions
            .iter()
            .filter(|c| !c.pass)
            .map(|c| {
                if c.is_boundary_failure() {
                    format!("{} boundary", c.name)
                } else {
                    c.name.clone()
                }
            })
            .collect();
        format!("fail: {}", parts.join(", "))
    }
}

/// Thresholds `3/r, 9/r, 27/r` (last strict) without any class check.
pub fn quotient_thresholds(inp: &FreenessInput) -> Vec<Condition> {
    let r = inp.point.index() as i64;
    vec![
        Condition::new(1, rat(3, r), inp.lc.clone(), false),
        Condition::new(2, rat(9, r), inp.l2s.clone(), false),
        Condition::new(3, rat(27, r), inp.l3.clone(), true),
    ]
}

/// Isolated quotient point `1/r(1, a, b)` with `gcd(r, a) = gcd(r, b) = 1`.
pub fn check_thm41(inp: &FreenessInput) -> Result<FreenessVerdict> {
    match inp.point {
        PointKind::Quotient { r, a, b }
            if num_integer::gcd(r, a) == 1 && num_integer::gcd(r, b) == 1 =>
        {
            Ok(FreenessVerdict::new(
                "thm41",
                quotient_thresholds(inp),
                Vec::new(),
            ))
        }
        other => Err(Error::WrongClass(format!(
            "needs an isolated quotient point, got {other}"
        ))),
    }
}

/// Non-quotient terminal point of index `r > 1`: `2/r, 8/r, 16/r`.
pub fn check_thm44(inp: &FreenessInput) -> Result<FreenessVerdict> {
    let r = match inp.point {
        PointKind::Terminal { r } if r > 1 => r as i64,
        other => {
            return Err(Error::WrongClass(format!(
                "needs a non-quotient terminal point of index > 1, got {other}"
            )))
        }
    };
    let conditions = vec![
        Condition::new(1, rat(2, r), inp.lc.clone(), false),
        Condition::new(2, rat(8, r), inp.l2s.clone(), false),
        Condition::new(3, rat(16, r), inp.l3.clone(), true),
    ];
    let notes = vec![
        "the surface step of the proof uses sigma2 >= 2/sqrt(r); the stated threshold 2 sqrt(2/r) (squared: 8/r) is checked".into(),
    ];
    Ok(FreenessVerdict::new("thm44", conditions, notes))
}

/// Any terminal point of index `r`: `3/r, 9/r, 27/r`.
pub fn check_cor45(inp: &FreenessInput) -> Result<FreenessVerdict> {
    let note = match inp.point {
        PointKind::Gorenstein => {
            "index 1: smooth/Gorenstein criterion with thresholds 3, 9, 27".to_string()
        }
        PointKind::Quotient { .. } => "quotient point: covered by the thm41 thresholds".to_string(),
        PointKind::Terminal { .. } => {
            "non-quotient point: covered by thm44, whose thresholds 2/r, 8/r, 16/r are weaker"
                .to_string()
        }
    };
    Ok(FreenessVerdict::new(
        "cor45",
        quotient_thresholds(inp),
        vec![note],
    ))
}

/// Surface A-type point `C^2 / Z_r(a, 1)`: `L.C >= 2/r`, `L^2 > 4/r`.
pub fn check_thm51(r: u32, l2: &Rat, lc: &Rat) -> Result<FreenessVerdict> {
    if r == 0 {
        return Err(Error::Validation("index must be positive".into()));
    }
    let ri = r as i64;
    let conditions = vec![
        Condition::new(1, rat(2, ri), lc.clone(), false),
        Condition::new(2, rat(4, ri), l2.clone(), true),
    ];
    Ok(FreenessVerdict::new("thm51", conditions, Vec::new()))
}

/// `sigma_p^p` for a threshold `c / r^(1/p)` written as `c^p / r`.
pub fn threshold_power(c: &Rat, p: u32, r: u32) -> Rat {
    c.pow(p as i32) / int(r as i64)
}

/// The smooth thresholds, for comparison with `r = 1`.
pub fn smooth_thresholds() -> [Rat; 3] {
    let three = int(3);
    [
        three.clone(),
        threshold_power(&three, 2, 1),
        threshold_power(&three, 3, 1),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quotient(r: u32, a: u32, b: u32, l3: Rat, l2s: Rat, lc: Rat) -> FreenessInput {
        FreenessInput::new(PointKind::Quotient { r, a, b }, l3, l2s, lc).unwrap()
    }

    fn terminal(r: u32, l3: Rat, l2s: Rat, lc: Rat) -> FreenessInput {
        FreenessInput::new(PointKind::Terminal { r }, l3, l2s, lc).unwrap()
    }

    #[test]
    fn quotient_examples() {
        let v = check_thm41(&quotient(4, 3, 3, int(7), rat(9, 4), rat(3, 4))).unwrap();
        assert!(v.pass);
        for r in 1..=10 {
            let v = check_thm41(&quotient(
                r,
                1,
                1,
                rat(27, r as i64),
                rat(9, r as i64),
                rat(3, r as i64),
            ))
            .unwrap();
            assert!(!v.pass);
            assert_eq!(v.failed(), vec!["sigma3"]);
            assert_eq!(v.summary(), "fail: sigma3 boundary");
        }
        assert!(
            check_thm41(&quotient(1, 0, 0, int(28), int(9), int(3)))
                .unwrap()
                .pass
        );
    }

    #[test]
    fn smooth_case_reproduces_integer_thresholds() {
        let v = check_thm41(&quotient(1, 0, 0, int(28), int(9), int(3))).unwrap();
        let thresholds: Vec<Rat> = v.conditions.iter().map(|c| c.threshold.clone()).collect();
        assert_eq!(thresholds, smooth_thresholds().to_vec());
        assert!(v.conditions[2].strict);
    }

    #[test]
    fn wrong_class() {
        let inp = quotient(4, 2, 1, int(9), int(9), int(9));
        assert!(matches!(check_thm41(&inp), Err(Error::WrongClass(_))));
        assert!(matches!(check_thm44(&inp), Err(Error::WrongClass(_))));
        let inp = terminal(1, int(9), int(9), int(9));
        assert!(check_thm44(&inp).is_err());
    }

    #[test]
    fn terminal_examples() {
        assert!(
            check_thm44(&terminal(2, int(9), int(4), int(1)))
                .unwrap()
                .pass
        );
        let v = check_thm44(&terminal(2, int(8), int(4), int(1))).unwrap();
        assert_eq!(v.summary(), "fail: sigma3 boundary");
        assert!(
            check_thm44(&terminal(4, int(5), int(2), rat(1, 2)))
                .unwrap()
                .pass
        );
        assert!(!v.notes.is_empty());
    }

    #[test]
    fn corollary_examples() {
        let g = FreenessInput::new(PointKind::Gorenstein, int(30), int(9), int(3)).unwrap();
        assert!(check_cor45(&g).unwrap().pass);
        let v = check_cor45(&terminal(5, rat(27, 5), rat(9, 5), rat(3, 5))).unwrap();
        assert_eq!(v.failed(), vec!["sigma3"]);
        assert!(
            check_cor45(&terminal(2, int(14), rat(9, 2), rat(3, 2)))
                .unwrap()
                .pass
        );
    }

    #[test]
    fn surface_examples() {
        for r in 1..=10i64 {
            let v = check_thm51(r as u32, &rat(4, r), &rat(2, r)).unwrap();
            assert_eq!(v.summary(), "fail: sigma2 boundary");
        }
        let v = check_thm51(3, &rat(3, 2), &rat(1, 3)).unwrap();
        assert_eq!(v.failed(), vec!["sigma1"]);
        assert!(check_thm51(4, &int(2), &rat(1, 2)).unwrap().pass);
    }

    #[test]
    fn non_positive_inputs_rejected() {
        assert!(FreenessInput::new(PointKind::Gorenstein, int(0), int(1), int(1)).is_err());
    }
}
