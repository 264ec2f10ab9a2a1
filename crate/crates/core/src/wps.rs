//! Degrees of `O(d)` on coordinate faces of weighted projective spaces and
//! the sharpness examples built from them.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::freeness::{
    check_thm41, check_thm51, quotient_thresholds, Condition, FreenessInput, FreenessVerdict,
    PointKind,
};
use crate::rational::{fmt_rat, int, parse_u32_list, rat, Rat};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WpsSpace {
    weights: Vec<u32>,
}

impl WpsSpace {
    pub fn new(weights: Vec<u32>) -> Result<Self> {
        if weights.is_empty() || weights.contains(&0) {
            return Err(Error::Validation(
                "weights must be positive and nonempty".into(),
            ));
        }
        Ok(Self { weights })
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    /// Present when the weights share a common factor.
    pub fn warning(&self) -> Option<String> {
        let g = self.weights.iter().fold(0u32, |g, &w| g.gcd(&w));
        (g > 1).then(|| format!("weights share the factor {g}; degrees use the formula verbatim"))
    }

    fn check_face(&self, face: &[usize]) -> Result<()> {
        if face.is_empty() {
            return Err(Error::Validation("empty face".into()));
        }
        let mut seen = face.to_vec();
        seen.sort_unstable();
        seen.dedup();
        if seen.len() != face.len() || seen.iter().any(|&i| i >= self.weights.len()) {
            return Err(Error::Validation(format!("bad face {face:?} for {self}")));
        }
        Ok(())
    }

    /// All coordinate faces with `p + 1` indices that contain `vertex`.
    pub fn faces_through(&self, vertex: usize, p: usize) -> Vec<Vec<usize>> {
        let others: Vec<usize> = (0..self.weights.len()).filter(|&i| i != vertex).collect();
        let mut out = Vec::new();
        let mut pick = Vec::new();
        choose(&others, p, 0, &mut pick, &mut out);
        for f in &mut out {
            f.push(vertex);
            f.sort_unstable();
        }
        out
    }
}

fn choose(
    items: &[usize],
    k: usize,
    from: usize,
    pick: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if pick.len() == k {
        out.push(pick.clone());
        return;
    }
    for i in from..items.len() {
        pick.push(items[i]);
        choose(items, k, i + 1, pick, out);
        pick.pop();
    }
}

impl fmt::Display for WpsSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ws: Vec<String> = self.weights.iter().map(u32::to_string).collect();
        write!(f, "P({})", ws.join(","))
    }
}

/// `P(1,1,1,5)` or `1,1,1,5`.
impl FromStr for WpsSpace {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let inner = s
            .trim()
            .trim_start_matches('P')
            .trim_start_matches('(')
            .trim_end_matches(')');
        Self::new(parse_u32_list(inner)?)
    }
}

/// `d^p / prod_{i in face} w_i` with `p = |face| - 1`.
pub fn wps_degree(space: &WpsSpace, d: u32, face: &[usize]) -> Result<Rat> {
    space.check_face(face)?;
    let p = face.len() as i32 - 1;
    let den: i64 = face.iter().map(|&i| space.weights[i] as i64).product();
    Ok(int(d as i64).pow(p) / int(den))
}

/// Degree of `K`, i.e. `-sum w_i`.
pub fn canonical_degree(space: &WpsSpace) -> i64 {
    -space.weights.iter().map(|&w| w as i64).sum::<i64>()
}

/// `K + O(d) = O(d - sum w)` is Cartier at the vertex exactly when the
/// vertex weight divides `d - sum w`.
pub fn adjoint_cartier_degrees(space: &WpsSpace, vertex: usize, d: u32) -> Result<bool> {
    let w = *space
        .weights
        .get(vertex)
        .ok_or_else(|| Error::Validation(format!("vertex {vertex} out of range")))?
        as i64;
    Ok((d as i64 + canonical_degree(space)).rem_euclid(w) == 0)
}

/// Minimum degree over `p`-faces through `vertex`, with the face attaining it.
pub fn min_degree_through(
    space: &WpsSpace,
    d: u32,
    vertex: usize,
    p: usize,
) -> Result<(Rat, Vec<usize>)> {
    space
        .faces_through(vertex, p)
        .into_iter()
        .map(|f| wps_degree(space, d, &f).map(|v| (v, f)))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .min_by(|a, b| a.0.cmp(&b.0))
        .ok_or_else(|| Error::Validation(format!("no {p}-face through vertex {vertex}")))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExampleId {
    E42,
    E43,
    E52,
    E53,
}

impl FromStr for ExampleId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "4.2" => Ok(Self::E42),
            "4.3" => Ok(Self::E43),
            "5.2" => Ok(Self::E52),
            "5.3" => Ok(Self::E53),
            _ => Err(Error::Parse(format!("unknown example '{s}'"))),
        }
    }
}

impl fmt::Display for ExampleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::E42 => "4.2",
            Self::E43 => "4.3",
            Self::E52 => "5.2",
            Self::E53 => "5.3",
        })
    }
}

/// A sharpness example: the space, the line bundle, the intersection numbers
/// at the vertex, the verdict, and what the verdict is expected to be.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SharpnessExample {
    pub id: ExampleId,
    pub space: WpsSpace,
    pub degree: u32,
    pub vertex: usize,
    pub top: Rat,
    /// `L^2 . S` for threefolds; absent on surfaces.
    pub l2s: Option<Rat>,
    pub lc: Rat,
    pub lc_face: Vec<usize>,
    pub adjoint_cartier: bool,
    pub verdict: FreenessVerdict,
    /// Conditions expected to fail.
    pub expected_failures: Vec<String>,
    /// Conditions expected to hold.
    pub expected_passes: Vec<String>,
    pub notes: Vec<String>,
}

impl SharpnessExample {
    pub fn matches_expectation(&self) -> bool {
        let failed = self.verdict.failed();
        let by_name = |n: &str| self.verdict.conditions.iter().find(|c| c.name == n);
        self.expected_failures
            .iter()
            .all(|n| failed.contains(&n.as_str()))
            && self
                .expected_passes
                .iter()
                .all(|n| by_name(n).is_some_and(|c| c.pass))
    }
}

fn strings(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

/// Builds one of the four sharpness examples for index `r` (and `a`).
pub fn paper_example(id: ExampleId, r: u32, a: Option<u32>) -> Result<SharpnessExample> {
    if r == 0 {
        return Err(Error::Validation("r must be positive".into()));
    }
    let need_a = || a.ok_or_else(|| Error::Validation(format!("example {id} needs a")));
    let mut notes = Vec::new();
    let (space, degree, failures, passes) = match id {
        ExampleId::E42 => (
            WpsSpace::new(vec![1, 1, 1, r])?,
            3,
            &["sigma3"][..],
            &["sigma1", "sigma2"][..],
        ),
        ExampleId::E43 => {
            let a = need_a()?;
            if a == 0 || r <= 2 * a {
                return Err(Error::Validation(format!(
                    "example 4.3 needs 1 <= a and r > 2a (r={r}, a={a})"
                )));
            }
            (
                WpsSpace::new(vec![1, a, r - a, r])?,
                r + 1,
                &["sigma1"][..],
                &["sigma3"][..],
            )
        }
        ExampleId::E52 => (
            WpsSpace::new(vec![1, 1, r])?,
            2,
            &["sigma2"][..],
            &["sigma1"][..],
        ),
        ExampleId::E53 => {
            let a = need_a()?;
            if a <= 1 || a >= r {
                return Err(Error::Validation(format!(
                    "example 5.3 needs 1 < a < r (r={r}, a={a})"
                )));
            }
            (
                WpsSpace::new(vec![1, a, r])?,
                a + 1,
                &["sigma1"][..],
                &["sigma2"][..],
            )
        }
    };
    if let Some(w) = space.warning() {
        notes.push(w);
    }
    let vertex = space.weights.len() - 1;
    let full: Vec<usize> = (0..space.weights.len()).collect();
    let top = wps_degree(&space, degree, &full)?;
    let (lc, lc_face) = min_degree_through(&space, degree, vertex, 1)?;
    let adjoint_cartier = adjoint_cartier_degrees(&space, vertex, degree)?;

    let (l2s, verdict) = if space.weights.len() == 4 {
        let (l2s, _) = min_degree_through(&space, degree, vertex, 2)?;
        let a = space.weights[1];
        let point = PointKind::Quotient {
            r,
            a,
            b: space.weights[2] % r,
        };
        let inp = FreenessInput::new(point, top.clone(), l2s.clone(), lc.clone())?;
        let verdict = match check_thm41(&inp) {
            Ok(v) => v,
            Err(_) => {
                notes.push(format!(
                    "gcd(r, a) > 1 at a={a}: thresholds evaluated without the class check"
                ));
                unchecked_verdict(quotient_thresholds(&inp))
            }
        };
        (Some(l2s), verdict)
    } else {
        (None, check_thm51(r, &top, &lc)?)
    };
    if id == ExampleId::E53 {
        let a = space.weights[1] as i64;
        notes.push(format!(
            "L.C on the curve P(a,r) is (a+1)/(ar) = {} by the degree formula; the printed value is 2/(ar) = {}; both are below 2/r",
            fmt_rat(&lc),
            fmt_rat(&rat(2, a * r as i64))
        ));
    }
    Ok(SharpnessExample {
        id,
        space,
        degree,
        vertex,
        top,
        l2s,
        lc,
        lc_face,
        adjoint_cartier,
        verdict,
        expected_failures: strings(failures),
        expected_passes: strings(passes),
        notes,
    })
}

fn unchecked_verdict(conditions: Vec<Condition>) -> FreenessVerdict {
    FreenessVerdict {
        checker: "thresholds 3/r, 9/r, 27/r".into(),
        pass: conditions.iter().all(|c| c.pass),
        conditions,
        notes: Vec::new(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn space(w: &[u32]) -> WpsSpace {
        WpsSpace::new(w.to_vec()).unwrap()
    }

    #[test]
    fn degree_examples() {
        for r in 1..=10u32 {
            let ri = r as i64;
            assert_eq!(
                wps_degree(&space(&[1, 1, 1, r]), 3, &[0, 1, 2, 3]).unwrap(),
                rat(27, ri)
            );
            assert_eq!(
                wps_degree(&space(&[1, 1, r]), 2, &[0, 1, 2]).unwrap(),
                rat(4, ri)
            );
            for a in 1..r {
                let got = wps_degree(&space(&[1, a, r - a, r]), r + 1, &[0, 1, 2, 3]).unwrap();
                let ai = a as i64;
                assert_eq!(got, rat((ri + 1).pow(3), ai * (ri - ai) * ri));
            }
        }
        assert!(wps_degree(&space(&[1, 2]), 1, &[]).is_err());
        assert!(wps_degree(&space(&[1, 2]), 1, &[2]).is_err());
    }

    #[test]
    fn canonical_examples() {
        assert_eq!(canonical_degree(&space(&[1, 1, 1, 7])), -10);
        assert_eq!(canonical_degree(&space(&[1, 2, 5, 7])), -15);
        assert_eq!(canonical_degree(&space(&[1, 1, 4])), -6);
    }

    #[test]
    fn cartier_examples() {
        for r in 1..=10 {
            assert!(adjoint_cartier_degrees(&space(&[1, 1, 1, r]), 3, 3).unwrap());
            for a in 1..r {
                assert!(adjoint_cartier_degrees(&space(&[1, a, r - a, r]), 3, r + 1).unwrap());
            }
        }
        for r in 2..=10 {
            assert!(!adjoint_cartier_degrees(&space(&[1, 1, r]), 2, 1).unwrap());
        }
    }

    #[test]
    fn faces_through_vertex() {
        let s = space(&[1, 1, 1, 5]);
        assert_eq!(
            s.faces_through(3, 1),
            vec![vec![0, 3], vec![1, 3], vec![2, 3]]
        );
        assert_eq!(s.faces_through(3, 3), vec![vec![0, 1, 2, 3]]);
    }

    #[test]
    fn example_42() {
        let ex = paper_example(ExampleId::E42, 5, None).unwrap();
        assert_eq!(
            (ex.top.clone(), ex.l2s.clone(), ex.lc.clone()),
            (rat(27, 5), Some(rat(9, 5)), rat(3, 5))
        );
        assert_eq!(ex.verdict.summary(), "fail: sigma3 boundary");
        assert!(ex.matches_expectation());
    }

    #[test]
    fn example_43() {
        let ex = paper_example(ExampleId::E43, 5, Some(2)).unwrap();
        assert_eq!(ex.top, rat(36, 5));
        assert_eq!(ex.lc, rat(2, 5));
        assert_eq!(ex.lc_face, vec![2, 3]);
        assert!(ex.matches_expectation());
        assert!(paper_example(ExampleId::E43, 4, Some(2)).is_err());
    }

    #[test]
    fn example_52_and_53() {
        let ex = paper_example(ExampleId::E52, 7, None).unwrap();
        assert_eq!((ex.top.clone(), ex.lc.clone()), (rat(4, 7), rat(2, 7)));
        assert_eq!(ex.verdict.summary(), "fail: sigma2 boundary");
        let ex = paper_example(ExampleId::E53, 4, Some(3)).unwrap();
        assert_eq!(ex.top, rat(4, 3));
        assert_eq!(ex.lc, rat(1, 3));
        assert!(ex.matches_expectation());
        assert!(paper_example(ExampleId::E53, 4, Some(1)).is_err());
    }

    #[test]
    fn gcd_warning() {
        assert!(space(&[2, 4, 6]).warning().is_some());
        assert!(space(&[1, 2, 3]).warning().is_none());
    }
}
