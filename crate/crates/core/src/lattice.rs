//! Counting invariant monomials below a weighted-order cutoff.
//!
//! A [`CongruenceCone`] is the orthant `Z_{>=0}^n` restricted to one congruence
//! `sum g_i b_i = class (mod r)` and graded by positive rational weights. The
//! counting function `N(h) = #{b : sum w_i b_i < h}` is a quasi-polynomial in
//! the integer cutoff `h`; its normalized leading coefficient is the weighted
//! multiplicity.
//!
//! Two exact counting routes are provided:
//!
//! - [`count_below`] / [`graded_slice`]: recursive bounded enumeration over
//!   exponents, cheap for small cutoffs and used as the reference route.
//! - [`WeightTally`]: a table of counts per scaled weight level and residue
//!   class, built once up to a maximal cutoff and then queried in O(1). This
//!   is what extraction uses, since the windows it needs reach cutoffs where
//!   point-by-point enumeration is far too slow.
//!
//! [`wmult_analytic`] is an independent oracle: class density times the
//! normalized volume of `{x >= 0, sum w_i x_i < 1}`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::rational::{int, lcm_denominators, to_u64, Rat};

pub type Count = u128;

/// Upper bound on the number of cells a [`WeightTally`] may allocate.
const MAX_TALLY_CELLS: usize = 1 << 27;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CongruenceCone {
    r: u32,
    residues: Vec<u32>,
    weights: Vec<Rat>,
}

impl CongruenceCone {
    pub fn new(r: u32, residues: Vec<u32>, weights: Vec<Rat>) -> Result<Self> {
        if r == 0 {
            return Err(Error::InvalidCone("group order must be at least 1".into()));
        }
        if residues.len() != weights.len() {
            return Err(Error::InvalidCone(format!(
                "{} residues but {} weights",
                residues.len(),
                weights.len()
            )));
        }
        if let Some(w) = weights.iter().find(|w| !w.is_positive()) {
            return Err(Error::InvalidCone(format!("nonpositive weight {w}")));
        }
        let residues = residues.into_iter().map(|g| g % r).collect();
        Ok(Self {
            r,
            residues,
            weights,
        })
    }

    pub fn dim(&self) -> usize {
        self.residues.len()
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn residues(&self) -> &[u32] {
        &self.residues
    }

    pub fn weights(&self) -> &[Rat] {
        &self.weights
    }

    /// True when some residue is invertible mod r.
    pub fn has_unit_residue(&self) -> bool {
        self.residues
            .iter()
            .any(|&g| (g as u64).gcd(&(self.r as u64)) == 1)
    }

    /// Smallest step `P` such that `P` times every vertex `e_i / w_i` of the
    /// unit simplex lies in the invariant lattice. The counting function is
    /// polynomial along every progression `h0 + kP`.
    pub fn default_period(&self) -> Result<u64> {
        let r = self.r as u64;
        let mut period = 1u64;
        for (g, w) in self.residues.iter().zip(&self.weights) {
            let p = to_u64(w.numer())?;
            let q = to_u64(w.denom())?;
            let gq = ((*g as u64) * (q % r)) % r;
            let k = p.checked_mul(r / gq.gcd(&r)).ok_or(Error::Overflow)?;
            period = period.lcm(&k);
        }
        Ok(period)
    }

    fn scaled(&self, extra: &[&Rat]) -> Result<Scaled> {
        let scale = lcm_denominators(self.weights.iter().chain(extra.iter().copied()));
        let weights = self
            .weights
            .iter()
            .map(|w| to_u64(&(w * Rat::from_integer(scale.clone())).to_integer()))
            .collect::<Result<Vec<_>>>()?;
        Ok(Scaled {
            scale,
            weights,
            residues: self.residues.iter().map(|&g| g as u64).collect(),
            r: self.r as u64,
        })
    }
}

struct Scaled {
    scale: BigInt,
    weights: Vec<u64>,
    residues: Vec<u64>,
    r: u64,
}

impl Scaled {
    /// Largest admissible scaled total for `sum w b < h - offset`, or `None`
    /// when nothing qualifies.
    fn budget_below(&self, h: &Rat, offset: &Rat) -> Result<Option<u64>> {
        let bound = (h - offset) * Rat::from_integer(self.scale.clone());
        let top = bound.ceil().to_integer() - BigInt::one();
        if top.is_negative() {
            return Ok(None);
        }
        Ok(Some(to_u64(&top)?))
    }

    /// Exact scaled total for `sum w b = h - offset`, if integral.
    fn budget_exact(&self, h: &Rat, offset: &Rat) -> Result<Option<u64>> {
        let level = (h - offset) * Rat::from_integer(self.scale.clone());
        if !level.is_integer() || level.is_negative() {
            return Ok(None);
        }
        Ok(Some(to_u64(&level.to_integer())?))
    }
}

#[derive(Clone, Copy)]
enum Budget {
    AtMost(u64),
    Exactly(u64),
}

fn modinv(a: i64, m: i64) -> i64 {
    let (mut old_r, mut r) = (a.rem_euclid(m), m);
    let (mut old_s, mut s) = (1i64, 0i64);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    old_s.rem_euclid(m)
}

/// `#{ b in [0, top] : g b = c (mod r) }`.
fn count_progression(g: u64, c: u64, r: u64, top: u64) -> Count {
    let d = g.gcd(&r);
    if !c.is_multiple_of(d) {
        return 0;
    }
    let step = r / d;
    let first = if step == 1 {
        0
    } else {
        (((c / d) % step) as i64 * modinv(((g / d) % step) as i64, step as i64))
            .rem_euclid(step as i64) as u64
    };
    if first > top {
        0
    } else {
        ((top - first) / step + 1) as Count
    }
}

fn enumerate(s: &Scaled, idx: usize, budget: Budget, acc: u64, class: u64) -> Count {
    let n = s.weights.len();
    let need = (class + s.r - acc % s.r) % s.r;
    if idx == n {
        let ok = match budget {
            Budget::AtMost(_) => true,
            Budget::Exactly(b) => b == 0,
        };
        return Count::from(ok && need == 0);
    }
    let (w, g) = (s.weights[idx], s.residues[idx]);
    if idx + 1 == n {
        return match budget {
            Budget::AtMost(b) => count_progression(g, need, s.r, b / w),
            Budget::Exactly(b) => Count::from(b % w == 0 && ((b / w) % s.r * g) % s.r == need),
        };
    }
    let rest = match budget {
        Budget::AtMost(b) | Budget::Exactly(b) => b,
    };
    (0..=rest / w)
        .map(|k| {
            let left = rest - k * w;
            let next = match budget {
                Budget::AtMost(_) => Budget::AtMost(left),
                Budget::Exactly(_) => Budget::Exactly(left),
            };
            enumerate(s, idx + 1, next, (acc + (k % s.r) * g) % s.r, class)
        })
        .sum()
}

/// `#{ b >= 0 : sum g_i b_i = 0 (mod r), sum w_i b_i < h }` by direct enumeration.
pub fn count_below(cone: &CongruenceCone, h: &Rat) -> Result<Count> {
    count_below_class(cone, 0, &Rat::zero(), h)
}

/// Counts the coset `sum g_i b_i = class (mod r)` with `sum w_i b_i < h - offset`.
pub fn count_below_class(
    cone: &CongruenceCone,
    class: u32,
    offset: &Rat,
    h: &Rat,
) -> Result<Count> {
    let s = cone.scaled(&[offset])?;
    Ok(match s.budget_below(h, offset)? {
        None => 0,
        Some(top) => enumerate(&s, 0, Budget::AtMost(top), 0, (class % cone.r) as u64),
    })
}

/// Invariant exponent vectors of weighted degree exactly `h`.
pub fn graded_slice(cone: &CongruenceCone, h: &Rat) -> Result<Count> {
    graded_slice_class(cone, 0, &Rat::zero(), h)
}

pub fn graded_slice_class(
    cone: &CongruenceCone,
    class: u32,
    offset: &Rat,
    h: &Rat,
) -> Result<Count> {
    let s = cone.scaled(&[offset, h])?;
    Ok(match s.budget_exact(h, offset)? {
        None => 0,
        Some(level) => enumerate(&s, 0, Budget::Exactly(level), 0, (class % cone.r) as u64),
    })
}

/// Lists the exponent vectors counted by [`count_below_class`].
pub fn enumerate_below(
    cone: &CongruenceCone,
    class: u32,
    offset: &Rat,
    h: &Rat,
) -> Result<Vec<Vec<u32>>> {
    fn walk(
        s: &Scaled,
        idx: usize,
        left: u64,
        acc: u64,
        class: u64,
        cur: &mut Vec<u32>,
        out: &mut Vec<Vec<u32>>,
    ) {
        if idx == s.weights.len() {
            if acc % s.r == class {
                out.push(cur.clone());
            }
            return;
        }
        for k in 0..=left / s.weights[idx] {
            cur.push(k as u32);
            walk(
                s,
                idx + 1,
                left - k * s.weights[idx],
                (acc + (k % s.r) * s.residues[idx]) % s.r,
                class,
                cur,
                out,
            );
            cur.pop();
        }
    }
    let s = cone.scaled(&[offset])?;
    let mut out = Vec::new();
    if let Some(top) = s.budget_below(h, offset)? {
        walk(
            &s,
            0,
            top,
            0,
            (class % cone.r) as u64,
            &mut Vec::new(),
            &mut out,
        );
    }
    Ok(out)
}

/// Cutoff-indexed counts; monotone for any cone.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HilbertSample(pub BTreeMap<Rat, Count>);

impl HilbertSample {
    pub fn collect(cone: &CongruenceCone, cutoffs: impl IntoIterator<Item = Rat>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for h in cutoffs {
            let c = count_below(cone, &h)?;
            map.insert(h, c);
        }
        Ok(Self(map))
    }

    pub fn is_monotone(&self) -> bool {
        self.0
            .values()
            .zip(self.0.values().skip(1))
            .all(|(a, b)| a <= b)
    }
}

/// Counts per scaled weight level for one residue class, accumulated so that
/// any cutoff up to the build limit is answered by a lookup.
#[derive(Clone, Debug)]
pub struct WeightTally {
    scale: BigInt,
    offset: Rat,
    cumulative: Vec<Count>,
}

impl WeightTally {
    pub fn new(cone: &CongruenceCone, class: u32, offset: &Rat, max_cutoff: &Rat) -> Result<Self> {
        let s = cone.scaled(&[offset])?;
        let top = match s.budget_below(max_cutoff, offset)? {
            None => {
                return Ok(Self {
                    scale: s.scale,
                    offset: offset.clone(),
                    cumulative: Vec::new(),
                });
            }
            Some(top) => top as usize,
        };
        let r = s.r as usize;
        let cells = (top + 1)
            .checked_mul(r)
            .filter(|&c| c <= MAX_TALLY_CELLS)
            .ok_or_else(|| {
                Error::InvalidCone(format!(
                    "tally of {} levels x {r} classes is too large",
                    top + 1
                ))
            })?;
        let mut table = vec![0 as Count; cells];
        table[0] = 1;
        for (&w, &g) in s.weights.iter().zip(&s.residues) {
            let (w, g) = (w as usize, g as usize);
            for level in w..=top {
                for c in 0..r {
                    let from = table[(level - w) * r + (c + r - g) % r];
                    let slot = &mut table[level * r + c];
                    *slot = slot.checked_add(from).ok_or(Error::Overflow)?;
                }
            }
        }
        let class = (class % cone.r) as usize;
        let mut cumulative = Vec::with_capacity(top + 1);
        let mut running: Count = 0;
        for level in 0..=top {
            running = running
                .checked_add(table[level * r + class])
                .ok_or(Error::Overflow)?;
            cumulative.push(running);
        }
        Ok(Self {
            scale: s.scale,
            offset: offset.clone(),
            cumulative,
        })
    }

    pub fn count_below(&self, h: &Rat) -> Result<Count> {
        let bound = (h - &self.offset) * Rat::from_integer(self.scale.clone());
        let top = bound.ceil().to_integer() - BigInt::one();
        if top.is_negative() {
            return Ok(0);
        }
        let idx = top.to_usize().ok_or(Error::Overflow)?;
        self.cumulative
            .get(idx)
            .copied()
            .ok_or_else(|| Error::Domain(format!("cutoff {h} beyond the tally limit")))
    }
}

/// A family of monomials `prefix * prod_{i in free} x_i^{b_i}` in an ambient
/// ring, selected by the congruence on the free exponents shifted by the
/// prefix's own residue.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisFamily {
    pub label: String,
    /// Fixed exponents over all ambient variables (zero on free variables).
    pub prefix: Vec<u32>,
    pub free_vars: Vec<usize>,
    /// Residues and weights of the free variables.
    pub cone: CongruenceCone,
    pub residue_offset: u32,
    pub weight_offset: Rat,
}

impl BasisFamily {
    pub fn new(
        label: impl Into<String>,
        prefix: Vec<u32>,
        free_vars: Vec<usize>,
        cone: CongruenceCone,
        residue_offset: u32,
        weight_offset: Rat,
    ) -> Result<Self> {
        let label = label.into();
        if free_vars.len() != cone.dim() {
            return Err(Error::MalformedFamily(format!(
                "{label}: {} free variables but cone of dimension {}",
                free_vars.len(),
                cone.dim()
            )));
        }
        let mut seen = free_vars.clone();
        seen.sort_unstable();
        seen.dedup();
        if seen.len() != free_vars.len() {
            return Err(Error::MalformedFamily(format!(
                "{label}: repeated free variable"
            )));
        }
        if free_vars
            .iter()
            .any(|&i| i >= prefix.len() || prefix[i] != 0)
        {
            return Err(Error::MalformedFamily(format!(
                "{label}: free variables must index zero prefix slots"
            )));
        }
        if weight_offset.is_negative() {
            return Err(Error::MalformedFamily(format!(
                "{label}: negative weight offset"
            )));
        }
        let residue_offset = residue_offset % cone.r();
        Ok(Self {
            label,
            prefix,
            free_vars,
            cone,
            residue_offset,
            weight_offset,
        })
    }

    pub fn r(&self) -> u32 {
        self.cone.r()
    }

    pub fn dim(&self) -> usize {
        self.cone.dim()
    }

    /// Residue class the free exponents must hit.
    pub fn target_class(&self) -> u32 {
        (self.r() - self.residue_offset) % self.r()
    }

    pub fn count_below(&self, h: &Rat) -> Result<Count> {
        count_below_class(&self.cone, self.target_class(), &self.weight_offset, h)
    }

    pub fn graded_slice(&self, h: &Rat) -> Result<Count> {
        graded_slice_class(&self.cone, self.target_class(), &self.weight_offset, h)
    }

    pub fn tally(&self, max_cutoff: &Rat) -> Result<WeightTally> {
        WeightTally::new(
            &self.cone,
            self.target_class(),
            &self.weight_offset,
            max_cutoff,
        )
    }

    /// Ambient exponent vectors of the family's monomials below `h`.
    pub fn monomials_below(&self, h: &Rat) -> Result<Vec<Vec<u32>>> {
        let free = enumerate_below(&self.cone, self.target_class(), &self.weight_offset, h)?;
        Ok(free
            .into_iter()
            .map(|b| {
                let mut v = self.prefix.clone();
                for (&i, e) in self.free_vars.iter().zip(b) {
                    v[i] = e;
                }
                v
            })
            .collect())
    }

    /// Density of the target class times the normalized simplex volume.
    pub fn analytic_contribution(&self) -> Rat {
        class_density(&self.cone, self.target_class()) / weight_product(&self.cone)
    }
}

/// Inclusion-exclusion count: every family minus the overlap family.
pub fn count_families(
    families: &[BasisFamily],
    overlap: Option<&BasisFamily>,
    h: &Rat,
) -> Result<Count> {
    let total = families
        .iter()
        .map(|f| f.count_below(h))
        .sum::<Result<Count>>()?;
    match overlap {
        None => Ok(total),
        Some(o) => total.checked_sub(o.count_below(h)?).ok_or_else(|| {
            Error::MalformedFamily(format!("overlap {} exceeds the family counts", o.label))
        }),
    }
}

pub fn graded_slice_families(
    families: &[BasisFamily],
    overlap: Option<&BasisFamily>,
    h: &Rat,
) -> Result<Count> {
    let total = families
        .iter()
        .map(|f| f.graded_slice(h))
        .sum::<Result<Count>>()?;
    match overlap {
        None => Ok(total),
        Some(o) => total.checked_sub(o.graded_slice(h)?).ok_or_else(|| {
            Error::MalformedFamily(format!("overlap {} exceeds the family counts", o.label))
        }),
    }
}

/// Tallies for a set of families, answering the inclusion-exclusion count.
pub struct FamilyTally {
    families: Vec<WeightTally>,
    overlap: Option<WeightTally>,
}

impl FamilyTally {
    pub fn new(
        families: &[BasisFamily],
        overlap: Option<&BasisFamily>,
        max_cutoff: &Rat,
    ) -> Result<Self> {
        Ok(Self {
            families: families
                .iter()
                .map(|f| f.tally(max_cutoff))
                .collect::<Result<_>>()?,
            overlap: overlap.map(|o| o.tally(max_cutoff)).transpose()?,
        })
    }

    pub fn count_below(&self, h: &Rat) -> Result<Count> {
        let total = self
            .families
            .iter()
            .map(|t| t.count_below(h))
            .sum::<Result<Count>>()?;
        match &self.overlap {
            None => Ok(total),
            Some(o) => total.checked_sub(o.count_below(h)?).ok_or(Error::Overflow),
        }
    }
}

/// Period that works for every family at once.
pub fn families_period(families: &[BasisFamily], overlap: Option<&BasisFamily>) -> Result<u64> {
    families
        .iter()
        .chain(overlap)
        .try_fold(1u64, |acc, f| Ok(acc.lcm(&f.cone.default_period()?)))
}

/// Smallest integer at least `10 P`.
pub fn default_start(period: u64) -> i64 {
    10 * period as i64
}

/// `Delta_P^n N(h0) / P^n`, where `N` is a cutoff-count function and
/// `Delta_P` the forward difference with step `P`.
///
/// The difference is recomputed at `h0 + P`; unequal windows mean `P` is not
/// a multiple of the quasi-period (or `h0` is too small) and are reported as
/// [`Error::Unstable`].
pub fn leading_coefficient<F>(mut counter: F, degree: u32, period: u64, start: i64) -> Result<Rat>
where
    F: FnMut(&Rat) -> Result<Count>,
{
    if period == 0 {
        return Err(Error::Domain("period must be positive".into()));
    }
    let n = degree as usize;
    let values = (0..=n + 1)
        .map(|k| counter(&int(start + (k as i64) * period as i64)).map(BigInt::from))
        .collect::<Result<Vec<_>>>()?;
    let first = nth_difference(&values[..=n]);
    let second = nth_difference(&values[1..]);
    if first != second {
        return Err(Error::Unstable {
            first: first.to_string(),
            second: second.to_string(),
        });
    }
    let scale = BigInt::from(period).pow(degree);
    Ok(Rat::new(first, scale))
}

fn nth_difference(values: &[BigInt]) -> BigInt {
    let mut row = values.to_vec();
    while row.len() > 1 {
        row = row.windows(2).map(|w| &w[1] - &w[0]).collect();
    }
    row.pop().unwrap_or_default()
}

/// Extraction with the default period and window start.
pub fn extract_cone(cone: &CongruenceCone) -> Result<Rat> {
    let period = cone.default_period()?;
    let start = default_start(period);
    let n = cone.dim() as u32;
    let tally = WeightTally::new(
        cone,
        0,
        &Rat::zero(),
        &int(start + (n as i64 + 1) * period as i64),
    )?;
    leading_coefficient(|h| tally.count_below(h), n, period, start)
}

/// `#{ c in (Z/r)^n : sum g_i c_i = class (mod r) } / r^n`, by enumeration.
pub fn class_density(cone: &CongruenceCone, class: u32) -> Rat {
    let r = cone.r() as u64;
    let class = (class as u64) % r;
    let mut hits = vec![0u64; r as usize];
    hits[0] = 1;
    for &g in cone.residues() {
        let mut next = vec![0u64; r as usize];
        for (c, &cnt) in hits.iter().enumerate() {
            if cnt == 0 {
                continue;
            }
            for k in 0..r {
                next[((c as u64 + k * g as u64) % r) as usize] += cnt;
            }
        }
        hits = next;
    }
    let total = BigInt::from(r).pow(cone.dim() as u32);
    Rat::new(BigInt::from(hits[class as usize]), total)
}

fn weight_product(cone: &CongruenceCone) -> Rat {
    cone.weights().iter().fold(Rat::one(), |acc, w| acc * w)
}

/// `G / (r^n prod w_i)` with `G` the number of invariant residue vectors.
pub fn wmult_analytic(cone: &CongruenceCone) -> Rat {
    class_density(cone, 0) / weight_product(cone)
}
