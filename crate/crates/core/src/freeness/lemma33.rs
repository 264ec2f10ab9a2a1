//! The auxiliary inequality used to raise the weighted order of a divisor,
//! its `lambda` bound, and the surface-step inequality with `d = 2`.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::enclosure::Enclosure;
use crate::error::{Error, Result};
use crate::rational::{int, Rat};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuxParams {
    pub d: u32,
    pub e: Rat,
    pub k: Rat,
    pub k_prime: Rat,
    pub lambda: Rat,
    pub n: u32,
    pub r: u32,
    /// Divisor scaling parameters; reported, never used in the value.
    pub t: Option<Rat>,
    pub t0: Option<Rat>,
}

impl AuxParams {
    pub fn validate(&self) -> Result<()> {
        let zero = Rat::zero();
        let dom = |msg: &str| Err(Error::Domain(msg.into()));
        if self.d == 0 || self.n == 0 || self.r == 0 {
            return dom("d, n and r must be positive");
        }
        if self.e <= zero || self.e > Rat::one() {
            return dom("e must lie in (0, 1]");
        }
        if self.de() > Rat::one() {
            return dom("d e must be at most 1");
        }
        if self.k <= zero || self.k_prime <= self.k {
            return dom("need k' > k > 0");
        }
        if self.lambda < zero || self.lambda >= Rat::one() {
            return dom("lambda must lie in [0, 1)");
        }
        if self.lambda > Rat::one() - self.de() {
            return dom("lambda exceeds 1 - d e");
        }
        Ok(())
    }

    fn de(&self) -> Rat {
        int(self.d as i64) * &self.e
    }
}

/// Left-hand side of the inequality, exact.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lemma33Value {
    /// With exponent `n - 1` on `(1 - de - lambda) / (1 - lambda)`.
    pub value: Rat,
    /// With exponent `2`, reported when `n != 3`; `None` if that limit diverges.
    pub exponent_two: Option<Rat>,
    pub limit_branch: bool,
}

fn binomial(n: u32, j: u32) -> BigInt {
    (0..j).fold(BigInt::one(), |acc, i| {
        acc * BigInt::from(n - i) / BigInt::from(i + 1)
    })
}

/// `(lambda K)^n + (delta / (1-lambda))^m [ (K' + q/delta)^n - (lambda K + q/delta)^n ]`
/// with `K = k/r`, `q = lambda de K`, `delta = 1 - de - lambda`.
fn lhs_with_exponent(p: &AuxParams, m: u32) -> Option<Rat> {
    let r = int(p.r as i64);
    let (kk, kp) = (&p.k / &r, &p.k_prime / &r);
    let lam = &p.lambda;
    let one = Rat::one();
    let delta = &one - p.de() - lam;
    let q = lam * p.de() * &kk;
    let lk = lam * &kk;
    let head = lk.pow(p.n as i32);
    let scale = (&one - lam).pow(m as i32);
    if !delta.is_zero() {
        let shift = &q / &delta;
        let bracket = (&kp + &shift).pow(p.n as i32) - (&lk + &shift).pow(p.n as i32);
        return Some(head + delta.pow(m as i32) / scale * bracket);
    }
    // delta^m sum_j C(n,j) (q/delta)^(n-j) (K'^j - (lambda K)^j)
    //   = sum_j C(n,j) q^(n-j) (K'^j - (lambda K)^j) delta^(m+j-n)
    let mut tail = Rat::zero();
    for j in 1..=p.n {
        let coeff = Rat::from_integer(binomial(p.n, j))
            * q.pow((p.n - j) as i32)
            * (kp.pow(j as i32) - lk.pow(j as i32));
        let exponent = m as i64 + j as i64 - p.n as i64;
        if coeff.is_zero() || exponent > 0 {
            continue;
        }
        if exponent < 0 {
            return None;
        }
        tail += coeff;
    }
    Some(head + tail / scale)
}

/// At `lambda = 1 - de` the one-sided limit is returned.
pub fn lemma33_lhs(p: &AuxParams) -> Result<Lemma33Value> {
    p.validate()?;
    let limit_branch = p.lambda == Rat::one() - p.de();
    let value =
        lhs_with_exponent(p, p.n - 1).ok_or_else(|| Error::Domain("limit diverges".into()))?;
    let exponent_two = if p.n != 3 {
        lhs_with_exponent(p, 2)
    } else {
        None
    };
    Ok(Lemma33Value {
        value,
        exponent_two,
        limit_branch,
    })
}

/// `L^n / r^(n-1)`, the right-hand side.
pub fn lemma33_rhs(ln: &Rat, r: u32, n: u32) -> Rat {
    ln / int(r as i64).pow(n as i32 - 1)
}

/// `max{1 - de, (d e n)^(-1/(n-1))}` as an enclosure.
pub fn lemma33_lambda_bound(d: u32, e: &Rat, n: u32, digits: u32) -> Result<Enclosure> {
    if d == 0 || !e.is_positive() {
        return Err(Error::Domain("need d >= 1 and e > 0".into()));
    }
    if n < 2 {
        return Err(Error::Domain(
            "the root (d e n)^(-1/(n-1)) needs n >= 2".into(),
        ));
    }
    let de = int(d as i64) * e;
    let root = Enclosure::nth_root_of(&(de.clone() * int(n as i64)).recip(), n - 1, digits)?;
    Ok(Enclosure::exact(Rat::one() - de).max(&root))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step22Report {
    pub e: Rat,
    pub grid: Rat,
    /// Upper end of the admissible `lambda` range.
    pub lambda_max: Enclosure,
    pub samples: usize,
    pub max_lhs: Enclosure,
    pub argmax: Rat,
    pub feasible: bool,
    pub warnings: Vec<String>,
}

/// Left-hand side of the surface-step inequality at one `lambda`, with
/// `A = 2 / (3 - sqrt 2)` given as an enclosure.
pub fn step22_lhs(e: &Rat, lambda: &Rat, a: &Enclosure) -> Result<Enclosure> {
    let one = Rat::one();
    let two = int(2);
    if lambda.is_negative() || lambda >= &one {
        return Err(Error::Domain("lambda must lie in [0, 1)".into()));
    }
    let delta = &one - &two * e - lambda;
    if delta.is_negative() {
        return Err(Error::Domain("lambda exceeds 1 - 2e".into()));
    }
    let cube = Enclosure::exact(lambda.pow(3));
    let q = &two * lambda * e;
    let den = (&one - lambda).pow(2);
    let rest = if delta.is_zero() {
        // 3 q^2 (A - lambda) / (1 - lambda)^2
        a.sub(&Enclosure::exact(lambda.clone()))
            .scale_by(&(int(3) * q.pow(2) / den))
    } else {
        let shift = &q / &delta;
        let big = a.add(&Enclosure::exact(shift.clone())).pow(3);
        let small = Enclosure::exact((lambda + &shift).pow(3));
        big.sub(&small).scale_by(&(delta.pow(2) / den))
    };
    Ok(cube.add(&rest))
}

/// Sweeps `lambda` over `[0, min(1 - 2e, 1/sqrt(6e))]` in steps of `grid`,
/// always including the right end, and bounds the maximum of the left-hand
/// side. Feasible when the whole maximum enclosure lies below `1`.
pub fn step22_feasibility(e: &Rat, grid: &Rat, digits: u32) -> Result<Step22Report> {
    let one = Rat::one();
    let two = int(2);
    if !e.is_positive() {
        return Err(Error::Domain("e must be positive".into()));
    }
    if !grid.is_positive() {
        return Err(Error::Domain("grid step must be positive".into()));
    }
    let mut warnings = Vec::new();
    if e < &Rat::new(1.into(), 3.into()) || e > &Rat::new(1.into(), 2.into()) {
        warnings.push("e outside [1/3, 1/2]".to_string());
    }
    let linear = &one - &two * e;
    if linear.is_negative() {
        return Err(Error::Domain("1 - 2e < 0: empty lambda range".into()));
    }
    let root = Enclosure::nth_root_of(&(int(6) * e).recip(), 2, digits)?;
    let (end, lambda_max) = if &linear <= root.lo() {
        (linear.clone(), Enclosure::exact(linear))
    } else {
        warnings.push("range ends at the lower end of the 1/sqrt(6e) enclosure".into());
        (root.lo().clone(), root.min(&Enclosure::exact(linear)))
    };
    let sqrt2 = Enclosure::sqrt_of(&two, digits)?;
    let a = Enclosure::exact(two.clone())
        .div(&Enclosure::exact(int(3)).sub(&sqrt2))?
        .rounded(digits);

    let mut points = Vec::new();
    let mut k = 0i64;
    loop {
        let lam = grid * int(k);
        if lam >= end {
            break;
        }
        points.push(lam);
        k += 1;
    }
    points.push(end);

    let mut best: Option<(Enclosure, Rat)> = None;
    for lam in &points {
        let v = step22_lhs(e, lam, &a)?.rounded(digits);
        best = Some(match best {
            Some((b, arg)) if b.hi() >= v.hi() => (b.max(&v), arg),
            Some((b, _)) => (b.max(&v), lam.clone()),
            None => (v, lam.clone()),
        });
    }
    let (max_lhs, argmax) = best.ok_or_else(|| Error::Domain("no sample points".into()))?;
    let feasible = max_lhs.certainly_below(&one);
    Ok(Step22Report {
        e: e.clone(),
        grid: grid.clone(),
        lambda_max,
        samples: points.len(),
        max_lhs,
        argmax,
        feasible,
        warnings,
    })
}
