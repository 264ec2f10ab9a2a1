//! The self-check suite: closed forms against extraction and the analytic
//! oracle over whole parameter ranges, the sharpness examples, threshold
//! boundaries, the surface-step sweep and the divisor-order identity.
//!
//! Each check returns a [`CheckOutcome`]; discrepancies that are expected
//! (lower-order terms, overlap handling) end up in `notes`, never in
//! `failures`.

use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::catalog::{
    kawamata_bound_check, smooth_graded_enumerated, smooth_graded_floor_sum, verify_quotient,
    verify_subvariety, verify_terminal, BlowupSpec, CdThreeForm, CdTwoForm, CyclicQuotient,
    MoriCase, SubvarietyKind, SubvarietyModel, TerminalModel, WmultReport,
};
use crate::divisor::{kawamata_wmult_divisor, weighted_order, MonomialSupport};
use crate::error::Result;
use crate::freeness::{
    check_cor45, check_thm41, check_thm44, check_thm51, lemma33_lambda_bound, step22_feasibility,
    FreenessInput, FreenessVerdict, PointKind,
};
use crate::lattice::extract_cone;
use crate::lattice::CongruenceCone;
use crate::rational::{fmt_decimal, fmt_rat, int, rat, Rat};
use crate::wps::{paper_example, ExampleId};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyConfig {
    pub max_r: u32,
    pub seed: u64,
    pub digits: u32,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            max_r: 10,
            seed: 20_240_601,
            digits: 30,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CheckOutcome {
    pub id: u32,
    pub name: String,
    pub cases: usize,
    pub failures: Vec<String>,
    pub notes: Vec<String>,
}

impl CheckOutcome {
    fn new(id: u32, name: &str) -> Self {
        Self {
            id,
            name: name.into(),
            ..Self::default()
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn case(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn record<T>(&mut self, label: &str, r: Result<T>) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.cases += 1;
                self.failures.push(format!("{label}: {e}"));
                None
            }
        }
    }

    fn note(&mut self, n: String) {
        if !self.notes.contains(&n) {
            self.notes.push(n);
        }
    }

    pub fn summary(&self) -> String {
        let status = if self.passed() { "pass" } else { "FAIL" };
        format!(
            "[{status}] {}. {} ({} cases, {} failures)",
            self.id,
            self.name,
            self.cases,
            self.failures.len()
        )
    }
}

fn describe(rep: &WmultReport) -> String {
    let closed = rep.closed.as_ref().map_or("-".into(), fmt_rat);
    format!(
        "{}: closed {closed}, extracted {}, analytic {}",
        rep.model,
        fmt_rat(&rep.extracted),
        fmt_rat(&rep.analytic)
    )
}

fn three_way(out: &mut CheckOutcome, rep: Result<WmultReport>, label: &str, expected: &Rat) {
    if let Some(rep) = out.record(label, rep) {
        let ok = rep.agrees() && rep.closed.is_some() && &rep.extracted == expected;
        out.case(ok, || describe(&rep));
        for n in &rep.notes {
            out.note(format!("{}: {n}", rep.model));
        }
    }
}

/// Uniform blow-ups of `C^3 / Z_r(1, a, b)` and `C^2 / Z_r(1, a)`.
pub fn check_quotients(cfg: &VerifyConfig) -> CheckOutcome {
    let mut out = CheckOutcome::new(1, "quotient multiplicities r^(n-1)/l^n");
    for r in 1..=cfg.max_r {
        let units: Vec<u32> = (0..r).filter(|&a| a.gcd(&r) == 1).collect();
        let mut tuples: Vec<Vec<u32>> = units.iter().map(|&a| vec![a]).collect();
        for &a in &units {
            tuples.extend(units.iter().map(|&b| vec![a, b]));
        }
        for rest in tuples {
            let label = format!("r={r} a={rest:?}");
            let Some(q) = out.record(&label, CyclicQuotient::with_unit_first(r, &rest)) else {
                continue;
            };
            let n = q.dim() as u32;
            let expected = Rat::new(r.pow(n - 1).into(), q.l().pow(n).into());
            three_way(
                &mut out,
                verify_quotient(&q, &BlowupSpec::uniform(&q)),
                &label,
                &expected,
            );
        }
    }
    out
}

fn terminal_models(max_r: u32) -> Vec<TerminalModel> {
    let mut models = Vec::new();
    for r in 2..=max_r.min(7) {
        for a in (1..r).filter(|a| a.gcd(&r) == 1) {
            models.extend(TerminalModel::ca(r, a));
        }
    }
    let cases = [
        (MoriCase::CAx4, 4),
        (MoriCase::CAx2, 2),
        (MoriCase::CD2(CdTwoForm::Cubic), 2),
        (MoriCase::CD2(CdTwoForm::Xyz { n: 4 }), 2),
        (MoriCase::CD2(CdTwoForm::Xyz { n: 5 }), 2),
        (MoriCase::CD2(CdTwoForm::Y2z { n: 3 }), 2),
        (MoriCase::CD3(CdThreeForm::Fermat), 3),
        (MoriCase::CD3(CdThreeForm::Yz2), 3),
        (MoriCase::CD3(CdThreeForm::Y3), 3),
        (MoriCase::CE2, 2),
    ];
    models.extend(
        cases
            .into_iter()
            .filter_map(|(c, r)| TerminalModel::new(c, r).ok()),
    );
    models
}

/// Every terminal case gives `2/r`, with and without the overlap removed.
pub fn check_terminals(cfg: &VerifyConfig) -> CheckOutcome {
    let mut out = CheckOutcome::new(2, "terminal multiplicities 2/r");
    for m in terminal_models(cfg.max_r) {
        three_way(
            &mut out,
            verify_terminal(&m),
            &m.to_string(),
            &rat(2, m.r() as i64),
        );
    }
    out
}

/// Curves and surfaces of both families for `r <= 8`, `n` in `2..=5`.
pub fn check_subvarieties(cfg: &VerifyConfig) -> CheckOutcome {
    let mut out = CheckOutcome::new(3, "subvariety multiplicities");
    for r in 1..=cfg.max_r.min(8) {
        for a in (0..r).filter(|a| a.gcd(&r) == 1) {
            for b in 0..r {
                let mut kinds = vec![SubvarietyKind::Cr, SubvarietyKind::T3, SubvarietyKind::T4];
                if b.gcd(&r) == 1 {
                    kinds.extend([SubvarietyKind::C, SubvarietyKind::S1, SubvarietyKind::S3]);
                }
                for n in 2..=5 {
                    kinds.extend([SubvarietyKind::T1 { n }, SubvarietyKind::T2 { n }]);
                    if b.gcd(&r) == 1 {
                        kinds.push(SubvarietyKind::S2 { n });
                    }
                }
                for kind in kinds {
                    let label = format!("{kind:?} r={r} a={a} b={b}");
                    let Some(s) = out.record(&label, SubvarietyModel::new(kind, r, a, b)) else {
                        continue;
                    };
                    let (ri, l) = (r as i64, s.l() as i64);
                    let expected = match kind {
                        SubvarietyKind::C => rat(1, l),
                        SubvarietyKind::S1 => rat(ri, l * l),
                        SubvarietyKind::S2 { .. } | SubvarietyKind::S3 => rat(2 * ri, l * l),
                        SubvarietyKind::Cr => rat(1, ri),
                        _ => rat(2, ri),
                    };
                    three_way(&mut out, verify_subvariety(&s), &label, &expected);
                }
            }
        }
    }
    out
}

/// Floor-sum identity for weights `(1, a, b)` and the multiplicity `1/(ab)`.
pub fn check_smooth_weights() -> CheckOutcome {
    let mut out = CheckOutcome::new(4, "smooth point with weights (1,a,b)");
    for a in 1..=5u32 {
        for b in 1..=5u32 {
            for h in 0..=50u32 {
                let label = format!("a={a} b={b} h={h}");
                if let Some(direct) = out.record(&label, smooth_graded_enumerated(a, b, h)) {
                    let sum = smooth_graded_floor_sum(a as u64, b as u64, h as u64);
                    out.case(sum == direct, || {
                        format!("{label}: floor sum {sum}, enumeration {direct}")
                    });
                }
            }
            let label = format!("a={a} b={b}");
            let cone =
                CongruenceCone::new(1, vec![0, 0, 0], vec![int(1), int(a as i64), int(b as i64)]);
            if let Some(v) = out.record(&label, cone.and_then(|c| extract_cone(&c))) {
                let expected = rat(1, (a * b) as i64);
                out.case(v == expected, || {
                    format!("{label}: extracted {}", fmt_rat(&v))
                });
            }
        }
    }
    out
}

/// Kawamata blow-up of `C^3 / Z_r(a, r - a, 1)` under both upper bounds.
pub fn check_kawamata_bounds(cfg: &VerifyConfig) -> CheckOutcome {
    let mut out = CheckOutcome::new(5, "Kawamata blow-up bounds");
    for r in 2..=cfg.max_r.min(8) {
        for a in (1..r).filter(|a| a.gcd(&r) == 1) {
            let label = format!("r={r} a={a}");
            if let Some(rep) = out.record(&label, kawamata_bound_check(r, a)) {
                out.case(rep.pass(), || {
                    format!(
                        "{label}: extracted {} vs bounds {} and {}",
                        fmt_rat(&rep.extracted),
                        fmt_rat(&rep.general_bound),
                        fmt_rat(&rep.specific_bound)
                    )
                });
            }
        }
    }
    out
}

/// The four weighted projective sharpness examples.
pub fn check_sharpness(cfg: &VerifyConfig) -> CheckOutcome {
    let mut out = CheckOutcome::new(6, "sharpness examples");
    for r in 1..=cfg.max_r {
        let ri = r as i64;
        let label = format!("4.2 r={r}");
        if let Some(ex) = out.record(&label, paper_example(ExampleId::E42, r, None)) {
            let values = (ex.top.clone(), ex.l2s.clone(), ex.lc.clone());
            let ok = values == (rat(27, ri), Some(rat(9, ri)), rat(3, ri))
                && ex.verdict.failed() == ["sigma3"]
                && ex.verdict.conditions[2].is_boundary_failure();
            out.case(ok, || format!("{label}: {}", ex.verdict.summary()));
        }
        for a in (1..r).filter(|&a| r > 2 * a) {
            let label = format!("4.3 r={r} a={a}");
            if let Some(ex) = out.record(&label, paper_example(ExampleId::E43, r, Some(a))) {
                let ok = ex.top > rat(27, ri) && ex.lc < rat(3, ri) && ex.matches_expectation();
                out.case(ok, || format!("{label}: {}", ex.verdict.summary()));
                ex.notes
                    .iter()
                    .for_each(|n| out.note(format!("{label}: {n}")));
            }
        }
        let label = format!("5.2 r={r}");
        if let Some(ex) = out.record(&label, paper_example(ExampleId::E52, r, None)) {
            let ok = (ex.top.clone(), ex.lc.clone()) == (rat(4, ri), rat(2, ri))
                && ex.verdict.failed() == ["sigma2"]
                && ex.verdict.conditions[1].is_boundary_failure();
            out.case(ok, || format!("{label}: {}", ex.verdict.summary()));
        }
        for a in 2..r {
            let label = format!("5.3 r={r} a={a}");
            if let Some(ex) = out.record(&label, paper_example(ExampleId::E53, r, Some(a))) {
                let ok = ex.top > rat(4, ri) && ex.lc < rat(2, ri) && ex.matches_expectation();
                out.case(ok, || format!("{label}: {}", ex.verdict.summary()));
            }
        }
    }
    out.note("5.3: L.C is taken from the degree formula, (a+1)/(ar); the printed 2/(ar) is also below 2/r".into());
    out
}

fn boundary_ok(v: &FreenessVerdict) -> bool {
    v.conditions
        .iter()
        .all(|c| c.attained == c.threshold && c.pass != c.strict)
}

/// Non-strict conditions hold at equality, strict ones fail.
pub fn check_thresholds(cfg: &VerifyConfig) -> CheckOutcome {
    let mut out = CheckOutcome::new(7, "threshold boundaries");
    for r in 1..=cfg.max_r {
        let ri = r as i64;
        let q = FreenessInput::new(
            PointKind::Quotient { r, a: 1, b: 1 },
            rat(27, ri),
            rat(9, ri),
            rat(3, ri),
        );
        if let Some(v) = out.record("thm41", q.and_then(|i| check_thm41(&i))) {
            out.case(boundary_ok(&v), || format!("thm41 r={r}: {}", v.summary()));
        }
        let g = if r == 1 {
            PointKind::Gorenstein
        } else {
            PointKind::Terminal { r }
        };
        let c = FreenessInput::new(g, rat(27, ri), rat(9, ri), rat(3, ri));
        if let Some(v) = out.record("cor45", c.and_then(|i| check_cor45(&i))) {
            out.case(boundary_ok(&v), || format!("cor45 r={r}: {}", v.summary()));
        }
        if r > 1 {
            let t = FreenessInput::new(
                PointKind::Terminal { r },
                rat(16, ri),
                rat(8, ri),
                rat(2, ri),
            );
            if let Some(v) = out.record("thm44", t.and_then(|i| check_thm44(&i))) {
                out.case(boundary_ok(&v), || format!("thm44 r={r}: {}", v.summary()));
                v.notes.iter().for_each(|n| out.note(format!("thm44: {n}")));
            }
        }
        if let Some(v) = out.record("thm51", check_thm51(r, &rat(4, ri), &rat(2, ri))) {
            out.case(boundary_ok(&v), || format!("thm51 r={r}: {}", v.summary()));
        }
    }
    let smooth = FreenessInput::new(
        PointKind::Quotient { r: 1, a: 0, b: 0 },
        int(27),
        int(9),
        int(3),
    );
    if let Some(v) = out.record("thm41 r=1", smooth.and_then(|i| check_thm41(&i))) {
        let got: Vec<(Rat, bool)> = v
            .conditions
            .iter()
            .map(|c| (c.threshold.clone(), c.strict))
            .collect();
        let want = vec![(int(3), false), (int(9), false), (int(27), true)];
        out.case(got == want, || {
            "thm41 r=1 thresholds differ from 3, 3^2, 3^3".into()
        });
    }
    out
}

/// The `lambda` bound at `(2, 1/3, 3)` and the surface-step sweep.
pub fn check_step22(cfg: &VerifyConfig) -> CheckOutcome {
    let mut out = CheckOutcome::new(8, "lambda bound and surface-step sweep");
    if let Some(b) = out.record(
        "lambda bound",
        lemma33_lambda_bound(2, &rat(1, 3), 3, cfg.digits),
    ) {
        let half = rat(1, 2);
        let ok =
            b.lo().pow(2) <= half && half <= b.hi().pow(2) && b.width() < rat(1, 1_000_000_000_000);
        out.case(ok, || {
            format!("lambda bound {b} does not enclose 1/sqrt(2)")
        });
    }
    for e in [rat(1, 3), rat(2, 5), rat(1, 2)] {
        let label = format!("e={}", fmt_rat(&e));
        if let Some(rep) = out.record(&label, step22_feasibility(&e, &rat(1, 1000), cfg.digits)) {
            out.case(rep.feasible, || format!("{label}: max {}", rep.max_lhs));
            out.note(format!(
                "{label}: max lhs {} at lambda {} over {} samples",
                fmt_decimal(rep.max_lhs.hi(), 12),
                fmt_rat(&rep.argmax),
                rep.samples
            ));
        }
    }
    out
}

fn random_invariant_support(rng: &mut ChaCha8Rng, r: u32, a: u32) -> MonomialSupport {
    let count = rng.gen_range(1..=6);
    let rows = (0..count)
        .map(|_| {
            let (i, j) = (rng.gen_range(0..7u32), rng.gen_range(0..7u32));
            let twist = ((a as u64 * j as u64 + r as u64 * 8 - a as u64 * i as u64 % r as u64)
                % r as u64) as u32;
            vec![i, j, twist + r * rng.gen_range(0..3u32)]
        })
        .collect();
    MonomialSupport::new(3, rows).expect("rows have length 3")
}

/// `kawamata_wmult_divisor = r * weighted_order` on random invariant supports.
pub fn check_divisor_orders(cfg: &VerifyConfig) -> CheckOutcome {
    let mut out = CheckOutcome::new(9, "Kawamata multiplicity equals r times weighted order");
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for _ in 0..100 {
        let r = rng.gen_range(2..=12u32);
        let units: Vec<u32> = (1..r).filter(|a| a.gcd(&r) == 1).collect();
        let a = units[rng.gen_range(0..units.len())];
        let s = random_invariant_support(&mut rng, r, a);
        let label = format!("r={r} a={a} support {s}");
        let ri = r as i64;
        let weights = [rat(a as i64, ri), rat(ri - a as i64, ri), rat(1, ri)];
        let (Some(k), Some(w)) = (
            out.record(&label, kawamata_wmult_divisor(&s, r, a)),
            out.record(&label, weighted_order(&s, &weights)),
        ) else {
            continue;
        };
        let scaled = int(ri) * &w;
        out.case(k == scaled, || {
            format!("{label}: {} vs {}", fmt_rat(&k), fmt_rat(&scaled))
        });
    }
    out
}

/// Every check, in order.
pub fn run_all(cfg: &VerifyConfig) -> Vec<CheckOutcome> {
    let checks: Vec<Box<dyn Fn() -> CheckOutcome + Sync + '_>> = vec![
        Box::new(|| check_quotients(cfg)),
        Box::new(|| check_terminals(cfg)),
        Box::new(|| check_subvarieties(cfg)),
        Box::new(check_smooth_weights),
        Box::new(|| check_kawamata_bounds(cfg)),
        Box::new(|| check_sharpness(cfg)),
        Box::new(|| check_thresholds(cfg)),
        Box::new(|| check_step22(cfg)),
        Box::new(|| check_divisor_orders(cfg)),
    ];
    std::thread::scope(|s| {
        let handles: Vec<_> = checks.iter().map(|c| s.spawn(c)).collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("check panicked"))
            .collect()
    })
}
