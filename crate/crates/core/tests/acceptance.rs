//! End-to-end acceptance checks, one line per criterion.
//!
//! Expected values are recomputed here from first principles (own scans,
//! own floor sums, own threshold arithmetic) and compared with the library.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use wmult_core::catalog::{
    kawamata_bound_check, verify_quotient, verify_subvariety, verify_terminal, BlowupSpec,
    CdThreeForm, CdTwoForm, CyclicQuotient, MoriCase, SubvarietyKind, SubvarietyModel,
    TerminalModel,
};
use wmult_core::divisor::{kawamata_wmult_divisor, weighted_order, MonomialSupport};
use wmult_core::freeness::{
    check_cor45, check_thm41, check_thm44, check_thm51, lemma33_lambda_bound, step22_feasibility,
    FreenessInput, PointKind,
};
use wmult_core::lattice::{extract_cone, CongruenceCone};
use wmult_core::rational::{fmt_rat, int, rat};
use wmult_core::suite::{run_all, VerifyConfig};
use wmult_core::wps::{paper_example, ExampleId};
use wmult_core::Rat;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn l_scan(r: u32, residues: &[u32]) -> u32 {
    (1..=r)
        .find(|&i| residues.iter().all(|&a| (a * i) % r == i % r))
        .unwrap()
}

fn units(r: u32) -> Vec<u32> {
    (0..r).filter(|&a| gcd(a, r) == 1).collect()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn criterion_1() -> Outcome {
    let mut cases = 0;
    for r in 1..=10u32 {
        let us = units(r);
        let mut tuples: Vec<Vec<u32>> = us.iter().map(|&a| vec![1 % r, a]).collect();
        for &a in &us {
            tuples.extend(us.iter().map(|&b| vec![1 % r, a, b]));
        }
        for t in tuples {
            let q = CyclicQuotient::new(r, t.clone()).map_err(|e| e.to_string())?;
            let rep = verify_quotient(&q, &BlowupSpec::uniform(&q)).map_err(|e| e.to_string())?;
            let n = t.len() as u32;
            let l = l_scan(r, &t[1..]);
            let want = Rat::new(r.pow(n - 1).into(), l.pow(n).into());
            ensure(
                rep.closed.as_ref() == Some(&want) && rep.extracted == want && rep.analytic == want,
                || {
                    format!(
                        "r={r} residues {t:?}: want {}, got {:?}",
                        fmt_rat(&want),
                        rep
                    )
                },
            )?;
            cases += 1;
        }
    }
    Ok(format!("{cases} quotients agree three ways"))
}

fn criterion_2() -> Outcome {
    let mut models = Vec::new();
    for r in 2..=7 {
        for a in units(r).into_iter().filter(|&a| a > 0) {
            models.push(TerminalModel::ca(r, a).unwrap());
        }
    }
    let fixed = [
        (MoriCase::CAx4, 4, rat(1, 2)),
        (MoriCase::CAx2, 2, int(1)),
        (MoriCase::CD2(CdTwoForm::Cubic), 2, int(1)),
        (MoriCase::CD2(CdTwoForm::Xyz { n: 4 }), 2, int(1)),
        (MoriCase::CD2(CdTwoForm::Y2z { n: 3 }), 2, int(1)),
        (MoriCase::CD3(CdThreeForm::Fermat), 3, rat(2, 3)),
        (MoriCase::CD3(CdThreeForm::Yz2), 3, rat(2, 3)),
        (MoriCase::CD3(CdThreeForm::Y3), 3, rat(2, 3)),
        (MoriCase::CE2, 2, int(1)),
    ];
    for (case, r, want) in fixed {
        let m = TerminalModel::new(case, r).unwrap();
        ensure(rat(2, r as i64) == want, || {
            format!("{m}: 2/r is not the listed value")
        })?;
        models.push(m);
    }
    for m in &models {
        let rep = verify_terminal(m).map_err(|e| e.to_string())?;
        let want = rat(2, m.r() as i64);
        ensure(rep.extracted == want && rep.analytic == want, || {
            format!("{m}: {rep:?}")
        })?;
        if let Some(loose) = &rep.extracted_without_dedupe {
            ensure(loose == &want, || {
                format!("{m}: overlap changed the leading term")
            })?;
        }
    }
    Ok(format!("{} terminal models give 2/r", models.len()))
}

fn criterion_3() -> Outcome {
    let mut cases = 0;
    for r in 1..=8u32 {
        for a in units(r) {
            for b in 0..r {
                let coprime_b = gcd(b, r) == 1;
                let l = l_scan(r, &[a, b]) as i64;
                let ri = r as i64;
                let mut kinds: Vec<(SubvarietyKind, Rat)> = vec![
                    (SubvarietyKind::Cr, rat(1, ri)),
                    (SubvarietyKind::T3, rat(2, ri)),
                    (SubvarietyKind::T4, rat(2, ri)),
                ];
                if coprime_b {
                    kinds.push((SubvarietyKind::C, rat(1, l)));
                    kinds.push((SubvarietyKind::S1, rat(ri, l * l)));
                    kinds.push((SubvarietyKind::S3, rat(2 * ri, l * l)));
                }
                for n in 2..=5 {
                    kinds.push((SubvarietyKind::T1 { n }, rat(2, ri)));
                    kinds.push((SubvarietyKind::T2 { n }, rat(2, ri)));
                    if coprime_b {
                        kinds.push((SubvarietyKind::S2 { n }, rat(2 * ri, l * l)));
                    }
                }
                for (kind, want) in kinds {
                    let s = SubvarietyModel::new(kind, r, a, b).map_err(|e| e.to_string())?;
                    let rep = verify_subvariety(&s).map_err(|e| e.to_string())?;
                    ensure(
                        rep.extracted == want && rep.closed.as_ref() == Some(&want),
                        || {
                            format!(
                                "{s}: want {}, extracted {}",
                                fmt_rat(&want),
                                fmt_rat(&rep.extracted)
                            )
                        },
                    )?;
                    cases += 1;
                }
            }
        }
    }
    Ok(format!("{cases} subvariety models match"))
}

fn criterion_4() -> Outcome {
    for a in 1..=5u64 {
        for b in 1..=5u64 {
            for h in 0..=50u64 {
                let mut floor_sum = 0;
                let mut l = 0;
                while l * (a + b) <= h {
                    let rest = h - l * (a + b);
                    floor_sum += rest / a + rest / b + 1;
                    l += 1;
                }
                let mut direct = 0;
                for j in 0..=h / a {
                    for k in 0..=(h - a * j) / b {
                        let s = h - a * j - b * k;
                        direct += u64::from(s + a * j + b * k == h);
                    }
                }
                ensure(floor_sum == direct, || {
                    format!("a={a} b={b} h={h}: {floor_sum} vs {direct}")
                })?;
                let lib = wmult_core::catalog::smooth_graded_floor_sum(a, b, h);
                ensure(lib == direct, || {
                    format!("a={a} b={b} h={h}: library floor sum {lib}")
                })?;
            }
            let cone =
                CongruenceCone::new(1, vec![0, 0, 0], vec![int(1), int(a as i64), int(b as i64)])
                    .unwrap();
            let v = extract_cone(&cone).map_err(|e| e.to_string())?;
            ensure(v == rat(1, (a * b) as i64), || {
                format!("a={a} b={b}: extracted {}", fmt_rat(&v))
            })?;
        }
    }
    Ok("floor sum = enumeration on 1275 triples; multiplicity 1/(ab) on 25 pairs".into())
}

fn criterion_5() -> Outcome {
    let mut cases = 0;
    for r in 2..=8u32 {
        for a in units(r).into_iter().filter(|&a| a > 0) {
            let rep = kawamata_bound_check(r, a).map_err(|e| e.to_string())?;
            let (ri, ai) = (r as i64, a as i64);
            let general = rat(ri * ri, ri - 1);
            let specific = rat(ri * ri, ai * (ri - ai));
            ensure(
                rep.extracted <= general && rep.extracted <= specific,
                || format!("r={r} a={a}: {} exceeds a bound", fmt_rat(&rep.extracted)),
            )?;
            cases += 1;
        }
    }
    Ok(format!("{cases} Kawamata blow-ups within both bounds"))
}

fn criterion_6() -> Outcome {
    for r in 1..=10u32 {
        let ri = r as i64;
        let ex = paper_example(ExampleId::E42, r, None).map_err(|e| e.to_string())?;
        ensure(
            ex.top == rat(27, ri) && ex.l2s == Some(rat(9, ri)) && ex.lc == rat(3, ri),
            || format!("4.2 r={r}"),
        )?;
        ensure(ex.verdict.failed() == ["sigma3"], || {
            format!("4.2 r={r}: {}", ex.verdict.summary())
        })?;

        for a in 1..r {
            if r <= 2 * a {
                continue;
            }
            let ex = paper_example(ExampleId::E43, r, Some(a)).map_err(|e| e.to_string())?;
            let ai = a as i64;
            ensure(ex.top == rat((ri + 1).pow(3), ri * ai * (ri - ai)), || {
                format!("4.3 r={r} a={a}: L^3")
            })?;
            ensure(ex.lc == rat(ri + 1, ri * (ri - ai)), || {
                format!("4.3 r={r} a={a}: L.C")
            })?;
            ensure(ex.top > rat(27, ri) && ex.lc < rat(3, ri), || {
                format!("4.3 r={r} a={a}: inequalities")
            })?;
        }

        let ex = paper_example(ExampleId::E52, r, None).map_err(|e| e.to_string())?;
        ensure(ex.top == rat(4, ri) && ex.lc == rat(2, ri), || {
            format!("5.2 r={r}")
        })?;
        ensure(ex.verdict.failed() == ["sigma2"], || {
            format!("5.2 r={r}: {}", ex.verdict.summary())
        })?;

        for a in 2..r {
            let ex = paper_example(ExampleId::E53, r, Some(a)).map_err(|e| e.to_string())?;
            let ai = a as i64;
            ensure(ex.top == rat((ai + 1).pow(2), ai * ri), || {
                format!("5.3 r={r} a={a}: L^2")
            })?;
            ensure(ex.top > rat(4, ri) && ex.lc < rat(2, ri), || {
                format!("5.3 r={r} a={a}: inequalities")
            })?;
            ensure(rat(2, ai * ri) < rat(2, ri), || {
                format!("5.3 r={r} a={a}: printed L.C")
            })?;
        }
    }
    Ok("all four examples reproduced for r <= 10".into())
}

fn criterion_7() -> Outcome {
    for r in 1..=10u32 {
        let ri = r as i64;
        let eq = |l3: Rat, l2s: Rat, lc: Rat, point: PointKind| {
            FreenessInput::new(point, l3, l2s, lc).unwrap()
        };
        let pattern = |v: &wmult_core::freeness::FreenessVerdict| -> Vec<bool> {
            v.conditions.iter().map(|c| c.pass).collect()
        };

        let v = check_thm41(&eq(
            rat(27, ri),
            rat(9, ri),
            rat(3, ri),
            PointKind::Quotient { r, a: 1, b: 1 },
        ))
        .unwrap();
        ensure(pattern(&v) == [true, true, false], || {
            format!("thm41 r={r}")
        })?;
        let point = if r == 1 {
            PointKind::Gorenstein
        } else {
            PointKind::Terminal { r }
        };
        let v = check_cor45(&eq(rat(27, ri), rat(9, ri), rat(3, ri), point)).unwrap();
        ensure(pattern(&v) == [true, true, false], || {
            format!("cor45 r={r}")
        })?;
        if r > 1 {
            let v = check_thm44(&eq(
                rat(16, ri),
                rat(8, ri),
                rat(2, ri),
                PointKind::Terminal { r },
            ))
            .unwrap();
            ensure(pattern(&v) == [true, true, false], || {
                format!("thm44 r={r}")
            })?;
        }
        let v = check_thm51(r, &rat(4, ri), &rat(2, ri)).unwrap();
        ensure(pattern(&v) == [true, false], || format!("thm51 r={r}"))?;
    }
    let smooth = FreenessInput::new(
        PointKind::Quotient { r: 1, a: 0, b: 0 },
        int(28),
        int(9),
        int(3),
    )
    .unwrap();
    let v = check_thm41(&smooth).unwrap();
    let th: Vec<(Rat, bool)> = v
        .conditions
        .iter()
        .map(|c| (c.threshold.clone(), c.strict))
        .collect();
    // sigma_p = 3 for every p, compared as 3^p
    ensure(
        th == [(int(3), false), (int(9), false), (int(27), true)] && v.pass,
        || "smooth thresholds".into(),
    )?;
    Ok("equality passes non-strict and fails strict conditions for all four checkers".into())
}

fn criterion_8() -> Outcome {
    let b = lemma33_lambda_bound(2, &rat(1, 3), 3, 30).map_err(|e| e.to_string())?;
    let half = rat(1, 2);
    ensure(b.lo().pow(2) <= half && half <= b.hi().pow(2), || {
        format!("{b} misses 1/sqrt(2)")
    })?;
    ensure(b.width() <= rat(1, 1_000_000_000_000), || {
        format!("{b} too wide")
    })?;
    let mut maxima = Vec::new();
    for e in [rat(1, 3), rat(2, 5), rat(1, 2)] {
        let rep = step22_feasibility(&e, &rat(1, 1000), 30).map_err(|e| e.to_string())?;
        ensure(rep.feasible && rep.max_lhs.hi() < &int(1), || {
            format!("e={}: {}", fmt_rat(&e), rep.max_lhs)
        })?;
        maxima.push(format!("{}:{}", fmt_rat(&e), rep.max_lhs.to_decimal(4)));
    }
    Ok(format!(
        "lambda bound encloses 1/sqrt(2); max lhs {}",
        maxima.join(" ")
    ))
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x9e37_79b9);
    for _ in 0..100 {
        let r = rng.gen_range(2..=11u32);
        let us: Vec<u32> = units(r).into_iter().filter(|&a| a > 0).collect();
        let a = us[rng.gen_range(0..us.len())];
        let rows: Vec<Vec<u32>> = (0..rng.gen_range(1..=5))
            .map(|_| {
                let (i, j) = (rng.gen_range(0..6u32), rng.gen_range(0..6u32));
                // smallest k with a i + (r - a) j + k divisible by r, then a random multiple of r on top
                let k = (r - (a * i + (r - a) * j) % r) % r + r * rng.gen_range(0..3u32);
                vec![i, j, k]
            })
            .collect();
        let s = MonomialSupport::new(3, rows).unwrap();
        let ri = r as i64;
        let w = weighted_order(&s, &[rat(a as i64, ri), rat(ri - a as i64, ri), rat(1, ri)])
            .map_err(|e| e.to_string())?;
        let k = kawamata_wmult_divisor(&s, r, a).map_err(|e| e.to_string())?;
        ensure(k == int(ri) * &w, || {
            format!("r={r} a={a} {s}: {} vs r * {}", fmt_rat(&k), fmt_rat(&w))
        })?;
    }
    Ok("100 random invariant supports".into())
}

fn criterion_10() -> Outcome {
    let start = Instant::now();
    let outcomes = run_all(&VerifyConfig::default());
    let elapsed = start.elapsed();
    let failed: Vec<String> = outcomes
        .iter()
        .filter(|o| !o.passed())
        .map(|o| o.summary())
        .collect();
    ensure(failed.is_empty(), || failed.join("; "))?;
    ensure(elapsed < Duration::from_secs(300), || {
        format!("took {elapsed:?}")
    })?;
    let notes: Vec<&String> = outcomes.iter().flat_map(|o| &o.notes).collect();
    ensure(
        notes
            .iter()
            .any(|n| n.contains("cAx2") && n.contains("h=1")),
        || "missing cAx/2 note".into(),
    )?;
    ensure(
        notes
            .iter()
            .any(|n| n.contains("terminal cA ") && n.contains("overlap")),
        || "missing cA overlap note".into(),
    )?;
    Ok(format!(
        "{} checks, {} notes, {:.1}s",
        outcomes.len(),
        notes.len(),
        elapsed.as_secs_f64()
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("quotient multiplicities", criterion_1),
        ("terminal multiplicities", criterion_2),
        ("subvariety multiplicities", criterion_3),
        ("smooth weights (1,a,b)", criterion_4),
        ("Kawamata blow-up bounds", criterion_5),
        ("sharpness examples", criterion_6),
        ("threshold boundaries", criterion_7),
        ("lambda bound and surface-step sweep", criterion_8),
        ("Kawamata multiplicity vs weighted order", criterion_9),
        ("full verify run", criterion_10),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let result = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let ms = t.elapsed().as_millis();
        match result {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} [{ms} ms]", i + 1),
            Err(detail) => {
                failures += 1;
                println!("criterion {:>2} FAIL  {name}: {detail} [{ms} ms]", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failures} failed",
        criteria.len() - failures
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
