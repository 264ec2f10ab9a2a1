use num_traits::Zero;
use proptest::prelude::*;

use wmult_core::catalog::{compute_l, verify_subvariety, Model, SubvarietyKind, SubvarietyModel};
use wmult_core::divisor::{weighted_order, MonomialSupport};
use wmult_core::enclosure::Enclosure;
use wmult_core::freeness::{check_cor45, check_thm51, FreenessInput, PointKind};
use wmult_core::lattice::{
    count_below, extract_cone, graded_slice, wmult_analytic, CongruenceCone, WeightTally,
};
use wmult_core::rational::{fmt_rat, int, parse_rat, rat};
use wmult_core::wps::{wps_degree, WpsSpace};
use wmult_core::Rat;

fn small_cone() -> impl Strategy<Value = CongruenceCone> {
    (1u32..=5, 1usize..=3).prop_flat_map(|(r, n)| {
        (
            Just(r),
            prop::collection::vec(0..r, n),
            prop::collection::vec((1i64..=3, 1i64..=3), n),
        )
            .prop_map(|(r, g, w)| {
                CongruenceCone::new(r, g, w.into_iter().map(|(p, q)| rat(p, q)).collect()).unwrap()
            })
    })
}

fn integer_cone() -> impl Strategy<Value = CongruenceCone> {
    (1u32..=4, 1usize..=3).prop_flat_map(|(r, n)| {
        (
            Just(r),
            prop::collection::vec(0..r, n),
            prop::collection::vec(1i64..=3, n),
        )
            .prop_map(|(r, g, w)| {
                CongruenceCone::new(r, g, w.into_iter().map(int).collect()).unwrap()
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn extraction_matches_density(cone in small_cone()) {
        prop_assert_eq!(extract_cone(&cone).unwrap(), wmult_analytic(&cone));
    }

    #[test]
    fn counts_are_monotone(cone in small_cone(), a in 0i64..30, b in 0i64..30) {
        let (lo, hi) = (a.min(b), a.max(b));
        let h = |x: i64| rat(x, 2);
        prop_assert!(count_below(&cone, &h(lo)).unwrap() <= count_below(&cone, &h(hi)).unwrap());
    }

    #[test]
    fn graded_slices_telescope(cone in integer_cone(), h in 0i64..15) {
        let below = count_below(&cone, &int(h)).unwrap();
        let next = count_below(&cone, &int(h + 1)).unwrap();
        prop_assert_eq!(next - below, graded_slice(&cone, &int(h)).unwrap());
    }

    #[test]
    fn tally_agrees_with_recursion(cone in small_cone(), h in 0i64..24) {
        let tally = WeightTally::new(&cone, 0, &Rat::zero(), &int(12)).unwrap();
        let cut = rat(h, 2);
        prop_assert_eq!(tally.count_below(&cut).unwrap(), count_below(&cone, &cut).unwrap());
    }

    #[test]
    fn l_invariant(r in 1u32..=16, res in prop::collection::vec(0u32..16, 1..4)) {
        let res: Vec<u32> = res.into_iter().map(|a| a % r).collect();
        let l = compute_l(r, &res);
        prop_assert!(1 <= l && l <= r);
        for &a in &res {
            prop_assert_eq!((a as u64 * l as u64) % r as u64, l as u64 % r as u64);
        }
    }

    #[test]
    fn surface_multiplicity_ignores_exponent(r in 1u32..=6, a in 0u32..6, b in 0u32..6, n in 2u32..=5) {
        let Ok(s) = SubvarietyModel::new(SubvarietyKind::S2 { n }, r, a, b) else { return Ok(()) };
        let base = SubvarietyModel::new(SubvarietyKind::S2 { n: 2 }, r, a, b).unwrap();
        prop_assert_eq!(verify_subvariety(&s).unwrap().extracted, verify_subvariety(&base).unwrap().extracted);
    }

    #[test]
    fn order_is_additive(
        u in prop::collection::vec(prop::collection::vec(0u32..5, 3), 1..4),
        v in prop::collection::vec(prop::collection::vec(0u32..5, 3), 1..4),
        w in prop::collection::vec((1i64..=4, 1i64..=4), 3),
    ) {
        let weights: Vec<Rat> = w.into_iter().map(|(p, q)| rat(p, q)).collect();
        let (s, t) = (MonomialSupport::new(3, u).unwrap(), MonomialSupport::new(3, v).unwrap());
        let sum = s.minkowski_sum(&t).unwrap();
        prop_assert_eq!(
            weighted_order(&sum, &weights).unwrap(),
            weighted_order(&s, &weights).unwrap() + weighted_order(&t, &weights).unwrap()
        );
    }

    #[test]
    fn order_scales(
        u in prop::collection::vec(prop::collection::vec(0u32..6, 2), 1..5),
        w in prop::collection::vec((1i64..=4, 1i64..=4), 2),
        (p, q) in (1i64..=7, 1i64..=7),
    ) {
        let s = MonomialSupport::new(2, u).unwrap();
        let weights: Vec<Rat> = w.into_iter().map(|(p, q)| rat(p, q)).collect();
        let k = rat(p, q);
        let scaled: Vec<Rat> = weights.iter().map(|x| x * &k).collect();
        prop_assert_eq!(weighted_order(&s, &scaled).unwrap(), k * weighted_order(&s, &weights).unwrap());
    }

    #[test]
    fn degree_scales(ws in prop::collection::vec(1u32..=9, 2..5), d in 0u32..6, lam in 1u32..5) {
        let space = WpsSpace::new(ws.clone()).unwrap();
        let face: Vec<usize> = (0..ws.len()).collect();
        let p = face.len() as i32 - 1;
        prop_assert_eq!(
            wps_degree(&space, lam * d, &face).unwrap(),
            int(lam as i64).pow(p) * wps_degree(&space, d, &face).unwrap()
        );
    }

    #[test]
    fn weight_one_extension_multiplies_by_d(ws in prop::collection::vec(1u32..=9, 1..4), d in 0u32..6) {
        let mut ext = ws.clone();
        ext.push(1);
        let face: Vec<usize> = (0..ws.len()).collect();
        let mut bigger = face.clone();
        bigger.push(ws.len());
        let (small, big) = (WpsSpace::new(ws).unwrap(), WpsSpace::new(ext).unwrap());
        prop_assert_eq!(
            wps_degree(&big, d, &bigger).unwrap(),
            int(d as i64) * wps_degree(&small, d, &face).unwrap()
        );
    }

    #[test]
    fn passing_verdicts_survive_increases(
        r in 1u32..=10,
        vals in prop::collection::vec((1i64..=60, 1i64..=6), 3),
        bump in prop::collection::vec(0i64..5, 3),
    ) {
        let v: Vec<Rat> = vals.iter().map(|&(p, q)| rat(p, q)).collect();
        let w: Vec<Rat> = v.iter().zip(&bump).map(|(x, &b)| x + int(b)).collect();
        let point = if r == 1 { PointKind::Gorenstein } else { PointKind::Terminal { r } };
        let before = check_cor45(&FreenessInput::new(point, v[0].clone(), v[1].clone(), v[2].clone()).unwrap()).unwrap();
        let after = check_cor45(&FreenessInput::new(point, w[0].clone(), w[1].clone(), w[2].clone()).unwrap()).unwrap();
        prop_assert!(!before.pass || after.pass);
        let s0 = check_thm51(r, &v[0], &v[2]).unwrap();
        let s1 = check_thm51(r, &w[0], &w[2]).unwrap();
        prop_assert!(!s0.pass || s1.pass);
    }

    #[test]
    fn verdict_is_conjunction(vals in prop::collection::vec((1i64..=60, 1i64..=6), 3)) {
        let v: Vec<Rat> = vals.iter().map(|&(p, q)| rat(p, q)).collect();
        let verdict = check_cor45(&FreenessInput::new(PointKind::Gorenstein, v[0].clone(), v[1].clone(), v[2].clone()).unwrap()).unwrap();
        prop_assert_eq!(verdict.pass, verdict.conditions.iter().all(|c| c.pass));
    }

    #[test]
    fn roots_bracket(p in 0i64..500, q in 1i64..50, n in 1u32..5) {
        let x = rat(p, q);
        let e = Enclosure::nth_root_of(&x, n, 20).unwrap();
        prop_assert!(e.lo().pow(n as i32) <= x && x <= e.hi().pow(n as i32));
    }

    #[test]
    fn rationals_round_trip(p in -10_000i64..10_000, q in 1i64..10_000) {
        let x = rat(p, q);
        prop_assert_eq!(parse_rat(&fmt_rat(&x)).unwrap(), x);
    }

    #[test]
    fn subvariety_text_round_trips(r in 1u32..=9, a in 0u32..9, b in 0u32..9, n in 1u32..6, pick in 0usize..9) {
        let kinds = [
            SubvarietyKind::C, SubvarietyKind::S1, SubvarietyKind::S2 { n }, SubvarietyKind::S3, SubvarietyKind::Cr,
            SubvarietyKind::T1 { n }, SubvarietyKind::T2 { n }, SubvarietyKind::T3, SubvarietyKind::T4,
        ];
        if let Ok(s) = SubvarietyModel::new(kinds[pick], r, a, b) {
            let m = Model::Subvariety(s);
            prop_assert_eq!(m.to_string().parse::<Model>().unwrap(), m);
        }
    }
}
