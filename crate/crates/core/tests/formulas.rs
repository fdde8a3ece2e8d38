use std::collections::BTreeMap;

use proptest::prelude::*;
use trisat::formulas::*;

fn val(r: Result<BoundRecord, FormulaError>) -> i128 {
    r.unwrap().value
}

// Closed forms transcribed directly, for comparison with the library.
fn con1(n: [i128; 3], l: i128, m: i128) -> i128 {
    2 * m * (n[0] + n[1] + n[2]) + (l - m) * (n[1] + 2 * n[2]) - 3 * l * m - 3
}

fn con3(n: [i128; 3], l: i128, m: i128) -> i128 {
    2 * (m - 1) * (n[0] + n[1] + n[2]) + (l - m) * (n[1] + 2 * n[2]) - 3 * l * (m - 1) + 3 * m - 3
}

fn con4(n: i128, l: i128, m: i128) -> i128 {
    let t = (l - m) / 2;
    3 * (l + m) * n - 3 * (l - m - t) * t - 3 * l * m - 3
}

fn con5(n: i128, l: i128, m: i128) -> i128 {
    let t = (l - m) / 2;
    3 * (l + m - 2) * n - 3 * (m - 1) * (l - 1) + 3 * t * t - 3 * (l - m) * t
}

#[test]
fn construction_bounds() {
    assert_eq!(val(f_con1_upper(4, 4, 4, 1, 1)), 18);
    assert_eq!(val(f_con1_upper(7, 6, 6, 2, 1)), 47);
    let r = f_con1_upper(5, 5, 5, 1, 1).unwrap();
    assert_eq!(
        (r.value, r.hypothesis_satisfied, r.kind),
        (24, true, BoundKind::Upper)
    );
    assert!(!f_con1_upper(2, 2, 2, 1, 1).unwrap().hypothesis_satisfied);
    assert!(matches!(
        f_con1_upper(4, 5, 4, 1, 1),
        Err(FormulaError::Ordering(..))
    ));
    assert!(f_con1_upper(5, 5, 5, 1, 2).is_err());

    assert_eq!(val(f_con3_upper(5, 5, 5, 2, 2, 1)), 27);
    assert_eq!(val(f_con3_upper(6, 6, 6, 3, 2, 1)), 48);
    assert!(f_con3_upper(5, 5, 5, 2, 2, 2).is_err());
    assert_eq!(val(f_con4_upper(12, 3, 1)), 129);
    assert_eq!(val(f_con5_upper(8, 4, 2, 1)), 84);
    assert!(f_con5_upper(8, 4, 2, 2).is_err());
}

#[test]
fn exact_values_with_thresholds() {
    let r = f_sat_lll(450, 450, 450, 2).unwrap();
    assert_eq!(
        (r.value, r.hypothesis_satisfied, r.kind),
        (5385, true, BoundKind::Exact)
    );
    assert!(!f_sat_lll(437, 437, 437, 2).unwrap().hypothesis_satisfied);
    let r = f_sat_lll(100, 100, 100, 1).unwrap();
    assert_eq!((r.value, r.hypothesis_satisfied), (594, true));
    assert!(f_sat_lll(82, 82, 82, 1).unwrap().hypothesis == Hypothesis::Violated);
    let r = f_sat_lll(5, 5, 5, 2).unwrap();
    assert_eq!(
        (r.value, r.hypothesis_satisfied, r.kind),
        (45, false, BoundKind::Upper)
    );

    let r = f_sat_lll1(100, 100, 100, 2).unwrap();
    assert_eq!((r.value, r.hypothesis_satisfied), (597, true));
    let r = f_sat_lll1(83, 83, 83, 2).unwrap();
    assert_eq!((r.value, r.hypothesis_satisfied), (495, true));
    assert!(!f_sat_lll1(83, 83, 82, 2).unwrap().hypothesis_satisfied);
    let r = f_sat_lll1(10, 10, 10, 3).unwrap();
    assert_eq!((r.value, r.hypothesis_satisfied), (108, false));
    assert!(f_sat_lll1(10, 10, 10, 1).is_err());
}

#[test]
fn lower_bound_and_sandwich() {
    let r = f_lll2_lower(1000, 3).unwrap();
    assert_eq!(
        (r.value, r.kind, r.hypothesis),
        (11418, BoundKind::Lower, Hypothesis::Unknown)
    );
    assert!(!r.hypothesis_satisfied);
    assert!(r.note.is_some());
    assert!(f_lll2_lower(100, 2).is_err());
    for n in [50, 500, 5000] {
        assert_eq!(val(f_con5_upper(n, 3, 3, 1)) - val(f_lll2_lower(n, 3)), 570);
    }
}

#[test]
fn four_cycle_values() {
    let r = f_c4(2, 2, 2).unwrap();
    assert_eq!(
        (r.value, r.kind, r.hypothesis_satisfied),
        (6, BoundKind::Exact, true)
    );
    assert_eq!(val(f_c4(3, 2, 2)), 7);
    assert!(!f_c4(2, 2, 1).unwrap().hypothesis_satisfied);
}

#[test]
fn reference_values() {
    assert_eq!(val(f_ehm(10, 3)), 9);
    assert_eq!(val(f_bw(5, 5, 2, 2)), 9);
    let r = f_fjpw(3, 200).unwrap();
    assert_eq!(
        (r.value, r.kind, r.hypothesis_satisfied),
        (1194, BoundKind::Reference, true)
    );
    assert_eq!(r.value, val(f_sat_lll(200, 200, 200, 1)));
    assert!(!f_fjpw(3, 99).unwrap().hypothesis_satisfied);
    // (ℓ+m-2)n - ⌊((ℓ+m-2)/2)^2⌋ and (ℓ+m-2)n - (ℓ+m-2)^2 at n=10, ℓ=3, m=2.
    assert_eq!(val(f_ms_upper(10, 3, 2)), 30 - 2);
    assert_eq!(val(f_gks_lower(10, 3, 2)), 30 - 9);
}

#[test]
fn overflow_is_reported() {
    assert!(matches!(
        f_con1_upper(u64::MAX, u64::MAX, u64::MAX, u64::MAX, 1),
        Err(FormulaError::Overflow(_))
    ));
    assert!(matches!(
        f_sat_lll(u64::MAX, u64::MAX, u64::MAX, u64::MAX),
        Err(FormulaError::Overflow(_))
    ));
    let big = 1_000_000_000u64;
    assert_eq!(val(f_sat_lll(big, big, big, 1)), 6 * big as i128 - 6);
}

#[test]
fn evaluate_by_name() {
    let params = |kv: &[(&str, u64)]| {
        kv.iter()
            .map(|&(k, v)| (k.to_string(), v))
            .collect::<BTreeMap<_, _>>()
    };
    let r = evaluate(
        "sat_lll",
        &params(&[("n1", 450), ("n2", 450), ("n3", 450), ("l", 2)]),
    )
    .unwrap();
    assert_eq!(r.value, 5385);
    assert_eq!(r.name, "f_sat_lll");
    assert_eq!(
        evaluate("f_fjpw", &params(&[("k", 3), ("n", 200)]))
            .unwrap()
            .value,
        1194
    );
    assert!(matches!(
        evaluate("nope", &params(&[])),
        Err(FormulaError::UnknownName(_))
    ));
    assert!(matches!(
        evaluate("fjpw", &params(&[("k", 3)])),
        Err(FormulaError::MissingParam(_))
    ));
    assert!(matches!(
        evaluate("fjpw", &params(&[("k", 3), ("n", 5), ("x", 1)])),
        Err(FormulaError::UnexpectedParam(_))
    ));
    for (name, keys) in FORMULAS {
        let p = params(
            &keys
                .iter()
                .map(|&k| (k, if k == "k" { 3 } else { 1 }))
                .collect::<Vec<_>>(),
        );
        // Every name dispatches; shape errors are fine, lookup errors are not.
        let r = evaluate(name, &p);
        assert!(
            !matches!(
                r,
                Err(FormulaError::UnknownName(_) | FormulaError::MissingParam(_))
            ),
            "{name}"
        );
    }
}

fn ordered() -> impl Strategy<Value = [u64; 3]> {
    (1u64..2000, 0u64..2000, 0u64..2000).prop_map(|(c, db, da)| [c + db + da, c + db, c])
}

proptest! {
    #[test]
    fn matches_transcribed_closed_forms(n in ordered(), l in 1u64..30, dm in 0u64..30, dp in 1u64..30) {
        let m = l.saturating_sub(dm).max(1);
        let w = n.map(i128::from);
        let (li, mi) = (l as i128, m as i128);
        prop_assert_eq!(val(f_con1_upper(n[0], n[1], n[2], l, m)), con1(w, li, mi));
        prop_assert_eq!(val(f_con4_upper(n[0], l, m)), con4(w[0], li, mi));
        if m >= 2 {
            let p = m.saturating_sub(dp).max(1);
            prop_assert_eq!(val(f_con3_upper(n[0], n[1], n[2], l, m, p)), con3(w, li, mi));
            prop_assert_eq!(val(f_con5_upper(n[0], l, m, p)), con5(w[0], li, mi));
        }
    }

    #[test]
    fn exact_values_coincide_with_construction_bounds(n in ordered(), l in 1u64..40) {
        prop_assert_eq!(val(f_sat_lll(n[2], n[2], n[2], l)), val(f_con1_upper(n[2], n[2], n[2], l, l)));
        prop_assert_eq!(val(f_sat_lll(n[0], n[1], n[2], l)), val(f_con1_upper(n[0], n[1], n[2], l, l)));
        if l >= 2 {
            prop_assert_eq!(val(f_sat_lll1(n[0], n[1], n[2], l)), val(f_con3_upper(n[0], n[1], n[2], l, l, l - 1)));
        }
    }

    #[test]
    fn triangle_values_agree(n in 3u64..100_000) {
        prop_assert_eq!(val(f_sat_lll(n, n, n, 1)), val(f_fjpw(3, n)));
    }

    #[test]
    fn reference_bounds_are_ordered(n in 1u64..100_000, l in 2u64..50, m in 2u64..50) {
        prop_assert!(val(f_gks_lower(n, l, m)) <= val(f_ms_upper(n, l, m)));
    }

    #[test]
    fn sandwich_gap_is_constant(l in 3u64..60, a in 1u64..100_000, b in 1u64..100_000) {
        let gap = |n| val(f_con5_upper(n, l, l, l - 2)) - val(f_lll2_lower(n, l));
        prop_assert_eq!(gap(a), gap(b));
        prop_assert!(gap(a) >= 0);
    }

    #[test]
    fn clique_formula(n in 1u64..100_000, k in 2u64..50) {
        let expected = (k as i128 - 2) * n as i128 - (k as i128 - 1) * (k as i128 - 2) / 2;
        prop_assert_eq!(val(f_ehm(n, k)), expected);
    }
}
