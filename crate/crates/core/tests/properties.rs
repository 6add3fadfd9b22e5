use bch_core::bch::sym_bch_via_three_variables;
use bch_core::rational::{int, rat};
use bch_core::{
    canonicalize, compact_reduce, dsw_bracketing, dynkin_phi_m, enumerate_nested, expand_lie,
    expand_nested, identity_report, log_product_words, phi_m, reduce, scale_substitute, sym_bch_m,
    AssocPoly, Generator, LieExpr, NestedComm, Rational, Regime, Substitution,
};
use num_traits::Zero;
use proptest::prelude::*;

fn generators(n: usize) -> impl Strategy<Value = Generator> {
    (0..n).prop_map(Generator::new)
}

fn coefficient() -> impl Strategy<Value = Rational> {
    (-20i64..=20, 1i64..=12)
        .prop_filter("nonzero", |(p, _)| *p != 0)
        .prop_map(|(p, q)| rat(p, q))
}

/// Random grade-`m` Lie polynomial in two generators, built from raw brackets.
fn lie_poly(m: usize) -> impl Strategy<Value = LieExpr> {
    prop::collection::vec(
        (prop::collection::vec(generators(2), m), coefficient()),
        1..12,
    )
    .prop_map(|terms| {
        let mut e = LieExpr::zero();
        for (leaves, k) in terms {
            e.add_raw(&leaves, k);
        }
        e
    })
}

/// Rank of a set of word polynomials, by exact elimination over their words.
fn rank(polys: &[AssocPoly]) -> usize {
    let words: Vec<_> = {
        let mut w: Vec<_> = polys
            .iter()
            .flat_map(|p| p.iter().map(|(w, _)| w.clone()))
            .collect();
        w.sort();
        w.dedup();
        w
    };
    let mut rows: Vec<Vec<Rational>> = polys
        .iter()
        .map(|p| words.iter().map(|w| p.coeff(w)).collect())
        .collect();
    let mut r = 0;
    for col in 0..words.len() {
        let Some(pivot) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, pivot);
        for i in 0..rows.len() {
            if i != r && !rows[i][col].is_zero() {
                let f = rows[i][col].clone() / &rows[r][col];
                let pivot = rows[r].clone();
                for (x, p) in rows[i][col..].iter_mut().zip(&pivot[col..]) {
                    *x -= p * &f;
                }
            }
        }
        r += 1;
    }
    r
}

#[test]
fn dsw_scales_every_commutator_exhaustively() {
    for m in 1..=6 {
        for idx in 0..3usize.pow(m as u32) {
            let leaves: Vec<Generator> = (0..m)
                .map(|i| Generator::new((idx / 3usize.pow(i as u32)) % 3))
                .collect();
            let p = expand_lie(&LieExpr::bracket(&leaves, int(1)));
            let r = dsw_bracketing(&p).unwrap();
            assert_eq!(expand_lie(&r), p.scale(&int(m as i64)), "{leaves:?}");
        }
    }
}

#[test]
fn bases_expand_injectively() {
    for m in 2..=8 {
        let report = identity_report(m).unwrap();
        let polys: Vec<AssocPoly> = report.basis.iter().map(expand_nested).collect();
        assert_eq!(rank(&polys), report.basis.len(), "grade {m}");
        let all: Vec<AssocPoly> = enumerate_nested(m)
            .unwrap()
            .entries()
            .iter()
            .map(expand_nested)
            .collect();
        assert_eq!(rank(&all), report.basis.len(), "grade {m} span");
    }
}

#[test]
fn oracle_triangle_through_grade_8() {
    for m in 1..=8 {
        let words = expand_lie(&phi_m(m, 2));
        assert_eq!(words, expand_lie(&dynkin_phi_m(m)), "grade {m}");
        assert_eq!(words, log_product_words(m, 2), "grade {m}");
    }
    for m in 1..=5 {
        assert_eq!(
            expand_lie(&phi_m(m, 3)),
            log_product_words(m, 3),
            "grade {m}"
        );
    }
}

#[test]
fn swap_symmetry_and_parity() {
    let swap = Substitution::swap_two();
    let negate = Substitution::uniform(2, int(-1)).unwrap();
    for m in 1..=7 {
        let phi = phi_m(m, 2);
        let sign = if m % 2 == 1 { int(1) } else { int(-1) };
        // log(e^Y e^X) = -log(e^-X e^-Y)
        assert_eq!(
            expand_lie(&scale_substitute(&phi, &swap).unwrap()),
            expand_lie(&phi).scale(&sign),
            "grade {m}"
        );
        let psi = sym_bch_m(m);
        assert_eq!(
            expand_lie(&scale_substitute(&psi, &negate).unwrap()),
            expand_lie(&psi).scale(&int(-1)),
            "grade {m}"
        );
        if m % 2 == 0 {
            assert!(psi.is_zero(), "grade {m}");
        }
    }
}

#[test]
fn symmetric_routes_agree() {
    for m in 1..=7 {
        assert_eq!(
            expand_lie(&sym_bch_m(m)),
            expand_lie(&sym_bch_via_three_variables(m).unwrap()),
            "grade {m}"
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn canonicalize_is_idempotent(
        leaves in prop::collection::vec(generators(3), 1..8),
        k in coefficient(),
    ) {
        if let Some((c, k1)) = canonicalize(&leaves, k.clone()) {
            prop_assert_eq!(canonicalize(c.leaves(), k1.clone()), Some((c.clone(), k1.clone())));
            let raw = expand_lie(&LieExpr::bracket(&leaves, int(1))).scale(&k);
            prop_assert_eq!(expand_nested(&c).scale(&k1), raw);
        } else {
            prop_assert!(expand_lie(&LieExpr::bracket(&leaves, int(1))).is_zero());
        }
    }

    #[test]
    fn jacobi_expands_to_zero(
        prefix in prop::collection::vec(generators(3), 0..4),
        abc in prop::collection::vec(generators(3), 3),
    ) {
        let (a, b, c) = (abc[0], abc[1], abc[2]);
        let mut sum = LieExpr::zero();
        for tail in [[a, b, c], [b, c, a], [c, a, b]] {
            let mut leaves = prefix.clone();
            leaves.extend_from_slice(&tail);
            sum = sum.add(&LieExpr::bracket(&leaves, int(1)));
        }
        prop_assert!(expand_lie(&sum).is_zero());
    }

    #[test]
    fn dsw_on_random_lie_polynomials(
        (m, ks) in (2usize..=6).prop_flat_map(|m| (Just(m), prop::collection::vec(-4i64..=4, 1 << (m - 2))))
    ) {
        let list = enumerate_nested(m).unwrap();
        let e: LieExpr = list.entries().iter().cloned().zip(ks.into_iter().map(int)).collect();
        let p = expand_lie(&e);
        prop_assert_eq!(expand_lie(&dsw_bracketing(&p).unwrap()), p.scale(&int(m as i64)));
    }

    #[test]
    fn basis_combinations_never_vanish(
        (m, ks) in (2usize..=8).prop_flat_map(|m| {
            let dim = identity_report(m).unwrap().basis.len();
            (Just(m), prop::collection::vec(-3i64..=3, dim))
        })
    ) {
        let report = identity_report(m).unwrap();
        let e: LieExpr = report.basis.iter().cloned().zip(ks.into_iter().map(int)).collect();
        prop_assert_eq!(e.is_zero(), expand_lie(&e).is_zero());
    }
}

macro_rules! rewrite_preserves {
    ($name:ident, $m:expr) => {
        proptest! {
            #![proptest_config(ProptestConfig::with_cases(100))]
            #[test]
            fn $name(e in lie_poly($m)) {
                let words = expand_lie(&e);
                let report = identity_report($m).unwrap();
                let rewritten = report.rewrite_system().apply(&e).unwrap();
                prop_assert_eq!(expand_lie(&rewritten), words.clone());
                prop_assert!(rewritten.iter().all(|(c, _)| report.basis.contains(c)));
                for regime in [Regime::Grade4, Regime::Grade6, Regime::Full] {
                    prop_assert_eq!(expand_lie(&reduce(&e, $m, regime).unwrap()), words.clone());
                }
            }
        }
    };
}

rewrite_preserves!(rewrite_preserves_grade_2, 2);
rewrite_preserves!(rewrite_preserves_grade_3, 3);
rewrite_preserves!(rewrite_preserves_grade_4, 4);
rewrite_preserves!(rewrite_preserves_grade_5, 5);
rewrite_preserves!(rewrite_preserves_grade_6, 6);
rewrite_preserves!(rewrite_preserves_grade_7, 7);

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn compact_never_grows(e in (4usize..=7).prop_flat_map(lie_poly)) {
        let Some(m) = e.grade().unwrap() else {
            return Ok(());
        };
        let report = identity_report(m).unwrap();
        let full = report.rewrite_system().apply(&e).unwrap();
        let c = compact_reduce(&e, m).unwrap();
        prop_assert_eq!(expand_lie(&c), expand_lie(&e));
        prop_assert!(c.len() <= full.len());
        prop_assert!(c.len() <= e.len());
    }
}

#[test]
fn generator_terms_survive_reduction() {
    let x = LieExpr::generator(Generator::X);
    assert_eq!(reduce(&x, 1, Regime::Compact).unwrap(), x);
    let c = NestedComm::from_canonical(vec![Generator::X, Generator::Y]).unwrap();
    let e = LieExpr::term(c, rat(1, 2));
    assert_eq!(reduce(&e, 2, Regime::Full).unwrap(), e);
}
