//! End-to-end acceptance checks. Each criterion prints one PASS or FAIL line;
//! the run exits nonzero if any gated criterion fails. Targets that are reported but
//! not gated appear in the detail text of their line.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use bch_core::bch::sym_bch_via_three_variables;
use bch_core::rational::{int, rat};
use bch_core::{
    compact_reduce, dimension_row, dsw_bracketing, dynkin_phi_m, enumerate_nested, expand_lie,
    identity_report, log_product_words, phi_m, reduce, scale_substitute, series_term,
    split_identities, sym_bch_from, sym_bch_m, table_counts, Generator, LieExpr, Rational, Regime,
    Substitution, Variant,
};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn leaves(word: &str) -> Vec<Generator> {
    word.chars()
        .map(|c| if c == 'X' { Generator::X } else { Generator::Y })
        .collect()
}

fn flat(terms: &[(i64, &str)]) -> LieExpr {
    let mut e = LieExpr::zero();
    for &(k, w) in terms {
        e.add_raw(&leaves(w), int(k));
    }
    e
}

fn row(m: usize, e: &LieExpr) -> Vec<Rational> {
    let list = enumerate_nested(m).unwrap();
    let mut r = vec![Rational::zero(); list.len()];
    for (c, k) in e.iter() {
        r[list.index_of(c).unwrap()] += k;
    }
    r
}

fn rank(mut rows: Vec<Vec<Rational>>) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for col in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
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

fn matrix(rows: &[[i64; 16]]) -> Vec<Vec<Rational>> {
    rows.iter()
        .map(|r| r.iter().map(|&x| int(x)).collect())
        .collect()
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    for m in 1..=8 {
        let words = expand_lie(&phi_m(m, 2));
        ensure(
            words == expand_lie(&dynkin_phi_m(m)),
            format!("Dynkin form differs at m={m}"),
        )?;
        ensure(
            words == log_product_words(m, 2),
            format!("log product differs at m={m}"),
        )?;
    }
    let t = start.elapsed();
    ensure(t <= Duration::from_secs(60), format!("took {t:?}"))?;
    Ok(format!("m=1..8 agree termwise in {t:.2?}"))
}

fn row_criterion(regime: Regime, expected: [usize; 9], limit: Option<Duration>) -> Outcome {
    let start = Instant::now();
    let counts = table_counts(10, regime, Variant::Plain).map_err(|e| e.to_string())?;
    let t = start.elapsed();
    ensure(
        counts == expected,
        format!("got {counts:?}, expected {expected:?}"),
    )?;
    if let Some(limit) = limit {
        ensure(t <= limit, format!("took {t:?}"))?;
    }
    Ok(format!("{counts:?} in {t:.2?}"))
}

fn criterion_5() -> Outcome {
    let dims = dimension_row(10).map_err(|e| e.to_string())?;
    let expected = vec![1, 2, 3, 6, 9, 18, 30, 56, 99];
    ensure(dims == expected, format!("got {dims:?}"))?;
    for m in 2..=10 {
        let r = identity_report(m).unwrap();
        ensure(
            r.identities.len() + r.basis.len() == 1 << (m - 2),
            format!("identities and basis do not cover the commutators at m={m}"),
        )?;
    }
    Ok(format!("{dims:?}"))
}

fn criterion_6() -> Outcome {
    let augmented = matrix(&[
        [1, -3, 0, 3, 0, 0, -1, 0, 0, 0, 0, 0, 1, 0, 0, 0],
        [0, 0, -1, 0, 2, 0, 0, -2, 0, 1, 0, 0, 0, 1, 0, 0],
        [0, 0, -1, 0, 2, 0, 0, -2, 0, 1, 0, 0, 0, 0, 1, 0],
        [0, 0, 0, 0, 0, 1, 0, 0, -3, 0, 3, -1, 0, 0, 0, 1],
    ]);
    let reduced = matrix(&[
        [1, -3, 0, 3, 0, 0, -1, 0, 0, 0, 0, 0, 1, 0, 0, 0],
        [0, 0, 1, 0, -2, 0, 0, 2, 0, -1, 0, 0, 0, 0, -1, 0],
        [0, 0, 0, 0, 0, 1, 0, 0, -3, 0, 3, -1, 0, 0, 0, 1],
        [0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, -1, 0],
    ]);
    let r = identity_report(4).unwrap();
    ensure(
        r.augmented.rows() == augmented.as_slice(),
        format!("(A|I) differs:\n{}", r.augmented),
    )?;
    ensure(
        r.reduced.rows() == reduced.as_slice(),
        format!("(M|P) differs:\n{}", r.reduced),
    )?;
    let expected = flat(&[(1, "YXXY"), (-1, "XYXY")]);
    ensure(
        r.identities == vec![expected.clone()],
        "identity list differs",
    )?;
    let shown = expected.to_string();
    ensure(
        shown == "[Y,[X,[X,Y]]] - [X,[Y,[X,Y]]]",
        format!("rendered as {shown}"),
    )?;
    Ok(format!("4x16 matrices match; identity {shown} = 0"))
}

fn criterion_7() -> Outcome {
    let published = [
        flat(&[(1, "XXXYXY"), (-2, "XYXXXY"), (1, "YXXXXY")]),
        flat(&[(1, "XXYYXY"), (3, "YXXYXY"), (-3, "XYXYXY"), (-1, "YYXXXY")]),
        flat(&[(1, "YYXYXY"), (-2, "YXYYXY"), (1, "XYYYXY")]),
    ];
    for p in &published {
        ensure(
            expand_lie(p).is_zero(),
            "a published identity does not vanish",
        )?;
    }
    let engine = split_identities(6).map_err(|e| e.to_string())?.new;
    let rp: Vec<_> = published.iter().map(|e| row(6, e)).collect();
    let re: Vec<_> = engine.iter().map(|e| row(6, e)).collect();
    let both: Vec<_> = rp.iter().chain(&re).cloned().collect();
    let (a, b, c) = (rank(rp), rank(re), rank(both));
    ensure(
        a == 3 && b == 3 && c == 3,
        format!("ranks published {a}, engine {b}, joint {c}"),
    )?;
    Ok("engine's 3 new grade-6 identities span the published 3-dimensional space".into())
}

fn criterion_8() -> Outcome {
    for m in [2, 4, 6, 8] {
        let psi = sym_bch_m(m);
        ensure(psi.is_zero(), format!("Psi_{m} has {} terms", psi.len()))?;
    }
    for m in [1, 3, 5, 7] {
        let via = sym_bch_via_three_variables(m).map_err(|e| e.to_string())?;
        ensure(
            expand_lie(&sym_bch_m(m)) == expand_lie(&via),
            format!("routes differ at m={m}"),
        )?;
    }
    Ok("even grades vanish; odd grades match Phi(X/2, Y, X/2)".into())
}

fn criterion_9() -> Outcome {
    let mut inputs = vec![LieExpr::zero()];
    for j in 1..=9 {
        inputs.push(reduce(&phi_m(j, 2), j, Regime::Compact).map_err(|e| e.to_string())?);
    }
    let raw = sym_bch_from(9, |j| inputs[j].clone());
    let full = reduce(&raw, 9, Regime::Full).map_err(|e| e.to_string())?;
    let compact = series_term(9, Variant::Symmetric, Regime::Compact).map_err(|e| e.to_string())?;
    ensure(
        expand_lie(&raw) == expand_lie(&sym_bch_m(9)),
        "route changes Psi_9",
    )?;
    ensure(
        expand_lie(&full) == expand_lie(&raw),
        "full regime changes Psi_9",
    )?;
    ensure(
        expand_lie(&compact) == expand_lie(&raw),
        "compact form changes Psi_9",
    )?;
    ensure(
        raw.len() <= 52,
        format!("{} terms before reduction", raw.len()),
    )?;
    ensure(
        full.len() <= 52,
        format!("{} terms after full regime", full.len()),
    )?;
    let target = if compact.len() <= 42 {
        "attained"
    } else {
        "not attained"
    };
    Ok(format!(
        "{} before reduction, {} after full regime, {} compact; target 42 {target}",
        raw.len(),
        full.len(),
        compact.len()
    ))
}

fn criterion_10() -> Outcome {
    let grade6 = [1, 2, 1, 6, 4, 18, 17, 67, 65];
    let published = [1, 2, 1, 6, 4, 18, 13, 38, 52];
    let mut counts = Vec::new();
    for m in 2..=10 {
        let phi = phi_m(m, 2);
        let c = compact_reduce(&phi, m).map_err(|e| e.to_string())?;
        ensure(
            expand_lie(&c) == expand_lie(&phi),
            format!("element changed at m={m}"),
        )?;
        counts.push(c.len());
    }
    for (i, (&c, &g)) in counts.iter().zip(&grade6).enumerate() {
        ensure(c <= g, format!("m={} has {c} terms, above {g}", i + 2))?;
    }
    let status: Vec<String> = [8usize, 9, 10]
        .iter()
        .map(|&m| {
            let (c, p) = (counts[m - 2], published[m - 2]);
            let word = match c.cmp(&p) {
                std::cmp::Ordering::Equal => "attained",
                std::cmp::Ordering::Less => "beaten",
                std::cmp::Ordering::Greater => "not attained",
            };
            format!("m={m}: {c} vs {p} {word}")
        })
        .collect();
    Ok(format!("{counts:?}; {}", status.join(", ")))
}

fn criterion_11() -> Outcome {
    // DSW, exhaustively over right-nested brackets in three letters
    for m in 1..=6 {
        for idx in 0..3usize.pow(m as u32) {
            let l: Vec<Generator> = (0..m)
                .map(|i| Generator::new((idx / 3usize.pow(i as u32)) % 3))
                .collect();
            let p = expand_lie(&LieExpr::bracket(&l, int(1)));
            let r = dsw_bracketing(&p).map_err(|e| e.to_string())?;
            ensure(
                expand_lie(&r) == p.scale(&int(m as i64)),
                format!("DSW fails on {l:?}"),
            )?;
        }
    }
    // Jacobi under every prefix of length at most two
    let gens = [Generator::new(0), Generator::new(1), Generator::new(2)];
    for prefix_len in 0..=2 {
        for p in 0..3usize.pow(prefix_len) {
            let prefix: Vec<Generator> = (0..prefix_len)
                .map(|i| gens[(p / 3usize.pow(i)) % 3])
                .collect();
            for t in 0..27 {
                let (a, b, c) = (gens[t % 3], gens[(t / 3) % 3], gens[t / 9]);
                let mut sum = LieExpr::zero();
                for tail in [[a, b, c], [b, c, a], [c, a, b]] {
                    let mut l = prefix.clone();
                    l.extend_from_slice(&tail);
                    sum = sum.add(&LieExpr::bracket(&l, int(1)));
                }
                ensure(expand_lie(&sum).is_zero(), "Jacobi sum does not vanish")?;
            }
        }
    }
    // parity and swap symmetry
    let swap = Substitution::swap_two();
    let negate = Substitution::uniform(2, int(-1)).unwrap();
    for m in 1..=7 {
        let phi = phi_m(m, 2);
        let sign = int(if m % 2 == 1 { 1 } else { -1 });
        let swapped = scale_substitute(&phi, &swap).map_err(|e| e.to_string())?;
        ensure(
            expand_lie(&swapped) == expand_lie(&phi).scale(&sign),
            format!("swap fails at m={m}"),
        )?;
        let psi = sym_bch_m(m);
        let neg = scale_substitute(&psi, &negate).map_err(|e| e.to_string())?;
        ensure(
            expand_lie(&neg) == expand_lie(&psi).scale(&int(-1)),
            format!("parity fails at m={m}"),
        )?;
    }
    // rewriting keeps the word expansion
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for m in 2..=7 {
        let report = identity_report(m).unwrap();
        for _ in 0..100 {
            let mut e = LieExpr::zero();
            for _ in 0..rng.gen_range(1..12) {
                let l: Vec<Generator> = (0..m)
                    .map(|_| Generator::new(rng.gen_range(0..2)))
                    .collect();
                e.add_raw(&l, rat(rng.gen_range(-9..=9), rng.gen_range(1..=8)));
            }
            let words = expand_lie(&e);
            let rewritten = report
                .rewrite_system()
                .apply(&e)
                .map_err(|e| e.to_string())?;
            ensure(
                expand_lie(&rewritten) == words,
                format!("rewrite changes an element at m={m}"),
            )?;
            for regime in [Regime::Grade4, Regime::Grade6, Regime::Full] {
                let r = reduce(&e, m, regime).map_err(|e| e.to_string())?;
                ensure(
                    expand_lie(&r) == words,
                    format!("{regime} changes an element at m={m}"),
                )?;
            }
        }
    }
    Ok("DSW m<=6, Jacobi, parity and swap m<=7, 600 random rewrites".into())
}

fn main() {
    type Check = Box<dyn Fn() -> Outcome>;
    let criteria: Vec<(u32, &str, Check)> = vec![
        (1, "oracle triangle", Box::new(criterion_1)),
        (
            2,
            "no-identities row",
            Box::new(|| {
                row_criterion(
                    Regime::None,
                    [1, 2, 1, 8, 7, 32, 31, 96, 97],
                    Some(Duration::from_secs(300)),
                )
            }),
        ),
        (
            3,
            "grade-4 row",
            Box::new(|| row_criterion(Regime::Grade4, [1, 2, 1, 6, 5, 24, 23, 78, 78], None)),
        ),
        (
            4,
            "grade-6 row",
            Box::new(|| row_criterion(Regime::Grade6, [1, 2, 1, 6, 4, 18, 17, 67, 65], None)),
        ),
        (5, "basis dimensions", Box::new(criterion_5)),
        (6, "grade-4 elimination fixture", Box::new(criterion_6)),
        (7, "grade-6 identity span", Box::new(criterion_7)),
        (8, "symmetric series", Box::new(criterion_8)),
        (9, "Psi_9 counts", Box::new(criterion_9)),
        (10, "compact heuristic", Box::new(criterion_10)),
        (11, "property checks", Box::new(criterion_11)),
    ];
    let mut failed = Vec::new();
    for (n, name, check) in &criteria {
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        match result {
            Ok(detail) => println!("criterion {n:>2} PASS  {name}: {detail}"),
            Err(why) => {
                println!("criterion {n:>2} FAIL  {name}: {why}");
                failed.push(*n);
            }
        }
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
