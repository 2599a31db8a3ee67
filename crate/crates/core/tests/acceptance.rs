//! Acceptance suite: one line per criterion, non-zero exit if any fails.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use nilcent::algebra::{Field, Mat2Trunc, Poly, PrimeField, Rationals, TruncatedPoly};
use nilcent::centralizer::{s_closed_form, s_sequence};
use nilcent::enumerator::{enumerate, CaseId, CaseParams, Enumeration, FieldMode};
use nilcent::oracle::{cross_check_with, OracleMode, ScanOptions};
use nilcent::witness::{
    build, case11_even_applies, case11_even_rank, case11_odd_rank, case12a_applies, case12a_rank,
    complex_demo, find_special_u, WitnessRecipe,
};
use nilcent::{Error, Partition};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TABLE_N6: &str = include_str!("../../cli/tests/golden/table_n6.txt");
const TABLE_N7: &str = include_str!("../../cli/tests/golden/table_n7.txt");

enum Outcome {
    Pass(String),
    Fail(String),
    /// A documented counterexample to the completeness guarantee.
    ExpectedFail(String),
}

type Check = std::result::Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn p(s: &str) -> Partition {
    s.parse().expect("partition literal")
}

/// Parses `(P1) (12), (6^2), ...` lines into `(row, partitions)`.
fn parse_table(text: &str) -> Vec<(CaseId, Vec<Partition>)> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|line| {
            let (head, rest) = line.split_once(')').expect("row label");
            let id: CaseId = head.trim_start_matches('(').parse().expect("row id");
            let mut parts = Vec::new();
            for chunk in rest.split("),") {
                let chunk = chunk.trim().trim_end_matches(')');
                if !chunk.is_empty() {
                    parts.push(p(&format!("{chunk})")));
                }
            }
            (id, parts)
        })
        .collect()
}

fn has_case(e: &Enumeration, part: &str, want: impl Fn(&CaseParams) -> bool) -> bool {
    e.get(&p(part)).is_some_and(|c| c.provenance.iter().any(want))
}

fn zml(c: &CaseParams, id: CaseId, z: usize, m: usize, l: Option<usize>, t: Option<usize>) -> bool {
    c.id == id && c.z == Some(z) && c.m == Some(m) && (l.is_none() || c.l == l) && (t.is_none() || c.t == t)
}

fn table_matches(n: usize, text: &str) -> Check {
    let e = enumerate(n, FieldMode::ClosedChar0).map_err(|e| e.to_string())?;
    let expected = parse_table(text);
    let want: BTreeSet<Partition> = expected.iter().flat_map(|(_, v)| v.iter().cloned()).collect();
    let got = e.partitions();
    ensure(got == want, || {
        format!(
            "extra {:?}, missing {:?}",
            got.difference(&want).map(|x| x.to_string()).collect::<Vec<_>>(),
            want.difference(&got).map(|x| x.to_string()).collect::<Vec<_>>()
        )
    })?;
    for ((id, rows), (eid, erows)) in expected.iter().zip(e.table_rows()) {
        let erows: Vec<Partition> = erows.into_iter().cloned().collect();
        ensure(*id == eid && *rows == erows, || format!("row {id} differs"))?;
    }
    Ok(format!("{} partitions", got.len()))
}

fn criterion_1() -> Check {
    let summary = table_matches(6, TABLE_N6)?;
    let e = enumerate(6, FieldMode::ClosedChar0).map_err(|e| e.to_string())?;
    ensure(e.classes.len() == 38, || format!("{} classes", e.classes.len()))?;
    ensure(has_case(&e, "5,4,3", |c| zml(c, CaseId::P3, 0, 2, Some(3), None)), || {
        "(5,4,3) lacks P3(z=0, m=2, l=3)".into()
    })?;
    Ok(summary)
}

fn criterion_2() -> Check {
    let summary = table_matches(7, TABLE_N7)?;
    let e = enumerate(7, FieldMode::ClosedChar0).map_err(|e| e.to_string())?;
    ensure(has_case(&e, "5,3,3,3", |c| c.id == CaseId::P8), || "(5,3^3) lacks P8".into())?;
    ensure(has_case(&e, "3,3,3,3,1,1", |c| c.id == CaseId::P9), || "(3^4,1^2) lacks P9".into())?;
    Ok(summary)
}

fn criterion_3() -> Check {
    let e = enumerate(22, FieldMode::ClosedChar0).map_err(|e| e.to_string())?;
    let class = e.get(&p("(7^3,6^3,5)")).ok_or("(7^3,6^3,5) not enumerated")?;
    let guaranteed: Vec<&CaseParams> = class.provenance.iter().filter(|c| c.id.is_guaranteed()).collect();
    ensure(
        guaranteed.len() == 1 && zml(guaranteed[0], CaseId::P7, 1, 3, Some(5), None),
        || format!("P1-P7 provenance is {:?}", guaranteed.iter().map(|c| c.to_string()).collect::<Vec<_>>()),
    )?;
    Ok(format!("{} classes at n=22, (7^3,6^3,5) only via {}", e.classes.len(), guaranteed[0]))
}

fn criterion_4() -> Check {
    let e = enumerate(11, FieldMode::Finite(11)).map_err(|e| e.to_string())?;
    ensure(has_case(&e, "7,5,5,5", |c| zml(c, CaseId::P8, 0, 2, None, Some(1))), || {
        "(7,5^3) lacks P8(z=0, m=2, t=1)".into()
    })?;
    let over_q = find_special_u(5, 7, Rationals).map_err(|e| e.to_string())?;
    ensure(over_q.is_none(), || format!("rational special u {over_q:?}"))?;
    let f11 = PrimeField::new(11).map_err(|e| e.to_string())?;
    let u = find_special_u(5, 7, f11).map_err(|e| e.to_string())?.ok_or("no special u over F_11")?;
    ensure((u * u + 3 * u + 1) % 11 == 0, || format!("u={u} is not a root of u^2+3u+1"))?;
    let class = e.get(&p("7,5,5,5")).expect("checked above");
    let w = build(11, class, f11).map_err(|e| e.to_string())?;
    let ty = w.element.jordan_type().map_err(|e| e.to_string())?;
    ensure(ty == p("7,5,5,5"), || format!("witness has type {ty}"))?;
    Ok(format!("u={u} over F_11, witness verified"))
}

fn criterion_5() -> Check {
    let e = enumerate(9, FieldMode::Rationals).map_err(|e| e.to_string())?;
    ensure(has_case(&e, "5,5,5,3", |c| zml(c, CaseId::P9, 0, 2, None, Some(1))), || {
        "(5^3,3) lacks P9(z=0, m=2, t=1)".into()
    })?;
    let class = e.get(&p("5,5,5,3")).expect("checked above");
    match build(9, class, Rationals) {
        Err(Error::WitnessNotFound { attempted, .. }) => {
            Ok(format!("no rational witness ({} recipes tried)", attempted.len()))
        }
        Err(other) => Err(other.to_string()),
        Ok(w) => Err(format!("unexpected rational witness {:?}", w.recipe.to_json())),
    }
}

const ORACLE_RUNS: [(usize, u64); 6] = [(1, 2), (2, 2), (3, 2), (4, 2), (2, 3), (3, 3)];

fn criteria_6_and_7() -> (Outcome, Outcome, Duration) {
    let start = Instant::now();
    let mut unsound = Vec::new();
    let mut incomplete = Vec::new();
    for (n, prime) in ORACLE_RUNS {
        let opts = ScanOptions { threads: Some(1), ..ScanOptions::default() };
        match cross_check_with(n, prime, OracleMode::Exhaustive, opts) {
            Ok(r) => {
                if !r.sound() {
                    unsound.push(serde_json::to_string(&r).expect("report json"));
                }
                if !r.complete() {
                    incomplete.push(serde_json::to_string(&r).expect("report json"));
                }
            }
            Err(e) => unsound.push(format!("n={n}, p={prime}: {e}")),
        }
    }
    let elapsed = start.elapsed();
    let runs = format!("{} exhaustive runs", ORACLE_RUNS.len());
    let sound = if unsound.is_empty() {
        Outcome::Pass(format!("{runs}, no extras"))
    } else {
        Outcome::Fail(unsound.join("\n"))
    };
    let complete = if incomplete.is_empty() {
        Outcome::Pass(format!("{runs}, every P1-P7 class observed"))
    } else {
        Outcome::ExpectedFail(incomplete.join("\n"))
    };
    (sound, complete, elapsed)
}

fn random_poly<F: Field>(field: F, rng: &mut ChaCha8Rng) -> Poly<F> {
    let len = rng.gen_range(0..=5);
    let coeffs: Vec<i64> = (0..len).map(|_| rng.gen_range(-4..=4)).collect();
    Poly::from_i64s(field, &coeffs)
}

fn lemma_pair<F: Field>(c: &Poly<F>, d: &Poly<F>, n: usize) -> std::result::Result<(), String> {
    let field = c.field();
    let s = s_sequence(c, d, 9);
    let t = |q: &Poly<F>| q.truncate(n);
    let m = Mat2Trunc::new(TruncatedPoly::zero(field, n), TruncatedPoly::one(field, n), t(c), t(d))
        .map_err(|e| e.to_string())?;
    for k in 1..=8usize {
        let want = Mat2Trunc::new(t(&(c * s.term(k - 1))), t(s.term(k)), t(&(c * s.term(k))), t(s.term(k + 1)))
            .map_err(|e| e.to_string())?;
        ensure(m.pow(k) == want, || format!("power {k} of [[0,1],[{c:?},{d:?}]]"))?;
        if k >= 2 {
            let lhs = &(s.term(k - 1) * s.term(k + 1)) - &(s.term(k) * s.term(k));
            let sign = if k % 2 == 0 { field.one() } else { field.neg(&field.one()) };
            ensure(lhs == c.pow(k as u32 - 1).scale(&sign), || format!("determinant identity at k={k}"))?;
        }
        ensure(&s_closed_form(c, d, k) == s.term(k), || format!("closed form at k={k}"))?;
    }
    Ok(())
}

fn criterion_8() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let f5 = PrimeField::new(5).map_err(|e| e.to_string())?;
    for _ in 0..200 {
        let n = rng.gen_range(1..=12);
        lemma_pair(&random_poly(Rationals, &mut rng), &random_poly(Rationals, &mut rng), n)?;
        lemma_pair(&random_poly(f5, &mut rng), &random_poly(f5, &mut rng), n)?;
    }
    Ok("200 pairs over Q and over F_5, k <= 8".into())
}

fn criterion_9() -> Check {
    let mut built = 0;
    for n in 1..=10 {
        let e = enumerate(n, FieldMode::GuaranteedOnly).map_err(|e| e.to_string())?;
        for class in &e.classes {
            let w = build(n, class, Rationals).map_err(|e| format!("n={n}: {e}"))?;
            let ty = w.element.jordan_type().map_err(|e| e.to_string())?;
            ensure(ty == class.partition, || format!("n={n}: {} built as {ty}", class.partition))?;
            built += 1;
        }
    }
    Ok(format!("{built} witnesses verified for n <= 10"))
}

fn criterion_10() -> Check {
    let q = Rationals;
    let one = Poly::one(q);
    let mut checked = 0;
    for n in 1..=8 {
        for z in 0..n {
            for l in 1..n - z {
                for m in 1..=n - z {
                    let recipe = WitnessRecipe::Case1 { z, l, m, p: one.clone(), q: one.clone() };
                    let e = recipe.instantiate(q, n).map_err(|e| e.to_string())?;
                    let ranks = e.rank_profile().map_err(|e| e.to_string())?;
                    let rank = |k: usize| ranks.get(k).copied().unwrap_or(0);
                    let tag = format!("n={n} z={z} l={l} m={m}");
                    if l < 2 * m {
                        for k in 1..=n + 1 {
                            ensure(rank(2 * k - 1) == case11_odd_rank(n, z, l, k), || format!("{tag}: odd power {}", 2 * k - 1))?;
                            checked += 1;
                            if m <= l {
                                ensure(case11_even_applies(q, l, m, &one, &one, k), || format!("{tag}: r_{} not a unit", 2 * k))?;
                                ensure(rank(2 * k) == case11_even_rank(n, z, l, m, k), || format!("{tag}: even power {}", 2 * k))?;
                                checked += 1;
                            }
                        }
                    } else {
                        ensure(case12a_applies(q, n, z, l, m, &one, &one), || format!("{tag}: some r_k divisible by X"))?;
                        for k in 0..=2 * n + 1 {
                            ensure(rank(k) == case12a_rank(n, z, l, m, k), || format!("{tag}: power {k}"))?;
                            checked += 1;
                        }
                    }
                }
            }
        }
    }
    Ok(format!("{checked} ranks match"))
}

fn criterion_11() -> Check {
    for j in 3..=12 {
        let d = complex_demo(j, j + 1).map_err(|e| e.to_string())?;
        ensure(d.h_j_abs < 1e-9 && d.h_j_prime_abs > 1e-9, || format!("j={j}: {d:?}"))?;
    }
    Ok("3 <= j <= 12".into())
}

fn timed(f: fn() -> Check) -> (Check, Duration) {
    let start = Instant::now();
    let r = f();
    (r, start.elapsed())
}

fn within(r: Check, elapsed: Duration, limit: Duration) -> Outcome {
    match r {
        Ok(msg) if elapsed <= limit => Outcome::Pass(msg),
        Ok(msg) => Outcome::Fail(format!("{msg}, but took {elapsed:.2?} (limit {limit:?})")),
        Err(msg) => Outcome::Fail(msg),
    }
}

fn main() -> ExitCode {
    let secs = Duration::from_secs;
    let simple: [(u32, &str, fn() -> Check, Duration); 5] = [
        (1, "table reproduction (n=6)", criterion_1, secs(1)),
        (2, "table reproduction (n=7)", criterion_2, secs(1)),
        (3, "n=22 spot check (7^3,6^3,5)", criterion_3, secs(5)),
        (4, "(7,5^3) at n=11: absent over Q, witness over F_11", criterion_4, secs(5)),
        (5, "(5^3,3) at n=9: no rational witness", criterion_5, secs(5)),
    ];
    let mut results: Vec<(u32, String, Outcome, Duration)> = Vec::new();
    for (id, name, f, limit) in simple {
        let (r, t) = timed(f);
        results.push((id, name.into(), within(r, t, limit), t));
    }
    let (sound, complete, t) = criteria_6_and_7();
    let sound = match sound {
        Outcome::Pass(m) if t > secs(60) => Outcome::Fail(format!("{m}, but took {t:.2?} (limit 60s)")),
        other => other,
    };
    results.push((6, "oracle soundness".into(), sound, t));
    results.push((7, "oracle completeness of P1-P7".into(), complete, t));
    let rest: [(u32, &str, fn() -> Check, Duration); 4] = [
        (8, "power lemma identities", criterion_8, secs(10)),
        (9, "witness totality over Q, n <= 10", criterion_9, secs(120)),
        (10, "rank formulas over Q, n <= 8", criterion_10, secs(60)),
        (11, "float special u", criterion_11, secs(1)),
    ];
    for (id, name, f, limit) in rest {
        let (r, t) = timed(f);
        results.push((id, name.into(), within(r, t, limit), t));
    }

    let mut failed = 0;
    for (id, name, outcome, t) in &results {
        let (tag, msg) = match outcome {
            Outcome::Pass(m) => ("PASS", m),
            Outcome::Fail(m) => {
                failed += 1;
                ("FAIL", m)
            }
            Outcome::ExpectedFail(m) => ("XFAIL", m),
        };
        println!("criterion {id:>2} {tag:<5} {name} [{t:.2?}]: {msg}");
    }
    println!(
        "acceptance: {} passed, {failed} failed, {} expected failures",
        results.iter().filter(|r| matches!(r.2, Outcome::Pass(_))).count(),
        results.iter().filter(|r| matches!(r.2, Outcome::ExpectedFail(_))).count()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
