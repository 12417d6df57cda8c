//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each,
//! and exits nonzero if any failed. Built with `harness = false` so the lines
//! reach the console under a plain `cargo test`.

use std::time::{Duration, Instant};

use baercheck::group::{classify_quaternion_structure, QuaternionStructure};
use baercheck::lemma_a::{lemma_a_campaign, LemmaAOutcome, SubgroupMode};
use baercheck::matgroup::{sylow2_gl, sylow2_gl2, verify_sylowtwoingln};
use baercheck::part_arith::{geom_sum, gl_order_two_part};
use baercheck::plane::SpectrumTag;
use baercheck::report::Verdict;
use baercheck::suites;
use baercheck::tower::random_identity_campaign;
use num_bigint::BigUint;

type Check = Result<String, String>;

const CAP: usize = baercheck::group::DEFAULT_CLOSURE_CAP;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn e<E: std::fmt::Display>(err: E) -> String {
    err.to_string()
}

fn c01_sylow_gl2_7() -> Check {
    let d = sylow2_gl2(7).map_err(e)?;
    ensure(d.group.order() == 32, format!("order {}", d.group.order()))?;
    ensure(d.census.total == 9, format!("{} involutions", d.census.total))?;
    Ok("order 32, 9 involutions".into())
}

fn c02_sylow_gl2_31() -> Check {
    let d = sylow2_gl2(31).map_err(e)?;
    let c = &d.census;
    ensure(
        (d.group.order(), c.total, c.central) == (128, 33, 1),
        format!("order {}, {} involutions, {} central", d.group.order(), c.total, c.central),
    )?;
    Ok("order 128, 33 involutions, 1 central".into())
}

fn c03_statement_three() -> Check {
    let mut seen = Vec::new();
    for q in [7u64, 19, 31] {
        let r = verify_sylowtwoingln(3, 2, q, CAP).map_err(e)?;
        let d = sylow2_gl2(q).map_err(e)?;
        let (total, noncentral) = (d.census.total, d.census.total - d.census.central);
        ensure(r.verdict == Verdict::Verified, format!("q={q}: {}", r.verdict.as_str()))?;
        ensure(total <= q + 2 && noncentral <= q + 1, format!("q={q}: {total}/{noncentral}"))?;
        seen.push(format!("q={q}: {total}"));
    }
    Ok(seen.join(", "))
}

fn c04_statement_one_arithmetic() -> Check {
    let mut n_checked = 0;
    for q in [19u64, 31] {
        for n in 3..=6u32 {
            if (q, n) == (31, 4) {
                continue;
            }
            let lhs = gl_order_two_part(n, q).map_err(e)?;
            let rhs = geom_sum(q, n).map_err(e)?;
            ensure(lhs < rhs, format!("(n,q)=({n},{q}): {lhs} >= {rhs}"))?;
            let r = verify_sylowtwoingln(1, n as usize, q, CAP).map_err(e)?;
            ensure(r.verdict == Verdict::Verified, format!("statement 1 at ({n},{q})"))?;
            n_checked += 1;
        }
    }
    Ok(format!("{n_checked} pairs"))
}

fn c05_statement_two_census() -> Check {
    let d = sylow2_gl(4, 31).map_err(e)?;
    let bound = 31u64.pow(3) + 31 * 31 + 31 + 1;
    ensure(bound == 30784, "bound arithmetic")?;
    ensure(d.group.order() == 32768, format!("order {}", d.group.order()))?;
    ensure(d.census.total < bound, format!("{} involutions", d.census.total))?;
    Ok(format!("{} involutions < 30784", d.census.total))
}

fn c06_gl4_7() -> Check {
    let base = sylow2_gl2(7).map_err(e)?;
    let oracle = (base.census.total + 1).pow(2) - 1 + base.group.order() as u64;
    let d = sylow2_gl(4, 7).map_err(e)?;
    ensure(d.group.order() == 2048, format!("order {}", d.group.order()))?;
    ensure(oracle == 131, format!("wreath formula gives {oracle}"))?;
    ensure(d.census.total == oracle, format!("enumeration gives {}", d.census.total))?;
    let bound = geom_sum(7u32, 4).map_err(e)?;
    ensure(BigUint::from(d.census.total) < bound, "statement 4 bound")?;
    let r = verify_sylowtwoingln(4, 4, 7, CAP).map_err(e)?;
    ensure(r.verdict == Verdict::Verified, "statement 4 verdict")?;
    Ok("order 2048, 131 involutions < 400".into())
}

fn c07_identity_campaign() -> Check {
    let r = random_identity_campaign(2024, 200).map_err(e)?;
    ensure(r.verdict == Verdict::Verified, format!("verdict {}", r.verdict.as_str()))?;
    let violated = r.counts.get("violated").copied().unwrap_or(0);
    let verified = r.counts.get("verified").copied().unwrap_or(0);
    ensure(violated == 0, format!("{violated} failures"))?;
    Ok(format!("{verified} verified of 200"))
}

fn c08_counting() -> Check {
    let r = suites::counting_report(9).map_err(e)?;
    ensure(r.verdict == Verdict::Verified, "verdict")?;
    ensure(r.counts["ratio"] == 7, format!("ratio {}", r.counts["ratio"]))?;
    ensure(r.counts["frobenius_fixed_points"] == 13, "fixed points")?;
    ensure(r.params["frobenius_subplane_order"] == 3, "subplane order")?;
    let tag = serde_json::to_value(SpectrumTag::BaerSubplane).unwrap();
    ensure(r.params["spectrum"] == tag, "spectrum tag")?;
    Ok("ratio 7, 13 fixed points, subplane of order 3".into())
}

fn c09_fixtrans() -> Check {
    let reports = suites::fixtrans_suite().map_err(e)?;
    ensure(reports.len() >= 10, format!("{} instances", reports.len()))?;
    ensure(reports.iter().all(|r| r.verdict == Verdict::Verified), "an equivalence failed")?;
    let sides: Vec<bool> = reports
        .iter()
        .map(|r| r.params["normalizer_transitive_on_fix"].as_bool().unwrap_or(false))
        .collect();
    ensure(sides.contains(&true) && sides.contains(&false), "one truth value missing")?;
    let falses = sides.iter().filter(|&&s| !s).count();
    Ok(format!("{} instances, {} false", reports.len(), falses))
}

fn c10_lemma_a_exhaustive() -> Check {
    let (r, rows) = lemma_a_campaign(2, 7, SubgroupMode::Exhaustive, 1).map_err(e)?;
    ensure(r.verdict == Verdict::Verified, format!("verdict {}", r.verdict.as_str()))?;
    ensure(r.params["truncated"] == false, "lattice truncated")?;
    let even: Vec<_> = rows.iter().filter(|v| v.order % 2 == 0).collect();
    ensure(
        even.iter().all(|v| v.outcome == LemmaAOutcome::Satisfied && v.index_part.unwrap_or(u64::MAX) <= 8),
        "an even-order class exceeds 8",
    )?;
    ensure(r.params["two_dim_ceiling_holds"] == true, "ceiling q+1")?;
    Ok(format!(
        "{} classes, {} even, max part {}",
        rows.len(),
        even.len(),
        r.counts["max_index_part"]
    ))
}

fn c11_lemma_a_sampled() -> Check {
    let mut out = Vec::new();
    for (n, q) in [(2usize, 13u64), (3, 7)] {
        let (r, rows) = lemma_a_campaign(n, q, SubgroupMode::Random { target: 1000 }, 11).map_err(e)?;
        ensure(rows.len() >= 1000, format!("GL_{n}({q}): {} subgroups", rows.len()))?;
        ensure(r.verdict == Verdict::Verified, format!("GL_{n}({q}): {}", r.verdict.as_str()))?;
        ensure(rows.iter().all(|v| v.outcome != LemmaAOutcome::Violated), "violation")?;
        out.push(format!("GL_{n}({q}): {}", rows.len()));
    }
    Ok(out.join(", "))
}

fn c12_two_rank() -> Check {
    let reports = suites::two_rank_suite().map_err(e)?;
    ensure(reports.iter().all(|r| r.verdict == Verdict::Verified), "mismatch")?;
    let names: Vec<&str> = reports.iter().map(|r| r.params["group"].as_str().unwrap()).collect();
    for needed in ["C32", "D16", "Q16", "SD32", "V4xC2", "Sylow2(SL2(7))", "Sylow2(GL2(7))"] {
        ensure(names.contains(&needed), format!("{needed} missing"))?;
    }
    Ok(format!("{} groups", reports.len()))
}

fn c13_structure() -> Check {
    let q16 = classify_quaternion_structure(&baercheck::group::families::quaternion(16)).map_err(e)?;
    ensure(q16 == QuaternionStructure::TwoGroup, format!("Q16 -> {q16:?}"))?;
    let sl = classify_quaternion_structure(&suites::sl2(7).map_err(e)?).map_err(e)?;
    ensure(sl == QuaternionStructure::SL2qD { q: 7, d: 1 }, format!("SL2(7) -> {sl:?}"))?;
    let r = suites::odd_transitive_report(9).map_err(e)?;
    ensure(r.verdict == Verdict::Verified, "no odd transitive witness")?;
    let w = r.counts["witness_order"];
    ensure(w % 2 == 1 && 273 % w == 0, format!("witness order {w}"))?;
    Ok(format!("odd transitive witness of order {w}"))
}

fn c14_sn_bounds() -> Check {
    let reports = suites::sn_bounds_suite().map_err(e)?;
    ensure(reports.len() >= 10, "too few groups")?;
    ensure(reports.iter().all(|r| r.verdict == Verdict::Verified), "a bound failed")?;
    ensure(reports.iter().all(|r| r.params["n"].as_u64().unwrap_or(99) <= 13), "degree > 13")?;
    let odd = reports.iter().filter(|r| r.lemma_id == "oddsn").count();
    Ok(format!("{} groups ({odd} odd)", reports.len()))
}

fn main() {
    let criteria: [(u32, &str, u64, fn() -> Check); 14] = [
        (1, "Sylow 2-subgroup of GL_2(7)", 1, c01_sylow_gl2_7),
        (2, "Sylow 2-subgroup of GL_2(31)", 5, c02_sylow_gl2_31),
        (3, "two-dimensional involution bounds, q = 7, 19, 31", 10, c03_statement_three),
        (4, "2-part of |GL_n(q)| below q^{n-1}+...+1", 1, c04_statement_one_arithmetic),
        (5, "GL_4(31) Sylow 2-subgroup census", 60, c05_statement_two_census),
        (6, "GL_4(7) census against the wreath formula", 10, c06_gl4_7),
        (7, "seeded identity campaign, 200 instances", 120, c07_identity_campaign),
        (8, "counting ratio on PG(2,9)", 60, c08_counting),
        (9, "fixed-point transitivity criterion", 120, c09_fixtrans),
        (10, "exhaustive involution index bound in GL_2(7)", 600, c10_lemma_a_exhaustive),
        (11, "sampled involution index bound in GL_2(13), GL_3(7)", 1200, c11_lemma_a_sampled),
        (12, "two-rank one iff cyclic or generalized quaternion", 10, c12_two_rank),
        (13, "structure recognition and odd transitive subgroup", 60, c13_structure),
        (14, "primitive permutation group bounds", 60, c14_sn_bounds),
    ];
    let mut failed = 0;
    for (id, name, limit, check) in criteria {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let within = elapsed <= Duration::from_secs(limit);
        match (&result, within) {
            (Ok(detail), true) => {
                println!("PASS [{id:02}] {name}: {detail} ({:.2}s)", elapsed.as_secs_f64())
            }
            (Ok(detail), false) => {
                failed += 1;
                println!("FAIL [{id:02}] {name}: {detail}, but took {:.2}s > {limit}s", elapsed.as_secs_f64())
            }
            (Err(why), _) => {
                failed += 1;
                println!("FAIL [{id:02}] {name}: {why} ({:.2}s)", elapsed.as_secs_f64())
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 14 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
