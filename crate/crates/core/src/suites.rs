//! Fixed instance suites shared by the command line and the acceptance tests.

use std::time::Instant;

use serde_json::json;

use crate::error::{Error, Result};
use crate::gf::field_of_order;
use crate::group::action::coset_action;
use crate::group::families::*;
use crate::group::{
    classify_quaternion_structure, closure, fitting, is_cyclic, is_generalized_quaternion, sylow_two,
    two_rank, Element, FiniteGroup, QuaternionStructure,
};
use crate::lemma_a::{primitive_test_groups, sn_bound_check, SnBound};
use crate::matgroup::sylow2_gl2;
use crate::matrix::Matrix;
use crate::perm::Perm;
use crate::plane::{
    counting_identity_check, fixed_structure, fixpoint_transitivity_check, frobenius_collineation,
    odd_transitive_search, pg2, singer_normalizer, OddSearch,
};
use crate::report::{Verdict, VerificationReport};

/// Cap on group order for the subgroup-conjugacy comparisons.
pub const FIXTRANS_CAP: usize = 50_000;

/// `SL_2(p)` for an odd prime `p`.
pub fn sl2(p: u64) -> Result<FiniteGroup<Matrix>> {
    let f = field_of_order(p)?;
    if f.degree() != 1 {
        return Err(Error::invalid("SL_2 is built over prime fields only"));
    }
    let m = |v: &[i64]| Matrix::from_ints(&f, 2, v);
    closure(&[m(&[1, 1, 0, 1])?, m(&[0, 1, -1, 0])?], 1 << 20)
}

fn rank_report<E: Element>(name: &str, p: &FiniteGroup<E>) -> Result<VerificationReport> {
    let rank = two_rank(p);
    let cyclic = is_cyclic(p);
    let gq = is_generalized_quaternion(p)?;
    let ok = (rank == 1) == (cyclic || gq);
    let mut r = VerificationReport::new("tworank", Verdict::from_bool(ok))
        .param("group", name)
        .param("cyclic", cyclic)
        .param("generalized_quaternion", gq)
        .count("order", p.order() as u64)
        .count("two_rank", rank as u64);
    if !ok {
        r = r.witness(json!({"group": name, "two_rank": rank}));
    }
    Ok(r)
}

/// Two-rank versus "Sylow 2-subgroup cyclic or generalized quaternion" over
/// a fixed family of 2-groups.
pub fn two_rank_suite() -> Result<Vec<VerificationReport>> {
    let mut out = Vec::new();
    for k in 1..=5 {
        out.push(rank_report(&format!("C{}", 1 << k), &cyclic(1 << k))?);
    }
    for order in [4, 8, 16, 32] {
        out.push(rank_report(&format!("D{order}"), &dihedral(order))?);
    }
    for order in [8, 16, 32] {
        out.push(rank_report(&format!("Q{order}"), &quaternion(order))?);
    }
    out.push(rank_report("SD32", &semidihedral(32))?);
    out.push(rank_report("SD16", &semidihedral(16))?);
    out.push(rank_report("V4xC2", &direct_product_perm(&[cyclic(2), cyclic(2), cyclic(2)]))?);
    out.push(rank_report("C4xC2", &direct_product_perm(&[cyclic(4), cyclic(2)]))?);
    out.push(rank_report("Sylow2(SL2(7))", &sylow_two(&sl2(7)?))?);
    out.push(rank_report("Sylow2(GL2(7))", &sylow2_gl2(7)?.group)?);
    Ok(out)
}

fn structure_report<E: Element>(
    name: &str,
    g: &FiniteGroup<E>,
    expected: Option<QuaternionStructure>,
) -> Result<VerificationReport> {
    let tag = classify_quaternion_structure(g)?;
    let fit = fitting(g)?;
    let ok = expected.as_ref().map_or(true, |e| *e == tag);
    let mut r = VerificationReport::new("quaternion", Verdict::from_bool(ok))
        .param("group", name)
        .param("structure", serde_json::to_value(&tag).expect("serializable"))
        .count("order", g.order() as u64)
        .count("fitting_order", fit.order() as u64);
    if let Some(e) = expected {
        r = r.param("expected", serde_json::to_value(&e).expect("serializable"));
    }
    if !ok {
        r = r.witness(json!({"group": name, "found": tag}));
    }
    Ok(r)
}

/// Structure recognition on groups with cyclic or quaternion Sylow
/// 2-subgroups, with `SL_2(q)` for the requested prime.
pub fn quaternion_suite(q: u64) -> Result<Vec<VerificationReport>> {
    let mut out = vec![
        structure_report("Q16", &quaternion(16), Some(QuaternionStructure::TwoGroup))?,
        structure_report("Q8", &quaternion(8), Some(QuaternionStructure::TwoGroup))?,
        structure_report("C8", &cyclic(8), Some(QuaternionStructure::TwoGroup))?,
        structure_report("SL2(3)", &sl2(3)?, Some(QuaternionStructure::SL2qD { q: 3, d: 1 }))?,
    ];
    if q != 3 {
        out.push(structure_report(
            &format!("SL2({q})"),
            &sl2(q)?,
            Some(QuaternionStructure::SL2qD { q, d: 1 }),
        )?);
    }
    out.push(structure_report("Dic3", &dicyclic(3), None)?);
    Ok(out)
}

/// The odd-order transitive subgroup search on the Singer normalizer of
/// `PG(2,q)`.
pub fn odd_transitive_report(q: u64) -> Result<VerificationReport> {
    let start = Instant::now();
    let g = singer_normalizer(pg2(q)?)?;
    let points = g.plane().num_points() as u64;
    let report = match odd_transitive_search(g.group()) {
        OddSearch::Witness(h) => {
            let order = h.order() as u64;
            let divides = (3 * points) % order == 0;
            VerificationReport::new("oddtransitive", Verdict::from_bool(order % 2 == 1))
                .param("q", q)
                .param("found", true)
                .param("order_divides_3N", divides)
                .count("group_order", g.order() as u64)
                .count("witness_order", order)
        }
        OddSearch::Exhausted { candidates } => VerificationReport::not_applicable(
            "oddtransitive",
            "search budget exhausted without a witness",
        )
        .param("q", q)
        .count("candidates", candidates as u64),
    };
    Ok(report.timed(start))
}

/// The counting-ratio check for the Frobenius Baer involution on `PG(2,q)`.
pub fn counting_report(q: u64) -> Result<VerificationReport> {
    let plane = pg2(q)?;
    let frob = match frobenius_collineation(&plane) {
        Ok(f) => f,
        Err(Error::InvalidArgument(msg)) => {
            return Ok(VerificationReport::not_applicable("counting", msg).param("q", q));
        }
        Err(e) => return Err(e),
    };
    let fs = fixed_structure(&plane, &frob);
    let g = singer_normalizer(plane)?;
    let report = counting_identity_check(&g, &frob)?
        .param("q", q)
        .param("frobenius_subplane_order", fs.subplane_order)
        .param("spectrum", serde_json::to_value(fs.spectrum).expect("serializable"))
        .count("frobenius_fixed_points", fs.points.len() as u64)
        .count("frobenius_fixed_lines", fs.lines.len() as u64);
    Ok(report)
}

fn fixtrans(name: &str, g: &FiniteGroup<Perm>, alpha: u32, k_gens: &[Perm]) -> Result<VerificationReport> {
    let k = g.subgroup(k_gens);
    Ok(fixpoint_transitivity_check(g, alpha, &k, FIXTRANS_CAP)?.param("instance", name))
}

fn cycles(n: usize, c: &[&[u32]]) -> Perm {
    Perm::from_cycles(n, c).expect("valid cycles")
}

/// The fixed-point transitivity criterion on collineation groups of PG(2,9)
/// and PG(2,3) and on small permutation actions.
pub fn fixtrans_suite() -> Result<Vec<VerificationReport>> {
    let mut out = Vec::new();

    let plane = pg2(9)?;
    let frob = frobenius_collineation(&plane)?;
    let g = singer_normalizer(plane)?;
    let gg = g.group();
    let stab = g.stabilizer().clone();
    out.push(fixtrans("PG(2,9): Baer involution", gg, 0, &[frob.points.clone()])?);
    out.push(fixtrans("PG(2,9): trivial", gg, 0, &[])?);
    out.push(fixtrans("PG(2,9): point stabilizer", gg, 0, stab.generators())?);
    let order3: Vec<Perm> = stab.elements().filter(|x| x.order() == 3).take(1).cloned().collect();
    out.push(fixtrans("PG(2,9): order 3 in stabilizer", gg, 0, &order3)?);

    let g3 = singer_normalizer(pg2(3)?)?;
    out.push(fixtrans("PG(2,3): point stabilizer", g3.group(), 0, g3.stabilizer().generators())?);

    // S4 on the six cosets of <(12),(34)>.
    let t = cycles(4, &[&[0, 1]]);
    let s4 = closure(&[t.clone(), cycles(4, &[&[0, 1, 2, 3]])], 100)?;
    let h = s4.subgroup(&[t, cycles(4, &[&[2, 3]])]);
    let on_cosets = coset_action(&s4, &h)?;
    let k = on_cosets.generators()[0].clone();
    out.push(fixtrans("S4 on 6 cosets: transposition", &on_cosets, 0, &[k])?);

    // A4 on the six cosets of <(12)(34)>.
    let v = cycles(4, &[&[0, 1], &[2, 3]]);
    let a4 = closure(&[v.clone(), cycles(4, &[&[0, 1, 2]])], 100)?;
    let a4_cosets = coset_action(&a4, &a4.subgroup(&[v]))?;
    let k = a4_cosets.generators()[0].clone();
    out.push(fixtrans("A4 on 6 cosets: double transposition", &a4_cosets, 0, &[k])?);

    out.push(fixtrans("S4: transposition fixing 0", &symmetric(4), 0, &[cycles(4, &[&[1, 2]])])?);
    out.push(fixtrans("S5: double transposition", &symmetric(5), 0, &[cycles(5, &[&[1, 2], &[3, 4]])])?);
    out.push(fixtrans("A5: double transposition", &alternating(5), 0, &[cycles(5, &[&[1, 2], &[3, 4]])])?);
    out.push(fixtrans("S6: 3-cycle", &symmetric(6), 0, &[cycles(6, &[&[1, 2, 3]])])?);

    let psl = psl2_natural(7);
    let st = crate::group::action::stabilizer(&psl, 0);
    let inv: Vec<Perm> = st.elements().filter(|x| x.is_involution()).take(1).cloned().collect();
    out.push(fixtrans("PSL2(7) on 8 points: involution", &psl, 0, &inv)?);

    let d8 = closure(&[cycles(4, &[&[0, 1, 2, 3]]), cycles(4, &[&[1, 3]])], 100)?;
    let st = crate::group::action::stabilizer(&d8, 0);
    out.push(fixtrans("D8 on 4 points: stabilizer", &d8, 0, st.generators())?);

    let f21 = affine(7, 3);
    let st = crate::group::action::stabilizer(&f21, 0);
    out.push(fixtrans("C7:C3: stabilizer", &f21, 0, st.generators())?);
    Ok(out)
}

/// Both permutation-group bounds over the primitive test groups.
pub fn sn_bounds_suite() -> Result<Vec<VerificationReport>> {
    let mut out = Vec::new();
    for (name, g) in primitive_test_groups() {
        let kind = if g.order() % 2 == 1 { SnBound::OddOrder } else { SnBound::Involutions };
        out.push(sn_bound_check(kind, &g)?.param("group", name));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_rank_suite_is_clean() {
        let r = two_rank_suite().unwrap();
        assert!(r.iter().all(|r| r.verdict == Verdict::Verified));
        let rank_one: Vec<&str> = r
            .iter()
            .filter(|r| r.counts["two_rank"] == 1)
            .map(|r| r.params["group"].as_str().unwrap())
            .collect();
        assert_eq!(
            rank_one,
            vec!["C2", "C4", "C8", "C16", "C32", "Q8", "Q16", "Q32", "Sylow2(SL2(7))"]
        );
    }

    #[test]
    fn quaternion_suite_is_clean() {
        let r = quaternion_suite(7).unwrap();
        assert!(r.iter().all(|r| r.verdict == Verdict::Verified), "{r:?}");
    }

    #[test]
    fn fixtrans_suite_exercises_both_sides() {
        let r = fixtrans_suite().unwrap();
        assert!(r.len() >= 10);
        assert!(r.iter().all(|r| r.verdict == Verdict::Verified));
        let sides: Vec<bool> = r
            .iter()
            .map(|r| r.params["normalizer_transitive_on_fix"].as_bool().unwrap())
            .collect();
        assert!(sides.contains(&true) && sides.contains(&false));
    }

    #[test]
    fn counting_reports() {
        let r = counting_report(9).unwrap();
        assert_eq!(r.verdict, Verdict::Verified);
        assert_eq!(r.counts["ratio"], 7);
        assert_eq!(r.counts["frobenius_fixed_points"], 13);
        assert_eq!(counting_report(7).unwrap().verdict, Verdict::NotApplicable);
        assert_eq!(counting_report(4).unwrap().verdict, Verdict::Verified);
    }

    #[test]
    fn odd_transitive_on_pg2_9() {
        let r = odd_transitive_report(9).unwrap();
        assert_eq!(r.verdict, Verdict::Verified);
        assert_eq!(r.params["order_divides_3N"], json!(true));
    }
}
