//! Desk-scale certification that every even-order subgroup `H ≤ GL_n(q)`
//! has an involution `g` with `|H : C_H(g)|_{p',♥} ≤ q^{n-1} + … + q + 1`,
//! plus bound harnesses for primitive permutation groups.

pub mod lattice;
pub mod sample;
mod sn_bounds;

use std::collections::BTreeMap;
use std::hash::{Hash, Hasher};
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rustc_hash::{FxHashSet, FxHasher};
use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::group::{closure, conj_orbit, Element, FiniteGroup, DEFAULT_CLOSURE_CAP};
use crate::matgroup::GLContext;
use crate::matrix::Matrix;
use crate::part_arith::{geom_sum, heart_coprime_u64};
use crate::report::{Verdict, VerificationReport};

pub use lattice::{exhaustive_lattice, CayleyTable, Lattice, SubgroupClass, TABLE_CAP};
pub use sample::{gl_generators, singer_cycle, Family, Sampler};
pub use sn_bounds::{
    below_n_pow_log2_n, primitive_test_groups, sn_bound_check, SnBound,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum LemmaAOutcome {
    #[serde(rename = "satisfied")]
    Satisfied,
    #[serde(rename = "VIOLATED")]
    Violated,
    #[serde(rename = "odd-order-skip")]
    OddOrderSkip,
}

impl LemmaAOutcome {
    pub fn as_str(self) -> &'static str {
        match self {
            LemmaAOutcome::Satisfied => "satisfied",
            LemmaAOutcome::Violated => "VIOLATED",
            LemmaAOutcome::OddOrderSkip => "odd-order-skip",
        }
    }
}

/// Result of checking one subgroup. `index` is `|H : C_H(g)|` for the
/// involution `g` minimizing `index_part`.
#[derive(Clone, Debug, Serialize)]
pub struct LemmaAVerdict {
    pub order: u64,
    pub generators: Vec<String>,
    pub involutions: u64,
    pub involution_classes: u64,
    pub best_involution: Option<String>,
    pub index: Option<u64>,
    pub index_part: Option<u64>,
    pub bound: u64,
    pub outcome: LemmaAOutcome,
    /// On a violation: `(|H : C_H(g)|, part)` for every involution, with the
    /// index recomputed by counting the centralizer directly.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub recheck: Option<Vec<(u64, u64)>>,
}

struct Best<T> {
    rep: Option<T>,
    index: u64,
    part: u64,
    involutions: u64,
    classes: u64,
}

/// Walks the involutions class by class and keeps the one with the least
/// `p'`-heart part of its class size.
fn best_involution<T: Clone + Eq + Hash>(
    involutions: Vec<T>,
    class_of: impl Fn(&T) -> Vec<T>,
    p: u64,
) -> Best<T> {
    let mut seen: FxHashSet<T> = FxHashSet::default();
    let mut best = Best {
        rep: None,
        index: 0,
        part: u64::MAX,
        involutions: involutions.len() as u64,
        classes: 0,
    };
    for g in involutions {
        if seen.contains(&g) {
            continue;
        }
        let class = class_of(&g);
        let index = class.len() as u64;
        seen.extend(class);
        best.classes += 1;
        let part = heart_coprime_u64(index, p);
        if part < best.part || (part == best.part && index < best.index) {
            best = Best {
                rep: Some(g),
                index,
                part,
                ..best
            };
        }
    }
    best
}

fn bound_of(ctx: &GLContext) -> Result<u64> {
    u64::try_from(geom_sum(ctx.q(), ctx.n() as u32)?)
        .map_err(|_| Error::invalid("bound exceeds 64 bits"))
}

fn verdict_from<T>(
    best: Best<T>,
    order: u64,
    generators: Vec<String>,
    bound: u64,
    show: impl Fn(&T) -> String,
) -> LemmaAVerdict {
    let outcome = if order % 2 == 1 {
        LemmaAOutcome::OddOrderSkip
    } else if best.part <= bound {
        LemmaAOutcome::Satisfied
    } else {
        LemmaAOutcome::Violated
    };
    let found = best.rep.is_some();
    LemmaAVerdict {
        order,
        generators,
        involutions: best.involutions,
        involution_classes: best.classes,
        best_involution: best.rep.as_ref().map(show),
        index: found.then_some(best.index),
        index_part: found.then_some(best.part),
        bound,
        outcome,
        recheck: None,
    }
}

fn centralizer_recheck(h: &FiniteGroup<Matrix>, p: u64) -> Vec<(u64, u64)> {
    h.elements()
        .filter(|g| g.is_involution())
        .map(|g| {
            let c = h.elements().filter(|x| x.op(g) == g.op(x)).count();
            let index = (h.order() / c) as u64;
            (index, heart_coprime_u64(index, p))
        })
        .collect()
}

/// Checks one materialized subgroup of `GL_n(q)`.
pub fn lemma_a_check(h: &FiniteGroup<Matrix>, ctx: &GLContext) -> Result<LemmaAVerdict> {
    if !ctx.owns(h.identity()) {
        return Err(Error::invalid("subgroup does not live in the given GL_n(q)"));
    }
    let bound = bound_of(ctx)?;
    let invols: Vec<Matrix> = h.elements().filter(|x| x.is_involution()).cloned().collect();
    let best = best_involution(invols, |g| conj_orbit(h.generators(), g), ctx.p());
    let gens = h.generators().iter().map(|m| format!("{m:?}")).collect();
    let mut v = verdict_from(best, h.order() as u64, gens, bound, |m| format!("{m:?}"));
    if v.outcome == LemmaAOutcome::Violated {
        v.recheck = Some(centralizer_recheck(h, ctx.p()));
    }
    Ok(v)
}

/// As [`lemma_a_check`] for a subgroup given by a membership bitset of a
/// tabled ambient group.
fn lemma_a_check_indexed(
    table: &CayleyTable,
    ambient: &FiniteGroup<Matrix>,
    class: &SubgroupClass,
    p: u64,
    bound: u64,
) -> LemmaAVerdict {
    let invols: Vec<u32> = class
        .rep
        .iter()
        .map(|x| x as u32)
        .filter(|&x| table.element_order(x) == 2)
        .collect();
    let best = best_involution(invols, |&g| table.element_class(g, &class.gens), p);
    let show = |&x: &u32| format!("{:?}", ambient.element(x as usize));
    let gens = class.gens.iter().map(show).collect();
    let mut v = verdict_from(best, class.order as u64, gens, bound, show);
    if v.outcome == LemmaAOutcome::Violated {
        let members: Vec<Matrix> = class.rep.iter().map(|i| ambient.element(i).clone()).collect();
        let h = FiniteGroup::from_subgroup_elements(ambient.identity().clone(), &members);
        v.recheck = Some(centralizer_recheck(&h, p));
    }
    v
}

/// How subgroups are produced for a campaign.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SubgroupMode {
    /// Every subgroup up to conjugacy; needs `|GL_n(q)| ≤` [`TABLE_CAP`].
    Exhaustive,
    /// Seeded draws from structured families until `target` distinct
    /// subgroups have been checked.
    Random { target: usize },
}

/// Largest sampled subgroup materialized in random mode.
pub const SAMPLE_CAP: usize = 20_000;
const DEFAULT_LATTICE_CLASSES: usize = 100_000;

fn summarize(
    mut report: VerificationReport,
    rows: &[LemmaAVerdict],
    ctx: &GLContext,
) -> VerificationReport {
    let mut hist: BTreeMap<u64, u64> = BTreeMap::new();
    let mut outcomes: BTreeMap<&str, u64> = BTreeMap::new();
    let mut max_part = 0;
    for r in rows {
        *outcomes.entry(r.outcome.as_str()).or_default() += 1;
        if let Some(part) = r.index_part {
            *hist.entry(part).or_default() += 1;
            max_part = max_part.max(part);
        }
    }
    for (k, v) in outcomes {
        report = report.count(k, v);
    }
    for (k, v) in hist {
        report = report.count(&format!("index_part.{k}"), v);
    }
    let ceiling = ctx.q() + 1;
    report
        .count("max_index_part", max_part)
        .param("n", ctx.n() as u64)
        .param("q", ctx.q())
        .param("bound", bound_of(ctx).unwrap_or(0))
        .param("two_dim_ceiling", ceiling)
        .param("two_dim_ceiling_holds", max_part <= ceiling)
}

fn violation_witness(rows: &[LemmaAVerdict]) -> Option<serde_json::Value> {
    let bad: Vec<&LemmaAVerdict> = rows.iter().filter(|r| r.outcome == LemmaAOutcome::Violated).collect();
    (!bad.is_empty()).then(|| json!(bad))
}

/// Runs the check over every subgroup class of `GL_n(q)` or over a seeded
/// sample, returning the aggregate report and one row per subgroup.
pub fn lemma_a_campaign(
    n: usize,
    q: u64,
    mode: SubgroupMode,
    seed: u64,
) -> Result<(VerificationReport, Vec<LemmaAVerdict>)> {
    let start = Instant::now();
    let ctx = GLContext::of_order(n, q)?;
    let bound = bound_of(&ctx)?;
    let (mut report, rows) = match mode {
        SubgroupMode::Exhaustive => {
            if ctx.order() > &num_bigint::BigUint::from(TABLE_CAP) {
                return Err(Error::resource(
                    "ambient order for exhaustive lattice",
                    TABLE_CAP,
                    usize::try_from(ctx.order()).unwrap_or(usize::MAX),
                ));
            }
            let ambient = closure(&gl_generators(&ctx), TABLE_CAP)?;
            let table = CayleyTable::new(&ambient)?;
            let lat = exhaustive_lattice(&table, DEFAULT_LATTICE_CLASSES);
            let rows: Vec<LemmaAVerdict> = lat
                .classes
                .par_iter()
                .map(|c| lemma_a_check_indexed(&table, &ambient, c, ctx.p(), bound))
                .collect();
            let report = VerificationReport::new("lemma-a", Verdict::Verified)
                .param("mode", "exhaustive")
                .param("truncated", lat.truncated)
                .count("classes", lat.classes.len() as u64)
                .count("subgroups", lat.subgroup_count() as u64);
            (report, rows)
        }
        SubgroupMode::Random { target } => {
            let (report, rows) = random_rows(&ctx, seed, target)?;
            (report.seed(seed), rows)
        }
    };
    report = summarize(report, &rows, &ctx);
    if let Some(w) = violation_witness(&rows) {
        report.verdict = Verdict::Violated;
        report = report.witness(w);
    } else if report.params.get("truncated") == Some(&json!(true)) {
        report.verdict = Verdict::SkippedResource;
    }
    Ok((report.timed(start), rows))
}

fn element_set_key(g: &FiniteGroup<Matrix>) -> (usize, u64) {
    let mut h = FxHasher::default();
    g.sorted_elements().hash(&mut h);
    (g.order(), h.finish())
}

const BATCH: u64 = 128;

fn random_rows(ctx: &GLContext, seed: u64, target: usize) -> Result<(VerificationReport, Vec<LemmaAVerdict>)> {
    if target == 0 {
        return Err(Error::invalid("target must be at least 1"));
    }
    let sampler = Sampler::new(ctx, SAMPLE_CAP)?;
    let max_draws = 10 * target as u64;
    let mut seen: FxHashSet<(usize, u64)> = FxHashSet::default();
    let mut rows = Vec::new();
    let mut families: BTreeMap<&'static str, u64> = BTreeMap::new();
    let mut capped = 0u64;
    let mut draws = 0u64;
    while rows.len() < target && draws < max_draws {
        let batch: Vec<_> = (draws..draws + BATCH)
            .into_par_iter()
            .map(|i| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(i);
                let (family, _, group) = sampler.sample(&mut rng, SAMPLE_CAP);
                let keyed = group.map(|g| (element_set_key(&g), g));
                (family, keyed)
            })
            .collect();
        draws += BATCH;
        let mut fresh = Vec::new();
        for (family, keyed) in batch {
            match keyed {
                None => capped += 1,
                Some((key, g)) => {
                    if rows.len() + fresh.len() < target && seen.insert(key) {
                        *families.entry(family.as_str()).or_default() += 1;
                        fresh.push(g);
                    }
                }
            }
        }
        let checked: Vec<LemmaAVerdict> = fresh
            .par_iter()
            .map(|g| lemma_a_check(g, ctx))
            .collect::<Result<_>>()?;
        rows.extend(checked);
    }
    let mut report = VerificationReport::new("lemma-a", Verdict::Verified)
        .param("mode", "random")
        .param("target", target as u64)
        .param("truncated", rows.len() < target)
        .count("distinct_subgroups", rows.len() as u64)
        .count("draws", draws)
        .count("draws_over_cap", capped);
    for (k, v) in families {
        report = report.count(&format!("family.{k}"), v);
    }
    Ok((report, rows))
}

/// Builds `GL_n(q)` when it fits in `cap`, for callers that need it whole.
pub fn gl_group(ctx: &GLContext, cap: usize) -> Result<FiniteGroup<Matrix>> {
    closure(&gl_generators(ctx), cap.min(DEFAULT_CLOSURE_CAP))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matgroup::sylow2_gl2;
    use proptest::prelude::*;

    fn gl27() -> (GLContext, FiniteGroup<Matrix>) {
        let ctx = GLContext::of_order(2, 7).unwrap();
        let g = gl_group(&ctx, 5000).unwrap();
        (ctx, g)
    }

    #[test]
    fn whole_gl27() {
        let (ctx, g) = gl27();
        assert_eq!(g.order(), 2016);
        let v = lemma_a_check(&g, &ctx).unwrap();
        assert_eq!(v.outcome, LemmaAOutcome::Satisfied);
        assert_eq!(v.bound, 8);
        // -I is central.
        assert_eq!(v.index, Some(1));
        assert_eq!(v.involution_classes, 2);
    }

    #[test]
    fn diagonal_involution_index() {
        let (ctx, g) = gl27();
        let f = ctx.field();
        let d = Matrix::diagonal(f, &[1, f.neg(1)]).unwrap();
        let class = conj_orbit(g.generators(), &d);
        assert_eq!(class.len(), 56);
        assert_eq!(heart_coprime_u64(56, 7), 1);
    }

    #[test]
    fn violation_carries_recheck() {
        // A bound of 0 forces every even-order subgroup to fail.
        let (_, g) = gl27();
        let table = CayleyTable::new(&g).unwrap();
        let lat = exhaustive_lattice(&table, 40);
        let c = lat.classes.iter().find(|c| c.order == 2).unwrap();
        let v = lemma_a_check_indexed(&table, &g, c, 7, 0);
        assert_eq!(v.outcome, LemmaAOutcome::Violated);
        assert_eq!(v.recheck, Some(vec![(1, 1)]));
    }

    #[test]
    fn sylow_and_odd_subgroups() {
        let ctx = GLContext::of_order(2, 7).unwrap();
        let p = sylow2_gl2(7).unwrap().group;
        let v = lemma_a_check(&p, &ctx).unwrap();
        assert_eq!((v.outcome, v.index), (LemmaAOutcome::Satisfied, Some(1)));
        let s = singer_cycle(&ctx).unwrap().pow(16);
        let c3 = closure(&[s], 10).unwrap();
        let v = lemma_a_check(&c3, &ctx).unwrap();
        assert_eq!(v.outcome, LemmaAOutcome::OddOrderSkip);
        assert_eq!(v.index, None);
        let other = GLContext::of_order(2, 13).unwrap();
        assert!(lemma_a_check(&p, &other).is_err());
    }

    #[test]
    fn indexed_check_agrees_with_direct_check() {
        let (ctx, g) = gl27();
        let table = CayleyTable::new(&g).unwrap();
        let lat = exhaustive_lattice(&table, usize::MAX);
        for c in lat.classes.iter().step_by(17) {
            let fast = lemma_a_check_indexed(&table, &g, c, 7, 8);
            let members: Vec<Matrix> = c.rep.iter().map(|i| g.element(i).clone()).collect();
            let h = FiniteGroup::from_subgroup_elements(g.identity().clone(), &members);
            let slow = lemma_a_check(&h, &ctx).unwrap();
            assert_eq!((fast.index_part, fast.involutions), (slow.index_part, slow.involutions));
        }
    }

    #[test]
    fn lattice_matches_join_oracle_on_small_gl() {
        for q in [3u64, 5] {
            let ctx = GLContext::of_order(2, q).unwrap();
            let g = gl_group(&ctx, 500).unwrap();
            let table = CayleyTable::new(&g).unwrap();
            let lat = exhaustive_lattice(&table, usize::MAX);
            let oracle = lattice::all_subgroups_by_joins(&table);
            assert_eq!(lat.subgroup_count(), oracle.len(), "GL_2({q})");
        }
    }

    #[test]
    fn exhaustive_gl27_spot_orders() {
        let (report, rows) = lemma_a_campaign(2, 7, SubgroupMode::Exhaustive, 1).unwrap();
        assert_eq!(report.verdict, Verdict::Verified);
        for order in [32, 48, 252, 2016, 1] {
            assert!(rows.iter().any(|r| r.order == order), "missing order {order}");
        }
        assert!(report.counts["max_index_part"] <= 8);
        assert_eq!(report.params["two_dim_ceiling_holds"], json!(true));
    }

    #[test]
    fn random_mode_is_deterministic() {
        let a = lemma_a_campaign(2, 13, SubgroupMode::Random { target: 60 }, 5).unwrap();
        let b = lemma_a_campaign(2, 13, SubgroupMode::Random { target: 60 }, 5).unwrap();
        assert_eq!(a.0.counts, b.0.counts);
        assert_eq!(a.1.len(), 60);
        let ga: Vec<_> = a.1.iter().map(|r| &r.generators).collect();
        let gb: Vec<_> = b.1.iter().map(|r| &r.generators).collect();
        assert_eq!(ga, gb);
        assert_eq!(a.0.verdict, Verdict::Verified);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn conjugate_subgroups_agree(seed in any::<u64>()) {
            let ctx = GLContext::of_order(2, 7).unwrap();
            let sampler = Sampler::new(&ctx, SAMPLE_CAP).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (_, gens) = sampler.draw(&mut rng);
            let x = sampler.random_invertible(&mut rng);
            let xi = x.inverse();
            let conj: Vec<Matrix> = gens.iter().map(|g| xi.mul(g).mul(&x)).collect();
            let h = closure(&gens, 5000).unwrap();
            let k = closure(&conj, 5000).unwrap();
            let a = lemma_a_check(&h, &ctx).unwrap();
            let b = lemma_a_check(&k, &ctx).unwrap();
            prop_assert_eq!(a.order, b.order);
            prop_assert_eq!(a.index_part, b.index_part);
            prop_assert_eq!(a.index, b.index);
            prop_assert_eq!(a.involution_classes, b.involution_classes);
        }
    }
}
