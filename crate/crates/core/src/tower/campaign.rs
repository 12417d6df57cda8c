use std::collections::BTreeMap;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::json;

use super::{build_tower, verify_oddnormal, verify_sylow_fusion, verify_tower_identity};
use crate::error::{Error, Result};
use crate::gf::field_of_order;
use crate::group::families::*;
use crate::group::{closure, involutions, normal_subgroups, FiniteGroup, GroupElement};
use crate::matrix::Matrix;
use crate::report::{Verdict, VerificationReport};

type Block = (&'static str, FiniteGroup<GroupElement>);

/// Building blocks for sampled instances.
fn library() -> Vec<Block> {
    let f3 = field_of_order(3).expect("GF(3)");
    let m = |v: &[i64]| Matrix::from_ints(&f3, 2, v).unwrap();
    let sl23 = closure(&[m(&[1, 1, 0, 1]), m(&[0, 1, -1, 0])], 100).unwrap();
    let gl23 = closure(&[m(&[-1, 0, 0, 1]), m(&[1, 1, 0, 1]), m(&[0, 1, -1, 0])], 100).unwrap();
    vec![
        ("C2", lift(&cyclic(2))),
        ("C3", lift(&cyclic(3))),
        ("C4", lift(&cyclic(4))),
        ("C5", lift(&cyclic(5))),
        ("C6", lift(&cyclic(6))),
        ("C7", lift(&cyclic(7))),
        ("C9", lift(&cyclic(9))),
        ("S3", lift(&symmetric(3))),
        ("D8", lift(&dihedral(8))),
        ("Q8", lift(&quaternion(8))),
        ("D12", lift(&dihedral(12))),
        ("Dic3", lift(&dicyclic(3))),
        ("A4", lift(&alternating(4))),
        ("S4", lift(&symmetric(4))),
        ("Q16", lift(&quaternion(16))),
        ("SD16", lift(&semidihedral(16))),
        ("F21", lift(&affine(7, 3))),
        ("F20", lift(&affine(5, 4))),
        ("F42", lift(&affine(7, 6))),
        ("SL2(3)", lift(&sl23)),
        ("GL2(3)", lift(&gl23)),
    ]
}

fn pick_blocks<'a>(
    lib: &'a [Block],
    rng: &mut ChaCha8Rng,
    count: usize,
    max_order: usize,
) -> Vec<&'a Block> {
    loop {
        let chosen: Vec<&Block> = (0..count).map(|_| lib.choose(rng).unwrap()).collect();
        let order: usize = chosen.iter().map(|b| b.1.order()).product();
        if order <= max_order && order % 2 == 0 {
            return chosen;
        }
    }
}

fn random_element(g: &FiniteGroup<GroupElement>, rng: &mut ChaCha8Rng) -> GroupElement {
    g.element(rng.gen_range(0..g.order())).clone()
}

fn product_of(blocks: &[&Block]) -> FiniteGroup<GroupElement> {
    let groups: Vec<FiniteGroup<GroupElement>> = blocks.iter().map(|b| b.1.clone()).collect();
    direct_product(&groups)
}

fn names(blocks: &[&Block]) -> String {
    blocks.iter().map(|b| b.0).collect::<Vec<_>>().join("x")
}

/// A subgroup of the product of `blocks`: the whole product, a diagonal, or
/// the subgroup generated by a few random tuples.
fn sample_subgroup(blocks: &[&Block], rng: &mut ChaCha8Rng) -> (String, FiniteGroup<GroupElement>) {
    let ids: Vec<GroupElement> = blocks.iter().map(|b| b.1.identity().clone()).collect();
    match rng.gen_range(0..3) {
        0 => ("full".into(), product_of(blocks)),
        1 if blocks.len() >= 2 && blocks[0].0 == blocks[1].0 => {
            // Diagonal in the first two factors, free in the rest.
            let mut gens = Vec::new();
            for s in blocks[0].1.generators() {
                let mut t = ids.clone();
                t[0] = s.clone();
                t[1] = s.clone();
                gens.push(GroupElement::tuple(t));
            }
            for (i, b) in blocks.iter().enumerate().skip(2) {
                for s in b.1.generators() {
                    let mut t = ids.clone();
                    t[i] = s.clone();
                    gens.push(GroupElement::tuple(t));
                }
            }
            ("diagonal".into(), closure(&gens, usize::MAX).expect("small"))
        }
        _ => {
            let m = rng.gen_range(1..=3);
            let gens: Vec<GroupElement> = (0..m)
                .map(|_| GroupElement::tuple(blocks.iter().map(|b| random_element(&b.1, rng)).collect()))
                .collect();
            ("random".into(), closure(&gens, usize::MAX).expect("small"))
        }
    }
}

fn trial(lib: &[Block], seed: u64, index: u64) -> Result<VerificationReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let report = match index % 3 {
        0 => {
            let count = rng.gen_range(1..=2);
            let blocks = pick_blocks(lib, &mut rng, count, 600);
            let h = product_of(&blocks);
            let odd: Vec<FiniteGroup<GroupElement>> = normal_subgroups(&h)?
                .into_iter()
                .filter(|n| n.order() % 2 == 1)
                .collect();
            let n = odd.choose(&mut rng).expect("trivial subgroup is odd");
            let invols = involutions(&h);
            let g = invols.choose(&mut rng).expect("even order");
            verify_oddnormal(&h, n, g)?.param("instance", names(&blocks))
        }
        1 => {
            let count = rng.gen_range(1..=2);
            let blocks = pick_blocks(lib, &mut rng, count, 600);
            let h = product_of(&blocks);
            let even: Vec<FiniteGroup<GroupElement>> = normal_subgroups(&h)?
                .into_iter()
                .filter(|n| n.order() % 2 == 0)
                .collect();
            let n = even.choose(&mut rng).expect("H itself is even");
            let invols = involutions(n);
            let g = invols.choose(&mut rng).expect("even order");
            verify_sylow_fusion(&h, n, g)?.param("instance", names(&blocks))
        }
        _ => {
            let r = rng.gen_range(2..=3);
            let mut blocks = pick_blocks(lib, &mut rng, r, 3000);
            if rng.gen_bool(0.3) {
                blocks[1] = blocks[0];
            }
            let (shape, h) = sample_subgroup(&blocks, &mut rng);
            let tower = build_tower(&h, r)?;
            if tower.kernel_product() != h.order() as u64 {
                return Err(Error::Internal("kernel orders do not telescope".into()));
            }
            let candidates: Vec<GroupElement> =
                involutions(&h).into_iter().filter(|g| tower.applies_to(g)).collect();
            let instance = format!("{}:{}", names(&blocks), shape);
            match candidates.choose(&mut rng) {
                Some(g) => verify_tower_identity(&tower, g)?.param("instance", instance),
                None => VerificationReport::not_applicable(
                    "invcentralizer",
                    "no involution survives to a nontrivial element of T_k",
                )
                .param("instance", instance),
            }
        }
    };
    Ok(report.param("trial", index).seed(seed))
}

/// Runs `trials` seeded instances across the three identity verifiers and
/// aggregates them.
pub fn random_identity_campaign(seed: u64, trials: u64) -> Result<VerificationReport> {
    Ok(random_identity_campaign_with(seed, trials)?.0)
}

/// As [`random_identity_campaign`], also returning the per-trial reports in
/// trial order.
pub fn random_identity_campaign_with(
    seed: u64,
    trials: u64,
) -> Result<(VerificationReport, Vec<VerificationReport>)> {
    let start = Instant::now();
    if trials == 0 {
        return Err(Error::invalid("trials must be at least 1"));
    }
    let lib = library();
    let reports: Vec<VerificationReport> = (0..trials)
        .into_par_iter()
        .map(|i| trial(&lib, seed, i))
        .collect::<Result<_>>()?;

    let mut counts: BTreeMap<String, u64> = BTreeMap::new();
    let mut failures = Vec::new();
    for r in &reports {
        *counts.entry(format!("{}.{}", r.lemma_id, r.verdict.as_str())).or_default() += 1;
        *counts.entry(r.verdict.as_str().to_string()).or_default() += 1;
        if r.verdict == Verdict::Violated {
            failures.push(json!({"trial": r.params.get("trial"), "witness": r.witness}));
        }
    }
    let verdict = if !failures.is_empty() {
        Verdict::Violated
    } else if counts.contains_key("skipped-resource") {
        Verdict::SkippedResource
    } else {
        Verdict::Verified
    };
    let mut agg = VerificationReport::new("identity-campaign", verdict)
        .param("trials", trials)
        .seed(seed);
    agg.counts = counts;
    if !failures.is_empty() {
        agg = agg.witness(json!(failures));
    }
    Ok((agg.timed(start), reports))
}
