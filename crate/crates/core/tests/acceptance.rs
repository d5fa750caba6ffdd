//! Acceptance criteria 1-9. Runs as a plain binary and prints one line per
//! criterion; exits nonzero if any criterion fails.

mod common;

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{gain_graph_walks, random_gain_graph, theta_bar_ref, theta_ref, Reference};
use ig_core::biorder::build_biorder;
use ig_core::contact::{GainGraph, VertexGroupMethod};
use ig_core::corpus;
use ig_core::fixtures::{self, Fixture};
use ig_core::group::{subgroup_closure, Coset, Elem, FiniteGroup, Subgroup};
use ig_core::harness::{apply_fault, cross_validate, enumerate_faults, run_report, Fault, FaultKind, RunConfig};
use ig_core::rees::{ReesError, TripleChain};
use ig_core::structure::{build_natural, IgStructure, NaturalIg};
use ig_core::theta::{
    dclass_census, green, green_dual, ig_equal, ig_equal_dual, schutzenberger, theta, theta_bar,
};
use ig_core::words::{all_words, random_rewrite_walk, Caps, Decision, IgWord, Rel, Verdict};

type Outcome = Result<String, String>;

const SEED: u64 = 20240611;

/// Equality-partition digests of the reference on each fixture fingerprint,
/// computed once from the unperturbed fixtures and frozen.
const FROZEN_DIGESTS: &[(&str, &[usize], u64)] = &[
    ("sign", &[0], 0x692558b056101a44),
    ("sign", &[1], 0x703461c07025044),
    ("sign", &[0, 1], 0x8fb84d692c7eb445),
    ("cyclic", &[0, 1], 0x5504a91f0b5efd25),
    ("cyclic", &[0, 1, 1], 0xc6f91ba95a899325),
    ("three_block", &[1], 0xaa4b2471267ad325),
    ("three_block", &[0, 1], 0x4bd0e1bca75149a5),
    ("three_block", &[1, 2], 0xe8fb265335464f25),
    ("three_block", &[0, 1, 2], 0xe98100652e9664d5),
    ("three_block", &[0, 1, 2, 0], 0x1a7cde5b7c69c825),
    ("rigid", &[0, 1], 0x7be44c3b50a1f6e5),
];

fn caps() -> Caps {
    Caps::default().with_word_len(10)
}

fn natural(name: &str) -> NaturalIg {
    let t = corpus::by_name(name).unwrap();
    build_natural(name, Arc::new(build_biorder(&t).unwrap()), caps()).unwrap()
}

fn corpus_names() -> Vec<String> {
    corpus::natural_corpus().into_iter().map(|(n, _)| n).collect()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

// ---------------------------------------------------------------- criterion 1

fn suite1(nat: &mut NaturalIg, exhaustive_len: usize, samples: usize) -> Outcome {
    let cfg = RunConfig { caps: caps(), seed: SEED, exhaustive_len, samples, sample_len: 8, record_all: false };
    let r = cross_validate(nat, &cfg);
    if !r.passed() {
        return Err(format!(
            "{}: structure error {:?}, {} disagreements, first {:?}",
            r.name,
            r.structure_error,
            r.exhaustive.disagreed + r.sampled.disagreed + r.exhaustive.errors + r.sampled.errors,
            r.disagreements.first()
        ));
    }
    Ok(format!(
        "{}: {} exhaustive pairs ({} unknown), {} sampled ({} unknown)",
        r.name, r.exhaustive.pairs, r.exhaustive.unknown, r.sampled.pairs, r.sampled.unknown
    ))
}

fn criterion1() -> Outcome {
    let mut parts = Vec::new();
    for name in corpus_names() {
        parts.push(suite1(&mut natural(&name), 5, 10_000)?);
    }
    Ok(parts.join("; "))
}

// ---------------------------------------------------------------- criterion 2

fn criterion2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut checked = 0usize;
    for name in corpus_names() {
        let mut nat = natural(&name);
        let bio = nat.oracle.biorder().clone();
        let mut words = all_words(bio.len(), 3);
        for _ in 0..10 {
            let len = rng.gen_range(4..=6);
            let l: Vec<u8> = (0..len).map(|_| rng.gen_range(0..bio.len()) as u8).collect();
            words.push(IgWord::from_letters(&l));
        }
        for w in &words {
            let base = nat.oracle.minimal_r_factorisation(w).map_err(|e| e.to_string())?;
            for _ in 0..200 {
                let steps = rng.gen_range(1..=12);
                let v = random_rewrite_walk(&bio, w, steps, caps().max_word_len, &mut rng);
                ensure(nat.oracle.equal(w, &v).status == Verdict::Equal, || format!("{name}: variant not equal"))?;
                let f = nat.oracle.minimal_r_factorisation(&v).map_err(|e| e.to_string())?;
                ensure(f.blocks.len() == base.blocks.len() && f.fingerprint == base.fingerprint, || {
                    format!("{name}: {} vs {} fingerprints differ", w.display(&bio), v.display(&bio))
                })?;
                let r = nat.oracle.relation(Rel::R, &base.blocks[0], &f.blocks[0]);
                let l = nat.oracle.relation(Rel::L, base.blocks.last().unwrap(), f.blocks.last().unwrap());
                ensure(r == Decision::Holds && l == Decision::Holds, || {
                    format!("{name}: end blocks of {} and {} not R/L related ({r:?}, {l:?})", w.display(&bio), v.display(&bio))
                })?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} variants"))
}

// ---------------------------------------------------------------- criterion 3

fn check_gain_graph(gr: &GainGraph, rng: &mut ChaCha8Rng, stats: &mut [usize; 4]) -> Result<(), String> {
    let g = gr.group();
    let n = gr.vertex_count();
    let mut groups = Vec::new();
    for u in 0..n {
        let a = gr.vertex_group(u, VertexGroupMethod::ConjugatedCycles).map_err(|e| e.to_string())?;
        let b = gr.vertex_group(u, VertexGroupMethod::SpanningTree).map_err(|e| e.to_string())?;
        ensure(a == b, || format!("methods disagree at vertex {u}: {a:?} vs {b:?}"))?;
        groups.push(a);
    }
    let closure = gain_graph_walks(gr, None);
    let short = gain_graph_walks(gr, Some(6));
    for u in 0..n {
        for v in 0..n {
            let coset = gr.walk_coset(u, v).map_err(|e| e.to_string())?;
            let all: BTreeSet<Elem> = closure[u][v].clone();
            let got: BTreeSet<Elem> = coset.as_ref().map(|c| c.elements().into_iter().collect()).unwrap_or_default();
            ensure(got == all, || format!("walk coset {u}->{v} is {got:?}, walks give {all:?}"))?;
            ensure(short[u][v].is_subset(&got), || format!("short walk {u}->{v} outside coset"))?;
            stats[0] += 1;
            if short[u][v] == got {
                stats[1] += 1;
            }
            if coset.is_none() {
                continue;
            }
            for _ in 0..3 {
                let path = common::random_path(gr, u, v, rng).ok_or("no path in a connected pair")?;
                let pg = gr.walk_gain(&path);
                let conj = groups[v].conjugate(g.inv(pg));
                ensure(conj == groups[u], || format!("W_{u} != g W_{v} g^-1"))?;
                stats[2] += 1;
            }
        }
    }
    stats[3] += 1;
    Ok(())
}

fn criterion3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let groups = [FiniteGroup::symmetric(3), FiniteGroup::cyclic(4), FiniteGroup::klein_four()];
    let mut stats = [0usize; 4];
    for k in 0..100 {
        let g = Arc::new(groups[k % 3].clone());
        let gr = random_gain_graph(&g, 8, 12, &mut rng);
        check_gain_graph(&gr, &mut rng, &mut stats).map_err(|e| format!("random graph {k}: {e}"))?;
    }
    for name in corpus_names() {
        let nat = natural(&name);
        for a in nat.structure.automata() {
            check_gain_graph(&a.graph, &mut rng, &mut stats)
                .map_err(|e| format!("{name} automaton {}->{}: {e}", a.source, a.target))?;
        }
    }
    for f in fixtures::all() {
        for a in f.structure.automata() {
            check_gain_graph(&a.graph, &mut rng, &mut stats)
                .map_err(|e| format!("{} automaton {}->{}: {e}", f.name, a.source, a.target))?;
        }
    }
    Ok(format!(
        "{} graphs, {} vertex pairs ({} already filled by walks of length <= 6), {} conjugacy checks",
        stats[3], stats[0], stats[1], stats[2]
    ))
}

// ---------------------------------------------------------------- criterion 4

fn coset_set(c: &Option<Coset>) -> BTreeSet<Elem> {
    c.as_ref().map(|c| c.elements().into_iter().collect()).unwrap_or_default()
}

fn genuine_coset(c: &Coset) -> Result<(), String> {
    let g = c.group();
    let els = c.elements();
    let s0 = els[0];
    let left: Vec<Elem> = els.iter().map(|&s| g.mul(g.inv(s0), s)).collect();
    let right: Vec<Elem> = els.iter().map(|&s| g.mul(s, g.inv(s0))).collect();
    let ok = match c.side() {
        ig_core::group::Side::Left => Subgroup::from_elements(g, &left).is_some(),
        ig_core::group::Side::Right => Subgroup::from_elements(g, &right).is_some(),
    };
    ensure(ok, || format!("{els:?} is not a one-sided coset"))
}

/// Pairs to test: all pairs on small spaces, otherwise a sample with half
/// the partners drawn from the same reference class.
fn sample_pairs(st: &IgStructure, r: &mut Reference, rng: &mut ChaCha8Rng, limit: usize) -> Vec<(TripleChain, TripleChain)> {
    let n = r.space.len();
    if n * n <= limit {
        return (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).map(|(a, b)| (r.space.chain(a), r.space.chain(b))).collect();
    }
    (0..limit)
        .map(|_| {
            let u = r.space.chain(rng.gen_range(0..n));
            let v = if rng.gen_bool(0.5) {
                let mut v = u.clone();
                for _ in 0..rng.gen_range(1..8) {
                    let ms = common::moves(st, &v);
                    if ms.is_empty() {
                        break;
                    }
                    v = ms[rng.gen_range(0..ms.len())].clone();
                }
                v
            } else {
                r.space.chain(rng.gen_range(0..n))
            };
            (u, v)
        })
        .collect()
}

fn random_coset(g: &Arc<FiniteGroup>, rng: &mut ChaCha8Rng) -> Coset {
    let gens: Vec<Elem> = (0..rng.gen_range(0..3)).map(|_| rng.gen_range(0..g.order())).collect();
    let h = subgroup_closure(g, &gens).unwrap();
    let x = rng.gen_range(0..g.order());
    if rng.gen_bool(0.5) {
        Coset::left(x, h)
    } else {
        Coset::right(h, x)
    }
}

fn suite4(f: &Fixture, digests: bool) -> Outcome {
    let st = &f.structure;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut checks = 0usize;
    for fp in &f.fingerprints {
        let mut r = Reference::new(st, fp);
        if digests {
            let d = r.digest();
            let frozen = FROZEN_DIGESTS.iter().find(|(n, p, _)| *n == f.name && *p == fp.as_slice());
            match frozen {
                Some(&(_, _, want)) => ensure(d == want, || format!("{} {fp:?}: equality partition changed", f.name))?,
                None => return Err(format!("{} {fp:?}: no frozen digest (computed {d:#x})", f.name)),
            }
        }
        let (g1, gm) = (&st.models[fp[0]].group, &st.models[fp[fp.len() - 1]].group);
        for (u, v) in sample_pairs(st, &mut r, &mut rng, 2500) {
            let e = ig_equal(st, &u, &v).map_err(|e| e.to_string())?.equal;
            let want = r.equal(&u, &v);
            ensure(e == want, || format!("{} ig_equal({u:?}, {v:?}) = {e}, reference {want}", f.name))?;
            let ed = ig_equal_dual(st, &u, &v).map_err(|e| e.to_string())?;
            ensure(ed == want, || format!("{} dual equality differs on {u:?} {v:?}", f.name))?;
            if fp.len() < 2 {
                continue;
            }
            let starts1 = [
                Coset::singleton(g1, g1.mul(g1.inv(u.first().g), v.first().g)),
                Coset::whole(g1),
                Coset::singleton(g1, g1.identity()),
                random_coset(g1, &mut rng),
            ];
            for a in &starts1 {
                let t = theta(st, a, &u, &v).map_err(|e| e.to_string())?;
                let want = theta_ref(st, &a.elements().into_iter().collect(), &u, &v);
                ensure(coset_set(&t.value) == want, || format!("{} theta differs on {u:?} {v:?}", f.name))?;
                if let Some(c) = &t.value {
                    genuine_coset(c)?;
                }
                checks += 1;
            }
            let starts_m = [
                Coset::singleton(gm, gm.mul(v.last().g, gm.inv(u.last().g))),
                Coset::whole(gm),
                Coset::singleton(gm, gm.identity()),
                random_coset(gm, &mut rng),
            ];
            for b in &starts_m {
                let t = theta_bar(st, &u, &v, b).map_err(|e| e.to_string())?;
                let want = theta_bar_ref(st, &u, &v, &b.elements().into_iter().collect());
                ensure(coset_set(&t.value) == want, || format!("{} theta-bar differs on {u:?} {v:?}", f.name))?;
                if let Some(c) = &t.value {
                    genuine_coset(c)?;
                }
                checks += 1;
            }
            let x = g1.mul(g1.inv(u.first().g), v.first().g);
            let y = gm.mul(v.last().g, gm.inv(u.last().g));
            let fwd = coset_set(&theta(st, &Coset::singleton(g1, x), &u, &v).map_err(|e| e.to_string())?.value).contains(&y);
            let bwd = coset_set(&theta_bar(st, &u, &v, &Coset::singleton(gm, y)).map_err(|e| e.to_string())?.value).contains(&x);
            ensure(fwd == bwd, || format!("{} duality fails on {u:?} {v:?}", f.name))?;
        }
    }
    Ok(format!("{}: {checks} set comparisons", f.name))
}

fn criterion4() -> Outcome {
    let mut parts = Vec::new();
    for f in fixtures::all() {
        parts.push(suite4(&f, true)?);
    }
    Ok(parts.join("; "))
}

// ---------------------------------------------------------------- criterion 5

const RELS: [Rel; 5] = [Rel::R, Rel::L, Rel::H, Rel::D, Rel::J];

/// One shortest word per distinct chain, over words up to `len`.
fn corpus_chains(nat: &mut NaturalIg, len: usize) -> Result<Vec<(TripleChain, IgWord)>, String> {
    let bio = nat.oracle.biorder().clone();
    let mut seen: BTreeMap<Vec<(usize, usize, usize, usize)>, (TripleChain, IgWord)> = BTreeMap::new();
    for w in all_words(bio.len(), len) {
        let c = nat.element(&w).map_err(|e| e.to_string())?;
        let key = c.triples.iter().zip(&c.fingerprint).map(|(t, &m)| (m, t.i, t.g, t.lambda)).collect();
        seen.entry(key).or_insert((c, w));
    }
    Ok(seen.into_values().collect())
}

fn suite5_natural(nat: &mut NaturalIg) -> Outcome {
    let chains = corpus_chains(nat, 4)?;
    let (mut decided, mut unknown) = (0usize, 0usize);
    for (cu, wu) in &chains {
        for (cv, wv) in &chains {
            for rel in RELS {
                let a = green(&nat.structure, cu, cv, rel).map_err(|e| e.to_string())?;
                let b = green_dual(&nat.structure, cu, cv, rel).map_err(|e| e.to_string())?;
                ensure(a == b, || format!("{rel:?}: theta and theta-bar forms differ on {cu:?} {cv:?}"))?;
                match nat.oracle.relation(rel, wu, wv).definite() {
                    Some(o) => {
                        ensure(o == a, || format!("{rel:?}({cu:?}, {cv:?}): algebraic {a}, witness search {o}"))?;
                        decided += 1;
                    }
                    None => unknown += 1,
                }
            }
            let (d, j) = (green(&nat.structure, cu, cv, Rel::D), green(&nat.structure, cu, cv, Rel::J));
            ensure(d == j, || "J differs from D".into())?;
        }
    }
    Ok(format!("{}: {} chains, {decided} decided, {unknown} unknown", nat.structure.name, chains.len()))
}

fn suite5_fixture(f: &Fixture) -> Outcome {
    let st = &f.structure;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 5);
    let mut n = 0usize;
    for fp in &f.fingerprints {
        let mut r = Reference::new(st, fp);
        for (u, v) in sample_pairs(st, &mut r, &mut rng, 1500) {
            for rel in RELS {
                let a = green(st, &u, &v, rel).map_err(|e| e.to_string())?;
                let b = green_dual(st, &u, &v, rel).map_err(|e| e.to_string())?;
                let want = r.related(rel, &u, &v);
                ensure(a == want && b == want, || {
                    format!("{} {rel:?}({u:?}, {v:?}): theta {a}, theta-bar {b}, reference {want}", f.name)
                })?;
                n += 1;
            }
        }
    }
    Ok(format!("{}: {n} relation checks", f.name))
}

fn criterion5() -> Outcome {
    let mut parts = Vec::new();
    for name in corpus_names() {
        parts.push(suite5_natural(&mut natural(&name))?);
    }
    for f in fixtures::all() {
        parts.push(suite5_fixture(&f)?);
    }
    Ok(parts.join("; "))
}

// ---------------------------------------------------------------- criterion 6

fn check_schutz(st: &IgStructure, x: &TripleChain, h_size: usize) -> Result<(), String> {
    let s = schutzenberger(st, x).map_err(|e| e.to_string())?;
    ensure(s.l.normality_witness(&s.k).is_none(), || "L not normal in K".into())?;
    let (g1, gm) = (st.models[x.fingerprint[0]].group.order(), st.models[*x.fingerprint.last().unwrap()].group.order());
    ensure(s.order() == h_size, || format!("|Gamma| = {} but |H_x| = {h_size} for {x:?}", s.order()))?;
    ensure(g1 % s.order() == 0 && gm % s.order() == 0, || format!("|Gamma| = {} does not divide {g1} and {gm}", s.order()))?;
    ensure(s.dual_quotient_order == s.order(), || "theta and theta-bar quotient orders differ".into())
}

fn suite6_natural(nat: &mut NaturalIg) -> Outcome {
    let chains = corpus_chains(nat, 4)?;
    let bio = nat.oracle.biorder().clone();
    let words = all_words(bio.len(), 4);
    for (x, wx) in &chains {
        let mut classes = HashSet::new();
        for y in &words {
            if nat.oracle.relation(Rel::H, wx, y) == Decision::Holds {
                classes.insert(nat.oracle.component(y).ok_or("class exceeds caps")?);
            }
        }
        check_schutz(&nat.structure, x, classes.len())?;
    }
    Ok(format!("{}: {} chains", nat.structure.name, chains.len()))
}

/// Number of distinct elements among the chains selected by `keep`.
fn distinct(r: &mut Reference, keep: impl Fn(&mut Reference, usize) -> bool) -> usize {
    let mut roots = HashSet::new();
    for y in 0..r.space.len() {
        if keep(r, y) {
            roots.insert(r.eq.find(y));
        }
    }
    roots.len()
}

fn sample_chains(r: &Reference, rng: &mut ChaCha8Rng, k: usize) -> Vec<TripleChain> {
    let n = r.space.len();
    if n <= k {
        (0..n).map(|x| r.space.chain(x)).collect()
    } else {
        (0..k).map(|_| r.space.chain(rng.gen_range(0..n))).collect()
    }
}

fn suite6_fixture(f: &Fixture) -> Outcome {
    let st = &f.structure;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 6);
    let mut n = 0;
    for fp in &f.fingerprints {
        let mut r = Reference::new(st, fp);
        for x in sample_chains(&r, &mut rng, 40) {
            let xi = r.space.index_of(&x);
            let (rx, lx) = (r.r.find(xi), r.l.find(xi));
            let h = distinct(&mut r, |r, y| r.r.find(y) == rx && r.l.find(y) == lx);
            check_schutz(st, &x, h).map_err(|e| format!("{}: {e}", f.name))?;
            n += 1;
        }
    }
    Ok(format!("{}: {n} chains", f.name))
}

fn criterion6() -> Outcome {
    let mut parts = Vec::new();
    for name in corpus_names() {
        parts.push(suite6_natural(&mut natural(&name))?);
    }
    for f in fixtures::all() {
        parts.push(suite6_fixture(&f)?);
    }
    Ok(parts.join("; "))
}

// ---------------------------------------------------------------- criterion 7

fn suite7(f: &Fixture) -> Outcome {
    let st = &f.structure;
    let (mut classes, mut skipped) = (0, 0);
    for fp in &f.fingerprints {
        let mut r = Reference::new(st, fp);
        let n = r.space.len();
        let mut done = HashSet::new();
        for x in 0..n {
            let dx = r.d.find(x);
            if !done.insert(dx) {
                continue;
            }
            let members: Vec<usize> = (0..n).filter(|&y| r.d.find(y) == dx).collect();
            // Distinct elements of D_x, found with ig_equal against class representatives.
            let mut reps: Vec<usize> = Vec::new();
            let mut elem_of: HashMap<usize, usize> = HashMap::new();
            let mut too_big = false;
            for &y in &members {
                let cy = r.space.chain(y);
                let mut found = None;
                for (k, &rep) in reps.iter().enumerate() {
                    if ig_equal(st, &r.space.chain(rep), &cy).map_err(|e| e.to_string())?.equal {
                        found = Some(k);
                        break;
                    }
                }
                let k = found.unwrap_or_else(|| {
                    reps.push(y);
                    reps.len() - 1
                });
                elem_of.insert(y, k);
                if reps.len() > 500 {
                    too_big = true;
                    break;
                }
            }
            if too_big {
                skipped += 1;
                continue;
            }
            let xc = r.space.chain(x);
            let (rx, lx) = (r.r.find(x), r.l.find(x));
            let count = |sel: &dyn Fn(&mut Reference, usize) -> bool, r: &mut Reference| {
                members.iter().filter(|&&y| sel(r, y)).map(|y| elem_of[y]).collect::<HashSet<_>>().len()
            };
            let d_size = reps.len();
            let r_classes = members.iter().map(|&y| r.r.find(y)).collect::<HashSet<_>>().len();
            let l_classes = members.iter().map(|&y| r.l.find(y)).collect::<HashSet<_>>().len();
            let r_size = count(&|r, y| r.r.find(y) == rx, &mut r);
            let l_size = count(&|r, y| r.l.find(y) == lx, &mut r);
            let h_size = count(&|r, y| r.r.find(y) == rx && r.l.find(y) == lx, &mut r);
            let c = dclass_census(st, &xc).map_err(|e| e.to_string())?;
            let got = (c.r_classes, c.l_classes, c.h_class_size, c.r_class_size, c.l_class_size, c.d_class_size);
            let want = (r_classes, l_classes, h_size, r_size, l_size, d_size);
            ensure(got == want, || format!("{} {fp:?} census of {xc:?}: {got:?}, brute force {want:?}", f.name))?;
            classes += 1;
        }
    }
    Ok(format!("{}: {classes} D-classes ({skipped} over 500 skipped)", f.name))
}

fn criterion7() -> Outcome {
    let mut parts = Vec::new();
    for f in fixtures::all() {
        parts.push(suite7(&f)?);
    }
    Ok(parts.join("; "))
}

// ---------------------------------------------------------------- criterion 8

fn criterion8() -> Outcome {
    let mut parts = Vec::new();
    for name in ["RB22", "RB23"] {
        let t = corpus::by_name(name).unwrap();
        let nat = build_natural(name, Arc::new(build_biorder(&t).unwrap()), Caps::default())
            .map_err(|e| format!("{name}: build failed outright: {e}"))?;
        ensure(nat.failures.len() == 1 && nat.structure.models.is_empty(), || {
            format!("{name}: expected one failed D-class, got {} failures", nat.failures.len())
        })?;
        let ReesError::GroupNotFiniteWithinCap { partial, .. } = &nat.failures[0].error else {
            return Err(format!("{name}: wrong error {:?}", nat.failures[0].error));
        };
        ensure(partial.rows > 0 && partial.cols > 0 && !partial.sample_normal_forms.is_empty(), || {
            format!("{name}: partial data missing")
        })?;
        let rep = run_report(&nat, &RunConfig::default());
        ensure(rep["failures"][0]["error"] == "GroupNotFiniteWithinCap", || format!("{name}: report lacks failure"))?;
        parts.push(format!("{name}: {}x{} partial, {} normal forms", partial.rows, partial.cols, partial.r_class_elements_found));
    }
    Ok(parts.join("; "))
}

// ---------------------------------------------------------------- criterion 9

fn synthetic_suites(f: &Fixture) -> Result<(), String> {
    suite4(f, true)?;
    suite5_fixture(f)?;
    suite6_fixture(f)?;
    suite7(f)?;
    Ok(())
}

fn revert(st: &IgStructure, f: &Fault) -> Fault {
    match *f {
        Fault::Sandwich { model, lambda, i, .. } => {
            Fault::Sandwich { model, lambda, i, value: st.models[model].sandwich[lambda][i] }
        }
        _ => unreachable!(),
    }
}

fn criterion9() -> Outcome {
    let mut total = 0usize;
    let mut missed = Vec::new();
    for name in corpus_names() {
        let mut nat = natural(&name);
        for fault in enumerate_faults(&nat.structure, &[FaultKind::Sandwich]) {
            let back = revert(&nat.structure, &fault);
            apply_fault(&mut nat.structure, &fault).map_err(|e| e.to_string())?;
            if suite1(&mut nat, 3, 200).is_ok() {
                missed.push(format!("{name} {fault:?}"));
            }
            apply_fault(&mut nat.structure, &back).map_err(|e| e.to_string())?;
            total += 1;
        }
    }
    let rigid = fixtures::rigid();
    for fault in enumerate_faults(&rigid.structure, &[FaultKind::Cocycle, FaultKind::EdgeGain]) {
        let mut f = rigid.clone();
        apply_fault(&mut f.structure, &fault).map_err(|e| e.to_string())?;
        let detected = catch_unwind(AssertUnwindSafe(|| synthetic_suites(&f).is_err())).unwrap_or(true);
        if !detected {
            missed.push(format!("rigid {fault:?}"));
        }
        total += 1;
    }
    // The other fixtures admit perturbations that do not change the
    // semigroup (e.g. a cocycle moved within the same vertex group), so
    // their detection rate is reported but not required.
    let mut info = Vec::new();
    for f in [fixtures::sign(), fixtures::cyclic(), fixtures::three_block()] {
        let faults = enumerate_faults(&f.structure, &[FaultKind::Cocycle, FaultKind::EdgeGain]);
        let caught = faults
            .iter()
            .filter(|fault| {
                let mut g = f.clone();
                apply_fault(&mut g.structure, fault).is_err()
                    || catch_unwind(AssertUnwindSafe(|| suite4(&g, true).is_err())).unwrap_or(true)
            })
            .count();
        info.push(format!("{} {caught}/{}", f.name, faults.len()));
    }
    if missed.is_empty() {
        Ok(format!("{total} single faults, all detected; other fixtures: {}", info.join(", ")))
    } else {
        Err(format!("{} of {total} faults undetected, e.g. {}", missed.len(), missed[0]))
    }
}

fn main() {
    let criteria: [(u8, &str, fn() -> Outcome); 9] = [
        (1, "oracle agreement", criterion1),
        (2, "fingerprint invariance", criterion2),
        (3, "gain-graph laws", criterion3),
        (4, "theta correctness", criterion4),
        (5, "Green's relations", criterion5),
        (6, "Schützenberger groups", criterion6),
        (7, "D-class census", criterion7),
        (8, "error paths", criterion8),
        (9, "fault injection", criterion9),
    ];
    let only: Vec<u8> = std::env::var("ACCEPTANCE_ONLY")
        .ok()
        .map(|s| s.split(',').filter_map(|x| x.trim().parse().ok()).collect())
        .unwrap_or_default();
    let results: Vec<(u8, &str, Outcome, f64)> = std::thread::scope(|s| {
        let handles: Vec<_> = criteria
            .iter()
            .filter(|(n, _, _)| only.is_empty() || only.contains(n))
            .map(|&(n, name, f)| {
                s.spawn(move || {
                    let t = Instant::now();
                    let r = catch_unwind(f).unwrap_or_else(|p| {
                        let msg = p
                            .downcast_ref::<String>()
                            .cloned()
                            .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                            .unwrap_or_default();
                        Err(format!("panicked: {msg}"))
                    });
                    (n, name, r, t.elapsed().as_secs_f64())
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });
    let mut failed = 0;
    for (n, name, r, secs) in &results {
        match r {
            Ok(detail) => println!("criterion {n} ({name}): PASS [{secs:.1}s] {detail}"),
            Err(detail) => {
                failed += 1;
                println!("criterion {n} ({name}): FAIL [{secs:.1}s] {detail}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
