//! Input loading, analysis reports, differential validation against the
//! rewriting oracle, and fault injection.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::biorder::{build_biorder, load_abstract_biorder, AbstractBiorderSpec, BiorderError, BiorderedSet, SemigroupTable};
use crate::contact::VertexGroupMethod;
use crate::group::Elem;
use crate::rees::{ReesError, TripleChain};
use crate::structure::{build_natural, IgStructure, NaturalIg, StructureError, SyntheticSpec};
use crate::theta::ig_equal;
use crate::words::{all_words, Caps, IgWord, Verdict};

#[derive(Debug, Error)]
pub enum InputError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("input must be a JSON object with a \"table\", \"products\" or \"models\" key")]
    UnknownKind,
    #[error(transparent)]
    Biorder(#[from] BiorderError),
    #[error(transparent)]
    Structure(#[from] StructureError),
}

/// The three accepted input shapes.
#[derive(Clone, Debug)]
pub enum Input {
    Semigroup(SemigroupTable),
    Biorder(AbstractBiorderSpec),
    Synthetic(SyntheticSpec),
}

pub fn parse_input(text: &str) -> Result<Input, InputError> {
    let v: Value = serde_json::from_str(text)?;
    let obj = v.as_object().ok_or(InputError::UnknownKind)?;
    if obj.contains_key("table") {
        Ok(Input::Semigroup(serde_json::from_value(v)?))
    } else if obj.contains_key("products") {
        Ok(Input::Biorder(serde_json::from_value(v)?))
    } else if obj.contains_key("models") {
        Ok(Input::Synthetic(serde_json::from_value(v)?))
    } else {
        Err(InputError::UnknownKind)
    }
}

impl Input {
    /// The biordered set, for inputs that describe one.
    pub fn biorder(&self) -> Result<Option<BiorderedSet>, InputError> {
        match self {
            Input::Semigroup(t) => Ok(Some(build_biorder(t)?)),
            Input::Biorder(s) => Ok(Some(load_abstract_biorder(s)?)),
            Input::Synthetic(_) => Ok(None),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    pub caps: Caps,
    pub seed: u64,
    /// Every pair of words up to this length is compared.
    pub exhaustive_len: usize,
    pub samples: usize,
    pub sample_len: usize,
    /// Keep a record for every sampled pair, not only disagreements.
    pub record_all: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig { caps: Caps::default(), seed: 0, exhaustive_len: 4, samples: 1000, sample_len: 6, record_all: false }
    }
}

fn chain_json(st: &IgStructure, c: &TripleChain) -> Value {
    let blocks: Vec<Value> = c
        .triples
        .iter()
        .zip(&c.fingerprint)
        .map(|(t, &m)| {
            json!({"model": m, "i": t.i, "g": st.models[m].group.name(t.g), "lambda": t.lambda})
        })
        .collect();
    Value::Array(blocks)
}

pub fn chain_to_json(st: &IgStructure, c: &TripleChain) -> Value {
    chain_json(st, c)
}

/// Models and contact automata of a structure, with vertex groups.
pub fn structure_report(st: &IgStructure) -> Value {
    let models: Vec<Value> = st
        .models
        .iter()
        .enumerate()
        .map(|(k, m)| {
            let g = &m.group;
            let sandwich: Vec<Vec<Value>> = m
                .sandwich
                .iter()
                .map(|row| row.iter().map(|p| p.map_or(Value::Null, |x| Value::String(g.name(x)))).collect())
                .collect();
            json!({
                "index": k,
                "label": m.label,
                "dclass": m.dclass_id,
                "rows": m.rows,
                "cols": m.cols,
                "group_order": g.order(),
                "group_elements": g.elements().map(|x| g.name(x)).collect::<Vec<_>>(),
                "sandwich": sandwich,
                "base": [m.base.0, m.base.1],
            })
        })
        .collect();
    let automata: Vec<Value> = st
        .automata()
        .map(|a| {
            let gr = &a.graph;
            let dp = gr.group();
            let edges: Vec<Value> = gr
                .edges()
                .iter()
                .map(|e| json!({"from": gr.label(e.from), "to": gr.label(e.to), "gain": dp.name(e.gain), "letter": e.tag}))
                .collect();
            let groups: Vec<Value> = (0..gr.vertex_count())
                .map(|v| match gr.vertex_group(v, VertexGroupMethod::SpanningTree) {
                    Ok(w) => json!({"vertex": gr.label(v), "order": w.order(),
                        "elements": w.elements().iter().map(|&x| dp.name(x)).collect::<Vec<_>>()}),
                    Err(e) => json!({"vertex": gr.label(v), "error": e.to_string()}),
                })
                .collect();
            json!({"source": a.source, "target": a.target, "vertices": gr.vertex_count(), "edges": edges, "vertex_groups": groups})
        })
        .collect();
    json!({"name": st.name, "models": models, "automata": automata})
}

fn failure_json(dclass: usize, e: &ReesError) -> Value {
    match e {
        ReesError::GroupNotFiniteWithinCap { partial, .. } => {
            json!({"dclass": dclass, "error": "GroupNotFiniteWithinCap", "message": e.to_string(), "partial": partial})
        }
        _ => json!({"dclass": dclass, "error": "other", "message": e.to_string()}),
    }
}

/// Full analysis of a natural input: biorder summary, models or the reason
/// they could not be built, and contact automata.
pub fn run_report(nat: &NaturalIg, cfg: &RunConfig) -> Value {
    let bio = nat.oracle.biorder();
    let failures: Vec<Value> = nat.failures.iter().map(|f| failure_json(f.dclass, &f.error)).collect();
    json!({
        "caps": cfg.caps,
        "seed": cfg.seed,
        "biorder": bio.summary(),
        "dclass_to_model": nat.dclass_to_model,
        "structure": structure_report(&nat.structure),
        "failures": failures,
    })
}

pub fn load_natural(name: &str, bio: BiorderedSet, caps: Caps) -> Result<NaturalIg, StructureError> {
    build_natural(name, Arc::new(bio), caps)
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Counts {
    pub pairs: u64,
    pub agreed: u64,
    pub disagreed: u64,
    /// Pairs the oracle could not decide within its caps.
    pub unknown: u64,
    pub oracle_equal: u64,
    pub oracle_distinct: u64,
    /// Words that could not be turned into triple chains, or Equal
    /// certificates that failed to replay.
    pub errors: u64,
    /// Equal certificates replayed step by step.
    pub replayed: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationRecord {
    pub left: Vec<String>,
    pub right: Vec<String>,
    pub algebraic: Option<bool>,
    pub oracle: Verdict,
    pub agree: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ValidationReport {
    pub name: String,
    pub config: RunConfig,
    pub structure_error: Option<String>,
    pub exhaustive: Counts,
    pub sampled: Counts,
    pub disagreements: Vec<ValidationRecord>,
    pub records: Vec<ValidationRecord>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.structure_error.is_none()
            && self.disagreements.is_empty()
            && self.exhaustive.errors == 0
            && self.sampled.errors == 0
    }
}

const MAX_REPORTED: usize = 100;

struct Chains {
    ids: HashMap<TripleChain, usize>,
    list: Vec<TripleChain>,
    eq: HashMap<(usize, usize), bool>,
}

impl Chains {
    fn id(&mut self, c: TripleChain) -> usize {
        if let Some(&k) = self.ids.get(&c) {
            return k;
        }
        self.list.push(c.clone());
        self.ids.insert(c, self.list.len() - 1);
        self.list.len() - 1
    }

    fn equal(&mut self, st: &IgStructure, a: usize, b: usize) -> Result<bool, String> {
        let key = (a.min(b), a.max(b));
        if let Some(&e) = self.eq.get(&key) {
            return Ok(e);
        }
        let e = ig_equal(st, &self.list[a], &self.list[b]).map_err(|e| e.to_string())?.equal;
        self.eq.insert(key, e);
        Ok(e)
    }
}

/// Compares `ig_equal` with the oracle on all word pairs up to
/// `exhaustive_len` and on `samples` random pairs up to `sample_len`.
pub fn cross_validate(nat: &mut NaturalIg, cfg: &RunConfig) -> ValidationReport {
    let mut report = ValidationReport {
        name: nat.structure.name.clone(),
        config: *cfg,
        structure_error: nat.structure.validate().err().map(|e| e.to_string()),
        exhaustive: Counts::default(),
        sampled: Counts::default(),
        disagreements: Vec::new(),
        records: Vec::new(),
    };
    if report.structure_error.is_some() {
        return report;
    }
    let mut chains = Chains { ids: HashMap::new(), list: Vec::new(), eq: HashMap::new() };
    exhaustive(nat, cfg, &mut chains, &mut report);
    sampled(nat, cfg, &mut chains, &mut report);
    report
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct WordKey {
    chain: usize,
    comp: u32,
    ambient: Option<usize>,
    fingerprint: Vec<usize>,
}

fn exhaustive(nat: &mut NaturalIg, cfg: &RunConfig, chains: &mut Chains, report: &mut ValidationReport) {
    let bio = nat.oracle.biorder().clone();
    let words = all_words(bio.len(), cfg.exhaustive_len);
    let labels = |w: &IgWord| w.labels(&bio);
    let mut keys: BTreeMap<WordKey, (u64, IgWord)> = BTreeMap::new();
    let mut failed = 0u64;
    for w in &words {
        let info = (|| -> Result<WordKey, String> {
            let comp = nat.oracle.component(w).ok_or("rewrite class exceeds caps")?;
            let fingerprint = nat.oracle.fingerprint(w).map_err(|e| e.to_string())?;
            let chain = nat.element(w).map_err(|e| e.to_string())?;
            Ok(WordKey { chain: chains.id(chain), comp, ambient: bio.ambient_image(w.letters()), fingerprint })
        })();
        match info {
            Ok(k) => keys.entry(k).or_insert((0, w.clone())).0 += 1,
            Err(e) => {
                failed += 1;
                if report.disagreements.len() < MAX_REPORTED {
                    report.disagreements.push(ValidationRecord {
                        left: labels(w),
                        right: vec![],
                        algebraic: None,
                        oracle: Verdict::Unknown,
                        agree: false,
                        error: Some(e),
                    });
                }
            }
        }
    }
    let n = words.len() as u64;
    let c = &mut report.exhaustive;
    c.errors = failed;
    c.pairs = n * n.saturating_sub(1) / 2;
    let keys: Vec<(WordKey, (u64, IgWord))> = keys.into_iter().collect();
    for a in 0..keys.len() {
        for b in a..keys.len() {
            let ((ka, (na, wa)), (kb, (nb, wb))) = (&keys[a], &keys[b]);
            let pairs = if a == b { na * na.saturating_sub(1) / 2 } else { na * nb };
            if pairs == 0 {
                continue;
            }
            let oracle = if ka.comp == kb.comp {
                Verdict::Equal
            } else if matches!((ka.ambient, kb.ambient), (Some(x), Some(y)) if x != y) || ka.fingerprint != kb.fingerprint {
                Verdict::Distinct
            } else {
                Verdict::Unknown
            };
            let alg = chains.equal(&nat.structure, ka.chain, kb.chain);
            let rec = |alg: Option<bool>, agree: bool, error: Option<String>| ValidationRecord {
                left: labels(wa),
                right: labels(wb),
                algebraic: alg,
                oracle,
                agree,
                error,
            };
            let c = &mut report.exhaustive;
            match (&alg, oracle) {
                (Err(e), _) => {
                    c.errors += pairs;
                    if report.disagreements.len() < MAX_REPORTED {
                        report.disagreements.push(rec(None, false, Some(e.clone())));
                    }
                }
                (Ok(_), Verdict::Unknown) => c.unknown += pairs,
                (&Ok(x), v) => {
                    if v == Verdict::Equal {
                        c.oracle_equal += pairs;
                    } else {
                        c.oracle_distinct += pairs;
                    }
                    if x == (v == Verdict::Equal) {
                        c.agreed += pairs;
                    } else {
                        c.disagreed += pairs;
                        if report.disagreements.len() < MAX_REPORTED {
                            report.disagreements.push(rec(Some(x), false, None));
                        }
                    }
                }
            }
        }
    }
}

fn random_word<R: Rng>(rng: &mut R, letters: usize, max_len: usize) -> IgWord {
    let len = rng.gen_range(1..=max_len.max(1));
    let l: Vec<u8> = (0..len).map(|_| rng.gen_range(0..letters) as u8).collect();
    IgWord::from_letters(&l)
}

fn sampled(nat: &mut NaturalIg, cfg: &RunConfig, chains: &mut Chains, report: &mut ValidationReport) {
    let bio = nat.oracle.biorder().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut cache: HashMap<IgWord, Result<usize, String>> = HashMap::new();
    for _ in 0..cfg.samples {
        let u = random_word(&mut rng, bio.len(), cfg.sample_len);
        let v = random_word(&mut rng, bio.len(), cfg.sample_len);
        let mut chain_of = |w: &IgWord| -> Result<usize, String> {
            if let Some(r) = cache.get(w) {
                return r.clone();
            }
            let r = nat.element(w).map(|c| chains.id(c)).map_err(|e| e.to_string());
            cache.insert(w.clone(), r.clone());
            r
        };
        let (cu, cv) = (chain_of(&u), chain_of(&v));
        let verdict = nat.oracle.equal(&u, &v);
        let oracle = verdict.status;
        let mut alg = match (cu, cv) {
            (Ok(a), Ok(b)) => chains.equal(&nat.structure, a, b),
            (Err(e), _) | (_, Err(e)) => Err(e),
        };
        let c = &mut report.sampled;
        c.pairs += 1;
        if oracle == Verdict::Equal {
            c.replayed += 1;
            if !verdict.replay(&bio, &u, &v) {
                alg = Err("rewrite certificate does not replay".into());
            }
        }
        let mut rec = ValidationRecord {
            left: u.labels(&bio),
            right: v.labels(&bio),
            algebraic: alg.as_ref().ok().copied(),
            oracle,
            agree: true,
            error: alg.as_ref().err().cloned(),
        };
        match (alg, oracle) {
            (Err(_), _) => {
                c.errors += 1;
                rec.agree = false;
            }
            (Ok(_), Verdict::Unknown) => c.unknown += 1,
            (Ok(x), v) => {
                if v == Verdict::Equal {
                    c.oracle_equal += 1;
                } else {
                    c.oracle_distinct += 1;
                }
                if x == (v == Verdict::Equal) {
                    c.agreed += 1;
                } else {
                    c.disagreed += 1;
                    rec.agree = false;
                }
            }
        }
        if !rec.agree && report.disagreements.len() < MAX_REPORTED {
            report.disagreements.push(rec.clone());
        }
        if cfg.record_all {
            report.records.push(rec);
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ActionSide {
    Sigma,
    Tau,
}

/// A single perturbation of a structure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Fault {
    Sandwich { model: usize, lambda: usize, i: usize, value: Option<Elem> },
    Cocycle { letter: usize, model: usize, side: ActionSide, index: usize, value: Elem },
    EdgeGain { source: usize, target: usize, edge: usize, gain: Elem },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FaultKind {
    Sandwich,
    Cocycle,
    EdgeGain,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FaultError {
    #[error("fault does not address an existing entry: {0:?}")]
    NoSuchEntry(Fault),
    #[error(transparent)]
    Structure(#[from] StructureError),
}

/// Applies a fault in place. Sandwich faults are not re-validated, so that
/// downstream checks see them; cocycle faults rebuild the automata.
pub fn apply_fault(st: &mut IgStructure, f: &Fault) -> Result<(), FaultError> {
    let missing = || FaultError::NoSuchEntry(f.clone());
    match *f {
        Fault::Sandwich { model, lambda, i, value } => {
            let cell = st
                .models
                .get_mut(model)
                .and_then(|m| m.sandwich.get_mut(lambda))
                .and_then(|r| r.get_mut(i))
                .ok_or_else(missing)?;
            *cell = value;
        }
        Fault::Cocycle { letter, model, side, index, value } => {
            let ent = st.actions.entries.get_mut(letter).and_then(|r| r.get_mut(model)).ok_or_else(missing)?;
            let slot = match side {
                ActionSide::Sigma => ent.sigma.get_mut(index),
                ActionSide::Tau => ent.tau.get_mut(index),
            };
            let Some(Some((_, c))) = slot else {
                return Err(missing());
            };
            *c = value;
            st.rebuild_automata()?;
        }
        Fault::EdgeGain { source, target, edge, gain } => {
            let a = st.automaton_mut(source, target).ok_or_else(missing)?;
            a.graph = a
                .graph
                .with_gain(edge, gain)
                .map_err(|error| StructureError::Contact { source_model: source, target_model: target, error })?;
        }
    }
    Ok(())
}

/// Every single perturbation of the given kinds: each sandwich cell set to
/// every other value in `G ∪ {0}`, each defined cocycle and each edge gain
/// set to every other group element.
pub fn enumerate_faults(st: &IgStructure, kinds: &[FaultKind]) -> Vec<Fault> {
    let mut out = Vec::new();
    if kinds.contains(&FaultKind::Sandwich) {
        for (model, m) in st.models.iter().enumerate() {
            for (lambda, row) in m.sandwich.iter().enumerate() {
                for (i, &cur) in row.iter().enumerate() {
                    let values = std::iter::once(None).chain(m.group.elements().map(Some));
                    for value in values.filter(|&v| v != cur) {
                        out.push(Fault::Sandwich { model, lambda, i, value });
                    }
                }
            }
        }
    }
    if kinds.contains(&FaultKind::Cocycle) {
        for (letter, row) in st.actions.entries.iter().enumerate() {
            for (model, ent) in row.iter().enumerate() {
                let g = &st.models[model].group;
                for (side, maps) in [(ActionSide::Sigma, &ent.sigma), (ActionSide::Tau, &ent.tau)] {
                    for (index, slot) in maps.iter().enumerate() {
                        let Some((_, cur)) = *slot else { continue };
                        for value in g.elements().filter(|&x| x != cur) {
                            out.push(Fault::Cocycle { letter, model, side, index, value });
                        }
                    }
                }
            }
        }
    }
    if kinds.contains(&FaultKind::EdgeGain) {
        for a in st.automata() {
            for (edge, e) in a.graph.edges().iter().enumerate() {
                for gain in a.graph.group().elements().filter(|&x| x != e.gain) {
                    out.push(Fault::EdgeGain { source: a.source, target: a.target, edge, gain });
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn natural(name: &str, len: usize) -> NaturalIg {
        let bio = build_biorder(&corpus::by_name(name).unwrap()).unwrap();
        load_natural(name, bio, Caps::default().with_word_len(len)).unwrap()
    }

    #[test]
    fn input_kind_detection() {
        assert!(matches!(parse_input(r#"{"size":1,"table":[[0]]}"#).unwrap(), Input::Semigroup(_)));
        assert!(matches!(parse_input(r#"{"elements":["e"],"products":[]}"#).unwrap(), Input::Biorder(_)));
        assert!(matches!(parse_input(r#"{"x":1}"#), Err(InputError::UnknownKind)));
        assert!(matches!(parse_input("[1"), Err(InputError::Json(_))));
    }

    #[test]
    fn left_zero_cross_validation() {
        let mut nat = natural("LZ2", 8);
        let cfg = RunConfig { exhaustive_len: 4, samples: 50, sample_len: 5, ..RunConfig::default() };
        let r = cross_validate(&mut nat, &cfg);
        assert!(r.passed(), "{:?}", r.disagreements);
        assert_eq!(r.exhaustive.unknown, 0);
        assert_eq!(r.exhaustive.agreed, r.exhaustive.pairs);
    }

    #[test]
    fn brandt_report_shape() {
        let nat = natural("B2", 8);
        let rep = run_report(&nat, &RunConfig::default());
        assert_eq!(rep["structure"]["models"].as_array().unwrap().len(), 3);
        let (e11, e22) = (nat.dclass_to_model[1].unwrap(), nat.dclass_to_model[2].unwrap());
        let _ = (e11, e22);
    }

    #[test]
    fn cross_validation_is_deterministic() {
        let cfg = RunConfig { exhaustive_len: 3, samples: 30, sample_len: 5, record_all: true, ..RunConfig::default() };
        let a = serde_json::to_string(&cross_validate(&mut natural("T2", 8), &cfg)).unwrap();
        let b = serde_json::to_string(&cross_validate(&mut natural("T2", 8), &cfg)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn sandwich_fault_is_reported() {
        let mut nat = natural("LZ2", 8);
        let f = enumerate_faults(&nat.structure, &[FaultKind::Sandwich]);
        assert!(!f.is_empty());
        apply_fault(&mut nat.structure, &f[0]).unwrap();
        let cfg = RunConfig { exhaustive_len: 2, samples: 0, ..RunConfig::default() };
        assert!(!cross_validate(&mut nat, &cfg).passed());
    }
}
