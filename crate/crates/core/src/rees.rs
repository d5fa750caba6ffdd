//! Rees-coordinate models of regular D-classes, partial actions of letters
//! on them, and conversion between words and triple chains.

use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::group::{Elem, FiniteGroup};
use crate::words::{Decision, IgWord, Oracle, Rel, WordError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ReesError {
    #[error("maximal subgroup of D-class {dclass} did not close within caps: {}", partial.reason)]
    GroupNotFiniteWithinCap { dclass: usize, partial: Box<PartialModel> },
    #[error("word does not lie in D-class {0}")]
    NotInThisDClass(String),
    #[error(transparent)]
    Word(#[from] WordError),
    #[error("invalid model or action table: {0}")]
    Invalid(String),
    #[error("internal consistency failure: {0}")]
    Inconsistent(String),
    #[error("no model available for D-class {0}")]
    MissingModel(usize),
}

/// What was found before a model build gave up.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PartialModel {
    pub reason: String,
    pub rows: usize,
    pub cols: usize,
    pub r_class_elements_found: usize,
    pub longest_normal_form: usize,
    pub sample_normal_forms: Vec<IgWord>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Triple {
    pub i: usize,
    pub g: Elem,
    pub lambda: usize,
}

impl Triple {
    pub fn new(i: usize, g: Elem, lambda: usize) -> Self {
        Triple { i, g, lambda }
    }
}

/// Words realizing a model inside IG(E).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Realization {
    pub base_idempotent: usize,
    pub row_idempotents: Vec<usize>,
    pub col_idempotents: Vec<usize>,
    pub row_reps: Vec<IgWord>,
    pub col_reps: Vec<IgWord>,
    pub group_words: Vec<IgWord>,
    /// `(letter, i, lambda)` for each idempotent of E in the class.
    pub idempotent_coords: Vec<(usize, usize, usize)>,
}

/// `M0[G; I, Lambda; P]` for one regular D-class. `sandwich[lambda][i]` is
/// `None` for the zero entry.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegularDClassModel {
    pub label: String,
    #[serde(default)]
    pub dclass_id: Option<usize>,
    pub rows: usize,
    pub cols: usize,
    pub group: Arc<FiniteGroup>,
    pub sandwich: Vec<Vec<Option<Elem>>>,
    #[serde(default)]
    pub base: (usize, usize),
    #[serde(skip_deserializing)]
    pub realization: Option<Realization>,
}

impl RegularDClassModel {
    /// Checks shape, ranges and the Rees condition that every row and column
    /// of the sandwich matrix has a nonzero entry.
    pub fn validate(&self) -> Result<(), ReesError> {
        let bad = |m: String| Err(ReesError::Invalid(format!("model {}: {m}", self.label)));
        if self.rows == 0 || self.cols == 0 {
            return bad("index sets must be nonempty".into());
        }
        if self.sandwich.len() != self.cols || self.sandwich.iter().any(|r| r.len() != self.rows) {
            return bad(format!("sandwich must be {} x {}", self.cols, self.rows));
        }
        let n = self.group.order();
        if self.sandwich.iter().flatten().flatten().any(|&g| g >= n) {
            return bad("sandwich entry outside the group".into());
        }
        if let Some(l) = (0..self.cols).find(|&l| self.sandwich[l].iter().all(Option::is_none)) {
            return bad(format!("sandwich row {l} is zero"));
        }
        if let Some(i) = (0..self.rows).find(|&i| self.sandwich.iter().all(|r| r[i].is_none())) {
            return bad(format!("sandwich column {i} is zero"));
        }
        if self.base.0 >= self.rows || self.base.1 >= self.cols {
            return bad("base cell out of range".into());
        }
        if let Some(r) = &self.realization {
            let mut cells: Vec<(usize, usize)> = r.idempotent_coords.iter().map(|&(_, i, l)| (i, l)).collect();
            cells.sort_unstable();
            let mut nonzero: Vec<(usize, usize)> = (0..self.rows)
                .flat_map(|i| (0..self.cols).map(move |l| (i, l)))
                .filter(|&(i, l)| self.sandwich[l][i].is_some())
                .collect();
            nonzero.sort_unstable();
            if cells != nonzero {
                return bad("idempotent cells differ from nonzero sandwich cells".into());
            }
        }
        Ok(())
    }

    pub fn p(&self, lambda: usize, i: usize) -> Option<Elem> {
        self.sandwich[lambda][i]
    }

    pub fn size(&self) -> usize {
        self.rows * self.cols * self.group.order()
    }

    pub fn contains(&self, t: &Triple) -> bool {
        t.i < self.rows && t.g < self.group.order() && t.lambda < self.cols
    }

    /// Rees product; `None` when the product leaves the class.
    pub fn mul(&self, a: &Triple, b: &Triple) -> Option<Triple> {
        let p = self.p(a.lambda, b.i)?;
        let g = &self.group;
        Some(Triple::new(a.i, g.mul(g.mul(a.g, p), b.g), b.lambda))
    }

    pub fn triples(&self) -> impl Iterator<Item = Triple> + '_ {
        (0..self.rows).flat_map(move |i| {
            (0..self.group.order()).flat_map(move |g| (0..self.cols).map(move |l| Triple::new(i, g, l)))
        })
    }

    fn realization(&self) -> Result<&Realization, ReesError> {
        self.realization
            .as_ref()
            .ok_or_else(|| ReesError::Invalid(format!("model {} has no word realization", self.label)))
    }
}

/// `sigma[i] = Some((j, c))` means `e (i,g,l) = (j, c g, l)`;
/// `tau[l] = Some((m, d))` means `(i,g,l) e = (i, g d, m)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionEntry {
    pub sigma: Vec<Option<(usize, Elem)>>,
    pub tau: Vec<Option<(usize, Elem)>>,
}

impl ActionEntry {
    pub fn empty(model: &RegularDClassModel) -> Self {
        ActionEntry { sigma: vec![None; model.rows], tau: vec![None; model.cols] }
    }
}

/// Left and right partial actions of every letter on every model,
/// indexed `entries[letter][model]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartialActionTable {
    pub letters: Vec<String>,
    pub entries: Vec<Vec<ActionEntry>>,
}

impl PartialActionTable {
    pub fn validate(&self, models: &[RegularDClassModel]) -> Result<(), ReesError> {
        let bad = |m: String| Err(ReesError::Invalid(m));
        if self.entries.len() != self.letters.len() {
            return bad("one entry row per letter expected".into());
        }
        for (e, row) in self.entries.iter().enumerate() {
            if row.len() != models.len() {
                return bad(format!("letter {}: one entry per model expected", self.letters[e]));
            }
            for (k, (ent, m)) in row.iter().zip(models).enumerate() {
                let n = m.group.order();
                if ent.sigma.len() != m.rows || ent.tau.len() != m.cols {
                    return bad(format!("letter {} on model {k}: action sizes do not match", self.letters[e]));
                }
                if ent.sigma.iter().flatten().any(|&(j, c)| j >= m.rows || c >= n)
                    || ent.tau.iter().flatten().any(|&(l, d)| l >= m.cols || d >= n)
                {
                    return bad(format!("letter {} on model {k}: index out of range", self.letters[e]));
                }
            }
        }
        Ok(())
    }
}

/// An element of IG(E) as a product of triples from consecutive models.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TripleChain {
    pub triples: Vec<Triple>,
    /// Model index of each triple.
    pub fingerprint: Vec<usize>,
}

impl TripleChain {
    pub fn new(triples: Vec<Triple>, fingerprint: Vec<usize>) -> Self {
        assert_eq!(triples.len(), fingerprint.len());
        TripleChain { triples, fingerprint }
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    pub fn first(&self) -> &Triple {
        &self.triples[0]
    }

    pub fn last(&self) -> &Triple {
        &self.triples[self.triples.len() - 1]
    }
}

struct Explored {
    /// Canonical word and its index (row or column) for each element found.
    elements: Vec<(IgWord, usize)>,
    comps: HashMap<u32, usize>,
}

fn not_finite(dclass: usize, rows: usize, cols: usize, found: &[(IgWord, usize)], reason: String) -> ReesError {
    let mut sample: Vec<IgWord> = found.iter().map(|(w, _)| w.clone()).collect();
    sample.sort();
    let longest = sample.iter().map(IgWord::len).max().unwrap_or(0);
    sample.truncate(12);
    ReesError::GroupNotFiniteWithinCap {
        dclass,
        partial: Box::new(PartialModel {
            reason,
            rows,
            cols,
            r_class_elements_found: found.len(),
            longest_normal_form: longest,
            sample_normal_forms: sample,
        }),
    }
}

/// Index of the idempotent among `idems` related to `w` by `rel`.
fn locate(oracle: &mut Oracle, rel: Rel, w: &IgWord, idems: &[usize]) -> Result<Option<usize>, ReesError> {
    let mut unknown = false;
    for (k, &f) in idems.iter().enumerate() {
        match oracle.relation(rel, w, &IgWord::letter(f)) {
            Decision::Holds => return Ok(Some(k)),
            Decision::Unknown => unknown = true,
            Decision::Fails => {}
        }
    }
    if unknown {
        let caps = oracle.caps();
        Err(WordError::CapExceeded { what: format!("locating the {rel:?}-class of a word"), caps }.into())
    } else {
        Ok(None)
    }
}

/// Builds the model of the regular D-class of IG(E) over the E-D-class `d`.
pub fn build_dclass_model(oracle: &mut Oracle, d: usize) -> Result<RegularDClassModel, ReesError> {
    let bio = oracle.biorder().clone();
    let caps = oracle.caps();
    let members = bio.d_classes().get(d).ok_or(ReesError::MissingModel(d))?.clone();
    let mut row_ids: Vec<usize> = Vec::new();
    let mut col_ids: Vec<usize> = Vec::new();
    for &e in &members {
        if !row_ids.contains(&bio.r_class(e)) {
            row_ids.push(bio.r_class(e));
        }
        if !col_ids.contains(&bio.l_class(e)) {
            col_ids.push(bio.l_class(e));
        }
    }
    let row_idempotents: Vec<usize> = row_ids.iter().map(|&r| bio.r_classes()[r][0]).collect();
    let col_idempotents: Vec<usize> = col_ids.iter().map(|&l| bio.l_classes()[l][0]).collect();
    let (rows, cols) = (row_ids.len(), col_ids.len());
    let e0 = members[0];
    let e0w = IgWord::letter(e0);

    // One side of the D-class through e0: R_{e0} (right multiplication, indexed
    // by column) or L_{e0} (left multiplication, indexed by row).
    let explore = |oracle: &mut Oracle, right: bool| -> Result<Explored, ReesError> {
        let (idems, limit) = if right {
            (&col_idempotents, cols * caps.max_group_order)
        } else {
            (&row_idempotents, rows * caps.max_group_order)
        };
        let mut ex = Explored { elements: Vec::new(), comps: HashMap::new() };
        let c0 = oracle.component(&e0w).ok_or_else(|| {
            not_finite(d, rows, cols, &[(e0w.clone(), 0)], "class of the base idempotent exceeds caps".into())
        })?;
        ex.comps.insert(c0, 0);
        ex.elements.push((e0w.clone(), 0));
        let mut head = 0;
        while head < ex.elements.len() {
            let x = ex.elements[head].0.clone();
            head += 1;
            for f in 0..bio.len() {
                let fw = IgWord::letter(f);
                let y = if right { x.concat(&fw) } else { fw.concat(&x) };
                let Some(cy) = oracle.component(&y) else {
                    let side = if right { "right" } else { "left" };
                    return Err(not_finite(
                        d,
                        rows,
                        cols,
                        &ex.elements,
                        format!("{side} translate of length {} exceeds the word caps", y.len()),
                    ));
                };
                if ex.comps.contains_key(&cy) {
                    continue;
                }
                let inside = if right { oracle.le_r(&e0w, &y) } else { oracle.le_l(&e0w, &y) };
                match inside {
                    Decision::Fails => continue,
                    Decision::Unknown => {
                        return Err(not_finite(d, rows, cols, &ex.elements, "membership test undecided".into()))
                    }
                    Decision::Holds => {}
                }
                let rel = if right { Rel::L } else { Rel::R };
                let idx = locate(oracle, rel, &y, idems)?.ok_or_else(|| {
                    ReesError::Inconsistent(format!("element {} of D-class {d} has no idempotent", y.display(&bio)))
                })?;
                let canon = oracle.canonical(&y).expect("component exists");
                ex.comps.insert(cy, ex.elements.len());
                ex.elements.push((canon, idx));
                if ex.elements.len() > limit {
                    return Err(not_finite(d, rows, cols, &ex.elements, "group order cap exceeded".into()));
                }
            }
        }
        Ok(ex)
    };

    let r_side = explore(oracle, true)?;
    let l_side = explore(oracle, false)?;

    let mut h: Vec<(IgWord, u32)> = r_side
        .comps
        .iter()
        .filter(|&(_, &k)| r_side.elements[k].1 == 0)
        .map(|(&c, &k)| (r_side.elements[k].0.clone(), c))
        .collect();
    h.sort();
    let order = h.len();
    let unclosed = |reason: String| not_finite(d, rows, cols, &r_side.elements, reason);
    if order * cols != r_side.elements.len() || order * rows != l_side.elements.len() {
        return Err(unclosed(format!(
            "|R| = {} and |L| = {} do not factor through |H| = {order} with |I| = {rows}, |Lambda| = {cols}",
            r_side.elements.len(),
            l_side.elements.len()
        )));
    }
    let h_index: HashMap<u32, Elem> = h.iter().enumerate().map(|(k, (_, c))| (*c, k)).collect();
    let group_words: Vec<IgWord> = h.iter().map(|(w, _)| w.clone()).collect();

    let mut cayley = vec![vec![0; order]; order];
    for a in 0..order {
        for b in 0..order {
            let w = group_words[a].concat(&group_words[b]);
            let c = oracle
                .component(&w)
                .ok_or_else(|| unclosed("product of group normal forms exceeds caps".into()))?;
            cayley[a][b] =
                *h_index.get(&c).ok_or_else(|| unclosed("H-class is not closed under products within caps".into()))?;
        }
    }
    let group = FiniteGroup::from_cayley(cayley, None)
        .map_err(|e| unclosed(format!("H-class table is not a group within caps: {e}")))?;
    if group.identity() != 0 {
        return Err(unclosed("base idempotent is not the identity of its H-class within caps".into()));
    }

    let pick = |ex: &Explored, n: usize| -> Vec<IgWord> {
        (0..n)
            .map(|k| ex.elements.iter().filter(|(_, idx)| *idx == k).map(|(w, _)| w.clone()).min().unwrap())
            .collect()
    };
    let col_reps = pick(&r_side, cols);
    let row_reps = pick(&l_side, rows);

    let mut sandwich = vec![vec![None; rows]; cols];
    let row_of = |e: usize| row_ids.iter().position(|&r| r == bio.r_class(e)).unwrap();
    let col_of = |e: usize| col_ids.iter().position(|&l| l == bio.l_class(e)).unwrap();
    let idempotent_coords: Vec<(usize, usize, usize)> = members.iter().map(|&e| (e, row_of(e), col_of(e))).collect();
    for (l, rl) in col_reps.iter().enumerate() {
        for (i, qi) in row_reps.iter().enumerate() {
            let has_idem = idempotent_coords.iter().any(|&(_, a, b)| (a, b) == (i, l));
            let c = oracle.component(&rl.concat(qi));
            let found = c.and_then(|c| h_index.get(&c).copied());
            match (has_idem, found, c) {
                (true, Some(g), _) => sandwich[l][i] = Some(g),
                (false, None, _) => {}
                (true, None, None) => {
                    return Err(WordError::CapExceeded { what: "computing a sandwich entry".into(), caps }.into())
                }
                _ => {
                    return Err(ReesError::Inconsistent(format!(
                        "D-class {d}: sandwich cell ({l},{i}) disagrees with the idempotents of E"
                    )))
                }
            }
        }
    }

    let model = RegularDClassModel {
        label: format!("D[{}]", bio.name(e0)),
        dclass_id: Some(d),
        rows,
        cols,
        group: Arc::new(group),
        sandwich,
        base: (0, 0),
        realization: Some(Realization {
            base_idempotent: e0,
            row_idempotents,
            col_idempotents,
            row_reps,
            col_reps,
            group_words,
            idempotent_coords,
        }),
    };
    model.validate()?;
    Ok(model)
}

/// The word `q_i g r_lambda`, leaving out factors equal to the base idempotent.
pub fn triple_to_word(model: &RegularDClassModel, t: &Triple) -> Result<IgWord, ReesError> {
    let r = model.realization()?;
    if !model.contains(t) {
        return Err(ReesError::Invalid(format!("triple {t:?} outside model {}", model.label)));
    }
    let mut parts = Vec::new();
    if t.i != model.base.0 {
        parts.push(&r.row_reps[t.i]);
    }
    if t.g != model.group.identity() {
        parts.push(&r.group_words[t.g]);
    }
    if t.lambda != model.base.1 {
        parts.push(&r.col_reps[t.lambda]);
    }
    Ok(IgWord::concat_all(parts).unwrap_or_else(|| IgWord::letter(r.base_idempotent)))
}

/// Rees coordinates of a word lying in the model's D-class.
pub fn coordinatize(oracle: &mut Oracle, model: &RegularDClassModel, w: &IgWord) -> Result<Triple, ReesError> {
    let r = model.realization()?;
    let bio = oracle.biorder().clone();
    let outside = || ReesError::NotInThisDClass(w.display(&bio));
    let i = locate(oracle, Rel::R, w, &r.row_idempotents)?.ok_or_else(outside)?;
    let lambda = locate(oracle, Rel::L, w, &r.col_idempotents)?.ok_or_else(outside)?;
    let mu = (0..model.cols)
        .find(|&m| model.p(m, i).is_some())
        .ok_or_else(|| ReesError::Inconsistent(format!("sandwich column {i} of {} is zero", model.label)))?;
    let kappa = (0..model.rows)
        .find(|&k| model.p(lambda, k).is_some())
        .ok_or_else(|| ReesError::Inconsistent(format!("sandwich row {lambda} of {} is zero", model.label)))?;
    let g = &model.group;
    let left = &r.group_words[g.inv(model.p(mu, i).unwrap())];
    let right = &r.group_words[g.inv(model.p(lambda, kappa).unwrap())];
    let core = oracle.canonical(w).unwrap_or_else(|| w.clone());
    let t = IgWord::concat_all([left, &r.col_reps[mu], &core, &r.row_reps[kappa], right]).unwrap();
    let caps = oracle.caps();
    let ct = oracle
        .component(&t)
        .ok_or_else(|| WordError::CapExceeded { what: "translating a word into the base H-class".into(), caps })?;
    for (k, gw) in r.group_words.iter().enumerate() {
        if oracle.component(gw) == Some(ct) {
            return Ok(Triple::new(i, k, lambda));
        }
    }
    Err(ReesError::Inconsistent(format!(
        "translate of {} into the base H-class of {} is not a group element",
        w.display(&bio),
        model.label
    )))
}

/// Actions of every letter of E on every realized model.
pub fn partial_actions(oracle: &mut Oracle, models: &[RegularDClassModel]) -> Result<PartialActionTable, ReesError> {
    let bio = oracle.biorder().clone();
    let mut entries = Vec::with_capacity(bio.len());
    for e in 0..bio.len() {
        let ew = IgWord::letter(e);
        let mut row = Vec::with_capacity(models.len());
        for m in models {
            let mut ent = ActionEntry::empty(m);
            for i in 0..m.rows {
                let x = triple_to_word(m, &Triple::new(i, m.group.identity(), m.base.1))?;
                let y = ew.concat(&x);
                if let Some(t) = act(oracle, m, &x, &y, Rel::L)? {
                    if t.lambda != m.base.1 {
                        return Err(ReesError::Inconsistent("left action moved the column".into()));
                    }
                    ent.sigma[i] = Some((t.i, t.g));
                }
            }
            for l in 0..m.cols {
                let x = triple_to_word(m, &Triple::new(m.base.0, m.group.identity(), l))?;
                let y = x.concat(&ew);
                if let Some(t) = act(oracle, m, &x, &y, Rel::R)? {
                    if t.i != m.base.0 {
                        return Err(ReesError::Inconsistent("right action moved the row".into()));
                    }
                    ent.tau[l] = Some((t.lambda, t.g));
                }
            }
            row.push(ent);
        }
        entries.push(row);
    }
    Ok(PartialActionTable { letters: bio.names().to_vec(), entries })
}

fn act(
    oracle: &mut Oracle,
    m: &RegularDClassModel,
    x: &IgWord,
    y: &IgWord,
    rel: Rel,
) -> Result<Option<Triple>, ReesError> {
    match oracle.relation(rel, y, x) {
        Decision::Fails => Ok(None),
        Decision::Holds => coordinatize(oracle, m, y).map(Some),
        Decision::Unknown => {
            let caps = oracle.caps();
            Err(WordError::CapExceeded { what: "computing a partial action".into(), caps }.into())
        }
    }
}

/// Minimal r-factorisation of `w`, each block coordinatized in its model.
/// `dclass_to_model[d]` names the model of E-D-class `d`.
pub fn ig_element(
    oracle: &mut Oracle,
    w: &IgWord,
    models: &[RegularDClassModel],
    dclass_to_model: &[Option<usize>],
) -> Result<TripleChain, ReesError> {
    let f = oracle.minimal_r_factorisation(w)?;
    let mut triples = Vec::with_capacity(f.blocks.len());
    let mut fingerprint = Vec::with_capacity(f.blocks.len());
    for (block, &d) in f.blocks.iter().zip(&f.fingerprint) {
        let k = dclass_to_model.get(d).copied().flatten().ok_or(ReesError::MissingModel(d))?;
        triples.push(coordinatize(oracle, &models[k], block)?);
        fingerprint.push(k);
    }
    Ok(TripleChain::new(triples, fingerprint))
}
