//! Coset propagation through contact automata: the maps theta and theta-bar,
//! equality and Green's relations of triple chains, Schützenberger groups
//! and D-class census.

use serde::Serialize;
use thiserror::Error;

use crate::contact::ContactError;
use crate::group::{coset_intersect, quotient, Coset, Elem, FiniteGroup, GroupError, Subgroup};
use crate::rees::TripleChain;
use crate::structure::{IgStructure, StructureError};
use crate::words::Rel;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ThetaError {
    #[error("fingerprints differ: {left:?} vs {right:?}")]
    FingerprintMismatch { left: Vec<usize>, right: Vec<usize> },
    #[error("no contact automaton from model {0} to model {1}")]
    MissingAutomaton(usize, usize),
    #[error("start set does not lie in the group of model {0}")]
    WrongGroup(usize),
    #[error("{what} is not normal in its ambient group (conjugating by element {by})")]
    NormalityViolation { what: String, by: Elem },
    #[error("internal consistency failure: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error(transparent)]
    Contact(#[from] ContactError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

impl ThetaError {
    /// Errors that mean the engine contradicted itself rather than being
    /// handed bad input.
    pub fn is_internal(&self) -> bool {
        matches!(self, ThetaError::NormalityViolation { .. } | ThetaError::Inconsistent(_))
    }
}

/// One boundary crossing of a propagation.
#[derive(Clone, Debug, Serialize)]
pub struct ThetaStep {
    /// Index of the left block of the boundary, 0-based.
    pub boundary: usize,
    pub automaton: (usize, usize),
    pub input: Coset,
    pub transformed: Coset,
    pub from_vertex: (usize, usize),
    pub to_vertex: (usize, usize),
    pub walk_coset: Option<Coset>,
    pub intersection: Option<Coset>,
    pub output: Option<Coset>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ThetaResult {
    /// `None` is the empty set.
    pub value: Option<Coset>,
    pub trace: Vec<ThetaStep>,
}

fn check_pair(st: &IgStructure, u: &TripleChain, v: &TripleChain) -> Result<(), ThetaError> {
    st.validate_chain(u)?;
    st.validate_chain(v)?;
    if u.fingerprint != v.fingerprint {
        return Err(ThetaError::FingerprintMismatch { left: u.fingerprint.clone(), right: v.fingerprint.clone() });
    }
    Ok(())
}

fn check_group(st: &IgStructure, c: &Coset, model: usize) -> Result<(), ThetaError> {
    let g = &st.models[model].group;
    if std::sync::Arc::ptr_eq(c.group(), g) || **c.group() == **g {
        Ok(())
    } else {
        Err(ThetaError::WrongGroup(model))
    }
}

/// Re-homes a coset onto the group object of `model` when it was built over
/// an equal but distinct group value.
fn rehome(st: &IgStructure, c: &Coset, model: usize) -> Coset {
    let g = &st.models[model].group;
    if std::sync::Arc::ptr_eq(c.group(), g) {
        return c.clone();
    }
    let r = c.to_right();
    let h = Subgroup::from_elements(g, r.subgroup().elements()).expect("equal groups");
    Coset::right(h, r.representative())
}

/// `(A, u, v) theta`: propagates a coset of `G_1` left to right, giving a
/// coset of `G_m`.
pub fn theta(st: &IgStructure, start: &Coset, u: &TripleChain, v: &TripleChain) -> Result<ThetaResult, ThetaError> {
    check_pair(st, u, v)?;
    let fp = &u.fingerprint;
    check_group(st, start, fp[0])?;
    let mut cur = rehome(st, start, fp[0]);
    let mut trace = Vec::new();
    for k in 0..fp.len() - 1 {
        let (p, q) = (fp[k], fp[k + 1]);
        let aut = st.automaton(p, q).ok_or(ThetaError::MissingAutomaton(p, q))?;
        let g = &st.models[p].group;
        let (a, b) = (u.triples[k].g, v.triples[k].g);
        let transformed = if k == 0 { cur.clone() } else { cur.inverse().mul_left(g.inv(a)).mul_right(b) };
        let s = transformed.to_right();
        let dp = &aut.product;
        let tall = Coset::right(dp.tall(s.subgroup()), dp.pair(s.representative(), st.models[q].group.identity()));
        let from_vertex = (u.triples[k].lambda, u.triples[k + 1].i);
        let to_vertex = (v.triples[k].lambda, v.triples[k + 1].i);
        let walk = aut.graph.walk_coset(aut.vertex(from_vertex.0, from_vertex.1), aut.vertex(to_vertex.0, to_vertex.1))?;
        let inter = match &walk {
            Some(w) => coset_intersect(&tall, w)?,
            None => None,
        };
        let output = inter.as_ref().map(|c| dp.project2_coset(c));
        trace.push(ThetaStep {
            boundary: k,
            automaton: (p, q),
            input: cur,
            transformed,
            from_vertex,
            to_vertex,
            walk_coset: walk,
            intersection: inter,
            output: output.clone(),
        });
        match output {
            Some(o) => cur = o,
            None => return Ok(ThetaResult { value: None, trace }),
        }
    }
    Ok(ThetaResult { value: Some(cur), trace })
}

/// `theta-bar(u, v, B)`: propagates a coset of `G_m` right to left, giving
/// a coset of `G_1`.
pub fn theta_bar(st: &IgStructure, u: &TripleChain, v: &TripleChain, start: &Coset) -> Result<ThetaResult, ThetaError> {
    check_pair(st, u, v)?;
    let fp = &u.fingerprint;
    let m = fp.len();
    check_group(st, start, fp[m - 1])?;
    let mut cur = rehome(st, start, fp[m - 1]);
    let mut trace = Vec::new();
    for k in (0..m - 1).rev() {
        let (p, q) = (fp[k], fp[k + 1]);
        let aut = st.automaton(p, q).ok_or(ThetaError::MissingAutomaton(p, q))?;
        let g = &st.models[q].group;
        let (a, b) = (u.triples[k + 1].g, v.triples[k + 1].g);
        let transformed = if k == m - 2 { cur.clone() } else { cur.inverse().mul_left(b).mul_right(g.inv(a)) };
        let s = transformed.to_left();
        let dp = &aut.product;
        let wide = Coset::right(dp.wide(s.subgroup()), dp.pair(st.models[p].group.identity(), s.representative()));
        let from_vertex = (u.triples[k].lambda, u.triples[k + 1].i);
        let to_vertex = (v.triples[k].lambda, v.triples[k + 1].i);
        let walk = aut.graph.walk_coset(aut.vertex(from_vertex.0, from_vertex.1), aut.vertex(to_vertex.0, to_vertex.1))?;
        let inter = match &walk {
            Some(w) => coset_intersect(&wide, w)?,
            None => None,
        };
        let output = inter.as_ref().map(|c| dp.project1_coset(c));
        trace.push(ThetaStep {
            boundary: k,
            automaton: (p, q),
            input: cur,
            transformed,
            from_vertex,
            to_vertex,
            walk_coset: walk,
            intersection: inter,
            output: output.clone(),
        });
        match output {
            Some(o) => cur = o,
            None => return Ok(ThetaResult { value: None, trace }),
        }
    }
    Ok(ThetaResult { value: Some(cur.to_left()), trace })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EqualityReason {
    FingerprintMismatch,
    SingleBlock,
    FirstRowDiffers,
    LastColumnDiffers,
    ThetaEmpty,
    TargetOutsideTheta,
    TargetInTheta,
}

#[derive(Clone, Debug, Serialize)]
pub struct EqualityDecision {
    pub equal: bool,
    pub reason: EqualityReason,
    /// `b_m a_m^-1`, for chains of length at least two.
    pub target: Option<Elem>,
    pub theta: Option<ThetaResult>,
}

/// Decides whether two chains denote the same element of IG(E).
pub fn ig_equal(st: &IgStructure, u: &TripleChain, v: &TripleChain) -> Result<EqualityDecision, ThetaError> {
    st.validate_chain(u)?;
    st.validate_chain(v)?;
    let done = |equal, reason| Ok(EqualityDecision { equal, reason, target: None, theta: None });
    if u.fingerprint != v.fingerprint {
        return done(false, EqualityReason::FingerprintMismatch);
    }
    if u.len() == 1 {
        return done(u.triples == v.triples, EqualityReason::SingleBlock);
    }
    if u.first().i != v.first().i {
        return done(false, EqualityReason::FirstRowDiffers);
    }
    if u.last().lambda != v.last().lambda {
        return done(false, EqualityReason::LastColumnDiffers);
    }
    let g1 = &st.models[u.fingerprint[0]].group;
    let gm = &st.models[u.fingerprint[u.len() - 1]].group;
    let start = Coset::singleton(g1, g1.mul(g1.inv(u.first().g), v.first().g));
    let target = gm.mul(v.last().g, gm.inv(u.last().g));
    let t = theta(st, &start, u, v)?;
    let (equal, reason) = match &t.value {
        None => (false, EqualityReason::ThetaEmpty),
        Some(c) if c.contains(target) => (true, EqualityReason::TargetInTheta),
        Some(_) => (false, EqualityReason::TargetOutsideTheta),
    };
    Ok(EqualityDecision { equal, reason, target: Some(target), theta: Some(t) })
}

fn first_start(st: &IgStructure, u: &TripleChain, v: &TripleChain) -> Coset {
    let g = &st.models[u.fingerprint[0]].group;
    Coset::singleton(g, g.mul(g.inv(u.first().g), v.first().g))
}

fn last_target(st: &IgStructure, u: &TripleChain, v: &TripleChain) -> Coset {
    let g = &st.models[u.fingerprint[u.len() - 1]].group;
    Coset::singleton(g, g.mul(v.last().g, g.inv(u.last().g)))
}

fn group_of<'a>(st: &'a IgStructure, c: &TripleChain, last: bool) -> &'a std::sync::Arc<FiniteGroup> {
    let k = if last { c.len() - 1 } else { 0 };
    &st.models[c.fingerprint[k]].group
}

fn single_block(u: &TripleChain, v: &TripleChain, rel: Rel) -> bool {
    let (x, y) = (u.first(), v.first());
    match rel {
        Rel::R => x.i == y.i,
        Rel::L => x.lambda == y.lambda,
        Rel::H => x.i == y.i && x.lambda == y.lambda,
        Rel::D | Rel::J => true,
    }
}

/// Green's relation `rel` between two chains, through theta.
pub fn green(st: &IgStructure, u: &TripleChain, v: &TripleChain, rel: Rel) -> Result<bool, ThetaError> {
    st.validate_chain(u)?;
    st.validate_chain(v)?;
    if u.fingerprint != v.fingerprint {
        return Ok(false);
    }
    if u.len() == 1 {
        return Ok(single_block(u, v, rel));
    }
    let r = || -> Result<bool, ThetaError> {
        if u.first().i != v.first().i {
            return Ok(false);
        }
        Ok(theta(st, &first_start(st, u, v), u, v)?.value.is_some())
    };
    let l = || -> Result<bool, ThetaError> {
        if u.last().lambda != v.last().lambda {
            return Ok(false);
        }
        let whole = Coset::whole(group_of(st, u, false));
        let t = last_target(st, u, v).representative();
        Ok(theta(st, &whole, u, v)?.value.is_some_and(|c| c.contains(t)))
    };
    match rel {
        Rel::R => r(),
        Rel::L => l(),
        Rel::H => Ok(r()? && l()?),
        Rel::D | Rel::J => Ok(theta(st, &Coset::whole(group_of(st, u, false)), u, v)?.value.is_some()),
    }
}

/// Green's relation `rel` between two chains, through theta-bar.
pub fn green_dual(st: &IgStructure, u: &TripleChain, v: &TripleChain, rel: Rel) -> Result<bool, ThetaError> {
    st.validate_chain(u)?;
    st.validate_chain(v)?;
    if u.fingerprint != v.fingerprint {
        return Ok(false);
    }
    if u.len() == 1 {
        return Ok(single_block(u, v, rel));
    }
    let r = || -> Result<bool, ThetaError> {
        if u.first().i != v.first().i {
            return Ok(false);
        }
        let whole = Coset::whole(group_of(st, u, true));
        let t = first_start(st, u, v).representative();
        Ok(theta_bar(st, u, v, &whole)?.value.is_some_and(|c| c.contains(t)))
    };
    let l = || -> Result<bool, ThetaError> {
        if u.last().lambda != v.last().lambda {
            return Ok(false);
        }
        Ok(theta_bar(st, u, v, &last_target(st, u, v))?.value.is_some())
    };
    match rel {
        Rel::R => r(),
        Rel::L => l(),
        Rel::H => Ok(r()? && l()?),
        Rel::D | Rel::J => Ok(theta_bar(st, u, v, &Coset::whole(group_of(st, u, true)))?.value.is_some()),
    }
}

/// Equality through theta-bar: `a_1^-1 b_1` in `theta-bar(u, v, {b_m a_m^-1})`.
pub fn ig_equal_dual(st: &IgStructure, u: &TripleChain, v: &TripleChain) -> Result<bool, ThetaError> {
    st.validate_chain(u)?;
    st.validate_chain(v)?;
    if u.fingerprint != v.fingerprint {
        return Ok(false);
    }
    if u.len() == 1 {
        return Ok(u.triples == v.triples);
    }
    if u.first().i != v.first().i || u.last().lambda != v.last().lambda {
        return Ok(false);
    }
    let t = first_start(st, u, v).representative();
    Ok(theta_bar(st, u, v, &last_target(st, u, v))?.value.is_some_and(|c| c.contains(t)))
}

fn subgroup_value(what: &str, r: ThetaResult) -> Result<Subgroup, ThetaError> {
    r.value
        .as_ref()
        .and_then(Coset::as_subgroup)
        .ok_or_else(|| ThetaError::Inconsistent(format!("{what} is not a subgroup")))
}

fn checked_quotient(what: &str, k: &Subgroup, l: &Subgroup) -> Result<FiniteGroup, ThetaError> {
    if !l.is_subset_of(k) {
        return Err(ThetaError::Inconsistent(format!("{what}: kernel is not contained in the group")));
    }
    if let Some(by) = l.normality_witness(k) {
        return Err(ThetaError::NormalityViolation { what: what.into(), by });
    }
    Ok(quotient(k, l)?)
}

/// The Schützenberger group of the H-class of `x` as `K / L`.
#[derive(Clone, Debug, Serialize)]
pub struct SchutzDescriptor {
    /// Model whose group contains `K` and `L`.
    pub ambient_model: usize,
    pub k: Subgroup,
    pub l: Subgroup,
    pub quotient: FiniteGroup,
    /// The same group computed through theta-bar, inside `G_1`.
    pub dual_ambient_model: usize,
    pub dual_k: Subgroup,
    pub dual_l: Subgroup,
    pub dual_quotient_order: usize,
}

impl SchutzDescriptor {
    pub fn order(&self) -> usize {
        self.quotient.order()
    }
}

pub fn schutzenberger(st: &IgStructure, x: &TripleChain) -> Result<SchutzDescriptor, ThetaError> {
    st.validate_chain(x)?;
    let (first, last) = (x.fingerprint[0], x.fingerprint[x.len() - 1]);
    let g1 = &st.models[first].group;
    let gm = &st.models[last].group;
    if x.len() == 1 {
        return Ok(SchutzDescriptor {
            ambient_model: last,
            k: Subgroup::whole(gm),
            l: Subgroup::trivial(gm),
            quotient: (**gm).clone(),
            dual_ambient_model: first,
            dual_k: Subgroup::whole(g1),
            dual_l: Subgroup::trivial(g1),
            dual_quotient_order: g1.order(),
        });
    }
    let k = subgroup_value("theta(G_1, x, x)", theta(st, &Coset::whole(g1), x, x)?)?;
    let l = subgroup_value("theta({1}, x, x)", theta(st, &Coset::singleton(g1, g1.identity()), x, x)?)?;
    let q = checked_quotient("theta({1}, x, x) in theta(G_1, x, x)", &k, &l)?;
    let dk = subgroup_value("theta-bar(x, x, G_m)", theta_bar(st, x, x, &Coset::whole(gm))?)?;
    let dl = subgroup_value("theta-bar(x, x, {1})", theta_bar(st, x, x, &Coset::singleton(gm, gm.identity()))?)?;
    let dq = checked_quotient("theta-bar(x, x, {1}) in theta-bar(x, x, G_m)", &dk, &dl)?;
    if dq.order() != q.order() {
        return Err(ThetaError::Inconsistent(format!(
            "Schützenberger group order {} through theta but {} through theta-bar",
            q.order(),
            dq.order()
        )));
    }
    Ok(SchutzDescriptor {
        ambient_model: last,
        k,
        l,
        quotient: q,
        dual_ambient_model: first,
        dual_k: dk,
        dual_l: dl,
        dual_quotient_order: dq.order(),
    })
}

/// Counts for the D-class of an element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CensusReport {
    pub r_classes: usize,
    pub l_classes: usize,
    pub h_class_size: usize,
    pub r_class_size: usize,
    pub l_class_size: usize,
    pub d_class_size: usize,
}

pub fn dclass_census(st: &IgStructure, x: &TripleChain) -> Result<CensusReport, ThetaError> {
    st.validate_chain(x)?;
    let (first, last) = (x.fingerprint[0], x.fingerprint[x.len() - 1]);
    let (m1, mm) = (&st.models[first], &st.models[last]);
    if x.len() == 1 {
        let n = m1.group.order();
        return Ok(CensusReport {
            r_classes: m1.rows,
            l_classes: m1.cols,
            h_class_size: n,
            r_class_size: m1.cols * n,
            l_class_size: m1.rows * n,
            d_class_size: m1.rows * m1.cols * n,
        });
    }
    let gm = &mm.group;
    let s = schutzenberger(st, x)?;
    let bar_e = subgroup_value("theta-bar(x, x, {1})", theta_bar(st, x, x, &Coset::singleton(gm, gm.identity()))?)?;
    let (i1, lm) = (m1.rows, mm.cols);
    let report = CensusReport {
        r_classes: i1 * s.dual_k.index(),
        l_classes: lm * s.k.index(),
        h_class_size: s.order(),
        r_class_size: lm * s.l.index(),
        l_class_size: i1 * bar_e.index(),
        d_class_size: i1 * lm * bar_e.index() * s.k.index(),
    };
    let alt = i1 * lm * s.dual_k.index() * s.l.index();
    if report.d_class_size != alt
        || report.d_class_size != report.r_classes * report.r_class_size
        || report.d_class_size != report.l_classes * report.l_class_size
    {
        return Err(ThetaError::Inconsistent(format!("D-class counts disagree: {report:?}, alternative size {alt}")));
    }
    Ok(report)
}
