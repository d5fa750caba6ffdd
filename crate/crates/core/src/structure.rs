//! The assembled data the theta engine works over: regular D-class models,
//! the partial action table and every pairwise contact automaton.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::biorder::BiorderedSet;
use crate::contact::{build_contact, ContactAutomaton, ContactError};
use crate::group::DEFAULT_MAX_GROUP_ORDER;
use crate::rees::{
    build_dclass_model, ig_element, partial_actions, triple_to_word, PartialActionTable, ReesError, RegularDClassModel,
    TripleChain,
};
use crate::words::{Caps, IgWord, Oracle};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StructureError {
    #[error(transparent)]
    Rees(#[from] ReesError),
    #[error("contact automaton {source_model} -> {target_model}: {error}")]
    Contact { source_model: usize, target_model: usize, error: ContactError },
    #[error("invalid triple chain: {0}")]
    InvalidChain(String),
}

/// Input format for structures given directly by models and actions.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SyntheticSpec {
    #[serde(default)]
    pub name: String,
    pub models: Vec<RegularDClassModel>,
    pub actions: PartialActionTable,
}

#[derive(Clone, Debug)]
pub struct IgStructure {
    pub name: String,
    pub models: Vec<RegularDClassModel>,
    pub actions: PartialActionTable,
    automata: BTreeMap<(usize, usize), ContactAutomaton>,
    max_group_order: usize,
}

impl IgStructure {
    /// Validates models and actions and builds the contact automaton of
    /// every ordered pair of models.
    pub fn assemble(
        name: impl Into<String>,
        models: Vec<RegularDClassModel>,
        actions: PartialActionTable,
        max_group_order: usize,
    ) -> Result<Self, StructureError> {
        let mut s = IgStructure { name: name.into(), models, actions, automata: BTreeMap::new(), max_group_order };
        s.validate()?;
        s.rebuild_automata()?;
        Ok(s)
    }

    pub fn from_spec(spec: SyntheticSpec, max_group_order: usize) -> Result<Self, StructureError> {
        Self::assemble(spec.name, spec.models, spec.actions, max_group_order)
    }

    pub fn to_spec(&self) -> SyntheticSpec {
        SyntheticSpec { name: self.name.clone(), models: self.models.clone(), actions: self.actions.clone() }
    }

    /// Re-checks models and actions, e.g. after they were edited in place.
    pub fn validate(&self) -> Result<(), StructureError> {
        for m in &self.models {
            m.validate()?;
        }
        self.actions.validate(&self.models)?;
        Ok(())
    }

    pub fn rebuild_automata(&mut self) -> Result<(), StructureError> {
        self.automata.clear();
        for a in 0..self.models.len() {
            for b in 0..self.models.len() {
                let c = build_contact(a, &self.models[a], b, &self.models[b], &self.actions, self.max_group_order)
                    .map_err(|error| StructureError::Contact { source_model: a, target_model: b, error })?;
                self.automata.insert((a, b), c);
            }
        }
        Ok(())
    }

    pub fn automaton(&self, source: usize, target: usize) -> Option<&ContactAutomaton> {
        self.automata.get(&(source, target))
    }

    pub fn automaton_mut(&mut self, source: usize, target: usize) -> Option<&mut ContactAutomaton> {
        self.automata.get_mut(&(source, target))
    }

    pub fn automata(&self) -> impl Iterator<Item = &ContactAutomaton> {
        self.automata.values()
    }

    pub fn max_group_order(&self) -> usize {
        self.max_group_order
    }

    pub fn validate_chain(&self, c: &TripleChain) -> Result<(), StructureError> {
        let bad = |m: String| Err(StructureError::InvalidChain(m));
        if c.is_empty() {
            return bad("empty chain".into());
        }
        if c.triples.len() != c.fingerprint.len() {
            return bad("fingerprint length differs from number of triples".into());
        }
        for (k, (t, &m)) in c.triples.iter().zip(&c.fingerprint).enumerate() {
            let Some(model) = self.models.get(m) else {
                return bad(format!("block {k}: no model {m}"));
            };
            if !model.contains(t) {
                return bad(format!("block {k}: triple ({}, {}, {}) outside model {m}", t.i, t.g, t.lambda));
            }
        }
        Ok(())
    }
}

/// A model build that gave up within the caps.
#[derive(Clone, Debug, PartialEq)]
pub struct ModelFailure {
    pub dclass: usize,
    pub error: ReesError,
}

/// The structure of IG(E) for a concrete biordered set, together with the
/// oracle used to build it.
pub struct NaturalIg {
    pub oracle: Oracle,
    pub structure: IgStructure,
    /// Model index of each E-D-class, `None` where the build failed.
    pub dclass_to_model: Vec<Option<usize>>,
    pub failures: Vec<ModelFailure>,
}

pub fn build_natural(name: &str, bio: Arc<BiorderedSet>, caps: Caps) -> Result<NaturalIg, StructureError> {
    let mut oracle = Oracle::new(bio.clone(), caps);
    let mut models = Vec::new();
    let mut dclass_to_model = vec![None; bio.d_classes().len()];
    let mut failures = Vec::new();
    for (d, slot) in dclass_to_model.iter_mut().enumerate() {
        match build_dclass_model(&mut oracle, d) {
            Ok(m) => {
                *slot = Some(models.len());
                models.push(m);
            }
            Err(error @ ReesError::GroupNotFiniteWithinCap { .. }) => failures.push(ModelFailure { dclass: d, error }),
            Err(e) => return Err(e.into()),
        }
    }
    let actions = partial_actions(&mut oracle, &models)?;
    let max = if caps.max_group_order == 0 { DEFAULT_MAX_GROUP_ORDER } else { caps.max_group_order };
    let structure = IgStructure::assemble(name, models, actions, max)?;
    Ok(NaturalIg { oracle, structure, dclass_to_model, failures })
}

impl NaturalIg {
    pub fn element(&mut self, w: &IgWord) -> Result<TripleChain, StructureError> {
        Ok(ig_element(&mut self.oracle, w, &self.structure.models, &self.dclass_to_model)?)
    }

    /// A word representing a chain: the concatenation of its blocks' words.
    pub fn word_of(&self, c: &TripleChain) -> Result<IgWord, StructureError> {
        self.structure.validate_chain(c)?;
        let parts = c
            .triples
            .iter()
            .zip(&c.fingerprint)
            .map(|(t, &m)| triple_to_word(&self.structure.models[m], t))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(IgWord::concat_all(&parts).expect("chains are non-empty"))
    }
}
