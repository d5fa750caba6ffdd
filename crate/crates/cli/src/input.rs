//! Loading inputs and parsing element arguments.

use std::sync::Arc;

use serde_json::Value;

use ig_core::biorder::build_biorder;
use ig_core::corpus;
use ig_core::fixtures;
use ig_core::harness::{parse_input, Input};
use ig_core::rees::{ReesError, Triple, TripleChain};
use ig_core::structure::{build_natural, IgStructure, NaturalIg, StructureError};
use ig_core::theta::ThetaError;
use ig_core::words::{Caps, IgWord};

/// Why a command failed; decides the exit code.
#[derive(Debug)]
pub enum Failure {
    Input(String),
    Internal(String),
}

impl Failure {
    pub fn code(&self) -> i32 {
        match self {
            Failure::Input(_) => 1,
            Failure::Internal(_) => 2,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Input(m) | Failure::Internal(m) => m,
        }
    }
}

impl From<StructureError> for Failure {
    fn from(e: StructureError) -> Self {
        match e {
            StructureError::Rees(ReesError::Inconsistent(_)) => Failure::Internal(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

impl From<ReesError> for Failure {
    fn from(e: ReesError) -> Self {
        StructureError::from(e).into()
    }
}

impl From<ThetaError> for Failure {
    fn from(e: ThetaError) -> Self {
        if e.is_internal() {
            Failure::Internal(e.to_string())
        } else if let ThetaError::Structure(s) = e {
            s.into()
        } else {
            Failure::Input(e.to_string())
        }
    }
}

pub fn input_err(e: impl ToString) -> Failure {
    Failure::Input(e.to_string())
}

pub enum Loaded {
    Natural(NaturalIg),
    Synthetic(IgStructure),
}

impl Loaded {
    pub fn structure(&self) -> &IgStructure {
        match self {
            Loaded::Natural(n) => &n.structure,
            Loaded::Synthetic(s) => s,
        }
    }
}

/// `corpus:NAME`, `fixture:NAME`, or a path to a JSON file.
pub fn load(source: &str, caps: Caps) -> Result<Loaded, Failure> {
    caps.validate().map_err(Failure::Input)?;
    if let Some(name) = source.strip_prefix("corpus:") {
        let t = corpus::by_name(name).ok_or_else(|| Failure::Input(format!("no corpus entry {name:?}")))?;
        let bio = build_biorder(&t).map_err(input_err)?;
        return Ok(Loaded::Natural(build_natural(name, Arc::new(bio), caps)?));
    }
    if let Some(name) = source.strip_prefix("fixture:") {
        let f = fixtures::by_name(name).ok_or_else(|| Failure::Input(format!("no fixture {name:?}")))?;
        return Ok(Loaded::Synthetic(f.structure));
    }
    let text = std::fs::read_to_string(source).map_err(|e| Failure::Input(format!("{source}: {e}")))?;
    let input = parse_input(&text).map_err(|e| Failure::Input(format!("{source}: {e}")))?;
    let name = std::path::Path::new(source).file_stem().and_then(|s| s.to_str()).unwrap_or(source).to_string();
    match input {
        Input::Synthetic(mut spec) => {
            if spec.name.is_empty() {
                spec.name = name;
            }
            Ok(Loaded::Synthetic(IgStructure::from_spec(spec, caps.max_group_order)?))
        }
        other => {
            let bio = other.biorder().map_err(|e| Failure::Input(format!("{source}: {e}")))?.expect("natural input");
            Ok(Loaded::Natural(build_natural(&name, Arc::new(bio), caps)?))
        }
    }
}

/// A word: letter labels separated by commas or whitespace.
pub fn parse_word(nat: &NaturalIg, s: &str) -> Result<IgWord, Failure> {
    let labels: Vec<&str> = s.split(|c: char| c == ',' || c.is_whitespace()).filter(|x| !x.is_empty()).collect();
    IgWord::parse(&labels, nat.oracle.biorder()).map_err(input_err)
}

fn group_elem(st: &IgStructure, model: usize, g: &Value) -> Result<usize, Failure> {
    let m = st.models.get(model).ok_or_else(|| Failure::Input(format!("no model {model}")))?;
    let found = match g {
        Value::Number(n) => n.as_u64().map(|x| x as usize).filter(|&x| x < m.group.order()),
        Value::String(s) => m.group.element_named(s).or_else(|| s.parse().ok().filter(|&x: &usize| x < m.group.order())),
        _ => None,
    };
    found.ok_or_else(|| Failure::Input(format!("{g} is not an element of the group of model {model}")))
}

/// A triple chain, either as the JSON array printed by reports
/// (`[{"model":0,"i":0,"g":"(12)","lambda":1}, ...]`) or compactly as
/// `model:i:g:lambda` blocks joined by `/`.
pub fn parse_chain(st: &IgStructure, s: &str) -> Result<TripleChain, Failure> {
    let mut triples = Vec::new();
    let mut fingerprint = Vec::new();
    if s.trim_start().starts_with('[') {
        let v: Vec<Value> = serde_json::from_str(s).map_err(|e| Failure::Input(format!("chain: {e}")))?;
        for b in &v {
            let field = |k: &str| {
                b.get(k)
                    .and_then(Value::as_u64)
                    .map(|x| x as usize)
                    .ok_or_else(|| Failure::Input(format!("chain block {b} lacks {k}")))
            };
            let model = field("model")?;
            let g = group_elem(st, model, b.get("g").unwrap_or(&Value::Null))?;
            triples.push(Triple::new(field("i")?, g, field("lambda")?));
            fingerprint.push(model);
        }
    } else {
        for block in s.split('/') {
            let parts: Vec<&str> = block.split(':').collect();
            let [m, i, g, l] = parts[..] else {
                return Err(Failure::Input(format!("chain block {block:?} is not model:i:g:lambda")));
            };
            let num = |x: &str| x.trim().parse::<usize>().map_err(|_| Failure::Input(format!("{x:?} is not an index")));
            let model = num(m)?;
            let g = group_elem(st, model, &Value::String(g.trim().into()))?;
            triples.push(Triple::new(num(i)?, g, num(l)?));
            fingerprint.push(model);
        }
    }
    let c = TripleChain::new(triples, fingerprint);
    st.validate_chain(&c)?;
    Ok(c)
}

/// An element argument: a chain for synthetic inputs, and a word (or a
/// chain, if it looks like one) for natural inputs. Returns the word too
/// when one was given.
pub fn parse_element(loaded: &mut Loaded, s: &str) -> Result<(TripleChain, Option<IgWord>), Failure> {
    let looks_like_chain = s.trim_start().starts_with('[') || s.contains(':');
    match loaded {
        Loaded::Synthetic(st) => Ok((parse_chain(st, s)?, None)),
        Loaded::Natural(nat) if looks_like_chain => {
            let c = parse_chain(&nat.structure, s)?;
            let w = nat.word_of(&c)?;
            Ok((c, Some(w)))
        }
        Loaded::Natural(nat) => {
            let w = parse_word(nat, s)?;
            Ok((nat.element(&w)?, Some(w)))
        }
    }
}
