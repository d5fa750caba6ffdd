//! Words over E, the rewriting presentation of IG(E), and a capped
//! search oracle for equality, Green's relations and regularity.

use std::borrow::Borrow;
use std::collections::{HashMap, HashSet};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;
use thiserror::Error;

use crate::biorder::BiorderedSet;

pub type Letter = u8;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordError {
    #[error("words must be nonempty")]
    Empty,
    #[error("letter {letter} out of range for a biorder with {size} elements")]
    LetterOutOfRange { letter: usize, size: usize },
    #[error("unknown element label {0:?}")]
    UnknownLabel(String),
    #[error("search caps exceeded while {what} (max_word_len {}, max_bfs_states {}, witness_len {})",
        caps.max_word_len, caps.max_bfs_states, caps.witness_len)]
    CapExceeded { what: String, caps: Caps },
}

/// A nonempty word over the letters of a biorder.
#[derive(Clone, PartialEq, Eq)]
pub struct IgWord(SmallVec<[Letter; 16]>);

impl Hash for IgWord {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.as_slice().hash(state)
    }
}

impl Borrow<[Letter]> for IgWord {
    fn borrow(&self) -> &[Letter] {
        &self.0
    }
}

/// Shortlex: shorter words first, then lexicographic.
impl Ord for IgWord {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.len().cmp(&other.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for IgWord {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for IgWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "w{:?}", self.0.as_slice())
    }
}

impl IgWord {
    pub fn new(letters: &[usize], bio: &BiorderedSet) -> Result<Self, WordError> {
        if letters.is_empty() {
            return Err(WordError::Empty);
        }
        if let Some(&letter) = letters.iter().find(|&&l| l >= bio.len()) {
            return Err(WordError::LetterOutOfRange { letter, size: bio.len() });
        }
        Ok(IgWord(letters.iter().map(|&l| l as Letter).collect()))
    }

    pub fn parse<S: AsRef<str>>(labels: &[S], bio: &BiorderedSet) -> Result<Self, WordError> {
        let letters = labels
            .iter()
            .map(|s| bio.index_of(s.as_ref()).ok_or_else(|| WordError::UnknownLabel(s.as_ref().into())))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(&letters, bio)
    }

    /// Panics on an empty slice; letters are not range checked.
    pub fn from_letters(letters: &[Letter]) -> Self {
        assert!(!letters.is_empty(), "empty word");
        IgWord(SmallVec::from_slice(letters))
    }

    pub fn letter(e: usize) -> Self {
        IgWord(smallvec::smallvec![e as Letter])
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn first(&self) -> usize {
        self.0[0] as usize
    }

    pub fn last(&self) -> usize {
        self.0[self.0.len() - 1] as usize
    }

    pub fn concat(&self, other: &IgWord) -> IgWord {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        IgWord(v)
    }

    pub fn concat_all<'a>(parts: impl IntoIterator<Item = &'a IgWord>) -> Option<IgWord> {
        let mut v: SmallVec<[Letter; 16]> = SmallVec::new();
        for p in parts {
            v.extend_from_slice(&p.0);
        }
        (!v.is_empty()).then_some(IgWord(v))
    }

    /// Subword on `range`, which must be nonempty.
    pub fn slice(&self, range: std::ops::Range<usize>) -> IgWord {
        IgWord::from_letters(&self.0[range])
    }

    pub fn labels(&self, bio: &BiorderedSet) -> Vec<String> {
        self.0.iter().map(|&l| bio.name(l as usize).to_string()).collect()
    }

    pub fn display(&self, bio: &BiorderedSet) -> String {
        self.labels(bio).join(" ")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Contract,
    Expand,
}

/// One relation application. `Contract` replaces letters `e f` at
/// `position, position+1` by `g`; `Expand` replaces `g` at `position` by `e f`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RewriteStep {
    pub position: usize,
    pub rule: (usize, usize, usize),
    pub direction: Direction,
}

impl RewriteStep {
    pub fn inverse(self) -> Self {
        let direction = match self.direction {
            Direction::Contract => Direction::Expand,
            Direction::Expand => Direction::Contract,
        };
        RewriteStep { direction, ..self }
    }

    /// Applies the step, returning `None` if it does not match `w` or is not
    /// a relation of `bio`.
    pub fn apply(&self, bio: &BiorderedSet, w: &IgWord) -> Option<IgWord> {
        let (e, f, g) = self.rule;
        if bio.product(e, f) != Some(g) {
            return None;
        }
        let l = w.letters();
        let p = self.position;
        let mut out: SmallVec<[Letter; 16]> = SmallVec::new();
        match self.direction {
            Direction::Contract => {
                if p + 1 >= l.len() || l[p] as usize != e || l[p + 1] as usize != f {
                    return None;
                }
                out.extend_from_slice(&l[..p]);
                out.push(g as Letter);
                out.extend_from_slice(&l[p + 2..]);
            }
            Direction::Expand => {
                if p >= l.len() || l[p] as usize != g {
                    return None;
                }
                out.extend_from_slice(&l[..p]);
                out.push(e as Letter);
                out.push(f as Letter);
                out.extend_from_slice(&l[p + 1..]);
            }
        }
        Some(IgWord(out))
    }

    pub fn labelled(&self, bio: &BiorderedSet) -> LabelledStep {
        let (e, f, g) = self.rule;
        LabelledStep {
            position: self.position,
            rule: (bio.name(e).into(), bio.name(f).into(), bio.name(g).into()),
            direction: self.direction,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelledStep {
    pub position: usize,
    pub rule: (String, String, String),
    pub direction: Direction,
}

/// All one-step rewrites of `w`, with the step producing each.
pub fn neighbors_with_steps(bio: &BiorderedSet, w: &IgWord) -> Vec<(RewriteStep, IgWord)> {
    let l = w.letters();
    let mut out = Vec::new();
    for p in 0..l.len().saturating_sub(1) {
        let (e, f) = (l[p] as usize, l[p + 1] as usize);
        if let Some(g) = bio.product(e, f) {
            let mut v: SmallVec<[Letter; 16]> = SmallVec::with_capacity(l.len() - 1);
            v.extend_from_slice(&l[..p]);
            v.push(g as Letter);
            v.extend_from_slice(&l[p + 2..]);
            let step = RewriteStep { position: p, rule: (e, f, g), direction: Direction::Contract };
            out.push((step, IgWord(v)));
        }
    }
    for p in 0..l.len() {
        let g = l[p] as usize;
        for &(e, f) in bio.factorizations(g) {
            let mut v: SmallVec<[Letter; 16]> = SmallVec::with_capacity(l.len() + 1);
            v.extend_from_slice(&l[..p]);
            v.push(e as Letter);
            v.push(f as Letter);
            v.extend_from_slice(&l[p + 1..]);
            let step = RewriteStep { position: p, rule: (e, f, g), direction: Direction::Expand };
            out.push((step, IgWord(v)));
        }
    }
    out
}

/// Words one contraction or expansion away from `w`, sorted shortlex.
pub fn rewrite_neighbors(bio: &BiorderedSet, w: &IgWord) -> Vec<IgWord> {
    let mut v: Vec<IgWord> = neighbors_with_steps(bio, w).into_iter().map(|(_, x)| x).collect();
    v.sort();
    v.dedup();
    v
}

/// A random walk of `steps` rewrites that never exceeds `max_len` letters.
pub fn random_rewrite_walk<R: Rng>(
    bio: &BiorderedSet,
    w: &IgWord,
    steps: usize,
    max_len: usize,
    rng: &mut R,
) -> IgWord {
    let mut cur = w.clone();
    for _ in 0..steps {
        let nbrs: Vec<IgWord> = neighbors_with_steps(bio, &cur)
            .into_iter()
            .map(|(_, x)| x)
            .filter(|x| x.len() <= max_len)
            .collect();
        if nbrs.is_empty() {
            break;
        }
        cur = nbrs[rng.gen_range(0..nbrs.len())].clone();
    }
    cur
}

/// Limits for every search in this module and the model builder.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Caps {
    pub max_word_len: usize,
    pub max_bfs_states: usize,
    pub witness_len: usize,
    pub max_group_order: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_word_len: 12,
            max_bfs_states: 2_000_000,
            witness_len: 6,
            max_group_order: crate::group::DEFAULT_MAX_GROUP_ORDER,
        }
    }
}

impl Caps {
    pub fn with_word_len(self, max_word_len: usize) -> Self {
        Caps { max_word_len, ..self }
    }

    pub fn validate(&self) -> Result<(), String> {
        let fields = [
            ("max_word_len", self.max_word_len),
            ("max_bfs_states", self.max_bfs_states),
            ("witness_len", self.witness_len),
            ("max_group_order", self.max_group_order),
        ];
        match fields.iter().find(|(_, v)| *v == 0) {
            Some((name, _)) => Err(format!("cap {name} must be positive")),
            None => Ok(()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Equal,
    Distinct,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    RewritePath { steps: Vec<RewriteStep> },
    AmbientImage { left: usize, right: usize },
    Fingerprint { left: Vec<usize>, right: Vec<usize> },
    None,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EqualityVerdict {
    pub status: Verdict,
    pub certificate: Certificate,
    pub caps_used: Caps,
}

impl EqualityVerdict {
    /// Rechecks the certificate from scratch. Fingerprint certificates are
    /// recomputed with a fresh oracle under the recorded caps.
    pub fn replay(&self, bio: &Arc<BiorderedSet>, u: &IgWord, v: &IgWord) -> bool {
        match (&self.status, &self.certificate) {
            (Verdict::Equal, Certificate::RewritePath { steps }) => {
                let mut cur = u.clone();
                for s in steps {
                    match s.apply(bio, &cur) {
                        Some(next) => cur = next,
                        None => return false,
                    }
                }
                cur == *v
            }
            (Verdict::Distinct, Certificate::AmbientImage { left, right }) => {
                left != right
                    && bio.ambient_image(u.letters()) == Some(*left)
                    && bio.ambient_image(v.letters()) == Some(*right)
            }
            (Verdict::Distinct, Certificate::Fingerprint { left, right }) => {
                let mut o = Oracle::new(bio.clone(), self.caps_used);
                left != right
                    && o.fingerprint(u).ok().as_ref() == Some(left)
                    && o.fingerprint(v).ok().as_ref() == Some(right)
            }
            (Verdict::Unknown, Certificate::None) => true,
            _ => false,
        }
    }
}

/// Three-valued outcome of a capped relation test.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Decision {
    Holds,
    Fails,
    Unknown,
}

impl Decision {
    pub fn and(self, other: Decision) -> Decision {
        use Decision::*;
        match (self, other) {
            (Fails, _) | (_, Fails) => Fails,
            (Holds, Holds) => Holds,
            _ => Unknown,
        }
    }

    pub fn definite(self) -> Option<bool> {
        match self {
            Decision::Holds => Some(true),
            Decision::Fails => Some(false),
            Decision::Unknown => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Rel {
    R,
    L,
    H,
    D,
    J,
}

impl std::str::FromStr for Rel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "R" => Ok(Rel::R),
            "L" => Ok(Rel::L),
            "H" => Ok(Rel::H),
            "D" => Ok(Rel::D),
            "J" => Ok(Rel::J),
            _ => Err(format!("unknown relation {s:?}, expected one of R L H D J")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Pre {
    R,
    L,
    J,
}

/// A regularity seed: `w = u e v` with `ue L e R ev`, plus idempotents
/// `f_left R w` and `f_right L w`. `position` is 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SeedWitness {
    pub position: usize,
    pub e: usize,
    pub f_left: usize,
    pub f_right: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RFactorisation {
    pub blocks: Vec<IgWord>,
    /// 1-based start of each block.
    pub coordinates: Vec<usize>,
    /// E-D-class id of each block.
    pub fingerprint: Vec<usize>,
}

impl Serialize for IgWord {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.0.as_slice().serialize(s)
    }
}

struct Component {
    words: Vec<IgWord>,
    parent: Vec<Option<(u32, RewriteStep)>>,
    canonical: u32,
}

/// Capped search engine over one biorder. Fully explored rewrite classes
/// are cached, so repeated queries about the same classes are cheap.
pub struct Oracle {
    bio: Arc<BiorderedSet>,
    caps: Caps,
    comps: Vec<Component>,
    index: HashMap<IgWord, (u32, u32)>,
    overflow: HashSet<IgWord>,
    relations: HashMap<(Pre, u32, u32), Decision>,
    regular: HashMap<u32, Option<usize>>,
    fingerprints: HashMap<u32, Vec<usize>>,
}

enum Bidirectional {
    Found(Vec<RewriteStep>),
    Exhausted,
    Capped,
}

impl Oracle {
    pub fn new(bio: Arc<BiorderedSet>, caps: Caps) -> Self {
        Oracle {
            bio,
            caps,
            comps: Vec::new(),
            index: HashMap::new(),
            overflow: HashSet::new(),
            relations: HashMap::new(),
            regular: HashMap::new(),
            fingerprints: HashMap::new(),
        }
    }

    pub fn biorder(&self) -> &Arc<BiorderedSet> {
        &self.bio
    }

    pub fn caps(&self) -> Caps {
        self.caps
    }

    fn cap_error(&self, what: impl Into<String>) -> WordError {
        WordError::CapExceeded { what: what.into(), caps: self.caps }
    }

    /// Id of the fully explored rewrite class of `w`, or `None` when the
    /// class does not fit in the caps.
    pub fn component(&mut self, w: &IgWord) -> Option<u32> {
        if let Some(&(c, _)) = self.index.get(w.letters()) {
            return Some(c);
        }
        if w.len() > self.caps.max_word_len || self.overflow.contains(w) {
            return None;
        }
        let id = self.comps.len() as u32;
        let mut local: HashMap<IgWord, u32> = HashMap::new();
        let mut words = vec![w.clone()];
        let mut parent = vec![None];
        local.insert(w.clone(), 0);
        let mut head = 0;
        while head < words.len() {
            let cur = words[head].clone();
            for (step, y) in neighbors_with_steps(&self.bio, &cur) {
                if y.len() > self.caps.max_word_len || local.contains_key(&y) {
                    continue;
                }
                if words.len() >= self.caps.max_bfs_states {
                    self.overflow.insert(w.clone());
                    return None;
                }
                local.insert(y.clone(), words.len() as u32);
                words.push(y);
                parent.push(Some((head as u32, step)));
            }
            head += 1;
        }
        let canonical = (0..words.len()).min_by(|&a, &b| words[a].cmp(&words[b])).unwrap() as u32;
        for (word, k) in local {
            self.index.insert(word, (id, k));
        }
        self.comps.push(Component { words, parent, canonical });
        Some(id)
    }

    /// Shortlex-least word of the class of `w`, when the class fits the caps.
    pub fn canonical(&mut self, w: &IgWord) -> Option<IgWord> {
        let c = self.component(w)?;
        let comp = &self.comps[c as usize];
        Some(comp.words[comp.canonical as usize].clone())
    }

    /// Number of words in the class of `w` within the length cap.
    pub fn class_size(&mut self, w: &IgWord) -> Option<usize> {
        let c = self.component(w)?;
        Some(self.comps[c as usize].words.len())
    }

    fn chain_to_root(&self, c: u32, mut k: u32) -> Vec<u32> {
        let comp = &self.comps[c as usize];
        let mut out = vec![k];
        while let Some((p, _)) = comp.parent[k as usize] {
            out.push(p);
            k = p;
        }
        out
    }

    fn path_within(&self, c: u32, a: u32, b: u32) -> Vec<RewriteStep> {
        let comp = &self.comps[c as usize];
        let ca = self.chain_to_root(c, a);
        let cb = self.chain_to_root(c, b);
        let (mut i, mut j) = (ca.len(), cb.len());
        while i > 1 && j > 1 && ca[i - 2] == cb[j - 2] {
            i -= 1;
            j -= 1;
        }
        let step = |k: u32| comp.parent[k as usize].unwrap().1;
        let mut steps: Vec<RewriteStep> = ca[..i - 1].iter().map(|&k| step(k).inverse()).collect();
        steps.extend(cb[..j - 1].iter().rev().map(|&k| step(k)));
        steps
    }

    fn bidirectional(&self, u: &IgWord, v: &IgWord) -> Bidirectional {
        let cap = self.caps.max_word_len;
        if u.len() > cap || v.len() > cap {
            return Bidirectional::Capped;
        }
        struct Side {
            words: Vec<IgWord>,
            parent: Vec<Option<(u32, RewriteStep)>>,
            map: HashMap<IgWord, u32>,
            frontier: std::ops::Range<usize>,
        }
        let init = |w: &IgWord| Side {
            words: vec![w.clone()],
            parent: vec![None],
            map: HashMap::from([(w.clone(), 0)]),
            frontier: 0..1,
        };
        let mut sides = [init(u), init(v)];
        let trace = |s: &Side, mut k: u32| {
            let mut steps = Vec::new();
            while let Some((p, st)) = s.parent[k as usize] {
                steps.push(st);
                k = p;
            }
            steps.reverse();
            steps
        };
        loop {
            let a = if sides[0].frontier.len() <= sides[1].frontier.len() { 0 } else { 1 };
            if sides[a].frontier.is_empty() {
                return Bidirectional::Exhausted;
            }
            let range = sides[a].frontier.clone();
            for k in range.clone() {
                let cur = sides[a].words[k].clone();
                for (step, y) in neighbors_with_steps(&self.bio, &cur) {
                    if y.len() > cap || sides[a].map.contains_key(&y) {
                        continue;
                    }
                    if sides[0].words.len() + sides[1].words.len() >= self.caps.max_bfs_states {
                        return Bidirectional::Capped;
                    }
                    let idx = sides[a].words.len() as u32;
                    sides[a].map.insert(y.clone(), idx);
                    sides[a].words.push(y.clone());
                    sides[a].parent.push(Some((k as u32, step)));
                    if let Some(&other) = sides[1 - a].map.get(&y) {
                        let (fi, bi) = if a == 0 { (idx, other) } else { (other, idx) };
                        let mut steps = trace(&sides[0], fi);
                        steps.extend(trace(&sides[1], bi).into_iter().rev().map(|s| s.inverse()));
                        return Bidirectional::Found(steps);
                    }
                }
            }
            let end = sides[a].words.len();
            sides[a].frontier = range.end..end;
        }
    }

    /// Three-valued equality with a certificate.
    pub fn equal(&mut self, u: &IgWord, v: &IgWord) -> EqualityVerdict {
        let caps_used = self.caps;
        let verdict = |status, certificate| EqualityVerdict { status, certificate, caps_used };
        if u == v {
            return verdict(Verdict::Equal, Certificate::RewritePath { steps: vec![] });
        }
        let indexed = (self.index.get(u.letters()).copied(), self.index.get(v.letters()).copied());
        match indexed {
            (Some((cu, a)), Some((cv, b))) => {
                if cu == cv {
                    let steps = self.path_within(cu, a, b);
                    return verdict(Verdict::Equal, Certificate::RewritePath { steps });
                }
            }
            _ => {
                if let Bidirectional::Found(steps) = self.bidirectional(u, v) {
                    return verdict(Verdict::Equal, Certificate::RewritePath { steps });
                }
            }
        }
        let (iu, iv) = (self.bio.ambient_image(u.letters()), self.bio.ambient_image(v.letters()));
        if let (Some(left), Some(right)) = (iu, iv) {
            if left != right {
                return verdict(Verdict::Distinct, Certificate::AmbientImage { left, right });
            }
        }
        if let (Ok(left), Ok(right)) = (self.fingerprint(u), self.fingerprint(v)) {
            if left != right {
                return verdict(Verdict::Distinct, Certificate::Fingerprint { left, right });
            }
        }
        verdict(Verdict::Unknown, Certificate::None)
    }

    /// Is `x` below `y` in the given preorder, i.e. `x = y t`, `x = s y` or
    /// `x = s y t` with witnesses of at most `witness_len` letters?
    fn below(&mut self, pre: Pre, x: &IgWord, y: &IgWord) -> Decision {
        let (Some(cx), Some(cy)) = (self.component(x), self.component(y)) else {
            return Decision::Unknown;
        };
        if cx == cy {
            return Decision::Holds;
        }
        if let Some(&d) = self.relations.get(&(pre, cx, cy)) {
            return d;
        }
        let wl = self.caps.witness_len;
        let in_y = |s: &[Letter]| self.index.get(s).map(|&(c, _)| c) == Some(cy);
        let mut found = false;
        'outer: for z in &self.comps[cx as usize].words {
            let l = z.letters();
            let n = l.len();
            match pre {
                Pre::R => {
                    for k in n.saturating_sub(wl).max(1)..n {
                        if in_y(&l[..k]) {
                            found = true;
                            break 'outer;
                        }
                    }
                }
                Pre::L => {
                    for k in 1..=wl.min(n - 1) {
                        if in_y(&l[k..]) {
                            found = true;
                            break 'outer;
                        }
                    }
                }
                Pre::J => {
                    for a in 0..=wl.min(n - 1) {
                        for b in (a + 1).max(n.saturating_sub(wl))..=n {
                            if (a, b) != (0, n) && in_y(&l[a..b]) {
                                found = true;
                                break 'outer;
                            }
                        }
                    }
                }
            }
        }
        let d = if found { Decision::Holds } else { Decision::Fails };
        self.relations.insert((pre, cx, cy), d);
        d
    }

    /// `x <=_R y`: some `y t` equals `x`.
    pub fn le_r(&mut self, x: &IgWord, y: &IgWord) -> Decision {
        self.below(Pre::R, x, y)
    }

    /// `x <=_L y`: some `s y` equals `x`.
    pub fn le_l(&mut self, x: &IgWord, y: &IgWord) -> Decision {
        self.below(Pre::L, x, y)
    }

    /// `x <=_J y`: some `s y t` equals `x`.
    pub fn le_j(&mut self, x: &IgWord, y: &IgWord) -> Decision {
        self.below(Pre::J, x, y)
    }

    /// Witness-search test of a Green relation. D is tested as J.
    pub fn relation(&mut self, rel: Rel, x: &IgWord, y: &IgWord) -> Decision {
        match rel {
            Rel::R => self.le_r(x, y).and(self.le_r(y, x)),
            Rel::L => self.le_l(x, y).and(self.le_l(y, x)),
            Rel::H => self.relation(Rel::R, x, y).and(self.relation(Rel::L, x, y)),
            Rel::D | Rel::J => self.le_j(x, y).and(self.le_j(y, x)),
        }
    }

    fn seed_position(&mut self, w: &IgWord) -> Result<Option<usize>, WordError> {
        let n = w.len();
        if n == 1 {
            return Ok(Some(0));
        }
        let mut unknown = false;
        for p in 0..n {
            let e = IgWord::letter(w.letters()[p] as usize);
            let left = if p == 0 { Decision::Holds } else { self.le_l(&e, &w.slice(0..p + 1)) };
            if left == Decision::Fails {
                continue;
            }
            let right = if p == n - 1 { Decision::Holds } else { self.le_r(&e, &w.slice(p..n)) };
            match left.and(right) {
                Decision::Holds => return Ok(Some(p)),
                Decision::Unknown => unknown = true,
                Decision::Fails => {}
            }
        }
        if unknown {
            Err(self.cap_error(format!("testing regularity of {}", w.display(&self.bio))))
        } else {
            Ok(None)
        }
    }

    /// `Some(d)` when `w` is regular, `d` being the E-D-class of its seed letter.
    pub fn regular_dclass(&mut self, w: &IgWord) -> Result<Option<usize>, WordError> {
        let c = self.component(w);
        if let Some(&r) = c.and_then(|c| self.regular.get(&c)) {
            return Ok(r);
        }
        let r = self.seed_position(w)?.map(|p| self.bio.d_class(w.letters()[p] as usize));
        if let Some(c) = c {
            self.regular.insert(c, r);
        }
        Ok(r)
    }

    pub fn is_regular(&mut self, w: &IgWord) -> Result<bool, WordError> {
        Ok(self.regular_dclass(w)?.is_some())
    }

    /// A seed of `w` with idempotents `f_left R w` and `f_right L w`.
    pub fn regularity_seed(&mut self, w: &IgWord) -> Result<Option<SeedWitness>, WordError> {
        let Some(p) = self.seed_position(w)? else {
            return Ok(None);
        };
        let e = w.letters()[p] as usize;
        let class = self.bio.d_classes()[self.bio.d_class(e)].clone();
        let pick = |rel: Rel, this: &mut Self| -> Result<usize, WordError> {
            for &f in &class {
                if this.relation(rel, &IgWord::letter(f), w) == Decision::Holds {
                    return Ok(f);
                }
            }
            Err(this.cap_error(format!("locating an idempotent {rel:?}-related to a regular word")))
        };
        let f_left = pick(Rel::R, self)?;
        let f_right = pick(Rel::L, self)?;
        Ok(Some(SeedWitness { position: p + 1, e, f_left, f_right }))
    }

    /// Left-greedy factorisation into longest regular prefixes.
    pub fn minimal_r_factorisation(&mut self, w: &IgWord) -> Result<RFactorisation, WordError> {
        let n = w.len();
        let mut blocks = Vec::new();
        let mut coordinates = Vec::new();
        let mut fingerprint = Vec::new();
        let mut start = 0;
        while start < n {
            let mut found = None;
            for end in (start + 1..=n).rev() {
                let block = w.slice(start..end);
                if let Some(d) = self.regular_dclass(&block)? {
                    found = Some((end, block, d));
                    break;
                }
            }
            let (end, block, d) = found.expect("single letters are regular");
            blocks.push(block);
            coordinates.push(start + 1);
            fingerprint.push(d);
            start = end;
        }
        Ok(RFactorisation { blocks, coordinates, fingerprint })
    }

    pub fn fingerprint(&mut self, w: &IgWord) -> Result<Vec<usize>, WordError> {
        let c = self.component(w);
        if let Some(fp) = c.and_then(|c| self.fingerprints.get(&c)) {
            return Ok(fp.clone());
        }
        let fp = self.minimal_r_factorisation(w)?.fingerprint;
        if let Some(c) = c {
            self.fingerprints.insert(c, fp.clone());
        }
        Ok(fp)
    }
}

/// One-shot equality check with a fresh oracle.
pub fn oracle_equal(bio: &Arc<BiorderedSet>, u: &IgWord, v: &IgWord, caps: Caps) -> EqualityVerdict {
    Oracle::new(bio.clone(), caps).equal(u, v)
}

pub fn regularity_seed(
    bio: &Arc<BiorderedSet>,
    w: &IgWord,
    caps: Caps,
) -> Result<Option<SeedWitness>, WordError> {
    Oracle::new(bio.clone(), caps).regularity_seed(w)
}

pub fn minimal_r_factorisation(
    bio: &Arc<BiorderedSet>,
    w: &IgWord,
    caps: Caps,
) -> Result<RFactorisation, WordError> {
    Oracle::new(bio.clone(), caps).minimal_r_factorisation(w)
}

/// Every word of length `1..=max_len` over `size` letters, shortlex order.
pub fn all_words(size: usize, max_len: usize) -> Vec<IgWord> {
    let mut out = Vec::new();
    let mut layer: Vec<Vec<Letter>> = vec![vec![]];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for l in 0..size {
                let mut x = w.clone();
                x.push(l as Letter);
                next.push(x);
            }
        }
        out.extend(next.iter().map(|x| IgWord::from_letters(x)));
        layer = next;
    }
    out
}
