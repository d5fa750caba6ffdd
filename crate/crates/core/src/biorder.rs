//! Finite semigroup tables and the biordered sets of their idempotents.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Letters are stored in a byte, which bounds the size of E.
pub const MAX_IDEMPOTENTS: usize = 255;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BiorderError {
    #[error("semigroup table must be nonempty")]
    Empty,
    #[error("table row {row} has length {len}, expected {size}")]
    NotSquare { row: usize, len: usize, size: usize },
    #[error("table entry {value} at ({row},{col}) is out of range")]
    OutOfRange { row: usize, col: usize, value: usize },
    #[error("expected {expected} element names, got {got}")]
    NameCount { expected: usize, got: usize },
    #[error("duplicate element name {0:?}")]
    DuplicateName(String),
    #[error("table is not associative: ({a}{b}){c} != {a}({b}{c})")]
    NonAssociative { a: String, b: String, c: String },
    #[error("semigroup has no idempotents")]
    NoIdempotents,
    #[error("{count} idempotents exceed the supported maximum of {MAX_IDEMPOTENTS}")]
    TooManyIdempotents { count: usize },
    #[error("biorder sanity violation at ({}, {}): {reason}", pair.0, pair.1)]
    SanityViolation { pair: (String, String), reason: String },
}

/// A finite semigroup given by its full multiplication table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "TableRepr", into = "TableRepr")]
pub struct SemigroupTable {
    table: Vec<Vec<usize>>,
    names: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct TableRepr {
    size: usize,
    table: Vec<Vec<usize>>,
    #[serde(default)]
    names: Option<Vec<String>>,
}

impl TryFrom<TableRepr> for SemigroupTable {
    type Error = BiorderError;

    fn try_from(r: TableRepr) -> Result<Self, BiorderError> {
        if r.table.len() != r.size {
            return Err(BiorderError::NotSquare { row: r.table.len(), len: 0, size: r.size });
        }
        SemigroupTable::new(r.table, r.names)
    }
}

impl From<SemigroupTable> for TableRepr {
    fn from(t: SemigroupTable) -> Self {
        TableRepr { size: t.table.len(), table: t.table, names: Some(t.names) }
    }
}

impl SemigroupTable {
    /// Validates shape, range and associativity. Missing names default to indices.
    pub fn new(table: Vec<Vec<usize>>, names: Option<Vec<String>>) -> Result<Self, BiorderError> {
        let n = table.len();
        if n == 0 {
            return Err(BiorderError::Empty);
        }
        let names = names.unwrap_or_else(|| (0..n).map(|i| i.to_string()).collect());
        if names.len() != n {
            return Err(BiorderError::NameCount { expected: n, got: names.len() });
        }
        check_unique(&names)?;
        for (row, r) in table.iter().enumerate() {
            if r.len() != n {
                return Err(BiorderError::NotSquare { row, len: r.len(), size: n });
            }
            if let Some((col, &value)) = r.iter().enumerate().find(|(_, &v)| v >= n) {
                return Err(BiorderError::OutOfRange { row, col, value });
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = table[a][b];
                for c in 0..n {
                    if table[ab][c] != table[a][table[b][c]] {
                        return Err(BiorderError::NonAssociative {
                            a: names[a].clone(),
                            b: names[b].clone(),
                            c: names[c].clone(),
                        });
                    }
                }
            }
        }
        Ok(SemigroupTable { table, names })
    }

    pub fn size(&self) -> usize {
        self.table.len()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn idempotents(&self) -> Vec<usize> {
        (0..self.size()).filter(|&e| self.mul(e, e) == e).collect()
    }

    /// `a S1 = b S1`.
    pub fn r_related(&self, a: usize, b: usize) -> bool {
        let ideal = |x: usize| {
            let mut v: Vec<usize> = (0..self.size()).map(|s| self.mul(x, s)).collect();
            v.push(x);
            v.sort_unstable();
            v.dedup();
            v
        };
        ideal(a) == ideal(b)
    }

    /// `S1 a = S1 b`.
    pub fn l_related(&self, a: usize, b: usize) -> bool {
        let ideal = |x: usize| {
            let mut v: Vec<usize> = (0..self.size()).map(|s| self.mul(s, x)).collect();
            v.push(x);
            v.sort_unstable();
            v.dedup();
            v
        };
        ideal(a) == ideal(b)
    }
}

fn check_unique(names: &[String]) -> Result<(), BiorderError> {
    let mut seen = std::collections::HashSet::new();
    for n in names {
        if !seen.insert(n.as_str()) {
            return Err(BiorderError::DuplicateName(n.clone()));
        }
    }
    Ok(())
}

/// The semigroup a biorder was read from, with the embedding of E into it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Ambient {
    pub table: SemigroupTable,
    pub embedding: Vec<usize>,
}

/// A finite biordered set: idempotents with products recorded on basic pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiorderedSet {
    names: Vec<String>,
    products: Vec<Option<usize>>,
    factorizations: Vec<Vec<(usize, usize)>>,
    r_class: Vec<usize>,
    l_class: Vec<usize>,
    d_class: Vec<usize>,
    r_classes: Vec<Vec<usize>>,
    l_classes: Vec<Vec<usize>>,
    d_classes: Vec<Vec<usize>>,
    ambient: Option<Ambient>,
}

/// JSON form of an abstract biorder: element labels and defined products.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AbstractBiorderSpec {
    pub elements: Vec<String>,
    pub products: Vec<(String, String, String)>,
}

/// Idempotents of `s`, keeping `ef` exactly when `{ef, fe}` meets `{e, f}`.
pub fn build_biorder(s: &SemigroupTable) -> Result<BiorderedSet, BiorderError> {
    let idem = s.idempotents();
    if idem.is_empty() {
        return Err(BiorderError::NoIdempotents);
    }
    if idem.len() > MAX_IDEMPOTENTS {
        return Err(BiorderError::TooManyIdempotents { count: idem.len() });
    }
    let pos: HashMap<usize, usize> = idem.iter().enumerate().map(|(k, &e)| (e, k)).collect();
    let n = idem.len();
    let mut products = vec![None; n * n];
    for (a, &e) in idem.iter().enumerate() {
        for (b, &f) in idem.iter().enumerate() {
            let (ef, fe) = (s.mul(e, f), s.mul(f, e));
            if [ef, fe].iter().any(|x| *x == e || *x == f) {
                products[a * n + b] = Some(pos[&ef]);
            }
        }
    }
    let names = idem.iter().map(|&e| s.names()[e].clone()).collect();
    let ambient = Ambient { table: s.clone(), embedding: idem };
    Ok(BiorderedSet::assemble(names, products, Some(ambient)))
}

/// Reads an abstract biorder, checking symmetry of definedness, idempotency,
/// closure in E and the basic-pair condition. Nambooripad's axioms are not
/// checked. Missing diagonal products `ee = e` are filled in.
pub fn load_abstract_biorder(spec: &AbstractBiorderSpec) -> Result<BiorderedSet, BiorderError> {
    let n = spec.elements.len();
    if n == 0 {
        return Err(BiorderError::Empty);
    }
    if n > MAX_IDEMPOTENTS {
        return Err(BiorderError::TooManyIdempotents { count: n });
    }
    check_unique(&spec.elements)?;
    let idx: HashMap<&str, usize> =
        spec.elements.iter().enumerate().map(|(k, s)| (s.as_str(), k)).collect();
    let violation = |e: &str, f: &str, reason: String| BiorderError::SanityViolation {
        pair: (e.to_string(), f.to_string()),
        reason,
    };
    let mut products: Vec<Option<usize>> = vec![None; n * n];
    for (e, f, g) in &spec.products {
        let lookup = |x: &str| {
            idx.get(x).copied().ok_or_else(|| violation(e, f, format!("{x:?} is not an element of E")))
        };
        let (a, b, c) = (lookup(e)?, lookup(f)?, lookup(g)?);
        if let Some(old) = products[a * n + b] {
            if old != c {
                return Err(violation(e, f, "product recorded twice with different values".into()));
            }
        }
        products[a * n + b] = Some(c);
    }
    for a in 0..n {
        match products[a * n + a] {
            None => products[a * n + a] = Some(a),
            Some(c) if c != a => {
                let e = &spec.elements[a];
                return Err(violation(e, e, "element is not idempotent".into()));
            }
            _ => {}
        }
    }
    for a in 0..n {
        for b in 0..n {
            let (ea, eb) = (&spec.elements[a], &spec.elements[b]);
            match (products[a * n + b], products[b * n + a]) {
                (Some(_), None) => {
                    return Err(violation(ea, eb, "product defined in one order only".into()));
                }
                (Some(ab), Some(ba)) => {
                    if ![ab, ba].iter().any(|x| *x == a || *x == b) {
                        return Err(violation(ea, eb, "recorded pair is not basic".into()));
                    }
                }
                _ => {}
            }
        }
    }
    Ok(BiorderedSet::assemble(spec.elements.clone(), products, None))
}

fn partition(n: usize, related: impl Fn(usize, usize) -> bool) -> (Vec<usize>, Vec<Vec<usize>>) {
    let mut class = vec![usize::MAX; n];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for e in 0..n {
        if class[e] != usize::MAX {
            continue;
        }
        let id = classes.len();
        let mut members = vec![e];
        class[e] = id;
        let mut head = 0;
        while head < members.len() {
            let x = members[head];
            head += 1;
            for y in 0..n {
                if class[y] == usize::MAX && related(x, y) {
                    class[y] = id;
                    members.push(y);
                }
            }
        }
        members.sort_unstable();
        classes.push(members);
    }
    (class, classes)
}

impl BiorderedSet {
    fn assemble(names: Vec<String>, products: Vec<Option<usize>>, ambient: Option<Ambient>) -> Self {
        let n = names.len();
        let p = |a: usize, b: usize| products[a * n + b];
        let leq_l = |e: usize, f: usize| p(e, f) == Some(e);
        let leq_r = |e: usize, f: usize| p(f, e) == Some(e);
        let (r_class, r_classes) = partition(n, |e, f| leq_r(e, f) && leq_r(f, e));
        let (l_class, l_classes) = partition(n, |e, f| leq_l(e, f) && leq_l(f, e));
        let (d_class, d_classes) =
            partition(n, |e, f| r_class[e] == r_class[f] || l_class[e] == l_class[f]);
        let mut factorizations = vec![Vec::new(); n];
        for a in 0..n {
            for b in 0..n {
                if let Some(c) = p(a, b) {
                    factorizations[c].push((a, b));
                }
            }
        }
        BiorderedSet {
            names,
            products,
            factorizations,
            r_class,
            l_class,
            d_class,
            r_classes,
            l_classes,
            d_classes,
            ambient,
        }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, e: usize) -> &str {
        &self.names[e]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// The partial product, defined exactly on basic pairs.
    #[inline]
    pub fn product(&self, e: usize, f: usize) -> Option<usize> {
        self.products[e * self.names.len() + f]
    }

    pub fn is_basic(&self, e: usize, f: usize) -> bool {
        self.product(e, f).is_some()
    }

    /// Basic pairs `(e, f)` with `ef = g`.
    pub fn factorizations(&self, g: usize) -> &[(usize, usize)] {
        &self.factorizations[g]
    }

    pub fn basic_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        (0..n)
            .flat_map(|a| (a..n).map(move |b| (a, b)))
            .filter(|&(a, b)| self.is_basic(a, b))
            .collect()
    }

    pub fn leq_l(&self, e: usize, f: usize) -> bool {
        self.product(e, f) == Some(e)
    }

    pub fn leq_r(&self, e: usize, f: usize) -> bool {
        self.product(f, e) == Some(e)
    }

    /// The natural partial order `<= = <=_l ∩ <=_r`.
    pub fn leq(&self, e: usize, f: usize) -> bool {
        self.leq_l(e, f) && self.leq_r(e, f)
    }

    pub fn r_class(&self, e: usize) -> usize {
        self.r_class[e]
    }

    pub fn l_class(&self, e: usize) -> usize {
        self.l_class[e]
    }

    pub fn d_class(&self, e: usize) -> usize {
        self.d_class[e]
    }

    pub fn r_classes(&self) -> &[Vec<usize>] {
        &self.r_classes
    }

    pub fn l_classes(&self) -> &[Vec<usize>] {
        &self.l_classes
    }

    pub fn d_classes(&self) -> &[Vec<usize>] {
        &self.d_classes
    }

    pub fn ambient(&self) -> Option<&Ambient> {
        self.ambient.as_ref()
    }

    /// Image of a word of letters in the ambient semigroup.
    pub fn ambient_image(&self, letters: &[u8]) -> Option<usize> {
        let amb = self.ambient.as_ref()?;
        let mut it = letters.iter().map(|&l| amb.embedding[l as usize]);
        let first = it.next()?;
        Some(it.fold(first, |acc, x| amb.table.mul(acc, x)))
    }

    /// The recorded products as `(e, f, ef)` label triples.
    pub fn to_spec(&self) -> AbstractBiorderSpec {
        let n = self.len();
        let mut products = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if let Some(c) = self.product(a, b) {
                    products.push((self.names[a].clone(), self.names[b].clone(), self.names[c].clone()));
                }
            }
        }
        AbstractBiorderSpec { elements: self.names.clone(), products }
    }

    /// Same elements and recorded products, ignoring any ambient table.
    pub fn same_structure(&self, other: &BiorderedSet) -> bool {
        self.names == other.names && self.products == other.products
    }
}

#[derive(Serialize)]
pub struct BiorderSummary {
    pub elements: Vec<String>,
    pub basic_pairs: Vec<(String, String)>,
    pub r_classes: Vec<Vec<String>>,
    pub l_classes: Vec<Vec<String>>,
    pub d_classes: Vec<Vec<String>>,
    pub ambient_size: Option<usize>,
}

impl BiorderedSet {
    pub fn summary(&self) -> BiorderSummary {
        let label = |cs: &[Vec<usize>]| -> Vec<Vec<String>> {
            cs.iter().map(|c| c.iter().map(|&e| self.names[e].clone()).collect()).collect()
        };
        BiorderSummary {
            elements: self.names.clone(),
            basic_pairs: self
                .basic_pairs()
                .into_iter()
                .map(|(a, b)| (self.names[a].clone(), self.names[b].clone()))
                .collect(),
            r_classes: label(&self.r_classes),
            l_classes: label(&self.l_classes),
            d_classes: label(&self.d_classes),
            ambient_size: self.ambient.as_ref().map(|a| a.table.size()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn left_zero_two() {
        let e = build_biorder(&corpus::left_zero(2)).unwrap();
        assert_eq!(e.len(), 2);
        assert!(e.is_basic(0, 1));
        assert_eq!(e.l_classes().len(), 1);
        assert_eq!(e.r_classes().len(), 2);
        assert_eq!(e.d_classes().len(), 1);
    }

    #[test]
    fn brandt_two() {
        let e = build_biorder(&corpus::brandt2()).unwrap();
        let names: Vec<&str> = e.names().iter().map(|s| s.as_str()).collect();
        assert_eq!(names, ["0", "e11", "e22"]);
        let (z, a, b) = (0, 1, 2);
        assert!(!e.is_basic(a, b));
        assert!(e.is_basic(z, a) && e.is_basic(z, b));
        assert_eq!(e.d_classes().len(), 3);
    }

    #[test]
    fn rectangular_band() {
        let e = build_biorder(&corpus::rectangular_band(2, 2)).unwrap();
        for (a, b) in e.basic_pairs() {
            let (ra, ca) = (a / 2, a % 2);
            let (rb, cb) = (b / 2, b % 2);
            assert!(ra == rb || ca == cb);
        }
        assert_eq!(e.basic_pairs().len(), 4 + 4);
        assert_eq!(e.d_classes().len(), 1);
        assert_eq!(e.r_classes().len(), 2);
        assert_eq!(e.l_classes().len(), 2);
    }

    #[test]
    fn non_associative_table() {
        let t = vec![vec![1, 0], vec![0, 0]];
        assert!(matches!(SemigroupTable::new(t, None), Err(BiorderError::NonAssociative { .. })));
    }

    #[test]
    fn abstract_loading() {
        let one = AbstractBiorderSpec { elements: vec!["e".into()], products: vec![] };
        assert_eq!(load_abstract_biorder(&one).unwrap().product(0, 0), Some(0));

        let lopsided = AbstractBiorderSpec {
            elements: vec!["e".into(), "f".into()],
            products: vec![("e".into(), "f".into(), "e".into())],
        };
        assert!(matches!(
            load_abstract_biorder(&lopsided),
            Err(BiorderError::SanityViolation { .. })
        ));

        let b2 = build_biorder(&corpus::brandt2()).unwrap();
        let again = load_abstract_biorder(&b2.to_spec()).unwrap();
        assert!(again.same_structure(&b2));
    }

    #[test]
    fn green_relations_agree_with_ambient() {
        for (_, t) in corpus::natural_corpus().into_iter().chain([
            ("rb22".to_string(), corpus::rectangular_band(2, 2)),
            ("rb23".to_string(), corpus::rectangular_band(2, 3)),
        ]) {
            let e = build_biorder(&t).unwrap();
            let emb = &e.ambient().unwrap().embedding;
            for a in 0..e.len() {
                for b in 0..e.len() {
                    assert_eq!(e.r_class(a) == e.r_class(b), t.r_related(emb[a], emb[b]));
                    assert_eq!(e.l_class(a) == e.l_class(b), t.l_related(emb[a], emb[b]));
                    if e.leq(a, b) && e.leq(b, a) {
                        assert_eq!(a, b);
                    }
                }
            }
        }
    }
}
