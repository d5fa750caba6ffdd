//! Finite groups given by Cayley tables, with subgroups, cosets, quotients
//! and the dual direct product `G1 x G2^dual`.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

/// Element of a [`FiniteGroup`], an index into its Cayley table.
pub type Elem = usize;

pub const DEFAULT_MAX_GROUP_ORDER: usize = 5000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("element index {index} out of range for a group of order {order}")]
    IndexOutOfRange { index: usize, order: usize },
    #[error("group must have at least one element")]
    Empty,
    #[error("cayley table row {row} has length {len}, expected {order}")]
    NotSquare { row: usize, len: usize, order: usize },
    #[error("cayley table row {0} is not a permutation of the elements")]
    RowNotPermutation(usize),
    #[error("cayley table column {0} is not a permutation of the elements")]
    ColumnNotPermutation(usize),
    #[error("cayley table has no identity element")]
    NoIdentity,
    #[error("cayley table is not associative: ({a}*{b})*{c} != {a}*({b}*{c})")]
    NonAssociative { a: Elem, b: Elem, c: Elem },
    #[error("expected {expected} element names, got {got}")]
    NameCount { expected: usize, got: usize },
    #[error("group order {order} exceeds the configured maximum {max}")]
    OrderTooLarge { order: usize, max: usize },
    #[error("operands live in different parent groups")]
    MismatchedParent,
    #[error("L is not contained in K")]
    NotSubgroup,
    #[error("L is not normal in K: conjugation by element {by} moves it")]
    NotNormal { by: Elem },
}

/// A finite group stored as a full multiplication table.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GroupRepr", into = "GroupRepr")]
pub struct FiniteGroup {
    order: usize,
    table: Vec<u32>,
    identity: Elem,
    inverse: Vec<Elem>,
    names: Option<Vec<String>>,
}

#[derive(Serialize, Deserialize)]
struct GroupRepr {
    order: usize,
    cayley: Vec<Vec<Elem>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    names: Option<Vec<String>>,
}

impl TryFrom<GroupRepr> for FiniteGroup {
    type Error = GroupError;

    fn try_from(r: GroupRepr) -> Result<Self, GroupError> {
        if r.cayley.len() != r.order {
            return Err(GroupError::NotSquare { row: r.cayley.len(), len: 0, order: r.order });
        }
        FiniteGroup::from_cayley(r.cayley, r.names)
    }
}

impl From<FiniteGroup> for GroupRepr {
    fn from(g: FiniteGroup) -> Self {
        GroupRepr { order: g.order, cayley: g.cayley(), names: g.names }
    }
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteGroup(order {})", self.order)
    }
}

impl FiniteGroup {
    /// Validates a Cayley table and infers the identity and inverses.
    pub fn from_cayley(cayley: Vec<Vec<Elem>>, names: Option<Vec<String>>) -> Result<Self, GroupError> {
        let n = cayley.len();
        if n == 0 {
            return Err(GroupError::Empty);
        }
        if let Some(ns) = &names {
            if ns.len() != n {
                return Err(GroupError::NameCount { expected: n, got: ns.len() });
            }
        }
        for (row, r) in cayley.iter().enumerate() {
            if r.len() != n {
                return Err(GroupError::NotSquare { row, len: r.len(), order: n });
            }
            let mut seen = vec![false; n];
            for &x in r {
                if x >= n {
                    return Err(GroupError::IndexOutOfRange { index: x, order: n });
                }
                if std::mem::replace(&mut seen[x], true) {
                    return Err(GroupError::RowNotPermutation(row));
                }
            }
        }
        for col in 0..n {
            let mut seen = vec![false; n];
            for r in &cayley {
                if std::mem::replace(&mut seen[r[col]], true) {
                    return Err(GroupError::ColumnNotPermutation(col));
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = cayley[a][b];
                for c in 0..n {
                    if cayley[ab][c] != cayley[a][cayley[b][c]] {
                        return Err(GroupError::NonAssociative { a, b, c });
                    }
                }
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| cayley[e][x] == x && cayley[x][e] == x))
            .ok_or(GroupError::NoIdentity)?;
        Ok(Self::from_fn(n, |a, b| cayley[a][b], identity, names))
    }

    fn from_fn(n: usize, mul: impl Fn(Elem, Elem) -> Elem, identity: Elem, names: Option<Vec<String>>) -> Self {
        let mut table = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                table[a * n + b] = mul(a, b) as u32;
            }
        }
        let mut inverse = vec![0; n];
        for a in 0..n {
            inverse[a] = (0..n).find(|&b| table[a * n + b] as usize == identity).expect("latin row");
        }
        FiniteGroup { order: n, table, identity, inverse, names }
    }

    pub fn trivial() -> Self {
        Self::cyclic(1)
    }

    /// Integers mod `n` under addition.
    pub fn cyclic(n: usize) -> Self {
        assert!(n > 0, "cyclic group of order zero");
        Self::from_fn(n, |a, b| (a + b) % n, 0, None)
    }

    /// The symmetric group on `{1..n}`, elements in lexicographic order of
    /// their images, named in cycle notation. Products apply the left factor
    /// first.
    pub fn symmetric(n: usize) -> Self {
        assert!((1..=6).contains(&n), "symmetric group degree out of range");
        let perms = permutations(n);
        let index = |p: &[usize]| perms.binary_search_by(|q| q.as_slice().cmp(p)).unwrap();
        let names = perms.iter().map(|p| cycle_name(p)).collect();
        Self::from_fn(
            perms.len(),
            |a, b| {
                let c: Vec<usize> = perms[a].iter().map(|&x| perms[b][x]).collect();
                index(&c)
            },
            0,
            Some(names),
        )
    }

    pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> Self {
        let m = b.order;
        let names = (0..a.order * m)
            .map(|x| format!("({},{})", a.name(x / m), b.name(x % m)))
            .collect();
        Self::from_fn(
            a.order * m,
            |x, y| a.mul(x / m, y / m) * m + b.mul(x % m, y % m),
            a.identity * m + b.identity,
            Some(names),
        )
    }

    pub fn klein_four() -> Self {
        Self::direct_product(&Self::cyclic(2), &Self::cyclic(2))
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> Elem {
        self.identity
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.table[a * self.order + b] as Elem
    }

    #[inline]
    pub fn inv(&self, a: Elem) -> Elem {
        self.inverse[a]
    }

    pub fn product(&self, xs: &[Elem]) -> Elem {
        xs.iter().fold(self.identity, |acc, &x| self.mul(acc, x))
    }

    pub fn pow(&self, a: Elem, k: usize) -> Elem {
        (0..k).fold(self.identity, |acc, _| self.mul(acc, a))
    }

    pub fn element_order(&self, a: Elem) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn elements(&self) -> std::ops::Range<Elem> {
        0..self.order
    }

    pub fn check(&self, a: Elem) -> Result<Elem, GroupError> {
        if a < self.order {
            Ok(a)
        } else {
            Err(GroupError::IndexOutOfRange { index: a, order: self.order })
        }
    }

    pub fn name(&self, a: Elem) -> String {
        match &self.names {
            Some(ns) => ns[a].clone(),
            None => a.to_string(),
        }
    }

    pub fn names(&self) -> Option<&[String]> {
        self.names.as_deref()
    }

    pub fn element_named(&self, name: &str) -> Option<Elem> {
        match &self.names {
            Some(ns) => ns.iter().position(|n| n == name),
            None => name.parse().ok().filter(|&x: &usize| x < self.order),
        }
    }

    pub fn cayley(&self) -> Vec<Vec<Elem>> {
        (0..self.order)
            .map(|a| (0..self.order).map(|b| self.mul(a, b)).collect())
            .collect()
    }

    pub fn is_abelian(&self) -> bool {
        self.elements().all(|a| self.elements().all(|b| self.mul(a, b) == self.mul(b, a)))
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for x in 0..used.len() {
            if !used[x] {
                used[x] = true;
                prefix.push(x);
                go(prefix, used, out);
                prefix.pop();
                used[x] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

fn cycle_name(p: &[usize]) -> String {
    let mut seen = vec![false; p.len()];
    let mut s = String::new();
    for start in 0..p.len() {
        if seen[start] || p[start] == start {
            continue;
        }
        s.push('(');
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            s.push_str(&(x + 1).to_string());
            x = p[x];
        }
        s.push(')');
    }
    if s.is_empty() {
        s.push_str("()");
    }
    s
}

fn same_group(a: &Arc<FiniteGroup>, b: &Arc<FiniteGroup>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// A subgroup of a shared parent group. Elements are kept sorted.
#[derive(Clone)]
pub struct Subgroup {
    group: Arc<FiniteGroup>,
    elements: Vec<Elem>,
    generators: Vec<Elem>,
}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subgroup{:?}", self.elements)
    }
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        same_group(&self.group, &other.group) && self.elements == other.elements
    }
}

impl Eq for Subgroup {}

impl Serialize for Subgroup {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            order: usize,
            elements: &'a [Elem],
            generators: &'a [Elem],
        }
        Repr { order: self.elements.len(), elements: &self.elements, generators: &self.generators }
            .serialize(s)
    }
}

/// Smallest subgroup of `group` containing `gens`.
pub fn subgroup_closure(group: &Arc<FiniteGroup>, gens: &[Elem]) -> Result<Subgroup, GroupError> {
    for &g in gens {
        group.check(g)?;
    }
    let mut generators: Vec<Elem> = gens.iter().copied().filter(|&g| g != group.identity).collect();
    generators.sort_unstable();
    generators.dedup();
    let elements = close(group, &generators);
    Ok(Subgroup { group: group.clone(), elements, generators })
}

fn close(group: &FiniteGroup, gens: &[Elem]) -> Vec<Elem> {
    let mut mark = vec![false; group.order];
    mark[group.identity] = true;
    let mut queue = vec![group.identity];
    let mut head = 0;
    while head < queue.len() {
        let x = queue[head];
        head += 1;
        for &g in gens {
            let y = group.mul(x, g);
            if !mark[y] {
                mark[y] = true;
                queue.push(y);
            }
        }
    }
    queue.sort_unstable();
    queue
}

impl Subgroup {
    pub fn trivial(group: &Arc<FiniteGroup>) -> Self {
        Subgroup { group: group.clone(), elements: vec![group.identity], generators: vec![] }
    }

    pub fn whole(group: &Arc<FiniteGroup>) -> Self {
        let mut s = Self::from_elements_unchecked(group, group.elements().collect());
        s.elements.sort_unstable();
        s
    }

    /// Builds a subgroup from an element set already known to be closed,
    /// choosing a small generating set greedily.
    pub(crate) fn from_elements_unchecked(group: &Arc<FiniteGroup>, mut elements: Vec<Elem>) -> Self {
        elements.sort_unstable();
        elements.dedup();
        let mut generators = Vec::new();
        let mut reached = vec![group.identity];
        for &x in &elements {
            if reached.binary_search(&x).is_err() {
                generators.push(x);
                reached = close(group, &generators);
            }
        }
        Subgroup { group: group.clone(), elements, generators }
    }

    /// Accepts an arbitrary element set, returning `None` unless it is a subgroup.
    pub fn from_elements(group: &Arc<FiniteGroup>, elements: &[Elem]) -> Option<Self> {
        let mut els = elements.to_vec();
        els.sort_unstable();
        els.dedup();
        if els.iter().any(|&x| x >= group.order) || els.binary_search(&group.identity).is_err() {
            return None;
        }
        for &a in &els {
            for &b in &els {
                if els.binary_search(&group.mul(a, b)).is_err() {
                    return None;
                }
            }
        }
        Some(Self::from_elements_unchecked(group, els))
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn elements(&self) -> &[Elem] {
        &self.elements
    }

    pub fn generators(&self) -> &[Elem] {
        &self.generators
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn index(&self) -> usize {
        self.group.order / self.elements.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }

    pub fn contains(&self, g: Elem) -> bool {
        self.elements.binary_search(&g).is_ok()
    }

    pub fn is_subset_of(&self, other: &Subgroup) -> bool {
        self.elements.iter().all(|&x| other.contains(x))
    }

    /// `a^-1 H a`.
    pub fn conjugate(&self, a: Elem) -> Subgroup {
        let g = &self.group;
        let ai = g.inv(a);
        let conj = |x| g.mul(g.mul(ai, x), a);
        let mut elements: Vec<Elem> = self.elements.iter().map(|&x| conj(x)).collect();
        elements.sort_unstable();
        let generators = self.generators.iter().map(|&x| conj(x)).collect();
        Subgroup { group: g.clone(), elements, generators }
    }

    pub fn intersection(&self, other: &Subgroup) -> Result<Subgroup, GroupError> {
        if !same_group(&self.group, &other.group) {
            return Err(GroupError::MismatchedParent);
        }
        let common = self.elements.iter().copied().filter(|&x| other.contains(x)).collect();
        Ok(Self::from_elements_unchecked(&self.group, common))
    }

    /// Returns the first element of `k` whose conjugate moves `self`, if any.
    pub fn normality_witness(&self, k: &Subgroup) -> Option<Elem> {
        k.generators
            .iter()
            .copied()
            .find(|&a| self.conjugate(a).elements != self.elements)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

/// `H x` (right) or `x H` (left).
#[derive(Clone, Debug)]
pub struct Coset {
    subgroup: Subgroup,
    representative: Elem,
    side: Side,
}

impl Serialize for Coset {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            side: Side,
            representative: Elem,
            subgroup: &'a Subgroup,
            elements: Vec<Elem>,
        }
        Repr {
            side: self.side,
            representative: self.representative,
            subgroup: &self.subgroup,
            elements: self.elements(),
        }
        .serialize(s)
    }
}

impl Coset {
    pub fn right(subgroup: Subgroup, representative: Elem) -> Self {
        Coset { subgroup, representative, side: Side::Right }
    }

    pub fn left(representative: Elem, subgroup: Subgroup) -> Self {
        Coset { subgroup, representative, side: Side::Left }
    }

    pub fn singleton(group: &Arc<FiniteGroup>, x: Elem) -> Self {
        Self::right(Subgroup::trivial(group), x)
    }

    pub fn whole(group: &Arc<FiniteGroup>) -> Self {
        Self::right(Subgroup::whole(group), group.identity)
    }

    pub fn subgroup(&self) -> &Subgroup {
        &self.subgroup
    }

    pub fn representative(&self) -> Elem {
        self.representative
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.subgroup.group
    }

    pub fn len(&self) -> usize {
        self.subgroup.order()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, g: Elem) -> bool {
        let grp = self.group();
        let x = self.representative;
        match self.side {
            Side::Right => self.subgroup.contains(grp.mul(g, grp.inv(x))),
            Side::Left => self.subgroup.contains(grp.mul(grp.inv(x), g)),
        }
    }

    /// Underlying element set, sorted.
    pub fn elements(&self) -> Vec<Elem> {
        let grp = self.group();
        let x = self.representative;
        let mut v: Vec<Elem> = match self.side {
            Side::Right => self.subgroup.elements.iter().map(|&h| grp.mul(h, x)).collect(),
            Side::Left => self.subgroup.elements.iter().map(|&h| grp.mul(x, h)).collect(),
        };
        v.sort_unstable();
        v
    }

    pub fn set_eq(&self, other: &Coset) -> bool {
        same_group(self.group(), other.group()) && self.elements() == other.elements()
    }

    /// Same set, written as `H' y` with `y` the least element.
    pub fn to_right(&self) -> Coset {
        let sub = match self.side {
            Side::Right => self.subgroup.clone(),
            Side::Left => self.subgroup.conjugate(self.group().inv(self.representative)),
        };
        let rep = self.elements()[0];
        Coset::right(sub, rep)
    }

    /// Same set, written as `y H'` with `y` the least element.
    pub fn to_left(&self) -> Coset {
        let sub = match self.side {
            Side::Left => self.subgroup.clone(),
            Side::Right => self.subgroup.conjugate(self.representative),
        };
        let rep = self.elements()[0];
        Coset::left(rep, sub)
    }

    /// The set of inverses: `(Hx)^-1 = x^-1 H` and `(xH)^-1 = H x^-1`.
    pub fn inverse(&self) -> Coset {
        let xi = self.group().inv(self.representative);
        match self.side {
            Side::Right => Coset::left(xi, self.subgroup.clone()),
            Side::Left => Coset::right(self.subgroup.clone(), xi),
        }
    }

    /// `a C`.
    pub fn mul_left(&self, a: Elem) -> Coset {
        let g = self.group();
        match self.side {
            Side::Left => Coset::left(g.mul(a, self.representative), self.subgroup.clone()),
            Side::Right => {
                Coset::right(self.subgroup.conjugate(g.inv(a)), g.mul(a, self.representative))
            }
        }
    }

    /// `C b`.
    pub fn mul_right(&self, b: Elem) -> Coset {
        let g = self.group();
        match self.side {
            Side::Right => Coset::right(self.subgroup.clone(), g.mul(self.representative, b)),
            Side::Left => Coset::left(g.mul(self.representative, b), self.subgroup.conjugate(b)),
        }
    }

    /// The coset as a subgroup, when it contains the identity.
    pub fn as_subgroup(&self) -> Option<Subgroup> {
        if self.contains(self.group().identity) {
            Some(match self.side {
                Side::Right => self.subgroup.clone(),
                Side::Left => self.subgroup.clone(),
            })
        } else {
            None
        }
    }
}

/// `Hx ∩ Ky`, either empty or a right coset of `H ∩ K`. Inputs of either side
/// are accepted; they are rewritten as right cosets first.
pub fn coset_intersect(a: &Coset, b: &Coset) -> Result<Option<Coset>, GroupError> {
    if !same_group(a.group(), b.group()) {
        return Err(GroupError::MismatchedParent);
    }
    let (a, b) = (a.to_right(), b.to_right());
    let (small, large) = if a.len() <= b.len() { (&a, &b) } else { (&b, &a) };
    let Some(z) = small.elements().into_iter().find(|&z| large.contains(z)) else {
        return Ok(None);
    };
    let sub = a.subgroup.intersection(&b.subgroup)?;
    Ok(Some(Coset::right(sub, z)))
}

/// `K / L` on coset representatives (least element of each coset).
pub fn quotient(k: &Subgroup, l: &Subgroup) -> Result<FiniteGroup, GroupError> {
    if !same_group(&k.group, &l.group) {
        return Err(GroupError::MismatchedParent);
    }
    if !l.is_subset_of(k) {
        return Err(GroupError::NotSubgroup);
    }
    if let Some(by) = l.normality_witness(k) {
        return Err(GroupError::NotNormal { by });
    }
    let g = &k.group;
    let mut class = vec![usize::MAX; g.order];
    let mut reps = Vec::new();
    for &x in &k.elements {
        if class[x] != usize::MAX {
            continue;
        }
        let id = reps.len();
        reps.push(x);
        for &h in &l.elements {
            class[g.mul(h, x)] = id;
        }
    }
    let names = reps.iter().map(|&r| format!("[{}]", g.name(r))).collect();
    let id = class[g.identity];
    Ok(FiniteGroup::from_fn(reps.len(), |a, b| class[g.mul(reps[a], reps[b])], id, Some(names)))
}

/// `G1 x G2^dual` with `(a,b)(c,d) = (ac, db)`. Element `(a,b)` has index
/// `a * |G2| + b`.
#[derive(Clone, Debug)]
pub struct DualProduct {
    group: Arc<FiniteGroup>,
    left: Arc<FiniteGroup>,
    right: Arc<FiniteGroup>,
}

pub fn dual_product(
    g1: &Arc<FiniteGroup>,
    g2: &Arc<FiniteGroup>,
    max_order: usize,
) -> Result<DualProduct, GroupError> {
    let m = g2.order;
    let order = g1.order.checked_mul(m).unwrap_or(usize::MAX);
    if order > max_order {
        return Err(GroupError::OrderTooLarge { order, max: max_order });
    }
    let names = (0..order).map(|x| format!("({},{})", g1.name(x / m), g2.name(x % m))).collect();
    let group = FiniteGroup::from_fn(
        order,
        |x, y| g1.mul(x / m, y / m) * m + g2.mul(y % m, x % m),
        g1.identity * m + g2.identity,
        Some(names),
    );
    Ok(DualProduct { group: Arc::new(group), left: g1.clone(), right: g2.clone() })
}

impl DualProduct {
    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn left(&self) -> &Arc<FiniteGroup> {
        &self.left
    }

    pub fn right(&self) -> &Arc<FiniteGroup> {
        &self.right
    }

    pub fn pair(&self, a: Elem, b: Elem) -> Elem {
        a * self.right.order + b
    }

    pub fn split(&self, x: Elem) -> (Elem, Elem) {
        (x / self.right.order, x % self.right.order)
    }

    pub fn pi1(&self, x: Elem) -> Elem {
        x / self.right.order
    }

    pub fn pi2(&self, x: Elem) -> Elem {
        x % self.right.order
    }

    /// `H x G2` as a subgroup of the product.
    pub fn tall(&self, h: &Subgroup) -> Subgroup {
        let els = h
            .elements()
            .iter()
            .flat_map(|&a| self.right.elements().map(move |b| (a, b)))
            .map(|(a, b)| self.pair(a, b))
            .collect();
        Subgroup::from_elements_unchecked(&self.group, els)
    }

    /// `G1 x K` as a subgroup of the product.
    pub fn wide(&self, k: &Subgroup) -> Subgroup {
        let els = self
            .left
            .elements()
            .flat_map(|a| k.elements().iter().map(move |&b| (a, b)))
            .map(|(a, b)| self.pair(a, b))
            .collect();
        Subgroup::from_elements_unchecked(&self.group, els)
    }

    pub fn project1(&self, s: &Subgroup) -> Subgroup {
        let els = s.elements().iter().map(|&x| self.pi1(x)).collect();
        Subgroup::from_elements_unchecked(&self.left, els)
    }

    pub fn project2(&self, s: &Subgroup) -> Subgroup {
        let els = s.elements().iter().map(|&x| self.pi2(x)).collect();
        Subgroup::from_elements_unchecked(&self.right, els)
    }

    /// Image of a right coset `S (p,q)` under the first projection: `pi1(S) p`.
    pub fn project1_coset(&self, c: &Coset) -> Coset {
        let c = c.to_right();
        Coset::right(self.project1(c.subgroup()), self.pi1(c.representative()))
    }

    /// Image of a right coset `S (p,q)` under the second projection. Since the
    /// second factor multiplies in reverse, this is the left coset `q pi2(S)`.
    pub fn project2_coset(&self, c: &Coset) -> Coset {
        let c = c.to_right();
        Coset::left(self.pi2(c.representative()), self.project2(c.subgroup()))
    }
}

/// Second projection of a subgroup of a dual product.
pub fn project2(dp: &DualProduct, s: &Subgroup) -> Subgroup {
    dp.project2(s)
}
