//! Gain graphs over finite groups and the contact automata between two
//! regular D-classes.

use std::collections::{HashSet, VecDeque};
use std::fmt::Write as _;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::group::{dual_product, subgroup_closure, Coset, DualProduct, Elem, FiniteGroup, GroupError, Subgroup};
use crate::rees::{PartialActionTable, RegularDClassModel};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ContactError {
    #[error("vertex {0} not found")]
    VertexNotFound(usize),
    #[error("edge {index} is invalid: {reason}")]
    InvalidEdge { index: usize, reason: String },
    #[error("cycle enumeration supports at most 64 vertices, graph has {0}")]
    TooManyVertices(usize),
    #[error(transparent)]
    Group(#[from] GroupError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GainEdge {
    pub from: usize,
    pub to: usize,
    pub gain: Elem,
    pub tag: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VertexGroupMethod {
    ConjugatedCycles,
    SpanningTree,
}

/// One traversal of an edge: its index and whether it is used forwards.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Step {
    pub edge: usize,
    pub forward: bool,
}

/// An undirected multigraph whose edges carry group elements; an edge read
/// backwards carries the inverse gain. A walk's gain is the product of its
/// steps' gains, left to right.
#[derive(Clone, Debug)]
pub struct GainGraph {
    group: Arc<FiniteGroup>,
    labels: Vec<String>,
    edges: Vec<GainEdge>,
    adj: Vec<Vec<(usize, Step)>>,
    component: Vec<usize>,
    components: Vec<Vec<usize>>,
}

impl GainGraph {
    pub fn new(group: Arc<FiniteGroup>, labels: Vec<String>, edges: Vec<GainEdge>) -> Result<Self, ContactError> {
        let n = labels.len();
        let mut adj = vec![Vec::new(); n];
        for (index, e) in edges.iter().enumerate() {
            if e.from >= n || e.to >= n {
                return Err(ContactError::InvalidEdge { index, reason: "endpoint out of range".into() });
            }
            if e.gain >= group.order() {
                return Err(ContactError::InvalidEdge { index, reason: "gain outside the group".into() });
            }
            adj[e.from].push((e.to, Step { edge: index, forward: true }));
            adj[e.to].push((e.from, Step { edge: index, forward: false }));
        }
        for a in &mut adj {
            a.sort_by_key(|&(to, s)| (to, s.edge, !s.forward));
        }
        let mut component = vec![usize::MAX; n];
        let mut components = Vec::new();
        for s in 0..n {
            if component[s] != usize::MAX {
                continue;
            }
            let id = components.len();
            let mut members = vec![s];
            component[s] = id;
            let mut head = 0;
            while head < members.len() {
                let x = members[head];
                head += 1;
                for &(y, _) in &adj[x] {
                    if component[y] == usize::MAX {
                        component[y] = id;
                        members.push(y);
                    }
                }
            }
            members.sort_unstable();
            components.push(members);
        }
        Ok(GainGraph { group, labels, edges, adj, component, components })
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    pub fn edges(&self) -> &[GainEdge] {
        &self.edges
    }

    pub fn components(&self) -> &[Vec<usize>] {
        &self.components
    }

    pub fn same_component(&self, u: usize, v: usize) -> bool {
        self.component[u] == self.component[v]
    }

    /// Outgoing steps from `v` as `(neighbour, step)`, in a fixed order.
    pub fn neighbours(&self, v: usize) -> &[(usize, Step)] {
        &self.adj[v]
    }

    pub fn step_gain(&self, s: Step) -> Elem {
        let g = self.edges[s.edge].gain;
        if s.forward {
            g
        } else {
            self.group.inv(g)
        }
    }

    pub fn walk_gain(&self, steps: &[Step]) -> Elem {
        steps.iter().fold(self.group.identity(), |acc, &s| self.group.mul(acc, self.step_gain(s)))
    }

    fn check(&self, v: usize) -> Result<(), ContactError> {
        if v < self.vertex_count() {
            Ok(())
        } else {
            Err(ContactError::VertexNotFound(v))
        }
    }

    /// BFS shortest path, neighbours taken in vertex order.
    pub fn shortest_path(&self, u: usize, v: usize) -> Result<Option<Vec<Step>>, ContactError> {
        self.check(u)?;
        self.check(v)?;
        let mut prev: Vec<Option<(usize, Step)>> = vec![None; self.vertex_count()];
        let mut seen = vec![false; self.vertex_count()];
        seen[u] = true;
        let mut queue = VecDeque::from([u]);
        while let Some(x) = queue.pop_front() {
            if x == v {
                break;
            }
            for &(y, s) in &self.adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    prev[y] = Some((x, s));
                    queue.push_back(y);
                }
            }
        }
        if !seen[v] {
            return Ok(None);
        }
        let mut path = Vec::new();
        let mut x = v;
        while let Some((p, s)) = prev[x] {
            path.push(s);
            x = p;
        }
        path.reverse();
        Ok(Some(path))
    }

    /// The group `W_u` of gains of closed walks at `u`.
    pub fn vertex_group(&self, u: usize, method: VertexGroupMethod) -> Result<Subgroup, ContactError> {
        self.check(u)?;
        let gens = match method {
            VertexGroupMethod::SpanningTree => self.tree_generators(u),
            VertexGroupMethod::ConjugatedCycles => {
                if self.vertex_count() > 64 {
                    return Err(ContactError::TooManyVertices(self.vertex_count()));
                }
                self.cycle_generators(u)
            }
        };
        Ok(subgroup_closure(&self.group, &gens)?)
    }

    fn tree_generators(&self, u: usize) -> Vec<Elem> {
        let g = &self.group;
        let mut pot: Vec<Option<Elem>> = vec![None; self.vertex_count()];
        pot[u] = Some(g.identity());
        let mut queue = VecDeque::from([u]);
        while let Some(x) = queue.pop_front() {
            for &(y, s) in &self.adj[x] {
                if pot[y].is_none() {
                    pot[y] = Some(g.mul(pot[x].unwrap(), self.step_gain(s)));
                    queue.push_back(y);
                }
            }
        }
        let mut gens: Vec<Elem> = self
            .edges
            .iter()
            .filter_map(|e| {
                let (a, b) = (pot[e.from]?, pot[e.to]?);
                Some(g.mul(g.mul(a, e.gain), g.inv(b)))
            })
            .collect();
        gens.sort_unstable();
        gens.dedup();
        gens
    }

    /// Gains `p c p^-1` for every simple path `p` from `u` and every simple
    /// cycle `c` at the end of `p` meeting `p` only there.
    fn cycle_generators(&self, u: usize) -> Vec<Elem> {
        let g = &self.group;
        let mut gens = HashSet::new();
        let mut paths_seen = HashSet::new();
        let mut stack = vec![(u, 1u64 << u, g.identity())];
        while let Some((v, mask, pg)) = stack.pop() {
            if !paths_seen.insert((v, mask, pg)) {
                continue;
            }
            let avoid = mask & !(1u64 << v);
            let pinv = g.inv(pg);
            for c in self.cycles_at(v, avoid) {
                gens.insert(g.mul(g.mul(pg, c), pinv));
            }
            for &(y, s) in &self.adj[v] {
                if mask & (1 << y) == 0 {
                    stack.push((y, mask | (1 << y), g.mul(pg, self.step_gain(s))));
                }
            }
        }
        let mut out: Vec<Elem> = gens.into_iter().collect();
        out.sort_unstable();
        out
    }

    /// Gains of simple closed walks at `v` avoiding the vertices in `avoid`.
    fn cycles_at(&self, v: usize, avoid: u64) -> HashSet<Elem> {
        let g = &self.group;
        let mut out = HashSet::new();
        let mut seen = HashSet::new();
        let mut stack = vec![(v, 1u64 << v, g.identity())];
        while let Some((x, mask, gain)) = stack.pop() {
            if !seen.insert((x, mask, gain)) {
                continue;
            }
            for &(y, s) in &self.adj[x] {
                let h = g.mul(gain, self.step_gain(s));
                if y == v {
                    out.insert(h);
                } else if mask & (1 << y) == 0 && avoid & (1 << y) == 0 {
                    stack.push((y, mask | (1 << y), h));
                }
            }
        }
        out
    }

    /// All walk gains from `u` to `v`: `W_u g` for the gain `g` of the BFS
    /// shortest path, or `None` when `v` is unreachable.
    pub fn walk_coset(&self, u: usize, v: usize) -> Result<Option<Coset>, ContactError> {
        let Some(path) = self.shortest_path(u, v)? else {
            return Ok(None);
        };
        let w = self.vertex_group(u, VertexGroupMethod::SpanningTree)?;
        Ok(Some(Coset::right(w, self.walk_gain(&path))))
    }

    /// A copy with the gain of one edge replaced.
    pub fn with_gain(&self, edge: usize, gain: Elem) -> Result<GainGraph, ContactError> {
        let mut edges = self.edges.clone();
        let e = edges.get_mut(edge).ok_or(ContactError::InvalidEdge { index: edge, reason: "no such edge".into() })?;
        e.gain = gain;
        GainGraph::new(self.group.clone(), self.labels.clone(), edges)
    }

    pub fn to_dot(&self, name: &str) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "digraph \"{}\" {{", name.replace('"', "'"));
        for (v, l) in self.labels.iter().enumerate() {
            let _ = writeln!(s, "  v{v} [label=\"{l}\"];");
        }
        for e in &self.edges {
            let gain = self.group.name(e.gain);
            let tag = e.tag.as_deref().unwrap_or("");
            let _ = writeln!(s, "  v{} -> v{} [label=\"{gain}\", name=\"{tag}\"];", e.from, e.to);
        }
        s.push_str("}\n");
        s
    }
}

/// The contact automaton between two models, vertices `Lambda_1 x I_2`
/// (vertex `(l, i)` has index `l * |I_2| + i`), gains in `G_1 x G_2^dual`.
#[derive(Clone, Debug)]
pub struct ContactAutomaton {
    pub source: usize,
    pub target: usize,
    pub product: DualProduct,
    pub graph: GainGraph,
    targets_rows: usize,
}

impl ContactAutomaton {
    pub fn vertex(&self, lambda: usize, i: usize) -> usize {
        lambda * self.targets_rows + i
    }

    pub fn coords(&self, v: usize) -> (usize, usize) {
        (v / self.targets_rows, v % self.targets_rows)
    }
}

/// For each letter `e`, each `mu` with `mu tau_e = lambda` (cocycle `d`) and
/// each `i` with `sigma_e i = j` (cocycle `c`), an edge `(lambda,i) -> (mu,j)`
/// with gain `(d^-1, c)`.
pub fn build_contact(
    source: usize,
    m1: &RegularDClassModel,
    target: usize,
    m2: &RegularDClassModel,
    actions: &PartialActionTable,
    max_group_order: usize,
) -> Result<ContactAutomaton, ContactError> {
    let product = dual_product(&m1.group, &m2.group, max_group_order)?;
    let labels = (0..m1.cols)
        .flat_map(|l| (0..m2.rows).map(move |i| format!("({l},{i})")))
        .collect();
    let vertex = |l: usize, i: usize| l * m2.rows + i;
    let mut edges = Vec::new();
    for (e, row) in actions.entries.iter().enumerate() {
        let (a1, a2) = (&row[source], &row[target]);
        for (mu, t) in a1.tau.iter().enumerate() {
            let Some((lambda, d)) = *t else { continue };
            for (i, s) in a2.sigma.iter().enumerate() {
                let Some((j, c)) = *s else { continue };
                edges.push(GainEdge {
                    from: vertex(lambda, i),
                    to: vertex(mu, j),
                    gain: product.pair(m1.group.inv(d), c),
                    tag: Some(actions.letters[e].clone()),
                });
            }
        }
    }
    let graph = GainGraph::new(product.group().clone(), labels, edges)?;
    Ok(ContactAutomaton { source, target, product, graph, targets_rows: m2.rows })
}
