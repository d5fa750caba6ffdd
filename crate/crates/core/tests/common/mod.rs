//! Independent reference computations for the acceptance and property
//! tests. Nothing here uses the contact automata or the coset machinery:
//! equality of chains is the closure of elementary boundary moves read off
//! the action table, and theta is evaluated elementwise on sets.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::sync::Arc;

use rand::Rng;

use ig_core::contact::{GainEdge, GainGraph, Step};
use ig_core::group::{Elem, FiniteGroup};
use ig_core::rees::{Triple, TripleChain};
use ig_core::structure::IgStructure;

pub struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    pub fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut y = x;
        while self.parent[y] != r {
            let next = self.parent[y];
            self.parent[y] = r;
            y = next;
        }
        r
    }

    /// Keeps the smaller index as root, so roots are class minima.
    pub fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = (ra.min(rb), ra.max(rb));
            self.parent[hi] = lo;
        }
    }
}

/// All chains with a given fingerprint, indexed in mixed radix.
pub struct ChainSpace {
    pub fingerprint: Vec<usize>,
    dims: Vec<(usize, usize, usize)>,
}

impl ChainSpace {
    pub fn new(st: &IgStructure, fp: &[usize]) -> Self {
        let dims = fp.iter().map(|&m| (st.models[m].rows, st.models[m].group.order(), st.models[m].cols)).collect();
        ChainSpace { fingerprint: fp.to_vec(), dims }
    }

    pub fn len(&self) -> usize {
        self.dims.iter().map(|(a, b, c)| a * b * c).product()
    }

    pub fn chain(&self, mut x: usize) -> TripleChain {
        let mut triples = Vec::with_capacity(self.dims.len());
        for &(r, g, c) in self.dims.iter().rev() {
            let block = x % (r * g * c);
            x /= r * g * c;
            triples.push(Triple::new(block / (g * c), (block / c) % g, block % c));
        }
        triples.reverse();
        TripleChain::new(triples, self.fingerprint.clone())
    }

    pub fn index_of(&self, ch: &TripleChain) -> usize {
        let mut x = 0;
        for (t, &(r, g, c)) in ch.triples.iter().zip(&self.dims) {
            x = x * (r * g * c) + (t.i * g * c + t.g * c + t.lambda);
        }
        x
    }
}

/// Every elementary move at every boundary of `ch`: for a letter `e` with
/// `tau_e(mu) = lambda` (cocycle `d`) on the left model and
/// `sigma_e(i) = j` (cocycle `c`) on the right model,
/// `(.., a, lambda)(i, h, ..) = (.., a d^-1, mu)(j, c h, ..)`,
/// since both equal `(.., a d^-1, mu) e (i, h, ..)`.
pub fn moves(st: &IgStructure, ch: &TripleChain) -> Vec<TripleChain> {
    let mut out = Vec::new();
    for k in 0..ch.len().saturating_sub(1) {
        let (p, q) = (ch.fingerprint[k], ch.fingerprint[k + 1]);
        let (gp, gq) = (&st.models[p].group, &st.models[q].group);
        let (x, y) = (ch.triples[k], ch.triples[k + 1]);
        for row in &st.actions.entries {
            for (mu, t) in row[p].tau.iter().enumerate() {
                let Some((lambda, d)) = *t else { continue };
                if lambda != x.lambda {
                    continue;
                }
                let Some((j, c)) = row[q].sigma[y.i] else { continue };
                let mut n = ch.clone();
                n.triples[k] = Triple::new(x.i, gp.mul(x.g, gp.inv(d)), mu);
                n.triples[k + 1] = Triple::new(j, gq.mul(c, y.g), y.lambda);
                out.push(n);
            }
        }
    }
    out
}

/// Equality and Green's relations on one fingerprint by brute force.
pub struct Reference {
    pub space: ChainSpace,
    pub eq: UnionFind,
    pub r: UnionFind,
    pub l: UnionFind,
    pub d: UnionFind,
}

impl Reference {
    pub fn new(st: &IgStructure, fp: &[usize]) -> Self {
        let space = ChainSpace::new(st, fp);
        let n = space.len();
        let mut eq = UnionFind::new(n);
        for x in 0..n {
            for y in moves(st, &space.chain(x)) {
                eq.union(x, space.index_of(&y));
            }
        }
        // Right multiplication reaches every (g, lambda) in the last block,
        // left multiplication every (i, g) in the first.
        let mut r = UnionFind::new(n);
        let mut l = UnionFind::new(n);
        let mut d = UnionFind::new(n);
        for x in 0..n {
            let root = eq.find(x);
            for uf in [&mut r, &mut l, &mut d] {
                uf.union(x, root);
            }
            let ch = space.chain(x);
            let mut last = ch.clone();
            let m = last.len() - 1;
            last.triples[m].g = st.models[fp[m]].group.identity();
            last.triples[m].lambda = 0;
            let mut first = ch.clone();
            first.triples[0].i = 0;
            first.triples[0].g = st.models[fp[0]].group.identity();
            let (li, fi) = (space.index_of(&last), space.index_of(&first));
            r.union(x, li);
            l.union(x, fi);
            d.union(x, li);
            d.union(x, fi);
        }
        Reference { space, eq, r, l, d }
    }

    pub fn equal(&mut self, a: &TripleChain, b: &TripleChain) -> bool {
        let (x, y) = (self.space.index_of(a), self.space.index_of(b));
        self.eq.find(x) == self.eq.find(y)
    }

    pub fn related(&mut self, rel: ig_core::words::Rel, a: &TripleChain, b: &TripleChain) -> bool {
        use ig_core::words::Rel;
        let (x, y) = (self.space.index_of(a), self.space.index_of(b));
        match rel {
            Rel::R => self.r.find(x) == self.r.find(y),
            Rel::L => self.l.find(x) == self.l.find(y),
            Rel::H => self.r.find(x) == self.r.find(y) && self.l.find(x) == self.l.find(y),
            Rel::D | Rel::J => self.d.find(x) == self.d.find(y),
        }
    }

    /// FNV-1a over the class minimum of every chain, in index order.
    pub fn digest(&mut self) -> u64 {
        let mut h: u64 = 0xcbf29ce484222325;
        for x in 0..self.space.len() {
            for b in (self.eq.find(x) as u64).to_le_bytes() {
                h ^= b as u64;
                h = h.wrapping_mul(0x100000001b3);
            }
        }
        h
    }

    pub fn class_count(&mut self) -> usize {
        (0..self.space.len()).filter(|&x| self.eq.find(x) == x).count()
    }
}

/// All pairs `(X, Y)` such that a walk of boundary moves takes the boundary
/// vertex `from` to `to` while multiplying the left block by `X` on the
/// right and the right block by `Y` on the left.
pub fn rho(st: &IgStructure, p: usize, q: usize, from: (usize, usize), to: (usize, usize)) -> BTreeSet<(Elem, Elem)> {
    let (gp, gq) = (&st.models[p].group, &st.models[q].group);
    let mut seen = HashSet::new();
    let start = (from, gp.identity(), gq.identity());
    let mut queue = VecDeque::from([start]);
    seen.insert(start);
    let mut out = BTreeSet::new();
    while let Some(((lam, i), x, y)) = queue.pop_front() {
        if (lam, i) == to {
            out.insert((x, y));
        }
        for row in &st.actions.entries {
            for (mu, t) in row[p].tau.iter().enumerate() {
                let Some((l2, d)) = *t else { continue };
                for (i2, s) in row[q].sigma.iter().enumerate() {
                    let Some((j, c)) = *s else { continue };
                    let mut nexts = Vec::new();
                    if (l2, i2) == (lam, i) {
                        nexts.push(((mu, j), gp.mul(x, gp.inv(d)), gq.mul(c, y)));
                    }
                    if (mu, j) == (lam, i) {
                        nexts.push(((l2, i2), gp.mul(x, d), gq.mul(gq.inv(c), y)));
                    }
                    for n in nexts {
                        if seen.insert(n) {
                            queue.push_back(n);
                        }
                    }
                }
            }
        }
    }
    out
}

pub fn theta_ref(st: &IgStructure, start: &BTreeSet<Elem>, u: &TripleChain, v: &TripleChain) -> BTreeSet<Elem> {
    let fp = &u.fingerprint;
    let mut cur = start.clone();
    for k in 0..fp.len() - 1 {
        let (p, q) = (fp[k], fp[k + 1]);
        let g = &st.models[p].group;
        let (a, b) = (u.triples[k].g, v.triples[k].g);
        let s: BTreeSet<Elem> =
            if k == 0 { cur.clone() } else { cur.iter().map(|&x| g.mul(g.mul(g.inv(a), g.inv(x)), b)).collect() };
        let r = rho(st, p, q, (u.triples[k].lambda, u.triples[k + 1].i), (v.triples[k].lambda, v.triples[k + 1].i));
        cur = r.iter().filter(|(x, _)| s.contains(x)).map(|&(_, y)| y).collect();
    }
    cur
}

pub fn theta_bar_ref(st: &IgStructure, u: &TripleChain, v: &TripleChain, start: &BTreeSet<Elem>) -> BTreeSet<Elem> {
    let fp = &u.fingerprint;
    let m = fp.len();
    let mut cur = start.clone();
    for k in (0..m - 1).rev() {
        let (p, q) = (fp[k], fp[k + 1]);
        let g = &st.models[q].group;
        let (a, b) = (u.triples[k + 1].g, v.triples[k + 1].g);
        let s: BTreeSet<Elem> =
            if k == m - 2 { cur.clone() } else { cur.iter().map(|&y| g.mul(g.mul(b, g.inv(y)), g.inv(a))).collect() };
        let r = rho(st, p, q, (u.triples[k].lambda, u.triples[k + 1].i), (v.triples[k].lambda, v.triples[k + 1].i));
        cur = r.iter().filter(|(_, y)| s.contains(y)).map(|&(x, _)| x).collect();
    }
    cur
}

/// A random multigraph on up to `max_vertices` vertices with up to
/// `max_edges` edges (loops allowed) and uniformly random gains.
pub fn random_gain_graph<R: Rng>(g: &Arc<FiniteGroup>, max_vertices: usize, max_edges: usize, rng: &mut R) -> GainGraph {
    let n = rng.gen_range(1..=max_vertices);
    let m = rng.gen_range(0..=max_edges);
    let edges = (0..m)
        .map(|_| GainEdge {
            from: rng.gen_range(0..n),
            to: rng.gen_range(0..n),
            gain: rng.gen_range(0..g.order()),
            tag: None,
        })
        .collect();
    GainGraph::new(g.clone(), (0..n).map(|v| v.to_string()).collect(), edges).unwrap()
}

/// `out[u][v]` is the set of gains of walks from `u` to `v`, of length at
/// most `max_len` when given, otherwise of any length.
pub fn gain_graph_walks(gr: &GainGraph, max_len: Option<usize>) -> Vec<Vec<BTreeSet<Elem>>> {
    let n = gr.vertex_count();
    let g = gr.group();
    let mut out = vec![vec![BTreeSet::new(); n]; n];
    for u in 0..n {
        let mut seen = HashSet::from([(u, g.identity())]);
        let mut frontier = vec![(u, g.identity())];
        let mut depth = 0;
        while !frontier.is_empty() && max_len.map_or(true, |l| depth <= l) {
            let mut next = Vec::new();
            for &(v, x) in &frontier {
                out[u][v].insert(x);
                for &(w, s) in gr.neighbours(v) {
                    let y = g.mul(x, gr.step_gain(s));
                    if max_len.is_some() || seen.insert((w, y)) {
                        next.push((w, y));
                    }
                }
            }
            if max_len.is_some() {
                next.sort_unstable();
                next.dedup();
            }
            frontier = next;
            depth += 1;
        }
    }
    out
}

/// A random walk from `u` followed by a shortest path to `v`.
pub fn random_path<R: Rng>(gr: &GainGraph, u: usize, v: usize, rng: &mut R) -> Option<Vec<Step>> {
    let mut steps = Vec::new();
    let mut at = u;
    for _ in 0..rng.gen_range(0..6) {
        let nb = gr.neighbours(at);
        if nb.is_empty() {
            break;
        }
        let (w, s) = nb[rng.gen_range(0..nb.len())];
        steps.push(s);
        at = w;
    }
    steps.extend(gr.shortest_path(at, v).ok()??);
    Some(steps)
}
