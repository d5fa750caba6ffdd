//! Synthetic structures with nontrivial groups, for exercising the theta
//! engine where no small biordered set is available.

use std::sync::Arc;

use crate::group::{Elem, FiniteGroup, DEFAULT_MAX_GROUP_ORDER};
use crate::rees::{ActionEntry, PartialActionTable, RegularDClassModel};
use crate::structure::IgStructure;

/// A structure plus the fingerprints worth enumerating over.
#[derive(Clone, Debug)]
pub struct Fixture {
    pub name: &'static str,
    pub structure: IgStructure,
    pub fingerprints: Vec<Vec<usize>>,
}

fn model(label: &str, group: FiniteGroup, rows: usize, cols: usize) -> RegularDClassModel {
    let group = Arc::new(group);
    let sandwich = vec![vec![Some(group.identity()); rows]; cols];
    RegularDClassModel {
        label: label.into(),
        dclass_id: None,
        rows,
        cols,
        group,
        sandwich,
        base: (0, 0),
        realization: None,
    }
}

struct Builder {
    models: Vec<RegularDClassModel>,
    letters: Vec<String>,
    entries: Vec<Vec<ActionEntry>>,
}

impl Builder {
    fn new(models: Vec<RegularDClassModel>) -> Self {
        Builder { models, letters: Vec::new(), entries: Vec::new() }
    }

    fn elem(&self, model: usize, name: &str) -> Elem {
        self.models[model].group.element_named(name).unwrap_or_else(|| panic!("no element {name}"))
    }

    /// A letter with `tau(mu) = (lambda, d)` on `left` and
    /// `sigma(i) = (j, c)` on `right`.
    fn letter(&mut self, name: &str, left: usize, tau: (usize, usize, &str), right: usize, sigma: (usize, usize, &str)) {
        let mut row: Vec<ActionEntry> = self.models.iter().map(ActionEntry::empty).collect();
        let d = self.elem(left, tau.2);
        let c = self.elem(right, sigma.2);
        row[left].tau[tau.0] = Some((tau.1, d));
        row[right].sigma[sigma.0] = Some((sigma.1, c));
        self.letters.push(name.into());
        self.entries.push(row);
    }

    fn build(self, name: &str) -> IgStructure {
        let actions = PartialActionTable { letters: self.letters, entries: self.entries };
        IgStructure::assemble(name, self.models, actions, DEFAULT_MAX_GROUP_ORDER).expect("fixture is valid")
    }
}

/// `Z_2` then `S_3`, one vertex whose group is the graph of the sign map;
/// the Schützenberger group of the two-block identity chain is `S_3 / A_3`.
pub fn sign() -> Fixture {
    let mut b = Builder::new(vec![model("Z2", FiniteGroup::cyclic(2), 1, 1), model("S3", FiniteGroup::symmetric(3), 1, 1)]);
    b.letter("s", 0, (0, 0, "1"), 1, (0, 0, "(12)"));
    b.letter("t", 0, (0, 0, "0"), 1, (0, 0, "(123)"));
    Fixture { name: "sign", structure: b.build("sign"), fingerprints: vec![vec![0], vec![1], vec![0, 1]] }
}

/// `Z_4` twice with a single loop of gain `(3, 2)`.
pub fn cyclic() -> Fixture {
    let mut b = Builder::new(vec![model("Z4a", FiniteGroup::cyclic(4), 1, 1), model("Z4b", FiniteGroup::cyclic(4), 1, 1)]);
    b.letter("a", 0, (0, 0, "1"), 1, (0, 0, "2"));
    Fixture { name: "cyclic", structure: b.build("cyclic"), fingerprints: vec![vec![0, 1], vec![0, 1, 1]] }
}

/// Three models over `Z_4`, `S_3` and the Klein group, with tree edges,
/// a non-involution loop and a loop back from the last model to the first.
pub fn three_block() -> Fixture {
    let mut b = Builder::new(vec![
        model("Z4", FiniteGroup::cyclic(4), 1, 2),
        model("S3", FiniteGroup::symmetric(3), 2, 2),
        model("V4", FiniteGroup::klein_four(), 2, 1),
    ]);
    b.letter("p", 0, (1, 0, "1"), 1, (0, 1, "(12)"));
    b.letter("q", 0, (0, 0, "2"), 1, (1, 1, "(123)"));
    b.letter("r", 1, (1, 0, "(13)"), 2, (0, 1, "(1,0)"));
    b.letter("s", 1, (0, 1, "(123)"), 2, (1, 0, "(0,1)"));
    b.letter("t", 2, (0, 0, "(1,1)"), 0, (0, 0, "1"));
    Fixture {
        name: "three_block",
        structure: b.build("three_block"),
        fingerprints: vec![vec![1], vec![0, 1], vec![1, 2], vec![0, 1, 2], vec![0, 1, 2, 0]],
    }
}

/// A small structure in which every edge gain and every cocycle is visible
/// in the equality relation on two-block chains.
pub fn rigid() -> Fixture {
    let mut b = Builder::new(vec![model("Z2", FiniteGroup::cyclic(2), 1, 2), model("S3", FiniteGroup::symmetric(3), 2, 1)]);
    b.letter("p", 0, (1, 0, "1"), 1, (0, 1, "(12)"));
    b.letter("r", 0, (1, 1, "1"), 1, (1, 0, "(123)"));
    b.letter("q", 0, (0, 0, "1"), 1, (1, 1, "(13)"));
    Fixture { name: "rigid", structure: b.build("rigid"), fingerprints: vec![vec![0, 1]] }
}

pub fn all() -> Vec<Fixture> {
    vec![sign(), cyclic(), three_block(), rigid()]
}

pub fn by_name(name: &str) -> Option<Fixture> {
    all().into_iter().find(|f| f.name == name)
}
