//! Small semigroups used as test corpus and demo inputs.

use crate::biorder::SemigroupTable;

fn table(names: Vec<String>, mul: impl Fn(usize, usize) -> usize) -> SemigroupTable {
    let n = names.len();
    let t = (0..n).map(|a| (0..n).map(|b| mul(a, b)).collect()).collect();
    SemigroupTable::new(t, Some(names)).expect("corpus tables are associative")
}

fn letters(n: usize) -> Vec<String> {
    (0..n).map(|k| ((b'a' + k as u8) as char).to_string()).collect()
}

/// `xy = x`.
pub fn left_zero(n: usize) -> SemigroupTable {
    table(letters(n), |a, _| a)
}

/// `xy = y`.
pub fn right_zero(n: usize) -> SemigroupTable {
    table(letters(n), |_, b| b)
}

/// A chain semilattice `c0 < c1 < ...` under min. The three-element chain is
/// labelled `0 < e < 1`.
pub fn chain(n: usize) -> SemigroupTable {
    let names = if n == 3 {
        vec!["0".into(), "e".into(), "1".into()]
    } else {
        (0..n).map(|k| format!("c{k}")).collect()
    };
    table(names, |a, b| a.min(b))
}

/// All maps on `{0,1}`, composed left to right: `(x)(fg) = ((x)f)g`.
pub fn full_transformation2() -> SemigroupTable {
    let maps: [[usize; 2]; 4] = [[0, 1], [1, 0], [0, 0], [1, 1]];
    let names = vec!["id".into(), "swap".into(), "c0".into(), "c1".into()];
    table(names, |f, g| {
        let h = [maps[g][maps[f][0]], maps[g][maps[f][1]]];
        maps.iter().position(|m| *m == h).unwrap()
    })
}

/// The five-element Brandt semigroup: zero and matrix units `eij`.
pub fn brandt2() -> SemigroupTable {
    let units = [(1, 1), (1, 2), (2, 1), (2, 2)];
    let mut names = vec!["0".to_string()];
    names.extend(units.iter().map(|(i, j)| format!("e{i}{j}")));
    table(names, |a, b| {
        if a == 0 || b == 0 {
            return 0;
        }
        let (i, j) = units[a - 1];
        let (k, l) = units[b - 1];
        if j == k {
            1 + units.iter().position(|&u| u == (i, l)).unwrap()
        } else {
            0
        }
    })
}

/// `rows x cols` rectangular band, `(i,j)(k,l) = (i,l)`, element `eij` at
/// index `(i-1)*cols + (j-1)`.
pub fn rectangular_band(rows: usize, cols: usize) -> SemigroupTable {
    let names = (0..rows * cols).map(|x| format!("e{}{}", x / cols + 1, x % cols + 1)).collect();
    table(names, |a, b| (a / cols) * cols + b % cols)
}

/// The natural corpus: LZ2, RZ2, the three-chain, T2 and B2.
pub fn natural_corpus() -> Vec<(String, SemigroupTable)> {
    vec![
        ("LZ2".into(), left_zero(2)),
        ("RZ2".into(), right_zero(2)),
        ("chain3".into(), chain(3)),
        ("T2".into(), full_transformation2()),
        ("B2".into(), brandt2()),
    ]
}

pub fn by_name(name: &str) -> Option<SemigroupTable> {
    match name {
        "RB22" => Some(rectangular_band(2, 2)),
        "RB23" => Some(rectangular_band(2, 3)),
        _ => natural_corpus().into_iter().find(|(n, _)| n == name).map(|(_, t)| t),
    }
}
