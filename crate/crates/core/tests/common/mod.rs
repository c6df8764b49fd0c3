#![allow(dead_code)]

pub mod kauffman;

use annkh::diagram::{braid_closure, braid_slices, Closure, TangleDiagram};
use annkh::dsl::parse_diagram;

pub fn essential_unknot() -> TangleDiagram {
    parse_diagram("m=1; closure=annular; slices=[]").unwrap()
}

pub fn trivial_circle() -> TangleDiagram {
    parse_diagram("m=0; closure=none; slices=[[cup@1],[cap@1]]").unwrap()
}

pub fn identity2() -> TangleDiagram {
    parse_diagram("m=2; closure=annular; slices=[]").unwrap()
}

pub fn e1_closure() -> TangleDiagram {
    parse_diagram("m=2; closure=annular; slices=[[cap@1],[cup@1]]").unwrap()
}

pub const MIXED: [i32; 6] = [1, -2, 1, -2, 1, -2];

/// Named closed diagrams, each followed by its mirror.
pub fn corpus() -> Vec<(String, TangleDiagram)> {
    let base = vec![
        ("essential unknot", essential_unknot()),
        ("trivial circle", trivial_circle()),
        ("2-strand identity", identity2()),
        ("e1 closure", e1_closure()),
        ("s1", braid_closure(2, &[1]).unwrap()),
        ("s1^2", braid_closure(2, &[1, 1]).unwrap()),
        ("s1^3", braid_closure(2, &[1, 1, 1]).unwrap()),
        ("(s1 s2^-1)^3", braid_closure(3, &MIXED).unwrap()),
    ];
    base.into_iter()
        .flat_map(|(name, d)| {
            let m = d.mirror();
            [(name.to_string(), d), (format!("mirror({name})"), m)]
        })
        .collect()
}

/// Open tangles whose annular closures are the annular corpus entries.
pub fn tangles() -> Vec<(String, TangleDiagram)> {
    corpus()
        .into_iter()
        .filter(|(_, d)| d.closure() == Closure::Annular)
        .map(|(name, d)| (name, d.open_tangle()))
        .collect()
}

pub fn braid_tangle(strands: usize, word: &[i32]) -> TangleDiagram {
    TangleDiagram::new(strands, braid_slices(strands, word).unwrap(), Closure::None).unwrap()
}
