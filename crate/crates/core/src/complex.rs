//! The Khovanov chain complex over F₂ with its annular filtration.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rayon::prelude::*;

use crate::diagram::{count_crossings, Skeleton, TangleDiagram};
use crate::error::{Error, Result};
use crate::f2::{rank_f2, SparseMatrixF2};
use crate::resolution::{
    cobordism_between, k_degree, CobordismKind, EnhancedState, FlatDiagram, MergeSplit, ResolutionIndex, Sign,
    MAX_CROSSINGS,
};

/// Circle counts beyond this would overflow the state masks.
const MAX_CIRCLES: usize = 62;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub state: EnhancedState,
    pub i: i32,
    pub j: i32,
    pub k: i32,
}

/// Generators in cube order (resolution mask ascending, states in
/// [`crate::resolution::enumerate_enhanced`] order) and the total
/// differential as one square matrix, `d[target][source]`.
#[derive(Clone, Debug)]
pub struct GradedComplexF2 {
    pub generators: Vec<Generator>,
    pub differential: SparseMatrixF2,
    pub reduced: bool,
    pub m: usize,
    pub n_plus: usize,
    pub n_minus: usize,
}

/// Frobenius multiplication; `None` is zero.
pub fn apply_merge(a: Sign, b: Sign) -> Option<Sign> {
    match (a, b) {
        (Sign::Plus, Sign::Plus) => Some(Sign::Plus),
        (Sign::Plus, Sign::Minus) | (Sign::Minus, Sign::Plus) => Some(Sign::Minus),
        (Sign::Minus, Sign::Minus) => None,
    }
}

/// Frobenius comultiplication as a list of summands.
pub fn apply_split(a: Sign) -> Vec<(Sign, Sign)> {
    match a {
        Sign::Plus => vec![(Sign::Plus, Sign::Minus), (Sign::Minus, Sign::Plus)],
        Sign::Minus => vec![(Sign::Minus, Sign::Minus)],
    }
}

struct Vertex {
    flat: FlatDiagram,
    marked: Option<usize>,
    offset: usize,
}

impl Vertex {
    fn circles(&self) -> usize {
        self.flat.circles.len()
    }

    fn state_count(&self) -> usize {
        1 << (self.circles() - self.marked.is_some() as usize)
    }

    /// Position of a sign mask (bit c = circle c is `−`) among this vertex's
    /// generators. Enumeration puts circle 0 most significant.
    fn local_index(&self, mask: u64) -> usize {
        let c = self.circles();
        let mut n = 0usize;
        for id in 0..c {
            if Some(id) == self.marked {
                continue;
            }
            n = n << 1 | (mask >> id & 1) as usize;
        }
        n
    }

    fn states(&self) -> impl Iterator<Item = u64> + '_ {
        let c = self.circles();
        let free: Vec<usize> = (0..c).filter(|&id| Some(id) != self.marked).collect();
        let fixed = self.marked.map_or(0, |id| 1u64 << id);
        (0..self.state_count() as u64).map(move |n| {
            let f = free.len();
            free.iter()
                .enumerate()
                .fold(fixed, |acc, (pos, &id)| acc | ((n >> (f - 1 - pos) & 1) << id))
        })
    }
}

fn sign_at(mask: u64, c: usize) -> Sign {
    if mask >> c & 1 == 1 {
        Sign::Minus
    } else {
        Sign::Plus
    }
}

fn with_sign(mask: u64, c: usize, s: Sign) -> u64 {
    match s {
        Sign::Plus => mask & !(1 << c),
        Sign::Minus => mask | 1 << c,
    }
}

/// Image masks of one source state under the saddle `e`.
fn saddle_images(e: &MergeSplit, mask: u64) -> Vec<u64> {
    let carried = e
        .carried
        .iter()
        .fold(0u64, |acc, &(src, dst)| with_sign(acc, dst, sign_at(mask, src)));
    match e.kind {
        CobordismKind::Merge => {
            let (a, b) = (sign_at(mask, e.from[0]), sign_at(mask, e.from[1]));
            apply_merge(a, b)
                .map(|s| with_sign(carried, e.to[0], s))
                .into_iter()
                .collect()
        }
        CobordismKind::Split => apply_split(sign_at(mask, e.from[0]))
            .into_iter()
            .map(|(a, b)| with_sign(with_sign(carried, e.to[0], a), e.to[1], b))
            .collect(),
    }
}

fn marked_circle(skel: &Skeleton, flat: &FlatDiagram, arc: usize) -> usize {
    flat.node_circle[skel.arcs[arc].ends[0]].expect("closed diagram")
}

pub fn build_complex(d: &TangleDiagram, reduced: bool) -> Result<GradedComplexF2> {
    if !d.is_closed() {
        return Err(Error::OpenTangle);
    }
    let marked_arc = match (reduced, d.marked_arc()) {
        (true, None) => return Err(Error::NoMarkedArc),
        (true, Some(a)) => Some(a),
        (false, _) => None,
    };
    let n = d.crossing_total();
    if n > MAX_CROSSINGS {
        return Err(Error::TooLarge(n));
    }
    let skel = d.skeleton();
    let counts = count_crossings(d);
    let (n_plus, n_minus) = (counts.n_plus as i32, counts.n_minus as i32);

    let mut vertices: Vec<Vertex> = ResolutionIndex::all(n)
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|idx| {
            let flat = skel.resolve(idx);
            let marked = marked_arc.map(|a| marked_circle(&skel, &flat, a));
            Vertex {
                flat,
                marked,
                offset: 0,
            }
        })
        .collect();
    if let Some(v) = vertices.iter().find(|v| v.circles() > MAX_CIRCLES) {
        return Err(Error::TooLarge(v.circles()));
    }
    let mut total = 0;
    for v in &mut vertices {
        v.offset = total;
        total += v.state_count();
    }

    let shift = if reduced { 1 } else { 0 };
    let generators: Vec<Generator> = vertices
        .par_iter()
        .flat_map_iter(|v| {
            let weight = v.flat.index.weight() as i32;
            v.states().map(move |mask| {
                let state = EnhancedState::from_mask(v.flat.index, v.circles(), mask);
                let jq: i32 = state.eps.iter().map(|e| e.value()).sum();
                Generator {
                    i: weight - n_minus,
                    j: jq + weight + n_plus - 2 * n_minus + shift,
                    k: k_degree(&v.flat, &state),
                    state,
                }
            })
        })
        .collect();

    let entries: Vec<(usize, usize)> = vertices
        .par_iter()
        .flat_map_iter(|v| {
            let idx = v.flat.index;
            let mut out = Vec::new();
            for c in (0..n).filter(|&c| !idx.bit(c)) {
                let target = &vertices[(idx.flipped(c).mask()) as usize];
                let e = cobordism_between(&skel, &v.flat, &target.flat, c);
                for mask in v.states() {
                    let col = v.offset + v.local_index(mask);
                    for img in saddle_images(&e, mask) {
                        out.push((target.offset + target.local_index(img), col));
                    }
                }
            }
            out
        })
        .collect();

    Ok(GradedComplexF2 {
        differential: SparseMatrixF2::from_entries_mod2(total, total, entries),
        generators,
        reduced,
        m: d.m(),
        n_plus: counts.n_plus,
        n_minus: counts.n_minus,
    })
}

impl GradedComplexF2 {
    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// Differential entries as `(source, target)`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.differential.entries().map(|(r, c)| (c, r))
    }

    /// Generator indices in homological degree `i`.
    pub fn degree(&self, i: i32) -> Vec<usize> {
        (0..self.len()).filter(|&g| self.generators[g].i == i).collect()
    }

    /// The block of `d` from degree `i` to `i + 1`, with the generator
    /// indices of its columns and rows.
    pub fn differential_in_degree(&self, i: i32) -> (Vec<usize>, Vec<usize>, SparseMatrixF2) {
        let cols = self.degree(i);
        let rows = self.degree(i + 1);
        let mut pos = vec![usize::MAX; self.len()];
        for (k, &r) in rows.iter().enumerate() {
            pos[r] = k;
        }
        let entries: Vec<(usize, usize)> = cols
            .iter()
            .enumerate()
            .flat_map(|(k, &c)| self.differential.column(c).iter().map(move |&r| (r, k)))
            .map(|(r, k)| (pos[r], k))
            .collect();
        let m = SparseMatrixF2::from_entries(rows.len(), cols.len(), entries);
        (cols, rows, m)
    }

    pub fn check_d_squared(&self) -> Result<()> {
        let d2 = self.differential.compose(&self.differential);
        let first = d2.entries().next();
        match first {
            None => Ok(()),
            Some((_, c)) => Err(Error::DSquared(self.generators[c].i)),
        }
    }

    /// Every entry raises `i` by one, keeps `j` and changes `k` by 0 or −2.
    pub fn check_gradings(&self) -> Result<()> {
        for (s, t) in self.edges() {
            let (a, b) = (&self.generators[s], &self.generators[t]);
            let dk = b.k - a.k;
            if b.i != a.i + 1 || b.j != a.j || !(dk == 0 || dk == -2) {
                return Err(Error::Filtration {
                    source_gen: s,
                    target: t,
                    delta: dk,
                });
            }
        }
        Ok(())
    }

    /// `Σ_I 2^{c(I)}` (or `2^{c(I)-1}` reduced) recomputed from the cube.
    pub fn expected_size(d: &TangleDiagram, reduced: bool) -> usize {
        let skel = d.skeleton();
        ResolutionIndex::all(d.crossing_total())
            .map(|idx| {
                let c = skel.resolve(idx).circles.len();
                1usize << (c - reduced as usize)
            })
            .sum()
    }

    /// Generator table followed by one `i j k row col` line per entry of
    /// the differential (gradings of the source column).
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (g, x) in self.generators.iter().enumerate() {
            writeln!(
                out,
                "# {g} {} {} {} {} {}",
                x.state.resolution,
                x.state.signs(),
                x.i,
                x.j,
                x.k
            )
            .unwrap();
        }
        for (r, c) in self.differential.entries() {
            let x = &self.generators[c];
            writeln!(out, "{} {} {} {r} {c}", x.i, x.j, x.k).unwrap();
        }
        out
    }
}

/// Drops the filtration-lowering part of the differential.
pub fn annular_part(c: &GradedComplexF2) -> Result<GradedComplexF2> {
    let mut keep = Vec::new();
    for (s, t) in c.edges() {
        let delta = c.generators[t].k - c.generators[s].k;
        match delta {
            0 => keep.push((t, s)),
            -2 => {}
            _ => {
                return Err(Error::Filtration {
                    source_gen: s,
                    target: t,
                    delta,
                })
            }
        }
    }
    Ok(GradedComplexF2 {
        differential: SparseMatrixF2::from_entries(c.len(), c.len(), keep),
        ..c.clone()
    })
}

/// Which gradings index the homology blocks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Grading {
    /// `(i, j)`, for the full complex.
    Bigraded,
    /// `(i, j, k)`, for a complex whose differential preserves `k`.
    Trigraded,
}

/// Homology dimensions keyed by `(i, j, k)`; the bigraded variant reports
/// `k = 0` for every block.
pub fn homology_dims(c: &GradedComplexF2, grading: Grading) -> Result<BTreeMap<(i32, i32, i32), usize>> {
    let key = |g: &Generator| match grading {
        Grading::Bigraded => (g.i, g.j, 0),
        Grading::Trigraded => (g.i, g.j, g.k),
    };
    let mut blocks: BTreeMap<(i32, i32, i32), Vec<usize>> = BTreeMap::new();
    for (g, x) in c.generators.iter().enumerate() {
        blocks.entry(key(x)).or_default().push(g);
    }
    if grading == Grading::Trigraded {
        if let Some((s, t)) = c.edges().find(|&(s, t)| c.generators[s].k != c.generators[t].k) {
            return Err(Error::Filtration {
                source_gen: s,
                target: t,
                delta: c.generators[t].k - c.generators[s].k,
            });
        }
    }
    let blocks: Vec<((i32, i32, i32), Vec<usize>)> = blocks.into_iter().collect();
    let out_rank: BTreeMap<(i32, i32, i32), usize> = blocks
        .par_iter()
        .map(|(k, cols)| {
            let sub = SparseMatrixF2::from_entries(
                c.len(),
                cols.len(),
                cols.iter()
                    .enumerate()
                    .flat_map(|(n, &g)| c.differential.column(g).iter().map(move |&r| (r, n))),
            );
            (*k, rank_f2(&sub))
        })
        .collect();
    let mut dims = BTreeMap::new();
    for (k @ (i, j, kk), cols) in &blocks {
        let incoming = out_rank.get(&(i - 1, *j, *kk)).copied().unwrap_or(0);
        let h = cols.len() - out_rank[k] - incoming;
        if h > 0 {
            dims.insert(*k, h);
        }
    }
    Ok(dims)
}

pub fn total_dim(dims: &BTreeMap<(i32, i32, i32), usize>) -> usize {
    dims.values().sum()
}

/// Rank of the differential.
pub fn differential_rank(c: &GradedComplexF2) -> usize {
    rank_f2(&c.differential)
}
