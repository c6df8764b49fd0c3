//! Reshetikhin–Turaev state sums of open tangles.
//!
//! `V^{⊗m}` has the arrow-sequence basis (`↑ ↦ v₁`, `↓ ↦ v₋₁`). The entry
//! `(a, b)` of a flat tangle's matrix sums `q^{j(S)}` over orientations `S`
//! with bottom arrows `b` and top arrows `a`; an arrow is `↑` when the strand
//! crosses that boundary point upward.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;

use crate::diagram::{count_crossings, CrossingCount, Direction, Skeleton, TangleDiagram};
use crate::error::{Error, Result};
use crate::invariants::resolution_coefficient;
use crate::laurent::{Laurent, LaurentQT};
use crate::resolution::{closure_arrows, rotation_sum, Arrow, FlatDiagram, ResolutionIndex};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ArrowSeq(pub Vec<Arrow>);

impl ArrowSeq {
    /// Sequence number `index` in lexicographic order with `↑ < ↓`.
    pub fn from_index(m: usize, index: usize) -> Self {
        ArrowSeq(
            (0..m)
                .map(|p| {
                    if index >> (m - 1 - p) & 1 == 1 {
                        Arrow::Down
                    } else {
                        Arrow::Up
                    }
                })
                .collect(),
        )
    }

    pub fn index(&self) -> usize {
        self.0.iter().fold(0, |acc, a| acc << 1 | (*a == Arrow::Down) as usize)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn weight(&self) -> i32 {
        self.0.iter().map(|a| a.sign()).sum()
    }

    /// All sequences of length `m` and weight `lambda`, lexicographic.
    pub fn of_weight(m: usize, lambda: i32) -> Vec<ArrowSeq> {
        (0..1usize << m)
            .map(|i| ArrowSeq::from_index(m, i))
            .filter(|a| a.weight() == lambda)
            .collect()
    }

    pub fn parse(s: &str) -> Option<Self> {
        s.chars()
            .map(|c| match c {
                'u' => Some(Arrow::Up),
                'd' => Some(Arrow::Down),
                _ => None,
            })
            .collect::<Option<Vec<_>>>()
            .map(ArrowSeq)
    }
}

impl fmt::Display for ArrowSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("()");
        }
        for a in &self.0 {
            write!(f, "{}", a.symbol())?;
        }
        Ok(())
    }
}

pub fn weight(a: &ArrowSeq) -> i32 {
    a.weight()
}

/// Weights `−m, −m+2, …, m`.
pub fn weights(m: usize) -> impl Iterator<Item = i32> {
    (0..=m).map(move |n| m as i32 - 2 * n as i32).rev()
}

/// Matrix over the full `2^m` basis; only used to test block structure.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RawMatrix {
    pub m: usize,
    /// `(row, col)` sequence indices to nonzero entries.
    pub entries: BTreeMap<(usize, usize), Laurent>,
}

impl RawMatrix {
    pub fn new(m: usize) -> Self {
        Self {
            m,
            entries: BTreeMap::new(),
        }
    }

    pub fn identity(m: usize) -> Self {
        let mut r = Self::new(m);
        for i in 0..1 << m {
            r.add(i, i, &Laurent::one());
        }
        r
    }

    pub fn add(&mut self, row: usize, col: usize, value: &Laurent) {
        let e = self.entries.entry((row, col)).or_default();
        *e += value;
        if e.is_zero() {
            self.entries.remove(&(row, col));
        }
    }

    pub fn get(&self, row: usize, col: usize) -> Laurent {
        self.entries.get(&(row, col)).cloned().unwrap_or_default()
    }

    /// `K M K⁻¹` for the diagonal action `K v_a = q^{weight(a)} v_a`.
    pub fn k_conjugate(&self) -> RawMatrix {
        let mut out = RawMatrix::new(self.m);
        for (&(r, c), v) in &self.entries {
            let shift = ArrowSeq::from_index(self.m, r).weight() - ArrowSeq::from_index(self.m, c).weight();
            out.add(r, c, &v.shift(shift));
        }
        out
    }
}

/// True iff every entry between sequences of different weight vanishes.
pub fn check_weight_preservation(raw: &RawMatrix) -> bool {
    raw.entries.iter().all(|(&(r, c), v)| {
        v.is_zero() || ArrowSeq::from_index(raw.m, r).weight() == ArrowSeq::from_index(raw.m, c).weight()
    })
}

/// A matrix over `Z[q^±1]` stored as its weight blocks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockMatrixQ {
    m: usize,
    blocks: BTreeMap<i32, Vec<Vec<Laurent>>>,
}

impl BlockMatrixQ {
    pub fn zero(m: usize) -> Self {
        let blocks = weights(m)
            .map(|l| {
                let n = ArrowSeq::of_weight(m, l).len();
                (l, vec![vec![Laurent::zero(); n]; n])
            })
            .collect();
        Self { m, blocks }
    }

    pub fn identity(m: usize) -> Self {
        Self::from_raw(&RawMatrix::identity(m)).expect("identity is diagonal")
    }

    pub fn from_raw(raw: &RawMatrix) -> Result<Self> {
        let mut out = Self::zero(raw.m);
        let mut pos = vec![0usize; 1 << raw.m];
        for l in weights(raw.m) {
            for (n, a) in ArrowSeq::of_weight(raw.m, l).iter().enumerate() {
                pos[a.index()] = n;
            }
        }
        for (&(r, c), v) in &raw.entries {
            let (a, b) = (ArrowSeq::from_index(raw.m, r), ArrowSeq::from_index(raw.m, c));
            if a.weight() != b.weight() {
                return Err(Error::WeightViolation {
                    row: a.to_string(),
                    col: b.to_string(),
                });
            }
            out.blocks.get_mut(&a.weight()).expect("weight in range")[pos[r]][pos[c]] += v;
        }
        Ok(out)
    }

    pub fn to_raw(&self) -> RawMatrix {
        let mut raw = RawMatrix::new(self.m);
        for (&l, block) in &self.blocks {
            let basis = ArrowSeq::of_weight(self.m, l);
            for (r, row) in block.iter().enumerate() {
                for (c, v) in row.iter().enumerate() {
                    raw.add(basis[r].index(), basis[c].index(), v);
                }
            }
        }
        raw
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn basis(&self, lambda: i32) -> Vec<ArrowSeq> {
        ArrowSeq::of_weight(self.m, lambda)
    }

    pub fn block(&self, lambda: i32) -> &[Vec<Laurent>] {
        &self.blocks[&lambda]
    }

    pub fn blocks(&self) -> impl Iterator<Item = (i32, &[Vec<Laurent>])> {
        self.blocks.iter().map(|(&l, b)| (l, b.as_slice()))
    }

    pub fn entry(&self, a: &ArrowSeq, b: &ArrowSeq) -> Laurent {
        if a.weight() != b.weight() {
            return Laurent::zero();
        }
        let basis = self.basis(a.weight());
        let r = basis.iter().position(|x| x == a).expect("sequence in basis");
        let c = basis.iter().position(|x| x == b).expect("sequence in basis");
        self.blocks[&a.weight()][r][c].clone()
    }

    pub fn trace(&self, lambda: i32) -> Laurent {
        let block = &self.blocks[&lambda];
        (0..block.len()).map(|n| block[n][n].clone()).sum()
    }

    pub fn scaled(&self, k: &Laurent) -> Self {
        let blocks = self
            .blocks
            .iter()
            .map(|(&l, b)| (l, b.iter().map(|row| row.iter().map(|v| k * v).collect()).collect()))
            .collect();
        Self { m: self.m, blocks }
    }

    pub fn add_assign(&mut self, other: &BlockMatrixQ) {
        for (l, block) in &mut self.blocks {
            for (row, orow) in block.iter_mut().zip(&other.blocks[l]) {
                for (v, o) in row.iter_mut().zip(orow) {
                    *v += o;
                }
            }
        }
    }
}

/// An orientation of every component of a resolved open tangle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TangleState {
    pub bottom: ArrowSeq,
    pub top: ArrowSeq,
    pub j: i32,
    pub dirs: Vec<Direction>,
}

fn boundary_arrows(skel: &Skeleton, flat: &FlatDiagram, dirs: &[Direction]) -> (ArrowSeq, ArrowSeq) {
    let mut start = vec![false; skel.node_count()];
    let mut touched = vec![false; skel.node_count()];
    for (p, d) in flat.pieces.iter().zip(dirs) {
        let s = if *d == Direction::Forward { p.ends[0] } else { p.ends[1] };
        start[s] = true;
        touched[p.ends[0]] = true;
        touched[p.ends[1]] = true;
    }
    let read = |level: usize, up_if_start: bool| {
        ArrowSeq(
            (1..=skel.level_width(level))
                .map(|pos| {
                    let n = skel.node(level, pos);
                    debug_assert!(touched[n]);
                    if start[n] == up_if_start {
                        Arrow::Up
                    } else {
                        Arrow::Down
                    }
                })
                .collect(),
        )
    };
    (read(0, true), read(skel.height, false))
}

/// Every orientation of a resolved open tangle, with its boundary arrows
/// and rotation count.
pub fn tangle_states(skel: &Skeleton, flat: &FlatDiagram) -> Vec<TangleState> {
    if skel.height == 0 {
        return (0..1usize << skel.m)
            .map(|i| {
                let a = ArrowSeq::from_index(skel.m, i);
                TangleState {
                    bottom: a.clone(),
                    top: a,
                    j: 0,
                    dirs: Vec::new(),
                }
            })
            .collect();
    }
    let components: Vec<&[(usize, Direction)]> = flat
        .arcs
        .iter()
        .map(|a| a.steps.as_slice())
        .chain(flat.circles.iter().map(|c| c.steps.as_slice()))
        .collect();
    (0..1u64 << components.len())
        .map(|mask| {
            let mut dirs = vec![Direction::Forward; flat.pieces.len()];
            for (n, steps) in components.iter().enumerate() {
                for &(p, d) in steps.iter() {
                    dirs[p] = if mask >> n & 1 == 1 { d.reversed() } else { d };
                }
            }
            let (bottom, top) = boundary_arrows(skel, flat, &dirs);
            TangleState {
                bottom,
                top,
                j: rotation_sum(&flat.pieces, &dirs),
                dirs,
            }
        })
        .collect()
}

fn check_open(t: &TangleDiagram) -> Result<()> {
    if t.closure() != crate::diagram::Closure::None {
        return Err(Error::ClosedDiagram);
    }
    if t.m_bottom() != t.m_top() {
        return Err(Error::UnequalEndpoints {
            bottom: t.m_bottom(),
            top: t.m_top(),
        });
    }
    Ok(())
}

fn raw_for(skel: &Skeleton, flat: &FlatDiagram) -> RawMatrix {
    let mut raw = RawMatrix::new(skel.m);
    for s in tangle_states(skel, flat) {
        raw.add(s.top.index(), s.bottom.index(), &Laurent::monomial(1, s.j));
    }
    raw
}

/// Unblocked matrix of one resolution.
pub fn rt_raw_resolution(t: &TangleDiagram, index: ResolutionIndex) -> Result<RawMatrix> {
    check_open(t)?;
    let flat = crate::resolution::resolve(t, index)?;
    Ok(raw_for(&t.skeleton(), &flat))
}

pub fn rt_matrix_resolution(t: &TangleDiagram, index: ResolutionIndex) -> Result<BlockMatrixQ> {
    BlockMatrixQ::from_raw(&rt_raw_resolution(t, index)?)
}

/// `Σ_I (−1)^{|I|−n₋} q^{|I|+n₊−2n₋} J(T_I)` with the given crossing counts.
pub fn rt_matrix_with_counts(t: &TangleDiagram, counts: CrossingCount) -> Result<BlockMatrixQ> {
    check_open(t)?;
    let skel = t.skeleton();
    let parts: Vec<BlockMatrixQ> = ResolutionIndex::all(t.crossing_total())
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|idx| {
            let (sign, shift) = resolution_coefficient(idx.weight(), counts.n_plus, counts.n_minus);
            let m = BlockMatrixQ::from_raw(&raw_for(&skel, &skel.resolve(idx)))?;
            Ok(m.scaled(&Laurent::monomial(sign, shift)))
        })
        .collect::<Result<_>>()?;
    let mut total = BlockMatrixQ::zero(t.m_bottom());
    for p in &parts {
        total.add_assign(p);
    }
    Ok(total)
}

/// Assembled matrix, with crossing signs taken from the annular closure.
pub fn rt_matrix(t: &TangleDiagram) -> Result<BlockMatrixQ> {
    check_open(t)?;
    let counts = count_crossings(&t.annular_closure()?);
    rt_matrix_with_counts(t, counts)
}

/// `Σ_λ q^λ tr(M_λ)`
pub fn quantum_trace(m: &BlockMatrixQ) -> Laurent {
    m.blocks().map(|(l, _)| m.trace(l).shift(l)).sum()
}

/// `Σ_λ (qt)^λ tr(M_λ)`
pub fn trace_sj(m: &BlockMatrixQ) -> LaurentQT {
    m.blocks()
        .map(|(l, _)| {
            let mut p = LaurentQT::zero();
            for (e, c) in m.trace(l).terms() {
                p.add_term(e + l, l, c);
            }
            p
        })
        .sum()
}

pub fn sj_via_trace(t: &TangleDiagram) -> Result<LaurentQT> {
    Ok(trace_sj(&rt_matrix(t)?))
}

/// A closed-up tangle state violating `j(S′) = j(S) + k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosureMismatch {
    pub index: ResolutionIndex,
    pub arrows: ArrowSeq,
    pub j_tangle: i32,
    pub j_closed: i32,
    pub k: i32,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ClosureReport {
    pub states_checked: usize,
    pub mismatches: Vec<ClosureMismatch>,
    /// Resolutions where tangle states with `t = b` and closed states
    /// are not equinumerous.
    pub count_mismatches: Vec<ResolutionIndex>,
}

impl ClosureReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty() && self.count_mismatches.is_empty()
    }
}

/// Closes every tangle state with equal top and bottom arrows and compares
/// the rotation count of the closed state with `j(S) + weight`.
pub fn check_closure_relation(t: &TangleDiagram) -> Result<ClosureReport> {
    check_open(t)?;
    let closed = t.annular_closure()?;
    let (skel_t, skel_c) = (t.skeleton(), closed.skeleton());
    let m = t.m_bottom();
    let per_vertex: Vec<ClosureReport> = ResolutionIndex::all(t.crossing_total())
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|idx| {
            let ft = skel_t.resolve(idx);
            let fc = skel_c.resolve(idx);
            let mut report = ClosureReport::default();
            let states: Vec<TangleState> = tangle_states(&skel_t, &ft)
                .into_iter()
                .filter(|s| s.top == s.bottom)
                .collect();
            if states.len() != 1 << fc.circles.len() {
                report.count_mismatches.push(idx);
            }
            for s in states {
                report.states_checked += 1;
                let mut dirs = s.dirs.clone();
                for a in &s.top.0 {
                    dirs.push(if *a == Arrow::Up {
                        Direction::Forward
                    } else {
                        Direction::Backward
                    });
                }
                let consistent = fc.circles.iter().all(|c| {
                    let same = c.steps.iter().all(|&(p, d)| dirs[p] == d);
                    let flipped = c.steps.iter().all(|&(p, d)| dirs[p] == d.reversed());
                    same || flipped
                });
                let k = s.top.weight();
                let j_closed = rotation_sum(&fc.pieces, &dirs);
                let k_read: i32 = closure_arrows(&fc.pieces, &dirs).iter().map(|a| a.sign()).sum();
                if !consistent || k_read != k || j_closed != s.j + k {
                    report.mismatches.push(ClosureMismatch {
                        index: idx,
                        arrows: s.top.clone(),
                        j_tangle: s.j,
                        j_closed,
                        k,
                    });
                }
            }
            debug_assert_eq!(fc.pieces.len(), ft.pieces.len() + m);
            report
        })
        .collect();
    let mut total = ClosureReport::default();
    for r in per_vertex {
        total.states_checked += r.states_checked;
        total.mismatches.extend(r.mismatches);
        total.count_mismatches.extend(r.count_mismatches);
    }
    Ok(total)
}
