//! Complete resolutions, resolution circles and enhanced states.
//!
//! A crossing's 0-smoothing of a `CrossPos` item is the vertical (identity)
//! smoothing and its 1-smoothing is the horizontal one (cap below, cup
//! above). `CrossNeg` swaps the two, so mirroring a diagram exchanges the
//! smoothings without renumbering bits.
//!
//! Rotation (the j-contribution) is read off pieces by where the tangent
//! points east: a cup traversed left to right turns counterclockwise through
//! east (+1), a cap traversed left to right turns clockwise through east
//! (−1), a closure arc traversed top to bottom makes one full
//! counterclockwise turn around the left (+1) and the reverse traversal one
//! clockwise turn (−1). Everything else contributes 0.

use crate::diagram::{ArcKind, Direction, ItemKind, Skeleton, TangleDiagram};
use crate::error::{Error, Result};
use crate::graph;

/// A vertex of the cube: bit `i` is the smoothing of crossing `i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ResolutionIndex {
    bits: u64,
    len: usize,
}

pub const MAX_CROSSINGS: usize = 63;

impl ResolutionIndex {
    pub fn new(bits: u64, len: usize) -> Self {
        debug_assert!(len <= MAX_CROSSINGS && (len == 64 || bits >> len == 0));
        Self { bits, len }
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        let mask = bits
            .iter()
            .enumerate()
            .fold(0u64, |acc, (i, &b)| acc | ((b as u64) << i));
        Self::new(mask, bits.len())
    }

    pub fn zero(len: usize) -> Self {
        Self::new(0, len)
    }

    /// All 2ⁿ vertices in increasing mask order.
    pub fn all(len: usize) -> impl Iterator<Item = ResolutionIndex> {
        (0..1u64 << len).map(move |b| ResolutionIndex::new(b, len))
    }

    pub fn mask(&self) -> u64 {
        self.bits
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn bit(&self, i: usize) -> bool {
        self.bits >> i & 1 == 1
    }

    pub fn weight(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn flipped(&self, i: usize) -> Self {
        Self::new(self.bits ^ (1 << i), self.len)
    }
}

impl std::fmt::Display for ResolutionIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.len == 0 {
            return write!(f, "-");
        }
        for i in 0..self.len {
            write!(f, "{}", if self.bit(i) { '1' } else { '0' })?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PieceKind {
    Vertical,
    Cup,
    Cap,
    Closure,
}

/// A crossingless piece of a resolved diagram. Forward traversal runs
/// `ends[0] -> ends[1]` with the same conventions as [`crate::diagram::Arc`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Piece {
    pub kind: PieceKind,
    pub ends: [usize; 2],
    pub slice: usize,
    pub col: usize,
    pub crossing: Option<usize>,
}

/// East-tangent rotation count of one traversed piece.
pub fn arc_rotation_contribution(kind: PieceKind, dir: Direction) -> i32 {
    match (kind, dir) {
        (PieceKind::Cup, Direction::Forward) => 1,
        (PieceKind::Cap, Direction::Forward) => -1,
        (PieceKind::Closure, Direction::Forward) => 1,
        (PieceKind::Closure, Direction::Backward) => -1,
        _ => 0,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Arrow {
    Up,
    Down,
}

impl Arrow {
    pub fn sign(self) -> i32 {
        match self {
            Arrow::Up => 1,
            Arrow::Down => -1,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Arrow::Up => 'u',
            Arrow::Down => 'd',
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Circle {
    pub id: usize,
    /// Event log: pieces in the order met by the reference traversal.
    pub steps: Vec<(usize, Direction)>,
    pub essential: bool,
    /// ±1 for every closure arc crossed, under the reference traversal.
    pub gamma0_crossings: Vec<i32>,
    /// Whitney index of the reference traversal (+1 counterclockwise).
    pub rotation: i32,
}

impl Circle {
    /// Winding around the annulus axis when oriented counterclockwise.
    pub fn winding(&self) -> i32 {
        self.rotation * self.gamma0_crossings.iter().sum::<i32>()
    }
}

/// A component of a resolved open tangle that ends on the boundary.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OpenArc {
    pub id: usize,
    pub steps: Vec<(usize, Direction)>,
}

#[derive(Clone, Debug)]
pub struct FlatDiagram {
    pub index: ResolutionIndex,
    pub pieces: Vec<Piece>,
    pub circles: Vec<Circle>,
    pub arcs: Vec<OpenArc>,
    /// Circle through each node (`None` for nodes on open arcs).
    pub node_circle: Vec<Option<usize>>,
}

impl FlatDiagram {
    pub fn essential_count(&self) -> usize {
        self.circles.iter().filter(|c| c.essential).count()
    }

    pub fn trivial_count(&self) -> usize {
        self.circles.len() - self.essential_count()
    }
}

impl Skeleton {
    /// Pieces of the resolution at `index`, in arc order.
    pub fn pieces(&self, index: ResolutionIndex) -> Vec<Piece> {
        let mut pieces = Vec::with_capacity(self.arcs.len());
        for arc in &self.arcs {
            let simple = |kind| Piece {
                kind,
                ends: arc.ends,
                slice: arc.slice,
                col: arc.col,
                crossing: None,
            };
            match arc.kind {
                ArcKind::Vertical => pieces.push(simple(PieceKind::Vertical)),
                ArcKind::Cup => pieces.push(simple(PieceKind::Cup)),
                ArcKind::Cap => pieces.push(simple(PieceKind::Cap)),
                ArcKind::Closure => pieces.push(simple(PieceKind::Closure)),
                ArcKind::CrossStrand { crossing } => {
                    let c = &self.crossings[crossing];
                    if arc.id != c.strand_a {
                        continue;
                    }
                    let vertical = index.bit(crossing) == (c.kind == ItemKind::CrossNeg);
                    let mk = |kind, ends, col| Piece {
                        kind,
                        ends,
                        slice: c.slice,
                        col,
                        crossing: Some(crossing),
                    };
                    if vertical {
                        pieces.push(mk(PieceKind::Vertical, [c.bottom_left, c.top_left], c.col));
                        pieces.push(mk(PieceKind::Vertical, [c.bottom_right, c.top_right], c.col + 1));
                    } else {
                        pieces.push(mk(PieceKind::Cap, [c.bottom_left, c.bottom_right], c.col));
                        pieces.push(mk(PieceKind::Cup, [c.top_left, c.top_right], c.col));
                    }
                }
            }
        }
        pieces
    }

    pub fn resolve(&self, index: ResolutionIndex) -> FlatDiagram {
        let pieces = self.pieces(index);
        let edges: Vec<[usize; 2]> = pieces.iter().map(|p| p.ends).collect();
        let mut circles = Vec::new();
        let mut arcs = Vec::new();
        let mut node_circle = vec![None; self.node_count()];
        for path in graph::trace(self.node_count(), &edges) {
            let steps: Vec<(usize, Direction)> = path
                .steps
                .iter()
                .map(|&(e, fwd)| (e, Direction::from_forward(fwd)))
                .collect();
            if !path.closed {
                arcs.push(OpenArc { id: arcs.len(), steps });
                continue;
            }
            let id = circles.len();
            let mut rotation = 0;
            let mut gamma0 = Vec::new();
            for &(p, dir) in &steps {
                let piece = &pieces[p];
                rotation += arc_rotation_contribution(piece.kind, dir);
                if piece.kind == PieceKind::Closure {
                    gamma0.push(dir.sign());
                }
                node_circle[piece.ends[0]] = Some(id);
                node_circle[piece.ends[1]] = Some(id);
            }
            debug_assert!(rotation == 1 || rotation == -1, "rotation {rotation}");
            let essential = gamma0.iter().sum::<i32>() != 0;
            circles.push(Circle {
                id,
                steps,
                essential,
                gamma0_crossings: gamma0,
                rotation,
            });
        }
        FlatDiagram {
            index,
            pieces,
            circles,
            arcs,
            node_circle,
        }
    }
}

pub fn resolve(d: &TangleDiagram, index: ResolutionIndex) -> Result<FlatDiagram> {
    let n = d.crossing_total();
    if index.len() != n {
        return Err(Error::IndexLength {
            expected: n,
            found: index.len(),
        });
    }
    Ok(d.skeleton().resolve(index))
}

pub fn winding(c: &Circle) -> i32 {
    c.winding()
}

/// Orientation label of a circle: `+` counterclockwise, `−` clockwise.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> i32 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EnhancedState {
    pub resolution: ResolutionIndex,
    pub eps: Vec<Sign>,
}

impl EnhancedState {
    /// Labels from a mask whose bit `c` marks circle `c` as `−`.
    pub fn from_mask(resolution: ResolutionIndex, circles: usize, mask: u64) -> Self {
        let eps = (0..circles)
            .map(|c| if mask >> c & 1 == 1 { Sign::Minus } else { Sign::Plus })
            .collect();
        Self { resolution, eps }
    }

    pub fn mask(&self) -> u64 {
        self.eps
            .iter()
            .enumerate()
            .fold(0, |acc, (c, s)| acc | (((*s == Sign::Minus) as u64) << c))
    }

    pub fn signs(&self) -> String {
        self.eps.iter().map(|s| s.symbol()).collect()
    }
}

/// All 2^c states, lexicographic in circle id with `+` before `−`.
pub fn enumerate_enhanced(f: &FlatDiagram) -> Vec<EnhancedState> {
    let c = f.circles.len();
    (0..1u64 << c)
        .map(|n| {
            let eps = (0..c)
                .map(|id| {
                    if n >> (c - 1 - id) & 1 == 1 {
                        Sign::Minus
                    } else {
                        Sign::Plus
                    }
                })
                .collect();
            EnhancedState {
                resolution: f.index,
                eps,
            }
        })
        .collect()
}

/// Intersection number of γ₀ with the oriented resolution.
pub fn k_degree(f: &FlatDiagram, s: &EnhancedState) -> i32 {
    f.circles.iter().zip(&s.eps).map(|(c, e)| e.value() * c.winding()).sum()
}

/// Counterclockwise minus clockwise circles.
pub fn j_degree(f: &FlatDiagram, s: &EnhancedState) -> Result<i32> {
    if !f.arcs.is_empty() {
        return Err(Error::OpenTangle);
    }
    Ok(s.eps.iter().map(|e| e.value()).sum())
}

/// Direction of every piece when each circle carries its state orientation.
/// Pieces on open arcs keep their reference traversal.
pub fn state_piece_directions(f: &FlatDiagram, s: &EnhancedState) -> Vec<Direction> {
    let mut dirs = vec![Direction::Forward; f.pieces.len()];
    for arc in &f.arcs {
        for &(p, d) in &arc.steps {
            dirs[p] = d;
        }
    }
    for (c, e) in f.circles.iter().zip(&s.eps) {
        let flip = (c.rotation > 0) != (*e == Sign::Plus);
        for &(p, d) in &c.steps {
            dirs[p] = if flip { d.reversed() } else { d };
        }
    }
    dirs
}

/// Total east-tangent rotation of an oriented set of pieces.
pub fn rotation_sum(pieces: &[Piece], dirs: &[Direction]) -> i32 {
    pieces
        .iter()
        .zip(dirs)
        .map(|(p, &d)| arc_rotation_contribution(p.kind, d))
        .sum()
}

/// Arrows read along γ₀ (closure arcs, by strand position). A closure arc
/// traversed top to bottom carries the strand upward through the tangle.
pub fn closure_arrows(pieces: &[Piece], dirs: &[Direction]) -> Vec<Arrow> {
    let mut arrows: Vec<(usize, Arrow)> = pieces
        .iter()
        .zip(dirs)
        .filter(|(p, _)| p.kind == PieceKind::Closure)
        .map(|(p, &d)| {
            let a = if d == Direction::Forward {
                Arrow::Up
            } else {
                Arrow::Down
            };
            (p.col, a)
        })
        .collect();
    arrows.sort();
    arrows.into_iter().map(|(_, a)| a).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CobordismKind {
    Merge,
    Split,
}

/// The saddle along one cube edge `I -> I + eᵢ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MergeSplit {
    pub kind: CobordismKind,
    /// Circles at the source touching the crossing (two for a merge).
    pub from: Vec<usize>,
    /// Circles at the target touching the crossing (two for a split).
    pub to: Vec<usize>,
    /// Circle correspondence for circles away from the crossing.
    pub carried: Vec<(usize, usize)>,
}

fn touched(f: &FlatDiagram, nodes: [usize; 4]) -> Vec<usize> {
    let mut v: Vec<usize> = nodes.iter().filter_map(|&n| f.node_circle[n]).collect();
    v.sort_unstable();
    v.dedup();
    v
}

/// Saddle between two resolutions differing at `crossing` (closed diagrams).
pub fn cobordism_between(skel: &Skeleton, src: &FlatDiagram, dst: &FlatDiagram, crossing: usize) -> MergeSplit {
    let c = &skel.crossings[crossing];
    let nodes = [c.bottom_left, c.bottom_right, c.top_left, c.top_right];
    let from = touched(src, nodes);
    let to = touched(dst, nodes);
    let kind = match (from.len(), to.len()) {
        (2, 1) => CobordismKind::Merge,
        (1, 2) => CobordismKind::Split,
        (a, b) => unreachable!("saddle changes {a} circles into {b}"),
    };
    let mut carried = Vec::new();
    for circle in &src.circles {
        if from.contains(&circle.id) {
            continue;
        }
        let node = src.pieces[circle.steps[0].0].ends[0];
        let target = dst.node_circle[node].expect("node on a circle");
        carried.push((circle.id, target));
    }
    MergeSplit {
        kind,
        from,
        to,
        carried,
    }
}

pub fn edge_cobordism(d: &TangleDiagram, index: ResolutionIndex, crossing: usize) -> Result<MergeSplit> {
    if !d.is_closed() {
        return Err(Error::OpenTangle);
    }
    let src = resolve(d, index)?;
    if index.bit(crossing) {
        return Err(Error::EdgeFromOne(crossing));
    }
    let skel = d.skeleton();
    let dst = skel.resolve(index.flipped(crossing));
    Ok(cobordism_between(&skel, &src, &dst, crossing))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{braid_closure, Closure, SliceItem};
    use crate::dsl::parse_diagram;

    fn e1_closure() -> TangleDiagram {
        parse_diagram("m=2; closure=annular; slices=[[cap@1],[cup@1]]").unwrap()
    }

    #[test]
    fn sigma1_resolutions() {
        let d = braid_closure(2, &[1]).unwrap();
        let f0 = resolve(&d, ResolutionIndex::new(0, 1)).unwrap();
        assert_eq!(f0.circles.len(), 2);
        assert!(f0.circles.iter().all(|c| c.essential));
        let f1 = resolve(&d, ResolutionIndex::new(1, 1)).unwrap();
        assert_eq!(f1.circles.len(), 1);
        assert!(!f1.circles[0].essential);
    }

    #[test]
    fn identity_core_circle() {
        let d = TangleDiagram::new(1, vec![], Closure::Annular).unwrap();
        let f = resolve(&d, ResolutionIndex::zero(0)).unwrap();
        assert_eq!(f.circles.len(), 1);
        let c = &f.circles[0];
        assert!(c.essential);
        assert_eq!(c.rotation, 1);
        assert_eq!(winding(c), 1);
        let states = enumerate_enhanced(&f);
        assert_eq!(states.len(), 2);
        assert_eq!(k_degree(&f, &states[0]), 1);
        assert_eq!(k_degree(&f, &states[1]), -1);
        assert_eq!(j_degree(&f, &states[0]).unwrap(), 1);
    }

    #[test]
    fn e1_closure_circle_is_trivial_with_cancelling_crossings() {
        let f = resolve(&e1_closure(), ResolutionIndex::zero(0)).unwrap();
        assert_eq!(f.circles.len(), 1);
        let c = &f.circles[0];
        assert_eq!(c.gamma0_crossings.len(), 2);
        assert_eq!(winding(c), 0);
        assert_eq!(enumerate_enhanced(&f).len(), 2);
    }

    #[test]
    fn trivial_circle_without_gamma0() {
        let d = parse_diagram("m=0; closure=none; slices=[[cup@1],[cap@1]]").unwrap();
        let f = resolve(&d, ResolutionIndex::zero(0)).unwrap();
        assert_eq!(winding(&f.circles[0]), 0);
        assert!(f.circles[0].gamma0_crossings.is_empty());
    }

    #[test]
    fn rotation_contributions() {
        use Direction::*;
        // counterclockwise trivial circle: cup left to right, cap right to left
        assert_eq!(
            arc_rotation_contribution(PieceKind::Cup, Forward) + arc_rotation_contribution(PieceKind::Cap, Backward),
            1
        );
        assert_eq!(
            arc_rotation_contribution(PieceKind::Cup, Backward) + arc_rotation_contribution(PieceKind::Cap, Forward),
            -1
        );
        assert_eq!(arc_rotation_contribution(PieceKind::Vertical, Forward), 0);
        assert_eq!(arc_rotation_contribution(PieceKind::Vertical, Backward), 0);
    }

    #[test]
    fn enumeration_order() {
        let d = braid_closure(2, &[1]).unwrap();
        let f = resolve(&d, ResolutionIndex::zero(1)).unwrap();
        let signs: Vec<String> = enumerate_enhanced(&f).iter().map(|s| s.signs()).collect();
        assert_eq!(signs, ["++", "+-", "-+", "--"]);
        let ks: Vec<i32> = enumerate_enhanced(&f).iter().map(|s| k_degree(&f, s)).collect();
        assert_eq!(ks, [2, 0, 0, -2]);
    }

    #[test]
    fn j_degree_rejects_open_tangle() {
        let d = TangleDiagram::new(1, vec![vec![SliceItem::new(ItemKind::Vertical, 1)]], Closure::None).unwrap();
        let f = resolve(&d, ResolutionIndex::zero(0)).unwrap();
        let s = EnhancedState {
            resolution: f.index,
            eps: vec![],
        };
        assert_eq!(j_degree(&f, &s), Err(Error::OpenTangle));
    }

    #[test]
    fn sigma1_edge_merges() {
        let d = braid_closure(2, &[1]).unwrap();
        let e = edge_cobordism(&d, ResolutionIndex::zero(1), 0).unwrap();
        assert_eq!(e.kind, CobordismKind::Merge);
        assert_eq!(e.from, vec![0, 1]);
        assert_eq!(e.to, vec![0]);
        assert!(e.carried.is_empty());
        assert!(edge_cobordism(&d, ResolutionIndex::new(1, 1), 0).is_err());
    }

    #[test]
    fn kink_edge_splits() {
        // one-strand loop with a negative kink: cup, crossing with the new strand, cap
        let d = parse_diagram("m=1; closure=annular; slices=[[id@1, cup@2],[x-@1, id@3],[id@1, cap@2]]").unwrap();
        let skel = d.skeleton();
        let f0 = skel.resolve(ResolutionIndex::zero(1));
        let f1 = skel.resolve(ResolutionIndex::new(1, 1));
        let (a, b) = (f0.circles.len(), f1.circles.len());
        let e = cobordism_between(&skel, &f0, &f1, 0);
        assert_eq!(
            e.kind,
            if b > a {
                CobordismKind::Split
            } else {
                CobordismKind::Merge
            }
        );
        assert_eq!(e.kind, CobordismKind::Split);
    }

    #[test]
    fn untouched_circle_carried() {
        // σ₁ on strands 1,2 plus a separate trivial circle to the right
        let d =
            parse_diagram("m=2; closure=annular; slices=[[id@1, id@2, cup@3],[x+@1, id@3, id@4],[id@1, id@2, cap@3]]")
                .unwrap();
        let e = edge_cobordism(&d, ResolutionIndex::zero(1), 0).unwrap();
        assert_eq!(e.kind, CobordismKind::Merge);
        assert_eq!(e.carried.len(), 1);
        let skel = d.skeleton();
        let f0 = skel.resolve(ResolutionIndex::zero(1));
        let f1 = skel.resolve(ResolutionIndex::new(1, 1));
        let (src, dst) = e.carried[0];
        assert!(!f0.circles[src].essential);
        assert!(!f1.circles[dst].essential);
    }

    #[test]
    fn essential_parity_matches_m() {
        for word in [&[1, 1, 1][..], &[1, -2, 1, -2], &[2, 2, -1]] {
            let d = braid_closure(3, word).unwrap();
            let skel = d.skeleton();
            for idx in ResolutionIndex::all(d.crossing_total()) {
                let f = skel.resolve(idx);
                assert_eq!(f.essential_count() % 2, 1);
                for c in &f.circles {
                    assert!(c.winding().abs() <= 1);
                    assert_eq!(c.rotation.abs(), 1);
                }
            }
        }
    }
}
