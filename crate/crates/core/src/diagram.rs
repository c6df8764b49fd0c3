//! Slice-word tangle diagrams and their annular closures.
//!
//! A diagram is a stack of horizontal slices read bottom to top. Strands
//! cross each slice boundary at integer abscissae `1..=width`. With annular
//! closure the `m` top endpoints are joined to the `m` bottom endpoints by
//! nested arcs routed around the left of the diagram; these closure arcs are
//! exactly the points where the link meets the ray γ₀.
//!
//! Arc identifiers are 0-based: for every slice (bottom to top) and every
//! item (left to right) the item's pieces are numbered in order, a crossing
//! contributing its bottom-left strand before its bottom-right strand; the
//! closure arcs come last, ordered by strand position. Component identifiers
//! are 0-based indices of components sorted by least arc id.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::DiagramError;
use crate::graph::{self, Path};

/// What occupies a slot of a slice.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ItemKind {
    Vertical,
    Cup,
    Cap,
    CrossPos,
    CrossNeg,
}

impl ItemKind {
    pub const ALL: [ItemKind; 5] = [
        ItemKind::Vertical,
        ItemKind::Cup,
        ItemKind::Cap,
        ItemKind::CrossPos,
        ItemKind::CrossNeg,
    ];

    pub fn inputs(self) -> usize {
        match self {
            ItemKind::Vertical => 1,
            ItemKind::Cup => 0,
            ItemKind::Cap | ItemKind::CrossPos | ItemKind::CrossNeg => 2,
        }
    }

    pub fn outputs(self) -> usize {
        match self {
            ItemKind::Vertical => 1,
            ItemKind::Cap => 0,
            ItemKind::Cup | ItemKind::CrossPos | ItemKind::CrossNeg => 2,
        }
    }

    pub fn is_crossing(self) -> bool {
        matches!(self, ItemKind::CrossPos | ItemKind::CrossNeg)
    }

    /// DSL token (`id`, `cup`, `cap`, `x+`, `x-`).
    pub fn token(self) -> &'static str {
        match self {
            ItemKind::Vertical => "id",
            ItemKind::Cup => "cup",
            ItemKind::Cap => "cap",
            ItemKind::CrossPos => "x+",
            ItemKind::CrossNeg => "x-",
        }
    }

    pub fn from_token(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.token() == s)
    }

    pub fn mirrored(self) -> Self {
        match self {
            ItemKind::CrossPos => ItemKind::CrossNeg,
            ItemKind::CrossNeg => ItemKind::CrossPos,
            k => k,
        }
    }
}

/// One item of a slice. `position` is 1-based: one more than the number of
/// input strands lying to the item's left.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SliceItem {
    pub kind: ItemKind,
    pub position: usize,
}

impl SliceItem {
    pub fn new(kind: ItemKind, position: usize) -> Self {
        Self { kind, position }
    }
}

impl fmt::Display for SliceItem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}", self.kind.token(), self.position)
    }
}

pub type Slice = Vec<SliceItem>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Closure {
    Annular,
    None,
}

/// Traversal direction of an arc relative to its forward direction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Direction {
    Forward,
    Backward,
}

impl Direction {
    pub fn sign(self) -> i32 {
        match self {
            Direction::Forward => 1,
            Direction::Backward => -1,
        }
    }

    pub fn reversed(self) -> Self {
        match self {
            Direction::Forward => Direction::Backward,
            Direction::Backward => Direction::Forward,
        }
    }

    pub(crate) fn from_forward(fwd: bool) -> Self {
        if fwd {
            Direction::Forward
        } else {
            Direction::Backward
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TangleDiagram {
    m_bottom: usize,
    m_top: usize,
    slices: Vec<Slice>,
    closure: Closure,
    marked_arc: Option<usize>,
    orientation_overrides: BTreeMap<usize, Direction>,
}

impl TangleDiagram {
    /// Validates slice widths and item positions.
    pub fn new(m: usize, slices: Vec<Slice>, closure: Closure) -> Result<Self, DiagramError> {
        let mut width = m;
        for (s, slice) in slices.iter().enumerate() {
            let mut cursor = 1;
            let mut out = 0;
            for (k, item) in slice.iter().enumerate() {
                if item.position != cursor {
                    return Err(DiagramError::Position {
                        slice: s,
                        item: k,
                        expected: cursor,
                        found: item.position,
                    });
                }
                cursor += item.kind.inputs();
                out += item.kind.outputs();
                if cursor > width + 1 {
                    return Err(DiagramError::Overrun {
                        slice: s,
                        item: k,
                        width,
                    });
                }
            }
            if cursor != width + 1 {
                return Err(DiagramError::Width {
                    slice: s,
                    expected: width,
                    found: cursor - 1,
                });
            }
            width = out;
        }
        if closure == Closure::Annular && width != m {
            return Err(DiagramError::ClosureWidth { bottom: m, top: width });
        }
        Ok(Self {
            m_bottom: m,
            m_top: width,
            slices,
            closure,
            marked_arc: None,
            orientation_overrides: BTreeMap::new(),
        })
    }

    pub fn with_marked_arc(mut self, arc: Option<usize>) -> Result<Self, DiagramError> {
        if let Some(a) = arc {
            let count = self.arc_count();
            if a >= count {
                return Err(DiagramError::DanglingMarkedArc {
                    arc: a,
                    arc_count: count,
                });
            }
        }
        self.marked_arc = arc;
        Ok(self)
    }

    pub fn with_orientation(mut self, component: usize, dir: Direction) -> Result<Self, DiagramError> {
        let count = self.components().len();
        if component >= count {
            return Err(DiagramError::UnknownComponent { component, count });
        }
        self.orientation_overrides.insert(component, dir);
        Ok(self)
    }

    pub fn m_bottom(&self) -> usize {
        self.m_bottom
    }

    pub fn m_top(&self) -> usize {
        self.m_top
    }

    /// Strand count at the bottom boundary (the wrapping number for annular closures).
    pub fn m(&self) -> usize {
        self.m_bottom
    }

    pub fn slices(&self) -> &[Slice] {
        &self.slices
    }

    pub fn closure(&self) -> Closure {
        self.closure
    }

    pub fn marked_arc(&self) -> Option<usize> {
        self.marked_arc
    }

    pub fn orientation_overrides(&self) -> &BTreeMap<usize, Direction> {
        &self.orientation_overrides
    }

    /// True when the diagram has no free endpoints.
    pub fn is_closed(&self) -> bool {
        match self.closure {
            Closure::Annular => true,
            Closure::None => self.m_bottom == 0 && self.m_top == 0,
        }
    }

    pub fn crossing_total(&self) -> usize {
        self.slices.iter().flatten().filter(|it| it.kind.is_crossing()).count()
    }

    pub fn arc_count(&self) -> usize {
        let items: usize = self
            .slices
            .iter()
            .flatten()
            .map(|it| if it.kind.is_crossing() { 2 } else { 1 })
            .sum();
        items
            + if self.closure == Closure::Annular {
                self.m_bottom
            } else {
                0
            }
    }

    /// Every crossing kind swapped; arcs and components keep their ids.
    pub fn mirror(&self) -> Self {
        let mut out = self.clone();
        for item in out.slices.iter_mut().flatten() {
            item.kind = item.kind.mirrored();
        }
        out
    }

    /// The same slices with closure removed. Marks and overrides refer to
    /// the closed diagram's arcs and components, so they are dropped.
    pub fn open_tangle(&self) -> Self {
        Self {
            closure: Closure::None,
            marked_arc: None,
            orientation_overrides: BTreeMap::new(),
            ..self.clone()
        }
    }

    /// Annular closure of a tangle with equal top and bottom widths.
    pub fn annular_closure(&self) -> Result<Self, DiagramError> {
        if self.m_bottom != self.m_top {
            return Err(DiagramError::ClosureWidth {
                bottom: self.m_bottom,
                top: self.m_top,
            });
        }
        Ok(Self {
            closure: Closure::Annular,
            marked_arc: None,
            orientation_overrides: BTreeMap::new(),
            ..self.clone()
        })
    }

    pub fn skeleton(&self) -> Skeleton {
        Skeleton::new(self)
    }

    pub fn components(&self) -> Vec<Component> {
        trace_link_components(self)
    }
}

/// Arc of the unresolved diagram.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArcKind {
    Vertical,
    Cup,
    Cap,
    /// A strand through a crossing, oriented bottom to top.
    CrossStrand {
        crossing: usize,
    },
    Closure,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Arc {
    pub id: usize,
    pub kind: ArcKind,
    /// Forward traversal goes `ends[0] -> ends[1]`: upward for verticals and
    /// crossing strands, left to right for cups and caps, top to bottom for
    /// closure arcs.
    pub ends: [usize; 2],
    pub slice: usize,
    /// Layout column of the item's leftmost leg (closure arcs: strand position).
    pub col: usize,
}

/// A crossing and the four boundary nodes around it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CrossingSite {
    pub index: usize,
    pub slice: usize,
    pub kind: ItemKind,
    pub col: usize,
    pub bottom_left: usize,
    pub bottom_right: usize,
    pub top_left: usize,
    pub top_right: usize,
    /// Arc from bottom-left to top-right.
    pub strand_a: usize,
    /// Arc from bottom-right to top-left.
    pub strand_b: usize,
}

/// Node and arc tables derived from a diagram. Node `(level, pos)` is the
/// crossing of strand `pos` (1-based) with slice boundary `level`.
#[derive(Clone, Debug)]
pub struct Skeleton {
    pub m: usize,
    pub height: usize,
    pub annular: bool,
    level_width: Vec<usize>,
    level_offset: Vec<usize>,
    pub arcs: Vec<Arc>,
    pub crossings: Vec<CrossingSite>,
    node_count: usize,
}

impl Skeleton {
    fn new(d: &TangleDiagram) -> Self {
        let mut level_width = vec![d.m_bottom];
        for slice in &d.slices {
            level_width.push(slice.iter().map(|it| it.kind.outputs()).sum());
        }
        let mut level_offset = Vec::with_capacity(level_width.len());
        let mut acc = 0;
        for w in &level_width {
            level_offset.push(acc);
            acc += w;
        }
        let node = |level: usize, pos: usize| level_offset[level] + pos - 1;

        let mut arcs = Vec::new();
        let mut crossings = Vec::new();
        for (s, slice) in d.slices.iter().enumerate() {
            let mut out_pos = 1;
            let mut col = 1;
            for item in slice {
                let p = item.position;
                let q = out_pos;
                let mut push = |kind, ends| {
                    let id = arcs.len();
                    arcs.push(Arc {
                        id,
                        kind,
                        ends,
                        slice: s,
                        col,
                    });
                    id
                };
                match item.kind {
                    ItemKind::Vertical => {
                        push(ArcKind::Vertical, [node(s, p), node(s + 1, q)]);
                    }
                    ItemKind::Cup => {
                        push(ArcKind::Cup, [node(s + 1, q), node(s + 1, q + 1)]);
                    }
                    ItemKind::Cap => {
                        push(ArcKind::Cap, [node(s, p), node(s, p + 1)]);
                    }
                    ItemKind::CrossPos | ItemKind::CrossNeg => {
                        let index = crossings.len();
                        let (bl, br) = (node(s, p), node(s, p + 1));
                        let (tl, tr) = (node(s + 1, q), node(s + 1, q + 1));
                        let a = push(ArcKind::CrossStrand { crossing: index }, [bl, tr]);
                        let b = push(ArcKind::CrossStrand { crossing: index }, [br, tl]);
                        crossings.push(CrossingSite {
                            index,
                            slice: s,
                            kind: item.kind,
                            col,
                            bottom_left: bl,
                            bottom_right: br,
                            top_left: tl,
                            top_right: tr,
                            strand_a: a,
                            strand_b: b,
                        });
                    }
                }
                out_pos += item.kind.outputs();
                col += item.kind.inputs().max(item.kind.outputs()) + 1;
            }
        }
        let height = d.slices.len();
        let annular = d.closure == Closure::Annular;
        if annular {
            for pos in 1..=d.m_bottom {
                let id = arcs.len();
                arcs.push(Arc {
                    id,
                    kind: ArcKind::Closure,
                    ends: [node(height, pos), node(0, pos)],
                    slice: height,
                    col: pos,
                });
            }
        }
        Self {
            m: d.m_bottom,
            height,
            annular,
            node_count: acc,
            level_width,
            level_offset,
            arcs,
            crossings,
        }
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn node(&self, level: usize, pos: usize) -> usize {
        self.level_offset[level] + pos - 1
    }

    /// `(level, pos)` of a node.
    pub fn node_coords(&self, node: usize) -> (usize, usize) {
        let level = self.level_offset.partition_point(|&o| o <= node) - 1;
        (level, node - self.level_offset[level] + 1)
    }

    pub fn level_width(&self, level: usize) -> usize {
        self.level_width[level]
    }
}

/// A link component (or, for open tangles, a strand) as a cyclic arc sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub id: usize,
    /// Arcs in traversal order under the component's orientation.
    pub arcs: Vec<(usize, Direction)>,
    pub closed: bool,
}

impl Component {
    pub fn least_arc(&self) -> usize {
        self.arcs.iter().map(|&(a, _)| a).min().unwrap_or(0)
    }
}

/// Partitions the arcs into components, each oriented by the default rule
/// (least arc traversed forward) unless overridden.
pub fn trace_link_components(d: &TangleDiagram) -> Vec<Component> {
    let skel = d.skeleton();
    let edges: Vec<[usize; 2]> = skel.arcs.iter().map(|a| a.ends).collect();
    graph::trace(skel.node_count(), &edges)
        .into_iter()
        .enumerate()
        .map(|(id, Path { steps, closed })| {
            let mut arcs: Vec<(usize, Direction)> = steps
                .into_iter()
                .map(|(e, fwd)| (e, Direction::from_forward(fwd)))
                .collect();
            if d.orientation_overrides.get(&id) == Some(&Direction::Backward) {
                reverse_walk(&mut arcs, closed);
            }
            Component { id, arcs, closed }
        })
        .collect()
}

fn reverse_walk(arcs: &mut [(usize, Direction)], closed: bool) {
    arcs.reverse();
    for a in arcs.iter_mut() {
        a.1 = a.1.reversed();
    }
    if closed && !arcs.is_empty() {
        // keep the least arc first
        let pos = arcs
            .iter()
            .enumerate()
            .min_by_key(|(_, &(a, _))| a)
            .map(|(i, _)| i)
            .unwrap_or(0);
        arcs.rotate_left(pos);
    }
}

/// Orientation of every arc: `dirs[arc]`.
pub fn arc_directions(d: &TangleDiagram) -> Vec<Direction> {
    let mut dirs = vec![Direction::Forward; d.arc_count()];
    for c in trace_link_components(d) {
        for (a, dir) in c.arcs {
            dirs[a] = dir;
        }
    }
    dirs
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct CrossingCount {
    pub n_plus: usize,
    pub n_minus: usize,
}

impl CrossingCount {
    pub fn total(&self) -> usize {
        self.n_plus + self.n_minus
    }
}

/// Signs of every crossing under the diagram's orientation, in crossing order.
pub fn crossing_signs(d: &TangleDiagram) -> Vec<i32> {
    let skel = d.skeleton();
    let dirs = arc_directions(d);
    skel.crossings
        .iter()
        .map(|c| {
            let kind = if c.kind == ItemKind::CrossPos { 1 } else { -1 };
            kind * dirs[c.strand_a].sign() * dirs[c.strand_b].sign()
        })
        .collect()
}

pub fn count_crossings(d: &TangleDiagram) -> CrossingCount {
    let signs = crossing_signs(d);
    CrossingCount {
        n_plus: signs.iter().filter(|&&s| s > 0).count(),
        n_minus: signs.iter().filter(|&&s| s < 0).count(),
    }
}

pub fn mirror(d: &TangleDiagram) -> TangleDiagram {
    d.mirror()
}

/// Convenience constructor for braid closures: generator `i` (1-based) is
/// σᵢ, `-i` is σᵢ⁻¹.
pub fn braid_closure(strands: usize, word: &[i32]) -> Result<TangleDiagram, DiagramError> {
    TangleDiagram::new(strands, braid_slices(strands, word)?, Closure::Annular)
}

pub fn braid_slices(strands: usize, word: &[i32]) -> Result<Vec<Slice>, DiagramError> {
    word.iter()
        .map(|&g| {
            let i = g.unsigned_abs() as usize;
            if g == 0 || i >= strands {
                return Err(DiagramError::BraidGenerator { generator: g, strands });
            }
            let kind = if g > 0 { ItemKind::CrossPos } else { ItemKind::CrossNeg };
            let mut slice = Vec::new();
            let mut pos = 1;
            while pos <= strands {
                if pos == i {
                    slice.push(SliceItem::new(kind, pos));
                    pos += 2;
                } else {
                    slice.push(SliceItem::new(ItemKind::Vertical, pos));
                    pos += 1;
                }
            }
            Ok(slice)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn it(kind: ItemKind, p: usize) -> SliceItem {
        SliceItem::new(kind, p)
    }

    #[test]
    fn identity_tangle_is_one_component() {
        let d = TangleDiagram::new(1, vec![], Closure::Annular).unwrap();
        let cs = d.components();
        assert_eq!(cs.len(), 1);
        assert_eq!(cs[0].arcs, vec![(0, Direction::Forward)]);
    }

    #[test]
    fn two_verticals_two_components() {
        let d = TangleDiagram::new(
            2,
            vec![vec![it(ItemKind::Vertical, 1), it(ItemKind::Vertical, 2)]],
            Closure::Annular,
        )
        .unwrap();
        assert_eq!(d.components().len(), 2);
    }

    #[test]
    fn sigma1_closure_single_component() {
        let d = braid_closure(2, &[1]).unwrap();
        assert_eq!(d.components().len(), 1);
        assert_eq!(count_crossings(&d), CrossingCount { n_plus: 1, n_minus: 0 });
        assert_eq!(count_crossings(&d.mirror()), CrossingCount { n_plus: 0, n_minus: 1 });
    }

    #[test]
    fn trefoil_is_a_knot() {
        let d = braid_closure(2, &[1, 1, 1]).unwrap();
        assert_eq!(d.components().len(), 1);
        assert_eq!(count_crossings(&d).n_plus, 3);
    }

    #[test]
    fn hopf_link_two_components_and_override_flips_signs() {
        let d = braid_closure(2, &[1, 1]).unwrap();
        assert_eq!(d.components().len(), 2);
        assert_eq!(count_crossings(&d), CrossingCount { n_plus: 2, n_minus: 0 });
        let d2 = d.clone().with_orientation(1, Direction::Backward).unwrap();
        assert_eq!(count_crossings(&d2), CrossingCount { n_plus: 0, n_minus: 2 });
        assert!(d.with_orientation(2, Direction::Forward).is_err());
    }

    #[test]
    fn flat_diagram_counts_zero() {
        let d = TangleDiagram::new(
            0,
            vec![vec![it(ItemKind::Cup, 1)], vec![it(ItemKind::Cap, 1)]],
            Closure::None,
        )
        .unwrap();
        assert!(d.is_closed());
        assert_eq!(count_crossings(&d), CrossingCount::default());
        assert_eq!(d.mirror(), d);
        assert_eq!(d.components().len(), 1);
    }

    #[test]
    fn width_errors() {
        let e = TangleDiagram::new(2, vec![vec![it(ItemKind::Vertical, 1)]], Closure::None).unwrap_err();
        assert!(matches!(
            e,
            DiagramError::Width {
                slice: 0,
                expected: 2,
                found: 1
            }
        ));
        let e = TangleDiagram::new(
            1,
            vec![vec![it(ItemKind::Cup, 1), it(ItemKind::Vertical, 1)]],
            Closure::Annular,
        )
        .unwrap_err();
        assert!(matches!(e, DiagramError::ClosureWidth { bottom: 1, top: 3 }));
        let e = TangleDiagram::new(2, vec![vec![it(ItemKind::Vertical, 2)]], Closure::None).unwrap_err();
        assert!(matches!(
            e,
            DiagramError::Position {
                expected: 1,
                found: 2,
                ..
            }
        ));
        let e = TangleDiagram::new(1, vec![vec![it(ItemKind::CrossPos, 1)]], Closure::None).unwrap_err();
        assert!(matches!(e, DiagramError::Overrun { .. }));
    }

    #[test]
    fn marked_arc_must_exist() {
        let d = TangleDiagram::new(1, vec![], Closure::Annular).unwrap();
        assert!(d.clone().with_marked_arc(Some(0)).is_ok());
        assert!(matches!(
            d.with_marked_arc(Some(1)),
            Err(DiagramError::DanglingMarkedArc { arc: 1, arc_count: 1 })
        ));
    }

    #[test]
    fn closure_arcs_equal_m() {
        let d = braid_closure(3, &[1, -2, 1]).unwrap();
        let skel = d.skeleton();
        let closures = skel.arcs.iter().filter(|a| a.kind == ArcKind::Closure).count();
        assert_eq!(closures, 3);
    }

    #[test]
    fn node_coords_round_trip() {
        let d = TangleDiagram::new(
            2,
            vec![vec![it(ItemKind::Cap, 1)], vec![], vec![it(ItemKind::Cup, 1)]],
            Closure::Annular,
        )
        .unwrap();
        let s = d.skeleton();
        for level in 0..=s.height {
            for pos in 1..=s.level_width(level) {
                assert_eq!(s.node_coords(s.node(level, pos)), (level, pos));
            }
        }
    }
}
