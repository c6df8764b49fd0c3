//! Explicit planar realization of resolved diagrams.
//!
//! Slice `s` occupies heights `[s, s+1]`; strands meet slice boundaries at
//! integer abscissae. Inside a slice every item is drawn in its own column,
//! with short straight bands joining columns to boundary positions. The
//! closure arc at position `i` leaves the top at `(i, H)`, rises to `H + i`,
//! runs left to `x = -i`, descends to `y = -i` and returns to `(i, 0)`, so
//! closure arcs are nested with position 1 innermost. The annulus axis sits
//! at `(0, H/2)`, inside every closure loop, and γ₀ is the ray from the axis
//! toward `-x`.
//!
//! This module is an independent route to circle orientation (sign of the
//! enclosed signed area) and winding (signed crossings of γ₀); it is used to
//! validate the combinatorial rules in [`crate::resolution`].

use crate::diagram::{Direction, Skeleton};
use crate::resolution::{FlatDiagram, Piece, PieceKind};

pub type Point = (f64, f64);

#[derive(Clone, Debug)]
pub struct RealizedCircle {
    pub id: usize,
    pub polyline: Vec<Point>,
    /// Shoelace area of the reference traversal.
    pub signed_area: f64,
    /// Signed crossings of γ₀ by the reference traversal.
    pub ray_crossings: i32,
}

impl RealizedCircle {
    /// +1 if the reference traversal is counterclockwise.
    pub fn orientation_sign(&self) -> i32 {
        if self.signed_area > 0.0 {
            1
        } else {
            -1
        }
    }

    /// Winding number around the axis of the counterclockwise orientation.
    pub fn winding(&self) -> i32 {
        self.orientation_sign() * self.ray_crossings
    }
}

fn node_point(skel: &Skeleton, node: usize) -> Point {
    let (level, pos) = skel.node_coords(node);
    (pos as f64, level as f64)
}

/// Polyline of a piece in its forward direction.
pub fn piece_polyline(skel: &Skeleton, piece: &Piece) -> Vec<Point> {
    let a = node_point(skel, piece.ends[0]);
    let b = node_point(skel, piece.ends[1]);
    let s = piece.slice as f64;
    let x = piece.col as f64;
    match piece.kind {
        PieceKind::Vertical => vec![a, (x, s + 0.25), (x, s + 0.75), b],
        PieceKind::Cup => vec![a, (x, s + 0.75), (x + 0.5, s + 0.6), (x + 1.0, s + 0.75), b],
        PieceKind::Cap => vec![a, (x, s + 0.25), (x + 0.5, s + 0.4), (x + 1.0, s + 0.25), b],
        PieceKind::Closure => {
            let h = skel.height as f64;
            let i = piece.col as f64;
            vec![a, (i, h + i), (-i, h + i), (-i, -i), (i, -i), b]
        }
    }
}

pub fn axis(skel: &Skeleton) -> Point {
    (0.0, skel.height as f64 / 2.0)
}

fn shoelace(poly: &[Point]) -> f64 {
    let n = poly.len();
    (0..n)
        .map(|k| {
            let (x0, y0) = poly[k];
            let (x1, y1) = poly[(k + 1) % n];
            x0 * y1 - x1 * y0
        })
        .sum::<f64>()
        / 2.0
}

/// Signed crossings of the leftward horizontal ray from `origin`.
fn ray_crossings(poly: &[Point], origin: Point) -> i32 {
    let n = poly.len();
    let (ox, oy) = origin;
    let mut total = 0;
    for k in 0..n {
        let (x0, y0) = poly[k];
        let (x1, y1) = poly[(k + 1) % n];
        if (y0 < oy) == (y1 < oy) {
            continue;
        }
        let t = (oy - y0) / (y1 - y0);
        let x = x0 + t * (x1 - x0);
        if x < ox {
            // det((-1, 0), (dx, dy)) = -dy
            total += if y1 < y0 { 1 } else { -1 };
        }
    }
    total
}

pub fn realize(skel: &Skeleton, flat: &FlatDiagram) -> Vec<RealizedCircle> {
    let origin = axis(skel);
    flat.circles
        .iter()
        .map(|c| {
            let mut poly: Vec<Point> = Vec::new();
            for &(p, dir) in &c.steps {
                let mut seg = piece_polyline(skel, &flat.pieces[p]);
                if dir == Direction::Backward {
                    seg.reverse();
                }
                if !poly.is_empty() {
                    seg.remove(0);
                }
                poly.extend(seg);
            }
            // closed: last point repeats the first
            poly.pop();
            RealizedCircle {
                id: c.id,
                signed_area: shoelace(&poly),
                ray_crossings: ray_crossings(&poly, origin),
                polyline: poly,
            }
        })
        .collect()
}

/// A circle where the combinatorial rules disagree with the realization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RotationMismatch {
    pub circle: usize,
    pub fast_rotation: i32,
    pub oracle_rotation: i32,
    pub fast_winding: i32,
    pub oracle_winding: i32,
}

pub fn compare_with_oracle(skel: &Skeleton, flat: &FlatDiagram) -> Vec<RotationMismatch> {
    realize(skel, flat)
        .into_iter()
        .zip(&flat.circles)
        .filter_map(|(r, c)| {
            let m = RotationMismatch {
                circle: c.id,
                fast_rotation: c.rotation,
                oracle_rotation: r.orientation_sign(),
                fast_winding: c.winding(),
                oracle_winding: r.winding(),
            };
            (m.fast_rotation != m.oracle_rotation || m.fast_winding != m.oracle_winding).then_some(m)
        })
        .collect()
}

/// True if no two non-adjacent segments of any circle meet, and distinct
/// circles are disjoint.
pub fn is_embedded(circles: &[RealizedCircle]) -> bool {
    let segs: Vec<(usize, usize, Point, Point)> = circles
        .iter()
        .flat_map(|c| {
            let n = c.polyline.len();
            (0..n).map(move |k| (c.id, k, c.polyline[k], c.polyline[(k + 1) % n]))
        })
        .collect();
    for (i, a) in segs.iter().enumerate() {
        for b in &segs[i + 1..] {
            if a.0 == b.0 {
                let n = circles[a.0].polyline.len();
                let adjacent = (a.1 + 1) % n == b.1 || (b.1 + 1) % n == a.1;
                if adjacent {
                    continue;
                }
            }
            if segments_meet(a.2, a.3, b.2, b.3) {
                return false;
            }
        }
    }
    true
}

fn segments_meet(p1: Point, p2: Point, q1: Point, q2: Point) -> bool {
    let orient = |a: Point, b: Point, c: Point| {
        let v = (b.0 - a.0) * (c.1 - a.1) - (b.1 - a.1) * (c.0 - a.0);
        if v.abs() < 1e-12 {
            0
        } else if v > 0.0 {
            1
        } else {
            -1
        }
    };
    let on_seg = |a: Point, b: Point, c: Point| {
        c.0 >= a.0.min(b.0) - 1e-12
            && c.0 <= a.0.max(b.0) + 1e-12
            && c.1 >= a.1.min(b.1) - 1e-12
            && c.1 <= a.1.max(b.1) + 1e-12
    };
    let (o1, o2, o3, o4) = (
        orient(p1, p2, q1),
        orient(p1, p2, q2),
        orient(q1, q2, p1),
        orient(q1, q2, p2),
    );
    if o1 != o2 && o3 != o4 && o1 * o2 <= 0 && o3 * o4 <= 0 && (o1 != 0 || o2 != 0) {
        return true;
    }
    (o1 == 0 && on_seg(p1, p2, q1))
        || (o2 == 0 && on_seg(p1, p2, q2))
        || (o3 == 0 && on_seg(q1, q2, p1))
        || (o4 == 0 && on_seg(q1, q2, p2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::braid_closure;
    use crate::dsl::parse_diagram;
    use crate::resolution::ResolutionIndex;

    #[test]
    fn core_circle_counterclockwise() {
        let d = parse_diagram("m=1; closure=annular; slices=[]").unwrap();
        let skel = d.skeleton();
        let f = skel.resolve(ResolutionIndex::zero(0));
        let r = realize(&skel, &f);
        assert_eq!(r[0].orientation_sign(), 1);
        assert_eq!(r[0].winding(), 1);
        assert!(compare_with_oracle(&skel, &f).is_empty());
    }

    #[test]
    fn flat_circle_winding_zero() {
        let d = parse_diagram("m=0; closure=none; slices=[[cup@1],[cap@1]]").unwrap();
        let skel = d.skeleton();
        let f = skel.resolve(ResolutionIndex::zero(0));
        let r = realize(&skel, &f);
        assert_eq!(r[0].winding(), 0);
        // reference traversal: cup left to right then cap right to left
        assert_eq!(r[0].orientation_sign(), 1);
        assert!(compare_with_oracle(&skel, &f).is_empty());
    }

    #[test]
    fn realizations_are_embedded_and_agree() {
        let diagrams = [
            braid_closure(2, &[1, 1, 1]).unwrap(),
            braid_closure(3, &[1, -2, 1, -2]).unwrap(),
            parse_diagram("m=2; closure=annular; slices=[[cap@1],[cup@1]]").unwrap(),
            parse_diagram("m=1; closure=annular; slices=[[id@1, cup@2],[x-@1, id@3],[id@1, cap@2]]").unwrap(),
            parse_diagram("m=2; closure=annular; slices=[[cup@1, id@1, id@2],[id@1, x+@2, id@4],[id@1, id@2, cap@3]]")
                .unwrap(),
        ];
        for d in &diagrams {
            let skel = d.skeleton();
            for idx in ResolutionIndex::all(d.crossing_total()) {
                let f = skel.resolve(idx);
                let r = realize(&skel, &f);
                assert!(is_embedded(&r), "{idx}");
                assert!(compare_with_oracle(&skel, &f).is_empty(), "{idx}");
            }
        }
    }
}
