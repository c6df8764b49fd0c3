//! Walks of a graph whose vertices have degree at most two.

/// A walk through edges; `(edge, forward)` where forward means the edge is
/// traversed from `ends[0]` to `ends[1]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Path {
    pub steps: Vec<(usize, bool)>,
    pub closed: bool,
}

/// Decomposes the edges into open paths and cycles.
///
/// Paths are sorted by least edge id. Every path is oriented so that its
/// least edge is traversed forward, and cycles start at that edge. Nodes of
/// degree greater than two are a caller bug.
pub(crate) fn trace(node_count: usize, edges: &[[usize; 2]]) -> Vec<Path> {
    let mut incident: Vec<Vec<(usize, usize)>> = vec![Vec::new(); node_count];
    for (e, ends) in edges.iter().enumerate() {
        incident[ends[0]].push((e, 0));
        incident[ends[1]].push((e, 1));
    }
    debug_assert!(incident.iter().all(|h| h.len() <= 2));

    let other = |node: usize, here: (usize, usize)| -> Option<(usize, usize)> {
        incident[node].iter().copied().find(|&h| h != here)
    };

    let mut seen = vec![false; edges.len()];
    let mut paths = Vec::new();
    for start in 0..edges.len() {
        if seen[start] {
            continue;
        }
        // walk forward from `start`
        let mut fwd_steps = vec![(start, true)];
        seen[start] = true;
        let mut closed = false;
        let mut cur = (start, 1usize);
        loop {
            let node = edges[cur.0][cur.1];
            match other(node, cur) {
                None => break,
                Some((e, end)) => {
                    if e == start && end == 0 {
                        closed = true;
                        break;
                    }
                    seen[e] = true;
                    fwd_steps.push((e, end == 0));
                    cur = (e, 1 - end);
                }
            }
        }
        if closed {
            paths.push(Path {
                steps: fwd_steps,
                closed,
            });
            continue;
        }
        // open: extend backwards from the start's tail
        let mut back_steps = Vec::new();
        let mut cur = (start, 0usize);
        loop {
            let node = edges[cur.0][cur.1];
            match other(node, cur) {
                None => break,
                Some((e, end)) => {
                    seen[e] = true;
                    // reached by leaving `e` through `end`, so walking
                    // toward `start` enters e at the opposite end
                    back_steps.push((e, end == 1));
                    cur = (e, 1 - end);
                }
            }
        }
        back_steps.reverse();
        back_steps.extend(fwd_steps);
        paths.push(Path {
            steps: back_steps,
            closed: false,
        });
    }
    paths
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn self_loop() {
        let p = trace(1, &[[0, 0]]);
        assert_eq!(
            p,
            vec![Path {
                steps: vec![(0, true)],
                closed: true
            }]
        );
    }

    #[test]
    fn triangle_with_mixed_directions() {
        // 0: a->b, 1: c->b, 2: c->a
        let p = trace(3, &[[0, 1], [2, 1], [2, 0]]);
        assert_eq!(p.len(), 1);
        assert!(p[0].closed);
        assert_eq!(p[0].steps, vec![(0, true), (1, false), (2, true)]);
    }

    #[test]
    fn open_path_least_edge_forward() {
        // path: n0 -e1- n1 -e0- n2, e0 stored as n2->n1
        let p = trace(3, &[[2, 1], [0, 1]]);
        assert_eq!(p.len(), 1);
        assert!(!p[0].closed);
        // e0 forward is n2 -> n1, so the walk is n2 -> n1 -> n0
        assert_eq!(p[0].steps, vec![(0, true), (1, false)]);
    }

    #[test]
    fn open_path_extends_both_ways() {
        // n0 -e1-> n1 -e0-> n2 -e2-> n3
        let p = trace(4, &[[1, 2], [0, 1], [2, 3]]);
        assert_eq!(p[0].steps, vec![(1, true), (0, true), (2, true)]);
    }
}
