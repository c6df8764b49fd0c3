//! Kauffman bracket expansion of braid closures.

use annkh::laurent::Laurent;

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, x: usize) -> usize {
        let p = self.0[x];
        if p == x {
            return x;
        }
        let r = self.find(p);
        self.0[x] = r;
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        self.0[ra] = rb;
    }

    fn classes(&mut self) -> usize {
        (0..self.0.len()).filter(|&x| self.find(x) == x).count()
    }
}

/// Unnormalized Jones polynomial `(q + q⁻¹)·V` of a braid closure, with
/// `A^{-2} = -q` and the A-smoothing of a positive generator being the
/// braid-like (vertical) one.
pub fn oracle_jones(strands: usize, word: &[i32]) -> Laurent {
    let n = word.len();
    let delta = Laurent::from_terms([(2, -1), (-2, -1)]);
    let mut bracket = Laurent::zero();
    if n == 0 {
        bracket = delta.pow(strands as u32 - 1);
    }
    let states = if n == 0 { 0 } else { 1u64 << n };
    for state in 0..states {
        let node = |level: usize, s: usize| (level % n) * strands + s;
        let mut uf = UnionFind::new(n * strands);
        let mut a_minus_b = 0i32;
        for (k, &g) in word.iter().enumerate() {
            let i = g.unsigned_abs() as usize - 1;
            for s in (0..strands).filter(|&s| s != i && s != i + 1) {
                uf.union(node(k, s), node(k + 1, s));
            }
            let a_smoothing = state >> k & 1 == 0;
            a_minus_b += if a_smoothing { 1 } else { -1 };
            let vertical = a_smoothing == (g > 0);
            if vertical {
                uf.union(node(k, i), node(k + 1, i));
                uf.union(node(k, i + 1), node(k + 1, i + 1));
            } else {
                uf.union(node(k, i), node(k, i + 1));
                uf.union(node(k + 1, i), node(k + 1, i + 1));
            }
        }
        let loops = uf.classes() as u32;
        bracket += &(&Laurent::monomial(1, a_minus_b) * &delta.pow(loops - 1));
    }
    let writhe: i32 = word.iter().map(|g| g.signum()).sum();
    let norm = Laurent::monomial(if writhe % 2 == 0 { 1 } else { -1 }, -3 * writhe);
    let v = &norm * &bracket;
    let mut in_q = Laurent::zero();
    for (e, c) in v.terms() {
        assert!(e % 2 == 0, "odd power of A");
        let qe = -e / 2;
        in_q.add_term(qe, if qe % 2 == 0 { c } else { -c });
    }
    &in_q * &Laurent::quantum_two()
}
