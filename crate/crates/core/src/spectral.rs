//! Pages of the spectral sequence of the k-filtration.
//!
//! `A_p` is spanned by generators with `k ≤ p`; the differential maps
//! `A_p` into itself. With
//! `Z_r^p = A_p ∩ d⁻¹(A_{p−2r})` the page is
//! `E_r^p = Z_r^p / (Z_{r−1}^{p−2} + d Z_{r−1}^{p+2r−2})`, evaluated
//! separately in every `(i, j)` block. `E_1` is the homology of the
//! associated graded (annular) complex and the sequence converges to the
//! homology of the full complex.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;

use crate::complex::GradedComplexF2;
use crate::error::{Error, Result};
use crate::f2::{kernel_basis, span_dim, BitVec};

type Dims = BTreeMap<(i32, i32, i32), usize>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PageTable {
    pub r: usize,
    /// Dimension keyed by `(k, i, j)`; zero entries omitted.
    pub dims: BTreeMap<(i32, i32, i32), usize>,
    /// Set on the page where the sequence has stabilized.
    pub is_final: bool,
}

impl PageTable {
    pub fn total(&self) -> usize {
        self.dims.values().sum()
    }
}

struct BlockView<'a> {
    c: &'a GradedComplexF2,
    /// Generators of degrees `i − 1`, `i`, `i + 1` at a fixed `j`.
    prev: Vec<usize>,
    cur: Vec<usize>,
    next: Vec<usize>,
    cur_pos: HashMap<usize, usize>,
}

impl BlockView<'_> {
    fn k(&self, g: usize) -> i32 {
        self.c.generators[g].k
    }

    /// Basis of `Z_r^p` inside `span(dom)`, where `d` lands in `span(cod)`.
    fn z(&self, dom: &[usize], cod: &[usize], p: i32, r: usize) -> Vec<BitVec> {
        let sub: Vec<usize> = (0..dom.len()).filter(|&n| self.k(dom[n]) <= p).collect();
        let watched: HashMap<usize, usize> = cod
            .iter()
            .filter(|&&y| self.k(y) > p - 2 * r as i32)
            .enumerate()
            .map(|(n, &y)| (y, n))
            .collect();
        let images: Vec<BitVec> = sub
            .iter()
            .map(|&n| {
                BitVec::from_indices(
                    watched.len(),
                    self.c
                        .differential
                        .column(dom[n])
                        .iter()
                        .filter_map(|y| watched.get(y).copied()),
                )
            })
            .collect();
        kernel_basis(&images)
            .into_iter()
            .map(|v| BitVec::from_indices(dom.len(), v.ones().map(|n| sub[n])))
            .collect()
    }

    /// `d` of a vector over `prev`, expressed over `cur`.
    fn d_prev(&self, v: &BitVec) -> BitVec {
        let mut out = BitVec::zeros(self.cur.len());
        for n in v.ones() {
            for y in self.c.differential.column(self.prev[n]) {
                out.flip(self.cur_pos[y]);
            }
        }
        out
    }

    fn page_dim(&self, p: i32, r: usize) -> usize {
        let num = self.z(&self.cur, &self.next, p, r).len();
        let mut den: Vec<BitVec> = self.z(&self.cur, &self.next, p - 2, r - 1);
        let top = p + 2 * r as i32 - 2;
        den.extend(self.z(&self.prev, &self.cur, top, r - 1).iter().map(|w| self.d_prev(w)));
        num - span_dim(&den)
    }
}

/// `E_1, E_2, …` up to and including the first page equal to `E_∞`
/// (flagged final), optionally cut at `max_page`.
pub fn spectral_pages(c: &GradedComplexF2, max_page: Option<usize>) -> Result<Vec<PageTable>> {
    if let Some((s, t)) = c.edges().find(|&(s, t)| c.generators[t].k > c.generators[s].k) {
        return Err(Error::Filtration {
            source_gen: s,
            target: t,
            delta: c.generators[t].k - c.generators[s].k,
        });
    }
    let mut by_ij: BTreeMap<(i32, i32), Vec<usize>> = BTreeMap::new();
    for (g, x) in c.generators.iter().enumerate() {
        by_ij.entry((x.i, x.j)).or_default().push(g);
    }
    let (kmin, kmax) = c
        .generators
        .iter()
        .fold((0, 0), |(lo, hi), g| (lo.min(g.k), hi.max(g.k)));
    // from this page on every Z and B equals its limit
    let last = ((kmax - kmin) / 2 + 2) as usize;

    let blocks: Vec<(i32, i32)> = by_ij.keys().copied().collect();
    let per_block: Vec<Vec<Dims>> = blocks
        .par_iter()
        .map(|&(i, j)| {
            let cur = by_ij[&(i, j)].clone();
            let view = BlockView {
                c,
                prev: by_ij.get(&(i - 1, j)).cloned().unwrap_or_default(),
                cur_pos: cur.iter().enumerate().map(|(n, &g)| (g, n)).collect(),
                cur,
                next: by_ij.get(&(i + 1, j)).cloned().unwrap_or_default(),
            };
            let mut levels: Vec<i32> = view.cur.iter().map(|&g| view.k(g)).collect();
            levels.sort_unstable();
            levels.dedup();
            (1..=last)
                .map(|r| {
                    levels
                        .iter()
                        .map(|&p| ((p, i, j), view.page_dim(p, r)))
                        .filter(|&(_, d)| d > 0)
                        .collect()
                })
                .collect()
        })
        .collect();

    let mut pages: Vec<PageTable> = (0..last)
        .map(|n| PageTable {
            r: n + 1,
            dims: per_block.iter().flat_map(|b| b[n].clone()).collect(),
            is_final: false,
        })
        .collect();
    let infinity = pages.last().expect("at least one page").dims.clone();
    let stable = pages
        .iter()
        .position(|p| p.dims == infinity)
        .expect("sequence converges");
    pages.truncate(stable + 1);
    pages[stable].is_final = true;
    if let Some(max) = max_page {
        pages.truncate(max.max(1));
    }
    Ok(pages)
}
