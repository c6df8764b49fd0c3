//! The Alexander grading `A_S` of enhanced states and the dictionary
//! `k = −2·A_S`.
//!
//! A closed annular diagram meets the meridional arc γ₀ once per closure
//! strand. A generator occupies the intersection points whose arrow points
//! down, so `A_S = −m/2 + #occupied`. Gradings are stored doubled to stay in
//! the integers.

use std::fmt;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use crate::diagram::TangleDiagram;
use crate::error::{Error, Result};
use crate::resolution::{
    closure_arrows, enumerate_enhanced, k_degree, state_piece_directions, Arrow, EnhancedState, FlatDiagram,
    ResolutionIndex,
};

/// Euler characteristic of the double branched cover of a disk over `m`
/// points.
pub fn surface_euler(m: usize) -> i32 {
    2 - m as i32
}

/// `2·A_S`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct ASGrading(pub i32);

impl ASGrading {
    pub fn twice(self) -> i32 {
        self.0
    }
}

impl fmt::Display for ASGrading {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 % 2 == 0 {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorModel {
    pub state: EnhancedState,
    /// Down arrows along γ₀.
    pub occupied: usize,
    /// Up arrows along γ₀.
    pub unoccupied: usize,
}

impl GeneratorModel {
    pub fn from_state(flat: &FlatDiagram, state: &EnhancedState) -> Self {
        let dirs = state_piece_directions(flat, state);
        let arrows = closure_arrows(&flat.pieces, &dirs);
        let occupied = arrows.iter().filter(|&&a| a == Arrow::Down).count();
        Self {
            state: state.clone(),
            occupied,
            unoccupied: arrows.len() - occupied,
        }
    }
}

pub fn as_grading(g: &GeneratorModel, m: usize) -> Result<ASGrading> {
    if g.occupied > m {
        return Err(Error::Occupied {
            occupied: g.occupied,
            m,
        });
    }
    let occ = g.occupied as i32;
    let direct = -(m as i32) + 2 * occ;
    let via_euler = surface_euler(m) - 2 + 2 * occ;
    assert_eq!(direct, via_euler);
    Ok(ASGrading(direct))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TheoremRow {
    pub resolution: String,
    pub signs: String,
    pub k: i32,
    pub twice_as: i32,
    pub occupied: usize,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TheoremReport {
    pub m: usize,
    pub states_checked: usize,
    pub violations: usize,
    pub rows: Vec<TheoremRow>,
}

impl TheoremReport {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }

    pub fn first_violation(&self) -> Option<&TheoremRow> {
        self.rows.iter().find(|r| !r.ok)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "resolution\tsigns\tk\t2A_S\tstatus").unwrap();
        for r in &self.rows {
            let status = if r.ok { "OK" } else { "FAIL" };
            writeln!(out, "{}\t{}\t{}\t{}\t{status}", r.resolution, r.signs, r.k, r.twice_as).unwrap();
        }
        writeln!(
            out,
            "states checked: {}, violations: {}",
            self.states_checked, self.violations
        )
        .unwrap();
        out
    }
}

/// Compares `k` (from circle windings) with `−2·A_S` (from the arrows
/// along γ₀) on every enhanced state.
pub fn check_theorem(d: &TangleDiagram) -> Result<TheoremReport> {
    if !d.is_closed() {
        return Err(Error::OpenTangle);
    }
    let m = d.m();
    let skel = d.skeleton();
    let rows: Vec<Vec<TheoremRow>> = ResolutionIndex::all(d.crossing_total())
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|idx| {
            let flat = skel.resolve(idx);
            enumerate_enhanced(&flat)
                .into_iter()
                .map(|s| {
                    let g = GeneratorModel::from_state(&flat, &s);
                    let a = as_grading(&g, m)?;
                    let k = k_degree(&flat, &s);
                    Ok(TheoremRow {
                        resolution: idx.to_string(),
                        signs: s.signs(),
                        k,
                        twice_as: a.twice(),
                        occupied: g.occupied,
                        ok: k == -a.twice() && g.occupied + g.unoccupied == m,
                    })
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    let rows: Vec<TheoremRow> = rows.into_iter().flatten().collect();
    Ok(TheoremReport {
        m,
        states_checked: rows.len(),
        violations: rows.iter().filter(|r| !r.ok).count(),
        rows,
    })
}
