//! The full verification suite for one closed diagram.

use serde::Serialize;

use crate::complex::{annular_part, build_complex, homology_dims, total_dim, GradedComplexF2, Grading};
use crate::diagram::{count_crossings, Closure, TangleDiagram};
use crate::error::Result;
use crate::floer::check_theorem;
use crate::invariants::{euler_sj, euler_sj_dims, jones, sj_statesum, to_zform};
use crate::laurent::Laurent;
use crate::realization::compare_with_oracle;
use crate::resolution::ResolutionIndex;
use crate::rt::{
    check_closure_relation, check_weight_preservation, quantum_trace, rt_matrix_with_counts, rt_raw_resolution,
    trace_sj, RawMatrix,
};
use crate::spectral::spectral_pages;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub checks: Vec<CheckResult>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    fn push(&mut self, name: &str, passed: bool, detail: impl Into<String>) {
        self.checks.push(CheckResult {
            name: name.to_string(),
            passed,
            detail: detail.into(),
        });
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let status = if c.passed { "PASS" } else { "FAIL" };
            out.push_str(&format!("{status} {}: {}\n", c.name, c.detail));
        }
        let failed = self.checks.iter().filter(|c| !c.passed).count();
        out.push_str(&format!("{} checks, {failed} failed\n", self.checks.len()));
        out
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CheckOptions {
    /// Plants one off-block entry in a resolution matrix before the weight
    /// check, which must then fail.
    pub inject_fault: bool,
}

fn structure(report: &mut CheckReport, name: &str, c: &GradedComplexF2) {
    let ok = c.check_d_squared().and_then(|_| c.check_gradings());
    match ok {
        Ok(()) => report.push(
            name,
            true,
            format!("{} generators, {} entries", c.len(), c.differential.nnz()),
        ),
        Err(e) => report.push(name, false, e.to_string()),
    }
}

fn poly_check<T: PartialEq + std::fmt::Display>(report: &mut CheckReport, name: &str, lhs: &T, rhs: &T) {
    if lhs == rhs {
        report.push(name, true, lhs.to_string());
    } else {
        report.push(name, false, format!("{lhs} != {rhs}"));
    }
}

pub fn run_checks(d: &TangleDiagram, options: CheckOptions) -> Result<CheckReport> {
    let mut report = CheckReport::default();

    let theorem = check_theorem(d)?;
    match theorem.first_violation() {
        None => report.push("k = -2 A_S", true, format!("{} states", theorem.states_checked)),
        Some(r) => report.push(
            "k = -2 A_S",
            false,
            format!(
                "{} of {} states fail, first: resolution {} signs {} k {} 2A_S {}",
                theorem.violations, theorem.states_checked, r.resolution, r.signs, r.k, r.twice_as
            ),
        ),
    }

    let skel = d.skeleton();
    let mismatch = ResolutionIndex::all(d.crossing_total()).find_map(|idx| {
        let f = skel.resolve(idx);
        compare_with_oracle(&skel, &f).into_iter().next().map(|m| (idx, m))
    });
    match mismatch {
        None => report.push("rotation rule vs realization", true, "all circles agree"),
        Some((idx, m)) => report.push(
            "rotation rule vs realization",
            false,
            format!("resolution {idx}: {m:?}"),
        ),
    }

    let full = build_complex(d, false)?;
    let annular = annular_part(&full)?;
    structure(&mut report, "full complex d^2 = 0 and gradings", &full);
    structure(&mut report, "annular complex d^2 = 0 and gradings", &annular);
    let expected = GradedComplexF2::expected_size(d, false);
    report.push(
        "generator count",
        full.len() == expected,
        format!("{} generators, expected {expected}", full.len()),
    );

    let kh = homology_dims(&full, Grading::Bigraded)?;
    let akh = homology_dims(&annular, Grading::Trigraded)?;
    let sj = sj_statesum(d)?;
    let sj_complex = euler_sj(&full);
    let sj_homology = euler_sj_dims(&akh);
    poly_check(&mut report, "SJ: complex = state sum", &sj_complex, &sj);
    poly_check(&mut report, "SJ: annular homology = state sum", &sj_homology, &sj);

    let jones_poly = jones(d)?;
    let chi_kh = euler_sj_dims(&kh).at_t_one();
    poly_check(&mut report, "Jones: SJ(t=1) = chi(Kh)", &sj.at_t_one(), &chi_kh);
    poly_check(
        &mut report,
        "Jones of mirror",
        &jones(&d.mirror())?,
        &jones_poly.invert_variable(),
    );
    poly_check(
        &mut report,
        "SJ of mirror",
        &sj_statesum(&d.mirror())?,
        &sj.invert_variables(),
    );

    match to_zform(&sj) {
        Ok(z) if z.expand() == sj => report.push("SJ in Z[q^+-1][z]", true, z.to_string()),
        Ok(z) => report.push("SJ in Z[q^+-1][z]", false, format!("{z} does not expand back")),
        Err(e) => report.push("SJ in Z[q^+-1][z]", false, e.to_string()),
    }

    let pages = spectral_pages(&full, None)?;
    let e1: std::collections::BTreeMap<(i32, i32, i32), usize> =
        akh.iter().map(|(&(i, j, k), &n)| ((k, i, j), n)).collect();
    report.push(
        "E1 = annular homology",
        pages[0].dims == e1,
        format!("E1 total {}", pages[0].total()),
    );
    let einf = pages.last().expect("one page").total();
    report.push(
        "E_inf total = Kh total",
        einf == total_dim(&kh),
        format!("E_inf total {einf}, Kh total {}", total_dim(&kh)),
    );

    if d.closure() == Closure::Annular {
        tangle_checks(&mut report, d, &jones_poly, &sj, options)?;
    }
    Ok(report)
}

fn tangle_checks(
    report: &mut CheckReport,
    d: &TangleDiagram,
    jones_poly: &Laurent,
    sj: &crate::laurent::LaurentQT,
    options: CheckOptions,
) -> Result<()> {
    let t = d.open_tangle();
    let n = t.crossing_total();
    let mut bad: Option<(ResolutionIndex, String)> = None;
    for idx in ResolutionIndex::all(n) {
        let mut raw = rt_raw_resolution(&t, idx)?;
        if options.inject_fault && idx.mask() == 0 {
            plant_fault(&mut raw);
        }
        if !check_weight_preservation(&raw) {
            bad = Some((idx, "off-block entry".into()));
            break;
        }
        if raw.k_conjugate() != raw {
            bad = Some((idx, "not K-equivariant".into()));
            break;
        }
    }
    match bad {
        None => report.push("weight preservation", true, format!("{} resolutions", 1usize << n)),
        Some((idx, why)) => report.push("weight preservation", false, format!("resolution {idx}: {why}")),
    }

    let m = rt_matrix_with_counts(&t, count_crossings(d))?;
    report.push(
        "weight preservation (assembled)",
        check_weight_preservation(&m.to_raw()),
        "J(T)",
    );
    poly_check(report, "quantum trace = Jones", &quantum_trace(&m), jones_poly);
    poly_check(report, "SJ via trace = SJ", &trace_sj(&m), sj);

    let closure = check_closure_relation(&t)?;
    let detail = match (closure.mismatches.first(), closure.count_mismatches.first()) {
        (Some(x), _) => format!(
            "resolution {} arrows {}: j(S') = {}, j(S) + k = {}",
            x.index,
            x.arrows,
            x.j_closed,
            x.j_tangle + x.k
        ),
        (None, Some(idx)) => format!("resolution {idx}: state counts differ"),
        (None, None) => format!("{} states", closure.states_checked),
    };
    report.push("closure j(S') = j(S) + k", closure.passed(), detail);
    Ok(())
}

/// Adds `1` between the first two sequences of different weight.
fn plant_fault(raw: &mut RawMatrix) {
    if raw.m > 0 {
        // all-up and its successor differ in weight by 2
        raw.add(0, 1, &Laurent::one());
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::braid_closure;
    use crate::dsl::parse_diagram;

    #[test]
    fn unknot_passes() {
        let d = parse_diagram("m=1; closure=annular; slices=[]").unwrap();
        let r = run_checks(&d, CheckOptions::default()).unwrap();
        assert!(r.passed(), "{}", r.to_text());
    }

    #[test]
    fn trefoil_passes_and_fault_is_caught() {
        let d = braid_closure(2, &[1, 1, 1]).unwrap();
        assert!(run_checks(&d, CheckOptions::default()).unwrap().passed());
        let r = run_checks(&d, CheckOptions { inject_fault: true }).unwrap();
        assert!(!r.passed());
        let failed: Vec<&str> = r.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
        assert_eq!(failed, ["weight preservation"]);
    }

    #[test]
    fn flat_closed_diagram_skips_tangle_checks() {
        let d = parse_diagram("m=0; closure=none; slices=[[cup@1],[cap@1]]").unwrap();
        let r = run_checks(&d, CheckOptions::default()).unwrap();
        assert!(r.passed());
        assert!(r.checks.iter().all(|c| c.name != "quantum trace = Jones"));
    }
}
