//! SJ, the Jones polynomial, the z-form and the skein form.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;

use crate::complex::GradedComplexF2;
use crate::diagram::{count_crossings, TangleDiagram};
use crate::error::{Error, Result};
use crate::laurent::{Laurent, LaurentQT};
use crate::resolution::{closure_arrows, enumerate_enhanced, rotation_sum, state_piece_directions, ResolutionIndex};

/// `Σ (−1)^i q^j t^k` over the generators of a complex.
pub fn euler_sj(c: &GradedComplexF2) -> LaurentQT {
    let mut p = LaurentQT::zero();
    for g in &c.generators {
        p.add_term(g.j, g.k, if g.i.rem_euclid(2) == 0 { 1 } else { -1 });
    }
    p
}

/// `Σ (−1)^i q^j t^k dim` over a homology table keyed by `(i, j, k)`.
pub fn euler_sj_dims(dims: &BTreeMap<(i32, i32, i32), usize>) -> LaurentQT {
    let mut p = LaurentQT::zero();
    for (&(i, j, k), &d) in dims {
        let sign = if i.rem_euclid(2) == 0 { 1 } else { -1 };
        p.add_term(j, k, sign * d as i64);
    }
    p
}

/// Coefficient `(−1)^{|I|−n₋} q^{|I|+n₊−2n₋}` of one cube vertex.
pub fn resolution_coefficient(weight: usize, n_plus: usize, n_minus: usize) -> (i64, i32) {
    let (w, np, nm) = (weight as i32, n_plus as i32, n_minus as i32);
    let sign = if (w - nm).rem_euclid(2) == 0 { 1 } else { -1 };
    (sign, w + np - 2 * nm)
}

/// `Σ_S q^{j(S)} t^{k(S)}` for one resolution, with `j` from the
/// east-tangent rotation of the oriented pieces and `k` from the arrows
/// read along γ₀.
pub fn resolution_statesum(d: &TangleDiagram, index: ResolutionIndex) -> Result<LaurentQT> {
    if !d.is_closed() {
        return Err(Error::OpenTangle);
    }
    let flat = crate::resolution::resolve(d, index)?;
    let mut p = LaurentQT::zero();
    for s in enumerate_enhanced(&flat) {
        let dirs = state_piece_directions(&flat, &s);
        let j = rotation_sum(&flat.pieces, &dirs);
        let k: i32 = closure_arrows(&flat.pieces, &dirs).iter().map(|a| a.sign()).sum();
        p.add_term(j, k, 1);
    }
    Ok(p)
}

pub fn sj_statesum(d: &TangleDiagram) -> Result<LaurentQT> {
    if !d.is_closed() {
        return Err(Error::OpenTangle);
    }
    let counts = count_crossings(d);
    let n = d.crossing_total();
    let parts: Vec<LaurentQT> = ResolutionIndex::all(n)
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|idx| {
            let (sign, shift) = resolution_coefficient(idx.weight(), counts.n_plus, counts.n_minus);
            let inner = resolution_statesum(d, idx)?;
            Ok(&LaurentQT::monomial(sign, shift, 0) * &inner)
        })
        .collect::<Result<_>>()?;
    Ok(parts.into_iter().sum())
}

pub fn jones(d: &TangleDiagram) -> Result<Laurent> {
    Ok(sj_statesum(d)?.at_t_one())
}

/// A polynomial in `z = qt + (qt)⁻¹` with coefficients in `Z[q^±1]`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ZForm {
    pub coeffs: BTreeMap<u32, Laurent>,
}

impl ZForm {
    pub fn expand(&self) -> LaurentQT {
        let z = LaurentQT::z();
        self.coeffs
            .iter()
            .map(|(&n, c)| &LaurentQT::from_q(c, 0) * &z.pow(n))
            .sum()
    }
}

fn render_coefficient(c: &Laurent, var: &str, ascending: bool) -> String {
    let body = c.render_compact(var, ascending);
    if c.len() > 1 {
        format!("({body})")
    } else {
        body
    }
}

fn render_form(coeffs: &BTreeMap<u32, Laurent>, var: &str, ascending: bool) -> String {
    let mut parts = Vec::new();
    for (&n, c) in coeffs.iter().rev() {
        let zpart = match n {
            0 => String::new(),
            1 => "z".to_string(),
            _ => format!("z^{n}"),
        };
        let coeff = render_coefficient(c, var, ascending);
        parts.push(match (zpart.is_empty(), coeff.as_str()) {
            (true, _) => coeff,
            (false, "1") => zpart,
            (false, "-1") => format!("-{zpart}"),
            (false, _) => format!("{coeff}*{zpart}"),
        });
    }
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join(" + ")
    }
}

impl fmt::Display for ZForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_form(&self.coeffs, "q", false))
    }
}

/// Rewrites `p` in powers of `z` by repeatedly removing its top t-degree.
pub fn to_zform(p: &LaurentQT) -> Result<ZForm> {
    let mut rest = p.clone();
    let mut coeffs = BTreeMap::new();
    while let Some(d) = rest.max_t_degree() {
        if d < 0 {
            return Err(Error::NotInSubring(rest.to_string()));
        }
        // z^d has leading term (qt)^d
        let c = rest.t_coefficient(d).shift(-d);
        rest = &rest - &(&LaurentQT::from_q(&c, 0) * &LaurentQT::z().pow(d as u32));
        coeffs.insert(d as u32, c);
    }
    Ok(ZForm { coeffs })
}

/// Coefficients in `Z[a^±1]` after `q = −a⁻²`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SkeinForm {
    pub coeffs: BTreeMap<u32, Laurent>,
}

impl fmt::Display for SkeinForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_form(&self.coeffs, "a", true))
    }
}

pub fn substitute_skein(c: &Laurent) -> Laurent {
    Laurent::from_terms(
        c.terms()
            .map(|(e, k)| (-2 * e, if e.rem_euclid(2) == 0 { k } else { -k })),
    )
}

pub fn to_skein_form(z: &ZForm) -> SkeinForm {
    SkeinForm {
        coeffs: z.coeffs.iter().map(|(&n, c)| (n, substitute_skein(c))).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::build_complex;
    use crate::diagram::braid_closure;
    use crate::dsl::parse_diagram;

    fn essential_unknot() -> TangleDiagram {
        parse_diagram("m=1; closure=annular; slices=[]").unwrap()
    }

    fn trivial_circle() -> TangleDiagram {
        parse_diagram("m=0; closure=none; slices=[[cup@1],[cap@1]]").unwrap()
    }

    #[test]
    fn circles() {
        let z = LaurentQT::z();
        let q2 = LaurentQT::from_q(&Laurent::quantum_two(), 0);
        assert_eq!(sj_statesum(&essential_unknot()).unwrap(), z);
        assert_eq!(sj_statesum(&trivial_circle()).unwrap(), q2);
        let two = parse_diagram("m=2; closure=annular; slices=[]").unwrap();
        assert_eq!(sj_statesum(&two).unwrap(), z.pow(2));
        assert_eq!(euler_sj(&build_complex(&two, false).unwrap()), z.pow(2));
        assert_eq!(jones(&essential_unknot()).unwrap(), Laurent::quantum_two());
        assert_eq!(jones(&trivial_circle()).unwrap(), Laurent::quantum_two());
    }

    #[test]
    fn sigma1_closure() {
        let d = braid_closure(2, &[1]).unwrap();
        let sj = sj_statesum(&d).unwrap();
        assert_eq!(sj, euler_sj(&build_complex(&d, false).unwrap()));
        let zf = to_zform(&sj).unwrap();
        assert_eq!(zf.to_string(), "q*z^2 + (-q^3-q)");
        assert_eq!(zf.expand(), sj);
    }

    #[test]
    fn zform_examples() {
        assert_eq!(to_zform(&LaurentQT::z()).unwrap().to_string(), "z");
        let q2 = LaurentQT::from_q(&Laurent::quantum_two(), 0);
        assert_eq!(to_zform(&q2).unwrap().to_string(), "(q+q^-1)");
        let mut p = LaurentQT::monomial(1, 2, 2);
        p.add_term(0, 0, 2);
        p.add_term(-2, -2, 1);
        assert_eq!(to_zform(&p).unwrap().to_string(), "z^2");
        assert!(matches!(
            to_zform(&LaurentQT::monomial(1, 0, 1)),
            Err(Error::NotInSubring(_))
        ));
        assert!(matches!(
            to_zform(&LaurentQT::monomial(1, 0, -1)),
            Err(Error::NotInSubring(_))
        ));
        assert_eq!(to_zform(&LaurentQT::zero()).unwrap().to_string(), "0");
    }

    #[test]
    fn skein_examples() {
        let sk = |p: &LaurentQT| to_skein_form(&to_zform(p).unwrap()).to_string();
        assert_eq!(sk(&LaurentQT::z()), "z");
        assert_eq!(sk(&LaurentQT::from_q(&Laurent::quantum_two(), 0)), "(-a^-2-a^2)");
        assert_eq!(sk(&(&LaurentQT::monomial(1, 2, 0) * &LaurentQT::z())), "a^-4*z");
    }

    #[test]
    fn trefoil_jones() {
        let d = braid_closure(2, &[1, 1, 1]).unwrap();
        assert_eq!(
            jones(&d).unwrap(),
            Laurent::from_terms([(1, 1), (3, 1), (5, 1), (9, -1)])
        );
        let m = d.mirror();
        assert_eq!(jones(&m).unwrap(), jones(&d).unwrap().invert_variable());
    }

    #[test]
    fn open_tangle_rejected() {
        let d = parse_diagram("m=1; closure=none; slices=[[id@1]]").unwrap();
        assert_eq!(sj_statesum(&d), Err(Error::OpenTangle));
    }
}
