//! Decision procedures for invariant contact, symplectic and exact symplectic
//! structures.
//!
//! All nonvanishing questions are settled by full symbolic expansion of the
//! relevant polynomial (never by sampling); witnesses are then produced by a
//! deterministic grid search whose per-axis point count exceeds the degree,
//! so a nonzero polynomial cannot hide.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exterior::KForm;
use crate::liealg::LieAlgebra;
use crate::matrix::Mat;
use crate::poly::Poly;
use crate::report::Report;
use crate::scalar::{int, signum, Rat};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StructureKind {
    Contact,
    Symplectic,
    ExactSymplectic,
}

/// A verified structure: the form itself plus the nonzero top-form value
/// certifying nondegeneracy.
#[derive(Clone, Debug)]
pub struct StructureWitness {
    pub kind: StructureKind,
    /// The structure form: a contact 1-form or a symplectic 2-form.
    pub form: KForm,
    /// For exact symplectic structures, the potential covector.
    pub potential: Option<KForm>,
    pub certificate: Poly,
}

/// Outcome of a structure scan: the symbolically expanded obstruction
/// polynomial plus a witness when it is not identically zero.
#[derive(Clone, Debug)]
pub struct StructureScan {
    pub exists: bool,
    pub obstruction: Poly,
    pub witness: Option<StructureWitness>,
}

impl StructureScan {
    pub fn to_report(&self, name: &str) -> Report {
        let mut r = Report::new(name);
        match (&self.exists, &self.witness) {
            (false, _) => r.push(name, true, "none: obstruction polynomial is identically zero"),
            (true, Some(w)) => {
                let detail = match w.kind {
                    StructureKind::ExactSymplectic => format!(
                        "exists; potential {}",
                        w.potential.as_ref().expect("potential")
                    ),
                    _ => "exists".to_string(),
                };
                r.push_witness(name, true, detail, w.form.to_string());
            }
            (true, None) => r.push(name, false, "nonzero obstruction but witness search failed"),
        }
        r
    }
}

/// Deterministic witness search: integer points of `[-bound, bound]^k` in
/// lexicographic order, first point where `p` does not vanish.
pub(crate) fn grid_search_nonzero(p: &Poly, vars: &[String], bound: i64) -> Option<Vec<Rat>> {
    if p.is_zero() {
        return None;
    }
    let k = vars.len();
    if k == 0 {
        return Some(Vec::new());
    }
    let mut point = vec![-bound; k];
    loop {
        let vals: std::collections::BTreeMap<String, Rat> = vars
            .iter()
            .cloned()
            .zip(point.iter().map(|&x| int(x)))
            .collect();
        if let Some(v) = p.eval(&vals) {
            if !v.is_zero() {
                return Some(point.iter().map(|&x| int(x)).collect());
            }
        }
        // odometer increment, last axis fastest
        let mut pos = k;
        loop {
            if pos == 0 {
                return None;
            }
            pos -= 1;
            if point[pos] < bound {
                point[pos] += 1;
                for p2 in point.iter_mut().skip(pos + 1) {
                    *p2 = -bound;
                }
                break;
            }
        }
    }
}

/// Generic 1-form with fresh indeterminate coefficients `prefix1..prefixn`.
fn generic_one_form(dim: usize, prefix: &str) -> (KForm, Vec<String>) {
    let mut form = KForm::zero(dim, 1);
    let mut vars = Vec::with_capacity(dim);
    for i in 1..=dim as u8 {
        let name = format!("{prefix}{i}");
        form.add_signed_term(&[i], Poly::var(&name));
        vars.push(name);
    }
    (form, vars)
}

fn standard_volume(dim: usize) -> KForm {
    let idx: Vec<u8> = (1..=dim as u8).collect();
    KForm::basis(dim, &idx)
}

/// The genre of a 1-form: the highest degree of a nonzero form among
/// `a, da, a^da, (da)^2, a^(da)^2, ...`. The pair is nondegenerate exactly
/// when the genre reaches the ambient dimension.
pub fn genre(g: &LieAlgebra, alpha: &KForm) -> Result<usize> {
    g.require_constant()?;
    if alpha.is_zero() {
        return Err(Error::ZeroForm);
    }
    if alpha.dim() != g.dim() || alpha.degree() != 1 {
        return Err(Error::BadDegree("genre needs a 1-form".into()));
    }
    if !alpha.params().is_empty() {
        return Err(Error::UnsubstitutedParameters(
            alpha.params().into_iter().collect::<Vec<_>>().join(", "),
        ));
    }
    let n = g.dim();
    let da = g.ce_differential(alpha)?;
    let mut best = 0usize;
    let mut power = KForm::scalar(n, Poly::one());
    let mut k = 0usize;
    loop {
        if 2 * k <= n && k > 0 && !power.is_zero() {
            best = best.max(2 * k);
        }
        if 2 * k < n {
            let odd = alpha.wedge(&power)?;
            if !odd.is_zero() {
                best = best.max(2 * k + 1);
            }
        }
        k += 1;
        if 2 * k > n {
            break;
        }
        power = power.wedge(&da)?;
    }
    Ok(best)
}

/// Contact detection on an odd-dimensional algebra: expands
/// `a ^ (da)^m` for a generic covector and decides nonvanishing symbolically.
pub fn is_contact(g: &LieAlgebra) -> Result<StructureScan> {
    g.require_constant()?;
    let n = g.dim();
    if n.is_multiple_of(2) {
        return Err(Error::EvenDimension(n));
    }
    let m = n / 2;
    let (alpha, vars) = generic_one_form(n, "a");
    let da = g.ce_differential(&alpha)?;
    let top = alpha.wedge(&da.wedge_pow(m)?)?;
    let obstruction = top.top_coefficient();
    if obstruction.is_zero() {
        return Ok(StructureScan { exists: false, obstruction, witness: None });
    }
    let bound = obstruction.total_degree() as i64 + 1;
    let witness = grid_search_nonzero(&obstruction, &vars, bound).map(|point| {
        let mut form = KForm::zero(n, 1);
        for (i, v) in point.iter().enumerate() {
            form.add_signed_term(&[i as u8 + 1], Poly::constant(v.clone()));
        }
        let vals: std::collections::BTreeMap<String, Rat> =
            vars.iter().cloned().zip(point.iter().cloned()).collect();
        StructureWitness {
            kind: StructureKind::Contact,
            form,
            potential: None,
            certificate: Poly::constant(obstruction.eval(&vals).expect("rational point")),
        }
    });
    Ok(StructureScan { exists: true, obstruction, witness })
}

/// Sign of `(a ^ da^m) / orientation` for a contact form on an
/// odd-dimensional algebra.
pub fn contact_sign(g: &LieAlgebra, alpha: &KForm, orientation: &KForm) -> Result<i32> {
    g.require_constant()?;
    let n = g.dim();
    if n.is_multiple_of(2) {
        return Err(Error::EvenDimension(n));
    }
    if orientation.degree() != n || orientation.is_zero() {
        return Err(Error::ZeroForm);
    }
    let m = n / 2;
    let da = g.ce_differential(alpha)?;
    let top = alpha.wedge(&da.wedge_pow(m)?)?;
    if top.is_zero() {
        return Err(Error::NotContact);
    }
    let num = top
        .top_coefficient()
        .as_constant()
        .ok_or_else(|| Error::UnsubstitutedParameters("contact_sign needs rational forms".into()))?;
    let den = orientation
        .top_coefficient()
        .as_constant()
        .ok_or_else(|| Error::UnsubstitutedParameters("orientation must be rational".into()))?;
    Ok(signum(&(num / den)))
}

/// Exact rational basis of the closed 2-forms `Z^2 = Ker(d | Lambda^2)`.
pub fn closed_two_forms(g: &LieAlgebra) -> Result<Vec<KForm>> {
    g.require_constant()?;
    let tuples = g.basis_tuples(2);
    let kernel = g.d_matrix(2)?.kernel_basis();
    Ok(kernel
        .into_iter()
        .map(|v| {
            let mut f = KForm::zero(g.dim(), 2);
            for (pos, c) in v.into_iter().enumerate() {
                f.add_signed_term(&tuples[pos], Poly::constant(c));
            }
            f
        })
        .collect())
}

/// Symplectic detection on an even-dimensional algebra: the Pfaffian is
/// expanded as a polynomial on coordinates of `Z^2`.
pub fn has_symplectic(g: &LieAlgebra) -> Result<StructureScan> {
    g.require_constant()?;
    let n = g.dim();
    if !n.is_multiple_of(2) {
        return Err(Error::OddDimension(n));
    }
    let closed = closed_two_forms(g)?;
    let vars: Vec<String> = (1..=closed.len()).map(|i| format!("t{i}")).collect();
    let mut generic = KForm::zero(n, 2);
    for (w, v) in closed.iter().zip(&vars) {
        generic = generic.add(&w.scale(&Poly::var(v)))?;
    }
    let obstruction = generic.pfaffian(&standard_volume(n))?;
    if obstruction.is_zero() {
        return Ok(StructureScan { exists: false, obstruction, witness: None });
    }
    let bound = obstruction.total_degree() as i64 + 1;
    let witness = grid_search_nonzero(&obstruction, &vars, bound).map(|point| {
        let mut form = KForm::zero(n, 2);
        for (w, c) in closed.iter().zip(point.iter()) {
            form = form.add(&w.scale_rat(c)).expect("dims agree");
        }
        let cert = form.pfaffian(&standard_volume(n)).expect("even dim");
        StructureWitness { kind: StructureKind::Symplectic, form, potential: None, certificate: cert }
    });
    Ok(StructureScan { exists: true, obstruction, witness })
}

/// Exact symplectic detection: `Pf(d f)` expanded over the coordinates of a
/// generic covector `f`. When nonempty, the valid set is Zariski-open, so the
/// bounded grid search always lands on a witness.
pub fn has_exact_symplectic(g: &LieAlgebra) -> Result<StructureScan> {
    g.require_constant()?;
    let n = g.dim();
    if !n.is_multiple_of(2) {
        return Err(Error::OddDimension(n));
    }
    let (f, vars) = generic_one_form(n, "t");
    let df = g.ce_differential(&f)?;
    let obstruction = df.pfaffian(&standard_volume(n))?;
    if obstruction.is_zero() {
        return Ok(StructureScan { exists: false, obstruction, witness: None });
    }
    let bound = obstruction.total_degree() as i64 + 1;
    let witness = grid_search_nonzero(&obstruction, &vars, bound).map(|point| {
        let mut pot = KForm::zero(n, 1);
        for (i, v) in point.iter().enumerate() {
            pot.add_signed_term(&[i as u8 + 1], Poly::constant(v.clone()));
        }
        let form = g.ce_differential(&pot).expect("dims agree");
        let cert = form.pfaffian(&standard_volume(n)).expect("even dim");
        StructureWitness {
            kind: StructureKind::ExactSymplectic,
            form,
            potential: Some(pot),
            certificate: cert,
        }
    });
    Ok(StructureScan { exists: true, obstruction, witness })
}

/// Is the closed 2-form exact, i.e. in the image of `d : C^1 -> C^2`?
pub fn is_exact(g: &LieAlgebra, omega: &KForm) -> Result<bool> {
    g.require_constant()?;
    if omega.degree() != 2 || omega.dim() != g.dim() {
        return Err(Error::BadDegree("is_exact needs a 2-form".into()));
    }
    if !g.ce_differential(omega)?.is_zero() {
        return Err(Error::NotClosed);
    }
    let tuples = g.basis_tuples(2);
    let target: Vec<Rat> = tuples
        .iter()
        .map(|t| {
            omega
                .coeff(t)
                .as_constant()
                .ok_or_else(|| Error::UnsubstitutedParameters("omega must be rational".into()))
        })
        .collect::<Result<_>>()?;
    Ok(g.d_matrix(1)?.solve(&target).is_some())
}

/// Decompose a 2-form over a list of forms; used to check membership in a
/// computed basis of `Z^2`.
pub fn in_span(forms: &[KForm], omega: &KForm) -> bool {
    if forms.is_empty() {
        return omega.is_zero();
    }
    let dim = forms[0].dim();
    let g = LieAlgebra::abelian(dim);
    let tuples = g.basis_tuples(omega.degree());
    let cols: Vec<Vec<Rat>> = forms
        .iter()
        .map(|f| tuples.iter().map(|t| f.coeff(t).as_constant().unwrap()).collect())
        .collect();
    let rows: Vec<Vec<Rat>> = (0..tuples.len())
        .map(|r| cols.iter().map(|c| c[r].clone()).collect())
        .collect();
    let target: Vec<Rat> = tuples.iter().map(|t| omega.coeff(t).as_constant().unwrap()).collect();
    Mat::from_rows(rows).solve(&target).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn e(dim: usize, idx: &[u8]) -> KForm {
        KForm::basis(dim, idx)
    }

    /// The two excluded 3-dimensional cases.
    fn flat_solvable3() -> LieAlgebra {
        LieAlgebra::abelian(3)
            .with_simple_bracket(1, 3, 1, int(1))
            .with_simple_bracket(2, 3, 2, int(1))
    }

    fn sl2_plus_center() -> LieAlgebra {
        LieAlgebra::abelian(4)
            .with_simple_bracket(1, 2, 3, int(2))
            .with_simple_bracket(1, 3, 2, int(2))
            .with_simple_bracket(2, 3, 1, int(2))
    }

    /// Family 2(ii): d e1* = e1*^e3*, d e2* = e3*^e4*.
    fn t3_2ii() -> LieAlgebra {
        LieAlgebra::from_maurer_cartan(
            4,
            &[e(4, &[1, 3]), e(4, &[3, 4]), KForm::zero(4, 2), KForm::zero(4, 2)],
        )
        .unwrap()
    }

    /// Family 1(a) at a fixed lambda value.
    fn t3_1a(lam: Rat) -> LieAlgebra {
        LieAlgebra::from_maurer_cartan(
            4,
            &[
                e(4, &[1, 4]).scale_rat(&lam),
                e(4, &[2, 4]).scale_rat(&(int(1) - lam)),
                e(4, &[1, 2]).add(&e(4, &[3, 4])).unwrap(),
                KForm::zero(4, 2),
            ],
        )
        .unwrap()
    }

    #[test]
    fn genre_values() {
        let h = LieAlgebra::heisenberg3();
        let alpha = e(3, &[1]);
        // derived via the differential: d e1* = -e2*^e3*, so a ^ da != 0
        assert_eq!(h.ce_differential(&alpha).unwrap(), e(3, &[2, 3]).neg());
        assert_eq!(genre(&h, &alpha).unwrap(), 3);
        assert_eq!(genre(&LieAlgebra::abelian(3), &e(3, &[2])).unwrap(), 1);
        assert_eq!(genre(&t3_2ii(), &e(4, &[3])).unwrap(), 1);
        assert!(genre(&h, &KForm::zero(3, 1)).is_err());
        // parametric covectors are rejected: genre can jump on subvarieties
        let parametric = e(3, &[1]).scale(&Poly::var("s"));
        assert!(matches!(genre(&h, &parametric), Err(Error::UnsubstitutedParameters(_))));
    }

    #[test]
    fn genre_detects_nondegeneracy() {
        // exact symplectic potential on family 1(a), lambda = 2: genre 4
        let g = t3_1a(int(2));
        assert_eq!(genre(&g, &e(4, &[3])).unwrap(), 4);
    }

    #[test]
    fn contact_verdicts() {
        let scan = is_contact(&LieAlgebra::heisenberg3()).unwrap();
        assert!(scan.exists);
        let w = scan.witness.expect("witness");
        assert!(!w.certificate.is_zero());
        // the witness certificate is the actual top coefficient
        let h = LieAlgebra::heisenberg3();
        let da = h.ce_differential(&w.form).unwrap();
        assert_eq!(w.form.wedge(&da).unwrap().top_coefficient(), w.certificate);

        assert!(!is_contact(&flat_solvable3()).unwrap().exists);
        assert!(!is_contact(&LieAlgebra::abelian(3)).unwrap().exists);
        assert!(is_contact(&LieAlgebra::abelian(4)).is_err());
        assert!(is_contact(&LieAlgebra::sl2()).unwrap().exists);
    }

    #[test]
    fn contact_signs_on_sl2() {
        let g = LieAlgebra::sl2();
        let orientation = e(3, &[1, 2, 3]);
        // d e2* = -2 e1*^e3*: e2* ^ de2* = +2 e1*^e2*^e3*
        assert_eq!(contact_sign(&g, &e(3, &[2]), &orientation).unwrap(), 1);
        // d e3* = -2 e1*^e2*: e3* ^ de3* = -2 e1*^e2*^e3*
        assert_eq!(contact_sign(&g, &e(3, &[3]), &orientation).unwrap(), -1);
        // scaling preserves the sign, orientation reversal flips it
        assert_eq!(contact_sign(&g, &e(3, &[2]).scale_rat(&int(2)), &orientation).unwrap(), 1);
        assert_eq!(contact_sign(&g, &e(3, &[2]).scale_rat(&int(-5)), &orientation).unwrap(), 1);
        assert_eq!(contact_sign(&g, &e(3, &[2]), &orientation.neg()).unwrap(), -1);
        // an isotropic-direction covector is not contact and is rejected
        let isotropic = e(3, &[2]).add(&e(3, &[3])).unwrap();
        assert!(matches!(contact_sign(&g, &isotropic, &orientation), Err(Error::NotContact)));
    }

    #[test]
    fn closed_two_forms_bases() {
        assert_eq!(closed_two_forms(&LieAlgebra::abelian(4)).unwrap().len(), 6);
        // the filiform algebra keeps the canonical pairing closed
        let z2 = closed_two_forms(&LieAlgebra::nilpotent4()).unwrap();
        let omega = e(4, &[1, 3]).add(&e(4, &[2, 4])).unwrap();
        assert!(in_span(&z2, &omega));
    }

    #[test]
    fn symplectic_verdicts() {
        let scan = has_symplectic(&t3_2ii()).unwrap();
        assert!(scan.exists);
        // the stated form is itself a valid witness
        let omega = e(4, &[1, 3]).add(&e(4, &[2, 4])).unwrap();
        let g = t3_2ii();
        assert!(g.ce_differential(&omega).unwrap().is_zero());
        assert!(!omega.pfaffian(&e(4, &[1, 2, 3, 4])).unwrap().is_zero());

        assert!(!has_symplectic(&sl2_plus_center()).unwrap().exists);
        let ab = has_symplectic(&LieAlgebra::abelian(4)).unwrap();
        assert!(ab.exists);
        assert!(!ab.witness.unwrap().certificate.is_zero());
    }

    #[test]
    fn exact_symplectic_verdicts() {
        let scan = has_exact_symplectic(&t3_1a(int(2))).unwrap();
        assert!(scan.exists);
        let w = scan.witness.expect("witness");
        let pot = w.potential.expect("potential");
        // consistency: the differential of the found potential is the form
        let g = t3_1a(int(2));
        assert_eq!(g.ce_differential(&pot).unwrap(), w.form);
        assert!(is_exact(&g, &w.form).unwrap());

        assert!(!has_exact_symplectic(&LieAlgebra::abelian(4)).unwrap().exists);
        assert!(has_exact_symplectic(&LieAlgebra::heisenberg3()).is_err());
    }

    #[test]
    fn zariski_openness_spot_check() {
        // random rational covectors in general position on family 1(a)
        let g = t3_1a(rat(1, 2));
        let (f, vars) = super::generic_one_form(4, "t");
        let pf = g.ce_differential(&f).unwrap().pfaffian(&e(4, &[1, 2, 3, 4])).unwrap();
        let mut hits = 0;
        for s in 1..=5i64 {
            let vals: std::collections::BTreeMap<String, Rat> = vars
                .iter()
                .cloned()
                .zip([int(s), int(s + 1), int(2 * s + 1), int(3 * s + 2)])
                .collect();
            if !pf.eval(&vals).unwrap().is_zero() {
                hits += 1;
            }
        }
        assert!(hits >= 4, "general-position covectors should almost always work");
    }

    #[test]
    fn exactness_checks() {
        let g = t3_2ii();
        let omega = e(4, &[1, 3]).add(&e(4, &[2, 4])).unwrap();
        assert!(!is_exact(&g, &omega).unwrap());
        let d_e1 = g.ce_differential(&e(4, &[1])).unwrap();
        assert!(is_exact(&g, &d_e1).unwrap());
        // non-closed input is rejected: d(e1*^e4*) = e1*^e3*^e4* here
        let not_closed = e(4, &[1, 4]);
        assert!(!g.ce_differential(&not_closed).unwrap().is_zero());
        assert!(matches!(is_exact(&g, &not_closed), Err(Error::NotClosed)));
    }

    #[test]
    fn grid_search_is_deterministic_and_bounded() {
        let p = Poly::var("x");
        let hit = grid_search_nonzero(&p, &["x".into()], 2).unwrap();
        assert_eq!(hit, vec![int(-2)]);
        assert!(grid_search_nonzero(&Poly::zero(), &["x".into()], 3).is_none());
        // (x - 1)(x - 2) cannot vanish everywhere on 7 points
        let q = &(&Poly::var("x") - &Poly::from_int(1)) * &(&Poly::var("x") - &Poly::from_int(2));
        assert!(grid_search_nonzero(&q, &["x".into()], 3).is_some());
    }
}
