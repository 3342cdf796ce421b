//! Jet substitution: from an effective 2-form on the canonical `(p, q)`
//! chart to a second-order scalar equation.
//!
//! Substituting `p_i = du/dq_i` (so `dp_i = u_i1 dq_1 + u_i2 dq_2` with a
//! symmetric second jet) into `theta = 0` and collecting the `dq1^dq2`
//! coefficient produces a polynomial in the jet variables
//! `q1, q2, u1, u2, u11, u12, u22`.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::monge::polyform::PolyForm;
use crate::poly::{Monomial, Poly};

/// Display and normalization precedence for jet polynomials.
pub const JET_ORDER: [&str; 7] = ["u11", "u12", "u22", "u1", "u2", "q1", "q2"];

/// Chart variables expected by the jet substitution, in order.
pub const CHART_VARS: [&str; 4] = ["p1", "p2", "q1", "q2"];

/// A normalized second-order equation `poly = 0`: integer content divided
/// out and the leading jet monomial positive.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JetPolynomial {
    poly: Poly,
}

impl JetPolynomial {
    pub fn new(raw: Poly) -> Self {
        JetPolynomial { poly: raw.normalize_content(&JET_ORDER) }
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    /// Monge-Ampere shape: `A (u11 u22 - u12^2) + B u11 + C u12 + D u22 + E`
    /// with `A..E` free of second-jet variables.
    pub fn is_monge_ampere_shape(&self) -> bool {
        let mut hess_a = Poly::zero(); // coefficient of u11 u22
        let mut hess_b = Poly::zero(); // coefficient of u12^2
        for (m, c) in self.poly.terms() {
            let (d11, d12, d22) =
                (m.degree_in("u11"), m.degree_in("u12"), m.degree_in("u22"));
            let second_total = d11 + d12 + d22;
            if d11 > 1 || d22 > 1 || d12 > 2 || second_total > 2 {
                return false;
            }
            let rest = strip_second_jet(m);
            match (d11, d12, d22) {
                (1, 0, 1) => hess_a = &hess_a + &Poly::monomial(rest, c.clone()),
                (0, 2, 0) => hess_b = &hess_b + &Poly::monomial(rest, c.clone()),
                (1, 1, 0) | (0, 1, 1) => return false,
                _ => {}
            }
        }
        (&hess_a + &hess_b).is_zero()
    }

    pub fn display(&self) -> String {
        format!("{} = 0", self.poly.display_under(&JET_ORDER))
    }
}

fn strip_second_jet(m: &Monomial) -> Monomial {
    let mut out = Monomial::one();
    for (v, e) in m.iter() {
        if v != "u11" && v != "u12" && v != "u22" {
            out = out.mul(&Monomial::var(v, *e));
        }
    }
    out
}

/// Is this 2-form exactly the canonical symplectic form
/// `dp1^dq1 + dp2^dq2` on the `(p1, p2, q1, q2)` chart?
pub fn is_canonical_symplectic(omega: &PolyForm) -> bool {
    let vars: Vec<String> = CHART_VARS.iter().map(|s| s.to_string()).collect();
    if omega.vars() != vars {
        return false;
    }
    let mut expected = PolyForm::term(&vars, &[1, 3], Poly::one());
    expected = expected.add(&PolyForm::term(&vars, &[2, 4], Poly::one())).unwrap();
    *omega == expected
}

/// Pull an effective form back along the jet graph
/// `q -> (p = (u1, u2), q)` and collect the resulting equation.
pub fn emit_pde(theta: &PolyForm) -> Result<JetPolynomial> {
    let vars: Vec<String> = CHART_VARS.iter().map(|s| s.to_string()).collect();
    if theta.vars() != vars {
        return Err(Error::Unsupported(format!(
            "jet substitution needs the chart ({}), got ({})",
            CHART_VARS.join(", "),
            theta.vars().join(", ")
        )));
    }
    if theta.degree() != 2 {
        return Err(Error::BadDegree("jet substitution needs a 2-form".into()));
    }
    for (_, c) in theta.terms() {
        for v in c.vars() {
            if !CHART_VARS.contains(&v.as_str()) {
                return Err(Error::Unsupported(format!(
                    "coefficient depends on '{v}' outside the chart"
                )));
            }
        }
    }
    let jet_vars: Vec<String> = vec!["q1".into(), "q2".into()];
    // dp_i -> u_i1 dq1 + u_i2 dq2 (u21 = u12), dq_i -> dq_i
    let image = |i: u8| -> PolyForm {
        let mut f = PolyForm::zero(&jet_vars, 1);
        match i {
            1 => {
                f.add_signed_term(&[1], Poly::var("u11"));
                f.add_signed_term(&[2], Poly::var("u12"));
            }
            2 => {
                f.add_signed_term(&[1], Poly::var("u12"));
                f.add_signed_term(&[2], Poly::var("u22"));
            }
            3 => f.add_signed_term(&[1], Poly::one()),
            4 => f.add_signed_term(&[2], Poly::one()),
            _ => unreachable!(),
        }
        f
    };
    let mut subs: BTreeMap<String, Poly> = BTreeMap::new();
    subs.insert("p1".to_string(), Poly::var("u1"));
    subs.insert("p2".to_string(), Poly::var("u2"));
    let mut total = PolyForm::zero(&jet_vars, 2);
    for (idx, c) in theta.terms() {
        let mut acc = PolyForm::scalar(&jet_vars, c.subst(&subs));
        for &i in idx {
            acc = acc.wedge(&image(i))?;
        }
        total = total.add(&acc)?;
    }
    Ok(JetPolynomial::new(total.coeff(&[1, 2])))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;

    fn chart_vars() -> Vec<String> {
        CHART_VARS.iter().map(|s| s.to_string()).collect()
    }

    /// Independent term-by-term jet substitution used as the oracle.
    fn jet_oracle(theta: &PolyForm) -> Poly {
        // expansion of dz_a ^ dz_b -> coefficient of dq1^dq2 by hand:
        // dp1^dp2 -> u11 u22 - u12^2, dp1^dq1 -> -u12, dp1^dq2 -> u11,
        // dp2^dq1 -> -u22, dp2^dq2 -> u12, dq1^dq2 -> 1
        let table: &[(&[u8], &str)] = &[
            (&[1, 2], "u11 u22 - u12^2"),
            (&[1, 3], "-u12"),
            (&[1, 4], "u11"),
            (&[2, 3], "-u22"),
            (&[2, 4], "u12"),
            (&[3, 4], "1"),
        ];
        let mut subs = BTreeMap::new();
        subs.insert("p1".to_string(), Poly::var("u1"));
        subs.insert("p2".to_string(), Poly::var("u2"));
        let mut acc = Poly::zero();
        for (idx, expr) in table {
            let c = theta.coeff(idx);
            if c.is_zero() {
                continue;
            }
            acc = &acc + &(&c.subst(&subs) * &parse_poly(expr).unwrap());
        }
        acc
    }

    #[test]
    fn laplace_and_forced_laplace() {
        let v = chart_vars();
        // dp1^dq2 - dp2^dq1 -> u11 + u22
        let mut theta = PolyForm::term(&v, &[1, 4], Poly::one());
        theta = theta.sub(&PolyForm::term(&v, &[2, 3], Poly::one())).unwrap();
        let pde = emit_pde(&theta).unwrap();
        assert_eq!(pde.display(), "u11 + u22 = 0");
        assert_eq!(pde.poly(), &jet_oracle(&theta).normalize_content(&JET_ORDER));

        // adding dq1^dq2 shifts by the constant
        let forced = theta.add(&PolyForm::term(&v, &[3, 4], Poly::one())).unwrap();
        let pde = emit_pde(&forced).unwrap();
        assert_eq!(pde.display(), "u11 + u22 + 1 = 0");
        assert_eq!(pde.poly(), &jet_oracle(&forced).normalize_content(&JET_ORDER));
        assert!(pde.is_monge_ampere_shape());
    }

    #[test]
    fn hessian_determinant_branch() {
        let v = chart_vars();
        let theta = PolyForm::term(&v, &[1, 2], Poly::one());
        let pde = emit_pde(&theta).unwrap();
        assert_eq!(pde.display(), "u11 u22 - u12^2 = 0");
        assert!(pde.is_monge_ampere_shape());
        assert_eq!(pde.poly(), &jet_oracle(&theta).normalize_content(&JET_ORDER));
    }

    #[test]
    fn normalization_makes_content_one_and_lead_positive() {
        let v = chart_vars();
        let theta = PolyForm::term(&v, &[1, 4], Poly::constant(crate::scalar::rat(-2, 3)));
        // -2/3 u11 normalizes to u11
        assert_eq!(emit_pde(&theta).unwrap().display(), "u11 = 0");
    }

    #[test]
    fn rejects_out_of_chart_coefficients() {
        let v = chart_vars();
        let theta = PolyForm::term(&v, &[1, 4], Poly::var("x3"));
        assert!(emit_pde(&theta).is_err());
    }
}
