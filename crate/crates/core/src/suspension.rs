//! Suspensions: building an (n+1)-dimensional algebra from an n-dimensional
//! ideal and a derivation, with the contactization and the two
//! symplectization constructions layered on top.
//!
//! For `g = h + Rv` with `h` an ideal, the bracket `[v, x] = Ax` is a
//! derivation of `h`; conversely every derivation defines such an extension.
//! The nondegeneracy conditions of the three constructions all reduce to a
//! single covector evaluation which is linear in `A`.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exterior::KForm;
use crate::liealg::LieAlgebra;
use crate::matrix::{Mat, Subspace};
use crate::poly::Poly;
use crate::report::Report;
use crate::scalar::{int, Rat};

/// A linear endomorphism of a Lie algebra satisfying the Leibniz rule,
/// checked at construction on every basis pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    matrix: Mat,
}

impl Derivation {
    pub fn new(h: &LieAlgebra, matrix: Mat) -> Result<Self> {
        h.require_constant()?;
        let n = h.dim();
        if matrix.rows != n || matrix.cols != n {
            return Err(Error::DimensionMismatch(matrix.rows, n));
        }
        for i in 1..=n as u8 {
            for j in i + 1..=n as u8 {
                let bracket: Vec<Rat> = h
                    .bracket_basis(i, j)
                    .iter()
                    .map(|p| p.as_constant().expect("constant checked"))
                    .collect();
                let lhs = matrix.apply(&bracket);
                let aei = matrix_column(&matrix, i as usize - 1);
                let aej = matrix_column(&matrix, j as usize - 1);
                let mut ej = vec![int(0); n];
                ej[j as usize - 1] = int(1);
                let mut ei = vec![int(0); n];
                ei[i as usize - 1] = int(1);
                let r1 = h.bracket_rat(&aei, &ej).expect("dims agree");
                let r2 = h.bracket_rat(&ei, &aej).expect("dims agree");
                for k in 0..n {
                    let rhs = r1[k].as_constant().unwrap() + r2[k].as_constant().unwrap();
                    if lhs[k] != rhs {
                        return Err(Error::NotADerivation { i: i as usize, j: j as usize });
                    }
                }
            }
        }
        Ok(Derivation { matrix })
    }

    pub fn zero(n: usize) -> Self {
        Derivation { matrix: Mat::zeros(n, n) }
    }

    /// The inner derivation `ad_{e_i}`.
    pub fn ad(h: &LieAlgebra, i: u8) -> Result<Self> {
        Ok(Derivation { matrix: h.ad_matrix(i)? })
    }

    pub fn matrix(&self) -> &Mat {
        &self.matrix
    }

    pub fn apply(&self, v: &[Rat]) -> Vec<Rat> {
        self.matrix.apply(v)
    }

    /// `A + B`, a derivation again (no re-check needed: the space is linear).
    pub fn plus(&self, other: &Derivation) -> Derivation {
        let n = self.matrix.rows;
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = self.matrix[(i, j)].clone() + other.matrix[(i, j)].clone();
            }
        }
        Derivation { matrix: m }
    }
}

fn matrix_column(m: &Mat, j: usize) -> Vec<Rat> {
    (0..m.rows).map(|i| m[(i, j)].clone()).collect()
}

fn flatten(m: &Mat) -> Vec<Rat> {
    let mut v = Vec::with_capacity(m.rows * m.cols);
    for i in 0..m.rows {
        v.extend(m.row(i).iter().cloned());
    }
    v
}

fn unflatten(n: usize, v: &[Rat]) -> Mat {
    let mut m = Mat::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            m[(i, j)] = v[i * n + j].clone();
        }
    }
    m
}

/// The full derivation space, the inner derivations and coset
/// representatives for `H^1(h, h)`.
#[derive(Clone, Debug)]
pub struct DerivationSpace {
    pub basis: Vec<Derivation>,
    /// Echelonized basis of `{ad_w : w in h}`.
    pub inner_basis: Vec<Derivation>,
    pub h1_dim: usize,
    /// Derivations extending an echelon basis of the inner span to the full
    /// derivation space; one per outer class generator.
    pub h1_representatives: Vec<Derivation>,
}

impl DerivationSpace {
    pub fn inner_dim(&self) -> usize {
        self.inner_basis.len()
    }
}

/// Solve the Leibniz system `A[x,y] = [Ax,y] + [x,Ay]` exactly.
pub fn derivation_space(h: &LieAlgebra) -> Result<DerivationSpace> {
    h.require_constant()?;
    let n = h.dim();
    let vars = n * n;
    let mut rows = Vec::new();
    for i in 1..=n as u8 {
        for j in i + 1..=n as u8 {
            for k in 0..n {
                let mut row = vec![int(0); vars];
                // A[k][m] * c^m_ij
                for m in 0..n {
                    let c = h.structure_constant(i, j, m as u8 + 1).as_constant().unwrap();
                    row[k * n + m] = row[k * n + m].clone() + c;
                }
                // -c^k_pj * A[p][i]
                for p in 0..n {
                    let c = h.structure_constant(p as u8 + 1, j, k as u8 + 1).as_constant().unwrap();
                    row[p * n + (i as usize - 1)] = row[p * n + (i as usize - 1)].clone() - c;
                }
                // -c^k_iq * A[q][j]
                for q in 0..n {
                    let c = h.structure_constant(i, q as u8 + 1, k as u8 + 1).as_constant().unwrap();
                    row[q * n + (j as usize - 1)] = row[q * n + (j as usize - 1)].clone() - c;
                }
                rows.push(row);
            }
        }
    }
    let basis_vecs = if rows.is_empty() {
        // abelian: every matrix is a derivation
        (0..vars)
            .map(|v| {
                let mut e = vec![int(0); vars];
                e[v] = int(1);
                e
            })
            .collect()
    } else {
        Mat::from_rows(rows).kernel_basis()
    };
    let basis: Vec<Derivation> = basis_vecs
        .iter()
        .map(|v| Derivation { matrix: unflatten(n, v) })
        .collect();
    debug_assert!(basis.iter().all(|d| Derivation::new(h, d.matrix.clone()).is_ok()));

    let inner_vecs: Vec<Vec<Rat>> = (1..=n as u8)
        .map(|i| flatten(&h.ad_matrix(i).expect("constant checked")))
        .collect();
    let inner = Subspace::from_span(vars, &inner_vecs);
    let inner_dim = inner.dim();
    let inner_basis: Vec<Derivation> =
        inner.basis().iter().map(|v| Derivation { matrix: unflatten(n, v) }).collect();
    let h1_dim = basis.len() - inner_dim;

    let mut span = inner_vecs;
    let mut current = inner_dim;
    let mut reps = Vec::new();
    for d in &basis {
        let mut candidate = span.clone();
        candidate.push(flatten(&d.matrix));
        let rank = Mat::from_rows(candidate.clone()).rank();
        if rank > current {
            span = candidate;
            current = rank;
            reps.push(d.clone());
        }
    }
    debug_assert_eq!(reps.len(), h1_dim);
    Ok(DerivationSpace { basis, inner_basis, h1_dim, h1_representatives: reps })
}

/// Basis of the index-lowering derivations: those with `A e_j` in
/// `span{e_i : i < j}`. Suspending an algebra whose constants satisfy
/// `c^k_ij != 0 => k < min(i, j)` by such a derivation keeps that shape,
/// so iterated suspensions built this way stay nilpotent.
pub fn lowering_derivations(h: &LieAlgebra) -> Result<Vec<Derivation>> {
    let space = derivation_space(h)?;
    let n = h.dim();
    if space.basis.is_empty() {
        return Ok(Vec::new());
    }
    // intersect the derivation space with A[p][q] = 0 for p >= q
    let mut rows: Vec<Vec<Rat>> = Vec::new();
    for p in 0..n {
        for q in 0..=p {
            rows.push(space.basis.iter().map(|d| d.matrix()[(p, q)].clone()).collect());
        }
    }
    let kernel = Mat::from_rows(rows).kernel_basis();
    Ok(kernel
        .into_iter()
        .map(|coords| {
            let mut m = Mat::zeros(n, n);
            for (s, c) in coords.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                for i in 0..n {
                    for j in 0..n {
                        let add = c.clone() * space.basis[s].matrix()[(i, j)].clone();
                        m[(i, j)] = m[(i, j)].clone() + add;
                    }
                }
            }
            debug_assert!((0..n).all(|p| (0..=p).all(|q| m[(p, q)].is_zero())));
            Derivation { matrix: m }
        })
        .collect())
}

/// The suspension algebra `h + Rv`, `[v, e_j] = A e_j`, with `v` as the new
/// last basis vector.
pub fn suspend(h: &LieAlgebra, a: &Derivation) -> LieAlgebra {
    let n = h.dim();
    let v = n as u8 + 1;
    let mut g = LieAlgebra::abelian(n + 1);
    for i in 1..=n as u8 {
        for j in i + 1..=n as u8 {
            let mut coeffs: Vec<Poly> = h.bracket_basis(i, j);
            coeffs.push(Poly::zero());
            g = g.with_bracket(i, j, coeffs);
        }
    }
    for j in 1..=n as u8 {
        // [e_j, v] = -A e_j
        let col = matrix_column(&a.matrix, j as usize - 1);
        let mut coeffs: Vec<Poly> = col.iter().map(|r| Poly::constant(-r.clone())).collect();
        coeffs.push(Poly::zero());
        g = g.with_bracket(j, v, coeffs);
    }
    debug_assert!(g.jacobi_check().passed());
    g
}

/// Lift a form on `h` to the suspension (same coefficients, zero on `v`).
fn lift(form: &KForm, new_dim: usize) -> KForm {
    let mut out = KForm::zero(new_dim, form.degree());
    for (idx, c) in form.terms() {
        out.add_signed_term(idx, c.clone());
    }
    out
}

fn standard_volume(dim: usize) -> KForm {
    let idx: Vec<u8> = (1..=dim as u8).collect();
    KForm::basis(dim, &idx)
}

/// Evaluate a 1-form on a rational vector.
fn pair(alpha: &KForm, v: &[Rat]) -> Rat {
    let mut acc = int(0);
    for (idx, c) in alpha.terms() {
        acc += c.as_constant().expect("rational form") * v[idx[0] as usize - 1].clone();
    }
    acc
}

/// The kernel of a 2-form restricted to the whole space.
fn form_kernel(omega: &KForm) -> Vec<Vec<Rat>> {
    let n = omega.dim();
    let m = omega.coefficient_matrix();
    let rows: Vec<Vec<Rat>> = (0..n)
        .map(|i| (0..n).map(|j| m[i][j].as_constant().expect("rational form")).collect())
        .collect();
    Mat::from_rows(rows).kernel_basis()
}

#[derive(Clone, Debug)]
pub struct SuspensionResult {
    pub algebra: LieAlgebra,
    pub derivation: Derivation,
    /// The suspension form `a+ = pi* a` when the construction starts from a
    /// potential or contact form.
    pub suspension_form: Option<KForm>,
    /// The resulting structure form on the suspension: `a+` for a
    /// contactization, the symplectic 2-form for a symplectization.
    pub structure_form: KForm,
    /// Nonzero top-form coefficient (contact case) or Pfaffian certifying
    /// nondegeneracy.
    pub certificate: Poly,
}

#[derive(Clone, Debug)]
pub struct SuspensionOutcome {
    pub report: Report,
    pub result: Option<SuspensionResult>,
}

/// Contactization (even-dimensional `h` with an exact symplectic structure
/// `d alpha`): the lifted form is contact on the suspension iff `Aw` leaves
/// `Ker alpha`, where `w` spans `Ker(d alpha | Ker alpha)`. Without a
/// supplied derivation, `ad_u` for any `u` transversal to `Ker alpha` works.
pub fn contactize(
    h: &LieAlgebra,
    alpha: &KForm,
    a: Option<&Derivation>,
) -> Result<SuspensionOutcome> {
    h.require_constant()?;
    let n = h.dim();
    if !n.is_multiple_of(2) {
        return Err(Error::OddDimension(n));
    }
    if alpha.degree() != 1 || alpha.is_zero() {
        return Err(Error::ZeroForm);
    }
    let m = n / 2;
    let da = h.ce_differential(alpha)?;
    if da.pfaffian(&standard_volume(n))?.is_zero() {
        return Err(Error::Degenerate);
    }

    // Pi = Ker alpha and w spanning Ker(da|Pi)
    let alpha_row: Vec<Rat> = (1..=n as u8)
        .map(|i| alpha.coeff(&[i]).as_constant().expect("rational form"))
        .collect();
    let pi_basis = Mat::from_rows(vec![alpha_row.clone()]).kernel_basis();
    let da_matrix = da.coefficient_matrix();
    let restricted: Vec<Vec<Rat>> = pi_basis
        .iter()
        .map(|b| {
            pi_basis
                .iter()
                .map(|c| {
                    let mut acc = int(0);
                    for (p, bp) in b.iter().enumerate() {
                        for (q, cq) in c.iter().enumerate() {
                            acc += bp.clone()
                                    * cq.clone()
                                    * da_matrix[p][q].as_constant().expect("rational");
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect();
    let kernel_in_pi = Mat::from_rows(restricted).kernel_basis();
    if kernel_in_pi.len() != 1 {
        return Err(Error::Degenerate);
    }
    let mut w = vec![int(0); n];
    for (s, coef) in kernel_in_pi[0].iter().enumerate() {
        for (t, val) in pi_basis[s].iter().enumerate() {
            w[t] = w[t].clone() + coef.clone() * val.clone();
        }
    }

    let derivation = match a {
        Some(d) => d.clone(),
        None => {
            // ad_u for the first basis vector transversal to Pi
            let u = (1..=n as u8)
                .find(|&i| !alpha_row[i as usize - 1].is_zero())
                .expect("alpha is nonzero");
            Derivation::ad(h, u)?
        }
    };

    let condition = pair(alpha, &derivation.apply(&w));
    let g = suspend(h, &derivation);
    let alpha_plus = lift(alpha, n + 1);
    let d_alpha_plus = g.ce_differential(&alpha_plus)?;
    let top = alpha_plus.wedge(&d_alpha_plus.wedge_pow(m)?)?;
    let certificate = top.top_coefficient();
    // dual route: the certificate vanishes exactly when alpha(Aw) does
    debug_assert_eq!(certificate.is_zero(), condition.is_zero());

    let mut report = Report::new("contactize");
    let pi_desc: Vec<String> = pi_basis.iter().map(|b| vector_string(b)).collect();
    report.push(
        "kernel-data",
        true,
        format!("Pi = span{{{}}}, w = {}", pi_desc.join(", "), vector_string(&w)),
    );
    if condition.is_zero() {
        report.push("contact", false, "Aw stays in Ker alpha: the lift is not contact");
        return Ok(SuspensionOutcome { report, result: None });
    }
    report.push_witness(
        "contact",
        true,
        format!("alpha(Aw) = {}", crate::scalar::format_rat(&condition)),
        alpha_plus.to_string(),
    );
    Ok(SuspensionOutcome {
        report,
        result: Some(SuspensionResult {
            algebra: g,
            derivation,
            suspension_form: Some(alpha_plus.clone()),
            structure_form: alpha_plus,
            certificate,
        }),
    })
}

fn vector_string(v: &[Rat]) -> String {
    let mut f = KForm::zero(v.len(), 1);
    for (i, c) in v.iter().enumerate() {
        f.add_signed_term(&[i as u8 + 1], Poly::constant(c.clone()));
    }
    f.to_string().replace('*', "")
}

/// Symplectization of a contact algebra: `d(a+)` is symplectic on the
/// suspension iff `Aw` leaves `Ker alpha`, `w` spanning `Ker(d alpha)`.
/// With no derivation supplied, the outer classes are searched; the
/// condition `alpha(Aw)` is linear in `A` and vanishes on every inner
/// derivation (`alpha(ad_x w) = -d alpha(x, w) = 0`), so checking one
/// representative per class generator decides existence exactly.
pub fn symplectize_contact(
    h: &LieAlgebra,
    alpha: &KForm,
    a: Option<&Derivation>,
) -> Result<SuspensionOutcome> {
    h.require_constant()?;
    let n = h.dim();
    if n.is_multiple_of(2) {
        return Err(Error::EvenDimension(n));
    }
    let m = n.div_ceil(2);
    let da = h.ce_differential(alpha)?;
    let contact_top = alpha.wedge(&da.wedge_pow(m - 1)?)?;
    if contact_top.is_zero() {
        return Err(Error::NotContact);
    }

    let kernel = form_kernel(&da);
    if kernel.len() != 1 {
        return Err(Error::Degenerate);
    }
    let w = kernel[0].clone();

    let mut report = Report::new("symplectize");
    let build = |derivation: Derivation, report: &mut Report| -> Result<SuspensionResult> {
        let g = suspend(h, &derivation);
        let alpha_plus = lift(alpha, n + 1);
        let omega = g.ce_differential(&alpha_plus)?;
        let certificate = omega.pfaffian(&standard_volume(n + 1))?;
        report.push_witness(
            "symplectic",
            true,
            format!("omega = d(alpha+), Pf = {certificate}"),
            omega.to_string(),
        );
        Ok(SuspensionResult {
            algebra: g,
            derivation,
            suspension_form: Some(alpha_plus),
            structure_form: omega,
            certificate,
        })
    };

    match a {
        Some(d) => {
            let condition = pair(alpha, &d.apply(&w));
            if condition.is_zero() {
                report.push("symplectic", false, "Aw stays in Ker alpha for the supplied derivation");
                return Ok(SuspensionOutcome { report, result: None });
            }
            let result = build(d.clone(), &mut report)?;
            debug_assert!(!result.certificate.is_zero());
            Ok(SuspensionOutcome { report, result: Some(result) })
        }
        None => {
            let space = derivation_space(h)?;
            report.push(
                "derivations",
                true,
                format!(
                    "dim Der = {}, inner = {}, dim H1 = {}",
                    space.basis.len(),
                    space.inner_dim(),
                    space.h1_dim
                ),
            );
            for rep in &space.h1_representatives {
                let condition = pair(alpha, &rep.apply(&w));
                if !condition.is_zero() {
                    let result = build(rep.clone(), &mut report)?;
                    debug_assert!(!result.certificate.is_zero());
                    return Ok(SuspensionOutcome { report, result: Some(result) });
                }
            }
            report.push(
                "symplectic",
                false,
                "no outer class moves w out of Ker alpha: no symplectization exists",
            );
            Ok(SuspensionOutcome { report, result: None })
        }
    }
}

/// Symplectization of an odd-dimensional algebra carrying a maximally
/// nondegenerate closed 2-form. Solves the joint linear condition
/// `A.omega = d alpha` over the derivation space and all covectors, then
/// needs the open condition `alpha(w) != 0` on `w` spanning `Ker omega`.
/// The derivation action on 2-forms is
/// `(A.omega)(x, y) = -omega(Ax, y) - omega(x, Ay)`.
pub fn symplectize_2form(h: &LieAlgebra, omega: &KForm) -> Result<SuspensionOutcome> {
    h.require_constant()?;
    let n = h.dim();
    if n.is_multiple_of(2) {
        return Err(Error::EvenDimension(n));
    }
    if omega.degree() != 2 {
        return Err(Error::BadDegree("symplectization needs a 2-form".into()));
    }
    if !h.ce_differential(omega)?.is_zero() {
        return Err(Error::NotClosed);
    }
    let coeff = omega.coefficient_matrix();
    let omega_rat: Vec<Vec<Rat>> = (0..n)
        .map(|i| (0..n).map(|j| coeff[i][j].as_constant().expect("rational form")).collect())
        .collect();
    let rank = Mat::from_rows(omega_rat.clone()).rank();
    if rank != n - 1 {
        return Err(Error::WrongRank { expected: n - 1, got: rank });
    }
    let kernel = form_kernel(omega);
    debug_assert_eq!(kernel.len(), 1);
    let w = kernel[0].clone();

    let space = derivation_space(h)?;
    let der_count = space.basis.len();
    // unknowns: derivation coordinates, then the covector alpha
    let unknowns = der_count + n;
    let mut rows = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let mut row = vec![int(0); unknowns];
            for (s, d) in space.basis.iter().enumerate() {
                // -omega(A e_i, e_j) - omega(e_i, A e_j)
                let mut v = int(0);
                for (p, orow) in omega_rat.iter().enumerate() {
                    v = v - d.matrix()[(p, i)].clone() * orow[j].clone()
                        - d.matrix()[(p, j)].clone() * omega_rat[i][p].clone();
                }
                row[s] = v;
            }
            // -(d alpha)(e_i, e_j) = alpha([e_i, e_j])
            for k in 0..n {
                let c = h
                    .structure_constant(i as u8 + 1, j as u8 + 1, k as u8 + 1)
                    .as_constant()
                    .unwrap();
                row[der_count + k] = row[der_count + k].clone() + c;
            }
            rows.push(row);
        }
    }
    let solutions = Mat::from_rows(rows).kernel_basis();

    let mut report = Report::new("symplectize-2form");
    report.push(
        "linear-system",
        true,
        format!(
            "A.omega = d alpha solution space has dimension {} (dim Der = {der_count})",
            solutions.len()
        ),
    );

    // alpha(w) is linear on the solution space: a basis vector with a
    // nonzero value exists iff the open condition is satisfiable
    let hit = solutions.iter().find(|sol| {
        let alpha_part = &sol[der_count..];
        let mut val = int(0);
        for k in 0..n {
            val += alpha_part[k].clone() * w[k].clone();
        }
        !val.is_zero()
    });

    let Some(sol) = hit else {
        report.push(
            "symplectic",
            false,
            "every solution has alpha(w) = 0: the extension is degenerate",
        );
        return Ok(SuspensionOutcome { report, result: None });
    };

    let mut a_mat = Mat::zeros(n, n);
    for (s, d) in space.basis.iter().enumerate() {
        for p in 0..n {
            for q in 0..n {
                let add = sol[s].clone() * d.matrix()[(p, q)].clone();
                a_mat[(p, q)] = a_mat[(p, q)].clone() + add;
            }
        }
    }
    let derivation = Derivation::new(h, a_mat)?;
    let alpha: Vec<Rat> = sol[der_count..].to_vec();

    let g = suspend(h, &derivation);
    // extended form: omega + v* ^ alpha, i.e. subtract alpha_k e_k*^v*
    let mut extended = lift(omega, n + 1);
    let v_index = n as u8 + 1;
    for (k, c) in alpha.iter().enumerate() {
        extended.add_signed_term(&[k as u8 + 1, v_index], Poly::constant(-c.clone()));
    }
    // closedness validates the sign convention for the action on forms
    if !g.ce_differential(&extended)?.is_zero() {
        return Err(Error::NotClosed);
    }
    let certificate = extended.pfaffian(&standard_volume(n + 1))?;
    debug_assert!(!certificate.is_zero());
    report.push_witness(
        "symplectic",
        true,
        format!("extension by i_v omega = alpha, Pf = {certificate}"),
        extended.to_string(),
    );
    Ok(SuspensionOutcome {
        report,
        result: Some(SuspensionResult {
            algebra: g,
            derivation,
            suspension_form: None,
            structure_form: extended,
            certificate,
        }),
    })
}
