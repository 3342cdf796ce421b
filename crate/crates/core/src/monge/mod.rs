//! Elliptic Monge-Ampere layer: canonical frames, almost complex structures,
//! the Pfaffian metric on 2-forms, admissibility of a frame, and the full
//! symbolic recovery pipeline from a nilpotent algebra to a second-order
//! equation.

pub mod bch;
pub mod jet;
pub mod polyform;

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::exterior::KForm;
use crate::liealg::LieAlgebra;
use crate::matrix::Mat;
use crate::parse::{AlgebraFile, ChartFile, FrameLabels};
use crate::poly::Poly;
use crate::report::Report;
use crate::scalar::{int, Rat};

pub use bch::{dual_coframe, left_invariant_frame, InvariantFrame};
pub use jet::{emit_pde, is_canonical_symplectic, JetPolynomial};
pub use polyform::PolyForm;

/// Vector-valued antisymmetric tensor on basis pairs; only nonzero values
/// are stored, keys normalized to `i < j`.
pub type PairTensor = BTreeMap<(u8, u8), Vec<Poly>>;

/// A canonical frame `(P1, P2, Q1, Q2)` on a 4-dimensional algebra carrying
/// the induced forms `omega = P1*^Q1* + P2*^Q2*`,
/// `theta = P1*^Q2* - P2*^Q1*` and complex structure.
#[derive(Clone, Debug)]
pub struct EStructure {
    pub algebra: LieAlgebra,
    pub frame: FrameLabels,
}

impl EStructure {
    pub fn new(algebra: LieAlgebra, frame: FrameLabels) -> Result<Self> {
        if algebra.dim() != 4 {
            return Err(Error::DimensionMismatch(algebra.dim(), 4));
        }
        Ok(EStructure { algebra, frame })
    }

    pub fn omega(&self) -> KForm {
        let f = &self.frame;
        let mut w = KForm::zero(4, 2);
        w.add_signed_term(&[f.p1, f.q1], Poly::one());
        w.add_signed_term(&[f.p2, f.q2], Poly::one());
        w
    }

    pub fn theta(&self) -> KForm {
        let f = &self.frame;
        let mut t = KForm::zero(4, 2);
        t.add_signed_term(&[f.p1, f.q2], Poly::one());
        t.add_signed_term(&[f.p2, f.q1], -&Poly::one());
        t
    }

    /// The canonical complex structure: `j P1 = P2, j P2 = -P1,
    /// j Q1 = -Q2, j Q2 = Q1`.
    pub fn complex_structure(&self) -> Mat {
        let f = &self.frame;
        let mut j = Mat::zeros(4, 4);
        j[(f.p2 as usize - 1, f.p1 as usize - 1)] = int(1);
        j[(f.p1 as usize - 1, f.p2 as usize - 1)] = int(-1);
        j[(f.q2 as usize - 1, f.q1 as usize - 1)] = int(-1);
        j[(f.q1 as usize - 1, f.q2 as usize - 1)] = int(1);
        j
    }

    /// The canonical Nijenhuis tensor:
    /// `N = -P1*^Q1* (x) P2 + P1*^Q2* (x) P1 - P2*^Q1* (x) P1 - P2*^Q2* (x) P2`.
    pub fn canonical_nijenhuis(&self) -> PairTensor {
        let f = &self.frame;
        let mut out = PairTensor::new();
        let entries: [(u8, u8, u8, i64); 4] = [
            (f.p1, f.q1, f.p2, -1),
            (f.p1, f.q2, f.p1, 1),
            (f.p2, f.q1, f.p1, -1),
            (f.p2, f.q2, f.p2, -1),
        ];
        for (i, j, target, sign) in entries {
            let mut v = vec![Poly::zero(); 4];
            v[target as usize - 1] = Poly::from_int(sign);
            insert_pair(&mut out, i, j, v);
        }
        out
    }
}

fn insert_pair(t: &mut PairTensor, i: u8, j: u8, v: Vec<Poly>) {
    if v.iter().all(|p| p.is_zero()) {
        return;
    }
    if i < j {
        t.insert((i, j), v);
    } else {
        t.insert((j, i), v.iter().map(|p| -p).collect());
    }
}

/// Solve `omega(jX, Y) = theta(X, Y)` for the endomorphism `j`; with an
/// effective, Pfaffian-normalized `theta` this is an almost complex
/// structure (`j^2 = -1`).
pub fn j_from_theta(omega: &KForm, theta: &KForm) -> Result<Mat> {
    if omega.dim() != 4 || theta.dim() != 4 {
        return Err(Error::DimensionMismatch(omega.dim().max(theta.dim()), 4));
    }
    if !theta.wedge(omega)?.is_zero() {
        return Err(Error::NotEffective);
    }
    if pfaffian_pairing(theta, theta, omega)? != int(1) {
        return Err(Error::NotNormalized);
    }
    let to_mat = |f: &KForm| -> Result<Mat> {
        let coeff = f.coefficient_matrix();
        let mut m = Mat::zeros(4, 4);
        for i in 0..4 {
            for j in 0..4 {
                m[(i, j)] = coeff[i][j]
                    .as_constant()
                    .ok_or_else(|| Error::UnsubstitutedParameters("forms must be rational".into()))?;
            }
        }
        Ok(m)
    };
    let omega_mat = to_mat(omega)?;
    let theta_mat = to_mat(theta)?;
    let inv = omega_mat.inverse().ok_or(Error::Degenerate)?;
    let j = inv.matmul(&theta_mat);
    // j^T Omega = Theta and j^2 = -1 are forced by the normalization
    debug_assert_eq!(j.transpose().matmul(&omega_mat), theta_mat);
    debug_assert_eq!(j.matmul(&j), {
        let mut neg = Mat::zeros(4, 4);
        for i in 0..4 {
            neg[(i, i)] = int(-1);
        }
        neg
    });
    Ok(j)
}

/// Nijenhuis tensor `N(x, y) = [jx, jy] - j[jx, y] - j[x, jy] - [x, y]`
/// evaluated on all basis pairs through the Lie algebra commutators.
pub fn nijenhuis(g: &LieAlgebra, j: &Mat) -> Result<PairTensor> {
    let n = g.dim();
    if j.rows != n || j.cols != n {
        return Err(Error::DimensionMismatch(j.rows, n));
    }
    let apply_j = |v: &[Poly]| -> Vec<Poly> {
        (0..n)
            .map(|p| {
                let mut acc = Poly::zero();
                for (k, vk) in v.iter().enumerate() {
                    if !vk.is_zero() {
                        acc = &acc + &vk.scale(&j[(p, k)]);
                    }
                }
                acc
            })
            .collect()
    };
    let unit = |i: u8| -> Vec<Poly> {
        let mut v = vec![Poly::zero(); n];
        v[i as usize - 1] = Poly::one();
        v
    };
    let mut out = PairTensor::new();
    for i in 1..=n as u8 {
        for jj in i + 1..=n as u8 {
            let (ei, ej) = (unit(i), unit(jj));
            let (jei, jej) = (apply_j(&ei), apply_j(&ej));
            let t1 = g.bracket(&jei, &jej)?;
            let t2 = apply_j(&g.bracket(&jei, &ej)?);
            let t3 = apply_j(&g.bracket(&ei, &jej)?);
            let t4 = g.bracket(&ei, &ej)?;
            let value: Vec<Poly> = (0..n)
                .map(|k| &(&(&t1[k] - &t2[k]) - &t3[k]) - &t4[k])
                .collect();
            insert_pair(&mut out, i, jj, value);
        }
    }
    Ok(out)
}

/// The Pfaffian metric on 2-forms: `<t1, t2> = (t1 ^ t2) / (omega ^ omega)`.
pub fn pfaffian_pairing(t1: &KForm, t2: &KForm, omega: &KForm) -> Result<Rat> {
    if omega.dim() != 4 {
        return Err(Error::DimensionMismatch(omega.dim(), 4));
    }
    let vol = omega.wedge(omega)?;
    if vol.is_zero() {
        return Err(Error::Degenerate);
    }
    let den = vol
        .top_coefficient()
        .as_constant()
        .ok_or_else(|| Error::UnsubstitutedParameters("omega must be rational".into()))?;
    let num = t1
        .wedge(t2)?
        .top_coefficient()
        .as_constant()
        .ok_or_else(|| Error::UnsubstitutedParameters("forms must be rational".into()))?;
    Ok(num / den)
}

/// Gram matrix of the Pfaffian pairing on the 6-dimensional space of
/// 2-forms, in the increasing-tuple basis.
pub fn pairing_gram(omega: &KForm) -> Result<Mat> {
    let g = LieAlgebra::abelian(4);
    let tuples = g.basis_tuples(2);
    let forms: Vec<KForm> = tuples.iter().map(|t| KForm::basis(4, t)).collect();
    let mut m = Mat::zeros(6, 6);
    for a in 0..6 {
        for b in a..6 {
            let v = pfaffian_pairing(&forms[a], &forms[b], omega)?;
            m[(a, b)] = v.clone();
            m[(b, a)] = v;
        }
    }
    Ok(m)
}

/// Inertia of the Pfaffian metric on all 2-forms.
pub fn pairing_signature(omega: &KForm) -> Result<(usize, usize)> {
    Ok(pairing_gram(omega)?.signature())
}

/// Inertia of the Pfaffian metric restricted to the orthogonal complement
/// of `omega` itself.
pub fn complement_signature(omega: &KForm) -> Result<(usize, usize)> {
    let gram = pairing_gram(omega)?;
    let g = LieAlgebra::abelian(4);
    let tuples = g.basis_tuples(2);
    let omega_coords: Vec<Rat> = tuples
        .iter()
        .map(|t| {
            omega
                .coeff(t)
                .as_constant()
                .ok_or_else(|| Error::UnsubstitutedParameters("omega must be rational".into()))
        })
        .collect::<Result<_>>()?;
    // <x, omega> = 0 as a single linear condition
    let row: Vec<Rat> = (0..6)
        .map(|a| {
            let mut acc = int(0);
            for (b, oc) in omega_coords.iter().enumerate() {
                acc += gram[(a, b)].clone() * oc.clone();
            }
            acc
        })
        .collect();
    let basis = Mat::from_rows(vec![row]).kernel_basis();
    let k = basis.len();
    let mut restricted = Mat::zeros(k, k);
    for s in 0..k {
        for t in s..k {
            let mut acc = int(0);
            for a in 0..6 {
                for b in 0..6 {
                    acc += basis[s][a].clone() * gram[(a, b)].clone() * basis[t][b].clone();
                }
            }
            restricted[(s, t)] = acc.clone();
            restricted[(t, s)] = acc;
        }
    }
    Ok(restricted.signature())
}

/// The four closedness relations among structure constants equivalent to
/// `d omega = 0` for the canonical frame, in frame-label order.
pub fn closedness_relations(es: &EStructure) -> Vec<Poly> {
    let g = &es.algebra;
    let (a, b, c, d) = (es.frame.p1, es.frame.p2, es.frame.q1, es.frame.q2);
    let sc = |i: u8, j: u8, k: u8| g.structure_constant(i, j, k);
    vec![
        &(&sc(a, b, a) - &sc(b, c, c)) + &sc(a, c, d),
        &(&sc(a, b, b) - &sc(b, d, c)) + &sc(a, d, d),
        &(&sc(a, d, a) - &sc(a, c, b)) + &sc(c, d, c),
        &(&sc(b, d, a) - &sc(b, c, b)) + &sc(c, d, d),
    ]
}

/// Admissibility of a canonical frame: the closedness relations (condition
/// 1, cross-checked against `d omega = 0`) and the Nijenhuis tensor
/// matching its canonical value (condition 2).
pub fn verify_e_structure(es: &EStructure) -> Result<Report> {
    let mut report = Report::new("estructure");
    let jac = es.algebra.jacobi_check();
    report.merge(jac.to_report());
    if !jac.passed() {
        return Ok(report);
    }

    let relations = closedness_relations(es);
    let relations_hold = relations.iter().all(|p| p.is_zero());
    for (k, rel) in relations.iter().enumerate() {
        report.push(
            format!("closedness-relation-{}", k + 1),
            rel.is_zero(),
            format!("value = {rel}"),
        );
    }
    let domega = es.algebra.ce_differential(&es.omega())?;
    let domega_zero = domega.is_zero();
    report.push(
        "d-omega",
        domega_zero,
        if domega_zero {
            "d omega = 0 (agrees with the four relations)".to_string()
        } else {
            format!("d omega = {domega}")
        },
    );
    // the two routes are equivalent by construction
    debug_assert_eq!(relations_hold, domega_zero);

    let actual = nijenhuis(&es.algebra, &es.complex_structure())?;
    let expected = es.canonical_nijenhuis();
    if actual == expected {
        report.push("nijenhuis", true, "N_j equals the canonical tensor");
    } else {
        let mismatch = describe_tensor_mismatch(&actual, &expected);
        report.push("nijenhuis", false, format!("N_j differs from the canonical tensor: {mismatch}"));
    }
    Ok(report)
}

fn describe_tensor_mismatch(actual: &PairTensor, expected: &PairTensor) -> String {
    let keys: std::collections::BTreeSet<(u8, u8)> =
        actual.keys().chain(expected.keys()).copied().collect();
    for (i, j) in keys {
        let zero = vec![Poly::zero(); 4];
        let a = actual.get(&(i, j)).unwrap_or(&zero);
        let e = expected.get(&(i, j)).unwrap_or(&zero);
        if a != e {
            let show = |v: &[Poly]| {
                let parts: Vec<String> = v
                    .iter()
                    .enumerate()
                    .filter(|(_, p)| !p.is_zero())
                    .map(|(k, p)| format!("({}) e{}", p, k + 1))
                    .collect();
                if parts.is_empty() { "0".to_string() } else { parts.join(" + ") }
            };
            return format!("on (e{i}, e{j}): got {}, expected {}", show(a), show(e));
        }
    }
    "tensors agree".to_string()
}

/// Assemble the canonical forms in exponential coordinates through the
/// frame's dual coframe; the coordinate `d omega = 0` check guards against
/// inconsistent upstream data.
pub fn coordinate_forms(es: &EStructure, coframe: &[PolyForm]) -> Result<(PolyForm, PolyForm)> {
    let f = &es.frame;
    let co = |i: u8| &coframe[i as usize - 1];
    let omega = co(f.p1).wedge(co(f.q1))?.add(&co(f.p2).wedge(co(f.q2))?)?;
    let theta = co(f.p1).wedge(co(f.q2))?.sub(&co(f.p2).wedge(co(f.q1))?)?;
    if !omega.exterior_derivative().is_zero() {
        return Err(Error::NotClosed);
    }
    Ok((omega, theta))
}

/// Pull forms through a user-supplied chart after verifying, symbolically,
/// that the supplied inverse really inverts it (both ways).
pub fn apply_chart(forms: &[PolyForm], chart: &ChartFile) -> Result<Vec<PolyForm>> {
    let forward: BTreeMap<String, Poly> = chart.forward.iter().cloned().collect();
    let inverse: BTreeMap<String, Poly> = chart.inverse.iter().cloned().collect();
    for (v, expr) in &chart.forward {
        if expr.subst(&inverse) != Poly::var(v) {
            return Err(Error::BadChartInverse(v.clone()));
        }
    }
    for (x, expr) in &chart.inverse {
        if expr.subst(&forward) != Poly::var(x) {
            return Err(Error::BadChartInverse(x.clone()));
        }
    }
    let target = chart.target_vars();
    let mut out = Vec::with_capacity(forms.len());
    for form in forms {
        let pulled = form.pullback(&target, &inverse)?;
        // exact pullback commutes with d, so closedness must survive
        if form.exterior_derivative().is_zero() && !pulled.exterior_derivative().is_zero() {
            return Err(Error::Unsupported("pullback failed to preserve closedness".into()));
        }
        out.push(pulled);
    }
    Ok(out)
}

/// Everything the recovery pipeline produces, stage by stage.
#[derive(Clone, Debug)]
pub struct RecoverOutput {
    pub estructure: EStructure,
    pub admissibility: Report,
    pub frame: InvariantFrame,
    pub coframe: Vec<PolyForm>,
    pub omega_coord: PolyForm,
    pub theta_coord: PolyForm,
    pub omega_chart: PolyForm,
    pub theta_chart: PolyForm,
    pub pde: JetPolynomial,
}

impl RecoverOutput {
    /// `(role, basis index)` pairs in display order.
    pub fn roles(&self) -> [(&'static str, u8); 4] {
        let f = &self.estructure.frame;
        [("P1", f.p1), ("P2", f.p2), ("Q1", f.q1), ("Q2", f.q2)]
    }
}

/// Full recovery: algebra file with a frame labeling plus a chart file down
/// to the normalized second-order equation.
pub fn recover(file: &AlgebraFile, chart: &ChartFile) -> Result<RecoverOutput> {
    let labels = file
        .frame
        .ok_or_else(|| Error::Unsupported("the algebra file needs a 'frame' line".into()))?;
    file.algebra.require_constant()?;
    let es = EStructure::new(file.algebra.clone(), labels)?;
    let admissibility = verify_e_structure(&es)?;
    if !admissibility.pass() {
        let failed: Vec<String> =
            admissibility.failures().map(|c| c.name.clone()).collect();
        return Err(Error::Unsupported(format!(
            "the frame is not admissible (failed: {})",
            failed.join(", ")
        )));
    }
    let frame = left_invariant_frame(&es.algebra)?;
    let coframe = dual_coframe(&frame)?;
    if !bch::coframe_satisfies_structure_equations(&es.algebra, &coframe)? {
        return Err(Error::Unsupported(
            "coframe fails the structure-equation round trip".into(),
        ));
    }
    let (omega_coord, theta_coord) = coordinate_forms(&es, &coframe)?;

    // the chart must produce the canonical (p1, p2, q1, q2) coordinates
    let mut target = chart.target_vars();
    target.sort();
    let mut expected: Vec<String> = jet::CHART_VARS.iter().map(|s| s.to_string()).collect();
    expected.sort();
    if target != expected {
        return Err(Error::Unsupported(format!(
            "chart must introduce exactly p1, p2, q1, q2 (got {})",
            chart.target_vars().join(", ")
        )));
    }
    let mut canonical_chart = chart.clone();
    canonical_chart
        .forward
        .sort_by_key(|(v, _)| jet::CHART_VARS.iter().position(|c| c == v).unwrap_or(4));

    let pulled = apply_chart(&[omega_coord.clone(), theta_coord.clone()], &canonical_chart)?;
    let omega_chart = pulled[0].clone();
    let theta_chart = pulled[1].clone();
    if !is_canonical_symplectic(&omega_chart) {
        return Err(Error::Unsupported(format!(
            "the chart does not bring omega to dp1^dq1 + dp2^dq2 (got {omega_chart})"
        )));
    }
    let pde = emit_pde(&theta_chart)?;
    Ok(RecoverOutput {
        estructure: es,
        admissibility,
        frame,
        coframe,
        omega_coord,
        theta_coord,
        omega_chart,
        theta_chart,
        pde,
    })
}
