//! Lie algebras with exact (possibly parametric) structure constants, their
//! Chevalley-Eilenberg differential and the derived linear invariants.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::exterior::{IndexTuple, KForm};
use crate::matrix::{Mat, Subspace};
use crate::poly::Poly;
use crate::report::Report;
use crate::scalar::{int, Rat};

/// Default cap on the ambient dimension; everything in the bundled corpus
/// lives in dimension <= 4, the cap just keeps the symbolic expansions sane.
pub const DIMENSION_CAP: usize = 8;

/// A Lie algebra given by structure constants `[e_i, e_j] = c^k_ij e_k`
/// (stored for i < j; antisymmetry is implicit). Coefficients are polynomials
/// in declared parameters; most rank-type invariants require the parameters
/// to be substituted away first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieAlgebra {
    dim: usize,
    /// (i, j) with i < j, 1-based -> the n coefficients of [e_i, e_j].
    constants: BTreeMap<(u8, u8), Vec<Poly>>,
    params: Vec<String>,
}

impl LieAlgebra {
    pub fn abelian(dim: usize) -> Self {
        assert!((1..=DIMENSION_CAP).contains(&dim), "dimension out of range");
        LieAlgebra { dim, constants: BTreeMap::new(), params: Vec::new() }
    }

    /// Builder: set `[e_i, e_j]` (1-based, i < j) to the given coefficients.
    pub fn with_bracket(mut self, i: u8, j: u8, coeffs: Vec<Poly>) -> Self {
        assert!(i < j && j as usize <= self.dim, "bad bracket indices");
        assert_eq!(coeffs.len(), self.dim);
        if coeffs.iter().all(|c| c.is_zero()) {
            self.constants.remove(&(i, j));
        } else {
            self.constants.insert((i, j), coeffs);
        }
        self.params = self.params_in_constants().into_iter().collect();
        self
    }

    /// Single-coefficient convenience: `[e_i, e_j] = c * e_k`.
    pub fn with_simple_bracket(self, i: u8, j: u8, k: u8, c: Rat) -> Self {
        let dim = self.dim;
        let mut coeffs = self.constants.get(&(i, j)).cloned().unwrap_or_else(|| vec![Poly::zero(); dim]);
        coeffs[k as usize - 1] = &coeffs[k as usize - 1] + &Poly::constant(c);
        self.with_bracket(i, j, coeffs)
    }

    /// Build from Maurer-Cartan data: `differentials[k]` is `d e_{k+1}*`.
    /// This is the single audited conversion point between the two dialects:
    /// with `d e_k* = -sum_{i<j} c^k_ij e_i*^e_j*`, the constant is minus the
    /// increasing-index coefficient.
    pub fn from_maurer_cartan(dim: usize, differentials: &[KForm]) -> Result<Self> {
        assert_eq!(differentials.len(), dim);
        let mut alg = LieAlgebra::abelian(dim);
        let mut table: BTreeMap<(u8, u8), Vec<Poly>> = BTreeMap::new();
        for (k, d) in differentials.iter().enumerate() {
            if d.dim() != dim {
                return Err(Error::DimensionMismatch(d.dim(), dim));
            }
            if !d.is_zero() && d.degree() != 2 {
                return Err(Error::BadDegree(format!(
                    "Maurer-Cartan differential of degree {}",
                    d.degree()
                )));
            }
            for (idx, q) in d.terms() {
                let key = (idx[0], idx[1]);
                let row = table.entry(key).or_insert_with(|| vec![Poly::zero(); dim]);
                row[k] = -q;
            }
        }
        for ((i, j), coeffs) in table {
            alg = alg.with_bracket(i, j, coeffs);
        }
        Ok(alg)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Heisenberg algebra in dimension 3: `[e2, e3] = e1`.
    pub fn heisenberg3() -> Self {
        LieAlgebra::abelian(3).with_simple_bracket(2, 3, 1, int(1))
    }

    /// sl(2) in the trace-form basis: `[e1,e2] = 2e3, [e1,e3] = 2e2, [e2,e3] = 2e1`.
    pub fn sl2() -> Self {
        LieAlgebra::abelian(3)
            .with_simple_bracket(1, 2, 3, int(2))
            .with_simple_bracket(1, 3, 2, int(2))
            .with_simple_bracket(2, 3, 1, int(2))
    }

    /// so(3): the vector-product constants.
    pub fn so3() -> Self {
        LieAlgebra::abelian(3)
            .with_simple_bracket(1, 2, 3, int(1))
            .with_simple_bracket(2, 3, 1, int(1))
            .with_simple_bracket(1, 3, 2, int(-1))
    }

    /// The 4-dimensional filiform nilpotent algebra
    /// `[e2,e3] = e1, [e3,e4] = e2`.
    pub fn nilpotent4() -> Self {
        LieAlgebra::abelian(4)
            .with_simple_bracket(2, 3, 1, int(1))
            .with_simple_bracket(3, 4, 2, int(1))
    }

    /// Structure constants of `[e_i, e_j]` for any i, j (antisymmetry applied).
    pub fn bracket_basis(&self, i: u8, j: u8) -> Vec<Poly> {
        if i == j {
            return vec![Poly::zero(); self.dim];
        }
        if i < j {
            self.constants.get(&(i, j)).cloned().unwrap_or_else(|| vec![Poly::zero(); self.dim])
        } else {
            self.bracket_basis(j, i).iter().map(|c| -c).collect()
        }
    }

    /// `c^k_ij`, 1-based everywhere.
    pub fn structure_constant(&self, i: u8, j: u8, k: u8) -> Poly {
        self.bracket_basis(i, j)[k as usize - 1].clone()
    }

    pub fn bracket(&self, x: &[Poly], y: &[Poly]) -> Result<Vec<Poly>> {
        if x.len() != self.dim || y.len() != self.dim {
            return Err(Error::DimensionMismatch(x.len().max(y.len()), self.dim));
        }
        let mut out = vec![Poly::zero(); self.dim];
        for ((i, j), coeffs) in &self.constants {
            let (xi, xj) = (&x[*i as usize - 1], &x[*j as usize - 1]);
            let (yi, yj) = (&y[*i as usize - 1], &y[*j as usize - 1]);
            // x_i y_j - x_j y_i multiplies [e_i, e_j]
            let factor = &(xi * yj) - &(xj * yi);
            if factor.is_zero() {
                continue;
            }
            for (k, c) in coeffs.iter().enumerate() {
                out[k] = &out[k] + &(c * &factor);
            }
        }
        Ok(out)
    }

    pub fn bracket_rat(&self, x: &[Rat], y: &[Rat]) -> Result<Vec<Poly>> {
        let xp: Vec<Poly> = x.iter().map(|r| Poly::constant(r.clone())).collect();
        let yp: Vec<Poly> = y.iter().map(|r| Poly::constant(r.clone())).collect();
        self.bracket(&xp, &yp)
    }

    /// Maurer-Cartan differential of the basis covector `e_k*`.
    pub fn mc_form(&self, k: u8) -> KForm {
        let mut out = KForm::zero(self.dim, 2);
        for ((i, j), coeffs) in &self.constants {
            let c = &coeffs[k as usize - 1];
            if !c.is_zero() {
                out.add_signed_term(&[*i, *j], -c);
            }
        }
        out
    }

    /// Chevalley-Eilenberg differential, extended from the basis covectors as
    /// a degree +1 antiderivation. Coefficients (parameters) are constants on
    /// the algebra and pass through.
    pub fn ce_differential(&self, form: &KForm) -> Result<KForm> {
        if form.dim() != self.dim {
            return Err(Error::DimensionMismatch(form.dim(), self.dim));
        }
        let mut out = KForm::zero(self.dim, form.degree() + 1);
        for (idx, c) in form.terms() {
            for (t, &it) in idx.iter().enumerate() {
                let d_it = self.mc_form(it);
                for (pair, q) in d_it.terms() {
                    let mut indices: IndexTuple = Vec::with_capacity(idx.len() + 1);
                    indices.extend_from_slice(&idx[..t]);
                    indices.extend_from_slice(pair);
                    indices.extend_from_slice(&idx[t + 1..]);
                    let mut coeff = c * q;
                    if t % 2 == 1 {
                        coeff = -&coeff;
                    }
                    out.add_signed_term(&indices, coeff);
                }
            }
        }
        Ok(out)
    }

    /// Jacobi identity, checked symbolically in all parameters by direct
    /// triple brackets. On failure the report carries the first bad triple
    /// and its nonzero residual.
    pub fn jacobi_check(&self) -> JacobiReport {
        for i in 1..=self.dim as u8 {
            for j in i + 1..=self.dim as u8 {
                for k in j + 1..=self.dim as u8 {
                    let mut residual = vec![Poly::zero(); self.dim];
                    for (a, b, c) in [(i, j, k), (j, k, i), (k, i, j)] {
                        let inner = self.bracket_basis(a, b);
                        let mut unit = vec![Poly::zero(); self.dim];
                        unit[c as usize - 1] = Poly::one();
                        let term = self.bracket(&inner, &unit).expect("dims agree");
                        for (t, v) in term.into_iter().enumerate() {
                            residual[t] = &residual[t] + &v;
                        }
                    }
                    if residual.iter().any(|p| !p.is_zero()) {
                        return JacobiReport {
                            witness: Some(JacobiFailure { triple: (i, j, k), residual }),
                        };
                    }
                }
            }
        }
        JacobiReport { witness: None }
    }

    pub fn params(&self) -> &[String] {
        &self.params
    }

    fn params_in_constants(&self) -> BTreeSet<String> {
        let mut s = BTreeSet::new();
        for coeffs in self.constants.values() {
            for c in coeffs {
                s.extend(c.vars());
            }
        }
        s
    }

    pub fn is_constant(&self) -> bool {
        self.params_in_constants().is_empty()
    }

    pub fn require_constant(&self) -> Result<()> {
        let left = self.params_in_constants();
        if left.is_empty() {
            Ok(())
        } else {
            Err(Error::UnsubstitutedParameters(
                left.into_iter().collect::<Vec<_>>().join(", "),
            ))
        }
    }

    /// Substitute rational values for (some) parameters.
    pub fn substitute(&self, vals: &BTreeMap<String, Rat>) -> LieAlgebra {
        let mut out = LieAlgebra::abelian(self.dim);
        for ((i, j), coeffs) in &self.constants {
            let coeffs: Vec<Poly> = coeffs.iter().map(|c| c.eval_partial(vals)).collect();
            out = out.with_bracket(*i, *j, coeffs);
        }
        out
    }

    /// `ad_{e_i}` as a matrix (columns are images of basis vectors); requires
    /// constant structure constants.
    pub fn ad_matrix(&self, i: u8) -> Result<Mat> {
        self.require_constant()?;
        let n = self.dim;
        let mut m = Mat::zeros(n, n);
        for j in 1..=n as u8 {
            let col = self.bracket_basis(i, j);
            for (k, c) in col.iter().enumerate() {
                m[(k, j as usize - 1)] = c.as_constant().expect("constant checked");
            }
        }
        Ok(m)
    }

    /// Trace of `ad_x` for each basis vector, symbolically in parameters.
    /// Unimodularity is the vanishing of all of them.
    pub fn unimodular_check(&self) -> UnimodularReport {
        let mut failures = Vec::new();
        for i in 1..=self.dim as u8 {
            let mut trace = Poly::zero();
            for j in 1..=self.dim as u8 {
                trace = &trace + &self.structure_constant(i, j, j);
            }
            if !trace.is_zero() {
                failures.push((i, trace));
            }
        }
        UnimodularReport { failures }
    }

    /// Enumerate the increasing k-tuples indexing the basis of `Lambda^k`.
    pub fn basis_tuples(&self, k: usize) -> Vec<IndexTuple> {
        fn go(start: u8, n: u8, k: usize, cur: &mut IndexTuple, out: &mut Vec<IndexTuple>) {
            if k == 0 {
                out.push(cur.clone());
                return;
            }
            for i in start..=n {
                cur.push(i);
                go(i + 1, n, k - 1, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        go(1, self.dim as u8, k, &mut Vec::new(), &mut out);
        out
    }

    /// Matrix of `d : Lambda^k -> Lambda^{k+1}` in the increasing-tuple bases.
    pub fn d_matrix(&self, k: usize) -> Result<Mat> {
        self.require_constant()?;
        let dom = self.basis_tuples(k);
        let cod = self.basis_tuples(k + 1);
        let index: BTreeMap<IndexTuple, usize> =
            cod.iter().cloned().enumerate().map(|(p, t)| (t, p)).collect();
        let mut m = Mat::zeros(cod.len(), dom.len());
        for (col, tuple) in dom.iter().enumerate() {
            let d = self.ce_differential(&KForm::basis(self.dim, tuple))?;
            for (idx, c) in d.terms() {
                m[(index[idx], col)] = c.as_constant().expect("constant checked");
            }
        }
        Ok(m)
    }

    /// `dim H^k` over the rationals; parameters must be substituted first.
    pub fn cohomology_dim(&self, k: usize) -> Result<usize> {
        self.require_constant()?;
        if k > self.dim {
            return Ok(0);
        }
        let dim_ck = self.basis_tuples(k).len();
        let rank_dk = if k == self.dim { 0 } else { self.d_matrix(k)?.rank() };
        let rank_prev = if k == 0 { 0 } else { self.d_matrix(k - 1)?.rank() };
        Ok(dim_ck - rank_dk - rank_prev)
    }

    /// Killing form `K(x,y) = tr(ad_x ad_y)` with its inertia `(pos, neg)`.
    pub fn killing_form(&self) -> Result<(Mat, (usize, usize))> {
        self.require_constant()?;
        let n = self.dim;
        let ads: Vec<Mat> = (1..=n as u8).map(|i| self.ad_matrix(i)).collect::<Result<_>>()?;
        let mut k = Mat::zeros(n, n);
        for a in 0..n {
            for b in a..n {
                let prod = ads[a].matmul(&ads[b]);
                let mut tr = int(0);
                for i in 0..n {
                    tr += prod[(i, i)].clone();
                }
                k[(a, b)] = tr.clone();
                k[(b, a)] = tr;
            }
        }
        let sig = k.signature();
        Ok((k, sig))
    }

    /// Dimension of the coadjoint-orbit tangent space at the covector `f`:
    /// the rank of `{ f o ad_X : X basis }`.
    pub fn coadjoint_tangent_dim(&self, f: &[Rat]) -> Result<usize> {
        self.require_constant()?;
        if f.len() != self.dim {
            return Err(Error::DimensionMismatch(f.len(), self.dim));
        }
        let n = self.dim;
        let mut rows = Vec::with_capacity(n);
        for i in 1..=n as u8 {
            let mut row = vec![int(0); n];
            for j in 1..=n as u8 {
                let mut v = int(0);
                for (k, c) in self.bracket_basis(i, j).iter().enumerate() {
                    v += c.as_constant().expect("constant checked") * f[k].clone();
                }
                row[j as usize - 1] = v;
            }
            rows.push(row);
        }
        Ok(Mat::from_rows(rows).rank())
    }

    /// The derived algebra `[g, g]` as a subspace.
    pub fn derived_subspace(&self) -> Result<Subspace> {
        self.require_constant()?;
        let vectors: Vec<Vec<Rat>> = self
            .constants
            .values()
            .map(|coeffs| coeffs.iter().map(|c| c.as_constant().expect("constant checked")).collect())
            .collect();
        Ok(Subspace::from_span(self.dim, &vectors))
    }

    pub fn derived_dim(&self) -> Result<usize> {
        Ok(self.derived_subspace()?.dim())
    }

    pub fn is_perfect(&self) -> Result<bool> {
        Ok(self.derived_dim()? == self.dim)
    }

    /// Transport the structure constants to the basis whose vectors are the
    /// columns of `p` (in old coordinates). Jacobi validity is preserved.
    pub fn change_basis(&self, p: &Mat) -> Result<LieAlgebra> {
        self.require_constant()?;
        let n = self.dim;
        if p.rows != n || p.cols != n {
            return Err(Error::DimensionMismatch(p.rows, n));
        }
        let inv = p.inverse().ok_or(Error::Degenerate)?;
        let mut out = LieAlgebra::abelian(n);
        for a in 1..=n as u8 {
            for b in a + 1..=n as u8 {
                let fa: Vec<Rat> = (0..n).map(|i| p[(i, a as usize - 1)].clone()).collect();
                let fb: Vec<Rat> = (0..n).map(|i| p[(i, b as usize - 1)].clone()).collect();
                let old = self.bracket_rat(&fa, &fb)?;
                let old: Vec<Rat> = old.iter().map(|q| q.as_constant().unwrap()).collect();
                let new = inv.apply(&old);
                out = out.with_bracket(a, b, new.into_iter().map(Poly::constant).collect());
            }
        }
        Ok(out)
    }

    /// Lower central series classes: returns the nilpotency class, or `None`
    /// if the series stabilizes above zero.
    pub fn nilpotency_class(&self) -> Result<Option<usize>> {
        self.require_constant()?;
        let mut current = Subspace::from_span(
            self.dim,
            &(0..self.dim).map(|i| unit_vec(self.dim, i)).collect::<Vec<_>>(),
        );
        let mut class = 0;
        loop {
            if current.dim() == 0 {
                return Ok(Some(class));
            }
            let mut next_gens = Vec::new();
            for i in 1..=self.dim as u8 {
                for b in current.basis() {
                    let mut unit = vec![int(0); self.dim];
                    unit[i as usize - 1] = int(1);
                    let v = self.bracket_rat(&unit, b).expect("dims agree");
                    next_gens.push(v.iter().map(|p| p.as_constant().unwrap()).collect());
                }
            }
            let next = Subspace::from_span(self.dim, &next_gens);
            if next.dim() == current.dim() {
                return Ok(None);
            }
            current = next;
            class += 1;
        }
    }

    pub fn is_nilpotent(&self) -> Result<bool> {
        Ok(self.nilpotency_class()?.is_some())
    }

    /// Canonical bracket-dialect rendering, one line per nonzero bracket.
    pub fn render_brackets(&self) -> Vec<String> {
        self.constants
            .iter()
            .map(|((i, j), coeffs)| {
                let mut rhs = KForm::zero(self.dim, 1);
                for (k, c) in coeffs.iter().enumerate() {
                    rhs.add_signed_term(&[k as u8 + 1], c.clone());
                }
                let rhs = rhs.to_string().replace('*', "");
                format!("[e{i}, e{j}] = {rhs}")
            })
            .collect()
    }
}

fn unit_vec(n: usize, i: usize) -> Vec<Rat> {
    let mut v = vec![int(0); n];
    v[i] = int(1);
    v
}

#[derive(Clone, Debug)]
pub struct JacobiFailure {
    pub triple: (u8, u8, u8),
    pub residual: Vec<Poly>,
}

#[derive(Clone, Debug)]
pub struct JacobiReport {
    pub witness: Option<JacobiFailure>,
}

impl JacobiReport {
    pub fn passed(&self) -> bool {
        self.witness.is_none()
    }

    pub fn to_report(&self) -> Report {
        let mut r = Report::new("jacobi");
        match &self.witness {
            None => r.push("jacobi", true, "Jacobi identity holds symbolically"),
            Some(f) => {
                let residual: Vec<String> = f
                    .residual
                    .iter()
                    .enumerate()
                    .filter(|(_, p)| !p.is_zero())
                    .map(|(k, p)| format!("({}) e{}", p, k + 1))
                    .collect();
                r.push_witness(
                    "jacobi",
                    false,
                    format!("Jacobi fails on (e{}, e{}, e{})", f.triple.0, f.triple.1, f.triple.2),
                    residual.join(" + "),
                );
            }
        }
        r
    }
}

#[derive(Clone, Debug)]
pub struct UnimodularReport {
    /// Basis index together with the nonzero `tr(ad_{e_i})`.
    pub failures: Vec<(u8, Poly)>,
}

impl UnimodularReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn to_report(&self) -> Report {
        let mut r = Report::new("unimodular");
        if self.failures.is_empty() {
            r.push("unimodular", true, "tr(ad_x) = 0 for every basis vector");
        } else {
            let (i, tr) = &self.failures[0];
            r.push_witness(
                "unimodular",
                false,
                format!("tr(ad_e{i}) = {tr}"),
                format!("e{i}"),
            );
        }
        r
    }
}
