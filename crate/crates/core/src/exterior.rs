//! Sparse exterior algebra on the dual of an n-dimensional space.
//!
//! A `KForm` is a constant-coefficient k-form: a sparse map from strictly
//! increasing index tuples (1-based) to polynomial coefficients. Coefficients
//! may involve named parameters but never the underlying space, so the wedge
//! needs only the Koszul sign bookkeeping.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::One;

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::scalar::{int, Rat};

pub type IndexTuple = Vec<u8>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KForm {
    dim: usize,
    degree: usize,
    terms: BTreeMap<IndexTuple, Poly>,
}

/// Merge two strictly increasing tuples, counting transpositions.
/// Returns `None` on a repeated index (the wedge vanishes).
pub(crate) fn merge_indices(a: &[u8], b: &[u8]) -> Option<(IndexTuple, i32)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let mut inversions = 0usize;
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        if a[i] == b[j] {
            return None;
        }
        if a[i] < b[j] {
            out.push(a[i]);
            i += 1;
        } else {
            // b[j] jumps over the remaining entries of a
            inversions += a.len() - i;
            out.push(b[j]);
            j += 1;
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    Some((out, if inversions.is_multiple_of(2) { 1 } else { -1 }))
}

impl KForm {
    pub fn zero(dim: usize, degree: usize) -> Self {
        KForm { dim, degree, terms: BTreeMap::new() }
    }

    /// Degree-0 form holding a single polynomial.
    pub fn scalar(dim: usize, value: Poly) -> Self {
        let mut f = KForm::zero(dim, 0);
        f.add_term(Vec::new(), value);
        f
    }

    /// The basis form `e_{i1}* ^ ... ^ e_{ik}*`; indices are normalized with
    /// the Koszul sign and must lie in `1..=dim`.
    pub fn basis(dim: usize, indices: &[u8]) -> Self {
        let mut f = KForm::zero(dim, indices.len());
        f.add_signed_term(indices, Poly::one());
        f
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&IndexTuple, &Poly)> {
        self.terms.iter()
    }

    pub fn coeff(&self, indices: &[u8]) -> Poly {
        self.terms.get(indices).cloned().unwrap_or_else(Poly::zero)
    }

    /// Coefficient of the top form `e_1*^...^e_n*`; only defined when
    /// `degree == dim`.
    pub fn top_coefficient(&self) -> Poly {
        assert_eq!(self.degree, self.dim, "not a top-degree form");
        let full: IndexTuple = (1..=self.dim as u8).collect();
        self.coeff(&full)
    }

    fn add_term(&mut self, idx: IndexTuple, c: Poly) {
        if c.is_zero() || self.degree > self.dim {
            return;
        }
        debug_assert_eq!(idx.len(), self.degree);
        debug_assert!(idx.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(idx.iter().all(|&i| i >= 1 && i as usize <= self.dim));
        use std::collections::btree_map::Entry;
        match self.terms.entry(idx) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let sum = &e.get().clone() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    /// Insert a term whose indices may be unsorted; sorts and applies the sign.
    pub fn add_signed_term(&mut self, indices: &[u8], c: Poly) {
        let mut idx = indices.to_vec();
        let mut sign = 1i32;
        // insertion sort with transposition count; duplicates kill the term
        for i in 1..idx.len() {
            let mut j = i;
            while j > 0 && idx[j - 1] > idx[j] {
                idx.swap(j - 1, j);
                sign = -sign;
                j -= 1;
            }
        }
        if idx.windows(2).any(|w| w[0] == w[1]) {
            return;
        }
        let signed = if sign == 1 { c } else { -&c };
        self.add_term(idx, signed);
    }

    pub fn add(&self, other: &KForm) -> Result<KForm> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(self.dim, other.dim));
        }
        if self.degree != other.degree && !self.is_zero() && !other.is_zero() {
            return Err(Error::BadDegree(format!(
                "cannot add degree {} to degree {}",
                self.degree, other.degree
            )));
        }
        let mut out = if self.is_zero() { other.clone() } else { self.clone() };
        if !self.is_zero() {
            for (idx, c) in &other.terms {
                out.add_term(idx.clone(), c.clone());
            }
        }
        Ok(out)
    }

    pub fn sub(&self, other: &KForm) -> Result<KForm> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> KForm {
        KForm {
            dim: self.dim,
            degree: self.degree,
            terms: self.terms.iter().map(|(i, c)| (i.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, c: &Poly) -> KForm {
        if c.is_zero() {
            return KForm::zero(self.dim, self.degree);
        }
        let mut out = KForm::zero(self.dim, self.degree);
        for (idx, v) in &self.terms {
            out.add_term(idx.clone(), v * c);
        }
        out
    }

    pub fn scale_rat(&self, c: &Rat) -> KForm {
        self.scale(&Poly::constant(c.clone()))
    }

    /// Exterior product. Graded-commutative, bilinear; the zero form of
    /// the appropriate degree when `deg a + deg b > dim`.
    pub fn wedge(&self, other: &KForm) -> Result<KForm> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(self.dim, other.dim));
        }
        let degree = self.degree + other.degree;
        let mut out = KForm::zero(self.dim, degree);
        if degree > self.dim {
            return Ok(out);
        }
        for (ia, ca) in &self.terms {
            for (ib, cb) in &other.terms {
                if let Some((idx, sign)) = merge_indices(ia, ib) {
                    let mut c = ca * cb;
                    if sign < 0 {
                        c = -&c;
                    }
                    out.add_term(idx, c);
                }
            }
        }
        Ok(out)
    }

    /// Wedge power `self^k` (`k = 0` gives the scalar 1).
    pub fn wedge_pow(&self, k: usize) -> Result<KForm> {
        let mut acc = KForm::scalar(self.dim, Poly::one());
        for _ in 0..k {
            acc = acc.wedge(self)?;
        }
        Ok(acc)
    }

    /// Interior product `i_v` with a vector given by coefficients.
    pub fn interior(&self, v: &[Poly]) -> Result<KForm> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch(v.len(), self.dim));
        }
        if self.degree == 0 {
            return Err(Error::BadDegree("interior product of a 0-form".into()));
        }
        let mut out = KForm::zero(self.dim, self.degree - 1);
        for (idx, c) in &self.terms {
            for (t, &i) in idx.iter().enumerate() {
                let vi = &v[i as usize - 1];
                if vi.is_zero() {
                    continue;
                }
                let mut rest = idx.clone();
                rest.remove(t);
                let mut coeff = c * vi;
                if t % 2 == 1 {
                    coeff = -&coeff;
                }
                out.add_term(rest, coeff);
            }
        }
        Ok(out)
    }

    /// Antisymmetric coefficient matrix of a 2-form: `M[i][j] = w(e_i, e_j)`.
    pub fn coefficient_matrix(&self) -> Vec<Vec<Poly>> {
        assert_eq!(self.degree, 2, "coefficient matrix needs a 2-form");
        let n = self.dim;
        let mut m = vec![vec![Poly::zero(); n]; n];
        for (idx, c) in &self.terms {
            let (i, j) = (idx[0] as usize - 1, idx[1] as usize - 1);
            m[i][j] = c.clone();
            m[j][i] = -c;
        }
        m
    }

    /// Pfaffian w.r.t. a volume form: the polynomial `Pf` with
    /// `w^m = m! * Pf * volume` (dim = 2m).
    pub fn pfaffian(&self, volume: &KForm) -> Result<Poly> {
        if !self.dim.is_multiple_of(2) {
            return Err(Error::OddDimension(self.dim));
        }
        if self.degree != 2 {
            return Err(Error::BadDegree(format!("Pfaffian of a degree-{} form", self.degree)));
        }
        if volume.dim != self.dim {
            return Err(Error::DimensionMismatch(volume.dim, self.dim));
        }
        if volume.degree != volume.dim || volume.is_zero() {
            return Err(Error::ZeroForm);
        }
        let m = self.dim / 2;
        let power = self.wedge_pow(m)?;
        let mut mfact = Rat::one();
        for i in 2..=m {
            mfact *= int(i as i64);
        }
        let denom = volume.top_coefficient().scale(&mfact);
        power
            .top_coefficient()
            .div_exact(&denom)
            .ok_or_else(|| Error::Unsupported("Pfaffian is not polynomial w.r.t. this volume".into()))
    }

    /// Substitute parameter values into every coefficient.
    pub fn eval_params(&self, vals: &BTreeMap<String, Rat>) -> KForm {
        let mut out = KForm::zero(self.dim, self.degree);
        for (idx, c) in &self.terms {
            out.add_term(idx.clone(), c.eval_partial(vals));
        }
        out
    }

    /// Evaluate on `degree` many vectors with polynomial coefficients.
    pub fn eval_on(&self, vectors: &[Vec<Poly>]) -> Poly {
        assert_eq!(vectors.len(), self.degree, "wrong number of arguments");
        let mut total = Poly::zero();
        for (idx, c) in &self.terms {
            // minor determinant of the selected coordinates
            let k = idx.len();
            let entry = |r: usize, cidx: usize| vectors[cidx][idx[r] as usize - 1].clone();
            let det = poly_det(k, &entry);
            total = &total + &(c * &det);
        }
        total
    }

    /// All parameter names appearing in any coefficient.
    pub fn params(&self) -> std::collections::BTreeSet<String> {
        let mut s = std::collections::BTreeSet::new();
        for c in self.terms.values() {
            s.extend(c.vars());
        }
        s
    }
}

/// Determinant of a small matrix of polynomials by cofactor expansion.
fn poly_det(n: usize, entry: &dyn Fn(usize, usize) -> Poly) -> Poly {
    fn go(rows: &[usize], cols: &[usize], entry: &dyn Fn(usize, usize) -> Poly) -> Poly {
        if rows.is_empty() {
            return Poly::one();
        }
        let r = rows[0];
        let rest: Vec<usize> = rows[1..].to_vec();
        let mut acc = Poly::zero();
        for (pos, &c) in cols.iter().enumerate() {
            let e = entry(r, c);
            if e.is_zero() {
                continue;
            }
            let sub_cols: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
            let minor = go(&rest, &sub_cols, entry);
            let signed = if pos % 2 == 0 { &e * &minor } else { -&(&e * &minor) };
            acc = &acc + &signed;
        }
        acc
    }
    let idx: Vec<usize> = (0..n).collect();
    go(&idx, &idx, entry)
}

/// Shared term renderer for constant-coefficient and coordinate forms.
pub(crate) fn render_form<L: Fn(u8) -> String>(
    terms: &BTreeMap<IndexTuple, Poly>,
    degree: usize,
    label: L,
) -> String {
    if terms.is_empty() {
        return "0".to_string();
    }
    if degree == 0 {
        return terms.values().next().unwrap().to_string();
    }
    let mut out = String::new();
    for (i, (idx, c)) in terms.iter().enumerate() {
        let basis: Vec<String> = idx.iter().map(|&k| label(k)).collect();
        let basis = basis.join("^");
        let (sign_neg, body) = render_coeff(c, &basis);
        if i == 0 {
            if sign_neg {
                out.push('-');
            }
        } else {
            out.push_str(if sign_neg { " - " } else { " + " });
        }
        out.push_str(&body);
    }
    out
}

/// Renders `c * basis`, splitting off a leading minus when that reads better.
fn render_coeff(c: &Poly, basis: &str) -> (bool, String) {
    if let Some(r) = c.as_constant() {
        let neg = crate::scalar::signum(&r) < 0;
        let abs = if neg { -r } else { r };
        if abs.is_one() {
            return (neg, basis.to_string());
        }
        return (neg, format!("{} {}", crate::scalar::format_rat(&abs), basis));
    }
    if c.num_terms() == 1 {
        let s = c.to_string();
        if let Some(stripped) = s.strip_prefix('-') {
            return (true, format!("{} {}", stripped, basis));
        }
        return (false, format!("{s} {basis}"));
    }
    (false, format!("({c}) {basis}"))
}

impl fmt::Display for KForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", render_form(&self.terms, self.degree, |k| format!("e{k}*")))
    }
}
