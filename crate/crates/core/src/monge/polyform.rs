//! Differential forms on a coordinate chart with polynomial coefficients.
//!
//! Same sparse increasing-index layout as `KForm`, but the coefficients live
//! in the chart variables and there is a genuine exterior derivative and an
//! exact pullback along polynomial maps.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::exterior::{merge_indices, render_form, IndexTuple};
use crate::poly::Poly;

#[derive(Clone, Debug)]
pub struct PolyForm {
    vars: Vec<String>,
    degree: usize,
    terms: BTreeMap<IndexTuple, Poly>,
}

impl PartialEq for PolyForm {
    fn eq(&self, other: &Self) -> bool {
        self.vars == other.vars && self.degree == other.degree && self.terms == other.terms
    }
}

impl Eq for PolyForm {}

impl PolyForm {
    pub fn zero(vars: &[String], degree: usize) -> Self {
        PolyForm { vars: vars.to_vec(), degree, terms: BTreeMap::new() }
    }

    pub fn scalar(vars: &[String], value: Poly) -> Self {
        let mut f = PolyForm::zero(vars, 0);
        f.add_term(Vec::new(), value);
        f
    }

    /// `c dz_{i1} ^ ... ^ dz_{ik}` with 1-based indices into `vars`.
    pub fn term(vars: &[String], indices: &[u8], c: Poly) -> Self {
        let mut f = PolyForm::zero(vars, indices.len());
        f.add_signed_term(indices, c);
        f
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
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

    fn dim(&self) -> usize {
        self.vars.len()
    }

    fn add_term(&mut self, idx: IndexTuple, c: Poly) {
        if c.is_zero() || self.degree > self.dim() {
            return;
        }
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

    pub fn add_signed_term(&mut self, indices: &[u8], c: Poly) {
        let mut idx = indices.to_vec();
        let mut sign = 1i32;
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
        self.add_term(idx, if sign < 0 { -&c } else { c });
    }

    fn check_compatible(&self, other: &PolyForm) -> Result<()> {
        if self.vars != other.vars {
            return Err(Error::Unsupported(format!(
                "forms live on different charts: ({}) vs ({})",
                self.vars.join(", "),
                other.vars.join(", ")
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &PolyForm) -> Result<PolyForm> {
        self.check_compatible(other)?;
        if self.is_zero() {
            return Ok(other.clone());
        }
        if !other.is_zero() && self.degree != other.degree {
            return Err(Error::BadDegree(format!(
                "cannot add degree {} to degree {}",
                self.degree, other.degree
            )));
        }
        let mut out = self.clone();
        for (idx, c) in &other.terms {
            out.add_term(idx.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &PolyForm) -> Result<PolyForm> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> PolyForm {
        PolyForm {
            vars: self.vars.clone(),
            degree: self.degree,
            terms: self.terms.iter().map(|(i, c)| (i.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, c: &Poly) -> PolyForm {
        let mut out = PolyForm::zero(&self.vars, self.degree);
        for (idx, v) in &self.terms {
            out.add_term(idx.clone(), v * c);
        }
        out
    }

    pub fn wedge(&self, other: &PolyForm) -> Result<PolyForm> {
        self.check_compatible(other)?;
        let degree = self.degree + other.degree;
        let mut out = PolyForm::zero(&self.vars, degree);
        if degree > self.dim() {
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

    /// Coordinate exterior derivative: `d(c dz_I) = sum_j (dc/dz_j) dz_j ^ dz_I`.
    pub fn exterior_derivative(&self) -> PolyForm {
        let mut out = PolyForm::zero(&self.vars, self.degree + 1);
        for (idx, c) in &self.terms {
            for (j, var) in self.vars.iter().enumerate() {
                let dc = c.partial(var);
                if dc.is_zero() {
                    continue;
                }
                let mut indices = Vec::with_capacity(idx.len() + 1);
                indices.push(j as u8 + 1);
                indices.extend_from_slice(idx);
                out.add_signed_term(&indices, dc);
            }
        }
        out
    }

    /// Exact pullback along the polynomial map sending each of the current
    /// variables to an expression in `new_vars`. Coefficients are composed
    /// and each differential is expanded through the Jacobian.
    pub fn pullback(
        &self,
        new_vars: &[String],
        map: &BTreeMap<String, Poly>,
    ) -> Result<PolyForm> {
        for v in &self.vars {
            if !map.contains_key(v) {
                return Err(Error::Unsupported(format!("chart does not cover variable '{v}'")));
            }
        }
        // differentials of the substituted variables
        let d_images: Vec<PolyForm> = self
            .vars
            .iter()
            .map(|v| {
                let image = &map[v];
                let mut f = PolyForm::zero(new_vars, 1);
                for (j, nv) in new_vars.iter().enumerate() {
                    f.add_signed_term(&[j as u8 + 1], image.partial(nv));
                }
                f
            })
            .collect();
        let mut out = PolyForm::zero(new_vars, self.degree);
        for (idx, c) in &self.terms {
            let mut acc = PolyForm::scalar(new_vars, c.subst(map));
            for &i in idx {
                acc = acc.wedge(&d_images[i as usize - 1])?;
            }
            out = out.add(&acc)?;
        }
        Ok(out)
    }
}

impl fmt::Display for PolyForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vars = &self.vars;
        write!(
            f,
            "{}",
            render_form(&self.terms, self.degree, |k| format!("d{}", vars[k as usize - 1]))
        )
    }
}
