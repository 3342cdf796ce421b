//! Left-invariant frames of nilpotent Lie algebras in exponential
//! coordinates.
//!
//! In exponential coordinates of the first kind, the left-invariant vector
//! field through `x` with value `eps` at the identity is
//! `sum_k (B_k^+ / k!) (ad_x)^k eps`, the Bernoulli series of `z/(1-e^-z)`.
//! For a nilpotent algebra of class `c` the series terminates at `k = c-1`,
//! so the fields have polynomial coefficients and everything stays exact.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::liealg::LieAlgebra;
use crate::matrix::Mat;
use crate::monge::polyform::PolyForm;
use crate::poly::Poly;
use crate::scalar::{int, Rat};

/// Cap on the nilpotency class accepted by the frame construction.
pub const NILPOTENCY_CLASS_CAP: usize = 7;

/// Bernoulli numbers in the plus convention (`B_1 = +1/2`), the Taylor
/// coefficients of `z/(1-e^-z)` times `k!`.
pub fn bernoulli_plus(upto: usize) -> Vec<Rat> {
    // minus convention first: sum_{j=0}^{m} C(m+1, j) B_j = 0 for m >= 1
    let mut b = vec![Rat::one()];
    for m in 1..=upto {
        let mut acc = int(0);
        for (j, bj) in b.iter().enumerate() {
            acc += binomial(m + 1, j) * bj.clone();
        }
        b.push(-acc / int((m + 1) as i64));
    }
    b.iter()
        .enumerate()
        .map(|(k, v)| if k % 2 == 1 { -v.clone() } else { v.clone() })
        .collect()
}

fn binomial(n: usize, k: usize) -> Rat {
    let mut r = Rat::one();
    for i in 0..k {
        r = r * int((n - i) as i64) / int((i + 1) as i64);
    }
    r
}

/// A left-invariant frame in exponential coordinates together with its dual
/// coframe.
#[derive(Clone, Debug)]
pub struct InvariantFrame {
    pub algebra: LieAlgebra,
    pub class: usize,
    /// Chart variables `x1..xn`.
    pub vars: Vec<String>,
    /// `matrix[k][j]`: the `d/dx_{k+1}` coefficient of the field extending
    /// `e_{j+1}` (columns are fields).
    pub matrix: Vec<Vec<Poly>>,
}

impl InvariantFrame {
    /// The field extending `e_j` (1-based), as coefficients over the
    /// coordinate partials.
    pub fn field(&self, j: u8) -> Vec<Poly> {
        (0..self.algebra.dim()).map(|k| self.matrix[k][j as usize - 1].clone()).collect()
    }

    pub fn field_string(&self, j: u8) -> String {
        let coeffs = self.field(j);
        let n = coeffs.len();
        let mut order: Vec<usize> = Vec::with_capacity(n);
        order.push(j as usize - 1);
        order.extend((0..n).filter(|&k| k != j as usize - 1));
        let mut out = String::new();
        for k in order {
            let c = &coeffs[k];
            if c.is_zero() {
                continue;
            }
            let basis = format!("d/d{}", self.vars[k]);
            let rendered = render_field_term(c, &basis);
            if out.is_empty() {
                out.push_str(&rendered);
            } else if let Some(stripped) = rendered.strip_prefix('-') {
                out.push_str(&format!(" - {stripped}"));
            } else {
                out.push_str(&format!(" + {rendered}"));
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

fn render_field_term(c: &Poly, basis: &str) -> String {
    if let Some(r) = c.as_constant() {
        if r == int(1) {
            return basis.to_string();
        }
        if r == int(-1) {
            return format!("-{basis}");
        }
        return format!("{} {}", crate::scalar::format_rat(&r), basis);
    }
    if c.num_terms() == 1 {
        return format!("{c} {basis}");
    }
    format!("({c}) {basis}")
}

/// `ad_x` for the generic point `x = sum x_i e_i`, an n-by-n matrix of
/// linear polynomials.
fn generic_ad(g: &LieAlgebra, vars: &[String]) -> Vec<Vec<Poly>> {
    let n = g.dim();
    let mut m = vec![vec![Poly::zero(); n]; n];
    for j in 1..=n as u8 {
        for i in 1..=n as u8 {
            let xi = Poly::var(&vars[i as usize - 1]);
            for (k, c) in g.bracket_basis(i, j).iter().enumerate() {
                if !c.is_zero() {
                    m[k][j as usize - 1] = &m[k][j as usize - 1] + &(c * &xi);
                }
            }
        }
    }
    m
}

fn mat_mul(a: &[Vec<Poly>], b: &[Vec<Poly>]) -> Vec<Vec<Poly>> {
    let n = a.len();
    let mut out = vec![vec![Poly::zero(); n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..n {
                if b[k][j].is_zero() {
                    continue;
                }
                out[i][j] = &out[i][j] + &(&a[i][k] * &b[k][j]);
            }
        }
    }
    out
}

fn mat_is_zero(a: &[Vec<Poly>]) -> bool {
    a.iter().all(|row| row.iter().all(|p| p.is_zero()))
}

/// Left-invariant frame fields of a nilpotent algebra, truncating the
/// Bernoulli series at the verified nilpotency class.
pub fn left_invariant_frame(g: &LieAlgebra) -> Result<InvariantFrame> {
    g.require_constant()?;
    let class = g.nilpotency_class()?.ok_or(Error::NotNilpotent)?;
    if class > NILPOTENCY_CLASS_CAP {
        return Err(Error::ClassTooLarge(class, NILPOTENCY_CLASS_CAP));
    }
    let n = g.dim();
    let vars: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    let ad = generic_ad(g, &vars);
    let bern = bernoulli_plus(class.max(1) - 1);
    let mut matrix = vec![vec![Poly::zero(); n]; n];
    for (i, row) in matrix.iter_mut().enumerate() {
        row[i] = Poly::one();
    }
    let mut power = ad.clone();
    let mut factorial = Rat::one();
    for (k, b) in bern.iter().enumerate().take(class).skip(1) {
        factorial *= int(k as i64);
        let coeff = b.clone() / factorial.clone();
        if !coeff.is_zero() {
            let cp = Poly::constant(coeff);
            for i in 0..n {
                for j in 0..n {
                    if !power[i][j].is_zero() {
                        matrix[i][j] = &matrix[i][j] + &(&power[i][j] * &cp);
                    }
                }
            }
        }
        if k + 1 < class {
            power = mat_mul(&power, &ad);
        }
    }
    // (ad_x)^class vanishes for a class-c nilpotent algebra
    debug_assert!(mat_is_zero(&mat_mul(&power, &ad)) || class <= 1);
    Ok(InvariantFrame { algebra: g.clone(), class, vars, matrix })
}

/// Dual coframe: the exact polynomial inverse-transpose of the frame matrix,
/// computed by the terminating Neumann series of its unipotent part.
pub fn dual_coframe(frame: &InvariantFrame) -> Result<Vec<PolyForm>> {
    let n = frame.algebra.dim();
    // N = F - I must be nilpotent for the series to terminate
    let mut nil = frame.matrix.clone();
    for (i, row) in nil.iter_mut().enumerate() {
        row[i] = &row[i] - &Poly::one();
    }
    let mut inverse = vec![vec![Poly::zero(); n]; n];
    for (i, row) in inverse.iter_mut().enumerate() {
        row[i] = Poly::one();
    }
    let mut power = nil.clone();
    let mut sign = -1i32;
    let mut steps = 0;
    while !mat_is_zero(&power) {
        steps += 1;
        if steps > n {
            return Err(Error::NotUnipotent);
        }
        for (irow, prow) in inverse.iter_mut().zip(&power) {
            for (entry, p) in irow.iter_mut().zip(prow) {
                if !p.is_zero() {
                    *entry = if sign < 0 { &*entry - p } else { &*entry + p };
                }
            }
        }
        power = mat_mul(&power, &nil);
        sign = -sign;
    }
    // pairing <coframe_i, field_j> = delta_ij, verified exactly
    let product = mat_mul(&inverse, &frame.matrix);
    for (i, row) in product.iter().enumerate() {
        for (j, p) in row.iter().enumerate() {
            let expected = if i == j { Poly::one() } else { Poly::zero() };
            if *p != expected {
                return Err(Error::NotUnipotent);
            }
        }
    }
    Ok(inverse
        .iter()
        .map(|row| {
            let mut f = PolyForm::zero(&frame.vars, 1);
            for (j, entry) in row.iter().enumerate() {
                f.add_signed_term(&[j as u8 + 1], entry.clone());
            }
            f
        })
        .collect())
}

/// Round-trip gate: the coframe must satisfy the structure equations
/// `d theta^k = -sum_{i<j} c^k_ij theta^i ^ theta^j` symbolically.
pub fn coframe_satisfies_structure_equations(
    g: &LieAlgebra,
    coframe: &[PolyForm],
) -> Result<bool> {
    g.require_constant()?;
    let n = g.dim();
    for k in 1..=n as u8 {
        let lhs = coframe[k as usize - 1].exterior_derivative();
        let mut rhs = PolyForm::zero(coframe[0].vars(), 2);
        for i in 1..=n as u8 {
            for j in i + 1..=n as u8 {
                let c = g.structure_constant(i, j, k);
                if c.is_zero() {
                    continue;
                }
                let wedge = coframe[i as usize - 1].wedge(&coframe[j as usize - 1])?;
                rhs = rhs.sub(&wedge.scale(&c))?;
            }
        }
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Convenience wrapper for `ad`-style matrices over the rationals.
pub fn frame_matrix_at_zero(frame: &InvariantFrame) -> Mat {
    let n = frame.algebra.dim();
    let zero: std::collections::BTreeMap<String, Rat> =
        frame.vars.iter().map(|v| (v.clone(), int(0))).collect();
    let mut m = Mat::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            m[(i, j)] = frame.matrix[i][j].eval(&zero).expect("polynomial frame");
        }
    }
    m
}
