//! Sparse multivariate polynomials over the rationals.
//!
//! Indeterminates are referenced by name. The same type carries classification
//! parameters (`l`, `k`, `n1`, `n2`), chart coordinates (`x1`..`x4`, `p1`,
//! `q1`, ...) and jet variables (`u11`, ...), so everything downstream shares
//! one arithmetic.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::scalar::{format_rat, int, Rat};

/// Exponent map, no zero exponents stored.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial(BTreeMap<String, u32>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(BTreeMap::new())
    }

    pub fn var(name: &str, exp: u32) -> Self {
        let mut m = BTreeMap::new();
        if exp > 0 {
            m.insert(name.to_string(), exp);
        }
        Monomial(m)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total_degree(&self) -> u32 {
        self.0.values().sum()
    }

    pub fn degree_in(&self, name: &str) -> u32 {
        self.0.get(name).copied().unwrap_or(0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut m = self.0.clone();
        for (v, e) in &other.0 {
            *m.entry(v.clone()).or_insert(0) += e;
        }
        Monomial(m)
    }

    /// Exact quotient, or `None` when some exponent would go negative.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut m = self.0.clone();
        for (v, e) in &other.0 {
            let cur = m.get_mut(v)?;
            if *cur < *e {
                return None;
            }
            *cur -= e;
            if *cur == 0 {
                m.remove(v);
            }
        }
        Some(Monomial(m))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &u32)> {
        self.0.iter()
    }

    /// Graded lexicographic comparison (a genuine monomial order, so it is
    /// compatible with multiplication and safe for division).
    pub fn cmp_grlex(&self, other: &Monomial) -> std::cmp::Ordering {
        let by_degree = self.total_degree().cmp(&other.total_degree());
        if by_degree != std::cmp::Ordering::Equal {
            return by_degree;
        }
        let mut vars: Vec<&String> = self.0.keys().chain(other.0.keys()).collect();
        vars.sort();
        vars.dedup();
        for v in vars {
            // earlier variable with a higher exponent wins
            let by_exp = self.degree_in(v).cmp(&other.degree_in(v));
            if by_exp != std::cmp::Ordering::Equal {
                return by_exp;
            }
        }
        std::cmp::Ordering::Equal
    }

    /// Exponent vector under an explicit variable precedence; variables not
    /// listed are appended in name order so the comparison stays total.
    fn exponents_under(&self, order: &[&str]) -> Vec<u32> {
        let mut v: Vec<u32> = order.iter().map(|n| self.degree_in(n)).collect();
        for (name, e) in &self.0 {
            if !order.contains(&name.as_str()) {
                v.push(*e);
            }
        }
        v
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(v, e)| if *e == 1 { v.clone() } else { format!("{v}^{e}") })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// Sparse polynomial: monomial -> nonzero rational coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, Rat>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Poly::constant(int(1))
    }

    pub fn constant(r: Rat) -> Self {
        let mut terms = BTreeMap::new();
        if !r.is_zero() {
            terms.insert(Monomial::one(), r);
        }
        Poly { terms }
    }

    pub fn from_int(n: i64) -> Self {
        Poly::constant(int(n))
    }

    pub fn var(name: &str) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::var(name, 1), int(1));
        Poly { terms }
    }

    pub fn monomial(m: Monomial, c: Rat) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms.keys().next().unwrap().is_one())
    }

    /// The value when constant, `None` otherwise.
    pub fn as_constant(&self) -> Option<Rat> {
        if self.terms.is_empty() {
            return Some(int(0));
        }
        if self.is_constant() {
            return Some(self.terms.values().next().unwrap().clone());
        }
        None
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Rat {
        self.terms.get(m).cloned().unwrap_or_else(|| int(0))
    }

    pub fn vars(&self) -> BTreeSet<String> {
        let mut s = BTreeSet::new();
        for m in self.terms.keys() {
            for (v, _) in m.iter() {
                s.insert(v.clone());
            }
        }
        s
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.total_degree()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, name: &str) -> u32 {
        self.terms.keys().map(|m| m.degree_in(name)).max().unwrap_or(0)
    }

    fn insert_term(&mut self, m: Monomial, c: Rat) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let sum = e.get().clone() + c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn scale(&self, c: &Rat) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v.clone() * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Substitute polynomials for (some) variables.
    pub fn subst(&self, map: &BTreeMap<String, Poly>) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let mut term = Poly::constant(c.clone());
            for (v, e) in m.iter() {
                match map.get(v) {
                    Some(p) => term = &term * &p.pow(*e),
                    None => term = &term * &Poly::monomial(Monomial::var(v, *e), int(1)),
                }
            }
            out = &out + &term;
        }
        out
    }

    /// Substitute rational values for (some) variables.
    pub fn eval_partial(&self, vals: &BTreeMap<String, Rat>) -> Poly {
        let map: BTreeMap<String, Poly> =
            vals.iter().map(|(k, v)| (k.clone(), Poly::constant(v.clone()))).collect();
        self.subst(&map)
    }

    /// Full evaluation; `None` when a variable is left unassigned.
    pub fn eval(&self, vals: &BTreeMap<String, Rat>) -> Option<Rat> {
        self.eval_partial(vals).as_constant()
    }

    pub fn partial(&self, var: &str) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let e = m.degree_in(var);
            if e == 0 {
                continue;
            }
            let lower = m.div(&Monomial::var(var, 1)).unwrap();
            out.insert_term(lower, c.clone() * int(e as i64));
        }
        out
    }

    /// Exact polynomial division. Returns `None` when the division leaves a
    /// remainder (leading-term elimination under the default monomial order).
    pub fn div_exact(&self, divisor: &Poly) -> Option<Poly> {
        assert!(!divisor.is_zero(), "division by zero polynomial");
        if let Some(c) = divisor.as_constant() {
            return Some(self.scale(&(Rat::one() / c)));
        }
        let lead = |p: &Poly| {
            p.terms
                .iter()
                .max_by(|a, b| a.0.cmp_grlex(b.0))
                .map(|(m, c)| (m.clone(), c.clone()))
        };
        let (dm, dc) = lead(divisor)?;
        let mut rem = self.clone();
        let mut quot = Poly::zero();
        while !rem.is_zero() {
            let (lm, lc) = lead(&rem).unwrap();
            let qm = lm.div(&dm)?;
            let qc = lc / dc.clone();
            let qterm = Poly::monomial(qm, qc);
            quot = &quot + &qterm;
            rem = &rem - &(&qterm * divisor);
        }
        Some(quot)
    }

    /// Leading term under a lexicographic order given by variable precedence.
    pub fn leading_under(&self, order: &[&str]) -> Option<(&Monomial, &Rat)> {
        self.terms
            .iter()
            .max_by(|a, b| a.0.exponents_under(order).cmp(&b.0.exponents_under(order)))
    }

    /// Divide out the integer content and make the leading coefficient (under
    /// the given precedence) positive. Zero stays zero.
    pub fn normalize_content(&self, order: &[&str]) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut den_lcm = BigInt::one();
        let mut num_gcd = BigInt::zero();
        for c in self.terms.values() {
            den_lcm = den_lcm.lcm(c.denom());
            num_gcd = num_gcd.gcd(c.numer());
        }
        let mut factor = Rat::new(den_lcm, num_gcd);
        let lead = self.leading_under(order).unwrap().1;
        if (lead.clone() * factor.clone()).is_negative() {
            factor = -factor;
        }
        self.scale(&factor)
    }

    /// Renders terms sorted descending under the given variable precedence.
    pub fn display_under(&self, order: &[&str]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut entries: Vec<(&Monomial, &Rat)> = self.terms.iter().collect();
        entries.sort_by_key(|e| std::cmp::Reverse(e.0.exponents_under(order)));
        render_terms(&entries)
    }
}

fn render_terms(entries: &[(&Monomial, &Rat)]) -> String {
    let mut out = String::new();
    for (i, (m, c)) in entries.iter().enumerate() {
        let neg = c.is_negative();
        let abs = if neg { -(*c).clone() } else { (*c).clone() };
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if m.is_one() {
            out.push_str(&format_rat(&abs));
        } else if abs.is_one() {
            out.push_str(&m.to_string());
        } else {
            out.push_str(&format!("{} {}", format_rat(&abs), m));
        }
    }
    out
}

impl fmt::Display for Poly {
    /// Terms ascending by total degree, then monomial order.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut entries: Vec<(&Monomial, &Rat)> = self.terms.iter().collect();
        entries.sort_by_key(|(m, _)| (m.total_degree(), (*m).clone()));
        write!(f, "{}", render_terms(&entries))
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.insert_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.insert_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.insert_term(m1.mul(m2), c1.clone() * c2.clone());
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn p(s: &str) -> Poly {
        crate::parse::parse_poly(s).unwrap()
    }

    #[test]
    fn arithmetic_basics() {
        let x = Poly::var("x");
        let y = Poly::var("y");
        let sum = &x + &y;
        let prod = &sum * &sum;
        let expanded = &(&(&x * &x) + &(&x * &y).scale(&int(2))) + &(&y * &y);
        assert_eq!(prod, expanded);
        assert!((&prod - &prod).is_zero());
    }

    #[test]
    fn substitution_and_eval() {
        // (x + 2y)^2 at x = 1, y = 1/2 -> 4
        let q = (&Poly::var("x") + &Poly::var("y").scale(&int(2))).pow(2);
        let mut vals = BTreeMap::new();
        vals.insert("x".to_string(), int(1));
        vals.insert("y".to_string(), rat(1, 2));
        assert_eq!(q.eval(&vals), Some(int(4)));

        // composite substitution x -> y^2 keeps exactness
        let mut map = BTreeMap::new();
        map.insert("x".to_string(), Poly::var("y").pow(2));
        let r = Poly::var("x").subst(&map);
        assert_eq!(r, Poly::var("y").pow(2));
    }

    #[test]
    fn derivative() {
        let q = p("1/2 x^2 y + 3 y");
        assert_eq!(q.partial("x"), p("x y"));
        assert_eq!(q.partial("y"), p("1/2 x^2 + 3"));
        assert_eq!(q.partial("z"), Poly::zero());
    }

    #[test]
    fn exact_division() {
        let a = p("x^2 - y^2");
        let b = p("x - y");
        assert_eq!(a.div_exact(&b), Some(p("x + y")));
        assert_eq!(p("x^2 + 1").div_exact(&p("x")), None);
    }

    #[test]
    fn content_normalization() {
        let q = p("-2/3 u11 - 2/3 u22 + 2/3 u2");
        let n = q.normalize_content(&["u11", "u12", "u22", "u1", "u2", "q1", "q2"]);
        assert_eq!(n, p("u11 + u22 - u2"));
    }

    #[test]
    fn display_round_trip() {
        let q = p("x1 + 1/2 x4 + 1/2 x2 x3 + 1/4 x3^2 - 1/2 x4^2 - 1/6 x3^2 x4");
        assert_eq!(p(&q.to_string()), q);
        assert_eq!(Poly::zero().to_string(), "0");
    }
}
