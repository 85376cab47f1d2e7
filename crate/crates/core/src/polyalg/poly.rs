//! Sparse multivariate (Laurent) polynomials with exact coefficients.
//!
//! Terms live in a `BTreeMap` keyed by exponent vectors over a fixed,
//! ordered variable list, so the map order is lexicographic and two
//! polynomials are equal exactly when their stored terms are. Negative
//! exponents are allowed; the Bogoyavlensky right-hand sides need `b^-1`.

use std::collections::BTreeMap;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_complex::Complex64;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::polyalg::scalar::{Gaussian, Scalar, Q};

/// Ordered list of named phase-space coordinates.
#[derive(Debug, Clone)]
pub struct VarSpace {
    names: Vec<String>,
    index: HashMap<String, usize>,
}

pub type Vars = Arc<VarSpace>;

impl VarSpace {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Vars {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        let index = names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), i))
            .collect::<HashMap<_, _>>();
        assert_eq!(index.len(), names.len(), "duplicate variable names");
        Arc::new(Self { names, index })
    }

    /// `prefix1 .. prefixN`.
    pub fn indexed(prefix: &str, count: usize) -> Vec<String> {
        (1..=count).map(|i| format!("{prefix}{i}")).collect()
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    pub fn contains(&self, name: &str) -> bool {
        self.index.contains_key(name)
    }
}

impl PartialEq for VarSpace {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names
    }
}

impl Eq for VarSpace {}

fn same_space(a: &Vars, b: &Vars) -> bool {
    Arc::ptr_eq(a, b) || a.names == b.names
}

/// Exponent vector, one entry per variable of the owning space.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(pub Vec<i32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[i32] {
        &self.0
    }

    pub fn degree(&self) -> i64 {
        self.0.iter().map(|&e| e as i64).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

/// Exact polynomial over `F` in the variables of a [`VarSpace`].
#[derive(Clone)]
pub struct Poly<F: Scalar = Q> {
    vars: Vars,
    terms: BTreeMap<Monomial, F>,
}

impl<F: Scalar> PartialEq for Poly<F> {
    fn eq(&self, other: &Self) -> bool {
        if same_space(&self.vars, &other.vars) {
            return self.terms == other.terms;
        }
        let (a, b) = align(self, other);
        a.terms == b.terms
    }
}

impl<F: Scalar> Eq for Poly<F> {}

impl<F: Scalar> Poly<F> {
    pub fn zero(vars: &Vars) -> Self {
        Self {
            vars: vars.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: &Vars, c: F) -> Self {
        let mut p = Self::zero(vars);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(vars.len()), c);
        }
        p
    }

    pub fn one(vars: &Vars) -> Self {
        Self::constant(vars, F::one())
    }

    pub fn var(vars: &Vars, name: &str) -> Result<Self> {
        Ok(Self::var_at(vars, vars.index_of(name)?))
    }

    pub fn var_at(vars: &Vars, i: usize) -> Self {
        Self::term(vars, Monomial::var(vars.len(), i), F::one())
    }

    pub fn term(vars: &Vars, mono: Monomial, c: F) -> Self {
        assert_eq!(mono.0.len(), vars.len(), "monomial arity");
        let mut p = Self::zero(vars);
        if !c.is_zero() {
            p.terms.insert(mono, c);
        }
        p
    }

    /// Builds a polynomial from raw terms, merging duplicates and dropping
    /// zeros.
    pub fn from_terms(vars: &Vars, terms: impl IntoIterator<Item = (Monomial, F)>) -> Self {
        let mut p = Self::zero(vars);
        for (m, c) in terms {
            assert_eq!(m.0.len(), vars.len(), "monomial arity");
            p.add_term(m, c);
        }
        p
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &F)> {
        self.terms.iter()
    }

    pub fn coeff(&self, mono: &Monomial) -> F {
        self.terms.get(mono).cloned().unwrap_or_else(F::zero)
    }

    /// Constant term, or `None` if any non-constant term is present.
    pub fn as_constant(&self) -> Option<F> {
        match self.terms.len() {
            0 => Some(F::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    /// Total degree; `None` stands for the degree of the zero polynomial.
    pub fn degree(&self) -> Option<i64> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// True when every exponent is non-negative.
    pub fn is_polynomial(&self) -> bool {
        self.terms.keys().all(|m| m.0.iter().all(|&e| e >= 0))
    }

    fn add_term(&mut self, m: Monomial, c: F) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get().clone() + c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn scale(&self, c: &F) -> Self {
        if c.is_zero() {
            return Self::zero(&self.vars);
        }
        Self {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (m.clone(), a.clone() * c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(&self.vars);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Re-expresses the polynomial over a larger (or reordered) space that
    /// contains all of its variables.
    pub fn embed(&self, target: &Vars) -> Result<Self> {
        if same_space(&self.vars, target) {
            return Ok(Self {
                vars: target.clone(),
                terms: self.terms.clone(),
            });
        }
        let mut map = Vec::with_capacity(self.vars.len());
        for name in self.vars.names() {
            map.push(target.index_of(name));
        }
        let mut out = Self::zero(target);
        for (m, c) in &self.terms {
            let mut e = vec![0; target.len()];
            for (i, &ex) in m.0.iter().enumerate() {
                if ex != 0 {
                    let j = map[i].clone()?;
                    e[j] = ex;
                }
            }
            out.add_term(Monomial(e), c.clone());
        }
        Ok(out)
    }

    /// Partial derivative with respect to the named variable.
    pub fn diff(&self, var: &str) -> Result<Self> {
        Ok(self.diff_at(self.vars.index_of(var)?))
    }

    pub fn diff_at(&self, i: usize) -> Self {
        let mut out = Self::zero(&self.vars);
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut dm = m.clone();
            dm.0[i] -= 1;
            out.add_term(dm, c.clone() * F::from_i64(e as i64));
        }
        out
    }

    /// Substitutes `x_i -> images[i]`. All images must share one space.
    /// Variables raised to negative powers need monomial images.
    pub fn compose(&self, images: &[Poly<F>]) -> Result<Poly<F>> {
        if images.len() != self.vars.len() {
            return Err(Error::DimensionMismatch {
                expected: self.vars.len(),
                got: images.len(),
            });
        }
        let target = match images.first() {
            Some(p) => p.vars.clone(),
            None => return Ok(Poly::from_terms(&self.vars, self.terms.clone())),
        };
        let images: Vec<Poly<F>> = images
            .iter()
            .map(|p| p.embed(&target))
            .collect::<Result<_>>()?;
        let mut inverses: Vec<Option<Poly<F>>> = vec![None; images.len()];
        let mut powers: Vec<HashMap<i32, Poly<F>>> = vec![HashMap::new(); images.len()];
        let mut out = Poly::zero(&target);
        for (m, c) in &self.terms {
            let mut acc = Poly::constant(&target, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if !powers[i].contains_key(&e) {
                    let base = if e > 0 {
                        images[i].clone()
                    } else {
                        if inverses[i].is_none() {
                            inverses[i] = Some(images[i].monomial_inverse().ok_or_else(|| {
                                Error::Domain(format!(
                                    "cannot invert image of `{}` in a Laurent substitution",
                                    self.vars.name(i)
                                ))
                            })?);
                        }
                        inverses[i].clone().unwrap()
                    };
                    powers[i].insert(e, base.pow(e.unsigned_abs()));
                }
                acc = &acc * &powers[i][&e];
            }
            out = &out + &acc;
        }
        Ok(out)
    }

    /// Inverse of a single-term polynomial.
    pub fn monomial_inverse(&self) -> Option<Self> {
        if self.terms.len() != 1 {
            return None;
        }
        let (m, c) = self.terms.iter().next().unwrap();
        let inv = c.inv()?;
        Some(Self::term(
            &self.vars,
            Monomial(m.0.iter().map(|e| -e).collect()),
            inv,
        ))
    }

    /// Exact evaluation at a point of the coefficient field.
    pub fn eval(&self, point: &[F]) -> Result<F> {
        self.check_point(point.len())?;
        let mut total = F::zero();
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let base = if e > 0 {
                    point[i].clone()
                } else {
                    point[i].inv().ok_or_else(|| {
                        Error::Domain(format!("`{}` = 0 in a negative power", self.vars.name(i)))
                    })?
                };
                for _ in 0..e.unsigned_abs() {
                    v = v * base.clone();
                }
            }
            total = total + v;
        }
        Ok(total)
    }

    pub fn eval_c64(&self, point: &[Complex64]) -> Result<Complex64> {
        self.check_point(point.len())?;
        let mut total = Complex64::new(0.0, 0.0);
        for (m, c) in &self.terms {
            let mut v = c.to_c64();
            for (i, &e) in m.0.iter().enumerate() {
                if e < 0 && point[i] == Complex64::new(0.0, 0.0) {
                    return Err(Error::Domain(format!(
                        "`{}` = 0 in a negative power",
                        self.vars.name(i)
                    )));
                }
                if e != 0 {
                    v *= point[i].powi(e);
                }
            }
            total += v;
        }
        Ok(total)
    }

    fn check_point(&self, len: usize) -> Result<()> {
        if len != self.vars.len() {
            return Err(Error::DimensionMismatch {
                expected: self.vars.len(),
                got: len,
            });
        }
        Ok(())
    }

    pub fn map_coeffs<G: Scalar>(&self, f: impl Fn(&F) -> G) -> Poly<G> {
        Poly::from_terms(
            &self.vars,
            self.terms.iter().map(|(m, c)| (m.clone(), f(c))),
        )
    }

    /// Canonical string, e.g. `2*a1*b1^2 - 1/2*a2`.
    pub fn to_canonical_string(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_negative_atom();
            let mag = if negative { -c.clone() } else { c.clone() };
            if k == 0 {
                if negative {
                    out.push('-');
                }
            } else if negative {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            let mut factors = Vec::new();
            for (i, &e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(self.vars.name(i).to_string()),
                    _ => factors.push(format!("{}^{}", self.vars.name(i), e)),
                }
            }
            if factors.is_empty() || !mag.is_one() {
                let mut cs = String::new();
                mag.write_canonical(&mut cs);
                factors.insert(0, cs);
            }
            out.push_str(&factors.join("*"));
        }
        out
    }
}

impl Poly<Q> {
    pub fn to_gaussian(&self) -> Poly<Gaussian> {
        self.map_coeffs(|c| Gaussian::from(c.clone()))
    }

    pub fn eval_f64(&self, point: &[f64]) -> Result<f64> {
        self.check_point(point.len())?;
        let mut total = 0.0;
        for (m, c) in &self.terms {
            let mut v = c.to_f64().unwrap_or(f64::NAN);
            for (i, &e) in m.0.iter().enumerate() {
                if e < 0 && point[i] == 0.0 {
                    return Err(Error::Domain(format!(
                        "`{}` = 0 in a negative power",
                        self.vars.name(i)
                    )));
                }
                if e != 0 {
                    v *= point[i].powi(e);
                }
            }
            total += v;
        }
        Ok(total)
    }
}

impl Poly<Gaussian> {
    /// Real part of every coefficient, or `None` if some coefficient has a
    /// nonzero imaginary part.
    pub fn to_real(&self) -> Option<Poly<Q>> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            terms.push((m.clone(), c.as_real()?));
        }
        Some(Poly::from_terms(&self.vars, terms))
    }
}

/// Brings two polynomials onto a common space, merging variable lists by
/// name when they differ.
fn align<F: Scalar>(a: &Poly<F>, b: &Poly<F>) -> (Poly<F>, Poly<F>) {
    if same_space(&a.vars, &b.vars) {
        return (a.clone(), b.clone());
    }
    let mut names: Vec<String> = a.vars.names().to_vec();
    for n in b.vars.names() {
        if !a.vars.contains(n) {
            names.push(n.clone());
        }
    }
    let target = if names.len() == a.vars.len() {
        a.vars.clone()
    } else {
        VarSpace::new(names)
    };
    (
        a.embed(&target).expect("union contains all names"),
        b.embed(&target).expect("union contains all names"),
    )
}

impl<F: Scalar> Add for &Poly<F> {
    type Output = Poly<F>;
    fn add(self, rhs: &Poly<F>) -> Poly<F> {
        if !same_space(&self.vars, &rhs.vars) {
            let (a, b) = align(self, rhs);
            return &a + &b;
        }
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl<F: Scalar> Sub for &Poly<F> {
    type Output = Poly<F>;
    fn sub(self, rhs: &Poly<F>) -> Poly<F> {
        if !same_space(&self.vars, &rhs.vars) {
            let (a, b) = align(self, rhs);
            return &a - &b;
        }
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl<F: Scalar> Mul for &Poly<F> {
    type Output = Poly<F>;
    fn mul(self, rhs: &Poly<F>) -> Poly<F> {
        if !same_space(&self.vars, &rhs.vars) {
            let (a, b) = align(self, rhs);
            return &a * &b;
        }
        let mut out = Poly::zero(&self.vars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca.clone() * cb.clone());
            }
        }
        out
    }
}

impl<F: Scalar> Neg for &Poly<F> {
    type Output = Poly<F>;
    fn neg(self) -> Poly<F> {
        Poly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl<F: Scalar> $tr for Poly<F> {
            type Output = Poly<F>;
            fn $method(self, rhs: Poly<F>) -> Poly<F> {
                (&self).$method(&rhs)
            }
        }
        impl<F: Scalar> $tr<&Poly<F>> for Poly<F> {
            type Output = Poly<F>;
            fn $method(self, rhs: &Poly<F>) -> Poly<F> {
                (&self).$method(rhs)
            }
        }
        impl<F: Scalar> $tr<Poly<F>> for &Poly<F> {
            type Output = Poly<F>;
            fn $method(self, rhs: Poly<F>) -> Poly<F> {
                self.$method(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl<F: Scalar> Neg for Poly<F> {
    type Output = Poly<F>;
    fn neg(self) -> Poly<F> {
        -&self
    }
}

impl<F: Scalar> fmt::Display for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_canonical_string())
    }
}

impl<F: Scalar> fmt::Debug for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({})", self.to_canonical_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyalg::scalar::{q, qi};

    fn space() -> Vars {
        VarSpace::new(["a1", "a2", "b1", "b2"])
    }

    fn v(s: &Vars, n: &str) -> Poly {
        Poly::var(s, n).unwrap()
    }

    #[test]
    fn cancellation_and_zero() {
        let s = space();
        let (a1, b1) = (v(&s, "a1"), v(&s, "b1"));
        let sum = (&a1 + &b1) + (&a1 - &b1);
        assert_eq!(sum, a1.scale(&qi(2)));
        assert!((&a1 * &Poly::zero(&s)).is_zero());
        assert_eq!(Poly::<Q>::zero(&s).degree(), None);
    }

    #[test]
    fn binomial_square_matches_termwise_expansion() {
        let s = space();
        let (a1, a2) = (v(&s, "a1"), v(&s, "a2"));
        let sq = (&a1 + &a2).pow(2);
        // term-by-term: a1*a1 + a1*a2 + a2*a1 + a2*a2
        let naive = &(&(&a1 * &a1) + &(&a1 * &a2)) + &(&(&a2 * &a1) + &(&a2 * &a2));
        assert_eq!(sq, naive);
        assert_eq!(sq.to_canonical_string(), "a1^2 + 2*a1*a2 + a2^2");
    }

    #[test]
    fn derivative_examples() {
        let s = space();
        let (a1, a2, b1, b2) = (v(&s, "a1"), v(&s, "a2"), v(&s, "b1"), v(&s, "b2"));
        let p = &a1 * &b1.pow(2);
        assert_eq!(p.diff("b1").unwrap(), (&a1 * &b1).scale(&qi(2)));
        assert!(a2.diff("a1").unwrap().is_zero());
        let r = &(&a1.pow(2) * &b2) + &a1;
        assert_eq!(
            r.diff("a1").unwrap(),
            &(&a1 * &b2).scale(&qi(2)) + &Poly::one(&s)
        );
        assert_eq!(
            p.diff("c9").unwrap_err(),
            Error::UnknownVariable("c9".into())
        );
    }

    #[test]
    fn evaluation() {
        let s = VarSpace::new(["a1", "b1"]);
        let (a1, b1) = (v(&s, "a1"), v(&s, "b1"));
        assert_eq!((&a1 + &b1).eval(&[qi(1), qi(2)]).unwrap(), qi(3));
        assert_eq!(Poly::<Q>::zero(&s).eval(&[qi(7), qi(8)]).unwrap(), qi(0));
        assert_eq!((&a1 * &b1.pow(2)).eval(&[qi(3), qi(2)]).unwrap(), qi(12));
        assert!(matches!(
            a1.eval(&[qi(1)]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert_eq!((&a1 * &b1.pow(2)).eval_f64(&[3.0, 2.0]).unwrap(), 12.0);
    }

    #[test]
    fn laurent_terms_and_domain_errors() {
        let s = VarSpace::new(["b1", "b2"]);
        let inv = v(&s, "b2").monomial_inverse().unwrap().scale(&qi(-1));
        assert_eq!(inv.to_canonical_string(), "-b2^-1");
        assert_eq!(inv.eval(&[qi(1), qi(4)]).unwrap(), q(-1, 4));
        assert!(matches!(inv.eval(&[qi(1), qi(0)]), Err(Error::Domain(_))));
        assert_eq!(inv.diff("b2").unwrap().to_canonical_string(), "b2^-2");
    }

    #[test]
    fn alignment_by_name() {
        let s1 = VarSpace::new(["a1", "b1"]);
        let s2 = VarSpace::new(["b1", "c1"]);
        let p = v(&s1, "b1") + v(&s1, "a1");
        let r = v(&s2, "b1");
        let d = &p - &r;
        assert_eq!(d.to_canonical_string(), "a1");
        let same = v(&s2, "b1");
        assert_eq!(v(&s1, "b1"), same);
    }

    #[test]
    fn canonical_string_signs_and_fractions() {
        let s = space();
        let p = &(&v(&s, "a1") * &v(&s, "b1").pow(2)).scale(&qi(2)) - &v(&s, "a2").scale(&q(1, 2));
        assert_eq!(p.to_canonical_string(), "2*a1*b1^2 - 1/2*a2");
        assert_eq!((-&p).to_canonical_string(), "-2*a1*b1^2 + 1/2*a2");
        assert_eq!(Poly::constant(&s, q(-3, 4)).to_canonical_string(), "-3/4");
    }
}
