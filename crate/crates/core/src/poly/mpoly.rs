//! Sparse multivariate polynomials over the Gaussian rationals.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::{GaussianRational, Monomial, PolyError};

/// Polynomial in a fixed number of variables. Terms are kept in a
/// `BTreeMap` keyed by graded-lex order, so the last entry is the leading
/// term. No stored coefficient is zero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MPoly {
    nvars: usize,
    terms: BTreeMap<Monomial, GaussianRational>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

/// Checked ring operation; the plain operators panic on a variable-count
/// mismatch instead.
pub fn poly_arith(a: &MPoly, b: &MPoly, op: ArithOp) -> Result<MPoly, PolyError> {
    a.check_same(b)?;
    Ok(match op {
        ArithOp::Add => a + b,
        ArithOp::Sub => a - b,
        ArithOp::Mul => a * b,
    })
}

impl MPoly {
    pub fn zero(nvars: usize) -> Self {
        MPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, GaussianRational::one())
    }

    pub fn constant(nvars: usize, c: GaussianRational) -> Self {
        Self::monomial(nvars, Monomial::one(nvars), c)
    }

    pub fn var(nvars: usize, index: usize) -> Self {
        Self::monomial(nvars, Monomial::var(nvars, index), GaussianRational::one())
    }

    pub fn monomial(nvars: usize, m: Monomial, c: GaussianRational) -> Self {
        assert_eq!(m.nvars(), nvars);
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        MPoly { nvars, terms }
    }

    /// Builds from arbitrary terms, merging repeats and dropping zeros.
    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Monomial, GaussianRational)>) -> Self {
        let mut p = MPoly::zero(nvars);
        for (m, c) in terms {
            assert_eq!(m.nvars(), nvars);
            p.add_term(m, &c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.iter().all(|(m, c)| m.is_one() && c.is_one())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &GaussianRational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> GaussianRational {
        self.terms.get(m).cloned().unwrap_or_else(GaussianRational::zero)
    }

    pub fn constant_term(&self) -> GaussianRational {
        self.coeff(&Monomial::one(self.nvars))
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &GaussianRational)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coeff(&self) -> GaussianRational {
        self.leading_term()
            .map(|(_, c)| c.clone())
            .unwrap_or_else(GaussianRational::zero)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn degree_in(&self, var: usize) -> Option<u32> {
        self.terms.keys().map(|m| m.exponent(var)).max()
    }

    pub fn uses_var(&self, var: usize) -> bool {
        self.terms.keys().any(|m| m.exponent(var) > 0)
    }

    /// Coefficient of `var^k`, a polynomial free of `var`.
    pub fn coeff_in(&self, var: usize, k: u32) -> MPoly {
        MPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.exponent(var) == k)
                .map(|(m, c)| (m.with_exponent(var, 0), c.clone()))
                .collect(),
        }
    }

    /// Nonzero coefficients with respect to `var`, highest power first.
    pub fn coeffs_in(&self, var: usize) -> Vec<MPoly> {
        let mut by_power: BTreeMap<u32, MPoly> = BTreeMap::new();
        for (m, c) in &self.terms {
            by_power
                .entry(m.exponent(var))
                .or_insert_with(|| MPoly::zero(self.nvars))
                .terms
                .insert(m.with_exponent(var, 0), c.clone());
        }
        by_power.into_values().rev().collect()
    }

    pub(crate) fn check_same(&self, other: &MPoly) -> Result<(), PolyError> {
        if self.nvars != other.nvars {
            return Err(PolyError::VarCountMismatch {
                left: self.nvars,
                right: other.nvars,
            });
        }
        Ok(())
    }

    fn add_term(&mut self, m: Monomial, c: &GaussianRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &GaussianRational) -> MPoly {
        if c.is_zero() {
            return MPoly::zero(self.nvars);
        }
        MPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn mul_term(&self, m: &Monomial, c: &GaussianRational) -> MPoly {
        if c.is_zero() {
            return MPoly::zero(self.nvars);
        }
        MPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(k, a)| (k.mul(m), a * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> MPoly {
        let mut acc = MPoly::one(self.nvars);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Divides by the graded-lex leading coefficient. Zero stays zero.
    pub fn monic(&self) -> MPoly {
        match self.leading_term() {
            None => self.clone(),
            Some((_, c)) if c.is_one() => self.clone(),
            Some((_, c)) => self.scale(&c.inv().expect("nonzero leading coefficient")),
        }
    }

    /// Exact quotient `self / divisor`, or `NotDivisible`.
    pub fn exact_div(&self, divisor: &MPoly) -> Result<MPoly, PolyError> {
        self.check_same(divisor)?;
        let (lm, lc) = divisor.leading_term().ok_or(PolyError::DivisionByZero)?;
        let lc_inv = lc.inv().expect("nonzero leading coefficient");
        if divisor.len() == 1 {
            // Monomial divisor: termwise.
            let mut q = BTreeMap::new();
            for (m, c) in &self.terms {
                let qm = m.div(lm).ok_or(PolyError::NotDivisible)?;
                q.insert(qm, c * &lc_inv);
            }
            return Ok(MPoly {
                nvars: self.nvars,
                terms: q,
            });
        }
        if let (Some(da), Some(db)) = (self.total_degree(), divisor.total_degree()) {
            if da < db {
                return Err(PolyError::NotDivisible);
            }
        }
        let mut rem = self.clone();
        let mut quot = MPoly::zero(self.nvars);
        while let Some((rm, rc)) = rem.leading_term() {
            let qm = rm.div(lm).ok_or(PolyError::NotDivisible)?;
            let qc = rc * &lc_inv;
            rem = &rem - &divisor.mul_term(&qm, &qc);
            quot.terms.insert(qm, qc);
        }
        Ok(quot)
    }

    pub fn divides(&self, other: &MPoly) -> bool {
        !self.is_zero() && other.exact_div(self).is_ok()
    }

    pub fn partial(&self, var: usize) -> Result<MPoly, PolyError> {
        if var >= self.nvars {
            return Err(PolyError::IndexOutOfRange {
                index: var,
                nvars: self.nvars,
            });
        }
        let mut out = MPoly::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.exponent(var);
            if e > 0 {
                out.terms
                    .insert(m.with_exponent(var, e - 1), c * &GaussianRational::from_int(e as i64));
            }
        }
        Ok(out)
    }

    /// `true` iff `gcd(f, df/dx_1, ..., df/dx_n)` is a unit.
    pub fn is_squarefree(&self) -> Result<bool, PolyError> {
        if self.is_constant() {
            return Err(PolyError::ConstantPolynomial);
        }
        let mut g = self.clone();
        for v in 0..self.nvars {
            let d = self.partial(v)?;
            g = super::gcd::gcd(&g, &d)?;
            if g.is_constant() {
                return Ok(true);
            }
        }
        Ok(g.is_constant())
    }

    /// Renames variables: variable `i` becomes variable `perm[i]`.
    pub fn permute_vars(&self, perm: &[usize]) -> MPoly {
        MPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.permuted(perm), c.clone())).collect(),
        }
    }

    pub fn eval(&self, point: &[GaussianRational]) -> GaussianRational {
        let mut acc = GaussianRational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, &e) in m.exponents().iter().enumerate() {
                for _ in 0..e {
                    t = &t * &point[v];
                }
            }
            acc += &t;
        }
        acc
    }

    /// Canonical text, terms in descending graded-lex order:
    /// `x^2 - 2*x*y + 1/2`, coefficients other than rationals in
    /// parentheses.
    pub fn render(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let (neg, body) = render_term(m, c, names);
            match (k, neg) {
                (0, true) => out.push('-'),
                (0, false) => {}
                (_, true) => out.push_str(" - "),
                (_, false) => out.push_str(" + "),
            }
            out.push_str(&body);
        }
        out
    }
}

/// Splits a term into (negated?, body) where `body` carries no leading
/// sign. `mono` may be empty for a constant term.
pub(crate) fn render_term(m: &Monomial, c: &GaussianRational, names: &[String]) -> (bool, String) {
    let mono = m.render(names);
    render_coeff_times(c, &mono)
}

pub(crate) fn render_coeff_times(c: &GaussianRational, rest: &str) -> (bool, String) {
    let (neg, mag) = if c.is_real() && c.re() < &num_rational::BigRational::zero() {
        (true, -c.clone())
    } else {
        (false, c.clone())
    };
    let coeff = if mag.is_real() {
        mag.to_string()
    } else {
        format!("({mag})")
    };
    let body = if rest.is_empty() {
        coeff
    } else if mag.is_one() {
        rest.to_string()
    } else {
        format!("{coeff}*{rest}")
    };
    (neg, body)
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.nvars).map(|i| format!("x{i}")).collect();
        f.write_str(&self.render(&names))
    }
}

impl Add<&MPoly> for &MPoly {
    type Output = MPoly;
    fn add(self, rhs: &MPoly) -> MPoly {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let (mut big, small) = if self.len() >= rhs.len() {
            (self.clone(), rhs)
        } else {
            (rhs.clone(), self)
        };
        for (m, c) in &small.terms {
            big.add_term(m.clone(), c);
        }
        big
    }
}

impl Sub<&MPoly> for &MPoly {
    type Output = MPoly;
    fn sub(self, rhs: &MPoly) -> MPoly {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), &-c);
        }
        out
    }
}

impl Mul<&MPoly> for &MPoly {
    type Output = MPoly;
    fn mul(self, rhs: &MPoly) -> MPoly {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut acc: std::collections::HashMap<Monomial, GaussianRational> = std::collections::HashMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let c = ca * cb;
                acc.entry(ma.mul(mb)).and_modify(|e| *e += &c).or_insert(c);
            }
        }
        MPoly {
            nvars: self.nvars,
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }
}

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        MPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<MPoly> for MPoly {
            type Output = MPoly;
            fn $m(self, rhs: MPoly) -> MPoly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> MPoly {
        MPoly::var(2, 0)
    }
    fn y() -> MPoly {
        MPoly::var(2, 1)
    }
    fn c(n: i64) -> MPoly {
        MPoly::constant(2, GaussianRational::from_int(n))
    }
    fn names() -> Vec<String> {
        vec!["x".into(), "y".into()]
    }

    #[test]
    fn arithmetic_examples() {
        let s = poly_arith(&(&x() + &y()), &(&x() - &y()), ArithOp::Add).unwrap();
        assert_eq!(s, x().scale(&2.into()));
        let z = poly_arith(&(&x() + &y()), &MPoly::zero(2), ArithOp::Mul).unwrap();
        assert!(z.is_zero());
        let p = poly_arith(&(&x() + &y()), &(&x() - &y()), ArithOp::Mul).unwrap();
        assert_eq!(p, &x().pow(2) - &y().pow(2));
    }

    #[test]
    fn arithmetic_mismatch() {
        let a = MPoly::var(3, 0);
        assert_eq!(
            poly_arith(&a, &x(), ArithOp::Sub),
            Err(PolyError::VarCountMismatch { left: 3, right: 2 })
        );
    }

    #[test]
    fn exact_division_examples() {
        let a = &x().pow(2) - &y().pow(2);
        assert_eq!(a.exact_div(&(&x() - &y())).unwrap(), &x() + &y());
        assert_eq!(x().exact_div(&(&x() + &c(1))), Err(PolyError::NotDivisible));
        let b = &(&x().pow(2) * &y()) + &(&x() * &y().pow(2));
        let q = b.exact_div(&(&x() * &y())).unwrap();
        assert_eq!(q, &x() + &y());
        assert_eq!(&q * &(&x() * &y()), b);
        assert_eq!(x().exact_div(&MPoly::zero(2)), Err(PolyError::DivisionByZero));
    }

    #[test]
    fn partial_examples() {
        let x2y = &x().pow(2) * &y();
        assert_eq!(x2y.partial(0).unwrap(), (&x() * &y()).scale(&2.into()));
        assert!(y().partial(0).unwrap().is_zero());
        let f = &x().pow(3) + &(&x() * &y().pow(2));
        assert_eq!(f.partial(1).unwrap(), (&x() * &y()).scale(&2.into()));
        assert_eq!(x().partial(2), Err(PolyError::IndexOutOfRange { index: 2, nvars: 2 }));
    }

    #[test]
    fn squarefree_examples() {
        assert!(!(&x().pow(2) * &y()).is_squarefree().unwrap());
        assert!((&x() * &y()).is_squarefree().unwrap());
        let s = &x() + &y();
        assert!((&s.pow(2) - &s).is_squarefree().unwrap());
        assert_eq!(c(3).is_squarefree(), Err(PolyError::ConstantPolynomial));
    }

    #[test]
    fn rendering() {
        let p = &(&x().pow(2) - &(&x() * &y()).scale(&2.into())) + &c(-1);
        assert_eq!(p.render(&names()), "x^2 - 2*x*y - 1");
        let q = x().scale(&"1/2-i".parse().unwrap());
        assert_eq!(q.render(&names()), "(1/2-i)*x");
        assert_eq!(MPoly::zero(2).render(&names()), "0");
        assert_eq!(y().scale(&(-1).into()).render(&names()), "-y");
    }
}
