//! Polynomial differential forms on affine n-space: wedge, exterior
//! derivative and contraction against coordinate multivectors.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use crate::poly::{render_coeff_times, GaussianRational, MPoly, Monomial, PolyError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FormError {
    #[error("variable count mismatch: {left} vs {right}")]
    VarCountMismatch { left: usize, right: usize },
    #[error("index {index} out of range for {nvars} variables")]
    IndexOutOfRange { index: usize, nvars: usize },
    #[error("basis indices must be strictly increasing")]
    NotIncreasing,
    #[error("cannot contract {count} vectors into a {degree}-form")]
    ContractionTooLong { count: usize, degree: usize },
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },
}

impl From<PolyError> for FormError {
    fn from(e: PolyError) -> Self {
        match e {
            PolyError::VarCountMismatch { left, right } => FormError::VarCountMismatch { left, right },
            PolyError::IndexOutOfRange { index, nvars } => FormError::IndexOutOfRange { index, nvars },
            other => panic!("unexpected polynomial error in form algebra: {other}"),
        }
    }
}

/// Strictly increasing variable indices naming `dx_{i1}^...^dx_{ik}`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct BasisIndex(Vec<usize>);

impl BasisIndex {
    pub fn new(indices: Vec<usize>, nvars: usize) -> Result<Self, FormError> {
        if let Some(&bad) = indices.iter().find(|&&i| i >= nvars) {
            return Err(FormError::IndexOutOfRange { index: bad, nvars });
        }
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(FormError::NotIncreasing);
        }
        Ok(BasisIndex(indices))
    }

    pub fn empty() -> Self {
        BasisIndex(Vec::new())
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// All strictly increasing index sequences of length `k` below `nvars`,
    /// in lexicographic order.
    pub fn all(nvars: usize, k: usize) -> Vec<BasisIndex> {
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(k);
        fn rec(start: usize, nvars: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<BasisIndex>) {
            if cur.len() == k {
                out.push(BasisIndex(cur.clone()));
                return;
            }
            for i in start..nvars {
                cur.push(i);
                rec(i + 1, nvars, k, cur, out);
                cur.pop();
            }
        }
        rec(0, nvars, k, &mut cur, &mut out);
        out
    }

    /// Concatenation sorted, with the sign of the sorting permutation;
    /// `None` on a repeated index.
    fn merge(&self, other: &BasisIndex) -> Option<(BasisIndex, bool)> {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        let mut swaps = 0usize;
        while i < a.len() && j < b.len() {
            if a[i] == b[j] {
                return None;
            }
            if a[i] < b[j] {
                out.push(a[i]);
                i += 1;
            } else {
                // b[j] jumps over the remaining a's
                swaps += a.len() - i;
                out.push(b[j]);
                j += 1;
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Some((BasisIndex(out), swaps % 2 == 1))
    }

    fn render(&self, names: &[String]) -> String {
        self.0
            .iter()
            .map(|&i| format!("d{}", names[i]))
            .collect::<Vec<_>>()
            .join("^")
    }
}

/// A polynomial k-form; the zero coefficient is never stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct KForm {
    degree: usize,
    nvars: usize,
    terms: BTreeMap<BasisIndex, MPoly>,
}

impl KForm {
    pub fn zero(nvars: usize, degree: usize) -> Self {
        KForm {
            degree,
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_poly(p: MPoly) -> Self {
        let nvars = p.nvars();
        Self::term(BasisIndex::empty(), p, nvars)
    }

    /// `coeff * dx_I`.
    pub fn term(index: BasisIndex, coeff: MPoly, nvars: usize) -> Self {
        assert_eq!(coeff.nvars(), nvars);
        let mut f = KForm::zero(nvars, index.len());
        if !coeff.is_zero() {
            f.terms.insert(index, coeff);
        }
        f
    }

    /// `dx_{i1}^...^dx_{ik}` with unit coefficient.
    pub fn basis(nvars: usize, indices: &[usize]) -> Result<Self, FormError> {
        let idx = BasisIndex::new(indices.to_vec(), nvars)?;
        Ok(Self::term(idx, MPoly::one(nvars), nvars))
    }

    pub fn from_terms(nvars: usize, degree: usize, terms: impl IntoIterator<Item = (BasisIndex, MPoly)>) -> Self {
        let mut f = KForm::zero(nvars, degree);
        for (idx, c) in terms {
            assert_eq!(idx.len(), degree);
            f.add_term(idx, c);
        }
        f
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BasisIndex, &MPoly)> {
        self.terms.iter()
    }

    pub fn coefficients(&self) -> impl Iterator<Item = &MPoly> {
        self.terms.values()
    }

    pub fn coeff(&self, idx: &BasisIndex) -> MPoly {
        self.terms.get(idx).cloned().unwrap_or_else(|| MPoly::zero(self.nvars))
    }

    fn add_term(&mut self, idx: BasisIndex, c: MPoly) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(idx) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    fn check_same(&self, other: &KForm) -> Result<(), FormError> {
        if self.nvars != other.nvars {
            return Err(FormError::VarCountMismatch {
                left: self.nvars,
                right: other.nvars,
            });
        }
        Ok(())
    }

    /// Multiplies every coefficient by the polynomial `p`.
    pub fn mul_poly(&self, p: &MPoly) -> KForm {
        KForm {
            degree: self.degree,
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(i, c)| (i.clone(), c * p))
                .filter(|(_, c)| !c.is_zero())
                .collect(),
        }
    }

    pub fn scale(&self, c: &GaussianRational) -> KForm {
        self.mul_poly(&MPoly::constant(self.nvars, c.clone()))
    }

    /// Exact coefficientwise division by `p`.
    pub fn div_poly(&self, p: &MPoly) -> Result<KForm, PolyError> {
        let mut terms = BTreeMap::new();
        for (i, c) in &self.terms {
            terms.insert(i.clone(), c.exact_div(p)?);
        }
        Ok(KForm {
            degree: self.degree,
            nvars: self.nvars,
            terms,
        })
    }

    pub fn checked_add(&self, other: &KForm) -> Result<KForm, FormError> {
        self.check_same(other)?;
        if self.degree != other.degree {
            return Err(FormError::DegreeMismatch {
                left: self.degree,
                right: other.degree,
            });
        }
        let mut out = self.clone();
        for (i, c) in &other.terms {
            out.add_term(i.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn wedge(&self, other: &KForm) -> Result<KForm, FormError> {
        self.check_same(other)?;
        let mut out = KForm::zero(self.nvars, self.degree + other.degree);
        for (ia, ca) in &self.terms {
            for (ib, cb) in &other.terms {
                if let Some((idx, negate)) = ia.merge(ib) {
                    let prod = ca * cb;
                    out.add_term(idx, if negate { -&prod } else { prod });
                }
            }
        }
        Ok(out)
    }

    pub fn exterior_derivative(&self) -> KForm {
        let mut out = KForm::zero(self.nvars, self.degree + 1);
        for (idx, c) in &self.terms {
            for v in 0..self.nvars {
                let pos = match idx.0.binary_search(&v) {
                    Ok(_) => continue,
                    Err(p) => p,
                };
                let dc = c.partial(v).expect("index in range");
                if dc.is_zero() {
                    continue;
                }
                let mut merged = idx.0.clone();
                merged.insert(pos, v);
                out.add_term(BasisIndex(merged), if pos % 2 == 1 { -&dc } else { dc });
            }
        }
        out
    }

    /// Interior product with the coordinate vector field `e_j`.
    pub fn contract(&self, j: usize) -> Result<KForm, FormError> {
        if j >= self.nvars {
            return Err(FormError::IndexOutOfRange {
                index: j,
                nvars: self.nvars,
            });
        }
        if self.degree == 0 {
            return Err(FormError::ContractionTooLong { count: 1, degree: 0 });
        }
        let mut out = KForm::zero(self.nvars, self.degree - 1);
        for (idx, c) in &self.terms {
            if let Ok(pos) = idx.0.binary_search(&j) {
                let mut rest = idx.0.clone();
                rest.remove(pos);
                out.add_term(BasisIndex(rest), if pos % 2 == 1 { -c } else { c.clone() });
            }
        }
        Ok(out)
    }

    /// Contracts `e_{j1}, ..., e_{jm}` in order: `i_{e_jm} ... i_{e_j1}`.
    pub fn contract_basis(&self, j: &BasisIndex) -> Result<KForm, FormError> {
        if let Some(&bad) = j.indices().iter().find(|&&i| i >= self.nvars) {
            return Err(FormError::IndexOutOfRange {
                index: bad,
                nvars: self.nvars,
            });
        }
        if j.len() > self.degree {
            return Err(FormError::ContractionTooLong {
                count: j.len(),
                degree: self.degree,
            });
        }
        let mut out = self.clone();
        for &i in j.indices() {
            out = out.contract(i)?;
        }
        Ok(out)
    }

    /// Renames variables: `x_i` becomes `x_{perm[i]}`.
    pub fn permute_vars(&self, perm: &[usize]) -> KForm {
        let mut out = KForm::zero(self.nvars, self.degree);
        for (idx, c) in &self.terms {
            let moved: Vec<usize> = idx.0.iter().map(|&i| perm[i]).collect();
            let mut sorted = moved.clone();
            sorted.sort_unstable();
            let inversions = (0..moved.len())
                .flat_map(|a| (a + 1..moved.len()).map(move |b| (a, b)))
                .filter(|&(a, b)| moved[a] > moved[b])
                .count();
            let c = c.permute_vars(perm);
            out.add_term(BasisIndex(sorted), if inversions % 2 == 1 { -&c } else { c });
        }
        out
    }

    /// Expanded canonical text: basis blocks in lexicographic order, each
    /// coefficient's monomials in descending graded-lex order.
    pub fn render(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        let mut first = true;
        for (idx, c) in &self.terms {
            let basis = idx.render(names);
            for (m, a) in c.terms().rev() {
                let mono = m.render(names);
                let rest = match (mono.is_empty(), basis.is_empty()) {
                    (true, _) => basis.clone(),
                    (false, true) => mono,
                    (false, false) => format!("{mono}*{basis}"),
                };
                let (neg, body) = render_coeff_times(a, &rest);
                match (first, neg) {
                    (true, true) => out.push('-'),
                    (true, false) => {}
                    (false, true) => out.push_str(" - "),
                    (false, false) => out.push_str(" + "),
                }
                out.push_str(&body);
                first = false;
            }
        }
        out
    }

    /// All (basis, monomial, coefficient) triples.
    pub fn flat_terms(&self) -> impl Iterator<Item = (&BasisIndex, &Monomial, &GaussianRational)> {
        self.terms
            .iter()
            .flat_map(|(i, c)| c.terms().map(move |(m, a)| (i, m, a)))
    }
}

/// The 1-form `sum_i (df/dx_i) dx_i`.
pub fn gradient_form(f: &MPoly) -> KForm {
    let n = f.nvars();
    let mut out = KForm::zero(n, 1);
    for v in 0..n {
        out.add_term(BasisIndex(vec![v]), f.partial(v).expect("index in range"));
    }
    out
}

pub fn wedge(a: &KForm, b: &KForm) -> Result<KForm, FormError> {
    a.wedge(b)
}

pub fn exterior_derivative(a: &KForm) -> KForm {
    a.exterior_derivative()
}

pub fn contract_basis(j: &BasisIndex, a: &KForm) -> Result<KForm, FormError> {
    a.contract_basis(j)
}

impl fmt::Debug for KForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.nvars).map(|i| format!("x{i}")).collect();
        write!(f, "[{}] {}", self.degree, self.render(&names))
    }
}

impl Add<&KForm> for &KForm {
    type Output = KForm;
    fn add(self, rhs: &KForm) -> KForm {
        self.checked_add(rhs).expect("forms of equal degree and arity")
    }
}

impl Sub<&KForm> for &KForm {
    type Output = KForm;
    fn sub(self, rhs: &KForm) -> KForm {
        self.checked_add(&-rhs).expect("forms of equal degree and arity")
    }
}

impl Neg for &KForm {
    type Output = KForm;
    fn neg(self) -> KForm {
        KForm {
            degree: self.degree,
            nvars: self.nvars,
            terms: self.terms.iter().map(|(i, c)| (i.clone(), -c)).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(n: usize, i: usize) -> MPoly {
        MPoly::var(n, i)
    }
    fn d(n: usize, idx: &[usize]) -> KForm {
        KForm::basis(n, idx).unwrap()
    }
    fn names3() -> Vec<String> {
        vec!["x".into(), "y".into(), "z".into()]
    }

    #[test]
    fn wedge_examples() {
        assert_eq!(d(2, &[0]).wedge(&d(2, &[1])).unwrap(), d(2, &[0, 1]));
        // (x dy) ^ (y dx) = -xy dx^dy
        let a = d(2, &[1]).mul_poly(&v(2, 0));
        let b = d(2, &[0]).mul_poly(&v(2, 1));
        let expected = d(2, &[0, 1]).mul_poly(&-&(&v(2, 0) * &v(2, 1)));
        assert_eq!(a.wedge(&b).unwrap(), expected);
        assert!(d(2, &[0, 1]).wedge(&d(2, &[0])).unwrap().is_zero());
        assert!(d(2, &[0]).wedge(&d(3, &[0])).is_err());
    }

    #[test]
    fn derivative_examples() {
        let n = 3;
        assert_eq!(d(n, &[1]).mul_poly(&v(n, 0)).exterior_derivative(), d(n, &[0, 1]));
        let radial = &(&d(n, &[1, 2]).mul_poly(&v(n, 0)) - &d(n, &[0, 2]).mul_poly(&v(n, 1)))
            + &d(n, &[0, 1]).mul_poly(&v(n, 2));
        assert_eq!(radial.exterior_derivative(), d(n, &[0, 1, 2]).scale(&3.into()));
        let f = &(&v(n, 0).pow(2) * &v(n, 1)) + &v(n, 2).pow(3);
        let df = gradient_form(&f);
        assert!(df.exterior_derivative().is_zero());
        assert_eq!(df.exterior_derivative().degree(), 2);
    }

    #[test]
    fn contraction_examples() {
        assert_eq!(d(2, &[0, 1]).contract(0).unwrap(), d(2, &[1]));
        assert_eq!(d(2, &[0, 1]).contract(1).unwrap(), -&d(2, &[0]));
        let a = d(3, &[0, 1, 2]).mul_poly(&v(3, 0));
        let j = BasisIndex::new(vec![0, 1], 3).unwrap();
        assert_eq!(a.contract_basis(&j).unwrap(), d(3, &[2]).mul_poly(&v(3, 0)));
        // iterated-contraction oracle
        assert_eq!(
            a.contract_basis(&j).unwrap(),
            a.contract(0).unwrap().contract(1).unwrap()
        );
        assert!(a.contract(5).is_err());
        assert!(BasisIndex::new(vec![1, 0], 3).is_err());
    }

    #[test]
    fn gradient_examples() {
        let n = 3;
        assert_eq!(gradient_form(&v(n, 0)), d(n, &[0]));
        let xy = &v(n, 0) * &v(n, 1);
        assert_eq!(
            gradient_form(&xy),
            &d(n, &[0]).mul_poly(&v(n, 1)) + &d(n, &[1]).mul_poly(&v(n, 0))
        );
        let f = &v(n, 0).pow(2) + &(&v(n, 1) * &v(n, 2));
        assert_eq!(gradient_form(&f).render(&names3()), "2*x*dx + z*dy + y*dz");
    }

    #[test]
    fn rendering() {
        let n = 3;
        let w = &(&d(n, &[1, 2]).mul_poly(&v(n, 0)) - &d(n, &[0, 2]).mul_poly(&v(n, 1)))
            + &d(n, &[0, 1]).scale(&"-2/3".parse().unwrap());
        assert_eq!(w.render(&names3()), "-2/3*dx^dy - y*dx^dz + x*dy^dz");
        assert_eq!(KForm::zero(3, 2).render(&names3()), "0");
    }

    #[test]
    fn all_indices() {
        let all = BasisIndex::all(4, 2);
        assert_eq!(all.len(), 6);
        assert_eq!(all[0].indices(), &[0, 1]);
        assert_eq!(all[5].indices(), &[2, 3]);
        assert_eq!(BasisIndex::all(3, 0), vec![BasisIndex::empty()]);
    }
}
