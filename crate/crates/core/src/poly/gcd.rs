//! Multivariate gcd by content/primitive-part recursion on the highest
//! variable, with a subresultant remainder sequence for the primitive parts.

use num_traits::One;

use super::{MPoly, Monomial, PolyError};

/// Monic greatest common divisor. `gcd(a, 0) = monic(a)`.
pub fn gcd(a: &MPoly, b: &MPoly) -> Result<MPoly, PolyError> {
    a.check_same(b)?;
    match (a.is_zero(), b.is_zero()) {
        (true, true) => return Err(PolyError::BothZero),
        (true, false) => return Ok(b.monic()),
        (false, true) => return Ok(a.monic()),
        _ => {}
    }
    // Cheap exits for the common case where one argument divides the other.
    let (big, small) = if a.total_degree() >= b.total_degree() {
        (a, b)
    } else {
        (b, a)
    };
    if small.divides(big) {
        return Ok(small.monic());
    }
    Ok(gcd_nonzero(a, b).monic())
}

/// Gcd of a list; `None` when every entry is zero.
pub fn gcd_all<'a>(polys: impl IntoIterator<Item = &'a MPoly>) -> Option<MPoly> {
    let mut acc: Option<MPoly> = None;
    for p in polys {
        if p.is_zero() {
            continue;
        }
        acc = Some(match acc {
            None => p.monic(),
            Some(g) => gcd(&g, p).expect("nonzero arguments of equal arity"),
        });
        if acc.as_ref().is_some_and(MPoly::is_constant) {
            return Some(MPoly::one(p.nvars()));
        }
    }
    acc
}

/// Gcd up to a unit, both arguments nonzero.
fn gcd_nonzero(a: &MPoly, b: &MPoly) -> MPoly {
    let n = a.nvars();
    if a.is_constant() || b.is_constant() {
        return MPoly::one(n);
    }
    if a.len() == 1 {
        return monomial_gcd(a, b);
    }
    if b.len() == 1 {
        return monomial_gcd(b, a);
    }
    let var = (0..n)
        .rev()
        .find(|&v| a.uses_var(v) || b.uses_var(v))
        .expect("nonconstant polynomial uses some variable");
    if !a.uses_var(var) {
        return gcd_nonzero(a, &content_in(b, var));
    }
    if !b.uses_var(var) {
        return gcd_nonzero(&content_in(a, var), b);
    }
    let ca = content_in(a, var);
    let cb = content_in(b, var);
    let c = gcd_nonzero(&ca, &cb);
    let pa = a.exact_div(&ca).expect("content divides");
    let pb = b.exact_div(&cb).expect("content divides");
    &c * &subresultant_gcd(pa, pb, var)
}

fn monomial_gcd(m: &MPoly, p: &MPoly) -> MPoly {
    let (mono, _) = m.leading_term().expect("nonzero");
    let g = p.terms().fold(mono.clone(), |g, (t, _)| g.gcd(t));
    MPoly::monomial(m.nvars(), g, One::one())
}

/// Gcd of the coefficients of `p` viewed as a polynomial in `var`.
pub(crate) fn content_in(p: &MPoly, var: usize) -> MPoly {
    let mut coeffs = p.coeffs_in(var).into_iter();
    let mut g = coeffs.next().expect("nonzero polynomial");
    for c in coeffs {
        if g.is_constant() {
            break;
        }
        g = gcd_nonzero(&g, &c);
    }
    if g.is_constant() {
        MPoly::one(p.nvars())
    } else {
        g.monic()
    }
}

fn primitive_part_in(p: &MPoly, var: usize) -> MPoly {
    let c = content_in(p, var);
    p.exact_div(&c).expect("content divides")
}

/// Leading coefficient with respect to `var`.
fn lc_in(p: &MPoly, var: usize) -> MPoly {
    p.coeff_in(var, p.degree_in(var).unwrap_or(0))
}

fn var_power(nvars: usize, var: usize, k: u32) -> Monomial {
    let mut e = vec![0; nvars];
    e[var] = k;
    Monomial::from_exponents(e)
}

/// Pseudo-remainder `lc(b)^(deg a - deg b + 1) * a mod b` in `var`.
pub(crate) fn pseudo_rem(a: &MPoly, b: &MPoly, var: usize) -> MPoly {
    let n = a.nvars();
    let db = b.degree_in(var).unwrap_or(0);
    let da = a.degree_in(var).unwrap_or(0);
    let lcb = lc_in(b, var);
    let mut e = (da + 1).saturating_sub(db);
    let mut r = a.clone();
    while !r.is_zero() {
        let dr = r.degree_in(var).unwrap_or(0);
        if dr < db {
            break;
        }
        let lead = r.coeff_in(var, dr);
        let shift = MPoly::monomial(n, var_power(n, var, dr - db), One::one());
        r = &(&lcb * &r) - &(&(&lead * &shift) * b);
        e -= 1;
    }
    &lcb.pow(e) * &r
}

/// Gcd of two polynomials primitive in `var`, both of positive degree.
fn subresultant_gcd(a: MPoly, b: MPoly, var: usize) -> MPoly {
    let n = a.nvars();
    let (mut a, mut b) = if a.degree_in(var) >= b.degree_in(var) {
        (a, b)
    } else {
        (b, a)
    };
    let mut g = MPoly::one(n);
    let mut h = MPoly::one(n);
    loop {
        let d = a.degree_in(var).unwrap() - b.degree_in(var).unwrap();
        let r = pseudo_rem(&a, &b, var);
        if r.is_zero() {
            break;
        }
        if !r.uses_var(var) {
            return MPoly::one(n);
        }
        let divisor = &g * &h.pow(d);
        a = b;
        b = r.exact_div(&divisor).expect("subresultant division is exact");
        g = lc_in(&a, var);
        h = match d {
            0 => h,
            1 => g.clone(),
            _ => g
                .pow(d)
                .exact_div(&h.pow(d - 1))
                .expect("subresultant division is exact"),
        };
    }
    primitive_part_in(&b, var)
}
