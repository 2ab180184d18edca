#![allow(dead_code)]

use planefield::forms::{gradient_form, BasisIndex};
use planefield::{GaussianRational, KForm, MPoly, Monomial};
use rand::Rng;

pub fn names(n: usize) -> Vec<String> {
    ["x", "y", "z", "w"][..n].iter().map(|s| s.to_string()).collect()
}

pub fn var(n: usize, i: usize) -> MPoly {
    MPoly::var(n, i)
}

pub fn int(n: usize, c: i64) -> MPoly {
    MPoly::constant(n, c.into())
}

/// Small coefficient, occasionally non-real or fractional.
pub fn coeff<R: Rng>(rng: &mut R) -> GaussianRational {
    let re = rng.gen_range(-3..=3);
    match rng.gen_range(0..10) {
        0 => GaussianRational::new(
            num_rational::BigRational::from_integer(re.into()),
            num_rational::BigRational::from_integer(rng.gen_range(-2..=2).into()),
        ),
        1 => GaussianRational::from_ratio(re, rng.gen_range(1..=3)),
        _ => GaussianRational::from_int(re),
    }
}

/// Integer coefficient in `-3..=3`.
pub fn int_coeff<R: Rng>(rng: &mut R) -> GaussianRational {
    GaussianRational::from_int(rng.gen_range(-3..=3))
}

pub fn poly_with<R: Rng>(
    rng: &mut R,
    n: usize,
    max_deg: u32,
    max_terms: usize,
    c: impl Fn(&mut R) -> GaussianRational,
) -> MPoly {
    let terms = rng.gen_range(0..=max_terms);
    let mut out = Vec::with_capacity(terms);
    for _ in 0..terms {
        let deg = rng.gen_range(0..=max_deg);
        let mut e = vec![0u32; n];
        for _ in 0..deg {
            e[rng.gen_range(0..n)] += 1;
        }
        out.push((Monomial::from_exponents(e), c(rng)));
    }
    MPoly::from_terms(n, out)
}

pub fn poly<R: Rng>(rng: &mut R, n: usize, max_deg: u32, max_terms: usize) -> MPoly {
    poly_with(rng, n, max_deg, max_terms, coeff)
}

pub fn nonzero_poly<R: Rng>(rng: &mut R, n: usize, max_deg: u32, max_terms: usize) -> MPoly {
    loop {
        let p = poly(rng, n, max_deg, max_terms.max(1));
        if !p.is_zero() {
            return p;
        }
    }
}

pub fn form<R: Rng>(rng: &mut R, n: usize, degree: usize, max_deg: u32) -> KForm {
    let mut f = KForm::zero(n, degree);
    for idx in BasisIndex::all(n, degree) {
        if rng.gen_bool(0.6) {
            f = &f + &KForm::term(idx, poly(rng, n, max_deg, 3), n);
        }
    }
    f
}

/// `df_1 ^ ... ^ df_p` for random polynomials; may be zero.
pub fn exact_product<R: Rng>(rng: &mut R, n: usize, p: usize, max_deg: u32) -> (Vec<MPoly>, KForm) {
    let fs: Vec<MPoly> = (0..p).map(|_| poly_with(rng, n, max_deg, 3, int_coeff)).collect();
    let mut w = gradient_form(&fs[0]);
    for f in &fs[1..] {
        w = w.wedge(&gradient_form(f)).unwrap();
    }
    (fs, w)
}

pub fn is_valid_hypersurface(f: &MPoly) -> bool {
    !f.is_constant() && f.is_squarefree() == Ok(true)
}

fn coprime_to_all(f: &MPoly, others: &[MPoly]) -> bool {
    others
        .iter()
        .all(|g| planefield::poly::gcd(f, g).map(|h| h.is_constant()).unwrap_or(false))
}

/// A planted instance: `omega = df_1 ^ ... ^ df_p` together with at least
/// `p + 1` pairwise coprime level sets `P(f_1, ..., f_p) = 0`.
pub struct Pullback {
    pub nvars: usize,
    pub codim: usize,
    pub generators: Vec<MPoly>,
    pub omega: KForm,
    pub hyps: Vec<MPoly>,
}

pub fn pullback<R: Rng>(rng: &mut R) -> Pullback {
    loop {
        let p = rng.gen_range(1..=2);
        let n = rng.gen_range(p + 1..=4);
        let (fs, omega) = exact_product(rng, n, p, 3);
        if omega.is_zero() || fs.iter().any(|f| f.is_constant()) {
            continue;
        }
        let mut candidates = Vec::new();
        for f in &fs {
            for _ in 0..2 {
                candidates.push(f - &int(n, rng.gen_range(-3..=3)));
            }
        }
        if p == 2 {
            let c = int(n, rng.gen_range(-3..=3));
            candidates.push(&(&fs[0] + &fs[1]) - &c);
            candidates.push(&(&fs[0] * &fs[1]) - &c);
        }
        let mut hyps: Vec<MPoly> = Vec::new();
        for c in candidates {
            if is_valid_hypersurface(&c) && coprime_to_all(&c, &hyps) {
                hyps.push(c);
            }
        }
        if hyps.len() >= p + 1 {
            return Pullback {
                nvars: n,
                codim: p,
                generators: fs,
                omega,
                hyps,
            };
        }
    }
}

/// `sum_i a_i (prod_{k != i} x_k) dx_i`, the cleared `sum a_i dlog x_i`;
/// its coordinate hyperplanes carry nonzero cofactors.
pub fn monomial_field<R: Rng>(rng: &mut R, n: usize) -> (KForm, Vec<MPoly>, Vec<i64>) {
    let a: Vec<i64> = (0..n)
        .map(|_| loop {
            let v = rng.gen_range(-4..=4);
            if v != 0 {
                break v;
            }
        })
        .collect();
    let mut omega = KForm::zero(n, 1);
    for i in 0..n {
        let others = (0..n)
            .filter(|&k| k != i)
            .fold(MPoly::one(n), |acc, k| &acc * &var(n, k));
        omega = &omega + &KForm::basis(n, &[i]).unwrap().mul_poly(&others.scale(&a[i].into()));
    }
    (omega, (0..n).map(|i| var(n, i)).collect(), a)
}
