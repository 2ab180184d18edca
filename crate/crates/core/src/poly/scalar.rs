//! Gaussian rationals `a + b*i` with `a, b` in Q.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// An exact element of Q(i).
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct GaussianRational {
    re: BigRational,
    im: BigRational,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Self { re, im }
    }

    pub fn from_int(n: i64) -> Self {
        Self::real(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Self::real(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn real(re: BigRational) -> Self {
        Self {
            re,
            im: BigRational::zero(),
        }
    }

    pub fn i() -> Self {
        Self {
            re: BigRational::zero(),
            im: BigRational::one(),
        }
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn im(&self) -> &BigRational {
        &self.im
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.re.is_integer() && self.im.is_integer()
    }

    pub fn conj(&self) -> Self {
        Self {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    /// `|z|^2`, always a nonnegative rational.
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if self.im.is_zero() {
            return Some(Self::real(self.re.recip()));
        }
        let n = self.norm_sqr();
        Some(Self {
            re: &self.re / &n,
            im: -(&self.im / &n),
        })
    }

    /// Least common multiple of the denominators of both parts.
    pub fn denominator_lcm(&self) -> BigInt {
        self.re.denom().lcm(self.im.denom())
    }

    pub fn scale_int(&self, k: &BigInt) -> Self {
        let k = BigRational::from_integer(k.clone());
        Self {
            re: &self.re * &k,
            im: &self.im * &k,
        }
    }

    fn fmt_rational(r: &BigRational, out: &mut String) {
        if r.is_integer() {
            out.push_str(&r.numer().to_string());
        } else {
            out.push_str(&format!("{}/{}", r.numer(), r.denom()));
        }
    }
}

impl Zero for GaussianRational {
    fn zero() -> Self {
        Self {
            re: BigRational::zero(),
            im: BigRational::zero(),
        }
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for GaussianRational {
    fn one() -> Self {
        Self::real(BigRational::one())
    }
}

impl From<i64> for GaussianRational {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl From<BigRational> for GaussianRational {
    fn from(r: BigRational) -> Self {
        Self::real(r)
    }
}

impl Add<&GaussianRational> for &GaussianRational {
    type Output = GaussianRational;
    fn add(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
        }
    }
}

impl Sub<&GaussianRational> for &GaussianRational {
    type Output = GaussianRational;
    fn sub(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational {
            re: &self.re - &rhs.re,
            im: &self.im - &rhs.im,
        }
    }
}

impl Mul<&GaussianRational> for &GaussianRational {
    type Output = GaussianRational;
    fn mul(self, rhs: &GaussianRational) -> GaussianRational {
        if self.im.is_zero() && rhs.im.is_zero() {
            return GaussianRational::real(&self.re * &rhs.re);
        }
        GaussianRational {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

/// Panics on division by zero, like the rational types it wraps.
impl Div<&GaussianRational> for &GaussianRational {
    type Output = GaussianRational;
    fn div(self, rhs: &GaussianRational) -> GaussianRational {
        self * &rhs.inv().expect("division by zero")
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<GaussianRational> for GaussianRational {
            type Output = GaussianRational;
            fn $m(self, rhs: GaussianRational) -> GaussianRational {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&GaussianRational> for GaussianRational {
            type Output = GaussianRational;
            fn $m(self, rhs: &GaussianRational) -> GaussianRational {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl AddAssign<&GaussianRational> for GaussianRational {
    fn add_assign(&mut self, rhs: &GaussianRational) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl SubAssign<&GaussianRational> for GaussianRational {
    fn sub_assign(&mut self, rhs: &GaussianRational) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

impl MulAssign<&GaussianRational> for GaussianRational {
    fn mul_assign(&mut self, rhs: &GaussianRational) {
        *self = &*self * rhs;
    }
}

impl Neg for GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational {
            re: -self.re,
            im: -self.im,
        }
    }
}

impl Neg for &GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational {
            re: -self.re.clone(),
            im: -self.im.clone(),
        }
    }
}

/// Canonical form: `a/b`, `c/d*i`, `a/b+c/d*i`; zero parts suppressed,
/// integers without denominator, unit imaginary part written as `i`.
impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        if self.im.is_zero() {
            Self::fmt_rational(&self.re, &mut out);
            return f.write_str(&out);
        }
        if !self.re.is_zero() {
            Self::fmt_rational(&self.re, &mut out);
            if self.im.is_positive() {
                out.push('+');
            }
        }
        if self.im.is_one() {
            out.push('i');
        } else if (-self.im.clone()).is_one() {
            out.push_str("-i");
        } else {
            Self::fmt_rational(&self.im, &mut out);
            out.push_str("*i");
        }
        f.write_str(&out)
    }
}

impl fmt::Debug for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid scalar `{0}`")]
pub struct ParseScalarError(pub String);

/// Accepts the canonical output form plus the looser input spellings:
/// `-3`, `5/7`, `i`, `-i`, `1/2-3i`, `2/3*i`, `1/2+3/4*i`.
impl FromStr for GaussianRational {
    type Err = ParseScalarError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseScalarError(s.to_string());
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if t.is_empty() {
            return Err(err());
        }
        // Split at a sign that is not the leading one.
        let split = t
            .char_indices()
            .skip(1)
            .find(|&(_, c)| c == '+' || c == '-')
            .map(|(k, _)| k);
        let (first, second) = match split {
            Some(k) => (&t[..k], Some(&t[k..])),
            None => (t.as_str(), None),
        };
        let mut value = GaussianRational::zero();
        let mut seen_re = false;
        let mut seen_im = false;
        for part in std::iter::once(first).chain(second) {
            let (sign, body) = match part.as_bytes()[0] {
                b'-' => (-1, &part[1..]),
                b'+' => (1, &part[1..]),
                _ => (1, part),
            };
            let (mag, imaginary) = if let Some(b) = body.strip_suffix('i') {
                let b = b.strip_suffix('*').unwrap_or(b);
                if b.is_empty() {
                    (BigRational::one(), true)
                } else {
                    (parse_rational(b).ok_or_else(err)?, true)
                }
            } else {
                (parse_rational(body).ok_or_else(err)?, false)
            };
            let mag = if sign < 0 { -mag } else { mag };
            if imaginary {
                if seen_im {
                    return Err(err());
                }
                seen_im = true;
                value.im = mag;
            } else {
                if seen_re || seen_im {
                    return Err(err());
                }
                seen_re = true;
                value.re = mag;
            }
        }
        Ok(value)
    }
}

fn parse_rational(s: &str) -> Option<BigRational> {
    let valid = |d: &str| !d.is_empty() && d.bytes().all(|b| b.is_ascii_digit());
    match s.split_once('/') {
        Some((n, d)) if valid(n) && valid(d) => {
            let d: BigInt = d.parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(BigRational::new(n.parse().ok()?, d))
        }
        None if valid(s) => Some(BigRational::from_integer(s.parse().ok()?)),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> GaussianRational {
        s.parse().unwrap()
    }

    #[test]
    fn parses_input_spellings() {
        assert_eq!(q("-3"), GaussianRational::from_int(-3));
        assert_eq!(q("5/7"), GaussianRational::from_ratio(5, 7));
        assert_eq!(q("10/14"), GaussianRational::from_ratio(5, 7));
        assert_eq!(q("i"), GaussianRational::i());
        let z = q("1/2-3i");
        assert_eq!(z.re(), &BigRational::new(1.into(), 2.into()));
        assert_eq!(z.im(), &BigRational::from_integer((-3).into()));
        assert_eq!(q("2/3*i").im(), &BigRational::new(2.into(), 3.into()));
        assert!(q("2/3*i").re().is_zero());
    }

    #[test]
    fn rejects_garbage() {
        for bad in ["", "1/0", "x", "1+2", "i+i", "3i+1", "1//2", "--1"] {
            assert!(bad.parse::<GaussianRational>().is_err(), "{bad}");
        }
    }

    #[test]
    fn canonical_output() {
        assert_eq!(q("0").to_string(), "0");
        assert_eq!(q("-6/4").to_string(), "-3/2");
        assert_eq!(q("i").to_string(), "i");
        assert_eq!(q("-i").to_string(), "-i");
        assert_eq!(q("1/2-3i").to_string(), "1/2-3*i");
        assert_eq!(q("1/2+3/4*i").to_string(), "1/2+3/4*i");
        assert_eq!(q("2/3*i").to_string(), "2/3*i");
        for s in ["7", "-1/9", "1/2-3*i", "-5+i", "3/8*i"] {
            assert_eq!(q(&q(s).to_string()), q(s));
        }
    }

    #[test]
    fn field_operations() {
        let a = q("1+2i");
        let b = q("3-i");
        assert_eq!(&a * &b, q("5+5i"));
        assert_eq!(&(&a * &b) / &b, a);
        assert_eq!(&a * &a.inv().unwrap(), GaussianRational::one());
        assert!(GaussianRational::zero().inv().is_none());
    }
}
