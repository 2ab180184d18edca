use std::fmt;

use super::{gcd, MPoly, PolyError};

/// `num / den` with `gcd(num, den) = 1` and `den` monic in graded-lex order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: MPoly,
    den: MPoly,
}

impl RationalFunction {
    pub fn new(num: MPoly, den: MPoly) -> Result<Self, PolyError> {
        num.check_same(&den)?;
        if den.is_zero() {
            return Err(PolyError::DivisionByZero);
        }
        if num.is_zero() {
            let n = num.nvars();
            return Ok(RationalFunction {
                num,
                den: MPoly::one(n),
            });
        }
        let g = gcd(&num, &den)?;
        let mut num = num.exact_div(&g)?;
        let mut den = den.exact_div(&g)?;
        let lc = den.leading_coeff();
        if !num_traits::One::is_one(&lc) {
            let inv = lc.inv().expect("nonzero");
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        Ok(RationalFunction { num, den })
    }

    pub fn from_poly(p: MPoly) -> Self {
        let n = p.nvars();
        RationalFunction {
            num: p,
            den: MPoly::one(n),
        }
    }

    pub fn num(&self) -> &MPoly {
        &self.num
    }

    pub fn den(&self) -> &MPoly {
        &self.den
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    /// Re-reduces; a no-op on any value built through `new`.
    pub fn reduce(&self) -> Self {
        Self::new(self.num.clone(), self.den.clone()).expect("valid rational function")
    }

    pub fn render(&self, names: &[String]) -> String {
        if self.den.is_one() {
            return self.num.render(names);
        }
        let wrap = |p: &MPoly| {
            let s = p.render(names);
            if s.contains(['*', ' ', '(', '/']) || s.starts_with('-') {
                format!("({s})")
            } else {
                s
            }
        };
        format!("{}/{}", wrap(&self.num), wrap(&self.den))
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?})/({:?})", self.num, self.den)
    }
}
