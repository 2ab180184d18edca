//! Validation of a `p`-form as a codimension-`p` plane field: content
//! normalization, decomposability (Plücker contraction identities) and
//! integrability.

use crate::forms::{BasisIndex, FormError, KForm};
use crate::poly::{gcd_all, MPoly};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PlaneFieldError {
    #[error("the zero form does not define a plane field")]
    ZeroForm,
    #[error("form has degree {found}, codimension is {expected}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("codimension {codim} must lie in 1..={max}", max = .nvars.saturating_sub(1))]
    BadCodimension { codim: usize, nvars: usize },
    #[error("form is not locally decomposable")]
    NotLds,
    #[error("form uses {found} variables, expected {expected}")]
    VarCountMismatch { expected: usize, found: usize },
    #[error(transparent)]
    Form(#[from] FormError),
}

/// A validated plane field: content-free, locally decomposable `p`-form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlaneField {
    form: KForm,
    content: MPoly,
    integrable: bool,
}

impl PlaneField {
    pub fn nvars(&self) -> usize {
        self.form.nvars()
    }

    pub fn codim(&self) -> usize {
        self.form.degree()
    }

    pub fn form(&self) -> &KForm {
        &self.form
    }

    /// The monic factor removed by content normalization.
    pub fn content(&self) -> &MPoly {
        &self.content
    }

    pub fn lds_checked(&self) -> bool {
        true
    }

    pub fn integrable(&self) -> bool {
        self.integrable
    }
}

/// Divides out the monic gcd of all coefficients.
pub fn normalize_content(form: &KForm) -> Result<(KForm, MPoly), PlaneFieldError> {
    let g = gcd_all(form.coefficients()).ok_or(PlaneFieldError::ZeroForm)?;
    if g.is_one() {
        return Ok((form.clone(), g));
    }
    let reduced = form.div_poly(&g).expect("content divides every coefficient");
    Ok((reduced, g))
}

/// `(i_{e_J} omega) ^ omega = 0` for every `J` of length `p - 1`.
pub fn check_lds(form: &KForm) -> Result<bool, PlaneFieldError> {
    let (n, p) = (form.nvars(), form.degree());
    if p == 0 {
        return Err(PlaneFieldError::DegreeMismatch { expected: 1, found: 0 });
    }
    // Every 1-form and every (n-1)-form is decomposable.
    if p == 1 || p + 1 >= n {
        return Ok(true);
    }
    for j in BasisIndex::all(n, p - 1) {
        let contracted = form.contract_basis(&j)?;
        if !contracted.wedge(form)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `(i_{e_J} omega) ^ d omega = 0` for every `J` of length `p - 1`.
pub fn check_integrability(form: &KForm) -> Result<bool, PlaneFieldError> {
    if !check_lds(form)? {
        return Err(PlaneFieldError::NotLds);
    }
    let (n, p) = (form.nvars(), form.degree());
    // The products are (p+2)-forms.
    if p + 2 > n {
        return Ok(true);
    }
    let domega = form.exterior_derivative();
    if domega.is_zero() {
        return Ok(true);
    }
    for j in BasisIndex::all(n, p - 1) {
        let contracted = form.contract_basis(&j)?;
        if !contracted.wedge(&domega)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn load_plane_field(nvars: usize, codim: usize, form: &KForm) -> Result<PlaneField, PlaneFieldError> {
    if codim == 0 || codim + 1 > nvars {
        return Err(PlaneFieldError::BadCodimension { codim, nvars });
    }
    if form.nvars() != nvars {
        return Err(PlaneFieldError::VarCountMismatch {
            expected: nvars,
            found: form.nvars(),
        });
    }
    if form.degree() != codim {
        return Err(PlaneFieldError::DegreeMismatch {
            expected: codim,
            found: form.degree(),
        });
    }
    let (form, content) = normalize_content(form)?;
    if !check_lds(&form)? {
        return Err(PlaneFieldError::NotLds);
    }
    let integrable = check_integrability(&form)?;
    Ok(PlaneField {
        form,
        content,
        integrable,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::gradient_form;

    fn v(n: usize, i: usize) -> MPoly {
        MPoly::var(n, i)
    }
    fn d(n: usize, idx: &[usize]) -> KForm {
        KForm::basis(n, idx).unwrap()
    }
    fn radial() -> KForm {
        let n = 3;
        &(&d(n, &[1, 2]).mul_poly(&v(n, 0)) - &d(n, &[0, 2]).mul_poly(&v(n, 1))) + &d(n, &[0, 1]).mul_poly(&v(n, 2))
    }
    fn rotation() -> KForm {
        &d(2, &[1]).mul_poly(&v(2, 0)) - &d(2, &[0]).mul_poly(&v(2, 1))
    }
    fn symplectic() -> KForm {
        &d(4, &[0, 1]) + &d(4, &[2, 3])
    }

    #[test]
    fn content_examples() {
        let (f, g) = normalize_content(&d(3, &[0, 1]).mul_poly(&v(3, 0))).unwrap();
        assert_eq!((f, g), (d(3, &[0, 1]), v(3, 0)));
        let (f, g) = normalize_content(&rotation()).unwrap();
        assert_eq!(f, rotation());
        assert!(g.is_one());
        // x^2 y dx + x y^2 dy = xy (x dx + y dy)
        let (x, y) = (v(2, 0), v(2, 1));
        let w = &d(2, &[0]).mul_poly(&(&x.pow(2) * &y)) + &d(2, &[1]).mul_poly(&(&x * &y.pow(2)));
        let (f, g) = normalize_content(&w).unwrap();
        assert_eq!(g, &x * &y);
        assert_eq!(f, &d(2, &[0]).mul_poly(&x) + &d(2, &[1]).mul_poly(&y));
        assert_eq!(f.mul_poly(&g), w);
        assert_eq!(normalize_content(&KForm::zero(2, 1)), Err(PlaneFieldError::ZeroForm));
    }

    #[test]
    fn lds_examples() {
        assert!(check_lds(&rotation()).unwrap());
        assert!(!check_lds(&symplectic()).unwrap());
        assert!(check_lds(&radial()).unwrap());
        // symplectic oracle: omega ^ omega = 2 dx^dy^dz^dw, and dy ^ omega != 0
        let s = symplectic();
        assert_eq!(s.wedge(&s).unwrap(), d(4, &[0, 1, 2, 3]).scale(&2.into()));
        assert!(!s.contract(0).unwrap().wedge(&s).unwrap().is_zero());
    }

    #[test]
    fn lds_on_decomposable_4d_two_form() {
        // (dx + y dz) ^ (dw - x dy) in 4 variables
        let a = &d(4, &[0]) + &d(4, &[2]).mul_poly(&v(4, 1));
        let b = &d(4, &[3]) - &d(4, &[1]).mul_poly(&v(4, 0));
        assert!(check_lds(&a.wedge(&b).unwrap()).unwrap());
    }

    #[test]
    fn integrability_examples() {
        let n = 3;
        let contact = &d(n, &[2]) - &d(n, &[0]).mul_poly(&v(n, 1));
        assert!(!check_integrability(&contact).unwrap());
        assert_eq!(contact.wedge(&contact.exterior_derivative()).unwrap(), d(n, &[0, 1, 2]));
        assert!(check_integrability(&rotation()).unwrap());
        assert!(check_integrability(&radial()).unwrap());
        assert_eq!(check_integrability(&symplectic()), Err(PlaneFieldError::NotLds));
    }

    #[test]
    fn non_integrable_codim_two_in_four_vars() {
        // (dx + y dz) ^ dw: the first factor is a contact form on (x, y, z)
        let a = &d(4, &[0]) + &d(4, &[2]).mul_poly(&v(4, 1));
        let w = a.wedge(&d(4, &[3])).unwrap();
        assert!(check_lds(&w).unwrap());
        assert!(!check_integrability(&w).unwrap());
        let f = load_plane_field(4, 2, &w).unwrap();
        assert!(!f.integrable());
    }

    #[test]
    fn load_examples() {
        assert_eq!(load_plane_field(4, 2, &symplectic()), Err(PlaneFieldError::NotLds));
        let f = load_plane_field(2, 1, &rotation()).unwrap();
        assert!(f.integrable());
        let scaled = radial().mul_poly(&v(3, 0));
        let f = load_plane_field(3, 2, &scaled).unwrap();
        assert_eq!(f.form(), &radial());
        assert_eq!(f.content(), &v(3, 0));
        assert_eq!(
            load_plane_field(3, 1, &radial()),
            Err(PlaneFieldError::DegreeMismatch { expected: 1, found: 2 })
        );
        assert!(matches!(
            load_plane_field(3, 3, &d(3, &[0, 1, 2])),
            Err(PlaneFieldError::BadCodimension { .. })
        ));
        assert_eq!(
            load_plane_field(2, 1, &KForm::zero(2, 1)),
            Err(PlaneFieldError::ZeroForm)
        );
    }

    #[test]
    fn exact_forms_are_integrable() {
        let n = 4;
        let f = &(&v(n, 0) * &v(n, 1)) + &v(n, 2).pow(2);
        let g = &v(n, 3) + &(&v(n, 0) * &v(n, 0));
        let w = gradient_form(&f).wedge(&gradient_form(&g)).unwrap();
        let field = load_plane_field(n, 2, &w).unwrap();
        assert!(field.integrable());
    }
}
