//! Invariant hypersurfaces, cofactors, flat weight vectors and logarithmic
//! first integrals of a plane field.
//!
//! For an invariant hypersurface `f = 0` the form `omega ^ df` is divisible
//! by `f`, and the quotient is the cofactor `(p+1)`-form. A weight vector
//! `lambda` whose cofactor combination `sum lambda_j cof_j` vanishes gives
//! the closed logarithmic 1-form `xi = sum lambda_j dlog f_j` with
//! `xi ^ omega = 0`, i.e. `H = prod f_j^lambda_j` is constant along the
//! plane field. `p` such forms with nonzero wedge give a first integral.
//!
//! Every identity is checked with denominators cleared, so each check is
//! a polynomial identity over the Gaussian rationals.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::forms::{gradient_form, BasisIndex, FormError, KForm};
use crate::linalg::{nullspace, Matrix};
use crate::plane_field::PlaneField;
use crate::poly::{gcd, GaussianRational, MPoly, Monomial, PolyError, RationalFunction};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DarbouxError {
    #[error("hypersurface polynomial is constant")]
    ConstantPolynomial,
    #[error("hypersurface {0:?} is not squarefree")]
    NotSquarefree(MPoly),
    #[error("hypersurface {0:?} is not invariant")]
    NotInvariant(MPoly),
    #[error("hypersurfaces {0:?} and {1:?} share a common factor")]
    NotCoprime(MPoly, MPoly),
    #[error("variable count mismatch: {left} vs {right}")]
    VarCountMismatch { left: usize, right: usize },
    #[error("{weights} weights for {hypersurfaces} hypersurfaces")]
    LengthMismatch { weights: usize, hypersurfaces: usize },
    #[error("all weights are zero")]
    ZeroWeights,
    #[error("no hypersurfaces given")]
    Empty,
    #[error("weighted logarithmic form does not annihilate the plane field")]
    FlatnessViolated,
    #[error("only {found} independent logarithmic forms, {needed} needed")]
    InsufficientHypersurfaces { found: usize, needed: usize },
    #[error("forms are not proportional")]
    NotProportional,
    #[error("ratio is not a first integral of the plane field")]
    RatioNotFirstIntegral,
    #[error("certificate check failed: {0}")]
    Internal(String),
}

impl From<PolyError> for DarbouxError {
    fn from(e: PolyError) -> Self {
        match e {
            PolyError::ConstantPolynomial => DarbouxError::ConstantPolynomial,
            PolyError::VarCountMismatch { left, right } => DarbouxError::VarCountMismatch { left, right },
            other => DarbouxError::Internal(other.to_string()),
        }
    }
}

impl From<FormError> for DarbouxError {
    fn from(e: FormError) -> Self {
        match e {
            FormError::VarCountMismatch { left, right } => DarbouxError::VarCountMismatch { left, right },
            other => DarbouxError::Internal(other.to_string()),
        }
    }
}

/// A reduced hypersurface `f = 0`: nonconstant, squarefree, monic.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Hypersurface {
    poly: MPoly,
}

impl Hypersurface {
    pub fn new(poly: &MPoly) -> Result<Self, DarbouxError> {
        if !poly.is_squarefree()? {
            return Err(DarbouxError::NotSquarefree(poly.clone()));
        }
        Ok(Hypersurface { poly: poly.monic() })
    }

    pub fn poly(&self) -> &MPoly {
        &self.poly
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CofactorRecord {
    pub hypersurface: Hypersurface,
    /// The `(p+1)`-form `c` with `omega ^ df = f c`.
    pub cofactor: KForm,
}

impl CofactorRecord {
    /// Re-checks `omega ^ df - f c = 0` by multiplication.
    pub fn check(&self, field: &PlaneField) -> bool {
        let f = self.hypersurface.poly();
        match field.form().wedge(&gradient_form(f)) {
            Ok(w) => w == self.cofactor.mul_poly(f),
            Err(_) => false,
        }
    }
}

/// Invariance test: `f` divides every coefficient of `omega ^ df`.
pub fn invariance_cofactor(field: &PlaneField, f: &MPoly) -> Result<CofactorRecord, DarbouxError> {
    if f.nvars() != field.nvars() {
        return Err(DarbouxError::VarCountMismatch {
            left: field.nvars(),
            right: f.nvars(),
        });
    }
    let hypersurface = Hypersurface::new(f)?;
    let f = hypersurface.poly();
    let w = field.form().wedge(&gradient_form(f))?;
    let cofactor = w.div_poly(f).map_err(|_| DarbouxError::NotInvariant(f.clone()))?;
    Ok(CofactorRecord { hypersurface, cofactor })
}

/// Column `j` lists every coefficient of cofactor `j`; rows are the
/// `(basis, monomial)` pairs occurring in any cofactor, in sorted order.
pub fn cofactor_matrix(records: &[CofactorRecord]) -> Result<Matrix, DarbouxError> {
    let first = records.first().ok_or(DarbouxError::Empty)?;
    let n = first.cofactor.nvars();
    if let Some(r) = records
        .iter()
        .find(|r| r.cofactor.nvars() != n || r.cofactor.degree() != first.cofactor.degree())
    {
        return Err(DarbouxError::VarCountMismatch {
            left: n,
            right: r.cofactor.nvars(),
        });
    }
    let keys: BTreeSet<(&BasisIndex, &Monomial)> = records
        .iter()
        .flat_map(|r| r.cofactor.flat_terms().map(|(i, m, _)| (i, m)))
        .collect();
    let mut m = Matrix::zeros(keys.len(), records.len());
    for (row, (idx, mono)) in keys.iter().enumerate() {
        for (col, r) in records.iter().enumerate() {
            let c = r.cofactor.coeff(idx).coeff(mono);
            if !c.is_zero() {
                m.set(row, col, c);
            }
        }
    }
    Ok(m)
}

/// Basis of the weight vectors `lambda` with `sum lambda_j cof_j = 0`.
pub fn flat_kernel(matrix: &Matrix) -> Vec<Vec<GaussianRational>> {
    nullspace(matrix)
}

/// `sum_j lambda_j cof_j`.
pub fn weighted_cofactor_sum(records: &[CofactorRecord], weights: &[GaussianRational]) -> KForm {
    let first = &records[0].cofactor;
    let mut acc = KForm::zero(first.nvars(), first.degree());
    for (r, w) in records.iter().zip(weights) {
        if !w.is_zero() {
            acc = &acc + &r.cofactor.scale(w);
        }
    }
    acc
}

/// `xi = sum_j lambda_j dlog f_j`, stored as weights over a fixed list of
/// hypersurfaces (zero weights allowed).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogForm {
    weights: Vec<GaussianRational>,
    hypersurfaces: Vec<Hypersurface>,
}

impl LogForm {
    pub fn new(weights: Vec<GaussianRational>, hypersurfaces: Vec<Hypersurface>) -> Result<Self, DarbouxError> {
        if weights.len() != hypersurfaces.len() {
            return Err(DarbouxError::LengthMismatch {
                weights: weights.len(),
                hypersurfaces: hypersurfaces.len(),
            });
        }
        if weights.iter().all(Zero::is_zero) {
            return Err(DarbouxError::ZeroWeights);
        }
        for (a, h) in hypersurfaces.iter().enumerate() {
            if let Some(other) = hypersurfaces[..a].iter().find(|o| o.poly() == h.poly()) {
                return Err(DarbouxError::NotCoprime(other.poly().clone(), h.poly().clone()));
            }
        }
        Ok(LogForm { weights, hypersurfaces })
    }

    pub fn weights(&self) -> &[GaussianRational] {
        &self.weights
    }

    pub fn hypersurfaces(&self) -> &[Hypersurface] {
        &self.hypersurfaces
    }

    fn nvars(&self) -> usize {
        self.hypersurfaces[0].poly().nvars()
    }

    /// `(prod_k f_k) xi = sum_j lambda_j (prod_{k != j} f_k) df_j`, the
    /// product taken over every listed hypersurface.
    pub fn cleared(&self) -> KForm {
        self.cleared_over(|_| true)
    }

    /// Same, with the product only over hypersurfaces of nonzero weight.
    /// Differs from [`LogForm::cleared`] by a nonzero polynomial factor, so
    /// the two vanish (and wedge to zero) together.
    pub fn cleared_on_support(&self) -> KForm {
        self.cleared_over(|w| !w.is_zero())
    }

    fn cleared_over(&self, keep: impl Fn(&GaussianRational) -> bool) -> KForm {
        let n = self.nvars();
        let kept: Vec<usize> = (0..self.weights.len()).filter(|&j| keep(&self.weights[j])).collect();
        let mut out = KForm::zero(n, 1);
        for &j in &kept {
            if self.weights[j].is_zero() {
                continue;
            }
            let others = kept
                .iter()
                .filter(|&&k| k != j)
                .fold(MPoly::one(n), |acc, &k| &acc * self.hypersurfaces[k].poly());
            let term = gradient_form(self.hypersurfaces[j].poly()).mul_poly(&others.scale(&self.weights[j]));
            out = &out + &term;
        }
        out
    }

    /// All weights real: then they can be scaled to integers.
    pub fn is_real(&self) -> bool {
        self.weights.iter().all(GaussianRational::is_real)
    }

    /// For real weights, the proportional vector of coprime integers with
    /// the same signs; otherwise the weights unchanged.
    pub fn integer_scaled(&self) -> LogForm {
        if !self.is_real() {
            return self.clone();
        }
        let lcm = self.weights.iter().fold(BigInt::one(), |l, w| l.lcm(w.re().denom()));
        let ints: Vec<BigInt> = self
            .weights
            .iter()
            .map(|w| (w.re() * BigRational::from_integer(lcm.clone())).to_integer())
            .collect();
        let g = ints.iter().fold(BigInt::zero(), |g, v| g.gcd(v));
        let weights = ints
            .into_iter()
            .map(|v| GaussianRational::real(BigRational::from_integer(v / &g)))
            .collect();
        LogForm {
            weights,
            hypersurfaces: self.hypersurfaces.clone(),
        }
    }

    /// `H = prod f_j^lambda_j` as text, e.g. `y * x^-2`. Factors with
    /// positive exponent come first, each group in list order.
    pub fn render_multiplicative(&self, names: &[String]) -> String {
        let positive = |w: &GaussianRational| w.re().is_positive() || (w.re().is_zero() && w.im().is_positive());
        let mut factors = Vec::new();
        for pass in [true, false] {
            for (w, h) in self.weights.iter().zip(&self.hypersurfaces) {
                if w.is_zero() || positive(w) != pass {
                    continue;
                }
                let base = h.poly().render(names);
                let base = if h.poly().len() > 1 || base.contains('(') {
                    format!("({base})")
                } else {
                    base
                };
                let exp = if w.is_one() {
                    String::new()
                } else if w.is_real() && w.re().is_integer() {
                    format!("^{w}")
                } else {
                    format!("^({w})")
                };
                factors.push(format!("{base}{exp}"));
            }
        }
        factors.join(" * ")
    }
}

/// Certifies `lambda` by checking the cleared identity `xi ^ omega = 0`.
pub fn build_log_form(
    field: &PlaneField,
    weights: &[GaussianRational],
    hypersurfaces: &[Hypersurface],
) -> Result<LogForm, DarbouxError> {
    let xi = LogForm::new(weights.to_vec(), hypersurfaces.to_vec())?;
    if xi.nvars() != field.nvars() {
        return Err(DarbouxError::VarCountMismatch {
            left: field.nvars(),
            right: xi.nvars(),
        });
    }
    if !verify_first_integral(field, &xi) {
        return Err(DarbouxError::FlatnessViolated);
    }
    Ok(xi)
}

/// `true` iff `sum_j lambda_j (prod_{k != j} f_k) df_j ^ omega = 0`.
pub fn verify_first_integral(field: &PlaneField, xi: &LogForm) -> bool {
    match xi.cleared_on_support().wedge(field.form()) {
        Ok(w) => w.is_zero(),
        Err(_) => false,
    }
}

/// Greedy selection in input order: keep a candidate when the cleared
/// wedge with the already chosen ones stays nonzero; stop at `p`.
pub fn select_independent(candidates: &[LogForm], p: usize) -> Result<Vec<LogForm>, DarbouxError> {
    let mut chosen: Vec<LogForm> = Vec::with_capacity(p);
    let mut acc: Option<KForm> = None;
    for c in candidates {
        if chosen.len() == p {
            break;
        }
        let one = c.cleared_on_support();
        let next = match &acc {
            None => one,
            Some(a) => a.wedge(&one)?,
        };
        if !next.is_zero() {
            acc = Some(next);
            chosen.push(c.clone());
        }
    }
    if chosen.len() < p {
        return Err(DarbouxError::InsufficientHypersurfaces {
            found: chosen.len(),
            needed: p,
        });
    }
    Ok(chosen)
}

/// The cleared `p`-form `prod_i (prod_k f_k) xi_i`.
pub fn wedge_log_forms(selected: &[LogForm]) -> Result<KForm, DarbouxError> {
    let mut it = selected.iter();
    let first = it.next().ok_or(DarbouxError::Empty)?.cleared();
    it.try_fold(first, |acc, xi| acc.wedge(&xi.cleared()).map_err(DarbouxError::from))
}

/// `h` with `a = h b` coefficientwise, if the two forms are proportional.
fn proportionality(a: &KForm, b: &KForm) -> Result<RationalFunction, DarbouxError> {
    if a.nvars() != b.nvars() {
        return Err(DarbouxError::VarCountMismatch {
            left: a.nvars(),
            right: b.nvars(),
        });
    }
    if a.degree() != b.degree() || b.is_zero() {
        return Err(DarbouxError::NotProportional);
    }
    if a.is_zero() {
        return Ok(RationalFunction::from_poly(MPoly::zero(a.nvars())));
    }
    // Supports must agree.
    if a.terms().count() != b.terms().count() || a.terms().zip(b.terms()).any(|((i, _), (j, _))| i != j) {
        return Err(DarbouxError::NotProportional);
    }
    let (idx, bc) = b.terms().min_by_key(|(_, c)| c.len()).expect("nonzero");
    let h = RationalFunction::new(a.coeff(idx), bc.clone())?;
    for (i, ac) in a.terms() {
        if &(ac * h.den()) != &(&b.coeff(i) * h.num()) {
            return Err(DarbouxError::NotProportional);
        }
    }
    Ok(h)
}

/// `h` with `omega = h Xi`, certified by cross-multiplication.
pub fn divide_forms(field: &PlaneField, xi: &KForm) -> Result<RationalFunction, DarbouxError> {
    proportionality(field.form(), xi)
}

/// `h_IJ` with `Xi_I = h_IJ Xi_J`, accepted only when `d h_IJ ^ omega = 0`.
pub fn extract_ratio(xi_i: &KForm, xi_j: &KForm, field: &PlaneField) -> Result<RationalFunction, DarbouxError> {
    let h = proportionality(xi_i, xi_j)?;
    // den dnum - num dden, the numerator of dh
    let dh = &gradient_form(h.num()).mul_poly(h.den()) - &gradient_form(h.den()).mul_poly(h.num());
    if !dh.wedge(field.form())?.is_zero() {
        return Err(DarbouxError::RatioNotFirstIntegral);
    }
    Ok(h)
}

/// Hypersurfaces, their cofactors and the flat weight vectors.
#[derive(Clone, Debug)]
pub struct DarbouxSystem {
    pub field: PlaneField,
    pub records: Vec<CofactorRecord>,
    pub kernel_basis: Vec<Vec<GaussianRational>>,
}

impl DarbouxSystem {
    /// Validates the candidates, extracts every cofactor and solves for the
    /// flat weights. Fails on the first non-invariant candidate.
    pub fn build(field: &PlaneField, hyps: &[MPoly]) -> Result<Self, DarbouxError> {
        if hyps.is_empty() {
            return Err(DarbouxError::Empty);
        }
        let records = hyps
            .iter()
            .map(|f| invariance_cofactor(field, f))
            .collect::<Result<Vec<_>, _>>()?;
        check_coprime(records.iter().map(|r| &r.hypersurface))?;
        let matrix = cofactor_matrix(&records)?;
        let kernel_basis = flat_kernel(&matrix);
        for lambda in &kernel_basis {
            if !weighted_cofactor_sum(&records, lambda).is_zero() {
                return Err(DarbouxError::Internal(
                    "kernel vector does not annihilate the cofactors".into(),
                ));
            }
        }
        Ok(DarbouxSystem {
            field: field.clone(),
            records,
            kernel_basis,
        })
    }

    pub fn hypersurfaces(&self) -> Vec<Hypersurface> {
        self.records.iter().map(|r| r.hypersurface.clone()).collect()
    }
}

fn check_coprime<'a>(hyps: impl Iterator<Item = &'a Hypersurface>) -> Result<(), DarbouxError> {
    let hyps: Vec<&Hypersurface> = hyps.collect();
    for (a, ha) in hyps.iter().enumerate() {
        for hb in &hyps[..a] {
            if !gcd(ha.poly(), hb.poly())?.is_constant() {
                return Err(DarbouxError::NotCoprime(hb.poly().clone(), ha.poly().clone()));
            }
        }
    }
    Ok(())
}

/// One component `H_i = prod f_j^{e_j}` of the first integral.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub log_form: LogForm,
    /// Exponents are coprime integers, so `H_i` is a rational function.
    pub rational: bool,
}

#[derive(Clone, Debug)]
pub struct FirstIntegralReport {
    pub system: DarbouxSystem,
    pub components: Vec<Component>,
    pub verified: bool,
    /// `h` with `omega = h Xi`, `Xi` the cleared wedge of the components.
    pub proportionality_factor: Option<RationalFunction>,
}

impl FirstIntegralReport {
    pub fn log_forms(&self) -> impl Iterator<Item = &LogForm> {
        self.components.iter().map(|c| &c.log_form)
    }
}

pub fn first_integral(field: &PlaneField, hyps: &[MPoly]) -> Result<FirstIntegralReport, DarbouxError> {
    let system = DarbouxSystem::build(field, hyps)?;
    first_integral_from_system(system)
}

/// Runs the rest of the pipeline on an already solved system.
pub fn first_integral_from_system(system: DarbouxSystem) -> Result<FirstIntegralReport, DarbouxError> {
    let field = &system.field;
    let p = field.codim();
    let hyps = system.hypersurfaces();
    let candidates = system
        .kernel_basis
        .iter()
        .map(|lambda| build_log_form(field, lambda, &hyps))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| match e {
            DarbouxError::FlatnessViolated => {
                DarbouxError::Internal("kernel vector fails the flatness identity".into())
            }
            other => other,
        })?;
    let selected = select_independent(&candidates, p)?;
    let mut components = Vec::with_capacity(p);
    for xi in &selected {
        let scaled = xi.integer_scaled();
        if !verify_first_integral(field, &scaled) {
            return Err(DarbouxError::Internal("component fails xi ^ omega = 0".into()));
        }
        components.push(Component {
            rational: scaled.is_real(),
            log_form: scaled,
        });
    }
    let scaled: Vec<LogForm> = components.iter().map(|c| c.log_form.clone()).collect();
    let wedge = wedge_log_forms(&scaled)?;
    if wedge.is_zero() {
        return Err(DarbouxError::Internal("selected components are dependent".into()));
    }
    let h = divide_forms(field, &wedge)
        .map_err(|_| DarbouxError::Internal("cleared wedge is not proportional to omega".into()))?;
    Ok(FirstIntegralReport {
        system,
        components,
        verified: true,
        proportionality_factor: Some(h),
    })
}
