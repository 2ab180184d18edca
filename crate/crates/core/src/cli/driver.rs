use num_traits::Zero;

use crate::darboux::{
    first_integral_from_system, invariance_cofactor, verify_first_integral, wedge_log_forms, CofactorRecord,
    DarbouxError, DarbouxSystem, Hypersurface, LogForm,
};
use crate::forms::gradient_form;
use crate::plane_field::{load_plane_field, PlaneField, PlaneFieldError};

use super::parse::ProblemFile;
use super::report::{CofactorEntry, ComponentEntry, Report, Status, Subcommand};

/// Exit codes of the command-line tool.
pub mod exit {
    pub const OK: i32 = 0;
    /// Not LDS, not invariant, or not enough hypersurfaces.
    pub const NEGATIVE: i32 = 1;
    pub const INVALID_INPUT: i32 = 2;
    pub const CERTIFICATE_FAILURE: i32 = 3;
}

#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    /// Reject inputs whose polynomials exceed this total degree.
    pub max_degree: Option<u32>,
}

/// Result of running a subcommand.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub report: Report,
    pub exit_code: i32,
}

impl Outcome {
    fn new(report: Report, exit_code: i32) -> Self {
        Outcome { report, exit_code }
    }
}

fn status_exit(status: Status) -> i32 {
    match status {
        Status::Ok => exit::OK,
        Status::NotLds | Status::NotInvariant | Status::Insufficient => exit::NEGATIVE,
        Status::Error => exit::INVALID_INPUT,
    }
}

/// Runs `check`, `invariant` or `integrate`. For `verify` use
/// [`verify_report`].
pub fn run(cmd: Subcommand, problem: &ProblemFile, opts: &RunOptions) -> Outcome {
    let mut report = Report::new(cmd, problem.vars.clone(), problem.codim, problem.hyps.clone());
    let names = &problem.vars;

    if let Some(max) = opts.max_degree {
        let omega_deg = problem
            .omega
            .coefficients()
            .filter_map(|c| c.total_degree())
            .max()
            .unwrap_or(0);
        if omega_deg > max {
            report
                .diagnostics
                .push(format!("omega has coefficient degree {omega_deg} > --max-degree {max}"));
            return Outcome::new(report, exit::INVALID_INPUT);
        }
        if let Some(h) = problem.hyps.iter().find(|h| h.total_degree().unwrap_or(0) > max) {
            report
                .diagnostics
                .push(format!("hypersurface {} exceeds --max-degree {max}", h.render(names)));
            return Outcome::new(report, exit::INVALID_INPUT);
        }
    }

    let field = match load_field(problem, &mut report) {
        Some(f) => f,
        None => {
            let code = status_exit(report.status);
            return Outcome::new(report, code);
        }
    };
    report.status = Status::Ok;
    if cmd == Subcommand::Check {
        return Outcome::new(report, exit::OK);
    }

    // invariance
    let mut records = Vec::with_capacity(problem.hyps.len());
    let mut all_invariant = true;
    for h in &problem.hyps {
        match invariance_cofactor(&field, h) {
            Ok(r) => {
                report.cofactors.push(CofactorEntry::Cofactor(r.cofactor.clone()));
                records.push(r);
            }
            Err(DarbouxError::NotInvariant(_)) => {
                all_invariant = false;
                report.cofactors.push(CofactorEntry::NotInvariant);
                report
                    .diagnostics
                    .push(format!("hypersurface {} = 0 is not invariant", h.render(names)));
            }
            Err(e) => return input_error(report, describe(&e, names)),
        }
    }
    if !all_invariant {
        report.status = Status::NotInvariant;
        return Outcome::new(report, exit::NEGATIVE);
    }
    if cmd == Subcommand::Invariant {
        return Outcome::new(report, exit::OK);
    }

    let system = match DarbouxSystem::build(&field, &problem.hyps) {
        Ok(s) => s,
        Err(e @ DarbouxError::Internal(_)) => return certificate_failure(report, describe(&e, names)),
        Err(e) => return input_error(report, describe(&e, names)),
    };
    debug_assert_eq!(system.records, records);
    report.kernel = Some(system.kernel_basis.clone());
    match first_integral_from_system(system) {
        Ok(fi) => {
            report.components = fi
                .components
                .iter()
                .map(|c| ComponentEntry {
                    exponents: c.log_form.weights().to_vec(),
                    rational: c.rational,
                })
                .collect();
            report.proportionality = fi.proportionality_factor;
            report.verified = fi.verified;
            Outcome::new(report, exit::OK)
        }
        Err(e @ DarbouxError::InsufficientHypersurfaces { .. }) => {
            report.status = Status::Insufficient;
            report.diagnostics.push(describe(&e, names));
            Outcome::new(report, exit::NEGATIVE)
        }
        Err(e @ DarbouxError::Internal(_)) => certificate_failure(report, describe(&e, names)),
        Err(e) => input_error(report, describe(&e, names)),
    }
}

fn input_error(mut report: Report, message: String) -> Outcome {
    report.status = Status::Error;
    report.diagnostics.push(message);
    Outcome::new(report, exit::INVALID_INPUT)
}

fn certificate_failure(mut report: Report, message: String) -> Outcome {
    report.status = Status::Error;
    report.verified = false;
    report.diagnostics.push(message);
    Outcome::new(report, exit::CERTIFICATE_FAILURE)
}

/// Loads the plane field, filling the form-level report fields. `None`
/// when the form is rejected; `report.status` then says why.
fn load_field(problem: &ProblemFile, report: &mut Report) -> Option<PlaneField> {
    match load_plane_field(problem.nvars(), problem.codim, &problem.omega) {
        Ok(f) => {
            report.lds = true;
            report.integrable = Some(f.integrable());
            report.content = Some(f.content().clone());
            report.omega = Some(f.form().clone());
            Some(f)
        }
        Err(PlaneFieldError::NotLds) => {
            report.status = Status::NotLds;
            report
                .diagnostics
                .push("omega is not locally decomposable: a Plücker contraction identity fails".into());
            None
        }
        Err(e) => {
            report.status = Status::Error;
            report.diagnostics.push(format!("invalid plane field: {e}"));
            None
        }
    }
}

fn describe(e: &DarbouxError, names: &[String]) -> String {
    match e {
        DarbouxError::NotSquarefree(p) => format!("hypersurface {} is not squarefree", p.render(names)),
        DarbouxError::NotInvariant(p) => format!("hypersurface {} = 0 is not invariant", p.render(names)),
        DarbouxError::NotCoprime(a, b) => {
            format!(
                "hypersurfaces {} and {} share a common factor",
                a.render(names),
                b.render(names)
            )
        }
        DarbouxError::Empty => "no hypersurfaces given".into(),
        other => other.to_string(),
    }
}

/// Re-checks every certificate in `claimed` against the problem. The
/// returned report is `claimed` with `verified` and diagnostics replaced.
pub fn verify_report(problem: &ProblemFile, claimed: &Report) -> Outcome {
    let mut report = claimed.clone();
    report.command = Subcommand::Verify;
    report.diagnostics.clear();
    let failures = certificate_failures(problem, claimed);
    if failures.is_empty() {
        report.verified = true;
        let code = status_exit(claimed.status);
        report.diagnostics.push("all certificates re-checked exactly".into());
        Outcome::new(report, code)
    } else {
        report.verified = false;
        report.diagnostics = failures;
        Outcome::new(report, exit::CERTIFICATE_FAILURE)
    }
}

fn certificate_failures(problem: &ProblemFile, claimed: &Report) -> Vec<String> {
    let mut fails = Vec::new();
    let names = &problem.vars;
    if claimed.vars != problem.vars || claimed.codim != problem.codim || claimed.hyps != problem.hyps {
        fails.push("report does not belong to this problem (variables, codimension or hypersurfaces differ)".into());
        return fails;
    }
    let field = match load_plane_field(problem.nvars(), problem.codim, &problem.omega) {
        Ok(f) => f,
        Err(PlaneFieldError::NotLds) => {
            if claimed.lds || claimed.status != Status::NotLds {
                fails.push("omega is not locally decomposable, report claims otherwise".into());
            }
            return fails;
        }
        Err(e) => {
            if claimed.status != Status::Error {
                fails.push(format!("invalid plane field: {e}"));
            }
            return fails;
        }
    };
    if !claimed.lds {
        fails.push("omega is locally decomposable, report claims otherwise".into());
    }
    if claimed.integrable.is_some_and(|b| b != field.integrable()) {
        fails.push("integrability flag is wrong".into());
    }
    if claimed.content.as_ref().is_some_and(|c| c != field.content()) {
        fails.push("extracted content is wrong".into());
    }
    if claimed.omega.as_ref().is_some_and(|w| w != field.form()) {
        fails.push("normalized omega differs".into());
    }

    // cofactor identities: omega ^ df = f * cofactor
    let mut records = Vec::new();
    for (j, entry) in claimed.cofactors.iter().enumerate() {
        let h = &problem.hyps[j];
        match entry {
            CofactorEntry::Cofactor(c) => {
                let Ok(hs) = Hypersurface::new(h) else {
                    fails.push(format!("hypersurface {} is not a valid hypersurface", h.render(names)));
                    continue;
                };
                let rec = CofactorRecord {
                    hypersurface: hs,
                    cofactor: c.clone(),
                };
                if !rec.check(&field) {
                    fails.push(format!("cofactor {j} fails omega ^ df = f * cofactor"));
                }
                records.push(rec);
            }
            CofactorEntry::NotInvariant => {
                let w = field.form().wedge(&gradient_form(h)).expect("same arity");
                if w.div_poly(h).is_ok() {
                    fails.push(format!(
                        "hypersurface {} = 0 is invariant, report claims otherwise",
                        h.render(names)
                    ));
                }
            }
        }
    }

    // kernel vectors annihilate the cofactors
    if let Some(kernel) = &claimed.kernel {
        if records.len() != problem.hyps.len() {
            fails.push("kernel given without a full set of cofactors".into());
        } else {
            for (j, lambda) in kernel.iter().enumerate() {
                if lambda.len() != records.len() {
                    fails.push(format!("kernel vector {j} has the wrong length"));
                    continue;
                }
                let first = &records[0].cofactor;
                let mut acc = crate::forms::KForm::zero(first.nvars(), first.degree());
                for (r, w) in records.iter().zip(lambda) {
                    if !w.is_zero() {
                        acc = &acc + &r.cofactor.scale(w);
                    }
                }
                if !acc.is_zero() {
                    fails.push(format!("kernel vector {j} does not annihilate the cofactors"));
                }
            }
        }
    }

    // components
    if !claimed.components.is_empty() {
        let hs: Result<Vec<_>, _> = problem.hyps.iter().map(Hypersurface::new).collect();
        let Ok(hs) = hs else {
            fails.push("components refer to invalid hypersurfaces".into());
            return fails;
        };
        let mut forms = Vec::new();
        for (j, c) in claimed.components.iter().enumerate() {
            match LogForm::new(c.exponents.clone(), hs.clone()) {
                Ok(xi) => {
                    if !verify_first_integral(&field, &xi) {
                        fails.push(format!("component {j} is not a first integral: xi ^ omega != 0"));
                    }
                    if c.rational != xi.is_real() || (c.rational && !c.exponents.iter().all(|e| e.is_integer())) {
                        fails.push(format!("component {j} has a wrong rationality flag"));
                    }
                    forms.push(xi);
                }
                Err(e) => fails.push(format!("component {j}: {e}")),
            }
        }
        if forms.len() == claimed.components.len() {
            if forms.len() != problem.codim {
                fails.push(format!("{} components for codimension {}", forms.len(), problem.codim));
            }
            match wedge_log_forms(&forms) {
                Ok(w) if w.is_zero() => fails.push("components are not independent".into()),
                Ok(w) => {
                    if let Some(h) = &claimed.proportionality {
                        if w.degree() == field.codim() && field.form().mul_poly(h.den()) != w.mul_poly(h.num()) {
                            fails.push("proportionality factor fails omega * den = num * Xi".into());
                        }
                    }
                }
                Err(e) => fails.push(e.to_string()),
            }
        }
    } else if claimed.verified && claimed.command == Subcommand::Integrate {
        fails.push("report claims a verified first integral without components".into());
    }
    fails
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::parse::parse_problem;

    fn problem(src: &str) -> ProblemFile {
        parse_problem(src).unwrap()
    }

    const LINEAR: &str = "vars x y\ncodim 1\nomega x*dy - 2*y*dx\nhyp x\nhyp y";

    #[test]
    fn integrate_linear() {
        let out = run(Subcommand::Integrate, &problem(LINEAR), &RunOptions::default());
        assert_eq!(out.exit_code, 0);
        assert_eq!(out.report.status, Status::Ok);
        assert!(out.report.verified);
        let text = super::super::report::serialize_machine(&out.report);
        assert!(text.contains("component.0 = y * x^-2\n"), "{text}");
    }

    #[test]
    fn invariant_failure_names_hypersurface() {
        let p = problem("vars x y\ncodim 1\nomega x*dy - y*dx\nhyp x+1");
        let out = run(Subcommand::Invariant, &p, &RunOptions::default());
        assert_eq!(out.exit_code, 1);
        assert_eq!(out.report.status, Status::NotInvariant);
        assert!(out.report.diagnostics.iter().any(|d| d.contains("x + 1")));
    }

    #[test]
    fn check_not_lds() {
        let p = problem("vars x y z w\ncodim 2\nomega dx^dy + dz^dw");
        let out = run(Subcommand::Check, &p, &RunOptions::default());
        assert_eq!(out.exit_code, 1);
        assert_eq!(out.report.status, Status::NotLds);
    }

    #[test]
    fn insufficient_and_invalid() {
        let p = problem("vars x y\ncodim 1\nomega x*dy - 2*y*dx\nhyp x");
        let out = run(Subcommand::Integrate, &p, &RunOptions::default());
        assert_eq!((out.exit_code, out.report.status), (1, Status::Insufficient));
        assert_eq!(out.report.kernel_dim(), Some(0));

        let p = problem("vars x y\ncodim 1\nomega x*dy - 2*y*dx\nhyp x^2");
        let out = run(Subcommand::Integrate, &p, &RunOptions::default());
        assert_eq!((out.exit_code, out.report.status), (2, Status::Error));

        let p = problem("vars x y\ncodim 1\nomega 0");
        assert_eq!(run(Subcommand::Check, &p, &RunOptions::default()).exit_code, 2);

        let p = problem(LINEAR);
        let out = run(Subcommand::Integrate, &p, &RunOptions { max_degree: Some(0) });
        assert_eq!(out.exit_code, 2);
    }

    #[test]
    fn verify_accepts_and_rejects() {
        let p = problem(LINEAR);
        let out = run(Subcommand::Integrate, &p, &RunOptions::default());
        let v = verify_report(&p, &out.report);
        assert_eq!(v.exit_code, 0, "{:?}", v.report.diagnostics);
        assert!(v.report.verified);

        let mut forged = out.report.clone();
        forged.components[0].exponents[0] = (-1).into();
        let v = verify_report(&p, &forged);
        assert_eq!(v.exit_code, 3);
        assert!(!v.report.verified);

        let mut forged = out.report.clone();
        forged.cofactors[0] = CofactorEntry::NotInvariant;
        assert_eq!(verify_report(&p, &forged).exit_code, 3);

        let mut forged = out.report.clone();
        forged.kernel = Some(vec![vec![1.into(), 1.into()]]);
        assert_eq!(verify_report(&p, &forged).exit_code, 3);
    }
}
