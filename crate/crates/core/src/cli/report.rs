//! Reports: a line-oriented `key = value` machine format that parses back
//! to the same value, and a prose rendering of the same data.

use std::collections::BTreeMap;
use std::fmt;

use crate::darboux::{Hypersurface, LogForm};
use crate::forms::KForm;
use crate::poly::{GaussianRational, MPoly, RationalFunction};

use super::parse::{parse_form, parse_poly};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Status {
    Ok,
    NotLds,
    NotInvariant,
    Insufficient,
    Error,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::NotLds => "not_lds",
            Status::NotInvariant => "not_invariant",
            Status::Insufficient => "insufficient",
            Status::Error => "error",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "ok" => Status::Ok,
            "not_lds" => Status::NotLds,
            "not_invariant" => Status::NotInvariant,
            "insufficient" => Status::Insufficient,
            "error" => Status::Error,
            _ => return None,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Subcommand {
    Check,
    Invariant,
    Integrate,
    Verify,
}

impl Subcommand {
    pub fn as_str(self) -> &'static str {
        match self {
            Subcommand::Check => "check",
            Subcommand::Invariant => "invariant",
            Subcommand::Integrate => "integrate",
            Subcommand::Verify => "verify",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "check" => Subcommand::Check,
            "invariant" => Subcommand::Invariant,
            "integrate" => Subcommand::Integrate,
            "verify" => Subcommand::Verify,
            _ => return None,
        })
    }
}

/// Per-hypersurface outcome of the invariance test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CofactorEntry {
    Cofactor(KForm),
    NotInvariant,
}

/// One first-integral component `prod f_j^{e_j}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentEntry {
    pub exponents: Vec<GaussianRational>,
    pub rational: bool,
}

impl ComponentEntry {
    /// Multiplicative text over the given hypersurfaces, `None` when the
    /// exponents are all zero or the polynomials are not valid.
    pub fn render(&self, hyps: &[MPoly], vars: &[String]) -> Option<String> {
        let hs = hyps.iter().map(Hypersurface::new).collect::<Result<Vec<_>, _>>().ok()?;
        let xi = LogForm::new(self.exponents.clone(), hs).ok()?;
        Some(xi.render_multiplicative(vars))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub command: Subcommand,
    pub status: Status,
    pub vars: Vec<String>,
    pub codim: usize,
    pub lds: bool,
    /// `None` when the form was rejected before integrability was known.
    pub integrable: Option<bool>,
    pub content: Option<MPoly>,
    /// The content-normalized form.
    pub omega: Option<KForm>,
    pub hyps: Vec<MPoly>,
    /// Aligned with `hyps` when present; empty when not computed.
    pub cofactors: Vec<CofactorEntry>,
    pub kernel: Option<Vec<Vec<GaussianRational>>>,
    pub components: Vec<ComponentEntry>,
    pub proportionality: Option<RationalFunction>,
    pub verified: bool,
    pub diagnostics: Vec<String>,
}

impl Report {
    pub fn new(command: Subcommand, vars: Vec<String>, codim: usize, hyps: Vec<MPoly>) -> Self {
        Report {
            command,
            status: Status::Error,
            vars,
            codim,
            lds: false,
            integrable: None,
            content: None,
            omega: None,
            hyps,
            cofactors: Vec::new(),
            kernel: None,
            components: Vec::new(),
            proportionality: None,
            verified: false,
            diagnostics: Vec::new(),
        }
    }

    pub fn kernel_dim(&self) -> Option<usize> {
        self.kernel.as_ref().map(Vec::len)
    }
}

fn render_vector(v: &[GaussianRational]) -> String {
    let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("[{}]", parts.join(", "))
}

fn render_bool(b: bool) -> &'static str {
    if b {
        "true"
    } else {
        "false"
    }
}

/// Machine format. Keys appear in a fixed order; optional data is omitted
/// rather than written as a placeholder.
pub fn serialize_machine(r: &Report) -> String {
    let v = &r.vars;
    let mut out = String::new();
    let mut put = |k: &str, val: &str| {
        out.push_str(k);
        out.push_str(" = ");
        out.push_str(val);
        out.push('\n');
    };
    put("command", r.command.as_str());
    put("status", r.status.as_str());
    put("vars", &format!("[{}]", v.join(", ")));
    put("codim", &r.codim.to_string());
    put("lds", render_bool(r.lds));
    put("integrable", r.integrable.map_or("unknown", render_bool));
    if let Some(c) = &r.content {
        put("content", &c.render(v));
    }
    if let Some(w) = &r.omega {
        put("omega", &w.render(v));
    }
    put("hyp_count", &r.hyps.len().to_string());
    for (j, h) in r.hyps.iter().enumerate() {
        put(&format!("hyp.{j}"), &h.render(v));
    }
    for (j, c) in r.cofactors.iter().enumerate() {
        let text = match c {
            CofactorEntry::Cofactor(f) => f.render(v),
            CofactorEntry::NotInvariant => "not_invariant".to_string(),
        };
        put(&format!("cofactor.{j}"), &text);
    }
    if let Some(k) = &r.kernel {
        put("kernel_dim", &k.len().to_string());
        for (j, lambda) in k.iter().enumerate() {
            put(&format!("kernel.{j}"), &render_vector(lambda));
        }
    }
    put("component_count", &r.components.len().to_string());
    for (j, c) in r.components.iter().enumerate() {
        if let Some(text) = c.render(&r.hyps, v) {
            put(&format!("component.{j}"), &text);
        }
        put(&format!("exponents.{j}"), &render_vector(&c.exponents));
        put(&format!("rational.{j}"), render_bool(c.rational));
    }
    if let Some(h) = &r.proportionality {
        put("proportionality.num", &h.num().render(v));
        put("proportionality.den", &h.den().render(v));
    }
    put("verified", render_bool(r.verified));
    for (j, d) in r.diagnostics.iter().enumerate() {
        put(&format!("diagnostic.{j}"), &d.replace('\n', " "));
    }
    out
}

/// Prose rendering of the same data.
pub fn serialize_human(r: &Report) -> String {
    let v = &r.vars;
    let mut out = String::new();
    let mut line = |s: String| {
        out.push_str(&s);
        out.push('\n');
    };
    line(format!(
        "{}: {} (codimension {} in variables {})",
        r.command.as_str(),
        r.status.as_str(),
        r.codim,
        v.join(", ")
    ));
    if let Some(w) = &r.omega {
        line(format!("  form: {}", w.render(v)));
    }
    if let Some(c) = &r.content {
        if !c.is_one() {
            line(format!("  removed common factor: {}", c.render(v)));
        }
    }
    line(format!(
        "  locally decomposable: {}; integrable: {}",
        if r.lds { "yes" } else { "no" },
        r.integrable.map_or("unknown", |b| if b { "yes" } else { "no" })
    ));
    if r.omega.is_some() && r.lds {
        line(
            "  note: only the divisorial part of the singular set is removed; its codimension is not certified".into(),
        );
    }
    for (j, c) in r.cofactors.iter().enumerate() {
        let h = r.hyps[j].render(v);
        match c {
            CofactorEntry::Cofactor(f) => line(format!("  {h} = 0 is invariant, cofactor {}", f.render(v))),
            CofactorEntry::NotInvariant => line(format!("  {h} = 0 is NOT invariant")),
        }
    }
    if let Some(k) = &r.kernel {
        line(format!("  flat weight space has dimension {}", k.len()));
        for lambda in k {
            line(format!("    {}", render_vector(lambda)));
        }
    }
    for (j, c) in r.components.iter().enumerate() {
        let text = c.render(&r.hyps, v).unwrap_or_else(|| render_vector(&c.exponents));
        let kind = if c.rational {
            "rational function"
        } else {
            "multivalued Darboux function"
        };
        line(format!("  H{} = {text}  ({kind})", j + 1));
    }
    if let Some(h) = &r.proportionality {
        line(format!("  omega = ({}) * cleared wedge of the dlog H_i", h.render(v)));
    }
    if !r.components.is_empty() || r.command == Subcommand::Verify {
        line(format!("  verified: {}", if r.verified { "yes" } else { "no" }));
    }
    for d in &r.diagnostics {
        line(format!("  - {d}"));
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("report line {line}: {message}")]
pub struct ReportParseError {
    pub line: usize,
    pub message: String,
}

fn parse_vector(s: &str) -> Option<Vec<GaussianRational>> {
    let inner = s.trim().strip_prefix('[')?.strip_suffix(']')?;
    if inner.trim().is_empty() {
        return Some(Vec::new());
    }
    inner.split(',').map(|t| t.trim().parse().ok()).collect()
}

fn parse_bool(s: &str) -> Option<bool> {
    match s {
        "true" => Some(true),
        "false" => Some(false),
        _ => None,
    }
}

/// Parses the machine format back into a report.
pub fn parse_machine(text: &str) -> Result<Report, ReportParseError> {
    let mut entries: BTreeMap<String, (usize, String)> = BTreeMap::new();
    for (ln, raw) in text.lines().enumerate() {
        if raw.trim().is_empty() {
            continue;
        }
        let (k, val) = raw.split_once(" = ").ok_or_else(|| ReportParseError {
            line: ln + 1,
            message: "expected `key = value`".into(),
        })?;
        if entries
            .insert(k.trim().to_string(), (ln + 1, val.to_string()))
            .is_some()
        {
            return Err(ReportParseError {
                line: ln + 1,
                message: format!("duplicate key `{}`", k.trim()),
            });
        }
    }
    let mut take = |k: &str| entries.remove(k);
    let missing = |k: &str| ReportParseError {
        line: 0,
        message: format!("missing key `{k}`"),
    };
    let bad = |(line, _): &(usize, String), what: &str| ReportParseError {
        line: *line,
        message: format!("invalid {what}"),
    };

    let e = take("command").ok_or_else(|| missing("command"))?;
    let command = Subcommand::parse(&e.1).ok_or_else(|| bad(&e, "command"))?;
    let e = take("status").ok_or_else(|| missing("status"))?;
    let status = Status::parse(&e.1).ok_or_else(|| bad(&e, "status"))?;
    let e = take("vars").ok_or_else(|| missing("vars"))?;
    let vars: Vec<String> =
        e.1.strip_prefix('[')
            .and_then(|s| s.strip_suffix(']'))
            .ok_or_else(|| bad(&e, "variable list"))?
            .split(',')
            .map(|s| s.trim().to_string())
            .filter(|s| !s.is_empty())
            .collect();
    super::parse::validate_vars(&vars).map_err(|m| ReportParseError { line: e.0, message: m })?;
    let e = take("codim").ok_or_else(|| missing("codim"))?;
    let codim: usize = e.1.parse().map_err(|_| bad(&e, "codim"))?;
    let e = take("lds").ok_or_else(|| missing("lds"))?;
    let lds = parse_bool(&e.1).ok_or_else(|| bad(&e, "boolean"))?;
    let e = take("integrable").ok_or_else(|| missing("integrable"))?;
    let integrable = match e.1.as_str() {
        "unknown" => None,
        s => Some(parse_bool(s).ok_or_else(|| bad(&e, "boolean"))?),
    };
    let poly = |e: &(usize, String)| {
        parse_poly(&e.1, &vars).map_err(|p| ReportParseError {
            line: e.0,
            message: p.to_string(),
        })
    };
    let form = |e: &(usize, String), deg: usize| {
        parse_form(&e.1, &vars, deg).map_err(|p| ReportParseError {
            line: e.0,
            message: p.to_string(),
        })
    };
    let content = take("content").map(|e| poly(&e)).transpose()?;
    let omega = take("omega").map(|e| form(&e, codim)).transpose()?;
    let e = take("hyp_count").ok_or_else(|| missing("hyp_count"))?;
    let nh: usize = e.1.parse().map_err(|_| bad(&e, "count"))?;
    let mut hyps = Vec::with_capacity(nh);
    for j in 0..nh {
        let k = format!("hyp.{j}");
        hyps.push(poly(&take(&k).ok_or_else(|| missing(&k))?)?);
    }
    let mut cofactors = Vec::new();
    for j in 0..nh {
        match take(&format!("cofactor.{j}")) {
            None => break,
            Some(e) if e.1 == "not_invariant" => cofactors.push(CofactorEntry::NotInvariant),
            Some(e) => cofactors.push(CofactorEntry::Cofactor(form(&e, codim + 1)?)),
        }
    }
    let kernel = match take("kernel_dim") {
        None => None,
        Some(e) => {
            let dim: usize = e.1.parse().map_err(|_| bad(&e, "kernel dimension"))?;
            let mut k = Vec::with_capacity(dim);
            for j in 0..dim {
                let key = format!("kernel.{j}");
                let e = take(&key).ok_or_else(|| missing(&key))?;
                k.push(parse_vector(&e.1).ok_or_else(|| bad(&e, "vector"))?);
            }
            Some(k)
        }
    };
    let e = take("component_count").ok_or_else(|| missing("component_count"))?;
    let nc: usize = e.1.parse().map_err(|_| bad(&e, "count"))?;
    let mut components = Vec::with_capacity(nc);
    for j in 0..nc {
        let key = format!("exponents.{j}");
        let e = take(&key).ok_or_else(|| missing(&key))?;
        let exponents = parse_vector(&e.1).ok_or_else(|| bad(&e, "vector"))?;
        let key = format!("rational.{j}");
        let e = take(&key).ok_or_else(|| missing(&key))?;
        let rational = parse_bool(&e.1).ok_or_else(|| bad(&e, "boolean"))?;
        let c = ComponentEntry { exponents, rational };
        if let Some(e) = take(&format!("component.{j}")) {
            if c.render(&hyps, &vars).as_deref() != Some(e.1.as_str()) {
                return Err(bad(&e, "component: text disagrees with its exponents"));
            }
        }
        components.push(c);
    }
    let proportionality = match (take("proportionality.num"), take("proportionality.den")) {
        (None, None) => None,
        (Some(n), Some(d)) => Some(RationalFunction::new(poly(&n)?, poly(&d)?).map_err(|_| bad(&d, "denominator"))?),
        (Some(e), None) | (None, Some(e)) => return Err(bad(&e, "proportionality: needs both num and den")),
    };
    let e = take("verified").ok_or_else(|| missing("verified"))?;
    let verified = parse_bool(&e.1).ok_or_else(|| bad(&e, "boolean"))?;
    let mut diagnostics = Vec::new();
    while let Some(e) = take(&format!("diagnostic.{}", diagnostics.len())) {
        diagnostics.push(e.1);
    }
    if let Some((k, e)) = entries.iter().next() {
        return Err(ReportParseError {
            line: e.0,
            message: format!("unknown key `{k}`"),
        });
    }
    Ok(Report {
        command,
        status,
        vars,
        codim,
        lds,
        integrable,
        content,
        omega,
        hyps,
        cofactors,
        kernel,
        components,
        proportionality,
        verified,
        diagnostics,
    })
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&serialize_human(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn linear_report() -> Report {
        let vars: Vec<String> = vec!["x".into(), "y".into()];
        let x = MPoly::var(2, 0);
        let y = MPoly::var(2, 1);
        let mut r = Report::new(Subcommand::Integrate, vars.clone(), 1, vec![x, y]);
        r.status = Status::Ok;
        r.lds = true;
        r.integrable = Some(true);
        r.content = Some(MPoly::one(2));
        r.omega = Some(parse_form("x*dy - 2*y*dx", &vars, 1).unwrap());
        r.cofactors = vec![
            CofactorEntry::Cofactor(parse_form("-dx^dy", &vars, 2).unwrap()),
            CofactorEntry::Cofactor(parse_form("-2*dx^dy", &vars, 2).unwrap()),
        ];
        let ex = vec![GaussianRational::from_int(-2), GaussianRational::from_int(1)];
        r.kernel = Some(vec![ex.clone()]);
        r.components = vec![ComponentEntry {
            exponents: ex,
            rational: true,
        }];
        r.proportionality = Some(RationalFunction::from_poly(MPoly::one(2)));
        r.verified = true;
        r
    }

    #[test]
    fn machine_lines() {
        let text = serialize_machine(&linear_report());
        assert!(text.contains("kernel.0 = [-2, 1]\n"));
        assert!(text.contains("component.0 = y * x^-2\n"));
        assert!(text.contains("exponents.0 = [-2, 1]\n"));
        assert!(text.contains("omega = -2*y*dx + x*dy\n"));
        assert!(text.contains("cofactor.1 = -2*dx^dy\n"));
        let mut empty = linear_report();
        empty.kernel = Some(Vec::new());
        empty.components.clear();
        assert!(serialize_machine(&empty).contains("kernel_dim = 0\n"));
    }

    #[test]
    fn machine_roundtrip() {
        let r = linear_report();
        assert_eq!(parse_machine(&serialize_machine(&r)).unwrap(), r);
        let mut r2 = r.clone();
        r2.cofactors[1] = CofactorEntry::NotInvariant;
        r2.integrable = None;
        r2.diagnostics = vec!["hypersurface y is not invariant".into()];
        assert_eq!(parse_machine(&serialize_machine(&r2)).unwrap(), r2);
    }

    #[test]
    fn rejects_tampered_component_text() {
        let text = serialize_machine(&linear_report()).replace("component.0 = y * x^-2", "component.0 = x * y^-2");
        assert!(parse_machine(&text).is_err());
        let text = serialize_machine(&linear_report()) + "bogus = 1\n";
        assert!(parse_machine(&text).unwrap_err().message.contains("unknown key"));
        let text = serialize_machine(&linear_report()).replace("verified = true\n", "");
        assert!(parse_machine(&text).is_err());
    }

    #[test]
    fn human_mentions_component() {
        let h = serialize_human(&linear_report());
        assert!(h.contains("H1 = y * x^-2"));
        assert!(h.contains("verified: yes"));
    }
}
