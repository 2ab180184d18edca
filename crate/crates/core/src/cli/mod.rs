//! Problem-file parsing, subcommand dispatch and report serialization.

pub mod driver;
pub mod parse;
pub mod report;

pub use driver::{exit, run, verify_report, Outcome, RunOptions};
pub use parse::{parse_expr, parse_form, parse_poly, parse_problem, ParseError, ParseErrorKind, ProblemFile};
pub use report::{
    parse_machine, serialize_human, serialize_machine, CofactorEntry, ComponentEntry, Report, ReportParseError, Status,
    Subcommand,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Human,
    Machine,
}

pub fn serialize_report(report: &Report, mode: Mode) -> String {
    match mode {
        Mode::Human => serialize_human(report),
        Mode::Machine => serialize_machine(report),
    }
}
