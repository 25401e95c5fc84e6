//! Command-line front end. Every command builds a [`Report`]; text output is
//! a rendering of the same object that `--format json` prints.
//!
//! Exit status: 0 on success, 1 on input errors, 2 under `--strict` when a
//! verdict is `unbounded` or the report carries an error certificate.

mod config;
mod report;

pub use config::{parse_config, resolve, BcOp, CheckKind, Cli, CommandConfig, Defaults, Format, RunConfig, DEFAULT_TRIALS};
pub use report::{ErrorCertificate, Report, ResultEntry, VerdictEntry};

use std::ffi::OsString;
use std::fs;

use clap::Parser;

use crate::bicomplex::{arithmetic, indicator, poly_roots, ArithOp, BiComplex, Conjugation};
use crate::error::{BicomplexError, InputError, OperatorError, OrliczError};
use crate::json::{self, SpaceInput, WireBiComplex};
use crate::measure::{AtomicMeasureSpace, DEFAULT_N_MAX};
use crate::operators::{
    apply, check_composition_bounded, check_multiplication_bounded, empirical_operator_norm, invert_operator,
    BcOperator, BoundednessReport,
};
use crate::orlicz::{
    classify_phi, component_norms, modular_bc_detailed, norm_bc, pairing, schauder_tail, ModularStatus,
    NormOptions, OrliczFunction,
};
use crate::sequence::BcSequence;

/// Environment variable naming a JSON file of default settings.
pub const CONFIG_ENV: &str = "BCORLICZ_CONFIG";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

enum Failure {
    Input(String),
    Certificate(ErrorCertificate),
}

impl From<InputError> for Failure {
    fn from(e: InputError) -> Self {
        Failure::Input(e.to_string())
    }
}

fn certificate(kind: &str, message: impl ToString) -> Failure {
    Failure::Certificate(ErrorCertificate {
        kind: kind.into(),
        message: message.to_string(),
        vanishing: Vec::new(),
    })
}

impl From<BicomplexError> for Failure {
    fn from(e: BicomplexError) -> Self {
        use crate::bicomplex::Classification;
        let vanishing = |c: Classification| match c {
            Classification::ZeroDivisor(comp) => vec![comp],
            Classification::Zero => vec![crate::bicomplex::Component::First, crate::bicomplex::Component::Second],
            Classification::Invertible => Vec::new(),
        };
        match e {
            BicomplexError::NotInvertible(c) => Failure::Certificate(ErrorCertificate {
                kind: "not_invertible".into(),
                message: e.to_string(),
                vanishing: vanishing(c),
            }),
            BicomplexError::LeadingNotInvertible(c) => Failure::Certificate(ErrorCertificate {
                kind: "leading_not_invertible".into(),
                message: e.to_string(),
                vanishing: vanishing(c),
            }),
            BicomplexError::RootResidual { .. } => certificate("root_residual", e),
            _ => Failure::Input(e.to_string()),
        }
    }
}

impl From<OrliczError> for Failure {
    fn from(e: OrliczError) -> Self {
        match e {
            OrliczError::NotInSpace => certificate("not_in_space", e),
            OrliczError::Divergent => certificate("divergent", e),
            OrliczError::Inconclusive => certificate("inconclusive", e),
            _ => Failure::Input(e.to_string()),
        }
    }
}

impl From<OperatorError> for Failure {
    fn from(e: OperatorError) -> Self {
        match e {
            OperatorError::NotInvertible { ref singular } => Failure::Certificate(ErrorCertificate {
                kind: "singular_operator".into(),
                message: e.to_string(),
                vanishing: singular.clone(),
            }),
            OperatorError::Orlicz(inner) => inner.into(),
            _ => Failure::Input(e.to_string()),
        }
    }
}

fn read(path: &str) -> Result<String, InputError> {
    fs::read_to_string(path).map_err(|source| InputError::Io {
        path: path.to_string(),
        source,
    })
}

fn load_space(path: &str, cfg: &RunConfig) -> Result<SpaceInput, Failure> {
    let mut input = json::parse_space(&read(path)?, path)?;
    if let Some(n) = cfg.n_max {
        input.space = input
            .space
            .with_n_max(n)
            .map_err(|e| Failure::Input(format!("{path}: {e}")))?;
    }
    Ok(input)
}

fn load_seq(path: &str) -> Result<BcSequence, Failure> {
    Ok(json::parse_sequence(&read(path)?, path)?)
}

fn load_bc(path: &Option<String>, flag: &str) -> Result<BiComplex, Failure> {
    let path = path
        .as_deref()
        .ok_or_else(|| Failure::Input(format!("{flag} is required for this operation")))?;
    Ok(json::parse_bicomplex(&read(path)?, path)?)
}

fn load_phi(spec: &str) -> Result<OrliczFunction, Failure> {
    Ok(json::parse_phi(spec)?)
}

fn finite_entries(f: &BcSequence, space: &AtomicMeasureSpace, report: &mut Report) -> Vec<WireBiComplex> {
    let len = f.finite_len().unwrap_or_else(|| {
        report
            .warnings
            .push(format!("rule-generated output listed up to the truncation at {} atoms", space.len()));
        space.len()
    });
    (1..=len).map(|n| WireBiComplex(f.get(n))).collect()
}

fn lazy_warning(space: &AtomicMeasureSpace, report: &mut Report) {
    if space.is_lazy() {
        report.warnings.push(format!(
            "lazy space examined on its first {} atoms",
            space.len()
        ));
    }
}

fn bc_eval(cfg: &RunConfig, op: BcOp, files: [&Option<String>; 4], report: &mut Report) -> Result<(), Failure> {
    let [lhs, rhs, coeffs, sets] = files;
    let binary = |kind: ArithOp, sym: &str, report: &mut Report| -> Result<(), Failure> {
        let (a, b) = (load_bc(lhs, "--lhs")?, load_bc(rhs, "--rhs")?);
        report.push(
            "value",
            &format!("lhs {sym} rhs, componentwise in the idempotent basis"),
            &WireBiComplex(arithmetic(kind, a, b)),
        );
        Ok(())
    };
    let conj = |kind: Conjugation, what: &str, report: &mut Report| -> Result<(), Failure> {
        let z = load_bc(lhs, "--lhs")?;
        report.push("value", what, &WireBiComplex(z.conjugate(kind)));
        Ok(())
    };
    match op {
        BcOp::Add => binary(ArithOp::Add, "+", report)?,
        BcOp::Sub => binary(ArithOp::Sub, "-", report)?,
        BcOp::Mul => binary(ArithOp::Mul, "*", report)?,
        BcOp::ConjBar => conj(Conjugation::Bar, "bar conjugate: (conj b2, conj b1)", report)?,
        BcOp::ConjDagger => conj(Conjugation::Dagger, "dagger conjugate: (b2, b1)", report)?,
        BcOp::ConjStar => conj(Conjugation::Star, "star conjugate: (conj b1, conj b2)", report)?,
        BcOp::Norm => {
            let z = load_bc(lhs, "--lhs")?;
            report.push("norm", "(1/sqrt 2) hypot(|b1|, |b2|)", &z.norm());
        }
        BcOp::Classify => {
            let z = load_bc(lhs, "--lhs")?;
            report.push(
                "classification",
                &format!("component moduli against eps_inv = {} * max(1, ||Z||)", cfg.eps_inv),
                &z.classify(cfg.eps_inv),
            );
        }
        BcOp::Invert => {
            let z = load_bc(lhs, "--lhs")?;
            let inv = z.invert_with_eps(cfg.eps_inv)?;
            report.push("inverse", "(1/b1) e + (1/b2) e†", &WireBiComplex(inv));
        }
        BcOp::Convert => {
            let z = load_bc(lhs, "--lhs")?;
            report.push("value", "cartesian <-> idempotent coordinates", &WireBiComplex(z));
        }
        BcOp::PolyRoots => {
            let path = coeffs
                .as_deref()
                .ok_or_else(|| Failure::Input("--coeffs is required for poly-roots".into()))?;
            let BcSequence::Finite(c) = load_seq(path)? else {
                unreachable!("parsed sequences are finite")
            };
            let roots = poly_roots(&c)?;
            report.push("count", "n^2 pairings of component roots", &roots.len());
            report.push("roots", "component root finding, r1 e + r2 e†", &roots);
        }
        BcOp::Indicator => {
            let path = sets
                .as_deref()
                .ok_or_else(|| Failure::Input("--sets is required for indicator".into()))?;
            let (u1, u2) = json::parse_sets(&read(path)?, path)?;
            let z = load_bc(lhs, "--lhs")?;
            report.push("indicator", "1 iff b1 in U1 and b2 in U2", &indicator(&u1, &u2, &z));
        }
    }
    Ok(())
}

fn record_check(report: &mut Report, name: &str, check: &BoundednessReport) {
    report.verdict(name, check.verdict);
    report.warnings.extend(check.notes.iter().cloned());
    if check.truncated {
        report
            .warnings
            .push("verdict based on a truncation of an infinite space".into());
    }
}

fn execute(cfg: &RunConfig, report: &mut Report) -> Result<(), Failure> {
    let opts = NormOptions {
        lux_tol: cfg.lux_tol,
        probe: cfg.probe(),
    };
    match &cfg.command {
        CommandConfig::BcEval {
            op,
            lhs,
            rhs,
            coeffs,
            sets,
        } => bc_eval(cfg, *op, [lhs, rhs, coeffs, sets], report)?,
        CommandConfig::Norm { phi, space, seq } => {
            let phi = load_phi(phi)?;
            let space = load_space(space, cfg)?.space;
            let f = load_seq(seq)?;
            f.check_against(&space).map_err(Failure::from)?;
            lazy_warning(&space, report);
            let (m1, m2) = modular_bc_detailed(&phi, &f, &space, &opts.probe)?;
            for (m, c) in [(&m1, 1), (&m2, 2)] {
                if m.status != ModularStatus::Exact {
                    report
                        .warnings
                        .push(format!("modular of component {c} is a probe result: {:?}", m.status));
                }
            }
            report.push("modular", "hyperbolic I(f1) e + I(f2) e†, I(g) = sum phi(|g_n|) a_n", &[m1, m2]);
            let (n1, n2) = component_norms(&phi, &f, &space, &opts)?;
            report.push(
                "component_norms",
                "Luxemburg norms inf{lambda : I(f_i / lambda) <= 1} by bisection",
                &[n1, n2],
            );
            report.push("norm_bc", "(1/sqrt 2) hypot(||f1||, ||f2||)", &norm_bc(&phi, &f, &space, &opts)?);
        }
        CommandConfig::OpApply { operator, space, seq } => {
            let op = json::parse_operator(&read(operator)?, operator)?;
            let space = load_space(space, cfg)?.space;
            let f = load_seq(seq)?;
            let image = apply(&op, &f, &space)?;
            let entries = finite_entries(&image, &space, report);
            report.push("image", "T f", &entries);
        }
        CommandConfig::OpCheck {
            kind,
            space,
            phi,
            map,
            theta,
            seq,
        } => {
            let SpaceInput { space, map: space_map } = load_space(space, cfg)?;
            let phi = phi.as_deref().map(load_phi).transpose()?;
            match kind {
                CheckKind::Composition => {
                    let phi = phi.ok_or_else(|| Failure::Input("--phi is required for composition checks".into()))?;
                    let map = match map {
                        Some(path) => json::parse_map(&read(path)?, path)?,
                        None => space_map.ok_or_else(|| {
                            Failure::Input("--map is required when the space file has no map".into())
                        })?,
                    };
                    let samples = seq.iter().map(|p| load_seq(p)).collect::<Result<Vec<_>, _>>()?;
                    let mut check = check_composition_bounded(&space, &map, &phi, &samples, &opts)?;
                    let op = BcOperator::Composition(map);
                    let estimate = empirical_operator_norm(&op, &phi, &space, cfg.trials, cfg.seed, &opts)?;
                    check = check.with_empirical_norm(estimate);
                    if let Some(m) = check.sup_distortion {
                        report.push("M", "sup_n mu(T^-1 A_n) / mu(A_n)", &json::Extended(m));
                        if let OrliczFunction::Power { p } = phi {
                            report.push("norm_bound", "M^(1/p)", &json::Extended(m.powf(1.0 / p)));
                        }
                    }
                    report.push(
                        "empirical_norm",
                        &format!("max ||C_T F|| / ||F|| over {} seeded random F", cfg.trials),
                        &estimate,
                    );
                    report.push("report", "composition boundedness check", &check);
                    record_check(report, "composition", &check);
                }
                CheckKind::Multiplication => {
                    let path = theta
                        .as_deref()
                        .ok_or_else(|| Failure::Input("--theta is required for multiplication checks".into()))?;
                    let theta = load_seq(path)?;
                    let mut check = check_multiplication_bounded(&theta, &space)?;
                    if let Some(phi) = phi {
                        let op = BcOperator::Multiplication(theta);
                        let estimate = empirical_operator_norm(&op, &phi, &space, cfg.trials, cfg.seed, &opts)?;
                        check = check.with_empirical_norm(estimate);
                        report.push(
                            "empirical_norm",
                            &format!("max ||M_theta F|| / ||F|| over {} seeded random F", cfg.trials),
                            &estimate,
                        );
                    }
                    if let Some((s1, s2)) = check.ess_sups {
                        report.push("ess_sups", "(sup |theta_1|, sup |theta_2|)", &[s1, s2]);
                    }
                    report.push("report", "multiplication boundedness check", &check);
                    record_check(report, "multiplication", &check);
                }
            }
        }
        CommandConfig::OpInvert { operator } => {
            let BcOperator::Dense(m) = json::parse_operator(&read(operator)?, operator)? else {
                return Err(Failure::Input(format!("{operator}: only dense operators can be inverted")));
            };
            let inv = invert_operator(&m)?;
            let (r1, r2) = inv.to_rows();
            let wire = |rows: Vec<Vec<crate::bicomplex::Complex>>| -> Vec<Vec<json::WireComplex>> {
                rows.into_iter()
                    .map(|r| r.into_iter().map(json::WireComplex).collect())
                    .collect()
            };
            report.push(
                "inverse",
                "M1^-1 e + M2^-1 e†",
                &serde_json::json!({ "m1": wire(r1), "m2": wire(r2) }),
            );
        }
        CommandConfig::OpNorm { operator, space, phi } => {
            let op = json::parse_operator(&read(operator)?, operator)?;
            let space = load_space(space, cfg)?.space;
            let phi = load_phi(phi)?;
            let estimate = empirical_operator_norm(&op, &phi, &space, cfg.trials, cfg.seed, &opts)?;
            report.push(
                "empirical_norm",
                &format!("max ||T F|| / ||F|| over {} seeded random F", cfg.trials),
                &estimate,
            );
        }
        CommandConfig::PhiClassify { phi, grid } => {
            let phi = load_phi(phi)?;
            report.push("probe", "sampled checks on a logarithmic grid", &classify_phi(&phi, grid));
            report
                .warnings
                .push("N-function and Delta2 verdicts are sampled probes, not proofs".into());
        }
        CommandConfig::Schauder { seq, p, n } => {
            let f = load_seq(seq)?;
            let len = f.finite_len().unwrap_or(0);
            let cuts: Vec<usize> = if n.is_empty() { (0..=len).collect() } else { n.clone() };
            let budget = cfg.n_max.unwrap_or(DEFAULT_N_MAX);
            let tails = cuts
                .iter()
                .map(|&k| schauder_tail(&f, k, *p, budget, &opts.probe).map(|t| serde_json::json!({ "n": k, "tail": t })))
                .collect::<Result<Vec<_>, _>>()?;
            report.push("tails", "||F - sum_{k<=n} F_k e_k|| in l^p(BC)", &tails);
        }
        CommandConfig::Pairing { lhs, rhs, space } => {
            let space = load_space(space, cfg)?.space;
            let (x, y) = (load_seq(lhs)?, load_seq(rhs)?);
            lazy_warning(&space, report);
            let value = pairing(&x, &y, &space, &opts.probe)?;
            report.push("pairing", "(sum x1 y1 a) e + (sum x2 y2 a) e†", &WireBiComplex(value));
        }
    }
    Ok(())
}

/// Runs the command line `args` (including the program name) with defaults
/// read from `defaults_path` when given.
pub fn run_with_defaults<I, T>(args: I, defaults_path: Option<&str>) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let input_error = |msg: String| Outcome {
        stdout: String::new(),
        stderr: format!("error: {msg}\n"),
        code: 1,
    };
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Outcome {
                    stdout: text,
                    stderr: String::new(),
                    code: 0,
                },
                _ => Outcome {
                    stdout: String::new(),
                    stderr: text,
                    code: 1,
                },
            };
        }
    };
    let defaults = match defaults_path {
        Some(path) => match read(path).and_then(|t| parse_config(&t, path)) {
            Ok(d) => d,
            Err(e) => return input_error(e.to_string()),
        },
        None => Defaults::default(),
    };
    let cfg = match config::resolve(cli, &defaults) {
        Ok(cfg) => cfg,
        Err(e) => return input_error(e.to_string()),
    };
    let echo = args.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    let mut report = Report::new(echo, cfg.clone());
    match execute(&cfg, &mut report) {
        Ok(()) => {}
        Err(Failure::Input(msg)) => return input_error(msg),
        Err(Failure::Certificate(c)) => {
            report.results.clear();
            report.error = Some(c);
        }
    }
    let flagged = report.error.is_some()
        || report
            .verdicts
            .iter()
            .any(|v| v.verdict == "unbounded");
    let stdout = match cfg.format {
        Format::Json => report.to_json(),
        Format::Text => report.to_text(),
    };
    Outcome {
        stdout,
        stderr: String::new(),
        code: if cfg.strict && flagged { 2 } else { 0 },
    }
}

/// Runs `args` with defaults from the file named by `BCORLICZ_CONFIG`, if set.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let path = std::env::var(CONFIG_ENV).ok();
    run_with_defaults(args, path.as_deref())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn usage_errors_exit_one() {
        let out = run_with_defaults(["bcorlicz", "norm", "--phi", "power:p=2"], None);
        assert_eq!(out.code, 1);
        assert!(out.stdout.is_empty());
        let out = run_with_defaults(["bcorlicz", "frobnicate"], None);
        assert_eq!(out.code, 1);
    }

    #[test]
    fn phi_classify_report() {
        let out = run_with_defaults(["bcorlicz", "--format", "json", "phi", "classify", "--phi", "power:p=2"], None);
        assert_eq!(out.code, 0, "{}", out.stderr);
        let report: Report = serde_json::from_str(&out.stdout).unwrap();
        assert_eq!(report.results[0].value["delta2"]["k_estimate"], 4.0);
        let bad = run_with_defaults(["bcorlicz", "phi", "classify", "--phi", "cosh"], None);
        assert_eq!(bad.code, 1);
        assert!(bad.stderr.contains("cosh"));
    }

    #[test]
    fn bad_tolerance_is_input_error() {
        let out = run_with_defaults(["bcorlicz", "--tol", "0", "phi", "classify", "--phi", "exp"], None);
        assert_eq!(out.code, 1);
        assert!(out.stderr.contains("lux_tol"));
    }
}
