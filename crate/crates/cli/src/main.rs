//! Command-line interface: verify candidate solutions against a
//! trinomial equation, construct solution families, solve the case
//! constraints, audit the bundled examples, and fuzz the constructors.
//!
//! Exit codes: 0 = verified / constructed / clean run, 1 = verification
//! or constraint failure, 2 = input or validation error.

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::fmt::Write as _;
use std::path::Path;
use std::process::ExitCode;
use tripdde::audit::{audit_example, AuditMode, FIXTURES};
use tripdde::complex::{Cx, Tolerance};
use tripdde::config::{parse_equation_config, parse_params_config, EquationConfig};
use tripdde::draws::draw_case;
use tripdde::equation::OmegaBranch;
use tripdde::exppoly::ExpPoly;
use tripdde::parser::{format_expression, parse_expression};
use tripdde::sampling::Rng64;
use tripdde::solutions::{
    check_constraints, construct, solve_xi, w_period, CaseId, ConstraintReport, Theorem,
};

#[derive(Parser)]
#[command(
    name = "tripdde",
    version,
    about = "Symbolic-numeric toolkit for quadratic trinomial partial differential-difference equations in C^n"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputMode {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TheoremArg {
    #[value(name = "2.1")]
    T21,
    #[value(name = "2.2")]
    T22,
}

impl TheoremArg {
    fn theorem(self) -> Theorem {
        match self {
            TheoremArg::T21 => Theorem::T21,
            TheoremArg::T22 => Theorem::T22,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CaseArg {
    I,
    Ii,
    Iii,
    Iv,
}

impl CaseArg {
    fn case(self) -> CaseId {
        match self {
            CaseArg::I => CaseId::I,
            CaseArg::Ii => CaseId::II,
            CaseArg::Iii => CaseId::III,
            CaseArg::Iv => CaseId::IV,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BranchArg {
    Plus,
    Minus,
}

impl BranchArg {
    fn branch(self) -> OmegaBranch {
        match self {
            BranchArg::Plus => OmegaBranch::Plus,
            BranchArg::Minus => OmegaBranch::Minus,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Verbatim,
    Constructed,
}

#[derive(Args)]
struct EquationArg {
    /// Path to an equation document (key = value lines).
    #[arg(long)]
    equation: String,
}

#[derive(Subcommand)]
enum Cmd {
    /// Verify a candidate solution against an equation.
    Verify {
        #[command(flatten)]
        equation: EquationArg,
        /// Path to a file containing the candidate expression, or the
        /// expression itself.
        #[arg(long)]
        solution: String,
        /// Also run the seeded numeric residual check and use it as the
        /// pass criterion.
        #[arg(long)]
        numeric: bool,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Numeric residual tolerance.
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = OutputMode::Text)]
        output: OutputMode,
    },
    /// Construct a solution family candidate from case parameters.
    Construct {
        #[command(flatten)]
        equation: EquationArg,
        #[arg(long, value_enum)]
        theorem: TheoremArg,
        #[arg(long, value_enum)]
        case: CaseArg,
        /// Path to a parameter document; omit for cases without free
        /// parameters.
        #[arg(long)]
        params: Option<String>,
        /// Solve the xi constraint and use the principal root.
        #[arg(long)]
        solve_xi: bool,
        /// Integer k of the 2*pi*i*k log-branch family.
        #[arg(long)]
        log_branch: Option<i64>,
        #[arg(long, value_enum, default_value_t = OutputMode::Text)]
        output: OutputMode,
    },
    /// Solve the xi constraint of the single-exponential families.
    SolveParams {
        #[command(flatten)]
        equation: EquationArg,
        #[arg(long, value_enum)]
        theorem: TheoremArg,
        #[arg(long, value_enum, default_value_t = BranchArg::Plus)]
        branch: BranchArg,
        #[arg(long, value_enum, default_value_t = OutputMode::Text)]
        output: OutputMode,
    },
    /// Evaluate the case constraint equations for given parameters.
    CheckConstraints {
        #[command(flatten)]
        equation: EquationArg,
        #[arg(long, value_enum)]
        theorem: TheoremArg,
        #[arg(long, value_enum)]
        case: CaseArg,
        #[arg(long)]
        params: Option<String>,
        #[arg(long, value_enum, default_value_t = OutputMode::Text)]
        output: OutputMode,
    },
    /// Audit the bundled worked examples.
    Examples {
        /// Restrict to one example id (2.1, 2.2, 2.3, 2.4).
        #[arg(long)]
        id: Option<String>,
        /// Restrict to one mode.
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
        #[arg(long, value_enum, default_value_t = OutputMode::Text)]
        output: OutputMode,
    },
    /// Randomized constructor-soundness suite.
    Fuzz {
        #[arg(long, default_value_t = 50)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Restrict to one theorem.
        #[arg(long, value_enum)]
        theorem: Option<TheoremArg>,
        /// Restrict to one case.
        #[arg(long, value_enum)]
        case: Option<CaseArg>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn load_equation(path: &str) -> Result<EquationConfig, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read equation file '{path}': {e}"))?;
    parse_equation_config(&text).map_err(|e| e.to_string())
}

fn load_solution(arg: &str, arity: usize) -> Result<ExpPoly, String> {
    let text = if Path::new(arg).exists() {
        std::fs::read_to_string(arg)
            .map_err(|e| format!("cannot read solution file '{arg}': {e}"))?
    } else {
        arg.to_string()
    };
    parse_expression(text.trim(), arity).map_err(|e| e.to_string())
}

fn fmt_cx(v: Cx) -> String {
    if v.im == 0.0 {
        format!("{}", v.re)
    } else if v.im < 0.0 {
        format!("{}-{}i", v.re, -v.im)
    } else {
        format!("{}+{}i", v.re, v.im)
    }
}

fn print_constraints(report: &ConstraintReport) {
    for e in &report.entries {
        println!(
            "constraint {:<24} {}  lhs = {}  rhs = {}  |lhs-rhs| = {:.3e}",
            e.id,
            if e.satisfied {
                "satisfied  "
            } else {
                "UNSATISFIED"
            },
            fmt_cx(e.lhs),
            fmt_cx(e.rhs),
            e.abs_err
        );
    }
}

fn constraints_json(report: &ConstraintReport) -> serde_json::Value {
    serde_json::Value::Array(
        report
            .entries
            .iter()
            .map(|e| {
                serde_json::json!({
                    "id": e.id,
                    "lhs": [e.lhs.re, e.lhs.im],
                    "rhs": [e.rhs.re, e.rhs.im],
                    "satisfied": e.satisfied,
                    "abs_err": e.abs_err,
                })
            })
            .collect(),
    )
}

fn run(cmd: Cmd) -> Result<ExitCode, String> {
    match cmd {
        Cmd::Verify {
            equation,
            solution,
            numeric,
            samples,
            seed,
            tol,
            output,
        } => {
            if samples == 0 {
                return Err("--samples must be at least 1".into());
            }
            let cfg = load_equation(&equation.equation)?;
            let sym_tol = cfg.tolerance.unwrap_or_default();
            let eq = cfg.equation;
            let f = load_solution(&solution, eq.arity)?;
            let symbolic_zero = eq.verify_symbolic(&f, sym_tol);
            let numeric_report = numeric.then(|| eq.verify_numeric(&f, samples, seed, tol));
            let pass = match &numeric_report {
                Some(n) => n.pass,
                None => symbolic_zero,
            };
            match output {
                OutputMode::Text => {
                    println!(
                        "symbolic residual: {}",
                        if symbolic_zero { "zero" } else { "nonzero" }
                    );
                    if let Some(n) = &numeric_report {
                        println!(
                            "numeric residual: max rel {:.6e} over {} samples (seed {}), {} overflows",
                            n.max_rel_residual, n.samples, n.seed, n.overflows
                        );
                    }
                    println!("verdict: {}", if pass { "PASS" } else { "FAIL" });
                }
                OutputMode::Json => {
                    let mut doc = serde_json::json!({
                        "symbolic_zero": symbolic_zero,
                    });
                    if let Some(n) = &numeric_report {
                        doc["max_rel_residual"] = n.max_rel_residual.into();
                        doc["samples"] = n.samples.into();
                        doc["seed"] = n.seed.into();
                        doc["overflows"] = n.overflows.into();
                    }
                    doc["pass"] = pass.into();
                    println!("{doc}");
                }
            }
            Ok(ExitCode::from(if pass { 0 } else { 1 }))
        }

        Cmd::Construct {
            equation,
            theorem,
            case,
            params,
            solve_xi: do_solve_xi,
            log_branch,
            output,
        } => {
            let cfg = load_equation(&equation.equation)?;
            let tol = cfg.tolerance.unwrap_or_default();
            let eq = cfg.equation;
            let theorem = theorem.theorem();
            let case = case.case();
            let mut p = match params {
                Some(path) => {
                    let text = std::fs::read_to_string(&path)
                        .map_err(|e| format!("cannot read params file '{path}': {e}"))?;
                    parse_params_config(&text, theorem, case, w_period(&eq))
                        .map_err(|e| e.to_string())?
                }
                None => tripdde::solutions::CaseParameters::new(theorem, case),
            };
            if let Some(k) = log_branch {
                p.log_branch = k;
            }
            if do_solve_xi {
                let solved = solve_xi(&eq, theorem, p.branch, tol).map_err(|e| e.to_string())?;
                p.xi = Some(solved.roots[0]);
            }
            let (cand, report) = construct(&eq, &p, tol).map_err(|e| e.to_string())?;
            let ok = report.required_satisfied();
            match output {
                OutputMode::Text => {
                    println!("f = {}", format_expression(&cand.f));
                    print_constraints(&report);
                    println!(
                        "constraints: {}",
                        if ok { "satisfied" } else { "NOT satisfied" }
                    );
                }
                OutputMode::Json => {
                    let doc = serde_json::json!({
                        "candidate": format_expression(&cand.f),
                        "constraints": constraints_json(&report),
                        "pass": ok,
                    });
                    println!("{doc}");
                }
            }
            Ok(ExitCode::from(if ok { 0 } else { 1 }))
        }

        Cmd::SolveParams {
            equation,
            theorem,
            branch,
            output,
        } => {
            let cfg = load_equation(&equation.equation)?;
            let tol = cfg.tolerance.unwrap_or_default();
            let solved = solve_xi(&cfg.equation, theorem.theorem(), branch.branch(), tol)
                .map_err(|e| e.to_string())?;
            match output {
                OutputMode::Text => {
                    println!("A  = {}", fmt_cx(solved.a_value));
                    println!("E  = {}", fmt_cx(solved.e_value));
                    println!("xi^2 = {}", fmt_cx(solved.xi_squared));
                    for (k, (root, resid)) in solved
                        .roots
                        .iter()
                        .zip(solved.residuals.iter())
                        .enumerate()
                    {
                        println!(
                            "xi[{k}] = {}  (re-substitution residual {:.3e})",
                            fmt_cx(*root),
                            resid
                        );
                    }
                }
                OutputMode::Json => {
                    let doc = serde_json::json!({
                        "a_value": [solved.a_value.re, solved.a_value.im],
                        "e_value": [solved.e_value.re, solved.e_value.im],
                        "xi_squared": [solved.xi_squared.re, solved.xi_squared.im],
                        "roots": solved
                            .roots
                            .iter()
                            .map(|r| serde_json::json!([r.re, r.im]))
                            .collect::<Vec<_>>(),
                        "residuals": solved.residuals,
                    });
                    println!("{doc}");
                }
            }
            Ok(ExitCode::SUCCESS)
        }

        Cmd::CheckConstraints {
            equation,
            theorem,
            case,
            params,
            output,
        } => {
            let cfg = load_equation(&equation.equation)?;
            let tol = cfg.tolerance.unwrap_or_default();
            let eq = cfg.equation;
            let theorem = theorem.theorem();
            let case = case.case();
            let p = match params {
                Some(path) => {
                    let text = std::fs::read_to_string(&path)
                        .map_err(|e| format!("cannot read params file '{path}': {e}"))?;
                    parse_params_config(&text, theorem, case, w_period(&eq))
                        .map_err(|e| e.to_string())?
                }
                None => tripdde::solutions::CaseParameters::new(theorem, case),
            };
            let report = check_constraints(&eq, &p, tol);
            let ok = report.required_satisfied();
            match output {
                OutputMode::Text => {
                    print_constraints(&report);
                    println!(
                        "constraints: {}",
                        if ok { "satisfied" } else { "NOT satisfied" }
                    );
                }
                OutputMode::Json => {
                    let doc = serde_json::json!({
                        "constraints": constraints_json(&report),
                        "pass": ok,
                    });
                    println!("{doc}");
                }
            }
            Ok(ExitCode::from(if ok { 0 } else { 1 }))
        }

        Cmd::Examples { id, mode, output } => {
            let ids: Vec<&str> = match &id {
                Some(requested) => match FIXTURES.iter().find(|f| f.id == requested) {
                    Some(f) => vec![f.id],
                    None => {
                        return Err(format!(
                            "unknown example id '{requested}' (expected 2.1, 2.2, 2.3 or 2.4)"
                        ))
                    }
                },
                None => FIXTURES.iter().map(|f| f.id).collect(),
            };
            let modes: Vec<AuditMode> = match mode {
                Some(ModeArg::Verbatim) => vec![AuditMode::Verbatim],
                Some(ModeArg::Constructed) => vec![AuditMode::Constructed],
                None => vec![AuditMode::Verbatim, AuditMode::Constructed],
            };
            let mut constructed_failures = 0usize;
            for id in &ids {
                for mode in &modes {
                    let outcome = audit_example(id, *mode).map_err(|e| e.to_string())?;
                    if *mode == AuditMode::Constructed && !outcome.pass {
                        constructed_failures += 1;
                    }
                    match output {
                        OutputMode::Text => {
                            let mut line = String::new();
                            write!(
                                line,
                                "example {id} [{}]: {}  (symbolic {}, max rel residual {:.3e})",
                                match mode {
                                    AuditMode::Verbatim => "verbatim",
                                    AuditMode::Constructed => "constructed",
                                },
                                if outcome.pass { "PASS" } else { "FAIL" },
                                if outcome.report.symbolic_zero {
                                    "zero"
                                } else {
                                    "nonzero"
                                },
                                outcome.report.max_rel_residual
                            )
                            .unwrap();
                            println!("{line}");
                            for n in &outcome.notes {
                                println!("    {n}");
                            }
                        }
                        OutputMode::Json => {
                            println!("{}", serde_json::to_value(&outcome).unwrap());
                        }
                    }
                }
            }
            Ok(ExitCode::from(if constructed_failures == 0 { 0 } else { 1 }))
        }

        Cmd::Fuzz {
            trials,
            seed,
            theorem,
            case,
        } => {
            let all_cases = [
                (Theorem::T21, CaseId::I),
                (Theorem::T21, CaseId::II),
                (Theorem::T21, CaseId::III),
                (Theorem::T22, CaseId::I),
                (Theorem::T22, CaseId::II),
                (Theorem::T22, CaseId::III),
                (Theorem::T22, CaseId::IV),
            ];
            let selected: Vec<(Theorem, CaseId)> = all_cases
                .into_iter()
                .filter(|(t, c)| {
                    theorem.map(|ta| ta.theorem() == *t).unwrap_or(true)
                        && case.map(|ca| ca.case() == *c).unwrap_or(true)
                })
                .collect();
            if selected.is_empty() {
                return Err("the selected theorem/case combination is empty".into());
            }
            let tol = Tolerance::default();
            let base = Rng64::new(seed);
            let mut violations = 0usize;
            for (ci, (theorem, case)) in selected.iter().enumerate() {
                for trial in 0..trials {
                    let mut rng = base.substream((ci * trials + trial) as u64);
                    let d = draw_case(&mut rng, *theorem, *case);
                    let outcome = construct(&d.eq, &d.params, tol);
                    let ok = match &outcome {
                        Ok((cand, _)) => {
                            cand.equation.verify_symbolic(&cand.f, tol)
                                && cand
                                    .equation
                                    .verify_numeric(&cand.f, 100, seed ^ trial as u64, 1e-8)
                                    .pass
                        }
                        Err(_) => false,
                    };
                    if !ok {
                        violations += 1;
                        println!(
                            "violation: theorem {theorem:?} case {case:?} trial {trial} (reproduce with --seed {seed} --trials {trials})"
                        );
                        println!("  equation g = {}", d.eq.g);
                        if let Ok((cand, _)) = &outcome {
                            println!("  candidate = {}", format_expression(&cand.f));
                        }
                    }
                }
            }
            println!(
                "fuzz: {} cases x {} trials, {} violations",
                selected.len(),
                trials,
                violations
            );
            Ok(ExitCode::from(if violations == 0 { 0 } else { 1 }))
        }
    }
}
