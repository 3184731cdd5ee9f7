//! Command-line front end. `run` never exits the process; it returns the exit
//! code (0 success, 1 computation failure, 2 usage error).

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::biframe::{
    assemble, canonical_dual, classify, duality_residual, reconstruct, single_frame_bounds, Side,
};
use crate::corpus;
use crate::document::{self, BiframeDocument};
use crate::error::{Error, Result};
use crate::multiplier::{
    build_multiplier, lower_bound_certificate, multiplier_adjoint, multiplier_dual,
    perturbation_certificate, SymbolFunction,
};
use crate::operators::{condition_number, op_norm, Operator, Vector, DEFAULT_TOL};
use crate::report::{
    AdjointResult, BoundsResult, DualResult, DualSide, Envelope, MultiplierResult,
    ReconstructResult, Settings, TensorResult,
};
use crate::tensor::{tensor_bounds, tensor_operator_check, tensor_sandwich_check};
use crate::verification::{self, DEFAULT_SEED};

#[derive(Debug, Parser)]
#[command(name = "biframe", version, about = "Continuous biframe toolkit")]
struct Cli {
    /// Relative tolerance for positivity, invertibility and residual checks.
    #[arg(long, global = true, default_value_t = DEFAULT_TOL)]
    tol: f64,
    /// Emit a machine-readable JSON report on standard output.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for the randomized property suites.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Request bit-reproducible reductions. All reductions are sequential,
    /// so this only gets recorded in the report.
    #[arg(long, global = true)]
    deterministic: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum DualArg {
    Left,
    Right,
    Multiplier,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Optimal biframe bounds of a pair.
    Bounds { file: PathBuf },
    /// Residuals of both reconstruction formulas on the standard basis.
    Reconstruct { file: PathBuf },
    /// Canonical or multiplier-induced dual pair.
    Dual {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "right")]
        side: DualArg,
    },
    /// Multiplier norm bound, adjoint identity and lower-bound certificates.
    Multiplier {
        file: PathBuf,
        /// λ₁ of the perturbation certificate (defaults to ‖I − M‖ when below 1).
        #[arg(long)]
        lambda1: Option<f64>,
        /// λ₂ of the perturbation certificate.
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        lambda2: f64,
    },
    /// Tensor product of two pairs.
    Tensor {
        file_a: PathBuf,
        file_b: PathBuf,
        #[arg(long)]
        check_factorization: bool,
        #[arg(long)]
        check_sandwich: bool,
    },
    /// Run the embedded corpus of worked examples and property suites.
    VerifyPaper,
    /// Write the embedded example pairs as JSON documents into a directory.
    ExportCorpus { dir: PathBuf },
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if code == 0 {
                write!(out, "{rendered}")
            } else {
                write!(err, "{rendered}")
            };
            return code;
        }
    };
    if !(cli.tol > 0.0 && cli.tol.is_finite()) {
        let _ = writeln!(err, "error: --tol must be a positive finite number, got {}", cli.tol);
        return 2;
    }
    match execute(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}

fn settings(cli: &Cli) -> Settings {
    Settings {
        tolerance: cli.tol,
        seed: cli.seed,
        deterministic: cli.deterministic,
    }
}

fn emit<T: Serialize>(
    cli: &Cli,
    out: &mut dyn Write,
    command: &'static str,
    result: T,
    text: impl FnOnce(&T) -> String,
) -> Result<()> {
    let rendered = if cli.json {
        Envelope::new(command, settings(cli), result).to_json()
    } else {
        text(&result)
    };
    match writeln!(out, "{rendered}") {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(Error::Io {
            path: PathBuf::from("<stdout>"),
            source: e,
        }),
        _ => Ok(()),
    }
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<i32> {
    let tol = cli.tol;
    match &cli.command {
        Command::Bounds { file } => {
            let doc = document::load_document(file)?;
            let report = classify(&doc.pair, tol);
            let (fa, fb) = single_frame_bounds(doc.pair.f());
            let (ga, gb) = single_frame_bounds(doc.pair.g());
            let result = BoundsResult {
                name: doc.name().map(str::to_owned),
                dim: doc.pair.space().dim(),
                atoms: doc.pair.atom_space().len(),
                biframe: report,
                frame_bounds_f: [fa, fb],
                frame_bounds_g: [ga, gb],
            };
            emit(cli, out, "bounds", result, |r| {
                let b = &r.biframe;
                let mut s = format!(
                    "{}dim {}, {} atoms\nbiframe: {}  bounds [{}, {}]  hermitian residual {:.3e}  threshold {:.3e}\nframe bounds  F: [{}, {}]  G: [{}, {}]",
                    r.name.as_ref().map(|n| format!("{n}: ")).unwrap_or_default(),
                    r.dim,
                    r.atoms,
                    if b.is_biframe { "yes" } else { "no" },
                    b.lower,
                    b.upper,
                    b.hermitian_residual,
                    b.threshold,
                    r.frame_bounds_f[0],
                    r.frame_bounds_f[1],
                    r.frame_bounds_g[0],
                    r.frame_bounds_g[1],
                );
                if let Some(note) = &b.truncation_note {
                    s.push_str(&format!("\ntruncation: {note}"));
                }
                s
            })?;
        }
        Command::Reconstruct { file } => {
            let doc = document::load_document(file)?;
            let space = doc.pair.space();
            let cond = condition_number(&assemble(&doc.pair).op);
            let (mut left, mut right) = (0.0f64, 0.0f64);
            for i in 0..space.dim() {
                let e = Vector::basis(space, i);
                let (l, r) = reconstruct(&doc.pair, &e, tol)?.residuals(&e);
                left = left.max(l);
                right = right.max(r);
            }
            let bound = tol * cond;
            let result = ReconstructResult {
                condition_number: cond,
                residual_bound: bound,
                left_max_residual: left,
                right_max_residual: right,
                passed: left <= bound && right <= bound,
            };
            emit(cli, out, "reconstruct", result, |r| {
                format!(
                    "left residual {:.3e}  right residual {:.3e}  bound {:.3e}  (cond {:.4})  {}",
                    r.left_max_residual,
                    r.right_max_residual,
                    r.residual_bound,
                    r.condition_number,
                    pass(r.passed)
                )
            })?;
        }
        Command::Dual { file, side } => {
            let doc = document::load_document(file)?;
            let (dual, symbol, cond, side) = match side {
                DualArg::Left | DualArg::Right => {
                    let s = if matches!(side, DualArg::Left) { Side::Left } else { Side::Right };
                    let cond = condition_number(&assemble(&doc.pair).op);
                    (canonical_dual(&doc.pair, s, tol)?, None, cond, DualSide::from(s))
                }
                DualArg::Multiplier => {
                    let m = symbol_or_unit(&doc);
                    let mult = build_multiplier(&m, doc.pair.f(), doc.pair.g())?;
                    let cond = condition_number(&mult.op);
                    let dual = multiplier_dual(&mult, &m, doc.pair.f(), doc.pair.g(), tol)?;
                    (dual, None::<SymbolFunction>, cond, DualSide::Multiplier)
                }
            };
            let residual = duality_residual(&dual);
            let bound = tol * cond;
            let mut meta = doc.metadata.clone();
            meta.insert("derived".into(), format!("{side:?} dual").to_lowercase());
            let result = DualResult {
                side,
                duality_residual: residual,
                residual_bound: bound,
                passed: residual <= bound,
                dual: BiframeDocument::from_pair(&dual, symbol.as_ref(), meta),
            };
            emit(cli, out, "dual", result, |r| {
                format!(
                    "{:?} dual: ‖S − I‖ = {:.3e}  bound {:.3e}  {}\n{}",
                    r.side,
                    r.duality_residual,
                    r.residual_bound,
                    pass(r.passed),
                    r.dual.to_json()
                )
            })?;
        }
        Command::Multiplier { file, lambda1, lambda2 } => {
            let doc = document::load_document(file)?;
            let (f, g) = (doc.pair.f(), doc.pair.g());
            let m = symbol_or_unit(&doc);
            let mult = build_multiplier(&m, f, g)?;
            let adj = multiplier_adjoint(&mult, f, g)?;
            let lower = lower_bound_certificate(&mult, f, g);
            let lambda1 = match lambda1 {
                Some(l) => Some(*l),
                None => {
                    let d = op_norm(&Operator::identity(doc.pair.space()).sub(&mult.op)?);
                    (d < 1.0).then_some(d)
                }
            };
            let perturbation = lambda1
                .map(|l1| perturbation_certificate(&mult, f, g, l1, *lambda2))
                .transpose()?;
            let result = MultiplierResult {
                unit_symbol: doc.symbol.is_none(),
                symbol_sup_norm: m.sup_norm(),
                bessel_f: mult.bessel_f,
                bessel_g: mult.bessel_g,
                norm_bound: mult.norm_bound,
                actual_norm: mult.actual_norm,
                within_norm_bound: mult.within_norm_bound(),
                adjoint: AdjointResult {
                    basis_residual: adj.basis_residual,
                    swapped_residual: adj.swapped_residual,
                    unswapped_residual: adj.unswapped_residual,
                },
                lower_bound_certificate: lower,
                perturbation_certificate: perturbation,
            };
            emit(cli, out, "multiplier", result, |r| {
                let mut s = format!(
                    "‖M‖ = {}  bound ‖m‖∞·√(B₁B₂) = {}  {}\nadjoint vs M(conj m, G, F): {:.3e}\nlower-bound certificate: D = {}  implied {}  actual {}  {}",
                    r.actual_norm,
                    r.norm_bound,
                    pass(r.within_norm_bound),
                    r.adjoint.swapped_residual,
                    r.lower_bound_certificate.d,
                    r.lower_bound_certificate.implied_lower,
                    r.lower_bound_certificate.actual_lower,
                    pass(r.lower_bound_certificate.holds),
                );
                match &r.perturbation_certificate {
                    Some(p) if p.accepted => {
                        for (name, cmp) in [("(F,F)", &p.ff), ("(G,G)", &p.gg)] {
                            if let Some(cmp) = cmp {
                                s.push_str(&format!(
                                    "\nperturbation λ₁={} λ₂={} {name}: implied {}  actual {}  {}",
                                    p.lambda1,
                                    p.lambda2,
                                    cmp.implied_lower,
                                    cmp.actual_lower,
                                    pass(cmp.holds)
                                ));
                            }
                        }
                    }
                    Some(p) => s.push_str(&format!(
                        "\nperturbation hypothesis rejected: ‖I − M‖ = {} > {}",
                        p.hypothesis_lhs, p.hypothesis_rhs
                    )),
                    None => s.push_str("\nperturbation certificate: not applicable (‖I − M‖ ≥ 1)"),
                }
                s
            })?;
        }
        Command::Tensor {
            file_a,
            file_b,
            check_factorization,
            check_sandwich,
        } => {
            let a = document::load_document(file_a)?;
            let b = document::load_document(file_b)?;
            let result = TensorResult {
                bounds: tensor_bounds(&a.pair, &b.pair, tol),
                factorization_residual: check_factorization.then(|| tensor_operator_check(&a.pair, &b.pair)),
                sandwich: check_sandwich.then(|| tensor_sandwich_check(&a.pair, &b.pair, tol)),
            };
            emit(cli, out, "tensor", result, |r| {
                let b = &r.bounds;
                let mut s = format!(
                    "product bounds [{}, {}]  optimal bounds [{}, {}]  biframe: {}",
                    b.product_lower,
                    b.product_upper,
                    b.report.lower,
                    b.report.upper,
                    if b.report.is_biframe { "yes" } else { "no" }
                );
                if let Some(f) = r.factorization_residual {
                    s.push_str(&format!("\nfactorization residual {f:.3e}"));
                }
                if let Some(v) = &r.sandwich {
                    s.push_str(&format!("\nsandwich: {}", serde_json::to_string(v).unwrap_or_default()));
                }
                s
            })?;
        }
        Command::VerifyPaper => {
            let report = verification::run_all(cli.seed);
            let passed = report.passed;
            emit(cli, out, "verify-paper", report, |r| {
                let mut s = String::new();
                for c in &r.checks {
                    s.push_str(&format!("[{}] {:>3}  {}\n", pass(c.passed), c.id, c.name));
                    for (k, m) in &c.measurements {
                        s.push_str(&format!("          {k}: {:.3e} (tol {:.1e})\n", m.value, m.tolerance));
                    }
                }
                s.push_str(if r.passed { "all checks passed" } else { "SOME CHECKS FAILED" });
                s
            })?;
            return Ok(if passed { 0 } else { 1 });
        }
        Command::ExportCorpus { dir } => {
            export_corpus(dir)?;
            if !cli.json {
                writeln!(out, "wrote corpus to {}", dir.display()).ok();
            }
        }
    }
    Ok(0)
}

fn pass(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn symbol_or_unit(doc: &document::Loaded) -> SymbolFunction {
    doc.symbol
        .clone()
        .unwrap_or_else(|| SymbolFunction::unit(Arc::clone(doc.pair.atom_space())))
}

fn export_corpus(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|source| Error::Io {
        path: dir.to_owned(),
        source,
    })?;
    let (t1, t2) = corpus::tensor_factors(8);
    let entries = [
        ("partition", corpus::partition_pair()),
        ("truncated", corpus::truncated_pair(8)),
        ("mixed", corpus::mixed_pair()),
        ("tensor-left", t1),
        ("tensor-right", t2),
    ];
    for (name, pair) in entries {
        let meta = BTreeMap::from([("name".to_owned(), name.to_owned())]);
        let doc = BiframeDocument::from_pair(&pair, None, meta);
        document::save_document(dir.join(format!("{name}.json")), &doc)?;
    }
    Ok(())
}
