//! The four subcommands: special-function evaluation, the exact intersection
//! matrix, connection matrices of configuration-space paths, and the numeric
//! cross-validation report.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::fs;

use num_complex::Complex64;
use serde::Serialize;

use twisted_cycles::chains::{intersection_matrix, CycleIndex};
use twisted_cycles::elliptic::{make_lattice, sigma, wp, wp_prime, zeta};
use twisted_cycles::local_system::AlphaParam;
use twisted_cycles::matrix::MatQc;
use twisted_cycles::picard_lefschetz::{
    compose, connection_matrix, special_configuration, ConnectionMatrix, PathLabel,
};
use twisted_cycles::quadrature::{
    build_cycle, integrate, numeric_report, vanishing_limit, CheckRecord,
};
use twisted_cycles::ratfunc::RationalFunctionC as R;
use twisted_cycles::tolerances as tol;
use twisted_cycles::Error;

use crate::config::{parse_complex, Failure, RunConfig};

/// Maps a library error onto the exit-code contract: domain errors (poles,
/// degenerate or unreachable geometry, quadrature breakdown) exit 2; input
/// and parameter errors exit 1.
fn failure_from(err: Error) -> Failure {
    let code = match err {
        Error::DegenerateLattice(_)
        | Error::PoleAtLatticePoint { .. }
        | Error::PoleOrZero { .. }
        | Error::DegenerateConfiguration { .. }
        | Error::ClearanceViolation { .. }
        | Error::QuadratureFailure { .. }
        | Error::InDeformationWindow { .. }
        | Error::SelfIntersectionZero
        | Error::NoClearLoopFound(_) => 2,
        Error::ResonantAlpha { .. }
        | Error::UnknownIndex(_)
        | Error::UnknownLabel(_)
        | Error::CompositionMismatch { .. }
        | Error::EpsilonTooLarge { .. }
        | Error::Parse(_) => 1,
    };
    let message = match &err {
        Error::PoleAtLatticePoint { .. } | Error::PoleOrZero { .. } => format!("pole: {err}"),
        _ => err.to_string(),
    };
    Failure { code, message }
}

/// Writes the report to the configured output path, or to standard output.
fn emit(cfg: &RunConfig, report: &str) -> Result<(), Failure> {
    match &cfg.output_path {
        Some(path) => fs::write(path, report)
            .map_err(|e| Failure::usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{report}");
            Ok(())
        }
    }
}

/// Renders a complex number in the CLI's own `a+bi` literal grammar, so
/// reports can be fed back in as inputs.
fn fmt_complex(z: Complex64) -> String {
    let re = z.re + 0.0; // +0.0 folds away a negative zero
    let im = z.im + 0.0;
    if im >= 0.0 {
        format!("{re}+{im}i")
    } else {
        format!("{re}-{}i", -im)
    }
}

/// Renders a complex matrix in the same aligned bracket layout the exact
/// matrices use.
fn fmt_complex_matrix(values: &[Vec<Complex64>]) -> String {
    let strings: Vec<Vec<String>> = values
        .iter()
        .map(|row| row.iter().map(|&z| fmt_complex(z)).collect())
        .collect();
    let cols = strings.first().map_or(0, Vec::len);
    let widths: Vec<usize> = (0..cols)
        .map(|j| strings.iter().map(|row| row[j].len()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for row in &strings {
        out.push('[');
        for (j, s) in row.iter().enumerate() {
            if j > 0 {
                out.push_str("  ");
            }
            let _ = write!(out, "{:>width$}", s, width = widths[j]);
        }
        out.push_str("]\n");
    }
    out
}

/// `special-fns <z>`: σ, ζ, ℘, ℘′ at z plus the quasi-periods and the
/// Legendre residual on the configured lattice.
pub fn cmd_special_fns(cfg: &RunConfig, z_text: &str) -> Result<u8, Failure> {
    let z = parse_complex(z_text).map_err(Failure::usage)?;
    let lat = make_lattice(cfg.omega1, cfg.omega2).map_err(failure_from)?;
    let sigma_v = sigma(z, &lat);
    let zeta_v = zeta(z, &lat).map_err(failure_from)?;
    let wp_v = wp(z, &lat).map_err(failure_from)?;
    let wp_prime_v = wp_prime(z, &lat).map_err(failure_from)?;
    let legendre = (lat.eta1 * lat.omega2 - lat.eta2 * lat.omega1 - Complex64::new(0.0, 2.0 * PI))
        .norm()
        / (2.0 * PI);

    let mut report = String::new();
    let _ = writeln!(report, "lattice: omega1 = {}, omega2 = {}", fmt_complex(lat.omega1), fmt_complex(lat.omega2));
    let _ = writeln!(report, "z = {}", fmt_complex(z));
    let _ = writeln!(report, "sigma = {}", fmt_complex(sigma_v));
    let _ = writeln!(report, "zeta = {}", fmt_complex(zeta_v));
    let _ = writeln!(report, "wp = {}", fmt_complex(wp_v));
    let _ = writeln!(report, "wp_prime = {}", fmt_complex(wp_prime_v));
    let _ = writeln!(report, "eta1 = {}", fmt_complex(lat.eta1));
    let _ = writeln!(report, "eta2 = {}", fmt_complex(lat.eta2));
    let _ = writeln!(report, "legendre_residual = {legendre:.3e}");
    emit(cfg, &report)?;
    Ok(0)
}

/// `intersection [--at-c]`: the exact 5×5 intersection matrix over ℚ(c),
/// its (2,2)-cofactor, and optionally its value at c = e^{2πiα} together
/// with the twisted-antisymmetry residual |M(1/c)ᵀ + M(c)|.
pub fn cmd_intersection(cfg: &RunConfig, at_c: bool) -> Result<u8, Failure> {
    let form = intersection_matrix();
    let mut report = String::new();
    let _ = writeln!(
        report,
        "intersection matrix, rows and columns ordered (01), (12), (20), w1, w2:"
    );
    let _ = write!(report, "{}", form.as_mat());
    let _ = writeln!(report, "cofactor_22 = {}", form.cofactor_22());

    if at_c {
        let a = AlphaParam::new(cfg.alpha).map_err(failure_from)?;
        let c = a.c();
        let _ = writeln!(report, "alpha = {}", fmt_complex(cfg.alpha));
        let _ = writeln!(report, "c = exp(2*pi*i*alpha) = {}", fmt_complex(c));
        let values = form.as_mat().eval(c);
        let dual = form.as_mat().eval(c.finv());
        let _ = writeln!(report, "matrix at c:");
        let _ = write!(report, "{}", fmt_complex_matrix(&values));
        let mut residual = 0.0f64;
        let mut scale = 0.0f64;
        for i in 0..5 {
            for j in 0..5 {
                residual = residual.max((dual[j][i] + values[i][j]).norm());
                scale = scale.max(values[i][j].norm());
            }
        }
        let _ = writeln!(report, "antisymmetry_residual = {:.3e}", residual / scale);
    }
    emit(cfg, &report)?;
    Ok(0)
}

/// One factor `label` or `label^exp` of a connection word.
fn parse_factor(token: &str) -> Result<(PathLabel, i32), Failure> {
    let (label_text, exponent) = match token.split_once('^') {
        Some((l, e)) => (
            l,
            e.trim()
                .parse::<i32>()
                .map_err(|_| Failure::usage(format!("bad exponent in `{token}`")))?,
        ),
        None => (token, 1),
    };
    let label = PathLabel::parse(label_text.trim()).map_err(failure_from)?;
    Ok((label, exponent))
}

/// Exact reference values for the four elementary connection matrices
/// (columns-as-images in the J′ basis ordered (01), (20), ω₁, ω₂) and their
/// target configuration tags.
fn reference_connection(label: &PathLabel) -> Option<(MatQc, &'static str)> {
    let lin = |a0: i64, a1: i64| -> R { &R::integer(a0) + &(&R::integer(a1) * &R::c()) };
    let (rows, target): ([[R; 4]; 4], &str) = match (format!("{label}")).as_str() {
        "02:-1,0" => (
            [
                [lin(1, 0), lin(0, 0), lin(0, 0), lin(0, 0)],
                [lin(0, 1), lin(0, -1), lin(-1, 1), lin(1, -1)],
                [lin(0, 1), lin(-1, -1), lin(0, 1), lin(1, -1)],
                [lin(0, 1), lin(-1, -1), lin(-1, 1), lin(2, -1)],
            ],
            "210",
        ),
        "02:1,0" => (
            [
                [lin(1, 0), lin(0, 0), lin(0, 0), lin(0, 0)],
                [lin(0, 1), lin(0, -1), lin(-1, 1), lin(0, 0)],
                [lin(0, 0), lin(0, 0), lin(1, 0), lin(0, 0)],
                [lin(0, 1), lin(-1, -1), lin(-1, 1), lin(1, 0)],
            ],
            "210",
        ),
        "01:0,-1" => (
            [
                [lin(0, -1), lin(1, 0), lin(1, -1), lin(-1, 1)],
                [lin(0, 0), lin(1, 0), lin(0, 0), lin(0, 0)],
                [lin(1, 1), lin(-1, 0), lin(0, 1), lin(1, -1)],
                [lin(1, 1), lin(-1, 0), lin(-1, 1), lin(2, -1)],
            ],
            "102",
        ),
        "01:0,1" => (
            [
                [lin(0, -1), lin(1, 0), lin(0, 0), lin(-1, 1)],
                [lin(0, 0), lin(1, 0), lin(0, 0), lin(0, 0)],
                [lin(1, 1), lin(-1, 0), lin(1, 0), lin(1, -1)],
                [lin(0, 0), lin(0, 0), lin(0, 0), lin(1, 0)],
            ],
            "102",
        ),
        _ => return None,
    };
    Some((
        MatQc::from_rows(4, rows.into_iter().flatten().collect()),
        target,
    ))
}

fn verify_elementary(label: &PathLabel, conn: &ConnectionMatrix) -> Result<(), String> {
    let Some((expected, target)) = reference_connection(label) else {
        return Err(format!("no reference matrix for `{label}`"));
    };
    for row in 0..4 {
        for col in 0..4 {
            if conn.mat.at(row, col) != expected.at(row, col) {
                return Err(format!(
                    "entry ({row},{col}) is {}, reference says {}",
                    conn.mat.at(row, col),
                    expected.at(row, col)
                ));
            }
        }
    }
    if conn.source != "012" || conn.target != target {
        return Err(format!(
            "tags q_({}) -> q_({}), reference says q_(012) -> q_({target})",
            conn.source, conn.target
        ));
    }
    Ok(())
}

fn verify_word(word: &[(PathLabel, i32)], conn: &ConnectionMatrix) -> Result<(), String> {
    let total: i32 = word.iter().map(|&(_, e)| e).sum();
    let expected = (-&R::c()).powi(total);
    let det = conn.mat.det();
    if det == expected {
        Ok(())
    } else {
        Err(format!("det is {det}, determinant oracle says {expected}"))
    }
}

/// `connection <spec>... [--verify]`: the connection matrix of a path label,
/// or of a word of factors `label[^exp]` with the rightmost factor acting
/// first. `--verify` checks an elementary label against the embedded exact
/// constants, and a word against the determinant oracle (−c)^Σexp.
pub fn cmd_connection(cfg: &RunConfig, spec: &[String], verify: bool) -> Result<u8, Failure> {
    let word = spec
        .iter()
        .map(|token| parse_factor(token))
        .collect::<Result<Vec<_>, _>>()?;
    let single_label = (word.len() == 1 && word[0].1 == 1).then(|| word[0].0);
    let conn = match single_label {
        Some(label) => connection_matrix(&label).map_err(failure_from)?,
        None => compose(&word).map_err(failure_from)?,
    };

    let mut report = String::new();
    match single_label {
        Some(label) => {
            let _ = writeln!(report, "path: {label}");
        }
        None => {
            let _ = writeln!(
                report,
                "path word: {} (rightmost factor acts first)",
                spec.join(" ")
            );
        }
    }
    let _ = writeln!(
        report,
        "matrix on the J' basis ordered (01), (20), w1, w2; columns are images"
    );
    let _ = writeln!(report, "q_({}) -> q_({})", conn.source, conn.target);
    let _ = write!(report, "{}", conn.mat);
    let _ = writeln!(report, "det = {}", conn.mat.det());

    let mut exit = 0u8;
    if verify {
        let outcome = match single_label {
            Some(label) => verify_elementary(&label, &conn),
            None => verify_word(&word, &conn),
        };
        match outcome {
            Ok(()) => {
                let _ = writeln!(report, "verify: PASS");
            }
            Err(why) => {
                let _ = writeln!(report, "verify: FAIL ({why})");
                exit = 3;
            }
        }
    }
    emit(cfg, &report)?;
    Ok(exit)
}

/// NDJSON mirror of a check record.
#[derive(Serialize)]
struct Record<'a> {
    check: &'a str,
    value: f64,
    threshold: f64,
    pass: bool,
}

fn push_record(records: &mut Vec<CheckRecord>, check: String, value: f64, threshold: f64) {
    records.push(CheckRecord {
        pass: value <= threshold,
        check,
        value,
        threshold,
    });
}

/// `verify-numeric`: runs the numeric cross-validation suite at the
/// half-period configuration q_(012) of the configured lattice and emits one
/// NDJSON record per check. Exit code 0 iff every check passes, 3 otherwise.
pub fn cmd_verify_numeric(cfg: &RunConfig) -> Result<u8, Failure> {
    let a = AlphaParam::new(cfg.alpha).map_err(failure_from)?;
    let lat = make_lattice(cfg.omega1, cfg.omega2).map_err(failure_from)?;
    let q = special_configuration("012", lat).map_err(failure_from)?;

    let mut records = numeric_report(&q, &a).map_err(failure_from)?;

    // The homology relation once more, at the configured ε rather than the
    // report's fixed grid, so `--epsilon` is exercised end to end.
    let eps = cfg.epsilon * lat.omega1.norm();
    let mut values = Vec::with_capacity(3);
    for mu in [CycleIndex::Seg01, CycleIndex::Seg12, CycleIndex::Seg20] {
        let cycle = build_cycle(mu, &q, &a, eps).map_err(failure_from)?;
        values.push(
            integrate(&cycle, &a, tol::QUAD_ABS_TOL)
                .map_err(failure_from)?
                .value,
        );
    }
    let max_f = values
        .iter()
        .map(|v| v.norm())
        .fold(f64::NEG_INFINITY, f64::max);
    let relation = (values[0] + values[1] + values[2]).norm() / max_f;
    push_record(
        &mut records,
        "relation_at_epsilon".to_string(),
        relation,
        tol::RELATION_RESIDUAL_REL,
    );

    // Vanishing-cycle decay along the two elementary paths: the magnitude
    // sequence must shrink monotonically (every consecutive ratio < 1) and
    // end well below where it started.
    let s_grid = [0.30, 0.40, 0.45, 0.48];
    for (suffix, text) in [("01_0_1", "01:0,1"), ("02_1_0", "02:1,0")] {
        let label = PathLabel::parse(text).map_err(failure_from)?;
        let magnitudes = vanishing_limit(&label, &a, &s_grid, lat).map_err(failure_from)?;
        let ratio = magnitudes[magnitudes.len() - 1] / magnitudes[0];
        let monotone = magnitudes
            .windows(2)
            .map(|w| w[1] / w[0])
            .fold(f64::NEG_INFINITY, f64::max);
        push_record(
            &mut records,
            format!("vanishing_ratio_{suffix}"),
            ratio,
            tol::VANISHING_RATIO_MAX,
        );
        push_record(
            &mut records,
            format!("vanishing_monotone_{suffix}"),
            monotone,
            1.0,
        );
    }

    for record in &mut records {
        if let Some(&threshold) = cfg.tolerances.get(&record.check) {
            record.threshold = threshold;
            record.pass = record.value <= threshold;
        }
    }

    let mut report = String::new();
    for record in &records {
        let line = serde_json::to_string(&Record {
            check: &record.check,
            value: record.value,
            threshold: record.threshold,
            pass: record.pass,
        })
        .expect("check records serialize");
        report.push_str(&line);
        report.push('\n');
    }
    emit(cfg, &report)?;

    let failed: Vec<&str> = records
        .iter()
        .filter(|r| !r.pass)
        .map(|r| r.check.as_str())
        .collect();
    if cfg.output_path.is_some() {
        println!(
            "verify-numeric: {}/{} checks passed",
            records.len() - failed.len(),
            records.len()
        );
    }
    if failed.is_empty() {
        Ok(0)
    } else {
        eprintln!("verify-numeric: failed checks: {}", failed.join(", "));
        Ok(3)
    }
}
