//! Run configuration: baked-in defaults, an optional flat `key=value` config
//! file, and command-line flags, merged in that order (the last writer wins
//! key by key). Also home of the complex-literal grammar shared by flags,
//! config files and positional arguments.

use num_complex::Complex64;
use std::collections::BTreeMap;
use std::path::PathBuf;

/// A failure carrying the process exit code it maps to: 1 for usage and
/// configuration errors, 2 for domain errors (poles, degenerate input),
/// 3 for verification mismatches.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    /// Usage/configuration error (exit code 1).
    pub fn usage(message: impl Into<String>) -> Failure {
        Failure {
            code: 1,
            message: message.into(),
        }
    }
}

/// The check names `verify-numeric` emits, and therefore the names accepted
/// by `--tol <name>=<value>` and `tol.<name>` config keys.
pub const CHECK_NAMES: [&str; 17] = [
    "legendre",
    "abelian_1",
    "abelian_2",
    "monodromy_x0",
    "monodromy_x1",
    "monodromy_x2",
    "monodromy_origin",
    "g_ellipticity",
    "epsilon_independence_01",
    "epsilon_independence_12",
    "epsilon_independence_20",
    "relation_residual",
    "relation_at_epsilon",
    "vanishing_ratio_01_0_1",
    "vanishing_monotone_01_0_1",
    "vanishing_ratio_02_1_0",
    "vanishing_monotone_02_1_0",
];

/// Resolved settings shared by every subcommand.
#[derive(Debug, Clone)]
pub struct RunConfig {
    /// First lattice period ω₁.
    pub omega1: Complex64,
    /// Second lattice period ω₂.
    pub omega2: Complex64,
    /// Exponent α of the integrand g^α.
    pub alpha: Complex64,
    /// ε-circle radius as a fraction of |ω₁|.
    pub epsilon: f64,
    /// Per-check threshold overrides for `verify-numeric`.
    pub tolerances: BTreeMap<String, f64>,
    /// Report destination; standard output when absent.
    pub output_path: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> RunConfig {
        RunConfig {
            omega1: Complex64::new(1.0, 0.0),
            omega2: Complex64::new(0.0, 1.0),
            alpha: Complex64::new(0.3, 0.0),
            epsilon: 0.02,
            tolerances: BTreeMap::new(),
            output_path: None,
        }
    }
}

impl RunConfig {
    /// Applies one `key = value` assignment coming from a config-file line or
    /// a flag; `origin` names the source for error messages.
    pub fn assign(&mut self, key: &str, value: &str, origin: &str) -> Result<(), Failure> {
        match key {
            "omega1" => self.omega1 = parse_complex_or(value, origin)?,
            "omega2" => self.omega2 = parse_complex_or(value, origin)?,
            "alpha" => self.alpha = parse_complex_or(value, origin)?,
            "epsilon" => {
                let eps = parse_real_or(value, origin)?;
                if eps <= 0.0 {
                    return Err(Failure::usage(format!(
                        "{origin}: epsilon must be positive, got `{value}`"
                    )));
                }
                self.epsilon = eps;
            }
            "out" => self.output_path = Some(PathBuf::from(value)),
            _ => match key.strip_prefix("tol.") {
                Some(name) if CHECK_NAMES.contains(&name) => {
                    let threshold = parse_real_or(value, origin)?;
                    self.tolerances.insert(name.to_string(), threshold);
                }
                Some(name) => {
                    return Err(Failure::usage(format!(
                        "{origin}: unknown check name `{name}` (known: {})",
                        CHECK_NAMES.join(", ")
                    )));
                }
                None => {
                    return Err(Failure::usage(format!("{origin}: unknown key `{key}`")));
                }
            },
        }
        Ok(())
    }

    /// Applies a whole config file: flat `key = value` lines, with blank
    /// lines and `#` comments ignored.
    pub fn apply_file(&mut self, text: &str, origin: &str) -> Result<(), Failure> {
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Failure::usage(format!("{origin}:{}: expected key=value", lineno + 1))
            })?;
            self.assign(
                key.trim(),
                value.trim(),
                &format!("{origin}:{}", lineno + 1),
            )?;
        }
        Ok(())
    }
}

/// Parses the complex-literal grammar `a`, `bi`, or `a±bi`: each part is a
/// decimal float with optional sign and scientific exponent, and a bare or
/// signed `i` means ±1i. Examples: `1`, `-2.5e-3`, `0.3+0.2i`, `1e2-0.5e-1i`,
/// `i`, `-i`.
pub fn parse_complex(text: &str) -> Result<Complex64, String> {
    let s = text.trim();
    if s.is_empty() {
        return Err("empty complex literal".to_string());
    }
    let Some(body) = s.strip_suffix(['i', 'I']) else {
        return Ok(Complex64::new(parse_real(s)?, 0.0));
    };
    // Split the imaginary part off at the last top-level sign: one that is
    // neither leading nor part of a scientific exponent.
    let bytes = body.as_bytes();
    let mut split = None;
    for k in (1..bytes.len()).rev() {
        if matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E') {
            split = Some(k);
            break;
        }
    }
    let (re_part, im_part) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("", body),
    };
    let re = if re_part.is_empty() {
        0.0
    } else {
        parse_real(re_part)?
    };
    let im = match im_part {
        "" | "+" => 1.0,
        "-" => -1.0,
        t => parse_real(t)?,
    };
    Ok(Complex64::new(re, im))
}

/// Parses a finite decimal float (scientific notation allowed).
pub fn parse_real(text: &str) -> Result<f64, String> {
    let s = text.trim();
    let v: f64 = s
        .parse()
        .map_err(|_| format!("malformed number `{s}`"))?;
    if !v.is_finite() {
        return Err(format!("number `{s}` is not finite"));
    }
    Ok(v)
}

fn parse_complex_or(value: &str, origin: &str) -> Result<Complex64, Failure> {
    parse_complex(value).map_err(|e| Failure::usage(format!("{origin}: {e}")))
}

fn parse_real_or(value: &str, origin: &str) -> Result<f64, Failure> {
    parse_real(value).map_err(|e| Failure::usage(format!("{origin}: {e}")))
}
