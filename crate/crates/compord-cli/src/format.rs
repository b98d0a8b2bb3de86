//! On-disk document formats.
//!
//! Every document is JSON with a `version` field, and every number that the
//! solvers consume exactly is carried as a rational string (`"p"` or
//! `"p/q"`) so the files stay arbitrary-precision safe. [`canonical_json`]
//! defines the one canonical byte form: pretty-printed with two-space
//! indentation, fields in declaration order, and a trailing newline.
//! `parse` followed by `canonical_json` reproduces a canonical file
//! byte-for-byte.

use compord::numeric::parse_rational;
use compord::solvers::{Instance, Mode, Objective};
use compord::{AffineFn, ClampedFn, Function, MonotonePwlFn, Rational};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

/// Format version accepted and emitted by this build.
pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("malformed document: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported format version {found} (this build reads version {FORMAT_VERSION})")]
    Version { found: u32 },
    #[error("{0}")]
    Invalid(String),
}

fn invalid(msg: impl Into<String>) -> FormatError {
    FormatError::Invalid(msg.into())
}

/// A composition-ordering problem: fold the functions over `start` in some
/// order and maximize (or minimize) the result.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub version: u32,
    /// "total", "partial", or "exact-k".
    pub mode: String,
    /// Number of functions to apply; required by (and only by) "exact-k".
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    /// "max" or "min".
    pub objective: String,
    pub start: String,
    pub functions: Vec<FunctionSpec>,
}

/// One function; the `kind` tag selects the class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum FunctionSpec {
    /// slope·x + intercept, slope ≥ 0.
    Affine { slope: String, intercept: String },
    /// max{slope·x + intercept, floor}, slope ≥ 0.
    Clamped {
        slope: String,
        intercept: String,
        floor: String,
    },
    /// Continuous piecewise-linear: piece i applies below breakpoint i,
    /// the last piece above the last breakpoint.
    Pwl {
        breakpoints: Vec<String>,
        pieces: Vec<PieceSpec>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PieceSpec {
    pub slope: String,
    pub intercept: String,
}

/// A free-order secretary instance: independent discrete applicants.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SecretaryFile {
    pub version: u32,
    pub applicants: Vec<ApplicantSpec>,
}

/// A discrete value distribution, values strictly decreasing, probabilities
/// summing to one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ApplicantSpec {
    pub values: Vec<String>,
    pub probs: Vec<String>,
}

/// A single-machine time-dependent scheduling instance: job processing time
/// is rate·t + base when started at time t.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScheduleFile {
    pub version: u32,
    pub start: String,
    pub jobs: Vec<JobSpec>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobSpec {
    pub rate: String,
    pub base: String,
}

/// The canonical byte form of any document this tool reads or writes.
pub fn canonical_json<T: Serialize>(doc: &T) -> String {
    let mut text = serde_json::to_string_pretty(doc).expect("documents always serialize");
    text.push('\n');
    text
}

/// Parses a document and enforces the format version.
pub fn parse_document<T: DeserializeOwned + Versioned>(text: &str) -> Result<T, FormatError> {
    let doc: T = serde_json::from_str(text)?;
    let found = doc.version();
    if found != FORMAT_VERSION {
        return Err(FormatError::Version { found });
    }
    Ok(doc)
}

/// Documents that carry a format version.
pub trait Versioned {
    fn version(&self) -> u32;
}

impl Versioned for InstanceFile {
    fn version(&self) -> u32 {
        self.version
    }
}

impl Versioned for SecretaryFile {
    fn version(&self) -> u32 {
        self.version
    }
}

impl Versioned for ScheduleFile {
    fn version(&self) -> u32 {
        self.version
    }
}

/// Parses a rational string, reporting the offending text on failure.
pub fn rational(s: &str) -> Result<Rational, FormatError> {
    parse_rational(s).map_err(|_| invalid(format!("not a rational number: {s:?}")))
}

/// Renders a rational in the canonical reduced form `p` or `p/q`.
pub fn show_rational(r: &Rational) -> String {
    r.to_string()
}

pub fn parse_mode(mode: &str, k: Option<usize>) -> Result<Mode, FormatError> {
    match (mode, k) {
        ("total", None) => Ok(Mode::Total),
        ("partial", None) => Ok(Mode::Partial),
        ("exact-k", Some(k)) => Ok(Mode::ExactK(k)),
        ("exact-k", None) => Err(invalid("mode \"exact-k\" requires a k field")),
        ("total" | "partial", Some(_)) => {
            Err(invalid(format!("k is only meaningful for mode \"exact-k\", not {mode:?}")))
        }
        _ => Err(invalid(format!(
            "unknown mode {mode:?} (expected \"total\", \"partial\" or \"exact-k\")"
        ))),
    }
}

pub fn parse_objective(objective: &str) -> Result<Objective, FormatError> {
    match objective {
        "max" => Ok(Objective::Max),
        "min" => Ok(Objective::Min),
        _ => Err(invalid(format!(
            "unknown objective {objective:?} (expected \"max\" or \"min\")"
        ))),
    }
}

fn function_from_spec(index: usize, spec: &FunctionSpec) -> Result<Function, FormatError> {
    let context =
        |e: compord::FunctionError| invalid(format!("function {}: {e}", index + 1));
    match spec {
        FunctionSpec::Affine { slope, intercept } => {
            AffineFn::new(rational(slope)?, rational(intercept)?)
                .map(Function::Affine)
                .map_err(&context)
        }
        FunctionSpec::Clamped { slope, intercept, floor } => {
            ClampedFn::new(rational(slope)?, rational(intercept)?, rational(floor)?)
                .map(Function::Clamped)
                .map_err(&context)
        }
        FunctionSpec::Pwl { breakpoints, pieces } => {
            let bps = breakpoints.iter().map(|s| rational(s)).collect::<Result<Vec<_>, _>>()?;
            let ps = pieces
                .iter()
                .map(|p| {
                    AffineFn::new(rational(&p.slope)?, rational(&p.intercept)?).map_err(&context)
                })
                .collect::<Result<Vec<_>, _>>()?;
            MonotonePwlFn::new(bps, ps).map(Function::Pwl).map_err(&context)
        }
    }
}

fn spec_from_function(f: &Function) -> FunctionSpec {
    match f {
        Function::Affine(a) => FunctionSpec::Affine {
            slope: show_rational(a.slope()),
            intercept: show_rational(a.intercept()),
        },
        Function::Clamped(c) => FunctionSpec::Clamped {
            slope: show_rational(c.affine_part().slope()),
            intercept: show_rational(c.affine_part().intercept()),
            floor: show_rational(c.floor()),
        },
        Function::Pwl(p) => FunctionSpec::Pwl {
            breakpoints: p.breakpoints().iter().map(show_rational).collect(),
            pieces: p
                .pieces()
                .iter()
                .map(|piece| PieceSpec {
                    slope: show_rational(piece.slope()),
                    intercept: show_rational(piece.intercept()),
                })
                .collect(),
        },
    }
}

/// Validates an instance document into solver types.
pub fn to_instance(file: &InstanceFile) -> Result<Instance, FormatError> {
    let mode = parse_mode(&file.mode, file.k)?;
    let objective = parse_objective(&file.objective)?;
    let start = rational(&file.start)?;
    let functions = file
        .functions
        .iter()
        .enumerate()
        .map(|(i, spec)| function_from_spec(i, spec))
        .collect::<Result<Vec<_>, _>>()?;
    Instance::new(functions, start, objective, mode).map_err(|e| invalid(e.to_string()))
}

/// Builds an instance document from solver types (always canonical field
/// content: rationals reduced, k present only for exact-k).
pub fn from_instance(instance: &Instance) -> InstanceFile {
    let (mode, k) = match instance.mode {
        Mode::Total => ("total", None),
        Mode::Partial => ("partial", None),
        Mode::ExactK(k) => ("exact-k", Some(k)),
    };
    InstanceFile {
        version: FORMAT_VERSION,
        mode: mode.to_string(),
        k,
        objective: match instance.objective {
            Objective::Max => "max",
            Objective::Min => "min",
        }
        .to_string(),
        start: show_rational(&instance.start),
        functions: instance.functions.iter().map(spec_from_function).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use compord::numeric::{int, rat};

    fn intro_file() -> InstanceFile {
        InstanceFile {
            version: 1,
            mode: "total".into(),
            k: None,
            objective: "max".into(),
            start: "2".into(),
            functions: vec![
                FunctionSpec::Affine { slope: "2".into(), intercept: "-6".into() },
                FunctionSpec::Affine { slope: "1/2".into(), intercept: "2".into() },
                FunctionSpec::Affine { slope: "1".into(), intercept: "2".into() },
            ],
        }
    }

    #[test]
    fn canonical_round_trip_is_byte_identical() {
        let text = canonical_json(&intro_file());
        let parsed: InstanceFile = parse_document(&text).unwrap();
        assert_eq!(canonical_json(&parsed), text);
    }

    #[test]
    fn instance_round_trip_preserves_functions() {
        let file = intro_file();
        let instance = to_instance(&file).unwrap();
        assert_eq!(instance.functions.len(), 3);
        assert_eq!(instance.functions[1].as_affine().unwrap().slope(), &rat(1, 2));
        assert_eq!(from_instance(&instance), file);
    }

    #[test]
    fn unknown_kind_is_rejected() {
        let text = canonical_json(&intro_file())
            .replace("\"kind\": \"affine\"", "\"kind\": \"quadratic\"");
        assert!(parse_document::<InstanceFile>(&text).is_err());
    }

    #[test]
    fn unknown_top_level_field_is_rejected() {
        let text = canonical_json(&intro_file()).replacen(
            "\"version\": 1,",
            "\"version\": 1,\n  \"comment\": \"x\",",
            1,
        );
        assert!(parse_document::<InstanceFile>(&text).is_err());
    }

    #[test]
    fn version_mismatch_is_rejected() {
        let mut file = intro_file();
        file.version = 2;
        let err = parse_document::<InstanceFile>(&canonical_json(&file)).unwrap_err();
        assert!(matches!(err, FormatError::Version { found: 2 }));
    }

    #[test]
    fn mode_k_pairing_is_validated() {
        assert!(parse_mode("exact-k", Some(2)).is_ok());
        assert!(parse_mode("exact-k", None).is_err());
        assert!(parse_mode("total", Some(2)).is_err());
        assert!(parse_mode("sideways", None).is_err());
    }

    #[test]
    fn clamped_and_pwl_specs_convert() {
        let file = InstanceFile {
            version: 1,
            mode: "partial".into(),
            k: None,
            objective: "max".into(),
            start: "0".into(),
            functions: vec![
                FunctionSpec::Clamped {
                    slope: "1/2".into(),
                    intercept: "5".into(),
                    floor: "5".into(),
                },
                FunctionSpec::Pwl {
                    breakpoints: vec!["2".into()],
                    pieces: vec![
                        PieceSpec { slope: "2".into(), intercept: "0".into() },
                        PieceSpec { slope: "1/2".into(), intercept: "3".into() },
                    ],
                },
            ],
        };
        let instance = to_instance(&file).unwrap();
        assert_eq!(instance.functions[0].eval(&int(6)), int(8));
        assert_eq!(instance.functions[1].eval(&int(1)), int(2));
        assert_eq!(instance.functions[1].eval(&int(4)), int(5));
        assert_eq!(from_instance(&instance), file);
    }

    #[test]
    fn bad_rational_is_reported_with_text() {
        let mut file = intro_file();
        file.start = "two".into();
        let err = to_instance(&file).unwrap_err();
        assert!(err.to_string().contains("two"));
    }

    #[test]
    fn negative_slope_is_rejected_with_position() {
        let mut file = intro_file();
        file.functions[2] = FunctionSpec::Affine { slope: "-1".into(), intercept: "0".into() };
        let err = to_instance(&file).unwrap_err();
        assert!(err.to_string().contains("function 3"));
    }
}
