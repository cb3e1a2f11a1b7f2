//! Command-line frontend for the `gc_N` symbolic computation library.
//!
//! Every verb reads JSON inputs, prints one JSON report document on standard
//! output, and exits with 0 on mathematical success, 1 on mathematical
//! failure (a predicate that does not hold, or a decomposition obstruction),
//! or 2 on input/format errors. Identical inputs produce byte-identical
//! reports.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use conformal_core::{
    certify, check_module_axioms, check_regular, classify_deg1_grid, decompose_gc1,
    decompose_gcn, dual_module, lambda_bracket, make_gc1_virasoro, make_nonstandard,
    make_standard_deg1, make_standard_higher, restrict_to_virasoro, vir_semisimple,
    weight_product, AlgebraKind, ConformalModule, Error as CoreError, GcElement, ModuleSpec,
    NonStandardKind, NsBlock, NsTail, PolyMatrix, RegularityReport, Scalar, StandardDeg1Form,
    VirasoroSpec,
};

#[derive(Parser)]
#[command(name = "gcn", version, about = "Exact computations in the general conformal algebra gc_N")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Lambda-bracket of two algebra elements.
    Bracket {
        a: PathBuf,
        b: PathBuf,
    },
    /// Verify the Virasoro equation for an element.
    CheckVirasoro {
        element: PathBuf,
    },
    /// Standardness of a Virasoro element.
    IsStandard {
        element: PathBuf,
    },
    /// Build an element from a constructor parameter file.
    Make {
        params: PathBuf,
        /// Also write the bare element JSON to this path.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exhaustive degree-one classification over a coefficient grid.
    ClassifyDeg1 {
        #[arg(long)]
        n: usize,
        /// Comma-separated rational coefficients, e.g. "-1,0,1".
        #[arg(long, allow_hyphen_values = true)]
        coeffs: String,
        #[arg(long, default_value_t = 0)]
        deg: u32,
    },
    /// Check the module axioms up to a degree cutoff.
    ModuleAxioms {
        module: PathBuf,
        #[arg(long, default_value_t = 4)]
        nmax: u32,
    },
    /// Conformal dual of a module.
    Dual {
        module: PathBuf,
        #[arg(long, default_value_t = 4)]
        nmax: u32,
        /// Also write the dual module JSON to this path.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Restrict a gc_N module along a Virasoro element.
    Restrict {
        element: PathBuf,
        module: PathBuf,
        /// Also write the restricted module JSON to this path.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Regularity of a Virasoro action in the module's basis.
    Regularity {
        module: PathBuf,
        #[command(flatten)]
        element: ElementChoice,
    },
    /// Conformal weight product over a list of Virasoro elements.
    WeightProduct {
        module: PathBuf,
        /// Canonical parameters "a,b"; repeatable.
        #[arg(long = "canonical")]
        canonical: Vec<String>,
        /// Element files; repeatable.
        #[arg(long = "element")]
        element: Vec<PathBuf>,
    },
    /// Semisimplicity of a Virasoro-algebra module.
    VirSemisimple {
        module: PathBuf,
    },
    /// Semisimplicity decomposition from two canonical Virasoro elements.
    Decompose {
        module: PathBuf,
        #[arg(long = "L1")]
        l1: String,
        #[arg(long = "L2")]
        l2: String,
        #[arg(long, default_value_t = 4)]
        nmax: u32,
    },
}

#[derive(Args)]
#[group(required = false, multiple = false)]
struct ElementChoice {
    /// Canonical parameters "a,b" (acts through the embedding on gc_N).
    /// Defaults to the generator `L` on Virasoro-algebra modules.
    #[arg(long)]
    canonical: Option<String>,
    /// Element file (gc_N modules only).
    #[arg(long)]
    element: Option<PathBuf>,
}

/// Input/format problem: exit code 2.
struct InputError(String);

/// Mathematical failure: exit code 1, with a JSON result payload.
struct MathFailure(Value);

enum Failure {
    Input(InputError),
    Math(MathFailure),
}

impl From<InputError> for Failure {
    fn from(e: InputError) -> Self {
        Failure::Input(e)
    }
}

/// Classifies a core error: malformed inputs exit 2, mathematical
/// obstructions exit 1 with a structured payload.
fn core_failure(e: CoreError) -> Failure {
    use CoreError::*;
    let kind = match &e {
        DimensionMismatch(_) | InvalidInput(_) | NotConstant => {
            return Failure::Input(InputError(e.to_string()))
        }
        SingularMatrix => "SingularMatrix",
        NotVirasoro => "NotVirasoro",
        NotIdempotent(_) => "NotIdempotent",
        ConstraintViolated(_) => "ConstraintViolated",
        CutoffExceeded { .. } => "CutoffExceeded",
        NotRegular(_) => "NotRegular",
        InconsistentData(_) => "InconsistentData",
        PartitionViolation(_) => "PartitionViolation",
        ClaimFailed(_) => "ClaimFailed",
        NotRepresentation(_) => "NotRepresentation",
    };
    Failure::Math(MathFailure(json!({
        "error": {"kind": kind, "message": e.to_string()}
    })))
}

#[derive(Serialize)]
struct Report {
    operation: String,
    #[serde(rename = "inputs-digest")]
    inputs_digest: String,
    result: Value,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut digest = Sha256::new();
    let (operation, outcome) = run(cli.command, &mut digest);
    match outcome {
        Ok((result, ok)) => {
            let report = Report {
                operation,
                inputs_digest: format!("sha256:{}", hex_digest(digest)),
                result,
            };
            println!(
                "{}",
                serde_json::to_string_pretty(&report).expect("report serializes")
            );
            if ok {
                ExitCode::from(0)
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Math(MathFailure(result))) => {
            let report = Report {
                operation,
                inputs_digest: format!("sha256:{}", hex_digest(digest)),
                result,
            };
            println!(
                "{}",
                serde_json::to_string_pretty(&report).expect("report serializes")
            );
            ExitCode::from(1)
        }
        Err(Failure::Input(InputError(msg))) => {
            eprintln!("input error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn hex_digest(digest: Sha256) -> String {
    let bytes = digest.finalize();
    let mut out = String::with_capacity(bytes.len() * 2);
    for b in bytes {
        let _ = write!(out, "{b:02x}");
    }
    out
}

fn read_file(path: &Path, digest: &mut Sha256) -> Result<String, InputError> {
    let text = fs::read_to_string(path)
        .map_err(|e| InputError(format!("{}: {e}", path.display())))?;
    digest.update(text.as_bytes());
    digest.update([0u8]);
    Ok(text)
}

fn read_element(path: &Path, digest: &mut Sha256) -> Result<GcElement, InputError> {
    let text = read_file(path, digest)?;
    serde_json::from_str(&text).map_err(|e| {
        InputError(format!(
            "{}: expected a gc element {{\"N\", \"terms\"}}: {e}",
            path.display()
        ))
    })
}

fn read_module(path: &Path, digest: &mut Sha256) -> Result<ConformalModule, InputError> {
    let text = read_file(path, digest)?;
    let spec: ModuleSpec = serde_json::from_str(&text).map_err(|e| {
        InputError(format!(
            "{}: expected a module spec {{\"algebra\", \"recipe\"}}: {e}",
            path.display()
        ))
    })?;
    spec.to_module()
        .map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn parse_scalar(s: &str) -> Result<Scalar, InputError> {
    Scalar::from_str(s).map_err(|e| InputError(e.to_string()))
}

fn parse_pair(s: &str, flag: &str) -> Result<(Scalar, Scalar), InputError> {
    let (a, b) = s.split_once(',').ok_or_else(|| {
        InputError(format!("{flag}: expected \"a,b\" with rational a, b"))
    })?;
    Ok((parse_scalar(a.trim())?, parse_scalar(b.trim())?))
}

fn write_out(path: &Path, value: &Value) -> Result<(), InputError> {
    let text = serde_json::to_string_pretty(value).expect("serializes");
    fs::write(path, text + "\n").map_err(|e| InputError(format!("{}: {e}", path.display())))
}

type Outcome = Result<(Value, bool), Failure>;

fn run(command: Command, digest: &mut Sha256) -> (String, Outcome) {
    match command {
        Command::Bracket { a, b } => ("bracket".into(), cmd_bracket(&a, &b, digest)),
        Command::CheckVirasoro { element } => (
            "check-virasoro".into(),
            cmd_check_virasoro(&element, digest),
        ),
        Command::IsStandard { element } => ("is-standard".into(), cmd_is_standard(&element, digest)),
        Command::Make { params, out } => ("make".into(), cmd_make(&params, out.as_deref(), digest)),
        Command::ClassifyDeg1 { n, coeffs, deg } => (
            "classify-deg1".into(),
            cmd_classify(n, &coeffs, deg, digest),
        ),
        Command::ModuleAxioms { module, nmax } => (
            "module-axioms".into(),
            cmd_module_axioms(&module, nmax, digest),
        ),
        Command::Dual { module, nmax, out } => {
            ("dual".into(), cmd_dual(&module, nmax, out.as_deref(), digest))
        }
        Command::Restrict {
            element,
            module,
            out,
        } => (
            "restrict".into(),
            cmd_restrict(&element, &module, out.as_deref(), digest),
        ),
        Command::Regularity { module, element } => (
            "regularity".into(),
            cmd_regularity(&module, &element, digest),
        ),
        Command::WeightProduct {
            module,
            canonical,
            element,
        } => (
            "weight-product".into(),
            cmd_weight_product(&module, &canonical, &element, digest),
        ),
        Command::VirSemisimple { module } => (
            "vir-semisimple".into(),
            cmd_vir_semisimple(&module, digest),
        ),
        Command::Decompose {
            module,
            l1,
            l2,
            nmax,
        } => (
            "decompose".into(),
            cmd_decompose(&module, &l1, &l2, nmax, digest),
        ),
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializes")
}

fn cmd_bracket(a: &Path, b: &Path, digest: &mut Sha256) -> Outcome {
    let ga = read_element(a, digest)?;
    let gb = read_element(b, digest)?;
    let value = lambda_bracket(&ga, &gb).map_err(core_failure)?;
    Ok((
        json!({"value": to_value(&value), "display": value.to_string()}),
        true,
    ))
}

fn cmd_check_virasoro(path: &Path, digest: &mut Sha256) -> Outcome {
    let g = read_element(path, digest)?;
    let cert = certify(&g);
    let result = json!({
        "is_virasoro": cert.is_virasoro,
        "degree": cert.degree,
        "is_standard": cert.is_standard,
        "residual_display": if cert.is_virasoro { Value::Null } else { json!(cert.residual.to_string()) },
    });
    Ok((result, cert.is_virasoro))
}

fn cmd_is_standard(path: &Path, digest: &mut Sha256) -> Outcome {
    let g = read_element(path, digest)?;
    let standard = conformal_core::is_standard(&g).map_err(core_failure)?;
    Ok((json!({"is_virasoro": true, "is_standard": standard}), standard))
}

#[derive(Deserialize)]
#[serde(tag = "constructor", rename_all = "kebab-case")]
enum MakeParams {
    Gc1Virasoro {
        a: Scalar,
        b: Scalar,
    },
    StandardDeg1 {
        form: u8,
        a: Scalar,
        #[serde(default)]
        b: Option<Scalar>,
        #[serde(rename = "A")]
        mat_a: Vec<Vec<Scalar>>,
        #[serde(rename = "B")]
        mat_b: Vec<Vec<Scalar>>,
    },
    StandardHigher {
        #[serde(rename = "A")]
        mat_a: Vec<Vec<Scalar>>,
        terms: Vec<HigherTerm>,
    },
    Nonstandard {
        kind: String,
        blocks: Vec<BlockParams>,
        #[serde(default)]
        tail: Option<TailParams>,
    },
}

#[derive(Deserialize)]
struct HigherTerm {
    i: u32,
    a: Scalar,
    #[serde(rename = "B")]
    mat_b: Vec<Vec<Scalar>>,
}

#[derive(Deserialize)]
struct BlockParams {
    a: Scalar,
    #[serde(rename = "A")]
    mat_a: Vec<Vec<Scalar>>,
    #[serde(rename = "B")]
    mat_b: Vec<Vec<Scalar>>,
}

#[derive(Deserialize)]
struct TailParams {
    #[serde(rename = "C")]
    mat_c: Vec<Vec<Scalar>>,
    terms: Vec<TailTerm>,
}

#[derive(Deserialize)]
struct TailTerm {
    b: Scalar,
    #[serde(rename = "D")]
    mat_d: Vec<Vec<Scalar>>,
}

fn grid(m: &[Vec<Scalar>]) -> Result<PolyMatrix, Failure> {
    PolyMatrix::from_scalar_grid(m).map_err(core_failure)
}

fn cmd_make(params: &Path, out: Option<&Path>, digest: &mut Sha256) -> Outcome {
    let text = read_file(params, digest)?;
    let parsed: MakeParams = serde_json::from_str(&text).map_err(|e| {
        InputError(format!(
            "{}: expected a constructor parameter object: {e}",
            params.display()
        ))
    })?;
    let element = match parsed {
        MakeParams::Gc1Virasoro { a, b } => make_gc1_virasoro(&a, &b),
        MakeParams::StandardDeg1 {
            form,
            a,
            b,
            mat_a,
            mat_b,
        } => {
            let form = match form {
                1 => StandardDeg1Form::One,
                2 => StandardDeg1Form::Two,
                other => {
                    return Err(InputError(format!("form must be 1 or 2, got {other}")).into())
                }
            };
            make_standard_deg1(form, &a, b.as_ref(), &grid(&mat_a)?, &grid(&mat_b)?)
                .map_err(core_failure)?
        }
        MakeParams::StandardHigher { mat_a, terms } => {
            let coeffs: Result<Vec<(u32, Scalar, PolyMatrix)>, Failure> = terms
                .into_iter()
                .map(|t| Ok((t.i, t.a, grid(&t.mat_b)?)))
                .collect();
            make_standard_higher(&grid(&mat_a)?, &coeffs?).map_err(core_failure)?
        }
        MakeParams::Nonstandard { kind, blocks, tail } => {
            let kind = match kind.as_str() {
                "T1" => NonStandardKind::T1,
                "T2" => NonStandardKind::T2,
                "T3" => NonStandardKind::T3,
                "T4" => NonStandardKind::T4,
                other => {
                    return Err(
                        InputError(format!("kind must be T1..T4, got {other:?}")).into()
                    )
                }
            };
            let blocks: Result<Vec<NsBlock>, Failure> = blocks
                .into_iter()
                .map(|b| {
                    Ok(NsBlock {
                        a: b.a,
                        idempotent: grid(&b.mat_a)?,
                        mixer: grid(&b.mat_b)?,
                    })
                })
                .collect();
            let tail = match tail {
                None => None,
                Some(t) => {
                    let terms: Result<Vec<(Scalar, PolyMatrix)>, Failure> = t
                        .terms
                        .into_iter()
                        .map(|x| Ok((x.b, grid(&x.mat_d)?)))
                        .collect();
                    Some(NsTail {
                        idempotent: grid(&t.mat_c)?,
                        terms: terms?,
                    })
                }
            };
            make_nonstandard(kind, &blocks?, tail.as_ref()).map_err(core_failure)?
        }
    };
    let cert = certify(&element);
    let element_json = to_value(&element);
    if let Some(path) = out {
        write_out(path, &element_json)?;
    }
    Ok((
        json!({
            "element": element_json,
            "display": element.to_string(),
            "is_virasoro": cert.is_virasoro,
            "degree": cert.degree,
            "is_standard": cert.is_standard,
        }),
        true,
    ))
}

fn cmd_classify(n: usize, coeffs: &str, deg: u32, digest: &mut Sha256) -> Outcome {
    digest.update(format!("{n};{coeffs};{deg}").as_bytes());
    if n == 0 {
        return Err(InputError("--n must be at least 1".into()).into());
    }
    let parsed: Result<Vec<Scalar>, InputError> = coeffs
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| parse_scalar(s.trim()))
        .collect();
    let report = classify_deg1_grid(n, &parsed?, deg);
    let ok = report.counterexamples.is_empty();
    Ok((to_value(&report), ok))
}

fn cmd_module_axioms(path: &Path, nmax: u32, digest: &mut Sha256) -> Outcome {
    digest.update(format!("nmax={nmax};").as_bytes());
    let m = read_module(path, digest)?;
    let witnesses = check_module_axioms(&m, nmax).map_err(core_failure)?;
    let pass = witnesses.is_empty();
    Ok((
        json!({"pass": pass, "n_max": nmax, "witnesses": to_value(&witnesses)}),
        pass,
    ))
}

fn cmd_dual(path: &Path, nmax: u32, out: Option<&Path>, digest: &mut Sha256) -> Outcome {
    digest.update(format!("nmax={nmax};").as_bytes());
    let m = read_module(path, digest)?;
    let dual = dual_module(&m, nmax).map_err(core_failure)?;
    let spec = ModuleSpec::from_module(&dual);
    let value = to_value(&spec);
    if let Some(p) = out {
        write_out(p, &value)?;
    }
    Ok((json!({"module": value, "n_max": nmax}), true))
}

fn cmd_restrict(
    element: &Path,
    module: &Path,
    out: Option<&Path>,
    digest: &mut Sha256,
) -> Outcome {
    let g = read_element(element, digest)?;
    let m = read_module(module, digest)?;
    let restricted = restrict_to_virasoro(&g, &m).map_err(core_failure)?;
    let spec = ModuleSpec::from_module(&restricted);
    let value = to_value(&spec);
    if let Some(p) = out {
        write_out(p, &value)?;
    }
    Ok((json!({"module": value}), true))
}

fn element_spec(
    choice: &ElementChoice,
    digest: &mut Sha256,
) -> Result<VirasoroSpec, Failure> {
    match (&choice.canonical, &choice.element) {
        (Some(pair), None) => {
            digest.update(format!("canonical={pair};").as_bytes());
            let (a, b) = parse_pair(pair, "--canonical")?;
            Ok(VirasoroSpec::Canonical { a, b })
        }
        (None, Some(path)) => Ok(VirasoroSpec::Element(read_element(path, digest)?)),
        _ => Err(InputError("give exactly one of --canonical or --element".into()).into()),
    }
}

fn cmd_regularity(module: &Path, choice: &ElementChoice, digest: &mut Sha256) -> Outcome {
    let m = read_module(module, digest)?;
    let spec = match (m.algebra(), &choice.canonical, &choice.element) {
        (AlgebraKind::Vir, None, None) => VirasoroSpec::VirL,
        _ => element_spec(choice, digest)?,
    };
    let report = check_regular(&m, &spec).map_err(core_failure)?;
    let ok = report.regular;
    Ok((to_value(&report), ok))
}

fn cmd_weight_product(
    module: &Path,
    canonical: &[String],
    elements: &[PathBuf],
    digest: &mut Sha256,
) -> Outcome {
    let m = read_module(module, digest)?;
    let mut reports: Vec<RegularityReport> = Vec::new();
    if canonical.is_empty() && elements.is_empty() {
        if m.algebra() != AlgebraKind::Vir {
            return Err(InputError(
                "give at least one --canonical or --element for non-Vir modules".into(),
            )
            .into());
        }
        reports.push(check_regular(&m, &VirasoroSpec::VirL).map_err(core_failure)?);
    }
    for pair in canonical {
        digest.update(format!("canonical={pair};").as_bytes());
        let (a, b) = parse_pair(pair, "--canonical")?;
        reports
            .push(check_regular(&m, &VirasoroSpec::Canonical { a, b }).map_err(core_failure)?);
    }
    for path in elements {
        let g = read_element(path, digest)?;
        reports.push(check_regular(&m, &VirasoroSpec::Element(g)).map_err(core_failure)?);
    }
    let product = weight_product(&reports).map_err(core_failure)?;
    Ok((to_value(&product), true))
}

fn cmd_vir_semisimple(path: &Path, digest: &mut Sha256) -> Outcome {
    let m = read_module(path, digest)?;
    let report = vir_semisimple(&m).map_err(core_failure)?;
    let ok = report.semisimple;
    Ok((to_value(&report), ok))
}

fn cmd_decompose(path: &Path, l1: &str, l2: &str, nmax: u32, digest: &mut Sha256) -> Outcome {
    digest.update(format!("L1={l1};L2={l2};nmax={nmax};").as_bytes());
    let m = read_module(path, digest)?;
    let (a1, b1) = parse_pair(l1, "--L1")?;
    let (a2, b2) = parse_pair(l2, "--L2")?;
    let report = match m.algebra() {
        AlgebraKind::Gc(1) => {
            decompose_gc1(&m, (&a1, &b1), (&a2, &b2), nmax).map_err(core_failure)?
        }
        AlgebraKind::Gc(_) => {
            decompose_gcn(&m, (&a1, &b1), (&a2, &b2), nmax).map_err(core_failure)?
        }
        _ => {
            return Err(InputError("decompose needs a gc module".into()).into());
        }
    };
    Ok((to_value(&report), true))
}
