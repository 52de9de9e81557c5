//! Command-line front end. Every subcommand writes one JSON document.
//!
//! Exit status: `0` when every check in the report passes, `1` when a check
//! fails, `2` for parse or validation errors.

use std::io::Read as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::covering::{
    covering_map, fiber_cardinality, lifted_slice, random_cover_point, su11, CoverImage, CoverVariant, FiberReport,
};
use crate::error::Error;
use crate::levi::{
    algebraic_levi_signature_with, build_site, numeric_levi_signature_with, LeviCharacter, SiteCase,
    DEFAULT_ZERO_THRESHOLD,
};
use crate::lie_core::{Family, GroupSpec, GrpElement, Realness};
use crate::linalg::{C64, CVec};
use crate::models::{slice_point, slice_point_exp, Coords, ModelPoint, SliceId};
use crate::orbits::{classify_point_with, orbit_diagram};
use crate::rng::{seed_from_env, seeded};
use crate::stein::verify_stein_table;

#[derive(Debug, Parser)]
#[command(name = "orbitscope", version, about = "Orbit geometry of complexified rank-one symmetric spaces")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Clone)]
pub struct Common {
    /// Group family: SO0 or SU.
    #[arg(long, default_value = "SU")]
    pub family: String,
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub json: Option<PathBuf>,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    #[arg(long = "zero-threshold", default_value_t = DEFAULT_ZERO_THRESHOLD)]
    pub zero_threshold: f64,
    #[arg(long, default_value_t = 200)]
    pub samples: usize,
    /// Overridden by ORBITSCOPE_SEED when set.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args, Clone)]
pub struct PointInput {
    /// Point as JSON: {"xi": [...]} or {"z": [...], "w": [...]}, complex entries as [re, im].
    #[arg(long)]
    pub point: Option<String>,
    /// Read the point JSON from stdin.
    #[arg(long)]
    pub stdin: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum LeviMethod {
    Numeric,
    Algebraic,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum VariantArg {
    #[value(name = "orbitCover")]
    OrbitCover,
    #[value(name = "groupCover")]
    GroupCover,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify a point into its orbit.
    Classify {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        input: PointInput,
    },
    /// Levi signature of the orbit through a point or a nilpotent site.
    Levi {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        input: PointInput,
        /// Nilpotent site, e.g. Reduced_x0 or NonReduced_z3_x.
        #[arg(long)]
        site: Option<String>,
        #[arg(long, value_enum, default_value = "numeric")]
        method: LeviMethod,
    },
    /// Evaluate a slice point.
    Slice {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        slice: u8,
        #[arg(long)]
        param: f64,
        /// Use the extended slice.
        #[arg(long)]
        extended: bool,
        /// Evaluate through the exponential form instead of the coordinate formula.
        #[arg(long)]
        exp: bool,
    },
    /// Check every row of the Stein-domain table for the group.
    VerifyTable {
        #[command(flatten)]
        common: Common,
    },
    /// Fiber count of a covering at a target.
    Cover {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        input: PointInput,
        #[arg(long, value_enum, default_value = "orbitCover")]
        variant: VariantArg,
        /// Target on the slice: l2(param), or its lift for the group cover.
        #[arg(long)]
        param: Option<f64>,
    },
    /// Print the orbit-diagram catalog for the group.
    Diagram {
        #[command(flatten)]
        common: Common,
    },
}

/// A failure while running a subcommand.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Lib(Error),
    Io(std::io::Error),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Lib(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

pub struct Outcome {
    pub report: Value,
    pub pass: bool,
}

fn spec_of(c: &Common) -> Result<GroupSpec, CliError> {
    let family: Family = c.family.parse()?;
    Ok(GroupSpec::new(family, c.n)?)
}

fn cjson(z: C64) -> Value {
    json!([z.re, z.im])
}

fn vjson(v: &CVec) -> Value {
    Value::Array(v.iter().map(|z| cjson(*z)).collect())
}

fn coords_json(p: &ModelPoint) -> Value {
    match &p.coords {
        Coords::Quadric(x) => json!({ "xi": vjson(x) }),
        Coords::Pair { z, w } => json!({ "z": vjson(z), "w": vjson(w) }),
    }
}

/// `{"family","n", coordinates, "normalized": coordinates}`.
pub fn point_json(p: &ModelPoint) -> Value {
    let mut v = json!({ "family": p.spec.family.to_string(), "n": p.spec.n });
    let m = v.as_object_mut().expect("object");
    if let Value::Object(c) = coords_json(p) {
        m.extend(c);
    }
    m.insert("normalized".into(), coords_json(&p.normalized()));
    v
}

#[derive(Deserialize)]
struct PointDoc {
    family: Option<String>,
    n: Option<usize>,
    xi: Option<Vec<[f64; 2]>>,
    z: Option<Vec<[f64; 2]>>,
    w: Option<Vec<[f64; 2]>>,
}

fn to_cvec(v: &[[f64; 2]]) -> CVec {
    CVec::from_iterator(v.len(), v.iter().map(|[a, b]| C64::new(*a, *b)))
}

/// Parses a point document; family and `n` fall back to `spec` when absent.
pub fn parse_point(text: &str, spec: GroupSpec) -> Result<ModelPoint, CliError> {
    let doc: PointDoc = serde_json::from_str(text).map_err(|e| CliError::Usage(format!("point JSON: {e}")))?;
    let family = match doc.family {
        Some(f) => f.parse::<Family>()?,
        None => spec.family,
    };
    let spec = GroupSpec::new(family, doc.n.unwrap_or(spec.n))?;
    match (doc.xi, doc.z, doc.w) {
        (Some(xi), None, None) => Ok(ModelPoint::quadric(spec, to_cvec(&xi))?),
        (None, Some(z), Some(w)) => Ok(ModelPoint::pair(spec, to_cvec(&z), to_cvec(&w))?),
        _ => Err(CliError::Usage("point needs either \"xi\" or both \"z\" and \"w\"".into())),
    }
}

fn read_point(input: &PointInput, spec: GroupSpec) -> Result<Option<ModelPoint>, CliError> {
    match (&input.point, input.stdin) {
        (Some(_), true) => Err(CliError::Usage("use either --point or --stdin".into())),
        (Some(t), false) => parse_point(t, spec).map(Some),
        (None, true) => {
            let mut buf = String::new();
            std::io::stdin().read_to_string(&mut buf)?;
            parse_point(&buf, spec).map(Some)
        }
        (None, false) => Ok(None),
    }
}

fn require_point(input: &PointInput, spec: GroupSpec) -> Result<ModelPoint, CliError> {
    read_point(input, spec)?.ok_or_else(|| CliError::Usage("a point is required (--point or --stdin)".into()))
}

#[derive(Serialize)]
struct LeviReport {
    point: Value,
    orbit_label: String,
    method: &'static str,
    pos: usize,
    neg: usize,
    zero: usize,
    character: LeviCharacter,
    orientation: String,
    eigenvalues: Vec<f64>,
}

fn run_levi(
    common: &Common,
    input: &PointInput,
    site: Option<&str>,
    method: LeviMethod,
) -> Result<Outcome, CliError> {
    let spec = spec_of(common)?;
    let (point, sig, name) = match (site, method) {
        (Some(s), m) => {
            let case: SiteCase = s.parse()?;
            let st = build_site(spec, case)?;
            let sig = match m {
                LeviMethod::Algebraic => algebraic_levi_signature_with(spec, &st, common.zero_threshold)?,
                LeviMethod::Numeric => numeric_levi_signature_with(spec, &st.point, common.zero_threshold)?,
            };
            let name = if matches!(m, LeviMethod::Algebraic) { "algebraic" } else { "numeric" };
            (st.point.clone(), sig, name)
        }
        (None, LeviMethod::Numeric) => {
            let p = require_point(input, spec)?;
            let sig = numeric_levi_signature_with(spec, &p, common.zero_threshold)?;
            (p, sig, "numeric")
        }
        (None, LeviMethod::Algebraic) => {
            return Err(CliError::Usage("the algebraic method needs --site".into()));
        }
    };
    let label = classify_point_with(spec, &point, common.tol)?.label_text;
    let rep = LeviReport {
        point: point_json(&point),
        orbit_label: label,
        method: name,
        pos: sig.pos,
        neg: sig.neg,
        zero: sig.zero,
        character: sig.character,
        orientation: sig.orientation.clone(),
        eigenvalues: sig.eigenvalues.clone(),
    };
    Ok(Outcome { report: serde_json::to_value(rep).expect("serializable"), pass: true })
}

fn run_cover(
    common: &Common,
    input: &PointInput,
    variant: VariantArg,
    param: Option<f64>,
    seed: u64,
) -> Result<Outcome, CliError> {
    let spec = spec_of(common)?;
    if spec != su11() {
        return Err(CliError::Usage("cover is defined for --family SU --n 1".into()));
    }
    let variant = match variant {
        VariantArg::OrbitCover => CoverVariant::OrbitCover,
        VariantArg::GroupCover => CoverVariant::GroupCover,
    };
    let mut rng = seeded(seed);
    let target = match (read_point(input, spec)?, param, variant) {
        (Some(p), None, CoverVariant::OrbitCover) => CoverImage::Point(p),
        (Some(_), _, _) => return Err(CliError::Usage("--point targets only the orbit cover, without --param".into())),
        (None, Some(s), CoverVariant::OrbitCover) => CoverImage::Point(slice_point(spec, SliceId::new(2), s)?),
        (None, Some(s), CoverVariant::GroupCover) => {
            CoverImage::Element(GrpElement { spec, m: lifted_slice(s)?, realness: Realness::Complexified })
        }
        (None, None, v) => {
            let p = random_cover_point(&mut rng, v == CoverVariant::GroupCover);
            covering_map(&p, v)?
        }
    };
    let starts = common.samples.clamp(8, 64);
    let rep: FiberReport = fiber_cardinality(&target, variant, starts, &mut rng)?;
    let pass = rep.fiber_count == 2 && rep.jacobian_ranks.iter().all(|&r| r == rep.source_dim);
    let mut v = serde_json::to_value(&rep).expect("serializable");
    if let CoverImage::Point(p) = &target {
        v["target"] = point_json(p);
    }
    v["pass"] = json!(pass);
    Ok(Outcome { report: v, pass })
}

/// Runs one parsed command.
pub fn execute(cli: &Cli) -> Result<(Outcome, Option<PathBuf>), CliError> {
    let out = match &cli.command {
        Command::Classify { common, input } => {
            let spec = spec_of(common)?;
            let p = require_point(input, spec)?;
            let rep = classify_point_with(p.spec, &p, common.tol)?;
            let mut v = serde_json::to_value(&rep).expect("serializable");
            v["point"] = point_json(&p);
            (Outcome { report: v, pass: true }, common.json.clone())
        }
        Command::Levi { common, input, site, method } => {
            (run_levi(common, input, site.as_deref(), *method)?, common.json.clone())
        }
        Command::Slice { common, slice, param, extended, exp } => {
            let spec = spec_of(common)?;
            let id = if *extended { SliceId::extended(*slice) } else { SliceId::new(*slice) };
            let p = if *exp { slice_point_exp(spec, id, *param)? } else { slice_point(spec, id, *param)? };
            (Outcome { report: point_json(&p), pass: true }, common.json.clone())
        }
        Command::VerifyTable { common } => {
            let spec = spec_of(common)?;
            let rows = verify_stein_table(spec, common.samples, seed_from_env(common.seed))?;
            let pass = rows.iter().all(|r| r.pass);
            (Outcome { report: serde_json::to_value(rows).expect("serializable"), pass }, common.json.clone())
        }
        Command::Cover { common, input, variant, param } => {
            (run_cover(common, input, *variant, *param, seed_from_env(common.seed))?, common.json.clone())
        }
        Command::Diagram { common } => {
            let spec = spec_of(common)?;
            let d = orbit_diagram(spec.diagram());
            let mut v = serde_json::to_value(d).expect("serializable");
            v["spec"] = json!(spec.label());
            (Outcome { report: v, pass: true }, common.json.clone())
        }
    };
    Ok(out)
}

/// Parses `args`, runs the command and returns the exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok((out, path)) => {
            let text = serde_json::to_string_pretty(&out.report).expect("serializable") + "\n";
            match path {
                Some(p) => {
                    if let Err(e) = std::fs::write(&p, text) {
                        eprintln!("error: cannot write {}: {e}", p.display());
                        return 2;
                    }
                }
                None => print!("{text}"),
            }
            if out.pass {
                0
            } else {
                1
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn report(args: &[&str]) -> (Outcome, Option<PathBuf>) {
        let cli = Cli::try_parse_from(std::iter::once("orbitscope").chain(args.iter().copied())).unwrap();
        execute(&cli).unwrap()
    }

    #[test]
    fn slice_report() {
        let (o, _) = report(&["slice", "--family", "SO0", "--n", "2", "--slice", "2", "--param", "0.5"]);
        let xi = &o.report["xi"];
        assert!((xi[0][0].as_f64().unwrap() - 1f64.sinh()).abs() < 1e-15);
        assert!((xi[1][1].as_f64().unwrap() - 1f64.cosh()).abs() < 1e-15);
        assert_eq!(xi[2], json!([0.0, 0.0]));
    }

    #[test]
    fn classify_roundtrips_a_slice_point() {
        let (o, _) = report(&["slice", "--family", "SU", "--n", "2", "--slice", "3", "--param", "0.25"]);
        let text = o.report.to_string();
        let (c, _) = report(&["classify", "--family", "SU", "--n", "2", "--point", &text]);
        assert_eq!(c.report["slice"], json!(3));
        assert!((c.report["param"].as_f64().unwrap() - 0.25).abs() < 1e-9);
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run(["orbitscope", "slice", "--family", "XX", "--slice", "1", "--param", "0.5"]), 2);
        assert_eq!(run(["orbitscope", "classify"]), 2);
        assert_eq!(run(["orbitscope", "frobnicate"]), 2);
    }

    #[test]
    fn levi_at_site() {
        let (o, _) = report(&["levi", "--family", "SU", "--n", "2", "--site", "NonReduced_z3_x", "--method", "algebraic"]);
        assert_eq!(o.report["character"], json!("indefinite"));
        assert_eq!(o.report["orbit_label"], json!("w5"));
    }

    #[test]
    fn cover_at_slice() {
        let (o, _) = report(&["cover", "--family", "SU", "--n", "1", "--variant", "groupCover", "--param", "0.7"]);
        assert_eq!(o.report["fiber_count"], json!(2));
        assert!(o.pass);
    }
}
