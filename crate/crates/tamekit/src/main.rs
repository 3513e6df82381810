//! Command-line front end: reads point-set and threshold JSON, dispatches to
//! the library modules, and emits JSON reports (plus CSV curves on request).
//!
//! Exit codes: 0 success, 1 precondition/usage error, 2 internal-consistency
//! failure. Every error is reported as a JSON object with machine-readable
//! `kind` and `reason` fields. Outputs are byte-identical for identical
//! inputs and flags.

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::{json, Value};
use std::fs;
use std::path::{Path, PathBuf};
use tamekit::arithmetic::{first_column_quotient, matrix_group_ball_integrality, Ring};
use tamekit::automorphisms::send_to_axis_seeded;
use tamekit::error::{Error, ErrorClass, Result};
use tamekit::exact::GaussianRational;
use tamekit::generators::{
    partition_two_tame, torus_counterexample, ProjectionPair, TorusCounterexample,
};
use tamekit::linalg::Matrix;
use tamekit::nevanlinna::{
    growth_from_thresholds, log_grid, verify_threshold_contrapositive, CountingProfile,
    ThresholdSequence, SAMPLES_PER_DECADE,
};
use tamekit::rootsys::{build_pair, build_root_system, verify_spanning, Family};
use tamekit::schema::{parse_point_set, parse_thresholds, point_set_value, Validation};
use tamekit::sl2::{
    enumerate_ball, projection_discreteness, projection_discreteness_exact, GroupBall,
    ProjectionReport, Sl2,
};
use tamekit::space::{AmbientSpace, DiscreteSet, Point};

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
#[value(rename_all = "lower")]
enum Mode {
    Exact,
    Float,
}

#[derive(Parser)]
#[command(
    name = "tamekit",
    version,
    about = "Desk-scale toolkit for discrete sets in complex groups: counting \
             functions, threshold sequences, explicit automorphisms, and \
             discreteness certificates"
)]
struct RunConfig {
    /// Arithmetic mode; the TAMEKIT_MODE environment variable sets the
    /// default, float otherwise.
    #[arg(long, global = true, value_enum)]
    mode: Option<Mode>,

    /// Seed for randomized searches (separating functionals).
    #[arg(long, global = true, default_value_t = 0x5EED)]
    seed: u64,

    /// Write the JSON report to this path instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Counting profile (r, n(r), N(r)) of a point set over a log grid
    Counting {
        /// Point-set JSON file
        #[arg(long)]
        set: PathBuf,
        /// Largest radius sampled
        #[arg(long)]
        rmax: f64,
        /// Also write the profile as CSV (columns r,n,N)
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Growth function anchored to a threshold sequence, with an optional
    /// contrapositive check against a point set
    Threshold {
        /// Threshold-sequence JSON file ({"values": [...]})
        #[arg(long = "R", visible_alias = "thresholds")]
        r: PathBuf,
        /// How many leading thresholds to anchor
        #[arg(long = "K")]
        k: usize,
        /// Point-set JSON to test against the thresholds
        #[arg(long)]
        verify: Option<PathBuf>,
        /// Also write the anchors as CSV (columns k,R_k,c_k,p_k,h(p_k))
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Shear composition carrying a finite affine point set to the first
    /// axis at integer positions
    Shear {
        /// Point-set JSON file (affine space, dimension >= 2)
        #[arg(long)]
        points: PathBuf,
        /// Also write per-point residuals as CSV
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Subgroup-pair bases attached to two simple roots, with a spanning
    /// certificate in type A
    Rootpair {
        /// Root-system family: A, B, C or D
        #[arg(long)]
        family: String,
        /// Rank of the root system
        #[arg(long)]
        rank: usize,
        /// Index of the first simple root (0-based)
        #[arg(long)]
        alpha: usize,
        /// Index of the second simple root (0-based)
        #[arg(long)]
        beta: usize,
    },
    /// Word ball of SL2 generators and separation of the first-column
    /// projection
    #[command(name = "sl2-discrete")]
    Sl2Discrete {
        /// Point-set JSON with the generators (space sl, n = 2)
        #[arg(long)]
        generators: PathBuf,
        /// Longest generator word enumerated
        #[arg(long = "word-length")]
        word_length: usize,
        /// Projection ball radius
        #[arg(long)]
        radius: f64,
        /// Force exact rational arithmetic (entries must be exact)
        #[arg(long)]
        exact: bool,
        /// Also write distinct columns as CSV (columns norm,nearest)
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Integrality certificate for a polynomial quotient applied to an
    /// exact matrix ball
    #[command(name = "arith-check")]
    ArithCheck {
        /// Ring selector, e.g. d=1
        #[arg(long)]
        ring: String,
        /// Point-set JSON with exact SL2 matrices: ball elements, or
        /// generators when --word-length is given
        #[arg(long)]
        ball: PathBuf,
        /// Quotient map name; supported: firstcolumn
        #[arg(long)]
        quotient: String,
        /// Enumerate the word ball of this length from the file's matrices
        #[arg(long = "word-length")]
        word_length: Option<usize>,
    },
    /// Split a point set into two halves balanced by projected exhaustions
    Partition {
        /// Point-set JSON file
        #[arg(long)]
        set: PathBuf,
        /// First projection, e.g. coord:0
        #[arg(long)]
        proj1: String,
        /// Second projection, e.g. coord:1
        #[arg(long)]
        proj2: String,
    },
    /// Torus point prefix that stays below a threshold sequence while its
    /// morphism images visit the leading sample targets
    #[command(name = "cstar-counterexample")]
    CstarCounterexample {
        /// Source torus dimension (>= 2)
        #[arg(long)]
        n: usize,
        /// Threshold-sequence JSON file ({"values": [...]})
        #[arg(long)]
        thresholds: PathBuf,
        /// How many canonical morphisms to cover
        #[arg(long = "J")]
        j: usize,
        /// How many points to generate
        #[arg(long = "K")]
        k: usize,
        /// Per-factor sample density of the target grid
        #[arg(long, default_value_t = 64)]
        density: usize,
        /// Also write per-point rows as CSV
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

fn main() {
    let config = match RunConfig::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    print!("{e}");
                    std::process::exit(0);
                }
                _ => {
                    eprint!("{e}");
                    std::process::exit(1);
                }
            }
        }
    };
    let out = config.out.clone();
    match run(config) {
        Ok(report) => {
            let text = serde_json::to_string_pretty(&report).expect("report serializes");
            if let Err(e) = emit(&out, &text) {
                report_error(&e);
                std::process::exit(exit_code(&e));
            }
        }
        Err(e) => {
            report_error(&e);
            std::process::exit(exit_code(&e));
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e.class() {
        ErrorClass::Precondition => 1,
        ErrorClass::InternalConsistency => 2,
    }
}

fn report_error(e: &Error) {
    let obj = json!({ "error": { "kind": e.kind(), "reason": e.to_string() } });
    println!(
        "{}",
        serde_json::to_string_pretty(&obj).expect("error object serializes")
    );
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, format!("{text}\n")).map_err(Error::from),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn write_csv<I: IntoIterator<Item = String>>(path: &Path, header: &str, rows: I) -> Result<()> {
    let mut text = String::from(header);
    text.push('\n');
    for row in rows {
        text.push_str(&row);
        text.push('\n');
    }
    fs::write(path, text).map_err(Error::from)
}

fn load_set(path: &Path) -> Result<DiscreteSet> {
    parse_point_set(&fs::read_to_string(path)?, Validation::Full)
}

fn load_thresholds(path: &Path) -> Result<ThresholdSequence> {
    parse_thresholds(&fs::read_to_string(path)?)
}

fn resolve_mode(cli: Option<Mode>) -> Result<Mode> {
    if let Some(m) = cli {
        return Ok(m);
    }
    match std::env::var("TAMEKIT_MODE") {
        Ok(v) => match v.as_str() {
            "exact" => Ok(Mode::Exact),
            "float" => Ok(Mode::Float),
            other => Err(Error::Precondition(format!(
                "TAMEKIT_MODE must be exact or float, got {other}"
            ))),
        },
        Err(_) => Ok(Mode::Float),
    }
}

fn complex_value(z: Complex64) -> Value {
    json!([z.re, z.im])
}

fn cvec_value(v: &[Complex64]) -> Value {
    Value::Array(v.iter().map(|z| complex_value(*z)).collect())
}

fn run(config: RunConfig) -> Result<Value> {
    let mode = resolve_mode(config.mode)?;
    match config.command {
        Command::Counting { set, rmax, csv } => counting(&set, rmax, csv.as_deref()),
        Command::Threshold { r, k, verify, csv } => {
            threshold(&r, k, verify.as_deref(), csv.as_deref())
        }
        Command::Shear { points, csv } => shear(&points, config.seed, csv.as_deref()),
        Command::Rootpair {
            family,
            rank,
            alpha,
            beta,
        } => rootpair(&family, rank, alpha, beta),
        Command::Sl2Discrete {
            generators,
            word_length,
            radius,
            exact,
            csv,
        } => {
            let mode = if exact { Mode::Exact } else { mode };
            sl2_discrete(&generators, word_length, radius, mode, csv.as_deref())
        }
        Command::ArithCheck {
            ring,
            ball,
            quotient,
            word_length,
        } => arith_check(&ring, &ball, &quotient, word_length),
        Command::Partition { set, proj1, proj2 } => partition(&set, &proj1, &proj2),
        Command::CstarCounterexample {
            n,
            thresholds,
            j,
            k,
            density,
            csv,
        } => cstar(n, &thresholds, j, k, density, csv.as_deref()),
    }
}

fn counting(set_path: &Path, rmax: f64, csv: Option<&Path>) -> Result<Value> {
    let set = load_set(set_path)?;
    let grid = log_grid(rmax, SAMPLES_PER_DECADE)?;
    let profile = CountingProfile::compute(&set, &grid)?;
    profile.validate()?;
    if let Some(path) = csv {
        write_csv(
            path,
            "r,n,N",
            profile
                .rows
                .iter()
                .map(|row| format!("{},{},{}", row.r, row.n, row.big_n)),
        )?;
    }
    Ok(json!({
        "command": "counting",
        "label": set.label,
        "points": set.len(),
        "rmax": rmax,
        "samples_per_decade": SAMPLES_PER_DECADE,
        "rows": serde_json::to_value(&profile.rows)?,
    }))
}

fn threshold(
    r_path: &Path,
    k_max: usize,
    verify: Option<&Path>,
    csv: Option<&Path>,
) -> Result<Value> {
    let thresholds = load_thresholds(r_path)?;
    let growth = growth_from_thresholds(&thresholds, k_max)?;
    let mut report = json!({
        "command": "threshold",
        "k_max": k_max,
        "thresholds": thresholds.values()[..k_max],
        "growth": serde_json::to_value(&growth)?,
        "breakpoints": growth.breakpoints(),
    });
    if let Some(set_path) = verify {
        let set = load_set(set_path)?;
        let contra = verify_threshold_contrapositive(&set, &thresholds, k_max)?;
        report["contrapositive"] = serde_json::to_value(&contra)?;
        report["verified_label"] = json!(set.label);
    }
    if let Some(path) = csv {
        let breakpoints = growth.breakpoints();
        write_csv(
            path,
            "k,R_k,c_k,p_k,h(p_k)",
            (0..k_max).map(|i| {
                format!(
                    "{},{},{},{},{}",
                    i + 1,
                    thresholds.values()[i],
                    growth.anchors_c[i],
                    breakpoints[i],
                    growth.anchor_values[i]
                )
            }),
        )?;
    }
    Ok(report)
}

fn shear(points_path: &Path, seed: u64, csv: Option<&Path>) -> Result<Value> {
    let set = load_set(points_path)?;
    if !matches!(set.space, AmbientSpace::Affine { .. }) {
        return Err(Error::Precondition(
            "the shear pipeline works on affine point sets".into(),
        ));
    }
    let coords: Vec<Vec<Complex64>> = set
        .points
        .iter()
        .map(|p| {
            p.vec_f64()
                .ok_or_else(|| Error::InvalidPoint("vector point required".into()))
        })
        .collect::<Result<_>>()?;
    let norm = send_to_axis_seeded(&coords, seed)?;
    if let Some(path) = csv {
        write_csv(
            path,
            "index,residual",
            norm.residuals
                .iter()
                .enumerate()
                .map(|(i, r)| format!("{i},{r}")),
        )?;
    }
    Ok(json!({
        "command": "shear",
        "label": set.label,
        "points": set.len(),
        "seed": seed,
        "map_count": norm.seq.len(),
        "maps": norm.seq.descriptor(),
        "images": Value::Array(norm.images.iter().map(|v| cvec_value(v)).collect()),
        "residuals": norm.residuals,
        "max_residual": norm.max_residual,
        "separating_attempts": norm.separating_attempts,
    }))
}

fn rootpair(family: &str, rank: usize, alpha: usize, beta: usize) -> Result<Value> {
    let fam: Family = family.parse()?;
    let rs = build_root_system(fam, rank)?;
    let pair = build_pair(&rs, alpha, beta)?;
    let span = match verify_spanning(&pair, &rs) {
        Ok(cert) => serde_json::to_value(cert)?,
        Err(Error::Unsupported(note)) => json!({ "supported": false, "note": note }),
        Err(e) => return Err(e),
    };
    Ok(json!({
        "command": "rootpair",
        "family": fam.to_string(),
        "rank": rank,
        "coord_dim": rs.coord_dim,
        "simple_roots": rs.simple_roots,
        "positive_roots": rs.positive_roots.len(),
        "pair": serde_json::to_value(&pair)?,
        "span": span,
    }))
}

fn sl2_generators_exact(set: &DiscreteSet) -> Result<Vec<Sl2<GaussianRational>>> {
    set.points
        .iter()
        .map(|p| match p {
            Point::ExactMat(m) => Sl2::new(
                m.at(0, 0).clone(),
                m.at(0, 1).clone(),
                m.at(1, 0).clone(),
                m.at(1, 1).clone(),
            ),
            _ => Err(Error::Precondition(
                "exact mode needs every entry as an exact rational".into(),
            )),
        })
        .collect()
}

fn sl2_generators_float(set: &DiscreteSet) -> Result<Vec<Sl2<Complex64>>> {
    set.points
        .iter()
        .map(|p| {
            let m: Matrix<Complex64> = p
                .mat_f64()
                .ok_or_else(|| Error::InvalidPoint("matrix point required".into()))?;
            Sl2::new(*m.at(0, 0), *m.at(0, 1), *m.at(1, 0), *m.at(1, 1))
        })
        .collect()
}

fn ball_value<T: tamekit::sl2::Sl2Scalar>(ball: &GroupBall<T>) -> Value {
    json!({
        "generators": ball.generators.len(),
        "elements": ball.elements.len(),
        "max_word_length": ball.max_word_length,
        "flagged_overflow": ball.flagged_overflow,
    })
}

fn projection_csv(path: &Path, report: &ProjectionReport) -> Result<()> {
    write_csv(
        path,
        "norm,nearest",
        report
            .columns
            .iter()
            .map(|c| format!("{},{}", c.norm, c.nearest)),
    )
}

fn sl2_discrete(
    generators: &Path,
    word_length: usize,
    radius: f64,
    mode: Mode,
    csv: Option<&Path>,
) -> Result<Value> {
    let set = load_set(generators)?;
    if set.space != (AmbientSpace::SpecialLinear { n: 2 }) {
        return Err(Error::Precondition(
            "generators must live in the space {\"kind\": \"sl\", \"n\": 2}".into(),
        ));
    }
    let (ball_info, report) = match mode {
        Mode::Exact => {
            let gens = sl2_generators_exact(&set)?;
            let ball = enumerate_ball(&gens, word_length)?;
            let report = projection_discreteness_exact(&ball, radius)?;
            (ball_value(&ball), report)
        }
        Mode::Float => {
            let gens = sl2_generators_float(&set)?;
            let ball = enumerate_ball(&gens, word_length)?;
            let report = projection_discreteness(&ball, radius);
            (ball_value(&ball), report)
        }
    };
    if let Some(path) = csv {
        projection_csv(path, &report)?;
    }
    Ok(json!({
        "command": "sl2-discrete",
        "mode": match mode { Mode::Exact => "exact", Mode::Float => "float" },
        "radius": radius,
        "ball": ball_info,
        "projection": serde_json::to_value(&report)?,
    }))
}

fn arith_check(
    ring: &str,
    ball_path: &Path,
    quotient: &str,
    word_length: Option<usize>,
) -> Result<Value> {
    let d: u32 = ring
        .strip_prefix("d=")
        .unwrap_or(ring)
        .parse()
        .map_err(|_| Error::Precondition(format!("bad ring selector: {ring}")))?;
    let ring = Ring::new(d)?;
    let set = load_set(ball_path)?;
    if set.space != (AmbientSpace::SpecialLinear { n: 2 }) {
        return Err(Error::Precondition(
            "the ball file must hold 2x2 special-linear matrices".into(),
        ));
    }
    let mats = sl2_generators_exact(&set)?;
    let ball = match word_length {
        Some(len) => enumerate_ball(&mats, len)?,
        None => {
            let words = vec![Vec::new(); mats.len()];
            GroupBall {
                generators: Vec::new(),
                elements: mats,
                words,
                max_word_length: 0,
                flagged_overflow: 0,
            }
        }
    };
    let map = match quotient {
        "firstcolumn" => first_column_quotient(ring),
        other => {
            return Err(Error::Precondition(format!(
                "unknown quotient map: {other}; supported: firstcolumn"
            )))
        }
    };
    let report = matrix_group_ball_integrality(&ball, &map)?;
    Ok(json!({
        "command": "arith-check",
        "ring_d": d,
        "quotient": quotient,
        "ball": ball_value(&ball),
        "report": serde_json::to_value(&report)?,
    }))
}

fn partition(set_path: &Path, proj1: &str, proj2: &str) -> Result<Value> {
    let set = load_set(set_path)?;
    let pp = ProjectionPair {
        pi1: proj1.parse()?,
        pi2: proj2.parse()?,
    };
    let part = partition_two_tame(&set, &pp)?;
    Ok(json!({
        "command": "partition",
        "label": set.label,
        "proj1": proj1,
        "proj2": proj2,
        "d1": point_set_value(&part.d1)?,
        "d2": point_set_value(&part.d2)?,
        "indices1": part.indices1,
        "indices2": part.indices2,
        "certificates": serde_json::to_value(&part.certificates)?,
    }))
}

fn counterexample_value(ce: &TorusCounterexample) -> Result<Value> {
    Ok(json!({
        "command": "cstar-counterexample",
        "set": point_set_value(&ce.set)?,
        "morphisms": serde_json::to_value(&ce.morphisms)?,
        "rows": serde_json::to_value(&ce.rows)?,
        "proximity": serde_json::to_value(&ce.proximity)?,
        "proximity_ok": ce.proximity_ok,
        "threshold_violation": ce.threshold_violation,
    }))
}

fn cstar(
    n: usize,
    thresholds_path: &Path,
    j: usize,
    k: usize,
    density: usize,
    csv: Option<&Path>,
) -> Result<Value> {
    let thresholds = load_thresholds(thresholds_path)?;
    let ce = torus_counterexample(n, &thresholds, j, density, k)?;
    if let Some(path) = csv {
        write_csv(
            path,
            "k,morphism,target,rho,bound,residual",
            ce.rows.iter().map(|r| {
                format!(
                    "{},{},{},{},{},{}",
                    r.k, r.morphism, r.target, r.rho, r.bound, r.residual
                )
            }),
        )?;
    }
    counterexample_value(&ce)
}
