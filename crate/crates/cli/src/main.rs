//! `octofc`: batch front door for the octonionic operator library.
//!
//! Subcommands: `algebra-verify` (identity suites over seeded samples),
//! `scan` (slice-spectrum grid scan to CSV), `funcalc` (contour functional
//! calculus to JSON), `series` (resolvent series against the regular
//! inverse) and `examples` (the golden worked-example suite).
//!
//! Exit codes: 0 ok, 2 config error, 3 numerical precondition failure,
//! 4 tolerance breach.

use std::fmt::Write as _;
use std::fs;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;
use sha2::{Digest, Sha256};

use octofc_core::bimodule::OctVector;
use octofc_core::error::Error as CoreError;
use octofc_core::funcalc::{functional_calculus, CalcOptions};
use octofc_core::io::{
    builtin_function, oct_from_array, parse_side, side_name, CalcRequestJson, CalcResultJson,
    ContourJson, FunctionJson, OperatorJson, ProvenanceJson, ScanRequestJson, ToleranceJson,
};
use octofc_core::octonion::{identity_residuals, Octonion, FANO};
use octofc_core::paralin::{reg_inverse, OctMatrix, Side};
use octofc_core::slicefun::{SliceContour, SliceFunction, SlicePolynomial};
use octofc_core::spectra::{
    det_rs_minus_lq, membership, resolvent_series, rs_minus_t, scan_slice, GridSpec, ScanGrid,
    SlicePoint, DEFAULT_HORIZON, PA_REL_TOL,
};
use octofc_core::SliceFrame;

const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser)]
#[command(name = "octofc", version, about = "octonionic operator toolbox")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Verify the multiplication-table closure and the algebra identities
    /// on seeded random samples.
    AlgebraVerify {
        #[arg(long, default_value_t = 10_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<String>,
    },
    /// Scan a rectangle of a slice and write per-point resolvent data as CSV.
    Scan {
        #[arg(long)]
        op: String,
        #[arg(long = "J", allow_hyphen_values = true)]
        j: String,
        #[arg(long, allow_hyphen_values = true)]
        xmin: f64,
        #[arg(long, allow_hyphen_values = true)]
        xmax: f64,
        #[arg(long, allow_hyphen_values = true)]
        ymin: f64,
        #[arg(long, allow_hyphen_values = true)]
        ymax: f64,
        /// Grid points per axis.
        #[arg(long)]
        res: usize,
        #[arg(long, value_parser = ["pullback", "pushforward"])]
        kind: String,
        #[arg(long, default_value_t = DEFAULT_HORIZON)]
        horizon: u32,
        #[arg(long)]
        out: Option<String>,
    },
    /// Evaluate a slice regular function of an operator by contour
    /// quadrature and write the result operator as JSON.
    Funcalc {
        #[arg(long)]
        op: String,
        /// Function spec: `pow:m`, `exp:N`, or `@file.json`.
        #[arg(long = "fn")]
        function: String,
        #[arg(long = "J", allow_hyphen_values = true)]
        j: String,
        #[arg(long)]
        radius: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        center: f64,
        #[arg(long, default_value_t = 1024)]
        nodes: usize,
        #[arg(long, value_parser = ["left", "right"])]
        side: String,
        #[arg(long, default_value_t = 1e-7)]
        quad_tol: f64,
        /// Integrate even when the power-associativity check fails.
        #[arg(long, default_value_t = false)]
        allow_non_pa: bool,
        #[arg(long)]
        out: Option<String>,
    },
    /// Compare the truncated resolvent series with the dense regular
    /// inverse of R_s - T.
    Series {
        #[arg(long)]
        op: String,
        /// The point s as eight comma-separated reals.
        #[arg(long, allow_hyphen_values = true)]
        s: String,
        #[arg(long = "N", default_value_t = 60)]
        n_terms: u32,
        #[arg(long, value_parser = ["left", "right"])]
        side: String,
        #[arg(long)]
        out: Option<String>,
    },
    /// Reproduce the worked examples and report pass/fail per example.
    Examples {
        #[arg(long)]
        out: Option<String>,
    },
}

struct CliError {
    code: u8,
    kind: &'static str,
    message: String,
    location: Option<String>,
}

impl CliError {
    fn config(message: impl Into<String>) -> CliError {
        CliError {
            code: 2,
            kind: "config",
            message: message.into(),
            location: None,
        }
    }

    fn config_at(location: impl Into<String>, message: impl Into<String>) -> CliError {
        CliError {
            code: 2,
            kind: "config",
            message: message.into(),
            location: Some(location.into()),
        }
    }

    fn tolerance(message: impl Into<String>) -> CliError {
        CliError {
            code: 4,
            kind: "tolerance",
            message: message.into(),
            location: None,
        }
    }

    fn from_core(err: CoreError) -> CliError {
        let (code, kind) = match err {
            CoreError::Tolerance(_) => (4, "tolerance"),
            _ => (3, "numerical-precondition"),
        };
        CliError {
            code,
            kind,
            message: err.to_string(),
            location: None,
        }
    }
}

fn main() -> ExitCode {
    if let Ok(threads) = std::env::var("OCTOFC_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build_global();
        }
    }
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let payload = serde_json::json!({
                "error": {
                    "code": e.code,
                    "kind": e.kind,
                    "message": e.message,
                    "location": e.location,
                }
            });
            eprintln!("{payload}");
            ExitCode::from(e.code)
        }
    }
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::AlgebraVerify { samples, seed, out } => algebra_verify(samples, seed, out),
        Command::Scan {
            op,
            j,
            xmin,
            xmax,
            ymin,
            ymax,
            res,
            kind,
            horizon,
            out,
        } => scan(op, j, xmin, xmax, ymin, ymax, res, kind, horizon, out),
        Command::Funcalc {
            op,
            function,
            j,
            radius,
            center,
            nodes,
            side,
            quad_tol,
            allow_non_pa,
            out,
        } => funcalc(
            op, function, j, radius, center, nodes, side, quad_tol, allow_non_pa, out,
        ),
        Command::Series {
            op,
            s,
            n_terms,
            side,
            out,
        } => series(op, s, n_terms, side, out),
        Command::Examples { out } => examples(out),
    }
}

fn config_hash(value: &impl Serialize) -> String {
    let bytes = serde_json::to_vec(value).expect("config serializes");
    let mut hasher = Sha256::new();
    hasher.update(&bytes);
    let digest = hasher.finalize();
    let mut out = String::with_capacity(16);
    for b in digest.iter().take(8) {
        let _ = write!(out, "{b:02x}");
    }
    out
}

fn emit(out: Option<String>, content: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(&path, content)
            .map_err(|e| CliError::config_at(path, format!("cannot write output: {e}"))),
        None => {
            println!("{content}");
            Ok(())
        }
    }
}

fn load_operator(path: &str) -> Result<OctMatrix, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::config_at(path, format!("cannot read operator file: {e}")))?;
    let parsed: OperatorJson = serde_json::from_str(&text).map_err(|e| {
        CliError::config_at(
            format!("{path}:{}:{}", e.line(), e.column()),
            format!("operator JSON parse error: {e}"),
        )
    })?;
    parsed
        .to_matrix()
        .map_err(|e| CliError::config_at(path, e.to_string()))
}

fn parse_octonion_arg(name: &str, text: &str) -> Result<Octonion, CliError> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 8 {
        return Err(CliError::config(format!(
            "--{name} needs 8 comma-separated reals, got {}",
            parts.len()
        )));
    }
    let mut c = [0.0f64; 8];
    for (i, p) in parts.iter().enumerate() {
        c[i] = p
            .trim()
            .parse()
            .map_err(|_| CliError::config(format!("--{name}: bad number \"{p}\"")))?;
    }
    oct_from_array(c).map_err(|e| CliError::config(e.to_string()))
}

fn parse_slice_unit(text: &str) -> Result<Octonion, CliError> {
    let j = parse_octonion_arg("J", text)?;
    if j.re().abs() > 1e-6 || (j.norm() - 1.0).abs() > 1e-6 {
        return Err(CliError::config(format!(
            "--J must be a unit imaginary octonion (Re = {:.2e}, |J| = {:.6})",
            j.re(),
            j.norm()
        )));
    }
    // renormalize exactly so downstream validation at 1e-9 is safe
    let im = j.im();
    Ok(im.scale(1.0 / im.norm()))
}

fn parse_function_spec(spec: &str, side: Side) -> Result<SlicePolynomial, CliError> {
    if let Some(path) = spec.strip_prefix('@') {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::config_at(path, format!("cannot read function file: {e}")))?;
        let parsed: FunctionJson = serde_json::from_str(&text).map_err(|e| {
            CliError::config_at(
                format!("{path}:{}:{}", e.line(), e.column()),
                format!("function JSON parse error: {e}"),
            )
        })?;
        return parsed
            .to_polynomial()
            .map_err(|e| CliError::config_at(path, e.to_string()));
    }
    match builtin_function(spec, side) {
        Ok(Some(poly)) => Ok(poly),
        Ok(None) => Err(CliError::config(format!(
            "unknown function spec \"{spec}\" (use pow:m, exp:N or @file.json)"
        ))),
        Err(e) => Err(CliError::config(e.to_string())),
    }
}

// splitmix64; the seed is recorded in the report
struct Rng(u64);

impl Rng {
    fn next_f64(&mut self) -> f64 {
        self.0 = self.0.wrapping_add(0x9E3779B97F4A7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
        z ^= z >> 31;
        (z >> 11) as f64 / (1u64 << 53) as f64
    }

    fn octonion(&mut self, scale: f64) -> Octonion {
        Octonion::new(std::array::from_fn(|_| {
            (2.0 * self.next_f64() - 1.0) * scale
        }))
    }

    fn unit_imaginary(&mut self) -> Octonion {
        loop {
            let mut c = [0.0; 8];
            for v in c.iter_mut().skip(1) {
                *v = 2.0 * self.next_f64() - 1.0;
            }
            let u = Octonion::new(c);
            if u.norm() > 1e-2 {
                return u.scale(1.0 / u.norm());
            }
        }
    }
}

#[derive(Serialize)]
struct AlgebraReport {
    samples: u64,
    seed: u64,
    worst_moufang: f64,
    worst_five_term: f64,
    worst_norm_mult: f64,
    worst_frame_residual: f64,
    threshold: f64,
    ok: bool,
    tool_version: String,
    config_hash: String,
}

fn algebra_verify(samples: u64, seed: u64, out: Option<String>) -> Result<(), CliError> {
    FANO.check_closure().map_err(CliError::from_core)?;
    let mut rng = Rng(seed);
    let mut worst_moufang = 0.0f64;
    let mut worst_five = 0.0f64;
    let mut worst_norm = 0.0f64;
    for _ in 0..samples {
        let x = rng.octonion(2.0);
        let y = rng.octonion(2.0);
        let z = rng.octonion(2.0);
        let w = rng.octonion(2.0);
        let res = identity_residuals(x, y, z, w);
        let scale = 1.0
            + x.norm() * x.norm() * y.norm() * z.norm()
            + x.norm() * y.norm() * z.norm() * w.norm();
        worst_moufang = worst_moufang.max(res.moufang.iter().cloned().fold(0.0, f64::max) / scale);
        worst_five = worst_five.max(res.five_term / scale);
        let prod = (x * y).norm();
        worst_norm = worst_norm.max((prod - x.norm() * y.norm()).abs() / (1.0 + prod));
    }
    let mut worst_frame = 0.0f64;
    for _ in 0..8 {
        let frame = SliceFrame::new(rng.unit_imaginary())
            .map_err(CliError::from_core)?;
        worst_frame = worst_frame
            .max(frame.orthonormality_residual())
            .max(frame.table_residual());
    }
    let threshold = 1e-12;
    let ok = worst_moufang <= threshold
        && worst_five <= threshold
        && worst_norm <= threshold
        && worst_frame <= threshold;
    let report = AlgebraReport {
        samples,
        seed,
        worst_moufang,
        worst_five_term: worst_five,
        worst_norm_mult: worst_norm,
        worst_frame_residual: worst_frame,
        threshold,
        ok,
        tool_version: VERSION.into(),
        config_hash: config_hash(&(samples, seed)),
    };
    emit(out, &serde_json::to_string_pretty(&report).unwrap())?;
    if !ok {
        return Err(CliError::tolerance("algebra identity residual above 1e-12"));
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn scan(
    op: String,
    j_text: String,
    xmin: f64,
    xmax: f64,
    ymin: f64,
    ymax: f64,
    res: usize,
    kind: String,
    horizon: u32,
    out: Option<String>,
) -> Result<(), CliError> {
    let t = load_operator(&op)?;
    let j = parse_slice_unit(&j_text)?;
    let spec = GridSpec {
        x_min: xmin,
        x_max: xmax,
        y_min: ymin,
        y_max: ymax,
        nx: res,
        ny: res,
    };
    spec.validate().map_err(|e| CliError::config(e.to_string()))?;
    let grid = scan_slice(&t, j, &spec, horizon).map_err(CliError::from_core)?;
    let request = ScanRequestJson {
        op: op.clone(),
        j: j.c,
        x_min: xmin,
        x_max: xmax,
        y_min: ymin,
        y_max: ymax,
        resolution: res,
        kind: kind.clone(),
        horizon,
        pa_tol: PA_REL_TOL,
    };
    let hash = config_hash(&request);
    let mut csv = String::new();
    let _ = writeln!(csv, "# octofc scan v{VERSION}");
    let _ = writeln!(csv, "# config_hash={hash} kind={kind} horizon={horizon}");
    let _ = writeln!(
        csv,
        "# tolerances: singularity=1e-8*(1+|s|+|T|), pa_rel_tol={PA_REL_TOL:e}"
    );
    let _ = writeln!(
        csv,
        "x,y,min_sv,invertible,extendable,liftable,in_pullback,in_pushforward"
    );
    for sample in &grid.samples {
        let _ = writeln!(
            csv,
            "{},{},{},{},{},{},{},{}",
            sample.point.0,
            sample.point.1,
            sample.min_sv,
            sample.invertible,
            sample.extendable,
            sample.liftable,
            sample.in_pullback,
            sample.in_pushforward
        );
    }
    emit(out, csv.trim_end())
}

#[allow(clippy::too_many_arguments)]
fn funcalc(
    op: String,
    function: String,
    j_text: String,
    radius: f64,
    center: f64,
    nodes: usize,
    side_text: String,
    quad_tol: f64,
    allow_non_pa: bool,
    out: Option<String>,
) -> Result<(), CliError> {
    let t = load_operator(&op)?;
    let j = parse_slice_unit(&j_text)?;
    let side = parse_side(&side_text).map_err(|e| CliError::config(e.to_string()))?;
    if quad_tol <= 0.0 || quad_tol.is_nan() {
        return Err(CliError::config("--quad-tol must be positive"));
    }
    let poly = parse_function_spec(&function, side)?;
    let contour =
        SliceContour::new(j, center, radius, nodes).map_err(|e| CliError::config(e.to_string()))?;
    let opts = CalcOptions {
        quad_tol,
        allow_non_power_associative: allow_non_pa,
        ..CalcOptions::default()
    };
    let outcome = functional_calculus(&t, &SliceFunction::Poly(poly), &contour, side, &opts)
        .map_err(CliError::from_core)?;
    let request = CalcRequestJson {
        op: op.clone(),
        function: function.clone(),
        j: j.c,
        contour: ContourJson {
            center,
            radius,
            nodes,
        },
        side: side_text.clone(),
    };
    let result = CalcResultJson {
        operator: OperatorJson::from_matrix(&outcome.op),
        error_estimate: outcome.error_estimate,
        provenance: ProvenanceJson {
            tool_version: VERSION.into(),
            config_hash: config_hash(&request),
            nodes,
            radius,
            center,
            horizon: opts.horizon,
            tolerances: ToleranceJson {
                pa_tol: opts.pa_tol,
                quad_tol,
            },
            power_assoc_evidence: outcome.evidence.describe(),
        },
    };
    emit(out, &serde_json::to_string_pretty(&result).unwrap())
}

#[derive(Serialize)]
struct SeriesReport {
    s: [f64; 8],
    side: String,
    n_terms: u32,
    convergent: bool,
    tail_bound: f64,
    defect_vs_regular_inverse: Option<f64>,
    operator: OperatorJson,
    /// Relative floor on singular values accepted as invertible.
    invertibility_threshold: String,
    tool_version: String,
    config_hash: String,
}

fn series(
    op: String,
    s_text: String,
    n_terms: u32,
    side_text: String,
    out: Option<String>,
) -> Result<(), CliError> {
    let t = load_operator(&op)?;
    let s = parse_octonion_arg("s", &s_text)?;
    let side = parse_side(&side_text).map_err(|e| CliError::config(e.to_string()))?;
    let sum = resolvent_series(&t, s, side, n_terms).map_err(CliError::from_core)?;
    let defect = if sum.convergent {
        let sp = SlicePoint::from_octonion(s).map_err(CliError::from_core)?;
        let exact = reg_inverse(&rs_minus_t(&t, &sp), side).map_err(CliError::from_core)?;
        Some(sum.op.sub(&exact).op_norm())
    } else {
        None
    };
    let report = SeriesReport {
        s: s.c,
        side: side_name(side).into(),
        n_terms,
        convergent: sum.convergent,
        tail_bound: sum.tail_bound,
        defect_vs_regular_inverse: defect,
        operator: OperatorJson::from_matrix(&sum.op),
        invertibility_threshold: "1e-10 * max(1, max sv)".into(),
        tool_version: VERSION.into(),
        config_hash: config_hash(&(&op, &s_text, n_terms, &side_text)),
    };
    emit(out, &serde_json::to_string_pretty(&report).unwrap())
}

#[derive(Serialize)]
struct ExampleOutcome {
    name: String,
    pass: bool,
    detail: String,
}

fn examples(out: Option<String>) -> Result<(), CliError> {
    let mut results: Vec<ExampleOutcome> = Vec::new();
    let mut record = |name: &str, pass: bool, detail: String| {
        println!("{name}: {}", if pass { "PASS" } else { "FAIL" });
        results.push(ExampleOutcome {
            name: name.into(),
            pass,
            detail,
        });
    };

    // closed-form determinant of R_s - L_q against the dense determinant
    {
        let mut rng = Rng(17);
        let mut worst = 0.0f64;
        for _ in 0..200 {
            let q = rng.octonion(1.5);
            let s = rng.octonion(1.5);
            let sp = SlicePoint::from_octonion(s).expect("finite");
            let numeric = rs_minus_t(&OctMatrix::left_mult(q), &sp)
                .matrix()
                .determinant();
            let formula = det_rs_minus_lq(q, s);
            let rel = (numeric - formula).abs() / numeric.abs().max(formula.abs()).max(1e-300);
            worst = worst.max(rel);
        }
        record(
            "det_formula",
            worst <= 1e-8,
            format!("worst relative error {worst:.3e} over 200 samples"),
        );
    }

    let e = Octonion::basis;

    // sigma*(L_q) = [q]
    {
        let q = e(1) + e(2).scale(2.0);
        let t = OctMatrix::left_mult(q);
        let spec = GridSpec {
            x_min: -3.0,
            x_max: 3.0,
            y_min: 0.0,
            y_max: 3.0,
            nx: 100,
            ny: 100,
        };
        let grid = scan_slice(&t, e(4), &spec, 8).expect("scan");
        let target = (0.0, 5f64.sqrt());
        let pass = candidates_match(&grid, &[target]);
        record(
            "sigma_star_Lq",
            pass,
            format!("candidates {:?}", grid.candidates()),
        );
    }

    // diagonal example: spheres of radius 1, 2, 3
    {
        let t = OctMatrix::diagonal(&[e(1), e(2).scale(2.0), e(4).scale(3.0)]);
        let spec = GridSpec {
            x_min: -4.0,
            x_max: 4.0,
            y_min: 0.0,
            y_max: 4.0,
            nx: 120,
            ny: 120,
        };
        let grid = scan_slice(&t, e(7), &spec, 8).expect("scan");
        let pass = candidates_match(&grid, &[(0.0, 1.0), (0.0, 2.0), (0.0, 3.0)]);
        record(
            "diag_spectrum",
            pass,
            format!("candidates {:?}", grid.candidates()),
        );
    }

    // non-axially-symmetric example
    {
        let t = OctMatrix::from_rows(vec![
            vec![Octonion::zero(), -e(1)],
            vec![e(1), Octonion::zero()],
        ])
        .expect("square");
        let spec = GridSpec {
            x_min: -2.0,
            x_max: 2.0,
            y_min: 0.0,
            y_max: 2.0,
            nx: 120,
            ny: 120,
        };
        let grid_e1 = scan_slice(&t, e(1), &spec, 8).expect("scan");
        let pass_e1 = candidates_match(&grid_e1, &[(1.0, 0.0), (-1.0, 0.0)]);

        // orthogonal slice: the named points are flagged and the whole
        // flagged set lies on the unit circle
        let grid_e2 = scan_slice(&t, e(2), &spec, 8).expect("scan");
        let cell = spec.cell_diag();
        let low = grid_e2.below_gate();
        let covered = [(1.0, 0.0), (-1.0, 0.0), (0.0, 1.0)].iter().all(|(tx, ty)| {
            low.iter()
                .map(|(x, y, _)| ((x - tx).powi(2) + (y - ty).powi(2)).sqrt())
                .fold(f64::INFINITY, f64::min)
                <= cell
        });
        let on_circle = low
            .iter()
            .all(|(x, y, _)| ((x * x + y * y).sqrt() - 1.0).abs() <= 0.1);

        // e1 itself resolvent, exact null witness on the circle
        let s = SlicePoint::new(0.0, 1.0, e(1)).expect("unit");
        let sample = membership(&t, &s, 8);
        let s_oct = Octonion::from_real(0.6) + e(2).scale(0.8);
        let witness = OctVector(vec![-(e(5) * s_oct.conj()), e(4)]);
        let sp = SlicePoint::from_octonion(s_oct).expect("finite");
        let null_res = rs_minus_t(&t, &sp)
            .apply_oct(&witness)
            .expect("dims")
            .norm();
        let pass = pass_e1 && covered && on_circle && sample.in_pullback && null_res <= 1e-12;
        record(
            "nonsphere_matrix",
            pass,
            format!(
                "e1 slice +-1: {pass_e1}, named points flagged: {covered}, circle: {on_circle}, e1 resolvent: {}, null witness {null_res:.3e}",
                sample.in_pullback
            ),
        );
    }

    // f*(L_q) = L_{f(q)}
    {
        let q = Octonion::one() + e(1) + e(2);
        let t = OctMatrix::left_mult(q);
        let opts = CalcOptions::default();
        let mut worst = 0.0f64;
        for side in [Side::Left, Side::Right] {
            let f = SlicePolynomial::monomial(side, 2);
            let expect = OctMatrix::left_mult(f.eval(q));
            let contour = SliceContour::new(e(4), 0.0, 3.0, 1024).expect("contour");
            match functional_calculus(&t, &SliceFunction::Poly(f), &contour, side, &opts) {
                Ok(outcome) => worst = worst.max(outcome.op.frobenius_dist(&expect)),
                Err(err) => {
                    worst = f64::INFINITY;
                    record("cauchy_Lq", false, err.to_string());
                    break;
                }
            }
        }
        if worst.is_finite() {
            record(
                "cauchy_Lq",
                worst <= 1e-8,
                format!("worst deviation from L_f(q): {worst:.3e}"),
            );
        }
    }

    // polynomial calculus on the diagonal example
    {
        let t = OctMatrix::diagonal(&[e(1), e(2).scale(2.0), e(4).scale(3.0)]);
        let t2 = t.compose(&t).expect("square");
        let contour = SliceContour::new(e(3), 0.0, 4.0, 1024).expect("contour");
        let opts = CalcOptions::default();
        let outcome = functional_calculus(
            &t,
            &SliceFunction::Poly(SlicePolynomial::monomial(Side::Left, 2)),
            &contour,
            Side::Left,
            &opts,
        );
        match outcome {
            Ok(res) => {
                let dist = res.op.frobenius_dist(&t2);
                record(
                    "diag_poly_calculus",
                    dist <= 1e-8,
                    format!("|f*(T) - T^2| = {dist:.3e}"),
                );
            }
            Err(err) => record("diag_poly_calculus", false, err.to_string()),
        }
    }

    let pass_all = results.iter().all(|r| r.pass);
    let report = serde_json::json!({
        "examples": results,
        "ok": pass_all,
        "tolerances": {
            "det_rel": 1e-8,
            "scan_cell_accuracy": "one grid cell",
            "calculus_frobenius": 1e-8,
            "pa_rel_tol": PA_REL_TOL,
        },
        "tool_version": VERSION,
        "config_hash": config_hash(&"examples"),
    });
    if let Some(path) = out {
        fs::write(&path, serde_json::to_string_pretty(&report).unwrap())
            .map_err(|e| CliError::config_at(path, format!("cannot write output: {e}")))?;
    }
    if !pass_all {
        return Err(CliError::tolerance("one or more worked examples failed"));
    }
    Ok(())
}

fn candidates_match(grid: &ScanGrid, targets: &[(f64, f64)]) -> bool {
    let cands = grid.candidates();
    let cell = grid.spec.cell_diag();
    if cands.is_empty() {
        return false;
    }
    let strays = cands.iter().any(|(x, y, _)| {
        targets
            .iter()
            .map(|(tx, ty)| ((x - tx).powi(2) + (y - ty).powi(2)).sqrt())
            .fold(f64::INFINITY, f64::min)
            > cell
    });
    let missed = targets.iter().any(|(tx, ty)| {
        cands
            .iter()
            .map(|(x, y, _)| ((x - tx).powi(2) + (y - ty).powi(2)).sqrt())
            .fold(f64::INFINITY, f64::min)
            > cell
    });
    !strays && !missed
}
