use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use ruledinc::forge::{self, InstanceSpec, SurfaceSpec};
use ruledinc::genproj::project_to_3space;
use ruledinc::incidence::{self, count_incidences, lines_per_point, max_lines_per_flat, points_per_line};
use ruledinc::instance::{rat_strings, report_json, Instance};
use ruledinc::linespace::{line_on_surface, AffLine};
use ruledinc::poly::divides;
use ruledinc::surface::{
    classify_component, exceptional_lines, flecnode::chart_witnesses, flecnode_polynomial, Verdict,
};
use ruledinc::{Error, Poly, Rat};

#[derive(Parser)]
#[command(
    name = "ruledinc",
    version,
    about = "Point-line incidences on ruled surfaces, in exact arithmetic"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    #[command(flatten)]
    global: Global,
}

#[derive(Args)]
struct Global {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output path for generated or projected instances.
    #[arg(short = 'o', global = true)]
    output: Option<PathBuf>,
    /// Evaluate the planar-components bound instead of refusing planes.
    #[arg(long, global = true)]
    planes: bool,
    /// Write the JSON report here instead of standard output.
    #[arg(long, global = true)]
    json_out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate an instance file.
    Gen(GenArgs),
    /// Classify every factor of the surface.
    Classify { file: PathBuf },
    /// Flecnode polynomial and ruledness test for every factor.
    Flecnode { file: PathBuf },
    /// Incidence count, s-statistic and the double-counting identity.
    Incidence { file: PathBuf },
    /// Full bound report with invariant checks.
    Verify { file: PathBuf },
    /// Project a higher-dimensional instance to 3-space.
    Project { file: PathBuf },
}

#[derive(Args)]
struct GenArgs {
    /// cone | regulus | whitney | sphere | fermat | product:KIND,KIND@(a,b,c),...
    #[arg(long)]
    kind: String,
    #[arg(long, default_value_t = 10)]
    lines: usize,
    /// Points per line.
    #[arg(long, default_value_t = 5)]
    ppl: usize,
    #[arg(long, default_value_t = 3)]
    dim: usize,
    /// Include the Whitney z-axis.
    #[arg(long)]
    axis: bool,
    /// Keep cone apexes among the points.
    #[arg(long)]
    include_apex: bool,
}

enum Failure {
    Usage(String),
    Invariant(String),
    Hypothesis(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvariantViolation(_) => Failure::Invariant(e.to_string()),
            Error::PlanarComponent(_) => {
                Failure::Hypothesis(format!("{e}; rerun with --planes for the planar-components bound"))
            }
            Error::UnclassifiedFactor(_) | Error::NotOnSurface(_) | Error::ResampleExhausted(_) | Error::Collapse => {
                Failure::Hypothesis(e.to_string())
            }
            _ => Failure::Usage(e.to_string()),
        }
    }
}

type Outcome = Result<Value, Failure>;

fn read_instance(path: &Path) -> Result<Instance, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    Ok(Instance::from_json(&text)?)
}

fn write_text(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn show_point(p: &[Rat]) -> String {
    format!("({})", p.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
}

fn show_line(l: &AffLine) -> String {
    if l.base().iter().all(|x| *x == Rat::from_integer(0.into())) && l.dir().len() == 3 {
        let axis = ["x-axis", "y-axis", "z-axis"];
        for (i, name) in axis.iter().enumerate() {
            if l.dir()
                .iter()
                .enumerate()
                .all(|(j, x)| (i == j) == (*x != Rat::from_integer(0.into())))
            {
                return name.to_string();
            }
        }
    }
    format!("{}+t{}", show_point(l.base()), show_point(l.dir()))
}

fn line_json(l: &AffLine) -> Value {
    json!({"base": rat_strings(l.base()), "dir": rat_strings(l.dir())})
}

fn cmd_gen(args: &GenArgs, g: &Global) -> Outcome {
    let surface: SurfaceSpec = args.kind.parse()?;
    let spec = InstanceSpec {
        surface: surface.clone(),
        line_count: args.lines,
        points_per_line: args.ppl,
        seed: g.seed,
        dim: args.dim,
        with_axis: args.axis,
        include_apex: args.include_apex,
    };
    let (s, points, lines) = forge::generate(&spec)?;
    if lines.is_empty() && args.lines > 0 {
        eprintln!("warning: {surface} carries no generated line family; the instance has no lines");
    }
    let inst = Instance {
        dim: args.dim.max(3),
        surface: s,
        points,
        lines,
    };
    let text = inst.to_json()?;
    match &g.output {
        Some(p) => write_text(p, &text)?,
        None => print!("{text}"),
    }
    Ok(json!({
        "command": "gen",
        "kind": surface.to_string(),
        "seed": g.seed,
        "dim": inst.dim,
        "m": inst.points.len(),
        "n": inst.lines.len(),
        "D": inst.surface.degree(),
    }))
}

fn factor_lines(g: &Poly, lines: &[AffLine]) -> Vec<AffLine> {
    lines
        .iter()
        .filter(|l| l.dim() == 3 && line_on_surface(g, l))
        .cloned()
        .collect()
}

fn cmd_classify(file: &Path) -> Outcome {
    let inst = read_instance(file)?;
    let mut factors = Vec::new();
    for (i, g) in inst.surface.factors().iter().enumerate() {
        let on = factor_lines(g, &inst.lines);
        let c = classify_component(g, &on)?;
        let exc = match c.verdict {
            Verdict::SinglyRuled | Verdict::Cone(_) => exceptional_lines(g, &on)?,
            _ => Vec::new(),
        };
        let mut summary = match &c.verdict {
            Verdict::Cone(a) => format!("Cone(apex={})", show_point(a)),
            v => v.name().to_string(),
        };
        if matches!(c.verdict, Verdict::SinglyRuled) {
            let names: Vec<String> = exc.iter().map(show_line).collect();
            summary.push_str(&format!(", exceptional=[{}]", names.join(", ")));
        }
        let (fl_degree, divisible) = if g.degree() >= 3 {
            let fl = flecnode_polynomial(g)?;
            (Some(fl.degree()), Some(divides(g, &fl)?))
        } else {
            (None, None)
        };
        if c.verdict == Verdict::Unknown {
            eprintln!("warning: factor {i} could not be classified");
        }
        factors.push(json!({
            "index": i,
            "factor": g.to_string(),
            "degree": g.degree(),
            "verdict": c.verdict.name(),
            "apex": c.apex().map(rat_strings),
            "complex_ruled_indicated": c.complex_ruled_indicated,
            "flecnode_degree": fl_degree,
            "divisible": divisible,
            "exceptional": exc.iter().map(line_json).collect::<Vec<_>>(),
            "lines_on_factor": on.len(),
            "summary": summary,
            "notes": c.notes,
        }));
    }
    Ok(json!({"command": "classify", "D": inst.surface.degree(), "factors": factors}))
}

fn cmd_flecnode(file: &Path) -> Outcome {
    let inst = read_instance(file)?;
    let mut factors = Vec::new();
    for (i, g) in inst.surface.factors().iter().enumerate() {
        let d = g.degree();
        if d < 3 {
            factors.push(json!({
                "index": i,
                "factor": g.to_string(),
                "degree": d,
                "ruled_indicated": true,
                "note": "every quadric or plane is ruled by complex lines",
            }));
            continue;
        }
        let fl = flecnode_polynomial(g)?;
        let charts: Vec<Value> = chart_witnesses(g)?
            .iter()
            .map(|c| json!({"chart": c.chart, "raw_degree": c.raw_degree, "witness_degree": c.witness.degree()}))
            .collect();
        factors.push(json!({
            "index": i,
            "factor": g.to_string(),
            "degree": d,
            "flecnode_degree": fl.degree(),
            "degree_bound": 11 * d - 18,
            "ruled_indicated": divides(g, &fl)?,
            "charts": charts,
        }));
    }
    Ok(json!({"command": "flecnode", "factors": factors}))
}

fn cmd_incidence(file: &Path) -> Outcome {
    let inst = read_instance(file)?;
    let i = count_incidences(&inst.points, &inst.lines);
    let by_line: usize = points_per_line(&inst.points, &inst.lines).iter().sum();
    let by_point: usize = lines_per_point(&inst.points, &inst.lines).iter().sum();
    Ok(json!({
        "command": "incidence",
        "dim": inst.dim,
        "m": inst.points.len(),
        "n": inst.lines.len(),
        "I": i,
        "s": max_lines_per_flat(&inst.lines),
        "sum_over_lines": by_line,
        "sum_over_points": by_point,
        "double_counting_ok": by_line == i && by_point == i,
    }))
}

type ThreeSpace = (Vec<Vec<Rat>>, Vec<AffLine>, Value);

/// Projects when `dim > 3`; returns the 3-space data and the certificate chain.
fn to_three_space(inst: &Instance, seed: u64) -> Result<ThreeSpace, Failure> {
    if inst.dim == 3 {
        return Ok((inst.points.clone(), inst.lines.clone(), json!([])));
    }
    let pr = project_to_3space(&inst.points, &inst.lines, seed)?;
    let certs = serde_json::to_value(&pr.certificates).map_err(|e| Failure::Usage(e.to_string()))?;
    Ok((pr.points, pr.lines, certs))
}

fn cmd_verify(file: &Path, g: &Global) -> Outcome {
    let inst = read_instance(file)?;
    let i_before = count_incidences(&inst.points, &inst.lines);
    let (points, lines, certs) = to_three_space(&inst, g.seed)?;
    let (m, n, d) = (points.len(), lines.len(), inst.surface.degree());
    let s = max_lines_per_flat(&lines);
    let i = count_incidences(&points, &lines);
    let base = json!({
        "command": "verify",
        "seed": g.seed,
        "dim": inst.dim,
        "factor_degrees": inst.surface.factors().iter().map(Poly::degree).collect::<Vec<_>>(),
        "certificates": certs,
        "incidences_before_projection": i_before,
    });
    let mut out = base.as_object().cloned().unwrap_or_default();
    if g.planes {
        out.insert("mode".into(), json!("planes"));
        out.insert("m".into(), json!(m));
        out.insert("n".into(), json!(n));
        out.insert("s".into(), json!(s));
        out.insert("I".into(), json!(i));
        let rhs = incidence::rhs_planes(m, s, n);
        out.insert("rhs_planes".into(), json!(rhs));
        out.insert("ratio".into(), json!(if rhs > 0.0 { i as f64 / rhs } else { 0.0 }));
        return Ok(Value::Object(out));
    }
    if let Some(k) = inst.surface.factors().iter().position(|f| f.degree() == 1) {
        return Err(Error::PlanarComponent(k).into());
    }
    if !lines.iter().all(|l| line_on_surface(inst.surface.f(), l)) {
        // Projected lines need not lie on the 3-space surface; report statistics only.
        let rhs = incidence::rhs_main(m, n, d, s);
        out.insert("mode".into(), json!("statistics"));
        out.insert(
            "report".into(),
            json!({
                "m": m, "n": n, "D": d, "s": s, "I": i,
                "rhs_main": rhs,
                "rhs_st": incidence::rhs_st(m, n),
                "rhs_gk": incidence::rhs_gk(m, n, s),
                "ratio": if rhs > 0.0 { i as f64 / rhs } else { 0.0 },
            }),
        );
        out.insert("incidences_preserved".into(), json!(i == i_before));
        if i != i_before {
            return Err(Failure::Invariant(format!(
                "projection changed I from {i_before} to {i}"
            )));
        }
        return Ok(Value::Object(out));
    }
    let report = incidence::verify_bound(&inst.surface, &points, &lines)?;
    out.insert("mode".into(), json!("full"));
    out.insert("invariants_hold".into(), json!(report.invariants_hold()));
    out.insert(
        "report".into(),
        serde_json::to_value(&report).map_err(|e| Failure::Usage(e.to_string()))?,
    );
    if !report.invariants_hold() {
        let text = report_json(&Value::Object(out)).map_err(Failure::from)?;
        print!("{text}");
        return Err(Failure::Invariant("an invariant check failed".into()));
    }
    Ok(Value::Object(out))
}

fn cmd_project(file: &Path, g: &Global) -> Outcome {
    let inst = read_instance(file)?;
    let (points, lines, certs) = to_three_space(&inst, g.seed)?;
    let i_before = count_incidences(&inst.points, &inst.lines);
    let i_after = count_incidences(&points, &lines);
    let projected = Instance {
        dim: 3,
        surface: inst.surface.clone(),
        points,
        lines,
    };
    if let Some(p) = &g.output {
        write_text(p, &projected.to_json()?)?;
    }
    Ok(json!({
        "command": "project",
        "seed": g.seed,
        "dim_from": inst.dim,
        "m": projected.points.len(),
        "n": projected.lines.len(),
        "I_before": i_before,
        "I_after": i_after,
        "certificates": certs,
    }))
}

fn run(cli: &Cli) -> Outcome {
    match &cli.cmd {
        Cmd::Gen(a) => cmd_gen(a, &cli.global),
        Cmd::Classify { file } => cmd_classify(file),
        Cmd::Flecnode { file } => cmd_flecnode(file),
        Cmd::Incidence { file } => cmd_incidence(file),
        Cmd::Verify { file } => cmd_verify(file, &cli.global),
        Cmd::Project { file } => cmd_project(file, &cli.global),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let outcome = run(&cli);
    eprintln!("elapsed: {:.3} s", start.elapsed().as_secs_f64());
    let report = match outcome {
        Ok(v) => v,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            return ExitCode::from(2);
        }
        Err(Failure::Invariant(m)) => {
            eprintln!("invariant violation: {m}");
            return ExitCode::from(1);
        }
        Err(Failure::Hypothesis(m)) => {
            eprintln!("hypothesis violation: {m}");
            return ExitCode::from(3);
        }
    };
    let text = match report_json(&report) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    // `gen` without -o already used standard output for the instance.
    let gen_to_stdout = matches!(cli.cmd, Cmd::Gen(_)) && cli.global.output.is_none();
    match &cli.global.json_out {
        Some(p) => {
            if let Err(e) = fs::write(p, &text) {
                eprintln!("error: {}: {e}", p.display());
                return ExitCode::from(2);
            }
        }
        None if gen_to_stdout => {}
        None => print!("{text}"),
    }
    ExitCode::SUCCESS
}
