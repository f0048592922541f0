//! Acceptance criteria, one PASS/FAIL line each. Runs without the libtest
//! harness so the lines always reach the output; exits nonzero on any FAIL.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ruledinc::forge::{self, InstanceSpec, SurfaceSpec};
use ruledinc::genproj::project_to_3space;
use ruledinc::incidence::{
    self, count_incidences, lines_per_point, points_per_line, rhs_gk, rhs_main, rhs_planes, rhs_st, BoundReport,
};
use ruledinc::linespace::{
    coplanar_triple, klein_form, line_relation, plucker_from_points, AffLine, LineRelation, ProjPoint,
};
use ruledinc::poly::divides;
use ruledinc::rat::{int, ints};
use ruledinc::surface::{
    check_generator_sum, classify_component, exceptional_lines, flecnode_polynomial, ruled_indicator, Ruledness,
    Surface, Verdict,
};
use ruledinc::{Poly, Rat, Result};

const KLEIN_PAIRS: usize = 1000;
const KLEIN_BUDGET: Duration = Duration::from_secs(1);
const SPHERE_BUDGET: Duration = Duration::from_secs(1);
const FLECNODE_BUDGET: Duration = Duration::from_secs(60);
const FIRSTFLIP_PROBES: usize = 50;
const GENERATOR_SUM_BUDGET: Duration = Duration::from_secs(10);
const CLAIM_BUDGET: Duration = Duration::from_secs(30);
const SUITE_SIZE: usize = 25;
const SUITE_MAX_M: usize = 500;
const SUITE_MAX_N: usize = 200;
const SUITE_MAX_D: u32 = 9;
const RATIO_CAP: f64 = 4.0;
const SUITE_BUDGET: Duration = Duration::from_secs(120);
const CONE_RATIO: f64 = 0.53;
const CONE_RATIO_TOL: f64 = 0.01;
const CONE_RHS: f64 = 377.8;
const CONE_RHS_TOL: f64 = 0.05;
const PROJECTION_TRIALS: usize = 500;
const MAX_RESAMPLES_SEEN: usize = 3;
const PROJECTION_BUDGET: Duration = Duration::from_secs(120);
const SPOT_TOL: f64 = 1e-3;

struct Inst {
    label: String,
    surface: Surface,
    points: Vec<Vec<Rat>>,
    lines: Vec<AffLine>,
}

/// An instance tag with its points and lines.
type Labeled = (String, Vec<Vec<Rat>>, Vec<AffLine>);

fn instance(kind: &str, lines: usize, ppl: usize, seed: u64, axis: bool) -> Result<Inst> {
    instance_with_apex(kind, lines, ppl, seed, axis, false)
}

fn instance_with_apex(kind: &str, lines: usize, ppl: usize, seed: u64, axis: bool, apex: bool) -> Result<Inst> {
    let spec = InstanceSpec {
        surface: kind.parse::<SurfaceSpec>()?,
        line_count: lines,
        points_per_line: ppl,
        seed,
        dim: 3,
        with_axis: axis,
        include_apex: apex,
    };
    let (surface, points, lines) = forge::generate(&spec)?;
    Ok(Inst {
        label: format!("{kind} n={} seed={seed}", lines.len()),
        surface,
        points,
        lines,
    })
}

fn poly(src: &str) -> Poly {
    Poly::parse(src, &["x", "y", "z"]).expect("fixture polynomial parses")
}

fn random_rat(rng: &mut ChaCha8Rng, span: i64) -> Rat {
    Rat::new(
        BigInt::from(rng.gen_range(-span..=span)),
        BigInt::from(rng.gen_range(1..=span)),
    )
}

fn c1_klein() -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut bad = 0;
    let mut done = 0;
    while done < KLEIN_PAIRS {
        let x = ProjPoint::new((0..4).map(|_| random_rat(&mut rng, 1000)).collect());
        let y = ProjPoint::new((0..4).map(|_| random_rat(&mut rng, 1000)).collect());
        let (Ok(x), Ok(y)) = (x, y) else { continue };
        let Ok(l) = plucker_from_points(&x, &y) else { continue };
        done += 1;
        if !klein_form(&l.pl).is_zero() {
            bad += 1;
        }
    }
    Ok((bad == 0, format!("{done} pairs, {bad} nonzero")))
}

fn c2_sphere() -> Result<(bool, String)> {
    let f = poly("x^2 + y^2 + z^2 - 1");
    let r = ruled_indicator(&f)?;
    let c = classify_component(&f, &[])?;
    let ok = r == Ruledness::RuledIndicated && c.verdict == Verdict::NotRuledReal && c.complex_ruled_indicated;
    Ok((
        ok,
        format!("{r:?}, {}, complex={}", c.verdict.name(), c.complex_ruled_indicated),
    ))
}

fn c3_divisibility() -> Result<(bool, String)> {
    let cusp = poly("x^2*z - y^3");
    let fermat = poly("x^3 + y^3 + z^3 - 1");
    let a = divides(&cusp, &flecnode_polynomial(&cusp)?)?;
    let b = divides(&fermat, &flecnode_polynomial(&fermat)?)?;
    Ok((a && !b, format!("cusp cone divides={a}, fermat divides={b}")))
}

fn c4_degree() -> Result<(bool, String)> {
    let mut ok = true;
    let mut parts = Vec::new();
    for src in ["x^2*z - y^3", "x^3 + y^3 + z^3 - 1"] {
        let f = poly(src);
        let d = flecnode_polynomial(&f)?.degree();
        let bound = 11 * f.degree() - 18;
        ok &= d <= bound;
        parts.push(format!("deg FL = {d} (bound {bound})"));
    }
    Ok((ok, parts.join(", ")))
}

fn c5_exceptional(reports: &[(String, BoundReport)]) -> Result<(bool, String)> {
    let f = poly("x^2 - y^2*z");
    let mut lines = vec![AffLine::new(ints(&[0, 0, 0]), ints(&[0, 0, 1]))?];
    for c in [1, -1, 2, -2, 3, -3] {
        lines.push(AffLine::new(ints(&[0, 0, c * c]), ints(&[c, 1, 0]))?);
    }
    let exc = exceptional_lines(&f, &lines)?;
    let exact = exc == lines[..1];
    let worst = reports.iter().map(|(_, r)| r.exceptional_max).max().unwrap_or(0);
    Ok((
        exact && worst <= 2,
        format!(
            "whitney exceptional = {} line(s) [z-axis: {exact}], suite max = {worst}",
            exc.len()
        ),
    ))
}

#[derive(Clone, Copy)]
enum Probe {
    Contained,
    Transversal,
    Disjoint,
}

fn generator_sum_suite(
    name: &str,
    f: &Poly,
    lines: &[AffLine],
    extra: &[AffLine],
    seed: u64,
) -> Result<(bool, String)> {
    let exc = exceptional_lines(f, lines)?;
    let hints = classify_component(f, lines)?;
    let apex = hints.apex().map(<[Rat]>::to_vec);
    let bound = f.degree() as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0;
    let mut counts = [0usize; 3];
    for i in 0..FIRSTFLIP_PROBES {
        let kind = [Probe::Contained, Probe::Transversal, Probe::Disjoint][i % 3];
        let ln = match kind {
            Probe::Contained => {
                let pool: Vec<&AffLine> = extra.iter().chain(lines).filter(|l| !exc.contains(l)).collect();
                pool[rng.gen_range(0..pool.len())].clone()
            }
            Probe::Transversal => loop {
                let a = &lines[rng.gen_range(0..lines.len())];
                let b = &lines[rng.gen_range(0..lines.len())];
                let p = a.point_at(&random_rat(&mut rng, 9));
                let q = b.point_at(&random_rat(&mut rng, 9));
                if let Ok(l) = AffLine::through(&p, &q) {
                    break l;
                }
            },
            Probe::Disjoint => {
                let a = int(rng.gen_range(1..=9)) * int(if rng.gen_bool(0.5) { 1 } else { -1 });
                if name == "cone" {
                    let k = Rat::new(BigInt::from(rng.gen_range(-9..=9)), BigInt::from(10));
                    AffLine::new(vec![int(0), a, int(0)], vec![int(1), int(0), k])?
                } else {
                    AffLine::new(vec![a, int(0), int(0)], ints(&[0, 0, 1]))?
                }
            }
        };
        counts[i % 3] += 1;
        let r = check_generator_sum(f, &ln, lines, &exc, apex.as_deref())?;
        if !r.ok || r.sum > bound {
            return Ok((false, format!("{name}: sum {} > {bound} on probe {i}", r.sum)));
        }
        worst = worst.max(r.sum);
    }
    Ok((true, format!("{name}: {counts:?} probes, worst sum {worst} <= {bound}")))
}

fn c6_generator_sums() -> Result<(bool, String)> {
    let whitney: SurfaceSpec = "whitney".parse()?;
    let cone: SurfaceSpec = "cone".parse()?;
    let wl = forge::make_lines(&whitney, 11, 6, true)?;
    let wx = forge::make_lines(&whitney, 25, 6, true)?;
    let cl = forge::make_lines(&cone, 12, 6, false)?;
    let cx = forge::make_lines(&cone, 30, 7, false)?;
    let (a, da) = generator_sum_suite("whitney", &forge::make_surface(&whitney)?.factors()[0], &wl, &wx, 61)?;
    let (b, db) = generator_sum_suite("cone", &forge::make_surface(&cone)?.factors()[0], &cl, &cx, 62)?;
    Ok((a && b, format!("{da}; {db}")))
}

/// Adds every pairwise intersection point of the lines, so pruning keeps points.
fn with_crossings(mut inst: Inst) -> Result<Inst> {
    let mut pts: BTreeSet<Vec<Rat>> = inst.points.iter().cloned().collect();
    for i in 0..inst.lines.len() {
        for j in i + 1..inst.lines.len() {
            if let LineRelation::Intersecting(p) = line_relation(&inst.lines[i], &inst.lines[j])? {
                pts.insert(p);
            }
        }
    }
    inst.points = pts.into_iter().collect();
    inst.label.push_str(" +crossings");
    Ok(inst)
}

fn c7_claims() -> Result<(bool, String)> {
    let mut ok = true;
    let mut parts = Vec::new();
    for (kind, n) in [
        ("product:cone,regulus,whitney,regulus@(1,1,0)", 120),
        ("product:cone,regulus,whitney,regulus@(1,1,0)", 200),
        ("product:cone,regulus,whitney", 90),
    ] {
        let inst = with_crossings(instance(kind, n, 2, 7, true)?)?;
        let r = incidence::verify_bound(&inst.surface, &inst.points, &inst.lines)?;
        ok &= r.claim_max <= r.claim_bound && r.claim_bound == 4 * r.d as usize;
        parts.push(format!(
            "D={} n={} kept={} claim_max={} <= {}",
            r.d, r.n, r.kept_points, r.claim_max, r.claim_bound
        ));
    }
    Ok((ok, parts.join("; ")))
}

fn c8_conical(reports: &[(String, BoundReport)]) -> Result<(bool, String)> {
    let bad: Vec<&str> = reports
        .iter()
        .filter(|(_, r)| r.conical > r.l1_size)
        .map(|(l, _)| l.as_str())
        .collect();
    let total: usize = reports.iter().map(|(_, r)| r.conical).sum();
    Ok((
        bad.is_empty(),
        format!(
            "{} instances, {total} conical incidences in total, violations {bad:?}",
            reports.len()
        ),
    ))
}

fn suite() -> Result<Vec<Inst>> {
    const KINDS: [(&str, usize, usize, bool); 6] = [
        ("cone", 40, 6, false),
        ("regulus", 60, 5, false),
        ("whitney", 50, 5, true),
        ("product:cone,regulus@(1,1,0)", 80, 4, false),
        ("product:cone,regulus,whitney", 120, 3, true),
        ("product:cone,regulus,whitney,regulus@(1,1,0)", 160, 3, true),
    ];
    (0..SUITE_SIZE)
        .map(|i| {
            let (kind, n, ppl, axis) = KINDS[i % KINDS.len()];
            instance_with_apex(kind, n - 4 * (i / KINDS.len()), ppl, 100 + i as u64, axis, i % 2 == 1)
        })
        .collect()
}

fn c9_ratio(reports: &[(String, BoundReport)], suite: &[Inst]) -> Result<(bool, String)> {
    let sizes_ok = reports
        .iter()
        .all(|(_, r)| r.m <= SUITE_MAX_M && r.n <= SUITE_MAX_N && r.d <= SUITE_MAX_D);
    let plane_free = suite.iter().all(|i| i.surface.factors().iter().all(|g| g.degree() > 1));
    let worst = reports.iter().map(|(_, r)| r.ratio).fold(0.0, f64::max);
    let cone = instance("cone", 20, 10, 1, false)?;
    let r = incidence::verify_bound(&cone.surface, &cone.points, &cone.lines)?;
    let fixture = r.m == 200
        && r.n == 20
        && r.incidences == 200
        && (r.rhs_main - CONE_RHS).abs() <= CONE_RHS_TOL
        && (r.ratio - CONE_RATIO).abs() <= CONE_RATIO_TOL;
    Ok((
        sizes_ok && plane_free && worst <= RATIO_CAP && fixture,
        format!(
            "{} instances, max ratio {worst:.4} <= {RATIO_CAP}; cone fixture m={} n={} I={} s={} rhs={:.4} ratio={:.4}",
            reports.len(),
            r.m,
            r.n,
            r.incidences,
            r.s,
            r.rhs_main,
            r.ratio
        ),
    ))
}

fn noncoplanar(lines: &[AffLine]) -> Result<Vec<[usize; 3]>> {
    let mut out = Vec::new();
    for i in 0..lines.len() {
        for j in i + 1..lines.len() {
            for k in j + 1..lines.len() {
                if !coplanar_triple(&lines[i], &lines[j], &lines[k])? {
                    out.push([i, j, k]);
                }
            }
        }
    }
    Ok(out)
}

fn c10_projection(checked: &mut Vec<Labeled>) -> Result<(bool, String)> {
    const KINDS: [&str; 4] = ["cone", "regulus", "whitney", "product:cone,regulus@(1,1,0)"];
    let mut worst = 0;
    let mut failures = 0;
    for t in 0..PROJECTION_TRIALS {
        let base = instance(KINDS[t % KINDS.len()], 6, 3, 1000 + t as u64, false)?;
        let dim = 4 + t % 2;
        let (lp, ll) = forge::lift_to_dim(&base.points, &base.lines, dim, 5000 + t as u64)?;
        let triples = noncoplanar(&base.lines)?;
        let i0 = count_incidences(&base.points, &base.lines);
        let pr = match project_to_3space(&lp, &ll, 9000 + t as u64) {
            Ok(p) => p,
            Err(_) => {
                failures += 1;
                continue;
            }
        };
        worst = pr
            .certificates
            .iter()
            .map(|c| c.resamples_used)
            .max()
            .unwrap_or(0)
            .max(worst);
        let kept = pr.points.len() == base.points.len()
            && pr.lines.len() == base.lines.len()
            && count_incidences(&pr.points, &pr.lines) == i0
            && pr.certificates.iter().all(|c| c.is_valid())
            && triples
                .iter()
                .all(|t| !coplanar_triple(&pr.lines[t[0]], &pr.lines[t[1]], &pr.lines[t[2]]).unwrap_or(true));
        if !kept {
            failures += 1;
        }
        checked.push((format!("projected trial {t}"), pr.points, pr.lines));
    }
    Ok((
        failures == 0 && worst <= MAX_RESAMPLES_SEEN,
        format!(
            "{PROJECTION_TRIALS} trials, {failures} failures, max resamples per step {worst} <= {MAX_RESAMPLES_SEEN}"
        ),
    ))
}

fn c11_spot() -> Result<(bool, String)> {
    let st = rhs_st(4, 4);
    let gk = rhs_gk(16, 16, 2);
    let main = rhs_main(100, 100, 4, 4);
    let planes = rhs_planes(8, 8, 0);
    let ok = (st - 14.3496).abs() <= SPOT_TOL
        && (gk - 84.158).abs() <= SPOT_TOL
        && (main - 486.177).abs() <= SPOT_TOL
        && planes == 24.0;
    Ok((
        ok,
        format!("rhs_st={st:.4} rhs_gk={gk:.4} rhs_main={main:.4} rhs_planes={planes}"),
    ))
}

fn c12_double_counting(all: &[Labeled]) -> Result<(bool, String)> {
    let mut bad = Vec::new();
    for (label, p, l) in all {
        let i = count_incidences(p, l);
        let a: usize = points_per_line(p, l).iter().sum();
        let b: usize = lines_per_point(p, l).iter().sum();
        if a != i || b != i {
            bad.push(label.clone());
        }
    }
    Ok((bad.is_empty(), format!("{} instances, violations {bad:?}", all.len())))
}

struct Board {
    failed: usize,
}

impl Board {
    fn run(&mut self, id: u32, name: &str, budget: Option<Duration>, f: impl FnOnce() -> Result<(bool, String)>) {
        let start = Instant::now();
        let res = f();
        let took = start.elapsed();
        let (pass, detail) = match res {
            Ok((ok, d)) => (ok && budget.is_none_or(|b| took <= b), d),
            Err(e) => (false, format!("error: {e}")),
        };
        let limit = budget.map_or(String::new(), |b| format!(" / {:.0} s", b.as_secs_f64()));
        println!(
            "[{}] {id:>2} {name}: {detail} ({:.2} s{limit})",
            if pass { "PASS" } else { "FAIL" },
            took.as_secs_f64()
        );
        if !pass {
            self.failed += 1;
        }
    }
}

fn main() -> ExitCode {
    let mut board = Board { failed: 0 };
    board.run(1, "klein quadric exactness", Some(KLEIN_BUDGET), c1_klein);
    board.run(2, "sphere is complex-ruled only", Some(SPHERE_BUDGET), c2_sphere);
    board.run(3, "flecnode divisibility", Some(FLECNODE_BUDGET), c3_divisibility);
    board.run(4, "flecnode degree slack", Some(FLECNODE_BUDGET), c4_degree);

    let start = Instant::now();
    let suite = match suite() {
        Ok(s) => s,
        Err(e) => {
            println!("[FAIL] suite generation: {e}");
            return ExitCode::FAILURE;
        }
    };
    let mut reports = Vec::new();
    let mut suite_error = None;
    for inst in &suite {
        match incidence::verify_bound(&inst.surface, &inst.points, &inst.lines) {
            Ok(r) => reports.push((inst.label.clone(), r)),
            Err(e) => suite_error = Some(format!("{}: {e}", inst.label)),
        }
    }
    let suite_time = start.elapsed();
    if let Some(e) = &suite_error {
        println!("[FAIL] suite: {e}");
        board.failed += 1;
    }

    board.run(5, "at most two exceptional lines", None, || c5_exceptional(&reports));
    board.run(
        6,
        "generator sums along probe lines",
        Some(GENERATOR_SUM_BUDGET),
        c6_generator_sums,
    );
    board.run(7, "claim bound 4D", Some(CLAIM_BUDGET), c7_claims);
    board.run(8, "conical incidence cap", None, || c8_conical(&reports));
    board.run(9, "bound ratio", Some(SUITE_BUDGET.saturating_sub(suite_time)), || {
        c9_ratio(&reports, &suite)
    });
    let mut checked: Vec<Labeled> = suite
        .iter()
        .map(|i| (i.label.clone(), i.points.clone(), i.lines.clone()))
        .collect();
    board.run(10, "projection certification", Some(PROJECTION_BUDGET), || {
        c10_projection(&mut checked)
    });
    board.run(11, "evaluator spot values", None, c11_spot);
    board.run(12, "double counting", None, || c12_double_counting(&checked));

    println!(
        "suite of {} instances evaluated in {:.2} s",
        suite.len(),
        suite_time.as_secs_f64()
    );
    println!("{} of 12 criteria failed", board.failed);
    if board.failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
