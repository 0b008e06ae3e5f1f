//! Acceptance criteria 1-11, one PASS/FAIL line each. Exits non-zero if any fails.

use std::f64::consts::{PI, TAU};
use std::path::{Path, PathBuf};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ruled_cli::{Command as CliCommand, JobArgs, JobConfig, Status};
use ruled_core::curve::{frenet, tangent_data};
use ruled_core::frame::{double_reflection, theta_rmf};
use ruled_core::invariants::{
    base_curve_invariants, geodesic_curvature, geodesic_torsion_paper, normal_curvature,
};
use ruled_core::ruled::{drall_span_tu, drall_span_tv, drall_span_uv, ClassificationReport, Verdict};
use ruled_core::{Curve, DirectorField, FrameOptions, Policy, Surface, SurfaceDef, ThetaPolicy, Tolerances, Vector3};

const H: f64 = 1e-4;

type Step = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn helix(a: f64, b: f64) -> Curve {
    Curve::parse("3/5*cos(s)", "3/5*sin(s)", "4/5*s", a, b).unwrap()
}

fn rmf(theta0: f64) -> Policy {
    ThetaPolicy::Rmf { theta0 }
}

fn atan_theta() -> Policy {
    ThetaPolicy::Explicit {
        theta: ruled_core::parse("atan(s)").unwrap(),
    }
}

fn surface(curve: Curve, theta: Policy, x: [&str; 3]) -> Surface {
    let d = DirectorField::parse(x[0], x[1], x[2]).unwrap();
    Surface::new(SurfaceDef::new(curve, theta, d, -1.0, 1.0).unwrap(), FrameOptions::default()).unwrap()
}

fn max(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, f64::max)
}

/// First derivative by central differences, one-sided second order at the ends.
fn diff1<F: Fn(f64) -> Vector3>(f: F, s: f64, lo: f64, hi: f64) -> Vector3 {
    if s - H < lo {
        (f(s) * -3.0 + f(s + H) * 4.0 - f(s + 2.0 * H)) / (2.0 * H)
    } else if s + H > hi {
        (f(s) * 3.0 - f(s - H) * 4.0 + f(s - 2.0 * H)) / (2.0 * H)
    } else {
        (f(s + H) - f(s - H)) / (2.0 * H)
    }
}

fn diff2<F: Fn(f64) -> Vector3>(f: F, s: f64, lo: f64, hi: f64) -> Vector3 {
    let h2 = H * H;
    if s - H < lo {
        (f(s) * 2.0 - f(s + H) * 5.0 + f(s + 2.0 * H) * 4.0 - f(s + 3.0 * H)) / h2
    } else if s + H > hi {
        (f(s) * 2.0 - f(s - H) * 5.0 + f(s - 2.0 * H) * 4.0 - f(s - 3.0 * H)) / h2
    } else {
        (f(s + H) - f(s) * 2.0 + f(s - H)) / h2
    }
}

/// Arc-length derivative of the unit tangent, by differences.
fn tangent_rate(surf: &Surface, s: f64) -> Vector3 {
    let c = surf.curve();
    let speed = surf.frame_at(s).unwrap().speed;
    diff1(|t| surf.frame_at(t).unwrap().tangent, s, c.t_min, c.t_max) / speed
}

fn base_normal(surf: &Surface, s: f64) -> Vector3 {
    surf.surface_normal(s, 0.0).unwrap()
}

fn criterion_1() -> Outcome {
    let c = helix(-5.0, 5.0);
    let grid = c.uniform_grid(100);
    let (mut dk, mut dt) = (0.0f64, 0.0f64);
    for &s in &grid {
        let f = frenet(&c, s).unwrap();
        dk = dk.max((f.kappa - 0.6).abs());
        dt = dt.max((f.tau - 0.8).abs());
    }
    outcome(
        dk < 1e-9 && dt < 1e-9,
        format!("helix at 100 samples: max|kappa-0.6|={dk:.2e} max|tau-0.8|={dt:.2e} (tol 1e-9)"),
    )
}

fn rmf_error(intervals: usize, theta0: f64) -> f64 {
    let c = helix(0.0, TAU);
    let grid = c.uniform_grid(intervals + 1);
    let table = theta_rmf(&c, theta0, &grid, 4).unwrap();
    max(table.iter().map(|&(s, th)| (th - (theta0 - 0.8 * s)).abs()))
}

/// `θ(t) = θ0 - ∫ |r'| τ` for the twisted cubic, by composite Simpson.
fn cubic_reference(t: f64, theta0: f64) -> f64 {
    let rate = |u: f64| {
        let speed = (1.0 + 4.0 * u * u + 9.0 * u.powi(4)).sqrt();
        -speed * 12.0 / (36.0 * u.powi(4) + 36.0 * u * u + 4.0)
    };
    let n = 4000;
    let h = t / n as f64;
    let mut acc = rate(0.0) + rate(t);
    for i in 1..n {
        acc += rate(i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    theta0 + acc * h / 3.0
}

fn criterion_2() -> (Outcome, Outcome) {
    let theta0 = 0.3;
    let e256 = rmf_error(256, theta0);
    let e512 = rmf_error(512, theta0);
    let ratio = e256 / e512;
    let main = outcome(
        e256 < 1e-8 && ratio >= 12.0,
        format!(
            "helix RMF angle vs -0.8 s + theta0: max err {e256:.2e} at 256 intervals (tol 1e-8), {e512:.2e} at 512; \
             halving ratio {ratio:.2} (need >= 12; torsion is constant so both errors are round-off)"
        ),
    );

    let c = Curve::parse("s", "s^2", "s^3", 0.0, 1.0).unwrap();
    let err = |n: usize| {
        let grid = c.uniform_grid(n + 1);
        let table = theta_rmf(&c, theta0, &grid, 4).unwrap();
        max(table.iter().map(|&(t, th)| (th - cubic_reference(t, theta0)).abs()))
    };
    let (e16, e32) = (err(16), err(32));
    let extra = outcome(
        e16 / e32 >= 12.0,
        format!("supplementary: twisted cubic (varying torsion) err {e16:.2e} at 16 intervals, {e32:.2e} at 32, ratio {:.1}", e16 / e32),
    );
    (main, extra)
}

fn reflection_error(samples: usize) -> f64 {
    let c = helix(0.0, TAU);
    let grid = c.uniform_grid(samples);
    let points: Vec<Vector3> = grid.iter().map(|&s| tangent_data(&c, s).unwrap().position).collect();
    let tangents: Vec<Vector3> = grid.iter().map(|&s| tangent_data(&c, s).unwrap().tangent).collect();
    let frames = double_reflection(&points, &tangents, Vector3::new(-1.0, 0.0, 0.0)).unwrap();
    max(grid.iter().zip(&frames).map(|(&s, (u, _))| {
        let n = Vector3::new(-s.cos(), -s.sin(), 0.0);
        let b = Vector3::new(0.8 * s.sin(), -0.8 * s.cos(), 0.6);
        let th = -0.8 * s;
        u.angle_to(n * th.cos() + b * th.sin())
    }))
}

fn criterion_3() -> Outcome {
    let e1000 = reflection_error(1000);
    let e500 = reflection_error(500);
    let order = (e500 / e1000).log2() / (999.0f64 / 499.0).log2();
    outcome(
        e1000 < 1e-5 && order > 3.5,
        format!("double reflection vs exact RMF: max angle {e1000:.2e} at 1000 samples (tol 1e-5), {e500:.2e} at 500; observed order {order:.2}"),
    )
}

fn criterion_4() -> Outcome {
    let surf = surface(helix(-5.0, 5.0), atan_theta(), ["s^2", "s^2", "s"]);
    let grid = surf.curve().uniform_grid(1001);
    let (mut closed, mut oracle, mut n) = (0.0f64, 0.0f64, 0);
    for &s in grid.iter().filter(|s| s.abs() >= 1e-6) {
        let b = base_curve_invariants(&surf, s).unwrap();
        closed = closed.max(b.k_g.abs());
        let nb = base_normal(&surf, s);
        let t = surf.frame_at(s).unwrap().tangent;
        oracle = oracle.max(nb.cross(t).dot(tangent_rate(&surf, s)).abs());
        n += 1;
    }
    outcome(
        closed < 1e-9 && oracle < 1e-5,
        format!("geodesic example on {n} samples: max|k_g| closed {closed:.2e} (tol 1e-9), Darboux oracle {oracle:.2e} (tol 1e-5)"),
    )
}

fn criterion_5() -> Outcome {
    let surf = surface(helix(-5.0, 5.0), atan_theta(), ["s^2", "s", "-s^2"]);
    let c = surf.curve().clone();
    let grid = c.uniform_grid(1001);
    let (mut closed, mut oracle, mut n) = (0.0f64, 0.0f64, 0);
    for &s in grid.iter().filter(|s| s.abs() >= 1e-6) {
        let b = base_curve_invariants(&surf, s).unwrap();
        closed = closed.max(b.k_n.abs());
        let speed = surf.frame_at(s).unwrap().speed;
        let r2 = diff2(|t| tangent_data(&c, t).unwrap().position, s, c.t_min, c.t_max) / (speed * speed);
        oracle = oracle.max(r2.dot(base_normal(&surf, s)).abs());
        n += 1;
    }
    outcome(
        closed < 1e-9 && oracle < 1e-5,
        format!("asymptotic example on {n} samples: max|k_n| closed {closed:.2e} (tol 1e-9), <r'', N> oracle {oracle:.2e} (tol 1e-5)"),
    )
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let (mut pyth, mut prod) = (0.0f64, 0.0f64);
    for _ in 0..1000 {
        let x2 = rng.gen_range(-10.0..10.0);
        let x3 = rng.gen_range(-10.0..10.0);
        let th = rng.gen_range(-TAU..TAU);
        let k = rng.gen_range(0.01..5.0);
        let kg = geodesic_curvature(x2, x3, th, k).unwrap();
        let kn = normal_curvature(x2, x3, th, k).unwrap();
        let tg = geodesic_torsion_paper(x2, x3, th, k).unwrap();
        pyth = pyth.max((kg * kg + kn * kn - k * k).abs() / (k * k));
        prod = prod.max((tg + kg * kn).abs() / (k * k));
    }
    outcome(
        pyth < 1e-12 && prod < 1e-12,
        format!("1000 random draws: k_g^2+k_n^2=kappa^2 rel err {pyth:.2e}, tau_g=-k_g k_n rel err {prod:.2e} (tol 1e-12)"),
    )
}

fn bundled(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../cli/examples").join(name)
}

fn classify_bundled(name: &str) -> ClassificationReport<f64> {
    let cfg = JobConfig::load(&bundled(name)).unwrap();
    let surf = Surface::new(cfg.surface_def().unwrap(), FrameOptions::default()).unwrap();
    surf.classify(cfg.grid.n_s, cfg.grid.n_v, &cfg.tolerances()).unwrap()
}

fn criterion_7() -> Outcome {
    let tol = Tolerances::default();
    let mut notes = Vec::new();
    let mut pass = true;
    let mut reports = Vec::new();

    let t = surface(helix(-5.0, 5.0), rmf(0.0), ["1", "0", "0"]);
    let grid = t.curve().uniform_grid(101);
    let p_max = max(grid.iter().map(|&s| t.distribution_parameter(s).unwrap().value.abs()));
    let r = t.classify(101, 11, &tol).unwrap();
    let ok = p_max == 0.0 && r.developable.verdict == Verdict::Yes;
    pass &= ok;
    notes.push(format!("(a) X=T max|P|={p_max:.1e} verdict {:?}", r.developable.verdict));
    reports.push(("X=T", r));

    let u = surface(helix(-5.0, 5.0), rmf(0.0), ["0", "1", "0"]);
    let det = max(grid.iter().map(|&s| {
        let speed = u.frame_at(s).unwrap().speed;
        (speed * u.drall_determinant(s).unwrap()).abs()
    }));
    pass &= det <= 1e-10;
    notes.push(format!("(b) X=U max|det|={det:.1e}"));
    reports.push(("X=U", u.classify(101, 11, &tol).unwrap()));

    let yes = surface(helix(1.0, 5.0), rmf(0.0), ["0", "2*s", "s"]).classify(81, 11, &tol).unwrap();
    let no = surface(helix(1.0, 5.0), rmf(0.0), ["0", "s^2", "s"]).classify(81, 11, &tol).unwrap();
    let ok = yes.developable.verdict == Verdict::Yes
        && no.developable.verdict == Verdict::No
        && no.developable.max_abs_det > 0.1;
    pass &= ok;
    notes.push(format!(
        "(c) x2=2s {:?}, x2=s^2 {:?} with max|det|={:.2}",
        yes.developable.verdict, no.developable.verdict, no.developable.max_abs_det
    ));
    reports.push(("x2=2s", yes));
    reports.push(("x2=s^2", no));
    for name in ["example1.json", "example2.json", "corollary7.json", "corollary8.json"] {
        reports.push((name, classify_bundled(name)));
    }

    let mut bad = Vec::new();
    for (name, r) in &reports {
        let k = r.curvature_check.max_abs_k;
        let consistent = match r.developable.verdict {
            Verdict::Yes => k < 1e-5,
            Verdict::No => k > 1e-5,
            Verdict::Borderline => false,
        };
        if !consistent {
            bad.push(*name);
        }
    }
    pass &= bad.is_empty();
    notes.push(format!("(d) verdict vs max|K| consistent on {}/{} surfaces", reports.len() - bad.len(), reports.len()));
    outcome(pass, notes.join("; "))
}

fn random_coefficient(rng: &mut ChaCha8Rng) -> String {
    let a: f64 = rng.gen_range(-1.0..1.0);
    let b: f64 = rng.gen_range(-1.0..1.0);
    let c: f64 = rng.gen_range(-0.3..0.3);
    let d: f64 = rng.gen_range(-1.0..1.0);
    let e: f64 = rng.gen_range(0.2..2.0);
    format!("{a} + {b}*s + {c}*s^2 + {d}*sin({e}*s)")
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst = 0.0f64;
    for _ in 0..5 {
        let x: [String; 3] = std::array::from_fn(|_| random_coefficient(&mut rng));
        let surf = surface(helix(-3.0, 3.0), rmf(rng.gen_range(-PI..PI)), [&x[0], &x[1], &x[2]]);
        let grid = Curve::parse("s", "0", "0", -2.9, 2.9).unwrap().uniform_grid(59);
        for &s in &grid {
            let f = surf.frame_at(s).unwrap();
            let closed = f.from_frame(surf.director_derivative_closed(s).unwrap());
            let fd = (surf.ruling(s + H).unwrap().director - surf.ruling(s - H).unwrap().director) / (2.0 * H * f.speed);
            worst = worst.max((closed - fd).max_abs_component());
        }
    }
    outcome(
        worst < 1e-6,
        format!("5 random director fields under RMF: max componentwise |X'_closed - X'_fd| = {worst:.2e} (tol 1e-6, step 1e-4)"),
    )
}

fn criterion_9() -> Outcome {
    let cases: [(&str, [&str; 3]); 3] = [
        ("span{T,U}", ["s", "1 + s^2", "0"]),
        ("span{T,V}", ["cos(s)", "0", "s"]),
        ("span{U,V}", ["0", "s^2", "s"]),
    ];
    let mut parts = Vec::new();
    let mut pass = true;
    for (i, (name, x)) in cases.iter().enumerate() {
        let surf = surface(helix(-5.0, 5.0), rmf(0.7), *x);
        let mut worst = 0.0f64;
        let mut used = 0;
        for s in surf.curve().uniform_grid(201) {
            let Ok(general) = surf.distribution_parameter(s) else { continue };
            let f = surf.frame_at(s).unwrap();
            let c = surf.coefficients(s).unwrap();
            let th = f.theta.unwrap();
            let special = match i {
                0 => drall_span_tu(&c, f.kappa, th),
                1 => drall_span_tv(&c, f.kappa, th),
                _ => drall_span_uv(&c, f.kappa, th),
            };
            if let Some(p) = special {
                worst = worst.max((p - general.value).abs());
                used += 1;
            }
        }
        pass &= worst < 1e-9 && used > 150;
        parts.push(format!("{name} {worst:.1e} ({used} samples)"));
    }
    outcome(pass, format!("special-case P vs det/|X'|^2: {} (tol 1e-9)", parts.join(", ")))
}

fn criterion_10() -> Outcome {
    let generic = surface(helix(-5.0, 5.0), rmf(1.0), ["s", "1 + s^2", "cos(s)"]);
    let c = generic.curve().clone();
    let mut tau_err = 0.0f64;
    for s in c.uniform_grid(201) {
        let speed = generic.frame_at(s).unwrap().speed;
        let n = base_normal(&generic, s);
        let dn = diff1(|t| base_normal(&generic, t), s, c.t_min, c.t_max) / speed;
        let fd = n.cross(dn).dot(tangent_rate(&generic, s));
        let closed = base_curve_invariants(&generic, s).unwrap().tau_g_paper;
        tau_err = tau_err.max((fd - closed).abs());
    }

    let constant = surface(helix(-5.0, 5.0), rmf(0.4), ["0.3", "2", "-1"]);
    let (mut rho, mut t3) = (0.0f64, 0.0f64);
    for s in c.uniform_grid(201) {
        let f = constant.frame_at(s).unwrap();
        let n = base_normal(&constant, s);
        let dn = diff1(|t| base_normal(&constant, t), s, c.t_min, c.t_max) / f.speed;
        rho = rho.max(dn.dot(n.cross(f.tangent)).abs());
        t3 = t3.max(base_curve_invariants(&constant, s).unwrap().residual_t3.abs());
    }
    outcome(
        tau_err < 1e-5 && rho < 1e-6 && t3 > 1e-3,
        format!(
            "fd <N x N', T'> vs tau_g_paper: {tau_err:.2e} (tol 1e-5); constant (x2,x3) under RMF: \
             standard rho {rho:.2e} (tol 1e-6) while residual_T3 reaches {t3:.3}"
        ),
    )
}

fn run_twice(command: fn(JobArgs) -> CliCommand, file: &str) -> (bool, usize) {
    let outs: Vec<Vec<u8>> = (0..2)
        .map(|_| {
            let dir = tempfile::tempdir().unwrap();
            let out = dir.path().join(file);
            let args = JobArgs {
                config: bundled("example1.json"),
                out: Some(out.clone()),
                samples: None,
                format: None,
                tol_dev: None,
            };
            assert_eq!(ruled_cli::run(&command(args)).unwrap(), Status::Ok);
            std::fs::read(out).unwrap()
        })
        .collect();
    (outs[0] == outs[1], outs[0].len())
}

fn criterion_11() -> Outcome {
    let (mesh_same, mesh_len) = run_twice(CliCommand::Surface, "example1.obj");
    let (report_same, report_len) = run_twice(CliCommand::Verify, "verify.json");
    outcome(
        mesh_same && report_same,
        format!(
            "repeated runs on example1.json: surface OBJ ({mesh_len} bytes) identical={mesh_same}, \
             verify report ({report_len} bytes) identical={report_same}"
        ),
    )
}

fn main() {
    let mut failed = Vec::new();
    let mut show = |id: &str, o: &Outcome, started: Instant, counted: bool| {
        let tag = if o.pass { "PASS" } else { "FAIL" };
        println!("criterion {id:>3} {tag} [{:.2}s] {}", started.elapsed().as_secs_f64(), o.detail);
        if !o.pass && counted {
            failed.push(id.to_string());
        }
    };
    println!("acceptance suite");
    let t = Instant::now();
    show("1", &criterion_1(), t, true);
    let t = Instant::now();
    let (c2, c2_extra) = criterion_2();
    show("2", &c2, t, true);
    show("2+", &c2_extra, t, false);
    let steps: [Step; 9] = [
        ("3", criterion_3),
        ("4", criterion_4),
        ("5", criterion_5),
        ("6", criterion_6),
        ("7", criterion_7),
        ("8", criterion_8),
        ("9", criterion_9),
        ("10", criterion_10),
        ("11", criterion_11),
    ];
    for (id, f) in steps {
        let t = Instant::now();
        show(id, &f(), t, true);
    }
    if failed.is_empty() {
        println!("acceptance: all 11 criteria passed");
    } else {
        println!("acceptance: {} of 11 criteria failed: {}", failed.len(), failed.join(", "));
        std::process::exit(1);
    }
}
