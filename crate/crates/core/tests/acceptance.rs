//! Acceptance suite: one line per criterion, nonzero exit if any fails.

use std::path::Path;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::Rng;

use adialab::dynamics::{evolve, find_constant_time, ConstantTimeOptions, DEFAULT_TOLERANCE};
use adialab::schedule::sweep_scaling;
use adialab::spectra::{scan, validate_closed_forms, DEFAULT_POINTS};
use adialab::theorems::{case_rng, crossing_campaign, variant_campaign};
use adialab::{InterpolantSpec, Overlap, PathModel};

type Check = Result<String, String>;

fn ensure(ok: bool, detail: String) -> Check {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn within(elapsed: Duration, limit_s: f64) -> Result<(), String> {
    let secs = elapsed.as_secs_f64();
    if secs < limit_s {
        Ok(())
    } else {
        Err(format!("took {secs:.2} s, limit {limit_s} s"))
    }
}

fn closed_forms() -> Check {
    let start = Instant::now();
    let mut worst = 0.0_f64;
    for i in 0..50 {
        let mut rng = case_rng(7, i);
        let r = rng.random::<f64>().sqrt();
        let phi = rng.random_range(0.0..std::f64::consts::TAU);
        let o = Overlap::new(r * phi.cos(), r * phi.sin()).map_err(|e| e.to_string())?;
        let x = rng.random_range(0.0..10.0);
        let general = PathModel::GeneralFG(InterpolantSpec::polynomial(x).map_err(|e| e.to_string())?);
        for model in [PathModel::Driving, general] {
            worst = worst.max(validate_closed_forms(&model, &o, 501).map_err(|e| e.to_string())?);
        }
    }
    within(start.elapsed(), 5.0)?;
    ensure(worst <= 1e-12, format!("max deviation {worst:.3e}"))
}

fn min_gaps() -> Check {
    let zero = Overlap::orthogonal();
    let driving = scan(&PathModel::Driving, &zero, DEFAULT_POINTS).map_err(|e| e.to_string())?;
    let linear = scan(&PathModel::Linear, &zero, DEFAULT_POINTS).map_err(|e| e.to_string())?;
    let o = Overlap::real(0.1).map_err(|e| e.to_string())?;
    let spec = InterpolantSpec::polynomial(1.0 / o.magnitude()).map_err(|e| e.to_string())?;
    let general = scan(&PathModel::GeneralFG(spec), &o, DEFAULT_POINTS).map_err(|e| e.to_string())?;
    let ok = (driving.delta_min - 0.5).abs() <= 1e-10
        && linear.delta_min == 0.0
        && linear.degenerate
        && (general.delta_min - 0.6).abs() <= 1e-10;
    ensure(
        ok,
        format!(
            "driving {:.12}, linear {} (degenerate {}), general {:.12}",
            driving.delta_min, linear.delta_min, linear.degenerate, general.delta_min
        ),
    )
}

const SWEEP: [f64; 4] = [0.02, 0.05, 0.1, 0.2];

fn scaling_separation() -> Check {
    let start = Instant::now();
    let sweep = sweep_scaling(|_| Ok(PathModel::Linear), &SWEEP, 0.1, DEFAULT_POINTS)
        .map_err(|e| e.to_string())?;
    within(start.elapsed(), 30.0)?;
    let g = sweep.slope_global.ok_or("no global slope")?;
    let l = sweep.slope_local.ok_or("no local slope")?;
    ensure(
        (g + 2.0).abs() <= 0.1 && (l + 1.0).abs() <= 0.1,
        format!("global slope {g:.4}, local slope {l:.4}"),
    )
}

fn energy_tradeoff() -> Check {
    let family = |o: &Overlap| Ok(PathModel::GeneralFG(InterpolantSpec::polynomial(1.0 / o.magnitude())?));
    let sweep = sweep_scaling(family, &SWEEP, 0.1, DEFAULT_POINTS).map_err(|e| e.to_string())?;
    let slope = sweep.slope_peak_energy.ok_or("no energy slope")?;
    let mut worst_offset = 0.0_f64;
    for &m in &SWEEP {
        let o = Overlap::real(m).map_err(|e| e.to_string())?;
        let p = scan(&family(&o).map_err(|e: adialab::Error| e.to_string())?, &o, DEFAULT_POINTS)
            .map_err(|e| e.to_string())?;
        worst_offset = worst_offset.max((p.s_peak - 0.5).abs());
    }
    ensure(
        (slope + 1.0).abs() <= 0.1 && worst_offset <= 1e-3,
        format!("slope {slope:.4}, max |s_peak - 0.5| {worst_offset:.2e}"),
    )
}

fn theorem_one() -> Check {
    let start = Instant::now();
    let c = crossing_campaign(1000, 42, 0.1, DEFAULT_POINTS).map_err(|e| e.to_string())?;
    within(start.elapsed(), 60.0)?;
    let all = c
        .trials
        .iter()
        .all(|t| t.crossing.gap_at_root <= 1e-10 && t.runtime.is_unbounded());
    ensure(
        all && c.counterexamples == 0 && c.trials.len() == 1000,
        format!("{} trials, {} counterexamples", c.trials.len(), c.counterexamples),
    )
}

fn theorem_two() -> Check {
    let c = variant_campaign(200, 42, 0.1, DEFAULT_POINTS).map_err(|e| e.to_string())?;
    let all = c.trials.iter().all(|t| {
        let r = &t.report;
        r.h_at_0 == 0.0
            && r.h_at_1 == 0.0
            && r.max_ground_energy <= 1e-12
            && r.delta_min <= 1e-10
            && r.runtime.is_unbounded()
    });
    ensure(
        all && c.counterexamples == 0 && c.trials.len() == 200,
        format!("{} trials, {} counterexamples", c.trials.len(), c.counterexamples),
    )
}

fn dynamics() -> Check {
    let start = Instant::now();
    let zero = Overlap::orthogonal();
    let run = |m: &PathModel, t: f64| evolve(m, &zero, t, DEFAULT_TOLERANCE).map_err(|e| e.to_string());
    let driving = run(&PathModel::Driving, 100.0)?;
    let mut drift = driving.norm_drift;
    let mut worst_linear = 0.0_f64;
    for t in [10.0, 100.0, 1000.0] {
        let r = run(&PathModel::Linear, t)?;
        worst_linear = worst_linear.max(r.fidelity);
        drift = drift.max(r.norm_drift);
    }
    within(start.elapsed(), 60.0)?;
    ensure(
        driving.fidelity >= 0.99 && worst_linear <= 1e-8 && drift <= 1e-8,
        format!(
            "driving fidelity {:.6}, linear max fidelity {worst_linear:.1e}, max drift {drift:.1e}",
            driving.fidelity
        ),
    )
}

fn constant_time() -> Check {
    let opts = ConstantTimeOptions::default();
    let mut times = Vec::new();
    for a in [0.0, 0.01, 0.1] {
        let o = Overlap::real(a).map_err(|e| e.to_string())?;
        let r = find_constant_time(&PathModel::Driving, &o, 0.99, &opts).map_err(|e| e.to_string())?;
        times.push(r.t_star().ok_or(format!("target unreachable at a = {a}"))?);
    }
    let hi = times.iter().cloned().fold(f64::MIN, f64::max);
    let lo = times.iter().cloned().fold(f64::MAX, f64::min);
    ensure(
        hi <= 2.0 * lo,
        format!(
            "T* = {:.3}, {:.3}, {:.3} (ratio {:.3})",
            times[0],
            times[1],
            times[2],
            hi / lo
        ),
    )
}

fn cli_run(dir: &Path, tag: &str, args: &[&str]) -> Result<Vec<u8>, String> {
    let path = dir.join(format!("{tag}.out"));
    let path_str = path.to_str().ok_or("non-utf8 temp path")?.to_string();
    let mut argv = vec!["adialab".to_string()];
    argv.extend(args.iter().map(|s| s.to_string()));
    argv.extend(["--output".to_string(), path_str]);
    let code = adialab::cli::run_command(argv);
    if code != 0 {
        return Err(format!("`{}` exited {code}", args.join(" ")));
    }
    std::fs::read(&path).map_err(|e| e.to_string())
}

fn determinism() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let commands: [&[&str]; 9] = [
        &["spectrum", "--model", "driving", "--a", "0.1,0.05"],
        &["schedule", "--model", "general", "--x", "inv", "--a", "0.1,0"],
        &["evolve", "--model", "driving", "--T", "20", "--trajectory"],
        &["theorem1", "--trials", "50", "--seed", "9"],
        &["theorem2", "--trials", "20", "--seed", "9", "--format", "json"],
        &["sweep", "--model", "linear"],
        &["validate", "--trials", "5"],
        &["spectrum", "--model", "variant", "--fg", "0.3:1:0.2", "--fg", "0.7:0.4:1.1", "--format", "json"],
        &["evolve", "--model", "driving", "--target", "0.9", "--a", "0.05,0"],
    ];
    for (i, args) in commands.iter().enumerate() {
        let first = cli_run(dir.path(), &i.to_string(), args)?;
        let second = cli_run(dir.path(), &i.to_string(), args)?;
        if first != second || first.is_empty() {
            return Err(format!("`{}` output differs between runs", args.join(" ")));
        }
    }
    Ok(format!("{} commands byte-identical across repeated runs", commands.len()))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Check); 9] = [
        ("C1 closed-form spectra match the eigensolver", closed_forms),
        ("C2 minimum gap reproductions", min_gaps),
        ("C3 linear path global/local scaling separation", scaling_separation),
        ("C4 energy-speed tradeoff with x = 1/|a|", energy_tradeoff),
        ("C5 gap crossing for 1000 random interpolants", theorem_one),
        ("C6 zero-ground-energy variant for 200 random interpolants", theorem_two),
        ("C7 Schrodinger dynamics at zero overlap", dynamics),
        ("C8 constant-time driving path, T* within factor 2", constant_time),
        ("C9 CLI output determinism", determinism),
    ];
    let mut failures = 0;
    for (name, check) in criteria {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("[PASS] {name}: {detail} ({secs:.2} s)"),
            Err(detail) => {
                failures += 1;
                println!("[FAIL] {name}: {detail} ({secs:.2} s)");
            }
        }
    }
    println!("acceptance: {} passed, {failures} failed", criteria.len() - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
