use compressed_opt::compressors::CompressorKind;
use compressed_opt::diagnostics::fit_series;
use compressed_opt::harness::{self, MethodConfig, ProblemConfig, RunConfig, ScheduleConfig};
use compressed_opt::problems::ProblemKind;

fn f_series(cfg: &RunConfig) -> (Vec<f64>, bool) {
    let resolved = harness::resolve(cfg).unwrap();
    let record = harness::simulate(&resolved, 1).unwrap();
    let m = compressed_opt::diagnostics::compute_metrics(&record, &resolved.problem, &resolved.reference);
    (m.rows.iter().map(|r| r.f).collect(), record.diverged)
}

fn main() {
    let rounds = 1500u64;
    let base = RunConfig {
        problem: ProblemConfig {
            kind: ProblemKind::Logistic, n_clients: 4, d: 20, samples_per_client: 10,
            heterogeneity: 0.0, sigma2: 0.0, lambda_reg: 1e-6, seed: 42,
        },
        method: MethodConfig::Adef,
        compressor: Some(CompressorKind::TopK { k: 2 }),
        schedule: Some(ScheduleConfig::ExperimentGamma { gamma: None, delta: None }),
        rounds,
        seeds: vec![1],
        grid: None,
        write_traces: false,
        export_data: false,
        reference_tolerance: 1e-10,
        reference_max_iterations: 5_000_000,
    };

    // ADEF grid
    let mut best = (f64::INFINITY, 0.0);
    for &g in &harness::default_grid() {
        let mut c = base.clone();
        c.schedule = Some(ScheduleConfig::ExperimentGamma { gamma: Some(g), delta: None });
        let (s, div) = f_series(&c);
        let last = *s.last().unwrap();
        println!("adef gamma={g}: final {last:.3e} div={div}");
        if !div && last.is_finite() && last < best.0 { best = (last, g); }
    }
    let gamma = best.1;
    let mut c = base.clone();
    c.schedule = Some(ScheduleConfig::ExperimentGamma { gamma: Some(gamma), delta: None });
    let (adef, _) = f_series(&c);
    println!("selected adef gamma = {gamma}, F[1499] = {:.3e}", adef[1499]);
    for (s, e) in [(150u64, 1500u64), (200, 1500), (300, 1500)] {
        match fit_series(&adef[1..], s, e) {
            Ok(fit) => println!("  adef window [{s},{e}): slope {:.3} r2 {:.3}", fit.slope, fit.r_squared),
            Err(err) => println!("  adef window [{s},{e}): {err}"),
        }
    }

    // EF grid
    let mut best = (f64::INFINITY, 0.0);
    for &g in &harness::default_grid() {
        let mut c = base.clone();
        c.method = MethodConfig::Ef { eta: Some(g) };
        c.schedule = None;
        let (s, div) = f_series(&c);
        let last = *s.last().unwrap();
        println!("ef eta={g}: final {last:.3e} div={div}");
        if !div && last.is_finite() && last < best.0 { best = (last, g); }
    }
    let eta = best.1;
    let mut c = base.clone();
    c.method = MethodConfig::Ef { eta: Some(eta) };
    c.schedule = None;
    let (ef, _) = f_series(&c);
    println!("selected ef eta = {eta}, F[1499] = {:.3e}", ef[1499]);
    for (s, e) in [(150u64, 1500u64), (200, 1500), (300, 1500)] {
        match fit_series(&ef[1..], s, e) {
            Ok(fit) => println!("  ef window [{s},{e}): slope {:.3} r2 {:.3}", fit.slope, fit.r_squared),
            Err(err) => println!("  ef window [{s},{e}): {err}"),
        }
    }
}
