//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero when any criterion fails.

use std::fs;
use std::path::Path;
use std::process::Command as Process;
use std::time::Instant;

use bometro_cli::selftest::{random_density, random_tangent};
use bosonic_metrology::bounds::{closed_form_h, hnls_test, numeric_h_optimization, rate_bound, theorem1_rate_min};
use bosonic_metrology::cat::{protocol_optimum, qec_code_check};
use bosonic_metrology::fock::{
    fock_counting_fisher, max_snr_check, parity_fisher_squeezed_vacuum, sld_qfi,
    thermal_weight_derivatives, thermal_weights, trajectory, IntegratorOptions,
};
use bosonic_metrology::gaussian::evolve_moments;
use bosonic_metrology::model::{projector, quadrature_moments};
use bosonic_metrology::report::{self, fock_passive_fi, Command, RunConfig};
use bosonic_metrology::{
    make_gaussian, DenseOperator, Error, FockSpace, HamiltonianKind, LindbladModel, ParameterTag,
};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Outcome = Result<(bool, String), String>;

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn poisson(space: &FockSpace, mean: f64) -> DenseOperator {
    let mut rho = space.zeros();
    let mut p = (-mean).exp();
    for k in 0..space.dim() {
        if k > 0 {
            p *= mean / k as f64;
        }
        rho[(k, k)] = Complex64::new(p, 0.0);
    }
    rho
}

fn table_constants() -> Outcome {
    let rep = report::table_summary(&RunConfig::defaults(Command::Table)).map_err(err)?;
    let k = rep.data.column_index("ratio").ok_or("no ratio column")?;
    let ratio = |label: &str| -> Result<f64, String> {
        let i = rep.data.labels.iter().position(|l| l == label).ok_or(format!("no {label} row"))?;
        rep.data.rows[i][k].ok_or(format!("{label} ratio missing"))
    };
    let inv_e = (-1.0f64).exp();
    let (w, a, g) = (ratio("omega")?, ratio("alpha")?, ratio("gamma")?);
    let ok = (w - inv_e).abs() <= 1e-3 && (a - 0.815).abs() <= 0.005 && (g - inv_e).abs() <= 1e-3;
    Ok((ok, format!("omega {w:.6}, alpha {a:.6}, loss {g:.6} (1/e = {inv_e:.6})")))
}

fn cat_optimum() -> Outcome {
    let o = protocol_optimum(4.0, 1.0).map_err(err)?;
    let ok = (o.t_star - 1.26).abs() <= 0.01 && (o.rate_coefficient - 6.56).abs() <= 0.02;
    Ok((ok, format!("t*Gamma = {:.4}, rate = {:.4} N^2/Gamma (want 1.26, 6.56)", o.t_star, o.rate_coefficient)))
}

fn closed_vs_numeric_h() -> Outcome {
    let space = FockSpace::new(80).map_err(err)?;
    let mut worst = 0.0f64;
    for target in [ParameterTag::Frequency, ParameterTag::Displacement, ParameterTag::Squeezing] {
        for n_ph in [1.0, 5.0, 20.0] {
            let rho = poisson(&space, n_ph);
            for n_env in [0.05, 0.1, 1.0] {
                let model = LindbladModel::for_target(target, 1.0, n_env).map_err(err)?;
                let (_, closed) = closed_form_h(&model, n_ph).map_err(err)?;
                let numeric = numeric_h_optimization(&model, &rho, &space).map_err(err)?;
                worst = worst.max((numeric.a_expect - closed).abs() / closed);
            }
        }
    }
    let model = LindbladModel::for_target(ParameterTag::Squeezing, 1.0, 0.0).map_err(err)?;
    let closed_inf = matches!(closed_form_h(&model, 5.0), Err(Error::Unbounded(_)));
    let numeric_inf = matches!(numeric_h_optimization(&model, &poisson(&space, 5.0), &space), Err(Error::Unbounded(_)));
    let hnls = hnls_test(&model, &space).map_err(err)?;
    let ok = worst < 1e-6 && closed_inf && numeric_inf;
    Ok((
        ok,
        format!("max relative gap {worst:.2e}; squeezing at n_E=0 infeasible: closed {closed_inf}, numeric {numeric_inf} (hnls {hnls})"),
    ))
}

fn temperature_saturation() -> Outcome {
    let (g, n) = (1.0, 0.1);
    let model = LindbladModel::for_target(ParameterTag::Temperature, g, n).map_err(err)?;
    let space = FockSpace::new(40).map_err(err)?;
    let t = 1.0 / (10.0 * 5.0 * g);
    let rate = fock_counting_fisher(5, &model, t, &space).map_err(err)? / t;
    let want_rate = rate_bound(&model, 5.0).map_err(err)?.rate_bound;
    let passive = fock_passive_fi(5, g, n, 20.0 / g).map_err(err)?;
    let want_passive = 1.0 / (n * (1.0 + n));
    let e1 = (rate - want_rate).abs() / want_rate;
    let e2 = (passive - want_passive).abs() / want_passive;
    Ok((
        e1 <= 0.05 && e2 <= 0.02,
        format!(
            "fast rate {rate:.3} vs {want_rate:.3} ({:.1}%), passive FI {passive:.4} vs {want_passive:.4} ({:.2}%)",
            100.0 * e1,
            100.0 * e2
        ),
    ))
}

fn loss_parity() -> Outcome {
    let (g, n, photons) = (1.0, 0.1, 1.0f64);
    let model = LindbladModel::for_target(ParameterTag::Loss, g, n).map_err(err)?;
    let space = FockSpace::new(70).map_err(err)?;
    let t = 1e-3 / (photons * g * (1.0 + n));
    let pf = parity_fisher_squeezed_vacuum(photons.sqrt().asinh(), &model, t, &space).map_err(err)?;
    let rate = pf.parity_fi / t;
    let want = (photons * (1.0 + 2.0 * n) + n) / g;
    let e = (rate - want).abs() / want;
    Ok((e <= 0.02, format!("parity FI rate {rate:.5} vs {want:.5} ({:.2}%)", 100.0 * e)))
}

fn gaussian_oracle() -> Outcome {
    let cases: [(HamiltonianKind, ParameterTag, f64, Complex64, f64, f64); 4] = [
        (HamiltonianKind::Frequency(0.7), ParameterTag::Frequency, 0.1, Complex64::new(10f64.sqrt(), 0.0), 0.0, 0.0),
        (HamiltonianKind::Frequency(0.3), ParameterTag::Frequency, 0.0, Complex64::new(0.0, 0.0), 1.2, 0.0),
        (HamiltonianKind::Displacement(0.4), ParameterTag::Displacement, 0.2, Complex64::new(1.0, 1.0), 0.8, 0.4),
        (HamiltonianKind::None, ParameterTag::Loss, 0.5, Complex64::new(0.0, 2.0), 1.0, 1.1),
    ];
    let times: Vec<f64> = (1..=10).map(|k| 0.5 * k as f64).collect();
    let mut worst = 0.0f64;
    for (h, target, n_env, alpha, r, axis) in cases {
        let model = LindbladModel::new(h, 1.0, n_env, target).map_err(err)?;
        let space = FockSpace::new(120).map_err(err)?;
        let psi = space.gaussian_pure(alpha, r, axis, 1e-10).map_err(err)?;
        let rho0 = projector(&psi);
        let g0 = make_gaussian(alpha, r, axis).map_err(err)?;
        let traj = trajectory(&rho0, false, &model, &times, &space, IntegratorOptions::default()).map_err(err)?;
        for s in &traj {
            let fock = quadrature_moments(&s.rho, &space);
            let gauss = evolve_moments(&g0, &model, s.t).map_err(err)?;
            for i in 0..2 {
                worst = worst.max((fock.mean[i] - gauss.mean[i]).abs());
                for j in 0..2 {
                    worst = worst.max((fock.cov[i][j] - gauss.cov[i][j]).abs());
                }
            }
        }
    }
    Ok((worst <= 1e-6, format!("max moment difference {worst:.2e} over t in [0.5, 5]")))
}

fn qfi_identities() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst = 0.0f64;
    for k in 0..50 {
        let dim = 2 + k % 9;
        let rho = random_density(dim, &mut rng);
        let drho = random_tangent(dim, &mut rng);
        let (q, l) = sld_qfi(&rho, &drho).map_err(err)?;
        let s = max_snr_check(&rho, &drho, &l).map_err(err)?;
        worst = worst.max((q - s).abs() / q.max(1.0));
    }
    let mut worst_thermal = 0.0f64;
    for n in [0.05, 0.1, 0.5, 1.0, 2.0] {
        let dim = 120;
        let p = thermal_weights(n, dim);
        let dp = thermal_weight_derivatives(n, dim);
        let rho = DenseOperator::from_diagonal(&p.iter().map(|&x| Complex64::new(x, 0.0)).collect::<Vec<_>>().into());
        let drho = DenseOperator::from_diagonal(&dp.iter().map(|&x| Complex64::new(x, 0.0)).collect::<Vec<_>>().into());
        let (q, _) = sld_qfi(&rho, &drho).map_err(err)?;
        let want = 1.0 / (n * (1.0 + n));
        worst_thermal = worst_thermal.max((q - want).abs() / want);
    }
    Ok((
        worst <= 1e-8 && worst_thermal <= 1e-8,
        format!("snr at SLD vs QFI {worst:.2e} (50 states), thermal QFI {worst_thermal:.2e}"),
    ))
}

fn bound_dominance() -> Outcome {
    let mut cfg = RunConfig::defaults(Command::FigureFrequency);
    cfg.points = 200;
    let fre = report::figure_frequency(&cfg).map_err(err)?;
    let temp = report::figure_temperature(&RunConfig::defaults(Command::FigureTemperature)).map_err(err)?;
    let audited = fre.audit.checked + temp.audit.checked;
    let violations = fre.audit.violations.len() + temp.audit.violations.len();

    // trajectory rate bound against a five-point derivative of the QFI
    let model = LindbladModel::for_target(ParameterTag::Frequency, 1.0, 0.1).map_err(err)?;
    let space = FockSpace::new(30).map_err(err)?;
    let rho0 = projector(&space.coherent(Complex64::new(2f64.sqrt(), 0.0), 1e-12).map_err(err)?);
    let h = 1e-2;
    let centres = [0.1, 0.3, 0.6, 1.0, 2.0, 3.0];
    let mut times = Vec::new();
    for &c in &centres {
        for k in -2..=2 {
            times.push(c + k as f64 * h);
        }
    }
    let traj = trajectory(&rho0, true, &model, &times, &space, IntegratorOptions::default()).map_err(err)?;
    let qfi: Vec<f64> = traj
        .iter()
        .map(|s| sld_qfi(&s.rho, s.drho.as_ref().unwrap()).map(|(q, _)| q))
        .collect::<Result<_, _>>()
        .map_err(err)?;
    let mut slack = f64::INFINITY;
    for (i, _) in centres.iter().enumerate() {
        let q = &qfi[5 * i..5 * i + 5];
        let didt = (q[0] - 8.0 * q[1] + 8.0 * q[3] - q[4]) / (12.0 * h);
        let (_, rate) = theorem1_rate_min(&traj[5 * i + 2].rho, &model, q[2], &space).map_err(err)?;
        slack = slack.min(rate - didt);
    }
    Ok((
        violations == 0 && slack >= -1e-6,
        format!("{audited} figure cells audited, {violations} above a bound; min(rate − dI/dt) = {slack:.3e}"),
    ))
}

fn code_check() -> Outcome {
    let model = LindbladModel::for_target(ParameterTag::Loss, 1.0, 0.0).map_err(err)?;
    let space = FockSpace::new(12).map_err(err)?;
    let mut conditions = true;
    let mut coefficients = true;
    let mut parts = Vec::new();
    for n in [3, 4, 6] {
        let r = qec_code_check(n, &model, &space).map_err(err)?;
        conditions &= r.passed();
        let want = 4.0 * n as f64 * (n as f64 - 2.0);
        coefficients &= (r.qfi_coefficient - want).abs() <= 1e-10 * want;
        parts.push(format!("N={n}: {:.4} vs {want}", r.qfi_coefficient));
    }
    Ok((
        conditions && coefficients,
        format!("conditions hold: {conditions}; coefficient {}", parts.join(", ")),
    ))
}

fn csv_in(dir: &Path) -> Result<Vec<u8>, String> {
    let entry = fs::read_dir(dir)
        .map_err(err)?
        .filter_map(|e| e.ok())
        .find(|e| e.path().extension().is_some_and(|x| x == "csv"))
        .ok_or(format!("no csv in {}", dir.display()))?;
    fs::read(entry.path()).map_err(err)
}

fn determinism() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_bometro");
    let tmp = tempfile::tempdir().map_err(err)?;
    let first = tmp.path().join("first");
    let status = Process::new(bin)
        .args(["figure", "temp", "--quiet", "--formats", "csv", "--outdir"])
        .arg(&first)
        .status()
        .map_err(err)?;
    if !status.success() {
        return Err(format!("first run exited with {status}"));
    }
    let mut outputs = vec![csv_in(&first)?];
    for k in 0..2 {
        let dir = tmp.path().join(format!("replay{k}"));
        let status = Process::new(bin)
            .arg("replay")
            .arg(first.join("manifest.json"))
            .arg("--outdir")
            .arg(&dir)
            .status()
            .map_err(err)?;
        if !status.success() {
            return Err(format!("replay exited with {status}"));
        }
        outputs.push(csv_in(&dir)?);
    }
    let same = outputs.windows(2).all(|w| w[0] == w[1]);
    Ok((same, format!("{} runs, {} csv bytes each, identical: {same}", outputs.len(), outputs[0].len())))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("1 summary-table constants", table_constants),
        ("2 cat protocol optimum", cat_optimum),
        ("3 closed-form vs numeric h", closed_vs_numeric_h),
        ("4 temperature saturation", temperature_saturation),
        ("5 loss parity", loss_parity),
        ("6 gaussian vs master equation", gaussian_oracle),
        ("7 QFI identities", qfi_identities),
        ("8 bound dominance", bound_dominance),
        ("9 code-space check", code_check),
        ("10 determinism", determinism),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let clock = Instant::now();
        let (ok, detail) = match run() {
            Ok(r) => r,
            Err(e) => (false, format!("error: {e}")),
        };
        failed += usize::from(!ok);
        println!(
            "{} criterion {name}: {detail} [{:.1}s]",
            if ok { "PASS" } else { "FAIL" },
            clock.elapsed().as_secs_f64()
        );
    }
    println!("acceptance: {} passed, {failed} failed", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
