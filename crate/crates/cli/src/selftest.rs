//! Quick invariant suite behind `bometro selftest`.

use bosonic_metrology::bounds::{closed_form_h, hnls_test, numeric_h_optimization};
use bosonic_metrology::cat::{protocol_optimum, qec_code_check};
use bosonic_metrology::fock::{beamsplitter_distribution, max_snr_check, sld_qfi};
use bosonic_metrology::model::{hermitian_part, DEFAULT_TAIL_TOL};
use bosonic_metrology::report::{self, Command, RunConfig};
use bosonic_metrology::{make_gaussian, photon_number, DenseOperator, Error, FockSpace, LindbladModel, ParameterTag};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Debug)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &'static str, passed: bool, detail: impl Into<String>) -> Self {
        Self {
            name,
            passed,
            detail: detail.into(),
        }
    }

    fn from_result(name: &'static str, r: Result<(bool, String), Error>) -> Self {
        match r {
            Ok((ok, d)) => Self::new(name, ok, d),
            Err(e) => Self::new(name, false, format!("error: {e}")),
        }
    }
}

/// Full-rank random density matrix `AA†/tr(AA†)` with Gaussian `A`.
pub fn random_density(dim: usize, rng: &mut impl Rng) -> DenseOperator {
    let a = DenseOperator::from_fn(dim, dim, |_, _| Complex64::new(gauss(rng), gauss(rng)));
    let m = &a * a.adjoint();
    let tr = m.trace();
    m / tr
}

/// Random hermitian traceless direction.
pub fn random_tangent(dim: usize, rng: &mut impl Rng) -> DenseOperator {
    let b = DenseOperator::from_fn(dim, dim, |_, _| Complex64::new(gauss(rng), gauss(rng)));
    let mut h = hermitian_part(&b);
    let shift = h.trace() / Complex64::new(dim as f64, 0.0);
    for k in 0..dim {
        h[(k, k)] -= shift;
    }
    h
}

fn gauss(rng: &mut impl Rng) -> f64 {
    // Box–Muller
    let u: f64 = rng.gen_range(f64::EPSILON..1.0);
    let v: f64 = rng.gen();
    (-2.0 * u.ln()).sqrt() * (std::f64::consts::TAU * v).cos()
}

pub fn run(seed: u64) -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();

    let mut worst = 0.0f64;
    for _ in 0..100 {
        let mag = rng.gen_range(0.0..3.0);
        let phase = rng.gen_range(0.0..std::f64::consts::TAU);
        let r = rng.gen_range(0.0..1.5);
        let axis = rng.gen_range(0.0..std::f64::consts::PI);
        let s = make_gaussian(Complex64::from_polar(mag, phase), r, axis).unwrap();
        let want = mag * mag + r.sinh().powi(2);
        worst = worst.max((photon_number(&s) - want).abs());
    }
    out.push(Check::new("gaussian photon number", worst < 1e-12, format!("max error {worst:.2e}")));

    let mut worst = 0.0f64;
    let mut bad = None;
    for _ in 0..20 {
        let dim = rng.gen_range(2..8);
        let rho = random_density(dim, &mut rng);
        let drho = random_tangent(dim, &mut rng);
        match sld_qfi(&rho, &drho).and_then(|(q, l)| Ok((q, max_snr_check(&rho, &drho, &l)?))) {
            Ok((q, s)) => worst = worst.max((q - s).abs() / q.max(1.0)),
            Err(e) => bad = Some(e),
        }
    }
    out.push(match bad {
        Some(e) => Check::new("snr at the SLD equals the QFI", false, format!("error: {e}")),
        None => Check::new("snr at the SLD equals the QFI", worst < 1e-8, format!("max relative error {worst:.2e}")),
    });

    out.push(Check::from_result("thermal state QFI", (|| {
        let n = 0.3;
        let space = FockSpace::new(60)?;
        let rho = space.thermal(n, DEFAULT_TAIL_TOL)?;
        let mut drho = space.zeros();
        for k in 0..space.dim() {
            let p = rho[(k, k)].re;
            drho[(k, k)] = Complex64::new(p * (k as f64 / n - (k as f64 + 1.0) / (n + 1.0)), 0.0);
        }
        let (q, _) = sld_qfi(&rho, &drho)?;
        let want = 1.0 / (n * (1.0 + n));
        Ok(((q - want).abs() < 1e-6 * want, format!("{q:.10} vs {want:.10}")))
    })()));

    out.push(Check::from_result("beamsplitter normalisation", (|| {
        let mut worst = 0.0f64;
        for n in 0..=30 {
            for m in (0..=30).step_by(5) {
                let s: f64 = beamsplitter_distribution(n, m, 0.37)?.iter().sum();
                worst = worst.max((s - 1.0).abs());
            }
        }
        Ok((worst < 1e-10, format!("max |Σp − 1| {worst:.2e}")))
    })()));

    out.push(Check::from_result("closed-form h matches the numeric optimum", (|| {
        let space = FockSpace::new(60)?;
        let model = LindbladModel::for_target(ParameterTag::Frequency, 1.0, 0.1)?;
        let mut rho = space.zeros();
        let mut p = (-5.0f64).exp();
        for k in 0..space.dim() {
            if k > 0 {
                p *= 5.0 / k as f64;
            }
            rho[(k, k)] = Complex64::new(p, 0.0);
        }
        let (_, closed) = closed_form_h(&model, 5.0)?;
        let numeric = numeric_h_optimization(&model, &rho, &space)?;
        let rel = (numeric.a_expect - closed).abs() / closed;
        Ok((rel < 1e-6, format!("relative difference {rel:.2e}")))
    })()));

    out.push(Check::from_result("HNLS and infeasibility agree for squeezing at zero temperature", (|| {
        let space = FockSpace::new(40)?;
        let model = LindbladModel::for_target(ParameterTag::Squeezing, 1.0, 0.0)?;
        let hnls = hnls_test(&model, &space)?;
        let infeasible = matches!(closed_form_h(&model, 5.0), Err(Error::Unbounded(_)));
        Ok((hnls && infeasible, format!("hnls {hnls}, infeasible {infeasible}")))
    })()));

    out.push(Check::from_result("summary ratios at zero temperature", (|| {
        let rep = report::table_summary(&RunConfig::defaults(Command::Table))?;
        let k = rep.data.column_index("ratio").unwrap();
        let r: Vec<f64> = rep.data.rows.iter().map(|r| r[k].unwrap_or(f64::NAN)).collect();
        let inv_e = (-1.0f64).exp();
        let ok = (r[0] - inv_e).abs() < 1e-3 && (r[1] - 0.815).abs() < 5e-3 && (r[3] - inv_e).abs() < 1e-3;
        Ok((ok, format!("omega {:.5}, alpha {:.5}, gamma {:.5}", r[0], r[1], r[3])))
    })()));

    out.push(Check::from_result("cat protocol optimum time", (|| {
        let o = protocol_optimum(4.0, 1.0)?;
        Ok(((o.t_star - 1.26).abs() <= 0.01, format!("t* = {:.5}/Gamma", o.t_star)))
    })()));

    out.push(Check::from_result("code-space conditions", (|| {
        let model = LindbladModel::for_target(ParameterTag::Loss, 1.0, 0.0)?;
        let space = FockSpace::new(12)?;
        let mut ok = true;
        for n in [3, 4, 6] {
            ok &= qec_code_check(n, &model, &space)?.passed();
        }
        Ok((ok, "N = 3, 4, 6".to_string()))
    })()));

    out.push(Check::from_result("deterministic figure data", (|| {
        let mut cfg = RunConfig::defaults(Command::FigureFrequency);
        cfg.points = 30;
        let a = report::figure_frequency(&cfg)?;
        let b = report::figure_frequency(&cfg)?;
        Ok((a.data.to_csv() == b.data.to_csv() && a.audit.passed(), format!("audit checked {} cells", a.audit.checked)))
    })()));

    out
}
