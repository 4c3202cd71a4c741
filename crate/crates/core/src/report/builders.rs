use num_complex::Complex64;
use rayon::prelude::*;

use super::config::RunConfig;
use super::dataset::{audit, finite, Audit, Column, Dataset};
use crate::bounds::{
    hnls_test, linear_bound, passive_temperature_bounds, quadratic_bound, rate_bound,
};
use crate::cat::{accumulated_phase, protocol_optimum, protocol_qfi, validity_time};
use crate::error::{Error, Result};
use crate::fock::{classical_fisher, parity_fisher_squeezed_vacuum, thermal_mix_distribution, ChannelSpec};
use crate::gaussian::{default_t_range, homodyne_probe, homodyne_snr, optimize_iteration_time};
use crate::model::{
    cutoff_heuristic, gaussian_cutoff, FockSpace, LindbladModel, ParameterTag, DEFAULT_TAIL_TOL,
};

/// A dataset together with its dominance audit.
#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub data: Dataset,
    pub audit: Audit,
    /// Set when the request has no finite answer (the data still describes why).
    pub infeasible: Option<String>,
}

impl Report {
    fn new(data: Dataset) -> Self {
        let audit = audit(&data);
        Self {
            data,
            audit,
            infeasible: None,
        }
    }
}

/// Time at which fast prepare-and-measure repeats its probe, `1/(10NΓ)`.
pub fn fast_single_time(photons: usize, gamma: f64) -> f64 {
    1.0 / (10.0 * photons.max(1) as f64 * gamma)
}

fn whole_photons(photons: f64) -> Result<usize> {
    let n = photons.round();
    if (photons - n).abs() > 1e-9 || n < 0.0 {
        return Err(Error::InvalidParameter {
            name: "photons",
            value: photons,
            reason: "Fock-state strategies need a whole photon number",
        });
    }
    Ok(n as usize)
}

/// Temperature information of `|N⟩` after the thermal-loss channel with
/// `κ = e^{−Γt}`, read out by photon counting.
pub fn fock_passive_fi(photons: usize, gamma: f64, n_env: f64, t: f64) -> Result<f64> {
    let spec = ChannelSpec::new((-gamma * t).exp(), n_env, DEFAULT_TAIL_TOL)?;
    classical_fisher(&thermal_mix_distribution(photons, &spec)?)
}

fn temperature_needs_bath(n_env: f64) -> Result<()> {
    if n_env <= 0.0 {
        return Err(Error::Unbounded(
            "temperature information diverges as 1/n_E at zero temperature".into(),
        ));
    }
    Ok(())
}

/// Summary of the five parameters: optimal classical rate, quantum bound,
/// their ratio and the large-N constants of the printed summary.
pub fn table_summary(cfg: &RunConfig) -> Result<Report> {
    cfg.validate()?;
    let (g, n, np) = (cfg.gamma, cfg.n_env, cfg.photons);
    let mut data = Dataset::new(
        "table",
        vec![
            Column::info("classical", "rate"),
            Column::bound("bound", "rate"),
            Column::info("ratio", ""),
            Column::info("large_n_classical", "rate"),
            Column::info("large_n_bound", "rate"),
        ],
    )
    .with_label("parameter");
    let inv_e = (-1.0f64).exp();
    for tag in ParameterTag::ALL {
        let model = LindbladModel::for_target(tag, g, n)?;
        let classical = match tag {
            ParameterTag::Squeezing => None,
            ParameterTag::Temperature => {
                if n > 0.0 {
                    // photon counting on vacuum; the rate only falls with t
                    let t = 1e-6 / g;
                    Some(fock_passive_fi(0, g, n, t)? / t)
                } else {
                    None
                }
            }
            _ => {
                let probe = homodyne_probe(tag, np, 0.0)?;
                Some(optimize_iteration_time(&probe, &model, default_t_range(&model))?.rate_star)
            }
        };
        let bound = rate_bound(&model, np)?.rate_bound;
        let ratio = classical.and_then(|c| finite(c / bound));
        let (lnc, lnb) = match tag {
            ParameterTag::Frequency => (0.37 * 4.0 * np / (g * (1.0 + 2.0 * n)), 4.0 * np / (g * (1.0 + 2.0 * n))),
            ParameterTag::Displacement => (0.82 * 4.0 / g, 4.0 / g),
            ParameterTag::Squeezing => (f64::NAN, 4.0 * (2.0 * np + 1.0) / (g * (n * (1.0 + n)).sqrt())),
            ParameterTag::Loss => (0.37 * np / (g * (1.0 + 2.0 * n)), np * (1.0 + 2.0 * n) / g),
            ParameterTag::Temperature => (g / n, np * g * (1.0 + 2.0 * n) / (n * (1.0 + n))),
        };
        data.push_labeled(
            tag.symbol(),
            vec![classical, Some(bound), ratio, finite(lnc), finite(lnb)],
        );
    }
    data.note("gamma", g);
    data.note("n_env", n);
    data.note("photons", np);
    data.note(
        "large_n_columns",
        "printed large-N forms; the temperature form drops the additive Gamma/n_env term",
    );
    data.note(
        "squeezing_bound",
        "exact optimum 4((1+2n_env)N+n_env)/(Gamma n_env(1+n_env)); large_n_bound shows the geometric-rate form",
    );
    if n == 0.0 {
        data.note("ratio_reference", format!("1/e = {inv_e:.6}"));
    }
    Ok(Report::new(data))
}

fn photons_at(n0: f64, n_env: f64, gamma: f64, t: f64) -> f64 {
    let decay = (-gamma * t).exp();
    n0 * decay + n_env * (1.0 - decay)
}

/// `4(∫₀ᵗ √(2N(t′)(N(t′)+1)) dt′)²`, the quadratic bound for frequency with
/// the Gaussian variance cap on the decaying photon number.
pub fn frequency_quadratic_bound(n0: f64, n_env: f64, gamma: f64, t: f64) -> Result<f64> {
    quadratic_bound(
        |s| {
            let np = photons_at(n0, n_env, gamma, s);
            2.0 * np * (np + 1.0)
        },
        t,
    )
}

/// Information about `ω` versus time: coherent and squeezed homodyne
/// strategies with the quadratic and linear bounds.
pub fn figure_frequency(cfg: &RunConfig) -> Result<Report> {
    cfg.validate()?;
    let (g, n, np) = (cfg.gamma, cfg.n_env, cfg.photons);
    let model = LindbladModel::for_target(ParameterTag::Frequency, g, n)?;
    let coherent = homodyne_probe(ParameterTag::Frequency, np, 0.0)?;
    let squeezed = homodyne_probe(ParameterTag::Frequency, np, cfg.squeeze)?;
    let bounds = ["quadratic_bound", "linear_bound"];
    let mut data = Dataset::new(
        "figure-fre",
        vec![
            Column::axis("t", "1/gamma"),
            Column::strategy("coherent_snr", "1/gamma^2", &bounds),
            Column::strategy("squeezed_snr", "1/gamma^2", &bounds),
            Column::bound("quadratic_bound", "1/gamma^2"),
            Column::bound("linear_bound", "1/gamma^2"),
        ],
    );
    let times = cfg.times();
    let rows = times
        .par_iter()
        .map(|&t| -> Result<Vec<Option<f64>>> {
            Ok(vec![
                Some(t * g),
                Some(homodyne_snr(&coherent, &model, t)?.snr),
                Some(homodyne_snr(&squeezed, &model, t)?.snr),
                Some(frequency_quadratic_bound(np, n, g, t)?),
                Some(linear_bound(&model, np, t)?),
            ])
        })
        .collect::<Result<Vec<_>>>()?;
    let crossover = rows.iter().find(|r| r[4] < r[3]).and_then(|r| r[0]);
    for r in rows {
        data.push(r);
    }
    data.note("photons", np);
    data.note("n_env", n);
    data.note("squeeze_r", cfg.squeeze);
    data.note(
        "crossover_t",
        crossover.map_or("none on grid".to_string(), |t| t.to_string()),
    );
    Ok(Report::new(data))
}

/// Information about `n_E` versus time: passive bounds, the linear bound,
/// passive Fock-state counting and fast prepare-and-measure.
pub fn figure_temperature(cfg: &RunConfig) -> Result<Report> {
    cfg.validate()?;
    let (g, n) = (cfg.gamma, cfg.n_env);
    temperature_needs_bath(n)?;
    let np = whole_photons(cfg.photons)?;
    let model = LindbladModel::for_target(ParameterTag::Temperature, g, n)?;
    let rate = rate_bound(&model, np as f64)?.rate_bound;
    let t_single = fast_single_time(np, g);
    let fast_rate = fock_passive_fi(np, g, n, t_single)? / t_single;
    let passive = ["single_shot", "purification", "linear_bound"];
    let mut data = Dataset::new(
        "figure-temp",
        vec![
            Column::axis("t", "1/gamma"),
            Column::bound("single_shot", "1"),
            Column::bound("purification", "1"),
            Column::bound("linear_bound", "1"),
            Column::strategy("fock_passive_fi", "1", &passive),
            Column::strategy("fast_protocol_fi", "1", &["linear_bound"]),
        ],
    );
    let rows = cfg
        .times()
        .par_iter()
        .map(|&t| -> Result<Vec<Option<f64>>> {
            let b = passive_temperature_bounds(n, np as f64, (-g * t).exp())?;
            Ok(vec![
                Some(t * g),
                Some(b.single_shot),
                Some(b.purification),
                Some(t * rate),
                Some(fock_passive_fi(np, g, n, t)?),
                (t >= t_single).then_some(t * fast_rate),
            ])
        })
        .collect::<Result<Vec<_>>>()?;
    for r in rows {
        data.push(r);
    }
    data.note("photons", np);
    data.note("n_env", n);
    data.note("rate_bound", rate);
    data.note("fast_single_time", t_single);
    data.note("fast_rate", fast_rate);
    Ok(Report::new(data))
}

/// The rate bound for the configured target and photon budget.
pub fn bound_report(cfg: &RunConfig) -> Result<Report> {
    cfg.validate()?;
    let model = LindbladModel::for_target(cfg.target, cfg.gamma, cfg.n_env)?;
    let b = rate_bound(&model, cfg.photons)?;
    let mut columns = vec![
        Column::info("photons", ""),
        Column::bound("rate_bound", "rate"),
        Column::info("tau", "1/gamma"),
        Column::info("unbounded", ""),
    ];
    let mut row = vec![
        Some(cfg.photons),
        Some(b.rate_bound),
        b.tau,
        Some(if b.unbounded { 1.0 } else { 0.0 }),
    ];
    for (k, v) in &b.components {
        columns.push(Column::info(k, "rate"));
        row.push(Some(*v));
    }
    let mut data = Dataset::new("bound", columns).with_label("target");
    data.push_labeled(cfg.target.name(), row);
    data.note("gamma", cfg.gamma);
    data.note("n_env", cfg.n_env);
    if cfg.target.is_hamiltonian() {
        let d = cfg.cutoff.unwrap_or_else(|| cutoff_heuristic(cfg.photons).max(30));
        let space = FockSpace::new(d)?;
        let hnls = hnls_test(&model, &space)?;
        data.note(
            "hnls",
            if hnls {
                "holds: the derivative generator lies outside the Lindblad span, quadratic growth survives"
            } else {
                "fails: the information grows at most linearly in time"
            },
        );
    } else {
        data.note(
            "factor_4",
            "rate_bound carries the factor 4 of 4<dL^dag dL>; without_factor_4 is <dL^dag dL>",
        );
    }
    if cfg.target == ParameterTag::Temperature {
        data.note("large_n_form", "photon_term alone; constant_term is Gamma/n_env");
    }
    let infeasible = b.unbounded.then(|| b.note.clone().unwrap_or_default());
    if let Some(why) = &infeasible {
        data.note("unbounded", why);
    }
    let mut rep = Report::new(data);
    rep.infeasible = infeasible;
    Ok(rep)
}

/// Strategy names available per target.
pub fn strategies(target: ParameterTag) -> &'static [&'static str] {
    match target {
        ParameterTag::Frequency | ParameterTag::Displacement => &["coherent", "squeezed"],
        ParameterTag::Loss => &["coherent", "squeezed", "parity"],
        ParameterTag::Squeezing => &["cat"],
        ParameterTag::Temperature => &["fock", "fast"],
    }
}

/// Information of one named strategy over the configured times, next to the
/// bounds it must respect.
pub fn strategy_series(cfg: &RunConfig) -> Result<Report> {
    cfg.validate()?;
    let available = strategies(cfg.target);
    let name = cfg.strategy.as_deref().unwrap_or(available[0]);
    if !available.contains(&name) {
        return Err(Error::Config(format!(
            "unknown strategy `{name}` for {}; available: {}",
            cfg.target,
            available.join(", ")
        )));
    }
    let model = LindbladModel::for_target(cfg.target, cfg.gamma, cfg.n_env)?;
    let times = cfg.times();
    let mut data = match (cfg.target, name) {
        (ParameterTag::Squeezing, _) => cat_series(cfg, &times)?,
        (ParameterTag::Loss, "parity") => parity_series(cfg, &model, &times)?,
        (ParameterTag::Temperature, _) => temperature_series(cfg, name, &times)?,
        _ => homodyne_series(cfg, name, &model, &times)?,
    };
    data.note("strategy", name);
    data.note("target", cfg.target);
    Ok(Report::new(data))
}

fn homodyne_series(cfg: &RunConfig, name: &str, model: &LindbladModel, times: &[f64]) -> Result<Dataset> {
    let r = if name == "squeezed" { cfg.squeeze } else { 0.0 };
    let probe = homodyne_probe(cfg.target, cfg.photons, r)?;
    let freq = cfg.target == ParameterTag::Frequency;
    let bounded: &[&str] = if freq { &["linear_bound", "quadratic_bound"] } else { &["linear_bound"] };
    let mut cols = vec![
        Column::axis("t", "1/gamma"),
        Column::strategy("snr", "1", bounded),
        Column::info("rate", "rate"),
        Column::bound("linear_bound", "1"),
    ];
    if freq {
        cols.push(Column::bound("quadratic_bound", "1"));
    }
    let rows = times
        .par_iter()
        .map(|&t| -> Result<Vec<Option<f64>>> {
            let s = homodyne_snr(&probe, model, t)?;
            let mut row = vec![Some(t * cfg.gamma), Some(s.snr), Some(s.rate), Some(linear_bound(model, cfg.photons, t)?)];
            if freq {
                row.push(Some(frequency_quadratic_bound(cfg.photons, cfg.n_env, cfg.gamma, t)?));
            }
            Ok(row)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut data = Dataset::new("strategy", cols);
    for row in rows {
        data.push(row);
    }
    let opt = optimize_iteration_time(&probe, model, default_t_range(model))?;
    data.note("t_star", opt.t_star);
    data.note("rate_star", opt.rate_star);
    data.note("squeeze_r", r);
    Ok(data)
}

fn parity_series(cfg: &RunConfig, model: &LindbladModel, times: &[f64]) -> Result<Dataset> {
    let r = cfg.photons.sqrt().asinh();
    let d = match cfg.cutoff {
        Some(d) => d,
        None => {
            let tail = gaussian_cutoff(Complex64::new(0.0, 0.0), r, 0.0, DEFAULT_TAIL_TOL * 1e-2)?;
            tail.max(cutoff_heuristic(cfg.photons)) + (20.0 * cfg.n_env).ceil() as usize
        }
    };
    let space = FockSpace::new(d)?;
    let rows = times
        .par_iter()
        .map(|&t| -> Result<Vec<Option<f64>>> {
            let p = parity_fisher_squeezed_vacuum(r, model, t, &space)?;
            Ok(vec![
                Some(t * cfg.gamma),
                Some(p.parity_fi),
                Some(p.counting_fi),
                Some(p.short_time_prediction),
                Some(linear_bound(model, cfg.photons, t)?),
            ])
        })
        .collect::<Result<Vec<_>>>()?;
    let mut data = Dataset::new(
        "strategy",
        vec![
            Column::axis("t", "1/gamma"),
            Column::strategy("parity_fi", "1/gamma^2", &["linear_bound"]),
            Column::strategy("counting_fi", "1/gamma^2", &["linear_bound"]),
            Column::info("short_time_prediction", "1/gamma^2"),
            Column::bound("linear_bound", "1/gamma^2"),
        ],
    );
    for row in rows {
        data.push(row);
    }
    data.note("squeeze_r", r);
    data.note("cutoff", d);
    Ok(data)
}

fn cat_series(cfg: &RunConfig, times: &[f64]) -> Result<Dataset> {
    if cfg.n_env > 0.0 {
        return Err(Error::Unsupported(
            "the cat protocol assumes a zero-temperature bath (n_env = 0)".into(),
        ));
    }
    let (g, np) = (cfg.gamma, cfg.photons);
    let opt = protocol_optimum(np, g)?;
    let t_valid = validity_time(cfg.epsilon, np);
    let alpha = Complex64::new(np.sqrt(), 0.0);
    let mut data = Dataset::new(
        "strategy",
        vec![
            Column::axis("t", "1/gamma"),
            Column::info("qfi", "1/gamma^2"),
            Column::info("rate", "rate"),
            Column::info("phase", "rad"),
            Column::info("within_validity", ""),
        ],
    );
    for &t in times {
        let qfi = protocol_qfi(np, g, t)?;
        data.push(vec![
            Some(t * g),
            Some(qfi),
            Some(if t > 0.0 { qfi / t } else { 0.0 }),
            Some(accumulated_phase(alpha, cfg.epsilon, g, t)),
            Some(if t <= t_valid { 1.0 } else { 0.0 }),
        ]);
    }
    data.note("t_star", opt.t_star);
    data.note("rate_star", opt.rate_star);
    data.note("rate_coefficient", opt.rate_coefficient);
    data.note(
        "optimum",
        format!("{:.4} N^2/Gamma at t = {:.4}/Gamma", opt.rate_coefficient, opt.t_star * g),
    );
    data.note("validity_time", t_valid);
    data.note("epsilon", cfg.epsilon);
    data.note("bound", "unbounded at n_env = 0: quadratic growth is not limited by loss alone");
    Ok(data)
}

fn temperature_series(cfg: &RunConfig, name: &str, times: &[f64]) -> Result<Dataset> {
    let (g, n) = (cfg.gamma, cfg.n_env);
    temperature_needs_bath(n)?;
    let np = whole_photons(cfg.photons)?;
    let model = LindbladModel::for_target(ParameterTag::Temperature, g, n)?;
    let rate = rate_bound(&model, np as f64)?.rate_bound;
    let fast = name == "fast";
    let t_single = fast_single_time(np, g);
    let fast_rate = fock_passive_fi(np, g, n, t_single)? / t_single;
    let bounded: &[&str] = if fast { &["linear_bound"] } else { &["single_shot", "purification", "linear_bound"] };
    let rows = times
        .par_iter()
        .map(|&t| -> Result<Vec<Option<f64>>> {
            let b = passive_temperature_bounds(n, np as f64, (-g * t).exp())?;
            let fi = if fast {
                (t >= t_single).then_some(t * fast_rate)
            } else {
                Some(fock_passive_fi(np, g, n, t)?)
            };
            Ok(vec![Some(t * g), fi, Some(b.single_shot), Some(b.purification), Some(t * rate)])
        })
        .collect::<Result<Vec<_>>>()?;
    let mut data = Dataset::new(
        "strategy",
        vec![
            Column::axis("t", "1/gamma"),
            Column::strategy("fi", "1", bounded),
            Column::bound("single_shot", "1"),
            Column::bound("purification", "1"),
            Column::bound("linear_bound", "1"),
        ],
    );
    for row in rows {
        data.push(row);
    }
    data.note("rate_bound", rate);
    if fast {
        data.note("single_time", t_single);
        data.note("fast_rate", fast_rate);
    }
    Ok(data)
}
