//! Run configuration, datasets with a dominance audit, and the builders
//! for the summary table, the two figures, single bounds and strategies.

mod builders;
mod config;
mod dataset;

pub use builders::{
    bound_report, fast_single_time, figure_frequency, figure_temperature, fock_passive_fi,
    frequency_quadratic_bound, strategies, strategy_series, table_summary, Report,
};
pub use config::{Command, Format, RunConfig, Spacing, CONFIG_KEYS};
pub use dataset::{audit, finite, Audit, Column, Dataset, Role, Violation, AUDIT_TOL};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ParameterTag;

    fn row<'a>(d: &'a Dataset, label: &str) -> &'a [Option<f64>] {
        let i = d.labels.iter().position(|l| l == label).unwrap();
        &d.rows[i]
    }

    #[test]
    fn table_ratios_at_zero_temperature() {
        let cfg = RunConfig::defaults(Command::Table);
        let rep = table_summary(&cfg).unwrap();
        let d = &rep.data;
        let ratio = d.column_index("ratio").unwrap();
        let inv_e = (-1.0f64).exp();
        assert!((row(d, "omega")[ratio].unwrap() - inv_e).abs() < 1e-3);
        assert!((row(d, "alpha")[ratio].unwrap() - 0.815).abs() < 5e-3);
        assert!((row(d, "gamma")[ratio].unwrap() - inv_e).abs() < 1e-3);
        assert_eq!(row(d, "epsilon")[0], None);
        assert!(d.to_csv().contains("epsilon,-,inf,-"));
    }

    #[test]
    fn table_temperature_row_is_vacuum_rate() {
        let mut cfg = RunConfig::defaults(Command::Table);
        cfg.n_env = 0.1;
        cfg.photons = 5.0;
        let rep = table_summary(&cfg).unwrap();
        let c = row(&rep.data, "n_env")[0].unwrap();
        assert!((c / 10.0 - 1.0).abs() < 1e-4, "{c}");
        assert!((row(&rep.data, "n_env")[1].unwrap() - 64.545_454_5).abs() < 1e-6);
    }

    #[test]
    fn frequency_figure_shape() {
        let mut cfg = RunConfig::defaults(Command::FigureFrequency);
        cfg.points = 40;
        let rep = figure_frequency(&cfg).unwrap();
        assert!(rep.audit.passed(), "{:?}", rep.audit.violations);
        let d = &rep.data;
        // squeezing wins early
        assert!(d.rows[0][2] > d.rows[0][1]);
        // quadratic tighter early, linear tighter late
        assert!(d.rows[0][3] < d.rows[0][4]);
        assert!(d.rows[39][4] < d.rows[39][3]);
        let cross: f64 = d.notes["crossover_t"].parse().unwrap();
        assert!(cross > 1e-2 && cross < 1.0, "{cross}");
    }

    #[test]
    fn temperature_figure_limits() {
        let mut cfg = RunConfig::defaults(Command::FigureTemperature);
        cfg.points = 30;
        let rep = figure_temperature(&cfg).unwrap();
        assert!(rep.audit.passed(), "{:?}", rep.audit.violations);
        let last = rep.data.rows.last().unwrap();
        assert!((last[4].unwrap() / (1.0 / 0.11) - 1.0).abs() < 0.02);
        let mut cfg = RunConfig::defaults(Command::FigureTemperature);
        cfg.n_env = 0.0;
        assert!(matches!(figure_temperature(&cfg), Err(crate::Error::Unbounded(_))));
    }

    #[test]
    fn bound_flags_squeezing_at_zero_temperature() {
        let mut cfg = RunConfig::defaults(Command::Bound);
        cfg.target = ParameterTag::Squeezing;
        cfg.n_env = 0.0;
        let rep = bound_report(&cfg).unwrap();
        assert!(rep.infeasible.is_some());
        assert!(rep.data.notes["hnls"].starts_with("holds"));
        cfg.n_env = 0.1;
        let rep = bound_report(&cfg).unwrap();
        assert!(rep.infeasible.is_none());
        assert!(rep.data.notes["hnls"].starts_with("fails"));
    }

    #[test]
    fn strategy_dispatch() {
        let mut cfg = RunConfig::defaults(Command::Strategy);
        cfg.target = ParameterTag::Squeezing;
        cfg.photons = 4.0;
        let rep = strategy_series(&cfg).unwrap();
        let coef: f64 = rep.data.notes["rate_coefficient"].parse().unwrap();
        assert!((coef - 6.516).abs() < 1e-3);
        cfg.strategy = Some("coherent".into());
        let err = strategy_series(&cfg).unwrap_err();
        assert!(err.to_string().contains("available: cat"));
        let mut cfg = RunConfig::defaults(Command::Strategy);
        cfg.target = ParameterTag::Temperature;
        cfg.n_env = 0.1;
        cfg.photons = 5.0;
        cfg.strategy = Some("fast".into());
        cfg.points = 10;
        let rep = strategy_series(&cfg).unwrap();
        assert!(rep.audit.passed());
    }

    #[test]
    fn outputs_are_deterministic() {
        let mut cfg = RunConfig::defaults(Command::FigureFrequency);
        cfg.points = 25;
        let a = figure_frequency(&cfg).unwrap().data;
        let b = figure_frequency(&cfg).unwrap().data;
        assert_eq!(a.to_csv(), b.to_csv());
        assert_eq!(a.to_json(), b.to_json());
    }
}
