use std::fs;
use std::path::Path;

use polphase::hilbert::tensor_embed;
use polphase::operators::{
    build_annihilation_operator, build_exp_phase_operator, build_hamiltonian,
    build_number_operator, build_phase_operator, build_time_operator, sg_exponential_operator,
};
use polphase::phase::{
    distribution_decomposed, distribution_direct, uncertainty_report, PhaseDistribution,
};
use polphase::states::{coherent_state, fock_state, polarization_state, SpecOverrides, StateSpec};
use polphase::{FieldState, PolarizationKind, PolarizationState, C64};
use serde::Serialize;
use serde_json::value::RawValue;
use serde_json::Value;

use crate::output::{fmt_float, raw_float, record_csv, to_pretty, Ordered, Series, SeriesTable};
use crate::verify::{run_verification, VerificationReport, VerifyOptions};
use crate::{CliError, Format, RunConfig};

/// A state document as read from disk: the raw tree (echoed into JSON
/// output) and its schema-checked form.
#[derive(Clone, Debug)]
pub struct LoadedSpec {
    pub document: Value,
    pub spec: StateSpec,
}

impl LoadedSpec {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let document: Value = serde_json::from_str(text)
            .map_err(|e| CliError::Input(format!("state spec is not valid JSON: {e}")))?;
        let spec = StateSpec::from_json(&document)?;
        Ok(LoadedSpec { document, spec })
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text)
    }

    fn states(&self, cfg: &RunConfig) -> Result<(FieldState, PolarizationState), CliError> {
        let parsed = self.spec.build(SpecOverrides {
            cutoff: Some(cfg.cutoff),
            grid_points: Some(cfg.grid_points),
            omega: Some(cfg.omega),
        })?;
        Ok((parsed.field, parsed.polarization))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum FigureId {
    Fig2,
    Fig3,
}

impl FigureId {
    pub fn name(self) -> &'static str {
        match self {
            FigureId::Fig2 => "fig2",
            FigureId::Fig3 => "fig3",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum OperatorName {
    #[value(name = "n")]
    Number,
    #[value(name = "H")]
    Hamiltonian,
    #[value(name = "V")]
    ExpPhase,
    #[value(name = "Phi")]
    Phase,
    #[value(name = "T")]
    Time,
    #[value(name = "a")]
    Annihilation,
    #[value(name = "sg")]
    SusskindGlogower,
}

impl OperatorName {
    pub fn name(self) -> &'static str {
        match self {
            OperatorName::Number => "n",
            OperatorName::Hamiltonian => "H",
            OperatorName::ExpPhase => "V",
            OperatorName::Phase => "Phi",
            OperatorName::Time => "T",
            OperatorName::Annihilation => "a",
            OperatorName::SusskindGlogower => "sg",
        }
    }
}

fn config_echo(cfg: &RunConfig, command: &str, extra: &[(&str, Value)]) -> Value {
    let mut v = serde_json::to_value(cfg).expect("plain struct");
    let map = v.as_object_mut().expect("struct serializes to an object");
    map.insert("command".into(), command.into());
    for (k, x) in extra {
        map.insert((*k).into(), x.clone());
    }
    v
}

fn render(table: &SeriesTable, cfg: &RunConfig, echo: Value) -> String {
    match cfg.format {
        Format::Csv => table.to_csv(),
        Format::Json => table.to_json(&echo),
    }
}

fn phi_nodes(cfg: &RunConfig) -> Vec<f64> {
    cfg.grid().nodes().collect()
}

fn direct(
    field: &FieldState,
    pol: &PolarizationState,
    cfg: &RunConfig,
) -> Result<PhaseDistribution, CliError> {
    Ok(distribution_direct(
        &tensor_embed(field, pol)?,
        &cfg.grid(),
    )?)
}

/// Density from the direct route plus the three decomposed terms.
pub fn dist_table(cfg: &RunConfig, spec: &LoadedSpec) -> Result<SeriesTable, CliError> {
    let (field, pol) = spec.states(cfg)?;
    let density = direct(&field, &pol, cfg)?;
    let decomposed = distribution_decomposed(&field, &pol, &cfg.grid())?;
    let terms = decomposed
        .terms()
        .expect("decomposed route carries its terms");
    Ok(SeriesTable {
        phi: phi_nodes(cfg),
        series: vec![
            Series::density("density", density.density().to_vec()),
            Series::partial("circular", terms.circular.clone()),
            Series::partial("anticircular", terms.anticircular.clone()),
            Series::signed("interference", terms.interference.clone()),
        ],
    })
}

pub fn cmd_dist(cfg: &RunConfig, spec: &LoadedSpec) -> Result<String, CliError> {
    let table = dist_table(cfg, spec)?;
    Ok(render(
        &table,
        cfg,
        config_echo(cfg, "dist", &[("spec", spec.document.clone())]),
    ))
}

/// Series of a figure. Parameters are fixed: α = 1 for fig2, n ∈ {0, 1}
/// for fig3.
pub fn figure_table(cfg: &RunConfig, id: FigureId) -> Result<SeriesTable, CliError> {
    let pol = |k: PolarizationKind| polarization_state(&k);
    let n = cfg.cutoff;
    let series = match id {
        FigureId::Fig2 => {
            let coherent = coherent_state(C64::new(1.0, 0.0), n)?;
            let horizontal = pol(PolarizationKind::Horizontal)?;
            let interference = distribution_decomposed(&coherent, &horizontal, &cfg.grid())?
                .terms()
                .expect("decomposed route carries its terms")
                .interference
                .clone();
            vec![
                Series::density(
                    "circular",
                    direct(&coherent, &pol(PolarizationKind::Circular)?, cfg)?
                        .density()
                        .to_vec(),
                ),
                Series::density(
                    "anticircular",
                    direct(&coherent, &pol(PolarizationKind::Anticircular)?, cfg)?
                        .density()
                        .to_vec(),
                ),
                Series::signed("interference", interference),
                Series::density(
                    "horizontal",
                    direct(&coherent, &horizontal, cfg)?.density().to_vec(),
                ),
                Series::density(
                    "vertical",
                    direct(&coherent, &pol(PolarizationKind::Vertical)?, cfg)?
                        .density()
                        .to_vec(),
                ),
            ]
        }
        FigureId::Fig3 => {
            if n == 0 {
                return Err(CliError::Input(
                    "fig3 needs cutoff ≥ 1 for the single-photon series".into(),
                ));
            }
            let one = fock_state(1, n)?;
            let vacuum = fock_state(0, n)?;
            let horizontal = pol(PolarizationKind::Horizontal)?;
            vec![
                Series::density(
                    "circular_fock",
                    direct(&one, &pol(PolarizationKind::Circular)?, cfg)?
                        .density()
                        .to_vec(),
                ),
                Series::density(
                    "horizontal_vacuum",
                    direct(&vacuum, &horizontal, cfg)?.density().to_vec(),
                ),
                Series::density(
                    "horizontal_single_photon",
                    direct(&one, &horizontal, cfg)?.density().to_vec(),
                ),
            ]
        }
    };
    Ok(SeriesTable {
        phi: phi_nodes(cfg),
        series,
    })
}

pub fn cmd_figure(cfg: &RunConfig, id: FigureId) -> Result<String, CliError> {
    let table = figure_table(cfg, id)?;
    Ok(render(
        &table,
        cfg,
        config_echo(cfg, "figure", &[("figure", id.name().into())]),
    ))
}

/// The report is always JSON regardless of `--format`.
pub fn cmd_verify(
    cfg: &RunConfig,
    opts: VerifyOptions,
) -> Result<(String, VerificationReport), CliError> {
    let report = run_verification(cfg, opts)?;
    Ok((report.to_json(), report))
}

pub fn cmd_uncertainty(cfg: &RunConfig, spec: &LoadedSpec) -> Result<String, CliError> {
    let (field, pol) = spec.states(cfg)?;
    let r = uncertainty_report(
        &tensor_embed(&field, &pol)?,
        &cfg.grid(),
        cfg.hbar,
        cfg.omega,
    )?;
    let floats = [
        ("hbar", r.hbar),
        ("omega", r.omega),
        ("mean_phase", r.mean_phase),
        ("phase_variance", r.phase_variance),
        ("mean_energy", r.mean_energy),
        ("energy_variance", r.energy_variance),
        ("delta_energy", r.delta_energy),
        ("delta_time", r.delta_time),
        ("delta_e_delta_t", r.delta_e_delta_t),
        ("bound", r.bound),
    ];
    Ok(match cfg.format {
        Format::Csv => {
            let mut fields: Vec<(String, String)> = floats
                .iter()
                .map(|(k, x)| ((*k).to_string(), fmt_float(*x)))
                .collect();
            fields.push(("below_bound".into(), r.below_bound.to_string()));
            record_csv(&fields)
        }
        Format::Json => {
            let mut record: Vec<(String, Box<RawValue>)> = floats
                .iter()
                .map(|(k, x)| ((*k).to_string(), raw_float(*x)))
                .collect();
            let flag = RawValue::from_string(r.below_bound.to_string()).expect("JSON literal");
            record.push(("below_bound".into(), flag));
            #[derive(Serialize)]
            struct Doc<'a> {
                config: Value,
                record: Ordered<'a, Box<RawValue>>,
            }
            to_pretty(&Doc {
                config: config_echo(cfg, "uncertainty", &[("spec", spec.document.clone())]),
                record: Ordered(&record),
            })
        }
    })
}

pub fn operator_entries(cfg: &RunConfig, op: OperatorName) -> Result<polphase::CMatrix, CliError> {
    let b = cfg.basis();
    let m = match op {
        OperatorName::Number => build_number_operator(b),
        OperatorName::Hamiltonian => build_hamiltonian(b, cfg.hbar, cfg.omega)?,
        OperatorName::ExpPhase => build_exp_phase_operator(b),
        OperatorName::Phase => build_phase_operator(b),
        OperatorName::Time => build_time_operator(b, cfg.omega)?,
        OperatorName::Annihilation => build_annihilation_operator(b),
        OperatorName::SusskindGlogower => sg_exponential_operator(b),
    };
    Ok(m.into_entries())
}

/// `#` header lines with basis metadata, then one line per matrix row of
/// `re,im` pairs. JSON carries the same data as `rows` of flat pairs.
pub fn cmd_matrix(cfg: &RunConfig, op: OperatorName) -> Result<String, CliError> {
    let m = operator_entries(cfg, op)?;
    let b = cfg.basis();
    let row = |i: usize| -> Vec<f64> {
        (0..m.ncols())
            .flat_map(|j| [m[(i, j)].re, m[(i, j)].im])
            .collect()
    };
    Ok(match cfg.format {
        Format::Csv => {
            let mut out = format!(
                "# operator={}\n# cutoff={}\n# dimension={}\n# labels={}..{}\n# hbar={}\n# omega={}\n# layout=row-major re,im pairs\n",
                op.name(),
                b.cutoff(),
                b.dimension(),
                b.min_label(),
                b.max_label(),
                fmt_float(cfg.hbar),
                fmt_float(cfg.omega),
            );
            for i in 0..m.nrows() {
                let cells: Vec<String> = row(i).into_iter().map(fmt_float).collect();
                out.push_str(&cells.join(","));
                out.push('\n');
            }
            out
        }
        Format::Json => {
            #[derive(Serialize)]
            struct Doc {
                config: Value,
                operator: &'static str,
                labels: Vec<i64>,
                rows: Vec<Vec<Box<RawValue>>>,
            }
            to_pretty(&Doc {
                config: config_echo(cfg, "matrix", &[]),
                operator: op.name(),
                labels: b.labels().collect(),
                rows: (0..m.nrows())
                    .map(|i| row(i).into_iter().map(raw_float).collect())
                    .collect(),
            })
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::TAU;

    fn small() -> RunConfig {
        RunConfig {
            cutoff: 6,
            grid_points: 32,
            ..RunConfig::default()
        }
    }

    #[test]
    fn number_matrix_for_cutoff_one() {
        let cfg = RunConfig {
            cutoff: 1,
            grid_points: 4,
            ..RunConfig::default()
        };
        let m = operator_entries(&cfg, OperatorName::Number).unwrap();
        let diag: Vec<f64> = (0..4).map(|i| m[(i, i)].re).collect();
        assert_eq!(diag, [-2.0, -1.0, 0.0, 1.0]);
        let dump = cmd_matrix(&cfg, OperatorName::Number).unwrap();
        assert!(dump.contains("# labels=-2..1\n"));
        assert_eq!(dump.lines().filter(|l| !l.starts_with('#')).count(), 4);
    }

    #[test]
    fn fig3_circular_is_flat() {
        let t = figure_table(&small(), FigureId::Fig3).unwrap();
        assert!(t
            .get("circular_fock")
            .unwrap()
            .iter()
            .all(|p| (p - 1.0 / TAU).abs() < 1e-12));
        let cfg0 = RunConfig {
            cutoff: 0,
            grid_points: 4,
            ..RunConfig::default()
        };
        assert!(figure_table(&cfg0, FigureId::Fig3).is_err());
    }

    #[test]
    fn dist_density_column_matches_sum_of_terms() {
        let spec = LoadedSpec::parse(
            r#"{"field": {"type": "coherent", "alpha_re": 0.5}, "polarization": {"type": "horizontal"}}"#,
        )
        .unwrap();
        let t = dist_table(&small(), &spec).unwrap();
        let d = t.get("density").unwrap();
        for (j, p) in d.iter().enumerate() {
            let s = t.get("circular").unwrap()[j]
                + t.get("anticircular").unwrap()[j]
                + t.get("interference").unwrap()[j];
            assert!((p - s).abs() < 1e-13);
        }
    }

    #[test]
    fn malformed_spec_names_key_path() {
        let err = LoadedSpec::parse(
            r#"{"field": {"type": "fock", "n": -1}, "polarization": {"type": "circular"}}"#,
        )
        .unwrap_err();
        assert!(err.to_string().contains("field.n"), "{err}");
        assert!(err.to_json_line().contains("\"path\":\"field.n\""));
    }
}
