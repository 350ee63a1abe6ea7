use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use super::config::CaseConfig;
use super::exact::ExactSolution;
use crate::analysis::{
    all_errors, convergence_rates, flatness_rates, global_interpolate, ErrorReport,
};
use crate::field::DiffusionField;
use crate::mesh::{flatness, Mesh};
use crate::system::{
    assemble, condition_number_1norm, recover_cells, solve, HybridVector, Problem, SolverOptions,
};
use crate::{HhoError, Point, Result};

pub const TABLE_HEADER: &str =
    "meshsize NbEdgeDOFs EnergyError H1error L2error ConditionNumber Flatness";

/// Discrete solution and its error report on one mesh.
#[derive(Clone, Debug)]
pub struct LevelOutcome {
    pub report: ErrorReport,
    pub solution: HybridVector,
}

/// Assembles, solves and measures the errors against `exact` on `mesh`.
pub fn run_level(
    mesh: &Mesh,
    diffusion: &DiffusionField,
    exact: &ExactSolution,
    k: usize,
    solver: &SolverOptions,
    with_condition_number: bool,
) -> Result<LevelOutcome> {
    let source = |c: usize, x: &Point| exact.source(&diffusion.at(mesh, c), x);
    let boundary = |x: &Point| exact.value(x);
    let problem = Problem {
        mesh,
        diffusion,
        source: &source,
        boundary: &boundary,
        k,
    };
    let system = assemble(&problem)?;
    let (x, fact) = solve(&system, solver)?;
    let uh = recover_cells(&system, mesh, &x)?;
    let u = |x: &Point| exact.value(x);
    let ihu = global_interpolate(&u, mesh, k)?;
    let [e, h1, l2] = all_errors(&uh, &ihu, &u, mesh, diffusion, k)?;
    let condition_number = if with_condition_number {
        Some(condition_number_1norm(&system, &fact)?)
    } else {
        None
    };
    Ok(LevelOutcome {
        report: ErrorReport {
            h: mesh.h(),
            nb_edge_dofs: system.dim(),
            energy_error: e.value,
            h1_error: h1.value,
            l2_error: l2.value,
            condition_number,
            flatness: flatness(mesh)?.fl_h,
            k,
            absolute: e.absolute || h1.absolute || l2.absolute,
        },
        solution: uh,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub enum TableRow {
    Done(ErrorReport),
    Failed {
        level: usize,
        h: Option<f64>,
        message: String,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceTable {
    pub title: String,
    pub k: usize,
    pub rows: Vec<TableRow>,
}

fn num(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.5e}")
    } else {
        "nan".into()
    }
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(|| "nan".into(), |v| format!("{v:.3}"))
}

impl ConvergenceTable {
    pub fn reports(&self) -> Vec<&ErrorReport> {
        self.rows
            .iter()
            .filter_map(|r| match r {
                TableRow::Done(r) => Some(r),
                TableRow::Failed { .. } => None,
            })
            .collect()
    }

    pub fn has_failures(&self) -> bool {
        self.rows
            .iter()
            .any(|r| matches!(r, TableRow::Failed { .. }))
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{TABLE_HEADER}");
        for row in &self.rows {
            match row {
                TableRow::Done(r) => {
                    let _ = writeln!(
                        s,
                        "{} {} {} {} {} {} {}",
                        num(r.h),
                        r.nb_edge_dofs,
                        num(r.energy_error),
                        num(r.h1_error),
                        num(r.l2_error),
                        num(r.condition_number.unwrap_or(f64::NAN)),
                        num(r.flatness)
                    );
                    if r.absolute {
                        let _ = writeln!(s, "# absolute errors (vanishing reference norm)");
                    }
                }
                TableRow::Failed { level, h, message } => {
                    let _ = writeln!(s, "{} nan nan nan nan nan nan", num(h.unwrap_or(f64::NAN)));
                    let _ = writeln!(s, "# level {level} failed: {}", message.replace('\n', " "));
                }
            }
        }
        let reports: Vec<ErrorReport> = self.reports().into_iter().cloned().collect();
        if let Ok(rates) = convergence_rates(&reports) {
            let line = |f: fn(&crate::analysis::PairRates) -> Option<f64>| {
                rates
                    .iter()
                    .map(|p| opt(f(p)))
                    .collect::<Vec<_>>()
                    .join(" ")
            };
            let _ = writeln!(s, "# rate EnergyError {}", line(|p| p.energy));
            let _ = writeln!(s, "# rate H1error {}", line(|p| p.h1));
            let _ = writeln!(s, "# rate L2error {}", line(|p| p.l2));
            for (name, f) in [
                (
                    "EnergyError",
                    (|r: &ErrorReport| r.energy_error) as fn(&ErrorReport) -> f64,
                ),
                ("H1error", |r: &ErrorReport| r.h1_error),
            ] {
                if let Ok(fr) = flatness_rates(&reports, f) {
                    let v: Vec<String> = fr.into_iter().map(opt).collect();
                    let _ = writeln!(s, "# flatness-rate {name} {}", v.join(" "));
                }
            }
        }
        let _ = writeln!(s, "# {}", self.title);
        s
    }

    /// Writes the table through a temporary file in the target directory.
    pub fn write_atomic(&self, path: &Path) -> Result<()> {
        write_atomic(path, &self.to_text())
    }
}

pub fn write_atomic(path: &Path, text: &str) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(text.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| HhoError::Io(e.error))?;
    Ok(())
}

/// Runs every level of a case sequentially; a failing level is recorded and
/// the run continues.
pub fn run_case(config: &CaseConfig) -> Result<ConvergenceTable> {
    config.validate()?;
    let diffusion = config.diffusion.field();
    let mut rows = Vec::with_capacity(config.levels.len());
    for &level in &config.levels {
        let mesh = match config.family.mesh(level) {
            Ok(m) => m,
            Err(e @ HhoError::Config(_)) => return Err(e),
            Err(e) => {
                rows.push(TableRow::Failed {
                    level,
                    h: None,
                    message: e.to_string(),
                });
                continue;
            }
        };
        match run_level(
            &mesh,
            &diffusion,
            &config.exact,
            config.k,
            &config.solver,
            config.condition_number,
        ) {
            Ok(o) => rows.push(TableRow::Done(o.report)),
            Err(e) => rows.push(TableRow::Failed {
                level,
                h: Some(mesh.h()),
                message: e.to_string(),
            }),
        }
    }
    let table = ConvergenceTable {
        title: format!(
            "case {} k={} family={} exact={} levels={:?}",
            config.case,
            config.k,
            config.family.name(),
            config.exact,
            config.levels
        ),
        k: config.k,
        rows,
    };
    if let Some(path) = &config.out {
        table.write_atomic(path)?;
    }
    Ok(table)
}
