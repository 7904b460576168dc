//! Batch runs behind the command line: convergence ladders, the PDE against
//! Monte Carlo table, and parameter sweeps, with CSV and JSON output.

use rayon::prelude::*;
use serde::Serialize;

use crate::config::{MtmConvention, OptionKind, RunConfig};
use crate::error::{Error, Result};
use crate::fbsde::{fbsde_xva, FbsdeRow, RegressionGrid};
use crate::solver::{greeks, solve, GreekRow, SolveResult};

/// `log₂(e_{i−1}/e_i)` for every level after the first.
pub fn eoc(errors: &[f64]) -> Vec<Option<f64>> {
    std::iter::once(None)
        .chain(errors.windows(2).map(|w| Some((w[0] / w[1]).log2())))
        .take(errors.len())
        .collect()
}

/// L² and L∞ differences at the coarse field's quadrature points.
pub fn field_errors(coarse: &SolveResult, reference: &SolveResult) -> (f64, f64) {
    let space = coarse.value.space();
    let pts = space.points();
    let mass = space.mass();
    let mut l2 = 0.0;
    let mut linf = 0.0f64;
    for ((&s, &w), &v) in pts.iter().zip(&mass).zip(coarse.value.values()) {
        let d = (v - reference.value(s)).abs();
        l2 += w * d * d;
        linf = linf.max(d);
    }
    (l2.sqrt(), linf)
}

/// Every level must refine evenly into the reference by a power of two.
pub fn check_nested(ladder: &[usize], reference_cells: usize) -> Result<()> {
    if ladder.is_empty() {
        return Err(Error::NonNestedLadder("empty ladder".into()));
    }
    for w in ladder.windows(2) {
        if w[1] <= w[0] {
            return Err(Error::NonNestedLadder(format!("levels must increase: {} then {}", w[0], w[1])));
        }
    }
    for &n in ladder {
        if n == 0 || reference_cells % n != 0 || !(reference_cells / n).is_power_of_two() || n == reference_cells {
            return Err(Error::NonNestedLadder(format!(
                "{n} cells do not nest strictly inside the {reference_cells}-cell reference"
            )));
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub cells: usize,
    pub steps: usize,
    pub err_l2: f64,
    pub eoc_l2: Option<f64>,
    pub err_linf: f64,
    pub eoc_linf: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub reference_cells: usize,
    pub reference_steps: usize,
    pub degree: usize,
    pub rows: Vec<ConvergenceRow>,
}

impl ConvergenceReport {
    pub fn finest(&self) -> &ConvergenceRow {
        self.rows.last().expect("report has at least one level")
    }

    /// EOC over the three finest levels, `log₂(e_{n−3}/e_{n−1}) / 2`.
    pub fn tail_eoc(&self) -> (f64, f64) {
        let n = self.rows.len();
        assert!(n >= 3, "need three levels");
        let (a, b) = (&self.rows[n - 3], &self.rows[n - 1]);
        ((a.err_l2 / b.err_l2).log2() / 2.0, (a.err_linf / b.err_linf).log2() / 2.0)
    }

    pub fn to_csv(&self) -> Result<String> {
        to_csv(&self.rows)
    }

    pub fn to_text(&self) -> String {
        let fmt = |e: Option<f64>| e.map_or_else(|| "-".to_string(), |v| format!("{v:.3}"));
        let mut out = format!(
            "reference: N = {}, L = {}, k = {}\n{:>6} {:>6} {:>12} {:>7} {:>12} {:>7}\n",
            self.reference_cells, self.reference_steps, self.degree, "N", "L", "L2-err", "EOC", "Linf-err", "EOC"
        );
        for r in &self.rows {
            out.push_str(&format!(
                "{:>6} {:>6} {:>12.3e} {:>7} {:>12.3e} {:>7}\n",
                r.cells,
                r.steps,
                r.err_l2,
                fmt(r.eoc_l2),
                r.err_linf,
                fmt(r.eoc_linf)
            ));
        }
        out
    }
}

/// Solves `config` on each ladder level and against a reference solve.
///
/// Levels use the CFL step count; the reference uses `reference_steps` if
/// given. Strike alignment is not enforced on coarse levels.
pub fn run_convergence(
    config: &RunConfig,
    ladder: &[usize],
    reference_cells: usize,
    reference_steps: Option<usize>,
) -> Result<ConvergenceReport> {
    check_nested(ladder, reference_cells)?;
    let reference = solve(&RunConfig {
        cells: reference_cells,
        time_steps: reference_steps,
        ..*config
    })?;
    convergence_against(config, ladder, &reference)
}

/// As [`run_convergence`] with a precomputed reference solve.
pub fn convergence_against(config: &RunConfig, ladder: &[usize], reference: &SolveResult) -> Result<ConvergenceReport> {
    check_nested(ladder, reference.meta.cells)?;
    let levels: Vec<Result<(usize, f64, f64)>> = ladder
        .par_iter()
        .map(|&cells| {
            let r = solve(&RunConfig {
                cells,
                time_steps: None,
                require_strike_node: false,
                ..*config
            })?;
            let (l2, linf) = field_errors(&r, reference);
            Ok((r.meta.steps, l2, linf))
        })
        .collect();
    let levels = levels.into_iter().collect::<Result<Vec<_>>>()?;
    let l2: Vec<f64> = levels.iter().map(|l| l.1).collect();
    let linf: Vec<f64> = levels.iter().map(|l| l.2).collect();
    let rows = ladder
        .iter()
        .zip(&levels)
        .zip(eoc(&l2).into_iter().zip(eoc(&linf)))
        .map(|((&cells, &(steps, e2, ei)), (o2, oi))| ConvergenceRow {
            cells,
            steps,
            err_l2: e2,
            eoc_l2: o2,
            err_linf: ei,
            eoc_linf: oi,
        })
        .collect();
    Ok(ConvergenceReport {
        reference_cells: reference.meta.cells,
        reference_steps: reference.meta.steps,
        degree: config.degree,
        rows,
    })
}

pub const TABLE3_SPOTS: [f64; 6] = [5.0, 10.0, 15.0, 20.0, 30.0, 60.0];

/// The four columns of the comparison table, in layout order.
pub const TABLE3_COLUMNS: [(&str, OptionKind, MtmConvention); 4] = [
    ("put_linear", OptionKind::Put, MtmConvention::RiskFree),
    ("put_nonlinear", OptionKind::Put, MtmConvention::Risky),
    ("call_linear", OptionKind::Call, MtmConvention::RiskFree),
    ("call_nonlinear", OptionKind::Call, MtmConvention::Risky),
];

pub fn table3_config(base: &RunConfig, kind: OptionKind, mtm: MtmConvention) -> RunConfig {
    let mut cfg = *base;
    cfg.option.kind = kind;
    cfg.mtm = mtm;
    cfg
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table3Row {
    pub spot: f64,
    pub pde: [f64; 4],
    pub fbsde: Option<[f64; 4]>,
    pub stderr: Option<[f64; 4]>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table3 {
    pub rows: Vec<Table3Row>,
}

impl Table3 {
    /// Columns `S, <col>_fbsde, <col>_pde, <col>_stderr` for each column.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header = vec!["S".to_string()];
        for (name, ..) in TABLE3_COLUMNS {
            header.extend([format!("{name}_fbsde"), format!("{name}_pde"), format!("{name}_stderr")]);
        }
        w.write_record(&header)?;
        for r in &self.rows {
            let mut rec = vec![r.spot.to_string()];
            for c in 0..4 {
                let mc = r.fbsde.map_or(String::new(), |v| format!("{:.6e}", v[c]));
                let se = r.stderr.map_or(String::new(), |v| format!("{:.3e}", v[c]));
                rec.extend([mc, format!("{:.6e}", r.pde[c]), se]);
            }
            w.write_record(&rec)?;
        }
        finish(w)
    }
}

/// PDE adjustments at [`TABLE3_SPOTS`] for the four columns, with Monte
/// Carlo values when a regression grid is supplied.
pub fn run_table3(base: &RunConfig, monte_carlo: Option<(&RegressionGrid, u64)>) -> Result<Table3> {
    let columns: Vec<Result<(Vec<f64>, Option<Vec<FbsdeRow>>)>> = TABLE3_COLUMNS
        .par_iter()
        .map(|&(_, kind, mtm)| {
            let cfg = table3_config(base, kind, mtm);
            let pde = solve(&cfg)?;
            let values = TABLE3_SPOTS.iter().map(|&s| pde.xva(s)).collect();
            let mc = monte_carlo
                .map(|(grid, seed)| fbsde_xva(&cfg, grid, seed, &TABLE3_SPOTS))
                .transpose()?;
            Ok((values, mc))
        })
        .collect();
    let columns = columns.into_iter().collect::<Result<Vec<_>>>()?;
    let rows = TABLE3_SPOTS
        .iter()
        .enumerate()
        .map(|(i, &spot)| {
            let pick = |f: &dyn Fn(&FbsdeRow) -> f64| -> Option<[f64; 4]> {
                let mut out = [0.0; 4];
                for (c, col) in columns.iter().enumerate() {
                    out[c] = f(&col.1.as_ref()?[i]);
                }
                Some(out)
            };
            Table3Row {
                spot,
                pde: std::array::from_fn(|c| columns[c].0[i]),
                fbsde: pick(&|r| r.xva),
                stderr: pick(&|r| r.stderr),
            }
        })
        .collect();
    Ok(Table3 { rows })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParameter {
    Sigma,
    GammaK,
    RX,
}

impl SweepParameter {
    pub fn apply(self, base: &RunConfig, value: f64) -> RunConfig {
        let mut cfg = *base;
        match self {
            SweepParameter::Sigma => cfg.market.sigma = value,
            SweepParameter::GammaK => cfg.market.gamma_k = value,
            SweepParameter::RX => cfg.market.r_x = value,
        }
        cfg
    }

    pub fn name(self) -> &'static str {
        match self {
            SweepParameter::Sigma => "sigma",
            SweepParameter::GammaK => "gamma_k",
            SweepParameter::RX => "r_x",
        }
    }

    /// Curve label; the hurdle rate equal to the issuer funding rate means
    /// no capital charge when `φ = 1`.
    pub fn label(self, base: &RunConfig, value: f64) -> Option<String> {
        let no_kva = (value - base.market.r).abs() < 1e-12 || (value - base.market.r_b).abs() < 1e-12;
        (self == SweepParameter::GammaK && no_kva).then(|| "no-KVA".to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepCurve {
    pub value: f64,
    pub label: Option<String>,
    pub samples: Vec<GreekRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Sweep {
    pub parameter: SweepParameter,
    pub curves: Vec<SweepCurve>,
}

#[derive(Serialize)]
struct SweepCsvRow<'a> {
    parameter: &'a str,
    value: f64,
    label: &'a str,
    #[serde(rename = "S")]
    s: f64,
    price: f64,
    delta: f64,
    gamma: f64,
    xva: f64,
}

impl Sweep {
    pub fn to_csv(&self) -> Result<String> {
        let rows: Vec<SweepCsvRow> = self
            .curves
            .iter()
            .flat_map(|c| {
                c.samples.iter().map(move |g| SweepCsvRow {
                    parameter: self.parameter.name(),
                    value: c.value,
                    label: c.label.as_deref().unwrap_or(""),
                    s: g.s,
                    price: g.value,
                    delta: g.delta,
                    gamma: g.gamma,
                    xva: g.xva,
                })
            })
            .collect();
        to_csv(&rows)
    }

    /// Whether XVA at every sampled spot does not increase along the
    /// curves, taken in increasing parameter order.
    pub fn xva_nonincreasing(&self, slack: f64) -> bool {
        let mut order: Vec<&SweepCurve> = self.curves.iter().collect();
        order.sort_by(|a, b| a.value.total_cmp(&b.value));
        order.windows(2).all(|w| {
            w[0].samples
                .iter()
                .zip(&w[1].samples)
                .all(|(lo, hi)| hi.xva <= lo.xva + slack)
        })
    }
}

/// One solve per parameter value, sampled at `spots`.
pub fn run_sweep(base: &RunConfig, parameter: SweepParameter, values: &[f64], spots: &[f64]) -> Result<Sweep> {
    let curves: Vec<Result<SweepCurve>> = values
        .par_iter()
        .map(|&v| {
            let cfg = parameter.apply(base, v);
            let r = solve(&cfg)?;
            Ok(SweepCurve {
                value: v,
                label: parameter.label(base, v),
                samples: greeks(&r, spots),
            })
        })
        .collect();
    Ok(Sweep {
        parameter,
        curves: curves.into_iter().collect::<Result<_>>()?,
    })
}

/// Serializes rows with a header line.
pub fn to_csv<T: Serialize>(rows: &[T]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    finish(w)
}

fn finish(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}
