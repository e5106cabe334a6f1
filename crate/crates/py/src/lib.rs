//! Python bindings. Results come back as plain dicts and lists.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use cluster_chain::correlators::{SumMode, XStateRdm};
use cluster_chain::measures::{DiscordMode, ReportOptions};
use cluster_chain::sweep::{run_sweep, SweepSpec};
use cluster_chain::{ed, validation, ModelParams, Sector};

fn err(e: cluster_chain::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn params(jx: f64, jy: f64, h: f64, n: usize, sector: &str) -> PyResult<ModelParams> {
    let sector: Sector = sector.parse().map_err(err)?;
    Ok(ModelParams::new(jx, jy, h, n).map_err(err)?.with_sector(sector))
}

fn rdm_dict<'py>(py: Python<'py>, r: &XStateRdm) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("u", r.u)?;
    d.set_item("v", r.v)?;
    d.set_item("w", r.w)?;
    d.set_item("x", (r.x.re, r.x.im))?;
    d.set_item("z", (r.z.re, r.z.im))?;
    Ok(d)
}

/// All observables at one point of the analytic solution.
#[pyfunction]
#[pyo3(signature = (jx, jy, h, n, sector = "even", discord = "fixed", thermodynamic = false))]
fn report<'py>(
    py: Python<'py>,
    jx: f64,
    jy: f64,
    h: f64,
    n: usize,
    sector: &str,
    discord: &str,
    thermodynamic: bool,
) -> PyResult<Bound<'py, PyDict>> {
    let p = params(jx, jy, h, n, sector)?;
    let discord = match discord {
        "fixed" => DiscordMode::FixedBasis,
        "grid" => DiscordMode::GridMinimize,
        other => return Err(PyValueError::new_err(format!("unknown discord mode `{other}`"))),
    };
    let options = ReportOptions {
        discord,
        sum_mode: if thermodynamic { SumMode::Thermodynamic } else { SumMode::Grid },
        ..ReportOptions::default()
    };
    let r = cluster_chain::measures::report(&p, &options).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("energy", r.energy)?;
    d.set_item("energy_even", r.energy_even)?;
    d.set_item("energy_odd", r.energy_odd)?;
    d.set_item("ground_multiplicity", r.ground_multiplicity)?;
    d.set_item("degenerate", r.degenerate)?;
    d.set_item("Mz", r.mz)?;
    d.set_item("C12", r.c12)?;
    d.set_item("C13", r.c13)?;
    d.set_item("I12", r.i12)?;
    d.set_item("I13", r.i13)?;
    d.set_item("D12", r.d12)?;
    d.set_item("D13", r.d13)?;
    d.set_item("Eglobal", r.e_global)?;
    d.set_item("gamma", r.gamma)?;
    d.set_item("xi", r.xi)?;
    d.set_item("rdm12", rdm_dict(py, &r.rdm12)?)?;
    d.set_item("rdm13", rdm_dict(py, &r.rdm13)?)?;
    Ok(d)
}

/// The same observables from exact diagonalization (N ≤ 12).
#[pyfunction]
fn ed_report<'py>(py: Python<'py>, jx: f64, jy: f64, h: f64, n: usize) -> PyResult<Bound<'py, PyDict>> {
    let o = ed::report(&params(jx, jy, h, n, "even")?).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("energy", o.energy)?;
    d.set_item("multiplicity", o.multiplicity)?;
    d.set_item("Mz", o.mz)?;
    d.set_item("C12", o.nearest.concurrence)?;
    d.set_item("C13", o.next_nearest.concurrence)?;
    d.set_item("I12", o.nearest.mutual_information)?;
    d.set_item("I13", o.next_nearest.mutual_information)?;
    d.set_item("D12", o.nearest.discord)?;
    d.set_item("D13", o.next_nearest.discord)?;
    d.set_item("Eglobal", o.e_global)?;
    Ok(d)
}

#[pyfunction]
#[pyo3(signature = (jx, jy, h, n, sector = "even"))]
fn degeneracy<'py>(py: Python<'py>, jx: f64, jy: f64, h: f64, n: usize, sector: &str) -> PyResult<Bound<'py, PyDict>> {
    let p = params(jx, jy, h, n, sector)?;
    let r = cluster_chain::classify_degeneracy(&p, p.default_tol_zero());
    let d = PyDict::new(py);
    d.set_item("zero_modes", r.zero_modes)?;
    d.set_item("degeneracy", r.degeneracy)?;
    d.set_item("kind", format!("{:?}", r.kind))?;
    d.set_item("min_omega", r.min_omega)?;
    d.set_item("ground_multiplicity", r.ground_multiplicity)?;
    Ok(d)
}

/// Runs a sweep from its JSON config. Returns `(header, rows)`; the last
/// column is the degeneracy flag as 0.0 / 1.0.
#[pyfunction]
fn sweep(config: &str) -> PyResult<(Vec<String>, Vec<Vec<f64>>)> {
    let spec = SweepSpec::from_json(config).map_err(err)?;
    let table = run_sweep(&spec).map_err(err)?;
    let rows = table
        .rows
        .iter()
        .map(|r| {
            let mut v: Vec<f64> = r.params.to_vec();
            v.extend(&r.values);
            v.push(if r.degenerate { 1.0 } else { 0.0 });
            v
        })
        .collect();
    Ok((table.header(), rows))
}

/// Largest analytic-vs-ED deviation per quantity.
#[pyfunction]
#[pyo3(signature = (lengths = vec![8, 10], points = 10, seed = 2024))]
fn validate<'py>(py: Python<'py>, lengths: Vec<usize>, points: usize, seed: u64) -> PyResult<Bound<'py, PyDict>> {
    let s = validation::run(&lengths, points, seed).map_err(err)?;
    let d = PyDict::new(py);
    for (k, v) in &s.max_deviation {
        d.set_item(*k, *v)?;
    }
    Ok(d)
}

#[pymodule]
fn clusterchain(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(report, m)?)?;
    m.add_function(wrap_pyfunction!(ed_report, m)?)?;
    m.add_function(wrap_pyfunction!(degeneracy, m)?)?;
    m.add_function(wrap_pyfunction!(sweep, m)?)?;
    m.add_function(wrap_pyfunction!(validate, m)?)?;
    Ok(())
}
