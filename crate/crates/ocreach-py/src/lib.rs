//! Python bindings. Automata and target systems cross the boundary as JSON strings in the file formats
//! used by the CLI; integers of any size map to Python `int`.

use num_bigint::BigInt;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use ocreach::automaton::{brute_force_decide, OracleBounds, OracleDecision, Semantics, WeightedAutomaton};
use ocreach::cover::{cover_table as core_cover_table, vass_cover as core_vass_cover};
use ocreach::decide::{decide as core_decide, DecideOptions};
use ocreach::hardness::{reduce_to_gadget, SubsetSumInstance};
use ocreach::targets::{catalog, classify as core_classify, LinearIntervalSystem};

fn to_py(e: ocreach::Error) -> PyErr {
    if e.is_input_error() {
        PyValueError::new_err(e.to_string())
    } else {
        PyRuntimeError::new_err(e.to_string())
    }
}

fn automaton(text: &str) -> PyResult<WeightedAutomaton> {
    WeightedAutomaton::from_json_str(text).map_err(to_py)
}

fn target(text: &str) -> PyResult<LinearIntervalSystem> {
    LinearIntervalSystem::from_json_str(text).map_err(to_py)
}

fn semantics(name: &str) -> PyResult<Semantics> {
    name.parse().map_err(to_py)
}

/// Side of the dichotomy: "tractable" or "np-hard".
#[pyfunction]
fn classify(target_json: &str, sem: &str) -> PyResult<String> {
    Ok(core_classify(&target(target_json)?, semantics(sem)?).map_err(to_py)?.side.to_string())
}

/// Full classification report as a JSON string.
#[pyfunction]
fn classify_report(target_json: &str, sem: &str) -> PyResult<String> {
    Ok(core_classify(&target(target_json)?, semantics(sem)?).map_err(to_py)?.to_json().to_string())
}

/// Decision report as a JSON string with keys `reachable`, `method`, `classification`.
#[pyfunction]
#[pyo3(signature = (automaton_json, target_json, sem, params, verify = false))]
fn decide(automaton_json: &str, target_json: &str, sem: &str, params: Vec<BigInt>, verify: bool) -> PyResult<String> {
    let opts = DecideOptions { verify, ..DecideOptions::default() };
    let d = core_decide(&automaton(automaton_json)?, &target(target_json)?, &params, semantics(sem)?, &opts).map_err(to_py)?;
    Ok(d.to_json().to_string())
}

/// Discontinuities `(u, v)` of the coverability function between two states of an acyclic automaton.
#[pyfunction]
fn cover_table(automaton_json: &str, p: usize, q: usize) -> PyResult<Vec<(BigInt, BigInt)>> {
    let f = core_cover_table(&automaton(automaton_json)?, p, q).map_err(to_py)?;
    Ok(f.points().to_vec())
}

/// Whether `q(v')` with `v' ≥ v` is reachable from `p(u)` under VASS semantics.
#[pyfunction]
fn vass_cover(automaton_json: &str, p: usize, u: BigInt, q: usize, v: BigInt) -> PyResult<bool> {
    core_vass_cover(&automaton(automaton_json)?, p, &u, q, &v).map_err(to_py)
}

/// Bounded search; returns the transition indices of a run ending in `S[t]`, or None.
#[pyfunction]
#[pyo3(signature = (automaton_json, target_json, sem, params, counter_bound, length_bound))]
fn oracle(
    automaton_json: &str,
    target_json: &str,
    sem: &str,
    params: Vec<BigInt>,
    counter_bound: BigInt,
    length_bound: usize,
) -> PyResult<Option<Vec<usize>>> {
    let set = target(target_json)?.instantiate(&params).map_err(to_py)?;
    let bounds = OracleBounds::new(counter_bound, length_bound);
    Ok(match brute_force_decide(&automaton(automaton_json)?, semantics(sem)?, &set, &bounds) {
        OracleDecision::Reachable { run, .. } => Some(run),
        OracleDecision::NotReachableWithinBounds => None,
    })
}

/// Gadget automaton JSON, parameters and subset-sum verdict for an NP-hard target.
#[pyfunction]
fn subset_sum_gadget(target_json: &str, sem: &str, items: Vec<BigInt>, target_sum: BigInt) -> PyResult<(String, Vec<BigInt>, bool)> {
    let r = reduce_to_gadget(&SubsetSumInstance::new(items, target_sum), &target(target_json)?, semantics(sem)?).map_err(to_py)?;
    Ok((r.automaton.to_json().to_string(), r.t, r.expected))
}

/// JSON of a catalog system such as "S3" or "interval".
#[pyfunction]
fn catalog_target(name: &str) -> PyResult<String> {
    catalog::by_name(name)
        .map(|e| e.system.to_json().to_string())
        .ok_or_else(|| PyValueError::new_err(format!("no catalog entry {name:?}")))
}

#[pymodule]
fn ocreach_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(classify_report, m)?)?;
    m.add_function(wrap_pyfunction!(decide, m)?)?;
    m.add_function(wrap_pyfunction!(cover_table, m)?)?;
    m.add_function(wrap_pyfunction!(vass_cover, m)?)?;
    m.add_function(wrap_pyfunction!(oracle, m)?)?;
    m.add_function(wrap_pyfunction!(subset_sum_gadget, m)?)?;
    m.add_function(wrap_pyfunction!(catalog_target, m)?)?;
    Ok(())
}
