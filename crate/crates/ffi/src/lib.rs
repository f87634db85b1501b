//! C ABI over `parallel-ea`.
//!
//! Every fallible function returns a [`PeaStatus`] and writes its result
//! through an out-pointer. On failure, [`pea_last_error_message`] describes
//! the most recent error on the calling thread. Handles are opaque and must
//! be released with their `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::sync::Arc;

use parallel_ea::bounds::{best_bound, seq_fitness_level_bound, topology_bound};
use parallel_ea::island_model::{run, ModelConfig};
use parallel_ea::objective::{BitString, Objective};
use parallel_ea::oracle::{expected_parallel_time, OracleOptions};
use parallel_ea::propagation::run_hitting_times;
use parallel_ea::rng;
use parallel_ea::topology::{TopologyGraph, TopologySpec};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PeaStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Topology = 3,
    Objective = 4,
    Model = 5,
    Bound = 6,
    Oracle = 7,
    Panic = 8,
}

/// Result of one island-model run.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PeaRunOutcome {
    pub t_par: u64,
    pub t_seq: u64,
    pub t_com: u64,
    pub success: bool,
    pub best_fitness: i64,
}

/// Migration topology handle.
pub struct PeaTopology(Arc<TopologyGraph>);

/// Objective function handle.
pub struct PeaObjective(Objective);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

type Failure = (PeaStatus, String);

fn fail<E: std::fmt::Display>(status: PeaStatus) -> impl Fn(E) -> Failure {
    move |e| (status, e.to_string())
}

fn guard<F: FnOnce() -> Result<(), Failure>>(body: F) -> PeaStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => PeaStatus::Ok,
        Ok(Err((status, message))) => {
            set_error(message);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            PeaStatus::Panic
        }
    }
}

unsafe fn arg<'a, T>(p: *const T, name: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or((PeaStatus::NullPointer, format!("{name} is null")))
}

unsafe fn out<'a, T>(p: *mut T, name: &str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or((PeaStatus::NullPointer, format!("{name} is null")))
}

unsafe fn text<'a>(p: *const c_char, name: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err((PeaStatus::NullPointer, format!("{name} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| (PeaStatus::InvalidArgument, format!("{name} is not UTF-8")))
}

/// Message of the last failed call on this thread, or NULL. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn pea_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Builds a topology from its text form (`uniring`, `biring`, `torus`,
/// `torus:WxH`, `hypercube`, `complete`) and island count.
///
/// # Safety
/// `name` must be a NUL-terminated string; `out_handle` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pea_topology_new(name: *const c_char, mu: usize, out_handle: *mut *mut PeaTopology) -> PeaStatus {
    guard(|| {
        let slot = out(out_handle, "out")?;
        let spec = TopologySpec::resolve(text(name, "name")?, mu).map_err(fail(PeaStatus::Topology))?;
        let graph = TopologyGraph::build(spec).map_err(fail(PeaStatus::Topology))?;
        *slot = Box::into_raw(Box::new(PeaTopology(Arc::new(graph))));
        Ok(())
    })
}

/// # Safety
/// `handle` must come from [`pea_topology_new`] and not be freed twice. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn pea_topology_free(handle: *mut PeaTopology) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// # Safety
/// `handle` must be a live topology handle or NULL (returns 0).
#[no_mangle]
pub unsafe extern "C" fn pea_topology_num_vertices(handle: *const PeaTopology) -> usize {
    handle.as_ref().map_or(0, |t| t.0.num_vertices())
}

/// # Safety
/// `handle` must be a live topology handle or NULL (returns 0).
#[no_mangle]
pub unsafe extern "C" fn pea_topology_num_edges(handle: *const PeaTopology) -> usize {
    handle.as_ref().map_or(0, |t| t.0.num_edges())
}

/// # Safety
/// `handle` must be a live topology handle; `out_diameter` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pea_topology_diameter(handle: *const PeaTopology, out_diameter: *mut usize) -> PeaStatus {
    guard(|| {
        let t = arg(handle, "topology")?;
        *out(out_diameter, "out")? = t.0.diameter().map_err(fail(PeaStatus::Topology))?;
        Ok(())
    })
}

/// Builds an objective from `onemax`, `lo`, `jump:k` or `custom:trailingones`.
///
/// # Safety
/// `name` must be a NUL-terminated string; `out_handle` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pea_objective_new(name: *const c_char, n: usize, out_handle: *mut *mut PeaObjective) -> PeaStatus {
    guard(|| {
        let slot = out(out_handle, "out")?;
        let objective = Objective::parse(text(name, "name")?, n).map_err(fail(PeaStatus::Objective))?;
        *slot = Box::into_raw(Box::new(PeaObjective(objective)));
        Ok(())
    })
}

/// # Safety
/// `handle` must come from [`pea_objective_new`] and not be freed twice. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn pea_objective_free(handle: *mut PeaObjective) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// Evaluates `bits` (one byte per bit, 0 or 1) of length `len`.
///
/// # Safety
/// `bits` must point to `len` readable bytes; `out_value` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pea_objective_evaluate(
    handle: *const PeaObjective,
    bits: *const u8,
    len: usize,
    out_value: *mut i64,
) -> PeaStatus {
    guard(|| {
        let objective = &arg(handle, "objective")?.0;
        if bits.is_null() {
            return Err((PeaStatus::NullPointer, "bits is null".into()));
        }
        let raw = std::slice::from_raw_parts(bits, len);
        if raw.iter().any(|&b| b > 1) {
            return Err((PeaStatus::InvalidArgument, "bits must be 0 or 1".into()));
        }
        let x = BitString::from_bools(&raw.iter().map(|&b| b == 1).collect::<Vec<_>>());
        *out(out_value, "out")? = objective.evaluate(&x).map_err(fail(PeaStatus::Objective))?;
        Ok(())
    })
}

fn model(objective: &PeaObjective, topology: &PeaTopology, p: f64, tau: u64) -> ModelConfig {
    ModelConfig::new(objective.0.clone(), topology.0.clone()).with_p(p).with_tau(tau)
}

/// Runs the island model once from a uniform random start.
///
/// # Safety
/// Handles must be live; `out_outcome` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pea_run(
    objective: *const PeaObjective,
    topology: *const PeaTopology,
    p: f64,
    tau: u64,
    seed: u64,
    budget: u64,
    out_outcome: *mut PeaRunOutcome,
) -> PeaStatus {
    guard(|| {
        let cfg = model(arg(objective, "objective")?, arg(topology, "topology")?, p, tau)
            .with_seed(seed)
            .with_budget(budget);
        let o = run(&cfg).map_err(fail(PeaStatus::Model))?;
        *out(out_outcome, "out")? = PeaRunOutcome {
            t_par: o.t_par,
            t_seq: o.t_seq,
            t_com: o.t_com,
            success: o.success,
            best_fitness: o.best_fitness,
        };
        Ok(())
    })
}

/// Samples propagation hitting times: `out_times[k-1] = T(k)` for `k = 1..=μ`,
/// or -1 where the budget ran out. `out_len` must equal the island count.
///
/// # Safety
/// `out_times` must point to `out_len` writable values.
#[no_mangle]
pub unsafe extern "C" fn pea_hitting_times(
    topology: *const PeaTopology,
    p: f64,
    source: usize,
    budget: u64,
    seed: u64,
    out_times: *mut i64,
    out_len: usize,
) -> PeaStatus {
    guard(|| {
        let g = &arg(topology, "topology")?.0;
        if out_times.is_null() {
            return Err((PeaStatus::NullPointer, "out_times is null".into()));
        }
        if out_len != g.num_vertices() {
            return Err((PeaStatus::InvalidArgument, format!("out_len must be {}", g.num_vertices())));
        }
        let mut stream = rng::stream(seed, &[]);
        let h = run_hitting_times(g, p, source, budget, &mut stream).map_err(fail(PeaStatus::InvalidArgument))?;
        let slots = std::slice::from_raw_parts_mut(out_times, out_len);
        for (slot, (_, t)) in slots.iter_mut().zip(h.iter()) {
            *slot = t.map_or(-1, |t| t as i64);
        }
        Ok(())
    })
}

/// Single-island expected time bound `Σ 1/s_i` over the canonical levels.
///
/// # Safety
/// `objective` must be live; `out_value` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pea_seq_bound(objective: *const PeaObjective, out_value: *mut f64) -> PeaStatus {
    guard(|| {
        let part = arg(objective, "objective")?.0.canonical_partition();
        *out(out_value, "out")? = seq_fitness_level_bound(part.s()).map_err(fail(PeaStatus::Bound))?;
        Ok(())
    })
}

/// Expected parallel time bound for the topology's kind and island count
/// (`+inf` at `p = 0`).
///
/// # Safety
/// Handles must be live; `out_value` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pea_topology_bound(
    objective: *const PeaObjective,
    topology: *const PeaTopology,
    p: f64,
    out_value: *mut f64,
) -> PeaStatus {
    guard(|| {
        let part = arg(objective, "objective")?.0.canonical_partition();
        let g = &arg(topology, "topology")?.0;
        let r = topology_bound(g.kind(), &part, g.num_vertices(), p).map_err(fail(PeaStatus::Bound))?;
        *out(out_value, "out")? = r.value;
        Ok(())
    })
}

/// Per-level minimum over every bound valid for the topology.
///
/// # Safety
/// Handles must be live; `out_value` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pea_best_bound(
    objective: *const PeaObjective,
    topology: *const PeaTopology,
    p: f64,
    out_value: *mut f64,
) -> PeaStatus {
    guard(|| {
        let part = arg(objective, "objective")?.0.canonical_partition();
        let g = &arg(topology, "topology")?.0;
        let r = best_bound(g.kind(), &part, g.num_vertices(), p).map_err(fail(PeaStatus::Bound))?;
        *out(out_value, "out")? = r.value;
        Ok(())
    })
}

/// Exact expected `t_par` for a tiny instance. `fixed_start` may be NULL for a
/// uniform random start, or a string of `0`/`1` placed on every island.
///
/// # Safety
/// Handles must be live; `fixed_start` must be NULL or NUL-terminated;
/// `out_value` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pea_oracle_expected_time(
    objective: *const PeaObjective,
    topology: *const PeaTopology,
    p: f64,
    tau: u64,
    fixed_start: *const c_char,
    out_value: *mut f64,
) -> PeaStatus {
    guard(|| {
        let mut cfg = model(arg(objective, "objective")?, arg(topology, "topology")?, p, tau);
        if !fixed_start.is_null() {
            let start: BitString = text(fixed_start, "fixed_start")?
                .parse()
                .map_err(fail(PeaStatus::InvalidArgument))?;
            cfg = cfg.with_fixed_start(start);
        }
        *out(out_value, "out")? = expected_parallel_time(&cfg, OracleOptions::default()).map_err(fail(PeaStatus::Oracle))?;
        Ok(())
    })
}
