//! The `reduce`, `simulate`, `bogo` and `moser` subcommands.

use std::path::Path;

use serde::Deserialize;
use serde_json::{json, Value};

use todavolt_core::bogo::{self, RootType};
use todavolt_core::catalog::{self, Family, Kind, SpecialField, Symmetry, SystemId};
use todavolt_core::flows::{self, Monitors, Trajectory};
use todavolt_core::moser;
use todavolt_core::poisson::TensorJson;
use todavolt_core::reduction::reduced_bracket;
use todavolt_core::{Error, FiniteGroupAction, Gaussian, PoissonTensor, PolyMatrix, PolyVectorField, Result, Q};

pub fn read_tensor(path: &Path) -> Result<PoissonTensor> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidArgument(format!("cannot read {}: {e}", path.display())))?;
    let json: TensorJson = serde_json::from_str(&text)
        .map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))?;
    PoissonTensor::from_json(&json, path.display().to_string())
}

pub fn tensor_value<F: todavolt_core::Scalar>(t: &PoissonTensor<F>) -> Value {
    let names = t.vars().names();
    let entries: Vec<Value> = t
        .entries()
        .map(|(i, j, p)| json!({"i": i, "j": j, "left": names[i], "right": names[j], "poly": p.to_string()}))
        .collect();
    json!({ "label": t.label(), "dim": t.dim(), "vars": names, "entries": entries })
}

pub fn reduce(sys: SystemId, map: Symmetry, bracket: u32, input: Option<&Path>) -> Result<(Value, String)> {
    let pi = match input {
        Some(p) => read_tensor(p)?,
        None if bracket == 4 && sys.canonical().family == Family::Toda => catalog::volterra_on_toda_space(sys.n, 4)?,
        None => catalog::tensor(sys, bracket)?,
    };
    let target = catalog::reduced_system(map, sys)?;
    let (value, text) = if map == Symmetry::PhiTilde {
        let group = FiniteGroupAction::generated_by(&[catalog::gaussian_symmetry(map, sys)?])?;
        let pi = pi.map_scalars(|c: &Q| Gaussian::from(c.clone()));
        let red = reduced_bracket(&pi, &group, &catalog::gaussian_chart(map, sys)?)?;
        (tensor_value(&red), format!("{red:?}"))
    } else {
        let group = FiniteGroupAction::generated_by(&[catalog::symmetry(map, sys)?])?;
        let red = reduced_bracket(&pi, &group, &catalog::chart(map, sys)?)?;
        (tensor_value(&red), format!("{red:?}"))
    };
    let body = json!({
        "schema": "todavolt.reduce/1",
        "system": sys.to_string(),
        "map": map.to_string(),
        "bracket": bracket,
        "reduced_system": target.to_string(),
        "tensor": value,
    });
    Ok((body, format!("{map} on {sys}, bracket {bracket} -> {target}\n{text}")))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlowChoice {
    /// Hamiltonian flow of `H_k` in the family's lowest bracket.
    Hamiltonian(u32),
    /// Lax flow `[L, (L^k)_+]`.
    Lax(u32),
    /// The B-type Volterra lattice written directly.
    BVolterra,
}

pub struct SimSpec {
    pub sys: SystemId,
    pub flow: FlowChoice,
    pub t_end: f64,
    pub h: f64,
    pub seed: u64,
    pub init: Option<std::path::PathBuf>,
    pub a_interval: Option<(f64, f64)>,
    pub b_interval: (f64, f64),
    pub every: usize,
}

#[derive(Deserialize)]
struct InitFile {
    #[serde(default)]
    a: Vec<f64>,
    #[serde(default)]
    b: Vec<f64>,
}

fn initial_point(spec: &SimSpec) -> Result<Vec<f64>> {
    let vars = catalog::variables(spec.sys);
    let Some(path) = &spec.init else {
        let default_a = (0.1, 1.0);
        return Ok(flows::random_point(spec.sys, spec.seed, spec.a_interval.unwrap_or(default_a), spec.b_interval));
    };
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidArgument(format!("cannot read {}: {e}", path.display())))?;
    let init: InitFile =
        serde_json::from_str(&text).map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))?;
    let want_a = vars.names().iter().filter(|n| n.starts_with('a')).count();
    let want_b = vars.len() - want_a;
    if init.a.len() != want_a || init.b.len() != want_b {
        return Err(Error::InvalidArgument(format!(
            "{} needs {want_a} a-values and {want_b} b-values, got {} and {}",
            spec.sys,
            init.a.len(),
            init.b.len()
        )));
    }
    Ok(init.a.into_iter().chain(init.b).collect())
}

fn field(spec: &SimSpec) -> Result<PolyVectorField> {
    match spec.flow {
        FlowChoice::Hamiltonian(k) => catalog::special_field(spec.sys, SpecialField::Flow(k)),
        FlowChoice::Lax(k) => flows::lax_field(spec.sys, k),
        FlowChoice::BVolterra => catalog::special_field(spec.sys, SpecialField::BnVolterraFlow),
    }
}

pub struct SimOutcome {
    pub trajectory: Trajectory,
    pub monitors: Monitors,
    pub summary: Value,
}

pub fn simulate(spec: &SimSpec) -> Result<std::result::Result<SimOutcome, Value>> {
    let f = field(spec)?;
    let x0 = initial_point(spec)?;
    let kmax = catalog::lax(spec.sys).size().min(4) as u32;
    let base = json!({
        "schema": "todavolt.simulate/1",
        "system": spec.sys.to_string(),
        "flow": format!("{:?}", spec.flow),
        "equations": f.equations(),
        "x0": x0,
        "t_end": spec.t_end,
        "h": spec.h,
        "seed": spec.seed,
    });
    let traj = match flows::integrate(&f, &x0, spec.t_end, spec.h) {
        Ok(t) => t,
        Err(Error::NonFinite { t, last_valid_t }) => {
            let mut v = base;
            v["error"] = json!({ "kind": "non_finite", "t": t, "last_valid_t": last_valid_t });
            return Ok(Err(v));
        }
        Err(e) => return Err(e),
    };
    let mon = flows::monitors(&traj, spec.sys, kmax)?;
    let mut summary = base;
    summary["final_state"] = json!(traj.last());
    summary["hamiltonian_drift"] = json!(mon
        .hamiltonian_degrees
        .iter()
        .zip(&mon.hamiltonian_drift)
        .map(|(k, d)| json!({ "k": k, "max_drift": d }))
        .collect::<Vec<_>>());
    summary["charpoly_drift"] = json!(mon.charpoly_drift);
    summary["steps"] = json!(traj.times.len() - 1);
    Ok(Ok(SimOutcome { trajectory: traj, monitors: mon, summary }))
}

pub fn csv(out: &SimOutcome, every: usize) -> String {
    let mut buf = Vec::new();
    flows::write_csv(&mut buf, &out.trajectory, Some(&out.monitors), every).expect("writing to memory");
    String::from_utf8(buf).expect("ascii")
}

pub fn bogo(t: RootType, rank: usize) -> Result<(Value, String)> {
    let rd = bogo::root_data(t, rank)?;
    let signs = bogo::sign_matrix(&rd);
    let b_eqs = bogo::b_system_rhs(&rd).equations();
    let x_eqs = bogo::x_system_rhs(&rd).equations();
    let chain_ok = bogo::chain_rule_residual(&rd)?.iter().all(todavolt_core::Poly::is_zero);
    let matched = bogo::match_catalog(&rd)?;
    let matched_json = matched.as_ref().map(|(sys, c)| json!({ "system": sys.to_string(), "change": c.describe() }));
    let body = json!({
        "schema": "todavolt.bogo/1",
        "type": t.to_string(),
        "rank": rank,
        "simple_roots": rd.simple,
        "lowest_root": rd.lowest,
        "gram": rd.gram,
        "marks": rd.marks,
        "sign_matrix": signs,
        "b_system": b_eqs,
        "edges": bogo::x_vars(&rd).names(),
        "x_system": x_eqs,
        "chain_rule_holds": chain_ok,
        "catalog_match": matched_json,
    });
    let mut text = format!("{t}{rank}: marks {:?}\nsign matrix {:?}\n", rd.marks, signs);
    text.push_str(&format!("b-system:\n  {}\n", b_eqs.join("\n  ")));
    text.push_str(&format!("x-system:\n  {}\n", if x_eqs.is_empty() { "(none)".into() } else { x_eqs.join("\n  ") }));
    text.push_str(&format!("chain rule holds: {chain_ok}\n"));
    if let Some((sys, c)) = &matched {
        text.push_str(&format!("matches {sys} via {}\n", c.describe().join(", ")));
    }
    Ok((body, text))
}

fn matrix_json(m: &PolyMatrix<Gaussian>) -> Value {
    json!(m.to_strings())
}

fn matrix_text(m: &PolyMatrix<Gaussian>) -> String {
    m.to_strings().iter().map(|r| format!("  [{}]\n", r.join(", "))).collect()
}

pub fn moser(size: usize) -> Result<(Value, String)> {
    let split = moser::square_and_split(size)?;
    let flow = moser::x_flow((size - 1) / 2)?;
    let mut blocks = Vec::new();
    let mut text = format!("L ({size}x{size}):\n{}", matrix_text(&split.lax));
    text.push_str(&format!("L^2:\n{}", matrix_text(&split.square)));
    text.push_str(&format!("x-flow:\n  {}\n", flow.equations().join("\n  ")));
    for (label, block) in [("odd_kept", &split.odd_kept), ("even_kept", &split.even_kept)] {
        let ident = moser::identify_jacobi(block)?;
        let scaling = moser::find_toda_scaling(&ident)?;
        blocks.push(json!({
            "name": label,
            "kept_indices": block.kept,
            "tag": block.tag(),
            "real": block.is_real(),
            "matrix": matrix_json(&block.matrix),
            "identification": ident.mapping(),
            "induced": ident.induced.equations(),
            "catalog_scaling": scaling,
        }));
        text.push_str(&format!("{label} rows/cols {:?}, type {}:\n{}", block.kept, block.tag(), matrix_text(&block.matrix)));
        text.push_str(&format!("  {}\n  {}\n", ident.mapping().join(", "), ident.induced.equations().join("\n  ")));
        if let Some(s) = scaling {
            text.push_str(&format!("  matches {} with a = {}*A^2, b = {}*B\n", s.system, s.alpha, s.beta));
        }
    }
    let body = json!({
        "schema": "todavolt.moser/1",
        "N": size,
        "lax": matrix_json(&split.lax),
        "square": matrix_json(&split.square),
        "cross_blocks_vanish": split.cross_blocks_vanish(),
        "x_flow": flow.equations(),
        "blocks": blocks,
    });
    Ok((body, text))
}

pub fn default_flow(sys: SystemId) -> FlowChoice {
    match (sys.canonical().family, sys.canonical().kind) {
        (Family::Volterra, Kind::B) => FlowChoice::BVolterra,
        _ => FlowChoice::Hamiltonian(2),
    }
}
