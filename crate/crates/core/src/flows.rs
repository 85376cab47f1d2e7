//! Fixed-step RK4 integration of polynomial fields, Lax right-hand sides and
//! conservation monitors.

use std::io::Write;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::catalog::{self, SystemId};
use crate::error::{Error, Result};
use crate::matrix::LaxMatrix;
use crate::numeric;
use crate::poisson::PolyVectorField;
use crate::polyalg::{Poly, Scalar, Q};

/// A polynomial flattened for fast `f64` evaluation.
#[derive(Debug, Clone)]
pub struct CompiledPoly {
    terms: Vec<(f64, Vec<(usize, i32)>)>,
}

impl CompiledPoly {
    pub fn new(p: &Poly<Q>) -> Self {
        let terms = p
            .terms()
            .map(|(m, c)| {
                let c = c.to_c64().re;
                let factors = m.exponents().iter().enumerate().filter(|(_, &e)| e != 0).map(|(i, &e)| (i, e)).collect();
                (c, factors)
            })
            .collect();
        Self { terms }
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(c, fs)| fs.iter().fold(*c, |acc, &(i, e)| acc * x[i].powi(e)))
            .sum()
    }
}

#[derive(Debug, Clone)]
pub struct CompiledField {
    names: Vec<String>,
    comps: Vec<CompiledPoly>,
}

impl CompiledField {
    pub fn new(field: &PolyVectorField) -> Self {
        Self {
            names: field.vars().names().to_vec(),
            comps: field.components().iter().map(CompiledPoly::new).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.comps.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn eval_into(&self, x: &[f64], out: &mut [f64]) {
        for (o, c) in out.iter_mut().zip(&self.comps) {
            *o = c.eval(x);
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Trajectory {
    pub vars: Vec<String>,
    pub h: f64,
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
}

impl Trajectory {
    pub fn last(&self) -> &[f64] {
        self.states.last().expect("trajectory holds the initial point")
    }
}

fn rk4_step(f: &CompiledField, x: &[f64], h: f64, scratch: &mut [Vec<f64>; 5]) -> Vec<f64> {
    let [k1, k2, k3, k4, tmp] = scratch;
    let n = x.len();
    f.eval_into(x, k1);
    for i in 0..n {
        tmp[i] = x[i] + 0.5 * h * k1[i];
    }
    f.eval_into(tmp, k2);
    for i in 0..n {
        tmp[i] = x[i] + 0.5 * h * k2[i];
    }
    f.eval_into(tmp, k3);
    for i in 0..n {
        tmp[i] = x[i] + h * k3[i];
    }
    f.eval_into(tmp, k4);
    (0..n).map(|i| x[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])).collect()
}

/// Number of RK4 steps covering `[0, t_end]` with step `h`.
fn step_count(t_end: f64, h: f64) -> Result<usize> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::InvalidArgument(format!("step must be positive, got {h}")));
    }
    if !(t_end >= 0.0 && t_end.is_finite()) {
        return Err(Error::InvalidArgument(format!("end time must be non-negative, got {t_end}")));
    }
    Ok((t_end / h).round() as usize)
}

/// Runs RK4 and keeps every step.
pub fn integrate_compiled(f: &CompiledField, x0: &[f64], t_end: f64, h: f64) -> Result<Trajectory> {
    if x0.len() != f.dim() {
        return Err(Error::DimensionMismatch { expected: f.dim(), got: x0.len() });
    }
    let steps = step_count(t_end, h)?;
    let mut scratch: [Vec<f64>; 5] = std::array::from_fn(|_| vec![0.0; x0.len()]);
    let mut times = Vec::with_capacity(steps + 1);
    let mut states = Vec::with_capacity(steps + 1);
    times.push(0.0);
    states.push(x0.to_vec());
    for s in 1..=steps {
        let next = rk4_step(f, states.last().expect("nonempty"), h, &mut scratch);
        let t = s as f64 * h;
        if next.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite { t, last_valid_t: times[s - 1] });
        }
        times.push(t);
        states.push(next);
    }
    Ok(Trajectory { vars: f.names().to_vec(), h, times, states })
}

pub fn integrate(field: &PolyVectorField, x0: &[f64], t_end: f64, h: f64) -> Result<Trajectory> {
    integrate_compiled(&CompiledField::new(field), x0, t_end, h)
}

/// Final state only.
pub fn flow_to(f: &CompiledField, x0: &[f64], t: f64, h: f64) -> Result<Vec<f64>> {
    Ok(integrate_compiled(f, x0, t, h)?.last().to_vec())
}

/// `[L, (L^k)_+]` with `(·)_+` the strictly upper-triangular part.
///
/// For Toda this is the Hamiltonian flow of `H_{k+1}` in the linear bracket.
pub fn lax_rhs(sys: SystemId, k: u32) -> Result<LaxMatrix> {
    let l = catalog::lax(sys);
    Ok(l.commutator(&l.pow(k).strictly_upper()))
}

/// Reads `(ȧ, ḃ)` off a matrix right-hand side, using for each variable an
/// entry of `L` equal to a nonzero multiple of it, and checks that the
/// right-hand side equals `Σ_v v̇ ∂L/∂v` entrywise.
pub fn matrix_to_field(l: &LaxMatrix, rhs: &LaxMatrix) -> Result<PolyVectorField> {
    let vars = l.vars().clone();
    let n = l.size();
    let mut comps = Vec::with_capacity(vars.len());
    for v in 0..vars.len() {
        let unit = Poly::<Q>::var_at(&vars, v);
        let (mono, _) = unit.terms().next().expect("variable");
        let slot = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .find_map(|(i, j)| {
                let e = l.get(i, j);
                let c = e.coeff(mono);
                (e.num_terms() == 1 && !c.is_zero()).then_some((i, j, c))
            })
            .ok_or_else(|| Error::Unsupported(format!("{} does not appear alone in L", vars.name(v))))?;
        let (i, j, c) = slot;
        comps.push(rhs.get(i, j).scale(&c.inv().expect("nonzero")));
    }
    let field = PolyVectorField::new(&vars, comps)?;
    for i in 0..n {
        for j in 0..n {
            let lhs = field.directional_action(l.get(i, j))?;
            if lhs != *rhs.get(i, j) {
                return Err(Error::NotExpressible(format!(
                    "entry ({}, {}) of the Lax equation leaves the phase-space template",
                    i + 1,
                    j + 1
                )));
            }
        }
    }
    Ok(field)
}

pub fn lax_field(sys: SystemId, k: u32) -> Result<PolyVectorField> {
    matrix_to_field(&catalog::lax(sys), &lax_rhs(sys, k)?)
}

/// Per-step monitor series and their maximal drifts.
#[derive(Debug, Clone, Serialize)]
pub struct Monitors {
    pub hamiltonian_degrees: Vec<u32>,
    /// `H_k(t)` per step, one row per time.
    pub hamiltonians: Vec<Vec<f64>>,
    /// Characteristic polynomial coefficients of `L(t)` per step.
    pub charpoly: Vec<Vec<f64>>,
    pub hamiltonian_drift: Vec<f64>,
    pub charpoly_drift: Vec<f64>,
}

impl Monitors {
    pub fn max_hamiltonian_drift(&self) -> f64 {
        self.hamiltonian_drift.iter().copied().fold(0.0, f64::max)
    }

    pub fn max_charpoly_drift(&self) -> f64 {
        self.charpoly_drift.iter().copied().fold(0.0, f64::max)
    }
}

fn max_drift(series: &[Vec<f64>], k: usize) -> f64 {
    let first = series.first().map_or(0.0, |r| r[k]);
    series.iter().map(|r| (r[k] - first).abs()).fold(0.0, f64::max)
}

/// Tracks `H_1..H_{kmax}` and the characteristic polynomial of `L`.
pub fn monitors(traj: &Trajectory, sys: SystemId, kmax: u32) -> Result<Monitors> {
    let degrees: Vec<u32> = (1..=kmax).collect();
    let hs: Vec<CompiledPoly> =
        degrees.iter().map(|&k| catalog::hamiltonian(sys, k).map(|p| CompiledPoly::new(&p))).collect::<Result<_>>()?;
    let l = catalog::lax(sys);
    if l.vars().len() != traj.vars.len() {
        return Err(Error::DimensionMismatch { expected: l.vars().len(), got: traj.vars.len() });
    }
    let entries: Vec<Vec<CompiledPoly>> = l.rows().iter().map(|r| r.iter().map(CompiledPoly::new).collect()).collect();
    let mut hamiltonians = Vec::with_capacity(traj.states.len());
    let mut charpoly = Vec::with_capacity(traj.states.len());
    for x in &traj.states {
        hamiltonians.push(hs.iter().map(|h| h.eval(x)).collect::<Vec<_>>());
        let m: numeric::CMatrix =
            entries.iter().map(|r| r.iter().map(|p| Complex64::new(p.eval(x), 0.0)).collect()).collect();
        charpoly.push(numeric::charpoly(&m).into_iter().map(|c| c.re).collect::<Vec<_>>());
    }
    let hamiltonian_drift = (0..degrees.len()).map(|k| max_drift(&hamiltonians, k)).collect();
    let charpoly_drift = (0..l.size()).map(|k| max_drift(&charpoly, k)).collect();
    Ok(Monitors { hamiltonian_degrees: degrees, hamiltonians, charpoly, hamiltonian_drift, charpoly_drift })
}

/// `|Φ¹_s Φ²_t x0 − Φ²_t Φ¹_s x0|_∞`.
pub fn commutation_check(
    f1: &PolyVectorField,
    f2: &PolyVectorField,
    x0: &[f64],
    s: f64,
    t: f64,
    h: f64,
) -> Result<f64> {
    let (c1, c2) = (CompiledField::new(f1), CompiledField::new(f2));
    let one_then_two = flow_to(&c2, &flow_to(&c1, x0, s, h)?, t, h)?;
    let two_then_one = flow_to(&c1, &flow_to(&c2, x0, t, h)?, s, h)?;
    Ok(one_then_two.iter().zip(&two_then_one).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
}

/// Writes `t, <vars>, <H_k>, <charpoly drifts>` every `every` steps.
pub fn write_csv(out: &mut impl Write, traj: &Trajectory, mon: Option<&Monitors>, every: usize) -> std::io::Result<()> {
    let every = every.max(1);
    let mut header = vec!["t".to_string()];
    header.extend(traj.vars.iter().cloned());
    if let Some(m) = mon {
        header.extend(m.hamiltonian_degrees.iter().map(|k| format!("H{k}")));
        header.extend((1..=m.charpoly.first().map_or(0, Vec::len)).map(|k| format!("charpoly_drift{k}")));
    }
    writeln!(out, "{}", header.join(","))?;
    for (s, (t, x)) in traj.times.iter().zip(&traj.states).enumerate() {
        if s % every != 0 && s + 1 != traj.times.len() {
            continue;
        }
        let mut row: Vec<String> = vec![format!("{t:.6}")];
        row.extend(x.iter().map(|v| format!("{v:.12e}")));
        if let Some(m) = mon {
            row.extend(m.hamiltonians[s].iter().map(|v| format!("{v:.12e}")));
            let base = &m.charpoly[0];
            row.extend(m.charpoly[s].iter().zip(base).map(|(v, b)| format!("{:.3e}", v - b)));
        }
        writeln!(out, "{}", row.join(","))?;
    }
    Ok(())
}

/// Seeded uniform initial condition; `a`-variables (and every Volterra
/// variable) use `a_range`, `b`-variables use `b_range`.
pub fn random_point(sys: SystemId, seed: u64, a_range: (f64, f64), b_range: (f64, f64)) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    catalog::variables(sys)
        .names()
        .iter()
        .map(|name| {
            let (lo, hi) = if name.starts_with('b') { b_range } else { a_range };
            if lo == hi {
                lo
            } else {
                rng.gen_range(lo..hi)
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::SpecialField;
    use crate::polyalg::VarSpace;

    #[test]
    fn zero_field_is_constant() {
        let vars = VarSpace::new(["u", "v"]);
        let traj = integrate(&PolyVectorField::zero(&vars), &[0.3, -2.0], 1.0, 0.1).unwrap();
        assert_eq!(traj.times.len(), 11);
        assert!(traj.states.iter().all(|x| x == &vec![0.3, -2.0]));
    }

    #[test]
    fn blow_up_is_reported() {
        let vars = VarSpace::new(["u"]);
        let u = Poly::var(&vars, "u").unwrap();
        let f = PolyVectorField::new(&vars, vec![u.pow(3)]).unwrap();
        match integrate(&f, &[1.0], 5.0, 0.01) {
            Err(Error::NonFinite { t, last_valid_t }) => assert!(t > last_valid_t && t < 5.0),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn lax_matches_linear_bracket_flows() {
        for size in 2..=4 {
            let sys = SystemId::toda_a(size);
            for k in 1..=3 {
                let want = catalog::special_field(sys, SpecialField::Flow(k + 1)).unwrap();
                assert_eq!(lax_field(sys, k).unwrap(), want, "N={size} k={k}");
            }
        }
        let zero = lax_field(SystemId::toda_a(3), 0).unwrap();
        assert!(zero.is_zero());
    }

    #[test]
    fn csv_header() {
        let sys = SystemId::toda_a(2);
        let f = catalog::special_field(sys, SpecialField::Flow(2)).unwrap();
        let traj = integrate(&f, &[1.0, 0.0, 0.0], 0.1, 0.01).unwrap();
        let mon = monitors(&traj, sys, 2).unwrap();
        let mut buf = Vec::new();
        write_csv(&mut buf, &traj, Some(&mon), 5).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().next().unwrap(), "t,a1,b1,b2,H1,H2,charpoly_drift1,charpoly_drift2");
        assert_eq!(text.lines().count(), 4);
    }
}
