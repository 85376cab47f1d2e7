//! The `verify` subcommands. Every check records a structured detail so a
//! failure always carries the offending polynomials.

use serde::Serialize;
use serde_json::{json, Value};

use todavolt_core::catalog::{self, Family, Kind, SpecialField, Symmetry, SystemId};
use todavolt_core::reduction::{tensor_diff, verify_reduction};
use todavolt_core::{
    qi, FiniteGroupAction, Gaussian, PoissonTensor, Poly, PolyVectorField, Result, Scalar, Q,
};

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: Value,
}

impl Check {
    fn new(name: impl Into<String>, passed: bool, detail: Value) -> Self {
        Self { name: name.into(), passed, detail }
    }
}

fn small_factors() -> Vec<Q> {
    let mut out = vec![qi(0)];
    for p in 1..=4 {
        for d in [1, 2, 4] {
            out.push(Q::new(p.into(), d.into()));
            out.push(Q::new((-p).into(), d.into()));
        }
    }
    out
}

fn factor_json<F: Scalar>(f: Option<F>) -> Value {
    match f {
        Some(c) => json!(Poly::constant(&todavolt_core::VarSpace::new(Vec::<String>::new()), c).to_string()),
        None => Value::Null,
    }
}

pub fn brackets_or_default(sys: SystemId, brackets: &[u32]) -> Vec<u32> {
    if brackets.is_empty() {
        catalog::supported_degrees(sys).to_vec()
    } else {
        brackets.to_vec()
    }
}

fn jacobi_detail<F: Scalar>(pi: &PoissonTensor<F>) -> Check {
    let jac = pi.jacobiator();
    let names = pi.vars().names();
    let nonzero: Vec<Value> = jac
        .nonzero()
        .iter()
        .map(|((i, j, k), p)| json!({"i": names[*i], "j": names[*j], "k": names[*k], "value": p.to_string()}))
        .collect();
    Check::new(format!("jacobi {}", pi.label()), jac.is_zero(), json!({ "nonzero": nonzero }))
}

pub fn jacobi(sys: SystemId, brackets: &[u32]) -> Result<Vec<Check>> {
    brackets_or_default(sys, brackets)
        .into_iter()
        .map(|k| Ok(jacobi_tensor(&catalog::tensor(sys, k)?.with_label(format!("{sys} pi{k}")))))
        .collect()
}

pub fn jacobi_tensor(pi: &PoissonTensor) -> Check {
    jacobi_detail(pi)
}

pub fn compatible(sys: SystemId, brackets: &[u32]) -> Result<Vec<Check>> {
    let ks = brackets_or_default(sys, brackets);
    let mut out = Vec::new();
    for (a, &i) in ks.iter().enumerate() {
        for &j in &ks[a + 1..] {
            let sum = catalog::tensor(sys, i)?.try_add(&catalog::tensor(sys, j)?)?;
            let mut c = jacobi_detail(&sum.with_label(format!("{sys} pi{i}+pi{j}")));
            c.name = format!("compatible {sys} pi{i}+pi{j}");
            out.push(c);
        }
    }
    Ok(out)
}

fn equal_tensors(name: String, got: &PoissonTensor, want: &PoissonTensor) -> Check {
    let diff = tensor_diff(want, got);
    let factor = factor_json(got.proportional_to(want, &small_factors()));
    Check::new(name, diff.is_empty(), json!({ "observed_factor": factor, "diff": diff }))
}

fn equal_fields(name: String, got: &PolyVectorField, want: &PolyVectorField) -> Check {
    let passed = got == want;
    let factor = factor_json(got.proportional_to(want, &small_factors()));
    Check::new(name, passed, json!({ "observed_factor": factor, "got": got.equations(), "want": want.equations() }))
}

fn equal_polys(name: String, got: &Poly, want: &Poly) -> Check {
    Check::new(name, got == want, json!({ "got": got.to_string(), "want": want.to_string() }))
}

pub fn deformation(sys: SystemId) -> Result<Vec<Check>> {
    let z0 = catalog::special_field(sys, SpecialField::Z0)?;
    let z1 = catalog::special_field(sys, SpecialField::Z1)?;
    let pi = |k| catalog::tensor(sys, k);
    let mut out = Vec::new();
    for l in 1..=3u32 {
        let got = z0.lie_derivative_bivector(&pi(l)?)?;
        out.push(equal_tensors(format!("{sys} L_Z0 pi{l} = {} pi{l}", l as i64 - 2), &got, &pi(l)?.scale(&qi(l as i64 - 2))));
    }
    out.push(equal_tensors(format!("{sys} L_Z1 pi1 = -2 pi2"), &z1.lie_derivative_bivector(&pi(1)?)?, &pi(2)?.scale(&qi(-2))));
    out.push(equal_tensors(format!("{sys} L_Z1 pi2 = -pi3"), &z1.lie_derivative_bivector(&pi(2)?)?, &pi(3)?.scale(&qi(-1))));
    for l in 1..=3u32 {
        let h = catalog::hamiltonian(sys, l)?;
        let next = catalog::hamiltonian(sys, l + 1)?;
        out.push(equal_polys(format!("{sys} Z0(H{l}) = {l} H{l}"), &z0.directional_action(&h)?, &h.scale(&qi(l as i64))));
        out.push(equal_polys(
            format!("{sys} Z1(H{l}) = {} H{}", l + 1, l + 1),
            &z1.directional_action(&h)?,
            &next.scale(&qi(l as i64 + 1)),
        ));
    }
    Ok(out)
}

fn to_g(t: &PoissonTensor) -> PoissonTensor<Gaussian> {
    t.map_scalars(|c: &Q| Gaussian::from(c.clone()))
}

/// The tensor a map acts on: degree 4 on a Toda space means the Volterra
/// bracket extended trivially in `b`.
fn ambient_tensor(sys: SystemId, k: u32) -> Result<PoissonTensor> {
    if sys.canonical().family == Family::Toda && sys.kind == Kind::A && k == 4 {
        catalog::volterra_on_toda_space(sys.n, 4)
    } else {
        catalog::tensor(sys, k)
    }
}

pub fn involution(sys: SystemId, map: Symmetry, brackets: &[u32], sign: i64) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for k in brackets_or_default(sys, brackets) {
        let pi = ambient_tensor(sys, k)?;
        let name = format!("{map} pushes {sys} pi{k} to {sign} pi{k}");
        let g = catalog::gaussian_symmetry(map, sys)?;
        let (pi_g, want) = (to_g(&pi), to_g(&pi.scale(&qi(sign))));
        let pushed = pi_g.pushforward(&g)?;
        let diff = tensor_diff(&want, &pushed);
        let units = [Gaussian::one(), -Gaussian::one(), Gaussian::i(), -Gaussian::i()];
        let factor = factor_json(pushed.proportional_to(&pi_g, &units));
        out.push(Check::new(name, diff.is_empty(), json!({ "observed_factor": factor, "diff": diff })));
    }
    Ok(out)
}

pub fn ladder(sys: SystemId) -> Result<Vec<Check>> {
    let sys = sys.canonical();
    let vf = |k: u32, h: &Poly| catalog::tensor(sys, k)?.hamiltonian_vf(h);
    let h = |k| catalog::hamiltonian(sys, k);
    let mut out = Vec::new();
    match (sys.family, sys.kind) {
        (Family::Toda, Kind::A) => {
            out.push(equal_fields(format!("{sys} pi3 dH1 = pi2 dH2"), &vf(3, &h(1)?)?, &vf(2, &h(2)?)?));
            out.push(equal_fields(format!("{sys} pi2 dH2 = pi1 dH3"), &vf(2, &h(2)?)?, &vf(1, &h(3)?)?));
        }
        (Family::Toda, _) => {
            out.push(equal_fields(format!("{sys} pi3 dH2 = pi1 dH4"), &vf(3, &h(2)?)?, &vf(1, &h(4)?)?));
        }
        (Family::Volterra, Kind::A) => {
            out.push(equal_fields(format!("{sys} pi4 dH2 = pi2 dH4"), &vf(4, &h(2)?)?, &vf(2, &h(4)?)?));
        }
        (Family::Volterra, _) => {
            let got = vf(4, &catalog::i4_hamiltonian(sys.n))?;
            let a3 = catalog::special_field(sys, SpecialField::BnVolterraFlow)?;
            let c = got.proportional_to(&a3, &small_factors()).filter(|c| !c.is_zero());
            out.push(Check::new(
                format!("{sys} pi4 dI4 = c * B Volterra flow"),
                c.is_some(),
                json!({ "scalar": factor_json(c), "got": got.equations(), "want": a3.equations() }),
            ));
        }
    }
    Ok(out)
}

/// Reduces `π_k` on `sys` by the group generated by `map` and compares with
/// the catalog bracket of the reduced system.
pub fn reduction(sys: SystemId, map: Symmetry, brackets: &[u32]) -> Result<Vec<Check>> {
    let target = catalog::reduced_system(map, sys)?;
    let mut out = Vec::new();
    for k in brackets_or_default(sys, brackets) {
        let pi = ambient_tensor(sys, k)?;
        let want = catalog::tensor(target, k)?;
        let name = format!("{map} reduces {sys} pi{k} to {target} pi{k}");
        let report = if map == Symmetry::PhiTilde {
            let group = FiniteGroupAction::generated_by(&[catalog::gaussian_symmetry(map, sys)?])?;
            verify_reduction(&to_g(&pi), &group, &catalog::gaussian_chart(map, sys)?, &to_g(&want))
        } else {
            let group = FiniteGroupAction::generated_by(&[catalog::symmetry(map, sys)?])?;
            verify_reduction(&pi, &group, &catalog::chart(map, sys)?, &want)
        };
        out.push(Check::new(name, report.passed(), serde_json::to_value(&report).expect("serializable")));
    }
    Ok(out)
}

fn alt(k: u32) -> i64 {
    if k % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Every identity above over the catalog, up to the given rank.
pub fn all(max_rank: usize) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let sizes = 2..=max_rank + 1;
    for size in sizes.clone() {
        let (t, v) = (SystemId::toda_a(size), SystemId::volterra_a(size));
        out.extend(jacobi(t, &[])?);
        out.extend(jacobi(v, &[])?);
        out.extend(compatible(t, &[])?);
        out.extend(compatible(v, &[])?);
        out.extend(deformation(t)?);
        out.extend(ladder(t)?);
        out.extend(ladder(v)?);
        for k in 1..=3 {
            out.extend(involution(t, Symmetry::Psi, &[k], alt(k))?);
        }
        out.extend(reduction(t, Symmetry::Psi, &[2])?);
        if size % 2 == 1 {
            for k in 1..=3 {
                out.extend(involution(t, Symmetry::PhiToda, &[k], -alt(k))?);
            }
            for k in [2, 4] {
                out.extend(involution(v, Symmetry::PhiVolterra, &[k], alt(k / 2))?);
            }
            out.extend(involution(t, Symmetry::PhiTilde, &[4], 1)?);
            out.extend(reduction(t, Symmetry::PhiToda, &[1, 3])?);
            out.extend(reduction(v, Symmetry::PhiVolterra, &[4])?);
            out.extend(reduction(t, Symmetry::PhiTilde, &[4])?);
        } else {
            for k in 1..=2 {
                out.extend(involution(t, Symmetry::PhiC, &[k], alt(k))?);
            }
        }
    }
    for n in 1..=max_rank {
        for sys in [SystemId::toda_b(n), SystemId::toda_c(n), SystemId::volterra_b(n)] {
            out.extend(jacobi(sys, &[])?);
            out.extend(ladder(sys)?);
        }
    }
    Ok(out)
}
