//! Concrete Toda and Volterra structures: Lax matrices, Hamiltonians,
//! brackets, special vector fields, symmetries and fixed-point charts.
//!
//! Index conventions: `toda-a:N` and `volterra-a:N` use the matrix size
//! `N`; the B and C families use the rank `n`. Out-of-range variables
//! (`a_0`, `b_{N+1}`, ...) are zero.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::LaxMatrix;
use crate::poisson::{PoissonTensor, PolyVectorField};
use crate::polyalg::{q, qi, Gaussian, LinearMap, Poly, Scalar, VarSpace, Vars, Q};
use crate::reduction::{reduced_bracket, FiniteGroupAction, FixedPointChart};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Toda,
    Volterra,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Kind {
    A,
    B,
    C,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SystemId {
    pub family: Family,
    pub kind: Kind,
    pub n: usize,
}

impl SystemId {
    pub fn new(family: Family, kind: Kind, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("rank parameter must be at least 1".into()));
        }
        Ok(Self { family, kind, n })
    }

    pub fn toda_a(n: usize) -> Self {
        Self::new(Family::Toda, Kind::A, n).expect("n >= 1")
    }
    pub fn toda_b(n: usize) -> Self {
        Self::new(Family::Toda, Kind::B, n).expect("n >= 1")
    }
    pub fn toda_c(n: usize) -> Self {
        Self::new(Family::Toda, Kind::C, n).expect("n >= 1")
    }
    pub fn volterra_a(n: usize) -> Self {
        Self::new(Family::Volterra, Kind::A, n).expect("n >= 1")
    }
    pub fn volterra_b(n: usize) -> Self {
        Self::new(Family::Volterra, Kind::B, n).expect("n >= 1")
    }

    /// C-type Volterra is treated as B-type.
    pub fn canonical(self) -> Self {
        match (self.family, self.kind) {
            (Family::Volterra, Kind::C) => Self {
                kind: Kind::B,
                ..self
            },
            _ => self,
        }
    }

    /// Size of the Lax matrix.
    pub fn lax_size(&self) -> usize {
        match self.canonical().kind {
            Kind::A => self.n,
            Kind::B => 2 * self.n + 1,
            Kind::C => 2 * self.n,
        }
    }

    pub fn has_b(&self) -> bool {
        self.family == Family::Toda
    }
}

impl fmt::Display for SystemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let fam = match self.family {
            Family::Toda => "toda",
            Family::Volterra => "volterra",
        };
        let kind = match self.kind {
            Kind::A => "a",
            Kind::B => "b",
            Kind::C => "c",
        };
        write!(f, "{fam}-{kind}:{}", self.n)
    }
}

impl FromStr for SystemId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || {
            Error::InvalidArgument(format!(
                "system `{s}` must look like toda-a:N, toda-b:n, toda-c:n, volterra-a:N, volterra-b:n"
            ))
        };
        let lower = s.trim().to_ascii_lowercase();
        let (name, n) = lower.split_once(':').ok_or_else(bad)?;
        let n: usize = n.parse().map_err(|_| bad())?;
        let (family, kind) = match name {
            "toda-a" => (Family::Toda, Kind::A),
            "toda-b" => (Family::Toda, Kind::B),
            "toda-c" => (Family::Toda, Kind::C),
            "volterra-a" => (Family::Volterra, Kind::A),
            "volterra-b" => (Family::Volterra, Kind::B),
            "volterra-c" => (Family::Volterra, Kind::C),
            _ => return Err(bad()),
        };
        Self::new(family, kind, n)
    }
}

/// Ordered phase variables.
pub fn variables(sys: SystemId) -> Vars {
    let sys = sys.canonical();
    let (na, nb) = match (sys.family, sys.kind) {
        (Family::Toda, Kind::A) => (sys.n - 1, sys.n),
        (Family::Toda, _) => (sys.n, sys.n),
        (Family::Volterra, Kind::A) => (sys.n - 1, 0),
        (Family::Volterra, _) => (sys.n, 0),
    };
    let mut names = VarSpace::indexed("a", na);
    names.extend(VarSpace::indexed("b", nb));
    VarSpace::new(names)
}

/// Lookup of `a_i`, `b_i` by 1-based index, zero when out of range.
struct Coords {
    vars: Vars,
}

impl Coords {
    fn new(vars: &Vars) -> Self {
        Self { vars: vars.clone() }
    }

    fn get(&self, prefix: &str, i: isize) -> Poly {
        if i < 1 {
            return Poly::zero(&self.vars);
        }
        Poly::var(&self.vars, &format!("{prefix}{i}")).unwrap_or_else(|_| Poly::zero(&self.vars))
    }

    fn a(&self, i: isize) -> Poly {
        self.get("a", i)
    }

    fn b(&self, i: isize) -> Poly {
        self.get("b", i)
    }

    fn has(&self, prefix: &str, i: isize) -> bool {
        i >= 1 && self.vars.contains(&format!("{prefix}{i}"))
    }

    /// Adds `{u_i, v_j} = value` when both coordinates exist.
    fn set(&self, t: &mut PoissonTensor, u: (&str, isize), v: (&str, isize), value: Poly) {
        if self.has(u.0, u.1) && self.has(v.0, v.1) {
            let un = format!("{}{}", u.0, u.1);
            let vn = format!("{}{}", v.0, v.1);
            t.add_named(&un, &vn, value).expect("known names");
        }
    }
}

fn half() -> Q {
    q(1, 2)
}

/// Lax matrix of the system.
pub fn lax(sys: SystemId) -> LaxMatrix {
    let sys = sys.canonical();
    let vars = variables(sys);
    let c = Coords::new(&vars);
    let size = sys.lax_size();
    let mut l = LaxMatrix::zeros(&vars, size);
    let n = sys.n as isize;
    let toda = sys.family == Family::Toda;
    match sys.kind {
        Kind::A => {
            for i in 0..size {
                if toda {
                    l.set(i, i, c.b(i as isize + 1));
                }
                if i + 1 < size {
                    l.set(i, i + 1, c.a(i as isize + 1));
                    l.set_const(i + 1, i, qi(1));
                }
            }
        }
        Kind::B => {
            // diag b_1..b_n, 0, -b_n..-b_1; super a_1..a_n, -a_n..-a_1
            for i in 1..=n {
                let (lo, hi) = ((i - 1) as usize, size - i as usize);
                if toda {
                    l.set(lo, lo, c.b(i));
                    l.set(hi, hi, -c.b(i));
                }
                l.set(lo, lo + 1, c.a(i));
                l.set(hi - 1, hi, -c.a(i));
                let sub = if toda { qi(-1) } else { qi(1) };
                l.set_const(lo + 1, lo, qi(1));
                l.set_const(hi, hi - 1, sub);
            }
        }
        Kind::C => {
            // fixed points of the mirror map on T_2n
            for i in 1..=n {
                let (lo, hi) = ((i - 1) as usize, size - i as usize);
                l.set(lo, lo, c.b(i));
                l.set(hi, hi, -c.b(i));
                l.set(lo, lo + 1, c.a(i));
                if hi - 1 != lo {
                    l.set(hi - 1, hi, c.a(i));
                }
            }
            for i in 0..size - 1 {
                l.set_const(i + 1, i, qi(1));
            }
        }
    }
    l
}

/// `H_k = tr(L^k) / k`.
pub fn hamiltonian(sys: SystemId, k: u32) -> Result<Poly> {
    if k == 0 {
        return Err(Error::InvalidArgument("Hamiltonian index must be positive".into()));
    }
    let l = lax(sys);
    Ok(l.pow(k).trace().scale(&q(1, k as i64)))
}

/// `I_4 = 1/4 Σ_{i<n} (2 a_i^2 + a_i a_{i+1})` on the B-type Volterra space.
pub fn i4_hamiltonian(n: usize) -> Poly {
    let vars = variables(SystemId::volterra_b(n.max(1)));
    let c = Coords::new(&vars);
    let mut h = Poly::zero(&vars);
    for i in 1..n as isize {
        h = &h + &(&c.a(i).pow(2).scale(&qi(2)) + &(&c.a(i) * &c.a(i + 1)));
    }
    h.scale(&q(1, 4))
}

fn toda_a_tensor(n_size: usize, k: u32) -> Result<PoissonTensor> {
    let vars = variables(SystemId::toda_a(n_size));
    let c = Coords::new(&vars);
    let mut t = PoissonTensor::zero(&vars, format!("pi{k}"));
    for i in 1..n_size as isize {
        let ai = c.a(i);
        match k {
            1 => {
                c.set(&mut t, ("a", i), ("b", i), ai.clone());
                c.set(&mut t, ("a", i), ("b", i + 1), -&ai);
            }
            2 => {
                c.set(&mut t, ("a", i), ("a", i + 1), -(&ai * &c.a(i + 1)));
                c.set(&mut t, ("a", i), ("b", i), &ai * &c.b(i));
                c.set(&mut t, ("a", i), ("b", i + 1), -(&ai * &c.b(i + 1)));
                c.set(&mut t, ("b", i), ("b", i + 1), -&ai);
            }
            3 => {
                let (a1, b0, b1) = (c.a(i + 1), c.b(i), c.b(i + 1));
                c.set(&mut t, ("a", i), ("a", i + 1), (&(&ai * &a1) * &b1).scale(&qi(2)));
                c.set(&mut t, ("a", i), ("b", i), -(&(&ai * &b0.pow(2)) + &ai.pow(2)));
                c.set(&mut t, ("a", i), ("b", i + 1), &(&ai * &b1.pow(2)) + &ai.pow(2));
                c.set(&mut t, ("a", i), ("b", i + 2), &ai * &a1);
                c.set(&mut t, ("a", i + 1), ("b", i), -(&ai * &a1));
                c.set(&mut t, ("b", i), ("b", i + 1), &ai * &(&b0 + &b1));
            }
            _ => unreachable!(),
        }
    }
    Ok(t)
}

fn toda_b_tensor(n: usize, k: u32) -> PoissonTensor {
    let vars = variables(SystemId::toda_b(n));
    let c = Coords::new(&vars);
    let n = n as isize;
    let mut t = PoissonTensor::zero(&vars, format!("pi{k}"));
    let h = half();
    for i in 1..=n {
        let ai = c.a(i);
        if k == 1 {
            c.set(&mut t, ("a", i), ("b", i), ai.scale(&h));
            c.set(&mut t, ("a", i), ("b", i + 1), ai.scale(&-h.clone()));
            continue;
        }
        let (a1, b0, b1) = (c.a(i + 1), c.b(i), c.b(i + 1));
        let sq = if i < n { ai.pow(2) } else { ai.pow(2).scale(&qi(2)) };
        c.set(&mut t, ("a", i), ("b", i), (&(&ai * &b0.pow(2)) + &sq).scale(&-h.clone()));
        c.set(&mut t, ("a", i), ("a", i + 1), &(&ai * &a1) * &b1);
        c.set(&mut t, ("b", i), ("b", i + 1), (&ai * &(&b0 + &b1)).scale(&h));
        c.set(&mut t, ("a", i), ("b", i + 1), (&(&ai * &b1.pow(2)) + &ai.pow(2)).scale(&h));
        c.set(&mut t, ("a", i), ("b", i + 2), (&ai * &a1).scale(&h));
        c.set(&mut t, ("a", i + 1), ("b", i), (&ai * &a1).scale(&-h.clone()));
    }
    t
}

/// The cubic B-type Toda table exactly as printed, with `a_i(b_i+b_{i+1})`
/// for `{b_i, b_{i+1}}`. It fails the Jacobi identity; kept for reference.
pub fn toda_b_cubic_as_printed(n: usize) -> PoissonTensor {
    let mut t = toda_b_tensor(n, 3).with_label("pi3 (printed)");
    let c = Coords::new(&t.vars().clone());
    for i in 1..n as isize {
        let extra = (&c.a(i) * &(&c.b(i) + &c.b(i + 1))).scale(&half());
        c.set(&mut t, ("b", i), ("b", i + 1), extra);
    }
    t
}

fn volterra_a_tensor(n_size: usize, k: u32) -> PoissonTensor {
    let vars = variables(SystemId::volterra_a(n_size));
    let c = Coords::new(&vars);
    let mut t = PoissonTensor::zero(&vars, format!("pi{k}"));
    for i in 1..n_size as isize {
        let (a0, a1, a2) = (c.a(i), c.a(i + 1), c.a(i + 2));
        if k == 2 {
            c.set(&mut t, ("a", i), ("a", i + 1), -(&a0 * &a1));
        } else {
            c.set(&mut t, ("a", i), ("a", i + 1), &(&a0 * &a1) * &(&a0 + &a1));
            c.set(&mut t, ("a", i), ("a", i + 2), &(&a0 * &a1) * &a2);
        }
    }
    t
}

fn volterra_b_tensor(n: usize) -> PoissonTensor {
    let vars = variables(SystemId::volterra_b(n));
    let c = Coords::new(&vars);
    let n = n as isize;
    let mut t = PoissonTensor::zero(&vars, "pi4");
    let h = half();
    for i in 1..n {
        let (a0, a1) = (c.a(i), c.a(i + 1));
        let inner = if i == n - 1 { &a0 + &a1.scale(&qi(2)) } else { &a0 + &a1 };
        c.set(&mut t, ("a", i), ("a", i + 1), (&(&a0 * &a1) * &inner).scale(&h));
        c.set(&mut t, ("a", i), ("a", i + 2), (&(&a0 * &a1) * &c.a(i + 2)).scale(&h));
    }
    t
}

/// Degrees available for each family.
pub fn supported_degrees(sys: SystemId) -> &'static [u32] {
    let sys = sys.canonical();
    match (sys.family, sys.kind) {
        (Family::Toda, Kind::A) => &[1, 2, 3],
        (Family::Toda, Kind::B) | (Family::Toda, Kind::C) => &[1, 3],
        (Family::Volterra, Kind::A) => &[2, 4],
        (Family::Volterra, _) => &[4],
    }
}

/// Poisson tensor `π_k` of the system.
pub fn tensor(sys: SystemId, k: u32) -> Result<PoissonTensor> {
    let sys = sys.canonical();
    if !supported_degrees(sys).contains(&k) {
        return Err(Error::Unsupported(format!(
            "no bracket of degree {k} for {sys}: available degrees are {:?}",
            supported_degrees(sys)
        )));
    }
    match (sys.family, sys.kind) {
        (Family::Toda, Kind::A) => toda_a_tensor(sys.n, k),
        (Family::Toda, Kind::B) => Ok(toda_b_tensor(sys.n, k)),
        (Family::Toda, Kind::C) => {
            let ambient = SystemId::toda_a(2 * sys.n);
            let g = FiniteGroupAction::generated_by(&[symmetry(Symmetry::PhiC, ambient)?])?;
            let chart = chart(Symmetry::PhiC, ambient)?;
            Ok(reduced_bracket(&tensor(ambient, k)?, &g, &chart)?.with_label(format!("pi{k}")))
        }
        (Family::Volterra, Kind::A) => Ok(volterra_a_tensor(sys.n, k)),
        (Family::Volterra, _) => Ok(volterra_b_tensor(sys.n)),
    }
}

/// A-type Volterra bracket `π_k` carried on the Toda space of the same
/// size, with no `b` entries.
pub fn volterra_on_toda_space(n_size: usize, k: u32) -> Result<PoissonTensor> {
    let src = tensor(SystemId::volterra_a(n_size), k)?;
    let vars = variables(SystemId::toda_a(n_size));
    src.map_entries(&vars, |p| p.embed(&vars))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SpecialField {
    /// Weighted Euler field.
    Z0,
    /// Master symmetry.
    Z1,
    /// Hamiltonian flow of `H_k` for the lowest bracket of the family.
    Flow(u32),
    /// The B-type Volterra lattice written directly.
    BnVolterraFlow,
}

/// `Σ 2 a_i ∂_{a_i} + Σ b_i ∂_{b_i}`.
fn toda_z0(n_size: usize) -> PolyVectorField {
    let vars = variables(SystemId::toda_a(n_size));
    let comps = (0..vars.len())
        .map(|k| {
            let x = Poly::var_at(&vars, k);
            if vars.name(k).starts_with('a') {
                x.scale(&qi(2))
            } else {
                x
            }
        })
        .collect();
    PolyVectorField::new(&vars, comps).expect("dimension")
}

/// Master symmetry with coefficient `(3 + 2i)` on `a_i b_{i+1}`.
fn toda_z1(n_size: usize, b_next_offset: i64) -> PolyVectorField {
    let vars = variables(SystemId::toda_a(n_size));
    let c = Coords::new(&vars);
    let mut comps = Vec::with_capacity(vars.len());
    for i in 1..n_size as isize {
        let ii = i as i64;
        let lin = &c.b(i).scale(&qi(1 - 2 * ii)) + &c.b(i + 1).scale(&qi(b_next_offset + 2 * ii));
        comps.push(&c.a(i) * &lin);
    }
    for i in 1..=n_size as isize {
        let ii = i as i64;
        let v = &(&c.a(i - 1).scale(&qi(2 - 2 * ii)) + &c.a(i).scale(&qi(2 + 2 * ii))) + &c.b(i).pow(2);
        comps.push(v);
    }
    PolyVectorField::new(&vars, comps).expect("dimension")
}

/// The master symmetry with the printed coefficient `(1 + 2i)` on
/// `a_i b_{i+1}`; it fails the deformation relations.
pub fn toda_z1_as_printed(n_size: usize) -> PolyVectorField {
    toda_z1(n_size, 1)
}

/// `ȧ_i = a_i(a_{i-1} - a_{i+1})` with `a_0 = 0` and `a_{n+1} = -a_n`.
fn bn_volterra_flow(n: usize) -> PolyVectorField {
    let vars = variables(SystemId::volterra_b(n));
    let c = Coords::new(&vars);
    let n = n as isize;
    let comps = (1..=n)
        .map(|i| {
            let next = if i == n { -c.a(n) } else { c.a(i + 1) };
            &c.a(i) * &(&c.a(i - 1) - &next)
        })
        .collect();
    PolyVectorField::new(&vars, comps).expect("dimension")
}

/// Bracket used for the Hamiltonian flows of each family.
pub fn flow_bracket_degree(sys: SystemId) -> u32 {
    match sys.canonical().family {
        Family::Toda => 1,
        Family::Volterra => match sys.canonical().kind {
            Kind::A => 2,
            _ => 4,
        },
    }
}

pub fn special_field(sys: SystemId, which: SpecialField) -> Result<PolyVectorField> {
    let sys = sys.canonical();
    let unsupported = || Error::Unsupported(format!("{which:?} is not defined for {sys}"));
    match which {
        SpecialField::Z0 if sys == SystemId::toda_a(sys.n) => Ok(toda_z0(sys.n)),
        SpecialField::Z1 if sys == SystemId::toda_a(sys.n) => Ok(toda_z1(sys.n, 3)),
        SpecialField::Flow(k) => {
            let pi = tensor(sys, flow_bracket_degree(sys))?;
            pi.hamiltonian_vf(&hamiltonian(sys, k)?)
        }
        SpecialField::BnVolterraFlow if sys.family == Family::Volterra && sys.kind == Kind::B => {
            Ok(bn_volterra_flow(sys.n))
        }
        _ => Err(unsupported()),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Symmetry {
    /// `b -> -b`.
    Psi,
    /// Mirror map on odd-size Toda.
    PhiToda,
    /// Mirror map on even-size Toda.
    PhiC,
    /// Signed mirror map on odd-size Volterra.
    PhiVolterra,
    /// Order-four map on odd-size Toda; needs the Gaussian field.
    PhiTilde,
}

impl FromStr for Symmetry {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.trim().to_ascii_lowercase().as_str() {
            "psi" => Self::Psi,
            "phi" | "phi_toda" => Self::PhiToda,
            "phi_c" => Self::PhiC,
            "phi_volterra" => Self::PhiVolterra,
            "phi_tilde" => Self::PhiTilde,
            _ => {
                return Err(Error::InvalidArgument(format!(
                    "unknown map `{s}` (psi, phi_toda, phi_c, phi_volterra, phi_tilde)"
                )))
            }
        })
    }
}

impl fmt::Display for Symmetry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Psi => "psi",
            Self::PhiToda => "phi_toda",
            Self::PhiC => "phi_c",
            Self::PhiVolterra => "phi_volterra",
            Self::PhiTilde => "phi_tilde",
        })
    }
}

/// Builds `y_t = s_t x_{src(t)}` from a rule on names.
fn named_map(
    name: Symmetry,
    vars: &Vars,
    order: u32,
    rule: impl Fn(char, usize) -> (char, usize, Gaussian),
) -> Result<LinearMap<Gaussian>> {
    let mut images = Vec::with_capacity(vars.len());
    for v in vars.names() {
        let (p, idx) = v.split_at(1);
        let idx: usize = idx.parse().expect("indexed variable");
        let (sp, sidx, s) = rule(p.chars().next().unwrap(), idx);
        images.push((vars.index_of(&format!("{sp}{sidx}"))?, s));
    }
    LinearMap::new(name.to_string(), images, order)
}

fn require(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::InvalidArgument(msg()))
    }
}

/// The symmetry over the Gaussian field (all maps are defined here).
pub fn gaussian_symmetry(name: Symmetry, sys: SystemId) -> Result<LinearMap<Gaussian>> {
    let sys = sys.canonical();
    let vars = variables(sys);
    let size = sys.lax_size();
    let real = |x: i64| Gaussian::from(qi(x));
    match name {
        Symmetry::Psi => {
            require(sys.family == Family::Toda && sys.kind == Kind::A, || {
                format!("psi acts on toda-a spaces, not {sys}")
            })?;
            named_map(name, &vars, 2, |p, i| (p, i, real(if p == 'b' { -1 } else { 1 })))
        }
        Symmetry::PhiToda | Symmetry::PhiC | Symmetry::PhiTilde => {
            require(sys.family == Family::Toda && sys.kind == Kind::A, || {
                format!("{name} acts on toda-a spaces, not {sys}")
            })?;
            let parity_ok = match name {
                Symmetry::PhiC => size % 2 == 0,
                _ => size % 2 == 1,
            };
            require(parity_ok && size >= 2, || {
                format!("{name} needs {} matrix size, got {size}", if name == Symmetry::PhiC { "an even" } else { "an odd" })
            })?;
            let tilde = name == Symmetry::PhiTilde;
            named_map(name, &vars, if tilde { 4 } else { 2 }, |p, i| {
                if p == 'a' {
                    (p, size - i, real(if tilde { -1 } else { 1 }))
                } else {
                    (p, size + 1 - i, if tilde { Gaussian::i() } else { real(-1) })
                }
            })
        }
        Symmetry::PhiVolterra => {
            require(sys.family == Family::Volterra && sys.kind == Kind::A && size % 2 == 1 && size >= 3, || {
                format!("phi_volterra acts on odd-size volterra-a spaces, not {sys}")
            })?;
            named_map(name, &vars, 2, |p, i| (p, size - i, real(-1)))
        }
    }
}

/// Real symmetry maps. `PhiTilde` needs [`gaussian_symmetry`].
pub fn symmetry(name: Symmetry, sys: SystemId) -> Result<LinearMap<Q>> {
    if name == Symmetry::PhiTilde {
        return Err(Error::Unsupported(
            "phi_tilde has imaginary scales; use the Gaussian variant".into(),
        ));
    }
    let g = gaussian_symmetry(name, sys)?;
    let images = (0..g.dim())
        .map(|t| {
            let (src, s) = g.image(t);
            (src, s.as_real().expect("real scale"))
        })
        .collect();
    LinearMap::new(g.name(), images, g.order())
}

/// The reduced system carried by the fixed-point set of a symmetry.
pub fn reduced_system(name: Symmetry, sys: SystemId) -> Result<SystemId> {
    let sys = sys.canonical();
    let size = sys.lax_size();
    Ok(match name {
        Symmetry::Psi => SystemId::volterra_a(size),
        Symmetry::PhiToda => SystemId::toda_b(size / 2),
        Symmetry::PhiC => SystemId::toda_c(size / 2),
        Symmetry::PhiVolterra | Symmetry::PhiTilde => SystemId::volterra_b(size / 2),
    })
}

/// Linear chart of the fixed-point set (real maps only).
pub fn chart(name: Symmetry, sys: SystemId) -> Result<FixedPointChart> {
    if name == Symmetry::PhiTilde {
        return Err(Error::Unsupported("phi_tilde chart lives over the Gaussian field; use gaussian_chart".into()));
    }
    build_chart(name, sys)
}

/// Chart over the Gaussian field (any map).
pub fn gaussian_chart(name: Symmetry, sys: SystemId) -> Result<FixedPointChart<Gaussian>> {
    Ok(build_chart(name, sys)?.map_scalars(|c| Gaussian::from(c.clone())))
}

fn build_chart(name: Symmetry, sys: SystemId) -> Result<FixedPointChart> {
    // validates the (map, space) pairing
    gaussian_symmetry(name, sys)?;
    let sys = sys.canonical();
    let size = sys.lax_size();
    let ambient = variables(sys);
    let target = reduced_system(name, sys)?;
    let reduced = variables(target);
    let rc = Coords::new(&reduced);
    let nr = target.n;
    let mut section = Vec::with_capacity(ambient.len());
    for v in ambient.names() {
        let (p, idx) = v.split_at(1);
        let i: usize = idx.parse().expect("indexed variable");
        let img = match (name, p) {
            (Symmetry::Psi, "a") => rc.a(i as isize),
            (Symmetry::Psi, _) => Poly::zero(&reduced),
            (Symmetry::PhiToda | Symmetry::PhiC, "a") => rc.a(i.min(size - i) as isize),
            (Symmetry::PhiToda | Symmetry::PhiC, _) => {
                let mirror = size + 1 - i;
                if i == mirror {
                    Poly::zero(&reduced)
                } else if i <= nr {
                    rc.b(i as isize)
                } else {
                    -rc.b(mirror as isize)
                }
            }
            (Symmetry::PhiVolterra | Symmetry::PhiTilde, "a") => {
                if i <= nr {
                    rc.a(i as isize)
                } else {
                    -rc.a((size - i) as isize)
                }
            }
            (Symmetry::PhiTilde, _) => Poly::zero(&reduced),
            _ => unreachable!("volterra spaces have no b"),
        };
        section.push(img);
    }
    let lifts = reduced
        .names()
        .iter()
        .map(|n| Poly::var(&ambient, n))
        .collect::<Result<Vec<_>>>()?;
    FixedPointChart::new(&ambient, &reduced, section, lifts)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(v: &Vars) -> Vec<&str> {
        v.names().iter().map(String::as_str).collect()
    }

    #[test]
    fn parse_and_display_ids() {
        let id: SystemId = "toda-b:2".parse().unwrap();
        assert_eq!(id, SystemId::toda_b(2));
        assert_eq!(id.to_string(), "toda-b:2");
        assert!("toda-x:2".parse::<SystemId>().is_err());
        assert!("toda-a:0".parse::<SystemId>().is_err());
    }

    #[test]
    fn variable_lists() {
        assert_eq!(names(&variables(SystemId::toda_a(3))), ["a1", "a2", "b1", "b2", "b3"]);
        assert_eq!(names(&variables(SystemId::volterra_b(1))), ["a1"]);
        assert_eq!(names(&variables(SystemId::toda_b(2))), ["a1", "a2", "b1", "b2"]);
        assert_eq!(lax(SystemId::toda_b(2)).size(), 5);
    }

    #[test]
    fn lax_templates() {
        let l = lax(SystemId::toda_a(2));
        assert_eq!(l.to_strings(), [["b1", "a1"], ["1", "b2"]]);
        assert_eq!(lax(SystemId::volterra_a(2)).to_strings(), [["0", "a1"], ["1", "0"]]);
        assert_eq!(
            lax(SystemId::toda_b(1)).to_strings(),
            [["b1", "a1", "0"], ["1", "0", "-a1"], ["0", "-1", "-b1"]]
        );
        assert_eq!(
            lax(SystemId::volterra_b(1)).to_strings(),
            [["0", "a1", "0"], ["1", "0", "-a1"], ["0", "1", "0"]]
        );
    }

    #[test]
    fn hamiltonians() {
        assert_eq!(
            hamiltonian(SystemId::toda_a(2), 2).unwrap().to_canonical_string(),
            "a1 + 1/2*b1^2 + 1/2*b2^2"
        );
        assert!(hamiltonian(SystemId::toda_b(1), 1).unwrap().is_zero());
        assert_eq!(hamiltonian(SystemId::toda_b(1), 2).unwrap().to_canonical_string(), "2*a1 + b1^2");
        assert_eq!(i4_hamiltonian(2).to_canonical_string(), "1/2*a1^2 + 1/4*a1*a2");
        assert!(i4_hamiltonian(1).is_zero());
        assert_eq!(
            i4_hamiltonian(3).to_canonical_string(),
            "1/2*a1^2 + 1/4*a1*a2 + 1/2*a2^2 + 1/4*a2*a3"
        );
    }

    #[test]
    fn printed_entries() {
        let t = tensor(SystemId::toda_a(2), 3).unwrap();
        assert_eq!(t.get_named("a1", "b1").unwrap(), Poly::parse("-a1*b1^2 - a1^2", t.vars()).unwrap());
        let v = tensor(SystemId::volterra_a(5), 4).unwrap();
        assert_eq!(v.get_named("a1", "a3").unwrap().to_canonical_string(), "a1*a2*a3");
        let w = tensor(SystemId::volterra_b(2), 4).unwrap();
        assert_eq!(w.get_named("a1", "a2").unwrap().to_canonical_string(), "1/2*a1^2*a2 + a1*a2^2");
        assert!(matches!(tensor(SystemId::toda_a(3), 4), Err(Error::Unsupported(_))));
        let p1 = tensor(SystemId::toda_a(2), 1).unwrap();
        let p2 = tensor(SystemId::toda_a(2), 2).unwrap();
        let s = p1.vars().clone();
        let (a1, b1, b2) = (Poly::var(&s, "a1").unwrap(), Poly::var(&s, "b1").unwrap(), Poly::var(&s, "b2").unwrap());
        assert_eq!(p1.bracket(&a1, &b1).unwrap(), a1);
        assert_eq!(p2.bracket(&b1, &b2).unwrap(), -&a1);
    }

    #[test]
    fn special_fields() {
        let z1 = special_field(SystemId::toda_a(2), SpecialField::Z1).unwrap();
        assert_eq!(
            z1.equations(),
            ["a1' = -a1*b1 + 5*a1*b2", "b1' = 4*a1 + b1^2", "b2' = -2*a1 + b2^2"]
        );
        let printed = toda_z1_as_printed(2);
        assert_eq!(printed.component("a1").unwrap().to_canonical_string(), "-a1*b1 + 3*a1*b2");
        let f = special_field(SystemId::volterra_b(1), SpecialField::BnVolterraFlow).unwrap();
        assert_eq!(f.equations(), ["a1' = a1^2"]);
        let km = special_field(SystemId::volterra_a(4), SpecialField::Flow(2)).unwrap();
        assert_eq!(km.equations(), ["a1' = -a1*a2", "a2' = a1*a2 - a2*a3", "a3' = a2*a3"]);
        let toda = special_field(SystemId::toda_a(2), SpecialField::Flow(2)).unwrap();
        assert_eq!(toda.equations(), ["a1' = a1*b1 - a1*b2", "b1' = -a1", "b2' = a1"]);
        assert!(special_field(SystemId::volterra_a(3), SpecialField::Z0).is_err());
    }

    #[test]
    fn symmetry_maps() {
        let s = variables(SystemId::toda_a(2));
        let psi = symmetry(Symmetry::Psi, SystemId::toda_a(2)).unwrap();
        assert_eq!(psi.subst(&Poly::var(&s, "b1").unwrap()).unwrap().to_canonical_string(), "-b1");
        let t5 = variables(SystemId::toda_a(5));
        let phi = symmetry(Symmetry::PhiToda, SystemId::toda_a(5)).unwrap();
        let p = Poly::parse("a1*b2", &t5).unwrap();
        assert_eq!(phi.subst(&p).unwrap().to_canonical_string(), "-a4*b4");
        assert!(phi.pow(2).is_identity());
        let pt = gaussian_symmetry(Symmetry::PhiTilde, SystemId::toda_a(5)).unwrap();
        assert!(pt.check_order());
        assert_eq!(pt.actual_order(), 4);
        let psi_g = symmetry(Symmetry::Psi, SystemId::toda_a(5)).unwrap().to_gaussian();
        assert!(pt.pow(2).same_action(&psi_g));
        assert!(symmetry(Symmetry::PhiToda, SystemId::toda_a(4)).is_err());
        assert!(symmetry(Symmetry::PhiTilde, SystemId::toda_a(5)).is_err());
    }

    #[test]
    fn charts_validate() {
        for (name, sys) in [
            (Symmetry::Psi, SystemId::toda_a(4)),
            (Symmetry::PhiToda, SystemId::toda_a(5)),
            (Symmetry::PhiC, SystemId::toda_a(4)),
            (Symmetry::PhiVolterra, SystemId::volterra_a(5)),
        ] {
            let g = FiniteGroupAction::generated_by(&[symmetry(name, sys).unwrap()]).unwrap();
            chart(name, sys).unwrap().validate_for(&g).unwrap();
        }
        let g = FiniteGroupAction::generated_by(&[gaussian_symmetry(Symmetry::PhiTilde, SystemId::toda_a(5)).unwrap()]).unwrap();
        assert_eq!(g.order(), 4);
        gaussian_chart(Symmetry::PhiTilde, SystemId::toda_a(5)).unwrap().validate_for(&g).unwrap();
    }
}
