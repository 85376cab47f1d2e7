//! Root-system Volterra lattices: the `b`-system, the edge variables
//! `x_ij = c_ij / (b_i b_j)` and the resulting Lotka–Volterra system.
//!
//! The invariant form is the Euclidean dot product of the standard
//! realization. Only its zero pattern and the integer relation between the
//! roots enter the equations, so the normalization does not matter.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::catalog::{self, SpecialField, SystemId};
use crate::error::{Error, Result};
use crate::linalg;
use crate::poisson::PolyVectorField;
use crate::polyalg::{q, qi, Monomial, Poly, Scalar, VarSpace, Vars, Q};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RootType {
    A,
    B,
    C,
    D,
}

impl fmt::Display for RootType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl FromStr for RootType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "A" => Ok(Self::A),
            "B" => Ok(Self::B),
            "C" => Ok(Self::C),
            "D" => Ok(Self::D),
            other => Err(Error::Unsupported(format!("root system type {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RootData {
    pub root_type: RootType,
    pub rank: usize,
    /// Simple roots `ω_1..ω_n` in the standard basis.
    pub simple: Vec<Vec<i64>>,
    /// Minimal negative root `ω_0`.
    pub lowest: Vec<i64>,
    /// `⟨ω_i, ω_j⟩` for `1 <= i, j <= n` (0-based storage).
    pub gram: Vec<Vec<i64>>,
    /// `k_0, k_1, ..., k_n`.
    pub marks: Vec<u32>,
}

impl RootData {
    pub fn ambient_dim(&self) -> usize {
        self.lowest.len()
    }

    /// `k_1..k_n`.
    pub fn simple_marks(&self) -> &[u32] {
        &self.marks[1..]
    }

    /// `Σ k_i ω_i` over `i = 0..n`; zero for valid data.
    pub fn relation_residual(&self) -> Vec<i64> {
        let mut acc: Vec<i64> = self.lowest.iter().map(|x| x * self.marks[0] as i64).collect();
        for (root, &k) in self.simple.iter().zip(self.simple_marks()) {
            for (a, r) in acc.iter_mut().zip(root) {
                *a += k as i64 * r;
            }
        }
        acc
    }
}

fn unit(dim: usize, i: usize) -> Vec<i64> {
    let mut v = vec![0; dim];
    v[i] = 1;
    v
}

fn combine(u: &[i64], su: i64, v: &[i64], sv: i64) -> Vec<i64> {
    u.iter().zip(v).map(|(a, b)| su * a + sv * b).collect()
}

fn dot(u: &[i64], v: &[i64]) -> i64 {
    u.iter().zip(v).map(|(a, b)| a * b).sum()
}

/// Simple roots and highest root in the standard realizations.
fn realization(t: RootType, n: usize) -> Result<(Vec<Vec<i64>>, Vec<i64>)> {
    let min_rank = if t == RootType::D { 3 } else { 1 };
    if n < min_rank {
        return Err(Error::Unsupported(format!("type {t} needs rank >= {min_rank}, got {n}")));
    }
    if n > 64 {
        return Err(Error::Unsupported(format!("rank {n} is too large")));
    }
    let dim = if t == RootType::A { n + 1 } else { n };
    let e = |i: usize| unit(dim, i);
    let mut simple: Vec<Vec<i64>> = (0..dim - 1).map(|i| combine(&e(i), 1, &e(i + 1), -1)).collect();
    let last = n - 1;
    match t {
        RootType::A => {}
        RootType::B => simple.push(e(last)),
        RootType::C => simple.push(combine(&e(last), 2, &e(0), 0)),
        RootType::D => simple.push(combine(&e(last - 1), 1, &e(last), 1)),
    }
    let highest = match t {
        RootType::A => combine(&e(0), 1, &e(n), -1),
        RootType::B if n == 1 => e(0),
        RootType::B | RootType::D => combine(&e(0), 1, &e(1), 1),
        RootType::C => combine(&e(0), 2, &e(1 % dim), 0),
    };
    Ok((simple, highest))
}

/// Builds the root data, solving `Σ k_i ω_i = -ω_0` exactly for the marks.
pub fn root_data(t: RootType, n: usize) -> Result<RootData> {
    let (simple, highest) = realization(t, n)?;
    let dim = highest.len();
    let a: Vec<Vec<Q>> = (0..dim).map(|r| simple.iter().map(|s| qi(s[r])).collect()).collect();
    let b: Vec<Q> = highest.iter().map(|&x| qi(x)).collect();
    let (sol, nullity) = linalg::solve(&a, &b)
        .ok_or_else(|| Error::Domain(format!("{t}{n}: highest root is not in the root lattice")))?;
    if nullity != 0 {
        return Err(Error::Domain(format!("{t}{n}: simple roots are dependent")));
    }
    let mut marks = vec![1u32];
    for k in sol {
        if !k.is_integer() || k <= qi(0) {
            return Err(Error::Domain(format!("{t}{n}: mark {k} is not a positive integer")));
        }
        marks.push(u32::try_from(k.to_integer()).map_err(|_| Error::Domain("mark overflow".into()))?);
    }
    let gram = simple.iter().map(|u| simple.iter().map(|v| dot(u, v)).collect()).collect();
    Ok(RootData {
        root_type: t,
        rank: n,
        lowest: highest.iter().map(|x| -x).collect(),
        simple,
        gram,
        marks,
    })
}

/// `c_ij`: zero on the diagonal and for orthogonal roots, `+1` above the
/// diagonal, `-1` below.
pub fn sign_matrix(rd: &RootData) -> Vec<Vec<i64>> {
    let n = rd.rank;
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| match (rd.gram[i][j] != 0 && i != j, i < j) {
                    (false, _) => 0,
                    (true, true) => 1,
                    (true, false) => -1,
                })
                .collect()
        })
        .collect()
}

pub fn b_vars(rd: &RootData) -> Vars {
    VarSpace::new(VarSpace::indexed("b", rd.rank))
}

/// `ḃ_i = -Σ_j k_j c_ij / b_j`, as Laurent polynomials.
pub fn b_system_rhs(rd: &RootData) -> PolyVectorField {
    let vars = b_vars(rd);
    let c = sign_matrix(rd);
    let n = rd.rank;
    let comps = (0..n)
        .map(|i| {
            let terms = (0..n).filter(|&j| c[i][j] != 0).map(|j| {
                let mut e = vec![0; n];
                e[j] = -1;
                (Monomial(e), qi(-(rd.simple_marks()[j] as i64) * c[i][j]))
            });
            Poly::from_terms(&vars, terms.collect::<Vec<_>>())
        })
        .collect();
    PolyVectorField::new(&vars, comps).expect("dimension")
}

/// Pairs `(i, j)`, `i < j`, with `c_ij != 0` (0-based), i.e. Dynkin edges.
pub fn edges(rd: &RootData) -> Vec<(usize, usize)> {
    let c = sign_matrix(rd);
    let n = rd.rank;
    (0..n).flat_map(|i| ((i + 1)..n).map(move |j| (i, j))).filter(|&(i, j)| c[i][j] != 0).collect()
}

/// Edge variables `x{i}_{j}` (1-based).
pub fn x_vars(rd: &RootData) -> Vars {
    VarSpace::new(edges(rd).into_iter().map(|(i, j)| format!("x{}_{}", i + 1, j + 1)))
}

/// `x_ij = c_ij b_i^{-1} b_j^{-1}` as a full antisymmetric array.
pub fn x_transform<F: Scalar>(rd: &RootData, b: &[F]) -> Result<Vec<Vec<F>>> {
    if b.len() != rd.rank {
        return Err(Error::DimensionMismatch { expected: rd.rank, got: b.len() });
    }
    let inv: Vec<F> = b
        .iter()
        .enumerate()
        .map(|(i, v)| v.inv().ok_or_else(|| Error::Domain(format!("b{} = 0", i + 1))))
        .collect::<Result<_>>()?;
    let c = sign_matrix(rd);
    Ok((0..rd.rank)
        .map(|i| {
            (0..rd.rank)
                .map(|j| F::from_i64(c[i][j]) * inv[i].clone() * inv[j].clone())
                .collect()
        })
        .collect())
}

/// Antisymmetric array of edge-variable polynomials (zero off the edges).
fn x_array(rd: &RootData, vars: &Vars) -> Vec<Vec<Poly>> {
    let n = rd.rank;
    let mut x = vec![vec![Poly::zero(vars); n]; n];
    for (k, (i, j)) in edges(rd).into_iter().enumerate() {
        let v = Poly::var_at(vars, k);
        x[j][i] = -&v;
        x[i][j] = v;
    }
    x
}

/// `ẋ_ij = x_ij Σ_s k_s (x_is + x_js)` for each edge.
pub fn x_system_rhs(rd: &RootData) -> PolyVectorField {
    let vars = x_vars(rd);
    let x = x_array(rd, &vars);
    let ks = rd.simple_marks();
    let comps = edges(rd)
        .into_iter()
        .map(|(i, j)| {
            let mut sum = Poly::zero(&vars);
            for (s, &k) in ks.iter().enumerate() {
                sum = &sum + &(&x[i][s] + &x[j][s]).scale(&qi(k as i64));
            }
            &x[i][j] * &sum
        })
        .collect();
    PolyVectorField::new(&vars, comps).expect("dimension")
}

/// Per edge, `d/dt x_ij(b)` along the `b`-system minus the `x`-system
/// evaluated at `x(b)`. All entries vanish when the construction is sound.
pub fn chain_rule_residual(rd: &RootData) -> Result<Vec<Poly>> {
    let bv = b_vars(rd);
    let bdot = b_system_rhs(rd);
    let n = rd.rank;
    let c = sign_matrix(rd);
    let x_of_b = |i: usize, j: usize| {
        let mut e = vec![0; n];
        e[i] -= 1;
        e[j] -= 1;
        Poly::term(&bv, Monomial(e), qi(c[i][j]))
    };
    let images: Vec<Poly> = edges(rd).into_iter().map(|(i, j)| x_of_b(i, j)).collect();
    let xdot = x_system_rhs(rd);
    edges(rd)
        .into_iter()
        .zip(xdot.components())
        .map(|((i, j), rhs)| {
            let xij = x_of_b(i, j);
            let lhs = bdot.directional_action(&xij)?;
            Ok(&lhs - &rhs.compose(&images)?)
        })
        .collect()
}

/// Interaction matrix `M` of a field of the form `ẏ_i = y_i Σ_j M_ij y_j`,
/// or `None` if the field is not of that form.
pub fn lotka_volterra_matrix(field: &PolyVectorField) -> Option<Vec<Vec<Q>>> {
    let m = field.dim();
    let mut out = vec![vec![qi(0); m]; m];
    for (i, comp) in field.components().iter().enumerate() {
        for (mono, c) in comp.terms() {
            let e = mono.exponents();
            if e.iter().any(|&x| x < 0) || e.iter().sum::<i32>() != 2 || e[i] == 0 {
                return None;
            }
            let j = (0..m).find(|&j| e[j] == if j == i { 2 } else { 1 })?;
            out[i][j] = c.clone();
        }
    }
    Some(out)
}

/// Change of variables `a_t = scale_t · x_{src_t}` from an edge system to a
/// target lattice.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeChange {
    pub source: Vec<String>,
    pub target: Vec<String>,
    /// `(src, scale)` per target coordinate.
    pub images: Vec<(usize, Q)>,
}

impl EdgeChange {
    pub fn describe(&self) -> Vec<String> {
        self.images
            .iter()
            .zip(&self.target)
            .map(|((s, c), t)| {
                let p = Poly::var_at(&VarSpace::new([self.source[*s].clone()]), 0).scale(c);
                format!("{t} = {p}")
            })
            .collect()
    }

    /// Checks symbolically that the change maps `source` onto `target`.
    pub fn verify(&self, source: &PolyVectorField, target: &PolyVectorField) -> Result<bool> {
        let sv = source.vars();
        let subs: Vec<Poly> = self.images.iter().map(|(s, c)| Poly::var_at(sv, *s).scale(c)).collect();
        for (t, (s, c)) in self.images.iter().enumerate() {
            let lhs = source.components()[*s].scale(c);
            let rhs = target.components()[t].compose(&subs)?;
            if lhs != rhs {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Searches for a scaled permutation relating two Lotka–Volterra systems.
///
/// With `a_t = d_t x_{σ(t)}` the condition is `M^a_{tu} d_u = M^x_{σ(t)σ(u)}`.
pub fn find_edge_change(source: &PolyVectorField, target: &PolyVectorField) -> Result<Option<EdgeChange>> {
    let mx = lotka_volterra_matrix(source)
        .ok_or_else(|| Error::NotExpressible("source is not a Lotka-Volterra system".into()))?;
    let ma = lotka_volterra_matrix(target)
        .ok_or_else(|| Error::NotExpressible("target is not a Lotka-Volterra system".into()))?;
    let m = mx.len();
    if ma.len() != m {
        return Ok(None);
    }
    if m > 8 {
        return Err(Error::Unsupported("permutation search limited to 8 variables".into()));
    }
    let mut perm: Vec<usize> = (0..m).collect();
    loop {
        if let Some(scales) = scales_for(&mx, &ma, &perm) {
            let change = EdgeChange {
                source: source.vars().names().to_vec(),
                target: target.vars().names().to_vec(),
                images: perm.iter().copied().zip(scales).collect(),
            };
            if change.verify(source, target)? {
                return Ok(Some(change));
            }
        }
        if !next_permutation(&mut perm) {
            return Ok(None);
        }
    }
}

fn scales_for(mx: &[Vec<Q>], ma: &[Vec<Q>], perm: &[usize]) -> Option<Vec<Q>> {
    let m = perm.len();
    let mut d: Vec<Option<Q>> = vec![None; m];
    for t in 0..m {
        for u in 0..m {
            let want = &mx[perm[t]][perm[u]];
            let have = &ma[t][u];
            match (have.is_zero(), want.is_zero()) {
                (true, true) => {}
                (true, false) | (false, true) => return None,
                (false, false) => {
                    let v = want / have;
                    match &d[u] {
                        Some(prev) if *prev != v => return None,
                        _ => d[u] = Some(v),
                    }
                }
            }
        }
    }
    Some(d.into_iter().map(|v| v.unwrap_or_else(|| q(1, 1))).collect())
}

fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).expect("successor exists");
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// The catalog lattice an edge system should reduce to: `A_n` gives the
/// Volterra lattice on `n - 1` sites, `B_n` the B-type Volterra lattice on
/// `n - 1` sites. Other types have no catalog counterpart.
pub fn catalog_counterpart(rd: &RootData) -> Option<(SystemId, PolyVectorField)> {
    let sites = rd.rank.checked_sub(1).filter(|&s| s >= 1)?;
    let (sys, which) = match rd.root_type {
        RootType::A => (SystemId::volterra_a(rd.rank), SpecialField::Flow(2)),
        RootType::B => (SystemId::volterra_b(sites), SpecialField::BnVolterraFlow),
        _ => return None,
    };
    Some((sys, catalog::special_field(sys, which).ok()?))
}

/// Finds and verifies the change of variables onto the catalog lattice.
pub fn match_catalog(rd: &RootData) -> Result<Option<(SystemId, EdgeChange)>> {
    let Some((sys, target)) = catalog_counterpart(rd) else {
        return Ok(None);
    };
    Ok(find_edge_change(&x_system_rhs(rd), &target)?.map(|c| (sys, c)))
}
