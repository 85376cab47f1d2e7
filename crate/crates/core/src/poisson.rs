//! Polynomial bivectors and vector fields.
//!
//! Conventions used throughout:
//! * `{F, G} = Σ π^{ij} ∂_i F ∂_j G`;
//! * the Hamiltonian field of `H` is `X^i = Σ_j π^{ij} ∂_j H`, so that
//!   `X_H(F) = {F, H}`;
//! * pushforward by a scaled permutation `y_t = s_t x_{src(t)}` is
//!   `(A_*π)^{ij}(y) = s_i s_j π^{src(i) src(j)}(A^{-1} y)`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polyalg::{LinearMap, Poly, Scalar, VarSpace, Vars, Q};

/// Antisymmetric matrix of polynomials. Only entries with `i < j` are
/// stored, and zero entries are dropped.
#[derive(Clone)]
pub struct PoissonTensor<F: Scalar = Q> {
    vars: Vars,
    upper: BTreeMap<(usize, usize), Poly<F>>,
    label: String,
}

impl<F: Scalar> PoissonTensor<F> {
    pub fn zero(vars: &Vars, label: impl Into<String>) -> Self {
        Self {
            vars: vars.clone(),
            upper: BTreeMap::new(),
            label: label.into(),
        }
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn dim(&self) -> usize {
        self.vars.len()
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// Adds `value` to `π^{ij}` (and `-value` to `π^{ji}`).
    pub fn add_entry(&mut self, i: usize, j: usize, value: Poly<F>) {
        assert!(i != j, "diagonal entries of a bivector are zero");
        assert!(i < self.dim() && j < self.dim(), "index out of range");
        let value = value.embed(&self.vars).expect("entry uses tensor variables");
        let (key, v) = if i < j { ((i, j), value) } else { ((j, i), -value) };
        let sum = match self.upper.remove(&key) {
            Some(old) => &old + &v,
            None => v,
        };
        if !sum.is_zero() {
            self.upper.insert(key, sum);
        }
    }

    /// Adds to the entry `{u, v}` by variable names.
    pub fn add_named(&mut self, u: &str, v: &str, value: Poly<F>) -> Result<()> {
        let i = self.vars.index_of(u)?;
        let j = self.vars.index_of(v)?;
        self.add_entry(i, j, value);
        Ok(())
    }

    pub fn get(&self, i: usize, j: usize) -> Poly<F> {
        match i.cmp(&j) {
            std::cmp::Ordering::Less => self.upper.get(&(i, j)).cloned(),
            std::cmp::Ordering::Greater => self.upper.get(&(j, i)).map(|p| -p),
            std::cmp::Ordering::Equal => None,
        }
        .unwrap_or_else(|| Poly::zero(&self.vars))
    }

    pub fn get_named(&self, u: &str, v: &str) -> Result<Poly<F>> {
        Ok(self.get(self.vars.index_of(u)?, self.vars.index_of(v)?))
    }

    /// Nonzero entries with `i < j`.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Poly<F>)> {
        self.upper.iter().map(|(&(i, j), p)| (i, j, p))
    }

    pub fn is_zero(&self) -> bool {
        self.upper.is_empty()
    }

    pub fn scale(&self, c: &F) -> Self {
        let mut out = Self::zero(&self.vars, self.label.clone());
        for (i, j, p) in self.entries() {
            out.add_entry(i, j, p.scale(c));
        }
        out
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_same(other.vars())?;
        let mut out = self.clone();
        for (i, j, p) in other.entries() {
            out.add_entry(i, j, p.clone());
        }
        out.label = format!("{}+{}", self.label, other.label);
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.scale(&-F::one()))
            .map(|t| t.with_label(format!("{}-{}", self.label, other.label)))
    }

    fn check_same(&self, vars: &Vars) -> Result<()> {
        if self.vars.as_ref() != vars.as_ref() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: vars.len(),
            });
        }
        Ok(())
    }

    /// Entrywise equality (labels ignored).
    pub fn same_entries(&self, other: &Self) -> bool {
        self.vars.as_ref() == other.vars.as_ref() && self.upper == other.upper
    }

    /// Returns `c` if `self = c * other` for some scalar `c` among the
    /// candidates.
    pub fn proportional_to(&self, other: &Self, candidates: &[F]) -> Option<F> {
        candidates
            .iter()
            .find(|c| self.same_entries(&other.scale(c)))
            .cloned()
    }

    /// Substitutes the variables of every entry, producing a tensor on the
    /// space of the images.
    pub fn map_entries(&self, target: &Vars, f: impl Fn(&Poly<F>) -> Result<Poly<F>>) -> Result<Self> {
        let mut out = Self::zero(target, self.label.clone());
        for (i, j, p) in self.entries() {
            out.add_entry(i, j, f(p)?);
        }
        Ok(out)
    }

    pub fn map_scalars<G: Scalar>(&self, f: impl Fn(&F) -> G + Copy) -> PoissonTensor<G> {
        let mut out = PoissonTensor::zero(&self.vars, self.label.clone());
        for (i, j, p) in self.entries() {
            out.add_entry(i, j, p.map_coeffs(f));
        }
        out
    }

    fn embed_fn(&self, f: &Poly<F>) -> Result<Poly<F>> {
        f.embed(&self.vars).map_err(|_| Error::DimensionMismatch {
            expected: self.dim(),
            got: f.vars().len(),
        })
    }

    /// `{F, G}`.
    pub fn bracket(&self, f: &Poly<F>, g: &Poly<F>) -> Result<Poly<F>> {
        let f = self.embed_fn(f)?;
        let g = self.embed_fn(g)?;
        let df: Vec<Poly<F>> = (0..self.dim()).map(|i| f.diff_at(i)).collect();
        let dg: Vec<Poly<F>> = (0..self.dim()).map(|i| g.diff_at(i)).collect();
        let mut out = Poly::zero(&self.vars);
        for (i, j, p) in self.entries() {
            let cross = &(&df[i] * &dg[j]) - &(&df[j] * &dg[i]);
            if !cross.is_zero() {
                out = &out + &(p * &cross);
            }
        }
        Ok(out)
    }

    /// Nonzero components `J^{ijk}`, `i < j < k`.
    pub fn jacobiator(&self) -> Jacobiator<F> {
        let m = self.dim();
        let mut rows: Vec<Vec<(usize, Poly<F>)>> = vec![Vec::new(); m];
        for (i, j, p) in self.entries() {
            rows[i].push((j, p.clone()));
            rows[j].push((i, -p));
        }
        // derivatives of each stored entry, keyed by (entry, variable)
        let mut deriv: BTreeMap<(usize, usize, usize), Poly<F>> = BTreeMap::new();
        for (i, j, p) in self.entries() {
            for l in 0..m {
                let d = p.diff_at(l);
                if !d.is_zero() {
                    deriv.insert((i, j, l), d);
                }
            }
        }
        let d = |a: usize, b: usize, l: usize| -> Option<Poly<F>> {
            if a < b {
                deriv.get(&(a, b, l)).cloned()
            } else if a > b {
                deriv.get(&(b, a, l)).map(|p| -p)
            } else {
                None
            }
        };
        let mut out = Vec::new();
        for i in 0..m {
            for j in (i + 1)..m {
                for k in (j + 1)..m {
                    let mut acc = Poly::zero(&self.vars);
                    for (a, b, c) in [(i, j, k), (j, k, i), (k, i, j)] {
                        for (l, pal) in &rows[a] {
                            if let Some(dbc) = d(b, c, *l) {
                                acc = &acc + &(pal * &dbc);
                            }
                        }
                    }
                    if !acc.is_zero() {
                        out.push(((i, j, k), acc));
                    }
                }
            }
        }
        Jacobiator {
            vars: self.vars.clone(),
            entries: out,
        }
    }

    pub fn is_poisson(&self) -> bool {
        self.jacobiator().is_zero()
    }

    /// `jacobiator(π + ρ) = 0`.
    pub fn is_compatible(&self, other: &Self) -> Result<bool> {
        Ok(self.try_add(other)?.is_poisson())
    }

    /// `X^i = Σ_j π^{ij} ∂_j H`.
    pub fn hamiltonian_vf(&self, h: &Poly<F>) -> Result<PolyVectorField<F>> {
        let h = self.embed_fn(h)?;
        let dh: Vec<Poly<F>> = (0..self.dim()).map(|j| h.diff_at(j)).collect();
        let mut comps = vec![Poly::zero(&self.vars); self.dim()];
        for (i, j, p) in self.entries() {
            if !dh[j].is_zero() {
                comps[i] = &comps[i] + &(p * &dh[j]);
            }
            if !dh[i].is_zero() {
                comps[j] = &comps[j] - &(p * &dh[i]);
            }
        }
        PolyVectorField::new(&self.vars, comps)
    }

    /// Pushforward by a scaled permutation.
    pub fn pushforward(&self, a: &LinearMap<F>) -> Result<Self> {
        if a.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: a.dim(),
            });
        }
        let inv = a.inverse();
        let mut out = Self::zero(&self.vars, format!("{}_*{}", a.name(), self.label));
        for i in 0..self.dim() {
            let (si, ci) = a.image(i);
            for j in (i + 1)..self.dim() {
                let (sj, cj) = a.image(j);
                let src = self.get(si, sj);
                if src.is_zero() {
                    continue;
                }
                let moved = inv.subst(&src)?;
                out.add_entry(i, j, moved.scale(&(ci.clone() * cj.clone())));
            }
        }
        Ok(out)
    }

    pub fn to_json(&self) -> TensorJson {
        TensorJson {
            dim: self.dim(),
            vars: self.vars.names().to_vec(),
            entries: self
                .entries()
                .map(|(i, j, p)| EntryJson {
                    i,
                    j,
                    poly: p.to_canonical_string(),
                })
                .collect(),
        }
    }

    pub fn from_json(json: &TensorJson, label: impl Into<String>) -> Result<Self> {
        if json.vars.len() != json.dim {
            return Err(Error::DimensionMismatch {
                expected: json.dim,
                got: json.vars.len(),
            });
        }
        let vars = VarSpace::new(json.vars.clone());
        let mut t = Self::zero(&vars, label);
        for e in &json.entries {
            if e.i >= e.j || e.j >= json.dim {
                return Err(Error::InvalidArgument(format!(
                    "tensor entry ({}, {}) must satisfy i < j < dim",
                    e.i, e.j
                )));
            }
            t.add_entry(e.i, e.j, Poly::parse(&e.poly, &vars)?);
        }
        Ok(t)
    }
}

impl<F: Scalar> fmt::Debug for PoissonTensor<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} on {:?}", self.label, self.vars.names())?;
        for (i, j, p) in self.entries() {
            writeln!(f, "  {{{}, {}}} = {}", self.vars.name(i), self.vars.name(j), p)?;
        }
        Ok(())
    }
}

impl<F: Scalar> PartialEq for PoissonTensor<F> {
    fn eq(&self, other: &Self) -> bool {
        self.same_entries(other)
    }
}

/// Serialized tensor: upper-triangular entries only, 0-based indices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TensorJson {
    pub dim: usize,
    pub vars: Vec<String>,
    pub entries: Vec<EntryJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntryJson {
    pub i: usize,
    pub j: usize,
    pub poly: String,
}

/// Sparse Jacobiator: only nonzero `J^{ijk}` with `i < j < k`.
#[derive(Clone, Debug)]
pub struct Jacobiator<F: Scalar = Q> {
    vars: Vars,
    entries: Vec<((usize, usize, usize), Poly<F>)>,
}

impl<F: Scalar> Jacobiator<F> {
    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> Poly<F> {
        self.entries
            .iter()
            .find(|(key, _)| *key == (i, j, k))
            .map(|(_, p)| p.clone())
            .unwrap_or_else(|| Poly::zero(&self.vars))
    }

    pub fn nonzero(&self) -> &[((usize, usize, usize), Poly<F>)] {
        &self.entries
    }
}

/// Coordinate vector of polynomials.
#[derive(Clone, PartialEq)]
pub struct PolyVectorField<F: Scalar = Q> {
    vars: Vars,
    comps: Vec<Poly<F>>,
}

impl<F: Scalar> PolyVectorField<F> {
    pub fn new(vars: &Vars, comps: Vec<Poly<F>>) -> Result<Self> {
        if comps.len() != vars.len() {
            return Err(Error::DimensionMismatch {
                expected: vars.len(),
                got: comps.len(),
            });
        }
        let comps = comps
            .into_iter()
            .map(|p| p.embed(vars))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            vars: vars.clone(),
            comps,
        })
    }

    pub fn zero(vars: &Vars) -> Self {
        Self {
            vars: vars.clone(),
            comps: vec![Poly::zero(vars); vars.len()],
        }
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn dim(&self) -> usize {
        self.comps.len()
    }

    pub fn components(&self) -> &[Poly<F>] {
        &self.comps
    }

    pub fn component(&self, name: &str) -> Result<&Poly<F>> {
        Ok(&self.comps[self.vars.index_of(name)?])
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(Poly::is_zero)
    }

    pub fn scale(&self, c: &F) -> Self {
        Self {
            vars: self.vars.clone(),
            comps: self.comps.iter().map(|p| p.scale(c)).collect(),
        }
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        if self.vars.as_ref() != other.vars.as_ref() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: other.dim(),
            });
        }
        Ok(Self {
            vars: self.vars.clone(),
            comps: self.comps.iter().zip(&other.comps).map(|(a, b)| a - b).collect(),
        })
    }

    /// `c` with `self = c * other`, searched among the candidates.
    pub fn proportional_to(&self, other: &Self, candidates: &[F]) -> Option<F> {
        candidates
            .iter()
            .find(|c| *self == other.scale(c))
            .cloned()
    }

    /// `Z(H) = Σ Z^i ∂_i H`.
    pub fn directional_action(&self, h: &Poly<F>) -> Result<Poly<F>> {
        let h = h.embed(&self.vars).map_err(|_| Error::DimensionMismatch {
            expected: self.dim(),
            got: h.vars().len(),
        })?;
        let mut out = Poly::zero(&self.vars);
        for (i, z) in self.comps.iter().enumerate() {
            if z.is_zero() {
                continue;
            }
            let d = h.diff_at(i);
            if !d.is_zero() {
                out = &out + &(z * &d);
            }
        }
        Ok(out)
    }

    /// `(L_Z π)^{ij} = Σ_k (Z^k ∂_k π^{ij} − π^{kj} ∂_k Z^i − π^{ik} ∂_k Z^j)`.
    pub fn lie_derivative_bivector(&self, pi: &PoissonTensor<F>) -> Result<PoissonTensor<F>> {
        pi.check_same(&self.vars)?;
        let m = self.dim();
        let dz: Vec<Vec<Poly<F>>> = self
            .comps
            .iter()
            .map(|z| (0..m).map(|k| z.diff_at(k)).collect())
            .collect();
        let mut out = PoissonTensor::zero(&self.vars, format!("L_Z {}", pi.label()));
        for i in 0..m {
            for j in (i + 1)..m {
                let mut acc = self.directional_action(&pi.get(i, j))?;
                for k in 0..m {
                    if !dz[i][k].is_zero() {
                        let pkj = pi.get(k, j);
                        if !pkj.is_zero() {
                            acc = &acc - &(&pkj * &dz[i][k]);
                        }
                    }
                    if !dz[j][k].is_zero() {
                        let pik = pi.get(i, k);
                        if !pik.is_zero() {
                            acc = &acc - &(&pik * &dz[j][k]);
                        }
                    }
                }
                out.add_entry(i, j, acc);
            }
        }
        Ok(out)
    }

    /// `(A_* Z)^i(y) = s_i Z^{src(i)}(A^{-1} y)`.
    pub fn pushforward(&self, a: &LinearMap<F>) -> Result<Self> {
        if a.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: a.dim(),
            });
        }
        let inv = a.inverse();
        let comps = (0..self.dim())
            .map(|i| {
                let (src, s) = a.image(i);
                inv.subst(&self.comps[src]).map(|p| p.scale(s))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(&self.vars, comps)
    }

    pub fn map_scalars<G: Scalar>(&self, f: impl Fn(&F) -> G + Copy) -> PolyVectorField<G> {
        PolyVectorField {
            vars: self.vars.clone(),
            comps: self.comps.iter().map(|p| p.map_coeffs(f)).collect(),
        }
    }

    /// `name' = poly` lines.
    pub fn equations(&self) -> Vec<String> {
        self.vars
            .names()
            .iter()
            .zip(&self.comps)
            .map(|(n, p)| format!("{n}' = {p}"))
            .collect()
    }
}

impl<F: Scalar> fmt::Debug for PolyVectorField<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.equations()).finish()
    }
}

/// Free-function forms mirroring the method API.
pub fn bracket<F: Scalar>(pi: &PoissonTensor<F>, f: &Poly<F>, g: &Poly<F>) -> Result<Poly<F>> {
    pi.bracket(f, g)
}

pub fn jacobiator<F: Scalar>(pi: &PoissonTensor<F>) -> Jacobiator<F> {
    pi.jacobiator()
}

pub fn is_poisson<F: Scalar>(pi: &PoissonTensor<F>) -> bool {
    pi.is_poisson()
}

pub fn is_compatible<F: Scalar>(pi: &PoissonTensor<F>, rho: &PoissonTensor<F>) -> Result<bool> {
    pi.is_compatible(rho)
}

pub fn hamiltonian_vf<F: Scalar>(pi: &PoissonTensor<F>, h: &Poly<F>) -> Result<PolyVectorField<F>> {
    pi.hamiltonian_vf(h)
}

pub fn lie_derivative_bivector<F: Scalar>(
    z: &PolyVectorField<F>,
    pi: &PoissonTensor<F>,
) -> Result<PoissonTensor<F>> {
    z.lie_derivative_bivector(pi)
}

pub fn pushforward_bivector<F: Scalar>(
    a: &LinearMap<F>,
    pi: &PoissonTensor<F>,
) -> Result<PoissonTensor<F>> {
    pi.pushforward(a)
}

pub fn pushforward_vf<F: Scalar>(a: &LinearMap<F>, z: &PolyVectorField<F>) -> Result<PolyVectorField<F>> {
    z.pushforward(a)
}

pub fn directional_action<F: Scalar>(z: &PolyVectorField<F>, h: &Poly<F>) -> Result<Poly<F>> {
    z.directional_action(h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyalg::qi;

    fn so3() -> PoissonTensor {
        let s = VarSpace::new(["x", "y", "z"]);
        let v = |n: &str| Poly::var(&s, n).unwrap();
        let mut t = PoissonTensor::zero(&s, "so3");
        t.add_entry(0, 1, v("z"));
        t.add_entry(1, 2, v("x"));
        t.add_entry(2, 0, v("y"));
        t
    }

    #[test]
    fn rigid_body_bracket_is_poisson_with_casimir() {
        let t = so3();
        assert!(t.is_poisson());
        let s = t.vars().clone();
        let c = Poly::parse("x^2 + y^2 + z^2", &s).unwrap();
        assert!(t.hamiltonian_vf(&c).unwrap().is_zero());
        assert_eq!(t.get(2, 0), Poly::var(&s, "y").unwrap());
        assert_eq!(t.get(0, 2), -Poly::var(&s, "y").unwrap());
    }

    #[test]
    fn hand_expanded_jacobiators() {
        let s = VarSpace::new(["b1", "b2", "b3"]);
        let v = |n: &str| Poly::<Q>::var(&s, n).unwrap();
        // π^{12} = b3, π^{23} = b1: every term of J^{123} needs a diagonal entry.
        let mut t = PoissonTensor::zero(&s, "complementary");
        t.add_entry(0, 1, v("b3"));
        t.add_entry(1, 2, v("b1"));
        assert!(t.jacobiator().is_zero());
        // π^{12} = b3, π^{23} = b2: J^{123} = π^{12} ∂_2 π^{23} = b3.
        let mut t = PoissonTensor::zero(&s, "candidate");
        t.add_entry(0, 1, v("b3"));
        t.add_entry(1, 2, v("b2"));
        assert_eq!(t.jacobiator().get(0, 1, 2), v("b3"));
        assert!(!t.is_poisson());
    }

    #[test]
    fn json_round_trip() {
        let t = so3();
        let js = serde_json::to_string(&t.to_json()).unwrap();
        let back = PoissonTensor::<Q>::from_json(&serde_json::from_str(&js).unwrap(), "so3").unwrap();
        assert_eq!(back, t);
        assert!(js.contains("\"i\":1,\"j\":2,\"poly\":\"x\""));
    }

    #[test]
    fn pushforward_by_identity_and_sign_flip() {
        let t = so3();
        assert_eq!(t.pushforward(&LinearMap::identity(3)).unwrap(), t);
        let flip = LinearMap::new("neg", vec![(0, qi(-1)), (1, qi(-1)), (2, qi(-1))], 2).unwrap();
        assert_eq!(t.pushforward(&flip).unwrap(), t.scale(&qi(-1)));
    }
}
