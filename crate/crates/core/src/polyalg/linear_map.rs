//! Signed, scaled coordinate permutations.

use std::fmt;

use crate::error::{Error, Result};
use crate::polyalg::poly::{Monomial, Poly};
use crate::polyalg::scalar::{Gaussian, Scalar, Q};

/// Point map `x -> y` with `y[t] = scale[t] * x[src[t]]`.
///
/// `order` is the declared group order: applying the map `order` times must
/// give the identity (see [`LinearMap::check_order`]).
#[derive(Clone, PartialEq, Eq)]
pub struct LinearMap<F: Scalar = Q> {
    name: String,
    images: Vec<(usize, F)>,
    order: u32,
}

impl<F: Scalar> LinearMap<F> {
    /// Validates that `images` describes an invertible scaled permutation.
    pub fn new(name: impl Into<String>, images: Vec<(usize, F)>, order: u32) -> Result<Self> {
        let name = name.into();
        let m = images.len();
        let mut seen = vec![false; m];
        for (t, (src, s)) in images.iter().enumerate() {
            if *src >= m || seen[*src] {
                return Err(Error::NotScaledPermutation(format!(
                    "{name}: source index {src} of target {t} is out of range or repeated"
                )));
            }
            if s.is_zero() {
                return Err(Error::NotScaledPermutation(format!(
                    "{name}: zero scale on target {t}"
                )));
            }
            seen[*src] = true;
        }
        if order == 0 {
            return Err(Error::InvalidArgument("group order must be positive".into()));
        }
        Ok(Self {
            name,
            images,
            order,
        })
    }

    /// Accepts a dense matrix `M` (acting as `y = M x`) if every row and
    /// column holds exactly one nonzero entry.
    pub fn from_matrix(name: impl Into<String>, rows: &[Vec<F>], order: u32) -> Result<Self> {
        let name = name.into();
        let mut images = Vec::with_capacity(rows.len());
        for (t, row) in rows.iter().enumerate() {
            if row.len() != rows.len() {
                return Err(Error::DimensionMismatch {
                    expected: rows.len(),
                    got: row.len(),
                });
            }
            let nz: Vec<usize> = (0..row.len()).filter(|&k| !row[k].is_zero()).collect();
            if nz.len() != 1 {
                return Err(Error::NotScaledPermutation(format!(
                    "{name}: row {t} has {} nonzero entries",
                    nz.len()
                )));
            }
            images.push((nz[0], row[nz[0]].clone()));
        }
        Self::new(name, images, order)
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            name: "id".into(),
            images: (0..dim).map(|i| (i, F::one())).collect(),
            order: 1,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn dim(&self) -> usize {
        self.images.len()
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn image(&self, t: usize) -> (usize, &F) {
        (self.images[t].0, &self.images[t].1)
    }

    pub fn is_identity(&self) -> bool {
        self.images
            .iter()
            .enumerate()
            .all(|(t, (s, c))| *s == t && c.is_one())
    }

    /// `self ∘ other` as point maps.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        self.check_dim(other.dim())?;
        let images = self
            .images
            .iter()
            .map(|(src, s)| {
                let (src2, s2) = &other.images[*src];
                (*src2, s.clone() * s2.clone())
            })
            .collect();
        Ok(Self {
            name: format!("{}∘{}", self.name, other.name),
            images,
            order: lcm(self.order, other.order),
        })
    }

    pub fn inverse(&self) -> Self {
        let mut images = vec![(0, F::zero()); self.dim()];
        for (t, (src, s)) in self.images.iter().enumerate() {
            images[*src] = (t, s.inv().expect("nonzero scale"));
        }
        Self {
            name: format!("{}^-1", self.name),
            images,
            order: self.order,
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::identity(self.dim());
        for _ in 0..k {
            acc = self.compose(&acc).expect("same dimension");
        }
        acc.name = format!("{}^{k}", self.name);
        acc
    }

    /// Same point map (names and declared orders ignored).
    pub fn same_action(&self, other: &Self) -> bool {
        self.images == other.images
    }

    /// True when `self^order` is the identity.
    pub fn check_order(&self) -> bool {
        self.pow(self.order).is_identity()
    }

    /// Smallest `k >= 1` with `self^k = id`.
    pub fn actual_order(&self) -> u32 {
        let mut acc = self.clone();
        let mut k = 1;
        while !acc.is_identity() {
            acc = self.compose(&acc).expect("same dimension");
            k += 1;
        }
        k
    }

    /// Applies the point map.
    pub fn apply(&self, x: &[F]) -> Result<Vec<F>> {
        self.check_dim(x.len())?;
        Ok(self
            .images
            .iter()
            .map(|(src, s)| s.clone() * x[*src].clone())
            .collect())
    }

    /// `p ∘ A`: each variable `x_t` becomes `scale[t] * x_{src[t]}`.
    pub fn subst(&self, p: &Poly<F>) -> Result<Poly<F>> {
        self.check_dim(p.vars().len())?;
        let m = self.dim();
        let terms = p.terms().map(|(mono, c)| {
            let mut e = vec![0; m];
            let mut coeff = c.clone();
            for (t, &ex) in mono.exponents().iter().enumerate() {
                if ex == 0 {
                    continue;
                }
                let (src, s) = &self.images[t];
                e[*src] += ex;
                let base = if ex > 0 {
                    s.clone()
                } else {
                    s.inv().expect("nonzero scale")
                };
                for _ in 0..ex.unsigned_abs() {
                    coeff = coeff * base.clone();
                }
            }
            (Monomial(e), coeff)
        });
        Ok(Poly::from_terms(p.vars(), terms.collect::<Vec<_>>()))
    }

    fn check_dim(&self, got: usize) -> Result<()> {
        if got != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got,
            });
        }
        Ok(())
    }

    pub fn map_scalars<G: Scalar>(&self, f: impl Fn(&F) -> G) -> LinearMap<G> {
        LinearMap {
            name: self.name.clone(),
            images: self.images.iter().map(|(s, c)| (*s, f(c))).collect(),
            order: self.order,
        }
    }
}

impl LinearMap<Q> {
    pub fn to_gaussian(&self) -> LinearMap<Gaussian> {
        self.map_scalars(|c| Gaussian::from(c.clone()))
    }
}

fn lcm(a: u32, b: u32) -> u32 {
    num_integer::lcm(a, b)
}

/// `p ∘ A`; fails if the dimensions disagree.
pub fn subst_linear<F: Scalar>(p: &Poly<F>, a: &LinearMap<F>) -> Result<Poly<F>> {
    a.subst(p)
}

impl<F: Scalar> fmt::Debug for LinearMap<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[", self.name)?;
        for (t, (src, s)) in self.images.iter().enumerate() {
            if t > 0 {
                f.write_str(", ")?;
            }
            let mut c = String::new();
            s.write_canonical(&mut c);
            write!(f, "{t}<-{c}*x{src}")?;
        }
        write!(f, "; order {}]", self.order)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyalg::poly::VarSpace;
    use crate::polyalg::scalar::qi;

    #[test]
    fn rejects_non_permutations() {
        assert!(matches!(
            LinearMap::<Q>::new("bad", vec![(0, qi(1)), (0, qi(1))], 2),
            Err(Error::NotScaledPermutation(_))
        ));
        let rows = vec![vec![qi(1), qi(1)], vec![qi(0), qi(1)]];
        assert!(matches!(
            LinearMap::from_matrix("shear", &rows, 1),
            Err(Error::NotScaledPermutation(_))
        ));
        let rows = vec![vec![qi(0), qi(-1)], vec![qi(1), qi(0)]];
        let m = LinearMap::from_matrix("rot", &rows, 4).unwrap();
        assert!(m.check_order());
        assert_eq!(m.actual_order(), 4);
    }

    #[test]
    fn compose_inverse_and_subst() {
        let s = VarSpace::new(["x", "y"]);
        let m = LinearMap::new("swap", vec![(1, qi(2)), (0, qi(-1))], 4).unwrap();
        assert!(m.compose(&m.inverse()).unwrap().is_identity());
        let x = Poly::var(&s, "x").unwrap();
        let y = Poly::var(&s, "y").unwrap();
        let p = &x * &y.pow(2);
        // x -> 2y, y -> -x
        assert_eq!(m.subst(&p).unwrap(), (&y * &x.pow(2)).scale(&qi(2)));
        let pt = [qi(3), qi(5)];
        assert_eq!(
            m.subst(&p).unwrap().eval(&pt).unwrap(),
            p.eval(&m.apply(&pt).unwrap()).unwrap()
        );
    }
}
