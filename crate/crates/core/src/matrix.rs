//! Square matrices of polynomials.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::polyalg::{Poly, Scalar, Vars, Q};

#[derive(Clone, PartialEq)]
pub struct PolyMatrix<F: Scalar = Q> {
    vars: Vars,
    rows: Vec<Vec<Poly<F>>>,
}

/// A Lax matrix is a polynomial matrix in the phase variables.
pub type LaxMatrix<F = Q> = PolyMatrix<F>;

impl<F: Scalar> PolyMatrix<F> {
    pub fn zeros(vars: &Vars, size: usize) -> Self {
        Self {
            vars: vars.clone(),
            rows: vec![vec![Poly::zero(vars); size]; size],
        }
    }

    pub fn from_rows(vars: &Vars, rows: Vec<Vec<Poly<F>>>) -> Result<Self> {
        let n = rows.len();
        let mut out = Self::zeros(vars, n);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: row.len(),
                });
            }
            for (j, p) in row.into_iter().enumerate() {
                out.rows[i][j] = p.embed(vars)?;
            }
        }
        Ok(out)
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn get(&self, i: usize, j: usize) -> &Poly<F> {
        &self.rows[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: Poly<F>) {
        self.rows[i][j] = p.embed(&self.vars).expect("entry in matrix variables");
    }

    pub fn set_const(&mut self, i: usize, j: usize, c: F) {
        self.rows[i][j] = Poly::constant(&self.vars, c);
    }

    pub fn rows(&self) -> &[Vec<Poly<F>>] {
        &self.rows
    }

    pub fn identity(vars: &Vars, size: usize) -> Self {
        let mut m = Self::zeros(vars, size);
        for i in 0..size {
            m.rows[i][i] = Poly::one(vars);
        }
        m
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.size();
        let mut out = Self::zeros(&self.vars, n);
        for i in 0..n {
            for k in 0..n {
                let a = &self.rows[i][k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = &other.rows[k][j];
                    if !b.is_zero() {
                        out.rows[i][j] = &out.rows[i][j] + &(a * b);
                    }
                }
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::identity(&self.vars, self.size());
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (i, row) in out.rows.iter_mut().enumerate() {
            for (j, p) in row.iter_mut().enumerate() {
                *p = &*p - &other.rows[i][j];
            }
        }
        out
    }

    pub fn commutator(&self, other: &Self) -> Self {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn trace(&self) -> Poly<F> {
        let mut t = Poly::zero(&self.vars);
        for i in 0..self.size() {
            t = &t + &self.rows[i][i];
        }
        t
    }

    /// Strictly upper-triangular part.
    pub fn strictly_upper(&self) -> Self {
        let mut out = Self::zeros(&self.vars, self.size());
        for i in 0..self.size() {
            for j in (i + 1)..self.size() {
                out.rows[i][j] = self.rows[i][j].clone();
            }
        }
        out
    }

    /// Principal submatrix on the given indices.
    pub fn submatrix(&self, keep: &[usize]) -> Self {
        let rows = keep
            .iter()
            .map(|&i| keep.iter().map(|&j| self.rows[i][j].clone()).collect())
            .collect();
        Self {
            vars: self.vars.clone(),
            rows,
        }
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.size()).all(|i| (0..i).all(|j| self.rows[i][j] == self.rows[j][i]))
    }

    pub fn map_entries(&self, f: impl Fn(&Poly<F>) -> Result<Poly<F>>, target: &Vars) -> Result<Self> {
        let rows = self
            .rows
            .iter()
            .map(|r| r.iter().map(&f).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        PolyMatrix::from_rows(target, rows)
    }

    pub fn eval_c64(&self, point: &[Complex64]) -> Result<Vec<Vec<Complex64>>> {
        self.rows
            .iter()
            .map(|r| r.iter().map(|p| p.eval_c64(point)).collect())
            .collect()
    }

    /// Canonical strings, row by row.
    pub fn to_strings(&self) -> Vec<Vec<String>> {
        self.rows
            .iter()
            .map(|r| r.iter().map(Poly::to_canonical_string).collect())
            .collect()
    }
}

impl PolyMatrix<Q> {
    pub fn eval_f64(&self, point: &[f64]) -> Result<Vec<Vec<f64>>> {
        self.rows
            .iter()
            .map(|r| r.iter().map(|p| p.eval_f64(point)).collect())
            .collect()
    }
}

impl<F: Scalar> fmt::Debug for PolyMatrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.to_strings() {
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}
