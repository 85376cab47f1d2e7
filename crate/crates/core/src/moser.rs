//! Squaring the B-type Volterra Lax matrix in `x`-variables and splitting the
//! square into two Jacobi blocks that carry Toda flows of types B and C.

use num_complex::Complex64;
use serde::Serialize;

use crate::catalog::{self, SpecialField, SystemId};
use crate::error::{Error, Result};
use crate::linalg;
use crate::matrix::PolyMatrix;
use crate::numeric;
use crate::poisson::PolyVectorField;
use crate::polyalg::{qi, Gaussian, Monomial, Poly, Scalar, VarSpace, Vars, Q};

/// Number of `x` variables for an `N × N` matrix.
fn x_count(size: usize) -> Result<usize> {
    if size < 3 || size % 2 == 0 {
        return Err(Error::InvalidArgument(format!("N must be odd and >= 3, got {size}")));
    }
    Ok((size - 1) / 2)
}

pub fn x_vars(m: usize) -> Vars {
    VarSpace::new(VarSpace::indexed("x", m))
}

/// Symmetric, zero diagonal, off-diagonal `x_1..x_m, i x_m..i x_1`.
pub fn x_lax(size: usize) -> Result<PolyMatrix<Gaussian>> {
    let m = x_count(size)?;
    let vars = x_vars(m);
    let mut l = PolyMatrix::zeros(&vars, size);
    for k in 0..size - 1 {
        let v = if k < m {
            Poly::var_at(&vars, k)
        } else {
            Poly::var_at(&vars, size - 2 - k).scale(&Gaussian::i())
        };
        l.set(k, k + 1, v.clone());
        l.set(k + 1, k, v);
    }
    Ok(l)
}

/// B-type Volterra lattice after `a_i = -2 x_i^2`:
/// `ẋ_i = x_i (x_{i+1}^2 - x_{i-1}^2)` inside, with `x_0 = 0` and the last
/// equation `ẋ_m = -x_m (x_m^2 + x_{m-1}^2)`.
pub fn x_flow(m: usize) -> Result<PolyVectorField> {
    if m == 0 {
        return Err(Error::InvalidArgument("need at least one variable".into()));
    }
    let vars = x_vars(m);
    let x = |i: usize| if (1..=m).contains(&i) { Poly::var_at(&vars, i - 1) } else { Poly::zero(&vars) };
    let comps = (1..=m)
        .map(|i| {
            let next = if i == m { -x(m).pow(2) } else { x(i + 1).pow(2) };
            &x(i) * &(&next - &x(i - 1).pow(2))
        })
        .collect();
    PolyVectorField::new(&vars, comps)
}

/// `d/dt(-2 x_i^2)` along [`x_flow`] minus the B-type Volterra field at
/// `a = -2 x^2`. Zero entries mean the substitution is exact.
pub fn x_flow_residual(m: usize) -> Result<Vec<Poly>> {
    let f = x_flow(m)?;
    let a3 = catalog::special_field(SystemId::volterra_b(m), SpecialField::BnVolterraFlow)?;
    let vars = f.vars().clone();
    let images: Vec<Poly> = (0..m).map(|i| Poly::var_at(&vars, i).pow(2).scale(&qi(-2))).collect();
    images
        .iter()
        .zip(a3.components())
        .map(|(ai, rhs)| Ok(&f.directional_action(ai)? - &rhs.compose(&images)?))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BlockType {
    B,
    C,
}

#[derive(Debug, Clone)]
pub struct JacobiBlock {
    /// Kept row/column indices of `L^2`, 1-based.
    pub kept: Vec<usize>,
    pub matrix: PolyMatrix<Gaussian>,
    pub block_type: BlockType,
    /// Rank of the Toda system: `n` for `B_n` (size `2n+1`) or `C_n` (size `2n`).
    pub rank: usize,
}

impl JacobiBlock {
    fn new(square: &PolyMatrix<Gaussian>, kept: Vec<usize>) -> Self {
        let zero_based: Vec<usize> = kept.iter().map(|k| k - 1).collect();
        let p = kept.len();
        let (block_type, rank) = if p % 2 == 1 { (BlockType::B, p / 2) } else { (BlockType::C, p / 2) };
        Self { matrix: square.submatrix(&zero_based), kept, block_type, rank }
    }

    pub fn tag(&self) -> String {
        format!("{:?}{}", self.block_type, self.rank)
    }

    pub fn is_real(&self) -> bool {
        self.matrix.rows().iter().flatten().all(|p| p.to_real().is_some())
    }
}

#[derive(Debug, Clone)]
pub struct MoserSplit {
    pub size: usize,
    pub lax: PolyMatrix<Gaussian>,
    pub square: PolyMatrix<Gaussian>,
    /// Rows/columns `1, 3, 5, ...` kept (the even ones removed).
    pub odd_kept: JacobiBlock,
    /// Rows/columns `2, 4, ...` kept (the odd ones removed).
    pub even_kept: JacobiBlock,
}

impl MoserSplit {
    /// The block of type B.
    pub fn b_block(&self) -> &JacobiBlock {
        if self.odd_kept.block_type == BlockType::B {
            &self.odd_kept
        } else {
            &self.even_kept
        }
    }

    pub fn c_block(&self) -> &JacobiBlock {
        if self.odd_kept.block_type == BlockType::C {
            &self.odd_kept
        } else {
            &self.even_kept
        }
    }

    /// True when `L^2` has no entries coupling odd and even indices.
    pub fn cross_blocks_vanish(&self) -> bool {
        let n = self.size;
        (0..n).all(|i| (0..n).all(|j| (i + j) % 2 == 0 || self.square.get(i, j).is_zero()))
    }
}

pub fn square_and_split(size: usize) -> Result<MoserSplit> {
    if size < 5 {
        return Err(Error::InvalidArgument(format!("N must be odd and >= 5, got {size}")));
    }
    let lax = x_lax(size)?;
    let square = lax.mul(&lax);
    let odd_kept = JacobiBlock::new(&square, (1..=size).step_by(2).collect());
    let even_kept = JacobiBlock::new(&square, (2..=size).step_by(2).collect());
    Ok(MoserSplit { size, lax, square, odd_kept, even_kept })
}

/// Toda coordinates read off a Jacobi block and the flow they inherit.
#[derive(Debug, Clone)]
pub struct Identification {
    pub block_type: BlockType,
    pub rank: usize,
    /// `A_1..A_n` as polynomials in `x` (upper off-diagonal).
    pub a: Vec<Poly<Gaussian>>,
    /// `B_1..B_n` as polynomials in `x` (diagonal).
    pub b: Vec<Poly<Gaussian>>,
    /// The induced system on `A_1..A_n, B_1..B_n`.
    pub induced: PolyVectorField<Gaussian>,
}

impl Identification {
    pub fn mapping(&self) -> Vec<String> {
        let a = self.a.iter().enumerate().map(|(i, p)| format!("A{} = {p}", i + 1));
        let b = self.b.iter().enumerate().map(|(i, p)| format!("B{} = {p}", i + 1));
        a.chain(b).collect()
    }
}

pub fn toda_vars(rank: usize) -> Vars {
    VarSpace::new(VarSpace::indexed("A", rank).into_iter().chain(VarSpace::indexed("B", rank)))
}

/// Reads `A_i = M_{i,i+1}` and `B_i = M_{i,i}` for `i = 1..n` and expresses
/// their derivatives along [`x_flow`] as polynomials in `A, B`.
pub fn identify_jacobi(block: &JacobiBlock) -> Result<Identification> {
    let m = &block.matrix;
    let n = block.rank;
    let xv = m.vars().clone();
    let flow = x_flow(xv.len())?.map_scalars(|c: &Q| Gaussian::from(c.clone()));
    let a: Vec<Poly<Gaussian>> = (0..n).map(|i| m.get(i, i + 1).clone()).collect();
    let b: Vec<Poly<Gaussian>> = (0..n).map(|i| m.get(i, i).clone()).collect();
    let gens: Vec<Poly<Gaussian>> = a.iter().chain(&b).cloned().collect();
    let tv = toda_vars(n);
    let comps = gens
        .iter()
        .enumerate()
        .map(|(k, g)| {
            let dot = flow.directional_action(g)?;
            express(&dot, &gens, &tv).ok_or_else(|| {
                Error::NotExpressible(format!("d/dt {} = {dot} is not a polynomial in A, B", tv.name(k)))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Identification {
        block_type: block.block_type,
        rank: n,
        a,
        b,
        induced: PolyVectorField::new(&tv, comps)?,
    })
}

/// Writes `target` as a polynomial of degree <= 2 in `gens`.
fn express(target: &Poly<Gaussian>, gens: &[Poly<Gaussian>], out_vars: &Vars) -> Option<Poly<Gaussian>> {
    let k = gens.len();
    let mut monos: Vec<Vec<i32>> = vec![vec![0; k]];
    for i in 0..k {
        let mut e = vec![0; k];
        e[i] = 1;
        monos.push(e.clone());
        for j in i..k {
            let mut f = e.clone();
            f[j] += 1;
            monos.push(f);
        }
    }
    let images: Vec<Poly<Gaussian>> = monos
        .iter()
        .map(|e| {
            e.iter().enumerate().fold(Poly::one(target.vars()), |acc, (i, &p)| &acc * &gens[i].pow(p as u32))
        })
        .collect();
    let mut rows: Vec<Monomial> = target.terms().map(|(m, _)| m.clone()).collect();
    for img in &images {
        rows.extend(img.terms().map(|(m, _)| m.clone()));
    }
    rows.sort();
    rows.dedup();
    let a: Vec<Vec<Gaussian>> = rows.iter().map(|r| images.iter().map(|p| p.coeff(r)).collect()).collect();
    let rhs: Vec<Gaussian> = rows.iter().map(|r| target.coeff(r)).collect();
    let (sol, _) = linalg::solve(&a, &rhs)?;
    Some(Poly::from_terms(out_vars, monos.into_iter().map(Monomial).zip(sol).collect::<Vec<_>>()))
}

/// Scaling `a_i = α A_i^2`, `b_i = β B_i` onto a Toda system of the catalog.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TodaScaling {
    pub system: String,
    pub alpha: String,
    pub beta: String,
}

/// Checks whether `a_i = α A_i^2`, `b_i = β B_i` carries the induced system
/// to the catalog flow `π_1 dH_2` of `target`.
pub fn matches_toda(ident: &Identification, target: SystemId, alpha: &Gaussian, beta: &Gaussian) -> Result<bool> {
    let flow = catalog::special_field(target, SpecialField::Flow(2))?.map_scalars(|c: &Q| Gaussian::from(c.clone()));
    let n = ident.rank;
    if flow.dim() != 2 * n {
        return Ok(false);
    }
    let tv = ident.induced.vars().clone();
    let av = |i: usize| Poly::<Gaussian>::var_at(&tv, i);
    let images: Vec<Poly<Gaussian>> = (0..n)
        .map(|i| av(i).pow(2).scale(alpha))
        .chain((0..n).map(|i| av(n + i).scale(beta)))
        .collect();
    for (k, img) in images.iter().enumerate() {
        let lhs = ident.induced.directional_action(img)?;
        let rhs = flow.components()[k].compose(&images)?;
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Searches small scalings for the match with the catalog Toda system of
/// the block's type.
pub fn find_toda_scaling(ident: &Identification) -> Result<Option<TodaScaling>> {
    let sys = match ident.block_type {
        BlockType::B => SystemId::toda_b(ident.rank),
        BlockType::C => SystemId::toda_c(ident.rank),
    };
    let mut cands = Vec::new();
    for base in [qi(1), qi(2), qi(4), Q::new(1.into(), 2.into()), Q::new(1.into(), 4.into())] {
        for unit in [Gaussian::one(), -Gaussian::one(), Gaussian::i(), -Gaussian::i()] {
            cands.push(unit * Gaussian::from(base.clone()));
        }
    }
    for alpha in &cands {
        for beta in &cands {
            if matches_toda(ident, sys, alpha, beta)? {
                return Ok(Some(TodaScaling {
                    system: sys.to_string(),
                    alpha: Poly::constant(&VarSpace::new(Vec::<String>::new()), alpha.clone()).to_string(),
                    beta: Poly::constant(&VarSpace::new(Vec::<String>::new()), beta.clone()).to_string(),
                }));
            }
        }
    }
    Ok(None)
}

fn eval_matrix(m: &PolyMatrix<Gaussian>, x: &[Complex64]) -> Result<numeric::CMatrix> {
    m.eval_c64(x)
}

/// Largest remainder coefficient when dividing the characteristic
/// polynomial of `L^2` by that of each block, at the point `x`. Zero (to
/// rounding) means both block spectra sit inside the squared spectrum of `L`.
pub fn spectral_residual(split: &MoserSplit, x: &[f64]) -> Result<f64> {
    let xc: Vec<Complex64> = x.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    let l = eval_matrix(&split.lax, &xc)?;
    let l2 = numeric::matmul(&l, &l);
    let full = numeric::charpoly(&l2);
    let mut worst: f64 = 0.0;
    for block in [&split.odd_kept, &split.even_kept] {
        let d = numeric::charpoly(&eval_matrix(&block.matrix, &xc)?);
        for r in numeric::monic_remainder(&full, &d) {
            worst = worst.max(r.norm());
        }
    }
    Ok(worst)
}

/// Conjugation `L_x = c D L_B D^{-1}` with `c = i/√2`, `D = diag(d_k)`,
/// `d_1 = 1`, `d_{k+1} = d_k s_k / c`, where `s_k` is the `k`-th
/// off-diagonal entry of `L_x` and `L_B` is the B-type Volterra Lax matrix
/// at `a = -2 x^2`. Returns the largest entrywise discrepancy at `x`.
pub fn conjugation_residual(size: usize, x: &[f64]) -> Result<f64> {
    let m = x_count(size)?;
    if x.len() != m {
        return Err(Error::DimensionMismatch { expected: m, got: x.len() });
    }
    if x.iter().any(|&v| v == 0.0) {
        return Err(Error::Domain("conjugation needs all x_i nonzero".into()));
    }
    let xc: Vec<Complex64> = x.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    let lx = eval_matrix(&x_lax(size)?, &xc)?;
    let a: Vec<f64> = x.iter().map(|v| -2.0 * v * v).collect();
    let lb = numeric::to_complex(&catalog::lax(SystemId::volterra_b(m)).eval_f64(&a)?);
    let c = Complex64::new(0.0, std::f64::consts::FRAC_1_SQRT_2);
    let mut d = vec![Complex64::new(1.0, 0.0)];
    for k in 0..size - 1 {
        d.push(d[k] * lx[k][k + 1] / c);
    }
    let mut worst: f64 = 0.0;
    for i in 0..size {
        for j in 0..size {
            let conj = c * d[i] * lb[i][j] / d[j];
            worst = worst.max((conj - lx[i][j]).norm());
        }
    }
    Ok(worst)
}
