//! Poisson reduction to the fixed-point set of a finite group of linear
//! Poisson symmetries: average the lifts, bracket, restrict.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg;
use crate::poisson::PoissonTensor;
use crate::polyalg::{LinearMap, Poly, Scalar, Vars, Q};

/// A finite group of scaled permutations, closed under composition.
#[derive(Clone, Debug)]
pub struct FiniteGroupAction<F: Scalar = Q> {
    elements: Vec<LinearMap<F>>,
}

const MAX_GROUP_ORDER: usize = 4096;

impl<F: Scalar> FiniteGroupAction<F> {
    /// Closure of the generators under composition.
    pub fn generated_by(gens: &[LinearMap<F>]) -> Result<Self> {
        let dim = gens
            .first()
            .map(LinearMap::dim)
            .ok_or_else(|| Error::InvalidGroup("no generators".into()))?;
        let mut elements = vec![LinearMap::identity(dim)];
        let mut frontier = elements.clone();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for x in &frontier {
                for g in gens {
                    let y = g.compose(x)?;
                    if !elements.iter().any(|e| e.same_action(&y)) {
                        elements.push(y.clone());
                        next.push(y);
                        if elements.len() > MAX_GROUP_ORDER {
                            return Err(Error::InvalidGroup("generated group is too large".into()));
                        }
                    }
                }
            }
            frontier = next;
        }
        let group = Self { elements };
        group.validate(gens)?;
        Ok(group)
    }

    pub fn trivial(dim: usize) -> Self {
        Self {
            elements: vec![LinearMap::identity(dim)],
        }
    }

    fn validate(&self, gens: &[LinearMap<F>]) -> Result<()> {
        let order = self.order() as u32;
        for g in gens {
            if !g.check_order() {
                return Err(Error::InvalidGroup(format!(
                    "{} does not have declared order {}",
                    g.name(),
                    g.order()
                )));
            }
            if order % g.actual_order() != 0 {
                return Err(Error::InvalidGroup(format!(
                    "order of {} does not divide the group order {order}",
                    g.name()
                )));
            }
        }
        for a in &self.elements {
            for b in &self.elements {
                let c = a.compose(b)?;
                if !self.elements.iter().any(|e| e.same_action(&c)) {
                    return Err(Error::InvalidGroup("not closed under composition".into()));
                }
            }
        }
        Ok(())
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn dim(&self) -> usize {
        self.elements[0].dim()
    }

    pub fn elements(&self) -> &[LinearMap<F>] {
        &self.elements
    }

    /// Mean of `F ∘ g` over the group.
    pub fn average(&self, f: &Poly<F>) -> Result<Poly<F>> {
        let mut acc = Poly::zero(f.vars());
        for g in &self.elements {
            acc = &acc + &g.subst(f)?;
        }
        let inv = F::from_i64(self.order() as i64).inv().expect("nonzero order");
        Ok(acc.scale(&inv))
    }

    /// Dimension of the common fixed subspace: the rank of the averaging
    /// projector `(1/|G|) Σ M_g`.
    pub fn fixed_dimension(&self) -> usize {
        linalg::rank(&self.average_matrix())
    }

    fn average_matrix(&self) -> Vec<Vec<F>> {
        let m = self.dim();
        let mut avg = vec![vec![F::zero(); m]; m];
        for g in &self.elements {
            for t in 0..m {
                let (src, s) = g.image(t);
                avg[t][src] = avg[t][src].clone() + s.clone();
            }
        }
        avg
    }
}

/// Linear parametrization of a fixed-point set.
///
/// `section[k]` expresses ambient coordinate `k` in the reduced variables;
/// `lifts[j]` is the ambient linear function pulling back reduced
/// coordinate `j`.
#[derive(Clone, Debug)]
pub struct FixedPointChart<F: Scalar = Q> {
    ambient: Vars,
    reduced: Vars,
    section: Vec<Poly<F>>,
    lifts: Vec<Poly<F>>,
}

impl<F: Scalar> FixedPointChart<F> {
    pub fn new(ambient: &Vars, reduced: &Vars, section: Vec<Poly<F>>, lifts: Vec<Poly<F>>) -> Result<Self> {
        if section.len() != ambient.len() {
            return Err(Error::InvalidChart(format!(
                "section has {} components for {} ambient coordinates",
                section.len(),
                ambient.len()
            )));
        }
        if lifts.len() != reduced.len() {
            return Err(Error::InvalidChart(format!(
                "{} lifts for {} reduced coordinates",
                lifts.len(),
                reduced.len()
            )));
        }
        let section = section.into_iter().map(|p| p.embed(reduced)).collect::<Result<Vec<_>>>()?;
        let lifts = lifts.into_iter().map(|p| p.embed(ambient)).collect::<Result<Vec<_>>>()?;
        for p in section.iter().chain(&lifts) {
            if p.degree().is_some_and(|d| d != 1) || p.terms().any(|(m, _)| m.degree() != 1) {
                return Err(Error::InvalidChart(format!("non-linear chart component {p}")));
            }
        }
        let chart = Self {
            ambient: ambient.clone(),
            reduced: reduced.clone(),
            section,
            lifts,
        };
        for (j, lift) in chart.lifts.iter().enumerate() {
            let back = chart.restrict(lift)?;
            if back != Poly::var_at(reduced, j) {
                return Err(Error::InvalidChart(format!(
                    "projection∘section is not the identity on {}",
                    reduced.name(j)
                )));
            }
        }
        Ok(chart)
    }

    /// The trivial chart of a space onto itself.
    pub fn identity(vars: &Vars) -> Self {
        let ids: Vec<Poly<F>> = (0..vars.len()).map(|i| Poly::var_at(vars, i)).collect();
        Self {
            ambient: vars.clone(),
            reduced: vars.clone(),
            section: ids.clone(),
            lifts: ids,
        }
    }

    pub fn ambient(&self) -> &Vars {
        &self.ambient
    }

    pub fn reduced(&self) -> &Vars {
        &self.reduced
    }

    pub fn section(&self) -> &[Poly<F>] {
        &self.section
    }

    pub fn lifts(&self) -> &[Poly<F>] {
        &self.lifts
    }

    pub fn map_scalars<G: Scalar>(&self, f: impl Fn(&F) -> G + Copy) -> FixedPointChart<G> {
        FixedPointChart {
            ambient: self.ambient.clone(),
            reduced: self.reduced.clone(),
            section: self.section.iter().map(|p| p.map_coeffs(f)).collect(),
            lifts: self.lifts.iter().map(|p| p.map_coeffs(f)).collect(),
        }
    }

    /// `F ∘ section`.
    pub fn restrict(&self, f: &Poly<F>) -> Result<Poly<F>> {
        f.embed(&self.ambient)?.compose(&self.section)
    }

    /// Checks that the section image is exactly the fixed-point set of `g`.
    pub fn validate_for(&self, group: &FiniteGroupAction<F>) -> Result<()> {
        if group.dim() != self.ambient.len() {
            return Err(Error::DimensionMismatch {
                expected: self.ambient.len(),
                got: group.dim(),
            });
        }
        for g in group.elements() {
            for k in 0..self.ambient.len() {
                let moved = self.restrict(&g.subst(&Poly::var_at(&self.ambient, k))?)?;
                if moved != self.section[k] {
                    return Err(Error::InvalidChart(format!(
                        "{} does not fix the chart image in coordinate {}",
                        g.name(),
                        self.ambient.name(k)
                    )));
                }
            }
        }
        let section_matrix: Vec<Vec<F>> = self
            .section
            .iter()
            .map(|p| {
                (0..self.reduced.len())
                    .map(|j| p.diff_at(j).as_constant().expect("linear section"))
                    .collect()
            })
            .collect();
        let r = linalg::rank(&section_matrix);
        let fixed = group.fixed_dimension();
        if r != self.reduced.len() || r != fixed {
            return Err(Error::InvalidChart(format!(
                "section rank {r} and reduced dimension {} must equal the fixed-set dimension {fixed}",
                self.reduced.len()
            )));
        }
        Ok(())
    }
}

/// Mean of `F` over the group.
pub fn invariant_average<F: Scalar>(f: &Poly<F>, group: &FiniteGroupAction<F>) -> Result<Poly<F>> {
    group.average(f)
}

/// Fails with [`Error::NotPoisson`] unless `g_*π = π` for every element.
pub fn check_poisson_action<F: Scalar>(pi: &PoissonTensor<F>, group: &FiniteGroupAction<F>) -> Result<()> {
    for g in group.elements() {
        if !pi.pushforward(g)?.same_entries(pi) {
            return Err(Error::NotPoisson(format!("{}_*{} != {}", g.name(), pi.label(), pi.label())));
        }
    }
    Ok(())
}

/// The induced bracket on the fixed-point set.
pub fn reduced_bracket<F: Scalar>(
    pi: &PoissonTensor<F>,
    group: &FiniteGroupAction<F>,
    chart: &FixedPointChart<F>,
) -> Result<PoissonTensor<F>> {
    if pi.vars().as_ref() != chart.ambient().as_ref() {
        return Err(Error::DimensionMismatch {
            expected: chart.ambient().len(),
            got: pi.dim(),
        });
    }
    check_poisson_action(pi, group)?;
    chart.validate_for(group)?;
    let averaged = chart
        .lifts()
        .iter()
        .map(|l| group.average(l))
        .collect::<Result<Vec<_>>>()?;
    let r = chart.reduced().len();
    let mut out = PoissonTensor::zero(chart.reduced(), format!("{}|fix", pi.label()));
    for i in 0..r {
        for j in (i + 1)..r {
            let b = pi.bracket(&averaged[i], &averaged[j])?;
            out.add_entry(i, j, chart.restrict(&b)?);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct EntryDiff {
    pub i: usize,
    pub j: usize,
    pub left: String,
    pub right: String,
    pub expected: String,
    pub got: String,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct ReductionReport {
    pub tensor: String,
    pub group_order: usize,
    pub reduced_vars: Vec<String>,
    /// Set when the reduction itself could not be carried out.
    pub error: Option<String>,
    pub diff: Vec<EntryDiff>,
}

impl ReductionReport {
    pub fn passed(&self) -> bool {
        self.error.is_none() && self.diff.is_empty()
    }
}

/// Entrywise diff between two tensors on the same variables.
pub fn tensor_diff<F: Scalar>(expected: &PoissonTensor<F>, got: &PoissonTensor<F>) -> Vec<EntryDiff> {
    let vars = expected.vars();
    let mut out = Vec::new();
    for i in 0..expected.dim() {
        for j in (i + 1)..expected.dim() {
            let (e, g) = (expected.get(i, j), got.get(i, j));
            if e != g {
                out.push(EntryDiff {
                    i,
                    j,
                    left: vars.name(i).to_string(),
                    right: vars.name(j).to_string(),
                    expected: e.to_canonical_string(),
                    got: g.to_canonical_string(),
                });
            }
        }
    }
    out
}

/// Runs the reduction and compares it with `expected` entry by entry.
pub fn verify_reduction<F: Scalar>(
    pi: &PoissonTensor<F>,
    group: &FiniteGroupAction<F>,
    chart: &FixedPointChart<F>,
    expected: &PoissonTensor<F>,
) -> ReductionReport {
    let mut report = ReductionReport {
        tensor: pi.label().to_string(),
        group_order: group.order(),
        reduced_vars: chart.reduced().names().to_vec(),
        error: None,
        diff: Vec::new(),
    };
    match reduced_bracket(pi, group, chart) {
        Ok(got) => {
            if got.vars().as_ref() != expected.vars().as_ref() {
                report.error = Some(format!(
                    "expected tensor lives on {:?}, reduction on {:?}",
                    expected.vars().names(),
                    got.vars().names()
                ));
            } else {
                report.diff = tensor_diff(expected, &got);
            }
        }
        Err(e) => report.error = Some(e.to_string()),
    }
    report
}
