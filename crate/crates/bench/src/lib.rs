//! Fixed workloads shared by the benchmarks.

use todavolt_core::catalog::{self, Symmetry, SystemId};
use todavolt_core::flows;
use todavolt_core::reduction::reduced_bracket;
use todavolt_core::{FiniteGroupAction, PoissonTensor, Result};

/// Jacobiator of the cubic Toda bracket on `toda-a:size`.
pub fn cubic_jacobiator(size: usize) -> Result<bool> {
    Ok(catalog::tensor(SystemId::toda_a(size), 3)?.jacobiator().is_zero())
}

/// The linear Toda bracket reduced to the B lattice of rank `n`.
pub fn mirror_reduction(n: usize) -> Result<PoissonTensor> {
    let sys = SystemId::toda_a(2 * n + 1);
    let group = FiniteGroupAction::generated_by(&[catalog::symmetry(Symmetry::PhiToda, sys)?])?;
    reduced_bracket(&catalog::tensor(sys, 1)?, &group, &catalog::chart(Symmetry::PhiToda, sys)?)
}

/// RK4 run of the Toda flow with step `1e-3`.
pub fn toda_run(size: usize, t_end: f64) -> Result<Vec<f64>> {
    let sys = SystemId::toda_a(size);
    let field = catalog::special_field(sys, catalog::SpecialField::Flow(2))?;
    let x0 = flows::random_point(sys, 7, (0.1, 1.0), (-1.0, 1.0));
    Ok(flows::integrate(&field, &x0, t_end, 1e-3)?.last().to_vec())
}
