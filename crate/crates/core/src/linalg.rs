//! Exact Gaussian elimination over any coefficient field.

use crate::polyalg::Scalar;

/// Reduced row echelon form. Returns the pivot columns.
pub fn rref<F: Scalar>(m: &mut [Vec<F>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].inv().expect("nonzero pivot");
        for x in m[r].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for k in 0..cols {
                    let v = m[r][k].clone();
                    m[i][k] = m[i][k].clone() - f.clone() * v;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<F: Scalar>(m: &[Vec<F>]) -> usize {
    let mut work = m.to_vec();
    rref(&mut work).len()
}

/// Solves `A x = b`. Returns one solution (free variables set to zero) and
/// the nullity, or `None` if the system is inconsistent.
pub fn solve<F: Scalar>(a: &[Vec<F>], b: &[F]) -> Option<(Vec<F>, usize)> {
    let cols = a.first().map_or(0, Vec::len);
    let mut aug: Vec<Vec<F>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.last() == Some(&cols) {
        return None;
    }
    let mut x = vec![F::zero(); cols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = aug[r][cols].clone();
    }
    Some((x, cols - pivots.len()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyalg::{q, qi, Q};

    #[test]
    fn solves_unique_and_detects_inconsistency() {
        let a = vec![vec![qi(2), qi(1)], vec![qi(1), qi(3)]];
        let (x, null) = solve(&a, &[qi(3), qi(5)]).unwrap();
        assert_eq!(x, vec![q(4, 5), q(7, 5)]);
        assert_eq!(null, 0);
        let sing = vec![vec![qi(1), qi(2)], vec![qi(2), qi(4)]];
        assert!(solve(&sing, &[qi(1), qi(3)]).is_none());
        assert_eq!(solve(&sing, &[qi(1), qi(2)]).unwrap().1, 1);
        assert_eq!(rank::<Q>(&sing), 1);
    }
}
