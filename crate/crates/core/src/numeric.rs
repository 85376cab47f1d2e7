//! Small dense complex helpers.

use num_complex::Complex64;

pub type CMatrix = Vec<Vec<Complex64>>;

pub fn to_complex(m: &[Vec<f64>]) -> CMatrix {
    m.iter().map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect()).collect()
}

pub fn matmul(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let n = a.len();
    let mut out = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i][k];
            if aik == Complex64::new(0.0, 0.0) {
                continue;
            }
            for j in 0..n {
                out[i][j] += aik * b[k][j];
            }
        }
    }
    out
}

/// Coefficients `c_1..c_n` of `det(λ - M) = λ^n + c_1 λ^{n-1} + ... + c_n`
/// by the Faddeev–LeVerrier recursion.
pub fn charpoly(m: &CMatrix) -> Vec<Complex64> {
    let n = m.len();
    let mut coeffs = Vec::with_capacity(n);
    let mut acc = m.clone();
    for k in 1..=n {
        let trace: Complex64 = (0..n).map(|i| acc[i][i]).sum();
        let c = -trace / k as f64;
        coeffs.push(c);
        if k < n {
            for (i, row) in acc.iter_mut().enumerate() {
                row[i] += c;
            }
            acc = matmul(m, &acc);
        }
    }
    coeffs
}

/// Remainder of dividing monic `λ^n + Σ p_k λ^{n-k}` by monic
/// `λ^m + Σ d_k λ^{m-k}`; coefficients highest degree first.
pub fn monic_remainder(p: &[Complex64], d: &[Complex64]) -> Vec<Complex64> {
    let mut r: Vec<Complex64> = std::iter::once(Complex64::new(1.0, 0.0)).chain(p.iter().copied()).collect();
    let m = d.len();
    if r.len() <= m {
        return r;
    }
    for s in 0..(r.len() - m) {
        let lead = r[s];
        for (k, dk) in d.iter().enumerate() {
            r[s + 1 + k] -= lead * dk;
        }
        r[s] = Complex64::new(0.0, 0.0);
    }
    r[r.len() - m..].to_vec()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn charpoly_of_diagonal() {
        let m = to_complex(&[vec![2.0, 0.0], vec![0.0, 3.0]]);
        let c = charpoly(&m);
        assert!((c[0] + 5.0).norm() < 1e-12 && (c[1] - 6.0).norm() < 1e-12);
        // (λ-2)(λ-3) divided by (λ-2).
        let r = monic_remainder(&c, &[Complex64::new(-2.0, 0.0)]);
        assert!(r.iter().all(|z| z.norm() < 1e-12));
    }
}
