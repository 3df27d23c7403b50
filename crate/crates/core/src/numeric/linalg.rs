//! Dense complex LU factorization with partial pivoting.

use num_complex::Complex64;

/// Determinant together with the spread of pivot magnitudes.
#[derive(Clone, Copy, Debug)]
pub struct LuDeterminant {
    pub det: Complex64,
    /// max |pivot| / min |pivot|; infinite for a singular matrix.
    pub pivot_ratio: f64,
}

/// Determinant of an n×n row-major matrix by Doolittle LU with row pivoting.
pub fn determinant(mut a: Vec<Complex64>, n: usize) -> LuDeterminant {
    assert_eq!(a.len(), n * n, "matrix must be n×n");
    let mut det = Complex64::new(1.0, 0.0);
    let (mut pmax, mut pmin) = (0.0f64, f64::INFINITY);
    for col in 0..n {
        let mut piv = col;
        let mut best = a[col * n + col].norm();
        for row in col + 1..n {
            let v = a[row * n + col].norm();
            if v > best {
                best = v;
                piv = row;
            }
        }
        if best == 0.0 {
            return LuDeterminant {
                det: Complex64::new(0.0, 0.0),
                pivot_ratio: f64::INFINITY,
            };
        }
        if piv != col {
            for j in 0..n {
                a.swap(col * n + j, piv * n + j);
            }
            det = -det;
        }
        let p = a[col * n + col];
        pmax = pmax.max(best);
        pmin = pmin.min(best);
        det *= p;
        let pinv = p.inv();
        for row in col + 1..n {
            let factor = a[row * n + col] * pinv;
            if factor.norm() == 0.0 {
                continue;
            }
            for j in col + 1..n {
                let u = a[col * n + j];
                a[row * n + j] -= factor * u;
            }
        }
    }
    LuDeterminant {
        det,
        pivot_ratio: if n == 0 { 1.0 } else { pmax / pmin },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn empty_matrix_has_unit_determinant() {
        assert_eq!(determinant(vec![], 0).det, c(1.0, 0.0));
    }

    #[test]
    fn two_by_two() {
        let m = vec![c(1.0, 1.0), c(2.0, 0.0), c(0.0, 3.0), c(4.0, -1.0)];
        let d = determinant(m, 2).det;
        let expect = c(1.0, 1.0) * c(4.0, -1.0) - c(2.0, 0.0) * c(0.0, 3.0);
        assert!((d - expect).norm() < 1e-14);
    }

    #[test]
    fn permutation_sign() {
        let m = vec![
            c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0),
            c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0),
            c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0),
        ];
        assert!((determinant(m, 3).det - c(1.0, 0.0)).norm() < 1e-15);
    }
}
