//! Small dense Hermitian eigenvalues by cyclic Jacobi rotations.

use num_complex::Complex64;

/// Square complex matrix in row-major order.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![Complex64::new(0.0, 0.0); n * n],
        }
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Self {
        let n = rows.len();
        let mut m = Self::zeros(n);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), n, "matrix must be square");
            for (j, v) in row.iter().enumerate() {
                m[(i, j)] = *v;
            }
        }
        m
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Self {
        let rows: Vec<Vec<Complex64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// max |A_ij − conj(A_ji)|
    pub fn hermitian_defect(&self) -> f64 {
        let mut d = 0.0f64;
        for i in 0..self.n {
            for j in i..self.n {
                d = d.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        d
    }

    /// Replace A by (A + A^H)/2.
    pub fn symmetrize(&mut self) {
        for i in 0..self.n {
            let d = self[(i, i)];
            self[(i, i)] = Complex64::new(d.re, 0.0);
            for j in i + 1..self.n {
                let avg = (self[(i, j)] + self[(j, i)].conj()) * 0.5;
                self[(i, j)] = avg;
                self[(j, i)] = avg.conj();
            }
        }
    }

    pub fn rows(&self) -> Vec<Vec<Complex64>> {
        self.data
            .chunks(self.n.max(1))
            .map(|c| c.to_vec())
            .collect()
    }
}

impl std::ops::Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.n + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.n + j]
    }
}

/// Eigenvalues (ascending) of a Hermitian matrix.
///
/// The n×n Hermitian `A = B + iC` is embedded as the 2n×2n real symmetric
/// `[[B, −C], [C, B]]`, whose spectrum is that of `A` with every eigenvalue
/// doubled; the real matrix is diagonalized by cyclic Jacobi sweeps.
/// Only the Hermitian part of the input is used.
pub fn hermitian_eigenvalues(a: &CMatrix) -> Vec<f64> {
    let n = a.dim();
    if n == 0 {
        return Vec::new();
    }
    let m = 2 * n;
    let mut s = vec![vec![0.0f64; m]; m];
    for i in 0..n {
        for j in 0..n {
            let z = (a[(i, j)] + a[(j, i)].conj()) * 0.5;
            s[i][j] = z.re;
            s[i + n][j + n] = z.re;
            s[i][j + n] = -z.im;
            s[i + n][j] = z.im;
        }
    }
    let mut evals = jacobi_symmetric(&mut s);
    evals.sort_by(f64::total_cmp);
    // pairs are equal up to roundoff; keep one of each
    evals.chunks(2).map(|p| 0.5 * (p[0] + p[1])).collect()
}

fn jacobi_symmetric(a: &mut [Vec<f64>]) -> Vec<f64> {
    let n = a.len();
    let scale: f64 = a.iter().flatten().map(|x| x * x).sum::<f64>().sqrt();
    if scale == 0.0 {
        return vec![0.0; n];
    }
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum::<f64>()
            .sqrt();
        if off <= 1e-15 * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p][q];
                if apq.abs() <= 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    (0..n).map(|i| a[i][i]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn pauli_y_has_plus_minus_one() {
        let a = CMatrix::from_rows(&[
            vec![c(0.0, 0.0), c(0.0, -1.0)],
            vec![c(0.0, 1.0), c(0.0, 0.0)],
        ]);
        let e = hermitian_eigenvalues(&a);
        assert!(
            (e[0] + 1.0).abs() < 1e-14 && (e[1] - 1.0).abs() < 1e-14,
            "{e:?}"
        );
    }

    #[test]
    fn real_symmetric_3x3() {
        // eigenvalues of [[2,-1,0],[-1,2,-1],[0,-1,2]] are 2-√2, 2, 2+√2
        let a = CMatrix::from_real_rows(&[
            vec![2.0, -1.0, 0.0],
            vec![-1.0, 2.0, -1.0],
            vec![0.0, -1.0, 2.0],
        ]);
        let e = hermitian_eigenvalues(&a);
        let s2 = 2f64.sqrt();
        for (got, want) in e.iter().zip([2.0 - s2, 2.0, 2.0 + s2]) {
            assert!((got - want).abs() < 1e-13, "{e:?}");
        }
    }

    #[test]
    fn complex_hermitian_trace_and_det() {
        let a = CMatrix::from_rows(&[
            vec![c(1.0, 0.0), c(2.0, 3.0)],
            vec![c(2.0, -3.0), c(-1.0, 0.0)],
        ]);
        let e = hermitian_eigenvalues(&a);
        // trace 0, det = -1 - 13 = -14 -> ±√14
        assert!((e[0] + 14f64.sqrt()).abs() < 1e-13);
        assert!((e[1] - 14f64.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn symmetrize_removes_defect() {
        let mut a = CMatrix::from_rows(&[
            vec![c(1.0, 1e-9), c(2.0, 0.0)],
            vec![c(2.0, 1e-9), c(0.0, 0.0)],
        ]);
        assert!(a.hermitian_defect() > 0.0);
        a.symmetrize();
        assert_eq!(a.hermitian_defect(), 0.0);
    }
}
