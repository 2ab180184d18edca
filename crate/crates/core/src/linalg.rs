//! Dense matrices over the Gaussian rationals and exact nullspaces by
//! fraction-free (Bareiss) elimination.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::poly::GaussianRational;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<GaussianRational>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![GaussianRational::zero(); rows * cols],
        }
    }

    pub fn from_rows(cols: usize, rows: Vec<Vec<GaussianRational>>) -> Self {
        let mut m = Matrix::zeros(rows.len(), cols);
        for (i, r) in rows.into_iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged matrix");
            for (j, v) in r.into_iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &GaussianRational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: GaussianRational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[GaussianRational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul_vec(&self, v: &[GaussianRational]) -> Vec<GaussianRational> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(GaussianRational::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Scales every row to Gaussian-integer entries.
    fn clear_denominators(&mut self) {
        for i in 0..self.rows {
            let l = self.row(i).iter().fold(BigInt::one(), |l, v| {
                num_integer::Integer::lcm(&l, &v.denominator_lcm())
            });
            if !l.is_one() {
                for j in 0..self.cols {
                    let v = self.get(i, j).scale_int(&l);
                    self.set(i, j, v);
                }
            }
        }
    }

    /// Fraction-free row echelon form. Returns the pivot columns; entries
    /// stay Gaussian integers, every division by the previous pivot is exact.
    fn bareiss_echelon(&mut self) -> Vec<usize> {
        self.clear_denominators();
        let mut pivots = Vec::new();
        let mut prev = GaussianRational::one();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self.get(i, c).is_zero()) else {
                continue;
            };
            self.swap_rows(r, p);
            let piv = self.get(r, c).clone();
            for i in r + 1..self.rows {
                let lead = self.get(i, c).clone();
                for j in c + 1..self.cols {
                    let v = &(&piv * self.get(i, j)) - &(&lead * self.get(r, j));
                    self.set(i, j, &v / &prev);
                }
                self.set(i, c, GaussianRational::zero());
            }
            prev = piv;
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().bareiss_echelon().len()
    }
}

/// Basis of `{v : m v = 0}`. Vector `k` has a 1 at the `k`-th free column
/// and zeros at the other free columns.
pub fn nullspace(m: &Matrix) -> Vec<Vec<GaussianRational>> {
    let mut e = m.clone();
    let pivots = e.bareiss_echelon();
    let free: Vec<usize> = (0..m.cols()).filter(|c| !pivots.contains(c)).collect();
    let mut basis = Vec::with_capacity(free.len());
    for &f in &free {
        let mut v = vec![GaussianRational::zero(); m.cols()];
        v[f] = GaussianRational::one();
        for (r, &pc) in pivots.iter().enumerate().rev() {
            let mut s = GaussianRational::zero();
            for j in pc + 1..m.cols() {
                if !v[j].is_zero() {
                    s += &(e.get(r, j) * &v[j]);
                }
            }
            v[pc] = -(&s / e.get(r, pc));
        }
        basis.push(v);
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> GaussianRational {
        s.parse().unwrap()
    }

    fn row(v: &[&str]) -> Vec<GaussianRational> {
        v.iter().map(|s| q(s)).collect()
    }

    #[test]
    fn one_by_two() {
        let m = Matrix::from_rows(2, vec![row(&["-1", "-2"])]);
        assert_eq!(nullspace(&m), vec![row(&["-2", "1"])]);
    }

    #[test]
    fn all_ones() {
        let m = Matrix::from_rows(3, vec![row(&["1", "1", "1"])]);
        let k = nullspace(&m);
        assert_eq!(k, vec![row(&["-1", "1", "0"]), row(&["-1", "0", "1"])]);
    }

    #[test]
    fn zero_matrix_full_kernel() {
        let k = nullspace(&Matrix::zeros(1, 2));
        assert_eq!(k, vec![row(&["1", "0"]), row(&["0", "1"])]);
        let k = nullspace(&Matrix::zeros(0, 3));
        assert_eq!(k.len(), 3);
    }

    #[test]
    fn gaussian_and_fractional_entries() {
        let m = Matrix::from_rows(
            3,
            vec![
                row(&["1/2", "i", "1"]),
                row(&["1", "2*i", "3/5"]),
                row(&["0", "0", "1-i"]),
            ],
        );
        let k = nullspace(&m);
        assert_eq!(k.len(), 1);
        for v in &k {
            assert!(m.mul_vec(v).iter().all(Zero::is_zero));
        }
        assert_eq!(m.rank(), 2);
    }

    #[test]
    fn full_rank_has_trivial_kernel() {
        let m = Matrix::from_rows(2, vec![row(&["1", "2"]), row(&["3", "4"])]);
        assert!(nullspace(&m).is_empty());
    }
}
