//! Dense rank-3 and rank-4 tensors over the 7-dimensional frame or
//! coordinate index set. Storage is row-major and indices are 0-based.

use std::ops::{Index, IndexMut};

use crate::scalar::Scalar;

pub const DIM: usize = 7;

#[derive(Clone, Debug, PartialEq)]
pub struct Tensor3<T> {
    data: Vec<T>,
}

impl<T: Scalar> Tensor3<T> {
    pub fn zeros() -> Self {
        Tensor3 { data: vec![T::zero(); DIM * DIM * DIM] }
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Tensor3<U> {
        Tensor3 { data: self.data.iter().map(f).collect() }
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn from_fn(f: impl Fn(usize, usize, usize) -> T) -> Self {
        let mut out = Self::zeros();
        for a in 0..DIM {
            for b in 0..DIM {
                for c in 0..DIM {
                    out[[a, b, c]] = f(a, b, c);
                }
            }
        }
        out
    }
}

impl<T> Index<[usize; 3]> for Tensor3<T> {
    type Output = T;
    #[inline]
    fn index(&self, [a, b, c]: [usize; 3]) -> &T {
        &self.data[(a * DIM + b) * DIM + c]
    }
}

impl<T> IndexMut<[usize; 3]> for Tensor3<T> {
    #[inline]
    fn index_mut(&mut self, [a, b, c]: [usize; 3]) -> &mut T {
        &mut self.data[(a * DIM + b) * DIM + c]
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Tensor4<T> {
    data: Vec<T>,
}

impl<T: Scalar> Tensor4<T> {
    pub fn zeros() -> Self {
        Tensor4 { data: vec![T::zero(); DIM * DIM * DIM * DIM] }
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Tensor4<U> {
        Tensor4 { data: self.data.iter().map(f).collect() }
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    /// Contract every slot with the columns of `basis`:
    /// `out[a][b][c][d] = sum self[i][j][k][l] B[i][a] B[j][b] B[k][c] B[l][d]`.
    pub fn change_basis(&self, basis: &[[T; DIM]; DIM]) -> Self {
        // one slot at a time, rotating the contracted slot to the back
        let mut cur = self.clone();
        for _ in 0..4 {
            let mut next = Self::zeros();
            for j in 0..DIM {
                for k in 0..DIM {
                    for l in 0..DIM {
                        for a in 0..DIM {
                            let mut acc = T::zero();
                            for i in 0..DIM {
                                acc += cur[[i, j, k, l]] * basis[i][a];
                            }
                            next[[j, k, l, a]] = acc;
                        }
                    }
                }
            }
            cur = next;
        }
        cur
    }
}

impl Tensor4<f64> {
    /// Component with 1-based frame labels, as in `R_{X_1 X_4 X_1 X_4}`.
    pub fn component(&self, a: usize, b: usize, c: usize, d: usize) -> f64 {
        self[[a - 1, b - 1, c - 1, d - 1]]
    }
}

impl<T> Index<[usize; 4]> for Tensor4<T> {
    type Output = T;
    #[inline]
    fn index(&self, [a, b, c, d]: [usize; 4]) -> &T {
        &self.data[((a * DIM + b) * DIM + c) * DIM + d]
    }
}

impl<T> IndexMut<[usize; 4]> for Tensor4<T> {
    #[inline]
    fn index_mut(&mut self, [a, b, c, d]: [usize; 4]) -> &mut T {
        &mut self.data[((a * DIM + b) * DIM + c) * DIM + d]
    }
}

pub type Mat<T> = [[T; DIM]; DIM];

pub fn mat_zeros<T: Scalar>() -> Mat<T> {
    [[T::zero(); DIM]; DIM]
}

pub fn max_abs(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, |acc, v| acc.max(v.abs()))
}
