//! Forward-mode automatic differentiation.
//!
//! Every geometric quantity in this crate is a rational function of the
//! coordinates, so all evaluation code is written once against [`Scalar`]
//! and instantiated with `f64` for values or with nested [`Dual`] numbers for
//! exact first, second and third derivatives. Nesting `Dual<Dual<f64>>`
//! seeded in directions `i` (outer) and `j` (inner) yields the mixed partial
//! `d_i d_j f` in `.d.d`.

use std::fmt::Debug;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

/// A field-like number type supporting the arithmetic needed by the geometry.
pub trait Scalar:
    Copy
    + Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
{
    fn cst(value: f64) -> Self;

    /// Real part, discarding all infinitesimal components.
    fn re(&self) -> f64;

    fn zero() -> Self {
        Self::cst(0.0)
    }

    fn one() -> Self {
        Self::cst(1.0)
    }

    fn scale(self, factor: f64) -> Self {
        self * Self::cst(factor)
    }
}

impl Scalar for f64 {
    #[inline]
    fn cst(value: f64) -> Self {
        value
    }

    #[inline]
    fn re(&self) -> f64 {
        *self
    }

    #[inline]
    fn scale(self, factor: f64) -> Self {
        self * factor
    }
}

/// Dual number `v + d ε` with `ε² = 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Dual<T> {
    pub v: T,
    pub d: T,
}

impl<T: Scalar> Dual<T> {
    pub fn new(v: T, d: T) -> Self {
        Dual { v, d }
    }

    /// A variable with unit derivative.
    pub fn var(v: T) -> Self {
        Dual { v, d: T::one() }
    }

    pub fn constant(v: T) -> Self {
        Dual { v, d: T::zero() }
    }
}

impl<T: Scalar> Add for Dual<T> {
    type Output = Self;
    #[inline]
    fn add(self, rhs: Self) -> Self {
        Dual { v: self.v + rhs.v, d: self.d + rhs.d }
    }
}

impl<T: Scalar> Sub for Dual<T> {
    type Output = Self;
    #[inline]
    fn sub(self, rhs: Self) -> Self {
        Dual { v: self.v - rhs.v, d: self.d - rhs.d }
    }
}

impl<T: Scalar> Mul for Dual<T> {
    type Output = Self;
    #[inline]
    fn mul(self, rhs: Self) -> Self {
        Dual { v: self.v * rhs.v, d: self.v * rhs.d + self.d * rhs.v }
    }
}

impl<T: Scalar> Div for Dual<T> {
    type Output = Self;
    #[inline]
    fn div(self, rhs: Self) -> Self {
        let inv = T::one() / rhs.v;
        let v = self.v * inv;
        Dual { v, d: (self.d - v * rhs.d) * inv }
    }
}

impl<T: Scalar> Neg for Dual<T> {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Dual { v: -self.v, d: -self.d }
    }
}

impl<T: Scalar> AddAssign for Dual<T> {
    #[inline]
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl<T: Scalar> SubAssign for Dual<T> {
    #[inline]
    fn sub_assign(&mut self, rhs: Self) {
        *self = *self - rhs;
    }
}

impl<T: Scalar> Scalar for Dual<T> {
    #[inline]
    fn cst(value: f64) -> Self {
        Dual { v: T::cst(value), d: T::zero() }
    }

    #[inline]
    fn re(&self) -> f64 {
        self.v.re()
    }

    #[inline]
    fn scale(self, factor: f64) -> Self {
        Dual { v: self.v.scale(factor), d: self.d.scale(factor) }
    }
}

/// Lift a point into dual numbers seeded along `direction`.
pub fn seed<T: Scalar, const N: usize>(point: &[T; N], direction: &[f64; N]) -> [Dual<T>; N] {
    std::array::from_fn(|i| Dual::new(point[i], T::cst(direction[i])))
}

/// Lift a point into dual numbers seeded along the `axis`-th coordinate.
pub fn seed_axis<T: Scalar, const N: usize>(point: &[T; N], axis: usize) -> [Dual<T>; N] {
    std::array::from_fn(|i| Dual::new(point[i], if i == axis { T::one() } else { T::zero() }))
}

pub fn lift<T: Scalar, const N: usize>(point: &[f64; N]) -> [T; N] {
    std::array::from_fn(|i| T::cst(point[i]))
}

/// Values and all first partials of a vector-valued function of `D`
/// variables: `partials[k][i] = d f_k / d x_i`.
pub fn jet<N: Scalar, const D: usize>(
    point: &[N; D],
    f: impl Fn(&[Dual<N>; D]) -> Vec<Dual<N>>,
) -> (Vec<N>, Vec<[N; D]>) {
    let mut values = Vec::new();
    let mut partials: Vec<[N; D]> = Vec::new();
    for axis in 0..D {
        let out = f(&seed_axis(point, axis));
        if axis == 0 {
            values = out.iter().map(|d| d.v).collect();
            partials = vec![[N::zero(); D]; out.len()];
        }
        for (k, d) in out.iter().enumerate() {
            partials[k][axis] = d.d;
        }
    }
    (values, partials)
}
