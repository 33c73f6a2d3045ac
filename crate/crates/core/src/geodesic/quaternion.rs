use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

/// `w + i x + j y + k z`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Quaternion {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

const EXP_SERIES_BELOW: f64 = 1e-8;

impl Quaternion {
    pub const ZERO: Quaternion = Quaternion { w: 0.0, x: 0.0, y: 0.0, z: 0.0 };
    pub const ONE: Quaternion = Quaternion { w: 1.0, x: 0.0, y: 0.0, z: 0.0 };

    pub fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Quaternion { w, x, y, z }
    }

    /// The pure imaginary quaternion `i a + j b + k c`.
    pub fn imaginary(a: f64, b: f64, c: f64) -> Self {
        Quaternion { w: 0.0, x: a, y: b, z: c }
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.w, self.x, self.y, self.z]
    }

    pub fn conj(self) -> Self {
        Quaternion { w: self.w, x: -self.x, y: -self.y, z: -self.z }
    }

    pub fn norm2(self) -> f64 {
        self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z
    }

    pub fn norm(self) -> f64 {
        self.norm2().sqrt()
    }

    pub fn scale(self, c: f64) -> Self {
        Quaternion { w: self.w * c, x: self.x * c, y: self.y * c, z: self.z * c }
    }

    /// `None` for zero.
    pub fn inverse(self) -> Option<Self> {
        let n2 = self.norm2();
        (n2 > 0.0).then(|| self.conj().scale(1.0 / n2))
    }

    /// Exponential of a pure imaginary quaternion `v`:
    /// `cos|v| + (v/|v|) sin|v|`. The real part of `v` is ignored.
    pub fn exp_imaginary(self) -> Self {
        let v = Quaternion { w: 0.0, ..self };
        let a = v.norm();
        if a < EXP_SERIES_BELOW {
            // 1 + v - a^2/2 + ...; v^2 = -a^2
            return Quaternion::ONE + v - Quaternion::ONE.scale(0.5 * a * a);
        }
        Quaternion::ONE.scale(a.cos()) + v.scale(a.sin() / a)
    }
}

impl Add for Quaternion {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Quaternion { w: self.w + o.w, x: self.x + o.x, y: self.y + o.y, z: self.z + o.z }
    }
}

impl Sub for Quaternion {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Quaternion { w: self.w - o.w, x: self.x - o.x, y: self.y - o.y, z: self.z - o.z }
    }
}

impl Neg for Quaternion {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(-1.0)
    }
}

impl Mul for Quaternion {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Quaternion {
            w: self.w * o.w - self.x * o.x - self.y * o.y - self.z * o.z,
            x: self.w * o.x + self.x * o.w + self.y * o.z - self.z * o.y,
            y: self.w * o.y - self.x * o.z + self.y * o.w + self.z * o.x,
            z: self.w * o.z + self.x * o.y - self.y * o.x + self.z * o.w,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn units_multiply_like_hamilton() {
        let (i, j, k) = (Quaternion::imaginary(1., 0., 0.), Quaternion::imaginary(0., 1., 0.), Quaternion::imaginary(0., 0., 1.));
        assert_eq!(i * j, k);
        assert_eq!(j * k, i);
        assert_eq!(k * i, j);
        assert_eq!(i * i, -Quaternion::ONE);
        assert_eq!(j * i, -k);
    }

    #[test]
    fn norm_is_multiplicative() {
        let a = Quaternion::new(0.3, -1.2, 0.7, 2.0);
        let b = Quaternion::new(-0.4, 0.1, 1.5, -0.6);
        assert!(((a * b).norm() - a.norm() * b.norm()).abs() < 1e-14);
        assert!(((a * b) * a - a * (b * a)).norm() < 1e-14);
    }

    #[test]
    fn exp_is_unit_and_matches_series() {
        let v = Quaternion::imaginary(0.3, -0.4, 1.2);
        assert!((v.exp_imaginary().norm() - 1.0).abs() < 1e-15);
        let small = Quaternion::imaginary(1e-9, 0.0, 0.0);
        let e = small.exp_imaginary();
        assert!((e.x - 1e-9).abs() < 1e-24 && (e.w - 1.0).abs() < 1e-16);
    }
}
