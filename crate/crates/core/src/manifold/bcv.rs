//! The three-dimensional BCV family: classification of `(m, l)` and the
//! orthonormal frame `E_1, E_2, E_3`.

use nalgebra::Matrix3;
use serde::{Deserialize, Serialize};

use super::ModelParams;
use crate::error::{Error, Result};

/// Equality tolerance for the parameter predicates.
const PARAM_EPS: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BcvClass {
    Euclidean3,
    Sphere3,
    S2xR,
    H2xR,
    SU2,
    SL2R,
    Nil3,
}

impl BcvClass {
    /// Case number (i)..(vii) in the classical ordering.
    pub fn case_number(self) -> u8 {
        match self {
            BcvClass::Euclidean3 => 1,
            BcvClass::Sphere3 => 2,
            BcvClass::S2xR => 3,
            BcvClass::H2xR => 4,
            BcvClass::SU2 => 5,
            BcvClass::SL2R => 6,
            BcvClass::Nil3 => 7,
        }
    }

    pub fn case_roman(self) -> &'static str {
        ["i", "ii", "iii", "iv", "v", "vi", "vii"][self.case_number() as usize - 1]
    }

    pub fn name(self) -> &'static str {
        match self {
            BcvClass::Euclidean3 => "Euclidean3",
            BcvClass::Sphere3 => "Sphere3",
            BcvClass::S2xR => "S2xR",
            BcvClass::H2xR => "H2xR",
            BcvClass::SU2 => "SU2",
            BcvClass::SL2R => "SL2R",
            BcvClass::Nil3 => "Nil3",
        }
    }
}

/// Predicate used for the round-sphere case.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum Case2Predicate {
    /// `m = l / 4`
    #[default]
    Printed,
    /// `4 m = l^2`
    Squared,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BcvCase {
    pub class: BcvClass,
    pub case: u8,
}

/// First matching case in the order (i)..(vii).
pub fn bcv_classify(m: f64, l: f64, predicate: Case2Predicate) -> BcvCase {
    let zero = |v: f64| v.abs() <= PARAM_EPS;
    let sphere = match predicate {
        Case2Predicate::Printed => zero(m - l / 4.0),
        Case2Predicate::Squared => zero(4.0 * m - l * l),
    };
    let class = if zero(m) && zero(l) {
        BcvClass::Euclidean3
    } else if sphere {
        BcvClass::Sphere3
    } else if m > 0.0 && zero(l) {
        BcvClass::S2xR
    } else if m < 0.0 && zero(l) {
        BcvClass::H2xR
    } else if m > 0.0 {
        BcvClass::SU2
    } else if m < 0.0 {
        BcvClass::SL2R
    } else {
        BcvClass::Nil3
    };
    BcvCase { class, case: class.case_number() }
}

/// Columns are `E_1, E_2, E_3` in the coordinate basis `(x, y, z)`.
pub fn bcv_frame(x: f64, y: f64, p: &ModelParams) -> Result<Matrix3<f64>> {
    let k = 1.0 + p.m * (x * x + y * y);
    if !(k > 0.0) {
        return Err(Error::DomainViolation { k });
    }
    let hl = 0.5 * p.l;
    Ok(Matrix3::new(
        k, 0.0, 0.0, //
        0.0, k, 0.0, //
        -hl * y, hl * x, 1.0,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn printed_cases() {
        let table = [
            ((0.0, 0.0), BcvClass::Euclidean3),
            ((1.0, 0.0), BcvClass::S2xR),
            ((-1.0, 0.0), BcvClass::H2xR),
            ((0.0, 2.0), BcvClass::Nil3),
            ((1.0, 1.0), BcvClass::SU2),
            ((-1.0, 1.0), BcvClass::SL2R),
            ((0.25, 1.0), BcvClass::Sphere3),
        ];
        for ((m, l), class) in table {
            assert_eq!(bcv_classify(m, l, Case2Predicate::Printed).class, class, "({m}, {l})");
        }
    }

    #[test]
    fn squared_predicate() {
        assert_eq!(bcv_classify(1.0, 2.0, Case2Predicate::Squared).class, BcvClass::Sphere3);
        assert_eq!(bcv_classify(1.0, 2.0, Case2Predicate::Printed).class, BcvClass::SU2);
        assert_eq!(bcv_classify(0.25, 1.0, Case2Predicate::Squared).class, BcvClass::Sphere3);
    }

    #[test]
    fn frame_examples() {
        let p = ModelParams::new(1.0, 2.0);
        assert_eq!(bcv_frame(0.0, 0.0, &p).unwrap(), Matrix3::identity());
        let e = bcv_frame(0.0, 1.0, &p).unwrap();
        assert_eq!(e.column(0).iter().copied().collect::<Vec<_>>(), vec![2.0, 0.0, -1.0]);
        let e = bcv_frame(1.0, 0.0, &p).unwrap();
        assert_eq!(e.column(1).iter().copied().collect::<Vec<_>>(), vec![0.0, 2.0, 1.0]);
        assert!(bcv_frame(1.0, 0.0, &ModelParams::new(-1.0, 0.0)).is_err());
    }
}
