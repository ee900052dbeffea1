use std::fmt;
use std::ops::Mul;

use num_traits::Zero;
use serde::{Serialize, Serializer};

use crate::linalg::{Int, IntMatrix, Rat};

/// A 2x2 integer matrix. Elements of point groups have determinant ±1; the
/// type itself also carries the auxiliary matrices (`M - I`, basis changes)
/// used by the lattice computations.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mat2(pub [[i64; 2]; 2]);

pub type Vec2 = [Rat; 2];

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2([[1, 0], [0, 1]]);
    pub const NEG_IDENTITY: Mat2 = Mat2([[-1, 0], [0, -1]]);

    pub const fn new(a: i64, b: i64, c: i64, d: i64) -> Mat2 {
        Mat2([[a, b], [c, d]])
    }

    pub fn det(&self) -> i64 {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }

    pub fn trace(&self) -> i64 {
        self.0[0][0] + self.0[1][1]
    }

    pub fn is_unimodular(&self) -> bool {
        self.det().abs() == 1
    }

    /// Inverse of a unimodular matrix.
    pub fn inverse(&self) -> Mat2 {
        let d = self.det();
        assert!(d.abs() == 1, "inverse of a non-unimodular matrix {self:?}");
        let [[a, b], [c, e]] = self.0;
        Mat2([[e * d, -b * d], [-c * d, a * d]])
    }

    pub fn neg(&self) -> Mat2 {
        let [[a, b], [c, d]] = self.0;
        Mat2([[-a, -b], [-c, -d]])
    }

    pub fn sub_identity(&self) -> Mat2 {
        let [[a, b], [c, d]] = self.0;
        Mat2([[a - 1, b], [c, d - 1]])
    }

    pub fn add_identity(&self) -> Mat2 {
        let [[a, b], [c, d]] = self.0;
        Mat2([[a + 1, b], [c, d + 1]])
    }

    pub fn pow(&self, n: u32) -> Mat2 {
        (0..n).fold(Mat2::IDENTITY, |acc, _| acc * *self)
    }

    /// `self * other * self^-1`
    pub fn conjugate(&self, other: &Mat2) -> Mat2 {
        *self * *other * self.inverse()
    }

    pub fn apply(&self, v: &Vec2) -> Vec2 {
        let m = &self.0;
        [
            Rat::from_integer(Int::from(m[0][0])) * &v[0] + Rat::from_integer(Int::from(m[0][1])) * &v[1],
            Rat::from_integer(Int::from(m[1][0])) * &v[0] + Rat::from_integer(Int::from(m[1][1])) * &v[1],
        ]
    }

    pub fn apply_int(&self, v: [i64; 2]) -> [i64; 2] {
        let m = &self.0;
        [m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]]
    }

    pub fn column(&self, j: usize) -> [i64; 2] {
        [self.0[0][j], self.0[1][j]]
    }

    pub fn from_columns(c0: [i64; 2], c1: [i64; 2]) -> Mat2 {
        Mat2([[c0[0], c1[0]], [c0[1], c1[1]]])
    }

    pub fn to_int_matrix(&self) -> IntMatrix {
        IntMatrix::from_rows(&self.0)
    }

    /// Order of the matrix in GL(2, Z), if it is at most 12.
    pub fn order(&self) -> Option<u32> {
        let mut p = *self;
        for k in 1..=12 {
            if p == Mat2::IDENTITY {
                return Some(k);
            }
            p = p * *self;
        }
        None
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, rhs: Mat2) -> Mat2 {
        let (a, b) = (self.0, rhs.0);
        Mat2([
            [
                a[0][0] * b[0][0] + a[0][1] * b[1][0],
                a[0][0] * b[0][1] + a[0][1] * b[1][1],
            ],
            [
                a[1][0] * b[0][0] + a[1][1] * b[1][0],
                a[1][0] * b[0][1] + a[1][1] * b[1][1],
            ],
        ])
    }
}

impl fmt::Debug for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [[a, b], [c, d]] = self.0;
        write!(f, "[[{a},{b}],[{c},{d}]]")
    }
}

impl Serialize for Mat2 {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

pub fn zero_vec() -> Vec2 {
    [Rat::zero(), Rat::zero()]
}

pub fn vec_add(a: &Vec2, b: &Vec2) -> Vec2 {
    [&a[0] + &b[0], &a[1] + &b[1]]
}

pub fn vec_sub(a: &Vec2, b: &Vec2) -> Vec2 {
    [&a[0] - &b[0], &a[1] - &b[1]]
}

pub fn vec_neg(a: &Vec2) -> Vec2 {
    [-a[0].clone(), -a[1].clone()]
}

pub fn vec_is_zero(a: &Vec2) -> bool {
    a[0].is_zero() && a[1].is_zero()
}

pub fn vec_from_ints(x: i64, y: i64) -> Vec2 {
    [Rat::from_integer(Int::from(x)), Rat::from_integer(Int::from(y))]
}

pub fn vec_is_integral(a: &Vec2) -> bool {
    a[0].is_integer() && a[1].is_integer()
}

pub fn fmt_vec(v: &Vec2) -> String {
    format!("({}, {})", v[0], v[1])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_and_order() {
        let a = Mat2::new(0, 1, -1, 0);
        assert_eq!(a * a.inverse(), Mat2::IDENTITY);
        assert_eq!(a.order(), Some(4));
        assert_eq!(Mat2::new(0, -1, 1, 1).order(), Some(6));
        assert_eq!(Mat2::new(1, 1, 0, 1).order(), None);
        let r = Mat2::new(0, 1, 1, 0);
        assert_eq!(r.inverse(), r);
    }
}
