//! Affine maps `x ↦ Ax + v` of R⁴ over an exact scalar type.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use thiserror::Error;

use super::poly::{Poly, Var};
use super::rat::Rat;

/// Exact coefficient ring for affine maps. `try_recip` only has to succeed
/// on units that show up as Gauss-Jordan pivots.
pub trait Scalar:
    Clone
    + PartialEq
    + fmt::Debug
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn try_recip(&self) -> Option<Self>;
}

impl Scalar for Rat {
    fn try_recip(&self) -> Option<Self> {
        (!self.is_zero()).then(|| self.recip())
    }
}

impl Scalar for Poly {
    fn try_recip(&self) -> Option<Self> {
        let c = self.as_constant()?;
        (!c.is_zero()).then(|| Poly::constant(c.recip()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AffineError {
    #[error("singular linear part")]
    Singular,
}

pub type Mat4<T> = [[T; 4]; 4];
pub type Vec4<T> = [T; 4];

#[derive(Clone, Debug, PartialEq)]
pub struct AffineMap4<T> {
    pub linear: Mat4<T>,
    pub translation: Vec4<T>,
}

pub type RatAffine = AffineMap4<Rat>;
pub type PolyAffine = AffineMap4<Poly>;

fn mul_opt<T: Scalar>(a: &T, b: &T) -> T {
    if a.is_zero() || b.is_zero() {
        T::zero()
    } else if a.is_one() {
        b.clone()
    } else if b.is_one() {
        a.clone()
    } else {
        a.clone() * b.clone()
    }
}

fn add_opt<T: Scalar>(a: T, b: T) -> T {
    if a.is_zero() {
        b
    } else if b.is_zero() {
        a
    } else {
        a + b
    }
}

impl<T: Scalar> AffineMap4<T> {
    pub fn new(linear: Mat4<T>, translation: Vec4<T>) -> Self {
        AffineMap4 {
            linear,
            translation,
        }
    }

    pub fn identity() -> Self {
        let linear = std::array::from_fn(|i| {
            std::array::from_fn(|j| if i == j { T::one() } else { T::zero() })
        });
        AffineMap4::new(linear, std::array::from_fn(|_| T::zero()))
    }

    pub fn translation(v: Vec4<T>) -> Self {
        let mut out = Self::identity();
        out.translation = v;
        out
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }

    pub fn is_translation(&self) -> bool {
        self.linear == Self::identity().linear
    }

    pub fn apply(&self, x: &Vec4<T>) -> Vec4<T> {
        std::array::from_fn(|i| {
            (0..4).fold(self.translation[i].clone(), |acc, j| {
                add_opt(acc, mul_opt(&self.linear[i][j], &x[j]))
            })
        })
    }

    pub fn apply_linear(&self, x: &Vec4<T>) -> Vec4<T> {
        std::array::from_fn(|i| {
            (0..4).fold(T::zero(), |acc, j| add_opt(acc, mul_opt(&self.linear[i][j], &x[j])))
        })
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        let linear = std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                (0..4).fold(T::zero(), |acc, k| {
                    add_opt(acc, mul_opt(&self.linear[i][k], &other.linear[k][j]))
                })
            })
        });
        AffineMap4::new(linear, self.apply(&other.translation))
    }

    pub fn inverse(&self) -> Result<Self, AffineError> {
        let mut a = self.linear.clone();
        let mut inv = Self::identity().linear;
        for col in 0..4 {
            let pivot = (col..4)
                .find(|&r| a[r][col].try_recip().is_some())
                .ok_or(AffineError::Singular)?;
            a.swap(col, pivot);
            inv.swap(col, pivot);
            let r = a[col][col].try_recip().ok_or(AffineError::Singular)?;
            for j in 0..4 {
                a[col][j] = mul_opt(&a[col][j], &r);
                inv[col][j] = mul_opt(&inv[col][j], &r);
            }
            for row in 0..4 {
                if row == col || a[row][col].is_zero() {
                    continue;
                }
                let factor = a[row][col].clone();
                for j in 0..4 {
                    let da = mul_opt(&factor, &a[col][j]);
                    let di = mul_opt(&factor, &inv[col][j]);
                    a[row][j] = a[row][j].clone() - da;
                    inv[row][j] = inv[row][j].clone() - di;
                }
            }
        }
        if a != Self::identity().linear {
            return Err(AffineError::Singular);
        }
        let lin = AffineMap4::new(inv, std::array::from_fn(|_| T::zero()));
        let t = lin.apply_linear(&self.translation).map(|x| -x);
        Ok(AffineMap4::new(lin.linear, t))
    }

    /// `self^n` for any integer `n`.
    pub fn pow(&self, n: i64) -> Result<Self, AffineError> {
        let base = if n < 0 { self.inverse()? } else { self.clone() };
        let mut acc = Self::identity();
        for _ in 0..n.unsigned_abs() {
            acc = acc.compose(&base);
        }
        Ok(acc)
    }

    pub fn map_entries<U: Scalar>(&self, f: impl Fn(&T) -> U) -> AffineMap4<U> {
        AffineMap4::new(
            std::array::from_fn(|i| std::array::from_fn(|j| f(&self.linear[i][j]))),
            std::array::from_fn(|i| f(&self.translation[i])),
        )
    }
}

impl PolyAffine {
    pub fn from_rat(map: &RatAffine) -> Self {
        map.map_entries(|r| Poly::constant(r.clone()))
    }

    /// Evaluates every entry; `None` if some variable has no value.
    pub fn instantiate(&self, values: &dyn Fn(Var) -> Option<Rat>) -> Option<RatAffine> {
        let mut linear: Mat4<Rat> = RatAffine::identity().linear;
        let mut translation: Vec4<Rat> = std::array::from_fn(|_| Rat::zero());
        for i in 0..4 {
            for j in 0..4 {
                linear[i][j] = self.linear[i][j].eval(values)?;
            }
            translation[i] = self.translation[i].eval(values)?;
        }
        Some(AffineMap4::new(linear, translation))
    }

    /// Partial evaluation, keeping unassigned variables symbolic.
    pub fn substitute(&self, values: &dyn Fn(Var) -> Option<Poly>) -> PolyAffine {
        self.map_entries(|p| p.substitute(values))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rat::{int, rat};

    fn sample() -> RatAffine {
        AffineMap4::new(
            [
                [int(0), int(1), int(0), int(0)],
                [int(1), int(0), int(0), int(0)],
                [rat(1, 2), int(3), int(1), int(0)],
                [int(3), rat(-1, 2), int(0), int(-1)],
            ],
            [int(1), rat(2, 3), int(0), rat(-5, 7)],
        )
    }

    #[test]
    fn identity_and_inverse() {
        let g = sample();
        assert_eq!(RatAffine::identity().compose(&g), g);
        let gi = g.inverse().unwrap();
        assert!(g.compose(&gi).is_identity());
        assert!(gi.compose(&g).is_identity());
    }

    #[test]
    fn translation_inverse() {
        let t = RatAffine::translation([int(1), int(-2), rat(1, 3), int(0)]);
        assert_eq!(
            t.inverse().unwrap(),
            RatAffine::translation([int(-1), int(2), rat(-1, 3), int(0)])
        );
    }

    #[test]
    fn singular_is_rejected() {
        let mut g = sample();
        g.linear[0] = std::array::from_fn(|_| int(0));
        g.linear[1] = g.linear[0].clone();
        assert_eq!(g.inverse(), Err(AffineError::Singular));
        assert_eq!(AffineError::Singular.to_string(), "singular linear part");
    }

    #[test]
    fn symbolic_instantiation_commutes_with_composition() {
        let mut g = PolyAffine::identity();
        g.linear[2][0] = Poly::var(Var::F1);
        g.translation[3] = Poly::var(Var::Gamma1);
        let h = PolyAffine::from_rat(&sample());
        let vals = |v: Var| match v {
            Var::F1 => Some(rat(1, 2)),
            Var::Gamma1 => Some(rat(3, 8)),
            _ => None,
        };
        let symbolic = g.compose(&h).instantiate(&vals).unwrap();
        let direct = g.instantiate(&vals).unwrap().compose(&sample());
        assert_eq!(symbolic, direct);
    }
}
