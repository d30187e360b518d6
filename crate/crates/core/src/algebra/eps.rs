//! Dual numbers `body + ε·soul` with `ε² = 0`.

use std::ops::{AddAssign, MulAssign, Neg, SubAssign};

use super::scalar::{Coeff, Scalar};

/// A first-order infinitesimal deformation of a value.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct EpsPair<T> {
    pub body: T,
    pub soul: T,
}

/// Dual numbers over the exact ground field.
pub type Dual = EpsPair<Scalar>;

impl<T> EpsPair<T> {
    pub fn new(body: T, soul: T) -> Self {
        Self { body, soul }
    }

    pub fn map<U>(self, mut f: impl FnMut(T) -> U) -> EpsPair<U> {
        EpsPair {
            body: f(self.body),
            soul: f(self.soul),
        }
    }

    pub fn as_ref(&self) -> EpsPair<&T> {
        EpsPair {
            body: &self.body,
            soul: &self.soul,
        }
    }
}

impl<T: Coeff> EpsPair<T> {
    /// A value with zero soul.
    pub fn pure(body: T) -> Self {
        Self {
            body,
            soul: T::zero(),
        }
    }

    /// The infinitesimal unit `ε`.
    pub fn eps() -> Self {
        Self {
            body: T::zero(),
            soul: T::one(),
        }
    }
}

impl<T: Coeff> Neg for EpsPair<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            body: -self.body,
            soul: -self.soul,
        }
    }
}

impl<T: Coeff> AddAssign<&EpsPair<T>> for EpsPair<T> {
    fn add_assign(&mut self, rhs: &EpsPair<T>) {
        self.body += &rhs.body;
        self.soul += &rhs.soul;
    }
}

impl<T: Coeff> SubAssign<&EpsPair<T>> for EpsPair<T> {
    fn sub_assign(&mut self, rhs: &EpsPair<T>) {
        self.body -= &rhs.body;
        self.soul -= &rhs.soul;
    }
}

impl<T: Coeff> MulAssign<&EpsPair<T>> for EpsPair<T> {
    fn mul_assign(&mut self, rhs: &EpsPair<T>) {
        // (a + εb)(c + εd) = ac + ε(ad + bc)
        let mut soul = self.body.mul_ref(&rhs.soul);
        if !rhs.body.is_zero() && !self.soul.is_zero() {
            soul += &self.soul.mul_ref(&rhs.body);
        }
        self.body *= &rhs.body;
        self.soul = soul;
    }
}

impl<T: Coeff> Coeff for EpsPair<T> {
    fn zero() -> Self {
        Self::pure(T::zero())
    }

    fn one() -> Self {
        Self::pure(T::one())
    }

    fn is_zero(&self) -> bool {
        self.body.is_zero() && self.soul.is_zero()
    }

    fn from_scalar(s: Scalar) -> Self {
        Self::pure(T::from_scalar(s))
    }

    fn scale(&self, s: &Scalar) -> Self {
        Self {
            body: self.body.scale(s),
            soul: self.soul.scale(s),
        }
    }

    fn inv(&self) -> Option<Self> {
        // (a + εb)⁻¹ = a⁻¹ − ε b a⁻²
        let ai = self.body.inv()?;
        let soul = -(self.soul.mul_ref(&ai).mul_ref(&ai));
        Some(Self { body: ai, soul })
    }
}
