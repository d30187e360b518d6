//! Formal power series in `ν` with jet coefficients.

use std::fmt;

use super::jet::JetSeries;
use super::multi::Order;
use super::scalar::{Coeff, Scalar};

/// `Σ_{r <= R} ν^r f_r`; every grade beyond `R` is unknown.
#[derive(Clone)]
pub struct NuSeries<C = Scalar> {
    dim: usize,
    grades: Vec<JetSeries<C>>,
}

impl<C: Coeff> NuSeries<C> {
    pub fn zero(dim: usize, nu_order: usize) -> Self {
        Self {
            dim,
            grades: vec![JetSeries::zero(dim); nu_order + 1],
        }
    }

    /// `f` placed at grade 0, with zero higher grades.
    pub fn constant(f: &JetSeries<C>, nu_order: usize) -> Self {
        let mut s = Self::zero(f.dim(), nu_order);
        s.grades[0] = f.clone();
        s
    }

    pub fn from_grades(dim: usize, grades: Vec<JetSeries<C>>) -> Self {
        assert!(!grades.is_empty(), "a ν-series needs at least one grade");
        Self { dim, grades }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nu_order(&self) -> usize {
        self.grades.len() - 1
    }

    pub fn grade(&self, r: usize) -> &JetSeries<C> {
        &self.grades[r]
    }

    pub fn grades(&self) -> &[JetSeries<C>] {
        &self.grades
    }

    pub fn set_grade(&mut self, r: usize, f: JetSeries<C>) {
        self.grades[r] = f;
    }

    /// Smallest jet order across grades.
    pub fn jet_order(&self) -> Order {
        self.grades.iter().map(JetSeries::order).min().expect("non-empty")
    }

    pub fn truncate_nu(&mut self, nu_order: usize) {
        self.grades.truncate(nu_order + 1);
    }

    pub fn is_zero(&self) -> bool {
        self.grades.iter().all(JetSeries::is_zero)
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        Self {
            dim: self.dim,
            grades: self.grades.iter().map(|g| g.scale(s)).collect(),
        }
    }

    fn zip(&self, other: &Self, f: impl Fn(&JetSeries<C>, &JetSeries<C>) -> JetSeries<C>) -> Self {
        let r = self.nu_order().min(other.nu_order());
        Self {
            dim: self.dim,
            grades: (0..=r).map(|i| f(&self.grades[i], &other.grades[i])).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a - b)
    }

    /// Cauchy product in `ν`.
    pub fn mul(&self, other: &Self) -> Self {
        let r = self.nu_order().min(other.nu_order());
        let grades = (0..=r)
            .map(|s| {
                let mut acc = &self.grades[0] * &other.grades[s];
                for i in 1..=s {
                    acc = &acc + &(&self.grades[i] * &other.grades[s - i]);
                }
                acc
            })
            .collect();
        Self { dim: self.dim, grades }
    }
}

impl<C: Coeff> PartialEq for NuSeries<C> {
    /// Grade-wise equality up to the common `ν`-order.
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.grades.iter().zip(&other.grades).all(|(a, b)| a == b)
    }
}

impl<C: Coeff> fmt::Debug for NuSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.grades).finish()
    }
}
