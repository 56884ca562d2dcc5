//! Forward-mode dual numbers with `N` independent derivative slots.
//!
//! `Dual<T, N>` is itself a [`Scalar`], so duals nest: the Backlund maps
//! evaluate Poisson brackets with `Dual<_, 6>` internally, and their
//! Jacobians are taken by running the whole map over `Dual<Dual<_, 6>, 7>`.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::scalar::Scalar;

#[derive(Clone, PartialEq)]
pub struct Dual<T, const N: usize> {
    pub re: T,
    pub eps: [T; N],
}

impl<T: Scalar, const N: usize> Dual<T, N> {
    pub fn constant(re: T) -> Self {
        Dual {
            re,
            eps: std::array::from_fn(|_| T::zero()),
        }
    }

    /// Independent variable seeded in derivative slot `slot`.
    pub fn variable(re: T, slot: usize) -> Self {
        assert!(
            slot < N,
            "derivative slot {slot} out of range for {N} slots"
        );
        let mut d = Self::constant(re);
        d.eps[slot] = T::one();
        d
    }

    pub fn value(&self) -> &T {
        &self.re
    }

    pub fn derivative(&self, slot: usize) -> &T {
        &self.eps[slot]
    }
}

impl<T: fmt::Debug, const N: usize> fmt::Debug for Dual<T, N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} + {:?}e", self.re, self.eps)
    }
}

impl<T: Scalar, const N: usize> Add for Dual<T, N> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let mut eps = self.eps;
        for (a, b) in eps.iter_mut().zip(rhs.eps) {
            *a = a.clone() + b;
        }
        Dual {
            re: self.re + rhs.re,
            eps,
        }
    }
}

impl<T: Scalar, const N: usize> Sub for Dual<T, N> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        let mut eps = self.eps;
        for (a, b) in eps.iter_mut().zip(rhs.eps) {
            *a = a.clone() - b;
        }
        Dual {
            re: self.re - rhs.re,
            eps,
        }
    }
}

#[allow(clippy::suspicious_arithmetic_impl)]
impl<T: Scalar, const N: usize> Mul for Dual<T, N> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let eps = std::array::from_fn(|k| {
            self.eps[k].clone() * rhs.re.clone() + self.re.clone() * rhs.eps[k].clone()
        });
        Dual {
            re: self.re * rhs.re,
            eps,
        }
    }
}

#[allow(clippy::suspicious_arithmetic_impl)]
impl<T: Scalar, const N: usize> Div for Dual<T, N> {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        let re = self.re.clone() / rhs.re.clone();
        // (a/b)' = (a' - (a/b) b') / b
        let eps = std::array::from_fn(|k| {
            (self.eps[k].clone() - re.clone() * rhs.eps[k].clone()) / rhs.re.clone()
        });
        Dual { re, eps }
    }
}

impl<T: Scalar, const N: usize> Neg for Dual<T, N> {
    type Output = Self;
    fn neg(self) -> Self {
        Dual {
            re: -self.re,
            eps: self.eps.map(|e| -e),
        }
    }
}

impl<T: Scalar, const N: usize> Scalar for Dual<T, N> {
    fn zero() -> Self {
        Self::constant(T::zero())
    }
    fn one() -> Self {
        Self::constant(T::one())
    }
    fn from_i64(n: i64) -> Self {
        Self::constant(T::from_i64(n))
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        Self::constant(T::from_ratio(num, den))
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.eps.iter().all(Scalar::is_zero)
    }
    fn is_negligible(&self, threshold: f64) -> bool {
        self.re.is_negligible(threshold)
    }
}
