//! Dense univariate polynomials with coefficients in ascending degree order.

use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{Float, Num, Zero};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly<T> {
    coeffs: Vec<T>,
}

impl<T: Num + Clone> Poly<T> {
    /// Builds a polynomial from ascending coefficients, trimming trailing zeros.
    pub fn new(coeffs: Vec<T>) -> Self {
        let mut p = Self { coeffs };
        p.trim();
        p
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: T) -> Self {
        Self::new(vec![c])
    }

    /// `c * z^k`
    pub fn monomial(c: T, k: usize) -> Self {
        let mut coeffs = vec![T::zero(); k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    /// Degree, with the zero polynomial reported as `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn eval(&self, z: T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, c| acc * z.clone() + c.clone())
    }

    pub fn derivative(&self) -> Self {
        let mut out = Vec::with_capacity(self.coeffs.len().saturating_sub(1));
        let mut k = T::zero();
        for c in self.coeffs.iter() {
            if !k.is_zero() {
                out.push(c.clone() * k.clone());
            }
            k = k + T::one();
        }
        Self::new(out)
    }

    pub fn map<U: Num + Clone>(&self, f: impl Fn(&T) -> U) -> Poly<U> {
        Poly::new(self.coeffs.iter().map(f).collect())
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }
}

impl<T: Num + Clone + PartialOrd> Poly<T> {
    /// Number of sign changes in the coefficient sequence, zeros skipped.
    pub fn sign_changes(&self) -> usize {
        let mut last: Option<bool> = None;
        let mut changes = 0;
        for c in &self.coeffs {
            if c.is_zero() {
                continue;
            }
            let positive = *c > T::zero();
            if let Some(prev) = last {
                if prev != positive {
                    changes += 1;
                }
            }
            last = Some(positive);
        }
        changes
    }
}

impl<T: Float> Poly<T> {
    /// Horner evaluation with coefficients pre-divided by their largest magnitude.
    ///
    /// Returns `p(z) / max|c_i|`, which has the sign of `p(z)` and stays finite
    /// for large coefficients.
    pub fn eval_scaled(&self, z: T) -> T {
        let scale = self.coeffs.iter().fold(T::zero(), |m, c| m.max(c.abs()));
        if scale.is_zero() {
            return T::zero();
        }
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, &c| acc * z + c / scale)
    }
}

impl<T: Num + Clone> Add for Poly<T> {
    type Output = Poly<T>;

    fn add(self, rhs: Self) -> Self::Output {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).cloned().unwrap_or_else(T::zero);
                let b = rhs.coeffs.get(i).cloned().unwrap_or_else(T::zero);
                a + b
            })
            .collect();
        Poly::new(coeffs)
    }
}

impl<T: Num + Clone> Neg for Poly<T> {
    type Output = Poly<T>;

    fn neg(self) -> Self::Output {
        self.map(|c| T::zero() - c.clone())
    }
}

impl<T: Num + Clone> Sub for Poly<T> {
    type Output = Poly<T>;

    fn sub(self, rhs: Self) -> Self::Output {
        self + (-rhs)
    }
}

impl<T: Num + Clone> Mul for Poly<T> {
    type Output = Poly<T>;

    fn mul(self, rhs: Self) -> Self::Output {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::new(out)
    }
}

impl<T: Num + Clone> Zero for Poly<T> {
    fn zero() -> Self {
        Poly::zero()
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}
