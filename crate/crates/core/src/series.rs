//! Power series in `q` truncated at a fixed order, over an exact coefficient ring.
//!
//! Combining two series of different orders truncates to the smaller one.

use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use thiserror::Error;

use crate::poly::Coeff;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("constant term must be {expected} for this operation")]
    BadConstantTerm { expected: &'static str },
}

/// `sum_{n=0}^{order} c_n q^n`.
#[derive(Clone, PartialEq)]
pub struct TruncatedSeries<C> {
    order: usize,
    coeffs: Vec<C>,
}

impl<C: Coeff> TruncatedSeries<C> {
    /// Missing coefficients are zero; extra ones are dropped.
    pub fn new(order: usize, coeffs: Vec<C>) -> Self {
        let mut coeffs = coeffs;
        coeffs.resize(order + 1, C::zero_value());
        TruncatedSeries { order, coeffs }
    }

    pub fn zero(order: usize) -> Self {
        Self::new(order, Vec::new())
    }

    pub fn one(order: usize) -> Self {
        Self::constant(order, C::one_value())
    }

    pub fn constant(order: usize, c: C) -> Self {
        Self::new(order, alloc::vec![c])
    }

    /// `c q^k`, or zero if `k` exceeds the order.
    pub fn monomial(order: usize, k: usize, c: C) -> Self {
        let mut s = Self::zero(order);
        if k <= order {
            s.coeffs[k] = c;
        }
        s
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> C {
        self.coeffs.get(n).cloned().unwrap_or_else(C::zero_value)
    }

    pub fn set_coeff(&mut self, n: usize, c: C) {
        if n <= self.order {
            self.coeffs[n] = c;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(C::vanishes)
    }

    pub fn truncate(&self, order: usize) -> Self {
        let order = order.min(self.order);
        Self::new(order, self.coeffs[..=order].to_vec())
    }

    pub fn map<D: Coeff>(&self, f: impl Fn(&C) -> D) -> TruncatedSeries<D> {
        TruncatedSeries {
            order: self.order,
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    fn zip(&self, other: &Self, f: impl Fn(&C, &C) -> C) -> Self {
        let order = self.order.min(other.order);
        let coeffs = (0..=order).map(|n| f(&self.coeffs[n], &other.coeffs[n])).collect();
        TruncatedSeries { order, coeffs }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip(other, C::plus)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip(other, C::minus)
    }

    pub fn neg(&self) -> Self {
        self.map(C::negated)
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        self.map(|c| c.scaled(q))
    }

    pub fn scale_by(&self, k: &C) -> Self {
        self.map(|c| c.times(k))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let order = self.order.min(other.order);
        let mut coeffs = alloc::vec![C::zero_value(); order + 1];
        for (i, a) in self.coeffs[..=order].iter().enumerate() {
            if a.vanishes() {
                continue;
            }
            for (j, b) in other.coeffs[..=order - i].iter().enumerate() {
                if !b.vanishes() {
                    coeffs[i + j] = coeffs[i + j].plus(&a.times(b));
                }
            }
        }
        TruncatedSeries { order, coeffs }
    }

    /// `log f` for `f(0) = 1`, from `n g_n = n f_n - sum_{k<n} k g_k f_{n-k}`.
    pub fn log(&self) -> Result<Self, SeriesError> {
        if self.coeffs[0] != C::one_value() {
            return Err(SeriesError::BadConstantTerm { expected: "1" });
        }
        let mut g: Vec<C> = alloc::vec![C::zero_value(); self.order + 1];
        for n in 1..=self.order {
            let mut acc = self.coeffs[n].scaled(&int(n));
            for k in 1..n {
                acc = acc.minus(&g[k].times(&self.coeffs[n - k]).scaled(&int(k)));
            }
            g[n] = acc.scaled(&int(n).recip());
        }
        Ok(TruncatedSeries {
            order: self.order,
            coeffs: g,
        })
    }

    /// `exp g` for `g(0) = 0`, from `n h_n = sum_{k=1}^{n} k g_k h_{n-k}`.
    pub fn exp(&self) -> Result<Self, SeriesError> {
        if !self.coeffs[0].vanishes() {
            return Err(SeriesError::BadConstantTerm { expected: "0" });
        }
        let mut h: Vec<C> = alloc::vec![C::zero_value(); self.order + 1];
        h[0] = C::one_value();
        for n in 1..=self.order {
            let mut acc = C::zero_value();
            for k in 1..=n {
                if !self.coeffs[k].vanishes() {
                    acc = acc.plus(&self.coeffs[k].times(&h[n - k]).scaled(&int(k)));
                }
            }
            h[n] = acc.scaled(&int(n).recip());
        }
        Ok(TruncatedSeries {
            order: self.order,
            coeffs: h,
        })
    }

    /// `f^c = exp(c log f)` for `f(0) = 1` and an exponent in the coefficient ring.
    pub fn pow_scalar(&self, c: &C) -> Result<Self, SeriesError> {
        self.log()?.scale_by(c).exp()
    }

    /// Non-negative integer power by repeated squaring.
    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.order);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Substitute `q -> c q`.
    pub fn rescale_q(&self, c: &BigRational) -> Self {
        let mut p = BigRational::one();
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            coeffs.push(a.scaled(&p));
            p *= c;
        }
        TruncatedSeries {
            order: self.order,
            coeffs,
        }
    }
}

impl TruncatedSeries<BigRational> {
    /// Lift rational coefficients into another ring.
    pub fn lift<D: Coeff>(&self) -> TruncatedSeries<D> {
        self.map(|c| D::from_rational(c.clone()))
    }
}

impl<C: Coeff + fmt::Display> fmt::Display for TruncatedSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (n, c) in self.coeffs.iter().enumerate() {
            if c.vanishes() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match n {
                0 => write!(f, "{}", c)?,
                1 => write!(f, "({})q", c)?,
                _ => write!(f, "({})q^{}", c, n)?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        write!(f, " + O(q^{})", self.order + 1)
    }
}

impl<C: Coeff> fmt::Debug for TruncatedSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TruncatedSeries")
            .field("order", &self.order)
            .field("coeffs", &self.coeffs)
            .finish()
    }
}

fn int(n: usize) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// `prod_{m>=1} (1 - (sign q)^m)^(-m)` up to `q^order`; `sign` is `1` or `-1`.
pub fn macmahon(order: usize, sign: i64) -> TruncatedSeries<BigRational> {
    let s = BigRational::from_integer(BigInt::from(sign));
    let mut acc = TruncatedSeries::one(order);
    for m in 1..=order {
        // 1 / (1 - c q^m) = sum_k c^k q^{km}, applied m times
        let c = pow_int(&s, m);
        let mut geo = TruncatedSeries::zero(order);
        let mut ck = BigRational::one();
        for k in 0..=order / m {
            geo.set_coeff(k * m, ck.clone());
            ck *= &c;
        }
        acc = acc.mul(&geo.pow(m as u32));
    }
    acc
}

fn pow_int(q: &BigRational, e: usize) -> BigRational {
    let mut acc = BigRational::one();
    for _ in 0..e {
        acc *= q;
    }
    acc
}
