//! Truncated integer power series and the partition generating functions
//! for the classical orbit-counting series.
//!
//! `f_bd = prod_{j>=0}(1+t^{2j+1})` counts partitions into distinct odd
//! parts; `f_c = prod_{n>=1}(1+t^n)` counts partitions into distinct parts.
//! The B/D and C counting series are assembled from these exactly as
//! displayed, with no corrections applied.

use crate::{Error, Result};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::fmt::Write as _;

/// Power series truncated at a fixed order `n`: coefficients `c_0..c_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncSeries {
    coeffs: Vec<BigInt>,
}

impl TruncSeries {
    pub fn zero(order: usize) -> Self {
        TruncSeries { coeffs: vec![BigInt::zero(); order + 1] }
    }

    pub fn constant(order: usize, c: i64) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = BigInt::from(c);
        s
    }

    pub fn one(order: usize) -> Self {
        Self::constant(order, 1)
    }

    pub fn from_coeffs(coeffs: Vec<BigInt>) -> Self {
        assert!(!coeffs.is_empty());
        TruncSeries { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coefficient(&self, n: usize) -> Result<BigInt> {
        self.coeffs
            .get(n)
            .cloned()
            .ok_or(Error::CoefficientOutOfRange { index: n, order: self.order() })
    }

    pub fn coefficients(&self) -> &[BigInt] {
        &self.coeffs
    }

    fn check_order(&self, other: &TruncSeries) -> Result<()> {
        if self.order() != other.order() {
            return Err(Error::OrderMismatch(self.order(), other.order()));
        }
        Ok(())
    }

    pub fn add(&self, other: &TruncSeries) -> Result<TruncSeries> {
        self.check_order(other)?;
        Ok(TruncSeries {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &TruncSeries) -> Result<TruncSeries> {
        self.check_order(other)?;
        Ok(TruncSeries {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn scale(&self, c: i64) -> TruncSeries {
        let c = BigInt::from(c);
        TruncSeries { coeffs: self.coeffs.iter().map(|a| a * &c).collect() }
    }

    /// Cauchy product truncated at the common order.
    pub fn mul(&self, other: &TruncSeries) -> Result<TruncSeries> {
        self.check_order(other)?;
        let n = self.order();
        let mut out = vec![BigInt::zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().take(n + 1 - i).enumerate() {
                if b.is_zero() {
                    continue;
                }
                out[i + j] += a * b;
            }
        }
        Ok(TruncSeries { coeffs: out })
    }

    pub fn pow(&self, mut e: u32) -> Result<TruncSeries> {
        let mut acc = TruncSeries::one(self.order());
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// Multiplicative inverse; requires constant term +-1 so the result
    /// stays integral.
    pub fn invert(&self) -> Result<TruncSeries> {
        let c0 = &self.coeffs[0];
        if !(c0.is_one() || (-c0).is_one()) {
            return Err(Error::NonUnitConstant);
        }
        let n = self.order();
        let mut inv = vec![BigInt::zero(); n + 1];
        inv[0] = c0.clone(); // 1/c0 = c0 for units +-1
        for k in 1..=n {
            let mut acc = BigInt::zero();
            for j in 1..=k {
                acc += &self.coeffs[j] * &inv[k - j];
            }
            inv[k] = -(&acc * c0);
        }
        Ok(TruncSeries { coeffs: inv })
    }

    /// Even/odd part: coefficients with the other parity zeroed.
    pub fn parity_part(&self, even: bool) -> TruncSeries {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| if (i % 2 == 0) == even { c.clone() } else { BigInt::zero() })
            .collect();
        TruncSeries { coeffs }
    }

    /// CSV rendering with columns `n,value`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,value\n");
        for (n, c) in self.coeffs.iter().enumerate() {
            let _ = writeln!(out, "{n},{c}");
        }
        out
    }
}

/// An arithmetic progression of exponents `start, start+step, ...` bounded
/// by the truncation order.
#[derive(Debug, Clone, Copy)]
pub struct ExponentProgression {
    pub start: usize,
    pub step: usize,
}

/// `prod (1 + t^e)` over all exponents of the given progressions, truncated.
pub fn product_generator(progressions: &[ExponentProgression], order: usize) -> TruncSeries {
    let mut acc = TruncSeries::one(order);
    for prog in progressions {
        assert!(prog.step > 0, "progression step must be positive");
        let mut e = prog.start;
        while e <= order {
            if e == 0 {
                // (1 + t^0) = 2
                acc = acc.scale(2);
            } else {
                let mut factor = TruncSeries::one(order);
                factor.coeffs[e] = BigInt::one();
                acc = acc.mul(&factor).expect("equal orders");
            }
            e += prog.step;
        }
    }
    acc
}

/// Distinct-odd-parts generating function `prod_{j>=0}(1+t^{2j+1})`.
pub fn f_bd(order: usize) -> TruncSeries {
    product_generator(&[ExponentProgression { start: 1, step: 2 }], order)
}

/// Odd part of `f_bd`.
pub fn f_b(order: usize) -> TruncSeries {
    f_bd(order).parity_part(false)
}

/// Even part of `f_bd`.
pub fn f_d(order: usize) -> TruncSeries {
    f_bd(order).parity_part(true)
}

/// Distinct-parts generating function `prod_{n>=1}(1+t^n)`.
pub fn f_c(order: usize) -> TruncSeries {
    product_generator(&[ExponentProgression { start: 1, step: 1 }], order)
}

/// The six displayed counting series.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesFamily {
    BdN0,
    BdN1,
    BdN2,
    CN0,
    CN1,
    CN2,
}

impl SeriesFamily {
    pub fn parse(name: &str) -> Option<Self> {
        match name {
            "BD-n0" | "B/D-n0" => Some(SeriesFamily::BdN0),
            "BD-n1" | "B/D-n1" => Some(SeriesFamily::BdN1),
            "BD-n2" | "B/D-n2" => Some(SeriesFamily::BdN2),
            "C-n0" => Some(SeriesFamily::CN0),
            "C-n1" => Some(SeriesFamily::CN1),
            "C-n2" => Some(SeriesFamily::CN2),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            SeriesFamily::BdN0 => "BD-n0",
            SeriesFamily::BdN1 => "BD-n1",
            SeriesFamily::BdN2 => "BD-n2",
            SeriesFamily::CN0 => "C-n0",
            SeriesFamily::CN1 => "C-n1",
            SeriesFamily::CN2 => "C-n2",
        }
    }
}

/// The displayed generating-function formulas, verbatim.
///
/// B/D: `n0 = f_bd`, `n1 = (1+f_bd)(1+f_d) - 4`,
/// `n2 = f_bd*f_d^3 + 3 f_d^2 + 3 (f_bd+1) f_d + f_bd - 11`.
/// C: `n0 = f_c`, `n1 = f_c^2`, `n2 = f_c^4`.
pub fn paper_series(family: SeriesFamily, order: usize) -> TruncSeries {
    let run = || -> Result<TruncSeries> {
        match family {
            SeriesFamily::BdN0 => Ok(f_bd(order)),
            SeriesFamily::BdN1 => {
                let one = TruncSeries::one(order);
                let a = one.add(&f_bd(order))?;
                let b = one.add(&f_d(order))?;
                a.mul(&b)?.sub(&TruncSeries::constant(order, 4))
            }
            SeriesFamily::BdN2 => {
                let fbd = f_bd(order);
                let fd = f_d(order);
                let one = TruncSeries::one(order);
                let t1 = fbd.mul(&fd.pow(3)?)?;
                let t2 = fd.pow(2)?.scale(3);
                let t3 = fbd.add(&one)?.mul(&fd)?.scale(3);
                t1.add(&t2)?.add(&t3)?.add(&fbd)?.sub(&TruncSeries::constant(order, 11))
            }
            SeriesFamily::CN0 => Ok(f_c(order)),
            SeriesFamily::CN1 => f_c(order).pow(2),
            SeriesFamily::CN2 => f_c(order).pow(4),
        }
    };
    run().expect("series orders agree by construction")
}

/// Default truncation order for cached series use.
pub const DEFAULT_ORDER: usize = 64;
