//! Exact polynomials in the model parameters `(ω, μ, ħ)`.
//!
//! Coefficients are Gaussian rationals. Used for Wick symbols and for the
//! coefficient tables of generated evolution operators, which must compare
//! exactly against hand transcriptions.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::{Complex, Complex64};
use num_rational::Rational64;
use num_traits::{One, ToPrimitive, Zero};

use crate::model::SystemParams;

pub type GaussRat = Complex<Rational64>;

pub fn gauss_int(re: i64, im: i64) -> GaussRat {
    Complex::new(Rational64::from_integer(re), Rational64::from_integer(im))
}

pub fn gauss_to_f64(c: &GaussRat) -> Complex64 {
    Complex64::new(
        c.re.to_f64().unwrap_or(f64::NAN),
        c.im.to_f64().unwrap_or(f64::NAN),
    )
}

/// Exponents of `ω^a μ^b ħ^c`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ParamMonomial {
    pub omega: u32,
    pub mu: u32,
    pub hbar: u32,
}

impl ParamMonomial {
    const ONE: Self = ParamMonomial {
        omega: 0,
        mu: 0,
        hbar: 0,
    };

    fn times(self, o: Self) -> Self {
        ParamMonomial {
            omega: self.omega + o.omega,
            mu: self.mu + o.mu,
            hbar: self.hbar + o.hbar,
        }
    }

    fn eval(&self, p: &SystemParams) -> f64 {
        p.omega.powi(self.omega as i32) * p.mu.powi(self.mu as i32) * p.hbar.powi(self.hbar as i32)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ParamPoly {
    terms: BTreeMap<ParamMonomial, GaussRat>,
}

impl ParamPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: GaussRat) -> Self {
        Self::monomial(ParamMonomial::ONE, c)
    }

    pub fn int(n: i64) -> Self {
        Self::constant(gauss_int(n, 0))
    }

    pub fn one() -> Self {
        Self::int(1)
    }

    pub fn i() -> Self {
        Self::constant(gauss_int(0, 1))
    }

    pub fn omega() -> Self {
        Self::monomial(
            ParamMonomial {
                omega: 1,
                mu: 0,
                hbar: 0,
            },
            GaussRat::one(),
        )
    }

    pub fn mu() -> Self {
        Self::monomial(
            ParamMonomial {
                omega: 0,
                mu: 1,
                hbar: 0,
            },
            GaussRat::one(),
        )
    }

    pub fn hbar() -> Self {
        Self::hbar_pow(1)
    }

    pub fn hbar_pow(k: u32) -> Self {
        Self::monomial(
            ParamMonomial {
                omega: 0,
                mu: 0,
                hbar: k,
            },
            GaussRat::one(),
        )
    }

    pub fn monomial(m: ParamMonomial, c: GaussRat) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Self { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ParamMonomial, &GaussRat)> {
        self.terms.iter()
    }

    pub fn scale(&self, c: GaussRat) -> Self {
        let mut out = Self::zero();
        for (m, v) in &self.terms {
            out.push(*m, v * c);
        }
        out
    }

    pub fn scale_int(&self, n: i64) -> Self {
        self.scale(gauss_int(n, 0))
    }

    pub fn scale_ratio(&self, num: i64, den: i64) -> Self {
        self.scale(Complex::new(Rational64::new(num, den), Rational64::zero()))
    }

    /// Complex conjugate of the coefficients; parameters are real.
    pub fn conj(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(m, c)| (*m, c.conj())).collect(),
        }
    }

    pub fn without_hbar(&self) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.hbar == 0)
                .map(|(m, c)| (*m, *c))
                .collect(),
        }
    }

    pub fn eval(&self, p: &SystemParams) -> Complex64 {
        self.terms
            .iter()
            .map(|(m, c)| gauss_to_f64(c) * m.eval(p))
            .sum()
    }

    fn push(&mut self, m: ParamMonomial, c: GaussRat) {
        let e = self.terms.entry(m).or_insert_with(GaussRat::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&m);
        }
    }
}

impl Add for &ParamPoly {
    type Output = ParamPoly;
    fn add(self, rhs: &ParamPoly) -> ParamPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.push(*m, *c);
        }
        out
    }
}

impl Sub for &ParamPoly {
    type Output = ParamPoly;
    fn sub(self, rhs: &ParamPoly) -> ParamPoly {
        self + &(-rhs)
    }
}

impl Neg for &ParamPoly {
    type Output = ParamPoly;
    fn neg(self) -> ParamPoly {
        self.scale_int(-1)
    }
}

impl Mul for &ParamPoly {
    type Output = ParamPoly;
    fn mul(self, rhs: &ParamPoly) -> ParamPoly {
        let mut out = ParamPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.push(ma.times(*mb), ca * cb);
            }
        }
        out
    }
}

impl fmt::Display for ParamPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({} + {}i)", c.re, c.im)?;
            for (name, e) in [("w", m.omega), ("mu", m.mu), ("hbar", m.hbar)] {
                match e {
                    0 => {}
                    1 => write!(f, "*{name}")?,
                    _ => write!(f, "*{name}^{e}")?,
                }
            }
        }
        Ok(())
    }
}
