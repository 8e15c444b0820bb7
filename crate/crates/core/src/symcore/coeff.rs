//! Exact complex-rational coefficients.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// A complex number with exact rational real and imaginary parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Coeff {
    pub re: BigRational,
    pub im: BigRational,
}

impl Coeff {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Coeff { re, im }
    }

    pub fn zero() -> Self {
        Coeff::new(BigRational::zero(), BigRational::zero())
    }

    pub fn one() -> Self {
        Coeff::from_int(1)
    }

    pub fn i() -> Self {
        Coeff::new(BigRational::zero(), BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Coeff::new(BigRational::from_integer(BigInt::from(n)), BigRational::zero())
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Coeff::new(BigRational::new(BigInt::from(num), BigInt::from(den)), BigRational::zero())
    }

    pub fn real(re: BigRational) -> Self {
        Coeff::new(re, BigRational::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn add(&self, other: &Coeff) -> Coeff {
        Coeff::new(&self.re + &other.re, &self.im + &other.im)
    }

    pub fn sub(&self, other: &Coeff) -> Coeff {
        Coeff::new(&self.re - &other.re, &self.im - &other.im)
    }

    pub fn mul(&self, other: &Coeff) -> Coeff {
        if self.im.is_zero() && other.im.is_zero() {
            return Coeff::real(&self.re * &other.re);
        }
        Coeff::new(&self.re * &other.re - &self.im * &other.im, &self.re * &other.im + &self.im * &other.re)
    }

    pub fn neg(&self) -> Coeff {
        Coeff::new(-&self.re, -&self.im)
    }

    pub fn conj(&self) -> Coeff {
        Coeff::new(self.re.clone(), -&self.im)
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn recip(&self) -> Option<Coeff> {
        if self.is_zero() {
            return None;
        }
        if self.im.is_zero() {
            return Some(Coeff::real(self.re.recip()));
        }
        let norm = &self.re * &self.re + &self.im * &self.im;
        Some(Coeff::new(&self.re / &norm, -(&self.im / &norm)))
    }

    /// Integer power; `None` when raising zero to a negative power.
    pub fn powi(&self, n: i64) -> Option<Coeff> {
        if n < 0 {
            return self.recip()?.powi(-n);
        }
        let mut base = self.clone();
        let mut acc = Coeff::one();
        let mut k = n as u64;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        Some(acc)
    }

    /// Exact principal square root when one exists in the complex rationals
    /// restricted to the real axis (non-negative or negative rationals).
    pub fn exact_sqrt(&self) -> Option<Coeff> {
        if !self.im.is_zero() {
            return None;
        }
        let neg = self.re.is_negative();
        let mag = self.re.abs();
        let num = exact_isqrt(mag.numer())?;
        let den = exact_isqrt(mag.denom())?;
        let root = BigRational::new(num, den);
        if neg {
            Some(Coeff::new(BigRational::zero(), root))
        } else {
            Some(Coeff::real(root))
        }
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(self.re.to_f64().unwrap_or(f64::NAN), self.im.to_f64().unwrap_or(f64::NAN))
    }

    /// Exact conversion of a finite double (binary fractions are exact rationals).
    pub fn from_f64(value: f64) -> Option<Coeff> {
        BigRational::from_float(value).map(Coeff::real)
    }
}

fn exact_isqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    if &r * &r == *n {
        Some(r)
    } else {
        None
    }
}

impl PartialOrd for Coeff {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Coeff {
    fn cmp(&self, other: &Self) -> Ordering {
        self.re.cmp(&other.re).then_with(|| self.im.cmp(&other.im))
    }
}

fn fmt_rational(r: &BigRational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if r.is_integer() {
        write!(f, "{}", r.numer())
    } else {
        write!(f, "{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Coeff {
    /// Parseable rendering: `3`, `-1/2`, `2*i`, `(1/2 - 3*i)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let one = BigRational::one();
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => fmt_rational(&self.re, f),
            (true, false) => {
                if self.im == one {
                    write!(f, "i")
                } else if self.im == -one.clone() {
                    write!(f, "-i")
                } else {
                    fmt_rational(&self.im, f)?;
                    write!(f, "*i")
                }
            }
            (false, false) => {
                write!(f, "(")?;
                fmt_rational(&self.re, f)?;
                let mag = self.im.abs();
                if self.im.is_negative() {
                    write!(f, " - ")?;
                } else {
                    write!(f, " + ")?;
                }
                if mag == one {
                    write!(f, "i)")
                } else {
                    fmt_rational(&mag, f)?;
                    write!(f, "*i)")
                }
            }
        }
    }
}
