use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{Field, QuadInt};
use crate::{Error, Result};

/// An element of `K` written as `num / den` with `den` a positive rational
/// integer and no common rational factor.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuadFrac {
    num: QuadInt,
    den: BigInt,
}

impl QuadFrac {
    pub fn new(num: QuadInt, den: QuadInt) -> Result<QuadFrac> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = den.norm();
        Ok(QuadFrac::from_parts(&num * &den.conj(), n))
    }

    fn from_parts(num: QuadInt, den: BigInt) -> QuadFrac {
        let mut g = num.content().gcd(&den);
        if den.is_negative() {
            g = -g;
        }
        if g.is_zero() || g.is_one() {
            return QuadFrac { num, den };
        }
        QuadFrac {
            num: num.div_int(&g).unwrap(),
            den: den / g,
        }
    }

    pub fn from_int(q: QuadInt) -> QuadFrac {
        QuadFrac {
            num: q,
            den: BigInt::one(),
        }
    }

    pub fn field(&self) -> Field {
        self.num.field()
    }

    pub fn num(&self) -> &QuadInt {
        &self.num
    }

    pub fn den(&self) -> &BigInt {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// The element itself when it lies in `O_K`.
    pub fn to_integral(&self) -> Option<QuadInt> {
        self.num.div_int(&self.den)
    }

    pub fn inv(&self) -> Result<QuadFrac> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        QuadFrac::new(QuadInt::from_int(self.field(), self.den.clone()), self.num.clone())
    }

    pub fn div(&self, other: &QuadFrac) -> Result<QuadFrac> {
        Ok(self * &other.inv()?)
    }
}

impl Add for &QuadFrac {
    type Output = QuadFrac;
    fn add(self, rhs: &QuadFrac) -> QuadFrac {
        let num = self.num.scale(&rhs.den) + rhs.num.scale(&self.den);
        QuadFrac::from_parts(num, &self.den * &rhs.den)
    }
}

impl Sub for &QuadFrac {
    type Output = QuadFrac;
    fn sub(self, rhs: &QuadFrac) -> QuadFrac {
        let num = self.num.scale(&rhs.den) - rhs.num.scale(&self.den);
        QuadFrac::from_parts(num, &self.den * &rhs.den)
    }
}

impl Mul for &QuadFrac {
    type Output = QuadFrac;
    fn mul(self, rhs: &QuadFrac) -> QuadFrac {
        QuadFrac::from_parts(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl Neg for &QuadFrac {
    type Output = QuadFrac;
    fn neg(self) -> QuadFrac {
        QuadFrac {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl fmt::Display for QuadFrac {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/{}", self.num, self.den)
        }
    }
}

impl fmt::Debug for QuadFrac {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}
