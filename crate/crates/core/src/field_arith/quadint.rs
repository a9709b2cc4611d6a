use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::Field;
use crate::{Error, Result};

/// An element `x + y*w` of `O_K`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuadInt {
    x: BigInt,
    y: BigInt,
    field: Field,
}

impl QuadInt {
    pub fn new(field: Field, x: impl Into<BigInt>, y: impl Into<BigInt>) -> QuadInt {
        QuadInt {
            x: x.into(),
            y: y.into(),
            field,
        }
    }

    pub fn from_int(field: Field, n: impl Into<BigInt>) -> QuadInt {
        QuadInt::new(field, n, 0)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn x(&self) -> &BigInt {
        &self.x
    }

    pub fn y(&self) -> &BigInt {
        &self.y
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.x.is_one() && self.y.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.y.is_zero()
    }

    pub fn is_unit(&self) -> bool {
        self.norm().is_one()
    }

    pub fn norm(&self) -> BigInt {
        let (t, n) = (self.field.t(), self.field.n());
        &self.x * &self.x + &self.x * &self.y * t + &self.y * &self.y * n
    }

    pub fn trace(&self) -> BigInt {
        &self.x * 2 + &self.y * self.field.t()
    }

    pub fn conj(&self) -> QuadInt {
        QuadInt::new(self.field, &self.x + &self.y * self.field.t(), -&self.y)
    }

    pub fn scale(&self, k: &BigInt) -> QuadInt {
        QuadInt::new(self.field, &self.x * k, &self.y * k)
    }

    pub fn scale_i(&self, k: i64) -> QuadInt {
        QuadInt::new(self.field, &self.x * k, &self.y * k)
    }

    /// gcd of the two coordinates, i.e. the largest rational integer dividing `self`.
    pub fn content(&self) -> BigInt {
        self.x.gcd(&self.y)
    }

    /// Divide both coordinates by a rational integer, if exact.
    pub fn div_int(&self, k: &BigInt) -> Option<QuadInt> {
        if k.is_zero() {
            return None;
        }
        let (qx, rx) = self.x.div_rem(k);
        let (qy, ry) = self.y.div_rem(k);
        if rx.is_zero() && ry.is_zero() {
            Some(QuadInt::new(self.field, qx, qy))
        } else {
            None
        }
    }

    pub fn div_exact(&self, other: &QuadInt) -> Result<QuadInt> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        self.div_exact_opt(other)
            .ok_or_else(|| Error::NotDivisible(self.to_string(), other.to_string()))
    }

    pub fn div_exact_opt(&self, other: &QuadInt) -> Option<QuadInt> {
        if other.is_zero() {
            return None;
        }
        if other.is_rational() {
            return self.div_int(&other.x);
        }
        (self * &other.conj()).div_int(&other.norm())
    }

    /// `self | other`.
    pub fn divides(&self, other: &QuadInt) -> bool {
        if self.is_zero() {
            return other.is_zero();
        }
        other.div_exact_opt(self).is_some()
    }

    pub fn is_associate(&self, other: &QuadInt) -> bool {
        self.field.units().iter().any(|u| &(u * self) == other)
    }

    pub fn pow(&self, mut e: u32) -> QuadInt {
        let mut base = self.clone();
        let mut acc = self.field.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn square(&self) -> QuadInt {
        self * self
    }

    /// The associate with lexicographically largest `(x, y)`.
    pub fn canonical(&self) -> QuadInt {
        self.field
            .units()
            .iter()
            .map(|u| u * self)
            .max_by(|a, b| (&a.x, &a.y).cmp(&(&b.x, &b.y)))
            .unwrap()
    }

    /// The unit `u` with `u * self = self.canonical()`.
    pub fn canonical_unit(&self) -> QuadInt {
        self.field
            .units()
            .iter()
            .max_by(|a, b| {
                let pa = *a * self;
                let pb = *b * self;
                (&pa.x, &pa.y).cmp(&(&pb.x, &pb.y))
            })
            .unwrap()
            .clone()
    }

    /// Square root in `O_K`, if one exists.
    pub fn sqrt_exact(&self) -> Option<QuadInt> {
        if self.is_zero() {
            return Some(self.clone());
        }
        let nrm = self.norm();
        let s = nrm.sqrt();
        if &s * &s != nrm {
            return None;
        }
        // r^2 = q gives tr(r)^2 = tr(q) + 2 N(r).
        let tsq: BigInt = self.trace() + &s * 2;
        if tsq.is_negative() {
            return None;
        }
        let tr = tsq.sqrt();
        if &tr * &tr != tsq {
            return None;
        }
        let cand = if tr.is_zero() {
            // r is a rational multiple of sqrt(-d) and q = -N(r).
            let d = BigInt::from(self.field.d());
            let (k2, rem) = s.div_rem(&d);
            if !rem.is_zero() {
                return None;
            }
            let k = k2.sqrt();
            if &k * &k != k2 {
                return None;
            }
            self.field.sqrt_neg_d().scale(&k)
        } else {
            (self + &QuadInt::from_int(self.field, s)).div_int(&tr)?
        };
        (&cand * &cand == *self).then_some(cand)
    }

    /// Cube root in `O_K`, if one exists.
    pub fn cbrt_exact(&self) -> Option<QuadInt> {
        if self.is_zero() {
            return Some(self.clone());
        }
        let (re, im) = self.to_complex();
        let r = (re * re + im * im).sqrt().cbrt();
        let th = im.atan2(re) / 3.0;
        for k in 0..3 {
            let a = th + k as f64 * 2.0 * std::f64::consts::PI / 3.0;
            for c in QuadInt::nearest(self.field, r * a.cos(), r * a.sin()) {
                if &c.square() * &c == *self {
                    return Some(c);
                }
            }
        }
        None
    }

    pub fn to_complex(&self) -> (f64, f64) {
        let (wr, wi) = self.field.w_complex();
        let x = self.x.to_f64().unwrap_or(f64::NAN);
        let y = self.y.to_f64().unwrap_or(f64::NAN);
        (x + y * wr, y * wi)
    }

    /// Lattice points near a complex number.
    pub fn nearest(field: Field, re: f64, im: f64) -> Vec<QuadInt> {
        let (wr, wi) = field.w_complex();
        let y = im / wi;
        let x = re - y * wr;
        let (x0, y0) = (x.floor(), y.floor());
        let mut out = Vec::with_capacity(9);
        for dx in -1..=2 {
            for dy in -1..=2 {
                let (cx, cy) = (x0 + dx as f64, y0 + dy as f64);
                if cx.abs() < 9.0e15 && cy.abs() < 9.0e15 {
                    out.push(QuadInt::new(field, cx as i64, cy as i64));
                }
            }
        }
        out
    }

    /// Parse `"x+y*w"`, `"3"`, `"w"`, `"-1-4*w"` and the like.
    pub fn parse(field: Field, s: &str) -> Result<QuadInt> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(Error::Parse("empty element".into()));
        }
        let mut x = BigInt::zero();
        let mut y = BigInt::zero();
        let mut terms = Vec::new();
        let mut start = 0;
        for (i, c) in s.char_indices() {
            if (c == '+' || c == '-') && i > 0 {
                terms.push(&s[start..i]);
                start = i;
            }
        }
        terms.push(&s[start..]);
        for term in terms {
            let (neg, body) = match term.strip_prefix('-') {
                Some(rest) => (true, rest),
                None => (false, term.strip_prefix('+').unwrap_or(term)),
            };
            let (coef, is_w) = if let Some(c) = body.strip_suffix("*w") {
                (c, true)
            } else if let Some(c) = body.strip_suffix('w') {
                (c, true)
            } else {
                (body, false)
            };
            let mut v = if coef.is_empty() && is_w {
                BigInt::one()
            } else {
                BigInt::from_str(coef).map_err(|_| Error::Parse(format!("bad term {term:?}")))?
            };
            if neg {
                v = -v;
            }
            if is_w {
                y += v;
            } else {
                x += v;
            }
        }
        Ok(QuadInt::new(field, x, y))
    }

    pub fn to_i64_pair(&self) -> Option<(i64, i64)> {
        Some((self.x.to_i64()?, self.y.to_i64()?))
    }
}

impl PartialOrd for QuadInt {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Norm first, then coordinates; gives the deterministic order used in outputs.
impl Ord for QuadInt {
    fn cmp(&self, other: &Self) -> Ordering {
        self.norm()
            .cmp(&other.norm())
            .then_with(|| (&other.x, &other.y).cmp(&(&self.x, &self.y)))
    }
}

impl fmt::Display for QuadInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.x.is_zero(), self.y.is_zero()) {
            (_, true) => write!(f, "{}", self.x),
            (true, false) if self.y.is_one() => write!(f, "w"),
            (true, false) if self.y == -BigInt::one() => write!(f, "-w"),
            (true, false) => write!(f, "{}*w", self.y),
            (false, false) => {
                let sign = if self.y.is_negative() { '-' } else { '+' };
                let ay = self.y.abs();
                if ay.is_one() {
                    write!(f, "{}{}w", self.x, sign)
                } else {
                    write!(f, "{}{}{}*w", self.x, sign, ay)
                }
            }
        }
    }
}

impl fmt::Debug for QuadInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

fn mul_coords(field: Field, a: &QuadInt, b: &QuadInt) -> QuadInt {
    debug_assert_eq!(a.field, b.field);
    let yy = &a.y * &b.y;
    let x = &a.x * &b.x - &yy * field.n();
    let mut y = &a.x * &b.y + &a.y * &b.x;
    if field.t() != 0 {
        y += &yy;
    }
    QuadInt::new(field, x, y)
}

macro_rules! binop {
    ($tr:ident, $f:ident, $body:expr) => {
        impl<'a> $tr<&'a QuadInt> for &'a QuadInt {
            type Output = QuadInt;
            fn $f(self, rhs: &'a QuadInt) -> QuadInt {
                $body(self, rhs)
            }
        }
        impl $tr<QuadInt> for QuadInt {
            type Output = QuadInt;
            fn $f(self, rhs: QuadInt) -> QuadInt {
                $body(&self, &rhs)
            }
        }
        impl<'a> $tr<&'a QuadInt> for QuadInt {
            type Output = QuadInt;
            fn $f(self, rhs: &'a QuadInt) -> QuadInt {
                $body(&self, rhs)
            }
        }
        impl<'a> $tr<QuadInt> for &'a QuadInt {
            type Output = QuadInt;
            fn $f(self, rhs: QuadInt) -> QuadInt {
                $body(self, &rhs)
            }
        }
    };
}

binop!(Add, add, |a: &QuadInt, b: &QuadInt| {
    debug_assert_eq!(a.field, b.field);
    QuadInt::new(a.field, &a.x + &b.x, &a.y + &b.y)
});
binop!(Sub, sub, |a: &QuadInt, b: &QuadInt| {
    debug_assert_eq!(a.field, b.field);
    QuadInt::new(a.field, &a.x - &b.x, &a.y - &b.y)
});
binop!(Mul, mul, |a: &QuadInt, b: &QuadInt| mul_coords(a.field, a, b));

impl Mul<i64> for &QuadInt {
    type Output = QuadInt;
    fn mul(self, k: i64) -> QuadInt {
        self.scale_i(k)
    }
}

impl Mul<i64> for QuadInt {
    type Output = QuadInt;
    fn mul(self, k: i64) -> QuadInt {
        self.scale_i(k)
    }
}

impl Add<i64> for &QuadInt {
    type Output = QuadInt;
    fn add(self, k: i64) -> QuadInt {
        QuadInt::new(self.field, &self.x + k, self.y.clone())
    }
}

impl Add<i64> for QuadInt {
    type Output = QuadInt;
    fn add(self, k: i64) -> QuadInt {
        QuadInt::new(self.field, self.x + k, self.y)
    }
}

impl Sub<i64> for &QuadInt {
    type Output = QuadInt;
    fn sub(self, k: i64) -> QuadInt {
        QuadInt::new(self.field, &self.x - k, self.y.clone())
    }
}

impl Sub<i64> for QuadInt {
    type Output = QuadInt;
    fn sub(self, k: i64) -> QuadInt {
        QuadInt::new(self.field, self.x - k, self.y)
    }
}

impl Neg for QuadInt {
    type Output = QuadInt;
    fn neg(self) -> QuadInt {
        QuadInt::new(self.field, -self.x, -self.y)
    }
}

impl Neg for &QuadInt {
    type Output = QuadInt;
    fn neg(self) -> QuadInt {
        QuadInt::new(self.field, -&self.x, -&self.y)
    }
}

impl AddAssign<&QuadInt> for QuadInt {
    fn add_assign(&mut self, rhs: &QuadInt) {
        self.x += &rhs.x;
        self.y += &rhs.y;
    }
}

impl SubAssign<&QuadInt> for QuadInt {
    fn sub_assign(&mut self, rhs: &QuadInt) {
        self.x -= &rhs.x;
        self.y -= &rhs.y;
    }
}

impl MulAssign<&QuadInt> for QuadInt {
    fn mul_assign(&mut self, rhs: &QuadInt) {
        *self = mul_coords(self.field, self, rhs);
    }
}
