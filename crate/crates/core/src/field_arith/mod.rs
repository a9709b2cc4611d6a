//! Arithmetic in the rings of integers `O_K` of the nine fields.

mod factor;
mod frac;
mod ideal;
mod primes;
mod quadint;
pub mod rational;
mod residue;

use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::{Error, Result, NINE_FIELDS};

pub use factor::{factor, split_rational_prime, Factorization};
pub use frac::QuadFrac;
pub use ideal::{gcd, gcd_all, ideal_generator};
pub use primes::primes_up_to;
pub use quadint::QuadInt;
pub use residue::{residue_test, ResidueKind, Residues};

/// One of the nine imaginary quadratic fields `Q(sqrt(-d))`, as a cheap handle.
///
/// The integral basis is `(1, w)` with `w = sqrt(-d)` for `d = 1, 2` and
/// `w = (1 + sqrt(-d))/2` otherwise. In both cases `w^2 = t*w - n`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "i64", into = "i64")]
pub struct Field {
    d: u32,
}

impl Field {
    pub fn new(d: i64) -> Result<Field> {
        if d > 0 && NINE_FIELDS.contains(&(d as u32)) {
            Ok(Field { d: d as u32 })
        } else {
            Err(Error::UnknownField(d))
        }
    }

    pub fn all() -> impl Iterator<Item = Field> {
        NINE_FIELDS.iter().map(|&d| Field { d })
    }

    pub fn d(self) -> u32 {
        self.d
    }

    /// Trace of `w`.
    pub fn t(self) -> i64 {
        if self.d % 4 == 3 {
            1
        } else {
            0
        }
    }

    /// Norm of `w`.
    pub fn n(self) -> i64 {
        if self.d % 4 == 3 {
            (1 + self.d as i64) / 4
        } else {
            self.d as i64
        }
    }

    /// Discriminant of the field: `-d` or `-4d`.
    pub fn disc(self) -> i64 {
        if self.d % 4 == 3 {
            -(self.d as i64)
        } else {
            -4 * self.d as i64
        }
    }

    pub fn ctx(self) -> &'static FieldCtx {
        static CTX: OnceLock<Vec<FieldCtx>> = OnceLock::new();
        let all = CTX.get_or_init(|| Field::all().map(FieldCtx::build).collect());
        &all[self.index()]
    }

    /// The unit group, sorted.
    pub fn units(self) -> &'static [QuadInt] {
        static UNITS: OnceLock<Vec<Vec<QuadInt>>> = OnceLock::new();
        let all = UNITS.get_or_init(|| {
            Field::all()
                .map(|f| {
                    let eps = f.unit_generator();
                    let mut units = vec![f.one()];
                    let mut u = eps.clone();
                    while !u.is_one() {
                        units.push(u.clone());
                        u = &u * &eps;
                    }
                    units.sort();
                    units
                })
                .collect()
        });
        &all[self.index()]
    }

    /// The fixed generator of the unit group: `i`, `(1+sqrt(-3))/2`, or `-1`.
    pub fn unit_generator(self) -> QuadInt {
        match self.d {
            1 | 3 => self.w(),
            _ => self.int(-1),
        }
    }

    fn index(self) -> usize {
        NINE_FIELDS.iter().position(|&d| d == self.d).unwrap()
    }

    pub fn zero(self) -> QuadInt {
        QuadInt::from_int(self, 0)
    }

    pub fn one(self) -> QuadInt {
        QuadInt::from_int(self, 1)
    }

    pub fn int(self, n: i64) -> QuadInt {
        QuadInt::from_int(self, n)
    }

    pub fn elt(self, x: i64, y: i64) -> QuadInt {
        QuadInt::new(self, x, y)
    }

    pub fn w(self) -> QuadInt {
        QuadInt::new(self, 0, 1)
    }

    /// `sqrt(-d)` as an element of `O_K`.
    pub fn sqrt_neg_d(self) -> QuadInt {
        if self.d % 4 == 3 {
            QuadInt::new(self, -1, 2)
        } else {
            QuadInt::new(self, 0, 1)
        }
    }

    /// Nonzero elements of norm at most `bound`, in norm order.
    pub fn elements_up_to(self, bound: u64) -> Vec<QuadInt> {
        // N(x + y w) = (x + t y / 2)^2 + (n - t^2 / 4) y^2
        let (t, n) = (self.t() as f64, self.n() as f64);
        let b = bound as f64;
        let ymax = (b / (n - t * t / 4.0)).sqrt().floor() as i64;
        let mut out = Vec::new();
        for y in -ymax..=ymax {
            let rest = b - (n - t * t / 4.0) * (y * y) as f64;
            if rest < 0.0 {
                continue;
            }
            let centre = -t * y as f64 / 2.0;
            let r = rest.sqrt();
            for x in (centre - r).floor() as i64 - 1..=(centre + r).ceil() as i64 + 1 {
                let z = QuadInt::new(self, x, y);
                let nz = z.norm();
                if !z.is_zero() && nz <= BigInt::from(bound) {
                    out.push(z);
                }
            }
        }
        out.sort();
        out
    }

    /// Elements (zero included) whose complex embedding lies within `radius`
    /// of `centre`, with a little slack for rounding.
    pub fn elements_in_disk(self, centre: (f64, f64), radius: f64) -> Vec<QuadInt> {
        let (wr, wi) = self.w_complex();
        let (cr, ci) = centre;
        let r = radius + 1e-9;
        let ylo = ((ci - r) / wi).floor() as i64;
        let yhi = ((ci + r) / wi).ceil() as i64;
        let mut out = Vec::new();
        for y in ylo..=yhi {
            let dy = y as f64 * wi - ci;
            let rest = r * r - dy * dy;
            if rest < 0.0 {
                continue;
            }
            let half = rest.sqrt();
            let base = cr - y as f64 * wr;
            for x in (base - half).floor() as i64..=(base + half).ceil() as i64 {
                let dx = x as f64 + y as f64 * wr - cr;
                if dx * dx + dy * dy <= r * r {
                    out.push(QuadInt::new(self, x, y));
                }
            }
        }
        out
    }

    /// Embedding `w -> C` as `(re, im)`.
    pub fn w_complex(self) -> (f64, f64) {
        let s = (self.d as f64).sqrt();
        if self.d % 4 == 3 {
            (0.5, s / 2.0)
        } else {
            (0.0, s)
        }
    }
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(sqrt(-{}))", self.d)
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(sqrt(-{}))", self.d)
    }
}

impl TryFrom<i64> for Field {
    type Error = Error;
    fn try_from(d: i64) -> Result<Field> {
        Field::new(d)
    }
}

impl From<Field> for i64 {
    fn from(f: Field) -> i64 {
        f.d as i64
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Splitting {
    Split,
    Inert,
    Ramified,
}

/// A generator of a prime ideal together with the rational prime below it.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PrimeElement {
    pub gen: QuadInt,
    pub p: BigInt,
    pub kind: Splitting,
    pub norm: BigInt,
}

impl PrimeElement {
    pub fn field(&self) -> Field {
        self.gen.field()
    }

    /// Ramification index over `p`.
    pub fn e(&self) -> u32 {
        if self.kind == Splitting::Ramified {
            2
        } else {
            1
        }
    }

    /// Size of the residue field.
    pub fn residue_size(&self) -> &BigInt {
        &self.norm
    }

    pub fn is_above(&self, p: u64) -> bool {
        self.p == BigInt::from(p)
    }

    /// Valuation of `z` at this prime; `None` for `z = 0`.
    pub fn valuation(&self, z: &QuadInt) -> Option<u32> {
        if z.is_zero() {
            return None;
        }
        let mut v = 0;
        let mut cur = z.clone();
        while let Some(q) = cur.div_exact_opt(&self.gen) {
            cur = q;
            v += 1;
        }
        Some(v)
    }

    /// Valuation capped at `cap`, which also handles zero.
    pub fn valuation_capped(&self, z: &QuadInt, cap: u32) -> u32 {
        if z.is_zero() {
            return cap;
        }
        let mut v = 0;
        let mut cur = z.clone();
        while v < cap {
            match cur.div_exact_opt(&self.gen) {
                Some(q) => {
                    cur = q;
                    v += 1;
                }
                None => break,
            }
        }
        v
    }
}

impl PartialOrd for PrimeElement {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for PrimeElement {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (&self.norm, &self.gen).cmp(&(&other.norm, &other.gen))
    }
}

impl fmt::Display for PrimeElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.gen)
    }
}

/// Per-field constants: units, behaviour of 2, a fixed unit generator.
#[derive(Debug)]
pub struct FieldCtx {
    pub field: Field,
    pub units: Vec<QuadInt>,
    /// Generator of the unit group.
    pub epsilon: QuadInt,
    /// Ramification degree of 2.
    pub e2: u32,
    pub two_splitting: Splitting,
    pub two_primes: Vec<PrimeElement>,
    pub three_primes: Vec<PrimeElement>,
    /// The prime above `d` (or above 2 when `d = 1, 2`), which ramifies.
    pub ramified: Vec<PrimeElement>,
}

impl FieldCtx {
    fn build(field: Field) -> FieldCtx {
        let epsilon = field.unit_generator();
        let units = field.units().to_vec();
        let two_primes = split_rational_prime(&BigInt::from(2), field);
        let three_primes = split_rational_prime(&BigInt::from(3), field);
        let two_splitting = two_primes[0].kind;
        let e2 = two_primes[0].e();
        let mut ramified: Vec<PrimeElement> = Vec::new();
        for p in rational::primes_below(field.disc().unsigned_abs() + 1) {
            if field.disc() % p as i64 == 0 {
                ramified.extend(split_rational_prime(&BigInt::from(p), field));
            }
        }
        FieldCtx {
            field,
            units,
            epsilon,
            e2,
            two_splitting,
            two_primes,
            three_primes,
            ramified,
        }
    }

    /// Units modulo squares.
    pub fn units_mod_squares(&self) -> Vec<QuadInt> {
        let squares: Vec<QuadInt> = self.units.iter().map(|u| u * u).collect();
        let mut reps: Vec<QuadInt> = Vec::new();
        for u in &self.units {
            let covered = reps
                .iter()
                .any(|r| squares.iter().any(|s| &(r * s) == u));
            if !covered {
                reps.push(u.clone());
            }
        }
        reps
    }
}
