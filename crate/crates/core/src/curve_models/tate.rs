use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::WeierstrassModel;
use crate::field_arith::{PrimeElement, QuadInt, Residues};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Reduction {
    Good,
    MultiplicativeSplit,
    MultiplicativeNonsplit,
    Additive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Kodaira {
    I(u32),
    IStar(u32),
    II,
    III,
    IV,
    IIStar,
    IIIStar,
    IVStar,
}

impl fmt::Display for Kodaira {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Kodaira::I(n) => write!(f, "I{n}"),
            Kodaira::IStar(n) => write!(f, "I{n}*"),
            Kodaira::II => write!(f, "II"),
            Kodaira::III => write!(f, "III"),
            Kodaira::IV => write!(f, "IV"),
            Kodaira::IIStar => write!(f, "II*"),
            Kodaira::IIIStar => write!(f, "III*"),
            Kodaira::IVStar => write!(f, "IV*"),
        }
    }
}

impl Serialize for Kodaira {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Local reduction data at one prime.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocalData {
    #[serde(serialize_with = "ser_prime")]
    pub prime: PrimeElement,
    pub reduction: Reduction,
    /// Conductor exponent.
    pub f: u32,
    pub v_min_disc: u32,
    pub kodaira: Kodaira,
}

fn ser_prime<S: serde::Serializer>(p: &PrimeElement, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(&p.gen)
}

/// Arithmetic in the residue field `O_K / (pi)`, with exhaustive root
/// finding when the field has at most 9 elements.
struct ResidueField {
    pi: QuadInt,
    res: Residues,
    size: BigInt,
    elements: Option<Vec<QuadInt>>,
    char_p: u32,
}

impl ResidueField {
    fn new(prime: &PrimeElement) -> ResidueField {
        let res = Residues::new(&prime.gen);
        let size = prime.norm.clone();
        let small = size <= BigInt::from(9);
        let elements = small.then(|| res.iter().collect());
        let char_p = if prime.p <= BigInt::from(3) {
            u32::try_from(&prime.p).unwrap()
        } else {
            0
        };
        ResidueField {
            pi: prime.gen.clone(),
            res,
            size,
            elements,
            char_p,
        }
    }

    fn divides(&self, z: &QuadInt) -> bool {
        self.res.is_zero_mod(z)
    }

    fn reduce(&self, z: &QuadInt) -> QuadInt {
        self.res.reduce(z)
    }

    fn pow(&self, z: &QuadInt, e: &BigInt) -> QuadInt {
        let mut acc = self.pi.field().one();
        let mut base = self.reduce(z);
        let bits = e.bits();
        for i in 0..bits {
            if e.bit(i) {
                acc = self.reduce(&(&acc * &base));
            }
            base = self.reduce(&base.square());
        }
        acc
    }

    /// Inverse of a unit modulo `pi`.
    fn inv(&self, z: &QuadInt) -> QuadInt {
        debug_assert!(!self.divides(z));
        if let Some(els) = &self.elements {
            return els
                .iter()
                .find(|y| self.res.congruent(&(z * *y), &self.pi.field().one()))
                .cloned()
                .expect("unit has an inverse");
        }
        self.pow(z, &(&self.size - 2u32))
    }

    /// Some `y` with `y^k = z` mod `pi`, for a small residue field.
    fn root(&self, z: &QuadInt, k: u32) -> QuadInt {
        let els = self.elements.as_ref().expect("roots only in small residue fields");
        els.iter()
            .find(|y| self.res.congruent(&y.pow(k), z))
            .cloned()
            .unwrap_or_else(|| panic!("no {k}-th root of {z} mod {}", self.pi))
    }

    /// Whether `a X^2 + b X + c` has a root in the residue field.
    fn quad_has_root(&self, a: &QuadInt, b: &QuadInt, c: &QuadInt) -> bool {
        if self.divides(a) {
            return !self.divides(b) || self.divides(c);
        }
        if let Some(els) = &self.elements {
            return els
                .iter()
                .any(|x| self.divides(&(&(&(&(a * x) + b) * x) + c)));
        }
        let disc = &b.square() - &(&(a * c) * 4);
        if self.divides(&disc) {
            return true;
        }
        let half = (&self.size - 1u32) / 2u32;
        self.pow(&disc, &half).is_one()
    }
}

fn val(prime: &PrimeElement, z: &QuadInt) -> u32 {
    prime.valuation(z).unwrap_or(u32::MAX)
}

fn div(z: &QuadInt, m: &QuadInt) -> QuadInt {
    z.div_exact(m).expect("valuation guaranteed by the algorithm")
}

/// Tate's algorithm at `prime`. Returns the local data together with a model
/// that is minimal at `prime`, obtained by an integral change of coordinates
/// followed by scalings by the prime's generator.
pub fn tate_local(e: &WeierstrassModel, prime: &PrimeElement) -> (LocalData, WeierstrassModel) {
    assert!(!e.is_singular(), "Tate's algorithm on a singular model");
    let field = e.field();
    let rf = ResidueField::new(prime);
    let pi = prime.gen.clone();
    let pi2 = pi.square();
    let pi3 = &pi2 * &pi;
    let pi4 = pi2.square();
    let zero = field.zero();
    let half = if rf.char_p == 2 { None } else { Some(rf.inv(&field.int(2))) };
    let p = rf.char_p;

    let mut c = e.clone();
    let mut vd = val(prime, &c.discriminant());
    let done = |c: WeierstrassModel, reduction, f, vd, kodaira| {
        (
            LocalData {
                prime: prime.clone(),
                reduction,
                f,
                v_min_disc: vd,
                kodaira,
            },
            c,
        )
    };

    loop {
        if vd == 0 {
            return done(c, Reduction::Good, 0, 0, Kodaira::I(0));
        }
        let (b2, b4, b6, _) = c.b_invariants();
        let (r, t) = match p {
            2 => {
                if rf.divides(&b2) {
                    let r = rf.root(&c.a4, 2);
                    let t = rf.root(&(&(&(&(&(&r + &c.a2) * &r) + &c.a4) * &r) + &c.a6), 2);
                    (r, t)
                } else {
                    let inv = rf.inv(&c.a1);
                    let r = &inv * &c.a3;
                    let t = &inv * &(&c.a4 + &r.square());
                    (r, t)
                }
            }
            3 => {
                let r = if rf.divides(&b2) {
                    rf.root(&-&b6, 3)
                } else {
                    -&(&rf.inv(&b2) * &b4)
                };
                let t = &(&c.a1 * &r) + &c.a3;
                (r, t)
            }
            _ => {
                let (c4, c6) = c.c_invariants();
                let r = if rf.divides(&c4) {
                    -&(&rf.inv(&field.int(12)) * &b2)
                } else {
                    -&(&rf.inv(&(&c4 * 12)) * &(&c6 + &(&b2 * &c4)))
                };
                let t = -&(half.as_ref().unwrap() * &(&(&c.a1 * &r) + &c.a3));
                (r, t)
            }
        };
        c = c.rst(&rf.reduce(&r), &zero, &rf.reduce(&t));

        let (b2, _, b6, b8) = c.b_invariants();
        if !rf.divides(&b2) {
            let split = rf.quad_has_root(&field.one(), &c.a1, &-&c.a2);
            let red = if split {
                Reduction::MultiplicativeSplit
            } else {
                Reduction::MultiplicativeNonsplit
            };
            return done(c, red, 1, vd, Kodaira::I(vd));
        }
        if val(prime, &c.a6) < 2 {
            return done(c, Reduction::Additive, vd, vd, Kodaira::II);
        }
        if val(prime, &b8) < 3 {
            return done(c, Reduction::Additive, vd - 1, vd, Kodaira::III);
        }
        if val(prime, &b6) < 3 {
            return done(c, Reduction::Additive, vd - 2, vd, Kodaira::IV);
        }

        let (s, t) = match p {
            2 => (rf.root(&c.a2, 2), &pi * &rf.root(&div(&c.a6, &pi2), 2)),
            3 => (c.a1.clone(), c.a3.clone()),
            _ => {
                let h = half.as_ref().unwrap();
                (-&(&c.a1 * h), -&(&c.a3 * h))
            }
        };
        c = c.rst(&zero, &s, &t);

        let b = div(&c.a2, &pi);
        let cc = div(&c.a4, &pi2);
        let d = div(&c.a6, &pi3);
        let w = &(&(&(&(&d.square() * 27) - &(&b.square() * &cc.square()))
            + &(&(&b.square() * &b) * &(&d * 4)))
            - &(&(&(&b * &cc) * &d) * 18))
            + &(&(&cc.square() * &cc) * 4);
        let x = &(&cc * 3) - &b.square();
        let sw = if rf.divides(&w) {
            if rf.divides(&x) {
                3
            } else {
                2
            }
        } else {
            1
        };

        if sw == 1 {
            return done(c, Reduction::Additive, vd - 4, vd, Kodaira::IStar(0));
        }
        if sw == 2 {
            let r = match p {
                2 => rf.root(&cc, 2),
                3 => &cc * &rf.inv(&b),
                _ => &(&(&b * &cc) - &(&d * 9)) * &rf.inv(&(&x * 2)),
            };
            c = c.rst(&(&pi * &rf.reduce(&r)), &zero, &zero);
            let (mut ix, mut iy) = (3u32, 3u32);
            let mut mx = pi2.clone();
            let mut my = pi2.clone();
            loop {
                let a3t = div(&c.a3, &my);
                let a6t = div(&c.a6, &(&mx * &my));
                if !rf.divides(&(&a3t.square() + &(&a6t * 4))) {
                    break;
                }
                let t = match p {
                    2 => &my * &rf.root(&a6t, 2),
                    _ => &my * &rf.reduce(&-&(&a3t * half.as_ref().unwrap())),
                };
                c = c.rst(&zero, &zero, &t);
                my = &my * &pi;
                iy += 1;
                let a2t = div(&c.a2, &pi);
                let a4t = div(&c.a4, &(&pi * &mx));
                let a6t = div(&c.a6, &(&mx * &my));
                if !rf.divides(&(&a4t.square() - &(&(&a6t * &a2t) * 4))) {
                    break;
                }
                let r = match p {
                    2 => &mx * &rf.root(&(&a6t * &rf.inv(&a2t)), 2),
                    _ => &mx * &rf.reduce(&-&(&a4t * &rf.inv(&(&a2t * 2)))),
                };
                c = c.rst(&r, &zero, &zero);
                mx = &mx * &pi;
                ix += 1;
            }
            let m = ix + iy - 5;
            return done(c, Reduction::Additive, vd - m - 4, vd, Kodaira::IStar(m));
        }

        // Triple root.
        let r = match p {
            2 => b.clone(),
            3 => rf.root(&-&d, 3),
            _ => -&(&b * &rf.inv(&field.int(3))),
        };
        c = c.rst(&(&pi * &rf.reduce(&r)), &zero, &zero);
        let a3t = div(&c.a3, &pi2);
        let a6t = div(&c.a6, &pi4);
        if !rf.divides(&(&a3t.square() + &(&a6t * 4))) {
            return done(c, Reduction::Additive, vd - 6, vd, Kodaira::IVStar);
        }
        let t = match p {
            2 => -&(&pi2 * &rf.root(&a6t, 2)),
            _ => &pi2 * &rf.reduce(&-&(&a3t * half.as_ref().unwrap())),
        };
        c = c.rst(&zero, &zero, &t);
        if val(prime, &c.a4) < 4 {
            return done(c, Reduction::Additive, vd - 7, vd, Kodaira::IIIStar);
        }
        if val(prime, &c.a6) < 6 {
            return done(c, Reduction::Additive, vd - 8, vd, Kodaira::IIStar);
        }
        c = c.scale_down(&pi).expect("non-minimal model scales down");
        vd -= 12;
    }
}

impl LocalData {
    pub fn is_good(&self) -> bool {
        self.reduction == Reduction::Good
    }
}
