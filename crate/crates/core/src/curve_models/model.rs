use std::fmt;

use crate::field_arith::{Field, QuadFrac, QuadInt, Residues};
use crate::{Error, Result};

/// `y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6` over `O_K`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct WeierstrassModel {
    pub a1: QuadInt,
    pub a2: QuadInt,
    pub a3: QuadInt,
    pub a4: QuadInt,
    pub a6: QuadInt,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Invariants {
    pub b2: QuadInt,
    pub b4: QuadInt,
    pub b6: QuadInt,
    pub b8: QuadInt,
    pub c4: QuadInt,
    pub c6: QuadInt,
    pub disc: QuadInt,
    pub j: QuadFrac,
}

impl Invariants {
    /// `j` as a (numerator, denominator) pair with rational positive denominator.
    pub fn j_pair(&self) -> (QuadInt, QuadInt) {
        let f = self.j.field();
        (
            self.j.num().clone(),
            QuadInt::from_int(f, self.j.den().clone()),
        )
    }
}

impl WeierstrassModel {
    pub fn new(a: [QuadInt; 5]) -> WeierstrassModel {
        let [a1, a2, a3, a4, a6] = a;
        WeierstrassModel { a1, a2, a3, a4, a6 }
    }

    pub fn from_ints(field: Field, a: [i64; 5]) -> WeierstrassModel {
        WeierstrassModel::new(a.map(|x| field.int(x)))
    }

    pub fn field(&self) -> Field {
        self.a1.field()
    }

    pub fn ainvs(&self) -> [&QuadInt; 5] {
        [&self.a1, &self.a2, &self.a3, &self.a4, &self.a6]
    }

    pub fn b_invariants(&self) -> (QuadInt, QuadInt, QuadInt, QuadInt) {
        let (a1, a2, a3, a4, a6) = (&self.a1, &self.a2, &self.a3, &self.a4, &self.a6);
        let b2 = a1 * a1 + a2 * 4;
        let b4 = a1 * a3 + a4 * 2;
        let b6 = a3 * a3 + a6 * 4;
        let b8 = &(&(a1 * a1) * a6) + &(&(a2 * a6) * 4) - &(&(a1 * a3) * a4)
            + &(a2 * &(a3 * a3))
            - a4 * a4;
        (b2, b4, b6, b8)
    }

    pub fn c_invariants(&self) -> (QuadInt, QuadInt) {
        let (b2, b4, b6, _) = self.b_invariants();
        c_from_b(&b2, &b4, &b6)
    }

    pub fn discriminant(&self) -> QuadInt {
        let (b2, b4, b6, b8) = self.b_invariants();
        disc_from_b(&b2, &b4, &b6, &b8)
    }

    pub fn invariants(&self) -> Result<Invariants> {
        let (b2, b4, b6, b8) = self.b_invariants();
        let (c4, c6) = c_from_b(&b2, &b4, &b6);
        let disc = disc_from_b(&b2, &b4, &b6, &b8);
        if disc.is_zero() {
            return Err(Error::SingularModel);
        }
        let j = QuadFrac::new(&c4.square() * &c4, disc.clone())?;
        Ok(Invariants {
            b2,
            b4,
            b6,
            b8,
            c4,
            c6,
            disc,
            j,
        })
    }

    pub fn is_singular(&self) -> bool {
        self.discriminant().is_zero()
    }

    /// The model `y^2 = x^3 - 27 c4 x - 54 c6`, whose invariants are `(6^4 c4, 6^6 c6)`.
    pub fn from_c4c6(c4: &QuadInt, c6: &QuadInt) -> WeierstrassModel {
        let f = c4.field();
        WeierstrassModel::new([f.zero(), f.zero(), f.zero(), c4 * -27, c6 * -54])
    }

    /// Change of coordinates `x = x' + r`, `y = y' + s x' + t`.
    pub fn rst(&self, r: &QuadInt, s: &QuadInt, t: &QuadInt) -> WeierstrassModel {
        let (a1, a2, a3, a4, a6) = (&self.a1, &self.a2, &self.a3, &self.a4, &self.a6);
        let na1 = a1 + &(s * 2);
        let na2 = &(a2 - &(s * a1)) + &(r * 3) - s * s;
        let na3 = &(a3 + &(r * a1)) + &(t * 2);
        let na4 = &(&(&(a4 - &(s * a3)) + &(&(r * a2) * 2)) - &(&(t + &(r * s)) * a1))
            + &(&(r * r) * 3)
            - &(s * t) * 2;
        let rr = r * r;
        let na6 = &(&(&(&(a6 + &(r * a4)) + &(&rr * a2)) + &(&rr * r)) - &(t * a3)) - &(t * t)
            - &(r * t) * a1;
        WeierstrassModel::new([na1, na2, na3, na4, na6])
    }

    /// Scale by `u^{-1}`: divides `a_i` by `u^i`; fails unless exact.
    pub fn scale_down(&self, u: &QuadInt) -> Option<WeierstrassModel> {
        let u2 = u.square();
        let u3 = &u2 * u;
        let u4 = u2.square();
        let u6 = u3.square();
        Some(WeierstrassModel::new([
            self.a1.div_exact_opt(u)?,
            self.a2.div_exact_opt(&u2)?,
            self.a3.div_exact_opt(&u3)?,
            self.a4.div_exact_opt(&u4)?,
            self.a6.div_exact_opt(&u6)?,
        ]))
    }

    /// Scale by `u`: multiplies `a_i` by `u^i`.
    pub fn scale_up(&self, u: &QuadInt) -> WeierstrassModel {
        let u2 = u.square();
        let u3 = &u2 * u;
        WeierstrassModel::new([
            &self.a1 * u,
            &self.a2 * &u2,
            &self.a3 * &u3,
            &self.a4 * &u2.square(),
            &self.a6 * &u3.square(),
        ])
    }

    /// Reduce `a1, a3` modulo 2 and `a2` modulo 3 by an integral change of
    /// coordinates; a deterministic representative of the isomorphism class
    /// among models with the same discriminant.
    pub fn reduced(&self) -> WeierstrassModel {
        let f = self.field();
        let two = Residues::new(&f.int(2));
        let three = Residues::new(&f.int(3));
        let s = (&two.reduce(&self.a1) - &self.a1).div_exact(&f.int(2)).unwrap();
        let a2s = &(&self.a2 - &(&s * &self.a1)) - &(&s * &s);
        let r = (&three.reduce(&a2s) - &a2s).div_exact(&f.int(3)).unwrap();
        let a3r = &self.a3 + &(&r * &self.a1);
        let t = (&two.reduce(&a3r) - &a3r).div_exact(&f.int(2)).unwrap();
        let out = self.rst(&r, &s, &t);
        debug_assert_eq!(out.discriminant(), self.discriminant());
        out
    }

    /// Short model `[0, b2, 0, 8 b4, 16 b6]`, isomorphic to this one.
    pub fn two_division_model(&self) -> WeierstrassModel {
        let f = self.field();
        let (b2, b4, b6, _) = self.b_invariants();
        WeierstrassModel::new([f.zero(), b2, f.zero(), b4 * 8, b6 * 16])
    }

    /// Quadratic twist by `lambda`.
    pub fn quadratic_twist(&self, lambda: &QuadInt) -> WeierstrassModel {
        let f = self.field();
        let l2 = lambda.square();
        let l3 = &l2 * lambda;
        if self.a1.is_zero() && self.a3.is_zero() {
            WeierstrassModel::new([
                f.zero(),
                &self.a2 * lambda,
                f.zero(),
                &self.a4 * &l2,
                &self.a6 * &l3,
            ])
        } else {
            self.two_division_model().quadratic_twist(lambda)
        }
    }

    /// `y^2 = x^3 + alpha x` over `Q(i)`.
    pub fn quartic_twist(alpha: &QuadInt) -> Result<WeierstrassModel> {
        let f = alpha.field();
        if f.d() != 1 {
            return Err(Error::WrongField(f.d()));
        }
        if alpha.is_zero() {
            return Err(Error::SingularModel);
        }
        Ok(WeierstrassModel::new([f.zero(), f.zero(), f.zero(), alpha.clone(), f.zero()]))
    }

    /// `y^2 = x^3 + 16 alpha` over `Q(sqrt(-3))`.
    pub fn sextic_twist(alpha: &QuadInt) -> Result<WeierstrassModel> {
        let f = alpha.field();
        if f.d() != 3 {
            return Err(Error::WrongField(f.d()));
        }
        if alpha.is_zero() {
            return Err(Error::SingularModel);
        }
        Ok(WeierstrassModel::new([f.zero(), f.zero(), f.zero(), f.zero(), alpha * 16]))
    }

    /// Galois conjugate model.
    pub fn conj(&self) -> WeierstrassModel {
        WeierstrassModel::new(self.ainvs().map(|a| a.conj()))
    }

    pub fn to_string_list(&self) -> String {
        let parts: Vec<String> = self.ainvs().iter().map(|a| a.to_string()).collect();
        format!("[{}]", parts.join(", "))
    }
}

fn c_from_b(b2: &QuadInt, b4: &QuadInt, b6: &QuadInt) -> (QuadInt, QuadInt) {
    let b22 = b2 * b2;
    let c4 = &b22 - &(b4 * 24);
    let c6 = &(&(-&(&b22 * b2)) + &(&(b2 * b4) * 36)) - &(b6 * 216);
    (c4, c6)
}

fn disc_from_b(b2: &QuadInt, b4: &QuadInt, b6: &QuadInt, b8: &QuadInt) -> QuadInt {
    let b22 = b2 * b2;
    &(&(&(-&(&b22 * b8)) - &(&(&(b4 * b4) * b4) * 8)) - &(&(b6 * b6) * 27))
        + &(&(&(b2 * b4) * b6) * 9)
}

impl fmt::Display for WeierstrassModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_string_list())
    }
}

impl fmt::Debug for WeierstrassModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} over {}", self.to_string_list(), self.field())
    }
}

/// The curve `E_{a,b}: y^2 = x(x^2 + a x + b)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AbModel {
    pub a: QuadInt,
    pub b: QuadInt,
}

impl AbModel {
    pub fn new(a: QuadInt, b: QuadInt) -> Result<AbModel> {
        let m = AbModel { a, b };
        if m.disc_factor().is_zero() {
            return Err(Error::SingularModel);
        }
        Ok(m)
    }

    pub fn field(&self) -> Field {
        self.a.field()
    }

    /// `b^2 (a^2 - 4b)`, so that `disc = 16 * disc_factor`.
    pub fn disc_factor(&self) -> QuadInt {
        &self.b.square() * &(&self.a.square() - &(&self.b * 4))
    }

    pub fn to_weierstrass(&self) -> WeierstrassModel {
        let f = self.field();
        WeierstrassModel::new([f.zero(), self.a.clone(), f.zero(), self.b.clone(), f.zero()])
    }

    /// The 2-isogenous curve `E_{-2a, a^2 - 4b}`.
    pub fn two_isogenous(&self) -> AbModel {
        AbModel {
            a: &self.a * -2,
            b: &self.a.square() - &(&self.b * 4),
        }
    }

    pub fn quadratic_twist(&self, lambda: &QuadInt) -> AbModel {
        AbModel {
            a: &self.a * lambda,
            b: &self.b * &lambda.square(),
        }
    }

    /// The isomorphic model `E_{a/u^2, b/u^4}`, when integral.
    pub fn scale_down(&self, u: &QuadInt) -> Option<AbModel> {
        let u2 = u.square();
        Some(AbModel {
            a: self.a.div_exact_opt(&u2)?,
            b: self.b.div_exact_opt(&u2.square())?,
        })
    }

    /// Move the 2-torsion point with `x = x0` (in the short model
    /// `Y^2 = X^3 + b2 X^2 + 8 b4 X + 16 b6`) to the origin.
    pub fn from_two_torsion(e: &WeierstrassModel, x0: &QuadInt) -> Result<AbModel> {
        let (b2, b4, b6, _) = e.b_invariants();
        let cubic = &(&(&(x0.square() * x0) + &(&b2 * &x0.square())) + &(&(&b4 * 8) * x0)) + &(&b6 * 16);
        if !cubic.is_zero() {
            return Err(Error::PreconditionViolated(format!(
                "{x0} is not a root of the 2-division cubic"
            )));
        }
        let a = &(x0 * 3) + &b2;
        let b = &(&(x0.square() * 3) + &(&(&b2 * x0) * 2)) + &(&b4 * 8);
        AbModel::new(a, b)
    }
}
