use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::{Field, QuadInt};
use crate::{Error, Result};

/// Hermite normal form `(a, 0), (b, c)` of a rank-2 sublattice of `Z^2`,
/// with `0 <= b < a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Hnf {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
}

impl Hnf {
    /// HNF of the ideal generated by `gens`, i.e. the Z-span of all `g` and `g*w`.
    pub fn of_ideal(gens: &[QuadInt]) -> Option<Hnf> {
        let field = gens.first()?.field();
        let w = field.w();
        let mut vecs = Vec::with_capacity(2 * gens.len());
        for g in gens {
            vecs.push((g.x().clone(), g.y().clone()));
            let gw = g * &w;
            vecs.push((gw.x().clone(), gw.y().clone()));
        }
        Hnf::of_vectors(&vecs)
    }

    fn of_vectors(vecs: &[(BigInt, BigInt)]) -> Option<Hnf> {
        let mut a = BigInt::zero();
        let mut b = BigInt::zero();
        let mut c = BigInt::zero();
        for (p, q) in vecs {
            if q.is_zero() {
                a = a.gcd(p);
                continue;
            }
            if c.is_zero() {
                b = p.clone();
                c = q.clone();
                continue;
            }
            let eg = c.extended_gcd(q);
            let g = eg.gcd;
            let nb = &eg.x * &b + &eg.y * p;
            let x_elim = (q / &g) * &b - (&c / &g) * p;
            a = a.gcd(&x_elim);
            b = nb;
            c = g;
        }
        if c.is_negative() {
            c = -c;
            b = -b;
        }
        if a.is_zero() || c.is_zero() {
            return None;
        }
        b = b.mod_floor(&a);
        Some(Hnf { a, b, c })
    }

    pub fn index(&self) -> BigInt {
        &self.a * &self.c
    }
}

/// Twice the bilinear form attached to the norm form `x^2 + t*x*y + n*y^2`.
fn two_b(field: Field, u: &(BigInt, BigInt), v: &(BigInt, BigInt)) -> BigInt {
    let (t, n) = (field.t(), field.n());
    &u.0 * &v.0 * 2 + (&u.0 * &v.1 + &u.1 * &v.0) * t + &u.1 * &v.1 * (2 * n)
}

fn qform(field: Field, u: &(BigInt, BigInt)) -> BigInt {
    two_b(field, u, u) / 2
}

/// Rounded quotient `num / den` for `den > 0`.
fn round_div(num: &BigInt, den: &BigInt) -> BigInt {
    let twice: BigInt = num * 2 + den;
    twice.div_floor(&(den * 2))
}

/// Gauss-Lagrange reduction of a lattice basis under the norm form; returns
/// a shortest nonzero vector.
fn shortest_vector(field: Field, hnf: &Hnf) -> (BigInt, BigInt) {
    let mut u = (hnf.a.clone(), BigInt::zero());
    let mut v = (hnf.b.clone(), hnf.c.clone());
    let mut qu = qform(field, &u);
    let mut qv = qform(field, &v);
    loop {
        if qv < qu {
            std::mem::swap(&mut u, &mut v);
            std::mem::swap(&mut qu, &mut qv);
        }
        // project v onto u: m = round(B(u,v)/Q(u)) = round(2B / 2Q)
        let m = round_div(&two_b(field, &u, &v), &(&qu * 2));
        if m.is_zero() {
            break;
        }
        v = (&v.0 - &m * &u.0, &v.1 - &m * &u.1);
        qv = qform(field, &v);
        if qv >= qu {
            break;
        }
    }
    if qv < qu {
        v
    } else {
        u
    }
}

/// A generator of the ideal `(gens)`, canonicalized up to units.
pub fn ideal_generator(gens: &[QuadInt]) -> Result<QuadInt> {
    let nonzero: Vec<QuadInt> = gens.iter().filter(|g| !g.is_zero()).cloned().collect();
    let Some(first) = nonzero.first() else {
        return Err(Error::ZeroIdeal);
    };
    let field = first.field();
    if nonzero.len() == 1 {
        return Ok(first.canonical());
    }
    let hnf = Hnf::of_ideal(&nonzero).ok_or(Error::ZeroIdeal)?;
    let (x, y) = shortest_vector(field, &hnf);
    let g = QuadInt::new(field, x, y);
    debug_assert_eq!(g.norm(), hnf.index());
    Ok(g.canonical())
}

/// Ideal gcd, canonicalized. `gcd(0, 0)` is zero.
pub fn gcd(a: &QuadInt, b: &QuadInt) -> QuadInt {
    match (a.is_zero(), b.is_zero()) {
        (true, true) => a.clone(),
        (true, false) => b.canonical(),
        (false, true) => a.canonical(),
        _ => ideal_generator(&[a.clone(), b.clone()]).expect("nonzero ideal"),
    }
}

pub fn gcd_all(xs: &[QuadInt]) -> QuadInt {
    let mut g = xs[0].field().zero();
    for x in xs {
        g = gcd(&g, x);
        if g.is_unit() {
            return g;
        }
    }
    g
}
