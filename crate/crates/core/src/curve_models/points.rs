use std::fmt;

use super::WeierstrassModel;
use crate::field_arith::{QuadFrac, QuadInt};
use crate::poly::{roots_in_k, roots_monic};
use crate::Result;

/// A `K`-rational point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Point {
    Infinity,
    Affine(QuadFrac, QuadFrac),
}

fn fr(z: &QuadInt) -> QuadFrac {
    QuadFrac::from_int(z.clone())
}

/// x-coordinates of the points of order 2, from the roots `X = 4x` of
/// `X^3 + b2 X^2 + 8 b4 X + 16 b6`.
pub fn two_torsion_points(e: &WeierstrassModel) -> Vec<QuadFrac> {
    let (b2, b4, b6, _) = e.b_invariants();
    let f = e.field();
    let cubic = [&b6 * 16, &b4 * 8, b2, f.one()];
    roots_monic(&cubic)
        .into_iter()
        .map(|x| QuadFrac::new(x, f.int(4)).unwrap())
        .collect()
}

/// The roots `X` of the integral 2-division cubic itself.
pub fn two_division_roots(e: &WeierstrassModel) -> Vec<QuadInt> {
    let (b2, b4, b6, _) = e.b_invariants();
    roots_monic(&[&b6 * 16, &b4 * 8, b2, e.field().one()])
}

/// `y` with `(x, y)` on the curve, if any.
pub fn lift_x(e: &WeierstrassModel, x: &QuadFrac) -> Option<Point> {
    // y^2 + (a1 x + a3) y - rhs = 0, discriminant (a1 x + a3)^2 + 4 rhs
    let lin = &(&fr(&e.a1) * x) + &fr(&e.a3);
    let rhs = cubic_rhs(e, x);
    let disc = &(&lin * &lin) + &(&rhs * &fr(&e.field().int(4)));
    let s = sqrt_frac(&disc)?;
    let two = fr(&e.field().int(2));
    let y = (&s - &lin).div(&two).ok()?;
    Some(Point::Affine(x.clone(), y))
}

fn cubic_rhs(e: &WeierstrassModel, x: &QuadFrac) -> QuadFrac {
    let x2 = x * x;
    &(&(&(&x2 * x) + &(&fr(&e.a2) * &x2)) + &(&fr(&e.a4) * x)) + &fr(&e.a6)
}

fn sqrt_frac(z: &QuadFrac) -> Option<QuadFrac> {
    let den = QuadInt::from_int(z.field(), z.den().clone());
    let s = (z.num() * &den).sqrt_exact()?;
    QuadFrac::new(s, den).ok()
}

pub fn on_curve(e: &WeierstrassModel, p: &Point) -> bool {
    match p {
        Point::Infinity => true,
        Point::Affine(x, y) => {
            let lhs = &(y * y) + &(&(&(&fr(&e.a1) * x) + &fr(&e.a3)) * y);
            lhs == cubic_rhs(e, x)
        }
    }
}

pub fn neg(e: &WeierstrassModel, p: &Point) -> Point {
    match p {
        Point::Infinity => Point::Infinity,
        Point::Affine(x, y) => {
            let ny = &(&(-y) - &(&fr(&e.a1) * x)) - &fr(&e.a3);
            Point::Affine(x.clone(), ny)
        }
    }
}

pub fn add(e: &WeierstrassModel, p: &Point, q: &Point) -> Result<Point> {
    let (x1, y1, x2, y2) = match (p, q) {
        (Point::Infinity, _) => return Ok(q.clone()),
        (_, Point::Infinity) => return Ok(p.clone()),
        (Point::Affine(x1, y1), Point::Affine(x2, y2)) => (x1, y1, x2, y2),
    };
    let (a1, a2, a3, a4) = (fr(&e.a1), fr(&e.a2), fr(&e.a3), fr(&e.a4));
    let lambda = if x1 == x2 {
        if &neg(e, q) == p {
            return Ok(Point::Infinity);
        }
        let f = e.field();
        let num = &(&(&(&fr(&f.int(3)) * &(x1 * x1)) + &(&(&fr(&f.int(2)) * &a2) * x1)) + &a4)
            - &(&a1 * y1);
        let den = &(&(&fr(&f.int(2)) * y1) + &(&a1 * x1)) + &a3;
        num.div(&den)?
    } else {
        (y2 - y1).div(&(x2 - x1))?
    };
    let x3 = &(&(&(&(&lambda * &lambda) + &(&a1 * &lambda)) - &a2) - x1) - x2;
    let nu = y1 - &(&lambda * x1);
    let y3 = &(&(-&(&(&lambda + &a1) * &x3)) - &nu) - &a3;
    Ok(Point::Affine(x3, y3))
}

/// Order of `p` if it is at most `max`.
pub fn order(e: &WeierstrassModel, p: &Point, max: u32) -> Result<Option<u32>> {
    let mut acc = p.clone();
    for n in 1..=max {
        if acc == Point::Infinity {
            return Ok(Some(n));
        }
        acc = add(e, &acc, p)?;
    }
    Ok(None)
}

/// x-coordinates (in `K`) of points of order 3, from the roots `X = 3x` of
/// `X^4 + b2 X^3 + 9 b4 X^2 + 27 b6 X + 27 b8`, keeping those with `y` in `K`.
pub fn three_torsion_points(e: &WeierstrassModel) -> Vec<Point> {
    let (b2, b4, b6, b8) = e.b_invariants();
    let f = e.field();
    let quartic = [&b8 * 27, &b6 * 27, &b4 * 9, b2, f.one()];
    let mut out = Vec::new();
    for xx in roots_monic(&quartic) {
        let x = QuadFrac::new(xx, f.int(3)).unwrap();
        if let Some(p) = lift_x(e, &x) {
            out.push(neg(e, &p));
            out.push(p);
        }
    }
    out
}

/// The torsion subgroup visible through the 2- and 3-division polynomials,
/// together with any further points of known order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorsionStructure {
    /// Invariant factors, e.g. `[2, 6]` for `Z/2 x Z/6`; empty when trivial.
    pub factors: Vec<u32>,
}

impl TorsionStructure {
    pub fn order(&self) -> u32 {
        self.factors.iter().product()
    }
}

impl fmt::Display for TorsionStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "trivial");
        }
        let parts: Vec<String> = self.factors.iter().map(|n| format!("Z/{n}")).collect();
        write!(f, "{}", parts.join(" x "))
    }
}

/// Combine the 2-part, the 3-part and cyclic parts of coprime order given
/// by `extra_orders` (orders of verified points, each prime to 6).
pub fn torsion_structure(e: &WeierstrassModel, extra_orders: &[u32]) -> TorsionStructure {
    let n2 = two_torsion_points(e).len() as u32;
    let n3 = three_torsion_points(e).len() as u32;
    // Each p-part is Z/p or Z/p x Z/p here.
    let mut big = 1u32;
    let mut small = 1u32;
    match n2 {
        0 => {}
        1 => big *= 2,
        _ => {
            big *= 2;
            small *= 2;
        }
    }
    match n3 {
        0 => {}
        2 => big *= 3,
        _ => {
            big *= 3;
            small *= 3;
        }
    }
    for &m in extra_orders {
        big *= m;
    }
    let factors = [small, big].into_iter().filter(|&n| n > 1).collect();
    TorsionStructure { factors }
}

type Poly = Vec<QuadInt>;

fn poly_mul(a: &[QuadInt], b: &[QuadInt]) -> Poly {
    let f = a[0].field();
    let mut out = vec![f.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = &out[i + j] + &(x * y);
        }
    }
    out
}

fn poly_sub(a: &[QuadInt], b: &[QuadInt]) -> Poly {
    let f = a[0].field();
    (0..a.len().max(b.len()))
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_else(|| f.zero());
            let y = b.get(i).cloned().unwrap_or_else(|| f.zero());
            &x - &y
        })
        .collect()
}

/// The division polynomial `psi_n` in `x` alone, for odd `n` in 3, 5, 7,
/// constant term first.
pub fn odd_division_polynomial(e: &WeierstrassModel, n: u32) -> Option<Vec<QuadInt>> {
    let (b2, b4, b6, b8) = e.b_invariants();
    // psi_2^2 = 4x^3 + b2 x^2 + 2 b4 x + b6
    let psi2sq = vec![b6.clone(), &b4 * 2, b2.clone(), e.field().int(4)];
    let psi3 = vec![b8.clone(), &b6 * 3, &b4 * 3, b2.clone(), e.field().int(3)];
    // psi_4 / psi_2
    let f4 = vec![
        &(&b4 * &b8) - &b6.square(),
        &(&b2 * &b8) - &(&b4 * &b6),
        &b8 * 10,
        &b6 * 10,
        &b4 * 5,
        b2.clone(),
        e.field().int(2),
    ];
    let cube = |p: &[QuadInt]| poly_mul(&poly_mul(p, p), p);
    let b2sq = poly_mul(&psi2sq, &psi2sq);
    // psi_5 = psi_4 psi_2^3 - psi_3^3, psi_7 = psi_5 psi_3^3 - psi_2 psi_4^3
    let psi5 = poly_sub(&poly_mul(&f4, &b2sq), &cube(&psi3));
    match n {
        3 => Some(psi3),
        5 => Some(psi5),
        7 => Some(poly_sub(&poly_mul(&psi5, &cube(&psi3)), &poly_mul(&b2sq, &cube(&f4)))),
        _ => None,
    }
}

/// Points of exact order `ell` (5 or 7), from the roots of `psi_ell` in `K`.
pub fn points_of_order(e: &WeierstrassModel, ell: u32) -> Result<Vec<Point>> {
    let Some(psi) = odd_division_polynomial(e, ell).filter(|_| ell >= 5) else {
        return Err(crate::Error::PreconditionViolated(format!("order {ell}")));
    };
    let mut out = Vec::new();
    for x in roots_in_k(&psi) {
        let Some(p) = lift_x(e, &x) else { continue };
        if order(e, &p, ell)? == Some(ell) {
            out.push(neg(e, &p));
            out.push(p);
        }
    }
    Ok(out)
}

/// [`torsion_structure`] with the 5- and 7-parts found from division
/// polynomials rather than supplied by the caller.
pub fn full_torsion_structure(e: &WeierstrassModel) -> Result<TorsionStructure> {
    let mut extra = Vec::new();
    for ell in [5, 7] {
        if !points_of_order(e, ell)?.is_empty() {
            extra.push(ell);
        }
    }
    Ok(torsion_structure(e, &extra))
}
