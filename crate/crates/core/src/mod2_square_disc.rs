//! Curves whose mod-2 representation has cyclic image of order 3.
//!
//! Every curve with the same 2-torsion module as a fixed `y^2 = x^3 + a x + b`
//! is a specialization of a two-parameter family; over the five fields where
//! such curves can have odd prime conductor we search that family for curves
//! of prime conductor and discriminant the square of a prime.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::curve_models::{global_data, is_isomorphic, tate_local, two_division_roots, WeierstrassModel};
use crate::field_arith::rational::{exact_root, is_prime};
use crate::field_arith::{gcd, primes_up_to, Field, PrimeElement, QuadInt, Residues};
use crate::records::CurveRecord;
use crate::two_torsion::Distinct;
use crate::{Error, Result};

pub const MOD2_SQUARE_DISC: &str = "mod2-square-disc";

/// The fields that admit a cyclic cubic extension unramified outside 2.
pub const CYCLIC_FIELDS: [u32; 5] = [11, 19, 43, 67, 163];

/// A binary form `sum c_i u^(n-i) v^i` over `O_K`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinaryForm {
    pub coeffs: Vec<QuadInt>,
}

impl BinaryForm {
    pub fn new(coeffs: Vec<QuadInt>) -> BinaryForm {
        assert!(!coeffs.is_empty(), "empty binary form");
        BinaryForm { coeffs }
    }

    pub fn from_ints(field: Field, cs: &[i64]) -> BinaryForm {
        BinaryForm::new(cs.iter().map(|&c| field.int(c)).collect())
    }

    pub fn field(&self) -> Field {
        self.coeffs[0].field()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval(&self, u: &QuadInt, v: &QuadInt) -> QuadInt {
        let n = self.degree() as u32;
        let mut out = self.field().zero();
        for (i, c) in self.coeffs.iter().enumerate() {
            let i = i as u32;
            out = &out + &(&(c * &u.pow(n - i)) * &v.pow(i));
        }
        out
    }

    pub fn scale(&self, k: &QuadInt) -> BinaryForm {
        BinaryForm::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn add(&self, other: &BinaryForm) -> BinaryForm {
        assert_eq!(self.degree(), other.degree(), "degree mismatch");
        BinaryForm::new(self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect())
    }

    pub fn mul(&self, other: &BinaryForm) -> BinaryForm {
        let f = self.field();
        let mut out = vec![f.zero(); self.degree() + other.degree() + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        BinaryForm::new(out)
    }

    pub fn pow(&self, e: u32) -> BinaryForm {
        let mut out = BinaryForm::new(vec![self.field().one()]);
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// The form `G(u, v) = F(m00 u + m01 v, m10 u + m11 v)`.
    pub fn substitute(&self, m: [[i64; 2]; 2]) -> BinaryForm {
        let f = self.field();
        let new_u = BinaryForm::from_ints(f, &[m[0][0], m[0][1]]);
        let new_v = BinaryForm::from_ints(f, &[m[1][0], m[1][1]]);
        let n = self.degree() as u32;
        let mut out = BinaryForm::new(vec![f.zero(); self.degree() + 1]);
        for (i, c) in self.coeffs.iter().enumerate() {
            let term = new_u.pow(n - i as u32).mul(&new_v.pow(i as u32)).scale(c);
            out = out.add(&term);
        }
        out
    }

    /// Discriminant of a binary cubic `c0 u^3 + c1 u^2 v + c2 u v^2 + c3 v^3`.
    pub fn cubic_discriminant(&self) -> QuadInt {
        assert_eq!(self.degree(), 3, "not a cubic form");
        let [a, b, c, d] = [&self.coeffs[0], &self.coeffs[1], &self.coeffs[2], &self.coeffs[3]];
        let t1 = &(&(b * b) * &(c * c)) - &(&(a * &c.pow(3)) * 4);
        let t2 = &(&(&b.pow(3) * d) * -4) - &(&(&(a * a) * &(d * d)) * 27);
        let t3 = &(&(&(a * b) * &(c * d)) * 18) + &t2;
        &t1 + &t3
    }
}

/// The family `y^2 = x^3 + A4(u,v) x + A6(u,v)` of curves sharing the 2-torsion
/// module of `y^2 = x^3 + a x + b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RsFamily {
    pub a: QuadInt,
    pub b: QuadInt,
    pub a4: BinaryForm,
    pub a6: BinaryForm,
    /// `v^3 + a v u^2 + b u^3`.
    pub cubic: BinaryForm,
}

impl RsFamily {
    pub fn new(a: QuadInt, b: QuadInt) -> RsFamily {
        let f = a.field();
        let a2 = a.square();
        let a4 = BinaryForm::new(vec![&a2 * -3, &b * 27, &a * 9]);
        let a6 = BinaryForm::new(vec![
            -&(&(&a2 * &a) * 2 + &(&b.square() * 27)),
            &(&a * &b) * -27,
            &a2 * -18,
            &b * 27,
        ]);
        let cubic = BinaryForm::new(vec![b.clone(), a.clone(), f.zero(), f.one()]);
        RsFamily { a, b, a4, a6, cubic }
    }

    /// The family through the short model `y^2 = x^3 - 27 c4 x - 54 c6` of `e`.
    pub fn from_curve(e: &WeierstrassModel) -> RsFamily {
        let (c4, c6) = e.c_invariants();
        RsFamily::new(&c4 * -27, &c6 * -54)
    }

    /// `-(4 a^3 + 27 b^2)`.
    pub fn cubic_discriminant(&self) -> QuadInt {
        -&(&(&self.a.pow(3) * 4) + &(&self.b.square() * 27))
    }
}

/// The member of `fam` at `(u, v)`. Scaling `(u, v)` by `c` twists by `c`.
pub fn rs_specialize(fam: &RsFamily, u: &QuadInt, v: &QuadInt) -> Result<WeierstrassModel> {
    let fv = fam.cubic.eval(u, v);
    if fv.is_zero() {
        return Err(Error::DegenerateParameters(format!("F({u}, {v}) = 0")));
    }
    let f = u.field();
    let e = WeierstrassModel::new([f.zero(), f.zero(), f.zero(), fam.a4.eval(u, v), fam.a6.eval(u, v)]);
    let expected = &(&fam.cubic_discriminant() * &fv.square()) * (16 * 729);
    assert_eq!(e.discriminant(), expected, "discriminant identity");
    Ok(e)
}

/// Per-field data: `A4 = -6P`, `A6 = 2Q` for the family through the base
/// curve, and the cubic cutting out the 2-division field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldPq {
    pub d: u32,
    /// Coefficients of `u^2, uv, v^2`.
    pub p: [i64; 3],
    /// Coefficients of `u^3, u^2 v, u v^2, v^3`.
    pub q: [i64; 4],
    /// The cubic form with `Q^2 - 8 P^3 = 27 d F^2`.
    pub f: [i64; 4],
    /// Monic `x^3 + c2 x^2 + c1 x + c0` as `[1, c2, c1, c0]`, discriminant `-4d`.
    pub ring_class_cubic: [i64; 4],
    pub base_label: &'static str,
    pub base_ainvs: [i64; 5],
    /// Substitution taking the base curve's family onto `(-6P, 2Q)`.
    pub substitution: [[i64; 2]; 2],
    /// `A4 = lambda^2 (-6P)` and `A6 = lambda^3 (2Q)` after substitution.
    pub lambda: i64,
    /// A parameter norm bound at which the search reaches the known example.
    pub example_bound: u64,
}

const FIELD_PQ: [FieldPq; 5] = [
    FieldPq {
        d: 11,
        p: [2, -17, -1],
        q: [586, 102, 12, -17],
        f: [34, 6, 0, 1],
        ring_class_cubic: [1, -1, 1, 1],
        base_label: "11.a3",
        base_ainvs: [0, -1, 1, 0, 0],
        substitution: [[1, 1], [60, 6]],
        lambda: 324,
        example_bound: 60,
    },
    FieldPq {
        d: 19,
        p: [2, 9, 3],
        q: [46, 54, 36, 27],
        f: [2, 2, 0, -1],
        ring_class_cubic: [1, 0, -2, -2],
        base_label: "19.a3",
        base_ainvs: [0, 1, 1, 1, 0],
        substitution: [[1, 1], [12, -6]],
        lambda: -324,
        example_bound: 100,
    },
    FieldPq {
        d: 43,
        p: [8, -35, 2],
        q: [-2386, 420, -48, 35],
        f: [70, -12, 0, 1],
        ring_class_cubic: [1, -1, -1, 3],
        base_label: "43.a1",
        base_ainvs: [0, 1, 1, 0, 0],
        substitution: [[1, 0], [0, 6]],
        lambda: 108,
        example_bound: 60,
    },
    FieldPq {
        d: 67,
        p: [50, -53, 5],
        q: [-4618, 1590, -300, 53],
        f: [106, -30, 0, 1],
        ring_class_cubic: [1, -1, -3, 5],
        base_label: "67.a1",
        base_ainvs: [0, 1, 1, -12, -21],
        substitution: [[-7, -1], [492, 78]],
        lambda: -324,
        example_bound: 450,
    },
    FieldPq {
        d: 163,
        p: [32, 45, 12],
        q: [838, 1080, 576, 135],
        f: [10, 8, 0, -1],
        ring_class_cubic: [1, 0, -8, 10],
        base_label: "163.a1",
        base_ainvs: [0, 0, 1, -2, 1],
        substitution: [[1, 0], [0, -18]],
        lambda: -324,
        example_bound: 450,
    },
];

/// The data for `Q(sqrt(-d))`; other fields have no cyclic cubic extension
/// unramified outside 2.
pub fn field_pq(d: u32) -> Result<&'static FieldPq> {
    FIELD_PQ.iter().find(|x| x.d == d).ok_or(Error::WrongField(d))
}

impl FieldPq {
    pub fn field(&self) -> Field {
        Field::new(self.d as i64).expect("one of the nine fields")
    }

    pub fn p_form(&self) -> BinaryForm {
        BinaryForm::from_ints(self.field(), &self.p)
    }

    pub fn q_form(&self) -> BinaryForm {
        BinaryForm::from_ints(self.field(), &self.q)
    }

    pub fn f_form(&self) -> BinaryForm {
        BinaryForm::from_ints(self.field(), &self.f)
    }

    pub fn base_curve(&self) -> WeierstrassModel {
        WeierstrassModel::from_ints(self.field(), self.base_ainvs)
    }

    /// `y^2 = x^3 - 6 P(u,v) x + 2 Q(u,v)`, with discriminant
    /// `-2^6 3^6 d F(u,v)^2`.
    pub fn model(&self, u: &QuadInt, v: &QuadInt) -> Result<WeierstrassModel> {
        let k = self.field();
        if self.f_form().eval(u, v).is_zero() {
            return Err(Error::DegenerateParameters(format!("F({u}, {v}) = 0")));
        }
        let a4 = &self.p_form().eval(u, v) * -6;
        let a6 = &self.q_form().eval(u, v) * 2;
        Ok(WeierstrassModel::new([k.zero(), k.zero(), k.zero(), a4, a6]))
    }
}

/// Curves found by other means, for cross-checking the search.
#[derive(Clone, Copy, Debug)]
pub struct KnownExample {
    pub d: u32,
    /// Coordinates of the a-invariants in the basis `(1, w)`.
    pub ainvs: [[i64; 2]; 5],
    pub conductor_gen: [i64; 2],
    pub conductor_norm: u64,
    pub label: Option<&'static str>,
}

pub const KNOWN_EXAMPLES: [KnownExample; 5] = [
    KnownExample {
        d: 11,
        ainvs: [[0, 0], [0, 1], [1, 0], [-1, 0], [0, 0]],
        conductor_gen: [7, -2],
        conductor_norm: 47,
        label: Some("2.0.11.1-47.1-a1"),
    },
    KnownExample {
        d: 19,
        ainvs: [[0, 0], [-1, -1], [1, 0], [0, 2], [-1, -1]],
        conductor_gen: [-7, 18],
        conductor_norm: 1543,
        label: None,
    },
    KnownExample {
        d: 43,
        ainvs: [[0, 0], [-1, 1], [1, 0], [-2, -1], [2, 0]],
        conductor_gen: [29, -2],
        conductor_norm: 827,
        label: None,
    },
    KnownExample {
        d: 67,
        ainvs: [[0, 0], [1, 1], [1, 0], [0, 2], [-1, 1]],
        conductor_gen: [-65, 6],
        conductor_norm: 4447,
        label: None,
    },
    KnownExample {
        d: 163,
        ainvs: [[0, 0], [1, 1], [1, 0], [-18, 1], [-4, -3]],
        conductor_gen: [47, 6],
        conductor_norm: 3967,
        label: None,
    },
];

/// Rational curves of conductor `d` whose base changes lie in the family,
/// with their labels. The 3- and 5-isogenous curves share the 2-torsion module.
pub const RATIONAL_SEEDS: [(u32, &str, [i64; 5]); 9] = [
    (11, "11.a1", [0, -1, 1, -7820, -263580]),
    (11, "11.a2", [0, -1, 1, -10, -20]),
    (11, "11.a3", [0, -1, 1, 0, 0]),
    (19, "19.a1", [0, 1, 1, -769, -8470]),
    (19, "19.a2", [0, 1, 1, -9, -15]),
    (19, "19.a3", [0, 1, 1, 1, 0]),
    (43, "43.a1", [0, 1, 1, 0, 0]),
    (67, "67.a1", [0, 1, 1, -12, -21]),
    (163, "163.a1", [0, 0, 1, -2, 1]),
];

/// Label of a known curve isomorphic to `e`, if any.
pub fn known_label(e: &WeierstrassModel) -> Option<String> {
    let k = e.field();
    let examples = KNOWN_EXAMPLES
        .iter()
        .filter(|x| x.d == k.d())
        .filter_map(|x| x.label.map(|l| (l, x.model())));
    let seeds = RATIONAL_SEEDS
        .iter()
        .filter(|x| x.0 == k.d())
        .map(|x| (x.1, WeierstrassModel::from_ints(k, x.2)));
    examples
        .chain(seeds)
        .find(|(_, m)| is_isomorphic(m, e).unwrap_or(false))
        .map(|(l, _)| l.to_string())
}

impl KnownExample {
    pub fn field(&self) -> Field {
        Field::new(self.d as i64).expect("one of the nine fields")
    }

    pub fn model(&self) -> WeierstrassModel {
        let k = self.field();
        let a = self.ainvs.map(|[x, y]| k.elt(x, y));
        WeierstrassModel::new(a)
    }

    pub fn conductor_gen(&self) -> QuadInt {
        self.field().elt(self.conductor_gen[0], self.conductor_gen[1])
    }
}

/// Twists that can remove bad reduction above 2, 3 and `d`: signs times
/// products of 2, the primes above 3 and `sqrt(-d)`.
#[cfg(test)]
fn twist_set(k: Field) -> Vec<QuadInt> {
    let mut gens: Vec<QuadInt> = vec![k.int(2), k.sqrt_neg_d()];
    gens.extend(k.ctx().three_primes.iter().map(|p| p.gen.clone()));
    let mut out = vec![k.one()];
    for g in &gens {
        let more: Vec<QuadInt> = out.iter().map(|x| x * g).collect();
        out.extend(more);
    }
    let neg: Vec<QuadInt> = out.iter().map(|x| -x).collect();
    out.extend(neg);
    out
}

/// `N(x)` is divisible only by 2, 3 and `d`.
fn small_part_only(x: &QuadInt, d: u32) -> bool {
    let mut m = x.norm().abs();
    for q in [2u32, 3, d] {
        let q = BigInt::from(q);
        while (&m % &q).is_zero() {
            m /= &q;
        }
    }
    m.is_one()
}

/// Twists from the brute-force set whose conductor exponents above 2, 3 and
/// `d` allow prime conductor: all zero when the discriminant has a prime
/// outside `6d`, otherwise exactly one equal to 1.
///
/// At an odd prime a twist by a unit there is unramified and keeps the
/// exponent, so each prime above 3 and `d` needs two Tate runs; above 2
/// every combination is tried.
fn viable_twists(e: &WeierstrassModel, outside: bool) -> Vec<QuadInt> {
    let k = e.field();
    let ctx = k.ctx();
    let odd: Vec<&PrimeElement> = ctx.three_primes.iter().chain(&ctx.ramified).collect();
    // exponent at p when p does not / does divide the twist
    let odd_f: Vec<[u32; 2]> = odd
        .iter()
        .map(|p| [tate_local(e, p).0.f, tate_local(&e.quadratic_twist(&p.gen), p).0.f])
        .collect();
    let two = &ctx.two_primes[0];
    let mut out = Vec::new();
    for mask in 0..1u32 << odd.len() {
        let mut c = k.one();
        let mut mult = 0;
        let mut ok = true;
        for (i, p) in odd.iter().enumerate() {
            let bit = ((mask >> i) & 1) as usize;
            if bit == 1 {
                c = &c * &p.gen;
            }
            match odd_f[i][bit] {
                0 => {}
                1 => mult += 1,
                _ => ok = false,
            }
        }
        if !ok || mult > 1 || (outside && mult > 0) {
            continue;
        }
        for extra in [k.one(), k.int(-1), k.int(2), k.int(-2)] {
            let c = &c * &extra;
            let f2 = tate_local(&e.quadratic_twist(&c), two).0.f;
            let total = mult + f2;
            let fits = if outside { total == 0 } else { total == 1 && f2 <= 1 };
            if fits {
                out.push(c);
            }
        }
    }
    out
}

/// `|n|` with its factors 2, 3 and `d` removed is 1 or a prime power.
fn prime_power_outside(n: &BigInt, d: u32) -> bool {
    let mut m: BigUint = n.abs().to_biguint().expect("nonnegative");
    if m.is_zero() {
        return false;
    }
    for q in [2u32, 3, d] {
        let q = BigUint::from(q);
        while (&m % &q).is_zero() {
            m /= &q;
        }
    }
    if m.is_one() {
        return true;
    }
    (1..=6).any(|k| {
        exact_root(&BigInt::from(m.clone()), k)
            .and_then(|r| r.to_biguint())
            .is_some_and(|r| is_prime(&r))
    })
}

/// First nonzero coordinate is its own canonical associate.
fn is_normalized(u: &QuadInt, v: &QuadInt) -> bool {
    let lead = if u.is_zero() { v } else { u };
    &lead.canonical() == lead
}

/// Parameter pairs with `N(u), N(v) <= bound`, up to units and with coprime
/// entries, whose value `F(u, v)` is a prime power away from `6d`.
pub fn candidate_parameters(pq: &FieldPq, bound: u64) -> Vec<(QuadInt, QuadInt)> {
    let k = pq.field();
    let mut elts = vec![k.zero()];
    elts.extend(k.elements_up_to(bound));
    let f = pq.f_form();
    let mut out: Vec<(QuadInt, QuadInt)> = elts
        .par_iter()
        .flat_map_iter(|u| {
            let f = &f;
            elts.iter().filter_map(move |v| {
                if (u.is_zero() && v.is_zero()) || !is_normalized(u, v) {
                    return None;
                }
                let fv = f.eval(u, v);
                if fv.is_zero() || !prime_power_outside(&fv.norm(), pq.d) {
                    return None;
                }
                gcd(u, v).is_unit().then(|| (u.clone(), v.clone()))
            })
        })
        .collect();
    out.sort();
    out
}

/// A curve from the search with the parameters and twist that produced it.
#[derive(Clone, Debug)]
pub struct SquareDiscHit {
    pub u: QuadInt,
    pub v: QuadInt,
    pub twist: QuadInt,
    pub record: CurveRecord,
}

/// Curves of prime conductor in the family of `Q(sqrt(-d))`, from parameters
/// with norms at most `bound` and all their twists by divisors of `6d`.
/// Each curve is reported once, with the first parameters found for it.
pub fn search_square_disc_hits(d: u32, bound: u64) -> Result<Vec<SquareDiscHit>> {
    let pq = field_pq(d)?;
    let params = candidate_parameters(pq, bound);
    let found: Vec<Vec<_>> = params
        .par_iter()
        .map(|(u, v)| -> Result<Vec<_>> {
            let base = pq.model(u, v)?;
            let outside = !small_part_only(&pq.f_form().eval(u, v), pq.d);
            let mut hits = Vec::new();
            for c in viable_twists(&base, outside) {
                let g = global_data(&base.quadratic_twist(&c))?;
                let cond = g.conductor();
                if cond.len() == 1 && cond[0].1 == 1 {
                    hits.push((u, v, c, g));
                }
            }
            Ok(hits)
        })
        .collect::<Result<_>>()?;
    let mut distinct = Distinct::default();
    let mut origin = Vec::new();
    for (u, v, c, g) in found.into_iter().flatten() {
        if distinct.insert(g, MOD2_SQUARE_DISC)? {
            origin.push((u.clone(), v.clone(), c));
        }
    }
    let recs = distinct.records_unsorted();
    let mut hits: Vec<SquareDiscHit> = recs
        .into_iter()
        .zip(origin)
        .map(|(mut record, (u, v, twist))| {
            record.label = known_label(&record.model());
            SquareDiscHit { u, v, twist, record }
        })
        .collect();
    hits.sort_by_cached_key(|h| (h.record.conductor_norm().clone(), h.record.model().to_string()));
    Ok(hits)
}

pub fn search_square_disc(d: u32, bound: u64) -> Result<Vec<CurveRecord>> {
    Ok(search_square_disc_hits(d, bound)?.into_iter().map(|h| h.record).collect())
}

/// What the 2-division cubic of a curve says about its mod-2 image.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoDivisionReport {
    pub square_disc: bool,
    pub rational_root: bool,
    /// Whether the 2-division field agrees with the splitting field of the
    /// field's ring class cubic at every small unramified prime. `None` over
    /// fields without such a cubic.
    pub ring_class_field: Option<bool>,
}

impl TwoDivisionReport {
    pub fn cyclic_of_order_three(&self) -> bool {
        self.square_disc && !self.rational_root && self.ring_class_field == Some(true)
    }
}

/// Number of roots of a polynomial (constant term first) modulo `p`.
fn roots_mod(coeffs: &[QuadInt], p: &PrimeElement) -> usize {
    let res = Residues::new(&p.gen);
    res.iter()
        .filter(|x| res.is_zero_mod(&crate::poly::eval(coeffs, x)))
        .count()
}

/// Compare Frobenius at odd primes of norm at most this bound.
const FROBENIUS_BOUND: u64 = 300;

pub fn two_division_check(e: &WeierstrassModel) -> Result<TwoDivisionReport> {
    let k = e.field();
    let disc = e.discriminant();
    if disc.is_zero() {
        return Err(Error::SingularModel);
    }
    let square_disc = disc.sqrt_exact().is_some();
    let rational_root = !two_division_roots(e).is_empty();
    let ring_class_field = match field_pq(k.d()) {
        Err(_) => None,
        Ok(pq) => {
            let (b2, b4, b6, _) = e.b_invariants();
            // 4x^3 + b2 x^2 + 2 b4 x + b6, constant term first
            let div = vec![b6, &b4 * 2, b2, k.int(4)];
            let [_, c2, c1, c0] = pq.ring_class_cubic;
            let rc = vec![k.int(c0), k.int(c1), k.int(c2), k.one()];
            let bad = &(&disc * 2) * pq.d as i64;
            let agree = primes_up_to(k, FROBENIUS_BOUND)
                .iter()
                .filter(|p| !p.gen.divides(&bad))
                .all(|p| roots_mod(&div, p) == roots_mod(&rc, p));
            Some(agree)
        }
    };
    Ok(TwoDivisionReport { square_disc, rational_root, ring_class_field })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn gauss_like(d: u32) -> Field {
        Field::new(d as i64).unwrap()
    }

    #[test]
    fn specialize_at_the_coordinate_points() {
        let k = gauss_like(11);
        let (a, b) = (k.elt(2, -1), k.elt(-3, 5));
        let fam = RsFamily::new(a.clone(), b.clone());
        let e = rs_specialize(&fam, &k.zero(), &k.one()).unwrap();
        assert_eq!(e.ainvs()[3], &(&a * 9));
        assert_eq!(e.ainvs()[4], &(&b * 27));
        let e = rs_specialize(&fam, &k.one(), &k.zero()).unwrap();
        assert_eq!(e.ainvs()[3], &(&a.square() * -3));
        assert_eq!(e.ainvs()[4], &-&(&(&a.pow(3) * 2) + &(&b.square() * 27)));
    }

    #[test]
    fn degenerate_parameters_are_rejected() {
        let k = gauss_like(19);
        // F = v^3 + a v u^2 + b u^3 vanishes at (1, 1) when a + b = -1
        let fam = RsFamily::new(k.int(2), k.int(-3));
        assert!(matches!(
            rs_specialize(&fam, &k.one(), &k.one()),
            Err(Error::DegenerateParameters(_))
        ));
    }

    #[test]
    fn discriminant_identity_on_random_parameters() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..1000 {
            let d = CYCLIC_FIELDS[rng.gen_range(0..5)];
            let k = gauss_like(d);
            let mut r = || k.elt(rng.gen_range(-20..=20), rng.gen_range(-20..=20));
            let fam = RsFamily::new(r(), r());
            let (u, v) = (r(), r());
            if fam.cubic_discriminant().is_zero() || fam.cubic.eval(&u, &v).is_zero() {
                continue;
            }
            // the identity is asserted inside
            rs_specialize(&fam, &u, &v).unwrap();
        }
    }

    #[test]
    fn field_pq_lookup() {
        let pq = field_pq(19).unwrap();
        assert_eq!(pq.p, [2, 9, 3]);
        assert_eq!(pq.q, [46, 54, 36, 27]);
        assert_eq!(pq.ring_class_cubic, [1, 0, -2, -2]);
        assert_eq!(field_pq(163).unwrap().p, [32, 45, 12]);
        for d in [1, 2, 3, 7] {
            assert_eq!(field_pq(d), Err(Error::WrongField(d)));
        }
    }

    #[test]
    fn cubic_data_is_consistent() {
        for d in CYCLIC_FIELDS {
            let pq = field_pq(d).unwrap();
            let k = pq.field();
            let (p, q, f) = (pq.p_form(), pq.q_form(), pq.f_form());
            let lhs = q.mul(&q).add(&p.pow(3).scale(&k.int(-8)));
            let rhs = f.mul(&f).scale(&k.int(27 * d as i64));
            assert_eq!(lhs, rhs, "d={d}");
            // x^3 + c2 x^2 + c1 x + c0 has discriminant -4d
            let [_, c2, c1, c0] = pq.ring_class_cubic;
            let rc = BinaryForm::from_ints(k, &[c0, c1, c2, 1]);
            assert_eq!(rc.cubic_discriminant(), k.int(-4 * d as i64), "d={d}");
            // F has discriminant -4d times a square
            let ratio = f.cubic_discriminant().div_exact(&k.int(-4 * d as i64)).unwrap();
            assert!(ratio.sqrt_exact().is_some(), "d={d}");
        }
    }

    #[test]
    fn printed_forms_come_from_the_base_curve() {
        for d in CYCLIC_FIELDS {
            let pq = field_pq(d).unwrap();
            let k = pq.field();
            let fam = RsFamily::from_curve(&pq.base_curve());
            let lam = k.int(pq.lambda);
            let a4 = pq.p_form().scale(&(&lam.square() * -6));
            let a6 = pq.q_form().scale(&(&lam.pow(3) * 2));
            assert_eq!(fam.a4.substitute(pq.substitution), a4, "d={d}");
            assert_eq!(fam.a6.substitute(pq.substitution), a6, "d={d}");
        }
    }

    #[test]
    fn base_curves_have_conductor_sqrt_minus_d() {
        for d in CYCLIC_FIELDS {
            let pq = field_pq(d).unwrap();
            let k = pq.field();
            let e = pq.base_curve();
            assert_eq!(e.discriminant(), k.int(-(d as i64)));
            let g = global_data(&e).unwrap();
            let cond = g.conductor();
            assert_eq!(cond.len(), 1);
            assert!(cond[0].0.gen.is_associate(&k.sqrt_neg_d()));
            assert_eq!(cond[0].1, 1);
            assert!(g.disc_min.sqrt_exact().is_some());
            assert!(two_division_check(&e).unwrap().cyclic_of_order_three(), "d={d}");
        }
    }

    #[test]
    fn model_discriminant() {
        let pq = field_pq(43).unwrap();
        let k = pq.field();
        let (u, v) = (k.elt(2, 1), k.elt(-1, 3));
        let e = pq.model(&u, &v).unwrap();
        let fv = pq.f_form().eval(&u, &v);
        let expected = &fv.square() * (-64 * 729 * 43);
        assert_eq!(e.discriminant(), expected);
    }

    #[test]
    fn two_division_reports() {
        let ex = &KNOWN_EXAMPLES[0];
        let rep = two_division_check(&ex.model()).unwrap();
        assert!(rep.square_disc && !rep.rational_root);
        assert_eq!(rep.ring_class_field, Some(true));
        assert!(rep.cyclic_of_order_three());

        let k = gauss_like(11);
        let ab = crate::AbModel::new(k.int(3), k.int(1)).unwrap().to_weierstrass();
        let rep = two_division_check(&ab).unwrap();
        assert!(rep.rational_root);
        assert!(!rep.cyclic_of_order_three());

        // 37.a1 has discriminant 37, not a square over Q(sqrt(-11))
        let e = WeierstrassModel::from_ints(k, [0, 0, 1, -1, 0]);
        let rep = two_division_check(&e).unwrap();
        assert!(!rep.square_disc);
        assert!(!rep.cyclic_of_order_three());

        // no ring class cubic over Q(i)
        let e = WeierstrassModel::from_ints(gauss_like(1), [0, -1, 1, 0, 0]);
        assert_eq!(two_division_check(&e).unwrap().ring_class_field, None);
    }

    #[test]
    fn prime_power_screen() {
        assert!(prime_power_outside(&BigInt::from(2 * 3 * 3 * 11), 11));
        assert!(prime_power_outside(&BigInt::from(-47 * 8), 11));
        assert!(prime_power_outside(&BigInt::from(47 * 47), 11));
        assert!(!prime_power_outside(&BigInt::from(47 * 53), 11));
        assert!(!prime_power_outside(&BigInt::from(0), 11));
    }

    #[test]
    fn screen_matches_brute_force_over_twists() {
        for d in [11, 19, 43] {
            let pq = field_pq(d).unwrap();
            let k = pq.field();
            for (u, v) in candidate_parameters(pq, 30).into_iter().take(60) {
                let base = pq.model(&u, &v).unwrap();
                let outside = !small_part_only(&pq.f_form().eval(&u, &v), d);
                let fast: Vec<QuadInt> = viable_twists(&base, outside);
                for c in twist_set(k) {
                    let g = global_data(&base.quadratic_twist(&c)).unwrap();
                    let cond = g.conductor();
                    let prime = cond.len() == 1 && cond[0].1 == 1;
                    if prime {
                        assert!(fast.contains(&c), "d={d} ({u}, {v}) twist {c}");
                    }
                }
            }
        }
    }

    #[test]
    fn twists_cover_signs_and_small_primes() {
        let k = gauss_like(19);
        let t = twist_set(k);
        // 2 and 3 are inert: signs x {1,2} x {1,3} x {1, sqrt(-19)}
        assert_eq!(t.len(), 16);
        assert!(t.contains(&k.int(-6)));
    }
}
