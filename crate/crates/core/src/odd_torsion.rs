//! Curves with a point of order 3, 5 or 7 and odd prime-power conductor.
//!
//! Points of order `l` are put at `(0, 0)` of Kubert's models. The candidate
//! parameters are produced by finite searches that follow the factorization
//! of the discriminant, and each candidate is then checked with Tate's
//! algorithm.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use crate::curve_models::{
    global_data, is_isomorphic, order, three_torsion_points, GlobalData, Point,
};
use crate::field_arith::rational::factor_int;
use crate::field_arith::{factor, gcd, gcd_all, Field, PrimeElement, QuadFrac, QuadInt};
use crate::records::CurveRecord;
use crate::{Error, Result, WeierstrassModel};

/// Parameters of Kubert's models: `(a1, a3)` for `l = 3`, `(a, b)` for `l = 5, 7`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KubertParams {
    pub ell: u32,
    pub first: QuadInt,
    pub second: QuadInt,
}

impl KubertParams {
    pub fn three(a1: QuadInt, a3: QuadInt) -> KubertParams {
        KubertParams { ell: 3, first: a1, second: a3 }
    }

    pub fn five(a: QuadInt, b: QuadInt) -> KubertParams {
        KubertParams { ell: 5, first: a, second: b }
    }

    pub fn seven(a: QuadInt, b: QuadInt) -> KubertParams {
        KubertParams { ell: 7, first: a, second: b }
    }

    pub fn field(&self) -> Field {
        self.first.field()
    }
}

/// The discriminant of the Kubert model in closed form.
pub fn kubert_disc(p: &KubertParams) -> QuadInt {
    let (x, y) = (&p.first, &p.second);
    match p.ell {
        3 => &y.pow(3) * &(&x.pow(3) - &(y * 27)),
        5 => {
            let q = &(&x.square() - &(&(x * y) * 11)) - &y.square();
            &(&x.pow(5) * &y.pow(5)) * &q
        }
        7 => {
            let c = &(&(&x.pow(3) - &(&(&x.square() * y) * 8)) + &(&(x * &y.square()) * 5)) + &y.pow(3);
            &(&(&x.pow(7) * &y.pow(7)) * &(x - y).pow(7)) * &c
        }
        _ => unreachable!("ell is 3, 5 or 7"),
    }
}

pub fn kubert_model(p: &KubertParams) -> Result<WeierstrassModel> {
    let f = p.field();
    let (x, y) = (&p.first, &p.second);
    let e = match p.ell {
        3 => WeierstrassModel::new([x.clone(), f.zero(), y.clone(), f.zero(), f.zero()]),
        5 | 7 => {
            if !gcd(x, y).is_unit() {
                return Err(Error::PreconditionViolated(format!("gcd({x}, {y}) is not a unit")));
            }
            if p.ell == 5 {
                // y^2 + (b - a) xy - a b^2 y = x^3 - a b x^2
                let ab = x * y;
                WeierstrassModel::new([y - x, -&ab, -&(&ab * y), f.zero(), f.zero()])
            } else {
                // y^2 + (b^2 + ab - a^2) xy - (a^3 b^3 - a^2 b^4) y = x^3 - (a^3 b - a^2 b^2) x^2
                let a2 = x.square();
                let b2 = y.square();
                let a1 = &(&b2 + &(x * y)) - &a2;
                let c2 = &(&(&a2 * x) * y) - &(&a2 * &b2);
                WeierstrassModel::new([a1, -&c2, -&(&c2 * &b2), f.zero(), f.zero()])
            }
        }
        l => return Err(Error::PreconditionViolated(format!("l = {l}"))),
    };
    if e.is_singular() {
        return Err(Error::SingularModel);
    }
    Ok(e)
}

/// The quotient by `<(0, 0)>` of `y^2 + a1 xy + a3 y = x^3`, with its
/// discriminant `a3 (a1^3 - 27 a3)^3`.
pub fn three_isogenous(a1: &QuadInt, a3: &QuadInt) -> (WeierstrassModel, QuadInt) {
    let f = a1.field();
    let a1a3 = a1 * a3;
    let e = WeierstrassModel::new([
        a1.clone(),
        f.zero(),
        a3.clone(),
        &a1a3 * -5,
        -&(&(&a1.square() * &a1a3) + &(&a3.square() * 7)),
    ]);
    let disc = a3 * &(&a1.pow(3) - &(a3 * 27)).pow(3);
    (e, disc)
}

pub fn three_isogenous_disc(a1: &QuadInt, a3: &QuadInt) -> QuadInt {
    three_isogenous(a1, a3).1
}

/// A row of the table of known curves with odd torsion.
#[derive(Clone, Copy, Debug)]
pub struct KnownCurve {
    pub label: &'static str,
    /// Label of the Galois conjugate, when it is a different curve.
    pub conj_label: Option<&'static str>,
    pub ell: u32,
    pub fields: &'static [u32],
    /// Coefficients in the basis `(1, w)`.
    pub ainvs: [&'static str; 5],
    /// Minimal discriminant as `base^exponent`, up to units.
    pub disc: (&'static str, u32),
}

impl KnownCurve {
    pub fn model(&self, f: Field) -> Option<WeierstrassModel> {
        if !self.fields.contains(&f.d()) {
            return None;
        }
        let a: Vec<QuadInt> = self
            .ainvs
            .iter()
            .map(|s| QuadInt::parse(f, s).expect("table entry"))
            .collect();
        Some(WeierstrassModel::new([
            a[0].clone(),
            a[1].clone(),
            a[2].clone(),
            a[3].clone(),
            a[4].clone(),
        ]))
    }
}

const NOT_19_SPLIT: &[u32] = &[1, 7, 11, 19, 43, 163];
const THREE_INERT: &[u32] = &[1, 7, 19, 43, 67, 163];
const NOT_37_SPLIT: &[u32] = &[2, 19, 43, 163];
const NOT_11_SPLIT: &[u32] = &[1, 3, 11, 67, 163];

pub const KNOWN_ODD_TORSION: [KnownCurve; 17] = [
    KnownCurve { label: "19.a2", conj_label: None, ell: 3, fields: NOT_19_SPLIT, ainvs: ["0", "1", "1", "-9", "-15"], disc: ("-19", 3) },
    KnownCurve { label: "19.a3", conj_label: None, ell: 3, fields: NOT_19_SPLIT, ainvs: ["0", "1", "1", "1", "0"], disc: ("-19", 1) },
    KnownCurve { label: "27.a2", conj_label: None, ell: 3, fields: THREE_INERT, ainvs: ["0", "0", "1", "-30", "63"], disc: ("-3", 5) },
    KnownCurve { label: "27.a3", conj_label: None, ell: 3, fields: THREE_INERT, ainvs: ["0", "0", "1", "0", "-7"], disc: ("-3", 9) },
    KnownCurve { label: "27.a4", conj_label: None, ell: 3, fields: THREE_INERT, ainvs: ["0", "0", "1", "0", "0"], disc: ("-3", 3) },
    KnownCurve { label: "37.b2", conj_label: None, ell: 3, fields: NOT_37_SPLIT, ainvs: ["0", "1", "1", "-23", "-50"], disc: ("37", 3) },
    KnownCurve { label: "37.b3", conj_label: None, ell: 3, fields: NOT_37_SPLIT, ainvs: ["0", "1", "1", "-3", "1"], disc: ("37", 1) },
    KnownCurve { label: "243.a2", conj_label: None, ell: 3, fields: THREE_INERT, ainvs: ["0", "0", "1", "0", "20"], disc: ("-3", 11) },
    KnownCurve { label: "243.b2", conj_label: None, ell: 3, fields: THREE_INERT, ainvs: ["0", "0", "1", "0", "2"], disc: ("-3", 7) },
    KnownCurve {
        label: "2.0.4.1-757.1-a1",
        conj_label: Some("2.0.4.1-757.2-a1"),
        ell: 3,
        fields: &[1],
        ainvs: ["1+w", "-1+w", "1", "-15+5w", "-17+6w"],
        disc: ("-26+9w", 3),
    },
    KnownCurve {
        label: "2.0.4.1-757.1-a2",
        conj_label: Some("2.0.4.1-757.2-a2"),
        ell: 3,
        fields: &[1],
        ainvs: ["1+w", "1+w", "1", "2w", "w"],
        disc: ("-26+9w", 1),
    },
    KnownCurve {
        label: "2.0.8.1-9.1-CMa1",
        conj_label: Some("2.0.8.1-9.3-CMa1"),
        ell: 3,
        fields: &[2],
        ainvs: ["w", "1-w", "1", "-1", "0"],
        disc: ("-1-w", 6),
    },
    KnownCurve {
        label: "2.0.11.1-9.3-CMa1",
        conj_label: Some("2.0.11.1-9.1-CMa1"),
        ell: 3,
        fields: &[11],
        ainvs: ["0", "1-w", "1", "-2-w", "-2"],
        disc: ("-1+w", 6),
    },
    KnownCurve { label: "11.a2", conj_label: None, ell: 5, fields: NOT_11_SPLIT, ainvs: ["0", "-1", "1", "-10", "-20"], disc: ("-11", 5) },
    KnownCurve { label: "11.a3", conj_label: None, ell: 5, fields: NOT_11_SPLIT, ainvs: ["0", "-1", "1", "0", "0"], disc: ("-11", 1) },
    KnownCurve {
        label: "2.0.4.1-25.3-CMa1",
        conj_label: Some("2.0.4.1-25.1-CMa1"),
        ell: 5,
        fields: &[1],
        ainvs: ["1+w", "w", "w", "0", "0"],
        disc: ("1+2w", 3),
    },
    KnownCurve {
        label: "2.0.3.1-49.3-CMa1",
        conj_label: Some("2.0.3.1-49.1-CMa1"),
        ell: 7,
        fields: &[3],
        ainvs: ["0", "-2+w", "w", "1-w", "0"],
        disc: ("1-3w", 2),
    },
];

impl KnownCurve {
    pub fn disc(&self, f: Field) -> QuadInt {
        QuadInt::parse(f, self.disc.0).expect("table entry").pow(self.disc.1)
    }
}

/// Difference between an enumeration and the known table for one field.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TableComparison {
    pub missing: Vec<String>,
    pub extra: Vec<String>,
    /// Labels whose minimal discriminant is not the tabulated one.
    pub disc_mismatch: Vec<String>,
}

impl TableComparison {
    pub fn is_exact(&self) -> bool {
        self.missing.is_empty() && self.extra.is_empty() && self.disc_mismatch.is_empty()
    }
}

/// Compare the output of [`enumerate_torsion`] with the known table,
/// counting Galois conjugates as separate curves when they are not isomorphic.
pub fn compare_with_table(field: Field, ell: u32, found: &[TorsionCurve]) -> TableComparison {
    let mut cmp = TableComparison::default();
    let mut expected: Vec<(&str, WeierstrassModel, QuadInt)> = Vec::new();
    for row in KNOWN_ODD_TORSION.iter().filter(|r| r.ell == ell) {
        let Some(m) = row.model(field) else { continue };
        let disc = row.disc(field);
        let conj = m.conj();
        let distinct = !is_isomorphic(&m, &conj).unwrap_or(true);
        expected.push((row.label, m, disc.clone()));
        if distinct {
            expected.push((row.conj_label.unwrap_or(row.label), conj, disc.conj()));
        }
    }
    let mut matched = vec![false; expected.len()];
    for c in found {
        let model = c.record.model();
        let hit = expected
            .iter()
            .position(|(_, m, _)| is_isomorphic(&model, m).unwrap_or(false));
        match hit {
            Some(i) => {
                matched[i] = true;
                if !c.record.disc_min().is_associate(&expected[i].2) {
                    cmp.disc_mismatch.push(expected[i].0.to_string());
                }
            }
            None => cmp.extra.push(format!("{:?}", c.record.ainvs)),
        }
    }
    for (i, (label, _, _)) in expected.iter().enumerate() {
        if !matched[i] {
            cmp.missing.push(label.to_string());
        }
    }
    cmp
}

/// The label of the known curve isomorphic to `e` (or to its conjugate).
pub fn identify(e: &WeierstrassModel, ell: u32) -> Option<&'static str> {
    let f = e.field();
    for row in KNOWN_ODD_TORSION.iter().filter(|r| r.ell == ell) {
        let Some(m) = row.model(f) else { continue };
        if is_isomorphic(e, &m).unwrap_or(false) {
            return Some(row.label);
        }
        if is_isomorphic(e, &m.conj()).unwrap_or(false) {
            return Some(row.conj_label.unwrap_or(row.label));
        }
    }
    None
}

/// A curve found by the enumeration, with the parameters that produced it.
#[derive(Clone, Debug)]
pub struct TorsionCurve {
    pub params: KubertParams,
    pub record: CurveRecord,
}

/// All divisors of `z` up to units, times every unit.
fn divisors_times_units(z: &QuadInt) -> Vec<QuadInt> {
    let f = z.field();
    let mut divs = vec![f.one()];
    for (p, e) in &factor(z).factors {
        let mut next = Vec::with_capacity(divs.len() * (*e as usize + 1));
        for d in &divs {
            let mut acc = d.clone();
            for _ in 0..=*e {
                next.push(acc.clone());
                acc = &acc * &p.gen;
            }
        }
        divs = next;
    }
    divs.iter()
        .flat_map(|d| f.units().iter().map(move |u| d * u))
        .collect()
}

/// Roots in `O_K` of `x^2 + b x + c`.
fn monic_quadratic_roots(b: &QuadInt, c: &QuadInt) -> Vec<QuadInt> {
    let disc = &b.square() - &(c * 4);
    let Some(s) = disc.sqrt_exact() else { return Vec::new() };
    let two = b.field().int(2);
    [&s - b, &(-&s) - b]
        .iter()
        .filter_map(|r| r.div_exact_opt(&two))
        .collect()
}

/// Parameter sets `(a1, a3)` that contain, up to scaling, every model
/// `y^2 + a1 xy + a3 y = x^3` minimal at all primes whose discriminant is a
/// unit times a prime power, when `d != 3` (every unit is a cube).
fn candidates_three(f: Field) -> Vec<KubertParams> {
    let units = f.units();
    let d27 = divisors_times_units(&f.int(27));
    let three_primes: Vec<&PrimeElement> = f.ctx().three_primes.iter().collect();
    let mut out = Vec::new();
    let one = f.one();
    let mut push = |a1: QuadInt, a3: QuadInt| out.push(KubertParams::three(a1, a3));

    // a3 = 1: (a1 - 3)(a1^2 + 3 a1 + 9) with x = a1 - 3 gives x (x^2 + 9x + 27);
    // either x is a unit or the second factor divides 27.
    for u in units {
        push(u + 3, one.clone());
    }
    for delta in &d27 {
        for x in monic_quadratic_roots(&f.int(9), &(&f.int(27) - delta)) {
            push(x + 3, one.clone());
        }
    }
    // a1 = 0 and a3 a proper power of a prime above 3.
    for p in &three_primes {
        for j in 1..=2 {
            push(f.zero(), p.gen.pow(j));
        }
    }
    // Bad prime dividing a1 but not 3: a3 = pi^j, a1^3 = pi^j (27 + u).
    for u in units {
        let m = u + 27;
        for (p, _) in &factor(&m).factors {
            for j in 1..=2 {
                let a3 = p.gen.pow(j);
                if let Some(a1) = (&a3 * &m).cbrt_exact() {
                    push(a1, a3);
                }
            }
        }
    }
    // Bad prime above 3 dividing a1: a1^3 = 27 pi^j + u pi^k.
    for p in &three_primes {
        for j in 1..=2 {
            let a3 = p.gen.pow(j);
            for k in 0..=6 {
                for u in units {
                    let target = &(&a3 * 27) + &(u * &p.gen.pow(k));
                    if let Some(a1) = target.cbrt_exact() {
                        push(a1, a3.clone());
                    }
                }
            }
        }
    }
    // Bad prime not dividing a1, a3 not a unit: a1^3 - 1 = 27 a3 after
    // scaling; a1 - 1 or a1^2 + a1 + 1 divides 27.
    for delta in &d27 {
        let mut a1s = vec![delta + 1];
        a1s.extend(monic_quadratic_roots(&one, &(&one - delta)));
        for a1 in a1s {
            if let Some(a3) = (&a1.pow(3) - 1).div_exact_opt(&f.int(27)) {
                if !a3.is_zero() {
                    push(a1, a3);
                }
            }
        }
    }
    out
}

/// Two of `a`, `b`, `a^2 - 11ab - b^2` are units; scale so `a = 1` or `b = 1`.
fn candidates_five(f: Field) -> Vec<KubertParams> {
    let one = f.one();
    let mut out = Vec::new();
    for u in f.units() {
        out.push(KubertParams::five(one.clone(), u.clone()));
        out.push(KubertParams::five(u.clone(), one.clone()));
        // 1 - 11 b - b^2 = u
        for b in monic_quadratic_roots(&f.int(11), &(u - 1)) {
            out.push(KubertParams::five(one.clone(), b));
        }
        // a^2 - 11 a - 1 = u
        for a in monic_quadratic_roots(&f.int(-11), &(-&(u + 1))) {
            out.push(KubertParams::five(a, one.clone()));
        }
    }
    out
}

/// Two of `a`, `b`, `(a - b)^7 (a^3 - 8a^2 b + 5ab^2 + b^3)` are units.
fn candidates_seven(f: Field) -> Vec<KubertParams> {
    let one = f.one();
    let mut out = Vec::new();
    for u in f.units() {
        out.push(KubertParams::seven(one.clone(), u.clone()));
        out.push(KubertParams::seven(u.clone(), one.clone()));
        out.push(KubertParams::seven(one.clone(), &one - u));
        out.push(KubertParams::seven(&one + u, one.clone()));
    }
    out
}

fn family(ell: u32) -> String {
    format!("kubert-{ell}")
}

fn origin(f: Field) -> Point {
    Point::Affine(QuadFrac::from_int(f.zero()), QuadFrac::from_int(f.zero()))
}

/// The conductor is a single prime; `odd` additionally excludes primes above 2.
fn prime_power_conductor(g: &GlobalData, odd: bool) -> bool {
    let c = g.conductor();
    c.len() == 1 && !(odd && c[0].0.is_above(2))
}

fn evaluate(p: &KubertParams, odd: bool) -> Option<(TorsionCurve, GlobalData)> {
    let e = kubert_model(p).ok()?;
    let g = global_data(&e).ok()?;
    if !prime_power_conductor(&g, odd) {
        return None;
    }
    let ord = order(&e, &origin(p.field()), p.ell).ok()??;
    debug_assert_eq!(ord, p.ell);
    if ord != p.ell {
        return None;
    }
    let label = identify(&g.minimal_model, p.ell);
    let record = CurveRecord::from_global(&g, &family(p.ell), torsion_extra(p.ell), label);
    Some((TorsionCurve { params: p.clone(), record }, g))
}

fn torsion_extra(ell: u32) -> &'static [u32] {
    match ell {
        5 => &[5],
        7 => &[7],
        _ => &[],
    }
}

/// Keep one curve per isomorphism class, in a deterministic order.
fn dedupe(mut found: Vec<(TorsionCurve, GlobalData)>) -> Vec<(TorsionCurve, GlobalData)> {
    found.sort_by(|a, b| {
        (a.1.conductor_norm(), format!("{:?}", a.0.record.ainvs))
            .cmp(&(b.1.conductor_norm(), format!("{:?}", b.0.record.ainvs)))
    });
    let mut out: Vec<(TorsionCurve, GlobalData)> = Vec::new();
    for c in found {
        let m = &c.1.minimal_model;
        let dup = out.iter().any(|o| {
            o.1.conductor_norm() == c.1.conductor_norm()
                && is_isomorphic(&o.1.minimal_model, m).unwrap_or(false)
        });
        if !dup {
            out.push(c);
        }
    }
    out
}

/// Every curve over `field` of odd prime-power conductor with a point of
/// order `ell`, Galois conjugates included.
pub fn enumerate_torsion(ell: u32, field: Field) -> Result<Vec<TorsionCurve>> {
    let cands = match ell {
        3 if field.d() == 3 => return Err(Error::WrongField(3)),
        3 => candidates_three(field),
        5 => candidates_five(field),
        7 => candidates_seven(field),
        _ => return Err(Error::PreconditionViolated(format!("l = {ell}"))),
    };
    let found: Vec<_> = cands.par_iter().filter_map(|p| evaluate(p, true)).collect();
    Ok(dedupe(found).into_iter().map(|(c, _)| c).collect())
}

/// A curve over `Q(sqrt(-3))` with a point of order 3 and prime-power
/// conductor, with the discriminant valuations of it and its 3-isogenous curve.
#[derive(Clone, Debug)]
pub struct EisensteinCurve {
    pub curve: TorsionCurve,
    pub v_disc: u32,
    /// Valuation for the quotient by the Kubert point `(0, 0)`.
    pub v_isogenous_disc: u32,
    /// Valuations for the quotients by every rational subgroup of order 3.
    pub v_all_isogenous: Vec<u32>,
    /// One of the two CM curves of conductor `(27)` whose valuations are all 6.
    pub cm_exception: bool,
}

impl EisensteinCurve {
    /// Some 3-isogeny with kernel generated by a rational point gives a
    /// valuation prime to 3 (on either side).
    pub fn dichotomy_holds(&self) -> bool {
        self.v_disc % 3 != 0 || self.v_all_isogenous.iter().any(|v| v % 3 != 0)
    }
}

/// Velu's formulas for the quotient by `<p>`, `p` of order 3, scaled to be integral.
fn velu_three(e: &WeierstrassModel, p: &Point) -> Result<WeierstrassModel> {
    let Point::Affine(x0, y0) = p else {
        return Err(Error::PreconditionViolated("point at infinity".into()));
    };
    let fr = |z: &QuadInt| QuadFrac::from_int(z.clone());
    let f = e.field();
    let (a1, a2, a3, a4, a6) = (fr(&e.a1), fr(&e.a2), fr(&e.a3), fr(&e.a4), fr(&e.a6));
    let k = |n: i64| fr(&f.int(n));
    let gx = &(&(&(&k(3) * &(x0 * x0)) + &(&(&k(2) * &a2) * x0)) + &a4) - &(&a1 * y0);
    let gy = &(&(&(-&k(2)) * y0) - &(&a1 * x0)) - &a3;
    let v = &(&k(2) * &gx) - &(&a1 * &gy);
    let u = &gy * &gy;
    let w = &u + &(x0 * &v);
    let new_a4 = &a4 - &(&k(5) * &v);
    let new_a6 = &(&a6 - &(&(&(&a1 * &a1) + &(&k(4) * &a2)) * &v)) - &(&k(7) * &w);
    let den = num_integer::Integer::lcm(new_a4.den(), new_a6.den());
    let dd = QuadInt::from_int(f, den);
    let scale = |z: &QuadFrac, i: u32| (z * &QuadFrac::from_int(dd.pow(i))).to_integral().expect("cleared");
    Ok(WeierstrassModel::new([
        &e.a1 * &dd,
        &e.a2 * &dd.pow(2),
        &e.a3 * &dd.pow(3),
        scale(&new_a4, 4),
        scale(&new_a6, 6),
    ]))
}

/// Bounded search over `Q(sqrt(-3))` for curves with a point of order 3
/// whose minimal discriminant has norm at most `bound`.
pub fn enumerate_torsion3_eisenstein(bound: u64) -> Vec<EisensteinCurve> {
    let f = Field::new(3).unwrap();
    let s = f.sqrt_neg_d();
    let mut cands: Vec<KubertParams> = Vec::new();

    // (0, 0) integral on the minimal model: y^2 + a1 xy + a3 y = x^3 itself.
    cands.extend(kubert_box(f, bound as f64, |_| true, |a1| a1.clone()));

    // Otherwise a3 = c / sqrt(-3)^3 with c prime to sqrt(-3); scaling by
    // sqrt(-3) gives the integral (sqrt(-3) a1, c) with discriminant 3^6 times.
    let scaled = bound as f64 * 3f64.powi(12);
    let s3 = s.clone();
    cands.extend(kubert_box(
        f,
        scaled,
        move |c| !s3.divides(c),
        |a1| a1 * &f.sqrt_neg_d(),
    ));

    let found: Vec<_> = cands
        .par_iter()
        .filter(|p| norm_is_prime_power_times_three(&kubert_disc(p)))
        .filter_map(|p| {
            let (c, g) = evaluate(p, false)?;
            (g.disc_min.norm() <= BigInt::from(bound)).then_some((c, g))
        })
        .collect();
    dedupe(found)
        .into_iter()
        .map(|(curve, g)| {
            let prime = g.conductor()[0].0.clone();
            let v_disc = g.local(&prime).unwrap().v_min_disc;
            let v_at = |m: &WeierstrassModel| {
                let gi = global_data(m).expect("isogenous curve is nonsingular");
                gi.local(&prime).map_or(0, |l| l.v_min_disc)
            };
            let (iso, _) = three_isogenous(&curve.params.first, &curve.params.second);
            let v_isogenous_disc = v_at(&iso);
            let e = &g.minimal_model;
            let mut seen_x = Vec::new();
            let mut v_all_isogenous = Vec::new();
            for p in three_torsion_points(e) {
                let Point::Affine(x, _) = &p else { continue };
                if seen_x.contains(x) {
                    continue;
                }
                seen_x.push(x.clone());
                v_all_isogenous.push(v_at(&velu_three(e, &p).expect("affine point")));
            }
            let j_zero = g
                .minimal_model
                .invariants()
                .map(|i| i.j.is_zero())
                .unwrap_or(false);
            let cm_exception = j_zero
                && g.conductor_norm() == BigInt::from(729)
                && v_disc == 6
                && v_all_isogenous.iter().all(|v| *v == 6);
            EisensteinCurve {
                curve,
                v_disc,
                v_isogenous_disc,
                v_all_isogenous,
                cm_exception,
            }
        })
        .collect()
}

/// Cheap necessary condition for prime-power conductor: the norm of the
/// discriminant is `3^i p^k` for a single prime `p`.
fn norm_is_prime_power_times_three(disc: &QuadInt) -> bool {
    let mut n = disc.norm();
    let three = BigInt::from(3);
    while (&n % &three).bits() == 0 && n.bits() > 0 {
        n /= &three;
    }
    n.bits() <= 1 || factor_int(&n).len() == 1
}

/// Pairs `(a1, a3)` with `N(a3^3 (a1^3 - 27 a3)) <= bound` (checked in floating
/// point with slack, exactly later), and `a3` passing `keep`. `a1` is
/// enumerated before the map `lift` is applied to it.
fn kubert_box(
    f: Field,
    bound: f64,
    keep: impl Fn(&QuadInt) -> bool + Sync,
    lift: impl Fn(&QuadInt) -> QuadInt + Sync,
) -> Vec<KubertParams> {
    let a3_max = bound.cbrt().floor() as u64;
    let a3s: Vec<QuadInt> = f.elements_up_to(a3_max).into_iter().filter(|c| keep(c)).collect();
    let lift_scale = {
        let one_lifted = lift(&f.one());
        one_lifted.norm().to_f64().unwrap().sqrt()
    };
    // |lift(a1)|^3 <= sqrt(rest) + 27 |a3|
    let a1_max = |n3: f64| {
        let rest = bound / n3.powi(3);
        let m = (rest.sqrt() + 27.0 * n3.sqrt()) / lift_scale.powi(3);
        (m.powf(2.0 / 3.0) * 1.0001).ceil() as u64 + 1
    };
    let largest = a3s.iter().map(|c| a1_max(c.norm().to_f64().unwrap())).max().unwrap_or(0);
    let mut a1s = vec![f.zero()];
    a1s.extend(f.elements_up_to(largest));
    let a1_norms: Vec<f64> = a1s.iter().map(|a| a.norm().to_f64().unwrap()).collect();
    let cplx: Vec<(f64, f64)> = a1s.iter().map(|a| lift(a).to_complex()).collect();

    a3s.par_iter()
        .flat_map_iter(|a3| {
            let n3 = a3.norm().to_f64().unwrap();
            let lim = a1_max(n3) as f64;
            let (cr, ci) = (a3.to_complex().0 * 27.0, a3.to_complex().1 * 27.0);
            let mut out = Vec::new();
            for (i, a1) in a1s.iter().enumerate() {
                if a1_norms[i] > lim {
                    break;
                }
                let (x, y) = cplx[i];
                let (x2, y2) = (x * x - y * y, 2.0 * x * y);
                let (x3, y3) = (x2 * x - y2 * y, x2 * y + y2 * x);
                let (dr, di) = (x3 - cr, y3 - ci);
                if n3.powi(3) * (dr * dr + di * di) <= bound * (1.0 + 1e-9) + 1.0 {
                    out.push(KubertParams::three(lift(a1), a3.clone()));
                }
            }
            out
        })
        .collect()
}

/// Points `(x : y : z)` of `x^3 + u y^3 + v z^3 = 0` over `Q(sqrt(-3))` with
/// coprime coordinates of norm at most `bound`, normalized so the first
/// nonzero coordinate is canonical.
pub fn fermat_cubic_points(u: &QuadInt, v: &QuadInt, bound: u64) -> Result<Vec<[QuadInt; 3]>> {
    let f = u.field();
    if f.d() != 3 {
        return Err(Error::WrongField(f.d()));
    }
    if !u.is_unit() || !v.is_unit() {
        return Err(Error::PreconditionViolated("u and v must be units".into()));
    }
    let mut elems = vec![f.zero()];
    elems.extend(f.elements_up_to(bound));
    let cplx: Vec<(f64, f64)> = elems.iter().map(|z| z.to_complex()).collect();
    let cube = |(a, b): (f64, f64)| {
        let (a2, b2) = (a * a - b * b, 2.0 * a * b);
        (a2 * a - b2 * b, a2 * b + b2 * a)
    };
    let mul = |(a, b): (f64, f64), (c, d): (f64, f64)| (a * c - b * d, a * d + b * c);
    let (uc, vc) = (u.to_complex(), v.to_complex());
    let vn = vc.0 * vc.0 + vc.1 * vc.1;
    let vinv = (vc.0 / vn, -vc.1 / vn);
    let (wr, wi) = f.w_complex();
    let bound_big = BigInt::from(bound);

    let points: BTreeSet<[QuadInt; 3]> = (0..elems.len())
        .into_par_iter()
        .flat_map_iter(|i| {
            let x = &elems[i];
            // Projective scaling by units: x canonical, or x = 0 and y canonical.
            let x_ok = x.is_zero() || x.canonical() == *x;
            let mut out = Vec::new();
            if !x_ok {
                return out;
            }
            for (j, y) in elems.iter().enumerate() {
                if x.is_zero() && (y.is_zero() || y.canonical() != *y) {
                    continue;
                }
                let (xr, xi) = cube(cplx[i]);
                let (yr, yi) = mul(uc, cube(cplx[j]));
                let t = mul((-(xr + yr), -(xi + yi)), vinv);
                let r = (t.0 * t.0 + t.1 * t.1).sqrt().cbrt();
                let th = t.1.atan2(t.0) / 3.0;
                for k in 0..3 {
                    let a = th + k as f64 * 2.0 * std::f64::consts::PI / 3.0;
                    let (zr, zi) = (r * a.cos(), r * a.sin());
                    let yy = zi / wi;
                    let xx = zr - yy * wr;
                    let (rx, ry) = (xx.round(), yy.round());
                    if (xx - rx).abs() > 1e-3 || (yy - ry).abs() > 1e-3 {
                        continue;
                    }
                    let z = f.elt(rx as i64, ry as i64);
                    let lhs = &(&x.pow(3) + &(u * &y.pow(3))) + &(v * &z.pow(3));
                    if !lhs.is_zero() || z.norm() > bound_big {
                        continue;
                    }
                    if !gcd_all(&[x.clone(), y.clone(), z.clone()]).is_unit() {
                        continue;
                    }
                    out.push(normalize_projective([x.clone(), y.clone(), z]));
                    if r == 0.0 {
                        break;
                    }
                }
            }
            out
        })
        .collect();
    Ok(points.into_iter().collect())
}

fn normalize_projective(p: [QuadInt; 3]) -> [QuadInt; 3] {
    let first = p.iter().find(|c| !c.is_zero()).expect("not all zero");
    let unit = first.canonical().div_exact(first).expect("associate");
    p.map(|c| &c * &unit)
}

/// A zero coordinate, or all three coordinates units.
pub fn fermat_point_shape_ok(p: &[QuadInt; 3]) -> bool {
    p.iter().any(|c| c.is_zero()) || p.iter().all(|c| c.is_unit())
}

/// Norm of the conductor of a record when it is a power of a single prime.
pub fn conductor_prime(record: &CurveRecord) -> Option<BigInt> {
    let fac = factor_int(record.conductor_norm());
    (fac.len() == 1).then(|| BigInt::from(fac[0].0.clone()))
}
