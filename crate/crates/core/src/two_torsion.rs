//! Curves with a rational point of order 2 and odd conductor.
//!
//! Such a curve has a model `E_{a,b}: y^2 = x(x^2 + a x + b)`, normalized at
//! the primes above 2 as below. Writing `a^2 = (a^2 - 4b) + 4b` and removing
//! the common factor gives a triple `(A, B, C)` and a root `r` with
//! `r^2 A = B + C`; the searches here run over the finitely many possible
//! `(B, C)` shapes for prime-power conductor.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::curve_models::{global_data, is_isomorphic, two_division_roots, GlobalData};
use crate::field_arith::{factor, gcd, gcd_all, primes_up_to, Field, PrimeElement, QuadInt};
use crate::records::CurveRecord;
use crate::{AbModel, Error, Result, WeierstrassModel};

pub const GOOD_TWIST: &str = "good-twist";
pub const ADDITIVE: &str = "additive";
pub const SETZER_NEUMANN: &str = "setzer-neumann";
pub const SETZER_NEUMANN_TWIST: &str = "setzer-neumann-twist";
pub const SPORADIC: &str = "sporadic";
pub const SWEEP: &str = "sweep";

/// How a prime above 2 divides a normalized pair `(a, b)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AtTwo {
    /// Ordinary, `(v(a), v(b)) = (0, 4e)`.
    DividesB,
    /// Ordinary, `(v(a), v(b)) = (e, 0)`.
    DividesA,
    /// `e = 2` and `(v(a), v(b)) = (>= 3, 0)`.
    Supersingular,
}

/// The row of the 2-adic table matched by `(a, b)` at each prime above 2.
pub fn two_adic_profile(ab: &AbModel) -> Result<Vec<(PrimeElement, AtTwo)>> {
    let ctx = ab.field().ctx();
    let mut out = Vec::with_capacity(ctx.two_primes.len());
    for q in &ctx.two_primes {
        let e = q.e();
        let va = q.valuation_capped(&ab.a, 8 * e);
        let vb = q.valuation_capped(&ab.b, 8 * e);
        let row = match (va, vb) {
            (0, v) if v == 4 * e => AtTwo::DividesB,
            (v, 0) if v == e => AtTwo::DividesA,
            (v, 0) if e == 2 && v >= 3 => AtTwo::Supersingular,
            _ => {
                return Err(Error::NotOddConductor(format!(
                    "(v(a), v(b)) = ({va}, {vb}) at {q}"
                )))
            }
        };
        out.push((q.clone(), row));
    }
    Ok(out)
}

/// Remove common factors at the primes above 2 until `(a, b)` is minimal there.
pub fn minimal_at_two(ab: &AbModel) -> AbModel {
    let mut cur = ab.clone();
    for q in &ab.field().ctx().two_primes {
        while let Some(next) = cur.scale_down(&q.gen) {
            cur = next;
        }
    }
    cur
}

/// A solution `root^2 * sqfree = disc_term + b_term` attached to a curve `E_{a,b}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassificationTriple {
    /// `A`: odd and square-free.
    pub sqfree: QuadInt,
    /// `B`, from `a^2 - 4b`.
    pub disc_term: QuadInt,
    /// `C`, from `4b`.
    pub b_term: QuadInt,
    pub root: QuadInt,
    /// `s`, with `common = A s^2`.
    pub square_part: QuadInt,
    /// Odd part of `gcd(a^2 - 4b, 4b)`.
    pub common: QuadInt,
}

impl ClassificationTriple {
    pub fn field(&self) -> Field {
        self.sqfree.field()
    }

    pub fn equation_holds(&self) -> bool {
        &self.root.square() * &self.sqfree == &self.disc_term + &self.b_term
    }

    /// Both `B` and `C` odd, which happens exactly in the supersingular case.
    pub fn is_supersingular(&self) -> bool {
        self.field()
            .ctx()
            .two_primes
            .iter()
            .all(|q| !q.gen.divides(&self.disc_term) && !q.gen.divides(&self.b_term))
    }

    /// Equal up to scaling `(A, B, C, r)` by units.
    pub fn equivalent(&self, other: &ClassificationTriple) -> bool {
        if !self.sqfree.is_associate(&other.sqfree) || !self.root.is_associate(&other.root) {
            return false;
        }
        self.field().units().iter().any(|u| {
            &self.disc_term * u == other.disc_term && &self.b_term * u == other.b_term
        })
    }

    /// Check the equation, coprimality, square-freeness and the rows at 2.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidProfile(m));
        if !self.equation_holds() {
            return bad("r^2 A != B + C".into());
        }
        if self.sqfree.is_zero() || self.disc_term.is_zero() || self.b_term.is_zero() {
            return bad("zero entry".into());
        }
        if !gcd(&self.disc_term, &self.b_term).is_unit() {
            return bad("B and C are not coprime".into());
        }
        for (p, k) in factor(&self.sqfree).factors {
            if k > 1 || p.is_above(2) {
                return bad(format!("A is not odd and square-free at {p}"));
            }
        }
        let ctx = self.field().ctx();
        for q in &ctx.two_primes {
            let six_e = 6 * q.e();
            let vb = q.valuation_capped(&self.disc_term, six_e + 1);
            let vc = q.valuation_capped(&self.b_term, six_e + 1);
            let ok = (vb, vc) == (six_e, 0)
                || (vb, vc) == (0, six_e)
                || (q.e() == 2 && (vb, vc) == (0, 0));
            if !ok {
                return bad(format!("(v(B), v(C)) = ({vb}, {vc}) at {q}"));
            }
        }
        Ok(())
    }
}

/// Valuations of `(A, B, C)` at one prime.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValuationProfile {
    pub prime: PrimeElement,
    pub v: [u32; 3],
}

/// Profiles at every prime dividing `2 disc`.
pub fn valuation_profiles(t: &ClassificationTriple, disc: &QuadInt) -> Vec<ValuationProfile> {
    let ctx = t.field().ctx();
    let mut primes: Vec<PrimeElement> = ctx.two_primes.clone();
    primes.extend(factor(disc).factors.into_iter().map(|(p, _)| p).filter(|p| !p.is_above(2)));
    primes
        .into_iter()
        .map(|p| {
            let v = [&t.sqfree, &t.disc_term, &t.b_term].map(|z| p.valuation(z).unwrap_or(u32::MAX));
            ValuationProfile { prime: p, v }
        })
        .collect()
}

/// Whether every profile is one of the allowed rows, and `A B C` has no
/// prime factor outside `2 disc`.
pub fn check_profiles(t: &ClassificationTriple, disc: &QuadInt) -> Result<()> {
    let profiles = valuation_profiles(t, disc);
    for pr in &profiles {
        let v = pr.v;
        let ok = if pr.prime.is_above(2) {
            let s = 6 * pr.prime.e();
            v == [0, s, 0] || v == [0, 0, s] || (t.is_supersingular() && v == [0, 0, 0])
        } else {
            let k = pr.prime.valuation(disc).unwrap_or(0);
            let mut allowed = vec![[0, k, 0], [1, 0, 0]];
            if k % 2 == 0 {
                allowed.push([0, 0, k / 2]);
            }
            if k >= 6 {
                allowed.push([0, k - 6, 0]);
                if k % 2 == 0 {
                    allowed.push([0, 0, (k - 6) / 2]);
                }
            }
            allowed.contains(&v)
        };
        if !ok {
            return Err(Error::InvalidProfile(format!("{:?} at {}", v, pr.prime)));
        }
    }
    let prod = &(&t.sqfree * &t.disc_term) * &t.b_term;
    for (p, _) in factor(&prod).factors {
        if !profiles.iter().any(|pr| pr.prime.gen.is_associate(&p.gen)) {
            return Err(Error::InvalidProfile(format!("{p} does not divide 2D")));
        }
    }
    Ok(())
}

fn not_divisible(what: &str) -> Error {
    Error::InvalidProfile(format!("{what} is not integral"))
}

/// The triple of `E_{a,b}`, where `disc` is its minimal discriminant (or
/// anything with the same odd part, such as `b^2 (a^2 - 4b)`).
pub fn classify(ab: &AbModel, disc: &QuadInt) -> Result<ClassificationTriple> {
    let f = ab.field();
    two_adic_profile(ab)?;
    let two = f.int(2);
    let tau_b = gcd(&two, &ab.b);
    let tau_a = two.div_exact(&tau_b)?;
    let from_disc = &ab.a.square() - &(&ab.b * 4);
    let from_b = &ab.b * 4;
    let g = gcd_all(&[disc.clone(), ab.b.clone(), from_disc.clone()]);
    if g.is_zero() {
        return Err(Error::SingularModel);
    }
    let mut sqfree = f.one();
    let mut square_part = f.one();
    for (p, j) in factor(&g).factors {
        if p.is_above(2) {
            return Err(Error::NotOddConductor(format!("{p} divides gcd(b, a^2 - 4b)")));
        }
        if j > 3 {
            return Err(Error::InvalidProfile(format!("{p}^{j} divides gcd(b, a^2 - 4b)")));
        }
        if j % 2 == 1 {
            sqfree = &sqfree * &p.gen;
        }
        if j >= 2 {
            square_part = &square_part * &p.gen;
        }
    }
    let common = &sqfree * &square_part.square();
    let den = &tau_a.square() * &common;
    let t = ClassificationTriple {
        disc_term: from_disc.div_exact_opt(&den).ok_or_else(|| not_divisible("B"))?,
        b_term: from_b.div_exact_opt(&den).ok_or_else(|| not_divisible("C"))?,
        root: (&ab.a * &square_part)
            .div_exact_opt(&(&tau_a * &common))
            .ok_or_else(|| not_divisible("r"))?,
        sqfree,
        square_part,
        common,
    };
    debug_assert!(t.equation_holds());
    Ok(t)
}

/// The pair `(a, b) = (2 A r / g, A C / g^2)` with `g = gcd(2, C)`: the twist
/// of the classified curve by `1/s`.
pub fn synthesize(t: &ClassificationTriple) -> Result<AbModel> {
    t.validate()?;
    let f = t.field();
    let g = gcd(&f.int(2), &t.b_term);
    let a = (&(&t.sqfree * &t.root) * 2)
        .div_exact_opt(&g)
        .ok_or_else(|| not_divisible("a"))?;
    let b = (&t.sqfree * &t.b_term)
        .div_exact_opt(&g.square())
        .ok_or_else(|| not_divisible("b"))?;
    let ab = AbModel::new(a, b)?;
    two_adic_profile(&ab).map_err(|e| Error::InvalidProfile(e.to_string()))?;
    Ok(ab)
}

/// Odd primes dividing `A B C s`.
fn odd_support(t: &ClassificationTriple) -> Vec<PrimeElement> {
    let prod = &(&(&t.sqfree * &t.disc_term) * &t.b_term) * &t.square_part;
    factor(&prod)
        .factors
        .into_iter()
        .map(|(p, _)| p)
        .filter(|p| !p.is_above(2))
        .collect()
}

/// The synthesized curve followed by its twists by `u s` for `u` a unit
/// modulo squares and `s` a square-free product of odd support primes.
pub fn twist_family(t: &ClassificationTriple) -> Result<Vec<AbModel>> {
    let base = synthesize(t)?;
    let primes = odd_support(t);
    let units = t.field().ctx().units_mod_squares();
    let mut out = Vec::new();
    for mask in 0u32..(1 << primes.len()) {
        let s = primes
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .fold(t.field().one(), |acc, (_, p)| &acc * &p.gen);
        for u in &units {
            out.push(base.quadratic_twist(&(&s * u)));
        }
    }
    Ok(out)
}

/// The triple of the 2-isogenous curve: `B` and `C` trade places.
pub fn isogeny_triple_swap(t: &ClassificationTriple) -> ClassificationTriple {
    let root = if t.is_supersingular() {
        t.root.clone()
    } else {
        -&t.root
    };
    ClassificationTriple {
        sqfree: t.sqfree.clone(),
        disc_term: t.b_term.clone(),
        b_term: t.disc_term.clone(),
        root,
        square_part: t.square_part.clone(),
        common: t.common.clone(),
    }
}

/// The 2-isogenous curve `E_{-2a, a^2 - 4b}`, made minimal above 2.
pub fn isogenous_normalized(ab: &AbModel) -> AbModel {
    minimal_at_two(&ab.two_isogenous())
}

/// A valid ordinary triple with `A = sqfree`, `r = root` and `C = 64 c`,
/// or `None` if these do not satisfy the conditions.
pub fn ordinary_triple(sqfree: &QuadInt, root: &QuadInt, c: &QuadInt) -> Option<ClassificationTriple> {
    let b_term = c * 64;
    let t = ClassificationTriple {
        disc_term: &(&root.square() * sqfree) - &b_term,
        b_term,
        root: root.clone(),
        sqfree: sqfree.clone(),
        square_part: sqfree.field().one(),
        common: sqfree.clone(),
    };
    t.validate().ok().map(|_| t)
}

fn conductor_is(g: &GlobalData, p: &PrimeElement, exp: u32) -> bool {
    let c = g.conductor();
    c.len() == 1 && c[0].1 == exp && c[0].0.gen.is_associate(&p.gen)
}

/// Odd prime-power conductor: `Some((prime, exponent))`.
pub fn odd_prime_power_conductor(g: &GlobalData) -> Option<(PrimeElement, u32)> {
    let c = g.conductor();
    (c.len() == 1 && !c[0].0.is_above(2)).then(|| c[0].clone())
}

/// Keeps one representative per isomorphism class.
#[derive(Default)]
pub(crate) struct Distinct {
    items: Vec<(GlobalData, &'static str)>,
}

impl Distinct {
    pub(crate) fn insert(&mut self, g: GlobalData, family: &'static str) -> Result<bool> {
        let j = g.minimal_model.invariants()?.j;
        for (h, _) in &self.items {
            if h.minimal_model.invariants()?.j == j && is_isomorphic(&h.minimal_model, &g.minimal_model)? {
                return Ok(false);
            }
        }
        self.items.push((g, family));
        Ok(true)
    }

    pub(crate) fn records(self) -> Vec<CurveRecord> {
        let mut out = self.records_unsorted();
        sort_records(&mut out);
        out
    }

    /// Records in insertion order.
    pub(crate) fn records_unsorted(self) -> Vec<CurveRecord> {
        self.items
            .iter()
            .map(|(g, fam)| CurveRecord::from_global(g, fam, &[], None))
            .collect()
    }
}

/// Deterministic order: conductor norm, then coefficients.
pub fn sort_records(recs: &mut [CurveRecord]) {
    recs.sort_by_cached_key(|r| (r.conductor_norm().clone(), r.family.clone(), r.model().to_string()));
}

/// The `(B, C)` shapes possible when `A` is a unit or an odd prime at a
/// prime of additive reduction, up to units and swapping.
pub fn good_twist_menu(field: Field) -> Vec<(QuadInt, QuadInt)> {
    let mut out: Vec<(QuadInt, QuadInt)> =
        field.units().iter().map(|u| (u * 64, field.one())).collect();
    if field.d() == 7 {
        let t6 = field.w().pow(6);
        let u6 = field.w().conj().pow(6);
        for sign in [1, -1] {
            out.push((&t6 * sign, u6.clone()));
            out.push((&u6 * sign, t6.clone()));
        }
    }
    if field.ctx().e2 == 2 {
        out.extend(field.units().iter().map(|u| (u.clone(), field.one())));
    }
    out
}

fn triple(sqfree: QuadInt, b: &QuadInt, c: &QuadInt, root: QuadInt) -> ClassificationTriple {
    let f = sqfree.field();
    ClassificationTriple {
        common: sqfree.clone(),
        sqfree,
        disc_term: b.clone(),
        b_term: c.clone(),
        root,
        square_part: f.one(),
    }
}

/// Base curves of the good-twist case: menu entries with `B + C` zero or a
/// unit times a square, together with their 2-isogenous curves.
pub fn good_twist_bases(field: Field) -> Vec<AbModel> {
    let units = field.ctx().units_mod_squares();
    let mut bases: Vec<AbModel> = Vec::new();
    for (b, c) in good_twist_menu(field) {
        let sum = &b + &c;
        for u in &units {
            let root = if sum.is_zero() {
                Some(field.zero())
            } else {
                sum.div_exact_opt(u).and_then(|q| q.sqrt_exact())
            };
            let Some(root) = root else { continue };
            if let Ok(ab) = synthesize(&triple(u.clone(), &b, &c, root)) {
                let iso = isogenous_normalized(&ab);
                for m in [ab, iso] {
                    if !bases.contains(&m) {
                        bases.push(m);
                    }
                }
            }
        }
    }
    bases
}

/// Twisting multipliers applied to `b` (as `E_{a m, b m^2}` or, for the
/// `a = 0` curves over `Q(i)`, `E_{0, b m}`) for the prime `p`.
fn twist_multipliers(base: &AbModel, p: &PrimeElement) -> Vec<(QuadInt, bool)> {
    let f = base.field();
    if f.d() == 1 && base.a.is_zero() {
        let mut out = Vec::new();
        for u in f.units() {
            for k in 1..=3 {
                out.push((u * &p.gen.pow(k), true));
            }
        }
        out
    } else {
        f.ctx()
            .units_mod_squares()
            .iter()
            .map(|u| (u * &p.gen, false))
            .collect()
    }
}

/// Curves of conductor `p^2` with a rational 2-torsion point that become
/// good at `p` after a twist, for odd primes of norm up to `bound`.
pub fn enumerate_good_twist(field: Field, bound: u64) -> Result<Vec<CurveRecord>> {
    let bases = good_twist_bases(field);
    let primes: Vec<PrimeElement> = primes_up_to(field, bound)
        .into_iter()
        .filter(|p| !p.is_above(2))
        .collect();
    let per_prime: Vec<Vec<CurveRecord>> = primes
        .par_iter()
        .map(|p| -> Result<Vec<CurveRecord>> {
            let mut found = Distinct::default();
            for base in &bases {
                for (m, on_b) in twist_multipliers(base, p) {
                    let model = if on_b {
                        AbModel::new(base.a.clone(), &base.b * &m)?
                    } else {
                        base.quadratic_twist(&m)
                    };
                    let g = global_data(&model.to_weierstrass())?;
                    if conductor_is(&g, p, 2) {
                        found.insert(g, GOOD_TWIST)?;
                    }
                }
            }
            Ok(found.records())
        })
        .collect::<Result<_>>()?;
    let mut out: Vec<CurveRecord> = per_prime.into_iter().flatten().collect();
    sort_records(&mut out);
    Ok(out)
}

/// Curves of conductor `p^2` all of whose twists are additive at `p`: the
/// menu entries with `B + C` of odd valuation at exactly one odd prime.
pub fn enumerate_additive(field: Field) -> Result<Vec<CurveRecord>> {
    let units = field.ctx().units_mod_squares();
    let mut found = Distinct::default();
    for (b, c) in good_twist_menu(field) {
        let sum = &b + &c;
        if sum.is_zero() {
            continue;
        }
        let fac = factor(&sum);
        let odd: Vec<&PrimeElement> = fac
            .factors
            .iter()
            .filter(|(_, k)| k % 2 == 1)
            .map(|(p, _)| p)
            .collect();
        let [p] = odd.as_slice() else { continue };
        if p.is_above(2) {
            continue;
        }
        for u in &units {
            let sqfree = u * &p.gen;
            let Some(root) = sum.div_exact_opt(&sqfree).and_then(|q| q.sqrt_exact()) else {
                continue;
            };
            let Ok(base) = synthesize(&triple(sqfree, &b, &c, root)) else {
                continue;
            };
            for curve in [base.clone(), isogenous_normalized(&base)] {
                for v in &units {
                    for s in [field.one(), p.gen.clone()] {
                        let g = global_data(&curve.quadratic_twist(&(v * &s)).to_weierstrass())?;
                        if conductor_is(&g, p, 2) {
                            found.insert(g, ADDITIVE)?;
                        }
                    }
                }
            }
        }
    }
    Ok(found.records())
}

/// A solution of `a^2 = u p^r + 64 eps` with `r` odd.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnSolution {
    pub a: QuadInt,
    pub unit: QuadInt,
    pub prime: PrimeElement,
    pub exponent: u32,
    /// `u p^r = 1` modulo `8 / e`, with `e` the ramification index of 2.
    /// Only over `Q(sqrt(-2))` does this match good reduction of the base
    /// at 2; the search decides that with Tate's algorithm instead.
    pub congruence: bool,
}

impl SnSolution {
    pub fn prime_power(&self) -> QuadInt {
        &self.unit * &self.prime.gen.pow(self.exponent)
    }

    /// `E_{a, 16 eps}`.
    pub fn base(&self) -> AbModel {
        let eps = self.a.field().ctx().epsilon.clone();
        AbModel::new(self.a.clone(), &eps * 16).expect("nonsingular")
    }
}

fn sn_modulus(field: Field) -> i64 {
    8 / field.ctx().e2 as i64
}

/// All solutions with `N(p^r) <= bound`, both signs of `a`, sorted.
pub fn setzer_neumann_solutions(field: Field, bound: u64) -> Vec<SnSolution> {
    let ctx = field.ctx();
    let sixty_four_eps = &ctx.epsilon * 64;
    let modulus = field.int(sn_modulus(field));
    let bound = BigInt::from(bound);
    let mut out: Vec<SnSolution> = primes_up_to(field, bound.clone().try_into().unwrap_or(u64::MAX))
        .par_iter()
        .filter(|p| !p.is_above(2))
        .flat_map_iter(|p| {
            let mut sols = Vec::new();
            let mut r = 1u32;
            while num_traits::pow(p.norm.clone(), r as usize) <= bound {
                let pr = p.gen.pow(r);
                for u in &ctx.units {
                    let upr = u * &pr;
                    if let Some(a) = (&upr + &sixty_four_eps).sqrt_exact() {
                        let congruence = modulus.divides(&(&upr - &field.one()));
                        for a in [a.clone(), -&a] {
                            sols.push(SnSolution {
                                a,
                                unit: u.clone(),
                                prime: p.clone(),
                                exponent: r,
                                congruence,
                            });
                        }
                    }
                }
                r += 2;
            }
            sols
        })
        .collect();
    out.sort_by(|x, y| (&x.prime, x.exponent, &x.a).cmp(&(&y.prime, y.exponent, &y.a)));
    out
}

/// Records for the multiplicative family: `E_{a,16 eps}` when it has
/// conductor `(p)`, and its twist by `u p` when that has conductor `(p)^2`.
pub fn setzer_neumann_search(field: Field, bound: u64) -> Result<Vec<CurveRecord>> {
    let sols = setzer_neumann_solutions(field, bound);
    let per: Vec<Vec<(GlobalData, &'static str)>> = sols
        .par_iter()
        .map(|s| -> Result<Vec<(GlobalData, &'static str)>> {
            let mut v = Vec::new();
            let base = s.base();
            let g = global_data(&base.to_weierstrass())?;
            if conductor_is(&g, &s.prime, 1) {
                v.push((g, SETZER_NEUMANN));
            }
            let tw = base.quadratic_twist(&(&s.unit * &s.prime.gen));
            let g = global_data(&tw.to_weierstrass())?;
            if conductor_is(&g, &s.prime, 2) {
                v.push((g, SETZER_NEUMANN_TWIST));
            }
            Ok(v)
        })
        .collect::<Result<_>>()?;
    let mut found = Distinct::default();
    for (g, fam) in per.into_iter().flatten() {
        found.insert(g, fam)?;
    }
    Ok(found.records())
}

/// The curve with invariants `c4 = u^2 + 16u + 256`, `c6 = (u-16)(u+8)(u+32)`
/// and discriminant `u^2 (u+16)^2`, as a model over `O_K`.
pub fn sporadic_base(u: &QuadInt) -> Result<WeierstrassModel> {
    let (c4, c6) = sporadic_invariants(u)?;
    Ok(WeierstrassModel::from_c4c6(&c4, &c6))
}

fn sporadic_invariants(u: &QuadInt) -> Result<(QuadInt, QuadInt)> {
    let f = u.field();
    if (u + &f.int(16)).is_zero() {
        return Err(Error::PreconditionViolated("u = -16".into()));
    }
    let c4 = &(&u.square() + &(u * 16)) + &f.int(256);
    let c6 = &(&(u - &f.int(16)) * &(u + &f.int(8))) * &(u + &f.int(32));
    Ok((c4, c6))
}

/// The three curves 2-isogenous to the sporadic base, as pairs `(a, b)`.
/// The last is `(-(u + 8), 16)`; with `+(u + 8)` one gets its twist by -1.
pub fn sporadic_isogenous(u: &QuadInt) -> Result<[AbModel; 3]> {
    let f = u.field();
    Ok([
        AbModel::new((u - &f.int(16)) * 2, &(&u.square() + &(u * 32)) + &f.int(256))?,
        AbModel::new((u + &f.int(32)) * 2, u.square())?,
        AbModel::new(-&(u + &f.int(8)), f.int(16))?,
    ])
}

/// Whether `x` is congruent to a square modulo 4.
pub fn is_square_mod4(x: &QuadInt) -> bool {
    let f = x.field();
    let four = f.int(4);
    crate::field_arith::Residues::new(&four)
        .iter()
        .any(|r| four.divides(&(&r.square() - x)))
}

/// The twist by `-u` of the sporadic base and of its three 2-isogenous
/// curves, for a unit `u`.
pub fn sporadic_family(u: &QuadInt) -> Result<Vec<CurveRecord>> {
    if !u.is_unit() {
        return Err(Error::PreconditionViolated(format!("{u} is not a unit")));
    }
    let minus_u = -u;
    let (c4, c6) = sporadic_invariants(u)?;
    let twisted = WeierstrassModel::from_c4c6(&(&c4 * &u.square()), &(&c6 * &(&minus_u * &u.square())));
    let mut models = vec![twisted];
    for ab in sporadic_isogenous(u)? {
        models.push(ab.quadratic_twist(&minus_u).to_weierstrass());
    }
    models
        .iter()
        .map(|m| Ok(CurveRecord::build(m, SPORADIC, &[], None)?.0))
        .collect()
}

/// Units `u` for which `u + 16` has a single prime factor.
pub fn sporadic_units(field: Field) -> Vec<QuadInt> {
    field
        .units()
        .iter()
        .filter(|u| factor(&(*u + &field.int(16))).factors.len() == 1)
        .cloned()
        .collect()
}

/// Closure of `e` under 2-isogenies, as global minimal models, `e` first.
pub fn two_isogeny_class(e: &WeierstrassModel) -> Result<Vec<WeierstrassModel>> {
    let mut class = vec![global_data(e)?.minimal_model];
    let mut i = 0;
    while i < class.len() && class.len() < 16 {
        let cur = class[i].clone();
        for x0 in two_division_roots(&cur) {
            let ab = AbModel::from_two_torsion(&cur, &x0)?;
            let iso = global_data(&ab.two_isogenous().to_weierstrass())?.minimal_model;
            let mut new = true;
            for m in &class {
                if is_isomorphic(m, &iso)? {
                    new = false;
                    break;
                }
            }
            if new {
                class.push(iso);
            }
        }
        i += 1;
    }
    Ok(class)
}

/// A curve in the 2-isogeny class of `rec` whose minimal discriminant has
/// odd valuation at the conductor prime.
pub fn odd_disc_in_isogeny_class(rec: &CurveRecord) -> Result<CurveRecord> {
    if rec.conductor.exponents != [1] {
        return Err(Error::PreconditionViolated("conductor is not prime".into()));
    }
    let e = rec.model();
    if two_division_roots(&e).is_empty() {
        return Err(Error::PreconditionViolated("no rational 2-torsion".into()));
    }
    let p = &rec.conductor_gens()[0];
    for m in two_isogeny_class(&e)? {
        let g = global_data(&m)?;
        let v = g
            .locals
            .iter()
            .find(|l| l.prime.gen.is_associate(p))
            .map_or(0, |l| l.v_min_disc);
        if v % 2 == 1 {
            return Ok(CurveRecord::from_global(&g, &rec.family, &[], None));
        }
    }
    Err(Error::CorollaryViolation(e.to_string()))
}

/// A candidate from the supersingular equations `r^2 = P + 1` and
/// `r^2 = P + eps` over `Q(i)` and `Q(sqrt(-2))`.
#[derive(Clone, Debug)]
pub struct SupersingularCandidate {
    pub model: AbModel,
    pub prime_power: QuadInt,
    /// Some twist by `1, eps, p, eps p` has good reduction above 2.
    pub good_twist_at_two: bool,
}

/// All candidates with `N(P) <= bound`; `WrongField` unless 2 ramifies.
pub fn supersingular_candidates(field: Field, bound: u64) -> Result<Vec<SupersingularCandidate>> {
    if !matches!(field.d(), 1 | 2) {
        return Err(Error::WrongField(field.d()));
    }
    let eps = field.ctx().epsilon.clone();
    let radius = ((bound as f64).sqrt() + 1.0).sqrt();
    let mut out = Vec::new();
    for root in field.elements_in_disk((0.0, 0.0), radius) {
        for shift in [field.one(), eps.clone()] {
            let pp = &root.square() - &shift;
            if pp.is_zero() || pp.norm() > BigInt::from(bound) {
                continue;
            }
            let fac = factor(&pp);
            let [(p, _)] = fac.factors.as_slice() else { continue };
            if p.is_above(2) {
                continue;
            }
            let Ok(model) = AbModel::new(&root * 2, shift.clone()) else { continue };
            let mut good = false;
            for s in [field.one(), eps.clone(), p.gen.clone(), &eps * &p.gen] {
                let g = global_data(&model.quadratic_twist(&s).to_weierstrass())?;
                if g.conductor().iter().all(|(q, _)| !q.is_above(2)) {
                    good = true;
                }
            }
            out.push(SupersingularCandidate { model, prime_power: pp, good_twist_at_two: good });
        }
    }
    Ok(out)
}

/// Every curve `E_{a,b}` with `N(b^2 (a^2 - 4b)) <= bound` and odd
/// prime-power conductor, one per isomorphism class.
pub fn prime_power_sweep(field: Field, bound: u64) -> Result<Vec<CurveRecord>> {
    let bound_big = BigInt::from(bound);
    let bmax = (bound as f64).sqrt().floor() as u64;
    let bs = field.elements_up_to(bmax);
    let hits: Vec<GlobalData> = bs
        .par_iter()
        .map(|b| -> Result<Vec<GlobalData>> {
            let nb = b.norm();
            let nb_f = nb.to_string().parse::<f64>().unwrap_or(f64::MAX);
            // |a - a0| |a + a0| = |a^2 - 4b| <= sqrt(bound) / N(b) with a0^2 = 4b,
            // so a is within the square root of that of a0 or -a0.
            let reach = ((bound as f64).sqrt() / nb_f).sqrt();
            let (re, im) = b.to_complex();
            let (m, th) = ((re * re + im * im).sqrt(), im.atan2(re));
            let a0 = (2.0 * m.sqrt() * (th / 2.0).cos(), 2.0 * m.sqrt() * (th / 2.0).sin());
            let mut cands: BTreeSet<QuadInt> = BTreeSet::new();
            cands.extend(field.elements_in_disk(a0, reach + 1e-6));
            cands.extend(field.elements_in_disk((-a0.0, -a0.1), reach + 1e-6));
            let mut out = Vec::new();
            for a in cands {
                let Ok(ab) = AbModel::new(a, b.clone()) else { continue };
                let df = ab.disc_factor();
                if df.norm() > bound_big {
                    continue;
                }
                let odd: Vec<_> = factor(&df)
                    .factors
                    .into_iter()
                    .filter(|(p, _)| !p.is_above(2))
                    .collect();
                if odd.len() != 1 {
                    continue;
                }
                let g = global_data(&ab.to_weierstrass())?;
                if odd_prime_power_conductor(&g).is_some() {
                    out.push(g);
                }
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    let mut found = Distinct::default();
    for g in hits {
        found.insert(g, SWEEP)?;
    }
    Ok(found.records())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve_models::kraus_criterion;
    use proptest::prelude::*;

    fn f(d: i64) -> Field {
        Field::new(d).unwrap()
    }

    #[test]
    fn classify_good_twist_base_over_d7() {
        let k = f(7);
        let s7 = k.sqrt_neg_d();
        let ab = AbModel::new(&s7 * 6, k.one()).unwrap();
        let t = classify(&ab, &ab.disc_factor()).unwrap();
        assert_eq!(t.sqfree, k.one());
        assert_eq!(t.disc_term, k.int(-64));
        assert_eq!(t.b_term, k.one());
        assert_eq!(t.root, &s7 * 3);
        // substituting directly: B = (a^2 - 4b)/4, C = 4b/4, r = a/2
        assert_eq!(t.disc_term, (&ab.a.square() - &k.int(4)).div_exact(&k.int(4)).unwrap());
    }

    #[test]
    fn classify_49a2_over_gaussian_field() {
        let k = f(1);
        let ab = AbModel::new(k.int(-42), k.int(-7)).unwrap();
        let t = classify(&ab, &k.int(-343)).unwrap();
        assert!(t.sqfree.is_associate(&k.int(-7)));
        assert!(t.equation_holds());
        // the additive case: A is divisible by the conductor prime
        assert!(k.int(7).divides(&t.sqfree));
        let back = synthesize(&t).unwrap();
        assert_eq!(back, ab);
    }

    #[test]
    fn synthesize_49a2_from_triple() {
        for k in Field::all().filter(|k| k.d() != 7) {
            let t = triple(k.int(-7), &k.int(-64), &k.one(), k.int(3));
            let ab = synthesize(&t).unwrap();
            assert_eq!(ab, AbModel::new(k.int(-42), k.int(-7)).unwrap(), "{k}");
        }
    }

    #[test]
    fn odd_prime_profile_first_row() {
        // (v(a), v(b)) = (0, 0) at p: profile (0, k, 0)
        let k = f(11);
        let ab = AbModel::new(k.int(1), k.int(16)).unwrap();
        let df = ab.disc_factor();
        let t = classify(&ab, &df).unwrap();
        check_profiles(&t, &df).unwrap();
        for pr in valuation_profiles(&t, &df) {
            if !pr.prime.is_above(2) {
                assert_eq!(pr.v, [0, pr.prime.valuation(&df).unwrap(), 0]);
            }
        }
    }

    #[test]
    fn classify_rejects_even_conductor_profiles() {
        let k = f(3);
        let ab = AbModel::new(k.int(2), k.int(2)).unwrap();
        assert!(matches!(classify(&ab, &ab.disc_factor()), Err(Error::NotOddConductor(_))));
    }

    #[test]
    fn swap_example_and_involution() {
        let k = f(7);
        let ab = AbModel::new(&k.sqrt_neg_d() * 6, k.one()).unwrap();
        let t = classify(&ab, &ab.disc_factor()).unwrap();
        let sw = isogeny_triple_swap(&t);
        assert_eq!((sw.disc_term.clone(), sw.b_term.clone()), (k.one(), k.int(-64)));
        assert_eq!(isogeny_triple_swap(&sw), t);
        let iso = isogenous_normalized(&ab);
        let t2 = classify(&iso, &iso.disc_factor()).unwrap();
        assert!(t2.equivalent(&sw), "{t2:?} vs {sw:?}");
    }

    #[test]
    fn swap_on_ordinary_rows_exchanges_two_adic_profile() {
        let k = f(11);
        let t = ordinary_triple(&k.one(), &k.int(3), &k.int(-1)).unwrap();
        let q = &k.ctx().two_primes[0];
        let prof = |t: &ClassificationTriple| {
            [&t.sqfree, &t.disc_term, &t.b_term].map(|z| q.valuation(z).unwrap())
        };
        assert_eq!(prof(&t), [0, 0, 6]);
        assert_eq!(prof(&isogeny_triple_swap(&t)), [0, 6, 0]);
    }

    #[test]
    fn converse_discriminant_formula() {
        for k in Field::all() {
            for (a, r, c) in [(1, 3, -1), (-7, 3, 1), (5, 1, 3), (1, 7, 5)] {
                let Some(t) = ordinary_triple(&k.int(a), &k.int(r), &k.int(c)) else { continue };
                let ab = synthesize(&t).unwrap();
                let g = gcd(&k.int(2), &t.b_term);
                let rhs = (&(&(&t.sqfree.pow(3) * &t.disc_term) * &t.b_term.square()) * 4)
                    .div_exact(&g.pow(6))
                    .unwrap();
                assert_eq!(ab.disc_factor(), rhs, "{k}");
            }
        }
    }

    #[test]
    fn twist_family_stays_good_outside_two_d() {
        let k = f(19);
        let t = ordinary_triple(&k.int(5), &k.int(1), &k.int(-1)).unwrap();
        let support: Vec<QuadInt> = odd_support(&t).into_iter().map(|p| p.gen).collect();
        let fam = twist_family(&t).unwrap();
        assert_eq!(fam.len(), (1 << support.len()) * 2);
        for ab in fam {
            let g = global_data(&ab.to_weierstrass()).unwrap();
            for (p, _) in g.conductor() {
                assert!(p.is_above(2) || support.iter().any(|s| s.is_associate(&p.gen)), "{p}");
            }
        }
    }

    #[test]
    fn menu_sum_65_is_never_square_times_unit() {
        for k in Field::all() {
            let sum = k.int(65);
            assert!(k.units().iter().all(|u| sum.div_exact(u).unwrap().sqrt_exact().is_none()));
        }
    }

    #[test]
    fn good_twist_bases_only_in_three_fields() {
        for k in Field::all() {
            let has = !good_twist_bases(k).is_empty();
            assert_eq!(has, matches!(k.d(), 1 | 2 | 7), "{k}");
        }
        let k = f(7);
        let target = AbModel::new(&k.sqrt_neg_d() * 6, k.one()).unwrap();
        assert!(good_twist_bases(k).iter().any(|b| b == &target || b == &target.quadratic_twist(&k.int(-1))));
        let k = f(2);
        let e256 = AbModel::new(&k.sqrt_neg_d() * 2, k.int(-1)).unwrap().to_weierstrass();
        assert!(good_twist_bases(k)
            .iter()
            .any(|b| b.to_weierstrass().invariants().unwrap().j == e256.invariants().unwrap().j));
    }

    #[test]
    fn good_twist_d2_is_256a1_family() {
        let k = f(2);
        let recs = enumerate_good_twist(k, 100).unwrap();
        assert!(!recs.is_empty());
        let j = k.int(8000);
        for r in &recs {
            assert_eq!(r.model().invariants().unwrap().j.to_integral(), Some(j.clone()));
            assert_eq!(r.conductor.exponents, [2]);
        }
    }

    #[test]
    fn additive_quadruple_over_d11() {
        let recs = enumerate_additive(f(11)).unwrap();
        assert_eq!(recs.len(), 4);
        for r in &recs {
            assert_eq!(r.conductor_gens()[0].canonical(), f(11).int(7));
            assert_eq!(r.conductor.exponents, [2]);
        }
        assert!(enumerate_additive(f(7)).unwrap().is_empty());
        assert!(enumerate_additive(f(3)).unwrap().is_empty());
    }

    #[test]
    fn sn_base_discriminant_shape() {
        for k in [f(1), f(3), f(11)] {
            let eps = k.ctx().epsilon.clone();
            for s in setzer_neumann_solutions(k, 2000) {
                let expected = &(&s.prime_power() * &eps.square()) * 256;
                assert_eq!(s.base().disc_factor(), expected);
            }
        }
    }

    #[test]
    fn sn_records_have_prime_conductor_and_odd_valuation() {
        let k = f(3);
        let recs = setzer_neumann_search(k, 3000).unwrap();
        assert!(recs.iter().any(|r| r.family == SETZER_NEUMANN));
        for r in &recs {
            let exp = if r.family == SETZER_NEUMANN { 1 } else { 2 };
            assert_eq!(r.conductor.exponents, [exp]);
            if r.family == SETZER_NEUMANN {
                assert_eq!(r.disc_valuations[0] % 2, 1);
                assert_eq!(odd_disc_in_isogeny_class(r).unwrap().disc_valuations, r.disc_valuations);
            }
        }
    }

    #[test]
    fn sporadic_isogenous_discriminants() {
        for k in Field::all() {
            for u in k.units() {
                let u16 = u + &k.int(16);
                let [x, y, z] = sporadic_isogenous(u).unwrap();
                // D(E) = 2^8 times the stated discriminants
                assert_eq!(x.disc_factor(), &(&(-u) * &u16.pow(4)) * 256);
                assert_eq!(y.disc_factor(), &(&u.pow(4) * &u16) * 256);
                assert_eq!(z.disc_factor(), &(u * &u16) * 256);
                let base = sporadic_base(u).unwrap();
                let (c4, c6) = sporadic_invariants(u).unwrap();
                let lhs = &(&c4.pow(3) - &c6.square());
                assert_eq!(lhs, &(&(&u.square() * &u16.square()) * 1728));
                assert_eq!(base.discriminant(), &(&u.square() * &u16.square()) * 6i64.pow(12));
            }
        }
    }

    #[test]
    fn sporadic_isogenous_are_isogenous() {
        for k in [f(1), f(3), f(19)] {
            for u in k.units() {
                let class = two_isogeny_class(&sporadic_base(u).unwrap()).unwrap();
                assert!(class.len() >= 4);
                for ab in sporadic_isogenous(u).unwrap() {
                    let e = ab.to_weierstrass();
                    let hit = class.iter().any(|m| is_isomorphic(m, &e).unwrap());
                    assert!(hit, "{k} u={u} {ab:?}");
                }
            }
        }
    }

    #[test]
    fn sporadic_17_over_rationals_like_fields() {
        for k in [f(2), f(7), f(11)] {
            let recs = sporadic_family(&k.one()).unwrap();
            assert_eq!(recs.len(), 4);
            for r in &recs {
                assert!(r.conductor_gens().iter().all(|g| g.norm() % 17 == BigInt::from(0)));
                assert!(r.conductor.exponents.iter().all(|&e| e == 1));
            }
            let vals: BTreeSet<u32> = recs.iter().flat_map(|r| r.disc_valuations.clone()).collect();
            assert!(vals.contains(&1) && vals.contains(&4), "{vals:?}");
        }
    }

    #[test]
    fn kraus_for_sporadic_twists() {
        for k in Field::all() {
            for q in &k.ctx().two_primes {
                for u in k.units() {
                    let (c4, c6) = sporadic_invariants(u).unwrap();
                    let untwisted = kraus_criterion(&c4, &c6, q).unwrap().holds;
                    assert_eq!(untwisted, is_square_mod4(&-u), "{k} u={u}");
                    let (t4, t6) = (&c4 * &u.square(), &c6 * &(&(-u) * &u.square()));
                    assert!(kraus_criterion(&t4, &t6, q).unwrap().holds);
                }
            }
        }
    }

    #[test]
    fn seventeen_family_odd_valuation_partner() {
        let k = f(11);
        let recs = sporadic_family(&k.one()).unwrap();
        let four = recs.iter().find(|r| r.disc_valuations == [4]).unwrap();
        let odd = odd_disc_in_isogeny_class(four).unwrap();
        assert_eq!(odd.disc_valuations, [1]);
        let no_two = CurveRecord::build(&WeierstrassModel::from_ints(k, [0, -1, 1, 0, 0]), "x", &[], None)
            .unwrap()
            .0;
        assert!(matches!(odd_disc_in_isogeny_class(&no_two), Err(Error::PreconditionViolated(_))));
    }

    #[test]
    fn supersingular_equations_give_no_curves() {
        for d in [1, 2] {
            let c = supersingular_candidates(f(d), 2000).unwrap();
            assert!(!c.is_empty());
            assert!(c.iter().all(|x| !x.good_twist_at_two), "d={d}");
        }
        let c1 = supersingular_candidates(f(1), 20).unwrap();
        let threes = c1.iter().filter(|c| c.prime_power == f(1).int(3)).count();
        assert!(threes > 0);
        assert!(matches!(supersingular_candidates(f(7), 10), Err(Error::WrongField(7))));
    }

    fn arb_triple() -> impl Strategy<Value = (usize, i64, i64, i64, i64, i64, i64)> {
        (0usize..9, -9i64..=9, -4i64..=4, -9i64..=9, -4i64..=4, -9i64..=9, -4i64..=4)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]
        #[test]
        fn triple_round_trip((i, ax, ay, rx, ry, cx, cy) in arb_triple()) {
            let k = Field::all().nth(i).unwrap();
            let sqfree = k.elt(ax, ay);
            prop_assume!(!sqfree.is_zero());
            let Some(t) = ordinary_triple(&sqfree, &k.elt(rx, ry), &k.elt(cx, cy)) else {
                return Ok(());
            };
            let ab = synthesize(&t).unwrap();
            let back = classify(&ab, &ab.disc_factor()).unwrap();
            prop_assert!(back.equivalent(&t), "{:?} vs {:?}", back, t);
            check_profiles(&back, &ab.disc_factor()).unwrap();
            let iso = isogenous_normalized(&ab);
            let swapped = classify(&iso, &iso.disc_factor()).unwrap();
            prop_assert!(swapped.equivalent(&isogeny_triple_swap(&t)));
        }
    }
}
