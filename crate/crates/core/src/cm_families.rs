//! Twists of the CM base curves with odd prime-square conductor.

use num_bigint::BigInt;
use num_integer::Integer;
use rayon::prelude::*;

use crate::curve_models::WeierstrassModel;
use crate::field_arith::rational::jacobi;
use crate::field_arith::{primes_up_to, Field, PrimeElement, QuadInt, Residues};
use crate::records::CurveRecord;
use crate::{Error, Result};

/// The fixed CM curve over `K` with bad reduction only at the ramified prime.
#[derive(Clone, Debug)]
pub struct CmBaseCurve {
    pub field: Field,
    pub model: WeierstrassModel,
    pub label: &'static str,
}

/// Base-change models over `Q`. For `d = 2` the sign of `a2` was fixed by
/// requiring the twist by `(1 + sqrt(-2)) sqrt(-2)` to have odd conductor.
const BASE_CURVES: [(u32, &str, [i64; 5]); 9] = [
    (1, "64.a4", [0, 0, 0, 1, 0]),
    (2, "256.d1", [0, -4, 0, 2, 0]),
    (3, "27.a4", [0, 0, 0, 0, 16]),
    (7, "49.a4", [1, -1, 0, -2, -1]),
    (11, "121.b2", [0, -1, 1, -7, 10]),
    (19, "361.a2", [0, 0, 1, -38, 90]),
    (43, "1849.b2", [0, 0, 1, -860, 9707]),
    (67, "4489.b2", [0, 0, 1, -7370, 243528]),
    (163, "26569.a2", [0, 0, 1, -2174420, 1234136692]),
];

pub fn cm_base_curve(field: Field) -> CmBaseCurve {
    let (_, label, a) = BASE_CURVES
        .iter()
        .find(|(d, _, _)| *d == field.d())
        .expect("one base curve per field");
    CmBaseCurve {
        field,
        model: WeierstrassModel::from_ints(field, *a),
        label,
    }
}

/// The squares of residues prime to 2, modulo `m`.
fn odd_squares_mod(field: Field, m: i64) -> Vec<QuadInt> {
    let res = Residues::new(&field.int(m));
    let mut out: Vec<QuadInt> = res
        .iter()
        .filter(is_odd)
        .map(|x| res.reduce(&x.square()))
        .collect();
    out.sort();
    out.dedup();
    out
}

fn congruent(a: &QuadInt, b: &QuadInt, m: &QuadInt) -> bool {
    m.divides(&(a - b))
}

fn is_odd(z: &QuadInt) -> bool {
    z.field().ctx().two_primes.iter().all(|q| !q.gen.divides(z))
}

/// `pi = u^2 sqrt(-d) (mod 4)` with `u` odd, or `u^2 (1 + sqrt(-2))` for `d = 2`.
pub fn quad_cm_admissible(pi: &QuadInt) -> Result<bool> {
    let f = pi.field();
    if matches!(f.d(), 1 | 3) {
        return Err(Error::WrongField(f.d()));
    }
    let shift = if f.d() == 2 {
        f.one() + f.sqrt_neg_d()
    } else {
        f.sqrt_neg_d()
    };
    let four = f.int(4);
    Ok(odd_squares_mod(f, 4)
        .iter()
        .any(|s| congruent(pi, &(s * &shift), &four)))
}

/// `pi = -1 +- 2i (mod 8)` over `Q(i)`.
pub fn quartic_cm_admissible(pi: &QuadInt) -> Result<bool> {
    let f = pi.field();
    if f.d() != 1 {
        return Err(Error::WrongField(f.d()));
    }
    let eight = f.int(8);
    Ok([f.elt(-1, 2), f.elt(-1, -2)]
        .iter()
        .any(|c| congruent(pi, c, &eight)))
}

/// Both sextic conditions over `Q(sqrt(-3))`: `pi = sqrt(-3) w^(2k) (mod 4)`
/// and `pi = +-4 (mod sqrt(-3)^3)`.
pub fn sextic_cm_admissible(pi: &QuadInt) -> Result<bool> {
    let f = pi.field();
    if f.d() != 3 {
        return Err(Error::WrongField(f.d()));
    }
    let s = f.sqrt_neg_d();
    let w = f.w();
    let four = f.int(4);
    let first = (0..3).any(|k| congruent(pi, &(&s * &w.pow(2 * k)), &four));
    let s3 = s.pow(3);
    let second = congruent(pi, &f.int(4), &s3) || congruent(pi, &f.int(-4), &s3);
    Ok(first && second)
}

/// Whether `K(alpha^(1/degree))/K` is unramified above 2 (and above 3 when
/// `degree = 6`), for `alpha` a unit at those primes.
pub fn unramified_kummer_test(alpha: &QuadInt, degree: u32) -> Result<bool> {
    let f = alpha.field();
    match degree {
        2 => {
            let four = f.int(4);
            Ok(odd_squares_mod(f, 4).iter().any(|s| congruent(alpha, s, &four)))
        }
        4 => {
            if f.d() != 1 {
                return Err(Error::WrongField(f.d()));
            }
            let eight = f.int(8);
            Ok(congruent(alpha, &f.one(), &eight) || congruent(alpha, &f.elt(1, 4), &eight))
        }
        6 => {
            if f.d() != 3 {
                return Err(Error::WrongField(f.d()));
            }
            let s3 = f.sqrt_neg_d().pow(3);
            let cube_class = congruent(alpha, &f.one(), &s3) || congruent(alpha, &f.int(-1), &s3);
            Ok(unramified_kummer_test(alpha, 2)? && cube_class)
        }
        _ => Err(Error::PreconditionViolated(format!("degree {degree}"))),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TwistKind {
    Quadratic,
    Quartic,
    Sextic,
}

impl TwistKind {
    pub fn for_field(f: Field) -> TwistKind {
        match f.d() {
            1 => TwistKind::Quartic,
            3 => TwistKind::Sextic,
            _ => TwistKind::Quadratic,
        }
    }

    fn family(self) -> &'static str {
        match self {
            TwistKind::Quadratic => "cm-quadratic",
            TwistKind::Quartic => "cm-quartic",
            TwistKind::Sextic => "cm-sextic",
        }
    }
}

pub fn is_admissible(pi: &QuadInt) -> bool {
    match TwistKind::for_field(pi.field()) {
        TwistKind::Quadratic => quad_cm_admissible(pi),
        TwistKind::Quartic => quartic_cm_admissible(pi),
        TwistKind::Sextic => sextic_cm_admissible(pi),
    }
    .expect("field matches twist kind")
}

/// The twist of the base curve attached to an admissible generator.
pub fn cm_twist(pi: &QuadInt) -> WeierstrassModel {
    let f = pi.field();
    match TwistKind::for_field(f) {
        TwistKind::Quadratic => cm_base_curve(f)
            .model
            .quadratic_twist(&(pi * &f.sqrt_neg_d())),
        TwistKind::Quartic => WeierstrassModel::quartic_twist(pi).unwrap(),
        TwistKind::Sextic => {
            WeierstrassModel::sextic_twist(&(&f.sqrt_neg_d().pow(3) * pi)).unwrap()
        }
    }
}

/// Records plus the counts behind the density statements.
#[derive(Clone, Debug)]
pub struct CmCatalog {
    pub records: Vec<CurveRecord>,
    /// Primes not above 2 and not ramified (and not above 3 for `d = 3`).
    pub primes_tested: usize,
    /// Primes with an admissible generator.
    pub admissible: usize,
    /// Admissible primes whose twist failed the conductor check.
    pub failures: Vec<String>,
}

impl CmCatalog {
    pub fn density(&self) -> f64 {
        self.admissible as f64 / self.primes_tested as f64
    }
}

fn excluded(p: &PrimeElement) -> bool {
    p.is_above(2) || p.field().ctx().ramified.iter().any(|r| r.gen == p.gen)
}

/// Every prime of norm `<= bound`, every generator: test admissibility,
/// build the twist and check by Tate's algorithm that its conductor is `(pi)^2`.
pub fn cm_catalog(field: Field, bound: u64) -> CmCatalog {
    cm_catalog_with(field, bound, true)
}

/// As [`cm_catalog`], optionally skipping the conductor verification (used
/// for density counts over large ranges).
pub fn cm_catalog_with(field: Field, bound: u64, verify: bool) -> CmCatalog {
    let primes: Vec<PrimeElement> = primes_up_to(field, bound)
        .into_iter()
        .filter(|p| !excluded(p))
        .collect();
    let results: Vec<(bool, Option<std::result::Result<CurveRecord, String>>)> = primes
        .par_iter()
        .map(|p| {
            let gen = field
                .units()
                .iter()
                .map(|u| u * &p.gen)
                .find(is_admissible);
            let Some(pi) = gen else { return (false, None) };
            if !verify {
                return (true, None);
            }
            (true, Some(verified_record(&pi, p)))
        })
        .collect();
    let mut cat = CmCatalog {
        records: Vec::new(),
        primes_tested: primes.len(),
        admissible: 0,
        failures: Vec::new(),
    };
    for (adm, rec) in results {
        cat.admissible += adm as usize;
        match rec {
            Some(Ok(r)) => cat.records.push(r),
            Some(Err(e)) => cat.failures.push(e),
            None => {}
        }
    }
    cat
}

fn verified_record(pi: &QuadInt, p: &PrimeElement) -> std::result::Result<CurveRecord, String> {
    let e = cm_twist(pi);
    let kind = TwistKind::for_field(pi.field());
    let (rec, g) = CurveRecord::build(&e, kind.family(), &[], None).map_err(|e| e.to_string())?;
    let cond = g.conductor();
    if cond.len() == 1 && cond[0].0.gen == p.gen && cond[0].1 == 2 {
        Ok(rec)
    } else {
        Err(format!("twist by {pi}: conductor {:?}", cond.iter().map(|(q, e)| (q.gen.to_string(), *e)).collect::<Vec<_>>()))
    }
}

/// What is known about twisting the base curve of `k` over another field `l`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CrossFieldTwist {
    /// `k = l`: use the same-field admissibility tests.
    SameField,
    /// The completions agree, so a twist of the given kind removes the bad
    /// reduction at the prime below the conductor.
    Twist(TwistKind),
}

/// Whether `Q_p(sqrt(-t))` and `Q_p(sqrt(-d))` coincide, i.e. `t d` is a
/// square in `Q_p`.
fn same_completion(d: u32, t: u32, p: u64) -> bool {
    let mut r = BigInt::from(d) * BigInt::from(t);
    let pb = BigInt::from(p);
    let mut v = 0;
    while r.is_multiple_of(&pb) {
        r /= &pb;
        v += 1;
    }
    if v % 2 == 1 {
        return false;
    }
    if p == 2 {
        r.mod_floor(&BigInt::from(8)) == BigInt::from(1)
    } else {
        jacobi(&r, &pb) == 1
    }
}

/// The prime below the conductor of the base curve of `k` over `Q`.
fn base_prime(k: Field) -> u64 {
    match k.d() {
        1 | 2 => 2,
        d => d as u64,
    }
}

pub fn cross_field_cm_twist(k: Field, l: Field) -> Option<CrossFieldTwist> {
    if k == l {
        return Some(CrossFieldTwist::SameField);
    }
    let p = base_prime(k);
    same_completion(k.d(), l.d(), p).then(|| CrossFieldTwist::Twist(TwistKind::for_field(k)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve_models::global_data;
    use num_traits::One;

    fn f(d: i64) -> Field {
        Field::new(d).unwrap()
    }

    #[test]
    fn base_curves_have_cm_j_and_bad_reduction_only_at_ramified_prime() {
        // j-invariants of the maximal orders.
        let js: [(u32, i64); 9] = [
            (1, 1728),
            (2, 8000),
            (3, 0),
            (7, -3375),
            (11, -32768),
            (19, -884736),
            (43, -884736000),
            (67, -147197952000),
            (163, -262537412640768000),
        ];
        for k in Field::all() {
            let base = cm_base_curve(k);
            let inv = base.model.invariants().unwrap();
            let j = js.iter().find(|(d, _)| *d == k.d()).unwrap().1;
            assert_eq!(inv.j.to_integral(), Some(k.int(j)), "{k}");
            let g = global_data(&base.model).unwrap();
            let ram = &k.ctx().ramified;
            for (p, _) in g.conductor() {
                assert!(ram.iter().any(|r| r.gen == p.gen), "{k}: bad at {p}");
            }
        }
    }

    #[test]
    fn d2_base_sign_gives_odd_conductor_twist() {
        let k = f(2);
        let pi = k.elt(1, 1);
        let e = cm_twist(&pi);
        let g = global_data(&e).unwrap();
        assert_eq!(g.conductor().len(), 1);
        assert!(g.conductor()[0].0.gen.is_associate(&pi));
        assert_eq!(g.conductor()[0].1, 2);
        let other = WeierstrassModel::from_ints(k, [0, 4, 0, 2, 0]).quadratic_twist(&(&pi * &k.w()));
        assert!(global_data(&other).unwrap().conductor().iter().any(|(p, _)| p.is_above(2)));
    }

    #[test]
    fn quadratic_conditions() {
        let k7 = f(7);
        assert!(quad_cm_admissible(&k7.sqrt_neg_d()).unwrap());
        assert!(quad_cm_admissible(&(&k7.sqrt_neg_d() + 4)).unwrap());
        assert!(!quad_cm_admissible(&-&k7.sqrt_neg_d()).unwrap());
        // Only 1 is an odd square mod 4 when d = 7.
        assert_eq!(odd_squares_mod(k7, 4), vec![k7.one()]);
        let k2 = f(2);
        assert!(quad_cm_admissible(&k2.elt(1, 1)).unwrap());
        assert!(quad_cm_admissible(&k2.elt(-1, 1)).unwrap());
        assert!(!quad_cm_admissible(&k2.elt(1, -1)).unwrap());
        let k11 = f(11);
        let w = k11.w();
        let s = k11.sqrt_neg_d();
        let four = k11.int(4);
        let squares = odd_squares_mod(k11, 4);
        assert_eq!(squares.len(), 3);
        for k in 0..3 {
            assert!(squares.iter().any(|q| congruent(q, &w.pow(2 * k), &four)));
            assert!(quad_cm_admissible(&(&s * &w.pow(2 * k))).unwrap());
        }
        assert!(quad_cm_admissible(&k11.one()).is_ok_and(|b| !b));
        assert!(matches!(quad_cm_admissible(&f(1).one()), Err(Error::WrongField(1))));
    }

    #[test]
    fn quartic_conditions() {
        let k = f(1);
        assert!(quartic_cm_admissible(&k.elt(-1, 2)).unwrap());
        assert!(!quartic_cm_admissible(&k.one()).unwrap());
        // Two of the 32 odd classes mod 8; with four associates per prime
        // this is a quarter of the primes.
        let res = Residues::new(&k.int(8));
        let odd: Vec<QuadInt> = res.iter().filter(is_odd).collect();
        let pass = odd.iter().filter(|z| quartic_cm_admissible(z).unwrap()).count();
        assert_eq!((pass, odd.len()), (2, 32));
    }

    #[test]
    fn quartic_twist_of_minus_one_plus_two_i() {
        let k = f(1);
        let pi = k.elt(-1, 2);
        let g = global_data(&cm_twist(&pi)).unwrap();
        assert_eq!(g.conductor().len(), 1);
        assert!(g.conductor()[0].0.gen.is_associate(&pi));
        assert_eq!(g.conductor()[0].1, 2);
    }

    #[test]
    fn sextic_conditions() {
        let k = f(3);
        assert!(!sextic_cm_admissible(&k.one()).unwrap());
        // alpha_1 = sqrt(-3)^3 * 4 gives good reduction at sqrt(-3).
        let a1 = &k.sqrt_neg_d().pow(3) * 4;
        let e = WeierstrassModel::sextic_twist(&a1).unwrap();
        let g = global_data(&e).unwrap();
        let s = &k.ctx().ramified[0];
        assert!(g.local(s).map_or(true, |l| l.f == 0));
    }

    #[test]
    fn kummer_tests() {
        let k = f(19);
        assert!(unramified_kummer_test(&k.one(), 2).unwrap());
        assert!(unramified_kummer_test(&k.int(5), 2).unwrap());
        let k1 = f(1);
        assert!(unramified_kummer_test(&k1.elt(1, 4), 4).unwrap());
        assert!(unramified_kummer_test(&k1.int(9), 4).unwrap());
        assert!(!unramified_kummer_test(&k1.elt(-1, 0), 4).unwrap());
        let k3 = f(3);
        // w is not a square mod 4: enumerate every square mod 4.
        let res = Residues::new(&k3.int(4));
        let w = k3.w();
        assert!(!res.iter().any(|x| res.congruent(&x.square(), &w)));
        assert!(!unramified_kummer_test(&w, 6).unwrap());
        assert!(matches!(unramified_kummer_test(&k.one(), 4), Err(Error::WrongField(19))));
        assert!(matches!(unramified_kummer_test(&k.one(), 6), Err(Error::WrongField(19))));
    }

    #[test]
    fn kummer_test_constant_on_unit_square_multiples() {
        for k in Field::all() {
            let res = Residues::new(&k.int(8));
            for a in res.iter().filter(is_odd).take(40) {
                let base = unramified_kummer_test(&a, 2).unwrap();
                for u in k.units() {
                    assert_eq!(unramified_kummer_test(&(&a * &u.square()), 2).unwrap(), base);
                }
            }
        }
    }

    #[test]
    fn admissibility_depends_only_on_residue() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for k in Field::all() {
            let m = match TwistKind::for_field(k) {
                TwistKind::Quadratic => k.int(4),
                TwistKind::Quartic => k.int(8),
                TwistKind::Sextic => k.int(36),
            };
            for p in primes_up_to(k, 300).iter().filter(|p| !excluded(p)) {
                let shift = &m * &k.elt(rng.gen_range(-50..50), rng.gen_range(-50..50));
                assert_eq!(is_admissible(&p.gen), is_admissible(&(&p.gen + &shift)));
            }
        }
    }

    #[test]
    fn catalog_records_verify() {
        for d in [1, 3, 7, 19] {
            let k = f(d);
            let cat = cm_catalog(k, 400);
            assert!(cat.failures.is_empty(), "{k}: {:?}", cat.failures);
            assert_eq!(cat.records.len(), cat.admissible);
            for r in &cat.records {
                assert_eq!(r.conductor.exponents, vec![2]);
                assert!(!r.disc_min().norm().is_one());
            }
        }
    }

    #[test]
    fn catalog_includes_minus_one_plus_two_i() {
        let k = f(1);
        let cat = cm_catalog(k, 10);
        let pi = k.elt(-1, 2);
        assert!(cat
            .records
            .iter()
            .any(|r| r.conductor_gens()[0].is_associate(&pi)));
    }

    #[test]
    fn other_fields_give_nothing() {
        for k in Field::all() {
            for l in Field::all() {
                let r = cross_field_cm_twist(k, l);
                if k == l {
                    assert_eq!(r, Some(CrossFieldTwist::SameField));
                } else {
                    assert_eq!(r, None, "{k} over {l}");
                }
            }
        }
        // Q_7(sqrt(-7)) = Q_7(sqrt(-7 * 4)): the local test itself.
        assert!(same_completion(7, 28, 7));
        assert!(!same_completion(1, 2, 2));
    }
}
