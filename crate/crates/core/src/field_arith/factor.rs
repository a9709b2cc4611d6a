use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;

use super::rational::{factor_int, kronecker_prime, sqrt_mod_prime};
use super::{ideal_generator, Field, PrimeElement, QuadInt, Splitting};

/// `q = unit * prod(gen_i ^ e_i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub unit: QuadInt,
    pub factors: Vec<(PrimeElement, u32)>,
}

impl Factorization {
    pub fn product(&self) -> QuadInt {
        let mut acc = self.unit.clone();
        for (p, e) in &self.factors {
            acc = &acc * &p.gen.pow(*e);
        }
        acc
    }

    pub fn primes(&self) -> impl Iterator<Item = &PrimeElement> {
        self.factors.iter().map(|(p, _)| p)
    }

    pub fn exponent(&self, p: &PrimeElement) -> u32 {
        self.factors
            .iter()
            .find(|(q, _)| q.gen == p.gen)
            .map_or(0, |(_, e)| *e)
    }
}

/// A root of `w`'s minimal polynomial `X^2 - tX + n` modulo `p`.
fn root_of_min_poly(field: Field, p: &BigInt) -> BigInt {
    let t = BigInt::from(field.t());
    let n = BigInt::from(field.n());
    if *p == BigInt::from(2) {
        for r in 0..2 {
            let r = BigInt::from(r);
            if (&r * &r - &t * &r + &n).is_multiple_of(p) {
                return r;
            }
        }
        unreachable!("2 is inert");
    }
    // X = (t + sqrt(t^2 - 4n)) / 2 mod p
    let disc = &t * &t - &n * 4;
    let s = sqrt_mod_prime(&disc, p).expect("p splits or ramifies");
    let inv2 = (p + 1u32) / 2u32;
    ((t + s) * inv2).mod_floor(p)
}

/// The primes of `O_K` above the rational prime `p`.
pub fn split_rational_prime(p: &BigInt, field: Field) -> Vec<PrimeElement> {
    let kind = match kronecker_prime(field.disc(), p) {
        1 => Splitting::Split,
        -1 => Splitting::Inert,
        _ => Splitting::Ramified,
    };
    if kind == Splitting::Inert {
        return vec![PrimeElement {
            gen: QuadInt::from_int(field, p.clone()),
            p: p.clone(),
            kind,
            norm: p * p,
        }];
    }
    let r = root_of_min_poly(field, p);
    let w_minus_r = field.w() - QuadInt::from_int(field, r);
    let gen = ideal_generator(&[QuadInt::from_int(field, p.clone()), w_minus_r]).unwrap();
    debug_assert_eq!(&gen.norm(), p);
    let first = PrimeElement {
        gen: gen.clone(),
        p: p.clone(),
        kind,
        norm: p.clone(),
    };
    if kind == Splitting::Ramified {
        return vec![first];
    }
    let second = PrimeElement {
        gen: gen.conj().canonical(),
        p: p.clone(),
        kind,
        norm: p.clone(),
    };
    let mut out = vec![first, second];
    out.sort();
    out
}

/// Factor a nonzero element into canonical prime generators and a unit.
pub fn factor(q: &QuadInt) -> Factorization {
    assert!(!q.is_zero(), "factoring zero");
    let field = q.field();
    let mut rest = q.clone();
    let mut factors = Vec::new();
    if !rest.is_unit() {
        // Rational content first: it is cheap to strip.
        for (p, _) in factor_int(&q.norm()) {
            let p = BigInt::from(p);
            for prime in split_rational_prime(&p, field) {
                let mut e = 0;
                while let Some(next) = rest.div_exact_opt(&prime.gen) {
                    rest = next;
                    e += 1;
                }
                if e > 0 {
                    factors.push((prime, e));
                }
            }
        }
    }
    debug_assert!(rest.norm().is_one(), "leftover {rest} from {q}");
    factors.sort_by(|a, b| a.0.cmp(&b.0));
    Factorization {
        unit: rest,
        factors,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(d: i64) -> Field {
        Field::new(d).unwrap()
    }

    #[test]
    fn two_over_seven_splits() {
        let k = f(7);
        let ps = split_rational_prime(&BigInt::from(2), k);
        assert_eq!(ps.len(), 2);
        assert!(ps.iter().all(|p| p.kind == Splitting::Split));
        let tau = k.w();
        assert!(ps.iter().any(|p| p.gen.is_associate(&tau)));
        assert!(ps.iter().any(|p| p.gen.is_associate(&tau.conj())));
    }

    #[test]
    fn two_over_eleven_is_inert() {
        let ps = split_rational_prime(&BigInt::from(2), f(11));
        assert_eq!(ps.len(), 1);
        assert_eq!(ps[0].kind, Splitting::Inert);
        assert_eq!(ps[0].norm, BigInt::from(4));
    }

    #[test]
    fn eleven_ramifies() {
        let k = f(11);
        let ps = split_rational_prime(&BigInt::from(11), k);
        assert_eq!(ps.len(), 1);
        assert_eq!(ps[0].kind, Splitting::Ramified);
        assert!(ps[0].gen.is_associate(&k.elt(-1, 2)));
    }

    #[test]
    fn split_norms_are_consistent() {
        for k in Field::all() {
            for p in super::super::rational::primes_below(400) {
                let pb = BigInt::from(p);
                let ps = split_rational_prime(&pb, k);
                let prod: BigInt = ps.iter().map(|q| q.norm.clone()).product();
                match ps[0].kind {
                    Splitting::Inert => assert_eq!(prod, &pb * &pb),
                    Splitting::Split => {
                        assert_eq!(ps.len(), 2);
                        assert_eq!(prod, &pb * &pb);
                        assert!(!ps[0].gen.is_associate(&ps[1].gen));
                    }
                    Splitting::Ramified => {
                        assert_eq!(prod, pb.clone());
                        let g2 = ps[0].gen.square();
                        assert!(g2.div_exact(&k.int(p as i64)).unwrap().is_unit());
                    }
                }
                for q in &ps {
                    assert_eq!(q.gen.norm(), q.norm);
                }
            }
        }
    }

    #[test]
    fn factor_minus_63_over_7() {
        let k = f(7);
        let fac = factor(&k.int(-63));
        assert_eq!(fac.product(), k.int(-63));
        let exps: Vec<(BigInt, u32)> = fac.factors.iter().map(|(p, e)| (p.p.clone(), *e)).collect();
        assert_eq!(exps, vec![(BigInt::from(7), 2), (BigInt::from(3), 2)]);
        assert!(fac.unit.is_unit());
    }

    #[test]
    fn factor_unit_and_prime() {
        let k = f(1);
        let fac = factor(&k.w());
        assert!(fac.factors.is_empty());
        assert_eq!(fac.unit, k.w());
        let fac = factor(&k.elt(16, 1));
        assert_eq!(fac.factors.len(), 1);
        assert_eq!(fac.factors[0].0.norm, BigInt::from(257));
    }

    #[test]
    fn factor_round_trip_random() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for k in Field::all() {
            for _ in 0..200 {
                let q = k.elt(rng.gen_range(-100000..100000), rng.gen_range(-100000..100000));
                if q.is_zero() {
                    continue;
                }
                let fac = factor(&q);
                assert_eq!(fac.product(), q);
                let n: BigInt = fac
                    .factors
                    .iter()
                    .map(|(p, e)| num_traits::pow(p.norm.clone(), *e as usize))
                    .product();
                assert_eq!(n, q.norm());
                assert!(!fac.unit.is_zero());
            }
        }
    }
}
