use crate::field_arith::{PrimeElement, QuadInt, Residues};
use crate::{Error, Result};

/// Outcome of the integrality test at a prime above 2, with the witnesses
/// that made it succeed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KrausOutcome {
    pub holds: bool,
    pub a1: Option<QuadInt>,
    pub a3: Option<QuadInt>,
}

impl KrausOutcome {
    fn fail() -> KrausOutcome {
        KrausOutcome {
            holds: false,
            a1: None,
            a3: None,
        }
    }
}

/// Tests `q^k | z`, with `k` counted in powers of the prime.
struct Local {
    mods: Vec<Residues>,
}

impl Local {
    fn new(q: &PrimeElement, max: u32) -> Local {
        let mods = (0..=max).map(|k| Residues::new(&q.gen.pow(k))).collect();
        Local { mods }
    }

    fn divisible(&self, z: &QuadInt, k: u32) -> bool {
        self.mods[k as usize].is_zero_mod(z)
    }
}

/// Whether there is a Weierstrass model integral at `q` (a prime above 2)
/// with invariants `c4, c6`. Congruences "mod 2^k" are read locally, as
/// divisibility by `q^(k e)`.
pub fn kraus_criterion(c4: &QuadInt, c6: &QuadInt, q: &PrimeElement) -> Result<KrausOutcome> {
    let field = c4.field();
    if !q.is_above(2) {
        return Err(Error::PreconditionViolated(format!("{q} does not lie above 2")));
    }
    let lhs = &(&c4.square() * c4) - &c6.square();
    if lhs.is_zero() || lhs.div_exact_opt(&field.int(1728)).is_none() {
        return Err(Error::PreconditionViolated(
            "1728 does not divide c4^3 - c6^2".into(),
        ));
    }
    let e = q.e();
    let loc = Local::new(q, 8 * e);
    let v4 = q.valuation_capped(c4, 4 * e);

    if v4 == 0 {
        // a1^2 = -c6 mod 4
        let reps = Residues::new(&q.gen.pow(e));
        let a1 = reps.iter().find(|a1| loc.divisible(&(&a1.square() + c6), 2 * e));
        return Ok(match a1 {
            Some(a1) => KrausOutcome {
                holds: true,
                a1: Some(a1),
                a3: None,
            },
            None => KrausOutcome::fail(),
        });
    }

    let a3_reps: Vec<QuadInt> = Residues::new(&q.gen.pow(e)).iter().collect();

    if v4 >= 4 * e {
        // a3^2 = c6/8 mod 4, i.e. 8 a3^2 = c6 mod 32
        let a3 = a3_reps
            .iter()
            .find(|a3| loc.divisible(&(&(a3.square() * 8) - c6), 5 * e));
        return Ok(match a3 {
            Some(a3) => KrausOutcome {
                holds: true,
                a1: None,
                a3: Some(a3.clone()),
            },
            None => KrausOutcome::fail(),
        });
    }

    // 0 < v(c4) < 4e. The three congruences only see a1 modulo 32.
    for a1 in Residues::new(&q.gen.pow(5 * e)).iter() {
        let a1sq = a1.square();
        let a1_4 = a1sq.square();
        let d = &(&(-&(&a1_4 * &a1sq)) + &(&(&a1sq * c4) * 3)) + &(c6 * 2);
        if !loc.divisible(&d, 4 * e) {
            continue;
        }
        let m = &a1_4 - c4;
        if !loc.divisible(&(&(&(&a1sq * &d) * 4) - &m.square()), 8 * e) {
            continue;
        }
        // a3^2 = d/16 mod 4, i.e. 16 a3^2 = d mod 64
        if let Some(a3) = a3_reps
            .iter()
            .find(|a3| loc.divisible(&(&(a3.square() * 16) - &d), 6 * e))
        {
            return Ok(KrausOutcome {
                holds: true,
                a1: Some(a1),
                a3: Some(a3.clone()),
            });
        }
    }
    Ok(KrausOutcome::fail())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve_models::WeierstrassModel;
    use crate::field_arith::Field;
    use rand::{Rng, SeedableRng};

    fn f(d: i64) -> Field {
        Field::new(d).unwrap()
    }

    /// Independent check: with `a2` normalized to 0 (3 is a unit at q) and
    /// `a1`, `a3` reduced modulo 2, an integral model exists iff the `a4`
    /// and `a6` forced by `c4`, `c6` are integral at `q`.
    fn integral_model_exists(c4: &QuadInt, c6: &QuadInt, q: &PrimeElement) -> bool {
        let e = q.e();
        let reps: Vec<QuadInt> = Residues::new(&q.gen.pow(e)).iter().collect();
        let val_at_least = |z: &QuadInt, k: u32| q.valuation_capped(z, k) >= k;
        for a1 in &reps {
            let b2 = a1.square();
            for a3 in &reps {
                // 48 a4 = b2^2 - c4 - 24 a1 a3
                let a4_num = &(&b2.square() - c4) - &(&(a1 * a3) * 24);
                if !val_at_least(&a4_num, 4 * e) {
                    continue;
                }
                // 1728 a6 = b2^3 - 3 b2 c4 - 2 c6 - 432 a3^2
                let a6_num = &(&(&(&b2.square() * &b2) - &(&(&b2 * c4) * 3)) - &(c6 * 2))
                    - &(&a3.square() * 432);
                if val_at_least(&a6_num, 6 * e) {
                    return true;
                }
            }
        }
        false
    }

    #[test]
    fn unit_c4_with_square_c6() {
        let k = f(1);
        let q = &k.ctx().two_primes[0];
        let e = WeierstrassModel::from_ints(k, [1, 0, 0, 0, 1]);
        let (c4, c6) = e.c_invariants();
        assert_eq!(q.valuation(&c4), Some(0));
        let out = kraus_criterion(&c4, &c6, q).unwrap();
        assert!(out.holds);
        assert!(out.a1.is_some());
    }

    #[test]
    fn eleven_a3_over_eleven() {
        let k = f(11);
        let q = &k.ctx().two_primes[0];
        let out = kraus_criterion(&k.int(16), &k.int(-152), q).unwrap();
        assert!(out.holds);
        assert!(out.a3.is_some());
        let (ld, _) = crate::curve_models::tate_local(
            &WeierstrassModel::from_ints(k, [0, -1, 1, 0, 0]),
            q,
        );
        assert!(ld.is_good());
    }

    #[test]
    fn precondition_violation() {
        let k = f(2);
        let q = &k.ctx().two_primes[0];
        assert!(matches!(
            kraus_criterion(&k.int(1), &k.int(2), q),
            Err(Error::PreconditionViolated(_))
        ));
    }

    fn random_invariants(k: Field, rng: &mut impl Rng) -> Option<(QuadInt, QuadInt)> {
        let mut r = || k.elt(rng.gen_range(-6..=6), rng.gen_range(-6..=6));
        let e = WeierstrassModel::new([r(), r(), r(), r(), r()]);
        if e.is_singular() {
            return None;
        }
        let (c4, c6) = e.c_invariants();
        let q = k.ctx().two_primes[0].gen.clone();
        let choice = rng.gen_range(0..5);
        let (c4, c6) = match choice {
            0 => (c4, c6),
            // Quadratic twists by elements divisible by q.
            1 => {
                let l = &q * &k.elt(rng.gen_range(-2..=2), rng.gen_range(-2..=2));
                (&c4 * &l.square(), &c6 * &(&l.square() * &l))
            }
            2 => (&c4 * &q.square(), &c6 * &(&q.square() * &q)),
            // Scale down, keeping the precondition.
            _ => {
                let q4 = q.pow(4);
                let q6 = q.pow(6);
                (c4.div_exact_opt(&q4)?, c6.div_exact_opt(&q6)?)
            }
        };
        let lhs = &(&c4.square() * &c4) - &c6.square();
        if lhs.is_zero() || lhs.div_exact_opt(&k.int(1728)).is_none() {
            return None;
        }
        Some((c4, c6))
    }

    #[test]
    fn agrees_with_brute_force_search() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for k in Field::all() {
            let mut seen = [0usize; 2];
            let mut n = 0;
            while n < 200 {
                let Some((c4, c6)) = random_invariants(k, &mut rng) else { continue };
                n += 1;
                for q in &k.ctx().two_primes {
                    let got = kraus_criterion(&c4, &c6, q).unwrap().holds;
                    let want = integral_model_exists(&c4, &c6, q);
                    assert_eq!(got, want, "{k}: c4={c4}, c6={c6} at {q}");
                    seen[got as usize] += 1;
                }
            }
            assert!(seen[0] > 0 && seen[1] > 0, "{k}: {seen:?}");
        }
    }

    #[test]
    fn witnesses_give_integral_models() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let k = f(7);
        for _ in 0..100 {
            let Some((c4, c6)) = random_invariants(k, &mut rng) else { continue };
            for q in &k.ctx().two_primes {
                let out = kraus_criterion(&c4, &c6, q).unwrap();
                assert_eq!(out.holds, out.a1.is_some() || out.a3.is_some());
            }
        }
    }
}
