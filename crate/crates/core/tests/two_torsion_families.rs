use std::collections::BTreeSet;

use num_bigint::BigInt;
use nine_fields::cm_families::cm_catalog;
use nine_fields::curve_models::is_isomorphic;
use nine_fields::field_arith::{factor, primes_up_to, Residues};
use nine_fields::two_torsion::*;
use nine_fields::{CurveRecord, Field, QuadInt};

fn field(d: i64) -> Field {
    Field::new(d).unwrap()
}

fn conductor_primes(recs: &[CurveRecord]) -> BTreeSet<QuadInt> {
    recs.iter().map(|r| r.conductor_gens()[0].canonical()).collect()
}

#[test]
fn additive_case_is_the_49a_class() {
    for d in [1, 2, 11, 43, 67, 163] {
        let k = field(d);
        let recs = enumerate_additive(k).unwrap();
        assert_eq!(recs.len(), 4, "d={d}");
        let js: BTreeSet<String> = recs
            .iter()
            .map(|r| r.model().invariants().unwrap().j.to_integral().unwrap().to_string())
            .collect();
        assert_eq!(js, BTreeSet::from(["-3375".to_string(), "16581375".to_string()]), "d={d}");
        for r in &recs {
            assert_eq!(r.conductor_gens()[0].canonical(), k.int(7));
            assert_eq!(r.conductor.exponents, [2]);
        }
    }
    for d in [3, 7, 19] {
        assert!(enumerate_additive(field(d)).unwrap().is_empty(), "d={d}");
    }
}

/// Odd primes `p` with a generator `b` of `p` or `p^3` that is `-1 +- 2i mod 8`.
fn gaussian_good_twist_primes(bound: u64) -> BTreeSet<QuadInt> {
    let k = field(1);
    let eight = k.int(8);
    let targets = [k.elt(-1, 2), k.elt(-1, -2)];
    primes_up_to(k, bound)
        .into_iter()
        .filter(|p| !p.is_above(2))
        .filter(|p| {
            [p.gen.clone(), p.gen.pow(3)].iter().any(|g| {
                k.units().iter().any(|u| {
                    let b = u * g;
                    targets.iter().any(|t| eight.divides(&(&b - t)))
                })
            })
        })
        .map(|p| p.gen.canonical())
        .collect()
}

#[test]
fn good_twist_primes_match_cm_catalogs() {
    let bound = 1500;
    for d in [7, 1, 2] {
        let k = field(d);
        let recs = enumerate_good_twist(k, bound).unwrap();
        let ramified: BTreeSet<QuadInt> =
            k.ctx().ramified.iter().map(|p| p.gen.canonical()).collect();
        let got: BTreeSet<QuadInt> = conductor_primes(&recs)
            .into_iter()
            .filter(|p| !ramified.contains(p))
            .collect();
        let cat = cm_catalog(k, bound);
        let want = conductor_primes(&cat.records);
        if d == 1 {
            // the quartic catalog only twists by p; b = u p^3 adds more primes
            assert!(want.is_subset(&got));
            assert_eq!(got, gaussian_good_twist_primes(bound));
            assert!(got.len() > want.len());
        } else {
            assert_eq!(got, want, "d={d}");
        }
        for r in &recs {
            let j = r.model().invariants().unwrap().j;
            let j = j.to_integral().expect("integral j");
            let allowed: &[i64] = match d {
                7 => &[-3375, 16581375],
                1 => &[1728, 287496],
                _ => &[8000],
            };
            assert!(allowed.iter().any(|&x| j == k.int(x)), "d={d} j={j}");
        }
    }
    for d in [3, 11, 19, 43, 67, 163] {
        assert!(enumerate_good_twist(field(d), 200).unwrap().is_empty(), "d={d}");
    }
}

/// Independent search over `a`: factor `a^2 - 64 eps` and keep the values
/// that are a unit times an odd prime to an odd power.
fn sn_oracle(k: Field, bound: u64) -> BTreeSet<QuadInt> {
    let eps = k.ctx().epsilon.clone();
    let radius = ((bound as f64).sqrt() + 64.0).sqrt();
    let mut out = BTreeSet::new();
    for a in k.elements_in_disk((0.0, 0.0), radius) {
        let v = &a.square() - &(&eps * 64);
        if v.is_zero() || v.norm() > BigInt::from(bound) {
            continue;
        }
        let fac = factor(&v);
        if let [(p, r)] = fac.factors.as_slice() {
            if r % 2 == 1 && !p.is_above(2) {
                out.insert(a);
            }
        }
    }
    out
}

#[test]
fn setzer_neumann_agrees_with_oracle() {
    let bound = 10_000;
    for k in Field::all() {
        let sols = setzer_neumann_solutions(k, bound);
        let got: BTreeSet<QuadInt> = sols.iter().map(|s| s.a.clone()).collect();
        assert_eq!(got, sn_oracle(k, bound), "{k}");
        assert!(!sols.is_empty(), "{k}");
        println!("{k}: {} solutions, smallest {:?}", sols.len(), sols.first().map(|s| s.prime_power().to_string()));
    }
}

/// `a` is congruent to an odd square modulo 4.
fn square_mod_four(a: &QuadInt) -> bool {
    let k = a.field();
    let four = Residues::new(&k.int(4));
    let found = four.units().any(|x| {
        let sq = x.square();
        four.congruent(&sq, a)
    });
    found
}

#[test]
fn setzer_neumann_records_and_congruence() {
    let bound = 10_000;
    for k in Field::all() {
        let sols = setzer_neumann_solutions(k, bound);
        let recs = setzer_neumann_search(k, bound).unwrap();
        let eps2 = k.ctx().epsilon.square();
        for s in &sols {
            assert_eq!(s.base().disc_factor(), &(&s.prime_power() * &eps2) * 256);
            let base = s.base().to_weierstrass();
            let in_recs = recs
                .iter()
                .filter(|r| r.family == SETZER_NEUMANN)
                .any(|r| is_isomorphic(&r.model(), &base).unwrap());
            assert_eq!(in_recs, square_mod_four(&s.a), "{k}: {s:?}");
        }
        let passing: BTreeSet<QuadInt> =
            sols.iter().filter(|s| s.congruence).map(|s| s.prime_power()).collect();
        let emitted: BTreeSet<QuadInt> = sols
            .iter()
            .filter(|s| square_mod_four(&s.a))
            .map(|s| s.prime_power())
            .collect();
        println!(
            "{k}: {} pass the congruence, {} give base curves, {} in both",
            passing.len(),
            emitted.len(),
            passing.intersection(&emitted).count()
        );
        // the true condition is a = square mod 4; the congruence on u p^r
        // matches it only for d = 2, is too weak for d = 1, 7 and too strong
        // where 2 is inert
        match k.d() {
            2 => assert_eq!(passing, emitted, "{k}"),
            1 | 7 => {
                assert!(emitted.is_subset(&passing), "{k}");
                assert!(emitted.len() < passing.len(), "{k}");
            }
            _ => {
                assert!(passing.is_subset(&emitted), "{k}");
                assert!(passing.len() < emitted.len(), "{k}");
            }
        }
        for r in &recs {
            if r.family == SETZER_NEUMANN {
                assert_eq!(r.conductor.exponents, [1]);
                assert_eq!(r.disc_valuations[0] % 2, 1);
                let odd = odd_disc_in_isogeny_class(r).unwrap();
                assert_eq!(odd.disc_valuations[0] % 2, 1);
            } else {
                assert_eq!(r.conductor.exponents, [2]);
            }
            assert!(r.szpiro());
        }
    }
}

#[test]
fn sporadic_conductors() {
    for k in Field::all() {
        let recs = sporadic_family(&k.one()).unwrap();
        let split = factor(&k.int(17)).factors.len() == 2;
        for r in &recs {
            assert!(r.conductor_gens().iter().all(|g| g.norm() % 17 == BigInt::from(0)));
            assert!(r.conductor.exponents.iter().all(|&e| e == 1));
            assert_eq!(r.conductor.gens.len(), if split { 2 } else { 1 }, "{k}");
        }
    }
    let gauss = field(1);
    for u in [gauss.w(), -&gauss.w()] {
        for r in sporadic_family(&u).unwrap() {
            assert_eq!(r.conductor_norm(), &BigInt::from(257));
        }
    }
    let eis = field(3);
    let eps2 = eis.ctx().epsilon.square();
    for u in [eps2.clone(), eps2.conj()] {
        for r in sporadic_family(&u).unwrap() {
            assert_eq!(r.conductor_norm(), &BigInt::from(241));
            assert!(odd_disc_in_isogeny_class(&r).is_ok());
        }
    }
}

#[test]
fn sweep_is_covered_by_the_families() {
    let bound = 1_000_000;
    for k in Field::all() {
        let swept = prime_power_sweep(k, bound).unwrap();
        let mut known: Vec<CurveRecord> = Vec::new();
        known.extend(enumerate_good_twist(k, 50).unwrap());
        known.extend(enumerate_additive(k).unwrap());
        known.extend(setzer_neumann_search(k, 10_000).unwrap());
        for u in k.units() {
            known.extend(sporadic_family(u).unwrap());
        }
        let known_models: Vec<_> = known.iter().map(|r| r.model()).collect();
        let mut missing = Vec::new();
        for r in &swept {
            let class = two_isogeny_class(&r.model()).unwrap();
            let hit = class.iter().any(|m| {
                let j = m.invariants().unwrap().j;
                known_models.iter().any(|n| {
                    n.invariants().unwrap().j == j && is_isomorphic(m, n).unwrap()
                })
            });
            if !hit {
                missing.push(r.model().to_string());
            }
        }
        println!("{k}: {} swept curves", swept.len());
        assert!(missing.is_empty(), "{k}: {missing:?}");
    }
}
