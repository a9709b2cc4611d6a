//! The ten acceptance criteria, each run against the library with pinned
//! bounds and tolerances.

use std::collections::BTreeSet;
use std::fmt;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use anyhow::{ensure, Result};
use nine_fields::cm_families::cm_catalog;
use nine_fields::curve_models::{is_isomorphic, kraus_criterion, szpiro_check};
use nine_fields::field_arith::{factor, Residues};
use nine_fields::mod2_square_disc::{
    field_pq, rs_specialize, search_square_disc_hits, RsFamily, KNOWN_EXAMPLES,
};
use nine_fields::odd_torsion::{
    compare_with_table, enumerate_torsion, enumerate_torsion3_eisenstein, fermat_cubic_points,
    fermat_point_shape_ok,
};
use nine_fields::two_torsion::{
    classify, enumerate_additive, isogenous_normalized, isogeny_triple_swap, odd_disc_in_isogeny_class,
    ordinary_triple, setzer_neumann_search, setzer_neumann_solutions, sporadic_family, synthesize,
    SETZER_NEUMANN, SETZER_NEUMANN_TWIST,
};
use nine_fields::{AbModel, CurveRecord, Field, PrimeElement, QuadInt, WeierstrassModel};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Outcome of one criterion.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {:>2}. {} ({:.1} s): {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.elapsed.as_secs_f64(),
            self.detail
        )
    }
}

pub const NAMES: [&str; 10] = [
    "odd torsion table",
    "square-discriminant examples",
    "CM densities",
    "conductor (7)^2 quadruple",
    "sporadic families",
    "multiplicative 2-torsion family",
    "Kraus criterion vs brute force",
    "Szpiro bound",
    "algebraic identities",
    "Fermat cubic counts",
];

/// Runs criteria, collecting every emitted record for the Szpiro check.
pub struct Acceptance {
    seed: u64,
    emitted: Vec<CurveRecord>,
}

impl Acceptance {
    pub fn new(seed: u64) -> Acceptance {
        Acceptance { seed, emitted: Vec::new() }
    }

    /// Run the criteria in `ids` (in order), calling `report` after each.
    pub fn run(&mut self, ids: &[u8], mut report: impl FnMut(&Outcome)) -> Vec<Outcome> {
        let mut out = Vec::new();
        for &id in ids {
            let t = Instant::now();
            let res = catch_unwind(AssertUnwindSafe(|| self.criterion(id)));
            let (passed, detail) = match res {
                Ok(Ok(detail)) => (true, detail),
                Ok(Err(e)) => (false, format!("{e:#}")),
                Err(p) => {
                    let msg = p
                        .downcast_ref::<String>()
                        .cloned()
                        .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                        .unwrap_or_default();
                    (false, format!("panicked: {msg}"))
                }
            };
            let o = Outcome {
                id,
                name: NAMES.get(id as usize - 1).copied().unwrap_or("unknown"),
                passed,
                detail,
                elapsed: t.elapsed(),
            };
            report(&o);
            out.push(o);
        }
        out
    }

    fn criterion(&mut self, id: u8) -> Result<String> {
        match id {
            1 => self.odd_torsion_table(),
            2 => self.square_disc_examples(),
            3 => self.cm_densities(),
            4 => self.additive_quadruple(),
            5 => self.sporadic(),
            6 => self.setzer_neumann(),
            7 => kraus_vs_brute_force(self.seed),
            8 => self.szpiro(),
            9 => identities(self.seed),
            10 => fermat_counts(),
            _ => anyhow::bail!("no criterion {id}"),
        }
    }

    fn odd_torsion_table(&mut self) -> Result<String> {
        let t = Instant::now();
        let mut rows = 0;
        for k in Field::all() {
            for ell in [3, 5, 7] {
                if ell == 3 && k.d() == 3 {
                    continue;
                }
                let found = enumerate_torsion(ell, k)?;
                let cmp = compare_with_table(k, ell, &found);
                ensure!(cmp.is_exact(), "{k}, l = {ell}: {cmp:?}");
                rows += found.len();
                self.emitted.extend(found.into_iter().map(|c| c.record));
            }
        }
        let k3 = Field::new(3)?;
        let open = enumerate_torsion3_eisenstein(1_000_000);
        let curves: Vec<_> = open.iter().map(|c| c.curve.clone()).collect();
        let cmp = compare_with_table(k3, 3, &curves);
        ensure!(cmp.missing.is_empty() && cmp.disc_mismatch.is_empty(), "Q(sqrt(-3)), l = 3: {cmp:?}");
        ensure!(
            curves.iter().all(|c| c.record.disc_min().norm() <= BigInt::from(1_000_000)),
            "Q(sqrt(-3)) search exceeded its bound"
        );
        self.emitted.extend(curves.into_iter().map(|c| c.record));
        let secs = t.elapsed().as_secs_f64();
        ensure!(secs <= 300.0, "took {secs:.0} s, limit 300 s");
        Ok(format!(
            "{rows} curves match the table exactly in all nine fields; {} in the open family over Q(sqrt(-3)) up to norm 10^6",
            open.len()
        ))
    }

    fn square_disc_examples(&mut self) -> Result<String> {
        let mut norms = Vec::new();
        for ex in KNOWN_EXAMPLES {
            let t = Instant::now();
            let pq = field_pq(ex.d)?;
            let k = pq.field();
            let hits = search_square_disc_hits(ex.d, pq.example_bound)?;
            let target = ex.model();
            let mut found = None;
            for h in &hits {
                if is_isomorphic(&h.record.model(), &target)? {
                    found = Some(h);
                    break;
                }
            }
            let Some(hit) = found else { anyhow::bail!("d={}: example not found", ex.d) };
            let r = &hit.record;
            ensure!(r.conductor_norm() == &BigInt::from(ex.conductor_norm), "d={}: norm {}", ex.d, r.conductor_norm());
            ensure!(r.conductor.exponents == [1], "d={}: conductor not prime", ex.d);
            ensure!(r.conductor_gens()[0].is_associate(&ex.conductor_gen()), "d={}: wrong prime", ex.d);
            ensure!(r.disc_valuations == [2], "d={}: valuation {:?}", ex.d, r.disc_valuations);
            let seed = hits
                .iter()
                .find(|h| h.record.label.as_deref() == Some(pq.base_label))
                .ok_or_else(|| anyhow::anyhow!("d={}: base change of {} not found", ex.d, pq.base_label))?;
            ensure!(seed.record.conductor.exponents == [1], "d={}: seed conductor", ex.d);
            ensure!(seed.record.conductor_gens()[0].is_associate(&k.sqrt_neg_d()), "d={}: seed conductor", ex.d);
            ensure!(seed.record.disc_min().sqrt_exact().is_some(), "d={}: seed discriminant not a square", ex.d);
            let secs = t.elapsed().as_secs_f64();
            ensure!(secs <= 600.0, "d={}: took {secs:.0} s, limit 600 s", ex.d);
            norms.push(format!("d={}: {} (v=2)", ex.d, ex.conductor_norm));
            self.emitted.extend(hits.into_iter().map(|h| h.record));
        }
        Ok(format!("{}; all five base changes have conductor (sqrt(-d)) and square discriminant", norms.join(", ")))
    }

    fn cm_densities(&mut self) -> Result<String> {
        let mut parts = Vec::new();
        for (d, target) in [(7, 0.5), (1, 0.25), (3, 1.0 / 6.0)] {
            let cat = cm_catalog(Field::new(d)?, 10_000);
            ensure!(cat.failures.is_empty(), "d={d}: {:?}", cat.failures);
            ensure!(cat.records.len() == cat.admissible, "d={d}: records and admissible primes differ");
            ensure!(cat.records.iter().all(|r| r.conductor.exponents == [2]), "d={d}: conductor not (pi)^2");
            let got = cat.density();
            ensure!((got - target).abs() <= 0.05, "d={d}: density {got:.4}, want {target:.4} +- 0.05");
            parts.push(format!("d={d}: {}/{} = {got:.3}", cat.admissible, cat.primes_tested));
            self.emitted.extend(cat.records);
        }
        Ok(parts.join(", "))
    }

    fn additive_quadruple(&mut self) -> Result<String> {
        for d in [1, 2, 11, 43, 67, 163] {
            let k = Field::new(d)?;
            let recs = enumerate_additive(k)?;
            ensure!(recs.len() == 4, "d={d}: {} curves", recs.len());
            for r in &recs {
                ensure!(r.conductor_gens()[0].is_associate(&k.int(7)) && r.conductor.exponents == [2], "d={d}: conductor");
            }
            self.emitted.extend(recs);
        }
        for d in [3, 7, 19] {
            let n = enumerate_additive(Field::new(d)?)?.len();
            ensure!(n == 0, "d={d}: {n} curves, want none");
        }
        Ok("four curves of conductor (7)^2 for d=1,2,11,43,67,163; none for d=3,7,19".into())
    }

    fn sporadic(&mut self) -> Result<String> {
        for k in Field::all() {
            let recs = sporadic_family(&k.one())?;
            let split = factor(&k.int(17)).factors.len() == 2;
            for r in &recs {
                ensure!(
                    r.conductor_gens().iter().all(|g| &g.norm() % 17 == BigInt::from(0)),
                    "{k}: conductor not supported on 17"
                );
                ensure!(r.conductor.exponents.iter().all(|&e| e == 1), "{k}: not semistable");
                ensure!(r.conductor.gens.len() == if split { 2 } else { 1 }, "{k}: conductor {:?}", r.conductor);
            }
            self.emitted.extend(recs);
            // the twist by -u satisfies Kraus at every prime above 2
            for u in k.units() {
                let (c4, c6) = sporadic_invariants(u);
                let (t4, t6) = (&c4 * &u.square(), &c6 * &(&(-u) * &u.square()));
                let four = k.int(4);
                ensure!(four.divides(&(&t6 + &u.pow(6))), "{k}, u={u}: c6 != -u^6 mod 4");
                for q in &k.ctx().two_primes {
                    ensure!(kraus_criterion(&t4, &t6, q)?.holds, "{k}, u={u}: Kraus fails at {q}");
                }
            }
        }
        let gauss = Field::new(1)?;
        for u in [gauss.w(), -&gauss.w()] {
            for r in sporadic_family(&u)? {
                ensure!(r.conductor_norm() == &BigInt::from(257), "u={u}: norm {}", r.conductor_norm());
                self.emitted.push(r);
            }
        }
        let eis = Field::new(3)?;
        let eps2 = eis.ctx().epsilon.square();
        for u in [eps2.clone(), eps2.conj()] {
            for r in sporadic_family(&u)? {
                ensure!(r.conductor_norm() == &BigInt::from(241), "u={u}: norm {}", r.conductor_norm());
                self.emitted.push(r);
            }
        }
        Ok("17 in all nine fields, 257 for u=+-i, 241 for u=eps^2; -u twists pass Kraus".into())
    }

    fn setzer_neumann(&mut self) -> Result<String> {
        let bound = 10_000;
        let mut parts = Vec::new();
        for k in Field::all() {
            let sols = setzer_neumann_solutions(k, bound);
            let got: BTreeSet<QuadInt> = sols.iter().map(|s| s.a.clone()).collect();
            ensure!(got == sn_oracle(k, bound), "{k}: solutions differ from the search over a");
            let eps2 = k.ctx().epsilon.square();
            for s in &sols {
                ensure!(s.exponent % 2 == 1 && !s.prime.is_above(2), "{k}: {s:?}");
                ensure!(s.base().disc_factor() == &(&s.prime_power() * &eps2) * 256, "{k}: discriminant of {s:?}");
            }
            let recs = setzer_neumann_search(k, bound)?;
            for r in &recs {
                let want: &[u32] = if r.family == SETZER_NEUMANN { &[1] } else { &[2] };
                ensure!(
                    r.family == SETZER_NEUMANN || r.family == SETZER_NEUMANN_TWIST,
                    "{k}: unexpected family {}",
                    r.family
                );
                ensure!(r.conductor.exponents == want, "{k}: conductor {:?} for {}", r.conductor, r.family);
                if r.family == SETZER_NEUMANN {
                    let odd = odd_disc_in_isogeny_class(r)?;
                    ensure!(odd.disc_valuations[0] % 2 == 1, "{k}: even valuation");
                }
            }
            parts.push(format!("{}: {}/{}", k.d(), sols.len(), recs.len()));
            self.emitted.extend(recs);
        }
        Ok(format!("solutions/records per d: {}", parts.join(", ")))
    }

    fn szpiro(&mut self) -> Result<String> {
        if self.emitted.is_empty() {
            let k = Field::new(11)?;
            self.emitted.extend(enumerate_torsion(5, k)?.into_iter().map(|c| c.record));
        }
        let mut failures = Vec::new();
        for r in &self.emitted {
            if !szpiro_check(&r.model())? {
                failures.push(r);
            }
        }
        ensure!(!failures.is_empty(), "the 11.a2 exception was not detected");
        for r in &failures {
            ensure!(
                r.field_d == 11 && r.label.as_deref() == Some("11.a2"),
                "unexpected failure: {} over d={} ({:?})",
                r.model(),
                r.field_d,
                r.label
            );
        }
        let r = failures[0];
        Ok(format!(
            "{} records checked; only exception 11.a2 over d=11 (conductor exponent {}, valuation {}), seen {} time(s)",
            self.emitted.len(),
            r.conductor.exponents[0],
            r.disc_valuations[0],
            failures.len()
        ))
    }
}

fn sporadic_invariants(u: &QuadInt) -> (QuadInt, QuadInt) {
    let k = u.field();
    let c4 = &(&u.square() + &(u * 16)) + &k.int(256);
    let c6 = &(&(u - &k.int(16)) * &(u + &k.int(8))) * &(u + &k.int(32));
    (c4, c6)
}

/// Every `a` with `a^2 - 64 eps` a unit times an odd prime to an odd power,
/// found by factoring directly.
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

/// Exhaustive local search at `q | 2`: `a2 = 0` after a shift (3 is a unit),
/// `a1` and `a3` over residues mod `q^e`; then `a4`, `a6` are forced.
fn integral_model_exists(c4: &QuadInt, c6: &QuadInt, q: &PrimeElement) -> bool {
    let e = q.e();
    let reps: Vec<QuadInt> = Residues::new(&q.gen.pow(e)).iter().collect();
    let at_least = |z: &QuadInt, k: u32| q.valuation_capped(z, k) >= k;
    reps.iter().any(|a1| {
        let b2 = a1.square();
        reps.iter().any(|a3| {
            // 48 a4 = b2^2 - c4 - 24 a1 a3
            let a4 = &(&b2.square() - c4) - &(&(a1 * a3) * 24);
            // 1728 a6 = b2^3 - 3 b2 c4 - 2 c6 - 432 a3^2
            let a6 = &(&(&(&b2.square() * &b2) - &(&(&b2 * c4) * 3)) - &(c6 * 2)) - &(&a3.square() * 432);
            at_least(&a4, 4 * e) && at_least(&a6, 6 * e)
        })
    })
}

fn random_invariants(k: Field, rng: &mut ChaCha8Rng) -> Option<(QuadInt, QuadInt)> {
    let mut r = || k.elt(rng.gen_range(-6..=6), rng.gen_range(-6..=6));
    let e = WeierstrassModel::new([r(), r(), r(), r(), r()]);
    if e.is_singular() {
        return None;
    }
    let (c4, c6) = e.c_invariants();
    let q = k.ctx().two_primes[0].gen.clone();
    let (c4, c6) = match rng.gen_range(0..5) {
        0 => (c4, c6),
        1 => {
            let l = &q * &k.elt(rng.gen_range(-2..=2), rng.gen_range(-2..=2));
            (&c4 * &l.square(), &c6 * &(&l.square() * &l))
        }
        2 => (&c4 * &q.square(), &c6 * &(&q.square() * &q)),
        _ => (c4.div_exact_opt(&q.pow(4))?, c6.div_exact_opt(&q.pow(6))?),
    };
    let lhs = &(&c4.square() * &c4) - &c6.square();
    if lhs.is_zero() || lhs.div_exact_opt(&k.int(1728)).is_none() {
        return None;
    }
    Some((c4, c6))
}

fn kraus_vs_brute_force(seed: u64) -> Result<String> {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = [0usize; 2];
    for k in Field::all() {
        let mut n = 0;
        while n < 200 {
            let Some((c4, c6)) = random_invariants(k, &mut rng) else { continue };
            n += 1;
            for q in &k.ctx().two_primes {
                let got = kraus_criterion(&c4, &c6, q)?.holds;
                let want = integral_model_exists(&c4, &c6, q);
                ensure!(got == want, "{k}: c4={c4}, c6={c6} at {q}: criterion {got}, search {want}");
                seen[got as usize] += 1;
            }
        }
    }
    let secs = t.elapsed().as_secs_f64();
    ensure!(secs <= 120.0, "took {secs:.0} s, limit 120 s");
    Ok(format!("200 pairs per field agree ({} integral, {} not)", seen[1], seen[0]))
}

fn identities(seed: u64) -> Result<String> {
    const N: usize = 1000;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9);
    let fields: Vec<Field> = Field::all().collect();
    let pick = |rng: &mut ChaCha8Rng| fields[rng.gen_range(0..fields.len())];
    let small = |k: Field, rng: &mut ChaCha8Rng, m: i64| k.elt(rng.gen_range(-m..=m), rng.gen_range(-m..=m));

    // c4^3 - c6^2 = 1728 disc
    for _ in 0..N {
        let k = pick(&mut rng);
        let e = WeierstrassModel::new([(); 5].map(|_| small(k, &mut rng, 20)));
        let (c4, c6) = e.c_invariants();
        ensure!(&(&c4.square() * &c4) - &c6.square() == &e.discriminant() * 1728, "{e}");
    }

    // disc(E_{-2a, a^2-4b}) = 2^8 b (a^2-4b)^2
    let mut n = 0;
    while n < N {
        let k = pick(&mut rng);
        let (a, b) = (small(k, &mut rng, 30), small(k, &mut rng, 30));
        let Ok(ab) = AbModel::new(a.clone(), b.clone()) else { continue };
        n += 1;
        let iso = ab.two_isogenous();
        let d = &a.square() - &(&b * 4);
        ensure!(iso.a == &a * -2 && iso.b == d, "isogenous model of {ab:?}");
        ensure!(iso.to_weierstrass().discriminant() == &(&b * &d.square()) * 256, "{ab:?}");
    }

    // The RS family: disc = 2^4 3^6 disc(F) F^2, with
    // A4 = 9a v^2 + 27b uv - 3a^2 u^2,
    // A6 = 27b v^3 - 18a^2 uv^2 - 27ab u^2 v - (2a^3 + 27b^2) u^3
    // written out here rather than taken from the library.
    let mut n = 0;
    while n < N {
        let k = pick(&mut rng);
        let (a, b) = (small(k, &mut rng, 8), small(k, &mut rng, 8));
        let (u, v) = (small(k, &mut rng, 8), small(k, &mut rng, 8));
        let f = &(&v.pow(3) + &(&(&a * &v) * &u.square())) + &(&b * &u.pow(3));
        let disc_f = &(&a.pow(3) * -4) - &(&b.square() * 27);
        if f.is_zero() || disc_f.is_zero() {
            continue;
        }
        n += 1;
        let a4 = &(&(&(&a * &v.square()) * 9) + &(&(&(&b * &u) * &v) * 27)) - &(&a.square() * &u.square() * 3);
        let a6 = &(&(&(&(&b * &v.pow(3)) * 27) - &(&(&a.square() * &u) * &v.square() * 18))
            - &(&(&(&a * &b) * &u.square()) * &v * 27))
            - &(&(&(&a.pow(3) * 2) + &(&b.square() * 27)) * &u.pow(3));
        let e = WeierstrassModel::new([k.zero(), k.zero(), k.zero(), a4, a6]);
        let want = &(&disc_f * &f.square()) * (16 * 729);
        ensure!(e.discriminant() == want, "a={a}, b={b}, (u, v)=({u}, {v})");
        let fam = RsFamily::new(a.clone(), b.clone());
        ensure!(rs_specialize(&fam, &u, &v)? == e, "specialization differs at a={a}, b={b}");
    }

    // classify / synthesize / swap round trips on valid triples
    let mut n = 0;
    let mut tries = 0;
    while n < N {
        tries += 1;
        ensure!(tries < 200 * N, "only {n} valid triples found");
        let k = pick(&mut rng);
        let sqfree = small(k, &mut rng, 9);
        if sqfree.is_zero() {
            continue;
        }
        let Some(t) = ordinary_triple(&sqfree, &small(k, &mut rng, 9), &small(k, &mut rng, 9)) else { continue };
        n += 1;
        let ab = synthesize(&t)?;
        let back = classify(&ab, &ab.disc_factor())?;
        ensure!(back.equivalent(&t), "{back:?} vs {t:?}");
        let iso = isogenous_normalized(&ab);
        let swapped = classify(&iso, &iso.disc_factor())?;
        ensure!(swapped.equivalent(&isogeny_triple_swap(&t)), "swap of {t:?}");
    }
    Ok(format!("{N} checks each of c4/c6/disc, the 2-isogeny discriminant, the RS discriminant and triple round trips"))
}

fn fermat_counts() -> Result<String> {
    let k = Field::new(3)?;
    let z = k.w();
    let cases = [(k.one(), k.one(), 9), (z.clone(), z.square(), 9), (k.one(), z.clone(), 3)];
    let mut got = Vec::new();
    for (u, v, n) in cases {
        let pts = fermat_cubic_points(&u, &v, 1000)?;
        ensure!(pts.len() == n, "(u, v) = ({u}, {v}): {} points, want {n}", pts.len());
        ensure!(pts.iter().all(fermat_point_shape_ok), "(u, v) = ({u}, {v}): point of unexpected shape");
        got.push(pts.len().to_string());
    }
    Ok(format!("{} points with coordinates of norm <= 1000", got.join("/")))
}
