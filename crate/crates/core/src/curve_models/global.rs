use num_bigint::BigInt;
use num_traits::One;

use super::tate::{tate_local, LocalData};
use super::WeierstrassModel;
use crate::field_arith::{factor, PrimeElement, QuadFrac, QuadInt};
use crate::{Error, Result};

/// Conductor, global minimal model and minimal discriminant.
#[derive(Clone, Debug)]
pub struct GlobalData {
    /// Local data at every prime dividing the discriminant of the input.
    pub locals: Vec<LocalData>,
    pub minimal_model: WeierstrassModel,
    pub disc_min: QuadInt,
}

impl GlobalData {
    /// `(prime, exponent)` for primes of bad reduction.
    pub fn conductor(&self) -> Vec<(PrimeElement, u32)> {
        self.locals
            .iter()
            .filter(|l| l.f > 0)
            .map(|l| (l.prime.clone(), l.f))
            .collect()
    }

    pub fn conductor_norm(&self) -> BigInt {
        self.conductor()
            .iter()
            .map(|(p, e)| num_traits::pow(p.norm.clone(), *e as usize))
            .product()
    }

    /// Generator of the conductor ideal.
    pub fn conductor_gen(&self) -> QuadInt {
        let f = self.minimal_model.field();
        self.conductor()
            .iter()
            .fold(f.one(), |acc, (p, e)| &acc * &p.gen.pow(*e))
    }

    pub fn disc_valuations(&self) -> Vec<(PrimeElement, u32)> {
        self.locals
            .iter()
            .filter(|l| l.v_min_disc > 0)
            .map(|l| (l.prime.clone(), l.v_min_disc))
            .collect()
    }

    pub fn local(&self, p: &PrimeElement) -> Option<&LocalData> {
        self.locals.iter().find(|l| l.prime.gen == p.gen)
    }

    pub fn has_bad_reduction(&self) -> bool {
        !self.conductor_norm().is_one()
    }

    /// `N(D_min) <= N(conductor)^6`.
    pub fn szpiro(&self) -> bool {
        self.disc_min.norm() <= num_traits::pow(self.conductor_norm(), 6)
    }
}

/// Run Tate's algorithm at every prime dividing the discriminant and
/// assemble a global minimal model (class number one).
pub fn global_data(e: &WeierstrassModel) -> Result<GlobalData> {
    let disc = e.discriminant();
    if disc.is_zero() {
        return Err(Error::SingularModel);
    }
    let fac = factor(&disc);
    let mut model = e.clone();
    let mut locals = Vec::with_capacity(fac.factors.len());
    for (p, _) in &fac.factors {
        let (ld, m) = tate_local(&model, p);
        model = m;
        locals.push(ld);
    }
    let minimal_model = model.reduced();
    let disc_min = minimal_model.discriminant();
    debug_assert!(locals
        .iter()
        .all(|l| l.prime.valuation(&disc_min) == Some(l.v_min_disc)));
    Ok(GlobalData {
        locals,
        minimal_model,
        disc_min,
    })
}

pub fn conductor(e: &WeierstrassModel) -> Result<GlobalData> {
    global_data(e)
}

pub fn minimal_model(e: &WeierstrassModel) -> Result<WeierstrassModel> {
    Ok(global_data(e)?.minimal_model)
}

pub fn szpiro_check(e: &WeierstrassModel) -> Result<bool> {
    Ok(global_data(e)?.szpiro())
}

/// Whether `x` is a `k`-th power in `K`, for `k` in 2, 3, 4, 6.
fn is_power(x: &QuadFrac, k: u32) -> bool {
    if x.is_zero() {
        return true;
    }
    let den = QuadInt::from_int(x.field(), x.den().clone());
    // x = num / den = (num * den^(k-1)) / den^k
    let y = x.num() * &den.pow(k - 1);
    is_power_int(&y, k)
}

fn is_power_int(y: &QuadInt, k: u32) -> bool {
    match k {
        1 => true,
        2 => y.sqrt_exact().is_some(),
        3 => y.cbrt_exact().is_some(),
        4 => y
            .sqrt_exact()
            .is_some_and(|s| s.sqrt_exact().is_some() || (-&s).sqrt_exact().is_some()),
        6 => y.sqrt_exact().is_some_and(|s| s.cbrt_exact().is_some()),
        _ => unimplemented!("{k}-th powers"),
    }
}

/// Isomorphism over `K`: `c4' = u^4 c4`, `c6' = u^6 c6` for some `u` in `K*`.
pub fn is_isomorphic(e1: &WeierstrassModel, e2: &WeierstrassModel) -> Result<bool> {
    let i1 = e1.invariants()?;
    let i2 = e2.invariants()?;
    if i1.j != i2.j {
        return Ok(false);
    }
    let frac = |a: &QuadInt, b: &QuadInt| QuadFrac::new(a.clone(), b.clone());
    Ok(if i1.c4.is_zero() {
        is_power(&frac(&i2.c6, &i1.c6)?, 6)
    } else if i1.c6.is_zero() {
        is_power(&frac(&i2.c4, &i1.c4)?, 4)
    } else {
        // u^2 = (c6' c4) / (c6 c4')
        let u2 = frac(&(&i2.c6 * &i1.c4), &(&i1.c6 * &i2.c4))?;
        let lhs = &(&u2 * &u2) * &QuadFrac::from_int(i1.c4.clone());
        is_power(&u2, 2) && lhs == QuadFrac::from_int(i2.c4.clone())
    })
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::field_arith::Field;

    fn f(d: i64) -> Field {
        Field::new(d).unwrap()
    }

    #[test]
    fn curve_47_conductor_and_discriminant() {
        let k = f(11);
        let e = WeierstrassModel::new([k.zero(), k.w(), k.one(), k.int(-1), k.zero()]);
        let g = global_data(&e).unwrap();
        let pi = k.elt(7, -2);
        assert_eq!(g.conductor_norm(), BigInt::from(47));
        assert!(g.conductor_gen().is_associate(&pi));
        assert!(g.disc_min.is_associate(&pi.square()));
        assert!(g.szpiro());
    }

    #[test]
    fn eleven_a1_violates_szpiro_over_eleven() {
        let k = f(11);
        let e = WeierstrassModel::from_ints(k, [0, -1, 1, -10, -20]);
        let g = global_data(&e).unwrap();
        assert_eq!(g.conductor().len(), 1);
        assert_eq!(g.conductor()[0].1, 1);
        assert_eq!(g.disc_valuations()[0].1, 10);
        assert!(!g.szpiro());
    }

    #[test]
    fn no_bad_primes_means_trivial_conductor() {
        let k = f(3);
        let g = GlobalData {
            locals: Vec::new(),
            minimal_model: WeierstrassModel::from_ints(k, [0, 0, 1, 0, 0]),
            disc_min: k.one(),
        };
        assert!(g.conductor_gen().is_one());
        assert!(!g.has_bad_reduction());
        assert!(g.szpiro());
    }

    #[test]
    fn minimal_model_of_scaled_curve() {
        for k in Field::all() {
            let e = WeierstrassModel::from_ints(k, [0, -1, 1, 0, 0]);
            let big = e.scale_up(&k.elt(3, 1));
            let g = global_data(&big).unwrap();
            assert!(g.disc_min.is_associate(&k.int(11)), "{k}");
            assert!(is_isomorphic(&g.minimal_model, &e).unwrap());
        }
    }

    #[test]
    fn isomorphism_detects_twists() {
        let k = f(7);
        let e = WeierstrassModel::from_ints(k, [1, -1, 0, -2, -1]);
        let t = e.quadratic_twist(&k.int(-1));
        assert!(!is_isomorphic(&e, &t).unwrap());
        // -7 is a square in Q(sqrt(-7)).
        assert!(is_isomorphic(&e, &e.quadratic_twist(&k.int(-7))).unwrap());
        let k1 = f(1);
        let a = WeierstrassModel::quartic_twist(&k1.one()).unwrap();
        let b = WeierstrassModel::quartic_twist(&k1.int(-4)).unwrap();
        // -4 = (1+i)^4
        assert!(is_isomorphic(&a, &b).unwrap());
        let c = WeierstrassModel::quartic_twist(&k1.int(-1)).unwrap();
        assert!(!is_isomorphic(&a, &c).unwrap());
    }
}
