use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use super::ideal::Hnf;
use super::{Field, QuadInt};

/// A complete residue system modulo a nonzero element `m`.
///
/// The ideal `(m)` has lattice basis `(a, 0), (b, c)`; representatives are
/// `x + y*w` with `0 <= x < a`, `0 <= y < c`.
#[derive(Clone, Debug)]
pub struct Residues {
    field: Field,
    modulus: QuadInt,
    hnf: Hnf,
}

impl Residues {
    pub fn new(m: &QuadInt) -> Residues {
        assert!(!m.is_zero(), "residues modulo zero");
        let hnf = Hnf::of_ideal(std::slice::from_ref(m)).unwrap();
        Residues {
            field: m.field(),
            modulus: m.clone(),
            hnf,
        }
    }

    pub fn modulus(&self) -> &QuadInt {
        &self.modulus
    }

    /// Number of classes, i.e. `N(m)`.
    pub fn len(&self) -> usize {
        self.hnf.index().to_usize().expect("modulus too large to enumerate")
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn reduce(&self, z: &QuadInt) -> QuadInt {
        let y = z.y().mod_floor(&self.hnf.c);
        let k = (z.y() - &y) / &self.hnf.c;
        let x = (z.x() - &k * &self.hnf.b).mod_floor(&self.hnf.a);
        QuadInt::new(self.field, x, y)
    }

    pub fn congruent(&self, a: &QuadInt, b: &QuadInt) -> bool {
        self.reduce(&(a - b)).is_zero()
    }

    pub fn is_zero_mod(&self, z: &QuadInt) -> bool {
        self.reduce(z).is_zero()
    }

    pub fn iter(&self) -> impl Iterator<Item = QuadInt> + '_ {
        let a = self.hnf.a.to_i64().expect("modulus too large");
        let c = self.hnf.c.to_i64().expect("modulus too large");
        (0..c).flat_map(move |y| (0..a).map(move |x| QuadInt::new(self.field, x, y)))
    }

    /// Representatives coprime to `m`.
    pub fn units(&self) -> impl Iterator<Item = QuadInt> + '_ {
        let m = self.modulus.clone();
        self.iter()
            .filter(move |r| super::gcd(r, &m).is_unit())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ResidueKind {
    Square,
    Cube,
    FourthPower,
    UnitTimesSquare,
}

/// Is `q` congruent mod `m` to a `k`-th power (or a unit times a square)?
/// Returns a witness `w` with `w^k = q` (resp. `u*w^2 = q`) mod `m`.
pub fn residue_test(q: &QuadInt, m: &QuadInt, kind: ResidueKind) -> Option<QuadInt> {
    let res = Residues::new(m);
    let target = res.reduce(q);
    let units = q.field().units();
    let found = res.iter().find(|w| match kind {
        ResidueKind::Square => res.reduce(&w.square()) == target,
        ResidueKind::Cube => res.reduce(&w.pow(3)) == target,
        ResidueKind::FourthPower => res.reduce(&w.pow(4)) == target,
        ResidueKind::UnitTimesSquare => {
            let sq = w.square();
            units.iter().any(|u| res.reduce(&(u * &sq)) == target)
        }
    });
    found
}

/// Residues of `z` modulo a rational integer `m`, coordinatewise; fast path for
/// moduli like 4 and 8 that are rational.
#[allow(dead_code)]
pub fn reduce_rational(z: &QuadInt, m: i64) -> (i64, i64) {
    let m = BigInt::from(m);
    (
        z.x().mod_floor(&m).to_i64().unwrap(),
        z.y().mod_floor(&m).to_i64().unwrap(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(d: i64) -> Field {
        Field::new(d).unwrap()
    }

    #[test]
    fn residue_count_is_norm() {
        for k in Field::all() {
            for m in [k.int(4), k.int(8), k.elt(1, 1), k.elt(3, -2)] {
                let r = Residues::new(&m);
                assert_eq!(BigInt::from(r.len()), m.norm());
                let all: Vec<_> = r.iter().collect();
                for (i, a) in all.iter().enumerate() {
                    for b in &all[i + 1..] {
                        assert!(!r.congruent(a, b));
                    }
                }
            }
        }
    }

    #[test]
    fn reduce_is_idempotent_and_consistent() {
        let k = f(19);
        let m = k.elt(5, 3);
        let r = Residues::new(&m);
        for x in -10..10 {
            for y in -10..10 {
                let z = k.elt(x, y);
                let red = r.reduce(&z);
                assert!(m.divides(&(&z - &red)));
                assert_eq!(r.reduce(&red), red);
            }
        }
    }

    #[test]
    fn square_residue_examples() {
        let k = f(11);
        assert!(residue_test(&k.one(), &k.int(4), ResidueKind::Square).is_some());
        assert!(residue_test(&k.int(-1), &k.int(4), ResidueKind::Square).is_none());
    }

    #[test]
    fn minus_one_not_square_mod_4_by_enumeration() {
        let k = f(11);
        let m = k.int(4);
        let r = Residues::new(&m);
        let squares: Vec<QuadInt> = r.iter().map(|w| r.reduce(&w.square())).collect();
        assert!(!squares.contains(&r.reduce(&k.int(-1))));
    }
}
