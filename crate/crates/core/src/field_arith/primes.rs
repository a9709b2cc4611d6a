use num_bigint::BigInt;

use super::rational::primes_below;
use super::{split_rational_prime, Field, PrimeElement};

/// One generator per prime ideal of norm `<= bound`, ordered by norm and then
/// by canonical generator.
pub fn primes_up_to(field: Field, bound: u64) -> Vec<PrimeElement> {
    let bound_big = BigInt::from(bound);
    let mut out: Vec<PrimeElement> = primes_below(bound + 1)
        .into_iter()
        .flat_map(|p| split_rational_prime(&BigInt::from(p), field))
        .filter(|q| q.norm <= bound_big)
        .collect();
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field_arith::rational::kronecker_prime;

    #[test]
    fn small_examples() {
        let k = Field::new(11).unwrap();
        let norms: Vec<BigInt> = primes_up_to(k, 10).into_iter().map(|p| p.norm).collect();
        let expected: Vec<BigInt> = [3, 3, 4, 5, 5].into_iter().map(BigInt::from).collect();
        assert_eq!(norms, expected);

        let ps = primes_up_to(Field::new(1).unwrap(), 2);
        assert_eq!(ps.len(), 1);
        assert_eq!(ps[0].norm, BigInt::from(2));

        let ps = primes_up_to(Field::new(7).unwrap(), 2);
        assert_eq!(ps.len(), 2);
    }

    #[test]
    fn agrees_with_kronecker_count() {
        for k in Field::all() {
            let bound = 1000u64;
            let mut expected = 0;
            for p in primes_below(bound + 1) {
                match kronecker_prime(k.disc(), &BigInt::from(p)) {
                    1 => expected += 2,
                    0 => expected += 1,
                    _ => {
                        if p * p <= bound {
                            expected += 1
                        }
                    }
                }
            }
            let ps = primes_up_to(k, bound);
            assert_eq!(ps.len(), expected, "{k}");
            for w in ps.windows(2) {
                assert!(w[0].norm <= w[1].norm);
                assert!(!w[0].gen.is_associate(&w[1].gen));
            }
        }
    }
}
