//! Rational-integer helpers: sieving, primality, factoring, square roots mod p.

use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

const TRIAL_LIMIT: u64 = 1_000_000;

/// All primes `< limit`.
pub fn primes_below(limit: u64) -> Vec<u64> {
    let n = limit as usize;
    if n < 3 {
        return Vec::new();
    }
    let mut sieve = vec![true; n];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i < n {
        if sieve[i] {
            let mut j = i * i;
            while j < n {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    sieve
        .iter()
        .enumerate()
        .filter(|(_, &p)| p)
        .map(|(i, _)| i as u64)
        .collect()
}

fn small_primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| primes_below(TRIAL_LIMIT))
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod_u64(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    acc
}

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod_u64(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Miller-Rabin; deterministic below 3.3e24, with extra bases above.
pub fn is_prime(n: &BigUint) -> bool {
    if let Some(m) = n.to_u64() {
        return is_prime_u64(m);
    }
    for &p in &small_primes()[..100] {
        if (n % p).is_zero() {
            return false;
        }
    }
    let one = BigUint::one();
    let nm1 = n - &one;
    let s = nm1.trailing_zeros().unwrap_or(0);
    let d = &nm1 >> s;
    'witness: for &a in &small_primes()[..20] {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x == one || x == nm1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == nm1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Brent's variant of Pollard rho; returns a nontrivial factor of composite `n`.
fn pollard_rho(n: &BigUint) -> BigUint {
    if n.is_even() {
        return BigUint::from(2u32);
    }
    let one = BigUint::one();
    for c in 1u32.. {
        let c = BigUint::from(c);
        let f = |x: &BigUint| (x * x + &c) % n;
        let mut y = BigUint::from(2u32);
        let mut r = 1u64;
        let mut q = BigUint::one();
        let m = 128u64;
        let mut g = BigUint::one();
        let mut x = y.clone();
        let mut ys = y.clone();
        while g == one {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g == one {
                ys = y.clone();
                for _ in 0..m.min(r - k) {
                    y = f(&y);
                    let diff = if x > y { &x - &y } else { &y - &x };
                    q = (q * diff) % n;
                }
                g = q.gcd(n);
                k += m;
            }
            r *= 2;
        }
        if &g == n {
            loop {
                ys = f(&ys);
                let diff = if x > ys { &x - &ys } else { &ys - &x };
                g = diff.gcd(n);
                if g != one {
                    break;
                }
            }
        }
        if &g != n {
            return g;
        }
    }
    unreachable!()
}

fn push_factor(out: &mut Vec<(BigUint, u32)>, p: BigUint, e: u32) {
    if let Some(slot) = out.iter_mut().find(|(q, _)| *q == p) {
        slot.1 += e;
    } else {
        out.push((p, e));
    }
}

fn split_large(n: BigUint, out: &mut Vec<(BigUint, u32)>) {
    if n.is_one() {
        return;
    }
    if is_prime(&n) {
        push_factor(out, n, 1);
        return;
    }
    let f = pollard_rho(&n);
    let g = &n / &f;
    split_large(f, out);
    split_large(g, out);
}

/// Prime factorization of `n > 0`, sorted by prime.
pub fn factor_biguint(n: &BigUint) -> Vec<(BigUint, u32)> {
    assert!(!n.is_zero(), "factoring zero");
    let mut out = Vec::new();
    let mut rest = n.clone();
    if let Some(mut m) = rest.to_u64() {
        for &p in small_primes() {
            if p * p > m {
                break;
            }
            if m % p == 0 {
                let mut e = 0;
                while m % p == 0 {
                    m /= p;
                    e += 1;
                }
                out.push((BigUint::from(p), e));
                if is_prime_u64(m) {
                    break;
                }
            }
        }
        if m > 1 {
            split_large(BigUint::from(m), &mut out);
        }
        out.sort();
        return out;
    }
    for &p in small_primes() {
        if (&rest % p).is_zero() {
            let mut e = 0;
            while (&rest % p).is_zero() {
                rest /= p;
                e += 1;
            }
            out.push((BigUint::from(p), e));
            if rest.is_one() || is_prime(&rest) {
                break;
            }
        }
        if let Some(r) = rest.to_u64() {
            if p.saturating_mul(p) > r {
                break;
            }
        }
    }
    if !rest.is_one() {
        split_large(rest, &mut out);
    }
    out.sort();
    out
}

pub fn factor_int(n: &BigInt) -> Vec<(BigUint, u32)> {
    factor_biguint(n.magnitude())
}

/// Jacobi symbol `(a/n)` for odd positive `n`.
pub fn jacobi(a: &BigInt, n: &BigInt) -> i32 {
    let mut a = a.mod_floor(n);
    let mut n = n.clone();
    let mut result = 1;
    let three = BigInt::from(3);
    while !a.is_zero() {
        while a.is_even() {
            a >>= 1;
            let r = (&n % 8u32).to_u32().unwrap();
            if r == 3 || r == 5 {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if (&a % 4u32) == three && (&n % 4u32) == three {
            result = -result;
        }
        a = a.mod_floor(&n);
    }
    if n.is_one() {
        result
    } else {
        0
    }
}

/// Kronecker symbol `(disc/p)` for a prime `p`.
pub fn kronecker_prime(disc: i64, p: &BigInt) -> i32 {
    if *p == BigInt::from(2) {
        match disc.rem_euclid(8) {
            1 => 1,
            5 => -1,
            _ => 0,
        }
    } else {
        jacobi(&BigInt::from(disc), p)
    }
}

/// A square root of `a` modulo the odd prime `p`, when `a` is a square.
pub fn sqrt_mod_prime(a: &BigInt, p: &BigInt) -> Option<BigInt> {
    let a = a.mod_floor(p);
    if a.is_zero() {
        return Some(BigInt::zero());
    }
    if *p == BigInt::from(2) {
        return Some(a);
    }
    if jacobi(&a, p) != 1 {
        return None;
    }
    let one = BigInt::one();
    let pm1: BigInt = p - &one;
    let s = pm1.trailing_zeros().unwrap_or(0);
    let q = &pm1 >> s;
    let mut z = BigInt::from(2);
    while jacobi(&z, p) != -1 {
        z += 1;
    }
    let mut m = s;
    let mut c = z.modpow(&q, p);
    let mut t = a.modpow(&q, p);
    let mut r = a.modpow(&((&q + &one) >> 1), p);
    while !t.is_one() {
        let mut i = 0;
        let mut tt = t.clone();
        while !tt.is_one() {
            tt = (&tt * &tt) % p;
            i += 1;
        }
        let mut b = c.clone();
        for _ in 0..(m - i - 1) {
            b = (&b * &b) % p;
        }
        m = i;
        c = (&b * &b) % p;
        t = (&t * &c) % p;
        r = (&r * &b) % p;
    }
    Some(r)
}

/// `n^(1/k)` exactly, for `n >= 0`.
pub fn exact_root(n: &BigInt, k: u32) -> Option<BigInt> {
    if n.sign() == Sign::Minus {
        return None;
    }
    let r = num_integer::Roots::nth_root(n, k);
    (num_traits::pow(r.clone(), k as usize) == *n).then_some(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive_factor(mut n: u64) -> Vec<(BigUint, u32)> {
        let mut out = Vec::new();
        let mut p = 2;
        while p * p <= n {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            if e > 0 {
                out.push((BigUint::from(p), e));
            }
            p += 1;
        }
        if n > 1 {
            out.push((BigUint::from(n), 1));
        }
        out
    }

    #[test]
    fn factoring_agrees_with_naive() {
        for n in 1u64..3000 {
            assert_eq!(factor_biguint(&BigUint::from(n)), naive_factor(n), "{n}");
        }
    }

    #[test]
    fn factoring_beyond_trial_range() {
        let p = BigUint::from(1_000_003u64);
        let q = BigUint::from(998_244_353u64);
        let r = BigUint::from(2_305_843_009_213_693_951u64);
        let n = &p * &q * &q * &r;
        let f = factor_biguint(&n);
        assert_eq!(f, vec![(p, 1), (q, 2), (r, 1)]);
    }

    #[test]
    fn jacobi_matches_euler() {
        for p in [3i64, 5, 7, 11, 13, 101] {
            for a in 0..p {
                let e = BigInt::from(a).modpow(&BigInt::from((p - 1) / 2), &BigInt::from(p));
                let expected = if a == 0 { 0 } else if e.is_one() { 1 } else { -1 };
                assert_eq!(jacobi(&BigInt::from(a), &BigInt::from(p)), expected);
            }
        }
    }

    #[test]
    fn tonelli_shanks() {
        for p in [3i64, 5, 13, 17, 41, 97, 257, 65537] {
            let pb = BigInt::from(p);
            for a in 1..p.min(300) {
                let ab = BigInt::from(a);
                if let Some(r) = sqrt_mod_prime(&ab, &pb) {
                    assert_eq!((&r * &r) % &pb, ab);
                } else {
                    assert_eq!(jacobi(&ab, &pb), -1);
                }
            }
        }
    }
}
