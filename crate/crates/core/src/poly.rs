//! Roots in `K` of polynomials with coefficients in `O_K`.

use crate::field_arith::{factor, Field, QuadFrac, QuadInt};

#[derive(Clone, Copy, Debug, PartialEq)]
struct C64 {
    re: f64,
    im: f64,
}

impl C64 {
    fn add(self, o: C64) -> C64 {
        C64 { re: self.re + o.re, im: self.im + o.im }
    }
    fn sub(self, o: C64) -> C64 {
        C64 { re: self.re - o.re, im: self.im - o.im }
    }
    fn mul(self, o: C64) -> C64 {
        C64 {
            re: self.re * o.re - self.im * o.im,
            im: self.re * o.im + self.im * o.re,
        }
    }
    fn div(self, o: C64) -> C64 {
        let n = o.re * o.re + o.im * o.im;
        C64 {
            re: (self.re * o.re + self.im * o.im) / n,
            im: (self.im * o.re - self.re * o.im) / n,
        }
    }
    fn abs(self) -> f64 {
        self.re.hypot(self.im)
    }
}

/// Evaluate `sum c_i X^i` by Horner.
pub fn eval(coeffs: &[QuadInt], x: &QuadInt) -> QuadInt {
    let mut acc = x.field().zero();
    for c in coeffs.iter().rev() {
        acc = &(&acc * x) + c;
    }
    acc
}

/// Divide by `X - r`, assuming `r` is a root.
fn deflate(coeffs: &[QuadInt], r: &QuadInt) -> Vec<QuadInt> {
    let n = coeffs.len() - 1;
    let mut out = vec![r.field().zero(); n];
    let mut carry = r.field().zero();
    for i in (1..=n).rev() {
        carry = &(&carry * r) + &coeffs[i];
        out[i - 1] = carry.clone();
    }
    out
}

/// Complex approximations to all roots (Durand-Kerner).
fn approx_roots(coeffs: &[QuadInt]) -> Vec<C64> {
    let n = coeffs.len() - 1;
    let lead = C64 { re: coeffs[n].to_complex().0, im: coeffs[n].to_complex().1 };
    let cs: Vec<C64> = coeffs
        .iter()
        .map(|c| {
            let (re, im) = c.to_complex();
            C64 { re, im }.div(lead)
        })
        .collect();
    // Fujiwara's bound on the root moduli
    let bound = 2.0
        * (1..=n)
            .map(|k| {
                let c = cs[n - k].abs();
                if k == n { (c / 2.0).powf(1.0 / k as f64) } else { c.powf(1.0 / k as f64) }
            })
            .fold(0.0, f64::max);
    let bound = bound.max(1.0);
    let seed = C64 { re: 0.4, im: 0.9 };
    let mut zs: Vec<C64> = Vec::with_capacity(n);
    let mut z = C64 { re: bound.min(1e150), im: 0.0 };
    for _ in 0..n {
        z = z.mul(seed);
        zs.push(z);
    }
    let p = |x: C64| cs.iter().rev().fold(C64 { re: 0.0, im: 0.0 }, |acc, c| acc.mul(x).add(*c));
    for _ in 0..2000 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let mut den = C64 { re: 1.0, im: 0.0 };
            for j in 0..n {
                if i != j {
                    den = den.mul(zs[i].sub(zs[j]));
                }
            }
            let step = p(zs[i]).div(den);
            if step.re.is_finite() && step.im.is_finite() {
                zs[i] = zs[i].sub(step);
                moved = moved.max(step.abs() / (1.0 + zs[i].abs()));
            }
        }
        if moved < 1e-15 {
            break;
        }
    }
    zs
}

/// Divisors of `c` up to units, times all units.
fn divisors(c: &QuadInt, limit: usize) -> Option<Vec<QuadInt>> {
    let fac = factor(c);
    let mut divs = vec![c.field().one()];
    for (p, e) in &fac.factors {
        let mut next = Vec::with_capacity(divs.len() * (*e as usize + 1));
        for d in &divs {
            let mut cur = d.clone();
            next.push(cur.clone());
            for _ in 0..*e {
                cur = &cur * &p.gen;
                next.push(cur.clone());
            }
        }
        divs = next;
        if divs.len() > limit {
            return None;
        }
    }
    let units = c.field().units();
    Some(divs.iter().flat_map(|d| units.iter().map(move |u| d * u)).collect())
}

/// Distinct roots in `O_K` of a monic polynomial, coefficients listed from
/// the constant term up.
pub fn roots_monic(coeffs: &[QuadInt]) -> Vec<QuadInt> {
    let mut coeffs: Vec<QuadInt> = coeffs.to_vec();
    while coeffs.len() > 1 && coeffs.last().unwrap().is_zero() {
        coeffs.pop();
    }
    assert!(coeffs.last().is_some_and(|c| c.is_one()), "polynomial must be monic");
    let mut roots: Vec<QuadInt> = Vec::new();
    let push = |r: QuadInt, roots: &mut Vec<QuadInt>| {
        if !roots.contains(&r) {
            roots.push(r);
        }
    };
    loop {
        let deg = coeffs.len() - 1;
        if deg == 0 {
            break;
        }
        if coeffs[0].is_zero() {
            let r = coeffs[0].clone();
            coeffs = deflate(&coeffs, &r);
            push(r, &mut roots);
            continue;
        }
        if deg == 1 {
            push(-&coeffs[0], &mut roots);
            break;
        }
        if deg == 2 {
            let (c, b) = (&coeffs[0], &coeffs[1]);
            if let Some(s) = (&b.square() - &(c * 4)).sqrt_exact() {
                for t in [&s - b, -&(&s + b)] {
                    if let Some(r) = t.div_int(&2.into()) {
                        push(r, &mut roots);
                    }
                }
            }
            break;
        }
        let found = find_root(&coeffs);
        match found {
            Some(r) => {
                coeffs = deflate(&coeffs, &r);
                push(r, &mut roots);
            }
            None => break,
        }
    }
    roots.sort();
    roots
}

fn find_root(coeffs: &[QuadInt]) -> Option<QuadInt> {
    let field = coeffs[0].field();
    for z in approx_roots(coeffs) {
        if !(z.re.is_finite() && z.im.is_finite()) {
            continue;
        }
        for c in QuadInt::nearest(field, z.re, z.im) {
            if eval(coeffs, &c).is_zero() {
                return Some(c);
            }
        }
    }
    // Large roots can be lost to rounding: every root divides the constant term.
    let divs = divisors(&coeffs[0], 20_000)?;
    divs.into_iter().find(|d| eval(coeffs, d).is_zero())
}

/// Distinct roots in `K` of a polynomial with `O_K` coefficients.
pub fn roots_in_k(coeffs: &[QuadInt]) -> Vec<QuadFrac> {
    let mut coeffs: Vec<QuadInt> = coeffs.to_vec();
    while coeffs.len() > 1 && coeffs.last().unwrap().is_zero() {
        coeffs.pop();
    }
    let n = coeffs.len() - 1;
    if n == 0 {
        return Vec::new();
    }
    // a_n^(n-1) f(Y / a_n) is monic in Y.
    let lead = coeffs[n].clone();
    let mut monic = Vec::with_capacity(n + 1);
    let mut pw = lead.field().one();
    for i in (0..=n).rev() {
        // coefficient of Y^i is c_i a_n^(n-1-i)
        if i == n {
            monic.push(lead.field().one());
        } else {
            monic.push(&coeffs[i] * &pw);
            pw = &pw * &lead;
        }
    }
    monic.reverse();
    let mut out: Vec<QuadFrac> = roots_monic(&monic)
        .into_iter()
        .map(|y| QuadFrac::new(y, lead.clone()).expect("nonzero leading coefficient"))
        .collect();
    out.sort_by_key(|a| a.to_string());
    out.dedup();
    out
}

/// Small helper for callers with integer coefficients.
pub fn int_coeffs(field: Field, cs: &[i64]) -> Vec<QuadInt> {
    cs.iter().map(|&c| field.int(c)).collect()
}
