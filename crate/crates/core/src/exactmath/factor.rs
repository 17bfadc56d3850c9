//! Factorization of univariate polynomials over the rationals.
//!
//! Squarefree decomposition (Yun) followed, for each squarefree part, by the
//! classical Zassenhaus pipeline: factor modulo a small prime with
//! Cantor-Zassenhaus, Hensel-lift the modular factorization with a factor
//! tree, then recombine lifted factors by exhaustive subset search.

use super::{Rational, UPoly};
use crate::error::{Error, Result};
use num::{BigInt, BigUint, Integer, One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Largest squarefree degree handed to the Zassenhaus search.
pub const FACTOR_DEGREE_CAP: usize = 16;

/// `unit * prod(factor^multiplicity)`, factors monic irreducible and pairwise distinct.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub unit: Rational,
    pub factors: Vec<(UPoly, u32)>,
}

impl Factorization {
    /// Re-expand the product.
    pub fn expand(&self) -> UPoly {
        self.factors.iter().fold(UPoly::constant(self.unit.clone()), |acc, (p, e)| acc.mul(&p.pow(*e)))
    }

    /// Largest multiplicity, 0 for constants.
    pub fn max_multiplicity(&self) -> u32 {
        self.factors.iter().map(|(_, e)| *e).max().unwrap_or(0)
    }
}

/// Yun's squarefree decomposition of a nonzero polynomial: monic, pairwise
/// coprime squarefree parts with their multiplicities (constant parts omitted).
pub fn squarefree_decomposition(f: &UPoly) -> Result<Vec<(UPoly, u32)>> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let f = f.monic();
    let mut out = Vec::new();
    if f.degree() == Some(0) {
        return Ok(out);
    }
    let df = f.derivative();
    let a0 = f.gcd(&df);
    let mut b = f.div_exact(&a0).expect("gcd divides");
    let mut c = df.div_exact(&a0).expect("gcd divides");
    let mut d = c.sub(&b.derivative());
    let mut i = 1;
    while b.degree() != Some(0) {
        let a = b.gcd(&d);
        if a.degree() != Some(0) {
            out.push((a.clone(), i));
        }
        b = b.div_exact(&a).expect("gcd divides");
        c = d.div_exact(&a).expect("gcd divides");
        d = c.sub(&b.derivative());
        i += 1;
    }
    Ok(out)
}

/// Complete factorization over the rationals.
pub fn factor(f: &UPoly) -> Result<Factorization> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut factors = Vec::new();
    for (part, mult) in squarefree_decomposition(f)? {
        for irreducible in factor_squarefree(&part)? {
            factors.push((irreducible, mult));
        }
    }
    factors.sort_by(|a, b| poly_order(&a.0, &b.0).then(a.1.cmp(&b.1)));
    Ok(Factorization { unit: f.leading(), factors })
}

/// Irreducibility over the rationals (degree at least one, a single prime factor
/// of multiplicity one).
pub fn is_irreducible(f: &UPoly) -> Result<bool> {
    if f.degree().unwrap_or(0) == 0 {
        return Ok(false);
    }
    let fac = factor(f)?;
    Ok(fac.factors.len() == 1 && fac.factors[0].1 == 1)
}

fn poly_order(a: &UPoly, b: &UPoly) -> std::cmp::Ordering {
    a.degree().cmp(&b.degree()).then_with(|| {
        for i in (0..a.coeffs().len()).rev() {
            let o = a.coeff(i).cmp(&b.coeff(i));
            if o.is_ne() {
                return o;
            }
        }
        std::cmp::Ordering::Equal
    })
}

/// Irreducible monic factors of a monic squarefree polynomial.
fn factor_squarefree(f: &UPoly) -> Result<Vec<UPoly>> {
    let deg = f.degree().unwrap_or(0);
    if deg <= 1 {
        return Ok(if deg == 1 { vec![f.monic()] } else { Vec::new() });
    }
    let mut out = Vec::new();
    let mut f = f.clone();
    if f.coeff(0).is_zero() {
        out.push(UPoly::x());
        f = f.div_exact(&UPoly::x()).expect("X divides");
        if f.degree() == Some(0) {
            return Ok(out);
        }
    }
    let degree = f.degree().unwrap_or(0);
    if degree > FACTOR_DEGREE_CAP {
        return Err(Error::DegreeCapExceeded { degree, cap: FACTOR_DEGREE_CAP });
    }
    let ints = f.primitive_integer();
    for g in zassenhaus(&ints)? {
        out.push(UPoly::from_integers(&g).monic());
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Arithmetic in F_p[X] for a small prime p. Polynomials are low-first and
// trimmed (no trailing zeros).

type Fp = Vec<u64>;

fn fp_trim(mut a: Fp) -> Fp {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn fp_inv(a: u64, p: u64) -> u64 {
    let (mut t, mut new_t) = (0i128, 1i128);
    let (mut r, mut new_r) = (p as i128, a as i128);
    while new_r != 0 {
        let quot = r / new_r;
        (t, new_t) = (new_t, t - quot * new_t);
        (r, new_r) = (new_r, r - quot * new_r);
    }
    debug_assert_eq!(r, 1, "not invertible mod p");
    t.rem_euclid(p as i128) as u64
}

fn fp_from_int(a: &[BigInt], p: u64) -> Fp {
    let pb = BigInt::from(p);
    fp_trim(a.iter().map(|c| c.mod_floor(&pb).to_u64().expect("residue fits")).collect())
}

fn fp_sub(a: &[u64], b: &[u64], p: u64) -> Fp {
    let n = a.len().max(b.len());
    fp_trim((0..n).map(|i| (a.get(i).copied().unwrap_or(0) + p - b.get(i).copied().unwrap_or(0)) % p).collect())
}

fn fp_mul(a: &[u64], b: &[u64], p: u64) -> Fp {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    fp_trim(out)
}

fn fp_divrem(a: &[u64], b: &[u64], p: u64) -> (Fp, Fp) {
    assert!(!b.is_empty(), "division by zero in F_p[X]");
    let db = b.len() - 1;
    if a.len() <= db {
        return (Vec::new(), a.to_vec());
    }
    let inv = fp_inv(b[db], p);
    let mut rem = a.to_vec();
    let mut quot = vec![0u64; a.len() - db];
    for k in (0..quot.len()).rev() {
        let c = rem[k + db] * inv % p;
        if c == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            rem[k + j] = (rem[k + j] + p - c * y % p) % p;
        }
        quot[k] = c;
    }
    rem.truncate(db);
    (fp_trim(quot), fp_trim(rem))
}

fn fp_monic(a: &[u64], p: u64) -> Fp {
    match a.last() {
        None => Vec::new(),
        Some(&lc) => {
            let inv = fp_inv(lc, p);
            a.iter().map(|&x| x * inv % p).collect()
        }
    }
}

fn fp_gcd(a: &[u64], b: &[u64], p: u64) -> Fp {
    let (mut x, mut y) = (a.to_vec(), b.to_vec());
    while !y.is_empty() {
        let r = fp_divrem(&x, &y, p).1;
        x = std::mem::replace(&mut y, r);
    }
    fp_monic(&x, p)
}

/// `(s, t)` with `s a + t b = 1`, for coprime `a`, `b`.
fn fp_bezout(a: &[u64], b: &[u64], p: u64) -> (Fp, Fp) {
    let (mut r0, mut r1) = (a.to_vec(), b.to_vec());
    let (mut s0, mut s1): (Fp, Fp) = (vec![1], Vec::new());
    let (mut t0, mut t1): (Fp, Fp) = (Vec::new(), vec![1]);
    while !r1.is_empty() {
        let (quot, r2) = fp_divrem(&r0, &r1, p);
        let s2 = fp_sub(&s0, &fp_mul(&quot, &s1, p), p);
        let t2 = fp_sub(&t0, &fp_mul(&quot, &t1, p), p);
        r0 = std::mem::replace(&mut r1, r2);
        s0 = std::mem::replace(&mut s1, s2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    assert_eq!(r0.len(), 1, "Bezout inputs not coprime mod p");
    let inv = fp_inv(r0[0], p);
    let sc = |v: Fp| fp_trim(v.into_iter().map(|x| x * inv % p).collect());
    (sc(s0), sc(t0))
}

fn fp_powmod(base: &[u64], exp: &BigUint, modulus: &[u64], p: u64) -> Fp {
    let mut result: Fp = vec![1];
    let base = fp_divrem(base, modulus, p).1;
    for i in (0..exp.bits()).rev() {
        result = fp_divrem(&fp_mul(&result, &result, p), modulus, p).1;
        if exp.bit(i) {
            result = fp_divrem(&fp_mul(&result, &base, p), modulus, p).1;
        }
    }
    result
}

fn fp_derivative(a: &[u64], p: u64) -> Fp {
    fp_trim(a.iter().enumerate().skip(1).map(|(i, &c)| (i as u64 % p) * c % p).collect())
}

/// Distinct-degree then equal-degree factorization of a monic squarefree polynomial.
fn fp_factor(f: &[u64], p: u64, rng: &mut ChaCha8Rng) -> Vec<Fp> {
    let x: Fp = vec![0, 1];
    let pb = BigUint::from(p);
    let mut rest = f.to_vec();
    let mut h = x.clone();
    let mut out = Vec::new();
    let mut d = 1;
    while rest.len() > 2 * d {
        h = fp_powmod(&h, &pb, &rest, p);
        let g = fp_gcd(&fp_sub(&h, &x, p), &rest, p);
        if g.len() > 1 {
            equal_degree(&g, d, p, rng, &mut out);
            rest = fp_divrem(&rest, &g, p).0;
            h = fp_divrem(&h, &rest, p).1;
        }
        d += 1;
    }
    if rest.len() > 1 {
        out.push(fp_monic(&rest, p));
    }
    out
}

fn equal_degree(g: &[u64], d: usize, p: u64, rng: &mut ChaCha8Rng, out: &mut Vec<Fp>) {
    let n = g.len() - 1;
    if n == d {
        out.push(fp_monic(g, p));
        return;
    }
    let exp = (BigUint::from(p).pow(d as u32) - 1u32) / 2u32;
    loop {
        let a = fp_trim((0..n).map(|_| rng.gen_range(0..p)).collect());
        if a.len() < 2 {
            continue;
        }
        let b = fp_sub(&fp_powmod(&a, &exp, g, p), &[1], p);
        let h = fp_gcd(&b, g, p);
        if h.len() > 1 && h.len() < g.len() {
            let other = fp_divrem(g, &h, p).0;
            equal_degree(&h, d, p, rng, out);
            equal_degree(&other, d, p, rng, out);
            return;
        }
    }
}

// ---------------------------------------------------------------------------
// Arithmetic in (Z/m)[X], coefficients kept in [0, m).

type Zm = Vec<BigInt>;

fn zm_trim(mut a: Zm) -> Zm {
    while a.last().is_some_and(Zero::is_zero) {
        a.pop();
    }
    a
}

fn zm_reduce(a: &[BigInt], m: &BigInt) -> Zm {
    zm_trim(a.iter().map(|c| c.mod_floor(m)).collect())
}

fn zm_add(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Zm {
    let n = a.len().max(b.len());
    let z = BigInt::zero();
    zm_trim((0..n).map(|i| (a.get(i).unwrap_or(&z) + b.get(i).unwrap_or(&z)).mod_floor(m)).collect())
}

fn zm_sub(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Zm {
    let n = a.len().max(b.len());
    let z = BigInt::zero();
    zm_trim((0..n).map(|i| (a.get(i).unwrap_or(&z) - b.get(i).unwrap_or(&z)).mod_floor(m)).collect())
}

fn zm_mul(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Zm {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    zm_reduce(&out, m)
}

/// Division by a monic divisor modulo m.
fn zm_divrem_monic(a: &[BigInt], b: &[BigInt], m: &BigInt) -> (Zm, Zm) {
    let db = b.len() - 1;
    debug_assert!(b[db].is_one());
    if a.len() <= db {
        return (Vec::new(), zm_reduce(a, m));
    }
    let mut rem = a.to_vec();
    let mut quot = vec![BigInt::zero(); a.len() - db];
    for k in (0..quot.len()).rev() {
        let c = rem[k + db].mod_floor(m);
        if c.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            rem[k + j] = (&rem[k + j] - &c * y).mod_floor(m);
        }
        quot[k] = c;
    }
    rem.truncate(db);
    (zm_trim(quot), zm_reduce(&rem, m))
}

fn fp_to_zm(a: &[u64]) -> Zm {
    a.iter().map(|&c| BigInt::from(c)).collect()
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> BigInt {
    let e = a.mod_floor(m).extended_gcd(m);
    debug_assert!(e.gcd.is_one(), "no inverse modulo m");
    e.x.mod_floor(m)
}

/// Lift `f ≡ g h (mod p)` with `s g + t h ≡ 1` to modulus `p^(2^steps)`.
#[allow(clippy::too_many_arguments)]
fn hensel_pair(f: &[BigInt], mut g: Zm, mut h: Zm, mut s: Zm, mut t: Zm, p: &BigInt, steps: u32) -> (Zm, Zm) {
    let mut m = p.clone();
    for _ in 0..steps {
        let m2 = &m * &m;
        let e = zm_sub(f, &zm_mul(&g, &h, &m2), &m2);
        let (quot, r) = zm_divrem_monic(&zm_mul(&s, &e, &m2), &h, &m2);
        let g_new = zm_add(&zm_add(&g, &zm_mul(&t, &e, &m2), &m2), &zm_mul(&quot, &g, &m2), &m2);
        let h_new = zm_add(&h, &r, &m2);
        let b = zm_sub(&zm_add(&zm_mul(&s, &g_new, &m2), &zm_mul(&t, &h_new, &m2), &m2), &[BigInt::one()], &m2);
        let (c, d) = zm_divrem_monic(&zm_mul(&s, &b, &m2), &h_new, &m2);
        s = zm_sub(&s, &d, &m2);
        t = zm_sub(&zm_sub(&t, &zm_mul(&t, &b, &m2), &m2), &zm_mul(&c, &g_new, &m2), &m2);
        g = g_new;
        h = h_new;
        m = m2;
    }
    (g, h)
}

/// Lift the monic modular factors of `f` (leading coefficient `lc`) to
/// monic factors modulo `p^(2^steps)` by a balanced factor tree.
fn multifactor_lift(f: &[BigInt], lc: &BigInt, factors: &[Fp], p: u64, steps: u32) -> Vec<Zm> {
    let pb = BigInt::from(p);
    let modulus = pb.pow(1u32 << steps);
    if factors.len() == 1 {
        let inv = mod_inverse(lc, &modulus);
        let scaled: Zm = f.iter().map(|c| c * &inv).collect();
        return vec![zm_reduce(&scaled, &modulus)];
    }
    let (left, right) = factors.split_at(factors.len() / 2);
    let lc_p = lc.mod_floor(&pb).to_u64().expect("residue fits");
    let g0 = left.iter().fold(vec![lc_p], |acc, u| fp_mul(&acc, u, p));
    let h0 = right.iter().fold(vec![1u64], |acc, u| fp_mul(&acc, u, p));
    let (s, t) = fp_bezout(&g0, &h0, p);
    let (g, h) = hensel_pair(f, fp_to_zm(&g0), fp_to_zm(&h0), fp_to_zm(&s), fp_to_zm(&t), &pb, steps);
    let mut out = multifactor_lift(&g, lc, left, p, steps);
    out.extend(multifactor_lift(&h, &BigInt::one(), right, p, steps));
    out
}

fn symmetric(a: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let half = m / 2;
    a.iter()
        .map(|c| {
            let c = c.mod_floor(m);
            if c > half {
                c - m
            } else {
                c
            }
        })
        .collect()
}

fn int_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn primitive(a: Vec<BigInt>) -> Vec<BigInt> {
    let a = zm_trim(a);
    let content = a.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if content.is_zero() {
        return a;
    }
    let sgn = if a.last().is_some_and(Signed::is_negative) { -BigInt::one() } else { BigInt::one() };
    a.into_iter().map(|c| c / &content * &sgn).collect()
}

fn small_primes() -> impl Iterator<Item = u64> {
    (3u64..2000).step_by(2).filter(|&n| (3..).step_by(2).take_while(|d| d * d <= n).all(|d| n % d != 0))
}

/// Irreducible factors over Z of a primitive squarefree polynomial with
/// positive leading coefficient, `f(0) != 0`, degree at least 2.
fn zassenhaus(f: &[BigInt]) -> Result<Vec<Vec<BigInt>>> {
    let n = f.len() - 1;
    let lc = f[n].clone();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_f00d);

    // Pick the prime with the fewest modular factors among the first few good ones.
    let mut best: Option<(u64, Vec<Fp>)> = None;
    let mut tried = 0;
    for p in small_primes() {
        if (&lc % BigInt::from(p)).is_zero() {
            continue;
        }
        let fp = fp_monic(&fp_from_int(f, p), p);
        if fp.len() != n + 1 || fp_gcd(&fp, &fp_derivative(&fp, p), p).len() != 1 {
            continue;
        }
        let facs = fp_factor(&fp, p, &mut rng);
        if facs.len() == 1 {
            return Ok(vec![f.to_vec()]);
        }
        if best.as_ref().is_none_or(|(_, b)| facs.len() < b.len()) {
            best = Some((p, facs));
        }
        tried += 1;
        if tried == 5 {
            break;
        }
    }
    let (p, mut modular) = best.ok_or_else(|| Error::Internal("no suitable prime for modular factorization".into()))?;
    modular.sort();

    // Coefficient bound for lc * (any factor): |lc| * 2^n * ||f||_2.
    let norm_sq: BigInt = f.iter().map(|c| c * c).sum();
    let norm = norm_sq.sqrt() + BigInt::one();
    let bound = BigInt::from(2) * lc.abs() * (BigInt::one() << n) * norm;
    let pb = BigInt::from(p);
    let mut steps = 0u32;
    while pb.pow(1u32 << steps) <= bound {
        steps += 1;
    }
    let modulus = pb.pow(1u32 << steps);
    let mut lifted = multifactor_lift(f, &lc, &modular, p, steps);

    let mut result = Vec::new();
    let mut current = f.to_vec();
    let mut size = 1;
    while 2 * size <= lifted.len() {
        let mut found = None;
        for subset in combinations(lifted.len(), size) {
            let cur_lc = current.last().expect("nonzero").clone();
            let mut g: Zm = vec![cur_lc.clone()];
            let mut h: Zm = vec![cur_lc];
            for (i, u) in lifted.iter().enumerate() {
                if subset.contains(&i) {
                    g = zm_mul(&g, u, &modulus);
                } else {
                    h = zm_mul(&h, u, &modulus);
                }
            }
            let g = primitive(symmetric(&g, &modulus));
            let h = primitive(symmetric(&h, &modulus));
            if int_mul(&g, &h) == current {
                found = Some((subset, g, h));
                break;
            }
        }
        match found {
            Some((subset, g, h)) => {
                result.push(g);
                current = h;
                let mut i = 0;
                lifted.retain(|_| {
                    let keep = !subset.contains(&i);
                    i += 1;
                    keep
                });
            }
            None => size += 1,
        }
    }
    result.push(current);
    Ok(result)
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(idx.clone());
        let Some(i) = (0..k).rev().find(|&i| idx[i] != i + n - k) else {
            return out;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}
