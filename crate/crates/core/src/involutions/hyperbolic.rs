//! Search for hyperbolic idempotents through the semisimple quotient.

use super::algebra::{InvAlgebra, Subspace};
use super::radical::{lift_idempotent, radical_subspace, IdemWitness};
use crate::error::{Error, Result};
use crate::exactmath::{factor, q, rational_sqrt, QMatrix, QVector, Rational};
use crate::quadforms::QuadForm;
use num::{Integer, Zero};

/// Default height bound for the skew-element search.
pub const DEFAULT_SEARCH_HEIGHT: i64 = 3;

/// Cap on the number of skew candidates tried per factor.
const MAX_CANDIDATES: usize = 200_000;

/// Outcome of [`find_hyperbolic_idempotent`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HypVerdict {
    Witness(IdemWitness),
    /// Some simple factor of the semisimple quotient provably has no
    /// hyperbolic idempotent.
    NoneCertified,
    /// The bounded search was inconclusive.
    Unknown,
}

impl HypVerdict {
    pub fn label(&self) -> &'static str {
        match self {
            HypVerdict::Witness(_) => "witness",
            HypVerdict::NoneCertified => "none_certified",
            HypVerdict::Unknown => "unknown",
        }
    }
}

enum FactorVerdict {
    Witness(QVector),
    None,
    Unknown,
}

pub fn find_hyperbolic_idempotent(a: &InvAlgebra) -> Result<HypVerdict> {
    find_hyperbolic_idempotent_with(a, DEFAULT_SEARCH_HEIGHT)
}

/// As [`find_hyperbolic_idempotent`] with an explicit search height.
pub fn find_hyperbolic_idempotent_with(a: &InvAlgebra, height: i64) -> Result<HypVerdict> {
    let j = radical_subspace(a)?;
    let quot = a.quotient(&j);
    let bar = &quot.algebra;
    let mut eps = bar.zero();
    let mut unknown = false;
    for (e, fixed) in sigma_orbits(bar, &central_idempotents(bar)?) {
        let verdict = if fixed { fixed_factor(bar, &e, height)? } else { FactorVerdict::Witness(e) };
        match verdict {
            FactorVerdict::Witness(x) => add_into(&mut eps, &x),
            FactorVerdict::None => return Ok(HypVerdict::NoneCertified),
            FactorVerdict::Unknown => unknown = true,
        }
    }
    if unknown {
        return Ok(HypVerdict::Unknown);
    }
    let lifted = lift_idempotent(a, j.basis(), &quot.section(&eps, a.dim()))?;
    Ok(HypVerdict::Witness(lifted))
}

fn add_into(acc: &mut [Rational], x: &[Rational]) {
    for (a, b) in acc.iter_mut().zip(x) {
        *a += b;
    }
}

fn scaled(x: &[Rational], c: &Rational) -> QVector {
    x.iter().map(|v| v * c).collect()
}

/// Basis of the center.
fn center(a: &InvAlgebra) -> Vec<QVector> {
    let d = a.dim();
    let mut rows: Vec<QVector> = Vec::new();
    for i in 0..d {
        // z b_i - b_i z = Σ_s z_s (b_s b_i - b_i b_s)
        let mut block = vec![vec![Rational::zero(); d]; d];
        #[allow(clippy::needless_range_loop)]
        for s in 0..d {
            for (w, c) in a.product_of_basis(s, i) {
                block[*w][s] += c;
            }
            for (w, c) in a.product_of_basis(i, s) {
                block[*w][s] -= c;
            }
        }
        rows.extend(block.into_iter().filter(|r| r.iter().any(|x| !x.is_zero())));
    }
    if rows.is_empty() {
        return (0..d).map(|s| a.basis_vector(s)).collect();
    }
    QMatrix::from_rows(rows).expect("rectangular").kernel()
}

/// Primitive central idempotents of a semisimple algebra.
///
/// Minimal polynomials of the sweep `c_k = Σ_i k^i z_i` over a center basis are
/// factored; coprime factors split blocks through CRT idempotents until every
/// block of the center is a field.
fn central_idempotents(a: &InvAlgebra) -> Result<Vec<QVector>> {
    let z = center(a);
    let mut work = vec![a.unit().clone()];
    let mut done = Vec::new();
    while let Some(e) = work.pop() {
        let block: Vec<QVector> = z.iter().map(|x| a.mul(&e, x)).collect();
        let block = Subspace::span(&block, a.dim());
        let r = block.dim();
        if r <= 1 {
            done.push(e);
            continue;
        }
        let mut resolved = false;
        for k in 1..=(8 * r as i64 + 8) {
            let mut c = a.zero();
            let mut pw = q(1);
            for zi in block.basis() {
                add_into(&mut c, &scaled(zi, &pw));
                pw *= q(k);
            }
            let mu = a.element_minpoly(&c, &e);
            let fac = factor(&mu)?;
            if fac.max_multiplicity() > 1 {
                return Err(Error::Internal("center of the quotient is not reduced".into()));
            }
            if fac.factors.len() > 1 {
                for (p, _) in &fac.factors {
                    let others = mu.div_exact(p).expect("factor divides");
                    let (_, s, _) = others.ext_gcd(p);
                    let poly = s.mul(&others).rem(&mu);
                    work.push(a.eval_poly(&poly, &c, &e));
                }
                resolved = true;
                break;
            }
            if mu.degree() == Some(r) {
                // a primitive element of a field block
                done.push(e.clone());
                resolved = true;
                break;
            }
        }
        if !resolved {
            return Err(Error::Internal("no primitive element found for a central block".into()));
        }
    }
    done.sort();
    Ok(done)
}

/// Group primitive central idempotents into σ-orbits: `(e, true)` for fixed
/// ones, `(e, false)` once per exchanged pair `{e, σ(e)}`.
fn sigma_orbits(a: &InvAlgebra, idems: &[QVector]) -> Vec<(QVector, bool)> {
    let mut seen = vec![false; idems.len()];
    let mut out = Vec::new();
    for i in 0..idems.len() {
        if seen[i] {
            continue;
        }
        seen[i] = true;
        let s = a.sigma(&idems[i]);
        if s == idems[i] {
            out.push((idems[i].clone(), true));
        } else {
            if let Some(k) = idems.iter().position(|x| *x == s) {
                seen[k] = true;
            }
            out.push((idems[i].clone(), false));
        }
    }
    out
}

/// Hyperbolic idempotent of the σ-stable simple factor `eĀ`, if one is found.
fn fixed_factor(a: &InvAlgebra, e: &QVector, height: i64) -> Result<FactorVerdict> {
    let d = a.dim();
    let factor_basis: Vec<QVector> = (0..d).map(|s| a.mul(e, &a.basis_vector(s))).collect();
    let factor_space = Subspace::span(&factor_basis, d);
    let center_dim = Subspace::span(&center(a).iter().map(|z| a.mul(e, z)).collect::<Vec<_>>(), d).dim();
    // a field has only the idempotents 0 and e
    if factor_space.dim() == center_dim {
        return Ok(FactorVerdict::None);
    }
    // a hyperbolic involution has a hyperbolic trace form
    let tau = a.trace_vector();
    let tr = |x: &QVector| -> Rational { x.iter().zip(&tau).map(|(u, v)| u * v).sum() };
    let fb = factor_space.basis();
    let mut g = QMatrix::zeros(fb.len(), fb.len());
    for (i, x) in fb.iter().enumerate() {
        let sx = a.sigma(x);
        for (k, y) in fb.iter().enumerate() {
            let sy = a.sigma(y);
            g[(i, k)] = (tr(&a.mul(&sx, y)) + tr(&a.mul(&sy, x))) / q(2);
        }
    }
    if QuadForm::new(g).expect("symmetrized").signature() != 0 {
        return Ok(FactorVerdict::None);
    }
    // skew elements u with u² = e give e' = (e + u) / 2
    let mut skew: Vec<QVector> = Vec::new();
    for x in fb {
        let u: QVector = x.iter().zip(a.sigma(x)).map(|(p, s)| p - s).collect();
        let u = a.mul(e, &u);
        let mut trial = skew.clone();
        trial.push(u.clone());
        if Subspace::span(&trial, d).dim() == trial.len() {
            skew.push(u);
        }
    }
    let from_skew = |u: &QVector, c: &Rational| -> Option<QVector> {
        let root = rational_sqrt(c)?;
        if root.is_zero() {
            return None;
        }
        let half = q(1) / q(2);
        let v: QVector = e.iter().zip(u).map(|(ei, ui)| (ei + ui / &root) * &half).collect();
        Some(v)
    };
    match skew.len() {
        0 => Ok(FactorVerdict::None),
        1 => {
            let s = &skew[0];
            match scalar_multiple(&a.mul(s, s), e) {
                Some(mu) => Ok(from_skew(s, &mu).map_or(FactorVerdict::None, FactorVerdict::Witness)),
                None => Ok(FactorVerdict::None),
            }
        }
        _ => {
            for c in primitive_vectors(skew.len(), height).take(MAX_CANDIDATES) {
                let mut u = a.zero();
                for (ci, s) in c.iter().zip(&skew) {
                    if *ci != 0 {
                        add_into(&mut u, &scaled(s, &q(*ci)));
                    }
                }
                if let Some(mu) = scalar_multiple(&a.mul(&u, &u), e) {
                    if let Some(w) = from_skew(&u, &mu) {
                        return Ok(FactorVerdict::Witness(w));
                    }
                }
            }
            Ok(FactorVerdict::Unknown)
        }
    }
}

/// `Some(c)` when `x = c e`.
fn scalar_multiple(x: &[Rational], e: &[Rational]) -> Option<Rational> {
    let k = e.iter().position(|v| !v.is_zero())?;
    let c = &x[k] / &e[k];
    x.iter().zip(e).all(|(xi, ei)| *xi == &c * ei).then_some(c)
}

/// Primitive integer vectors up to sign (first nonzero entry positive), in
/// increasing max-norm with lexicographic tie-break.
fn primitive_vectors(len: usize, height: i64) -> impl Iterator<Item = Vec<i64>> {
    (1..=height).flat_map(move |h| {
        let side = (2 * h + 1) as u64;
        let total = side.checked_pow(len as u32).unwrap_or(u64::MAX);
        (0..total).filter_map(move |mut code| {
            let mut v = vec![0i64; len];
            for slot in v.iter_mut().rev() {
                *slot = (code % side) as i64 - h;
                code /= side;
            }
            let max = v.iter().map(|x| x.abs()).max().unwrap_or(0);
            let first = v.iter().find(|x| **x != 0).copied().unwrap_or(0);
            let g = v.iter().fold(0i64, |acc, x| acc.gcd(x));
            (max == h && first > 0 && g == 1).then_some(v)
        })
    })
}
