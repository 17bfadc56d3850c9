//! Real root isolation by Sturm sequences and rational bisection.

use super::{factor, q, sign, Rational, UPoly, FACTOR_DEGREE_CAP};
use crate::error::{Error, Result};
use num::{Signed, Zero};

/// A real algebraic number: the unique root of `defining` inside `[lo, hi]`.
///
/// Either `lo == hi` (a rational root) or `lo < hi`, neither endpoint is a
/// root, and `defining` changes sign across the interval.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealRoot {
    defining: UPoly,
    lo: Rational,
    hi: Rational,
}

impl RealRoot {
    /// Rational root `x` of `X - x`.
    pub fn rational(x: Rational) -> Self {
        RealRoot { defining: UPoly::linear(&x), lo: x.clone(), hi: x }
    }

    pub fn defining(&self) -> &UPoly {
        &self.defining
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn is_rational(&self) -> bool {
        self.lo == self.hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    /// Interval midpoint, a rational approximation of the root.
    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / q(2)
    }

    /// One bisection step.
    pub fn bisect(&self) -> RealRoot {
        if self.is_rational() {
            return self.clone();
        }
        let mid = self.midpoint();
        let at_mid = sign(&self.defining.eval(&mid));
        if at_mid == 0 {
            return RealRoot { defining: self.defining.clone(), lo: mid.clone(), hi: mid };
        }
        if sign(&self.defining.eval(&self.lo)) != at_mid {
            RealRoot { defining: self.defining.clone(), lo: self.lo.clone(), hi: mid }
        } else {
            RealRoot { defining: self.defining.clone(), lo: mid, hi: self.hi.clone() }
        }
    }

    /// Bisect until the interval is no wider than `width`.
    pub fn refine(&self, width: &Rational) -> RealRoot {
        let mut r = self.clone();
        while r.width() > *width {
            r = r.bisect();
        }
        r
    }
}

fn sturm_sequence(f: &UPoly) -> Vec<UPoly> {
    let mut seq = vec![f.clone(), f.derivative()];
    loop {
        let n = seq.len();
        if seq[n - 1].is_zero() {
            seq.pop();
            return seq;
        }
        let r = seq[n - 2].rem(&seq[n - 1]).neg();
        if r.is_zero() {
            return seq;
        }
        seq.push(r);
    }
}

fn count_changes(signs: impl Iterator<Item = i32>) -> usize {
    let mut last = 0;
    let mut changes = 0;
    for s in signs.filter(|&s| s != 0) {
        if last != 0 && s != last {
            changes += 1;
        }
        last = s;
    }
    changes
}

fn changes_at(seq: &[UPoly], x: &Rational) -> usize {
    count_changes(seq.iter().map(|p| sign(&p.eval(x))))
}

fn changes_at_infinity(seq: &[UPoly], positive: bool) -> usize {
    count_changes(seq.iter().map(|p| {
        let s = sign(&p.leading());
        if positive || p.degree().unwrap_or(0) % 2 == 0 {
            s
        } else {
            -s
        }
    }))
}

/// Number of distinct real roots of a nonzero polynomial.
pub fn sturm_count(f: &UPoly) -> Result<usize> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let g = f.squarefree_part();
    if g.degree() == Some(0) {
        return Ok(0);
    }
    let seq = sturm_sequence(&g);
    Ok(changes_at_infinity(&seq, false) - changes_at_infinity(&seq, true))
}

/// Bound strictly exceeding the absolute value of every root (Cauchy).
fn cauchy_bound(f: &UPoly) -> Rational {
    let lc = f.leading().abs();
    let n = f.degree().unwrap_or(0);
    let m = (0..n).map(|i| f.coeff(i).abs() / &lc).max().unwrap_or_else(Rational::zero);
    m + q(1)
}

/// Isolating intervals for the distinct real roots, in ascending order.
pub fn isolate_real_roots(f: &UPoly) -> Result<Vec<RealRoot>> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let g = f.squarefree_part();
    if g.degree() == Some(0) {
        return Ok(Vec::new());
    }
    let seq = sturm_sequence(&g);
    let b = cauchy_bound(&g);
    let mut out = Vec::new();
    isolate(&g, &seq, -b.clone(), b, &mut out);
    // Rational roots are reported exactly; bisection alone need not land on them.
    if g.degree().unwrap_or(0) <= FACTOR_DEGREE_CAP {
        let rational: Vec<Rational> =
            factor(&g)?.factors.iter().filter(|(p, _)| p.degree() == Some(1)).map(|(p, _)| -p.coeff(0)).collect();
        for r in out.iter_mut().filter(|r| !r.is_rational()) {
            if let Some(x) = rational.iter().find(|x| **x > r.lo && **x < r.hi) {
                r.lo = x.clone();
                r.hi = x.clone();
            }
        }
    }
    Ok(out)
}

/// Roots in the open interval `(a, b)`; `a` and `b` are not roots.
fn isolate(g: &UPoly, seq: &[UPoly], a: Rational, b: Rational, out: &mut Vec<RealRoot>) {
    let count = changes_at(seq, &a) - changes_at(seq, &b);
    match count {
        0 => {}
        1 => out.push(RealRoot { defining: g.clone(), lo: a, hi: b }),
        _ => {
            let mid = (&a + &b) / q(2);
            if !g.eval(&mid).is_zero() {
                isolate(g, seq, a, mid.clone(), out);
                isolate(g, seq, mid, b, out);
                return;
            }
            // Cut out a neighbourhood of the rational root that holds no other root.
            let mut delta = (&b - &a) / q(4);
            loop {
                let lo = &mid - &delta;
                let hi = &mid + &delta;
                if !g.eval(&lo).is_zero() && !g.eval(&hi).is_zero() && changes_at(seq, &lo) - changes_at(seq, &hi) == 1
                {
                    isolate(g, seq, a, lo.clone(), out);
                    out.push(RealRoot { defining: g.clone(), lo: mid.clone(), hi: mid });
                    isolate(g, seq, hi, b, out);
                    return;
                }
                delta /= q(2);
            }
        }
    }
}

/// Exact sign of `g` at the algebraic number `r`.
pub fn sign_at_root(g: &UPoly, r: &RealRoot) -> i32 {
    if g.is_zero() {
        return 0;
    }
    if r.is_rational() {
        return sign(&g.eval(&r.lo));
    }
    let h = g.gcd(&r.defining);
    if h.degree().unwrap_or(0) > 0 && sign(&h.eval(&r.lo)) != sign(&h.eval(&r.hi)) {
        return 0;
    }
    let gs = g.squarefree_part();
    let seq = sturm_sequence(&gs);
    let mut r = r.clone();
    loop {
        if r.is_rational() {
            return sign(&g.eval(&r.lo));
        }
        let (slo, shi) = (sign(&gs.eval(&r.lo)), sign(&gs.eval(&r.hi)));
        if slo != 0 && shi != 0 && changes_at(&seq, &r.lo) == changes_at(&seq, &r.hi) {
            return sign(&g.eval(&r.lo));
        }
        r = r.refine(&(r.width() / q(2)));
    }
}

/// Exact comparison of `r` with a rational `x`: sign of `r - x`.
pub(crate) fn compare_root(r: &RealRoot, x: &Rational) -> i32 {
    sign_at_root(&UPoly::linear(x), r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::qr;

    fn p(c: &[i64]) -> UPoly {
        UPoly::from_i64(c)
    }

    #[test]
    fn sqrt_two_roots() {
        let roots = isolate_real_roots(&p(&[-2, 0, 1])).unwrap();
        assert_eq!(roots.len(), 2);
        let neg = roots[0].refine(&qr(1, 2));
        assert!(*neg.lo() >= q(-2) && *neg.hi() <= q(-1));
        let pos = roots[1].refine(&qr(1, 2));
        assert!(*pos.lo() >= q(1) && *pos.hi() <= q(2));
        assert_eq!(sturm_count(&p(&[-2, 0, 1])).unwrap(), 2);
    }

    #[test]
    fn no_real_roots() {
        assert!(isolate_real_roots(&p(&[1, 0, 1])).unwrap().is_empty());
    }

    #[test]
    fn exact_rational_roots() {
        let roots = isolate_real_roots(&p(&[0, -1, 1])).unwrap();
        assert_eq!(roots.len(), 2);
        for (r, x) in roots.iter().zip([0, 1]) {
            assert_eq!(r.lo(), &q(x));
            assert!(r.is_rational());
        }
    }

    #[test]
    fn signs_at_sqrt_two() {
        let f = p(&[-2, 0, 1]);
        let r = isolate_real_roots(&f).unwrap().pop().unwrap();
        assert_eq!(sign_at_root(&UPoly::x(), &r), 1);
        assert_eq!(sign_at_root(&f, &r), 0);
        assert_eq!(sign_at_root(&p(&[-2, 1]), &r), -1);
        assert_eq!(sign_at_root(&f.mul(&p(&[5, 1])), &r), 0);
        // 140/99 < sqrt 2 < 99/70
        assert_eq!(sign_at_root(&UPoly::new(vec![qr(-140, 99), q(1)]), &r), 1);
        assert_eq!(sign_at_root(&UPoly::new(vec![qr(-99, 70), q(1)]), &r), -1);
    }

    #[test]
    fn clustered_roots_are_ordered() {
        // (X - 1)(X - 1001/1000)(X^2 - 2)
        let f = p(&[-1, 1]).mul(&UPoly::linear(&qr(1001, 1000))).mul(&p(&[-2, 0, 1]));
        let roots = isolate_real_roots(&f).unwrap();
        assert_eq!(roots.len(), 4);
        assert!(roots.windows(2).all(|w| w[0].hi() <= w[1].lo()));
        assert_eq!(compare_root(&roots[1], &q(1)), 0);
        assert_eq!(compare_root(&roots[2], &q(1)), 1);
    }
}
