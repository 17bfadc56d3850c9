//! Nonsingular pairs of forms: the twisted-arrow view, the pencil
//! endomorphism `J = q₁⁻¹ q₂`, its primary (Kronecker) decomposition and the
//! constructive search for nonzero-signature forms in the closure.

use crate::closure::closure_contains;
use crate::error::{Error, Result};
use crate::exactmath::{
    compare_root, factor, isolate_real_roots, q, sign_at_root, QMatrix, QVector, Rational, RealRoot, UPoly,
};
use crate::involutions::{theorem1_decide, Subspace};
use crate::quadforms::{find_unimodular_combination, QFSystem, QuadForm};
use num::Zero;

/// `(U, f₁, f₂, V)` with `f_i : U → V*` stored as `dim V × dim U` matrices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistedArrow {
    pub dim_u: usize,
    pub dim_v: usize,
    pub f1: QMatrix,
    pub f2: QMatrix,
}

impl TwistedArrow {
    pub fn new(f1: QMatrix, f2: QMatrix) -> Result<Self> {
        if f1.rows() != f2.rows() || f1.cols() != f2.cols() {
            return Err(Error::DimensionMismatch("arrow maps of different shapes".into()));
        }
        Ok(TwistedArrow { dim_u: f1.cols(), dim_v: f1.rows(), f1, f2 })
    }

    pub fn orthogonal_sum(&self, other: &TwistedArrow) -> TwistedArrow {
        let sum = |a: &QMatrix, b: &QMatrix| {
            let mut m = QMatrix::zeros(a.rows() + b.rows(), a.cols() + b.cols());
            m.set_block(0, 0, a);
            m.set_block(a.rows(), a.cols(), b);
            m
        };
        TwistedArrow {
            dim_u: self.dim_u + other.dim_u,
            dim_v: self.dim_v + other.dim_v,
            f1: sum(&self.f1, &other.f1),
            f2: sum(&self.f2, &other.f2),
        }
    }
}

/// A unimodular hermitian form `h = (φ, φ)` on a twisted arrow with `U = V`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HermSpace {
    pub arrow: TwistedArrow,
    pub form_phi: QMatrix,
}

impl HermSpace {
    /// Checks `U = V`, `φ` invertible and `φᵗ f_i = f_iᵗ φ`.
    pub fn validate(&self) -> Result<()> {
        let a = &self.arrow;
        if a.dim_u != a.dim_v || self.form_phi.rows() != a.dim_u || !self.form_phi.is_square() {
            return Err(Error::DimensionMismatch("hermitian space needs U = V and square φ".into()));
        }
        if self.form_phi.inverse().is_none() {
            return Err(Error::InvalidArgument("φ is not invertible".into()));
        }
        let pt = self.form_phi.transpose();
        for f in [&a.f1, &a.f2] {
            if pt.mul(f) != f.transpose().mul(&self.form_phi) {
                return Err(Error::InvalidArgument("φ is not hermitian for the arrow".into()));
            }
        }
        Ok(())
    }

    pub fn orthogonal_sum(&self, other: &HermSpace) -> HermSpace {
        HermSpace {
            arrow: self.arrow.orthogonal_sum(&other.arrow),
            form_phi: QMatrix::block_diag(&[self.form_phi.clone(), other.form_phi.clone()]),
        }
    }
}

fn require_pair(sys: &QFSystem) -> Result<()> {
    if sys.len() != 2 {
        return Err(Error::InvalidArgument(format!("expected a pair of forms, got {}", sys.len())));
    }
    Ok(())
}

/// `(V, q₁, q₂) ↦ ((V, q₁, q₂, V), φ = I)`.
#[allow(non_snake_case)]
pub fn F_functor(sys: &QFSystem) -> Result<HermSpace> {
    require_pair(sys)?;
    let f = sys.forms();
    Ok(HermSpace {
        arrow: TwistedArrow::new(f[0].gram().clone(), f[1].gram().clone())?,
        form_phi: QMatrix::identity(sys.dim()),
    })
}

/// `((U, f₁, f₂, V), φ) ↦ (U, φᵗ f₁, φᵗ f₂)`.
#[allow(non_snake_case)]
pub fn G_functor(h: &HermSpace) -> Result<QFSystem> {
    h.validate()?;
    let pt = h.form_phi.transpose();
    QFSystem::new(vec![QuadForm::new(pt.mul(&h.arrow.f1))?, QuadForm::new(pt.mul(&h.arrow.f2))?])
}

/// `J_n(α)`: `α` on the diagonal, ones on the superdiagonal.
#[allow(non_snake_case)]
pub fn jordan_J(n: usize, alpha: &Rational) -> Result<QMatrix> {
    check_size(n)?;
    let mut m = QMatrix::zeros(n, n);
    for i in 0..n {
        m[(i, i)] = alpha.clone();
        if i + 1 < n {
            m[(i, i + 1)] = q(1);
        }
    }
    Ok(m)
}

/// `S_n(α)`: `α` on the antidiagonal, ones just below it.
#[allow(non_snake_case)]
pub fn hankel_S(n: usize, alpha: &Rational) -> Result<QMatrix> {
    check_size(n)?;
    let mut m = QMatrix::zeros(n, n);
    for i in 0..n {
        m[(i, n - 1 - i)] = alpha.clone();
        if i > 0 {
            m[(i, n - i)] = q(1);
        }
    }
    Ok(m)
}

/// `T_n`: the antidiagonal identity.
#[allow(non_snake_case)]
pub fn antidiag_T(n: usize) -> Result<QMatrix> {
    check_size(n)?;
    let mut m = QMatrix::zeros(n, n);
    for i in 0..n {
        m[(i, n - 1 - i)] = q(1);
    }
    Ok(m)
}

/// `Z_n(α) = (ℚⁿ, T_n, S_n(α), ℚⁿ)`.
#[allow(non_snake_case)]
pub fn Z_n_alpha(n: usize, alpha: &Rational) -> Result<TwistedArrow> {
    TwistedArrow::new(antidiag_T(n)?, hankel_S(n, alpha)?)
}

fn check_size(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidArgument("block size must be at least 1".into()));
    }
    Ok(())
}

/// `J = q₁⁻¹ q₂`, checked to be self-adjoint for both forms.
#[allow(non_snake_case)]
pub fn pencil_J(sys: &QFSystem) -> Result<QMatrix> {
    require_pair(sys)?;
    let (q1, q2) = (sys.forms()[0].gram(), sys.forms()[1].gram());
    let inv = q1.inverse().ok_or(Error::SingularLeadingForm)?;
    let j = inv.mul(q2);
    let jt = j.transpose();
    if jt.mul(q1) != q1.mul(&j) || jt.mul(q2) != q2.mul(&j) {
        return Err(Error::Internal("pencil endomorphism is not self-adjoint".into()));
    }
    Ok(j)
}

/// Replace the pair by one spanning the same space whose first form is
/// unimodular. Refuses when the span has no unimodular member.
pub fn rebase_pair(sys: &QFSystem) -> Result<QFSystem> {
    require_pair(sys)?;
    if sys.forms()[0].is_unimodular() {
        return Ok(sys.clone());
    }
    let c = find_unimodular_combination(sys).ok_or(Error::SingularSystem)?;
    let lead = sys.combination(&c)?;
    // keep a form whose coefficient is nonzero out, so the span is unchanged
    let other = if c[0].is_zero() { sys.forms()[0].clone() } else { sys.forms()[1].clone() };
    QFSystem::new(vec![lead, other])
}

/// One isomorphism class of primary blocks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KroneckerBlock {
    pub prime: UPoly,
    pub exponent: u32,
    pub multiplicity: usize,
    /// Companion matrix of `prime^exponent`.
    pub block_matrix: QMatrix,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KroneckerDecomposition {
    pub blocks: Vec<KroneckerBlock>,
    /// `P` with `P⁻¹ J P` block diagonal, blocks in the listed order with
    /// each class repeated `multiplicity` times.
    pub base_change: QMatrix,
}

/// Primary decomposition of `ℚⁿ` under the pencil endomorphism.
pub fn kronecker_decompose(sys: &QFSystem) -> Result<KroneckerDecomposition> {
    let j = pencil_J(sys)?;
    decompose_endomorphism(&j)
}

/// Primary rational canonical form of a square matrix, with certificate.
pub fn decompose_endomorphism(j: &QMatrix) -> Result<KroneckerDecomposition> {
    let n = j.rows();
    let fac = factor(&j.charpoly()?)?;
    let mut blocks = Vec::new();
    let mut columns: Vec<QVector> = Vec::new();
    for (p, e) in &fac.factors {
        let d = p.degree().expect("nonconstant factor");
        let pj = p.eval_matrix(j);
        // W_k = ker p(J)^k for k = 0..=e
        let mut w: Vec<Subspace> = vec![Subspace::span(&[], n)];
        let mut power = QMatrix::identity(n);
        for _ in 0..*e {
            power = power.mul(&pj);
            w.push(Subspace::span(&power.kernel(), n));
        }
        let top = (1..=*e as usize).find(|&k| w[k].dim() == w[*e as usize].dim()).unwrap_or(0);
        for k in (1..=top).rev() {
            // generators of W_k modulo W_{k-1} + p(J) W_{k+1}
            let mut spanning: Vec<QVector> = w[k - 1].basis().to_vec();
            if k < top {
                spanning.extend(w[k + 1].basis().iter().map(|x| pj.mul_vec(x)));
            }
            let mut m = Subspace::span(&spanning, n);
            let mut count = 0;
            for x in w[k].basis() {
                if m.contains(x) {
                    continue;
                }
                let mut orbit = vec![x.clone()];
                for _ in 1..d * k {
                    let next = j.mul_vec(orbit.last().expect("nonempty"));
                    orbit.push(next);
                }
                let mut grown = m.basis().to_vec();
                grown.extend(orbit[..d].iter().cloned());
                m = Subspace::span(&grown, n);
                columns.extend(orbit);
                count += 1;
            }
            if count > 0 {
                blocks.push(KroneckerBlock {
                    prime: p.clone(),
                    exponent: k as u32,
                    multiplicity: count,
                    block_matrix: p.pow(k as u32).companion(),
                });
            }
        }
    }
    let base_change = QMatrix::from_columns(n, &columns);
    let expected = QMatrix::block_diag(
        &blocks.iter().flat_map(|b| std::iter::repeat_n(b.block_matrix.clone(), b.multiplicity)).collect::<Vec<_>>(),
    );
    let ok = columns.len() == n && base_change.inverse().is_some_and(|inv| inv.mul(j).mul(&base_change) == expected);
    if !ok {
        return Err(Error::Internal("primary decomposition certificate failed".into()));
    }
    Ok(KroneckerDecomposition { blocks, base_change })
}

/// `q₁ f(J)` without the closure check.
fn poly_form(sys: &QFSystem, j: &QMatrix, f: &UPoly) -> Result<QuadForm> {
    QuadForm::new(sys.forms()[0].gram().mul(&f.eval_matrix(j)))
        .map_err(|_| Error::Internal("q1 f(J) is not symmetric".into()))
}

/// `q₁ f(J)`, verified to lie in the closure of the pair.
pub fn closure_poly_form(sys: &QFSystem, f: &UPoly) -> Result<QuadForm> {
    let j = pencil_J(sys)?;
    let form = poly_form(sys, &j, f)?;
    if !closure_contains(sys, &form)? {
        return Err(Error::Internal("q1 f(J) fell outside the closure".into()));
    }
    Ok(form)
}

fn same_root(a: &RealRoot, b: &RealRoot) -> bool {
    sign_at_root(b.defining(), a) == 0 && compare_root(a, b.lo()) >= 0 && compare_root(a, b.hi()) <= 0
}

/// A rational polynomial positive at every root of `pos` and negative at every
/// root of `neg`, certified exactly.
///
/// Lagrange interpolation of `±1` at rational approximations of the roots;
/// if certification fails the approximations are refined and the
/// construction repeated.
#[allow(non_snake_case)]
pub fn condition_E_poly(pos: &[RealRoot], neg: &[RealRoot]) -> Result<UPoly> {
    let targets: Vec<(RealRoot, i32)> =
        pos.iter().map(|r| (r.clone(), 1)).chain(neg.iter().map(|r| (r.clone(), -1))).collect();
    for a in pos {
        if neg.iter().any(|b| same_root(a, b)) {
            return Err(Error::Precondition("a root is required to be both positive and negative".into()));
        }
    }
    if targets.is_empty() {
        return Ok(UPoly::one());
    }
    let mut roots: Vec<RealRoot> = targets.iter().map(|(r, _)| r.clone()).collect();
    let mut width = q(1);
    loop {
        roots = roots.iter().map(|r| r.refine(&width)).collect();
        let nodes: Vec<Rational> = roots.iter().map(RealRoot::midpoint).collect();
        let distinct = (0..nodes.len()).all(|i| (i + 1..nodes.len()).all(|k| nodes[i] != nodes[k]));
        if distinct {
            let f = lagrange(&nodes, &targets.iter().map(|(_, s)| q(*s as i64)).collect::<Vec<_>>());
            if roots.iter().zip(&targets).all(|(r, (_, s))| sign_at_root(&f, r) == *s) {
                return Ok(f);
            }
        }
        width /= q(2);
    }
}

fn lagrange(xs: &[Rational], ys: &[Rational]) -> UPoly {
    let mut f = UPoly::zero();
    for (i, (xi, yi)) in xs.iter().zip(ys).enumerate() {
        let mut term = UPoly::constant(yi.clone());
        for (k, xk) in xs.iter().enumerate() {
            if k != i {
                term = term.mul(&UPoly::linear(xk)).scale(&(xi - xk).recip());
            }
        }
        f = f.add(&term);
    }
    f
}

/// A closure form of nonzero signature and the level that produced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Theorem2Witness {
    pub form: QuadForm,
    pub prime: UPoly,
    pub exponent: u32,
    /// Index `m` of the sign pattern (`0` = no flipped root).
    pub pattern: usize,
}

/// Search the forms `z_m = q₁ p^{k−1}(J) g^N(J) f_m(J)` for one of nonzero
/// signature, over primes `p` of the characteristic polynomial of `J` and
/// exponents `k` from the largest down.
///
/// `g` is the product of the other primes and `N` the largest exponent in
/// the characteristic polynomial. `f_m` has the sign of
/// `g^N(α_i) ∏_{ℓ≠i} (α_i − α_ℓ)` at every real root `α_i` of `p`, flipped
/// exactly at `i = m`. `None` means every such form has signature zero,
/// which forces `2×` the pair to be hyperbolic over the reals.
pub fn theorem2_witness(sys: &QFSystem) -> Result<Option<Theorem2Witness>> {
    let j = pencil_J(sys)?;
    let fac = factor(&j.charpoly()?)?;
    let big_n = fac.max_multiplicity();
    for (idx, (p, e)) in fac.factors.iter().enumerate() {
        let g =
            fac.factors.iter().enumerate().filter(|(k, _)| *k != idx).fold(UPoly::one(), |acc, (_, (r, _))| acc.mul(r));
        let g_n = g.pow(big_n);
        let roots = isolate_real_roots(p)?;
        let t = roots.len();
        // sign of g^N(α_i) ∏_{ℓ≠i} (α_i − α_ℓ); the roots are ascending
        let base_sign: Vec<i32> = roots
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let vandermonde = if (t - 1 - i) % 2 == 0 { 1 } else { -1 };
                sign_at_root(&g_n, r) * vandermonde
            })
            .collect();
        let gj = g_n.eval_matrix(&j);
        for k in (1..=*e).rev() {
            let stem = sys.forms()[0].gram().mul(&p.pow(k - 1).eval_matrix(&j)).mul(&gj);
            if stem.is_zero() {
                continue;
            }
            for m in 0..=t {
                let (mut pos, mut neg) = (Vec::new(), Vec::new());
                for (i, r) in roots.iter().enumerate() {
                    let s = if i + 1 == m { -base_sign[i] } else { base_sign[i] };
                    if s > 0 {
                        pos.push(r.clone())
                    } else {
                        neg.push(r.clone())
                    }
                }
                let f_m = condition_E_poly(&pos, &neg)?;
                let z = QuadForm::new(stem.mul(&f_m.eval_matrix(&j)))
                    .map_err(|_| Error::Internal("z_m is not symmetric".into()))?;
                if z.signature() != 0 {
                    if !closure_contains(sys, &z)? {
                        return Err(Error::Internal("z_m fell outside the closure".into()));
                    }
                    return Ok(Some(Theorem2Witness { form: z, prime: p.clone(), exponent: k, pattern: m }));
                }
            }
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairDecision {
    pub trace_sgn: i64,
    pub exists_n: bool,
    pub witness: Option<Theorem2Witness>,
    /// Witness found exactly when the trace test says no `n×` is hyperbolic.
    pub agrees_with_theorem1: bool,
}

/// Decide a nonsingular pair both ways: by the trace form and by the closure
/// witness search. The pair is first rebased on a unimodular combination.
pub fn theorem2_decide(sys: &QFSystem) -> Result<PairDecision> {
    let rebased = rebase_pair(sys)?;
    let trace = theorem1_decide(sys);
    let witness = theorem2_witness(&rebased)?;
    if let Some(w) = &witness {
        if w.form.signature() == 0 || !closure_contains(sys, &w.form)? {
            return Err(Error::Internal("closure witness failed re-verification".into()));
        }
    }
    Ok(PairDecision {
        trace_sgn: trace.trace_sgn,
        exists_n: trace.exists_n,
        agrees_with_theorem1: witness.is_some() != trace.exists_n,
        witness,
    })
}
