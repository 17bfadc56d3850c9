use super::algebra::{InvAlgebra, Subspace};
use crate::error::{Error, Result};
use crate::exactmath::{q, qr, QMatrix, QVector, Rational};
use crate::quadforms::QuadForm;
use num::Zero;

/// An element `e` with `e² = e` and `e + σ(e) = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdemWitness {
    pub e: QVector,
}

impl IdemWitness {
    /// Exact check of both identities.
    pub fn verify(&self, a: &InvAlgebra) -> bool {
        self.e.len() == a.dim() && a.mul(&self.e, &self.e) == self.e && {
            let s: QVector = self.e.iter().zip(a.sigma(&self.e)).map(|(x, y)| x + y).collect();
            &s == a.unit()
        }
    }
}

/// Coordinates of `σ(x)`.
pub fn apply_sigma(a: &InvAlgebra, x: &[Rational]) -> QVector {
    a.sigma(x)
}

/// `P_sv = Tr(b_s b_v)` for the regular trace.
fn trace_pairing(a: &InvAlgebra) -> QMatrix {
    let tau = a.trace_vector();
    let d = a.dim();
    let mut p = QMatrix::zeros(d, d);
    for s in 0..d {
        for v in 0..d {
            p[(s, v)] = a.product_of_basis(s, v).iter().map(|(w, c)| c * &tau[*w]).sum();
        }
    }
    p
}

/// Gram matrix of `x ↦ Tr(σ(x) x)` over the basis, `Tr` the regular trace.
pub fn trace_form(a: &InvAlgebra) -> QuadForm {
    let g = a.sigma_matrix().transpose().mul(&trace_pairing(a));
    // polarization of the quadratic map
    let sym = g.add(&g.transpose()).scale(&qr(1, 2));
    QuadForm::new(sym).expect("symmetrized")
}

/// Basis of the radical of the trace pairing, which in characteristic zero is
/// the Jacobson radical. Nilpotency and σ-stability are verified.
pub fn dickson_radical(a: &InvAlgebra) -> Result<Vec<QVector>> {
    Ok(radical_subspace(a)?.basis().to_vec())
}

pub(crate) fn radical_subspace(a: &InvAlgebra) -> Result<Subspace> {
    let d = a.dim();
    let kernel = trace_pairing(a).kernel();
    let j = Subspace::span(&kernel, d);
    if j.basis().iter().any(|x| !j.contains(&a.sigma(x))) {
        return Err(Error::Internal("radical is not stable under the involution".into()));
    }
    let mut power = j.clone();
    for _ in 0..=d {
        if power.dim() == 0 {
            return Ok(j);
        }
        let products: Vec<QVector> = power
            .basis()
            .iter()
            .flat_map(|x| j.basis().iter().map(move |y| (x, y)))
            .map(|(x, y)| a.mul(x, y))
            .collect();
        power = Subspace::span(&products, d);
    }
    Err(Error::Internal("trace-pairing radical is not nilpotent".into()))
}

fn sub(x: &[Rational], y: &[Rational]) -> QVector {
    x.iter().zip(y).map(|(a, b)| a - b).collect()
}

fn lin(terms: &[(Rational, &QVector)], d: usize) -> QVector {
    let mut out = vec![Rational::zero(); d];
    for (c, v) in terms {
        for (o, x) in out.iter_mut().zip(v.iter()) {
            *o += c * x;
        }
    }
    out
}

/// `f ← 3f² − 2f³` until `f` is idempotent.
fn newton_idempotent(a: &InvAlgebra, mut f: QVector) -> Result<QVector> {
    for _ in 0..64 {
        let f2 = a.mul(&f, &f);
        if f2 == f {
            return Ok(f);
        }
        let f3 = a.mul(&f2, &f);
        f = lin(&[(q(3), &f2), (q(-2), &f3)], a.dim());
    }
    Err(Error::Internal("idempotent lifting did not converge".into()))
}

/// Lift `eps`, an idempotent modulo the radical with `eps + σ(eps) ≡ 1`, to an
/// exact idempotent `e ≡ eps` with `e + σ(e) = 1`.
///
/// Each round lifts to an honest idempotent `f` and then applies the
/// correction `e = f − ½ f σ(f) − ½ σ(f) f`, which squares the power of the
/// radical containing the defect `f + σ(f) − 1`.
pub fn lift_idempotent(a: &InvAlgebra, radical: &[QVector], eps: &[Rational]) -> Result<IdemWitness> {
    let d = a.dim();
    if eps.len() != d {
        return Err(Error::DimensionMismatch(format!(
            "element of length {} in an algebra of dimension {d}",
            eps.len()
        )));
    }
    let j = Subspace::span(radical, d);
    let eps = eps.to_vec();
    let defect = |x: &QVector| sub(&lin(&[(q(1), x), (q(1), &a.sigma(x))], d), a.unit());
    if !j.contains(&sub(&a.mul(&eps, &eps), &eps)) || !j.contains(&defect(&eps)) {
        return Err(Error::Precondition("element is not a hyperbolic idempotent modulo the radical".into()));
    }
    let mut e = eps;
    for _ in 0..=d + 1 {
        let f = newton_idempotent(a, e)?;
        if defect(&f).iter().all(Zero::is_zero) {
            let w = IdemWitness { e: f };
            if !w.verify(a) {
                return Err(Error::Internal("lifted idempotent failed verification".into()));
            }
            return Ok(w);
        }
        let fs = a.sigma(&f);
        let ffs = a.mul(&f, &fs);
        let fsf = a.mul(&fs, &f);
        e = lin(&[(q(1), &f), (qr(-1, 2), &ffs), (qr(-1, 2), &fsf)], d);
    }
    Err(Error::Internal("idempotent correction did not terminate".into()))
}
