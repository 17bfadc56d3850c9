//! The algebra of adjoints of a system with its canonical involution, the
//! involution trace form and the searches built on them.
//!
//! Elements are coordinate vectors over a fixed basis; multiplication goes
//! through sparse structure constants. Amplification `M_m(A)` has
//! `m² dim A` basis elements, so memory grows like `m⁴ (dim A)²`.

mod algebra;
mod hyperbolic;
mod radical;

pub use algebra::{adjoint_algebra, InvAlgebra, AMPLIFY_DIM_CAP};
pub use hyperbolic::{find_hyperbolic_idempotent, find_hyperbolic_idempotent_with, HypVerdict, DEFAULT_SEARCH_HEIGHT};
pub use radical::{apply_sigma, dickson_radical, lift_idempotent, trace_form, IdemWitness};

pub(crate) use algebra::Subspace;

use crate::error::{Error, Result};
use crate::quadforms::{HypWitness, QFSystem};

/// Outcome of the trace-form test.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TraceDecision {
    pub trace_sgn: i64,
    /// Some `n×` of the system is hyperbolic.
    pub exists_n: bool,
}

/// Some `n× sys` is hyperbolic exactly when the involution trace form of the
/// algebra of adjoints has signature zero.
pub fn theorem1_decide(sys: &QFSystem) -> TraceDecision {
    let a = adjoint_algebra(sys);
    let trace_sgn = trace_form(&a).signature();
    TraceDecision { trace_sgn, exists_n: trace_sgn == 0 }
}

/// Result of the doubling search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeakOrder {
    /// Smallest `2^k` (within the cap) with a verified hyperbolic idempotent.
    pub order: Option<u64>,
    /// True when every smaller level was certified non-hyperbolic, so `order`
    /// is the true minimum (or, with `order = None`, when the trace test or
    /// certificates rule out every level up to the cap).
    pub exact: bool,
    /// Witness at the reported level, in the amplified algebra.
    pub witness: Option<IdemWitness>,
}

/// Search `2^k × sys` for `k = 0..=cap_exponent`.
pub fn weak_order(sys: &QFSystem, cap_exponent: u32) -> Result<WeakOrder> {
    weak_order_with(sys, cap_exponent, DEFAULT_SEARCH_HEIGHT)
}

pub fn weak_order_with(sys: &QFSystem, cap_exponent: u32, height: i64) -> Result<WeakOrder> {
    let a = adjoint_algebra(sys);
    if trace_form(&a).signature() != 0 {
        return Ok(WeakOrder { order: None, exact: true, witness: None });
    }
    let mut exact = true;
    for k in 0..=cap_exponent {
        let m = 1usize << k;
        let amplified = match a.amplify(m) {
            Ok(b) => b,
            Err(Error::Unsupported(_)) => {
                exact = false;
                break;
            }
            Err(e) => return Err(e),
        };
        match find_hyperbolic_idempotent_with(&amplified, height)? {
            HypVerdict::Witness(w) => return Ok(WeakOrder { order: Some(m as u64), exact, witness: Some(w) }),
            HypVerdict::NoneCertified => {}
            HypVerdict::Unknown => exact = false,
        }
    }
    Ok(WeakOrder { order: None, exact, witness: None })
}

/// `V = im φ ⊕ im ψ` for a hyperbolic idempotent `e = (φ, ψ)`.
pub fn idem_to_hyp_witness(a: &InvAlgebra, w: &IdemWitness) -> Result<HypWitness> {
    let (phi, psi) = a.to_pair(&w.e)?;
    Ok(HypWitness { u_basis: phi.column_space(), w_basis: psi.column_space() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadforms::{n_times, verify_hyp_witness, QuadForm};

    #[test]
    fn exchange_idempotent_on_zero_form() {
        let sys = QFSystem::new(vec![QuadForm::zero(1)]).unwrap();
        let a = adjoint_algebra(&sys);
        let HypVerdict::Witness(w) = find_hyperbolic_idempotent(&a).unwrap() else {
            panic!("exchange factor must give a witness");
        };
        assert!(w.verify(&a));
        let (phi, psi) = a.to_pair(&w.e).unwrap();
        assert_eq!(phi.add(&psi), crate::exactmath::QMatrix::identity(1));
        let mut other = w.e.clone();
        for (x, u) in other.iter_mut().zip(a.unit()) {
            *x = u - &*x;
        }
        assert!(IdemWitness { e: other }.verify(&a));
    }

    #[test]
    fn one_minus_two_needs_doubling() {
        let sys = QFSystem::new(vec![QuadForm::diagonal_i64(&[1, -2])]).unwrap();
        let a = adjoint_algebra(&sys);
        assert_eq!(find_hyperbolic_idempotent(&a).unwrap(), HypVerdict::NoneCertified);
        let wo = weak_order(&sys, 3).unwrap();
        assert_eq!((wo.order, wo.exact), (Some(2), true));
        let doubled = n_times(&sys, 2).unwrap();
        let amplified = a.amplify(2).unwrap();
        let hw = idem_to_hyp_witness(&amplified, wo.witness.as_ref().unwrap()).unwrap();
        assert!(verify_hyp_witness(&doubled, &hw).unwrap());
    }

    #[test]
    fn hyperbolic_plane_has_order_one() {
        let sys = QFSystem::new(vec![QuadForm::diagonal_i64(&[1, -1])]).unwrap();
        let wo = weak_order(&sys, 2).unwrap();
        assert_eq!(wo.order, Some(1));
        let a = adjoint_algebra(&sys);
        let hw = idem_to_hyp_witness(&a, wo.witness.as_ref().unwrap()).unwrap();
        assert!(verify_hyp_witness(&sys, &hw).unwrap());
    }

    #[test]
    fn definite_form_has_no_order() {
        let sys = QFSystem::new(vec![QuadForm::diagonal_i64(&[1, 3])]).unwrap();
        assert_eq!(theorem1_decide(&sys), TraceDecision { trace_sgn: 4, exists_n: false });
        let wo = weak_order(&sys, 2).unwrap();
        assert_eq!((wo.order, wo.exact), (None, true));
    }
}
