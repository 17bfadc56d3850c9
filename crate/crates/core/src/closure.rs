//! The closure `Cl` of a system: every symmetric `q` with `ψᵗ q = q φ` for all
//! `(φ, ψ)` in the algebra of adjoints.

use crate::error::{Error, Result};
use crate::exactmath::{q, QMatrix, QVector, Rational};
use crate::involutions::{adjoint_algebra, InvAlgebra};
use crate::quadforms::{QFSystem, QuadForm};
use num::Zero;

/// Cap on the number of coefficient vectors a signature scan evaluates.
pub const SCAN_LIMIT: usize = 200_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosureSpace {
    pub dim_v: usize,
    pub basis: Vec<QuadForm>,
}

impl ClosureSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn combination(&self, coeffs: &[Rational]) -> QuadForm {
        let mut g = QMatrix::zeros(self.dim_v, self.dim_v);
        for (c, f) in coeffs.iter().zip(&self.basis) {
            if !c.is_zero() {
                g.add_scaled(c, f.gram());
            }
        }
        QuadForm::new(g).expect("sum of symmetric matrices")
    }

    /// The basis as a system (for the file format); `None` when `Cl = 0`.
    pub fn to_system(&self) -> Option<QFSystem> {
        QFSystem::new(self.basis.clone()).ok()
    }
}

fn sym_index(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect()
}

/// Position of the unordered pair `{i, j}` in `sym_index(n)`.
fn sym_pos(n: usize, i: usize, j: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    // rows above i hold n + (n - 1) + ... + (n - i + 1) entries
    i * n - i * i.saturating_sub(1) / 2 + (j - i)
}

fn pairs_of(a: &InvAlgebra) -> Result<Vec<(QMatrix, QMatrix)>> {
    (0..a.dim()).map(|s| a.to_pair(&a.basis_vector(s))).collect()
}

/// Closure of the system computed against a given algebra of adjoints.
pub fn closure_basis_in(a: &InvAlgebra) -> Result<ClosureSpace> {
    let n = a.ambient_dim();
    let idx = sym_index(n);
    let pairs = pairs_of(a)?;
    let mut rows: Vec<QVector> = Vec::new();
    for (phi, psi) in &pairs {
        for r in 0..n {
            for c in 0..n {
                // (ψᵗq)_rc − (qφ)_rc = Σ_k ψ_kr q_kc − q_rk φ_kc
                let mut row = vec![Rational::zero(); idx.len()];
                for k in 0..n {
                    row[sym_pos(n, k, c)] += &psi[(k, r)];
                    row[sym_pos(n, r, k)] -= &phi[(k, c)];
                }
                if row.iter().any(|x| !x.is_zero()) {
                    rows.push(row);
                }
            }
        }
    }
    let kernel = if rows.is_empty() {
        (0..idx.len()).map(|k| (0..idx.len()).map(|l| if k == l { q(1) } else { q(0) }).collect()).collect()
    } else {
        QMatrix::from_rows(rows).expect("rectangular").kernel()
    };
    let basis = kernel
        .into_iter()
        .map(|v| {
            let mut g = QMatrix::zeros(n, n);
            for (c, &(i, j)) in v.iter().zip(&idx) {
                g[(i, j)] = c.clone();
                g[(j, i)] = c.clone();
            }
            QuadForm::new(g).expect("symmetric by construction")
        })
        .collect();
    Ok(ClosureSpace { dim_v: n, basis })
}

pub fn closure_basis(sys: &QFSystem) -> ClosureSpace {
    closure_basis_in(&adjoint_algebra(sys)).expect("adjoint algebras carry pairs")
}

/// Membership test against a given algebra of adjoints.
pub fn closure_contains_in(a: &InvAlgebra, f: &QuadForm) -> Result<bool> {
    if f.dim() != a.ambient_dim() {
        return Err(Error::DimensionMismatch(format!(
            "form of dimension {} against a system of dimension {}",
            f.dim(),
            a.ambient_dim()
        )));
    }
    let g = f.gram();
    Ok(pairs_of(a)?.iter().all(|(phi, psi)| psi.transpose().mul(g) == g.mul(phi)))
}

pub fn closure_contains(sys: &QFSystem, f: &QuadForm) -> Result<bool> {
    closure_contains_in(&adjoint_algebra(sys), f)
}

/// First form of nonzero signature among integer combinations of the basis
/// of height at most `budget`, in increasing max-norm and lexicographic
/// order. At most [`SCAN_LIMIT`] combinations are evaluated; a `None`
/// result proves nothing.
pub fn signature_scan(c: &ClosureSpace, budget: u32) -> Option<QuadForm> {
    let t = c.dim();
    if t == 0 {
        return None;
    }
    let mut tried = 0usize;
    for h in 1..=budget as i64 {
        let mut v = vec![-h; t];
        loop {
            if v.iter().any(|x| x.abs() == h) {
                tried += 1;
                if tried > SCAN_LIMIT {
                    return None;
                }
                let coeffs: Vec<Rational> = v.iter().map(|&x| q(x)).collect();
                let f = c.combination(&coeffs);
                if f.signature() != 0 {
                    return Some(f);
                }
            }
            let Some(k) = (0..t).rev().find(|&k| v[k] < h) else {
                break;
            };
            v[k] += 1;
            for x in v.iter_mut().skip(k + 1) {
                *x = -h;
            }
        }
    }
    None
}
