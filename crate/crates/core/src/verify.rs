//! Independent re-checking of witness payloads. Everything here is plain
//! matrix arithmetic over ℚ; none of the algebra, closure or pair machinery
//! is reused.

use crate::error::{Error, Result};
use crate::exactmath::{q, QMatrix, Rational};
use crate::quadforms::{MatrixFile, QFSystem};
use num::Zero;

fn grams(sys: &QFSystem, copies: usize) -> Vec<QMatrix> {
    sys.forms().iter().map(|f| QMatrix::block_diag(&vec![f.gram().clone(); copies])).collect()
}

/// Basis of `{(φ, ψ) : ψᵗ q = q φ for every q}` by direct elimination.
fn adjoint_pairs(forms: &[QMatrix], n: usize) -> Vec<(QMatrix, QMatrix)> {
    let nn = n * n;
    let mut rows = Vec::new();
    for g in forms {
        for r in 0..n {
            for c in 0..n {
                // Σ_k ψ_kr g_kc − g_rk φ_kc
                let mut row = vec![Rational::zero(); 2 * nn];
                for k in 0..n {
                    row[nn + k * n + r] += &g[(k, c)];
                    row[k * n + c] -= &g[(r, k)];
                }
                rows.push(row);
            }
        }
    }
    let kernel = if rows.is_empty() {
        QMatrix::identity(2 * nn).row_vectors()
    } else {
        QMatrix::from_rows(rows).expect("rectangular").kernel()
    };
    kernel
        .into_iter()
        .map(|v| {
            let phi = QMatrix::new(n, n, v[..nn].to_vec()).expect("n×n");
            let psi = QMatrix::new(n, n, v[nn..].to_vec()).expect("n×n");
            (phi, psi)
        })
        .collect()
}

fn in_closure(pairs: &[(QMatrix, QMatrix)], f: &QMatrix) -> bool {
    f.is_symmetric() && pairs.iter().all(|(phi, psi)| psi.transpose().mul(f) == f.mul(phi))
}

fn copies_of(label: &str) -> Result<usize> {
    let n = label
        .split_once(":copies=")
        .and_then(|(_, c)| c.parse::<usize>().ok())
        .ok_or_else(|| Error::Parse(format!("payload label {label:?} lacks a copies=<m> suffix")))?;
    if n == 0 {
        return Err(Error::Parse("copies must be at least 1".into()));
    }
    Ok(n)
}

/// True when `m` is block diagonal with companion blocks (ones on the
/// subdiagonal, free last column).
fn is_block_companion(m: &QMatrix) -> bool {
    let n = m.rows();
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && m[(end, end - 1)] == q(1) {
            end += 1;
        }
        for i in 0..n {
            for j in start..end {
                let inside = (start..end).contains(&i);
                let allowed = inside && (j == end - 1 || i == j + 1);
                if !allowed && !m[(i, j)].is_zero() {
                    return false;
                }
            }
        }
        start = end;
    }
    true
}

/// Check one payload against the system. `None` means the payload carries no
/// checkable claim (e.g. a trace form).
pub fn verify_payload(sys: &QFSystem, file: &MatrixFile) -> Result<Option<bool>> {
    let n = sys.dim();
    let label = file.label(0).unwrap_or("");
    let kind = label.split(':').next().unwrap_or("");
    let ok = match kind {
        "closure_form" => {
            let [f] = file.matrices.as_slice() else {
                return Err(Error::Parse("closure_form payload needs exactly one matrix".into()));
            };
            file.dim == n
                && f.is_symmetric()
                && f.inertia()?.signature() != 0
                && in_closure(&adjoint_pairs(&grams(sys, 1), n), f)
        }
        k if k.starts_with("closure_basis") || (k.is_empty() && file.matrices.is_empty()) => {
            let pairs = adjoint_pairs(&grams(sys, 1), n);
            file.dim == n && file.matrices.iter().all(|f| in_closure(&pairs, f))
        }
        "hyperbolic_basis" => {
            let m = copies_of(label)?;
            let [b] = file.matrices.as_slice() else {
                return Err(Error::Parse("hyperbolic_basis payload needs exactly one matrix".into()));
            };
            let dim = m * n;
            let half = dim / 2;
            file.dim == dim
                && dim.is_multiple_of(2)
                && b.rank() == dim
                && grams(sys, m).iter().all(|g| {
                    let u = b.block(0, 0, dim, half);
                    let w = b.block(0, half, dim, half);
                    u.transpose().mul(g).mul(&u).is_zero() && w.transpose().mul(g).mul(&w).is_zero()
                })
        }
        "idempotent_phi" => {
            let m = copies_of(label)?;
            let [phi, psi] = file.matrices.as_slice() else {
                return Err(Error::Parse("idempotent payload needs two matrices".into()));
            };
            let dim = m * n;
            file.dim == dim
                && phi.mul(phi) == *phi
                && phi.add(psi) == QMatrix::identity(dim)
                && grams(sys, m).iter().all(|g| psi.transpose().mul(g) == g.mul(phi))
        }
        "pencil" => {
            let [j, p] = file.matrices.as_slice() else {
                return Err(Error::Parse("kronecker payload needs the pencil and the base change".into()));
            };
            file.dim == n
                && grams(sys, 1).iter().all(|g| j.transpose().mul(g) == g.mul(j))
                && p.inverse().is_some_and(|inv| is_block_companion(&inv.mul(j).mul(p)))
        }
        "trace_form" => return Ok(None),
        other => return Err(Error::Parse(format!("unknown payload kind {other:?}"))),
    };
    Ok(Some(ok))
}
