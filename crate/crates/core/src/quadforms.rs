//! Quadratic forms, systems of forms on a common space, and the canonical
//! system file format.

use crate::error::{Error, Result};
use crate::exactmath::{format_rational, parse_rational, q, Inertia, QMatrix, QVector, Rational};
use num::Zero;
use serde::{Deserialize, Serialize};

/// A quadratic form given by its symmetric Gram matrix; may be degenerate.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadForm {
    gram: QMatrix,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Definiteness {
    Positive,
    Negative,
    Neither,
}

impl QuadForm {
    pub fn new(gram: QMatrix) -> Result<Self> {
        if !gram.is_square() {
            return Err(Error::NotSquare { rows: gram.rows(), cols: gram.cols() });
        }
        if !gram.is_symmetric() {
            return Err(Error::NotSymmetric);
        }
        Ok(QuadForm { gram })
    }

    pub fn zero(dim: usize) -> Self {
        QuadForm { gram: QMatrix::zeros(dim, dim) }
    }

    /// `⟨a_1, ..., a_n⟩`.
    pub fn diagonal(entries: &[Rational]) -> Self {
        QuadForm { gram: QMatrix::diag(entries) }
    }

    pub fn diagonal_i64(entries: &[i64]) -> Self {
        QuadForm { gram: QMatrix::diag_i64(entries) }
    }

    /// Panics on non-symmetric input; meant for literals.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::new(QMatrix::from_i64(rows)).expect("symmetric literal")
    }

    pub fn dim(&self) -> usize {
        self.gram.rows()
    }

    pub fn gram(&self) -> &QMatrix {
        &self.gram
    }

    pub fn into_gram(self) -> QMatrix {
        self.gram
    }

    /// `xᵗ G y`.
    pub fn bilinear(&self, x: &[Rational], y: &[Rational]) -> Rational {
        crate::exactmath::dot(x, &self.gram.mul_vec(y))
    }

    pub fn inertia(&self) -> Inertia {
        self.gram.inertia().expect("gram is symmetric")
    }

    pub fn signature(&self) -> i64 {
        self.inertia().signature()
    }

    pub fn is_unimodular(&self) -> bool {
        self.gram.determinant().map(|d| !d.is_zero()).unwrap_or(false)
    }

    pub fn is_zero(&self) -> bool {
        self.gram.is_zero()
    }

    pub fn definiteness(&self) -> Definiteness {
        let i = self.inertia();
        if i.positive == self.dim() {
            Definiteness::Positive
        } else if i.negative == self.dim() {
            Definiteness::Negative
        } else {
            Definiteness::Neither
        }
    }

    /// `Pᵗ G P`.
    pub fn transform(&self, p: &QMatrix) -> QuadForm {
        QuadForm { gram: p.transpose().mul(&self.gram).mul(p) }
    }

    pub fn orthogonal_sum(&self, other: &QuadForm) -> QuadForm {
        QuadForm { gram: QMatrix::block_diag(&[self.gram.clone(), other.gram.clone()]) }
    }

    pub fn add(&self, other: &QuadForm) -> QuadForm {
        QuadForm { gram: self.gram.add(&other.gram) }
    }

    pub fn scale(&self, c: &Rational) -> QuadForm {
        QuadForm { gram: self.gram.scale(c) }
    }
}

/// Classify a form as positive definite, negative definite or neither.
pub fn is_definite(q: &QuadForm) -> Definiteness {
    q.definiteness()
}

/// Split off the radical: a unimodular form on `V / rad` and `dim rad`.
pub fn radical_split(q: &QuadForm) -> (QuadForm, usize) {
    let (d, _) = q.gram.congruence_diagonalize().expect("gram is symmetric");
    let nonzero: Vec<Rational> = (0..q.dim()).map(|i| d[(i, i)].clone()).filter(|x| !x.is_zero()).collect();
    let zeros = q.dim() - nonzero.len();
    (QuadForm::diagonal(&nonzero), zeros)
}

/// A nonempty family of forms on a common space, with optional labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QFSystem {
    dim: usize,
    forms: Vec<QuadForm>,
    labels: Option<Vec<String>>,
}

impl QFSystem {
    pub fn new(forms: Vec<QuadForm>) -> Result<Self> {
        let Some(first) = forms.first() else {
            return Err(Error::InvalidArgument("a system needs at least one form".into()));
        };
        let dim = first.dim();
        if let Some(bad) = forms.iter().find(|f| f.dim() != dim) {
            return Err(Error::DimensionMismatch(format!(
                "form of dimension {} in a system of dimension {dim}",
                bad.dim()
            )));
        }
        Ok(QFSystem { dim, forms, labels: None })
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.forms.len() {
            return Err(Error::DimensionMismatch(format!("{} labels for {} forms", labels.len(), self.forms.len())));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    /// Convenience constructor from integer Gram matrices.
    pub fn from_i64(forms: &[&[&[i64]]]) -> Result<Self> {
        let forms = forms.iter().map(|rows| QuadForm::new(QMatrix::from_i64(rows))).collect::<Result<Vec<_>>>()?;
        Self::new(forms)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn forms(&self) -> &[QuadForm] {
        &self.forms
    }

    pub fn len(&self) -> usize {
        self.forms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forms.is_empty()
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// `∑ c_i q_i`.
    pub fn combination(&self, coeffs: &[Rational]) -> Result<QuadForm> {
        if coeffs.len() != self.forms.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} coefficients for {} forms",
                coeffs.len(),
                self.forms.len()
            )));
        }
        let mut g = QMatrix::zeros(self.dim, self.dim);
        for (c, f) in coeffs.iter().zip(&self.forms) {
            if !c.is_zero() {
                g.add_scaled(c, &f.gram);
            }
        }
        Ok(QuadForm { gram: g })
    }

    /// Indices of a maximal linearly independent subfamily, earliest first.
    pub fn independent_indices(&self) -> Vec<usize> {
        let rows: Vec<QVector> = self.forms.iter().map(|f| f.gram.entries().to_vec()).collect();
        if self.dim == 0 {
            return Vec::new();
        }
        let m = QMatrix::from_columns(self.dim * self.dim, &rows);
        m.rref().1
    }

    /// Apply the same change of basis `Pᵗ q_i P` to every form.
    pub fn transform(&self, p: &QMatrix) -> QFSystem {
        QFSystem {
            dim: p.cols(),
            forms: self.forms.iter().map(|f| f.transform(p)).collect(),
            labels: self.labels.clone(),
        }
    }

    /// Orthogonal sum with a system of the same length.
    pub fn orthogonal_sum(&self, other: &QFSystem) -> Result<QFSystem> {
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch("systems of different lengths".into()));
        }
        let forms = self.forms.iter().zip(&other.forms).map(|(a, b)| a.orthogonal_sum(b)).collect();
        Ok(QFSystem { dim: self.dim + other.dim, forms, labels: self.labels.clone() })
    }

    /// Canonical compact JSON text.
    pub fn to_json(&self) -> String {
        MatrixFile::from(self).to_json()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        MatrixFile::from_json(text)?.try_into()
    }
}

/// `n`-fold orthogonal sum of every form of the system.
pub fn n_times(sys: &QFSystem, n: usize) -> Result<QFSystem> {
    if n == 0 {
        return Err(Error::InvalidArgument("n_times needs n >= 1".into()));
    }
    let forms = sys.forms.iter().map(|f| QuadForm { gram: QMatrix::block_diag(&vec![f.gram.clone(); n]) }).collect();
    Ok(QFSystem { dim: sys.dim * n, forms, labels: sys.labels.clone() })
}

/// Two families of vectors meant to span complementary totally isotropic subspaces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HypWitness {
    pub u_basis: Vec<QVector>,
    pub w_basis: Vec<QVector>,
}

/// Check that `U ⊕ W` is the whole space and every form vanishes on `U` and on `W`.
pub fn verify_hyp_witness(sys: &QFSystem, w: &HypWitness) -> Result<bool> {
    let n = sys.dim();
    if let Some(v) = w.u_basis.iter().chain(&w.w_basis).find(|v| v.len() != n) {
        return Err(Error::DimensionMismatch(format!(
            "witness vector of length {} for a space of dimension {n}",
            v.len()
        )));
    }
    if w.u_basis.len() + w.w_basis.len() != n {
        return Ok(false);
    }
    let all: Vec<QVector> = w.u_basis.iter().chain(&w.w_basis).cloned().collect();
    if n > 0 && QMatrix::from_columns(n, &all).rank() != n {
        return Ok(false);
    }
    let isotropic = |part: &[QVector]| {
        sys.forms.iter().all(|f| {
            part.iter().enumerate().all(|(i, x)| {
                let gx = f.gram.mul_vec(x);
                part[i..].iter().all(|y| crate::exactmath::dot(&gx, y).is_zero())
            })
        })
    };
    Ok(isotropic(&w.u_basis) && isotropic(&w.w_basis))
}

/// Coefficients `c` with `∑ c_i q_i` unimodular, or `None` when every
/// combination is singular.
///
/// Unit vectors are tried first. Otherwise `det(∑ x_i q_i)` is evaluated on
/// the grid `{0..D}^t` (`t` independent forms, `D = dim * t`) in increasing
/// max-norm with lexicographic tie-break; the grid is large enough that a
/// nonzero determinant polynomial cannot vanish on all of it. Worst case
/// cost is exponential in `t`.
pub fn find_unimodular_combination(sys: &QFSystem) -> Option<Vec<Rational>> {
    let n = sys.dim();
    let len = sys.len();
    let unit = |i: usize| -> Vec<Rational> { (0..len).map(|j| if i == j { q(1) } else { Rational::zero() }).collect() };
    if n == 0 {
        return Some(unit(0));
    }
    if let Some(i) = (0..len).find(|&i| sys.forms[i].is_unimodular()) {
        return Some(unit(i));
    }
    // A vector in every radical makes every combination singular.
    let stacked: Vec<QVector> = sys.forms.iter().flat_map(|f| f.gram.row_vectors()).collect();
    if !QMatrix::from_rows(stacked).expect("rectangular").kernel().is_empty() {
        return None;
    }
    let idx = sys.independent_indices();
    let t = idx.len();
    let bound = n * t;
    let expand = |c: &[usize]| -> Vec<Rational> {
        let mut full = vec![Rational::zero(); len];
        for (k, &i) in idx.iter().enumerate() {
            full[i] = q(c[k] as i64);
        }
        full
    };
    for norm in 1..=bound {
        // all points of {0..norm}^t with at least one coordinate equal to norm
        let mut c = vec![0usize; t];
        loop {
            if c.contains(&norm) {
                let coeffs = expand(&c);
                let f = sys.combination(&coeffs).expect("matching length");
                if f.is_unimodular() {
                    return Some(coeffs);
                }
            }
            // lexicographic successor in {0..norm}^t
            let Some(k) = (0..t).rev().find(|&k| c[k] < norm) else {
                break;
            };
            c[k] += 1;
            for x in c.iter_mut().skip(k + 1) {
                *x = 0;
            }
        }
    }
    None
}

/// On-disk shape: `{"dim":..,"forms":[[["a","b/c"],..],..],"labels":[..]}`.
#[derive(Serialize, Deserialize)]
struct SystemFile {
    dim: usize,
    forms: Vec<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
}

/// The system file format without the symmetry requirement, used for
/// witness payloads (subspace bases, idempotent pairs) and empty bases.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixFile {
    pub dim: usize,
    pub matrices: Vec<QMatrix>,
    pub labels: Option<Vec<String>>,
}

impl MatrixFile {
    pub fn new(dim: usize, matrices: Vec<QMatrix>, labels: Vec<String>) -> Result<Self> {
        if matrices.iter().any(|m| m.rows() != dim || m.cols() != dim) {
            return Err(Error::DimensionMismatch(format!("matrix file entries must be {dim}x{dim}")));
        }
        let labels = (!labels.is_empty()).then_some(labels);
        Ok(MatrixFile { dim, matrices, labels })
    }

    pub fn label(&self, k: usize) -> Option<&str> {
        self.labels.as_ref()?.get(k).map(String::as_str)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("plain data serializes")
    }

    pub fn to_value(&self) -> serde_json::Value {
        serde_json::to_value(self.to_file()).expect("plain data serializes")
    }

    fn to_file(&self) -> SystemFile {
        let forms = self
            .matrices
            .iter()
            .map(|m| (0..self.dim).map(|i| m.row(i).iter().map(format_rational).collect()).collect())
            .collect();
        SystemFile { dim: self.dim, forms, labels: self.labels.clone() }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: SystemFile = serde_json::from_str(text).map_err(|e| Error::Parse(format!("system file: {e}")))?;
        let matrices = file
            .forms
            .iter()
            .enumerate()
            .map(|(k, rows)| {
                if rows.len() != file.dim || rows.iter().any(|r| r.len() != file.dim) {
                    return Err(Error::Parse(format!("form {k} is not {0}x{0}", file.dim)));
                }
                let data = rows.iter().flatten().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>()?;
                QMatrix::new(file.dim, file.dim, data)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(MatrixFile { dim: file.dim, matrices, labels: file.labels })
    }
}

impl From<&QFSystem> for MatrixFile {
    fn from(sys: &QFSystem) -> Self {
        MatrixFile {
            dim: sys.dim,
            matrices: sys.forms.iter().map(|f| f.gram.clone()).collect(),
            labels: sys.labels.clone(),
        }
    }
}

impl TryFrom<MatrixFile> for QFSystem {
    type Error = Error;

    fn try_from(file: MatrixFile) -> Result<Self> {
        let forms = file
            .matrices
            .into_iter()
            .enumerate()
            .map(|(k, m)| QuadForm::new(m).map_err(|e| Error::Parse(format!("form {k}: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        let sys = QFSystem::new(forms).map_err(|e| Error::Parse(e.to_string()))?;
        match file.labels {
            Some(l) => sys.with_labels(l).map_err(|e| Error::Parse(e.to_string())),
            None => Ok(sys),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::qr;

    fn v(x: &[i64]) -> QVector {
        x.iter().map(|&a| q(a)).collect()
    }

    #[test]
    fn n_times_examples() {
        let sys = QFSystem::new(vec![QuadForm::diagonal_i64(&[1])]).unwrap();
        assert_eq!(n_times(&sys, 1).unwrap(), sys);
        assert_eq!(n_times(&sys, 3).unwrap().forms()[0], QuadForm::diagonal_i64(&[1, 1, 1]));
        let sys = QFSystem::new(vec![QuadForm::diagonal_i64(&[1, -1, 2])]).unwrap();
        assert_eq!(n_times(&sys, 2).unwrap().forms()[0].signature(), 2);
        assert!(n_times(&sys, 0).is_err());
    }

    #[test]
    fn witness_checks() {
        let zero = QFSystem::new(vec![QuadForm::zero(2)]).unwrap();
        let split = HypWitness { u_basis: vec![v(&[1, 0])], w_basis: vec![v(&[0, 1])] };
        assert!(verify_hyp_witness(&zero, &split).unwrap());
        let definite = QFSystem::new(vec![QuadForm::diagonal_i64(&[1, 1])]).unwrap();
        assert!(!verify_hyp_witness(&definite, &split).unwrap());
        let plane = QFSystem::new(vec![QuadForm::from_i64(&[&[0, 1], &[1, 0]])]).unwrap();
        assert!(verify_hyp_witness(&plane, &split).unwrap());
        let bad = HypWitness { u_basis: vec![v(&[1, 0, 0])], w_basis: vec![] };
        assert!(verify_hyp_witness(&plane, &bad).is_err());
        let dependent = HypWitness { u_basis: vec![v(&[1, 0])], w_basis: vec![v(&[2, 0])] };
        assert!(!verify_hyp_witness(&zero, &dependent).unwrap());
    }

    #[test]
    fn radical_split_examples() {
        let (u, z) = radical_split(&QuadForm::diagonal_i64(&[0, 0, 2, 1]));
        assert_eq!((u, z), (QuadForm::diagonal_i64(&[2, 1]), 2));
        let f = QuadForm::diagonal_i64(&[3, -1]);
        assert_eq!(radical_split(&f), (f.clone(), 0));
        let (u, z) = radical_split(&QuadForm::zero(3));
        assert_eq!((u.dim(), z), (0, 3));
    }

    #[test]
    fn unimodular_combinations() {
        let sys = QFSystem::new(vec![QuadForm::diagonal_i64(&[1, 0]), QuadForm::diagonal_i64(&[0, 1])]).unwrap();
        assert_eq!(find_unimodular_combination(&sys), Some(vec![q(1), q(1)]));
        let sys = QFSystem::new(vec![QuadForm::zero(2)]).unwrap();
        assert_eq!(find_unimodular_combination(&sys), None);
        // Kronecker-singular pencil: no common radical vector, still always singular.
        let sys = QFSystem::from_i64(&[&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 0]], &[&[0, 0, 0], &[0, 0, 1], &[0, 1, 0]]])
            .unwrap();
        assert_eq!(find_unimodular_combination(&sys), None);
    }

    #[test]
    fn definiteness() {
        assert_eq!(is_definite(&QuadForm::diagonal_i64(&[1, 2])), Definiteness::Positive);
        assert_eq!(is_definite(&QuadForm::diagonal_i64(&[-1, -5])), Definiteness::Negative);
        assert_eq!(is_definite(&QuadForm::diagonal_i64(&[1, -1])), Definiteness::Neither);
        assert_eq!(is_definite(&QuadForm::diagonal_i64(&[1, 0])), Definiteness::Neither);
    }

    #[test]
    fn system_file_round_trip() {
        let sys = QFSystem::new(vec![QuadForm::diagonal(&[qr(1, 2), q(-3)]), QuadForm::from_i64(&[&[0, 1], &[1, 0]])])
            .unwrap()
            .with_labels(vec!["a".into(), "b".into()])
            .unwrap();
        let text = sys.to_json();
        assert_eq!(text, r#"{"dim":2,"forms":[[["1/2","0"],["0","-3"]],[["0","1"],["1","0"]]],"labels":["a","b"]}"#);
        assert_eq!(QFSystem::from_json(&text).unwrap(), sys);
        assert_eq!(QFSystem::from_json(&text).unwrap().to_json(), text);
    }

    #[test]
    fn system_file_rejects_bad_input() {
        assert!(QFSystem::from_json(r#"{"dim":2,"forms":[[["1","2"],["3","4"]]]}"#).is_err());
        assert!(QFSystem::from_json(r#"{"dim":2,"forms":[[["1","0"]]]}"#).is_err());
        assert!(QFSystem::from_json(r#"{"dim":1,"forms":[]}"#).is_err());
        assert!(QFSystem::from_json(r#"{"dim":1,"forms":[[["1/0"]]]}"#).is_err());
        assert!(QFSystem::from_json("not json").is_err());
    }
}
