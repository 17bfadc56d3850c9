use crate::error::{Error, Result};
use crate::exactmath::{rref_rows, QMatrix, QVector, Rational, UPoly};
use crate::quadforms::QFSystem;
use num::{One, Zero};

/// Largest algebra dimension the amplification will build.
pub const AMPLIFY_DIM_CAP: usize = 256;

/// How basis coordinates map back to pairs `(φ, ψ)` of endomorphisms.
#[derive(Clone, Debug)]
enum Realization {
    /// Basis pairs from the defining linear system; coordinates are the
    /// values at `free` positions of the flattened `(φ, ψ)` vector.
    Pairs { basis: Vec<(QMatrix, QMatrix)>, free: Vec<usize> },
    /// `M_m(B)`, basis `E_ij ⊗ b_k` at index `(i m + j) dim B + k`.
    Amplified { base: Box<InvAlgebra>, m: usize },
    /// A quotient or subquotient with no pair realization.
    Abstract,
}

/// A finite-dimensional algebra with involution given by structure constants.
///
/// Algebras of adjoints carry the pair realization, so coordinates can be
/// turned back into pairs `(φ, ψ)` acting on the ambient space.
#[derive(Clone, Debug)]
pub struct InvAlgebra {
    ambient_dim: usize,
    dim: usize,
    /// `table[s * dim + v]` holds `b_s b_v` as a sparse coordinate list.
    table: Vec<Vec<(usize, Rational)>>,
    /// Column `s` is the coordinate vector of `σ(b_s)`.
    sigma: QMatrix,
    unit: QVector,
    realization: Realization,
}

impl InvAlgebra {
    /// Assemble from raw structure constants; no realization.
    pub fn from_structure(
        dim: usize,
        table: Vec<Vec<(usize, Rational)>>,
        sigma: QMatrix,
        unit: QVector,
    ) -> Result<Self> {
        if table.len() != dim * dim || sigma.rows() != dim || sigma.cols() != dim || unit.len() != dim {
            return Err(Error::DimensionMismatch("structure constants of the wrong shape".into()));
        }
        Ok(InvAlgebra { ambient_dim: 0, dim, table, sigma, unit, realization: Realization::Abstract })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Dimension of the space the pairs act on (0 for abstract algebras).
    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn unit(&self) -> &QVector {
        &self.unit
    }

    pub fn sigma_matrix(&self) -> &QMatrix {
        &self.sigma
    }

    pub fn zero(&self) -> QVector {
        vec![Rational::zero(); self.dim]
    }

    pub fn basis_vector(&self, s: usize) -> QVector {
        let mut v = self.zero();
        v[s] = Rational::one();
        v
    }

    /// Structure constants of `b_s b_v`.
    pub fn product_of_basis(&self, s: usize, v: usize) -> &[(usize, Rational)] {
        &self.table[s * self.dim + v]
    }

    pub fn mul(&self, x: &[Rational], y: &[Rational]) -> QVector {
        let mut out = self.zero();
        let ys: Vec<usize> = (0..self.dim).filter(|&v| !y[v].is_zero()).collect();
        for (s, xs) in x.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
            for &v in &ys {
                let c = xs * &y[v];
                for (w, t) in &self.table[s * self.dim + v] {
                    out[*w] += &c * t;
                }
            }
        }
        out
    }

    pub fn sigma(&self, x: &[Rational]) -> QVector {
        self.sigma.mul_vec(x)
    }

    /// Matrix of left multiplication by `x`.
    pub fn left_matrix(&self, x: &[Rational]) -> QMatrix {
        let mut m = QMatrix::zeros(self.dim, self.dim);
        for v in 0..self.dim {
            let col = self.mul(x, &self.basis_vector(v));
            for (w, c) in col.into_iter().enumerate() {
                m[(w, v)] = c;
            }
        }
        m
    }

    /// `Tr(b_w)` for every basis element (regular trace).
    pub fn trace_vector(&self) -> QVector {
        (0..self.dim)
            .map(|w| {
                (0..self.dim)
                    .map(|v| {
                        self.table[w * self.dim + v]
                            .iter()
                            .find(|(i, _)| *i == v)
                            .map(|(_, c)| c.clone())
                            .unwrap_or_else(Rational::zero)
                    })
                    .sum()
            })
            .collect()
    }

    /// Evaluate `f` at `x` with `unit` as the identity (Horner).
    pub fn eval_poly(&self, f: &UPoly, x: &[Rational], unit: &[Rational]) -> QVector {
        let mut acc = self.zero();
        for c in f.coeffs().iter().rev() {
            acc = self.mul(&acc, x);
            for (a, u) in acc.iter_mut().zip(unit) {
                *a += c * u;
            }
        }
        acc
    }

    /// Minimal polynomial of `x` inside a subalgebra whose identity is `unit`.
    pub fn element_minpoly(&self, x: &[Rational], unit: &[Rational]) -> UPoly {
        let mut powers: Vec<QVector> = vec![unit.to_vec()];
        loop {
            let next = self.mul(powers.last().expect("nonempty"), x);
            powers.push(next);
            let m = QMatrix::from_columns(self.dim, &powers);
            if let Some(rel) = m.kernel().into_iter().next() {
                // kernel vectors carry a 1 at the single free (last) column
                return UPoly::new(rel).monic();
            }
        }
    }

    /// The pair `(φ, ψ)` represented by `x`.
    pub fn to_pair(&self, x: &[Rational]) -> Result<(QMatrix, QMatrix)> {
        match &self.realization {
            Realization::Pairs { basis, .. } => {
                let n = self.ambient_dim;
                let (mut phi, mut psi) = (QMatrix::zeros(n, n), QMatrix::zeros(n, n));
                for (c, (p, s)) in x.iter().zip(basis) {
                    if !c.is_zero() {
                        phi.add_scaled(c, p);
                        psi.add_scaled(c, s);
                    }
                }
                Ok((phi, psi))
            }
            Realization::Amplified { base, m } => {
                let (d, n) = (base.dim, base.ambient_dim);
                let (mut phi, mut psi) = (QMatrix::zeros(m * n, m * n), QMatrix::zeros(m * n, m * n));
                for i in 0..*m {
                    for j in 0..*m {
                        let off = (i * m + j) * d;
                        let local = &x[off..off + d];
                        if local.iter().all(Zero::is_zero) {
                            continue;
                        }
                        let (p, s) = base.to_pair(local)?;
                        phi.set_block(i * n, j * n, &p);
                        psi.set_block(j * n, i * n, &s);
                    }
                }
                Ok((phi, psi))
            }
            Realization::Abstract => Err(Error::Unsupported("algebra has no realization by pairs of matrices".into())),
        }
    }

    /// Coordinates of a pair, if it lies in the algebra.
    pub fn coords_of_pair(&self, phi: &QMatrix, psi: &QMatrix) -> Result<Option<QVector>> {
        let Realization::Pairs { free, .. } = &self.realization else {
            return Err(Error::Unsupported("coordinates need the defining pair basis".into()));
        };
        let flat: Vec<Rational> = phi.entries().iter().chain(psi.entries()).cloned().collect();
        let x: QVector = free.iter().map(|&i| flat[i].clone()).collect();
        let (p, s) = self.to_pair(&x)?;
        Ok((p == *phi && s == *psi).then_some(x))
    }

    /// `M_m(A)` with involution `E_ij ⊗ a ↦ E_ji ⊗ σ(a)`.
    pub fn amplify(&self, m: usize) -> Result<InvAlgebra> {
        if m == 0 {
            return Err(Error::InvalidArgument("amplification factor must be positive".into()));
        }
        if m == 1 {
            return Ok(self.clone());
        }
        let d = self.dim;
        let dim = m * m * d;
        if dim > AMPLIFY_DIM_CAP {
            return Err(Error::Unsupported(format!(
                "amplified algebra of dimension {dim} exceeds the cap {AMPLIFY_DIM_CAP}"
            )));
        }
        let idx = |i: usize, j: usize, k: usize| (i * m + j) * d + k;
        let mut table = vec![Vec::new(); dim * dim];
        for i in 0..m {
            for j in 0..m {
                for l in 0..m {
                    for k in 0..d {
                        for k2 in 0..d {
                            let prod = &self.table[k * d + k2];
                            table[idx(i, j, k) * dim + idx(j, l, k2)] =
                                prod.iter().map(|(w, c)| (idx(i, l, *w), c.clone())).collect();
                        }
                    }
                }
            }
        }
        let mut sigma = QMatrix::zeros(dim, dim);
        for i in 0..m {
            for j in 0..m {
                for k in 0..d {
                    for t in 0..d {
                        sigma[(idx(j, i, t), idx(i, j, k))] = self.sigma[(t, k)].clone();
                    }
                }
            }
        }
        let mut unit = vec![Rational::zero(); dim];
        for i in 0..m {
            for k in 0..d {
                unit[idx(i, i, k)] = self.unit[k].clone();
            }
        }
        Ok(InvAlgebra {
            ambient_dim: m * self.ambient_dim,
            dim,
            table,
            sigma,
            unit,
            realization: match self.realization {
                Realization::Abstract => Realization::Abstract,
                _ => Realization::Amplified { base: Box::new(self.clone()), m },
            },
        })
    }

    /// The quotient `A / I` by a σ-stable two-sided ideal, plus the map
    /// reducing coordinates of `A` to coordinates of the quotient and the
    /// section sending quotient coordinates back to `A`.
    pub(crate) fn quotient(&self, ideal: &Subspace) -> Quotient {
        let keep: Vec<usize> = (0..self.dim).filter(|i| !ideal.pivots.contains(i)).collect();
        let project = |x: &QVector| -> QVector {
            let r = ideal.reduce(x);
            keep.iter().map(|&i| r[i].clone()).collect()
        };
        let d = keep.len();
        let mut table = Vec::with_capacity(d * d);
        for &s in &keep {
            for &v in &keep {
                let prod = self.mul(&self.basis_vector(s), &self.basis_vector(v));
                table.push(sparse(&project(&prod)));
            }
        }
        let mut sigma = QMatrix::zeros(d, d);
        for (col, &s) in keep.iter().enumerate() {
            for (row, c) in project(&self.sigma(&self.basis_vector(s))).into_iter().enumerate() {
                sigma[(row, col)] = c;
            }
        }
        let unit = project(&self.unit);
        let algebra = InvAlgebra { ambient_dim: 0, dim: d, table, sigma, unit, realization: Realization::Abstract };
        Quotient { algebra, keep }
    }
}

pub(crate) fn sparse(v: &[Rational]) -> Vec<(usize, Rational)> {
    v.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (i, c.clone())).collect()
}

/// `A / I` with the reduction data needed to move elements back and forth.
pub(crate) struct Quotient {
    pub algebra: InvAlgebra,
    keep: Vec<usize>,
}

impl Quotient {
    /// Representative in `A` of a quotient element.
    pub fn section(&self, y: &[Rational], parent_dim: usize) -> QVector {
        let mut x = vec![Rational::zero(); parent_dim];
        for (&i, c) in self.keep.iter().zip(y) {
            x[i] = c.clone();
        }
        x
    }
}

/// A linear subspace in reduced row echelon form.
#[derive(Clone, Debug)]
pub(crate) struct Subspace {
    rows: Vec<QVector>,
    pivots: Vec<usize>,
    len: usize,
}

impl Subspace {
    pub fn span(vectors: &[QVector], len: usize) -> Subspace {
        let mut rows = vectors.to_vec();
        let pivots = rref_rows(&mut rows, len);
        rows.truncate(pivots.len());
        Subspace { rows, pivots, len }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> &[QVector] {
        &self.rows
    }

    /// `x` minus its component along the subspace, zero at every pivot.
    pub fn reduce(&self, x: &[Rational]) -> QVector {
        let mut r = x.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if r[p].is_zero() {
                continue;
            }
            let c = r[p].clone();
            for (a, b) in r.iter_mut().zip(row) {
                if !b.is_zero() {
                    *a -= &c * b;
                }
            }
        }
        r
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        debug_assert_eq!(x.len(), self.len);
        self.reduce(x).iter().all(Zero::is_zero)
    }
}

/// The algebra of adjoints `{(φ, ψ) : ψᵗ q_i = q_i φ for all i}` with the
/// involution `(φ, ψ) ↦ (ψ, φ)`.
pub fn adjoint_algebra(sys: &QFSystem) -> InvAlgebra {
    let n = sys.dim();
    let nn = n * n;
    let unknowns = 2 * nn;
    let mut rows: Vec<QVector> = Vec::new();
    for f in sys.forms() {
        let g = f.gram();
        if g.is_zero() {
            continue;
        }
        for a in 0..n {
            for b in 0..n {
                // (ψᵗq)_ab - (qφ)_ab = Σ_c ψ_ca q_cb - q_ac φ_cb
                let mut row = vec![Rational::zero(); unknowns];
                for c in 0..n {
                    if !g[(c, b)].is_zero() {
                        row[nn + c * n + a] += &g[(c, b)];
                    }
                    if !g[(a, c)].is_zero() {
                        row[c * n + b] -= &g[(a, c)];
                    }
                }
                if row.iter().any(|x| !x.is_zero()) {
                    rows.push(row);
                }
            }
        }
    }
    let pivots = rref_rows(&mut rows, unknowns);
    let mut is_pivot = vec![false; unknowns];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let free: Vec<usize> = (0..unknowns).filter(|&i| !is_pivot[i]).collect();
    let basis: Vec<(QMatrix, QMatrix)> = free
        .iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); unknowns];
            v[f] = Rational::one();
            for (k, &p) in pivots.iter().enumerate() {
                v[p] = -rows[k][f].clone();
            }
            let psi = v.split_off(nn);
            (QMatrix::new(n, n, v).expect("n*n"), QMatrix::new(n, n, psi).expect("n*n"))
        })
        .collect();
    let d = basis.len();
    let coords = |phi: &QMatrix, psi: &QMatrix| -> QVector {
        free.iter().map(|&i| if i < nn { phi.entries()[i].clone() } else { psi.entries()[i - nn].clone() }).collect()
    };
    let mut table = Vec::with_capacity(d * d);
    for (p1, s1) in &basis {
        for (p2, s2) in &basis {
            table.push(sparse(&coords(&p1.mul(p2), &s2.mul(s1))));
        }
    }
    let mut sigma = QMatrix::zeros(d, d);
    for (col, (p, s)) in basis.iter().enumerate() {
        for (row, c) in coords(s, p).into_iter().enumerate() {
            sigma[(row, col)] = c;
        }
    }
    let id = QMatrix::identity(n);
    let unit = coords(&id, &id);
    InvAlgebra { ambient_dim: n, dim: d, table, sigma, unit, realization: Realization::Pairs { basis, free } }
}

/// `M_1 × M_1^op` style helper used in tests: `ℚ × ℚ` with the exchange involution.
#[cfg(test)]
pub(crate) fn exchange_algebra() -> InvAlgebra {
    use crate::exactmath::q;
    let table = vec![vec![(0, q(1))], vec![], vec![], vec![(1, q(1))]];
    InvAlgebra::from_structure(2, table, QMatrix::from_i64(&[&[0, 1], &[1, 0]]), vec![q(1), q(1)]).expect("well formed")
}
