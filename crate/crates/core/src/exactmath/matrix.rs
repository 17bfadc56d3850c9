use super::{one, q, sign, Rational};
use crate::error::{Error, Result};
use num::Zero;
use std::fmt;
use std::ops::{Index, IndexMut};

/// Column vector of rationals.
pub type QVector = Vec<Rational>;

/// Dense row-major matrix over the rationals.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    let mut s = Rational::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            s += x * y;
        }
    }
    s
}

/// Signature triple of a symmetric matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Inertia {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

impl Inertia {
    /// `positive - negative`.
    pub fn signature(&self) -> i64 {
        self.positive as i64 - self.negative as i64
    }
}

impl QMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Rational>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!("{} entries for a {rows}x{cols} matrix", data.len())));
        }
        Ok(QMatrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = one();
        }
        m
    }

    pub fn diag(entries: &[Rational]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, e) in entries.iter().enumerate() {
            m[(i, i)] = e.clone();
        }
        m
    }

    pub fn diag_i64(entries: &[i64]) -> Self {
        Self::diag(&entries.iter().map(|&e| q(e)).collect::<Vec<_>>())
    }

    /// Build from rows; all rows must have equal length.
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(QMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    /// Integer matrix literal; panics on ragged input.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect())
            .expect("ragged integer matrix literal")
    }

    /// Matrix whose columns are the given vectors (all of length `rows`).
    pub fn from_columns(rows: usize, columns: &[QVector]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length mismatch");
            for (i, x) in col.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[Rational] {
        &self.data
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (i + 1..self.cols).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> QVector {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn row_vectors(&self) -> Vec<QVector> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    /// Matrix product; panics on incompatible shapes (an internal invariant).
    pub fn mul(&self, other: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn try_mul(&self, other: &QMatrix) -> Result<QMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(self.mul(other))
    }

    pub fn mul_vec(&self, v: &[Rational]) -> QVector {
        assert_eq!(self.cols, v.len(), "matrix-vector shape mismatch");
        (0..self.rows).map(|i| dot(self.row(i), v)).collect()
    }

    pub fn add(&self, other: &QMatrix) -> QMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "sum shape mismatch");
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &QMatrix) -> QMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "difference shape mismatch");
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> QMatrix {
        QMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a * c).collect() }
    }

    /// `self += c * other`, skipping zero entries.
    pub fn add_scaled(&mut self, c: &Rational, other: &QMatrix) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "sum shape mismatch");
        if c.is_zero() {
            return;
        }
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            if !b.is_zero() {
                *a += c * b;
            }
        }
    }

    pub fn pow(&self, mut e: u32) -> QMatrix {
        assert!(self.is_square());
        let mut base = self.clone();
        let mut acc = Self::identity(self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn trace(&self) -> Rational {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)].clone()).sum()
    }

    /// Block-diagonal sum.
    pub fn block_diag(blocks: &[QMatrix]) -> QMatrix {
        let r: usize = blocks.iter().map(|b| b.rows).sum();
        let c: usize = blocks.iter().map(|b| b.cols).sum();
        let mut m = Self::zeros(r, c);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            m.set_block(r0, c0, b);
            r0 += b.rows;
            c0 += b.cols;
        }
        m
    }

    /// Overwrite the block starting at `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, b: &QMatrix) {
        assert!(r0 + b.rows <= self.rows && c0 + b.cols <= self.cols, "block out of range");
        for i in 0..b.rows {
            for j in 0..b.cols {
                self[(r0 + i, c0 + j)] = b[(i, j)].clone();
            }
        }
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> QMatrix {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = self[(r0 + i, c0 + j)].clone();
            }
        }
        m
    }

    /// Reduced row echelon form and pivot columns.
    ///
    /// Gauss-Jordan elimination over the rationals. Row updates only visit
    /// the nonzero support of the pivot row, which keeps the large sparse
    /// systems built for algebras of adjoints cheap.
    pub fn rref(&self) -> (QMatrix, Vec<usize>) {
        let mut rows: Vec<Vec<Rational>> = self.row_vectors();
        let pivots = rref_rows(&mut rows, self.cols);
        let data = rows.into_iter().flatten().collect();
        (QMatrix { rows: self.rows, cols: self.cols, data }, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{x : self * x = 0}`, one vector per free column.
    pub fn kernel(&self) -> Vec<QVector> {
        let (r, pivots) = self.rref();
        kernel_from_rref(&r, &pivots)
    }

    /// Solve `self * x = b`. `Ok(None)` when inconsistent.
    pub fn solve_affine(&self, b: &[Rational]) -> Result<Option<(QVector, Vec<QVector>)>> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "right-hand side of length {} for {} rows",
                b.len(),
                self.rows
            )));
        }
        let n = self.cols;
        let mut rows: Vec<Vec<Rational>> = (0..self.rows)
            .map(|i| {
                let mut r = self.row(i).to_vec();
                r.push(b[i].clone());
                r
            })
            .collect();
        let pivots = rref_rows(&mut rows, n + 1);
        if pivots.last() == Some(&n) {
            return Ok(None);
        }
        let mut x0 = vec![Rational::zero(); n];
        for (k, &p) in pivots.iter().enumerate() {
            x0[p] = rows[k][n].clone();
        }
        let reduced = QMatrix {
            rows: self.rows,
            cols: n,
            data: rows
                .into_iter()
                .flat_map(|mut r| {
                    r.pop();
                    r
                })
                .collect(),
        };
        Ok(Some((x0, kernel_from_rref(&reduced, &pivots))))
    }

    pub fn determinant(&self) -> Result<Rational> {
        if !self.is_square() {
            return Err(Error::NotSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        let mut m = self.row_vectors();
        let mut det = one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !m[r][c].is_zero()) else {
                return Ok(Rational::zero());
            };
            if p != c {
                m.swap(p, c);
                det = -det;
            }
            let piv = m[c][c].clone();
            det *= &piv;
            for r in c + 1..n {
                if m[r][c].is_zero() {
                    continue;
                }
                let f = &m[r][c] / &piv;
                let (top, bottom) = m.split_at_mut(r);
                for (x, p) in bottom[0][c..n].iter_mut().zip(&top[c][c..n]) {
                    if !p.is_zero() {
                        *x -= &f * p;
                    }
                }
            }
        }
        Ok(det)
    }

    pub fn inverse(&self) -> Option<QMatrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut rows: Vec<Vec<Rational>> = (0..n)
            .map(|i| {
                let mut r = self.row(i).to_vec();
                r.extend((0..n).map(|j| if i == j { one() } else { Rational::zero() }));
                r
            })
            .collect();
        let pivots = rref_rows(&mut rows, 2 * n);
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let data = rows.into_iter().flat_map(|r| r.into_iter().skip(n)).collect();
        Some(QMatrix { rows: n, cols: n, data })
    }

    /// Basis of the column space (a subset of the columns, in order).
    pub fn column_space(&self) -> Vec<QVector> {
        let (_, pivots) = self.rref();
        pivots.into_iter().map(|j| self.column(j)).collect()
    }

    /// Congruence diagonalization: returns `(D, P)` with `Pᵗ S P = D` diagonal.
    pub fn congruence_diagonalize(&self) -> Result<(QMatrix, QMatrix)> {
        if !self.is_square() {
            return Err(Error::NotSquare { rows: self.rows, cols: self.cols });
        }
        if !self.is_symmetric() {
            return Err(Error::NotSymmetric);
        }
        let n = self.rows;
        let mut s = self.clone();
        let mut p = Self::identity(n);
        for i in 0..n {
            if s[(i, i)].is_zero() {
                // a zero row stays put, so already diagonal input comes back unchanged
                let Some(j) = (i + 1..n).find(|&j| !s[(i, j)].is_zero()) else {
                    continue;
                };
                if !s[(j, j)].is_zero() {
                    s.swap_basis(i, j);
                    p.swap_cols(i, j);
                } else {
                    // e_i <- e_i + e_j; new diagonal entry is 2 s_ij since s_jj = 0
                    s.add_basis(i, j, &one());
                    p.add_col(i, j, &one());
                }
            }
            let piv = s[(i, i)].clone();
            for j in i + 1..n {
                if s[(j, i)].is_zero() {
                    continue;
                }
                let c = -(&s[(j, i)] / &piv);
                s.add_basis(j, i, &c);
                p.add_col(j, i, &c);
            }
        }
        Ok((s, p))
    }

    /// Inertia (Sylvester signature triple) of a symmetric matrix.
    pub fn inertia(&self) -> Result<Inertia> {
        let (d, _) = self.congruence_diagonalize()?;
        let mut out = Inertia { positive: 0, negative: 0, zero: 0 };
        for i in 0..d.rows {
            match sign(&d[(i, i)]) {
                1 => out.positive += 1,
                -1 => out.negative += 1,
                _ => out.zero += 1,
            }
        }
        Ok(out)
    }

    /// Characteristic polynomial `det(X I - M)` by Faddeev-LeVerrier.
    pub fn charpoly(&self) -> Result<super::UPoly> {
        if !self.is_square() {
            return Err(Error::NotSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        // coefficients c_n = 1, c_{n-k} = -tr(M N_k)/k with N_k = M N_{k-1} + c_{n-k+1} I
        let mut coeffs = vec![Rational::zero(); n + 1];
        coeffs[n] = one();
        let mut nk = Self::identity(n);
        for k in 1..=n {
            let mn = self.mul(&nk);
            let c = -mn.trace() / q(k as i64);
            coeffs[n - k] = c.clone();
            nk = mn;
            for i in 0..n {
                nk[(i, i)] += &c;
            }
        }
        Ok(super::UPoly::new(coeffs))
    }

    /// Minimal polynomial from the first linear dependency among `I, M, M², ...`.
    pub fn minpoly(&self) -> Result<super::UPoly> {
        if !self.is_square() {
            return Err(Error::NotSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        let mut powers: Vec<QVector> = vec![Self::identity(n).data];
        let mut cur = Self::identity(n);
        for k in 1..=n {
            cur = cur.mul(self);
            powers.push(cur.data.clone());
            let krylov = QMatrix::from_columns(n * n, &powers);
            let ker = krylov.kernel();
            if let Some(v) = ker.first() {
                // the first dependency has a nonzero top coefficient
                let lead = v[k].clone();
                if lead.is_zero() {
                    return Err(Error::Internal("Krylov relation without leading term".into()));
                }
                return Ok(super::UPoly::new(v.iter().map(|c| c / &lead).collect()));
            }
        }
        Err(Error::Internal("no Krylov relation up to degree n".into()))
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        for r in 0..self.rows {
            self.data.swap(r * self.cols + i, r * self.cols + j);
        }
    }

    fn add_col(&mut self, dst: usize, src: usize, c: &Rational) {
        for r in 0..self.rows {
            let t = &self[(r, src)] * c;
            self[(r, dst)] += t;
        }
    }

    /// Congruence by the basis swap `e_i <-> e_j`.
    fn swap_basis(&mut self, i: usize, j: usize) {
        self.swap_cols(i, j);
        for c in 0..self.cols {
            self.data.swap(i * self.cols + c, j * self.cols + c);
        }
    }

    /// Congruence by `e_dst <- e_dst + c e_src`.
    fn add_basis(&mut self, dst: usize, src: usize, c: &Rational) {
        self.add_col(dst, src, c);
        for k in 0..self.cols {
            let t = &self[(src, k)] * c;
            self[(dst, k)] += t;
        }
    }
}

pub(crate) fn rref_rows(rows: &mut [Vec<Rational>], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        let support: Vec<usize> = (c..cols).filter(|&j| !rows[r][j].is_zero()).collect();
        for &j in &support {
            rows[r][j] *= &inv;
        }
        let (head, tail) = rows.split_at_mut(r);
        let (pivot_row, tail) = tail.split_first_mut().expect("pivot row");
        for other in head.iter_mut().chain(tail.iter_mut()) {
            if other[c].is_zero() {
                continue;
            }
            let f = other[c].clone();
            for &j in &support {
                let t = &f * &pivot_row[j];
                other[j] -= t;
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

fn kernel_from_rref(r: &QMatrix, pivots: &[usize]) -> Vec<QVector> {
    let n = r.cols;
    let mut is_pivot = vec![false; n];
    for &p in pivots {
        is_pivot[p] = true;
    }
    (0..n)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut v = vec![Rational::zero(); n];
            v[f] = one();
            for (k, &p) in pivots.iter().enumerate() {
                v[p] = -r[(k, f)].clone();
            }
            v
        })
        .collect()
}

impl Index<(usize, usize)> for QMatrix {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for QMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

/// One row per line, entries right-aligned.
impl fmt::Display for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = self.data.iter().map(ToString::to_string).collect();
        let width = cells.iter().map(|c| c.chars().count()).max().unwrap_or(0);
        for i in 0..self.rows {
            let row: Vec<String> =
                cells[i * self.cols..(i + 1) * self.cols].iter().map(|c| format!("{c:>width$}")).collect();
            writeln!(f, "  {}", row.join(" "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::qr;

    #[test]
    fn kernel_examples() {
        assert!(QMatrix::identity(2).kernel().is_empty());
        let k = QMatrix::from_i64(&[&[1, 1], &[1, 1]]).kernel();
        assert_eq!(k, vec![vec![q(-1), q(1)]]);
        let k = QMatrix::from_i64(&[&[1, 2]]).kernel();
        assert_eq!(k, vec![vec![q(-2), q(1)]]);
    }

    #[test]
    fn solve_affine_examples() {
        let (x, k) = QMatrix::identity(2).solve_affine(&[q(3), q(4)]).unwrap().unwrap();
        assert_eq!(x, vec![q(3), q(4)]);
        assert!(k.is_empty());
        let (x, k) = QMatrix::from_i64(&[&[1, 1]]).solve_affine(&[q(2)]).unwrap().unwrap();
        assert_eq!(x, vec![q(2), q(0)]);
        assert_eq!(k.len(), 1);
        assert!(QMatrix::from_i64(&[&[0, 0]]).solve_affine(&[q(1)]).unwrap().is_none());
        assert!(QMatrix::identity(2).solve_affine(&[q(1)]).is_err());
    }

    #[test]
    fn congruence_examples() {
        let s = QMatrix::from_i64(&[&[0, 1], &[1, 0]]);
        let (d, p) = s.congruence_diagonalize().unwrap();
        assert_eq!(p.transpose().mul(&s).mul(&p), d);
        assert_eq!(d[(0, 1)], q(0));
        let given = QMatrix::from_i64(&[&[1, 1], &[1, -1]]);
        assert_eq!(given.transpose().mul(&s).mul(&given), QMatrix::diag_i64(&[2, -2]));

        let s = QMatrix::diag_i64(&[5, 0, -3]);
        let (d, p) = s.congruence_diagonalize().unwrap();
        assert_eq!(d, s);
        assert_eq!(p, QMatrix::identity(3));

        let (d, p) = QMatrix::zeros(3, 3).congruence_diagonalize().unwrap();
        assert!(d.is_zero());
        assert_eq!(p, QMatrix::identity(3));

        assert_eq!(QMatrix::from_i64(&[&[0, 1], &[2, 0]]).congruence_diagonalize(), Err(Error::NotSymmetric));
    }

    #[test]
    fn inertia_examples() {
        let i = QMatrix::diag_i64(&[0, 0, 2, 1]).inertia().unwrap();
        assert_eq!((i.positive, i.negative, i.zero, i.signature()), (2, 0, 2, 2));
        let i = QMatrix::from_i64(&[&[0, 1], &[1, 0]]).inertia().unwrap();
        assert_eq!((i.positive, i.negative, i.zero), (1, 1, 0));
    }

    #[test]
    fn determinant_and_inverse() {
        let m = QMatrix::from_i64(&[&[2, 1], &[7, 4]]);
        assert_eq!(m.determinant().unwrap(), q(1));
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), QMatrix::identity(2));
        assert!(QMatrix::from_i64(&[&[1, 2], &[2, 4]]).inverse().is_none());
        let h = QMatrix::from_rows(vec![vec![q(1), qr(1, 2)], vec![qr(1, 2), qr(1, 3)]]).unwrap();
        assert_eq!(h.determinant().unwrap(), qr(1, 12));
    }
}
