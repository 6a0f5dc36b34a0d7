//! Dense matrices over an exact field, plus the three workhorses every
//! other module leans on: reduced row echelon form, canonical kernel
//! bases, and symmetric rank via congruence diagonalization.
//!
//! Pivoting is "first nonzero entry in column order" — exact arithmetic
//! needs no magnitude pivoting, and the fixed rule makes every derived
//! basis (and therefore every certificate) reproducible.

use num_traits::Signed;

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    pub field: FieldSpec,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(field: FieldSpec, rows: usize, cols: usize) -> Matrix {
        Matrix {
            rows,
            cols,
            field,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: FieldSpec, n: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_rows(field: FieldSpec, rows: Vec<Vec<Scalar>>) -> Matrix {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            for s in row {
                assert!(s.field() == field, "entry field mismatch");
                data.push(s);
            }
        }
        Matrix { rows: r, cols: c, field, data }
    }

    /// Build from column vectors.
    pub fn from_cols(field: FieldSpec, cols: Vec<Vec<Scalar>>) -> Matrix {
        let c = cols.len();
        let r = cols.first().map_or(0, |col| col.len());
        let mut m = Matrix::zeros(field, r, c);
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), r, "ragged columns");
            for (i, s) in col.iter().enumerate() {
                m.set(i, j, s.clone());
            }
        }
        m
    }

    pub fn at(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, s: Scalar) {
        self.data[i * self.cols + j] = s;
    }

    pub fn col(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.at(i, j).clone()).collect()
    }

    pub fn row(&self, i: usize) -> Vec<Scalar> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.at(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "shape mismatch in matrix product");
        let mut out = Matrix::zeros(self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.at(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    out.set(i, j, out.at(i, j).add(&a.mul(b)));
                }
            }
        }
        out
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(self.cols, v.len(), "shape mismatch in matrix-vector product");
        (0..self.rows)
            .map(|i| {
                let mut acc = self.field.zero();
                for j in 0..self.cols {
                    if !v[j].is_zero() && !self.at(i, j).is_zero() {
                        acc = acc.add(&self.at(i, j).mul(&v[j]));
                    }
                }
                acc
            })
            .collect()
    }

    pub fn is_symmetric(&self) -> bool {
        if self.rows != self.cols {
            return false;
        }
        for i in 0..self.rows {
            for j in i + 1..self.cols {
                if self.at(i, j) != self.at(j, i) {
                    return false;
                }
            }
        }
        true
    }

    /// Reduced row echelon form with deterministic first-nonzero pivoting.
    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0usize;
        for c in 0..m.cols {
            if r >= m.rows {
                break;
            }
            let mut pivot_row = None;
            for i in r..m.rows {
                if !m.at(i, c).is_zero() {
                    pivot_row = Some(i);
                    break;
                }
            }
            let Some(pr) = pivot_row else { continue };
            if pr != r {
                for j in 0..m.cols {
                    let a = m.at(r, j).clone();
                    let b = m.at(pr, j).clone();
                    m.set(r, j, b);
                    m.set(pr, j, a);
                }
            }
            let inv = m.at(r, c).inv();
            for j in 0..m.cols {
                if !m.at(r, j).is_zero() {
                    m.set(r, j, m.at(r, j).mul(&inv));
                }
            }
            for i in 0..m.rows {
                if i != r && !m.at(i, c).is_zero() {
                    let f = m.at(i, c).clone();
                    for j in 0..m.cols {
                        if m.at(r, j).is_zero() {
                            continue;
                        }
                        let v = m.at(i, j).sub(&f.mul(m.at(r, j)));
                        m.set(i, j, v);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        Rref { rank: pivots.len(), pivots, matrix: m }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// Canonical basis of the right null space: one column per free
    /// variable (unit there, negated RREF entries at the pivots), in
    /// column order. Returns a matrix whose columns are the basis.
    pub fn kernel_basis(&self) -> Matrix {
        let Rref { matrix: r, pivots, .. } = self.rref();
        let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
        let mut cols = Vec::new();
        for free in 0..self.cols {
            if pivot_set.contains(&free) {
                continue;
            }
            let mut v = vec![self.field.zero(); self.cols];
            v[free] = self.field.one();
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = r.at(i, free).neg();
            }
            cols.push(v);
        }
        if cols.is_empty() {
            Matrix::zeros(self.field, self.cols, 0)
        } else {
            Matrix::from_cols(self.field, cols)
        }
    }

    /// Rank of a symmetric matrix together with an invertible P such that
    /// Pᵀ·self·P is diagonal (congruence diagonalization, char ≠ 2).
    /// The rank is cross-checked against the RREF rank.
    pub fn symmetric_rank(&self) -> Result<(usize, Matrix)> {
        if !self.is_symmetric() {
            return Err(Error::NonSymmetric);
        }
        let n = self.rows;
        let f = self.field;
        let mut a = self.clone();
        let mut p = Matrix::identity(f, n);
        for k in 0..n {
            if a.at(k, k).is_zero() {
                // try to bring a nonzero onto the diagonal: first by a
                // symmetric swap, then by the row+col addition trick
                // (needs char != 2: the new diagonal entry is 2*a[k][j])
                if let Some(j) = (k + 1..n).find(|&j| !a.at(j, j).is_zero()) {
                    a.swap_sym(k, j);
                    p.swap_cols(k, j);
                } else if let Some(j) = (k + 1..n).find(|&j| !a.at(k, j).is_zero()) {
                    a.add_row_col(k, j, &f.one());
                    p.add_col(k, j, &f.one());
                } else {
                    continue; // row k of the trailing block is zero
                }
            }
            let d = a.at(k, k).clone();
            for j in k + 1..n {
                if a.at(k, j).is_zero() {
                    continue;
                }
                let factor = a.at(k, j).div(&d).neg();
                a.add_row_col(j, k, &factor);
                p.add_col(j, k, &factor);
            }
        }
        let rank = (0..n).filter(|&i| !a.at(i, i).is_zero()).count();
        let rref_rank = self.rank();
        assert_eq!(rank, rref_rank, "congruence rank disagrees with rref rank");
        Ok((rank, p))
    }

    /// In-place symmetric row+col swap (conjugation by a transposition).
    fn swap_sym(&mut self, i: usize, j: usize) {
        for c in 0..self.cols {
            let a = self.at(i, c).clone();
            let b = self.at(j, c).clone();
            self.set(i, c, b);
            self.set(j, c, a);
        }
        for r in 0..self.rows {
            let a = self.at(r, i).clone();
            let b = self.at(r, j).clone();
            self.set(r, i, b);
            self.set(r, j, a);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        for r in 0..self.rows {
            let a = self.at(r, i).clone();
            let b = self.at(r, j).clone();
            self.set(r, i, b);
            self.set(r, j, a);
        }
    }

    /// row_i += f * row_j and col_i += f * col_j (symmetric conjugation).
    fn add_row_col(&mut self, i: usize, j: usize, f: &Scalar) {
        for c in 0..self.cols {
            let v = self.at(i, c).add(&f.mul(self.at(j, c)));
            self.set(i, c, v);
        }
        for r in 0..self.rows {
            let v = self.at(r, i).add(&f.mul(self.at(r, j)));
            self.set(r, i, v);
        }
    }

    /// col_i += f * col_j.
    fn add_col(&mut self, i: usize, j: usize, f: &Scalar) {
        for r in 0..self.rows {
            let v = self.at(r, i).add(&f.mul(self.at(r, j)));
            self.set(r, i, v);
        }
    }
}

#[derive(Debug, Clone)]
pub struct Rref {
    pub matrix: Matrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

/// Incremental row-space builder: greedy insertion with back-reduction,
/// kept in pivot order. Used for spanning checks, deduplication, and
/// membership tests. Deterministic given insertion order.
///
/// Over ℚ the rows are held in primitive integer form with a positive
/// pivot entry, and elimination is fraction-free (v ← ρ·v − v[p]·r, then
/// strip the content). Normalizing pivots to 1 instead — the obvious
/// choice — makes every later elimination a general rational operation,
/// and the gcd churn inside those dominated entire certificate builds.
/// Only zero-ness and pivot positions of residuals matter to callers, and
/// both are invariant under the positive scalings.
#[derive(Debug, Clone)]
pub struct Span {
    dim: usize,
    field: FieldSpec,
    rows: Vec<(usize, Vec<Scalar>)>,
}

impl Span {
    pub fn new(field: FieldSpec, dim: usize) -> Span {
        Span { dim, field, rows: Vec::new() }
    }

    fn reduce(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.dim, "span vector length mismatch");
        if self.field == FieldSpec::Rationals {
            let mut v = crate::field::primitive_part(v);
            for (p, r) in &self.rows {
                if v[*p].is_zero() {
                    continue;
                }
                let rho = r[*p].clone();
                let f = v[*p].clone();
                for j in 0..self.dim {
                    if v[j].is_zero() && r[j].is_zero() {
                        continue;
                    }
                    let a = if v[j].is_zero() { self.field.zero() } else { rho.mul(&v[j]) };
                    v[j] = if r[j].is_zero() { a } else { a.sub(&f.mul(&r[j])) };
                }
                v = crate::field::primitive_part(&v);
            }
            return v;
        }
        let mut v = v.to_vec();
        for (p, r) in &self.rows {
            if !v[*p].is_zero() {
                let f = v[*p].clone();
                for j in 0..self.dim {
                    if !r[j].is_zero() {
                        v[j] = v[j].sub(&f.mul(&r[j]));
                    }
                }
            }
        }
        v
    }

    /// Insert if independent; returns whether the vector enlarged the span.
    pub fn insert(&mut self, v: &[Scalar]) -> bool {
        let mut v = self.reduce(v);
        let Some(p) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        if self.field == FieldSpec::Rationals {
            // `reduce` left v primitive; flip it so the pivot is positive.
            // Back-substitution keeps existing pivots positive because v is
            // zero at every stored pivot position.
            if matches!(&v[p], Scalar::Q(r) if r.is_negative()) {
                for x in v.iter_mut() {
                    *x = x.neg();
                }
            }
            let piv = v[p].clone();
            for (_, r) in self.rows.iter_mut() {
                if r[p].is_zero() {
                    continue;
                }
                let f = r[p].clone();
                for j in 0..self.dim {
                    if r[j].is_zero() && v[j].is_zero() {
                        continue;
                    }
                    let a = if r[j].is_zero() { self.field.zero() } else { piv.mul(&r[j]) };
                    r[j] = if v[j].is_zero() { a } else { a.sub(&f.mul(&v[j])) };
                }
                *r = crate::field::primitive_part(r);
            }
            self.rows.push((p, v));
            self.rows.sort_by_key(|(p, _)| *p);
            return true;
        }
        let inv = v[p].inv();
        for x in v.iter_mut() {
            *x = x.mul(&inv);
        }
        for (_, r) in self.rows.iter_mut() {
            if !r[p].is_zero() {
                let f = r[p].clone();
                for j in 0..self.dim {
                    if !v[j].is_zero() {
                        r[j] = r[j].sub(&f.mul(&v[j]));
                    }
                }
            }
        }
        self.rows.push((p, v));
        self.rows.sort_by_key(|(p, _)| *p);
        true
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.reduce(v).iter().all(|x| x.is_zero())
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp(p: u64) -> FieldSpec {
        FieldSpec::prime(p).unwrap()
    }

    fn m(field: FieldSpec, rows: &[&[i64]]) -> Matrix {
        Matrix::from_rows(
            field,
            rows.iter()
                .map(|r| r.iter().map(|&x| field.from_i64(x)).collect())
                .collect(),
        )
    }

    #[test]
    fn rref_basics() {
        let q = FieldSpec::Rationals;
        let id = Matrix::identity(q, 3);
        let r = id.rref();
        assert_eq!(r.rank, 3);
        assert_eq!(r.pivots, vec![0, 1, 2]);

        let z = Matrix::zeros(q, 2, 2);
        assert_eq!(z.rref().rank, 0);
        assert!(z.rref().pivots.is_empty());

        // over F5, [[1,2],[2,4]] has rank 1 (second row is 2x first)
        let a = m(fp(5), &[&[1, 2], &[2, 4]]);
        assert_eq!(a.rref().rank, 1);
    }

    #[test]
    fn rref_idempotent_and_rank_transpose() {
        let a = m(fp(7), &[&[1, 2, 3], &[4, 5, 6], &[5, 0, 2]]);
        let r1 = a.rref();
        let r2 = r1.matrix.rref();
        assert_eq!(r1.matrix, r2.matrix);
        assert_eq!(a.rank(), a.transpose().rank());
    }

    #[test]
    fn kernel_annihilates() {
        let q = FieldSpec::Rationals;
        let a = m(q, &[&[1, 1, 1]]);
        let k = a.kernel_basis();
        assert_eq!(k.cols, 2);
        for j in 0..k.cols {
            let prod = a.apply(&k.col(j));
            assert!(prod.iter().all(|s| s.is_zero()));
        }
        assert_eq!(Matrix::identity(q, 4).kernel_basis().cols, 0);
    }

    #[test]
    fn symmetric_rank_examples() {
        let q = FieldSpec::Rationals;
        // Gram of x0*x2 - x1^2: rank 3
        let h = q.half();
        let gram = Matrix::from_rows(
            q,
            vec![
                vec![q.zero(), q.zero(), h.clone()],
                vec![q.zero(), q.from_i64(-1), q.zero()],
                vec![h.clone(), q.zero(), q.zero()],
            ],
        );
        let (rank, p) = gram.symmetric_rank().unwrap();
        assert_eq!(rank, 3);
        // P^T Q P is diagonal
        let d = p.transpose().mul(&gram).mul(&p);
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    assert!(d.at(i, j).is_zero());
                }
            }
        }

        // Gram of x0^2 + x1*x2: rank 3
        let gram2 = Matrix::from_rows(
            q,
            vec![
                vec![q.one(), q.zero(), q.zero()],
                vec![q.zero(), q.zero(), h.clone()],
                vec![q.zero(), h.clone(), q.zero()],
            ],
        );
        assert_eq!(gram2.symmetric_rank().unwrap().0, 3);

        // Gram of x0*x3 - x1*x2 in P^3: rank 4 (two hyperbolic planes)
        let mut gram3 = Matrix::zeros(q, 4, 4);
        gram3.set(0, 3, h.clone());
        gram3.set(3, 0, h.clone());
        gram3.set(1, 2, h.neg());
        gram3.set(2, 1, h.neg());
        assert_eq!(gram3.symmetric_rank().unwrap().0, 4);

        let asym = m(q, &[&[0, 1], &[2, 0]]);
        assert!(matches!(asym.symmetric_rank(), Err(Error::NonSymmetric)));
    }

    #[test]
    fn congruence_invariance_smoke() {
        // symmetric_rank(P^T Q P) == symmetric_rank(Q) for invertible P
        let f = fp(7);
        let gram = m(f, &[&[1, 2, 0], &[2, 0, 3], &[0, 3, 5]]);
        let p = m(f, &[&[1, 1, 0], &[0, 1, 2], &[1, 0, 1]]);
        assert_eq!(p.rank(), 3);
        let conj = p.transpose().mul(&gram).mul(&p);
        assert_eq!(
            conj.symmetric_rank().unwrap().0,
            gram.symmetric_rank().unwrap().0
        );
    }

    #[test]
    fn span_tracks_rank_and_membership() {
        let f = fp(5);
        let mut sp = Span::new(f, 3);
        let v1: Vec<_> = [1, 2, 3].iter().map(|&x| f.from_i64(x)).collect();
        let v2: Vec<_> = [2, 4, 6].iter().map(|&x| f.from_i64(x)).collect();
        let v3: Vec<_> = [0, 1, 0].iter().map(|&x| f.from_i64(x)).collect();
        assert!(sp.insert(&v1));
        assert!(!sp.insert(&v2)); // dependent
        assert!(sp.contains(&v2));
        assert!(sp.insert(&v3));
        assert_eq!(sp.rank(), 2);
        assert!(!sp.contains(&[f.one(), f.zero(), f.zero()]));
    }
}
