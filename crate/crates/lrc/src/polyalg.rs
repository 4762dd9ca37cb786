//! Dense univariate polynomials, homogeneous binary forms and matrices over
//! GF(q), with deterministic Gaussian elimination.

use std::fmt;

use crate::error::{Error, Result};
use crate::gfq::{Enc, Field};

/// Univariate polynomial, coefficients lowest-first and trimmed; the zero
/// polynomial has an empty coefficient list and degree `None`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    field: Field,
    coeffs: Vec<Enc>,
}

impl Poly {
    pub fn new(field: &Field, coeffs: &[Enc]) -> Poly {
        debug_assert!(coeffs.iter().all(|&c| c < field.q()));
        let mut coeffs = coeffs.to_vec();
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Poly {
            field: field.clone(),
            coeffs,
        }
    }

    pub fn zero(field: &Field) -> Poly {
        Poly {
            field: field.clone(),
            coeffs: Vec::new(),
        }
    }

    /// Monomial x^d.
    pub fn monomial(field: &Field, d: usize) -> Poly {
        let mut coeffs = vec![0; d + 1];
        coeffs[d] = 1;
        Poly {
            field: field.clone(),
            coeffs,
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[Enc] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, x: Enc) -> Enc {
        let f = &self.field;
        let mut acc = 0;
        for &c in self.coeffs.iter().rev() {
            acc = f.add(f.mul(acc, x), c);
        }
        acc
    }

    pub fn add(&self, other: &Poly) -> Poly {
        assert!(self.field == other.field, "field mismatch");
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![0; n];
        for (i, slot) in out.iter_mut().enumerate() {
            let a = self.coeffs.get(i).copied().unwrap_or(0);
            let b = other.coeffs.get(i).copied().unwrap_or(0);
            *slot = self.field.add(a, b);
        }
        Poly::new(&self.field, &out)
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        assert!(self.field == other.field, "field mismatch");
        if self.is_zero() || other.is_zero() {
            return Poly::zero(&self.field);
        }
        let mut out = vec![0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = self.field.add(out[i + j], self.field.mul(a, b));
            }
        }
        Poly::new(&self.field, &out)
    }

    pub fn scale(&self, c: Enc) -> Poly {
        let out: Vec<Enc> = self.coeffs.iter().map(|&a| self.field.mul(a, c)).collect();
        Poly::new(&self.field, &out)
    }

    /// Monic product of (x - root) over the given roots.
    pub fn from_roots(field: &Field, roots: &[Enc]) -> Poly {
        let mut acc = Poly::new(field, &[1]);
        for &r in roots {
            acc = acc.mul(&Poly::new(field, &[field.neg(r), 1]));
        }
        acc
    }
}

/// Homogeneous binary form of fixed degree d: sum of c_j * t^j * u^(d-j).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomogForm {
    field: Field,
    degree: usize,
    coeffs: Vec<Enc>,
}

impl HomogForm {
    /// `coeffs[j]` multiplies t^j u^(d-j); the list length fixes d + 1.
    pub fn new(field: &Field, coeffs: &[Enc]) -> HomogForm {
        assert!(
            !coeffs.is_empty(),
            "a homogeneous form needs at least one coefficient"
        );
        debug_assert!(coeffs.iter().all(|&c| c < field.q()));
        HomogForm {
            field: field.clone(),
            degree: coeffs.len() - 1,
            coeffs: coeffs.to_vec(),
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn eval(&self, t: Enc, u: Enc) -> Enc {
        let f = &self.field;
        let mut acc = 0;
        for (j, &c) in self.coeffs.iter().enumerate() {
            let term = f.mul(
                c,
                f.mul(f.pow(t, j as u64), f.pow(u, (self.degree - j) as u64)),
            );
            acc = f.add(acc, term);
        }
        acc
    }

    /// Restriction to the affine chart u = 1.
    pub fn dehomogenize(&self) -> Poly {
        Poly::new(&self.field, &self.coeffs)
    }
}

/// Dense row-major matrix over GF(q).
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Enc>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "Matrix {}x{} over {:?}",
            self.rows, self.cols, self.field
        )?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        Ok(())
    }
}

impl Matrix {
    pub fn zeros(field: &Field, rows: usize, cols: usize) -> Matrix {
        Matrix {
            field: field.clone(),
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn from_rows(field: &Field, rows: &[Vec<Enc>]) -> Matrix {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        debug_assert!(rows.iter().flatten().all(|&e| e < field.q()));
        Matrix {
            field: field.clone(),
            rows: rows.len(),
            cols,
            data: rows.concat(),
        }
    }

    pub fn identity(field: &Field, n: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Enc {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Enc) {
        debug_assert!(v < self.field.q());
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Enc] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(&self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[Enc]) -> Vec<Enc> {
        assert_eq!(v.len(), self.cols, "dimension mismatch");
        let f = &self.field;
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b)))
            })
            .collect()
    }

    /// Reduced row-echelon form and rank. Pivoting is deterministic: for each
    /// column the first row (in order) with a nonzero entry is chosen.
    pub fn rref(&self) -> (Matrix, usize) {
        let f = self.field.clone();
        let mut m = self.clone();
        let mut pivot_row = 0;
        for col in 0..m.cols {
            if pivot_row == m.rows {
                break;
            }
            let Some(found) = (pivot_row..m.rows).find(|&i| m.get(i, col) != 0) else {
                continue;
            };
            if found != pivot_row {
                for j in 0..m.cols {
                    let tmp = m.get(found, j);
                    m.set(found, j, m.get(pivot_row, j));
                    m.set(pivot_row, j, tmp);
                }
            }
            let inv = f.inv(m.get(pivot_row, col)).expect("pivot is nonzero");
            for j in 0..m.cols {
                m.set(pivot_row, j, f.mul(m.get(pivot_row, j), inv));
            }
            for i in 0..m.rows {
                if i == pivot_row {
                    continue;
                }
                let factor = m.get(i, col);
                if factor == 0 {
                    continue;
                }
                for j in 0..m.cols {
                    let v = f.sub(m.get(i, j), f.mul(factor, m.get(pivot_row, j)));
                    m.set(i, j, v);
                }
            }
            pivot_row += 1;
        }
        (m, pivot_row)
    }

    pub fn rank(&self) -> usize {
        self.rref().1
    }

    /// Nonzero rows of the reduced row-echelon form.
    pub fn row_basis(&self) -> Matrix {
        let (r, rank) = self.rref();
        let rows: Vec<Vec<Enc>> = (0..rank).map(|i| r.row(i).to_vec()).collect();
        Matrix::from_rows(&self.field, &rows)
    }

    /// Basis of the right null space {x : self * x = 0}, one vector per
    /// free column of the reduced row-echelon form.
    pub fn null_space(&self) -> Vec<Vec<Enc>> {
        let f = &self.field;
        let (r, rank) = self.rref();
        let pivot_cols: Vec<usize> = (0..rank)
            .map(|i| {
                (0..self.cols)
                    .find(|&j| r.get(i, j) != 0)
                    .expect("nonzero row")
            })
            .collect();
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_cols.contains(&free) {
                continue;
            }
            let mut v = vec![0; self.cols];
            v[free] = 1;
            for (i, &pc) in pivot_cols.iter().enumerate() {
                v[pc] = f.neg(r.get(i, free));
            }
            basis.push(v);
        }
        basis
    }

    /// Solves the square system self * x = b.
    pub fn solve(&self, b: &[Enc]) -> Result<Vec<Enc>> {
        if self.rows != self.cols {
            return Err(Error::ShapeMismatch(format!(
                "solve needs a square matrix, got {}x{}",
                self.rows, self.cols
            )));
        }
        assert_eq!(b.len(), self.rows, "dimension mismatch");
        let mut aug = Matrix::zeros(&self.field, self.rows, self.cols + 1);
        for (i, &bi) in b.iter().enumerate() {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, self.cols, bi);
        }
        let (r, _) = aug.rref();
        // The system is uniquely solvable only if the left block reduced to I.
        for i in 0..self.rows {
            for j in 0..self.cols {
                if r.get(i, j) != u64::from(i == j) {
                    return Err(Error::SingularMatrix);
                }
            }
        }
        Ok((0..self.rows).map(|i| r.get(i, self.cols)).collect())
    }

    pub fn invert(&self) -> Result<Matrix> {
        if self.rows != self.cols {
            return Err(Error::ShapeMismatch(format!(
                "invert needs a square matrix, got {}x{}",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        let mut aug = Matrix::zeros(&self.field, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, n + i, 1);
        }
        let (r, _) = aug.rref();
        for i in 0..n {
            for j in 0..n {
                if r.get(i, j) != u64::from(i == j) {
                    return Err(Error::SingularMatrix);
                }
            }
        }
        let mut out = Matrix::zeros(&self.field, n, n);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, r.get(i, n + j));
            }
        }
        Ok(out)
    }

    /// Stacks two matrices with equal column count vertically.
    pub fn stack(&self, other: &Matrix) -> Matrix {
        assert!(self.field == other.field, "field mismatch");
        assert_eq!(self.cols, other.cols, "column mismatch");
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Matrix {
            field: self.field.clone(),
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    /// True if the row spaces coincide (rank(A) = rank(B) = rank(A over B)).
    pub fn row_space_eq(&self, other: &Matrix) -> bool {
        let ra = self.rank();
        let rb = other.rank();
        ra == rb && self.stack(other).rank() == ra
    }
}

/// Vandermonde matrix: one row per node, columns 1, x, ..., x^(width-1).
pub fn vandermonde(field: &Field, nodes: &[Enc], width: usize) -> Matrix {
    let rows: Vec<Vec<Enc>> = nodes
        .iter()
        .map(|&x| (0..width).map(|j| field.pow(x, j as u64)).collect())
        .collect();
    Matrix::from_rows(field, &rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn gf(q: (u64, u32)) -> Field {
        Field::new(q.0, q.1, None).unwrap()
    }

    #[test]
    fn poly_eval_matches_spec_example() {
        let f = gf((13, 1));
        let p = Poly::new(&f, &[1, 0, 1]); // t^2 + 1
        assert_eq!(p.eval(5), 0);
    }

    #[test]
    fn zero_poly_degree_is_none() {
        let f = gf((5, 1));
        assert_eq!(Poly::zero(&f).degree(), None);
        assert_eq!(Poly::new(&f, &[0, 0]).degree(), None);
        assert_eq!(Poly::new(&f, &[3]).degree(), Some(0));
    }

    #[test]
    fn from_roots_vanishes_exactly_there() {
        let f = gf((13, 1));
        let p = Poly::from_roots(&f, &[2, 7, 11]);
        assert_eq!(p.degree(), Some(3));
        for x in f.elements() {
            assert_eq!(p.eval(x) == 0, [2, 7, 11].contains(&x));
        }
    }

    #[test]
    fn homog_form_matches_dehomogenized_poly() {
        let f = gf((13, 1));
        let h = HomogForm::new(&f, &[3, 0, 1, 5]); // degree 3
        let p = h.dehomogenize();
        for t in f.elements() {
            assert_eq!(h.eval(t, 1), p.eval(t));
        }
        // Homogeneity: h(ct, cu) = c^d h(t, u).
        for &(t, u, c) in &[(2, 3, 4), (0, 1, 7), (5, 5, 12)] {
            let lhs = h.eval(f.mul(c, t), f.mul(c, u));
            let rhs = f.mul(f.pow(c, 3), h.eval(t, u));
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    #[allow(clippy::identity_op)] // the node differences are spelled out
    fn vandermonde_rank_full_for_distinct_nodes() {
        let f = gf((5, 1));
        let m = vandermonde(&f, &[1, 2, 4], 3);
        // Oracle: 3x3 Vandermonde determinant = product of node differences.
        let det_oracle: u64 = [(2 - 1) * (4 - 1) % 5, (4 - 2) % 5]
            .iter()
            .fold(1, |acc, &d| acc * d % 5);
        assert_ne!(det_oracle, 0);
        assert_eq!(m.rank(), 3);
    }

    #[test]
    fn rank_one_and_singular_inverse() {
        let f = gf((5, 1));
        let m = Matrix::from_rows(&f, &[vec![1, 1], vec![2, 2]]);
        assert_eq!(m.rank(), 1);
        assert!(matches!(m.invert(), Err(Error::SingularMatrix)));
        assert!(matches!(m.solve(&[1, 0]), Err(Error::SingularMatrix)));
    }

    #[test]
    fn rref_is_canonical() {
        let f = gf((7, 1));
        let m = Matrix::from_rows(&f, &[vec![2, 4, 1], vec![3, 6, 5], vec![1, 2, 0]]);
        let (r, rank) = m.rref();
        assert_eq!(rank, 2);
        // Leading entries are 1 with zeros above and below.
        assert_eq!(r.row(0), &[1, 2, 0]);
        assert_eq!(r.row(1), &[0, 0, 1]);
        assert_eq!(r.row(2), &[0, 0, 0]);
    }

    #[test]
    fn invert_roundtrip() {
        let f = gf((3, 2));
        let m = Matrix::from_rows(&f, &[vec![3, 1, 0], vec![1, 0, 2], vec![0, 5, 1]]);
        let inv = m.invert().unwrap();
        let mut prod = Matrix::zeros(&f, 3, 3);
        for i in 0..3 {
            for j in 0..3 {
                let mut acc = 0;
                for l in 0..3 {
                    acc = f.add(acc, f.mul(m.get(i, l), inv.get(l, j)));
                }
                prod.set(i, j, acc);
            }
        }
        assert_eq!(prod, Matrix::identity(&f, 3));
    }

    #[test]
    fn row_space_eq_detects_equality_and_difference() {
        let f = gf((5, 1));
        let a = Matrix::from_rows(&f, &[vec![1, 0, 1], vec![0, 1, 1]]);
        let b = Matrix::from_rows(&f, &[vec![1, 1, 2], vec![1, 4, 0]]);
        let c = Matrix::from_rows(&f, &[vec![1, 0, 0], vec![0, 1, 1]]);
        assert!(a.row_space_eq(&b));
        assert!(!a.row_space_eq(&c));
    }

    #[test]
    fn null_space_vectors_are_killed_by_the_matrix() {
        let f = gf((7, 1));
        let a = Matrix::from_rows(&f, &[vec![1, 2, 0], vec![0, 0, 1]]);
        let ns = a.null_space();
        assert_eq!(ns, vec![vec![5, 1, 0]]);
        assert_eq!(a.mul_vec(&ns[0]), vec![0, 0]);
        // Rank-nullity: rank 2 + nullity 1 = 3 columns.
        assert_eq!(a.rank() + ns.len(), a.cols());
    }

    proptest! {
        #[test]
        fn solve_recovers_known_vector(seed in 0u64..500) {
            // Deterministic pseudo-random small system over GF(13).
            let f = gf((13, 1));
            let n = 3;
            let mut s = seed;
            let mut next = || { s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407); (s >> 33) % 13 };
            let rows: Vec<Vec<Enc>> = (0..n).map(|_| (0..n).map(|_| next()).collect()).collect();
            let m = Matrix::from_rows(&f, &rows);
            let x: Vec<Enc> = (0..n).map(|_| next()).collect();
            let b = m.mul_vec(&x);
            match m.solve(&b) {
                Ok(got) => prop_assert_eq!(got, x),
                Err(Error::SingularMatrix) => prop_assert!(m.rank() < n),
                Err(e) => return Err(TestCaseError::fail(format!("{e}"))),
            }
        }

        #[test]
        fn rank_equals_transpose_rank(seed in 0u64..200) {
            let f = gf((5, 1));
            let mut s = seed;
            let mut next = || { s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407); (s >> 33) % 5 };
            let rows: Vec<Vec<Enc>> = (0..4).map(|_| (0..3).map(|_| next()).collect()).collect();
            let m = Matrix::from_rows(&f, &rows);
            prop_assert_eq!(m.rank(), m.transpose().rank());
        }
    }
}
