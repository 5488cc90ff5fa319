//! Dense exact linear algebra over a [`FieldCtx`]: matrices, reduced
//! row-echelon form, and subspaces with the lattice operations (sum,
//! intersection, image, preimage, quotient, section) that the relation
//! calculus and the classification pipeline are built on.
//!
//! Subspaces are stored canonically as RREF bases with no zero rows, so
//! subspace equality is plain matrix equality, and every deterministic
//! "choose a complement" step in the classification reduces to pivot
//! completion here.

use crate::field::{Ctx, FieldElem};
use crate::Error;

pub type Vector = Vec<FieldElem>;

#[derive(Clone)]
pub struct Matrix {
    pub ctx: Ctx,
    pub rows: usize,
    pub cols: usize,
    data: Vec<FieldElem>,
}

impl std::fmt::Debug for Matrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.ctx.show(&self[(i, j)])).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl PartialEq for Matrix {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && *self.ctx == *other.ctx
            && self.data == other.data
    }
}
impl Eq for Matrix {}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = FieldElem;
    fn index(&self, (i, j): (usize, usize)) -> &FieldElem {
        assert!(i < self.rows && j < self.cols, "matrix index out of range");
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut FieldElem {
        assert!(i < self.rows && j < self.cols, "matrix index out of range");
        &mut self.data[i * self.cols + j]
    }
}

impl Matrix {
    pub fn zeros(ctx: &Ctx, rows: usize, cols: usize) -> Matrix {
        Matrix {
            ctx: ctx.clone(),
            rows,
            cols,
            data: vec![ctx.zero(); rows * cols],
        }
    }

    pub fn identity(ctx: &Ctx, n: usize) -> Matrix {
        let mut m = Self::zeros(ctx, n, n);
        for i in 0..n {
            m[(i, i)] = ctx.one();
        }
        m
    }

    pub fn from_rows(ctx: &Ctx, rows: Vec<Vector>) -> Matrix {
        let ncols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == ncols), "ragged rows");
        Matrix {
            ctx: ctx.clone(),
            rows: rows.len(),
            cols: ncols,
            data: rows.into_iter().flatten().collect(),
        }
    }

    /// Build from integer literals (test convenience).
    pub fn from_ints(ctx: &Ctx, rows: &[&[i64]]) -> Matrix {
        Matrix::from_rows(
            ctx,
            rows.iter()
                .map(|r| r.iter().map(|&v| ctx.from_int(v)).collect())
                .collect(),
        )
    }

    pub fn row(&self, i: usize) -> Vector {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn rows_vec(&self) -> Vec<Vector> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn col(&self, j: usize) -> Vector {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(&self.ctx, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].clone();
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|e| self.ctx.is_zero(e))
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a = self.ctx.add(a, b);
        }
        out
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let ctx = &self.ctx;
        let mut out = Matrix::zeros(ctx, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if ctx.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let term = ctx.mul(a, &other[(k, j)]);
                    out[(i, j)] = ctx.add(&out[(i, j)], &term);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[FieldElem]) -> Vector {
        assert_eq!(self.cols, v.len());
        let ctx = &self.ctx;
        (0..self.rows)
            .map(|i| {
                let mut acc = ctx.zero();
                for j in 0..self.cols {
                    acc = ctx.add(&acc, &ctx.mul(&self[(i, j)], &v[j]));
                }
                acc
            })
            .collect()
    }

    /// Entrywise σ^e.
    pub fn sigma(&self, e: i64) -> Matrix {
        let mut out = self.clone();
        for a in out.data.iter_mut() {
            *a = self.ctx.sigma_pow(a, e);
        }
        out
    }

    /// Reduced row-echelon form together with the pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let ctx = self.ctx.clone();
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            // find a pivot in column c at or below row r
            let Some(pr) = (r..m.rows).find(|&i| !ctx.is_zero(&m[(i, c)])) else {
                continue;
            };
            if pr != r {
                for j in 0..m.cols {
                    let tmp = m[(pr, j)].clone();
                    m[(pr, j)] = m[(r, j)].clone();
                    m[(r, j)] = tmp;
                }
            }
            let inv = ctx.inv(&m[(r, c)]).expect("pivot is nonzero");
            for j in c..m.cols {
                m[(r, j)] = ctx.mul(&m[(r, j)], &inv);
            }
            for i in 0..m.rows {
                if i != r && !ctx.is_zero(&m[(i, c)]) {
                    let factor = m[(i, c)].clone();
                    for j in c..m.cols {
                        let t = ctx.mul(&factor, &m[(r, j)]);
                        m[(i, j)] = ctx.sub(&m[(i, j)], &t);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right null space {x : M·x = 0}, as rows.
    pub fn kernel_basis(&self) -> Matrix {
        let ctx = &self.ctx;
        let (r, pivots) = self.rref();
        let mut rows = Vec::new();
        let piv_of_col: Vec<Option<usize>> = {
            let mut v = vec![None; self.cols];
            for (i, &c) in pivots.iter().enumerate() {
                v[c] = Some(i);
            }
            v
        };
        for free in 0..self.cols {
            if piv_of_col[free].is_some() {
                continue;
            }
            let mut x = vec![ctx.zero(); self.cols];
            x[free] = ctx.one();
            for (&pc, i) in pivots.iter().zip(0..) {
                x[pc] = ctx.neg(&r[(i, free)]);
            }
            rows.push(x);
        }
        if rows.is_empty() {
            Matrix::zeros(ctx, 0, self.cols)
        } else {
            Matrix::from_rows(ctx, rows)
        }
    }

    pub fn inverse(&self) -> Result<Matrix, Error> {
        if self.rows != self.cols {
            return Err(Error::Dim("inverse of non-square matrix".into()));
        }
        let n = self.rows;
        let ctx = &self.ctx;
        let mut aug = Matrix::zeros(ctx, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n + i)] = ctx.one();
        }
        let (r, pivots) = aug.rref();
        if pivots.len() != n || pivots.iter().enumerate().any(|(i, &c)| c != i) {
            return Err(Error::Invalid("matrix is singular".into()));
        }
        let mut out = Matrix::zeros(ctx, n, n);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = r[(i, n + j)].clone();
            }
        }
        Ok(out)
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }

    pub fn vstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols);
        let mut rows = self.rows_vec();
        rows.extend(other.rows_vec());
        if rows.is_empty() {
            Matrix::zeros(&self.ctx, 0, self.cols)
        } else {
            Matrix::from_rows(&self.ctx, rows)
        }
    }

    /// Block-diagonal sum.
    pub fn direct_sum(&self, other: &Matrix) -> Matrix {
        let ctx = &self.ctx;
        let mut out = Matrix::zeros(ctx, self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = self[(i, j)].clone();
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                out[(self.rows + i, self.cols + j)] = other[(i, j)].clone();
            }
        }
        out
    }
}

// ---- vector helpers ----

pub fn vec_zero(ctx: &Ctx, n: usize) -> Vector {
    vec![ctx.zero(); n]
}

pub fn vec_add(ctx: &Ctx, a: &[FieldElem], b: &[FieldElem]) -> Vector {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| ctx.add(x, y)).collect()
}

pub fn vec_sub(ctx: &Ctx, a: &[FieldElem], b: &[FieldElem]) -> Vector {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| ctx.sub(x, y)).collect()
}

pub fn vec_scale(ctx: &Ctx, c: &FieldElem, a: &[FieldElem]) -> Vector {
    a.iter().map(|x| ctx.mul(c, x)).collect()
}

pub fn vec_sigma(ctx: &Ctx, a: &[FieldElem], e: i64) -> Vector {
    a.iter().map(|x| ctx.sigma_pow(x, e)).collect()
}

pub fn vec_is_zero(ctx: &Ctx, a: &[FieldElem]) -> bool {
    a.iter().all(|x| ctx.is_zero(x))
}

/// Solve A·x = b (column-vector equation). Returns any solution.
pub fn solve_right(a: &Matrix, b: &[FieldElem]) -> Option<Vector> {
    assert_eq!(a.rows, b.len());
    let ctx = &a.ctx;
    let mut aug = Matrix::zeros(ctx, a.rows, a.cols + 1);
    for i in 0..a.rows {
        for j in 0..a.cols {
            aug[(i, j)] = a[(i, j)].clone();
        }
        aug[(i, a.cols)] = b[i].clone();
    }
    let (r, pivots) = aug.rref();
    if pivots.contains(&a.cols) {
        return None; // inconsistent
    }
    let mut x = vec![ctx.zero(); a.cols];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = r[(i, a.cols)].clone();
    }
    Some(x)
}

/// A subspace of K^n, canonically an RREF basis with no zero rows.
#[derive(Clone, PartialEq, Eq)]
pub struct Subspace {
    pub ambient: usize,
    basis: Matrix,
}

impl std::fmt::Debug for Subspace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Subspace(dim {} of K^{}) {:?}", self.dim(), self.ambient, self.basis)
    }
}

impl Subspace {
    pub fn zero(ctx: &Ctx, ambient: usize) -> Subspace {
        Subspace {
            ambient,
            basis: Matrix::zeros(ctx, 0, ambient),
        }
    }

    pub fn full(ctx: &Ctx, ambient: usize) -> Subspace {
        Subspace {
            ambient,
            basis: Matrix::identity(ctx, ambient),
        }
    }

    pub fn from_matrix(m: &Matrix) -> Subspace {
        let (r, pivots) = m.rref();
        let basis = if pivots.is_empty() {
            Matrix::zeros(&m.ctx, 0, m.cols)
        } else {
            Matrix::from_rows(&m.ctx, (0..pivots.len()).map(|i| r.row(i)).collect())
        };
        Subspace {
            ambient: m.cols,
            basis,
        }
    }

    pub fn span(ctx: &Ctx, vectors: Vec<Vector>) -> Subspace {
        if vectors.is_empty() {
            panic!("span of no vectors needs an explicit ambient; use Subspace::zero");
        }
        Subspace::from_matrix(&Matrix::from_rows(ctx, vectors))
    }

    pub fn ctx(&self) -> &Ctx {
        &self.basis.ctx
    }

    pub fn dim(&self) -> usize {
        self.basis.rows
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn basis_rows(&self) -> Vec<Vector> {
        self.basis.rows_vec()
    }

    pub fn pivots(&self) -> Vec<usize> {
        // pivots of an RREF basis: first nonzero entry per row
        let ctx = self.ctx();
        (0..self.basis.rows)
            .map(|i| (0..self.ambient).find(|&j| !ctx.is_zero(&self.basis[(i, j)])).unwrap())
            .collect()
    }

    pub fn contains_vec(&self, v: &[FieldElem]) -> bool {
        self.coords(v).is_some()
    }

    /// Coordinates of v in the RREF basis, if v lies in the subspace.
    pub fn coords(&self, v: &[FieldElem]) -> Option<Vector> {
        assert_eq!(v.len(), self.ambient);
        let ctx = self.ctx();
        let pivots = self.pivots();
        let coeffs: Vector = pivots.iter().map(|&c| v[c].clone()).collect();
        // residual check
        let mut rest = v.to_vec();
        for (i, coef) in coeffs.iter().enumerate() {
            if ctx.is_zero(coef) {
                continue;
            }
            let row = self.basis.row(i);
            rest = vec_sub(ctx, &rest, &vec_scale(ctx, coef, &row));
        }
        vec_is_zero(ctx, &rest).then_some(coeffs)
    }

    pub fn contains(&self, other: &Subspace) -> bool {
        assert_eq!(self.ambient, other.ambient);
        other.basis_rows().iter().all(|r| self.contains_vec(r))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient, "ambient dimension mismatch");
        Subspace::from_matrix(&self.basis.vstack(&other.basis))
    }

    /// Zassenhaus-style intersection: row reduce [A|A; B|0] and read the
    /// right blocks of rows whose left block vanished.
    pub fn intersect(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient, "ambient dimension mismatch");
        let ctx = self.ctx();
        let n = self.ambient;
        let mut rows = Vec::new();
        for r in self.basis_rows() {
            let mut row = r.clone();
            row.extend(r);
            rows.push(row);
        }
        for r in other.basis_rows() {
            let mut row = r;
            row.extend(vec_zero(ctx, n));
            rows.push(row);
        }
        if rows.is_empty() {
            return Subspace::zero(ctx, n);
        }
        let (red, _) = Matrix::from_rows(ctx, rows).rref();
        let mut inter = Vec::new();
        for i in 0..red.rows {
            let left = &red.row(i)[..n];
            if vec_is_zero(ctx, left) {
                let right = red.row(i)[n..].to_vec();
                if !vec_is_zero(ctx, &right) {
                    inter.push(right);
                }
            }
        }
        if inter.is_empty() {
            Subspace::zero(ctx, n)
        } else {
            Subspace::span(ctx, inter)
        }
    }

    /// Deterministic complement representatives of `small` inside `self`:
    /// the basis rows of `self` whose coordinate (in `self`'s basis) is not
    /// a pivot of `small` expressed in those coordinates. The returned
    /// vectors are a section of the quotient map self → self/small.
    pub fn section(&self, small: &Subspace) -> Vec<Vector> {
        assert_eq!(self.ambient, small.ambient);
        assert!(self.contains(small), "section requires small ⊆ big");
        let ctx = self.ctx();
        if small.dim() == 0 {
            return self.basis_rows();
        }
        let coord_rows: Vec<Vector> = small
            .basis_rows()
            .iter()
            .map(|r| self.coords(r).expect("small ⊆ big"))
            .collect();
        let (_, pivots) = Matrix::from_rows(ctx, coord_rows).rref();
        (0..self.dim())
            .filter(|i| !pivots.contains(i))
            .map(|i| self.basis.row(i))
            .collect()
    }

    /// Coset representatives for self/small (same vectors as [`section`]).
    pub fn quotient_basis(&self, small: &Subspace) -> Vec<Vector> {
        self.section(small)
    }

    /// The complement of `small` in `self` spanned by the section vectors.
    pub fn complement_in(&self, small: &Subspace) -> Subspace {
        let ctx = self.ctx().clone();
        let vs = self.section(small);
        if vs.is_empty() {
            Subspace::zero(&ctx, self.ambient)
        } else {
            Subspace::span(&ctx, vs)
        }
    }

    /// Entrywise σ^e of every element; a subspace again since σ is an
    /// automorphism, and RREF shape is preserved (pivot entries are 1).
    pub fn sigma(&self, e: i64) -> Subspace {
        Subspace {
            ambient: self.ambient,
            basis: self.basis.sigma(e),
        }
    }

    /// Rows c with B·c = 0 for every basis row B — linear functionals
    /// vanishing exactly on this subspace.
    pub fn annihilator_matrix(&self) -> Matrix {
        if self.dim() == 0 {
            return Matrix::identity(self.ctx(), self.ambient);
        }
        self.basis.kernel_basis()
    }
}

/// {A·σᵗ(x) : x ∈ s}.
pub fn map_image(a: &Matrix, s: &Subspace, twist: i64) -> Subspace {
    assert_eq!(a.cols, s.ambient, "map/subspace dimension mismatch");
    let ctx = &a.ctx;
    let rows: Vec<Vector> = s
        .basis_rows()
        .iter()
        .map(|r| a.mul_vec(&vec_sigma(ctx, r, twist)))
        .collect();
    if rows.is_empty() {
        Subspace::zero(ctx, a.rows)
    } else {
        Subspace::span(ctx, rows)
    }
}

/// {x : A·σᵗ(x) ∈ s}.
pub fn map_preimage(a: &Matrix, s: &Subspace, twist: i64) -> Subspace {
    assert_eq!(a.rows, s.ambient, "map/subspace dimension mismatch");
    let ctx = &a.ctx;
    // Linear preimage of s under A is ker(C·A) where rows of C cut out s;
    // then untwist: x ↦ A σᵗ(x) lands in s iff σᵗ(x) is in that kernel.
    let c = s.annihilator_matrix();
    let ker = c.mul(a).kernel_basis();
    if ker.rows == 0 {
        Subspace::zero(ctx, a.cols)
    } else {
        Subspace::from_matrix(&ker).sigma(-twist)
    }
}
