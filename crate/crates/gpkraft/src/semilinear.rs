//! σ-linear relations on K^n and their calculus.
//!
//! A σᵉ-linear relation B is an additive subgroup of K^n ⊕ K^n closed under
//! (x, y) ↦ (λx, σᵉ(λ)y). We store it *untwisted*: the set
//! {(x, σ^{−e}(y)) : (x, y) ∈ B} is an ordinary K-subspace of K^{2n}, kept
//! in RREF. All relation operations then reduce to subspace lattice work,
//! with entrywise Galois action shuttling between the two pictures. The
//! twist e is bookkept separately: it adds under composition and negates
//! under converse.

use crate::field::{Ctx, FieldElem};
use crate::linalg::{
    solve_right, vec_is_zero, vec_sigma, vec_sub, vec_zero, Matrix, Subspace, Vector,
};
use crate::Error;

/// x ↦ matrix · σᵗ(x), entrywise σ.
#[derive(Clone, Debug, PartialEq)]
pub struct SemilinearMap {
    pub matrix: Matrix,
    pub twist: i64,
}

impl SemilinearMap {
    pub fn new(matrix: Matrix, twist: i64) -> SemilinearMap {
        SemilinearMap { matrix, twist }
    }

    pub fn identity(ctx: &Ctx, n: usize) -> SemilinearMap {
        SemilinearMap::new(Matrix::identity(ctx, n), 0)
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows
    }

    pub fn apply(&self, v: &[FieldElem]) -> Vector {
        self.matrix.mul_vec(&vec_sigma(&self.matrix.ctx, v, self.twist))
    }

    /// self ∘ other: A σᵃ (B σᵇ x) = (A·σᵃ(B)) σ^{a+b}(x).
    pub fn compose(&self, other: &SemilinearMap) -> SemilinearMap {
        SemilinearMap::new(
            self.matrix.mul(&other.matrix.sigma(self.twist)),
            self.twist + other.twist,
        )
    }

    pub fn inverse(&self) -> Result<SemilinearMap, Error> {
        Ok(SemilinearMap::new(
            self.matrix.inverse()?.sigma(-self.twist),
            -self.twist,
        ))
    }

    /// self composed with itself k ≥ 0 times (k = 0 gives the identity).
    pub fn pow(&self, k: u32) -> SemilinearMap {
        let mut acc = SemilinearMap::identity(&self.matrix.ctx, self.dim());
        for _ in 0..k {
            acc = self.compose(&acc);
        }
        acc
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct SigmaRelation {
    pub ambient: usize,
    pub twist: i64,
    /// Subspace of K^{2n}: {(x, σ^{−twist}(y)) : (x, y) ∈ B}.
    stored: Subspace,
}

impl std::fmt::Debug for SigmaRelation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "SigmaRelation(n={}, twist={}, dim={}) {:?}",
            self.ambient,
            self.twist,
            self.stored.dim(),
            self.stored
        )
    }
}

fn split(v: &[FieldElem], n: usize) -> (Vector, Vector) {
    (v[..n].to_vec(), v[n..].to_vec())
}

fn join(x: &[FieldElem], y: &[FieldElem]) -> Vector {
    let mut v = x.to_vec();
    v.extend_from_slice(y);
    v
}

impl SigmaRelation {
    pub fn ctx(&self) -> &Ctx {
        self.stored.ctx()
    }

    pub fn stored_space(&self) -> &Subspace {
        &self.stored
    }

    fn from_stored(ambient: usize, twist: i64, stored: Subspace) -> SigmaRelation {
        assert_eq!(stored.ambient, 2 * ambient);
        SigmaRelation {
            ambient,
            twist,
            stored,
        }
    }

    /// Relation generated by twisted pairs (x, y): twisted-scaling closure
    /// equals the K-span of the untwisted rows (x, σ^{−e}(y)).
    pub fn from_generators(
        ctx: &Ctx,
        ambient: usize,
        twist: i64,
        pairs: &[(Vector, Vector)],
    ) -> SigmaRelation {
        let rows: Vec<Vector> = pairs
            .iter()
            .map(|(x, y)| {
                assert_eq!(x.len(), ambient);
                assert_eq!(y.len(), ambient);
                join(x, &vec_sigma(ctx, y, -twist))
            })
            .collect();
        let stored = if rows.is_empty() {
            Subspace::zero(ctx, 2 * ambient)
        } else {
            Subspace::span(ctx, rows)
        };
        SigmaRelation::from_stored(ambient, twist, stored)
    }

    pub fn graph_of(f: &SemilinearMap) -> SigmaRelation {
        let ctx = &f.matrix.ctx;
        let n = f.dim();
        assert_eq!(f.matrix.cols, n, "graph of non-endomorphism");
        // row i = (e_i, σ^{−e}(A)·e_i); σ^{−e}(A σᵉ e_i) = σ^{−e}(A) e_i
        let a_untw = f.matrix.sigma(-f.twist);
        let rows: Vec<Vector> = (0..n)
            .map(|i| {
                let mut e = vec_zero(ctx, n);
                e[i] = ctx.one();
                join(&e, &a_untw.col(i))
            })
            .collect();
        let stored = if rows.is_empty() {
            Subspace::zero(ctx, 0)
        } else {
            Subspace::span(ctx, rows)
        };
        SigmaRelation::from_stored(n, f.twist, stored)
    }

    pub fn one(ctx: &Ctx, n: usize) -> SigmaRelation {
        SigmaRelation::graph_of(&SemilinearMap::identity(ctx, n))
    }

    pub fn zero_rel(ctx: &Ctx, n: usize) -> SigmaRelation {
        SigmaRelation::from_stored(n, 0, Subspace::zero(ctx, 2 * n))
    }

    /// θ_N = N ⊕ {0}: relates every element of N to 0 and nothing else.
    pub fn theta(n_sub: &Subspace) -> SigmaRelation {
        let ctx = n_sub.ctx().clone();
        let n = n_sub.ambient;
        let rows: Vec<Vector> = n_sub
            .basis_rows()
            .iter()
            .map(|r| join(r, &vec_zero(&ctx, n)))
            .collect();
        let stored = if rows.is_empty() {
            Subspace::zero(&ctx, 2 * n)
        } else {
            Subspace::span(&ctx, rows)
        };
        SigmaRelation::from_stored(n, 0, stored)
    }

    pub fn contains_pair(&self, x: &[FieldElem], y: &[FieldElem]) -> bool {
        let v = join(x, &vec_sigma(self.ctx(), y, -self.twist));
        self.stored.contains_vec(&v)
    }

    pub fn is_sub_relation(&self, other: &SigmaRelation) -> bool {
        self.ambient == other.ambient
            && self.twist == other.twist
            && other.stored.contains(&self.stored)
    }

    /// Generators as twisted (user-facing) pairs.
    pub fn generators(&self) -> Vec<(Vector, Vector)> {
        let n = self.ambient;
        self.stored
            .basis_rows()
            .into_iter()
            .map(|r| {
                let (x, yu) = split(&r, n);
                (x, vec_sigma(self.ctx(), &yu, self.twist))
            })
            .collect()
    }

    /// (x, z) ∈ B₂B₁ ⟺ ∃y: (x, y) ∈ B₁ ∧ (y, z) ∈ B₂. Twists add.
    pub fn compose(b2: &SigmaRelation, b1: &SigmaRelation) -> SigmaRelation {
        assert_eq!(b2.ambient, b1.ambient, "relation ambient mismatch");
        let ctx = b1.ctx().clone();
        let n = b1.ambient;
        let (e1, e2) = (b1.twist, b2.twist);
        // Coordinates (x, u, v) with u = σ^{−e1}(y), v = σ^{−e1−e2}(z).
        // (x, y) ∈ B₁  ⟺  (x, u) ∈ stored(B₁);
        // (y, z) ∈ B₂  ⟺  (u, v) ∈ σ^{−e1}(stored(B₂)) entrywise.
        let mut rows1: Vec<Vector> = b1
            .stored
            .basis_rows()
            .into_iter()
            .map(|r| join(&r, &vec_zero(&ctx, n)))
            .collect();
        for i in 0..n {
            let mut v = vec_zero(&ctx, 3 * n);
            v[2 * n + i] = ctx.one();
            rows1.push(v);
        }
        let s1 = Subspace::span(&ctx, rows1);

        let u2 = b2.stored.sigma(-e1);
        let mut rows2: Vec<Vector> = u2
            .basis_rows()
            .into_iter()
            .map(|r| join(&vec_zero(&ctx, n), &r))
            .collect();
        for i in 0..n {
            let mut v = vec_zero(&ctx, 3 * n);
            v[i] = ctx.one();
            rows2.push(v);
        }
        let s2 = Subspace::span(&ctx, rows2);

        let triples = s1.intersect(&s2);
        // project out the middle block
        let proj: Vec<Vector> = triples
            .basis_rows()
            .into_iter()
            .map(|r| join(&r[..n], &r[2 * n..]))
            .collect();
        let stored = if proj.is_empty() {
            Subspace::zero(&ctx, 2 * n)
        } else {
            Subspace::span(&ctx, proj)
        };
        SigmaRelation::from_stored(n, e1 + e2, stored)
    }

    /// (y, x) ∈ B# ⟺ (x, y) ∈ B. Twist negates.
    pub fn converse(&self) -> SigmaRelation {
        let ctx = self.ctx().clone();
        let n = self.ambient;
        // stored(B#) = σᵉ(swap(stored(B))): with a = σ^{−e}(y), the pair
        // (y, σᵉ(x)) equals σᵉ applied to (a, x).
        let rows: Vec<Vector> = self
            .stored
            .basis_rows()
            .into_iter()
            .map(|r| {
                let (x, a) = split(&r, n);
                vec_sigma(&ctx, &join(&a, &x), self.twist)
            })
            .collect();
        let stored = if rows.is_empty() {
            Subspace::zero(&ctx, 2 * n)
        } else {
            Subspace::span(&ctx, rows)
        };
        SigmaRelation::from_stored(n, -self.twist, stored)
    }

    fn proj_block(&self, which: usize) -> Subspace {
        let ctx = self.ctx().clone();
        let n = self.ambient;
        let rows: Vec<Vector> = self
            .stored
            .basis_rows()
            .into_iter()
            .map(|r| r[which * n..(which + 1) * n].to_vec())
            .filter(|r| !vec_is_zero(&ctx, r))
            .collect();
        if rows.is_empty() {
            Subspace::zero(&ctx, n)
        } else {
            Subspace::span(&ctx, rows)
        }
    }

    fn block_embed(ctx: &Ctx, s: &Subspace, which: usize, n: usize) -> Subspace {
        let rows: Vec<Vector> = s
            .basis_rows()
            .into_iter()
            .map(|r| {
                if which == 0 {
                    join(&r, &vec_zero(ctx, n))
                } else {
                    join(&vec_zero(ctx, n), &r)
                }
            })
            .collect();
        if rows.is_empty() {
            Subspace::zero(ctx, 2 * n)
        } else {
            Subspace::span(ctx, rows)
        }
    }

    pub fn dom(&self) -> Subspace {
        self.proj_block(0)
    }

    pub fn ker(&self) -> Subspace {
        let ctx = self.ctx().clone();
        let n = self.ambient;
        let first = Self::block_embed(&ctx, &Subspace::full(&ctx, n), 0, n);
        let inter = self.stored.intersect(&first);
        let rows: Vec<Vector> = inter
            .basis_rows()
            .into_iter()
            .map(|r| r[..n].to_vec())
            .collect();
        if rows.is_empty() {
            Subspace::zero(&ctx, n)
        } else {
            Subspace::span(&ctx, rows)
        }
    }

    pub fn im(&self) -> Subspace {
        self.proj_block(1).sigma(self.twist)
    }

    pub fn indet(&self) -> Subspace {
        let ctx = self.ctx().clone();
        let n = self.ambient;
        let second = Self::block_embed(&ctx, &Subspace::full(&ctx, n), 1, n);
        let inter = self.stored.intersect(&second);
        let rows: Vec<Vector> = inter
            .basis_rows()
            .into_iter()
            .map(|r| r[n..].to_vec())
            .collect();
        if rows.is_empty() {
            Subspace::zero(&ctx, n)
        } else {
            Subspace::span(&ctx, rows).sigma(self.twist)
        }
    }

    /// (Dom, Ker, Im, Indet).
    pub fn parts(&self) -> (Subspace, Subspace, Subspace, Subspace) {
        (self.dom(), self.ker(), self.im(), self.indet())
    }

    /// Ker = Dom: the relation carries no information beyond its domain.
    pub fn is_null(&self) -> bool {
        self.ker() == self.dom()
    }

    /// B(N) = {y : ∃x ∈ N, (x, y) ∈ B}.
    pub fn image_of(&self, n_sub: &Subspace) -> Subspace {
        assert_eq!(n_sub.ambient, self.ambient);
        let ctx = self.ctx().clone();
        let n = self.ambient;
        let inter = self
            .stored
            .intersect(&Self::block_embed(&ctx, n_sub, 0, n).sum(&Self::block_embed(
                &ctx,
                &Subspace::full(&ctx, n),
                1,
                n,
            )));
        let rows: Vec<Vector> = inter
            .basis_rows()
            .into_iter()
            .map(|r| r[n..].to_vec())
            .filter(|r| !vec_is_zero(&ctx, r))
            .collect();
        if rows.is_empty() {
            Subspace::zero(&ctx, n)
        } else {
            Subspace::span(&ctx, rows).sigma(self.twist)
        }
    }

    /// B⁻¹(N) = {x : ∃y ∈ N, (x, y) ∈ B}.
    pub fn preimage_of(&self, n_sub: &Subspace) -> Subspace {
        assert_eq!(n_sub.ambient, self.ambient);
        let ctx = self.ctx().clone();
        let n = self.ambient;
        let target = n_sub.sigma(-self.twist);
        let inter = self
            .stored
            .intersect(&Self::block_embed(&ctx, &Subspace::full(&ctx, n), 0, n).sum(
                &Self::block_embed(&ctx, &target, 1, n),
            ));
        let rows: Vec<Vector> = inter
            .basis_rows()
            .into_iter()
            .map(|r| r[..n].to_vec())
            .filter(|r| !vec_is_zero(&ctx, r))
            .collect();
        if rows.is_empty() {
            Subspace::zero(&ctx, n)
        } else {
            Subspace::span(&ctx, rows)
        }
    }

    /// B ∩ (N ⊕ N), still a relation on the full ambient space.
    pub fn restrict(&self, n_sub: &Subspace) -> SigmaRelation {
        assert_eq!(n_sub.ambient, self.ambient);
        let ctx = self.ctx().clone();
        let n = self.ambient;
        let window = Self::block_embed(&ctx, n_sub, 0, n)
            .sum(&Self::block_embed(&ctx, &n_sub.sigma(-self.twist), 1, n));
        SigmaRelation::from_stored(n, self.twist, self.stored.intersect(&window))
    }

    /// Block direct sum on K^{n₁+n₂}; twists must agree.
    pub fn direct_sum(b1: &SigmaRelation, b2: &SigmaRelation) -> SigmaRelation {
        assert_eq!(b1.twist, b2.twist, "direct sum of unequal twists");
        let ctx = b1.ctx().clone();
        let (n1, n2) = (b1.ambient, b2.ambient);
        let n = n1 + n2;
        let mut rows: Vec<Vector> = Vec::new();
        for r in b1.stored.basis_rows() {
            let (x, y) = split(&r, n1);
            let mut v = x;
            v.extend(vec_zero(&ctx, n2));
            v.extend(y);
            v.extend(vec_zero(&ctx, n2));
            rows.push(v);
        }
        for r in b2.stored.basis_rows() {
            let (x, y) = split(&r, n2);
            let mut v = vec_zero(&ctx, n1);
            v.extend(x);
            v.extend(vec_zero(&ctx, n1));
            v.extend(y);
            rows.push(v);
        }
        let stored = if rows.is_empty() {
            Subspace::zero(&ctx, 2 * n)
        } else {
            Subspace::span(&ctx, rows)
        };
        SigmaRelation::from_stored(n, b1.twist, stored)
    }

    /// One image vector of x, if x ∈ Dom(B).
    pub fn image_vector(&self, x: &[FieldElem]) -> Option<Vector> {
        self.image_vector_in(x, &Subspace::full(self.ctx(), self.ambient))
    }

    /// Some y with (x, y) ∈ B and y ∈ w, if one exists.
    pub fn image_vector_in(&self, x: &[FieldElem], w: &Subspace) -> Option<Vector> {
        let ctx = self.ctx().clone();
        let n = self.ambient;
        let basis = self.stored.basis_rows();
        let r = basis.len();
        // unknown coefficient vector c over stored basis rows:
        //   Σ c_i (first block of row i) = x,
        //   annihilator(σ^{−e} w) · Σ c_i (second block of row i) = 0.
        let wu = w.sigma(-self.twist);
        let ann = wu.annihilator_matrix();
        let mut sys_rows: Vec<Vector> = Vec::new();
        let mut rhs: Vector = Vec::new();
        for j in 0..n {
            sys_rows.push((0..r).map(|i| basis[i][j].clone()).collect());
            rhs.push(x[j].clone());
        }
        for a in 0..ann.rows {
            sys_rows.push(
                (0..r)
                    .map(|i| {
                        let mut acc = ctx.zero();
                        for j in 0..n {
                            acc = ctx.add(&acc, &ctx.mul(&ann[(a, j)], &basis[i][n + j]));
                        }
                        acc
                    })
                    .collect(),
            );
            rhs.push(ctx.zero());
        }
        let sys = Matrix::from_rows(&ctx, sys_rows);
        let c = solve_right(&sys, &rhs)?;
        let mut y_untw = vec_zero(&ctx, n);
        for (i, ci) in c.iter().enumerate() {
            for j in 0..n {
                let t = ctx.mul(ci, &basis[i][n + j]);
                y_untw[j] = ctx.add(&y_untw[j], &t);
            }
        }
        Some(vec_sigma(&ctx, &y_untw, self.twist))
    }

    /// The four canonical relations on K^n, twist 1.
    pub fn canonical(ctx: &Ctx, kind: CanonicalKind, n: usize) -> Result<SigmaRelation, Error> {
        if n == 0 {
            return Err(Error::Invalid("canonical relation needs n ≥ 1".into()));
        }
        let e = |i: usize| {
            let mut v = vec_zero(ctx, n);
            v[i] = ctx.one();
            v
        };
        let mut pairs: Vec<(Vector, Vector)> =
            (0..n - 1).map(|i| (e(i), e(i + 1))).collect();
        use CanonicalKind::*;
        if matches!(kind, TPlus | PlusTPlus) {
            pairs.push((e(n - 1), vec_zero(ctx, n)));
        }
        if matches!(kind, PlusT | PlusTPlus) {
            pairs.push((vec_zero(ctx, n), e(0)));
        }
        Ok(SigmaRelation::from_generators(ctx, n, 1, &pairs))
    }

    /// (Dom∞, Ker∞, Im∞, Indet∞), by fixed-point iteration of the
    /// one-step identities
    ///   Dom(Bᵐ⁺¹)  = B⁻¹(Dom(Bᵐ)),   Ker(Bᵐ⁺¹)   = B⁻¹(Ker(Bᵐ)),
    ///   Im(Bᵐ⁺¹)   = B(Im(Bᵐ)),      Indet(Bᵐ⁺¹) = B(Indet(Bᵐ)).
    /// Each chain is monotone, so a stall is a fixed point; the chains live
    /// in K^n and stabilize within ambient+1 steps (asserted).
    pub fn stable_parts(&self) -> (Subspace, Subspace, Subspace, Subspace) {
        let step_pre = |x: &Subspace| self.preimage_of(x);
        let step_im = |x: &Subspace| self.image_of(x);
        let run = |init: Subspace, ascending: bool, f: &dyn Fn(&Subspace) -> Subspace| {
            let mut cur = init;
            for _ in 0..=self.ambient {
                let next = f(&cur);
                if ascending {
                    assert!(next.contains(&cur), "stable chain not monotone");
                } else {
                    assert!(cur.contains(&next), "stable chain not monotone");
                }
                if next == cur {
                    return cur;
                }
                cur = next;
            }
            // a strictly monotone chain in K^n has length ≤ n+1
            let fixed = f(&cur);
            assert!(fixed == cur, "stable chain failed to stabilize");
            cur
        };
        let dom = run(self.dom(), false, &step_pre);
        let ker = run(self.ker(), true, &step_pre);
        let im = run(self.im(), false, &step_im);
        let indet = run(self.indet(), true, &step_im);
        (dom, ker, im, indet)
    }

    /// Ascending kernel chain Ker(B¹) ⊆ Ker(B²) ⊆ … up to Ker∞ (last
    /// element repeated exactly once removed). Empty when Ker(B) = Ker∞ = 0.
    pub fn kernel_chain(&self) -> Vec<Subspace> {
        let mut chain = vec![self.ker()];
        loop {
            let next = self.preimage_of(chain.last().unwrap());
            if &next == chain.last().unwrap() {
                break;
            }
            assert!(next.contains(chain.last().unwrap()));
            chain.push(next);
            assert!(chain.len() <= self.ambient + 1, "kernel chain too long");
        }
        if chain.len() == 1 && chain[0].dim() == 0 {
            return vec![];
        }
        chain
    }

    /// Test oracle for the stable kernel/indeterminacy proposition:
    /// Dom∞ ∩ Indet(B) ⊆ Ker∞ and Im∞ ∩ Ker(B) ⊆ Indet∞.
    pub fn stable_kernel_indet_check(&self) -> bool {
        let (dom_s, ker_s, im_s, indet_s) = self.stable_parts();
        dom_s.intersect(&self.indet()).dim() <= dom_s.intersect(&self.indet()).intersect(&ker_s).dim()
            && ker_s.contains(&dom_s.intersect(&self.indet()))
            && indet_s.contains(&im_s.intersect(&self.ker()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CanonicalKind {
    /// Generated by (e_i, e_{i+1}).
    T,
    /// T plus (e_n, 0).
    TPlus,
    /// T plus (0, e_1).
    PlusT,
    /// T plus both.
    PlusTPlus,
}

/// Result of the weak decomposition of a relation B on M = K^n:
/// Dom(B∞) = S ⊕ Ker(B∞), M' = Dom(B∞) + Im(B∞) = S ⊕ N with
/// N = Ker(B∞) + Indet(B∞), and B|S is the graph of the σᵉ-linear
/// automorphism T expressed in the recorded basis of S.
#[derive(Clone, Debug)]
pub struct WeakDecomposition {
    pub s: Subspace,
    /// Rows are the chosen basis vectors s_1..s_d of S (not RREF).
    pub s_basis: Matrix,
    /// T as a d×d matrix in the s_basis coordinates, twist = B's twist.
    pub t: SemilinearMap,
    pub n: Subspace,
}

/// Constructive weak decomposition, following the proof:
/// (1) the induced automorphism T̄ on Dom∞/Ker∞, (2) correction maps δ_j
/// built from kernel chains and a fixed linear section, (3) S = (ι+f)(…).
pub fn weak_decomposition(b: &SigmaRelation) -> Result<WeakDecomposition, Error> {
    let ctx = b.ctx().clone();
    let n = b.ambient;
    let e = b.twist;
    let (dom_s, ker_s, im_s, indet_s) = b.stable_parts();

    // hypothesis: B(Dom∞) ⊆ Dom∞ + Indet(B)
    let hull = dom_s.sum(&b.indet());
    let image = b.image_of(&dom_s);
    if !hull.contains(&image) {
        for r in image.basis_rows() {
            if !hull.contains_vec(&r) {
                return Err(Error::Invalid(format!(
                    "weak decomposition hypothesis B(Dom∞) ⊆ Dom∞ + Indet(B) fails at {r:?}"
                )));
            }
        }
    }

    let n_space = ker_s.sum(&indet_s);
    let reps = dom_s.section(&ker_s); // ι on the quotient basis
    let d = reps.len();

    if d == 0 {
        return Ok(WeakDecomposition {
            s: Subspace::zero(&ctx, n),
            s_basis: Matrix::zeros(&ctx, 0, n),
            t: SemilinearMap::new(Matrix::zeros(&ctx, 0, 0), e),
            n: n_space,
        });
    }

    // Step 1: T̄ on Dom∞/Ker∞ and the Ker∞-components z_i.
    // For each rep r_i pick y with (r_i, y) ∈ B, write y = x₁ + z_ind with
    // x₁ ∈ Dom∞, z_ind ∈ Indet(B); then x₁ = Σ a_j r_j + k with k ∈ Ker∞.
    // Subtracting (0, z_ind) ∈ B leaves (r_i, Σ a_j r_j + k) ∈ B.
    let dom_basis = dom_s.basis_rows();
    let indet_basis = b.indet().basis_rows();
    let mut tbar_cols: Vec<Vector> = Vec::new(); // quotient coords of T̄(e_i)
    let mut z_vecs: Vec<Vector> = Vec::new(); // z_i ∈ Ker∞
    for r in &reps {
        let y = b
            .image_vector(r)
            .expect("stable-domain element must have an image");
        // y = x1 + z_ind over [Dom∞ basis | Indet basis]
        let mut cols: Vec<Vector> = dom_basis.clone();
        cols.extend(indet_basis.clone());
        let sys = Matrix::from_rows(&ctx, cols).transpose();
        let c = solve_right(&sys, &y).expect("hypothesis places y in Dom∞ + Indet(B)");
        let mut x1 = vec_zero(&ctx, n);
        for (i, ci) in c.iter().take(dom_basis.len()).enumerate() {
            x1 = crate::linalg::vec_add(&ctx, &x1, &crate::linalg::vec_scale(&ctx, ci, &dom_basis[i]));
        }
        // x1 = Σ a_j r_j + k, k ∈ Ker∞
        let mut cols2: Vec<Vector> = reps.clone();
        cols2.extend(ker_s.basis_rows());
        let sys2 = Matrix::from_rows(&ctx, cols2).transpose();
        let c2 = solve_right(&sys2, &x1).expect("x1 lies in Dom∞ = span(reps) + Ker∞");
        let a: Vector = c2[..d].to_vec();
        let mut iota_t = vec_zero(&ctx, n);
        for (j, aj) in a.iter().enumerate() {
            iota_t = crate::linalg::vec_add(&ctx, &iota_t, &crate::linalg::vec_scale(&ctx, aj, &reps[j]));
        }
        let z = vec_sub(&ctx, &x1, &iota_t);
        debug_assert!(ker_s.contains_vec(&z));
        tbar_cols.push(a);
        z_vecs.push(z);
    }
    let mut tbar = Matrix::zeros(&ctx, d, d);
    for (i, col) in tbar_cols.iter().enumerate() {
        for j in 0..d {
            tbar[(j, i)] = col[j].clone();
        }
    }
    let tbar_op = SemilinearMap::new(tbar, e);
    let tbar_inv = tbar_op
        .inverse()
        .map_err(|_| Error::Invalid("induced map on Dom∞/Ker∞ is not invertible".into()))?;

    // Step 2: kernel chains z_i = c⁰_i → c¹_i → … → 0 with c^j_i ∈ Ker(B^{m−j}),
    // assembled into δ_j (σ^{e(j+1)}-linear), and f = Σ_j δ_j ∘ T̄^{−(j+1)}
    // which is linear (twist 0).
    let kchain = b.kernel_chain(); // K_1 ⊆ … ⊆ K_m = Ker∞
    let m = kchain.len();
    let mut f_mat = Matrix::zeros(&ctx, n, d);
    if m > 0 {
        let mut chains: Vec<Vec<Vector>> = Vec::new(); // chains[i][j] = c^j_i
        for z in &z_vecs {
            let mut chain = vec![z.clone()];
            for j in 1..m {
                let prev = chain.last().unwrap();
                let target = &kchain[m - 1 - j];
                let next = b
                    .image_vector_in(prev, target)
                    .expect("kernel chain step must exist");
                chain.push(next);
            }
            chains.push(chain);
        }
        for j in 0..m {
            // δ_j matrix: column i = c^j_i; twist e(j+1)
            let mut dj = Matrix::zeros(&ctx, n, d);
            for i in 0..d {
                for r in 0..n {
                    dj[(r, i)] = chains[i][j][r].clone();
                }
            }
            let delta_j = SemilinearMap::new(dj, e * (j as i64 + 1));
            let term = delta_j.compose(&tbar_inv.pow(j as u32 + 1));
            assert_eq!(term.twist, 0);
            f_mat = f_mat.add(&term.matrix);
        }
    }

    // Step 3: s_i = ι(e_i) + f(e_i).
    let mut s_rows: Vec<Vector> = Vec::new();
    for (i, r) in reps.iter().enumerate() {
        s_rows.push(crate::linalg::vec_add(&ctx, r, &f_mat.col(i)));
    }
    let s_basis = Matrix::from_rows(&ctx, s_rows.clone());
    let s = Subspace::span(&ctx, s_rows.clone());
    assert_eq!(s.dim(), d, "S basis must stay independent");

    let decomp = WeakDecomposition {
        s,
        s_basis,
        t: tbar_op,
        n: n_space,
    };
    verify_weak_decomposition(b, &decomp, &dom_s, &ker_s, &im_s);
    Ok(decomp)
}

/// Independent membership checks of the weak-decomposition postconditions;
/// these encode the theorem and must hold on every valid input.
fn verify_weak_decomposition(
    b: &SigmaRelation,
    w: &WeakDecomposition,
    dom_s: &Subspace,
    ker_s: &Subspace,
    im_s: &Subspace,
) {
    let ctx = b.ctx().clone();
    let n = b.ambient;
    let d = w.s.dim();
    // Dom∞ = S ⊕ Ker∞
    assert_eq!(w.s.sum(ker_s), *dom_s, "Dom∞ = S + Ker∞ fails");
    assert_eq!(w.s.intersect(ker_s).dim(), 0, "S ∩ Ker∞ ≠ 0");
    // M' = S ⊕ N
    let m_prime = dom_s.sum(im_s);
    assert_eq!(w.s.sum(&w.n), m_prime, "M' = S + N fails");
    assert_eq!(w.s.intersect(&w.n).dim(), 0, "S ∩ N ≠ 0");
    // B|S = Γ_T: graph containment plus dimension equality
    for i in 0..d {
        let si = w.s_basis.row(i);
        // T(s_i) = Σ_k T[k][i] s_k  (coords of basis vectors are σ-fixed)
        let mut tsi = vec_zero(&ctx, n);
        for k in 0..d {
            let term = crate::linalg::vec_scale(&ctx, &w.t.matrix[(k, i)], &w.s_basis.row(k));
            tsi = crate::linalg::vec_add(&ctx, &tsi, &term);
        }
        assert!(b.contains_pair(&si, &tsi), "Γ_T ⊄ B on basis vector {i}");
    }
    let b_s = b.restrict(&w.s);
    assert_eq!(b_s.stored_space().dim(), d, "B|S is larger than Γ_T");
    assert_eq!(b_s.dom(), w.s, "Dom(B|S) ≠ S");
    // B|M' = B|S ⊕ B|N
    let b_n = b.restrict(&w.n);
    let b_mp = b.restrict(&m_prime);
    let sum = b_s.stored_space().sum(b_n.stored_space());
    assert_eq!(sum, *b_mp.stored_space(), "B|M' ≠ B|S + B|N");
    assert_eq!(
        b_s.stored_space().dim() + b_n.stored_space().dim(),
        b_mp.stored_space().dim(),
        "B|S ∩ B|N ≠ 0"
    );
}
