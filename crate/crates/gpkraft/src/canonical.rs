//! Similarity invariants of square matrices over an exact field.
//!
//! Two square matrices over `K` are similar iff `xI − A` and `xI − B` have
//! the same Smith normal form over the polynomial ring `K[x]`. This module
//! provides dense univariate polynomial arithmetic over a [`crate::field::Ctx`]
//! and the resulting invariant-factor list (monic, each dividing the next),
//! which doubles as a rational canonical form.

use crate::field::{Ctx, FieldElem};
use crate::linalg::Matrix;

/// Dense univariate polynomial, little-endian coefficients, no trailing zeros.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    pub coeffs: Vec<FieldElem>,
}

impl std::fmt::Debug for Poly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Poly{:?}", self.coeffs)
    }
}

impl Poly {
    pub fn zero() -> Poly {
        Poly { coeffs: vec![] }
    }

    pub fn constant(ctx: &Ctx, c: FieldElem) -> Poly {
        let mut p = Poly { coeffs: vec![c] };
        p.trim(ctx);
        p
    }

    pub fn one(ctx: &Ctx) -> Poly {
        Poly::constant(ctx, ctx.one())
    }

    pub fn x(ctx: &Ctx) -> Poly {
        Poly {
            coeffs: vec![ctx.zero(), ctx.one()],
        }
    }

    pub fn from_coeffs(ctx: &Ctx, coeffs: Vec<FieldElem>) -> Poly {
        let mut p = Poly { coeffs };
        p.trim(ctx);
        p
    }

    fn trim(&mut self, ctx: &Ctx) {
        while matches!(self.coeffs.last(), Some(c) if ctx.is_zero(c)) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; zero polynomial reports None.
    pub fn deg(&self) -> Option<usize> {
        if self.is_zero() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn lead(&self) -> Option<&FieldElem> {
        self.coeffs.last()
    }

    pub fn add(&self, ctx: &Ctx, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.coeffs.get(i).cloned().unwrap_or_else(|| ctx.zero());
            let b = other.coeffs.get(i).cloned().unwrap_or_else(|| ctx.zero());
            coeffs.push(ctx.add(&a, &b));
        }
        Poly::from_coeffs(ctx, coeffs)
    }

    pub fn neg(&self, ctx: &Ctx) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|c| ctx.neg(c)).collect(),
        }
    }

    pub fn sub(&self, ctx: &Ctx, other: &Poly) -> Poly {
        self.add(ctx, &other.neg(ctx))
    }

    pub fn mul(&self, ctx: &Ctx, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![ctx.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                let t = ctx.mul(a, b);
                coeffs[i + j] = ctx.add(&coeffs[i + j], &t);
            }
        }
        Poly::from_coeffs(ctx, coeffs)
    }

    pub fn scale(&self, ctx: &Ctx, c: &FieldElem) -> Poly {
        Poly::from_coeffs(ctx, self.coeffs.iter().map(|a| ctx.mul(c, a)).collect())
    }

    /// Euclidean division: (quotient, remainder) with deg r < deg divisor.
    pub fn divmod(&self, ctx: &Ctx, divisor: &Poly) -> (Poly, Poly) {
        assert!(!divisor.is_zero(), "division by zero polynomial");
        let dl = divisor.deg().unwrap();
        let inv_lead = ctx.inv(divisor.lead().unwrap()).expect("nonzero lead");
        let mut rem = self.clone();
        let mut quo = vec![ctx.zero(); self.coeffs.len().saturating_sub(dl)];
        while let Some(rl) = rem.deg() {
            if rl < dl {
                break;
            }
            let c = ctx.mul(rem.lead().unwrap(), &inv_lead);
            let shift = rl - dl;
            quo[shift] = ctx.add(&quo[shift], &c);
            // rem -= c x^shift * divisor
            for (i, dcoef) in divisor.coeffs.iter().enumerate() {
                let t = ctx.mul(&c, dcoef);
                rem.coeffs[i + shift] = ctx.sub(&rem.coeffs[i + shift], &t);
            }
            rem.trim(ctx);
        }
        (Poly::from_coeffs(ctx, quo), rem)
    }

    pub fn rem(&self, ctx: &Ctx, divisor: &Poly) -> Poly {
        self.divmod(ctx, divisor).1
    }

    /// Monic scalar multiple (zero stays zero).
    pub fn monic(&self, ctx: &Ctx) -> Poly {
        match self.lead() {
            None => Poly::zero(),
            Some(l) => self.scale(ctx, &ctx.inv(l).unwrap()),
        }
    }

    pub fn gcd(&self, ctx: &Ctx, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(ctx, &b);
            a = b;
            b = r;
        }
        a.monic(ctx)
    }

    pub fn divides(&self, ctx: &Ctx, other: &Poly) -> bool {
        if self.is_zero() {
            return other.is_zero();
        }
        other.rem(ctx, self).is_zero()
    }

    pub fn show(&self, ctx: &Ctx) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut terms = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if ctx.is_zero(c) {
                continue;
            }
            let cs = ctx.show(c);
            terms.push(match i {
                0 => cs,
                1 if cs == "1" => "x".into(),
                1 => format!("{cs}*x"),
                _ if cs == "1" => format!("x^{i}"),
                _ => format!("{cs}*x^{i}"),
            });
        }
        terms.join(" + ")
    }
}

/// Nonconstant invariant factors of `xI − A`, monic, each dividing the next.
/// Their product is the characteristic polynomial; the last is the minimal
/// polynomial. Two matrices are similar iff these lists agree.
pub fn invariant_factors(a: &Matrix) -> Vec<Poly> {
    assert_eq!(a.rows, a.cols, "invariant factors of non-square matrix");
    let ctx = a.ctx.clone();
    let n = a.rows;
    // m = xI − A as an n×n polynomial matrix
    let mut m: Vec<Vec<Poly>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let neg = Poly::constant(&ctx, ctx.neg(&a[(i, j)]));
                    if i == j {
                        Poly::x(&ctx).add(&ctx, &neg)
                    } else {
                        neg
                    }
                })
                .collect()
        })
        .collect();

    let mut diag: Vec<Poly> = Vec::new();
    let mut k = 0;
    while k < n {
        // find a nonzero entry of minimal degree in the trailing submatrix
        let mut pivot: Option<(usize, usize, usize)> = None;
        for i in k..n {
            for j in k..n {
                if let Some(d) = m[i][j].deg() {
                    if pivot.is_none_or(|(_, _, pd)| d < pd) {
                        pivot = Some((i, j, d));
                    }
                }
            }
        }
        let Some((pi, pj, _)) = pivot else {
            break; // trailing submatrix is zero
        };
        m.swap(k, pi);
        for row in m.iter_mut() {
            row.swap(k, pj);
        }
        // clear row and column k by division with remainder, looping until
        // the pivot exactly divides everything it faces
        'reduce: loop {
            for i in k + 1..n {
                if !m[i][k].is_zero() {
                    let (q, _r) = m[i][k].divmod(&ctx, &m[k][k]);
                    for j in k..n {
                        let t = q.mul(&ctx, &m[k][j]);
                        m[i][j] = m[i][j].sub(&ctx, &t);
                    }
                    if !m[i][k].is_zero() {
                        // remainder has smaller degree: swap up and restart
                        m.swap(k, i);
                        continue 'reduce;
                    }
                }
            }
            for j in k + 1..n {
                if !m[k][j].is_zero() {
                    let (q, _r) = m[k][j].divmod(&ctx, &m[k][k]);
                    for i in k..n {
                        let t = q.mul(&ctx, &m[i][k]);
                        m[i][j] = m[i][j].sub(&ctx, &t);
                    }
                    if !m[k][j].is_zero() {
                        for row in m.iter_mut() {
                            row.swap(k, j);
                        }
                        continue 'reduce;
                    }
                }
            }
            // row and column are clear; enforce divisibility of the rest
            for i in k + 1..n {
                for j in k + 1..n {
                    if !m[k][k].divides(&ctx, &m[i][j]) {
                        // add row i to row k and restart the reduction
                        for c in k..n {
                            m[k][c] = m[k][c].add(&ctx, &m[i][c].clone());
                        }
                        continue 'reduce;
                    }
                }
            }
            break;
        }
        diag.push(m[k][k].monic(&ctx));
        k += 1;
    }
    assert_eq!(
        diag.len(),
        n,
        "xI − A has full rank over K[x], so the Smith form has n nonzero entries"
    );
    // sanity: divisibility chain
    for w in diag.windows(2) {
        assert!(w[0].divides(&ctx, &w[1]), "Smith diagonal not a chain");
    }
    diag.retain(|p| p.deg() != Some(0));
    diag
}

/// Similarity test over `K` via invariant factors.
pub fn matrices_similar(a: &Matrix, b: &Matrix) -> bool {
    if a.rows != b.rows {
        return false;
    }
    invariant_factors(a) == invariant_factors(b)
}

/// Characteristic polynomial (monic), as the product of invariant factors.
pub fn char_poly(a: &Matrix) -> Poly {
    let ctx = a.ctx.clone();
    invariant_factors(a)
        .iter()
        .fold(Poly::one(&ctx), |acc, f| acc.mul(&ctx, f))
}

/// Companion matrix of a monic polynomial of degree ≥ 1.
pub fn companion(ctx: &Ctx, p: &Poly) -> Matrix {
    let d = p.deg().expect("companion of zero polynomial");
    assert!(d >= 1);
    assert!(ctx.is_zero(&ctx.sub(p.lead().unwrap(), &ctx.one())), "companion needs monic input");
    let mut m = Matrix::zeros(ctx, d, d);
    for i in 1..d {
        m[(i, i - 1)] = ctx.one();
    }
    for i in 0..d {
        m[(i, d - 1)] = ctx.neg(&p.coeffs[i]);
    }
    m
}

/// x^e mod f by repeated squaring.
pub fn x_pow_mod(ctx: &Ctx, e: u128, f: &Poly) -> Poly {
    assert!(f.deg().unwrap_or(0) >= 1);
    let mut acc = Poly::one(ctx);
    let mut base = Poly::x(ctx).rem(ctx, f);
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc.mul(ctx, &base).rem(ctx, f);
        }
        base = base.mul(ctx, &base).rem(ctx, f);
        e >>= 1;
    }
    acc
}

/// Number of distinct irreducible factors of a nonconstant polynomial over
/// a finite field: the dimension of the Berlekamp subalgebra
/// {g : g^q ≡ g mod f} of K[x]/(f), which equals the factor count also for
/// non-squarefree f (Hensel lifting of the separable equation g^q = g).
/// Returns None over ℚ for degree ≥ 2 (no factorization implemented).
pub fn distinct_irreducible_factors(ctx: &Ctx, f: &Poly) -> Option<usize> {
    let d = f.deg().expect("factor count of zero polynomial");
    assert!(d >= 1);
    if d == 1 {
        return Some(1);
    }
    let q = ctx.size()? as u128;
    // matrix of g ↦ g^q on the basis 1, x, …, x^{d−1}: column i = x^{iq} mod f
    let mut m = Matrix::zeros(ctx, d, d);
    for i in 0..d {
        let col = x_pow_mod(ctx, q * i as u128, f);
        for (r, c) in col.coeffs.iter().enumerate() {
            m[(r, i)] = c.clone();
        }
    }
    let one = ctx.one();
    for i in 0..d {
        m[(i, i)] = ctx.sub(&m[(i, i)], &one);
    }
    Some(d - m.rank())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldCtx;
    use rand::{Rng, SeedableRng};

    fn poly(ctx: &Ctx, cs: &[i64]) -> Poly {
        Poly::from_coeffs(ctx, cs.iter().map(|&c| ctx.from_int(c)).collect())
    }

    #[test]
    fn distinct_factor_counts() {
        let f2 = FieldCtx::gf(2).unwrap();
        // x^2 + x + 1 irreducible over F2
        assert_eq!(distinct_irreducible_factors(&f2, &poly(&f2, &[1, 1, 1])), Some(1));
        // x^2 + x = x(x+1)
        assert_eq!(distinct_irreducible_factors(&f2, &poly(&f2, &[0, 1, 1])), Some(2));
        // (x+1)^2 = x^2 + 1: one distinct factor despite multiplicity
        assert_eq!(distinct_irreducible_factors(&f2, &poly(&f2, &[1, 0, 1])), Some(1));
        // x^2 * (x^2 + x + 1) has two distinct factors
        assert_eq!(
            distinct_irreducible_factors(&f2, &poly(&f2, &[0, 0, 1, 1, 1])),
            Some(2)
        );
        let f3 = FieldCtx::gf(3).unwrap();
        // (x-1)(x-2) over F3
        assert_eq!(distinct_irreducible_factors(&f3, &poly(&f3, &[2, 0, 1])), Some(2));
        // x^2 + 1 irreducible over F3
        assert_eq!(distinct_irreducible_factors(&f3, &poly(&f3, &[1, 0, 1])), Some(1));
        let f9 = FieldCtx::gf(9).unwrap();
        // x^2 + 1 splits over F9
        assert_eq!(distinct_irreducible_factors(&f9, &poly(&f9, &[1, 0, 1])), Some(2));
        let q = FieldCtx::rationals();
        assert_eq!(distinct_irreducible_factors(&q, &poly(&q, &[3, 1])), Some(1));
        assert_eq!(distinct_irreducible_factors(&q, &poly(&q, &[1, 0, 1])), None);
    }

    #[test]
    fn poly_arithmetic() {
        let q = FieldCtx::rationals();
        let a = poly(&q, &[1, 2, 1]); // (x+1)^2
        let b = poly(&q, &[1, 1]);
        let (quo, rem) = a.divmod(&q, &b);
        assert_eq!(quo, b);
        assert!(rem.is_zero());
        assert_eq!(a.gcd(&q, &b), b.monic(&q));
        assert_eq!(b.mul(&q, &b), a);

        let f2 = FieldCtx::prime(2).unwrap();
        let c = poly(&f2, &[1, 1, 1]);
        let d = poly(&f2, &[1, 1]);
        let (_, r) = c.divmod(&f2, &d);
        assert_eq!(r, poly(&f2, &[1])); // x^2+x+1 = (x+1)(x) + 1 over F2? => (x+1)x = x^2+x, rem 1
        assert_eq!(c.gcd(&f2, &d), Poly::one(&f2));
    }

    #[test]
    fn invariant_factors_fixtures() {
        let q = FieldCtx::rationals();
        // identity: x−1 repeated, all invariant factors x−1
        let id = Matrix::identity(&q, 3);
        let inv = invariant_factors(&id);
        assert_eq!(inv.len(), 3);
        for f in &inv {
            assert_eq!(f, &poly(&q, &[-1, 1]));
        }
        // nilpotent Jordan block of size 3: single factor x^3
        let njord = Matrix::from_ints(&q, &[&[0, 1, 0], &[0, 0, 1], &[0, 0, 0]]);
        assert_eq!(invariant_factors(&njord), vec![poly(&q, &[0, 0, 0, 1])]);
        // two nilpotent blocks sizes 1,2: factors x, x^2
        let two = Matrix::from_ints(&q, &[&[0, 0, 0], &[0, 0, 1], &[0, 0, 0]]);
        assert_eq!(
            invariant_factors(&two),
            vec![poly(&q, &[0, 1]), poly(&q, &[0, 0, 1])]
        );
    }

    #[test]
    fn companion_round_trip() {
        let f3 = FieldCtx::prime(3).unwrap();
        let p = poly(&f3, &[2, 0, 1, 1]); // x^3 + x^2 + 2
        let c = companion(&f3, &p);
        assert_eq!(invariant_factors(&c), vec![p.clone()]);
        assert_eq!(char_poly(&c), p);
    }

    #[test]
    fn similarity_invariance_under_conjugation() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(21);
        for q in [2u64, 3, 4, 9] {
            let ctx = FieldCtx::gf(q).unwrap();
            for _ in 0..10 {
                let n = rng.gen_range(1..=4);
                let a = random_matrix(&ctx, n, &mut rng);
                let p = random_invertible(&ctx, n, &mut rng);
                let conj = p.mul(&a).mul(&p.inverse().unwrap());
                assert!(matrices_similar(&a, &conj));
            }
        }
    }

    #[test]
    fn dissimilar_matrices_detected() {
        let f2 = FieldCtx::prime(2).unwrap();
        let a = Matrix::from_ints(&f2, &[&[0, 1], &[0, 0]]); // x^2
        let b = Matrix::zeros(&f2, 2, 2); // x, x
        assert!(!matrices_similar(&a, &b));
        assert!(matrices_similar(&a, &a.transpose()));
    }

    #[test]
    fn char_poly_matches_trace_det_2x2() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(22);
        let f9 = FieldCtx::gf(9).unwrap();
        for _ in 0..20 {
            let a = random_matrix(&f9, 2, &mut rng);
            let p = char_poly(&a);
            // x^2 − tr x + det
            let tr = f9.add(&a[(0, 0)], &a[(1, 1)]);
            let det = f9.sub(
                &f9.mul(&a[(0, 0)], &a[(1, 1)]),
                &f9.mul(&a[(0, 1)], &a[(1, 0)]),
            );
            let expected = Poly::from_coeffs(&f9, vec![det, f9.neg(&tr), f9.one()]);
            assert_eq!(p, expected);
        }
    }

    fn random_matrix(ctx: &Ctx, n: usize, rng: &mut impl Rng) -> Matrix {
        Matrix::from_rows(
            ctx,
            (0..n)
                .map(|_| (0..n).map(|_| ctx.random_elem(rng)).collect())
                .collect(),
        )
    }

    fn random_invertible(ctx: &Ctx, n: usize, rng: &mut impl Rng) -> Matrix {
        loop {
            let m = random_matrix(ctx, n, rng);
            if m.is_invertible() {
                return m;
            }
        }
    }
}
