//! Exact field arithmetic for ℚ, 𝔽_p and 𝔽_{p^k}, together with an explicit
//! automorphism σ (identity, or Frobenius x ↦ x^p) and its powers.
//!
//! Every arithmetic operation goes through a [`FieldCtx`]; elements carry no
//! context themselves, so mixing contexts is the caller's responsibility
//! (matrices and relations check compatibility at their own boundaries).

use crate::Error;
use num::{BigInt, BigRational, One, Signed, Zero};
use rand::Rng;
use std::sync::Arc;

/// Shared handle to a field context.
pub type Ctx = Arc<FieldCtx>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SigmaKind {
    Identity,
    /// x ↦ x^p; only meaningful in positive characteristic.
    Frobenius,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FieldKind {
    Rationals,
    Prime { p: u64 },
    /// 𝔽_p[x]/(modulus); modulus is monic irreducible of degree k,
    /// coefficients little-endian (length k+1, last entry 1).
    Extension { p: u64, k: usize, modulus: Vec<u64> },
}

/// A field element in canonical form: reduced fraction with positive
/// denominator, residue in [0,p), or little-endian coefficient vector of
/// length k with entries in [0,p).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FieldElem {
    Rat(BigRational),
    Fp(u64),
    Ext(Vec<u64>),
}

#[derive(Debug)]
pub struct FieldCtx {
    pub kind: FieldKind,
    pub sigma: SigmaKind,
    /// Matrices of σ^e on the coefficient basis, e = 0..sigma_order.
    /// Row-major k×k over 𝔽_p. Present only for extension fields.
    frob_powers: Vec<Vec<Vec<u64>>>,
}

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind && self.sigma == other.sigma
    }
}
impl Eq for FieldCtx {}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

// ---- polynomial helpers over 𝔽_p (little-endian coefficient vectors) ----

fn poly_trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn poly_mul_mod_p(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + (x as u128 * y as u128 % p as u128) as u64) % p;
        }
    }
    poly_trim(&mut out);
    out
}

/// Remainder of a by the monic polynomial m.
fn poly_rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    debug_assert!(m.last() == Some(&1));
    let mut r = a.to_vec();
    poly_trim(&mut r);
    let dm = m.len() - 1;
    while r.len() > dm {
        let c = *r.last().unwrap();
        let shift = r.len() - 1 - dm;
        if c != 0 {
            for (i, &mc) in m.iter().enumerate() {
                let sub = (c as u128 * mc as u128 % p as u128) as u64;
                r[shift + i] = (r[shift + i] + p - sub) % p;
            }
        }
        r.pop();
        poly_trim(&mut r);
        if r.len() <= dm {
            break;
        }
    }
    r
}

fn poly_pow_mod(base: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut b = poly_rem(base, m, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_rem(&poly_mul_mod_p(&acc, &b, p), m, p);
        }
        b = poly_rem(&poly_mul_mod_p(&b, &b, p), m, p);
        e >>= 1;
    }
    acc
}

fn inv_mod_p(a: u64, p: u64) -> u64 {
    // extended Euclid on (a, p)
    let (mut t, mut new_t) = (0i128, 1i128);
    let (mut r, mut new_r) = (p as i128, (a % p) as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    assert!(r == 1, "inverse of non-unit mod p");
    ((t % p as i128 + p as i128) % p as i128) as u64
}

fn poly_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let (mut a, mut b) = (a.to_vec(), b.to_vec());
    poly_trim(&mut a);
    poly_trim(&mut b);
    while !b.is_empty() {
        // make b monic for poly_rem
        let lead = *b.last().unwrap();
        let li = inv_mod_p(lead, p);
        let monic: Vec<u64> = b
            .iter()
            .map(|&c| (c as u128 * li as u128 % p as u128) as u64)
            .collect();
        let r = poly_rem(&a, &monic, p);
        a = b;
        b = r;
    }
    a
}

/// Extended Euclid: returns g, u with u*a ≡ g mod m (m monic).
fn poly_ext_gcd(a: &[u64], m: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let (mut r0, mut r1) = (m.to_vec(), poly_rem(a, m, p));
    let (mut u0, mut u1): (Vec<u64>, Vec<u64>) = (vec![], vec![1]);
    poly_trim(&mut r0);
    while !r1.is_empty() {
        // divide r0 by r1
        let lead = *r1.last().unwrap();
        let li = inv_mod_p(lead, p);
        let mut q = vec![0u64; r0.len().saturating_sub(r1.len()) + 1];
        let mut rem = r0.clone();
        while rem.len() >= r1.len() && !rem.is_empty() {
            let c = (*rem.last().unwrap() as u128 * li as u128 % p as u128) as u64;
            let shift = rem.len() - r1.len();
            if c != 0 {
                q[shift] = (q[shift] + c) % p;
                for (i, &rc) in r1.iter().enumerate() {
                    let sub = (c as u128 * rc as u128 % p as u128) as u64;
                    rem[shift + i] = (rem[shift + i] + p - sub) % p;
                }
            }
            rem.pop();
            poly_trim(&mut rem);
        }
        poly_trim(&mut q);
        // u_next = u0 - q*u1
        let qu1 = poly_mul_mod_p(&q, &u1, p);
        let mut u2 = vec![0u64; u0.len().max(qu1.len())];
        for (i, &c) in u0.iter().enumerate() {
            u2[i] = c;
        }
        for (i, &c) in qu1.iter().enumerate() {
            u2[i] = (u2[i] + p - c) % p;
        }
        poly_trim(&mut u2);
        (r0, r1) = (r1, rem);
        (u0, u1) = (u1, u2);
    }
    (r0, u0)
}

fn modulus_is_irreducible(modulus: &[u64], p: u64) -> bool {
    let k = modulus.len() - 1;
    if k == 0 || modulus.last() != Some(&1) {
        return false;
    }
    if k == 1 {
        return true;
    }
    // x^{p^k} ≡ x (mod f), and gcd(x^{p^{k/q}} - x, f) = 1 for prime q | k.
    let x = vec![0u64, 1u64];
    let frob_iter = |times: usize| -> Vec<u64> {
        let mut g = x.clone();
        for _ in 0..times {
            g = poly_pow_mod(&g, p, modulus, p);
        }
        g
    };
    let xk = frob_iter(k);
    if poly_rem(&xk, modulus, p) != poly_rem(&x, modulus, p) {
        return false;
    }
    let mut rest = k;
    let mut q = 2;
    let mut prime_divs = vec![];
    while rest > 1 {
        if rest.is_multiple_of(q) {
            prime_divs.push(q);
            while rest.is_multiple_of(q) {
                rest /= q;
            }
        }
        q += 1;
    }
    for q in prime_divs {
        let mut g = frob_iter(k / q);
        // g - x
        if g.len() < 2 {
            g.resize(2, 0);
        }
        g[1] = (g[1] + p - 1) % p;
        poly_trim(&mut g);
        let d = poly_gcd(&g, modulus, p);
        if d.len() != 1 {
            return false;
        }
    }
    true
}

impl FieldCtx {
    pub fn rationals() -> Ctx {
        Arc::new(FieldCtx {
            kind: FieldKind::Rationals,
            sigma: SigmaKind::Identity,
            frob_powers: vec![],
        })
    }

    pub fn prime(p: u64) -> Result<Ctx, Error> {
        if !is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        Ok(Arc::new(FieldCtx {
            kind: FieldKind::Prime { p },
            sigma: SigmaKind::Frobenius, // coincides with identity on 𝔽_p
            frob_powers: vec![],
        }))
    }

    pub fn extension(p: u64, k: usize, modulus: Vec<u64>, sigma: SigmaKind) -> Result<Ctx, Error> {
        if !is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        if k < 1 || modulus.len() != k + 1 {
            return Err(Error::InvalidField(format!(
                "modulus must have length k+1 = {}",
                k + 1
            )));
        }
        let modulus: Vec<u64> = modulus.iter().map(|&c| c % p).collect();
        if modulus.last() != Some(&1) {
            return Err(Error::InvalidField("modulus must be monic".into()));
        }
        if !modulus_is_irreducible(&modulus, p) {
            return Err(Error::InvalidField(format!(
                "modulus {modulus:?} is reducible over F_{p}"
            )));
        }
        let mut ctx = FieldCtx {
            kind: FieldKind::Extension { p, k, modulus },
            sigma,
            frob_powers: vec![],
        };
        ctx.frob_powers = ctx.compute_frob_powers();
        Ok(Arc::new(ctx))
    }

    /// Built-in field table: q a prime power among the small standard choices.
    /// Prime q gives 𝔽_q; 4, 8, 9, 25, 27 use fixed irreducible moduli.
    pub fn gf(q: u64) -> Result<Ctx, Error> {
        if is_prime(q) {
            return Self::prime(q);
        }
        let (p, k, modulus): (u64, usize, Vec<u64>) = match q {
            4 => (2, 2, vec![1, 1, 1]),     // x² + x + 1
            8 => (2, 3, vec![1, 1, 0, 1]),  // x³ + x + 1
            9 => (3, 2, vec![1, 0, 1]),     // x² + 1
            25 => (5, 2, vec![2, 0, 1]),    // x² + 2
            27 => (3, 3, vec![1, 2, 0, 1]), // x³ + 2x + 1
            _ => {
                return Err(Error::InvalidField(format!(
                    "no built-in modulus for q = {q}"
                )))
            }
        };
        Self::extension(p, k, modulus, SigmaKind::Frobenius)
    }

    fn compute_frob_powers(&self) -> Vec<Vec<Vec<u64>>> {
        let (p, k, modulus) = match &self.kind {
            FieldKind::Extension { p, k, modulus } => (*p, *k, modulus.clone()),
            _ => return vec![],
        };
        let order = self.sigma_order();
        // column j of the Frobenius matrix = coefficients of (x^j)^p mod f
        let mut frob = vec![vec![0u64; k]; k];
        for j in 0..k {
            let mut xj = vec![0u64; j + 1];
            xj[j] = 1;
            let col = poly_pow_mod(&xj, p, &modulus, p);
            for (i, &c) in col.iter().enumerate() {
                frob[i][j] = c;
            }
        }
        let ident: Vec<Vec<u64>> = (0..k)
            .map(|i| (0..k).map(|j| u64::from(i == j)).collect())
            .collect();
        let mut powers = vec![ident];
        for e in 1..order {
            let prev = &powers[e - 1];
            let mut next = vec![vec![0u64; k]; k];
            for i in 0..k {
                for j in 0..k {
                    let mut acc = 0u128;
                    for l in 0..k {
                        acc += frob[i][l] as u128 * prev[l][j] as u128;
                    }
                    next[i][j] = (acc % p as u128) as u64;
                }
            }
            powers.push(next);
        }
        powers
    }

    /// Smallest r ≥ 1 with σ^r = id.
    pub fn sigma_order(&self) -> usize {
        match (&self.kind, &self.sigma) {
            (FieldKind::Extension { k, .. }, SigmaKind::Frobenius) => *k,
            _ => 1,
        }
    }

    pub fn characteristic(&self) -> u64 {
        match &self.kind {
            FieldKind::Rationals => 0,
            FieldKind::Prime { p } | FieldKind::Extension { p, .. } => *p,
        }
    }

    /// Number of elements, if finite.
    pub fn size(&self) -> Option<u64> {
        match &self.kind {
            FieldKind::Rationals => None,
            FieldKind::Prime { p } => Some(*p),
            FieldKind::Extension { p, k, .. } => {
                let mut q = 1u64;
                for _ in 0..*k {
                    q = q.checked_mul(*p)?;
                }
                Some(q)
            }
        }
    }

    pub fn zero(&self) -> FieldElem {
        match &self.kind {
            FieldKind::Rationals => FieldElem::Rat(BigRational::zero()),
            FieldKind::Prime { .. } => FieldElem::Fp(0),
            FieldKind::Extension { k, .. } => FieldElem::Ext(vec![0; *k]),
        }
    }

    pub fn one(&self) -> FieldElem {
        self.from_int(1)
    }

    pub fn from_int(&self, v: i64) -> FieldElem {
        match &self.kind {
            FieldKind::Rationals => FieldElem::Rat(BigRational::from(BigInt::from(v))),
            FieldKind::Prime { p } => FieldElem::Fp(v.rem_euclid(*p as i64) as u64),
            FieldKind::Extension { p, k, .. } => {
                let mut c = vec![0u64; *k];
                c[0] = v.rem_euclid(*p as i64) as u64;
                FieldElem::Ext(c)
            }
        }
    }

    pub fn is_zero(&self, a: &FieldElem) -> bool {
        *a == self.zero()
    }

    pub fn add(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        match (&self.kind, a, b) {
            (FieldKind::Rationals, FieldElem::Rat(x), FieldElem::Rat(y)) => FieldElem::Rat(x + y),
            (FieldKind::Prime { p }, FieldElem::Fp(x), FieldElem::Fp(y)) => {
                FieldElem::Fp((x + y) % p)
            }
            (FieldKind::Extension { p, .. }, FieldElem::Ext(x), FieldElem::Ext(y)) => {
                FieldElem::Ext(x.iter().zip(y).map(|(&a, &b)| (a + b) % p).collect())
            }
            _ => panic!("field element does not belong to this context"),
        }
    }

    pub fn neg(&self, a: &FieldElem) -> FieldElem {
        match (&self.kind, a) {
            (FieldKind::Rationals, FieldElem::Rat(x)) => FieldElem::Rat(-x),
            (FieldKind::Prime { p }, FieldElem::Fp(x)) => FieldElem::Fp((p - x) % p),
            (FieldKind::Extension { p, .. }, FieldElem::Ext(x)) => {
                FieldElem::Ext(x.iter().map(|&a| (p - a) % p).collect())
            }
            _ => panic!("field element does not belong to this context"),
        }
    }

    pub fn sub(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        match (&self.kind, a, b) {
            (FieldKind::Rationals, FieldElem::Rat(x), FieldElem::Rat(y)) => FieldElem::Rat(x * y),
            (FieldKind::Prime { p }, FieldElem::Fp(x), FieldElem::Fp(y)) => {
                FieldElem::Fp((*x as u128 * *y as u128 % *p as u128) as u64)
            }
            (FieldKind::Extension { p, k, modulus }, FieldElem::Ext(x), FieldElem::Ext(y)) => {
                let mut prod = poly_rem(&poly_mul_mod_p(x, y, *p), modulus, *p);
                prod.resize(*k, 0);
                FieldElem::Ext(prod)
            }
            _ => panic!("field element does not belong to this context"),
        }
    }

    pub fn inv(&self, a: &FieldElem) -> Result<FieldElem, Error> {
        if self.is_zero(a) {
            return Err(Error::DivisionByZero);
        }
        Ok(match (&self.kind, a) {
            (FieldKind::Rationals, FieldElem::Rat(x)) => FieldElem::Rat(x.recip()),
            (FieldKind::Prime { p }, FieldElem::Fp(x)) => FieldElem::Fp(inv_mod_p(*x, *p)),
            (FieldKind::Extension { p, k, modulus }, FieldElem::Ext(x)) => {
                let (g, u) = poly_ext_gcd(x, modulus, *p);
                assert_eq!(g.len(), 1, "nonzero element must be a unit");
                let gi = inv_mod_p(g[0], *p);
                let mut r: Vec<u64> = u
                    .iter()
                    .map(|&c| (c as u128 * gi as u128 % *p as u128) as u64)
                    .collect();
                r = poly_rem(&r, modulus, *p);
                r.resize(*k, 0);
                FieldElem::Ext(r)
            }
            _ => panic!("field element does not belong to this context"),
        })
    }

    pub fn div(&self, a: &FieldElem, b: &FieldElem) -> Result<FieldElem, Error> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    /// σ^e(x); e may be negative, and is reduced modulo `sigma_order`.
    pub fn sigma_pow(&self, x: &FieldElem, e: i64) -> FieldElem {
        let order = self.sigma_order() as i64;
        let e = e.rem_euclid(order) as usize;
        if e == 0 {
            return x.clone();
        }
        match (&self.kind, x) {
            (FieldKind::Extension { p, k, .. }, FieldElem::Ext(c)) => {
                let m = &self.frob_powers[e];
                let mut out = vec![0u64; *k];
                for i in 0..*k {
                    let mut acc = 0u128;
                    for j in 0..*k {
                        acc += m[i][j] as u128 * c[j] as u128;
                    }
                    out[i] = (acc % *p as u128) as u64;
                }
                FieldElem::Ext(out)
            }
            _ => x.clone(),
        }
    }

    /// Degree over the prime field (1 for prime fields; rejected over ℚ).
    pub fn prime_degree(&self) -> Result<usize, Error> {
        match &self.kind {
            FieldKind::Rationals => Err(Error::InvalidField(
                "prime-field coordinates are undefined over the rationals".into(),
            )),
            FieldKind::Prime { .. } => Ok(1),
            FieldKind::Extension { k, .. } => Ok(*k),
        }
    }

    /// Coordinates over the prime field, little-endian, length prime_degree.
    pub fn prime_coords(&self, a: &FieldElem) -> Vec<u64> {
        match a {
            FieldElem::Fp(x) => vec![*x],
            FieldElem::Ext(c) => c.clone(),
            FieldElem::Rat(_) => panic!("prime coordinates over the rationals"),
        }
    }

    pub fn from_prime_coords(&self, coords: &[u64]) -> FieldElem {
        match &self.kind {
            FieldKind::Prime { p } => FieldElem::Fp(coords[0] % p),
            FieldKind::Extension { p, k, .. } => {
                assert_eq!(coords.len(), *k);
                FieldElem::Ext(coords.iter().map(|c| c % p).collect())
            }
            FieldKind::Rationals => panic!("prime coordinates over the rationals"),
        }
    }

    /// Matrix over 𝔽_p of multiplication by `a` on prime coordinates.
    pub fn mult_matrix(&self, a: &FieldElem) -> Vec<Vec<u64>> {
        match (&self.kind, a) {
            (FieldKind::Prime { .. }, FieldElem::Fp(x)) => vec![vec![*x]],
            (FieldKind::Extension { p, k, modulus }, FieldElem::Ext(c)) => {
                let mut m = vec![vec![0u64; *k]; *k];
                for j in 0..*k {
                    let mut xj = vec![0u64; j + 1];
                    xj[j] = 1;
                    let col = poly_rem(&poly_mul_mod_p(c, &xj, *p), modulus, *p);
                    for (i, &v) in col.iter().enumerate() {
                        m[i][j] = v;
                    }
                }
                m
            }
            _ => panic!("mult_matrix needs a finite field"),
        }
    }

    /// Matrix over 𝔽_p of σ^e on prime coordinates.
    pub fn sigma_matrix(&self, e: i64) -> Vec<Vec<u64>> {
        let order = self.sigma_order() as i64;
        let e = e.rem_euclid(order) as usize;
        match &self.kind {
            FieldKind::Prime { .. } => vec![vec![1]],
            FieldKind::Extension { k, .. } => {
                if e == 0 {
                    (0..*k)
                        .map(|i| (0..*k).map(|j| u64::from(i == j)).collect())
                        .collect()
                } else {
                    self.frob_powers[e].clone()
                }
            }
            FieldKind::Rationals => panic!("sigma_matrix over the rationals"),
        }
    }

    /// Matrix of x ↦ x^p on the coefficient basis, k×k over 𝔽_p.
    /// On a prime field this is the 1×1 identity; rejected over ℚ.
    pub fn frobenius_matrix(&self) -> Result<Vec<Vec<u64>>, Error> {
        match &self.kind {
            FieldKind::Rationals => Err(Error::InvalidField(
                "Frobenius matrix is undefined over the rationals".into(),
            )),
            FieldKind::Prime { .. } => Ok(vec![vec![1]]),
            FieldKind::Extension { .. } => {
                if self.frob_powers.len() > 1 {
                    Ok(self.frob_powers[1].clone())
                } else {
                    // k = 1 extension or identity sigma: recompute directly
                    Ok(self.compute_frob_powers_first())
                }
            }
        }
    }

    fn compute_frob_powers_first(&self) -> Vec<Vec<u64>> {
        let (p, k, modulus) = match &self.kind {
            FieldKind::Extension { p, k, modulus } => (*p, *k, modulus),
            _ => unreachable!(),
        };
        let mut frob = vec![vec![0u64; k]; k];
        for j in 0..k {
            let mut xj = vec![0u64; j + 1];
            xj[j] = 1;
            let col = poly_pow_mod(&xj, p, modulus, p);
            for (i, &c) in col.iter().enumerate() {
                frob[i][j] = c;
            }
        }
        frob
    }

    /// All elements of a finite field (panics over ℚ; intended for small q).
    pub fn elements(&self) -> Vec<FieldElem> {
        match &self.kind {
            FieldKind::Rationals => panic!("cannot enumerate the rationals"),
            FieldKind::Prime { p } => (0..*p).map(FieldElem::Fp).collect(),
            FieldKind::Extension { p, k, .. } => {
                let q = self.size().expect("field too large to enumerate");
                let mut out = Vec::with_capacity(q as usize);
                for mut idx in 0..q {
                    let mut c = vec![0u64; *k];
                    for slot in c.iter_mut() {
                        *slot = idx % p;
                        idx /= p;
                    }
                    out.push(FieldElem::Ext(c));
                }
                out
            }
        }
    }

    pub fn random_elem<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldElem {
        match &self.kind {
            FieldKind::Rationals => {
                let n = rng.gen_range(-9i64..=9);
                let d = rng.gen_range(1i64..=9);
                FieldElem::Rat(BigRational::new(BigInt::from(n), BigInt::from(d)))
            }
            FieldKind::Prime { p } => FieldElem::Fp(rng.gen_range(0..*p)),
            FieldKind::Extension { p, k, .. } => {
                FieldElem::Ext((0..*k).map(|_| rng.gen_range(0..*p)).collect())
            }
        }
    }

    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldElem {
        loop {
            let x = self.random_elem(rng);
            if !self.is_zero(&x) {
                return x;
            }
        }
    }

    /// Display form used in error messages and DOT output.
    pub fn show(&self, a: &FieldElem) -> String {
        match a {
            FieldElem::Rat(x) => {
                if x.denom().is_one() {
                    format!("{}", x.numer())
                } else {
                    format!("{}/{}", x.numer(), x.denom())
                }
            }
            FieldElem::Fp(x) => format!("{x}"),
            FieldElem::Ext(c) => {
                let terms: Vec<String> = c
                    .iter()
                    .enumerate()
                    .filter(|(_, &v)| v != 0)
                    .map(|(i, &v)| match i {
                        0 => format!("{v}"),
                        1 if v == 1 => "x".into(),
                        1 => format!("{v}x"),
                        _ if v == 1 => format!("x^{i}"),
                        _ => format!("{v}x^{i}"),
                    })
                    .collect();
                if terms.is_empty() {
                    "0".into()
                } else {
                    terms.join("+")
                }
            }
        }
    }
}

/// Parse a rational from "a/b" or "a" form (used by the JSON layer).
pub fn parse_rational(s: &str) -> Result<FieldElem, Error> {
    let parse_int = |t: &str| {
        t.parse::<BigInt>()
            .map_err(|_| Error::Parse(format!("bad integer {t:?}")))
    };
    let r = match s.split_once('/') {
        Some((n, d)) => {
            let d = parse_int(d)?;
            if d.is_zero() {
                return Err(Error::Parse("zero denominator".into()));
            }
            BigRational::new(parse_int(n)?, d)
        }
        None => BigRational::from(parse_int(s)?),
    };
    // BigRational::new reduces and normalizes; re-assert positive denominator
    debug_assert!(r.denom().is_positive());
    Ok(FieldElem::Rat(r))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x_of(ctx: &FieldCtx) -> FieldElem {
        // the class of x in an extension field
        match &ctx.kind {
            FieldKind::Extension { k, .. } => {
                let mut c = vec![0u64; *k];
                c[1] = 1;
                FieldElem::Ext(c)
            }
            _ => panic!(),
        }
    }

    #[test]
    fn sigma_on_f4_generator() {
        let f4 = FieldCtx::gf(4).unwrap();
        let x = x_of(&f4);
        // x² = x + 1 under x²+x+1, so σ(x) = x+1
        let expect = FieldElem::Ext(vec![1, 1]);
        assert_eq!(f4.sigma_pow(&x, 1), expect);
        assert_eq!(f4.mul(&x, &x), expect);
    }

    #[test]
    fn sigma_fixes_one() {
        for ctx in [FieldCtx::gf(4).unwrap(), FieldCtx::gf(9).unwrap(), FieldCtx::rationals()] {
            assert_eq!(ctx.sigma_pow(&ctx.one(), 17), ctx.one());
        }
    }

    #[test]
    fn identity_sigma_on_rationals() {
        let q = FieldCtx::rationals();
        let a = parse_rational("3/7").unwrap();
        assert_eq!(q.sigma_pow(&a, -5), a);
    }

    #[test]
    fn frobenius_matrix_fixtures() {
        let f4 = FieldCtx::gf(4).unwrap();
        assert_eq!(f4.frobenius_matrix().unwrap(), vec![vec![1, 1], vec![0, 1]]);
        let f2 = FieldCtx::prime(2).unwrap();
        assert_eq!(f2.frobenius_matrix().unwrap(), vec![vec![1]]);
        let f9 = FieldCtx::gf(9).unwrap();
        assert_eq!(f9.frobenius_matrix().unwrap(), vec![vec![1, 0], vec![0, 2]]);
        assert!(FieldCtx::rationals().frobenius_matrix().is_err());
    }

    #[test]
    fn arithmetic_fixtures() {
        let f3 = FieldCtx::prime(3).unwrap();
        assert_eq!(f3.inv(&FieldElem::Fp(2)).unwrap(), FieldElem::Fp(2));

        let q = FieldCtx::rationals();
        let sum = q.add(
            &parse_rational("1/3").unwrap(),
            &parse_rational("1/6").unwrap(),
        );
        assert_eq!(sum, parse_rational("1/2").unwrap());

        let f4 = FieldCtx::gf(4).unwrap();
        let x = x_of(&f4);
        let x1 = FieldElem::Ext(vec![1, 1]);
        assert_eq!(f4.mul(&x, &x1), f4.one());
    }

    #[test]
    fn inverse_law_exhaustive_small_fields() {
        for q in [2u64, 3, 4, 5, 8, 9, 25, 27] {
            let ctx = FieldCtx::gf(q).unwrap();
            for a in ctx.elements() {
                if ctx.is_zero(&a) {
                    assert!(ctx.inv(&a).is_err());
                } else {
                    assert_eq!(ctx.mul(&a, &ctx.inv(&a).unwrap()), ctx.one());
                }
            }
        }
    }

    #[test]
    fn sigma_power_composition() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        for q in [4u64, 8, 9, 27] {
            let ctx = FieldCtx::gf(q).unwrap();
            let k = ctx.sigma_order() as i64;
            for _ in 0..50 {
                let a = ctx.random_elem(&mut rng);
                for e1 in -2 * k..=2 * k {
                    for e2 in -2 * k..=2 * k {
                        assert_eq!(
                            ctx.sigma_pow(&a, e1 + e2),
                            ctx.sigma_pow(&ctx.sigma_pow(&a, e1), e2)
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn sigma_is_field_homomorphism() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        for q in [4u64, 8, 9, 25, 27] {
            let ctx = FieldCtx::gf(q).unwrap();
            for _ in 0..100 {
                let a = ctx.random_elem(&mut rng);
                let b = ctx.random_elem(&mut rng);
                assert_eq!(
                    ctx.sigma_pow(&ctx.add(&a, &b), 1),
                    ctx.add(&ctx.sigma_pow(&a, 1), &ctx.sigma_pow(&b, 1))
                );
                assert_eq!(
                    ctx.sigma_pow(&ctx.mul(&a, &b), 1),
                    ctx.mul(&ctx.sigma_pow(&a, 1), &ctx.sigma_pow(&b, 1))
                );
            }
        }
    }

    #[test]
    fn frobenius_matrix_matches_sigma_exhaustively() {
        for q in [4u64, 8, 9] {
            let ctx = FieldCtx::gf(q).unwrap();
            let m = ctx.frobenius_matrix().unwrap();
            let p = ctx.characteristic();
            for a in ctx.elements() {
                let FieldElem::Ext(c) = &a else { panic!() };
                let by_matrix: Vec<u64> = (0..c.len())
                    .map(|i| {
                        c.iter()
                            .enumerate()
                            .map(|(j, &v)| m[i][j] * v % p)
                            .sum::<u64>()
                            % p
                    })
                    .collect();
                assert_eq!(FieldElem::Ext(by_matrix), ctx.sigma_pow(&a, 1));
                // and σ is x ↦ x^p
                let mut pow = ctx.one();
                for _ in 0..p {
                    pow = ctx.mul(&pow, &a);
                }
                assert_eq!(pow, ctx.sigma_pow(&a, 1));
            }
        }
    }

    #[test]
    fn reducible_modulus_rejected() {
        // x² + 1 is reducible over F_2 ((x+1)²)
        assert!(FieldCtx::extension(2, 2, vec![1, 0, 1], SigmaKind::Frobenius).is_err());
        // x² - 1 over F_5
        assert!(FieldCtx::extension(5, 2, vec![4, 0, 1], SigmaKind::Frobenius).is_err());
    }
}
