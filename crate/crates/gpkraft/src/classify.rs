//! Classification of twisted Gelfand–Ponomarev modules.
//!
//! Given (M, F, V) with F σ-linear, V σ⁻¹-linear and FV = VF = 0, the
//! functions here compute the direct-sum decomposition of M into summands
//! attached to linear quivers Γ(w) (first kind) and cyclic quivers Γ([w], m)
//! with an invertible monodromy (second kind).
//!
//! The key tool is the σ-linear relation D(w) = D(w_m)∘…∘D(w_1) attached to
//! a word in the letters F and V#, where D(F) is the graph of F and D(V#)
//! the converse of the graph of V. Kernels and domains of such relations,
//! and their stabilizations, are computed cheaply by iterating the subspace
//! operators X ↦ F⁻¹(X) and X ↦ V(X); the relations themselves are only
//! materialized for the few cyclic words that actually contribute.

use std::collections::{HashMap, VecDeque};

use crate::canonical::{distinct_irreducible_factors, invariant_factors, Poly};
use crate::field::Ctx;
use crate::linalg::{
    map_image, map_preimage, solve_right, vec_add, vec_is_zero, vec_scale, vec_sub, vec_zero,
    Matrix, Subspace, Vector,
};
use crate::quiver::{primitive_necklaces, LabeledGraph, Letter, Word};
use crate::repn::{semilinear_conjugate, Conjugacy, GPModule, Representation};
use crate::semilinear::{weak_decomposition, SemilinearMap, SigmaRelation};
use crate::Error;

/// The relation of a single letter: D(F) = graph of F (twist +1),
/// D(V#) = converse of the graph of V (twist +1 as well).
pub fn letter_relation(m: &GPModule, l: Letter) -> SigmaRelation {
    match l {
        Letter::F => SigmaRelation::graph_of(&m.f_op()),
        Letter::V => SigmaRelation::graph_of(&m.v_op()).converse(),
    }
}

/// Memoized D(w) over all prefixes: D(w·L) = D(w) ∘ D(L) since the letter
/// appended on the right is applied first.
pub struct MonomialCache<'a> {
    module: &'a GPModule,
    memo: HashMap<Word, SigmaRelation>,
}

impl<'a> MonomialCache<'a> {
    pub fn new(module: &'a GPModule) -> MonomialCache<'a> {
        let mut memo = HashMap::new();
        memo.insert(Word::empty(), SigmaRelation::one(&module.ctx, module.dim));
        MonomialCache { module, memo }
    }

    pub fn relation(&mut self, w: &Word) -> SigmaRelation {
        if let Some(r) = self.memo.get(w) {
            return r.clone();
        }
        let mut prefix = w.clone();
        let last = prefix.0.pop().expect("empty word is preseeded");
        let head = self.relation(&prefix);
        let r = SigmaRelation::compose(&head, &letter_relation(self.module, last));
        self.memo.insert(w.clone(), r.clone());
        r
    }
}

/// D(L)⁻¹ as a subspace operator: D(F)⁻¹(X) = F⁻¹(X), D(V#)⁻¹(X) = V(X).
fn pi_letter(m: &GPModule, l: Letter, x: &Subspace) -> Subspace {
    match l {
        Letter::F => map_preimage(&m.f, x, 1),
        Letter::V => map_image(&m.v, x, -1),
    }
}

/// D(w)⁻¹(X) = {x : ∃y ∈ X with (x, y) ∈ D(w)}, computed letterwise:
/// peeling the last-applied letter of a composition commutes with taking
/// relation preimages, so folding the display word left to right applies
/// the single-letter operators in the correct order.
pub fn word_preimage(m: &GPModule, w: &Word, x: &Subspace) -> Subspace {
    let mut s = x.clone();
    for &c in &w.0 {
        s = pi_letter(m, c, &s);
    }
    s
}

/// Stabilized kernel and domain of D(w) for a cyclic word: the increasing
/// chain Ker D(wⁱ) and decreasing chain Dom D(wⁱ) computed by iterating
/// X ↦ D(w)⁻¹(X) from 0 and from M; a stalled step is a fixed point.
pub fn stable_pair(m: &GPModule, w: &Word) -> (Subspace, Subspace) {
    let ctx = &m.ctx;
    let mut k = Subspace::zero(ctx, m.dim);
    for _ in 0..=m.dim {
        let next = word_preimage(m, w, &k);
        assert!(next.contains(&k), "kernel chain must be increasing");
        if next == k {
            break;
        }
        k = next;
    }
    let mut d = Subspace::full(ctx, m.dim);
    for _ in 0..=m.dim {
        let next = word_preimage(m, w, &d);
        assert!(d.contains(&next), "domain chain must be decreasing");
        if next == d {
            break;
        }
        d = next;
    }
    (k, d)
}

/// One member of the stabilized sequence: a subspace together with a word
/// witnessing it as Ker D(w) (from_kernel) or Dom D(w).
#[derive(Clone, Debug)]
pub struct FlagMember {
    pub space: Subspace,
    pub witness: Word,
    pub from_kernel: bool,
}

/// The full flag of subspaces {Ker D(w), Dom D(w) : all words w}, sorted by
/// dimension. It is totally ordered under inclusion (asserted), starts at 0
/// and ends at M; its consecutive gaps are the elementary intervals that
/// the classification fills.
#[derive(Clone, Debug)]
pub struct StabilizedSequence {
    pub flag: Vec<FlagMember>,
}

impl StabilizedSequence {
    /// Number of elementary intervals.
    pub fn intervals(&self) -> usize {
        self.flag.len().saturating_sub(1)
    }
}

pub fn stabilized_sequence(m: &GPModule) -> StabilizedSequence {
    let ctx = &m.ctx;
    let n = m.dim;
    let mut members: Vec<FlagMember> = Vec::new();
    let mut queue: VecDeque<usize> = VecDeque::new();
    let push = |members: &mut Vec<FlagMember>,
                    queue: &mut VecDeque<usize>,
                    space: Subspace,
                    witness: Word,
                    from_kernel: bool| {
        if members.iter().any(|f| f.space == space) {
            return;
        }
        members.push(FlagMember {
            space,
            witness,
            from_kernel,
        });
        queue.push_back(members.len() - 1);
    };
    push(
        &mut members,
        &mut queue,
        Subspace::zero(ctx, n),
        Word::empty(),
        true,
    );
    push(
        &mut members,
        &mut queue,
        Subspace::full(ctx, n),
        Word::empty(),
        false,
    );
    while let Some(i) = queue.pop_front() {
        assert!(
            members.len() <= 2 * (n + 1),
            "stabilized sequence exceeds its size bound"
        );
        for l in [Letter::F, Letter::V] {
            let space = pi_letter(m, l, &members[i].space);
            let witness = members[i].witness.child(l);
            let from_kernel = members[i].from_kernel;
            push(&mut members, &mut queue, space, witness, from_kernel);
        }
    }
    members.sort_by_key(|f| f.space.dim());
    for pair in members.windows(2) {
        assert!(
            pair[1].space.contains(&pair[0].space) && pair[1].space != pair[0].space,
            "stabilized sequence is not totally ordered: {:?} vs {:?}",
            pair[0],
            pair[1]
        );
    }
    StabilizedSequence { flag: members }
}

/// The words of the first kind W₁ with, for each w, the elementary interval
/// Dom D(V#w) ⊊ Ker D(Fw) it labels. Words are listed in breadth-first
/// order of the prefix tree (by length, then lexicographically with F < V#),
/// which is intrinsic to the module.
#[derive(Clone, Debug)]
pub struct FirstKind {
    pub words: Vec<Word>,
    /// Dom D(V#w), the lower end of the interval.
    pub lower: Vec<Subspace>,
    /// Ker D(Fw), the upper end of the interval.
    pub upper: Vec<Subspace>,
}

impl FirstKind {
    pub fn index_of(&self, w: &Word) -> Option<usize> {
        self.words.iter().position(|x| x == w)
    }

    /// dim Ker D(Fw) − dim Dom D(V#w), the multiplicity space dimension.
    pub fn interval_dim(&self, i: usize) -> usize {
        self.upper[i].dim() - self.lower[i].dim()
    }
}

fn interval_of_word(m: &GPModule, w: &Word) -> (Subspace, Subspace) {
    let ctx = &m.ctx;
    // Ker D(Fw) = D(Fw)⁻¹(0): fold the display word F·w from 0.
    let mut upper = pi_letter(m, Letter::F, &Subspace::zero(ctx, m.dim));
    for &c in &w.0 {
        upper = pi_letter(m, c, &upper);
    }
    // Dom D(V#w) = D(V#w)⁻¹(M): fold the display word V#·w from M.
    let mut lower = pi_letter(m, Letter::V, &Subspace::full(ctx, m.dim));
    for &c in &w.0 {
        lower = pi_letter(m, c, &lower);
    }
    (lower, upper)
}

/// Enumerate W₁ = {w : Dom D(V#w) ⊊ Ker D(Fw)} by breadth-first search on
/// the prefix tree; a word's children are explored only when the word is a
/// member (W₁ is closed under prefixes).
pub fn words_first_kind(m: &GPModule) -> FirstKind {
    let mut fk = FirstKind {
        words: Vec::new(),
        lower: Vec::new(),
        upper: Vec::new(),
    };
    let mut queue: VecDeque<Word> = VecDeque::new();
    queue.push_back(Word::empty());
    while let Some(w) = queue.pop_front() {
        let (lower, upper) = interval_of_word(m, &w);
        let member = upper.contains(&lower) && lower.dim() < upper.dim();
        if !member {
            continue;
        }
        assert!(
            fk.words.len() < m.dim.max(1),
            "more first-kind words than elementary intervals"
        );
        fk.words.push(w.clone());
        fk.lower.push(lower);
        fk.upper.push(upper);
        queue.push_back(w.child(Letter::F));
        queue.push_back(w.child(Letter::V));
    }
    fk
}

/// The associated graded module of the first kind: the prefix tree of W₁
/// as a labeled graph (an F-arrow wF → w for each member child wF, a
/// V-arrow w → wV#), with U_w = Ker D(Fw) / Dom D(V#w) at vertex w and the
/// induced maps as the representation. F-edge maps are injective and
/// V-edge maps surjective (asserted).
#[derive(Clone, Debug)]
pub struct GrFirst {
    pub first: FirstKind,
    /// For each word, a lift of a basis of U_w into Ker D(Fw) ⊆ M.
    pub sections: Vec<Vec<Vector>>,
    pub graph: LabeledGraph,
    pub rep: Representation,
}

/// Coordinates of v in the quotient basis: solve v = Σ c_i sec_i + (lower)
/// and return the c_i.
fn quotient_coords(
    ctx: &Ctx,
    section: &[Vector],
    lower: &Subspace,
    v: &Vector,
) -> Option<Vector> {
    let mut cols: Vec<Vector> = section.to_vec();
    cols.extend(lower.basis_rows());
    if cols.is_empty() {
        return if vec_is_zero(ctx, v) {
            Some(Vec::new())
        } else {
            None
        };
    }
    let a = Matrix::from_rows(ctx, cols).transpose();
    solve_right(&a, v).map(|c| c[..section.len()].to_vec())
}

pub fn gr_first(m: &GPModule) -> Result<GrFirst, Error> {
    let ctx = &m.ctx;
    let fk = words_first_kind(m);
    if fk.words.is_empty() {
        return Err(Error::Invalid(
            "module has no first-kind words (no linear part)".into(),
        ));
    }
    let sections: Vec<Vec<Vector>> = (0..fk.words.len())
        .map(|i| fk.upper[i].section(&fk.lower[i]))
        .collect();
    let mut graph = LabeledGraph::new();
    for w in &fk.words {
        graph.add_vertex(w.show());
    }
    let mut maps: Vec<Matrix> = Vec::new();
    let fop = m.f_op();
    let vop = m.v_op();
    for (i, w) in fk.words.iter().enumerate().skip(1) {
        let mut parent = w.clone();
        let letter = parent.0.pop().expect("non-root word");
        let p = fk
            .index_of(&parent)
            .expect("parent of a first-kind word is first-kind");
        match letter {
            Letter::F => {
                // F induces an injection U_{wF} → U_w: arrow wF → w.
                let d_src = sections[i].len();
                let d_dst = sections[p].len();
                let mut mat = Matrix::zeros(ctx, d_dst, d_src);
                for (c, x) in sections[i].iter().enumerate() {
                    let fx = fop.apply(x);
                    let coords = quotient_coords(ctx, &sections[p], &fk.lower[p], &fx)
                        .expect("F must map Ker D(FwF) into Ker D(Fw)");
                    for r in 0..d_dst {
                        mat[(r, c)] = coords[r].clone();
                    }
                }
                assert_eq!(
                    mat.rank(),
                    d_src,
                    "induced F-edge map must be injective at {w:?}"
                );
                graph.add_edge(i, p, Letter::F);
                maps.push(mat);
            }
            Letter::V => {
                // V induces a surjection U_w → U_{wV#}: arrow w → wV#.
                let d_src = sections[p].len();
                let d_dst = sections[i].len();
                let mut mat = Matrix::zeros(ctx, d_dst, d_src);
                for (c, x) in sections[p].iter().enumerate() {
                    let vx = vop.apply(x);
                    let coords = quotient_coords(ctx, &sections[i], &fk.lower[i], &vx)
                        .expect("V must map Ker D(Fw) into Ker D(FwV#)");
                    for r in 0..d_dst {
                        mat[(r, c)] = coords[r].clone();
                    }
                }
                assert_eq!(
                    mat.rank(),
                    d_dst,
                    "induced V-edge map must be surjective at {w:?}"
                );
                graph.add_edge(p, i, Letter::V);
                maps.push(mat);
            }
        }
    }
    let dims: Vec<usize> = sections.iter().map(|s| s.len()).collect();
    let rep = Representation::new(ctx, graph.clone(), dims, maps)?;
    Ok(GrFirst {
        first: fk,
        sections,
        graph,
        rep,
    })
}

/// The compatible system of complements γ(w): Ker D(Fw) = Dom D(V#w) ⊕ γ(w)
/// with F(γ(wF)) ⊆ γ(w) injectively and V(γ(w)) = γ(wV#). Built by downward
/// induction on word length as γ(w) = γ^V ⊕ γ° ⊕ γ^F with deterministic
/// complement choices. Returned aligned with `fk.words`.
pub fn gamma_spaces(m: &GPModule, fk: &FirstKind) -> Vec<Subspace> {
    let ctx = &m.ctx;
    let n = m.dim;
    let zero = Subspace::zero(ctx, n);
    let ker_v = map_preimage(&m.v, &zero, -1);
    let mut gamma: Vec<Subspace> = vec![zero.clone(); fk.words.len()];
    let mut order: Vec<usize> = (0..fk.words.len()).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(fk.words[i].len()));
    for &i in &order {
        let w = &fk.words[i];
        let upper = &fk.upper[i];
        let lower = &fk.lower[i];
        let child_f = fk.index_of(&w.child(Letter::F));
        let child_v = fk.index_of(&w.child(Letter::V));
        // γ^F = F(γ(wF)); injectivity shows as dimension preservation.
        let gamma_f = match child_f {
            Some(j) => {
                let img = map_image(&m.f, &gamma[j], 1);
                assert_eq!(
                    img.dim(),
                    gamma[j].dim(),
                    "F must be injective on γ({:?})",
                    fk.words[j]
                );
                img
            }
            None => zero.clone(),
        };
        assert!(upper.contains(&gamma_f), "F(γ(wF)) must land in Ker D(Fw)");
        // γ^V: a complement of Ker V inside V⁻¹(γ(wV#)) ∩ Ker D(Fw), so that
        // V restricts to an isomorphism γ^V → γ(wV#).
        let gamma_v = match child_v {
            Some(j) => {
                let p0 = map_preimage(&m.v, &gamma[j], -1).intersect(upper);
                let q0 = p0.intersect(&ker_v);
                let gv = p0.complement_in(&q0);
                assert_eq!(
                    map_image(&m.v, &gv, -1),
                    gamma[j],
                    "V must map γ^V onto γ({:?})",
                    fk.words[j]
                );
                gv
            }
            None => zero.clone(),
        };
        // γ°: a complement inside Ker V ∩ Ker D(Fw) of its intersection with
        // γ^F + Dom D(V#w).
        let q = ker_v.intersect(upper);
        let p = gamma_f.sum(lower);
        let gamma_o = q.complement_in(&q.intersect(&p));
        let g = gamma_v.sum(&gamma_o).sum(&gamma_f);
        assert_eq!(
            g.dim(),
            gamma_v.dim() + gamma_o.dim() + gamma_f.dim(),
            "γ^V, γ°, γ^F must be independent at {w:?}"
        );
        assert_eq!(
            g.sum(lower),
            *upper,
            "γ(w) ⊕ Dom D(V#w) must fill Ker D(Fw) at {w:?}"
        );
        assert_eq!(
            g.intersect(lower).dim(),
            0,
            "γ(w) must meet Dom D(V#w) trivially at {w:?}"
        );
        // V(γ(w)) = γ(wV#) (or 0 when wV# ∉ W₁): γ° ⊆ Ker V and V∘F = 0.
        let v_image = map_image(&m.v, &g, -1);
        match child_v {
            Some(j) => assert_eq!(v_image, gamma[j], "V(γ(w)) must equal γ(wV#)"),
            None => assert_eq!(v_image.dim(), 0, "V must kill γ(w) when wV# ∉ W₁"),
        }
        gamma[i] = g;
    }
    gamma
}

/// The multiset of linear summands: M(Γ(w), 𝟏) with multiplicity
/// dim X_w = dim U_w − dim U_{wF} − dim U_{wV#}, where X_w is a complement
/// of (image of the F-edge) ⊕ (a complement of the V-edge kernel) in U_w.
/// Entries with multiplicity 0 are dropped; order follows W₁.
pub fn linear_decomposition(m: &GPModule) -> Result<Vec<(Word, usize)>, Error> {
    let fk = words_first_kind(m);
    if fk.words.is_empty() {
        return Ok(Vec::new());
    }
    let gr = gr_first(m)?;
    let ctx = &m.ctx;
    let mut out = Vec::new();
    for (i, w) in gr.first.words.iter().enumerate() {
        let d_w = gr.rep.dims[i];
        let child_f = gr.first.index_of(&w.child(Letter::F));
        let child_v = gr.first.index_of(&w.child(Letter::V));
        // X^F: image of the F-edge map into U_w.
        let im_f = match child_f {
            Some(j) => {
                let e = edge_between(&gr.graph, j, i, Letter::F);
                Subspace::from_matrix(&gr.rep.maps[e].transpose())
            }
            None => Subspace::zero(ctx, d_w),
        };
        // Kernel of the V-edge map out of U_w.
        let ker_v = match child_v {
            Some(j) => {
                let e = edge_between(&gr.graph, i, j, Letter::V);
                Subspace::from_matrix(&gr.rep.maps[e].kernel_basis())
            }
            None => Subspace::full(ctx, d_w),
        };
        assert!(
            ker_v.contains(&im_f),
            "F-edge image must lie in the V-edge kernel (V∘F = 0) at {w:?}"
        );
        let d_f = child_f.map_or(0, |j| gr.rep.dims[j]);
        let d_v = child_v.map_or(0, |j| gr.rep.dims[j]);
        let mult = d_w
            .checked_sub(d_f + d_v)
            .expect("child multiplicity spaces exceed U_w");
        if mult > 0 {
            out.push((w.clone(), mult));
        }
    }
    Ok(out)
}

fn edge_between(graph: &LabeledGraph, tail: usize, head: usize, label: Letter) -> usize {
    graph
        .edges
        .iter()
        .position(|e| e.tail == tail && e.head == head && e.label == label)
        .expect("expected tree edge is missing")
}

/// A cyclic word contributing to the second kind, with the stabilized
/// kernel and domain of D(pattern): Ker D(p)∞ ⊊ Dom D(p)∞.
#[derive(Clone, Debug)]
pub struct SecondKindClass {
    pub pattern: Word,
    pub ker_stable: Subspace,
    pub dom_stable: Subspace,
}

/// Enumerate the cyclic classes of the second kind: primitive necklaces p
/// (canonical rotation representatives, by length then lexicographically)
/// with Ker D(p)∞ strictly below Dom D(p)∞. Each accepted class of length t
/// accounts for t elementary intervals of the stabilized sequence, which
/// bounds the remaining search; the final accounting
/// |W₁| + Σ length = (number of intervals) is asserted.
pub fn words_second_kind(m: &GPModule) -> Vec<SecondKindClass> {
    let seq = stabilized_sequence(m);
    let fk = words_first_kind(m);
    let mut remaining = seq
        .intervals()
        .checked_sub(fk.words.len())
        .expect("first-kind words exceed elementary intervals");
    let mut out = Vec::new();
    let mut len = 1;
    while remaining > 0 && len <= remaining {
        for p in primitive_necklaces(len) {
            if len > remaining {
                break;
            }
            let (ker_s, dom_s) = stable_pair(m, &p);
            if dom_s.contains(&ker_s) && ker_s.dim() < dom_s.dim() {
                // shift coherence: every rotation carries an interval of the
                // same quotient dimension.
                let d = dom_s.dim() - ker_s.dim();
                for r in 1..len {
                    let (kr, dr) = stable_pair(m, &p.rotate_left(r));
                    assert!(
                        dr.contains(&kr) && dr.dim() - kr.dim() == d,
                        "rotations of {p:?} must carry intervals of equal dimension"
                    );
                }
                remaining -= len;
                out.push(SecondKindClass {
                    pattern: p,
                    ker_stable: ker_s,
                    dom_stable: dom_s,
                });
            }
        }
        len += 1;
    }
    assert_eq!(
        remaining, 0,
        "elementary intervals left unaccounted for after the cyclic search"
    );
    out
}

/// The sections of a second-kind class: subspaces S_j ⊆ M for each position
/// j = 0..t−1 around the cycle, with S_0 ⊕ Ker D(p)∞ = Dom D(p)∞ and more
/// generally S_j a complement of the stabilized kernel inside the stabilized
/// domain of the j-th rotation; the letters of p carry S_j isomorphically to
/// S_{j+1} and close up to the monodromy T on S_0.
#[derive(Clone, Debug)]
pub struct Sections {
    pub pattern: Word,
    pub sections: Vec<Subspace>,
    /// Rows: the chosen basis s_1..s_d of S_0 (matches monodromy coords).
    pub s_basis: Matrix,
    /// T as a d×d matrix in the s_basis coordinates, twist = length of p.
    pub monodromy: SemilinearMap,
}

/// Pick y in (p1 + s1) ∩ (p2 + s2), if the affine subspaces meet.
fn affine_intersect(
    ctx: &Ctx,
    p1: &[crate::field::FieldElem],
    s1: &Subspace,
    p2: &[crate::field::FieldElem],
    s2: &Subspace,
) -> Option<Vector> {
    let rhs = vec_sub(ctx, p2, p1);
    let b1 = s1.basis_rows();
    let mut cols: Vec<Vector> = b1.clone();
    cols.extend(s2.basis_rows());
    if cols.is_empty() {
        return if vec_is_zero(ctx, &rhs) {
            Some(p1.to_vec())
        } else {
            None
        };
    }
    let a = Matrix::from_rows(ctx, cols).transpose();
    let c = solve_right(&a, &rhs)?;
    let mut y = p1.to_vec();
    for (i, b) in b1.iter().enumerate() {
        y = vec_add(ctx, &y, &vec_scale(ctx, &c[i], b));
    }
    Some(y)
}

pub fn second_kind_sections(m: &GPModule, class: &SecondKindClass) -> Result<Sections, Error> {
    let ctx = m.ctx.clone();
    let t = class.pattern.len();
    assert!(t >= 1);
    let mut cache = MonomialCache::new(m);
    let dp = cache.relation(&class.pattern);
    let wd = weak_decomposition(&dp)?;
    let d = wd.s.dim();
    assert_eq!(
        wd.s.sum(&class.ker_stable),
        class.dom_stable,
        "weak decomposition must complement the stabilized kernel"
    );
    // Suffix relations R_j = D(w_t … w_{j+1}) (what remains after the first
    // j letters have been applied); R_t = identity, R_0 = D(p).
    let applied = class.pattern.applied_seq();
    let letters: Vec<SigmaRelation> = applied
        .iter()
        .map(|&l| letter_relation(m, l))
        .collect();
    let mut suffix = vec![SigmaRelation::one(&ctx, m.dim); t + 1];
    for j in (0..t).rev() {
        suffix[j] = SigmaRelation::compose(&suffix[j + 1], &letters[j]);
    }
    // Transport each basis vector s_i along the cycle: a chain y_0 = s_i,
    // (y_{j−1}, y_j) ∈ D(w_j), ending at y_t = T(s_i). Intermediate y_j are
    // cut out by intersecting the affine fibers
    // {y : (y_{j−1}, y) ∈ D(w_j)} = y' + Indet D(w_j) and
    // {y : (y, T(s_i)) ∈ R_j} = y'' + Ker R_j.
    let mut chains: Vec<Vec<Vector>> = Vec::new();
    for i in 0..d {
        let s_i = wd.s_basis.row(i);
        let t_col = wd.t.matrix.col(i);
        let mut z = vec_zero(&ctx, m.dim);
        for k in 0..d {
            z = vec_add(&ctx, &z, &vec_scale(&ctx, &t_col[k], &wd.s_basis.row(k)));
        }
        let mut ys: Vec<Vector> = vec![s_i];
        for j in 1..=t {
            let y = if j == t {
                z.clone()
            } else {
                let p1 = letters[j - 1]
                    .image_vector(&ys[j - 1])
                    .expect("chain start must lie in Dom D(w_j)");
                let p2 = suffix[j]
                    .converse()
                    .image_vector(&z)
                    .expect("chain end must lie in Im R_j");
                affine_intersect(&ctx, &p1, &letters[j - 1].indet(), &p2, &suffix[j].ker())
                    .expect("transport fibers must intersect")
            };
            assert!(
                letters[j - 1].contains_pair(&ys[j - 1], &y),
                "transport step must realize D(w_j)"
            );
            ys.push(y);
        }
        chains.push(ys);
    }
    // Assemble and verify the sections.
    let mut sections = Vec::new();
    for j in 0..t {
        let sp = Subspace::span(&ctx, chains.iter().map(|c| c[j].clone()).collect());
        assert_eq!(sp.dim(), d, "transported section must keep its dimension");
        sections.push(sp);
    }
    assert_eq!(sections[0], wd.s);
    for (j, sec) in sections.iter().enumerate() {
        // After applying j letters the ambient word is the rotation whose
        // display is the original rotated left by t − j.
        let rot = class.pattern.rotate_left((t - j) % t);
        let (kr, dr) = stable_pair(m, &rot);
        assert!(
            dr.contains(sec) && sec.intersect(&kr).dim() == 0 && sec.dim() + kr.dim() == dr.dim(),
            "section {j} must complement the stabilized kernel of {rot:?}"
        );
    }
    Ok(Sections {
        pattern: class.pattern.clone(),
        sections,
        s_basis: wd.s_basis,
        monodromy: wd.t,
    })
}

/// One circular entry of the classification: the summand
/// M(Γ([pattern], t·dim… ), ρ) with ρ the strict representation determined
/// by the monodromy at the canonical rotation's start vertex.
#[derive(Clone, Debug)]
pub struct CircularEntry {
    pub pattern: Word,
    /// Dimension of each section (the rank of the cyclic representation).
    pub dim: usize,
    /// Monodromy at the start of the canonical rotation; twist = |pattern|.
    pub monodromy: SemilinearMap,
    /// Invariant factors of the monodromy matrix when σ^twist = id, i.e.
    /// when linear similarity classifies the summand completely.
    pub canonical_form: Option<Vec<Poly>>,
}

#[derive(Clone, Debug)]
pub struct ClassificationReport {
    pub ctx: Ctx,
    pub dim: usize,
    /// (word, multiplicity) pairs, multiplicity ≥ 1, in prefix-tree order.
    pub linear: Vec<(Word, usize)>,
    pub circular: Vec<CircularEntry>,
}

/// Classify a module: the full first-kind multiset and one circular entry
/// per second-kind class. Dimension bookkeeping
/// Σ (|w|+1)·mult + Σ |p|·d = dim M is asserted.
pub fn classify(m: &GPModule) -> Result<ClassificationReport, Error> {
    m.check_gp()?;
    let linear = linear_decomposition(m)?;
    let classes = words_second_kind(m);
    let mut circular = Vec::new();
    for c in &classes {
        let sec = second_kind_sections(m, c)?;
        let t = c.pattern.len();
        let exact = t % m.ctx.sigma_order() == 0;
        let canonical_form = if exact && sec.monodromy.dim() > 0 {
            Some(invariant_factors(&sec.monodromy.matrix))
        } else {
            None
        };
        circular.push(CircularEntry {
            pattern: c.pattern.clone(),
            dim: sec.monodromy.dim(),
            monodromy: sec.monodromy,
            canonical_form,
        });
    }
    let total: usize = linear.iter().map(|(w, k)| (w.len() + 1) * k).sum::<usize>()
        + circular.iter().map(|e| e.pattern.len() * e.dim).sum::<usize>();
    assert_eq!(total, m.dim, "dimension bookkeeping must close");
    Ok(ClassificationReport {
        ctx: m.ctx.clone(),
        dim: m.dim,
        linear,
        circular,
    })
}

/// The canonical submodule split M = M₁ ⊕ M₂ into the first-kind part
/// (sum of the γ spaces) and second-kind part (sum of all sections), with
/// the restricted modules in the chosen bases.
#[derive(Clone, Debug)]
pub struct Split {
    pub m1: Subspace,
    pub m2: Subspace,
    pub m1_module: GPModule,
    pub m2_module: GPModule,
}

fn restrict_module(m: &GPModule, sub: &Subspace) -> Result<GPModule, Error> {
    let ctx = &m.ctx;
    let basis = sub.basis_rows();
    let r = basis.len();
    if r == 0 {
        return Ok(GPModule::zero(ctx));
    }
    let fop = m.f_op();
    let vop = m.v_op();
    let mut fmat = Matrix::zeros(ctx, r, r);
    let mut vmat = Matrix::zeros(ctx, r, r);
    for (j, b) in basis.iter().enumerate() {
        let fb = sub
            .coords(&fop.apply(b))
            .ok_or_else(|| Error::Invalid("F does not stabilize the subspace".into()))?;
        let vb = sub
            .coords(&vop.apply(b))
            .ok_or_else(|| Error::Invalid("V does not stabilize the subspace".into()))?;
        for i in 0..r {
            fmat[(i, j)] = fb[i].clone();
            vmat[(i, j)] = vb[i].clone();
        }
    }
    GPModule::new(ctx, fmat, vmat)
}

pub fn split(m: &GPModule) -> Result<Split, Error> {
    m.check_gp()?;
    let ctx = &m.ctx;
    let fk = words_first_kind(m);
    let gammas = gamma_spaces(m, &fk);
    let mut m1 = Subspace::zero(ctx, m.dim);
    let mut total = 0;
    for g in &gammas {
        total += g.dim();
        m1 = m1.sum(g);
    }
    assert_eq!(m1.dim(), total, "γ spaces must be independent");
    let mut m2 = Subspace::zero(ctx, m.dim);
    total = 0;
    for c in &words_second_kind(m) {
        let sec = second_kind_sections(m, c)?;
        for s in &sec.sections {
            total += s.dim();
            m2 = m2.sum(s);
        }
    }
    assert_eq!(m2.dim(), total, "sections must be independent");
    assert_eq!(
        m1.dim() + m2.dim(),
        m.dim,
        "M₁ and M₂ must fill the module"
    );
    assert_eq!(m1.intersect(&m2).dim(), 0, "M₁ and M₂ must be disjoint");
    for (part, name) in [(&m1, "M₁"), (&m2, "M₂")] {
        assert!(
            part.contains(&map_image(&m.f, part, 1)),
            "{name} must be F-stable"
        );
        assert!(
            part.contains(&map_image(&m.v, part, -1)),
            "{name} must be V-stable"
        );
    }
    let m1_module = restrict_module(m, &m1)?;
    let m2_module = restrict_module(m, &m2)?;
    Ok(Split {
        m1,
        m2,
        m1_module,
        m2_module,
    })
}

/// Outcome of an isomorphism decision between two modules.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IsoAnswer {
    Yes,
    No(String),
    Undetermined(String),
}

/// Compare two classification reports. The linear parts and the circular
/// pattern/dimension data are decisive; matching circular monodromies are
/// compared by semilinear conjugacy, whose rare bounded-search exhaustion
/// propagates as Undetermined.
pub fn reports_isomorphic(
    a: &ClassificationReport,
    b: &ClassificationReport,
    seed: u64,
) -> Result<IsoAnswer, Error> {
    if a.ctx != b.ctx {
        return Err(Error::CtxMismatch);
    }
    if a.dim != b.dim {
        return Ok(IsoAnswer::No(format!(
            "total dimensions differ: {} vs {}",
            a.dim, b.dim
        )));
    }
    if a.linear != b.linear {
        return Ok(IsoAnswer::No("linear parts differ".into()));
    }
    if a.circular.len() != b.circular.len() {
        return Ok(IsoAnswer::No("numbers of circular summands differ".into()));
    }
    let mut pending = Vec::new();
    for (i, (ea, eb)) in a.circular.iter().zip(&b.circular).enumerate() {
        if ea.pattern != eb.pattern {
            return Ok(IsoAnswer::No(format!(
                "circular patterns differ: {:?} vs {:?}",
                ea.pattern, eb.pattern
            )));
        }
        if ea.dim != eb.dim {
            return Ok(IsoAnswer::No(format!(
                "circular dimensions at {:?} differ: {} vs {}",
                ea.pattern, ea.dim, eb.dim
            )));
        }
        match semilinear_conjugate(&ea.monodromy, &eb.monodromy, seed.wrapping_add(i as u64))? {
            Conjugacy::Yes(_) => {}
            Conjugacy::No(reason) => {
                return Ok(IsoAnswer::No(format!(
                    "monodromies at {:?} are not conjugate: {reason}",
                    ea.pattern
                )))
            }
            Conjugacy::Undetermined(reason) => pending.push(format!(
                "monodromy conjugacy at {:?} undetermined: {reason}",
                ea.pattern
            )),
        }
    }
    if let Some(first) = pending.into_iter().next() {
        return Ok(IsoAnswer::Undetermined(first));
    }
    Ok(IsoAnswer::Yes)
}

/// Decide isomorphism of two modules over the same field by classifying
/// both and comparing the reports.
pub fn modules_isomorphic(a: &GPModule, b: &GPModule, seed: u64) -> Result<IsoAnswer, Error> {
    if a.ctx != b.ctx {
        return Err(Error::CtxMismatch);
    }
    let ra = classify(a)?;
    let rb = classify(b)?;
    reports_isomorphic(&ra, &rb, seed)
}

/// A summand of the classification, with an indecomposability verdict for
/// circular summands. Linear summands M(Γ(w), 𝟏) are always indecomposable.
#[derive(Clone, Debug)]
pub enum Summand {
    Linear { word: Word },
    Circular {
        pattern: Word,
        dim: usize,
        monodromy: SemilinearMap,
        /// Some(true)/Some(false) when decidable; a circular summand with
        /// σ^twist = id is indecomposable iff its monodromy has a single
        /// elementary divisor (one invariant factor, itself a power of a
        /// single irreducible). None when σ^twist ≠ id and dim > 1, or when
        /// the needed factor count is unavailable over ℚ.
        indecomposable: Option<bool>,
    },
}

pub fn indecomposables(report: &ClassificationReport) -> Vec<Summand> {
    let mut out = Vec::new();
    for (w, mult) in &report.linear {
        for _ in 0..*mult {
            out.push(Summand::Linear { word: w.clone() });
        }
    }
    for e in &report.circular {
        let verdict = if e.dim <= 1 {
            Some(true)
        } else if e.pattern.len() % report.ctx.sigma_order() == 0 {
            let inv = invariant_factors(&e.monodromy.matrix);
            if inv.len() > 1 {
                Some(false)
            } else {
                distinct_irreducible_factors(&report.ctx, &inv[0]).map(|k| k == 1)
            }
        } else {
            None
        };
        out.push(Summand::Circular {
            pattern: e.pattern.clone(),
            dim: e.dim,
            monodromy: e.monodromy.clone(),
            indecomposable: verdict,
        });
    }
    out
}
