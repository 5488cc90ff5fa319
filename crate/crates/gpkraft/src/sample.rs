//! Seeded random corpus generation and round-trip verification.
//!
//! Used by the CLI `random` and `selftest` commands and by the acceptance
//! suite: draw random Kraft quivers with strict representations, build the
//! module, classify it, and check the report against the source data.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::classify::{classify, ClassificationReport};
use crate::field::Ctx;
use crate::linalg::Matrix;
use crate::quiver::{KraftQuiver, LabeledGraph, Letter, ShapeWord, Word};
use crate::repn::{
    module_of, monodromy, semilinear_conjugate, unreduce_transport, Conjugacy, Monodromy,
    Representation,
};
use crate::Error;

/// Corpus shape limits (defaults match the desk-scale verification corpus).
#[derive(Clone, Copy, Debug)]
pub struct CorpusParams {
    pub max_components: usize,
    pub max_component_vertices: usize,
    pub max_total_dim: usize,
    pub max_rep_dim: usize,
}

impl Default for CorpusParams {
    fn default() -> CorpusParams {
        CorpusParams {
            max_components: 6,
            max_component_vertices: 6,
            max_total_dim: 16,
            max_rep_dim: 3,
        }
    }
}

/// A uniformly random invertible d×d matrix (rejection sampling; the
/// invertible fraction over GF(q) is at least ∏(1 − q⁻ʲ) > 0.288).
pub fn random_invertible<R: Rng + ?Sized>(ctx: &Ctx, d: usize, rng: &mut R) -> Matrix {
    loop {
        let mut m = Matrix::zeros(ctx, d, d);
        for i in 0..d {
            for j in 0..d {
                m[(i, j)] = ctx.random_elem(rng);
            }
        }
        if m.is_invertible() {
            return m;
        }
    }
}

fn random_word<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Word {
    Word(
        (0..len)
            .map(|_| if rng.gen::<bool>() { Letter::F } else { Letter::V })
            .collect(),
    )
}

/// A random instance of the verification corpus: a Kraft quiver with
/// pairwise non-isomorphic components (distinct linear words / circular
/// patterns, repetition-free cycles) and a strict random representation.
pub fn random_instance<R: Rng + ?Sized>(
    ctx: &Ctx,
    params: &CorpusParams,
    rng: &mut R,
) -> (KraftQuiver, Representation) {
    loop {
        let n_components = rng.gen_range(1..=params.max_components);
        let mut shapes: Vec<(ShapeWord, usize)> = Vec::new();
        let mut budget = params.max_total_dim;
        for _ in 0..n_components {
            // a fresh shape and rank fitting the remaining dimension budget
            for _attempt in 0..40 {
                let circular = rng.gen::<bool>();
                let shape = if circular {
                    let t = rng.gen_range(1..=params.max_component_vertices);
                    let w = random_word(t, rng).canonical_rotation();
                    if !w.is_primitive() {
                        continue;
                    }
                    ShapeWord::Circular { pattern: w, m: t }
                } else {
                    let len = rng.gen_range(0..params.max_component_vertices);
                    ShapeWord::Linear(random_word(len, rng))
                };
                let room = budget / shape.dim_hint();
                if room == 0 || shapes.iter().any(|(s, _)| *s == shape) {
                    continue;
                }
                let d = rng.gen_range(1..=params.max_rep_dim.min(room));
                budget -= shape.dim_hint() * d;
                shapes.push((shape, d));
                break;
            }
        }
        if shapes.is_empty() {
            continue;
        }
        // attach a strict representation of uniform dimension per component
        let mut acc: Option<(KraftQuiver, Representation)> = None;
        for (shape, d) in &shapes {
            let d = *d;
            let quiver = match shape {
                ShapeWord::Linear(w) => crate::quiver::quiver_of_word(w),
                ShapeWord::Circular { pattern, m } => {
                    crate::quiver::quiver_of_periodic(pattern, *m)
                        .expect("sampled pattern is primitive")
                }
            };
            let dims = vec![d; quiver.n_vertices()];
            let maps: Vec<Matrix> = quiver
                .graph()
                .edges
                .iter()
                .map(|_| random_invertible(ctx, d, rng))
                .collect();
            let rep = Representation::new(ctx, quiver.graph().clone(), dims, maps)
                .expect("sampled representation has matching shapes");
            acc = Some(match acc {
                None => (quiver, rep),
                Some((_, prev)) => {
                    let rep = Representation::direct_sum(&prev, &rep);
                    let quiver = KraftQuiver::new(rep.graph.clone())
                        .expect("disjoint union of Kraft quivers is Kraft");
                    (quiver, rep)
                }
            });
        }
        if let Some(pair) = acc {
            return pair;
        }
    }
}

/// Seeded corpus of `count` instances.
pub fn random_corpus(
    ctx: &Ctx,
    params: &CorpusParams,
    count: usize,
    seed: u64,
) -> Vec<(KraftQuiver, Representation)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| random_instance(ctx, params, &mut rng))
        .collect()
}

/// The classification data a strict representation must produce:
/// aggregated (word, multiplicity) pairs for linear components and
/// (pattern, section dimension, monodromy at the canonical start) for
/// circular ones — computed directly from the representation, without
/// building the module.
pub struct ExpectedReport {
    pub linear: Vec<(Word, usize)>,
    pub circular: Vec<(Word, usize, Monodromy)>,
}

/// Extract a single component as a standalone quiver + representation.
fn component_subrep(
    quiver: &KraftQuiver,
    rep: &Representation,
    comp_index: usize,
) -> Result<(KraftQuiver, Representation), Error> {
    let comp = &quiver.components()[comp_index];
    let mut g = LabeledGraph::new();
    for &v in &comp.vertex_order {
        g.add_vertex(quiver.graph().vertices[v].clone());
    }
    let local = |v: usize| {
        comp.vertex_order
            .iter()
            .position(|&x| x == v)
            .expect("component edge endpoint inside component")
    };
    let mut maps = Vec::new();
    for &e in &comp.edge_order {
        let edge = &quiver.graph().edges[e];
        g.add_edge(local(edge.tail), local(edge.head), edge.label);
        maps.push(rep.maps[e].clone());
    }
    let dims: Vec<usize> = comp.vertex_order.iter().map(|&v| rep.dims[v]).collect();
    let sub = Representation::new(&rep.ctx, g.clone(), dims, maps)?;
    Ok((KraftQuiver::new(g)?, sub))
}

pub fn expected_report(
    quiver: &KraftQuiver,
    rep: &Representation,
) -> Result<ExpectedReport, Error> {
    if !rep.is_strict() {
        return Err(Error::Invalid(
            "round-trip verification requires a strict representation".into(),
        ));
    }
    let mut linear: Vec<(Word, usize)> = Vec::new();
    let mut circular: Vec<(Word, usize, Monodromy)> = Vec::new();
    for (ci, comp) in quiver.components().iter().enumerate() {
        match &comp.shape {
            ShapeWord::Linear(w) => {
                // strict reps split: M(Γ(w), ρ) ≅ M(Γ(w), 𝟏)^d
                let d = rep.dims[comp.vertex_order[0]];
                match linear.iter_mut().find(|(x, _)| x == w) {
                    Some((_, mult)) => *mult += d,
                    None => linear.push((w.clone(), d)),
                }
            }
            ShapeWord::Circular { pattern, m } => {
                let (q1, r1) = component_subrep(quiver, rep, ci)?;
                // collapse repeated cycles to the primitive period
                let (q1, r1) = if *m > pattern.len() {
                    unreduce_transport(&q1, &r1)?
                } else {
                    (q1, r1)
                };
                let comp1 = &q1.components()[0];
                let mono = monodromy(&r1, comp1, 0)?;
                let d = mono.dim();
                circular.push((pattern.clone(), d, mono));
            }
        }
    }
    linear.sort_by_key(|(w, _)| (w.len(), w.clone()));
    circular.sort_by_key(|(p, _, _)| (p.len(), p.clone()));
    Ok(ExpectedReport { linear, circular })
}

/// Build the module of the representation, classify it, and compare with
/// the expected data. Returns the report on success, a diagnostic string on
/// mismatch. Monodromy conjugacy is decided exactly; the rare bounded-search
/// exhaustion surfaces as an Err string mentioning "undetermined".
pub fn round_trip_check(
    quiver: &KraftQuiver,
    rep: &Representation,
    seed: u64,
) -> Result<ClassificationReport, String> {
    let expected = expected_report(quiver, rep).map_err(|e| e.to_string())?;
    let built = module_of(rep).map_err(|e| e.to_string())?;
    let report = classify(&built.module).map_err(|e| e.to_string())?;
    let mut got_linear = report.linear.clone();
    got_linear.sort_by_key(|(w, _)| (w.len(), w.clone()));
    if got_linear != expected.linear {
        return Err(format!(
            "linear parts differ: classified {:?}, expected {:?}",
            got_linear, expected.linear
        ));
    }
    if report.circular.len() != expected.circular.len() {
        return Err(format!(
            "circular counts differ: classified {}, expected {}",
            report.circular.len(),
            expected.circular.len()
        ));
    }
    let mut got_circular = report.circular.clone();
    got_circular.sort_by_key(|e| (e.pattern.len(), e.pattern.clone()));
    for (i, (entry, (pattern, d, mono))) in
        got_circular.iter().zip(&expected.circular).enumerate()
    {
        if entry.pattern != *pattern {
            return Err(format!(
                "circular pattern differs: classified {:?}, expected {pattern:?}",
                entry.pattern
            ));
        }
        if entry.dim != *d {
            return Err(format!(
                "circular dimension at {pattern:?} differs: classified {}, expected {d}",
                entry.dim
            ));
        }
        match semilinear_conjugate(&entry.monodromy, &mono.op, seed.wrapping_add(i as u64))
            .map_err(|e| e.to_string())?
        {
            Conjugacy::Yes(_) => {}
            Conjugacy::No(reason) => {
                return Err(format!(
                    "monodromy at {pattern:?} not conjugate to the source: {reason}"
                ))
            }
            Conjugacy::Undetermined(reason) => {
                return Err(format!(
                    "monodromy conjugacy at {pattern:?} undetermined: {reason}"
                ))
            }
        }
    }
    Ok(report)
}

/// Convenience used by selftest and acceptance: the quiver recovered from a
/// report, as a labeled graph (disjoint union of the summand quivers).
pub fn recovered_graph(report: &ClassificationReport) -> LabeledGraph {
    let mut g = LabeledGraph::new();
    let mut add = |other: &LabeledGraph| {
        let offset = g.n_vertices();
        for name in &other.vertices {
            g.add_vertex(format!("{}_{}", offset, name));
        }
        for e in &other.edges {
            g.add_edge(e.tail + offset, e.head + offset, e.label);
        }
    };
    for (w, mult) in &report.linear {
        for _ in 0..*mult {
            add(crate::quiver::quiver_of_word(w).graph());
        }
    }
    for entry in &report.circular {
        let q = crate::quiver::quiver_of_periodic(&entry.pattern, entry.pattern.len())
            .expect("report patterns are primitive");
        add(q.graph());
    }
    g
}

/// A random σ-linear relation: span of up to 2n random twisted pairs.
pub fn random_relation<R: Rng + ?Sized>(
    ctx: &Ctx,
    ambient: usize,
    rng: &mut R,
) -> crate::semilinear::SigmaRelation {
    let twist = rng.gen_range(-2..=2i64);
    let k = rng.gen_range(0..=2 * ambient);
    let pairs: Vec<(Vec<crate::field::FieldElem>, Vec<crate::field::FieldElem>)> = (0..k)
        .map(|_| {
            (
                (0..ambient).map(|_| ctx.random_elem(rng)).collect(),
                (0..ambient).map(|_| ctx.random_elem(rng)).collect(),
            )
        })
        .collect();
    crate::semilinear::SigmaRelation::from_generators(ctx, ambient, twist, &pairs)
}

fn random_square<R: Rng + ?Sized>(ctx: &Ctx, d: usize, rng: &mut R) -> Matrix {
    let mut m = Matrix::zeros(ctx, d, d);
    for i in 0..d {
        for j in 0..d {
            m[(i, j)] = ctx.random_elem(rng);
        }
    }
    m
}

/// The relation-algebra law suite on random relations: involution,
/// contravariance, unit laws, functoriality of graphs, Dom(B#) = Im(B),
/// the four composition monotonicity inclusions, and the rank identity
/// dim Dom − dim Ker = dim Im − dim Indet. Returns failure diagnostics.
pub fn relation_law_suite(ctx: &Ctx, samples: usize, max_dim: usize, seed: u64) -> Vec<String> {
    use crate::semilinear::{SemilinearMap, SigmaRelation};
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    let eq = |a: &SigmaRelation, b: &SigmaRelation| a.is_sub_relation(b) && b.is_sub_relation(a);
    for i in 0..samples {
        let n = rng.gen_range(1..=max_dim);
        let b = random_relation(ctx, n, &mut rng);
        let b2 = random_relation(ctx, n, &mut rng);
        let mut fail = |law: &str| failures.push(format!("sample {i} (dim {n}): {law}"));
        if !eq(&b.converse().converse(), &b) {
            fail("(B#)# = B");
        }
        if !eq(
            &SigmaRelation::compose(&b2, &b).converse(),
            &SigmaRelation::compose(&b.converse(), &b2.converse()),
        ) {
            fail("(B₂B₁)# = B₁#B₂#");
        }
        let one = SigmaRelation::one(ctx, n);
        if !eq(&SigmaRelation::compose(&one, &b), &b)
            || !eq(&SigmaRelation::compose(&b, &one), &b)
        {
            fail("𝟏B = B𝟏 = B");
        }
        let f = SemilinearMap::new(random_square(ctx, n, &mut rng), rng.gen_range(-1..=1));
        let g = SemilinearMap::new(random_square(ctx, n, &mut rng), rng.gen_range(-1..=1));
        if !eq(
            &SigmaRelation::compose(
                &SigmaRelation::graph_of(&g),
                &SigmaRelation::graph_of(&f),
            ),
            &SigmaRelation::graph_of(&g.compose(&f)),
        ) {
            fail("Γ_g Γ_f = Γ_{g∘f}");
        }
        if b.converse().dom() != b.im() {
            fail("Dom(B#) = Im(B)");
        }
        let b21 = SigmaRelation::compose(&b2, &b);
        let b12 = SigmaRelation::compose(&b, &b2);
        if !b.dom().contains(&b21.dom()) {
            fail("Dom(B₂B₁) ⊆ Dom(B₁)");
        }
        if !b21.ker().contains(&b.ker()) {
            fail("Ker(B₁) ⊆ Ker(B₂B₁)");
        }
        if !b.im().contains(&b12.im()) {
            fail("Im(B₁B₂) ⊆ Im(B₁)");
        }
        if !b12.indet().contains(&b.indet()) {
            fail("Indet(B₁) ⊆ Indet(B₁B₂)");
        }
        let (dom, ker, im, indet) = b.parts();
        if dom.dim() - ker.dim() != im.dim() - indet.dim() {
            fail("dim Dom − dim Ker = dim Im − dim Indet");
        }
    }
    failures
}

/// Self-check outcome used by the CLI selftest table.
pub struct SelfCheck {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

/// Round-trip a seeded corpus; returns (pass count, failures).
pub fn corpus_round_trip(
    ctx: &Ctx,
    params: &CorpusParams,
    count: usize,
    seed: u64,
) -> (usize, Vec<String>) {
    let corpus = random_corpus(ctx, params, count, seed);
    let mut passed = 0;
    let mut failures = Vec::new();
    for (i, (quiver, rep)) in corpus.iter().enumerate() {
        match round_trip_check(quiver, rep, seed.wrapping_add(1000 + i as u64)) {
            Ok(report) => {
                passed += 1;
                // recovered quiver must be isomorphic to the source
                if let Ok(rq) = KraftQuiver::new(recovered_graph(&report)) {
                    // multiplicities expand linear components, so compare
                    // component shape multisets instead of raw graphs
                    let mut a: Vec<String> =
                        rq.shapes().iter().map(|s| s.show()).collect();
                    let mut b: Vec<String> = Vec::new();
                    for comp in quiver.components() {
                        match &comp.shape {
                            ShapeWord::Linear(w) => {
                                let d = rep.dims[comp.vertex_order[0]];
                                for _ in 0..d {
                                    b.push(ShapeWord::Linear(w.clone()).show());
                                }
                            }
                            ShapeWord::Circular { pattern, .. } => b.push(
                                ShapeWord::Circular {
                                    pattern: pattern.clone(),
                                    m: pattern.len(),
                                }
                                .show(),
                            ),
                        }
                    }
                    a.sort();
                    b.sort();
                    if a != b {
                        passed -= 1;
                        failures.push(format!(
                            "instance {i}: recovered shapes {a:?} differ from source {b:?}"
                        ));
                    }
                }
            }
            Err(e) => failures.push(format!("instance {i}: {e}")),
        }
    }
    (passed, failures)
}
