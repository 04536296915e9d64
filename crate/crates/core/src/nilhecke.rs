//! The chain-level action of divided differences and multiplication
//! operators on a cube complex, its symmetrizing idempotents, and a seeded
//! harness for the defining relations.
//!
//! The operators, by components between vertices of `{0,1}^r`:
//!
//! - `Delta_i`: the diagonal `d_i` at vertices with `v_i = v_{i+1}`, the
//!   bare `s_i` on the swap `(v_i, v_{i+1}) = (0,1) -> (1,0)`, zero
//!   otherwise.
//! - `X_i = x_i + xi_i`: multiplication by `x_i` plus an off-diagonal part
//!   `xi_i` that moves a 1 at slot `i` past a 0 at slot `j > i` via
//!   `th_i .. th_{j-2} s_{j-1} th'_{j-2} .. th'_i`, and (with a minus
//!   sign) a 0 at slot `i` past a 1 at slot `j < i`; the `th`/`th'`
//!   letters are read off the source vertex exactly as for the edge words.
//! - `S_i = [Delta_i, X_i]`, an involution generating a symmetric-group
//!   action by chain maps.
//! - `E(shape)`: the product of one symmetrizer per part; idempotent with
//!   image the invariant subcomplex of the shape.
//!
//! `check_relations` applies both sides of every defining identity to
//! seeded random polynomials at every vertex and demands exact equality;
//! any discrepancy is reported with the vertex and a witness.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use rand_core::{RngCore, SeedableRng};

use crate::complexes::{CompositionShape, CubeComplex, CubeVertex};
use crate::polyalg::{apply_word, Alphabet, Atom, BlockName, Mono, OperatorWord, Poly};
use crate::{Error, Result};

/// What an operator is, for diagnostics.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OperatorKind {
    Delta(usize),
    Xi(usize),
    XCap(usize),
    SCap(usize),
    Idempotent(CompositionShape),
    Differential,
    Composite,
}

/// A chain element: finitely many vertices with a polynomial each.
pub type ChainElement = BTreeMap<CubeVertex, Poly>;

/// Adds `p` into `elem[v]`, dropping zero entries.
pub fn element_add(elem: &mut ChainElement, v: &CubeVertex, p: &Poly) {
    if p.is_zero() {
        return;
    }
    match elem.get_mut(v) {
        Some(existing) => {
            *existing = existing.add(p);
            if existing.is_zero() {
                elem.remove(v);
            }
        }
        None => {
            elem.insert(v.clone(), p.clone());
        }
    }
}

pub fn element_sub(a: &ChainElement, b: &ChainElement) -> ChainElement {
    let mut out = a.clone();
    for (v, p) in b {
        element_add(&mut out, v, &p.neg());
    }
    out
}

pub fn element_is_zero(e: &ChainElement) -> bool {
    e.values().all(|p| p.is_zero())
}

/// An endomorphism of the cube complex given by a table of operator-word
/// sums between vertices.
#[derive(Clone, Debug)]
pub struct ChainOperator {
    r: usize,
    alphabet: Alphabet,
    kind: OperatorKind,
    components: BTreeMap<CubeVertex, BTreeMap<CubeVertex, Vec<OperatorWord>>>,
}

impl ChainOperator {
    fn empty(alphabet: Alphabet, r: usize, kind: OperatorKind) -> Self {
        ChainOperator {
            r,
            alphabet,
            kind,
            components: BTreeMap::new(),
        }
    }

    pub fn identity(alphabet: Alphabet, r: usize) -> Self {
        let mut op = ChainOperator::empty(alphabet, r, OperatorKind::Composite);
        for code in 0..(1u32 << r) {
            let v = CubeVertex::from_u32(code, r);
            op.push_component(v.clone(), v, OperatorWord::identity());
        }
        op
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn kind(&self) -> &OperatorKind {
        &self.kind
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn push_component(&mut self, src: CubeVertex, tgt: CubeVertex, word: OperatorWord) {
        self.components
            .entry(src)
            .or_default()
            .entry(tgt)
            .or_default()
            .push(word);
    }

    /// Word sum of the component from `src` to `tgt` (empty when absent).
    pub fn component(&self, src: &CubeVertex, tgt: &CubeVertex) -> &[OperatorWord] {
        self.components
            .get(src)
            .and_then(|m| m.get(tgt))
            .map_or(&[], |w| w.as_slice())
    }

    pub fn components(
        &self,
    ) -> impl Iterator<Item = (&CubeVertex, &CubeVertex, &[OperatorWord])> {
        self.components.iter().flat_map(|(src, tgts)| {
            tgts.iter().map(move |(tgt, words)| (src, tgt, words.as_slice()))
        })
    }

    pub fn apply(&self, elem: &ChainElement) -> ChainElement {
        let mut out = ChainElement::new();
        for (src, p) in elem {
            if p.is_zero() {
                continue;
            }
            debug_assert_eq!(p.n_vars(), self.alphabet.len());
            let Some(targets) = self.components.get(src) else {
                continue;
            };
            for (tgt, words) in targets {
                for w in words {
                    let img = apply_word(&self.alphabet, w, p);
                    element_add(&mut out, tgt, &img);
                }
            }
        }
        out
    }

    /// `self . other` (apply `other` first), as a symbolic word table.
    pub fn compose(&self, other: &ChainOperator) -> ChainOperator {
        debug_assert_eq!(self.r, other.r);
        let mut op = ChainOperator::empty(self.alphabet.clone(), self.r, OperatorKind::Composite);
        for (a, mids) in &other.components {
            for (b, first_words) in mids {
                let Some(tgts) = self.components.get(b) else {
                    continue;
                };
                for (c, second_words) in tgts {
                    for w1 in first_words {
                        for w2 in second_words {
                            op.push_component(a.clone(), c.clone(), w2.compose(w1));
                        }
                    }
                }
            }
        }
        op
    }

    pub fn add(&self, other: &ChainOperator) -> ChainOperator {
        let mut op = self.clone();
        op.kind = OperatorKind::Composite;
        for (src, tgts) in &other.components {
            for (tgt, words) in tgts {
                for w in words {
                    op.push_component(src.clone(), tgt.clone(), w.clone());
                }
            }
        }
        op
    }

    pub fn negated(&self) -> ChainOperator {
        let mut op = ChainOperator::empty(self.alphabet.clone(), self.r, OperatorKind::Composite);
        for (src, tgts) in &self.components {
            for (tgt, words) in tgts {
                for w in words {
                    op.push_component(src.clone(), tgt.clone(), w.negated());
                }
            }
        }
        op
    }

    pub fn sub(&self, other: &ChainOperator) -> ChainOperator {
        self.add(&other.negated())
    }
}

fn theta(v: &CubeVertex, l: usize) -> Atom {
    if v.bit(l + 1) {
        Atom::Transposition(l)
    } else {
        Atom::DividedDifference(l)
    }
}

fn theta_hat(v: &CubeVertex, l: usize) -> Atom {
    if v.bit(l + 1) {
        Atom::DividedDifference(l)
    } else {
        Atom::Transposition(l)
    }
}

/// `Delta_i` on the rank-`r` cube (`1 <= i <= r-1`).
pub fn delta(i: usize, r: usize) -> Result<ChainOperator> {
    delta_in(Alphabet::for_cube(r), i, r)
}

/// `Delta_i` over an explicit alphabet (for scalar-extended complexes).
pub fn delta_in(alphabet: Alphabet, i: usize, r: usize) -> Result<ChainOperator> {
    if i < 1 || i + 1 > r {
        return Err(Error::IndexOutOfRange("delta index must satisfy 1 <= i <= r-1"));
    }
    let mut op = ChainOperator::empty(alphabet, r, OperatorKind::Delta(i));
    for code in 0..(1u32 << r) {
        let v = CubeVertex::from_u32(code, r);
        let (a, b) = (v.bit(i), v.bit(i + 1));
        if a == b {
            op.push_component(
                v.clone(),
                v,
                OperatorWord::new(1, vec![Atom::DividedDifference(i)]),
            );
        } else if !a && b {
            let w = v.with_bits_swapped(i, i + 1);
            op.push_component(v, w, OperatorWord::new(1, vec![Atom::Transposition(i)]));
        }
    }
    Ok(op)
}

fn xi_in(alphabet: Alphabet, i: usize, r: usize, lower_sign: i8) -> Result<ChainOperator> {
    if i < 1 || i > r {
        return Err(Error::IndexOutOfRange("xi index must satisfy 1 <= i <= r"));
    }
    let mut op = ChainOperator::empty(alphabet, r, OperatorKind::Xi(i));
    for code in 0..(1u32 << r) {
        let v = CubeVertex::from_u32(code, r);
        if v.bit(i) {
            // move the 1 at slot i past each 0 at slot j > i
            for j in i + 1..=r {
                if v.bit(j) {
                    continue;
                }
                let w = v.with_bits_swapped(i, j);
                let mut atoms = Vec::new();
                for l in i..j - 1 {
                    atoms.push(theta(&v, l));
                }
                atoms.push(Atom::Transposition(j - 1));
                for l in (i..j - 1).rev() {
                    atoms.push(theta_hat(&v, l));
                }
                op.push_component(v.clone(), w, OperatorWord::new(1, atoms));
            }
        } else {
            // move the 0 at slot i past each 1 at slot j < i, with a sign
            for j in 1..i {
                if !v.bit(j) {
                    continue;
                }
                let w = v.with_bits_swapped(i, j);
                let mut atoms = Vec::new();
                for l in j..i - 1 {
                    atoms.push(theta(&v, l));
                }
                atoms.push(Atom::Transposition(i - 1));
                for l in (j..i - 1).rev() {
                    atoms.push(theta_hat(&v, l));
                }
                op.push_component(v.clone(), w, OperatorWord::new(lower_sign, atoms));
            }
        }
    }
    Ok(op)
}

/// `X_i = x_i + xi_i` on the rank-`r` cube (`1 <= i <= r`).
pub fn x_cap(i: usize, r: usize) -> Result<ChainOperator> {
    x_cap_in(Alphabet::for_cube(r), i, r)
}

/// `X_i` over an explicit alphabet.
pub fn x_cap_in(alphabet: Alphabet, i: usize, r: usize) -> Result<ChainOperator> {
    let mut op = xi_in(alphabet.clone(), i, r, -1)?;
    let xi_var = Poly::var(alphabet.len(), alphabet.var(BlockName::X, i));
    for code in 0..(1u32 << r) {
        let v = CubeVertex::from_u32(code, r);
        op.push_component(
            v.clone(),
            v,
            OperatorWord::new(1, vec![Atom::MultiplyBy(xi_var.clone())]),
        );
    }
    op.kind = OperatorKind::XCap(i);
    Ok(op)
}

/// `X_i` with the sign of the lower off-diagonal family flipped. This is a
/// deliberately wrong operator used to confirm that the relation harness
/// detects a sign error: the twisted Leibniz identities must fail with it.
pub fn x_cap_sign_flipped(i: usize, r: usize) -> Result<ChainOperator> {
    let alphabet = Alphabet::for_cube(r);
    let mut op = xi_in(alphabet.clone(), i, r, 1)?;
    let xi_var = Poly::var(alphabet.len(), alphabet.var(BlockName::X, i));
    for code in 0..(1u32 << r) {
        let v = CubeVertex::from_u32(code, r);
        op.push_component(
            v.clone(),
            v,
            OperatorWord::new(1, vec![Atom::MultiplyBy(xi_var.clone())]),
        );
    }
    op.kind = OperatorKind::XCap(i);
    Ok(op)
}

/// `S_i = [Delta_i, X_i]`; an involution on chain elements.
pub fn s_cap(i: usize, r: usize) -> Result<ChainOperator> {
    if r < 2 || i < 1 || i + 1 > r {
        return Err(Error::IndexOutOfRange("s index must satisfy 1 <= i <= r-1"));
    }
    let d = delta(i, r)?;
    let x = x_cap(i, r)?;
    let mut op = d.compose(&x).sub(&x.compose(&d));
    op.kind = OperatorKind::SCap(i);
    Ok(op)
}

/// The symmetrizing idempotent of a composition, on the cube of rank
/// `shape.r()`: the product of one factor per part, each built from the
/// triangular Delta/X products.
pub fn idempotent_e(shape: &CompositionShape) -> Result<ChainOperator> {
    idempotent_e_in(Alphabet::for_cube(shape.r()), shape)
}

/// The idempotent over an explicit alphabet.
pub fn idempotent_e_in(alphabet: Alphabet, shape: &CompositionShape) -> Result<ChainOperator> {
    let r = shape.r();
    let mut op = ChainOperator::identity(alphabet.clone(), r);
    let mut offset = 0usize;
    for &part in shape.parts() {
        // (Delta_1)(Delta_2 Delta_1)...(X_1)(X_2 X_1)... with indices
        // offset into this part; displayed left to right, applied so that
        // the leftmost factor acts last.
        let mut factors: Vec<ChainOperator> = Vec::new();
        for t in 1..part {
            let mut f = delta_in(alphabet.clone(), offset + t, r)?;
            for l in (1..t).rev() {
                f = f.compose(&delta_in(alphabet.clone(), offset + l, r)?);
            }
            factors.push(f);
        }
        for t in 1..part {
            let mut f = x_cap_in(alphabet.clone(), offset + t, r)?;
            for l in (1..t).rev() {
                f = f.compose(&x_cap_in(alphabet.clone(), offset + l, r)?);
            }
            factors.push(f);
        }
        for f in &factors {
            op = op.compose(f);
        }
        offset += part;
    }
    op.kind = OperatorKind::Idempotent(shape.clone());
    Ok(op)
}

/// The paired factorization of the same idempotent:
/// `(Delta_1 X_1)(Delta_2 X_2 Delta_1 X_1)...` per part. Agrees with
/// `idempotent_e` as an operator.
pub fn idempotent_e_paired(shape: &CompositionShape) -> Result<ChainOperator> {
    let r = shape.r();
    let alphabet = Alphabet::for_cube(r);
    let mut op = ChainOperator::identity(alphabet.clone(), r);
    let mut offset = 0usize;
    for &part in shape.parts() {
        for t in 1..part {
            let mut f = ChainOperator::identity(alphabet.clone(), r);
            for l in (1..=t).rev() {
                f = f.compose(&delta_in(alphabet.clone(), offset + l, r)?);
                f = f.compose(&x_cap_in(alphabet.clone(), offset + l, r)?);
            }
            op = op.compose(&f);
        }
        offset += part;
    }
    op.kind = OperatorKind::Idempotent(shape.clone());
    Ok(op)
}

/// The differential of a cube complex as a chain operator.
pub fn differential(cx: &CubeComplex) -> ChainOperator {
    let mut op = ChainOperator::empty(cx.alphabet().clone(), cx.r(), OperatorKind::Differential);
    for e in cx.edges() {
        op.push_component(e.source.clone(), e.target.clone(), e.word.clone());
    }
    op
}

/// Parameters of the seeded sparse-polynomial sampler.
#[derive(Clone, Copy, Debug)]
pub struct SampleParams {
    pub max_terms: usize,
    pub max_coeff: i64,
    pub max_degree: usize,
}

impl Default for SampleParams {
    fn default() -> Self {
        SampleParams {
            max_terms: 8,
            max_coeff: 9,
            max_degree: 6,
        }
    }
}

fn gen_below(rng: &mut impl RngCore, bound: u64) -> u64 {
    debug_assert!(bound > 0);
    rng.next_u64() % bound
}

/// A random sparse polynomial over the alphabet: up to `max_terms` terms,
/// exponent degree at most `max_degree`, nonzero coefficients in
/// `[-max_coeff, max_coeff]`.
pub fn sample_element(rng: &mut impl RngCore, alpha: &Alphabet, params: &SampleParams) -> Poly {
    let n = alpha.len();
    let terms = 1 + gen_below(rng, params.max_terms as u64) as usize;
    let mut out = Vec::with_capacity(terms);
    for _ in 0..terms {
        let mut exps = vec![0u16; n];
        if n > 0 {
            let d = gen_below(rng, params.max_degree as u64 + 1);
            for _ in 0..d {
                exps[gen_below(rng, n as u64) as usize] += 1;
            }
        }
        let mag = 1 + gen_below(rng, params.max_coeff as u64) as i64;
        let coeff = if gen_below(rng, 2) == 0 { mag } else { -mag };
        out.push((Mono(exps), BigInt::from(coeff)));
    }
    Poly::from_terms(n, out)
}

/// Outcome of one relation check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RelationStatus {
    Pass,
    Fail { vertex: String, witness: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationReport {
    pub relation: String,
    pub r: usize,
    pub samples: usize,
    pub status: RelationStatus,
}

impl RelationReport {
    pub fn passed(&self) -> bool {
        self.status == RelationStatus::Pass
    }
}

struct RelationSpec<'a> {
    name: String,
    lhs: Vec<(i8, Vec<&'a ChainOperator>)>,
    rhs: Vec<(i8, Vec<&'a ChainOperator>)>,
}

fn eval_terms(terms: &[(i8, Vec<&ChainOperator>)], e: &ChainElement) -> ChainElement {
    let mut out = ChainElement::new();
    for (sign, chain) in terms {
        let mut cur = e.clone();
        for op in chain.iter().rev() {
            cur = op.apply(&cur);
        }
        for (v, p) in &cur {
            let p = if *sign < 0 { p.neg() } else { p.clone() };
            element_add(&mut out, v, &p);
        }
    }
    out
}

fn run_relations(
    r: usize,
    samples: usize,
    seed: u64,
    specs: &[RelationSpec<'_>],
    alpha: &Alphabet,
) -> Vec<RelationReport> {
    let params = SampleParams::default();
    let mut out = Vec::with_capacity(specs.len());
    for spec in specs {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut status = RelationStatus::Pass;
        'outer: for code in 0..(1u32 << r) {
            let v = CubeVertex::from_u32(code, r);
            for _ in 0..samples {
                let p = sample_element(&mut rng, alpha, &params);
                let mut e = ChainElement::new();
                element_add(&mut e, &v, &p);
                let lhs = eval_terms(&spec.lhs, &e);
                let rhs = eval_terms(&spec.rhs, &e);
                if !element_is_zero(&element_sub(&lhs, &rhs)) {
                    status = RelationStatus::Fail {
                        vertex: format!("{}", v),
                        witness: format!("{}", p.display(alpha)),
                    };
                    break 'outer;
                }
            }
        }
        out.push(RelationReport {
            relation: spec.name.clone(),
            r,
            samples,
            status,
        });
    }
    out
}

fn build_specs<'a>(
    r: usize,
    d: &'a ChainOperator,
    deltas: &'a [ChainOperator],
    xs: &'a [ChainOperator],
) -> Vec<RelationSpec<'a>> {
    let mut specs = Vec::new();
    let dl = |i: usize| -> &'a ChainOperator { &deltas[i - 1] };
    let xc = |i: usize| -> &'a ChainOperator { &xs[i - 1] };
    for i in 1..r {
        specs.push(RelationSpec {
            name: format!("[d, Delta_{}] = 0", i),
            lhs: vec![(1, vec![d, dl(i)])],
            rhs: vec![(1, vec![dl(i), d])],
        });
    }
    for i in 1..=r {
        specs.push(RelationSpec {
            name: format!("[d, X_{}] = 0", i),
            lhs: vec![(1, vec![d, xc(i)])],
            rhs: vec![(1, vec![xc(i), d])],
        });
    }
    for i in 1..=r {
        for j in i + 1..=r {
            specs.push(RelationSpec {
                name: format!("[X_{}, X_{}] = 0", i, j),
                lhs: vec![(1, vec![xc(i), xc(j)])],
                rhs: vec![(1, vec![xc(j), xc(i)])],
            });
        }
    }
    for i in 1..r {
        specs.push(RelationSpec {
            name: format!("Delta_{}^2 = 0", i),
            lhs: vec![(1, vec![dl(i), dl(i)])],
            rhs: vec![],
        });
    }
    for i in 1..r.saturating_sub(1) {
        specs.push(RelationSpec {
            name: format!("Delta_{} Delta_{} Delta_{} braid", i, i + 1, i),
            lhs: vec![(1, vec![dl(i), dl(i + 1), dl(i)])],
            rhs: vec![(1, vec![dl(i + 1), dl(i), dl(i + 1)])],
        });
    }
    for i in 1..r {
        for j in i + 2..r {
            specs.push(RelationSpec {
                name: format!("[Delta_{}, Delta_{}] = 0", i, j),
                lhs: vec![(1, vec![dl(i), dl(j)])],
                rhs: vec![(1, vec![dl(j), dl(i)])],
            });
        }
    }
    for i in 1..r {
        specs.push(RelationSpec {
            name: format!("Delta_{} X_{} = 1 + X_{} Delta_{}", i, i, i + 1, i),
            lhs: vec![(1, vec![dl(i), xc(i)])],
            rhs: vec![(1, vec![]), (1, vec![xc(i + 1), dl(i)])],
        });
        specs.push(RelationSpec {
            name: format!("Delta_{} X_{} = -1 + X_{} Delta_{}", i, i + 1, i, i),
            lhs: vec![(1, vec![dl(i), xc(i + 1)])],
            rhs: vec![(-1, vec![]), (1, vec![xc(i), dl(i)])],
        });
    }
    for i in 1..r {
        for j in 1..=r {
            if j == i || j == i + 1 {
                continue;
            }
            specs.push(RelationSpec {
                name: format!("[Delta_{}, X_{}] = 0", i, j),
                lhs: vec![(1, vec![dl(i), xc(j)])],
                rhs: vec![(1, vec![xc(j), dl(i)])],
            });
        }
    }
    specs
}

/// Runs every defining relation of the chain action on `samples` seeded
/// random polynomials per vertex per relation. All must hold exactly.
pub fn check_relations(r: usize, samples: usize, seed: u64) -> Vec<RelationReport> {
    let cx = crate::complexes::build_cr(r);
    let alpha = cx.alphabet().clone();
    let d = differential(&cx);
    let deltas: Vec<ChainOperator> = (1..r).map(|i| delta(i, r).unwrap()).collect();
    let xs: Vec<ChainOperator> = (1..=r).map(|i| x_cap(i, r).unwrap()).collect();
    let specs = build_specs(r, &d, &deltas, &xs);
    run_relations(r, samples, seed, &specs, &alpha)
}

/// Same harness with the sign-flipped `X_i`; the twisted Leibniz checks
/// must fail, confirming the harness detects wrong signs.
pub fn check_relations_with_flipped_xi(r: usize, samples: usize, seed: u64) -> Vec<RelationReport> {
    let cx = crate::complexes::build_cr(r);
    let alpha = cx.alphabet().clone();
    let d = differential(&cx);
    let deltas: Vec<ChainOperator> = (1..r).map(|i| delta(i, r).unwrap()).collect();
    let xs: Vec<ChainOperator> = (1..=r)
        .map(|i| x_cap_sign_flipped(i, r).unwrap())
        .collect();
    let specs = build_specs(r, &d, &deltas, &xs);
    run_relations(r, samples, seed, &specs, &alpha)
}
