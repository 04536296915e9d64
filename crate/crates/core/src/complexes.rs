//! Cube complexes of polynomial modules with operator-word edge maps.
//!
//! The rank-`r` complex has one free module `R(v)` per vertex `v` of the
//! cube `{0,1}^r`, where `R = Z[X] (x) Sym(Y)` with `|X| = |Y| = r`. The
//! vertex carries cohomological degree `t = -sum(v)` and internal shift
//! `q^(2 sum_i i v_i)`. The edge clearing slot `i` of a vertex with
//! `v_i = 1` carries the word
//!
//! ```text
//!   th_i ... th_{r-1}  Q_r  th'_{r-1} ... th'_i
//! ```
//!
//! where `Q_r = e_r(Y - x_r)`, `th_j` is `d_j` when `v_{j+1} = 0` and `s_j`
//! when `v_{j+1} = 1`, and `th'_j` is the complementary choice. Each word
//! therefore contains exactly `r - i` divided differences against one
//! multiplication of q-degree `2r`, so it raises intrinsic q-degree by
//! `2i`, exactly the gap between the shifts of its endpoints.
//!
//! A composition `(r_1, ..., r_m)` of `r` cuts out the subcomplex whose
//! admissible vertices are `(1^{a_1} 0^{r_1-a_1} ... 1^{a_m} 0^{r_m-a_m})`
//! with the Young-symmetric polynomials at each of them; extending scalars
//! by `Sym(Z) (x) Sym(W)` produces the resolution attached to a partition.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::grassmannian::Partition;
use crate::polyalg::{
    divided_difference, e_diff, Alphabet, Atom, BlockName, OperatorWord, Poly,
};
use crate::{Error, Result};

/// A vertex of the cube `{0,1}^r`; `bits[0]` is the coordinate `v_1`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct CubeVertex {
    bits: Vec<bool>,
}

impl CubeVertex {
    pub fn new(bits: Vec<bool>) -> Self {
        CubeVertex { bits }
    }

    pub fn from_u32(code: u32, r: usize) -> Self {
        CubeVertex {
            bits: (0..r).map(|i| code & (1 << i) != 0).collect(),
        }
    }

    pub fn rank(&self) -> usize {
        self.bits.len()
    }

    pub fn bit(&self, i: usize) -> bool {
        self.bits[i - 1]
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// Cohomological degree `-sum(v)`.
    pub fn t_degree(&self) -> i64 {
        -(self.ones() as i64)
    }

    /// Internal shift `2 sum_i i v_i` (1-based positions).
    pub fn q_shift(&self) -> i64 {
        2 * self
            .bits
            .iter()
            .enumerate()
            .filter(|&(_, &b)| b)
            .map(|(i, _)| i as i64 + 1)
            .sum::<i64>()
    }

    pub fn with_bit_cleared(&self, i: usize) -> Self {
        let mut bits = self.bits.clone();
        assert!(bits[i - 1]);
        bits[i - 1] = false;
        CubeVertex { bits }
    }

    pub fn with_bits_swapped(&self, i: usize, j: usize) -> Self {
        let mut bits = self.bits.clone();
        bits.swap(i - 1, j - 1);
        CubeVertex { bits }
    }
}

impl fmt::Display for CubeVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "R(")?;
        for &b in &self.bits {
            write!(f, "{}", if b { '1' } else { '0' })?;
        }
        write!(f, ")")
    }
}

/// A composition `(r_1, ..., r_m)` of `r`; all parts positive.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct CompositionShape {
    parts: Vec<usize>,
}

impl CompositionShape {
    pub fn new(parts: Vec<usize>) -> Self {
        assert!(parts.iter().all(|&p| p >= 1), "composition parts must be positive");
        CompositionShape { parts }
    }

    pub fn ones(r: usize) -> Self {
        CompositionShape {
            parts: vec![1; r],
        }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn r(&self) -> usize {
        self.parts.iter().sum()
    }
}

/// An edge of the cube complex: source vertex, cleared slot, target, word.
#[derive(Clone, Debug)]
pub struct Edge {
    pub source: CubeVertex,
    pub slot: usize,
    pub target: CubeVertex,
    pub word: OperatorWord,
}

/// A complex of polynomial modules on (a subset of) the cube `{0,1}^r`.
#[derive(Clone, Debug)]
pub struct CubeComplex {
    r: usize,
    alphabet: Alphabet,
    shape: CompositionShape,
    context: Option<(usize, usize)>,
    vertices: Vec<CubeVertex>,
    symmetry: BTreeMap<CubeVertex, Vec<usize>>,
    edges: Vec<Edge>,
}

impl CubeComplex {
    pub fn r(&self) -> usize {
        self.r
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn shape(&self) -> &CompositionShape {
        &self.shape
    }

    /// The `(k, N)` context, when built for a partition.
    pub fn context(&self) -> Option<(usize, usize)> {
        self.context
    }

    /// Admissible vertices, in a fixed total order.
    pub fn vertices(&self) -> &[CubeVertex] {
        &self.vertices
    }

    pub fn is_admissible(&self, v: &CubeVertex) -> bool {
        self.symmetry.contains_key(v)
    }

    /// Sizes of the Young blocks acting on consecutive runs of `X`
    /// variables at an admissible vertex (zeros included, in order
    /// `a_1, r_1 - a_1, ..., a_m, r_m - a_m`).
    pub fn young_blocks(&self, v: &CubeVertex) -> &[usize] {
        &self.symmetry[v]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edges_from<'a>(&'a self, v: &'a CubeVertex) -> impl Iterator<Item = &'a Edge> {
        self.edges.iter().filter(move |e| &e.source == v)
    }

    /// Vertices at cohomological degree `t`.
    pub fn vertices_at(&self, t: i64) -> Vec<&CubeVertex> {
        self.vertices.iter().filter(|v| v.t_degree() == t).collect()
    }

    pub fn t_min(&self) -> i64 {
        -(self.r as i64)
    }
}

/// The edge polynomial `Q_r = e_r(Y - x_r)` over the given alphabet.
pub fn edge_polynomial(alpha: &Alphabet) -> Poly {
    let r = alpha.block_size(BlockName::X);
    assert!(r >= 1);
    let ys = alpha.block_vars(BlockName::Y);
    let xr = alpha.var(BlockName::X, r);
    e_diff(alpha.len(), &ys, &[xr], r)
}

/// The word on the edge clearing slot `i` of vertex `v`.
pub fn edge_word(alpha: &Alphabet, v: &CubeVertex, i: usize) -> OperatorWord {
    let r = v.rank();
    assert!(i >= 1 && i <= r && v.bit(i));
    let mut atoms = Vec::with_capacity(2 * (r - i) + 1);
    for j in i..r {
        atoms.push(if v.bit(j + 1) {
            Atom::Transposition(j)
        } else {
            Atom::DividedDifference(j)
        });
    }
    atoms.push(Atom::MultiplyBy(edge_polynomial(alpha)));
    for j in (i..r).rev() {
        atoms.push(if v.bit(j + 1) {
            Atom::DividedDifference(j)
        } else {
            Atom::Transposition(j)
        });
    }
    OperatorWord::new(1, atoms)
}

fn build_with_alphabet(
    shape: CompositionShape,
    alphabet: Alphabet,
    context: Option<(usize, usize)>,
) -> CubeComplex {
    let r = shape.r();
    assert_eq!(alphabet.block_size(BlockName::X), r);
    let mut vertices = Vec::new();
    let mut symmetry = BTreeMap::new();
    // enumerate fill tuples (a_1, ..., a_m), 0 <= a_j <= r_j
    let m = shape.parts().len();
    let mut fills = vec![0usize; m];
    loop {
        let mut bits = Vec::with_capacity(r);
        let mut blocks = Vec::with_capacity(2 * m);
        for (j, &rj) in shape.parts().iter().enumerate() {
            let a = fills[j];
            bits.extend(core::iter::repeat_n(true, a));
            bits.extend(core::iter::repeat_n(false, rj - a));
            blocks.push(a);
            blocks.push(rj - a);
        }
        let v = CubeVertex::new(bits);
        vertices.push(v.clone());
        symmetry.insert(v, blocks);
        // increment the fill tuple
        let mut carry = true;
        for (fill, &cap) in fills.iter_mut().zip(shape.parts()) {
            if *fill < cap {
                *fill += 1;
                carry = false;
                break;
            }
            *fill = 0;
        }
        if m == 0 || carry {
            break;
        }
    }
    vertices.sort();
    let mut edges = Vec::new();
    for v in &vertices {
        for i in 1..=r {
            if !v.bit(i) {
                continue;
            }
            let w = v.with_bit_cleared(i);
            if !symmetry.contains_key(&w) {
                continue;
            }
            edges.push(Edge {
                source: v.clone(),
                slot: i,
                target: w,
                word: edge_word(&alphabet, v, i),
            });
        }
    }
    CubeComplex {
        r,
        alphabet,
        shape,
        context,
        vertices,
        symmetry,
        edges,
    }
}

/// The full cube complex on `{0,1}^r`.
pub fn build_cr(r: usize) -> CubeComplex {
    build_with_alphabet(CompositionShape::ones(r), Alphabet::for_cube(r), None)
}

/// The invariant subcomplex cut out by a composition of `r`.
pub fn build_b(shape: CompositionShape) -> CubeComplex {
    let r = shape.r();
    build_with_alphabet(shape, Alphabet::for_cube(r), None)
}

/// Restricts a composition to an ambient rank, rejecting mismatches.
pub fn build_b_in(shape: CompositionShape, ambient_r: usize) -> Result<CubeComplex> {
    if shape.r() != ambient_r {
        return Err(Error::ShapeMismatch {
            expected: ambient_r,
            got: shape.r(),
        });
    }
    Ok(build_b(shape))
}

/// The regular-sequence member `Q_{r,j}`: `Q_{r,0} = Q_r` and
/// `Q_{r,j} = d_{r-j}(Q_{r,j-1})`. Closed form
/// `e_{r-j}(Y - {x_{r-j}, ..., x_r})`.
pub fn q_sequence(r: usize, j: usize) -> Poly {
    assert!(r >= 1 && j < r);
    let alpha = Alphabet::for_cube(r);
    let mut q = edge_polynomial(&alpha);
    for step in 1..=j {
        q = divided_difference(&alpha, r - step, &q);
    }
    q
}

/// The scalar-extended subcomplex attached to a partition in context
/// `(k, N)`: the composition is the multiplicity sequence of the parts and
/// the alphabet gains `|Z| = k - r`, `|W| = N - k - r`.
pub fn build_f_lambda(lambda: &Partition, k: usize, n: usize) -> Result<CubeComplex> {
    if k == 0 || k >= n {
        return Err(Error::BadContext("need 0 < k < N"));
    }
    let allowed = k.min(n - k);
    if lambda.len() > allowed {
        return Err(Error::TooManyParts {
            allowed,
            got: lambda.len(),
        });
    }
    let shape = CompositionShape::new(lambda.multiplicities());
    let r = shape.r();
    let alphabet = Alphabet::for_context(k, n, r);
    Ok(build_with_alphabet(shape, alphabet, Some((k, n))))
}

/// Human-readable summary line of a complex (vertex, t, q-shift, blocks),
/// used by diagnostics.
pub fn describe_vertex(cx: &CubeComplex, v: &CubeVertex) -> String {
    alloc::format!(
        "{} t={} qshift={} blocks={:?}",
        v,
        v.t_degree(),
        v.q_shift(),
        cx.young_blocks(v)
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyalg::apply_word;
    use num_bigint::BigInt;

    fn word_atoms(w: &OperatorWord) -> Vec<&'static str> {
        w.atoms
            .iter()
            .map(|a| match a {
                Atom::DividedDifference(_) => "d",
                Atom::Transposition(_) => "s",
                Atom::MultiplyBy(_) => "m",
            })
            .collect()
    }

    #[test]
    fn rank_one_edge_is_multiplication() {
        let cx = build_cr(1);
        assert_eq!(cx.edges().len(), 1);
        let e = &cx.edges()[0];
        assert_eq!(word_atoms(&e.word), vec!["m"]);
        // Q_1 = y1 - x1
        let alpha = cx.alphabet();
        let n = alpha.len();
        let y1 = Poly::var(n, alpha.var(BlockName::Y, 1));
        let x1 = Poly::var(n, alpha.var(BlockName::X, 1));
        match &e.word.atoms[0] {
            Atom::MultiplyBy(p) => assert_eq!(p, &y1.sub(&x1)),
            _ => unreachable!(),
        }
    }

    #[test]
    fn rank_two_edge_words() {
        let cx = build_cr(2);
        let v10 = CubeVertex::new(vec![true, false]);
        let e = cx
            .edges_from(&v10)
            .find(|e| e.slot == 1)
            .expect("edge 10 -> 00");
        // d1 Q2 s1
        assert_eq!(word_atoms(&e.word), vec!["d", "m", "s"]);
        assert_eq!(e.word.atoms[0], Atom::DividedDifference(1));
        assert_eq!(e.word.atoms[2], Atom::Transposition(1));
        let v11 = CubeVertex::new(vec![true, true]);
        let e = cx
            .edges_from(&v11)
            .find(|e| e.slot == 1)
            .expect("edge 11 -> 01");
        // s1 Q2 d1
        assert_eq!(word_atoms(&e.word), vec!["s", "m", "d"]);
    }

    #[test]
    fn rank_three_edge_words() {
        let cx = build_cr(3);
        let v111 = CubeVertex::new(vec![true, true, true]);
        let e = cx
            .edges_from(&v111)
            .find(|e| e.slot == 1)
            .expect("edge 111 -> 011");
        // s1 s2 Q3 d2 d1
        assert_eq!(word_atoms(&e.word), vec!["s", "s", "m", "d", "d"]);
        assert_eq!(e.word.atoms[0], Atom::Transposition(1));
        assert_eq!(e.word.atoms[1], Atom::Transposition(2));
        assert_eq!(e.word.atoms[3], Atom::DividedDifference(2));
        assert_eq!(e.word.atoms[4], Atom::DividedDifference(1));
        let v101 = CubeVertex::new(vec![true, false, true]);
        let e = cx
            .edges_from(&v101)
            .find(|e| e.slot == 1)
            .expect("edge 101 -> 001");
        // d1 s2 Q3 d2 s1
        assert_eq!(word_atoms(&e.word), vec!["d", "s", "m", "d", "s"]);
    }

    #[test]
    fn edge_words_are_degree_homogeneous() {
        for r in 1..=4usize {
            let cx = build_cr(r);
            for e in cx.edges() {
                let divided = e
                    .word
                    .atoms
                    .iter()
                    .filter(|a| matches!(a, Atom::DividedDifference(_)))
                    .count();
                assert_eq!(divided, r - e.slot);
                assert_eq!(e.word.q_degree(), 2 * e.slot as i64);
                assert_eq!(
                    e.source.q_shift() - e.target.q_shift(),
                    2 * e.slot as i64
                );
                assert_eq!(e.target.t_degree(), e.source.t_degree() + 1);
            }
        }
    }

    #[test]
    fn subcomplex_vertex_sets() {
        let b = build_b(CompositionShape::new(vec![2]));
        let verts: Vec<String> = b
            .vertices()
            .iter()
            .map(|v| alloc::format!("{}", v))
            .collect();
        assert_eq!(verts, vec!["R(00)", "R(10)", "R(11)"]);
        assert_eq!(b.young_blocks(&CubeVertex::new(vec![false, false])), &[0, 2]);
        assert_eq!(b.young_blocks(&CubeVertex::new(vec![true, true])), &[2, 0]);

        let b21 = build_b(CompositionShape::new(vec![2, 1]));
        assert_eq!(b21.vertices().len(), 6);

        let ones = build_b(CompositionShape::ones(3));
        assert_eq!(ones.vertices().len(), 8);
        assert_eq!(ones.edges().len(), build_cr(3).edges().len());
    }

    #[test]
    fn shape_mismatch_is_rejected() {
        let err = build_b_in(CompositionShape::new(vec![2, 1]), 4).unwrap_err();
        assert_eq!(err, Error::ShapeMismatch { expected: 4, got: 3 });
    }

    #[test]
    fn q_sequence_examples() {
        // Q_{1,0} = y1 - x1
        let q = q_sequence(1, 0);
        let alpha = Alphabet::for_cube(1);
        let n = alpha.len();
        let y1 = Poly::var(n, alpha.var(BlockName::Y, 1));
        let x1 = Poly::var(n, alpha.var(BlockName::X, 1));
        assert_eq!(q, y1.sub(&x1));
        // Q_{2,1} = d1(e_2(Y - x_2)) = e_1(Y) - x1 - x2
        let q = q_sequence(2, 1);
        let alpha = Alphabet::for_cube(2);
        let n = alpha.len();
        let e1y = crate::polyalg::elem_sym(n, &alpha.block_vars(BlockName::Y), 1);
        let x1 = Poly::var(n, alpha.var(BlockName::X, 1));
        let x2 = Poly::var(n, alpha.var(BlockName::X, 2));
        assert_eq!(q, e1y.sub(&x1).sub(&x2));
    }

    #[test]
    fn q_sequence_closed_form() {
        for r in 1..=4usize {
            let alpha = Alphabet::for_cube(r);
            let n = alpha.len();
            let ys = alpha.block_vars(BlockName::Y);
            for j in 0..r {
                let xs: Vec<usize> = (r - j..=r).map(|i| alpha.var(BlockName::X, i)).collect();
                let closed = e_diff(n, &ys, &xs, r - j);
                assert_eq!(q_sequence(r, j), closed, "closed form failed at r={} j={}", r, j);
            }
        }
    }

    #[test]
    fn q_sequence_leading_x_terms_are_coprime() {
        // The top x-degree part of Q_{r,j} is (-1)^{r-j} h_{r-j} of the
        // trailing variables; its graded-lex leading monomial is
        // x_{r-j}^{r-j}. Distinct j give powers of distinct variables.
        for r in 1..=4usize {
            let alpha = Alphabet::for_cube(r);
            let mut leads = Vec::new();
            for j in 0..r {
                let q = q_sequence(r, j);
                let top_x_deg = q
                    .terms()
                    .map(|(m, _)| m.0[..r].iter().map(|&e| e as usize).sum::<usize>())
                    .max()
                    .unwrap();
                let lead = q
                    .terms()
                    .filter(|(m, _)| {
                        m.0[..r].iter().map(|&e| e as usize).sum::<usize>() == top_x_deg
                    })
                    .map(|(m, c)| (m.clone(), c.clone()))
                    .max_by(|a, b| a.0.cmp(&b.0))
                    .unwrap();
                let mut expect = vec![0u16; alpha.len()];
                expect[alpha.var(BlockName::X, r - j)] = (r - j) as u16;
                assert_eq!(lead.0 .0, expect);
                let sign = if (r - j) % 2 == 0 { 1 } else { -1 };
                assert_eq!(lead.1, BigInt::from(sign));
                leads.push(lead.0);
            }
            for a in 0..leads.len() {
                for b in a + 1..leads.len() {
                    let coprime = leads[a]
                        .0
                        .iter()
                        .zip(&leads[b].0)
                        .all(|(&x, &y)| x == 0 || y == 0);
                    assert!(coprime);
                }
            }
        }
    }

    #[test]
    fn f_lambda_shapes() {
        // empty partition: single vertex, alphabet Z, W only
        let f = build_f_lambda(&Partition::new(vec![]), 1, 2).unwrap();
        assert_eq!(f.r(), 0);
        assert_eq!(f.vertices().len(), 1);
        assert!(f.edges().is_empty());
        assert_eq!(f.alphabet().block_size(BlockName::Z), 1);
        assert_eq!(f.alphabet().block_size(BlockName::W), 1);

        // single row: the rank-one complex with empty Z, W
        let f = build_f_lambda(&Partition::new(vec![1]), 1, 2).unwrap();
        assert_eq!(f.r(), 1);
        assert_eq!(f.vertices().len(), 2);
        assert_eq!(f.edges().len(), 1);
        assert_eq!(f.alphabet().block_size(BlockName::Z), 0);
        assert_eq!(f.alphabet().block_size(BlockName::W), 0);

        // square partition: multiplicity shape (2) on r = 2
        let f = build_f_lambda(&Partition::new(vec![2, 2]), 2, 4).unwrap();
        assert_eq!(f.r(), 2);
        assert_eq!(f.vertices().len(), 3);

        // too many parts
        assert!(build_f_lambda(&Partition::new(vec![1, 1]), 1, 3).is_err());
    }

    #[test]
    fn differential_squares_to_zero_on_samples() {
        use crate::nilhecke::{sample_element, SampleParams};
        use rand_chacha::ChaCha8Rng;
        use rand_core::SeedableRng;
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for r in 1..=4usize {
            let cx = build_cr(r);
            let alpha = cx.alphabet();
            for v in cx.vertices() {
                for _ in 0..20 {
                    let p = sample_element(&mut rng, alpha, &SampleParams::default());
                    // apply d twice from vertex v
                    let mut first: BTreeMap<CubeVertex, Poly> = BTreeMap::new();
                    for e in cx.edges_from(v) {
                        let img = apply_word(alpha, &e.word, &p);
                        let entry = first
                            .entry(e.target.clone())
                            .or_insert_with(|| Poly::zero(alpha.len()));
                        *entry = entry.add(&img);
                    }
                    let mut second: BTreeMap<CubeVertex, Poly> = BTreeMap::new();
                    for (w, q) in &first {
                        for e in cx.edges_from(w) {
                            let img = apply_word(alpha, &e.word, q);
                            let entry = second
                                .entry(e.target.clone())
                                .or_insert_with(|| Poly::zero(alpha.len()));
                            *entry = entry.add(&img);
                        }
                    }
                    for (w, q) in &second {
                        assert!(
                            q.is_zero(),
                            "d^2 != 0 at r={} from {} to {}",
                            r,
                            v,
                            w
                        );
                    }
                }
            }
        }
    }
}
