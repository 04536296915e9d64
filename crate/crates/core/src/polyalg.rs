//! Sparse multivariate polynomials over `Z` on a blocked alphabet, with
//! symmetric-function constructors and divided-difference operator words.
//!
//! Variables live in four named blocks `X`, `Y`, `Z`, `W`, globally indexed
//! in that order. Every variable has q-degree 2, so a monomial of exponent
//! degree `d` has q-degree `2d`. Coefficients are arbitrary-precision
//! integers and terms are kept in graded-lex order on the global index, so
//! equal polynomials have identical representations.
//!
//! Operator words are signed composites of three atoms:
//! - `d_i`, the divided difference `(id - s_i)/(x_i - x_{i+1})`,
//! - `s_i`, the transposition of `x_i` and `x_{i+1}`,
//! - multiplication by a fixed polynomial.
//!
//! `d_i` is computed termwise by the telescoping identity
//! `(u^a v^b - u^b v^a)/(u - v) = sum u^c v^d` over `c + d = a + b - 1`
//! with exponents strictly between, so no polynomial division is performed.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// The four variable blocks, in global order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum BlockName {
    X,
    Y,
    Z,
    W,
}

/// An ordered list of variable blocks with sizes; fixes the global indexing
/// of variables for every polynomial built over it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alphabet {
    blocks: Vec<(BlockName, usize)>,
}

impl Alphabet {
    pub fn new(blocks: Vec<(BlockName, usize)>) -> Self {
        Alphabet { blocks }
    }

    /// Alphabet of a bare rank-`r` cube complex: `|X| = |Y| = r`.
    pub fn for_cube(r: usize) -> Self {
        Alphabet::new(vec![(BlockName::X, r), (BlockName::Y, r)])
    }

    /// Alphabet for a context `(k, N)` with `r` marked variables:
    /// `|X| = |Y| = r`, `|Z| = k - r`, `|W| = N - k - r`, total `N`.
    pub fn for_context(k: usize, n: usize, r: usize) -> Self {
        assert!(r <= k && k + r <= n, "block sizes must be nonnegative");
        Alphabet::new(vec![
            (BlockName::X, r),
            (BlockName::Y, r),
            (BlockName::Z, k - r),
            (BlockName::W, n - k - r),
        ])
    }

    /// Total number of variables.
    pub fn len(&self) -> usize {
        self.blocks.iter().map(|&(_, s)| s).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn block_size(&self, name: BlockName) -> usize {
        self.blocks
            .iter()
            .find(|&&(b, _)| b == name)
            .map_or(0, |&(_, s)| s)
    }

    fn block_start(&self, name: BlockName) -> usize {
        let mut start = 0;
        for &(b, s) in &self.blocks {
            if b == name {
                return start;
            }
            start += s;
        }
        start
    }

    /// Global 0-based index of the `i`-th (1-based) variable of a block.
    pub fn var(&self, name: BlockName, i: usize) -> usize {
        assert!(
            i >= 1 && i <= self.block_size(name),
            "variable index out of range"
        );
        self.block_start(name) + i - 1
    }

    /// Global indices of an entire block.
    pub fn block_vars(&self, name: BlockName) -> Vec<usize> {
        let start = self.block_start(name);
        (start..start + self.block_size(name)).collect()
    }

    pub fn var_name(&self, global: usize) -> String {
        let mut start = 0;
        for &(b, s) in &self.blocks {
            if global < start + s {
                let letter = match b {
                    BlockName::X => 'x',
                    BlockName::Y => 'y',
                    BlockName::Z => 'z',
                    BlockName::W => 'w',
                };
                return alloc::format!("{}{}", letter, global - start + 1);
            }
            start += s;
        }
        alloc::format!("v{}", global + 1)
    }
}

/// Exponent vector, one entry per variable of the ambient alphabet.
///
/// Ordered graded-lexicographically: first by total degree, then lex on the
/// exponent vector with the earliest variable most significant.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mono(pub Vec<u16>);

impl Mono {
    pub fn constant(n_vars: usize) -> Self {
        Mono(vec![0; n_vars])
    }

    pub fn var(n_vars: usize, idx: usize) -> Self {
        let mut e = vec![0; n_vars];
        e[idx] = 1;
        Mono(e)
    }

    pub fn degree(&self) -> usize {
        self.0.iter().map(|&e| e as usize).sum()
    }

    pub fn mul(&self, other: &Mono) -> Mono {
        debug_assert_eq!(self.0.len(), other.0.len());
        Mono(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(&a, &b)| a.checked_add(b).expect("exponent overflow"))
                .collect(),
        )
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Mono {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

/// Sparse polynomial with integer coefficients.
///
/// Terms are sorted ascending in the monomial order and never carry a zero
/// coefficient, so `==` is semantic equality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    n_vars: usize,
    terms: Vec<(Mono, BigInt)>,
}

impl Poly {
    pub fn zero(n_vars: usize) -> Self {
        Poly {
            n_vars,
            terms: Vec::new(),
        }
    }

    pub fn one(n_vars: usize) -> Self {
        Poly::constant(n_vars, BigInt::one())
    }

    pub fn constant(n_vars: usize, c: BigInt) -> Self {
        if c.is_zero() {
            Poly::zero(n_vars)
        } else {
            Poly {
                n_vars,
                terms: vec![(Mono::constant(n_vars), c)],
            }
        }
    }

    pub fn var(n_vars: usize, idx: usize) -> Self {
        Poly {
            n_vars,
            terms: vec![(Mono::var(n_vars, idx), BigInt::one())],
        }
    }

    pub fn monomial(n_vars: usize, mono: Mono, c: BigInt) -> Self {
        assert_eq!(mono.0.len(), n_vars);
        if c.is_zero() {
            Poly::zero(n_vars)
        } else {
            Poly {
                n_vars,
                terms: vec![(mono, c)],
            }
        }
    }

    pub fn from_terms(n_vars: usize, terms: impl IntoIterator<Item = (Mono, BigInt)>) -> Self {
        let mut acc: BTreeMap<Mono, BigInt> = BTreeMap::new();
        for (m, c) in terms {
            assert_eq!(m.0.len(), n_vars);
            let entry = acc.entry(m).or_insert_with(BigInt::zero);
            *entry += c;
        }
        Poly {
            n_vars,
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &BigInt)> {
        self.terms.iter().map(|(m, c)| (m, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Leading term in graded-lex order, if any.
    pub fn leading_term(&self) -> Option<(&Mono, &BigInt)> {
        self.terms.last().map(|(m, c)| (m, c))
    }

    /// Total exponent degree if homogeneous (`None` for 0 or inhomogeneous).
    pub fn homogeneous_degree(&self) -> Option<usize> {
        let mut degs = self.terms.iter().map(|(m, _)| m.degree());
        let d = degs.next()?;
        degs.all(|e| e == d).then_some(d)
    }

    /// q-degree of a homogeneous polynomial: twice the exponent degree.
    pub fn q_degree(&self) -> Option<i64> {
        self.homogeneous_degree().map(|d| 2 * d as i64)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        debug_assert_eq!(self.n_vars, other.n_vars);
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            match self.terms[i].0.cmp(&other.terms[j].0) {
                Ordering::Less => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(other.terms[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let c = &self.terms[i].1 + &other.terms[j].1;
                    if !c.is_zero() {
                        out.push((self.terms[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        out.extend_from_slice(&other.terms[j..]);
        Poly {
            n_vars: self.n_vars,
            terms: out,
        }
    }

    pub fn neg(&self) -> Poly {
        Poly {
            n_vars: self.n_vars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &BigInt) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.n_vars);
        }
        Poly {
            n_vars: self.n_vars,
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    /// Adds `c * mono * other` into `self` (in-place accumulate helper).
    fn accumulate(acc: &mut BTreeMap<Mono, BigInt>, poly: &Poly, mono: &Mono, c: &BigInt) {
        for (m, k) in &poly.terms {
            let prod = m.mul(mono);
            let entry = acc.entry(prod).or_insert_with(BigInt::zero);
            *entry += k * c;
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        debug_assert_eq!(self.n_vars, other.n_vars);
        let mut acc: BTreeMap<Mono, BigInt> = BTreeMap::new();
        let (small, large) = if self.terms.len() <= other.terms.len() {
            (self, other)
        } else {
            (other, self)
        };
        for (m, c) in &small.terms {
            Poly::accumulate(&mut acc, large, m, c);
        }
        Poly {
            n_vars: self.n_vars,
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn mul_mono(&self, mono: &Mono, c: &BigInt) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.n_vars);
        }
        Poly {
            n_vars: self.n_vars,
            terms: self
                .terms
                .iter()
                .map(|(m, k)| (m.mul(mono), k * c))
                .collect(),
        }
    }

    /// Renders terms leading-first as `c*x1^a1*...`; the zero polynomial
    /// prints as `0`. Used for frozen test fixtures and reports.
    pub fn display<'a>(&'a self, alpha: &'a Alphabet) -> PolyDisplay<'a> {
        PolyDisplay { poly: self, alpha }
    }
}

pub struct PolyDisplay<'a> {
    poly: &'a Poly,
    alpha: &'a Alphabet,
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.poly.terms.iter().rev().enumerate() {
            let mag = c.abs();
            if i == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let is_const = m.degree() == 0;
            if !mag.is_one() || is_const {
                write!(f, "{}", mag)?;
                if !is_const {
                    write!(f, "*")?;
                }
            }
            let mut first = true;
            for (idx, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if !first {
                    write!(f, "*")?;
                }
                first = false;
                write!(f, "{}", self.alpha.var_name(idx))?;
                if e > 1 {
                    write!(f, "^{}", e)?;
                }
            }
        }
        Ok(())
    }
}

/// Elementary symmetric polynomial `e_i` of the given variables.
///
/// `e_0 = 1`; `e_i = 0` for `i > |vars|`.
pub fn elem_sym(n_vars: usize, vars: &[usize], i: usize) -> Poly {
    if i > vars.len() {
        return Poly::zero(n_vars);
    }
    let mut terms = Vec::new();
    let mut choose = vec![0usize; i];
    fn rec(
        vars: &[usize],
        i: usize,
        start: usize,
        depth: usize,
        choose: &mut [usize],
        n_vars: usize,
        terms: &mut Vec<(Mono, BigInt)>,
    ) {
        if depth == i {
            let mut e = vec![0u16; n_vars];
            for &v in choose.iter() {
                e[v] = 1;
            }
            terms.push((Mono(e), BigInt::one()));
            return;
        }
        for pos in start..vars.len() {
            choose[depth] = vars[pos];
            rec(vars, i, pos + 1, depth + 1, choose, n_vars, terms);
        }
    }
    rec(vars, i, 0, 0, &mut choose, n_vars, &mut terms);
    Poly::from_terms(n_vars, terms)
}

/// Complete homogeneous symmetric polynomial `h_i` of the given variables.
pub fn complete_sym(n_vars: usize, vars: &[usize], i: usize) -> Poly {
    if i == 0 {
        return Poly::one(n_vars);
    }
    if vars.is_empty() {
        return Poly::zero(n_vars);
    }
    let mut terms = Vec::new();
    // Multisets of size i from vars: weakly increasing position sequences.
    fn rec(
        vars: &[usize],
        remaining: usize,
        start: usize,
        exp: &mut Vec<u16>,
        terms: &mut Vec<(Mono, BigInt)>,
    ) {
        if remaining == 0 {
            terms.push((Mono(exp.clone()), BigInt::one()));
            return;
        }
        for pos in start..vars.len() {
            exp[vars[pos]] += 1;
            rec(vars, remaining - 1, pos, exp, terms);
            exp[vars[pos]] -= 1;
        }
    }
    let mut exp = vec![0u16; n_vars];
    rec(vars, i, 0, &mut exp, &mut terms);
    Poly::from_terms(n_vars, terms)
}

/// Difference form `e_i(A - B) = sum_j (-1)^j e_{i-j}(A) h_j(B)`.
///
/// Satisfies `e_i(A - B) = (-1)^i h_i(B - A)`.
pub fn e_diff(n_vars: usize, a: &[usize], b: &[usize], i: usize) -> Poly {
    let mut out = Poly::zero(n_vars);
    for j in 0..=i {
        let term = elem_sym(n_vars, a, i - j).mul(&complete_sym(n_vars, b, j));
        if j % 2 == 0 {
            out = out.add(&term);
        } else {
            out = out.sub(&term);
        }
    }
    out
}

/// Difference form `h_i(A - B) = sum_j (-1)^j h_{i-j}(A) e_j(B)`.
pub fn h_diff(n_vars: usize, a: &[usize], b: &[usize], i: usize) -> Poly {
    let mut out = Poly::zero(n_vars);
    for j in 0..=i {
        let term = complete_sym(n_vars, a, i - j).mul(&elem_sym(n_vars, b, j));
        if j % 2 == 0 {
            out = out.add(&term);
        } else {
            out = out.sub(&term);
        }
    }
    out
}

/// Schur polynomial `s_mu` of the given variables, by the h-determinant
/// `s_mu = det(h_{mu_i - i + j})` expanded over permutations.
pub fn schur(n_vars: usize, vars: &[usize], mu: &[u32]) -> Poly {
    let l = mu.len();
    if l == 0 {
        return Poly::one(n_vars);
    }
    assert!(l <= vars.len(), "partition has more parts than variables");
    // h cache indexed by degree.
    let max_deg = mu.iter().map(|&p| p as usize).max().unwrap_or(0) + l;
    let h: Vec<Poly> = (0..=max_deg)
        .map(|d| complete_sym(n_vars, vars, d))
        .collect();
    let mut out = Poly::zero(n_vars);
    let mut perm: Vec<usize> = (0..l).collect();
    loop {
        let mut sign = 1i32;
        {
            // parity of perm
            let mut seen = vec![false; l];
            for start in 0..l {
                if seen[start] {
                    continue;
                }
                let mut len = 0;
                let mut p = start;
                while !seen[p] {
                    seen[p] = true;
                    p = perm[p];
                    len += 1;
                }
                if len % 2 == 0 {
                    sign = -sign;
                }
            }
        }
        let mut prod = Poly::one(n_vars);
        let mut zero = false;
        for i in 0..l {
            let exp = mu[i] as i64 - i as i64 + perm[i] as i64;
            if exp < 0 {
                zero = true;
                break;
            }
            prod = prod.mul(&h[exp as usize]);
            if prod.is_zero() {
                zero = true;
                break;
            }
        }
        if !zero {
            out = if sign > 0 {
                out.add(&prod)
            } else {
                out.sub(&prod)
            };
        }
        // next permutation in lexicographic order
        let mut i = l as isize - 2;
        while i >= 0 && perm[i as usize] >= perm[i as usize + 1] {
            i -= 1;
        }
        if i < 0 {
            break;
        }
        let i = i as usize;
        let mut j = l - 1;
        while perm[j] <= perm[i] {
            j -= 1;
        }
        perm.swap(i, j);
        perm[i + 1..].reverse();
    }
    out
}

/// Divided difference `d_i = (id - s_i)/(x_i - x_{i+1})`, acting on the `X`
/// block (`i` is 1-based, `1 <= i <= |X| - 1`). Degree -2 in the q-grading;
/// kills exactly the `s_i`-symmetric polynomials. Computed termwise via the
/// telescoping expansion, so the division is exact by construction.
pub fn divided_difference(alpha: &Alphabet, i: usize, p: &Poly) -> Poly {
    let r = alpha.block_size(BlockName::X);
    assert!(i >= 1 && i < r, "divided difference index out of range");
    let u = alpha.var(BlockName::X, i);
    let v = alpha.var(BlockName::X, i + 1);
    let mut terms = Vec::new();
    for (m, c) in &p.terms {
        let (a, b) = (m.0[u], m.0[v]);
        if a == b {
            continue;
        }
        let (lo, hi, neg) = if a > b { (b, a, false) } else { (a, b, true) };
        // (x^a y^b - x^b y^a)/(x - y) = sum_{c=lo}^{hi-1} x^c y^{hi+lo-1-c},
        // with overall sign -1 when a < b.
        for e in lo..hi {
            let mut exp = m.0.clone();
            exp[u] = e;
            exp[v] = hi + lo - 1 - e;
            let coeff = if neg { -c } else { c.clone() };
            terms.push((Mono(exp), coeff));
        }
    }
    Poly::from_terms(p.n_vars, terms)
}

/// Simple transposition `s_i` swapping `x_i` and `x_{i+1}` (1-based).
pub fn transposition(alpha: &Alphabet, i: usize, p: &Poly) -> Poly {
    let r = alpha.block_size(BlockName::X);
    assert!(i >= 1 && i < r, "transposition index out of range");
    let u = alpha.var(BlockName::X, i);
    let v = alpha.var(BlockName::X, i + 1);
    let terms = p.terms.iter().map(|(m, c)| {
        let mut exp = m.0.clone();
        exp.swap(u, v);
        (Mono(exp), c.clone())
    });
    Poly::from_terms(p.n_vars, terms.collect::<Vec<_>>())
}

/// Applies an arbitrary permutation of the `X` block, given as a product of
/// disjoint consecutive runs: `runs[j]` is a list of global x-indices whose
/// exponents are permuted by `perm`. Used by symmetry tests.
pub fn apply_x_permutation(p: &Poly, perm: &[usize]) -> Poly {
    let terms = p.terms.iter().map(|(m, c)| {
        let mut exp = m.0.clone();
        for (dst, &src) in perm.iter().enumerate() {
            exp[dst] = m.0[src];
        }
        (Mono(exp), c.clone())
    });
    Poly::from_terms(p.n_vars, terms.collect::<Vec<_>>())
}

/// One atom of an operator word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Atom {
    DividedDifference(usize),
    Transposition(usize),
    MultiplyBy(Poly),
}

/// A signed composite of atoms. `atoms[0]` is written leftmost and applied
/// last, matching the usual composition order of operator products.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OperatorWord {
    pub sign: i8,
    pub atoms: Vec<Atom>,
}

impl OperatorWord {
    pub fn identity() -> Self {
        OperatorWord {
            sign: 1,
            atoms: Vec::new(),
        }
    }

    pub fn new(sign: i8, atoms: Vec<Atom>) -> Self {
        assert!(sign == 1 || sign == -1);
        OperatorWord { sign, atoms }
    }

    pub fn negated(&self) -> Self {
        OperatorWord {
            sign: -self.sign,
            atoms: self.atoms.clone(),
        }
    }

    /// `self` after `other` (i.e. the composite `self . other`).
    pub fn compose(&self, other: &OperatorWord) -> OperatorWord {
        let mut atoms = self.atoms.clone();
        atoms.extend(other.atoms.iter().cloned());
        OperatorWord {
            sign: self.sign * other.sign,
            atoms,
        }
    }

    /// Net q-degree of the word: +2 per multiplication degree, -2 per
    /// divided difference. Multiplication atoms must be homogeneous.
    pub fn q_degree(&self) -> i64 {
        let mut deg = 0i64;
        for a in &self.atoms {
            match a {
                Atom::DividedDifference(_) => deg -= 2,
                Atom::Transposition(_) => {}
                Atom::MultiplyBy(p) => {
                    deg += p.q_degree().expect("multiplication atom must be homogeneous")
                }
            }
        }
        deg
    }

    pub fn display<'a>(&'a self, alpha: &'a Alphabet) -> WordDisplay<'a> {
        WordDisplay { word: self, alpha }
    }
}

/// Applies a word to a polynomial: atoms right-to-left, then the sign.
pub fn apply_word(alpha: &Alphabet, w: &OperatorWord, p: &Poly) -> Poly {
    let mut cur = p.clone();
    for atom in w.atoms.iter().rev() {
        if cur.is_zero() {
            break;
        }
        cur = match atom {
            Atom::DividedDifference(i) => divided_difference(alpha, *i, &cur),
            Atom::Transposition(i) => transposition(alpha, *i, &cur),
            Atom::MultiplyBy(f) => f.mul(&cur),
        };
    }
    if w.sign < 0 {
        cur.neg()
    } else {
        cur
    }
}

pub struct WordDisplay<'a> {
    word: &'a OperatorWord,
    alpha: &'a Alphabet,
}

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.sign < 0 {
            write!(f, "-")?;
        }
        if self.word.atoms.is_empty() {
            return write!(f, "id");
        }
        for (i, atom) in self.word.atoms.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            match atom {
                Atom::DividedDifference(j) => write!(f, "d{}", j)?,
                Atom::Transposition(j) => write!(f, "s{}", j)?,
                Atom::MultiplyBy(p) => write!(f, "({})", p.display(self.alpha))?,
            }
        }
        Ok(())
    }
}
