//! Closed-geodesic components of the free loop space of `Gr(k, N)`.
//!
//! Components are indexed by partitions with at most `min(k, N-k)` parts.
//! Everything here is integer bookkeeping derived from the eigenvalue data
//! of the isotropy representation:
//!
//! - for `j <= k`: one direction with value `2 lam_j`,
//! - for `j <= k`: `2(N - 2k)` directions with value `lam_j`,
//! - for `i < j <= k`: two directions each with values `lam_i + lam_j` and
//!   `lam_i - lam_j`.
//!
//! Morse index `mu = sum (value - 1) dim` over strictly positive values,
//! nullity `nu = 2k(N-k) + sum dim` over the same range, and the two are
//! tied to the loop-grading shift by `mu + nu - 2k(N-k) = shift` where
//! `shift = (2N+2)|lam| - 4 sum_i i lam_i`.
//!
//! Inputs with `k > N - k` are normalized to the complementary Grassmannian
//! at the component level; the raw eigenvalue table itself requires
//! `k <= N - k`.

use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::homology::{
    bigraded_homology_full, collapse, GradedAbelianGroup,
};
use crate::{Error, Result};

/// A partition: weakly decreasing positive parts (zeros trimmed).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    /// Canonicalizes: sorts descending and trims zeros.
    pub fn new(mut parts: Vec<u32>) -> Self {
        parts.sort_unstable_by(|a, b| b.cmp(a));
        while parts.last() == Some(&0) {
            parts.pop();
        }
        Partition { parts }
    }

    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// Number of (nonzero) parts.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// `|lam| = sum of parts`.
    pub fn weight(&self) -> u64 {
        self.parts.iter().map(|&p| p as u64).sum()
    }

    /// `|lam|_2^2 = sum of squared parts` (the squared 2-norm, exact).
    pub fn sq_norm(&self) -> u64 {
        self.parts.iter().map(|&p| (p as u64) * (p as u64)).sum()
    }

    /// `|lam|_inf = largest part` (0 for the empty partition).
    pub fn max_part(&self) -> u32 {
        self.parts.first().copied().unwrap_or(0)
    }

    /// `sum_i i lam_i` with 1-based positions.
    pub fn weighted_sum(&self) -> i64 {
        self.parts
            .iter()
            .enumerate()
            .map(|(i, &p)| (i as i64 + 1) * p as i64)
            .sum()
    }

    /// Multiplicities `(r_1, ..., r_m)` of the distinct part values, in
    /// decreasing order of value. Recovers the parts together with the
    /// values themselves.
    pub fn multiplicities(&self) -> Vec<usize> {
        let mut out = Vec::new();
        let mut i = 0;
        while i < self.parts.len() {
            let mut j = i;
            while j < self.parts.len() && self.parts[j] == self.parts[i] {
                j += 1;
            }
            out.push(j - i);
            i = j;
        }
        out
    }
}

impl PartialOrd for Partition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Partition {
    fn cmp(&self, other: &Self) -> Ordering {
        self.weight()
            .cmp(&other.weight())
            .then_with(|| self.parts.cmp(&other.parts))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", p)?;
        }
        write!(f, ")")
    }
}

/// All partitions with at most `max_parts` parts, each at most `max_part`,
/// ordered by weight then lexicographically.
pub fn enumerate_partitions(max_parts: usize, max_part: u32) -> Vec<Partition> {
    let mut out = Vec::new();
    fn rec(prefix: &mut Vec<u32>, remaining: usize, cap: u32, out: &mut Vec<Partition>) {
        out.push(Partition {
            parts: prefix.clone(),
        });
        if remaining == 0 {
            return;
        }
        for p in (1..=cap).rev() {
            prefix.push(p);
            rec(prefix, remaining - 1, p, out);
            prefix.pop();
        }
    }
    let mut prefix = Vec::new();
    rec(&mut prefix, max_parts, max_part, &mut out);
    out.sort();
    out.dedup();
    out
}

/// One eigenvalue family: the value on the chosen geodesic and the real
/// dimension of its eigenspace.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RootValue {
    pub value: i64,
    pub dim: usize,
}

fn check_raw_context(lambda: &Partition, k: usize, n: usize) -> Result<()> {
    if k == 0 || k >= n {
        return Err(Error::BadContext("need 0 < k < N"));
    }
    if k > n - k {
        return Err(Error::BadContext("eigenvalue table requires k <= N - k"));
    }
    if lambda.len() > k {
        return Err(Error::TooManyParts {
            allowed: k,
            got: lambda.len(),
        });
    }
    Ok(())
}

/// The multiset of (value, eigenspace dimension) pairs for the geodesic
/// attached to `lambda` in `Gr(k, N)`. Requires `k <= N - k`; families of
/// dimension zero (when `N = 2k`) are kept with `dim = 0`.
pub fn root_values(lambda: &Partition, k: usize, n: usize) -> Result<Vec<RootValue>> {
    check_raw_context(lambda, k, n)?;
    let lam = |j: usize| -> i64 {
        if j <= lambda.len() {
            lambda.parts()[j - 1] as i64
        } else {
            0
        }
    };
    let mut out = Vec::new();
    for j in 1..=k {
        out.push(RootValue {
            value: 2 * lam(j),
            dim: 1,
        });
    }
    for j in 1..=k {
        out.push(RootValue {
            value: lam(j),
            dim: 2 * (n - 2 * k),
        });
    }
    for i in 1..=k {
        for j in i + 1..=k {
            out.push(RootValue {
                value: lam(i) + lam(j),
                dim: 2,
            });
            out.push(RootValue {
                value: lam(i) - lam(j),
                dim: 2,
            });
        }
    }
    Ok(out)
}

/// Morse index `mu` of the geodesic component: `sum (value - 1) dim` over
/// strictly positive values.
pub fn morse_index(lambda: &Partition, k: usize, n: usize) -> Result<i64> {
    Ok(root_values(lambda, k, n)?
        .iter()
        .filter(|rv| rv.value > 0)
        .map(|rv| (rv.value - 1) * rv.dim as i64)
        .sum())
}

/// Nullity `nu = 2k(N-k) + sum dim` over strictly positive values; equals
/// the dimension of the component.
pub fn nullity(lambda: &Partition, k: usize, n: usize) -> Result<i64> {
    let dim_m = 2 * (k as i64) * ((n - k) as i64);
    Ok(dim_m
        + root_values(lambda, k, n)?
            .iter()
            .filter(|rv| rv.value > 0)
            .map(|rv| rv.dim as i64)
            .sum::<i64>())
}

/// Loop-grading shift `(2N+2)|lam| - 4 sum_i i lam_i`; equals
/// `mu + nu - 2k(N-k)`.
pub fn shift_exponent(lambda: &Partition, n: usize) -> i64 {
    (2 * n as i64 + 2) * lambda.weight() as i64 - 4 * lambda.weighted_sum()
}

/// Isotropy-group block data of a component.
///
/// `embedding` lists the diagonal block sizes inside `U(N)`:
/// `[r_1, ..., r_m, k - r, r_1, ..., r_m, N - k - r]` (each `U(r_j)`
/// appears twice, embedded diagonally). `groups` lists the abstract
/// factors once: `[r_1, ..., r_m, k - r, N - k - r]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JBlocks {
    pub embedding: Vec<usize>,
    pub groups: Vec<usize>,
}

impl JBlocks {
    /// `dim J = sum of squared abstract block sizes`.
    pub fn dim(&self) -> i64 {
        self.groups.iter().map(|&b| (b * b) as i64).sum()
    }
}

/// Blocks of the isotropy group for `lambda` in `Gr(k, N)`; normalizes
/// `k > N - k` to the complementary Grassmannian.
pub fn j_lambda_blocks(lambda: &Partition, k: usize, n: usize) -> Result<JBlocks> {
    if k == 0 || k >= n {
        return Err(Error::BadContext("need 0 < k < N"));
    }
    let k = k.min(n - k);
    if lambda.len() > k {
        return Err(Error::TooManyParts {
            allowed: k,
            got: lambda.len(),
        });
    }
    let mult = lambda.multiplicities();
    let r: usize = mult.iter().sum();
    let mut embedding = mult.clone();
    embedding.push(k - r);
    embedding.extend(&mult);
    embedding.push(n - k - r);
    let mut groups = mult;
    groups.push(k - r);
    groups.push(n - k - r);
    Ok(JBlocks { embedding, groups })
}

/// Full integer datum of one geodesic component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeodesicComponent {
    pub lambda: Partition,
    pub blocks: JBlocks,
    /// Morse index.
    pub mu: i64,
    /// Nullity = dimension of the component.
    pub nu: i64,
    /// Squared 2-norm `|lam|_2^2`; length is `pi * sqrt` of this and the
    /// energy is `pi^2/2` times it.
    pub sq_norm: u64,
    /// Loop-grading shift.
    pub shift: i64,
}

/// Computes the component data, normalizing `k > N - k`.
pub fn geodesic_component(lambda: &Partition, k: usize, n: usize) -> Result<GeodesicComponent> {
    if k == 0 || k >= n {
        return Err(Error::BadContext("need 0 < k < N"));
    }
    let k = k.min(n - k);
    Ok(GeodesicComponent {
        lambda: lambda.clone(),
        blocks: j_lambda_blocks(lambda, k, n)?,
        mu: morse_index(lambda, k, n)?,
        nu: nullity(lambda, k, n)?,
        sq_norm: lambda.sq_norm(),
        shift: shift_exponent(lambda, n),
    })
}

/// The loop homology of `Gr(k, N)` assembled from its components.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LoopHomology {
    pub group: GradedAbelianGroup,
    /// Degrees in `[complete_from, complete_through]` are exact; entries
    /// outside may be missing contributions from excluded components.
    pub complete_from: i64,
    pub complete_through: i64,
    pub components: Vec<GeodesicComponent>,
}

/// Assembles `H_*(L Gr(k, N))` (dimension-shifted convention, grading
/// negated so the fundamental class of the constant loops sits in degree
/// zero) from components whose summands can reach degree `index_cap`.
///
/// `q_cap` optionally limits the per-component bigraded computation; `None`
/// computes each component group exactly.
pub fn loop_homology(
    k: usize,
    n: usize,
    index_cap: i64,
    q_cap: Option<i64>,
) -> Result<LoopHomology> {
    if k == 0 || k >= n {
        return Err(Error::BadContext("need 0 < k < N"));
    }
    let k = k.min(n - k);
    let dim_m = 2 * (k as i64) * ((n - k) as i64);
    // A component enters degrees [shift - nu, shift] = [mu - dim M, shift];
    // include it when mu - dim M <= index_cap. Sizes are exhausted once
    // even the smallest possible index at that weight overshoots:
    // mu >= 2*ceil(weight/k) - 1.
    let mut weight_bound = 0u64;
    while 2 * (weight_bound.div_ceil(k as u64) as i64) - 1 <= index_cap + dim_m {
        weight_bound += 1;
    }
    let max_part = weight_bound as u32;
    let mut components = Vec::new();
    for lambda in enumerate_partitions(k, max_part) {
        if lambda.weight() > weight_bound {
            continue;
        }
        let comp = geodesic_component(&lambda, k, n)?;
        if comp.mu - dim_m <= index_cap {
            components.push(comp);
        }
    }
    let mut group = GradedAbelianGroup::new();
    let mut complete_from = -dim_m;
    for comp in &components {
        let f = crate::complexes::build_f_lambda(&comp.lambda, k, n)?;
        let r = comp.lambda.len() as i64;
        let needed = comp.nu + r;
        let cap = match q_cap {
            Some(c) => {
                if c < needed {
                    complete_from = complete_from.max(comp.shift - comp.nu + (needed - c));
                }
                c.min(needed)
            }
            None => needed,
        };
        let bigraded = crate::homology::bigraded_homology(&f, cap);
        let graded = collapse(&bigraded).negated().shifted(comp.shift);
        group = group.direct_sum(&graded);
    }
    Ok(LoopHomology {
        group,
        complete_from,
        complete_through: index_cap,
        components,
    })
}

/// Exact singly-graded homology of one component in the dimension-shifted,
/// negated convention (top class in degree 0, fundamental class of the
/// point in degree `-dim`).
pub fn component_homology(lambda: &Partition, k: usize, n: usize) -> Result<GradedAbelianGroup> {
    let k2 = k.min(n - k);
    let f = crate::complexes::build_f_lambda(lambda, k2, n)?;
    Ok(collapse(&bigraded_homology_full(&f)).negated())
}
