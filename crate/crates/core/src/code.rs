//! The code of the flag system: parameters, generator matrix, encoding,
//! weights and spectra.
//!
//! Codewords are the evaluation vectors `(Tr(X_1 M), ..., Tr(X_N M))` of
//! matrices `M`. Two matrices give the same word iff they differ by a scalar
//! matrix, so codewords are in bijection with the coset representatives
//! enumerated by [`CosetSpace`].

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::field::{Field, FieldElement};
use crate::flags::{digits_of, projective_count, FlagError, FlagSystem, Variant};
use crate::matrix::{Matrix, MatrixError};
use crate::parallel;
use crate::rng::Lcg;

/// Largest representative space the exhaustive spectrum will walk.
pub const MAX_EXHAUSTIVE: u64 = 1 << 25;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodeError {
    #[error("representative space of size {size} exceeds the exhaustive cap of {max}")]
    TooLarge { size: u64, max: u64 },
    #[error("sampled mode requires a seed")]
    MissingSeed,
    #[error("generator matrix has rank {rank}, expected {expected}")]
    RankDeficient { rank: usize, expected: usize },
    #[error("matrix of order {got} does not match the system order {expected}")]
    OrderMismatch { got: usize, expected: usize },
    #[error("matrix is over a different field than the system")]
    FieldMismatch,
    #[error(transparent)]
    Flag(#[from] FlagError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

fn pow(q: u64, e: usize) -> u64 {
    q.pow(e as u32)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CodeSummary {
    pub q: u64,
    pub n: usize,
    #[serde(rename = "N")]
    pub length: u64,
    pub k: u64,
    pub d: u64,
    pub w_second: u64,
    pub w_max: u64,
}

/// Closed-form parameters of the flag code.
pub fn params(n: usize, field: &Field) -> CodeSummary {
    let q = field.q() as u64;
    CodeSummary {
        q,
        n,
        length: (pow(q, n + 1) - 1) * (pow(q, n) - 1) / ((q - 1) * (q - 1)),
        k: (n * n + 2 * n) as u64,
        d: pow(q, 2 * n - 1) - pow(q, n - 1),
        w_second: pow(q, 2 * n - 1),
        w_max: max_weight(n, q),
    }
}

fn max_weight(n: usize, q: u64) -> u64 {
    pow(q, n - 1) * (pow(q, n + 1) - 1) / (q - 1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SegreSummary {
    pub q: u64,
    pub n: usize,
    #[serde(rename = "N")]
    pub length: u64,
    pub k: u64,
    pub d: u64,
}

/// Closed-form parameters of the code of all point-hyperplane pairs.
pub fn segre_code_params(n: usize, field: &Field) -> SegreSummary {
    let q = field.q() as u64;
    let np = projective_count(n, q);
    SegreSummary {
        q,
        n,
        length: np * np,
        k: ((n + 1) * (n + 1)) as u64,
        d: pow(q, 2 * n),
    }
}

/// The canonical coset representatives of `M_{n+1}(q) / ⟨I⟩`.
///
/// When the characteristic does not divide `n+1` these are the trace-zero
/// matrices: every entry except the last diagonal one is free and the last
/// diagonal entry balances the trace. Otherwise they are the matrices with
/// a zero (1,1) entry. In both cases the `k = (n+1)² - 1` free entries are
/// taken in row-major order and representative `i` has the big-endian
/// base-q digits of `i` in those entries.
#[derive(Debug, Clone)]
pub struct CosetSpace {
    field: Field,
    order: usize,
    trace_zero: bool,
    free: Vec<(usize, usize)>,
}

impl CosetSpace {
    pub fn new(n: usize, field: &Field) -> Self {
        let order = n + 1;
        let trace_zero = order as u64 % field.p() as u64 != 0;
        let skip = if trace_zero { (n, n) } else { (0, 0) };
        let free = (0..order)
            .flat_map(|i| (0..order).map(move |j| (i, j)))
            .filter(|&ij| ij != skip)
            .collect();
        CosetSpace {
            field: field.clone(),
            order,
            trace_zero,
            free,
        }
    }

    pub fn dimension(&self) -> usize {
        self.free.len()
    }

    /// `q^k`, saturating.
    pub fn size(&self) -> u64 {
        (self.field.q() as u64)
            .checked_pow(self.free.len() as u32)
            .unwrap_or(u64::MAX)
    }

    /// `(q^k - 1)/(q - 1)`: nonzero representatives up to scalars.
    pub fn projective_size(&self) -> u64 {
        (self.size() - 1) / (self.field.q() as u64 - 1)
    }

    pub fn is_trace_zero(&self) -> bool {
        self.trace_zero
    }

    pub fn rep(&self, index: u64) -> Matrix {
        let f = &self.field;
        let digits = digits_of(index, f.q() as u64, self.free.len());
        let mut m = Matrix::zeros(f, self.order, self.order);
        for (&(i, j), &d) in self.free.iter().zip(&digits) {
            m[(i, j)] = d;
        }
        if self.trace_zero {
            let last = self.order - 1;
            let partial = (0..last).fold(0, |acc, i| f.add(acc, m[(i, i)]));
            m[(last, last)] = f.neg(partial);
        }
        m
    }

    /// Index of a representative; the inverse of [`CosetSpace::rep`].
    pub fn index_of(&self, rep: &Matrix) -> u64 {
        let q = self.field.q() as u64;
        self.free.iter().fold(0, |acc, &ij| acc * q + rep[ij] as u64)
    }

    /// Indices of the representatives whose first nonzero free entry is 1,
    /// one per projective point of the quotient space.
    pub fn projective_indices(&self) -> impl Iterator<Item = u64> + Clone {
        let q = self.field.q() as u64;
        let k = self.free.len();
        (0..k).rev().flat_map(move |j| {
            let base = q.pow(j as u32);
            base..2 * base
        })
    }
}

/// Basis of the coset space used for generator rows: `E_ij (i≠j)` followed
/// by `E_ii - E_{i+1,i+1}` in the trace-zero case, otherwise every `E_ij`
/// except `E_11`. For the full Segre system every `E_ij`.
pub fn generator_basis(n: usize, field: &Field, variant: Variant) -> Vec<Matrix> {
    let order = n + 1;
    let all = (0..order).flat_map(|i| (0..order).map(move |j| (i, j)));
    match variant {
        Variant::Lambda => all.map(|(i, j)| Matrix::elementary(field, order, i, j)).collect(),
        Variant::Lambda1 if order as u64 % field.p() as u64 != 0 => {
            let mut basis: Vec<Matrix> = all
                .filter(|(i, j)| i != j)
                .map(|(i, j)| Matrix::elementary(field, order, i, j))
                .collect();
            for i in 0..n {
                let mut m = Matrix::elementary(field, order, i, i);
                m[(i + 1, i + 1)] = field.neg(1);
                basis.push(m);
            }
            basis
        }
        Variant::Lambda1 => all
            .filter(|&ij| ij != (0, 0))
            .map(|(i, j)| Matrix::elementary(field, order, i, j))
            .collect(),
    }
}

/// `k × N` generator matrix whose row `j` evaluates basis matrix `B_j` at
/// every flag.
pub fn generator_matrix(sys: &FlagSystem) -> Result<Matrix, CodeError> {
    let basis = generator_basis(sys.n(), sys.field(), sys.variant());
    let rows: Vec<Vec<FieldElement>> = basis.iter().map(|b| sys.evaluate(b)).collect();
    let g = Matrix::from_rows(sys.field(), &rows)?;
    let rank = g.rank();
    if rank != basis.len() {
        return Err(CodeError::RankDeficient {
            rank,
            expected: basis.len(),
        });
    }
    Ok(g)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Codeword {
    pub values: Vec<FieldElement>,
    /// Canonical coset representative of the encoded matrix.
    pub source: Matrix,
}

impl Codeword {
    pub fn weight(&self) -> usize {
        hamming_weight(&self.values)
    }
}

pub fn hamming_weight(values: &[FieldElement]) -> usize {
    values.iter().filter(|&&v| v != 0).count()
}

fn check_compatible(m: &Matrix, sys: &FlagSystem) -> Result<(), CodeError> {
    if m.field() != sys.field() {
        return Err(CodeError::FieldMismatch);
    }
    if !m.is_square() || m.rows() != sys.order() {
        return Err(CodeError::OrderMismatch {
            got: m.rows().max(m.cols()),
            expected: sys.order(),
        });
    }
    Ok(())
}

pub fn encode(m: &Matrix, sys: &FlagSystem) -> Result<Codeword, CodeError> {
    check_compatible(m, sys)?;
    Ok(Codeword {
        values: sys.evaluate(m),
        source: m.canonical_coset_rep()?,
    })
}

/// Weight of the codeword of `M` from its eigenvector count:
/// `q^{n-1}(q^{n+1}-1)/(q-1) - q^{n-1} θ_M`, or 0 for scalar matrices.
pub fn weight_formula(m: &Matrix, n: usize, field: &Field) -> Result<u64, CodeError> {
    if m.rows() != n + 1 || !m.is_square() {
        return Err(CodeError::OrderMismatch {
            got: m.rows().max(m.cols()),
            expected: n + 1,
        });
    }
    if m.is_scalar() {
        return Ok(0);
    }
    let theta = m.eigen_profile()?.theta;
    let q = field.q() as u64;
    Ok(max_weight(n, q) - pow(q, n - 1) * theta)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SpectrumMode {
    Formula,
    Exhaustive,
    Sampled,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpectrumReport {
    pub mode: SpectrumMode,
    /// Distinct weights, ascending, including 0.
    pub weights: Vec<u64>,
    /// Weight multiplicities (exhaustive and sampled modes).
    pub counts: BTreeMap<u64, u64>,
    /// Eigenspace profile `(g1,...,gt)` to weight (formula mode).
    pub profiles: BTreeMap<String, u64>,
}

impl SpectrumReport {
    pub fn nonzero_weights(&self) -> Vec<u64> {
        self.weights.iter().copied().filter(|&w| w != 0).collect()
    }

    pub fn min_nonzero(&self) -> Option<u64> {
        self.nonzero_weights().first().copied()
    }

    pub fn second_nonzero(&self) -> Option<u64> {
        self.nonzero_weights().get(1).copied()
    }

    pub fn max_weight(&self) -> Option<u64> {
        self.weights.last().copied()
    }
}

pub fn profile_key(dims: &[usize]) -> String {
    let inner: Vec<String> = dims.iter().map(usize::to_string).collect();
    format!("({})", inner.join(","))
}

/// Every nondecreasing tuple of positive integers with at most `max_len`
/// entries and sum at most `max_sum`, including the empty tuple.
pub fn eigen_profiles(max_sum: usize, max_len: usize) -> Vec<Vec<usize>> {
    fn extend(cur: &mut Vec<usize>, min: usize, left: usize, max_len: usize, out: &mut Vec<Vec<usize>>) {
        out.push(cur.clone());
        if cur.len() == max_len {
            return;
        }
        for g in min..=left {
            cur.push(g);
            extend(cur, g, left - g, max_len, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    extend(&mut Vec::new(), 1, max_sum, max_len, &mut out);
    out
}

/// Weight list predicted from eigenspace profiles. The single-eigenspace
/// profile `(n+1)` belongs only to scalar matrices and is left out; weight
/// 0 is added separately.
pub fn theoretical_weight_list(n: usize, field: &Field) -> SpectrumReport {
    let q = field.q() as u64;
    let order = n + 1;
    let mut profiles = BTreeMap::new();
    for dims in eigen_profiles(order, q.min(order as u64) as usize) {
        if dims == [order] {
            continue;
        }
        let theta: u64 = dims.iter().map(|&g| (pow(q, g) - 1) / (q - 1)).sum();
        profiles.insert(profile_key(&dims), max_weight(n, q) - pow(q, n - 1) * theta);
    }
    let mut weights: Vec<u64> = profiles.values().copied().chain([0]).collect();
    weights.sort_unstable();
    weights.dedup();
    SpectrumReport {
        mode: SpectrumMode::Formula,
        weights,
        counts: BTreeMap::new(),
        profiles,
    }
}

fn merge(mut a: BTreeMap<u64, u64>, b: BTreeMap<u64, u64>) -> BTreeMap<u64, u64> {
    for (w, c) in b {
        *a.entry(w).or_default() += c;
    }
    a
}

fn census(space: &CosetSpace, n: usize, indices: &[u64], threads: Option<usize>) -> BTreeMap<u64, u64> {
    let field = space.field.clone();
    parallel::install(threads, || {
        indices
            .par_iter()
            .fold(BTreeMap::new, |mut acc, &i| {
                let w = weight_formula(&space.rep(i), n, &field).expect("representative has the right order");
                *acc.entry(w).or_insert(0) += 1;
                acc
            })
            .reduce(BTreeMap::new, merge)
    })
}

/// Weight census over the coset representatives, either all of them or a
/// seeded uniform sample of `sample_size`.
pub fn spectrum(
    n: usize,
    field: &Field,
    mode: SpectrumMode,
    sample_size: u64,
    seed: Option<u64>,
    threads: Option<usize>,
) -> Result<SpectrumReport, CodeError> {
    let space = CosetSpace::new(n, field);
    let counts = match mode {
        SpectrumMode::Formula => return Ok(theoretical_weight_list(n, field)),
        SpectrumMode::Exhaustive => {
            let size = space.size();
            if size > MAX_EXHAUSTIVE {
                return Err(CodeError::TooLarge {
                    size,
                    max: MAX_EXHAUSTIVE,
                });
            }
            let field = field.clone();
            parallel::install(threads, || {
                (0..size)
                    .into_par_iter()
                    .fold(BTreeMap::new, |mut acc, i| {
                        let w = weight_formula(&space.rep(i), n, &field).expect("representative has the right order");
                        *acc.entry(w).or_insert(0) += 1;
                        acc
                    })
                    .reduce(BTreeMap::new, merge)
            })
        }
        SpectrumMode::Sampled => {
            let seed = seed.ok_or(CodeError::MissingSeed)?;
            let indices = sample_indices(&space, sample_size, seed);
            census(&space, n, &indices, threads)
        }
    };
    Ok(SpectrumReport {
        mode,
        weights: counts.keys().copied().collect(),
        counts,
        profiles: BTreeMap::new(),
    })
}

/// Seeded uniform draws of representative indices.
pub fn sample_indices(space: &CosetSpace, count: u64, seed: u64) -> Vec<u64> {
    let mut rng = Lcg::new(seed);
    let size = space.size();
    (0..count).map(|_| rng.below(size)).collect()
}

/// Indices (into `indices`) of representatives whose direct Hamming weight
/// differs from [`weight_formula`]. Empty means full agreement.
pub fn weight_disagreements(sys: &FlagSystem, indices: &[u64], threads: Option<usize>) -> Vec<u64> {
    let space = CosetSpace::new(sys.n(), sys.field());
    parallel::install(threads, || {
        indices
            .par_iter()
            .filter(|&&i| {
                let m = space.rep(i);
                let direct = sys.weight_of(&m) as u64;
                direct != weight_formula(&m, sys.n(), sys.field()).expect("order matches")
            })
            .copied()
            .collect()
    })
}

/// Exhaustive census of the full Segre code over every matrix of
/// `M_{n+1}(q)`, by direct evaluation.
pub fn segre_exhaustive(sys: &FlagSystem, threads: Option<usize>) -> Result<BTreeMap<u64, u64>, CodeError> {
    let order = sys.order();
    let q = sys.field().q() as u64;
    let size = q
        .checked_pow((order * order) as u32)
        .filter(|&s| s <= MAX_EXHAUSTIVE)
        .ok_or(CodeError::TooLarge {
            size: u64::MAX,
            max: MAX_EXHAUSTIVE,
        })?;
    let field = sys.field().clone();
    Ok(parallel::install(threads, || {
        (0..size)
            .into_par_iter()
            .fold(BTreeMap::new, |mut acc, i| {
                let m = Matrix::new(&field, order, order, digits_of(i, q, order * order)).unwrap();
                *acc.entry(sys.weight_of(&m) as u64).or_insert(0) += 1;
                acc
            })
            .reduce(BTreeMap::new, merge)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::EchelonBasis;
    use std::collections::BTreeSet;

    fn gf(q: u64) -> Field {
        Field::from_order(q).unwrap()
    }

    #[test]
    fn params_examples() {
        let p = params(2, &gf(2));
        assert_eq!((p.length, p.k, p.d, p.w_second, p.w_max), (21, 8, 6, 8, 14));
        let p = params(2, &gf(3));
        assert_eq!((p.length, p.k, p.d, p.w_second, p.w_max), (52, 8, 24, 27, 39));
        let p = params(3, &gf(2));
        assert_eq!((p.length, p.k, p.d, p.w_second, p.w_max), (105, 15, 28, 32, 60));
    }

    #[test]
    fn segre_params_examples() {
        let s = segre_code_params(2, &gf(2));
        assert_eq!((s.length, s.k, s.d), (49, 9, 16));
        let s = segre_code_params(2, &gf(3));
        assert_eq!((s.length, s.k, s.d), (169, 9, 81));
    }

    #[test]
    fn coset_space_layout() {
        for (q, n) in [(2u64, 2usize), (3, 2), (2, 3), (4, 2), (3, 1)] {
            let f = gf(q);
            let space = CosetSpace::new(n, &f);
            assert_eq!(space.dimension(), (n + 1) * (n + 1) - 1);
            let limit = space.size().min(3000);
            let mut seen = BTreeSet::new();
            for i in 0..limit {
                let r = space.rep(i);
                assert_eq!(r.canonical_coset_rep().unwrap(), r);
                assert_eq!(space.index_of(&r), i);
                seen.insert(r.entries().to_vec());
            }
            assert_eq!(seen.len() as u64, limit);
            let proj: Vec<u64> = space.projective_indices().collect();
            assert_eq!(proj.len() as u64, space.projective_size());
        }
        assert!(!CosetSpace::new(2, &gf(3)).is_trace_zero());
        assert!(CosetSpace::new(2, &gf(2)).is_trace_zero());
    }

    #[test]
    fn projective_indices_have_leading_one() {
        let space = CosetSpace::new(2, &gf(3));
        let all: Vec<u64> = space.projective_indices().collect();
        assert_eq!(all.len(), 3280);
        for &i in &all {
            let d = digits_of(i, 3, 8);
            assert_eq!(d.iter().find(|&&x| x != 0), Some(&1));
        }
    }

    #[test]
    fn generator_examples() {
        let sys = FlagSystem::build(2, &gf(2), Variant::Lambda1).unwrap();
        let g = generator_matrix(&sys).unwrap();
        assert_eq!((g.rows(), g.cols(), g.rank()), (8, 21, 8));
        let sys = FlagSystem::build(2, &gf(3), Variant::Lambda1).unwrap();
        let g = generator_matrix(&sys).unwrap();
        assert_eq!((g.rows(), g.cols(), g.rank()), (8, 52, 8));
        let sys = FlagSystem::build(2, &gf(2), Variant::Lambda).unwrap();
        let g = generator_matrix(&sys).unwrap();
        assert_eq!((g.rows(), g.cols(), g.rank()), (9, 49, 9));
    }

    #[test]
    fn encode_examples() {
        let f = gf(2);
        let sys = FlagSystem::build(2, &f, Variant::Lambda1).unwrap();
        assert_eq!(encode(&Matrix::zeros(&f, 3, 3), &sys).unwrap().weight(), 0);
        assert_eq!(encode(&Matrix::identity(&f, 3), &sys).unwrap().weight(), 0);
        let d = Matrix::elementary(&f, 3, 0, 0);
        let c = encode(&d, &sys).unwrap();
        assert_eq!(c.weight(), 6);
        assert_eq!(c.source.trace().unwrap(), 0);
        assert!(matches!(
            encode(&Matrix::zeros(&f, 2, 2), &sys),
            Err(CodeError::OrderMismatch { .. })
        ));
        assert_eq!(encode(&Matrix::zeros(&gf(3), 3, 3), &sys), Err(CodeError::FieldMismatch));
        for q in [3u64, 4] {
            let f = gf(q);
            let sys = FlagSystem::build(2, &f, Variant::Lambda1).unwrap();
            assert_eq!(encode(&Matrix::identity(&f, 3), &sys).unwrap().weight(), 0);
        }
    }

    #[test]
    fn encode_is_linear_and_in_row_space() {
        for (q, n) in [(2u64, 2usize), (3, 2), (4, 2)] {
            let f = gf(q);
            let sys = FlagSystem::build(n, &f, Variant::Lambda1).unwrap();
            let g = generator_matrix(&sys).unwrap();
            let mut rows = EchelonBasis::new(&f, sys.len());
            for r in g.row_vecs() {
                rows.insert(&r);
            }
            let space = CosetSpace::new(n, &f);
            let idx = sample_indices(&space, 40, q);
            for pair in idx.windows(2) {
                let (a, b) = (space.rep(pair[0]), space.rep(pair[1]));
                let (alpha, beta) = ((pair[0] % q) as u32, (pair[1] % q) as u32);
                let comb = a.scale(alpha).add(&b.scale(beta)).unwrap();
                let lhs = encode(&comb, &sys).unwrap().values;
                let ea = encode(&a, &sys).unwrap().values;
                let eb = encode(&b, &sys).unwrap().values;
                let rhs: Vec<u32> = ea
                    .iter()
                    .zip(&eb)
                    .map(|(&x, &y)| f.add(f.mul(alpha, x), f.mul(beta, y)))
                    .collect();
                assert_eq!(lhs, rhs);
                assert!(rows.contains(&ea));
                for l in f.elements() {
                    assert_eq!(encode(&a.shift(l), &sys).unwrap().values, ea);
                }
            }
        }
    }

    #[test]
    fn weight_formula_examples() {
        let f = gf(2);
        let e11_e12 = Matrix::from_rows(&f, &[vec![1, 1, 0], vec![0, 0, 0], vec![0, 0, 0]]).unwrap();
        assert_eq!(e11_e12.eigen_profile().unwrap().theta, 4);
        assert_eq!(weight_formula(&e11_e12, 2, &f).unwrap(), 6);
        assert_eq!(weight_formula(&Matrix::elementary(&f, 3, 0, 1), 2, &f).unwrap(), 8);
        let c = Matrix::companion(&f, &[1, 1, 0]);
        assert_eq!(weight_formula(&c, 2, &f).unwrap(), 14);
        assert_eq!(weight_formula(&Matrix::identity(&f, 3), 2, &f).unwrap(), 0);
    }

    #[test]
    fn eigen_profile_enumeration() {
        let all = eigen_profiles(3, 2);
        let keys: Vec<String> = all.iter().map(|d| profile_key(d)).collect();
        assert_eq!(keys, vec!["()", "(1)", "(1,1)", "(1,2)", "(2)", "(3)"]);
    }

    #[test]
    fn theoretical_list_examples() {
        let r = theoretical_weight_list(2, &gf(2));
        assert_eq!(r.nonzero_weights(), vec![6, 8, 10, 12, 14]);
        let expected: BTreeMap<String, u64> = [("(1,2)", 6), ("(2)", 8), ("(1,1)", 10), ("(1)", 12), ("()", 14)]
            .iter()
            .map(|&(k, w)| (k.to_string(), w))
            .collect();
        assert_eq!(r.profiles, expected);
        assert_eq!(theoretical_weight_list(2, &gf(3)).nonzero_weights(), vec![24, 27, 30, 33, 36, 39]);
        assert_eq!(
            theoretical_weight_list(3, &gf(2)).nonzero_weights(),
            vec![28, 32, 36, 44, 48, 52, 56, 60]
        );
    }

    #[test]
    fn exhaustive_small() {
        let f = gf(2);
        let r = spectrum(2, &f, SpectrumMode::Exhaustive, 0, None, Some(1)).unwrap();
        assert_eq!(r.counts.values().sum::<u64>(), 256);
        assert_eq!(r.counts[&0], 1);
        assert_eq!(r.min_nonzero(), Some(6));
        assert_eq!(r.max_weight(), Some(14));
        assert_eq!(r.weights, theoretical_weight_list(2, &f).weights);
        let r4 = spectrum(2, &f, SpectrumMode::Exhaustive, 0, None, Some(4)).unwrap();
        assert_eq!(r, r4);
    }

    #[test]
    fn spectrum_errors() {
        assert_eq!(
            spectrum(2, &gf(2), SpectrumMode::Sampled, 10, None, None),
            Err(CodeError::MissingSeed)
        );
        assert!(matches!(
            spectrum(5, &gf(2), SpectrumMode::Exhaustive, 0, None, None),
            Err(CodeError::TooLarge { .. })
        ));
    }

    #[test]
    fn sampled_is_reproducible() {
        let f = gf(3);
        let a = spectrum(2, &f, SpectrumMode::Sampled, 500, Some(9), Some(1)).unwrap();
        let b = spectrum(2, &f, SpectrumMode::Sampled, 500, Some(9), Some(3)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.counts.values().sum::<u64>(), 500);
        let theory: BTreeSet<u64> = theoretical_weight_list(2, &f).weights.into_iter().collect();
        assert!(a.weights.iter().all(|w| theory.contains(w)));
    }

    #[test]
    fn direct_weight_matches_formula_small() {
        let f = gf(2);
        let sys = FlagSystem::build(2, &f, Variant::Lambda1).unwrap();
        let all: Vec<u64> = (0..256).collect();
        assert!(weight_disagreements(&sys, &all, None).is_empty());
    }

    #[test]
    fn segre_baseline_small() {
        let f = gf(2);
        let sys = FlagSystem::build(2, &f, Variant::Lambda).unwrap();
        let counts = segre_exhaustive(&sys, None).unwrap();
        assert_eq!(counts.values().sum::<u64>(), 512);
        assert_eq!(counts[&0], 1);
        assert_eq!(counts.keys().nth(1), Some(&16));
    }
}
