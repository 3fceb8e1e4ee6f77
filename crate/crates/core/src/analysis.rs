//! Minimality checks, codeword classification and the geometric identities
//! relating hyperplanes of the flag geometry to codeword weights.

use std::collections::{BTreeSet, VecDeque};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::code::{self, generator_matrix, CodeError, CosetSpace};
use crate::field::{Field, FieldElement};
use crate::flags::{collinear, normalize, projective_count, FlagError, FlagSystem, PointKind, ProjPoint, Variant};
use crate::matrix::{EchelonBasis, Matrix, MatrixError};
use crate::parallel;
use crate::rng::Lcg;

/// Largest number of hyperplanes the cutting-set sweep will visit.
pub const MAX_HYPERPLANES: u64 = 1 << 22;

/// Largest `q^k` accepted by the pairwise support oracle.
pub const MAX_PAIRWISE: u64 = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error("{what} needs {size} cases, above the cap of {max}")]
    TooLarge { what: &'static str, size: u64, max: u64 },
    #[error("minimality sweeps need the incident-pairs system")]
    WrongVariant,
    #[error("the complement of the hyperplane is empty")]
    EmptyComplement,
    #[error("scalar matrices do not define a hyperplane")]
    ScalarMatrix,
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    Flag(#[from] FlagError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum MinimalityMethod {
    CuttingSet,
    GraphConnectivity,
    PairwiseSupport,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MinimalityReport {
    pub method: MinimalityMethod,
    pub result: bool,
    pub hyperplanes_checked: u64,
    /// Entries of the offending matrices (or messages, for the pairwise
    /// oracle), row-major.
    pub failures: Vec<Vec<FieldElement>>,
}

fn require_lambda1(sys: &FlagSystem) -> Result<(), AnalysisError> {
    match sys.variant() {
        Variant::Lambda1 => Ok(()),
        Variant::Lambda => Err(AnalysisError::WrongVariant),
    }
}

fn hyperplane_count(sys: &FlagSystem) -> Result<(CosetSpace, u64), AnalysisError> {
    let space = CosetSpace::new(sys.n(), sys.field());
    let count = space.projective_size();
    if count > MAX_HYPERPLANES {
        return Err(AnalysisError::TooLarge {
            what: "hyperplane sweep",
            size: count,
            max: MAX_HYPERPLANES,
        });
    }
    Ok((space, count))
}

/// Whether the flags in the hyperplane `{X : Tr(XM) = 0}` span a subspace
/// of codimension 1 in the span of the whole system.
fn spans_hyperplane(sys: &FlagSystem, m: &Matrix, target: usize) -> bool {
    let order = sys.order();
    let mut basis = EchelonBasis::new(sys.field(), order * order);
    for fl in sys.flags() {
        if m.bilinear(&fl.hyp.coords, &fl.point.coords) == 0 && basis.insert(fl.rep.entries()) && basis.rank() == target {
            return true;
        }
    }
    basis.rank() == target
}

/// The system is a cutting set iff every hyperplane section spans that
/// hyperplane. Hyperplanes of the span correspond to matrices `M` up to
/// `⟨M, I⟩`, so one representative per projective coset point is visited.
pub fn is_minimal_cutting_set(sys: &FlagSystem, threads: Option<usize>) -> Result<MinimalityReport, AnalysisError> {
    require_lambda1(sys)?;
    let (space, count) = hyperplane_count(sys)?;
    let target = space.dimension() - 1;
    let failures = collect_failures(&space, threads, |m| spans_hyperplane(sys, m, target));
    Ok(MinimalityReport {
        method: MinimalityMethod::CuttingSet,
        result: failures.is_empty(),
        hyperplanes_checked: count,
        failures,
    })
}

fn collect_failures(
    space: &CosetSpace,
    threads: Option<usize>,
    check: impl Fn(&Matrix) -> bool + Sync,
) -> Vec<Vec<FieldElement>> {
    let indices: Vec<u64> = space.projective_indices().collect();
    let mut failures: Vec<(u64, Vec<FieldElement>)> = parallel::install(threads, || {
        indices
            .par_iter()
            .filter_map(|&i| {
                let m = space.rep(i);
                (!check(&m)).then(|| (i, m.entries().to_vec()))
            })
            .collect()
    });
    failures.sort();
    failures.into_iter().map(|(_, e)| e).collect()
}

fn connected(adj: &[Vec<usize>]) -> bool {
    if adj.is_empty() {
        return true;
    }
    let mut seen = vec![false; adj.len()];
    let mut queue = VecDeque::from([0]);
    seen[0] = true;
    let mut reached = 1;
    while let Some(v) = queue.pop_front() {
        for &w in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                reached += 1;
                queue.push_back(w);
            }
        }
    }
    reached == adj.len()
}

/// Whether the flags outside the hyperplane defined by `M` induce a
/// connected subgraph of the collinearity graph.
pub fn complement_connected(sys: &FlagSystem, m: &Matrix) -> Result<bool, AnalysisError> {
    let rep = m.canonical_coset_rep()?;
    if rep.is_zero() {
        return Err(AnalysisError::ScalarMatrix);
    }
    let outside: Vec<usize> = (0..sys.len())
        .filter(|&i| {
            let fl = &sys.flags()[i];
            m.bilinear(&fl.hyp.coords, &fl.point.coords) != 0
        })
        .collect();
    if outside.is_empty() {
        return Err(AnalysisError::EmptyComplement);
    }
    Ok(connected(&sys.collinearity_graph(&outside)))
}

/// Minimality through connectivity of every hyperplane complement.
pub fn graph_connectivity_minimality(sys: &FlagSystem, threads: Option<usize>) -> Result<MinimalityReport, AnalysisError> {
    require_lambda1(sys)?;
    let (space, count) = hyperplane_count(sys)?;
    let failures = collect_failures(&space, threads, |m| complement_connected(sys, m).unwrap_or(false));
    Ok(MinimalityReport {
        method: MinimalityMethod::GraphConnectivity,
        result: failures.is_empty(),
        hyperplanes_checked: count,
        failures,
    })
}

/// Brute-force minimality of the code generated by `gen`: no nonzero
/// codeword's support contains the support of a non-proportional one.
pub fn pairwise_support_minimality_of(gen: &Matrix) -> Result<MinimalityReport, AnalysisError> {
    let f = gen.field();
    let q = f.q() as u64;
    let k = gen.rows();
    let size = q.checked_pow(k as u32).unwrap_or(u64::MAX);
    if size > MAX_PAIRWISE {
        return Err(AnalysisError::TooLarge {
            what: "pairwise support check",
            size,
            max: MAX_PAIRWISE,
        });
    }
    let words_len = gen.cols().div_ceil(64);
    let columns = gen.transpose();
    let mut words: Vec<(Vec<FieldElement>, Vec<FieldElement>, Vec<u64>)> = Vec::new();
    for code in 1..size {
        let mut msg = crate::flags::digits_of(code, q, k);
        if normalize(f, &mut msg) != Some(1) {
            continue;
        }
        let word = columns.mul_vec(&msg);
        if word.iter().all(|&x| x == 0) {
            continue;
        }
        let mut bits = vec![0u64; words_len];
        for (i, &x) in word.iter().enumerate() {
            if x != 0 {
                bits[i / 64] |= 1 << (i % 64);
            }
        }
        words.push((msg, word, bits));
    }
    let proportional = |a: &[FieldElement], b: &[FieldElement]| {
        let Some(i) = a.iter().position(|&x| x != 0) else {
            return false;
        };
        if b[i] == 0 {
            return false;
        }
        let l = f.div(b[i], a[i]);
        a.iter().zip(b).all(|(&x, &y)| f.mul(l, x) == y)
    };
    // a word is non-minimal when it contains the support of a
    // non-proportional word
    let failures = words
        .iter()
        .filter(|(_, wb, sb)| {
            words.iter().any(|(_, wa, sa)| {
                sa.iter().zip(sb).all(|(&x, &y)| x & !y == 0) && !proportional(wa, wb)
            })
        })
        .map(|(mb, _, _)| mb.clone())
        .collect::<Vec<_>>();
    Ok(MinimalityReport {
        method: MinimalityMethod::PairwiseSupport,
        result: failures.is_empty(),
        hyperplanes_checked: words.len() as u64,
        failures,
    })
}

pub fn pairwise_support_minimality(sys: &FlagSystem) -> Result<MinimalityReport, AnalysisError> {
    pairwise_support_minimality_of(&generator_matrix(sys)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum CodewordKind {
    Zero,
    Minimum,
    SecondLowest,
    Maximum,
    Intermediate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum GeometricTag {
    QuasiSingularNonsingular,
    Singular,
    SpreadType,
    NoEigenvalueNonSpread,
    Plain,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CodewordClass {
    pub kind: CodewordKind,
    /// `None` for the zero word.
    pub geometric_tag: Option<GeometricTag>,
    /// Point and hyperplane with `M ∝ x ξ`, for the rank-1 cases.
    pub witness: Option<(Vec<FieldElement>, Vec<FieldElement>)>,
    /// Outcome of the spread criterion, for matrices without eigenvalues.
    pub spread_criterion: Option<bool>,
    /// Degree of the minimal polynomial, for matrices without eigenvalues.
    pub min_poly_degree: Option<usize>,
}

/// Canonical point and hyperplane of a rank-1 matrix `N = x ξ`.
fn factor_rank_one(n: &Matrix) -> (Vec<FieldElement>, Vec<FieldElement>) {
    let f = n.field();
    let c = (0..n.cols()).find(|&c| (0..n.rows()).any(|r| n[(r, c)] != 0)).unwrap();
    let r = (0..n.rows()).find(|&r| n[(r, c)] != 0).unwrap();
    let mut x = n.column(c);
    let mut xi = n.row(r).to_vec();
    normalize(f, &mut x);
    normalize(f, &mut xi);
    (x, xi)
}

/// Classifies the codeword of `M` by the geometry of its hyperplane.
pub fn classify(m: &Matrix, n: usize, field: &Field) -> Result<CodewordClass, AnalysisError> {
    if !m.is_square() || m.rows() != n + 1 {
        return Err(CodeError::OrderMismatch {
            got: m.rows().max(m.cols()),
            expected: n + 1,
        }
        .into());
    }
    let rep = m.canonical_coset_rep()?;
    let mut class = CodewordClass {
        kind: CodewordKind::Zero,
        geometric_tag: None,
        witness: None,
        spread_criterion: None,
        min_poly_degree: None,
    };
    if rep.is_zero() {
        return Ok(class);
    }
    if let Some(rank_one) = field.elements().map(|l| rep.shift(l)).find(|c| c.rank() == 1) {
        class.witness = Some(factor_rank_one(&rank_one));
        if rank_one.trace()? != 0 {
            class.kind = CodewordKind::Minimum;
            class.geometric_tag = Some(GeometricTag::QuasiSingularNonsingular);
        } else {
            class.kind = CodewordKind::SecondLowest;
            class.geometric_tag = Some(GeometricTag::Singular);
        }
        return Ok(class);
    }
    if rep.eigen_profile()?.dims.is_empty() {
        let spread = rep.spread_criterion()?;
        class.kind = CodewordKind::Maximum;
        class.spread_criterion = Some(spread);
        class.min_poly_degree = Some(rep.min_poly_degree()?);
        class.geometric_tag = Some(if spread {
            GeometricTag::SpreadType
        } else {
            GeometricTag::NoEigenvalueNonSpread
        });
        return Ok(class);
    }
    class.kind = CodewordKind::Intermediate;
    class.geometric_tag = Some(GeometricTag::Plain);
    Ok(class)
}

/// Flags collinear with (or belonging to) the flags through the point `p`
/// or on the hyperplane `a`, built from the collinearity relation alone.
pub fn quasi_singular_hyperplane(p: &ProjPoint, a: &ProjPoint, sys: &FlagSystem) -> Result<BTreeSet<usize>, AnalysisError> {
    for (pt, kind) in [(p, PointKind::Point), (a, PointKind::Hyperplane)] {
        if pt.kind != kind {
            return Err(FlagError::KindMismatch {
                expected: kind,
                got: pt.kind,
            }
            .into());
        }
    }
    let flags = sys.flags();
    let members: Vec<usize> = (0..flags.len())
        .filter(|&i| flags[i].point.coords == p.coords || flags[i].hyp.coords == a.coords)
        .collect();
    let mut out: BTreeSet<usize> = members.iter().copied().collect();
    for (j, fl) in flags.iter().enumerate() {
        if out.contains(&j) {
            continue;
        }
        if members.iter().any(|&i| collinear(fl, &flags[i]).unwrap_or(false)) {
            out.insert(j);
        }
    }
    Ok(out)
}

/// Flags `X_i` with `Tr(X_i M) = 0`.
pub fn trace_orthogonal_set(sys: &FlagSystem, m: &Matrix) -> BTreeSet<usize> {
    sys.evaluate(m)
        .iter()
        .enumerate()
        .filter(|(_, &v)| v == 0)
        .map(|(i, _)| i)
        .collect()
}

/// Size of a singular hyperplane (`p ∈ A`).
pub fn singular_hyperplane_size(n: usize, q: u64) -> u64 {
    common_part(n, q) + projective_count(n - 1, q) * q.pow(n as u32 - 1)
}

/// Size of a quasi-singular, non-singular hyperplane (`p ∉ A`).
pub fn quasi_singular_hyperplane_size(n: usize, q: u64) -> u64 {
    common_part(n, q) + (projective_count(n - 1, q) + 1) * q.pow(n as u32 - 1)
}

fn common_part(n: usize, q: u64) -> u64 {
    (q.pow(n as u32 + 1) - 1) * (q.pow(n as u32 - 1) - 1) / ((q - 1) * (q - 1))
}

/// Checks that the flag permutation induced by `g` carries the codeword of
/// `g⁻¹ M g` onto the codeword of `M`, up to the per-coordinate scalars
/// coming from renormalizing the moved point and hyperplane, and that the
/// two words have equal weight.
pub fn automorphism_check(sys: &FlagSystem, g: &Matrix, m: &Matrix) -> Result<bool, AnalysisError> {
    let f = sys.field();
    let perm = sys.permutation(g)?;
    let word = code::encode(m, sys)?.values;
    let moved = code::encode(&m.conjugate(g)?, sys)?.values;
    let componentwise = (0..sys.len()).all(|i| word[perm.image[i]] == f.mul(perm.scale[i], moved[i]));
    Ok(componentwise && code::hamming_weight(&word) == code::hamming_weight(&moved))
}

/// Seeded rejection sampling of an invertible matrix.
pub fn random_invertible(field: &Field, order: usize, rng: &mut Lcg) -> Matrix {
    loop {
        let g = random_matrix(field, order, rng);
        if g.rank() == order {
            return g;
        }
    }
}

pub fn random_matrix(field: &Field, order: usize, rng: &mut Lcg) -> Matrix {
    let data = (0..order * order).map(|_| rng.below(field.q() as u64) as FieldElement).collect();
    Matrix::new(field, order, order, data).expect("entries are in range")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct AbRatio {
    pub w_max: u64,
    pub w_min: u64,
    /// `w_max / w_min` in lowest terms.
    pub ratio: (u64, u64),
    /// `q / (q-1)`.
    pub bound: (u64, u64),
    /// Whether the ratio exceeds the bound, i.e. the sufficient condition
    /// for minimality does not apply.
    pub exceeds: bool,
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn reduce((a, b): (u64, u64)) -> (u64, u64) {
    let g = gcd(a, b);
    (a / g, b / g)
}

pub fn ab_ratio(n: usize, field: &Field) -> AbRatio {
    let p = code::params(n, field);
    let q = field.q() as u64;
    let ratio = reduce((p.w_max, p.d));
    let bound = reduce((q, q - 1));
    AbRatio {
        w_max: p.w_max,
        w_min: p.d,
        ratio,
        bound,
        exceeds: (ratio.0 as u128) * (bound.1 as u128) > (bound.0 as u128) * (ratio.1 as u128),
    }
}
