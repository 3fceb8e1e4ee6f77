//! Points and hyperplanes of PG(n,q), flags, and the projective systems
//! built from them.
//!
//! A point `[x]` is a column vector and a hyperplane `[ξ]` a row vector,
//! each scaled so that its leftmost nonzero coordinate is 1. A pair
//! `([x],[ξ])` is represented in the matrix space by the rank-1 product
//! `x ξ`; the pair is a flag (the point lies on the hyperplane) exactly when
//! that product has trace zero.

use std::collections::HashMap;

use serde::Serialize;
use thiserror::Error;

use crate::field::{Field, FieldElement};
use crate::matrix::{Matrix, MatrixError};

/// Upper bound on the number of flags a system may hold.
pub const MAX_FLAGS: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FlagError {
    #[error("system would have {0} flags, above the cap of {MAX_FLAGS}")]
    TooLarge(u64),
    #[error("n must be at least 1")]
    BadDimension,
    #[error("a flag is not collinear with itself")]
    IdenticalFlags,
    #[error("expected a {expected:?}, got a {got:?}")]
    KindMismatch { expected: PointKind, got: PointKind },
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum PointKind {
    /// A point of PG(V), written as a column.
    Point,
    /// A hyperplane of PG(V), i.e. a point of PG(V*), written as a row.
    Hyperplane,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Variant {
    /// Every (point, hyperplane) pair: the Segre variety.
    Lambda,
    /// Incident pairs only.
    Lambda1,
}

/// Big-endian base-`q` digits of `code`, `len` of them.
pub fn digits_of(code: u64, q: u64, len: usize) -> Vec<FieldElement> {
    let mut v = vec![0; len];
    let mut c = code;
    for slot in v.iter_mut().rev() {
        *slot = (c % q) as FieldElement;
        c /= q;
    }
    v
}

/// Scales `v` so that its leftmost nonzero coordinate is 1, returning the
/// scale factor used. `None` for the zero vector.
pub fn normalize(field: &Field, v: &mut [FieldElement]) -> Option<FieldElement> {
    let lead = *v.iter().find(|&&c| c != 0)?;
    let s = field.inv(lead);
    for c in v.iter_mut() {
        *c = field.mul(*c, s);
    }
    Some(s)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjPoint {
    pub coords: Vec<FieldElement>,
    pub kind: PointKind,
}

impl ProjPoint {
    /// Canonical representative of the span of `coords`; `None` if zero.
    pub fn new(field: &Field, mut coords: Vec<FieldElement>, kind: PointKind) -> Option<Self> {
        normalize(field, &mut coords)?;
        Some(ProjPoint { coords, kind })
    }
}

/// All points of PG(n,q) of the given kind, lexicographically ordered.
pub fn pg_points(n: usize, field: &Field, kind: PointKind) -> Vec<ProjPoint> {
    let q = field.q() as u64;
    let len = n + 1;
    (1..q.pow(len as u32))
        .map(|code| digits_of(code, q, len))
        .filter(|v| v.iter().find(|&&c| c != 0) == Some(&1))
        .map(|coords| ProjPoint { coords, kind })
        .collect()
}

fn dot(field: &Field, a: &[FieldElement], b: &[FieldElement]) -> FieldElement {
    a.iter().zip(b).fold(0, |acc, (&x, &y)| field.add(acc, field.mul(x, y)))
}

/// Whether the point `x` lies on the hyperplane `xi`.
pub fn incident(field: &Field, x: &ProjPoint, xi: &ProjPoint) -> Result<bool, FlagError> {
    if x.kind != PointKind::Point {
        return Err(FlagError::KindMismatch {
            expected: PointKind::Point,
            got: x.kind,
        });
    }
    if xi.kind != PointKind::Hyperplane {
        return Err(FlagError::KindMismatch {
            expected: PointKind::Hyperplane,
            got: xi.kind,
        });
    }
    Ok(dot(field, &x.coords, &xi.coords) == 0)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Flag {
    pub point: ProjPoint,
    pub hyp: ProjPoint,
    /// Position of `point` in the lexicographic point list.
    pub point_idx: usize,
    /// Position of `hyp` in the lexicographic hyperplane list.
    pub hyp_idx: usize,
    /// The rank-1 matrix `x ξ`.
    pub rep: Matrix,
}

/// Whether two distinct flags lie on a common line: they share their point
/// or share their hyperplane.
pub fn collinear(a: &Flag, b: &Flag) -> Result<bool, FlagError> {
    if a.point == b.point && a.hyp == b.hyp {
        return Err(FlagError::IdenticalFlags);
    }
    Ok(a.point == b.point || a.hyp == b.hyp)
}

/// Image of a flag under `g`: the point `[g x]` and the hyperplane `[ξ g⁻¹]`.
pub fn flag_action(field: &Field, g: &Matrix, a: &Flag) -> Result<(ProjPoint, ProjPoint), FlagError> {
    let g_inv = g.inverse()?;
    Ok(act(field, g, &g_inv, &a.point, &a.hyp).0)
}

type Acted = ((ProjPoint, ProjPoint), FieldElement);

/// Returns the image pair together with the product of the two
/// normalization factors, so that `rep(image) = s · g X g⁻¹`.
fn act(field: &Field, g: &Matrix, g_inv: &Matrix, x: &ProjPoint, xi: &ProjPoint) -> Acted {
    let mut gx = g.mul_vec(&x.coords);
    let mut xig = g_inv.vec_mul(&xi.coords);
    let s1 = normalize(field, &mut gx).expect("g is invertible");
    let s2 = normalize(field, &mut xig).expect("g is invertible");
    (
        (
            ProjPoint {
                coords: gx,
                kind: PointKind::Point,
            },
            ProjPoint {
                coords: xig,
                kind: PointKind::Hyperplane,
            },
        ),
        field.mul(s1, s2),
    )
}

/// Permutation of a flag system induced by an invertible matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlagPermutation {
    /// `image[i]` is the position of the image of flag `i`.
    pub image: Vec<usize>,
    /// `scale[i]` satisfies `X_{image[i]} = scale[i] · g X_i g⁻¹`.
    pub scale: Vec<FieldElement>,
}

/// An ordered projective system of flags (or of all point-hyperplane pairs).
#[derive(Debug, Clone)]
pub struct FlagSystem {
    n: usize,
    field: Field,
    variant: Variant,
    points: Vec<ProjPoint>,
    hyps: Vec<ProjPoint>,
    flags: Vec<Flag>,
    index: HashMap<(usize, usize), usize>,
    point_lookup: HashMap<Vec<FieldElement>, usize>,
    hyp_lookup: HashMap<Vec<FieldElement>, usize>,
}

pub fn projective_count(n: usize, q: u64) -> u64 {
    (q.pow(n as u32 + 1) - 1) / (q - 1)
}

impl FlagSystem {
    /// Builds the system, ordered by hyperplane then by point.
    pub fn build(n: usize, field: &Field, variant: Variant) -> Result<Self, FlagError> {
        if n == 0 {
            return Err(FlagError::BadDimension);
        }
        let q = field.q() as u64;
        let np = projective_count(n, q);
        let expected = match variant {
            Variant::Lambda => np.checked_mul(np),
            Variant::Lambda1 => np.checked_mul(projective_count(n - 1, q)),
        }
        .unwrap_or(u64::MAX);
        if expected > MAX_FLAGS {
            return Err(FlagError::TooLarge(expected));
        }

        let points = pg_points(n, field, PointKind::Point);
        let hyps = pg_points(n, field, PointKind::Hyperplane);
        let mut flags = Vec::with_capacity(expected as usize);
        let mut index = HashMap::with_capacity(expected as usize);
        for (hi, h) in hyps.iter().enumerate() {
            for (pi, pt) in points.iter().enumerate() {
                if variant == Variant::Lambda1 && dot(field, &pt.coords, &h.coords) != 0 {
                    continue;
                }
                index.insert((pi, hi), flags.len());
                flags.push(Flag {
                    point: pt.clone(),
                    hyp: h.clone(),
                    point_idx: pi,
                    hyp_idx: hi,
                    rep: Matrix::outer(field, &pt.coords, &h.coords),
                });
            }
        }
        let point_lookup = points.iter().enumerate().map(|(i, p)| (p.coords.clone(), i)).collect();
        let hyp_lookup = hyps.iter().enumerate().map(|(i, p)| (p.coords.clone(), i)).collect();
        Ok(FlagSystem {
            n,
            field: field.clone(),
            variant,
            points,
            hyps,
            flags,
            index,
            point_lookup,
            hyp_lookup,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> usize {
        self.n + 1
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn flags(&self) -> &[Flag] {
        &self.flags
    }

    pub fn len(&self) -> usize {
        self.flags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flags.is_empty()
    }

    pub fn points(&self) -> &[ProjPoint] {
        &self.points
    }

    pub fn hyperplanes(&self) -> &[ProjPoint] {
        &self.hyps
    }

    /// Position of the flag with the given canonical point and hyperplane.
    pub fn position(&self, point: &ProjPoint, hyp: &ProjPoint) -> Option<usize> {
        let pi = *self.point_lookup.get(&point.coords)?;
        let hi = *self.hyp_lookup.get(&hyp.coords)?;
        self.index.get(&(pi, hi)).copied()
    }

    /// Evaluates `Tr(X_i M) = ξ_i M x_i` at every flag.
    pub fn evaluate(&self, m: &Matrix) -> Vec<FieldElement> {
        self.flags
            .iter()
            .map(|fl| m.bilinear(&fl.hyp.coords, &fl.point.coords))
            .collect()
    }

    /// Number of flags with `Tr(X_i M) ≠ 0`, computed without allocating the
    /// codeword.
    pub fn weight_of(&self, m: &Matrix) -> usize {
        self.flags
            .iter()
            .filter(|fl| m.bilinear(&fl.hyp.coords, &fl.point.coords) != 0)
            .count()
    }

    pub fn permutation(&self, g: &Matrix) -> Result<FlagPermutation, FlagError> {
        let g_inv = g.inverse()?;
        let mut image = Vec::with_capacity(self.len());
        let mut scale = Vec::with_capacity(self.len());
        for fl in &self.flags {
            let ((pt, h), s) = act(&self.field, g, &g_inv, &fl.point, &fl.hyp);
            let pos = self
                .position(&pt, &h)
                .expect("the action preserves incidence");
            image.push(pos);
            scale.push(s);
        }
        Ok(FlagPermutation { image, scale })
    }

    /// One line per flag: `index point-coords | hyp-coords`.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (i, fl) in self.flags.iter().enumerate() {
            let join = |v: &[FieldElement]| v.iter().map(u32::to_string).collect::<Vec<_>>().join(" ");
            out.push_str(&format!("{i} {} | {}\n", join(&fl.point.coords), join(&fl.hyp.coords)));
        }
        out
    }

    /// Adjacency lists of the collinearity graph restricted to `subset`
    /// (positions into `flags`). Returned lists index into `subset`.
    pub fn collinearity_graph(&self, subset: &[usize]) -> Vec<Vec<usize>> {
        let mut by_point: HashMap<usize, Vec<usize>> = HashMap::new();
        let mut by_hyp: HashMap<usize, Vec<usize>> = HashMap::new();
        for (k, &i) in subset.iter().enumerate() {
            by_point.entry(self.flags[i].point_idx).or_default().push(k);
            by_hyp.entry(self.flags[i].hyp_idx).or_default().push(k);
        }
        subset
            .iter()
            .enumerate()
            .map(|(k, &i)| {
                let fl = &self.flags[i];
                let mut adj: Vec<usize> = by_point[&fl.point_idx]
                    .iter()
                    .chain(&by_hyp[&fl.hyp_idx])
                    .copied()
                    .filter(|&j| j != k)
                    .collect();
                adj.sort_unstable();
                adj.dedup();
                adj
            })
            .collect()
    }
}
