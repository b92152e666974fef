//! 2-spreads of GF(q)^4 by field reduction.
//!
//! GF(q)^4 is identified with GF(q²)^2 coordinate-wise: a vector
//! `(a₁, b₁, a₂, b₂)` stands for `(a₁ + b₁θ, a₂ + b₂θ)`, where θ is a root of
//! the default irreducible quadratic over GF(q). Each of the q²+1 points of
//! the projective line over GF(q²) is a 2-dimensional GF(q)-subspace of the
//! 4-space, and together they partition its nonzero vectors.

use crate::error::{Error, Result};
use crate::field::Field;
use crate::matrix::vectors_rank;

/// Ambient dimension of the spread.
pub const DIM: usize = 4;

pub type Vec4 = [u32; DIM];

/// A one-dimensional subspace, stored as its unique representative whose first
/// nonzero coordinate is 1. The derived ordering is the canonical order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProjectivePoint {
    rep: Vec4,
}

impl ProjectivePoint {
    /// Canonical point spanned by `v`, or `None` for the zero vector.
    pub fn from_vector(field: &Field, v: &Vec4) -> Option<Self> {
        canonicalize(field, v).map(|c| ProjectivePoint { rep: c.try_into().unwrap() })
    }

    pub fn rep(&self) -> &Vec4 {
        &self.rep
    }
}

/// Scales `v` so its first nonzero coordinate is 1.
pub fn canonicalize(field: &Field, v: &[u32]) -> Option<Vec<u32>> {
    let lead = *v.iter().find(|&&x| x != 0)?;
    let inv = field.inv(lead);
    Some(v.iter().map(|&x| field.mul(x, inv)).collect())
}

/// A 2-dimensional subspace of GF(q)^4.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Plane {
    pub id: usize,
    pub basis: [Vec4; 2],
}

impl Plane {
    pub fn contains(&self, field: &Field, v: &Vec4) -> bool {
        vectors_rank(field, &[&self.basis[0], &self.basis[1], v]) == 2
    }
}

/// The canonical points of a plane, in canonical order. There are q+1 of them.
pub fn projective_points(field: &Field, plane: &Plane) -> Vec<ProjectivePoint> {
    let [b1, b2] = &plane.basis;
    let mut pts: Vec<ProjectivePoint> = std::iter::once(*b2)
        .chain(field.elements().map(|t| {
            let mut v = *b1;
            for (x, &y) in v.iter_mut().zip(b2) {
                *x = field.add(*x, field.mul(t, y));
            }
            v
        }))
        .filter_map(|v| ProjectivePoint::from_vector(field, &v))
        .collect();
    pts.sort();
    pts.dedup();
    pts
}

/// Arithmetic in GF(q²) = GF(q)[θ]/(θ² + c₁θ + c₀), elements as `(a, b) = a + bθ`.
#[derive(Debug, Clone)]
pub struct QuadraticExtension {
    base: Field,
    c0: u32,
    c1: u32,
}

impl QuadraticExtension {
    /// Uses the smallest monic irreducible quadratic, ordered by `c₀ + c₁·q`.
    pub fn new(base: &Field) -> Self {
        let q = base.order();
        for code in 0..q * q {
            let (c0, c1) = (code % q, code / q);
            let has_root = base.elements().any(|t| base.add(base.add(base.mul(t, t), base.mul(c1, t)), c0) == 0);
            if !has_root {
                return QuadraticExtension { base: base.clone(), c0, c1 };
            }
        }
        unreachable!("irreducible quadratics exist over every finite field")
    }

    /// Coefficients `[c₀, c₁, 1]` of the modulus.
    pub fn modulus(&self) -> [u32; 3] {
        [self.c0, self.c1, 1]
    }

    pub fn mul(&self, x: (u32, u32), y: (u32, u32)) -> (u32, u32) {
        let f = &self.base;
        let (a, b) = x;
        let (c, d) = y;
        let bd = f.mul(b, d);
        let re = f.sub(f.mul(a, c), f.mul(bd, self.c0));
        let im = f.sub(f.add(f.mul(a, d), f.mul(b, c)), f.mul(bd, self.c1));
        (re, im)
    }

    pub fn elements(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        let q = self.base.order();
        (0..q * q).map(move |code| (code % q, code / q))
    }
}

/// A set of planes that is meant to partition GF(q)^4 \ {0}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Spread {
    field: Field,
    planes: Vec<Plane>,
}

/// Outcome of [`Spread::verify`], one flag per invariant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpreadReport {
    pub size_ok: bool,
    pub planes_ok: bool,
    pub disjoint_ok: bool,
    pub covering_ok: bool,
}

impl SpreadReport {
    pub fn is_valid(&self) -> bool {
        self.size_ok && self.planes_ok && self.disjoint_ok && self.covering_ok
    }
}

/// Exhaustive enumeration is used up to this order; beyond it, pairwise ranks
/// plus counting.
pub const EXHAUSTIVE_LIMIT: u32 = 16;

impl Spread {
    /// The field-reduction spread, with plane ids in canonical order of the
    /// GF(q²)-line points: `⟨(0,1)⟩` first, then `⟨(1,λ)⟩` by encoding of λ.
    pub fn build(field: &Field) -> Self {
        let ext = QuadraticExtension::new(field);
        let theta = (0, 1);
        let mut line_points = vec![((0, 0), (1, 0))];
        line_points.extend(ext.elements().map(|lambda| ((1, 0), lambda)));
        let planes = line_points
            .into_iter()
            .enumerate()
            .map(|(id, (x, y))| {
                let (tx, ty) = (ext.mul(theta, x), ext.mul(theta, y));
                Plane { id, basis: [[x.0, x.1, y.0, y.1], [tx.0, tx.1, ty.0, ty.1]] }
            })
            .collect();
        Spread { field: field.clone(), planes }
    }

    /// Wraps externally supplied planes without checking them; call
    /// [`Spread::verify`] before relying on the result.
    pub fn from_planes(field: &Field, planes: Vec<Plane>) -> Result<Self> {
        let q = field.order();
        if planes.iter().flat_map(|p| p.basis.iter().flatten()).any(|&x| x >= q) {
            return Err(Error::Format("spread entry outside the field".into()));
        }
        Ok(Spread { field: field.clone(), planes })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn planes(&self) -> &[Plane] {
        &self.planes
    }

    pub fn len(&self) -> usize {
        self.planes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.planes.is_empty()
    }

    pub fn projective_points(&self, index: usize) -> Vec<ProjectivePoint> {
        projective_points(&self.field, &self.planes[index])
    }

    pub fn verify(&self) -> SpreadReport {
        let f = &self.field;
        let q = f.order() as usize;
        let size_ok = self.planes.len() == q * q + 1;
        let planes_ok = self.planes.iter().all(|p| vectors_rank(f, &[&p.basis[0], &p.basis[1]]) == 2);
        if !planes_ok {
            return SpreadReport { size_ok, planes_ok, disjoint_ok: false, covering_ok: false };
        }
        if f.order() <= EXHAUSTIVE_LIMIT {
            let (disjoint_ok, covering_ok) = self.exhaustive_cover();
            SpreadReport { size_ok, planes_ok, disjoint_ok, covering_ok }
        } else {
            let disjoint_ok = self.pairwise_disjoint();
            // q²+1 pairwise-trivial planes hold (q²+1)(q²−1) = q⁴−1 distinct nonzero vectors
            SpreadReport { size_ok, planes_ok, disjoint_ok, covering_ok: disjoint_ok && size_ok }
        }
    }

    pub fn is_valid(&self) -> bool {
        self.verify().is_valid()
    }

    /// Counts how many planes contain each vector of the 4-space.
    fn exhaustive_cover(&self) -> (bool, bool) {
        let f = &self.field;
        let q = f.order() as usize;
        let mut hits = vec![0u32; q.pow(4)];
        for p in &self.planes {
            let [b1, b2] = &p.basis;
            for a in f.elements() {
                for b in f.elements() {
                    let mut idx = 0;
                    for i in (0..DIM).rev() {
                        let x = f.add(f.mul(a, b1[i]), f.mul(b, b2[i]));
                        idx = idx * q + x as usize;
                    }
                    hits[idx] += 1;
                }
            }
        }
        let nonzero = &hits[1..];
        (nonzero.iter().all(|&h| h <= 1), nonzero.iter().all(|&h| h >= 1))
    }

    fn pairwise_disjoint(&self) -> bool {
        use rayon::prelude::*;
        let f = &self.field;
        (0..self.planes.len()).into_par_iter().all(|i| {
            let a = &self.planes[i].basis;
            self.planes[i + 1..].iter().all(|p| {
                let b = &p.basis;
                vectors_rank(f, &[&a[0], &a[1], &b[0], &b[1]]) == DIM
            })
        })
    }
}
