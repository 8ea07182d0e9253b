//! Incidence geometry of AG(2,q) and PG(2,q).
//!
//! Homogeneous triples are normalized so the first nonzero coordinate is 1 and
//! are numbered `(1,a,b) -> a*q + b`, `(0,1,b) -> q^2 + b`, `(0,0,1) -> q^2 + q`.
//! Projective points and lines both use this numbering. Affine points `(x,y)`
//! are numbered `x*q + y`; affine lines are the projective lines other than
//! the line at infinity `z = 0`, keeping their projective ids.

use std::fmt;
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{FieldElement, FieldSpec};
use crate::pointset::PointSet;

/// Planes are only built for `q` up to this order.
pub const MAX_PLANE_ORDER: u32 = 128;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PlaneKind {
    Affine,
    Projective,
}

impl PlaneKind {
    pub fn as_str(self) -> &'static str {
        match self {
            PlaneKind::Affine => "affine",
            PlaneKind::Projective => "projective",
        }
    }
}

impl fmt::Display for PlaneKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for PlaneKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "affine" => Ok(PlaneKind::Affine),
            "projective" => Ok(PlaneKind::Projective),
            other => Err(Error::Parse(format!("unknown plane kind {other:?}"))),
        }
    }
}

pub type Triple = [FieldElement; 3];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Point {
    pub id: usize,
    /// Normalized homogeneous coordinates; `(x, y, 1)` in the affine plane.
    pub coords: Triple,
}

#[derive(Clone, Debug)]
pub struct Line {
    pub id: usize,
    /// Normalized coefficients `[a, b, c]` of `ax + by + cz = 0`.
    pub coords: Triple,
    pub incidence: PointSet,
    points: Vec<u32>,
}

impl Line {
    /// Point ids on the line in ascending order.
    pub fn points(&self) -> &[u32] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// An affine or projective plane over GF(q) with all lines materialized.
pub struct PlaneModel {
    field: Arc<FieldSpec>,
    kind: PlaneKind,
    coords: Vec<Triple>,
    lines: Vec<Line>,
    /// `q + 1` line ids per point, ascending.
    point_lines: Vec<u32>,
}

impl fmt::Debug for PlaneModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PlaneModel")
            .field("q", &self.q())
            .field("kind", &self.kind)
            .finish()
    }
}

impl PlaneModel {
    pub fn affine(field: FieldSpec) -> Result<Self> {
        Self::new(field, PlaneKind::Affine)
    }

    pub fn projective(field: FieldSpec) -> Result<Self> {
        Self::new(field, PlaneKind::Projective)
    }

    /// Convenience constructor from the field order.
    pub fn from_order(q: u64, kind: PlaneKind) -> Result<Self> {
        Self::new(FieldSpec::from_order(q)?, kind)
    }

    pub fn new(field: FieldSpec, kind: PlaneKind) -> Result<Self> {
        let q = field.q();
        if q > MAX_PLANE_ORDER {
            return Err(Error::PlaneTooLarge(q));
        }
        let field = Arc::new(field);
        let qs = q as usize;
        let num_points = match kind {
            PlaneKind::Affine => qs * qs,
            PlaneKind::Projective => qs * qs + qs + 1,
        };
        let num_lines = qs * qs + qs + if kind == PlaneKind::Projective { 1 } else { 0 };

        let coords: Vec<Triple> = match kind {
            PlaneKind::Affine => (0..num_points)
                .map(|id| {
                    [
                        FieldElement::from_index_unchecked((id / qs) as u32),
                        FieldElement::from_index_unchecked((id % qs) as u32),
                        FieldElement::ONE,
                    ]
                })
                .collect(),
            PlaneKind::Projective => (0..num_points).map(|id| triple_of_index(q, id)).collect(),
        };

        let mut lines = Vec::with_capacity(num_lines);
        for lid in 0..num_lines {
            let lc = triple_of_index(q, lid);
            let mut points: Vec<u32> = points_on_line(&field, lc)
                .into_iter()
                .filter_map(|h| match kind {
                    PlaneKind::Affine => affine_index(&field, h),
                    PlaneKind::Projective => Some(index_of_triple(q, normalize(&field, h))),
                })
                .map(|id| id as u32)
                .collect();
            points.sort_unstable();
            let incidence = PointSet::from_ids(num_points, points.iter().map(|&p| p as usize))
                .expect("line points are in range");
            lines.push(Line {
                id: lid,
                coords: lc,
                incidence,
                points,
            });
        }

        let mut buckets: Vec<Vec<u32>> = vec![Vec::with_capacity(qs + 1); num_points];
        for line in &lines {
            for &p in &line.points {
                buckets[p as usize].push(line.id as u32);
            }
        }
        let point_lines = buckets.into_iter().flatten().collect::<Vec<_>>();
        debug_assert_eq!(point_lines.len(), num_points * (qs + 1));

        Ok(PlaneModel {
            field,
            kind,
            coords,
            lines,
            point_lines,
        })
    }

    #[inline]
    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.field.q()
    }

    #[inline]
    pub fn kind(&self) -> PlaneKind {
        self.kind
    }

    #[inline]
    pub fn num_points(&self) -> usize {
        self.coords.len()
    }

    #[inline]
    pub fn num_lines(&self) -> usize {
        self.lines.len()
    }

    /// Points per line: `q` affine, `q + 1` projective.
    pub fn line_size(&self) -> usize {
        match self.kind {
            PlaneKind::Affine => self.q() as usize,
            PlaneKind::Projective => self.q() as usize + 1,
        }
    }

    pub fn empty_set(&self) -> PointSet {
        PointSet::new(self.num_points())
    }

    pub fn full_set(&self) -> PointSet {
        PointSet::full(self.num_points())
    }

    pub fn point(&self, id: usize) -> Result<Point> {
        self.check(id)?;
        Ok(Point {
            id,
            coords: self.coords[id],
        })
    }

    #[inline]
    pub fn coords(&self, id: usize) -> Triple {
        self.coords[id]
    }

    /// Affine point id of `(x, y)`.
    pub fn affine_point(&self, x: u32, y: u32) -> Result<usize> {
        let q = self.q();
        if self.kind != PlaneKind::Affine {
            return Err(Error::Precondition(
                "affine coordinates on a projective plane".into(),
            ));
        }
        if x >= q || y >= q {
            return Err(Error::Precondition(format!(
                "coordinates ({x},{y}) outside GF({q})"
            )));
        }
        Ok((x * q + y) as usize)
    }

    /// Point id of a nonzero homogeneous triple (any scaling).
    pub fn point_of(&self, h: Triple) -> Result<usize> {
        if h.iter().all(|c| c.is_zero()) {
            return Err(Error::Precondition("zero vector is not a point".into()));
        }
        match self.kind {
            PlaneKind::Projective => Ok(index_of_triple(self.q(), normalize(&self.field, h))),
            PlaneKind::Affine => affine_index(&self.field, h)
                .ok_or_else(|| Error::Precondition("point at infinity".into())),
        }
    }

    pub fn lines(&self) -> &[Line] {
        &self.lines
    }

    pub fn line(&self, id: usize) -> &Line {
        &self.lines[id]
    }

    /// Exhaustive, duplicate-free list of lines.
    pub fn all_lines(&self) -> &[Line] {
        &self.lines
    }

    /// Ids of the `q + 1` lines through a point.
    #[inline]
    pub fn lines_through(&self, id: usize) -> &[u32] {
        let k = self.q() as usize + 1;
        &self.point_lines[id * k..(id + 1) * k]
    }

    /// Id of the unique line through two distinct points.
    pub fn line_id_through(&self, a: usize, b: usize) -> Result<usize> {
        self.check(a)?;
        self.check(b)?;
        if a == b {
            return Err(Error::SamePoint);
        }
        Ok(self.line_id_unchecked(a, b))
    }

    #[inline]
    pub(crate) fn line_id_unchecked(&self, a: usize, b: usize) -> usize {
        let l = cross(&self.field, self.coords[a], self.coords[b]);
        index_of_triple(self.q(), normalize(&self.field, l))
    }

    pub fn line_through(&self, a: &Point, b: &Point) -> Result<&Line> {
        Ok(&self.lines[self.line_id_through(a.id, b.id)?])
    }

    /// Whether some line contains all three points; repeated points count as collinear.
    pub fn collinear(&self, a: usize, b: usize, c: usize) -> bool {
        det3(&self.field, self.coords[a], self.coords[b], self.coords[c]).is_zero()
    }

    fn check(&self, id: usize) -> Result<()> {
        if id < self.num_points() {
            Ok(())
        } else {
            Err(Error::PointOutOfRange {
                id,
                len: self.num_points(),
            })
        }
    }

    /// Affine plane point id -> projective point id of `(x : y : 1)`.
    pub fn embed_affine_point(&self, projective: &PlaneModel, id: usize) -> Result<usize> {
        if self.kind != PlaneKind::Affine
            || projective.kind != PlaneKind::Projective
            || self.q() != projective.q()
        {
            return Err(Error::Precondition(
                "embedding needs AG(2,q) into PG(2,q)".into(),
            ));
        }
        self.check(id)?;
        projective.point_of(self.coords[id])
    }
}

/// Homogeneous triple for a normalized index.
pub(crate) fn triple_of_index(q: u32, id: usize) -> Triple {
    let qs = q as usize;
    let f = |v: usize| FieldElement::from_index_unchecked(v as u32);
    if id < qs * qs {
        [FieldElement::ONE, f(id / qs), f(id % qs)]
    } else if id < qs * qs + qs {
        [FieldElement::ZERO, FieldElement::ONE, f(id - qs * qs)]
    } else {
        [FieldElement::ZERO, FieldElement::ZERO, FieldElement::ONE]
    }
}

/// Index of a normalized triple.
pub(crate) fn index_of_triple(q: u32, t: Triple) -> usize {
    let qs = q as usize;
    if !t[0].is_zero() {
        t[1].index() as usize * qs + t[2].index() as usize
    } else if !t[1].is_zero() {
        qs * qs + t[2].index() as usize
    } else {
        qs * qs + qs
    }
}

/// Scales a nonzero triple so its first nonzero coordinate is 1.
pub(crate) fn normalize(f: &FieldSpec, t: Triple) -> Triple {
    let lead = t
        .iter()
        .copied()
        .find(|c| !c.is_zero())
        .expect("nonzero triple");
    if lead == FieldElement::ONE {
        return t;
    }
    let s = f.inv(lead).expect("lead is nonzero");
    [f.mul(t[0], s), f.mul(t[1], s), f.mul(t[2], s)]
}

fn affine_index(f: &FieldSpec, h: Triple) -> Option<usize> {
    if h[2].is_zero() {
        return None;
    }
    let zi = f.inv(h[2]).ok()?;
    let x = f.mul(h[0], zi).index() as usize;
    let y = f.mul(h[1], zi).index() as usize;
    Some(x * f.q() as usize + y)
}

pub(crate) fn cross(f: &FieldSpec, a: Triple, b: Triple) -> Triple {
    [
        f.sub(f.mul(a[1], b[2]), f.mul(a[2], b[1])),
        f.sub(f.mul(a[2], b[0]), f.mul(a[0], b[2])),
        f.sub(f.mul(a[0], b[1]), f.mul(a[1], b[0])),
    ]
}

pub(crate) fn dot(f: &FieldSpec, a: Triple, b: Triple) -> FieldElement {
    f.add(
        f.add(f.mul(a[0], b[0]), f.mul(a[1], b[1])),
        f.mul(a[2], b[2]),
    )
}

pub(crate) fn det3(f: &FieldSpec, a: Triple, b: Triple, c: Triple) -> FieldElement {
    dot(f, a, cross(f, b, c))
}

/// All `q + 1` homogeneous points on the line with coefficients `l` (normalized).
fn points_on_line(f: &FieldSpec, l: Triple) -> Vec<Triple> {
    let zero = FieldElement::ZERO;
    let one = FieldElement::ONE;
    let (u, v) = if l[0] == one {
        ([f.neg(l[1]), one, zero], [f.neg(l[2]), zero, one])
    } else if l[1] == one {
        ([one, zero, zero], [zero, f.neg(l[2]), one])
    } else {
        ([one, zero, zero], [zero, one, zero])
    };
    let mut out = Vec::with_capacity(f.q() as usize + 1);
    out.push(u);
    for lambda in f.elements() {
        out.push([
            f.add(v[0], f.mul(lambda, u[0])),
            f.add(v[1], f.mul(lambda, u[1])),
            f.add(v[2], f.mul(lambda, u[2])),
        ]);
    }
    out
}

/// An invertible 3x3 matrix acting on homogeneous coordinates.
///
/// Affine maps `v -> Mv + t` use the bottom row `(0, 0, 1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Collineation {
    pub matrix: [Triple; 3],
}

impl Collineation {
    pub fn identity() -> Self {
        let (o, z) = (FieldElement::ONE, FieldElement::ZERO);
        Collineation {
            matrix: [[o, z, z], [z, o, z], [z, z, o]],
        }
    }

    pub fn is_invertible(&self, f: &FieldSpec) -> bool {
        !det3(f, self.matrix[0], self.matrix[1], self.matrix[2]).is_zero()
    }

    /// A uniformly random element of AGL(2, q).
    pub fn random_affine<R: Rng + ?Sized>(f: &FieldSpec, rng: &mut R) -> Self {
        let q = f.q();
        let mut pick = || FieldElement::from_index_unchecked(rng.gen_range(0..q));
        loop {
            let m = [
                [pick(), pick(), pick()],
                [pick(), pick(), pick()],
                [FieldElement::ZERO, FieldElement::ZERO, FieldElement::ONE],
            ];
            let c = Collineation { matrix: m };
            if c.is_invertible(f) {
                return c;
            }
        }
    }

    /// A uniformly random invertible matrix (an element of PGL(3, q) up to scaling).
    pub fn random_projective<R: Rng + ?Sized>(f: &FieldSpec, rng: &mut R) -> Self {
        let q = f.q();
        let mut pick = || FieldElement::from_index_unchecked(rng.gen_range(0..q));
        loop {
            let m = [
                [pick(), pick(), pick()],
                [pick(), pick(), pick()],
                [pick(), pick(), pick()],
            ];
            let c = Collineation { matrix: m };
            if c.is_invertible(f) {
                return c;
            }
        }
    }

    pub fn apply(&self, f: &FieldSpec, v: Triple) -> Triple {
        [
            dot(f, self.matrix[0], v),
            dot(f, self.matrix[1], v),
            dot(f, self.matrix[2], v),
        ]
    }

    /// The induced permutation of point ids. Fails for non-affine maps on an affine plane.
    pub fn permutation(&self, model: &PlaneModel) -> Result<Vec<usize>> {
        if !self.is_invertible(model.field()) {
            return Err(Error::Precondition("singular matrix".into()));
        }
        (0..model.num_points())
            .map(|id| model.point_of(self.apply(model.field(), model.coords(id))))
            .collect()
    }

    pub fn map_set(&self, model: &PlaneModel, set: &PointSet) -> Result<PointSet> {
        let perm = self.permutation(model)?;
        PointSet::from_ids(set.universe(), set.iter().map(|id| perm[id]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn ag(q: u64) -> PlaneModel {
        PlaneModel::from_order(q, PlaneKind::Affine).unwrap()
    }

    fn pg(q: u64) -> PlaneModel {
        PlaneModel::from_order(q, PlaneKind::Projective).unwrap()
    }

    #[test]
    fn line_through_diagonal_and_vertical() {
        let m = ag(3);
        let p = |x, y| m.point(m.affine_point(x, y).unwrap()).unwrap();
        let diag = m.line_through(&p(0, 0), &p(1, 1)).unwrap();
        let want: Vec<u32> = [(0, 0), (1, 1), (2, 2)]
            .iter()
            .map(|&(x, y)| m.affine_point(x, y).unwrap() as u32)
            .collect();
        assert_eq!(diag.points(), &want[..]);
        let vert = m.line_through(&p(0, 0), &p(0, 1)).unwrap();
        let want: Vec<u32> = (0..3)
            .map(|y| m.affine_point(0, y).unwrap() as u32)
            .collect();
        assert_eq!(vert.points(), &want[..]);
        assert_eq!(
            m.line_through(&p(1, 2), &p(1, 2)).unwrap_err(),
            Error::SamePoint
        );
    }

    #[test]
    fn collinear_examples() {
        let m = ag(3);
        let id = |x, y| m.affine_point(x, y).unwrap();
        assert!(m.collinear(id(0, 0), id(1, 1), id(2, 2)));
        assert!(m.collinear(id(0, 0), id(0, 0), id(2, 1)));
        let m5 = ag(5);
        let id5 = |x, y| m5.affine_point(x, y).unwrap();
        assert!(!m5.collinear(id5(0, 0), id5(1, 1), id5(2, 4)));
    }

    #[test]
    fn collinear_agrees_with_lines_on_all_triples_of_ag3() {
        let m = ag(3);
        let mut triples = 0;
        for a in 0..9 {
            for b in a + 1..9 {
                for c in b + 1..9 {
                    triples += 1;
                    let line = m.line(m.line_id_through(a, b).unwrap());
                    assert_eq!(m.collinear(a, b, c), line.incidence.contains(c));
                }
            }
        }
        assert_eq!(triples, 84);
    }

    #[test]
    fn line_counts() {
        assert_eq!(ag(3).all_lines().len(), 12);
        assert_eq!(pg(2).all_lines().len(), 7);
        let m = ag(4);
        assert_eq!(m.num_lines(), 20);
        for l in m.lines() {
            assert_eq!(l.len(), 4);
        }
        for (i, a) in m.lines().iter().enumerate() {
            for b in &m.lines()[i + 1..] {
                assert!(a.incidence.intersection_len(&b.incidence) <= 1);
            }
        }
    }

    #[test]
    fn random_pairs_in_ag5_span_five_points() {
        let m = ag(5);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let a = rng.gen_range(0..25);
            let mut b = rng.gen_range(0..25);
            while b == a {
                b = rng.gen_range(0..25);
            }
            let l = m.line(m.line_id_through(a, b).unwrap());
            assert_eq!(l.incidence.len(), 5);
            assert!(l.incidence.contains(a) && l.incidence.contains(b));
        }
    }

    #[test]
    fn incidence_axioms_exhaustive() {
        for q in [2u64, 3, 4, 5, 7, 8, 9] {
            for kind in [PlaneKind::Affine, PlaneKind::Projective] {
                let m = PlaneModel::from_order(q, kind).unwrap();
                let n = m.num_points();
                let qs = q as usize;
                match kind {
                    PlaneKind::Affine => {
                        assert_eq!(n, qs * qs);
                        assert_eq!(m.num_lines(), qs * qs + qs);
                    }
                    PlaneKind::Projective => {
                        assert_eq!(n, qs * qs + qs + 1);
                        assert_eq!(m.num_lines(), n);
                    }
                }
                for l in m.lines() {
                    assert_eq!(l.len(), m.line_size());
                }
                for p in 0..n {
                    let through = m.lines_through(p);
                    assert_eq!(through.len(), qs + 1);
                    assert!(through
                        .iter()
                        .all(|&l| m.line(l as usize).incidence.contains(p)));
                }
                // any two distinct points share exactly one line
                let mut pair_lines = vec![0u32; n * n];
                for l in m.lines() {
                    for &a in l.points() {
                        for &b in l.points() {
                            if a != b {
                                pair_lines[a as usize * n + b as usize] += 1;
                            }
                        }
                    }
                }
                for a in 0..n {
                    for b in 0..n {
                        if a != b {
                            assert_eq!(pair_lines[a * n + b], 1, "q={q} {kind}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn projective_points_are_normalized() {
        let m = pg(9);
        for id in 0..m.num_points() {
            let c = m.coords(id);
            let lead = c.iter().find(|x| !x.is_zero()).unwrap();
            assert_eq!(*lead, FieldElement::ONE);
            assert_eq!(m.point_of(c).unwrap(), id);
        }
    }

    #[test]
    fn affine_maps_preserve_collinearity() {
        let m = ag(7);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..5 {
            let g = Collineation::random_affine(m.field(), &mut rng);
            let perm = g.permutation(&m).unwrap();
            let mut seen = perm.clone();
            seen.sort_unstable();
            assert_eq!(seen, (0..49).collect::<Vec<_>>());
            for _ in 0..200 {
                let (a, b, c) = (
                    rng.gen_range(0..49),
                    rng.gen_range(0..49),
                    rng.gen_range(0..49),
                );
                assert_eq!(m.collinear(a, b, c), m.collinear(perm[a], perm[b], perm[c]));
            }
        }
    }

    #[test]
    fn embedding_lands_off_the_line_at_infinity() {
        let a = ag(3);
        let p = pg(3);
        let infinity: Vec<usize> = (0..p.num_points())
            .filter(|&i| p.coords(i)[2].is_zero())
            .collect();
        assert_eq!(infinity.len(), 4);
        let mut images: Vec<usize> = (0..9)
            .map(|i| a.embed_affine_point(&p, i).unwrap())
            .collect();
        images.sort_unstable();
        images.dedup();
        assert_eq!(images.len(), 9);
        assert!(images.iter().all(|i| !infinity.contains(i)));
    }

    #[test]
    fn too_large_plane() {
        assert_eq!(
            PlaneModel::from_order(131, PlaneKind::Affine).unwrap_err(),
            Error::PlaneTooLarge(131)
        );
    }
}
