//! Map geometries: angle functions on the vertices of a map, the
//! elliptic/euclidean/hyperbolic vertex trichotomy, boundaries obtained by
//! removing faces, and the three-point s-plane model.

use std::fmt;

use thiserror::Error;

use crate::comb_map::{CombMap, Face, Vertex};
use crate::dsu::DisjointSets;
use crate::scalar::Scalar;

/// An angle stored as its coefficient of π.
#[derive(Clone, Debug, PartialEq, PartialOrd)]
pub struct Angle<S> {
    pi_multiple: S,
}

impl<S: Scalar> Angle<S> {
    pub fn pi_times(coefficient: S) -> Self {
        Angle { pi_multiple: coefficient }
    }

    pub fn coefficient(&self) -> &S {
        &self.pi_multiple
    }

    pub fn zero() -> Self {
        Angle { pi_multiple: S::zero() }
    }
}

impl<S: Scalar> fmt::Display for Angle<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} pi", self.pi_multiple)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VertexKind {
    Elliptic,
    Euclidean,
    Hyperbolic,
}

impl VertexKind {
    pub fn as_str(self) -> &'static str {
        match self {
            VertexKind::Elliptic => "elliptic",
            VertexKind::Euclidean => "euclidean",
            VertexKind::Hyperbolic => "hyperbolic",
        }
    }
}

impl fmt::Display for VertexKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A vertex classification. `approximate` marks an inexact angle sum that
/// was treated as euclidean because it fell within tolerance of 2π.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VertexClass {
    pub kind: VertexKind,
    pub approximate: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("expected {expected} angles, got {got}")]
    AngleCount { expected: usize, got: usize },
    #[error("vertex {vertex} has valency {valency}; at least 3 is required")]
    Valency { vertex: String, valency: usize },
    #[error("angle {angle} at vertex {vertex} is outside (0, 4π/{valency})")]
    AngleOutOfRange { vertex: String, angle: String, valency: usize },
    #[error("tolerance must be nonnegative")]
    NegativeTolerance,
    #[error("at least one face must be removed")]
    NoFacesRemoved,
    #[error("removing {removed} of {faces} faces leaves none")]
    AllFacesRemoved { removed: usize, faces: usize },
    #[error("face {0} listed twice")]
    RepeatedFace(String),
    #[error("face {0} does not exist")]
    UnknownFace(String),
    #[error("the retained skeleton has {0} components")]
    Disconnected(usize),
    #[error("points {0} and {1} coincide")]
    CoincidentPoints(&'static str, &'static str),
    #[error("A, B and C are collinear")]
    Collinear,
    #[error("a line needs two distinct points")]
    DegenerateLine,
    #[error("the line is not an s-line: it passes through {0} of A, B, C")]
    NotAnSLine(usize),
    #[error("the point lies on the line")]
    PointOnLine,
}

/// A map with an angle on every vertex, `0 < μ(u) < 4π/ρ(u)`, all valencies
/// at least 3.
#[derive(Clone, Debug)]
pub struct MapGeometry<S> {
    map: CombMap,
    vertices: Vec<Vertex>,
    mu: Vec<Angle<S>>,
    tolerance: S,
}

impl<S: Scalar> MapGeometry<S> {
    /// `mu` is indexed like `map.vertices()`.
    pub fn new(map: CombMap, mu: Vec<Angle<S>>) -> Result<Self, GeometryError> {
        let vertices = map.vertices();
        if vertices.len() != mu.len() {
            return Err(GeometryError::AngleCount { expected: vertices.len(), got: mu.len() });
        }
        for (v, a) in vertices.iter().zip(&mu) {
            let rho = v.valency();
            let name = map.flag_name(v.key);
            if rho < 3 {
                return Err(GeometryError::Valency { vertex: name, valency: rho });
            }
            let bound = S::from_ratio(4, rho as i64);
            if a.pi_multiple <= S::zero() || a.pi_multiple >= bound {
                return Err(GeometryError::AngleOutOfRange { vertex: name, angle: a.to_string(), valency: rho });
            }
        }
        Ok(MapGeometry { map, vertices, mu, tolerance: S::default_tolerance() })
    }

    /// Relative tolerance on `ρμ/2π - 1`; ignored for exact scalars.
    pub fn with_tolerance(mut self, tolerance: S) -> Result<Self, GeometryError> {
        if tolerance < S::zero() {
            return Err(GeometryError::NegativeTolerance);
        }
        self.tolerance = tolerance;
        Ok(self)
    }

    pub fn map(&self) -> &CombMap {
        &self.map
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn angles(&self) -> &[Angle<S>] {
        &self.mu
    }

    pub fn vertex_key(&self, v: usize) -> String {
        self.map.flag_name(self.vertices[v].key)
    }

    /// `ρ(u)·μ(u)` as a coefficient of π.
    fn angle_sum(&self, v: usize) -> S {
        S::from_usize(self.vertices[v].valency()).expect("small valency") * self.mu[v].pi_multiple.clone()
    }

    pub fn classify_vertex(&self, v: usize) -> VertexClass {
        let two = S::from_i64(2).expect("2");
        let sum = self.angle_sum(v);
        if !S::EXACT {
            let rel = (sum.clone() / two.clone() - S::one()).abs();
            if rel <= self.tolerance {
                return VertexClass { kind: VertexKind::Euclidean, approximate: sum != two };
            }
        }
        let kind = match sum.partial_cmp(&two) {
            Some(std::cmp::Ordering::Less) => VertexKind::Elliptic,
            Some(std::cmp::Ordering::Greater) => VertexKind::Hyperbolic,
            _ => VertexKind::Euclidean,
        };
        VertexClass { kind, approximate: false }
    }

    /// `(vertex key, class)` for every vertex, in vertex order.
    pub fn classify_all(&self) -> Vec<(String, VertexClass)> {
        (0..self.vertices.len()).map(|v| (self.vertex_key(v), self.classify_vertex(v))).collect()
    }

    /// `Σ_u (2π - ρ(u)μ(u))`.
    pub fn total_angle_defect(&self) -> Angle<S> {
        let two = S::from_i64(2).expect("2");
        let total = (0..self.vertices.len()).fold(S::zero(), |acc, v| acc + two.clone() - self.angle_sum(v));
        Angle::pi_times(total)
    }

    /// Removes the given faces (indices into `map.faces()`). Between 1 and
    /// `φ - 1` distinct faces may go, and the vertices and edges still
    /// incident with a kept face must form a connected skeleton.
    pub fn with_boundary(&self, removed: &[usize]) -> Result<BoundedMapGeometry<S>, GeometryError> {
        let faces = self.map.faces();
        let phi = faces.len();
        if removed.is_empty() {
            return Err(GeometryError::NoFacesRemoved);
        }
        let mut gone = vec![false; phi];
        for &f in removed {
            if f >= phi {
                return Err(GeometryError::UnknownFace(format!("#{f}")));
            }
            if std::mem::replace(&mut gone[f], true) {
                return Err(GeometryError::RepeatedFace(self.map.flag_name(faces[f].key)));
            }
        }
        if removed.len() >= phi {
            return Err(GeometryError::AllFacesRemoved { removed: removed.len(), faces: phi });
        }
        let components = retained_components(&self.map, &self.vertices, &faces, &gone);
        if components != 1 {
            return Err(GeometryError::Disconnected(components));
        }
        Ok(BoundedMapGeometry { base: self.clone(), removed: removed.to_vec() })
    }

    /// Looks up faces by key (the name of their least flag).
    pub fn face_indices(&self, keys: &[&str]) -> Result<Vec<usize>, GeometryError> {
        let faces = self.map.faces();
        keys.iter()
            .map(|k| {
                faces
                    .iter()
                    .position(|f| self.map.flag_name(f.key) == *k)
                    .ok_or_else(|| GeometryError::UnknownFace(k.to_string()))
            })
            .collect()
    }
}

/// Components of the skeleton spanned by flags lying in kept faces.
fn retained_components(map: &CombMap, vertices: &[Vertex], faces: &[Face], gone: &[bool]) -> usize {
    let n = map.flag_count();
    let mut vertex_of = vec![0; n];
    for (i, v) in vertices.iter().enumerate() {
        v.flags().for_each(|f| vertex_of[f.0] = i);
    }
    let mut kept = vec![false; n];
    for (i, f) in faces.iter().enumerate() {
        if !gone[i] {
            f.flags().for_each(|x| kept[x.0] = true);
        }
    }
    let mut dsu = DisjointSets::new(vertices.len());
    let mut touched = vec![false; vertices.len()];
    for edge in 0..map.edge_count() {
        let base = 4 * edge;
        if (base..base + 4).any(|x| kept[x]) {
            // x and αx sit at one end of the edge, βx and αβx at the other
            let (u, v) = (vertex_of[base], vertex_of[base + 2]);
            touched[u] = true;
            touched[v] = true;
            dsu.union(u, v);
        }
    }
    let mut roots: Vec<usize> = (0..vertices.len()).filter(|&v| touched[v]).map(|v| dsu.find(v)).collect();
    roots.sort_unstable();
    roots.dedup();
    roots.len()
}

#[derive(Clone, Debug)]
pub struct BoundedMapGeometry<S> {
    pub base: MapGeometry<S>,
    /// Removed faces as indices into `base.map().faces()`.
    pub removed: Vec<usize>,
}

// ---------------------------------------------------------------- s-plane

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Point<S> {
    pub x: S,
    pub y: S,
}

impl<S: Scalar> Point<S> {
    pub fn new(x: S, y: S) -> Self {
        Point { x, y }
    }

    fn minus(&self, o: &Self) -> (S, S) {
        (self.x.clone() - o.x.clone(), self.y.clone() - o.y.clone())
    }
}

fn cross<S: Scalar>(u: &(S, S), v: &(S, S)) -> S {
    u.0.clone() * v.1.clone() - u.1.clone() * v.0.clone()
}

/// Whether `r` lies on the line through `p` with direction `d`.
fn on_line<S: Scalar>(p: &Point<S>, d: &(S, S), r: &Point<S>) -> bool {
    cross(d, &r.minus(p)).is_zero()
}

/// Three non-collinear points; an s-line is a line through exactly one.
#[derive(Clone, Debug, PartialEq)]
pub struct SPlaneConfig<S> {
    points: [Point<S>; 3],
}

impl<S: Scalar> SPlaneConfig<S> {
    pub fn new(a: Point<S>, b: Point<S>, c: Point<S>) -> Result<Self, GeometryError> {
        for (p, q, names) in [(&a, &b, ("A", "B")), (&a, &c, ("A", "C")), (&b, &c, ("B", "C"))] {
            if p == q {
                return Err(GeometryError::CoincidentPoints(names.0, names.1));
            }
        }
        if on_line(&a, &b.minus(&a), &c) {
            return Err(GeometryError::Collinear);
        }
        Ok(SPlaneConfig { points: [a, b, c] })
    }

    pub fn points(&self) -> &[Point<S>; 3] {
        &self.points
    }

    fn hits(&self, p: &Point<S>, d: &(S, S)) -> usize {
        self.points.iter().filter(|r| on_line(p, d, r)).count()
    }

    /// 1 if the line `pq` passes through exactly one of A, B, C, else 0.
    pub fn s_line_through(&self, p: &Point<S>, q: &Point<S>) -> Result<u8, GeometryError> {
        if p == q {
            return Err(GeometryError::DegenerateLine);
        }
        Ok(u8::from(self.hits(p, &q.minus(p)) == 1))
    }

    /// For the s-line through `l1`, `l2` and a point `p` off it: 1 if the
    /// euclidean parallel through `p` is an s-line, else 0.
    pub fn s_parallels_through(&self, l1: &Point<S>, l2: &Point<S>, p: &Point<S>) -> Result<u8, GeometryError> {
        if l1 == l2 {
            return Err(GeometryError::DegenerateLine);
        }
        let d = l2.minus(l1);
        let on_l = self.hits(l1, &d);
        if on_l != 1 {
            return Err(GeometryError::NotAnSLine(on_l));
        }
        if on_line(l1, &d, p) {
            return Err(GeometryError::PointOnLine);
        }
        Ok(u8::from(self.hits(p, &d) == 1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::comb_map::tests::k4_torus;
    use num_rational::Rational64;

    fn q(n: i64, d: i64) -> Rational64 {
        Rational64::new(n, d)
    }

    fn k4(mu: Rational64) -> Result<MapGeometry<Rational64>, GeometryError> {
        MapGeometry::new(k4_torus(), vec![Angle::pi_times(mu); 4])
    }

    #[test]
    fn angle_bounds() {
        assert!(k4(q(2, 3)).is_ok());
        assert!(matches!(k4(q(4, 3)), Err(GeometryError::AngleOutOfRange { valency: 3, .. })));
        assert!(matches!(k4(q(0, 1)), Err(GeometryError::AngleOutOfRange { .. })));
        assert!(matches!(
            MapGeometry::<Rational64>::new(k4_torus(), vec![Angle::pi_times(q(1, 2)); 3]),
            Err(GeometryError::AngleCount { expected: 4, got: 3 })
        ));
    }

    #[test]
    fn defect_and_classes() {
        let g = k4(q(1, 2)).unwrap();
        assert_eq!(g.total_angle_defect(), Angle::pi_times(q(2, 1)));
        assert!(g.classify_all().iter().all(|(_, c)| c.kind == VertexKind::Elliptic));
        let g = k4(q(2, 3)).unwrap();
        assert_eq!(g.total_angle_defect(), Angle::zero());
        assert!(g
            .classify_all()
            .iter()
            .all(|(_, c)| *c == VertexClass { kind: VertexKind::Euclidean, approximate: false }));
    }

    #[test]
    fn float_angles_use_tolerance() {
        let g = MapGeometry::new(k4_torus(), vec![Angle::pi_times(2.0 / 3.0 + 1e-12); 4]).unwrap();
        assert_eq!(g.classify_vertex(0), VertexClass { kind: VertexKind::Euclidean, approximate: true });
        let g = g.with_tolerance(0.0).unwrap();
        assert_eq!(g.classify_vertex(0).kind, VertexKind::Hyperbolic);
    }

    #[test]
    fn boundaries() {
        let g = k4(q(1, 2)).unwrap();
        let faces = g.map().faces();
        let short = faces.iter().position(|f| f.len() == 4).unwrap();
        assert!(g.with_boundary(&[short]).is_ok());
        assert!(g.with_boundary(&[1 - short]).is_ok());
        assert_eq!(g.with_boundary(&[0, 1]).unwrap_err(), GeometryError::AllFacesRemoved { removed: 2, faces: 2 });
        assert_eq!(g.with_boundary(&[]).unwrap_err(), GeometryError::NoFacesRemoved);
        assert!(matches!(g.with_boundary(&[0, 0]), Err(GeometryError::RepeatedFace(_))));
    }

    #[test]
    fn s_plane_cases() {
        let p = |x: i64, y: i64| Point::new(q(x, 1), q(y, 1));
        let cfg = SPlaneConfig::new(p(0, 0), p(1, 0), p(0, 1)).unwrap();
        assert_eq!(cfg.s_line_through(&p(0, 0), &p(1, 1)), Ok(1));
        assert_eq!(cfg.s_line_through(&Point::new(q(1, 4), q(0, 1)), &Point::new(q(3, 4), q(0, 1))), Ok(0));
        assert_eq!(cfg.s_line_through(&p(2, 2), &p(3, 2)), Ok(0));
        // the horizontal s-line through C: every parallel off it meets
        // two of the points (y = 0) or none
        assert_eq!(cfg.s_parallels_through(&p(0, 1), &p(1, 1), &p(5, 3)), Ok(0));
        assert_eq!(cfg.s_parallels_through(&p(0, 1), &p(1, 1), &p(2, 0)), Ok(0));
        // the diagonal s-line through A has an s-parallel through B
        assert_eq!(cfg.s_parallels_through(&p(0, 0), &p(1, 1), &p(1, 0)), Ok(1));
        assert_eq!(cfg.s_parallels_through(&p(0, 0), &p(1, 1), &p(3, 1)), Ok(0));
        assert_eq!(cfg.s_parallels_through(&p(0, 1), &p(1, 1), &p(3, 1)), Err(GeometryError::PointOnLine));
        assert_eq!(cfg.s_parallels_through(&p(0, 0), &p(1, 0), &p(3, 1)), Err(GeometryError::NotAnSLine(2)));
        assert_eq!(SPlaneConfig::new(p(0, 0), p(1, 1), p(2, 2)), Err(GeometryError::Collinear));
    }
}
