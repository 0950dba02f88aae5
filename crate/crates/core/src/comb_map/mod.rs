//! Combinatorial maps `(X_{α,β}, P)` on quadricell flag sets.
//!
//! Each edge `e` contributes the four flags `e`, `αe`, `βe`, `αβe`, encoded
//! as `4·e + sort` with sorts ordered `(1, α, β, αβ)`. The involutions are
//! then bit flips: `α = x ^ 1`, `β = x ^ 2`, `αβ = x ^ 3`.

use std::collections::HashMap;
use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;
use thiserror::Error;

use crate::dsu::DisjointSets;
use crate::surface_word::{Letter, StandardForm, SurfaceWord};

pub mod graph;

pub use graph::{EmbeddingViolation, GraphError, MultiEmbeddingVerdict, SimpleGraph, DEFAULT_ROTATION_GUARD};

/// One of the four elements of the Klein group `{1, α, β, αβ}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sort {
    Identity,
    Alpha,
    Beta,
    AlphaBeta,
}

impl Sort {
    const ALL: [Sort; 4] = [Sort::Identity, Sort::Alpha, Sort::Beta, Sort::AlphaBeta];

    fn prefix(self) -> &'static str {
        match self {
            Sort::Identity => "",
            Sort::Alpha => "a.",
            Sort::Beta => "b.",
            Sort::AlphaBeta => "ab.",
        }
    }
}

/// A flag id `4·edge + sort`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Flag(pub usize);

impl Flag {
    pub fn new(edge: usize, sort: Sort) -> Self {
        Flag(4 * edge + sort as usize)
    }

    pub fn edge(self) -> usize {
        self.0 / 4
    }

    pub fn sort(self) -> Sort {
        Sort::ALL[self.0 % 4]
    }

    pub fn alpha(self) -> Flag {
        Flag(self.0 ^ 1)
    }

    pub fn beta(self) -> Flag {
        Flag(self.0 ^ 2)
    }

    pub fn alpha_beta(self) -> Flag {
        Flag(self.0 ^ 3)
    }

    /// Re-encoding for the dual, where the roles of α and β are exchanged.
    fn swap_alpha_beta(self) -> Flag {
        let edge = self.0 & !3;
        match self.0 & 3 {
            1 => Flag(edge | 2),
            2 => Flag(edge | 1),
            s => Flag(edge | s),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MapError {
    #[error("edge name `{0}` is listed twice")]
    DuplicateEdge(String),
    #[error("no edges")]
    NoEdges,
    #[error("unknown flag `{0}`")]
    UnknownFlag(String),
    #[error("flag {0} appears in more than one cycle position")]
    RepeatedFlag(String),
    #[error("flag {0} is not covered by any cycle")]
    MissingFlag(String),
    #[error("permutation is not basic: P^{power} {flag} = α{flag}")]
    NotBasic { flag: String, power: usize },
    #[error("αP = P⁻¹α fails at flag {0}")]
    ConditionOne(String),
    #[error("⟨α, β, P⟩ is not transitive: {0} orbits")]
    NotTransitive(usize),
}

/// A validated combinatorial map.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CombMap {
    edge_names: Vec<String>,
    perm: Vec<usize>,
}

/// A vertex: the pair of P-orbits `{O, αO}`. `orbit` is the one holding the
/// least flag, listed from that flag.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vertex {
    pub key: Flag,
    pub orbit: Vec<Flag>,
    pub conjugate: Vec<Flag>,
}

impl Vertex {
    pub fn valency(&self) -> usize {
        self.orbit.len()
    }

    pub fn flags(&self) -> impl Iterator<Item = Flag> + '_ {
        self.orbit.iter().chain(self.conjugate.iter()).copied()
    }
}

/// A face, i.e. a vertex of the dual; flags are given in this map's encoding.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    pub key: Flag,
    pub boundary: Vec<Flag>,
    pub conjugate: Vec<Flag>,
}

impl Face {
    pub fn len(&self) -> usize {
        self.boundary.len()
    }

    pub fn is_empty(&self) -> bool {
        self.boundary.is_empty()
    }

    pub fn flags(&self) -> impl Iterator<Item = Flag> + '_ {
        self.boundary.iter().chain(self.conjugate.iter()).copied()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MapCensus {
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
    pub euler: i64,
    pub orientable: bool,
    /// Orientable genus, or crosscap number when non-orientable.
    pub genus: usize,
}

impl MapCensus {
    pub fn form(&self) -> StandardForm {
        StandardForm::from_invariants(self.euler, self.orientable).expect("census of a valid map")
    }
}

/// Cycles of a permutation, each starting at its least element, ordered by
/// that element.
fn cycles(perm: &[usize]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; perm.len()];
    let mut out = Vec::new();
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut cycle = vec![start];
        seen[start] = true;
        let mut x = perm[start];
        while x != start {
            seen[x] = true;
            cycle.push(x);
            x = perm[x];
        }
        out.push(cycle);
    }
    out
}

/// Orbit count of the group generated by the given maps on `0..n`.
fn orbit_count(n: usize, generators: &[&dyn Fn(usize) -> usize]) -> usize {
    let mut dsu = DisjointSets::new(n);
    for x in 0..n {
        for g in generators {
            dsu.union(x, g(x));
        }
    }
    dsu.labels().1
}

impl CombMap {
    /// A random map with `edges` edges: edge ends are shuffled into random
    /// vertex rotations, each end taking one of its two flags at random, and
    /// disconnected outcomes are rejected. Gives up after `max_tries`.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, edges: usize, max_tries: usize) -> Option<CombMap> {
        assert!(edges >= 1, "a map needs at least one edge");
        let names: Vec<String> = (1..=edges).map(|k| format!("e{k}")).collect();
        for _ in 0..max_tries {
            let mut ends: Vec<usize> = (0..2 * edges).collect();
            ends.shuffle(rng);
            let flags: Vec<usize> = ends
                .iter()
                .map(|&end| {
                    let (e, far) = (end / 2, end % 2 == 1);
                    let base = if far { Sort::Beta } else { Sort::Identity };
                    let f = Flag::new(e, base).0;
                    if rng.gen() {
                        f ^ 1
                    } else {
                        f
                    }
                })
                .collect();
            let mut perm = vec![usize::MAX; 4 * edges];
            let mut start = 0;
            while start < flags.len() {
                let len = rng.gen_range(1..=flags.len() - start);
                let rotation = &flags[start..start + len];
                for i in 0..len {
                    let (x, y) = (rotation[i], rotation[(i + 1) % len]);
                    perm[x] = y;
                    perm[y ^ 1] = x ^ 1;
                }
                start += len;
            }
            if let Ok(map) = CombMap::from_permutation(names.clone(), perm) {
                return Some(map);
            }
        }
        None
    }

    /// Builds a map from edge names and the cycles of `P`. Every flag must
    /// appear exactly once; fixed points need explicit singleton cycles.
    pub fn new(edge_names: Vec<String>, cycles: &[Vec<Flag>]) -> Result<Self, MapError> {
        let n = 4 * edge_names.len();
        let mut perm = vec![usize::MAX; n];
        let mut placed = vec![false; n];
        for cycle in cycles {
            for (i, &f) in cycle.iter().enumerate() {
                if f.0 >= n {
                    return Err(MapError::UnknownFlag(format!("#{}", f.0)));
                }
                if placed[f.0] {
                    return Err(MapError::RepeatedFlag(flag_name(&edge_names, f)));
                }
                placed[f.0] = true;
                perm[f.0] = cycle[(i + 1) % cycle.len()].0;
            }
        }
        if let Some(x) = placed.iter().position(|&p| !p) {
            return Err(MapError::MissingFlag(flag_name(&edge_names, Flag(x))));
        }
        Self::from_permutation(edge_names, perm)
    }

    /// Validates a permutation given as the image of each flag id.
    pub fn from_permutation(edge_names: Vec<String>, perm: Vec<usize>) -> Result<Self, MapError> {
        if edge_names.is_empty() {
            return Err(MapError::NoEdges);
        }
        let mut seen = HashMap::new();
        for name in &edge_names {
            if seen.insert(name.as_str(), ()).is_some() {
                return Err(MapError::DuplicateEdge(name.clone()));
            }
        }
        let n = 4 * edge_names.len();
        assert_eq!(perm.len(), n, "permutation length must be 4 per edge");
        let mut hit = vec![false; n];
        for &y in &perm {
            if y >= n || hit[y] {
                return Err(MapError::RepeatedFlag(flag_name(&edge_names, Flag(y.min(n - 1)))));
            }
            hit[y] = true;
        }
        let map = CombMap { edge_names, perm };
        map.validate()?;
        Ok(map)
    }

    fn validate(&self) -> Result<(), MapError> {
        let n = self.flag_count();
        // basic: αx never lies in the P-orbit of x
        let mut orbit_of = vec![0usize; n];
        let cyc = cycles(&self.perm);
        for (id, c) in cyc.iter().enumerate() {
            for &x in c {
                orbit_of[x] = id;
            }
        }
        for c in &cyc {
            for (k, &x) in c.iter().enumerate() {
                let target = x ^ 1;
                if orbit_of[target] == orbit_of[x] {
                    let pos = c.iter().position(|&y| y == target).expect("same orbit");
                    let power = (pos + c.len() - k) % c.len();
                    return Err(MapError::NotBasic { flag: self.flag_name(Flag(x)), power });
                }
            }
        }
        // condition (i): αP = P⁻¹α, i.e. P(α(P(x))) = αx
        for x in 0..n {
            if self.perm[self.perm[x] ^ 1] != x ^ 1 {
                return Err(MapError::ConditionOne(self.flag_name(Flag(x))));
            }
        }
        // condition (ii): ⟨α, β, P⟩ transitive
        let perm = &self.perm;
        let orbits = orbit_count(n, &[&|x| x ^ 1, &|x| x ^ 2, &|x| perm[x]]);
        if orbits != 1 {
            return Err(MapError::NotTransitive(orbits));
        }
        Ok(())
    }

    pub fn edge_names(&self) -> &[String] {
        &self.edge_names
    }

    pub fn edge_count(&self) -> usize {
        self.edge_names.len()
    }

    pub fn flag_count(&self) -> usize {
        self.perm.len()
    }

    /// The basic permutation as an image table.
    pub fn permutation(&self) -> &[usize] {
        &self.perm
    }

    pub fn apply(&self, f: Flag) -> Flag {
        Flag(self.perm[f.0])
    }

    pub fn flag_name(&self, f: Flag) -> String {
        flag_name(&self.edge_names, f)
    }

    /// Looks up a flag written as `name`, `a.name`, `b.name` or `ab.name`.
    pub fn parse_flag(&self, text: &str) -> Option<Flag> {
        parse_flag(&self.edge_names, text)
    }

    /// P-cycles, each from its least flag, ordered by that flag.
    pub fn cycles(&self) -> Vec<Vec<Flag>> {
        cycles(&self.perm).into_iter().map(|c| c.into_iter().map(Flag).collect()).collect()
    }

    /// Vertices as conjugate pairs of P-orbits, ordered by least flag.
    pub fn vertices(&self) -> Vec<Vertex> {
        let cyc = cycles(&self.perm);
        let mut orbit_of = vec![0usize; self.flag_count()];
        for (id, c) in cyc.iter().enumerate() {
            for &x in c {
                orbit_of[x] = id;
            }
        }
        let mut used = vec![false; cyc.len()];
        let mut out = Vec::new();
        for (id, c) in cyc.iter().enumerate() {
            if used[id] {
                continue;
            }
            let partner = orbit_of[c[0] ^ 1];
            used[id] = true;
            used[partner] = true;
            out.push(Vertex {
                key: Flag(c[0]),
                orbit: c.iter().copied().map(Flag).collect(),
                conjugate: cyc[partner].iter().copied().map(Flag).collect(),
            });
        }
        out
    }

    /// Edges as quadricells `{x, αx, βx, αβx}`.
    pub fn edges(&self) -> Vec<[Flag; 4]> {
        (0..self.edge_count()).map(|e| Sort::ALL.map(|s| Flag::new(e, s))).collect()
    }

    /// The dual `(X_{β,α}, Pαβ)`, re-encoded so that its own α is bit 0.
    pub fn dual(&self) -> CombMap {
        let n = self.flag_count();
        let mut perm = vec![0usize; n];
        for x in 0..n {
            let image = Flag(self.perm[x ^ 3]).swap_alpha_beta();
            perm[Flag(x).swap_alpha_beta().0] = image.0;
        }
        let dual = CombMap { edge_names: self.edge_names.clone(), perm };
        debug_assert!(dual.validate().is_ok(), "dual of a valid map must be valid");
        dual
    }

    /// Faces, i.e. vertices of the dual, translated back to this encoding.
    pub fn faces(&self) -> Vec<Face> {
        let back = |fs: Vec<Flag>| fs.into_iter().map(Flag::swap_alpha_beta).collect::<Vec<_>>();
        let mut faces: Vec<Face> = self
            .dual()
            .vertices()
            .into_iter()
            .map(|v| {
                let boundary = back(v.orbit);
                let conjugate = back(v.conjugate);
                let key = *boundary.iter().chain(conjugate.iter()).min().expect("nonempty face");
                Face { key, boundary, conjugate }
            })
            .collect();
        faces.sort_by_key(|f| f.key);
        faces
    }

    /// Boundary word of a face, read from its dual-vertex orbit.
    pub fn face_word(&self, face: &Face) -> SurfaceWord {
        let dual_flags: Vec<Flag> = face.boundary.iter().map(|f| f.swap_alpha_beta()).collect();
        orbit_word(&self.edge_names, &dual_flags)
    }

    pub fn valency(&self, v: &Vertex) -> usize {
        assert_eq!(v.orbit.len(), v.conjugate.len(), "conjugate orbits differ in length");
        v.orbit.len()
    }

    /// Number of orbits of `⟨αβ, P⟩`; 2 for orientable maps, 1 otherwise.
    pub fn orientation_orbits(&self) -> usize {
        let perm = &self.perm;
        orbit_count(self.flag_count(), &[&|x| x ^ 3, &|x| perm[x]])
    }

    pub fn orientable(&self) -> bool {
        match self.orientation_orbits() {
            1 => false,
            2 => true,
            k => panic!("⟨αβ, P⟩ has {k} orbits on a valid map"),
        }
    }

    pub fn census(&self) -> MapCensus {
        let vertices = self.vertices().len();
        let edges = self.edge_count();
        let faces = self.dual().vertices().len();
        let euler = vertices as i64 - edges as i64 + faces as i64;
        let orientable = self.orientable();
        let genus = if orientable { ((2 - euler) / 2) as usize } else { (2 - euler) as usize };
        MapCensus { vertices, edges, faces, euler, orientable, genus }
    }

    /// The one-face map obtained by gluing the polygon of `w`.
    ///
    /// Built as the dual of the one-vertex map whose rotation is `w`: the
    /// first occurrence of a symbol gets flag `e`, the second `αβe` when the
    /// exponents differ and `βe` when they agree.
    pub fn from_word(w: &SurfaceWord) -> CombMap {
        let n = w.symbol_count();
        let mut seen = vec![false; n];
        let rotation: Vec<usize> = w
            .letters()
            .iter()
            .map(|l| {
                let e = l.symbol;
                if !seen[e] {
                    seen[e] = true;
                    return Flag::new(e, Sort::Identity).0;
                }
                let first_inverse = first_exponent(w, e);
                let sort = if first_inverse != l.inverse { Sort::AlphaBeta } else { Sort::Beta };
                Flag::new(e, sort).0
            })
            .collect();
        let mut perm = vec![0usize; 4 * n];
        let len = rotation.len();
        for i in 0..len {
            let (x, y) = (rotation[i], rotation[(i + 1) % len]);
            perm[x] = y;
            perm[y ^ 1] = x ^ 1;
        }
        let bouquet = CombMap { edge_names: w.names().to_vec(), perm };
        debug_assert!(bouquet.validate().is_ok());
        bouquet.dual()
    }
}

fn first_exponent(w: &SurfaceWord, symbol: usize) -> bool {
    w.letters().iter().find(|l| l.symbol == symbol).expect("symbol present").inverse
}

/// Reads an orbit as a word: exponent `+1` on flags whose α-bit is clear.
fn orbit_word(edge_names: &[String], orbit: &[Flag]) -> SurfaceWord {
    let letters = orbit.iter().map(|f| Letter::new(f.edge(), f.0 & 1 == 1)).collect();
    SurfaceWord::from_parts(letters, edge_names.to_vec()).expect("face boundary pairs every edge side")
}

pub(crate) fn flag_name(edge_names: &[String], f: Flag) -> String {
    match edge_names.get(f.edge()) {
        Some(name) => format!("{}{}", f.sort().prefix(), name),
        None => format!("#{}", f.0),
    }
}

pub(crate) fn parse_flag(edge_names: &[String], text: &str) -> Option<Flag> {
    let (sort, name) = if let Some(rest) = text.strip_prefix("ab.") {
        (Sort::AlphaBeta, rest)
    } else if let Some(rest) = text.strip_prefix("a.") {
        (Sort::Alpha, rest)
    } else if let Some(rest) = text.strip_prefix("b.") {
        (Sort::Beta, rest)
    } else {
        (Sort::Identity, text)
    };
    let edge = edge_names.iter().position(|n| n == name)?;
    Some(Flag::new(edge, sort))
}

impl fmt::Display for CombMap {
    /// The map file format: an `edges:` line, then one P-cycle per line.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "edges: {}", self.edge_names.join(" "))?;
        for c in self.cycles() {
            let names: Vec<String> = c.iter().map(|&x| self.flag_name(x)).collect();
            writeln!(f, "({})", names.join(","))?;
        }
        Ok(())
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub(crate) fn k4_torus() -> CombMap {
        let text = "edges: x y z u v w\n\
            (x,y,z)(ab.x,u,w)(ab.z,ab.u,v)(ab.y,ab.v,ab.w)\n\
            (a.x,a.z,a.y)(b.x,a.w,a.u)(b.z,a.v,b.u)(b.y,b.w,b.v)\n";
        crate::formats::parse_map(text).unwrap()
    }

    fn single_edge() -> CombMap {
        let cycles: Vec<Vec<Flag>> = (0..4).map(|x| vec![Flag(x)]).collect();
        CombMap::new(vec!["e".into()], &cycles).unwrap()
    }

    #[test]
    fn k4_on_the_torus() {
        let m = k4_torus();
        assert_eq!(m.vertices().len(), 4);
        assert_eq!(m.edges().len(), 6);
        let c = m.census();
        assert_eq!((c.vertices, c.edges, c.faces, c.euler), (4, 6, 2, 0));
        assert!(c.orientable);
        assert_eq!(c.genus, 1);
        let mut lengths: Vec<usize> = m.faces().iter().map(Face::len).collect();
        lengths.sort();
        assert_eq!(lengths, vec![4, 8]);
        assert!(m.vertices().iter().all(|v| m.valency(v) == 3));
    }

    #[test]
    fn k4_dual() {
        let m = k4_torus();
        let d = m.dual();
        assert_eq!(d.vertices().len(), 2);
        assert_eq!(d.dual(), m);
        assert_eq!(d.census().euler, 0);
    }

    #[test]
    fn single_edge_sphere() {
        let m = single_edge();
        let c = m.census();
        assert_eq!((c.vertices, c.edges, c.faces, c.euler), (2, 1, 1, 2));
        assert!(c.orientable);
        assert!(m.vertices().iter().all(|v| m.valency(v) == 1));
        let from_word = CombMap::from_word(&"a a-".parse().unwrap()).census();
        assert_eq!(from_word.euler, c.euler);
    }

    #[test]
    fn rejects_non_basic() {
        // P maps e to αe directly
        let cycles = vec![vec![Flag(0), Flag(1)], vec![Flag(2)], vec![Flag(3)]];
        let err = CombMap::new(vec!["e".into()], &cycles).unwrap_err();
        assert_eq!(err, MapError::NotBasic { flag: "e".into(), power: 1 });
    }

    #[test]
    fn rejects_condition_one_and_transitivity() {
        // (e, βe) as a 2-cycle: α(e βe) = (αe αβe) must be a reversed cycle
        let cycles = vec![vec![Flag(0), Flag(2)], vec![Flag(1)], vec![Flag(3)]];
        assert!(matches!(CombMap::new(vec!["e".into()], &cycles), Err(MapError::ConditionOne(_))));
        // two disjoint single-edge maps
        let cycles: Vec<Vec<Flag>> = (0..8).map(|x| vec![Flag(x)]).collect();
        assert_eq!(CombMap::new(vec!["e".into(), "f".into()], &cycles), Err(MapError::NotTransitive(2)));
    }

    #[test]
    fn rejects_malformed_cycles() {
        let cycles = vec![vec![Flag(0), Flag(0)]];
        assert!(matches!(CombMap::new(vec!["e".into()], &cycles), Err(MapError::RepeatedFlag(_))));
        let cycles = vec![vec![Flag(0)]];
        assert!(matches!(CombMap::new(vec!["e".into()], &cycles), Err(MapError::MissingFlag(_))));
        assert_eq!(CombMap::new(vec![], &[]), Err(MapError::NoEdges));
    }

    #[test]
    fn words_become_one_face_maps() {
        let cases =
            [("a a-", 2, 2, true), ("a1 b1 a1- b1-", 1, 0, true), ("a a", 1, 1, false), ("a b a b", 2, 1, false)];
        for (text, vertices, euler, orientable) in cases {
            let w: SurfaceWord = text.parse().unwrap();
            let m = CombMap::from_word(&w);
            let c = m.census();
            assert_eq!(c.faces, 1, "{text}");
            assert_eq!(c.vertices, vertices, "{text}");
            assert_eq!(c.euler, euler, "{text}");
            assert_eq!(c.orientable, orientable, "{text}");
            let faces = m.faces();
            assert!(m.face_word(&faces[0]).equivalent(&w), "{text}: {}", m.face_word(&faces[0]));
        }
    }

    #[test]
    fn torus_word_vertex_has_valency_four() {
        let m = CombMap::from_word(&StandardForm::OrientableGenus(1).standard_word());
        let vs = m.vertices();
        assert_eq!(vs.len(), 1);
        assert_eq!(m.valency(&vs[0]), 4);
    }

    #[test]
    fn flag_names_round_trip() {
        let m = k4_torus();
        for x in 0..m.flag_count() {
            let name = m.flag_name(Flag(x));
            assert_eq!(m.parse_flag(&name), Some(Flag(x)));
        }
        assert_eq!(m.parse_flag("zz"), None);
    }
}
