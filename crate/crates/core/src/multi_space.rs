//! Finite multi-groups (groups on overlapping carriers tied by a partial
//! distribution law), their cosets and normal series, and fixed points of
//! contractions on unions of intervals.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use num_traits::Float;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use thiserror::Error;

/// Largest universe accepted by the normal-series search.
pub const DEFAULT_SERIES_GUARD: usize = 12;

/// Structural problems that prevent building a value at all.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MultiGroupError {
    #[error("empty carrier")]
    EmptyCarrier,
    #[error("element #{0} appears twice in a carrier")]
    RepeatedElement(usize),
    #[error("operation table is not {0}x{0}")]
    NotSquare(usize),
    #[error("table entry {0} is outside the carrier")]
    EntryOutOfRange(usize),
    #[error("element #{0} is not in the universe")]
    UnknownElement(usize),
    #[error("no parts")]
    NoParts,
    #[error("sub-multi-group lists {given} parts, the multi-group has {parts}")]
    PartCount { given: usize, parts: usize },
    #[error("element {element} is not in the carrier of part {part}")]
    OutsidePart { part: usize, element: String },
    #[error("a sub-multi-group must keep at least one operation")]
    NoOperation,
    #[error("universe of {size} elements exceeds the guard of {guard}")]
    GuardExceeded { size: usize, guard: usize },
    #[error("{0} candidate sub-multi-groups are too many to enumerate")]
    TooManyCandidates(u128),
}

/// The first law found broken, with the elements involved.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    Associativity {
        part: usize,
        triple: [String; 3],
    },
    NoIdentity {
        part: usize,
    },
    NoInverse {
        part: usize,
        element: String,
    },
    NotClosed {
        part: usize,
        pair: [String; 2],
    },
    /// Neither operation distributes over the other. `forward` breaks
    /// `parts[0]` over `parts[1]`, `backward` the reverse.
    Distribution {
        parts: [usize; 2],
        forward: Box<[String; 3]>,
        backward: Box<[String; 3]>,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Associativity { part, triple: [a, b, c] } => {
                write!(f, "part {part} is not associative at ({a}, {b}, {c})")
            }
            Violation::NoIdentity { part } => write!(f, "part {part} has no identity"),
            Violation::NoInverse { part, element } => write!(f, "{element} has no inverse in part {part}"),
            Violation::NotClosed { part, pair: [a, b] } => write!(f, "part {part} is not closed at ({a}, {b})"),
            Violation::Distribution { parts: [i, j], forward, backward } => {
                let ([x, y, z], [u, v, w]) = (&**forward, &**backward);
                write!(
                    f,
                    "no distribution law between parts {i} and {j}: ({x}, {y}, {z}) breaks {i} over {j}, \
                     ({u}, {v}, {w}) breaks {j} over {i}"
                )
            }
        }
    }
}

/// A binary operation on a carrier drawn from a shared universe. Entries of
/// `table` are positions in `carrier`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupTable {
    carrier: Vec<usize>,
    table: Vec<Vec<usize>>,
    position: HashMap<usize, usize>,
}

impl GroupTable {
    pub fn new(carrier: Vec<usize>, table: Vec<Vec<usize>>) -> Result<Self, MultiGroupError> {
        let n = carrier.len();
        if n == 0 {
            return Err(MultiGroupError::EmptyCarrier);
        }
        let mut position = HashMap::new();
        for (i, &x) in carrier.iter().enumerate() {
            if position.insert(x, i).is_some() {
                return Err(MultiGroupError::RepeatedElement(x));
            }
        }
        if table.len() != n || table.iter().any(|r| r.len() != n) {
            return Err(MultiGroupError::NotSquare(n));
        }
        if let Some(&bad) = table.iter().flatten().find(|&&c| c >= n) {
            return Err(MultiGroupError::EntryOutOfRange(bad));
        }
        Ok(GroupTable { carrier, table, position })
    }

    /// Builds the table of `op` on `carrier`; `None` if it leaves the
    /// carrier.
    pub fn from_fn(carrier: Vec<usize>, op: impl Fn(usize, usize) -> usize) -> Option<Self> {
        let pos: HashMap<usize, usize> = carrier.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let table = carrier
            .iter()
            .map(|&a| carrier.iter().map(|&b| pos.get(&op(a, b)).copied()).collect::<Option<Vec<_>>>())
            .collect::<Option<Vec<_>>>()?;
        GroupTable::new(carrier, table).ok()
    }

    pub fn carrier(&self) -> &[usize] {
        &self.carrier
    }

    pub fn contains(&self, x: usize) -> bool {
        self.position.contains_key(&x)
    }

    /// `a × b` when both lie in the carrier.
    pub fn op(&self, a: usize, b: usize) -> Option<usize> {
        let (i, j) = (*self.position.get(&a)?, *self.position.get(&b)?);
        Some(self.carrier[self.table[i][j]])
    }

    pub fn identity(&self) -> Option<usize> {
        self.carrier
            .iter()
            .copied()
            .find(|&e| self.carrier.iter().all(|&x| self.op(e, x) == Some(x) && self.op(x, e) == Some(x)))
    }

    pub fn inverse(&self, x: usize) -> Option<usize> {
        let e = self.identity()?;
        self.carrier.iter().copied().find(|&y| self.op(x, y) == Some(e) && self.op(y, x) == Some(e))
    }

    /// Restriction to a subset; `Err` names a product leaving it.
    fn restrict(&self, subset: &[usize]) -> Result<GroupTable, [usize; 2]> {
        for &a in subset {
            for &b in subset {
                let c = self.op(a, b).expect("subset of carrier");
                if !subset.contains(&c) {
                    return Err([a, b]);
                }
            }
        }
        Ok(GroupTable::from_fn(subset.to_vec(), |a, b| self.op(a, b).expect("closed")).expect("closed"))
    }
}

/// A universe of named elements and a list of operation tables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiGroup {
    names: Vec<String>,
    parts: Vec<GroupTable>,
}

impl MultiGroup {
    pub fn new(names: Vec<String>, parts: Vec<GroupTable>) -> Result<Self, MultiGroupError> {
        if parts.is_empty() {
            return Err(MultiGroupError::NoParts);
        }
        if let Some(&x) = parts.iter().flat_map(|p| p.carrier.iter()).find(|&&x| x >= names.len()) {
            return Err(MultiGroupError::UnknownElement(x));
        }
        Ok(MultiGroup { names, parts })
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn universe_size(&self) -> usize {
        self.names.len()
    }

    pub fn parts(&self) -> &[GroupTable] {
        &self.parts
    }

    fn name(&self, x: usize) -> String {
        self.names[x].clone()
    }

    /// Group axioms of every part, then the distribution law for every pair
    /// of parts. A pair passes when one of its two operations distributes
    /// over the other on all triples where every product is defined.
    pub fn validate(&self) -> Result<(), Violation> {
        for (p, g) in self.parts.iter().enumerate() {
            self.check_group(p, g)?;
        }
        for i in 0..self.parts.len() {
            for j in i + 1..self.parts.len() {
                let Some(forward) = self.distribution_failure(i, j) else { continue };
                let Some(backward) = self.distribution_failure(j, i) else { continue };
                return Err(Violation::Distribution {
                    parts: [i, j],
                    forward: Box::new(forward),
                    backward: Box::new(backward),
                });
            }
        }
        Ok(())
    }

    pub fn is_multigroup(&self) -> bool {
        self.validate().is_ok()
    }

    fn check_group(&self, part: usize, g: &GroupTable) -> Result<(), Violation> {
        for &a in &g.carrier {
            for &b in &g.carrier {
                for &c in &g.carrier {
                    let ab_c = g.op(g.op(a, b).expect("closed"), c);
                    let a_bc = g.op(a, g.op(b, c).expect("closed"));
                    if ab_c != a_bc {
                        return Err(Violation::Associativity { part, triple: [a, b, c].map(|x| self.name(x)) });
                    }
                }
            }
        }
        if g.identity().is_none() {
            return Err(Violation::NoIdentity { part });
        }
        if let Some(&x) = g.carrier.iter().find(|&&x| g.inverse(x).is_none()) {
            return Err(Violation::NoInverse { part, element: self.name(x) });
        }
        Ok(())
    }

    /// First triple where `×_i` fails to distribute over `×_j` on either
    /// side, among triples with all products defined.
    fn distribution_failure(&self, i: usize, j: usize) -> Option<[String; 3]> {
        let (times, circ) = (&self.parts[i], &self.parts[j]);
        let n = self.universe_size();
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let left = times.op(x, circ.op(y, z)?);
                    let right = (|| circ.op(times.op(x, y)?, times.op(x, z)?))();
                    let left_ok = matches!((left, right), (Some(l), Some(r)) if l != r);
                    let left2 = (|| times.op(circ.op(y, z)?, x))();
                    let right2 = (|| circ.op(times.op(y, x)?, times.op(z, x)?))();
                    let right_ok = matches!((left2, right2), (Some(l), Some(r)) if l != r);
                    if left_ok || right_ok {
                        return Some([x, y, z].map(|e| self.name(e)));
                    }
                }
            }
        }
        None
    }
}

/// `n` copies of `Z_n` on `{0, ..., n-1}`: the `i`-th is the image of
/// `Z_n` under `P^i` for the cycle `P = (0 1 ... n-1)`, so
/// `x +_i y = x + y - i (mod n)` with identity `i`.
pub fn build_cyclic_multigroup(n: usize) -> MultiGroup {
    assert!(n >= 1, "cyclic multi-group needs n >= 1");
    let names = (0..n).map(|k| k.to_string()).collect();
    let parts =
        (0..n).map(|i| GroupTable::from_fn((0..n).collect(), |x, y| (x + y + n - i) % n).expect("closed")).collect();
    MultiGroup::new(names, parts).expect("well formed")
}

/// One part: `Z_n` under addition mod `n`.
pub fn cyclic_group(n: usize) -> MultiGroup {
    let names = (0..n).map(|k| k.to_string()).collect();
    let table = GroupTable::from_fn((0..n).collect(), |x, y| (x + y) % n).expect("closed");
    MultiGroup::new(names, vec![table]).expect("well formed")
}

/// One part: the symmetric group on three letters, elements numbered by
/// the lexicographic order of their images.
pub fn symmetric_group_3() -> MultiGroup {
    let perms: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let names = perms.iter().map(|p| format!("{}{}{}", p[0], p[1], p[2])).collect();
    let compose = |a: usize, b: usize| {
        let c = [0, 1, 2].map(|k| perms[a][perms[b][k]]);
        perms.iter().position(|p| *p == c).expect("closed")
    };
    let table = GroupTable::from_fn((0..6).collect(), compose).expect("closed");
    MultiGroup::new(names, vec![table]).expect("well formed")
}

/// A choice of sub-carrier for some of the parts; parts mapped to `None`
/// drop their operation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubMultiGroup {
    carriers: Vec<Option<Vec<usize>>>,
}

impl SubMultiGroup {
    pub fn new(group: &MultiGroup, carriers: Vec<Option<Vec<usize>>>) -> Result<Self, MultiGroupError> {
        if carriers.len() != group.parts.len() {
            return Err(MultiGroupError::PartCount { given: carriers.len(), parts: group.parts.len() });
        }
        if carriers.iter().all(Option::is_none) {
            return Err(MultiGroupError::NoOperation);
        }
        let mut sorted = Vec::with_capacity(carriers.len());
        for (part, c) in carriers.into_iter().enumerate() {
            sorted.push(match c {
                None => None,
                Some(mut c) => {
                    if c.is_empty() {
                        return Err(MultiGroupError::EmptyCarrier);
                    }
                    if let Some(&x) = c.iter().find(|&&x| !group.parts[part].contains(x)) {
                        let element = group.names.get(x).cloned().unwrap_or_else(|| format!("#{x}"));
                        return Err(MultiGroupError::OutsidePart { part, element });
                    }
                    c.sort_unstable();
                    c.dedup();
                    Some(c)
                }
            });
        }
        Ok(SubMultiGroup { carriers: sorted })
    }

    /// The whole multi-group as its own sub-multi-group.
    pub fn whole(group: &MultiGroup) -> Self {
        SubMultiGroup::new(group, group.parts.iter().map(|p| Some(p.carrier.clone())).collect()).expect("whole")
    }

    pub fn carriers(&self) -> &[Option<Vec<usize>>] {
        &self.carriers
    }

    /// Union of the retained carriers.
    pub fn elements(&self) -> BTreeSet<usize> {
        self.carriers.iter().flatten().flatten().copied().collect()
    }

    /// `self ⊆ other` part by part.
    fn within(&self, other: &SubMultiGroup) -> bool {
        self.carriers.iter().zip(&other.carriers).all(|(a, b)| match (a, b) {
            (None, _) => true,
            (Some(_), None) => false,
            (Some(a), Some(b)) => a.iter().all(|x| b.binary_search(x).is_ok()),
        })
    }

    /// The retained parts as a multi-group in their own right; part `k` of
    /// the result is the `k`-th retained part.
    pub fn restricted(&self, group: &MultiGroup) -> Result<MultiGroup, Violation> {
        let mut parts = Vec::new();
        for (part, c) in self.carriers.iter().enumerate() {
            if let Some(c) = c {
                let table = group.parts[part]
                    .restrict(c)
                    .map_err(|[a, b]| Violation::NotClosed { part, pair: [group.name(a), group.name(b)] })?;
                parts.push(table);
            }
        }
        Ok(MultiGroup { names: group.names.clone(), parts })
    }

    /// Closed under every retained operation and a multi-group there.
    pub fn validate(&self, group: &MultiGroup) -> Result<(), Violation> {
        self.restricted(group)?.validate()
    }

    /// `g × h × g⁻¹` lies in the sub-multi-group for every retained
    /// operation `×`, every `g` of `within`'s part and `h` of this one.
    pub fn is_normal_in(&self, group: &MultiGroup, within: &SubMultiGroup) -> bool {
        let members = self.elements();
        self.carriers.iter().enumerate().all(|(part, c)| {
            let Some(c) = c else { return true };
            let table = &group.parts[part];
            within.carriers[part].iter().flatten().all(|&g| {
                let Some(g_inv) = table.inverse(g) else { return false };
                c.iter().all(|&h| {
                    let conj = table.op(g, h).and_then(|gh| table.op(gh, g_inv));
                    conj.is_some_and(|x| members.contains(&x))
                })
            })
        })
    }
}

/// Normal in the whole multi-group.
pub fn is_normal(h: &SubMultiGroup, g: &MultiGroup) -> bool {
    h.is_normal_in(g, &SubMultiGroup::whole(g))
}

// ---------------------------------------------------------------- cosets

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LagrangeError {
    #[error("not a sub-multi-group: {0}")]
    NotASubMultiGroup(Violation),
    #[error("no disjoint cover: cosets of {first} and {second} share {common}")]
    Overlap { first: String, second: String, common: String },
    #[error("no disjoint cover: element {0} lies in no coset")]
    Uncovered(String),
}

/// A certified decomposition of the universe into disjoint cosets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub representatives: Vec<usize>,
    pub cosets: Vec<BTreeSet<usize>>,
}

/// `xH = ⋃ { x ×_i h : h ∈ H_i }` over retained parts `i` containing `x`.
pub fn coset(g: &MultiGroup, h: &SubMultiGroup, x: usize) -> BTreeSet<usize> {
    let mut out = BTreeSet::new();
    for (part, c) in h.carriers.iter().enumerate() {
        let table = &g.parts[part];
        if let (Some(c), true) = (c, table.contains(x)) {
            out.extend(c.iter().filter_map(|&y| table.op(x, y)));
        }
    }
    out
}

/// Finds representatives whose cosets partition the universe: greedily in
/// element order first, then by exhaustive exact-cover search. The result is
/// re-checked before it is returned.
pub fn lagrange_decomposition(g: &MultiGroup, h: &SubMultiGroup) -> Result<Decomposition, LagrangeError> {
    h.validate(g).map_err(LagrangeError::NotASubMultiGroup)?;
    let n = g.universe_size();
    let cosets: Vec<BTreeSet<usize>> = (0..n).map(|x| coset(g, h, x)).collect();

    let mut covered = BTreeSet::new();
    let mut reps = Vec::new();
    let mut witness = None;
    for x in 0..n {
        if covered.contains(&x) || cosets[x].is_empty() {
            continue;
        }
        if let Some(&common) = cosets[x].intersection(&covered).next() {
            let other = *reps.iter().find(|&&r: &&usize| cosets[r].contains(&common)).expect("covered");
            witness.get_or_insert((other, x, common));
            continue;
        }
        covered.extend(cosets[x].iter().copied());
        reps.push(x);
    }
    if covered.len() != n {
        reps = match exact_cover(&cosets, n) {
            Some(r) => r,
            None => {
                return Err(match witness {
                    Some((a, b, c)) => {
                        LagrangeError::Overlap { first: g.name(a), second: g.name(b), common: g.name(c) }
                    }
                    None => LagrangeError::Uncovered(g.name((0..n).find(|x| !covered.contains(x)).expect("gap"))),
                })
            }
        };
    }
    let decomposition =
        Decomposition { cosets: reps.iter().map(|&r| cosets[r].clone()).collect(), representatives: reps };
    assert!(certify(&decomposition, n), "decomposition failed its own certification");
    Ok(decomposition)
}

/// Pairwise disjoint and covering `0..n`.
pub fn certify(d: &Decomposition, n: usize) -> bool {
    let mut seen = vec![false; n];
    for c in &d.cosets {
        for &x in c {
            if x >= n || std::mem::replace(&mut seen[x], true) {
                return false;
            }
        }
    }
    !d.cosets.is_empty() && seen.into_iter().all(|s| s)
}

fn exact_cover(sets: &[BTreeSet<usize>], n: usize) -> Option<Vec<usize>> {
    fn go(sets: &[BTreeSet<usize>], covered: &mut Vec<bool>, chosen: &mut Vec<usize>) -> bool {
        let Some(first) = covered.iter().position(|c| !c) else { return true };
        for (i, s) in sets.iter().enumerate() {
            if s.contains(&first) && s.iter().all(|&x| !covered[x]) && !chosen.contains(&i) {
                s.iter().for_each(|&x| covered[x] = true);
                chosen.push(i);
                if go(sets, covered, chosen) {
                    return true;
                }
                chosen.pop();
                s.iter().for_each(|&x| covered[x] = false);
            }
        }
        false
    }
    let mut covered = vec![false; n];
    let mut chosen = Vec::new();
    go(sets, &mut covered, &mut chosen).then(|| {
        chosen.sort_unstable();
        chosen
    })
}

// ---------------------------------------------------------------- normal series

const CANDIDATE_LIMIT: u128 = 1_000_000;

/// Lengths of all maximal chains `G ⊋ G_1 ⊋ ... ⊋ G_k` in which each term
/// is a maximal proper normal sub-multi-group of the previous one and the
/// last has none. Every candidate must itself validate as a multi-group.
pub fn maximal_normal_series_lengths(g: &MultiGroup, guard: usize) -> Result<BTreeSet<usize>, MultiGroupError> {
    if g.universe_size() > guard {
        return Err(MultiGroupError::GuardExceeded { size: g.universe_size(), guard });
    }
    let subgroups: Vec<Vec<Vec<usize>>> = g.parts.iter().map(subgroups_of).collect();
    let candidates: u128 = subgroups.iter().map(|s| s.len() as u128 + 1).product();
    if candidates > CANDIDATE_LIMIT {
        return Err(MultiGroupError::TooManyCandidates(candidates));
    }
    let mut valid = Vec::new();
    let mut pick = vec![0usize; g.parts.len()];
    'odometer: loop {
        let carriers: Vec<Option<Vec<usize>>> =
            pick.iter().zip(&subgroups).map(|(&k, s)| (k > 0).then(|| s[k - 1].clone())).collect();
        if carriers.iter().any(Option::is_some) {
            let h = SubMultiGroup { carriers };
            if h.validate(g).is_ok() {
                valid.push(h);
            }
        }
        for (k, s) in pick.iter_mut().zip(&subgroups) {
            *k += 1;
            if *k <= s.len() {
                continue 'odometer;
            }
            *k = 0;
        }
        break;
    }
    let mut memo = HashMap::new();
    Ok(series_lengths(g, &SubMultiGroup::whole(g), &valid, &mut memo))
}

fn series_lengths(
    g: &MultiGroup,
    top: &SubMultiGroup,
    valid: &[SubMultiGroup],
    memo: &mut HashMap<SubMultiGroup, BTreeSet<usize>>,
) -> BTreeSet<usize> {
    if let Some(done) = memo.get(top) {
        return done.clone();
    }
    let normal: Vec<&SubMultiGroup> =
        valid.iter().filter(|h| *h != top && h.within(top) && h.is_normal_in(g, top)).collect();
    let maximal: Vec<&SubMultiGroup> =
        normal.iter().copied().filter(|h| !normal.iter().any(|k| k != h && h.within(k))).collect();
    let lengths = if maximal.is_empty() {
        BTreeSet::from([0])
    } else {
        maximal.into_iter().flat_map(|h| series_lengths(g, h, valid, memo)).map(|l| l + 1).collect()
    };
    memo.insert(top.clone(), lengths.clone());
    lengths
}

/// All subgroups of a part, as sorted carriers.
fn subgroups_of(table: &GroupTable) -> Vec<Vec<usize>> {
    let c = &table.carrier;
    let Some(e) = table.identity() else { return Vec::new() };
    let others: Vec<usize> = c.iter().copied().filter(|&x| x != e).collect();
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << others.len()) {
        let mut s: Vec<usize> = (0..others.len()).filter(|k| mask >> k & 1 == 1).map(|k| others[k]).collect();
        s.push(e);
        s.sort_unstable();
        if table.restrict(&s).is_ok() {
            out.push(s);
        }
    }
    out
}

// ---------------------------------------------------------------- fixed points

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MetricError {
    #[error("part {part}: interval [{lo}, {hi}] is empty")]
    EmptyInterval { part: usize, lo: f64, hi: f64 },
    #[error("part {part}: scale must be positive")]
    BadScale { part: usize },
    #[error("the map has {pieces} pieces for {parts} parts")]
    PieceCount { pieces: usize, parts: usize },
    #[error("declared contraction factor {0} is not below 1")]
    NotContraction(f64),
    #[error("contraction violated on part {part} at x={x}, y={y}")]
    ContractionViolated { part: usize, x: f64, y: f64 },
    #[error("T({x}) = {image} leaves the space")]
    Escapes { x: f64, image: f64 },
    #[error("iteration from {seed} did not settle within {budget} steps")]
    Budget { seed: f64, budget: usize },
    #[error("{count} fixed points found, outside [1, {parts}]")]
    CountOutOfBounds { count: usize, parts: usize },
    #[error("tolerance must be positive")]
    BadTolerance,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval<F> {
    pub lo: F,
    pub hi: F,
    /// The metric on this part is `scale · |x - y|`.
    pub scale: F,
}

/// A finite union of closed real intervals, each with its own metric.
#[derive(Clone, Debug, PartialEq)]
pub struct MultiMetricSpace<F> {
    parts: Vec<Interval<F>>,
}

fn to_f64<F: Float>(x: F) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

impl<F: Float> MultiMetricSpace<F> {
    pub fn new(intervals: Vec<(F, F)>) -> Result<Self, MetricError> {
        Self::with_scales(intervals.into_iter().map(|(lo, hi)| (lo, hi, F::one())).collect())
    }

    pub fn with_scales(parts: Vec<(F, F, F)>) -> Result<Self, MetricError> {
        let mut out = Vec::with_capacity(parts.len());
        for (part, (lo, hi, scale)) in parts.into_iter().enumerate() {
            if lo.is_nan() || hi.is_nan() || lo > hi {
                return Err(MetricError::EmptyInterval { part, lo: to_f64(lo), hi: to_f64(hi) });
            }
            if scale.is_nan() || scale <= F::zero() {
                return Err(MetricError::BadScale { part });
            }
            out.push(Interval { lo, hi, scale });
        }
        Ok(MultiMetricSpace { parts: out })
    }

    pub fn parts(&self) -> &[Interval<F>] {
        &self.parts
    }

    /// The first part containing `x`.
    pub fn part_of(&self, x: F) -> Option<usize> {
        self.parts.iter().position(|p| p.lo <= x && x <= p.hi)
    }

    fn distance(&self, part: usize, x: F, y: F) -> F {
        self.parts[part].scale * (x - y).abs()
    }
}

/// `T(x) = a_i·x + b_i` for `x` in part `i` (the first part containing
/// `x` when parts overlap).
#[derive(Clone, Debug, PartialEq)]
pub struct AffineSelfMap<F> {
    pieces: Vec<(F, F)>,
}

impl<F: Float> AffineSelfMap<F> {
    pub fn new(pieces: Vec<(F, F)>) -> Self {
        AffineSelfMap { pieces }
    }

    pub fn pieces(&self) -> &[(F, F)] {
        &self.pieces
    }

    /// The largest `|a_i|`.
    pub fn declared_factor(&self) -> F {
        self.pieces.iter().fold(F::zero(), |m, &(a, _)| m.max(a.abs()))
    }

    pub fn apply(&self, space: &MultiMetricSpace<F>, x: F) -> Option<F> {
        let (a, b) = self.pieces[space.part_of(x)?];
        Some(a * x + b)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FixedPointOptions<F> {
    pub seeds_per_part: usize,
    pub tolerance: F,
    pub budget: usize,
    pub samples_per_part: usize,
}

impl<F: Float> Default for FixedPointOptions<F> {
    fn default() -> Self {
        FixedPointOptions {
            seeds_per_part: 5,
            tolerance: F::from(1e-12).expect("representable"),
            budget: 1_000_000,
            samples_per_part: 1000,
        }
    }
}

/// Iterates `t` from a grid of seeds in every part and returns the distinct
/// limits, sorted. The contraction factor is spot-checked on random pairs
/// first, and the count is checked against `[1, m]`.
pub fn fixed_points<F: Float>(
    space: &MultiMetricSpace<F>,
    t: &AffineSelfMap<F>,
    options: &FixedPointOptions<F>,
) -> Result<Vec<F>, MetricError> {
    let m = space.parts.len();
    if t.pieces.len() != m {
        return Err(MetricError::PieceCount { pieces: t.pieces.len(), parts: m });
    }
    if options.tolerance.is_nan() || options.tolerance <= F::zero() {
        return Err(MetricError::BadTolerance);
    }
    let k = t.declared_factor();
    if k.is_nan() || k >= F::one() {
        return Err(MetricError::NotContraction(to_f64(k)));
    }
    check_contraction(space, t, k, options.samples_per_part)?;

    let mut found: Vec<F> = Vec::new();
    // a step below tol leaves the iterate within tol·k/(1-k) of its limit,
    // so seeds arriving from both sides can sit twice that far apart
    let ten = F::from(10).expect("10");
    let two = F::from(2).expect("2");
    let merge = (options.tolerance * ten).max(two * options.tolerance * k / (F::one() - k));
    for (part, iv) in space.parts.iter().enumerate() {
        for s in 0..options.seeds_per_part.max(1) {
            let seed = if options.seeds_per_part <= 1 {
                (iv.lo + iv.hi) / F::from(2).expect("2")
            } else {
                iv.lo
                    + (iv.hi - iv.lo) * F::from(s).expect("small") / F::from(options.seeds_per_part - 1).expect("small")
            };
            let p = iterate(space, t, part, seed, options)?;
            if !found.iter().any(|&q| (q - p).abs() <= merge) {
                found.push(p);
            }
        }
    }
    found.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    if found.is_empty() || found.len() > m {
        return Err(MetricError::CountOutOfBounds { count: found.len(), parts: m });
    }
    Ok(found)
}

fn iterate<F: Float>(
    space: &MultiMetricSpace<F>,
    t: &AffineSelfMap<F>,
    mut part: usize,
    seed: F,
    options: &FixedPointOptions<F>,
) -> Result<F, MetricError> {
    let mut x = seed;
    for _ in 0..options.budget {
        let y = t.apply(space, x).expect("x lies in the space");
        let Some(next_part) = space.part_of(y) else {
            return Err(MetricError::Escapes { x: to_f64(x), image: to_f64(y) });
        };
        let settled = next_part == part && space.distance(part, x, y) < options.tolerance;
        x = y;
        part = next_part;
        if settled {
            return Ok(x);
        }
    }
    Err(MetricError::Budget { seed: to_f64(seed), budget: options.budget })
}

fn check_contraction<F: Float>(
    space: &MultiMetricSpace<F>,
    t: &AffineSelfMap<F>,
    k: F,
    samples: usize,
) -> Result<(), MetricError> {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let slack = F::from(1e-12).expect("representable");
    for (part, iv) in space.parts.iter().enumerate() {
        let width = iv.hi - iv.lo;
        for _ in 0..samples {
            let u: f64 = rng.gen();
            let v: f64 = rng.gen();
            let x = iv.lo + width * F::from(u).expect("unit");
            let y = iv.lo + width * F::from(v).expect("unit");
            let (Some(tx), Some(ty)) = (t.apply(space, x), t.apply(space, y)) else { continue };
            let before = space.distance(part, x, y);
            let after = space.distance(part, tx, ty);
            if after > k * before + slack {
                return Err(MetricError::ContractionViolated { part, x: to_f64(x), y: to_f64(y) });
            }
        }
    }
    Ok(())
}
