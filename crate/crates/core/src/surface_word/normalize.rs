//! Rewriting a polygon word into its standard form.
//!
//! The reduction runs in four phases, each made only of elementary moves:
//!
//! 1. cancel adjacent `x x'` pairs (O1) and merge corner classes until a
//!    single vertex remains (an O3 cut that moves one corner of the rarest
//!    class next to a corner of another class);
//! 2. make every same-exponent pair adjacent, `x B x D -> B x x D'` (O3ii);
//! 3. turn each linked pair of opposite-exponent symbols into a contiguous
//!    commutator `a b a' b'` (two O3i moves);
//! 4. while both crosscaps and handles remain, trade `x x a b a' b'` for
//!    three crosscaps (three O3ii moves).
//!
//! Once a single vertex is reached, no move of phases 2-4 changes the number
//! of corner classes, so no further cancellation is ever needed.

use thiserror::Error;

use super::{Direction, MoveApplication, MoveKind, StandardForm, SurfaceWord};

pub const DEFAULT_STEP_LIMIT: usize = 10_000;

/// A completed reduction: the form, the moves, and the word they produce.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Normalization {
    pub form: StandardForm,
    pub trace: Vec<MoveApplication>,
    pub terminal: SurfaceWord,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NormalizeError {
    /// The trace was abandoned; `form` is the invariant-based answer.
    #[error("step limit of {limit} moves exceeded (form by invariants: {form})")]
    StepLimit { limit: usize, form: StandardForm },
    #[error("word invariants are inconsistent")]
    Inconsistent,
    #[error("reduction stalled at `{0}`")]
    Stalled(String),
}

struct Rewriter {
    word: SurfaceWord,
    trace: Vec<MoveApplication>,
    limit: usize,
    form: StandardForm,
}

impl Rewriter {
    fn apply(&mut self, m: MoveApplication) -> Result<(), NormalizeError> {
        if self.trace.len() >= self.limit {
            return Err(NormalizeError::StepLimit { limit: self.limit, form: self.form });
        }
        self.word = self.word.apply_move(&m).map_err(|_| NormalizeError::Stalled(self.word.to_string()))?;
        self.trace.push(m);
        Ok(())
    }
}

fn fwd(kind: MoveKind, at: usize, spans: [usize; 2]) -> MoveApplication {
    MoveApplication { kind, direction: Direction::Forward, at, spans }
}

fn cancellation(w: &SurfaceWord) -> Option<MoveApplication> {
    let n = w.len();
    if n <= 2 {
        return None;
    }
    let l = w.letters();
    (0..n).find(|&i| l[(i + 1) % n] == l[i].inv()).map(|i| fwd(MoveKind::O1, i, [0, 0]))
}

/// Picks a corner of the least populated class whose predecessor corner lies
/// in another class, and cuts off the triangle spanned by the two letters
/// around it. That class loses one corner.
fn corner_merge(w: &SurfaceWord) -> Option<MoveApplication> {
    let n = w.len();
    if n <= 2 {
        return None;
    }
    let (class, count) = w.corner_classes();
    if count < 2 {
        return None;
    }
    let mut sizes = vec![0usize; count];
    class.iter().for_each(|&c| sizes[c] += 1);
    let rare = (0..count).min_by_key(|&c| sizes[c]).expect("nonempty");
    let corner = (0..n).find(|&i| class[i] == rare && class[(i + n - 1) % n] != rare)?;
    // letters a = w[corner-1], b = w[corner]; rotate to (a b ...), pivot on b
    let at = (corner + n - 1) % n;
    let b = w.letters()[corner];
    let partner = w.letters()[w.partner(corner)];
    let kind = if partner == b { MoveKind::O3ii } else { MoveKind::O3i };
    Some(fwd(kind, at, [1, 0]))
}

fn crosscap_gather(w: &SurfaceWord) -> Option<MoveApplication> {
    let n = w.len();
    let l = w.letters();
    w.occurrences().into_iter().find_map(|[i, j]| {
        let adjacent = j == i + 1 || (i == 0 && j == n - 1);
        (l[i] == l[j] && !adjacent).then(|| fwd(MoveKind::O3ii, i, [0, j - i - 1]))
    })
}

/// Symbols sitting in a contiguous `a b a' b'` window.
fn handle_symbols(w: &SurfaceWord) -> Vec<bool> {
    let n = w.len();
    let l = w.letters();
    let mut in_handle = vec![false; w.symbol_count()];
    if n < 4 {
        return in_handle;
    }
    for k in 0..n {
        let (a, b, c, d) = (l[k], l[(k + 1) % n], l[(k + 2) % n], l[(k + 3) % n]);
        if a.symbol != b.symbol && c == a.inv() && d == b.inv() {
            in_handle[a.symbol] = true;
            in_handle[b.symbol] = true;
        }
    }
    in_handle
}

/// Two O3i moves turning `a X b Y a' Z b' W` into `X W a b a' b' Z Y`.
fn handle_build(w: &SurfaceWord) -> Option<[MoveApplication; 2]> {
    let n = w.len();
    let l = w.letters();
    let in_handle = handle_symbols(w);
    let occ = w.occurrences();
    let (i, j) = occ.iter().find_map(|&[i, j]| (l[i] != l[j] && !in_handle[l[i].symbol]).then_some((i, j)))?;
    let r = w.rotated(i);
    let jr = j - i;
    // a linked partner: one occurrence strictly inside (0, jr), one after jr
    let p = (1..jr).find(|&p| {
        let q = (0..n).find(|&q| q != p && r[q].symbol == r[p].symbol).expect("paired");
        q > jr
    })?;
    let (x_len, y_len) = (p - 1, jr - p - 1);
    let q = (jr + 1..n).find(|&q| r[q].symbol == r[p].symbol).expect("linked");
    let w_len = n - q - 1;
    let first = fwd(MoveKind::O3i, i, [p, jr - p]);
    let second = fwd(MoveKind::O3i, y_len + 1, [1, x_len + w_len]);
    Some([first, second])
}

/// Three O3ii moves turning `x x a b a' b' R` into `x' x' a' a' b' b' R`.
fn handle_to_crosscaps(w: &SurfaceWord) -> Option<[MoveApplication; 3]> {
    let n = w.len();
    let l = w.letters();
    let at = |k: usize| l[k % n];
    let k = (0..n).find(|&k| {
        at(k) == at(k + 1)
            && at(k + 2).symbol != at(k + 3).symbol
            && at(k + 4) == at(k + 2).inv()
            && at(k + 5) == at(k + 3).inv()
    })?;
    let rest = n - 6;
    Some([
        fwd(MoveKind::O3ii, (k + 1) % n, [0, 2]),
        fwd(MoveKind::O3ii, 1, [0, 1 + rest]),
        fwd(MoveKind::O3ii, rest + 3, [0, 1]),
    ])
}

impl SurfaceWord {
    /// Reduces the word to its standard form by elementary moves. Replaying
    /// `trace` from `self` yields `terminal`, which is equivalent (up to
    /// rotation and renaming) to the standard word of `form`.
    pub fn normalize_with_trace(&self, step_limit: usize) -> Result<Normalization, NormalizeError> {
        let form = self.classify().map_err(|_| NormalizeError::Inconsistent)?;
        let mut rw = Rewriter { word: self.clone(), trace: Vec::new(), limit: step_limit, form };
        loop {
            let w = &rw.word;
            if let Some(m) = cancellation(w).or_else(|| corner_merge(w)).or_else(|| crosscap_gather(w)) {
                rw.apply(m)?;
            } else if let Some(ms) = handle_build(w) {
                for m in ms {
                    rw.apply(m)?;
                }
            } else if let Some(ms) = handle_to_crosscaps(w) {
                for m in ms {
                    rw.apply(m)?;
                }
            } else {
                break;
            }
        }
        if !rw.word.equivalent(&form.standard_word()) {
            return Err(NormalizeError::Stalled(rw.word.to_string()));
        }
        Ok(Normalization { form, trace: rw.trace, terminal: rw.word })
    }
}
