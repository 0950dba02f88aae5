//! Elementary transformations of polygon words.
//!
//! Every move is located by a rotation `at` of the word followed by up to two
//! segment lengths in `spans`. Writing `r` for the word rotated to start at
//! `at`, the patterns are (segment names follow the usual notation, `a'` is
//! the inverse of `a`, `X'` the reversed and inverted segment):
//!
//! | move  | forward: `r` matches        | becomes                  | `spans`      |
//! |-------|-----------------------------|--------------------------|--------------|
//! | O1    | `a a' B`                    | `B`                      | unused       |
//! | O2i   | `a b B b' a' A`             | `a B a' A`               | `[|B|, _]`   |
//! | O2ii  | `a b B a b A`               | `a B a A`                | `[|B|, _]`   |
//! | O3i   | `A a B C a' D`              | `B a A D a' C`           | `[|A|, |B|]` |
//! | O3ii  | `A a B C a D`               | `B a A C' a D'`          | `[|A|, |B|]` |
//!
//! Backward moves match the right-hand column (for O3, `spans` then gives
//! the lengths of the leading `B` and the following `A`). Results always
//! start at index 0, so the counterpart of a forward move is the backward
//! move at 0 (with the two spans swapped for O3, see
//! [`MoveApplication::counterpart`]).

use std::fmt;

use thiserror::Error;

use super::{Letter, SurfaceWord};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MoveKind {
    O1,
    O2i,
    O2ii,
    O3i,
    O3ii,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    Forward,
    Backward,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct MoveApplication {
    pub kind: MoveKind,
    pub direction: Direction,
    pub at: usize,
    pub spans: [usize; 2],
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MoveError {
    #[error("{0} does not match the word")]
    PatternMismatch(MoveApplication),
    #[error("cancelling the last pair would empty the word")]
    WouldEmpty,
}

impl MoveApplication {
    pub fn forward(kind: MoveKind, at: usize, spans: [usize; 2]) -> Self {
        MoveApplication { kind, direction: Direction::Forward, at, spans }
    }

    pub fn backward(kind: MoveKind, at: usize, spans: [usize; 2]) -> Self {
        MoveApplication { kind, direction: Direction::Backward, at, spans }
    }

    /// The move undoing this one on the word it produced.
    pub fn counterpart(&self) -> MoveApplication {
        let direction = match self.direction {
            Direction::Forward => Direction::Backward,
            Direction::Backward => Direction::Forward,
        };
        let spans = match self.kind {
            MoveKind::O3i | MoveKind::O3ii => [self.spans[1], self.spans[0]],
            _ => self.spans,
        };
        MoveApplication { kind: self.kind, direction, at: 0, spans }
    }
}

impl fmt::Display for MoveApplication {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let dir = match self.direction {
            Direction::Forward => "fwd",
            Direction::Backward => "bwd",
        };
        write!(f, "{:?} {} at={} spans={},{}", self.kind, dir, self.at, self.spans[0], self.spans[1])
    }
}

fn inverted(seg: &[Letter]) -> impl Iterator<Item = Letter> + '_ {
    seg.iter().rev().map(|l| l.inv())
}

impl SurfaceWord {
    /// Applies an elementary move, or reports why it does not match.
    pub fn apply_move(&self, m: &MoveApplication) -> Result<SurfaceWord, MoveError> {
        let n = self.len();
        let mismatch = || MoveError::PatternMismatch(*m);
        if m.at >= n {
            return Err(mismatch());
        }
        let r = self.rotated(m.at);
        let mut names = self.names.clone();
        let [s0, s1] = m.spans;

        let out: Vec<Letter> = match (m.kind, m.direction) {
            (MoveKind::O1, Direction::Forward) => {
                if r[1] != r[0].inv() {
                    return Err(mismatch());
                }
                if n <= 2 {
                    return Err(MoveError::WouldEmpty);
                }
                r[2..].to_vec()
            }
            (MoveKind::O1, Direction::Backward) => {
                let c = Letter::new(names.len(), false);
                names.push(self.fresh_name());
                [c, c.inv()].into_iter().chain(r).collect()
            }
            (MoveKind::O2i | MoveKind::O2ii, Direction::Forward) => {
                let same = m.kind == MoveKind::O2ii;
                let (a, b) = (r[0], r[1]);
                if a.symbol == b.symbol || 4 + s0 > n {
                    return Err(mismatch());
                }
                let (x, y) = (r[2 + s0], r[3 + s0]);
                let ok = if same { x == a && y == b } else { x == b.inv() && y == a.inv() };
                if !ok {
                    return Err(mismatch());
                }
                let tail = if same { a } else { a.inv() };
                std::iter::once(a)
                    .chain(r[2..2 + s0].iter().copied())
                    .chain(std::iter::once(tail))
                    .chain(r[4 + s0..].iter().copied())
                    .collect()
            }
            (MoveKind::O2i | MoveKind::O2ii, Direction::Backward) => {
                let same = m.kind == MoveKind::O2ii;
                let c = r[0];
                if 2 + s0 > n {
                    return Err(mismatch());
                }
                let partner = r[1 + s0];
                if partner.symbol != c.symbol || (partner == c) != same {
                    return Err(mismatch());
                }
                let b = Letter::new(names.len(), false);
                names.push(self.fresh_name());
                let mut out = vec![c, b];
                out.extend_from_slice(&r[1..1 + s0]);
                if same {
                    out.extend([c, b]);
                } else {
                    out.extend([b.inv(), c.inv()]);
                }
                out.extend_from_slice(&r[2 + s0..]);
                out
            }
            (MoveKind::O3i | MoveKind::O3ii, _) => {
                let same = m.kind == MoveKind::O3ii;
                if s0 >= n {
                    return Err(mismatch());
                }
                let a = r[s0];
                let p = (s0 + 1..n).find(|&j| r[j].symbol == a.symbol).ok_or_else(mismatch)?;
                if p < s0 + 1 + s1 || (r[p] == a) != same {
                    return Err(mismatch());
                }
                // Forward: r = A a B C a* D. Backward: r = B a A D a* C; both
                // have the shape P a Q R a* S with |P| = s0, |Q| = s1.
                let seg_p = &r[..s0];
                let seg_q = &r[s0 + 1..s0 + 1 + s1];
                let seg_r = &r[s0 + 1 + s1..p];
                let seg_s = &r[p + 1..];
                let mut out = Vec::with_capacity(n);
                out.extend_from_slice(seg_q);
                out.push(a);
                out.extend_from_slice(seg_p);
                if same {
                    out.extend(inverted(seg_r));
                    out.push(a);
                    out.extend(inverted(seg_s));
                } else {
                    out.extend_from_slice(seg_s);
                    out.push(a.inv());
                    out.extend_from_slice(seg_r);
                }
                out
            }
        };
        Ok(SurfaceWord::reinterned(out, &names))
    }

    /// Every move that matches this word. O3 moves dominate the count
    /// (cubic in the length).
    pub fn applicable_moves(&self) -> Vec<MoveApplication> {
        let n = self.len();
        let mut moves = Vec::new();
        for at in 0..n {
            moves.push(MoveApplication::backward(MoveKind::O1, at, [0, 0]));
        }
        for at in 0..n {
            let r = self.rotated(at);
            if n > 2 && r[1] == r[0].inv() {
                moves.push(MoveApplication::forward(MoveKind::O1, at, [0, 0]));
            }
            // backward O2 at the letter r[0], B running to its partner
            let p = (1..n).find(|&j| r[j].symbol == r[0].symbol).expect("paired");
            let kind = if r[p] == r[0] { MoveKind::O2ii } else { MoveKind::O2i };
            moves.push(MoveApplication::backward(kind, at, [p - 1, 0]));
            // forward O2 on the adjacent pair r[0] r[1]
            if r[0].symbol != r[1].symbol {
                let q = (2..n).find(|&j| r[j].symbol == r[1].symbol).expect("paired");
                let m = if r[q] == r[1].inv() {
                    MoveApplication::forward(MoveKind::O2i, at, [q - 2, 0])
                } else if q >= 3 {
                    MoveApplication::forward(MoveKind::O2ii, at, [q - 3, 0])
                } else {
                    continue;
                };
                if self.apply_move(&m).is_ok() {
                    moves.push(m);
                }
            }
            // O3 in both directions with the pivot letter at r[s0]
            for s0 in 0..n {
                let p = match (s0 + 1..n).find(|&j| r[j].symbol == r[s0].symbol) {
                    Some(p) => p,
                    None => continue,
                };
                let kind = if r[p] == r[s0] { MoveKind::O3ii } else { MoveKind::O3i };
                for s1 in 0..p - s0 {
                    moves.push(MoveApplication::forward(kind, at, [s0, s1]));
                    moves.push(MoveApplication::backward(kind, at, [s0, s1]));
                }
            }
        }
        moves
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface_word::StandardForm;

    fn w(s: &str) -> SurfaceWord {
        s.parse().unwrap()
    }

    #[test]
    fn o1_cancels_adjacent_inverse_pair() {
        let m = MoveApplication::forward(MoveKind::O1, 1, [0, 0]);
        let out = w("a b b- a-").apply_move(&m).unwrap();
        assert_eq!(out.to_string(), "a- a");
        assert!(out.equivalent(&w("a a-")));
    }

    #[test]
    fn o1_refuses_to_empty_the_word() {
        let m = MoveApplication::forward(MoveKind::O1, 0, [0, 0]);
        assert_eq!(w("a a-").apply_move(&m), Err(MoveError::WouldEmpty));
    }

    #[test]
    fn o2ii_merges_parallel_pair() {
        let m = MoveApplication::forward(MoveKind::O2ii, 0, [0, 0]);
        let out = w("a b a b").apply_move(&m).unwrap();
        assert_eq!(out.to_string(), "a a");
    }

    #[test]
    fn o2i_merges_nested_pair() {
        let m = MoveApplication::forward(MoveKind::O2i, 0, [1, 0]);
        let out = w("a b c b- a- c-").apply_move(&m).unwrap();
        assert_eq!(out.to_string(), "a c a- c-");
    }

    #[test]
    fn o3i_swaps_segments() {
        // A=x, a, B=y, C=y-, a-, D=x-
        let m = MoveApplication::forward(MoveKind::O3i, 0, [1, 1]);
        let out = w("x a y y- a- x-").apply_move(&m).unwrap();
        assert_eq!(out.to_string(), "y a x x- a- y-");
    }

    #[test]
    fn o3ii_forms_crosscap() {
        // a B a D with A = C = empty gives B a a D'
        let m = MoveApplication::forward(MoveKind::O3ii, 0, [0, 1]);
        let out = w("a b a b").apply_move(&m).unwrap();
        assert_eq!(out.to_string(), "b a a b-");
        assert_eq!(out.corner_trace_euler(), 1);
    }

    #[test]
    fn mismatched_patterns_error() {
        let word = w("a b a- b-");
        for m in [
            MoveApplication::forward(MoveKind::O1, 0, [0, 0]),
            MoveApplication::forward(MoveKind::O2ii, 0, [0, 0]),
            MoveApplication::forward(MoveKind::O3ii, 0, [0, 0]),
            MoveApplication::forward(MoveKind::O3i, 0, [0, 3]),
            MoveApplication::forward(MoveKind::O3i, 7, [0, 0]),
        ] {
            assert!(matches!(word.apply_move(&m), Err(MoveError::PatternMismatch(_))), "{m}");
        }
    }

    #[test]
    fn every_applicable_move_preserves_the_surface() {
        for text in ["a b a- b-", "a b a b", "a b c a- c b", "a a b c b- c-"] {
            let word = w(text);
            let form = word.classify().unwrap();
            for m in word.applicable_moves() {
                let out = word.apply_move(&m).unwrap_or_else(|e| panic!("{text}: {m}: {e}"));
                assert_eq!(out.classify().unwrap(), form, "{text} via {m} gave {out}");
                let back = out.apply_move(&m.counterpart()).unwrap();
                assert!(back.equivalent(&word), "{text} via {m} then back gave {back}");
            }
        }
    }

    #[test]
    fn sphere_word_has_no_forward_cancellation() {
        let moves = StandardForm::Sphere.standard_word().applicable_moves();
        assert!(moves.iter().all(|m| !(m.kind == MoveKind::O1 && m.direction == Direction::Forward)));
    }
}
