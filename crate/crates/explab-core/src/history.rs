//! Public histories: finite words over {S, R} with the turn structure and the
//! experiment/disclosure counters the rest of the crate relies on.
//!
//! A history is stored as a fixed-width bitset plus incrementally maintained
//! counters, so extension is O(1), values are Copy, and equality/hashing are
//! cheap enough to key evaluator memo tables.

use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

/// Hard cap on history length, comfortably above the evaluator's 400
/// half-period horizon cap.
pub const MAX_LEN: usize = 448;
const WORDS: usize = MAX_LEN / 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Action {
    S,
    R,
}

impl Action {
    pub fn other(self) -> Action {
        match self {
            Action::S => Action::R,
            Action::R => Action::S,
        }
    }
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Action::S => "S",
            Action::R => "R",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Player {
    P1,
    P2,
}

impl Player {
    #[inline]
    pub fn index(self) -> usize {
        match self {
            Player::P1 => 0,
            Player::P2 => 1,
        }
    }

    #[inline]
    pub fn other(self) -> Player {
        match self {
            Player::P1 => Player::P2,
            Player::P2 => Player::P1,
        }
    }

    pub fn from_index(i: usize) -> Player {
        match i {
            0 => Player::P1,
            1 => Player::P2,
            _ => panic!("player index out of range: {i}"),
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Player::P1 => "1",
            Player::P2 => "2",
        })
    }
}

/// Immutable public history. Player 1 moves at even positions.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct PublicHistory {
    len: u16,
    bits: [u64; WORDS], // bit set <=> R at that position
    ne: [u16; 2],       // experiments per player
    u: [u16; 2],        // trailing undisclosed run per player
}

#[derive(Debug, Error, PartialEq)]
#[error("history length cap {MAX_LEN} exceeded")]
pub struct HistoryFull;

impl Default for PublicHistory {
    fn default() -> Self {
        Self::empty()
    }
}

impl PublicHistory {
    pub fn empty() -> Self {
        PublicHistory { len: 0, bits: [0; WORDS], ne: [0; 2], u: [0; 2] }
    }

    pub fn from_actions(actions: &[Action]) -> Result<Self, HistoryFull> {
        let mut h = Self::empty();
        for &a in actions {
            h = h.extend(a)?;
        }
        Ok(h)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len as usize
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// The player about to move: player 1 iff the length is even.
    #[inline]
    pub fn active_player(&self) -> Player {
        if self.len % 2 == 0 {
            Player::P1
        } else {
            Player::P2
        }
    }

    #[inline]
    pub fn action_at(&self, i: usize) -> Action {
        assert!(i < self.len(), "index {i} out of bounds for length {}", self.len);
        if self.bits[i / 64] >> (i % 64) & 1 == 1 {
            Action::R
        } else {
            Action::S
        }
    }

    /// Mover of position `i` (player 1 at even positions).
    #[inline]
    pub fn mover_at(i: usize) -> Player {
        if i % 2 == 0 {
            Player::P1
        } else {
            Player::P2
        }
    }

    pub fn extend(&self, a: Action) -> Result<Self, HistoryFull> {
        let i = self.len();
        if i >= MAX_LEN {
            return Err(HistoryFull);
        }
        let mover = self.active_player().index();
        let mut h = *self;
        h.len += 1;
        match a {
            Action::R => {
                h.bits[i / 64] |= 1u64 << (i % 64);
                h.ne[mover] += 1;
                h.u[mover] += 1;
            }
            Action::S => {
                h.u[mover] = 0;
            }
        }
        Ok(h)
    }

    /// History with the final action removed.
    pub fn parent(&self) -> Option<(Self, Action)> {
        if self.len == 0 {
            return None;
        }
        let last = self.action_at(self.len() - 1);
        let mut h = *self;
        let i = self.len() - 1;
        let mover = Self::mover_at(i).index();
        h.len -= 1;
        if last == Action::R {
            h.bits[i / 64] &= !(1u64 << (i % 64));
            h.ne[mover] -= 1;
        }
        // trailing run of the mover must be recomputed after removal
        h.u[mover] = 0;
        let mut j = i;
        while j >= 2 {
            j -= 2; // previous move of the same player
            if h.bits[j / 64] >> (j % 64) & 1 == 1 {
                h.u[mover] += 1;
            } else {
                break;
            }
        }
        Some((h, last))
    }

    /// Total number of experiments (R choices) along the history.
    #[inline]
    pub fn n_e(&self) -> u32 {
        u32::from(self.ne[0]) + u32::from(self.ne[1])
    }

    /// Experiments by one player.
    #[inline]
    pub fn n_e_i(&self, p: Player) -> u32 {
        u32::from(self.ne[p.index()])
    }

    /// Undisclosed experiments: the player's maximal trailing run of R
    /// choices, whose outcomes the opponent cannot yet rule out.
    #[inline]
    pub fn u_i(&self, p: Player) -> u32 {
        u32::from(self.u[p.index()])
    }

    /// Disclosed experiments: all experiments before the player's last S.
    #[inline]
    pub fn d_i(&self, p: Player) -> u32 {
        self.n_e_i(p) - self.u_i(p)
    }

    pub fn iter(&self) -> impl Iterator<Item = Action> + '_ {
        (0..self.len()).map(move |i| self.action_at(i))
    }

    pub fn is_prefix_of(&self, other: &PublicHistory) -> bool {
        if self.len > other.len {
            return false;
        }
        (0..self.len()).all(|i| self.action_at(i) == other.action_at(i))
    }

    /// Canonical compact rendering: one letter per move, empty string for the
    /// empty history.
    pub fn render(&self) -> String {
        self.iter().map(|a| if a == Action::R { 'R' } else { 'S' }).collect()
    }

    /// Parses the compact grammar used in all I/O:
    /// letters S/R, grouping `( )`, repetition `^k` (alias `*k`) after a
    /// letter or group, and ignorable separators `·`, `.`, whitespace.
    /// Examples: `(RR)^2·S` (expands to RRRRS), `RS·RR·S`, ``.
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut actions = Vec::new();
        parse_seq(text.as_bytes(), 0, text.len(), &mut actions)?;
        PublicHistory::from_actions(&actions).map_err(|_| ParseError {
            offset: text.len(),
            kind: ParseErrorKind::TooLong,
        })
    }
}

impl fmt::Display for PublicHistory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl fmt::Debug for PublicHistory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PublicHistory(\"{}\")", self.render())
    }
}

// ---------------------------------------------------------------------------
// parsing

#[derive(Debug, Error, PartialEq)]
#[error("parse error at byte {offset}: {kind}")]
pub struct ParseError {
    pub offset: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, PartialEq)]
pub enum ParseErrorKind {
    UnexpectedChar(char),
    UnbalancedParen,
    MissingCount,
    TooLong,
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::UnexpectedChar(c) => write!(f, "unexpected character {c:?}"),
            ParseErrorKind::UnbalancedParen => f.write_str("unbalanced parenthesis"),
            ParseErrorKind::MissingCount => f.write_str("repetition marker without a count"),
            ParseErrorKind::TooLong => write!(f, "expansion exceeds the {MAX_LEN}-move cap"),
        }
    }
}

fn err(offset: usize, kind: ParseErrorKind) -> ParseError {
    ParseError { offset, kind }
}

/// Recursive-descent expansion of the history grammar over bytes
/// `text[start..end]`. The separator `·` is the two-byte UTF-8 sequence
/// 0xC2 0xB7; both bytes are skipped.
fn parse_seq(text: &[u8], start: usize, end: usize, out: &mut Vec<Action>) -> Result<(), ParseError> {
    let mut i = start;
    while i < end {
        let b = text[i];
        match b {
            b'S' | b'R' => {
                let unit_start = out.len();
                out.push(if b == b'R' { Action::R } else { Action::S });
                i += 1;
                i = apply_repeat(text, i, end, out, unit_start)?;
            }
            b'(' => {
                let close = matching_paren(text, i, end)?;
                let unit_start = out.len();
                parse_seq(text, i + 1, close, out)?;
                i = close + 1;
                i = apply_repeat(text, i, end, out, unit_start)?;
            }
            b')' => return Err(err(i, ParseErrorKind::UnbalancedParen)),
            b'.' | b' ' | b'\t' => i += 1,
            0xC2 if i + 1 < end && text[i + 1] == 0xB7 => i += 2, // '·'
            b'^' | b'*' => return Err(err(i, ParseErrorKind::MissingCount)),
            _ => {
                let c = std::str::from_utf8(&text[i..end])
                    .ok()
                    .and_then(|s| s.chars().next())
                    .unwrap_or('\u{fffd}');
                return Err(err(i, ParseErrorKind::UnexpectedChar(c)));
            }
        }
        if out.len() > MAX_LEN {
            return Err(err(i, ParseErrorKind::TooLong));
        }
    }
    Ok(())
}

/// If a `^k` / `*k` follows at position `i`, repeats `out[unit_start..]`
/// k-1 further times. Returns the position after the repetition clause.
fn apply_repeat(
    text: &[u8],
    i: usize,
    end: usize,
    out: &mut Vec<Action>,
    unit_start: usize,
) -> Result<usize, ParseError> {
    if i >= end || (text[i] != b'^' && text[i] != b'*') {
        return Ok(i);
    }
    let mut j = i + 1;
    let digits_start = j;
    while j < end && text[j].is_ascii_digit() {
        j += 1;
    }
    if j == digits_start {
        return Err(err(i, ParseErrorKind::MissingCount));
    }
    let count: usize = std::str::from_utf8(&text[digits_start..j])
        .unwrap()
        .parse()
        .map_err(|_| err(digits_start, ParseErrorKind::TooLong))?;
    let unit: Vec<Action> = out[unit_start..].to_vec();
    if count == 0 {
        out.truncate(unit_start);
    } else {
        if unit.len().saturating_mul(count) > MAX_LEN {
            return Err(err(digits_start, ParseErrorKind::TooLong));
        }
        for _ in 1..count {
            out.extend_from_slice(&unit);
        }
    }
    Ok(j)
}

fn matching_paren(text: &[u8], open: usize, end: usize) -> Result<usize, ParseError> {
    let mut depth = 0usize;
    for i in open..end {
        match text[i] {
            b'(' => depth += 1,
            b')' => {
                depth -= 1;
                if depth == 0 {
                    return Ok(i);
                }
            }
            _ => {}
        }
    }
    Err(err(open, ParseErrorKind::UnbalancedParen))
}

// ---------------------------------------------------------------------------
