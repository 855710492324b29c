//! Decorated chord diagrams.
//!
//! A [`PseudoDiagram`] stores a knot diagram as its Gauss diagram: `2n`
//! endpoint slots around the core circle, read counterclockwise from the
//! basepoint (slot 0), matched into `n` chords. Every chord is either an
//! undetermined precrossing or a classical crossing. Virtual crossings are
//! never stored; making a crossing virtual deletes its chord.
//!
//! Precrossings carry a *flat sign*: the writhe the crossing would get if the
//! strand visited first (from the basepoint) went over. Resolving with the
//! first-visited endpoint over therefore yields `writhe = flat_sign`, and the
//! other choice yields `-flat_sign`. Classical chords have the same datum
//! implicitly, see [`PseudoDiagram::flat_sign`].

use std::fmt;
use std::ops::{Mul, Neg};

use serde::{Deserialize, Serialize};

use crate::error::{DiagramError, ParseError};

/// Largest chord count a diagram may carry (interlacement rows are `u64`).
pub const MAX_CHORDS: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn from_value(v: i64) -> Option<Sign> {
        match v {
            1 => Some(Sign::Plus),
            -1 => Some(Sign::Minus),
            _ => None,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

impl Neg for Sign {
    type Output = Sign;
    fn neg(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

/// State of one chord.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ChordState {
    /// Undetermined crossing with its basepoint-relative flat sign.
    Pre { flat_sign: Sign },
    /// Classical crossing; `over` is the slot of the overpassing visit.
    Classical { over: usize, writhe: Sign },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Chord {
    /// Endpoint slots, `ends[0] < ends[1]`.
    pub ends: [usize; 2],
    pub state: ChordState,
}

impl Chord {
    pub fn is_pre(&self) -> bool {
        matches!(self.state, ChordState::Pre { .. })
    }

    pub fn flat_sign(&self) -> Sign {
        match self.state {
            ChordState::Pre { flat_sign } => flat_sign,
            ChordState::Classical { over, writhe } => {
                if over == self.ends[0] {
                    writhe
                } else {
                    -writhe
                }
            }
        }
    }

    pub fn writhe(&self) -> Option<Sign> {
        match self.state {
            ChordState::Pre { .. } => None,
            ChordState::Classical { writhe, .. } => Some(writhe),
        }
    }

    fn contains(&self, slot: usize) -> bool {
        self.ends[0] < slot && slot < self.ends[1]
    }
}

/// How a precrossing is resolved.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Resolution {
    /// Classical crossing with the given writhe; the over endpoint follows from the flat sign.
    Classical(Sign),
    /// Virtual crossing (über mode only): the chord is deleted.
    Virtual,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ResolutionMode {
    #[default]
    Classical,
    Uber,
}

/// Symmetries of the based core circle.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Transform {
    RotateBasepoint(usize),
    Mirror,
    Reverse,
}

/// Chord-crossing graph. Row `c` is a bitmask of the chords crossing `c`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InterlacementGraph {
    rows: Vec<u64>,
}

impl InterlacementGraph {
    pub fn vertex_count(&self) -> usize {
        self.rows.len()
    }

    pub fn has_edge(&self, c: usize, d: usize) -> bool {
        self.rows[c] >> d & 1 == 1
    }

    pub fn neighbors(&self, c: usize) -> u64 {
        self.rows[c]
    }

    pub fn degree(&self, c: usize) -> usize {
        self.rows[c].count_ones() as usize
    }

    pub fn edge_count(&self) -> usize {
        self.rows.iter().map(|r| r.count_ones() as usize).sum::<usize>() / 2
    }

    /// True when no two chords in `set` cross.
    pub fn is_independent(&self, set: u64) -> bool {
        let mut rest = set;
        while rest != 0 {
            let c = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if self.rows[c] & set != 0 {
                return false;
            }
        }
        true
    }
}

/// A classical, virtual or über-virtual pseudodiagram as a decorated chord diagram.
///
/// Chord ids are assigned in first-visit order from the basepoint, so two
/// diagrams with the same Gauss code compare equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PseudoDiagram {
    slots: Vec<usize>,
    chords: Vec<Chord>,
}

impl PseudoDiagram {
    /// The 0-chord diagram of the unknot.
    pub fn unknot() -> Self {
        PseudoDiagram {
            slots: Vec::new(),
            chords: Vec::new(),
        }
    }

    /// Builds a diagram from endpoint pairs and states. Pairs may be given in
    /// any order; chord ids are renumbered by first visit. Callers guarantee
    /// the pairs form a perfect matching of `0..2n` and that classical `over`
    /// slots are endpoints of their chord.
    pub(crate) fn from_pairs(mut pairs: Vec<([usize; 2], ChordState)>) -> Self {
        for (ends, state) in pairs.iter_mut() {
            if ends[0] > ends[1] {
                ends.swap(0, 1);
                if let ChordState::Pre { flat_sign } = state {
                    *flat_sign = -*flat_sign;
                }
            }
        }
        pairs.sort_by_key(|(ends, _)| ends[0]);
        let mut slots = vec![usize::MAX; pairs.len() * 2];
        let chords = pairs
            .into_iter()
            .enumerate()
            .map(|(id, (ends, state))| {
                slots[ends[0]] = id;
                slots[ends[1]] = id;
                Chord { ends, state }
            })
            .collect();
        debug_assert!(slots.iter().all(|&s| s != usize::MAX));
        PseudoDiagram { slots, chords }
    }

    /// Shadow on a matching given as a partner array; flat signs from `flats`
    /// indexed by first-visit chord order.
    pub fn shadow_from_matching(partner: &[usize], flats: &[Sign]) -> Self {
        let mut pairs = Vec::with_capacity(partner.len() / 2);
        for (p, &q) in partner.iter().enumerate() {
            if p < q {
                pairs.push(([p, q], pairs.len()));
            }
        }
        PseudoDiagram::from_pairs(
            pairs
                .into_iter()
                .map(|(ends, i)| (ends, ChordState::Pre { flat_sign: flats[i] }))
                .collect(),
        )
    }

    pub fn n(&self) -> usize {
        self.chords.len()
    }

    /// Number of endpoint slots, `2n`.
    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    pub fn chords(&self) -> &[Chord] {
        &self.chords
    }

    pub fn chord(&self, c: usize) -> Result<&Chord, DiagramError> {
        self.chords.get(c).ok_or(DiagramError::UnknownChord(c))
    }

    /// Chord id at an endpoint slot.
    pub fn slot_chord(&self, slot: usize) -> usize {
        self.slots[slot]
    }

    pub fn partner(&self, slot: usize) -> usize {
        let ends = self.chords[self.slots[slot]].ends;
        if ends[0] == slot {
            ends[1]
        } else {
            ends[0]
        }
    }

    /// Partner array of the underlying chord diagram.
    pub fn matching(&self) -> Vec<usize> {
        (0..self.len()).map(|p| self.partner(p)).collect()
    }

    pub fn is_shadow(&self) -> bool {
        self.chords.iter().all(Chord::is_pre)
    }

    /// True when every chord is classical (a diagram in the strict sense).
    pub fn is_classical(&self) -> bool {
        self.chords.iter().all(|c| !c.is_pre())
    }

    pub fn precrossings(&self) -> Vec<usize> {
        (0..self.n()).filter(|&c| self.chords[c].is_pre()).collect()
    }

    pub fn flat_sign(&self, c: usize) -> Sign {
        self.chords[c].flat_sign()
    }

    pub fn writhe(&self, c: usize) -> Option<Sign> {
        self.chords[c].writhe()
    }

    /// Total writhe over classical chords.
    pub fn writhe_sum(&self) -> i64 {
        self.chords.iter().filter_map(|c| c.writhe()).map(Sign::value).sum()
    }

    /// `Some(true)` when the visit at `slot` is an overpass.
    pub fn is_over(&self, slot: usize) -> Option<bool> {
        match self.chords[self.slots[slot]].state {
            ChordState::Pre { .. } => None,
            ChordState::Classical { over, .. } => Some(over == slot),
        }
    }

    fn check_ids(&self, c: usize, d: usize) -> Result<(), DiagramError> {
        self.chord(c)?;
        self.chord(d)?;
        if c == d {
            return Err(DiagramError::SameChord);
        }
        Ok(())
    }

    /// Whether chords `c` and `d` interleave around the core circle.
    pub fn chords_cross(&self, c: usize, d: usize) -> Result<bool, DiagramError> {
        self.check_ids(c, d)?;
        Ok(self.cross(c, d))
    }

    pub(crate) fn cross(&self, c: usize, d: usize) -> bool {
        let a = &self.chords[c];
        let b = &self.chords[d];
        a.contains(b.ends[0]) != a.contains(b.ends[1])
    }

    pub fn interlacement_graph(&self) -> InterlacementGraph {
        let n = self.n();
        let mut rows = vec![0u64; n];
        for c in 0..n {
            for d in c + 1..n {
                if self.cross(c, d) {
                    rows[c] |= 1 << d;
                    rows[d] |= 1 << c;
                }
            }
        }
        InterlacementGraph { rows }
    }

    /// Genus of the carrier surface obtained by face-tracing the abstract
    /// 4-valent graph of this diagram with the rotation given by the flat signs.
    pub fn carrier_genus(&self) -> usize {
        let n = self.n();
        if n == 0 {
            return 0;
        }
        let faces = face_count(&self.rotation_system());
        (2 + n - faces) / 2
    }

    /// Counterclockwise successor of every dart. Dart `2k` leaves slot `k`
    /// along edge `k`, dart `2k + 1` arrives at slot `k + 1` along edge `k`.
    pub(crate) fn rotation_system(&self) -> Vec<usize> {
        let len = self.len();
        let mut next = vec![0; 2 * len];
        for chord in &self.chords {
            let [p, q] = chord.ends;
            let fo = 2 * p;
            let fi = 2 * ((p + len - 1) % len) + 1;
            let so = 2 * q;
            let si = 2 * ((q + len - 1) % len) + 1;
            let order = match chord.flat_sign() {
                Sign::Plus => [fo, so, fi, si],
                Sign::Minus => [fo, si, fi, so],
            };
            for i in 0..4 {
                next[order[i]] = order[(i + 1) % 4];
            }
        }
        next
    }

    pub fn transform(&self, op: Transform) -> Result<PseudoDiagram, DiagramError> {
        match op {
            Transform::RotateBasepoint(k) => self.rotate_basepoint(k),
            Transform::Mirror => Ok(self.mirror()),
            Transform::Reverse => Ok(self.reverse()),
        }
    }

    /// Moves the basepoint forward by `k` slots.
    pub fn rotate_basepoint(&self, k: usize) -> Result<PseudoDiagram, DiagramError> {
        let len = self.len();
        if k >= len.max(1) {
            return Err(DiagramError::BadRotation { k, len });
        }
        Ok(self.remap(|p| (p + len - k) % len))
    }

    /// Mirror image in the plane: writhes and flat signs negate.
    pub fn mirror(&self) -> PseudoDiagram {
        let chords = self
            .chords
            .iter()
            .map(|c| Chord {
                ends: c.ends,
                state: match c.state {
                    ChordState::Pre { flat_sign } => ChordState::Pre { flat_sign: -flat_sign },
                    ChordState::Classical { over, writhe } => ChordState::Classical { over, writhe: -writhe },
                },
            })
            .collect();
        PseudoDiagram {
            slots: self.slots.clone(),
            chords,
        }
    }

    /// Reverses the orientation of the core circle, keeping the basepoint.
    pub fn reverse(&self) -> PseudoDiagram {
        let len = self.len();
        self.remap(|p| len - 1 - p)
    }

    /// Relabels slots by a bijection. Over slots follow their endpoint;
    /// precrossing flat signs negate when the visit order of a chord swaps
    /// (handled in `from_pairs`).
    pub(crate) fn remap(&self, f: impl Fn(usize) -> usize) -> PseudoDiagram {
        PseudoDiagram::from_pairs(
            self.chords
                .iter()
                .map(|c| {
                    let state = match c.state {
                        ChordState::Classical { over, writhe } => ChordState::Classical { over: f(over), writhe },
                        pre => pre,
                    };
                    ([f(c.ends[0]), f(c.ends[1])], state)
                })
                .collect(),
        )
    }

    /// Resolves the precrossing `chord`.
    pub fn apply_resolution(
        &self,
        chord: usize,
        choice: Resolution,
        mode: ResolutionMode,
    ) -> Result<PseudoDiagram, DiagramError> {
        if !self.chords.iter().any(Chord::is_pre) {
            return Err(DiagramError::NoPrecrossings);
        }
        let c = self.chord(chord)?;
        if !c.is_pre() {
            return Err(DiagramError::AlreadyClassical(chord));
        }
        match choice {
            Resolution::Classical(writhe) => Ok(self.with_writhe(chord, writhe)),
            Resolution::Virtual if mode == ResolutionMode::Uber => Ok(self.delete_chords(1 << chord)),
            Resolution::Virtual => Err(DiagramError::VirtualOutsideUber),
        }
    }

    /// Sets chord `c` classical with the given writhe, choosing the over
    /// endpoint that agrees with its flat sign. Works on classical chords too
    /// (a crossing change when the writhe differs).
    pub fn with_writhe(&self, c: usize, writhe: Sign) -> PseudoDiagram {
        let mut out = self.clone();
        let chord = &mut out.chords[c];
        let flat = chord.flat_sign();
        let over = if writhe == flat { chord.ends[0] } else { chord.ends[1] };
        chord.state = ChordState::Classical { over, writhe };
        out
    }

    /// Switches the crossing `c`: the other strand goes over and the writhe flips.
    pub fn switch_crossing(&self, c: usize) -> Result<PseudoDiagram, DiagramError> {
        match self.chord(c)?.writhe() {
            Some(w) => Ok(self.with_writhe(c, -w)),
            None => Err(DiagramError::HasPrecrossings),
        }
    }

    /// Forgets all over/under information.
    pub fn shadow(&self) -> PseudoDiagram {
        PseudoDiagram {
            slots: self.slots.clone(),
            chords: self
                .chords
                .iter()
                .map(|c| Chord {
                    ends: c.ends,
                    state: ChordState::Pre {
                        flat_sign: c.flat_sign(),
                    },
                })
                .collect(),
        }
    }

    /// Deletes every chord in the bitmask (virtualization), compacting the
    /// surviving slots in cyclic order.
    pub fn delete_chords(&self, mask: u64) -> PseudoDiagram {
        let mut new_index = vec![usize::MAX; self.len()];
        let mut next = 0;
        for (p, &c) in self.slots.iter().enumerate() {
            if mask >> c & 1 == 0 {
                new_index[p] = next;
                next += 1;
            }
        }
        PseudoDiagram::from_pairs(
            self.chords
                .iter()
                .enumerate()
                .filter(|(id, _)| mask >> id & 1 == 0)
                .map(|(_, c)| {
                    let state = match c.state {
                        ChordState::Classical { over, writhe } => ChordState::Classical {
                            over: new_index[over],
                            writhe,
                        },
                        pre => pre,
                    };
                    ([new_index[c.ends[0]], new_index[c.ends[1]]], state)
                })
                .collect(),
        )
    }

    /// Byte encoding used to order symmetric copies; one byte per slot.
    pub(crate) fn key_bytes(&self) -> Vec<u8> {
        self.slots
            .iter()
            .enumerate()
            .map(|(p, &c)| {
                let chord = &self.chords[c];
                let (kind, sign) = match chord.state {
                    ChordState::Pre { flat_sign } => (2u8, flat_sign),
                    ChordState::Classical { over, writhe } => (u8::from(over != p), writhe),
                };
                ((c as u8) << 3) | (kind << 1) | u8::from(sign == Sign::Minus)
            })
            .collect()
    }

    /// Key bytes of the symmetric copy whose slot `i` is old slot `at(i)`,
    /// without building the copy. `reversed` selects the orientation.
    fn symmetric_key(&self, reversed: bool, k: usize, labels: &mut [u8], out: &mut Vec<u8>) {
        let len = self.len();
        let at = |i: usize| {
            let r = (i + k) % len;
            if reversed {
                len - 1 - r
            } else {
                r
            }
        };
        let inv = |p: usize| {
            let r = if reversed { len - 1 - p } else { p };
            (r + len - k) % len
        };
        labels.fill(u8::MAX);
        out.clear();
        let mut next = 0u8;
        for i in 0..len {
            let p = at(i);
            let c = self.slots[p];
            if labels[c] == u8::MAX {
                labels[c] = next;
                next += 1;
            }
            let chord = &self.chords[c];
            let (kind, sign) = match chord.state {
                ChordState::Pre { flat_sign } => {
                    let kept = inv(chord.ends[0]) < inv(chord.ends[1]);
                    (2u8, if kept { flat_sign } else { -flat_sign })
                }
                ChordState::Classical { over, writhe } => (u8::from(over != p), writhe),
            };
            out.push((labels[c] << 3) | (kind << 1) | u8::from(sign == Sign::Minus));
        }
    }

    /// Least key over the `4n` basepoint rotations and reversals, with the
    /// symmetry attaining it.
    fn least_symmetric_key(&self) -> (Vec<u8>, bool, usize) {
        let mut best = self.key_bytes();
        let mut arg = (false, 0);
        let mut labels = vec![0u8; self.n()];
        let mut buf = Vec::with_capacity(self.len());
        for reversed in [false, true] {
            for k in 0..self.len() {
                self.symmetric_key(reversed, k, &mut labels, &mut buf);
                if buf < best {
                    std::mem::swap(&mut best, &mut buf);
                    arg = (reversed, k);
                }
            }
        }
        (best, arg.0, arg.1)
    }

    /// Representative of the orbit under the `4n` basepoint rotations and
    /// reversals: the copy with the least byte key.
    pub fn canonical_form(&self) -> PseudoDiagram {
        let (_, reversed, k) = self.least_symmetric_key();
        let base = if reversed { self.reverse() } else { self.clone() };
        base.remap_rotation(k)
    }

    /// Orbit key without materializing the text form.
    pub fn canonical_key(&self) -> Vec<u8> {
        self.least_symmetric_key().0
    }

    pub fn canonical_code(&self) -> String {
        self.canonical_form().to_string()
    }

    fn remap_rotation(&self, k: usize) -> PseudoDiagram {
        let len = self.len();
        if len == 0 {
            return self.clone();
        }
        self.remap(|p| (p + len - k) % len)
    }

    /// Parses the Gauss-code text format, e.g. `O1+U2+O3+U1+O2+U3+` or `P1+P2+P1+P2+`.
    pub fn parse(text: &str) -> Result<PseudoDiagram, ParseError> {
        text.parse()
    }
}

#[derive(Clone, Copy)]
enum TokenKind {
    Over,
    Under,
    Pre,
}

impl std::str::FromStr for PseudoDiagram {
    type Err = ParseError;

    fn from_str(text: &str) -> Result<Self, ParseError> {
        let text = text.trim();
        if text.is_empty() {
            return Err(ParseError::Empty);
        }
        if text == "()" {
            return Ok(PseudoDiagram::unknot());
        }
        let bytes = text.as_bytes();
        let mut tokens: Vec<(TokenKind, u64, Sign)> = Vec::new();
        let mut i = 0;
        while i < bytes.len() {
            if bytes[i].is_ascii_whitespace() {
                i += 1;
                continue;
            }
            let start = i;
            let bad = |end: usize| ParseError::BadToken {
                token: text[start..end.min(text.len())].to_string(),
                offset: start,
            };
            let kind = match bytes[i] {
                b'O' => TokenKind::Over,
                b'U' => TokenKind::Under,
                b'P' => TokenKind::Pre,
                _ => return Err(bad(i + 1)),
            };
            i += 1;
            let digits = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            if i == digits || i >= bytes.len() {
                return Err(bad(i + 1));
            }
            let label: u64 = text[digits..i].parse().map_err(|_| bad(i))?;
            if label == 0 {
                return Err(bad(i + 1));
            }
            let sign = match bytes[i] {
                b'+' => Sign::Plus,
                b'-' => Sign::Minus,
                _ => return Err(bad(i + 1)),
            };
            i += 1;
            tokens.push((kind, label, sign));
        }

        let mut visits: Vec<(u64, Vec<usize>)> = Vec::new();
        for (slot, (_, label, _)) in tokens.iter().enumerate() {
            match visits.iter_mut().find(|(l, _)| l == label) {
                Some((_, v)) => v.push(slot),
                None => visits.push((*label, vec![slot])),
            }
        }
        if visits.len() > MAX_CHORDS {
            return Err(ParseError::TooManyChords(visits.len()));
        }
        let mut pairs = Vec::with_capacity(visits.len());
        for (label, v) in visits {
            if v.len() != 2 {
                return Err(ParseError::LabelCount { label, count: v.len() });
            }
            let (k0, _, s0) = tokens[v[0]];
            let (k1, _, s1) = tokens[v[1]];
            if s0 != s1 {
                return Err(ParseError::SignMismatch { label });
            }
            let state = match (k0, k1) {
                (TokenKind::Pre, TokenKind::Pre) => ChordState::Pre { flat_sign: s0 },
                (TokenKind::Over, TokenKind::Under) => ChordState::Classical { over: v[0], writhe: s0 },
                (TokenKind::Under, TokenKind::Over) => ChordState::Classical { over: v[1], writhe: s0 },
                (TokenKind::Pre, _) | (_, TokenKind::Pre) => return Err(ParseError::MixedStates { label }),
                _ => return Err(ParseError::SameSide { label }),
            };
            pairs.push(([v[0], v[1]], state));
        }
        Ok(PseudoDiagram::from_pairs(pairs))
    }
}

impl fmt::Display for PseudoDiagram {
    /// Canonical serialization: basepoint-first tokens, labels in first-visit order.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("()");
        }
        for (p, &c) in self.slots.iter().enumerate() {
            let chord = &self.chords[c];
            let (kind, sign) = match chord.state {
                ChordState::Pre { flat_sign } => ('P', flat_sign),
                ChordState::Classical { over, writhe } => (if over == p { 'O' } else { 'U' }, writhe),
            };
            write!(f, "{}{}{}", kind, c + 1, sign.symbol())?;
        }
        Ok(())
    }
}

impl Serialize for PseudoDiagram {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for PseudoDiagram {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

/// Number of orbits of `rotation ∘ twin` on darts.
pub(crate) fn face_count(next: &[usize]) -> usize {
    let mut seen = vec![false; next.len()];
    let mut faces = 0;
    for start in 0..next.len() {
        if seen[start] {
            continue;
        }
        faces += 1;
        let mut d = start;
        while !seen[d] {
            seen[d] = true;
            d = next[d ^ 1];
        }
    }
    faces
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(s: &str) -> PseudoDiagram {
        s.parse().unwrap()
    }

    #[test]
    fn parses_trefoil() {
        let t = d("O1+U2+O3+U1+O2+U3+");
        assert_eq!(t.n(), 3);
        let ends: Vec<_> = t.chords().iter().map(|c| c.ends).collect();
        assert_eq!(ends, vec![[0, 3], [1, 4], [2, 5]]);
        assert!(t.chords().iter().all(|c| c.writhe() == Some(Sign::Plus)));
        assert_eq!(t.to_string(), "O1+U2+O3+U1+O2+U3+");
    }

    #[test]
    fn parses_shadow_and_empty() {
        let s = d("P1+P2+P1+P2+");
        assert!(s.is_shadow());
        assert_eq!(s.chords()[0].ends, [0, 2]);
        assert_eq!(s.chords()[1].ends, [1, 3]);
        assert_eq!(d("()").n(), 0);
        assert_eq!(d(" () ").to_string(), "()");
    }

    #[test]
    fn relabels_in_first_visit_order() {
        assert_eq!(d("U7- O3+ O7- U3+").to_string(), "U1-O2+O1-U2+");
    }

    #[test]
    fn parse_errors_name_the_problem() {
        assert_eq!(PseudoDiagram::parse(""), Err(ParseError::Empty));
        assert_eq!(
            PseudoDiagram::parse("O1+U1+O1+"),
            Err(ParseError::LabelCount { label: 1, count: 3 })
        );
        assert_eq!(
            PseudoDiagram::parse("O1+U2+"),
            Err(ParseError::LabelCount { label: 1, count: 1 })
        );
        assert_eq!(
            PseudoDiagram::parse("P1+U1+"),
            Err(ParseError::MixedStates { label: 1 })
        );
        assert_eq!(PseudoDiagram::parse("O1+O1+"), Err(ParseError::SameSide { label: 1 }));
        assert_eq!(
            PseudoDiagram::parse("P1+P1-"),
            Err(ParseError::SignMismatch { label: 1 })
        );
        assert!(matches!(PseudoDiagram::parse("X1+"), Err(ParseError::BadToken { .. })));
        assert!(matches!(
            PseudoDiagram::parse("O1+U1"),
            Err(ParseError::BadToken { .. })
        ));
        assert!(matches!(
            PseudoDiagram::parse("O0+U0+"),
            Err(ParseError::BadToken { .. })
        ));
    }

    #[test]
    fn crossing_predicate() {
        let t = d("O1+U2+O3+U1+O2+U3+");
        assert!(t.chords_cross(0, 1).unwrap());
        assert!(t.chords_cross(1, 0).unwrap());
        let p = d("P1+P1+P2+P2+");
        assert!(!p.chords_cross(0, 1).unwrap());
        assert_eq!(p.chords_cross(0, 5), Err(DiagramError::UnknownChord(5)));
        let g = t.interlacement_graph();
        assert_eq!(g.edge_count(), 3);
        assert!((0..3).all(|c| g.degree(c) == 2));
        assert_eq!(p.interlacement_graph().edge_count(), 0);
    }

    #[test]
    fn carrier_genus_examples() {
        assert_eq!(d("O1+U2+O3+U1+O2+U3+").carrier_genus(), 0);
        assert_eq!(d("P1+P2+P1+P2+").carrier_genus(), 1);
        assert_eq!(d("P1-P2+P1-P2+").carrier_genus(), 1);
        assert_eq!(PseudoDiagram::unknot().carrier_genus(), 0);
        assert_eq!(d("O1+U1+").carrier_genus(), 0);
    }

    #[test]
    fn transforms() {
        let t = d("O1+U2+O3+U1+O2+U3+");
        assert_eq!(t.mirror().mirror(), t);
        assert_eq!(t.reverse().reverse(), t);
        let r = t.rotate_basepoint(2).unwrap();
        let ends: Vec<_> = r.chords().iter().map(|c| c.ends).collect();
        assert_eq!(ends, vec![[0, 3], [1, 4], [2, 5]]);
        assert_eq!(t.mirror().to_string(), "O1-U2-O3-U1-O2-U3-");
        assert!(t.rotate_basepoint(6).is_err());
        // full turn composed from single steps
        let mut s = t.clone();
        for _ in 0..6 {
            s = s.rotate_basepoint(1).unwrap();
        }
        assert_eq!(s, t);
    }

    #[test]
    fn rotation_negates_swapped_flat_signs() {
        let s = d("P1+P2-P1+P2-");
        let r = s.rotate_basepoint(1).unwrap();
        // chord 1's visits swap order, chord 2's do not
        assert_eq!(r.to_string(), "P1-P2-P1-P2-");
    }

    #[test]
    fn resolutions() {
        let s = d("P1+P2+P1+P2+");
        let a = s
            .apply_resolution(0, Resolution::Classical(Sign::Plus), ResolutionMode::Classical)
            .unwrap();
        let b = a
            .apply_resolution(1, Resolution::Classical(Sign::Plus), ResolutionMode::Classical)
            .unwrap();
        assert_eq!(b.to_string(), "O1+O2+U1+U2+");
        let neg = s
            .apply_resolution(0, Resolution::Classical(Sign::Minus), ResolutionMode::Classical)
            .unwrap();
        assert_eq!(neg.to_string(), "U1-P2+O1-P2+");
        let v = s
            .apply_resolution(0, Resolution::Virtual, ResolutionMode::Uber)
            .unwrap();
        assert_eq!(v.to_string(), "P1+P1+");
        assert_eq!(
            s.apply_resolution(0, Resolution::Virtual, ResolutionMode::Classical),
            Err(DiagramError::VirtualOutsideUber)
        );
        assert_eq!(
            b.apply_resolution(0, Resolution::Classical(Sign::Plus), ResolutionMode::Classical),
            Err(DiagramError::NoPrecrossings)
        );
        assert_eq!(
            a.apply_resolution(0, Resolution::Classical(Sign::Plus), ResolutionMode::Classical),
            Err(DiagramError::AlreadyClassical(0))
        );
        assert_eq!(
            PseudoDiagram::unknot().apply_resolution(0, Resolution::Virtual, ResolutionMode::Uber),
            Err(DiagramError::NoPrecrossings)
        );
    }

    #[test]
    fn symmetric_keys_match_materialized_copies() {
        for code in ["O1+U2+O3+U1+O2+U3+", "P1+P2-P3+P1+U4-P2-P3+O4-", "O1-U2+P3-U1-O2+P3-"] {
            let t = d(code);
            let mut labels = vec![0u8; t.n()];
            let mut buf = Vec::new();
            for k in 0..t.len() {
                t.symmetric_key(false, k, &mut labels, &mut buf);
                assert_eq!(buf, t.rotate_basepoint(k).unwrap().key_bytes());
                t.symmetric_key(true, k, &mut labels, &mut buf);
                assert_eq!(buf, t.reverse().rotate_basepoint(k).unwrap().key_bytes());
            }
        }
    }

    #[test]
    fn canonical_form_is_orbit_invariant() {
        let t = d("O1+U2+O3+U1+O2+U3+");
        let c = t.canonical_code();
        for k in 0..6 {
            assert_eq!(t.rotate_basepoint(k).unwrap().canonical_code(), c);
            assert_eq!(t.reverse().rotate_basepoint(k).unwrap().canonical_code(), c);
        }
    }
}
