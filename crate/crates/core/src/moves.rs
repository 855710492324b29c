//! Reidemeister moves on Gauss diagrams of virtual knots.
//!
//! Moves are detected on the chord code alone. R1 and R2 need only slot
//! adjacency and writhes. R3 additionally needs the triangle formed by the
//! three strands to be a face of the carrier surface, which is read off the
//! rotation system.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::diagram::{ChordState, PseudoDiagram, Sign};
use crate::error::DiagramError;

/// One move, with parameters that refer to the diagram it is applied to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "move", rename_all = "snake_case")]
pub enum Move {
    /// Delete a chord whose endpoints are cyclically adjacent.
    R1Remove { chord: usize },
    /// Insert a kink before slot `gap`.
    R1Add { gap: usize, over_first: bool, writhe: Sign },
    /// Delete two chords of opposite writhe with adjacent tails and adjacent heads.
    R2Remove { chords: [usize; 2] },
    /// Push the strand at `gaps[0]` across the strand at `gaps[1]` (gaps may
    /// coincide). `first_over` puts the first strand on top; `swapped` makes
    /// the second strand meet the new crossings in reverse order; `writhe`
    /// is the sign of the crossing met first by the first strand.
    R2Add {
        gaps: [usize; 2],
        first_over: bool,
        swapped: bool,
        writhe: Sign,
    },
    /// Slide a strand across the triangle whose sides are the edges starting
    /// at the three given slots.
    R3 { edges: [usize; 3] },
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = |w: &Sign| w.symbol();
        match self {
            Move::R1Remove { chord } => write!(f, "R1- {}", chord + 1),
            Move::R1Add {
                gap,
                over_first,
                writhe,
            } => {
                write!(
                    f,
                    "R1+ gap={} {}{}",
                    gap,
                    if *over_first { "OU" } else { "UO" },
                    s(writhe)
                )
            }
            Move::R2Remove { chords } => write!(f, "R2- {} {}", chords[0] + 1, chords[1] + 1),
            Move::R2Add {
                gaps,
                first_over,
                swapped,
                writhe,
            } => write!(
                f,
                "R2+ gaps={},{} {}{}{}",
                gaps[0],
                gaps[1],
                if *first_over { "over" } else { "under" },
                if *swapped { " swapped " } else { " " },
                s(writhe)
            ),
            Move::R3 { edges } => write!(f, "R3 {} {} {}", edges[0], edges[1], edges[2]),
        }
    }
}

fn over_under(d: &PseudoDiagram, c: usize) -> Option<(usize, usize, Sign)> {
    let chord = &d.chords()[c];
    match chord.state {
        ChordState::Classical { over, writhe } => {
            let under = if over == chord.ends[0] {
                chord.ends[1]
            } else {
                chord.ends[0]
            };
            Some((over, under, writhe))
        }
        ChordState::Pre { .. } => None,
    }
}

fn adjacent(a: usize, b: usize, len: usize) -> bool {
    (a + 1) % len == b || (b + 1) % len == a
}

/// Face structure of the carrier surface: face id of every dart and face sizes.
pub(crate) struct Faces {
    of: Vec<usize>,
    size: Vec<usize>,
}

impl Faces {
    pub(crate) fn new(d: &PseudoDiagram) -> Faces {
        let next = d.rotation_system();
        let mut of = vec![usize::MAX; next.len()];
        let mut size = Vec::new();
        for start in 0..next.len() {
            if of[start] != usize::MAX {
                continue;
            }
            let id = size.len();
            let mut count = 0;
            let mut dart = start;
            while of[dart] == usize::MAX {
                of[dart] = id;
                count += 1;
                dart = next[dart ^ 1];
            }
            size.push(count);
        }
        Faces { of, size }
    }

    /// Whether some face of exactly `edges.len()` sides runs along all the
    /// given edges (edge `k` joins slot `k` to slot `k + 1`).
    pub(crate) fn bounds_polygon(&self, edges: &[usize]) -> bool {
        let first = edges[0];
        [2 * first, 2 * first + 1].iter().any(|&dart| {
            let f = self.of[dart];
            self.size[f] == edges.len()
                && edges[1..]
                    .iter()
                    .all(|&e| self.of[2 * e] == f || self.of[2 * e + 1] == f)
        })
    }
}

fn require_classical(d: &PseudoDiagram) -> Result<(), DiagramError> {
    if d.is_classical() {
        Ok(())
    } else {
        Err(DiagramError::HasPrecrossings)
    }
}

fn illegal(m: &Move, why: &str) -> DiagramError {
    DiagramError::IllegalMove(format!("{m}: {why}"))
}

/// Applies `m` after checking that it is a legal move on `d`.
pub fn apply_move(d: &PseudoDiagram, m: &Move) -> Result<PseudoDiagram, DiagramError> {
    require_classical(d)?;
    let len = d.len();
    match *m {
        Move::R1Remove { chord } => {
            let ends = d.chord(chord)?.ends;
            if !adjacent(ends[0], ends[1], len) {
                return Err(illegal(m, "endpoints are not adjacent"));
            }
            Ok(d.delete_chords(1 << chord))
        }
        Move::R1Add {
            gap,
            over_first,
            writhe,
        } => {
            if gap > len {
                return Err(illegal(m, "gap out of range"));
            }
            let over = if over_first { gap } else { gap + 1 };
            Ok(insert(d, &[gap], vec![([gap, gap + 1], over, writhe)]))
        }
        Move::R2Remove { chords: [a, b] } => {
            d.chord(a)?;
            d.chord(b)?;
            if a == b {
                return Err(DiagramError::SameChord);
            }
            let (oa, ua, wa) = over_under(d, a).unwrap();
            let (ob, ub, wb) = over_under(d, b).unwrap();
            if wa == wb {
                return Err(illegal(m, "writhes do not cancel"));
            }
            if !adjacent(oa, ob, len) || !adjacent(ua, ub, len) {
                return Err(illegal(m, "tails or heads are not adjacent"));
            }
            Ok(d.delete_chords((1 << a) | (1 << b)))
        }
        Move::R2Add {
            gaps: [g1, g2],
            first_over,
            swapped,
            writhe,
        } => {
            if g1 > g2 || g2 > len {
                return Err(illegal(m, "gaps must satisfy gap0 <= gap1 <= 2n"));
            }
            // new slots: first strand a0 a1 at g1, second strand b0 b1 at g2
            let (a0, a1) = (g1, g1 + 1);
            let (b0, b1) = (g2 + 2, g2 + 3);
            let (x_b, y_b) = if swapped { (b1, b0) } else { (b0, b1) };
            let over = |a: usize, b: usize| if first_over { a } else { b };
            Ok(insert(
                d,
                &[g1, g2],
                vec![([a0, x_b], over(a0, x_b), writhe), ([a1, y_b], over(a1, y_b), -writhe)],
            ))
        }
        Move::R3 { edges } => {
            if !is_r3_triangle(d, edges, None) {
                return Err(illegal(m, "not a sliding triangle"));
            }
            let swap = |p: usize| {
                for &e in &edges {
                    if p == e {
                        return (e + 1) % len;
                    }
                    if p == (e + 1) % len {
                        return e;
                    }
                }
                p
            };
            Ok(d.remap(swap))
        }
    }
}

/// Inserts two new slots before each old slot listed in `gaps` (sorted; a
/// repeated gap receives four consecutive slots) and adds chords given in
/// new slot numbers.
fn insert(d: &PseudoDiagram, gaps: &[usize], new: Vec<([usize; 2], usize, Sign)>) -> PseudoDiagram {
    let shift = |p: usize| p + 2 * gaps.iter().filter(|&&g| g <= p).count();
    let mut pairs: Vec<_> = d
        .chords()
        .iter()
        .map(|c| {
            let state = match c.state {
                ChordState::Classical { over, writhe } => ChordState::Classical {
                    over: shift(over),
                    writhe,
                },
                pre => pre,
            };
            ([shift(c.ends[0]), shift(c.ends[1])], state)
        })
        .collect();
    for (ends, over, writhe) in new {
        pairs.push((ends, ChordState::Classical { over, writhe }));
    }
    PseudoDiagram::from_pairs(pairs)
}

/// Checks the R3 pattern on the edges starting at the three slots: the six
/// endpoints are distinct and belong to three chords, one edge carries two
/// overpasses, one two underpasses, and the triangle is a face.
fn is_r3_triangle(d: &PseudoDiagram, edges: [usize; 3], faces: Option<&Faces>) -> bool {
    let len = d.len();
    if len < 6 || edges.iter().any(|&e| e >= len) {
        return false;
    }
    let mut slots = Vec::with_capacity(6);
    for &e in &edges {
        slots.push(e);
        slots.push((e + 1) % len);
    }
    let mut sorted = slots.clone();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != 6 {
        return false;
    }
    let mut chords: Vec<usize> = slots.iter().map(|&p| d.slot_chord(p)).collect();
    for pair in chords.chunks(2) {
        if pair[0] == pair[1] {
            return false;
        }
    }
    chords.sort_unstable();
    chords.dedup();
    if chords.len() != 3 {
        return false;
    }
    let overs: Vec<usize> = slots
        .chunks(2)
        .map(|pair| pair.iter().filter(|&&p| d.is_over(p) == Some(true)).count())
        .collect();
    let mut kinds = overs.clone();
    kinds.sort_unstable();
    if kinds != [0, 1, 2] {
        return false;
    }
    match faces {
        Some(f) => f.bounds_polygon(&edges),
        None => Faces::new(d).bounds_polygon(&edges),
    }
}

/// All R1 removals.
pub fn r1_removals(d: &PseudoDiagram) -> Vec<Move> {
    let len = d.len();
    d.chords()
        .iter()
        .enumerate()
        .filter(|(_, c)| adjacent(c.ends[0], c.ends[1], len))
        .map(|(chord, _)| Move::R1Remove { chord })
        .collect()
}

/// All R2 removals.
pub fn r2_removals(d: &PseudoDiagram) -> Vec<Move> {
    let len = d.len();
    let mut out = Vec::new();
    for a in 0..d.n() {
        let Some((oa, ua, wa)) = over_under(d, a) else { continue };
        // the partner's tail must be next to oa
        for ob in [(oa + 1) % len, (oa + len - 1) % len] {
            let b = d.slot_chord(ob);
            if b <= a || d.is_over(ob) != Some(true) {
                continue;
            }
            let (_, ub, wb) = over_under(d, b).unwrap();
            if wa != wb && adjacent(ua, ub, len) && !out.contains(&Move::R2Remove { chords: [a, b] }) {
                out.push(Move::R2Remove { chords: [a, b] });
            }
        }
    }
    out
}

/// All R3 moves, each triangle listed once with its edges sorted.
pub fn r3_moves(d: &PseudoDiagram) -> Vec<Move> {
    let len = d.len();
    if d.n() < 3 {
        return Vec::new();
    }
    let faces = Faces::new(d);
    let mut out = Vec::new();
    // anchor on the edge carrying two overpasses
    for top in 0..len {
        let t1 = (top + 1) % len;
        if d.is_over(top) != Some(true) || d.is_over(t1) != Some(true) {
            continue;
        }
        let (a, b) = (d.slot_chord(top), d.slot_chord(t1));
        if a == b {
            continue;
        }
        for (deep, mid) in [(a, b), (b, a)] {
            // `deep` reaches the bottom strand, `mid` the middle strand
            let (_, u_deep, _) = over_under(d, deep).unwrap();
            let (_, u_mid, _) = over_under(d, mid).unwrap();
            for bottom in [u_deep, (u_deep + len - 1) % len] {
                let other = if bottom == u_deep { (u_deep + 1) % len } else { bottom };
                if d.is_over(other) != Some(false) {
                    continue;
                }
                let c = d.slot_chord(other);
                if c == a || c == b {
                    continue;
                }
                let (o_c, _, _) = over_under(d, c).unwrap();
                if !adjacent(o_c, u_mid, len) {
                    continue;
                }
                let middle = if (o_c + 1) % len == u_mid { o_c } else { u_mid };
                let mut edges = [top, bottom, middle];
                edges.sort_unstable();
                let m = Move::R3 { edges };
                if !out.contains(&m) && is_r3_triangle(d, edges, Some(&faces)) {
                    out.push(m);
                }
            }
        }
    }
    out
}

/// Moves that lower the crossing number: R1 and R2 removals.
pub fn removals(d: &PseudoDiagram) -> Vec<Move> {
    let mut out = r1_removals(d);
    out.extend(r2_removals(d));
    out
}

/// All moves whose result has at most `max_crossings` chords.
pub fn moves(d: &PseudoDiagram, max_crossings: usize) -> Vec<Move> {
    let mut out = removals(d);
    out.extend(r3_moves(d));
    let n = d.n();
    let gaps = d.len().max(1);
    if n < max_crossings {
        for gap in 0..gaps {
            for over_first in [true, false] {
                for writhe in [Sign::Plus, Sign::Minus] {
                    out.push(Move::R1Add {
                        gap,
                        over_first,
                        writhe,
                    });
                }
            }
        }
    }
    if n + 2 <= max_crossings {
        for g1 in 0..gaps {
            for g2 in g1..gaps {
                for first_over in [true, false] {
                    for swapped in [false, true] {
                        for writhe in [Sign::Plus, Sign::Minus] {
                            out.push(Move::R2Add {
                                gaps: [g1, g2],
                                first_over,
                                swapped,
                                writhe,
                            });
                        }
                    }
                }
            }
        }
    }
    out
}

/// All diagrams one move away, within the crossing budget.
pub fn neighbors(d: &PseudoDiagram, max_crossings: usize) -> Result<Vec<PseudoDiagram>, DiagramError> {
    require_classical(d)?;
    moves(d, max_crossings).iter().map(|m| apply_move(d, m)).collect()
}

/// Replays a trace, checking every move.
pub fn replay(start: &PseudoDiagram, trace: &[Move]) -> Result<PseudoDiagram, DiagramError> {
    trace.iter().try_fold(start.clone(), |d, m| apply_move(&d, m))
}
