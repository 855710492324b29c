//! Bounded triviality and classicality decisions.
//!
//! Invariant certificates are tried first. Otherwise the diagram is reduced
//! greedily by R1/R2 removals and then searched best-first (fewest crossings
//! first) over the move graph, within a crossing cap and a state budget.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::diagram::{PseudoDiagram, Sign};
use crate::error::DiagramError;
use crate::invariants::{f_polynomial, intersection_index_polynomial, j_invariant, v2, DEFAULT_BRACKET_LIMIT};
use crate::moves::{apply_move, moves, removals, Move};
use crate::polynomial::{IntPolynomial, LaurentPolynomial};

pub const DEFAULT_MAX_STATES: usize = 200_000;
pub const DEFAULT_EXTRA_CROSSINGS: usize = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    /// Absolute cap on crossings during search; `None` means `n + 2`.
    pub max_crossings: Option<usize>,
    /// Cap on distinct diagrams visited.
    pub max_states: usize,
    /// Largest diagram on which the bracket certificate is attempted.
    pub bracket_limit: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_crossings: None,
            max_states: DEFAULT_MAX_STATES,
            bracket_limit: DEFAULT_BRACKET_LIMIT,
        }
    }
}

impl Budget {
    pub fn crossing_cap(&self, n: usize) -> usize {
        self.max_crossings.unwrap_or(n + DEFAULT_EXTRA_CROSSINGS)
    }
}

/// A named invariant value proving a diagram is not the unknot (or not classical).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "invariant", content = "value")]
pub enum Certificate {
    #[serde(rename = "J")]
    J(i64),
    #[serde(rename = "p_t")]
    IndexPolynomial(IntPolynomial),
    #[serde(rename = "v2")]
    V2(i64),
    #[serde(rename = "f")]
    Bracket(LaurentPolynomial),
}

impl Certificate {
    pub fn name(&self) -> &'static str {
        match self {
            Certificate::J(_) => "J",
            Certificate::IndexPolynomial(_) => "p_t",
            Certificate::V2(_) => "v2",
            Certificate::Bracket(_) => "f",
        }
    }

    /// Recomputes the invariant on the greedy reduction of `d` (where the
    /// oracle evaluates it) and checks it still certifies.
    pub fn recheck(&self, d: &PseudoDiagram, bracket_limit: usize) -> bool {
        let d = &greedy_reduce(d).0;
        match self {
            Certificate::J(v) => j_invariant(d).ok() == Some(*v) && *v != 0,
            Certificate::IndexPolynomial(p) => {
                intersection_index_polynomial(d).ok().as_ref() == Some(p) && !p.is_zero()
            }
            Certificate::V2(v) => d.carrier_genus() == 0 && v2(d).ok() == Some(*v) && *v != 0,
            Certificate::Bracket(f) => f_polynomial(d, bracket_limit).ok().as_ref() == Some(f) && !f.is_one(),
        }
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Certificate::J(v) => write!(f, "J = {v}"),
            Certificate::IndexPolynomial(p) => write!(f, "p_t = {p}"),
            Certificate::V2(v) => write!(f, "v2 = {v}"),
            Certificate::Bracket(p) => write!(f, "f = {p}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    /// Moves leading to the 0-chord diagram.
    Trivial {
        trace: Vec<Move>,
    },
    Nontrivial {
        certificate: Certificate,
    },
    Unknown {
        states: usize,
    },
}

impl Verdict {
    pub fn is_trivial(&self) -> bool {
        matches!(self, Verdict::Trivial { .. })
    }

    pub fn is_nontrivial(&self) -> bool {
        matches!(self, Verdict::Nontrivial { .. })
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Trivial { trace } => write!(f, "trivial ({} moves)", trace.len()),
            Verdict::Nontrivial { certificate } => write!(f, "nontrivial ({certificate})"),
            Verdict::Unknown { states } => write!(f, "unknown ({states} states searched)"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum ClassicalityVerdict {
    /// Moves leading to a diagram of carrier genus 0.
    Classical {
        trace: Vec<Move>,
    },
    NonClassical {
        certificate: Certificate,
    },
    Unknown {
        states: usize,
    },
}

impl fmt::Display for ClassicalityVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassicalityVerdict::Classical { trace } => write!(f, "classical ({} moves)", trace.len()),
            ClassicalityVerdict::NonClassical { certificate } => write!(f, "non-classical ({certificate})"),
            ClassicalityVerdict::Unknown { states } => write!(f, "unknown ({states} states searched)"),
        }
    }
}

fn require_classical(d: &PseudoDiagram) -> Result<(), DiagramError> {
    if d.is_classical() {
        Ok(())
    } else {
        Err(DiagramError::HasPrecrossings)
    }
}

/// Certificate that `d` is not classical: `J != 0` or `p_t != 0`.
pub fn nonclassicality_certificate(d: &PseudoDiagram) -> Result<Option<Certificate>, DiagramError> {
    let j = j_invariant(d)?;
    if j != 0 {
        return Ok(Some(Certificate::J(j)));
    }
    let p = intersection_index_polynomial(d)?;
    if !p.is_zero() {
        return Ok(Some(Certificate::IndexPolynomial(p)));
    }
    Ok(None)
}

/// Certificate that `d` is not the unknot, cheapest first. `v2` counts only
/// on diagrams of carrier genus 0, where it is a knot invariant.
pub fn nontriviality_certificate(d: &PseudoDiagram, bracket_limit: usize) -> Result<Option<Certificate>, DiagramError> {
    if let Some(c) = nonclassicality_certificate(d)? {
        return Ok(Some(c));
    }
    if d.carrier_genus() == 0 {
        let v = v2(d)?;
        if v != 0 {
            return Ok(Some(Certificate::V2(v)));
        }
    }
    if d.n() <= bracket_limit {
        let f = f_polynomial(d, bracket_limit)?;
        if !f.is_one() {
            return Ok(Some(Certificate::Bracket(f)));
        }
    }
    Ok(None)
}

/// Applies R1/R2 removals until none is left.
pub fn greedy_reduce(d: &PseudoDiagram) -> (PseudoDiagram, Vec<Move>) {
    let mut cur = d.clone();
    let mut trace = Vec::new();
    while let Some(m) = removals(&cur).into_iter().next() {
        cur = apply_move(&cur, &m).expect("detected removal is legal");
        trace.push(m);
    }
    (cur, trace)
}

enum Search {
    Found(Vec<Move>),
    Exhausted(usize),
}

struct Node {
    diagram: PseudoDiagram,
    parent: usize,
    via: Option<Move>,
}

/// Best-first search from `start` for a diagram satisfying `goal`. A first
/// pass uses no additions; a second allows additions up to `cap`.
fn search(start: &PseudoDiagram, cap: usize, max_states: usize, goal: &dyn Fn(&PseudoDiagram) -> bool) -> Search {
    if goal(start) {
        return Search::Found(Vec::new());
    }
    let mut states = 0;
    for pass_cap in [start.n(), cap.max(start.n())] {
        let mut nodes = vec![Node {
            diagram: start.clone(),
            parent: usize::MAX,
            via: None,
        }];
        let mut seen: HashSet<Vec<u8>> = HashSet::new();
        seen.insert(start.canonical_key());
        let mut heap = BinaryHeap::new();
        heap.push(Reverse((start.n(), 0usize)));
        while let Some(Reverse((_, idx))) = heap.pop() {
            let cur = nodes[idx].diagram.clone();
            for m in moves(&cur, pass_cap) {
                let next = apply_move(&cur, &m).expect("generated move is legal");
                if !seen.insert(next.canonical_key()) {
                    continue;
                }
                states += 1;
                let hit = goal(&next);
                nodes.push(Node {
                    diagram: next,
                    parent: idx,
                    via: Some(m),
                });
                let id = nodes.len() - 1;
                if hit {
                    let mut trace = Vec::new();
                    let mut at = id;
                    while let Some(m) = nodes[at].via {
                        trace.push(m);
                        at = nodes[at].parent;
                    }
                    trace.reverse();
                    return Search::Found(trace);
                }
                if states >= max_states {
                    return Search::Exhausted(states);
                }
                heap.push(Reverse((nodes[id].diagram.n(), id)));
            }
        }
        if pass_cap >= cap {
            break;
        }
    }
    Search::Exhausted(states)
}

/// Decides whether a fully classical diagram is the unknot, within budget.
///
/// Certificates are computed on the greedy reduction of `d`, so `v2` also
/// applies when only the reduced diagram is planar.
pub fn is_unknot(d: &PseudoDiagram, budget: &Budget) -> Result<Verdict, DiagramError> {
    require_classical(d)?;
    let (reduced, mut trace) = greedy_reduce(d);
    if reduced.is_empty() {
        return Ok(Verdict::Trivial { trace });
    }
    if let Some(certificate) = nontriviality_certificate(&reduced, budget.bracket_limit)? {
        return Ok(Verdict::Nontrivial { certificate });
    }
    match search(&reduced, budget.crossing_cap(d.n()), budget.max_states, &|x| {
        x.is_empty()
    }) {
        Search::Found(rest) => {
            trace.extend(rest);
            Ok(Verdict::Trivial { trace })
        }
        Search::Exhausted(states) => Ok(Verdict::Unknown { states }),
    }
}

/// Decides whether a fully classical diagram represents a classical knot.
pub fn classicality_verdict(d: &PseudoDiagram, budget: &Budget) -> Result<ClassicalityVerdict, DiagramError> {
    require_classical(d)?;
    if d.carrier_genus() == 0 {
        return Ok(ClassicalityVerdict::Classical { trace: Vec::new() });
    }
    if let Some(certificate) = nonclassicality_certificate(d)? {
        return Ok(ClassicalityVerdict::NonClassical { certificate });
    }
    let genus_zero = |x: &PseudoDiagram| x.carrier_genus() == 0;
    let (reduced, mut trace) = greedy_reduce(d);
    if genus_zero(&reduced) {
        // stop at the first genus-0 diagram along the greedy path
        let mut cur = d.clone();
        let mut cut = Vec::new();
        for m in trace {
            cur = apply_move(&cur, &m)?;
            cut.push(m);
            if genus_zero(&cur) {
                break;
            }
        }
        return Ok(ClassicalityVerdict::Classical { trace: cut });
    }
    match search(&reduced, budget.crossing_cap(d.n()), budget.max_states, &genus_zero) {
        Search::Found(rest) => {
            trace.extend(rest);
            Ok(ClassicalityVerdict::Classical { trace })
        }
        Search::Exhausted(states) => Ok(ClassicalityVerdict::Unknown { states }),
    }
}

/// Resolves every precrossing so that the strand met first after the
/// basepoint slot goes over. Classical chords are untouched.
pub fn descending_resolution(p: &PseudoDiagram, basepoint: usize) -> PseudoDiagram {
    let len = p.len();
    let mut out = p.clone();
    for c in p.precrossings() {
        let ends = p.chords()[c].ends;
        let dist = |s: usize| (s + len - basepoint % len.max(1)) % len;
        let first_over = dist(ends[0]) < dist(ends[1]);
        let flat = p.flat_sign(c);
        let w: Sign = if first_over { flat } else { -flat };
        out = out.with_writhe(c, w);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moves::replay;

    fn d(s: &str) -> PseudoDiagram {
        s.parse().unwrap()
    }

    #[test]
    fn trefoil_is_certified_by_v2() {
        let v = is_unknot(&d("O1+U2+O3+U1+O2+U3+"), &Budget::default()).unwrap();
        assert_eq!(
            v,
            Verdict::Nontrivial {
                certificate: Certificate::V2(1)
            }
        );
    }

    #[test]
    fn virtual_trefoil_is_nonclassical() {
        let vt = d("O1+O2+U1+U2+");
        let v = classicality_verdict(&vt, &Budget::default()).unwrap();
        assert_eq!(
            v,
            ClassicalityVerdict::NonClassical {
                certificate: Certificate::J(2)
            }
        );
        assert!(is_unknot(&vt, &Budget::default()).unwrap().is_nontrivial());
    }

    #[test]
    fn realizable_diagram_is_classical_at_once() {
        let v = classicality_verdict(&d("O1+U2+O3+U1+O2+U3+"), &Budget::default()).unwrap();
        assert_eq!(v, ClassicalityVerdict::Classical { trace: vec![] });
    }

    #[test]
    fn descending_trefoil_shadow_is_trivial() {
        let s = d("P1+P2-P3+P1+P2-P3+");
        let desc = descending_resolution(&s, 0);
        assert!(desc.is_classical());
        for c in 0..3 {
            assert_eq!(desc.is_over(desc.chords()[c].ends[0]), Some(true));
        }
        match is_unknot(&desc, &Budget::default()).unwrap() {
            Verdict::Trivial { trace } => assert!(replay(&desc, &trace).unwrap().is_empty()),
            other => panic!("{other}"),
        }
    }

    #[test]
    fn descending_of_resolved_is_identity() {
        let t = d("O1+U2+O3+U1+O2+U3+");
        assert_eq!(descending_resolution(&t, 0), t);
        // opposite flat signs: the descending pair cancels by R2
        let two = d("P1+P2-P1+P2-");
        let desc = descending_resolution(&two, 0);
        assert!(is_unknot(&desc, &Budget::default()).unwrap().is_trivial());
        // equal flat signs: the virtual trefoil, which is knotted
        let desc = descending_resolution(&d("P1+P2+P1+P2+"), 0);
        assert_eq!(desc, d("O1+O2+U1+U2+"));
        assert!(is_unknot(&desc, &Budget::default()).unwrap().is_nontrivial());
    }

    #[test]
    fn budget_exhaustion_is_unknown() {
        // a descending (hence trivial) diagram that greedy removal cannot finish
        let hard = d("O1+O2-O3-O4+O5+U1+O6-U3-O7+U5+O8-U6-U2-U7+U4+U8-");
        assert!(!greedy_reduce(&hard).0.is_empty());
        let tight = Budget {
            max_crossings: None,
            max_states: 1,
            bracket_limit: 0,
        };
        assert_eq!(is_unknot(&hard, &tight).unwrap(), Verdict::Unknown { states: 1 });
        match is_unknot(&hard, &Budget::default()).unwrap() {
            Verdict::Trivial { trace } => assert!(replay(&hard, &trace).unwrap().is_empty()),
            other => panic!("{other}"),
        }
    }

    #[test]
    fn precrossings_are_rejected() {
        assert!(is_unknot(&d("P1+P1+"), &Budget::default()).is_err());
    }
}
