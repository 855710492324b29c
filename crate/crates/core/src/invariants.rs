//! Diagram invariants used as certificates and as ingredients of bounds.
//!
//! Everything here is exact integer arithmetic on the chord model.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::diagram::{ChordState, PseudoDiagram};
use crate::error::DiagramError;
use crate::polynomial::{IntPolynomial, LaurentPolynomial};

/// Default chord limit for the bracket state sum.
pub const DEFAULT_BRACKET_LIMIT: usize = 20;

fn require_classical(d: &PseudoDiagram) -> Result<(), DiagramError> {
    if d.is_classical() {
        Ok(())
    } else {
        Err(DiagramError::HasPrecrossings)
    }
}

/// Head (underpass) and tail (overpass) slots of each classical chord.
fn heads_tails(d: &PseudoDiagram) -> Vec<(usize, usize, i64)> {
    d.chords()
        .iter()
        .map(|c| match c.state {
            ChordState::Classical { over, writhe } => {
                let head = if over == c.ends[0] { c.ends[1] } else { c.ends[0] };
                (head, over, writhe.value())
            }
            ChordState::Pre { .. } => unreachable!("checked classical"),
        })
        .collect()
}

/// Second-order Vassiliev invariant via its Gauss-diagram formula: the sum of
/// `w_x * w_y` over ordered pairs met as `x_head, y_tail, x_tail, y_head`
/// from the basepoint. Basepoint-independent on classical diagrams only.
pub fn v2(d: &PseudoDiagram) -> Result<i64, DiagramError> {
    require_classical(d)?;
    let ht = heads_tails(d);
    let mut total = 0;
    for &(xh, xt, wx) in &ht {
        if xh > xt {
            continue;
        }
        for &(yh, yt, wy) in &ht {
            if xh < yt && yt < xt && xt < yh {
                total += wx * wy;
            }
        }
    }
    Ok(total)
}

/// Chords crossing an odd number of chords. States are ignored.
pub fn odd_set(d: &PseudoDiagram) -> Vec<usize> {
    let g = d.interlacement_graph();
    (0..d.n()).filter(|&c| g.degree(c) % 2 == 1).collect()
}

/// Kauffman's odd writhe: sum of writhes over the odd chords.
pub fn j_invariant(d: &PseudoDiagram) -> Result<i64, DiagramError> {
    require_classical(d)?;
    Ok(odd_set(d).into_iter().map(|c| d.writhe(c).unwrap().value()).sum())
}

/// Intersection index of chord `c`: the shadow linking number of the two
/// components produced by the oriented smoothing at `c`, signed from the
/// component that contains the basepoint. Only `|ind|` is orientation-free.
pub fn ind(d: &PseudoDiagram, c: usize) -> Result<i64, DiagramError> {
    d.chord(c)?;
    Ok(ind_unchecked(d, c))
}

pub(crate) fn ind_unchecked(d: &PseudoDiagram, c: usize) -> i64 {
    let first = d.chords()[c].ends[0];
    (0..d.n())
        .filter(|&e| e != c && d.cross(c, e))
        .map(|e| {
            let chord = &d.chords()[e];
            let s = chord.flat_sign().value();
            if chord.ends[0] < first {
                s
            } else {
                -s
            }
        })
        .sum()
}

/// Chords grouped by intersection index.
pub fn c_m_partition(d: &PseudoDiagram) -> BTreeMap<i64, Vec<usize>> {
    let mut parts: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    for c in 0..d.n() {
        parts.entry(ind_unchecked(d, c)).or_default().push(c);
    }
    parts
}

/// Chords grouped by `|ind|`; the basepoint-free version of [`c_m_partition`].
pub fn abs_index_partition(d: &PseudoDiagram) -> BTreeMap<i64, Vec<usize>> {
    let mut parts: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    for c in 0..d.n() {
        parts.entry(ind_unchecked(d, c).abs()).or_default().push(c);
    }
    parts
}

/// `p_t = sum_c w_c (t^|ind(c)| - 1)`.
pub fn intersection_index_polynomial(d: &PseudoDiagram) -> Result<IntPolynomial, DiagramError> {
    require_classical(d)?;
    let mut p = IntPolynomial::zero();
    for c in 0..d.n() {
        let w = d.writhe(c).unwrap().value();
        p.add_term(w, ind_unchecked(d, c).abs());
        p.add_term(-w, 0);
    }
    Ok(p)
}

/// How a chord is treated when counting loops.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Smoothing {
    /// Crossing kept: the strand passes straight through.
    Keep,
    /// Orientation-respecting smoothing.
    Oriented,
    /// The other smoothing; joins incoming to incoming.
    Unoriented,
}

/// Number of closed curves after applying `rule` at every chord. Works on
/// the flat chord data only.
pub fn loop_count(d: &PseudoDiagram, rule: impl Fn(usize) -> Smoothing) -> usize {
    let len = d.len();
    if len == 0 {
        return 1;
    }
    let rules: Vec<Smoothing> = (0..d.n()).map(rule).collect();
    count_loops(d, &rules)
}

fn count_loops(d: &PseudoDiagram, rules: &[Smoothing]) -> usize {
    let len = d.len();
    // node 2k = arriving at slot k, 2k + 1 = leaving slot k
    let jump = |node: usize| -> usize {
        let p = node / 2;
        let leaving = node % 2 == 1;
        let q = d.partner(p);
        match rules[d.slot_chord(p)] {
            Smoothing::Keep => node ^ 1,
            Smoothing::Oriented => 2 * q + usize::from(!leaving),
            Smoothing::Unoriented => 2 * q + usize::from(leaving),
        }
    };
    let along = |node: usize| -> usize {
        let p = node / 2;
        if node % 2 == 1 {
            2 * ((p + 1) % len)
        } else {
            2 * ((p + len - 1) % len) + 1
        }
    };
    let mut seen = vec![false; 2 * len];
    let mut loops = 0;
    for start in 0..2 * len {
        if seen[start] {
            continue;
        }
        loops += 1;
        let mut node = start;
        loop {
            seen[node] = true;
            let other = jump(node);
            seen[other] = true;
            node = along(other);
            if seen[node] {
                break;
            }
        }
    }
    loops
}

/// Number of Seifert circles.
pub fn seifert_count(d: &PseudoDiagram) -> Result<usize, DiagramError> {
    require_classical(d)?;
    Ok(loop_count(d, |_| Smoothing::Oriented))
}

/// Twice the canonical diagram genus, `n - s + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct TwiceGenus(pub i64);

impl fmt::Display for TwiceGenus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 % 2 == 0 {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

/// Diagram genus `g(D) = (n - s + 1) / 2`, returned doubled.
pub fn diagram_genus(d: &PseudoDiagram) -> Result<TwiceGenus, DiagramError> {
    let s = seifert_count(d)? as i64;
    Ok(TwiceGenus(d.n() as i64 - s + 1))
}

/// Writhe-normalized Kauffman bracket, `(-A^3)^(-w) <D>`, by the full state
/// sum. Positive crossings take weight `A` on their oriented smoothing.
pub fn f_polynomial(d: &PseudoDiagram, limit: usize) -> Result<LaurentPolynomial, DiagramError> {
    require_classical(d)?;
    let n = d.n();
    if n > limit {
        return Err(DiagramError::LimitExceeded {
            what: "bracket state sum",
            size: n,
            limit,
        });
    }
    let writhes: Vec<i64> = (0..n).map(|c| d.writhe(c).unwrap().value()).collect();
    // counts[(exponent, loops)]
    let mut counts: BTreeMap<(i64, usize), i64> = BTreeMap::new();
    let mut rules = vec![Smoothing::Oriented; n];
    for state in 0u64..(1u64 << n) {
        let mut exp = 0;
        for c in 0..n {
            if state >> c & 1 == 1 {
                rules[c] = Smoothing::Unoriented;
                exp -= writhes[c];
            } else {
                rules[c] = Smoothing::Oriented;
                exp += writhes[c];
            }
        }
        let loops = if n == 0 { 1 } else { count_loops(d, &rules) };
        *counts.entry((exp, loops)).or_insert(0) += 1;
    }
    let delta = LaurentPolynomial::from_terms([(-1, 2), (-1, -2)]);
    let mut bracket = LaurentPolynomial::zero();
    for ((exp, loops), mult) in counts {
        let term = delta.pow(loops as u32 - 1).shift(exp);
        bracket = &bracket + &(&term * &LaurentPolynomial::monomial(mult, 0));
    }
    let w = d.writhe_sum();
    let sign = if w % 2 == 0 { 1 } else { -1 };
    Ok(&bracket * &LaurentPolynomial::monomial(sign, -3 * w))
}
