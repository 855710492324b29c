//! Diagram-level upper bounds on unknotting number, virtual unknotting
//! number and genus, derived from the trivializing number of the shadow.
//! Every construction is re-verified; none of these are claimed for the
//! knot type, only for the given diagram.

use serde::{Deserialize, Serialize};

use crate::diagram::{PseudoDiagram, Resolution, Sign};
use crate::error::DiagramError;
use crate::invariants::{diagram_genus, loop_count, seifert_count, Smoothing, TwiceGenus};
use crate::moves::{apply_move, Move};
use crate::numbers::{subsets_of_size, NumberValue};
use crate::oracle::{is_unknot, Budget, Verdict};
use crate::parallel::{max_parallel_subset, peel_resolution};

pub const DEFAULT_UNKNOTTING_LIMIT: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    U,
    Vu,
    G,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Construction {
    /// Chords whose crossing is switched.
    CrossingChanges { chords: Vec<usize> },
    /// Chords made virtual (deleted from the Gauss diagram).
    Virtualization { chords: Vec<usize> },
    /// Each listed crossing is switched by an R2 addition followed by
    /// virtualizing two of the three crossings involved.
    DoubledChanges { chords: Vec<usize> },
    Seifert {
        crossings: usize,
        seifert_circles: usize,
        tr: usize,
        twice_genus: i64,
    },
}

/// Whether the witness of a bound was confirmed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    Verified,
    /// The oracle ran out of budget on the witness.
    Unverified,
    /// The inequality or identity failed.
    Failed,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    pub quantity: Quantity,
    /// Upper bound; for `G` this is twice the genus bound.
    pub upper: i64,
    pub construction: Construction,
    pub theorem: String,
    pub check: Check,
}

impl BoundReport {
    pub fn upper_display(&self) -> String {
        match self.quantity {
            Quantity::G => TwiceGenus(self.upper).to_string(),
            _ => self.upper.to_string(),
        }
    }
}

impl std::fmt::Display for BoundReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let q = match self.quantity {
            Quantity::U => "u",
            Quantity::Vu => "vu",
            Quantity::G => "g",
        };
        let chords = |v: &[usize]| v.iter().map(|c| (c + 1).to_string()).collect::<Vec<_>>().join(" ");
        let how = match &self.construction {
            Construction::CrossingChanges { chords: c } => format!("switch [{}]", chords(c)),
            Construction::Virtualization { chords: c } => format!("virtualize [{}]", chords(c)),
            Construction::DoubledChanges { chords: c } => format!("double-virtualize [{}]", chords(c)),
            Construction::Seifert {
                crossings,
                seifert_circles,
                tr,
                ..
            } => format!("c={crossings} s={seifert_circles} tr={tr}"),
        };
        write!(
            f,
            "{q} <= {} {how} {} {:?}",
            self.upper_display(),
            self.theorem,
            self.check
        )
    }
}

fn require_planar_classical(d: &PseudoDiagram) -> Result<(), DiagramError> {
    if !d.is_classical() {
        return Err(DiagramError::HasPrecrossings);
    }
    if d.carrier_genus() != 0 {
        return Err(DiagramError::NotClassicalShadow);
    }
    Ok(())
}

fn check_of(v: &Verdict) -> Result<Check, DiagramError> {
    match v {
        Verdict::Trivial { .. } => Ok(Check::Verified),
        Verdict::Unknown { .. } => Ok(Check::Unverified),
        Verdict::Nontrivial { .. } => Ok(Check::Failed),
    }
}

fn switched(d: &PseudoDiagram, chords: &[usize]) -> Result<PseudoDiagram, DiagramError> {
    chords.iter().try_fold(d.clone(), |acc, &c| acc.switch_crossing(c))
}

fn mask_of(chords: &[usize]) -> u64 {
    chords.iter().fold(0, |m, &c| m | 1 << c)
}

/// Trivializing set of the shadow with its trivializing writhes.
fn shadow_witness(d: &PseudoDiagram) -> Vec<(usize, Sign)> {
    let s = d.shadow();
    peel_resolution(&s, max_parallel_subset(&s))
}

/// The smaller of the two change sets that bring the trivializing set of
/// the shadow to its trivializing writhes or to their negatives.
pub fn unknotting_changes(d: &PseudoDiagram) -> Result<Vec<usize>, DiagramError> {
    require_planar_classical(d)?;
    let w = shadow_witness(d);
    let toward = |flip: bool| -> Vec<usize> {
        w.iter()
            .filter(|&&(c, s)| d.writhe(c) != Some(if flip { -s } else { s }))
            .map(|&(c, _)| c)
            .collect()
    };
    let (a, b) = (toward(false), toward(true));
    Ok(if b.len() < a.len() { b } else { a })
}

/// `u(D) <= tr/2`, with the change set checked by the oracle.
pub fn unknotting_upper(d: &PseudoDiagram, budget: &Budget) -> Result<BoundReport, DiagramError> {
    let changes = unknotting_changes(d)?;
    let check = check_of(&is_unknot(&switched(d, &changes)?, budget)?)?;
    Ok(BoundReport {
        quantity: Quantity::U,
        upper: changes.len() as i64,
        construction: Construction::CrossingChanges { chords: changes },
        theorem: "thm:u<=tr/2".into(),
        check,
    })
}

/// Brute force over crossing-change sets by size. Each set is tried by the
/// oracle; an unknown verdict below the first success makes the result a
/// bound.
pub fn unknotting_exact_small(d: &PseudoDiagram, budget: &Budget, limit: usize) -> Result<NumberValue, DiagramError> {
    if !d.is_classical() {
        return Err(DiagramError::HasPrecrossings);
    }
    let n = d.n();
    if n > limit {
        return Err(DiagramError::LimitExceeded {
            what: "crossings for exact unknotting",
            size: n,
            limit,
        });
    }
    let mut lower = None;
    for k in 0..=n {
        for mask in subsets_of_size(n, k) {
            let chords: Vec<usize> = (0..n).filter(|&c| mask >> c & 1 == 1).collect();
            match is_unknot(&switched(d, &chords)?, budget)? {
                Verdict::Trivial { .. } => {
                    let witness = chords
                        .iter()
                        .map(|&c| (c, Resolution::Classical(-d.writhe(c).unwrap())))
                        .collect();
                    return Ok(match lower {
                        None => NumberValue::Exact {
                            value: k,
                            witness,
                            notes: vec!["brute force over crossing changes".into()],
                        },
                        Some(l) => NumberValue::Bounds {
                            lower: l,
                            upper: Some(k),
                            notes: vec![format!("oracle unknown on some change set of size {l}")],
                        },
                    });
                }
                Verdict::Unknown { .. } => {
                    lower.get_or_insert(k);
                }
                Verdict::Nontrivial { .. } => {}
            }
        }
    }
    // switching every crossing mirrors the diagram, so this only happens
    // when even the mirror is not proven trivial
    Ok(NumberValue::Bounds {
        lower: lower.unwrap_or(n + 1),
        upper: None,
        notes: vec!["no change set proven trivial".into()],
    })
}

/// Switches crossing `c` by adding a cancelling pair next to it and then
/// virtualizing `c` together with one new crossing. Returns the enlarged
/// diagram and the two chords to virtualize. The pair is found by trying
/// every R2 addition at the ends of `c` and is checked by equality.
pub fn doubled_change(d: &PseudoDiagram, c: usize) -> Result<(PseudoDiagram, [usize; 2]), DiagramError> {
    let target = d.switch_crossing(c)?.canonical_key();
    let [a, b] = d.chord(c)?.ends;
    let len = d.len();
    let mut gaps = Vec::new();
    for g1 in [a, a + 1] {
        for g2 in [b, b + 1] {
            gaps.push([g1.min(g2) % (len + 1), g1.max(g2) % (len + 1)]);
        }
    }
    for g in gaps {
        for first_over in [true, false] {
            for swapped in [false, true] {
                for writhe in [Sign::Plus, Sign::Minus] {
                    let m = Move::R2Add {
                        gaps: g,
                        first_over,
                        swapped,
                        writhe,
                    };
                    let Ok(big) = apply_move(d, &m) else { continue };
                    let total = big.n();
                    for x in 0..total {
                        for y in x + 1..total {
                            if big.delete_chords(1 << x | 1 << y).canonical_key() == target {
                                return Ok((big, [x, y]));
                            }
                        }
                    }
                }
            }
        }
    }
    Err(DiagramError::IllegalMove(format!(
        "no doubled change found for chord {}",
        c + 1
    )))
}

/// `vu(D) <= min(tr, 2 u(D))`. Both constructions are built and the better
/// one is checked by the oracle.
pub fn virtual_unknotting_upper(d: &PseudoDiagram, budget: &Budget) -> Result<BoundReport, DiagramError> {
    require_planar_classical(d)?;
    let trivializing: Vec<usize> = shadow_witness(d).iter().map(|&(c, _)| c).collect();
    let changes = unknotting_changes(d)?;
    if trivializing.len() <= 2 * changes.len() {
        // the kept chords are pairwise parallel, so what is left is trivial
        let rest = d.delete_chords(mask_of(&trivializing));
        let check = check_of(&is_unknot(&rest, budget)?)?;
        Ok(BoundReport {
            quantity: Quantity::Vu,
            upper: trivializing.len() as i64,
            construction: Construction::Virtualization { chords: trivializing },
            theorem: "thm:vu<=tr".into(),
            check,
        })
    } else {
        let mut current = d.clone();
        let mut ok = true;
        for &c in &changes {
            let (big, del) = doubled_change(d, c)?;
            ok &= big.delete_chords(1 << del[0] | 1 << del[1]).canonical_key() == d.switch_crossing(c)?.canonical_key();
            current = current.switch_crossing(c)?;
        }
        let check = if ok {
            check_of(&is_unknot(&current, budget)?)?
        } else {
            Check::Failed
        };
        Ok(BoundReport {
            quantity: Quantity::Vu,
            upper: 2 * changes.len() as i64,
            construction: Construction::DoubledChanges { chords: changes },
            theorem: "thm:vu<=2u".into(),
            check,
        })
    }
}

/// Brute force over virtualization sets by size.
pub fn virtual_unknotting_exact_small(
    d: &PseudoDiagram,
    budget: &Budget,
    limit: usize,
) -> Result<NumberValue, DiagramError> {
    if !d.is_classical() {
        return Err(DiagramError::HasPrecrossings);
    }
    let n = d.n();
    if n > limit {
        return Err(DiagramError::LimitExceeded {
            what: "crossings for exact virtual unknotting",
            size: n,
            limit,
        });
    }
    let mut lower = None;
    for k in 0..=n {
        for mask in subsets_of_size(n, k) {
            match is_unknot(&d.delete_chords(mask), budget)? {
                Verdict::Trivial { .. } => {
                    let witness = (0..n)
                        .filter(|&c| mask >> c & 1 == 1)
                        .map(|c| (c, Resolution::Virtual))
                        .collect();
                    return Ok(match lower {
                        None => NumberValue::Exact {
                            value: k,
                            witness,
                            notes: vec!["brute force over virtualizations".into()],
                        },
                        Some(l) => NumberValue::Bounds {
                            lower: l,
                            upper: Some(k),
                            notes: vec![format!("oracle unknown on some virtualization of size {l}")],
                        },
                    });
                }
                Verdict::Unknown { .. } => {
                    lower.get_or_insert(k);
                }
                Verdict::Nontrivial { .. } => {}
            }
        }
    }
    unreachable!("virtualizing every crossing leaves the trivial diagram")
}

/// `g(D) <= tr/2` together with `s >= c - tr + 1`.
pub fn genus_bound_check(d: &PseudoDiagram) -> Result<BoundReport, DiagramError> {
    require_planar_classical(d)?;
    let s = seifert_count(d)?;
    let twice = diagram_genus(d)?.0;
    let shadow = d.shadow();
    let tr = shadow.n() - max_parallel_subset(&shadow).count_ones() as usize;
    let c = d.n();
    let holds = twice <= tr as i64 && s + tr > c;
    Ok(BoundReport {
        quantity: Quantity::G,
        upper: tr as i64,
        construction: Construction::Seifert {
            crossings: c,
            seifert_circles: s,
            tr,
            twice_genus: twice,
        },
        theorem: "thm:g<=tr/2".into(),
        check: if holds { Check::Verified } else { Check::Failed },
    })
}

/// Smoothing a largest parallel chord set gives a link with one more
/// component than chords smoothed, and the diagram has at least that many
/// Seifert circles. Returns `(components, seifert_circles)`.
pub fn seifert_lemma_check(d: &PseudoDiagram) -> Result<(usize, usize), DiagramError> {
    let keep = max_parallel_subset(d);
    let components = loop_count(d, |c| {
        if keep >> c & 1 == 1 {
            Smoothing::Oriented
        } else {
            Smoothing::Keep
        }
    });
    Ok((components, seifert_count(d)?))
}

/// All bound reports for a classical planar diagram.
pub fn bound_reports(d: &PseudoDiagram, budget: &Budget) -> Result<Vec<BoundReport>, DiagramError> {
    Ok(vec![
        unknotting_upper(d, budget)?,
        virtual_unknotting_upper(d, budget)?,
        genus_bound_check(d)?,
    ])
}
