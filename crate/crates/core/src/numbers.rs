//! Trivializing, knotting, classicalizing and virtualizing numbers.
//!
//! Exact values come from brute force over resolutions: every full
//! resolution gets an oracle verdict, and a dynamic program over partial
//! resolutions (each precrossing free, `+` or `-`) records whether all
//! completions are proven to have a property and whether some completion is
//! proven to have its opposite. A number is exact only when both sides are
//! proven; otherwise it is reported as bounds with notes on where they came
//! from. Theorem-based bounds are merged in afterwards.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::diagram::{PseudoDiagram, Resolution, Sign};
use crate::error::DiagramError;
use crate::invariants::{abs_index_partition, c_m_partition, odd_set};
use crate::oracle::{classicality_verdict, is_unknot, Budget, Certificate, ClassicalityVerdict, Verdict};
use crate::parallel::{deletion_number, max_parallel_subset, peel_resolution};

pub const DEFAULT_EXACT_LIMIT: usize = 14;
/// Precrossing limit for the brute force with virtual resolutions (`3^p` leaves).
pub const DEFAULT_UBER_LIMIT: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NumbersConfig {
    pub budget: Budget,
    pub exact_limit: usize,
    pub uber_limit: usize,
}

impl Default for NumbersConfig {
    fn default() -> Self {
        NumbersConfig {
            budget: Budget::default(),
            exact_limit: DEFAULT_EXACT_LIMIT,
            uber_limit: DEFAULT_UBER_LIMIT,
        }
    }
}

/// Value of one characteristic number.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NumberValue {
    /// Proven value with a resolution attaining it.
    Exact {
        value: usize,
        witness: Vec<(usize, Resolution)>,
        notes: Vec<String>,
    },
    /// Proven lower bound; upper bound when one is attained (`None` for unbounded).
    Bounds {
        lower: usize,
        upper: Option<usize>,
        notes: Vec<String>,
    },
    /// No resolution has the property, proven.
    Infinite { notes: Vec<String> },
}

impl NumberValue {
    pub fn exact(&self) -> Option<usize> {
        match self {
            NumberValue::Exact { value, .. } => Some(*value),
            _ => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, NumberValue::Infinite { .. })
    }

    /// Proven lower bound (`usize::MAX` when infinite).
    pub fn lower(&self) -> usize {
        match self {
            NumberValue::Exact { value, .. } => *value,
            NumberValue::Bounds { lower, .. } => *lower,
            NumberValue::Infinite { .. } => usize::MAX,
        }
    }

    /// Attained upper bound, `None` when unbounded or infinite.
    pub fn upper(&self) -> Option<usize> {
        match self {
            NumberValue::Exact { value, .. } => Some(*value),
            NumberValue::Bounds { upper, .. } => *upper,
            NumberValue::Infinite { .. } => None,
        }
    }

    pub fn notes(&self) -> &[String] {
        match self {
            NumberValue::Exact { notes, .. } | NumberValue::Bounds { notes, .. } | NumberValue::Infinite { notes } => {
                notes
            }
        }
    }

    fn notes_mut(&mut self) -> &mut Vec<String> {
        match self {
            NumberValue::Exact { notes, .. } | NumberValue::Bounds { notes, .. } | NumberValue::Infinite { notes } => {
                notes
            }
        }
    }

    pub fn witness(&self) -> Option<&[(usize, Resolution)]> {
        match self {
            NumberValue::Exact { witness, .. } => Some(witness),
            _ => None,
        }
    }

    /// Merges a proven lower bound. Conflicts with an exact value are kept
    /// as notes so that consistency checks can report them.
    pub fn raise_lower(&mut self, bound: usize, note: &str) {
        match self {
            NumberValue::Exact { value, notes, .. } => {
                if bound > *value {
                    notes.push(format!("CONFLICT {note}: lower {bound} > exact {value}"));
                }
            }
            NumberValue::Bounds { lower, upper, notes } => {
                if bound > *lower {
                    *lower = bound;
                    notes.push(format!("{note}: lower {bound}"));
                }
                if let Some(u) = *upper {
                    if bound > u {
                        notes.push(format!("CONFLICT {note}: lower {bound} > upper {u}"));
                    } else if bound == u {
                        // bounds meet; the upper bound carries no witness here
                        notes.push("bounds meet".to_string());
                    }
                }
            }
            NumberValue::Infinite { .. } => {}
        }
    }

    /// Merges an attained upper bound.
    pub fn lower_upper(&mut self, bound: usize, note: &str) {
        match self {
            NumberValue::Exact { value, notes, .. } => {
                if bound < *value {
                    notes.push(format!("CONFLICT {note}: upper {bound} < exact {value}"));
                }
            }
            NumberValue::Bounds { lower, upper, notes } => {
                if upper.is_none_or(|u| bound < u) {
                    *upper = Some(bound);
                    notes.push(format!("{note}: upper {bound}"));
                }
                if bound < *lower {
                    notes.push(format!("CONFLICT {note}: upper {bound} < lower {lower}"));
                }
            }
            NumberValue::Infinite { notes } => notes.push(format!("CONFLICT {note}: upper {bound} but infinite")),
        }
    }

    /// Replaces bounds by an exact value when a witnessed upper bound meets
    /// the proven lower bound.
    fn settle(&mut self, witness: Option<Vec<(usize, Resolution)>>) {
        if let (
            NumberValue::Bounds {
                lower,
                upper: Some(u),
                notes,
            },
            Some(w),
        ) = (&*self, witness)
        {
            if lower == u {
                *self = NumberValue::Exact {
                    value: *u,
                    witness: w,
                    notes: notes.clone(),
                };
            }
        }
    }

    pub fn has_conflict(&self) -> bool {
        self.notes().iter().any(|n| n.starts_with("CONFLICT"))
    }
}

fn fmt_witness(w: &[(usize, Resolution)]) -> String {
    let parts: Vec<String> = w
        .iter()
        .map(|(c, r)| match r {
            Resolution::Classical(s) => format!("{}{}", c + 1, s.symbol()),
            Resolution::Virtual => format!("{}v", c + 1),
        })
        .collect();
    format!("[{}]", parts.join(" "))
}

impl fmt::Display for NumberValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NumberValue::Exact { value, witness, .. } => write!(f, "Exact {} {}", value, fmt_witness(witness)),
            NumberValue::Bounds { lower, upper, .. } => match upper {
                Some(u) => write!(f, "Bounds {lower}..{u}"),
                None => write!(f, "Bounds {lower}..inf"),
            },
            NumberValue::Infinite { .. } => write!(f, "Infinite"),
        }
    }
}

/// Triviality of one full resolution.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Knottedness {
    Trivial,
    Nontrivial,
    Unknown,
}

/// Classicality of one full resolution.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Classicality {
    Classical,
    NonClassical,
    Unknown,
}

/// Precrossing `i` of `pre` gets writhe `-` when bit `i` of `mask` is set.
fn sign_bit(mask: u64, i: usize) -> Sign {
    if mask >> i & 1 == 1 {
        Sign::Minus
    } else {
        Sign::Plus
    }
}

pub fn full_resolution(p: &PseudoDiagram, pre: &[usize], mask: u64) -> PseudoDiagram {
    let mut d = p.clone();
    for (i, &c) in pre.iter().enumerate() {
        d = d.with_writhe(c, sign_bit(mask, i));
    }
    d
}

/// Oracle verdicts for every full resolution of a pseudodiagram.
pub struct ResolutionTable {
    pub pre: Vec<usize>,
    pub knottedness: Vec<Knottedness>,
    pub classicality: Vec<Classicality>,
}

fn classify(d: &PseudoDiagram, budget: &Budget) -> Result<(Knottedness, Classicality), DiagramError> {
    let v = is_unknot(d, budget)?;
    let k = match &v {
        Verdict::Trivial { .. } => Knottedness::Trivial,
        Verdict::Nontrivial { .. } => Knottedness::Nontrivial,
        Verdict::Unknown { .. } => Knottedness::Unknown,
    };
    let c = match &v {
        Verdict::Trivial { .. } => Classicality::Classical,
        Verdict::Nontrivial {
            certificate: Certificate::J(_) | Certificate::IndexPolynomial(_),
        } => Classicality::NonClassical,
        _ if d.carrier_genus() == 0 => Classicality::Classical,
        _ => match classicality_verdict(d, budget)? {
            ClassicalityVerdict::Classical { .. } => Classicality::Classical,
            ClassicalityVerdict::NonClassical { .. } => Classicality::NonClassical,
            ClassicalityVerdict::Unknown { .. } => Classicality::Unknown,
        },
    };
    Ok((k, c))
}

impl ResolutionTable {
    pub fn build(p: &PseudoDiagram, budget: &Budget) -> Result<ResolutionTable, DiagramError> {
        let pre = p.precrossings();
        let count = 1u64 << pre.len();
        let rows: Vec<(Knottedness, Classicality)> = (0..count)
            .into_par_iter()
            .map(|mask| classify(&full_resolution(p, &pre, mask), budget))
            .collect::<Result<_, _>>()?;
        let (knottedness, classicality) = rows.into_iter().unzip();
        Ok(ResolutionTable {
            pre,
            knottedness,
            classicality,
        })
    }
}

const ALL_T: u8 = 1;
const SOME_T: u8 = 2;
const ALL_N: u8 = 4;
const SOME_N: u8 = 8;
const ALL_C: u8 = 16;
const SOME_C: u8 = 32;
const ALL_NC: u8 = 64;
const SOME_NC: u8 = 128;
const ALL_BITS: u8 = ALL_T | ALL_N | ALL_C | ALL_NC;

/// Which property a number asks to force, and the opposite property whose
/// presence in some completion refutes a candidate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Target {
    Trivial,
    Knotted,
    Classical,
    NonClassical,
}

impl Target {
    fn bits(self) -> (u8, u8) {
        match self {
            Target::Trivial => (ALL_T, SOME_N),
            Target::Knotted => (ALL_N, SOME_T),
            Target::Classical => (ALL_C, SOME_NC),
            Target::NonClassical => (ALL_NC, SOME_C),
        }
    }
}

/// Three-valued answer about a set of precrossings.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Proof {
    Yes,
    No,
    Unknown,
}

/// Flags for every partial resolution, indexed in base 3 (digit `i` is 0
/// for free, 1 for `+`, 2 for `-` on precrossing `i`).
pub struct PartialTable {
    pub pre: Vec<usize>,
    flags: Vec<u8>,
}

fn pow3(k: usize) -> usize {
    3usize.pow(k as u32)
}

impl PartialTable {
    pub fn build(table: &ResolutionTable) -> PartialTable {
        let p = table.pre.len();
        let total = pow3(p);
        let mut flags = vec![0u8; total];
        for s in (0..total).rev() {
            let mut rest = s;
            let mut free = None;
            let mut mask = 0u64;
            for i in 0..p {
                let digit = rest % 3;
                rest /= 3;
                match digit {
                    0 => {
                        free = Some(i);
                        break;
                    }
                    2 => mask |= 1 << i,
                    _ => {}
                }
            }
            flags[s] = match free {
                Some(i) => {
                    let a = flags[s + pow3(i)];
                    let b = flags[s + 2 * pow3(i)];
                    (a & b & ALL_BITS) | ((a | b) & !ALL_BITS)
                }
                None => {
                    let k = match table.knottedness[mask as usize] {
                        Knottedness::Trivial => ALL_T | SOME_T,
                        Knottedness::Nontrivial => ALL_N | SOME_N,
                        Knottedness::Unknown => 0,
                    };
                    let c = match table.classicality[mask as usize] {
                        Classicality::Classical => ALL_C | SOME_C,
                        Classicality::NonClassical => ALL_NC | SOME_NC,
                        Classicality::Unknown => 0,
                    };
                    k | c
                }
            };
        }
        PartialTable {
            pre: table.pre.clone(),
            flags,
        }
    }

    /// State for resolving the precrossing indices in `subset` (bitmask over
    /// `pre` positions) with signs from `signs` (bit set means `-`).
    fn state(&self, subset: u64, signs: u64) -> usize {
        let mut s = 0;
        for i in 0..self.pre.len() {
            if subset >> i & 1 == 1 {
                s += pow3(i) * if signs >> i & 1 == 1 { 2 } else { 1 };
            }
        }
        s
    }

    /// Whether resolving `subset` with `signs` forces `target` (Yes), is
    /// refuted by some completion (No), or neither is proven.
    pub fn forces(&self, subset: u64, signs: u64, target: Target) -> Proof {
        let (all, refute) = target.bits();
        let f = self.flags[self.state(subset, signs)];
        if f & all != 0 {
            Proof::Yes
        } else if f & refute != 0 {
            Proof::No
        } else {
            Proof::Unknown
        }
    }

    /// Whether some resolution of `subset` forces `target`.
    pub fn set_forces(&self, subset: u64, target: Target) -> Proof {
        let mut all_no = true;
        let mut signs = 0u64;
        loop {
            match self.forces(subset, signs, target) {
                Proof::Yes => return Proof::Yes,
                Proof::Unknown => all_no = false,
                Proof::No => {}
            }
            // next sign pattern supported on `subset`
            signs = (signs.wrapping_sub(subset)) & subset;
            if signs == 0 {
                break;
            }
        }
        if all_no {
            Proof::No
        } else {
            Proof::Unknown
        }
    }

    /// Witness as chord ids with writhes.
    fn witness(&self, subset: u64, signs: u64) -> Vec<(usize, Resolution)> {
        (0..self.pre.len())
            .filter(|&i| subset >> i & 1 == 1)
            .map(|i| (self.pre[i], Resolution::Classical(sign_bit(signs, i))))
            .collect()
    }

    /// The least number of precrossings whose resolution forces `target`.
    /// Subsets are tried by size, then lexicographically, and signs in
    /// binary order with `+` first.
    pub fn number(&self, target: Target) -> NumberValue {
        let p = self.pre.len();
        let mut lower = None;
        for k in 0..=p {
            let mut all_refuted = true;
            for subset in subsets_of_size(p, k) {
                let mut signs = 0u64;
                loop {
                    match self.forces(subset, signs, target) {
                        Proof::Yes => {
                            let witness = self.witness(subset, signs);
                            let lower = lower.unwrap_or(k);
                            return if lower == k {
                                NumberValue::Exact {
                                    value: k,
                                    witness,
                                    notes: vec!["brute force over resolutions".into()],
                                }
                            } else {
                                NumberValue::Bounds {
                                    lower,
                                    upper: Some(k),
                                    notes: vec![format!("oracle unknown on some resolution of size {lower}")],
                                }
                            };
                        }
                        Proof::Unknown => all_refuted = false,
                        Proof::No => {}
                    }
                    signs = (signs.wrapping_sub(subset)) & subset;
                    if signs == 0 {
                        break;
                    }
                }
            }
            if !all_refuted && lower.is_none() {
                lower = Some(k);
            }
        }
        match lower {
            None => NumberValue::Infinite {
                notes: vec!["every full resolution is proven to lack the property".into()],
            },
            Some(l) => NumberValue::Bounds {
                lower: l,
                upper: None,
                notes: vec![format!("oracle unknown on some resolution of size {l}")],
            },
        }
    }
}

/// Bitmasks over `0..p` with `k` bits, in lexicographic order of their
/// sorted element lists.
pub fn subsets_of_size(p: usize, k: usize) -> impl Iterator<Item = u64> {
    let mut idx: Vec<usize> = (0..k).collect();
    let mut done = k > p;
    std::iter::from_fn(move || {
        if done {
            return None;
        }
        let mask = idx.iter().fold(0u64, |m, &i| m | 1 << i);
        // advance
        let mut i = k;
        loop {
            if i == 0 {
                done = true;
                break;
            }
            i -= 1;
            if idx[i] < p - k + i {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
        Some(mask)
    })
}

fn require_shadow(s: &PseudoDiagram) -> Result<(), DiagramError> {
    if s.is_shadow() {
        Ok(())
    } else {
        Err(DiagramError::NotAShadow)
    }
}

/// `tr` of a classical shadow: the chord count minus the largest parallel
/// subset. The witness is the peel resolution of the complement, checked by
/// running the oracle on every completion.
pub fn trivializing_number_shadow(s: &PseudoDiagram, budget: &Budget) -> Result<NumberValue, DiagramError> {
    require_shadow(s)?;
    if s.carrier_genus() != 0 {
        return Err(DiagramError::NotClassicalShadow);
    }
    let keep = max_parallel_subset(s);
    let resolution = peel_resolution(s, keep);
    let mut resolved = s.clone();
    for &(c, w) in &resolution {
        resolved = resolved.with_writhe(c, w);
    }
    let rest = resolved.precrossings();
    let mut unverified = 0;
    for mask in 0..1u64 << rest.len() {
        let d = full_resolution(&resolved, &rest, mask);
        match is_unknot(&d, budget)? {
            Verdict::Trivial { .. } => {}
            Verdict::Nontrivial { certificate } => {
                return Err(DiagramError::IllegalMove(format!(
                    "peel witness refuted on {d}: {certificate}"
                )))
            }
            Verdict::Unknown { .. } => unverified += 1,
        }
    }
    let mut notes = vec!["lemma: tr equals chords minus largest parallel subset".to_string()];
    if unverified == 0 {
        notes.push("witness verified on every completion".into());
    } else {
        notes.push(format!("witness unverified on {unverified} completions"));
    }
    Ok(NumberValue::Exact {
        value: s.n() - keep.count_ones() as usize,
        witness: resolution
            .into_iter()
            .map(|(c, w)| (c, Resolution::Classical(w)))
            .collect(),
        notes,
    })
}

/// Theorem-based bounds on `cl` and `vir` only (no oracle calls).
pub fn cl_vir_bounds(p: &PseudoDiagram) -> (NumberValue, NumberValue) {
    let mut cl = NumberValue::Bounds {
        lower: 0,
        upper: None,
        notes: vec![],
    };
    let mut vir = cl.clone();
    let is_pre = |c: &usize| p.chords()[*c].is_pre();
    if p.is_shadow() {
        let nonzero: usize = c_m_partition(p)
            .iter()
            .filter(|(m, _)| **m != 0)
            .map(|(_, v)| v.len())
            .sum();
        cl.raise_lower(nonzero, "thm:cl>=sum|C_m|");
        let best = abs_index_partition(p)
            .iter()
            .filter(|(m, _)| **m != 0)
            .map(|(_, v)| v.len() / 2 + 1)
            .min();
        if let Some(b) = best {
            vir.lower_upper(b, "thm:vir<=|C_m|/2+1");
        }
        let odd = odd_set(p).len();
        if odd > 0 {
            vir.lower_upper(odd / 2 + 1, "thm:vir<=|Odd|/2+1");
        }
    }
    let odd_pre = odd_set(p).iter().filter(|c| is_pre(c)).count();
    cl.raise_lower(odd_pre, "thm:cl>=|Odd∩pre|");
    (cl, vir)
}

/// Characteristic numbers of a pseudodiagram.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharacteristicReport {
    pub tr: NumberValue,
    pub kn: NumberValue,
    pub cl: NumberValue,
    pub vir: NumberValue,
    pub virtr: NumberValue,
    pub ubtr: NumberValue,
}

impl CharacteristicReport {
    pub fn entries(&self) -> [(&'static str, &NumberValue); 6] {
        [
            ("tr", &self.tr),
            ("kn", &self.kn),
            ("cl", &self.cl),
            ("vir", &self.vir),
            ("virtr", &self.virtr),
            ("ubtr", &self.ubtr),
        ]
    }

    /// Violations of the orderings that hold for every pseudodiagram.
    pub fn consistency_errors(&self) -> Vec<String> {
        let mut errs = Vec::new();
        for (name, v) in self.entries() {
            if v.has_conflict() {
                errs.push(format!("{name}: conflicting bounds"));
            }
            if let (l, Some(u)) = (v.lower(), v.upper()) {
                if l > u {
                    errs.push(format!("{name}: lower {l} > upper {u}"));
                }
            }
        }
        if let (Some(cl), Some(tr)) = (self.cl.exact(), self.tr.exact()) {
            if cl > tr {
                errs.push(format!("cl {cl} > tr {tr}"));
            }
        }
        if let (Some(kn), Some(vir)) = (self.kn.exact(), self.vir.exact()) {
            if kn > vir {
                errs.push(format!("kn {kn} > vir {vir}"));
            }
        }
        errs
    }
}

impl fmt::Display for CharacteristicReport {
    /// One `key: value` line per number.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (name, v) in self.entries() {
            writeln!(f, "{name}: {v}")?;
        }
        Ok(())
    }
}

fn out_of_reach(p: usize, limit: usize) -> NumberValue {
    NumberValue::Bounds {
        lower: 0,
        upper: None,
        notes: vec![format!("{p} precrossings exceed the exact limit {limit}")],
    }
}

/// Brute-force tables for a pseudodiagram within the exact limit.
pub struct Tables {
    pub full: ResolutionTable,
    pub partial: PartialTable,
}

/// Numbers forced by classical resolutions, from brute force when the
/// precrossing count is within the exact limit.
fn classical_numbers(
    p: &PseudoDiagram,
    cfg: &NumbersConfig,
) -> Result<([NumberValue; 4], Option<Tables>), DiagramError> {
    let n_pre = p.precrossings().len();
    if n_pre > cfg.exact_limit {
        let v = out_of_reach(n_pre, cfg.exact_limit);
        return Ok(([v.clone(), v.clone(), v.clone(), v], None));
    }
    let full = ResolutionTable::build(p, &cfg.budget)?;
    let partial = PartialTable::build(&full);
    let numbers = [
        partial.number(Target::Trivial),
        partial.number(Target::Knotted),
        partial.number(Target::Classical),
        partial.number(Target::NonClassical),
    ];
    Ok((numbers, Some(Tables { full, partial })))
}

/// `tr` by brute force, with theorem bounds for classical shadows.
pub fn trivializing_number_general(p: &PseudoDiagram, cfg: &NumbersConfig) -> Result<NumberValue, DiagramError> {
    Ok(characteristic_report(p, cfg)?.tr)
}

/// `kn` by brute force, with the lower bound 3 on classical shadows.
pub fn knotting_number(p: &PseudoDiagram, cfg: &NumbersConfig) -> Result<NumberValue, DiagramError> {
    Ok(characteristic_report(p, cfg)?.kn)
}

/// `cl` and `vir` by brute force over classicality verdicts, merged with
/// the theorem bounds.
pub fn cl_vir_exact_small(p: &PseudoDiagram, cfg: &NumbersConfig) -> Result<(NumberValue, NumberValue), DiagramError> {
    let r = characteristic_report(p, cfg)?;
    Ok((r.cl, r.vir))
}

/// Leaves of the über brute force: every precrossing `+`, `-` or virtual.
fn uber_numbers(p: &PseudoDiagram, cfg: &NumbersConfig) -> Result<(NumberValue, NumberValue), DiagramError> {
    let pre = p.precrossings();
    let k = pre.len();
    let leaves = pow3(k);
    // leaf digit: 0 = +, 1 = -, 2 = virtual
    let verdicts: Vec<Knottedness> = (0..leaves)
        .into_par_iter()
        .map(|code| {
            let mut d = p.clone();
            let mut rest = code;
            let mut deleted = 0u64;
            for &c in &pre {
                match rest % 3 {
                    0 => d = d.with_writhe(c, Sign::Plus),
                    1 => d = d.with_writhe(c, Sign::Minus),
                    _ => deleted |= 1 << c,
                }
                rest /= 3;
            }
            let d = d.delete_chords(deleted);
            Ok(match is_unknot(&d, &cfg.budget)? {
                Verdict::Trivial { .. } => Knottedness::Trivial,
                Verdict::Nontrivial { .. } => Knottedness::Nontrivial,
                Verdict::Unknown { .. } => Knottedness::Unknown,
            })
        })
        .collect::<Result<_, DiagramError>>()?;
    // partial states in base 4: 0 free, 1 +, 2 -, 3 virtual
    let total = 4usize.pow(k as u32);
    let mut flags = vec![0u8; total];
    for s in (0..total).rev() {
        let mut rest = s;
        let mut free = None;
        let mut leaf = 0;
        let mut place = 1;
        for i in 0..k {
            let digit = rest % 4;
            rest /= 4;
            if digit == 0 {
                free = Some(i);
                break;
            }
            leaf += (digit - 1) * place;
            place *= 3;
        }
        flags[s] = match free {
            Some(i) => {
                let step = 4usize.pow(i as u32);
                // completions resolve classically only
                let a = flags[s + step];
                let b = flags[s + 2 * step];
                (a & b & ALL_BITS) | ((a | b) & !ALL_BITS)
            }
            None => match verdicts[leaf] {
                Knottedness::Trivial => ALL_T | SOME_T,
                Knottedness::Nontrivial => ALL_N | SOME_N,
                Knottedness::Unknown => 0,
            },
        };
    }
    let search = |virtual_only: bool| -> NumberValue {
        let mut lower = None;
        for size in 0..=k {
            let mut all_refuted = true;
            for subset in subsets_of_size(k, size) {
                let members: Vec<usize> = (0..k).filter(|&i| subset >> i & 1 == 1).collect();
                let choices: usize = if virtual_only { 1 } else { 3usize.pow(size as u32) };
                for choice in 0..choices {
                    let mut s = 0;
                    let mut rest = choice;
                    let mut witness = Vec::new();
                    for &i in &members {
                        let digit = if virtual_only { 3 } else { rest % 3 + 1 };
                        rest /= 3;
                        s += digit * 4usize.pow(i as u32);
                        witness.push((
                            pre[i],
                            match digit {
                                1 => Resolution::Classical(Sign::Plus),
                                2 => Resolution::Classical(Sign::Minus),
                                _ => Resolution::Virtual,
                            },
                        ));
                    }
                    let f = flags[s];
                    if f & ALL_T != 0 {
                        let l = lower.unwrap_or(size);
                        return if l == size {
                            NumberValue::Exact {
                                value: size,
                                witness,
                                notes: vec!["brute force over classical and virtual resolutions".into()],
                            }
                        } else {
                            NumberValue::Bounds {
                                lower: l,
                                upper: Some(size),
                                notes: vec![format!("oracle unknown on some resolution of size {l}")],
                            }
                        };
                    }
                    if f & SOME_N == 0 {
                        all_refuted = false;
                    }
                }
            }
            if !all_refuted && lower.is_none() {
                lower = Some(size);
            }
        }
        match lower {
            None => NumberValue::Infinite {
                notes: vec!["every resolution is proven knotted".into()],
            },
            Some(l) => NumberValue::Bounds {
                lower: l,
                upper: None,
                notes: vec![format!("oracle unknown on some resolution of size {l}")],
            },
        }
    };
    Ok((search(true), search(false)))
}

/// Deleting everything outside a largest parallel subset leaves a diagram
/// whose every completion is trivial (parallel chords peel off by R1).
fn deletion_witness(s: &PseudoDiagram) -> Vec<(usize, Resolution)> {
    let keep = max_parallel_subset(s);
    (0..s.n())
        .filter(|&c| keep >> c & 1 == 0 && s.chords()[c].is_pre())
        .map(|c| (c, Resolution::Virtual))
        .collect()
}

/// All six numbers, combining brute force with theorem bounds.
pub fn characteristic_report(p: &PseudoDiagram, cfg: &NumbersConfig) -> Result<CharacteristicReport, DiagramError> {
    Ok(analyze(p, cfg)?.0)
}

/// The report together with the brute-force tables it was computed from.
pub fn analyze(p: &PseudoDiagram, cfg: &NumbersConfig) -> Result<(CharacteristicReport, Option<Tables>), DiagramError> {
    let ([mut tr, mut kn, mut cl, mut vir], tables) = classical_numbers(p, cfg)?;
    let n_pre = p.precrossings().len();
    let classical_shadow = p.is_shadow() && p.carrier_genus() == 0;

    if classical_shadow {
        let shadow_tr = trivializing_number_shadow(p, &cfg.budget)?;
        let value = shadow_tr.exact().unwrap();
        let verified = shadow_tr.notes().iter().any(|n| n.contains("verified on every"));
        tr.raise_lower(value, "lemma:tr=deletion");
        if verified {
            tr.lower_upper(value, "lemma:tr=deletion witness");
            tr.settle(shadow_tr.witness().map(|w| w.to_vec()));
        }
        if n_pre > 0 {
            kn.raise_lower(3.min(n_pre + 1), "prop:kn>=3");
        }
    }
    let (cl_thm, vir_thm) = cl_vir_bounds(p);
    cl.raise_lower(cl_thm.lower(), "theorem");
    for note in cl_thm.notes() {
        cl.notes_mut().push(note.clone());
    }
    if let Some(u) = vir_thm.upper() {
        vir.lower_upper(u, "theorem");
    }
    for note in vir_thm.notes() {
        vir.notes_mut().push(note.clone());
    }
    // kn <= vir and cl <= tr
    vir.raise_lower(kn.lower(), "fact:kn<=vir");
    if let Some(u) = tr.upper() {
        cl.lower_upper(u, "fact:cl<=tr");
    }

    let (virtr, ubtr) = if n_pre <= cfg.uber_limit {
        uber_numbers(p, cfg)?
    } else if p.is_shadow() {
        let d = deletion_number(p);
        let mut virtr = NumberValue::Bounds {
            lower: 0,
            upper: None,
            notes: vec![format!(
                "{n_pre} precrossings exceed the virtual-resolution limit {}",
                cfg.uber_limit
            )],
        };
        virtr.lower_upper(d, "deletion witness");
        let mut ubtr = virtr.clone();
        if classical_shadow {
            virtr.raise_lower(d, "thm:ubtr=virtr=tr");
            ubtr.raise_lower(d, "thm:ubtr=virtr=tr");
            virtr.settle(Some(deletion_witness(p)));
            ubtr.settle(Some(deletion_witness(p)));
        }
        (virtr, ubtr)
    } else {
        let v = out_of_reach(n_pre, cfg.uber_limit);
        (v.clone(), v)
    };

    let report = CharacteristicReport {
        tr,
        kn,
        cl,
        vir,
        virtr,
        ubtr,
    };
    Ok((report, tables))
}

/// Trivializing sets of a pseudodiagram by brute force, each with its proof
/// status. Sets are bitmasks over chord ids.
pub fn trivializing_sets(partial: &PartialTable) -> Vec<(u64, Proof)> {
    let p = partial.pre.len();
    (0..1u64 << p)
        .map(|subset| {
            let chords = (0..p)
                .filter(|&i| subset >> i & 1 == 1)
                .fold(0u64, |m, i| m | 1 << partial.pre[i]);
            (chords, partial.set_forces(subset, Target::Trivial))
        })
        .collect()
}

/// Basic trivializing sets: proven trivializing with every proper subset
/// proven not trivializing. `None` when some status is unknown.
pub fn basic_trivializing_sets(partial: &PartialTable) -> Option<Vec<u64>> {
    let sets = trivializing_sets(partial);
    let p = partial.pre.len();
    // index by position subset
    let status: Vec<Proof> = sets.iter().map(|&(_, s)| s).collect();
    let mut out = Vec::new();
    for subset in 0..1u64 << p {
        match status[subset as usize] {
            Proof::Unknown => return None,
            Proof::No => continue,
            Proof::Yes => {}
        }
        let mut basic = true;
        let mut sub = subset;
        while sub != 0 {
            sub = (sub - 1) & subset;
            match status[sub as usize] {
                Proof::Yes => {
                    basic = false;
                    break;
                }
                Proof::Unknown => return None,
                Proof::No => {}
            }
        }
        if basic {
            out.push(sets[subset as usize].0);
        }
    }
    Some(out)
}
