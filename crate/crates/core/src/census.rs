//! Shadow census: one record per canonical shadow with its characteristic
//! numbers and the theorem checks that apply to it, plus replay
//! verification of stored records.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{doubled_change, genus_bound_check, seifert_lemma_check, unknotting_upper, Check};
use crate::diagram::{PseudoDiagram, Resolution};
use crate::enumerate::{enumerate_chord_diagrams, EnumerationFilter, DEFAULT_MAX_ENUMERATION};
use crate::error::DiagramError;
use crate::invariants::{abs_index_partition, odd_set};
use crate::numbers::{
    analyze, basic_trivializing_sets, full_resolution, CharacteristicReport, Classicality, Knottedness, NumberValue,
    NumbersConfig, Tables,
};
use crate::oracle::{is_unknot, Verdict};
use crate::parallel::{max_parallel_subset, peel_resolution};

/// Largest precrossing count for which basic trivializing sets are listed.
pub const BASIC_SET_LIMIT: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    /// Not applicable, or not decidable within budget.
    Skip,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremCheck {
    pub tag: String,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl TheoremCheck {
    fn new(tag: &str, status: Status, detail: Option<String>) -> Self {
        TheoremCheck {
            tag: tag.to_string(),
            status,
            detail,
        }
    }

    fn from_bool(tag: &str, ok: bool, detail: impl FnOnce() -> String) -> Self {
        if ok {
            Self::new(tag, Status::Pass, None)
        } else {
            Self::new(tag, Status::Fail, Some(detail()))
        }
    }

    fn skip(tag: &str, why: &str) -> Self {
        Self::new(tag, Status::Skip, Some(why.to_string()))
    }

    /// Tags starting with `conj:` record evidence only and never fail a run.
    pub fn is_conjecture(&self) -> bool {
        self.tag.starts_with("conj:")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusRecord {
    pub canonical_code: String,
    pub n: usize,
    pub carrier_genus: usize,
    pub realizable: bool,
    pub report: CharacteristicReport,
    pub bound_checks: Vec<TheoremCheck>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CensusConfig {
    pub numbers: NumbersConfig,
    pub filter: EnumerationFilter,
    pub max_n: usize,
    /// Cap on `max_n`, guarding against accidental huge runs.
    pub max_enumeration: usize,
}

impl Default for CensusConfig {
    fn default() -> Self {
        CensusConfig {
            numbers: NumbersConfig::default(),
            filter: EnumerationFilter {
                canonical_only: true,
                ..Default::default()
            },
            max_n: 4,
            max_enumeration: DEFAULT_MAX_ENUMERATION,
        }
    }
}

/// Shadows of the census in output order: by chord count, then canonical code.
pub fn census_shadows(cfg: &CensusConfig) -> Result<Vec<PseudoDiagram>, DiagramError> {
    let mut out = Vec::new();
    for n in 1..=cfg.max_n {
        let mut level: Vec<PseudoDiagram> = enumerate_chord_diagrams(n, cfg.filter, cfg.max_enumeration)?
            .map(|s| s.canonical_form())
            .collect();
        level.sort_by_cached_key(|s| s.to_string());
        level.dedup();
        out.extend(level);
    }
    Ok(out)
}

/// Least number of crossing switches from `mask` to a trivial resolution,
/// exact when every closer resolution is proven knotted.
fn unknotting_by_hamming(knot: &[Knottedness], mask: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for (t, k) in knot.iter().enumerate() {
        if *k == Knottedness::Trivial {
            let dist = (t ^ mask).count_ones() as usize;
            if best.is_none_or(|(b, _)| dist < b) {
                best = Some((dist, t));
            }
        }
    }
    let (u, target) = best?;
    let blocked = knot
        .iter()
        .enumerate()
        .any(|(t, k)| *k == Knottedness::Unknown && ((t ^ mask).count_ones() as usize) < u);
    if blocked {
        None
    } else {
        Some((u, target))
    }
}

/// Folds per-resolution outcomes into one check: the first failure wins,
/// otherwise pass when anything passed.
struct Tally {
    tag: &'static str,
    passed: usize,
    skipped: usize,
    failure: Option<String>,
}

impl Tally {
    fn new(tag: &'static str) -> Self {
        Tally {
            tag,
            passed: 0,
            skipped: 0,
            failure: None,
        }
    }

    fn add(&mut self, status: Status, detail: impl FnOnce() -> String) {
        match status {
            Status::Pass => self.passed += 1,
            Status::Skip => self.skipped += 1,
            Status::Fail => {
                if self.failure.is_none() {
                    self.failure = Some(detail());
                }
            }
        }
    }

    fn check(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.add(if ok { Status::Pass } else { Status::Fail }, detail);
    }

    fn finish(self) -> TheoremCheck {
        match self.failure {
            Some(d) => TheoremCheck::new(self.tag, Status::Fail, Some(d)),
            None if self.passed > 0 => {
                let detail = (self.skipped > 0).then(|| format!("{} resolutions skipped", self.skipped));
                TheoremCheck::new(self.tag, Status::Pass, detail)
            }
            None => TheoremCheck::skip(self.tag, "no resolution decided"),
        }
    }
}

/// Checks on every resolution of a planar shadow: the unknotting,
/// virtual unknotting and genus bounds.
fn resolution_checks(
    s: &PseudoDiagram,
    tables: &Tables,
    cfg: &CensusConfig,
) -> Result<Vec<TheoremCheck>, DiagramError> {
    let keep = max_parallel_subset(s);
    let tr = s.n() - keep.count_ones() as usize;
    let trivializing: u64 = peel_resolution(s, keep).iter().fold(0, |m, &(c, _)| m | 1 << c);
    let pre = &tables.full.pre;
    let knot = &tables.full.knottedness;
    let budget = &cfg.numbers.budget;

    struct Row {
        u: Option<usize>,
        u_ok: bool,
        u_upper: (usize, Check),
        vu_ok: bool,
        vu_upper: usize,
        genus_ok: bool,
        seifert_ok: bool,
        code: String,
    }
    let rows: Vec<Row> = (0..knot.len())
        .into_par_iter()
        .map(|mask| -> Result<Row, DiagramError> {
            let d = full_resolution(s, pre, mask as u64);
            let exact = unknotting_by_hamming(knot, mask);
            let u = exact.map(|(u, _)| u);
            // both constructions for vu
            let virtualized = is_unknot(&d.delete_chords(trivializing), budget)?;
            let mut vu_upper = if matches!(virtualized, Verdict::Trivial { .. }) {
                tr
            } else {
                usize::MAX
            };
            let mut doubled_ok = true;
            if let Some((u, target)) = exact {
                for (i, &c) in pre.iter().enumerate() {
                    if (mask ^ target) >> i & 1 == 1 {
                        let (big, del) = doubled_change(&d, c)?;
                        doubled_ok &= big.delete_chords(1 << del[0] | 1 << del[1]).canonical_key()
                            == d.switch_crossing(c)?.canonical_key();
                    }
                }
                if doubled_ok {
                    vu_upper = vu_upper.min(2 * u);
                }
            }
            let upper = unknotting_upper(&d, budget)?;
            let g = genus_bound_check(&d)?;
            let (components, seifert) = seifert_lemma_check(&d)?;
            Ok(Row {
                u,
                u_ok: u.is_none_or(|u| 2 * u <= tr),
                u_upper: (upper.upper as usize, upper.check),
                vu_ok: doubled_ok && vu_upper <= tr.min(u.map_or(usize::MAX, |u| 2 * u)),
                vu_upper,
                genus_ok: g.check == Check::Verified,
                seifert_ok: components == keep.count_ones() as usize + 1 && seifert >= components,
                code: d.to_string(),
            })
        })
        .collect::<Result<_, _>>()?;

    let mut u_half = Tally::new("thm:u<=tr/2");
    let mut u_upper = Tally::new("thm:u-exact<=u-upper");
    let mut vu = Tally::new("thm:vu<=min(tr,2u)");
    let mut genus = Tally::new("thm:g<=tr/2");
    let mut seifert = Tally::new("lemma:seifert-circles");
    let mut conj = Tally::new("conj:vu=2u-upper");
    for r in &rows {
        match r.u {
            Some(u) => {
                u_half.check(r.u_ok, || format!("{} u={u} tr={tr}", r.code));
                let (up, check) = r.u_upper;
                u_upper.check(u <= up && check != Check::Failed, || {
                    format!("{} u={u} upper={up} {check:?}", r.code)
                });
                vu.check(r.vu_ok, || format!("{} vu<={} u={u} tr={tr}", r.code, r.vu_upper));
                conj.check(r.vu_upper == 2 * u, || format!("{} vu<={} u={u}", r.code, r.vu_upper));
            }
            None => {
                u_half.add(Status::Skip, String::new);
                u_upper.add(Status::Skip, String::new);
                vu.add(Status::Skip, String::new);
                conj.add(Status::Skip, String::new);
            }
        }
        genus.check(r.genus_ok, || r.code.clone());
        seifert.check(r.seifert_ok, || r.code.clone());
    }
    Ok(vec![
        u_half.finish(),
        u_upper.finish(),
        vu.finish(),
        genus.finish(),
        seifert.finish(),
        conj.finish(),
    ])
}

fn both_exact(a: &NumberValue, b: &NumberValue) -> Option<(usize, usize)> {
    Some((a.exact()?, b.exact()?))
}

fn shadow_checks(
    s: &PseudoDiagram,
    report: &CharacteristicReport,
    tables: Option<&Tables>,
    realizable: bool,
) -> Vec<TheoremCheck> {
    let mut out = Vec::new();
    let errs = report.consistency_errors();
    out.push(TheoremCheck::from_bool("fact:consistency", errs.is_empty(), || {
        errs.join("; ")
    }));

    let tr = report.tr.exact();
    out.push(match (realizable, tr) {
        (true, Some(t)) => TheoremCheck::from_bool("thm:tr-even", t % 2 == 0, || format!("tr={t}")),
        (true, None) => TheoremCheck::skip("thm:tr-even", "tr not exact"),
        (false, _) => TheoremCheck::skip("thm:tr-even", "virtual shadow"),
    });
    if !realizable {
        out.push(match tr {
            Some(t) => TheoremCheck::from_bool("conj:tr-even-virtual", t % 2 == 0, || format!("tr={t}")),
            None => TheoremCheck::skip("conj:tr-even-virtual", "tr not exact"),
        });
    }
    out.push(match (realizable, tables) {
        (false, _) => TheoremCheck::skip("thm:basic-even", "virtual shadow"),
        (true, Some(t)) if t.partial.pre.len() <= BASIC_SET_LIMIT => match basic_trivializing_sets(&t.partial) {
            Some(sets) => {
                let odd: Vec<String> = sets
                    .iter()
                    .filter(|b| b.count_ones() % 2 == 1)
                    .map(|b| format!("{b:#b}"))
                    .collect();
                TheoremCheck::from_bool("thm:basic-even", odd.is_empty(), || {
                    format!("odd sets {}", odd.join(","))
                })
            }
            None => TheoremCheck::skip("thm:basic-even", "oracle unknown"),
        },
        (true, _) => TheoremCheck::skip("thm:basic-even", "too many precrossings"),
    });
    out.push(if realizable {
        TheoremCheck::from_bool(
            "prop:kn>=3",
            !report.kn.has_conflict() && report.kn.lower() >= 3.min(s.n() + 1),
            || report.kn.to_string(),
        )
    } else {
        TheoremCheck::skip("prop:kn>=3", "virtual shadow")
    });
    out.push(match tr {
        Some(t) => TheoremCheck::from_bool("prop:tr!=1", t != 1, || "tr=1".into()),
        None => TheoremCheck::skip("prop:tr!=1", "tr not exact"),
    });
    out.push(match both_exact(&report.virtr, &report.tr) {
        Some((v, t)) => TheoremCheck::from_bool("lemma:virtr<=tr", v <= t, || format!("virtr={v} tr={t}")),
        None => match (report.virtr.upper(), report.tr.lower()) {
            (Some(v), t) if v <= t => TheoremCheck::new("lemma:virtr<=tr", Status::Pass, None),
            _ => TheoremCheck::skip("lemma:virtr<=tr", "not exact"),
        },
    });
    out.push(match both_exact(&report.ubtr, &report.virtr) {
        Some((u, v)) => {
            let t = report.tr.exact();
            let ok = u == v && (!realizable || t == Some(v));
            TheoremCheck::from_bool("thm:ubtr=virtr", ok, || format!("ubtr={u} virtr={v} tr={t:?}"))
        }
        None => TheoremCheck::skip("thm:ubtr=virtr", "not exact"),
    });
    out.push(match both_exact(&report.cl, &report.tr) {
        Some((c, t)) => TheoremCheck::from_bool("fact:cl<=tr", c <= t, || format!("cl={c} tr={t}")),
        None => TheoremCheck::skip("fact:cl<=tr", "not exact"),
    });
    out.push(match both_exact(&report.kn, &report.vir) {
        Some((k, v)) => TheoremCheck::from_bool("fact:kn<=vir", k <= v, || format!("kn={k} vir={v}")),
        None => TheoremCheck::skip("fact:kn<=vir", "not exact"),
    });
    let odd = odd_set(s).len();
    out.push(TheoremCheck::from_bool("thm:odd-even", odd.is_multiple_of(2), || {
        format!("|Odd|={odd}")
    }));
    let classically_resolvable =
        realizable || tables.is_some_and(|t| t.full.classicality.contains(&Classicality::Classical));
    out.push(if classically_resolvable {
        let bad: Vec<String> = abs_index_partition(s)
            .iter()
            .filter(|(m, v)| **m != 0 && v.len() % 2 == 1)
            .map(|(m, v)| format!("|C_{m}|+|C_-{m}|={}", v.len()))
            .collect();
        TheoremCheck::from_bool("lemma:cm-even", bad.is_empty(), || bad.join(" "))
    } else {
        TheoremCheck::skip("lemma:cm-even", "no proven classical resolution")
    });
    out
}

/// Computes the record of one shadow.
pub fn census_record(s: &PseudoDiagram, cfg: &CensusConfig) -> Result<CensusRecord, DiagramError> {
    if !s.is_shadow() {
        return Err(DiagramError::NotAShadow);
    }
    let canonical = s.canonical_form();
    let genus = canonical.carrier_genus();
    let realizable = genus == 0;
    let (report, tables) = analyze(&canonical, &cfg.numbers)?;
    let mut checks = shadow_checks(&canonical, &report, tables.as_ref(), realizable);
    if realizable {
        if let Some(t) = &tables {
            checks.extend(resolution_checks(&canonical, t, cfg)?);
        }
    }
    Ok(CensusRecord {
        canonical_code: canonical.to_string(),
        n: canonical.n(),
        carrier_genus: genus,
        realizable,
        report,
        bound_checks: checks,
    })
}

/// Records for every census shadow, in output order.
pub fn census(cfg: &CensusConfig) -> Result<Vec<CensusRecord>, DiagramError> {
    census_shadows(cfg)?.par_iter().map(|s| census_record(s, cfg)).collect()
}

/// Re-verification of the witnesses of a stored record: the tr witness
/// trivializes every completion and the kn witness knots every completion.
pub fn replay_witnesses(rec: &CensusRecord, cfg: &CensusConfig) -> Result<Vec<TheoremCheck>, DiagramError> {
    let s: PseudoDiagram = rec
        .canonical_code
        .parse()
        .map_err(|e| DiagramError::IllegalMove(format!("unparsable code: {e}")))?;
    let mut out = Vec::new();
    for (tag, value, want_trivial) in [
        ("replay:tr-witness", &rec.report.tr, true),
        ("replay:kn-witness", &rec.report.kn, false),
    ] {
        let Some(w) = value.witness() else {
            out.push(TheoremCheck::skip(tag, "no witness"));
            continue;
        };
        let mut d = s.clone();
        for &(c, r) in w {
            if let Resolution::Classical(sign) = r {
                d = d.with_writhe(c, sign);
            }
        }
        let rest = d.precrossings();
        let mut ok = true;
        let mut first_bad = None;
        for mask in 0..1u64 << rest.len() {
            let full = full_resolution(&d, &rest, mask);
            let v = is_unknot(&full, &cfg.numbers.budget)?;
            let good = if want_trivial {
                v.is_trivial()
            } else {
                v.is_nontrivial()
            };
            if !good {
                ok = false;
                first_bad = Some(full.to_string());
                break;
            }
        }
        out.push(TheoremCheck::from_bool(tag, ok, || {
            format!("completion {}", first_bad.unwrap_or_default())
        }));
    }
    Ok(out)
}

/// Per-tag totals over a census.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TagSummary {
    pub pass: usize,
    pub fail: usize,
    pub skip: usize,
    pub first_failure: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VerifySummary {
    pub records: usize,
    pub tags: BTreeMap<String, TagSummary>,
}

impl VerifySummary {
    pub fn add(&mut self, code: &str, check: &TheoremCheck) {
        let e = self.tags.entry(check.tag.clone()).or_default();
        match check.status {
            Status::Pass => e.pass += 1,
            Status::Skip => e.skip += 1,
            Status::Fail => {
                e.fail += 1;
                if e.first_failure.is_none() {
                    e.first_failure = Some(format!("{code}: {}", check.detail.clone().unwrap_or_default()));
                }
            }
        }
    }

    /// Failures outside the conjecture tags.
    pub fn failed(&self) -> bool {
        self.tags.iter().any(|(tag, s)| s.fail > 0 && !tag.starts_with("conj:"))
    }
}

/// Recomputes each record, compares it with the stored one, replays its
/// witnesses and tallies every theorem check.
pub fn verify_records(records: &[CensusRecord], cfg: &CensusConfig) -> Result<VerifySummary, DiagramError> {
    let results: Vec<(String, Vec<TheoremCheck>)> = records
        .par_iter()
        .map(|rec| -> Result<_, DiagramError> {
            let mut checks = Vec::new();
            let parsed: Result<PseudoDiagram, _> = rec.canonical_code.parse();
            let Ok(s) = parsed else {
                checks.push(TheoremCheck::new(
                    "replay:parse",
                    Status::Fail,
                    Some("unparsable".into()),
                ));
                return Ok((rec.canonical_code.clone(), checks));
            };
            let canonical = s.canonical_form().to_string() == rec.canonical_code;
            checks.push(TheoremCheck::from_bool("replay:canonical", canonical, || {
                "code is not canonical".into()
            }));
            let fresh = census_record(&s, cfg)?;
            checks.push(TheoremCheck::from_bool("replay:deterministic", fresh == *rec, || {
                "recomputed record differs".into()
            }));
            checks.extend(replay_witnesses(rec, cfg)?);
            checks.extend(rec.bound_checks.iter().cloned());
            Ok((rec.canonical_code.clone(), checks))
        })
        .collect::<Result<_, _>>()?;
    let mut summary = VerifySummary {
        records: records.len(),
        ..Default::default()
    };
    for (code, checks) in &results {
        for c in checks {
            summary.add(code, c);
        }
    }
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_census_counts() {
        let cfg = CensusConfig {
            max_n: 2,
            ..Default::default()
        };
        let recs = census(&cfg).unwrap();
        assert_eq!(recs.len(), 3);
        assert_eq!(recs.iter().map(|r| r.n).collect::<Vec<_>>(), vec![1, 2, 2]);
    }

    #[test]
    fn records_round_trip_through_json() {
        let cfg = CensusConfig {
            max_n: 3,
            ..Default::default()
        };
        for rec in census(&cfg).unwrap() {
            let line = serde_json::to_string(&rec).unwrap();
            let back: CensusRecord = serde_json::from_str(&line).unwrap();
            assert_eq!(back, rec);
        }
    }

    #[test]
    fn hamming_unknotting() {
        use Knottedness::*;
        assert_eq!(
            unknotting_by_hamming(&[Trivial, Nontrivial, Nontrivial, Nontrivial], 3),
            Some((2, 0))
        );
        assert_eq!(
            unknotting_by_hamming(&[Trivial, Unknown, Nontrivial, Nontrivial], 3),
            None
        );
        assert_eq!(unknotting_by_hamming(&[Nontrivial, Nontrivial], 0), None);
    }

    #[test]
    fn small_census_verifies() {
        let cfg = CensusConfig {
            max_n: 4,
            ..Default::default()
        };
        let recs = census(&cfg).unwrap();
        let summary = verify_records(&recs, &cfg).unwrap();
        assert!(!summary.failed(), "{:?}", summary);
    }
}
