//! Exhaustive enumeration of chord diagrams for the census.

use crate::diagram::{face_count, PseudoDiagram, Sign};
use crate::error::DiagramError;

pub const DEFAULT_MAX_ENUMERATION: usize = 8;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EnumerationFilter {
    /// Keep only shadows of classical (genus 0) curves.
    pub realizable_only: bool,
    /// Keep only diagrams whose interlacement graph is connected.
    pub connected_interlacement_only: bool,
    /// One representative per rotation/reflection orbit.
    pub canonical_only: bool,
}

/// Perfect matchings of `0..2n` as partner arrays, in lexicographic order of
/// the choice sequence (first free point matched to each later free point).
pub struct Matchings {
    partner: Vec<usize>,
    stack: Vec<(usize, usize)>,
    started: bool,
    done: bool,
}

const FREE: usize = usize::MAX;

impl Matchings {
    pub fn new(n: usize) -> Self {
        Matchings {
            partner: vec![FREE; 2 * n],
            stack: Vec::with_capacity(n),
            started: false,
            done: false,
        }
    }

    fn link(&mut self, a: usize, b: usize) {
        self.partner[a] = b;
        self.partner[b] = a;
        self.stack.push((a, b));
    }

    fn extend(&mut self) {
        while let Some(a) = self.partner.iter().position(|&p| p == FREE) {
            let b = (a + 1..self.partner.len()).find(|&b| self.partner[b] == FREE).unwrap();
            self.link(a, b);
        }
    }
}

impl Iterator for Matchings {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            self.extend();
            return Some(self.partner.clone());
        }
        while let Some((a, b)) = self.stack.pop() {
            self.partner[a] = FREE;
            self.partner[b] = FREE;
            if let Some(c) = (b + 1..self.partner.len()).find(|&c| self.partner[c] == FREE) {
                self.link(a, c);
                self.extend();
                return Some(self.partner.clone());
            }
        }
        self.done = true;
        None
    }
}

/// First-visit label sequence of a matching read through the slot map `at`.
fn label_sequence(partner: &[usize], at: impl Fn(usize) -> usize, out: &mut Vec<u8>) {
    let len = partner.len();
    out.clear();
    out.resize(len, u8::MAX);
    // inverse of `at`
    let mut pos = vec![0; len];
    for i in 0..len {
        pos[at(i)] = i;
    }
    let mut next = 0u8;
    for i in 0..len {
        if out[i] == u8::MAX {
            out[i] = next;
            out[pos[partner[at(i)]]] = next;
            next += 1;
        }
    }
}

/// Least label sequence over the dihedral orbit, and whether the matching
/// itself attains it.
pub fn canonical_matching(partner: &[usize]) -> (Vec<u8>, bool) {
    let len = partner.len();
    let mut own = Vec::new();
    label_sequence(partner, |i| i, &mut own);
    let mut best = own.clone();
    let mut buf = Vec::new();
    for k in 0..len {
        label_sequence(partner, |i| (i + k) % len, &mut buf);
        if buf < best {
            best.clone_from(&buf);
        }
        label_sequence(partner, |i| (len + len - 1 - i - k) % len, &mut buf);
        if buf < best {
            best.clone_from(&buf);
        }
    }
    let is_min = best == own;
    (best, is_min)
}

fn interlacement_rows(partner: &[usize]) -> Vec<u64> {
    let len = partner.len();
    let mut id = vec![0usize; len];
    let mut ends = Vec::new();
    for p in 0..len {
        if p < partner[p] {
            id[p] = ends.len();
            id[partner[p]] = ends.len();
            ends.push((p, partner[p]));
        }
    }
    let mut rows = vec![0u64; ends.len()];
    for (c, &(a, b)) in ends.iter().enumerate() {
        for p in a + 1..b {
            let q = partner[p];
            if q < a || q > b {
                rows[c] |= 1 << id[p];
            }
        }
    }
    rows
}

/// Every chord crosses an even number of chords.
pub fn evenly_intersticed(partner: &[usize]) -> bool {
    interlacement_rows(partner).iter().all(|r| r.count_ones() % 2 == 0)
}

pub fn interlacement_connected(partner: &[usize]) -> bool {
    let rows = interlacement_rows(partner);
    if rows.len() <= 1 {
        return true;
    }
    let all = if rows.len() == 64 {
        u64::MAX
    } else {
        (1u64 << rows.len()) - 1
    };
    let mut reached = 1u64;
    let mut frontier = 1u64;
    while frontier != 0 {
        let c = frontier.trailing_zeros() as usize;
        frontier &= frontier - 1;
        let fresh = rows[c] & !reached;
        reached |= fresh;
        frontier |= fresh;
    }
    reached == all
}

fn genus_with(partner: &[usize], flats: &[Sign]) -> usize {
    let d = PseudoDiagram::shadow_from_matching(partner, flats);
    let n = d.n();
    if n == 0 {
        return 0;
    }
    (2 + n - face_count(&d.rotation_system())) / 2
}

/// Flat signs (chord 0 positive, first-visit order) with the least carrier
/// genus, and that genus. Ties go to the first assignment in binary order
/// with `+` before `-`.
pub fn min_genus_flats(partner: &[usize]) -> (Vec<Sign>, usize) {
    let n = partner.len() / 2;
    if n == 0 {
        return (Vec::new(), 0);
    }
    let mut best: Option<(Vec<Sign>, usize)> = None;
    let evenly = evenly_intersticed(partner);
    for mask in 0u64..(1u64 << (n - 1)) {
        let flats: Vec<Sign> = (0..n)
            .map(|c| {
                if c > 0 && mask >> (c - 1) & 1 == 1 {
                    Sign::Minus
                } else {
                    Sign::Plus
                }
            })
            .collect();
        let g = genus_with(partner, &flats);
        if best.as_ref().is_none_or(|(_, bg)| g < *bg) {
            best = Some((flats, g));
        }
        if g == 0 || (!evenly && g == 1) {
            break;
        }
    }
    best.unwrap()
}

/// Flat signs realizing the matching as a classical curve, if any.
pub fn realizing_flats(partner: &[usize]) -> Option<Vec<Sign>> {
    if !evenly_intersticed(partner) {
        return None;
    }
    let (flats, g) = min_genus_flats(partner);
    (g == 0).then_some(flats)
}

/// Shadow on a matching: realizing flat signs when they exist, otherwise all `+`.
pub fn shadow_of_matching(partner: &[usize]) -> PseudoDiagram {
    let n = partner.len() / 2;
    match realizing_flats(partner) {
        Some(flats) => PseudoDiagram::shadow_from_matching(partner, &flats),
        None => PseudoDiagram::shadow_from_matching(partner, &vec![Sign::Plus; n]),
    }
}

/// Streams the shadows on `n` chords that pass `filter`.
pub fn enumerate_chord_diagrams(
    n: usize,
    filter: EnumerationFilter,
    max_n: usize,
) -> Result<impl Iterator<Item = PseudoDiagram>, DiagramError> {
    if n > max_n {
        return Err(DiagramError::LimitExceeded {
            what: "enumeration chord count",
            size: n,
            limit: max_n,
        });
    }
    Ok(Matchings::new(n).filter_map(move |partner| {
        if filter.canonical_only && !canonical_matching(&partner).1 {
            return None;
        }
        if filter.connected_interlacement_only && !interlacement_connected(&partner) {
            return None;
        }
        if filter.realizable_only {
            let flats = realizing_flats(&partner)?;
            return Some(PseudoDiagram::shadow_from_matching(&partner, &flats));
        }
        Some(shadow_of_matching(&partner))
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn count(n: usize, filter: EnumerationFilter) -> usize {
        enumerate_chord_diagrams(n, filter, 8).unwrap().count()
    }

    #[test]
    fn matching_counts_are_double_factorials() {
        let expected = [1, 1, 3, 15, 105, 945];
        for (n, &e) in expected.iter().enumerate() {
            assert_eq!(Matchings::new(n).count(), e);
        }
    }

    #[test]
    fn small_enumerations() {
        let all: Vec<_> = enumerate_chord_diagrams(1, EnumerationFilter::default(), 8)
            .unwrap()
            .collect();
        assert_eq!(all.len(), 1);
        assert_eq!(all[0].chords()[0].ends, [0, 1]);
        let canon = EnumerationFilter {
            canonical_only: true,
            ..Default::default()
        };
        let two: Vec<_> = enumerate_chord_diagrams(2, canon, 8).unwrap().collect();
        assert_eq!(two.len(), 2);
        let crossing = two.iter().filter(|d| d.interlacement_graph().edge_count() == 1).count();
        assert_eq!(crossing, 1);
    }

    #[test]
    fn refuses_above_maximum() {
        assert!(enumerate_chord_diagrams(9, EnumerationFilter::default(), 8).is_err());
    }

    #[test]
    fn canonical_counts_match_orbit_count() {
        // orbit count by brute force: distinct least label sequences
        for n in 0..=5 {
            let mut orbits: Vec<Vec<u8>> = Matchings::new(n).map(|m| canonical_matching(&m).0).collect();
            orbits.sort();
            orbits.dedup();
            assert_eq!(
                count(
                    n,
                    EnumerationFilter {
                        canonical_only: true,
                        ..Default::default()
                    }
                ),
                orbits.len()
            );
        }
        assert_eq!(
            count(
                3,
                EnumerationFilter {
                    canonical_only: true,
                    ..Default::default()
                }
            ),
            5
        );
    }

    #[test]
    fn realizable_three_chord_shadows() {
        let f = EnumerationFilter {
            canonical_only: true,
            realizable_only: true,
            ..Default::default()
        };
        let shadows: Vec<_> = enumerate_chord_diagrams(3, f, 8).unwrap().collect();
        // every realizable shadow is evenly intersticed and has genus 0
        assert!(shadows.iter().all(|s| s.carrier_genus() == 0));
        // exhaustive face tracing over all sign choices: only matchings with
        // no odd chords qualify, which excludes the two with a lone crossing pair
        let by_trace = Matchings::new(3)
            .filter(|m| canonical_matching(m).1)
            .filter(|m| {
                (0..4u64).any(|mask| {
                    let flats: Vec<Sign> = (0..3)
                        .map(|c| {
                            if c > 0 && mask >> (c - 1) & 1 == 1 {
                                Sign::Minus
                            } else {
                                Sign::Plus
                            }
                        })
                        .collect();
                    genus_with(m, &flats) == 0
                })
            })
            .count();
        assert_eq!(shadows.len(), by_trace);
        assert_eq!(shadows.len(), 3);
    }

    #[test]
    fn trefoil_matching_realizing_signs() {
        let partner = vec![3, 4, 5, 0, 1, 2];
        let flats = realizing_flats(&partner).unwrap();
        let s = PseudoDiagram::shadow_from_matching(&partner, &flats);
        assert_eq!(s.carrier_genus(), 0);
        let all_plus = PseudoDiagram::shadow_from_matching(&partner, &[Sign::Plus; 3]);
        assert_eq!(all_plus.carrier_genus(), 1);
    }

    #[test]
    fn connectivity_filter() {
        let f = EnumerationFilter {
            connected_interlacement_only: true,
            canonical_only: true,
            ..Default::default()
        };
        assert_eq!(count(2, f), 1);
        assert!(interlacement_connected(&[3, 4, 5, 0, 1, 2]));
        assert!(!interlacement_connected(&[1, 0, 3, 2]));
    }
}
