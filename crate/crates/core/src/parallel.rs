//! Largest sets of pairwise parallel chords, and the trivializing
//! resolution they induce on a shadow.

use crate::diagram::{PseudoDiagram, Sign};

/// Largest set of pairwise non-crossing chords as a bitmask, by interval
/// dynamic programming over endpoint slots. Ties prefer keeping the chord at
/// the left end of the interval.
pub fn max_parallel_subset(d: &PseudoDiagram) -> u64 {
    let len = d.len();
    if len == 0 {
        return 0;
    }
    // best[i][j] for the slot interval i..=j; row-major, j >= i
    let idx = |i: usize, j: usize| i * len + j;
    let mut best = vec![0u32; len * len];
    let get = |best: &[u32], i: usize, j: usize| if i > j || j >= len { 0 } else { best[idx(i, j)] };
    for i in (0..len).rev() {
        let k = d.partner(i);
        for j in i..len {
            let mut v = get(&best, i + 1, j);
            if k > i && k <= j {
                let inner = if k > i + 1 { get(&best, i + 1, k - 1) } else { 0 };
                v = v.max(1 + inner + get(&best, k + 1, j));
            }
            best[idx(i, j)] = v;
        }
    }
    // walk back
    let mut mask = 0u64;
    let mut stack = vec![(0usize, len - 1)];
    while let Some((i, j)) = stack.pop() {
        if i > j || j >= len {
            continue;
        }
        let k = d.partner(i);
        let here = best[idx(i, j)];
        if k > i && k <= j {
            let inner = if k > i + 1 { get(&best, i + 1, k - 1) } else { 0 };
            if here == 1 + inner + get(&best, k + 1, j) {
                mask |= 1 << d.slot_chord(i);
                if k > i + 1 {
                    stack.push((i + 1, k - 1));
                }
                stack.push((k + 1, j));
                continue;
            }
        }
        stack.push((i + 1, j));
    }
    mask
}

/// Exhaustive oracle for [`max_parallel_subset`]: the largest independent set
/// of the interlacement graph, least mask among those of maximum size.
pub fn max_parallel_subset_brute(d: &PseudoDiagram) -> u64 {
    let g = d.interlacement_graph();
    let n = d.n();
    assert!(n < 32, "brute force is for small diagrams");
    let mut best = 0u64;
    for mask in 0u64..(1u64 << n) {
        if mask.count_ones() > best.count_ones() && g.is_independent(mask) {
            best = mask;
        }
    }
    best
}

/// Fewest chords whose deletion leaves only parallel chords.
pub fn deletion_number(d: &PseudoDiagram) -> usize {
    d.n() - max_parallel_subset(d).count_ones() as usize
}

/// Writhes for the chords outside `parallel` that make every completion
/// trivial, built by repeatedly peeling an innermost parallel chord: the
/// strand it cuts off is laid over everything it meets, then contracted.
/// Chords left when no parallel chord remains are resolved descending from
/// the basepoint. Requires a classical (genus 0) shadow for the guarantee.
pub fn peel_resolution(d: &PseudoDiagram, parallel: u64) -> Vec<(usize, Sign)> {
    let len = d.len();
    let mut alive = if d.n() == 64 { u64::MAX } else { (1u64 << d.n()) - 1 };
    let mut out = Vec::new();
    let set = |c: usize, over_slot: usize, out: &mut Vec<(usize, Sign)>| {
        let chord = &d.chords()[c];
        let flat = chord.flat_sign();
        let w = if over_slot == chord.ends[0] { flat } else { -flat };
        out.push((c, w));
    };
    loop {
        let inner = (0..d.n())
            .filter(|&c| alive >> c & 1 == 1 && parallel >> c & 1 == 1)
            .min_by_key(|&c| d.chords()[c].ends[1] - d.chords()[c].ends[0]);
        let Some(c) = inner else { break };
        let [a, b] = d.chords()[c].ends;
        let mut done = 1u64 << c;
        for p in a + 1..b {
            let t = d.slot_chord(p);
            if alive >> t & 1 == 0 || done >> t & 1 == 1 {
                continue;
            }
            // first endpoint of t met along the arc goes over
            set(t, p, &mut out);
            done |= 1 << t;
        }
        alive &= !done;
    }
    for p in 0..len {
        let t = d.slot_chord(p);
        if alive >> t & 1 == 1 {
            set(t, p, &mut out);
            alive &= !(1 << t);
        }
    }
    out.sort_unstable();
    out
}
