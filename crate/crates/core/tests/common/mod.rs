#![allow(dead_code)]

use std::collections::BTreeMap;

use pseudodiagram::PseudoDiagram;

/// A data file of `key: value` lines with `#` comments.
pub struct Golden {
    pub fields: BTreeMap<String, String>,
}

impl Golden {
    pub fn load(name: &str) -> Golden {
        let path = format!("{}/data/{name}", env!("CARGO_MANIFEST_DIR"));
        let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"));
        let fields = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(|l| {
                let (k, v) = l.split_once(':').unwrap_or_else(|| panic!("{path}: bad line {l}"));
                (k.trim().to_string(), v.trim().to_string())
            })
            .collect();
        Golden { fields }
    }

    pub fn diagram(&self) -> PseudoDiagram {
        self.fields["code"].parse().unwrap()
    }

    pub fn number(&self, key: &str) -> usize {
        self.fields[key].parse().unwrap()
    }

    /// Chord ids (zero-based) listed under `key` as one-based labels.
    pub fn chords(&self, key: &str) -> Vec<usize> {
        self.fields[key]
            .split_whitespace()
            .map(|s| s.parse::<usize>().unwrap() - 1)
            .collect()
    }
}
