//! Fixed inputs shared by the benchmarks.

use pseudodiagram::PseudoDiagram;

pub const TREFOIL_SHADOW: &str = "P1+P2-P3+P1+P2-P3+";

/// Fourteen-chord planar shadow with deletion number 10.
pub const Y_SHADOW: &str =
    "P1+P2+P3+P4-P2+P5+P4-P3+P6+P7-P8+P9-P10+P11-P12+P13-P5+P1+P14+P6+P7-P8+P9-P10+P11-P12+P13-P14+";

/// An unknot diagram that greedy simplification leaves at eight crossings.
pub const HARD_UNKNOT: &str = "O1+O2-O3-O4+O5+U1+O6-U3-O7+U5+O8-U6-U2-U7+U4+U8-";

pub fn diagram(code: &str) -> PseudoDiagram {
    code.parse().expect("fixture parses")
}
