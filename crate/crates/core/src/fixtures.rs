//! Reference graphs shipped with the crate.
//!
//! Indices are 0-based; the source matrices are transcribed row by row.

use crate::graph::Graph;
use crate::matrix::IntMatrix;

pub const DGS_16_ADJ: &str = include_str!("../fixtures/dgs16.adj");
pub const NON_DGS_9_ADJ: &str = include_str!("../fixtures/nondgs9.adj");
pub const NON_DGS_9_MATE_ADJ: &str = include_str!("../fixtures/nondgs9_mate.adj");
/// Two graph6 lines, the level, then the integer numerator of `Q`.
pub const NON_DGS_9_PAIR: &str = include_str!("../fixtures/nondgs9_pair.txt");

/// 16-vertex graph with `d_n = 2b`, `b = 3·23·29·1225550789·6442787651`, which is DGS.
pub fn example_dgs_16() -> Graph {
    Graph::from_adjacency_text(DGS_16_ADJ).expect("bundled fixture")
}

/// 9-vertex graph with SNF `[1,1,1,1,1,2,2,30,30]`, which is not DGS.
pub fn example_non_dgs_9() -> Graph {
    Graph::from_adjacency_text(NON_DGS_9_ADJ).expect("bundled fixture")
}

/// `Q^T A Q` for the level-3 matrix [`example_q_numerator`] / 3.
pub fn example_non_dgs_9_mate() -> Graph {
    Graph::from_adjacency_text(NON_DGS_9_MATE_ADJ).expect("bundled fixture")
}

pub fn example_q_level() -> u64 {
    3
}

pub fn example_q_numerator() -> IntMatrix {
    let rows: Vec<i64> = NON_DGS_9_PAIR
        .lines()
        .skip(3)
        .flat_map(|l| {
            l.split_whitespace()
                .map(|t| t.parse::<i64>().expect("bundled fixture"))
        })
        .collect();
    IntMatrix::from_i64(9, 9, &rows).expect("bundled fixture")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_parse() {
        assert_eq!(example_dgs_16().order(), 16);
        assert_eq!(example_non_dgs_9().order(), 9);
        assert_eq!(example_non_dgs_9_mate().order(), 9);
        assert_ne!(example_non_dgs_9(), example_non_dgs_9_mate());
        let mut lines = NON_DGS_9_PAIR.lines();
        assert_eq!(
            Graph::from_graph6(lines.next().unwrap()).unwrap(),
            example_non_dgs_9()
        );
        assert_eq!(
            Graph::from_graph6(lines.next().unwrap()).unwrap(),
            example_non_dgs_9_mate()
        );
        assert_eq!(example_q_numerator().rows(), 9);
    }
}
