//! Simple undirected graphs on at most 64 vertices.
//!
//! Adjacency rows are stored as bitmasks, one `u64` per vertex. Vertices are 0-based.

use std::fmt;

use num_bigint::BigInt;
use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256StarStar;

use crate::matrix::IntMatrix;
use crate::Error;

pub const MAX_VERTICES: usize = 64;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Graph {
    n: usize,
    rows: Vec<u64>,
}

impl Graph {
    /// Graph on `n` vertices with no edges.
    pub fn empty(n: usize) -> Result<Self, Error> {
        check_order(n)?;
        Ok(Graph {
            n,
            rows: vec![0; n],
        })
    }

    pub fn complete(n: usize) -> Result<Self, Error> {
        Ok(Graph::empty(n)?.complement())
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, Error> {
        let mut g = Graph::empty(n)?;
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidGraph(format!(
                    "edge ({u}, {v}) out of range for {n} vertices"
                )));
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("self-loop at vertex {u}")));
            }
            g.rows[u] |= 1 << v;
            g.rows[v] |= 1 << u;
        }
        Ok(g)
    }

    /// Build from a dense 0/1 matrix given as rows. Rejects asymmetric input, loops, and
    /// entries other than 0/1.
    pub fn from_adjacency(rows: &[Vec<u8>]) -> Result<Self, Error> {
        let n = rows.len();
        let mut g = Graph::empty(n)?;
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidGraph(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            for (j, &a) in row.iter().enumerate() {
                match a {
                    0 => {}
                    1 if i == j => {
                        return Err(Error::InvalidGraph(format!("nonzero diagonal at {i}")))
                    }
                    1 => g.rows[i] |= 1 << j,
                    _ => {
                        return Err(Error::InvalidGraph(format!(
                            "entry ({i}, {j}) is {a}, expected 0 or 1"
                        )))
                    }
                }
            }
        }
        for i in 0..n {
            for j in 0..i {
                if g.has_edge(i, j) != g.has_edge(j, i) {
                    return Err(Error::InvalidGraph(format!(
                        "adjacency is not symmetric at ({i}, {j})"
                    )));
                }
            }
        }
        Ok(g)
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[u64] {
        &self.rows
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.rows[u] >> v & 1 == 1
    }

    pub fn degree(&self, v: usize) -> usize {
        self.rows[v].count_ones() as usize
    }

    pub fn edge_count(&self) -> usize {
        self.rows
            .iter()
            .map(|r| r.count_ones() as usize)
            .sum::<usize>()
            / 2
    }

    pub fn complement(&self) -> Graph {
        let full = full_mask(self.n);
        let rows = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, r)| !r & full & !(1u64 << i))
            .collect();
        Graph { n: self.n, rows }
    }

    /// Relabel so that vertex `v` of `self` becomes vertex `perm[v]`.
    pub fn permute(&self, perm: &[usize]) -> Graph {
        assert_eq!(perm.len(), self.n);
        let mut rows = vec![0u64; self.n];
        for u in 0..self.n {
            let mut r = self.rows[u];
            while r != 0 {
                let v = r.trailing_zeros() as usize;
                r &= r - 1;
                rows[perm[u]] |= 1 << perm[v];
            }
        }
        Graph { n: self.n, rows }
    }

    pub fn adjacency_matrix(&self) -> IntMatrix {
        IntMatrix::from_fn(self.n, self.n, |i, j| {
            BigInt::from(self.has_edge(i, j) as u8)
        })
    }

    pub fn adjacency_i64(&self) -> Vec<Vec<i64>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.has_edge(i, j) as i64).collect())
            .collect()
    }

    /// Parse a single headerless graph6 record.
    pub fn from_graph6(text: &str) -> Result<Self, Error> {
        let bytes = text.trim_end_matches(['\n', '\r']).as_bytes();
        let err = |offset: usize, message: &str| Error::Parse {
            offset,
            message: message.to_string(),
        };
        for (i, &b) in bytes.iter().enumerate() {
            if !(63..=126).contains(&b) {
                return Err(err(
                    i,
                    &format!("byte 0x{b:02x} outside graph6 range 63..=126"),
                ));
            }
        }
        let first = *bytes.first().ok_or_else(|| err(0, "empty graph6 record"))?;
        let (n, start) = if first == 126 {
            if bytes.get(1) == Some(&126) {
                return Err(err(1, "eight-byte length form exceeds the 64-vertex limit"));
            }
            if bytes.len() < 4 {
                return Err(err(bytes.len(), "truncated length prefix"));
            }
            let n = bytes[1..4]
                .iter()
                .fold(0usize, |acc, &b| (acc << 6) | (b - 63) as usize);
            if n < 63 {
                return Err(err(0, "non-canonical long length prefix"));
            }
            (n, 4)
        } else {
            ((first - 63) as usize, 1)
        };
        if n == 0 || n > MAX_VERTICES {
            return Err(err(0, &format!("vertex count {n} outside 1..=64")));
        }
        let nbits = n * (n - 1) / 2;
        let nbytes = nbits.div_ceil(6);
        let body = &bytes[start..];
        if body.len() != nbytes {
            return Err(err(
                start + body.len().min(nbytes),
                &format!("expected {nbytes} edge bytes, found {}", body.len()),
            ));
        }
        let mut g = Graph::empty(n)?;
        let mut k = 0;
        for j in 1..n {
            for i in 0..j {
                let byte = body[k / 6] - 63;
                if byte >> (5 - k % 6) & 1 == 1 {
                    g.rows[i] |= 1 << j;
                    g.rows[j] |= 1 << i;
                }
                k += 1;
            }
        }
        if nbits % 6 != 0 {
            let last = body[nbytes - 1] - 63;
            let pad = 6 - nbits % 6;
            if last & ((1 << pad) - 1) != 0 {
                return Err(err(start + nbytes - 1, "nonzero padding bits"));
            }
        }
        Ok(g)
    }

    pub fn to_graph6(&self) -> String {
        let n = self.n;
        let mut out = Vec::new();
        if n <= 62 {
            out.push(n as u8 + 63);
        } else {
            out.push(126);
            for shift in [12, 6, 0] {
                out.push(((n >> shift) & 63) as u8 + 63);
            }
        }
        let mut acc = 0u8;
        let mut filled = 0;
        for j in 1..n {
            for i in 0..j {
                acc = (acc << 1) | self.has_edge(i, j) as u8;
                filled += 1;
                if filled == 6 {
                    out.push(acc + 63);
                    acc = 0;
                    filled = 0;
                }
            }
        }
        if filled > 0 {
            out.push((acc << (6 - filled)) + 63);
        }
        String::from_utf8(out).expect("graph6 bytes are ASCII")
    }

    /// Parse `n` lines of `n` whitespace-separated 0/1 tokens.
    pub fn from_adjacency_text(text: &str) -> Result<Self, Error> {
        let rows = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .enumerate()
            .map(|(i, line)| {
                line.split_whitespace()
                    .map(|tok| match tok {
                        "0" => Ok(0u8),
                        "1" => Ok(1u8),
                        other => Err(Error::InvalidGraph(format!(
                            "line {}: token {other:?} is not 0 or 1",
                            i + 1
                        ))),
                    })
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        Graph::from_adjacency(&rows)
    }

    pub fn to_adjacency_text(&self) -> String {
        let mut s = String::new();
        for i in 0..self.n {
            let line: Vec<&str> = (0..self.n)
                .map(|j| if self.has_edge(i, j) { "1" } else { "0" })
                .collect();
            s.push_str(&line.join(" "));
            s.push('\n');
        }
        s
    }

    /// Erdős–Rényi `G(n, 1/2)` sample.
    ///
    /// The generator is xoshiro256** seeded through SplitMix64 (`seed_from_u64`). Pairs are
    /// visited in the order `(0,1), (0,2), .., (0,n-1), (1,2), ..`; each pair consumes one
    /// 64-bit output and becomes an edge when its top bit is set.
    pub fn random(n: usize, seed: u64) -> Result<Self, Error> {
        let mut g = Graph::empty(n)?;
        let mut rng = Xoshiro256StarStar::seed_from_u64(seed);
        for i in 0..n {
            for j in i + 1..n {
                if rng.next_u64() >> 63 == 1 {
                    g.rows[i] |= 1 << j;
                    g.rows[j] |= 1 << i;
                }
            }
        }
        Ok(g)
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph({})", self.to_graph6())
    }
}

fn full_mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

fn check_order(n: usize) -> Result<(), Error> {
    if n == 0 || n > MAX_VERTICES {
        Err(Error::OutOfRange(format!(
            "vertex count {n} outside 1..={MAX_VERTICES}"
        )))
    } else {
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Straightforward graph6 encoder used as an independent reference: build the full
    /// bit string first, then chunk it.
    fn reference_graph6(n: usize, adj: &dyn Fn(usize, usize) -> bool) -> String {
        let mut bits = Vec::new();
        for j in 1..n {
            for i in 0..j {
                bits.push(adj(i, j));
            }
        }
        while bits.len() % 6 != 0 {
            bits.push(false);
        }
        let mut s = String::new();
        if n <= 62 {
            s.push((n as u8 + 63) as char);
        } else {
            s.push('~');
            s.push((((n >> 12) & 63) as u8 + 63) as char);
            s.push((((n >> 6) & 63) as u8 + 63) as char);
            s.push(((n & 63) as u8 + 63) as char);
        }
        for chunk in bits.chunks(6) {
            let v = chunk.iter().fold(0u8, |a, &b| (a << 1) | b as u8);
            s.push((v + 63) as char);
        }
        s
    }

    #[test]
    fn graph6_small_examples() {
        assert_eq!(reference_graph6(1, &|_, _| false), "@");
        assert_eq!(reference_graph6(2, &|_, _| true), "A_");
        assert_eq!(reference_graph6(2, &|_, _| false), "A?");

        let k1 = Graph::from_graph6("@").unwrap();
        assert_eq!((k1.order(), k1.edge_count()), (1, 0));
        let k2 = Graph::from_graph6("A_").unwrap();
        assert_eq!((k2.order(), k2.edge_count()), (2, 1));
        let e2 = Graph::from_graph6("A?").unwrap();
        assert_eq!((e2.order(), e2.edge_count()), (2, 0));

        assert_eq!(Graph::empty(1).unwrap().to_graph6(), "@");
        assert_eq!(Graph::complete(2).unwrap().to_graph6(), "A_");
        assert_eq!(Graph::empty(2).unwrap().to_graph6(), "A?");
    }

    #[test]
    fn graph6_matches_reference_encoder() {
        for n in [3, 5, 7, 12, 62, 63, 64] {
            for seed in 0..3 {
                let g = Graph::random(n, seed).unwrap();
                let expect = reference_graph6(n, &|i, j| g.has_edge(i, j));
                assert_eq!(g.to_graph6(), expect);
                assert_eq!(Graph::from_graph6(&expect).unwrap(), g);
            }
        }
    }

    #[test]
    fn graph6_exhaustive_roundtrip_small() {
        for n in 1..=5usize {
            let m = n * (n - 1) / 2;
            for code in 0u32..(1 << m) {
                let mut edges = Vec::new();
                let mut k = 0;
                for j in 1..n {
                    for i in 0..j {
                        if code >> k & 1 == 1 {
                            edges.push((i, j));
                        }
                        k += 1;
                    }
                }
                let g = Graph::from_edges(n, &edges).unwrap();
                assert_eq!(Graph::from_graph6(&g.to_graph6()).unwrap(), g);
            }
        }
    }

    #[test]
    fn graph6_errors_name_offsets() {
        match Graph::from_graph6("A ") {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, 1),
            other => panic!("{other:?}"),
        }
        // K_3 is "Bw"; flip a padding bit.
        assert!(Graph::from_graph6("Bw").is_ok());
        match Graph::from_graph6("Bx") {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, 1),
            other => panic!("{other:?}"),
        }
        assert!(matches!(Graph::from_graph6("C"), Err(Error::Parse { .. })));
        assert!(matches!(Graph::from_graph6("?"), Err(Error::Parse { .. })));
        assert!(matches!(Graph::from_graph6(""), Err(Error::Parse { .. })));
        assert!(matches!(Graph::from_graph6("~~"), Err(Error::Parse { .. })));
    }

    #[test]
    fn complement_basics() {
        let k2 = Graph::complete(2).unwrap();
        assert_eq!(k2.complement(), Graph::empty(2).unwrap());
        let k1 = Graph::empty(1).unwrap();
        assert_eq!(k1.complement(), k1);
        for seed in 0..20 {
            let g = Graph::random(17, seed).unwrap();
            let c = g.complement();
            assert_eq!(c.complement(), g);
            for v in 0..17 {
                assert_eq!(c.degree(v), 16 - g.degree(v));
            }
        }
        let g64 = Graph::random(64, 1).unwrap();
        assert_eq!(g64.complement().complement(), g64);
    }

    #[test]
    fn random_is_deterministic() {
        assert_eq!(Graph::random(5, 42).unwrap(), Graph::random(5, 42).unwrap());
        assert_eq!(Graph::random(1, 7).unwrap(), Graph::empty(1).unwrap());
        assert!(Graph::random(0, 1).is_err());
        assert!(Graph::random(65, 1).is_err());
    }

    #[test]
    fn random_edge_density() {
        let samples = 10_000u64;
        let total: usize = (0..samples)
            .map(|s| Graph::random(10, s).unwrap().edge_count())
            .sum();
        let mean = total as f64 / samples as f64;
        // Binomial(45, 1/2): sd 3.354, so the sample mean has sd 0.03354.
        assert!((mean - 22.5).abs() < 3.0 * 45f64.sqrt() / 2.0 / (samples as f64).sqrt());
    }

    #[test]
    fn adjacency_text_roundtrip_and_validation() {
        let g = Graph::random(9, 3).unwrap();
        assert_eq!(
            Graph::from_adjacency_text(&g.to_adjacency_text()).unwrap(),
            g
        );
        assert!(Graph::from_adjacency_text("0 1\n0 0\n").is_err());
        assert!(Graph::from_adjacency_text("1\n").is_err());
        assert!(Graph::from_adjacency_text("0 2\n2 0\n").is_err());
        assert!(Graph::from_adjacency_text("0 1 0\n1 0\n").is_err());
    }

    #[test]
    fn permute_preserves_edges() {
        let g = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let h = g.permute(&[3, 2, 1, 0]);
        assert_eq!(h, g);
        let h = g.permute(&[1, 0, 2, 3]);
        assert!(h.has_edge(1, 0) && h.has_edge(0, 2) && h.has_edge(2, 3));
    }
}
