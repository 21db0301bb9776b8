//! Generalized cospectrality: regular rational orthogonal matrices, their levels, and
//! exhaustive ground truth for small orders.
//!
//! Two graphs are generalized cospectral exactly when `Q^T A(G) Q = A(H)` for a rational
//! orthogonal `Q` with `Qe = e`. When `G` is controllable such a `Q` is unique and equals
//! `W(G)^{-T} W(H)^T`. Its level is the least `ℓ > 0` with `ℓQ` integral; `G` is DGS iff
//! every such `Q` has level 1.

use std::collections::{BTreeMap, HashMap};
use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize, Serializer};

use crate::factor::{factor_integer, Effort};
use crate::fpalg::MAX_MODULUS;
use crate::graph::Graph;
use crate::invariants::{p_main_poly, phi_p, phi_report, walk_nullity_p};
use crate::linalg::{char_poly, rational_solve, smith_normal_form, walk_matrix};
use crate::matrix::{IntMatrix, Matrix, RatMatrix};
use crate::poly::IntPoly;
use crate::Error;

/// Largest order accepted by [`enumerate_generalized_cospectral_classes`].
pub const MAX_ENUMERATION_ORDER: usize = 7;

/// Environment variable naming the directory for cached enumerations.
pub const CACHE_DIR_ENV: &str = "DGS_CACHE_DIR";

/// `Q = N / ℓ` with `ℓ` minimal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalOrthogonal {
    pub numerators: IntMatrix,
    pub level: BigInt,
}

impl RationalOrthogonal {
    /// Reduce `N / ℓ` to lowest terms. `level` must be positive.
    pub fn new(numerators: IntMatrix, level: BigInt) -> Result<Self, Error> {
        numerators.require_square()?;
        if !level.is_positive() {
            return Err(Error::OutOfRange(format!("level {level} is not positive")));
        }
        let g = numerators
            .entries()
            .iter()
            .fold(level.clone(), |acc, x| acc.gcd(x));
        Ok(RationalOrthogonal {
            numerators: numerators.map(|x| x / &g),
            level: level / g,
        })
    }

    pub fn from_rational(q: &RatMatrix) -> Result<Self, Error> {
        let level = q
            .entries()
            .iter()
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let numerators = q.map(|x| x.numer() * (&level / x.denom()));
        Self::new(numerators, level)
    }

    pub fn identity(n: usize) -> Self {
        RationalOrthogonal {
            numerators: IntMatrix::identity(n),
            level: BigInt::one(),
        }
    }

    pub fn order(&self) -> usize {
        self.numerators.rows()
    }

    pub fn to_rational(&self) -> RatMatrix {
        self.numerators
            .map(|x| num_rational::BigRational::new(x.clone(), self.level.clone()))
    }

    pub fn transpose(&self) -> Self {
        RationalOrthogonal {
            numerators: self.numerators.transpose(),
            level: self.level.clone(),
        }
    }

    /// Level 1 with entries in `{0, 1}`.
    pub fn is_permutation(&self) -> bool {
        self.level.is_one()
            && self
                .numerators
                .entries()
                .iter()
                .all(|x| x.is_zero() || x.is_one())
    }

    /// `ℓ` on the first line, then `n` rows of the integer numerator.
    pub fn parse(text: &str) -> Result<Self, Error> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let level: BigInt = lines
            .next()
            .ok_or_else(|| Error::InvalidGraph("missing level line".into()))?
            .parse()
            .map_err(|_| Error::InvalidGraph("level is not an integer".into()))?;
        let rows: Vec<Vec<BigInt>> = lines
            .map(|l| {
                l.split_whitespace()
                    .map(|t| {
                        t.parse::<BigInt>()
                            .map_err(|_| Error::InvalidGraph(format!("bad matrix entry {t:?}")))
                    })
                    .collect()
            })
            .collect::<Result<_, _>>()?;
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Dimension(format!("numerator is not {n} x {n}")));
        }
        Self::new(Matrix::from_vec(n, n, rows.concat())?, level)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{}\n", self.level);
        for i in 0..self.order() {
            let row: Vec<String> = self
                .numerators
                .row(i)
                .iter()
                .map(|x| x.to_string())
                .collect();
            s.push_str(&row.join(" "));
            s.push('\n');
        }
        s
    }
}

impl Serialize for RationalOrthogonal {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Wire {
            n: usize,
            level: String,
            numerators: Vec<Vec<String>>,
        }
        Wire {
            n: self.order(),
            level: self.level.to_string(),
            numerators: (0..self.order())
                .map(|i| {
                    self.numerators
                        .row(i)
                        .iter()
                        .map(|x| x.to_string())
                        .collect()
                })
                .collect(),
        }
        .serialize(s)
    }
}

/// Characteristic polynomials of a graph and of its complement.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SpectrumKey {
    pub charpoly_g: IntPoly,
    pub charpoly_complement: IntPoly,
}

impl std::fmt::Display for SpectrumKey {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.charpoly_g, self.charpoly_complement)
    }
}

impl Serialize for SpectrumKey {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq([
            self.charpoly_g.to_string(),
            self.charpoly_complement.to_string(),
        ])
    }
}

pub fn spectrum_key(g: &Graph) -> SpectrumKey {
    let cp = |h: &Graph| char_poly(&h.adjacency_matrix()).expect("adjacency matrix is square");
    SpectrumKey {
        charpoly_g: cp(g),
        charpoly_complement: cp(&g.complement()),
    }
}

/// `Q^T Q = I`, `Qe = e` and `Q^T A(G) Q = A(H)`, all exactly.
pub fn verify_regular_orthogonal(q: &RationalOrthogonal, g: &Graph, h: &Graph) -> bool {
    let n = q.order();
    if g.order() != n || h.order() != n {
        return false;
    }
    // With Q = N/ℓ: N^T N = ℓ^2 I, N e = ℓ e, N^T A N = ℓ^2 A(H).
    let nm = &q.numerators;
    let nt = nm.transpose();
    let l2 = &q.level * &q.level;
    let Ok(ntn) = nt.mul(nm) else { return false };
    if ntn != IntMatrix::identity(n).map(|x| x * &l2) {
        return false;
    }
    let e = vec![BigInt::one(); n];
    if nm.mul_vec(&e).iter().any(|x| *x != q.level) {
        return false;
    }
    let conj = nt
        .mul(&g.adjacency_matrix())
        .and_then(|m| m.mul(nm))
        .expect("dimensions checked");
    conj == h.adjacency_matrix().map(|x| x * &l2)
}

/// The unique regular rational orthogonal `Q` with `Q^T A(G) Q = A(H)`.
pub fn recover_q(g: &Graph, h: &Graph) -> Result<RationalOrthogonal, Error> {
    if g.order() != h.order() || spectrum_key(g) != spectrum_key(h) {
        return Err(Error::NotCospectral);
    }
    let wg = walk_matrix(g);
    let wh = walk_matrix(h);
    let x = match rational_solve(&wg.transpose(), &wh.transpose()) {
        Ok(x) => x,
        Err(Error::Singular) => return Err(Error::NotControllable),
        Err(e) => return Err(e),
    };
    let q = RationalOrthogonal::from_rational(&x)?;
    if !verify_regular_orthogonal(&q, g, h) {
        return Err(Error::Invariant(
            "recovered Q fails verification for generalized cospectral graphs".into(),
        ));
    }
    let qtw = q.numerators.transpose().mul(&wg)?;
    if qtw != wh.map(|x| x * &q.level) {
        return Err(Error::Invariant("Q^T W(G) != W(H)".into()));
    }
    Ok(q)
}

/// One isomorphism class inside a generalized-spectrum group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IsoClass {
    #[serde(serialize_with = "ser_graph6")]
    pub graph: Graph,
    /// Number of labeled graphs in the class, `n! / |Aut|`.
    pub labeled_count: u64,
    pub controllable: bool,
}

fn ser_graph6<S: Serializer>(g: &Graph, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&g.to_graph6())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CospectralGroup {
    pub key: SpectrumKey,
    pub classes: Vec<IsoClass>,
}

/// All graphs of one order, grouped by generalized spectrum.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CospectralPartition {
    pub n: usize,
    pub groups: Vec<CospectralGroup>,
    #[serde(skip)]
    index: HashMap<SpectrumKey, usize>,
}

impl CospectralPartition {
    fn from_groups(n: usize, groups: Vec<CospectralGroup>) -> Self {
        let index = groups
            .iter()
            .enumerate()
            .map(|(i, g)| (g.key.clone(), i))
            .collect();
        CospectralPartition { n, groups, index }
    }

    pub fn group_of(&self, g: &Graph) -> Option<&CospectralGroup> {
        self.index.get(&spectrum_key(g)).map(|&i| &self.groups[i])
    }

    /// Ground truth: `g` is DGS iff its group holds a single isomorphism class.
    pub fn is_dgs(&self, g: &Graph) -> Option<bool> {
        self.group_of(g).map(|grp| grp.classes.len() == 1)
    }

    pub fn class_count(&self) -> usize {
        self.groups.iter().map(|g| g.classes.len()).sum()
    }

    pub fn labeled_count(&self) -> u64 {
        self.groups
            .iter()
            .flat_map(|g| &g.classes)
            .map(|c| c.labeled_count)
            .sum()
    }

    /// Groups with more than one isomorphism class.
    pub fn mate_groups(&self) -> impl Iterator<Item = &CospectralGroup> {
        self.groups.iter().filter(|g| g.classes.len() > 1)
    }

    /// Ordered pairs `(G, H)` of non-isomorphic mates with `G` controllable.
    pub fn controllable_mate_pairs(&self) -> Vec<(Graph, Graph)> {
        let mut out = Vec::new();
        for grp in self.mate_groups() {
            for a in grp.classes.iter().filter(|c| c.controllable) {
                for b in &grp.classes {
                    if a.graph != b.graph {
                        out.push((a.graph.clone(), b.graph.clone()));
                    }
                }
            }
        }
        out
    }
}

/// Canonical code and automorphism count.
///
/// Vertices are ordered by degree and the code is minimized over all orderings that keep
/// degrees sorted; every isomorphism onto the minimizing labeling is such an ordering, so
/// the number of minimizers is `|Aut(g)|`.
fn canonical(g: &Graph) -> (u64, u64) {
    let n = g.order();
    let mut verts: Vec<usize> = (0..n).collect();
    verts.sort_by_key(|&v| g.degree(v));
    let mut blocks: Vec<(usize, usize)> = Vec::new();
    let mut start = 0;
    for i in 1..=n {
        if i == n || g.degree(verts[i]) != g.degree(verts[start]) {
            blocks.push((start, i));
            start = i;
        }
    }
    let mut best = u64::MAX;
    let mut count = 0u64;
    let mut order = verts.clone();
    permute_blocks(g, &blocks, 0, &mut order, &mut best, &mut count);
    (best, count)
}

fn permute_blocks(
    g: &Graph,
    blocks: &[(usize, usize)],
    b: usize,
    order: &mut Vec<usize>,
    best: &mut u64,
    count: &mut u64,
) {
    if b == blocks.len() {
        let n = order.len();
        let mut code = 0u64;
        let mut bit = 0;
        for j in 1..n {
            for i in 0..j {
                if g.has_edge(order[i], order[j]) {
                    code |= 1 << bit;
                }
                bit += 1;
            }
        }
        match code.cmp(best) {
            std::cmp::Ordering::Less => {
                *best = code;
                *count = 1;
            }
            std::cmp::Ordering::Equal => *count += 1,
            std::cmp::Ordering::Greater => {}
        }
        return;
    }
    let (lo, hi) = blocks[b];
    heap_permutations(order, lo, hi, &mut |ord| {
        permute_blocks(g, blocks, b + 1, ord, best, count)
    });
}

/// Visit every permutation of `v[lo..hi]` (Heap's algorithm), restoring nothing.
fn heap_permutations(v: &mut Vec<usize>, lo: usize, hi: usize, f: &mut dyn FnMut(&mut Vec<usize>)) {
    let k = hi - lo;
    let mut c = vec![0usize; k];
    f(v);
    let mut i = 1;
    while i < k {
        if c[i] < i {
            if i % 2 == 0 {
                v.swap(lo, lo + i);
            } else {
                v.swap(lo + c[i], lo + i);
            }
            f(v);
            c[i] += 1;
            i = 1;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

fn graph_from_code(n: usize, code: u64) -> Graph {
    let mut edges = Vec::new();
    let mut bit = 0;
    for j in 1..n {
        for i in 0..j {
            if code >> bit & 1 == 1 {
                edges.push((i, j));
            }
            bit += 1;
        }
    }
    Graph::from_edges(n, &edges).expect("valid code")
}

/// One representative per isomorphism class, with automorphism counts.
///
/// Every graph on `n` vertices is a graph on `n - 1` vertices plus one vertex, so the
/// classes of order `n` are the canonical forms of all one-vertex extensions.
fn isomorphism_classes(n: usize) -> Vec<(Graph, u64)> {
    let mut level: BTreeMap<u64, u64> = BTreeMap::new();
    level.insert(0, 1);
    for m in 2..=n {
        let mut next = BTreeMap::new();
        for &code in level.keys() {
            let base = graph_from_code(m - 1, code);
            for mask in 0u64..(1 << (m - 1)) {
                let mut edges: Vec<(usize, usize)> = (0..m - 1)
                    .flat_map(|j| (0..j).map(move |i| (i, j)))
                    .filter(|&(i, j)| base.has_edge(i, j))
                    .collect();
                edges.extend(
                    (0..m - 1)
                        .filter(|v| mask >> v & 1 == 1)
                        .map(|v| (v, m - 1)),
                );
                let g = Graph::from_edges(m, &edges).expect("valid edges");
                let (c, aut) = canonical(&g);
                next.insert(c, aut);
            }
        }
        level = next;
    }
    if n == 0 {
        return Vec::new();
    }
    level
        .into_iter()
        .map(|(code, aut)| (graph_from_code(n, code), aut))
        .collect()
}

fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

#[derive(Serialize, Deserialize)]
struct CacheFile {
    n: usize,
    /// Each group lists graph6 codes of its class representatives.
    groups: Vec<Vec<String>>,
}

fn cache_path(dir: &Path, n: usize) -> PathBuf {
    dir.join(format!("classes-n{n}.json"))
}

/// Partition every graph of order `n <= 7` by generalized spectrum.
///
/// When the directory named by [`CACHE_DIR_ENV`] exists, results are read from and written
/// to `classes-n{n}.json` there. A cache entry is used only if it accounts for all
/// `2^(n(n-1)/2)` labeled graphs.
pub fn enumerate_generalized_cospectral_classes(n: usize) -> Result<CospectralPartition, Error> {
    let dir = std::env::var_os(CACHE_DIR_ENV).map(PathBuf::from);
    enumerate_with_cache(n, dir.as_deref())
}

pub fn enumerate_with_cache(
    n: usize,
    cache_dir: Option<&Path>,
) -> Result<CospectralPartition, Error> {
    if n == 0 || n > MAX_ENUMERATION_ORDER {
        return Err(Error::OutOfRange(format!(
            "enumeration supports 1 <= n <= {MAX_ENUMERATION_ORDER}, got {n}"
        )));
    }
    if let Some(dir) = cache_dir {
        if let Some(p) = load_cache(&cache_path(dir, n), n) {
            return Ok(p);
        }
    }
    let classes = isomorphism_classes(n);
    let partition = build_partition(n, classes.into_iter().map(|(g, aut)| (g, Some(aut))))?;
    if let Some(dir) = cache_dir {
        let file = CacheFile {
            n,
            groups: partition
                .groups
                .iter()
                .map(|g| g.classes.iter().map(|c| c.graph.to_graph6()).collect())
                .collect(),
        };
        std::fs::create_dir_all(dir)?;
        let json = serde_json::to_string(&file).expect("cache serializes");
        std::fs::write(cache_path(dir, n), json)?;
    }
    Ok(partition)
}

fn build_partition(
    n: usize,
    classes: impl Iterator<Item = (Graph, Option<u64>)>,
) -> Result<CospectralPartition, Error> {
    let mut groups: BTreeMap<SpectrumKey, Vec<IsoClass>> = BTreeMap::new();
    for (g, aut) in classes {
        let aut = aut.unwrap_or_else(|| canonical(&g).1);
        let key = spectrum_key(&g);
        let controllable = smith_normal_form(&walk_matrix(&g))?.det_sign != 0;
        groups.entry(key).or_default().push(IsoClass {
            labeled_count: factorial(n) / aut,
            controllable,
            graph: g,
        });
    }
    let groups: Vec<CospectralGroup> = groups
        .into_iter()
        .map(|(key, classes)| CospectralGroup { key, classes })
        .collect();
    let partition = CospectralPartition::from_groups(n, groups);
    let expected = 1u64 << (n * (n - 1) / 2);
    if partition.labeled_count() != expected {
        return Err(Error::Invariant(format!(
            "classes cover {} labeled graphs, expected {expected}",
            partition.labeled_count()
        )));
    }
    Ok(partition)
}

fn load_cache(path: &Path, n: usize) -> Option<CospectralPartition> {
    let text = std::fs::read_to_string(path).ok()?;
    let file: CacheFile = serde_json::from_str(&text).ok()?;
    if file.n != n {
        return None;
    }
    let mut classes = Vec::new();
    for code in file.groups.iter().flatten() {
        let g = Graph::from_graph6(code).ok()?;
        if g.order() != n {
            return None;
        }
        classes.push((g, None));
    }
    build_partition(n, classes.into_iter()).ok()
}

/// Two graphs, the `Q` relating them, read from the pair fixture format.
#[derive(Clone, Debug)]
pub struct PairFixture {
    pub g: Graph,
    pub h: Graph,
    pub q: RationalOrthogonal,
}

/// Two graph6 lines, then `ℓ`, then the `n` rows of the integer numerator `N = ℓQ`.
pub fn parse_pair_fixture(text: &str) -> Result<PairFixture, Error> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let mut next_graph = || -> Result<Graph, Error> {
        let line = lines
            .next()
            .ok_or_else(|| Error::InvalidGraph("pair fixture needs two graph6 lines".into()))?;
        Graph::from_graph6(line.trim())
    };
    let g = next_graph()?;
    let h = next_graph()?;
    let rest: Vec<&str> = lines.collect();
    let q = RationalOrthogonal::parse(&rest.join("\n"))?;
    if q.order() != g.order() || h.order() != g.order() {
        return Err(Error::Dimension("pair fixture orders disagree".into()));
    }
    Ok(PairFixture { g, h, q })
}

/// Per-prime comparison of `G` and `H` for an odd prime `p | d_n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrimeAudit {
    pub p: u64,
    pub nullity_g: usize,
    pub nullity_h: usize,
    /// `deg sfp(Φ_p(G)) = nullity_p W(G)`.
    pub nullity_condition_g: bool,
    pub m_p_equal: bool,
    pub divides_level: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairAudit {
    pub g: String,
    pub h: String,
    pub q: RationalOrthogonal,
    #[serde(serialize_with = "ser_bigint")]
    pub level: BigInt,
    #[serde(serialize_with = "ser_bigint")]
    pub dn: BigInt,
    pub dn_squarefree: Option<bool>,
    pub level_divides_dn: bool,
    pub dn_is_2_mod_4: bool,
    pub level_odd: bool,
    pub phi_equal_small_primes: bool,
    pub primes: Vec<PrimeAudit>,
}

fn ser_bigint<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AuditReport {
    pub pairs: Vec<PairAudit>,
}

/// Recover `Q` for each pair and check every proven relation between its level, `d_n` and
/// the per-prime invariants. Any contradiction is returned as [`Error::Invariant`].
pub fn level_parity_audit(pairs: &[(Graph, Graph)]) -> Result<AuditReport, Error> {
    let mut out = Vec::new();
    for (g, h) in pairs {
        out.push(audit_pair(g, h)?);
    }
    Ok(AuditReport { pairs: out })
}

fn audit_pair(g: &Graph, h: &Graph) -> Result<PairAudit, Error> {
    let q = recover_q(g, h)?;
    let snf = smith_normal_form(&walk_matrix(g))?;
    let dn = snf.last().expect("n >= 1").clone();
    let level = q.level.clone();
    let fail = |msg: String| {
        Err(Error::Invariant(format!(
            "{} / {}: {msg}",
            g.to_graph6(),
            h.to_graph6()
        )))
    };

    let level_divides_dn = dn.is_multiple_of(&level);
    if !level_divides_dn {
        return fail(format!("level {level} does not divide d_n = {dn}"));
    }
    let dn_is_2_mod_4 = &dn % 4u32 == BigInt::from(2);
    let level_odd = level.is_odd();
    if dn_is_2_mod_4 && !level_odd {
        return fail(format!("d_n = 2 (mod 4) but level {level} is even"));
    }
    let mut phi_equal = true;
    for p in [3u64, 5, 7] {
        if phi_p(g, p)? != phi_p(h, p)? {
            phi_equal = false;
        }
    }
    if !phi_equal {
        return fail("Φ_p differs between generalized cospectral graphs".into());
    }

    let fact = factor_integer(dn.magnitude(), Effort::Default)?;
    let dn_squarefree = fact.is_squarefree();
    let mut primes = Vec::new();
    for (p, e) in &fact.prime_powers {
        let Some(p) = num_traits::ToPrimitive::to_u64(p).filter(|&p| p % 2 == 1 && p < MAX_MODULUS)
        else {
            continue;
        };
        let report = phi_report(g, p)?;
        let nullity_h = walk_nullity_p(h, p)?;
        let m_p_equal = p_main_poly(g, p)? == p_main_poly(h, p)?;
        let divides_level = level.is_multiple_of(&BigInt::from(p));
        let audit = PrimeAudit {
            p,
            nullity_g: report.nullity,
            nullity_h,
            nullity_condition_g: report.condition_holds,
            m_p_equal,
            divides_level,
        };
        if *e == 1 && report.condition_holds && divides_level {
            return fail(format!("p = {p} exactly divides d_n, satisfies the nullity condition, yet divides the level"));
        }
        if dn_squarefree == Some(true) {
            if report.condition_holds && !(nullity_h == report.nullity && m_p_equal) {
                return fail(format!(
                    "p = {p}: nullity condition holds but H has different nullity or m_p"
                ));
            }
            if report.nullity == 2 {
                let same = nullity_h == 2 && m_p_equal;
                let drop = nullity_h == 1 && !m_p_equal;
                if !(same || drop) {
                    return fail(format!(
                        "p = {p}: nullity 2 for G but (nullity {nullity_h}, m_p equal = {m_p_equal}) for H"
                    ));
                }
            }
        }
        primes.push(audit);
    }
    Ok(PairAudit {
        g: g.to_graph6(),
        h: h.to_graph6(),
        q,
        level,
        dn,
        dn_squarefree,
        level_divides_dn,
        dn_is_2_mod_4,
        level_odd,
        phi_equal_small_primes: phi_equal,
        primes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn spectrum_keys_of_small_graphs() {
        let k1 = spectrum_key(&Graph::empty(1).unwrap());
        assert_eq!(k1.charpoly_g.to_string(), "x");
        assert_eq!(k1.charpoly_complement.to_string(), "x");
        let k2 = spectrum_key(&Graph::complete(2).unwrap());
        assert_eq!(k2.charpoly_g.to_string(), "x^2-1");
        assert_eq!(k2.charpoly_complement.to_string(), "x^2");
    }

    #[test]
    fn printed_q_verifies() {
        let g = fixtures::example_non_dgs_9();
        let h = fixtures::example_non_dgs_9_mate();
        let q = RationalOrthogonal::new(fixtures::example_q_numerator(), BigInt::from(3)).unwrap();
        assert_eq!(q.level, BigInt::from(3));
        assert!(verify_regular_orthogonal(&q, &g, &h));
        assert!(!verify_regular_orthogonal(&q, &g, &g));
        assert_eq!(spectrum_key(&g), spectrum_key(&h));
        assert_eq!(recover_q(&g, &h).unwrap(), q);
        assert_eq!(recover_q(&h, &g).unwrap(), q.transpose());
    }

    #[test]
    fn identity_and_permutations() {
        let g = fixtures::example_non_dgs_9();
        let id = RationalOrthogonal::identity(9);
        assert!(verify_regular_orthogonal(&id, &g, &g));
        assert_eq!(recover_q(&g, &g).unwrap(), id);
        let perm = [3, 1, 4, 0, 8, 5, 2, 7, 6];
        let h = g.permute(&perm);
        let q = recover_q(&g, &h).unwrap();
        assert!(q.is_permutation());
    }

    #[test]
    fn recover_q_rejects_bad_inputs() {
        let g = fixtures::example_non_dgs_9();
        let other = Graph::random(9, 1).unwrap();
        assert!(matches!(recover_q(&g, &other), Err(Error::NotCospectral)));
        let c4 = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        assert!(matches!(recover_q(&c4, &c4), Err(Error::NotControllable)));
    }

    #[test]
    fn class_counts_match_known_values() {
        // Numbers of unlabeled graphs on 1..=6 vertices.
        for (n, classes) in [(1, 1), (2, 2), (3, 4), (4, 11), (5, 34), (6, 156)] {
            let p = enumerate_with_cache(n, None).unwrap();
            assert_eq!(p.class_count(), classes, "n = {n}");
        }
        let p2 = enumerate_with_cache(2, None).unwrap();
        assert!(p2.groups.iter().all(|g| g.classes.len() == 1));
        assert!(enumerate_with_cache(8, None).is_err());
    }

    #[test]
    fn cache_roundtrip() {
        let dir = std::env::temp_dir().join(format!("dgs-cache-test-{}", std::process::id()));
        let fresh = enumerate_with_cache(5, Some(&dir)).unwrap();
        assert!(cache_path(&dir, 5).exists());
        let cached = enumerate_with_cache(5, Some(&dir)).unwrap();
        assert_eq!(fresh.groups, cached.groups);
        std::fs::write(cache_path(&dir, 5), "{\"n\":5,\"groups\":[[\"D??\"]]}").unwrap();
        assert_eq!(
            enumerate_with_cache(5, Some(&dir)).unwrap().groups,
            fresh.groups
        );
        std::fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn pair_fixture_audit() {
        let pair = parse_pair_fixture(fixtures::NON_DGS_9_PAIR).unwrap();
        assert!(verify_regular_orthogonal(&pair.q, &pair.g, &pair.h));
        let report = level_parity_audit(&[(pair.g.clone(), pair.h.clone())]).unwrap();
        let a = &report.pairs[0];
        assert_eq!(a.level, BigInt::from(3));
        assert_eq!(a.dn, BigInt::from(30));
        assert!(a.level_odd && a.dn_is_2_mod_4 && a.level_divides_dn);
        let p3 = a.primes.iter().find(|x| x.p == 3).unwrap();
        assert!(!p3.nullity_condition_g && p3.divides_level);
        assert_eq!((p3.nullity_g, p3.nullity_h, p3.m_p_equal), (2, 1, false));
        let p5 = a.primes.iter().find(|x| x.p == 5).unwrap();
        assert!(p5.nullity_condition_g && !p5.divides_level);
        assert_eq!((p5.nullity_g, p5.nullity_h, p5.m_p_equal), (2, 2, true));

        let g = pair.g;
        let trivial = level_parity_audit(&[(g.clone(), g)]).unwrap();
        assert!(trivial.pairs[0].level.is_one());
    }
}
