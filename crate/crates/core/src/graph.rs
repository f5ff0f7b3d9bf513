//! Generalised Petersen graphs: construction, metrics and structure.
//!
//! Vertices get canonical ids in `[0, 2n)`: outer `a_i` is `i`, inner `b_i`
//! is `n + i`. All index arithmetic is reduced mod `n`.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Which cycle a vertex lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Ring {
    Outer,
    Inner,
}

/// A vertex of `GP(n, k)`, written `a<i>` (outer) or `b<i>` (inner).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Vertex {
    pub ring: Ring,
    pub index: u32,
}

impl Vertex {
    pub fn outer(index: i64, n: u32) -> Self {
        Vertex {
            ring: Ring::Outer,
            index: index.rem_euclid(n as i64) as u32,
        }
    }

    pub fn inner(index: i64, n: u32) -> Self {
        Vertex {
            ring: Ring::Inner,
            index: index.rem_euclid(n as i64) as u32,
        }
    }

    /// Canonical id in `[0, 2n)`: outer vertices first.
    #[inline]
    pub fn id(&self, n: u32) -> u32 {
        match self.ring {
            Ring::Outer => self.index,
            Ring::Inner => n + self.index,
        }
    }

    #[inline]
    pub fn from_id(id: u32, n: u32) -> Self {
        if id < n {
            Vertex {
                ring: Ring::Outer,
                index: id,
            }
        } else {
            Vertex {
                ring: Ring::Inner,
                index: id - n,
            }
        }
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.ring {
            Ring::Outer => write!(f, "a{}", self.index),
            Ring::Inner => write!(f, "b{}", self.index),
        }
    }
}

impl FromStr for Vertex {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (ring, digits) = match s.as_bytes().first() {
            Some(b'a') => (Ring::Outer, &s[1..]),
            Some(b'b') => (Ring::Inner, &s[1..]),
            _ => {
                return Err(Error::Param(format!(
                    "vertex must look like a3 or b17, got {s:?}"
                )))
            }
        };
        let index: u32 = digits
            .parse()
            .map_err(|_| Error::Param(format!("bad vertex index in {s:?}")))?;
        Ok(Vertex { ring, index })
    }
}

/// Rotation automorphism: `a_j -> a_{j+t}`, `b_j -> b_{j+t}`.
#[inline]
pub fn rotate(v: Vertex, t: i64, n: u32) -> Vertex {
    Vertex {
        ring: v.ring,
        index: (v.index as i64 + t).rem_euclid(n as i64) as u32,
    }
}

/// Reflection automorphism: `a_j -> a_{-j}`, `b_j -> b_{-j}`.
#[inline]
pub fn reflect(v: Vertex, n: u32) -> Vertex {
    Vertex {
        ring: v.ring,
        index: (n - v.index % n) % n,
    }
}

/// Membership data for the `n = 7k/i` family: the divisor `i` and whether
/// the pair is one of the three small exceptions below the `n >= 42` cutoff.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyParams {
    pub n: u32,
    pub k: u32,
    pub divisor: u32,
    pub exception: bool,
}

const FAMILY_EXCEPTIONS: [(u32, u32); 3] = [(28, 8), (35, 10), (35, 15)];

/// Arithmetic conditions under which `GP(n,k)` can have girth 7. The tags
/// are necessary bookkeeping only (`GP(7,1)` matches `SevenKOverI` yet has
/// girth 4), so girth is always computed, never inferred from them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Girth7Condition {
    /// `i*n = 7k` for some `i` in `{1,2,3}`.
    SevenKOverI,
    /// `k = 4`.
    KEqualsFour,
    /// `n = 2k + 3`.
    TwoKPlusThree,
    /// `n = 3k + 2` or `n = 3k - 2`.
    ThreeKPlusMinusTwo,
}

/// Which arithmetic girth-7 conditions `(n, k)` matches.
pub fn girth7_conditions(n: u32, k: u32) -> Vec<Girth7Condition> {
    let mut tags = Vec::new();
    if (1..=3).any(|i| i * n == 7 * k) {
        tags.push(Girth7Condition::SevenKOverI);
    }
    if k == 4 {
        tags.push(Girth7Condition::KEqualsFour);
    }
    if n == 2 * k + 3 {
        tags.push(Girth7Condition::TwoKPlusThree);
    }
    if n == 3 * k + 2 || (3 * k >= 2 && n == 3 * k - 2) {
        tags.push(Girth7Condition::ThreeKPlusMinusTwo);
    }
    tags
}

/// `Some(FamilyParams)` iff `i*n = 7k` for some `i` in `{1,2,3}` and either
/// `n >= 42` or `(n,k)` is one of `(28,8)`, `(35,10)`, `(35,15)`.
pub fn family_membership(n: u32, k: u32) -> Option<FamilyParams> {
    let divisor = (1..=3).find(|i| i * n == 7 * k)?;
    let exception = FAMILY_EXCEPTIONS.contains(&(n, k));
    if n >= 42 || exception {
        Some(FamilyParams {
            n,
            k,
            divisor,
            exception,
        })
    } else {
        None
    }
}

/// An immutable `GP(n, k)` with per-source BFS distances cached on demand.
pub struct GPGraph {
    n: u32,
    k: u32,
    /// `neighbours[v]` holds the exactly three neighbours of `v`, ascending.
    neighbours: Vec<[u32; 3]>,
    /// One distance row per source vertex, filled lazily (compute-then-publish).
    dist_rows: Vec<OnceLock<Box<[u16]>>>,
}

impl GPGraph {
    /// Builds `GP(n, k)`. Requires `n >= 5` and `1 <= k < n/2`.
    pub fn new(n: u32, k: u32) -> Result<Self> {
        if n < 5 {
            return Err(Error::Param(format!("n must be >= 5, got {n}")));
        }
        if k < 1 || 2 * k >= n {
            return Err(Error::Param(format!(
                "k must satisfy 1 <= k < n/2, got k={k}, n={n}"
            )));
        }
        let size = 2 * n as usize;
        let mut nbrs = vec![[0u32; 3]; size];
        for i in 0..n {
            let a = i;
            let b = n + i;
            let mut an = [(i + 1) % n, (i + n - 1) % n, b];
            let mut bn = [a, n + (i + k) % n, n + (i + n - k) % n];
            an.sort_unstable();
            bn.sort_unstable();
            nbrs[a as usize] = an;
            nbrs[b as usize] = bn;
        }
        let dist_rows = (0..size).map(|_| OnceLock::new()).collect();
        Ok(GPGraph {
            n,
            k,
            neighbours: nbrs,
            dist_rows,
        })
    }

    #[inline]
    pub fn n(&self) -> u32 {
        self.n
    }

    #[inline]
    pub fn k(&self) -> u32 {
        self.k
    }

    /// Number of vertices, `2n`.
    #[inline]
    pub fn order(&self) -> u32 {
        2 * self.n
    }

    /// Neighbours of `v` by canonical id, ascending.
    #[inline]
    pub fn neighbours_of_id(&self, v: u32) -> &[u32; 3] {
        &self.neighbours[v as usize]
    }

    pub fn neighbours_of(&self, v: Vertex) -> [Vertex; 3] {
        self.neighbours[v.id(self.n) as usize].map(|id| Vertex::from_id(id, self.n))
    }

    #[inline]
    pub fn adjacent_ids(&self, u: u32, v: u32) -> bool {
        self.neighbours[u as usize].contains(&v)
    }

    pub fn adjacent(&self, u: Vertex, v: Vertex) -> bool {
        self.adjacent_ids(u.id(self.n), v.id(self.n))
    }

    /// All `3n` edges as id pairs `(min, max)`, in canonical order.
    pub fn edges(&self) -> Vec<(u32, u32)> {
        let mut out = Vec::with_capacity(3 * self.n as usize);
        for u in 0..self.order() {
            for &w in self.neighbours_of_id(u) {
                if u < w {
                    out.push((u, w));
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// The BFS distance row from `src`, cached after the first call.
    pub fn distance_row(&self, src: u32) -> &[u16] {
        self.dist_rows[src as usize].get_or_init(|| self.bfs_from(src))
    }

    fn bfs_from(&self, src: u32) -> Box<[u16]> {
        let size = self.order() as usize;
        let mut dist = vec![u16::MAX; size];
        dist[src as usize] = 0;
        let mut queue = Vec::with_capacity(size);
        queue.push(src);
        let mut head = 0;
        while head < queue.len() {
            let u = queue[head];
            head += 1;
            let du = dist[u as usize];
            for &w in self.neighbours_of_id(u) {
                if dist[w as usize] == u16::MAX {
                    dist[w as usize] = du + 1;
                    queue.push(w);
                }
            }
        }
        dist.into_boxed_slice()
    }

    #[inline]
    pub fn distance_ids(&self, u: u32, v: u32) -> u16 {
        self.distance_row(u)[v as usize]
    }

    /// Shortest-path distance between two vertices.
    pub fn distance(&self, u: Vertex, v: Vertex) -> u32 {
        self.distance_ids(u.id(self.n), v.id(self.n)) as u32
    }

    /// Length of a shortest cycle. For GP graphs this is always in `[3, 8]`.
    ///
    /// A BFS from every vertex: any non-tree edge seen from root `s` closes
    /// a cycle of length `d(s,u) + d(s,v) + 1`; the minimum over all roots
    /// and edges is exact for unweighted graphs.
    pub fn girth(&self) -> u32 {
        let size = self.order() as usize;
        let mut best = u32::MAX;
        let mut dist = vec![u16::MAX; size];
        let mut parent = vec![u32::MAX; size];
        let mut queue = Vec::with_capacity(size);
        for s in 0..self.order() {
            dist.fill(u16::MAX);
            queue.clear();
            dist[s as usize] = 0;
            parent[s as usize] = u32::MAX;
            queue.push(s);
            let mut head = 0;
            while head < queue.len() {
                let u = queue[head];
                head += 1;
                let du = dist[u as usize] as u32;
                if 2 * du + 1 >= best {
                    break;
                }
                for &w in self.neighbours_of_id(u) {
                    if dist[w as usize] == u16::MAX {
                        dist[w as usize] = (du + 1) as u16;
                        parent[w as usize] = u;
                        queue.push(w);
                    } else if parent[u as usize] != w && parent[w as usize] != u {
                        best = best.min(du + dist[w as usize] as u32 + 1);
                    }
                }
            }
        }
        best
    }

    /// Family membership of this graph's parameters.
    pub fn family(&self) -> Option<FamilyParams> {
        family_membership(self.n, self.k)
    }

    pub fn require_family(&self) -> Result<FamilyParams> {
        self.family().ok_or(Error::Family {
            n: self.n,
            k: self.k,
        })
    }
}

impl fmt::Debug for GPGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GP({},{})", self.n, self.k)
    }
}

/// One slot of a [`NeighbourhoodTree`] layer: the vertex it holds and the
/// index of its parent slot in the previous layer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TreeSlot {
    pub vertex: Vertex,
    pub parent: u32,
}

/// A depth-4 layered BFS tree around a root, mirroring the family's
/// distance-4 structure: slots at layer `d` hold vertices at true distance
/// `d`, and a vertex reached from two layer-`(d-1)` parents occupies two
/// slots. For family graphs the only such repeats are four pairs at depth 4.
#[derive(Debug, Clone)]
pub struct NeighbourhoodTree {
    pub root: Vertex,
    /// `layers[0]` is the root alone; `layers[d]` holds depth-`d` slots.
    pub layers: Vec<Vec<TreeSlot>>,
    /// Depth-4 slot pairs holding the same vertex: `(vertex, slot, slot)`.
    pub coincidences: Vec<(Vertex, u32, u32)>,
    /// For inner roots `b_i`: the edge between the depth-3 vertices
    /// `b_{i+3k}` and `b_{i-3k}` (drawn dotted in the family picture).
    pub dotted_edge: Option<(Vertex, Vertex)>,
}

impl NeighbourhoodTree {
    /// Vertices occupying more than one slot at depths 1..=3 (empty for
    /// family graphs), reported as (vertex, depth) pairs.
    pub fn shallow_coincidences(&self) -> Vec<(Vertex, usize)> {
        let mut out = Vec::new();
        for depth in 1..=3.min(self.layers.len() - 1) {
            let mut seen = Vec::new();
            for slot in &self.layers[depth] {
                if seen.contains(&slot.vertex) {
                    out.push((slot.vertex, depth));
                } else {
                    seen.push(slot.vertex);
                }
            }
        }
        out
    }
}

/// Builds the distance-4 neighbourhood tree of `v`. Family graphs only.
pub fn neighbourhood_tree(g: &GPGraph, v: Vertex) -> Result<NeighbourhoodTree> {
    g.require_family()?;
    let n = g.n();
    let root_id = v.id(n);
    let dist = g.distance_row(root_id);

    // (vertex id, vertex id of parent, slot index of parent) per slot.
    let mut layer_ids: Vec<Vec<(u32, u32, u32)>> = vec![vec![(root_id, u32::MAX, u32::MAX)]];
    for depth in 1..=4u16 {
        let mut next = Vec::new();
        for (slot_idx, &(u, parent_of_u, _)) in layer_ids[depth as usize - 1].iter().enumerate() {
            for &w in g.neighbours_of_id(u) {
                // Expand only along true-distance edges; cross edges such as
                // the inner 7-cycle's b_{i+3k} ~ b_{i-3k} stay out of the tree.
                if w != parent_of_u && dist[w as usize] == depth {
                    next.push((w, u, slot_idx as u32));
                }
            }
        }
        layer_ids.push(next);
    }
    let layers: Vec<Vec<TreeSlot>> = layer_ids
        .iter()
        .map(|layer| {
            layer
                .iter()
                .map(|&(w, _, p)| TreeSlot {
                    vertex: Vertex::from_id(w, n),
                    parent: p,
                })
                .collect()
        })
        .collect();

    let mut coincidences = Vec::new();
    let depth4 = &layer_ids[4];
    for i in 0..depth4.len() {
        for j in i + 1..depth4.len() {
            if depth4[i].0 == depth4[j].0 {
                coincidences.push((Vertex::from_id(depth4[i].0, n), i as u32, j as u32));
            }
        }
    }

    let dotted_edge = match v.ring {
        Ring::Inner => {
            let k = g.k() as i64;
            let i = v.index as i64;
            let p = Vertex::inner(i + 3 * k, n);
            let q = Vertex::inner(i - 3 * k, n);
            g.adjacent(p, q).then_some((p, q))
        }
        Ring::Outer => None,
    };

    Ok(NeighbourhoodTree {
        root: v,
        layers,
        coincidences,
        dotted_edge,
    })
}

/// Serialization formats for [`export_graph`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    Dot,
    Json,
    AdjList,
}

/// Deterministic text serialization: vertices named `a<i>`/`b<i>`, edges in
/// canonical `(min id, max id)` order.
pub fn export_graph(g: &GPGraph, format: ExportFormat) -> String {
    let n = g.n();
    let name = |id: u32| Vertex::from_id(id, n).to_string();
    match format {
        ExportFormat::AdjList => {
            let mut out = String::new();
            for v in 0..g.order() {
                let nb = g.neighbours_of_id(v);
                out.push_str(&format!(
                    "{}: {} {} {}\n",
                    name(v),
                    name(nb[0]),
                    name(nb[1]),
                    name(nb[2])
                ));
            }
            out
        }
        ExportFormat::Dot => {
            let mut out = format!("graph gp_{}_{} {{\n", g.n(), g.k());
            for (u, w) in g.edges() {
                out.push_str(&format!("  {} -- {};\n", name(u), name(w)));
            }
            out.push_str("}\n");
            out
        }
        ExportFormat::Json => {
            let edges = g.edges();
            let mut out = format!("{{\"n\":{},\"k\":{},\"edges\":[", g.n(), g.k());
            for (i, (u, w)) in edges.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push_str(&format!("[{u},{w}]"));
            }
            out.push_str("]}");
            out
        }
    }
}
