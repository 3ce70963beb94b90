//! Domain types for vertices, cycles, factors and complete designs, plus the
//! edge-set algebra every other module builds on.
//!
//! Vertices live in `Z_u x Z_k` (written `r:l`) optionally extended by a block
//! of labelled infinity points (`inf:i`). All types are immutable value types;
//! equality of cycles is up to rotation and reflection.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::CoreError;

/// A point of `Z_u x Z_k`, or a labelled infinity point.
///
/// The derived `Ord` is the canonical vertex order used everywhere: labelled
/// vertices before infinities, then lexicographic on `(residue, level)` /
/// `index`. Canonical forms and file output depend on it.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Vertex {
    Labeled { residue: u16, level: u16 },
    Infinity { index: u16 },
}

impl Vertex {
    pub fn labeled(residue: u16, level: u16) -> Self {
        Vertex::Labeled { residue, level }
    }

    pub fn infinity(index: u16) -> Self {
        Vertex::Infinity { index }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, Vertex::Infinity { .. })
    }
}

impl fmt::Debug for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Vertex::Labeled { residue, level } => write!(f, "{residue}:{level}"),
            Vertex::Infinity { index } => write!(f, "inf:{index}"),
        }
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Descriptor of the ambient vertex set: `Z_u x Z_k` plus `infinity_count`
/// labelled infinity points. Total vertex count is `u*k + infinity_count`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VertexSetDescriptor {
    pub u: u16,
    pub k: u16,
    pub infinity_count: u16,
}

impl VertexSetDescriptor {
    pub fn new(u: u16, k: u16, infinity_count: u16) -> Self {
        VertexSetDescriptor {
            u,
            k,
            infinity_count,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.u as usize * self.k as usize + self.infinity_count as usize
    }

    pub fn contains(&self, v: Vertex) -> bool {
        match v {
            Vertex::Labeled { residue, level } => residue < self.u && level < self.k,
            Vertex::Infinity { index } => index < self.infinity_count,
        }
    }

    /// All vertices in canonical order.
    pub fn vertices(&self) -> Vec<Vertex> {
        let mut out = Vec::with_capacity(self.vertex_count());
        for residue in 0..self.u {
            for level in 0..self.k {
                out.push(Vertex::labeled(residue, level));
            }
        }
        for index in 0..self.infinity_count {
            out.push(Vertex::infinity(index));
        }
        out.sort();
        out
    }

    /// The labelled vertices of one level (a part of `K_u[g]` in the
    /// multipartite convention where parts are levels).
    pub fn part(&self, level: u16) -> Vec<Vertex> {
        (0..self.u).map(|r| Vertex::labeled(r, level)).collect()
    }
}

/// An unordered pair of distinct vertices.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Edge(Vertex, Vertex);

impl Edge {
    pub fn new(a: Vertex, b: Vertex) -> Result<Self, CoreError> {
        if a == b {
            return Err(CoreError::LoopEdge(a.to_string()));
        }
        Ok(if a < b { Edge(a, b) } else { Edge(b, a) })
    }

    pub fn endpoints(&self) -> (Vertex, Vertex) {
        (self.0, self.1)
    }
}

impl fmt::Debug for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}, {}}}", self.0, self.1)
    }
}

/// A cycle given by its vertex sequence, length >= 3, all vertices distinct.
/// Stored in canonical form so equality is rotation- and reflection-free.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Cycle {
    vertices: Vec<Vertex>,
}

impl Cycle {
    pub fn new(vertices: Vec<Vertex>) -> Result<Self, CoreError> {
        if vertices.len() < 3 {
            return Err(CoreError::CycleTooShort(vertices.len()));
        }
        let distinct: BTreeSet<_> = vertices.iter().collect();
        if distinct.len() != vertices.len() {
            return Err(CoreError::RepeatedVertex(format!("{vertices:?}")));
        }
        Ok(Cycle {
            vertices: canonical_rotation(vertices),
        })
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    /// Consecutive pairs plus the wraparound edge.
    pub fn edges(&self) -> Vec<Edge> {
        let n = self.vertices.len();
        (0..n)
            .map(|i| Edge::new(self.vertices[i], self.vertices[(i + 1) % n]).unwrap())
            .collect()
    }
}

impl fmt::Debug for Cycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.vertices.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

/// Rotation/reflection-minimal representative: start at the minimum vertex and
/// walk in the direction whose neighbour is smaller.
fn canonical_rotation(vertices: Vec<Vertex>) -> Vec<Vertex> {
    let n = vertices.len();
    let (start, _) = vertices
        .iter()
        .enumerate()
        .min_by_key(|(_, v)| **v)
        .expect("nonempty");
    let succ = vertices[(start + 1) % n];
    let pred = vertices[(start + n - 1) % n];
    let mut out = Vec::with_capacity(n);
    if succ <= pred {
        for i in 0..n {
            out.push(vertices[(start + i) % n]);
        }
    } else {
        for i in 0..n {
            out.push(vertices[(start + n - i) % n]);
        }
    }
    out
}

/// Rotation/reflection-minimal representative of a cycle. Idempotent; `Cycle`
/// stores this form already, so this is the identity on constructed cycles.
pub fn canonical_form(cycle: &Cycle) -> Cycle {
    Cycle {
        vertices: canonical_rotation(cycle.vertices.clone()),
    }
}

/// The hole of a holey factor: a part of a multipartite graph, or the
/// infinity block of an incomplete design.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Hole {
    Part(u16),
    InfinityBlock,
}

/// A 2-regular factor: disjoint cycles of uniform `target_length` covering a
/// declared span (the full vertex set, or everything outside `hole`).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Factor {
    pub target_length: u16,
    pub hole: Option<Hole>,
    cycles: Vec<Cycle>,
}

impl Factor {
    /// Build a factor and validate its invariants against `descriptor`:
    /// uniform cycle length, pairwise disjoint cycles, and exact coverage of
    /// the span determined by `hole`.
    pub fn new(
        target_length: u16,
        hole: Option<Hole>,
        mut cycles: Vec<Cycle>,
        descriptor: &VertexSetDescriptor,
    ) -> Result<Self, CoreError> {
        cycles.sort();
        let mut seen = BTreeSet::new();
        for c in &cycles {
            if c.len() != target_length as usize {
                return Err(CoreError::WrongCycleLength {
                    expected: target_length as usize,
                    found: c.len(),
                });
            }
            for v in c.vertices() {
                if !descriptor.contains(*v) {
                    return Err(CoreError::VertexOutOfRange(v.to_string()));
                }
                if !seen.insert(*v) {
                    return Err(CoreError::OverlappingCycles(v.to_string()));
                }
            }
        }
        let span = span_of(descriptor, hole);
        if seen != span {
            let missing = span.difference(&seen).next();
            let extra = seen.difference(&span).next();
            return Err(CoreError::NotSpanning {
                missing: missing.map(|v| v.to_string()),
                extra: extra.map(|v| v.to_string()),
            });
        }
        Ok(Factor {
            target_length,
            hole,
            cycles,
        })
    }

    pub fn cycles(&self) -> &[Cycle] {
        &self.cycles
    }

    pub fn vertex_count(&self) -> usize {
        self.cycles.iter().map(|c| c.len()).sum()
    }
}

/// The vertices a factor with the given hole must cover.
pub fn span_of(descriptor: &VertexSetDescriptor, hole: Option<Hole>) -> BTreeSet<Vertex> {
    let mut span: BTreeSet<Vertex> = descriptor.vertices().into_iter().collect();
    match hole {
        None => {}
        Some(Hole::Part(p)) => {
            for v in descriptor.part(p) {
                span.remove(&v);
            }
        }
        Some(Hole::InfinityBlock) => {
            span.retain(|v| !v.is_infinity());
        }
    }
    span
}

/// A perfect matching on a declared span.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OneFactor {
    edges: Vec<Edge>,
}

impl OneFactor {
    /// Validate pairwise disjointness and exact coverage of `span`.
    pub fn new(mut edges: Vec<Edge>, span: &BTreeSet<Vertex>) -> Result<Self, CoreError> {
        edges.sort();
        let mut seen = BTreeSet::new();
        for e in &edges {
            let (a, b) = e.endpoints();
            if !seen.insert(a) {
                return Err(CoreError::OverlappingCycles(a.to_string()));
            }
            if !seen.insert(b) {
                return Err(CoreError::OverlappingCycles(b.to_string()));
            }
        }
        if &seen != span {
            let missing = span.difference(&seen).next();
            let extra = seen.difference(span).next();
            return Err(CoreError::NotSpanning {
                missing: missing.map(|v| v.to_string()),
                extra: extra.map(|v| v.to_string()),
            });
        }
        Ok(OneFactor { edges })
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }
}

/// Role of a factor in the header count: an alpha-factor (length `m`) or a
/// beta-factor (length `n`). Kept explicit so the degenerate `m == n` case
/// still has well-defined counts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Role {
    M,
    N,
}

/// Parameter header of a complete decomposition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Shape {
    /// HW(v; m, n, alpha, beta): K_v (v odd) or K_v minus a 1-factor (v even).
    Hw {
        v: u32,
        m: u16,
        n: u16,
        alpha: u32,
        beta: u32,
    },
    /// IHW(v, h; m, n, alpha, beta, alpha_h, beta_h): K_v - E(K_h), hole on
    /// the infinity block, minus a 1-factor on the non-hole vertices when v
    /// is even.
    Ihw {
        v: u32,
        h: u32,
        m: u16,
        n: u16,
        alpha: u32,
        beta: u32,
        alpha_h: u32,
        beta_h: u32,
    },
    /// HW(K_u[g]; m, n, alpha, beta): parts are the levels of Z_g x Z_u.
    /// Includes a 1-factor exactly when g(u-1) is odd.
    Mhw {
        g: u32,
        u: u32,
        m: u16,
        n: u16,
        alpha: u32,
        beta: u32,
    },
    /// CF(g^u; m, n, alpha, beta): per part, alpha holey C_m-factors and beta
    /// holey C_n-factors, alpha + beta = g/2.
    Frame {
        g: u32,
        u: u32,
        m: u16,
        n: u16,
        alpha: u32,
        beta: u32,
    },
}

impl Shape {
    pub fn m(&self) -> u16 {
        match *self {
            Shape::Hw { m, .. }
            | Shape::Ihw { m, .. }
            | Shape::Mhw { m, .. }
            | Shape::Frame { m, .. } => m,
        }
    }

    pub fn n(&self) -> u16 {
        match *self {
            Shape::Hw { n, .. }
            | Shape::Ihw { n, .. }
            | Shape::Mhw { n, .. }
            | Shape::Frame { n, .. } => n,
        }
    }

    /// Total number of vertices of the ambient graph.
    pub fn vertex_count(&self) -> usize {
        match *self {
            Shape::Hw { v, .. } | Shape::Ihw { v, .. } => v as usize,
            Shape::Mhw { g, u, .. } | Shape::Frame { g, u, .. } => g as usize * u as usize,
        }
    }

    /// Whether a complete design of this shape carries a 1-factor.
    pub fn has_one_factor(&self) -> bool {
        match *self {
            Shape::Hw { v, .. } => v % 2 == 0,
            Shape::Ihw { v, .. } => v % 2 == 0,
            Shape::Mhw { g, u, .. } => (g * (u - 1)) % 2 == 1,
            Shape::Frame { .. } => false,
        }
    }

    /// Span of the 1-factor, if one is required.
    pub fn one_factor_span(&self, descriptor: &VertexSetDescriptor) -> Option<BTreeSet<Vertex>> {
        if !self.has_one_factor() {
            return None;
        }
        Some(match *self {
            // Degree parity forces the IHW 1-factor onto the non-hole
            // vertices: they have odd degree v-1, hole vertices even v-h.
            Shape::Ihw { .. } => span_of(descriptor, Some(Hole::InfinityBlock)),
            _ => span_of(descriptor, None),
        })
    }
}

/// Where a design came from. Carried along compositions so a built design can
/// explain itself.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Provenance {
    Catalog { entry: String },
    Generated { rule: String },
    Searched { seed: u64 },
    Composed { construction: String, parts: Vec<Provenance> },
    File,
}

/// A complete decomposition object with its parameter header.
///
/// Construction validates only local shape (factor kinds against the
/// descriptor); the global edge-partition property is `verify`'s job.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Design {
    pub descriptor: VertexSetDescriptor,
    pub shape: Shape,
    pub factors: Vec<(Role, Factor)>,
    pub one_factor: Option<OneFactor>,
    pub provenance: Provenance,
}

impl Design {
    pub fn alpha_factors(&self) -> impl Iterator<Item = &Factor> {
        self.factors
            .iter()
            .filter(|(r, _)| *r == Role::M)
            .map(|(_, f)| f)
    }

    pub fn beta_factors(&self) -> impl Iterator<Item = &Factor> {
        self.factors
            .iter()
            .filter(|(r, _)| *r == Role::N)
            .map(|(_, f)| f)
    }
}

/// Problem instance for the original Hamilton-Waterloo problem.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ProblemSpec {
    pub v: u32,
    pub m: u16,
    pub n: u16,
    pub alpha: u32,
    pub beta: u32,
}

impl ProblemSpec {
    pub fn new(v: u32, m: u16, n: u16, alpha: u32, beta: u32) -> Result<Self, CoreError> {
        if m < 3 || n < 3 {
            return Err(CoreError::BadCycleKind { m, n });
        }
        Ok(ProblemSpec { v, m, n, alpha, beta })
    }
}

/// Every edge of every cycle of a factor.
pub fn edges_of(factor: &Factor) -> BTreeSet<Edge> {
    factor.cycles().iter().flat_map(|c| c.edges()).collect()
}

/// The edge set of the ambient graph of `shape`: K_v, K_v - E(K_h), or the
/// complete multipartite K_u[g] (parts = levels). The 1-factor, when the
/// shape requires one, is part of the decomposition and therefore included.
pub fn ambient_edge_set(shape: &Shape, descriptor: &VertexSetDescriptor) -> BTreeSet<Edge> {
    let vertices = descriptor.vertices();
    let mut edges = BTreeSet::new();
    for (i, a) in vertices.iter().enumerate() {
        for b in &vertices[i + 1..] {
            let keep = match shape {
                Shape::Hw { .. } => true,
                Shape::Ihw { .. } => !(a.is_infinity() && b.is_infinity()),
                Shape::Mhw { .. } | Shape::Frame { .. } => match (a, b) {
                    (
                        Vertex::Labeled { level: la, .. },
                        Vertex::Labeled { level: lb, .. },
                    ) => la != lb,
                    _ => false,
                },
            };
            if keep {
                edges.insert(Edge::new(*a, *b).unwrap());
            }
        }
    }
    edges
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn v(r: u16, l: u16) -> Vertex {
        Vertex::labeled(r, l)
    }

    #[test]
    fn triangle_edge_set() {
        let c = Cycle::new(vec![v(0, 0), v(1, 1), v(2, 2)]).unwrap();
        let edges: BTreeSet<_> = c.edges().into_iter().collect();
        let expected: BTreeSet<_> = [
            Edge::new(v(0, 0), v(1, 1)).unwrap(),
            Edge::new(v(1, 1), v(2, 2)).unwrap(),
            Edge::new(v(2, 2), v(0, 0)).unwrap(),
        ]
        .into_iter()
        .collect();
        assert_eq!(edges, expected);
    }

    #[test]
    fn one_factor_from_difference_four() {
        // Cay(Z_8 x Z_3, {4} x {0}) as 12 disjoint edges {x_j, (x+4)_j}.
        let desc = VertexSetDescriptor::new(8, 3, 0);
        let mut edges = Vec::new();
        for x in 0..4u16 {
            for j in 0..3 {
                edges.push(Edge::new(v(x, j), v(x + 4, j)).unwrap());
            }
        }
        let span = span_of(&desc, None);
        let of = OneFactor::new(edges, &span).unwrap();
        assert_eq!(of.edges().len(), 12);
    }

    #[test]
    fn c4_factor_of_24_vertices_has_24_edges() {
        // Enumerated count: 6 disjoint squares on Z_8 x Z_3 give 6*4 = 24 edges.
        let desc = VertexSetDescriptor::new(8, 3, 0);
        let mut cycles = Vec::new();
        for j in 0..3u16 {
            cycles.push(Cycle::new(vec![v(0, j), v(1, j), v(2, j), v(3, j)]).unwrap());
            cycles.push(Cycle::new(vec![v(4, j), v(5, j), v(6, j), v(7, j)]).unwrap());
        }
        let f = Factor::new(4, None, cycles, &desc).unwrap();
        let edges = edges_of(&f);
        assert_eq!(edges.len(), 24);
        assert_eq!(edges.len(), f.vertex_count());
    }

    #[test]
    fn ambient_k5() {
        let desc = VertexSetDescriptor::new(5, 1, 0);
        let shape = Shape::Hw { v: 5, m: 3, n: 5, alpha: 0, beta: 2 };
        assert_eq!(ambient_edge_set(&shape, &desc).len(), 10);
    }

    #[test]
    fn ambient_k45_minus_k15() {
        // 990 - 105 = 885, matching the IHW(45,15) construction totals.
        let desc = VertexSetDescriptor::new(6, 5, 15);
        let shape = Shape::Ihw {
            v: 45,
            h: 15,
            m: 3,
            n: 5,
            alpha: 15,
            beta: 0,
            alpha_h: 6,
            beta_h: 1,
        };
        assert_eq!(ambient_edge_set(&shape, &desc).len(), 885);
    }

    #[test]
    fn ambient_k4_15() {
        // C(4,2) * 15 * 15 = 1350 = 22 two-factors * 60 edges + 30 matching edges.
        let desc = VertexSetDescriptor::new(15, 4, 0);
        let shape = Shape::Mhw { g: 15, u: 4, m: 3, n: 5, alpha: 0, beta: 22 };
        assert_eq!(ambient_edge_set(&shape, &desc).len(), 1350);
        assert_eq!(22 * 60 + 30, 1350);
    }

    #[test]
    fn canonical_form_rotation_and_reflection() {
        let a = Cycle::new(vec![v(2, 2), v(0, 0), v(1, 1)]).unwrap();
        let b = Cycle::new(vec![v(0, 0), v(2, 2), v(1, 1)]).unwrap();
        let c = Cycle::new(vec![v(0, 0), v(1, 1), v(2, 2)]).unwrap();
        assert_eq!(a, c);
        assert_eq!(b, c);
        assert_eq!(canonical_form(&c), c);
    }

    #[test]
    fn rejects_short_and_repeated() {
        assert!(Cycle::new(vec![v(0, 0), v(1, 0)]).is_err());
        assert!(Cycle::new(vec![v(0, 0), v(1, 0), v(0, 0)]).is_err());
        assert!(Edge::new(v(1, 2), v(1, 2)).is_err());
    }

    fn arb_cycle() -> impl Strategy<Value = Vec<(u16, u16)>> {
        proptest::collection::btree_set((0u16..30, 0u16..4), 3..9)
            .prop_map(|s| s.into_iter().collect::<Vec<_>>())
            .prop_shuffle()
    }

    proptest! {
        #[test]
        fn canonical_form_idempotent(raw in arb_cycle()) {
            let cycle = Cycle::new(raw.into_iter().map(|(r, l)| v(r, l)).collect()).unwrap();
            let once = canonical_form(&cycle);
            prop_assert_eq!(canonical_form(&once), once.clone());
        }

        #[test]
        fn cycle_equality_rotation_invariant(raw in arb_cycle(), rot in 0usize..8) {
            let verts: Vec<Vertex> = raw.into_iter().map(|(r, l)| v(r, l)).collect();
            let n = verts.len();
            let rotated: Vec<Vertex> = (0..n).map(|i| verts[(i + rot) % n]).collect();
            let mut reflected = rotated.clone();
            reflected.reverse();
            let c0 = Cycle::new(verts).unwrap();
            prop_assert_eq!(Cycle::new(rotated).unwrap(), c0.clone());
            prop_assert_eq!(Cycle::new(reflected).unwrap(), c0);
        }
    }
}
