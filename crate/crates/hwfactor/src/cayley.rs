//! Factor generators from Cayley graphs over `Z_u x Z_k`: single-difference
//! 2-factors and 1-factors, and the two parameterized `C_k`-factorizations of
//! `Cay(Z_u x Z_k, +-{0,a,2a} x {+-i})` and `Cay(Z_u x Z_k, +-{0,a} x {+-i})`.

use std::collections::BTreeSet;

use crate::core::{Cycle, Edge, Factor, OneFactor, Vertex, VertexSetDescriptor};
use crate::develop::{CoordinateAction, DevelopmentScheme, Shift};
use crate::error::CayleyError;

/// A connection set: differences in `Z_u x Z_k`, closed under negation,
/// excluding (0,0).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConnectionSet {
    differences: BTreeSet<(u16, u16)>,
    u: u16,
    k: u16,
}

impl ConnectionSet {
    pub fn new(
        differences: impl IntoIterator<Item = (u16, u16)>,
        descriptor: &VertexSetDescriptor,
    ) -> Result<Self, CayleyError> {
        let (u, k) = (descriptor.u, descriptor.k);
        let set: BTreeSet<(u16, u16)> = differences
            .into_iter()
            .map(|(a, b)| (a % u, b % k))
            .collect();
        if set.contains(&(0, 0)) {
            return Err(CayleyError::ContainsZero);
        }
        for &(a, b) in &set {
            let neg = ((u - a) % u, (k - b) % k);
            if !set.contains(&neg) {
                return Err(CayleyError::NotClosedUnderNegation(neg));
            }
        }
        Ok(ConnectionSet {
            differences: set,
            u,
            k,
        })
    }

    /// Closure of a set of differences under negation, the usual way a set is
    /// written `+-{..} x {+-..}` in a construction.
    pub fn closed(
        differences: impl IntoIterator<Item = (u16, u16)>,
        descriptor: &VertexSetDescriptor,
    ) -> Result<Self, CayleyError> {
        let (u, k) = (descriptor.u, descriptor.k);
        let mut set = BTreeSet::new();
        for (a, b) in differences {
            let (a, b) = (a % u, b % k);
            set.insert((a, b));
            set.insert(((u - a) % u, (k - b) % k));
        }
        ConnectionSet::new(set, descriptor)
    }

    pub fn len(&self) -> usize {
        self.differences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.differences.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &(u16, u16)> {
        self.differences.iter()
    }
}

/// Edge set of `Cay(Z_u x Z_k, S)`: `{{x, x+d} : x, d in S}`. Cardinality is
/// `u*k*|S|/2` when no element of S is self-inverse, and counts self-inverse
/// differences once.
pub fn cayley_edges(descriptor: &VertexSetDescriptor, s: &ConnectionSet) -> BTreeSet<Edge> {
    let mut edges = BTreeSet::new();
    for r in 0..descriptor.u {
        for l in 0..descriptor.k {
            let x = Vertex::labeled(r, l);
            for &(da, db) in s.iter() {
                let y = Vertex::labeled((r + da) % descriptor.u, (l + db) % descriptor.k);
                edges.insert(Edge::new(x, y).expect("d != 0"));
            }
        }
    }
    edges
}

/// Additive order of `d` in `Z_u x Z_k`, computed by direct iteration.
pub fn order_of(d: (u16, u16), descriptor: &VertexSetDescriptor) -> usize {
    let (u, k) = (descriptor.u, descriptor.k);
    let d = (d.0 % u, d.1 % k);
    let mut cur = d;
    let mut n = 1;
    while cur != (0, 0) {
        cur = ((cur.0 + d.0) % u, (cur.1 + d.1) % k);
        n += 1;
    }
    n
}

/// A single-difference factor: either a spanning 2-factor or a 1-factor.
#[derive(Clone, Debug)]
pub enum DifferenceFactor {
    Cycles(Factor),
    Matching(OneFactor),
}

/// The factor `Cay(Z_u x Z_k, +-{d})`: a 1-factor when `d` is self-inverse,
/// otherwise a spanning cycle factor whose cycle length is the order of `d`.
pub fn single_difference_factor(
    descriptor: &VertexSetDescriptor,
    d: (u16, u16),
) -> Result<DifferenceFactor, CayleyError> {
    let (u, k) = (descriptor.u, descriptor.k);
    let d = (d.0 % u, d.1 % k);
    if d == (0, 0) {
        return Err(CayleyError::PreconditionViolated(
            "difference (0,0)".into(),
        ));
    }
    let ord = order_of(d, descriptor);
    // The factor lives on the labelled block; infinity points, when the
    // descriptor has them, are someone else's responsibility.
    let labelled = VertexSetDescriptor::new(u, k, 0);
    let mut covered = vec![false; u as usize * k as usize];
    let idx = |r: u16, l: u16| r as usize * k as usize + l as usize;
    if ord == 2 {
        let mut edges = Vec::new();
        for r in 0..u {
            for l in 0..k {
                if covered[idx(r, l)] {
                    continue;
                }
                let (r2, l2) = ((r + d.0) % u, (l + d.1) % k);
                covered[idx(r, l)] = true;
                covered[idx(r2, l2)] = true;
                edges.push(Edge::new(Vertex::labeled(r, l), Vertex::labeled(r2, l2))?);
            }
        }
        let span = crate::core::span_of(&labelled, None);
        return Ok(DifferenceFactor::Matching(OneFactor::new(edges, &span)?));
    }
    let mut cycles = Vec::new();
    for r in 0..u {
        for l in 0..k {
            if covered[idx(r, l)] {
                continue;
            }
            let mut verts = Vec::with_capacity(ord);
            let (mut cr, mut cl) = (r, l);
            for _ in 0..ord {
                covered[idx(cr, cl)] = true;
                verts.push(Vertex::labeled(cr, cl));
                cr = (cr + d.0) % u;
                cl = (cl + d.1) % k;
            }
            cycles.push(Cycle::new(verts)?);
        }
    }
    let factor = Factor::new(ord as u16, None, cycles, &labelled)?;
    Ok(DifferenceFactor::Cycles(factor))
}

/// Parameters of the two Cayley lemma factorizations over `Z_u x Z_k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CayleyLemmaParams {
    pub u: u16,
    pub k: u16,
    pub a: u16,
    pub i: u16,
}

fn gcd16(a: u16, b: u16) -> u16 {
    if b == 0 {
        a
    } else {
        gcd16(b, a % b)
    }
}

/// Base cycle with first coordinates `coords[t]` (given as alternating
/// `c1, c2` from t = 1 on) and second coordinates `t*i mod k`, starting at
/// (0,0). Consecutive differences are checked against the connection set.
fn lemma_base_cycle(
    params: &CayleyLemmaParams,
    c1: u16,
    c2: u16,
    s: &ConnectionSet,
) -> Result<Cycle, CayleyError> {
    let (u, k, i) = (params.u, params.k, params.i);
    let mut verts = Vec::with_capacity(k as usize);
    for t in 0..k {
        let first = if t == 0 {
            0
        } else if t % 2 == 1 {
            c1
        } else {
            c2
        };
        verts.push(Vertex::labeled(first % u, (t * i) % k));
    }
    // Transcription guard: every consecutive difference must lie in S.
    for t in 0..k as usize {
        let a = verts[t];
        let b = verts[(t + 1) % k as usize];
        if let (Vertex::Labeled { residue: ra, level: la }, Vertex::Labeled { residue: rb, level: lb }) =
            (a, b)
        {
            let d = ((rb + u - ra) % u, (lb + k - la) % k);
            if !s.iter().any(|&x| x == d) {
                return Err(CayleyError::PreconditionViolated(format!(
                    "base-cycle difference {d:?} outside the connection set"
                )));
            }
        }
    }
    Ok(Cycle::new(verts)?)
}

fn expand_lemma_cycles(
    params: &CayleyLemmaParams,
    coord_pairs: &[(u16, u16)],
    s: &ConnectionSet,
) -> Result<Vec<Factor>, CayleyError> {
    let descriptor = VertexSetDescriptor::new(params.u, params.k, 0);
    let mut factors = Vec::with_capacity(coord_pairs.len());
    for &(c1, c2) in coord_pairs {
        let base = lemma_base_cycle(params, c1, c2, s)?;
        let scheme = DevelopmentScheme::TranslateTiling {
            base: vec![base],
            action: CoordinateAction::new(Shift::Add(1), Shift::Fix),
            orbit_length: params.u as usize,
        };
        let mut fs = crate::develop::expand(&scheme, &descriptor, params.k, None)
            .map_err(|e| CayleyError::PreconditionViolated(e.to_string()))?;
        factors.append(&mut fs);
    }
    // The factors must exactly partition the Cayley edge set.
    let mut union = BTreeSet::new();
    let mut total = 0usize;
    for f in &factors {
        let edges = crate::core::edges_of(f);
        total += edges.len();
        union.extend(edges);
    }
    let cay = cayley_edges(&descriptor, s);
    if union != cay || total != cay.len() {
        return Err(CayleyError::NotAPartition(format!(
            "{} factor edges vs {} Cayley edges ({} distinct)",
            total,
            cay.len(),
            union.len()
        )));
    }
    Ok(factors)
}

/// Five spanning `C_k`-factors exactly partitioning
/// `Cay(Z_u x Z_k, +-{0,a,2a} x {+-i})`. Requires order(a) > 3 and
/// gcd(i,k) = 1.
pub fn lemma_2_1_factorization(params: &CayleyLemmaParams) -> Result<Vec<Factor>, CayleyError> {
    let CayleyLemmaParams { u, k, a, i } = *params;
    if u < 3 {
        return Err(CayleyError::PreconditionViolated(format!("u = {u} < 3")));
    }
    let descriptor = VertexSetDescriptor::new(u, k, 0);
    let ord_a = order_of((a, 0), &descriptor);
    if ord_a <= 3 {
        return Err(CayleyError::PreconditionViolated(format!(
            "order of a = {a} in Z_{u} is {ord_a} (> 3 required)"
        )));
    }
    if ord_a == 4 {
        // With 4a = 0 we get 2a = -2a, so |{0, +-a, +-2a}| = 4 and the five
        // factors cannot partition the (smaller) Cayley edge set.
        return Err(CayleyError::PreconditionViolated(format!(
            "order of a = {a} in Z_{u} is 4, so 2a is self-inverse and |{{0,+-a,+-2a}}| < 5"
        )));
    }
    if gcd16(i % k, k) != 1 {
        return Err(CayleyError::PreconditionViolated(format!(
            "gcd(i, k) = gcd({i}, {k}) != 1"
        )));
    }
    let a2 = ((2 * a as u32) % u as u32) as u16;
    let neg = |x: u16| (u - x % u) % u;
    // The product set {0, +-a, +-2a} x {+-i}.
    let firsts = [0, a % u, neg(a), a2, neg(a2)];
    let seconds = [i % k, (k - i % k) % k];
    let s = ConnectionSet::new(
        firsts
            .iter()
            .flat_map(|&f| seconds.iter().map(move |&sec| (f, sec))),
        &descriptor,
    )?;
    // First coordinates (a_{j1}, a_{j2}) of the five base cycles; entries for
    // t >= 3 repeat with period 2, second coordinates are t*i mod k.
    let pairs = [
        (a, a2),
        (0, neg(a2)),
        (a2, a),
        (neg(a), neg(a)),
        (neg(a2), 0),
    ];
    expand_lemma_cycles(params, &pairs, &s)
}

/// Three spanning `C_k`-factors exactly partitioning
/// `Cay(Z_u x Z_k, +-{0,a} x {+-i})`. Requires order(a) > 2 and gcd(i,k) = 1.
pub fn lemma_2_2_factorization(params: &CayleyLemmaParams) -> Result<Vec<Factor>, CayleyError> {
    let CayleyLemmaParams { u, k, a, i } = *params;
    if u < 3 {
        return Err(CayleyError::PreconditionViolated(format!("u = {u} < 3")));
    }
    let descriptor = VertexSetDescriptor::new(u, k, 0);
    let ord_a = order_of((a, 0), &descriptor);
    if ord_a <= 2 {
        return Err(CayleyError::PreconditionViolated(format!(
            "order of a = {a} in Z_{u} is {ord_a} (> 2 required)"
        )));
    }
    if gcd16(i % k, k) != 1 {
        return Err(CayleyError::PreconditionViolated(format!(
            "gcd(i, k) = gcd({i}, {k}) != 1"
        )));
    }
    let neg = |x: u16| (u - x % u) % u;
    // The product set {0, +-a} x {+-i}.
    let firsts = [0, a % u, neg(a)];
    let seconds = [i % k, (k - i % k) % k];
    let s = ConnectionSet::new(
        firsts
            .iter()
            .flat_map(|&f| seconds.iter().map(move |&sec| (f, sec))),
        &descriptor,
    )?;
    let pairs = [(a, a), (0, neg(a)), (neg(a), 0)];
    expand_lemma_cycles(params, &pairs, &s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cayley_edges_counts() {
        // Cay(Z_8 x Z_3, {(4,0)}): 12 edges ((4,0) is self-inverse).
        let d83 = VertexSetDescriptor::new(8, 3, 0);
        let s = ConnectionSet::new([(4, 0)], &d83).unwrap();
        assert_eq!(cayley_edges(&d83, &s).len(), 12);

        // Cay(Z_10 x Z_3, +-{2} x {0}): 30 edges forming 6 pentagons.
        let d103 = VertexSetDescriptor::new(10, 3, 0);
        let s = ConnectionSet::closed([(2, 0)], &d103).unwrap();
        assert_eq!(cayley_edges(&d103, &s).len(), 30);
        match single_difference_factor(&d103, (2, 0)).unwrap() {
            DifferenceFactor::Cycles(f) => {
                assert_eq!(f.target_length, 5);
                assert_eq!(f.cycles().len(), 6);
            }
            DifferenceFactor::Matching(_) => panic!("expected cycles"),
        }

        // |S| = 10 on Z_5 x Z_4: u*k*|S|/2 = 100 edges.
        let d54 = VertexSetDescriptor::new(5, 4, 0);
        let s = ConnectionSet::closed([(1, 0), (2, 0), (0, 1), (1, 1), (2, 1)], &d54).unwrap();
        assert_eq!(s.len(), 10);
        assert_eq!(cayley_edges(&d54, &s).len(), 100);
    }

    #[test]
    fn cayley_edges_negation_invariant() {
        let d = VertexSetDescriptor::new(10, 3, 0);
        let plus = ConnectionSet::closed([(2, 0), (0, 1)], &d).unwrap();
        let minus = ConnectionSet::closed([(8, 0), (0, 2)], &d).unwrap();
        assert_eq!(cayley_edges(&d, &plus), cayley_edges(&d, &minus));
    }

    #[test]
    fn connection_set_rejects_open_sets() {
        let d = VertexSetDescriptor::new(10, 3, 0);
        assert!(ConnectionSet::new([(2, 0)], &d).is_err());
        assert!(ConnectionSet::new([(0, 0)], &d).is_err());
    }

    #[test]
    fn single_difference_examples() {
        // Z_25 x Z_3, d = (10,0): order of 10 mod 25 is 5 -> C_5-factor.
        let d253 = VertexSetDescriptor::new(25, 3, 0);
        match single_difference_factor(&d253, (10, 0)).unwrap() {
            DifferenceFactor::Cycles(f) => {
                assert_eq!(f.target_length, 5);
                assert_eq!(f.cycles().len(), 15);
            }
            _ => panic!("expected cycles"),
        }
        // Z_8 x Z_3, d = (4,0): a 1-factor.
        let d83 = VertexSetDescriptor::new(8, 3, 0);
        assert!(matches!(
            single_difference_factor(&d83, (4, 0)).unwrap(),
            DifferenceFactor::Matching(_)
        ));
        // Z_6 x Z_5, d = (0,2): C_5-factor with 6 cycles.
        let d65 = VertexSetDescriptor::new(6, 5, 0);
        match single_difference_factor(&d65, (0, 2)).unwrap() {
            DifferenceFactor::Cycles(f) => {
                assert_eq!(f.target_length, 5);
                assert_eq!(f.cycles().len(), 6);
            }
            _ => panic!("expected cycles"),
        }
    }

    #[test]
    fn single_difference_cycle_length_is_order() {
        let d = VertexSetDescriptor::new(12, 5, 0);
        for dr in 0..12u16 {
            for dl in 0..5u16 {
                if (dr, dl) == (0, 0) {
                    continue;
                }
                let ord = order_of((dr, dl), &d);
                match single_difference_factor(&d, (dr, dl)).unwrap() {
                    DifferenceFactor::Cycles(f) => {
                        assert_eq!(f.target_length as usize, ord);
                        assert_eq!(f.cycles().len() * ord, 60);
                    }
                    DifferenceFactor::Matching(m) => {
                        assert_eq!(ord, 2);
                        assert_eq!(m.edges().len(), 30);
                    }
                }
            }
        }
    }

    #[test]
    fn lemma_2_1_small_cases() {
        // (u=8, k=3, a=1, i=1): 5 C_3-factors of Cay(Z_8 x Z_3, +-{0,1,2} x {+-1}).
        let f = lemma_2_1_factorization(&CayleyLemmaParams { u: 8, k: 3, a: 1, i: 1 }).unwrap();
        assert_eq!(f.len(), 5);
        assert!(f.iter().all(|x| x.target_length == 3));

        // order of 4 in Z_8 is 2: precondition violated.
        assert!(lemma_2_1_factorization(&CayleyLemmaParams { u: 8, k: 3, a: 4, i: 1 }).is_err());

        // (u=14, k=3, a=11, i=1): 210 edges total.
        let f = lemma_2_1_factorization(&CayleyLemmaParams { u: 14, k: 3, a: 11, i: 1 }).unwrap();
        let total: usize = f.iter().map(|x| crate::core::edges_of(x).len()).sum();
        assert_eq!(total, 210);
    }

    #[test]
    fn lemma_2_2_small_cases() {
        // (u=5, k=4, a=1, i=1): 3 C_4-factors, 60 edges.
        let f = lemma_2_2_factorization(&CayleyLemmaParams { u: 5, k: 4, a: 1, i: 1 }).unwrap();
        assert_eq!(f.len(), 3);
        let total: usize = f.iter().map(|x| crate::core::edges_of(x).len()).sum();
        assert_eq!(total, 60);

        // order of 2 in Z_4 is 2: precondition violated.
        assert!(lemma_2_2_factorization(&CayleyLemmaParams { u: 4, k: 3, a: 2, i: 1 }).is_err());

        // (u=7, k=5, a=3, i=2): 3 C_5-factors partitioning 105 edges.
        let f = lemma_2_2_factorization(&CayleyLemmaParams { u: 7, k: 5, a: 3, i: 2 }).unwrap();
        assert_eq!(f.len(), 3);
        let total: usize = f.iter().map(|x| crate::core::edges_of(x).len()).sum();
        assert_eq!(total, 105);
    }
}
