//! Orbit-development engine: turns base blocks into factors under the
//! coordinatewise group actions used by the direct constructions.
//!
//! Actions are products of cyclic shifts, one per coordinate, with infinity
//! points as global fixed points. Orbit lengths are always recomputed and
//! checked against what a caller declared; the catalog relies on this to
//! catch transcription mistakes in base-block data.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::core::{span_of, Cycle, Factor, Hole, Vertex, VertexSetDescriptor};
use crate::error::DevelopError;

/// Shift of one coordinate: add `step` modulo the coordinate's modulus, or
/// leave it fixed. `Fix` is written `-` in the catalog grammar.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Shift {
    Add(u16),
    Fix,
}

/// A diagonal action on `Z_u x Z_k`: shift the residue and the level
/// independently. Infinity points never move.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CoordinateAction {
    pub residue: Shift,
    pub level: Shift,
}

impl CoordinateAction {
    pub fn new(residue: Shift, level: Shift) -> Self {
        CoordinateAction { residue, level }
    }

    /// Reduce shift steps modulo the descriptor moduli.
    fn reduced(&self, descriptor: &VertexSetDescriptor) -> (u16, u16) {
        let r = match self.residue {
            Shift::Add(s) => s % descriptor.u,
            Shift::Fix => 0,
        };
        let l = match self.level {
            Shift::Add(s) => s % descriptor.k,
            Shift::Fix => 0,
        };
        (r, l)
    }

    /// Order of the acting element in `Z_u x Z_k`: the lcm of the component
    /// orders.
    pub fn orbit_length(&self, descriptor: &VertexSetDescriptor) -> usize {
        let (r, l) = self.reduced(descriptor);
        let or = order_mod(r, descriptor.u);
        let ol = order_mod(l, descriptor.k);
        lcm(or, ol)
    }
}

fn order_mod(step: u16, modulus: u16) -> usize {
    if modulus == 0 {
        return 1;
    }
    let step = (step % modulus) as usize;
    if step == 0 {
        return 1;
    }
    let modulus = modulus as usize;
    modulus / gcd(step, modulus)
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

/// A group element used as a translation, written `d_l` in the constructions
/// (add `d` to the residue, `l` to the level).
pub type Translation = (u16, u16);

/// Shift every labelled vertex coordinatewise modulo the descriptor moduli.
/// Infinity vertices pass through unchanged.
pub fn translate_vertex(v: Vertex, delta: Translation, descriptor: &VertexSetDescriptor) -> Vertex {
    match v {
        Vertex::Labeled { residue, level } => Vertex::Labeled {
            residue: (residue + delta.0 % descriptor.u) % descriptor.u,
            level: (level + delta.1 % descriptor.k) % descriptor.k,
        },
        inf @ Vertex::Infinity { .. } => inf,
    }
}

/// Translate a whole cycle by a group element.
pub fn translate(cycle: &Cycle, delta: Translation, descriptor: &VertexSetDescriptor) -> Cycle {
    let verts = cycle
        .vertices()
        .iter()
        .map(|v| translate_vertex(*v, delta, descriptor))
        .collect();
    Cycle::new(verts).expect("translation preserves cycle validity")
}

fn action_delta(action: &CoordinateAction, descriptor: &VertexSetDescriptor) -> Translation {
    action.reduced(descriptor)
}

fn compose_delta(a: Translation, b: Translation, descriptor: &VertexSetDescriptor) -> Translation {
    (
        (a.0 + b.0) % descriptor.u.max(1),
        (a.1 + b.1) % descriptor.k.max(1),
    )
}

/// A data-driven rule mapping base blocks to a family of factors.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum DevelopmentScheme {
    /// Translate a whole initial factor repeatedly; one factor per translate.
    FactorOrbit {
        base: Vec<Cycle>,
        action: CoordinateAction,
        orbit_length: usize,
    },
    /// The full orbits of all base cycles together form one factor.
    TranslateTiling {
        base: Vec<Cycle>,
        action: CoordinateAction,
        orbit_length: usize,
    },
    /// Factor for offset k is the union of the base translated by
    /// `(step*j + k)_0` over j < cosets; one factor per listed offset.
    CosetTiling {
        base: Vec<Cycle>,
        step: u16,
        cosets: usize,
        offsets: Vec<u16>,
    },
    /// One factor per listed translate of the base factor.
    ExplicitTranslates {
        base: Vec<Cycle>,
        translates: Vec<Translation>,
    },
    /// Tile the base cycles into one factor, then take that factor's orbit.
    TileThenOrbit {
        base: Vec<Cycle>,
        tiling: CoordinateAction,
        orbit: CoordinateAction,
        orbit_length: usize,
    },
    /// Tile the base cycles into one factor, then translate it explicitly.
    TileThenTranslates {
        base: Vec<Cycle>,
        tiling: CoordinateAction,
        translates: Vec<Translation>,
    },
}

impl DevelopmentScheme {
    /// Number of factors this scheme produces.
    pub fn factor_count(&self) -> usize {
        match self {
            DevelopmentScheme::FactorOrbit { orbit_length, .. } => *orbit_length,
            DevelopmentScheme::TranslateTiling { .. } => 1,
            DevelopmentScheme::CosetTiling { offsets, .. } => offsets.len(),
            DevelopmentScheme::ExplicitTranslates { translates, .. } => translates.len(),
            DevelopmentScheme::TileThenOrbit { orbit_length, .. } => *orbit_length,
            DevelopmentScheme::TileThenTranslates { translates, .. } => translates.len(),
        }
    }
}

/// Assemble one factor from the union of the full orbits of `base` under
/// `action`. Overlap or failure to span `span` is a tiling failure.
fn tile(
    base: &[Cycle],
    action: &CoordinateAction,
    descriptor: &VertexSetDescriptor,
    target_length: u16,
    hole: Option<Hole>,
) -> Result<Factor, DevelopError> {
    let len = action.orbit_length(descriptor);
    let delta = action_delta(action, descriptor);
    let mut cycles = Vec::with_capacity(base.len() * len);
    for c in base {
        let mut shift = (0, 0);
        for _ in 0..len {
            cycles.push(translate(c, shift, descriptor));
            shift = compose_delta(shift, delta, descriptor);
        }
    }
    Factor::new(target_length, hole, cycles, descriptor).map_err(DevelopError::TilingFailure)
}

/// Distinct translates of a base factor under repeated application of
/// `action`; the orbit length is the smallest t with base + t*delta = base.
pub fn orbit_of_factor(
    base: &Factor,
    action: &CoordinateAction,
    descriptor: &VertexSetDescriptor,
) -> Result<Vec<Factor>, DevelopError> {
    let delta = action_delta(action, descriptor);
    let mut out: Vec<Factor> = Vec::new();
    let mut shift = (0, 0);
    loop {
        let cycles: Vec<Cycle> = base
            .cycles()
            .iter()
            .map(|c| translate(c, shift, descriptor))
            .collect();
        let f = Factor::new(base.target_length, base.hole, cycles, descriptor)
            .map_err(DevelopError::TilingFailure)?;
        if !out.is_empty() && f == out[0] {
            break;
        }
        if let Some(pos) = out.iter().position(|g| *g == f) {
            // Can only happen if the action is not free on the factor.
            return Err(DevelopError::DuplicateFactor(pos));
        }
        out.push(f);
        shift = compose_delta(shift, delta, descriptor);
        if out.len() > action.orbit_length(descriptor) {
            break;
        }
    }
    Ok(out)
}

/// Expand a development scheme into its declared list of factors. Every
/// returned factor satisfies the factor invariants for `hole`'s span, and the
/// returned factors are pairwise edge-disjoint (checked by the caller's
/// verifier; overlap inside a single factor is caught here).
pub fn expand(
    scheme: &DevelopmentScheme,
    descriptor: &VertexSetDescriptor,
    target_length: u16,
    hole: Option<Hole>,
) -> Result<Vec<Factor>, DevelopError> {
    match scheme {
        DevelopmentScheme::FactorOrbit {
            base,
            action,
            orbit_length,
        } => {
            let f = Factor::new(target_length, hole, base.clone(), descriptor)
                .map_err(DevelopError::TilingFailure)?;
            let orbit = orbit_of_factor(&f, action, descriptor)?;
            if orbit.len() != *orbit_length {
                return Err(DevelopError::OrbitLengthMismatch {
                    declared: *orbit_length,
                    actual: orbit.len(),
                });
            }
            Ok(orbit)
        }
        DevelopmentScheme::TranslateTiling {
            base,
            action,
            orbit_length,
        } => {
            let actual = action.orbit_length(descriptor);
            if actual != *orbit_length {
                return Err(DevelopError::OrbitLengthMismatch {
                    declared: *orbit_length,
                    actual,
                });
            }
            Ok(vec![tile(base, action, descriptor, target_length, hole)?])
        }
        DevelopmentScheme::CosetTiling {
            base,
            step,
            cosets,
            offsets,
        } => {
            let mut out = Vec::with_capacity(offsets.len());
            for &k in offsets {
                let mut cycles = Vec::with_capacity(base.len() * cosets);
                for j in 0..*cosets {
                    let delta = ((step * j as u16 + k) % descriptor.u, 0);
                    for c in base {
                        cycles.push(translate(c, delta, descriptor));
                    }
                }
                out.push(
                    Factor::new(target_length, hole, cycles, descriptor)
                        .map_err(DevelopError::TilingFailure)?,
                );
            }
            Ok(out)
        }
        DevelopmentScheme::ExplicitTranslates { base, translates } => {
            let f = Factor::new(target_length, hole, base.clone(), descriptor)
                .map_err(DevelopError::TilingFailure)?;
            explicit_translates(&f, translates, descriptor)
        }
        DevelopmentScheme::TileThenOrbit {
            base,
            tiling,
            orbit,
            orbit_length,
        } => {
            let f = tile(base, tiling, descriptor, target_length, hole)?;
            let factors = orbit_of_factor(&f, orbit, descriptor)?;
            if factors.len() != *orbit_length {
                return Err(DevelopError::OrbitLengthMismatch {
                    declared: *orbit_length,
                    actual: factors.len(),
                });
            }
            Ok(factors)
        }
        DevelopmentScheme::TileThenTranslates {
            base,
            tiling,
            translates,
        } => {
            let f = tile(base, tiling, descriptor, target_length, hole)?;
            explicit_translates(&f, translates, descriptor)
        }
    }
}

fn explicit_translates(
    base: &Factor,
    translates: &[Translation],
    descriptor: &VertexSetDescriptor,
) -> Result<Vec<Factor>, DevelopError> {
    let mut out = Vec::with_capacity(translates.len());
    for &delta in translates {
        let cycles: Vec<Cycle> = base
            .cycles()
            .iter()
            .map(|c| translate(c, delta, descriptor))
            .collect();
        let f = Factor::new(base.target_length, base.hole, cycles, descriptor)
            .map_err(DevelopError::TilingFailure)?;
        if let Some(pos) = out.iter().position(|g| *g == f) {
            return Err(DevelopError::DuplicateFactor(pos));
        }
        out.push(f);
    }
    Ok(out)
}

/// Quick disjointness check used by scheme-level tests: the union of all
/// factor edge sets must have cardinality equal to the sum of the parts.
pub fn pairwise_edge_disjoint(factors: &[Factor]) -> bool {
    let mut union = BTreeSet::new();
    let mut total = 0usize;
    for f in factors {
        let edges = crate::core::edges_of(f);
        total += edges.len();
        union.extend(edges);
    }
    union.len() == total
}

/// Expected span helper re-exported for scheme callers.
pub fn expected_span(
    descriptor: &VertexSetDescriptor,
    hole: Option<Hole>,
) -> BTreeSet<Vertex> {
    span_of(descriptor, hole)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn v(r: u16, l: u16) -> Vertex {
        Vertex::labeled(r, l)
    }

    fn cyc(vs: &[(u16, u16)]) -> Cycle {
        Cycle::new(vs.iter().map(|&(r, l)| v(r, l)).collect()).unwrap()
    }

    #[test]
    fn translate_matches_lemma_example() {
        // (0_0, 6_0, 0_1) + 4_0 in Z_8 x Z_3 -> (4_0, 2_0, 4_1)
        let desc = VertexSetDescriptor::new(8, 3, 0);
        let c = cyc(&[(0, 0), (6, 0), (0, 1)]);
        let t = translate(&c, (4, 0), &desc);
        assert_eq!(t, cyc(&[(4, 0), (2, 0), (4, 1)]));
    }

    #[test]
    fn identity_translate() {
        let desc = VertexSetDescriptor::new(8, 3, 0);
        let c = cyc(&[(0, 0), (6, 0), (0, 1)]);
        assert_eq!(translate(&c, (0, 0), &desc), c);
    }

    #[test]
    fn orbit_lengths() {
        let desc = VertexSetDescriptor::new(8, 3, 0);
        // (+4 mod 8, +1 mod 3) has order lcm(2, 3) = 6.
        let a = CoordinateAction::new(Shift::Add(4), Shift::Add(1));
        assert_eq!(a.orbit_length(&desc), 6);
        let fix = CoordinateAction::new(Shift::Fix, Shift::Fix);
        assert_eq!(fix.orbit_length(&desc), 1);
        let d95 = VertexSetDescriptor::new(9, 5, 0);
        let b = CoordinateAction::new(Shift::Add(3), Shift::Add(1));
        assert_eq!(b.orbit_length(&d95), 15);
    }

    #[test]
    fn translate_tiling_spans_z7_z3() {
        // Orbit of (0_0, 1_1, 2_2) under (+1 mod 7, Fix) covers all 21
        // vertices with 7 disjoint triangles (brute-force check).
        let desc = VertexSetDescriptor::new(7, 3, 0);
        let scheme = DevelopmentScheme::TranslateTiling {
            base: vec![cyc(&[(0, 0), (1, 1), (2, 2)])],
            action: CoordinateAction::new(Shift::Add(1), Shift::Fix),
            orbit_length: 7,
        };
        let factors = expand(&scheme, &desc, 3, None).unwrap();
        assert_eq!(factors.len(), 1);
        assert_eq!(factors[0].cycles().len(), 7);
        assert_eq!(factors[0].vertex_count(), 21);
    }

    #[test]
    fn orbit_length_mismatch_is_hard_error() {
        let desc = VertexSetDescriptor::new(7, 3, 0);
        let scheme = DevelopmentScheme::TranslateTiling {
            base: vec![cyc(&[(0, 0), (1, 1), (2, 2)])],
            action: CoordinateAction::new(Shift::Add(1), Shift::Fix),
            orbit_length: 6,
        };
        assert!(matches!(
            expand(&scheme, &desc, 3, None),
            Err(DevelopError::OrbitLengthMismatch { declared: 6, actual: 7 })
        ));
    }

    #[test]
    fn bad_base_block_is_tiling_failure() {
        // Two triangles whose orbits collide.
        let desc = VertexSetDescriptor::new(7, 3, 0);
        let scheme = DevelopmentScheme::TranslateTiling {
            base: vec![cyc(&[(0, 0), (1, 1), (2, 2)]), cyc(&[(1, 0), (2, 1), (3, 2)])],
            action: CoordinateAction::new(Shift::Add(1), Shift::Fix),
            orbit_length: 7,
        };
        assert!(matches!(
            expand(&scheme, &desc, 3, None),
            Err(DevelopError::TilingFailure(_))
        ));
    }

    #[test]
    fn factor_orbit_with_infinities_fixed() {
        // A toy holey factor on (Z_2 x Z_5) + 2 infinities: infinities are
        // re-paired with shifted labelled vertices across the orbit.
        let desc = VertexSetDescriptor::new(2, 5, 2);
        let base = vec![
            Cycle::new(vec![Vertex::infinity(0), v(0, 0), v(1, 0)]).unwrap(),
            Cycle::new(vec![Vertex::infinity(1), v(0, 1), v(1, 1)]).unwrap(),
            cyc(&[(0, 2), (1, 2), (0, 3)]),
            cyc(&[(1, 3), (0, 4), (1, 4)]),
        ];
        let scheme = DevelopmentScheme::FactorOrbit {
            base,
            action: CoordinateAction::new(Shift::Fix, Shift::Add(1)),
            orbit_length: 5,
        };
        let factors = expand(&scheme, &desc, 3, None).unwrap();
        assert_eq!(factors.len(), 5);
        assert!(factors.iter().all(|f| f.vertex_count() == 12));
    }

    proptest! {
        #[test]
        fn translate_round_trip(
            raw in proptest::collection::btree_set((0u16..10, 0u16..6), 3..7),
            dr in 0u16..10,
            dl in 0u16..6,
        ) {
            let desc = VertexSetDescriptor::new(10, 6, 0);
            let verts: Vec<Vertex> = raw.into_iter().map(|(r, l)| v(r, l)).collect();
            let c = Cycle::new(verts).unwrap();
            let there = translate(&c, (dr, dl), &desc);
            let back = translate(&there, ((10 - dr) % 10, (6 - dl) % 6), &desc);
            prop_assert_eq!(back, c);
        }
    }
}
