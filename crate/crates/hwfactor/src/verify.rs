//! The certifier: validates any `Design` against its header and ambient
//! graph, and the admissibility checker for problem instances.
//!
//! The verifier trusts nothing and repairs nothing; failures come back as
//! report entries with machine-readable codes so a bad catalog line can be
//! localized.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::core::{
    ambient_edge_set, edges_of, span_of, Design, Hole, ProblemSpec, Role, Shape,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ViolationCode {
    DescriptorMismatch,
    FactorCountMismatch,
    WrongFactorLength,
    WrongFactorSpan,
    WrongHole,
    OneFactorMissing,
    OneFactorUnexpected,
    OneFactorWrongSpan,
    DuplicateEdge,
    MissingEdge,
    ForeignEdge,
    PartCountMismatch,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub code: ViolationCode,
    pub detail: String,
}

/// Outcome of certifying one design.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertReport {
    pub pass: bool,
    pub violations: Vec<Violation>,
}

impl CertReport {
    fn from_violations(violations: Vec<Violation>) -> Self {
        CertReport {
            pass: violations.is_empty(),
            violations,
        }
    }
}

fn push(vs: &mut Vec<Violation>, code: ViolationCode, detail: String) {
    vs.push(Violation { code, detail });
}

/// Check a design in full: header/factor-count agreement, per-factor kind
/// invariants, the exact edge partition of the ambient graph (1-factor
/// included), and per-part holey counts for frames.
pub fn verify_design(design: &Design) -> CertReport {
    let mut vs = Vec::new();
    let d = &design.descriptor;
    let shape = &design.shape;

    let expected_v = match *shape {
        Shape::Hw { v, .. } => v as usize,
        Shape::Ihw { v, .. } => v as usize,
        Shape::Mhw { g, u, .. } | Shape::Frame { g, u, .. } => (g * u) as usize,
    };
    if d.vertex_count() != expected_v {
        push(
            &mut vs,
            ViolationCode::DescriptorMismatch,
            format!("descriptor has {} vertices, header wants {expected_v}", d.vertex_count()),
        );
        return CertReport::from_violations(vs);
    }
    match *shape {
        Shape::Ihw { h, .. } => {
            if d.infinity_count as u32 != h {
                push(
                    &mut vs,
                    ViolationCode::DescriptorMismatch,
                    format!("hole size {h} but infinity block has {}", d.infinity_count),
                );
            }
        }
        Shape::Mhw { g, u, .. } | Shape::Frame { g, u, .. } => {
            if d.infinity_count != 0 || d.u as u32 != g || d.k as u32 != u {
                push(
                    &mut vs,
                    ViolationCode::DescriptorMismatch,
                    format!(
                        "multipartite descriptor must be Z_{g} x Z_{u} without infinities, got Z_{} x Z_{} inf {}",
                        d.u, d.k, d.infinity_count
                    ),
                );
            }
        }
        Shape::Hw { .. } => {}
    }
    if !vs.is_empty() {
        return CertReport::from_violations(vs);
    }

    check_factor_counts(design, &mut vs);
    check_factor_kinds(design, &mut vs);
    check_one_factor(design, &mut vs);
    check_edge_partition(design, &mut vs);

    CertReport::from_violations(vs)
}

fn check_factor_counts(design: &Design, vs: &mut Vec<Violation>) {
    let count = |role: Role, holey: bool| {
        design
            .factors
            .iter()
            .filter(|(r, f)| *r == role && f.hole.is_some() == holey)
            .count() as u32
    };
    match design.shape {
        Shape::Hw { alpha, beta, .. } => {
            for (want, got, label) in [
                (alpha, count(Role::M, false), "alpha"),
                (beta, count(Role::N, false), "beta"),
                (0, count(Role::M, true) + count(Role::N, true), "holey"),
            ] {
                if want != got {
                    push(
                        vs,
                        ViolationCode::FactorCountMismatch,
                        format!("{label}: header {want}, found {got}"),
                    );
                }
            }
        }
        Shape::Ihw {
            alpha,
            beta,
            alpha_h,
            beta_h,
            ..
        } => {
            for (want, got, label) in [
                (alpha, count(Role::M, false), "alpha"),
                (beta, count(Role::N, false), "beta"),
                (alpha_h, count(Role::M, true), "alpha_h"),
                (beta_h, count(Role::N, true), "beta_h"),
            ] {
                if want != got {
                    push(
                        vs,
                        ViolationCode::FactorCountMismatch,
                        format!("{label}: header {want}, found {got}"),
                    );
                }
            }
        }
        Shape::Mhw { alpha, beta, .. } => {
            for (want, got, label) in [
                (alpha, count(Role::M, false), "alpha"),
                (beta, count(Role::N, false), "beta"),
                (0, count(Role::M, true) + count(Role::N, true), "holey"),
            ] {
                if want != got {
                    push(
                        vs,
                        ViolationCode::FactorCountMismatch,
                        format!("{label}: header {want}, found {got}"),
                    );
                }
            }
        }
        Shape::Frame { g, u, alpha, beta, .. } => {
            // Exactly g/2 holey 2-factors with respect to each part:
            // alpha of length m and beta of length n per part.
            if alpha + beta != g / 2 {
                push(
                    vs,
                    ViolationCode::FactorCountMismatch,
                    format!("frame needs alpha + beta = g/2, got {alpha} + {beta} with g = {g}"),
                );
            }
            let mut per_part: BTreeMap<u16, (u32, u32)> = BTreeMap::new();
            for (role, f) in &design.factors {
                match f.hole {
                    Some(Hole::Part(p)) => {
                        let e = per_part.entry(p).or_default();
                        match role {
                            Role::M => e.0 += 1,
                            Role::N => e.1 += 1,
                        }
                    }
                    _ => push(
                        vs,
                        ViolationCode::WrongHole,
                        "frame factor without a part hole".to_string(),
                    ),
                }
            }
            for p in 0..u as u16 {
                let (a, b) = per_part.get(&p).copied().unwrap_or((0, 0));
                if (a, b) != (alpha, beta) {
                    push(
                        vs,
                        ViolationCode::PartCountMismatch,
                        format!("part {p}: expected ({alpha},{beta}) holey factors, found ({a},{b})"),
                    );
                }
            }
        }
    }
}

fn check_factor_kinds(design: &Design, vs: &mut Vec<Violation>) {
    let (m, n) = (design.shape.m(), design.shape.n());
    for (idx, (role, f)) in design.factors.iter().enumerate() {
        let want_len = match role {
            Role::M => m,
            Role::N => n,
        };
        if f.target_length != want_len {
            push(
                vs,
                ViolationCode::WrongFactorLength,
                format!("factor {idx}: length {} but role wants C_{want_len}", f.target_length),
            );
        }
        // Factor construction already guarantees disjoint cycles of uniform
        // length spanning the hole-relative span; re-check the span matches
        // what the design's shape expects for this factor.
        let expected_hole_ok = match design.shape {
            Shape::Hw { .. } | Shape::Mhw { .. } => f.hole.is_none(),
            Shape::Ihw { .. } => matches!(f.hole, None | Some(Hole::InfinityBlock)),
            Shape::Frame { .. } => matches!(f.hole, Some(Hole::Part(_))),
        };
        if !expected_hole_ok {
            push(
                vs,
                ViolationCode::WrongHole,
                format!("factor {idx}: hole {:?} not valid for this shape", f.hole),
            );
            continue;
        }
        let span = span_of(&design.descriptor, f.hole);
        let covered: BTreeSet<_> = f
            .cycles()
            .iter()
            .flat_map(|c| c.vertices().iter().copied())
            .collect();
        if covered != span {
            push(
                vs,
                ViolationCode::WrongFactorSpan,
                format!("factor {idx}: covers {} vertices, span has {}", covered.len(), span.len()),
            );
        }
    }
}

fn check_one_factor(design: &Design, vs: &mut Vec<Violation>) {
    let required = design.shape.has_one_factor();
    match (&design.one_factor, required) {
        (None, false) => {}
        (None, true) => push(
            vs,
            ViolationCode::OneFactorMissing,
            "shape requires a 1-factor".to_string(),
        ),
        (Some(_), false) => push(
            vs,
            ViolationCode::OneFactorUnexpected,
            "shape admits no 1-factor".to_string(),
        ),
        (Some(of), true) => {
            let span = design
                .shape
                .one_factor_span(&design.descriptor)
                .expect("required");
            let covered: BTreeSet<_> = of
                .edges()
                .iter()
                .flat_map(|e| {
                    let (a, b) = e.endpoints();
                    [a, b]
                })
                .collect();
            if covered != span {
                push(
                    vs,
                    ViolationCode::OneFactorWrongSpan,
                    format!("1-factor covers {} vertices, span has {}", covered.len(), span.len()),
                );
            }
        }
    }
}

fn check_edge_partition(design: &Design, vs: &mut Vec<Violation>) {
    let ambient = ambient_edge_set(&design.shape, &design.descriptor);
    let mut seen = BTreeSet::new();
    let mut report = |edge: crate::core::Edge, vs: &mut Vec<Violation>| {
        if !ambient.contains(&edge) {
            push(vs, ViolationCode::ForeignEdge, format!("edge {edge:?} outside the ambient graph"));
        } else if !seen.insert(edge) {
            push(vs, ViolationCode::DuplicateEdge, format!("edge {edge:?} covered twice"));
        }
    };
    for (_, f) in &design.factors {
        for e in edges_of(f) {
            report(e, vs);
        }
    }
    if let Some(of) = &design.one_factor {
        for e in of.edges() {
            report(*e, vs);
        }
    }
    if seen.len() != ambient.len() {
        let missing = ambient.difference(&seen).next();
        push(
            vs,
            ViolationCode::MissingEdge,
            format!(
                "{} of {} ambient edges covered (first missing: {missing:?})",
                seen.len(),
                ambient.len()
            ),
        );
    }
}

/// Admissibility of a Hamilton-Waterloo instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Admissibility {
    Admissible,
    Violation(String),
    /// The one nonexistent admissible instance, HW(15; 3, 5, 6, 1).
    KnownException,
}

/// Necessary conditions: m | v when alpha > 0, n | v when beta > 0,
/// alpha + beta = floor((v-1)/2), and the known exception (15; 3, 5, 6, 1).
pub fn check_necessary(spec: &ProblemSpec) -> Admissibility {
    let ProblemSpec { v, m, n, alpha, beta } = *spec;
    if v < 3 {
        return Admissibility::Violation(format!("v = {v} too small"));
    }
    if alpha > 0 && v % m as u32 != 0 {
        return Admissibility::Violation(format!("{m} does not divide {v} with alpha > 0"));
    }
    if beta > 0 && v % n as u32 != 0 {
        return Admissibility::Violation(format!("{n} does not divide {v} with beta > 0"));
    }
    let want = (v - 1) / 2;
    if alpha + beta != want {
        return Admissibility::Violation(format!(
            "alpha + beta = {} but floor((v-1)/2) = {want}",
            alpha + beta
        ));
    }
    if (v, m, n, alpha, beta) == (15, 3, 5, 6, 1) {
        return Admissibility::KnownException;
    }
    Admissibility::Admissible
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core::{Cycle, Factor, OneFactor, Provenance, Vertex, VertexSetDescriptor};

    fn v(r: u16, l: u16) -> Vertex {
        Vertex::labeled(r, l)
    }

    /// Hand-built HW(5; 3, 5, 0, 2): K_5 decomposed into two pentagon factors.
    fn k5_design() -> Design {
        let desc = VertexSetDescriptor::new(5, 1, 0);
        let shape = Shape::Hw { v: 5, m: 3, n: 5, alpha: 0, beta: 2 };
        let c1 = Cycle::new((0..5).map(|r| v(r, 0)).collect()).unwrap();
        let c2 = Cycle::new([0, 2, 4, 1, 3].map(|r| v(r, 0)).to_vec()).unwrap();
        let f1 = Factor::new(5, None, vec![c1], &desc).unwrap();
        let f2 = Factor::new(5, None, vec![c2], &desc).unwrap();
        Design {
            descriptor: desc,
            shape,
            factors: vec![(Role::N, f1), (Role::N, f2)],
            one_factor: None,
            provenance: Provenance::Generated { rule: "test".into() },
        }
    }

    #[test]
    fn k5_two_pentagons_pass() {
        let report = verify_design(&k5_design());
        assert!(report.pass, "{:?}", report.violations);
    }

    #[test]
    fn header_count_mismatch_fails() {
        let mut d = k5_design();
        d.shape = Shape::Hw { v: 5, m: 3, n: 5, alpha: 1, beta: 1 };
        let report = verify_design(&d);
        assert!(!report.pass);
        assert!(report
            .violations
            .iter()
            .any(|x| x.code == ViolationCode::FactorCountMismatch));
    }

    #[test]
    fn missing_one_factor_fails() {
        let desc = VertexSetDescriptor::new(4, 1, 0);
        let shape = Shape::Hw { v: 4, m: 3, n: 4, alpha: 0, beta: 1 };
        let cyc = Cycle::new((0..4).map(|r| v(r, 0)).collect()).unwrap();
        let f = Factor::new(4, None, vec![cyc], &desc).unwrap();
        let d = Design {
            descriptor: desc,
            shape,
            factors: vec![(Role::N, f)],
            one_factor: None,
            provenance: Provenance::Generated { rule: "test".into() },
        };
        let report = verify_design(&d);
        assert!(report
            .violations
            .iter()
            .any(|x| x.code == ViolationCode::OneFactorMissing));
    }

    #[test]
    fn k4_minus_matching_passes() {
        let desc = VertexSetDescriptor::new(4, 1, 0);
        let shape = Shape::Hw { v: 4, m: 3, n: 4, alpha: 0, beta: 1 };
        let cyc = Cycle::new((0..4).map(|r| v(r, 0)).collect()).unwrap();
        let f = Factor::new(4, None, vec![cyc], &desc).unwrap();
        let span = span_of(&desc, None);
        let of = OneFactor::new(
            vec![
                crate::core::Edge::new(v(0, 0), v(2, 0)).unwrap(),
                crate::core::Edge::new(v(1, 0), v(3, 0)).unwrap(),
            ],
            &span,
        )
        .unwrap();
        let d = Design {
            descriptor: desc,
            shape,
            factors: vec![(Role::N, f)],
            one_factor: Some(of),
            provenance: Provenance::Generated { rule: "test".into() },
        };
        let report = verify_design(&d);
        assert!(report.pass, "{:?}", report.violations);
    }

    #[test]
    fn check_necessary_examples() {
        assert_eq!(
            check_necessary(&ProblemSpec::new(45, 3, 5, 21, 1).unwrap()),
            Admissibility::Admissible
        );
        assert_eq!(
            check_necessary(&ProblemSpec::new(15, 3, 5, 6, 1).unwrap()),
            Admissibility::KnownException
        );
        match check_necessary(&ProblemSpec::new(44, 3, 4, 10, 11).unwrap()) {
            Admissibility::Violation(msg) => assert!(msg.contains("3 does not divide 44")),
            other => panic!("expected violation, got {other:?}"),
        }
    }
}
