use hwfactor::core::{Edge, Vertex};
use std::collections::BTreeMap;

// class of an edge on Z_21 x Z_4: (levels (i,j) i<=j, first-coord diff from i side)
fn class_of(e: &Edge) -> (u16, u16, u16) {
    let (a, b) = e.endpoints();
    let (Vertex::Labeled { residue: ra, level: la }, Vertex::Labeled { residue: rb, level: lb }) = (a, b) else { panic!() };
    if la < lb || (la == lb && ra <= rb) {
        let d = (rb + 21 - ra) % 21;
        if la == lb {
            (la, lb, d.min((21 - d) % 21))
        } else {
            (la, lb, d)
        }
    } else {
        let d = (ra + 21 - rb) % 21;
        if la == lb {
            (lb, la, d.min((21 - d) % 21))
        } else {
            (lb, la, d)
        }
    }
}

fn main() {
    let cat = hwfactor::catalog::catalog();
    let key = hwfactor::core::Shape::Hw { v: 84, m: 3, n: 7, alpha: 36, beta: 5 };
    let entry = cat.lookup(&key).unwrap();
    let design = hwfactor::catalog::expand_entry(entry).unwrap();
    // count edges per class from non-T' components (factors 0..35 and 40) + onefactor
    let mut counts: BTreeMap<(u16, u16, u16), usize> = BTreeMap::new();
    for (i, (_, f)) in design.factors.iter().enumerate() {
        if (36..40).contains(&i) {
            continue;
        }
        for e in hwfactor::core::edges_of(&f) {
            *counts.entry(class_of(&e)).or_default() += 1;
        }
    }
    for e in design.one_factor.as_ref().unwrap().edges() {
        *counts.entry(class_of(e)).or_default() += 1;
    }
    // all classes
    let mut uncovered = Vec::new();
    for i in 0..4u16 {
        for j in i..4u16 {
            let dmax = if i == j { 10 } else { 20 };
            let dmin = if i == j { 1 } else { 0 };
            for d in dmin..=dmax {
                let total = counts.get(&(i, j, d)).copied().unwrap_or(0);
                let want = 21;
                if total != want {
                    if total == 0 {
                        uncovered.push((i, j, d));
                    } else {
                        println!("class ({i},{j},{d}): {total} edges (expected 21)");
                    }
                }
            }
        }
    }
    println!("fully uncovered classes ({}):", uncovered.len());
    for c in &uncovered {
        println!("  {:?}", c);
    }
}
