fn main() {
    let cat = hwfactor::catalog::catalog();
    for key in [
        hwfactor::core::Shape::Hw { v: 84, m: 3, n: 7, alpha: 36, beta: 5 },
        hwfactor::core::Shape::Hw { v: 84, m: 3, n: 7, alpha: 37, beta: 4 },
        hwfactor::core::Shape::Hw { v: 84, m: 3, n: 7, alpha: 38, beta: 3 },
    ] {
        let entry = cat.lookup(&key).unwrap();
        let design = hwfactor::catalog::expand_entry(entry).unwrap();
        println!("== {}", hwfactor::catalog::key_string(&key));
        // map edge -> factor indices
        let mut owners: std::collections::BTreeMap<hwfactor::core::Edge, Vec<usize>> = Default::default();
        for (i, (_, f)) in design.factors.iter().enumerate() {
            for e in hwfactor::core::edges_of(f) {
                owners.entry(e).or_default().push(i);
            }
        }
        let mut dup_pairs: std::collections::BTreeMap<(usize, usize), usize> = Default::default();
        for (_, v) in owners.iter().filter(|(_, v)| v.len() > 1) {
            *dup_pairs.entry((v[0], v[1])).or_default() += 1;
        }
        for ((a, b), cnt) in &dup_pairs {
            println!("  factors {a} and {b}: {cnt} shared edges");
        }
        // component boundaries
        let mut idx = 0;
        for (ci, comp) in entry.components.iter().enumerate() {
            println!("  component {ci} C{} count {} -> factor indices {}..{}", comp.target_length, comp.count, idx, idx + comp.count - 1);
            idx += comp.count;
        }
    }
}
