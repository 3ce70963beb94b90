use hwfactor::core::Shape;
use hwfactor::search::{solve, Budget, SolveOutcome};
use std::time::Instant;

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let which = args.get(1).map(|s| s.as_str()).unwrap_or("cf");
    let shape = match which {
        "cf" => Shape::Frame { g: 6, u: 4, m: 3, n: 3, alpha: 3, beta: 0 },
        "kts21" => Shape::Hw { v: 21, m: 3, n: 7, alpha: 10, beta: 0 },
        "k310" => Shape::Mhw { g: 10, u: 3, m: 3, n: 5, alpha: 10, beta: 0 },
        "nkts30" => Shape::Hw { v: 30, m: 3, n: 5, alpha: 14, beta: 0 },
        _ => panic!(),
    };
    for seed in 0..4u64 {
        let t = Instant::now();
        let r = solve(&shape, Budget::seconds(15), seed);
        println!("seed {seed}: {:?} in {:?}", match r { Ok(SolveOutcome::Found(_)) => "FOUND", Ok(SolveOutcome::NotFound) => "miss", _ => "other" }, t.elapsed());
    }
}
