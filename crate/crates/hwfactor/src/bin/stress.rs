use hwfactor::core::Shape;
use hwfactor::search::{solve, Budget, SolveOutcome};
use std::time::Instant;

fn main() {
    let cases: Vec<(&str, Shape)> = vec![
        ("NKTS(30) = HW(30;3,5,14,0)", Shape::Hw { v: 30, m: 3, n: 5, alpha: 14, beta: 0 }),
        ("C5-fact K_30-I = HW(30;3,5,0,14)", Shape::Hw { v: 30, m: 3, n: 5, alpha: 0, beta: 14 }),
        ("K_3[10] C3-fact", Shape::Mhw { g: 10, u: 3, m: 3, n: 5, alpha: 10, beta: 0 }),
        ("K_3[10] C5-fact", Shape::Mhw { g: 10, u: 3, m: 3, n: 5, alpha: 0, beta: 10 }),
        ("HW(14;3,7,0,6)", Shape::Hw { v: 14, m: 3, n: 7, alpha: 0, beta: 6 }),
        ("K_3[14] C3-fact", Shape::Mhw { g: 14, u: 3, m: 3, n: 7, alpha: 14, beta: 0 }),
        ("CF(6^4;3,3,3,0)", Shape::Frame { g: 6, u: 4, m: 3, n: 3, alpha: 3, beta: 0 }),
        ("IHW(9,3;3,3,3,0,1,0)", Shape::Ihw { v: 9, h: 3, m: 3, n: 3, alpha: 3, beta: 0, alpha_h: 1, beta_h: 0 }),
        ("HW(21;3,7,9,1)", Shape::Hw { v: 21, m: 3, n: 7, alpha: 9, beta: 1 }),
        ("HW(21;3,7,1,9)", Shape::Hw { v: 21, m: 3, n: 7, alpha: 1, beta: 9 }),
        ("HW(21;3,7,10,0) KTS(21)", Shape::Hw { v: 21, m: 3, n: 7, alpha: 10, beta: 0 }),
        ("HW(21;3,7,0,10)", Shape::Hw { v: 21, m: 3, n: 7, alpha: 0, beta: 10 }),
        ("HW(15;3,5,7,0) KTS(15)", Shape::Hw { v: 15, m: 3, n: 5, alpha: 7, beta: 0 }),
        ("NKTS(42) = HW(42;3,7,20,0)", Shape::Hw { v: 42, m: 3, n: 7, alpha: 20, beta: 0 }),
        ("C7-fact K_42-I = HW(42;3,7,0,20)", Shape::Hw { v: 42, m: 3, n: 7, alpha: 0, beta: 20 }),
        ("HW(30;3,5,7,7)", Shape::Hw { v: 30, m: 3, n: 5, alpha: 7, beta: 7 }),
    ];
    for (name, shape) in cases {
        let t = Instant::now();
        let outcome = solve(&shape, Budget::seconds(60), 42);
        let dt = t.elapsed();
        match outcome {
            Ok(SolveOutcome::Found(_)) => println!("OK    {name}: {dt:?}"),
            Ok(SolveOutcome::NotFound) => println!("MISS  {name}: {dt:?}"),
            Ok(SolveOutcome::Infeasible(r)) => println!("INF   {name}: {r}"),
            Err(e) => println!("ERR   {name}: {e}"),
        }
    }
}
