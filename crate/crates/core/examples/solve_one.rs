//! Solve a single random instance with the coprime-shift ensemble and
//! compare against the exact optimum and nearest neighbor.
//!
//! Usage: `cargo run --release -p gstsp --example solve_one [n] [seed]`

use gstsp::baselines::nearest_neighbor;
use gstsp::instances::generate_uniform;
use gstsp::oracle::{held_karp, optimality_gap};
use gstsp::solver::{solve_ensemble, SolverConfig};

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let n: usize = args.get(1).map(|s| s.parse().expect("n")).unwrap_or(20);
    let seed: u64 = args.get(2).map(|s| s.parse().expect("seed")).unwrap_or(0);

    let inst = generate_uniform::<f64>(n, seed, 1).unwrap().remove(0);
    let cfg = SolverConfig::default();

    let result = solve_ensemble(&inst, &cfg).unwrap();
    println!(
        "ensemble: length {:.4} via shift k={} (restart {})",
        result.decoded_length, result.k, result.restart_index
    );
    println!("tour: {:?}", result.tour.order);

    let nn = nearest_neighbor(&inst, 0).unwrap();
    println!("nearest neighbor: length {:.4}", nn.length);

    if n <= 22 {
        let opt = held_karp(&inst).unwrap();
        println!("optimum: length {:.4}", opt.tour.length);
        println!(
            "gaps: ensemble {:.2}%, nn {:.2}%",
            optimality_gap(result.decoded_length, opt.tour.length).unwrap(),
            optimality_gap(nn.length, opt.tour.length).unwrap()
        );
    }
}
