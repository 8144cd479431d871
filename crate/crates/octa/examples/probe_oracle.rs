use octa::model::Shape;
use octa::verify::{brute_force_min_size, OracleOutcome};

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let d: usize = args[1].parse().unwrap();
    let max: usize = args[2].parse().unwrap();
    let s = Shape::new(d).unwrap();
    let t = std::time::Instant::now();
    match brute_force_min_size(s, max).unwrap() {
        OracleOutcome::Found { size, witness } => {
            println!("d={d} max={max}: found size {size} witness {witness:?} ({:?})", t.elapsed());
        }
        OracleOutcome::NoneWithin { .. } => {
            println!("d={d} max={max}: none ({:?})", t.elapsed());
        }
    }
}
