//! Grid accuracy of noisy estimates for N = 2..10.

use irgaze::gaze::{accuracy_table, grid_cell, GridSpec};
use irgaze::imaging::Point;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

fn main() {
    let grid = GridSpec::new(5, 60.0, 60.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let noise = Normal::new(0.0, 1.5).unwrap();
    let pairs: Vec<(Point, Point)> = (1..=25)
        .cycle()
        .take(250)
        .map(|label| {
            let truth = grid.cell_center(label);
            let est = Point::new(
                truth.x + noise.sample(&mut rng),
                truth.y + noise.sample(&mut rng),
            );
            (est, truth)
        })
        .collect();
    println!(
        "cell of (30, 30) on the 5x5 grid: {}",
        grid_cell(Point::new(30.0, 30.0), &grid)
    );
    println!("N,accuracy");
    for (n, acc) in accuracy_table(&pairs, 60.0, 60.0, 2..=10).unwrap() {
        println!("{n},{:.1}", 100.0 * acc);
    }
}
