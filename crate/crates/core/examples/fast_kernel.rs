//! Pruned search against the exhaustive one: identical output, less work.

use pinchlab::geometry::build_geometry;
use pinchlab::inradius::{mu_brute, mu_fast};
use pinchlab::scenarios::{generate, ScenarioSpec};
use std::time::Instant;

fn main() -> pinchlab::error::Result<()> {
    for n in [1024, 4096, 8192] {
        let s = generate(&ScenarioSpec::PerturbedCircle {
            radius: 1.0,
            amplitude: 0.1,
            n,
            seed: 7,
        })?;
        let g = build_geometry(&s)?;
        let t = Instant::now();
        let brute = mu_brute(&s, &g)?;
        let tb = t.elapsed();
        let t = Instant::now();
        let fast = mu_fast(&s, &g)?;
        let tf = t.elapsed();
        let diff = brute.values.iter().zip(&fast.values).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        let same = brute.contacts == fast.contacts;
        println!("N = {n:5}: brute {tb:?}, fast {tf:?}, max diff {diff:.1e}, same contacts {same}");
    }
    Ok(())
}
