//! Frames written in the exchange format reload bit for bit.

use pinchlab::geometry::io::{load, save};
use pinchlab::scenarios::{generate, ScenarioSpec};

fn main() -> pinchlab::error::Result<()> {
    let dir = std::env::temp_dir().join("pinchlab-io-example");
    std::fs::create_dir_all(&dir).expect("temp dir");
    for spec in [
        ScenarioSpec::PerturbedCircle {
            radius: 1.0,
            amplitude: 0.1,
            n: 64,
            seed: 2,
        },
        ScenarioSpec::Dumbbell {
            bell: 1.0,
            neck: 0.2,
            n: 100,
        },
    ] {
        let surface = generate(&spec)?;
        let path = dir.join(format!("{}.txt", spec.kind_name()));
        save(&path, &surface, Some(0.25))?;
        let (back, t) = load(&path)?;
        println!("{}: {} vertices, t = {t:?}, identical: {}", path.display(), back.len(), back == surface);
    }
    Ok(())
}
