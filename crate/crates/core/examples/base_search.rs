//! Local search for a base permutation with reliable pivot positions.
//!
//! Scores `P` by the sum of Bhattacharyya parameters of the pivot bit-channels
//! of `M_P` at a design SNR; padding coordinates count as noiseless.
//! Simulated annealing over transpositions, with random restarts.
//!
//! `cargo run --release --example base_search -- egolay24-12 3.0 20 1`

use polar_orbit::codes::builtin;
use polar_orbit::permgroup::Permutation;
use polar_orbit::polar::PolarSpec;
use polar_orbit::transform::polar_transform;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Bhattacharyya parameters of the synthetic channels, natural order.
fn bhattacharyya(z: &[f64]) -> Vec<f64> {
    let n = z.len();
    if n == 1 {
        return z.to_vec();
    }
    let h = n / 2;
    let mut left = vec![0.0; h];
    let mut right = vec![0.0; h];
    for i in 0..h {
        let (a, b) = (z[i], z[i + h]);
        left[i] = a + b - a * b;
        right[i] = a * b;
    }
    let mut out = bhattacharyya(&left);
    out.extend(bhattacharyya(&right));
    out
}

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let name = args.get(1).map_or("egolay24-12", String::as_str);
    let db: f64 = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(3.0);
    let restarts: usize = args.get(3).and_then(|s| s.parse().ok()).unwrap_or(20);
    let seed: u64 = args.get(4).and_then(|s| s.parse().ok()).unwrap_or(1);

    let code = builtin(name).expect("builtin code").zero_padded().expect("padding");
    let n_code = code.n - (code.polar_length() - builtin(name).unwrap().n);
    let big = code.n;
    let spec = PolarSpec::for_length(big).unwrap();
    let z0 = (-(code.k as f64 / n_code as f64) * 10f64.powf(db / 10.0)).exp();

    let score = |p: &Permutation| -> f64 {
        let t = polar_transform(&code.g, p, &spec).unwrap();
        // channel seen at polar index i is code coordinate π(i)
        let z: Vec<f64> = (0..big).map(|i| if p.image(i) < n_code { z0 } else { 0.0 }).collect();
        let zs = bhattacharyya(&z);
        t.pivots.iter().map(|&i| zs[i]).sum()
    };

    let identity = Permutation::identity(big);
    println!("{name}: identity score {:.6}", score(&identity));
    println!("{name}: default score {:.6}", score(&polar_orbit::pod::extend_perm(&code.base, big).unwrap()));

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = (f64::INFINITY, identity.clone());
    for _ in 0..restarts {
        let mut images: Vec<usize> = (0..big).collect();
        images.shuffle(&mut rng);
        let mut cur = Permutation::from_images(images.clone()).unwrap();
        let mut s = score(&cur);
        let steps = 60_000;
        for step in 0..steps {
            let temp = 0.5 * (1e-4f64 / 0.5).powf(step as f64 / steps as f64);
            let (a, b) = (rng.random_range(0..big), rng.random_range(0..big));
            images.swap(a, b);
            let cand = Permutation::from_images(images.clone()).unwrap();
            let cs = score(&cand);
            if cs < s || rng.random::<f64>() < ((s - cs) / temp).exp() {
                s = cs;
                cur = cand;
                if s < best.0 {
                    best = (s, cur.clone());
                }
            } else {
                images.swap(a, b);
            }
        }
    }
    println!("{name}: best score {:.6}", best.0);
    println!("{}", best.1.to_text());
}
