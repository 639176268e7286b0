//! Revival structure of the global solution at infinite temperature:
//! coherence zeros at odd multiples of pi/(2v) and revival peaks separated
//! by the pseudo-period pi/v.
//!
//! ```sh
//! cargo run --example pseudo_period
//! ```

use qimp::analytic::lambda_global;
use qimp::model::{Beta, SystemParams};

fn main() {
    let p = SystemParams {
        epsilon: 20.0,
        delta: 0.0,
        v: 2.0,
        epsilon_i: 20.0,
        beta: Beta::Infinite,
        gamma_minus: 1.0 / 3.0, // g = 6
        delta_p0: 0.0,
    };
    let t_max = 10.0 / p.gamma();
    let n = 20001;
    let times: Vec<f64> = (0..n).map(|k| t_max * k as f64 / (n - 1) as f64).collect();
    let mods: Vec<f64> = times.iter().map(|&t| lambda_global(t, &p).norm()).collect();

    println!("|Lambda_global(t)| = e^(-gamma t / 2) |cos(v t)| with v = {}\n", p.v);

    println!("zeros (predicted at (2k+1) pi / 2v):");
    let mut k_zero = 0;
    for i in 1..n - 1 {
        if mods[i] < mods[i - 1] && mods[i] < mods[i + 1] && mods[i] < 1e-3 {
            let predicted = (2.0 * k_zero as f64 + 1.0) * std::f64::consts::PI / (2.0 * p.v);
            println!(
                "  found {:>9.5}   predicted {:>9.5}   offset {:.1e}",
                times[i],
                predicted,
                (times[i] - predicted).abs()
            );
            k_zero += 1;
        }
    }

    println!("\nrevival peaks (consecutive spacing should be pi/v = {:.6}):", std::f64::consts::PI / p.v);
    let mut peaks = Vec::new();
    for i in 1..n - 1 {
        if mods[i] > mods[i - 1] && mods[i] > mods[i + 1] {
            peaks.push(times[i]);
        }
    }
    for w in peaks.windows(2) {
        println!("  {:>9.5} -> {:>9.5}   spacing {:.6}", w[0], w[1], w[1] - w[0]);
    }
}
