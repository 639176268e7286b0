//! Thermal emission/absorption rates and the equilibrium impurity imbalance
//! across temperatures, from the detailed-balance relation
//! gamma_+ = e^(-beta eps_I) gamma_-.
//!
//! ```sh
//! cargo run --example detailed_balance
//! ```

use qimp::model::{thermal_rates, Beta, SystemParams};

fn main() {
    let base = SystemParams {
        epsilon: 20.0,
        delta: 0.0,
        v: 2.0,
        epsilon_i: 20.0,
        beta: Beta::Infinite,
        gamma_minus: 1.0,
        delta_p0: 0.0,
    };

    println!(
        "{:>12} {:>12} {:>14} {:>14} {:>12}",
        "beta", "gamma_+", "gamma_+/gamma_-", "tanh(be/2)", "delta_p_bar"
    );
    let betas = [
        Beta::Infinite,
        Beta::Finite(1e-3),
        Beta::Finite(1e-2),
        Beta::Finite(0.05),
        Beta::Finite(0.1),
        Beta::Finite(0.5),
        Beta::Finite(1.0),
        Beta::Finite(10.0),
    ];
    for beta in betas {
        let p = SystemParams { beta, ..base };
        let (gm, gp) = thermal_rates(&p);
        let expected_imbalance = match beta {
            Beta::Infinite => 0.0,
            Beta::Finite(b) => (b * p.epsilon_i / 2.0).tanh(),
        };
        let label = match beta {
            Beta::Infinite => "infinite T".to_string(),
            Beta::Finite(b) => format!("{b}"),
        };
        println!(
            "{label:>12} {gp:>12.6e} {:>14.8} {expected_imbalance:>14.8} {:>12.8}",
            gp / gm,
            p.delta_p_bar()
        );
    }

    println!("\nthe equilibrium imbalance (gamma_- - gamma_+)/gamma equals tanh(beta eps_I / 2),");
    println!("vanishing at infinite temperature and saturating to 1 in the cold limit.");
}
