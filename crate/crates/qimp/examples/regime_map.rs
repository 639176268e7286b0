//! ASCII rendering of the (v, gamma) validity map: where each construction
//! admits a GKSL master equation.
//!
//!   L  local only      (perturbative condition holds, spectrum degenerate)
//!   G  global only     (non-degenerate spectrum, coupling too strong)
//!   B  both            (all conditions hold)
//!   .  neither
//!
//! ```sh
//! cargo run --example regime_map
//! ```

use qimp::model::{Beta, SystemParams};
use qimp::regimes::{regime_diagram, DiagramSpec, RegimeLabel, DEFAULT_ETA};

fn main() {
    let fixed = SystemParams {
        epsilon: 20.0,
        delta: 0.0,
        v: 2.0,
        epsilon_i: 20.0,
        beta: Beta::Infinite,
        gamma_minus: 1.0,
        delta_p0: 0.0,
    };
    let spec = DiagramSpec {
        v_range: (0.1, 10.0, 64),
        gamma_range: (0.1, 20.0, 28),
        fixed,
        eta: DEFAULT_ETA,
    };
    let d = regime_diagram(&spec).expect("valid spec");

    println!(
        "validity map: eta = {}, local boundary at v = {}, global boundary at 2v = gamma\n",
        spec.eta,
        spec.eta * fixed.omega().min(fixed.epsilon_i)
    );
    // gamma on the vertical axis, increasing upward
    for (ig, &gamma) in d.gamma_values.iter().enumerate().rev() {
        let mut row = String::with_capacity(d.v_values.len());
        for iv in 0..d.v_values.len() {
            row.push(match d.label_at(iv, ig) {
                RegimeLabel::LocalOnly => 'L',
                RegimeLabel::GlobalOnly => 'G',
                RegimeLabel::Both => 'B',
                RegimeLabel::Neither => '.',
            });
        }
        println!("{gamma:>7.2} |{row}");
    }
    let v_lo = d.v_values.first().unwrap();
    let v_hi = d.v_values.last().unwrap();
    println!("        +{}", "-".repeat(d.v_values.len()));
    println!("         v from {v_lo:.2} to {v_hi:.2}");
}
