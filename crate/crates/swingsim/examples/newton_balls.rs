//! Two balls fall in different gravitational fields. Each real ball
//! conserves its own energy exactly; the "ball" built by subtracting their
//! energies conserves a total too, but nothing falls that way: its
//! potential part even goes negative while both real balls are still
//! airborne.
//!
//! ```bash
//! cargo run --example newton_balls
//! ```

use swingsim::newtonian::{ball_energy, ball_state, demo_pair, pseudo_ball};

fn main() {
    let (b1, b2) = demo_pair();
    println!(
        "ball 1: m = {} kg, g = {} m/s2, h0 = {} m, impact at {:.4} s",
        b1.mass,
        b1.gravity,
        b1.initial_height,
        b1.impact_time()
    );
    println!(
        "ball 2: m = {} kg, g = {} m/s2, h0 = {} m, impact at {:.4} s",
        b2.mass,
        b2.gravity,
        b2.initial_height,
        b2.impact_time()
    );

    let t_end = b1.impact_time().min(b2.impact_time());
    println!("\n{:>6} {:>8} {:>8} {:>9} {:>9} {:>9} {:>9} {:>9}",
        "t", "h1", "h2", "v1_tot", "v2_tot", "ke3", "pe3", "v3_tot");
    let mut pe3_went_negative = false;
    for k in 0..=10 {
        let t = t_end * k as f64 / 10.0;
        let s1 = ball_state(&b1, t).unwrap();
        let s2 = ball_state(&b2, t).unwrap();
        let e1 = ball_energy(&b1, &s1);
        let e2 = ball_energy(&b2, &s2);
        let e3 = pseudo_ball(&e1, &e2);
        pe3_went_negative |= e3.pe < 0.0;
        println!(
            "{t:>6.3} {:>8.3} {:>8.3} {:>9.4} {:>9.4} {:>9.4} {:>9.4} {:>9.4}",
            s1.height, s2.height, e1.total, e2.total, e3.ke, e3.pe, e3.total
        );
    }

    println!("\nreal totals stay at 78.4 J and 24.0 J; the difference stays at 54.4 J");
    println!("pseudo potential energy went negative before either impact: {pe3_went_negative}");
    println!("no airborne ball has negative potential energy, so no equation of motion produces the pseudo series");
}
