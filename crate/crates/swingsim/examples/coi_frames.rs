//! Relative motion in center-of-inertia references: the system frame, the
//! aggregated equivalent machine of a group, and the inner-group machines
//! left behind after aggregation. Verifies the closure and composition
//! identities along the way.
//!
//! ```bash
//! cargo run --example coi_frames
//! ```

use swingsim::frames::{equivalent_machine, inner_group, to_reference, GroupSpec, ReferenceSpec};
use swingsim::sim::simulate;

fn main() -> swingsim::Result<()> {
    let loaded = swingsim::bundled::wscc9()?;
    let model = &loaded.scenario.model;
    let traj = simulate(&loaded.scenario)?;

    let fs = to_reference(&traj, model, &ReferenceSpec::system(model))?;
    let group = GroupSpec::new(loaded.group.clone(), model)?;
    let em = equivalent_machine(&fs, &group)?;
    let ig = inner_group(&fs, &group)?;

    // closure: the weighted angle and speed sums vanish in the system frame
    let t = fs.n_samples();
    let mut worst_closure: f64 = 0.0;
    for k in 0..t {
        let sd: f64 = fs.inertias.iter().enumerate().map(|(c, &m)| m * fs.rel_angle[(k, c)]).sum();
        let sw: f64 = fs.inertias.iter().enumerate().map(|(c, &m)| m * fs.rel_speed[(k, c)]).sum();
        worst_closure = worst_closure.max(sd.abs()).max(sw.abs());
    }
    println!("system-frame closure residual: {worst_closure:.2e}");

    // composition: member = equivalent + inner-group, sample by sample
    let mut worst_comp: f64 = 0.0;
    for k in 0..t {
        for (c, &id) in group.members().iter().enumerate() {
            let col = fs.column_of(id)?;
            let back = em.angle[k] + ig.rel_angle[(k, c)];
            worst_comp = worst_comp.max((back - fs.rel_angle[(k, col)]).abs());
        }
    }
    println!("frame composition residual: {worst_comp:.2e}");

    println!("\ngroup {:?}: aggregate inertia {:.5}", group.members(), group.total_inertia());
    for k in (0..t).step_by(t / 8) {
        println!(
            "t={:>5.2}  equivalent angle {:>7.3} rad, speed {:>7.3} rad/s, inner angles [{:>7.3}, {:>7.3}]",
            fs.times[k],
            em.angle[k],
            em.speed[k],
            ig.rel_angle[(k, 0)],
            ig.rel_angle[(k, 1)],
        );
    }
    Ok(())
}
