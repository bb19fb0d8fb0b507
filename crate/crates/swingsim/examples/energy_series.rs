//! Transient energy of every entity kind on the separating case: individual
//! machines, the group equivalent machine, the inner-group machines and the
//! superimposed machine, with liberation points and post-fault conservation.
//!
//! ```bash
//! cargo run --example energy_series
//! ```

use swingsim::energy::{detect_dlp, emte, igmte, imte, smte, EnergySeries, PeAnchor};
use swingsim::frames::{equivalent_machine, inner_group, to_reference, GroupSpec, ReferenceSpec};
use swingsim::sim::simulate;

fn conservation(e: &EnergySeries, clear_index: usize) -> f64 {
    let v_ref = e.total[clear_index];
    (clear_index..e.n_samples())
        .map(|k| (e.total[k] - v_ref).abs() / v_ref.abs().max(1.0))
        .fold(0.0, f64::max)
}

fn main() -> swingsim::Result<()> {
    let loaded = swingsim::bundled::wscc9_sep()?;
    let model = &loaded.scenario.model;
    let traj = simulate(&loaded.scenario)?;
    let fs = to_reference(&traj, model, &ReferenceSpec::system(model))?;
    let group = GroupSpec::new(loaded.group.clone(), model)?;
    let em = equivalent_machine(&fs, &group)?;
    let ig = inner_group(&fs, &group)?;
    let anchor = PeAnchor::for_frame(model, &fs)?;
    let clear = fs.clear_index;

    println!("entity            V(t_cl)    post-fault drift   liberation");
    let mut imtes = Vec::new();
    for id in 0..model.n_machines() {
        let e = imte(&fs, id, &anchor)?;
        let dlp = detect_dlp(&fs.force_pf_of(id)?, &fs.angle_of(id)?, &fs.times, clear);
        println!(
            "{:<16} {:>9.4}   {:>14.2e}   {}",
            e.entity.to_string(),
            e.total[clear],
            conservation(&e, clear),
            dlp.time.map(|t| format!("{t:.3} s")).unwrap_or_else(|| "none".into()),
        );
        imtes.push(e);
    }
    let e_em = emte(&em, &anchor)?;
    let dlp_em = detect_dlp(&em.force_pf, &em.angle, &em.times, clear);
    println!(
        "{:<16} {:>9.4}   {:>14.2e}   {}",
        e_em.entity.to_string(),
        e_em.total[clear],
        conservation(&e_em, clear),
        dlp_em.time.map(|t| format!("{t:.3} s")).unwrap_or_else(|| "none".into()),
    );
    for &id in group.members() {
        let e = igmte(&ig, id, &anchor)?;
        println!(
            "{:<16} {:>9.4}   {:>14.2e}   -",
            e.entity.to_string(),
            e.total[clear],
            conservation(&e, clear),
        );
    }

    // the superimposed machine: a sum of energies with no motion behind it
    let sm = smte(&imtes)?;
    println!(
        "{:<16} {:>9.4}   {:>14.2e}   -",
        sm.entity.to_string(),
        sm.total[clear],
        conservation(&sm, clear),
    );
    if let Some(k) = detect_dlp(&fs.force_pf_of(1)?, &fs.angle_of(1)?, &fs.times, clear).index {
        println!(
            "\nresidual superimposed kinetic energy at machine 1's liberation: {:.4} (> 0)",
            sm.ke[k]
        );
    }
    Ok(())
}
