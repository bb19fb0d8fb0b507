//! Command-line front end: loads scenarios, runs the simulation and the
//! machine transformations, and emits CSV/JSON artifacts.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use swingsim::energy::{detect_dlp, emte, igmte, imte, smte, EnergySeries, PeAnchor};
use swingsim::error::Result;
use swingsim::export::{self, Column};
use swingsim::frames::{
    equivalent_machine, inner_group, to_reference, FrameSeries, GroupSpec, ReferenceSpec,
};
use swingsim::model::SystemModel;
use swingsim::newtonian::{ball_energy, ball_state, demo_pair, pseudo_ball};
use swingsim::report::{run_identity_checks, Tolerances};
use swingsim::scenario::{load_scenario, LoadedScenario};
use swingsim::sim::{simulate, Scenario, Trajectory};
use swingsim::transforms::{
    delta_v, ecim_energy, ecim_reconstruct_trajectory, ecim_superposition_check, tcim,
};

#[derive(Parser)]
#[command(
    name = "swingsim",
    about = "Multi-machine transient stability simulation and machine-transformation analysis",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate the swing equations and export the trajectory.
    Simulate(RunArgs),
    /// Export relative-motion frames: system frame, group frame, equivalent machine.
    Frames(RunArgs),
    /// Export transient-energy series and the liberation-point summary.
    Energy(RunArgs),
    /// Run the energy-correction transformation and its checks.
    Ecim(RunArgs),
    /// Run the trajectory-correction transformation and its checks.
    Tcim(RunArgs),
    /// Emit the two-ball free-fall demonstration series.
    NewtonDemo(NewtonArgs),
    /// Run every identity check and write the JSON report.
    CheckAll(CheckArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Scenario JSON path, or a bundled name: wscc9, wscc9-sep.
    #[arg(long)]
    scenario: String,
    /// Study group as comma-separated machine ids, e.g. "1,2".
    #[arg(long)]
    group: Option<String>,
    /// Integration step override, s.
    #[arg(long)]
    dt: Option<f64>,
    /// Output directory (default: $SWINGSIM_OUT or ./swingsim-out).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct NewtonArgs {
    /// Sample spacing, s.
    #[arg(long, default_value_t = 0.001)]
    dt: f64,
    /// Output directory (default: $SWINGSIM_OUT or ./swingsim-out).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CheckArgs {
    #[command(flatten)]
    run: RunArgs,
    /// Tolerance overrides: "name=value,name=value".
    #[arg(long)]
    tol_overrides: Option<String>,
}

fn out_dir(flag: &Option<PathBuf>) -> PathBuf {
    flag.clone()
        .or_else(|| std::env::var_os("SWINGSIM_OUT").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("swingsim-out"))
}

fn load(name: &str) -> Result<LoadedScenario> {
    match name {
        "wscc9" => swingsim::bundled::wscc9(),
        "wscc9-sep" => swingsim::bundled::wscc9_sep(),
        path => load_scenario(path),
    }
}

fn parse_group(arg: &Option<String>) -> Result<Option<Vec<usize>>> {
    match arg {
        None => Ok(None),
        Some(text) => {
            let ids = text
                .split(',')
                .map(|s| s.trim().parse::<usize>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| swingsim::Error::Invariant {
                    invariant: "group ids parse as integers",
                    detail: format!("{text:?}: {e}"),
                })?;
            Ok(Some(ids))
        }
    }
}

/// Loaded scenario plus the frame products every analysis subcommand needs.
struct Study {
    scenario: Scenario,
    traj: Trajectory,
    fs: FrameSeries,
    group: GroupSpec,
    out: PathBuf,
}

impl Study {
    fn model(&self) -> &SystemModel {
        &self.scenario.model
    }
}

fn prepare(args: &RunArgs, need_group: bool) -> Result<Study> {
    let loaded = load(&args.scenario)?;
    let mut scenario = loaded.scenario;
    if let Some(dt) = args.dt {
        scenario.dt = dt;
        scenario.validate()?;
    }
    let group_ids = match parse_group(&args.group)? {
        Some(ids) => ids,
        None => loaded.group.clone(),
    };
    if need_group && group_ids.is_empty() {
        return Err(swingsim::Error::Invariant {
            invariant: "group nonempty when transformation reports requested",
            detail: "pass --group or add a group to the scenario file".into(),
        });
    }
    let traj = simulate(&scenario)?;
    let fs = to_reference(&traj, &scenario.model, &ReferenceSpec::system(&scenario.model))?;
    let group = if group_ids.is_empty() {
        GroupSpec::new((0..scenario.model.n_machines()).collect(), &scenario.model)?
    } else {
        GroupSpec::new(group_ids, &scenario.model)?
    };
    let out = out_dir(&args.out);
    std::fs::create_dir_all(&out)?;
    Ok(Study {
        scenario,
        traj,
        fs,
        group,
        out,
    })
}

fn write(out: &Path, name: &str, columns: &[Column]) -> Result<()> {
    let path = out.join(name);
    export::write_csv(&path, columns)?;
    println!("wrote {}", path.display());
    Ok(())
}

fn write_json<T: Serialize>(out: &Path, name: &str, value: &T) -> Result<()> {
    let path = out.join(name);
    std::fs::write(&path, serde_json::to_string_pretty(value).expect("serializes") + "\n")?;
    println!("wrote {}", path.display());
    Ok(())
}

#[derive(Serialize)]
struct EnergyAt {
    ke: f64,
    pe: f64,
    total: f64,
}

#[derive(Serialize)]
struct EntitySummary {
    entity: String,
    dlp_index: Option<usize>,
    dlp_time: Option<f64>,
    separated: bool,
    at_clearing: EnergyAt,
    at_dlp: Option<EnergyAt>,
}

fn entity_summary(
    es: &EnergySeries,
    force_pf: &[f64],
    angle: &[f64],
    times: &[f64],
    clear_index: usize,
) -> EntitySummary {
    let dlp = detect_dlp(force_pf, angle, times, clear_index);
    let at = |k: usize| EnergyAt {
        ke: es.ke[k],
        pe: es.pe[k],
        total: es.total[k],
    };
    EntitySummary {
        entity: es.entity.to_string(),
        dlp_index: dlp.index,
        dlp_time: dlp.time,
        separated: dlp.separated,
        at_clearing: at(clear_index),
        at_dlp: dlp.index.map(at),
    }
}

fn cmd_simulate(args: &RunArgs) -> Result<bool> {
    let study = prepare(args, false)?;
    write(&study.out, "trajectory.csv", &export::trajectory_columns(&study.traj))?;
    Ok(true)
}

fn cmd_frames(args: &RunArgs) -> Result<bool> {
    let study = prepare(args, false)?;
    write(&study.out, "frame_sys.csv", &export::frame_columns(&study.fs))?;
    let em = equivalent_machine(&study.fs, &study.group)?;
    let ig = inner_group(&study.fs, &study.group)?;
    write(&study.out, "frame_group.csv", &export::frame_columns(&ig))?;
    write(
        &study.out,
        "equivalent_machine.csv",
        &export::equivalent_machine_columns(&em),
    )?;
    Ok(true)
}

fn cmd_energy(args: &RunArgs) -> Result<bool> {
    let study = prepare(args, true)?;
    let model = study.model();
    let anchor = PeAnchor::for_frame(model, &study.fs)?;
    let em = equivalent_machine(&study.fs, &study.group)?;
    let ig = inner_group(&study.fs, &study.group)?;
    let clear = study.fs.clear_index;
    let times = &study.fs.times;

    let mut summaries = Vec::new();
    let mut imtes = Vec::new();
    for id in 0..model.n_machines() {
        let e = imte(&study.fs, id, &anchor)?;
        write(&study.out, &format!("energy_machine_{id}.csv"), &export::energy_columns(&e))?;
        summaries.push(entity_summary(
            &e,
            &study.fs.force_pf_of(id)?,
            &study.fs.angle_of(id)?,
            times,
            clear,
        ));
        imtes.push(e);
    }
    let e_em = emte(&em, &anchor)?;
    write(&study.out, "energy_equivalent.csv", &export::energy_columns(&e_em))?;
    summaries.push(entity_summary(&e_em, &em.force_pf, &em.angle, times, clear));
    for &id in study.group.members() {
        let e = igmte(&ig, id, &anchor)?;
        write(&study.out, &format!("energy_inner_{id}.csv"), &export::energy_columns(&e))?;
    }
    let sm = smte(&imtes)?;
    write(&study.out, "energy_superimposed.csv", &export::energy_columns(&sm))?;

    write_json(&study.out, "energy_summary.json", &summaries)?;
    Ok(true)
}

fn cmd_ecim(args: &RunArgs) -> Result<bool> {
    let study = prepare(args, true)?;
    let model = study.model();
    let anchor = PeAnchor::for_frame(model, &study.fs)?;
    let em = equivalent_machine(&study.fs, &study.group)?;
    let ig = inner_group(&study.fs, &study.group)?;
    let e_em = emte(&em, &anchor)?;

    let mut ecims = Vec::new();
    for &id in study.group.members() {
        let e_im = imte(&study.fs, id, &anchor)?;
        let e_ig = igmte(&ig, id, &anchor)?;
        let ec = ecim_energy(&e_im, &e_ig)?;
        write(&study.out, &format!("ecim_{id}.csv"), &export::ecim_columns(&ec))?;
        let tr = ecim_reconstruct_trajectory(&e_im, &e_ig, &study.fs, id)?;
        write(
            &study.out,
            &format!("ecim_trajectory_{id}.csv"),
            &export::ecim_trajectory_columns(&tr),
        )?;
        if tr.broken {
            println!("ecim {id}: reconstructed trajectory is broken");
        }
        ecims.push(ec);
    }
    let check = ecim_superposition_check(&ecims, &e_em, &study.group)?;
    write_json(
        &study.out,
        "ecim_check.json",
        &serde_json::json!({
            "total": {"max_deviation": check.total_dev, "worst_index": check.total_worst},
            "ke": {"max_deviation": check.ke_dev, "worst_index": check.ke_worst},
            "pe": {"max_deviation": check.pe_dev, "worst_index": check.pe_worst},
        }),
    )?;
    Ok(true)
}

fn cmd_tcim(args: &RunArgs) -> Result<bool> {
    let study = prepare(args, true)?;
    let model = study.model();
    let anchor = PeAnchor::for_frame(model, &study.fs)?;
    let em = equivalent_machine(&study.fs, &study.group)?;
    let e_em = emte(&em, &anchor)?;

    for &id in study.group.members() {
        let tc = tcim(&em, &e_em, id)?;
        write(&study.out, &format!("tcim_{id}.csv"), &export::tcim_columns(&tc))?;
        let e_im = imte(&study.fs, id, &anchor)?;
        let dv = delta_v(&e_im, &tc)?;
        write(&study.out, &format!("delta_v_{id}.csv"), &export::delta_v_columns(&dv))?;
    }
    Ok(true)
}

fn cmd_newton(args: &NewtonArgs) -> Result<bool> {
    let out = out_dir(&args.out);
    std::fs::create_dir_all(&out)?;
    let (b1, b2) = demo_pair();
    let t_end = b1.impact_time().min(b2.impact_time());
    let steps = (t_end / args.dt).floor() as usize;

    let mut cols: Vec<Vec<f64>> = vec![Vec::new(); 12];
    for k in 0..=steps {
        let t = k as f64 * args.dt;
        let s1 = ball_state(&b1, t)?;
        let s2 = ball_state(&b2, t)?;
        let e1 = ball_energy(&b1, &s1);
        let e2 = ball_energy(&b2, &s2);
        let e3 = pseudo_ball(&e1, &e2);
        for (c, v) in [
            t, s1.height, s2.height, e1.ke, e1.pe, e1.total, e2.ke, e2.pe, e2.total, e3.ke,
            e3.pe, e3.total,
        ]
        .into_iter()
        .enumerate()
        {
            cols[c].push(v);
        }
    }
    let names = [
        "t", "h1", "h2", "ke1", "pe1", "v1", "ke2", "pe2", "v2", "ke3", "pe3", "v3",
    ];
    let columns: Vec<Column> = names
        .iter()
        .zip(cols)
        .map(|(n, v)| Column::Float(n.to_string(), v))
        .collect();
    write(&out, "newton_balls.csv", &columns)?;
    Ok(true)
}

fn cmd_check_all(args: &CheckArgs) -> Result<bool> {
    let study = prepare(&args.run, true)?;
    let mut tol = Tolerances::default();
    if let Some(text) = &args.tol_overrides {
        for pair in text.split(',') {
            let (name, value) = pair.split_once('=').ok_or(swingsim::Error::Invariant {
                invariant: "tolerance overrides are name=value pairs",
                detail: pair.to_string(),
            })?;
            let value: f64 = value.trim().parse().map_err(|e| swingsim::Error::Invariant {
                invariant: "tolerance values parse as numbers",
                detail: format!("{value:?}: {e}"),
            })?;
            tol.apply_override(name.trim(), value)
                .map_err(|detail| swingsim::Error::Invariant {
                    invariant: "known tolerance name",
                    detail,
                })?;
        }
    }
    let report = run_identity_checks(study.model(), &study.traj, &study.group, &tol)?;
    let path = study.out.join("identity_report.json");
    std::fs::write(&path, report.to_json() + "\n")?;
    println!("wrote {}", path.display());
    for check in &report.checks {
        println!(
            "{:<26} {:>12.3e} (tol {:>8.0e}) {}",
            check.name,
            check.max_deviation,
            check.tolerance,
            if check.pass { "pass" } else { "FAIL" }
        );
    }
    Ok(report.all_pass())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Simulate(args) => cmd_simulate(args),
        Command::Frames(args) => cmd_frames(args),
        Command::Energy(args) => cmd_energy(args),
        Command::Ecim(args) => cmd_ecim(args),
        Command::Tcim(args) => cmd_tcim(args),
        Command::NewtonDemo(args) => cmd_newton(args),
        Command::CheckAll(args) => cmd_check_all(args),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
