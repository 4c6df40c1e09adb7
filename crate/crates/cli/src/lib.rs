//! Subcommand implementations behind the `memhopf` binary.
//!
//! Each command reads a [`RunConfig`], writes its files under the output
//! directory and returns the text report it printed.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use memhopf::config::{ExportFormat, RunConfig};
use memhopf::error::{Error, Result};
use memhopf::model::linearize;
use memhopf::report::{self, Record};
use memhopf::simulator::diagnostics::diagnose_signal;
use memhopf::simulator::export::{write_binary, write_csv, Field};
use memhopf::simulator::run;
use memhopf::spectral::{
    classify_conditions, critical_set, hopf_curve_scan, hopf_point, stability_verdict, CurveScan,
};
use memhopf::{normal_form, HopfPoint, NormalFormResult};

/// Output of one command: the printed report and the files written.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Outcome {
    pub report: String,
    pub files: Vec<PathBuf>,
    pub warnings: Vec<String>,
}

pub fn load_config(path: &Path) -> Result<RunConfig> {
    RunConfig::from_text(&fs::read_to_string(path)?)
}

fn create(out: &Path, name: &str, files: &mut Vec<PathBuf>) -> Result<BufWriter<File>> {
    fs::create_dir_all(out)?;
    let path = out.join(name);
    let f = File::create(&path)?;
    files.push(path);
    Ok(BufWriter::new(f))
}

fn save_report(out: &Path, name: &str, text: &str, files: &mut Vec<PathBuf>) -> Result<()> {
    let mut w = create(out, name, files)?;
    w.write_all(text.as_bytes())?;
    w.flush()?;
    Ok(())
}

/// Conditions, thresholds, first Hopf point(s) and, with `analyze.tau`, a verdict.
pub fn cmd_analyze(cfg: &RunConfig, out: &Path) -> Result<Outcome> {
    let p = &cfg.params;
    let lin = linearize(p)?;
    let mut records = vec![
        Record::new("params")
            .text("variant", p.variant.as_str())
            .num("beta", p.beta)
            .num("m", p.m)
            .num("gamma", p.gamma)
            .num("d11", p.d11)
            .num("d22", p.d22)
            .num("d21", p.d21)
            .num("ell", p.ell)
            .num("u_star", lin.u_star)
            .num("v_star", lin.v_star),
        report::conditions_record(&classify_conditions(&lin, p)),
    ];
    let mut warnings = Vec::new();
    match critical_set(p) {
        Ok(set) => {
            records.push(
                Record::new("critical")
                    .num("tau_star", set.tau_star)
                    .flag("double_hopf", set.is_double_hopf()),
            );
            records.extend(set.points.iter().map(report::hopf_record));
        }
        Err(Error::NoHopfPoint) => records.push(Record::new("critical").text("tau_star", "none")),
        Err(e) => warnings.push(format!("{}: {e}", e.code())),
    }
    if let Some(tau) = cfg.analyze_tau {
        records.push(report::verdict_record(
            p.d21,
            tau,
            &stability_verdict(p, tau)?,
        ));
    }
    let text = report::render(&records);
    let mut files = Vec::new();
    save_report(out, "analyze.txt", &text, &mut files)?;
    Ok(Outcome {
        report: text,
        files,
        warnings,
    })
}

/// Scans `τ_{n,0}(d21)` and writes `curves.csv` and `crossings.csv`.
pub fn cmd_curves(cfg: &RunConfig, out: &Path) -> Result<Outcome> {
    let c = cfg.curves;
    let mut scan = hopf_curve_scan(&cfg.params, c.d21_min, c.d21_max, c.step)?;
    if c.boundary_only {
        scan.crossings.retain(|x| x.on_boundary);
    }
    let mut warnings = Vec::new();
    if scan.points.is_empty() {
        warnings.push(format!(
            "no Hopf curves in d21 range [{}, {}]",
            c.d21_min, c.d21_max
        ));
    }
    let mut files = Vec::new();
    let mut w = create(out, "curves.csv", &mut files)?;
    report::write_curve_csv(&scan, &mut w)?;
    w.flush()?;
    let mut w = create(out, "crossings.csv", &mut files)?;
    report::write_crossing_csv(&scan, &mut w)?;
    w.flush()?;
    let text = report::render(&[curves_record(&scan)]);
    Ok(Outcome {
        report: text,
        files,
        warnings,
    })
}

fn curves_record(scan: &CurveScan) -> Record {
    let mut rec = Record::new("curves").text("points", scan.points.len().to_string());
    for (i, x) in scan.crossings.iter().enumerate() {
        rec = rec.text(
            &format!("crossing.{i}"),
            format!(
                "d21={} tau={} modes={},{}",
                report::shortest(x.d21),
                report::shortest(x.tau),
                x.n_a,
                x.n_b
            ),
        );
    }
    rec
}

/// Hopf points to analyse: an explicit `normalform.n_c`, or the first crossing set.
pub fn target_points(cfg: &RunConfig) -> Result<Vec<HopfPoint>> {
    let lin = linearize(&cfg.params)?;
    match cfg.normal_form.n_c {
        Some(n) => Ok(vec![hopf_point(&lin, n, cfg.normal_form.j)?]),
        None => Ok(critical_set(&cfg.params)?.points),
    }
}

/// Normal form at each target Hopf point; writes `normalform.csv` and `normalform.txt`.
pub fn cmd_normalform(cfg: &RunConfig, out: &Path) -> Result<Outcome> {
    let rows: Vec<(HopfPoint, NormalFormResult)> = target_points(cfg)?
        .into_iter()
        .map(|hp| normal_form(&cfg.params, &hp).map(|d| (hp, d.result)))
        .collect::<Result<_>>()?;
    let mut files = Vec::new();
    let mut w = create(out, "normalform.csv", &mut files)?;
    report::write_normal_form_csv(&rows, &mut w)?;
    w.flush()?;
    let records: Vec<Record> = rows
        .iter()
        .map(|(hp, nf)| report::normal_form_record(hp, nf))
        .collect();
    let text = report::render(&records);
    save_report(out, "normalform.txt", &text, &mut files)?;
    Ok(Outcome {
        report: text,
        files,
        warnings: Vec::new(),
    })
}

/// Integrates the `sim` block, exports the trajectory and writes `diagnostics.txt`.
pub fn cmd_simulate(cfg: &RunConfig, out: &Path) -> Result<Outcome> {
    let sim = cfg.sim.ok_or_else(|| Error::MissingKey("sim.tau".into()))?;
    let traj = run(&cfg.params, sim.tau, &sim.sim, &sim.initial)?;
    let diag = diagnose_signal(&traj, sim.window, sim.signal)?;
    let mut files = Vec::new();
    if matches!(sim.export, ExportFormat::Csv | ExportFormat::Both) {
        for field in [Field::U, Field::V] {
            let mut w = create(out, &format!("trajectory_{}.csv", field.name()), &mut files)?;
            write_csv(&traj, field, &mut w)?;
            w.flush()?;
        }
    }
    if matches!(sim.export, ExportFormat::Binary | ExportFormat::Both) {
        let mut w = create(out, "trajectory.bin", &mut files)?;
        write_binary(&traj, &mut w)?;
        w.flush()?;
    }
    let run_rec = Record::new("run")
        .num("tau", sim.tau)
        .num("dt", traj.grid.dt)
        .text("n_x", traj.grid.n_x.to_string())
        .num("t_end", sim.sim.t_end)
        .text("scheme", sim.sim.scheme.as_str());
    let text = report::render(&[run_rec, report::diagnostics_record(&diag)]);
    save_report(out, "diagnostics.txt", &text, &mut files)?;
    let mut warnings = Vec::new();
    if diag.inconclusive {
        warnings.push(
            "fewer than 3 peaks in the diagnostic window; period analysis is inconclusive".into(),
        );
    }
    Ok(Outcome {
        report: text,
        files,
        warnings,
    })
}
