use std::io::Write;
use std::path::PathBuf;

use krein_enclosure::geometry::{boundary_polyline, polyline_csv, DiskFamilyRegion, Region, RelBound, SpectrumModel};
use krein_enclosure::io::{
    check_csv, ensure_finite, file_digest, format_f64, MatrixLabConfig, PerturbConfig, RegionConfig, RegionKind,
    RunConfig, RunWriter, SlConfig, Tau0Config,
};
use krein_enclosure::lab::{
    run_block_suite, run_krein_suite, verify_tmain, KreinPerturbationProblem, KreinProblemSpec, SuiteReport,
    TrialStatus,
};
use krein_enclosure::sl::constants::{constants_table_csv, log_space};
use krein_enclosure::sl::containment::eigen_rows_csv;
use krein_enclosure::sl::{containment_report, tau0_hilbert_form, SlDiscretization, Tau0Estimate, Tau0Probe};
use krein_enclosure::{Error, Result};
use serde::Serialize;

/// Outcome of a run that completed without an error.
#[derive(Debug, Clone, PartialEq)]
pub enum Verdict {
    Pass,
    Fail(String),
    /// No instance met the hypotheses.
    Hypothesis(String),
}

/// Where outputs go: files under `--out`, or the main table on standard output.
struct Emit<'a> {
    writer: Option<RunWriter>,
    stdout: &'a mut dyn Write,
}

impl Emit<'_> {
    fn json<T: Serialize + ?Sized>(&mut self, name: &str, value: &T) -> Result<()> {
        match &mut self.writer {
            Some(w) => w.json(name, value).map(drop),
            None => ensure_finite(value),
        }
    }

    /// `main` tables are printed when there is no output directory.
    fn csv(&mut self, name: &str, text: &str, main: bool) -> Result<()> {
        match &mut self.writer {
            Some(w) => w.csv(name, text).map(drop),
            None => {
                check_csv(name, text)?;
                if main {
                    self.stdout
                        .write_all(text.as_bytes())
                        .map_err(|e| Error::Config(format!("writing to standard output: {e}")))?;
                }
                Ok(())
            }
        }
    }

    fn finish(self, config: &RunConfig) -> Result<Option<PathBuf>> {
        let Some(w) = self.writer else { return Ok(None) };
        let inputs = config.inputs().into_iter().map(file_digest).collect::<Result<Vec<_>>>()?;
        w.finish(config, inputs).map(Some)
    }
}

pub fn execute(config: &RunConfig, stdout: &mut dyn Write) -> Result<(Verdict, Option<PathBuf>)> {
    let writer = config.out().map(RunWriter::create).transpose()?;
    let mut emit = Emit { writer, stdout };
    let verdict = match config {
        RunConfig::Region(c) => region(c, &mut emit)?,
        RunConfig::MatrixLab(c) => matrix_lab(c, &mut emit)?,
        RunConfig::Perturb(c) => perturb(c, &mut emit)?,
        RunConfig::Sl(c) => sl(c, &mut emit)?,
        RunConfig::Tau0(c) => tau0(c, &mut emit)?,
    };
    let record = emit.finish(config)?;
    Ok((verdict, record))
}

fn region(c: &RegionConfig, emit: &mut Emit) -> Result<Verdict> {
    let bound = RelBound::new(c.a, c.b)?;
    let disks = |kind: &str, centers: SpectrumModel, gamma: Option<f64>| -> Result<Region> {
        Ok(Region::Disks {
            kind: kind.to_string(),
            region: DiskFamilyRegion::new(bound, centers, c.radius_scale)?,
            gamma,
            window: c.window,
        })
    };
    let region = match c.kind {
        RegionKind::Hull => Region::Hull {
            bound,
            window: c.window,
        },
        RegionKind::Bone => {
            let g = c.gamma.ok_or_else(|| Error::Config("gamma: required for kind bone".into()))?;
            disks("bone", SpectrumModel::interval(-g, g)?, Some(g))?
        }
        RegionKind::Halfline => {
            let g = c.gamma.unwrap_or(0.0);
            disks("halfline", SpectrumModel::interval(g, f64::INFINITY)?, Some(g))?
        }
        RegionKind::Disks => match (&c.centers, c.gamma) {
            (Some(pts), _) => disks("disks", SpectrumModel::points(pts)?, None)?,
            (None, Some(g)) => disks("disks", SpectrumModel::interval(-g, g)?, Some(g))?,
            (None, None) => disks("disks", SpectrumModel::real_line(), None)?,
        },
    };
    let boundary = boundary_polyline(&region, c.resolution)?;
    emit.json("region.json", &region.to_json())?;
    if !c.prior {
        emit.csv("boundary.csv", &polyline_csv(&boundary), true)?;
        return Ok(Verdict::Pass);
    }
    let prior = boundary_polyline(
        &Region::PriorHull {
            bound,
            window: c.window,
        },
        c.resolution,
    )?;
    emit.csv("boundary.csv", &polyline_csv(&boundary), false)?;
    emit.csv("prior.csv", &polyline_csv(&prior), false)?;
    let mut both = String::from("curve,re,im\n");
    for (name, pts) in [("region", &boundary), ("prior", &prior)] {
        for z in pts.iter() {
            both.push_str(&format!("{name},{},{}\n", format_f64(z.re), format_f64(z.im)));
        }
    }
    if emit.writer.is_none() {
        emit.csv("curves.csv", &both, true)?;
    }
    Ok(Verdict::Pass)
}

fn opt(v: Option<f64>) -> String {
    v.map(format_f64).unwrap_or_default()
}

fn trials_csv(report: &SuiteReport) -> String {
    let mut out = String::from("index,seed,dim,status,nonreal,a,b,tau,gamma,failures\n");
    for t in &report.details {
        let status = match t.status {
            TrialStatus::Verified => "verified",
            TrialStatus::Failed => "failed",
            TrialStatus::Rejected => "rejected",
        };
        out.push_str(&format!(
            "{},{},{},{status},{},{},{},{},{},{}\n",
            t.index,
            t.seed,
            t.dim,
            t.nonreal_count,
            opt(t.bounds.a),
            opt(t.bounds.b),
            opt(t.bounds.tau),
            opt(t.bounds.gamma),
            t.failures.len()
        ));
    }
    out
}

fn suite_verdict(report: &SuiteReport) -> Verdict {
    if report.failed > 0 {
        Verdict::Fail(format!(
            "{} of {} trials failed; seeds {:?}",
            report.failed, report.trials, report.failed_seeds
        ))
    } else if report.rejected == report.trials {
        Verdict::Hypothesis(format!("all {} trials rejected", report.trials))
    } else {
        Verdict::Pass
    }
}

fn suite_summary(report: &SuiteReport) {
    eprintln!(
        "{} trials: {} verified, {} failed, {} rejected; {} non-real eigenvalues",
        report.trials, report.verified, report.failed, report.rejected, report.nonreal_eigenvalues
    );
}

fn matrix_lab(c: &MatrixLabConfig, emit: &mut Emit) -> Result<Verdict> {
    let report = run_block_suite(&c.gen_params(), &c.verify_options(), c.seed, c.trials)?;
    suite_summary(&report);
    emit.json("report.json", &report)?;
    emit.csv("trials.csv", &trials_csv(&report), true)?;
    Ok(suite_verdict(&report))
}

fn perturb(c: &PerturbConfig, emit: &mut Emit) -> Result<Verdict> {
    let Some(path) = &c.problem else {
        let report = run_krein_suite(&c.gen_params(), &c.tmain_options(), c.seed, c.trials)?;
        suite_summary(&report);
        emit.json("report.json", &report)?;
        emit.csv("trials.csv", &trials_csv(&report), true)?;
        return Ok(suite_verdict(&report));
    };
    let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    let spec: KreinProblemSpec =
        serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    let problem = KreinPerturbationProblem::from_spec(&spec)?;
    let outcome = verify_tmain(&problem, &c.tmain_options())?;
    let report = &outcome.report;

    let mut eig = String::from("re,im,contained,margin\n");
    for e in &report.eigenvalues {
        eig.push_str(&format!("{},{},{},{}\n", format_f64(e.re), format_f64(e.im), e.contained, format_f64(e.margin)));
    }
    let mut curve = String::from("b,a,area\n");
    for p in &outcome.curve {
        curve.push_str(&format!("{},{},{}\n", format_f64(p.b), format_f64(p.a), opt(p.area)));
    }
    emit.json("report.json", report)?;
    emit.csv("eigenvalues.csv", &eig, true)?;
    emit.csv("curve.csv", &curve, false)?;
    if let Some(r) = &outcome.regions {
        let worse = Region::disks("worse", r.worse.clone(), Some(r.gamma));
        emit.csv("worse.csv", &polyline_csv(&boundary_polyline(&worse, 512)?), false)?;
        if let Some(b) = &r.better {
            let better = Region::disks("better", b.clone(), Some(r.gamma));
            emit.csv("better.csv", &polyline_csv(&boundary_polyline(&better, 512)?), false)?;
        }
    }
    eprintln!(
        "tau0 = {}, tau = {}, a = {}, b = {}, {} non-real eigenvalues",
        format_f64(outcome.tau0),
        format_f64(outcome.tau),
        opt(report.bounds.a),
        opt(report.bounds.b),
        report.nonreal_count
    );
    Ok(if report.verified {
        Verdict::Pass
    } else {
        Verdict::Fail(report_failures(report))
    })
}

fn report_failures(report: &krein_enclosure::lab::VerificationReport) -> String {
    report
        .containment_failures
        .iter()
        .chain(&report.sign_type_failures)
        .chain(&report.resolvent_check_failures)
        .cloned()
        .collect::<Vec<_>>()
        .join("; ")
}

fn sl(c: &SlConfig, emit: &mut Emit) -> Result<Verdict> {
    let potential = c.potential()?;
    let disc = SlDiscretization::new(&potential, c.l, c.n)?;
    let run = containment_report(&disc, &potential, c.p, &c.options())?;
    let box_line = boundary_polyline(&Region::SlBox(run.paper_box), 64)?;
    emit.json("report.json", &run.report)?;
    emit.csv("eigenvalues.csv", &eigen_rows_csv(&run.rows), true)?;
    emit.csv(
        "constants.csv",
        &constants_table_csv(&log_space(2.0, c.constants_max_p, c.constants_points))?,
        false,
    )?;
    emit.csv("box.csv", &polyline_csv(&box_line), false)?;
    eprintln!(
        "‖q‖_{} = {}, {} non-real eigenvalues, slack {}",
        c.p,
        format_f64(run.q_norm),
        run.rows.len(),
        format_f64(run.slack)
    );
    Ok(if run.report.verified {
        Verdict::Pass
    } else {
        Verdict::Fail(report_failures(&run.report))
    })
}

#[derive(Serialize)]
struct Tau0Output<'a> {
    probe: &'a Tau0Probe,
    estimate: &'a Tau0Estimate,
}

fn tau0(c: &Tau0Config, emit: &mut Emit) -> Result<Verdict> {
    let probe = c.probe()?;
    let est = tau0_hilbert_form(&probe)?;
    let kind = match probe {
        Tau0Probe::Indicator { .. } => "indicator",
        Tau0Probe::Extremizer { .. } => "extremizer",
        Tau0Probe::Tabulated { .. } => "tabulated",
    };
    let csv = format!(
        "kind,quotient,norm_sq,degree,error_estimate,upper_bound,within_upper_bound\n{kind},{},{},{},{},{},{}\n",
        format_f64(est.quotient),
        format_f64(est.norm_sq),
        est.degree,
        format_f64(est.error_estimate),
        format_f64(est.upper_bound),
        est.within_upper_bound
    );
    emit.json(
        "tau0.json",
        &Tau0Output {
            probe: &probe,
            estimate: &est,
        },
    )?;
    emit.csv("tau0.csv", &csv, true)?;
    Ok(if est.within_upper_bound {
        Verdict::Pass
    } else {
        Verdict::Fail(format!(
            "quotient {} exceeds the bound {}",
            format_f64(est.quotient),
            format_f64(est.upper_bound)
        ))
    })
}
