use std::fmt::Write as _;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use serde_json::{json, Value};
use spiral_dims::covering::{
    estimate_assouad_spectrum, estimate_box_dimension, estimate_intermediate_dimension, geometric_ladder,
    mass_distribution_ladder, CoverLadder, CoverOptions, WindowPolicy,
};
use spiral_dims::fbm::{
    image_box_dimension_experiment, resolved_turns, spiral_sites, FbmExperimentOptions, FbmSampler,
};
use spiral_dims::formulas::{assouad_spectrum, box_dimension, intermediate_dimension, phase_transitions};
use spiral_dims::holder::{best_bound, DeformationPair};
use spiral_dims::{SpiralParams, Theta};

use crate::cli::*;
use crate::output::{emit_json, emit_text, write_side_file};
use crate::svg;

pub fn run(cmd: &Command) -> Result<()> {
    match cmd {
        Command::Dims(a) => dims(cmd, a),
        Command::Spectrum(a) => spectrum(cmd, a),
        Command::EstimateBox(a) => estimate_box(cmd, a),
        Command::EstimateAssouad(a) => estimate_assouad(cmd, a),
        Command::EstimateIntermediate(a) => estimate_intermediate(cmd, a),
        Command::MassCheck(a) => mass_check(cmd, a),
        Command::Holder(a) => holder(cmd, a),
        Command::Fbm(a) => fbm(cmd, a),
        Command::Render(a) => render(cmd, a),
    }
}

fn params(s: &SpiralArgs) -> Result<SpiralParams> {
    Ok(SpiralParams::new(s.p, s.q)?)
}

/// Parses a scale given as a decimal or as `2^-k`.
pub fn parse_scale(s: &str) -> Result<f64> {
    let s = s.trim();
    let v = match s.split_once('^') {
        Some((base, exp)) => {
            let b: f64 = base
                .trim()
                .parse()
                .with_context(|| format!("bad scale base in {s:?}"))?;
            let e: f64 = exp
                .trim()
                .parse()
                .with_context(|| format!("bad scale exponent in {s:?}"))?;
            b.powf(e)
        }
        None => s.parse().with_context(|| format!("bad scale {s:?}"))?,
    };
    if !(v > 0.0 && v < 1.0) {
        bail!("scale {s:?} must lie in (0, 1)");
    }
    Ok(v)
}

/// `start:stop:step`, inclusive of both ends.
pub fn parse_grid(s: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = s.split(':').collect();
    let [a, b, h] = parts[..] else {
        bail!("grid {s:?} must look like start:stop:step");
    };
    let (a, b, h): (f64, f64, f64) = (a.trim().parse()?, b.trim().parse()?, h.trim().parse()?);
    if !(h > 0.0) || b < a {
        bail!("grid {s:?} needs step > 0 and stop >= start");
    }
    let n = ((b - a) / h + 1e-9).floor() as usize;
    let mut v: Vec<f64> = (0..=n).map(|i| a + i as f64 * h).collect();
    if (b - v[n]).abs() > 1e-9 * h.max(1.0) {
        v.push(b);
    } else {
        v[n] = b;
    }
    Ok(v)
}

fn ladder_from(min: &str, max: &str, levels: usize) -> Result<Vec<f64>> {
    Ok(geometric_ladder(parse_scale(max)?, parse_scale(min)?, levels)?)
}

fn cover_options(s: &SamplingArgs, window: WindowPolicy) -> CoverOptions {
    CoverOptions {
        chord_fraction: s.chord_fraction,
        anchor_offset: (s.anchor_x, s.anchor_y),
        tail_factor: s.tail_factor,
        point_budget: s.point_budget,
        window,
    }
}

fn ladder_csv(l: &CoverLadder) -> Result<String> {
    let mut buf = Vec::new();
    l.write_csv(&mut buf)?;
    Ok(String::from_utf8(buf)?)
}

fn emit_ladder(
    cmd: &Command,
    out: &OutputArgs,
    format: ReportFormat,
    ladder: &CoverLadder,
    extra: Value,
) -> Result<()> {
    match format {
        ReportFormat::Csv => emit_text(cmd, out, "csv", &ladder_csv(ladder)?, &[]),
        ReportFormat::Json => {
            let mut v = json!({ "ladder": ladder.entries, "fit": ladder.fit, "estimate": ladder.slope() });
            if let (Value::Object(m), Value::Object(e)) = (&mut v, extra) {
                m.extend(e);
            }
            emit_json(cmd, out, v, &[])
        }
    }
}

fn dims(cmd: &Command, a: &DimsArgs) -> Result<()> {
    let params = params(&a.spiral)?;
    let mut csv = String::from("theta,dim_theta,branch\n");
    for th in parse_grid(&a.theta_grid)? {
        let d = intermediate_dimension(&params, Theta::new(th)?);
        writeln!(csv, "{th},{},{}", d.value, d.branch.as_str())?;
    }
    emit_text(cmd, &a.output, "csv", &csv, &[])
}

fn spectrum(cmd: &Command, a: &SpectrumArgs) -> Result<()> {
    let params = params(&a.spiral)?;
    let mut csv = String::from("theta,assouad_spectrum,branch\n");
    for th in parse_grid(&a.theta_grid)?.into_iter().filter(|&t| t < 1.0) {
        let d = assouad_spectrum(&params, Theta::new(th)?)?;
        writeln!(csv, "{th},{},{}", d.value, d.branch.as_str())?;
    }
    emit_text(cmd, &a.output, "csv", &csv, &[])
}

fn estimate_box(cmd: &Command, a: &EstimateBoxArgs) -> Result<()> {
    let params = params(&a.spiral)?;
    let opts = cover_options(&a.sampling, WindowPolicy::Auto);
    let ladder = estimate_box_dimension(
        &params,
        parse_scale(&a.delta_min)?,
        parse_scale(&a.delta_max)?,
        a.levels,
        &opts,
    )?;
    let target = box_dimension(&params);
    emit_ladder(cmd, &a.output, a.format, &ladder, json!({ "closed_form": target }))
}

fn estimate_assouad(cmd: &Command, a: &EstimateAssouadArgs) -> Result<()> {
    let params = params(&a.spiral)?;
    let window = match a.window {
        WindowArg::Auto => WindowPolicy::Auto,
        WindowArg::Square => WindowPolicy::Square,
        WindowArg::Ball => WindowPolicy::Ball,
    };
    let opts = cover_options(&a.sampling, window);
    let theta = Theta::new(a.theta)?;
    let scales = ladder_from(&a.delta_min, &a.delta_max, a.levels)?;
    let ladder = estimate_assouad_spectrum(&params, theta, &scales, &opts)?;
    let target = assouad_spectrum(&params, theta)?;
    let (t1, t2) = phase_transitions(&params);
    emit_ladder(
        cmd,
        &a.output,
        a.format,
        &ladder,
        json!({ "closed_form": target, "phase_transitions": [t1, t2] }),
    )
}

fn estimate_intermediate(cmd: &Command, a: &EstimateIntermediateArgs) -> Result<()> {
    let params = params(&a.spiral)?;
    let theta = Theta::new(a.theta)?;
    let scales = ladder_from(&a.delta_min, &a.delta_max, a.levels)?;
    let est = estimate_intermediate_dimension(&params, theta, &scales)?;
    let target = intermediate_dimension(&params, theta);
    emit_json(
        cmd,
        &a.output,
        json!({ "estimate": est, "closed_form": target, "ladder": scales }),
        &[],
    )
}

fn mass_check(cmd: &Command, a: &MassCheckArgs) -> Result<()> {
    let params = params(&a.spiral)?;
    let deltas = a.deltas.split(',').map(parse_scale).collect::<Result<Vec<_>>>()?;
    let report = mass_distribution_ladder(&params, Theta::new(a.theta)?, &deltas, a.trials, a.seed)?;
    emit_json(cmd, &a.output, serde_json::to_value(&report)?, &[])
}

fn holder(cmd: &Command, a: &HolderArgs) -> Result<()> {
    if a.sweep {
        if !(a.step > 0.0 && a.step < 1.0) {
            bail!("sweep step must lie in (0, 1)");
        }
        let n = (1.0 / a.step).round() as usize;
        let grid: Vec<f64> = (1..n).map(|i| i as f64 * a.step).collect();
        let mut csv = String::from("p,q,r,s,box_bound,profile_bound,best,binding\n");
        let opt = |b: Option<spiral_dims::holder::ClampedBound>| b.map_or(String::new(), |b| b.value.to_string());
        for &p in &grid {
            for &q in grid.iter().filter(|&&q| q >= p) {
                for &r in &grid {
                    for &s in grid.iter().filter(|&&s| s >= r) {
                        let rep = best_bound(&DeformationPair::new(p, q, r, s)?);
                        writeln!(
                            csv,
                            "{p},{q},{r},{s},{},{},{},{}",
                            opt(rep.box_bound),
                            opt(rep.profile_bound),
                            rep.best,
                            rep.binding.as_str()
                        )?;
                    }
                }
            }
        }
        return emit_text(cmd, &a.output, "csv", &csv, &[]);
    }
    let (Some(p), Some(q), Some(r), Some(s)) = (a.p, a.q, a.r, a.s) else {
        bail!("--p, --q, --r and --s are required without --sweep");
    };
    let rep = best_bound(&DeformationPair::new(p, q, r, s)?);
    emit_json(
        cmd,
        &a.output,
        json!({
            "p": p, "q": q, "r": r, "s": s,
            "box_bound": rep.box_bound,
            "profile_bound": rep.profile_bound,
            "best": rep.best,
            "binding": rep.binding.as_str(),
        }),
        &[],
    )
}

fn fbm(cmd: &Command, a: &FbmArgs) -> Result<()> {
    let params = params(&a.spiral)?;
    if a.seeds == 0 {
        bail!("--seeds must be at least 1");
    }
    let seeds: Vec<u64> = (a.seed..a.seed + a.seeds).collect();
    let opts = FbmExperimentOptions {
        sites: a.sites,
        turns: a.turns,
        levels: a.levels,
    };
    let report = image_box_dimension_experiment(&params, a.alpha, &seeds, None, &opts)?;
    let mut extra = Vec::new();
    if let Some(path) = &a.cloud {
        if a.alpha < 1.0 {
            let turns = a.turns.unwrap_or_else(|| resolved_turns(&params, a.sites));
            let sites = spiral_sites(&params, a.sites, turns)?;
            let field = FbmSampler::new(sites.points, a.alpha)?.sample(a.seed);
            let mut buf = Vec::new();
            field.write_csv(&mut buf)?;
            write_side_file(path, &buf)?;
            extra.push(PathBuf::from(path));
        }
    }
    emit_json(cmd, &a.output, serde_json::to_value(&report)?, &extra)
}

fn render(cmd: &Command, a: &RenderArgs) -> Result<()> {
    let params = params(&a.spiral)?;
    let doc = svg::render(&params, a.family, a.turns, a.size, a.stroke_width)?;
    emit_text(cmd, &a.output, "svg", &doc, &[])
}
