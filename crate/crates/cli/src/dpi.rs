use std::io::Write;
use std::path::PathBuf;

use anyhow::bail;
use infolab::dpi::{analyze, conditional_mi_sign_gallery, dpi_batch, particle_demo, triple_from_markov, DpiReport};
use infolab::formats::{read_channel, read_joint, read_json, read_triple, DataFile, TripleFile};
use infolab::scalar::tol;
use infolab::NormalizationPolicy;
use serde::Serialize;

use crate::output::{self, Context, Format};
use crate::Verdict;

#[derive(clap::Args, Debug)]
#[command(group = clap::ArgGroup::new("mode").args(["joint", "triple", "gallery", "particles", "batch"]).required(true))]
pub struct Args {
    /// Joint of (X, Y)
    #[arg(requires = "channel")]
    joint: Option<PathBuf>,

    /// Channel from Y to Z
    channel: Option<PathBuf>,

    /// Analyze a triple file as given
    #[arg(long)]
    triple: Option<PathBuf>,

    /// Triples where conditioning raises or lowers mutual information
    #[arg(long)]
    gallery: bool,

    /// Particle file with keys joint, gx and gy
    #[arg(long)]
    particles: Option<PathBuf>,

    #[arg(long, default_value_t = 5, requires = "particles")]
    steps: usize,

    /// Check this many random Markov triples with alphabets up to 5
    #[arg(long)]
    batch: Option<usize>,
}

fn in_base(ctx: &Context, r: &DpiReport<f64>) -> DpiReport<f64> {
    DpiReport {
        i_xy: ctx.convert(r.i_xy),
        i_xz: ctx.convert(r.i_xz),
        i_x_yz: ctx.convert(r.i_x_yz),
        i_xy_given_z: ctx.convert(r.i_xy_given_z),
        i_xz_given_y: ctx.convert(r.i_xz_given_y),
        chain_identity_residual: ctx.convert(r.chain_identity_residual),
        ..r.clone()
    }
}

fn quantities(r: &DpiReport<f64>) -> [(&'static str, f64); 6] {
    [
        ("i_xy", r.i_xy),
        ("i_xz", r.i_xz),
        ("i_x_yz", r.i_x_yz),
        ("i_xy_given_z", r.i_xy_given_z),
        ("i_xz_given_y", r.i_xz_given_y),
        ("chain_identity_residual", r.chain_identity_residual),
    ]
}

fn write_text(ctx: &Context, r: &DpiReport<f64>, out: &mut dyn Write) -> anyhow::Result<()> {
    let labels = ["I(X;Y)", "I(X;Z)", "I(X;(Y,Z))", "I(X;Y|Z)", "I(X;Z|Y)"];
    for (label, (_, v)) in labels.iter().zip(quantities(r)) {
        writeln!(out, "{label:<12}{} {}", output::fixed(v), ctx.unit())?;
    }
    writeln!(out, "chain rule residual {:.3e}", r.chain_identity_residual)?;
    writeln!(out, "markov certified {}", r.markov_certified)?;
    writeln!(
        out,
        "data processing inequality {}",
        if r.dpi_holds { "holds" } else { "violated" }
    )?;
    Ok(())
}

fn write_report(ctx: &Context, raw: &DpiReport<f64>, out: &mut dyn Write) -> anyhow::Result<()> {
    let r = in_base(ctx, raw);
    match ctx.format {
        Format::Json => output::json(out, &r)?,
        Format::Csv => {
            let mut w = output::csv_writer(out);
            w.write_record(["quantity", "value"])?;
            for (name, v) in quantities(&r) {
                w.write_record([name, &v.to_string()])?;
            }
            w.write_record(["markov_certified", &r.markov_certified.to_string()])?;
            w.write_record(["dpi_holds", &r.dpi_holds.to_string()])?;
            w.flush()?;
        }
        Format::Text => write_text(ctx, &r, out)?,
    }
    Ok(())
}

/// What the theory promises for this report.
fn guaranteed(r: &DpiReport<f64>) -> bool {
    let t = tol::REFORMULATION;
    let chain = r.chain_identity_residual <= t;
    chain && (!r.markov_certified || (r.dpi_holds && r.i_xz_given_y <= t))
}

#[derive(Serialize)]
struct GalleryEntry {
    name: &'static str,
    triple: TripleFile,
    report: DpiReport<f64>,
}

#[derive(Serialize)]
struct ParticlesOut {
    base: &'static str,
    steps: usize,
    mutual_information: Vec<f64>,
    intermediate: Vec<f64>,
    nonincreasing: bool,
}

pub fn run(ctx: &Context, args: Args, out: &mut dyn Write) -> anyhow::Result<Verdict> {
    if let (Some(joint), Some(channel)) = (&args.joint, &args.channel) {
        let triple = triple_from_markov(&read_joint::<f64>(joint)?, &read_channel::<f64>(channel)?)?;
        let report = analyze(&triple);
        write_report(ctx, &report, out)?;
        return Ok(verdict(guaranteed(&report)));
    }
    if let Some(path) = &args.triple {
        let report = analyze(&read_triple::<f64>(path)?);
        write_report(ctx, &report, out)?;
        return Ok(verdict(guaranteed(&report)));
    }
    if args.gallery {
        return gallery(ctx, out);
    }
    if let Some(path) = &args.particles {
        return particles(ctx, path, args.steps, out);
    }
    if let Some(count) = args.batch {
        let summary = dpi_batch::<f64>(count, 5, ctx.seed)?;
        match ctx.format {
            Format::Json => output::json(out, &summary)?,
            Format::Csv => {
                let mut w = output::csv_writer(out);
                w.serialize(&summary)?;
                w.flush()?;
            }
            Format::Text => {
                writeln!(
                    out,
                    "{} Markov triples, seed {}: {}",
                    summary.instances,
                    summary.seed,
                    if summary.passed() { "all satisfy the inequality" } else { "FAILED" }
                )?;
                writeln!(out, "smallest I(X;Y) - I(X;Z) {} {}", output::fixed(ctx.convert(summary.min_slack)), ctx.unit())?;
                writeln!(out, "largest I(X;Z|Y) {:.3e}", summary.max_i_xz_given_y)?;
                writeln!(out, "largest chain rule residual {:.3e}", summary.max_chain_residual)?;
            }
        }
        return Ok(verdict(summary.passed()));
    }
    bail!("choose a joint and channel, --triple, --gallery, --particles or --batch")
}

fn verdict(ok: bool) -> Verdict {
    if ok {
        Verdict::Pass
    } else {
        Verdict::Fail
    }
}

fn gallery(ctx: &Context, out: &mut dyn Write) -> anyhow::Result<Verdict> {
    let entries: Vec<GalleryEntry> = conditional_mi_sign_gallery::<f64>()
        .into_iter()
        .map(|g| GalleryEntry {
            name: g.name,
            report: in_base(ctx, &analyze(&g.triple)),
            triple: TripleFile::from_triple(&g.triple),
        })
        .collect();
    let ok = entries.iter().all(|e| {
        let r = &e.report;
        match e.name {
            "xor" => r.i_xy_given_z > r.i_xy,
            _ => r.i_xy_given_z < r.i_xy,
        }
    });
    match ctx.format {
        Format::Json => output::json(out, &entries)?,
        Format::Csv => {
            let mut w = output::csv_writer(out);
            w.write_record(["triple", "quantity", "value"])?;
            for e in &entries {
                for (name, v) in quantities(&e.report) {
                    w.write_record([e.name, name, &v.to_string()])?;
                }
            }
            w.flush()?;
        }
        Format::Text => {
            for e in &entries {
                writeln!(out, "{}:", e.name)?;
                writeln!(
                    out,
                    "  I(X;Y) {}  I(X;Y|Z) {}  {}",
                    output::fixed(e.report.i_xy),
                    output::fixed(e.report.i_xy_given_z),
                    ctx.unit()
                )?;
            }
        }
    }
    Ok(verdict(ok))
}

fn particles(ctx: &Context, path: &PathBuf, steps: usize, out: &mut dyn Write) -> anyhow::Result<Verdict> {
    let DataFile::Particles(file) = read_json(path)? else {
        bail!("{}: expected a particle file with keys joint, gx and gy", path.display());
    };
    let joint = file.joint.to_joint::<f64>(NormalizationPolicy::Strict)?;
    let trace = particle_demo(&joint, &file.gx.to_channel()?, &file.gy.to_channel()?, steps)?;
    let view = ParticlesOut {
        base: ctx.unit(),
        steps,
        mutual_information: trace.mutual_information.iter().map(|&v| ctx.convert(v)).collect(),
        intermediate: trace.intermediate.iter().map(|&v| ctx.convert(v)).collect(),
        nonincreasing: trace.nonincreasing,
    };
    match ctx.format {
        Format::Json => output::json(out, &view)?,
        Format::Csv => {
            let mut w = output::csv_writer(out);
            w.write_record(["t", "mutual_information", "intermediate"])?;
            for (t, v) in view.mutual_information.iter().enumerate() {
                let mid = view.intermediate.get(t).map(f64::to_string).unwrap_or_default();
                w.write_record([t.to_string(), v.to_string(), mid])?;
            }
            w.flush()?;
        }
        Format::Text => {
            for (t, v) in view.mutual_information.iter().enumerate() {
                writeln!(out, "t = {t}  I(X;Y) = {} {}", output::fixed(*v), ctx.unit())?;
            }
            writeln!(
                out,
                "{}",
                if view.nonincreasing { "nonincreasing" } else { "INCREASED" }
            )?;
        }
    }
    Ok(verdict(view.nonincreasing))
}
