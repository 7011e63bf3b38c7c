use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, ensure, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use warmflow::bench::{run_sequence, write_csv, Mode};
use warmflow::grid::{make_separable_grid, sliding_bump_sequence};
use warmflow::io::{parse_dimacs, parse_flow, write_dimacs, write_flow};
use warmflow::learn::{CapacityLaw, InstanceDistribution};
use warmflow::segment::pnm::{read_pgm, write_pgm, write_ppm};
use warmflow::segment::seeds::parse_seeds;
use warmflow::segment::{build_seg_network, extract_segmentation, render_overlay, GrayImage, SegConfig};
use warmflow::{max_flow, median_erm, min_cut, sample_instances, warm_start_solve, Flow, FlowNetwork, Subroutine};

mod config;

use config::{read_text, BenchConfig};

#[derive(Parser)]
#[command(name = "warmflow", version, about = "Max-flow with warm starts from predicted flows")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Dimacs,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Law {
    Uniform,
    Perturb,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one network, cold or warm-started from a prediction.
    Solve {
        network: PathBuf,
        #[arg(long, value_enum, default_value = "dimacs")]
        format: Format,
        /// Flow file to warm-start from.
        #[arg(long)]
        prediction: Option<PathBuf>,
        #[arg(long, default_value = "ek")]
        subroutine: Subroutine,
        /// Write the maximum flow to this flow file.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Warm- versus cold-start runs over an instance sequence.
    Bench {
        config: PathBuf,
        #[arg(long)]
        csv: PathBuf,
        /// Seed for generated sequences.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Write a sliding-bump grid sequence as DIMACS files.
    GenGrid {
        #[arg(long)]
        side: usize,
        #[arg(long, default_value_t = 2)]
        frames: usize,
        #[arg(long)]
        out_dir: PathBuf,
        /// Capacity of non-boundary edges (default side^4).
        #[arg(long)]
        big_capacity: Option<u64>,
    },
    /// Segment a graymap from object/background seeds.
    Segment {
        image: PathBuf,
        #[arg(long)]
        seeds: PathBuf,
        /// Overlay pixmap with the boundary marked in red.
        #[arg(long)]
        overlay: Option<PathBuf>,
        /// Object mask graymap (255 object, 0 background).
        #[arg(long)]
        mask: Option<PathBuf>,
        /// Flow file from a previous frame to warm-start from.
        #[arg(long)]
        prediction: Option<PathBuf>,
        /// Write the maximum flow to this flow file.
        #[arg(long)]
        save_flow: Option<PathBuf>,
        #[arg(long, default_value = "ek")]
        subroutine: Subroutine,
        #[arg(long, default_value_t = 100)]
        c: u64,
        #[arg(long, default_value_t = 50)]
        sigma: u64,
    },
    /// Learn a prediction: per-edge median of sampled optimal flows.
    Learn {
        network: PathBuf,
        #[arg(long)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "uniform")]
        law: Law,
        /// Perturbation half-width for `--law perturb`.
        #[arg(long, default_value_t = 1)]
        k: u64,
        #[arg(long)]
        output: PathBuf,
    },
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Solve {
            network,
            format: Format::Dimacs,
            prediction,
            subroutine,
            output,
        } => solve(&network, prediction.as_deref(), subroutine, output.as_deref()),
        Command::Bench { config, csv, seed } => bench(&config, &csv, seed),
        Command::GenGrid {
            side,
            frames,
            out_dir,
            big_capacity,
        } => gen_grid(side, frames, &out_dir, big_capacity),
        Command::Segment {
            image,
            seeds,
            overlay,
            mask,
            prediction,
            save_flow,
            subroutine,
            c,
            sigma,
        } => {
            let cfg = SegConfig {
                c,
                sigma,
                big_capacity: None,
            };
            let outputs = SegmentOutputs {
                overlay: overlay.as_deref(),
                mask: mask.as_deref(),
                flow: save_flow.as_deref(),
            };
            segment(&image, &seeds, prediction.as_deref(), subroutine, cfg, outputs)
        }
        Command::Learn {
            network,
            samples,
            seed,
            law,
            k,
            output,
        } => learn(&network, samples, seed, law, k, &output),
    }
}

fn load_network(path: &Path) -> Result<FlowNetwork> {
    parse_dimacs(&read_text(path)?).with_context(|| format!("in {}", path.display()))
}

fn load_flow(path: &Path, net: &FlowNetwork) -> Result<Flow> {
    let f = parse_flow(&read_text(path)?).with_context(|| format!("in {}", path.display()))?;
    ensure!(
        f.len() == net.edge_count(),
        "{} has {} entries but the network has {} edges",
        path.display(),
        f.len(),
        net.edge_count()
    );
    Ok(f)
}

fn write_file(path: &Path, contents: impl AsRef<[u8]>) -> Result<()> {
    fs::write(path, contents).with_context(|| format!("cannot write {}", path.display()))
}

/// Cold solve, or warm solve when a prediction is given. Prints the value
/// and, for warm solves, the work summary.
fn solve_network(net: &FlowNetwork, prediction: Option<&Flow>, sub: Subroutine) -> Result<Flow> {
    match prediction {
        None => {
            let (flow, report) = max_flow(net, None, sub)?;
            println!("value {}", report.value);
            Ok(flow)
        }
        Some(f_hat) => {
            let (flow, report) = warm_start_solve(net, f_hat, sub)?;
            println!("value {}", report.optimal_value);
            println!(
                "clamped {}, projection paths {}, augmenting paths {}",
                report.clamp_total, report.projection.total.path_count, report.augment.path_count
            );
            Ok(flow)
        }
    }
}

fn solve(network: &Path, prediction: Option<&Path>, sub: Subroutine, output: Option<&Path>) -> Result<()> {
    let net = load_network(network)?;
    let prediction = prediction.map(|p| load_flow(p, &net)).transpose()?;
    let flow = solve_network(&net, prediction.as_ref(), sub)?;
    if let Some(path) = output {
        write_file(path, write_flow(&flow))?;
    }
    Ok(())
}

fn bench(config_path: &Path, csv: &Path, seed: u64) -> Result<()> {
    let config = BenchConfig::load(config_path)?;
    let subroutines = config.subroutines()?;
    let base = config_path.parent().unwrap_or(Path::new("."));
    let instances = config.sequence.instances(base, seed)?;
    ensure!(!instances.is_empty(), "the sequence has no instances");

    let records = run_sequence(&instances, &subroutines)?;
    let file = fs::File::create(csv).with_context(|| format!("cannot create {}", csv.display()))?;
    write_csv(&records, file)?;

    for sub in subroutines {
        let mean = |mode: Mode, pick: &dyn Fn(&warmflow::bench::BenchRecord) -> (u64, f64)| {
            let (paths, total) = records
                .iter()
                .filter(|r| r.subroutine == sub && r.mode == mode && r.instance != instances[0].id)
                .map(pick)
                .fold((0u64, 0.0), |(n, t), (k, m)| (n + k, t + k as f64 * m));
            if paths == 0 { 0.0 } else { total / paths as f64 }
        };
        let projection = mean(Mode::Warm, &|r| (r.projection_paths, r.projection_mean_length));
        let cold = mean(Mode::Cold, &|r| (r.augmenting_paths, r.augmenting_mean_length));
        println!(
            "{sub}: {} instances, warm projection mean length {projection:.2}, cold augmenting mean length {cold:.2}",
            instances.len()
        );
    }
    println!("wrote {}", csv.display());
    Ok(())
}

fn gen_grid(side: usize, frames: usize, out_dir: &Path, big_capacity: Option<u64>) -> Result<()> {
    if side < 8 {
        bail!("--side must be at least 8, got {side}");
    }
    fs::create_dir_all(out_dir).with_context(|| format!("cannot create {}", out_dir.display()))?;
    for (k, mut spec) in sliding_bump_sequence(side, frames).into_iter().enumerate() {
        spec.big_capacity = big_capacity;
        let net = make_separable_grid(&spec)?;
        let path = out_dir.join(format!("grid-{side}-{k:03}.max"));
        write_file(&path, write_dimacs(&net))?;
        println!("{} value {}", path.display(), spec.mask.boundary_into());
    }
    Ok(())
}

struct SegmentOutputs<'a> {
    overlay: Option<&'a Path>,
    mask: Option<&'a Path>,
    flow: Option<&'a Path>,
}

fn segment(
    image: &Path,
    seeds: &Path,
    prediction: Option<&Path>,
    sub: Subroutine,
    cfg: SegConfig,
    out: SegmentOutputs<'_>,
) -> Result<()> {
    let bytes = fs::read(image).with_context(|| format!("cannot read {}", image.display()))?;
    let img = read_pgm(&bytes).with_context(|| format!("in {}", image.display()))?;
    let seeds = parse_seeds(&read_text(seeds)?).with_context(|| format!("in {}", seeds.display()))?;
    let seg = build_seg_network(&img, &seeds, &cfg)?;
    let prediction = prediction.map(|p| load_flow(p, &seg.network)).transpose()?;

    let flow = solve_network(&seg.network, prediction.as_ref(), sub)?;
    let labels = extract_segmentation(&seg, &min_cut(&seg.network, &flow)?)?;
    println!(
        "object pixels {} of {}",
        labels.object.iter().filter(|&&o| o).count(),
        seg.pixel_count()
    );

    if let Some(path) = out.overlay {
        write_file(path, write_ppm(&render_overlay(&img, &labels)?))?;
    }
    if let Some(path) = out.mask {
        let pixels = labels.object.iter().map(|&o| if o { 255 } else { 0 }).collect();
        let mask = GrayImage::new(labels.width, labels.height, pixels)?;
        write_file(path, write_pgm(&mask, false))?;
    }
    if let Some(path) = out.flow {
        write_file(path, write_flow(&flow))?;
    }
    Ok(())
}

fn learn(network: &Path, samples: usize, seed: u64, law: Law, k: u64, output: &Path) -> Result<()> {
    ensure!(samples > 0, "--samples must be positive");
    let net = load_network(network)?;
    let law = match law {
        Law::Uniform => CapacityLaw::Uniform,
        Law::Perturb => CapacityLaw::Perturbed { k, pattern: Vec::new() },
    };
    let set = sample_instances(&InstanceDistribution::new(net, law, seed), samples)?;
    let prediction = median_erm(&set)?;
    write_file(output, write_flow(&prediction))?;
    println!("learned from {samples} samples, wrote {}", output.display());
    Ok(())
}
