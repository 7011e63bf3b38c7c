//! `bench` configuration files (TOML).
//!
//! ```toml
//! subroutines = ["ek", "dinic"]
//!
//! [sequence]
//! kind = "grid"
//! side = 40
//! frames = 8
//! ```
//!
//! Relative paths are resolved against the configuration file's directory.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;
use warmflow::bench::SequenceInstance;
use warmflow::grid::{make_separable_grid, sliding_bump_sequence};
use warmflow::io::parse_dimacs;
use warmflow::segment::pnm::read_pgm;
use warmflow::segment::seeds::parse_seeds;
use warmflow::segment::{build_seg_network, two_region_frame, GrayImage, SegConfig};
use warmflow::Subroutine;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchConfig {
    #[serde(default = "default_subroutines")]
    pub subroutines: Vec<String>,
    pub sequence: Sequence,
}

fn default_subroutines() -> Vec<String> {
    vec!["ek".into()]
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Sequence {
    /// DIMACS files sharing one edge list.
    Dimacs { files: Vec<PathBuf> },
    /// Graymap frames segmented with one seed file.
    Images {
        frames: Vec<PathBuf>,
        seeds: PathBuf,
        #[serde(default)]
        penalty: Penalty,
    },
    /// Sliding-bump separable grids.
    Grid { side: usize, frames: usize },
    /// Generated two-region frames with the object moving right.
    SyntheticImages {
        width: usize,
        height: usize,
        frames: usize,
        /// `[left, top, width, height]` of the object in the first frame.
        object: [usize; 4],
        #[serde(default = "default_step")]
        step: usize,
        #[serde(default = "default_fg")]
        foreground: u8,
        #[serde(default = "default_bg")]
        background: u8,
        /// Uniform pixel noise amplitude, drawn from `--seed`.
        #[serde(default)]
        noise: u8,
        seeds: PathBuf,
        #[serde(default)]
        penalty: Penalty,
    },
}

fn default_step() -> usize {
    1
}

fn default_fg() -> u8 {
    200
}

fn default_bg() -> u8 {
    50
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Penalty {
    #[serde(default = "default_c")]
    pub c: u64,
    #[serde(default = "default_sigma")]
    pub sigma: u64,
}

fn default_c() -> u64 {
    100
}

fn default_sigma() -> u64 {
    50
}

impl Default for Penalty {
    fn default() -> Self {
        Penalty {
            c: default_c(),
            sigma: default_sigma(),
        }
    }
}

impl Penalty {
    fn seg_config(&self) -> SegConfig {
        SegConfig {
            c: self.c,
            sigma: self.sigma,
            big_capacity: None,
        }
    }
}

impl BenchConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .with_context(|| format!("cannot read config {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("invalid config {}", path.display()))
    }

    pub fn subroutines(&self) -> Result<Vec<Subroutine>> {
        if self.subroutines.is_empty() {
            bail!("`subroutines` is empty");
        }
        self.subroutines
            .iter()
            .map(|s| s.parse().map_err(anyhow::Error::msg))
            .collect()
    }
}

impl Sequence {
    /// Materializes the instance sequence.
    pub fn instances(&self, base: &Path, seed: u64) -> Result<Vec<SequenceInstance>> {
        let resolve = |p: &PathBuf| base.join(p);
        match self {
            Sequence::Dimacs { files } => files
                .iter()
                .map(|f| {
                    let path = resolve(f);
                    let net = parse_dimacs(&read_text(&path)?)
                        .with_context(|| format!("in {}", path.display()))?;
                    Ok(SequenceInstance::new(f.display().to_string(), net))
                })
                .collect(),
            Sequence::Images {
                frames,
                seeds,
                penalty,
            } => {
                let seeds = parse_seeds(&read_text(&resolve(seeds))?)?;
                frames
                    .iter()
                    .map(|f| {
                        let path = resolve(f);
                        let bytes = fs::read(&path)
                            .with_context(|| format!("cannot read {}", path.display()))?;
                        let img = read_pgm(&bytes).with_context(|| format!("in {}", path.display()))?;
                        let seg = build_seg_network(&img, &seeds, &penalty.seg_config())?;
                        Ok(SequenceInstance::new(f.display().to_string(), seg.network))
                    })
                    .collect()
            }
            Sequence::Grid { side, frames } => {
                if *side < 8 {
                    bail!("grid side must be at least 8, got {side}");
                }
                sliding_bump_sequence(*side, *frames)
                    .iter()
                    .enumerate()
                    .map(|(k, spec)| {
                        let net = make_separable_grid(spec)?;
                        Ok(SequenceInstance::new(format!("grid-{side}-{k:03}"), net))
                    })
                    .collect()
            }
            Sequence::SyntheticImages {
                width,
                height,
                frames,
                object,
                step,
                foreground,
                background,
                noise,
                seeds,
                penalty,
            } => {
                let seeds = parse_seeds(&read_text(&resolve(seeds))?)?;
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let [left, top, w, h] = *object;
                (0..*frames)
                    .map(|k| {
                        let mut img = two_region_frame(
                            *width,
                            *height,
                            (left + k * step, top, w, h),
                            *foreground,
                            *background,
                        );
                        add_noise(&mut img, *noise, &mut rng);
                        let seg = build_seg_network(&img, &seeds, &penalty.seg_config())?;
                        Ok(SequenceInstance::new(format!("frame-{k:03}"), seg.network))
                    })
                    .collect()
            }
        }
    }
}

fn add_noise(img: &mut GrayImage, amplitude: u8, rng: &mut ChaCha8Rng) {
    if amplitude == 0 {
        return;
    }
    let a = amplitude as i16;
    for p in img.pixels.iter_mut() {
        *p = (*p as i16 + rng.gen_range(-a..=a)).clamp(0, 255) as u8;
    }
}

pub fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}
