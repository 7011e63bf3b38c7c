//! Graph-cut segmentation of grayscale images from object/background seeds.
//!
//! Every pixel is a node; 4-neighbours are joined in both directions by a
//! boundary penalty `floor(C * exp(-(Ip - Iq)^2 / (2 sigma^2)))`. Object
//! seeds hang off the source and background seeds feed the sink, both with
//! capacity `M = C |V|^2`, where `|V|` counts pixels plus the two terminals.
//! The source side of a minimum cut is the object.

use thiserror::Error;

use crate::augment::MinCut;
use crate::error::FlowError;
use crate::network::{Edge, FlowNetwork, NodeId};

pub mod pnm;
pub mod seeds;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SegmentError {
    #[error("no object seeds")]
    NoObjectSeeds,
    #[error("no background seeds")]
    NoBackgroundSeeds,
    #[error("seed ({x}, {y}) lies outside the {width}x{height} image")]
    SeedOutOfBounds {
        x: usize,
        y: usize,
        width: usize,
        height: usize,
    },
    #[error("pixel ({x}, {y}) is both an object and a background seed")]
    SeedOverlap { x: usize, y: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("the cut severs the terminal arc of seed pixel ({x}, {y}); M is too small")]
    TerminalArcCut { x: usize, y: usize },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("{0}")]
    Format(String),
    #[error(transparent)]
    Flow(#[from] FlowError),
}

/// 8-bit grayscale raster, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrayImage {
    pub width: usize,
    pub height: usize,
    pub pixels: Vec<u8>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, pixels: Vec<u8>) -> Result<Self, SegmentError> {
        if pixels.len() != width * height {
            return Err(SegmentError::DimensionMismatch(format!(
                "{} pixels for a {width}x{height} image",
                pixels.len()
            )));
        }
        Ok(GrayImage {
            width,
            height,
            pixels,
        })
    }

    pub fn filled(width: usize, height: usize, value: u8) -> Self {
        GrayImage {
            width,
            height,
            pixels: vec![value; width * height],
        }
    }

    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.pixels[y * self.width + x]
    }

    pub fn set(&mut self, x: usize, y: usize, value: u8) {
        self.pixels[y * self.width + x] = value;
    }
}

/// 8-bit RGB raster, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RgbImage {
    pub width: usize,
    pub height: usize,
    pub pixels: Vec<[u8; 3]>,
}

/// Object and background seed centres `(x, y)`, each grown into a
/// Euclidean ball of `radius` pixels.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SeedSet {
    pub object: Vec<(usize, usize)>,
    pub background: Vec<(usize, usize)>,
    pub radius: usize,
}

impl SeedSet {
    /// Seed pixels after ball expansion, as sorted row-major indices
    /// `(object, background)`.
    pub fn expand(
        &self,
        width: usize,
        height: usize,
    ) -> Result<(Vec<usize>, Vec<usize>), SegmentError> {
        if self.object.is_empty() {
            return Err(SegmentError::NoObjectSeeds);
        }
        if self.background.is_empty() {
            return Err(SegmentError::NoBackgroundSeeds);
        }
        let ball = |centres: &[(usize, usize)]| -> Result<Vec<usize>, SegmentError> {
            let mut out = Vec::new();
            let r = self.radius as i64;
            for &(x, y) in centres {
                if x >= width || y >= height {
                    return Err(SegmentError::SeedOutOfBounds {
                        x,
                        y,
                        width,
                        height,
                    });
                }
                for dy in -r..=r {
                    for dx in -r..=r {
                        if dx * dx + dy * dy > r * r {
                            continue;
                        }
                        let (px, py) = (x as i64 + dx, y as i64 + dy);
                        if (0..width as i64).contains(&px) && (0..height as i64).contains(&py) {
                            out.push(py as usize * width + px as usize);
                        }
                    }
                }
            }
            out.sort_unstable();
            out.dedup();
            Ok(out)
        };
        let object = ball(&self.object)?;
        let background = ball(&self.background)?;
        if let Some(&p) = object.iter().find(|p| background.binary_search(p).is_ok()) {
            return Err(SegmentError::SeedOverlap {
                x: p % width,
                y: p / width,
            });
        }
        Ok((object, background))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SegConfig {
    /// Penalty scale `C`.
    pub c: u64,
    /// Contrast scale `sigma`.
    pub sigma: u64,
    /// Terminal capacity; `C |V|^2` when `None`.
    pub big_capacity: Option<u64>,
}

impl Default for SegConfig {
    fn default() -> Self {
        SegConfig {
            c: 100,
            sigma: 50,
            big_capacity: None,
        }
    }
}

impl SegConfig {
    /// `M` for a graph with `node_count` nodes, terminals included.
    pub fn big_capacity_for(&self, node_count: usize) -> u64 {
        self.big_capacity
            .unwrap_or_else(|| self.c * (node_count as u64).pow(2))
    }
}

/// Boundary penalty between neighbouring intensities, rounded down.
pub fn beta(ip: u8, iq: u8, cfg: &SegConfig) -> u64 {
    let diff = ip as f64 - iq as f64;
    let sigma = cfg.sigma as f64;
    (cfg.c as f64 * (-(diff * diff) / (2.0 * sigma * sigma)).exp()).floor() as u64
}

/// A segmentation network and its pixel indexing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SegNetwork {
    pub network: FlowNetwork,
    pub width: usize,
    pub height: usize,
    pub object_seeds: Vec<usize>,
    pub background_seeds: Vec<usize>,
}

impl SegNetwork {
    /// Node of pixel `(x, y)`; pixels are numbered row-major.
    pub fn pixel_node(&self, x: usize, y: usize) -> NodeId {
        y * self.width + x
    }

    pub fn pixel_count(&self) -> usize {
        self.width * self.height
    }
}

/// Builds the boundary-penalty network.
///
/// Edge order: per pixel in row-major order, the right pair (out, back) and
/// the down pair (out, back); then `s -> o` for object pixels, then
/// `b -> t` for background pixels, each ascending.
pub fn build_seg_network(
    img: &GrayImage,
    seeds: &SeedSet,
    cfg: &SegConfig,
) -> Result<SegNetwork, SegmentError> {
    let (w, h) = (img.width, img.height);
    let (object, background) = seeds.expand(w, h)?;
    let pixels = w * h;
    let (s, t) = (pixels, pixels + 1);
    let big = cfg.big_capacity_for(pixels + 2);

    let mut edges = Vec::with_capacity(4 * pixels + object.len() + background.len());
    for y in 0..h {
        for x in 0..w {
            let p = y * w + x;
            let ip = img.pixels[p];
            if x + 1 < w {
                let cap = beta(ip, img.pixels[p + 1], cfg);
                edges.push(Edge::new(p, p + 1, cap));
                edges.push(Edge::new(p + 1, p, cap));
            }
            if y + 1 < h {
                let cap = beta(ip, img.pixels[p + w], cfg);
                edges.push(Edge::new(p, p + w, cap));
                edges.push(Edge::new(p + w, p, cap));
            }
        }
    }
    edges.extend(object.iter().map(|&p| Edge::new(s, p, big)));
    edges.extend(background.iter().map(|&p| Edge::new(p, t, big)));

    Ok(SegNetwork {
        network: FlowNetwork::new(pixels + 2, s, t, edges)?,
        width: w,
        height: h,
        object_seeds: object,
        background_seeds: background,
    })
}

/// Per-pixel object labels, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabelMask {
    pub width: usize,
    pub height: usize,
    pub object: Vec<bool>,
}

impl LabelMask {
    pub fn is_object(&self, x: usize, y: usize) -> bool {
        self.object[y * self.width + x]
    }

    /// Pixels with a 4-neighbour of the other label.
    pub fn boundary(&self) -> Vec<bool> {
        let (w, h) = (self.width, self.height);
        let mut marked = vec![false; w * h];
        for y in 0..h {
            for x in 0..w {
                let p = y * w + x;
                if x + 1 < w && self.object[p] != self.object[p + 1] {
                    marked[p] = true;
                    marked[p + 1] = true;
                }
                if y + 1 < h && self.object[p] != self.object[p + w] {
                    marked[p] = true;
                    marked[p + w] = true;
                }
            }
        }
        marked
    }
}

/// Object pixels are the pixels on the source side of the cut.
pub fn extract_segmentation(seg: &SegNetwork, cut: &MinCut) -> Result<LabelMask, SegmentError> {
    if cut.source_side.len() != seg.network.node_count() {
        return Err(SegmentError::DimensionMismatch(format!(
            "cut over {} nodes for a network of {}",
            cut.source_side.len(),
            seg.network.node_count()
        )));
    }
    let object = cut.source_side[..seg.pixel_count()].to_vec();
    let severed = seg
        .object_seeds
        .iter()
        .find(|&&p| !object[p])
        .or_else(|| seg.background_seeds.iter().find(|&&p| object[p]));
    if let Some(&p) = severed {
        return Err(SegmentError::TerminalArcCut {
            x: p % seg.width,
            y: p / seg.width,
        });
    }
    Ok(LabelMask {
        width: seg.width,
        height: seg.height,
        object,
    })
}

/// Marker colour of boundary pixels in an overlay.
pub const OVERLAY_MARKER: [u8; 3] = [255, 0, 0];

/// Grayscale image in colour with the label boundary painted in
/// [`OVERLAY_MARKER`].
pub fn render_overlay(img: &GrayImage, mask: &LabelMask) -> Result<RgbImage, SegmentError> {
    if (img.width, img.height) != (mask.width, mask.height) {
        return Err(SegmentError::DimensionMismatch(format!(
            "image is {}x{}, mask is {}x{}",
            img.width, img.height, mask.width, mask.height
        )));
    }
    let pixels = img
        .pixels
        .iter()
        .zip(mask.boundary())
        .map(|(&v, marked)| if marked { OVERLAY_MARKER } else { [v, v, v] })
        .collect();
    Ok(RgbImage {
        width: img.width,
        height: img.height,
        pixels,
    })
}

/// A two-intensity frame: an axis-aligned object rectangle of `fg` on a
/// `bg` background. The rectangle is clipped to the image.
pub fn two_region_frame(
    width: usize,
    height: usize,
    object: (usize, usize, usize, usize),
    fg: u8,
    bg: u8,
) -> GrayImage {
    let (left, top, w, h) = object;
    let mut img = GrayImage::filled(width, height, bg);
    for y in top..(top + h).min(height) {
        for x in left..(left + w).min(width) {
            img.set(x, y, fg);
        }
    }
    img
}
