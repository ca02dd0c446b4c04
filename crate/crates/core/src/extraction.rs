//! Grouping of difference-of-Gaussian responses into size-filtered
//! character candidates.

use crate::error::Result;
use crate::image::GrayImage;
use crate::scalespace::{build_pyramid, DogImage, Octave};

/// Sign of the DOG response a candidate was grouped from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Polarity {
    Positive,
    Negative,
}

impl Polarity {
    pub const BOTH: [Polarity; 2] = [Polarity::Positive, Polarity::Negative];

    pub fn as_str(self) -> &'static str {
        match self {
            Polarity::Positive => "positive",
            Polarity::Negative => "negative",
        }
    }
}

/// Binary raster.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mask {
    width: usize,
    height: usize,
    bits: Vec<bool>,
}

impl Mask {
    pub fn new(width: usize, height: usize) -> Self {
        Self {
            width,
            height,
            bits: vec![false; width * height],
        }
    }

    pub fn from_bits(width: usize, height: usize, bits: Vec<bool>) -> Self {
        assert_eq!(bits.len(), width * height, "mask size mismatch");
        Self {
            width,
            height,
            bits,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> bool {
        self.bits[y * self.width + x]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, v: bool) {
        self.bits[y * self.width + x] = v;
    }

    pub fn count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }
}

/// Axis-aligned box, `width`×`height` pixels starting at `(x, y)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BBox {
    pub x: usize,
    pub y: usize,
    pub width: usize,
    pub height: usize,
}

impl BBox {
    pub fn area(&self) -> usize {
        self.width * self.height
    }

    pub fn scaled(&self, factor: usize) -> BBox {
        BBox {
            x: self.x * factor,
            y: self.y * factor,
            width: self.width * factor,
            height: self.height * factor,
        }
    }

    pub fn contains(&self, other: &BBox) -> bool {
        other.x >= self.x
            && other.y >= self.y
            && other.x + other.width <= self.x + self.width
            && other.y + other.height <= self.y + self.height
    }

    pub fn intersection_area(&self, other: &BBox) -> usize {
        let x0 = self.x.max(other.x);
        let y0 = self.y.max(other.y);
        let x1 = (self.x + self.width).min(other.x + other.width);
        let y1 = (self.y + self.height).min(other.y + other.height);
        x1.saturating_sub(x0) * y1.saturating_sub(y0)
    }

    pub fn iou(&self, other: &BBox) -> f64 {
        let inter = self.intersection_area(other);
        let union = self.area() + other.area() - inter;
        if union == 0 {
            0.0
        } else {
            inter as f64 / union as f64
        }
    }
}

impl std::fmt::Display for BBox {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{},{},{},{}", self.x, self.y, self.width, self.height)
    }
}

/// A connected group of DOG pixels, in raster coordinates.
pub type Component = Vec<(usize, usize)>;

pub fn threshold_dog(dog: &DogImage, polarity: Polarity, t_dog: f64) -> Mask {
    let bits = dog
        .data()
        .iter()
        .map(|&v| match polarity {
            Polarity::Positive => v as f64 > t_dog,
            Polarity::Negative => (v as f64) < -t_dog,
        })
        .collect();
    Mask::from_bits(dog.width(), dog.height(), bits)
}

/// Maximal 8-connected components, ordered by (min y, min x) of each
/// component. Pixels inside a component are in raster order.
pub fn connected_components(mask: &Mask) -> Vec<Component> {
    let (w, h) = (mask.width, mask.height);
    let mut seen = vec![false; w * h];
    let mut stack = Vec::new();
    let mut out: Vec<(usize, usize, Component)> = Vec::new();
    for start in 0..w * h {
        if !mask.bits[start] || seen[start] {
            continue;
        }
        seen[start] = true;
        stack.push(start);
        let mut comp = Vec::new();
        while let Some(i) = stack.pop() {
            let (x, y) = (i % w, i / w);
            comp.push((x, y));
            for ny in y.saturating_sub(1)..=(y + 1).min(h - 1) {
                for nx in x.saturating_sub(1)..=(x + 1).min(w - 1) {
                    let j = ny * w + nx;
                    if mask.bits[j] && !seen[j] {
                        seen[j] = true;
                        stack.push(j);
                    }
                }
            }
        }
        comp.sort_unstable_by_key(|&(x, y)| (y, x));
        let min_y = comp[0].1;
        let min_x = comp.iter().map(|p| p.0).min().unwrap_or(0);
        out.push((min_y, min_x, comp));
    }
    // discovery order already sorts by first raster pixel; the stable sort
    // only reorders ties on min y with a smaller min x further down
    out.sort_by_key(|(y, x, _)| (*y, *x));
    out.into_iter().map(|(_, _, c)| c).collect()
}

fn bbox_of(comp: &[(usize, usize)]) -> BBox {
    let (mut x0, mut y0, mut x1, mut y1) = (usize::MAX, usize::MAX, 0, 0);
    for &(x, y) in comp {
        x0 = x0.min(x);
        y0 = y0.min(y);
        x1 = x1.max(x);
        y1 = y1.max(y);
    }
    BBox {
        x: x0,
        y: y0,
        width: x1 - x0 + 1,
        height: y1 - y0 + 1,
    }
}

/// Inclusive bounding-box side range accepted as a character.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SizeRange {
    pub min: usize,
    pub max: usize,
}

impl Default for SizeRange {
    fn default() -> Self {
        Self { min: 32, max: 64 }
    }
}

impl SizeRange {
    pub fn accepts(&self, b: &BBox) -> bool {
        (self.min..=self.max).contains(&b.width) && (self.min..=self.max).contains(&b.height)
    }
}

/// A connected DOG group plus everything recognition needs from its octave.
#[derive(Debug, Clone)]
pub struct CharCandidate {
    pub octave: usize,
    pub polarity: Polarity,
    /// Member pixels in octave coordinates, raster order.
    pub pixels: Component,
    /// Octave-space bounding box of `pixels`.
    pub bbox: BBox,
    /// `bbox` mapped into input-image coordinates.
    pub source_bbox: BBox,
    /// Octave initial image over `bbox` grown by a 1-pixel margin (clipped
    /// at the octave border).
    pub patch: GrayImage,
    /// Octave coordinates of `patch`'s top-left pixel.
    pub patch_origin: (usize, usize),
    /// Membership raster aligned with `patch`.
    pub mask: Mask,
}

impl CharCandidate {
    /// Member pixels in patch coordinates.
    pub fn patch_pixels(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let (ox, oy) = self.patch_origin;
        self.pixels.iter().map(move |&(x, y)| (x - ox, y - oy))
    }

    pub(crate) fn from_component(comp: Component, octave: &Octave, polarity: Polarity) -> Self {
        let bbox = bbox_of(&comp);
        let img = &octave.initial;
        let px0 = bbox.x.saturating_sub(1);
        let py0 = bbox.y.saturating_sub(1);
        let px1 = (bbox.x + bbox.width + 1).min(img.width());
        let py1 = (bbox.y + bbox.height + 1).min(img.height());
        let patch = img
            .crop(px0, py0, px1 - px0, py1 - py0)
            .expect("patch inside octave");
        let mut mask = Mask::new(patch.width(), patch.height());
        for &(x, y) in &comp {
            mask.set(x - px0, y - py0, true);
        }
        Self {
            octave: octave.index,
            polarity,
            pixels: comp,
            bbox,
            source_bbox: bbox.scaled(octave.scale_factor),
            patch,
            patch_origin: (px0, py0),
            mask,
        }
    }
}

pub fn filter_by_size(
    components: Vec<Component>,
    octave: &Octave,
    polarity: Polarity,
    range: SizeRange,
) -> Vec<CharCandidate> {
    components
        .into_iter()
        .filter(|c| range.accepts(&bbox_of(c)))
        .map(|c| CharCandidate::from_component(c, octave, polarity))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtractParams {
    /// DOG magnitude a pixel must strictly exceed.
    pub t_dog: f64,
    pub octaves: usize,
    pub size: SizeRange,
}

impl Default for ExtractParams {
    fn default() -> Self {
        Self {
            t_dog: 2.0,
            octaves: 4,
            size: SizeRange::default(),
        }
    }
}

/// Candidates of one already-built octave, positive polarity first.
pub fn extract_from_octave(octave: &Octave, params: &ExtractParams) -> Vec<CharCandidate> {
    Polarity::BOTH
        .iter()
        .flat_map(|&pol| {
            let mask = threshold_dog(&octave.dog, pol, params.t_dog);
            filter_by_size(connected_components(&mask), octave, pol, params.size)
        })
        .collect()
}

/// Full extraction: pyramid, then per octave and polarity threshold,
/// group and size-filter.
pub fn extract_candidates(img: &GrayImage, params: &ExtractParams) -> Result<Vec<CharCandidate>> {
    let pyramid = build_pyramid(img, params.octaves)?;
    Ok(pyramid
        .iter()
        .flat_map(|o| extract_from_octave(o, params))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mask_from(rows: &[&str]) -> Mask {
        let h = rows.len();
        let w = rows[0].len();
        let bits = rows
            .iter()
            .flat_map(|r| r.bytes().map(|b| b == b'#'))
            .collect();
        Mask::from_bits(w, h, bits)
    }

    #[test]
    fn threshold_is_strict() {
        let dog = DogImage::from_raw(4, 1, vec![0, 5, 2, -3]).unwrap();
        assert_eq!(
            threshold_dog(&dog, Polarity::Positive, 2.0).bits(),
            &[false, true, false, false]
        );
        assert_eq!(
            threshold_dog(&dog, Polarity::Negative, 2.0).bits(),
            &[false, false, false, true]
        );
        let zero = DogImage::from_raw(3, 3, vec![0; 9]).unwrap();
        assert_eq!(threshold_dog(&zero, Polarity::Positive, 2.0).count(), 0);
    }

    #[test]
    fn diagonal_pixels_connect() {
        let m = mask_from(&["#..", ".#.", "..."]);
        assert_eq!(connected_components(&m), vec![vec![(0, 0), (1, 1)]]);
    }

    #[test]
    fn gap_separates() {
        let m = mask_from(&["#.#"]);
        assert_eq!(connected_components(&m).len(), 2);
    }

    #[test]
    fn ordering_by_min_y_then_min_x() {
        let m = mask_from(&["...#.", "...#.", "#..#.", "#...."]);
        let comps = connected_components(&m);
        assert_eq!(comps[0][0], (3, 0));
        assert_eq!(comps[1][0], (0, 2));
    }

    #[test]
    fn bbox_iou() {
        let a = BBox {
            x: 0,
            y: 0,
            width: 10,
            height: 10,
        };
        let b = BBox {
            x: 5,
            y: 0,
            width: 10,
            height: 10,
        };
        assert!((a.iou(&b) - 50.0 / 150.0).abs() < 1e-12);
        assert_eq!(a.iou(&a), 1.0);
        assert_eq!(
            a.scaled(4),
            BBox {
                x: 0,
                y: 0,
                width: 40,
                height: 40
            }
        );
    }

    #[test]
    fn size_filter_both_dimensions() {
        let r = SizeRange::default();
        let b = |w, h| BBox {
            x: 0,
            y: 0,
            width: w,
            height: h,
        };
        assert!(!r.accepts(&b(10, 10)));
        assert!(r.accepts(&b(40, 50)));
        assert!(!r.accepts(&b(100, 40)));
        assert!(r.accepts(&b(32, 64)));
        assert!(!r.accepts(&b(31, 40)));
    }
}
