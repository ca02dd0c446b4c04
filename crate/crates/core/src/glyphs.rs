//! Synthetic stroke font for the 36 standard characters.
//!
//! Each glyph is a set of polylines on a 6×8 unit grid (x right, y down)
//! that spans the full grid width, so every character, `1` and `I`
//! included, clears the minimum candidate width. Shapes that are rotations
//! of each other in common fonts are kept apart where cheap: `9` has a
//! straight tail, `5` a slanted stem, `W` slanted sides, `0` a slash, `U`
//! a spur and `Z` a crossbar. `H` has its crossbar off center so it is not
//! a quarter turn of `I`, though the two stay close.

use crate::config::Params;
use crate::error::{Error, Result};
use crate::extraction::{extract_candidates, CharCandidate, Polarity};
use crate::image::{quantize, GrayImage};
use crate::matching::{build_db, StandardDb, LABELS};

type Stroke = &'static [(f64, f64)];

pub const GRID_WIDTH: f64 = 6.0;
pub const GRID_HEIGHT: f64 = 8.0;

const RING: Stroke = &[
    (1.0, 0.0),
    (5.0, 0.0),
    (6.0, 1.0),
    (6.0, 7.0),
    (5.0, 8.0),
    (1.0, 8.0),
    (0.0, 7.0),
    (0.0, 1.0),
    (1.0, 0.0),
];

const ROUND_RING: Stroke = &[
    (2.0, 0.0),
    (4.0, 0.0),
    (6.0, 2.0),
    (6.0, 6.0),
    (4.0, 8.0),
    (2.0, 8.0),
    (0.0, 6.0),
    (0.0, 2.0),
    (2.0, 0.0),
];

const Q_RING: Stroke = &[
    (2.0, 0.0),
    (4.0, 0.0),
    (6.0, 2.0),
    (6.0, 5.0),
    (4.0, 7.0),
    (2.0, 7.0),
    (0.0, 5.0),
    (0.0, 2.0),
    (2.0, 0.0),
];

/// Polylines of one glyph, `None` outside 0-9, A-Z.
pub fn glyph_strokes(label: char) -> Option<&'static [Stroke]> {
    let s: &'static [Stroke] = match label {
        '0' => &[RING, &[(4.5, 0.0), (1.5, 8.0)]],
        '1' => &[
            &[(0.0, 3.0), (3.0, 0.0), (3.0, 8.0)],
            &[(0.0, 8.0), (6.0, 8.0)],
        ],
        '2' => &[&[
            (0.0, 1.0),
            (1.0, 0.0),
            (5.0, 0.0),
            (6.0, 1.0),
            (6.0, 3.0),
            (0.0, 8.0),
            (6.0, 8.0),
        ]],
        '3' => &[&[
            (0.0, 0.0),
            (6.0, 0.0),
            (3.0, 3.5),
            (5.0, 3.5),
            (6.0, 4.5),
            (6.0, 7.0),
            (5.0, 8.0),
            (1.0, 8.0),
            (0.0, 7.0),
        ]],
        '4' => &[&[(4.5, 8.0), (4.5, 0.0), (0.0, 5.5), (6.0, 5.5)]],
        '5' => &[&[
            (6.0, 0.0),
            (1.0, 0.0),
            (0.0, 3.5),
            (5.0, 3.5),
            (6.0, 4.5),
            (6.0, 7.0),
            (5.0, 8.0),
            (0.0, 8.0),
        ]],
        '6' => &[&[
            (5.5, 0.0),
            (1.0, 0.0),
            (0.0, 1.0),
            (0.0, 7.0),
            (1.0, 8.0),
            (5.0, 8.0),
            (6.0, 7.0),
            (6.0, 4.5),
            (5.0, 3.5),
            (0.0, 3.5),
        ]],
        '7' => &[&[(0.0, 0.0), (6.0, 0.0), (2.0, 8.0)]],
        '8' => &[
            &[
                (1.0, 0.0),
                (5.0, 0.0),
                (6.0, 1.0),
                (6.0, 2.5),
                (5.0, 3.5),
                (1.0, 3.5),
                (0.0, 2.5),
                (0.0, 1.0),
                (1.0, 0.0),
            ],
            &[
                (1.0, 3.5),
                (0.0, 4.5),
                (0.0, 7.0),
                (1.0, 8.0),
                (5.0, 8.0),
                (6.0, 7.0),
                (6.0, 4.5),
                (5.0, 3.5),
            ],
        ],
        '9' => &[&[
            (6.0, 4.5),
            (1.0, 4.5),
            (0.0, 3.5),
            (0.0, 1.0),
            (1.0, 0.0),
            (5.0, 0.0),
            (6.0, 1.0),
            (6.0, 8.0),
        ]],
        'A' => &[
            &[(0.0, 8.0), (3.0, 0.0), (6.0, 8.0)],
            &[(1.125, 5.0), (4.875, 5.0)],
        ],
        'B' => &[
            &[
                (0.0, 0.0),
                (0.0, 8.0),
                (5.0, 8.0),
                (6.0, 7.0),
                (6.0, 4.75),
                (5.0, 3.75),
                (0.0, 3.75),
            ],
            &[(0.0, 0.0), (4.5, 0.0), (5.5, 1.0), (5.5, 2.75), (4.5, 3.75)],
        ],
        'C' => &[&[
            (6.0, 1.0),
            (5.0, 0.0),
            (1.0, 0.0),
            (0.0, 1.0),
            (0.0, 7.0),
            (1.0, 8.0),
            (5.0, 8.0),
            (6.0, 7.0),
        ]],
        'D' => &[&[
            (0.0, 0.0),
            (0.0, 8.0),
            (4.0, 8.0),
            (6.0, 6.0),
            (6.0, 2.0),
            (4.0, 0.0),
            (0.0, 0.0),
        ]],
        'E' => &[
            &[(6.0, 0.0), (0.0, 0.0), (0.0, 8.0), (6.0, 8.0)],
            &[(0.0, 4.0), (4.5, 4.0)],
        ],
        'F' => &[
            &[(6.0, 0.0), (0.0, 0.0), (0.0, 8.0)],
            &[(0.0, 4.0), (4.5, 4.0)],
        ],
        'G' => &[&[
            (6.0, 1.0),
            (5.0, 0.0),
            (1.0, 0.0),
            (0.0, 1.0),
            (0.0, 7.0),
            (1.0, 8.0),
            (5.0, 8.0),
            (6.0, 7.0),
            (6.0, 4.5),
            (3.5, 4.5),
        ]],
        'H' => &[
            &[(0.0, 0.0), (0.0, 8.0)],
            &[(6.0, 0.0), (6.0, 8.0)],
            &[(0.0, 3.0), (6.0, 3.0)],
        ],
        'I' => &[
            &[(0.0, 0.0), (6.0, 0.0)],
            &[(3.0, 0.0), (3.0, 8.0)],
            &[(0.0, 8.0), (6.0, 8.0)],
        ],
        'J' => &[&[
            (2.5, 0.0),
            (6.0, 0.0),
            (6.0, 7.0),
            (5.0, 8.0),
            (1.0, 8.0),
            (0.0, 7.0),
            (0.0, 5.5),
        ]],
        'K' => &[
            &[(0.0, 0.0), (0.0, 8.0)],
            &[(6.0, 0.0), (0.0, 5.0)],
            &[(2.0, 3.75), (6.0, 8.0)],
        ],
        'L' => &[&[(0.0, 0.0), (0.0, 8.0), (6.0, 8.0)]],
        'M' => &[&[(0.0, 8.0), (0.0, 0.0), (3.0, 5.0), (6.0, 0.0), (6.0, 8.0)]],
        'N' => &[&[(0.0, 8.0), (0.0, 0.0), (6.0, 8.0), (6.0, 0.0)]],
        'O' => &[ROUND_RING],
        'P' => &[&[
            (0.0, 8.0),
            (0.0, 0.0),
            (5.0, 0.0),
            (6.0, 1.0),
            (6.0, 3.5),
            (5.0, 4.5),
            (0.0, 4.5),
        ]],
        'Q' => &[Q_RING, &[(3.5, 5.0), (6.0, 8.0)]],
        'R' => &[
            &[
                (0.0, 8.0),
                (0.0, 0.0),
                (5.0, 0.0),
                (6.0, 1.0),
                (6.0, 3.5),
                (5.0, 4.5),
                (0.0, 4.5),
            ],
            &[(2.5, 4.5), (6.0, 8.0)],
        ],
        'S' => &[&[
            (6.0, 1.0),
            (5.0, 0.0),
            (1.0, 0.0),
            (0.0, 1.0),
            (0.0, 3.0),
            (1.0, 4.0),
            (5.0, 4.0),
            (6.0, 5.0),
            (6.0, 7.0),
            (5.0, 8.0),
            (1.0, 8.0),
            (0.0, 7.0),
        ]],
        'T' => &[&[(0.0, 0.0), (6.0, 0.0)], &[(3.0, 0.0), (3.0, 8.0)]],
        'U' => &[
            &[(0.0, 0.0), (0.0, 6.0), (2.0, 8.0), (4.0, 8.0), (6.0, 6.0)],
            &[(6.0, 0.0), (6.0, 8.0)],
        ],
        'V' => &[&[(0.0, 0.0), (3.0, 8.0), (6.0, 0.0)]],
        'W' => &[&[(0.0, 0.0), (1.5, 8.0), (3.0, 3.0), (4.5, 8.0), (6.0, 0.0)]],
        'X' => &[&[(0.0, 0.0), (6.0, 8.0)], &[(6.0, 0.0), (0.0, 8.0)]],
        'Y' => &[
            &[(0.0, 0.0), (3.0, 4.0), (6.0, 0.0)],
            &[(3.0, 4.0), (3.0, 8.0)],
        ],
        'Z' => &[
            &[(0.0, 0.0), (6.0, 0.0), (0.0, 8.0), (6.0, 8.0)],
            &[(1.5, 4.0), (4.5, 4.0)],
        ],
        _ => return None,
    };
    Some(s)
}

/// Raster settings for one glyph image.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GlyphStyle {
    /// Square canvas side.
    pub canvas: usize,
    /// Outer ink height of the upright glyph, stroke included.
    pub ink_height: f64,
    pub stroke_width: f64,
    pub ink: u8,
    pub background: u8,
}

impl Default for GlyphStyle {
    fn default() -> Self {
        Self {
            canvas: 64,
            ink_height: 46.0,
            stroke_width: 5.5,
            ink: 30,
            background: 220,
        }
    }
}

impl GlyphStyle {
    /// Pixels per grid unit.
    pub fn unit(&self) -> f64 {
        (self.ink_height - self.stroke_width) / GRID_HEIGHT
    }

    pub fn ink_width(&self) -> f64 {
        self.unit() * GRID_WIDTH + self.stroke_width
    }
}

/// Render a glyph centered on the canvas and rotated by `angle` radians
/// about the canvas center (image coordinates, so positive is clockwise on
/// screen). Edges are anti-aliased with a one-pixel linear ramp.
pub fn render_glyph(label: char, style: &GlyphStyle, angle: f64) -> Result<GrayImage> {
    let strokes = glyph_strokes(label).ok_or(Error::UnknownLabel(label))?;
    if style.canvas == 0 {
        return Err(Error::EmptyImage {
            width: 0,
            height: 0,
        });
    }
    let unit = style.unit();
    let c = style.canvas as f64 / 2.0;
    let (sin, cos) = angle.sin_cos();
    let segments: Vec<[(f64, f64); 2]> = strokes
        .iter()
        .flat_map(|s| s.windows(2))
        .map(|w| {
            let map = |(gx, gy): (f64, f64)| {
                let x = (gx - GRID_WIDTH / 2.0) * unit;
                let y = (gy - GRID_HEIGHT / 2.0) * unit;
                (c + x * cos - y * sin, c + x * sin + y * cos)
            };
            [map(w[0]), map(w[1])]
        })
        .collect();
    let half = style.stroke_width / 2.0;
    let bg = style.background as f64;
    let ink = style.ink as f64;
    GrayImage::from_fn(style.canvas, style.canvas, |x, y| {
        let p = (x as f64 + 0.5, y as f64 + 0.5);
        let d = segments
            .iter()
            .map(|s| segment_distance(p, s[0], s[1]))
            .fold(f64::INFINITY, f64::min);
        let coverage = (half + 0.5 - d).clamp(0.0, 1.0);
        quantize(bg + (ink - bg) * coverage)
    })
}

fn segment_distance(p: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let len2 = dx * dx + dy * dy;
    let t = if len2 == 0.0 {
        0.0
    } else {
        (((p.0 - a.0) * dx + (p.1 - a.1) * dy) / len2).clamp(0.0, 1.0)
    };
    let (qx, qy) = (a.0 + t * dx - p.0, a.1 + t * dy - p.1);
    (qx * qx + qy * qy).sqrt()
}

/// All 36 glyphs in label order.
pub fn render_corpus(style: &GlyphStyle, angle: f64) -> Result<Vec<(char, GrayImage)>> {
    LABELS
        .iter()
        .map(|&l| Ok((l, render_glyph(l, style, angle)?)))
        .collect()
}

/// The candidate that stands for a single dark glyph on light ground: the
/// largest ink (negative) component, falling back to the largest of any
/// polarity.
pub fn glyph_candidate(candidates: &[CharCandidate]) -> Option<&CharCandidate> {
    let largest = |pol: Option<Polarity>| {
        candidates
            .iter()
            .filter(|c| pol.is_none_or(|p| c.polarity == p))
            .max_by_key(|c| {
                (
                    c.pixels.len(),
                    std::cmp::Reverse((c.octave, c.bbox.y, c.bbox.x)),
                )
            })
    };
    largest(Some(Polarity::Negative)).or_else(|| largest(None))
}

/// Standard database from one clean glyph image per label.
pub fn db_from_images(images: &[(char, GrayImage)], params: &Params) -> Result<StandardDb> {
    let mut samples = Vec::with_capacity(images.len());
    for (label, img) in images {
        let candidates = extract_candidates(img, &params.extract())?;
        let c = glyph_candidate(&candidates).ok_or(Error::NoCandidate(*label))?;
        samples.push((*label, c.clone()));
    }
    build_db(&samples, params.th_bin_div)
}
