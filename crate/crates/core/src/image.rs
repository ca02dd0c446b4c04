//! Grayscale raster, binary PGM I/O and the degradation operators used to
//! build the benchmark image sets (noise, affine deformation, illumination).

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, PgmError, Result};

/// Round half up, the single quantization rule used throughout the crate.
#[inline]
pub fn round_half_up(v: f64) -> f64 {
    (v + 0.5).floor()
}

/// Quantize a real intensity to 8 bits: round half up, then clamp.
#[inline]
pub fn quantize(v: f64) -> u8 {
    round_half_up(v).clamp(0.0, 255.0) as u8
}

/// 8-bit single-channel raster, row-major, 0 = black, 255 = white.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GrayImage {
    width: usize,
    height: usize,
    data: Vec<u8>,
}

impl GrayImage {
    pub fn filled(width: usize, height: usize, value: u8) -> Result<Self> {
        check_dims(width, height)?;
        Ok(Self {
            width,
            height,
            data: vec![value; width * height],
        })
    }

    pub fn from_raw(width: usize, height: usize, data: Vec<u8>) -> Result<Self> {
        check_dims(width, height)?;
        let expected = width * height;
        if data.len() != expected {
            return Err(Error::BufferSize {
                width,
                height,
                expected,
                actual: data.len(),
            });
        }
        Ok(Self {
            width,
            height,
            data,
        })
    }

    /// Build an image by evaluating `f(x, y)` at every pixel.
    pub fn from_fn(
        width: usize,
        height: usize,
        mut f: impl FnMut(usize, usize) -> u8,
    ) -> Result<Self> {
        check_dims(width, height)?;
        let mut data = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                data.push(f(x, y));
            }
        }
        Ok(Self {
            width,
            height,
            data,
        })
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn data(&self) -> &[u8] {
        &self.data
    }

    pub fn into_raw(self) -> Vec<u8> {
        self.data
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.data[y * self.width + x]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, v: u8) {
        self.data[y * self.width + x] = v;
    }

    /// Copy of the rectangle `[x, x+w) × [y, y+h)`, which must lie inside the image.
    pub fn crop(&self, x: usize, y: usize, w: usize, h: usize) -> Result<GrayImage> {
        assert!(
            x + w <= self.width && y + h <= self.height,
            "crop outside image"
        );
        let mut data = Vec::with_capacity(w * h);
        for row in y..y + h {
            let start = row * self.width + x;
            data.extend_from_slice(&self.data[start..start + w]);
        }
        GrayImage::from_raw(w, h, data)
    }

    /// Bilinear sample at real pixel-index coordinates, or `None` when the
    /// point is more than half a pixel outside the raster.
    pub fn sample_bilinear(&self, x: f64, y: f64) -> Option<f64> {
        let (w, h) = (self.width as f64, self.height as f64);
        if !(x >= -0.5 && x <= w - 0.5 && y >= -0.5 && y <= h - 0.5) {
            return None;
        }
        let x = x.clamp(0.0, w - 1.0);
        let y = y.clamp(0.0, h - 1.0);
        let x0 = x.floor() as usize;
        let y0 = y.floor() as usize;
        let x1 = (x0 + 1).min(self.width - 1);
        let y1 = (y0 + 1).min(self.height - 1);
        let fx = x - x0 as f64;
        let fy = y - y0 as f64;
        let top = self.get(x0, y0) as f64 * (1.0 - fx) + self.get(x1, y0) as f64 * fx;
        let bottom = self.get(x0, y1) as f64 * (1.0 - fx) + self.get(x1, y1) as f64 * fx;
        Some(top * (1.0 - fy) + bottom * fy)
    }
}

fn check_dims(width: usize, height: usize) -> Result<()> {
    if width == 0 || height == 0 {
        return Err(Error::EmptyImage { width, height });
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// PGM
// ---------------------------------------------------------------------------

struct HeaderCursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl HeaderCursor<'_> {
    fn skip_whitespace_and_comments(&mut self) {
        while self.pos < self.bytes.len() {
            match self.bytes[self.pos] {
                b'#' => {
                    while self.pos < self.bytes.len() && self.bytes[self.pos] != b'\n' {
                        self.pos += 1;
                    }
                }
                c if c.is_ascii_whitespace() => self.pos += 1,
                _ => break,
            }
        }
    }

    fn number(&mut self, what: &'static str) -> std::result::Result<u32, PgmError> {
        self.skip_whitespace_and_comments();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(PgmError::MalformedHeader(what));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or(PgmError::MalformedHeader(what))
    }
}

/// Decode a binary (P5) PGM with maxval 255. Header comments are accepted.
pub fn load_pgm(bytes: &[u8]) -> Result<GrayImage> {
    if bytes.len() < 2 || &bytes[..2] != b"P5" {
        return Err(PgmError::BadMagic.into());
    }
    let mut cur = HeaderCursor { bytes, pos: 2 };
    let width = cur.number("width")?;
    let height = cur.number("height")?;
    let maxval = cur.number("maxval")?;
    if width == 0 || height == 0 {
        return Err(PgmError::MalformedHeader("zero dimension").into());
    }
    if maxval != 255 {
        return Err(PgmError::UnsupportedDepth(maxval).into());
    }
    // exactly one whitespace byte separates the header from the raster
    match bytes.get(cur.pos) {
        Some(c) if c.is_ascii_whitespace() => cur.pos += 1,
        _ => return Err(PgmError::MalformedHeader("missing separator after maxval").into()),
    }
    let (w, h) = (width as usize, height as usize);
    let expected = w * h;
    let payload = &bytes[cur.pos..];
    if payload.len() < expected {
        return Err(PgmError::Truncated {
            expected,
            actual: payload.len(),
        }
        .into());
    }
    GrayImage::from_raw(w, h, payload[..expected].to_vec())
}

/// Encode with the canonical header `P5\n<w> <h>\n255\n`.
pub fn save_pgm(img: &GrayImage) -> Vec<u8> {
    let header = format!("P5\n{} {}\n255\n", img.width, img.height);
    let mut out = Vec::with_capacity(header.len() + img.data.len());
    out.extend_from_slice(header.as_bytes());
    out.extend_from_slice(&img.data);
    out
}

// ---------------------------------------------------------------------------
// Degradations
// ---------------------------------------------------------------------------

/// Replace exactly `round(rate · w · h)` distinct pixels with 0 or 255.
pub fn add_salt_pepper(img: &GrayImage, rate: f64, seed: u64) -> Result<GrayImage> {
    if !(0.0..=1.0).contains(&rate) {
        return Err(Error::InvalidRate(rate));
    }
    let total = img.data.len();
    let count = (round_half_up(rate * total as f64) as usize).min(total);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = img.clone();
    for i in index::sample(&mut rng, total, count) {
        out.data[i] = if rng.gen_bool(0.5) { 255 } else { 0 };
    }
    Ok(out)
}

/// Placement of an affine-transformed raster: the output canvas covers the
/// transformed source rectangle `[0, w] × [0, h]`; `origin` is the position
/// of the canvas's top-left corner in transformed coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineCanvas {
    pub origin: (f64, f64),
    pub width: usize,
    pub height: usize,
}

impl AffineCanvas {
    pub fn new(src_width: usize, src_height: usize, m: [[f64; 2]; 2]) -> Self {
        let (w, h) = (src_width as f64, src_height as f64);
        let corners = [(0.0, 0.0), (w, 0.0), (0.0, h), (w, h)];
        let mut min = (f64::INFINITY, f64::INFINITY);
        let mut max = (f64::NEG_INFINITY, f64::NEG_INFINITY);
        for (x, y) in corners {
            let (tx, ty) = apply(m, (x, y));
            min = (min.0.min(tx), min.1.min(ty));
            max = (max.0.max(tx), max.1.max(ty));
        }
        let width = ((max.0 - min.0) - 1e-9).ceil().max(1.0) as usize;
        let height = ((max.1 - min.1) - 1e-9).ceil().max(1.0) as usize;
        Self {
            origin: min,
            width,
            height,
        }
    }

    /// Map a source point into output-canvas coordinates.
    pub fn map(&self, m: [[f64; 2]; 2], p: (f64, f64)) -> (f64, f64) {
        let (x, y) = apply(m, p);
        (x - self.origin.0, y - self.origin.1)
    }
}

#[inline]
fn apply(m: [[f64; 2]; 2], (x, y): (f64, f64)) -> (f64, f64) {
    (m[0][0] * x + m[0][1] * y, m[1][0] * x + m[1][1] * y)
}

/// Resample `img` under `p' = m · p` with bilinear interpolation; points that
/// fall outside the source take `fill`.
pub fn affine_transform(img: &GrayImage, m: [[f64; 2]; 2], fill: u8) -> Result<GrayImage> {
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    if det.abs() <= 1e-9 {
        return Err(Error::SingularMatrix(det));
    }
    let inv = [
        [m[1][1] / det, -m[0][1] / det],
        [-m[1][0] / det, m[0][0] / det],
    ];
    let canvas = AffineCanvas::new(img.width, img.height, m);
    GrayImage::from_fn(canvas.width, canvas.height, |xo, yo| {
        // pixel centers sit at half-integer positions in continuous coordinates
        let dest = (
            xo as f64 + 0.5 + canvas.origin.0,
            yo as f64 + 0.5 + canvas.origin.1,
        );
        let (sx, sy) = apply(inv, dest);
        img.sample_bilinear(sx - 0.5, sy - 0.5)
            .map(quantize)
            .unwrap_or(fill)
    })
}

/// Uniform illumination change `I' = k · I`.
pub fn scale_illumination(img: &GrayImage, k: f64) -> Result<GrayImage> {
    if k.is_nan() || k <= 0.0 {
        return Err(Error::InvalidFactor(k));
    }
    Ok(GrayImage {
        width: img.width,
        height: img.height,
        data: img.data.iter().map(|&v| quantize(k * v as f64)).collect(),
    })
}

/// One of the four corner light sources; `L1` is brightest at the
/// bottom-right corner, the others are its mirror images.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LightSource {
    L1,
    L2,
    L3,
    L4,
}

impl LightSource {
    pub const ALL: [LightSource; 4] = [Self::L1, Self::L2, Self::L3, Self::L4];

    /// Illumination factor at `(x, y)` for an image of the given size.
    pub fn factor(self, x: f64, y: f64, width: f64, height: f64) -> f64 {
        let (fx, fy) = match self {
            Self::L1 => (x, y),
            Self::L2 => (width - x, y),
            Self::L3 => (x, height - y),
            Self::L4 => (width - x, height - y),
        };
        (fx + fy + 10.0) / (height + width + 10.0)
    }
}

impl std::fmt::Display for LightSource {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let n = match self {
            Self::L1 => 1,
            Self::L2 => 2,
            Self::L3 => 3,
            Self::L4 => 4,
        };
        write!(f, "L{n}")
    }
}

pub fn directional_illumination(img: &GrayImage, source: LightSource) -> GrayImage {
    let (w, h) = (img.width as f64, img.height as f64);
    let mut out = img.clone();
    for y in 0..img.height {
        for x in 0..img.width {
            let i = y * img.width + x;
            let f = source.factor(x as f64, y as f64, w, h);
            out.data[i] = quantize(img.data[i] as f64 * f);
        }
    }
    out
}
