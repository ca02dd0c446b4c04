//! Gaussian kernels, separable smoothing, sub-sampling and the octave
//! pyramid of difference-of-Gaussian images.

use crate::error::{Error, Result};
use crate::image::{quantize, GrayImage};

/// Smoothing factor of the initial scale and of the per-octave blur.
pub const OCTAVE_SIGMA: f64 = 1.0;

/// Smallest octave side the pyramid will produce.
pub const MIN_OCTAVE_SIDE: usize = 8;

/// Sampled, unit-sum Gaussian whose width is the smallest odd integer ≥ 7σ.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianKernel {
    sigma: f64,
    coeffs: Vec<f64>,
}

impl GaussianKernel {
    pub fn new(sigma: f64) -> Result<Self> {
        if !sigma.is_finite() || sigma <= 0.0 {
            return Err(Error::InvalidSigma(sigma));
        }
        let width = kernel_width(sigma);
        let radius = (width / 2) as isize;
        let mut coeffs: Vec<f64> = (-radius..=radius)
            .map(|t| (-((t * t) as f64) / (2.0 * sigma * sigma)).exp())
            .collect();
        let sum: f64 = coeffs.iter().sum();
        coeffs.iter_mut().for_each(|c| *c /= sum);
        Ok(Self { sigma, coeffs })
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// Number of taps (λ).
    pub fn width(&self) -> usize {
        self.coeffs.len()
    }

    pub fn radius(&self) -> usize {
        self.coeffs.len() / 2
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }
}

/// λ = smallest odd integer with λ ≥ 7σ.
pub fn kernel_width(sigma: f64) -> usize {
    // tolerate representation error in products such as 7 × 0.1
    let n = (7.0 * sigma - 1e-9).ceil().max(1.0) as usize;
    if n.is_multiple_of(2) {
        n + 1
    } else {
        n
    }
}

#[inline]
fn clamp_index(i: isize, len: usize) -> usize {
    i.clamp(0, len as isize - 1) as usize
}

/// 1-D convolution with replicate borders.
pub fn convolve_1d(signal: &[f64], kernel: &GaussianKernel) -> Vec<f64> {
    let r = kernel.radius() as isize;
    let n = signal.len();
    (0..n as isize)
        .map(|i| {
            kernel
                .coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| c * signal[clamp_index(i + k as isize - r, n)])
                .sum()
        })
        .collect()
}

/// Separable Gaussian smoothing with replicate borders: a horizontal pass
/// then a vertical pass in real precision, quantized once at the end.
pub fn convolve_gaussian(img: &GrayImage, kernel: &GaussianKernel) -> GrayImage {
    let (w, h) = (img.width(), img.height());
    let r = kernel.radius() as isize;
    let coeffs = kernel.coeffs();
    let src = img.data();

    let mut horizontal = vec![0.0f64; w * h];
    for y in 0..h {
        let row = &src[y * w..(y + 1) * w];
        let out = &mut horizontal[y * w..(y + 1) * w];
        for (x, o) in out.iter_mut().enumerate() {
            let mut acc = 0.0;
            for (k, c) in coeffs.iter().enumerate() {
                acc += c * row[clamp_index(x as isize + k as isize - r, w)] as f64;
            }
            *o = acc;
        }
    }

    let mut data = vec![0u8; w * h];
    let mut acc = vec![0.0f64; w];
    for y in 0..h {
        acc.iter_mut().for_each(|a| *a = 0.0);
        for (k, c) in coeffs.iter().enumerate() {
            let sy = clamp_index(y as isize + k as isize - r, h);
            let row = &horizontal[sy * w..(sy + 1) * w];
            for (a, v) in acc.iter_mut().zip(row) {
                *a += c * v;
            }
        }
        for (d, a) in data[y * w..(y + 1) * w].iter_mut().zip(&acc) {
            *d = quantize(*a);
        }
    }
    GrayImage::from_raw(w, h, data).expect("dimensions unchanged")
}

/// Keep every second pixel on each row and column: `out(x, y) = in(2x, 2y)`.
pub fn subsample(img: &GrayImage) -> Result<GrayImage> {
    let (w, h) = (img.width(), img.height());
    if w < 2 || h < 2 {
        return Err(Error::TooSmall {
            width: w,
            height: h,
            reason: "sub-sampling needs at least 2x2",
        });
    }
    GrayImage::from_fn(w / 2, h / 2, |x, y| img.get(2 * x, 2 * y))
}

/// Signed 16-bit raster holding a difference-of-Gaussian response.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DogImage {
    width: usize,
    height: usize,
    data: Vec<i16>,
}

impl DogImage {
    /// `a − b`, pixel by pixel.
    pub fn difference(a: &GrayImage, b: &GrayImage) -> Self {
        assert_eq!((a.width(), a.height()), (b.width(), b.height()));
        Self {
            width: a.width(),
            height: a.height(),
            data: a
                .data()
                .iter()
                .zip(b.data())
                .map(|(&p, &q)| p as i16 - q as i16)
                .collect(),
        }
    }

    pub fn from_raw(width: usize, height: usize, data: Vec<i16>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::EmptyImage { width, height });
        }
        if data.len() != width * height {
            return Err(Error::BufferSize {
                width,
                height,
                expected: width * height,
                actual: data.len(),
            });
        }
        Ok(Self {
            width,
            height,
            data,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn data(&self) -> &[i16] {
        &self.data
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> i16 {
        self.data[y * self.width + x]
    }

    /// Viewable copy: value + 128, clamped to 8 bits.
    pub fn to_offset_gray(&self) -> GrayImage {
        let data = self
            .data
            .iter()
            .map(|&v| (v as i32 + 128).clamp(0, 255) as u8)
            .collect();
        GrayImage::from_raw(self.width, self.height, data).expect("dimensions unchanged")
    }
}

/// One level of the pyramid.
#[derive(Debug, Clone)]
pub struct Octave {
    /// 1-based.
    pub index: usize,
    /// Initial image of the octave (equivalent σ = 1 on its own grid).
    pub initial: GrayImage,
    /// `initial` after one more σ = 1 blur.
    pub smoothed: GrayImage,
    /// `initial − smoothed`.
    pub dog: DogImage,
    /// Octave pixel → input pixel multiplier, 2^(index−1).
    pub scale_factor: usize,
}

/// Number of octaves whose initial image stays at least 8×8.
pub fn resolvable_octaves(width: usize, height: usize) -> usize {
    let (mut w, mut h, mut n) = (width, height, 0);
    while w >= MIN_OCTAVE_SIDE && h >= MIN_OCTAVE_SIDE {
        n += 1;
        w /= 2;
        h /= 2;
    }
    n
}

/// Build `octaves` levels: I₁ = G(1) ∗ input; per octave the smoothed image
/// is G(1) ∗ initial, the DOG is initial − smoothed, and the next initial
/// is the sub-sampled smoothed image.
pub fn build_pyramid(img: &GrayImage, octaves: usize) -> Result<Vec<Octave>> {
    let available = resolvable_octaves(img.width(), img.height());
    if octaves == 0 || available < octaves {
        return Err(Error::TooFewOctaves {
            width: img.width(),
            height: img.height(),
            requested: octaves,
            available,
        });
    }
    let kernel = GaussianKernel::new(OCTAVE_SIGMA)?;
    let mut out = Vec::with_capacity(octaves);
    let mut initial = convolve_gaussian(img, &kernel);
    for index in 1..=octaves {
        let smoothed = convolve_gaussian(&initial, &kernel);
        let dog = DogImage::difference(&initial, &smoothed);
        let next = if index < octaves {
            Some(subsample(&smoothed)?)
        } else {
            None
        };
        out.push(Octave {
            index,
            initial,
            smoothed,
            dog,
            scale_factor: 1 << (index - 1),
        });
        match next {
            Some(n) => initial = n,
            None => break,
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_widths() {
        assert_eq!(GaussianKernel::new(1.0).unwrap().width(), 7);
        assert_eq!(GaussianKernel::new(2.0).unwrap().width(), 15);
        assert_eq!(GaussianKernel::new(4.0).unwrap().width(), 29);
        assert_eq!(kernel_width(0.1), 1);
        assert_eq!(kernel_width(0.5), 5);
        assert!(matches!(
            GaussianKernel::new(0.0),
            Err(Error::InvalidSigma(_))
        ));
        assert!(GaussianKernel::new(-1.0).is_err());
    }

    #[test]
    fn kernel_ladder_symmetric_and_normalized() {
        for sigma in [1.0, 2.0, 4.0, 8.0, 16.0] {
            let k = GaussianKernel::new(sigma).unwrap();
            assert_eq!(k.width() % 2, 1);
            assert!(k.width() as f64 >= 7.0 * sigma);
            assert!(k.width() as f64 - 2.0 < 7.0 * sigma);
            let sum: f64 = k.coeffs().iter().sum();
            assert!((sum - 1.0).abs() < 1e-9);
            let c = k.coeffs();
            for i in 0..c.len() {
                assert_eq!(c[i], c[c.len() - 1 - i]);
            }
        }
    }

    #[test]
    fn constant_image_is_preserved() {
        let img = GrayImage::filled(19, 13, 173).unwrap();
        let k = GaussianKernel::new(2.0).unwrap();
        assert_eq!(convolve_gaussian(&img, &k), img);
    }

    #[test]
    fn one_pixel_image() {
        let img = GrayImage::filled(1, 1, 42).unwrap();
        let k = GaussianKernel::new(1.0).unwrap();
        assert_eq!(convolve_gaussian(&img, &k), img);
    }

    #[test]
    fn subsample_takes_even_indices() {
        let img = GrayImage::from_fn(4, 4, |x, y| (y * 4 + x) as u8).unwrap();
        let s = subsample(&img).unwrap();
        assert_eq!((s.width(), s.height()), (2, 2));
        assert_eq!(s.data(), &[0, 2, 8, 10]);
        let odd = GrayImage::filled(5, 3, 1).unwrap();
        let s = subsample(&odd).unwrap();
        assert_eq!((s.width(), s.height()), (2, 1));
        assert!(subsample(&GrayImage::filled(1, 5, 0).unwrap()).is_err());
    }

    #[test]
    fn subsample_twice_takes_every_fourth() {
        let img = GrayImage::from_fn(8, 8, |x, y| (y * 8 + x) as u8).unwrap();
        let twice = subsample(&subsample(&img).unwrap()).unwrap();
        assert_eq!(twice.data(), &[0, 4, 32, 36]);
    }

    #[test]
    fn pyramid_sizes_and_errors() {
        let img = GrayImage::filled(2048, 1536, 90).unwrap();
        let pyr = build_pyramid(&img, 4).unwrap();
        let sizes: Vec<_> = pyr
            .iter()
            .map(|o| (o.initial.width(), o.initial.height()))
            .collect();
        assert_eq!(
            sizes,
            vec![(2048, 1536), (1024, 768), (512, 384), (256, 192)]
        );
        for o in &pyr {
            assert!(o.dog.data().iter().all(|&v| v == 0));
            assert_eq!(o.scale_factor, 1 << (o.index - 1));
            assert_eq!(o.smoothed.width(), o.initial.width());
        }
        let small = GrayImage::filled(40, 40, 0).unwrap();
        assert_eq!(resolvable_octaves(40, 40), 3);
        assert!(matches!(
            build_pyramid(&small, 4),
            Err(Error::TooFewOctaves { available: 3, .. })
        ));
    }

    #[test]
    fn dog_offset_view() {
        let dog = DogImage::from_raw(3, 1, vec![-200, 0, 100]).unwrap();
        assert_eq!(dog.to_offset_gray().data(), &[0, 128, 228]);
    }
}
