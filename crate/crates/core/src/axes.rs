//! Gradients, the 64-bin orientation histogram and the nature / augmented
//! axes derived from it.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use crate::angle::{circular_distance, wrap_2pi, wrap_pi, ANGLE_EPS, TH_A};
use crate::error::{Error, Result};
use crate::extraction::Mask;
use crate::image::GrayImage;

pub const HIST_BINS: usize = 64;

/// Histogram bin width, 2π/64 (5.625°).
pub const HIST_RES: f64 = TAU / HIST_BINS as f64;

/// Peak half-width limit a_th, 22.5° (four bins).
pub const PEAK_HALF_WIDTH: f64 = PI / 8.0;

/// Acceptance half-width of an augmented axis, 22.5°.
pub const AUGMENTED_HALF_WIDTH: f64 = PI / 8.0;

const PEAK_SEARCH_BINS: usize = 3;

/// Gradient at one masked pixel of a patch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GradientSample {
    pub x: usize,
    pub y: usize,
    pub gx: f64,
    pub gy: f64,
    pub mag: f64,
    /// Full-quadrant orientation in `[0, 2π)`.
    pub theta: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GradientField {
    /// Dimensions of the patch the field was computed on.
    pub width: usize,
    pub height: usize,
    pub samples: Vec<GradientSample>,
}

impl GradientField {
    pub fn total_magnitude(&self) -> f64 {
        self.samples.iter().map(|s| s.mag).sum()
    }
}

/// 3×3 gradient operator at every masked pixel whose neighborhood lies
/// inside the patch.
pub fn compute_gradients(patch: &GrayImage, mask: &Mask) -> Result<GradientField> {
    let (w, h) = (patch.width(), patch.height());
    if w < 3 || h < 3 {
        return Err(Error::TooSmall {
            width: w,
            height: h,
            reason: "gradients need at least 3x3",
        });
    }
    assert_eq!(
        (mask.width(), mask.height()),
        (w, h),
        "mask not aligned with patch"
    );
    let g = |x: usize, y: usize| patch.get(x, y) as f64;
    let mut samples = Vec::new();
    for y in 1..h - 1 {
        for x in 1..w - 1 {
            if !mask.get(x, y) {
                continue;
            }
            let gx = g(x + 1, y - 1) - g(x - 1, y - 1)
                + 2.0 * (g(x + 1, y) - g(x - 1, y))
                + g(x + 1, y + 1)
                - g(x - 1, y + 1);
            let gy = g(x - 1, y + 1) - g(x - 1, y - 1)
                + 2.0 * (g(x, y + 1) - g(x, y - 1))
                + g(x + 1, y + 1)
                - g(x + 1, y - 1);
            samples.push(GradientSample {
                x,
                y,
                gx,
                gy,
                mag: (gx * gx + gy * gy).sqrt(),
                theta: wrap_2pi(gy.atan2(gx)),
            });
        }
    }
    Ok(GradientField {
        width: w,
        height: h,
        samples,
    })
}

/// Magnitude-weighted orientation histogram; bin `b` is centered on `b · RES`.
#[derive(Debug, Clone, PartialEq)]
pub struct OrientationHistogram {
    pub bins: [f64; HIST_BINS],
    /// Total gradient energy of the contributing samples.
    pub ge: f64,
}

impl OrientationHistogram {
    pub fn res(&self) -> f64 {
        HIST_RES
    }

    /// Bin value with circular indexing.
    #[inline]
    pub fn at(&self, bin: isize) -> f64 {
        self.bins[bin.rem_euclid(HIST_BINS as isize) as usize]
    }
}

/// Each sample splits its magnitude between the two nearest bin centers.
pub fn build_histogram(field: &GradientField) -> OrientationHistogram {
    let mut bins = [0.0; HIST_BINS];
    let mut ge = 0.0;
    for s in field.samples.iter().filter(|s| s.mag > 0.0) {
        let pos = s.theta / HIST_RES;
        let lo = pos.floor();
        let frac = pos - lo;
        let lo = (lo as isize).rem_euclid(HIST_BINS as isize) as usize;
        bins[lo] += s.mag * (1.0 - frac);
        bins[(lo + 1) % HIST_BINS] += s.mag * frac;
        ge += s.mag;
    }
    OrientationHistogram { bins, ge }
}

/// A strict circular local maximum of the histogram with its boundaries.
/// `start` and `end` are unwrapped bin indices, `start < center < end`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Peak {
    pub center: usize,
    pub start: isize,
    pub end: isize,
    pub energy: f64,
    pub outstanding: f64,
}

impl Peak {
    pub fn center_angle(&self) -> f64 {
        self.center as f64 * HIST_RES
    }

    /// Unwrapped; may be negative.
    pub fn start_angle(&self) -> f64 {
        self.start as f64 * HIST_RES
    }

    /// Unwrapped; may exceed 2π.
    pub fn end_angle(&self) -> f64 {
        self.end as f64 * HIST_RES
    }
}

pub fn find_peaks(hist: &OrientationHistogram) -> Vec<Peak> {
    let mut peaks = Vec::new();
    for p in 0..HIST_BINS as isize {
        let hp = hist.at(p);
        if !(hp > hist.at(p - 1) && hp > hist.at(p + 1)) {
            continue;
        }
        // lowest bin within a_th on each side; ties go to the bin nearest p
        let mut start = p;
        let mut end = p;
        for d in 1..=PEAK_SEARCH_BINS as isize {
            if hist.at(p - d) < hist.at(start) {
                start = p - d;
            }
            if hist.at(p + d) < hist.at(end) {
                end = p + d;
            }
        }
        let energy: f64 = (start..=end).map(|b| hist.at(b)).sum();
        let trapezoid = (hist.at(start) + hist.at(end)) * (end - start) as f64 / 2.0;
        peaks.push(Peak {
            center: p as usize,
            start,
            end,
            energy,
            outstanding: energy - trapezoid,
        });
    }
    peaks
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AxisKind {
    Nature,
    Augmented,
}

impl AxisKind {
    pub fn code(self) -> char {
        match self {
            AxisKind::Nature => 'N',
            AxisKind::Augmented => 'A',
        }
    }
}

/// Outstanding-energy threshold: GE/32 for standard characters, GE/64 for
/// test characters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AxisMode {
    Standard,
    Test,
}

impl AxisMode {
    pub fn divisor(self) -> f64 {
        match self {
            AxisMode::Standard => 32.0,
            AxisMode::Test => 64.0,
        }
    }
}

/// A projection direction together with the gradient orientations it
/// collects.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub kind: AxisKind,
    /// Direction in `[0, 2π)`.
    pub phi: f64,
    /// Orientation acceptance interval as offsets from `phi`.
    pub range: (f64, f64),
    pub peak: Option<Peak>,
}

impl Axis {
    pub fn nature(peak: Peak) -> Self {
        let phi = peak.center_angle();
        Self {
            kind: AxisKind::Nature,
            phi,
            range: (peak.start_angle() - phi, peak.end_angle() - phi),
            peak: Some(peak),
        }
    }

    pub fn augmented(phi: f64) -> Self {
        Self {
            kind: AxisKind::Augmented,
            phi: wrap_2pi(phi),
            range: (-AUGMENTED_HALF_WIDTH, AUGMENTED_HALF_WIDTH),
            peak: None,
        }
    }

    /// Whether a gradient orientation is projected onto this axis: strictly
    /// inside a nature peak's boundaries, or within ±22.5° (inclusive) of an
    /// augmented direction.
    pub fn accepts(&self, theta: f64) -> bool {
        let d = wrap_pi(theta - self.phi);
        match self.kind {
            AxisKind::Nature => d > self.range.0 && d < self.range.1,
            AxisKind::Augmented => d >= self.range.0 - ANGLE_EPS && d <= self.range.1 + ANGLE_EPS,
        }
    }
}

pub fn select_nature_axes(peaks: &[Peak], ge: f64, mode: AxisMode) -> Vec<Axis> {
    let threshold = ge / mode.divisor();
    peaks
        .iter()
        .filter(|p| p.outstanding > threshold)
        .map(|&p| Axis::nature(p))
        .collect()
}

/// The four fixed directions 0, π/2, π, 3π/2, minus any already covered by
/// a nature axis within π/32.
pub fn augmented_axes(nature: &[Axis]) -> Vec<Axis> {
    (0..4)
        .map(|k| k as f64 * FRAC_PI_2)
        .filter(|&dir| {
            !nature
                .iter()
                .any(|a| circular_distance(a.phi, dir) <= TH_A + ANGLE_EPS)
        })
        .map(Axis::augmented)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn full_mask(w: usize, h: usize) -> Mask {
        Mask::from_bits(w, h, vec![true; w * h])
    }

    fn hist_with(values: &[(usize, f64)]) -> OrientationHistogram {
        let mut bins = [0.0; HIST_BINS];
        for &(b, v) in values {
            bins[b] = v;
        }
        OrientationHistogram {
            bins,
            ge: bins.iter().sum(),
        }
    }

    fn sample(theta: f64, mag: f64) -> GradientSample {
        GradientSample {
            x: 1,
            y: 1,
            gx: mag * theta.cos(),
            gy: mag * theta.sin(),
            mag,
            theta,
        }
    }

    #[test]
    fn vertical_step_gradient() {
        let patch = GrayImage::from_fn(3, 3, |x, _| if x == 2 { 255 } else { 0 }).unwrap();
        let f = compute_gradients(&patch, &full_mask(3, 3)).unwrap();
        assert_eq!(f.samples.len(), 1);
        let s = f.samples[0];
        assert_eq!((s.gx, s.gy, s.theta), (1020.0, 0.0, 0.0));

        let t = GrayImage::from_fn(3, 3, |_, y| if y == 2 { 255 } else { 0 }).unwrap();
        let s = compute_gradients(&t, &full_mask(3, 3)).unwrap().samples[0];
        assert_eq!((s.gx, s.gy), (0.0, 1020.0));
        assert!((s.theta - FRAC_PI_2).abs() < 1e-15);
    }

    #[test]
    fn gradient_orientation_is_full_quadrant() {
        // brighter to the left: gradient points toward -x
        let patch = GrayImage::from_fn(3, 3, |x, _| if x == 0 { 255 } else { 0 }).unwrap();
        let s = compute_gradients(&patch, &full_mask(3, 3)).unwrap().samples[0];
        assert!((s.theta - PI).abs() < 1e-15);
    }

    #[test]
    fn constant_patch_and_mask() {
        let patch = GrayImage::filled(6, 5, 80).unwrap();
        let f = compute_gradients(&patch, &full_mask(6, 5)).unwrap();
        assert_eq!(f.samples.len(), 4 * 3);
        assert!(f.samples.iter().all(|s| s.mag == 0.0));
        let mut m = Mask::new(6, 5);
        m.set(2, 2, true);
        m.set(0, 0, true); // border pixel: no full neighborhood
        assert_eq!(compute_gradients(&patch, &m).unwrap().samples.len(), 1);
        assert!(compute_gradients(&GrayImage::filled(2, 5, 0).unwrap(), &full_mask(2, 5)).is_err());
    }

    #[test]
    fn histogram_interpolation() {
        let field = |s| GradientField {
            width: 3,
            height: 3,
            samples: vec![s],
        };
        let h = build_histogram(&field(sample(3.0 * HIST_RES, 10.0)));
        assert!((h.bins[3] - 10.0).abs() < 1e-9);
        assert!(h.bins[2].abs() < 1e-9 && h.bins[4].abs() < 1e-9);
        let h = build_histogram(&field(sample(7.5 * HIST_RES, 10.0)));
        assert!((h.bins[7] - 5.0).abs() < 1e-9 && (h.bins[8] - 5.0).abs() < 1e-9);
        // wraps from the last bin into bin 0
        let h = build_histogram(&field(sample(63.5 * HIST_RES, 4.0)));
        assert!((h.bins[63] - 2.0).abs() < 1e-9 && (h.bins[0] - 2.0).abs() < 1e-9);
        assert!((HIST_RES.to_degrees() - 5.625).abs() < 1e-12);
    }

    #[test]
    fn zero_magnitude_samples_skipped() {
        let f = GradientField {
            width: 3,
            height: 3,
            samples: vec![sample(1.0, 0.0), sample(0.0, 3.0)],
        };
        let h = build_histogram(&f);
        assert_eq!(h.ge, 3.0);
        assert_eq!(h.bins.iter().sum::<f64>(), 3.0);
    }

    #[test]
    fn triangular_bump() {
        let h = hist_with(&[(9, 1.0), (10, 3.0), (11, 6.0), (12, 3.0), (13, 1.0)]);
        let peaks = find_peaks(&h);
        assert_eq!(peaks.len(), 1);
        let p = peaks[0];
        assert_eq!((p.center, p.start, p.end), (11, 8, 14));
        assert_eq!(p.energy, 14.0);
        assert_eq!(p.outstanding, 14.0);

        // nonzero floor at the boundaries is subtracted as a trapezoid
        let mut h2 = h.clone();
        for b in h2.bins.iter_mut() {
            *b += 1.0;
        }
        let p = find_peaks(&h2)[0];
        assert_eq!((p.start, p.end), (8, 14));
        assert_eq!(p.energy, 21.0);
        assert_eq!(p.outstanding, 21.0 - 6.0);
        assert!(p.outstanding < p.energy);
    }

    #[test]
    fn flat_histogram_has_no_peaks() {
        let mut h = hist_with(&[]);
        h.bins = [2.5; HIST_BINS];
        assert!(find_peaks(&h).is_empty());
    }

    #[test]
    fn opposite_deltas() {
        let h = hist_with(&[(0, 8.0), (32, 8.0)]);
        let peaks = find_peaks(&h);
        assert_eq!(peaks.len(), 2);
        for (p, c) in peaks.iter().zip([0, 32]) {
            assert_eq!(p.center, c);
            assert_eq!((p.start, p.end), (c as isize - 1, c as isize + 1));
            assert_eq!(p.energy, 8.0);
            assert_eq!(p.outstanding, 8.0);
        }
    }

    #[test]
    fn nature_threshold_is_strict() {
        let peak = |outstanding| Peak {
            center: 4,
            start: 3,
            end: 5,
            energy: outstanding,
            outstanding,
        };
        let ge = 64.0;
        assert!(select_nature_axes(&[peak(2.0)], ge, AxisMode::Standard).is_empty());
        assert_eq!(
            select_nature_axes(&[peak(2.0)], ge, AxisMode::Test).len(),
            1
        );
        assert_eq!(
            select_nature_axes(&[peak(2.5)], ge, AxisMode::Standard).len(),
            1
        );
        assert!(select_nature_axes(&[], ge, AxisMode::Test).is_empty());
    }

    #[test]
    fn augmented_dedup() {
        assert_eq!(augmented_axes(&[]).len(), 4);
        let at = |phi: f64| Axis {
            kind: AxisKind::Nature,
            phi,
            range: (-0.1, 0.1),
            peak: None,
        };
        let three = augmented_axes(&[at(FRAC_PI_2)]);
        assert_eq!(three.len(), 3);
        assert!(three.iter().all(|a| (a.phi - FRAC_PI_2).abs() > 1.0));
        assert_eq!(augmented_axes(&[at(FRAC_PI_2 + PI / 16.0)]).len(), 4);
        assert_eq!(augmented_axes(&[at(TAU - PI / 40.0)]).len(), 3);
    }

    #[test]
    fn axis_acceptance() {
        let aug = Axis::augmented(0.0);
        assert!(aug.accepts(PI / 8.0));
        assert!(aug.accepts(TAU - PI / 8.0));
        assert!(!aug.accepts(PI / 8.0 + 0.01));
        assert!(!aug.accepts(FRAC_PI_2));
        let peak = Peak {
            center: 0,
            start: -2,
            end: 3,
            energy: 1.0,
            outstanding: 1.0,
        };
        let nat = Axis::nature(peak);
        assert!(nat.accepts(TAU - HIST_RES));
        assert!(!nat.accepts(TAU - 2.5 * HIST_RES));
        assert!(nat.accepts(2.9 * HIST_RES));
        assert!(!nat.accepts(3.2 * HIST_RES));
    }
}
