//! Accumulated gradient projection vectors: project gradients onto an axis
//! through the candidate's center of gravity, accumulate, then normalize to
//! a fixed-length binary profile.

use crate::angle::wrap_pi;
use crate::axes::{compute_gradients, Axis, GradientField};
use crate::error::{Error, Result};
use crate::extraction::CharCandidate;
use crate::image::round_half_up;
use crate::scalespace::{convolve_1d, GaussianKernel};

/// Entries per vector.
pub const AGPV_LEN: usize = 32;

/// Default divisor for the binarization threshold, `max(R̃) / 16`.
pub const DEFAULT_TH_BIN_DIV: f64 = 8.0;

pub fn center_of_gravity<I>(pixels: I) -> Result<(f64, f64)>
where
    I: IntoIterator<Item = (f64, f64)>,
{
    let (mut sx, mut sy, mut n) = (0.0, 0.0, 0usize);
    for (x, y) in pixels {
        sx += x;
        sy += y;
        n += 1;
    }
    if n == 0 {
        return Err(Error::EmptyPixelSet);
    }
    Ok((sx / n as f64, sy / n as f64))
}

/// Signed coordinate of the orthogonal projection of `p` onto the line
/// through `cog` with direction `phi`.
#[inline]
pub fn project_pixel(p: (f64, f64), cog: (f64, f64), phi: f64) -> f64 {
    (p.0 - cog.0) * phi.cos() + (p.1 - cog.1) * phi.sin()
}

/// Projection accumulators R (selected, projected magnitudes) and T (all
/// magnitudes).
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionArrays {
    pub r: Vec<f64>,
    pub t: Vec<f64>,
    /// Nominal length: patch diagonal rounded up, plus one. Sets the
    /// smoothing scale.
    pub len_r: usize,
    /// Array index of projected coordinate 0 (the COG).
    pub origin_index: usize,
    pub cog: (f64, f64),
}

impl ProjectionArrays {
    fn new(width: usize, height: usize, cog: (f64, f64)) -> Self {
        let len_r = ((width * width + height * height) as f64).sqrt().ceil() as usize + 1;
        // signed coordinates span ±diagonal around the COG
        let len = 2 * len_r + 1;
        Self {
            r: vec![0.0; len],
            t: vec![0.0; len],
            len_r,
            origin_index: len_r,
            cog,
        }
    }

    fn split(&self, l: f64) -> (usize, usize, f64) {
        let pos = self.origin_index as f64 + l;
        let b = pos.floor();
        let frac = pos - b;
        let b = b as usize;
        assert!(b + 1 < self.r.len(), "projection outside accumulator");
        (b, b + 1, frac)
    }
}

/// Accumulate every sample into T, and samples whose orientation the axis
/// accepts into R, each split linearly between the two nearest indices.
pub fn accumulate(field: &GradientField, axis: &Axis, cog: (f64, f64)) -> ProjectionArrays {
    let mut arrays = ProjectionArrays::new(field.width, field.height, cog);
    for s in &field.samples {
        if s.mag == 0.0 {
            continue;
        }
        let l = project_pixel((s.x as f64, s.y as f64), cog, axis.phi);
        let (b, u, frac) = arrays.split(l);
        arrays.t[b] += s.mag * (1.0 - frac);
        arrays.t[u] += s.mag * frac;
        if axis.accepts(s.theta) {
            let projected = (s.mag * wrap_pi(s.theta - axis.phi).cos()).abs();
            arrays.r[b] += projected * (1.0 - frac);
            arrays.r[u] += projected * frac;
        }
    }
    arrays
}

/// Binary profile of one axis.
#[derive(Debug, Clone, PartialEq)]
pub struct Agpv {
    pub axis: Axis,
    /// Each entry is 0 or 255.
    pub values: [u8; AGPV_LEN],
    /// Effective range `(X_s, X_e)` in accumulator indices.
    pub effective: (usize, usize),
}

/// Smooth R and T, locate T's effective range, binarize R and resample it
/// to 32 entries over that range.
pub fn normalize_to_agpv(arrays: &ProjectionArrays, axis: &Axis, th_bin_div: f64) -> Result<Agpv> {
    let featureless = || Error::Featureless { phi: axis.phi };
    let kernel = GaussianKernel::new(arrays.len_r as f64 / 128.0)?;
    let r = convolve_1d(&arrays.r, &kernel);
    let t = convolve_1d(&arrays.t, &kernel);

    let t_max = t.iter().copied().fold(0.0, f64::max);
    if t_max.is_nan() || t_max <= 0.0 {
        return Err(featureless());
    }
    let th_t = t_max / 32.0;
    let xs = t.iter().position(|&v| v >= th_t).ok_or_else(featureless)?;
    let xe = t.iter().rposition(|&v| v >= th_t).ok_or_else(featureless)?;
    if xe <= xs {
        return Err(featureless());
    }

    let r_max = r[xs..=xe].iter().copied().fold(0.0, f64::max);
    let th_bin = r_max / th_bin_div;
    let binary = |x: usize| -> u8 {
        if r[x] > 0.0 && r[x] >= th_bin {
            255
        } else {
            0
        }
    };

    let span = (xe - xs) as f64;
    let mut values = [0u8; AGPV_LEN];
    for (i, v) in values.iter_mut().enumerate() {
        let pos = round_half_up((i + 1) as f64 / AGPV_LEN as f64 * span + xs as f64) as usize;
        *v = binary(pos.min(xe));
    }
    Ok(Agpv {
        axis: *axis,
        values,
        effective: (xs, xe),
    })
}

/// AGPV of a precomputed gradient field on one axis.
pub fn agpv_from_field(
    field: &GradientField,
    cog: (f64, f64),
    axis: &Axis,
    th_bin_div: f64,
) -> Result<Agpv> {
    let arrays = accumulate(field, axis, cog);
    normalize_to_agpv(&arrays, axis, th_bin_div)
}

/// Gradient field and center of gravity of a candidate, both in patch
/// coordinates.
pub fn candidate_field(candidate: &CharCandidate) -> Result<(GradientField, (f64, f64))> {
    let field = compute_gradients(&candidate.patch, &candidate.mask)?;
    if field.samples.is_empty() {
        return Err(Error::NoGradient);
    }
    let cog = center_of_gravity(candidate.patch_pixels().map(|(x, y)| (x as f64, y as f64)))?;
    Ok((field, cog))
}

pub fn compute_agpv(candidate: &CharCandidate, axis: &Axis, th_bin_div: f64) -> Result<Agpv> {
    let (field, cog) = candidate_field(candidate)?;
    agpv_from_field(&field, cog, axis, th_bin_div)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::axes::{AxisKind, GradientSample};
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    fn sample(x: usize, y: usize, theta: f64, mag: f64) -> GradientSample {
        GradientSample {
            x,
            y,
            gx: mag * theta.cos(),
            gy: mag * theta.sin(),
            mag,
            theta,
        }
    }

    fn field(samples: Vec<GradientSample>) -> GradientField {
        GradientField {
            width: 20,
            height: 20,
            samples,
        }
    }

    #[test]
    fn cog_cases() {
        assert_eq!(
            center_of_gravity([(0.0, 0.0), (2.0, 0.0)]).unwrap(),
            (1.0, 0.0)
        );
        assert_eq!(center_of_gravity([(3.0, 4.0)]).unwrap(), (3.0, 4.0));
        let sq = [(0.0, 0.0), (1.0, 0.0), (0.0, 1.0), (1.0, 1.0)];
        assert_eq!(center_of_gravity(sq).unwrap(), (0.5, 0.5));
        assert!(matches!(
            center_of_gravity(std::iter::empty()),
            Err(Error::EmptyPixelSet)
        ));
    }

    #[test]
    fn projection_cases() {
        assert_eq!(project_pixel((7.0, 3.0), (2.0, 9.0), 0.0), 5.0);
        for phi in [0.0, 0.3, 2.0, 5.9] {
            assert_eq!(project_pixel((2.5, 1.5), (2.5, 1.5), phi), 0.0);
        }
        let l = project_pixel((1.0, 1.0), (0.0, 0.0), FRAC_PI_4);
        assert!((l - 2f64.sqrt()).abs() < 1e-12);
        // direction matters: the opposite axis flips the sign
        assert!(
            (project_pixel((1.0, 1.0), (0.0, 0.0), PI + FRAC_PI_4) + 2f64.sqrt()).abs() < 1e-12
        );
    }

    #[test]
    fn integral_projection_hits_one_index() {
        let f = field(vec![sample(13, 5, 0.0, 10.0)]);
        let a = accumulate(&f, &Axis::augmented(0.0), (10.0, 5.0));
        let idx = a.origin_index + 3;
        assert_eq!(a.r[idx], 10.0);
        assert_eq!(a.t[idx], 10.0);
        assert_eq!(a.r.iter().sum::<f64>(), 10.0);
    }

    #[test]
    fn half_projection_splits_evenly() {
        let f = field(vec![sample(13, 5, 0.0, 10.0)]);
        let a = accumulate(&f, &Axis::augmented(0.0), (9.5, 5.0));
        let b = a.origin_index + 3;
        assert_eq!((a.r[b], a.r[b + 1]), (5.0, 5.0));
    }

    #[test]
    fn off_axis_orientation_feeds_only_t() {
        let f = field(vec![sample(13, 5, FRAC_PI_2, 10.0)]);
        let a = accumulate(&f, &Axis::augmented(0.0), (10.0, 5.0));
        assert_eq!(a.r.iter().sum::<f64>(), 0.0);
        assert_eq!(a.t.iter().sum::<f64>(), 10.0);
    }

    #[test]
    fn conservation_before_smoothing() {
        let samples: Vec<_> = (0..50)
            .map(|i| {
                sample(
                    i % 19,
                    (i * 7) % 19,
                    (i as f64) * 0.37 % (2.0 * PI),
                    1.0 + i as f64,
                )
            })
            .collect();
        let f = field(samples.clone());
        let axis = Axis::augmented(FRAC_PI_2);
        let a = accumulate(&f, &axis, (9.0, 9.0));
        let total: f64 = samples.iter().map(|s| s.mag).sum();
        assert!((a.t.iter().sum::<f64>() - total).abs() < 1e-9 * total);
        let selected: f64 = samples
            .iter()
            .filter(|s| axis.accepts(s.theta))
            .map(|s| (s.mag * (s.theta - axis.phi).cos()).abs())
            .sum();
        assert!((a.r.iter().sum::<f64>() - selected).abs() < 1e-9 * total);
        assert!(a.r.iter().zip(&a.t).all(|(r, t)| *r >= 0.0 && r <= t));
    }

    #[test]
    fn extreme_cog_stays_in_bounds() {
        // COG pulled to one corner, far pixel at the other
        let mut samples: Vec<_> = (0..99).map(|_| sample(0, 0, 0.0, 1.0)).collect();
        samples.push(sample(19, 19, 0.0, 1.0));
        let f = field(samples);
        for phi in [0.0, FRAC_PI_4, PI, 4.0] {
            let a = accumulate(&f, &Axis::augmented(phi), (0.19, 0.19));
            assert!((a.t.iter().sum::<f64>() - 100.0).abs() < 1e-9);
        }
    }

    #[test]
    fn zero_r_gives_zero_vector() {
        let f = field(vec![
            sample(3, 5, FRAC_PI_2, 10.0),
            sample(15, 5, FRAC_PI_2, 10.0),
        ]);
        let axis = Axis::augmented(0.0);
        let arrays = accumulate(&f, &axis, (9.0, 5.0));
        let v = normalize_to_agpv(&arrays, &axis, DEFAULT_TH_BIN_DIV).unwrap();
        assert_eq!(v.values, [0; AGPV_LEN]);
        assert_eq!(v.axis.kind, AxisKind::Augmented);
    }

    #[test]
    fn empty_t_is_featureless() {
        let f = field(vec![]);
        let axis = Axis::augmented(0.0);
        let arrays = accumulate(&f, &axis, (9.0, 5.0));
        assert!(matches!(
            normalize_to_agpv(&arrays, &axis, DEFAULT_TH_BIN_DIV),
            Err(Error::Featureless { .. })
        ));
    }

    #[test]
    fn single_edge_gives_single_run() {
        // broad support in T, one strong edge column in R
        let mut samples = Vec::new();
        for y in 2..18 {
            for x in 2..18 {
                samples.push(sample(x, y, FRAC_PI_2, 5.0));
            }
            samples.push(sample(12, y, 0.0, 400.0));
        }
        let f = field(samples);
        let axis = Axis::augmented(0.0);
        let v = agpv_from_field(&f, (9.5, 9.5), &axis, DEFAULT_TH_BIN_DIV).unwrap();
        let runs = v
            .values
            .windows(2)
            .filter(|w| w[0] == 0 && w[1] == 255)
            .count()
            + (v.values[0] == 255) as usize;
        assert_eq!(runs, 1);
        let (xs, xe) = v.effective;
        assert!(xs < xe && xe < 2 * 30);
    }
}
