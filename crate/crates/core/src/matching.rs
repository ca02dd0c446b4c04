//! Standard AGPV database and the staged recognizer.
//!
//! Recognition of one test character against standard character `i`:
//!
//! 1. the fundamental pair is the (test axis, standard axis) pair of lowest
//!    matching cost; `i` survives only if that cost is below `th_f`;
//! 2. the other standard nature axes are paired with test nature axes whose
//!    angle relative to the fundamental pair agrees within π/32;
//! 3. the costs of those pairs are summed;
//! 4. each standard augmented axis is mapped onto the test character through
//!    the fundamental pair and compared against a test nature vector at that
//!    angle, or a vector computed fresh on the mapped angle;
//! 5. the sum is divided by the number of standard vectors.
//!
//! The lowest normalized cost wins and is reported when below `th_rec`.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::sync::OnceLock;

use crate::agpv::{agpv_from_field, candidate_field, AGPV_LEN};
use crate::angle::{circular_distance, wrap_2pi, wrap_pi, ANGLE_EPS, TH_A};
use crate::axes::{
    augmented_axes, build_histogram, find_peaks, select_nature_axes, Axis, AxisKind, AxisMode,
    GradientField, HIST_BINS, HIST_RES,
};
use crate::error::{DbFormatError, Error, Result};
use crate::extraction::CharCandidate;

pub type AgpvValues = [u8; AGPV_LEN];

/// The 36 standard characters in label order.
pub const LABELS: [char; 36] = [
    '0', '1', '2', '3', '4', '5', '6', '7', '8', '9', 'A', 'B', 'C', 'D', 'E', 'F', 'G', 'H', 'I',
    'J', 'K', 'L', 'M', 'N', 'O', 'P', 'Q', 'R', 'S', 'T', 'U', 'V', 'W', 'X', 'Y', 'Z',
];

pub fn is_standard_label(c: char) -> bool {
    c.is_ascii_digit() || c.is_ascii_uppercase()
}

/// Number of rising edges: `v[i] = 0` followed by `v[i+1] > 0`, plus one
/// when the vector starts inside a run.
pub fn edge_count(v: &[u8]) -> usize {
    let leading = v.first().is_some_and(|&x| x > 0) as usize;
    leading + v.windows(2).filter(|w| w[0] == 0 && w[1] > 0).count()
}

/// `|EC(U) − EC(V)| + |EC(U ∪ V) − EC(V)| + |EC(U ∩ V) − EC(V)|`.
///
/// Not symmetric: every term is measured against `v`, so the recognizer
/// always passes the test vector first and the standard vector second.
pub fn match_cost(u: &[u8], v: &[u8]) -> u32 {
    assert_eq!(u.len(), v.len(), "vectors of different length");
    let union: Vec<u8> = u
        .iter()
        .zip(v)
        .map(|(&a, &b)| (a > 0 || b > 0) as u8)
        .collect();
    let inter: Vec<u8> = u
        .iter()
        .zip(v)
        .map(|(&a, &b)| (a > 0 && b > 0) as u8)
        .collect();
    let ec_v = edge_count(v) as i64;
    let d = |e: usize| (e as i64 - ec_v).unsigned_abs() as u32;
    d(edge_count(u)) + d(edge_count(&union)) + d(edge_count(&inter))
}

/// Whether the angle between test axes (a1, a2) agrees with the angle
/// between standard axes (b1, b2) within π/32.
pub fn angles_compatible(a1: f64, a2: f64, b1: f64, b2: f64) -> bool {
    let d = wrap_pi(wrap_pi(a1 - a2) - wrap_pi(b1 - b2));
    d.abs() <= TH_A + ANGLE_EPS
}

// ---------------------------------------------------------------------------
// Standard database
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
pub struct StandardVector {
    pub kind: AxisKind,
    /// Axis angle in `[0, 2π)`, kept at the 6-decimal precision of the file
    /// format so that a loaded database equals the one that was saved.
    pub phi: f64,
    pub values: AgpvValues,
}

/// AGPVs of one standard character, nature vectors first.
#[derive(Debug, Clone, PartialEq)]
pub struct StandardChar {
    pub label: char,
    pub vectors: Vec<StandardVector>,
}

impl StandardChar {
    pub fn nature_count(&self) -> usize {
        self.vectors
            .iter()
            .filter(|v| v.kind == AxisKind::Nature)
            .count()
    }

    pub fn augmented_count(&self) -> usize {
        self.vectors.len() - self.nature_count()
    }

    pub fn vector_count(&self) -> usize {
        self.vectors.len()
    }

    /// Standard-mode axes and their vectors for one clean candidate.
    pub fn from_candidate(label: char, candidate: &CharCandidate, th_bin_div: f64) -> Result<Self> {
        let (field, cog) = candidate_field(candidate)?;
        let hist = build_histogram(&field);
        let nature = select_nature_axes(&find_peaks(&hist), hist.ge, AxisMode::Standard);
        let augmented = augmented_axes(&nature);
        let mut vectors = Vec::with_capacity(nature.len() + augmented.len());
        for axis in nature.iter().chain(&augmented) {
            match agpv_from_field(&field, cog, axis, th_bin_div) {
                Ok(v) => vectors.push(StandardVector {
                    kind: axis.kind,
                    phi: round6(axis.phi),
                    values: v.values,
                }),
                Err(Error::Featureless { .. }) => {}
                Err(e) => return Err(e),
            }
        }
        if vectors.is_empty() {
            return Err(Error::NoCandidate(label));
        }
        Ok(Self { label, vectors })
    }
}

fn round6(v: f64) -> f64 {
    let r = (v * 1e6).round() / 1e6;
    if r >= std::f64::consts::TAU {
        0.0
    } else {
        r
    }
}

pub const DB_MAGIC: &str = "AGPVDB";
pub const DB_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Default)]
pub struct StandardDb {
    chars: Vec<StandardChar>,
}

impl StandardDb {
    /// Any set of distinct labels, kept in label order.
    pub fn from_chars(mut chars: Vec<StandardChar>) -> Result<Self> {
        chars.sort_by_key(|c| c.label);
        if let Some(w) = chars.windows(2).find(|w| w[0].label == w[1].label) {
            return Err(Error::DuplicateLabel(w[0].label));
        }
        Ok(Self { chars })
    }

    pub fn chars(&self) -> &[StandardChar] {
        &self.chars
    }

    pub fn len(&self) -> usize {
        self.chars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chars.is_empty()
    }

    pub fn get(&self, label: char) -> Option<&StandardChar> {
        self.chars.iter().find(|c| c.label == label)
    }

    /// Copy without one character.
    pub fn without(&self, label: char) -> StandardDb {
        StandardDb {
            chars: self
                .chars
                .iter()
                .filter(|c| c.label != label)
                .cloned()
                .collect(),
        }
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{DB_MAGIC} {DB_VERSION} {}", self.chars.len());
        for c in &self.chars {
            let _ = writeln!(
                s,
                "CHAR {} {} {}",
                c.label,
                c.nature_count(),
                c.augmented_count()
            );
            for v in &c.vectors {
                let _ = write!(s, "AXIS {} {:.6}", v.kind.code(), v.phi);
                for x in v.values {
                    let _ = write!(s, " {x}");
                }
                s.push('\n');
            }
        }
        s
    }

    pub fn parse(text: &str) -> Result<StandardDb> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());
        let malformed = |line: usize, reason: &str| DbFormatError::Malformed {
            line,
            reason: reason.to_string(),
        };

        let (_, header) = lines.next().ok_or(DbFormatError::BadHeader)?;
        let mut parts = header.split_whitespace();
        if parts.next() != Some(DB_MAGIC) {
            return Err(DbFormatError::BadHeader.into());
        }
        let version: u32 = parts
            .next()
            .and_then(|v| v.parse().ok())
            .ok_or(DbFormatError::BadHeader)?;
        if version != DB_VERSION {
            return Err(DbFormatError::UnsupportedVersion(version).into());
        }
        let count: usize = parts
            .next()
            .and_then(|v| v.parse().ok())
            .ok_or(DbFormatError::BadHeader)?;
        if parts.next().is_some() {
            return Err(DbFormatError::BadHeader.into());
        }

        let mut chars = Vec::with_capacity(count);
        for _ in 0..count {
            let (ln, line) = lines
                .next()
                .ok_or_else(|| malformed(0, "fewer characters than declared"))?;
            let f: Vec<&str> = line.split_whitespace().collect();
            if f.len() != 4 || f[0] != "CHAR" {
                return Err(malformed(ln, "expected CHAR <label> <NN> <NA>").into());
            }
            let mut label_chars = f[1].chars();
            let label = match (label_chars.next(), label_chars.next()) {
                (Some(c), None) if is_standard_label(c) => c,
                _ => return Err(malformed(ln, "label must be one of 0-9, A-Z").into()),
            };
            let nn: usize = f[2]
                .parse()
                .map_err(|_| malformed(ln, "bad nature count"))?;
            let na: usize = f[3]
                .parse()
                .map_err(|_| malformed(ln, "bad augmented count"))?;
            let mut vectors = Vec::with_capacity(nn + na);
            for j in 0..nn + na {
                let (ln, line) = lines
                    .next()
                    .ok_or_else(|| malformed(ln, "fewer AXIS lines than declared"))?;
                let f: Vec<&str> = line.split_whitespace().collect();
                if f.len() != 3 + AGPV_LEN || f[0] != "AXIS" {
                    return Err(malformed(ln, "expected AXIS <N|A> <phi> and 32 values").into());
                }
                let kind = match f[1] {
                    "N" => AxisKind::Nature,
                    "A" => AxisKind::Augmented,
                    _ => return Err(malformed(ln, "axis kind must be N or A").into()),
                };
                if (kind == AxisKind::Nature) != (j < nn) {
                    return Err(malformed(ln, "nature axes must precede augmented axes").into());
                }
                let phi: f64 = f[2].parse().map_err(|_| malformed(ln, "bad angle"))?;
                if !(0.0..std::f64::consts::TAU).contains(&phi) {
                    return Err(malformed(ln, "angle outside [0, 2pi)").into());
                }
                let mut values = [0u8; AGPV_LEN];
                for (v, s) in values.iter_mut().zip(&f[3..]) {
                    *v = match *s {
                        "0" => 0,
                        "255" => 255,
                        _ => return Err(malformed(ln, "vector entries must be 0 or 255").into()),
                    };
                }
                vectors.push(StandardVector { kind, phi, values });
            }
            chars.push(StandardChar { label, vectors });
        }
        if let Some((ln, _)) = lines.next() {
            return Err(malformed(ln, "trailing content after last character").into());
        }
        StandardDb::from_chars(chars)
    }
}

/// Build the full 36-character database from one clean candidate per label.
pub fn build_db(samples: &[(char, CharCandidate)], th_bin_div: f64) -> Result<StandardDb> {
    let mut seen = BTreeSet::new();
    for (label, _) in samples {
        if !is_standard_label(*label) {
            return Err(Error::UnknownLabel(*label));
        }
        if !seen.insert(*label) {
            return Err(Error::DuplicateLabel(*label));
        }
    }
    if let Some(missing) = LABELS.iter().find(|l| !seen.contains(l)) {
        return Err(Error::MissingLabel(*missing));
    }
    let chars = samples
        .iter()
        .map(|(label, cand)| StandardChar::from_candidate(*label, cand, th_bin_div))
        .collect::<Result<Vec<_>>>()?;
    StandardDb::from_chars(chars)
}

// ---------------------------------------------------------------------------
// Test features and recognition
// ---------------------------------------------------------------------------

/// Test-mode nature axes of one candidate, their vectors, and the gradient
/// field kept for vectors computed on demand.
#[derive(Debug)]
pub struct TestFeatures {
    pub axes: Vec<Axis>,
    pub vectors: Vec<AgpvValues>,
    pub field: GradientField,
    pub cog: (f64, f64),
    th_bin_div: f64,
    // on-demand vectors for axis angles that fall on the histogram bin grid
    grid_cache: Vec<OnceLock<AgpvValues>>,
}

impl TestFeatures {
    pub fn from_candidate(candidate: &CharCandidate, th_bin_div: f64) -> Result<Self> {
        let (field, cog) = candidate_field(candidate)?;
        Ok(Self::from_field(field, cog, th_bin_div))
    }

    pub fn from_field(field: GradientField, cog: (f64, f64), th_bin_div: f64) -> Self {
        let hist = build_histogram(&field);
        let mut axes = Vec::new();
        let mut vectors = Vec::new();
        for axis in select_nature_axes(&find_peaks(&hist), hist.ge, AxisMode::Test) {
            if let Ok(v) = agpv_from_field(&field, cog, &axis, th_bin_div) {
                axes.push(axis);
                vectors.push(v.values);
            }
        }
        Self {
            axes,
            vectors,
            field,
            cog,
            th_bin_div,
            grid_cache: (0..HIST_BINS).map(|_| OnceLock::new()).collect(),
        }
    }

    pub fn nature_count(&self) -> usize {
        self.axes.len()
    }

    /// Vector on an augmented-style axis at `phi` (±22.5° acceptance); all
    /// zeros when the axis has no effective range.
    pub fn vector_at(&self, phi: f64) -> AgpvValues {
        let phi = wrap_2pi(phi);
        let bins = phi / HIST_RES;
        let bin = bins.round();
        if (bins - bin).abs() < 1e-4 {
            let bin = (bin as usize) % HIST_BINS;
            *self.grid_cache[bin].get_or_init(|| self.compute_at(bin as f64 * HIST_RES))
        } else {
            self.compute_at(phi)
        }
    }

    fn compute_at(&self, phi: f64) -> AgpvValues {
        agpv_from_field(
            &self.field,
            self.cog,
            &Axis::augmented(phi),
            self.th_bin_div,
        )
        .map(|v| v.values)
        .unwrap_or([0; AGPV_LEN])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Orientation {
    /// Any fundamental pair may be chosen.
    Unknown,
    /// The fundamental pair must agree in absolute angle within π/32.
    Known,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatchParams {
    /// A standard character survives stage 1 when its fundamental cost is
    /// below this.
    pub th_f: f64,
    /// A label is reported when the normalized cost is below this.
    pub th_rec: f64,
}

impl Default for MatchParams {
    fn default() -> Self {
        Self {
            th_f: 6.0,
            th_rec: 1.0,
        }
    }
}

/// Which test vector a standard vector was compared with.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairSource {
    Unmatched,
    /// Index into the test nature vectors.
    Test(usize),
    /// Computed on the mapped angle from the cached gradient field.
    Fresh,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CharScore {
    pub label: char,
    /// Normalized character matching cost.
    pub cmc: f64,
    /// (test axis, standard axis).
    pub fundamental: (usize, usize),
    /// One entry per standard vector.
    pub pairs: Vec<PairSource>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatchResult {
    pub label: Option<char>,
    /// Cost of the best surviving character, infinite when none survived.
    pub cmc: f64,
    pub fundamental: Option<(usize, usize)>,
    pub pairs: Vec<PairSource>,
    /// Surviving characters by ascending cost, ties in label order.
    pub ranked: Vec<CharScore>,
}

impl MatchResult {
    /// No label, no surviving character.
    pub fn unlabeled() -> Self {
        Self::none(Vec::new())
    }

    fn none(ranked: Vec<CharScore>) -> Self {
        Self {
            label: None,
            cmc: f64::INFINITY,
            fundamental: None,
            pairs: Vec::new(),
            ranked,
        }
    }
}

pub fn recognize(
    test: &TestFeatures,
    db: &StandardDb,
    mode: Orientation,
    params: &MatchParams,
) -> Result<MatchResult> {
    if db.is_empty() {
        return Err(Error::EmptyDb);
    }
    if test.vectors.is_empty() {
        return Ok(MatchResult::none(Vec::new()));
    }
    let mut ranked: Vec<CharScore> = db
        .chars()
        .iter()
        .filter_map(|c| score_char(test, c, mode, params))
        .collect();
    ranked.sort_by(|a, b| a.cmc.total_cmp(&b.cmc).then(a.label.cmp(&b.label)));
    let Some(best) = ranked.first() else {
        return Ok(MatchResult::none(ranked));
    };
    Ok(MatchResult {
        label: (best.cmc < params.th_rec).then_some(best.label),
        cmc: best.cmc,
        fundamental: Some(best.fundamental),
        pairs: best.pairs.clone(),
        ranked,
    })
}

/// Stages 1–5 for one standard character; `None` when it is dropped in
/// stage 1.
pub fn score_char(
    test: &TestFeatures,
    standard: &StandardChar,
    mode: Orientation,
    params: &MatchParams,
) -> Option<CharScore> {
    let mut best_cost = u32::MAX;
    let mut fundamentals = Vec::new();
    for (k, tv) in test.vectors.iter().enumerate() {
        for (j, sv) in standard.vectors.iter().enumerate() {
            if mode == Orientation::Known
                && circular_distance(test.axes[k].phi, sv.phi) > TH_A + ANGLE_EPS
            {
                continue;
            }
            let c = match_cost(tv, &sv.values);
            if c < best_cost {
                best_cost = c;
                fundamentals.clear();
            }
            if c == best_cost {
                fundamentals.push((k, j));
            }
        }
    }
    if fundamentals.is_empty() || best_cost as f64 >= params.th_f {
        return None;
    }
    // equal-cost fundamental pairs are all followed through; the one with
    // the lowest final cost is kept
    fundamentals
        .into_iter()
        .map(|f| score_with_fundamental(test, standard, f, best_cost))
        .min_by(|a, b| a.cmc.total_cmp(&b.cmc))
}

fn score_with_fundamental(
    test: &TestFeatures,
    standard: &StandardChar,
    (kt, js): (usize, usize),
    fundamental_cost: u32,
) -> CharScore {
    let nn = standard.nature_count();
    let nv = standard.vector_count();
    let aa_t = |k: usize| test.axes[k].phi;
    let aa = |j: usize| standard.vectors[j].phi;

    let mut pairs = vec![PairSource::Unmatched; nv];
    pairs[js] = PairSource::Test(kt);
    let mut total = fundamental_cost;

    // stages 2-3: remaining standard nature axes; one with no compatible
    // test axis is compared with a vector computed on the mapped angle, as
    // augmented axes are, instead of being skipped at no cost
    for j in (0..nn).filter(|&j| j != js) {
        let best = (0..test.vectors.len())
            .filter(|&k| k != kt && angles_compatible(aa_t(k), aa_t(kt), aa(j), aa(js)))
            .map(|k| (match_cost(&test.vectors[k], &standard.vectors[j].values), k))
            .min();
        match best {
            Some((c, k)) => {
                pairs[j] = PairSource::Test(k);
                total += c;
            }
            None => {
                let ax = wrap_2pi(aa(j) - aa(js) + aa_t(kt));
                pairs[j] = PairSource::Fresh;
                total += match_cost(&test.vector_at(ax), &standard.vectors[j].values);
            }
        }
    }

    // stage 4: augmented axes mapped through the fundamental pair
    for j in (nn..nv).filter(|&j| j != js) {
        let ax = wrap_2pi(aa(j) - aa(js) + aa_t(kt));
        let sv = &standard.vectors[j].values;
        let reuse = (0..test.vectors.len())
            .filter(|&k| circular_distance(aa_t(k), ax) <= TH_A + ANGLE_EPS)
            .map(|k| (match_cost(&test.vectors[k], sv), k))
            .min();
        match reuse {
            Some((c, k)) => {
                pairs[j] = PairSource::Test(k);
                total += c;
            }
            None => {
                pairs[j] = PairSource::Fresh;
                total += match_cost(&test.vector_at(ax), sv);
            }
        }
    }

    CharScore {
        label: standard.label,
        cmc: total as f64 / nv as f64,
        fundamental: (kt, js),
        pairs,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn runs(spec: &[(usize, usize)]) -> AgpvValues {
        let mut v = [0u8; AGPV_LEN];
        for &(a, b) in spec {
            v[a..b].iter_mut().for_each(|x| *x = 255);
        }
        v
    }

    #[test]
    fn edge_count_cases() {
        assert_eq!(edge_count(&[0; 32]), 0);
        let alt: Vec<u8> = (0..32).map(|i| if i % 2 == 1 { 255 } else { 0 }).collect();
        assert_eq!(edge_count(&alt), 16);
        assert_eq!(edge_count(&runs(&[(2, 4), (8, 9), (15, 20), (28, 30)])), 4);
        assert_eq!(edge_count(&[255; 32]), 1);
        assert_eq!(edge_count(&runs(&[(0, 3), (10, 12)])), 2);
    }

    #[test]
    fn cost_of_zero_against_three_runs() {
        let v = runs(&[(2, 4), (10, 12), (20, 22)]);
        // |0 - 3| + |3 - 3| + |0 - 3|
        assert_eq!(match_cost(&[0; 32], &v), 6);
        assert_eq!(match_cost(&v, &v), 0);
    }

    #[test]
    fn cost_is_asymmetric() {
        // interleaved runs: the union is one run, the intersection is empty
        let u = runs(&[(0, 2), (4, 6), (8, 10)]);
        let v = runs(&[(2, 4), (6, 8)]);
        assert_eq!(match_cost(&u, &v), 1 + 1 + 2);
        assert_eq!(match_cost(&v, &u), 1 + 2 + 3);
    }

    #[test]
    fn angle_compatibility() {
        use std::f64::consts::PI;
        assert!(angles_compatible(1.0, 0.5, 2.0, 1.5));
        assert!(angles_compatible(0.0, 0.0, PI / 32.0, 0.0));
        assert!(!angles_compatible(0.0, 0.0, PI / 16.0, 0.0));
        // wrap-around: 350° - 10° vs -20°
        assert!(angles_compatible(
            350f64.to_radians(),
            10f64.to_radians(),
            0.0,
            20f64.to_radians()
        ));
        assert!(angles_compatible(3.1, 0.0, -3.1, 0.0));
    }

    fn sv(kind: AxisKind, phi: f64, v: AgpvValues) -> StandardVector {
        StandardVector {
            kind,
            phi,
            values: v,
        }
    }

    fn sample_db() -> StandardDb {
        let a = StandardChar {
            label: 'A',
            vectors: vec![
                sv(AxisKind::Nature, 1.178097, runs(&[(3, 5), (20, 22)])),
                sv(AxisKind::Augmented, 0.0, runs(&[(0, 32)])),
                sv(AxisKind::Augmented, 4.712389, [0; 32]),
            ],
        };
        let seven = StandardChar {
            label: '7',
            vectors: vec![sv(AxisKind::Nature, 6.184658, runs(&[(31, 32)]))],
        };
        StandardDb::from_chars(vec![a, seven]).unwrap()
    }

    #[test]
    fn db_text_format() {
        let db = sample_db();
        let text = db.to_text();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("AGPVDB 1 2"));
        assert_eq!(lines.next(), Some("CHAR 7 1 0"));
        let axis = lines.next().unwrap();
        assert!(axis.starts_with("AXIS N 6.184658 0 0"));
        assert!(axis.ends_with(" 0 255"));
        assert_eq!(lines.next(), Some("CHAR A 1 2"));
        assert_eq!(StandardDb::parse(&text).unwrap(), db);
    }

    #[test]
    fn db_parse_rejects_bad_input() {
        let text = sample_db().to_text();
        assert!(matches!(
            StandardDb::parse(&text.replacen("AGPVDB 1", "AGPVDB 2", 1)),
            Err(Error::DbFormat(DbFormatError::UnsupportedVersion(2)))
        ));
        assert!(matches!(
            StandardDb::parse("NOPE 1 0\n"),
            Err(Error::DbFormat(DbFormatError::BadHeader))
        ));
        assert!(StandardDb::parse(&text.replacen("CHAR A 1 2", "CHAR A 1 3", 1)).is_err());
        assert!(
            StandardDb::parse(&text.replacen("AXIS N 1.178097", "AXIS A 1.178097", 1)).is_err()
        );
        assert!(StandardDb::parse(&text.replacen(" 255", " 7", 1)).is_err());
        assert!(StandardDb::parse(&text.replacen("CHAR 7", "CHAR a", 1)).is_err());
        assert!(matches!(
            StandardDb::parse(&text.replacen("CHAR A", "CHAR 7", 1)),
            Err(Error::DuplicateLabel('7'))
        ));
        assert!(StandardDb::parse(&format!("{text}CHAR B 0 0\n")).is_err());
    }

    #[test]
    fn labels_are_sorted() {
        assert!(LABELS.windows(2).all(|w| w[0] < w[1]));
        assert!(LABELS.iter().all(|&c| is_standard_label(c)));
        assert!(!is_standard_label('a'));
    }
}
