//! Synthetic plate scenes and the four-set evaluation protocol.
//!
//! Set A holds clean composites of 4–6 glyphs on a plate; B adds 4%
//! salt-and-pepper noise, C applies vertical shears and D directional
//! illumination. Extraction counts a truth box as found when some candidate
//! overlaps it with IoU ≥ 0.5; recognition is scored on found characters
//! and false positives are labeled candidates that overlap no character.

use std::fmt::{self, Write as _};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::Params;
use crate::error::{Error, Result};
use crate::extraction::{extract_candidates, BBox, CharCandidate};
use crate::image::{
    add_salt_pepper, affine_transform, directional_illumination, quantize, AffineCanvas, GrayImage,
    LightSource,
};
use crate::matching::{recognize, MatchResult, Orientation, StandardDb, TestFeatures, LABELS};

pub const SCENE_WIDTH: usize = 1024;
pub const SCENE_HEIGHT: usize = 768;
pub const SCENE_COUNT: usize = 60;
pub const NOISE_RATE: f64 = 0.04;
pub const HIT_IOU: f64 = 0.5;

/// Vertical shears, applied round-robin to derive set C.
pub const SHEARS: [[[f64; 2]; 2]; 4] = [
    [[1.0, 0.0], [-1.0 / 6.0, 1.0]],
    [[1.0, 0.0], [-0.25, 1.0]],
    [[1.0, 0.0], [1.0 / 6.0, 1.0]],
    [[1.0, 0.0], [0.25, 1.0]],
];

/// Ink height of a composited glyph in scene pixels, chosen so characters
/// resolve at the second octave even after the strongest shear.
const GLYPH_HEIGHT: (f64, f64) = (86.0, 96.0);
const GLYPH_GAP: (usize, usize) = (30, 46);
const PLATE_PAD: usize = 40;
const FRAME_INSET: usize = 14;
const FRAME_WIDTH: usize = 6;
const INK_LEVEL: f64 = 35.0;
const PLATE_LEVEL: f64 = 205.0;
const SHEAR_FILL: u8 = 128;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SetId {
    A,
    B,
    C,
    D,
}

impl SetId {
    pub const ALL: [SetId; 4] = [SetId::A, SetId::B, SetId::C, SetId::D];
}

impl fmt::Display for SetId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SetId::A => "A",
            SetId::B => "B",
            SetId::C => "C",
            SetId::D => "D",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TruthBox {
    pub label: char,
    pub bbox: BBox,
}

#[derive(Debug, Clone)]
pub struct BenchScene {
    pub image: GrayImage,
    pub truth: Vec<TruthBox>,
    pub set_id: SetId,
    /// Degradation applied on top of the clean composite.
    pub provenance: String,
}

/// Ink levels and ink box of one corpus glyph image.
struct GlyphSource<'a> {
    label: char,
    image: &'a GrayImage,
    ground: f64,
    ink: f64,
    ink_box: BBox,
}

impl<'a> GlyphSource<'a> {
    fn new(label: char, image: &'a GrayImage) -> Result<Self> {
        if image.width() < 32 || image.height() < 32 {
            return Err(Error::TooSmall {
                width: image.width(),
                height: image.height(),
                reason: "corpus glyphs must be at least 32x32",
            });
        }
        let ground = *image.data().iter().max().expect("non-empty") as f64;
        let ink = *image.data().iter().min().expect("non-empty") as f64;
        if ground - ink < 1.0 {
            return Err(Error::NoCandidate(label));
        }
        let ink_box = dark_box(image, (ground + ink) / 2.0).ok_or(Error::NoCandidate(label))?;
        Ok(Self {
            label,
            image,
            ground,
            ink,
            ink_box,
        })
    }

    /// Ink coverage in `[0, 1]` of a value from this glyph's raster.
    fn alpha(&self, v: u8) -> f64 {
        ((self.ground - v as f64) / (self.ground - self.ink)).clamp(0.0, 1.0)
    }
}

/// Box of pixels darker than `level`.
fn dark_box(img: &GrayImage, level: f64) -> Option<BBox> {
    let (mut x0, mut y0, mut x1, mut y1) = (usize::MAX, usize::MAX, 0, 0);
    for y in 0..img.height() {
        for x in 0..img.width() {
            if (img.get(x, y) as f64) < level {
                x0 = x0.min(x);
                y0 = y0.min(y);
                x1 = x1.max(x);
                y1 = y1.max(y);
            }
        }
    }
    (x0 != usize::MAX).then(|| BBox {
        x: x0,
        y: y0,
        width: x1 - x0 + 1,
        height: y1 - y0 + 1,
    })
}

fn blend(v: u8, target: f64, alpha: f64) -> u8 {
    quantize(v as f64 * (1.0 - alpha) + target * alpha)
}

/// Clean set-A scenes. Every label of the corpus must be one of the 36
/// standard characters and all 36 must be present.
pub fn make_scenes(
    corpus: &[(char, GrayImage)],
    seed: u64,
    count: usize,
) -> Result<Vec<BenchScene>> {
    let mut sources = Vec::with_capacity(LABELS.len());
    for &label in &LABELS {
        let (_, img) = corpus
            .iter()
            .find(|(l, _)| *l == label)
            .ok_or(Error::MissingLabel(label))?;
        sources.push(GlyphSource::new(label, img)?);
    }
    if let Some((l, _)) = corpus.iter().find(|(l, _)| !LABELS.contains(l)) {
        return Err(Error::UnknownLabel(*l));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| compose_scene(&sources, &mut rng))
        .collect()
}

fn compose_scene(sources: &[GlyphSource], rng: &mut ChaCha8Rng) -> Result<BenchScene> {
    let (w, h) = (SCENE_WIDTH, SCENE_HEIGHT);
    let tilt: f64 = rng.gen_range(-25.0..25.0);
    let base: f64 = rng.gen_range(95.0..135.0);
    let mut image = GrayImage::from_fn(w, h, |x, y| {
        quantize(base + tilt * (x as f64 / w as f64 - 0.5) + 12.0 * (y as f64 / h as f64))
    })?;

    let n = rng.gen_range(4..=6);
    let chosen: Vec<&GlyphSource> = (0..n)
        .map(|_| &sources[rng.gen_range(0..sources.len())])
        .collect();
    let target_h: f64 = rng.gen_range(GLYPH_HEIGHT.0..GLYPH_HEIGHT.1);
    let gap = rng.gen_range(GLYPH_GAP.0..=GLYPH_GAP.1);

    // scale each glyph so its ink box reaches the common height
    let scaled: Vec<(GrayImage, f64)> = chosen
        .iter()
        .map(|g| {
            let s = target_h / g.ink_box.height as f64;
            affine_transform(g.image, [[s, 0.0], [0.0, s]], g.ground as u8).map(|img| (img, s))
        })
        .collect::<Result<_>>()?;
    let boxes: Vec<BBox> = chosen
        .iter()
        .zip(&scaled)
        .map(|(g, (img, _))| {
            dark_box(img, (g.ground + g.ink) / 2.0).expect("scaled glyph keeps ink")
        })
        .collect();

    let row_w: usize = boxes.iter().map(|b| b.width).sum::<usize>() + gap * (n - 1);
    let row_h = boxes.iter().map(|b| b.height).max().unwrap_or(0);
    let plate_w = row_w + 2 * PLATE_PAD;
    let plate_h = row_h + 2 * PLATE_PAD;
    let margin = 24;
    let px = rng.gen_range(margin..=w - plate_w - margin);
    let py = rng.gen_range(margin..=h - plate_h - margin);

    // plate with a mild gradient and a dark frame
    let shade: f64 = rng.gen_range(-12.0..12.0);
    for y in py..py + plate_h {
        for x in px..px + plate_w {
            let t = (x - px) as f64 / plate_w as f64;
            image.set(x, y, quantize(PLATE_LEVEL + shade * t));
        }
    }
    draw_frame(
        &mut image,
        px + FRAME_INSET,
        py + FRAME_INSET,
        plate_w - 2 * FRAME_INSET,
        plate_h - 2 * FRAME_INSET,
    );

    // background clutter outside the plate
    add_clutter(&mut image, (px, py, plate_w, plate_h), rng);

    let mut truth = Vec::with_capacity(n);
    let mut cx = px + PLATE_PAD;
    for ((g, (img, _)), b) in chosen.iter().zip(&scaled).zip(&boxes) {
        let ox = cx as isize - b.x as isize;
        let oy = (py + PLATE_PAD + (row_h - b.height) / 2) as isize - b.y as isize;
        for y in 0..img.height() {
            for x in 0..img.width() {
                let a = g.alpha(img.get(x, y));
                let (sx, sy) = (x as isize + ox, y as isize + oy);
                if a > 0.0 && sx >= 0 && sy >= 0 && (sx as usize) < w && (sy as usize) < h {
                    let (sx, sy) = (sx as usize, sy as usize);
                    image.set(sx, sy, blend(image.get(sx, sy), INK_LEVEL, a));
                }
            }
        }
        truth.push(TruthBox {
            label: g.label,
            bbox: BBox {
                x: (b.x as isize + ox) as usize,
                y: (b.y as isize + oy) as usize,
                width: b.width,
                height: b.height,
            },
        });
        cx += b.width + gap;
    }

    Ok(BenchScene {
        image,
        truth,
        set_id: SetId::A,
        provenance: "clean".into(),
    })
}

fn draw_frame(img: &mut GrayImage, x: usize, y: usize, w: usize, h: usize) {
    for yy in y..y + h {
        for xx in x..x + w {
            let inside = xx >= x + FRAME_WIDTH
                && xx < x + w - FRAME_WIDTH
                && yy >= y + FRAME_WIDTH
                && yy < y + h - FRAME_WIDTH;
            if !inside {
                img.set(xx, yy, quantize(INK_LEVEL + 20.0));
            }
        }
    }
}

/// A few disks and bars of character-like size, kept clear of the plate.
fn add_clutter(img: &mut GrayImage, plate: (usize, usize, usize, usize), rng: &mut ChaCha8Rng) {
    let (px, py, pw, ph) = plate;
    let keep_out = 20;
    let count = rng.gen_range(2..=5);
    let mut placed = 0;
    for _ in 0..200 {
        if placed == count {
            break;
        }
        let size = rng.gen_range(36..=110);
        let x = rng.gen_range(0..img.width() - size);
        let y = rng.gen_range(0..img.height() - size);
        let clear = x + size + keep_out < px
            || x > px + pw + keep_out
            || y + size + keep_out < py
            || y > py + ph + keep_out;
        if !clear {
            continue;
        }
        let level = if rng.gen_bool(0.5) { 40.0 } else { 215.0 };
        let disk = rng.gen_bool(0.5);
        let r = size as f64 / 2.0;
        let bar = rng.gen_range(8..=size / 2);
        for yy in 0..size {
            for xx in 0..size {
                let on = if disk {
                    let (dx, dy) = (xx as f64 + 0.5 - r, yy as f64 + 0.5 - r);
                    dx * dx + dy * dy <= r * r
                } else {
                    yy < bar
                };
                if on {
                    img.set(x + xx, y + yy, quantize(level));
                }
            }
        }
        placed += 1;
    }
}

fn scene_seed(seed: u64, index: usize) -> u64 {
    seed ^ (index as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// Sets B, C and D from set A.
pub fn derive_sets(a: &[BenchScene], seed: u64) -> Result<[Vec<BenchScene>; 3]> {
    let mut b = Vec::with_capacity(a.len());
    let mut c = Vec::with_capacity(a.len());
    let mut d = Vec::with_capacity(a.len());
    for (i, scene) in a.iter().enumerate() {
        b.push(BenchScene {
            image: add_salt_pepper(&scene.image, NOISE_RATE, scene_seed(seed, i))?,
            truth: scene.truth.clone(),
            set_id: SetId::B,
            provenance: format!("salt-pepper {NOISE_RATE}"),
        });

        let m = SHEARS[i % SHEARS.len()];
        let canvas = AffineCanvas::new(scene.image.width(), scene.image.height(), m);
        c.push(BenchScene {
            image: affine_transform(&scene.image, m, SHEAR_FILL)?,
            truth: scene
                .truth
                .iter()
                .map(|t| TruthBox {
                    label: t.label,
                    bbox: map_box(&canvas, m, &t.bbox),
                })
                .collect(),
            set_id: SetId::C,
            provenance: format!("shear [[1,0],[{:.4},1]]", m[1][0]),
        });

        let light = LightSource::ALL[i % LightSource::ALL.len()];
        d.push(BenchScene {
            image: directional_illumination(&scene.image, light),
            truth: scene.truth.clone(),
            set_id: SetId::D,
            provenance: format!("illumination {light}"),
        });
    }
    Ok([b, c, d])
}

/// Enclosing pixel box of a transformed box.
fn map_box(canvas: &AffineCanvas, m: [[f64; 2]; 2], b: &BBox) -> BBox {
    let (x0, y0) = (b.x as f64, b.y as f64);
    let (x1, y1) = ((b.x + b.width) as f64, (b.y + b.height) as f64);
    let pts = [(x0, y0), (x1, y0), (x0, y1), (x1, y1)].map(|p| canvas.map(m, p));
    let min_x = pts
        .iter()
        .map(|p| p.0)
        .fold(f64::INFINITY, f64::min)
        .floor()
        .max(0.0);
    let min_y = pts
        .iter()
        .map(|p| p.1)
        .fold(f64::INFINITY, f64::min)
        .floor()
        .max(0.0);
    let max_x = pts
        .iter()
        .map(|p| p.0)
        .fold(f64::NEG_INFINITY, f64::max)
        .ceil()
        .min(canvas.width as f64);
    let max_y = pts
        .iter()
        .map(|p| p.1)
        .fold(f64::NEG_INFINITY, f64::max)
        .ceil()
        .min(canvas.height as f64);
    BBox {
        x: min_x as usize,
        y: min_y as usize,
        width: (max_x - min_x) as usize,
        height: (max_y - min_y) as usize,
    }
}

/// Recognition counts for one orientation mode.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ModeCounts {
    /// Found characters whose best labeled candidate carries the right label.
    pub correct: usize,
    /// Non-character candidates that received a label.
    pub false_positives: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchRow {
    pub set: SetId,
    pub scenes: usize,
    pub truths: usize,
    pub extracted: usize,
    pub candidates: usize,
    /// Unknown orientation.
    pub rec1: ModeCounts,
    /// Known orientation.
    pub rec2: ModeCounts,
}

fn pct(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        100.0 * num as f64 / den as f64
    }
}

impl BenchRow {
    pub fn empty(set: SetId) -> Self {
        Self {
            set,
            scenes: 0,
            truths: 0,
            extracted: 0,
            candidates: 0,
            rec1: ModeCounts::default(),
            rec2: ModeCounts::default(),
        }
    }

    pub fn extraction_tpr(&self) -> f64 {
        pct(self.extracted, self.truths)
    }

    pub fn rec_tpr(&self, mode: Orientation) -> f64 {
        pct(self.mode(mode).correct, self.extracted)
    }

    pub fn rec_fpr(&self, mode: Orientation) -> f64 {
        pct(self.mode(mode).false_positives, self.candidates)
    }

    pub fn mode(&self, mode: Orientation) -> &ModeCounts {
        match mode {
            Orientation::Unknown => &self.rec1,
            Orientation::Known => &self.rec2,
        }
    }

    fn mode_mut(&mut self, mode: Orientation) -> &mut ModeCounts {
        match mode {
            Orientation::Unknown => &mut self.rec1,
            Orientation::Known => &mut self.rec2,
        }
    }

    /// Some rate was computed over an empty denominator and reads as zero.
    pub fn has_zero_denominator(&self) -> bool {
        self.truths == 0 || self.extracted == 0 || self.candidates == 0
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
}

impl BenchReport {
    pub fn row(&self, set: SetId) -> Option<&BenchRow> {
        self.rows.iter().find(|r| r.set == set)
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("set,extraction_tpr,rec1_tpr,rec1_fpr,rec2_tpr,rec2_fpr\n");
        for r in &self.rows {
            let _ = writeln!(
                s,
                "{},{:.2},{:.2},{:.2},{:.2},{:.2}",
                r.set,
                r.extraction_tpr(),
                r.rec_tpr(Orientation::Unknown),
                r.rec_fpr(Orientation::Unknown),
                r.rec_tpr(Orientation::Known),
                r.rec_fpr(Orientation::Known),
            );
        }
        s
    }

    pub fn to_table(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "{:<4} {:>10} | {:>9} {:>9} | {:>9} {:>9} | {:>6} {:>6} {:>6}",
            "set",
            "extract",
            "rec1 TPR",
            "rec1 FPR",
            "rec2 TPR",
            "rec2 FPR",
            "chars",
            "found",
            "cands"
        );
        for r in &self.rows {
            let _ = writeln!(
                s,
                "{:<4} {:>10.2} | {:>9.2} {:>9.2} | {:>9.2} {:>9.2} | {:>6} {:>6} {:>6}{}",
                r.set.to_string(),
                r.extraction_tpr(),
                r.rec_tpr(Orientation::Unknown),
                r.rec_fpr(Orientation::Unknown),
                r.rec_tpr(Orientation::Known),
                r.rec_fpr(Orientation::Known),
                r.truths,
                r.extracted,
                r.candidates,
                if r.has_zero_denominator() {
                    "  (empty denominator)"
                } else {
                    ""
                },
            );
        }
        s
    }
}

impl fmt::Display for BenchReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_table())
    }
}

/// Candidates of one image, each with its result in both orientation modes.
pub fn recognize_scene(
    image: &GrayImage,
    db: &StandardDb,
    params: &Params,
) -> Result<Vec<(CharCandidate, [MatchResult; 2])>> {
    let candidates = extract_candidates(image, &params.extract())?;
    let mp = params.matching();
    candidates
        .into_iter()
        .map(|c| {
            let results = match TestFeatures::from_candidate(&c, params.th_bin_div) {
                Ok(t) => [
                    recognize(&t, db, Orientation::Unknown, &mp)?,
                    recognize(&t, db, Orientation::Known, &mp)?,
                ],
                Err(Error::NoGradient | Error::EmptyPixelSet) => {
                    [MatchResult::unlabeled(), MatchResult::unlabeled()]
                }
                Err(e) => return Err(e),
            };
            Ok((c, results))
        })
        .collect()
}

/// Score one set of scenes.
pub fn evaluate(
    set: SetId,
    scenes: &[BenchScene],
    db: &StandardDb,
    params: &Params,
) -> Result<BenchRow> {
    let mut row = BenchRow::empty(set);
    for scene in scenes {
        let recs = recognize_scene(&scene.image, db, params)?;
        row.scenes += 1;
        row.truths += scene.truth.len();
        row.candidates += recs.len();

        for (mi, mode) in [Orientation::Unknown, Orientation::Known]
            .into_iter()
            .enumerate()
        {
            let counts = row.mode_mut(mode);
            for (c, r) in &recs {
                let is_char = scene
                    .truth
                    .iter()
                    .any(|t| c.source_bbox.iou(&t.bbox) >= HIT_IOU);
                if !is_char && r[mi].label.is_some() {
                    counts.false_positives += 1;
                }
            }
            for t in &scene.truth {
                let best = recs
                    .iter()
                    .filter(|(c, _)| c.source_bbox.iou(&t.bbox) >= HIT_IOU)
                    .filter_map(|(_, r)| r[mi].label.map(|l| (r[mi].cmc, l)))
                    .min_by(|a, b| a.0.total_cmp(&b.0));
                if best.is_some_and(|(_, l)| l == t.label) {
                    counts.correct += 1;
                }
            }
        }
        row.extracted += scene
            .truth
            .iter()
            .filter(|t| {
                recs.iter()
                    .any(|(c, _)| c.source_bbox.iou(&t.bbox) >= HIT_IOU)
            })
            .count();
    }
    Ok(row)
}

/// Build set A from the corpus, derive B–D and score all four.
pub fn run_bench(
    corpus: &[(char, GrayImage)],
    db: &StandardDb,
    params: &Params,
    seed: u64,
    scenes: usize,
) -> Result<BenchReport> {
    let a = make_scenes(corpus, seed, scenes)?;
    let [b, c, d] = derive_sets(&a, seed)?;
    let sets = [
        (SetId::A, &a),
        (SetId::B, &b),
        (SetId::C, &c),
        (SetId::D, &d),
    ];
    let rows = sets
        .into_iter()
        .map(|(id, s)| evaluate(id, s, db, params))
        .collect::<Result<_>>()?;
    Ok(BenchReport { rows })
}
