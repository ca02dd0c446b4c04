use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write as _};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use agpv_core::agpv::agpv_from_field;
use agpv_core::axes::{
    build_histogram, compute_gradients, find_peaks, select_nature_axes, AxisMode, HIST_BINS,
    HIST_RES,
};
use agpv_core::bench::{run_bench, SCENE_COUNT};
use agpv_core::config::parse_kv;
use agpv_core::glyphs::{db_from_images, render_corpus, GlyphStyle};
use agpv_core::image::affine_transform;
use agpv_core::matching::LABELS;
use agpv_core::scalespace::build_pyramid;
use agpv_core::{
    extract_candidates, load_pgm, recognize, save_pgm, CharCandidate, Error, GrayImage,
    Orientation, Params, StandardDb, TestFeatures,
};
use clap::{Args, Parser, Subcommand};
use serde_json::json;

const DEFAULT_SEED: u64 = 7;

#[derive(Parser)]
#[command(
    name = "agpv",
    version,
    about = "DOG character extraction and AGPV recognition"
)]
struct Cli {
    #[command(flatten)]
    opts: Opts,
    #[command(subcommand)]
    cmd: Cmd,
}

/// Threshold overrides. Each one beats the `AGPV_CONFIG` file.
#[derive(Args)]
struct Opts {
    #[arg(long, global = true)]
    t_dog: Option<f64>,
    #[arg(long, global = true)]
    th_f: Option<f64>,
    #[arg(long, global = true)]
    th_rec: Option<f64>,
    #[arg(long, global = true)]
    th_bin_div: Option<f64>,
    #[arg(long, global = true)]
    octaves: Option<usize>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Write every octave's initial, smoothed and DOG image here.
    #[arg(long, global = true)]
    dump_dir: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Render the 36 built-in glyphs as `<label>.pgm`.
    Corpus {
        out_dir: PathBuf,
        /// Clockwise rotation in degrees.
        #[arg(long, default_value_t = 0.0)]
        rotate: f64,
        /// Uniform scale applied after rendering.
        #[arg(long, default_value_t = 1.0)]
        scale: f64,
    },
    /// Build the standard database from a directory of `<label>.pgm` files.
    BuildDb { corpus_dir: PathBuf, out: PathBuf },
    /// Write every character candidate as a PGM patch plus a JSON sidecar.
    Extract {
        image: PathBuf,
        out_dir: PathBuf,
        /// Orientation histogram and peaks per candidate, as CSV.
        #[arg(long)]
        dump_hist: bool,
        /// Test-mode AGPVs per candidate, as CSV.
        #[arg(long)]
        dump_agpv: bool,
    },
    /// Print `<label|?> <cmc> <x,y,w,h>` for every candidate.
    Recognize {
        image: PathBuf,
        #[arg(long)]
        db: PathBuf,
        #[arg(long)]
        known_orientation: bool,
    },
    /// Run the four-set degradation benchmark.
    Bench {
        /// Glyph images; the built-in corpus when absent.
        #[arg(long)]
        corpus_dir: Option<PathBuf>,
        /// Standard database; built from the corpus when absent.
        #[arg(long)]
        db: Option<PathBuf>,
        #[arg(long, default_value_t = SCENE_COUNT)]
        scenes: usize,
        /// Also write the CSV report here.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Domain(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Domain(_) => 1,
            CliError::Io { .. } => 2,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Io(source) => CliError::Io {
                path: PathBuf::new(),
                source,
            },
            e => CliError::Domain(e.to_string()),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn read(path: &Path) -> CliResult<Vec<u8>> {
    fs::read(path).map_err(io_err(path))
}

fn write(path: &Path, bytes: impl AsRef<[u8]>) -> CliResult<()> {
    fs::write(path, bytes).map_err(io_err(path))
}

fn create_dir(path: &Path) -> CliResult<()> {
    fs::create_dir_all(path).map_err(io_err(path))
}

/// Write to stdout; a reader that hung up early is not an error.
fn emit(text: &str) -> CliResult<()> {
    match io::stdout().write_all(text.as_bytes()) {
        Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(io_err(Path::new("<stdout>"))(e)),
        _ => Ok(()),
    }
}

fn read_image(path: &Path) -> CliResult<GrayImage> {
    Ok(load_pgm(&read(path)?)?)
}

fn read_db(path: &Path) -> CliResult<StandardDb> {
    let text = String::from_utf8(read(path)?)
        .map_err(|_| CliError::Domain(format!("{}: database is not UTF-8 text", path.display())))?;
    StandardDb::parse(&text).map_err(|e| CliError::Domain(format!("{}: {e}", path.display())))
}

/// Defaults, then the `AGPV_CONFIG` file, then flags.
fn resolve(opts: &Opts) -> CliResult<(Params, u64)> {
    let mut params = Params::default();
    let mut seed = DEFAULT_SEED;
    if let Some(path) = std::env::var_os("AGPV_CONFIG") {
        let path = PathBuf::from(path);
        let text = String::from_utf8(read(&path)?)
            .map_err(|_| CliError::Domain(format!("{}: config is not UTF-8", path.display())))?;
        for (k, v) in parse_kv(&text)? {
            if params.set(&k, &v)? {
                continue;
            }
            match k.as_str() {
                "seed" => {
                    seed = v
                        .parse()
                        .map_err(|_| CliError::Domain(format!("seed: not an integer: {v:?}")))?
                }
                _ => {
                    return Err(CliError::Domain(format!(
                        "{}: unknown key {k:?}",
                        path.display()
                    )))
                }
            }
        }
    }
    if let Some(v) = opts.t_dog {
        params.t_dog = v;
    }
    if let Some(v) = opts.th_f {
        params.th_f = v;
    }
    if let Some(v) = opts.th_rec {
        params.th_rec = v;
    }
    if let Some(v) = opts.th_bin_div {
        params.th_bin_div = v;
    }
    if let Some(v) = opts.octaves {
        params.octaves = v;
    }
    if let Some(v) = opts.seed {
        seed = v;
    }
    params.validate()?;
    Ok((params, seed))
}

fn dump_pyramid(img: &GrayImage, params: &Params, dir: &Path) -> CliResult<()> {
    create_dir(dir)?;
    let octaves = params
        .octaves
        .min(agpv_core::scalespace::resolvable_octaves(
            img.width(),
            img.height(),
        ));
    if octaves == 0 {
        return Ok(());
    }
    for o in build_pyramid(img, octaves)? {
        let k = o.index;
        write(
            &dir.join(format!("octave{k}_initial.pgm")),
            save_pgm(&o.initial),
        )?;
        write(
            &dir.join(format!("octave{k}_smoothed.pgm")),
            save_pgm(&o.smoothed),
        )?;
        write(
            &dir.join(format!("octave{k}_dog.pgm")),
            save_pgm(&o.dog.to_offset_gray()),
        )?;
    }
    Ok(())
}

fn load_corpus(dir: &Path) -> CliResult<Vec<(char, GrayImage)>> {
    let mut out = Vec::with_capacity(LABELS.len());
    for label in LABELS {
        let path = dir.join(format!("{label}.pgm"));
        if !path.exists() {
            return Err(Error::MissingLabel(label).into());
        }
        let img = read_image(&path).map_err(|e| match e {
            CliError::Domain(m) => CliError::Domain(format!("{}: {m}", path.display())),
            e => e,
        })?;
        out.push((label, img));
    }
    Ok(out)
}

fn cmd_corpus(out_dir: &Path, rotate: f64, scale: f64) -> CliResult<()> {
    if !(scale.is_finite() && scale > 0.0) {
        return Err(CliError::Domain(format!(
            "scale must be positive, got {scale}"
        )));
    }
    let style = GlyphStyle::default();
    create_dir(out_dir)?;
    for (label, img) in render_corpus(&style, rotate.to_radians())? {
        let img = if scale == 1.0 {
            img
        } else {
            affine_transform(&img, [[scale, 0.0], [0.0, scale]], style.background)?
        };
        write(&out_dir.join(format!("{label}.pgm")), save_pgm(&img))?;
    }
    emit(&format!("wrote {} glyphs\n", LABELS.len()))
}

fn cmd_build_db(params: &Params, corpus_dir: &Path, out: &Path) -> CliResult<()> {
    let corpus = load_corpus(corpus_dir)?;
    let db = db_from_images(&corpus, params)?;
    write(out, db.to_text())?;
    let mut text = String::new();
    for c in db.chars() {
        let _ = writeln!(
            text,
            "{} NN={} NA={}",
            c.label,
            c.nature_count(),
            c.augmented_count()
        );
        if !(4..=6).contains(&c.vector_count()) {
            eprintln!(
                "warning: {} has {} vectors, outside 4-6",
                c.label,
                c.vector_count()
            );
        }
    }
    emit(&text)
}

fn hist_csv(c: &CharCandidate) -> CliResult<String> {
    let field = compute_gradients(&c.patch, &c.mask)?;
    let hist = build_histogram(&field);
    let peaks = find_peaks(&hist);
    let selected = select_nature_axes(&peaks, hist.ge, AxisMode::Test);
    let mut s = String::from("record,bin,angle,value,start,end,outstanding,nature\n");
    for b in 0..HIST_BINS {
        let _ = writeln!(
            s,
            "bin,{b},{:.6},{:.6},,,,",
            b as f64 * HIST_RES,
            hist.bins[b]
        );
    }
    for p in &peaks {
        let nature = selected
            .iter()
            .any(|a| a.peak.is_some_and(|q| q.center == p.center));
        let _ = writeln!(
            s,
            "peak,{},{:.6},{:.6},{},{},{:.6},{}",
            p.center,
            p.center_angle(),
            hist.bins[p.center],
            p.start,
            p.end,
            p.outstanding,
            nature as u8
        );
    }
    Ok(s)
}

fn agpv_csv(c: &CharCandidate, params: &Params) -> CliResult<String> {
    let mut s = String::from("kind,phi,x_s,x_e");
    for i in 0..32 {
        let _ = write!(s, ",v{i}");
    }
    s.push('\n');
    let t = match TestFeatures::from_candidate(c, params.th_bin_div) {
        Ok(t) => t,
        Err(Error::NoGradient | Error::EmptyPixelSet) => return Ok(s),
        Err(e) => return Err(e.into()),
    };
    for axis in &t.axes {
        let v = agpv_from_field(&t.field, t.cog, axis, params.th_bin_div)?;
        let _ = write!(
            s,
            "{},{:.6},{},{}",
            axis.kind.code(),
            axis.phi,
            v.effective.0,
            v.effective.1
        );
        for x in v.values {
            let _ = write!(s, ",{x}");
        }
        s.push('\n');
    }
    Ok(s)
}

fn cmd_extract(
    params: &Params,
    image: &Path,
    out_dir: &Path,
    dump_hist: bool,
    dump_agpv: bool,
) -> CliResult<()> {
    let img = read_image(image)?;
    let candidates = extract_candidates(&img, &params.extract())?;
    create_dir(out_dir)?;
    for (i, c) in candidates.iter().enumerate() {
        let stem = format!("cand_{i:03}");
        write(&out_dir.join(format!("{stem}.pgm")), save_pgm(&c.patch))?;
        let bbox =
            |b: agpv_core::BBox| json!({"x": b.x, "y": b.y, "width": b.width, "height": b.height});
        let sidecar = json!({
            "octave": c.octave,
            "polarity": c.polarity.as_str(),
            "bbox": bbox(c.bbox),
            "source_bbox": bbox(c.source_bbox),
            "patch_origin": [c.patch_origin.0, c.patch_origin.1],
            "pixels": c.pixels.len(),
        });
        let mut text = serde_json::to_string_pretty(&sidecar).expect("plain JSON values");
        text.push('\n');
        write(&out_dir.join(format!("{stem}.json")), text)?;
        if dump_hist {
            write(&out_dir.join(format!("{stem}_hist.csv")), hist_csv(c)?)?;
        }
        if dump_agpv {
            write(
                &out_dir.join(format!("{stem}_agpv.csv")),
                agpv_csv(c, params)?,
            )?;
        }
    }
    emit(&format!("{} candidates\n", candidates.len()))
}

fn cmd_recognize(params: &Params, image: &Path, db: &Path, known: bool) -> CliResult<()> {
    let db = read_db(db)?;
    let img = read_image(image)?;
    let mode = if known {
        Orientation::Known
    } else {
        Orientation::Unknown
    };
    let mp = params.matching();
    let mut out = String::new();
    for c in extract_candidates(&img, &params.extract())? {
        let (label, cmc) = match TestFeatures::from_candidate(&c, params.th_bin_div) {
            Ok(t) => {
                let r = recognize(&t, &db, mode, &mp)?;
                (r.label, r.cmc)
            }
            Err(Error::NoGradient | Error::EmptyPixelSet) => (None, f64::INFINITY),
            Err(e) => return Err(e.into()),
        };
        let _ = writeln!(out, "{} {cmc:.3} {}", label.unwrap_or('?'), c.source_bbox);
    }
    emit(&out)
}

fn cmd_bench(
    params: &Params,
    seed: u64,
    corpus_dir: Option<&Path>,
    db: Option<&Path>,
    scenes: usize,
    csv: Option<&Path>,
) -> CliResult<()> {
    let corpus = match corpus_dir {
        Some(dir) => load_corpus(dir)?,
        None => render_corpus(&GlyphStyle::default(), 0.0)?,
    };
    let db = match db {
        Some(path) => read_db(path)?,
        None => db_from_images(&corpus, params)?,
    };
    let report = run_bench(&corpus, &db, params, seed, scenes)?;
    let csv_text = report.to_csv();
    if let Some(path) = csv {
        write(path, &csv_text)?;
    }
    emit(&format!("{}\n{csv_text}", report.to_table()))
}

fn run(cli: Cli) -> CliResult<()> {
    let (params, seed) = resolve(&cli.opts)?;
    let dump = cli.opts.dump_dir.as_deref();
    match &cli.cmd {
        Cmd::Corpus {
            out_dir,
            rotate,
            scale,
        } => cmd_corpus(out_dir, *rotate, *scale),
        Cmd::BuildDb { corpus_dir, out } => cmd_build_db(&params, corpus_dir, out),
        Cmd::Extract {
            image,
            out_dir,
            dump_hist,
            dump_agpv,
        } => {
            if let Some(dir) = dump {
                dump_pyramid(&read_image(image)?, &params, dir)?;
            }
            cmd_extract(&params, image, out_dir, *dump_hist, *dump_agpv)
        }
        Cmd::Recognize {
            image,
            db,
            known_orientation,
        } => {
            if let Some(dir) = dump {
                dump_pyramid(&read_image(image)?, &params, dir)?;
            }
            cmd_recognize(&params, image, db, *known_orientation)
        }
        Cmd::Bench {
            corpus_dir,
            db,
            scenes,
            csv,
        } => cmd_bench(
            &params,
            seed,
            corpus_dir.as_deref(),
            db.as_deref(),
            *scenes,
            csv.as_deref(),
        ),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("agpv: {e}");
            ExitCode::from(e.code())
        }
    }
}
