//! Character extraction from difference-of-Gaussian images and recognition
//! with augmented gradient projection vectors (AGPVs).

pub mod agpv;
pub mod angle;
pub mod axes;
pub mod bench;
pub mod config;
pub mod error;
pub mod extraction;
pub mod glyphs;
pub mod image;
pub mod matching;
pub mod scalespace;

pub use config::Params;
pub use error::{DbFormatError, Error, PgmError, Result};
pub use extraction::{extract_candidates, BBox, CharCandidate, ExtractParams, Polarity};
pub use image::{load_pgm, save_pgm, GrayImage};
pub use matching::{
    build_db, recognize, MatchParams, MatchResult, Orientation, StandardDb, TestFeatures,
};
