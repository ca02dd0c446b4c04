use agpv_core::bench::{
    derive_sets, evaluate, make_scenes, run_bench, SetId, SCENE_HEIGHT, SCENE_WIDTH,
};
use agpv_core::glyphs::{db_from_images, render_corpus, GlyphStyle};
use agpv_core::{extract_candidates, GrayImage, Orientation, Params, StandardDb};

fn setup() -> (Vec<(char, GrayImage)>, StandardDb, Params) {
    let params = Params::default();
    let corpus = render_corpus(&GlyphStyle::default(), 0.0).unwrap();
    let db = db_from_images(&corpus, &params).unwrap();
    (corpus, db, params)
}

#[test]
fn database_text_round_trips() {
    let (_, db, _) = setup();
    let text = db.to_text();
    assert!(text.starts_with("AGPVDB 1 36\n"));
    let back = StandardDb::parse(&text).unwrap();
    assert_eq!(back, db);
    assert_eq!(back.to_text(), text);
}

#[test]
fn bench_is_deterministic() {
    let (corpus, db, params) = setup();
    let a = run_bench(&corpus, &db, &params, 11, 3).unwrap();
    let b = run_bench(&corpus, &db, &params, 11, 3).unwrap();
    assert_eq!(a.to_csv(), b.to_csv());
    assert_eq!(a.rows.len(), 4);
    for row in &a.rows {
        for mode in [Orientation::Unknown, Orientation::Known] {
            assert!((0.0..=100.0).contains(&row.rec_tpr(mode)));
            assert!((0.0..=100.0).contains(&row.rec_fpr(mode)));
        }
    }
}

#[test]
fn scenes_keep_truth_inside_the_image() {
    let (corpus, _, _) = setup();
    let a = make_scenes(&corpus, 5, 4).unwrap();
    let derived = derive_sets(&a, 5).unwrap();
    for scene in a.iter().chain(derived.iter().flatten()) {
        let (w, h) = (scene.image.width(), scene.image.height());
        assert!(!scene.truth.is_empty());
        for t in &scene.truth {
            assert!(t.bbox.x + t.bbox.width <= w && t.bbox.y + t.bbox.height <= h);
        }
    }
    assert!(a
        .iter()
        .all(|s| (s.image.width(), s.image.height()) == (SCENE_WIDTH, SCENE_HEIGHT)));
}

/// Known orientation prunes fundamental pairs, so on clean scenes it finds
/// at least as many characters as unknown orientation.
#[test]
fn clean_known_orientation_not_worse() {
    let (corpus, db, params) = setup();
    let a = make_scenes(&corpus, 21, 6).unwrap();
    let row = evaluate(SetId::A, &a, &db, &params).unwrap();
    assert!(row.truths > 0);
    assert!(row.rec_tpr(Orientation::Known) >= row.rec_tpr(Orientation::Unknown));
}

#[test]
fn blank_image_has_no_candidates() {
    let img = GrayImage::filled(128, 96, 200).unwrap();
    assert!(extract_candidates(&img, &Params::default().extract())
        .unwrap()
        .is_empty());
}
