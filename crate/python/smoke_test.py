"""Smoke test for the `agpv` extension module.

Build first with `cargo build --release -p agpv-py`; when `agpv` is not
installed the script loads target/release/libagpv.so directly.
"""

import importlib.util
import math
import pathlib
import sys


def load_agpv():
    try:
        import agpv

        return agpv
    except ImportError:
        pass
    root = pathlib.Path(__file__).resolve().parent.parent
    for name in ("libagpv.so", "libagpv.dylib", "agpv.pyd"):
        path = root / "target" / "release" / name
        if path.exists():
            spec = importlib.util.spec_from_file_location("agpv", path)
            module = importlib.util.module_from_spec(spec)
            spec.loader.exec_module(module)
            return module
    sys.exit("agpv module not found; run `cargo build --release -p agpv-py`")


def main():
    agpv = load_agpv()
    labels = agpv.labels()
    assert len(labels) == 36 and labels[0] == "0" and labels[-1] == "Z"

    params = agpv.Params()
    db = agpv.StandardDb.builtin(params)
    assert len(db) == 36
    text = db.to_text()
    assert text.startswith("AGPVDB 1 36\n")
    assert agpv.StandardDb.parse(text).to_text() == text

    img = agpv.render_glyph("K")
    assert (img.width, img.height) == (64, 64)
    assert agpv.load_pgm(img.to_pgm()).pixels() == img.pixels()

    cands = agpv.extract(img)
    assert cands and all(c.polarity in ("positive", "negative") for c in cands)

    label, cmc = agpv.recognize_glyph(img, db)
    assert (label, cmc) == ("K", 0.0), (label, cmc)
    label, _ = agpv.recognize_glyph(agpv.render_glyph("K", 30.0), db)
    assert label == "K", label

    rows = agpv.recognize(img, db, known_orientation=True)
    assert any(r[0] == "K" and r[1] == 0.0 for r in rows)

    blank = agpv.GrayImage(96, 96, bytes([200]) * (96 * 96))
    assert agpv.extract(blank) == []
    assert agpv.recognize(blank, db) == []

    try:
        agpv.Params(th_rec=-1.0)
    except ValueError:
        pass
    else:
        raise AssertionError("negative threshold accepted")
    try:
        agpv.load_pgm(b"P2\n1 1\n255\n0\n")
    except ValueError:
        pass
    else:
        raise AssertionError("ASCII PGM accepted")

    csv = agpv.run_bench(seed=3, scenes=2)
    lines = csv.strip().splitlines()
    assert lines[0] == "set,extraction_tpr,rec1_tpr,rec1_fpr,rec2_tpr,rec2_fpr"
    assert [l.split(",")[0] for l in lines[1:]] == ["A", "B", "C", "D"]
    assert all(0.0 <= float(v) <= 100.0 for l in lines[1:] for v in l.split(",")[1:] if not math.isnan(float(v)))
    print("agpv smoke test ok")


if __name__ == "__main__":
    main()
