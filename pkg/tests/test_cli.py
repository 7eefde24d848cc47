import csv
import io
import json

import numpy as np
import pytest
from PIL import Image

import oracles
from animeskin.cli import main
from animeskin.core import BinaryMask, RasterImage
from animeskin.corpus import CorpusError, CorpusManifest
from animeskin.raster import load_image, load_mask, save_image, save_mask


def write_rgb(path, arr):
    Image.fromarray(np.asarray(arr, dtype=np.uint8)).save(path)
    return str(path)


def read_gray(path):
    with Image.open(path) as im:
        assert im.mode == "L"
        return np.asarray(im)


def test_classify_skin_pixel_is_black(tmp_path):
    src = write_rgb(tmp_path / "a.png", [[(151, 101, 50)]])
    assert main(["classify", src, "--classifier", "kovac", "--out", str(tmp_path / "out")]) == 0
    out = read_gray(tmp_path / "out" / "a.kovac.mask.png")
    assert out.shape == (1, 1) and out[0, 0] == 0


def test_classify_non_skin_pixel_is_white(tmp_path):
    src = write_rgb(tmp_path / "a.png", [[(0, 0, 0)]])
    assert main(["classify", src, "--classifier", "kovac", "--out", str(tmp_path)]) == 0
    assert read_gray(tmp_path / "a.kovac.mask.png")[0, 0] == 255


def test_classify_missing_file(tmp_path, capsys):
    good = write_rgb(tmp_path / "ok.png", [[(151, 101, 50)]])
    missing = str(tmp_path / "missing.png")
    assert main(["classify", missing, good, "--out", str(tmp_path / "o")]) == 1
    assert missing in capsys.readouterr().err
    assert (tmp_path / "o" / "ok.method1.mask.png").exists()


def test_classify_undecodable(tmp_path, capsys):
    bad = tmp_path / "bad.jpg"
    bad.write_bytes(b"not an image")
    assert main(["classify", str(bad), "--out", str(tmp_path)]) == 1
    assert "bad.jpg" in capsys.readouterr().err


def test_classify_all_writes_every_mask(tmp_path):
    src = write_rgb(tmp_path / "a.png", np.full((3, 4, 3), 150))
    assert main(["classify", src, "--classifiers", "all", "--out", str(tmp_path / "o"), "--jobs", "2"]) == 0
    assert len(list((tmp_path / "o").glob("a.*.mask.png"))) == 8


def test_classify_drops_alpha(tmp_path):
    rgba = np.zeros((2, 2, 4), np.uint8)
    rgba[...] = (151, 101, 50, 0)
    Image.fromarray(rgba, "RGBA").save(tmp_path / "t.png")
    assert load_image(tmp_path / "t.png").pixel(1, 1) == (151, 101, 50)
    assert main(["classify", str(tmp_path / "t.png"), "--classifier", "kovac", "--out", str(tmp_path)]) == 0
    assert (read_gray(tmp_path / "t.kovac.mask.png") == 0).all()


def test_extract_gt_green_and_gray(tmp_path):
    g = write_rgb(tmp_path / "g.gt.png", np.full((3, 3, 3), (0, 255, 0)))
    n = write_rgb(tmp_path / "n.gt.png", np.full((3, 3, 3), 128))
    assert main(["extract-gt", g, n, "--out", str(tmp_path / "o")]) == 0
    assert (read_gray(tmp_path / "o" / "g.gt.mask.png") == 0).all()
    assert (read_gray(tmp_path / "o" / "n.gt.mask.png") == 255).all()


def test_extract_gt_counts_markers(tmp_path):
    arr = np.full((10, 10, 3), 90, np.uint8)
    idx = np.random.default_rng(4).choice(100, 17, replace=False)
    arr.reshape(-1, 3)[idx] = (255, 255, 0)
    src = write_rgb(tmp_path / "m.gt.png", arr)
    assert main(["extract-gt", src, "--out", str(tmp_path)]) == 0
    assert (read_gray(tmp_path / "m.gt.mask.png") == 0).sum() == 17


def test_segment_blue_is_white(tmp_path):
    src = write_rgb(tmp_path / "b.png", np.full((8, 8, 3), (0, 0, 255)))
    assert main(["segment", src, "--out", str(tmp_path)]) == 0
    assert (read_gray(tmp_path / "b.takayama-segment.mask.png") == 255).all()


def test_segment_disk(tmp_path):
    yy, xx = np.mgrid[:200, :200]
    disk = (xx - 100) ** 2 + (yy - 100) ** 2 <= 1600
    arr = np.zeros((200, 200, 3), np.uint8)
    arr[...] = (0, 0, 255)
    arr[disk] = (255, 170, 100)
    src = write_rgb(tmp_path / "d.png", arr)
    assert main(["segment", src, "--out", str(tmp_path)]) == 0
    out = read_gray(tmp_path / "d.takayama-segment.mask.png") == 0
    assert (out & disk).sum() / (out | disk).sum() >= 0.95


def test_segment_too_small(tmp_path, capsys):
    src = write_rgb(tmp_path / "s.png", np.full((2, 2, 3), 200))
    assert main(["segment", src, "--out", str(tmp_path)]) == 1
    assert "3x3" in capsys.readouterr().err


def test_segment_flags_validated(tmp_path, capsys):
    src = write_rgb(tmp_path / "s.png", np.full((5, 5, 3), 200))
    assert main(["segment", src, "--low", "0.5", "--high", "0.2", "--out", str(tmp_path)]) == 1


def _pair(tmp_path, name, arr, skin, marker=(0, 255, 0)):
    write_rgb(tmp_path / f"{name}.png", arr)
    ann = np.array(arr, dtype=np.uint8).copy()
    ann[skin] = marker
    write_rgb(tmp_path / f"{name}.gt.png", ann)


def test_evaluate_perfect_row(tmp_path, capsys):
    arr = np.full((4, 4, 3), (0, 0, 255), np.uint8)
    arr[1:3, 1:3] = (180, 140, 100)
    skin = np.zeros((4, 4), bool)
    skin[1:3, 1:3] = True
    _pair(tmp_path, "one", arr, skin)
    report = tmp_path / "r.csv"
    assert main(["evaluate", str(tmp_path), "--classifier", "method1", "--report", str(report)]) == 0
    rows = list(csv.DictReader(io.StringIO(report.read_text())))
    assert rows[0]["id"] == "method1"
    assert (rows[0]["tp_count"], rows[0]["tp_rate"], rows[0]["fp_rate"]) == ("4", "1", "0")
    out = capsys.readouterr().out
    assert "100.00%" in out and "0.00%" in out


def test_evaluate_all_rows_in_registry_order(tmp_path):
    _pair(tmp_path, "x", np.full((3, 3, 3), 150, np.uint8), np.eye(3, dtype=bool))
    report = tmp_path / "r.csv"
    assert main(["evaluate", str(tmp_path), "--classifiers", "all", "--report", str(report)]) == 0
    ids = [r["id"] for r in csv.DictReader(io.StringIO(report.read_text()))]
    assert ids == ["kovac", "swift", "saleh", "osman", "takayama", "method1", "method2", "method3"]


def test_evaluate_matches_brute_force(tmp_path):
    rng = np.random.default_rng(11)
    raw = []
    for i in range(3):
        arr = rng.integers(0, 256, (7, 9, 3), dtype=np.uint8)
        # keep originals free of marker-like pixels
        arr[..., 2] = np.maximum(arr[..., 2], 100)
        skin = rng.random((7, 9)) < 0.4
        _pair(tmp_path, f"p{i}", arr, skin, (0, 255, 0) if i % 2 else (255, 255, 0))
        raw.append((arr.astype(np.int64), skin))
    report = tmp_path / "r.json"
    assert main(["evaluate", str(tmp_path), "--classifiers", "all", "--format", "json", "--report", str(report)]) == 0
    doc = json.loads(report.read_text())
    for row in doc["classifiers"]:
        rule = oracles.ORACLES[row["id"]]
        tp = fp = skin_total = total = 0
        for arr, skin in raw:
            for y in range(arr.shape[0]):
                for x in range(arr.shape[1]):
                    r, g, b = (arr[y, x, c : c + 1] for c in range(3))
                    p = bool(rule(r, g, b)[0])
                    tp += p and skin[y, x]
                    fp += p and not skin[y, x]
                    skin_total += skin[y, x]
                    total += 1
        assert (row["tp_count"], row["fp_count"]) == (tp, fp)
        assert row["tp_rate"] == pytest.approx(tp / skin_total, rel=5e-4)
        assert row["fp_rate"] == pytest.approx(fp / total, rel=5e-4)
    assert doc["pixel_total"] == 3 * 63


def test_evaluate_reports_unpaired(tmp_path, capsys):
    write_rgb(tmp_path / "lonely.png", np.full((3, 3, 3), 10))
    assert main(["evaluate", str(tmp_path)]) == 1
    assert "lonely.png" in capsys.readouterr().err


def test_evaluate_manifest_and_mirror(tmp_path):
    imgs, anns = tmp_path / "imgs", tmp_path / "anns"
    imgs.mkdir()
    anns.mkdir()
    arr = np.full((4, 4, 3), (180, 140, 100), np.uint8)
    write_rgb(imgs / "a.png", arr)
    write_rgb(anns / "a.gt.png", np.full((4, 4, 3), (0, 255, 0)))
    m = CorpusManifest.from_directory(imgs, anns)
    assert m.entries[0].annotated == anns / "a.gt.png"
    manifest = tmp_path / "corpus.txt"
    manifest.write_text("# comment\nimgs/a.png, anns/a.gt.png  # trailing\n\n", encoding="utf-8")
    report = tmp_path / "r.csv"
    assert main(["evaluate", str(manifest), "--classifier", "method1", "--report", str(report)]) == 0
    assert report.read_text().splitlines()[1].startswith("method1,16,1,0,0")


def test_manifest_rejects_duplicates(tmp_path):
    write_rgb(tmp_path / "a.png", np.zeros((2, 2, 3)))
    manifest = tmp_path / "m.txt"
    manifest.write_text("a.png\na.png\n")
    with pytest.raises(CorpusError, match="duplicate"):
        CorpusManifest.from_file(manifest)


def test_manifest_rejects_missing_paths(tmp_path):
    manifest = tmp_path / "m.txt"
    manifest.write_text("nope.png,nope.gt.png\n")
    with pytest.raises(CorpusError, match="nope.png"):
        CorpusManifest.from_file(manifest)


def test_evaluate_segment_variant(tmp_path):
    arr = np.full((20, 20, 3), (0, 0, 255), np.uint8)
    arr[5:15, 5:15] = (255, 170, 100)
    skin = np.zeros((20, 20), bool)
    skin[5:15, 5:15] = True
    _pair(tmp_path, "sq", arr, skin)
    report = tmp_path / "r.json"
    args = ["evaluate", str(tmp_path), "--classifier", "takayama", "--takayama-mode", "segment"]
    assert main(args + ["--format", "json", "--report", str(report)]) == 0
    row = json.loads(report.read_text())["classifiers"][0]
    assert row["variant"] == "segment"
    assert row["fp_count"] == 0 and 0 < row["tp_count"] <= 100


def test_unknown_classifier_rejected(tmp_path, capsys):
    src = write_rgb(tmp_path / "a.png", [[(1, 2, 3)]])
    assert main(["classify", src, "--classifier", "omanovic", "--out", str(tmp_path)]) == 1
    assert "unknown classifier" in capsys.readouterr().err


def test_mask_round_trip(tmp_path):
    flags = np.random.default_rng(2).integers(0, 2, (13, 7), dtype=np.uint8)
    save_mask(BinaryMask(flags), tmp_path / "m.png")
    assert np.array_equal(load_mask(tmp_path / "m.png").flags, flags)


def test_image_round_trip(tmp_path):
    arr = np.random.default_rng(3).integers(0, 256, (5, 6, 3), dtype=np.uint8)
    save_image(RasterImage(arr), tmp_path / "i.png")
    assert np.array_equal(load_image(tmp_path / "i.png").pixels, arr)


def test_demo_corpus_command(tmp_path):
    assert main(["demo-corpus", str(tmp_path / "c"), "--count", "5"]) == 0
    assert len(list((tmp_path / "c").glob("*.gt.png"))) == 5
    assert len(CorpusManifest.from_directory(tmp_path / "c").entries) == 5
