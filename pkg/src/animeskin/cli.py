"""Command-line front end.

    animeskin classify IMG... --classifier method1 --out masks/
    animeskin extract-gt IMG.gt.png... --out gt/
    animeskin segment IMG... --sigma 1.4 --low 0.1 --high 0.3 --out seg/
    animeskin evaluate CORPUS_DIR_OR_MANIFEST --classifiers all --report report.csv
    animeskin demo-corpus OUT_DIR

Masks are written as PNG, black for skin and white for non-skin.
"""

from __future__ import annotations

import argparse
import logging
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Callable, Sequence

from .classifiers import ClassifierId, classify_image, list_classifiers
from .core import BinaryMask, RasterImage, SkinDetectionError
from .corpus import CorpusManifest, load_pairs
from .evaluation import compare_classifiers
from .ground_truth import DEFAULT_TOLERANCE, extract_ground_truth
from .raster import load_image, save_mask
from .segmentation import CannyParams, takayama_segment
from .synthetic import write_corpus

log = logging.getLogger("animeskin")


def parse_classifiers(values: Sequence[str] | None) -> list[ClassifierId]:
    if not values:
        return []
    ids: list[ClassifierId] = []
    for v in values:
        for name in v.split(","):
            name = name.strip()
            if not name:
                continue
            if name.lower() == "all":
                ids.extend(list_classifiers())
            else:
                ids.append(ClassifierId.parse(name))
    # keep first occurrence
    return list(dict.fromkeys(ids))


def _run_per_file(
    paths: Sequence[str],
    out_dir: Path,
    jobs: int,
    work: Callable[[RasterImage], list[tuple[str, BinaryMask]]],
) -> int:
    out_dir.mkdir(parents=True, exist_ok=True)

    def one(path: str) -> str | None:
        try:
            img = load_image(path)
            for suffix, mask in work(img):
                save_mask(mask, out_dir / f"{Path(path).stem}.{suffix}.png")
        except (SkinDetectionError, OSError) as exc:
            msg = str(exc)
            return msg if path in msg else f"{path}: {msg}"
        return None

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            errors = list(pool.map(one, paths))
    else:
        errors = [one(p) for p in paths]
    failed = [e for e in errors if e]
    for e in failed:
        print(f"error: {e}", file=sys.stderr)
    log.info("%d of %d file(s) written to %s", len(paths) - len(failed), len(paths), out_dir)
    return 1 if failed else 0


def _canny_params(args: argparse.Namespace) -> CannyParams:
    return CannyParams(args.sigma, args.low, args.high)


def cmd_classify(args: argparse.Namespace) -> int:
    ids = parse_classifiers(args.classifiers) or [ClassifierId.parse(args.classifier)]

    def work(img: RasterImage):
        return [(f"{cid.value}.mask", classify_image(img, cid)) for cid in ids]

    return _run_per_file(args.inputs, Path(args.out), args.jobs, work)


def cmd_extract_gt(args: argparse.Namespace) -> int:
    return _run_per_file(args.inputs, Path(args.out), args.jobs, lambda img: [("mask", extract_ground_truth(img))])


def cmd_segment(args: argparse.Namespace) -> int:
    params = _canny_params(args)

    def work(img: RasterImage):
        return [("takayama-segment.mask", takayama_segment(img, params, args.skin_fraction))]

    return _run_per_file(args.inputs, Path(args.out), args.jobs, work)


def cmd_evaluate(args: argparse.Namespace) -> int:
    ids = parse_classifiers(args.classifiers) or list_classifiers()
    manifest = CorpusManifest.load(args.corpus, args.annotations)
    pairs = load_pairs(manifest)
    seg = (_canny_params(args), args.skin_fraction) if args.takayama_mode == "segment" else None
    report = compare_classifiers(
        pairs, ids, jobs=args.jobs, tolerance=args.tolerance, takayama_segment_params=seg
    )
    text = report.to_csv() if args.format == "csv" else report.to_json()
    if args.report:
        Path(args.report).parent.mkdir(parents=True, exist_ok=True)
        Path(args.report).write_text(text, encoding="utf-8", newline="")
    print(report.summary_table())
    return 0


def cmd_demo_corpus(args: argparse.Namespace) -> int:
    written = write_corpus(args.out_dir, args.count, args.seed)
    print(f"wrote {len(written)} image/annotation pairs to {args.out_dir}")
    return 0


def _add_canny_flags(p: argparse.ArgumentParser) -> None:
    d = CannyParams()
    p.add_argument("--sigma", type=float, default=d.gaussian_sigma, help="Gaussian sigma (default %(default)s)")
    p.add_argument("--low", type=float, default=d.low_threshold, help="low hysteresis threshold, fraction of max gradient")
    p.add_argument("--high", type=float, default=d.high_threshold, help="high hysteresis threshold, fraction of max gradient")
    p.add_argument(
        "--skin-fraction",
        type=float,
        default=0.5,
        help="a region is skin when more than this fraction of its pixels pass the HSV rule",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="animeskin", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--out", default=".", help="output directory (default: current directory)")
    shared.add_argument("--jobs", type=int, default=1, help="files processed concurrently")

    names = ", ".join(c.value for c in list_classifiers())
    p = sub.add_parser("classify", parents=[shared], help="write skin masks for each input image")
    p.add_argument("inputs", nargs="+")
    p.add_argument("--classifier", default="method1", help=f"one of: {names}")
    p.add_argument("--classifiers", action="append", help="comma-separated ids or 'all'; overrides --classifier")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("extract-gt", parents=[shared], help="write ground-truth masks from annotated images")
    p.add_argument("inputs", nargs="+")
    p.set_defaults(func=cmd_extract_gt)

    p = sub.add_parser("segment", parents=[shared], help="edge + flood-fill region skin segmentation")
    p.add_argument("inputs", nargs="+")
    _add_canny_flags(p)
    p.set_defaults(func=cmd_segment)

    p = sub.add_parser("evaluate", parents=[shared], help="benchmark classifiers on an annotated corpus")
    p.add_argument("corpus", help="corpus directory (name.ext + name.gt.ext) or manifest file")
    p.add_argument("--annotations", help="directory mirroring the corpus layout that holds the .gt files")
    p.add_argument("--classifier", dest="classifiers", action="append", help="classifier id (repeatable)")
    p.add_argument("--classifiers", dest="classifiers", action="append", help="comma-separated ids or 'all'")
    p.add_argument("--report", help="write the report here")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--tolerance", type=int, default=DEFAULT_TOLERANCE, help="per-channel pairing tolerance")
    p.add_argument(
        "--takayama-mode",
        choices=("pixel", "segment"),
        default="pixel",
        help="score takayama with the bare HSV pixel rule or the edge/flood-fill pipeline",
    )
    _add_canny_flags(p)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("demo-corpus", help="write a small synthetic annotated corpus")
    p.add_argument("out_dir")
    p.add_argument("--count", type=int, default=6)
    p.add_argument("--seed", type=int, default=2024)
    p.set_defaults(func=cmd_demo_corpus)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    if getattr(args, "jobs", 1) < 1:
        parser.error("--jobs must be at least 1")
    try:
        return args.func(args)
    except (SkinDetectionError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
