"""Pixel-level TP/FP counting and corpus-wide classifier comparison.

Rates follow the benchmark's own definitions, which differ from the usual
ones in one place:

* ``tp_rate = sum(tp) / sum(gt_skin)``
* ``fp_rate = sum(fp) / sum(total)``, i.e. the denominator is *all* pixels,
  not just the non-skin ones.

Counts are summed as exact integers over the corpus and divided once at the
end. The conventional ``fp / (fp + tn)`` is reported alongside under a name
that marks it as outside the benchmark definition.
"""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .classifiers import ClassifierId, classify_image
from .core import BinaryMask, EmptyDatasetError, InvalidPairError, mask_count
from .ground_truth import DEFAULT_TOLERANCE, AnnotatedPair, extract_ground_truth, validate_pair

CSV_COLUMNS = ("id", "tp_count", "tp_rate", "fp_count", "fp_rate", "fp_rate_nonpaper")

# Published corpus results (70 annotated anime images, 18,000,593 pixels):
# id -> (tp_count, tp_percent, fp_count, fp_percent). Swift was not reported.
REFERENCE_RESULTS: dict[ClassifierId, tuple[int, float, int, float]] = {
    ClassifierId.METHOD1: (1389666, 79.54, 1711682, 9.5),
    ClassifierId.KOVAC: (1504259, 86.1, 2644507, 14.7),
    ClassifierId.OSMAN: (1716094, 98.23, 7794816, 43.30),
    ClassifierId.TAKAYAMA: (1325582, 75.88, 1392439, 7.7),
    ClassifierId.SALEH: (1369588, 78.40, 2521295, 14.01),
    ClassifierId.METHOD2: (1465885, 83.91, 1976905, 10.98),
    ClassifierId.METHOD3: (1542610, 88.3, 2570836, 14.2),
}
REFERENCE_TOTAL_PIXELS = 18_000_593


@dataclass(frozen=True)
class EvalCounts:
    tp: int
    fp: int
    fn_: int
    tn: int
    gt_skin: int
    total: int

    def __post_init__(self) -> None:
        if min(self.tp, self.fp, self.fn_, self.tn, self.gt_skin, self.total) < 0:
            raise ValueError(f"negative count in {self}")
        if self.tp + self.fn_ != self.gt_skin:
            raise ValueError(f"tp + fn_ != gt_skin in {self}")
        if self.tp + self.fp + self.fn_ + self.tn != self.total:
            raise ValueError(f"tp + fp + fn_ + tn != total in {self}")

    def __add__(self, other: "EvalCounts") -> "EvalCounts":
        return EvalCounts(
            self.tp + other.tp,
            self.fp + other.fp,
            self.fn_ + other.fn_,
            self.tn + other.tn,
            self.gt_skin + other.gt_skin,
            self.total + other.total,
        )

    def as_dict(self) -> dict[str, int]:
        return {
            "tp": self.tp,
            "fp": self.fp,
            "fn": self.fn_,
            "tn": self.tn,
            "gt_skin": self.gt_skin,
            "total": self.total,
        }


def evaluate_image(pred: BinaryMask, gt: BinaryMask) -> EvalCounts:
    if pred.shape != gt.shape:
        raise InvalidPairError(f"prediction is {pred.width}x{pred.height}, ground truth is {gt.width}x{gt.height}")
    p = pred.as_bool()
    a = gt.as_bool()
    tp = int(np.count_nonzero(p & a))
    fp = int(np.count_nonzero(p & ~a))
    fn_ = int(np.count_nonzero(~p & a))
    total = p.size
    return EvalCounts(tp, fp, fn_, total - tp - fp - fn_, mask_count(gt), total)


@dataclass(frozen=True)
class Aggregate:
    counts: EvalCounts
    tp_rate: float  # NaN when the corpus has no skin pixels
    fp_rate: float

    @property
    def tp_rate_defined(self) -> bool:
        return self.counts.gt_skin > 0

    @property
    def fp_rate_nonpaper(self) -> float:
        negatives = self.counts.fp + self.counts.tn
        return self.counts.fp / negatives if negatives else math.nan


def aggregate(counts: Iterable[EvalCounts]) -> Aggregate:
    counts = list(counts)
    if not counts:
        raise EmptyDatasetError("cannot aggregate an empty list of counts")
    total = counts[0]
    for c in counts[1:]:
        total = total + c
    tp_rate = total.tp / total.gt_skin if total.gt_skin else math.nan
    return Aggregate(total, tp_rate, total.fp / total.total)


@dataclass(frozen=True)
class ReportRow:
    id: ClassifierId
    result: Aggregate
    variant: str = "pixel"

    @property
    def tp_count(self) -> int:
        return self.result.counts.tp

    @property
    def fp_count(self) -> int:
        return self.result.counts.fp

    @property
    def tp_rate(self) -> float:
        return self.result.tp_rate

    @property
    def fp_rate(self) -> float:
        return self.result.fp_rate


@dataclass
class DatasetReport:
    rows: list[ReportRow]
    gt_skin_total: int
    pixel_total: int
    # image name -> classifier id -> counts
    per_image: dict[str, dict[str, EvalCounts]] = field(default_factory=dict)

    def row(self, cid: ClassifierId | str) -> ReportRow:
        cid = ClassifierId.parse(cid)
        for r in self.rows:
            if r.id == cid:
                return r
        raise KeyError(cid.value)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for r in self.rows:
            w.writerow(
                [
                    r.id.value,
                    r.tp_count,
                    format_rate(r.tp_rate),
                    r.fp_count,
                    format_rate(r.fp_rate),
                    format_rate(r.result.fp_rate_nonpaper),
                ]
            )
        return buf.getvalue()

    def to_json(self) -> str:
        doc = {
            "gt_skin_total": self.gt_skin_total,
            "pixel_total": self.pixel_total,
            "classifiers": [
                {
                    "id": r.id.value,
                    "variant": r.variant,
                    "tp_count": r.tp_count,
                    "tp_rate": _json_rate(r.tp_rate),
                    "tp_rate_defined": r.result.tp_rate_defined,
                    "fp_count": r.fp_count,
                    "fp_rate": _json_rate(r.fp_rate),
                    "fp_rate_nonpaper": _json_rate(r.result.fp_rate_nonpaper),
                    "fn_count": r.result.counts.fn_,
                    "tn_count": r.result.counts.tn,
                }
                for r in self.rows
            ],
            "per_image": {
                name: {cid: c.as_dict() for cid, c in by_id.items()}
                for name, by_id in self.per_image.items()
            },
        }
        return json.dumps(doc, indent=2) + "\n"

    def summary_table(self) -> str:
        """Human-readable table, two decimals, with published values alongside."""
        header = ("Methods", "True Positive", "Percent(TP)", "False Positive", "Percent(FP)", "Published TP% / FP%")
        lines = []
        for r in self.rows:
            ref = REFERENCE_RESULTS.get(r.id)
            ref_txt = f"{ref[1]:.2f}% / {ref[3]:.2f}%" if ref else "no paper reference value"
            name = r.id.value if r.variant == "pixel" else f"{r.id.value} ({r.variant})"
            lines.append(
                (name, str(r.tp_count), _pct(r.tp_rate), str(r.fp_count), _pct(r.fp_rate), ref_txt)
            )
        widths = [max(len(h), *(len(l[i]) for l in lines)) for i, h in enumerate(header)]
        fmt = "  ".join(f"{{:<{w}}}" if i == 0 else f"{{:>{w}}}" for i, w in enumerate(widths))
        out = [fmt.format(*header), fmt.format(*("-" * w for w in widths))]
        out += [fmt.format(*l) for l in lines]
        out.append(f"corpus: {self.gt_skin_total} skin pixels of {self.pixel_total} total")
        return "\n".join(out)


def format_rate(rate: float) -> str:
    """Four significant digits; ``nan`` for an undefined rate."""
    if math.isnan(rate):
        return "nan"
    return format(rate, ".4g")


def _json_rate(rate: float) -> float | None:
    return None if math.isnan(rate) else float(format_rate(rate))


def _pct(rate: float) -> str:
    return "undefined" if math.isnan(rate) else f"{100 * rate:.2f}%"


def compare_classifiers(
    corpus: Sequence[AnnotatedPair],
    ids: Sequence[ClassifierId | str],
    *,
    jobs: int = 1,
    tolerance: int = DEFAULT_TOLERANCE,
    takayama_segment_params=None,
) -> DatasetReport:
    """Run each classifier over every original and score it against the extracted ground truth.

    With ``takayama_segment_params`` set to a ``(CannyParams, skin_fraction)``
    tuple, the Takayama row uses the edge + flood-fill region pipeline instead
    of the bare pixel rule.
    """
    if not corpus:
        raise EmptyDatasetError("corpus is empty")
    ids = [ClassifierId.parse(i) for i in ids]
    if not ids:
        raise ValueError("no classifiers requested")

    def run(pair: AnnotatedPair) -> dict[ClassifierId, EvalCounts]:
        label = pair.name or "<unnamed>"
        check = validate_pair(pair, tolerance)
        if not check.valid:
            raise InvalidPairError(
                f"{label}: {check.deviations} non-marker pixels differ from the original "
                f"by more than {tolerance} (e.g. at {check.deviating_sample[:3]})"
            )
        gt = extract_ground_truth(pair.annotated)
        out = {}
        for cid in ids:
            if cid is ClassifierId.TAKAYAMA and takayama_segment_params is not None:
                from .segmentation import takayama_segment

                params, frac = takayama_segment_params
                pred = takayama_segment(pair.original, params, frac)
            else:
                pred = classify_image(pair.original, cid)
            out[cid] = evaluate_image(pred, gt)
        return out

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(run, corpus))
    else:
        results = [run(p) for p in corpus]

    rows = []
    for cid in ids:
        variant = "segment" if cid is ClassifierId.TAKAYAMA and takayama_segment_params is not None else "pixel"
        rows.append(ReportRow(cid, aggregate(r[cid] for r in results), variant))
    per_image: dict[str, dict[str, EvalCounts]] = {}
    for i, (pair, res) in enumerate(zip(corpus, results)):
        per_image[pair.name or f"#{i}"] = {cid.value: c for cid, c in res.items()}
    first = rows[0].result.counts
    return DatasetReport(rows, first.gt_skin, first.total, per_image)
