"""Pairing original images with their annotated counterparts.

Directory convention: ``face.jpg`` is annotated by ``face.gt.jpg`` (or
``face.gt.png``), either next to it or at the same relative path under a
separate annotation root. A manifest file can list pairs explicitly, one
``original_path[,annotated_path]`` per line with ``#`` comments; relative
paths resolve against the manifest's directory.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .core import SkinDetectionError
from .ground_truth import AnnotatedPair
from .raster import INPUT_SUFFIXES, load_image

GT_TAG = ".gt"


class CorpusError(SkinDetectionError):
    pass


@dataclass(frozen=True)
class ManifestEntry:
    original: Path
    annotated: Path | None
    name: str


@dataclass(frozen=True)
class CorpusManifest:
    entries: tuple[ManifestEntry, ...]

    def __post_init__(self) -> None:
        seen: set[Path] = set()
        for e in self.entries:
            key = e.original.resolve()
            if key in seen:
                raise CorpusError(f"duplicate entry for {e.original}")
            seen.add(key)
            for p in (e.original, e.annotated):
                if p is not None and not p.is_file():
                    raise CorpusError(f"{p}: no such file")

    @property
    def unpaired(self) -> list[ManifestEntry]:
        return [e for e in self.entries if e.annotated is None]

    @classmethod
    def from_directory(cls, root: str | Path, annotations: str | Path | None = None) -> "CorpusManifest":
        root = Path(root)
        if not root.is_dir():
            raise CorpusError(f"{root}: not a directory")
        ann_root = Path(annotations) if annotations is not None else root
        entries = []
        for path in sorted(root.rglob("*")):
            if not path.is_file() or path.suffix.lower() not in INPUT_SUFFIXES:
                continue
            if path.stem.endswith(GT_TAG):
                continue
            rel = path.relative_to(root)
            entries.append(ManifestEntry(path, _find_annotation(ann_root / rel), rel.as_posix()))
        if not entries:
            raise CorpusError(f"{root}: no JPEG or PNG images found")
        return cls(tuple(entries))

    @classmethod
    def from_file(cls, manifest: str | Path) -> "CorpusManifest":
        manifest = Path(manifest)
        base = manifest.parent
        entries = []
        for lineno, raw in enumerate(manifest.read_text(encoding="utf-8").splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = [p.strip() for p in line.split(",")]
            if len(parts) > 2 or not parts[0]:
                raise CorpusError(f"{manifest}:{lineno}: expected 'original[,annotated]'")
            orig = base / parts[0]
            ann = base / parts[1] if len(parts) == 2 and parts[1] else None
            entries.append(ManifestEntry(orig, ann, parts[0]))
        if not entries:
            raise CorpusError(f"{manifest}: no entries")
        return cls(tuple(entries))

    @classmethod
    def load(cls, source: str | Path, annotations: str | Path | None = None) -> "CorpusManifest":
        source = Path(source)
        if source.is_dir():
            return cls.from_directory(source, annotations)
        return cls.from_file(source)


def _find_annotation(mirror: Path) -> Path | None:
    candidates = [mirror.with_name(mirror.stem + GT_TAG + mirror.suffix)]
    candidates += [
        mirror.with_name(mirror.stem + GT_TAG + s) for s in INPUT_SUFFIXES if s != mirror.suffix.lower()
    ]
    for c in candidates:
        if c.is_file():
            return c
    return None


def load_pairs(manifest: CorpusManifest) -> list[AnnotatedPair]:
    """Decode every pair; raises if any entry has no annotation."""
    missing = manifest.unpaired
    if missing:
        names = ", ".join(str(e.original) for e in missing)
        raise CorpusError(f"{len(missing)} image(s) have no annotation: {names}")
    return [
        AnnotatedPair(load_image(e.original), load_image(e.annotated), e.name)  # type: ignore[arg-type]
        for e in manifest.entries
    ]
