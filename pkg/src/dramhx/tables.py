"""Loader for the Bell-Delaware coefficient data file.

The bundled file lives at ``dramhx/data/bell_delaware.txt``; its header
documents the format.  Tables are parsed once and returned as immutable
tuples so they can be shared between concurrent model evaluations.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from importlib import resources
from pathlib import Path


@dataclass(frozen=True)
class JFBand:
    layout: int
    re_lo: float
    re_hi: float
    a1: float
    a2: float
    a3: float
    a4: float
    b1: float
    b2: float
    b3: float
    b4: float


@dataclass(frozen=True)
class BundleRow:
    pitch: str
    passes: int
    K1: float
    n1: float


@dataclass(frozen=True)
class CoefficientTables:
    jf: tuple[JFBand, ...]
    bundle: tuple[BundleRow, ...]

    def bands(self, layout: int) -> tuple[JFBand, ...]:
        rows = tuple(sorted((b for b in self.jf if b.layout == layout),
                            key=lambda b: b.re_lo))
        if not rows:
            raise KeyError(f"no j/f coefficients for layout angle {layout}")
        return rows

    def bundle_constants(self, layout: int, n_passes: int) -> tuple[float, float]:
        pitch = "triangular" if layout == 30 else "square"
        rows = sorted((r for r in self.bundle if r.pitch == pitch),
                      key=lambda r: r.passes)
        chosen = None
        for r in rows:
            if r.passes <= n_passes:
                chosen = r
        if chosen is None:
            raise KeyError(f"no bundle constants for {pitch} pitch, {n_passes} passes")
        return chosen.K1, chosen.n1


def parse_tables(text: str) -> CoefficientTables:
    section = None
    jf, bundle = [], []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            section = line[1:-1].strip()
            continue
        cols = line.split()
        try:
            if section == "jf":
                nums = [float(c) for c in cols[1:]]
                if len(nums) != 10:
                    raise ValueError("expected 11 columns")
                jf.append(JFBand(int(cols[0]), *nums))
            elif section == "bundle":
                bundle.append(BundleRow(cols[0], int(cols[1]), float(cols[2]), float(cols[3])))
            else:
                raise ValueError(f"data outside a known section ({section!r})")
        except (ValueError, IndexError) as exc:
            raise ValueError(f"coefficient file line {lineno}: {exc}") from None
    return CoefficientTables(tuple(jf), tuple(bundle))


@functools.lru_cache(maxsize=8)
def load_tables(path: str | None = None) -> CoefficientTables:
    if path is None:
        text = resources.files("dramhx").joinpath("data/bell_delaware.txt").read_text()
    else:
        text = Path(path).read_text()
    return parse_tables(text)
