"""
Text file formats.

Signal file::

    # fracspec-signal v1, sample_rate=<hz>
    <sample>
    ...

Samples are written with 17 significant digits, which round-trips every
float64 exactly.

Grid file: a CSV matrix of magnitudes (row ``u``, column ``v``) plus a JSON
sidecar at ``<path>.json`` holding ``k``, ``bin_resolution``, the estimator
configuration, ``segments_averaged`` and, optionally, the complex values as
``[re, im]`` pairs. Lags and bins are non-negative; negative offsets are the
periodic images ``N - m``.

Every writer goes through :func:`atomic_write`, so readers never see a
partially written file.
"""

from __future__ import annotations

import json
import os
import re
import tempfile
from pathlib import Path

import numpy as np

from .core import BifrequencyGrid, Signal
from .errors import InvalidInputError

__all__ = [
    "SIGNAL_HEADER",
    "SignalFileError",
    "atomic_write",
    "format_signal",
    "write_signal",
    "read_signal",
    "parse_signal",
    "format_matrix",
    "grid_metadata",
    "write_grid",
    "read_grid",
    "dumps_json",
]

SIGNAL_HEADER = "# fracspec-signal v1, sample_rate={}"
_HEADER_RE = re.compile(r"^#\s*fracspec-signal\s+v1\s*,\s*sample_rate\s*=\s*(\S+)\s*$")


class SignalFileError(InvalidInputError):
    pass


def _fmt(x: float) -> str:
    # + 0.0 turns -0.0 into 0.0
    return format(float(x) + 0.0, ".17g")


def atomic_write(path, text: str) -> None:
    path = Path(path)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent or ".")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def format_signal(signal: Signal) -> str:
    lines = [SIGNAL_HEADER.format(_fmt(signal.sample_rate))]
    lines.extend(_fmt(x) for x in signal.samples)
    return "\n".join(lines) + "\n"


def write_signal(path, signal: Signal) -> None:
    atomic_write(path, format_signal(signal))


def parse_signal(text: str, source: str = "<string>") -> Signal:
    lines = text.splitlines()
    if not lines:
        raise SignalFileError(f"{source}: empty file")
    m = _HEADER_RE.match(lines[0])
    if m is None:
        raise SignalFileError(f"{source}:1: expected header '# fracspec-signal v1, sample_rate=<hz>'")
    try:
        fs = float(m.group(1))
    except ValueError:
        raise SignalFileError(f"{source}:1: bad sample_rate {m.group(1)!r}") from None
    samples = []
    for lineno, line in enumerate(lines[1:], start=2):
        s = line.strip()
        if not s:
            continue
        try:
            samples.append(float(s))
        except ValueError:
            raise SignalFileError(f"{source}:{lineno}: cannot parse sample {s!r}") from None
    try:
        return Signal(np.array(samples), fs)
    except InvalidInputError as exc:
        raise SignalFileError(f"{source}: {exc}") from None


def read_signal(path) -> Signal:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise SignalFileError(f"{path}: {exc.strerror}") from None
    return parse_signal(text, str(path))


def format_matrix(a: np.ndarray) -> str:
    return "".join(",".join(_fmt(x) for x in row) + "\n" for row in np.asarray(a))


def dumps_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def grid_metadata(grid: BifrequencyGrid, include_complex: bool = False, **extra) -> dict:
    meta = {
        "format": "fracspec-grid v1",
        "k": grid.k,
        "bin_resolution": grid.bin_resolution,
        "shape": list(grid.shape),
        "estimator": grid.estimator.to_dict(),
        "segments_averaged": grid.segments_averaged,
        "reference_magnitude": grid.reference_magnitude,
    }
    meta.update(extra)
    if include_complex:
        meta["values"] = [[[float(z.real), float(z.imag)] for z in row] for row in grid.values]
    return meta


def write_grid(path, grid: BifrequencyGrid, include_complex: bool = False, **extra) -> None:
    """Write the magnitude CSV at ``path`` and the JSON sidecar at ``path + '.json'``."""
    path = Path(path)
    atomic_write(path, format_matrix(grid.magnitude))
    atomic_write(path.with_name(path.name + ".json"), dumps_json(grid_metadata(grid, include_complex, **extra)))


def read_grid(path) -> tuple[np.ndarray, dict]:
    """Return ``(magnitudes, sidecar)``; complex values, when stored, are in ``sidecar['values']``."""
    path = Path(path)
    rows = []
    for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        if not line.strip():
            continue
        try:
            rows.append([float(s) for s in line.split(",")])
        except ValueError:
            raise InvalidInputError(f"{path}:{lineno}: malformed grid row") from None
    meta = json.loads(path.with_name(path.name + ".json").read_text(encoding="utf-8"))
    if "values" in meta:
        meta["values"] = np.array([[complex(re_, im) for re_, im in row] for row in meta["values"]])
    return np.array(rows), meta
