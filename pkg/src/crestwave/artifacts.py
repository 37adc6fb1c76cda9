"""On-disk formats: snapshot documents, the energy CSV and a plain SVG plot."""

import csv
import json
import math
from pathlib import Path

import numpy as np

from .energy import ENERGY_COLUMNS
from .state import InterfaceState

__all__ = [
    "FORMAT_VERSION",
    "snapshot_to_dict",
    "snapshot_from_dict",
    "write_snapshot",
    "read_snapshot",
    "snapshot_name",
    "EnergyCSV",
    "read_energy_csv",
    "energy_svg",
    "DirectorySink",
]

FORMAT_VERSION = 1


def _pairs(z):
    return [[float(v.real), float(v.imag)] for v in np.asarray(z, dtype=complex)]


def _unpairs(rows, n):
    a = np.asarray(rows, dtype=float)
    if a.shape != (n, 2):
        raise ValueError(f"expected {n} [re, im] pairs, got shape {a.shape}")
    return a[:, 0] + 1j * a[:, 1]


def snapshot_to_dict(s):
    return {"format_version": FORMAT_VERSION, "t": float(s.t), "grid_n": int(s.n),
            "W": _pairs(s.W), "Vbar": _pairs(s.Vbar)}


def snapshot_from_dict(d):
    if d.get("format_version") != FORMAT_VERSION:
        raise ValueError(f"unsupported snapshot format_version {d.get('format_version')!r}")
    n = int(d["grid_n"])
    return InterfaceState(_unpairs(d["W"], n), _unpairs(d["Vbar"], n), float(d["t"]))


def snapshot_name(t):
    return f"t={t:.6g}.json"


def write_snapshot(path, s):
    Path(path).write_text(json.dumps(snapshot_to_dict(s)) + "\n")


def read_snapshot(path):
    return snapshot_from_dict(json.loads(Path(path).read_text()))


class EnergyCSV:
    """Energy series written row by row and flushed, so partial runs keep their data."""

    def __init__(self, path):
        self._fh = open(path, "w", newline="")
        self._w = csv.writer(self._fh, lineterminator="\n")
        self._w.writerow(ENERGY_COLUMNS)
        self._fh.flush()

    def write(self, report):
        self._w.writerow([repr(float(v)) for v in report.row()])
        self._fh.flush()

    def close(self):
        self._fh.close()


def read_energy_csv(path):
    """Columns of an energy CSV as a dict of float arrays."""
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    header, body = rows[0], rows[1:]
    data = np.array(body, dtype=float).reshape(len(body), len(header))
    return {h: data[:, i] for i, h in enumerate(header)}


_COLOURS = ("#000000", "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
            "#8c564b", "#e377c2")


def energy_svg(t, series, width=640, height=400):
    """Line plot of named series against ``t`` as an SVG document.

    ``series`` maps labels to arrays. The vertical axis is ``log10(1e-16 + y)``
    so components of very different size share one frame.
    """
    t = np.asarray(t, dtype=float)
    m, pad = 50, 10
    ys = {k: np.log10(1e-16 + np.abs(np.asarray(v, dtype=float))) for k, v in series.items()}
    lo = min(float(v.min()) for v in ys.values())
    hi = max(float(v.max()) for v in ys.values())
    if hi - lo < 1e-12:
        lo, hi = lo - 1, hi + 1
    t0, t1 = float(t[0]), float(t[-1]) if t[-1] > t[0] else float(t[0]) + 1
    X = lambda x: m + (x - t0) / (t1 - t0) * (width - m - pad)
    Y = lambda y: pad + (hi - y) / (hi - lo) * (height - m - pad)
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
           f'viewBox="0 0 {width} {height}">',
           f'<rect x="{m}" y="{pad}" width="{width - m - pad}" height="{height - m - pad}" '
           'fill="none" stroke="#888"/>',
           f'<text x="{m}" y="{height - 15}" font-size="12">t = {t0:.4g} .. {t1:.4g}</text>',
           f'<text x="5" y="{pad + 12}" font-size="12">1e{hi:.1f}</text>',
           f'<text x="5" y="{height - m}" font-size="12">1e{lo:.1f}</text>']
    for i, (name, y) in enumerate(ys.items()):
        colour = _COLOURS[i % len(_COLOURS)]
        pts = " ".join(f"{X(a):.2f},{Y(b):.2f}" for a, b in zip(t, y) if math.isfinite(b))
        out.append(f'<polyline fill="none" stroke="{colour}" stroke-width="1.5" points="{pts}"/>')
        out.append(f'<text x="{width - 120}" y="{pad + 16 * (i + 1)}" font-size="12" '
                   f'fill="{colour}">{name}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


class DirectorySink:
    """Run sink writing ``energy.csv`` and ``snapshots/`` into a directory."""

    def __init__(self, out_dir):
        self.out = Path(out_dir)
        self.out.mkdir(parents=True, exist_ok=True)
        (self.out / "snapshots").mkdir(exist_ok=True)
        self.csv = EnergyCSV(self.out / "energy.csv")

    def energy(self, report):
        self.csv.write(report)

    def snapshot(self, s):
        write_snapshot(self.out / "snapshots" / snapshot_name(s.t), s)

    def close(self):
        self.csv.close()
