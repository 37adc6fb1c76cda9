import numpy as np

from crestwave import make_ic
from crestwave.artifacts import (FORMAT_VERSION, DirectorySink, EnergyCSV, energy_svg,
                                 read_energy_csv, read_snapshot, snapshot_from_dict,
                                 snapshot_name, snapshot_to_dict, write_snapshot)
from crestwave.energy import ENERGY_COLUMNS, EnergyReport

import pytest


def test_snapshot_roundtrip(tmp_path):
    s = make_ic(32, {"kind": "random", "seed": 1}).replace(t=0.25)
    write_snapshot(tmp_path / "s.json", s)
    back = read_snapshot(tmp_path / "s.json")
    assert back.t == 0.25 and back.n == 32
    assert np.array_equal(back.W, s.W) and np.array_equal(back.Vbar, s.Vbar)


def test_snapshot_format_checks():
    d = snapshot_to_dict(make_ic(16, {"kind": "flat"}))
    assert d["format_version"] == FORMAT_VERSION
    with pytest.raises(ValueError):
        snapshot_from_dict({**d, "format_version": 99})
    with pytest.raises(ValueError):
        snapshot_from_dict({**d, "W": d["W"][:3]})


def test_snapshot_name():
    assert snapshot_name(1.0) == "t=1.json"
    assert snapshot_name(0.25) == "t=0.25.json"


def test_energy_csv(tmp_path):
    w = EnergyCSV(tmp_path / "e.csv")
    w.write(EnergyReport(1, 2, 3, 4, 5, 6, 7, 28, t=0.5, minA1=1.0))
    w.close()
    cols = read_energy_csv(tmp_path / "e.csv")
    assert tuple(cols) == ENERGY_COLUMNS
    assert cols["total"][0] == 28.0 and cols["t"][0] == 0.5


def test_svg_is_plain_vector_output():
    t = np.linspace(0, 1, 5)
    doc = energy_svg(t, {"total": 1 + t, "ea_1": t ** 2})
    assert doc.startswith("<svg") and doc.count("<polyline") == 2
    assert "total" in doc


def test_directory_sink(tmp_path):
    sink = DirectorySink(tmp_path / "run")
    sink.snapshot(make_ic(16, {"kind": "flat"}))
    sink.close()
    assert (tmp_path / "run" / "snapshots" / "t=0.json").exists()
    assert (tmp_path / "run" / "energy.csv").read_text().startswith("t,ea_1")
