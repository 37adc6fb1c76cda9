import numpy as np
import pytest

from crestwave import make_ic, random_state
from crestwave import verify as vf


def test_identity_suite_small():
    r = vf.check_identities(n=64, trials=5, seed=3)
    assert r.passed, [(c.check_id, c.value) for c in r.failures()]
    ids = {c.check_id for c in r.records}
    assert {"hilbert_square", "hilbert_adjoint", "projection_AH", "derivative_commutes",
            "holomorphic_commutator", "calderon_by_parts", "mean_square_zero"} <= ids


def test_commutator_suite_small():
    r = vf.check_commutator_identities(trials=2, seed=1, n=128)
    assert r.passed
    assert [c.check_id for c in r.records] == ["material_first_derivative",
                                               "material_second_derivative",
                                               "material_wave_operator"]


def test_inequality_ratios_are_finite_and_named():
    out = vf.inequality_ratios(64, np.random.default_rng(0))
    assert set(out) == set(vf.INEQUALITIES)
    assert all(np.isfinite(v) and v > 0 for v in out.values())


def test_inequality_inputs_are_nested_across_grids():
    a = vf.inequality_ratios(64, np.random.default_rng(5))
    b = vf.inequality_ratios(128, np.random.default_rng(5))
    for k in vf.INEQUALITIES:
        assert b[k] == pytest.approx(a[k], rel=0.2), k


def test_inequality_suite_small():
    r = vf.check_inequalities(n=64, trials=10, seed=0)
    assert r.passed
    assert all(c.detail["growth"] < 1.5 for c in r.records)


def test_random_field_band():
    f = vf.random_field(64, np.random.default_rng(0), max_mode=5)
    c = np.abs(np.fft.fft(f))
    k = np.abs(np.fft.fftfreq(64, 1 / 64))
    assert c[k > 5].max() < 1e-12
    assert np.isrealobj(vf.random_field(64, np.random.default_rng(0), real=True).real)


def test_classify():
    assert vf.classify([1.5, 1.0]) == "divergent"
    assert vf.classify([1.05, 1.02]) == "convergent"
    assert vf.classify([1.2, 1.0]) == "inconclusive"


def test_crest_scan_rows():
    rows = vf.crest_angle_scan([1.5, 2.5], [128, 256, 512, 1024, 2048])
    assert len(rows) == 10
    labels = {r: lab for r, _, _, _, lab in rows}
    assert labels[1.5] == "divergent" and labels[2.5] == "convergent"
    with pytest.raises(ValueError):
        vf.crest_angle_scan([], [128, 256])
    with pytest.raises(ValueError):
        vf.crest_angle_scan([0.9], [128, 256])


def test_taylor_checks():
    states = [random_state(64, seed=i) for i in range(3)]
    assert vf.check_taylor(states).passed
    crest = [make_ic(n, {"kind": "crest", "r": 2.5}) for n in (128, 256, 512)]
    r = vf.check_taylor(crest, crest=1.0)
    assert r.passed
    assert r.records[-1].check_id == "taylor_min_decreases"


def test_report_serializes():
    r = vf.check_identities(n=32, trials=1)
    d = r.to_dict()
    assert d["passed"] is True and d["suite"] == "identities"
    assert {"check_id", "value", "n", "passed"} <= set(d["records"][0])


def test_a1_transport_error_is_second_order():
    s = random_state(64, max_mode=8, amplitude=0.05, seed=3, decay=5.0)
    e1 = vf.a1_transport_error(s, 0.02)
    e2 = vf.a1_transport_error(s, 0.01)
    assert 3.5 < e1 / e2 < 4.5


def test_comparability_constants_stable():
    a = vf.comparability_constants(64, states=5)
    b = vf.comparability_constants(128, states=5)
    assert np.allclose(a, b, rtol=1e-3)
