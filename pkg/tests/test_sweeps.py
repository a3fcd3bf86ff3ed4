import json
import math

import numpy as np
import pytest

from nccoh.coherence import NcConfig
from nccoh.sweeps import EXPERIMENTS, SweepSpec, run_sweep

FAST_NC = NcConfig(coarse_grid_points=301, refine_iterations=25)


def _spec(experiment, out, **kw):
    defaults = dict(theta_min=0.01, theta_max=math.pi - 0.01, theta_steps=41, nc=FAST_NC)
    defaults.update(kw)
    return SweepSpec(experiment=experiment, out=out, **defaults)


def _read_csv(path):
    header = []
    with open(path) as f:
        lines = f.read().splitlines()
    comments = [l for l in lines if l.startswith("#")]
    columns = next(l for l in lines if not l.startswith("#")).split(",")
    data = np.array(
        [
            [float(x) for x in l.split(",")]
            for l in lines
            if l and not l.startswith("#") and not l[0].isalpha()
        ]
    )
    return comments, columns, data


def test_spec_validation():
    with pytest.raises(ValueError):
        SweepSpec("nope", "x.csv", 0.1, 1.0, 10)
    with pytest.raises(ValueError):
        SweepSpec("coherence-pure", "x.csv", 0.0, 1.0, 10)
    with pytest.raises(ValueError):
        SweepSpec("coherence-pure", "x.csv", 0.5, 0.4, 10)
    with pytest.raises(ValueError):
        SweepSpec("coherence-mixed", "x.csv", 0.1, 1.0, 10, r_min=0.0)
    with pytest.raises(ValueError):
        SweepSpec("coherence-orders", "x.csv", 0.1, 1.0, 10, orders=(0.0,))
    with pytest.raises(ValueError):
        SweepSpec("qpea-sweep", "x.csv", 0.1, 1.0, 10, m_list=(30,))
    with pytest.raises(ValueError):
        SweepSpec("qpea-derivative", "x.csv", 1e-6, 1.0, 10, m_list=(5,))
    # the full schedule range is valid without an explicit delta
    SweepSpec("qpea-sweep", "x.csv", 0.1, 1.0, 10, m_list=(2, 25))
    # beyond it an explicit delta suffices, up to the product-form guard
    SweepSpec("qpea-sweep", "x.csv", 0.1, 1.0, 10, m_list=(40,), delta=2.0**-50)
    with pytest.raises(ValueError):
        SweepSpec("qpea-sweep", "x.csv", 0.1, 1.0, 10, m_list=(70,), delta=1e-30)


def test_r_grid_includes_fine_window():
    spec = _spec("coherence-mixed", "x.csv")
    rs = spec.r_grid()
    assert rs.min() > 0 and rs.max() == 1.0
    window = rs[rs >= 0.9]
    assert len(window) >= 21


def test_coherence_pure_outputs(tmp_path):
    out = tmp_path / "pure.csv"
    spec = _spec("coherence-pure", out, theta_steps=81)
    report = run_sweep(spec)

    comments, columns, data = _read_csv(out)
    assert columns == ["theta_rad", "c_nc_bits", "c_rel_ent_bits", "argmax_p"]
    assert any("nccoh 0." in c for c in comments)
    assert any("spec:" in c for c in comments)
    assert any("grid:" in c for c in comments)
    assert data.shape == (81, 4)

    # conventional coherence peaks at pi/2 with one bit
    k = np.argmax(data[:, 2])
    assert data[k, 0] == pytest.approx(math.pi / 2, abs=1e-12)
    assert data[k, 2] == pytest.approx(1.0, abs=1e-6)

    report_path = tmp_path / "pure.report.json"
    assert report_path.exists()
    payload = json.loads(report_path.read_text())
    assert list(payload) == ["experiment", "curves", "config", "version", "wall_seconds"]
    nc_curve = next(c for c in payload["curves"] if c["curve_id"] == "c_nc")
    kinds = [e["kind"] for e in nc_curve["extrema"]]
    assert kinds.count("max") == 2 and kinds.count("min") == 1
    maxima = sorted(e["location"] for e in nc_curve["extrema"] if e["kind"] == "max")
    # the two maxima mirror about pi/2
    assert maxima[0] + maxima[1] == pytest.approx(math.pi, abs=0.02)
    conv_curve = next(c for c in payload["curves"] if c["curve_id"] == "c_rel_ent")
    assert conv_curve["extrema"][0]["location"] == pytest.approx(math.pi / 2, abs=1e-9)


def test_extremum_locations_beat_grid_neighbours(tmp_path):
    out = tmp_path / "pure.csv"
    run_sweep(_spec("coherence-pure", out, theta_steps=81))
    payload = json.loads((tmp_path / "pure.report.json").read_text())
    _, _, data = _read_csv(out)
    thetas, values = data[:, 0], data[:, 1]
    for entry in next(c for c in payload["curves"] if c["curve_id"] == "c_nc")["extrema"]:
        k = int(np.argmin(np.abs(thetas - entry["location"])))
        lo, hi = max(k - 1, 0), min(k + 1, len(thetas) - 1)
        if entry["kind"] == "max":
            assert entry["value"] >= values[lo] and entry["value"] >= values[hi]
        else:
            assert entry["value"] <= values[lo] and entry["value"] <= values[hi]


def test_coherence_mixed_outputs(tmp_path):
    out = tmp_path / "mixed.csv"
    spec = _spec(
        "coherence-mixed",
        out,
        theta_steps=41,
        r_min=0.3,
        r_max=1.0,
        r_steps=3,
    )
    run_sweep(spec)
    comments, columns, data = _read_csv(out)
    assert columns == ["r", "theta_rad", "c_nc_bits", "argmax_p"]
    payload = json.loads((tmp_path / "mixed.report.json").read_text())
    by_r = {float(c["curve_id"][2:]): c for c in payload["curves"]}
    # extra resolution window means more than the 3 requested r rows
    assert len(by_r) > 3

    def curve(r):
        key = min(by_r, key=lambda x: abs(x - r))
        assert abs(key - r) < 1e-12
        return by_r[key]

    assert curve(0.9)["extrema"][0]["value"] > 2.0 * curve(1.0)["extrema"][0]["value"]
    assert curve(0.3)["dip_depth"] < curve(0.95)["dip_depth"]


def test_coherence_orders_outputs(tmp_path):
    out = tmp_path / "orders.csv"
    spec = _spec(
        "coherence-orders",
        out,
        theta_steps=101,
        theta_min=0.01,
        theta_max=math.pi / 2,
        orders=(1.0, 2.0, 3.0, 4.0),
    )
    run_sweep(spec)
    _, columns, data = _read_csv(out)
    assert columns == ["alpha", "theta_rad", "c_nc_bits"]
    payload = json.loads((tmp_path / "orders.report.json").read_text())
    argmax = {c["curve_id"]: c["extrema"][0]["location"] for c in payload["curves"]}
    # integer orders push the peak toward the pole
    assert argmax["alpha=0.5"] > argmax["alpha=0.33333333333333331"] > argmax["alpha=0.25"]
    # order one vanishes identically
    unity = data[data[:, 0] == 1.0]
    assert np.abs(unity[:, 2]).max() < 1e-9


def test_qpea_sweep_outputs(tmp_path):
    out = tmp_path / "qpea.csv"
    spec = SweepSpec(
        "qpea-sweep",
        out,
        theta_min=0.05,
        theta_max=math.pi - 0.05,
        theta_steps=201,
        m_list=(2, 5),
    )
    run_sweep(spec)
    _, columns, data = _read_csv(out)
    assert columns == ["m", "delta", "theta_rad", "p_a"]
    assert np.all(data[:, 3] >= -1e-12) and np.all(data[:, 3] <= 1 + 1e-12)
    m5 = data[data[:, 0] == 5]
    at = lambda th: m5[np.argmin(np.abs(m5[:, 2] - th)), 3]
    assert at(math.pi / 2) > at(0.3)
    assert np.all(m5[:, 1] == 2.0**-10)


def test_qpea_derivative_matches_sweep_differences(tmp_path):
    out_p = tmp_path / "p.csv"
    out_d = tmp_path / "d.csv"
    common = dict(
        theta_min=0.2, theta_max=math.pi - 0.2, theta_steps=2001, m_list=(2, 3)
    )
    run_sweep(SweepSpec("qpea-sweep", out_p, **common))
    run_sweep(SweepSpec("qpea-derivative", out_d, **common))
    _, _, probs = _read_csv(out_p)
    _, columns, derivs = _read_csv(out_d)
    assert columns == ["m", "delta", "theta_rad", "dp_dtheta"]
    for m in (2, 3):
        p = probs[probs[:, 0] == m]
        d = derivs[derivs[:, 0] == m]
        grid_diff = (p[2:, 3] - p[:-2, 3]) / (p[2:, 2] - p[:-2, 2])
        assert np.abs(d[1:-1, 3] - grid_diff).max() < 1e-6


def test_qpea_derivative_report_locations(tmp_path):
    out = tmp_path / "d.csv"
    run_sweep(
        SweepSpec(
            "qpea-derivative",
            out,
            theta_min=0.05,
            theta_max=math.pi - 0.05,
            theta_steps=101,
            m_list=(10,),
        )
    )
    payload = json.loads((tmp_path / "d.report.json").read_text())
    entry = payload["curves"][0]["extrema"][0]
    assert entry["kind"] == "derivative-max"
    s = (-1 + math.sqrt(1 + 4 * 10 * 9)) / 20.0
    assert entry["location"] == pytest.approx(math.asin(s), abs=1e-3)


def test_qpea_report_location_confined_to_window(tmp_path):
    # the true maximum sits at pi/2, outside this window; the reported
    # extremum must stay inside the swept range
    out = tmp_path / "w.csv"
    run_sweep(
        SweepSpec(
            "qpea-sweep", out, theta_min=1.0, theta_max=1.3, theta_steps=61,
            m_list=(6,),
        )
    )
    payload = json.loads((tmp_path / "w.report.json").read_text())
    loc = payload["curves"][0]["extrema"][0]["location"]
    assert 1.0 <= loc <= 1.3


def test_qpea_full_range_report_matches_standalone_argmax(tmp_path):
    from nccoh.qpea import default_delta, theta_argmax

    out = tmp_path / "f.csv"
    run_sweep(
        SweepSpec(
            "qpea-sweep",
            out,
            theta_min=math.pi / 4002,
            theta_max=math.pi - math.pi / 4002,
            theta_steps=4001,
            m_list=(5,),
        )
    )
    payload = json.loads((tmp_path / "f.report.json").read_text())
    loc = payload["curves"][0]["extrema"][0]["location"]
    assert loc == pytest.approx(theta_argmax(5, default_delta(5)), abs=2e-6)


@pytest.mark.parametrize("experiment", ["coherence-pure", "qpea-sweep"])
def test_determinism_across_thread_counts(tmp_path, experiment):
    outs = []
    for threads in (1, 4):
        out = tmp_path / f"{experiment}-{threads}.csv"
        kw = dict(theta_steps=31) if experiment == "coherence-pure" else dict(
            theta_min=0.05, theta_max=3.0, theta_steps=31, m_list=(2, 3)
        )
        run_sweep(_spec(experiment, out, threads=threads, **kw))
        outs.append(out)
    assert outs[0].read_bytes() == outs[1].read_bytes()
    reports = [
        json.loads((tmp_path / f"{experiment}-{t}.report.json").read_text())
        for t in (1, 4)
    ]
    for r in reports:
        r.pop("wall_seconds")
    assert reports[0] == reports[1]


def test_rerun_is_byte_identical(tmp_path):
    a = tmp_path / "a.csv"
    b = tmp_path / "b.csv"
    run_sweep(_spec("coherence-pure", a, theta_steps=31))
    run_sweep(_spec("coherence-pure", b, theta_steps=31))
    assert a.read_bytes() == b.read_bytes()
