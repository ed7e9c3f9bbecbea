import csv
import io
import json

import pytest

from fbarlink import cli
from fbarlink.config import load, parse
from fbarlink.pipeline import SWEEP_OUTPUTS


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def write_cfg(tmp_path, text, name="run.cfg"):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def structured(capsys, *argv):
    code, out, err = run(capsys, *argv, "--format", "structured")
    assert code == 0, err
    return json.loads(out)


def _rows(doc):
    return {(r["topology"], r["objective"], r.get("protocol")): r for r in doc["rows"]}


def test_synth_default_covers_both_topologies(capsys):
    doc = structured(capsys, "synth")
    rows = _rows(doc)
    assert set(rows) == {(t, o, None) for t in ("one-ring", "two-ring")
                         for o in ("max-eff", "min-noise")}
    r = rows[("one-ring", "max-eff", None)]
    assert r["c_t_ff"] == pytest.approx(522.346, rel=0.01)
    assert r["l_nh"] == pytest.approx(3.246, rel=0.01)
    assert rows[("one-ring", "min-noise", None)]["c_t_ff"] == 0.0


def test_synth_table_output(capsys):
    code, out, _ = run(capsys, "synth", "--topology", "one-ring", "--objective", "max-eff")
    assert code == 0
    line = next(s for s in out.splitlines() if s.startswith("c_t_ff"))
    # six significant digits
    assert line.split()[-1] == "522.346"


def test_synth_unphysical_exit(tmp_path, capsys):
    cfg = write_cfg(tmp_path, "g_om_mhz = 60\n")
    code, _, err = run(capsys, "synth", "--config", cfg)
    assert code == cli.EXIT_UNPHYSICAL
    assert "unphysical" in err.lower()
    assert "49.7" in err


def test_synth_observables_only(tmp_path, capsys):
    cfg = write_cfg(tmp_path, "c_t_ff = 522.346\nl_nh = 3.246\n")
    doc = structured(capsys, "synth", "--config", cfg, "--topology", "one-ring",
                     "--objective", "min-noise")
    r = doc["rows"][0]
    # the given network is evaluated as is, whatever the objective
    assert r["c_t_ff"] == pytest.approx(522.346, rel=1e-12)
    assert r["q_lc"] == pytest.approx(1.347, rel=1e-3)


def test_config_errors_exit_1(tmp_path, capsys):
    cfg = write_cfg(tmp_path, "f_m = 3e9\n")
    code, _, err = run(capsys, "synth", "--config", cfg)
    assert code == cli.EXIT_CONFIG
    assert "line 1" in err and "f_m" in err
    code, _, _ = run(capsys, "synth", "--config", str(tmp_path / "nope.cfg"))
    assert code == cli.EXIT_CONFIG


def test_usage_errors_exit_1(capsys):
    with pytest.raises(SystemExit) as info:
        cli.main(["synth", "--objective", "fastest"])
    assert info.value.code == cli.EXIT_CONFIG
    with pytest.raises(SystemExit) as info:
        cli.main([])
    assert info.value.code == cli.EXIT_CONFIG


def test_io_error_exit_3(tmp_path, capsys):
    code, _, _ = run(capsys, "synth", "--out", str(tmp_path / "missing" / "x.txt"))
    assert code == cli.EXIT_IO
    code, _, _ = run(capsys, "sweep", "--var", "g_om", "--start", "1", "--stop", "2",
                     "--points", "2", "--out", str(tmp_path / "missing" / "x.csv"))
    assert code == cli.EXIT_IO


def test_herald_table_point(capsys):
    doc = structured(capsys, "herald")
    rows = _rows(doc)
    t1 = rows[("one-ring", "max-eff", "type1")]
    t2 = rows[("one-ring", "min-noise", "type2")]
    assert t1["dt_ns"] == pytest.approx(125.655, rel=5e-3)
    assert t1["fidelity"] == pytest.approx(0.90678, rel=5e-3)
    assert t1["tau_ent_khz"] == pytest.approx(168.863, rel=5e-3)
    assert t2["fidelity"] == pytest.approx(0.97898, rel=5e-3)
    assert t2["tau_ent_khz"] == pytest.approx(36.403, rel=5e-3)


def test_herald_two_ring(capsys):
    doc = structured(capsys, "herald", "--config", "table1_two_ring")
    rows = _rows(doc)
    assert rows[("two-ring", "max-eff", "type1")]["dt_ns"] == pytest.approx(126.248, rel=5e-3)
    assert rows[("two-ring", "min-noise", "type1")]["dt_ns"] == pytest.approx(117.893, rel=5e-3)


def test_herald_no_detector_gives_zero_rate(tmp_path, capsys):
    cfg = write_cfg(tmp_path, "eta_det = 0\n")
    doc = structured(capsys, "herald", "--config", cfg)
    assert all(r["tau_ent_khz"] == 0.0 for r in doc["rows"])


def test_herald_blue(capsys):
    doc = structured(capsys, "herald", "--protocol", "blue", "--objective", "max-eff")
    (row,) = doc["rows"]
    assert 0 <= row["p_in"] <= 1


def test_structured_echo_roundtrip(capsys):
    doc = structured(capsys, "fom", "--config", "table1_two_ring")
    assert parse(json.dumps(doc["config"])) == load("table1_two_ring")


def _sweep(capsys, tmp_path, *extra):
    out = tmp_path / "sweep.csv"
    code, _, err = run(capsys, "sweep", "--out", str(out), *extra)
    assert code == 0, err
    return list(csv.DictReader(io.StringIO(out.read_text())))


def test_sweep_golden_header(tmp_path, capsys):
    _sweep(capsys, tmp_path, "--var", "temperature", "--start", "10", "--stop", "150",
           "--points", "3")
    head = (tmp_path / "sweep.csv").read_text().splitlines()[0].split(",")
    assert head == ["temperature_mk"] + SWEEP_OUTPUTS
    assert SWEEP_OUTPUTS[:3] == ["topology", "objective", "c_t_ff"]
    assert SWEEP_OUTPUTS[-1] == "error"


def test_sweep_g_om_crosses_unphysical(tmp_path, capsys):
    rows = _sweep(capsys, tmp_path, "--var", "g_om", "--start", "1", "--stop", "60",
                  "--points", "60", "--objective", "max-eff")
    assert len(rows) == 60
    bad = [float(r["g_om_mhz"]) for r in rows if r["error"]]
    good = [float(r["g_om_mhz"]) for r in rows if not r["error"]]
    assert bad and 40 < min(bad) <= 60
    assert max(good) < min(bad)
    assert all(r["error"] == "unphysical_capacitance" for r in rows if r["error"])


def test_sweep_temperature_type2_monotone(tmp_path, capsys):
    rows = _sweep(capsys, tmp_path, "--var", "temperature", "--start", "10", "--stop", "150",
                  "--points", "15", "--objective", "max-eff")
    f = [float(r["fidelity_type2"]) for r in rows]
    assert all(b <= a for a, b in zip(f, f[1:]))


def test_sweep_eta_link_type2_constant(tmp_path, capsys):
    rows = _sweep(capsys, tmp_path, "--var", "eta_link", "--start", "0.1", "--stop", "1",
                  "--points", "5", "--objective", "max-eff")
    assert len({r["fidelity_type2"] for r in rows}) == 1
    assert len({r["fidelity_type1"] for r in rows}) == 5


def test_sweep_bad_spec(capsys):
    code, _, _ = run(capsys, "sweep", "--var", "g_om", "--start", "5", "--stop", "1")
    assert code == cli.EXIT_CONFIG
    code, _, _ = run(capsys, "sweep", "--var", "g_om", "--start", "0", "--stop", "1",
                     "--scale", "log")
    assert code == cli.EXIT_CONFIG


def test_mc_report_and_determinism(capsys):
    argv = ("mc", "--trials", "20000", "--seed", "7", "--objective", "max-eff", "--format", "csv")
    code, a, _ = run(capsys, *argv)
    assert code == 0
    code, b, _ = run(capsys, *argv)
    assert a == b
    row = next(csv.DictReader(io.StringIO(a)))
    for key in ("analytic", "mc_estimate", "std_error", "sigma", "pass_3sigma"):
        assert row[key] != ""
    assert row["seed"] == "7" and row["trials"] == "20000"


def test_mc_minimum_trials(capsys):
    code, _, err = run(capsys, "mc", "--trials", "1000")
    assert code == cli.EXIT_CONFIG
    assert "trials" in err


def test_mc_no_heralds_exit_4(tmp_path, capsys):
    cfg = write_cfg(tmp_path, "eta_link = 0\n")
    code, _, _ = run(capsys, "mc", "--config", cfg, "--trials", "10000")
    assert code == cli.EXIT_STATS


def test_mc_event_log(tmp_path, capsys):
    log = tmp_path / "ev.jsonl"
    code, _, _ = run(capsys, "mc", "--trials", "10000", "--objective", "max-eff",
                     "--event-log", str(log))
    assert code == 0
    assert len(log.read_text().splitlines()) == 10000


def test_warnings_go_to_stderr(tmp_path, capsys):
    cfg = write_cfg(tmp_path, "kappa_i_mhz = 1\nkappa_ext_mhz = 2\nn_cav = 1\n")
    code, out, err = run(capsys, "synth", "--config", cfg, "--topology", "one-ring")
    assert code == 0
    assert "warning [validity_guard]" in err
    assert "warning" not in out
