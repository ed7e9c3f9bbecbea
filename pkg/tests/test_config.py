import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from fbarlink.circuit import DeviceParams
from fbarlink.config import RunConfig, as_dict, echo, load, parse, parse_json, parse_text
from fbarlink.errors import ConfigError


def test_bundled_table1_matches_defaults():
    cfg = load("table1")
    dev = cfg.device()
    ref = DeviceParams()
    for name in ("g_om0", "f_opt", "kappa_i", "kappa_ext", "f_m", "gamma_i", "k_eff_sq",
                 "n_cav", "c0", "r0", "temperature", "j_coupling", "z_tx"):
        assert getattr(dev, name) == pytest.approx(getattr(ref, name), rel=1e-12), name
    assert dev.g_om == pytest.approx(10e6, rel=1e-12)
    assert cfg.topology == "one_ring"
    assert (cfg.eta_link, cfg.eta_det, cfg.t_reset) == (0.5, 0.9, pytest.approx(1e-6))


def test_bundled_two_ring_differs_only_in_topology():
    a, b = load("table1"), load("table1_two_ring")
    assert b.topology == "two_ring"
    assert a.with_values(topology="two_ring") == b


def test_unit_suffixes():
    cfg = parse_text("f_m_ghz = 3\nc0_pf = 0.2\ntemperature_mk = 20\nt_reset_ns = 500\n"
                     "r0_kohm = 1\nl_ct_nh = 0.1\n")
    assert cfg.f_m == 3e9
    assert cfg.c0 == pytest.approx(200e-15)
    assert cfg.temperature == pytest.approx(0.02)
    assert cfg.t_reset == pytest.approx(5e-7)
    assert cfg.r0 == 1e3
    assert cfg.l_ct == pytest.approx(0.1e-9)


def test_comments_blank_lines_and_case():
    cfg = parse_text("# header\n\n  F_M_GHZ = 3.0   # trailing\nself_consistent = yes\n")
    assert cfg.f_m == 3e9 and cfg.self_consistent is True


@pytest.mark.parametrize("text,line,field,needle", [
    ("f_m = 3e9\n", 1, "f_m", "unit suffix required"),
    ("\nf_m_parsec = 3\n", 2, "f_m_parsec", "unknown unit"),
    ("colour = blue\n", 1, "colour", "unknown key"),
    ("f_m_ghz = 3\nf_m_mhz = 3000\n", 2, "f_m_mhz", "duplicate"),
    ("f_m_ghz = fast\n", 1, "f_m", "expected a number"),
    ("f_m_ghz = nan\n", 1, "f_m", "finite"),
    ("just words\n", 1, None, "key = value"),
    ("eta_link = 1.5\n", 1, "eta_link", "[0, 1]"),
    ("k_eff_sq = -1\n", 1, "k_eff_sq", ""),
    ("topology = three_ring\n", 1, "topology", ""),
    ("c_t_ff = 500\n", 1, "c_t", "together"),
    ("p0 = 0.8\np1 = 0.3\n", 2, "p1", "exceed"),
    ("self_consistent = maybe\n", 1, "self_consistent", "boolean"),
])
def test_parse_errors_carry_line_and_field(text, line, field, needle):
    with pytest.raises(ConfigError) as info:
        parse_text(text)
    assert info.value.line == line
    assert info.value.field == field
    assert needle in str(info.value)
    assert f"line {line}" in str(info.value)


def test_json_format():
    cfg = parse('{"f_m_ghz": 3.0, "topology": "two-ring", "self_consistent": true, "t_sep_us": null}')
    assert cfg.f_m == 3e9 and cfg.topology == "two_ring" and cfg.self_consistent
    assert cfg.t_sep is None
    with pytest.raises(ConfigError):
        parse_json("[1, 2]")
    with pytest.raises(ConfigError) as info:
        parse_json('{"f_m_ghz": 3,\n "oops"}')
    assert info.value.line == 2
    with pytest.raises(ConfigError):
        parse_json('{"eta_link": true}')


def test_echo_roundtrip_bundled():
    for name in ("table1", "table1_two_ring"):
        cfg = load(name)
        assert parse(echo(cfg)) == cfg
        assert parse(json.dumps(as_dict(cfg))) == cfg


def test_echo_roundtrip_optional_fields():
    cfg = RunConfig(g_om=12.5e6, c_t=400e-15, l=3e-9, t_sep=2e-6, p0=0.7, p1=0.25,
                    self_consistent=True, tan_delta=3e-4, c_self=5e-15)
    assert parse(echo(cfg)) == cfg


@given(f=st.floats(1e8, 1e10), t=st.floats(1e-3, 1.0), eta=st.floats(0.0, 1.0),
       n=st.floats(0.0, 1e10), r_l=st.floats(0.0, 1e3))
def test_echo_roundtrip_property(f, t, eta, n, r_l):
    cfg = RunConfig(f_m=f, temperature=t, eta_link=eta, n_cav=n, r_l=r_l)
    assert parse(echo(cfg)) == cfg


def test_g_om_overrides_n_cav():
    cfg = parse_text("g_om_mhz = 20\nn_cav = 1\n")
    assert cfg.device().g_om == pytest.approx(20e6, rel=1e-12)


def test_load_file(tmp_path):
    p = tmp_path / "x.cfg"
    p.write_text("temperature_mk = 150\n")
    assert load(p).temperature == pytest.approx(0.15)
    with pytest.raises(OSError):
        load(tmp_path / "missing.cfg")


def test_observables_only_flag():
    assert parse_text("c_t_ff = 500\nl_nh = 3.2\n").observables_only
    assert not RunConfig().observables_only
