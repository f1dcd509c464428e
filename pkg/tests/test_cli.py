import json
import random
from fractions import Fraction

import pytest

from perfectoid_lab.char0 import UntiltSeries
from perfectoid_lab.cli.config import Config, ConfigError, load_config
from perfectoid_lab.cli.main import main, run_command
from perfectoid_lab.cli.parser import parse_element
from perfectoid_lab.errors import ExprSyntaxError, InvalidExponent, SideMismatch
from perfectoid_lab.verify import rand_tilt, rand_untilt


def test_parse_carries_into_normal_form():
    x = parse_element("p^(1/2)*T + 3", "untilt", 2)
    want = (UntiltSeries.monomial(2, Fraction(1, 2), (1,), prec=4, depth=1)
            + UntiltSeries.monomial(2, 0, (0,), prec=4, depth=1)
            + UntiltSeries.monomial(2, 1, (0,), prec=4, depth=1))
    assert x == want
    assert x.to_expr() == "1 + p^(1/2)*T^(1) + p^(1)"


def test_parse_tilt():
    y = parse_element("t^(1/4) + T^(3/4)", "tilt", 2)
    assert len(y.to_json()["digits"]) == 2


@pytest.mark.parametrize("src,side,err", [
    ("T^(1/3)", "untilt", InvalidExponent),
    ("t + 1", "untilt", SideMismatch),
    ("p*T", "tilt", SideMismatch),
    ("p +* 2", "untilt", ExprSyntaxError),
    ("(p", "untilt", ExprSyntaxError),
    ("T^(1/0)", "untilt", ExprSyntaxError),
])
def test_parse_errors(src, side, err):
    with pytest.raises(err):
        parse_element(src, side, 2)


def test_syntax_error_carries_position():
    with pytest.raises(ExprSyntaxError) as e:
        parse_element("p +* 2")
    assert e.value.position == 3


def test_depth_bound_on_exponents():
    with pytest.raises(InvalidExponent):
        parse_element("T^(1/8)", "untilt", 2, depth=2)


def test_whitespace_is_ignored():
    assert parse_element(" p ^ ( 1 / 2 ) * T ") == parse_element("p^(1/2)*T")


@pytest.mark.parametrize("p", [2, 3])
def test_round_trip_corpus(p):
    rng = random.Random(p)
    for k in range(100):
        if k % 2:
            x = rand_untilt(rng, p, 2, 3, rng.choice((0, 1)), terms=4)
            y = parse_element(x.to_expr(), "untilt", p, prec=x.prec, depth=2, nvars=x.nvars)
        else:
            x = rand_tilt(rng, p, 2, rng.choice((0, 1)), terms=4)
            y = parse_element(x.to_expr(), "tilt", p, depth=2, nvars=x.nvars)
        assert x == y


# ---- config ----

def test_config_defaults_and_bounds():
    c = Config()
    assert c.v_omega == Fraction(1, 2)
    assert Config(p=3, v_omega=Fraction(1, 5)).v_omega == Fraction(1, 5)
    for bad in ({"p": 4}, {"v_omega": Fraction(1)}, {"v_omega": Fraction(0)},
                {"prec": Fraction(0)}, {"depth": -1}, {"output": "xml"}):
        with pytest.raises(ConfigError):
            Config(**bad)


def test_config_file_then_flags(tmp_path):
    f = tmp_path / "cfg.json"
    f.write_text(json.dumps({"p": 3, "prec": "2", "seed": 5}))
    env = {"PERFECTOID_LAB_CONFIG": str(f)}
    c = load_config({}, env)
    assert (c.p, c.prec, c.sample_seed, c.v_omega) == (3, 2, 5, Fraction(1, 3))
    assert load_config({"p": 5}, env).p == 5
    f.write_text("{oops")
    with pytest.raises(ConfigError):
        load_config({}, env)
    f.write_text(json.dumps({"colour": 1}))
    with pytest.raises(ConfigError):
        load_config({}, env)


def test_env_config_reaches_commands(tmp_path):
    f = tmp_path / "cfg.json"
    f.write_text(json.dumps({"p": 3}))
    code, out = run_command(["witt", "delta", "--len", "4", "--x", "p", "--json"],
                            env={"PERFECTOID_LAB_CONFIG": str(f)})
    assert code == 0 and json.loads(out)["config"]["p"] == 3


# ---- commands ----

def run_json(argv):
    code, out = run_command(argv + ["--json"], env={})
    return code, json.loads(out)


def test_witt_delta_payload():
    code, cert = run_json(["witt", "delta", "--p", "3", "--len", "4", "--x", "p"])
    assert code == 0
    assert cert["schema"] == "perfectoid-lab/certificate/1"
    assert cert["provenance"] == "exact"
    r = cert["result"]["result"]
    assert r["integer"]["balanced"] == 1 - 3**2
    assert r["integer"]["modulus"] == 27


def test_certificate_rationals_are_pairs():
    code, cert = run_json(["torus", "run", "--p", "2", "--nmax", "3", "--bound", "2"])
    assert code == 0

    def walk(x):
        if isinstance(x, float):
            raise AssertionError("float in certificate")
        if isinstance(x, dict):
            for v in x.values():
                walk(v)
        if isinstance(x, list):
            for v in x:
                walk(v)

    walk(cert)
    assert cert["config"]["v_omega"] == {"num": 1, "den": 2}


def test_cech_run():
    code, cert = run_json(["cech", "run", "--pieces", "0,1/2", "--prec", "2"])
    assert code == 0
    assert cert["status"] == "pass"


def test_reproducible_bytes():
    for argv in (["witt", "theta", "--p", "2", "--len", "3", "--teich", "t"],
                 ["domain", "cover", "--interval", "0:1", "--interval", "1:inf", "--mode", "sampled", "--seed", "3"],
                 ["norm", "rho", "--x", "T", "--norm", "weighted", "--nmax", "50"]):
        assert run_command(argv + ["--json"], env={}) == run_command(argv + ["--json"], env={})


def test_exit_codes():
    assert run_command(["tilt", "sharp", "--x", "1+t", "--N", "2"], env={})[0] == 0
    # a gap in the cover is a verification failure
    assert run_command(["domain", "cover", "--interval", "0:1", "--interval", "2:inf"], env={})[0] == 1
    assert run_command(["witt", "frobnicate"], env={})[0] == 2
    assert run_command(["tilt", "sharp", "--x", "1+*t"], env={})[0] == 2
    assert run_command(["witt", "delta", "--p", "4", "--x", "p"], env={})[0] == 2


def test_exhaustion_exits_3():
    code, out = run_command(["witt", "add", "--len", "8", "--x", "1", "--y", "1", "--json"], env={})
    assert code == 3
    assert json.loads(out)["error"]["code"] == "E_CEILING"


def test_error_json_shape():
    code, out = run_command(["tilt", "sharp", "--x", "T^(1/3)", "--json"], env={})
    assert code == 2
    assert json.loads(out)["error"]["code"] == "E_EXPONENT"


def test_text_output_and_out_file(tmp_path):
    target = tmp_path / "cert.json"
    code, text = run_command(["tilt", "sharp", "--x", "1+t", "--N", "2", "--out", str(target)], env={})
    assert code == 0
    assert "sharp: 1 + p^(1) + p^(3/2)" in text
    assert target.exists()


def test_help_and_main(capsys, monkeypatch):
    code, out = run_command(["--help"], env={})
    assert code == 0 and "witt" in out
    monkeypatch.setattr("sys.argv", ["perfectoid-lab", "witt", "delta", "--x", "p"])
    assert main() == 0
    assert capsys.readouterr().out


def test_verify_subset():
    code, cert = run_json(["verify", "all", "--only", "witt_ghost,cli_round_trip"])
    assert code == 0
    assert cert["result"]["failed"] == 0 and cert["result"]["passed"] == 2
    assert run_command(["verify", "all", "--only", "nothing"], env={})[0] == 2
