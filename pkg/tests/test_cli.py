import io
import json
import os
import subprocess
import sys
from pathlib import Path

import pytest

from k2tate import cli, seriesfile
from k2tate.fourier import decompose, in_theorem_A_kernel
from k2tate.rings import build_unramified
from k2tate.series import LaurentSeries as L

DATA = Path(__file__).parent / "data"


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli.run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def run_json(*argv):
    code, out, err = run(*argv, "--json")
    assert code == 0, err
    return json.loads(out)


@pytest.fixture
def series_file(tmp_path):
    R, B = build_unramified(5, 3, 6)
    N = 12
    h = L.one(R, N)
    for k, e, r in [(1, 1, 0), (2, 5, 1), (3, 2, 2), (5, 1, 1)]:
        h = h * (1 - L.monomial(R, k, N, R.zeta_power(r))) ** e
    f = h.q_dlog()
    path = tmp_path / "f.txt"
    path.write_text("# sample\n" + seriesfile.dumps(f))
    return path, f, B


def test_tate_j_example():
    code, out, _ = run("tate", "j", "--prec", "3")
    assert code == 0
    assert out.strip() == "q^-1 + 744 + 196884 q"


def test_tate_json_schema():
    d = run_json("tate", "a4", "--prec", "4")
    assert set(d) == {"command", "params", "result", "precision"}
    assert d["command"] == "tate a4"
    assert d["params"]["prec"] == 4 and d["precision"] == {"terms": 4}


def test_zeta_admissible_example():
    code, out, _ = run("zeta", "admissible", "--n", "5", "--p", "19")
    assert code == 0 and out.startswith("false")
    assert run_json("zeta", "admissible", "--n", "5", "--p", "19")["result"]["admissible"] is False


def test_zeta_count_and_weil0():
    d = run_json("zeta", "count", "--n", "3", "--l", "7")["result"]
    assert d["nu_surface"] == 7**2 + 10 * 7 + 1 and d["weil_bound_ok"]
    w = run_json("zeta", "weil0", "--n", "11", "--l", "13", "--sign", "-1")["result"]
    assert w["matches_claim"] is True


@pytest.mark.parametrize("argv", [
    ["tate", "j", "--prec", "0"],
    ["tate", "x"],
    ["zeta", "count", "--n", "3"],
    ["zeta", "admissible", "--n", "9", "--p", "11"],
    ["eisenstein", "--abc", "3,2,1"],
    ["eisenstein", "--abc", "1,2"],
    ["surface", "table", "--n", "7", "--p", "11", "--cusp", "9"],
    ["surface", "table", "--n", "7", "--p", "11", "--cusp", "1", "--cusp", "2"],
    ["surface", "table", "--n", "7", "--p", "7"],
    ["pair", "--spec", "/nonexistent.json"],
    ["tate", "j", "--threads", "0"],
    [],
])
def test_validation_errors_exit_2(argv):
    code, out, err = run(*argv)
    assert code == 2
    assert out == "" and err


def test_internal_error_exit_1(monkeypatch):
    def boom(args, out):
        raise AssertionError("broken invariant")
    monkeypatch.setattr(cli, "cmd_tate", boom)
    code, _, err = run("tate", "j")
    assert code == 1 and "broken invariant" in err


def test_threads_env(monkeypatch):
    monkeypatch.setenv(cli.THREADS_ENV, "3")
    assert run_json("tate", "j", "--prec", "2")["params"]["threads"] == 3
    monkeypatch.setenv(cli.THREADS_ENV, "many")
    assert run("tate", "j")[0] == 2


def test_phi_decompose_round_trip(series_file, tmp_path):
    path, f, B = series_file
    d = run_json("phi", "decompose", "--input", str(path), "--p", "5", "--root-order", "3")
    back = tmp_path / "back.txt"
    back.write_text(d["result"]["resummed"])
    sf = seriesfile.parse(back.read_text())
    assert seriesfile.to_series(sf, f.ring) == f
    assert d["result"]["basis_exponents"] == list(B.exponents)
    dec = decompose(f, B)
    assert d["result"]["a"] == {str(k): v for k, v in dec.a.items()}


def test_phi_kernel(series_file):
    path, f, B = series_file
    d = run_json("phi", "kernel", "--input", str(path), "--p", "5", "--root-order", "3")
    assert d["result"]["in_kernel"] == in_theorem_A_kernel(decompose(f, B))
    code, _, err = run("phi", "kernel", "--input", str(path), "--p", "7", "--root-order", "3")
    assert code == 2 and "header" in err


def test_series_file_errors(tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("p 5\nnu 2\nd 1\nmodulus 0 1\nprec 3\n0 1\n0 2\n")
    code, _, err = run("phi", "kernel", "--input", str(bad), "--p", "5", "--root-order", "1")
    assert code == 2 and "repeated" in err
    with pytest.raises(seriesfile.SeriesFormatError):
        seriesfile.parse("p 5\nnu 2\nd 1\nmodulus 0 1\n")
    with pytest.raises(seriesfile.SeriesFormatError):
        seriesfile.parse("p 5\nnu 2\nd 2\nmodulus 0 1\nprec 3\n")
    with pytest.raises(seriesfile.SeriesFormatError):
        seriesfile.parse("p 5\nnu 2\nd 1\nmodulus 0 1\nprec 3\n3 1\n")


def _parse_text_tables(text):
    """Rows of the aligned text tables, keyed by (section, row label, k)."""
    out, section, ks = {}, -1, []
    for line in text.splitlines():
        if line.startswith("b-i |") or line.startswith("r |"):
            if line.startswith("b-i") and not out.get(("sec", "f")):
                section, out[("sec", "f")] = "f", True
            elif line.startswith("r"):
                section = "g"
            ks = [int(block.split()[0].split("_")[1]) for block in line.split("|")[1:]]
            continue
        if "|" in line and not line.startswith("#"):
            parts = line.split("|")
            label = parts[0].strip()
            for k, block in zip(ks, parts[1:]):
                out[(section, label, k)] = [int(x) for x in block.split()]
    return out


def test_surface_table_matches_reference_tables():
    code, text, _ = run("surface", "table", "--n", "7", "--p", "11", "--cusp", "1")
    assert code == 0
    ref = json.loads((DATA / "tables_n7_p11.json").read_text())
    got = _parse_text_tables(text)
    for sec in ("f", "g"):
        for row, by_k in ref[sec].items():
            for k, vals in by_k.items():
                assert got[(sec, row, int(k))] == vals, (sec, row, k)
    assert "K_max=44" in text and "nu=4" in text and "N=52" in text


def test_surface_table_json_matches_text():
    d = run_json("surface", "table", "--n", "7", "--p", "11")
    ref = json.loads((DATA / "tables_n7_p11.json").read_text())
    ft = d["result"]["f_table"]
    assert ft["row_labels"] == [1, 2, 3, 4, 5, 6, 0]
    assert d["precision"] == {"K_max": 44, "N": 52, "nu": 4}
    assert d["result"]["admissible"] is True
    assert ref["modulus"] == 121


def test_surface_rank_bound():
    d = run_json("surface", "rank-bound", "--n", "7", "--p", "11")["result"]
    assert (d["upper_bound"], d["lower_bound"]) == (2, 2)


def test_pair_spec(tmp_path):
    spec = {"ring": {"p": 11, "nu": 4}, "prec": 8, "period": 1,
            "f": {"kind": "rational", "const": 1, "roots": [[2, 1]]},
            "g": {"kind": "theta", "const": 3, "u_power": 0, "theta": []}}
    path = tmp_path / "s.json"
    path.write_text(json.dumps(spec))
    d = run_json("pair", "--spec", str(path))
    assert d["precision"] == {"N": 8, "period": 1}
    spec["ring"] = "ZZ"
    path.write_text(json.dumps(spec))
    assert run("pair", "--spec", str(path))[0] == 2


def test_eisenstein_check():
    d = run_json("eisenstein", "--abc", "1,2,3", "--prec", "10", "--check")["result"]
    assert d["agrees"] and d["value"]["order"] == -1


def test_hecke_apply(tmp_path):
    spec = {"level": 5, "weight": 3, "root_order": 4,
            "character": {"generator": 2, "value": [0, 1]},
            "coeffs": [[n % 3, n % 2] for n in range(12)]}
    path = tmp_path / "h.json"
    path.write_text(json.dumps(spec))
    d = run_json("hecke", "apply", "--m", "2", "--input", str(path))
    assert d["result"]["bound"] == 6 and len(d["result"]["coeffs"]) == 6
    assert run("hecke", "apply", "--m", "13", "--input", str(path))[0] == 2
    del spec["level"]
    path.write_text(json.dumps(spec))
    assert run("hecke", "apply", "--m", "2", "--input", str(path))[0] == 2


@pytest.mark.parametrize("argv", [
    ["tate", "j", "--prec", "12"],
    ["surface", "table", "--n", "5", "--p", "7", "--json"],
    ["zeta", "weil0", "--n", "13", "--l", "5", "--sign", "1", "--json"],
])
def test_deterministic_output(argv):
    outs = [subprocess.run([sys.executable, "-m", "k2tate", *argv], capture_output=True,
                           env={**os.environ, "PYTHONHASHSEED": str(seed)}).stdout
            for seed in (1, 2)]
    assert outs[0] == outs[1] and outs[0]
