import json

import pytest

from symrank.cli import main
from symrank.errors import BudgetExceeded, DidNotConverge, InputError, UnsupportedField
from symrank.fields import GF3
from symrank.instances import generate
from symrank.tensor import Decomposition, term


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, (json.loads(out) if out.strip() else None), err


def write(tmp_path, name, obj):
    path = tmp_path / name
    path.write_text(json.dumps(obj))
    return path


def gen(capsys, tmp_path, *argv):
    code, obj, _ = run(capsys, "generate", *argv)
    assert code == 0
    return write(tmp_path, "t.json", obj)


def test_z2_counterexample(capsys, tmp_path):
    path = gen(capsys, tmp_path, "z2-counterexample")
    code, rep, err = run(capsys, "analyze", path)
    assert code == 0
    assert rep["rank_a"] == 2
    assert rep["rank"] == {"value": 2, "method": "exhaustive"}
    assert rep["srank"] == {"value": 3, "method": "exhaustive"}
    assert "srank=3" in err


def test_w_tensor_complex(capsys, tmp_path):
    path = gen(capsys, tmp_path, "w-tensor", "--field", "complex128")
    _, rep, _ = run(capsys, "analyze", path)
    assert rep["rank_a"] == 2
    assert rep["pencil"]["rank_le_2"] is False
    assert rep["border"]["x"] == [1.0, 0.0] and rep["border"]["b"] == 1.0
    code, out, _ = run(capsys, "border", path, "--eps", "0.1", "0.01")
    assert code == 0
    assert out["form"]["y"] == [0.0, 1.0]
    assert out["curve"][1]["error"] == pytest.approx(0.017320797, rel=1e-6)


def test_zero_tensor(capsys, tmp_path):
    path = write(tmp_path, "z.json", {"order": 3, "dim": 2, "field": "gf3", "entries": [0] * 8})
    _, rep, _ = run(capsys, "analyze", path)
    assert rep["rank_a"] == 0 and rep["rank"]["value"] == 0 and rep["srank"]["value"] == 0


def test_census(capsys):
    code, rep, _ = run(capsys, "census", "--field", "gf2", "--d", 3, "--n", 2)
    assert code == 0
    assert rep["total"] == 16 and rep["expressible_nonzero"] == 7


def test_decompose(capsys, tmp_path):
    path = write(tmp_path, "r.json", {"order": 3, "dim": 2, "field": "rational", "entries": ["2", "1", "1", "1", "1", "1", "1", "0"]})
    code, out, err = run(capsys, "decompose", path)
    assert code == 0
    assert out["trace"][0]["case"] == "1"
    assert len(out["decomposition"]["terms"]) == 3


def test_sweep_progress_and_gate(capsys):
    code, rep, err = run(capsys, "sweep", "rank2eq", "--field", "gf3", "--d", 3, "--n", 2)
    assert code == 0 and rep["ok"] and rep["examined"] == 81
    assert "tensors" in err and "/s" in err
    _, rep, err = run(capsys, "sweep", "maintheo", "--field", "gf2", "--d", 3, "--n", 2)
    assert rep["precondition_met"] is False
    code, _, err = run(capsys, "sweep", "rank2eq", "--field", "gf3", "--d", 3, "--n", 3)
    assert code == 2 and "--seed" in err


def test_approx_requires_seed_and_is_deterministic(capsys, tmp_path):
    path = gen(capsys, tmp_path, "random-sym", "--field", "float64", "--d", 3, "--n", 3, "--seed", 4)
    code, _, err = run(capsys, "approx", path)
    assert code == 2
    _, first, _ = run(capsys, "approx", path, "--seed", 1, "--restarts", 4)
    _, second, _ = run(capsys, "approx", path, "--seed", 1, "--restarts", 4)
    assert first == second
    assert first["banach"]["difference"] >= -1e-8


def test_generate_is_deterministic(capsys):
    args = ("generate", "random-sym", "--field", "gf5", "--d", 3, "--n", 2, "--seed", 9)
    assert run(capsys, *args)[1] == run(capsys, *args)[1]


def test_certify(capsys, tmp_path):
    dec = Decomposition([term([[1, 0], [1, 0], [1, 0]], GF3), term([[0, 1], [0, 1], [0, 1]], GF3)], GF3, 3, 2)
    path = write(tmp_path, "t.json", dec.reconstruct().to_json())
    cert = write(tmp_path, "c.json", dec.to_json())
    _, rep, _ = run(capsys, "analyze", path, "--certify", cert)
    assert rep["certificate"]["unique"] is True
    assert rep["rank"]["value"] == 2
    other = write(tmp_path, "o.json", Decomposition(dec.terms[:1], GF3, 3, 2).to_json())
    code, _, _ = run(capsys, "analyze", path, "--certify", other)
    assert code == 2


def test_out_flag(capsys, tmp_path):
    out = tmp_path / "census.json"
    code, printed, _ = run(capsys, "census", "--field", "gf2", "--d", 2, "--n", 2, "--out", out)
    assert code == 0 and printed is None
    assert json.loads(out.read_text())["total"] == 8


@pytest.mark.parametrize(
    "argv,code",
    [
        (["census", "--field", "float64", "--d", "3", "--n", "2"], 4),
        (["census", "--field", "gf3", "--d", "4", "--n", "3", "--budget", "10"], 3),
        (["census", "--field", "gf4", "--d", "3", "--n", "2"], 2),
        (["analyze", "/nonexistent.json"], 2),
    ],
)
def test_exit_codes(capsys, argv, code):
    assert run(capsys, *argv)[0] == code


def test_exit_code_scheme():
    assert InputError.exit_code == 2
    assert BudgetExceeded.exit_code == 3
    assert UnsupportedField.exit_code == 4
    assert DidNotConverge.exit_code == 5


def test_unsupported_field_for_numeric_commands(capsys, tmp_path):
    path = gen(capsys, tmp_path, "w-tensor", "--field", "gf5")
    assert run(capsys, "border", path)[0] == 4
    assert run(capsys, "approx", path, "--seed", 0)[0] == 4


def test_analyze_never_reports_srank_below_rank(capsys, tmp_path):
    for seed in range(30):
        t = generate("random-sym", GF3, 3, 2, seed)
        path = write(tmp_path, f"s{seed}.json", t.to_json())
        _, rep, _ = run(capsys, "analyze", path)
        assert rep["srank"]["value"] >= rep["rank"]["value"] >= rep["rank_a"]


def test_pencil_example_parameter(capsys, tmp_path):
    path = gen(capsys, tmp_path, "pencil-example", "--a", "2.5")
    _, rep, _ = run(capsys, "analyze", path)
    assert rep["pencil"]["rank_le_2"] is False
