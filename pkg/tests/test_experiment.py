import csv
import io
import json
from fractions import Fraction

import numpy as np
import pytest

import markovsim as ms
from markovsim import cli
from markovsim.experiment import (
    CSV_COLUMNS,
    ErrorEstimate,
    ExperimentConfig,
    emit,
    run_experiment,
    validate_config,
    wilson_interval,
)


def test_wilson_interval_values():
    lo, hi = wilson_interval(0, 100)
    assert lo == 0.0 and hi == pytest.approx(0.0369948075, abs=1e-9)
    lo, hi = wilson_interval(5, 10)
    assert lo == pytest.approx(0.2365895936, abs=1e-9)
    assert hi == pytest.approx(0.7634104064, abs=1e-9)
    assert lo + hi == pytest.approx(1.0)  # symmetric at p_hat = 1/2
    lo, hi = wilson_interval(100, 100)
    assert hi == pytest.approx(1.0) and lo == pytest.approx(0.9630051925, abs=1e-9)


def test_wilson_interval_validation():
    with pytest.raises(ValueError):
        wilson_interval(1, 0)
    with pytest.raises(ValueError):
        wilson_interval(5, 4)
    with pytest.raises(ValueError):
        wilson_interval(-1, 4)


def test_config_validation():
    with pytest.raises(ValueError):
        ExperimentConfig((16,), (0.0,), "schemeX", "identity", 10)
    with pytest.raises(ValueError):
        ExperimentConfig((16,), (0.0,), "baseline", "identity", 0)
    with pytest.raises(ValueError):
        ExperimentConfig((), (0.0,), "baseline", "identity", 1)
    with pytest.raises(ValueError):
        ExperimentConfig((16,), (), "baseline", "identity", 1)


def test_config_fixed_protocols_pin_length():
    protos = tuple(ms.gen_uniform_protocol(12, s) for s in range(3))
    cfg = ExperimentConfig((999,), (0.0,), "baseline", "identity", 2, protocols=protos)
    assert cfg.n_values == (12,)
    mixed = protos + (ms.gen_uniform_protocol(8, 9),)
    with pytest.raises(ValueError):
        ExperimentConfig((999,), (0.0,), "baseline", "identity", 2, protocols=mixed)


def test_rate_rejection_messages():
    cfg = ExperimentConfig((16,), (0.4,), "baseline", "rep3", 1)
    with pytest.raises(ValueError, match="0.029049"):
        validate_config(cfg)
    cfg = ExperimentConfig((16,), (0.05,), "baseline", "identity", 1)
    with pytest.raises(ValueError, match="1 - h"):
        validate_config(cfg)
    # noiseless runs are exempt from the capacity check
    validate_config(ExperimentConfig((16,), (0.0,), "baseline", "identity", 1))


def test_noiseless_experiment_rows():
    cfg = ExperimentConfig((16, 32), (0.0,), "baseline", "identity", 4, seed=1)
    rows = run_experiment(cfg)
    assert [r.n for r in rows] == [16, 32]
    for r in rows:
        assert r.failures == 0 and r.p_hat == 0.0
        assert r.lemma1_bound == 0.0 and r.capacity == 1.0
        assert r.mean_rate == pytest.approx(2 / 3)
        assert r.wilson_lo == 0.0 and r.wilson_hi < 1.0


def test_scheme2_mean_rate_with_m_override():
    cfg = ExperimentConfig(
        (16,), (0.0,), "scheme2", "identity", 5, seed=2, m_override=4
    )
    rows = run_experiment(cfg)
    assert rows[0].mean_rate == pytest.approx(32 / 60)


def test_experiment_is_reproducible():
    cfg = ExperimentConfig((16,), (0.1,), "scheme2", "rep3", 30, seed=3)
    a, b = run_experiment(cfg), run_experiment(cfg)
    assert a == b
    assert emit(a, "csv") == emit(b, "csv")


def test_noisy_cell_is_coherent():
    cfg = ExperimentConfig((16,), (0.1,), "baseline", "rep3", 50, seed=4)
    row = run_experiment(cfg)[0]
    assert 0 < row.failures <= 50
    assert row.wilson_lo <= row.p_hat <= row.wilson_hi
    assert row.capacity == pytest.approx(ms.shannon_capacity(0.1))
    assert row.lemma1_bound > 0


def test_csv_emit_shape():
    rows = run_experiment(ExperimentConfig((8,), (0.0,), "scheme1", "identity", 2))
    text = emit(rows, "csv")
    assert text.startswith(
        "n,epsilon,scheme,code,trials,failures,p_hat,wilson_lo,wilson_hi,"
        "mean_rate,capacity,lemma1_bound\n"
    )
    parsed = list(csv.DictReader(io.StringIO(text)))
    assert len(parsed) == 1
    assert parsed[0]["scheme"] == "scheme1" and parsed[0]["n"] == "8"


def test_json_emit_round_trip():
    rows = run_experiment(ExperimentConfig((8,), (0.0,), "scheme2", "identity", 2))
    data = json.loads(emit(rows, "json"))
    assert len(data) == 1 and set(data[0]) == set(CSV_COLUMNS)
    assert data[0]["p_hat"] == 0.0
    with pytest.raises(ValueError):
        emit(rows, "yaml")


def test_rlc_without_seed_draws_fresh_codes():
    cfg = ExperimentConfig(
        (16,), (0.0,), "baseline", "rlc:k=4,rate=1/2", 3, seed=5
    )
    rows = run_experiment(cfg)
    assert rows[0].failures == 0  # noiseless: any drawn code decodes exactly


# ---------------------------------------------------------------------------
# command line


def run_cli(args, capsys):
    rc = cli.main(args)
    out = capsys.readouterr()
    return rc, out.out, out.err


def test_cli_csv_to_stdout(capsys):
    rc, out, err = run_cli(
        ["--n", "8", "--eps", "0", "--scheme", "baseline", "--trials", "2"], capsys
    )
    assert rc == 0 and err == ""
    assert out.startswith("n,epsilon,")
    assert out.count("\n") == 2


def test_cli_multi_cell_grid(capsys):
    rc, out, _ = run_cli(
        ["--n", "8,16", "--eps", "0.0,0.1", "--code", "rep3", "--trials", "2"],
        capsys,
    )
    assert rc == 0
    assert out.count("\n") == 5  # header + 2x2 cells


def test_cli_json_to_file(tmp_path, capsys):
    target = tmp_path / "rows.json"
    rc, out, _ = run_cli(
        ["--n", "8", "--trials", "2", "--format", "json", "--out", str(target)],
        capsys,
    )
    assert rc == 0 and out == ""
    assert json.loads(target.read_text())[0]["n"] == 8


def test_cli_rejects_bad_code(capsys):
    rc, _, err = run_cli(["--code", "rep2"], capsys)
    assert rc == 2 and err.startswith("markovsim:")


def test_cli_rejects_rate_above_capacity(capsys):
    rc, _, err = run_cli(["--eps", "0.4", "--code", "rep3", "--trials", "1"], capsys)
    assert rc == 2 and "0.029049" in err


def test_cli_missing_protocol_file(capsys):
    rc, _, err = run_cli(["--protocol-file", "/nonexistent/xyz"], capsys)
    assert rc == 2


def test_cli_protocol_file(tmp_path, capsys):
    lines = []
    for seed in range(3):
        p = ms.gen_uniform_protocol(12, seed)
        lines.append(ms.serialize_protocol(p))
    src = tmp_path / "protos.txt"
    src.write_text("\n".join(lines) + "\n")
    rc, out, _ = run_cli(
        ["--protocol-file", str(src), "--n", "999", "--scheme", "scheme2",
         "--trials", "6"],
        capsys,
    )
    assert rc == 0
    row = list(csv.DictReader(io.StringIO(out)))[0]
    assert row["n"] == "12" and row["failures"] == "0"


def test_cli_m_override(capsys):
    rc, out, _ = run_cli(
        ["--n", "16", "--scheme", "scheme2", "--m-override", "4", "--trials", "3"],
        capsys,
    )
    assert rc == 0
    row = list(csv.DictReader(io.StringIO(out)))[0]
    assert float(row["mean_rate"]) == pytest.approx(32 / 60)
