import json

import pytest

from nmecut.cli import main


def run(capsys, *argv):
    try:
        code = main(list(argv))
    except SystemExit as exc:
        code = exc.code
    out = capsys.readouterr()
    return code, out.out, out.err


def test_verify_passes(capsys):
    code, out, _ = run(capsys, "verify", "--k", "0,0.5,1", "--tol", "1e-10")
    assert code == 0
    assert "harada" in out
    line = next(l for l in out.splitlines() if "k=0.5" in l)
    assert "1.4000" in line


def test_verify_fails_below_float_precision(capsys):
    code, _, err = run(capsys, "verify", "--tol", "1e-30")
    assert code == 2
    assert "deviation" in err


def test_verify_rejects_bad_tolerance(capsys):
    code, _, _ = run(capsys, "verify", "--tol", "0")
    assert code == 1


def _kappa_row(out):
    return [float(x) for x in out.strip().splitlines()[1].split()]


@pytest.mark.parametrize(
    "args, k, kappa, c",
    [(["--k", "1"], 1, 1, 0), (["--robustness", "0.8"], 0.5, 1.4, 0.2), (["--k", "0"], 0, 3, 1)],
)
def test_kappa(capsys, args, k, kappa, c):
    code, out, _ = run(capsys, "kappa", *args)
    assert code == 0
    row = _kappa_row(out)
    assert row[0] == pytest.approx(k, abs=1e-6)
    assert row[2] == pytest.approx(c, abs=1e-6)
    assert row[3] == pytest.approx(kappa, abs=1e-6)


@pytest.mark.parametrize("args", [["--k", "-1"], ["--robustness", "1.5"], ["--k", "abc"]])
def test_kappa_out_of_range(capsys, args):
    code, _, _ = run(capsys, "kappa", *args)
    assert code == 1


def _estimate(out):
    line = next(l for l in out.splitlines() if l.startswith("estimated"))
    return [float(x) for x in line.split("=")[1].split(",")]


def _l2(out):
    return float(next(l for l in out.splitlines() if l.startswith("L2")).split("=")[1])


def test_cut_plus_faithful(capsys):
    code, out, _ = run(capsys, "cut", "--state", "plus", "--k", "1", "--shots", "4096", "--seed", "7")
    assert code == 0
    p = _estimate(out)
    assert abs(p[0] - 0.5) < 0.05


def test_cut_zero_exact(capsys):
    code, out, _ = run(capsys, "cut", "--state", "zero", "--k", "1", "--shots", "100")
    assert code == 0
    assert _estimate(out) == [1.0, 0.0]
    assert "(100, 0, 0)" in out


def test_cut_k0_noisier_than_k1(capsys):
    e = {0: [], 1: []}
    for seed in range(30):
        for k in (0, 1):
            _, out, _ = run(capsys, "cut", "--state", "plus", "--k", str(k), "--shots", "4096", "--seed", str(seed))
            e[k].append(_l2(out))
    assert sum(e[0]) > sum(e[1])


def test_cut_haar_seed_and_bad_spec(capsys):
    code, out, _ = run(capsys, "cut", "--state", "12", "--robustness", "0.6", "--shots", "500")
    assert code == 0 and "k = 0.333333" in out
    code, _, err = run(capsys, "cut", "--state", "bogus")
    assert code == 1 and "--state" in err


def test_unknown_flag_rejected(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["verify", "--nope"])
    assert exc.value.code == 1


def test_sweep_csv_rows(tmp_path, capsys):
    path = tmp_path / "out.csv"
    code, out, _ = run(capsys, "sweep", "--states", "50", "--shots", "1024,4096", "--seed", "1", "-o", str(path))
    assert code == 0
    assert len(path.read_text().splitlines()) == 13
    assert "shots=1024" in out and "shots=4096" in out


def test_sweep_json_and_stdout(tmp_path, capsys):
    path = tmp_path / "out.json"
    code, _, _ = run(capsys, "sweep", "--states", "3", "--shots", "64", "-o", str(path))
    assert code == 0 and len(json.loads(path.read_text())) == 6
    code, out, err = run(capsys, "sweep", "--states", "3", "--shots", "64", "--robustness", "0,1")
    assert code == 0
    assert out.splitlines()[0].startswith("robustness,k,shots")
    assert "shots=64" in err


def test_sweep_byte_identical(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    flags = ["sweep", "--states", "20", "--shots", "256,1024", "--seed", "3"]
    run(capsys, *flags, "-o", str(a))
    run(capsys, *flags, "-o", str(b), "--workers", "2")
    assert a.read_bytes() == b.read_bytes()


def test_sweep_invalid_config(capsys):
    code, _, _ = run(capsys, "sweep", "--states", "0")
    assert code == 1
    code, _, _ = run(capsys, "sweep", "--robustness", "2")
    assert code == 1


@pytest.mark.parametrize("sub, needle", [("verify", "1e-10"), ("sweep", "500"), ("kappa", "0.01"), ("cut", "4096")])
def test_help_shows_defaults(capsys, sub, needle):
    with pytest.raises(SystemExit) as exc:
        main([sub, "--help"])
    assert exc.value.code == 0
    assert needle in capsys.readouterr().out


def test_sweep_help_lists_default_levels(capsys):
    with pytest.raises(SystemExit):
        main(["sweep", "--help"])
    assert "0,0.2,0.4,0.6,0.8,1" in capsys.readouterr().out
