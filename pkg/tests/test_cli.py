from pathlib import Path

import msgspec
import pytest

from lorentzgas.cli import main
from lorentzgas.serialization import read_curve, read_table

FPL_ARGS = ["--dim", "2", "--radius", "0.1", "--samples", "5000", "--t-grid", "geometric:0.1:100:40"]


@pytest.fixture(scope="module")
def pipeline(tmp_path_factory: pytest.TempPathFactory) -> Path:
    root = tmp_path_factory.mktemp("pipeline")
    assert main(["fpl", *FPL_ARGS, "--seed", "7", "--out", str(root / "fpl.csv")]) == 0
    assert main(["tail-check", "--curve", str(root / "fpl.csv"), "--out", str(root / "tail.json")]) == 0
    assert (
        main(
            [
                "boltzmann",
                "--nodes",
                "8",
                "--modes",
                "2",
                "--t-final",
                "10",
                "--t-count",
                "21",
                "--out-prefix",
                str(root / "lb"),
            ]
        )
        == 0
    )
    return root


def test_fpl_writes_curve(pipeline: Path) -> None:
    curve = read_curve(pipeline / "fpl.csv")
    assert len(curve.times) == 40  # noqa: PLR2004
    assert curve.n_samples == 5000  # noqa: PLR2004
    assert curve.seed == 7  # noqa: PLR2004
    assert curve.survival[0] > curve.survival[-1] > 0


def test_fpl_is_reproducible(pipeline: Path, tmp_path: Path) -> None:
    out = tmp_path / "again.csv"
    assert main(["fpl", *FPL_ARGS, "--seed", "7", "--threads", "3", "--out", str(out)]) == 0
    assert out.read_bytes() == (pipeline / "fpl.csv").read_bytes()


def test_missing_flag_is_usage_error(tmp_path: Path) -> None:
    with pytest.raises(SystemExit) as exc_info:
        main(["fpl", "--dim", "2", "--out", str(tmp_path / "x.csv")])
    assert exc_info.value.code == 2  # noqa: PLR2004


def test_version() -> None:
    with pytest.raises(SystemExit) as exc_info:
        main(["--version"])
    assert exc_info.value.code == 0


def test_invalid_radius_fails(tmp_path: Path) -> None:
    out = tmp_path / "x.csv"
    args = ["fpl", "--dim", "2", "--radius", "0.7", "--samples", "10", "--t-grid", "linear:0:1:3"]
    assert main([*args, "--out", str(out)]) == 1
    assert not out.exists()


def test_poisson_fpl(tmp_path: Path) -> None:
    out = tmp_path / "poisson.csv"
    args = ["--dim", "2", "--radius", "0.1", "--samples", "2000", "--t-grid", "linear:0:10:11"]
    assert main(["poisson-fpl", *args, "--out", str(out)]) == 0
    curve = read_curve(out)
    assert curve.kind == "poisson"
    assert curve.intensity is not None
    assert curve.survival[0] == 1.0


def test_tail_check_report(pipeline: Path) -> None:
    report = msgspec.json.decode((pipeline / "tail.json").read_bytes())
    assert report["D"] == 2  # noqa: PLR2004
    assert report["r"] == 0.1  # noqa: PLR2004
    assert report["window"] == [20.0, 100.0]
    assert report["c_low"] > 0
    assert report["run"]["command"] == "tail-check"


def test_tail_check_malformed_curve(tmp_path: Path) -> None:
    curve = tmp_path / "bad.csv"
    curve.write_text("t,phi\n1,2\n")
    assert main(["tail-check", "--curve", str(curve), "--out", str(tmp_path / "tail.json")]) == 1


def test_boltzmann_outputs(pipeline: Path) -> None:
    _, header, rows = read_table((pipeline / "lb_decay.csv").read_bytes())
    assert header == ["t", "l2_distance"]
    assert len(rows) == 21  # noqa: PLR2004

    spectrum = msgspec.json.decode((pipeline / "lb_spectrum.json").read_bytes())
    assert spectrum["N"] == 8  # noqa: PLR2004
    assert spectrum["M"] == 2  # noqa: PLR2004

    fit = msgspec.json.decode((pipeline / "lb_fit.json").read_bytes())
    assert fit["N"] == 8  # noqa: PLR2004
    assert fit["gamma_fit"] > 0


def test_certify_from_files(pipeline: Path, tmp_path: Path) -> None:
    out = tmp_path / "certificate.json"
    args = [
        "certify",
        "--tail-json",
        str(pipeline / "tail.json"),
        "--decay-json",
        str(pipeline / "lb_fit.json"),
        "--r-star",
        "0.2",
        "--out",
        str(out),
    ]
    assert main(args) == 0
    report = msgspec.json.decode(out.read_bytes())
    assert report["C1_emp"] > 0
    assert report["r_star"] == 0.2  # noqa: PLR2004
    assert report["provenance"]["seeds"] == [7, 0]


def test_certify_rejects_uncoupled_r_star(pipeline: Path, tmp_path: Path) -> None:
    args = [
        "certify",
        "--tail-json",
        str(pipeline / "tail.json"),
        "--decay-json",
        str(pipeline / "lb_fit.json"),
        "--r-star",
        "0.25",
        "--out",
        str(tmp_path / "certificate.json"),
    ]
    assert main(args) == 1


def test_certify_rejects_dimension_mismatch(pipeline: Path, tmp_path: Path) -> None:
    decay = msgspec.json.decode((pipeline / "lb_fit.json").read_bytes())
    decay["D"] = 3
    decay_path = tmp_path / "decay3.json"
    decay_path.write_bytes(msgspec.json.encode(decay))
    args = [
        "certify",
        "--tail-json",
        str(pipeline / "tail.json"),
        "--decay-json",
        str(decay_path),
        "--out",
        str(tmp_path / "certificate.json"),
    ]
    assert main(args) == 1


def test_certify_needs_inputs(tmp_path: Path) -> None:
    assert main(["certify", "--out", str(tmp_path / "certificate.json")]) == 1


def test_two_scale(tmp_path: Path) -> None:
    out = tmp_path / "two_scale.json"
    assert main(["two-scale", "--n", "4", "--grid-size", "32", "--out", str(out)]) == 0
    report = msgspec.json.decode(out.read_bytes())
    assert report["run"]["command"] == "two-scale"
    assert main(["two-scale", "--n", "4", "--grid-size", "30", "--out", str(out)]) == 1


def test_trace_records_collision(tmp_path: Path) -> None:
    out = tmp_path / "trace.csv"
    args = ["trace", "--radius", "0.1", "--x", "0.5,0", "--v", "1,0", "--t", "0.8", "--out", str(out)]
    assert main(args) == 0
    _, header, rows = read_table(out.read_bytes())
    assert header == ["t", "x1", "x2", "v1", "v2", "event"]
    assert [row[-1] for row in rows] == ["start", "collision", "end"]
    collision = [float(cell) for cell in rows[1][:-1]]
    assert collision[0] == pytest.approx(0.4)
    assert collision[1:3] == pytest.approx([0.9, 0.0])
    assert collision[3:5] == pytest.approx([-1.0, 0.0])
    end = [float(cell) for cell in rows[2][:-1]]
    assert end[1:3] == pytest.approx([0.5, 0.0], abs=1e-12)


def test_trace_rejects_start_inside_obstacle(tmp_path: Path) -> None:
    args = ["trace", "--radius", "0.1", "--x", "0.05,0", "--v", "1,0", "--t", "1"]
    assert main([*args, "--out", str(tmp_path / "trace.csv")]) == 1


def test_certify_full_rejects_zero_radius(tmp_path: Path) -> None:
    out = tmp_path / "certificate.json"
    assert main(["certify", "--full", "--radius", "0", "--out", str(out)]) == 1
    assert not out.exists()


def test_certify_rejects_zero_r_star(pipeline: Path, tmp_path: Path) -> None:
    args = [
        "certify",
        "--tail-json",
        str(pipeline / "tail.json"),
        "--decay-json",
        str(pipeline / "lb_fit.json"),
        "--r-star",
        "0",
        "--out",
        str(tmp_path / "certificate.json"),
    ]
    assert main(args) == 1
