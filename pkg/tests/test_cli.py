import csv

import pytest

from relaycap.analytic import (
    capacity_direct_only,
    capacity_full_csi,
    capacity_gain_iid,
    capacity_partial_csi,
)
from relaycap.channel import preset_fig3
from relaycap.cli import (
    EXIT_IO,
    EXIT_OK,
    EXIT_SPEC,
    CustomMeans,
    SweepSpec,
    SweepSpecError,
    load_spec_file,
    main,
    run_sweep,
)
from relaycap.montecarlo import SimulationPlan, estimate_capacity


def read_rows(path):
    with open(path) as handle:
        return list(csv.DictReader(handle))


def test_grid_arithmetic():
    spec = SweepSpec(0.0, 30.0, 5.0, output_path="x.csv")
    assert spec.grid() == [0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0]
    single = SweepSpec(10.0, 10.0, 5.0, output_path="x.csv")
    assert single.grid() == [10.0]


def test_sweep_row_count_and_schema(tmp_path):
    out = tmp_path / "sweep.csv"
    spec = SweepSpec(
        0.0,
        30.0,
        5.0,
        preset="fig3",
        relay_count=2,
        schemes=("full", "partial", "direct"),
        methods=("analytic", "montecarlo"),
        samples=2000,
        seed=11,
        output_path=str(out),
    )
    run_sweep(spec)
    rows = read_rows(out)
    assert len(rows) == 7 * 3 * 2
    assert list(rows[0]) == [
        "snr_db",
        "preset",
        "relay_count",
        "scheme",
        "method",
        "capacity_bps_hz",
        "std_error",
        "samples",
        "seed",
    ]
    for row in rows:
        if row["method"] == "montecarlo":
            assert row["std_error"] != "" and row["samples"] == "2000" and row["seed"] == "11"
        else:
            assert row["std_error"] == "" and row["samples"] == "" and row["seed"] == ""


def test_csv_roundtrips_module_values(tmp_path):
    out = tmp_path / "sweep.csv"
    spec = SweepSpec(
        10.0,
        20.0,
        10.0,
        preset="fig3",
        relay_count=2,
        schemes=("full", "partial", "direct"),
        methods=("analytic", "montecarlo"),
        samples=5000,
        seed=3,
        output_path=str(out),
    )
    run_sweep(spec)
    analytic_fns = {
        "full": capacity_full_csi,
        "partial": capacity_partial_csi,
        "direct": capacity_direct_only,
    }
    for row in read_rows(out):
        config = preset_fig3(10.0 ** (float(row["snr_db"]) / 10.0), 2)
        if row["method"] == "analytic":
            expected = analytic_fns[row["scheme"]](config)
        else:
            expected = estimate_capacity(SimulationPlan(config, row["scheme"], 5000, 3))
            assert float(row["std_error"]) == expected.std_error
        assert float(row["capacity_bps_hz"]) == expected.value


def test_gain_file(tmp_path):
    out = tmp_path / "gain.csv"
    code = main(["--snr-db", "0:25:5", "--gain", "--output", str(out)])
    assert code == EXIT_OK
    rows = read_rows(out)
    assert [float(r["snr_db"]) for r in rows] == [0.0, 5.0, 10.0, 15.0, 20.0, 25.0]
    assert float(rows[0]["delta_c_exact"]) == capacity_gain_iid(1.0)
    assert float(rows[-1]["delta_c_exact"]) == pytest.approx(0.779064060632323, rel=1e-12)
    exact = [float(r["delta_c_exact"]) for r in rows]
    assert all(b > a for a, b in zip(exact, exact[1:]))


def test_gain_rejects_other_presets(tmp_path):
    out = tmp_path / "gain.csv"
    code = main(
        ["--snr-db", "0:10:5", "--gain", "--preset", "fig3", "--relays", "2",
         "--output", str(out)]
    )
    assert code == EXIT_SPEC
    assert not out.exists()


def test_validation_failures_write_nothing(tmp_path):
    out = tmp_path / "sweep.csv"
    assert main(["--snr-db", "0:10:0", "--output", str(out)]) == EXIT_SPEC
    assert main(["--snr-db", "10:0:5", "--output", str(out)]) == EXIT_SPEC
    assert main(["--snr-db", "0:10:5", "--scheme", "warp", "--output", str(out)]) == EXIT_SPEC
    assert main(["--snr-db", "0:10:5"]) == EXIT_SPEC  # no output path
    assert not out.exists()


def test_io_failure_exit_code(tmp_path):
    missing_dir = tmp_path / "no" / "such" / "dir" / "out.csv"
    code = main(["--snr-db", "0:5:5", "--method", "analytic", "--output", str(missing_dir)])
    assert code == EXIT_IO


def test_all_keyword_expansion(tmp_path):
    out = tmp_path / "sweep.csv"
    code = main(
        ["--snr-db", "0:0:1", "--scheme", "all", "--method", "analytic,quadrature",
         "--output", str(out)]
    )
    assert code == EXIT_OK
    rows = read_rows(out)
    assert {(r["scheme"], r["method"]) for r in rows} == {
        (s, m) for s in ("full", "partial", "direct") for m in ("analytic", "quadrature")
    }


def test_quadrature_and_analytic_rows_agree(tmp_path):
    out = tmp_path / "sweep.csv"
    main(
        ["--preset", "fig3", "--relays", "2", "--snr-db", "10:10:1", "--scheme", "all",
         "--method", "analytic,quadrature", "--output", str(out)]
    )
    values = {}
    for row in read_rows(out):
        values.setdefault(row["scheme"], {})[row["method"]] = float(row["capacity_bps_hz"])
    for scheme, by_method in values.items():
        assert by_method["quadrature"] == pytest.approx(by_method["analytic"], rel=1e-6)


def test_config_file_with_flag_override(tmp_path):
    config_file = tmp_path / "sweep.conf"
    unused = tmp_path / "from_file.csv"
    config_file.write_text(
        "# iid sweep\n"
        "snr_db_start = 0\n"
        "snr_db_stop = 10\n"
        "snr_db_step = 5\n"
        "preset = iid\n"
        "relay_count = 1\n"
        "schemes = full,partial\n"
        "methods = analytic\n"
        f"output_path = {unused}\n"
    )
    out = tmp_path / "actual.csv"
    code = main(["--config", str(config_file), "--output", str(out)])
    assert code == EXIT_OK
    assert out.exists() and not unused.exists()
    rows = read_rows(out)
    assert len(rows) == 3 * 2
    assert {r["scheme"] for r in rows} == {"full", "partial"}


def test_config_file_unknown_key(tmp_path):
    config_file = tmp_path / "sweep.conf"
    config_file.write_text("snr_start = 0\n")
    with pytest.raises(SweepSpecError):
        load_spec_file(str(config_file))


def test_custom_preset(tmp_path):
    out = tmp_path / "sweep.csv"
    code = main(
        ["--preset", "custom", "--relays", "2", "--custom-means", "100,50;50,25;1",
         "--snr-db", "0:0:1", "--method", "analytic", "--scheme", "full",
         "--output", str(out)]
    )
    assert code == EXIT_OK
    row = read_rows(out)[0]
    expected = capacity_full_csi(preset_fig3(100.0, 2)).value
    assert float(row["capacity_bps_hz"]) == expected


def test_custom_means_required_iff_custom_preset():
    spec = SweepSpec(0.0, 0.0, 1.0, preset="custom", output_path="x.csv")
    with pytest.raises(SweepSpecError):
        spec.validate()
    spec = SweepSpec(
        0.0,
        0.0,
        1.0,
        preset="iid",
        custom_means=CustomMeans((1.0,), (1.0,), 1.0),
        output_path="x.csv",
    )
    with pytest.raises(SweepSpecError):
        spec.validate()


def test_montecarlo_rows_deterministic_across_workers(tmp_path):
    args = [
        "--preset", "fig3", "--relays", "2", "--snr-db", "0:10:5",
        "--scheme", "all", "--method", "montecarlo", "--samples", "30000",
        "--seed", "99",
    ]
    out1 = tmp_path / "w1.csv"
    out4 = tmp_path / "w4.csv"
    assert main(args + ["--workers", "1", "--output", str(out1)]) == EXIT_OK
    assert main(args + ["--workers", "4", "--output", str(out4)]) == EXIT_OK
    assert out1.read_bytes() == out4.read_bytes()
