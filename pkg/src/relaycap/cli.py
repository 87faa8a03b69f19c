"""Command-line sweeps over average SNR, emitting CSV.

Sweeps evaluate any subset of the schemes (full, partial, direct) with any
subset of the methods (analytic, montecarlo, quadrature) on a dB grid, one
CSV row per (snr_db, scheme, method).  A gain sweep emits the exact and
high-SNR-approximate full-versus-partial capacity gap for the single-relay
identical-means setup.

Exit codes: 0 success, 2 invalid sweep specification, 3 numerical failure,
4 I/O failure.
"""

from __future__ import annotations

import argparse
import csv
import math
import sys
from dataclasses import dataclass

from .analytic import (
    QUADRATURE,
    CapacityEstimate,
    capacity_direct_only,
    capacity_full_csi,
    capacity_gain_high_snr,
    capacity_gain_iid,
    capacity_partial_csi,
)
from .channel import NetworkConfig, preset_fig3, preset_iid
from .montecarlo import SimulationPlan, estimate_capacity
from .quadrature import (
    QuadratureError,
    capacity_full_csi_quadrature,
    capacity_partial_csi_quadrature,
    expected_log_capacity,
)

PRESETS = ("iid", "fig3", "custom")
SCHEMES = ("full", "partial", "direct")
METHODS = ("analytic", "montecarlo", "quadrature")

CSV_COLUMNS = (
    "snr_db",
    "preset",
    "relay_count",
    "scheme",
    "method",
    "capacity_bps_hz",
    "std_error",
    "samples",
    "seed",
)

EXIT_OK = 0
EXIT_SPEC = 2
EXIT_NUMERICAL = 3
EXIT_IO = 4


class SweepSpecError(ValueError):
    """The sweep specification is inconsistent or incomplete."""


@dataclass(frozen=True)
class CustomMeans:
    first_hop: tuple[float, ...]
    second_hop: tuple[float, ...]
    direct: float


@dataclass(frozen=True)
class SweepSpec:
    snr_db_start: float
    snr_db_stop: float
    snr_db_step: float
    preset: str = "iid"
    relay_count: int = 1
    schemes: tuple[str, ...] = SCHEMES
    methods: tuple[str, ...] = ("analytic",)
    samples: int = 1_000_000
    seed: int = 0
    custom_means: CustomMeans | None = None
    output_path: str = ""
    workers: int = 1

    def validate(self):
        if self.snr_db_step <= 0.0:
            raise SweepSpecError(f"snr_db_step must be > 0, got {self.snr_db_step}")
        if self.snr_db_start > self.snr_db_stop:
            raise SweepSpecError("snr_db_start must not exceed snr_db_stop")
        if self.preset not in PRESETS:
            raise SweepSpecError(f"unknown preset {self.preset!r}")
        if self.relay_count < 1:
            raise SweepSpecError("relay_count must be >= 1")
        if not self.schemes or any(s not in SCHEMES for s in self.schemes):
            raise SweepSpecError(f"schemes must be a non-empty subset of {SCHEMES}")
        if not self.methods or any(m not in METHODS for m in self.methods):
            raise SweepSpecError(f"methods must be a non-empty subset of {METHODS}")
        if self.samples < 1:
            raise SweepSpecError("samples must be >= 1")
        if self.workers < 1:
            raise SweepSpecError("workers must be >= 1")
        if not self.output_path:
            raise SweepSpecError("an output path is required")
        if (self.custom_means is not None) != (self.preset == "custom"):
            raise SweepSpecError("custom_means is required iff preset is 'custom'")
        if self.custom_means is not None:
            if (
                len(self.custom_means.first_hop) != self.relay_count
                or len(self.custom_means.second_hop) != self.relay_count
            ):
                raise SweepSpecError("custom mean lists must match relay_count")

    def grid(self) -> list[float]:
        count = int(math.floor((self.snr_db_stop - self.snr_db_start) / self.snr_db_step + 1e-9))
        return [self.snr_db_start + k * self.snr_db_step for k in range(count + 1)]

    def network_config(self, snr_db: float) -> NetworkConfig:
        scale = 10.0 ** (snr_db / 10.0)
        if self.preset == "iid":
            return preset_iid(scale, self.relay_count)
        if self.preset == "fig3":
            return preset_fig3(scale, self.relay_count)
        means = self.custom_means
        return NetworkConfig(
            relay_count=self.relay_count,
            mean_snr_first_hop=tuple(m * scale for m in means.first_hop),
            mean_snr_second_hop=tuple(m * scale for m in means.second_hop),
            mean_snr_direct=means.direct * scale,
        )


def _fmt(value: float) -> str:
    return f"{value:.17g}"


def _evaluate(spec: SweepSpec, config: NetworkConfig, scheme: str, method: str):
    if method == "analytic":
        return {
            "full": capacity_full_csi,
            "partial": capacity_partial_csi,
            "direct": capacity_direct_only,
        }[scheme](config)
    if method == "quadrature":
        if scheme == "full":
            return capacity_full_csi_quadrature(config)
        if scheme == "partial":
            return capacity_partial_csi_quadrature(config)
        rate = 1.0 / config.mean_snr_direct
        value = expected_log_capacity(lambda x: -math.expm1(-x * rate), 1.0)
        return CapacityEstimate(value, QUADRATURE)
    plan = SimulationPlan(config, scheme, spec.samples, spec.seed)
    return estimate_capacity(plan, workers=spec.workers)


def run_sweep(spec: SweepSpec) -> None:
    """Evaluate the sweep grid and write one CSV row per (snr_db, scheme, method)."""
    spec.validate()
    rows = []
    for snr_db in spec.grid():
        config = spec.network_config(snr_db)
        for scheme in (s for s in SCHEMES if s in spec.schemes):
            for method in (m for m in METHODS if m in spec.methods):
                estimate = _evaluate(spec, config, scheme, method)
                is_mc = method == "montecarlo"
                rows.append(
                    {
                        "snr_db": _fmt(snr_db),
                        "preset": spec.preset,
                        "relay_count": str(spec.relay_count),
                        "scheme": scheme,
                        "method": method,
                        "capacity_bps_hz": _fmt(estimate.value),
                        "std_error": _fmt(estimate.std_error) if is_mc else "",
                        "samples": str(estimate.samples) if is_mc else "",
                        "seed": str(spec.seed) if is_mc else "",
                    }
                )
    _write_csv(spec.output_path, CSV_COLUMNS, rows)


def run_gain(spec: SweepSpec) -> None:
    """Emit the exact and approximate full-versus-partial capacity gap per grid point."""
    spec.validate()
    if spec.preset != "iid" or spec.relay_count != 1:
        raise SweepSpecError("the gain sweep is defined for preset 'iid' with one relay")
    rows = []
    for snr_db in spec.grid():
        mean = 10.0 ** (snr_db / 10.0)
        rows.append(
            {
                "snr_db": _fmt(snr_db),
                "delta_c_exact": _fmt(capacity_gain_iid(mean)),
                "delta_c_approx": _fmt(capacity_gain_high_snr(mean)),
            }
        )
    _write_csv(spec.output_path, ("snr_db", "delta_c_exact", "delta_c_approx"), rows)


def _write_csv(path: str, columns, rows) -> None:
    with open(path, "w", newline="") as handle:
        writer = csv.DictWriter(handle, fieldnames=columns, lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)


def _parse_list(raw: str, allowed, label: str) -> tuple[str, ...]:
    items = tuple(s.strip() for s in raw.split(",") if s.strip())
    if items == ("all",):
        return tuple(allowed)
    for item in items:
        if item not in allowed:
            raise SweepSpecError(f"unknown {label} {item!r}; choose from {allowed} or 'all'")
    return items


def _parse_snr_range(raw: str) -> tuple[float, float, float]:
    parts = raw.split(":")
    if len(parts) != 3:
        raise SweepSpecError(f"--snr-db expects START:STOP:STEP, got {raw!r}")
    try:
        return tuple(float(p) for p in parts)
    except ValueError as exc:
        raise SweepSpecError(f"--snr-db expects numbers, got {raw!r}") from exc


def _parse_custom_means(raw: str) -> CustomMeans:
    groups = raw.split(";")
    if len(groups) != 3:
        raise SweepSpecError(
            "custom means expect 'first1,first2,..;second1,second2,..;direct'"
        )
    try:
        first = tuple(float(v) for v in groups[0].split(",") if v.strip())
        second = tuple(float(v) for v in groups[1].split(",") if v.strip())
        direct = float(groups[2])
    except ValueError as exc:
        raise SweepSpecError(f"custom means expect numbers, got {raw!r}") from exc
    return CustomMeans(first, second, direct)


_CONFIG_PARSERS = {
    "snr_db_start": float,
    "snr_db_stop": float,
    "snr_db_step": float,
    "preset": str,
    "relay_count": int,
    "schemes": lambda raw: _parse_list(raw, SCHEMES, "scheme"),
    "methods": lambda raw: _parse_list(raw, METHODS, "method"),
    "samples": int,
    "seed": int,
    "custom_means": _parse_custom_means,
    "output_path": str,
    "workers": int,
}


def load_spec_file(path: str) -> dict:
    """Parse a key-value sweep file: one ``name = value`` per line, '#' comments."""
    values = {}
    with open(path) as handle:
        for lineno, line in enumerate(handle, start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise SweepSpecError(f"{path}:{lineno}: expected 'key = value'")
            key, raw = (part.strip() for part in line.split("=", 1))
            if key not in _CONFIG_PARSERS:
                raise SweepSpecError(f"{path}:{lineno}: unknown key {key!r}")
            try:
                values[key] = _CONFIG_PARSERS[key](raw)
            except SweepSpecError:
                raise
            except ValueError as exc:
                raise SweepSpecError(f"{path}:{lineno}: bad value for {key}: {raw!r}") from exc
    return values


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="relaycap",
        description="Ergodic-capacity sweeps for relay-link selection schemes.",
    )
    parser.add_argument("--preset", choices=PRESETS, help="network preset")
    parser.add_argument("--relays", type=int, metavar="N", help="number of relays")
    parser.add_argument("--snr-db", metavar="START:STOP:STEP", help="average-SNR grid in dB")
    parser.add_argument(
        "--scheme", metavar="NAME[,NAME..]", help="full, partial, direct or all"
    )
    parser.add_argument(
        "--method", metavar="NAME[,NAME..]", help="analytic, montecarlo, quadrature or all"
    )
    parser.add_argument("--samples", type=int, metavar="N", help="montecarlo sample count")
    parser.add_argument("--seed", type=int, metavar="N", help="montecarlo seed")
    parser.add_argument("--config", metavar="PATH", help="sweep file; flags override it")
    parser.add_argument("--output", metavar="PATH", help="CSV output path")
    parser.add_argument(
        "--custom-means",
        metavar="F1,..;S1,..;D",
        help="per-link mean SNRs at 0 dB for the custom preset",
    )
    parser.add_argument("--workers", type=int, metavar="N", help="montecarlo worker threads")
    parser.add_argument(
        "--gain",
        action="store_true",
        help="emit the exact and approximate full-vs-partial capacity gap instead",
    )
    return parser


def _spec_from_args(args) -> SweepSpec:
    values = load_spec_file(args.config) if args.config else {}
    if args.snr_db is not None:
        start, stop, step = _parse_snr_range(args.snr_db)
        values.update(snr_db_start=start, snr_db_stop=stop, snr_db_step=step)
    for key, raw in (
        ("preset", args.preset),
        ("relay_count", args.relays),
        ("samples", args.samples),
        ("seed", args.seed),
        ("output_path", args.output),
        ("workers", args.workers),
    ):
        if raw is not None:
            values[key] = raw
    if args.scheme is not None:
        values["schemes"] = _parse_list(args.scheme, SCHEMES, "scheme")
    if args.method is not None:
        values["methods"] = _parse_list(args.method, METHODS, "method")
    if args.custom_means is not None:
        values["custom_means"] = _parse_custom_means(args.custom_means)
    missing = {"snr_db_start", "snr_db_stop", "snr_db_step"} - values.keys()
    if missing:
        raise SweepSpecError("an SNR grid is required (--snr-db or config file)")
    return SweepSpec(**values)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        spec = _spec_from_args(args)
        if args.gain:
            run_gain(spec)
        else:
            run_sweep(spec)
    except SweepSpecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SPEC
    except QuadratureError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"i/o failure: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
