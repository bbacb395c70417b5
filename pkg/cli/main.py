# Komut satırı arayüzü: run, convergence, balance, simple-wave

import argparse
import logging
import sys
from pathlib import Path
from typing import Dict, List, Optional, Sequence

import numpy as np

from client.simulation import Simulation
from core.reconstruction import Variant
from exceptions.errors import (
    ConfigurationError, FileError, OutputError, ScenarioError, SolverError, ValidationError,
)
from fileio.config_parser import load_config
from fileio.writers import (
    CheckpointRecorder, ConvergenceRow, GaugeRecorder, SnapshotWriter, write_gauges,
    write_snapshot, write_steps, write_table,
)
from scenarios.norms import l1_error, observed_rates

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_CONFIG = 2
EXIT_SOLVER = 3

BALANCE_TOLERANCE = 1e-12
BALANCE_CHECKPOINTS = (10.0, 60.0, 120.0)
ALL_VARIANTS = ",".join(v.value for v in Variant)


def _csv_list(text: str, convert=str) -> List:
    return [convert(part.strip()) for part in text.split(",") if part.strip()]


def _variants(text: str) -> List[Variant]:
    try:
        return [Variant(v.upper().replace("/", "")) for v in _csv_list(text)]
    except ValueError:
        raise ConfigurationError("--variants", f"Unknown variant in '{text}'")


def _base_overrides(args: argparse.Namespace) -> List[str]:
    overrides = []
    if args.seed is not None:
        overrides.append(f"scenario.seed={args.seed}")
    if args.threads is not None:
        overrides.append(f"scheme.threads={args.threads}")
    return overrides + list(args.set or [])


def _output_dir(args: argparse.Namespace, default: str) -> Path:
    return Path(args.output) if args.output else Path(default)


# Alt komutlar

def cmd_run(args: argparse.Namespace) -> int:
    """Yapılandırılmış simülasyonu çalıştırır ve çıktılarını yazar"""
    config = load_config(args.config, _base_overrides(args))
    out = _output_dir(args, config.output.directory)
    with Simulation(config) as sim:
        observers = []
        gauges = GaugeRecorder(sim.grid, config.output.gauges) if config.output.gauges else None
        if gauges:
            observers.append(gauges)
        if config.output.snapshot_times:
            observers.append(SnapshotWriter(sim.grid, out, config.output.snapshot_times))
        sim.run(observers=observers)

        if config.output.write_final:
            write_snapshot(sim.state, sim.grid, sim.time, out / "snapshot_final.csv")
        if gauges:
            gauges.write(out)
        if config.output.steps_log:
            write_steps(sim.log, out / "steps.csv")

        print(f"scenario={sim.scenario.name} variant={sim.scheme.variant.value} "
              f"steps={len(sim.log)} t={sim.time:.6g}")
        if sim.scenario.has_exact:
            err_h, err_qx, err_qy = sim.errors()
            print(f"L1 errors: h={err_h:.6e} qx={err_qx:.6e} qy={err_qy:.6e}")
    return EXIT_OK


def cmd_convergence(args: argparse.Namespace) -> int:
    """Tam çözüme karşı grid iyileştirme çalışması"""
    grids = _csv_list(args.grids, int)
    if len(grids) < 2:
        raise ConfigurationError("--grids", "Convergence rates need at least two grids")
    if any(n < 1 for n in grids):
        raise ConfigurationError("--grids", "Grid sizes must be positive")
    out = _output_dir(args, "output")

    for variant in _variants(args.variants):
        errors: List[tuple] = []
        for n in grids:
            overrides = _base_overrides(args) + [
                f"scenario.name={args.scenario}", f"grid.nx={n}", f"grid.ny={n}",
                f"scheme.variant={variant.value}",
            ]
            if args.end_time is not None:
                overrides.append(f"scheme.end_time={args.end_time}")
            with Simulation(load_config(args.config, overrides)) as sim:
                if not sim.scenario.has_exact:
                    raise ScenarioError(args.scenario, f"Scenario {args.scenario} has no exact solution")
                sim.run()
                errors.append(sim.errors())
            logger.info("%s N=%d errors=%s", variant.value, n, errors[-1])

        rates = list(zip(*(observed_rates([e[c] for e in errors]) for c in range(3))))
        rows = [ConvergenceRow(n, err, rate) for n, err, rate in zip(grids, errors, rates)]
        write_table(rows, out / f"convergence_{args.scenario}_{variant.value}.csv")

        print(f"{args.scenario} {variant.value}")
        print(f"{'N':>6} {'err_h':>12} {'rate':>6} {'err_qx':>12} {'rate':>6} {'err_qy':>12} {'rate':>6}")
        for row in rows:
            cells = [f"{row.n:>6}"]
            for err, rate in zip(row.errors, row.rates):
                cells.append(f"{err:12.4e}")
                cells.append(f"{rate:6.2f}" if rate is not None else f"{'-':>6}")
            print(" ".join(cells))
    return EXIT_OK


def _relative_drift(state, reference, grid) -> float:
    scale = float(np.sum(np.abs(reference.water)) * grid.cell_area)
    return l1_error(state, reference, grid, 0) / scale if scale > 0 else 0.0


def cmd_balance(args: argparse.Namespace) -> int:
    """Durgun suyun korunması kontrolü"""
    passed = True
    out = _output_dir(args, "output")
    for variant in _variants(args.variants):
        overrides = _base_overrides(args) + [f"scheme.variant={variant.value}"]
        if args.geometry == "spherical":
            overrides.append("scenario.name=spherical_rest")
            config = load_config(args.config, overrides)
            times = sorted({t for t in BALANCE_CHECKPOINTS if t < args.duration} | {args.duration})
            checkpoints = CheckpointRecorder(times)
            with Simulation(config) as sim:
                initial = sim.state.copy()
                sim.run(args.duration, observers=[checkpoints])
                for t in times:
                    drift = _relative_drift(checkpoints.at(t), initial, sim.grid)
                    ok = drift <= BALANCE_TOLERANCE
                    passed &= ok
                    print(f"{variant.value} t={t:g}s L1 drift={drift:.3e} {'ok' if ok else 'FAIL'}")
                write_steps(sim.log, out / f"balance_spherical_{variant.value}_steps.csv")
        else:
            overrides.append("scenario.name=lake_at_rest")
            with Simulation(load_config(args.config, overrides)) as sim:
                initial = sim.state.copy()
                sim.step(args.steps)
                drift_h = float(np.max(np.abs(sim.state.water - initial.water)))
                drift_q = float(np.max(np.abs(sim.state.momenta)))
                ok = max(drift_h, drift_q) <= BALANCE_TOLERANCE
                passed &= ok
                print(f"{variant.value} steps={args.steps} max drift h={drift_h:.3e} "
                      f"q={drift_q:.3e} {'ok' if ok else 'FAIL'}")
                write_steps(sim.log, out / f"balance_cartesian_{variant.value}_steps.csv")
    return EXIT_OK if passed else EXIT_CHECK_FAILED


def rms_difference(times_a: np.ndarray, values_a: np.ndarray,
                   times_b: np.ndarray, values_b: np.ndarray) -> float:
    """a'nın örnekleme zamanlarında b - a RMS değeri, a'nın RMS değerine göre"""
    resampled = np.interp(times_a, times_b, values_b)
    scale = float(np.sqrt(np.mean(values_a ** 2)))
    diff = float(np.sqrt(np.mean((resampled - values_a) ** 2)))
    return diff / scale if scale > 0 else diff


def cmd_simple_wave(args: argparse.Namespace) -> int:
    """Küresel basit dalga için üç varyantın ölçer karşılaştırması"""
    out = _output_dir(args, "output")
    series: Dict[str, tuple] = {}
    for variant in Variant:
        overrides = _base_overrides(args) + [
            "scenario.name=simple_wave", f"grid.resolution={args.resolution}",
            f"scheme.variant={variant.value}", f"scheme.end_time={args.end_time}",
        ]
        config = load_config(args.config, overrides)
        with Simulation(config) as sim:
            gauge = GaugeRecorder(sim.grid, config.output.gauges)
            sim.run(observers=[gauge])
            write_gauges(gauge.series[0], out / f"simple_wave_gauge_{variant.value}.csv")
            series[variant.value] = gauge.series[0].as_arrays()
        print(f"{variant.value}: {len(sim.log)} steps, max |eta| at gauge "
              f"{float(np.max(np.abs(series[variant.value][1]))):.4e}")

    pairs = [("P3P1", "P3P2"), ("P2P1", "P3P1"), ("P2P1", "P3P2")]
    rows = []
    for a, b in pairs:
        rms = rms_difference(*series[a], *series[b])
        rows.append(f"{a},{b},{rms!r}")
        print(f"RMS difference {a} vs {b}: {rms:.3%}")
    path = out / "simple_wave_rms.csv"
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text("a,b,rms\n" + "\n".join(rows) + "\n", encoding="utf-8")
    except OSError as e:
        raise OutputError(str(path), f"Cannot write {path}: {e}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="Config file (section.key = value lines)")
    common.add_argument("--set", action="append", metavar="SECTION.KEY=VALUE",
                        help="Override a config value; may be repeated")
    common.add_argument("--output", help="Output directory")
    common.add_argument("--seed", type=int, help="Random seed for noisy initial data")
    common.add_argument("--threads", type=int, help="Worker threads (0 = CPU count)")
    common.add_argument("--log-level", default="WARNING",
                        choices=["DEBUG", "INFO", "WARNING", "ERROR"], help="Logging level")

    parser = argparse.ArgumentParser(prog="cweno-swe",
                                     description="Well-balanced CWENO shallow water solver")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", parents=[common], help="Run a configured simulation")
    run.set_defaults(handler=cmd_run)

    conv = sub.add_parser("convergence", parents=[common], help="Grid-refinement study")
    conv.add_argument("--scenario", default="vortex")
    conv.add_argument("--variants", default=Variant.P2P1.value, help="Comma-separated variants")
    conv.add_argument("--grids", default="25,50,100,200,400", help="Comma-separated cell counts")
    conv.add_argument("--end-time", type=float, default=None)
    conv.set_defaults(handler=cmd_convergence)

    bal = sub.add_parser("balance", parents=[common], help="Water-at-rest preservation check")
    bal.add_argument("--geometry", choices=["spherical", "cartesian"], default="spherical")
    bal.add_argument("--variants", default=ALL_VARIANTS)
    bal.add_argument("--duration", type=float, default=120.0, help="Seconds (spherical)")
    bal.add_argument("--steps", type=int, default=1000, help="Step count (cartesian)")
    bal.set_defaults(handler=cmd_balance)

    wave = sub.add_parser("simple-wave", parents=[common], help="Three-variant gauge comparison")
    wave.add_argument("--resolution", type=float, default=1.0, help="Degrees")
    wave.add_argument("--end-time", type=float, default=3000.0)
    wave.set_defaults(handler=cmd_simple_wave)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=getattr(logging, args.log_level),
                        format="%(asctime)s %(levelname)s %(name)s: %(message)s")
    try:
        return args.handler(args)
    except OutputError as e:
        print(f"error: {e.message}", file=sys.stderr)
        return EXIT_SOLVER
    except (ConfigurationError, FileError, ScenarioError, ValidationError) as e:
        print(f"error: {e.message}", file=sys.stderr)
        return EXIT_CONFIG
    except SolverError as e:
        print(f"error: {e.message}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
