"""
命令行入口
viscorod run    sweep a space-time grid and write results.csv / modes.csv / diagnostics.txt
viscorod modes  write the mode table only
"""
import argparse
import logging
import sys
import traceback
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

from rich.console import Console as RichConsole

from .config_manager import ConfigManager, LoggingConfig, Quantity, RunConfig
from .constitutive import AssumptionReport, check_assumptions, model_limits
from .errors import ConfigError, SampleFlag, UnsafeModelError, ViscorodError
from .kernels import CutCalibration, KernelKind, KernelSpec, calibrate_cut_sides
from .modes import ModeSet, build_mode_set
from .sweep import FieldResult, OracleComparison, compare_with_oracle, sweep, write_diagnostics
from .telemetry_setup import TelemetrySetup
from .util import print_assumption_report, print_mode_table, print_run_summary

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_ACCURACY = 3

RESULTS_FILE = "results.csv"
MODES_FILE = "modes.csv"
DIAGNOSTICS_FILE = "diagnostics.txt"

_QUANTITY_KIND = {
    Quantity.DISPLACEMENT: KernelKind.DISPLACEMENT_P,
    Quantity.STRESS: KernelKind.STRESS_SIGMA_H,
}


def setup_logging(cfg: LoggingConfig) -> None:
    """Configure the root logger; later calls only adjust the level."""
    # basicConfig 在已有 handler 时不做任何事
    logging.basicConfig(level=cfg.level, format=cfg.format)
    logging.getLogger().setLevel(cfg.level)


@dataclass
class Pipeline:
    config: RunConfig
    report: AssumptionReport
    mode_set: ModeSet
    specs: Dict[Quantity, KernelSpec]
    calibrations: Tuple[CutCalibration, ...]


def build_pipeline(config: RunConfig, telemetry: TelemetrySetup) -> Pipeline:
    """Assumption checks, modes, kernel specs and the cut-side calibration."""
    report = check_assumptions(config.model)
    with telemetry.span("build_modes", n_max=config.n_max, kappa=config.kappa):
        mode_set = build_mode_set(config.model, config.kappa, config.n_max, allow_unsafe=config.unsafe_model)

    spec_P = KernelSpec.for_modes(KernelKind.DISPLACEMENT_P, mode_set, tol=config.tol, max_modes=config.max_modes)
    spec_sigma = KernelSpec.for_modes(KernelKind.STRESS_SIGMA_H, mode_set, tol=config.tol, max_modes=config.max_modes)
    with telemetry.span("calibrate_cut_sides"):
        try:
            calibrations = calibrate_cut_sides(spec_P, spec_sigma)
            spec_P, spec_sigma = (c.spec for c in calibrations)
        except ViscorodError as exc:
            logger.warning(f"cut-side calibration failed ({exc}); keeping the default sides")
            calibrations = (CutCalibration(spec=spec_P, skipped=True), CutCalibration(spec=spec_sigma, skipped=True))
    specs = {Quantity.DISPLACEMENT: spec_P, Quantity.STRESS: spec_sigma}
    return Pipeline(config, report, mode_set, specs, calibrations)


def _mode_summary(mode_set: ModeSet) -> str:
    lines = [
        f"modes: {mode_set.n_max} (unresolved: {list(mode_set.unresolved) or 'none'})",
        f"xi_max = {mode_set.xi_max:.10g}",
        f"largest set grown for the tail budget: {mode_set.largest_extension()} modes",
    ]
    if mode_set.c_inf is not None:
        lines.append(f"c_inf = {mode_set.c_inf:.10g}")
    for kind, fit in sorted(mode_set.tail.items(), key=lambda kv: kv[0].value):
        lines.append(
            f"tail {kind.value}: K = {fit.K:.6e}, a = {fit.a:.6g}, a_tail = {fit.a_tail:.6g}, "
            f"growth = {fit.growth:.3g} (n >= {fit.first_index})"
        )
    return "\n".join(lines)


def _flag_summary(result: FieldResult) -> str:
    counts = result.flag_counts()
    lines = [f"samples: {len(result.records)}"]
    lines.extend(f"{flag.value}: {counts.get(flag.value, 0)}" for flag in SampleFlag)
    return "\n".join(lines)


def _describe_config(config: RunConfig) -> str:
    return "\n".join([
        f"model: {config.model.describe()}",
        f"kappa: {config.kappa!r}",
        f"forcing: {config.forcing.describe()}",
        f"outputs: {', '.join(q.value for q in config.outputs)}",
        f"grid: {len(config.x_grid)} x {len(config.t_grid)}",
        f"n_max: {config.n_max}, max_modes: {config.max_modes}, tol: {config.tol:g}",
    ])


def run_pipeline(config: RunConfig, console: Optional[RichConsole] = None,
                 telemetry: Optional[TelemetrySetup] = None) -> int:
    """Full run; returns the process exit code."""
    console = console or RichConsole()
    telemetry = telemetry or TelemetrySetup(endpoint=config.otlp_endpoint, enable_telemetry=config.telemetry)

    pipeline = build_pipeline(config, telemetry)
    print_assumption_report(pipeline.report, console)
    print_mode_table(pipeline.mode_set, console)

    with telemetry.span("sweep", samples=len(config.x_grid) * len(config.t_grid) * len(config.outputs)):
        result = sweep(pipeline.specs, config.forcing, config.x_grid, config.t_grid,
                       config.outputs, workers=config.workers)

    comparison: Optional[OracleComparison] = None
    if config.oracle_check:
        with telemetry.span("oracle_check"):
            result, comparison = compare_with_oracle(
                result, config.model, config.kappa, config.forcing, pipeline.mode_set.xi_max
            )

    sections: List[Tuple[str, str]] = [
        ("configuration", _describe_config(config)),
        ("assumption checks", pipeline.report.render()),
        ("mode set", _mode_summary(pipeline.mode_set)),
        ("cut-side calibration", "\n".join(c.render() for c in pipeline.calibrations)),
        ("sample flags", _flag_summary(result)),
    ]
    if comparison is not None:
        sections.append(("oracle", comparison.render()))

    out = Path(config.out)
    with telemetry.span("write_outputs", out=str(out)):
        out.mkdir(parents=True, exist_ok=True)
        result.to_csv(out / RESULTS_FILE)
        pipeline.mode_set.to_csv(out / MODES_FILE)
        write_diagnostics(out / DIAGNOSTICS_FILE, sections)

    summary = [
        f"📄 {out / RESULTS_FILE}: {len(result.records)} samples",
        f"📄 {out / MODES_FILE}",
        f"📄 {out / DIAGNOSTICS_FILE}",
    ]
    if comparison is not None:
        summary.append(comparison.render().splitlines()[-1])
    print_run_summary(summary, console)

    accuracy_failed = result.flag_counts().get(SampleFlag.ACCURACY.value, 0) > 0
    oracle_failed = comparison is not None and not comparison.passed
    if config.strict and (accuracy_failed or oracle_failed):
        console.print("[red]accuracy gate failed (strict mode)[/red]")
        return EXIT_ACCURACY
    return EXIT_OK


def dump_modes(config: RunConfig, console: Optional[RichConsole] = None) -> Path:
    """Write the mode table of the configured model to <out>/modes.csv."""
    console = console or RichConsole()
    mode_set = build_mode_set(config.model, config.kappa, config.n_max, allow_unsafe=config.unsafe_model)
    print_mode_table(mode_set, console)
    out = Path(config.out)
    out.mkdir(parents=True, exist_ok=True)
    path = out / MODES_FILE
    mode_set.to_csv(path)
    limits = model_limits(config.model)
    if limits is not None:
        logger.info(f"c_inf = {limits.c_inf:.10g}, c_0 = {limits.c_0:.10g}")
    print_run_summary([f"📄 {path}"], console)
    return path


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="viscorod", description="分布阶分数阶粘弹性杆的瞬态响应计算。")
    parser.add_argument("command", nargs="?", choices=("run", "modes"), default="run",
                        help="run: 扫描时空网格; modes: 只输出模态表")
    parser.add_argument("-c", "--config_file", type=str, help="运行配置文件 (key = value)")
    parser.add_argument("-e", "--env_file", type=str, help="环境变量文件路径")
    parser.add_argument("-d", "--debug", action="store_true", help="启用调试模式")
    parser.add_argument("--model", type=str, help="本构模型, 如 'zener alpha=0.5 a=0.2 b=0.6'")
    parser.add_argument("--kappa", type=str, help="杆参数 κ")
    parser.add_argument("--forcing", type=str, help="端部载荷, 如 'heaviside' 或 'sinusoid omega=2'")
    parser.add_argument("--tmax", type=str, help="均匀时间网格的终点")
    parser.add_argument("--nx", type=str, help="x 网格点数")
    parser.add_argument("--nt", type=str, help="t 网格点数")
    parser.add_argument("--out", type=str, help="输出目录")
    parser.add_argument("--oracle-check", dest="oracle_check", action="store_const", const="true",
                        help="用 Bromwich 反演交叉验证")
    parser.add_argument("--n-max", dest="n_max", type=str, help="模态数")
    parser.add_argument("--max-modes", dest="max_modes", type=str, help="残差尾项超预算时模态集可增长到的上限")
    parser.add_argument("--tol", type=str, help="每个样本的目标绝对误差")
    parser.add_argument("--outputs", type=str, help="displacement,stress 的子集")
    parser.add_argument("--workers", type=str, help="扫描线程数")
    parser.add_argument("--strict", action="store_const", const="true", help="精度不达标时以退出码 3 结束")
    parser.add_argument("--unsafe-model", dest="unsafe_model", action="store_const", const="true",
                        help="允许不满足归一化假设的模型 (hilfer)")
    return parser


_OVERRIDE_KEYS = ("model", "kappa", "forcing", "tmax", "nx", "nt", "out", "oracle_check",
                  "n_max", "max_modes", "tol", "outputs", "workers", "strict", "unsafe_model")


def run(argv: Optional[Sequence[str]] = None) -> int:
    """命令行脚本入口点"""
    args = build_parser().parse_args(argv)
    console = RichConsole()
    overrides = {key: getattr(args, key) for key in _OVERRIDE_KEYS}
    if args.debug:
        overrides["log_level"] = "DEBUG"

    try:
        config = ConfigManager(config_file=args.config_file, env_file=args.env_file, overrides=overrides).load()
    except ConfigError as exc:
        console.print(f"[red]配置错误: {exc}[/red]")
        return EXIT_CONFIG
    setup_logging(config.logging)

    try:
        if args.command == "modes":
            dump_modes(config, console)
            return EXIT_OK
        return run_pipeline(config, console)
    except UnsafeModelError as exc:
        console.print(f"[red]模型错误: {exc}[/red]")
        return EXIT_CONFIG
    except Exception as e:
        console.print(f"[red]程序执行出错: {e}[/red]")
        if args.debug:
            console.print("[red]详细错误信息:[/red]")
            console.print(traceback.format_exc())
        raise


if __name__ == "__main__":
    sys.exit(run())
