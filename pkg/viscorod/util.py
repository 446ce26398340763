"""
输出格式与终端展示
Float formatting for the CSV files and rich tables for the console.
"""
import math
from typing import Iterable, Optional

from rich.console import Console as RichConsole
from rich.table import Table


def fmt_float(value: float) -> str:
    """17 significant digits, '.' separator, no locale."""
    value = float(value)
    if math.isnan(value):
        return "nan"
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return format(value, ".17g")


def print_mode_table(mode_set, console: Optional[RichConsole] = None, limit: int = 12) -> None:
    """Render the first modes of a mode set."""
    console = console or RichConsole()
    table = Table(title=f"modes (κ={mode_set.kappa:g}, n_max={mode_set.n_max})")
    for column in ("n", "w", "Re s", "Im s", "|d(sM)/ds|", "denom", "|f(s)|", "ok"):
        table.add_column(column, justify="right")
    for mode in mode_set.modes[:limit]:
        table.add_row(
            str(mode.index),
            f"{mode.w:.8g}",
            f"{mode.s.real:.6g}",
            f"{mode.s.imag:.8g}",
            f"{abs(mode.dsm):.6g}",
            f"{mode.denom:.6g}",
            f"{mode.residual:.2e}",
            "✅" if mode.resolved else "❌",
        )
    if len(mode_set.modes) > limit:
        table.add_row("…", "", "", "", "", "", "", "")
    console.print(table)
    if mode_set.unresolved:
        console.print(f"[yellow]⚠️  unresolved modes: {list(mode_set.unresolved)}[/yellow]")


def print_assumption_report(report, console: Optional[RichConsole] = None) -> None:
    console = console or RichConsole()
    table = Table(title=f"assumption checks: {report.model}")
    table.add_column("check")
    table.add_column("verdict")
    table.add_column("measure", justify="right")
    rows = [
        ("A1 limits", report.a1, f"c∞={report.c_inf:.6g}, c0={report.c_0:.6g}"),
        ("A2 sign of Im M", report.a2, f"{report.max_upper_im:.3e}"),
        ("A3 |d(sM)/ds|", report.a3, f"{report.min_dsm:.3e}"),
        ("A4 continuity", report.a4, f"{report.max_jump:.3e}"),
        ("B  |s Im M|", report.b_holds, f"{report.max_s_im:.3e}"),
    ]
    for name, ok, measure in rows:
        table.add_row(name, "[green]pass[/green]" if ok else "[yellow]flagged[/yellow]", measure)
    console.print(table)


def print_run_summary(lines: Iterable[str], console: Optional[RichConsole] = None) -> None:
    console = console or RichConsole()
    for line in lines:
        console.print(f"[cyan]{line}[/cyan]")
