"""Validated run configuration and the command dispatcher.

Every sub-command builds a RunConfig and hands it to execute(), which
loads the workbench config, dispatches to a handler and writes the
resulting document. Handlers return plain dicts; nothing here prints
except execute().
"""

import csv
import io
import logging
from collections.abc import Callable
from dataclasses import dataclass, field
from math import comb
from pathlib import Path
from typing import Any, Literal

import typer
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from src import __version__
from src.cli.ui import console, create_sweep_progress, print_fit_table, print_success
from src.core.config import WorkbenchConfig, load_config
from src.core.degeneration import (
    AsymptoticFit,
    AsymptoticSample,
    DegenerationPath,
    beta1_sweep,
    beta2_fay_sweep,
    boundary_coefficient_vectors,
    faltings_reference,
    fit_asymptotics,
    hodge_sweep,
    incommensurability_check,
    log_spaced,
    reducible_sweep,
    reduction_prediction,
    vanishing_order_slope,
)
from src.core.exceptions import BiextError, InputError
from src.core.heisenberg import SeparatingCurveData, central_charge_breakdown
from src.core.picard import (
    chern_biextension,
    compact_part_class,
    morita_class,
    restrict_to_interior,
    solve_r0,
)
from src.core.repcheck import dimension_identity, invariant_dim
from src.core.serialization import (
    CSV_COLUMNS,
    divisor_class_to_json,
    dump_document,
    fit_to_json,
    fraction_to_json,
    load_samples,
    load_vclass,
    sample_to_row,
    samples_to_json,
)
from src.core.symplectic_core import q_form

logger = logging.getLogger(__name__)

Subcommand = Literal[
    "tau",
    "qform",
    "invariants",
    "dimid",
    "beta1-sweep",
    "beta2-sweep",
    "fit",
    "chern",
    "solve-r0",
    "faltings",
    "incommensurable",
]

REQUIRED_PARAMS: dict[str, tuple[str, ...]] = {
    "tau": ("g", "h"),
    "qform": ("lift_paths",),
    "invariants": ("g", "p"),
    "dimid": ("g",),
    "beta1-sweep": (),
    "beta2-sweep": ("path",),
    "fit": ("input_path",),
    "chern": ("g",),
    "solve-r0": ("g",),
    "faltings": ("g",),
    "incommensurable": ("g",),
}

CSV_COMMANDS = {"beta1-sweep", "beta2-sweep", "fit"}
SWEEP_COMMANDS = {"beta1-sweep", "beta2-sweep"}

EXIT_ERROR = 1
EXIT_INVALID_RUN = 2


class RunConfig(BaseModel):
    """Parameters of one CLI invocation."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    subcommand: Subcommand
    g: int | None = Field(default=None, ge=1, description="Genus")
    h: int | None = Field(default=None, ge=0, description="Boundary index")
    p: int | None = Field(default=None, ge=2, description="Prime modulus")
    side: Literal["invariants", "dual"] = "invariants"
    path: Literal["fay", "reducible"] | None = None
    lift_paths: tuple[Path, Path] | None = None
    input_path: Path | None = None
    include_log: bool = True
    x_min: float | None = Field(default=None, gt=0)
    x_max: float | None = Field(default=None, gt=0)
    samples: int | None = Field(default=None, gt=0)
    output_format: Literal["json", "csv"] = "json"
    output_path: Path | None = None

    @model_validator(mode="after")
    def validate_for_subcommand(self) -> "RunConfig":
        """Required parameters are present and csv is only asked of sweeps/fits."""
        required = REQUIRED_PARAMS[self.subcommand]
        missing = [name for name in required if getattr(self, name) is None]
        if missing:
            raise ValueError(f"{self.subcommand} requires: {', '.join(missing)}")
        if self.output_format == "csv" and self.subcommand not in CSV_COMMANDS:
            raise ValueError(f"{self.subcommand} has no csv output")
        return self


@dataclass
class CommandResult:
    """A document plus, for sweeps and fits, its CSV rows."""

    document: dict[str, Any]
    rows: list[dict[str, str]] | None = None
    columns: tuple[str, ...] = field(default=CSV_COLUMNS)
    fit: AsymptoticFit | None = None

    def render(self, output_format: str) -> str:
        if output_format == "json" or self.rows is None:
            return dump_document(self.document)
        buffer = io.StringIO()
        writer = csv.DictWriter(buffer, fieldnames=self.columns, lineterminator="\n")
        writer.writeheader()
        writer.writerows(self.rows)
        return buffer.getvalue()


ProgressCallback = Callable[[AsymptoticSample], None]
Handler = Callable[
    [RunConfig, WorkbenchConfig, ProgressCallback | None], CommandResult
]


def effective_settings(run: RunConfig, settings: WorkbenchConfig) -> WorkbenchConfig:
    """Apply --x-min/--x-max/--samples to the schedule of the active sweep."""
    overrides = {"x_min": run.x_min, "x_max": run.x_max, "samples": run.samples}
    overrides = {k: v for k, v in overrides.items() if v is not None}
    if not overrides:
        return settings
    prefix = "beta1" if run.subcommand == "beta1-sweep" else "fay"
    data = settings.model_dump()
    data.update({f"{prefix}_{k}": v for k, v in overrides.items()})
    return WorkbenchConfig(**data)


def schedule_of(run: RunConfig, settings: WorkbenchConfig) -> dict[str, Any] | None:
    if run.subcommand == "beta1-sweep":
        return {
            "x_min": settings.beta1_x_min,
            "x_max": settings.beta1_x_max,
            "samples": settings.beta1_samples,
        }
    if run.subcommand == "beta2-sweep" and run.path == "fay":
        return {
            "omega0_imag": settings.fay_omega0_imag,
            "v": settings.fay_v,
            "x_min": settings.fay_x_min,
            "x_max": settings.fay_x_max,
            "samples": settings.fay_samples,
        }
    if run.subcommand == "beta2-sweep":
        return {
            "tau1_imag": settings.reducible_tau1_imag,
            "tau2_imag": settings.reducible_tau2_imag,
            "k_min": settings.reducible_k_min,
            "k_max": settings.reducible_k_max,
        }
    return None


def schedule_size(run: RunConfig, settings: WorkbenchConfig) -> int:
    schedule = schedule_of(run, settings)
    if schedule is None:
        return 0
    if "samples" in schedule:
        return int(schedule["samples"])
    return int(schedule["k_max"]) - int(schedule["k_min"]) + 1


def metadata(run: RunConfig, settings: WorkbenchConfig) -> dict[str, Any]:
    return {
        "tool": "biext",
        "version": __version__,
        "subcommand": run.subcommand,
        "cutoffs": settings.cutoffs(),
        "schedule": schedule_of(run, settings),
    }


def _pair_to_json(pair: tuple[Any, Any]) -> dict[str, str]:
    return {
        "coeff_log": fraction_to_json(pair[0]),
        "coeff_loglog": fraction_to_json(pair[1]),
    }


def _require(value: int | None) -> int:
    assert value is not None
    return value


def _tau(
    run: RunConfig, settings: WorkbenchConfig, progress: ProgressCallback | None
) -> CommandResult:
    g, h = _require(run.g), _require(run.h)
    breakdown = central_charge_breakdown(SeparatingCurveData(g, h))
    return CommandResult(
        {
            "g": g,
            "h": h,
            "tau": breakdown.charge,
            "closed_form": 4 * h * (g - h),
            "block": list(breakdown.block),
            "q_sum": breakdown.q_sum,
            "pairing_w_prime": breakdown.pairing_w_prime,
            "pairing_w_double_prime": breakdown.pairing_w_double_prime,
        }
    )


def _qform(
    run: RunConfig, settings: WorkbenchConfig, progress: ProgressCallback | None
) -> CommandResult:
    assert run.lift_paths is not None
    u = load_vclass(run.lift_paths[0])
    v = load_vclass(run.lift_paths[1])
    return CommandResult({"genus": u.genus, "q": q_form(u, v)})


def _invariants(
    run: RunConfig, settings: WorkbenchConfig, progress: ProgressCallback | None
) -> CommandResult:
    g, p = _require(run.g), _require(run.p)
    dim = invariant_dim(g, p, run.side, settings.max_workers)
    return CommandResult({"g": g, "p": p, "side": run.side, "dimension": dim})


def _dimid(
    run: RunConfig, settings: WorkbenchConfig, progress: ProgressCallback | None
) -> CommandResult:
    g = _require(run.g)
    holds = dimension_identity(g)
    return CommandResult(
        {
            "g": g,
            "holds": holds,
            "lambda3_rank": comb(2 * g, 3),
            "decomposition": [2 * g * (g - 1), 8 * comb(g, 3)],
        }
    )


def _sample_rows(samples: list[AsymptoticSample]) -> list[dict[str, str]]:
    return [sample_to_row(s) for s in samples]


def _beta1_sweep(
    run: RunConfig, settings: WorkbenchConfig, progress: ProgressCallback | None
) -> CommandResult:
    xs = log_spaced(settings.beta1_x_min, settings.beta1_x_max, settings.beta1_samples)
    samples = beta1_sweep(xs, settings.max_workers, progress, settings.delta_tail_bound)
    fit = fit_asymptotics(samples)
    return CommandResult(
        {
            "quantity": "beta1",
            "fit": fit_to_json(fit),
            "expected": _pair_to_json(reduction_prediction(1, 0)),
            "samples": samples_to_json(samples),
        },
        rows=_sample_rows(samples),
        fit=fit,
    )


def _beta2_sweep(
    run: RunConfig, settings: WorkbenchConfig, progress: ProgressCallback | None
) -> CommandResult:
    fit: AsymptoticFit | None = None
    if run.path == "fay":
        xs = log_spaced(settings.fay_x_min, settings.fay_x_max, settings.fay_samples)
        path = DegenerationPath.fay(settings.fay_omega0_imag, settings.fay_v, xs)
        samples = beta2_fay_sweep(
            path, settings.max_workers, progress, settings.theta_tail_bound
        )
        fit = fit_asymptotics(samples)
        hodge_fit = fit_asymptotics(hodge_sweep(path), include_log=False)
        document = {
            "quantity": "beta2",
            "path": "fay",
            "fit": fit_to_json(fit),
            "hodge_fit": fit_to_json(hodge_fit),
            "expected": _pair_to_json(reduction_prediction(2, 0)),
            "samples": samples_to_json(samples),
        }
    else:
        path = DegenerationPath.reducible(
            settings.reducible_tau1_imag,
            settings.reducible_tau2_imag,
            settings.reducible_k_min,
            settings.reducible_k_max,
        )
        samples = reducible_sweep(
            path, settings.max_workers, progress, settings.theta_tail_bound
        )
        slope = vanishing_order_slope(samples)
        document = {
            "quantity": "log_abs_chi10",
            "path": "reducible",
            "vanishing_order": slope,
            "beta2_coeff_log": -2 * slope,
            "expected": _pair_to_json(reduction_prediction(2, 1)),
            "samples": samples_to_json(samples),
        }
    return CommandResult(document, rows=_sample_rows(samples), fit=fit)


def _fit(
    run: RunConfig, settings: WorkbenchConfig, progress: ProgressCallback | None
) -> CommandResult:
    assert run.input_path is not None
    samples = load_samples(run.input_path)
    fit = fit_asymptotics(samples, include_log=run.include_log)
    fitted = fit_to_json(fit)
    return CommandResult(
        {"fit": fitted, "include_log": run.include_log, "samples": len(samples)},
        rows=[{k: repr(v) for k, v in fitted.items()}],
        columns=tuple(fitted),
        fit=fit,
    )


def _chern(
    run: RunConfig, settings: WorkbenchConfig, progress: ProgressCallback | None
) -> CommandResult:
    g = _require(run.g)
    cls = chern_biextension(g)
    interior = restrict_to_interior(cls)
    return CommandResult(
        {
            "g": g,
            "class": divisor_class_to_json(cls),
            "display": str(cls),
            "compact_part": divisor_class_to_json(compact_part_class(g)),
            "interior": divisor_class_to_json(interior),
            "interior_matches_morita": interior == morita_class(g),
        }
    )


def _solve_r0(
    run: RunConfig, settings: WorkbenchConfig, progress: ProgressCallback | None
) -> CommandResult:
    solution = solve_r0(_require(run.g))
    return CommandResult(
        {
            "g": solution.g,
            "r0": fraction_to_json(solution.r0),
            "c": {k: fraction_to_json(v) for k, v in solution.c.items()},
            "c_status": "derived, unverified",
        }
    )


def _faltings(
    run: RunConfig, settings: WorkbenchConfig, progress: ProgressCallback | None
) -> CommandResult:
    g = _require(run.g)
    h = run.h if run.h is not None else 0
    return CommandResult({"g": g, "h": h, **_pair_to_json(faltings_reference(g, h))})


def _incommensurable(
    run: RunConfig, settings: WorkbenchConfig, progress: ProgressCallback | None
) -> CommandResult:
    g = _require(run.g)
    result = incommensurability_check(g)
    beta, faltings = boundary_coefficient_vectors(g)
    return CommandResult(
        {
            "g": g,
            "incommensurable": result,
            "beta": [fraction_to_json(x) for x in beta],
            "faltings": [fraction_to_json(x) for x in faltings],
        }
    )


HANDLERS: dict[str, Handler] = {
    "tau": _tau,
    "qform": _qform,
    "invariants": _invariants,
    "dimid": _dimid,
    "beta1-sweep": _beta1_sweep,
    "beta2-sweep": _beta2_sweep,
    "fit": _fit,
    "chern": _chern,
    "solve-r0": _solve_r0,
    "faltings": _faltings,
    "incommensurable": _incommensurable,
}


def dispatch(
    run: RunConfig,
    settings: WorkbenchConfig,
    progress_callback: ProgressCallback | None = None,
) -> CommandResult:
    """Run one sub-command and return its document with metadata attached.

    Raises:
        BiextError: Whatever the underlying computation raises.
    """
    settings = effective_settings(run, settings)
    logger.debug("Dispatching %s", run.subcommand)
    result = HANDLERS[run.subcommand](run, settings, progress_callback)
    result.document["metadata"] = metadata(run, settings)
    return result


def error_document(error: Exception) -> dict[str, Any]:
    return {"error": {"type": type(error).__name__, "message": str(error)}}


def _emit(text: str, output_path: Path | None) -> None:
    if output_path is None:
        typer.echo(text, nl=False)
        return
    try:
        output_path.write_text(text)
    except OSError as e:
        raise InputError(f"Cannot write {output_path}: {e}") from e
    print_success(f"Wrote {output_path}")


def execute(params: dict[str, Any], config_path: Path | None = None) -> None:
    """Validate, run and emit one CLI invocation.

    Exits 2 when the run configuration is invalid and 1 on any workbench
    error; the error document is written to stdout in both cases.
    """
    try:
        run = RunConfig(**params)
        settings = effective_settings(run, load_config(config_path))
    except ValidationError as e:
        typer.echo(dump_document(error_document(e)), nl=False)
        raise typer.Exit(code=EXIT_INVALID_RUN) from e
    except BiextError as e:
        typer.echo(dump_document(error_document(e)), nl=False)
        raise typer.Exit(code=EXIT_ERROR) from e

    try:
        if run.subcommand in SWEEP_COMMANDS:
            with create_sweep_progress() as progress:
                task = progress.add_task(
                    run.subcommand, total=schedule_size(run, settings)
                )
                result = dispatch(
                    run, settings, lambda _sample: progress.advance(task)
                )
        else:
            result = dispatch(run, settings)
        if result.fit is not None and console.is_terminal:
            print_fit_table(result.fit)
        _emit(result.render(run.output_format), run.output_path)
    except BiextError as e:
        typer.echo(dump_document(error_document(e)), nl=False)
        raise typer.Exit(code=EXIT_ERROR) from e
