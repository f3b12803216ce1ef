"""Command-line interface.

    sld compute <job.json>              run the pipeline, write artifacts
    sld classify <job.json> --n --ap    verdict for one operating point
    sld tool-modes <tool.json>          FEM modal table for a tool file
    sld serve --port 8765               HTTP service for the explorer UI

Exit codes: 0 success, 2 validation error, 3 numeric failure, 4 I/O error.
"""

from __future__ import annotations

import functools
import json
import os
import sys
from pathlib import Path

import click

from . import __version__
from .errors import (
    InvalidGeometryError,
    InvalidInputError,
    NotFoundError,
    NumericError,
    ParseError,
    SldError,
)
from .jobs import load_job, run_job
from .outputs import build_result_document, emit_outputs
from .stability.types import OperatingPoint
from .toolmodel import assemble_system, build_beam_mesh, parse_tool_document, solve_modes
from .uncertainty import classify_probabilistic
from .units import m_to_mm, mm_to_m

EXIT_VALIDATION = 2
EXIT_NUMERIC = 3
EXIT_IO = 4


def _exit_code(exc: Exception) -> int:
    if isinstance(exc, NumericError):
        return EXIT_NUMERIC
    if isinstance(exc, (ParseError, InvalidInputError, InvalidGeometryError, NotFoundError)):
        return EXIT_VALIDATION
    if isinstance(exc, OSError):
        return EXIT_IO
    return EXIT_VALIDATION if isinstance(exc, SldError) else 1


def mapped_errors(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except (SldError, OSError) as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(_exit_code(exc))

    return wrapper


@click.group()
@click.version_option(version=__version__, prog_name="sld")
def main():
    """Stability lobe diagrams with uncertainty bands for milling."""


@main.command()
@click.argument("job_path", type=click.Path())
@click.option("--out-dir", type=click.Path(file_okay=False), default=None,
              help="Directory for output artifacts (default: current directory).")
@mapped_errors
def compute(job_path, out_dir):
    """Run the full pipeline for a job file and emit its artifacts."""
    job = load_job(job_path)
    run = run_job(job)
    doc = build_result_document(run)
    selections = job.output_paths or {"json": "result.json", "csv": "band.csv",
                                      "svg": "sld.svg"}
    written = emit_outputs(run, doc, selections, out_dir=out_dir)
    env_min_mm = m_to_mm(float(run.sld.envelope_depth.min()))
    lo, hi = run.band.speed_window
    click.echo(
        f"{job.name}: {len(run.sld.lobes)} lobes, speed window "
        f"{lo:.0f}-{hi:.0f} rpm, envelope minimum {env_min_mm:.3f} mm"
    )
    for kind, path in sorted(written.items()):
        click.echo(f"wrote {kind}: {path}")


@main.command()
@click.argument("job_path", type=click.Path())
@click.option("--n", "n_rpm", type=float, required=True, help="Spindle speed [rpm].")
@click.option("--ap", "ap_mm", type=float, required=True, help="Axial depth of cut [mm].")
@mapped_errors
def classify(job_path, n_rpm, ap_mm):
    """Classify one operating point against the job's uncertainty band."""
    job = load_job(job_path)
    run = run_job(job)
    point = OperatingPoint(n_rpm, mm_to_m(ap_mm))
    verdict = classify_probabilistic(point, run.band)
    click.echo(
        json.dumps(
            {
                "n_rpm": n_rpm,
                "ap_mm": ap_mm,
                "class": verdict.class_,
                "p_stable": verdict.p_stable,
                "margin_mm": m_to_mm(verdict.margin),
            },
            indent=2,
            sort_keys=True,
        )
    )


@main.command("tool-modes")
@click.argument("tool_path", type=click.Path())
@click.option("--elements", type=int, default=8, show_default=True,
              help="Beam elements per tool segment.")
@click.option("--n-modes", type=int, default=2, show_default=True)
@click.option("--damping", type=float, default=0.02, show_default=True,
              help="Assumed modal damping ratio.")
@mapped_errors
def tool_modes(tool_path, elements, n_modes, damping):
    """Print the FEM modal table of a tool file (modal-file compatible JSON)."""
    path = Path(tool_path)
    if not path.exists():
        raise NotFoundError(f"tool file not found: {path}")
    geometry, material = parse_tool_document(path.read_text())
    mesh = build_beam_mesh(geometry, elements)
    modes = solve_modes(assemble_system(mesh, material), n_modes, damping)
    click.echo(
        json.dumps(
            {
                "modes": [
                    {
                        "direction": m.direction,
                        "f_hz": m.natural_frequency,
                        "zeta": m.damping_ratio,
                        "k_n_per_m": m.modal_stiffness,
                        "source": m.source,
                    }
                    for m in modes
                ]
            },
            indent=2,
        )
    )


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=None, help="Port (env SLD_PORT, default 8765).")
@click.option("--db", "db_path", type=click.Path(), default=None,
              help="Coefficient DB path (env SLD_DB, default: bundled).")
@click.option("--cache-size", type=int, default=None,
              help="Result cache entries (env SLD_CACHE_SIZE, default 32).")
@click.option("--allow-origin", default=None,
              help="CORS origin for the UI (env SLD_ALLOW_ORIGIN).")
@click.option("--timeout", type=float, default=None,
              help="Compute timeout in seconds (env SLD_TIMEOUT, default 120).")
@mapped_errors
def serve(host, port, db_path, cache_size, allow_origin, timeout):
    """Serve the HTTP API consumed by the explorer UI. Flags beat env vars."""
    import uvicorn

    from .service import ServiceConfig, create_app

    config = ServiceConfig(
        db_path=db_path or os.environ.get("SLD_DB"),
        cache_size=cache_size if cache_size is not None else int(os.environ.get("SLD_CACHE_SIZE", "32")),
        allow_origin=allow_origin or os.environ.get("SLD_ALLOW_ORIGIN"),
        timeout_s=timeout if timeout is not None else float(os.environ.get("SLD_TIMEOUT", "120")),
    )
    resolved_port = port if port is not None else int(os.environ.get("SLD_PORT", "8765"))
    uvicorn.run(create_app(config), host=host, port=resolved_port, log_level="info")


if __name__ == "__main__":
    main()
