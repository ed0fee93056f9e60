"""Command-line front end.

Each subcommand builds the same request model the HTTP service accepts,
executes it in process by default or against a running service with
--server, and renders the response as JSON or CSV. All waveguide numbers
on this surface are 1-based. Exit codes: 0 success, 2 validation error,
3 domain or numeric error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path

import httpx
from pydantic import ValidationError as RequestValidationError

from .errors import DomainError, InputError
from .service import handlers, models

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_DOMAIN = 3

SERVER_ENV = "WALKGATE_SERVER"
TABLE_DIR_ENV = "WALKGATE_TABLE_DIR"


@dataclass(frozen=True)
class RunConfig:
    """A fully parsed invocation: command, output format, server, options."""

    command: str
    fmt: str
    server: str | None
    options: dict


def _parse_modes(text: str) -> list[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip() != ""]
    except ValueError as exc:
        raise InputError(f"could not parse waveguide list {text!r}: {exc}") from exc


def _parse_probs(text: str) -> list[float]:
    try:
        return [float(part) for part in text.split(",") if part.strip() != ""]
    except ValueError as exc:
        raise InputError(f"could not parse probability list {text!r}: {exc}") from exc


def _read_matrix(path: str) -> list[list[float]]:
    p = Path(path)
    if not p.is_file():
        raise InputError(f"matrix file not found: {p}")
    rows = []
    for lineno, line in enumerate(p.read_text().splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            rows.append([float(v) for v in line.split(",")])
        except ValueError as exc:
            raise InputError(f"{p}:{lineno}: {exc}") from exc
    if not rows:
        raise InputError(f"{p}: no numeric rows")
    if len({len(r) for r in rows}) != 1:
        raise InputError(f"{p}: ragged rows")
    return rows


def _json_dump(payload) -> str:
    return json.dumps(payload, indent=2) + "\n"


def _csv_dump(columns: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow(["" if v is None else v for v in row])
    return buf.getvalue()


def _render_truth_table(resp: models.TruthTableResponse, fmt: str) -> str:
    if fmt == "json":
        return _json_dump(resp.model_dump(mode="json"))
    columns = ["input"] + [f"out_{s}" for s in resp.states] + ["success", "phase_rad"]
    rows = [
        [state] + resp.matrix[i] + [resp.success[i], resp.phases_rad[i]]
        for i, state in enumerate(resp.states)
    ]
    return _csv_dump(columns, rows)


def _render_table(resp: models.TableResponse, fmt: str) -> str:
    if fmt == "json":
        return _json_dump(resp.model_dump(mode="json"))
    return _csv_dump(resp.columns, resp.rows)


def _render_bell(resp: models.BellResponse, fmt: str) -> str:
    if fmt == "json":
        return _json_dump(resp.model_dump(mode="json"))
    if resp.counts is None:
        columns = ["state", "prob"]
        rows = [[s, p] for s, p in zip(resp.states, resp.probs)]
    else:
        columns = ["state", "prob", "count", "error"]
        rows = [
            [s, p, c, e]
            for s, p, c, e in zip(resp.states, resp.probs, resp.counts, resp.errors)
        ]
    return _csv_dump(columns, rows)


def _render_design(resp: models.DesignResponse, fmt: str) -> str:
    if fmt == "json":
        return _json_dump(resp.model_dump(mode="json"))
    columns = ["waveguide", "width_um", "gap_after_um"]
    gaps = list(resp.gaps_um) + [None]
    rows = [[i + 1, w, gaps[i]] for i, w in enumerate(resp.widths_um)]
    return _csv_dump(columns, rows)


def _render_fidelity(resp: models.FidelityResponse, fmt: str) -> str:
    if fmt == "csv":
        return _csv_dump(["fidelity"], [[resp.fidelity]])
    return repr(resp.fidelity) + "\n"


def _render_sample(resp: models.SampleResponse, fmt: str) -> str:
    if fmt == "json":
        return _json_dump(resp.model_dump(mode="json"))
    columns = ["bin", "count", "error"]
    rows = [[i, c, e] for i, (c, e) in enumerate(zip(resp.counts, resp.errors))]
    return _csv_dump(columns, rows)


@dataclass(frozen=True)
class _Command:
    path: str
    request_model: type
    response_model: type
    handler: object
    build: object
    render: object
    default_fmt: str


def _build_truth_table(args) -> dict:
    return {"x": args.x, "normalize": args.normalize}


def _build_evolve(args) -> dict:
    return {"input_modes": _parse_modes(args.input), "n_steps": args.steps, "x": args.x}


def _build_hom_scan(args) -> dict:
    return {
        "input_modes": _parse_modes(args.input),
        "tau_min_ps": args.tau_min_ps,
        "tau_max_ps": args.tau_max_ps,
        "n_steps": args.steps,
        "visibility": args.visibility,
        "wavelength_nm": args.wavelength_nm,
        "bandwidth_nm": args.bandwidth_nm,
    }


def _build_bell(args) -> dict:
    return {
        "x": args.x,
        "eta": args.eta,
        "phi": args.phi,
        "target_state": args.target_state,
        "counts": args.counts,
        "seed": args.seed,
    }


def _build_design(args) -> dict:
    table_dir = args.table_dir if args.table_dir is not None else os.environ.get(TABLE_DIR_ENV)
    return {
        "builtin": None if args.target else args.builtin,
        "target_file": args.target,
        "length_um": args.L,
        "reference_mode": args.reference_mode,
        "reference_width_um": args.reference_width_um,
        "table_dir": table_dir,
    }


def _build_fidelity(args) -> dict:
    return {"g": _read_matrix(args.matrix_a), "g_prime": _read_matrix(args.matrix_b)}


def _build_sample(args) -> dict:
    if (args.probs is None) == (args.probs_file is None):
        raise InputError("specify exactly one of --probs or --probs-file")
    if args.probs is not None:
        probs = _parse_probs(args.probs)
    else:
        probs = [v for row in _read_matrix(args.probs_file) for v in row]
    return {"probs": probs, "total": args.total, "seed": args.seed}


COMMANDS = {
    "truth-table": _Command(
        "/truth-table", models.TruthTableRequest, models.TruthTableResponse,
        handlers.handle_truth_table, _build_truth_table, _render_truth_table, "json",
    ),
    "evolve": _Command(
        "/evolve", models.EvolveRequest, models.TableResponse,
        handlers.handle_evolve, _build_evolve, _render_table, "csv",
    ),
    "hom-scan": _Command(
        "/hom-scan", models.HomScanRequest, models.TableResponse,
        handlers.handle_hom_scan, _build_hom_scan, _render_table, "csv",
    ),
    "bell": _Command(
        "/bell", models.BellRequest, models.BellResponse,
        handlers.handle_bell, _build_bell, _render_bell, "json",
    ),
    "design": _Command(
        "/design", models.DesignRequest, models.DesignResponse,
        handlers.handle_design, _build_design, _render_design, "json",
    ),
    "fidelity": _Command(
        "/fidelity", models.FidelityRequest, models.FidelityResponse,
        handlers.handle_fidelity, _build_fidelity, _render_fidelity, "json",
    ),
    "sample": _Command(
        "/sample", models.SampleRequest, models.SampleResponse,
        handlers.handle_sample, _build_sample, _render_sample, "json",
    ),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="walkgate",
        description="Quantum-walk CNOT simulator: truth tables, evolution, "
        "interference scans, entangled-state outputs, and geometry design.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--server",
        default=None,
        help=f"base URL of a running service (default: ${SERVER_ENV} or in-process)",
    )
    common.add_argument("--format", choices=["json", "csv"], default=None, dest="fmt")

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("truth-table", parents=[common], help="post-selected 4x4 transfer matrix")
    p.add_argument("--x", type=float, default=1.0, help="mutual indistinguishability in [0,1]")
    p.add_argument("--normalize", action="store_true", help="row-normalize the matrix")

    p = sub.add_parser("evolve", parents=[common], help="intensity evolution along the array")
    p.add_argument("--input", required=True, help="waveguide number, or pair like 3,4")
    p.add_argument("--steps", type=int, default=101, help="number of grid points")
    p.add_argument("--x", type=float, default=1.0, help="pair overlap (pair input only)")

    p = sub.add_parser("hom-scan", parents=[common], help="coincidences along a delay scan")
    p.add_argument("--input", required=True, help="waveguide pair like 3,4")
    p.add_argument("--tau-min-ps", type=float, default=-2.0)
    p.add_argument("--tau-max-ps", type=float, default=2.0)
    p.add_argument("--steps", type=int, default=81)
    p.add_argument("--visibility", type=float, default=0.946)
    p.add_argument("--wavelength-nm", type=float, default=1550.0)
    p.add_argument("--bandwidth-nm", type=float, default=12.0)

    p = sub.add_parser("bell", parents=[common], help="entangled-state output distribution")
    p.add_argument("--x", type=float, default=1.0)
    p.add_argument("--eta", type=float, default=0.5, help="preparation coupler reflectivity")
    p.add_argument("--phi", type=float, default=0.0, help="preparation phase (radians)")
    p.add_argument("--target-state", type=int, default=0, choices=[0, 1])
    p.add_argument("--counts", type=int, default=None, help="also sample this many events")
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("design", parents=[common], help="solve widths and gaps for a target")
    p.add_argument("--builtin", default="cnot", help="built-in target name (cnot)")
    p.add_argument("--target", default=None, help="JSON file with beta and kappa arrays")
    p.add_argument("--L", type=float, default=700.0, help="array length in um")
    p.add_argument("--table-dir", default=None,
                   help=f"directory with dispersion CSVs (default: ${TABLE_DIR_ENV} or packaged)")
    p.add_argument("--reference-mode", type=int, default=1, help="reference waveguide (1-based)")
    p.add_argument("--reference-width-um", type=float, default=1.5)

    p = sub.add_parser("fidelity", parents=[common], help="overlap of two matrix CSV files")
    p.add_argument("matrix_a")
    p.add_argument("matrix_b")

    p = sub.add_parser("sample", parents=[common], help="multinomial counts from a distribution")
    p.add_argument("--probs", default=None, help="comma-separated probabilities")
    p.add_argument("--probs-file", default=None, help="CSV file of probabilities")
    p.add_argument("--total", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("serve", parents=[common], help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)

    return parser


def _execute_remote(cfg: RunConfig, spec: _Command, req) -> tuple[object, int]:
    url = cfg.server.rstrip("/") + spec.path
    try:
        response = httpx.post(url, json=req.model_dump(mode="json"), timeout=60.0)
    except httpx.HTTPError as exc:
        print(f"error: could not reach {url}: {exc}", file=sys.stderr)
        return None, EXIT_DOMAIN
    if response.status_code == 200:
        return spec.response_model.model_validate(response.json()), EXIT_OK
    try:
        detail = response.json().get("detail", response.text)
    except ValueError:
        detail = response.text
    print(f"error: {detail}", file=sys.stderr)
    if response.status_code == 422:
        return None, EXIT_VALIDATION
    return None, EXIT_DOMAIN


def run(cfg: RunConfig) -> int:
    spec = COMMANDS[cfg.command]
    try:
        req = spec.request_model(**cfg.options)
    except RequestValidationError as exc:
        first = exc.errors()[0]
        loc = ".".join(str(part) for part in first["loc"]) or "request"
        print(f"error: {loc}: {first['msg']}", file=sys.stderr)
        return EXIT_VALIDATION

    if cfg.server:
        resp, code = _execute_remote(cfg, spec, req)
        if code != EXIT_OK:
            return code
    else:
        try:
            resp = spec.handler(req)
        except InputError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_VALIDATION
        except DomainError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_DOMAIN

    sys.stdout.write(spec.render(resp, cfg.fmt))
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)

    if args.command == "serve":
        import uvicorn

        from .service.app import create_app

        uvicorn.run(create_app(), host=args.host, port=args.port)
        return EXIT_OK

    server = args.server if args.server is not None else os.environ.get(SERVER_ENV)
    spec = COMMANDS[args.command]
    try:
        options = spec.build(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    fmt = args.fmt if args.fmt is not None else spec.default_fmt
    return run(RunConfig(command=args.command, fmt=fmt, server=server, options=options))


if __name__ == "__main__":
    sys.exit(main())
