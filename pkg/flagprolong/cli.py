"""
Interfejs wiersza poleceń flagprolong.

Użycie:
    python -m flagprolong job.json                     # Raport JSON na stdout
    python -m flagprolong --preset ode_tower_3         # Predefiniowane zadanie
    python -m flagprolong job.json --format table      # Tabela wymiarów
    python -m flagprolong --print-schema jobspec       # Schemat JSON zadania
    python -m flagprolong --list-presets               # Lista zadań

Exit codes: 0 success, 2 invalid job, 3 mathematical precondition failure,
4 capped prolongation under --require-finite.
"""

import argparse
import json
import logging
import sys
import time
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

from pydantic import ValidationError

from flagprolong import config
from flagprolong.distributions import DistributionSpec
from flagprolong.distributions import growth_vector as distribution_growth
from flagprolong.distributions import symbol_at
from flagprolong.exactla import Mat
from flagprolong.exceptions import FlagProlongError, InvalidFlagSymbol, InvalidSymbol
from flagprolong.flags import (
    GradedEndomorphism,
    direct_sum,
    flag_prolong,
    flag_prolong_param,
    grading_compatibility,
    make_delta_rp,
    make_flag_symbol,
    make_tau_m,
)
from flagprolong.jobs import get_job_config, get_predefined_jobs
from flagprolong.models import JobSpec, Report
from flagprolong.models.job import AlgebraDescriptor, FlagDescriptor, G0Descriptor, TauSpec
from flagprolong.models.schemas import dump_schema, schema_document
from flagprolong.prolong import (
    Subalgebra0,
    derivations0,
    normalization_complement,
    restrict_to,
    spencer_gr,
    tanaka_prolong,
)
from flagprolong.symbols import (
    NilpotentSymbol,
    build_commutative,
    build_free_nilpotent,
    build_heisenberg,
    growth_vector,
    load_symbol,
    validate,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INVALID_JOB = 2
EXIT_PRECONDITION = 3
EXIT_NOT_FINITE = 4


def setup_logging(level: Optional[str] = None, log_file: Optional[str] = None) -> None:
    """Skonfiguruj logowanie (stderr plus opcjonalny plik)."""
    handlers: List[logging.Handler] = [logging.StreamHandler(sys.stderr)]
    target = log_file if log_file is not None else config.LOG_FILE
    if target:
        handlers.append(logging.FileHandler(target))
    logging.basicConfig(
        level=getattr(logging, (level or config.LOG_LEVEL).upper(), logging.INFO),
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        handlers=handlers,
        force=True,
    )


# --- descriptors -> library objects --------------------------------------------


def _matrix(rows) -> Mat:
    return Mat.from_rows(rows)


def build_algebra(descriptor: AlgebraDescriptor) -> NilpotentSymbol:
    if descriptor.commutative is not None:
        return build_commutative(descriptor.commutative)
    if descriptor.heisenberg is not None:
        return build_heisenberg(descriptor.heisenberg)
    if descriptor.free is not None:
        generators, step = descriptor.free
        return build_free_nilpotent(generators, step)
    return load_symbol(descriptor.custom, check=True)


def build_datum(descriptor: FlagDescriptor) -> GradedEndomorphism:
    if descriptor.delta_rp is not None:
        r, p = descriptor.delta_rp
        return make_delta_rp(r, p)
    if descriptor.tau_m is not None:
        tau = descriptor.tau_m
        if isinstance(tau, TauSpec):
            return make_tau_m(tau.m, tau.sign)
        return make_tau_m(tau)
    if descriptor.sum is not None:
        return direct_sum([build_datum(part) for part in descriptor.sum])
    custom = descriptor.custom
    omega = _matrix(custom.omega) if custom.omega is not None else None
    return GradedEndomorphism(tuple(custom.weights), _matrix(custom.matrix), omega, "custom")


def _check_flag_algebra(descriptor: AlgebraDescriptor, m: NilpotentSymbol) -> None:
    if descriptor.commutative is not None and m.omega is None:
        expected = descriptor.commutative
    elif descriptor.heisenberg is not None and m.omega is not None:
        expected = descriptor.heisenberg
    else:
        raise InvalidFlagSymbol(
            f"Flag prolongations act on commutative or Heisenberg symbols, not on {m.name}"
        )
    if expected != m.total_dim:
        raise InvalidFlagSymbol(f"Flag symbol lives on {m.name}, algebra has dimension {expected}")


def build_g0(
    descriptor: Optional[G0Descriptor],
    algebra: AlgebraDescriptor,
    max_degree: int,
) -> Tuple[NilpotentSymbol, Subalgebra0]:
    """Resolve (m, g0); flag g0 replaces m by the symbol the flag datum lives on."""
    descriptor = descriptor or G0Descriptor()
    if descriptor.family == "flag_prolongation" and descriptor.parameterized:
        # u^{F,par} acts on the commutative gr g^-1 through its nonnegative part
        datum = build_datum(descriptor.flag_prolongation)
        sym = make_flag_symbol(datum, ambient=descriptor.ambient or "sp", parameterized=True)
        m = build_commutative(datum.dim)
        _check_flag_algebra(algebra, m)
        prolongation = flag_prolong_param(sym, max_degree)
        return m, prolongation.as_subalgebra0(m, nonnegative=True)
    if descriptor.family == "flag_prolongation":
        datum = build_datum(descriptor.flag_prolongation)
        sym = make_flag_symbol(datum, ambient=descriptor.ambient)
        m = sym.ambient.parent
        _check_flag_algebra(algebra, m)
        prolongation = flag_prolong(sym, max_degree)
        return m, prolongation.as_subalgebra0(m)

    m = build_algebra(algebra)
    if descriptor.family == "full":
        return m, derivations0(m)
    if descriptor.family in ("csp", "sp"):
        omega = _matrix(descriptor.omega) if descriptor.omega is not None else None
        return m, restrict_to(descriptor.family, m, omega=omega)
    matrices = [_matrix(rows) for rows in descriptor.matrices]
    return m, restrict_to("custom", m, matrices=matrices)


def _dims(mapping: Dict[int, int]) -> Dict[str, int]:
    return {str(k): v for k, v in sorted(mapping.items())}


# --- commands ------------------------------------------------------------------------


def _run_check(job: JobSpec, report: Dict[str, Any], **_) -> None:
    descriptor = job.algebra
    if descriptor.custom is not None:
        m = load_symbol(descriptor.custom, check=False)
    else:
        m = build_algebra(descriptor)
    result = validate(m)
    report["algebra"] = m.to_dict()
    report["dims"] = _dims(m.dims)
    report["total_dim"] = m.total_dim
    report["checks"] = result.as_dict()
    report["details"] = {"growth_vector": growth_vector(m), "name": m.name}
    if not result.ok:
        failed = [name for name, ok in result.as_dict().items() if not ok]
        raise InvalidSymbol(f"{m.name} fails {', '.join(failed)}")


def _run_derivations(job: JobSpec, report: Dict[str, Any], emit_bases: bool, **_) -> None:
    m, g0 = build_g0(job.g0, job.algebra, job.max_degree)
    report["algebra"] = m.to_dict()
    report["dims"] = {"0": g0.dim}
    report["total_dim"] = g0.dim
    report["checks"] = g0.verify()
    report["details"] = {"name": g0.name}
    if emit_bases:
        report["bases"] = {"0": g0.matrices()}


def _run_prolong(
    job: JobSpec, report: Dict[str, Any], emit_bases: bool, emit_brackets: bool, **_
) -> None:
    m, g0 = build_g0(job.g0, job.algebra, job.max_degree)
    algebra = tanaka_prolong(m, g0, job.max_degree)
    report["algebra"] = m.to_dict()
    report["dims"] = _dims(algebra.graded_dims())
    report["total_dim"] = algebra.total_dim
    report["status"] = algebra.status.as_dict()
    report["checks"] = dict(algebra.checks)
    report["details"] = {"g0": g0.name, "status": str(algebra.status)}
    if emit_bases:
        bases = algebra.describe_basis()
        bases["0"] = g0.matrices()
        report["bases"] = bases
    if emit_brackets:
        report["brackets"] = algebra.bracket_table()


def _run_flag(job: JobSpec, report: Dict[str, Any], emit_bases: bool, **_) -> None:
    parameterized = job.command == "flag-prolong-param"
    datum = build_datum(job.symbol)
    sym = make_flag_symbol(datum, ambient=job.ambient, parameterized=parameterized)
    if parameterized:
        result = flag_prolong_param(sym, job.max_degree)
    else:
        result = flag_prolong(sym, job.max_degree)
    family = sym.ambient.name.split("(")[0]
    report["algebra"] = sym.ambient.parent.to_dict()
    report["dims"] = _dims(result.dims())
    report["total_dim"] = result.total_dim
    report["status"] = result.status.as_dict()
    report["checks"] = {"subalgebra": result.is_subalgebra()}
    report["details"] = {
        "symbol": datum.name,
        "weights": {str(w): n for w, n in datum.graded_dims().items()},
        "ambient": sym.ambient.name,
        "compatibility": grading_compatibility(family, datum.flag(), datum.omega),
        "status": str(result.status),
    }
    if emit_bases:
        report["bases"] = {
            str(k): [[[str(x) for x in row] for row in a.to_rows()] for a in result.matrices(k)]
            for k in sorted(result.components)
        }


def _run_spencer(job: JobSpec, report: Dict[str, Any], **_) -> None:
    k = job.degree
    m, g0 = build_g0(job.g0, job.algebra, job.max_degree)
    algebra = tanaka_prolong(m, g0, max(k + 1, 1), run_checks=False)
    spencer = spencer_gr(algebra, k)
    kernel = spencer.kernel_on_negative()
    if k + 1 <= algebra.top:
        matches = kernel == algebra.components[k].solution
    else:
        matches = kernel.dim == 0
    report["algebra"] = m.to_dict()
    report["dims"] = _dims(algebra.graded_dims())
    report["total_dim"] = algebra.total_dim
    report["status"] = algebra.status.as_dict()
    report["checks"] = {
        "kernel_is_next_prolongation": matches,
        "kernel_vanishes_on_nonnegative": spencer.kernel_vanishes_on_nonnegative(),
    }
    report["details"] = {
        "degree": k,
        "domain": {str(key): n for key, n in spencer.domain.summands},
        "target": {f"{kind}:{i}": n for (kind, i), n in spencer.target.summands},
        "rank": spencer.rank(),
        "kernel_dim": spencer.kernel().dim,
        "normalization_dim": normalization_complement(spencer).dim,
    }


def _distribution(job: JobSpec) -> DistributionSpec:
    return DistributionSpec.from_dict(job.distribution.model_dump())


def _run_symbol(job: JobSpec, report: Dict[str, Any], **_) -> None:
    d = _distribution(job)
    m = symbol_at(d, job.point, job.sample_points)
    report["algebra"] = m.to_dict()
    report["dims"] = _dims(m.dims)
    report["total_dim"] = m.total_dim
    report["checks"] = validate(m).as_dict()
    report["details"] = {"growth_vector": growth_vector(m), "distribution": d.name}


def _run_growth(job: JobSpec, report: Dict[str, Any], **_) -> None:
    if job.distribution is not None:
        d = _distribution(job)
        vector = distribution_growth(d, job.point)
        report["details"] = {"growth_vector": vector, "distribution": d.name}
    else:
        m = build_algebra(job.algebra)
        vector = growth_vector(m)
        report["algebra"] = m.to_dict()
        report["details"] = {"growth_vector": vector, "name": m.name}
    report["dims"] = {str(-(i + 1)): n - (vector[i - 1] if i else 0) for i, n in enumerate(vector)}
    report["total_dim"] = vector[-1] if vector else 0


COMMANDS = {
    "check": _run_check,
    "derivations": _run_derivations,
    "prolong": _run_prolong,
    "flag-prolong": _run_flag,
    "flag-prolong-param": _run_flag,
    "spencer": _run_spencer,
    "symbol": _run_symbol,
    "growth": _run_growth,
}


class JobFailed(Exception):
    """Precondition failure that still carries the partial report."""

    def __init__(self, error: FlagProlongError, report: Optional[Report]):
        super().__init__(str(error))
        self.error = error
        self.report = report


def run(job: JobSpec, emit_bases: bool = False, emit_brackets: bool = False) -> Report:
    """Execute one job and return its report.

    FlagProlongError propagates unchanged, except for ``check`` where the
    validator results are attached through ``JobFailed``.
    """
    logger.info("CLI: running %s", job.command)
    start = time.perf_counter()
    fields: Dict[str, Any] = {
        "command": job.command,
        "job": job.model_dump(mode="json", exclude_none=True),
    }
    try:
        COMMANDS[job.command](
            job, fields, emit_bases=emit_bases, emit_brackets=emit_brackets
        )
    except FlagProlongError as exc:
        if job.command == "check" and "checks" in fields:
            raise JobFailed(exc, Report(**fields)) from exc
        raise
    fields["timing"] = {"seconds": round(time.perf_counter() - start, 6)}
    report = Report(**fields)
    logger.info("CLI: %s done, total dim %s", job.command, report.total_dim)
    return report


# --- output ------------------------------------------------------------------------


def format_table(report: Report) -> str:
    lines = [f"degree {k}: dim {d}" for k, d in sorted(report.dims.items(), key=lambda kv: int(kv[0]))]
    if report.status is not None:
        lines.append(f"status: {report.status.kind.capitalize()} {report.status.degree}")
    return "\n".join(lines) + "\n"


def format_json(report: Report) -> str:
    return json.dumps(report.model_dump(mode="json", exclude_none=True), indent=2, sort_keys=True) + "\n"


def emit_error(kind: str, message: str, exit_code: int) -> int:
    payload = {"error": kind, "message": message, "exit_code": exit_code}
    sys.stderr.write(json.dumps(payload) + "\n")
    return exit_code


def _write(text: str, output: Optional[str]) -> None:
    if output:
        Path(output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def load_job(path: Optional[str], preset: Optional[str]) -> JobSpec:
    if preset:
        return JobSpec.model_validate(get_job_config(preset))
    if not path:
        raise ValueError("Pass a job file or --preset")
    with open(path, encoding="utf-8") as handle:
        data = json.load(handle)
    return JobSpec.model_validate(data)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="flagprolong",
        description="Tanaka prolongations, flag symbols and Spencer operators over Q",
    )
    parser.add_argument("job", nargs="?", help="Job file (JSON)")
    parser.add_argument("--preset", help="Run a predefined job instead of a job file")
    parser.add_argument("--list-presets", action="store_true", help="List predefined jobs")
    parser.add_argument(
        "--print-schema", choices=["jobspec", "report"], help="Print a JSON schema and exit"
    )
    parser.add_argument("--emit-bases", action="store_true", help="Include bases in the report")
    parser.add_argument(
        "--emit-brackets", action="store_true", help="Include structure constants in the report"
    )
    parser.add_argument(
        "--require-finite", action="store_true", help="Exit 4 when the prolongation is capped"
    )
    parser.add_argument("--output", help="Write the report to this path")
    parser.add_argument("--format", choices=["json", "table"], default="json")
    parser.add_argument("--log-level", help=f"Logging level (default {config.LOG_LEVEL})")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    setup_logging(args.log_level)

    if args.print_schema:
        _write(dump_schema(schema_document(args.print_schema)), args.output)
        return EXIT_OK
    if args.list_presets:
        _write(json.dumps(get_predefined_jobs(), indent=2, ensure_ascii=False) + "\n", args.output)
        return EXIT_OK

    try:
        job = load_job(args.job, args.preset)
    except ValidationError as exc:
        return emit_error("invalid_job", str(exc), EXIT_INVALID_JOB)
    except json.JSONDecodeError as exc:
        return emit_error("invalid_json", str(exc), EXIT_INVALID_JOB)
    except (OSError, ValueError) as exc:
        return emit_error("invalid_job", str(exc), EXIT_INVALID_JOB)

    render = format_table if args.format == "table" else format_json
    try:
        report = run(job, emit_bases=args.emit_bases, emit_brackets=args.emit_brackets)
    except JobFailed as exc:
        if exc.report is not None:
            _write(render(exc.report), args.output)
        return emit_error(exc.error.kind, str(exc.error), EXIT_PRECONDITION)
    except FlagProlongError as exc:
        logger.error("CLI: %s failed: %s", job.command, exc)
        return emit_error(exc.kind, str(exc), EXIT_PRECONDITION)
    except (ValueError, TypeError) as exc:
        return emit_error("invalid_job", str(exc), EXIT_INVALID_JOB)

    _write(render(report), args.output)
    require_finite = args.require_finite or job.require_finite
    if require_finite and report.status is not None and report.status.kind == "capped":
        return emit_error(
            "not_finite",
            f"Prolongation capped at degree {report.status.degree} without terminating",
            EXIT_NOT_FINITE,
        )
    return EXIT_OK


__all__ = [
    "EXIT_OK",
    "EXIT_INVALID_JOB",
    "EXIT_PRECONDITION",
    "EXIT_NOT_FINITE",
    "setup_logging",
    "build_algebra",
    "build_datum",
    "build_g0",
    "run",
    "format_table",
    "format_json",
    "load_job",
    "build_parser",
    "main",
]
