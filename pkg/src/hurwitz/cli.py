"""Command-line front end: ``hurwitz components | reduce | verify``.

Exit codes: 0 success, 1 invalid arguments or input, 2 guard exceeded,
3 internal verification failure.
"""
from __future__ import annotations

import hashlib
import json
import sys
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

import click

from . import __version__
from .errors import GuardExceeded, RegimeError, VerificationError
from .orbits import GeneratorSet, components, reports_to_csv, reports_to_json, state_guard
from .permutation import Partition
from .system import MONODROMY_CHOICES, SystemFilter, check_enumeration_guard, system_from_dict

EXIT_OK, EXIT_INVALID, EXIT_GUARD, EXIT_INTERNAL = 0, 1, 2, 3
_argv: list[str] = []


@dataclass
class RunManifest:
    command: list[str]
    parameters: dict
    guards: dict
    wall_time: float
    counts: dict
    version: str = __version__
    output_sha256: str = ""
    seed: int | None = None
    extra: dict = field(default_factory=dict)

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=1, sort_keys=True)


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        click.echo(text, nl=not text.endswith("\n"))


def _write_manifest(out: str | None, manifest: RunManifest, path: str | None) -> None:
    target = path or (f"{out}.manifest.json" if out else None)
    if target:
        Path(target).write_text(manifest.to_json() + "\n")


def _sha(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()


@click.group()
@click.version_option(__version__)
def main() -> None:
    """Braid orbits and normal forms of Hurwitz systems."""


@main.command("components")
@click.option("--d", "d", type=int, required=True, help="Degree of the covering.")
@click.option("--n", "n", type=int, required=True,
              help="Number of simple branch points (the special point is extra).")
@click.option("--g", "g", type=int, required=True, help="Genus of the base curve.")
@click.option("--filter", "mono", type=click.Choice(MONODROMY_CHOICES), default="any",
              help="Keep only orbits with this monodromy type.")
@click.option("--mode", type=click.Choice(["classes", "systems"]), default="classes")
@click.option("--gens", default=None, help="full, tail-fixed or reduced:a,b (default by space).")
@click.option("--special-tail", default=None, help="Cycle type of the special branch point, e.g. 2,2.")
@click.option("--out", default=None, type=click.Path(dir_okay=False), help="Output file (default stdout).")
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv")
@click.option("--jobs", type=int, default=1, help="Worker threads; never changes the output.")
@click.option("--guard", type=int, default=None, help="Visited-state cap (else HURWITZ_GUARD_STATES).")
@click.option("--manifest", default=None, type=click.Path(dir_okay=False),
              help="Manifest path (default OUT.manifest.json when --out is given).")
def cmd_components(d, n, g, mono, mode, gens, special_tail, out, fmt, jobs, guard, manifest):
    """Count braid orbits of simple Hurwitz systems and print one row per orbit."""
    start = time.perf_counter()
    if d < 1 or n < 0 or g < 0 or jobs < 1:
        raise click.BadParameter("need d >= 1, n >= 0, g >= 0, jobs >= 1")
    tail = None
    if special_tail:
        try:
            tail = Partition([int(x) for x in special_tail.split(",")])
        except ValueError as exc:
            raise click.BadParameter(f"--special-tail: {exc}") from None
        if tail.degree != d:
            raise click.BadParameter(f"--special-tail must be a partition of {d}")
    total_n = n + (1 if tail is not None else 0)
    try:
        flt = SystemFilter(special_tail=tail, monodromy=mono)
        gen_set = GeneratorSet.parse(gens) if gens else None
    except ValueError as exc:
        raise click.BadParameter(str(exc)) from None
    if total_n == 0 or (tail is None and n < 1):
        reports = []
    else:
        try:
            check_enumeration_guard(d, total_n, g, flt)
        except ValueError as exc:
            raise click.BadParameter(str(exc)) from None
        reports = components(d, total_n, g, flt, gen_set, mode, jobs=jobs, guard=guard)
    text = reports_to_csv(reports) if fmt == "csv" else reports_to_json(reports) + "\n"
    _emit(text, out)
    _write_manifest(out, RunManifest(
        command=["hurwitz"] + _argv,
        parameters={"d": d, "n": n, "g": g, "filter": mono, "mode": mode, "gens": gens or "",
                    "special_tail": special_tail or "", "format": fmt},
        guards={"states": state_guard(guard)},
        wall_time=round(time.perf_counter() - start, 3),
        counts={"components": len(reports), "states": sum(r.orbit_size for r in reports)},
        output_sha256=_sha(text),
    ), manifest)


@main.command("reduce")
@click.option("--input", "input_path", required=True, type=click.Path(dir_okay=False),
              help="System JSON ('-' for stdin).")
@click.option("--target", type=click.Choice(["auto", "eq4.45a", "eq4.49", "eq5.65bis", "eq6.81", "eq6.72", "eq6.76"]),
              default="auto")
@click.option("--out", default=None, type=click.Path(dir_okay=False))
def cmd_reduce(input_path, target, out):
    """Reduce a system to its normal form and print the verified certificate."""
    from .reduce import full_reduce

    try:
        text = sys.stdin.read() if input_path == "-" else Path(input_path).read_text()
        system = system_from_dict(json.loads(text))
    except (OSError, ValueError, KeyError, TypeError) as exc:
        _fail(out, "invalid_input", str(exc), EXIT_INVALID)
    try:
        result = full_reduce(system, target)
    except RegimeError as exc:
        _fail(out, "regime", str(exc), EXIT_INVALID)
    except GuardExceeded as exc:
        _fail(out, "guard", str(exc), EXIT_GUARD)
    except VerificationError as exc:
        _fail(out, "verification", str(exc), EXIT_INTERNAL)
    except ValueError as exc:
        _fail(out, "invalid_input", str(exc), EXIT_INVALID)
    _emit(result.to_json() + "\n", out)


def _fail(out: str | None, kind: str, message: str, code: int):
    payload = json.dumps({"error": kind, "message": message}) + "\n"
    if out:
        Path(out).write_text(payload)
    click.echo(payload, err=True, nl=False)
    raise SystemExit(code)


@main.command("verify")
@click.option("--suite", type=click.Choice(["moves", "orbits", "reducers", "all"]), default="all")
@click.option("--samples", type=click.IntRange(min=0), default=100)
@click.option("--seed", type=int, default=0)
@click.option("--mutate", default=None, help="Corrupt one move formula to check that the suite notices.")
def cmd_verify(suite, samples, seed, mutate):
    """Run the seeded property suites; exit 0 iff every property holds."""
    from .braid import MUTATIONS
    from .verify import run_suite

    if mutate is not None and mutate not in MUTATIONS:
        raise click.BadParameter(f"--mutate must be one of {', '.join(MUTATIONS)}")
    results = run_suite(suite, samples, seed, mutate)
    for res in results:
        click.echo(res.line())
    if not all(r.passed for r in results):
        raise SystemExit(EXIT_INVALID)


def run(argv: list[str] | None = None) -> int:
    """Invoke the CLI and return its exit code instead of exiting."""
    global _argv
    _argv = list(sys.argv[1:] if argv is None else argv)
    try:
        main.main(args=_argv, prog_name="hurwitz", standalone_mode=False)
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.ClickException as exc:
        exc.show()
        return EXIT_INVALID
    except click.exceptions.Abort:
        return EXIT_INVALID
    except GuardExceeded as exc:
        click.echo(json.dumps({"error": "guard", "message": str(exc)}), err=True)
        return EXIT_GUARD
    except SystemExit as exc:
        return int(exc.code or 0)
    return EXIT_OK


def entry() -> None:
    sys.exit(run())


if __name__ == "__main__":
    entry()
