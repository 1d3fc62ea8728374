"""Braid orbits of Hurwitz systems: single-orbit BFS and whole-space component tables."""
from __future__ import annotations

import csv
import io
import json
import os
from collections import deque
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .braid import BraidGenerator, all_generators, apply_move, rho, sigma, tau, word_inverse
from .engine import Layout, get_table, orbit_partition
from .errors import GuardExceeded
from .normal_forms import NORMAL_FORMS
from .system import (
    HurwitzSystem,
    MonodromyReport,
    SystemFilter,
    check_enumeration_guard,
    class_key,
    monodromy_matches,
    monodromy_report,
    validate,
)

__all__ = [
    "GeneratorSet",
    "OrbitReport",
    "orbit",
    "orbit_members",
    "components",
    "component_table",
    "reduced_equals_full",
    "expected_imprimitive_components",
    "reports_to_csv",
    "reports_to_json",
    "CSV_COLUMNS",
    "state_guard",
]

DEFAULT_GUARD = 50_000_000
CSV_COLUMNS = ("rep_key_hex", "mode", "orbit_size", "monodromy", "transitive", "primitive", "blocks", "normal_form")
MODES = ("systems", "classes")
_LABEL_ORDER = {"full_symmetric": 0, "primitive_transitive": 1, "imprimitive_transitive": 2, "intransitive": 3}


def state_guard(override: int | None = None) -> int:
    """Visited-set cap: explicit value, else ``HURWITZ_GUARD_STATES``, else 5e7."""
    if override is not None:
        return int(override)
    env = os.environ.get("HURWITZ_GUARD_STATES")
    return int(env) if env else DEFAULT_GUARD


@dataclass(frozen=True)
class GeneratorSet:
    """Which braid moves generate the action.

    ``full`` is every sigma, rho and tau; ``reduced`` keeps all sigma but only
    rho_{a,k} and tau_{b,k}; ``tail_fixed`` keeps the last strand in place
    (sigma_1..sigma_{n-2}, sigma_{n-1}^2, every rho and tau), which is the
    action on systems whose last entry is a marked special branch point.
    """

    kind: str = "full"
    a: int = 0
    b: int = 0

    def __post_init__(self):
        if self.kind not in ("full", "reduced", "tail_fixed"):
            raise ValueError(f"unknown generator set {self.kind!r}")
        if self.kind == "reduced" and (self.a < 1 or self.b < 1):
            raise ValueError("reduced generators need strand indices a, b >= 1")

    @classmethod
    def parse(cls, text: str) -> "GeneratorSet":
        text = text.strip()
        if text in ("full", "tail_fixed", "tail-fixed"):
            return cls(text.replace("-", "_"))
        if text.startswith("reduced:"):
            a, b = text.split(":", 1)[1].split(",")
            return cls("reduced", int(a), int(b))
        raise ValueError(f"cannot parse generator set {text!r}; use full, tail-fixed or reduced:a,b")

    def __str__(self) -> str:
        return f"reduced:{self.a},{self.b}" if self.kind == "reduced" else self.kind.replace("_", "-")

    def words(self, n: int, g: int) -> list[tuple[BraidGenerator, ...]]:
        """One word per generator, prime direction only."""
        if self.kind == "reduced" and not (self.a <= n and self.b <= n):
            raise ValueError(f"reduced indices ({self.a},{self.b}) exceed n={n}")
        if self.kind == "full":
            return [(gen,) for gen in all_generators(n, g, ("prime",))]
        if self.kind == "reduced":
            out = [(sigma(j),) for j in range(1, n)]
            out += [(rho(self.a, k),) for k in range(1, g + 1)]
            out += [(tau(self.b, k),) for k in range(1, g + 1)]
            return out
        out = [(sigma(j),) for j in range(1, n - 1)]
        if n >= 2:
            out.append((sigma(n - 1), sigma(n - 1)))
        out += [(rho(i, k),) for i in range(1, n + 1) for k in range(1, g + 1)]
        out += [(tau(i, k),) for i in range(1, n + 1) for k in range(1, g + 1)]
        return out

    def all_words(self, n: int, g: int) -> list[tuple[BraidGenerator, ...]]:
        prime = self.words(n, g)
        return prime + [word_inverse(w) for w in prime]


@dataclass(frozen=True)
class OrbitReport:
    representative: HurwitzSystem
    orbit_size: int
    mode: str
    monodromy: MonodromyReport
    normal_form_matched: str | None = None
    systems: int = 0  # number of systems covered (equals orbit_size in systems mode)

    @property
    def key_hex(self) -> str:
        if self.mode == "classes":
            return class_key(self.representative).hex()
        return self.representative.serialize().hex()

    def row(self) -> dict:
        an = self.monodromy.analysis
        blocks = "|".join("{" + ",".join(map(str, b)) + "}" for b in an.block_system or ())
        return {
            "rep_key_hex": self.key_hex,
            "mode": self.mode,
            "orbit_size": self.orbit_size,
            "monodromy": self.monodromy.label,
            "transitive": str(an.transitive).lower(),
            "primitive": "" if an.primitive is None else str(an.primitive).lower(),
            "blocks": blocks,
            "normal_form": self.normal_form_matched or "",
        }


def _apply_word(sys: HurwitzSystem, word) -> HurwitzSystem:
    for gen in word:
        sys = apply_move(sys, gen)
    return sys


def _default_gens(flt: SystemFilter | None) -> GeneratorSet:
    return GeneratorSet("tail_fixed") if flt is not None and flt.special_tail is not None else GeneratorSet()


def orbit_members(start: HurwitzSystem, gens: GeneratorSet | None = None, mode: str = "classes",
                  guard: int | None = None) -> set[bytes]:
    """Breadth-first closure of ``start`` under ``gens`` and their inverses."""
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    problems = validate(start)
    if problems:
        raise ValueError(f"start system is invalid: {problems}")
    gens = gens or GeneratorSet()
    cap = state_guard(guard)
    words = gens.all_words(start.n, start.g)
    keyf = (lambda s: class_key(s).bytes) if mode == "classes" else (lambda s: s.serialize())
    first = keyf(start)
    seen = {first}
    queue = deque([first])
    while queue:
        cur = HurwitzSystem.deserialize(queue.popleft())
        for word in words:
            key = keyf(_apply_word(cur, word))
            if key not in seen:
                seen.add(key)
                if len(seen) > cap:
                    raise GuardExceeded(f"orbit exceeds {cap} states")
                queue.append(key)
    return seen


def _matching_normal_form(keys: set[bytes], sys: HurwitzSystem, mode: str, tail) -> str | None:
    for name, build in NORMAL_FORMS.items():
        nf = build(sys.d, sys.n, sys.g, tail)
        if nf is None:
            continue
        key = class_key(nf).bytes if mode == "classes" else nf.serialize()
        if key in keys:
            return name
    return None


def orbit(start: HurwitzSystem, gens: GeneratorSet | None = None, mode: str = "classes",
          guard: int | None = None, special_tail=None) -> OrbitReport:
    keys = orbit_members(start, gens, mode, guard)
    rep = HurwitzSystem.deserialize(min(keys))
    return OrbitReport(rep, len(keys), mode, monodromy_report(rep),
                       _matching_normal_form(keys, rep, mode, special_tail),
                       systems=len(keys) if mode == "systems" else 0)


def component_table(d: int, n: int, g: int, flt: SystemFilter | None = None, gens: GeneratorSet | None = None,
                    mode: str = "classes", jobs: int = 1, guard: int | None = None):
    """Orbit partition of the shape-filtered space (monodromy is not filtered here)."""
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    flt = flt or SystemFilter()
    gens = gens or _default_gens(flt)
    if flt.special_tail is not None and gens.kind != "tail_fixed":
        raise ValueError("with a special tail only the tail-fixed generator set preserves the space")
    check_enumeration_guard(d, n, g, flt)
    layout = Layout(get_table(d), n, g)
    return orbit_partition(layout, flt, gens.words(n, g), mode, jobs=jobs, guard=state_guard(guard))


def components(d: int, n: int, g: int, flt: SystemFilter | None = None, gens: GeneratorSet | None = None,
               mode: str = "classes", jobs: int = 1, guard: int | None = None) -> list[OrbitReport]:
    """Every orbit of the filtered space, sorted by (monodromy, size, representative key).

    Monodromy is constant along an orbit, so the monodromy filter is applied to
    whole orbits through their representatives.
    """
    flt = flt or SystemFilter()
    table = component_table(d, n, g, flt, gens, mode, jobs, guard)
    layout = table.layout
    summary = table.summary()
    total = sum(s for _, s, _ in summary)
    if total != len(table.codes):
        raise AssertionError("orbit sizes do not add up to the number of states")

    nf_component: dict[int, str] = {}
    for name, build in NORMAL_FORMS.items():
        nf = build(d, n, g, flt.special_tail)
        if nf is None or not flt.accepts_shape(nf):
            continue
        row = layout.table.row_from_system(nf)[None, :]
        code = int(layout.canonical(row)[0] if mode == "classes" else layout.encode(row)[0])
        comp = table.component_of(code)
        if comp >= 0:
            nf_component.setdefault(comp, name)

    reports = []
    for comp, (code, size, systems) in enumerate(summary):
        rep = layout.table.system_from_row(layout.decode(np.array([code]))[0], n, g)
        mono = monodromy_report(rep)
        if not monodromy_matches(mono.label, flt.monodromy):
            continue
        reports.append(OrbitReport(rep, size, mode, mono, nf_component.get(comp), systems))
    reports.sort(key=lambda r: (_LABEL_ORDER[r.monodromy.label], r.orbit_size, r.representative.serialize()))
    return reports


def reduced_equals_full(d: int, n: int, g: int, flt: SystemFilter | None = None, a: int = 1, b: int = 1,
                        mode: str = "classes") -> bool:
    """Whether the reduced generators (rho_{a,k}, tau_{b,k}) split the space like the full set."""
    full = component_table(d, n, g, flt, GeneratorSet("full"), mode)
    red = component_table(d, n, g, flt, GeneratorSet("reduced", a, b), mode)
    return bool(np.array_equal(full.labels, red.labels))


def expected_imprimitive_components(d: int, g: int = 1) -> int:
    """Number of index-m sublattices of Z^2 summed over proper divisors m of d.

    Sublattices are counted through their Hermite normal forms [[a,0],[c,b]]
    with a*b = m and 0 <= c < b.
    """
    if g != 1:
        raise ValueError("only the genus-1 lattice count is implemented")
    if d < 1:
        raise ValueError("d must be positive")
    total = 0
    for m in range(2, d):
        if d % m:
            continue
        for a in range(1, m + 1):
            if m % a == 0:
                total += m // a  # choices of c in [0, b)
    return total


def reports_to_csv(reports: Sequence[OrbitReport]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for r in reports:
        writer.writerow(r.row())
    return buf.getvalue()


def reports_to_json(reports: Sequence[OrbitReport]) -> str:
    from .system import system_to_dict

    out = []
    for r in reports:
        row = r.row()
        row["orbit_size"] = r.orbit_size
        row["systems"] = r.systems
        row["representative"] = system_to_dict(r.representative)
        out.append(row)
    return json.dumps(out, indent=1, sort_keys=True)
