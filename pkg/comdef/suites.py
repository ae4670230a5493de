# -*- coding: utf-8 -*-
"""
Verification suites run by ``comdef verify``.

Each suite returns :class:`~comdef.universe.CheckReport` objects; a suite
passes when none of its reports lists a failure.
"""

import logging
import time
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .catalog import build, reference
from .derivation import Bounds, bfs_consequence
from .evaluate import Evaluator, naive_evaluate
from .lattice import (
    FiniteLattice,
    random_lattice,
    semantic_atoms,
    semantic_chain_downset,
    semantic_lower_modular,
    semantic_minimal,
    semantic_neutral,
)
from .logic import (
    And,
    Eq,
    Exists,
    Forall,
    Formula,
    Implies,
    Join,
    Leq,
    Lt,
    Meet,
    Min,
    Not,
    Or,
    Term,
    Var,
    free_vars,
)
from .space import canonical_identities
from .universe import (
    CheckReport,
    LabeledLattice,
    UniverseSpec,
    build_universe,
    decomposition_check,
    lemma8_check,
    model_facts,
    stability_check,
)
from .utils import env_int
from .varieties import AbelianGroup, NilD, NilN, defining_bases

logger = logging.getLogger(__name__)

SUITES = ("oracles", "paper-F2", "paper-F1", "lemma8", "facts", "soundness", "decomposition", "stability")

# earlier names, still accepted
SUITE_ALIASES = {"definability-F2": "paper-F2", "definability-F1": "paper-F1", "nil-zr": "lemma8"}

NIL_ZR_PAIRS = ((2, 4), (3, 4), (2, 5), (3, 5), (4, 5))

# random formulas


def random_term(rng: np.random.Generator, names: Sequence[str], depth: int) -> Term:
    if depth <= 0 or rng.random() < 0.5:
        return Var(names[int(rng.integers(len(names)))])
    kind = Meet if rng.random() < 0.5 else Join
    return kind(random_term(rng, names, depth - 1), random_term(rng, names, depth - 1))


def random_formula(rng: np.random.Generator, names: Sequence[str], depth: int) -> Formula:
    """
    A random formula whose free variables are among ``names``.

    ``depth`` bounds the nesting of connectives and quantifiers.
    """
    names = list(names)
    roll = int(rng.integers(9)) if depth > 0 else 0
    if roll <= 1:
        atom = (Eq, Leq, Lt)[int(rng.integers(3))]
        return atom(random_term(rng, names, 2), random_term(rng, names, 2))
    if roll == 2:
        return Not(random_formula(rng, names, depth - 1))
    if roll <= 5:
        kind = (And, Or, Implies)[roll - 3]
        return kind(random_formula(rng, names, depth - 1), random_formula(rng, names, depth - 1))
    if roll <= 7:
        var = f"q{depth}"
        kind = Forall if roll == 6 else Exists
        return kind(var, random_formula(rng, names + [var], depth - 1))
    return Min(names[int(rng.integers(len(names)))], random_formula(rng, names, depth - 1))


def _small_lattice(rng: np.random.Generator, max_size: int) -> FiniteLattice:
    while True:
        lattice = random_lattice(int(rng.integers(2**31)), int(rng.integers(1, 5)))
        if len(lattice) <= max_size:
            return lattice


def sized_lattice(seed: int, ground_size: int, low: int = 5, high: int = 40) -> FiniteLattice:
    """
    ``random_lattice`` resampled until it has between ``low`` and ``high`` elements.

    Retries move the seed by a large odd stride; the ground set grows after a
    lattice that is too small and shrinks after one that is too large.
    """
    if not 1 <= low <= min(high, 2**8):
        raise ValueError(f"no lattice size lies in {low}..{high}")
    ground = max(ground_size, 1)
    attempt = 0
    while True:
        lattice = random_lattice(seed + attempt * 1_000_003, ground)
        if low <= len(lattice) <= high:
            return lattice
        ground = min(ground + 1, 8) if len(lattice) < low else max(ground - 1, 1)
        attempt += 1


# oracle suite


def oracle_check(lattices: int = 100, formulas: int = 20, seed: int = 0) -> CheckReport:
    """Catalog formulas and ``min`` against brute-force oracles on random lattices."""
    report = CheckReport("oracles")
    rng = np.random.default_rng(seed)
    named = {"Neut": build("Neut"), "A": build("A"), "Ch": build("Ch"), "LMod": build("LMod")}
    sizes = []
    for i in range(lattices):
        lattice = sized_lattice(seed + i, 3 + i % 4)
        sizes.append(len(lattice))
        evaluator = Evaluator(lattice)
        expected = {
            "Neut": {x for x in lattice.elements if semantic_neutral(lattice, x)},
            "A": set(semantic_atoms(lattice)),
            "Ch": {x for x in lattice.elements if semantic_chain_downset(lattice, x)},
            "LMod": {x for x in lattice.elements if semantic_lower_modular(lattice, x)},
        }
        for name, formula in named.items():
            got = set(evaluator.defined_set(formula))
            if got != expected[name]:
                report.failures.append(f"lattice {i} ({len(lattice)} elements): {name} gives {sorted(got)}")
        for _ in range(formulas):
            body = random_formula(rng, ["x"], 2)
            inside = [a for a in lattice.elements if evaluator.evaluate(body, {"x": a})]
            got = set(evaluator.defined_set(Min("x", body)))
            if got != set(semantic_minimal(lattice, inside)):
                report.failures.append(f"lattice {i}: min x {{ {body} }} disagrees with the minimal elements")
    report.rows.append({"lattices": lattices, "formulas_per_lattice": formulas, "sizes": sizes})
    return report


def agreement_check(instances: int = 200, seed: int = 0) -> CheckReport:
    """Relational against naive evaluation on small lattices and random formulas."""
    report = CheckReport("relational = naive")
    rng = np.random.default_rng(seed)
    for i in range(instances):
        lattice = _small_lattice(rng, 10)
        formula = random_formula(rng, ["x", "y"], 3)
        evaluator = Evaluator(lattice, max_dense=1 + i % 3)
        variables = free_vars(formula)
        relation = evaluator.relation(formula)
        for row in np.ndindex(*(len(lattice),) * len(variables)):
            assignment = dict(zip(variables, row))
            if bool(relation.table[row]) != naive_evaluate(lattice, formula, assignment):
                report.failures.append(f"instance {i}: {formula} at {assignment}")
                break
    report.rows.append({"instances": instances})
    return report


# model suites


def soundness_check(letters: int = 3, degree: int = 8) -> CheckReport:
    """
    Closed-form satisfaction against bounded derivation from each defining basis.

    The derivation bounds leave one fresh letter and room for multiplying by
    an n-th power.
    """
    report = CheckReport(f"soundness (letters <= {letters}, degree <= {degree})")
    identities = canonical_identities(letters, degree)
    bounds = Bounds(letters + 1, 2 * degree - 2)
    for variety, basis in defining_bases():
        disagree = [i for i in identities if variety.satisfies(i) != bfs_consequence(basis, i, bounds)]
        report.rows.append({"variety": variety.name, "identities": len(identities), "disagreements": len(disagree)})
        if disagree:
            sample = ", ".join(str(i) for i in disagree[:3])
            report.failures.append(f"{variety!r}: {len(disagree)} disagreements, e.g. {sample}")
    return report


def _definability_cases(universe: LabeledLattice, light: bool) -> List[Tuple[str, Tuple[int, ...], set]]:
    spec = universe.spec
    primes = [n for n in spec.group_exponents if n > 1 and all(n % d for d in range(2, n))]
    flagged = {flag: set(universe.flagged(flag)) for flag in ("is_atom", "is_neutral", "is_chain")}
    # the greatest periodic element is comparable to every other element below
    # COM, so a finite fragment always makes it neutral
    cases = [
        ("A", (), flagged["is_atom"]),
        ("Neut", (), flagged["is_neutral"] | {universe.periodic_top}),
        ("Ch", (), flagged["is_chain"]),
        ("SL", (), {universe.monoid(1)}),
        ("ZM", (), {universe.generator(NilN(2).name)}),
        ("GrA", (), {universe.group(p) for p in primes}),
        ("Gr", (), set(universe.flagged("is_group"))),
        ("Comb", (), set(universe.flagged("is_comb"))),
        ("Nil", (), set(universe.flagged("is_nil"))),
    ]
    cases += [("Cm", (m,), {universe.monoid(m)}) for m in range(min(spec.max_m, 4) + 1)]
    cases += [("Dm", (m,), {universe.generator(NilD(m).name)}) for m in (2, 3, 4) if m <= spec.max_m]
    if light:
        return cases
    cases += [
        ("ZeroRed", (), set(universe.flagged("is_zero_reduced"))),
        ("Per", (), set(universe.lattice.elements) - {universe.top}),
    ]
    for n in (2, 3, 4):
        present = AbelianGroup(n).name in universe.generators
        cases.append(("An", (n,), {universe.group(n)} if present else set()))
    for n in (1, 2, 4):
        if n in spec.group_exponents:
            cases += [("MonoidVar", (n, m), {universe.monoid_var(n, m)}) for m in range(min(spec.max_m, 3) + 1)]
    return cases


def definability_check(universe: LabeledLattice, light: bool = False, workers: Optional[int] = None) -> CheckReport:
    """Defined sets of catalog formulas against the fragment's ground-truth labels."""
    workers = env_int("COMDEF_WORKERS", workers, 1)
    report = CheckReport(f"definability on {universe.spec.name}")
    evaluator = Evaluator(universe.lattice)
    cases = _definability_cases(universe, light)

    def run(case):
        name, params, expected = case
        start = time.perf_counter()
        got = set(evaluator.defined_set(build(name, *params)))
        return case, got, time.perf_counter() - start

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run, cases))
    else:
        results = [run(case) for case in cases]
    label = universe.label
    for (name, params, expected), got, seconds in results:
        ref = reference(name, params)
        report.rows.append(
            {
                "formula": ref,
                "expected": sorted(map(label, expected)),
                "defined": sorted(map(label, got)),
                "seconds": round(seconds, 3),
            }
        )
        if got != expected:
            report.failures.append(f"{ref}: expected {sorted(map(label, expected))}, got {sorted(map(label, got))}")
        logger.info(f"{ref}: {len(got)} elements in {seconds:.2f}s")
    return report


# running


def _fragment(name: str, workers: Optional[int], cache: Dict[str, LabeledLattice]) -> LabeledLattice:
    if name not in cache:
        cache[name] = build_universe(UniverseSpec.load(f"builtin:{name}"), workers=workers)
    return cache[name]


def run_suite(name: str, workers: Optional[int] = None, seed: int = 0, cache=None) -> List[CheckReport]:
    """
    Run one named suite, or every suite for ``"all"``.

    Fragments built along the way are kept in ``cache`` so later suites reuse them.
    """
    cache = {} if cache is None else cache
    name = SUITE_ALIASES.get(name, name)
    if name == "all":
        return [report for suite in SUITES for report in run_suite(suite, workers, seed, cache)]
    logger.info(f"running suite {name}")
    runners: Dict[str, Callable[[], List[CheckReport]]] = {
        "oracles": lambda: [oracle_check(seed=seed), agreement_check(seed=seed)],
        "paper-F2": lambda: [definability_check(_fragment("F2", workers, cache), workers=workers)],
        "paper-F1": lambda: [definability_check(_fragment("F1", workers, cache), light=True, workers=workers)],
        "lemma8": lambda: [lemma8_check(_fragment("NZ", workers, cache), n, m) for n, m in NIL_ZR_PAIRS],
        "facts": lambda: [model_facts(_fragment("F2", workers, cache))],
        "soundness": lambda: [soundness_check()],
        "decomposition": lambda: [decomposition_check(_fragment("F2", workers, cache))],
        "stability": lambda: [stability_check(UniverseSpec.load("builtin:F2"), workers=workers)],
    }
    try:
        runner = runners[name]
    except KeyError:
        known = SUITES + ("all",) + tuple(SUITE_ALIASES)
        raise ValueError(f"unknown suite {name!r}, expected one of {known}") from None
    start = time.perf_counter()
    reports = runner()
    logger.info(f"suite {name} finished in {time.perf_counter() - start:.1f}s")
    return reports


def format_reports(reports: Sequence[CheckReport]) -> str:
    """Plain-text pass/fail table, one line per report plus its failures."""
    width = max([len(r.name) for r in reports] + [5])
    lines = [f"{'check'.ljust(width)}  result"]
    for r in reports:
        lines.append(f"{r.name.ljust(width)}  {'pass' if r.passed else 'FAIL'}")
        lines.extend(f"{'':{width}}    {failure}" for failure in r.failures)
    return "\n".join(lines)
