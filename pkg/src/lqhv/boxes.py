"""Canonical correlation families and randomized nonsignaling generators.

The two-site, two-setting, binary-outcome scenario carries the standard
test corpus: the 16 local deterministic vertices, the 8 extremal boxes
with perfect setting-dependent (anti)correlation, their mixtures, and the
isotropic line between the maximally nonlocal box and white noise. A
one-setting signaling counterexample and generic-scenario mixture
generators round out the inputs the rest of the package is exercised on.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import numeric
from .construct import product_expectation_family
from .errors import InputError
from .scenario import DistributionFamily, Scenario

CHSH_SCENARIO = Scenario((2, 2), (2, 2))


def uniform_family(scenario: Scenario, mode: str = numeric.RATIONAL) -> DistributionFamily:
    """White noise: every table uniform over the joint outcomes."""
    size = 1
    for k in scenario.outcomes_per_site:
        size *= k
    if mode == numeric.RATIONAL:
        value = Fraction(1, size)
    else:
        value = 1.0 / size
    table = numeric.as_array(np.full(scenario.table_shape, value, dtype=object), mode)
    tables = {t: table for t in scenario.setting_tuples()}
    return DistributionFamily(scenario, tables, mode)


def local_deterministic_vertex(scenario: Scenario, assignment: Sequence[Sequence[int]],
                               mode: str = numeric.RATIONAL) -> DistributionFamily:
    """Point-mass product family from per-(site, setting) fixed outcomes.

    `assignment[n-1][s-1]` is the outcome site n reports under setting s;
    each table is the product of the corresponding indicator vectors.
    """
    if len(assignment) != scenario.n_parties:
        raise InputError(f"assignment must cover {scenario.n_parties} sites")
    plan: list[tuple[int, ...]] = []
    for n, site in enumerate(assignment, start=1):
        outcomes = tuple(int(a) for a in site)
        if len(outcomes) != scenario.settings_per_site[n - 1]:
            raise InputError(f"site {n} assignment must cover "
                             f"{scenario.settings_per_site[n - 1]} settings")
        k = scenario.outcomes_per_site[n - 1]
        for a in outcomes:
            if not 0 <= a < k:
                raise InputError(f"outcome {a} out of range for site {n}")
        plan.append(outcomes)
    tables = {}
    for t in scenario.setting_tuples():
        table = numeric.zeros(scenario.table_shape, mode)
        point = tuple(plan[n - 1][s - 1] for n, s in enumerate(t, start=1))
        table[point] = numeric.one(mode)
        tables[t] = table
    return DistributionFamily(scenario, tables, mode)


def pr_type_vertex(alpha: int, beta: int, gamma: int,
                   mode: str = numeric.RATIONAL) -> DistributionFamily:
    """Extremal nonsignaling box with a XOR b = xy + ax + by + g (mod 2).

    Settings map to x = s1 - 1 and y = s2 - 1; the half weight sits on
    the outcome pairs satisfying the XOR relation.
    """
    if alpha not in (0, 1) or beta not in (0, 1) or gamma not in (0, 1):
        raise InputError("alpha, beta, gamma must be bits")
    half = Fraction(1, 2) if mode == numeric.RATIONAL else 0.5
    tables = {}
    for t in CHSH_SCENARIO.setting_tuples():
        x, y = t[0] - 1, t[1] - 1
        target = (x * y + alpha * x + beta * y + gamma) % 2
        table = numeric.zeros((2, 2), mode)
        for a in range(2):
            b = (target + a) % 2
            table[a, b] = half
        tables[t] = table
    return DistributionFamily(CHSH_SCENARIO, tables, mode)


def pr_box(mode: str = numeric.RATIONAL) -> DistributionFamily:
    """The maximally nonlocal box: a XOR b = (s1-1)(s2-1), uniform otherwise."""
    return pr_type_vertex(0, 0, 0, mode)


def mix_families(families: Sequence[DistributionFamily], weights,
                 mode: str | None = None) -> DistributionFamily:
    """Convex mixture of same-scenario families with normalized weights."""
    if not families:
        raise InputError("nothing to mix")
    mode = families[0].mode if mode is None else numeric.check_mode(mode)
    scenario = families[0].scenario
    for f in families[1:]:
        if f.scenario != scenario or f.mode != mode:
            raise InputError("mixture components must share scenario and mode")
    w = numeric.normalize_weights(weights, mode)
    if len(w) != len(families):
        raise InputError(f"need {len(families)} weights, got {len(w)}")
    tables = {}
    for t in scenario.setting_tuples():
        acc = numeric.zeros(scenario.table_shape, mode)
        for weight, f in zip(w, families):
            acc = acc + weight * f.tables[t]
        tables[t] = acc
    return DistributionFamily(scenario, tables, mode)


def isotropic_box(p, mode: str = numeric.RATIONAL) -> DistributionFamily:
    """p times the maximally nonlocal box plus (1-p) white noise."""
    weight = numeric.coerce_scalar(p, mode)
    if weight < numeric.zero(mode) or weight > numeric.one(mode):
        raise InputError(f"mixing weight must lie in [0, 1], got {p}")
    return mix_families([pr_box(mode), uniform_family(CHSH_SCENARIO, mode)],
                        [weight, numeric.one(mode) - weight], mode)


def signaling_example(mode: str = numeric.RATIONAL) -> DistributionFamily:
    """Two sites, settings (2, 1): site 2 announces site 1's setting.

    Site 1 reports a fair coin; site 2 deterministically outputs s1 - 1,
    so its marginal flips from (1, 0) to (0, 1) with the remote setting.
    The consistency check fails with discrepancy 1 at site subset {2}.
    """
    scenario = Scenario((2, 1), (2, 2))
    half = Fraction(1, 2) if mode == numeric.RATIONAL else 0.5
    tables = {}
    for t in scenario.setting_tuples():
        b = t[0] - 1
        table = numeric.zeros((2, 2), mode)
        table[0, b] = half
        table[1, b] = half
        tables[t] = table
    return DistributionFamily(scenario, tables, mode)


def chsh_local_vertices(mode: str = numeric.RATIONAL) -> list[DistributionFamily]:
    """All 16 local deterministic vertices of the two-site binary scenario.

    Ordered by the assignment bits (a1, a2, b1, b2) read as a binary
    number, a1 most significant: index 0 answers 0 everywhere, index 15
    answers 1 everywhere.
    """
    out = []
    for a1, a2, b1, b2 in itertools.product(range(2), repeat=4):
        out.append(local_deterministic_vertex(CHSH_SCENARIO, [(a1, a2), (b1, b2)], mode))
    return out


def chsh_pr_vertices(mode: str = numeric.RATIONAL) -> list[DistributionFamily]:
    """The 8 extremal XOR boxes, ordered by (alpha, beta, gamma) bits."""
    return [pr_type_vertex(a, b, g, mode)
            for a, b, g in itertools.product(range(2), repeat=3)]


def random_nonsignaling_family(seed: int, weights=None,
                               mode: str = numeric.RATIONAL) -> DistributionFamily:
    """Random mixture over the 24 extremal two-site binary boxes.

    Components are the 16 local vertices of `chsh_local_vertices` followed
    by the 8 XOR boxes of `chsh_pr_vertices`. When `weights` is omitted, a
    seeded generator draws small integer weights (not all zero) that are
    then normalized; passing 24 nonnegative weights selects the mixture
    deterministically.
    """
    vertices = chsh_local_vertices(mode) + chsh_pr_vertices(mode)
    if weights is None:
        rng = random.Random(seed)
        raw = [rng.randrange(0, 10) for _ in vertices]
        if not any(raw):
            raw[rng.randrange(len(raw))] = 1
        weights = raw
    return mix_families(vertices, weights, mode)


def random_local_assignment(scenario: Scenario, rng: random.Random) -> list[tuple[int, ...]]:
    return [tuple(rng.randrange(k) for _ in range(s))
            for s, k in zip(scenario.settings_per_site, scenario.outcomes_per_site)]


def tensor_family(left: DistributionFamily, right: DistributionFamily) -> DistributionFamily:
    """Side-by-side composition of two families on disjoint site blocks.

    The combined scenario concatenates the site lists; the table at a
    combined tuple is the outer product of the block tables, left sites
    first. Both blocks must share an arithmetic mode.
    """
    if left.mode != right.mode:
        raise InputError("blocks must share an arithmetic mode")
    scenario = Scenario(
        left.scenario.settings_per_site + right.scenario.settings_per_site,
        left.scenario.outcomes_per_site + right.scenario.outcomes_per_site,
    )
    n_left = left.scenario.n_parties
    tables = {}
    for t in scenario.setting_tuples():
        a = left.tables[t[:n_left]]
        b = right.tables[t[n_left:]]
        tables[t] = np.multiply.outer(a, b)
    return DistributionFamily(scenario, tables, left.mode)


def random_scenario_family(scenario: Scenario, seed: int, mode: str = numeric.RATIONAL,
                           n_components: int = 6) -> DistributionFamily:
    """Random nonsignaling family on an arbitrary scenario.

    Mixes `n_components` random local deterministic vertices; when the
    first two sites form a two-setting binary block, a random XOR box
    composed with a random vertex on the remaining sites joins the pool,
    so the mixture is not always locally reproducible. Weights are small
    seeded integers, normalized.
    """
    if n_components < 1:
        raise InputError("need at least one component")
    rng = random.Random(seed)
    pool: list[DistributionFamily] = []
    for _ in range(n_components):
        pool.append(local_deterministic_vertex(
            scenario, random_local_assignment(scenario, rng), mode))
    head = (scenario.settings_per_site[:2], scenario.outcomes_per_site[:2])
    if scenario.n_parties >= 2 and head == ((2, 2), (2, 2)):
        box = pr_type_vertex(rng.randrange(2), rng.randrange(2), rng.randrange(2), mode)
        if scenario.n_parties == 2:
            pool.append(box)
        else:
            rest = Scenario(scenario.settings_per_site[2:], scenario.outcomes_per_site[2:])
            tail = local_deterministic_vertex(rest, random_local_assignment(rest, rng), mode)
            pool.append(tensor_family(box, tail))
    weights = [rng.randrange(1, 10) for _ in pool]
    return mix_families(pool, weights, mode)


def chsh_value(family: DistributionFamily) -> object:
    """E(1,1) + E(1,2) + E(2,1) - E(2,2) with the +-1 outcome encoding."""
    if family.scenario != CHSH_SCENARIO:
        raise InputError("CHSH combination needs the two-site, two-setting binary scenario")
    if family.mode == numeric.RATIONAL:
        signs = [Fraction(1), Fraction(-1)]
    else:
        signs = [1.0, -1.0]
    obs = [signs, signs]
    e = {t: product_expectation_family(family, t, obs) for t in CHSH_SCENARIO.setting_tuples()}
    return e[(1, 1)] + e[(1, 2)] + e[(2, 1)] - e[(2, 2)]
