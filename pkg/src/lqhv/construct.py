"""Deterministic LqHV measures: construction, diagnostics, conversions.

The target object is a normalized bounded real-valued (possibly signed)
measure on the joint space Lambda_1^{S_1} x ... x Lambda_N^{S_N}, one axis
per (site, setting) coordinate, whose marginal onto the coordinates
{(n, s_n)}_n reproduces the joint table of every setting tuple. The
builder assembles it by inclusion-exclusion over site subsets T: each T
contributes, for every setting assignment on T, the common T-marginal
placed at the assigned coordinates times single-site marginals at every
remaining coordinate, weighted by an integer subset coefficient. The
coefficient makes all full-tuple marginals collapse correctly; its
defining identity is exposed for direct integer verification.

Also here: the Jordan split of a signed measure into positive and negative
parts, conversion of a stochastic one-measure-space model into the
deterministic coordinate form, and product expectations evaluated on
either side of the representation.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Sequence

import numpy as np

from . import numeric
from .errors import AtomBudgetError, InputError, RepresentationError
from .numeric import Scalar
from .scenario import (
    DistributionFamily,
    MarginalFamily,
    Scenario,
    SettingTuple,
    extract_marginal_family,
)

DEFAULT_ATOM_BUDGET = 10_000_000


class SignedMeasure:
    """Normalized real-valued measure on the joint coordinate space.

    Atoms form a tensor over the axes (1,1)..(1,S_1)..(N,1)..(N,S_N); the
    total mass must be 1 (within `tol` in float mode, exactly in rational
    mode) and every atom finite.
    """

    def __init__(self, scenario: Scenario, atoms, mode: str = numeric.RATIONAL,
                 tol: float | None = None):
        self.scenario = scenario
        self.mode = numeric.check_mode(mode)
        self.tol = numeric.default_tol() if tol is None else float(tol)
        self.atoms = numeric.as_array(atoms, self.mode, shape=scenario.joint_shape)
        total = self.atoms.sum()
        if not numeric.is_close(total, numeric.one(self.mode), self.tol, self.mode):
            raise InputError(f"measure mass is {total}, not 1")

    @property
    def total_mass(self) -> Scalar:
        return self.atoms.sum()

    @property
    def min_atom(self) -> Scalar:
        return self.atoms.min()

    def marginal(self, setting_tuple: Iterable[int]) -> np.ndarray:
        """Sum out all coordinates except {(n, s_n)}_n; axes in site order."""
        t = self.scenario.validate_setting_tuple(setting_tuple)
        keep = {self.scenario.axis_index(n, s) for n, s in enumerate(t, start=1)}
        drop = tuple(ax for ax in range(len(self.scenario.joint_shape)) if ax not in keep)
        return self.atoms.sum(axis=drop) if drop else self.atoms


@dataclass(frozen=True)
class JordanPair:
    """Positive/negative parts of a signed measure, disjoint supports."""

    positive_part: np.ndarray
    negative_part: np.ndarray
    total_variation: Scalar


def jordan_decompose(measure: SignedMeasure) -> JordanPair:
    """Atomwise Jordan split; total variation is the combined mass."""
    zero = numeric.zero(measure.mode)
    pos = np.maximum(measure.atoms, zero)
    neg = np.maximum(-measure.atoms, zero)
    pos.setflags(write=False)
    neg.setflags(write=False)
    return JordanPair(pos, neg, pos.sum() + neg.sum())


@dataclass(frozen=True)
class DeterministicLqHVModel:
    """A signed measure together with its coordinate random variables.

    The variable attached to (site, setting) is the projection of a joint
    point onto that coordinate axis, so it depends only on its own site
    and setting; the measure of an intersection of variable preimages then
    reproduces the scenario probabilities.
    """

    measure: SignedMeasure

    @property
    def scenario(self) -> Scenario:
        return self.measure.scenario

    def variable_axis(self, site: int, setting: int) -> int:
        return self.scenario.axis_index(site, setting)

    def evaluate_variable(self, site: int, setting: int, point: Sequence[int]) -> int:
        """Value of the (site, setting) variable at a joint-space point."""
        if len(point) != len(self.scenario.joint_shape):
            raise InputError("point length does not match the joint space rank")
        return int(point[self.variable_axis(site, setting)])


def coefficient(scenario: Scenario, sites: Iterable[int]) -> int:
    """Integer weight of the site subset in the inclusion-exclusion sum.

    The full set gets 1; removing a site multiplies by -(S_n - 1). For two
    and three parties the sum collapses to the familiar closed forms after
    absorbing the size <= 1 subsets into the constant term.
    """
    subset = frozenset(int(n) for n in sites)
    for n in subset:
        scenario.validate_site(n)
    c = 1
    for n in scenario.sites:
        if n not in subset:
            c *= -(scenario.settings_per_site[n - 1] - 1)
    return c


def coefficient_table(scenario: Scenario) -> dict[tuple[int, ...], int]:
    """Coefficients for every site subset (the empty one included)."""
    out: dict[tuple[int, ...], int] = {}
    for size in range(scenario.n_parties + 1):
        for subset in itertools.combinations(scenario.sites, size):
            out[subset] = coefficient(scenario, subset)
    return out


def coefficient_identity_sum(settings_per_site: Sequence[int], kept_sites: Iterable[int]) -> int:
    """Integer check that the coefficients reproduce kept-site marginals.

    Summing, over all supersets T of the kept set U, the coefficient of T
    times prod_{n in T\\U} (S_n - 1) counts how marginalization collapses
    the construction onto U. The sum must be 0 for every proper U and 1
    for the full set; this is exactly marginal correctness at the
    coefficient level.
    """
    settings = tuple(int(s) for s in settings_per_site)
    n_parties = len(settings)
    scenario = Scenario(settings, (1,) * n_parties)
    kept = frozenset(int(n) for n in kept_sites)
    rest = [n for n in scenario.sites if n not in kept]
    total = 0
    for size in range(len(rest) + 1):
        for extra in itertools.combinations(rest, size):
            subset = kept | set(extra)
            weight = 1
            for n in extra:
                weight *= settings[n - 1] - 1
            total += coefficient(scenario, subset) * weight
    return total


def _place(tensor: np.ndarray, axes: Sequence[int], rank: int) -> np.ndarray:
    # Axes must be ascending and match the tensor's own axis order; the
    # reshape then just interleaves singleton dimensions for broadcasting.
    shape = [1] * rank
    for ax, k in zip(axes, tensor.shape):
        shape[ax] = k
    return tensor.reshape(shape)


def build_deterministic_measure(family: DistributionFamily,
                                marginals: MarginalFamily | None = None,
                                *, budget: int = DEFAULT_ATOM_BUDGET,
                                tol: float | None = None) -> DeterministicLqHVModel:
    """Construct the deterministic LqHV measure of a nonsignaling family.

    Parameters
    ----------
    family:
        The joint tables; must satisfy the nonsignaling consistency
        condition (verified here via the marginal extraction when
        `marginals` is not supplied).
    marginals:
        Optionally the output of `extract_marginal_family(family)`; pass
        it to avoid re-running the consistency check.
    budget:
        Refuse joint spaces with more atoms than this instead of
        allocating them.
    tol:
        Comparison tolerance for the consistency check (float mode).

    Returns
    -------
    DeterministicLqHVModel
        Measure plus coordinate variables whose full-tuple marginals
        reproduce every input table; mass exactly 1 in rational mode.
    """
    scenario = family.scenario
    if scenario.joint_size > budget:
        raise AtomBudgetError(
            f"joint space holds {scenario.joint_size} atoms, over the budget {budget}")
    if marginals is None:
        marginals = extract_marginal_family(family, tol)
    elif marginals.scenario != scenario or marginals.mode != family.mode:
        raise InputError("marginal family does not match the distribution family")

    rank = len(scenario.joint_shape)
    all_coords = [(n, s) for n in scenario.sites
                  for s in range(1, scenario.settings_per_site[n - 1] + 1)]
    atoms = numeric.zeros(scenario.joint_shape, family.mode)
    for size in range(scenario.n_parties + 1):
        for subset in itertools.combinations(scenario.sites, size):
            c = coefficient(scenario, subset)
            if c == 0:
                continue
            c_scalar = numeric.coerce_scalar(c, family.mode)
            for settings in scenario.subset_settings(subset):
                occupied = {(n, s) for n, s in zip(subset, settings)}
                factors: list[np.ndarray] = []
                if subset:
                    axes = [scenario.axis_index(n, s) for n, s in zip(subset, settings)]
                    factors.append(_place(marginals.get(subset, settings), axes, rank))
                for n, s in all_coords:
                    if (n, s) not in occupied:
                        vec = marginals.get((n,), (s,))
                        factors.append(_place(vec, [scenario.axis_index(n, s)], rank))
                term = reduce(np.multiply, factors)
                atoms = atoms + c_scalar * term
    norm_tol = 1e-12 if family.mode == numeric.FLOAT else 0.0
    measure = SignedMeasure(scenario, atoms, family.mode, tol=norm_tol)
    return DeterministicLqHVModel(measure)


@dataclass(frozen=True)
class VerificationReport:
    """Worst-case reproduction error of a measure against a family."""

    max_error: Scalar
    min_reproduced: Scalar


def verify_marginals(model: DeterministicLqHVModel | SignedMeasure,
                     family: DistributionFamily, tol: float | None = None) -> VerificationReport:
    """Compare every full-tuple marginal of the measure with its table.

    Returns the largest absolute entrywise error over all tuples and
    raises RepresentationError if any reproduced entry drops below the
    nonnegativity floor (-tol in float mode, 0 in rational mode).
    """
    measure = model.measure if isinstance(model, DeterministicLqHVModel) else model
    if measure.scenario != family.scenario:
        raise InputError("measure and family describe different scenario shapes")
    if measure.mode != family.mode:
        raise InputError("measure and family use different arithmetic modes")
    tol = family.tol if tol is None else float(tol)
    floor = numeric.zero(family.mode) if family.mode == numeric.RATIONAL else -tol
    max_err = numeric.zero(family.mode)
    min_repro = None
    for t in family.scenario.setting_tuples():
        repro = measure.marginal(t)
        err = numeric.max_abs_diff(repro, family.tables[t])
        if err > max_err:
            max_err = err
        low = repro.min()
        if min_repro is None or low < min_repro:
            min_repro = low
    if min_repro < floor:
        raise RepresentationError(
            f"reproduced probability {min_repro} below the nonnegativity floor {floor}")
    return VerificationReport(max_err, min_repro)


def induced_family(measure: SignedMeasure, tol: float | None = None) -> DistributionFamily:
    """Read the joint tables off a measure's full-tuple marginals.

    Marginals of a single measure are automatically consistent, so the
    result always passes the nonsignaling check; if some marginal entry is
    negative the measure represents no probability family and a
    RepresentationError is raised.
    """
    scenario = measure.scenario
    tables = {t: measure.marginal(t) for t in scenario.setting_tuples()}
    try:
        return DistributionFamily(scenario, tables, measure.mode, tol=tol)
    except InputError as exc:
        raise RepresentationError(f"measure does not induce a probability family: {exc}") from exc


class StochasticLqHVModel:
    """One-measure-space model with conditional outcome distributions.

    A signed weight vector nu over a finite hidden space (summing to 1)
    plus, for each (site, setting), a row-stochastic matrix mapping hidden
    points to outcome distributions. The conditionals must be genuine
    probabilities; only nu may go negative.
    """

    def __init__(self, nu, conditionals: Sequence[Sequence[object]],
                 mode: str = numeric.RATIONAL, tol: float | None = None):
        self.mode = numeric.check_mode(mode)
        self.tol = numeric.default_tol() if tol is None else float(tol)
        self.nu = numeric.as_array(nu, self.mode)
        if self.nu.ndim != 1 or self.nu.size == 0:
            raise InputError("nu must be a nonempty vector")
        if not numeric.is_close(self.nu.sum(), numeric.one(self.mode), self.tol, self.mode):
            raise InputError(f"nu sums to {self.nu.sum()}, not 1")
        floor = numeric.zero(self.mode) if self.mode == numeric.RATIONAL else -self.tol
        rows: list[list[np.ndarray]] = []
        for n, site_conds in enumerate(conditionals, start=1):
            site_rows: list[np.ndarray] = []
            for s, matrix in enumerate(site_conds, start=1):
                arr = numeric.as_array(matrix, self.mode)
                if arr.ndim != 2 or arr.shape[0] != self.omega_size:
                    raise InputError(
                        f"conditional for site {n}, setting {s} must be (|Omega|, K) shaped")
                if arr.min() < floor:
                    raise InputError(f"negative conditional probability at site {n}, setting {s}")
                for row in arr:
                    if not numeric.is_close(row.sum(), numeric.one(self.mode), self.tol, self.mode):
                        raise InputError(
                            f"conditional row sums to {row.sum()} at site {n}, setting {s}")
                site_rows.append(arr)
            if not site_rows:
                raise InputError(f"site {n} has no conditionals")
            if len({m.shape[1] for m in site_rows}) != 1:
                raise InputError(f"site {n} conditionals disagree on the outcome count")
            rows.append(site_rows)
        if not rows:
            raise InputError("model needs at least one site")
        self.conditionals = rows

    @property
    def omega_size(self) -> int:
        return self.nu.shape[0]

    def inferred_scenario(self) -> Scenario:
        return Scenario(
            tuple(len(site) for site in self.conditionals),
            tuple(site[0].shape[1] for site in self.conditionals),
        )

    def joint_table(self, setting_tuple: Iterable[int]) -> np.ndarray:
        """Joint outcome tensor of one tuple, integrated over the hidden space."""
        t = self.inferred_scenario().validate_setting_tuple(setting_tuple)
        shape = tuple(site[0].shape[1] for site in self.conditionals)
        out = numeric.zeros(shape, self.mode)
        for omega in range(self.omega_size):
            rows = [self.conditionals[n - 1][s - 1][omega] for n, s in enumerate(t, start=1)]
            out = out + self.nu[omega] * reduce(np.multiply.outer, rows)
        return out


def determinize(model: StochasticLqHVModel, scenario: Scenario,
                tol: float | None = None) -> DeterministicLqHVModel:
    """Convert a stochastic model into the deterministic coordinate form.

    The hidden space is traded for the joint coordinate space: each atom
    collects, over the hidden points, nu times the product of conditional
    probabilities of every (site, setting) coordinate. Joint tables of the
    result match the stochastic model's tables tuple by tuple.
    """
    inferred = model.inferred_scenario()
    if inferred != scenario:
        raise InputError(
            f"conditionals cover {inferred.settings_per_site} settings / "
            f"{inferred.outcomes_per_site} outcomes, scenario wants "
            f"{scenario.settings_per_site} / {scenario.outcomes_per_site}")
    atoms = numeric.zeros(scenario.joint_shape, model.mode)
    coords = [(n, s) for n in scenario.sites
              for s in range(1, scenario.settings_per_site[n - 1] + 1)]
    for omega in range(model.omega_size):
        rows = [model.conditionals[n - 1][s - 1][omega] for n, s in coords]
        atoms = atoms + model.nu[omega] * reduce(np.multiply.outer, rows)
    norm_tol = 1e-12 if model.mode == numeric.FLOAT else 0.0
    measure = SignedMeasure(scenario, atoms, model.mode, tol=norm_tol)
    return DeterministicLqHVModel(measure)


def _coerce_observables(observables: Sequence[Sequence], scenario: Scenario,
                        mode: str) -> list[np.ndarray]:
    if len(observables) != scenario.n_parties:
        raise InputError(f"expected {scenario.n_parties} observable vectors")
    out = []
    for n, (phi, k) in enumerate(zip(observables, scenario.outcomes_per_site), start=1):
        vec = numeric.as_array(phi, mode)
        if vec.shape != (k,):
            raise InputError(f"observable for site {n} must have {k} values, got shape {vec.shape}")
        out.append(vec)
    return out


def product_expectation_family(family: DistributionFamily, setting_tuple: Iterable[int],
                               observables: Sequence[Sequence]) -> Scalar:
    """Expectation of prod_n phi_n(lambda_n) under one joint table."""
    table = family.table(setting_tuple)
    phis = _coerce_observables(observables, family.scenario, family.mode)
    acc = table
    n_sites = family.scenario.n_parties
    for axis, phi in enumerate(phis):
        shape = [1] * n_sites
        shape[axis] = phi.shape[0]
        acc = acc * phi.reshape(shape)
    return acc.sum()


def product_expectation_model(model: DeterministicLqHVModel, setting_tuple: Iterable[int],
                              observables: Sequence[Sequence]) -> Scalar:
    """Same product expectation, evaluated over the measure's atoms.

    Each observable is composed with its coordinate variable, so the sum
    runs over the joint space with phi_n read off axis (n, s_n); on the
    generating family this agrees with the table-side expectation.
    """
    scenario = model.scenario
    t = scenario.validate_setting_tuple(setting_tuple)
    phis = _coerce_observables(observables, scenario, model.measure.mode)
    rank = len(scenario.joint_shape)
    acc = model.measure.atoms
    for n, (s, phi) in enumerate(zip(t, phis), start=1):
        shape = [1] * rank
        shape[scenario.axis_index(n, s)] = phi.shape[0]
        acc = acc * phi.reshape(shape)
    return acc.sum()
