"""LHV feasibility: does a positive simulating measure exist?

A family admits a local hidden variable model exactly when some
nonnegative joint-space measure reproduces every table as its full-tuple
marginal. That is a linear feasibility problem in the atoms, solved here
by a phase-1 simplex with Bland's anti-cycling rule, run in exact
rational arithmetic or in floating point with tolerance-based pivots.
Infeasibility comes with a separating certificate: a vector y over the
constraint rows with y.A <= 0 on every atom column yet y.b > 0 on the
family, so no nonnegative atom vector can meet the tables.

Row order is fixed and documented: setting tuples in lexicographic order,
and within each tuple the outcome combinations in row-major order, i.e.
row = tuple_index * table_size + ravel(outcomes). Columns enumerate joint
points in row-major order over the joint shape.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import numeric
from .construct import DEFAULT_ATOM_BUDGET, DeterministicLqHVModel, SignedMeasure
from .errors import AtomBudgetError, InputError, SignalingError
from .numeric import Scalar
from .scenario import DistributionFamily, Scenario, check_nonsignaling

ROW_ORDER = ("rows: setting tuples lexicographic, outcomes row-major within each tuple; "
             "columns: joint points row-major")


def stack_tables(family: DistributionFamily) -> np.ndarray:
    """Right-hand side vector b in the documented row order."""
    parts = [family.tables[t].reshape(-1) for t in family.scenario.setting_tuples()]
    return np.concatenate(parts)


def marginal_matrix(scenario: Scenario) -> np.ndarray:
    """0/1 matrix mapping atom vectors to stacked full-tuple marginals.

    Entry (row, col) is 1 when the joint point behind `col` projects, on
    the coordinates selected by the row's setting tuple, onto the row's
    outcome combination.
    """
    table_size = 1
    for k in scenario.table_shape:
        table_size *= k
    n_rows = scenario.n_tuples * table_size
    matrix = np.zeros((n_rows, scenario.joint_size), dtype=np.int8)
    for ti, t in enumerate(scenario.setting_tuples()):
        axes = [scenario.axis_index(n, s) for n, s in enumerate(t, start=1)]
        for col, point in enumerate(np.ndindex(*scenario.joint_shape)):
            outcome = tuple(point[a] for a in axes)
            row = ti * table_size + int(np.ravel_multi_index(outcome, scenario.table_shape))
            matrix[row, col] = 1
    return matrix


@dataclass(frozen=True)
class LhvVerdict:
    """Outcome of the positive-measure feasibility test.

    Exactly one of `measure` (a nonnegative witness reproducing the
    tables) and `certificate` (the separating row functional) is set. The
    phase-1 objective remaining after optimization is reported either way;
    it is 0 for feasible instances.
    """

    feasible: bool
    measure: SignedMeasure | None
    certificate: np.ndarray | None
    residual: Scalar


def certificate_gap(certificate: np.ndarray, family: DistributionFamily) -> Scalar:
    """Value y.b of a certificate on a family; positive proves infeasibility."""
    b = stack_tables(family)
    if certificate.shape != b.shape:
        raise InputError(f"certificate has {certificate.shape[0]} rows, family needs {b.shape[0]}")
    return (certificate * b).sum()


def _phase1_simplex(a_rows: np.ndarray, b: np.ndarray, mode: str, tol: float):
    """Minimize the artificial mass of Ax = b, x >= 0, by Bland's rule.

    Returns (objective, x, y) with x the structural basic solution and y
    the simplex multipliers pulled back through the row sign flips, which
    make y a separating certificate whenever the objective is positive.
    """
    m, n = a_rows.shape
    pivot_tol = 0 if mode == numeric.RATIONAL else tol
    zero = numeric.zero(mode)
    one = numeric.one(mode)

    flip = [one if b[i] >= zero else -one for i in range(m)]
    width = n + m + 1
    if mode == numeric.RATIONAL:
        tableau = np.empty((m, width), dtype=object)
        tableau[...] = zero
    else:
        tableau = np.zeros((m, width), dtype=float)
    for i in range(m):
        tableau[i, :n] = flip[i] * a_rows[i]
        tableau[i, n + i] = one
        tableau[i, -1] = flip[i] * b[i]
    basis = [n + i for i in range(m)]

    def reduced_cost(col: int) -> Scalar:
        cost = one if col >= n else zero
        for r in range(m):
            if basis[r] >= n:
                cost = cost - tableau[r, col]
        return cost

    while True:
        enter = -1
        for j in range(n + m):
            if reduced_cost(j) < -pivot_tol:
                enter = j
                break
        if enter < 0:
            break
        leave = -1
        best = None
        for r in range(m):
            coeff = tableau[r, enter]
            if coeff > pivot_tol:
                ratio = tableau[r, -1] / coeff
                if best is None or ratio < best or (ratio == best and basis[r] < basis[leave]):
                    best, leave = ratio, r
        if leave < 0:
            raise InputError("phase-1 objective unbounded; the constraint matrix is corrupt")
        pivot = tableau[leave, enter]
        tableau[leave] = tableau[leave] / pivot
        for r in range(m):
            if r != leave and tableau[r, enter] != zero:
                tableau[r] = tableau[r] - tableau[r, enter] * tableau[leave]
        basis[leave] = enter

    objective = zero
    for r in range(m):
        if basis[r] >= n:
            objective = objective + tableau[r, -1]
    x = [zero] * n
    for r in range(m):
        if basis[r] < n:
            x[basis[r]] = tableau[r, -1]
    y = [zero] * m
    for i in range(m):
        acc = zero
        for r in range(m):
            if basis[r] >= n:
                acc = acc + tableau[r, n + i]
        y[i] = flip[i] * acc
    return objective, x, y


def lhv_feasible(family: DistributionFamily, tol: float | None = None,
                 budget: int = DEFAULT_ATOM_BUDGET) -> LhvVerdict:
    """Search for a nonnegative joint-space measure matching every table.

    The family must pass the consistency check first (a signaling family
    has no simulating measure of any sign, so the question is not posed).
    Feasible instances return the witness measure wrapped as a model
    input; infeasible ones return the separating certificate in the
    documented row order.
    """
    scenario = family.scenario
    if scenario.joint_size > budget:
        raise AtomBudgetError(
            f"joint space holds {scenario.joint_size} atoms, over the budget {budget}")
    tol = family.tol if tol is None else float(tol)
    witness = check_nonsignaling(family, tol)
    if witness is not None:
        raise SignalingError(witness)

    a01 = marginal_matrix(scenario)
    if family.mode == numeric.RATIONAL:
        a_rows = numeric.as_array(a01.tolist(), numeric.RATIONAL, shape=a01.shape)
    else:
        a_rows = a01.astype(float)
    b = stack_tables(family)
    objective, x, y = _phase1_simplex(a_rows, b, family.mode, tol)

    feas_floor = numeric.zero(family.mode) if family.mode == numeric.RATIONAL else tol
    if objective <= feas_floor:
        atoms = np.array(x, dtype=object if family.mode == numeric.RATIONAL else float)
        if family.mode == numeric.FLOAT:
            if atoms.min() < -tol:
                raise InputError(f"simplex returned atom {atoms.min()} below -tol")
            atoms = np.maximum(atoms, 0.0)
        measure = SignedMeasure(scenario, atoms.reshape(scenario.joint_shape),
                                family.mode, tol=max(tol, 1e-12))
        return LhvVerdict(True, measure, None, objective)
    certificate = np.array(y, dtype=object if family.mode == numeric.RATIONAL else float)
    certificate.setflags(write=False)
    return LhvVerdict(False, None, certificate, objective)


def local_assignments(scenario: Scenario):
    """All deterministic per-(site, setting) outcome assignments."""
    per_site = []
    for s, k in zip(scenario.settings_per_site, scenario.outcomes_per_site):
        per_site.append(list(itertools.product(range(k), repeat=s)))
    return itertools.product(*per_site)


def wrap_witness(verdict: LhvVerdict) -> DeterministicLqHVModel | None:
    """The feasible witness as a deterministic model, if present."""
    if verdict.measure is None:
        return None
    return DeterministicLqHVModel(verdict.measure)
