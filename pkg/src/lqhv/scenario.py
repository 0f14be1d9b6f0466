"""Finite multipartite correlation scenarios and their consistency checks.

A scenario has N sites; site n chooses one of S_n measurement settings and
observes one of K_n outcomes (encoded 0..K_n-1). A family holds one joint
probability table per full setting tuple (s_1,...,s_N), with s_n running
1..S_n. The nonsignaling consistency condition requires the marginals on
any common-setting site subset to coincide across all compatible tuples;
`check_nonsignaling` tests it and `extract_marginal_family` collects the
coinciding sub-tuple marginals it guarantees.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping

import numpy as np

from . import numeric
from .errors import InputError, SignalingError
from .numeric import Scalar

SettingTuple = tuple[int, ...]


@dataclass(frozen=True)
class Scenario:
    """Shape of a correlation scenario: settings and outcomes per site."""

    settings_per_site: tuple[int, ...]
    outcomes_per_site: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "settings_per_site", tuple(int(s) for s in self.settings_per_site))
        object.__setattr__(self, "outcomes_per_site", tuple(int(k) for k in self.outcomes_per_site))
        if len(self.settings_per_site) != len(self.outcomes_per_site):
            raise InputError("settings_per_site and outcomes_per_site must have equal length")
        if self.n_parties < 1:
            raise InputError("a scenario needs at least one site")
        if any(s < 1 for s in self.settings_per_site):
            raise InputError("every site needs at least one setting")
        if any(k < 1 for k in self.outcomes_per_site):
            raise InputError("every site needs at least one outcome")

    @property
    def n_parties(self) -> int:
        return len(self.settings_per_site)

    @property
    def sites(self) -> tuple[int, ...]:
        """1-based site labels."""
        return tuple(range(1, self.n_parties + 1))

    @property
    def table_shape(self) -> tuple[int, ...]:
        return self.outcomes_per_site

    @property
    def n_tuples(self) -> int:
        n = 1
        for s in self.settings_per_site:
            n *= s
        return n

    @property
    def joint_shape(self) -> tuple[int, ...]:
        """One axis per (site, setting) pair, ordered (1,1)..(1,S_1)..(N,S_N)."""
        shape: list[int] = []
        for s, k in zip(self.settings_per_site, self.outcomes_per_site):
            shape.extend([k] * s)
        return tuple(shape)

    @property
    def joint_size(self) -> int:
        # Python ints are unbounded, so this never overflows; budget checks
        # against it happen where tensors are actually allocated.
        n = 1
        for s, k in zip(self.settings_per_site, self.outcomes_per_site):
            n *= k**s
        return n

    def axis_index(self, site: int, setting: int) -> int:
        """Joint-space axis of coordinate (site, setting), both 1-based."""
        self.validate_site(site)
        if not 1 <= setting <= self.settings_per_site[site - 1]:
            raise InputError(f"setting {setting} out of range for site {site}")
        return sum(self.settings_per_site[: site - 1]) + setting - 1

    def validate_site(self, site: int) -> None:
        if not 1 <= site <= self.n_parties:
            raise InputError(f"site {site} out of range 1..{self.n_parties}")

    def validate_setting_tuple(self, s: Iterable[int]) -> SettingTuple:
        st = tuple(int(v) for v in s)
        if len(st) != self.n_parties:
            raise InputError(f"setting tuple {st} has {len(st)} entries, expected {self.n_parties}")
        for n, (v, s_max) in enumerate(zip(st, self.settings_per_site), start=1):
            if not 1 <= v <= s_max:
                raise InputError(f"setting {v} out of range 1..{s_max} at site {n}")
        return st

    def setting_tuples(self) -> list[SettingTuple]:
        """All full setting tuples in lexicographic order."""
        return list(itertools.product(*(range(1, s + 1) for s in self.settings_per_site)))

    def site_subsets(self, *, proper: bool = False) -> Iterator[tuple[int, ...]]:
        """Nonempty site subsets, smallest first, lexicographic within size."""
        top = self.n_parties - 1 if proper else self.n_parties
        for size in range(1, top + 1):
            yield from itertools.combinations(self.sites, size)

    def subset_settings(self, sites: tuple[int, ...]) -> Iterator[tuple[int, ...]]:
        """All partial setting assignments on the given sites."""
        return itertools.product(*(range(1, self.settings_per_site[n - 1] + 1) for n in sites))


def validate_sites(scenario: Scenario, sites: Iterable[int]) -> tuple[int, ...]:
    out = tuple(int(n) for n in sites)
    if len(out) == 0:
        raise InputError("site subset must be nonempty")
    if len(set(out)) != len(out):
        raise InputError(f"site subset {out} has repeats")
    for n in out:
        scenario.validate_site(n)
    return tuple(sorted(out))


@dataclass(frozen=True)
class Witness:
    """Certificate of a failed consistency check.

    Two full tuples share the settings `common_settings` on `site_subset`
    yet their marginals there differ by `max_discrepancy` (the largest
    discrepancy found anywhere in the family).
    """

    site_subset: tuple[int, ...]
    common_settings: tuple[int, ...]
    tuple_a: SettingTuple
    tuple_b: SettingTuple
    max_discrepancy: Scalar


class DistributionFamily:
    """One joint probability table per full setting tuple.

    Tables are indexed by 1-based setting tuples and hold nonnegative
    tensors over the outcome axes (one axis per site) summing to 1. Tables
    are validated on construction and never renormalized; sums off by more
    than `tol` (any deviation in rational mode) are rejected.
    """

    def __init__(self, scenario: Scenario, tables: Mapping[SettingTuple, object],
                 mode: str = numeric.RATIONAL, tol: float | None = None):
        self.scenario = scenario
        self.mode = numeric.check_mode(mode)
        self.tol = numeric.default_tol() if tol is None else float(tol)
        expected = scenario.setting_tuples()
        keyed = {scenario.validate_setting_tuple(k): v for k, v in tables.items()}
        if len(keyed) != len(tables):
            raise InputError("duplicate setting tuples in table map")
        missing = [t for t in expected if t not in keyed]
        if missing:
            raise InputError(f"missing tables for tuples {missing[:4]}{'...' if len(missing) > 4 else ''}")
        if len(keyed) != len(expected):
            extra = sorted(set(keyed) - set(expected))
            raise InputError(f"unexpected tuples {extra[:4]}")
        self.tables: dict[SettingTuple, np.ndarray] = {}
        floor = numeric.zero(self.mode) if self.mode == numeric.RATIONAL else -self.tol
        for t in expected:
            arr = numeric.as_array(keyed[t], self.mode, shape=scenario.table_shape)
            if arr.size and arr.min() < floor:
                raise InputError(f"negative probability in table {t}: min entry {arr.min()}")
            if not numeric.is_close(arr.sum(), numeric.one(self.mode), self.tol, self.mode):
                raise InputError(f"table {t} sums to {arr.sum()}, not 1 (tables are never renormalized)")
            self.tables[t] = arr

    def table(self, setting_tuple: Iterable[int]) -> np.ndarray:
        t = self.scenario.validate_setting_tuple(setting_tuple)
        return self.tables[t]

    def same_structure(self, other: "DistributionFamily") -> bool:
        return self.scenario == other.scenario and self.mode == other.mode


def convert_family(family: DistributionFamily, mode: str,
                   tol: float | None = None) -> DistributionFamily:
    """Re-type a family's tables into the requested arithmetic mode.

    Float values become their shortest decimal literal when promoted to
    rationals, so a file holding 0.45 converts to 9/20 rather than the
    exact binary expansion.
    """
    mode = numeric.check_mode(mode)
    if mode == family.mode and tol is None:
        return family
    tables = {t: numeric.convert_array(table, family.mode, mode)
              for t, table in family.tables.items()}
    return DistributionFamily(family.scenario, tables, mode, tol=tol)


def marginalize(family: DistributionFamily, setting_tuple: Iterable[int],
                keep_sites: Iterable[int]) -> np.ndarray:
    """Marginal of one joint table onto `keep_sites` (axes in site order)."""
    table = family.table(setting_tuple)
    keep = validate_sites(family.scenario, keep_sites)
    drop = tuple(n - 1 for n in family.scenario.sites if n not in keep)
    return table.sum(axis=drop) if drop else table


def _restrict(t: SettingTuple, sites: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(t[n - 1] for n in sites)


def check_nonsignaling(family: DistributionFamily, tol: float | None = None) -> Witness | None:
    """Test the consistency condition; None means pass.

    For every nonempty proper site subset and every pair of full setting
    tuples agreeing there, the subset marginals of the two tables must
    coincide (entrywise within `tol`; exactly in rational mode). All pairs
    are compared and the witness carries the largest discrepancy found.
    Vacuously true for single-site scenarios or a single setting tuple.
    """
    scenario = family.scenario
    tol = family.tol if tol is None else float(tol)
    threshold = numeric.zero(family.mode) if family.mode == numeric.RATIONAL else tol
    tuples = scenario.setting_tuples()
    worst: Witness | None = None
    for sites in scenario.site_subsets(proper=True):
        groups: dict[tuple[int, ...], list[SettingTuple]] = {}
        for t in tuples:
            groups.setdefault(_restrict(t, sites), []).append(t)
        for common, members in groups.items():
            if len(members) < 2:
                continue
            margs = [marginalize(family, t, sites) for t in members]
            for (ia, ma), (ib, mb) in itertools.combinations(enumerate(margs), 2):
                d = numeric.max_abs_diff(ma, mb)
                if d > threshold and (worst is None or d > worst.max_discrepancy):
                    worst = Witness(sites, common, members[ia], members[ib], d)
    return worst


class MarginalFamily:
    """The common sub-tuple marginals of a nonsignaling family.

    Holds, for every nonempty site subset and every setting assignment on
    it, the marginal tensor shared by all compatible full tuples. Entries
    on the full site set are the input tables themselves.
    """

    def __init__(self, scenario: Scenario, mode: str,
                 entries: dict[tuple[tuple[int, ...], tuple[int, ...]], np.ndarray]):
        self.scenario = scenario
        self.mode = mode
        self._entries = entries

    def get(self, sites: Iterable[int], settings: Iterable[int]) -> np.ndarray:
        key = (tuple(sites), tuple(settings))
        if key not in self._entries:
            raise InputError(f"no marginal stored for sites {key[0]} at settings {key[1]}")
        return self._entries[key]

    def items(self):
        return self._entries.items()


def extract_marginal_family(family: DistributionFamily, tol: float | None = None) -> MarginalFamily:
    """Collect the common marginals; raises SignalingError if inconsistent.

    In rational mode the marginal is read off the first compatible tuple
    (the check guarantees they all agree exactly); in float mode it is the
    average over all compatible tuples, so no tuple is privileged.
    """
    witness = check_nonsignaling(family, tol)
    if witness is not None:
        raise SignalingError(witness)
    scenario = family.scenario
    entries: dict[tuple[tuple[int, ...], tuple[int, ...]], np.ndarray] = {}
    tuples = scenario.setting_tuples()
    for sites in scenario.site_subsets():
        groups: dict[tuple[int, ...], list[SettingTuple]] = {}
        for t in tuples:
            groups.setdefault(_restrict(t, sites), []).append(t)
        for common, members in groups.items():
            if family.mode == numeric.RATIONAL:
                marg = marginalize(family, members[0], sites)
            else:
                marg = sum(marginalize(family, t, sites) for t in members) / len(members)
                marg.setflags(write=False)
            entries[(sites, common)] = marg
    return MarginalFamily(scenario, family.mode, entries)


@dataclass(frozen=True)
class EprReport:
    """Outcome of the cross-family sub-tuple marginal comparison."""

    passed: bool
    max_discrepancy: Scalar
    site_subset: tuple[int, ...] | None = None
    settings: tuple[int, ...] | None = None


def compare_scenarios_epr(family_a: DistributionFamily, family_b: DistributionFamily,
                          tol: float | None = None) -> EprReport:
    """Check that two families share all their sub-tuple marginals.

    Both families must have the same shape and pass the consistency check;
    the comparison then runs over every proper site subset and setting
    assignment, where consistency makes the marginals setting-determined.
    """
    if family_a.scenario != family_b.scenario:
        raise InputError("families describe different scenario shapes")
    if family_a.mode != family_b.mode:
        raise InputError("families use different arithmetic modes")
    tol = family_a.tol if tol is None else float(tol)
    marg_a = extract_marginal_family(family_a, tol)
    marg_b = extract_marginal_family(family_b, tol)
    scenario = family_a.scenario
    threshold = numeric.zero(family_a.mode) if family_a.mode == numeric.RATIONAL else tol
    worst = numeric.zero(family_a.mode)
    worst_key: tuple[tuple[int, ...], tuple[int, ...]] | None = None
    for sites in scenario.site_subsets(proper=True):
        for settings in scenario.subset_settings(sites):
            d = numeric.max_abs_diff(marg_a.get(sites, settings), marg_b.get(sites, settings))
            if d > worst:
                worst, worst_key = d, (sites, settings)
    if worst > threshold:
        return EprReport(False, worst, worst_key[0], worst_key[1])
    return EprReport(True, worst)
