"""Half-space systems, admissibility checks and lattice geometry of P.

``P = {x in R^n : <v_i, x> + a_i >= 0 for all i}`` with integer ``v_i`` and
``a_i``.  All structural questions about ``P`` are answered exactly with the
rational simplex in :mod:`polymult.lp`.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional

import numpy as np

from . import _kernels
from .errors import InadmissibleSystemError, ParseError, ResourceLimitError
from .lattice import integer_kernel, bareiss_det, rational_nullspace, transpose
from .lp import INFEASIBLE, linprog_exact, solve_lp

DEFAULT_BOX_CAP = 10**8


@dataclass(frozen=True)
class HalfSpaceSystem:
    """Integer data ``(v_1..v_r, a)``; row ``i`` of ``vectors`` is ``v_i``."""

    vectors: tuple
    offsets: tuple

    def __post_init__(self):
        vectors = tuple(tuple(_as_int(v, "vectors") for v in row) for row in self.vectors)
        offsets = tuple(_as_int(a, "offsets") for a in self.offsets)
        if not vectors:
            raise ParseError("system needs at least one half-space (r >= 1)")
        n = len(vectors[0])
        if n < 1:
            raise ParseError("ambient dimension must be at least 1")
        if any(len(row) != n for row in vectors):
            raise ParseError("ragged rows: every vector must have the same length")
        if len(offsets) != len(vectors):
            raise ParseError(f"got {len(vectors)} vectors but {len(offsets)} offsets")
        for i, row in enumerate(vectors):
            if not any(row):
                raise ParseError(f"vector {i} is zero; H_{i} would be empty or all of space")
        object.__setattr__(self, "vectors", vectors)
        object.__setattr__(self, "offsets", offsets)

    @property
    def n(self) -> int:
        return len(self.vectors[0])

    @property
    def r(self) -> int:
        return len(self.vectors)

    @property
    def total(self) -> int:
        """``|a|``, the sum of the offsets."""
        return sum(self.offsets)

    @property
    def column_sums(self) -> tuple:
        return tuple(sum(col) for col in zip(*self.vectors))

    def V(self) -> np.ndarray:
        return np.array(self.vectors, dtype=np.int64)

    def a(self) -> np.ndarray:
        return np.array(self.offsets, dtype=np.int64)

    def scaled(self, k: int) -> "HalfSpaceSystem":
        return HalfSpaceSystem(self.vectors, tuple(k * a for a in self.offsets))

    def to_json(self) -> dict:
        return {"vectors": [list(row) for row in self.vectors], "offsets": list(self.offsets)}


def _as_int(v, field):
    if isinstance(v, bool) or not isinstance(v, (int, np.integer)):
        if isinstance(v, float) and v.is_integer():
            raise ParseError(f"non-integer entry in {field}: {v!r} (floats are not accepted)")
        raise ParseError(f"non-integer entry in {field}: {v!r}")
    return int(v)


def parse_system(data) -> HalfSpaceSystem:
    """Build a system from the JSON object ``{"vectors": ..., "offsets": ...}``.

    Unlike the bare constructor this also rejects ``sum v_i != 0``.
    """
    if not isinstance(data, dict) or "vectors" not in data or "offsets" not in data:
        raise ParseError('expected an object with keys "vectors" and "offsets"')
    vectors, offsets = data["vectors"], data["offsets"]
    if not isinstance(vectors, list) or not all(isinstance(row, list) for row in vectors):
        raise ParseError('"vectors" must be a list of lists')
    if not isinstance(offsets, list):
        raise ParseError('"offsets" must be a list')
    lengths = {len(row) for row in vectors}
    if len(lengths) > 1:
        raise ParseError(f"ragged rows: vector lengths {sorted(lengths)}")
    system = HalfSpaceSystem(vectors, offsets)
    if any(system.column_sums):
        raise ParseError(f"vectors do not sum to zero: column sums {list(system.column_sums)}")
    return system


def load_system(path) -> HalfSpaceSystem:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON in {path}: {exc}") from exc
    return parse_system(data)


@dataclass(frozen=True)
class ValidationReport:
    sum_zero: bool
    compact: bool
    all_touching: bool
    nonempty: bool
    per_constraint_min: tuple  # Fractions
    per_constraint_max: tuple  # Fractions, None where unbounded

    @property
    def admissible(self) -> bool:
        return self.sum_zero and self.compact and self.all_touching and self.nonempty

    def to_json(self) -> dict:
        fmt = lambda q: None if q is None else str(q)
        return {
            "admissible": self.admissible,
            "sum_zero": self.sum_zero,
            "compact": self.compact,
            "all_touching": self.all_touching,
            "nonempty": self.nonempty,
            "per_constraint_min": [fmt(q) for q in self.per_constraint_min],
            "per_constraint_max": [fmt(q) for q in self.per_constraint_max],
        }


@lru_cache(maxsize=256)
def validate(system: HalfSpaceSystem) -> ValidationReport:
    sum_zero = not any(system.column_sums)
    n = system.n
    probe = solve_lp(system, [0] * n, "max")
    if probe.status == INFEASIBLE:
        # the empty set is compact, but nothing touches it
        return ValidationReport(sum_zero, True, False, False, (), ())

    compact = True
    for j in range(n):
        e = [int(j == t) for t in range(n)]
        if not (solve_lp(system, e, "max").optimal and solve_lp(system, e, "min").optimal):
            compact = False
            break

    mins, maxs = [], []
    for v, a in zip(system.vectors, system.offsets):
        lo = solve_lp(system, v, "min")
        hi = solve_lp(system, v, "max")
        mins.append(lo.value + a if lo.optimal else None)
        maxs.append(hi.value + a if hi.optimal else None)
    all_touching = all(q == 0 for q in mins)
    return ValidationReport(sum_zero, compact, all_touching, True, tuple(mins), tuple(maxs))


def require_admissible(system: HalfSpaceSystem) -> ValidationReport:
    report = validate(system)
    if not report.admissible:
        failed = [k for k in ("sum_zero", "compact", "all_touching", "nonempty") if not getattr(report, k)]
        raise InadmissibleSystemError(f"system fails: {', '.join(failed)}")
    return report


@dataclass(frozen=True)
class PolytopeGeometry:
    active_indices: tuple  # I_a, 0-based
    direction_basis: tuple  # d columns, each an n-tuple of Fractions
    lattice_basis: tuple  # d columns, each an n-tuple of ints
    covolume: float
    interior_point: tuple  # n Fractions
    coord_bounds: tuple  # per-coordinate (min, max) over P, Fractions

    @property
    def dim(self) -> int:
        return len(self.lattice_basis)

    def basis_matrix(self) -> np.ndarray:
        """Lattice basis as an ``(n, d)`` int64 array (columns = basis)."""
        n = len(self.interior_point)
        return np.array(self.lattice_basis, dtype=np.int64).reshape(self.dim, n).T

    def interior_array(self) -> np.ndarray:
        return np.array([float(q) for q in self.interior_point])


@lru_cache(maxsize=256)
def compute_geometry(system: HalfSpaceSystem) -> PolytopeGeometry:
    report = require_admissible(system)
    n = system.n
    active = tuple(i for i, q in enumerate(report.per_constraint_max) if q > 0)
    inactive_rows = [list(system.vectors[i]) for i in range(system.r) if i not in active]

    direction = tuple(tuple(col) for col in rational_nullspace(inactive_rows, n))
    lattice = tuple(tuple(col) for col in integer_kernel(inactive_rows, n))
    assert len(direction) == len(lattice)
    gram = [[sum(a * b for a, b in zip(u, w)) for w in lattice] for u in lattice]
    covolume = math.sqrt(bareiss_det(gram))

    if active:
        # maximize t subject to <v_i,x> + a_i >= t on I_a, = 0 off I_a
        c = [0] * n + [1]
        A_ub = [[-v for v in system.vectors[i]] + [1] for i in active]
        b_ub = [system.offsets[i] for i in active]
        A_eq = [list(system.vectors[i]) + [0] for i in range(system.r) if i not in active]
        b_eq = [-system.offsets[i] for i in range(system.r) if i not in active]
        res = linprog_exact(c, A_ub, b_ub, A_eq, b_eq)
        assert res.optimal and res.value > 0
        interior = res.point[:n]
    else:
        interior = solve_lp(system, [0] * n, "max").point

    bounds = []
    for j in range(n):
        e = [int(j == t) for t in range(n)]
        bounds.append((solve_lp(system, e, "min").value, solve_lp(system, e, "max").value))

    return PolytopeGeometry(active, direction, lattice, covolume, tuple(interior), tuple(bounds))


def enumerate_points(system: HalfSpaceSystem, k: int, box_cap: int = DEFAULT_BOX_CAP) -> np.ndarray:
    """Integer points of ``kP`` in lexicographic order, as an ``(N, n)`` array."""
    if k < 1:
        raise ValueError("k must be a positive integer")
    geom = compute_geometry(system)
    lo = np.array([math.ceil(k * b[0]) for b in geom.coord_bounds], dtype=np.int64)
    hi = np.array([math.floor(k * b[1]) for b in geom.coord_bounds], dtype=np.int64)
    box = 1
    for l, h in zip(lo, hi):
        box *= max(0, int(h - l + 1))
    if box > box_cap:
        raise ResourceLimitError(f"bounding box of {k}P has {box} cells (cap {box_cap})")
    offs = np.array([k * a for a in system.offsets], dtype=np.int64)
    return _kernels.scan_box(system.V(), offs, lo, hi)


def random_admissible_system(rng: np.random.Generator, n: int, r: int, bound: int = 3, max_tries: int = 1000):
    """Random admissible system with entries of ``v_i`` in ``[-bound, bound]``.

    Offsets come from a random integer point cloud ``S`` as
    ``a_i = -min_{s in S} <v_i, s>``, so every ``H_i`` meets ``conv(S) ⊂ P``.
    """
    for _ in range(max_tries):
        V = rng.integers(-bound, bound + 1, size=(r - 1, n))
        last = -V.sum(axis=0)
        if np.any(np.abs(last) > bound):
            continue
        V = np.vstack([V, last])
        if np.any(np.all(V == 0, axis=1)):
            continue
        cloud = rng.integers(-2, 3, size=(rng.integers(1, 5), n))
        a = -(cloud @ V.T).min(axis=0)
        system = HalfSpaceSystem(V.tolist(), a.tolist())
        if validate(system).admissible:
            return system
    raise RuntimeError("could not draw an admissible system")
