"""Independent oracles and random instance generation.

Nothing here reuses the solvers' search logic: the exhaustive oracles only
call the structural checker, and the numeric oracle evaluates the rank of
``[A - zF | B]`` on random real instantiations.
"""
from __future__ import annotations

import logging
from itertools import combinations, combinations_with_replacement

import numpy as np
import scipy.linalg

from .controllability import check_structural_controllability
from .mcp import is_input_configuration
from .setcover import SetCoverInstance
from .system import DescriptorSystem, StructuralPattern, e

log = logging.getLogger(__name__)

EXHAUSTIVE_LIMIT = 12
NUMERIC_LIMIT = 50
FINITE_CUTOFF = 1e8


class OracleLimitError(ValueError):
    pass


class IllConditionedError(RuntimeError):
    pass


def exhaustive_mcp1(sys: DescriptorSystem, size_limit: int = None) -> frozenset:
    """Smallest ``S`` (first in lexicographic order) passing the checker."""
    n = sys.n
    if n > EXHAUSTIVE_LIMIT:
        raise OracleLimitError(f"exhaustive MCP1 limited to n <= {EXHAUSTIVE_LIMIT}")
    limit = n if size_limit is None else min(size_limit, n)
    for k in range(limit + 1):
        for rows in combinations(range(1, n + 1), k):
            if is_input_configuration(sys, rows):
                return frozenset(e(r) for r in rows)
    raise ValueError(f"no input configuration with at most {limit} inputs")


def brute_force_mcp0(sys: DescriptorSystem, exhaustive_up_to: int = 4) -> int:
    """Smallest positive number of input columns making ``sys`` pass the checker.

    For ``n <= exhaustive_up_to`` every multiset of nonempty input columns is
    tried.  Larger systems try only all-ones columns, which is exact because
    adding input entries never breaks structural controllability.
    """
    n = sys.n
    if n == 0:
        return 1
    columns = [frozenset(c) for r in range(1, n + 1)
               for c in combinations(range(1, n + 1), r)]
    for m in range(1, n + 1):
        if n <= exhaustive_up_to:
            for combo in combinations_with_replacement(columns, m):
                entries = frozenset((i, k + 1) for k, col in enumerate(combo) for i in col)
                if check_structural_controllability(
                        sys.with_inputs(StructuralPattern(n, m, entries))).verdict:
                    return m
        elif check_structural_controllability(
                sys.with_inputs(StructuralPattern.full(n, m))).verdict:
            return m
    raise AssertionError("n all-ones input columns always suffice for a solvable system")


def exhaustive_set_cover(inst: SetCoverInstance) -> int:
    """Minimum cover size by enumerating index subsets in increasing size."""
    fams = [members for _, members in inst.families]
    for k in range(len(fams) + 1):
        for combo in combinations(fams, k):
            if set().union(*combo) >= inst.universe:
                return k
    raise ValueError("infeasible set cover instance")


def _instantiate(pattern: StructuralPattern, rng) -> np.ndarray:
    out = np.zeros((pattern.rows, pattern.cols))
    for i, j in sorted(pattern.nonzeros):
        out[i - 1, j - 1] = rng.uniform(1.0, 2.0)
    return out


def _rank(mat: np.ndarray, scale: float) -> int:
    """Numeric rank; ``scale`` bounds the largest singular value of the data."""
    if mat.size == 0:
        return 0
    sv = np.linalg.svd(mat, compute_uv=False)
    tol = max(mat.shape) * np.finfo(float).eps * scale
    return int(np.sum(sv > tol))


def _pencil_rank(A, F, B, z) -> int:
    norm = lambda M: np.linalg.norm(M, 2) if M.size else 0.0
    scale = norm(A) + abs(z) * norm(F) + norm(B)
    return _rank(np.hstack([A - z * F, B]), scale)


def _cluster_centroids(eigs, radius=1e-3) -> list:
    """Centroids of eigenvalue clusters (single linkage, relative ``radius``).

    A defective eigenvalue of multiplicity k comes back from QZ split by
    about eps**(1/k); the cluster mean is accurate again to O(eps).
    """
    eigs = sorted(eigs, key=lambda z: (z.real, z.imag))
    groups = []
    for z in eigs:
        for grp in groups:
            if any(abs(z - w) <= radius * max(1.0, abs(w)) for w in grp):
                grp.append(z)
                break
        else:
            groups.append([z])
    return [complex(np.mean(grp)) for grp in groups if len(grp) > 1]


def numeric_rank_oracle(sys: DescriptorSystem, trials: int = 5, seed: int = 0,
                        retries: int = 3) -> bool:
    """Randomized check of ``rank [A - zF | B] = n`` for every complex ``z``.

    Nonzeros are drawn uniformly from ``[1, 2]``.  The rank is tested at
    every finite generalized eigenvalue of ``(A, F)`` (``|z| <= 1e8``) and at
    ``trials`` random complex points, plus the centroid of every cluster of
    nearly equal eigenvalues.  A pencil that is singular at a random
    point is reported as not controllable.  Probabilistic: agreement tool,
    not ground truth.
    """
    n = sys.n
    if n > NUMERIC_LIMIT:
        raise OracleLimitError(f"numeric oracle limited to n <= {NUMERIC_LIMIT}")
    if n == 0:
        return True
    rng = np.random.default_rng(seed)
    for _ in range(retries + 1):
        F = _instantiate(sys.F, rng)
        A = _instantiate(sys.A, rng)
        B = _instantiate(sys.B, rng)
        probes = rng.normal(size=trials) + 1j * rng.normal(size=trials)
        if _pencil_rank(A, F, B[:, :0], probes[0]) < n:
            return False
        with np.errstate(all="ignore"):
            eig = scipy.linalg.eigvals(A, F)
        if np.any(np.isnan(eig)):
            log.debug("NaN eigenvalue, redrawing instantiation")
            continue
        finite = eig[np.isfinite(eig) & (np.abs(eig) <= FINITE_CUTOFF)]
        points = list(finite) + _cluster_centroids(finite) + list(probes)
        return all(_pencil_rank(A, F, B, z) == n for z in points)
    raise IllConditionedError(f"no well-conditioned instantiation after {retries} retries")


def random_system(n: int, density_a: float, density_f: float, seed: int,
                  ensure_solvable: bool = True, m: int = 0,
                  density_b: float = 0.0) -> DescriptorSystem:
    """Bernoulli patterns; with ``ensure_solvable`` a random permutation is
    spread over ``A`` and ``F`` so that ``nu(G_A-sF) = n``."""
    for d in (density_a, density_f, density_b):
        if not 0.0 <= d <= 1.0:
            raise ValueError("densities must lie in [0, 1]")
    rng = np.random.default_rng(seed)
    pos = [(i, j) for i in range(1, n + 1) for j in range(1, n + 1)]
    a = {p for p, r in zip(pos, rng.random(len(pos))) if r < density_a}
    f = {p for p, r in zip(pos, rng.random(len(pos))) if r < density_f}
    if ensure_solvable and n:
        perm = rng.permutation(n)
        to_a = rng.random(n) < 0.5
        for i in range(n):
            (a if to_a[i] else f).add((i + 1, int(perm[i]) + 1))
    bpos = [(i, j) for i in range(1, n + 1) for j in range(1, m + 1)]
    b = {p for p, r in zip(bpos, rng.random(len(bpos))) if r < density_b}
    return DescriptorSystem(StructuralPattern(n, n, frozenset(f)),
                            StructuralPattern(n, n, frozenset(a)),
                            StructuralPattern(n, m, frozenset(b)))


def random_set_cover(n_elements: int, n_families: int, seed: int,
                     density: float = 0.4) -> SetCoverInstance:
    """Random feasible instance: each element is also forced into one random family."""
    rng = np.random.default_rng(seed)
    fams = [set() for _ in range(n_families)]
    for w in range(1, n_elements + 1):
        fams[int(rng.integers(n_families))].add(w)
        for f in fams:
            if rng.random() < density:
                f.add(w)
    return SetCoverInstance.from_lists(n_elements, fams)
