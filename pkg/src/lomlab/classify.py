"""Top-level classification of transitive matrix algebras.

Three independently computed integers must agree for any transitive algebra:
the commutant dimension, the minimal rank of a nonzero element, and the
density degree.  This module computes all three, produces the interpolation
obstruction witness for the non-real types, and builds the enveloping
commutant algebra that dominates the input.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .division import AlgebraType, DivisionStructure, frobenius_recognize
from .engine import (
    MatrixAlgebra,
    commutant,
    commutant_of_matrices,
    d_independent_subfamily,
    expansion_residual,
    is_transitive,
    min_rank,
    strict_interpolate,
)
from .errors import NoSolutionError, NotTransitiveError, RealTypeInputError
from .numeric import DEFAULT_TOL, Tolerance, solve_least_squares

__all__ = [
    "DensityObstruction",
    "ClassificationReport",
    "classify_type",
    "density_degree",
    "envelope",
    "classify",
]


@dataclass(frozen=True)
class DensityObstruction:
    """Certificate that one algebra element cannot separate x from its unit image.

    No element T of the algebra can map x to 0 and ``unit_image`` (= W x for a
    structure unit W) to ``target``: the normalized least-squares residual of
    that interpolation system over the whole coefficient space is ``margin``.
    """

    x: np.ndarray
    unit_image: np.ndarray
    target: np.ndarray
    margin: float


@dataclass(frozen=True)
class ClassificationReport:
    type: AlgebraType
    commutant_dim: int
    min_rank: int
    density_degree: int
    density_witness: Optional[DensityObstruction]
    envelope_dim: int
    envelope_contains_input: bool


def classify_type(algebra: MatrixAlgebra, tol: Tolerance = DEFAULT_TOL) -> AlgebraType:
    """Type of a transitive algebra, from the dimension of its commutant."""
    report = is_transitive(algebra, tol)
    if not report.transitive:
        raise NotTransitiveError("algebra has a nontrivial invariant subspace",
                                 witness=report.witness)
    return frobenius_recognize(commutant(algebra, tol), tol).type


def _obstruction_witness(algebra: MatrixAlgebra, structure: DivisionStructure,
                         tol: Tolerance, seed: int) -> DensityObstruction:
    """Build the infeasible pair (x, W x) with the largest normalized margin.

    The target is chosen along the smallest singular direction of the unit W,
    which keeps the margin at least 1/sqrt(2) no matter how badly conditioned
    a similarity was applied to the algebra.
    """
    n = algebra.ambient_dim
    w = structure.units[0]
    u, _, _ = np.linalg.svd(w)
    target = u[:, -1]  # left singular vector of the smallest singular value
    rng = np.random.default_rng(seed)
    x = rng.standard_normal(n)
    x /= np.linalg.norm(x)
    wx = w @ x

    stack = algebra.stack()
    system = np.vstack([(stack @ x).T, (stack @ wx).T])
    rhs = np.concatenate([np.zeros(n), target])
    _, residual = solve_least_squares(system, rhs, tol)
    margin = residual / np.linalg.norm(target)
    return DensityObstruction(x=x, unit_image=wx, target=target, margin=float(margin))


def density_degree(algebra: MatrixAlgebra, structure: DivisionStructure,
                   trials: int = 25, tol: Tolerance = DEFAULT_TOL, seed: int = 0):
    """Density degree k (the algebra is 1/k-dense) with an obstruction witness.

    Verification: for ``trials`` seeded random instances, a family of k*n
    independent vectors is reduced greedily to n vectors independent over the
    commutant, and the interpolation onto random targets must solve exactly.
    For k > 1 an infeasible witness pair is produced as well.

    Returns ``(k, witness_or_None)``.
    """
    k = structure.commutant_dim
    n = algebra.ambient_dim
    units = list(structure.units)
    rng = np.random.default_rng(seed)

    n_targets = n // k
    for _ in range(trials):
        family = rng.standard_normal((k * n_targets, n))
        picked = d_independent_subfamily(family, units, tol, need=n_targets)
        if len(picked) < n_targets:
            raise NoSolutionError(
                "could not extract a commutant-independent subfamily; "
                "structure units inconsistent with the algebra"
            )
        targets = rng.standard_normal((n_targets, n))
        targets /= np.linalg.norm(targets, axis=1)[:, None]
        pairs = [(family[i], y) for i, y in zip(picked, targets)]
        strict_interpolate(algebra, pairs, tol)  # raises NoSolutionError on failure

    witness = None
    if k > 1:
        witness = _obstruction_witness(algebra, structure, tol, seed)
    return k, witness


def envelope(algebra: MatrixAlgebra, structure: DivisionStructure,
             tol: Tolerance = DEFAULT_TOL, allow_real: bool = False) -> MatrixAlgebra:
    """Enveloping algebra: everything commuting with the structure units.

    For the complex type this is the commutant algebra of W; for the
    quaternion type, of the unit triple.  The result contains the input and
    has the same type.  For the real type the envelope is the full matrix
    algebra, returned only when ``allow_real`` is set.
    """
    report = is_transitive(algebra, tol)
    if not report.transitive:
        raise NotTransitiveError("envelope requires a transitive algebra",
                                 witness=report.witness)
    n = algebra.ambient_dim
    if structure.type is AlgebraType.REAL:
        if not allow_real:
            raise RealTypeInputError(
                "real-type envelope is the full matrix algebra; pass allow_real=True"
            )
        basis = [np.zeros((n, n)) for _ in range(n * n)]
        for idx in range(n * n):
            basis[idx].reshape(-1)[idx] = 1.0
        return MatrixAlgebra(ambient_dim=n, basis=tuple(basis), unital=True)
    basis = commutant_of_matrices(list(structure.units), tol)
    return MatrixAlgebra(ambient_dim=n, basis=tuple(basis), unital=True)


def classify(algebra: MatrixAlgebra, tol: Tolerance = DEFAULT_TOL,
             density_trials: int = 25, seed: int = 0) -> ClassificationReport:
    """Full classification pipeline for a transitive algebra."""
    report = is_transitive(algebra, tol, seed=seed)
    if not report.transitive:
        raise NotTransitiveError("algebra has a nontrivial invariant subspace",
                                 witness=report.witness)
    structure = frobenius_recognize(commutant(algebra, tol), tol)
    rank = min_rank(algebra, structure, tol)
    k, witness = density_degree(algebra, structure, density_trials, tol, seed)
    env = envelope(algebra, structure, tol, allow_real=True)
    env_vecs = env.vec_basis()
    contains = all(
        expansion_residual(b, env_vecs, tol) <= tol.cutoff(1.0) * 1e3
        for b in algebra.basis
    )
    return ClassificationReport(
        type=structure.type,
        commutant_dim=structure.commutant_dim,
        min_rank=rank,
        density_degree=k,
        density_witness=witness,
        envelope_dim=env.dim,
        envelope_contains_input=contains,
    )
