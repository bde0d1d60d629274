"""Generators for valid-by-construction test data.

Everything here builds equivariant weight families and transition matrices
whose defining identities hold exactly, so randomized suites can assert
exact equality without reference outputs:

* weight families come from per-ray integer data (one integer a_rho per
  ray), solved cone by cone against the ray generators — restrictions to a
  shared face then agree automatically, line by line;
* transition matrices are dressed diagonals H_s * diag(chi^(m_s - m_t)) * H_t^{-1}
  with unitriangular H's over the chart rings, which satisfies the cocycle
  law on every triple by construction.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .bundles import EquivariantData
from .cocycles import TransitionData
from .fans import Cone, Fan, IntVec, hirzebruch_fan, product_p1_fan, projective_fan, vec_sub
from .laurent import LaurentMatrix, LaurentPoly, matrix_inverse_unit


def _invert_rows(rows) -> list[list[Fraction]]:
    """Exact inverse of a small square matrix given as a list of rows."""
    n = len(rows)
    work = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
            for i, row in enumerate(rows)]
    for col in range(n):
        piv = next((i for i in range(col, n) if work[i][col] != 0), None)
        if piv is None:
            raise ValueError("ray matrix is singular")
        work[col], work[piv] = work[piv], work[col]
        inv = 1 / work[col][col]
        work[col] = [a * inv for a in work[col]]
        for i in range(n):
            if i != col and work[i][col] != 0:
                f = work[i][col]
                work[i] = [a - f * b for a, b in zip(work[i], work[col])]
    return [row[n:] for row in work]


def _require_smooth_full(fan: Fan, cone: Cone):
    if cone.dim != fan.dim:
        raise ValueError("corpus generators need full-dimensional maximal cones")


def solve_cone_weight(fan: Fan, cone_index: int, ray_values) -> IntVec:
    """The unique m with <m, v_rho> = -a_rho over the rays of one cone.

    ``ray_values`` maps ray index -> integer a_rho.  Only smooth
    full-dimensional cones give an integral solution, and we insist on one.
    """
    cone = fan.cones[cone_index]
    _require_smooth_full(fan, cone)
    inv = _invert_rows(fan.ray_matrix(cone))
    target = [-Fraction(ray_values[k]) for k in cone.ray_indices]
    m = [sum(inv[i][j] * target[j] for j in range(len(target))) for i in range(fan.dim)]
    if any(x.denominator != 1 for x in m):
        raise ValueError(f"non-integral weight on cone {cone_index}: {m}")
    return tuple(int(x) for x in m)


def weights_from_ray_values(fan: Fan, ray_values) -> dict[int, IntVec]:
    return {ci: solve_cone_weight(fan, ci, ray_values) for ci in fan.maximal_cone_indices()}


def random_ray_values(fan: Fan, rng: random.Random, bound: int = 3) -> dict[int, int]:
    return {k: rng.randint(-bound, bound) for k in range(len(fan.rays))}


def random_equivariant_data(fan: Fan, rank: int, rng: random.Random, bound: int = 3) -> EquivariantData:
    """Compatible-by-construction weight family: one per-ray profile per line."""
    families = [weights_from_ray_values(fan, random_ray_values(fan, rng, bound))
                for _ in range(rank)]
    weights = {ci: tuple(fam[ci] for fam in families) for ci in fan.maximal_cone_indices()}
    return EquivariantData(fan, rank, weights)


def line_bundle_data(fan: Fan, k: int, ray: int | None = None) -> EquivariantData:
    """Rank-one weight family of the line bundle with divisor k * D_ray."""
    values = {i: 0 for i in range(len(fan.rays))}
    values[len(fan.rays) - 1 if ray is None else ray] = k
    weights = {ci: (m,) for ci, m in weights_from_ray_values(fan, values).items()}
    return EquivariantData(fan, 1, weights)


def diagonal_transitions(data: EquivariantData) -> TransitionData:
    """Transition matrices diag(chi^(m_i^s - m_i^t)) in the weight eigenframes."""
    maximal = sorted(data.weights)
    mats = {}
    for s in maximal:
        for t in maximal:
            if s == t:
                continue
            diag = [LaurentPoly.monomial(vec_sub(ms, mt))
                    for ms, mt in zip(data.weights[s], data.weights[t])]
            mats[(s, t)] = LaurentMatrix.diagonal(diag)
    return TransitionData(data.fan, data.rank, mats)


def chart_monomial(fan: Fan, cone_index: int, rng: random.Random, bound: int = 3) -> IntVec:
    """A random exponent in the dual semigroup of a smooth full-dimensional cone."""
    cone = fan.cones[cone_index]
    _require_smooth_full(fan, cone)
    inv = _invert_rows(fan.ray_matrix(cone))
    if any(x.denominator != 1 for row in inv for x in row):
        raise ValueError("dual basis is not integral; cone is not smooth")
    # columns of the inverse ray matrix form the dual basis of the generators
    dual = [tuple(int(inv[j][i]) for j in range(fan.dim)) for i in range(fan.dim)]
    m = [0] * fan.dim
    for u in dual:
        c = rng.randint(0, bound)
        m = [a + c * b for a, b in zip(m, u)]
    return tuple(m)


def random_dressing(fan: Fan, rank: int, rng: random.Random,
                    factors: int = 2, bound: int = 2) -> dict[int, LaurentMatrix]:
    """One unitriangular matrix over the chart ring per maximal cone (det = 1)."""
    out = {}
    for ci in fan.maximal_cone_indices():
        H = LaurentMatrix.identity(rank, fan.dim)
        for step in range(factors):
            rows = [[LaurentPoly.const(int(i == j), fan.dim) for j in range(rank)]
                    for i in range(rank)]
            for i in range(rank):
                for j in range(rank):
                    upper = i < j if step % 2 == 0 else i > j
                    if upper and rng.random() < 0.7:
                        c = rng.choice([-2, -1, 1, 2])
                        rows[i][j] = LaurentPoly.monomial(chart_monomial(fan, ci, rng, bound), c)
            H = H * LaurentMatrix(rows)
        out[ci] = H
    return out


def dressed_transitions(data: EquivariantData,
                        dressing: dict[int, LaurentMatrix]) -> TransitionData:
    """H_s * diag(chi^(m^s - m^t)) * H_t^{-1} over every ordered pair."""
    base = diagonal_transitions(data)
    inverses = {ci: matrix_inverse_unit(H) for ci, H in dressing.items()}
    mats = {}
    for (s, t), D in base.matrices.items():
        mats[(s, t)] = dressing[s] * D * inverses[t]
    return TransitionData(data.fan, data.rank, mats)


def random_transition_data(fan: Fan, rank: int, rng: random.Random,
                           bound: int = 3) -> TransitionData:
    data = random_equivariant_data(fan, rank, rng, bound)
    return dressed_transitions(data, random_dressing(fan, rank, rng))


def surface_fans() -> list[Fan]:
    """The smooth complete surfaces the randomized suites draw from."""
    return [projective_fan(2), product_p1_fan(), hirzebruch_fan(1)]
