"""Metric Lie algebras from structure constants.

An algebra is specified by a sparse list of bracket entries (i, j, k, c),
1-based with i < j, meaning <[e_i, e_j], e_k> = c, together with an inner
product G on the basis (identity by default).  This module validates the
Jacobi identity, moves everything into an orthonormal frame, computes the
derivation algebra, and reports structural invariants (nilpotency step,
unimodularity, mean-curvature vector, Killing form).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import AlgebraFormatError, MetricError

MAX_DIM = 16

# Rank / null-space decisions are made relative to the largest singular
# value; catalog constants are exact small rationals or simple surds, far
# from this threshold.
RANK_TOL = 1e-10
JACOBI_TOL = 1e-10


@dataclass(frozen=True)
class MetricLieAlgebra:
    """A Lie algebra with a chosen basis and inner product.

    ``brackets`` holds entries (i, j, k, c), 1-based, i < j, meaning
    <[e_i, e_j], e_k> = c with respect to ``metric``.
    """

    name: str
    dim: int
    brackets: tuple[tuple[int, int, int, float], ...]
    metric: np.ndarray

    @property
    def structure_tensor(self) -> np.ndarray:
        """Dense antisymmetric c[i,j,k] = <[e_i, e_j], e_k> (0-based)."""
        c = np.zeros((self.dim, self.dim, self.dim))
        for i, j, k, v in self.brackets:
            c[i - 1, j - 1, k - 1] = v
            c[j - 1, i - 1, k - 1] = -v
        return c

    @property
    def bracket_tensor(self) -> np.ndarray:
        """Coefficients beta[i,j,m] with [e_i, e_j] = sum_m beta[i,j,m] e_m.

        The last index of the structure tensor is raised with G^{-1}.
        """
        c = self.structure_tensor
        if _is_identity(self.metric):
            return c
        return np.einsum("ijk,km->ijm", c, np.linalg.inv(self.metric))


@dataclass(frozen=True)
class FramedAlgebra:
    """Structure constants in an orthonormal basis.

    c[i,j,k] = <[e_i, e_j], e_k> with the basis orthonormal, so bracket
    coefficients and structure constants coincide.  ``provenance`` is the
    basis-change matrix M with new_a = sum_i M[i, a] old_i.
    """

    name: str
    dim: int
    c: np.ndarray
    provenance: np.ndarray

    @property
    def bracket_tensor(self) -> np.ndarray:
        return self.c


@dataclass(frozen=True)
class StructureProfile:
    """Structural invariants: nilpotency step, unimodularity, H and B."""

    step: int  # lower-central-series length; 0 when not nilpotent
    nilpotent: bool
    unimodular: bool
    mean_curvature: np.ndarray  # coordinates of H, <H, X> = tr(ad X)
    killing: np.ndarray  # B[i,j] = tr(ad e_i o ad e_j)


@dataclass(frozen=True)
class AlgebraDiagnostics:
    jacobi_residual: float
    ok: bool


def parse_algebra(text: str) -> MetricLieAlgebra:
    """Parse a .alg document (JSON) into a MetricLieAlgebra.

    Keys: name (text), dim (integer), brackets (list of [i, j, k, value]
    with i < j, 1-based), metric (optional n x n row-major symmetric
    matrix), hints (optional, e.g. {"lambda": -1.0}).
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise AlgebraFormatError(f"malformed document: {exc}") from None
    if not isinstance(doc, dict):
        raise AlgebraFormatError("document must be a JSON object")
    try:
        n = int(doc["dim"])
    except (KeyError, TypeError, ValueError):
        raise AlgebraFormatError("missing or non-integer 'dim'") from None
    if n < 1 or n > MAX_DIM:
        raise AlgebraFormatError(f"dim must be in 1..{MAX_DIM}, got {n}")
    name = str(doc.get("name", "unnamed"))

    entries: list[tuple[int, int, int, float]] = []
    seen: set[tuple[int, int, int]] = set()
    for raw in doc.get("brackets", []):
        try:
            i, j, k = int(raw[0]), int(raw[1]), int(raw[2])
            v = float(raw[3])
        except (TypeError, ValueError, IndexError):
            raise AlgebraFormatError(f"malformed bracket entry {raw!r}") from None
        for idx in (i, j, k):
            if idx < 1 or idx > n:
                raise AlgebraFormatError(
                    f"index out of range in bracket entry {raw!r}: {idx} not in 1..{n}"
                )
        if i >= j:
            raise AlgebraFormatError(f"bracket entry {raw!r} must have i < j")
        if (i, j, k) in seen:
            raise AlgebraFormatError(f"duplicate bracket entry ({i},{j},{k})")
        seen.add((i, j, k))
        entries.append((i, j, k, v))

    if "metric" in doc and doc["metric"] is not None:
        G = np.asarray(doc["metric"], dtype=float)
        if G.shape != (n, n):
            raise AlgebraFormatError(f"metric must be {n}x{n}")
        _check_metric(G)
    else:
        G = np.eye(n)

    return MetricLieAlgebra(name=name, dim=n, brackets=tuple(entries), metric=G)


def load_algebra(path) -> MetricLieAlgebra:
    with open(path, encoding="utf-8") as fh:
        return parse_algebra(fh.read())


def algebra_hints(text: str) -> dict:
    """Extract the optional hints object from a .alg document."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError:
        return {}
    hints = doc.get("hints", {}) if isinstance(doc, dict) else {}
    return hints if isinstance(hints, dict) else {}


def jacobi_residual(beta: np.ndarray) -> float:
    """Max-norm of [[x,y],z] + [[y,z],x] + [[z,x],y] over basis triples."""
    jac = (
        np.einsum("ijp,pkm->ijkm", beta, beta)
        + np.einsum("jkp,pim->ijkm", beta, beta)
        + np.einsum("kip,pjm->ijkm", beta, beta)
    )
    return float(np.max(np.abs(jac))) if jac.size else 0.0


def worst_jacobi_triple(beta: np.ndarray) -> tuple[int, int, int, float]:
    """The (i, j, k) triple (1-based) with the largest Jacobi violation."""
    jac = (
        np.einsum("ijp,pkm->ijkm", beta, beta)
        + np.einsum("jkp,pim->ijkm", beta, beta)
        + np.einsum("kip,pjm->ijkm", beta, beta)
    )
    flat = np.max(np.abs(jac), axis=-1)
    i, j, k = np.unravel_index(np.argmax(flat), flat.shape)
    return int(i) + 1, int(j) + 1, int(k) + 1, float(flat[i, j, k])


def validate_algebra(L) -> AlgebraDiagnostics:
    """Jacobi-identity diagnostics for a metric Lie algebra or frame."""
    res = jacobi_residual(L.bracket_tensor)
    return AlgebraDiagnostics(jacobi_residual=res, ok=res <= JACOBI_TOL)


def orthonormal_frame(L: MetricLieAlgebra) -> FramedAlgebra:
    """Express the structure constants in a G-orthonormal basis.

    The basis change comes from the lower-triangular Cholesky factor
    G = L L^T, with new_a = sum_i (L^{-T})[i, a] old_i.  For the identity
    metric the structure constants are returned unchanged (bitwise).
    """
    G = L.metric
    if _is_identity(G):
        return FramedAlgebra(
            name=L.name, dim=L.dim, c=L.structure_tensor, provenance=np.eye(L.dim)
        )
    _check_metric(G)
    low = np.linalg.cholesky(G)
    M = np.linalg.inv(low).T
    beta = L.bracket_tensor
    # <[new_a, new_b], new_c> with <old_m, new_c> = (G M)_{mc} = L_{mc}
    c = np.einsum("ia,jb,ijm,mc->abc", M, M, beta, low)
    return FramedAlgebra(name=L.name, dim=L.dim, c=c, provenance=M)


def derivation_basis(L) -> list[np.ndarray]:
    """Orthonormal basis of the derivation algebra Der(g).

    Solves D[e_i,e_j] = [D e_i, e_j] + [e_i, D e_j] for all i < j as the
    null space of an assembled linear map on n x n matrices, with
    singular-value thresholding at RANK_TOL relative to the largest
    singular value.
    """
    beta = L.bracket_tensor
    n = beta.shape[0]
    rows = []
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(n):
                # constraint: sum_m beta[i,j,m] D[k,m]
                #   - sum_p beta[p,j,k] D[p,i] - sum_p beta[i,p,k] D[p,j] = 0
                row = np.zeros((n, n))
                row[k, :] += beta[i, j, :]
                row[:, i] -= beta[:, j, k]
                row[:, j] -= beta[i, :, k]
                rows.append(row.ravel())
    if not rows:
        return [np.eye(1)] if n == 1 else []
    A = np.array(rows)
    _, s, vh = np.linalg.svd(A)
    cutoff = RANK_TOL * (s[0] if s.size else 1.0)
    rank = int(np.sum(s > cutoff))
    return [vh[r].reshape(n, n) for r in range(rank, n * n)]


def derivation_residual(L, D: np.ndarray) -> float:
    """Max violation of the derivation identity over basis pairs i < j."""
    beta = L.bracket_tensor
    lhs = np.einsum("ijm,km->ijk", beta, D)
    rhs = np.einsum("pi,pjk->ijk", D, beta) + np.einsum("pj,ipk->ijk", D, beta)
    diff = lhs - rhs
    iu = np.triu_indices(beta.shape[0], k=1)
    return float(np.max(np.abs(diff[iu]))) if iu[0].size else 0.0


def structure_profile(L) -> StructureProfile:
    """Nilpotency step, unimodularity, mean curvature H, Killing form B."""
    beta = L.bracket_tensor
    n = beta.shape[0]
    G = getattr(L, "metric", None)

    # ad[i][k][m] = beta[i, m, k]: matrix of ad e_i acting on coordinates
    ad = np.einsum("imk->ikm", beta)
    traces = np.einsum("ikk->i", ad)
    B = np.einsum("ikm,jmk->ij", ad, ad)
    if G is None or _is_identity(G):
        H = traces.copy()
    else:
        H = np.linalg.solve(G, traces)

    step = _nilpotency_step(beta)
    return StructureProfile(
        step=step,
        nilpotent=step > 0,
        unimodular=bool(np.max(np.abs(traces)) <= 1e-12) if n else True,
        mean_curvature=H,
        killing=B,
    )


def _nilpotency_step(beta: np.ndarray) -> int:
    """Length of the lower central series, or 0 if it never reaches zero."""
    n = beta.shape[0]
    basis = np.eye(n)  # columns span C^m
    # rank decisions use the overall bracket scale, not the (possibly
    # numerically-zero) matrix at hand, so roundoff never revives the series
    scale = float(np.max(np.abs(beta))) if beta.size else 0.0
    step = 0
    for _ in range(n + 1):
        step += 1
        # [g, C^m]: all [e_i, v] for v in the current span
        prods = np.einsum("ijm,jv->miv", beta, basis).reshape(n, -1)
        nxt = _column_span(prods, scale)
        if nxt.shape[1] == 0:
            return step
        if nxt.shape[1] >= basis.shape[1]:
            return 0  # stabilized at a nonzero ideal: not nilpotent
        basis = nxt
    return 0


def _column_span(A: np.ndarray, scale: float = 0.0) -> np.ndarray:
    if A.size == 0 or np.max(np.abs(A)) == 0.0:
        return np.zeros((A.shape[0], 0))
    u, s, _ = np.linalg.svd(A, full_matrices=False)
    cutoff = RANK_TOL * max(float(s[0]), scale)
    rank = int(np.sum(s > cutoff))
    return u[:, :rank]


def _is_identity(G: np.ndarray) -> bool:
    n = G.shape[0]
    return bool(np.array_equal(G, np.eye(n)))


def _check_metric(G: np.ndarray) -> None:
    if np.max(np.abs(G - G.T)) > 1e-12:
        raise MetricError("metric is not symmetric")
    if np.linalg.eigvalsh(G).min() <= 0:
        raise MetricError("metric is not positive definite")
