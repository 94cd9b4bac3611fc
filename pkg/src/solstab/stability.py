"""The stability form q on symmetric 2-tensors and its spectrum.

q(h) = <Ro h + Ric o h, h> with (Ro h)_ij = R[i,p,q,j] h[p,q] and
(Ric o h)_ij = Ric[i,k] h[k,j].  A left-invariant metric satisfying
Ric = lambda I + D is certified strictly linearly stable when
max q < tr(D) / 2 over unit symmetric 2-tensors; for Einstein metrics the
criterion is max <Ro h, h> < -lambda.  Maxima are top eigenvalues of the
form's matrix in an orthonormal basis of Sym^2, computed by a deterministic
cyclic Jacobi rotation solver so that table digits are reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .curvature import CurvatureSummary
from .errors import NotSymmetric
from .soliton import SolitonCertificate

# Strict inequalities at floating precision need an explicit dead zone:
# margins within VERDICT_TIE of zero are reported as inconclusive (None).
VERDICT_TIE = 1e-9

JACOBI_OFF_TOL = 1e-12


@dataclass(frozen=True)
class Sym2Basis:
    """Orthonormal basis of symmetric n x n matrices under <h,k> = sum h*k.

    Deterministic ordering: diagonal units E_ii first (ascending), then
    (E_ij + E_ji)/sqrt(2) in lexicographic order.
    """

    n: int
    N: int
    elements: np.ndarray  # shape (N, n, n)


@dataclass(frozen=True)
class StabilityForm:
    S: np.ndarray  # matrix of h -> Ro h + (Ric h + h Ric)/2
    S_Ro: np.ndarray  # matrix of h -> Ro h alone


@dataclass(frozen=True)
class StabilityReport:
    max_q: float
    threshold: float  # tr(D) / 2
    q_margin: float
    q_verdict: bool | None  # None: |margin| within the tie dead zone
    step: int
    lam: float
    trace_D: float
    max_Ro: float | None = None
    einstein_threshold: float | None = None
    Ro_margin: float | None = None
    Ro_verdict: bool | None = None


def sym2_basis(n: int) -> Sym2Basis:
    if n < 1 or n > 17:
        raise ValueError(f"n must be in 1..17, got {n}")
    elements = []
    for i in range(n):
        E = np.zeros((n, n))
        E[i, i] = 1.0
        elements.append(E)
    inv_sqrt2 = 1.0 / np.sqrt(2.0)
    for i in range(n):
        for j in range(i + 1, n):
            E = np.zeros((n, n))
            E[i, j] = E[j, i] = inv_sqrt2
            elements.append(E)
    return Sym2Basis(n=n, N=n * (n + 1) // 2, elements=np.array(elements))


def stability_form(summary: CurvatureSummary, basis: Sym2Basis) -> StabilityForm:
    """Matrices of the stability form and its pure-curvature part.

    S[a,b] = <Ro e_a + (Ric e_a + e_a Ric)/2, e_b>; the symmetrization of
    the Ricci term leaves the quadratic form unchanged on symmetric h and
    makes S symmetric.
    """
    R = summary.riemann.R
    ric = summary.ric
    E = basis.elements
    Ro = np.einsum("ipqj,apq->aij", R, E)
    Rich = 0.5 * (np.einsum("ik,akj->aij", ric, E) + np.einsum("aik,kj->aij", E, ric))
    S = np.einsum("aij,bij->ab", Ro + Rich, E)
    S_Ro = np.einsum("aij,bij->ab", Ro, E)
    return StabilityForm(S=S, S_Ro=S_Ro)


def evaluate_q(summary: CurvatureSummary, h: np.ndarray) -> float:
    """Direct evaluation q(h) = sum R[i,p,q,j] h[p,q] h[i,j] + sum Ric[i,k] h[k,j] h[i,j]."""
    R = summary.riemann.R
    ric = summary.ric
    return float(
        np.einsum("ipqj,pq,ij->", R, h, h) + np.einsum("ik,kj,ij->", ric, h, h)
    )


def jacobi_eigenvalues(S: np.ndarray, off_tol: float = JACOBI_OFF_TOL) -> np.ndarray:
    """All eigenvalues of a symmetric matrix by cyclic Jacobi rotations.

    Sweeps run in a fixed row-major order until the off-diagonal Frobenius
    norm is at most off_tol * ||S||_F, so results are deterministic across
    runs and platforms.
    """
    S = np.asarray(S, dtype=float)
    N = S.shape[0]
    scale = float(np.linalg.norm(S))
    if np.max(np.abs(S - S.T)) > 1e-8 * max(scale, 1.0):
        raise NotSymmetric("matrix is not symmetric")
    A = 0.5 * (S + S.T)
    if scale == 0.0 or N == 1:
        return np.sort(np.diag(A))
    target = off_tol * scale
    converged = False
    for _ in range(100):
        # norm of the off-diagonal part, computed directly: the subtraction
        # ||A||^2 - sum(diag^2) cancels catastrophically near convergence
        off = float(np.linalg.norm(A - np.diag(np.diag(A))))
        if off <= target:
            converged = True
            break
        for p in range(N - 1):
            for q in range(p + 1, N):
                apq = A[p, q]
                if abs(apq) == 0.0:
                    continue
                diff = A[q, q] - A[p, p]
                if abs(diff) > 2e10 * abs(apq):
                    t = apq / diff  # = 1/(2 theta) without overflow risk
                elif diff == 0.0:
                    t = 1.0
                else:
                    theta = diff / (2.0 * apq)
                    t = np.sign(theta) / (abs(theta) + np.sqrt(theta * theta + 1.0))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                rot_p = c * A[:, p] - s * A[:, q]
                rot_q = s * A[:, p] + c * A[:, q]
                A[:, p], A[:, q] = rot_p, rot_q
                rot_p = c * A[p, :] - s * A[q, :]
                rot_q = s * A[p, :] + c * A[q, :]
                A[p, :], A[q, :] = rot_p, rot_q
    if not converged:
        off = float(np.linalg.norm(A - np.diag(np.diag(A))))
        if off > target:
            raise ArithmeticError(
                f"Jacobi sweeps did not reach off-diagonal tolerance: {off:g} > {target:g}"
            )
    return np.sort(np.diag(A))


def max_eigenvalue(S: np.ndarray) -> float:
    """Largest eigenvalue via the cyclic Jacobi solver."""
    return float(jacobi_eigenvalues(S)[-1])


def _verdict(margin: float) -> bool | None:
    if abs(margin) <= VERDICT_TIE:
        return None
    return margin > 0


def stability_report(
    F,
    summary: CurvatureSummary,
    cert: SolitonCertificate,
    extension_summary: CurvatureSummary | None = None,
) -> StabilityReport:
    """One table row: max q against tr(D)/2, and, when an extension summary
    is supplied, max Ro of the extension against -lambda."""
    from .algebra import structure_profile

    basis = sym2_basis(F.dim)
    form = stability_form(summary, basis)
    max_q = max_eigenvalue(form.S)
    threshold = 0.5 * cert.trace_D
    q_margin = threshold - max_q
    profile = structure_profile(F)

    max_Ro = einstein_threshold = Ro_margin = Ro_verdict = None
    if extension_summary is not None:
        ext_basis = sym2_basis(extension_summary.dim)
        ext_form = stability_form(extension_summary, ext_basis)
        max_Ro = max_eigenvalue(ext_form.S_Ro)
        einstein_threshold = -cert.lam
        Ro_margin = einstein_threshold - max_Ro
        Ro_verdict = _verdict(Ro_margin)

    return StabilityReport(
        max_q=max_q,
        threshold=threshold,
        q_margin=q_margin,
        q_verdict=_verdict(q_margin),
        step=profile.step,
        lam=cert.lam,
        trace_D=cert.trace_D,
        max_Ro=max_Ro,
        einstein_threshold=einstein_threshold,
        Ro_margin=Ro_margin,
        Ro_verdict=Ro_verdict,
    )
