"""Algebraic soliton certificates and their extensions.

Solves Ric = lambda * id + D over the derivation algebra by linear least
squares, certifies Einstein metrics, builds rank-one solvable Einstein
extensions, and computes how many flat Gaussian directions must be added
to force strict linear stability.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import (
    FramedAlgebra,
    MetricLieAlgebra,
    derivation_residual,
    orthonormal_frame,
)
from .curvature import CurvatureSummary, RiemannTensor, curvature_summary
from .errors import EinsteinVerificationFailed, NotExpanding

# Acceptance tolerance for certificates: one order above the linear-algebra
# tolerances, separating modeling error from numerical error.
CERT_TOL = 1e-8


@dataclass(frozen=True)
class SolitonCertificate:
    """Best-fit (lambda, D) with residual max|Ric - lambda I - D|."""

    lam: float
    derivation: np.ndarray
    residual: float
    trace_D: float
    div_X: float  # equals trace_D for algebraic solitons
    accepted: bool
    degenerate: bool  # identity lies in span(Der): lambda fixed by min-norm
    expanding: bool


@dataclass(frozen=True)
class EinsteinCertificate:
    lam: float
    residual: float
    accepted: bool


@dataclass(frozen=True)
class GaussianExtensionPlan:
    C1: float
    C2: float
    lam: float
    k: int
    mode: str  # "paper-bound" or "sharp"
    bracket_value_at_k: float


@dataclass(frozen=True)
class GaussianProductReport:
    k: int
    residual: float


def solve_algebraic_soliton(
    F: FramedAlgebra,
    summary: CurvatureSummary,
    ders: list[np.ndarray],
    lambda_hint: float | None = None,
) -> SolitonCertificate:
    """Least-squares fit of Ric over span{I} + Der(g).

    Non-solitons yield a certificate with large residual rather than an
    error.  When the identity is itself a derivation (e.g. abelian) the
    split into lambda and D is not unique; the minimum-norm coefficient
    solution is returned and the certificate is flagged degenerate, unless
    ``lambda_hint`` pins lambda.
    """
    n = F.dim
    ric = summary.ric
    cols = [np.eye(n).ravel()] + [d.ravel() for d in ders]
    A = np.column_stack(cols)

    # Is I in span(Der)?  Decides the degeneracy flag.
    if ders:
        Ad = np.column_stack([d.ravel() for d in ders])
        coef, *_ = np.linalg.lstsq(Ad, np.eye(n).ravel(), rcond=None)
        degenerate = bool(
            np.max(np.abs(Ad @ coef - np.eye(n).ravel())) <= 1e-10
        )
    else:
        degenerate = False

    if lambda_hint is not None:
        lam = float(lambda_hint)
        target = (ric - lam * np.eye(n)).ravel()
        if ders:
            coef, *_ = np.linalg.lstsq(
                np.column_stack([d.ravel() for d in ders]), target, rcond=None
            )
            D = sum(c * d for c, d in zip(coef, ders))
        else:
            D = np.zeros((n, n))
    else:
        x, *_ = np.linalg.lstsq(A, ric.ravel(), rcond=None)
        lam = float(x[0])
        D = sum(c * d for c, d in zip(x[1:], ders)) if ders else np.zeros((n, n))

    residual = float(np.max(np.abs(ric - lam * np.eye(n) - D)))
    trace_D = float(np.trace(D))
    return SolitonCertificate(
        lam=lam,
        derivation=D,
        residual=residual,
        trace_D=trace_D,
        div_X=trace_D,
        accepted=residual <= CERT_TOL,
        degenerate=degenerate,
        expanding=lam < 0,
    )


def check_einstein(summary: CurvatureSummary) -> EinsteinCertificate:
    """Certify Ric = lambda I with lambda = scal / n."""
    n = summary.dim
    lam = summary.scal / n
    residual = float(np.max(np.abs(summary.ric - lam * np.eye(n))))
    return EinsteinCertificate(lam=lam, residual=residual, accepted=residual <= CERT_TOL)


def rank_one_extension(F: FramedAlgebra, cert: SolitonCertificate) -> MetricLieAlgebra:
    """One-dimensional solvable extension s = span(A) + n with ad A = alpha D.

    alpha = sqrt(-lambda / tr D^2) is the unique scaling making the
    extension Einstein with the same lambda; this is verified a posteriori
    via the curvature pipeline rather than trusted.
    """
    if not cert.accepted:
        raise ValueError("certificate not accepted (residual too large)")
    if cert.lam >= 0:
        raise ValueError(f"extension requires lambda < 0, got {cert.lam}")
    if cert.trace_D <= 0:
        raise ValueError(f"extension requires tr D > 0, got {cert.trace_D}")
    D = cert.derivation
    if np.max(np.abs(D - D.T)) > CERT_TOL:
        raise ValueError("extension requires a symmetric derivation")
    if np.linalg.eigvalsh(0.5 * (D + D.T)).min() < -CERT_TOL:
        raise ValueError("extension requires D positive semidefinite")

    n = F.dim
    alpha = float(np.sqrt(-cert.lam / np.trace(D @ D)))
    entries: list[tuple[int, int, int, float]] = []
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(n):
                if F.c[i, j, k] != 0.0:
                    entries.append((i + 1, j + 1, k + 1, float(F.c[i, j, k])))
    # [e_j, A] = -alpha D e_j, with A the new last basis vector
    for j in range(n):
        for k in range(n):
            if D[k, j] != 0.0:
                entries.append((j + 1, n + 1, k + 1, float(-alpha * D[k, j])))
    ext = MetricLieAlgebra(
        name=f"{F.name}+solvext",
        dim=n + 1,
        brackets=tuple(entries),
        metric=np.eye(n + 1),
    )

    ecert = check_einstein(curvature_summary(orthonormal_frame(ext)))
    if not ecert.accepted or abs(ecert.lam - cert.lam) > CERT_TOL:
        raise EinsteinVerificationFailed(
            f"extension is not Einstein at lambda={cert.lam}: "
            f"residual {ecert.residual:.3e}, lambda {ecert.lam}"
        )
    return ext


def crude_curvature_bound(riemann: RiemannTensor, ric: np.ndarray) -> float:
    """Term-by-term absolute-value bound C1 on the stability form.

    Bounds |sum R[i,j,k,l] h[i,l] h[j,k] + sum R[i,j] h[i,k] h[j,k]| by a
    diagonal quadratic form sum w[a,b] h[a,b]^2 via 2xy <= x^2 + y^2, then
    maximizes over the unit sphere: C1 = max w[a,b].
    """
    R = np.abs(riemann.R)
    W = 0.5 * np.einsum("ajkb->ab", R) + 0.5 * np.einsum("iabl->ab", R)
    rowsum = np.abs(ric).sum(axis=1)
    W = W + 0.5 * rowsum[:, None] + 0.5 * rowsum[None, :]
    return float(W.max())


def gaussian_extension_dimension(
    summary: CurvatureSummary,
    riemann: RiemannTensor,
    cert: SolitonCertificate,
    stability_max_q: float,
    mode: str = "paper-bound",
    ignore_stability: bool = False,
) -> GaussianExtensionPlan:
    """Number k of flat Gaussian directions forcing strict linear stability.

    k is the smallest non-negative integer with C1 + C2 + lambda*k/2 < -1,
    except k = 0 when the algebraic stability test already passes.  In
    paper-bound mode C1 is the crude curvature bound and
    C2 = (|scal| + n|lambda|)/2; in sharp mode C1 = max(stability_max_q, 0)
    and C2 = |div X| / 2.
    """
    if cert.lam >= 0:
        raise NotExpanding(f"not expanding: lambda={cert.lam:g}")
    if mode not in ("paper-bound", "sharp"):
        raise ValueError(f"unknown mode {mode!r}")
    lam = cert.lam
    n = summary.dim
    if mode == "paper-bound":
        C1 = crude_curvature_bound(riemann, summary.ric)
        C2 = (abs(summary.scal) + n * abs(lam)) / 2.0
    else:
        C1 = max(stability_max_q, 0.0)
        C2 = abs(cert.div_X) / 2.0

    already_stable = (not ignore_stability) and stability_max_q < 0.5 * cert.trace_D
    if already_stable:
        k = 0
    else:
        k = 0
        while C1 + C2 + 0.5 * lam * k >= -1.0:
            k += 1
    return GaussianExtensionPlan(
        C1=C1,
        C2=C2,
        lam=lam,
        k=k,
        mode=mode,
        bracket_value_at_k=C1 + C2 + 0.5 * lam * k,
    )


def verify_gaussian_product(
    F: FramedAlgebra, cert: SolitonCertificate, k: int
) -> GaussianProductReport:
    """Residual of the soliton equation on the product with k flat directions.

    The product Ricci is block-diagonal (Ric_M, 0) and the right side is
    block-diagonal (lambda I + D, lambda I + Hess f) with Hess f =
    -lambda I on the flat factor, so the flat block cancels identically and
    the residual equals the certificate residual.
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    n = F.dim
    summary = curvature_summary(F)
    m = n + k
    ric_prod = np.zeros((m, m))
    ric_prod[:n, :n] = summary.ric
    rhs = np.zeros((m, m))
    rhs[:n, :n] = cert.lam * np.eye(n) + cert.derivation
    hess_f = -cert.lam * np.eye(k)
    rhs[n:, n:] = cert.lam * np.eye(k) + hess_f
    residual = float(np.max(np.abs(ric_prod - rhs)))
    return GaussianProductReport(k=k, residual=residual)


def nilsoliton_identity_residual(cert: SolitonCertificate) -> float:
    """|tr(D^2) + lambda tr D|, which vanishes for nilsolitons."""
    D = cert.derivation
    return float(abs(np.trace(D @ D) + cert.lam * np.trace(D)))


__all__ = [
    "SolitonCertificate",
    "EinsteinCertificate",
    "GaussianExtensionPlan",
    "GaussianProductReport",
    "solve_algebraic_soliton",
    "check_einstein",
    "rank_one_extension",
    "crude_curvature_bound",
    "gaussian_extension_dimension",
    "verify_gaussian_product",
    "nilsoliton_identity_residual",
    "derivation_residual",
]
