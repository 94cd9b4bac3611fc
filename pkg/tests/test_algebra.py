import json

import numpy as np
import pytest

from solstab import algebra, catalog
from solstab.errors import AlgebraFormatError, MetricError

from conftest import framed, random_orthogonal, random_solvable

H3_TEXT = json.dumps({"name": "h3", "dim": 3, "brackets": [[1, 2, 3, 1.0]]})


def test_parse_h3():
    L = algebra.parse_algebra(H3_TEXT)
    assert L.dim == 3
    assert L.brackets == ((1, 2, 3, 1.0),)
    assert np.array_equal(L.metric, np.eye(3))


def test_parse_abelian_empty_brackets():
    L = algebra.parse_algebra(json.dumps({"dim": 2, "brackets": []}))
    assert L.dim == 2
    assert L.brackets == ()
    assert np.max(np.abs(L.bracket_tensor)) == 0.0


def test_parse_index_out_of_range():
    doc = json.dumps({"dim": 3, "brackets": [[1, 2, 5, 1.0]]})
    with pytest.raises(AlgebraFormatError, match="index out of range"):
        algebra.parse_algebra(doc)


def test_parse_duplicate_entry():
    doc = json.dumps({"dim": 3, "brackets": [[1, 2, 3, 1.0], [1, 2, 3, 2.0]]})
    with pytest.raises(AlgebraFormatError, match="duplicate"):
        algebra.parse_algebra(doc)


def test_parse_requires_i_less_than_j():
    doc = json.dumps({"dim": 3, "brackets": [[2, 1, 3, 1.0]]})
    with pytest.raises(AlgebraFormatError, match="i < j"):
        algebra.parse_algebra(doc)


def test_parse_malformed_json():
    with pytest.raises(AlgebraFormatError, match="malformed"):
        algebra.parse_algebra("{not json")


def test_parse_rejects_bad_metric():
    doc = {"dim": 2, "brackets": [], "metric": [[1.0, 2.0], [2.0, 1.0]]}
    with pytest.raises(MetricError):
        algebra.parse_algebra(json.dumps(doc))
    doc["metric"] = [[1.0, 0.5], [0.0, 1.0]]
    with pytest.raises(MetricError):
        algebra.parse_algebra(json.dumps(doc))


def test_validate_h3_and_su2():
    for name in ("heisenberg3", "su2"):
        diag = algebra.validate_algebra(catalog.load(name))
        assert diag.ok
        assert diag.jacobi_residual == 0.0


def test_validate_broken_jacobi():
    # [e1,e3] mapped onto e1 makes the cyclic Jacobi sum for (1,2,3) nonzero
    doc = json.dumps(
        {"dim": 3, "brackets": [[1, 2, 3, 1.0], [1, 3, 1, 1.0], [2, 3, 1, 1.0]]}
    )
    diag = algebra.validate_algebra(algebra.parse_algebra(doc))
    assert not diag.ok
    assert diag.jacobi_residual > 0.1


def test_validate_catalog():
    for name in catalog.catalog_names():
        assert algebra.validate_algebra(catalog.load(name)).ok, name


def test_orthonormal_frame_identity_metric_bitwise():
    L = catalog.load("heisenberg3")
    F = algebra.orthonormal_frame(L)
    assert np.array_equal(F.c, L.structure_tensor)
    assert np.array_equal(F.c, algebra.orthonormal_frame(L).c)


def test_orthonormal_frame_abelian_scaled_metric():
    doc = {"dim": 3, "brackets": [], "metric": [[4, 0, 0], [0, 1, 0], [0, 0, 1]]}
    F = algebra.orthonormal_frame(algebra.parse_algebra(json.dumps(doc)))
    assert np.max(np.abs(F.c)) == 0.0


@pytest.mark.parametrize("t", [0.25, 2.0, 9.0])
def test_orthonormal_frame_h3_diagonal_metric(t):
    # e1 -> sqrt(t) * new_e1 rescales the single structure constant by t^(-1/2)
    doc = {
        "name": "h3t",
        "dim": 3,
        "brackets": [[1, 2, 3, 1.0]],
        "metric": [[t, 0, 0], [0, 1, 0], [0, 0, 1]],
    }
    F = algebra.orthonormal_frame(algebra.parse_algebra(json.dumps(doc)))
    assert F.c[0, 1, 2] == pytest.approx(t ** -0.5, abs=1e-14)
    assert algebra.jacobi_residual(F.c) <= 1e-10


def test_orthonormal_frame_preserves_jacobi(rng):
    # bracket entries are metric-relative (<[e_i,e_j], e_k> w.r.t. G), so the
    # entries for the same underlying algebra must have the index lowered by G
    for n in (3, 4, 5):
        L = random_solvable(rng, n)
        G = rng.standard_normal((n, n))
        G = G @ G.T + n * np.eye(n)
        c = np.einsum("ijm,mk->ijk", L.bracket_tensor, G)
        entries = tuple(
            (i + 1, j + 1, k + 1, float(c[i, j, k]))
            for i in range(n)
            for j in range(i + 1, n)
            for k in range(n)
            if c[i, j, k] != 0.0
        )
        L = algebra.MetricLieAlgebra(L.name, n, entries, G)
        assert algebra.jacobi_residual(L.bracket_tensor) <= 1e-12
        F = algebra.orthonormal_frame(L)
        assert algebra.jacobi_residual(F.c) <= 1e-10


def test_derivation_basis_abelian_r2():
    L = algebra.parse_algebra(json.dumps({"dim": 2, "brackets": []}))
    basis = algebra.derivation_basis(L)
    assert len(basis) == 4


def test_derivation_basis_h3():
    L = catalog.load("heisenberg3")
    basis = algebra.derivation_basis(L)
    assert len(basis) == 6
    # diag(1,1,2) must lie in the span
    target = np.diag([1.0, 1.0, 2.0]).ravel()
    A = np.column_stack([d.ravel() for d in basis])
    coef, *_ = np.linalg.lstsq(A, target, rcond=None)
    assert np.max(np.abs(A @ coef - target)) <= 1e-10
    for D in basis:
        assert algebra.derivation_residual(L, D) <= 1e-10


def test_derivation_basis_su2():
    L = catalog.load("su2")
    basis = algebra.derivation_basis(L)
    assert len(basis) == 3  # semisimple: inner derivations only
    for D in basis:
        assert algebra.derivation_residual(L, D) <= 1e-10


def test_derivation_space_closed_under_commutator():
    for name in ("heisenberg3", "heisenberg5", "su2", "solv4"):
        L = catalog.load(name)
        basis = algebra.derivation_basis(L)
        if not basis:
            continue
        A = np.column_stack([d.ravel() for d in basis])
        for i in range(len(basis)):
            for j in range(i + 1, len(basis)):
                comm = (basis[i] @ basis[j] - basis[j] @ basis[i]).ravel()
                coef, *_ = np.linalg.lstsq(A, comm, rcond=None)
                assert np.max(np.abs(A @ coef - comm)) <= 1e-8, name


def test_structure_profile_h3():
    p = algebra.structure_profile(catalog.load("heisenberg3"))
    assert p.step == 2
    assert p.nilpotent and p.unimodular
    assert np.max(np.abs(p.mean_curvature)) <= 1e-12
    assert np.max(np.abs(p.killing)) <= 1e-12


def test_structure_profile_abelian():
    p = algebra.structure_profile(catalog.load("abelian4"))
    assert p.step == 1
    assert p.nilpotent and p.unimodular


def test_structure_profile_su2_not_nilpotent():
    p = algebra.structure_profile(catalog.load("su2"))
    assert p.step == 0
    assert not p.nilpotent
    assert p.unimodular


def test_structure_profile_solv4():
    # rank-one extension of h3: solvable, not nilpotent, not unimodular
    p = algebra.structure_profile(catalog.load("solv4"))
    assert p.step == 0
    assert not p.nilpotent
    assert not p.unimodular
    # H points along the extension direction A = e4 with <H, A> = tr(ad A) = 2
    assert p.mean_curvature[3] == pytest.approx(2.0, abs=1e-12)
    assert np.max(np.abs(p.mean_curvature[:3])) <= 1e-12


def test_nilpotent_profiles_have_zero_H_and_B():
    for name in ("abelian2", "abelian3", "abelian4", "heisenberg3", "heisenberg5"):
        p = algebra.structure_profile(catalog.load(name))
        assert p.nilpotent
        assert np.max(np.abs(p.mean_curvature)) <= 1e-12, name
        assert np.max(np.abs(p.killing)) <= 1e-12, name


def test_step_invariant_under_orthogonal_basis_change(rng):
    from conftest import conjugate_framed

    for name in ("heisenberg3", "heisenberg5", "su2", "solv4"):
        F = framed(name)
        expected = algebra.structure_profile(F).step
        Q = random_orthogonal(rng, F.dim)
        assert algebra.structure_profile(conjugate_framed(F, Q)).step == expected


def test_worst_jacobi_triple_names_violation():
    doc = json.dumps(
        {"dim": 3, "brackets": [[1, 2, 3, 1.0], [1, 3, 1, 1.0], [2, 3, 1, 1.0]]}
    )
    L = algebra.parse_algebra(doc)
    i, j, k, res = algebra.worst_jacobi_triple(L.bracket_tensor)
    assert (i, j, k) == (1, 2, 3)
    assert res > 0.1
