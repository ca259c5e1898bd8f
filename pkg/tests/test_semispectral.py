"""Spectral measures of normal matrices and the stability trichotomy."""

import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from powerseq import powerdyn, semispectral, shiftlab
from powerseq.errors import ConstraintError, DimensionMismatchError

from conftest import random_unitary

DEFECT_TOL = 1e-10
MOMENT_TOL = 1e-8


def random_normal(rng, n, eigenvalues=None):
    """Unitary conjugation of a diagonal: the generic normal matrix."""
    if eigenvalues is None:
        radii = rng.uniform(0.0, 1.5, size=n)
        angles = rng.uniform(0.0, 2.0 * math.pi, size=n)
        eigenvalues = radii * np.exp(1j * angles)
    u = random_unitary(rng, n)
    return u @ np.diag(np.asarray(eigenvalues, dtype=complex)) @ u.conj().T


def test_spectral_atoms_reconstruct_the_matrix(rng):
    for _ in range(10):
        a = random_normal(rng, 5)
        data = semispectral.spectral_measure_of_normal(a)
        d = data.defects()
        assert d["idempotency"] <= DEFECT_TOL
        assert d["self_adjointness"] <= DEFECT_TOL
        assert d["mutual_orthogonality"] <= DEFECT_TOL
        assert d["completeness"] <= DEFECT_TOL
        assert d["reconstruction"] <= DEFECT_TOL


def test_repeated_eigenvalues_merge_into_one_atom(rng):
    a = random_normal(rng, 4, eigenvalues=[1.0, 1.0, 0.5, -0.25])
    data = semispectral.spectral_measure_of_normal(a)
    assert len(data.atoms) == 3
    ranks = {round(z.real, 6) + 1j * round(z.imag, 6): int(round(p.trace().real))
             for z, p in data.atoms}
    assert ranks[1 + 0j] == 2
    assert ranks[0.5 + 0j] == 1


def test_atoms_sorted_by_modulus_then_angle(rng):
    a = random_normal(rng, 3, eigenvalues=[0.3, 1.0, 0.9j])
    data = semispectral.spectral_measure_of_normal(a)
    moduli = [abs(z) for z, _ in data.atoms]
    assert moduli == sorted(moduli, reverse=True)


def test_non_normal_matrix_is_rejected():
    with pytest.raises(ConstraintError):
        semispectral.spectral_measure_of_normal(np.array([[1.0, 1.0], [0.0, 1.0]]))


def test_circle_atoms_and_mass(rng):
    a = random_normal(rng, 4, eigenvalues=[1.0, -1.0, 0.5, 0.1j])
    data = semispectral.spectral_measure_of_normal(a)
    assert len(data.circle_atoms()) == 2
    assert len(data.disk_atoms()) == 2
    assert data.circle_mass() == pytest.approx(2.0, abs=1e-9)
    p = data.circle_projection()
    assert np.linalg.norm(p @ p - p, 2) <= DEFECT_TOL


def test_moment_identity_residuals_small(rng):
    a = random_normal(rng, 5)
    data = semispectral.spectral_measure_of_normal(a)
    for m_pow in range(7):
        for n_pow in range(7):
            assert semispectral.moment_identity_residual(a, data, m_pow, n_pow) <= MOMENT_TOL


def test_moment_identity_rejects_foreign_data(rng):
    data = semispectral.spectral_measure_of_normal(random_normal(rng, 3))
    with pytest.raises(DimensionMismatchError):
        semispectral.moment_identity_residual(np.eye(4), data, 1, 1)


def test_spectral_json_lists_values_and_ranks(rng):
    a = random_normal(rng, 3, eigenvalues=[1.0, 0.5, 0.5])
    payload = semispectral.spectral_measure_of_normal(a).to_json()
    values = np.array([atom["value"] for atom in payload["atoms"]])
    assert np.allclose(values, [[1.0, 0.0], [0.5, 0.0]], atol=1e-9)
    assert [atom["rank"] for atom in payload["atoms"]] == [1, 2]


# ---------------------------------------------------------------------------
# stability trichotomy
# ---------------------------------------------------------------------------

def test_strict_contraction_is_uniformly_stable(rng):
    a = random_normal(rng, 4, eigenvalues=[0.9, -0.5, 0.3j, 0.0])
    verdict = semispectral.stability_verdict(a)
    assert verdict.weak and verdict.strong and verdict.uniform
    assert verdict.circle_mass == 0.0
    assert verdict.operator_norm == pytest.approx(0.9, abs=1e-9)


def test_unimodular_atom_kills_all_three_flags(rng):
    a = random_normal(rng, 3, eigenvalues=[1j, 0.5, 0.25])
    verdict = semispectral.stability_verdict(a)
    assert not (verdict.weak or verdict.strong or verdict.uniform)
    assert "Rajchman" in verdict.weak_reason
    assert verdict.circle_mass == pytest.approx(1.0, abs=1e-9)


def test_expanding_matrix_reported_with_outside_eigenvalues():
    verdict = semispectral.stability_verdict(np.diag([1.5, 0.5]))
    assert not verdict.weak
    assert "outside" in verdict.weak_reason
    assert verdict.spectral_radius == pytest.approx(1.5)


def test_verdict_json_shape(rng):
    payload = semispectral.stability_verdict(np.diag([0.5, 0.25])).to_json()
    assert payload["uniform"]["flag"] is True
    assert set(payload["norms"]) == {"operator_norm", "spectral_radius", "circle_mass"}


def test_split_isolates_the_unitary_part(rng):
    a = random_normal(rng, 4, eigenvalues=[1.0, -1j, 0.5, 0.25])
    u_block, s_block, basis = semispectral.normal_stability_split(a)
    assert u_block.shape == (2, 2)
    assert s_block.shape == (2, 2)
    # U is unitary, S is a strict contraction, and the basis block-diagonalizes
    assert np.linalg.norm(u_block @ u_block.conj().T - np.eye(2), 2) <= 1e-9
    assert np.linalg.norm(s_block, 2) <= 0.5 + 1e-9
    recon = basis.conj().T @ a @ basis
    assert np.linalg.norm(recon[:2, 2:], 2) <= 1e-9
    assert np.linalg.norm(recon[2:, :2], 2) <= 1e-9
    assert np.allclose(recon[:2, :2], u_block)
    assert np.allclose(recon[2:, 2:], s_block)


def test_split_with_no_circle_mass_is_all_contraction(rng):
    u_block, s_block, basis = semispectral.normal_stability_split(np.diag([0.5, 0.1]))
    assert u_block.shape == (0, 0)
    assert s_block.shape == (2, 2)
    assert np.linalg.norm(basis @ basis.conj().T - np.eye(2), 2) <= 1e-12


def test_split_refuses_expanding_matrices():
    with pytest.raises(ConstraintError):
        semispectral.normal_stability_split(np.diag([2.0, 0.5]))


def test_disk_moments_decay_geometrically():
    data = semispectral.spectral_measure_of_normal(np.diag([0.5, 0.25]))
    for n in range(8):
        op = semispectral.disk_moment_operator(data, n)
        assert np.linalg.norm(op, 2) == pytest.approx(0.5 ** n, rel=1e-12)
    with pytest.raises(ConstraintError):
        semispectral.disk_moment_operator(data, -1)


def test_disk_moments_refuse_circle_atoms():
    data = semispectral.spectral_measure_of_normal(np.diag([1.0, 0.5]))
    with pytest.raises(ConstraintError):
        semispectral.disk_moment_operator(data, 2)


# ---------------------------------------------------------------------------
# the resolvent series
# ---------------------------------------------------------------------------

def test_series_matches_closed_form(rng):
    a = random_normal(rng, 4, eigenvalues=[0.9, 0.5j, -0.3, 0.1])
    partial, closed, residual = semispectral.uniform_stability_series(a, j_max=400)
    assert residual <= 0.9 ** 802 / (1 - 0.81) + 1e-12
    assert np.linalg.norm(partial - closed, 2) == pytest.approx(residual, abs=1e-15)
    # closed form really inverts I - M*M
    eye = np.eye(4)
    assert np.allclose(closed @ (eye - a.conj().T @ a), eye, atol=1e-10)


def test_series_auto_horizon_hits_tolerance(rng):
    a = random_normal(rng, 3, eigenvalues=[0.8, 0.5, 0.2])
    _, _, residual = semispectral.uniform_stability_series(a, tol=1e-10)
    assert residual <= 1e-10


def test_series_for_zero_matrix_is_identity():
    partial, closed, residual = semispectral.uniform_stability_series(np.zeros((3, 3)))
    assert np.allclose(partial, np.eye(3))
    assert np.allclose(closed, np.eye(3))
    assert residual == 0.0


def test_series_refuses_norm_one():
    with pytest.raises(ConstraintError):
        semispectral.uniform_stability_series(np.diag([1.0, 0.5]))


@settings(max_examples=20, deadline=None)
@given(st.integers(min_value=0, max_value=10 ** 6))
def test_series_three_way_agreement_random(seed):
    rng = np.random.default_rng(seed)
    dim = int(rng.integers(2, 6))
    eigs = rng.uniform(0.05, 0.9, size=dim) * np.exp(2j * math.pi * rng.uniform(size=dim))
    a = random_normal(rng, dim, eigenvalues=eigs)
    # the call itself enforces agreement of partial sum, inverse and the
    # spectral middle form; reaching here without PrecisionError is the test
    _, _, residual = semispectral.uniform_stability_series(a, tol=1e-8)
    assert residual <= 1e-7


# ---------------------------------------------------------------------------
# power limits of normal contractions
# ---------------------------------------------------------------------------

def test_powers_converge_to_eigenprojection_at_one(rng):
    a = random_normal(rng, 4, eigenvalues=[1.0, 1.0, 0.5, -0.25])
    result = semispectral.strong_convergence_criterion(a)
    assert result.converges
    assert "rank-2" in result.reason
    # the limit agrees with a long power
    p512 = np.linalg.matrix_power(a, 512)
    assert np.linalg.norm(p512 - result.limit, 2) <= 1e-9


def test_unimodular_obstruction_is_named(rng):
    a = random_normal(rng, 3, eigenvalues=[-1.0, 1.0, 0.5])
    result = semispectral.strong_convergence_criterion(a)
    assert not result.converges
    assert any(abs(z + 1.0) <= 1e-9 for z in result.obstructions)
    assert result.limit is None


def test_convergence_criterion_rejects_expansions():
    with pytest.raises(ConstraintError):
        semispectral.strong_convergence_criterion(np.diag([1.2]))


@settings(max_examples=20, deadline=None)
@given(st.integers(min_value=0, max_value=10 ** 6), st.booleans())
def test_criterion_agrees_with_power_classifier(seed, pin_one):
    rng = np.random.default_rng(seed)
    dim = int(rng.integers(2, 5))
    eigs = list(rng.uniform(0.1, 0.9, size=dim - 1).astype(complex))
    eigs.append(1.0 + 0j if pin_one else -1.0 + 0j)
    a = random_normal(rng, dim, eigenvalues=eigs)
    result = semispectral.strong_convergence_criterion(a)
    report = powerdyn.classify_power_sequence(a, n_max=2000)
    if result.converges:
        assert report.verdict == "NormConvergent"
        assert np.linalg.norm(report.limit - result.limit, 2) <= 1e-6
    else:
        assert report.verdict == "PowerBoundedNoLimit"


# ---------------------------------------------------------------------------
# moment consequences on shift models
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("lam", [Fraction(11, 10), Fraction(3, 2), 2.0])
def test_two_isometry_gram_identity(lam):
    rule = shiftlab.TwoIsometryRule(lam)
    assert semispectral.two_isometry_gram_check(rule, n_max=100) <= 1e-10
