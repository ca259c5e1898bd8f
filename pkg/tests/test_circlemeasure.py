"""Circle measures: Fourier coefficients, decay verdicts, unitary models."""

import cmath
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from powerseq import circlemeasure as cm
from powerseq.errors import ConstraintError


def mixed_measure():
    return cm.CircleMeasure(
        atoms=(cm.Atom(Fraction(1, 3), 0.5), cm.Atom(0.1234, 0.25)),
        density=cm.TrigDensity({0: 1.0, 2: 0.25 - 0.1j}),
        self_similar=(cm.SelfSimilar(3, (0, 2), mass=0.75),),
    )


@settings(max_examples=60, deadline=None)
@given(k=st.integers(min_value=-500, max_value=500))
def test_fourier_conjugate_symmetry(k):
    mu = mixed_measure()
    a, b = mu.fourier(k).value, mu.fourier(-k).value
    assert a == pytest.approx(b.conjugate(), abs=1e-12)


def test_lebesgue_coefficients_exactly_zero():
    mu = cm.CircleMeasure.lebesgue()
    assert mu.fourier(0).value == 1.0
    for k in (1, 2, 3, 5, 10, 100, 1000):
        v = mu.fourier(k)
        assert v.value == 0j
        assert v.error == 0.0


def test_point_mass_characters_are_exact():
    mu = cm.CircleMeasure.point_mass(Fraction(1, 4))
    # quarter-turn characters hit the exact lattice points
    assert [mu.fourier(k).value for k in range(5)] == [1, 1j, -1, -1j, 1]


def test_density_moments_vanish_beyond_degree():
    mu = cm.CircleMeasure(density=cm.TrigDensity({0: 1.0, 1: 0.5}))
    assert mu.fourier(1).value == 0.5  # c_{-1} = conj(c_1)
    assert mu.fourier(-1).value == 0.5
    assert mu.fourier(2).value == 0j


def test_density_rejects_negative_sampled_values():
    with pytest.raises(ConstraintError):
        cm.TrigDensity({0: 1.0, 1: 0.8})  # 1 + 1.6 cos is negative somewhere


def test_density_rejects_inconsistent_conjugates():
    with pytest.raises(ConstraintError):
        cm.TrigDensity({1: 0.5j, -1: 0.5j})


def test_cantor_invariance_under_base_powers():
    mu = cm.CircleMeasure.cantor()
    base = abs(mu.fourier(1).value)
    assert base > 0.2
    for m in range(13):
        assert abs(mu.fourier(3 ** m).value) == pytest.approx(base, abs=1e-10)


def test_self_similar_truncation_error_is_honest():
    part = cm.SelfSimilar(3, (0, 2))
    v, err = part.fourier(7)
    # refine by hand with much deeper products and compare
    deep = 1 + 0j
    scale = 7.0
    for _ in range(200):
        scale /= 3.0
        deep *= part._transfer(scale)
    assert abs(v - deep) <= err + 1e-14


def test_self_similar_strip_removes_base_factors():
    part = cm.SelfSimilar(5, (0, 1, 4))
    assert part.strip(125) == 1
    assert part.strip(50) == 2
    assert part.strip(7) == 7


# ---------------------------------------------------------------------------
# decay verdicts
# ---------------------------------------------------------------------------

def test_atom_measures_are_certified_not_rajchman():
    mu = cm.CircleMeasure(atoms=(cm.Atom(Fraction(1, 4), 1.0),))
    verdict = cm.rajchman_test(mu)
    assert verdict.kind == "certified_not_rajchman"
    assert verdict.witness["type"] == "atom"
    assert not verdict.is_rajchman_positive


def test_polynomial_density_certified_rajchman():
    mu = cm.CircleMeasure(density=cm.TrigDensity({0: 2.0, 1: 0.5}))
    verdict = cm.rajchman_test(mu)
    assert verdict.kind == "certified_rajchman"
    assert verdict.is_rajchman_positive


def test_cantor_certified_not_rajchman_with_subsequence_witness():
    verdict = cm.rajchman_test(cm.CircleMeasure.cantor())
    assert verdict.kind == "certified_not_rajchman"
    w = verdict.witness
    assert w["type"] == "b_power_subsequence"
    assert w["value"] > 0.2
    assert w["k0"] % 3 != 0


def test_wiener_style_average_tends_to_squared_atom_masses():
    # surrogate for the averaged-coefficient limit: for a pure point mass
    # at a rational angle, (1/K) sum_{k<K} |mu_hat(k)|^2 -> sum of squared masses
    mu = cm.CircleMeasure(atoms=(cm.Atom(Fraction(1, 3), 0.5),))
    for big_k in (300, 3000):
        avg = sum(abs(mu.fourier(k).value) ** 2 for k in range(big_k)) / big_k
        assert avg == pytest.approx(0.25, abs=1e-12)  # multiples of 3 keep |mu_hat| = 1/2


def test_decay_trace_contains_requested_endpoint():
    verdict = cm.rajchman_test(cm.CircleMeasure.lebesgue(), k_max=2048)
    assert verdict.trace[-1][0] == 2048
    assert all(v == 0.0 for k, v in verdict.trace)


# ---------------------------------------------------------------------------
# unitary models
# ---------------------------------------------------------------------------

def test_component_role_validation():
    with pytest.raises(ConstraintError):
        cm.UnitaryComponent(cm.CircleMeasure.lebesgue(), "sd")
    with pytest.raises(ConstraintError):
        cm.UnitaryComponent(cm.CircleMeasure(atoms=(cm.Atom(0, 1.0),)), "a")
    with pytest.raises(ConstraintError):
        cm.UnitaryComponent(cm.CircleMeasure.cantor(), "a")


def test_lebesgue_unitary_is_weakly_stable():
    model = cm.UnitaryModel([(cm.CircleMeasure.lebesgue(), "a")])
    verdict = cm.unitary_power_verdict(model)
    assert verdict.converges_weakly
    assert verdict.certainty == "certified"
    assert verdict.limit_rank == 0


def test_eigenvalue_at_one_contributes_projection_mass():
    sd = cm.UnitaryModel.sd_from_eigenvalues([(0, 2.0)])
    model = cm.UnitaryModel([(cm.CircleMeasure.lebesgue(), "a"), sd])
    verdict = cm.unitary_power_verdict(model)
    assert verdict.converges_weakly
    assert verdict.limit_masses == [0.0, 2.0]
    assert verdict.limit_rank == 1


def test_offzero_eigenvalue_blocks_convergence():
    sd = cm.UnitaryModel.sd_from_eigenvalues([(Fraction(1, 2), 1.0)])
    verdict = cm.unitary_power_verdict(cm.UnitaryModel([sd]))
    assert not verdict.converges_weakly
    assert "angle 1/2" in verdict.obstruction
    assert verdict.limit_rank == 0


def test_cantor_component_blocks_convergence_with_certificate():
    model = cm.UnitaryModel([(cm.CircleMeasure.cantor(), "sc")])
    verdict = cm.unitary_power_verdict(model)
    assert not verdict.converges_weakly
    assert verdict.certainty == "certified"


def test_matrix_elements_of_multiplication_powers():
    # <M^n f, g> in L^2(mu) is a plain Fourier pairing
    mu = cm.CircleMeasure.lebesgue()
    v, err = cm.multiplication_matrix_elements(mu, 3, {0: 1.0}, {3: 1.0})
    assert v == pytest.approx(1.0, abs=1e-15)
    assert err == 0.0
    v, _ = cm.multiplication_matrix_elements(mu, 2, {0: 1.0}, {3: 1.0})
    assert v == 0j


def test_matrix_elements_respect_measure_weights():
    mu = cm.CircleMeasure(atoms=(cm.Atom(0, 2.0),))
    v, _ = cm.multiplication_matrix_elements(mu, 5, {0: 1.0}, {0: 1.0})
    assert v == pytest.approx(2.0)  # the single mass point z = 1 is fixed


# ---------------------------------------------------------------------------
# wire format
# ---------------------------------------------------------------------------

def test_measure_json_round_trip_mixed():
    mu = mixed_measure()
    back = cm.measure_from_json(cm.measure_to_json(mu))
    for k in (-7, 0, 1, 9, 27):
        assert back.fourier(k).value == pytest.approx(mu.fourier(k).value, abs=1e-12)
    assert back.total_mass == pytest.approx(mu.total_mass, abs=1e-12)


def test_measure_json_shape():
    data = cm.measure_to_json(mixed_measure())
    assert set(data) == {"atoms", "density", "selfSimilar"}
    assert data["density"]["lebesgue"] == 1.0
    assert list(data["density"]["coeffs"]) == ["2"]
    assert data["selfSimilar"]["b"] == 3
    assert sorted(mass for _, mass in data["atoms"]) == [0.25, 0.5]


def test_measure_json_accepts_spec_style_payload():
    mu = cm.measure_from_json({
        "atoms": [[0.25, 0.5]],
        "density": {"coeffs": {"1": [0.1, 0.0]}, "lebesgue": 0.5},
        "selfSimilar": {"b": 3, "digits": [0, 2]},
    })
    assert len(mu.atoms) == 1
    assert mu.density.mass == 0.5
    assert mu.self_similar[0].digits == (0, 2)


def test_rational_angles_survive_round_trip():
    mu = cm.CircleMeasure(atoms=(cm.Atom(Fraction(2, 7), 1.0),))
    back = cm.measure_from_json(cm.measure_to_json(mu))
    assert back.atoms[0].angle == Fraction(2, 7)
