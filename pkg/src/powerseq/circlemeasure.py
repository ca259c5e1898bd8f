"""Positive measures on the unit circle and the decay of their Fourier coefficients.

A measure is a sum of three structured parts — finitely many atoms, a
trigonometric-polynomial density against normalized arc length, and
self-similar components generated by digit maps x -> (x + d)/b — each of which
admits closed-form Fourier coefficients

    mu_hat(k) = integral of z^k dmu(z).

Angles live in *turns* (fractions of a full revolution), so rational angles
stay exact under multiplication by k.  Self-similar coefficients come with a
certified truncation error, and the b-fold invariance mu_hat(b*k) = mu_hat(k)
is used exactly (powers of b are stripped from k before any truncation).

The decay question answered here: does mu_hat(k) -> 0 as |k| -> infinity?
Measures with that property have no atoms; a pure polynomial density has
finitely many nonzero coefficients; a self-similar part with some nonzero
coefficient off the b-grid fails along the explicit subsequence k0 * b^j.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import ConstraintError

__all__ = [
    "Atom",
    "TrigDensity",
    "SelfSimilar",
    "CircleMeasure",
    "FourierValue",
    "fourier_coefficient",
    "fourier",
    "RajchmanVerdict",
    "rajchman_test",
    "UnitaryComponent",
    "UnitaryModel",
    "UnitaryVerdict",
    "unitary_power_verdict",
    "multiplication_matrix_elements",
    "measure_to_json",
    "measure_from_json",
]

#: characters of exactly representable quarter-turn angles
_EXACT_CHARACTERS = {
    Fraction(0): 1 + 0j,
    Fraction(1, 4): 1j,
    Fraction(1, 2): -1 + 0j,
    Fraction(3, 4): -1j,
}

#: relative slack for the density nonnegativity spot check
_DENSITY_GRID = 720
_DENSITY_TOL = 1e-9


def _character(angle, k: int) -> complex:
    """e^(2 pi i k angle), exact for quarter-turn rationals."""
    if isinstance(angle, Fraction):
        t = (k * angle) % 1
        hit = _EXACT_CHARACTERS.get(t)
        if hit is not None:
            return hit
        return cmath.exp(2j * math.pi * float(t))
    return cmath.exp(2j * math.pi * math.fmod(k * float(angle), 1.0))


def _as_angle(value):
    """Normalize an angle in turns to [0, 1), preserving rationality."""
    if isinstance(value, (int, Fraction)) and not isinstance(value, bool):
        return Fraction(value) % 1
    v = math.fmod(float(value), 1.0)
    return v + 1.0 if v < 0 else v


@dataclass(frozen=True)
class Atom:
    """A point mass at ``angle`` turns."""

    angle: Fraction | float
    mass: float

    def __post_init__(self):
        object.__setattr__(self, "angle", _as_angle(self.angle))
        if not (float(self.mass) > 0 and math.isfinite(float(self.mass))):
            raise ConstraintError(f"atom mass must be positive and finite, got {self.mass!r}")


class TrigDensity:
    """Density h(z) = sum c_k z^k against normalized arc length.

    Coefficients are completed Hermitianly (c_{-k} = conj(c_k)); supplying
    both k and -k with inconsistent values is rejected, as is a sampled
    negative value of h on a uniform grid.  The k-th Fourier coefficient of
    h dm is exactly c_{-k}, so it vanishes beyond the polynomial degree.
    """

    def __init__(self, coeffs: dict[int, complex]):
        full: dict[int, complex] = {}
        for k, c in coeffs.items():
            k = int(k)
            c = complex(c)
            for key, val in ((k, c), (-k, c.conjugate())):
                if key in full and abs(full[key] - val) > 1e-12 * max(1.0, abs(val)):
                    raise ConstraintError(f"coefficients at +-{abs(key)} are not conjugate")
                full[key] = val
        c0 = full.get(0, 0j)
        if abs(c0.imag) > 1e-12 * max(1.0, abs(c0)):
            raise ConstraintError(f"constant coefficient must be real, got {c0}")
        full[0] = complex(c0.real, 0.0)
        self.coeffs = {k: v for k, v in sorted(full.items()) if v != 0 or k == 0}
        self.degree = max((abs(k) for k in self.coeffs), default=0)
        lo = min(self.sample_values(_DENSITY_GRID))
        if lo < -_DENSITY_TOL * max(1.0, abs(c0)):
            raise ConstraintError(f"density is negative on the sample grid (min {lo:.3e})")

    def sample_values(self, grid: int) -> list[float]:
        out = []
        for i in range(grid):
            z = cmath.exp(2j * math.pi * i / grid)
            out.append(sum(c * z ** k for k, c in self.coeffs.items()).real)
        return out

    @property
    def mass(self) -> float:
        return self.coeffs[0].real

    def fourier(self, k: int) -> complex:
        return self.coeffs.get(-k, 0j)


@dataclass(frozen=True)
class SelfSimilar:
    """Equal-weight invariant measure of the maps x -> (x + d)/b on the circle.

    mu_hat(k) = mass * prod_{j>=1} W(k / b^j) with
    W(t) = (1/|digits|) * sum_d e^(2 pi i t d).  Since W is 1 at integers,
    mu_hat(b k) = mu_hat(k) exactly.
    """

    b: int
    digits: tuple[int, ...]
    mass: float = 1.0

    def __post_init__(self):
        if not isinstance(self.b, int) or self.b < 3:
            raise ConstraintError(f"base must be an integer >= 3, got {self.b!r}")
        digits = tuple(sorted(int(d) for d in self.digits))
        if len(digits) != len(set(digits)) or len(digits) < 2:
            raise ConstraintError("digits must be at least two distinct integers")
        if digits[0] < 0 or digits[-1] >= self.b:
            raise ConstraintError(f"digits must lie in [0, {self.b - 1}]")
        object.__setattr__(self, "digits", digits)
        if not (float(self.mass) > 0 and math.isfinite(float(self.mass))):
            raise ConstraintError(f"mass must be positive and finite, got {self.mass!r}")

    def _transfer(self, t: float) -> complex:
        return sum(cmath.exp(2j * math.pi * t * d) for d in self.digits) / len(self.digits)

    def strip(self, k: int) -> int:
        """Remove the exact b-fold invariance: mu_hat(k) = mu_hat(strip(k))."""
        while k != 0 and k % self.b == 0:
            k //= self.b
        return k

    def fourier(self, k: int) -> tuple[complex, float]:
        """(value, certified absolute truncation error)."""
        k = self.strip(k)
        if k == 0:
            return (complex(self.mass), 0.0)
        # depth D leaves a tail |prod_{j>D} W - 1| <= 2 * 2 pi |k| / b^D
        target = 2.0 * math.pi * abs(k) / 1e-16
        depth = max(4, math.ceil(math.log(target) / math.log(self.b)))
        value = 1 + 0j
        scale = k
        for _ in range(depth):
            scale /= self.b
            value *= self._transfer(scale)
        tail = 2.0 * 2.0 * math.pi * abs(k) / self.b ** depth
        err = self.mass * (abs(value) * tail + depth * 1e-15)
        return (self.mass * value, err)


class CircleMeasure:
    """A positive circle measure: atoms + polynomial density + self-similar parts."""

    def __init__(self, atoms=(), density: TrigDensity | None = None, self_similar=()):
        merged: dict = {}
        for atom in atoms:
            if not isinstance(atom, Atom):
                atom = Atom(*atom)
            if atom.angle in merged:
                prev = merged[atom.angle]
                merged[atom.angle] = Atom(atom.angle, prev.mass + atom.mass)
            else:
                merged[atom.angle] = atom
        self.atoms = tuple(merged[a] for a in sorted(merged, key=float))
        self.density = density
        self.self_similar = tuple(self_similar)
        for part in self.self_similar:
            if not isinstance(part, SelfSimilar):
                raise ConstraintError(f"self-similar part has wrong type {type(part).__name__}")

    # -- constructors --------------------------------------------------------

    @classmethod
    def lebesgue(cls, mass=1.0) -> "CircleMeasure":
        return cls(density=TrigDensity({0: mass}))

    @classmethod
    def point_mass(cls, angle=0, mass=1.0) -> "CircleMeasure":
        return cls(atoms=(Atom(angle, mass),))

    @classmethod
    def cantor(cls, mass=1.0) -> "CircleMeasure":
        """The middle-thirds measure: base 3, digits {0, 2}."""
        return cls(self_similar=(SelfSimilar(3, (0, 2), mass),))

    # -- basic functionals ----------------------------------------------------

    @property
    def total_mass(self) -> float:
        m = sum(float(a.mass) for a in self.atoms)
        if self.density is not None:
            m += self.density.mass
        m += sum(float(p.mass) for p in self.self_similar)
        return m

    def has_atoms(self) -> bool:
        return bool(self.atoms)

    def is_continuous(self) -> bool:
        return not self.atoms

    def fourier(self, k: int) -> "FourierValue":
        value = 0j
        err = 0.0
        for atom in self.atoms:
            value += atom.mass * _character(atom.angle, k)
        if self.density is not None:
            value += self.density.fourier(k)
        for part in self.self_similar:
            v, e = part.fourier(k)
            value += v
            err += e
        return FourierValue(k, value, err)


@dataclass(frozen=True)
class FourierValue:
    k: int
    value: complex
    error: float

    def __abs__(self):
        return abs(self.value)


def fourier_coefficient(measure: CircleMeasure, k: int) -> FourierValue:
    return measure.fourier(k)


def fourier(measure: CircleMeasure, ks) -> list[FourierValue]:
    return [measure.fourier(int(k)) for k in ks]


# ---------------------------------------------------------------------------
# decay of Fourier coefficients
# ---------------------------------------------------------------------------

@dataclass
class RajchmanVerdict:
    """Outcome of the coefficient-decay test.

    kind is "certified_rajchman" (coefficients provably -> 0),
    "certified_not_rajchman" (an explicit non-decaying witness), or
    "evidence" (a sampled trace only).  ``evidence_positive`` reports whether
    the sampled tail stayed below the tolerance regardless of certification.
    """

    kind: str
    witness: dict | None
    trace: list[tuple[int, float]]
    evidence_positive: bool

    @property
    def is_rajchman_positive(self) -> bool:
        if self.kind == "certified_rajchman":
            return True
        if self.kind == "certified_not_rajchman":
            return False
        return self.evidence_positive


def _decay_trace(measure: CircleMeasure, k_max: int) -> list[tuple[int, float]]:
    ks = sorted(set(range(1, 33)) | {2 ** i for i in range(5, 64) if 2 ** i <= k_max} | {k_max})
    return [(k, abs(measure.fourier(k).value)) for k in ks]


def rajchman_test(measure: CircleMeasure, k_max: int = 4096, tol: float = 1e-9) -> RajchmanVerdict:
    """Decide (or gather evidence on) whether mu_hat(k) -> 0."""
    if k_max < 32:
        raise ConstraintError("k_max must be at least 32")
    trace = _decay_trace(measure, k_max)
    tail = [v for k, v in trace if k > k_max // 8]
    evidence_positive = bool(tail) and max(tail) <= tol

    if measure.atoms:
        atom = max(measure.atoms, key=lambda a: a.mass)
        return RajchmanVerdict(
            kind="certified_not_rajchman",
            witness={"type": "atom", "angle": atom.angle, "mass": float(atom.mass),
                     "reason": "a measure with an atom has non-decaying coefficients "
                               "(its averaged squared coefficients converge to the "
                               "sum of squared atom masses)"},
            trace=trace, evidence_positive=evidence_positive)

    if len(measure.self_similar) == 1:
        part = measure.self_similar[0]
        degree = measure.density.degree if measure.density is not None else 0
        # a nonzero coefficient off the b-grid persists along k0 * b^j
        for k0 in range(1, 3 * part.b + 2):
            if k0 % part.b == 0:
                continue
            v, e = part.fourier(k0)
            if abs(v) > e + max(tol, 1e-7):
                return RajchmanVerdict(
                    kind="certified_not_rajchman",
                    witness={"type": "b_power_subsequence", "k0": k0, "b": part.b,
                             "value": abs(v), "certified_error": e,
                             "reason": f"|mu_hat({k0} * {part.b}^j)| = {abs(v):.6g} for "
                                       f"every j with {k0} * {part.b}^j > {degree}"},
                    trace=trace, evidence_positive=evidence_positive)
        return RajchmanVerdict(kind="evidence", witness=None, trace=trace,
                               evidence_positive=evidence_positive)

    if not measure.self_similar:
        degree = measure.density.degree if measure.density is not None else 0
        return RajchmanVerdict(
            kind="certified_rajchman",
            witness={"type": "finite_support", "degree": degree,
                     "reason": f"polynomial density: mu_hat(k) = 0 for |k| > {degree}"},
            trace=trace, evidence_positive=True)

    # several self-similar parts: their invariance grids differ, sample only
    return RajchmanVerdict(kind="evidence", witness=None, trace=trace,
                           evidence_positive=evidence_positive)


# ---------------------------------------------------------------------------
# unitary operators modeled by spectral measures
# ---------------------------------------------------------------------------

_ROLES = ("a", "sc", "sd")


@dataclass(frozen=True)
class UnitaryComponent:
    """One direct summand: multiplication by z on L^2 of the measure.

    Roles: "a" = absolutely continuous (polynomial density), "sc" = singular
    continuous (atomless, e.g. self-similar), "sd" = discrete (purely atomic).
    """

    measure: CircleMeasure
    role: str

    def __post_init__(self):
        if self.role not in _ROLES:
            raise ConstraintError(f"role must be one of {_ROLES}, got {self.role!r}")
        m = self.measure
        if self.role == "sd":
            if not m.atoms or m.density is not None or m.self_similar:
                raise ConstraintError("an 'sd' component must be purely atomic")
        else:
            if m.atoms:
                raise ConstraintError(f"a {self.role!r} component must have no atoms")
            if self.role == "a" and m.self_similar:
                raise ConstraintError("an 'a' component must be a pure density")
            if self.role == "sc" and m.density is not None:
                raise ConstraintError("an 'sc' component must have no density part")


class UnitaryModel:
    """A unitary given as a direct sum of multiplication operators."""

    def __init__(self, components):
        comps = []
        for comp in components:
            if not isinstance(comp, UnitaryComponent):
                comp = UnitaryComponent(*comp)
            comps.append(comp)
        if not comps:
            raise ConstraintError("a unitary model needs at least one component")
        self.components = tuple(comps)

    @classmethod
    def sd_from_eigenvalues(cls, angle_mass_pairs) -> UnitaryComponent:
        """Discrete component with eigenvalues e^(2 pi i angle) of the given masses."""
        atoms = tuple(Atom(a, m) for a, m in angle_mass_pairs)
        return UnitaryComponent(CircleMeasure(atoms=atoms), "sd")


@dataclass
class UnitaryVerdict:
    """Weak convergence verdict for the powers of a modeled unitary.

    When the powers converge weakly the limit is the orthogonal projection
    onto the eigenspace at 1, i.e. onto the discrete components' mass at
    angle zero; ``limit_masses`` lists that mass per component (0 elsewhere).
    """

    converges_weakly: bool
    certainty: str  # "certified" | "evidence"
    obstruction: str | None
    limit_masses: list[float]
    limit_rank: int
    rajchman_reports: list[tuple[int, RajchmanVerdict]]


def unitary_power_verdict(model: UnitaryModel, k_max: int = 4096,
                          tol: float = 1e-9) -> UnitaryVerdict:
    """Powers of a unitary converge weakly iff every continuous spectral part
    has decaying coefficients and every eigenvalue equals 1."""
    reports: list[tuple[int, RajchmanVerdict]] = []
    certainty = "certified"
    limit_masses = []
    limit_rank = 0
    obstruction = None
    converges = True

    for idx, comp in enumerate(model.components):
        mass_at_zero = 0.0
        if comp.role == "sd":
            for atom in comp.measure.atoms:
                if atom.angle == 0:
                    mass_at_zero += float(atom.mass)
                elif converges:
                    converges = False
                    obstruction = (f"component {idx}: eigenvalue at angle {atom.angle} "
                                   f"(mass {float(atom.mass):.6g}) makes the powers oscillate")
        else:
            verdict = rajchman_test(comp.measure, k_max=k_max, tol=tol)
            reports.append((idx, verdict))
            if verdict.kind == "certified_not_rajchman":
                if converges:
                    converges = False
                    obstruction = (f"component {idx}: coefficients do not decay "
                                   f"({verdict.witness['reason']})")
            elif verdict.kind == "evidence":
                certainty = "evidence"
                if not verdict.evidence_positive and converges:
                    converges = False
                    obstruction = (f"component {idx}: sampled coefficients show no decay")
        limit_masses.append(mass_at_zero)
        if mass_at_zero > 0:
            limit_rank += 1

    if not converges:
        limit_masses = [0.0] * len(model.components)
        limit_rank = 0
    return UnitaryVerdict(converges_weakly=converges, certainty=certainty,
                          obstruction=obstruction, limit_masses=limit_masses,
                          limit_rank=limit_rank, rajchman_reports=reports)


def multiplication_matrix_elements(measure: CircleMeasure, n: int,
                                   f: dict[int, complex], g: dict[int, complex]
                                   ) -> tuple[complex, float]:
    """<M^n f, g> for trigonometric polynomials f, g on L^2 of the measure.

    Returns (value, certified error) with
    value = sum_{p,q} f_p conj(g_q) mu_hat(n + p - q).
    """
    total = 0j
    err = 0.0
    for p, fp in f.items():
        for q, gq in g.items():
            fv = measure.fourier(n + int(p) - int(q))
            w = complex(fp) * complex(gq).conjugate()
            total += w * fv.value
            err += abs(w) * fv.error
    return (total, err)


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def _angle_to_json(angle):
    if isinstance(angle, Fraction):
        return f"{angle.numerator}/{angle.denominator}"
    return float(angle)


def _angle_from_json(v):
    return Fraction(v) if isinstance(v, str) else float(v)


def _complex_to_json(c: complex):
    return float(c.real) if c.imag == 0 else [float(c.real), float(c.imag)]


def _complex_from_json(v) -> complex:
    if isinstance(v, (list, tuple)):
        return complex(v[0], v[1])
    return complex(float(v), 0.0)


def measure_to_json(measure: CircleMeasure) -> dict:
    """Serialize to the shared on-disk shape:

    {"atoms": [[angle, mass], ...],
     "density": {"coeffs": {"1": ...}, "lebesgue": c},
     "selfSimilar": {"b": 3, "digits": [0, 2]}}
    """
    out: dict = {}
    if measure.atoms:
        out["atoms"] = [[_angle_to_json(a.angle), float(a.mass)]
                        for a in measure.atoms]
    if measure.density is not None:
        coeffs = {str(k): _complex_to_json(c)
                  for k, c in measure.density.coeffs.items() if k >= 1}
        constant = measure.density.coeffs.get(0, 0j)
        out["density"] = {"coeffs": coeffs, "lebesgue": float(constant.real)}
    if measure.self_similar:
        parts = [{"b": p.b, "digits": list(p.digits), "mass": float(p.mass)}
                 for p in measure.self_similar]
        out["selfSimilar"] = parts[0] if len(parts) == 1 else parts
    return out


def _density_from_json(data) -> TrigDensity:
    if "coeffs" in data or "lebesgue" in data:
        coeffs = {int(k): _complex_from_json(v)
                  for k, v in data.get("coeffs", {}).items()}
        coeffs[0] = coeffs.get(0, 0j) + complex(data.get("lebesgue", 0.0))
    else:  # flat {k: coefficient} form
        coeffs = {int(k): _complex_from_json(v) for k, v in data.items()}
    return TrigDensity(coeffs)


def measure_from_json(data: dict) -> CircleMeasure:
    atoms = []
    for a in data.get("atoms", ()):
        if isinstance(a, dict):
            atoms.append(Atom(_angle_from_json(a["angle"]), a["mass"]))
        else:
            atoms.append(Atom(_angle_from_json(a[0]), a[1]))
    density = _density_from_json(data["density"]) if "density" in data else None
    raw_parts = data.get("selfSimilar", data.get("self_similar", ()))
    if isinstance(raw_parts, dict):
        raw_parts = [raw_parts]
    parts = tuple(SelfSimilar(int(p["b"]), tuple(p["digits"]), float(p.get("mass", 1.0)))
                  for p in raw_parts)
    return CircleMeasure(atoms=tuple(atoms), density=density, self_similar=parts)
