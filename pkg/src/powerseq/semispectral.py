"""Spectral measures of finite normal matrices and the stability criteria
they decide.

A normal matrix M diagonalizes unitarily, so its semispectral measure is the
genuine projection-valued measure F = sum of delta_z * P_z over eigenvalue
clusters.  That makes every criterion here checkable by finite linear
algebra: the moment identity M*^n M^m = sum z^m conj(z)^n P_z, the stability
trichotomy (weak/strong need ||M|| <= 1 and no mass on the unit circle,
uniform needs ||M|| < 1), the unitary-plus-strict-contraction split, the
resolvent series sum M*^j M^j = (I - M*M)^{-1}, and the power-limit
description (powers converge iff every unimodular eigenvalue is 1, with limit
the eigenprojection at 1).

Subnormal shift models never materialize a spectral measure here; they are
exercised through moment and norm consequences only (see the Berger-moment
helpers in shiftlab and the 2-isometry cross-check at the bottom).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from . import opcore, shiftlab
from .errors import ConstraintError, DimensionMismatchError, PrecisionError

__all__ = [
    "SpectralData",
    "spectral_measure_of_normal",
    "moment_identity_residual",
    "StabilityVerdict",
    "stability_verdict",
    "normal_stability_split",
    "disk_moment_operator",
    "uniform_stability_series",
    "NormalConvergence",
    "strong_convergence_criterion",
    "two_isometry_gram_check",
]

#: | |z| - 1 | at or below this counts as "on the unit circle"
CIRCLE_TOL = 1e-8
#: relative eigenvalue-clustering tolerance for atom formation
CLUSTER_TOL = 1e-8


def _dense(m) -> np.ndarray:
    if isinstance(m, np.ndarray):
        a = np.asarray(m, dtype=complex)
    elif isinstance(m, opcore.OperatorExpr):
        a = m.to_dense()
    else:
        a = opcore.FiniteMatrix(m).array
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatchError(f"expected a square matrix, got shape {a.shape}")
    return a


def _norm(a: np.ndarray) -> float:
    return float(np.linalg.norm(a, 2)) if a.size else 0.0


@dataclass
class SpectralData:
    """Eigenvalue atoms (z, P_z) of a normal matrix, P_z orthogonal."""

    atoms: list
    source: np.ndarray

    @property
    def dimension(self) -> int:
        return self.source.shape[0]

    def circle_atoms(self, tol: float = CIRCLE_TOL) -> list:
        return [(z, p) for z, p in self.atoms if abs(abs(z) - 1.0) <= tol]

    def disk_atoms(self, tol: float = CIRCLE_TOL) -> list:
        return [(z, p) for z, p in self.atoms if abs(z) < 1.0 - tol]

    def circle_projection(self, tol: float = CIRCLE_TOL) -> np.ndarray:
        out = np.zeros_like(self.source)
        for _, p in self.circle_atoms(tol):
            out += p
        return out

    def circle_mass(self, tol: float = CIRCLE_TOL) -> float:
        """Trace of F(unit circle): the dimension carrying unimodular spectrum."""
        return float(self.circle_projection(tol).trace().real)

    def moment(self, m: int, n: int) -> np.ndarray:
        """The integral of z^m conj(z)^n against the measure."""
        out = np.zeros_like(self.source)
        for z, p in self.atoms:
            out += (z ** m) * (np.conj(z) ** n) * p
        return out

    def defects(self) -> dict:
        """Structural defect norms; all should sit at rounding level."""
        eye = np.eye(self.dimension, dtype=complex)
        idem = max(_norm(p @ p - p) for _, p in self.atoms)
        sa = max(_norm(p - p.conj().T) for _, p in self.atoms)
        ortho = 0.0
        for i, (_, p) in enumerate(self.atoms):
            for _, q in self.atoms[i + 1:]:
                ortho = max(ortho, _norm(p @ q))
        total = sum(p for _, p in self.atoms)
        recon = sum(z * p for z, p in self.atoms)
        return {
            "idempotency": idem,
            "self_adjointness": sa,
            "mutual_orthogonality": ortho,
            "completeness": _norm(total - eye),
            "reconstruction": _norm(recon - self.source),
        }

    def to_json(self) -> dict:
        return {
            "atoms": [{"value": [float(z.real), float(z.imag)],
                       "rank": int(round(p.trace().real)),
                       "projection": [[[float(v.real), float(v.imag)] for v in row]
                                      for row in p.tolist()]}
                      for z, p in self.atoms],
        }


def spectral_measure_of_normal(m, tol: float = 1e-8) -> SpectralData:
    """Cluster the unitary diagonalization of a normal matrix into atoms."""
    a = _dense(m)
    defect = _norm(a @ a.conj().T - a.conj().T @ a)
    if defect > tol:
        raise ConstraintError(
            f"matrix is not normal within {tol:.1e} (commutator norm {defect:.3e})")
    t, q = scipy.linalg.schur(a, output="complex")
    eigs = np.diag(t)
    scale = max(1.0, float(np.abs(eigs).max(initial=0.0)))
    clusters: list[list[int]] = []
    reps: list[complex] = []
    for i, z in enumerate(eigs):
        for c, rep in enumerate(reps):
            if abs(z - rep) <= CLUSTER_TOL * scale:
                clusters[c].append(i)
                break
        else:
            clusters.append([i])
            reps.append(complex(z))
    atoms = []
    for idx in clusters:
        vecs = q[:, idx]
        proj = vecs @ vecs.conj().T
        value = complex(np.mean(eigs[idx]))
        atoms.append((value, proj))
    atoms.sort(key=lambda zp: (-abs(zp[0]), math.atan2(zp[0].imag, zp[0].real)))
    return SpectralData(atoms=atoms, source=a)


def moment_identity_residual(m, data: SpectralData, m_pow: int, n_pow: int) -> float:
    """|| M*^n M^m  -  integral of z^m conj(z)^n dF ||."""
    a = _dense(m)
    if a.shape != data.source.shape:
        raise DimensionMismatchError("spectral data belongs to a different matrix")
    lhs = (np.linalg.matrix_power(a.conj().T, n_pow)
           @ np.linalg.matrix_power(a, m_pow))
    return _norm(lhs - data.moment(m_pow, n_pow))


@dataclass(frozen=True)
class StabilityVerdict:
    """Weak/strong/uniform stability flags with eigenvalue-level reasons."""

    weak: bool
    weak_reason: str
    strong: bool
    strong_reason: str
    uniform: bool
    uniform_reason: str
    operator_norm: float
    spectral_radius: float
    circle_mass: float

    def to_json(self) -> dict:
        return {
            "weak": {"flag": self.weak, "reason": self.weak_reason},
            "strong": {"flag": self.strong, "reason": self.strong_reason},
            "uniform": {"flag": self.uniform, "reason": self.uniform_reason},
            "norms": {"operator_norm": self.operator_norm,
                      "spectral_radius": self.spectral_radius,
                      "circle_mass": self.circle_mass},
        }


def _format_eigs(eigs) -> str:
    return ", ".join(f"{z:.6g}" for z in eigs[:4]) + ("..." if len(eigs) > 4 else "")


def stability_verdict(m, tol: float = 1e-8) -> StabilityVerdict:
    """Decide weak/strong/uniform stability of a normal matrix.

    For finite normal matrices the scalar measures <F(.)x, x> are purely
    atomic, and an atomic measure on the circle is Rajchman only when it is
    zero — so weak and strong stability coincide: ||M|| <= 1 with no
    unimodular eigenvalue.  Uniform stability is the strict contraction case.
    """
    data = spectral_measure_of_normal(m, tol)
    norm = _norm(data.source)
    radius = max(abs(z) for z, _ in data.atoms)
    outside = [z for z, _ in data.atoms if abs(z) > 1.0 + CIRCLE_TOL]
    on = [z for z, _ in data.atoms if abs(abs(z) - 1.0) <= CIRCLE_TOL]
    circle_mass = data.circle_mass()

    if outside:
        reason = f"eigenvalues outside the closed disk: {_format_eigs(outside)}"
        weak = strong = uniform = False
        weak_reason = strong_reason = uniform_reason = reason
    elif on:
        reason = (f"mass on the unit circle at: {_format_eigs(on)} "
                  f"(circle mass {circle_mass:.0f})")
        weak = strong = uniform = False
        weak_reason = reason + "; an atomic circle measure is Rajchman only if zero"
        strong_reason = reason
        uniform_reason = reason
    else:
        weak = strong = uniform = True
        reason = (f"all eigenvalue moduli at most {radius:.6g} < 1; "
                  "circle mass is zero")
        weak_reason = strong_reason = reason
        uniform_reason = f"strict contraction: ||M|| = {norm:.6g} < 1"
    return StabilityVerdict(weak, weak_reason, strong, strong_reason,
                            uniform, uniform_reason, norm, radius, circle_mass)


def normal_stability_split(m, tol: float = 1e-8):
    """(U block, S block, basis): unimodular part plus a strict contraction.

    The basis columns list the unimodular eigenvectors first; U = basis_u* M
    basis_u is unitary, S is a strictly stable normal contraction.  In finite
    dimensions a nonempty U is never weakly stable — its circle atoms are the
    obstruction the split isolates.
    """
    data = spectral_measure_of_normal(m, tol)
    norm = _norm(data.source)
    if norm > 1.0 + tol:
        raise ConstraintError(f"||M|| = {norm:.6g} exceeds 1; no contraction split")
    a = data.source
    p_circle = data.circle_projection()
    u_dim = int(round(p_circle.trace().real))
    if u_dim:
        w, v = np.linalg.eigh(p_circle)
        u_basis = v[:, w > 0.5]
    else:
        u_basis = np.zeros((a.shape[0], 0), dtype=complex)
    w, v = np.linalg.eigh(np.eye(a.shape[0], dtype=complex) - p_circle)
    s_basis = v[:, w > 0.5]
    u_block = u_basis.conj().T @ a @ u_basis
    s_block = s_basis.conj().T @ a @ s_basis
    basis = np.hstack([u_basis, s_basis])
    return u_block, s_block, basis


def disk_moment_operator(data: SpectralData, n: int) -> np.ndarray:
    """sum z^n P_z over atoms strictly inside the disk; norm = max |z|^n."""
    if n < 0:
        raise ConstraintError("moment order must be nonnegative")
    bad = [z for z, _ in data.atoms if abs(z) >= 1.0 - CIRCLE_TOL]
    if bad:
        raise ConstraintError(
            f"atoms on or outside the unit circle: {_format_eigs(bad)}")
    out = np.zeros_like(data.source)
    for z, p in data.atoms:
        out += (z ** n) * p
    return out


def uniform_stability_series(m, j_max: int | None = None, tol: float = 1e-8):
    """(partial sum of M*^j M^j, closed form (I - M*M)^{-1}, residual).

    Also evaluates the spectral middle form sum (1-|z|^2)^{-1} P_z and
    insists on three-way agreement within tol.  When j_max is omitted it is
    chosen so the a-priori geometric tail ||M||^{2(j_max+1)}/(1-||M||^2)
    falls below tol.
    """
    data = spectral_measure_of_normal(m, max(tol, 1e-8))
    a = data.source
    norm = _norm(a)
    if norm >= 1.0:
        raise ConstraintError(f"||M|| = {norm:.6g} is not < 1; series diverges")
    gap = 1.0 - norm * norm
    if j_max is None:
        if norm == 0.0:
            j_max = 1
        else:
            j_max = max(1, math.ceil(math.log(tol * gap) / (2.0 * math.log(norm))))
        j_max = min(j_max, 100_000)
    eye = np.eye(a.shape[0], dtype=complex)
    partial = eye.copy()
    term = eye.copy()
    for _ in range(j_max):
        term = a.conj().T @ term @ a
        partial += term
    closed = np.linalg.inv(eye - a.conj().T @ a)
    middle = np.zeros_like(a)
    for z, p in data.atoms:
        middle += p / (1.0 - abs(z) ** 2)
    residual = _norm(partial - closed)
    apriori = norm ** (2 * (j_max + 1)) / gap
    if residual > apriori + tol:
        raise PrecisionError(
            f"series residual {residual:.3e} exceeds the a-priori bound {apriori:.3e}")
    middle_defect = _norm(middle - closed)
    if middle_defect > tol:
        raise PrecisionError(
            f"spectral middle form disagrees with the closed form by {middle_defect:.3e}")
    return partial, closed, residual


@dataclass(frozen=True)
class NormalConvergence:
    """Power-limit description for a normal contraction."""

    converges: bool
    limit: np.ndarray | None
    obstructions: tuple
    reason: str


def strong_convergence_criterion(m, tol: float = 1e-8) -> NormalConvergence:
    """Powers of a normal contraction converge iff every unimodular
    eigenvalue equals 1; the limit is the eigenprojection at 1."""
    data = spectral_measure_of_normal(m, tol)
    norm = _norm(data.source)
    if norm > 1.0 + CIRCLE_TOL:
        raise ConstraintError(f"||M|| = {norm:.6g} > 1: not a contraction")
    on = data.circle_atoms()
    bad = tuple(z for z, _ in on if abs(z - 1.0) > CIRCLE_TOL)
    if bad:
        return NormalConvergence(
            converges=False, limit=None, obstructions=bad,
            reason=f"unimodular eigenvalues different from 1: {_format_eigs(list(bad))}")
    limit = np.zeros_like(data.source)
    for z, p in on:
        limit += p
    rank = int(round(limit.trace().real))
    return NormalConvergence(
        converges=True, limit=limit, obstructions=(),
        reason=f"every unimodular eigenvalue equals 1; limit is the rank-{rank} "
               "eigenprojection at 1")


def two_isometry_gram_check(rule: shiftlab.TwoIsometryRule, n_max: int = 100,
                            count: int = 12) -> float:
    """Max relative deviation of diag(T*^n T^n) from 1 + n (lam^2 - 1) C_kk.

    C is the covariance-type diagonal extracted from the n = 1 identity
    T*T = I + (lam^2 - 1) C; the n-step prediction follows by telescoping and
    is checked against the directly accumulated weight products.
    """
    c = float(rule.c_exact)
    worst = 0.0
    for k in range(count):
        if c == 0.0:
            c_kk = 1.0
        else:
            c_kk = (rule.weight(k) ** 2 - 1.0) / c
        prod = 1.0
        for n in range(1, n_max + 1):
            prod *= rule.weight(k + n - 1) ** 2
            predicted = 1.0 + n * c * c_kk
            worst = max(worst, abs(prod - predicted) / abs(predicted))
    return worst
