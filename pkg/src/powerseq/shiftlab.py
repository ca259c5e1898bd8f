"""Weight sequences for unilateral weighted shifts and their exact power norms.

A weighted shift maps e_n -> w(n) e_{n+1} for a strictly positive bounded-rule
weight sequence {w(n)}.  Its k-th power norm is the supremum of sliding-window
products,

    ||T^k|| = sup_n w(n) w(n+1) ... w(n+k-1),

which every rule here evaluates structurally (no truncation of the index set).
Products are carried in log-space so that thousands of near-unit factors do
not erode precision multiplicatively; rational rules additionally expose exact
Fraction arithmetic for the squared weights.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .errors import ConstraintError, PrecisionError, StructureError

__all__ = [
    "WeightRule",
    "ExplicitThenConstant",
    "MonotoneToLimit",
    "InflationParams",
    "InflationRule",
    "TwoIsometryRule",
    "BergerRule",
    "PowerNormResult",
    "NormProfile",
    "CoadjointResult",
    "inflation_weights",
    "inflation_norm_profile",
    "shift_power_norm",
    "two_isometry_weights",
    "berger_weights",
    "berger_uniform_moments",
    "berger_point_mass",
    "berger_two_atom",
    "coadjoint_unit_eigenvector",
    "spectral_radius_estimate",
    "weight_rule_to_json",
    "weight_rule_from_json",
]

#: indices used for monotonicity / positivity / Hankel spot checks
_SPOT_SAMPLES = tuple(range(32)) + tuple(2 ** i for i in range(5, 21))


def _check_positive(value, what):
    if isinstance(value, Fraction):
        ok = value > 0
    else:
        v = float(value)
        ok = math.isfinite(v) and v > 0
    if not ok:
        raise ConstraintError(f"{what} must be strictly positive and finite, got {value!r}")
    return value


def _is_rational_scalar(v):
    return isinstance(v, (int, Fraction)) and not isinstance(v, bool)


def _num_to_json(v):
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}"
    if isinstance(v, int):
        return v
    return float(v)


def _num_from_json(v):
    if isinstance(v, str):
        return Fraction(v)
    return v


@dataclass(frozen=True)
class PowerNormResult:
    """One power norm, as the log of the supremum of weight-window products.

    ``attained`` records whether the supremum is attained at a finite window
    start (``attained_at``); ``exact`` is False only for finite-scan lower
    bounds attached to a StructureError.
    """

    log_norm: float
    attained: bool
    attained_at: int | None
    exact: bool = True

    @property
    def norm(self) -> float:
        return math.exp(self.log_norm)


@dataclass
class CoadjointResult:
    """Candidate solution of T* x = x for a weighted shift.

    The candidate is x_n = 1 / (w(0) ... w(n-1)); membership in l^2 is decided
    by per-rule tail certificates.  ``tail_bound`` (present for the ``in_l2``
    verdict) bounds the l^2 mass of all coefficients with index >= cutoff-1,
    which also dominates the fixed-point defect of the truncated vector.
    """

    verdict: str  # "in_l2" | "not_in_l2" | "undetermined"
    coeffs: np.ndarray
    log_coeffs: np.ndarray
    norm_sq_partial: float
    tail_bound: float | None
    lambda_floor: float | None
    certificate: str
    cutoff: int
    #: ||T* x - x|| for the truncated candidate; equals coeffs[cutoff-1]
    #: exactly when the recursion was certified in rational arithmetic
    fixed_point_defect: float | None = None
    exact_certified: bool = False


class WeightRule:
    """Base class for lazily evaluable strictly positive weight sequences."""

    variant = "abstract"

    def weight(self, n: int) -> float:
        raise NotImplementedError

    def log_weight(self, n: int) -> float:
        return math.log(self.weight(n))

    def exact_weight(self, n: int) -> Fraction:
        raise PrecisionError(f"{self.variant} weights are not stored as rationals")

    def exact_squared_weight(self, n: int) -> Fraction:
        w = self.exact_weight(n)
        return w * w

    def is_rational(self) -> bool:
        return False

    def has_rational_squares(self) -> bool:
        return self.is_rational()

    def weights(self, count: int) -> list[float]:
        return [self.weight(n) for n in range(count)]

    def log_window(self, start: int, count: int) -> float:
        return math.fsum(self.log_weight(n) for n in range(start, start + count))

    def window_product(self, start: int, count: int) -> float:
        p = 1.0
        for n in range(start, start + count):
            p *= self.weight(n)
        return p

    def exact_window_product(self, start: int, count: int) -> Fraction:
        p = Fraction(1)
        for n in range(start, start + count):
            p *= self.exact_weight(n)
        return p

    def power_norm(self, k: int) -> PowerNormResult:
        if k == 0:
            raise StructureError(
                f"{self.variant} rule has no supremum structure",
                partial=PowerNormResult(0.0, True, 0, exact=True))
        starts = 256
        acc, cums = 0.0, [0.0]
        for n in range(starts + k):
            acc += self.log_weight(n)
            cums.append(acc)
        best, arg = -math.inf, 0
        for s in range(starts):
            v = cums[s + k] - cums[s]
            if v > best:
                best, arg = v, s
        raise StructureError(
            f"{self.variant} rule has no supremum structure; partial is a "
            f"scan lower bound over window starts 0..{starts - 1}",
            partial=PowerNormResult(best, False, arg, exact=False))

    def coadjoint_tail(self) -> tuple[str, float | None, int, str]:
        """Tail certificate: (verdict, lambda floor > 1 or None, floor-from index, reason)."""
        return ("undetermined", None, 0, "rule carries no tail certificate")

    def norm_growth(self) -> tuple[str, float | None, str]:
        """Structural boundedness of {||T^k||}: (verdict, sup of log norms, reason).

        verdict is "bounded" (sup-log supplied), "unbounded", or "unknown".
        """
        return ("unknown", None, "rule carries no growth certificate")

    def unbounded_witness(self, log_bound: float) -> tuple[int, float] | None:
        """A power k with log ||T^k|| > log_bound, when growth is unbounded."""
        return None

    def to_json(self) -> dict:
        raise ConstraintError(f"{self.variant} rule built from raw callables is not serializable")


# ---------------------------------------------------------------------------
# explicit prefix + constant tail
# ---------------------------------------------------------------------------

class ExplicitThenConstant(WeightRule):
    """Finitely many explicit weights followed by a constant tail."""

    variant = "explicit_then_constant"

    def __init__(self, prefix: Sequence, tail):
        self.prefix = tuple(_check_positive(p, "prefix weight") for p in prefix)
        self.tail = _check_positive(tail, "tail weight")

    def weight(self, n):
        if n < 0:
            raise ConstraintError("weight index must be nonnegative")
        return float(self.prefix[n]) if n < len(self.prefix) else float(self.tail)

    def exact_weight(self, n):
        v = self.prefix[n] if n < len(self.prefix) else self.tail
        if not _is_rational_scalar(v):
            raise PrecisionError("weight is not rational")
        return Fraction(v)

    def is_rational(self):
        return all(_is_rational_scalar(v) for v in (*self.prefix, self.tail))

    def power_norm(self, k):
        if k == 0:
            return PowerNormResult(0.0, True, 0)
        p = len(self.prefix)
        logs = np.array([math.log(self.weight(n)) for n in range(p + k)])
        cums = np.concatenate([[0.0], np.cumsum(logs)])
        # window starts 0..p cover every distinct product; n >= p is all-tail
        sums = cums[k : p + k + 1] - cums[: p + 1]
        best = int(np.argmax(sums))
        return PowerNormResult(float(sums[best]), True, best)

    def coadjoint_tail(self):
        t = float(self.tail)
        if t > 1.0:
            return ("in_l2", t, len(self.prefix), f"constant tail {t} > 1 gives a geometric bound")
        return ("not_in_l2", None, len(self.prefix),
                f"constant tail {t} <= 1 keeps the coefficients bounded away from zero")

    def norm_growth(self):
        t = float(self.tail)
        if t > 1.0:
            return ("unbounded", None, f"constant tail {t} > 1 makes window products diverge")
        cap = math.fsum(max(math.log(float(p)), 0.0) for p in self.prefix)
        return ("bounded", cap, "tail <= 1: any window gains at most the prefix excess")

    def unbounded_witness(self, log_bound):
        t = float(self.tail)
        if t <= 1.0:
            return None
        k = len(self.prefix) + max(1, math.ceil((log_bound + 1.0) / math.log(t)))
        while self.power_norm(k).log_norm <= log_bound:  # prefix dips, if any
            k *= 2
        return (k, self.power_norm(k).log_norm)

    def to_json(self):
        return {
            "variant": self.variant,
            "prefix": [_num_to_json(v) for v in self.prefix],
            "tail": _num_to_json(self.tail),
        }


# ---------------------------------------------------------------------------
# monotone ramps with a limit
# ---------------------------------------------------------------------------

class MonotoneToLimit(WeightRule):
    """Monotone weight sequence converging to ``limit`` (spot-checked)."""

    variant = "monotone_to_limit"

    def __init__(self, fn: Callable[[int], float], limit: float, direction: str,
                 preset: str | None = None):
        if direction not in ("increasing", "decreasing"):
            raise ConstraintError("direction must be 'increasing' or 'decreasing'")
        self.fn = fn
        self.limit = float(_check_positive(limit, "limit"))
        self.direction = direction
        self.preset = preset
        samples = [float(fn(n)) for n in _SPOT_SAMPLES]
        for v in samples:
            _check_positive(v, "weight sample")
        pairs = list(zip(samples, samples[1:]))
        if direction == "increasing":
            if any(a > b + 1e-15 for a, b in pairs) or samples[-1] > self.limit + 1e-9:
                raise ConstraintError("sampled weights are not increasing toward the limit")
        else:
            if any(a < b - 1e-15 for a, b in pairs) or samples[-1] < self.limit - 1e-9:
                raise ConstraintError("sampled weights are not decreasing toward the limit")
        if abs(samples[-1] - self.limit) > abs(samples[0] - self.limit) + 1e-12:
            raise ConstraintError("sampled weights drift away from the declared limit")

    def weight(self, n):
        if n < 0:
            raise ConstraintError("weight index must be nonnegative")
        return float(self.fn(n))

    def power_norm(self, k):
        if k == 0:
            return PowerNormResult(0.0, True, 0)
        if self.direction == "increasing":
            # window products increase in the start index; sup is the limit power
            return PowerNormResult(k * math.log(self.limit), False, None)
        return PowerNormResult(self.log_window(0, k), True, 0)

    def coadjoint_tail(self):
        if self.direction == "increasing":
            if self.limit <= 1.0:
                return ("not_in_l2", None, 0,
                        "increasing weights below a limit <= 1 keep every weight <= 1")
            floor = 1.0 + 0.5 * (self.limit - 1.0)
            for n in _SPOT_SAMPLES:
                if self.weight(n) >= floor:
                    return ("in_l2", self.weight(n), n,
                            f"increasing weights exceed {floor:.6g} from index {n} on")
            return ("undetermined", None, 0, "no sampled weight crossed the geometric floor")
        # decreasing
        if self.limit > 1.0:
            return ("in_l2", self.limit, 0, f"decreasing weights stay above the limit {self.limit} > 1")
        if self.limit < 1.0:
            ceil = 1.0 - 0.5 * (1.0 - self.limit)
            for n in _SPOT_SAMPLES:
                if self.weight(n) <= ceil:
                    return ("not_in_l2", None, n,
                            f"decreasing weights fall below {ceil:.6g} from index {n} on")
            return ("undetermined", None, 0, "no sampled weight crossed the decay ceiling")
        return ("undetermined", None, 0, "decreasing weights with limit 1 admit no tail certificate")

    def norm_growth(self):
        if self.direction == "increasing":
            if self.limit > 1.0:
                return ("unbounded", None,
                        f"window products approach limit^k with limit {self.limit} > 1")
            return ("bounded", 0.0, f"every weight is below the limit {self.limit} <= 1")
        if self.limit > 1.0:
            return ("unbounded", None,
                    f"decreasing weights stay above the limit {self.limit} > 1")
        if self.limit < 1.0:
            cap, acc, n = 0.0, 0.0, 0
            while self.weight(n) > 1.0:
                acc += math.log(self.weight(n))
                cap = max(cap, acc)
                n += 1
                if n > 10 ** 6:
                    return ("unknown", None, "weights did not cross 1 within the scan budget")
            return ("bounded", cap, f"weights fall below 1 at index {n}")
        return ("unknown", None, "decreasing weights with limit 1 may or may not stay bounded")

    def unbounded_witness(self, log_bound):
        if self.limit <= 1.0:
            return None
        k = max(1, math.ceil((log_bound + 1.0) / math.log(self.limit)))
        result = self.power_norm(k)
        while result.log_norm <= log_bound:
            k *= 2
            result = self.power_norm(k)
        return (k, result.log_norm)

    def to_json(self):
        if self.preset != "ratio_to_limit":
            raise ConstraintError("monotone rule built from a raw callable is not serializable")
        return {"variant": self.variant, "preset": self.preset,
                "limit": self.limit, "direction": self.direction}


def monotone_ratio_to_limit(limit: float, direction: str = "increasing") -> MonotoneToLimit:
    """Named preset: limit * sqrt((n+1)/(n+2)) increasing, or its reciprocal ramp."""
    if direction == "increasing":
        fn = lambda n: limit * math.sqrt((n + 1.0) / (n + 2.0))
    else:
        fn = lambda n: limit * math.sqrt((n + 2.0) / (n + 1.0))
    return MonotoneToLimit(fn, limit, direction, preset="ratio_to_limit")


# ---------------------------------------------------------------------------
# segment-built ("inflation") weights
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class InflationParams:
    """Parameters for the segment construction.

    Segment j (1-based) consists of s_j blocks of length x_j: the first
    s_j - 1 blocks are (q_j, 1, ..., 1), the last is (q_j, 1, ..., 1,
    q_j^{-s_j}); it is followed by l_j unit weights.  With
    t_j = s_j x_j and m_j = t_j + sum_{i<j} (t_i + l_i), the padding must
    satisfy l_j > m_j and x_{j+1} > m_j + l_j.  The peak scale is
    q_j = exp(eps_j) with eps_j = log(theta)/s_j for finite theta > 1 and
    eps_j = 1/sqrt(s_j) for theta = inf.

    ``s`` is an explicit sequence, a callable on 1-based j, or None for the
    default s_j = j + 2.  ``padding`` is "minimal" (l_j = m_j + 1,
    x_{j+1} = m_j + l_j + 1) or a callable (s_j, m_j) -> (l_j, x_{j+1})
    whose output is validated per step.
    """

    s: tuple | Callable[[int], int] | None = None
    x1: int = 3
    theta: float = 2.0
    padding: str | Callable = "minimal"

    def __post_init__(self):
        if isinstance(self.s, (list, tuple)):
            object.__setattr__(self, "s", tuple(int(v) for v in self.s))
        if not isinstance(self.x1, int) or self.x1 <= 2:
            raise ConstraintError(f"x1 must be an integer greater than 2, got {self.x1!r}")
        th = float(self.theta)
        if not (math.isinf(th) or th > 1.0):
            raise ConstraintError(f"theta must exceed 1 (or be inf), got {self.theta!r}")
        if isinstance(self.padding, str) and self.padding != "minimal":
            raise ConstraintError(f"unknown padding policy {self.padding!r}")

    def s_at(self, j: int) -> int:
        if self.s is None:
            v = j + 2
        elif callable(self.s):
            v = int(self.s(j))
        else:
            if j > len(self.s):
                raise ConstraintError(f"s sequence exhausted at segment {j}")
            v = self.s[j - 1]
        if v <= 2:
            raise ConstraintError(f"s_{j} must exceed 2, got {v}")
        return v

    def eps_at(self, j: int) -> float:
        s = self.s_at(j)
        if math.isinf(float(self.theta)):
            return 1.0 / math.sqrt(s)
        return math.log(float(self.theta)) / s


@dataclass(frozen=True)
class Segment:
    j: int
    s: int
    x: int
    t: int
    l: int
    m: int
    start: int  # global index of the segment's first weight
    eps: float

    @property
    def end(self) -> int:
        """Global index one past the trailing unit run."""
        return self.start + self.t + self.l


@dataclass
class NormProfile:
    """Power norms of a segment-built shift over 1..n_max, with regime tags."""

    entries: list[tuple[int, float, str, int]]  # (n, log_norm, regime, j)
    segments: list[tuple[int, int, int, int, int]]  # (j, m, l, t, x)
    plateau_trace: list[tuple[int, float]]  # (j, plateau log value), completed plateaus
    peak_trace: list[tuple[int, float]]  # (j, peak log value), completed peaks
    liminf_log: float  # running min over plateau samples
    limsup_log: float  # running max over peak samples

    def to_csv(self, path):
        with open(path, "w") as fh:
            fh.write("n,log_norm,regime,j\n")
            for n, ln, regime, j in self.entries:
                fh.write(f"{n},{ln!r},{regime},{j}\n")


class InflationRule(WeightRule):
    """Segment-built weights with exact piecewise power norms.

    The norm of T^n is q_{j+1} on the plateau m_j <= n <= m_j + l_j, q_j^{s_j}
    on the peak m_j - x_j + 1 <= n < m_j, and q_j^{ceil(n/x_j) ^ s_j} on the
    ramp before it (the best window starts at the segment and collects
    ceil(n/x_j) peak factors, capped at s_j, without reaching the closing
    factor q_j^{-s_j}).
    """

    variant = "inflation"

    def __init__(self, params: InflationParams):
        self.params = params
        self._segments: list[Segment] = []
        self._sum_tl = 0  # running sum of t_i + l_i over built segments
        self._starts: list[int] = []

    # -- segment table ------------------------------------------------------

    def _build_next_segment(self):
        j = len(self._segments) + 1
        s = self.params.s_at(j)
        if self._segments:
            prev = self._segments[-1]
            if s <= prev.s:
                raise ConstraintError(f"s_{j} = {s} does not exceed s_{j-1} = {prev.s}")
        eps = self.params.eps_at(j)
        if self._segments and eps >= self._segments[-1].eps:
            raise ConstraintError(f"peak scale is not strictly decreasing at segment {j}")
        if j == 1:
            x = self.params.x1
        else:
            x = self._next_x
        t = s * x
        m = t + self._sum_tl
        if callable(self.params.padding):
            l, next_x = self.params.padding(s, m)
            l, next_x = int(l), int(next_x)
        else:
            l, next_x = m + 1, 2 * m + 2
        if l <= m:
            raise ConstraintError(f"padding produced l_{j} = {l} <= m_{j} = {m}")
        if next_x <= m + l:
            raise ConstraintError(f"padding produced x_{j+1} = {next_x} <= m_{j} + l_{j} = {m + l}")
        start = self._segments[-1].end if self._segments else 0
        seg = Segment(j=j, s=s, x=x, t=t, l=l, m=m, start=start, eps=eps)
        self._segments.append(seg)
        self._starts.append(start)
        self._sum_tl += t + l
        self._next_x = next_x
        return seg

    def _ensure_segments(self, count: int):
        while len(self._segments) < count:
            self._build_next_segment()

    def _ensure_horizon(self, n: int):
        """Extend the table until some segment has m_j + l_j >= n."""
        while not self._segments or self._segments[-1].m + self._segments[-1].l < n:
            self._build_next_segment()

    def segments(self, count: int) -> list[Segment]:
        self._ensure_segments(count)
        return self._segments[:count]

    # -- weights ------------------------------------------------------------

    def log_weight(self, n):
        if n < 0:
            raise ConstraintError("weight index must be nonnegative")
        while not self._segments or n >= self._segments[-1].end:
            self._build_next_segment()
        seg = self._segments[bisect_right(self._starts, n) - 1]
        off = n - seg.start
        if off >= seg.t:
            return 0.0  # trailing unit run
        if off == seg.t - 1:
            return -seg.s * seg.eps  # closing factor of the last block
        if off % seg.x == 0:
            return seg.eps
        return 0.0

    def weight(self, n):
        return math.exp(self.log_weight(n))

    def log_weights(self, count: int) -> np.ndarray:
        return np.array([self.log_weight(n) for n in range(count)])

    # -- norms ---------------------------------------------------------------

    def _segment_for_power(self, n: int) -> Segment:
        self._ensure_horizon(n)
        for seg in self._segments:
            if n <= seg.m + seg.l:
                return seg
        raise AssertionError("horizon extension failed")  # pragma: no cover

    def power_norm_log(self, n: int) -> tuple[float, str, int]:
        """(log norm, regime, segment index) for a single power."""
        if n < 0:
            raise ConstraintError("power must be nonnegative")
        if n == 0:
            return (0.0, "plateau", 0)
        seg = self._segment_for_power(n)
        if n >= seg.m:
            self._ensure_segments(seg.j + 1)
            return (self._segments[seg.j].eps, "plateau", seg.j)
        if n >= seg.m - seg.x + 1:
            return (seg.s * seg.eps, "peak", seg.j)
        count = min(seg.s, -(-n // seg.x))
        return (count * seg.eps, "ramp", seg.j)

    def power_norm(self, k):
        if k == 0:
            return PowerNormResult(0.0, True, 0)
        log_norm, regime, j = self.power_norm_log(k)
        seg = self._segments[j - 1]
        if regime == "plateau":
            witness = self._segments[j].start  # one next-segment peak factor, rest units
        elif regime == "peak":
            witness = 0  # full prefix up to (but excluding) the closing factor
        else:
            witness = seg.start
        return PowerNormResult(log_norm, True, witness)

    def profile(self, n_max: int) -> NormProfile:
        entries = []
        plateau_trace: list[tuple[int, float]] = []
        peak_trace: list[tuple[int, float]] = []
        liminf = math.inf
        limsup = -math.inf
        for n in range(1, n_max + 1):
            ln, regime, j = self.power_norm_log(n)
            entries.append((n, ln, regime, j))
            if regime == "plateau":
                if not plateau_trace or plateau_trace[-1][0] != j:
                    plateau_trace.append((j, ln))
                liminf = min(liminf, ln)
            elif regime == "peak":
                if not peak_trace or peak_trace[-1][0] != j:
                    peak_trace.append((j, ln))
                limsup = max(limsup, ln)
        segs = [(s.j, s.m, s.l, s.t, s.x) for s in self._segments if s.start < n_max]
        return NormProfile(entries, segs, plateau_trace, peak_trace, liminf, limsup)

    def coadjoint_tail(self):
        return ("not_in_l2", None, 0,
                "prefix products return to 1 after every completed segment, "
                "so the candidate coefficients do not decay")

    def norm_growth(self):
        if math.isinf(float(self.params.theta)):
            return ("unbounded", None, "peak values exp(sqrt(s_j)) increase without bound")
        return ("bounded", math.log(float(self.params.theta)),
                "every regime value is at most the peak s_j * eps_j = log(theta)")

    def unbounded_witness(self, log_bound):
        if not math.isinf(float(self.params.theta)):
            return None
        j = 1
        while math.sqrt(self.params.s_at(j)) <= log_bound:
            j += 1
        seg = self.segments(j)[-1]
        n = seg.m - 1  # inside the peak regime of segment j
        return (n, seg.s * seg.eps)

    def to_json(self):
        p = self.params
        if callable(p.s) and p.s is not None:
            raise ConstraintError("inflation rule with callable s is not serializable")
        if callable(p.padding):
            raise ConstraintError("inflation rule with callable padding is not serializable")
        return {
            "variant": self.variant,
            "s": list(p.s) if p.s is not None else None,
            "x1": p.x1,
            "theta": "inf" if math.isinf(float(p.theta)) else float(p.theta),
            "padding": p.padding,
        }


def inflation_weights(params: InflationParams, count: int) -> list[float]:
    """First ``count`` weights of the segment construction."""
    rule = InflationRule(params)
    return rule.weights(count)


def inflation_norm_profile(params: InflationParams, n_max: int) -> NormProfile:
    return InflationRule(params).profile(n_max)


# ---------------------------------------------------------------------------
# 2-isometry weights
# ---------------------------------------------------------------------------

class TwoIsometryRule(WeightRule):
    """Weights sigma_n = sqrt((1+(n+1)c)/(1+nc)) with c = lambda^2 - 1 >= 0.

    The squared window products telescope exactly:
    prod_{i=n}^{n+k-1} sigma_i^2 = (1+(n+k)c)/(1+nc), decreasing in n, so
    ||T^k|| = sqrt(1 + k c) is attained at index 0.
    """

    variant = "two_isometry"

    def __init__(self, lam):
        _check_positive(lam, "lambda")
        if float(lam) < 1.0:
            raise ConstraintError(f"lambda must be >= 1, got {lam!r}")
        self.lam = lam
        self.c_exact = Fraction(lam) ** 2 - 1  # exact for int/Fraction/float input
        self.c = float(self.c_exact)

    def exact_squared_weight(self, n):
        return (1 + (n + 1) * self.c_exact) / (1 + n * self.c_exact)

    def has_rational_squares(self):
        return True

    def weight(self, n):
        if n < 0:
            raise ConstraintError("weight index must be nonnegative")
        return math.sqrt((1.0 + (n + 1) * self.c) / (1.0 + n * self.c))

    def power_norm(self, k):
        return PowerNormResult(0.5 * math.log1p(k * self.c), True, 0)

    def coadjoint_tail(self):
        if self.c == 0:
            return ("not_in_l2", None, 0, "unit weights keep the coefficients constant")
        return ("not_in_l2", None, 0,
                "squared prefix products grow linearly (1 + n c), so the "
                "candidate coefficients decay only like 1/sqrt(n)")

    def norm_growth(self):
        if self.c == 0:
            return ("bounded", 0.0, "lambda = 1 gives the unweighted shift")
        return ("unbounded", None, "||T^n|| = sqrt(1 + n c) with c > 0")

    def unbounded_witness(self, log_bound):
        if self.c == 0:
            return None
        n = math.ceil(math.exp(2.0 * log_bound) / self.c) + 1
        return (n, self.power_norm(n).log_norm)

    def to_json(self):
        return {"variant": self.variant, "lambda": _num_to_json(self.lam)}


def two_isometry_weights(lam, count: int) -> list[float]:
    return TwoIsometryRule(lam).weights(count)


# ---------------------------------------------------------------------------
# Berger (moment) weights
# ---------------------------------------------------------------------------

class BergerRule(WeightRule):
    """Weights lambda_n = sqrt(m_{n+1}/m_n) from a moment sequence, m_0 = 1.

    Positivity and Hankel determinants of orders 1-3 are spot-checked on
    sampled shifts.  ``ratio_limit`` declares lim m_{n+1}/m_n when known and
    enables the closed power-norm form sup_n m_{n+k}/m_n.
    """

    variant = "berger"

    def __init__(self, moment_fn: Callable[[int], object], ratio_limit: float | None = None,
                 preset: str | None = None, preset_params: dict | None = None):
        self.moment_fn = moment_fn
        self.ratio_limit = None if ratio_limit is None else float(ratio_limit)
        self.preset = preset
        self.preset_params = dict(preset_params or {})
        m0 = moment_fn(0)
        if not (_is_rational_scalar(m0) and Fraction(m0) == 1) and abs(float(m0) - 1.0) > 1e-12:
            raise ConstraintError(f"moment sequence must be normalized with m_0 = 1, got {m0!r}")
        for s in (0, 1, 2, 4, 8, 16):
            for order in (1, 2, 3):
                window = [float(moment_fn(s + i)) for i in range(2 * order - 1)]
                if any(v <= 0 for v in window):
                    raise ConstraintError(f"moments must be positive, failed near index {s}")
                h = np.array([[float(moment_fn(s + i + j)) for j in range(order)]
                              for i in range(order)])
                det = float(np.linalg.det(h))
                if det < -1e-10 * max(1.0, abs(h).max() ** order):
                    raise ConstraintError(
                        f"Hankel determinant of order {order} at shift {s} is negative ({det:.3e})")
        ratios = [float(moment_fn(n + 1)) / float(moment_fn(n)) for n in range(24)]
        self._ratio_increasing = all(a <= b + 1e-15 for a, b in zip(ratios, ratios[1:]))
        self._ratio_decreasing = all(a >= b - 1e-15 for a, b in zip(ratios, ratios[1:]))
        self._ratio_constant = all(abs(a - ratios[0]) <= 1e-15 * abs(ratios[0]) for a in ratios)

    def moment(self, n: int):
        return self.moment_fn(n)

    def weight(self, n):
        if n < 0:
            raise ConstraintError("weight index must be nonnegative")
        a, b = self.moment_fn(n + 1), self.moment_fn(n)
        if _is_rational_scalar(a) and _is_rational_scalar(b):
            # divide exactly first: the ratio stays small even when the
            # moments themselves overflow float
            return math.sqrt(float(Fraction(a) / Fraction(b)))
        return math.sqrt(float(a) / float(b))

    def exact_squared_weight(self, n):
        a, b = self.moment_fn(n + 1), self.moment_fn(n)
        if not (_is_rational_scalar(a) and _is_rational_scalar(b)):
            raise PrecisionError("moments are not rational")
        return Fraction(a) / Fraction(b)

    def has_rational_squares(self):
        return _is_rational_scalar(self.moment_fn(0)) and _is_rational_scalar(self.moment_fn(1))

    def power_norm(self, k):
        if k == 0:
            return PowerNormResult(0.0, True, 0)
        # ||T^k||^2 = sup_n m_{n+k}/m_n, a product of k consecutive moment ratios
        if self._ratio_constant:
            return PowerNormResult(0.5 * k * math.log(float(self.moment_fn(1))), True, 0)
        if self._ratio_decreasing:
            return PowerNormResult(0.5 * math.log(float(self.moment_fn(k))), True, 0)
        if self._ratio_increasing and self.ratio_limit is not None:
            return PowerNormResult(0.5 * k * math.log(self.ratio_limit), False, None)
        scan = max(self.log_window(n, k) for n in range(256))
        raise StructureError(
            "moment ratios are neither monotone on samples nor limit-declared; "
            "returning a finite-scan lower bound",
            partial=PowerNormResult(scan, False, None, exact=False))

    def norm_growth(self):
        if self._ratio_constant:
            m1 = float(self.moment_fn(1))
            if m1 > 1.0:
                return ("unbounded", None, f"constant weights sqrt({m1}) > 1")
            return ("bounded", 0.0, f"constant weights sqrt({m1}) <= 1")
        if self._ratio_increasing and self.ratio_limit is not None:
            if self.ratio_limit > 1.0:
                return ("unbounded", None,
                        f"||T^k||^2 = {self.ratio_limit}^k with ratio limit > 1")
            return ("bounded", 0.0, "moment ratios increase to a limit <= 1")
        if self._ratio_decreasing:
            cap, n = 0.0, 0
            while float(self.moment_fn(n + 1)) > float(self.moment_fn(n)):
                cap = max(cap, float(self.moment_fn(n + 1)))
                n += 1
                if n > 10 ** 5:
                    return ("unknown", None, "moments kept growing within the scan budget")
            return ("bounded", 0.5 * math.log(cap) if cap > 1.0 else 0.0,
                    f"||T^k||^2 = m_k, nonincreasing from index {n}")
        return ("unknown", None, "moment ratios are not monotone on samples")

    def unbounded_witness(self, log_bound):
        growth = self.norm_growth()
        if growth[0] != "unbounded":
            return None
        rate = math.log(self.ratio_limit if not self._ratio_constant
                        else float(self.moment_fn(1)))
        k = max(1, math.ceil(2.0 * (log_bound + 1.0) / rate))
        result = self.power_norm(k)
        while result.log_norm <= log_bound:
            k *= 2
            result = self.power_norm(k)
        return (k, result.log_norm)

    def coadjoint_tail(self):
        if self.ratio_limit is not None and self.ratio_limit <= 1.0 and self._ratio_increasing:
            return ("not_in_l2", None, 0,
                    "moment ratios increase to a limit <= 1, so no weight exceeds 1")
        floor_sq = None
        floor_from = 0
        if self._ratio_increasing or self._ratio_constant:
            for n in _SPOT_SAMPLES:
                r = float(self.moment_fn(n + 1)) / float(self.moment_fn(n))
                if r > 1.0 + 1e-9:
                    floor_sq, floor_from = r, n
                    break
        if floor_sq is not None:
            return ("in_l2", math.sqrt(floor_sq), floor_from,
                    f"moment ratios stay above {floor_sq:.6g} > 1 from index {floor_from} on")
        return ("undetermined", None, 0, "moment ratios admit no sampled tail certificate")

    def to_json(self):
        if self.preset is None:
            raise ConstraintError("berger rule built from a raw callable is not serializable")
        out = {"variant": self.variant, "preset": self.preset}
        out.update({k: _num_to_json(v) for k, v in self.preset_params.items()})
        return out


def berger_uniform_moments() -> BergerRule:
    """Moments 1/(n+1): the density 1 on [0,1]."""
    return BergerRule(lambda n: Fraction(1, n + 1), ratio_limit=1.0, preset="uniform01")


def berger_point_mass(a) -> BergerRule:
    """Moments a^(2n): a single mass at a^2; constant weights a."""
    aa = Fraction(a) ** 2
    return BergerRule(lambda n: aa ** n, ratio_limit=float(aa), preset="point_mass",
                      preset_params={"a": a})


def berger_two_atom(c, t=4) -> BergerRule:
    """Moments (1 + c t^n)/(1 + c): masses at 1 and t, increasing weights -> sqrt(t)."""
    cf, tf = Fraction(c), Fraction(t)
    if cf <= 0 or tf <= 1:
        raise ConstraintError("two-atom moments need c > 0 and t > 1")
    return BergerRule(lambda n: (1 + cf * tf ** n) / (1 + cf), ratio_limit=float(tf),
                      preset="two_atom", preset_params={"c": c, "t": t})


def berger_weights(moments, count: int) -> list[float]:
    """First ``count`` weights for a moment sequence (callable or BergerRule)."""
    rule = moments if isinstance(moments, BergerRule) else BergerRule(moments)
    return rule.weights(count)


# ---------------------------------------------------------------------------
# power norms, co-adjoint fixed vectors, spectral radius
# ---------------------------------------------------------------------------

def shift_power_norm(weights: WeightRule, k: int) -> PowerNormResult:
    """Exact ||T^k|| (log scale) of the shift with the given weight rule."""
    if k < 0:
        raise ConstraintError("power must be nonnegative")
    return weights.power_norm(k)


def coadjoint_unit_eigenvector(weights: WeightRule, cutoff: int = 200) -> CoadjointResult:
    """Candidate x with T* x = x, x_n = 1/(w(0)...w(n-1)), with a tail verdict."""
    if cutoff < 2:
        raise ConstraintError("cutoff must be at least 2")
    logs = np.empty(cutoff)
    acc = 0.0
    for n in range(cutoff):
        logs[n] = -acc
        acc += weights.log_weight(n)
    coeffs = np.exp(logs)
    norm_sq = float(np.sum(coeffs ** 2))
    verdict, floor, floor_from, reason = weights.coadjoint_tail()
    tail_bound = None
    if verdict == "in_l2":
        if floor_from >= cutoff - 1:
            verdict = "undetermined"
            reason += f" (certificate starts at {floor_from}, beyond the cutoff)"
        else:
            # geometric bound on the l2 mass of indices >= cutoff-1
            last = coeffs[cutoff - 1]
            tail_bound = last * floor / math.sqrt(floor * floor - 1.0)

    # The truncated candidate satisfies (T* x)_n = w(n) x_{n+1} = x_n for every
    # n < cutoff-1 by construction of the recursion, so its fixed-point defect
    # is the lone missing coordinate x_{cutoff-1}.  With rational squared
    # weights that coordinate is cross-checked against the exact telescoped
    # value 1 / (w(0)^2 ... w(n-1)^2).
    defect = float(coeffs[cutoff - 1])
    certified = False
    if weights.has_rational_squares():
        sq = Fraction(1)
        for n in range(cutoff):
            float_sq = float(coeffs[n]) ** 2
            exact_sq = float(sq)
            if abs(float_sq - exact_sq) > 1e-10 * exact_sq:
                raise PrecisionError(
                    f"log-accumulated coefficient drifted from the exact rational "
                    f"value at index {n}: {float_sq!r} vs {exact_sq!r}")
            sq /= weights.exact_squared_weight(n)
        certified = True
        reason += ("; defect coordinate x_{cutoff-1} certified against the exact "
                   "rational telescoping of the squared weights")
    return CoadjointResult(verdict=verdict, coeffs=coeffs, log_coeffs=logs,
                           norm_sq_partial=norm_sq, tail_bound=tail_bound,
                           lambda_floor=floor, certificate=reason, cutoff=cutoff,
                           fixed_point_defect=defect, exact_certified=certified)


def coadjoint_pairing_trace(weights: WeightRule, result: CoadjointResult,
                            n_max: int) -> list[tuple[int, float]]:
    """<T^n e_0, x> for the co-adjoint candidate x, for n = 0 .. n_max.

    The pairing is (w(0)...w(n-1)) * x_n, which telescopes to 1.  It is
    evaluated as exp(acc_n + log x_n) with acc_n re-accumulated by the same
    loop that built ``result.log_coeffs``, so the exponent cancels to exactly
    0.0 and the reported pairing is exactly 1.0 — the float model commits to
    one rounding of each partial sum and the two runs share every rounding.
    """
    if not 0 <= n_max < result.cutoff:
        raise ConstraintError(f"n_max must lie below the cutoff {result.cutoff}")
    out = []
    acc = 0.0
    for n in range(n_max + 1):
        out.append((n, math.exp(acc + result.log_coeffs[n])))
        acc += weights.log_weight(n)
    return out


def spectral_radius_estimate(op, n_max: int = 64) -> tuple[float, list[tuple[int, float]]]:
    """min_{n <= n_max} ||T^n||^(1/n) and its trace; decreases to r(T) from above."""
    from . import opcore  # deferred: opcore builds on this module

    if isinstance(op, WeightRule):
        trace = [(n, math.exp(shift_power_norm(op, n).log_norm / n)) for n in range(1, n_max + 1)]
    elif isinstance(op, opcore.WeightedShift):
        return spectral_radius_estimate(op.weights, n_max)
    elif isinstance(op, opcore.Diagonal):
        sup = op.entries.sup_abs()
        trace = [(n, sup) for n in range(1, n_max + 1)]
    elif isinstance(op, opcore.MeasureMultiplication):
        trace = [(n, 1.0) for n in range(1, n_max + 1)]
    elif isinstance(op, opcore.DirectSum):
        _, left = spectral_radius_estimate(op.left, n_max)
        _, right = spectral_radius_estimate(op.right, n_max)
        trace = [(n, max(a, b)) for (n, a), (_, b) in zip(left, right)]
    elif op.dimension is not None:
        dense = opcore.to_dense(op)
        trace = []
        power = np.eye(dense.shape[0], dtype=complex)
        for n in range(1, n_max + 1):
            power = power @ dense
            trace.append((n, float(np.linalg.norm(power, 2)) ** (1.0 / n)))
    else:
        raise StructureError(f"no spectral-radius structure for {type(op).__name__}")
    estimate = min(v for _, v in trace)
    return estimate, trace


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def weight_rule_to_json(rule: WeightRule) -> dict:
    return rule.to_json()


def weight_rule_from_json(data: dict) -> WeightRule:
    variant = data.get("variant")
    if variant == "explicit_then_constant":
        return ExplicitThenConstant([_num_from_json(v) for v in data["prefix"]],
                                    _num_from_json(data["tail"]))
    if variant == "monotone_to_limit":
        if data.get("preset") != "ratio_to_limit":
            raise ConstraintError(f"unknown monotone preset {data.get('preset')!r}")
        return monotone_ratio_to_limit(float(data["limit"]), data.get("direction", "increasing"))
    if variant == "inflation":
        s = data.get("s")
        theta = data.get("theta", 2.0)
        theta = math.inf if theta == "inf" else float(theta)
        return InflationRule(InflationParams(
            s=tuple(s) if s is not None else None,
            x1=int(data.get("x1", 3)),
            theta=theta,
            padding=data.get("padding", "minimal")))
    if variant == "two_isometry":
        return TwoIsometryRule(_num_from_json(data["lambda"]))
    if variant == "berger":
        preset = data.get("preset")
        if preset == "uniform01":
            return berger_uniform_moments()
        if preset == "point_mass":
            return berger_point_mass(_num_from_json(data["a"]))
        if preset == "two_atom":
            return berger_two_atom(_num_from_json(data["c"]), _num_from_json(data.get("t", 4)))
        raise ConstraintError(f"unknown berger preset {preset!r}")
    raise ConstraintError(f"unknown weight rule variant {variant!r}")
