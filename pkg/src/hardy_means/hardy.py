"""Hardy partial-sum experiments.

A mean A is a Hardy mean when sum_n A(a_1..a_n) <= C * ||a||_1 holds with
one finite constant C for every summable positive sequence a.  This module
measures the truncated ratio

    sum_{n<=N} A(a_1..a_n)  /  sum_{n<=N} a_n

for the standard sequence families, exposes the sharp power-mean constant
(1-p)**(-1/p), and runs the sharpness experiments around the pairwise
mean M_{2,1,0}, whose empirical constant approaches 4 from below.

Prefix means are computed incrementally.  M_{2,1,0} uses the O(1)-per-step
identity

    M_{2,1,0}(a_1..a_n) = (S_n**2 - T_n) / (n * (n - 1)),
    S_n = sum sqrt(a_i),  T_n = sum a_i,

so truncations up to 10^7 stay cheap; plain power means keep one running
sum, and M_{k,s,0} keeps the log-domain elementary-symmetric row at O(k)
per step.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Sequence, Union

from ._summation import KahanSum
from .cmn_means import LogElementarySymmetric, MeanParams, cmn_mean_fast
from .errors import DomainError
from .extreal import ensure_exponent, format_exponent, parse_exponent
from .power_means import ZERO_EXPONENT_THRESHOLD, check_positive_vector

__all__ = [
    "Harmonic",
    "HarmonicTruncated",
    "PowerTail",
    "Geometric",
    "CustomTerms",
    "SequenceFamily",
    "parse_family",
    "MeanLike",
    "parse_mean",
    "format_mean",
    "make_prefix_evaluator",
    "HardyEstimate",
    "hardy_partial_sum",
    "iter_hardy_checkpoints",
    "default_checkpoints",
    "landau_constant",
    "sharpness_sequence",
    "sharpness_limit_experiment",
    "sharpness_limit_curve",
    "sharpness_constant_sweep",
]

# Smallest positive double; used for the geometric representability horizon.
_TINY = 5e-324


def _require_length(n, name: str = "N") -> int:
    if isinstance(n, bool) or not isinstance(n, int):
        raise DomainError(f"{name} must be an integer, got {n!r}")
    if n < 1:
        raise DomainError(f"{name} must be >= 1, got {n}")
    return n


# ---------------------------------------------------------------------------
# Sequence families


@dataclass(frozen=True)
class Harmonic:
    """a_n = 1/n.  Not summable; quarantined behind an explicit opt-in.

    Ratio experiments against a divergent ||a||_1 are meaningless, so
    :func:`hardy_partial_sum` rejects this family unless the caller sets
    ``allow_nonsummable`` (the limit experiment does so internally).
    """

    summable = False

    def terms(self, count: int) -> Iterator[float]:
        _require_length(count, "count")
        return (1.0 / i for i in range(1, count + 1))

    def label(self) -> str:
        return "harmonic"


@dataclass(frozen=True)
class HarmonicTruncated:
    """a_n = 1/n up to the crossover, then the inverse-square tail n**-2.

    This is the witness family for the sharpness of the constant 4: with a
    long harmonic prefix the empirical ratio climbs arbitrarily close to 4
    while the sequence stays summable.
    """

    crossover: int
    summable = True

    def __post_init__(self):
        _require_length(self.crossover, "crossover")

    def terms(self, count: int) -> Iterator[float]:
        _require_length(count, "count")
        n0 = self.crossover
        return (1.0 / i if i <= n0 else float(i) ** -2.0 for i in range(1, count + 1))

    def label(self) -> str:
        return f"harmonic-truncated:{self.crossover}"


@dataclass(frozen=True)
class PowerTail:
    """a_n = n**-alpha with alpha > 1 (summable)."""

    exponent: float
    summable = True

    def __post_init__(self):
        alpha = ensure_exponent(self.exponent, "exponent")
        if not (math.isfinite(alpha) and alpha > 1.0):
            raise DomainError(f"power tail needs a finite exponent > 1, got {alpha!r}")
        object.__setattr__(self, "exponent", alpha)

    def terms(self, count: int) -> Iterator[float]:
        _require_length(count, "count")
        alpha = self.exponent
        return (float(i) ** -alpha for i in range(1, count + 1))

    def label(self) -> str:
        return f"powertail:{format_exponent(self.exponent)}"


@dataclass(frozen=True)
class Geometric:
    """a_n = r**n with 0 < r < 1.

    Terms are produced by iterated multiplication and are only available
    while r**n stays inside the positive double range; ``max_length``
    gives that horizon (618 terms already for r = 0.3).  Requests past it
    raise a :class:`DomainError` instead of quietly emitting zeros or a
    stalled subnormal tail.
    """

    ratio: float
    summable = True

    def __post_init__(self):
        r = ensure_exponent(self.ratio, "ratio")
        if not (0.0 < r < 1.0):
            raise DomainError(f"geometric ratio must lie in (0, 1), got {r!r}")
        object.__setattr__(self, "ratio", r)

    def max_length(self) -> int:
        return int(math.floor(math.log(_TINY) / math.log(self.ratio)))

    def terms(self, count: int) -> Iterator[float]:
        _require_length(count, "count")
        if count > self.max_length():
            raise DomainError(
                f"geometric ratio {self.ratio} underflows after {self.max_length()} terms; "
                f"requested {count}"
            )

        def generate():
            x = 1.0
            for _ in range(count):
                x *= self.ratio
                yield x

        return generate()

    def label(self) -> str:
        return f"geometric:{format_exponent(self.ratio)}"


@dataclass(frozen=True)
class CustomTerms:
    """An explicit finite prefix.  There is no positive extension past it,
    so any request for more terms than given is a positivity violation."""

    values: tuple
    summable = True

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(check_positive_vector(self.values)))

    def terms(self, count: int) -> Iterator[float]:
        _require_length(count, "count")
        if count > len(self.values):
            raise DomainError(
                f"custom family has {len(self.values)} strictly positive terms; "
                f"term {len(self.values) + 1} would be zero"
            )
        return iter(self.values[:count])

    def label(self) -> str:
        return f"custom:{len(self.values)}"


SequenceFamily = Union[Harmonic, HarmonicTruncated, PowerTail, Geometric, CustomTerms]


def parse_family(text: str) -> SequenceFamily:
    """Parse a family spec: ``harmonic``, ``harmonic-truncated:<N0>``,
    ``powertail:<alpha>`` or ``geometric:<r>``."""
    kind, _, arg = text.strip().partition(":")
    kind = kind.lower()
    if kind == "harmonic" and not arg:
        return Harmonic()
    if kind == "harmonic-truncated":
        try:
            return HarmonicTruncated(int(arg))
        except ValueError:
            raise DomainError(f"harmonic-truncated needs an integer crossover, got {arg!r}")
    if kind == "powertail":
        return PowerTail(parse_exponent(arg, "powertail exponent"))
    if kind == "geometric":
        return Geometric(parse_exponent(arg, "geometric ratio"))
    raise DomainError(
        f"unknown family {text!r}; expected harmonic, harmonic-truncated:<N0>, "
        "powertail:<alpha> or geometric:<r>"
    )


# ---------------------------------------------------------------------------
# Mean specs: a plain float means the power mean of that order, a
# MeanParams triple means the subset-composed mean.

MeanLike = Union[float, int, MeanParams]


def parse_mean(text: str) -> MeanLike:
    """Parse ``power:<p>`` or ``cmn:<k>,<s>,<q>`` (inf/-inf tokens allowed)."""
    kind, _, arg = text.strip().partition(":")
    kind = kind.lower()
    if kind == "power":
        return parse_exponent(arg, "power-mean order")
    if kind == "cmn":
        parts = arg.split(",")
        if len(parts) != 3:
            raise DomainError(f"cmn mean needs three parameters k,s,q, got {arg!r}")
        try:
            k = int(parts[0])
        except ValueError:
            raise DomainError(f"k must be an integer, got {parts[0]!r}")
        return MeanParams(k, parse_exponent(parts[1], "s"), parse_exponent(parts[2], "q"))
    raise DomainError(f"unknown mean {text!r}; expected power:<p> or cmn:<k>,<s>,<q>")


def format_mean(mean: MeanLike) -> str:
    if isinstance(mean, MeanParams):
        return f"cmn:{mean.k},{format_exponent(mean.s)},{format_exponent(mean.q)}"
    return f"power:{format_exponent(ensure_exponent(mean, 'p'))}"


# ---------------------------------------------------------------------------
# Incremental prefix evaluators


class PowerMeanPrefix:
    """Running power mean P_p of everything pushed so far."""

    def __init__(self, p: float):
        self.p = ensure_exponent(p, "p")
        self._count = 0
        self._acc = KahanSum()
        self._extreme = None

    def push(self, a: float) -> float:
        self._count += 1
        n = self._count
        p = self.p
        if p == math.inf:
            self._extreme = a if self._extreme is None else max(self._extreme, a)
            return self._extreme
        if p == -math.inf:
            self._extreme = a if self._extreme is None else min(self._extreme, a)
            return self._extreme
        if abs(p) < ZERO_EXPONENT_THRESHOLD:
            self._acc.add(math.log(a))
            return a if n == 1 else math.exp(self._acc.value / n)
        term = math.pow(a, p)
        if not math.isfinite(term) or term <= 0.0:
            raise DomainError(
                f"a**p left the double range for a={a!r}, p={p!r}; "
                "the incremental evaluator needs representable powers"
            )
        self._acc.add(term)
        return a if n == 1 else (self._acc.value / n) ** (1.0 / p)


class PairGeometricMeanPrefix:
    """Running M_{2,1,0}: the average of sqrt(a_i a_j) over index pairs.

    Uses the identity (S**2 - T) / (n (n-1)) with S = sum sqrt(a_i) and
    T = sum a_i, both compensated, so each step costs O(1).
    """

    def __init__(self):
        self._count = 0
        self._sqrt_sum = KahanSum()
        self._sum = KahanSum()

    def push(self, a: float) -> float:
        self._count += 1
        self._sqrt_sum.add(math.sqrt(a))
        self._sum.add(a)
        n = self._count
        if n == 1:
            return a
        s = self._sqrt_sum.value
        value = (s * s - self._sum.value) / (n * (n - 1))
        if not value > 0.0:
            raise DomainError(
                "pairwise identity lost all significance (input dynamic range too extreme "
                "for the running-sum form)"
            )
        return value


class SymmetricFunctionPrefix:
    """Running M_{k,s,0} through the elementary-symmetric closed form.

    While fewer than k terms have arrived the mean is the plain geometric
    mean of the prefix (the k >= n branch of the definition with q = 0);
    afterwards it is (e_k(b)/C(n,k))**(1/s) with b_i = a_i**(s/k),
    maintained at O(k) per step in the log domain.
    """

    def __init__(self, k: int, s: float):
        if k < 2:
            raise DomainError(f"k must be >= 2, got {k}")
        s = ensure_exponent(s, "s")
        if not math.isfinite(s) or abs(s) < ZERO_EXPONENT_THRESHOLD:
            raise DomainError(f"the symmetric-function form needs finite nonzero s, got {s!r}")
        self.k = k
        self.s = s
        self._count = 0
        self._esp = LogElementarySymmetric(k)
        self._log_acc = KahanSum()

    def push(self, a: float) -> float:
        log_a = math.log(a)
        self._esp.push((self.s / self.k) * log_a)
        self._log_acc.add(log_a)
        self._count += 1
        n = self._count
        if n <= self.k:
            return a if n == 1 else math.exp(self._log_acc.value / n)
        log_ek = self._esp.log_esp(self.k)
        return math.exp((log_ek - math.log(math.comb(n, self.k))) / self.s)


class BufferedPrefix:
    """Fallback: keep the prefix and re-evaluate the mean at every step.

    Only viable for short experiments; the constructor budget guards
    against accidentally quadratic (or worse) runs.
    """

    def __init__(self, params: MeanParams, limit: int = 2000):
        self.params = params
        self.limit = limit
        self._buffer: list[float] = []

    def push(self, a: float) -> float:
        if len(self._buffer) >= self.limit:
            raise DomainError(
                f"no incremental form for {format_mean(self.params)}; the buffered "
                f"evaluator is capped at {self.limit} terms"
            )
        self._buffer.append(a)
        return cmn_mean_fast(self.params, self._buffer).value


def make_prefix_evaluator(mean: MeanLike, buffered_limit: int = 2000):
    """Build the cheapest incremental evaluator for the given mean."""
    if not isinstance(mean, MeanParams):
        return PowerMeanPrefix(ensure_exponent(mean, "p"))
    k, s, q = mean.k, mean.s, mean.q
    if k == 1:
        # Singleton subsets: every inner mean is the entry itself, so the
        # composed mean is the plain order-s power mean.
        return PowerMeanPrefix(s)
    if k == 2 and s == 1.0 and q == 0.0:
        return PairGeometricMeanPrefix()
    if s == q:
        return PowerMeanPrefix(q)
    if abs(q) < ZERO_EXPONENT_THRESHOLD and math.isfinite(s) and abs(s) >= ZERO_EXPONENT_THRESHOLD:
        return SymmetricFunctionPrefix(k, s)
    return BufferedPrefix(mean, buffered_limit)


# ---------------------------------------------------------------------------
# Partial-sum experiments


@dataclass(frozen=True)
class HardyEstimate:
    """Outcome of a truncated Hardy-constant experiment."""

    ratio: float
    n: int
    family: SequenceFamily
    mean: MeanLike
    mean_sum: float
    term_sum: float

    def as_row(self) -> tuple[str, str, int, float, float]:
        """Canonical table row (family, mean, N, sum of means, ratio)."""
        return (self.family.label(), format_mean(self.mean), self.n, self.mean_sum, self.ratio)


def default_checkpoints(n: int) -> list[int]:
    """Logarithmic checkpoint ladder 1, 2, 5, 10, ... capped by (and
    always including) n."""
    _require_length(n)
    points = {n}
    scale = 1
    while scale <= n:
        for lead in (1, 2, 5):
            if lead * scale <= n:
                points.add(lead * scale)
        scale *= 10
    return sorted(points)


def iter_hardy_checkpoints(
    mean: MeanLike,
    family: SequenceFamily,
    n: int,
    checkpoints: Sequence[int] | None = None,
    *,
    allow_nonsummable: bool = False,
) -> Iterator[tuple[int, float, float, float]]:
    """Yield (i, mean_sum, term_sum, ratio) at each checkpoint up to n.

    Terms are consumed in forward order with compensated running sums.
    Non-summable families are rejected unless explicitly allowed, since a
    ratio against a divergent norm estimates nothing.
    """
    _require_length(n)
    if not family.summable and not allow_nonsummable:
        raise DomainError(
            f"family {family.label()} is not summable; pass allow_nonsummable=True "
            "only for limit experiments"
        )
    if checkpoints is None:
        marks = default_checkpoints(n)
    else:
        marks = sorted(set(checkpoints))
        if not marks or marks[0] < 1 or marks[-1] > n:
            raise DomainError(f"checkpoints must lie in 1..{n}")
    evaluator = make_prefix_evaluator(mean)
    mean_sum = KahanSum()
    term_sum = KahanSum()
    marks_iter = iter(marks)
    next_mark = next(marks_iter)
    for i, a in enumerate(family.terms(n), start=1):
        if not (a > 0.0 and math.isfinite(a)):
            raise DomainError(f"family {family.label()} produced a non-positive term at index {i}")
        mean_sum.add(evaluator.push(a))
        term_sum.add(a)
        if i == next_mark:
            yield i, mean_sum.value, term_sum.value, mean_sum.value / term_sum.value
            next_mark = next(marks_iter, None)
            if next_mark is None:
                return


def hardy_partial_sum(
    mean: MeanLike,
    family: SequenceFamily,
    n: int,
    *,
    allow_nonsummable: bool = False,
) -> HardyEstimate:
    """Truncated Hardy ratio sum_{i<=n} A(a_1..a_i) / sum_{i<=n} a_i."""
    rows = list(
        iter_hardy_checkpoints(mean, family, n, [n], allow_nonsummable=allow_nonsummable)
    )
    i, mean_sum, term_sum, ratio = rows[-1]
    return HardyEstimate(ratio=ratio, n=i, family=family, mean=mean, mean_sum=mean_sum, term_sum=term_sum)


def landau_constant(p) -> float:
    """The sharp Hardy constant (1-p)**(-1/p) for the power mean P_p.

    Defined for 0 < p < 1.  Equals 4 at p = 1/2; tends to e (Carleman's
    constant) as p -> 0+ and diverges as p -> 1-.
    """
    p = ensure_exponent(p, "p")
    if not (math.isfinite(p) and 0.0 < p < 1.0):
        raise DomainError(f"the constant is defined for 0 < p < 1, got {p!r}")
    return (1.0 - p) ** (-1.0 / p)


def sharpness_sequence(n0: int, n: int) -> list[float]:
    """The witness prefix (1, 1/2, .., 1/n0, (n0+1)**-2, .., n**-2).

    A long harmonic head pushes the empirical constant of M_{2,1,0} toward
    4 while the inverse-square tail keeps the sequence summable; no
    constant below 4 survives all such sequences.
    """
    n0 = _require_length(n0, "n0")
    n = _require_length(n)
    if n0 > n:
        raise DomainError(f"need n0 <= n, got n0={n0}, n={n}")
    return list(HarmonicTruncated(n0).terms(n))


def sharpness_limit_experiment(n: int) -> float:
    """n * M_{2,1,0}(1, 1/2, ..., 1/n); increases to the limit 4."""
    return sharpness_limit_curve([n])[-1][1]


def sharpness_limit_curve(checkpoints: Sequence[int]) -> list[tuple[int, float]]:
    """The limit experiment at several truncations in one forward pass."""
    marks = sorted(set(checkpoints))
    if not marks or marks[0] < 2:
        raise DomainError("checkpoints must be integers >= 2")
    for m in marks:
        _require_length(m, "checkpoint")
    evaluator = PairGeometricMeanPrefix()
    out = []
    marks_iter = iter(marks)
    next_mark = next(marks_iter)
    for i in range(1, marks[-1] + 1):
        value = evaluator.push(1.0 / i)
        if i == next_mark:
            out.append((i, i * value))
            next_mark = next(marks_iter, None)
    return out


def sharpness_constant_sweep(
    mean: MeanLike,
    n: int,
    n0_values: Sequence[int] | None = None,
) -> list[HardyEstimate]:
    """Hardy ratios over the witness family for a ladder of crossovers.

    The default ladder is the powers of ten up to n plus n itself (a pure
    harmonic prefix).  The maximum ratio over the sweep is the empirical
    lower estimate of the best possible Hardy constant.
    """
    _require_length(n)
    if n0_values is None:
        n0_values = []
        scale = 10
        while scale < n:
            n0_values.append(scale)
            scale *= 10
        n0_values.append(n)
    estimates = []
    for n0 in sorted(set(n0_values)):
        estimates.append(hardy_partial_sum(mean, HarmonicTruncated(_require_length(n0, "n0")), n))
    return estimates
