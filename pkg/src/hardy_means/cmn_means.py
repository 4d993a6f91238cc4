"""Subset-composed power means M_{k,s,q} (Carlson-Meany-Nelson means).

For a positive vector v of length n and parameters (k, s, q):

    k <  n:  the power mean of order s of the values P_q(v_A), where A
             ranges over all k-element subsets of {1..n},
    k >= n:  P_q(v) itself.

Three evaluators are provided.  ``cmn_mean_naive`` enumerates every
subset (the oracle; refuses beyond a fixed budget).  ``cmn_mean_fast``
dispatches to closed forms where they exist, most notably

    M_{k,s,0}(v) = ( e_k(b) / C(n,k) ) ** (1/s),   b_i = v_i ** (s/k),

with e_k the k-th elementary symmetric polynomial evaluated by the O(n*k)
recurrence in the log domain.  ``cmn_mean_sampled`` is a Monte Carlo
estimator over uniform random k-subsets for inputs beyond the enumeration
budget.

The comparison helpers at the bottom turn the family's monotonicity
inequalities (in the inner/outer exponents and in the subset size k) and
the pairwise-mean identity

    M_{2,1,0}(v) = n/(n-1) * ( P_{1/2}(v) - P_1(v)/n )

into executable checks.
"""

from __future__ import annotations

import enum
import itertools
import math
import random
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from ._parallel import map_ordered
from .errors import CapacityError, DomainError
from .extreal import ensure_exponent
from .power_means import ZERO_EXPONENT_THRESHOLD, check_positive_vector, power_mean

__all__ = [
    "MAX_ENUMERATION_N",
    "MAX_ENUMERATION_SUBSETS",
    "MIN_SAMPLES",
    "MeanParams",
    "EvalMethod",
    "CmnEvalReport",
    "subset_log_means",
    "power_mean_of_logs",
    "cmn_mean_naive",
    "cmn_mean_fast",
    "cmn_mean_sampled",
    "check_qs_monotonicity",
    "check_k_monotonicity",
    "theorem1_identity_check",
    "LogElementarySymmetric",
]

# Enumeration refuses beyond this many subsets (2**22) or entries; the
# worst admissible case stays comfortably interactive and anything larger
# belongs to the closed-form or Monte Carlo paths.
MAX_ENUMERATION_N = 30
MAX_ENUMERATION_SUBSETS = 1 << 22

MIN_SAMPLES = 100

_NEG_INF = float("-inf")
_CHUNK_ROWS = 65536
_SAMPLE_BLOCK = 8192
# Distinct (seed, block) pairs must map to distinct PRNG states; a prime
# stride larger than 2**32 keeps the mapping injective for any block count
# a sane sample budget can produce.
_SEED_STRIDE = 4294967311


@dataclass(frozen=True)
class MeanParams:
    """Parameter triple (k, s, q) of a subset-composed mean."""

    k: int
    s: float
    q: float

    def __post_init__(self):
        if isinstance(self.k, bool) or not isinstance(self.k, int):
            raise DomainError(f"k must be an integer, got {self.k!r}")
        if self.k < 1:
            raise DomainError(f"k must be >= 1, got {self.k}")
        object.__setattr__(self, "s", ensure_exponent(self.s, "s"))
        object.__setattr__(self, "q", ensure_exponent(self.q, "q"))


class EvalMethod(enum.Enum):
    EXACT = "Exact"
    FAST_SYMMETRIC = "FastSymmetric"
    DEGENERATE = "Degenerate"
    MONTE_CARLO = "MonteCarlo"


@dataclass(frozen=True)
class CmnEvalReport:
    """Evaluation result plus how it was obtained.

    ``samples`` and ``stderr_estimate`` are present exactly when the value
    came from the Monte Carlo estimator.
    """

    value: float
    method: EvalMethod
    samples: int | None = None
    stderr_estimate: float | None = None
    note: str | None = None

    def __post_init__(self):
        if not (self.value > 0.0):
            raise DomainError(f"mean value must be positive, got {self.value!r}")
        is_mc = self.method is EvalMethod.MONTE_CARLO
        if is_mc != (self.stderr_estimate is not None) or is_mc != (self.samples is not None):
            raise DomainError("samples/stderr_estimate are reported iff method is MonteCarlo")
        if self.stderr_estimate is not None and not self.stderr_estimate >= 0.0:
            raise DomainError("stderr_estimate must be nonnegative")


def _is_zero_exponent(p: float) -> bool:
    return abs(p) < ZERO_EXPONENT_THRESHOLD


def _ensure_enumerable(n: int, k: int) -> int:
    if n > MAX_ENUMERATION_N:
        raise CapacityError(
            f"refusing to enumerate subsets of an n={n} vector (limit {MAX_ENUMERATION_N}); "
            "use the fast path or the Monte Carlo sampler"
        )
    count = math.comb(n, k)
    if count > MAX_ENUMERATION_SUBSETS:
        raise CapacityError(
            f"C({n},{k}) = {count} exceeds the enumeration budget of {MAX_ENUMERATION_SUBSETS}; "
            "use the fast path or the Monte Carlo sampler"
        )
    return count


def _iter_subset_index_chunks(n: int, k: int, chunk_rows: int = _CHUNK_ROWS) -> Iterator[np.ndarray]:
    """Stream (m, k) index arrays covering all k-subsets in lexicographic order."""
    combos = itertools.combinations(range(n), k)
    while True:
        flat = np.fromiter(
            itertools.chain.from_iterable(itertools.islice(combos, chunk_rows)),
            dtype=np.intp,
        )
        if flat.size == 0:
            return
        yield flat.reshape(-1, k)


def _log_power_mean_rows(q: float, log_rows: np.ndarray) -> np.ndarray:
    """log P_q along axis 1 of an (m, k) array of log-values."""
    k = log_rows.shape[1]
    if q == math.inf:
        return log_rows.max(axis=1)
    if q == -math.inf:
        return log_rows.min(axis=1)
    if _is_zero_exponent(q):
        return log_rows.mean(axis=1)
    z = q * log_rows
    zmax = z.max(axis=1)
    total = np.exp(z - zmax[:, None]).sum(axis=1)
    return (zmax + np.log(total) - math.log(k)) / q


def power_mean_of_logs(s: float, log_values: np.ndarray) -> float:
    """Power mean of order ``s`` of exp(log_values), computed from the logs.

    Accuracy degrades as |s| approaches the geometric switch point
    (exponents below 1e-12 collapse to the geometric branch), which is far
    outside the exponent grids used anywhere in the package.
    """
    s = ensure_exponent(s, "s")
    logs = np.asarray(log_values, dtype=np.float64)
    if logs.size == 0:
        raise DomainError("cannot average an empty collection of subset means")
    if s == math.inf:
        return float(np.exp(logs.max()))
    if s == -math.inf:
        return float(np.exp(logs.min()))
    if _is_zero_exponent(s):
        return float(np.exp(logs.mean()))
    z = s * logs
    zmax = float(z.max())
    total = float(np.exp(z - zmax).sum())
    return float(np.exp((zmax + math.log(total) - math.log(logs.size)) / s))


def subset_log_means(values, k: int, q: float) -> np.ndarray:
    """log P_q over every k-subset of the (sorted) input vector.

    Subsets are visited in lexicographic index order, so the output is a
    deterministic function of the input multiset.  Raises
    :class:`CapacityError` beyond the enumeration budget.
    """
    vals = check_positive_vector(values)
    n = len(vals)
    if not (1 <= k < n):
        raise DomainError(f"subset size k={k} must satisfy 1 <= k < n={n}")
    q = ensure_exponent(q, "q")
    total = _ensure_enumerable(n, k)
    logs = np.log(np.sort(np.asarray(vals, dtype=np.float64)))
    rows = map_ordered(
        lambda idx: _log_power_mean_rows(q, logs[idx]),
        _iter_subset_index_chunks(n, k),
        threads=1 if total <= _CHUNK_ROWS else None,
    )
    return np.concatenate(rows)


def cmn_mean_naive(params: MeanParams, values) -> float:
    """Oracle evaluation of M_{k,s,q} by full subset enumeration.

    Falls back to the plain power mean P_q when k >= n, per the
    definition.  Refuses inputs beyond the enumeration budget with a
    :class:`CapacityError`.
    """
    vals = check_positive_vector(values)
    if params.k >= len(vals):
        return power_mean(params.q, vals)
    return power_mean_of_logs(params.s, subset_log_means(vals, params.k, params.q))


# ---------------------------------------------------------------------------
# Fast paths


class LogElementarySymmetric:
    """Running elementary symmetric polynomials, carried in the log domain.

    After pushing log(b_1) .. log(b_m), ``log_esp(j)`` is log(e_j(b_1..b_m))
    for j = 0..order.  The update is the classic recurrence
    e_j <- e_j + b_i * e_{j-1}, done with logaddexp so that neither huge
    binomial counts (e_k overflows doubles near n = 400 already for modest
    entries) nor extreme term magnitudes leave the representable range.
    """

    __slots__ = ("order", "count", "_row")

    def __init__(self, order: int):
        if order < 1:
            raise DomainError(f"order must be >= 1, got {order}")
        self.order = order
        self.count = 0
        self._row = [0.0] + [_NEG_INF] * order

    def push(self, log_term: float) -> None:
        row = self._row
        log1p = math.log1p
        exp = math.exp
        for j in range(min(self.count + 1, self.order), 0, -1):
            prev = row[j - 1]
            if prev == _NEG_INF:
                continue
            a = row[j]
            b = log_term + prev
            if a < b:
                a, b = b, a
            row[j] = a if b == _NEG_INF else a + log1p(exp(b - a))
        self.count += 1

    def log_esp(self, j: int) -> float:
        if not 0 <= j <= self.order:
            raise DomainError(f"esp order {j} outside tracked range 0..{self.order}")
        return self._row[j]


def _log_elementary_symmetric(log_terms: Sequence[float], k: int) -> float:
    """log e_k of the terms exp(log_terms); requires len(log_terms) >= k."""
    if len(log_terms) < k:
        raise DomainError(f"e_{k} of {len(log_terms)} terms is zero; need at least k terms")
    acc = LogElementarySymmetric(k)
    for lb in log_terms:
        acc.push(lb)
    return acc.log_esp(k)


def _fast_symmetric_value(vals: list[float], k: int, s: float) -> float:
    n = len(vals)
    logs = np.log(np.sort(np.asarray(vals, dtype=np.float64)))
    log_b = ((s / k) * logs).tolist()
    log_ek = _log_elementary_symmetric(log_b, k)
    return math.exp((log_ek - math.log(math.comb(n, k))) / s)


def cmn_mean_fast(params: MeanParams, values) -> CmnEvalReport:
    """Evaluate M_{k,s,q} through the cheapest applicable route.

    Dispatch order: (a) k >= n collapses to P_q; (b) s == q collapses to
    P_q (averaging order-q means of fixed-size subsets with the same outer
    order reproduces P_q exactly); (c) q == 0 with finite nonzero s uses
    the elementary-symmetric closed form, any sign of s; (d) everything
    else enumerates, raising :class:`CapacityError` past the budget, at
    which point the Monte Carlo sampler is the intended fallback.
    """
    vals = check_positive_vector(values)
    n = len(vals)
    k, s, q = params.k, params.s, params.q
    if k >= n:
        return CmnEvalReport(power_mean(q, vals), EvalMethod.DEGENERATE)
    if s == q:
        return CmnEvalReport(power_mean(q, vals), EvalMethod.DEGENERATE)
    if _is_zero_exponent(q) and math.isfinite(s) and not _is_zero_exponent(s):
        return CmnEvalReport(_fast_symmetric_value(vals, k, s), EvalMethod.FAST_SYMMETRIC)
    return CmnEvalReport(cmn_mean_naive(params, vals), EvalMethod.EXACT)


# ---------------------------------------------------------------------------
# Monte Carlo estimator


def _floyd_sample(rng: random.Random, n: int, k: int) -> list[int]:
    """Uniform k-subset of range(n) in O(k) draws (Floyd's algorithm)."""
    chosen: set[int] = set()
    for j in range(n - k, n):
        t = rng.randrange(j + 1)
        chosen.add(j if t in chosen else t)
    return sorted(chosen)


def _sample_block(logs: np.ndarray, k: int, q: float, seed: int, block_index: int, size: int) -> np.ndarray:
    rng = random.Random(seed * _SEED_STRIDE + block_index)
    n = logs.size
    idx = np.empty((size, k), dtype=np.intp)
    for row in range(size):
        idx[row] = _floyd_sample(rng, n, k)
    return _log_power_mean_rows(q, logs[idx])


def _jackknife_aggregate(s: float, log_means: np.ndarray) -> tuple[float, float]:
    """Value and leave-one-out jackknife standard error of the estimator.

    The estimator is the order-s power mean of the sampled subset means;
    the jackknife is taken over individual samples of its s-th-power
    aggregate and reported on the value scale.
    """
    m = log_means.size
    if np.all(log_means == log_means[0]):
        # identical samples: zero spread, and float centering noise must
        # not manufacture a phantom standard error
        return math.exp(float(log_means[0])), 0.0
    if _is_zero_exponent(s):
        total = float(log_means.sum())
        value = math.exp(total / m)
        estimates = np.exp((total - log_means) / (m - 1))
    else:
        u = s * log_means
        umax = float(u.max())
        w = np.exp(u - umax)
        total = float(w.sum())
        value = math.exp((umax + math.log(total / m)) / s)
        with np.errstate(divide="ignore"):
            estimates = np.exp((umax + np.log((total - w) / (m - 1))) / s)
    centered = estimates - estimates.mean()
    se = math.sqrt((m - 1) / m * float((centered * centered).sum()))
    return value, se


def cmn_mean_sampled(params: MeanParams, values, samples: int, seed: int) -> CmnEvalReport:
    """Monte Carlo estimate of M_{k,s,q} from uniform random k-subsets.

    Subsets are drawn with Floyd's algorithm (no repetition inside a
    subset; distinct draws may repeat).  The result is deterministic for a
    fixed seed and independent of the thread count, because samples are
    generated in fixed-size blocks with per-block derived seeds and
    reduced in block order.
    """
    vals = check_positive_vector(values)
    n = len(vals)
    k, s, q = params.k, params.s, params.q
    if isinstance(samples, bool) or not isinstance(samples, int):
        raise DomainError(f"samples must be an integer, got {samples!r}")
    if samples < MIN_SAMPLES:
        raise DomainError(f"samples must be >= {MIN_SAMPLES}, got {samples}")
    if isinstance(seed, bool) or not isinstance(seed, int):
        raise DomainError(f"seed must be an integer, got {seed!r}")
    if k >= n:
        raise DomainError(f"sampling needs k < n, got k={k}, n={n}")
    if min(vals) == max(vals):
        # every subset mean equals the common entry; exact, no draws needed
        return CmnEvalReport(
            vals[0], EvalMethod.MONTE_CARLO, samples=samples, stderr_estimate=0.0
        )

    logs = np.log(np.sort(np.asarray(vals, dtype=np.float64)))
    blocks = [
        (b, min(_SAMPLE_BLOCK, samples - b * _SAMPLE_BLOCK))
        for b in range((samples + _SAMPLE_BLOCK - 1) // _SAMPLE_BLOCK)
    ]
    rows = map_ordered(
        lambda spec: _sample_block(logs, k, q, seed, spec[0], spec[1]),
        blocks,
        threads=1 if len(blocks) == 1 else None,
    )
    log_means = np.concatenate(rows)

    if s == math.inf or s == -math.inf:
        extremum = float(log_means.max() if s == math.inf else log_means.min())
        return CmnEvalReport(
            math.exp(extremum),
            EvalMethod.MONTE_CARLO,
            samples=samples,
            stderr_estimate=0.0,
            note="infinite outer exponent: value is the extremum of the sampled "
            "subset means and no standard error is estimable",
        )
    value, se = _jackknife_aggregate(s, log_means)
    return CmnEvalReport(value, EvalMethod.MONTE_CARLO, samples=samples, stderr_estimate=se)


# ---------------------------------------------------------------------------
# Inequalities and identities as executable checks

# Strict inequalities in exact arithmetic become non-strict under float
# noise; every boolean check uses this slack.
def _tolerance(x: float) -> float:
    return max(1e-10 * abs(x), 1e-300)


def check_qs_monotonicity(k: int, s, t, q, p, values) -> bool:
    """Check M_{k,s,q}(v) <= M_{k,t,p}(v) for q <= p and s <= t."""
    s = ensure_exponent(s, "s")
    t = ensure_exponent(t, "t")
    q = ensure_exponent(q, "q")
    p = ensure_exponent(p, "p")
    if q > p or s > t:
        raise DomainError(f"monotonicity requires q <= p and s <= t, got q={q}, p={p}, s={s}, t={t}")
    lhs = cmn_mean_fast(MeanParams(k, s, q), values).value
    rhs = cmn_mean_fast(MeanParams(k, t, p), values).value
    return lhs <= rhs + _tolerance(rhs)


def check_k_monotonicity(k: int, s, q, values) -> bool:
    """Check M_{k,s,q}(v) <= M_{k-1,s,q}(v) for s > q and 2 <= k <= n."""
    s = ensure_exponent(s, "s")
    q = ensure_exponent(q, "q")
    if not s > q:
        raise DomainError(f"subset-size monotonicity requires s > q, got s={s}, q={q}")
    vals = check_positive_vector(values)
    if not 2 <= k <= len(vals):
        raise DomainError(f"k={k} must satisfy 2 <= k <= n={len(vals)}")
    lhs = cmn_mean_fast(MeanParams(k, s, q), vals).value
    rhs = cmn_mean_fast(MeanParams(k - 1, s, q), vals).value
    return lhs <= rhs + _tolerance(rhs)


def theorem1_identity_check(values) -> bool:
    """Verify the pairwise-mean identity and its majorization consequence.

    Checks, to 1e-11 relative, that the mean of sqrt(a_i a_j) over pairs
    equals n/(n-1) * (P_{1/2}(v) - P_1(v)/n), and that it never exceeds
    P_{1/2}(v).
    """
    vals = check_positive_vector(values)
    n = len(vals)
    if n < 2:
        raise DomainError(f"the pairwise identity needs n >= 2, got n={n}")
    lhs = cmn_mean_fast(MeanParams(2, 1.0, 0.0), vals).value
    p_half = power_mean(0.5, vals)
    p_one = power_mean(1.0, vals)
    rhs = n / (n - 1) * (p_half - p_one / n)
    identity_ok = abs(lhs - rhs) <= 1e-11 * lhs
    majorized = lhs <= p_half + _tolerance(p_half)
    return identity_ok and majorized
