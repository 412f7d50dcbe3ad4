"""Dyadic block index sets on the integer lattice.

A block index is a vector ``s`` of positive integers; the block it names is
the set of frequencies ``k`` with ``2**(s_j-1) <= |k_j| < 2**s_j`` in every
coordinate.  Step hyperbolic crosses, even-shell index sets, and the weighted
tail sums used by the rate predictions are all built from these blocks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Iterable, Iterator, Sequence

MAX_CROSS_LEVEL = 40  # frequencies stay well inside int64

GAMMA_MODES = ("gamma", "gamma-prime", "ones")


class TailTruncationError(RuntimeError):
    """Raised when a weighted tail sum cannot reach the target accuracy."""

    def __init__(self, message: str, partial: float):
        super().__init__(message)
        self.partial = partial


@dataclass(frozen=True)
class SmoothParams:
    """Smoothness vector with its derived scaling vectors.

    ``r`` must be nondecreasing with positive entries.  ``nu`` counts the
    coordinates attaining the minimal value ``r[0]``; ``gamma = r / r[0]``;
    ``gamma_prime`` equals 1 on minimal coordinates and sits strictly between
    1 and ``gamma_j`` elsewhere (midpoint by default, overridable).
    """

    r: tuple[float, ...]
    gamma_prime: tuple[float, ...] = field(default=())

    def __init__(self, r: Sequence[float], gamma_prime: Sequence[float] | None = None):
        r = tuple(float(x) for x in r)
        if len(r) == 0:
            raise ValueError("SmoothParams ordering: r must be nonempty")
        if r[0] <= 0 or any(a > b for a, b in zip(r, r[1:])):
            raise ValueError("SmoothParams ordering: r must be positive and nondecreasing")
        nu = sum(1 for x in r if x == r[0])
        gamma = tuple(x / r[0] for x in r)
        if gamma_prime is None:
            gamma_prime = tuple(1.0 if j < nu else (1.0 + gamma[j]) / 2.0 for j in range(len(r)))
        else:
            gamma_prime = tuple(float(x) for x in gamma_prime)
            if len(gamma_prime) != len(r):
                raise ValueError("gamma_prime dimension mismatch")
            for j, gp in enumerate(gamma_prime):
                if j < nu and gp != 1.0:
                    raise ValueError("gamma_prime must equal 1 on minimal coordinates")
                if j >= nu and not (1.0 < gp < gamma[j]):
                    raise ValueError("gamma_prime must lie strictly between 1 and gamma")
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "gamma_prime", gamma_prime)

    @property
    def d(self) -> int:
        return len(self.r)

    @property
    def r1(self) -> float:
        return self.r[0]

    @property
    def nu(self) -> int:
        return sum(1 for x in self.r if x == self.r[0])

    @property
    def gamma(self) -> tuple[float, ...]:
        return tuple(x / self.r[0] for x in self.r)

    def gamma_for(self, mode: str) -> tuple[float, ...]:
        if mode == "gamma":
            return self.gamma
        if mode == "gamma-prime":
            return self.gamma_prime
        if mode == "ones":
            return (1.0,) * self.d
        raise ValueError(f"unknown gamma mode {mode!r}; expected one of {GAMMA_MODES}")


def block_of(k: Sequence[int]) -> tuple[int, ...] | None:
    """Block index containing frequency ``k``, or None if any component is 0."""
    s = []
    for kj in k:
        if kj == 0:
            return None
        s.append(abs(int(kj)).bit_length())
    return tuple(s)


def dyadic_block(s: Sequence[int]) -> frozenset[tuple[int, ...]]:
    """All frequencies k with 2**(s_j-1) <= |k_j| < 2**s_j per coordinate."""
    s = tuple(int(x) for x in s)
    if any(sj < 1 for sj in s):
        raise ValueError("block index components must be >= 1")
    ranges = []
    for sj in s:
        lo, hi = 2 ** (sj - 1), 2**sj
        ranges.append(tuple(range(-hi + 1, -lo + 1)) + tuple(range(lo, hi)))
    return frozenset(product(*ranges))


def block_cardinality(s: Sequence[int]) -> int:
    return 2 ** sum(int(x) for x in s)


def compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """Ordered tuples of ``parts`` positive integers summing to ``total``."""
    if parts < 1 or total < parts:
        return
    for bars in combinations(range(1, total), parts - 1):
        prev = 0
        out = []
        for b in bars:
            out.append(b - prev)
            prev = b
        out.append(total - prev)
        yield tuple(out)


@dataclass(frozen=True)
class BlockIndexSet:
    """A finite set of block indices plus bookkeeping about its frequency set."""

    blocks: tuple[tuple[int, ...], ...]
    d: int
    n: float | None = None
    gamma_mode: str | None = None

    def __post_init__(self):
        seen = set(self.blocks)
        if len(seen) != len(self.blocks):
            raise ValueError("duplicate blocks")
        object.__setattr__(self, "_lookup", seen)

    @property
    def freq_count(self) -> int:
        return sum(block_cardinality(s) for s in self.blocks)

    def __len__(self) -> int:
        return len(self.blocks)

    def __iter__(self) -> Iterator[tuple[int, ...]]:
        return iter(self.blocks)

    def __contains__(self, s) -> bool:
        return tuple(s) in self._lookup

    def contains_freq(self, k: Sequence[int]) -> bool:
        s = block_of(k)
        return s is not None and s in self._lookup

    def frequencies(self) -> Iterator[tuple[int, ...]]:
        for s in self.blocks:
            yield from sorted(dyadic_block(s))


def hyperbolic_cross(n: float, params: SmoothParams, gamma_mode: str = "gamma") -> BlockIndexSet:
    """Step hyperbolic cross: all blocks s with (s, gamma*) < n.

    Returns an empty set (not an error) when no block qualifies.
    """
    if n > MAX_CROSS_LEVEL:
        raise ValueError(f"cross level n={n} exceeds cap {MAX_CROSS_LEVEL}")
    gamma = params.gamma_for(gamma_mode)
    d = params.d
    out: list[tuple[int, ...]] = []

    def rec(coord: int, acc: list[int], partial: float):
        if coord == d:
            out.append(tuple(acc))
            return
        tail_min = sum(gamma[coord + 1 :])
        sj = 1
        while partial + gamma[coord] * sj + tail_min < n:
            acc.append(sj)
            rec(coord + 1, acc, partial + gamma[coord] * sj)
            acc.pop()
            sj += 1

    rec(0, [], 0.0)
    return BlockIndexSet(tuple(out), d, n=float(n), gamma_mode=gamma_mode)


def even_shell(n: int, d: int) -> tuple[tuple[int, ...], ...]:
    """All blocks with every component even, >= 2, summing to ``n``."""
    if n % 2 != 0:
        raise ValueError("shell level must be even")
    if n < 2 * d:
        return ()
    return tuple(tuple(2 * c for c in comp) for comp in compositions(n // 2, d))


def block_anchor(s: Sequence[int]) -> tuple[int, ...]:
    """The frequency 2**(s_j-1) + 2**(s_j-2) used to re-center a block's rectangle."""
    s = tuple(int(x) for x in s)
    if any(sj < 2 for sj in s):
        raise ValueError("block anchor needs all components >= 2")
    return tuple(2 ** (sj - 1) + 2 ** (sj - 2) for sj in s)


TAIL_MODES = ("gamma-on-gamma", "gamma-prime-on-gamma")


def _tail_remainder_bound(m: int, d: int, alpha: float) -> float:
    """Upper bound for sum over (s,1) > m of 2**(-alpha*(s,1))."""
    x = 2.0**-alpha
    q = x * ((m + 2) / (m + 1)) ** (d - 1)
    if q >= 1.0:
        return math.inf
    return (m + 1) ** (d - 1) * x ** (m + 1) / (1.0 - q)


def weighted_tail_sum(
    alpha: float,
    params: SmoothParams,
    l: float,
    mode: str = "gamma-on-gamma",
    rel_tol: float = 1e-12,
    max_shell: int = 600,
) -> tuple[float, float]:
    """Sum of 2**(-alpha*(s,gamma)) over blocks outside a cross boundary.

    The constraint is (s, gamma) >= l in ``gamma-on-gamma`` mode and
    (s, gamma') >= l in ``gamma-prime-on-gamma`` mode; the weight always uses
    gamma.  Enumerates shells (s,1)=m until the remaining tail is provably
    below ``rel_tol`` of the accumulated value, then returns out
    ``(value, value / (2**(-alpha*l) * l**(m-1)))`` with m = d resp. nu.

    Raises TailTruncationError if the shell budget is exhausted first.
    """
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    if mode not in TAIL_MODES:
        raise ValueError(f"unknown tail mode {mode!r}; expected one of {TAIL_MODES}")
    gamma = params.gamma
    gamma_star = gamma if mode == "gamma-on-gamma" else params.gamma_prime
    d = params.d
    value = 0.0
    m = d
    while True:
        for comp in compositions(m, d):
            if sum(c * g for c, g in zip(comp, gamma_star)) >= l:
                value += 2.0 ** (-alpha * sum(c * g for c, g in zip(comp, gamma)))
        bound = _tail_remainder_bound(m, d, alpha)
        if value > 0.0 and bound < rel_tol * value:
            break
        if m >= max_shell:
            raise TailTruncationError(
                f"tail sum not converged after shell {m} (bound {bound:.3e})", partial=value
            )
        m += 1
    power = d if mode == "gamma-on-gamma" else params.nu
    ratio = value / (2.0 ** (-alpha * l) * l ** (power - 1))
    return value, ratio


def weighted_tail_sums(
    alpha: float,
    params: SmoothParams,
    ls: Sequence[float],
    mode: str = "gamma-on-gamma",
    rel_tol: float = 1e-12,
    max_shell: int = 600,
) -> list[tuple[float, float]]:
    """Vector version of ``weighted_tail_sum`` sharing one shell enumeration."""
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    if mode not in TAIL_MODES:
        raise ValueError(f"unknown tail mode {mode!r}; expected one of {TAIL_MODES}")
    gamma = params.gamma
    gamma_star = gamma if mode == "gamma-on-gamma" else params.gamma_prime
    d = params.d
    ls = [float(l) for l in ls]
    values = [0.0] * len(ls)
    m = d
    while True:
        for comp in compositions(m, d):
            g_star = sum(c * g for c, g in zip(comp, gamma_star))
            w = 2.0 ** (-alpha * sum(c * g for c, g in zip(comp, gamma)))
            for i, l in enumerate(ls):
                if g_star >= l:
                    values[i] += w
        bound = _tail_remainder_bound(m, d, alpha)
        if all(v > 0.0 for v in values) and bound < rel_tol * min(values):
            break
        if m >= max_shell:
            raise TailTruncationError(
                f"tail sums not converged after shell {m} (bound {bound:.3e})",
                partial=min(values),
            )
        m += 1
    power = d if mode == "gamma-on-gamma" else params.nu
    return [
        (v, v / (2.0 ** (-alpha * l) * l ** (power - 1))) for v, l in zip(values, ls)
    ]


def write_blocks(path, blockset: BlockIndexSet | Iterable[Sequence[int]]) -> None:
    """One block per line, components space separated, lexicographic order."""
    blocks = sorted(tuple(int(x) for x in s) for s in blockset)
    with open(path, "w") as fh:
        for s in blocks:
            fh.write(" ".join(str(x) for x in s) + "\n")


def read_blocks(path) -> tuple[tuple[int, ...], ...]:
    out = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if line:
                out.append(tuple(int(tok) for tok in line.split()))
    return tuple(out)
