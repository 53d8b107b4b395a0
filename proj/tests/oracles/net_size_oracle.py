#!/usr/bin/env python3
"""Independent oracle for the sample-complexity threshold N(k, epsilon).

Finds the least N >= 1 such that, with delta = epsilon/2,

    (1)  1/(N * epsilon^2) < 1 - delta
    (2)  4 * (sum_{i=0}^{k} C(N, i)) * exp(-N * delta^2 / 8) < delta

using exact rational arithmetic throughout.  The exp comparison is decided
by certified Taylor bounds: exp(q) > R is accepted once a partial sum
exceeds R, and rejected once partial + tail-bound <= R (tail bounded by a
geometric series, valid for j >= 2q).

The threshold set is upward closed for N > 8*k^2/delta^2: inequality (1)
is monotone and the left side of (2) shrinks by the exact factor
(1 + S_{k-1}(N)/S_k(N)) * exp(-delta^2/8) < 1 there.  We locate the
crossing with a float estimate, then verify a +-window around it with the
exact predicate, and additionally check that the window start lies above
the monotonicity bound and exactly fails.

Run:  python3 net_size_oracle.py
Output: one line per (k, epsilon) grid point, machine-readable.
"""

from fractions import Fraction
from math import comb, exp, log
import sys


def exp_gt(q: Fraction, r: Fraction) -> bool:
    """Certified decision of exp(q) > r for rationals q > 0, r > 0."""
    assert q > 0 and r > 0
    partial = Fraction(1)
    term = Fraction(1)
    j = 0
    while True:
        if partial > r:
            return True
        j += 1
        term = term * q / j
        partial += term
        # Tail after term j is < 2 * term_{j+1} once the ratio q/(j+2) <= 1/2.
        if j >= 2 * q:
            next_term = term * q / (j + 1)
            if partial + 2 * next_term <= r:
                return False


def binom_prefix_sum(n: int, k: int) -> int:
    return sum(comb(n, i) for i in range(0, k + 1))


def holds_exact(n: int, k: int, eps: Fraction) -> bool:
    delta = eps / 2
    # (1) 1/(N eps^2) < 1 - delta
    if not (Fraction(1) < n * eps * eps * (1 - delta)):
        return False
    # (2) 4 * S * exp(-q) < delta  <=>  exp(q) > 4 S / delta
    q = n * delta * delta / 8
    s = binom_prefix_sum(n, k)
    return exp_gt(q, Fraction(4) * s / delta)


def float_estimate(k: int, eps: float) -> int:
    delta = eps / 2

    def ok(n: int) -> bool:
        lhs_log = log(4.0) + log(binom_prefix_sum(n, k)) - n * delta * delta / 8
        return 1.0 / (n * eps * eps) < 1 - delta and lhs_log < log(delta)

    hi = 1
    while not ok(hi):
        hi *= 2
    lo = hi // 2
    while lo + 1 < hi:
        mid = (lo + hi) // 2
        if ok(mid):
            hi = mid
        else:
            lo = mid
    return hi


def least_n(k: int, eps: Fraction, window: int = 64) -> int:
    est = float_estimate(k, float(eps))
    delta = eps / 2
    mono_bound = Fraction(8 * k * k) / (delta * delta)
    lo = max(1, est - window)
    assert Fraction(lo) > mono_bound or lo == 1, (
        f"window start {lo} below monotonicity bound {float(mono_bound)}"
    )
    if lo > 1:
        assert not holds_exact(lo, k, eps), f"predicate already true at window start {lo}"
    first = None
    for n in range(lo, est + window + 1):
        h = holds_exact(n, k, eps)
        if first is None and h:
            first = n
        if first is not None:
            assert h, f"predicate not upward closed at {n} (first true {first})"
    assert first is not None, f"no crossing inside window around {est}"
    assert not holds_exact(first - 1, k, eps)
    return first


def main() -> None:
    grid_k = [1, 2, 3]
    grid_eps = [Fraction(1, 2), Fraction(1, 4), Fraction(1, 10)]
    for k in grid_k:
        for eps in grid_eps:
            n = least_n(k, eps)
            print(f"k={k} eps={eps} N={n}")
            sys.stdout.flush()


if __name__ == "__main__":
    main()
