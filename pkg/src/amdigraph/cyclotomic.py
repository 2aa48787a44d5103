"""Cyclotomic polynomials, chain compositions, and Ramanujan sums.

The central object downstream is F_{i,k} = Phi_i(1 + x + ... + x^k), whose
irreducibility pattern drives the nonexistence arguments, together with the
power sums S_ell(Phi_n) = sum of ell-th powers of the primitive n-th roots of
unity (Ramanujan sums) that feed the trace system.
"""
from __future__ import annotations

from math import gcd
from threading import Lock

from .algebra import IntPoly, divisors, euler_phi, mobius, poly_compose, poly_divexact


class CyclotomicCache:
    """Write-once cache of cyclotomic polynomials Phi_i.

    Phi_i is computed as (x^i - 1) / prod_{d | i, d < i} Phi_d by exact
    integer division; insertion is idempotent, so concurrent fills are safe.
    """

    def __init__(self):
        self._table: dict[int, IntPoly] = {1: IntPoly((-1, 1))}
        self._lock = Lock()

    def get(self, i: int) -> IntPoly:
        if i < 1:
            raise ValueError("cyclotomic index must be >= 1")
        hit = self._table.get(i)
        if hit is not None:
            return hit
        num = IntPoly.monomial(i) - IntPoly.one()
        den = IntPoly.one()
        for d in divisors(i):
            if d < i:
                den = den * self.get(d)
        phi = poly_divexact(num, den)
        with self._lock:
            self._table.setdefault(i, phi)
        return self._table[i]

    def cached_indices(self) -> list[int]:
        return sorted(self._table)


_CACHE = CyclotomicCache()


def cyclotomic(i: int) -> IntPoly:
    """The i-th cyclotomic polynomial: monic, integer, degree phi(i)."""
    return _CACHE.get(i)


def chain_poly(k: int) -> IntPoly:
    """1 + x + ... + x^k."""
    if k < 1:
        raise ValueError("chain_poly expects k >= 1")
    return IntPoly((1,) * (k + 1))


def build_F(i: int, k: int) -> IntPoly:
    """F_{i,k} = Phi_i(1 + x + ... + x^k); degree phi(i) * k."""
    if i < 1 or k < 1:
        raise ValueError("build_F expects i >= 1 and k >= 1")
    out = poly_compose(cyclotomic(i), chain_poly(k))
    assert out.degree == euler_phi(i) * k
    return out


def ramanujan_sum(ell: int, n: int) -> int:
    """Sum of ell-th powers of the primitive n-th roots of unity.

    Computed by the divisor formula sum_{j | gcd(n, ell)} mobius(n/j) * j,
    never by root enumeration.
    """
    if ell < 1 or n < 1:
        raise ValueError("ramanujan_sum expects ell >= 1 and n >= 1")
    g = gcd(n, ell)
    return sum(mobius(n // j) * j for j in divisors(g))
