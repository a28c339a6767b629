"""Exact integer arithmetic shared by the whole package.

Everything here is pure, deterministic and uses only Python integers:
prime sieve, deterministic Miller-Rabin, trial-division factoring,
cube-free / square-free predicates, cubic residue tests, CRT and
Tonelli-Shanks square roots.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

# Deterministic Miller-Rabin witnesses; this set decides primality
# correctly for every n below the limit.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17)
_MR_LIMIT = 341_550_071_728_321

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def sieve_primes(limit: int) -> list[int]:
    """All primes <= limit, ascending.  limit < 2 yields an empty list."""
    if limit < 2:
        return []
    flags = bytearray([1]) * (limit + 1)
    flags[0] = flags[1] = 0
    for p in range(2, math.isqrt(limit) + 1):
        if flags[p]:
            flags[p * p :: p] = bytearray(len(range(p * p, limit + 1, p)))
    return [i for i in range(2, limit + 1) if flags[i]]


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, valid for n < 3.4e14."""
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    if n >= _MR_LIMIT:
        raise ValueError(f"{n} exceeds the deterministic Miller-Rabin range")
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def factorize(n: int) -> list[tuple[int, int]]:
    """Prime factorisation of |n| as sorted (p, exponent) pairs.

    Trial division with a Miller-Rabin early exit on the cofactor;
    fine for the desk-scale inputs this package sees (< 1e12 or so).
    """
    if n == 0:
        raise ValueError("cannot factor 0")
    n = abs(n)
    out: list[tuple[int, int]] = []
    for p in _SMALL_PRIMES:
        if p * p > n:
            break
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
    if n > 1 and is_prime(n):
        out.append((n, 1))
        return sorted(out)
    # wheel over 6k +/- 1 past the small primes
    q = 41
    while q * q <= n:
        if n % q == 0:
            e = 0
            while n % q == 0:
                n //= q
                e += 1
            out.append((q, e))
            if n > 1 and is_prime(n):
                break
        q += 2 if q % 6 == 5 else 4
    if n > 1:
        out.append((n, 1))
    return sorted(out)


def is_cube_free(n: int) -> bool:
    """True iff no prime q has q**3 | n.  Rejects n == 0."""
    if n == 0:
        raise ValueError("0 is not cube-free or cube-full; rejecting")
    return all(e < 3 for _, e in factorize(n))


def is_square_free(n: int) -> bool:
    """True iff no prime q has q**2 | n.  Rejects n == 0."""
    if n == 0:
        raise ValueError("0 is not square-free; rejecting")
    return all(e < 2 for _, e in factorize(n))


def strip_power(n: int, k: int) -> tuple[int, int]:
    """Largest t with t**k | n removed: returns (n // t**k, t), sign kept."""
    if n == 0:
        raise ValueError("cannot strip powers from 0")
    t = 1
    for p, e in factorize(n):
        t *= p ** (e // k)
    return n // t**k, t


def icbrt(n: int) -> int:
    """Floor of the cube root of n >= 0, exact for arbitrary precision."""
    if n < 0:
        raise ValueError("icbrt needs n >= 0")
    if n == 0:
        return 0
    x = 1 << ((n.bit_length() + 2) // 3)
    while True:
        y = (2 * x + n // (x * x)) // 3
        if y >= x:
            break
        x = y
    while x**3 > n:
        x -= 1
    while (x + 1) ** 3 <= n:
        x += 1
    return x


def exact_cube_root(n: int) -> int | None:
    """The integer c with c**3 == n, or None if n is not a perfect cube."""
    if n == 0:
        return 0
    c = icbrt(abs(n))
    if c**3 != abs(n):
        return None
    return c if n > 0 else -c


def cubic_residue_test(c: int, p: int) -> bool:
    """Whether c is a cube modulo the prime p ("c in F_p^3").

    Cubing is a bijection for p = 3 and p = 2 (mod 3), so the test is
    only nontrivial for p = 1 (mod 3), where it is Euler's criterion
    с^((p-1)/3) == 1.  p | c is rejected: 0 is a degenerate cube and
    callers must not rely on it.
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if c % p == 0:
        raise ValueError(f"{p} divides {c}; degenerate cubic residue")
    if p == 3 or p % 3 == 2:
        return True
    return pow(c, (p - 1) // 3, p) == 1


def crt(residues: list[tuple[int, int]]) -> int:
    """Smallest nonnegative solution of x = r (mod m) for each (r, m).

    Moduli must be pairwise coprime; otherwise ValueError.
    """
    if not residues:
        raise ValueError("need at least one congruence")
    x, mod = 0, 1
    for r, m in residues:
        if m <= 0:
            raise ValueError(f"modulus {m} must be positive")
        if math.gcd(mod, m) != 1:
            raise ValueError("moduli are not pairwise coprime")
        # x' = x (mod mod), x' = r (mod m)
        t = ((r - x) * pow(mod, -1, m)) % m if m > 1 else 0
        x = x + mod * t
        mod *= m
    return x % mod


def sqrt_mod(a: int, p: int) -> int | None:
    """A square root of a modulo the odd prime p, or None for non-residues.

    Tonelli-Shanks; returns the smaller of the two roots.
    """
    a %= p
    if a == 0:
        return 0
    if p == 2:
        return a
    if pow(a, (p - 1) // 2, p) != 1:
        return None
    if p % 4 == 3:
        r = pow(a, (p + 1) // 4, p)
        return min(r, p - r)
    # p = 1 (mod 4): full Tonelli-Shanks
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        t2, i = t, 0
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t, r = t * c % p, r * b % p
    return min(r, p - r)


@dataclass(frozen=True)
class PrimeClass:
    """A prime together with its residue class mod 9 (the invariant that
    drives every congruence rule in this package)."""

    p: int
    class9: int
    is_three: bool

    def __post_init__(self) -> None:
        if self.is_three:
            if self.p != 3:
                raise ValueError("is_three set for p != 3")
        elif self.class9 not in (1, 2, 4, 5, 7, 8):
            raise ValueError(f"residue {self.class9} mod 9 is not coprime to 9")


def prime_class(p: int) -> PrimeClass:
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if p == 3:
        return PrimeClass(p=3, class9=0, is_three=True)
    return PrimeClass(p=p, class9=p % 9, is_three=False)
