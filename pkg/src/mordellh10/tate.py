"""Local reduction data for integral Weierstrass models via Tate's algorithm.

Returns the conductor exponent, Kodaira type, local minimal model and the
rescaling exponent at one prime.  The step structure is the classical one;
at p = 2 and 3, where the textbook shift formulas are easy to get wrong,
the required coordinate shifts are found by direct search over residues
(the search spaces are at most p^2 elements).

A model is the tuple (a1, a2, a3, a4, a6) of y^2 + a1 x y + a3 y =
x^3 + a2 x^2 + a4 x + a6.
"""
from __future__ import annotations

from dataclasses import dataclass

Model = tuple[int, int, int, int, int]

_INF = 10**9  # sentinel valuation for 0


def b_invariants(model: Model) -> tuple[int, int, int, int]:
    a1, a2, a3, a4, a6 = model
    b2 = a1 * a1 + 4 * a2
    b4 = 2 * a4 + a1 * a3
    b6 = a3 * a3 + 4 * a6
    b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
    return b2, b4, b6, b8


def discriminant(model: Model) -> int:
    b2, b4, b6, b8 = b_invariants(model)
    return -b2 * b2 * b8 - 8 * b4**3 - 27 * b6 * b6 + 9 * b2 * b4 * b6


def c_invariants(model: Model) -> tuple[int, int]:
    b2, b4, b6, _ = b_invariants(model)
    c4 = b2 * b2 - 24 * b4
    c6 = -(b2**3) + 36 * b2 * b4 - 216 * b6
    return c4, c6


def transform(model: Model, r: int, s: int, t: int) -> Model:
    """Coordinate change x = x' + r, y = y' + s x' + t (u = 1)."""
    a1, a2, a3, a4, a6 = model
    a1n = a1 + 2 * s
    a2n = a2 - s * a1 + 3 * r - s * s
    a3n = a3 + r * a1 + 2 * t
    a4n = a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r - 2 * s * t
    a6n = a6 + r * a4 + r * r * a2 + r**3 - t * a3 - t * t - r * t * a1
    return (a1n, a2n, a3n, a4n, a6n)


def _rescale_down(model: Model, p: int) -> Model:
    """Divide out u = p: a_i -> a_i / p^i.  Divisions must be exact."""
    a1, a2, a3, a4, a6 = model
    for val, power in ((a1, p), (a2, p * p), (a3, p**3), (a4, p**4), (a6, p**6)):
        if val % power:
            raise ArithmeticError("model is not divisible; minimality logic broken")
    return (a1 // p, a2 // p**2, a3 // p**3, a4 // p**4, a6 // p**6)


def _vp(n: int, p: int) -> int:
    if n == 0:
        return _INF
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def _curve_poly(model: Model, x: int, y: int) -> int:
    a1, a2, a3, a4, a6 = model
    return y * y + a1 * x * y + a3 * y - x**3 - a2 * x * x - a4 * x - a6


def _singular_shift(model: Model, p: int) -> tuple[int, int]:
    """(r, t) moving the reduced curve's singular point to the origin."""
    a1, a2, a3, a4, a6 = model
    if p <= 3:
        for x0 in range(p):
            for y0 in range(p):
                if _curve_poly(model, x0, y0) % p:
                    continue
                fx = a1 * y0 - 3 * x0 * x0 - 2 * a2 * x0 - a4
                fy = 2 * y0 + a1 * x0 + a3
                if fx % p == 0 and fy % p == 0:
                    return x0, y0
        raise ArithmeticError(f"no singular point mod {p}; discriminant logic broken")
    b2, _, _, _ = b_invariants(model)
    c4, c6 = c_invariants(model)
    if c4 % p == 0:
        r = (-b2 * pow(12, -1, p)) % p
    else:
        r = (-(c6 + b2 * c4) * pow(12 * c4, -1, p)) % p
    t = (-(a1 * r + a3) * pow(2, -1, p)) % p
    return r, t


def _step6_shift(model: Model, p: int) -> Model:
    """Normalise so that p | a1, a2;  p^2 | a3, a4;  p^3 | a6."""

    def ok(m: Model) -> bool:
        a1, a2, a3, a4, a6 = m
        return (
            a1 % p == 0
            and a2 % p == 0
            and a3 % p**2 == 0
            and a4 % p**2 == 0
            and a6 % p**3 == 0
        )

    if p <= 3:
        for s in range(p):
            for t in range(p * p):
                cand = transform(model, 0, s, t)
                if ok(cand):
                    return cand
        raise ArithmeticError("normalisation search failed; entry conditions broken")
    s = (-model[0] * pow(2, -1, p)) % p
    cand = transform(model, 0, s, 0)
    t = (-cand[2] * pow(2, -1, p * p)) % (p * p)
    cand = transform(cand, 0, 0, t)
    if not ok(cand):
        raise ArithmeticError("normalisation failed; entry conditions broken")
    return cand


def _root_multiplicity(coeffs: list[int], alpha: int, p: int) -> int:
    """Multiplicity of alpha as a root of the polynomial mod p."""
    mult = 0
    work = [c % p for c in coeffs]
    while len(work) > 1:
        # synthetic division by (T - alpha)
        quot: list[int] = []
        acc = 0
        for c in reversed(work):
            acc = (acc * alpha + c) % p
            quot.append(acc)
        rem = quot.pop()
        if rem != 0:
            break
        mult += 1
        work = list(reversed(quot))
    return mult


def _cubic_repeated_root(b: int, c: int, d: int, p: int) -> tuple[int, int] | None:
    """Repeated root of T^3 + b T^2 + c T + d mod p, as (root, multiplicity).

    None when the cubic is separable.  A repeated root of a cubic over F_p
    is always rational, so scanning (small p) or the gcd with the
    derivative (large p) finds it.
    """
    coeffs = [d, c, b, 1]
    if p <= 3:
        for alpha in range(p):
            m = _root_multiplicity(coeffs, alpha, p)
            if m >= 2:
                return alpha, m
        return None
    # gcd(P, P') over F_p
    g = _poly_gcd_mod([d, c, b, 1], [c % p, (2 * b) % p, 3 % p], p)
    if len(g) == 1:
        return None
    if len(g) == 2:
        alpha = (-g[0] * pow(g[1], -1, p)) % p
        return alpha, _root_multiplicity(coeffs, alpha, p)
    # degree-2 gcd: (T - alpha)^2 from a triple root
    alpha = (-g[1] * pow(2 * g[2], -1, p)) % p
    return alpha, 3


def _poly_gcd_mod(a: list[int], b: list[int], p: int) -> list[int]:
    """Monic gcd of two polynomials over F_p (lowest-degree-first coeffs)."""

    def trim(x: list[int]) -> list[int]:
        x = [c % p for c in x]
        while len(x) > 1 and x[-1] == 0:
            x.pop()
        return x

    a, b = trim(a), trim(b)
    while b != [0]:
        # a mod b
        a = a[:]
        inv = pow(b[-1], -1, p)
        while len(a) >= len(b) and a != [0]:
            coef = a[-1] * inv % p
            shift = len(a) - len(b)
            for i, bc in enumerate(b):
                a[shift + i] = (a[shift + i] - coef * bc) % p
            a = trim(a)
            if len(a) < len(b):
                break
        a, b = b, trim(a)
    inv = pow(a[-1], -1, p)
    return [c * inv % p for c in a]


def _quad_repeated_root(A: int, B: int, C: int, p: int) -> int | None:
    """Repeated root of A Y^2 + B Y + C mod p (requires p not dividing A).

    None when the quadratic has distinct roots in an algebraic closure.
    """
    if A % p == 0:
        raise ArithmeticError("quadratic lost its leading coefficient")
    if p == 2:
        if B % 2:
            return None
        # A (Y - alpha)^2 with alpha^2 = C/A; squaring is the identity on F_2
        return (C * A) % 2
    if (B * B - 4 * A * C) % p:
        return None
    return (-B * pow(2 * A, -1, p)) % p


@dataclass(frozen=True)
class LocalReduction:
    p: int
    conductor_exponent: int
    kodaira: str
    minimal_model: Model
    scale: int  # u with Delta(input) = u^12 * Delta(minimal)
    vp_discriminant: int
    split: bool | None = None  # multiplicative types only


def tate_local(model: Model, p: int) -> LocalReduction:
    """Run Tate's algorithm on an integral model at the prime p."""
    if p < 2 or not _is_probable_prime(p):
        raise ValueError(f"{p} is not prime")
    scale = 1
    while True:
        disc = discriminant(model)
        if disc == 0:
            raise ValueError("singular model (discriminant 0)")
        n = _vp(disc, p)
        if n == 0:
            return LocalReduction(p, 0, "I0", model, scale, 0)

        r, t = _singular_shift(model, p)
        model = transform(model, r, 0, t)
        a1, a2, a3, a4, a6 = model
        b2, b4, b6, b8 = b_invariants(model)

        if b2 % p:
            split = _multiplicative_split(model, p)
            return LocalReduction(p, 1, f"I{n}", model, scale, n, split)
        if a6 % p**2:
            return LocalReduction(p, n, "II", model, scale, n)
        if b8 % p**3:
            return LocalReduction(p, n - 1, "III", model, scale, n)
        if b6 % p**3:
            return LocalReduction(p, n - 2, "IV", model, scale, n)

        model = _step6_shift(model, p)
        a1, a2, a3, a4, a6 = model
        b = (a2 // p) % p
        c = (a4 // p**2) % p
        d = (a6 // p**3) % p
        rep = _cubic_repeated_root(b, c, d, p)
        if rep is None:
            return LocalReduction(p, n - 4, "I0*", model, scale, n)
        alpha, mult = rep
        if mult == 2:
            model = transform(model, p * alpha, 0, 0)
            m, model = _i_star_loop(model, p)
            return LocalReduction(p, n - 4 - m, f"I{m}*", model, scale, n)

        # triple root
        model = transform(model, p * alpha, 0, 0)
        a1, a2, a3, a4, a6 = model
        beta = _quad_repeated_root(1, a3 // p**2, (-a6 // p**4) % p, p)
        if beta is None:
            return LocalReduction(p, n - 6, "IV*", model, scale, n)
        model = transform(model, 0, 0, p * p * beta)
        a1, a2, a3, a4, a6 = model
        if a4 % p**4:
            return LocalReduction(p, n - 7, "III*", model, scale, n)
        if a6 % p**6:
            return LocalReduction(p, n - 8, "II*", model, scale, n)
        model = _rescale_down(model, p)
        scale *= p


def _i_star_loop(model: Model, p: int) -> tuple[int, Model]:
    """Subprocedure for the I_m* chain; entry has the double root at the
    origin: v(a2) = 1, v(a3) >= 2, v(a4) >= 3, v(a6) >= 4."""
    mx = p * p
    my = p * p
    m = 1
    while True:
        a1, a2, a3, a4, a6 = model
        a3t = a3 // my
        a6t = a6 // (mx * my)
        beta = _quad_repeated_root(1, a3t % p, (-a6t) % p, p)
        if beta is None:
            return m, model
        model = transform(model, 0, 0, my * beta)
        my *= p
        m += 1
        a1, a2, a3, a4, a6 = model
        a2t = a2 // p
        a4t = a4 // (p * mx)
        a6t = a6 // (mx * my)
        alpha = _quad_repeated_root(a2t % p, a4t % p, a6t % p, p)
        if alpha is None:
            return m, model
        model = transform(model, mx * alpha, 0, 0)
        mx *= p
        m += 1


def _multiplicative_split(model: Model, p: int) -> bool:
    """Split vs nonsplit multiplicative reduction (roots of the tangent
    quadratic T^2 + a1 T - a2 mod p)."""
    a1, a2, _, _, _ = model
    if p == 2:
        return a2 % 2 == 0
    disc = (a1 * a1 + 4 * a2) % p
    return disc == 0 or pow(disc, (p - 1) // 2, p) == 1


def _is_probable_prime(p: int) -> bool:
    from .arith import is_prime

    return is_prime(p)
