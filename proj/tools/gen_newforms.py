#!/usr/bin/env python3
"""Regenerate the newform coefficient files under data/.

Elliptic-curve forms come from point counts over F_p plus the Hecke
recursion. 23.2.a.a comes from the weight-2 products eta(z)eta(23z)*theta_Q
for the two reduced binary forms Q of discriminant -23, diagonalized under T_2.
"""

import argparse
import json
from fractions import Fraction
from pathlib import Path

import numpy as np
import sympy


def primes_upto(n):
    return list(sympy.primerange(2, n + 1))


def count_points(ainv, p):
    """#E(F_p) including the point at infinity (singular point counted once)."""
    a1, a2, a3, a4, a6 = ainv
    n = 1
    if p == 2:
        for x in range(2):
            for y in range(2):
                if (y * y + a1 * x * y + a3 * y - (x**3 + a2 * x * x + a4 * x + a6)) % 2 == 0:
                    n += 1
        return n
    b2 = a1 * a1 + 4 * a2
    b4 = a1 * a3 + 2 * a4
    b6 = a3 * a3 + 4 * a6
    sq = [0] * p
    for y in range(p):
        sq[y * y % p] += 1
    for x in range(p):
        n += sq[(4 * x**3 + b2 * x * x + 2 * b4 * x + b6) % p]
    return n


def curve_coefficients(ainv, level, nmax):
    ps = primes_upto(nmax)
    ap = {p: p + 1 - count_points(ainv, p) for p in ps}
    a = [0] * (nmax + 1)
    a[1] = 1
    # prime powers
    for p in ps:
        q, prev, cur = p, 1, ap[p]
        while q <= nmax:
            a[q] = cur
            eps = 0 if level % p == 0 else 1
            prev, cur = cur, ap[p] * cur - eps * p * prev
            q *= p
    spf = sympy.factorint
    for n in range(2, nmax + 1):
        f = spf(n)
        if len(f) > 1:
            v = 1
            for p, e in f.items():
                v *= a[p**e]
            a[n] = v
    return a


def theta_series(A, B, C, nmax):
    """Representation numbers of A x^2 + B x y + C y^2 (positive definite)."""
    t = np.zeros(nmax + 1, dtype=np.int64)
    disc = 4 * A * C - B * B
    ymax = int((4 * A * nmax / disc) ** 0.5) + 2
    for y in range(-ymax, ymax + 1):
        # A x^2 + B y x + (C y^2 - n) <= 0
        r = (B * y) ** 2 - 4 * A * (C * y * y - nmax)
        if r < 0:
            continue
        s = int(r**0.5) + 2
        lo = (-B * y - s) // (2 * A) - 1
        hi = (-B * y + s) // (2 * A) + 1
        for x in range(lo, hi + 1):
            v = A * x * x + B * x * y + C * y * y
            if v <= nmax:
                t[v] += 1
    return t


def eta_product_23(nmax):
    """eta(z) eta(23 z) = q prod (1 - q^n)(1 - q^(23 n))."""
    e = np.zeros(nmax + 1, dtype=np.int64)
    e[1] = 1
    for n in range(1, nmax + 1):
        e[n:] = e[n:] - e[:-n].copy()
    for n in range(23, nmax + 1, 23):
        e[n:] = e[n:] - e[:-n].copy()
    return e


def level23_newform(nmax):
    N = 2 * nmax + 2
    t1 = theta_series(1, 1, 6, N)
    t2 = theta_series(2, 1, 3, N)
    eta = (t1 - t2) // 2
    check = eta_product_23(min(N, 400))
    assert np.array_equal(eta[: len(check)], check), "theta difference != eta product"
    F1 = np.convolve(eta, t1)[: N + 1]
    F2 = np.convolve(eta, t2)[: N + 1]

    def t2op(F, n):
        return int(F[2 * n]) + (2 * int(F[n // 2]) if n % 2 == 0 else 0)

    # T_2 F_i = sum_k m[k][i] F_k, solved on n = 1, 2 and checked further.
    Mb = sympy.Matrix([[int(F1[1]), int(F2[1])], [int(F1[2]), int(F2[2])]])
    cols = []
    for F in (F1, F2):
        rhs = sympy.Matrix([t2op(F, 1), t2op(F, 2)])
        c = Mb.LUsolve(rhs)
        for n in range(1, 300):
            assert t2op(F, n) == c[0] * int(F1[n]) + c[1] * int(F2[n]), "span not T_2 stable"
        cols.append(c)
    T = sympy.Matrix.hstack(*cols)
    x = sympy.symbols("x")
    assert sympy.expand(T.charpoly(x).as_expr()) == x**2 + x - 1
    # eigenvalue -w with w^2 = w + 1
    w = (1 + sympy.sqrt(5)) / 2
    lam = -w
    v = (T - lam * sympy.eye(2)).nullspace()[0]
    norm = v[0] * int(F1[1]) + v[1] * int(F2[1])
    v = [sympy.nsimplify(sympy.simplify(c / norm), [sympy.sqrt(5)]) for c in v]

    def split(c):
        # c = r + s w with r, s rational
        c = sympy.expand(c)
        s = sympy.nsimplify(2 * c.coeff(sympy.sqrt(5)))
        r = sympy.nsimplify(c - s * w)
        r = sympy.nsimplify(sympy.expand(r))
        return Fraction(str(r)), Fraction(str(s))

    (r1, s1), (r2, s2) = split(v[0]), split(v[1])
    an = [None] * (nmax + 1)
    for n in range(1, nmax + 1):
        f1, f2 = int(F1[n]), int(F2[n])
        c0 = r1 * f1 + r2 * f2
        c1 = s1 * f1 + s2 * f2
        an[n] = (c0, c1)
    assert an[1] == (1, 0) and an[2] == (0, -1)
    return an


def frac_json(q):
    q = Fraction(q)
    return q.numerator if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def write(path, label, level, poly, an, provenance, seeds=None):
    obj = {
        "label": label,
        "level": level,
        "weight": 2,
        "nebentypus": "triv1",
        "field_poly": poly,
        "an": an,
        "provenance": provenance,
    }
    if seeds:
        obj["seed_root_mod_p"] = seeds
    path.write_text(json.dumps(obj, separators=(",", ":")) + "\n")


CURVES = {
    "11.2.a.a": ((0, -1, 1, -10, -20), 11),
    "19.2.a.a": ((0, 1, 1, -9, -15), 19),
    "52.2.a.a": ((0, 0, 0, 1, -10), 52),
}


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default=str(Path(__file__).resolve().parent.parent / "data"))
    ap.add_argument("--curve-terms", type=int, default=3100)
    ap.add_argument("--level23-terms", type=int, default=12200)
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for label, (ainv, level) in CURVES.items():
        a = curve_coefficients(ainv, level, args.curve_terms)
        write(out / f"{label}.json", label, level, [0, 1], [[x] for x in a[1:]],
              f"point counts on y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 with {list(ainv)}, "
              "prime powers by the Hecke recursion")
    an = level23_newform(args.level23_terms)
    write(out / "23.2.a.a.json", "23.2.a.a", 23, [-1, -1, 1],
          [[frac_json(c0), frac_json(c1)] for (c0, c1) in an[1:]],
          "eta(z)eta(23z) times theta series of [1,1,6] and [2,1,3], T_2-eigenform with a(2) = -x, x^2 = x + 1",
          {"11": 8})


if __name__ == "__main__":
    main()
