"""Brute-force cohomology dimensions, written with nothing but sympy and loops.

Used by the tests as an independent cross-check of ``triplekit.cohomology``.
Cochains live in the raw value space (one coordinate per argument tuple and
output component); the cochain conditions enter as extra kernel rows. Only
practical for dimension 2.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

import sympy


def _q(x) -> sympy.Rational:
    f = Fraction(x)
    return sympy.Rational(f.numerator, f.denominator)


def nested(arr) -> list:
    """Numpy object arrays of fractions to nested lists of sympy rationals."""

    if hasattr(arr, "tolist"):
        arr = arr.tolist()
    if isinstance(arr, (list, tuple)):
        return [nested(x) for x in arr]
    return _q(arr)


def _d(theta, i, j, a, b):
    return theta[j][i][a][b] - theta[i][j][a][b]


def _raw_index(s: int, t: int, p: int):
    args = list(itertools.product(range(s), repeat=p))
    return {(x, a): k for k, (x, a) in enumerate(itertools.product(args, range(t)))}


def cochain_conditions(s: int, t: int, p: int) -> sympy.Matrix:
    """Rows cutting the cochain space out of the raw space in degree ``p``."""

    cols = _raw_index(s, t, p)
    rows = []
    if p < 3:
        return sympy.zeros(0, len(cols))
    for pre in itertools.product(range(s), repeat=p - 3):
        for x, y, z in itertools.product(range(s), repeat=3):
            for a in range(t):
                swap = [0] * len(cols)
                swap[cols[(pre + (x, y, z), a)]] += 1
                swap[cols[(pre + (y, x, z), a)]] += 1
                rows.append(swap)
                cyc = [0] * len(cols)
                for u, v, w in ((x, y, z), (y, z, x), (z, x, y)):
                    cyc[cols[(pre + (u, v, w), a)]] += 1
                rows.append(cyc)
    return sympy.Matrix(rows)


def coboundary(c, theta, p: int) -> sympy.Matrix:
    """Raw matrix of the Yamaguti coboundary from degree ``p`` to ``p + 2``."""

    s, t = len(c), len(theta[0][0])
    n = (p + 1) // 2
    cols = _raw_index(s, t, p)
    rows = _raw_index(s, t, p + 2)
    out = sympy.zeros(len(rows), len(cols))
    for (x, b), r in rows.items():
        for a in range(t):
            out[r, cols[(x[:p], a)]] += theta[x[p]][x[p + 1]][b][a]
            out[r, cols[(x[: p - 1] + (x[p],), a)]] -= theta[x[p - 1]][x[p + 1]][b][a]
        for k in range(1, n + 1):
            i, j = x[2 * k - 2], x[2 * k - 1]
            rest = x[: 2 * k - 2] + x[2 * k :]
            sign = (-1) ** (n + k)
            for a in range(t):
                out[r, cols[(rest, a)]] += sign * _d(theta, i, j, b, a)
            for j0 in range(2 * k, p + 2):
                pos = j0 - 2
                for l in range(s):
                    coef = c[i][j][x[j0]][l]
                    if coef:
                        args = rest[:pos] + (l,) + rest[pos + 1 :]
                        out[r, cols[(args, b)]] -= sign * coef
    return out


def _kernel(*blocks: sympy.Matrix) -> list:
    blocks = [b for b in blocks if b.rows]
    return sympy.Matrix.vstack(*blocks).nullspace()


def yamaguti_dims(c, theta, degree: int, incoming=None):
    """``(dim Z, dim B, dim H)``; ``incoming`` overrides the coboundary image."""

    s, t = len(c), len(theta[0][0])
    z = len(_kernel(cochain_conditions(s, t, degree), coboundary(c, theta, degree)))
    if incoming is not None:
        b = incoming.rank() if incoming.cols else 0
    elif degree == 1:
        b = 0
    else:
        below = cochain_conditions(s, t, degree - 2).nullspace() if degree > 3 else None
        delta = coboundary(c, theta, degree - 2)
        if below is None:
            b = delta.rank()
        else:
            b = (delta * sympy.Matrix.hstack(*below)).rank()
    return z, b, z - b


def induced(c, theta, T):
    """Bracket and representation induced on the module by ``T`` (``T[l][u]``)."""

    n, m = len(c), len(theta[0][0])

    def tv(u):
        return [T[l][u] for l in range(n)]

    cT = [[[[sympy.Integer(0)] * m for _ in range(m)] for _ in range(m)] for _ in range(m)]
    for u, v, w in itertools.product(range(m), repeat=3):
        Tu, Tv, Tw = tv(u), tv(v), tv(w)
        for out in range(m):
            val = 0
            for i in range(n):
                for j in range(n):
                    val += Tu[i] * Tv[j] * _d(theta, i, j, out, w)
                    val += Tv[i] * Tw[j] * theta[i][j][out][u]
                    val -= Tu[i] * Tw[j] * theta[i][j][out][v]
            cT[u][v][w][out] = val

    thetaT = [[[[sympy.Integer(0)] * n for _ in range(n)] for _ in range(m)] for _ in range(m)]
    for u, v in itertools.product(range(m), repeat=2):
        Tu, Tv = tv(u), tv(v)
        for x in range(n):
            col = [0] * n
            for i in range(n):
                for j in range(n):
                    for l in range(n):
                        col[l] += Tu[i] * Tv[j] * c[x][i][j][l]
            inner = [0] * m
            for j in range(n):
                for a in range(m):
                    inner[a] += Tv[j] * theta[x][j][a][u]
                    inner[a] -= Tu[j] * _d(theta, x, j, a, v)
            for l in range(n):
                col[l] += sum(T[l][a] * inner[a] for a in range(m))
            for l in range(n):
                thetaT[u][v][l][x] = col[l]
    return cT, thetaT


def partial_matrix(c, theta, T) -> sympy.Matrix:
    """Raw columns ``∂_T(e_i ^ e_j)`` for ``i < j``, indexed like degree-1 cochains on the module."""

    n, m = len(c), len(theta[0][0])
    cols = []
    for i, j in itertools.combinations(range(n), 2):
        col = []
        for v in range(m):
            for l in range(n):
                val = 0
                for a in range(m):
                    val += T[l][a] * _d(theta, i, j, a, v)
                for z in range(n):
                    val -= c[i][j][z][l] * T[z][v]
                col.append(val)
        cols.append(col)
    if not cols:
        return sympy.zeros(m * n, 0)
    return sympy.Matrix(cols).T


def o_operator_dims(c, theta, T, degree: int):
    cT, thetaT = induced(c, theta, T)
    if degree == 1:
        return yamaguti_dims(cT, thetaT, 1, incoming=partial_matrix(c, theta, T))
    return yamaguti_dims(cT, thetaT, degree)
