"""测试共用：随机多项式、sympy 互转、按次数截断的暴力线性代数。"""

from __future__ import annotations

import random
from fractions import Fraction

import sympy

from src.code.modgb import FreeVector
from src.code.polycore import BiPoly

SX, SY = sympy.symbols("x y")


def random_poly(rng: random.Random, max_degree: int, max_terms: int = 3, constant: bool = True) -> BiPoly:
    terms: dict[tuple[int, int], Fraction] = {}
    for _ in range(rng.randint(1, max_terms)):
        total = rng.randint(0 if constant else 1, max_degree)
        a = rng.randint(0, total)
        terms[(a, total - a)] = Fraction(rng.choice([-3, -2, -1, 1, 2, 3, 5]))
    return BiPoly(terms)


def random_vector(rng: random.Random, rank: int, max_degree: int, constant: bool = True) -> FreeVector:
    entries = []
    for _ in range(rank):
        entries.append(random_poly(rng, max_degree, constant=constant) if rng.random() < 0.8 else BiPoly.zero())
    return FreeVector(entries)


def to_sympy(p: BiPoly):
    return sum(
        (sympy.Rational(c.numerator, c.denominator) * SX**a * SY**b for (a, b), c in p.items()),
        sympy.Integer(0),
    )


def from_sympy(expr) -> BiPoly:
    poly = sympy.Poly(expr, SX, SY)
    return BiPoly({m: Fraction(int(c.p), int(c.q)) for m, c in poly.terms()})


def monomials_below(degree: int) -> list[tuple[int, int]]:
    """总次数 < degree 的单项式。"""
    return [(a, t - a) for t in range(degree) for a in range(t + 1)]


def truncated_quotient_dim(gens: list[FreeVector], rank: int, c: int) -> int:
    """dim R^rank / (gens + m^c R^rank)，在次数 < c 的有限维空间上做秩计算。"""
    basis = [(p, m) for p in range(rank) for m in monomials_below(c)]
    index = {key: k for k, key in enumerate(basis)}
    rows = []
    for g in gens:
        for (a, b) in monomials_below(c):
            row = [0] * len(basis)
            for p, entry in enumerate(g):
                for (e1, e2), coeff in entry.items():
                    key = (p, (e1 + a, e2 + b))
                    if key in index:
                        row[index[key]] += sympy.Rational(coeff.numerator, coeff.denominator)
            rows.append(row)
    if not rows:
        return len(basis)
    return len(basis) - sympy.Matrix(rows).rank()


def bounded_kernel(matrix_rows: list[list[BiPoly]], cols: int, degree: int) -> list[FreeVector]:
    """A·v = 0 中各分量次数 <= degree 的解空间基（精确有理线性代数）。"""
    monos = monomials_below(degree + 1)
    unknowns = [(k, m) for k in range(cols) for m in monos]
    equations: dict[tuple[int, tuple[int, int]], dict[int, sympy.Rational]] = {}
    for r, row in enumerate(matrix_rows):
        for u, (k, (a, b)) in enumerate(unknowns):
            for (e1, e2), coeff in row[k].items():
                key = (r, (e1 + a, e2 + b))
                bucket = equations.setdefault(key, {})
                bucket[u] = bucket.get(u, 0) + sympy.Rational(coeff.numerator, coeff.denominator)
    if not equations:
        system = sympy.zeros(1, len(unknowns))
    else:
        system = sympy.Matrix(
            [[bucket.get(u, 0) for u in range(len(unknowns))] for bucket in equations.values()]
        )
    solutions = []
    for vec in system.nullspace():
        entries: list[dict[tuple[int, int], Fraction]] = [{} for _ in range(cols)]
        for u, value in enumerate(vec):
            if value != 0:
                k, m = unknowns[u]
                value = sympy.Rational(value)
                entries[k][m] = Fraction(int(value.p), int(value.q))
        solutions.append(FreeVector(BiPoly(e) for e in entries))
    return solutions
