"""稀疏有理系数二元多项式，以及爆破代换 x=u, y=zu 与 p̄ 截断。

同一个 BiPoly 既表示 (x, y) 多项式也表示 (u, z) 多项式：单项式是指数对
(e1, e2)，解释由上下文决定。对 (u, z) 多项式，e1 是 u 的次数 i，e2 是 z 的次数 l。
"""

from __future__ import annotations

from enum import Enum
from fractions import Fraction
from types import MappingProxyType
from typing import Iterator, Mapping, Union

Monomial = tuple[int, int]
Scalar = Union[int, Fraction]


class TruncationMode(str, Enum):
    """p̄ 的截断规则。"""

    DEFAULT = "default"
    STRICT = "strict"


def grevlex_key(mono: Monomial) -> tuple[int, int]:
    """两变量 grevlex 排序键（x > y）：先比总次数，再比 e1。"""
    return (mono[0] + mono[1], mono[0])


class BiPoly:
    """不可变的稀疏二元多项式，系数为 Fraction，不存零系数。"""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, Scalar] | None = None) -> None:
        clean: dict[Monomial, Fraction] = {}
        for (e1, e2), coeff in (terms or {}).items():
            if e1 < 0 or e2 < 0:
                raise ValueError(f"negative exponent in monomial ({e1}, {e2})")
            value = Fraction(coeff)
            if value:
                clean[(int(e1), int(e2))] = value
        self._terms = clean
        self._hash: int | None = None

    @classmethod
    def _wrap(cls, terms: dict[Monomial, Fraction]) -> "BiPoly":
        # 调用方保证 terms 已规范（无零系数）且不再被修改
        poly = cls.__new__(cls)
        poly._terms = terms
        poly._hash = None
        return poly

    @classmethod
    def constant(cls, value: Scalar) -> "BiPoly":
        return cls({(0, 0): value})

    @classmethod
    def monomial(cls, e1: int, e2: int, coeff: Scalar = 1) -> "BiPoly":
        return cls({(e1, e2): coeff})

    @classmethod
    def zero(cls) -> "BiPoly":
        return cls._wrap({})

    @property
    def terms(self) -> Mapping[Monomial, Fraction]:
        return MappingProxyType(self._terms)

    def items(self) -> Iterator[tuple[Monomial, Fraction]]:
        return iter(self._terms.items())

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def coeff(self, e1: int, e2: int) -> Fraction:
        return self._terms.get((e1, e2), Fraction(0))

    def constant_term(self) -> Fraction:
        return self.coeff(0, 0)

    def total_degree(self) -> int:
        if not self._terms:
            raise ValueError("zero polynomial has no degree")
        return max(e1 + e2 for e1, e2 in self._terms)

    def e1_degree(self) -> int:
        if not self._terms:
            raise ValueError("zero polynomial has no degree")
        return max(e1 for e1, _ in self._terms)

    def sorted_terms(self) -> list[tuple[Monomial, Fraction]]:
        """按 grevlex 降序返回全部项。"""
        return sorted(self._terms.items(), key=lambda item: grevlex_key(item[0]), reverse=True)

    def swap(self) -> "BiPoly":
        """交换两个变量：p(x, y) -> p(y, x)。"""
        return BiPoly._wrap({(e2, e1): c for (e1, e2), c in self._terms.items()})

    def __eq__(self, other: object) -> bool:
        if isinstance(other, BiPoly):
            return self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self._terms == BiPoly.constant(other)._terms
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __neg__(self) -> "BiPoly":
        return BiPoly._wrap({m: -c for m, c in self._terms.items()})

    def __add__(self, other: "BiPoly | Scalar") -> "BiPoly":
        return add(self, _coerce(other))

    __radd__ = __add__

    def __sub__(self, other: "BiPoly | Scalar") -> "BiPoly":
        return add(self, -_coerce(other))

    def __rsub__(self, other: "BiPoly | Scalar") -> "BiPoly":
        return add(_coerce(other), -self)

    def __mul__(self, other: "BiPoly | Scalar") -> "BiPoly":
        if isinstance(other, (int, Fraction)):
            return scale(self, other)
        return mul(self, other)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "BiPoly":
        if exponent < 0:
            raise ValueError("negative exponent")
        result = BiPoly.constant(1)
        base = self
        while exponent:
            if exponent & 1:
                result = mul(result, base)
            exponent >>= 1
            if exponent:
                base = mul(base, base)
        return result

    def to_text(self, names: tuple[str, str] = ("x", "y")) -> str:
        """按 grevlex 降序输出规范文本，例如 ``x^2*y - 3/2*y^3``。"""
        if not self._terms:
            return "0"
        pieces: list[str] = []
        for index, ((e1, e2), coeff) in enumerate(self.sorted_terms()):
            factors = [_power_text(names[0], e1), _power_text(names[1], e2)]
            factors = [f for f in factors if f]
            magnitude = abs(coeff)
            if not factors:
                body = _fraction_text(magnitude)
            elif magnitude == 1:
                body = "*".join(factors)
            else:
                body = "*".join([_fraction_text(magnitude), *factors])
            if index == 0:
                pieces.append(f"-{body}" if coeff < 0 else body)
            else:
                pieces.append(f" - {body}" if coeff < 0 else f" + {body}")
        return "".join(pieces)

    def __str__(self) -> str:
        return self.to_text()

    def __repr__(self) -> str:
        return f"BiPoly({self.to_text()!r})"


def _coerce(value: "BiPoly | Scalar") -> BiPoly:
    if isinstance(value, BiPoly):
        return value
    return BiPoly.constant(value)


def _power_text(name: str, exponent: int) -> str:
    if exponent == 0:
        return ""
    if exponent == 1:
        return name
    return f"{name}^{exponent}"


def _fraction_text(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


X = BiPoly.monomial(1, 0)
Y = BiPoly.monomial(0, 1)


def add(f: BiPoly, g: BiPoly) -> BiPoly:
    """两个多项式相加，结果中不保留零系数。

    Args:
        f: 被加多项式。
        g: 加数。

    Returns:
        新的 BiPoly，f 与 g 均不被修改。
    """
    if len(f) < len(g):
        f, g = g, f
    out = dict(f._terms)
    for mono, coeff in g._terms.items():
        value = out.get(mono, 0) + coeff
        if value:
            out[mono] = value
        else:
            out.pop(mono, None)
    return BiPoly._wrap(out)


def mul(f: BiPoly, g: BiPoly) -> BiPoly:
    """多项式乘法（逐项相乘后合并同类项）。

    Returns:
        f * g。
    """
    out: dict[Monomial, Fraction] = {}
    for (a1, a2), ca in f._terms.items():
        for (b1, b2), cb in g._terms.items():
            mono = (a1 + b1, a2 + b2)
            out[mono] = out.get(mono, 0) + ca * cb
    return BiPoly._wrap({m: c for m, c in out.items() if c})


def scale(f: BiPoly, c: Scalar) -> BiPoly:
    """乘以有理数标量。

    Args:
        f: 多项式。
        c: 标量，可为 int 或 Fraction；为 0 时返回零多项式。
    """
    factor = Fraction(c)
    if not factor:
        return BiPoly.zero()
    return BiPoly._wrap({m: v * factor for m, v in f._terms.items()})


def blowup_subst(p: BiPoly) -> BiPoly:
    """爆破图卡代换 x=u, y=zu：x^a y^b -> u^(a+b) z^b。"""
    return BiPoly._wrap({(a + b, b): c for (a, b), c in p._terms.items()})


def pbar(p: BiPoly, j: int, mode: TruncationMode = TruncationMode.DEFAULT) -> BiPoly:
    """计算扩张类 p̄。

    默认模式保留 blowup_subst(p) 中 1 <= i <= 2j-2 的项；严格模式再要求 l <= j-1。
    i = 0 的项总被丢弃。

    Args:
        p: (x, y) 多项式。
        j: 分裂型，j >= 2。
        mode: 截断模式。

    Returns:
        (u, z) 多项式 p̄，可能为零（由调用方处理）。
    """
    if j < 2:
        raise ValueError(f"splitting type must be >= 2, got {j}")
    mode = TruncationMode(mode)
    top = 2 * j - 2
    kept: dict[Monomial, Fraction] = {}
    for (i, l), c in blowup_subst(p)._terms.items():
        if not 1 <= i <= top:
            continue
        if mode is TruncationMode.STRICT and l > j - 1:
            continue
        kept[(i, l)] = c
    return BiPoly._wrap(kept)


def u_min_degree(f: BiPoly) -> int:
    """最大的 k 使 u^k 整除 f，即各项 u 次数的最小值。"""
    if f.is_zero():
        raise ValueError("zero polynomial has no u-order")
    return min(i for i, _ in f._terms)


def order_at_origin(p: BiPoly) -> int:
    """曲线在原点的重数：各项总次数的最小值。"""
    if p.is_zero():
        raise ValueError("zero polynomial has no order at the origin")
    return min(a + b for a, b in p._terms)


def partial(p: BiPoly, var: str) -> BiPoly:
    """形式偏导，var 取 ``"x"`` 或 ``"y"``。"""
    if var == "x":
        return BiPoly._wrap({(a - 1, b): c * a for (a, b), c in p._terms.items() if a})
    if var == "y":
        return BiPoly._wrap({(a, b - 1): c * b for (a, b), c in p._terms.items() if b})
    raise ValueError(f"unknown variable {var!r}")
