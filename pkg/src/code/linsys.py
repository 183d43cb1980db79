"""Tv 第一分量的符号构造、生成关系的提取与约化行阶梯化。

未知量 a_il、b_il 按 A > B、再按 i、再按 l 排成全序；``UnknownId`` 是
(kind, i, l) 的命名元组，元组自然序即为该全序。
"""

from __future__ import annotations

import logging
from collections import defaultdict
from dataclasses import dataclass, field
from enum import IntEnum
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, NamedTuple

from src.code.polycore import BiPoly, Monomial, Scalar

logger = logging.getLogger(__name__)


class UnknownKind(IntEnum):
    B = 0
    A = 1


class UnknownId(NamedTuple):
    kind: UnknownKind
    i: int
    l: int

    @classmethod
    def a(cls, i: int, l: int) -> "UnknownId":
        return cls(UnknownKind.A, i, l)

    @classmethod
    def b(cls, i: int, l: int) -> "UnknownId":
        return cls(UnknownKind.B, i, l)

    def __str__(self) -> str:
        return f"{self.kind.name.lower()}_{{{self.i},{self.l}}}"


def unknown_less(a: UnknownId, b: UnknownId) -> bool:
    """a < b：A 类总大于 B 类；同类先比 i 再比 l。"""
    return a < b


class LinForm:
    """未知量的稀疏有理线性型。"""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[UnknownId, Scalar] | None = None) -> None:
        self._terms: dict[UnknownId, Fraction] = {
            u: Fraction(c) for u, c in (terms or {}).items() if c
        }

    @classmethod
    def _wrap(cls, terms: dict[UnknownId, Fraction]) -> "LinForm":
        form = cls.__new__(cls)
        form._terms = terms
        return form

    @classmethod
    def unknown(cls, u: UnknownId) -> "LinForm":
        return cls._wrap({u: Fraction(1)})

    @property
    def terms(self) -> Mapping[UnknownId, Fraction]:
        return self._terms

    def support(self) -> frozenset[UnknownId]:
        return frozenset(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __contains__(self, u: object) -> bool:
        return u in self._terms

    def coeff(self, u: UnknownId) -> Fraction:
        return self._terms.get(u, Fraction(0))

    def leading(self) -> UnknownId:
        if not self._terms:
            raise ValueError("zero linear form has no leading unknown")
        return max(self._terms)

    def scaled(self, c: Scalar) -> "LinForm":
        factor = Fraction(c)
        if not factor:
            return LinForm._wrap({})
        return LinForm._wrap({u: v * factor for u, v in self._terms.items()})

    def monic(self) -> "LinForm":
        return self.scaled(1 / self._terms[self.leading()])

    def axpy(self, c: Fraction, other: "LinForm") -> "LinForm":
        """返回 self + c * other。"""
        out = dict(self._terms)
        for u, v in other._terms.items():
            value = out.get(u, 0) + c * v
            if value:
                out[u] = value
            else:
                out.pop(u, None)
        return LinForm._wrap(out)

    def __add__(self, other: "LinForm") -> "LinForm":
        return self.axpy(Fraction(1), other)

    def __sub__(self, other: "LinForm") -> "LinForm":
        return self.axpy(Fraction(-1), other)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LinForm):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts: list[str] = []
        for index, u in enumerate(sorted(self._terms, reverse=True)):
            c = self._terms[u]
            mag = abs(c)
            body = str(u) if mag == 1 else f"{mag}*{u}"
            if index == 0:
                parts.append(f"-{body}" if c < 0 else body)
            else:
                parts.append(f" - {body}" if c < 0 else f" + {body}")
        return "".join(parts)

    def __repr__(self) -> str:
        return f"LinForm({self})"


class SymbolicSeries:
    """Σ coeffs(i, l)·u^i z^l，系数为线性型。"""

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs: Mapping[Monomial, LinForm] | None = None) -> None:
        self._coeffs: dict[Monomial, LinForm] = {
            m: form for m, form in (coeffs or {}).items() if form
        }

    @property
    def coeffs(self) -> Mapping[Monomial, LinForm]:
        return self._coeffs

    def __getitem__(self, mono: Monomial) -> LinForm:
        return self._coeffs.get(mono, LinForm())

    def __len__(self) -> int:
        return len(self._coeffs)

    def items(self) -> Iterator[tuple[Monomial, LinForm]]:
        return iter(self._coeffs.items())

    def unknowns(self) -> set[UnknownId]:
        found: set[UnknownId] = set()
        for form in self._coeffs.values():
            found.update(form.terms)
        return found

    def shifted(self, di: int, dl: int = 0) -> "SymbolicSeries":
        """乘以 u^di z^dl。"""
        return SymbolicSeries({(i + di, l + dl): f for (i, l), f in self._coeffs.items()})

    def times_poly(self, f: BiPoly) -> "SymbolicSeries":
        """乘以一个 (u, z) 多项式。"""
        acc: dict[Monomial, dict[UnknownId, Fraction]] = defaultdict(dict)
        for (i0, l0), c in f.items():
            for (i, l), form in self._coeffs.items():
                bucket = acc[(i + i0, l + l0)]
                for u, v in form.terms.items():
                    bucket[u] = bucket.get(u, 0) + c * v
        return SymbolicSeries({m: LinForm(terms) for m, terms in acc.items()})

    def __add__(self, other: "SymbolicSeries") -> "SymbolicSeries":
        out = dict(self._coeffs)
        for m, form in other._coeffs.items():
            out[m] = out[m] + form if m in out else form
        return SymbolicSeries(out)

    def specializations(self) -> dict[UnknownId, BiPoly]:
        """对每个未知量 v：令 v=1、其余全为 0 所得的 (u, z) 多项式。"""
        acc: dict[UnknownId, dict[Monomial, Fraction]] = defaultdict(dict)
        for m, form in self._coeffs.items():
            for u, c in form.terms.items():
                acc[u][m] = c
        return {u: BiPoly(terms) for u, terms in acc.items()}

    def specialize(self, u: UnknownId) -> BiPoly:
        return BiPoly({m: form.coeff(u) for m, form in self._coeffs.items()})

    def check_bounds(self, j: int, n: int) -> None:
        """检查所有未知量满足 a: l<=i，b: l<=i+j，且 i<=N。"""
        for u in self.unknowns():
            top = u.i if u.kind is UnknownKind.A else u.i + j
            if not (0 <= u.i <= n and 0 <= u.l <= top):
                raise ValueError(f"unknown {u} out of bounds for j={j}, N={n}")


def build_symbolic_ab(j: int, n: int) -> tuple[SymbolicSeries, SymbolicSeries]:
    """构造带未知系数的 a、b 级数。

    Args:
        j: 分裂型。
        n: 截断界 N，要求 N >= 2j-2。

    Returns:
        ``(a, b)``：a 在 (i, l) 处为 a_il（0<=l<=i<=N），b 在 (i, l) 处为 b_il（0<=l<=i+j）。
    """
    if n < 2 * j - 2:
        raise ValueError(f"N={n} is below 2j-2={2 * j - 2}")
    a = SymbolicSeries(
        {(i, l): LinForm.unknown(UnknownId.a(i, l)) for i in range(n + 1) for l in range(i + 1)}
    )
    b = SymbolicSeries(
        {(i, l): LinForm.unknown(UnknownId.b(i, l)) for i in range(n + 1) for l in range(i + j + 1)}
    )
    return a, b


def build_fTv(j: int, pbar: BiPoly, a: SymbolicSeries, b: SymbolicSeries) -> SymbolicSeries:
    """fTv = z^j·a + p̄·b。"""
    if pbar.is_zero():
        raise ValueError("p̄ must be nonzero")
    return a.shifted(0, j) + b.times_poly(pbar)


@dataclass
class RelationSet:
    """生成关系：原始生成列表 + 约化行阶梯形。

    ``generating`` 与 ``origins`` 保存按出现顺序提取的原始关系及其来源单项式；
    ``pivots`` 把每个主元未知量映射到以它为首项、首系数为 1 的行，各行互相约化。
    """

    generating: list[LinForm] = field(default_factory=list)
    origins: list[Monomial] = field(default_factory=list)
    pivots: dict[UnknownId, LinForm] = field(default_factory=dict)
    _occurs: dict[UnknownId, set[UnknownId]] = field(default_factory=lambda: defaultdict(set))

    @property
    def rows(self) -> list[LinForm]:
        return [self.pivots[u] for u in sorted(self.pivots, reverse=True)]

    @property
    def nonfree(self) -> frozenset[UnknownId]:
        return frozenset(self.pivots)

    def __len__(self) -> int:
        return len(self.pivots)

    def reduce(self, form: LinForm) -> LinForm:
        """用现有主元行消去 form 中所有主元未知量。"""
        for u in [u for u in form.terms if u in self.pivots]:
            form = form.axpy(-form.coeff(u), self.pivots[u])
        return form

    def add(self, form: LinForm, origin: Monomial | None = None) -> LinForm | None:
        """加入一条关系并保持约化行阶梯形。

        Returns:
            新增的主元行；若该关系已被现有行蕴含则返回 ``None``。
        """
        if form.is_zero():
            return None
        self.generating.append(form)
        if origin is not None:
            self.origins.append(origin)
        reduced = self.reduce(form)
        if reduced.is_zero():
            return None
        row = reduced.monic()
        lead = row.leading()
        for key in list(self._occurs.get(lead, ())):
            old = self.pivots[key]
            updated = old.axpy(-old.coeff(lead), row)
            for u in old.terms:
                if u not in updated.terms:
                    self._occurs[u].discard(key)
            self.pivots[key] = updated
            for u in updated.terms:
                if u != key:
                    self._occurs[u].add(key)
        self._occurs.pop(lead, None)
        self.pivots[lead] = row
        for u in row.terms:
            if u != lead:
                self._occurs[u].add(lead)
        return row

    def solve_for(self, u: UnknownId) -> LinForm | None:
        """主元 u 的表达式（u = -(row - u)），自由未知量返回 ``None``。"""
        row = self.pivots.get(u)
        if row is None:
            return None
        return (row - LinForm.unknown(u)).scaled(-1)


def get_relations(fTv: SymbolicSeries) -> RelationSet:
    """收集 fTv 中所有 l > i 处的非零系数作为关系，并完全约化。

    遍历全部单项式而非仅 u 次数 <= N 的部分；越界产生的伪关系只涉及 i > 2j-2 的未知量。
    """
    relations = RelationSet()
    for (i, l) in sorted(fTv.coeffs):
        if l > i:
            relations.add(fTv[(i, l)], origin=(i, l))
    logger.debug(
        f"get_relations: generating={len(relations.generating)} echelon={len(relations)}"
    )
    return relations


def apply_relations(s: SymbolicSeries, relations: RelationSet) -> SymbolicSeries:
    """把每个非自由未知量代换为自由未知量的组合。"""
    if not relations.pivots:
        return s
    return SymbolicSeries({m: relations.reduce(form) for m, form in s.items()})


def changeables(j: int, all_unknowns: Iterable[UnknownId], nonfree: Iterable[UnknownId]) -> list[UnknownId]:
    """i <= 2j-2 且非主元的未知量，按全序降序排列。"""
    blocked = set(nonfree)
    top = 2 * j - 2
    return sorted(
        (u for u in set(all_unknowns) if u.i <= top and u not in blocked),
        reverse=True,
    )
