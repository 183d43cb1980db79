"""Q[x, y] 上自由模的 Gröbner 基、合冲、矩阵核、二次对偶商与有限维数计数。

序固定为 position-over-term：位置下标越小越大，同位置按 grevlex（x > y）。
内部向量表示为 ``{(pos, e1, e2): Fraction}``；基元素全部首一。
"""

from __future__ import annotations

import heapq
import logging
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, NamedTuple, Sequence

from src.code.errors import InstantonInternalError
from src.code.polycore import BiPoly, Scalar

logger = logging.getLogger(__name__)

Term = tuple[int, int, int]
_Vec = dict[Term, Fraction]

ORDER = "pot-grevlex"


def _term_key(t: Term) -> tuple[int, int, int]:
    return (-t[0], t[1] + t[2], t[1])


def _heap_key(t: Term) -> tuple[int, int, int]:
    return (t[0], -(t[1] + t[2]), -t[1])


def _leading(vec: _Vec) -> Term:
    return max(vec, key=_term_key)


def _divides(a: Term, b: Term) -> bool:
    return a[0] == b[0] and a[1] <= b[1] and a[2] <= b[2]


def _lcm(a: Term, b: Term) -> Term:
    return (a[0], max(a[1], b[1]), max(a[2], b[2]))


def _coprime(a: Term, b: Term) -> bool:
    return min(a[1], b[1]) == 0 and min(a[2], b[2]) == 0


def _add_scaled(dst: _Vec, c: Fraction, shift: tuple[int, int], src: _Vec) -> None:
    """dst += c * x^s1 y^s2 * src，原地修改。"""
    s1, s2 = shift
    for (p, a, b), v in src.items():
        key = (p, a + s1, b + s2)
        value = dst.get(key, 0) + c * v
        if value:
            dst[key] = value
        else:
            dst.pop(key, None)


def _scaled(vec: _Vec, c: Fraction) -> _Vec:
    return {t: v * c for t, v in vec.items()}


class FreeVector:
    """R^rank 中的元素，分量为 BiPoly。"""

    __slots__ = ("_entries",)

    def __init__(self, entries: Iterable[BiPoly | Scalar]) -> None:
        self._entries: tuple[BiPoly, ...] = tuple(
            e if isinstance(e, BiPoly) else BiPoly.constant(e) for e in entries
        )

    @classmethod
    def zero(cls, rank: int) -> "FreeVector":
        return cls(BiPoly.zero() for _ in range(rank))

    @classmethod
    def basis(cls, rank: int, k: int) -> "FreeVector":
        return cls(BiPoly.constant(1) if p == k else BiPoly.zero() for p in range(rank))

    @classmethod
    def from_terms(cls, vec: _Vec, rank: int) -> "FreeVector":
        buckets: list[dict[tuple[int, int], Fraction]] = [{} for _ in range(rank)]
        for (p, a, b), c in vec.items():
            buckets[p][(a, b)] = c
        return cls(BiPoly(bucket) for bucket in buckets)

    def to_terms(self) -> _Vec:
        return {(p, a, b): c for p, e in enumerate(self._entries) for (a, b), c in e.items()}

    @property
    def rank(self) -> int:
        return len(self._entries)

    @property
    def entries(self) -> tuple[BiPoly, ...]:
        return self._entries

    def __getitem__(self, k: int) -> BiPoly:
        return self._entries[k]

    def __iter__(self) -> Iterator[BiPoly]:
        return iter(self._entries)

    def is_zero(self) -> bool:
        return all(e.is_zero() for e in self._entries)

    def _check_rank(self, other: "FreeVector") -> None:
        if other.rank != self.rank:
            raise ValueError(f"rank mismatch: {self.rank} vs {other.rank}")

    def __add__(self, other: "FreeVector") -> "FreeVector":
        self._check_rank(other)
        return FreeVector(a + b for a, b in zip(self._entries, other._entries))

    def __sub__(self, other: "FreeVector") -> "FreeVector":
        self._check_rank(other)
        return FreeVector(a - b for a, b in zip(self._entries, other._entries))

    def __neg__(self) -> "FreeVector":
        return FreeVector(-a for a in self._entries)

    def times(self, f: BiPoly | Scalar) -> "FreeVector":
        return FreeVector(a * f for a in self._entries)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FreeVector):
            return NotImplemented
        return self._entries == other._entries

    def __hash__(self) -> int:
        return hash(self._entries)

    def __str__(self) -> str:
        return "(" + ", ".join(e.to_text() for e in self._entries) + ")"

    def __repr__(self) -> str:
        return f"FreeVector{self}"


def combine(coeffs: Sequence[BiPoly], gens: Sequence[FreeVector], rank: int) -> FreeVector:
    """Σ coeffs_k · gens_k。"""
    total = FreeVector.zero(rank)
    for c, g in zip(coeffs, gens):
        if not c.is_zero():
            total = total + g.times(c)
    return total


@dataclass(frozen=True)
class PolyMatrix:
    """rows × cols 的多项式矩阵；允许 0 行或 0 列。"""

    rows: int
    cols: int
    entries: tuple[tuple[BiPoly, ...], ...] = ()

    def __post_init__(self) -> None:
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise ValueError(f"inconsistent matrix shape {self.rows}x{self.cols}")

    @classmethod
    def from_columns(cls, columns: Sequence[FreeVector], rows: int) -> "PolyMatrix":
        for col in columns:
            if col.rank != rows:
                raise ValueError(f"column of rank {col.rank}, expected {rows}")
        entries = tuple(tuple(col[r] for col in columns) for r in range(rows))
        return cls(rows, len(columns), entries)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[BiPoly | Scalar]], cols: int | None = None) -> "PolyMatrix":
        width = len(rows[0]) if rows else (cols or 0)
        vectors = [FreeVector(r) for r in rows]
        return cls(len(rows), width, tuple(v.entries for v in vectors))

    def column(self, k: int) -> FreeVector:
        return FreeVector(self.entries[r][k] for r in range(self.rows))

    def row(self, r: int) -> FreeVector:
        return FreeVector(self.entries[r])

    def columns(self) -> list[FreeVector]:
        return [self.column(k) for k in range(self.cols)]

    def row_vectors(self) -> list[FreeVector]:
        return [self.row(r) for r in range(self.rows)]

    def transpose(self) -> "PolyMatrix":
        return PolyMatrix.from_columns(self.row_vectors(), self.cols)

    def apply(self, v: FreeVector) -> FreeVector:
        if v.rank != self.cols:
            raise ValueError(f"vector of rank {v.rank} for a {self.rows}x{self.cols} matrix")
        return combine(list(v), self.columns(), self.rows)

    def __matmul__(self, other: "PolyMatrix") -> "PolyMatrix":
        return PolyMatrix.from_columns([self.apply(c) for c in other.columns()], self.rows)

    def is_zero(self) -> bool:
        return all(e.is_zero() for r in self.entries for e in r)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)


@dataclass(frozen=True)
class Dimension:
    """有限维数或无限；无限在输出中写作 ``undefined``。"""

    value: int | None

    @classmethod
    def finite(cls, n: int) -> "Dimension":
        if n < 0:
            raise ValueError("dimension must be non-negative")
        return cls(n)

    @classmethod
    def infinite(cls) -> "Dimension":
        return cls(None)

    @property
    def is_finite(self) -> bool:
        return self.value is not None

    def to_json(self) -> int | str:
        return self.value if self.value is not None else "undefined"

    def __str__(self) -> str:
        return str(self.to_json())


@dataclass
class _Element:
    vec: _Vec
    lt: Term
    tag: _Vec | None = None


@dataclass(frozen=True)
class GBasis:
    """约化 Gröbner 基。``leading`` 记录每个元素的首项 (pos, e1, e2)。"""

    rank: int
    elements: tuple[FreeVector, ...]
    leading: tuple[Term, ...]
    order: str = ORDER
    _core: tuple[_Element, ...] = field(default=(), repr=False, compare=False)

    def __len__(self) -> int:
        return len(self.elements)

    @property
    def tracked(self) -> bool:
        return bool(self._core) and self._core[0].tag is not None

    def standard_count(self) -> Dimension:
        """R^rank / ⟨首项⟩ 中标准单项式的个数。"""
        total = 0
        for p in range(self.rank):
            leads = [(a, b) for q, a, b in self.leading if q == p]
            x_pows = [a for a, b in leads if b == 0]
            y_pows = [b for a, b in leads if a == 0]
            if not x_pows or not y_pows:
                return Dimension.infinite()
            for a in range(min(x_pows)):
                total += min(b for e1, b in leads if e1 <= a)
        return Dimension.finite(total)


def _index(elements: Iterable[_Element]) -> dict[int, list[_Element]]:
    by_pos: dict[int, list[_Element]] = defaultdict(list)
    for el in elements:
        by_pos[el.lt[0]].append(el)
    return by_pos


def _reduce(
    vec: _Vec,
    tag: _Vec | None,
    by_pos: dict[int, list[_Element]],
) -> tuple[_Vec, _Vec | None]:
    """完全约化；tag 跟踪 vec 相对输入生成元的变化量。"""
    p = dict(vec)
    tag = dict(tag) if tag is not None else None
    rem: _Vec = {}
    heap = [(_heap_key(t), t) for t in p]
    heapq.heapify(heap)
    while heap:
        _, t = heapq.heappop(heap)
        c = p.get(t)
        if c is None:
            continue
        divisor = None
        for el in by_pos.get(t[0], ()):
            if el.lt[1] <= t[1] and el.lt[2] <= t[2]:
                divisor = el
                break
        if divisor is None:
            rem[t] = c
            del p[t]
            continue
        shift = (t[1] - divisor.lt[1], t[2] - divisor.lt[2])
        for (q, a, b), v in divisor.vec.items():
            key = (q, a + shift[0], b + shift[1])
            value = p.get(key, 0) - c * v
            if value:
                if key not in p:
                    heapq.heappush(heap, (_heap_key(key), key))
                p[key] = value
            else:
                p.pop(key, None)
        if tag is not None:
            _add_scaled(tag, -c, shift, divisor.tag)
    return rem, tag


def _spoly(f: _Element, g: _Element) -> tuple[_Vec, _Vec | None]:
    lcm = _lcm(f.lt, g.lt)
    sf = (lcm[1] - f.lt[1], lcm[2] - f.lt[2])
    sg = (lcm[1] - g.lt[1], lcm[2] - g.lt[2])
    s: _Vec = {}
    _add_scaled(s, Fraction(1), sf, f.vec)
    _add_scaled(s, Fraction(-1), sg, g.vec)
    tag = None
    if f.tag is not None:
        tag = {}
        _add_scaled(tag, Fraction(1), sf, f.tag)
        _add_scaled(tag, Fraction(-1), sg, g.tag)
    return s, tag


@dataclass
class _Buchberger:
    """Buchberger 过程：normal 选择策略 + Gebauer–Möller 更新。

    ``tracked`` 时每个元素携带关于输入的坐标，约化到零的输入或 S 对贡献一个合冲。
    乘积判别只在秩 1 且不跟踪时启用。
    """

    rank: int
    tracked: bool = False
    elements: list[_Element] = field(default_factory=list)
    syzygies: list[_Vec] = field(default_factory=list)
    _by_pos: dict[int, list[_Element]] = field(default_factory=lambda: defaultdict(list))
    _pairs: dict[tuple[int, int], Term] = field(default_factory=dict)
    _heap: list[tuple[tuple[int, ...], tuple[int, int]]] = field(default_factory=list)
    reductions: int = 0

    @property
    def use_product(self) -> bool:
        return self.rank == 1 and not self.tracked

    def _insert(self, vec: _Vec, tag: _Vec | None) -> None:
        lt = _leading(vec)
        lc = vec[lt]
        if lc != 1:
            inv = 1 / lc
            vec = _scaled(vec, inv)
            tag = _scaled(tag, inv) if tag is not None else None
        new = len(self.elements)
        self._update(lt, new)
        el = _Element(vec, lt, tag)
        self.elements.append(el)
        self._by_pos[lt[0]].append(el)

    def _update(self, lt: Term, new: int) -> None:
        lts = [el.lt for el in self.elements]
        for pair in [pr for pr, lcm in self._pairs.items() if lcm[0] == lt[0]]:
            lcm = self._pairs[pair]
            i, j = pair
            if _divides(lt, lcm) and lcm != _lcm(lts[i], lt) and lcm != _lcm(lts[j], lt):
                del self._pairs[pair]
        lcm_dict: dict[Term, list[int]] = defaultdict(list)
        for i, other in enumerate(lts):
            if other[0] == lt[0]:
                lcm_dict[_lcm(other, lt)].append(i)
        minimal: list[Term] = []
        for lcm in sorted(lcm_dict, key=_term_key):
            if all(not _divides(kept, lcm) for kept in minimal):
                minimal.append(lcm)
        for lcm in minimal:
            group = lcm_dict[lcm]
            if self.use_product and any(_coprime(lts[i], lt) for i in group):
                continue
            pair = (min(group), new)
            self._pairs[pair] = lcm
            heapq.heappush(self._heap, ((lcm[1] + lcm[2], -lcm[0], lcm[1], *pair), pair))

    def add_input(self, vec: _Vec, k: int) -> None:
        tag = {(k, 0, 0): Fraction(1)} if self.tracked else None
        if vec:
            vec, tag = _reduce(vec, tag, self._by_pos)
        if vec:
            self._insert(vec, tag)
        elif tag is not None:
            self.syzygies.append(tag)

    def run(self) -> None:
        while self._heap:
            _, pair = heapq.heappop(self._heap)
            if self._pairs.pop(pair, None) is None:
                continue
            i, j = pair
            s, tag = _spoly(self.elements[i], self.elements[j])
            s, tag = _reduce(s, tag, self._by_pos)
            self.reductions += 1
            if s:
                self._insert(s, tag)
            elif tag:
                self.syzygies.append(tag)

    def reduced(self) -> list[_Element]:
        """极小化后互约化。"""
        kept: list[_Element] = []
        for el in sorted(self.elements, key=lambda e: _term_key(e.lt)):
            if all(not _divides(k.lt, el.lt) for k in kept):
                kept.append(el)
        out: list[_Element] = []
        for idx, el in enumerate(kept):
            others = _index(kept[:idx] + kept[idx + 1:])
            vec, tag = _reduce(el.vec, el.tag, others)
            out.append(_Element(vec, el.lt, tag))
        return out


def _rank_of(gens: Sequence[FreeVector], rank: int | None) -> int:
    if rank is None:
        if not gens:
            return 0
        rank = gens[0].rank
    for g in gens:
        if g.rank != rank:
            raise ValueError(f"generator of rank {g.rank}, expected {rank}")
    return rank


def _run(
    inputs: Sequence[_Vec], rank: int, tracked: bool
) -> tuple[list[_Element], list[_Vec]]:
    engine = _Buchberger(rank=rank, tracked=tracked)
    order = sorted(
        range(len(inputs)),
        key=lambda k: _term_key(_leading(inputs[k])) if inputs[k] else (-rank - 1, 0, 0),
    )
    for k in order:
        engine.add_input(inputs[k], k)
    engine.run()
    basis = engine.reduced()
    logger.debug(
        f"buchberger: rank={rank} inputs={len(inputs)} basis={len(basis)} "
        f"reductions={engine.reductions} tracked={tracked}"
    )
    return basis, engine.syzygies


def _as_basis(rank: int, core: list[_Element]) -> GBasis:
    return GBasis(
        rank=rank,
        elements=tuple(FreeVector.from_terms(el.vec, rank) for el in core),
        leading=tuple(el.lt for el in core),
        _core=tuple(core),
    )


def module_gb(gens: Sequence[FreeVector], rank: int | None = None) -> GBasis:
    """生成子模的约化 Gröbner 基（空输入得到空基）。"""
    rank = _rank_of(gens, rank)
    core, _ = _run([g.to_terms() for g in gens], rank, tracked=False)
    return _as_basis(rank, core)


def tracked_gb(gens: Sequence[FreeVector], rank: int | None = None) -> tuple[GBasis, list[FreeVector]]:
    """带输入坐标跟踪的 Gröbner 基，同时返回原始合冲（未约化）。"""
    rank = _rank_of(gens, rank)
    core, raw = _run([g.to_terms() for g in gens], rank, tracked=True)
    return _as_basis(rank, core), [FreeVector.from_terms(s, len(gens)) for s in raw]


def normal_form(v: FreeVector, gb: GBasis) -> FreeVector:
    """v 对 Gröbner 基 gb 的完全约化余式。

    Args:
        v: 待约化向量，秩须与 gb 一致。
        gb: module_gb 返回的约化 Gröbner 基。

    Returns:
        余式；v 属于 gb 生成的子模当且仅当余式为零。

    Raises:
        ValueError: 秩不一致。
    """
    if v.rank != gb.rank:
        raise ValueError(f"rank mismatch: {v.rank} vs {gb.rank}")
    rem, _ = _reduce(v.to_terms(), None, _index(gb._core))
    return FreeVector.from_terms(rem, gb.rank)


def is_groebner(gb: GBasis) -> bool:
    """所有同位置 S 对都约化到零。"""
    core = list(gb._core)
    by_pos = _index(core)
    for i in range(len(core)):
        for j in range(i + 1, len(core)):
            if core[i].lt[0] != core[j].lt[0]:
                continue
            s, _ = _spoly(_Element(core[i].vec, core[i].lt), _Element(core[j].vec, core[j].lt))
            rem, _ = _reduce(s, None, by_pos)
            if rem:
                return False
    return True


def _lift_with(v: FreeVector, gb: GBasis, count: int) -> list[BiPoly] | None:
    if v.rank != gb.rank:
        raise ValueError(f"rank mismatch: {v.rank} vs {gb.rank}")
    if gb._core and not gb.tracked:
        raise ValueError("lifting needs a tracked basis")
    rem, tag = _reduce(v.to_terms(), {}, _index(gb._core))
    if rem:
        return None
    return list((-FreeVector.from_terms(tag or {}, count)).entries)


def member_lift(v: FreeVector, gens: Sequence[FreeVector]) -> list[BiPoly] | None:
    """求 c_k 使 Σ c_k·gens_k = v；v 不在子模中时返回 ``None``。"""
    gb, _ = tracked_gb(gens, v.rank)
    return _lift_with(v, gb, len(gens))


def syzygies(gens: Sequence[FreeVector], rank: int | None = None, check: bool = False) -> list[FreeVector]:
    """生成元的完整合冲模生成元（秩 = len(gens)），以约化 Gröbner 基形式返回。"""
    rank = _rank_of(gens, rank)
    _, raw = tracked_gb(gens, rank)
    result = list(module_gb(raw, len(gens)).elements) if raw else []
    if check:
        for s in result:
            if not combine(list(s), gens, rank).is_zero():
                raise InstantonInternalError(f"syzygy identity fails for {s}")
    return result


def matrix_kernel(a: PolyMatrix, check: bool = False) -> list[FreeVector]:
    """{v : A·v = 0} 的生成元，即 A 各列的合冲。"""
    return syzygies(a.columns(), rank=a.rows, check=check)


class BidualQuotient(NamedTuple):
    k_gens: list[FreeVector]
    i_gens: list[FreeVector]
    rank: int
    b: PolyMatrix
    c: PolyMatrix


def bidual_quotient(a: PolyMatrix, check: bool = False) -> BidualQuotient:
    """M = coker(A: R^m -> R^n) 的二次对偶链。

    N = ker(Aᵀ) 的生成矩阵 B（n×t）；C 为 B 各列的合冲矩阵；
    K = ker(Cᵀ) ⊆ R^t，I = B 的各行（M 的 n 个生成元在 M∨∨ 中的像）。
    """
    n = a.rows
    b_cols = matrix_kernel(a.transpose(), check=check)
    t = len(b_cols)
    b = PolyMatrix.from_columns(b_cols, n)
    c_cols = syzygies(b_cols, rank=n, check=check)
    c = PolyMatrix.from_columns(c_cols, t)
    k_gens = matrix_kernel(c.transpose(), check=check)
    i_gens = b.row_vectors()
    logger.debug(f"bidual_quotient: A={a.shape} B={b.shape} C={c.shape} K={len(k_gens)}")
    return BidualQuotient(k_gens, i_gens, t, b, c)


def quotient_vdim(
    k_gens: Sequence[FreeVector], i_gens: Sequence[FreeVector], rank: int
) -> Dimension:
    """dim_Q (K 子模)/(I 子模)。

    用 K 的合冲给出 K 的表示，把 I 的生成元提升到 K 坐标，再数关系模的标准单项式。
    """
    k_gens = list(k_gens)
    _rank_of(k_gens, rank)
    _rank_of(list(i_gens), rank)
    s = len(k_gens)
    if s == 0:
        if any(not v.is_zero() for v in i_gens):
            raise InstantonInternalError("I not contained in K")
        return Dimension.finite(0)
    gb, raw = tracked_gb(k_gens, rank)
    relations = list(raw)
    for v in i_gens:
        lift = _lift_with(v, gb, s)
        if lift is None:
            raise InstantonInternalError("I not contained in K")
        relations.append(FreeVector(lift))
    return module_gb(relations, s).standard_count()


def check_origin_support(
    k_gens: Sequence[FreeVector], i_gens: Sequence[FreeVector], rank: int, dim: int
) -> None:
    """检查 x^D、y^D 零化商 K/I（D 为维数）；否则抛内部错误。"""
    gb = module_gb(list(i_gens), rank)
    x_pow = BiPoly.monomial(dim, 0)
    y_pow = BiPoly.monomial(0, dim)
    for k in k_gens:
        for power in (x_pow, y_pow):
            if not normal_form(k.times(power), gb).is_zero():
                raise InstantonInternalError(
                    f"quotient not supported at the origin: {power} does not annihilate {k}"
                )


def ideal_vdim(gens: Sequence[BiPoly]) -> Dimension:
    """dim_Q R/I（全局）。"""
    vectors = [FreeVector([g]) for g in gens]
    return module_gb(vectors, 1).standard_count()


def local_vdim(gens: Sequence[BiPoly], n_max: int = 64) -> Dimension:
    """(R/I) 在原点局部化后的维数，用 m-adic 稳定化计算。

    d_N = dim R/(I + m^N)，N 从 1 递增直到 d_N = d_{N-1}；超过 n_max 仍未稳定则为无限。
    """
    previous = 0
    for n in range(1, n_max + 1):
        power = [BiPoly.monomial(a, n - a) for a in range(n + 1)]
        current = ideal_vdim([*gens, *power]).value
        if current == previous:
            logger.debug(f"local_vdim: stable at N={n} with {current}")
            return Dimension.finite(current)
        previous = current
    logger.debug(f"local_vdim: no stabilization up to N={n_max}")
    return Dimension.infinite()
