"""端到端流水线：瞬子宽度 w、高度 h、荷数，以及经典不变量（重数、Milnor 数、Tjurina 数）。"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from math import comb

from src.code.errors import InstantonInputError, InstantonInternalError
from src.code.linsys import (
    SymbolicSeries,
    UnknownId,
    apply_relations,
    build_fTv,
    build_symbolic_ab,
    changeables,
    get_relations,
)
from src.code.modgb import (
    Dimension,
    FreeVector,
    PolyMatrix,
    bidual_quotient,
    check_origin_support,
    is_groebner,
    local_vdim,
    module_gb,
    quotient_vdim,
    syzygies,
)
from src.code.polycore import BiPoly, TruncationMode, order_at_origin, partial, pbar, u_min_degree

logger = logging.getLogger(__name__)

DEFAULT_NMAX = 64


@dataclass(frozen=True)
class ClassicalInvariants:
    multiplicity: int
    milnor: Dimension
    tjurina: Dimension


@dataclass(frozen=True)
class InstantonResult:
    """一次 (p, j) 计算的结果；构造时检查 charge = w + h。"""

    p: BiPoly
    j: int
    pbar_mode: TruncationMode
    w: int
    h: int
    charge: int
    classical: ClassicalInvariants | None = None

    def __post_init__(self) -> None:
        if self.charge != self.w + self.h:
            raise InstantonInternalError(
                f"charge {self.charge} differs from w + h = {self.w} + {self.h}"
            )


@dataclass(frozen=True)
class PipelineTrace:
    """宽度流水线各阶段的规模，用于日志与诊断。"""

    pbar: BiPoly
    n: int
    relation_count: int
    echelon_count: int
    nonfree_count: int
    changeable_count: int
    generator_count: int
    stripped_factor: tuple[int, int]
    basis_size: int
    a_shape: tuple[int, int]
    b_shape: tuple[int, int]
    c_shape: tuple[int, int]
    width: int

    def summary(self) -> str:
        return (
            f"pbar={self.pbar.to_text(('u', 'z'))} N={self.n} relations={self.relation_count} "
            f"echelon={self.echelon_count} nonfree={self.nonfree_count} "
            f"changeables={self.changeable_count} generators={self.generator_count} "
            f"factor=x^{self.stripped_factor[0]}*y^{self.stripped_factor[1]} "
            f"basis={self.basis_size} A={self.a_shape} B={self.b_shape} C={self.c_shape} w={self.width}"
        )


def validated_pbar(p: BiPoly, j: int, mode: TruncationMode = TruncationMode.DEFAULT) -> BiPoly:
    """校验输入并返回非零的 p̄。

    Raises:
        InstantonInputError: j < 2、p 为零、曲线不过原点、或 p̄ 为零。
    """
    if j < 2:
        raise InstantonInputError(f"splitting type j must be at least 2, got {j}")
    if p.is_zero():
        raise InstantonInputError("zero polynomial does not define a curve")
    if p.constant_term() != 0:
        raise InstantonInputError("curve does not pass through the origin")
    extension = pbar(p, j, mode)
    if extension.is_zero():
        raise InstantonInputError("trivial extension class (bundle splits)")
    return extension


def _choose2(k: int) -> int:
    return comb(k, 2) if k > 1 else 0


def instanton_height(p: BiPoly, j: int, mode: TruncationMode = TruncationMode.DEFAULT) -> int:
    """h = C(j,2) - C(j-m,2)，m 为 p̄ 中 u 的最小次数。"""
    m = u_min_degree(validated_pbar(p, j, mode))
    return _choose2(j) - _choose2(j - m)


def polyconv(f: BiPoly) -> BiPoly:
    """u^i z^l -> x^(i-l) y^l；l > i 的项丢弃。"""
    return BiPoly({(i - l, l): c for (i, l), c in f.items() if l <= i})


def setvectors(a: SymbolicSeries, b: SymbolicSeries, chosen: list[UnknownId]) -> list[FreeVector]:
    """每个可变未知量令其为 1、其余为 0，得到 Mxy 的一个生成元 (A, B)。

    a、b 须已代入全部关系并乘过 u 的幂。
    """
    a_specs = a.specializations()
    b_specs = b.specializations()
    zero = BiPoly.zero()
    return [
        FreeVector([polyconv(a_specs.get(u, zero)), polyconv(b_specs.get(u, zero))])
        for u in chosen
    ]


def strip_common_monomial(vectors: list[FreeVector]) -> tuple[list[FreeVector], tuple[int, int]]:
    """除去所有分量共有的单项式因子 x^e1 y^e2。"""
    monos = [m for v in vectors for entry in v for m, _ in entry.items()]
    if not monos:
        return vectors, (0, 0)
    e1 = min(m[0] for m in monos)
    e2 = min(m[1] for m in monos)
    if e1 == 0 and e2 == 0:
        return vectors, (0, 0)
    stripped = [
        FreeVector(BiPoly({(a - e1, b - e2): c for (a, b), c in entry.items()}) for entry in v)
        for v in vectors
    ]
    return stripped, (e1, e2)


def width_with_trace(
    p: BiPoly,
    j: int,
    mode: TruncationMode = TruncationMode.DEFAULT,
    *,
    shift: int = 0,
    strip_common_factor: bool = True,
    debug_checks: bool = False,
) -> tuple[int, PipelineTrace]:
    """瞬子宽度的完整计算。

    Args:
        p: (x, y) 多项式，p(0,0) = 0。
        j: 分裂型，j >= 2。
        mode: p̄ 截断模式。
        shift: 乘子取 u^(N+j+shift)。
        strip_common_factor: 是否在求 Gröbner 基前除去公共单项式因子。
        debug_checks: 是否检查合冲恒等式、Gröbner 性与原点支撑。

    Returns:
        ``(w, trace)``。
    """
    extension = validated_pbar(p, j, mode)
    n = 2 * j - 2 + extension.e1_degree()
    logger.debug(f"width: p={p} j={j} pbar={extension.to_text(('u', 'z'))} N={n}")

    a, b = build_symbolic_ab(j, n)
    fTv = build_fTv(j, extension, a, b)
    relations = get_relations(fTv)
    a_free = apply_relations(a, relations)
    b_free = apply_relations(b, relations)
    chosen = changeables(j, a.unknowns() | b.unknowns(), relations.nonfree)
    logger.debug(
        f"width: relations={len(relations.generating)} nonfree={len(relations.nonfree)} "
        f"changeables={len(chosen)}"
    )

    multiplier = n + j + shift
    gens = setvectors(a_free.shifted(multiplier), b_free.shifted(multiplier), chosen)
    factor = (0, 0)
    if strip_common_factor:
        gens, factor = strip_common_monomial(gens)

    basis = module_gb(gens, 2)
    if debug_checks and not is_groebner(basis):
        raise InstantonInternalError("module basis fails the S-pair check")
    presentation = syzygies(list(basis.elements), 2, check=debug_checks)
    a_matrix = PolyMatrix.from_columns(presentation, len(basis))
    chain = bidual_quotient(a_matrix, check=debug_checks)
    dim = quotient_vdim(chain.k_gens, chain.i_gens, chain.rank)
    if not dim.is_finite:
        raise InstantonInternalError(f"infinite double-dual quotient for p={p} j={j}")
    width = dim.value
    if debug_checks:
        check_origin_support(chain.k_gens, chain.i_gens, chain.rank, width)

    trace = PipelineTrace(
        pbar=extension,
        n=n,
        relation_count=len(relations.generating),
        echelon_count=len(relations.rows),
        nonfree_count=len(relations.nonfree),
        changeable_count=len(chosen),
        generator_count=len(gens),
        stripped_factor=factor,
        basis_size=len(basis),
        a_shape=a_matrix.shape,
        b_shape=chain.b.shape,
        c_shape=chain.c.shape,
        width=width,
    )
    logger.debug(f"width trace: {trace.summary()}")
    return width, trace


def instanton_width(
    p: BiPoly,
    j: int,
    mode: TruncationMode = TruncationMode.DEFAULT,
    *,
    shift: int = 0,
    strip_common_factor: bool = True,
    debug_checks: bool = False,
) -> int:
    width, _ = width_with_trace(
        p, j, mode, shift=shift, strip_common_factor=strip_common_factor, debug_checks=debug_checks
    )
    return width


def charge(p: BiPoly, j: int, mode: TruncationMode = TruncationMode.DEFAULT) -> int:
    """瞬子荷 w + h。"""
    return instanton_width(p, j, mode) + instanton_height(p, j, mode)


def multiplicity(p: BiPoly) -> int:
    """曲线 p = 0 在原点的重数，即 p 最低次齐次部分的次数。

    Raises:
        InstantonInputError: p 为零或不过原点。
    """
    if p.is_zero():
        raise InstantonInputError("zero polynomial has no multiplicity")
    if p.constant_term() != 0:
        raise InstantonInputError("curve does not pass through the origin")
    return order_at_origin(p)


def milnor(p: BiPoly, n_max: int = DEFAULT_NMAX) -> Dimension:
    """原点处 Jacobian 理想的局部余维数；非孤立奇点为无限。"""
    return local_vdim([partial(p, "x"), partial(p, "y")], n_max=n_max)


def tjurina(p: BiPoly, n_max: int = DEFAULT_NMAX) -> Dimension:
    """原点处 Tjurina 数 dim R/(p, p_x, p_y)。

    Args:
        p: (x, y) 多项式。
        n_max: m-adic 稳定化的最大截断次数。

    Returns:
        局部余维数；非孤立奇点为无限。
    """
    return local_vdim([p, partial(p, "x"), partial(p, "y")], n_max=n_max)


def classical_invariants(p: BiPoly, n_max: int = DEFAULT_NMAX) -> ClassicalInvariants:
    return ClassicalInvariants(
        multiplicity=multiplicity(p),
        milnor=milnor(p, n_max),
        tjurina=tjurina(p, n_max),
    )


def compute_instanton(
    p: BiPoly,
    j: int,
    mode: TruncationMode = TruncationMode.DEFAULT,
    *,
    classical: bool = False,
    n_max: int = DEFAULT_NMAX,
    debug_checks: bool = False,
) -> InstantonResult:
    """计算 (w, h, charge)，可选附带经典不变量。"""
    mode = TruncationMode(mode)
    h = instanton_height(p, j, mode)
    w = instanton_width(p, j, mode, debug_checks=debug_checks)
    extra = classical_invariants(p, n_max) if classical else None
    result = InstantonResult(p=p, j=j, pbar_mode=mode, w=w, h=h, charge=w + h, classical=extra)
    logger.info(f"instanton: p={p} j={j} mode={mode.value} w={w} h={h} charge={w + h}")
    return result
