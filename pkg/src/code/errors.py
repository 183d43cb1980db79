"""异常层次与退出码映射。"""

from __future__ import annotations

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_INPUT = 2


class InstantonInputError(ValueError):
    """用户输入不合法：多项式语法、j 越界、曲线不过原点、p̄ 为零等。"""


class InstantonInternalError(RuntimeError):
    """内部保证被破坏：宽度无限、原点支撑检查失败、I 不含于 K 等。"""


def exit_code_for(exc: BaseException) -> int:
    """把异常映射为命令行退出码。

    Args:
        exc: 命令执行中抛出的异常。

    Returns:
        输入错误返回 2，其余（内部错误与未预期异常）返回 1。
    """
    if isinstance(exc, InstantonInputError):
        return EXIT_INPUT
    return EXIT_INTERNAL
