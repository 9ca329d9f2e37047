import math
from enum import Enum
from typing import Any, List, Sequence, Union

# 超过该位数的整数不再完整输出
MAX_INT_DIGITS = 4000
_LOG10_2 = math.log10(2.0)


def format_int(value: int) -> str:
    """
    格式化整数，用于日志与导出。

    几万位的 t_k 在 str() 时会触发解释器的位数上限，这里改写成 ~2^N 的形式。

    Args:
        value: 整数

    Returns:
        str: 完整十进制，或者 "~2^<位长-1>"
    """
    if value.bit_length() * _LOG10_2 < MAX_INT_DIGITS:
        return str(value)
    return f"~2^{value.bit_length() - 1}"


def format_number(value: Union[int, float, None], digits: int = 12) -> str:
    """
    按固定有效位数格式化数值（CSV/JSON 共用）。

    Args:
        value: 数值；None 输出空串
        digits: 有效位数

    Returns:
        str: 格式化后的文本
    """
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, int):
        return format_int(value)
    if math.isnan(value):
        return "nan"
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    text = format(value, f".{digits}g")
    # -0 与 0 输出一致
    return "0" if text in ("-0", "0") else text


def json_ready(value: Any, digits: int = 12) -> Any:
    """
    把嵌套结构中的浮点数统一成 12 位有效数字，±∞ 写成字符串，大整数缩写。
    """
    if hasattr(value, "model_dump"):
        return json_ready(value.model_dump(), digits)
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, dict):
        return {str(k): json_ready(v, digits) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [json_ready(v, digits) for v in value]
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return value
    if isinstance(value, int):
        text = format_int(value)
        return value if text == str(value) else text
    if isinstance(value, float):
        if math.isinf(value) or math.isnan(value):
            return format_number(value)
        return float(format(value, f".{digits}g"))
    if hasattr(value, "item"):
        return json_ready(value.item(), digits)
    return value


def format_table(headers: Sequence[str], rows: List[Sequence[Any]], digits: int = 6) -> str:
    """
    生成对齐的纯文本表格。

    Args:
        headers: 列名
        rows: 行数据
        digits: 数值有效位数

    Returns:
        str: 多行文本
    """
    cells = [[str(h) for h in headers]]
    for row in rows:
        cells.append([v if isinstance(v, str) else format_number(v, digits) for v in row])
    widths = [max(len(r[i]) for r in cells) for i in range(len(headers))]
    lines = ["  ".join(cell.rjust(width) for cell, width in zip(row, widths)) for row in cells]
    lines.insert(1, "  ".join("-" * width for width in widths))
    return "\n".join(lines)
