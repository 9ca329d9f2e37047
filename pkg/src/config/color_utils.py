"""
颜色工具模块，提供终端彩色输出功能
"""
from enum import Enum


class Color(Enum):
    """终端颜色枚举"""
    GREEN = '\033[92m'   # 绿色 - 通过的检查
    YELLOW = '\033[93m'  # 黄色 - 诊断与提示
    GRAY = '\033[90m'    # 灰色 - 产物路径等次要信息
    RESET = '\033[0m'
    RED = '\033[91m'     # 红色 - 错误与失败的检查


def green_text(text: str) -> str:
    """返回绿色文本"""
    return f"{Color.GREEN.value}{text}{Color.RESET.value}"


def yellow_text(text: str) -> str:
    """返回黄色文本"""
    return f"{Color.YELLOW.value}{text}{Color.RESET.value}"


def red_text(text: str) -> str:
    """返回红色文本"""
    return f"{Color.RED.value}{text}{Color.RESET.value}"


def gray_text(text: str) -> str:
    """返回灰色文本"""
    return f"{Color.GRAY.value}{text}{Color.RESET.value}"


def format_artifact(path: str) -> str:
    """格式化产物路径"""
    return gray_text(f"  -> {path}")
