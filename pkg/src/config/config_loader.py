import yaml
import os
import logging
from pathlib import Path
from pydantic import BaseModel, Field
from typing import Dict, Any

logger = logging.getLogger(__name__)

ENV_PREFIX = "PGN_"
DEFAULT_CONFIG_NAME = "toolkit_config.yaml"


class ApproxSettings(BaseModel):
    """逼近函数相关配置"""
    grid_samples: int = Field(default=32, ge=2, description="几何网格每个 e 倍区间的采样点数")
    exhaustive_limit: int = Field(default=200000, description="逐点枚举窗口的上限")
    table_budget: int = Field(default=10**9, description="Table 类型区间枚举预算")
    star_constant: float = Field(default=4.0, gt=0.0, description="(∗) 条件中的常数")


class LatticeSettings(BaseModel):
    """格与逐次极小相关配置"""
    dimension_cap: int = Field(default=6, ge=2, description="m+n 的上限")
    enumeration_budget: int = Field(default=10**8, description="枚举节点预算")
    working_digits: int = Field(default=19, ge=15, description="工作精度（十进制位）")
    lll_delta: float = Field(default=0.99, gt=0.25, lt=1.0, description="LLL 参数")
    threads: int = Field(default=1, ge=1, description="网格点并行线程数")


class TemplateSettings(BaseModel):
    """模板相关配置"""
    strict_separation: bool = Field(default=False, description="是否拒绝相切的 excursion")
    touch_tolerance: float = Field(default=1e-12, ge=0.0, description="相切判定的相对容差")
    sum_zero_samples: int = Field(default=1000, ge=1, description="求和为零检查的随机点数")
    seed: int = Field(default=20240601, description="随机检查的种子")


class SequenceSettings(BaseModel):
    """序列搜索相关配置"""
    case_slack: float = Field(default=0.05, description="分情况阈值下限")
    scan_step: float = Field(default=0.004, gt=0.0, description="几何扫描步长（log 空间）")
    max_finite_order: float = Field(default=1000.0, description="数值阶数视为发散的阈值")
    max_retries: int = Field(default=64, ge=1, description="每项最多重试次数")
    verify_budget: int = Field(default=10**9, description="verify_sequence 的检查预算")


class VerifySettings(BaseModel):
    """验证相关配置"""
    min_denominator: int = Field(default=2, ge=1, description="最佳逼近最小分母")
    hint_slack: float = Field(default=10.0, gt=1.0, description="cf_witness 提示允许的倍数偏差")
    witness_digits: int = Field(default=80, ge=20, description="输出矩阵的十进制位数")
    bc_margin: float = Field(default=0.05, gt=0.0, description="Borel-Cantelli 判定边界")


class CliSettings(BaseModel):
    """命令行相关配置"""
    out_dir: str = Field(default="runs", description="默认输出目录")
    significant_digits: int = Field(default=12, description="数值输出有效位数")
    log_level: str = Field(default="INFO", description="日志级别")


class ToolkitSettings(BaseModel):
    """工具包总配置"""
    approx: ApproxSettings = Field(default_factory=ApproxSettings)
    lattice: LatticeSettings = Field(default_factory=LatticeSettings)
    template: TemplateSettings = Field(default_factory=TemplateSettings)
    sequence: SequenceSettings = Field(default_factory=SequenceSettings)
    verify: VerifySettings = Field(default_factory=VerifySettings)
    cli: CliSettings = Field(default_factory=CliSettings)


def get_config_path(file_name: str) -> str:
    """
    获取配置文件的完整路径

    Args:
        file_name: 配置文件名

    Returns:
        str: 配置文件的完整路径
    """
    project_root = Path(__file__).parent.parent.parent
    return os.path.join(project_root, "config", file_name)


def _apply_env_overrides(config_data: Dict[str, Any]) -> Dict[str, Any]:
    """把 PGN_<SECTION>__<KEY> 环境变量覆盖到配置字典上"""
    for env_key, raw in os.environ.items():
        if not env_key.startswith(ENV_PREFIX):
            continue
        path = env_key[len(ENV_PREFIX):].lower().split("__")
        if len(path) < 2:
            continue
        node = config_data
        for part in path[:-1]:
            node = node.setdefault(part, {})
            if not isinstance(node, dict):
                break
        else:
            # YAML 解析保证数字和布尔值保持类型
            node[path[-1]] = yaml.safe_load(raw)
    return config_data


def load_config(config_name: str = DEFAULT_CONFIG_NAME) -> Dict[str, Any]:
    """
    加载工具包配置（YAML + 环境变量覆盖）

    Args:
        config_name: 配置文件名，默认为toolkit_config.yaml

    Returns:
        Dict[str, Any]: 加载的配置数据
    """
    config_path = get_config_path(config_name)

    try:
        with open(config_path, 'r', encoding='utf-8') as file:
            config_data = yaml.safe_load(file) or {}
    except Exception as e:
        logger.error(f"加载配置文件失败 {config_path}: {e}")
        config_data = {}
    return _apply_env_overrides(config_data)


def load_settings(config_name: str = DEFAULT_CONFIG_NAME) -> ToolkitSettings:
    """
    加载类型化的工具包配置

    Args:
        config_name: 配置文件名

    Returns:
        ToolkitSettings: 配置对象；读取失败时返回默认值
    """
    config_data = load_config(config_name)
    try:
        return ToolkitSettings(**config_data)
    except Exception as e:
        logger.error(f"配置校验失败，使用默认配置: {e}")
        return ToolkitSettings()


def get_config_value(key: str, default: Any = None, config_name: str = DEFAULT_CONFIG_NAME) -> Any:
    """
    获取配置值

    Args:
        key: 配置键，使用点号分隔层级，例如"lattice.enumeration_budget"
        default: 如果配置不存在时返回的默认值
        config_name: 配置文件名

    Returns:
        Any: 配置值或默认值
    """
    config_data = load_config(config_name)

    keys = key.split('.')
    value = config_data

    try:
        for k in keys:
            value = value[k]
        return value
    except (KeyError, TypeError):
        return default


__all__ = [
    "ToolkitSettings", "ApproxSettings", "LatticeSettings", "TemplateSettings",
    "SequenceSettings", "VerifySettings", "CliSettings",
    "get_config_path", "load_config", "load_settings", "get_config_value",
]
