import pytest

from src.config.config_loader import ToolkitSettings
from src.models.approx_models import ExpDecayPhi, PiecewiseDyadicPhi, PowerPhi
from src.models.lattice_models import MatrixA

# 黄金比例的小数部分 φ−1，保留 40 位
GOLDEN_FRACTION = "0.6180339887498948482045868343656381177203"


@pytest.fixture(scope="module")
def settings() -> ToolkitSettings:
    """与仓库 YAML 无关的默认配置"""
    return ToolkitSettings()


@pytest.fixture(scope="module")
def power2() -> PowerPhi:
    return PowerPhi(tau=2.0)


@pytest.fixture(scope="module")
def power3() -> PowerPhi:
    return PowerPhi(tau=3.0)


@pytest.fixture(scope="module")
def dyadic3() -> PiecewiseDyadicPhi:
    return PiecewiseDyadicPhi(exponent=3.0)


@pytest.fixture(scope="module")
def exp_decay() -> ExpDecayPhi:
    return ExpDecayPhi(rate=1.0)


@pytest.fixture(scope="module")
def golden_matrix() -> MatrixA:
    return MatrixA(m=1, n=1, entries=[[GOLDEN_FRACTION]], tag="golden")
