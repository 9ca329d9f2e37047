import pytest

from src.engine.verify import cf_witness

# Power(3) 下的分母提示
HINTS = [2, 10, 2000]


@pytest.fixture(scope="module")
def witness_matrix(power3, settings):
    """α = [0; 1, 1, a, …]，在分母 2, 11, 2699 处做手术"""
    return cf_witness(power3, HINTS, settings=settings.verify)
