import os
import sys

# 让 `import src...` 在项目根目录下可用
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: 运行时间较长的验收测试")
