# 导出配置加载函数
from src.config.config_loader import load_settings, ToolkitSettings

# 预加载默认配置
default_settings = load_settings()
