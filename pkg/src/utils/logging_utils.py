import logging
import os
from datetime import datetime
from typing import Optional, Union

LOG_DIR = "logs"
LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
DATE_FORMAT = '%Y-%m-%d %H:%M:%S'


def setup_logging(level: Union[int, str] = logging.INFO, console: bool = False,
                  log_dir: Optional[str] = LOG_DIR) -> Optional[str]:
    """
    配置全局日志记录器。

    日志写入 log_dir 下带时间戳的文件；console 为 True 时同时输出到 stderr。

    Args:
        level: 日志级别，可以是 logging.INFO 或 "DEBUG" 这样的名字
        console: 是否添加控制台处理器
        log_dir: 日志目录；None 表示不写文件

    Returns:
        Optional[str]: 日志文件路径
    """
    if isinstance(level, str):
        level = logging.getLevelName(level.upper())
        if not isinstance(level, int):
            level = logging.INFO

    logger = logging.getLogger()
    logger.setLevel(level)

    # 重复调用时先移除旧的处理器，避免重复输出
    for handler in logger.handlers[:]:
        logger.removeHandler(handler)
        handler.close()

    formatter = logging.Formatter(LOG_FORMAT, datefmt=DATE_FORMAT)

    log_filepath = None
    if log_dir:
        os.makedirs(log_dir, exist_ok=True)
        timestamp_str = datetime.now().strftime("%Y%m%d_%H%M%S")
        log_filepath = os.path.join(log_dir, f"debug_{timestamp_str}.log")
        file_handler = logging.FileHandler(log_filepath, encoding='utf-8')
        file_handler.setLevel(level)
        file_handler.setFormatter(formatter)
        logger.addHandler(file_handler)

    if console:
        console_handler = logging.StreamHandler()
        console_handler.setLevel(level)
        console_handler.setFormatter(formatter)
        logger.addHandler(console_handler)

    logger.info(f"Logging setup complete: file={log_filepath}, console={console}")
    return log_filepath
