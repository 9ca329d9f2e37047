import argparse
import json
import logging
import sys
from typing import List, Optional

from pydantic import ValidationError

from src.config.color_utils import format_artifact, green_text, red_text, yellow_text
from src.config.config_loader import ToolkitSettings, load_settings
from src.engine.commands import CommandContext, get_command
from src.io.artifact_writer import ArtifactWriter, config_hash
from src.models.errors import (
    BudgetExceeded, CapExceeded, ConfigInvalid, InvalidParam, InvalidTau, IoError, ToolkitError,
)
from src.models.run_config import RunConfig
from src.utils.logging_utils import setup_logging

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_VALIDATION = 2
EXIT_BUDGET = 3
EXIT_IO = 4


def exit_code(error: BaseException) -> int:
    """
    错误到退出码的映射。

    Returns:
        int: 2 校验错误，3 预算错误，4 读写错误，其余工具包错误为 1
    """
    if isinstance(error, IoError):
        return EXIT_IO
    if isinstance(error, (ConfigInvalid, ValidationError, InvalidParam, InvalidTau)):
        return EXIT_VALIDATION
    if isinstance(error, (BudgetExceeded, CapExceeded)):
        return EXIT_BUDGET
    return EXIT_ERROR


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description="参数化数的几何工具包：读取 JSON 配置并写出 CSV/JSON 产物")
    parser.add_argument("--config", required=True, help="运行配置文件路径 (.json)")
    parser.add_argument("--out", help="输出目录，默认取 cli.out_dir")
    parser.add_argument("--budget", type=int, help="枚举与求值预算，覆盖配置中的各项预算")
    parser.add_argument("--threads", type=int, help="网格点并行线程数")
    parser.add_argument("--log-level", help="日志级别，默认取 cli.log_level")
    parser.add_argument("--log-dir", default="logs", help="日志目录；传空串则不写日志文件")
    return parser


def read_config(path: str) -> RunConfig:
    """
    读取并校验运行配置。

    Raises:
        IoError: 文件无法读取
        ConfigInvalid: 不是合法 JSON
        ValidationError: 不符合 RunConfig
    """
    try:
        with open(path, 'r', encoding='utf-8') as f:
            data = json.load(f)
    except json.JSONDecodeError as e:
        raise ConfigInvalid(f"配置不是合法 JSON: {path}: {e}", module="cli")
    except OSError as e:
        raise IoError(f"无法读取配置 {path}: {e}", module="cli")
    if not isinstance(data, dict):
        raise ConfigInvalid(f"配置顶层必须是对象: {path}", module="cli")
    return RunConfig.model_validate(data)


def apply_overrides(settings: ToolkitSettings, budget: Optional[int], threads: Optional[int]) -> ToolkitSettings:
    """命令行的 --budget / --threads 覆盖配置文件中的值"""
    if budget is not None:
        if budget < 1:
            raise ConfigInvalid(f"--budget 必须为正: {budget}", module="cli")
        settings = settings.model_copy(update={
            "lattice": settings.lattice.model_copy(update={"enumeration_budget": budget}),
            "sequence": settings.sequence.model_copy(update={"verify_budget": budget}),
            "approx": settings.approx.model_copy(update={"table_budget": budget}),
        })
    if threads is not None:
        if threads < 1:
            raise ConfigInvalid(f"--threads 必须 ≥ 1: {threads}", module="cli")
        settings = settings.model_copy(update={
            "lattice": settings.lattice.model_copy(update={"threads": threads}),
        })
    return settings


def run(config: RunConfig, out_dir: str, settings: ToolkitSettings) -> List[str]:
    """执行一条已校验的命令，返回产物路径"""
    command = get_command(config.command)
    if command is None:
        raise ConfigInvalid(f"未知命令: {config.command}", module="cli")
    writer = ArtifactWriter(out_dir, config_hash(config), config.seed, settings.cli.significant_digits)
    context = CommandContext(settings, writer, settings.lattice.threads)
    return command.execute(config, context)


def main(argv: Optional[List[str]] = None) -> int:
    """
    CLI 入口，一次调用执行一条命令。

    Returns:
        int: 退出码
    """
    args = build_parser().parse_args(argv)
    settings = load_settings()
    setup_logging(level=args.log_level or settings.cli.log_level, log_dir=args.log_dir or None)
    logging.info(f"=== 参数化数的几何工具包启动: {args.config} ===")

    try:
        settings = apply_overrides(settings, args.budget, args.threads)
        config = read_config(args.config)
        out_dir = args.out or settings.cli.out_dir
        paths = run(config, out_dir, settings)
    except (ToolkitError, ValidationError) as e:
        code = exit_code(e)
        label = e.code if isinstance(e, ToolkitError) else "cli.ValidationError"
        logging.error(f"{label}: {e}")
        print(red_text(f"错误 [{label}]: {e}"), file=sys.stderr)
        return code

    if paths:
        print(green_text(f"{config.command}: 写出 {len(paths)} 个产物"))
    for path in paths:
        print(format_artifact(path))
    if not paths:
        print(yellow_text("没有写出任何产物"))
    logging.info(f"=== 完成，写出 {len(paths)} 个产物 ===")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
