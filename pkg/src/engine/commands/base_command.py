# src/engine/commands/base_command.py
import abc
import logging
from typing import List, Optional

from src.config.config_loader import ToolkitSettings
from src.engine.lattice_graph import random_matrix
from src.engine.template import build_template
from src.engine.verify.cf_witness import cf_witness
from src.io.artifact_writer import ArtifactWriter
from src.models.errors import ConfigInvalid
from src.models.lattice_models import MatrixA
from src.models.run_config import RunConfig, TemplateInput
from src.models.template_models import ClassCTemplate


class CommandContext:
    """一次调用共享的配置、产物写入器与线程数"""

    def __init__(self, settings: ToolkitSettings, writer: ArtifactWriter, threads: int = 1):
        self.settings = settings
        self.writer = writer
        self.threads = threads


class BaseCommand(abc.ABC):
    """
    CLI 命令的抽象基类。
    每个具体命令负责一种 command，读取已校验的 RunConfig 并写出产物。
    """
    name: str = ""

    def __init__(self):
        self.logger = logging.getLogger(self.__class__.__name__)

    @abc.abstractmethod
    def execute(self, config: RunConfig, context: CommandContext) -> List[str]:
        """
        执行命令。

        Args:
            config: 已校验的运行配置
            context: 配置、写入器与线程数

        Returns:
            List[str]: 写出的产物路径
        """
        pass

    def resolve_matrix(self, config: RunConfig, context: CommandContext) -> MatrixA:
        """按 matrix 的三种来源之一得到矩阵"""
        spec = config.matrix
        if spec is None:
            raise ConfigInvalid(f"{config.command} 需要 matrix")
        if spec.entries is not None:
            if not spec.entries or not spec.entries[0]:
                raise ConfigInvalid("matrix.entries 不能为空")
            return MatrixA(m=len(spec.entries), n=len(spec.entries[0]), entries=spec.entries, tag="config")
        if spec.random is not None:
            return random_matrix(spec.random.m, spec.random.n, config.seed)
        witness = spec.cf_witness
        matrix = cf_witness(config.phi, witness.t_hint, witness.q_max, context.settings.verify)
        self.logger.info(f"cf_witness 矩阵: 手术分母 {matrix.cf_data.surgical_denominators}")
        return matrix

    def build_template(self, config: RunConfig, params: TemplateInput,
                       context: CommandContext) -> ClassCTemplate:
        return build_template(config.phi, params.sequence(), params.log_delta, params.m, params.n,
                              params.drop_overlapping_prefix, context.settings.template)

    @staticmethod
    def phi_json(config: RunConfig) -> Optional[dict]:
        return config.phi.model_dump() if config.phi is not None else None
