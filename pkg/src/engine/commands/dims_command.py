# src/engine/commands/dims_command.py
from typing import List

from src.engine.commands.base_command import BaseCommand, CommandContext
from src.engine.dims import dim_formulas, dims_table
from src.models.run_config import RunConfig


class DimsCommand(BaseCommand):
    """单个 τ 输出 JSON；给出 taus 时再输出对齐文本表"""
    name = "dims"

    def execute(self, config: RunConfig, context: CommandContext) -> List[str]:
        params = config.parameters
        if params.tau is not None:
            report = dim_formulas(params.m, params.n, params.tau, params.phi_decreasing, params.phi_star)
            payload = {"command": self.name}
            payload.update(report.model_dump())
            return [context.writer.write_json("dims.json", payload)]
        reports = [dim_formulas(params.m, params.n, tau, params.phi_decreasing, params.phi_star)
                   for tau in params.taus]
        table = dims_table(params.m, params.n, params.taus, params.phi_decreasing, params.phi_star)
        return [
            context.writer.write_json("dims.json", {"command": self.name, "reports": reports}),
            context.writer.write_text("dims.txt", table),
        ]
