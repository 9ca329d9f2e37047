# src/engine/commands/template_command.py
from typing import List

from src.engine.commands.base_command import BaseCommand, CommandContext
from src.engine.template import projected_coordinates, sample_template, template_json, validate_template
from src.models.run_config import RunConfig


class TemplateCommand(BaseCommand):
    """模板 JSON（含校验报告）与采样 CSV"""
    name = "template"

    def execute(self, config: RunConfig, context: CommandContext) -> List[str]:
        params = config.parameters
        T = self.build_template(config, params, context)
        report = validate_template(T, params.strict, context.settings.template)
        if not report.passed:
            self.logger.warning(f"模板校验失败: {report.failures}")
        q_max = params.q_max if params.q_max is not None else T.last_breakpoint
        sample = sample_template(T, q_max, params.step)

        payload = {"command": self.name, "phi": self.phi_json(config)}
        payload.update(template_json(T))
        payload["validation"] = report
        payload["projected"] = projected_coordinates(T)
        paths = [context.writer.write_json("template.json", payload)]
        header = ["q"] + [f"f_{j}" for j in range(1, T.m + T.n + 1)]
        rows = [[q] + list(values) for q, values in zip(sample.grid, sample.values)]
        paths.append(context.writer.write_csv("template.csv", header, rows))
        return paths
