# src/engine/commands/verify_command.py
from typing import List

from src.engine.commands.base_command import BaseCommand, CommandContext
from src.engine.lattice_graph import combined_graph
from src.engine.sequence_finder import verify_sequence
from src.engine.template import build_template
from src.engine.verify import (
    bad_certificate, borel_cantelli_sum, diagonal_embed, proximity, proximity_overlay,
)
from src.models.errors import ConfigInvalid
from src.models.run_config import RunConfig


class VerifyCommand(BaseCommand):
    """五种检查之一，由 parameters.check.kind 决定"""
    name = "verify"

    def execute(self, config: RunConfig, context: CommandContext) -> List[str]:
        check = config.parameters.check
        handler = getattr(self, f"_{check.kind}")
        self.logger.info(f"verify: {check.kind}")
        return handler(config, check, context)

    def _proximity(self, config, check, context) -> List[str]:
        A = self.resolve_matrix(config, context)
        t_seq = check.t_seq
        if t_seq is None:
            if A.cf_data is None:
                raise ConfigInvalid("proximity 需要 t_seq，或者使用 cf_witness 矩阵")
            t_seq = A.cf_data.surgical_denominators
        T = build_template(config.phi, t_seq, check.log_delta, A.m, A.n, settings=context.settings.template)
        graph = combined_graph(A, check.q_max, check.step, check.backend,
                               context.threads, context.settings.lattice)
        report = proximity(graph, T, check.T_bound)
        header, rows = proximity_overlay(graph, T)
        return [
            context.writer.write_json("proximity.json", {
                "command": self.name, "check": check.kind, "matrix": A, "t_seq": t_seq, "report": report,
            }),
            context.writer.write_csv("overlay.csv", header, rows),
        ]

    def _bad_certificate(self, config, check, context) -> List[str]:
        A = self.resolve_matrix(config, context)
        certificate = bad_certificate(A, config.phi, check.Q_max, check.chi_floor, check.step,
                                      context.settings.verify, context.settings.lattice)
        return [context.writer.write_json("bad_certificate.json", {
            "command": self.name, "check": check.kind, "certificate": certificate,
            "hit_denominators": certificate.hit_denominators,
        })]

    def _borel_cantelli(self, config, check, context) -> List[str]:
        result = borel_cantelli_sum(config.phi, check.m, check.n, check.N_max, context.settings.verify)
        return [context.writer.write_json("borel_cantelli.json", {
            "command": self.name, "check": check.kind, "phi": self.phi_json(config), "result": result,
        })]

    def _diagonal(self, config, check, context) -> List[str]:
        report = diagonal_embed(check.a, check.m, check.q_max)
        return [context.writer.write_json("diagonal.json", {
            "command": self.name, "check": check.kind, "report": report,
        })]

    def _sequence(self, config, check, context) -> List[str]:
        report = verify_sequence(config.phi, check.t_seq, check.c, check.d, context.threads,
                                 context.settings.sequence)
        return [context.writer.write_json("sequence_check.json", {
            "command": self.name, "check": check.kind, "phi": self.phi_json(config), "report": report,
            "worst": report.worst,
        })]
