# src/engine/commands/contract_command.py
from typing import List

from src.engine.commands.base_command import BaseCommand, CommandContext
from src.engine.contraction import (
    CONTRACTION_HEADER, contraction_profile, contraction_rows, limit_estimates, partition_case,
    u_k_sequence,
)
from src.models.contraction_models import IntervalType
from src.models.run_config import RunConfig


class ContractCommand(BaseCommand):
    """逐 k 的平均收缩率 CSV 与极限估计 JSON"""
    name = "contract"

    def execute(self, config: RunConfig, context: CommandContext) -> List[str]:
        params = config.parameters
        T = self.build_template(config, params, context)
        limits = limit_estimates(T, params.tau)
        paths = [context.writer.write_csv("contraction.csv", CONTRACTION_HEADER,
                                          contraction_rows(T, limits.tau))]
        paths.append(context.writer.write_json("limits.json", {
            "command": self.name,
            "phi": self.phi_json(config),
            "m": T.m,
            "n": T.n,
            "limits": limits,
            "final_liminf_gap": limits.liminf_gaps[-1],
            "final_limsup_gap": limits.limsup_gaps[-1],
            "u_k": u_k_sequence(T, limits.tau),
            "profile": contraction_profile(T),
            "partitions": [partition_case(T.m, T.n, kind) for kind in IntervalType],
        }))
        return paths
