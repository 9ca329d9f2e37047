# src/engine/commands/graph_command.py
from typing import Any, Dict, List

from src.engine.commands.base_command import BaseCommand, CommandContext
from src.engine.lattice_graph import combined_graph, first_minimum_witnesses
from src.models.lattice_models import GraphMinimum
from src.models.run_config import RunConfig


def minimum_record(minimum: GraphMinimum) -> Dict[str, Any]:
    """局部极小的输出形状 {r, h1, q_vec, p_vec}"""
    witness = minimum.witness
    return {
        "r": minimum.r,
        "h1": minimum.h1_at_r,
        "q_vec": list(witness.q) if witness is not None else None,
        "p_vec": list(witness.p) if witness is not None else None,
    }


class GraphCommand(BaseCommand):
    """组合图 CSV 与局部极小 JSON"""
    name = "graph"

    def execute(self, config: RunConfig, context: CommandContext) -> List[str]:
        params = config.parameters
        A = self.resolve_matrix(config, context)
        graph = combined_graph(A, params.q_max, params.step, params.backend,
                               context.threads, context.settings.lattice)
        header = ["q"] + [f"h{j}" for j in range(1, A.dimension + 1)]
        rows = [[q] + list(values) for q, values in zip(graph.grid, graph.values)]
        paths = [context.writer.write_csv("graph.csv", header, rows)]
        paths.append(context.writer.write_json("minima.json", {
            "command": self.name,
            "matrix": A,
            "backend": graph.backend,
            "grid_points": len(graph.grid),
            "minima": [minimum_record(minimum) for minimum in graph.minima],
            "first_minimum_witnesses": first_minimum_witnesses(graph),
            "slope_violations": graph.slope_violations,
        }))
        self.logger.info(f"graph: {len(graph.grid)} 行, {len(graph.minima)} 个局部极小")
        return paths
