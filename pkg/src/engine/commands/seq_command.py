# src/engine/commands/seq_command.py
from typing import List

from src.engine.commands.base_command import BaseCommand, CommandContext
from src.engine.sequence_finder import find_sequence, verify_sequence
from src.models.errors import CapExceeded
from src.models.run_config import RunConfig
from src.models.sequence_models import SequenceCert


class SeqCommand(BaseCommand):
    """缺项序列证书 JSON；达到 t_cap 时仍写出部分证书"""
    name = "seq"

    def _payload(self, config: RunConfig, cert: SequenceCert, complete: bool) -> dict:
        return {
            "command": self.name,
            "phi": self.phi_json(config),
            "complete": complete,
            "certificate": cert,
            "t_seq": cert.t_seq,
            "order_trace": cert.order_trace,
            "lacunarity_trace": cert.lacunarity_trace,
        }

    def execute(self, config: RunConfig, context: CommandContext) -> List[str]:
        params = config.parameters
        settings = context.settings.sequence
        try:
            cert = find_sequence(config.phi, params.c, params.k_target, params.t_start, params.t_cap,
                                 params.use_analytic, params.chi_floor, settings)
        except CapExceeded as e:
            if e.certificate is not None:
                context.writer.write_json("sequence.json", self._payload(config, e.certificate, False))
            raise
        payload = self._payload(config, cert, True)
        if params.verify:
            payload["verification"] = verify_sequence(config.phi, cert.t_seq, params.c, cert.d_theoretical,
                                                      context.threads, settings)
        return [context.writer.write_json("sequence.json", payload)]
