# src/engine/commands/__init__.py
from typing import Optional

from .base_command import BaseCommand, CommandContext
from .contract_command import ContractCommand
from .dims_command import DimsCommand
from .graph_command import GraphCommand
from .seq_command import SeqCommand
from .template_command import TemplateCommand
from .verify_command import VerifyCommand

# command 名到命令类的映射
COMMAND_REGISTRY = {
    "graph": GraphCommand,
    "template": TemplateCommand,
    "contract": ContractCommand,
    "seq": SeqCommand,
    "verify": VerifyCommand,
    "dims": DimsCommand,
}


def get_command(name: str) -> Optional[BaseCommand]:
    """按名字返回命令实例，未注册时返回 None"""
    command_class = COMMAND_REGISTRY.get(name)
    return command_class() if command_class else None


__all__ = ["BaseCommand", "CommandContext", "COMMAND_REGISTRY", "get_command"]
