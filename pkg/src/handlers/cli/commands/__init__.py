"""
Command handlers package.
"""
from src.handlers.cli.commands.bench import bench_command
from src.handlers.cli.commands.build import build_command
from src.handlers.cli.commands.eval import eval_command
from src.handlers.cli.commands.generate import generate_command
from src.handlers.cli.commands.route import route_command

__all__ = [
    'bench_command',
    'build_command',
    'eval_command',
    'generate_command',
    'route_command'
]
