"""
Command-line handlers package.
"""
from src.handlers.cli.handler import main

__all__ = ['main']
