"""
Entry points: the command-line handler and its subcommands.
"""
