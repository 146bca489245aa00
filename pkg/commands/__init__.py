"""
Spike Forecaster - Commands Package

Each module registers one subcommand on the CLI parser.
"""

from commands import backtest, preprocess, report, synth, train, tune

COMMANDS = (synth, preprocess, train, tune, backtest, report)

__all__ = ["COMMANDS"]
