"""CLI commands package."""

from .classify import classify_cmd
from .count_params import count_params_cmd
from .gen import gen_cmd
from .init import init_cmd
from .inspect_model import inspect_cmd
from .mixup import mixup_cmd
from .score import score_cmd
from .train import train_cmd
from .train_bg import train_bg_cmd

__all__ = [
    'classify_cmd',
    'count_params_cmd',
    'gen_cmd',
    'init_cmd',
    'inspect_cmd',
    'mixup_cmd',
    'score_cmd',
    'train_bg_cmd',
    'train_cmd',
]
