"""Trainer hyperparameters. Defaults follow the published parameter tables
where they exist; the remaining values are conventional choices."""

from __future__ import annotations

from dataclasses import dataclass, fields

from ..errors import ConfigError


class _Checked:
    _positive: tuple = ()

    def __post_init__(self):
        for name in self._positive:
            value = getattr(self, name)
            if value is None or value <= 0:
                raise ConfigError(f"{type(self).__name__}.{name} must be positive, got {value!r}")
        if getattr(self, "dim", 2) < 2:
            raise ConfigError(f"{type(self).__name__}.dim must be at least 2")

    @classmethod
    def field_names(cls):
        return [f.name for f in fields(cls)]


@dataclass
class DeepWalkConfig(_Checked):
    walk_length: int = 10
    num_walks: int = 80
    dim: int = 64
    window: int = 5
    epochs: int = 1
    negatives: int = 5
    lr: float = 0.025
    batch_size: int = 256
    _positive = ("walk_length", "num_walks", "dim", "window", "epochs", "negatives", "lr", "batch_size")


@dataclass
class Node2VecConfig(_Checked):
    dim: int = 64
    walk_length: int = 30
    num_walks: int = 200
    window: int = 5
    epochs: int = 3
    p: float = 1.0
    q: float = 1.0
    negatives: int = 5
    lr: float = 0.025
    batch_size: int = 256
    _positive = ("dim", "walk_length", "num_walks", "window", "epochs", "p", "q",
                 "negatives", "lr", "batch_size")


@dataclass
class LineConfig(_Checked):
    dim: int = 128
    order: str = "2"
    batch_size: int = 1024
    epochs: int = 50
    negatives: int = 5
    lr: float = 0.025
    _positive = ("dim", "batch_size", "epochs", "negatives", "lr")

    def __post_init__(self):
        self.order = str(self.order)
        if self.order not in ("1", "2", "concat"):
            raise ConfigError(f"LineConfig.order must be 1, 2 or concat, got {self.order!r}")
        super().__post_init__()


@dataclass
class SdneConfig(_Checked):
    hidden_sizes: tuple = (256, 128)
    batch_size: int = 3000
    epochs: int = 40
    alpha: float = 0.2
    beta: float = 5.0
    nu: float = 1e-5
    lr: float = 1e-3
    _positive = ("batch_size", "epochs", "beta", "lr")

    def __post_init__(self):
        self.hidden_sizes = tuple(int(h) for h in self.hidden_sizes)
        if not self.hidden_sizes or min(self.hidden_sizes) < 1:
            raise ConfigError("SdneConfig.hidden_sizes must be positive")
        if self.alpha < 0 or self.nu < 0:
            raise ConfigError("SdneConfig.alpha and nu must be non-negative")
        super().__post_init__()

    @property
    def dim(self):
        return self.hidden_sizes[-1]
