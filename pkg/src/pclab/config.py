"""Run configuration shared by the CLI and the scripts."""

import json
import os
from dataclasses import asdict, dataclass, field, fields

from .errors import FormatError

FORMAT_VERSION = "pclab-run-v1"
STOCHASTIC = {"walk run", "walk report", "explore delta", "explore bottleneck"}


@dataclass
class RunConfig:
    subcommand: str = ""
    inputs: list = field(default_factory=list)
    rule: str = "principal"
    punctured_threshold: int = 4
    seed: int = None
    out: str = None
    jobs: int = 1
    version: str = FORMAT_VERSION

    @classmethod
    def from_dict(cls, data):
        known = {f.name for f in fields(cls)}
        extra = sorted(set(data) - known)
        if extra:
            raise FormatError(f"unknown config fields: {extra}")
        cfg = cls(**data)
        if cfg.version != FORMAT_VERSION:
            raise FormatError(f"unsupported config version {cfg.version!r}")
        return cfg

    @classmethod
    def load(cls, path):
        with open(path) as fh:
            return cls.from_dict(json.load(fh))

    def resolve_seed(self):
        """Explicit seed, else PCLAB_SEED; stochastic subcommands need one."""
        if self.seed is None and os.environ.get("PCLAB_SEED", "").strip():
            self.seed = int(os.environ["PCLAB_SEED"])
        if self.seed is None and self.subcommand in STOCHASTIC:
            raise ValueError(f"{self.subcommand} needs --seed or PCLAB_SEED")
        return self.seed

    def to_json(self):
        return asdict(self)


@dataclass
class WalkConfig:
    steps: int = 200
    paths: int = 100
    eps: float = 1e-3
    cauchy_target: float = 0.95
    witness_cap: int = 200


@dataclass
class ExploreConfig:
    radius: int = 1
    samples: int = 2000
    pairs: int = 200
    budget: int = 8
