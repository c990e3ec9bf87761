"""Problem instances, benchmark generators and JSON persistence."""
from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from .geometry import Point

FAMILIES = ("uni_sm", "uni_lg", "uni_fix_n")
REPLICATES = 5
SMALL_SCALE_MAX_N = 60


class InstanceError(ValueError):
    """Raised for malformed or inconsistent instance data."""


class InfeasibleInstanceError(ValueError):
    """The disk budget m is below the largest coverage requirement."""


@dataclass(frozen=True)
class Instance:
    points: tuple[Point, ...]
    kappa: tuple[int, ...]
    m: int
    ell: Optional[float] = None
    name: str = "instance"
    seed: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(Point(float(p[0]), float(p[1])) for p in self.points))
        object.__setattr__(self, "kappa", tuple(int(k) for k in self.kappa))
        _validate(len(self.points), self.kappa, self.m, self.ell, self.points)

    @property
    def n(self) -> int:
        return len(self.points)

    @property
    def kappa_max(self) -> int:
        return max(self.kappa)

    @property
    def gmc_feasible(self) -> bool:
        return self.m >= self.kappa_max

    def xy(self) -> np.ndarray:
        return np.array(self.points, dtype=np.float64).reshape(-1, 2)

    def with_ell(self, ell: Optional[float]) -> "Instance":
        return Instance(self.points, self.kappa, self.m, ell, self.name, self.seed)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "n": self.n,
            "m": self.m,
            "ell": self.ell,
            "points": [[p.x, p.y] for p in self.points],
            "kappa": list(self.kappa),
            "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Instance":
        for key in ("points", "kappa", "m"):
            if key not in d:
                raise InstanceError(f"missing field {key!r}")
        pts = d["points"]
        if not isinstance(pts, list) or not all(isinstance(p, list) and len(p) == 2 for p in pts):
            raise InstanceError("field 'points' must be a list of [x, y] pairs")
        if not isinstance(d["kappa"], list):
            raise InstanceError("field 'kappa' must be a list")
        if "n" in d and d["n"] != len(pts):
            raise InstanceError(f"field 'n' = {d['n']} does not match {len(pts)} points")
        return cls(
            points=tuple(Point(float(x), float(y)) for x, y in pts),
            kappa=tuple(d["kappa"]),
            m=d["m"],
            ell=None if d.get("ell") is None else float(d["ell"]),
            name=str(d.get("name", "instance")),
            seed=d.get("seed"),
        )


def _validate(n, kappa, m, ell, points):
    if n < 1:
        raise InstanceError("field 'points' must be non-empty")
    if len(kappa) != n:
        raise InstanceError(f"field 'kappa' has {len(kappa)} entries for {n} points")
    bad = [j for j, k in enumerate(kappa) if k < 1]
    if bad:
        raise InstanceError(f"field 'kappa' must be >= 1 (index {bad[0]})")
    if not isinstance(m, int) or isinstance(m, bool) or m < 1:
        raise InstanceError("field 'm' must be a positive integer")
    if ell is not None and (not math.isfinite(ell) or ell < 0):
        raise InstanceError("field 'ell' must be a nonnegative number or null")
    for j, p in enumerate(points):
        if not (math.isfinite(p.x) and math.isfinite(p.y)):
            raise InstanceError(f"field 'points' has a non-finite coordinate at index {j}")


@dataclass(frozen=True)
class GeneratorConfig:
    width: float = 100.0
    height: float = 100.0
    kappa_choices: tuple[int, ...] = (1, 2, 3)
    seed: int = 0

    def __post_init__(self):
        if self.width <= 0 or self.height <= 0:
            raise ValueError("canvas dimensions must be positive")
        if not self.kappa_choices or min(self.kappa_choices) < 1:
            raise ValueError("kappa choices must be a nonempty set of positive integers")


def generate(n: int, m: int, cfg: GeneratorConfig = GeneratorConfig(), name: str | None = None) -> Instance:
    """Uniform random instance: points on ``[0, w) x [0, h)``, kappa uniform over the choices."""
    if n < 1 or m < 1:
        raise ValueError("n and m must be >= 1")
    rng = np.random.Generator(np.random.PCG64(cfg.seed))
    xy = rng.random((n, 2)) * np.array([cfg.width, cfg.height])
    choices = np.array(sorted(set(cfg.kappa_choices)), dtype=np.int64)
    kappa = choices[rng.integers(0, len(choices), size=n)]
    return Instance(
        points=tuple(Point(float(x), float(y)) for x, y in xy),
        kappa=tuple(int(k) for k in kappa),
        m=m,
        name=name or f"uni_n{n}_m{m}_s{cfg.seed}",
        seed=cfg.seed,
    )


def derive_seed(base_seed: int, family: str, size_index: int, replicate: int) -> int:
    """Stable 63-bit seed from BLAKE2b over the textual key."""
    key = f"{base_seed}:{family}:{size_index}:{replicate}".encode()
    return int.from_bytes(hashlib.blake2b(key, digest_size=8).digest(), "big") >> 1


def suite_plan(family: str, scale: str = "full") -> list[tuple[int, int]]:
    """(n, m) per size step of a benchmark family."""
    if family == "uni_sm":
        plan = [(n, 20) for n in range(20, 201, 10)]
    elif family == "uni_lg":
        plan = [(n, 30) for n in range(30, 301, 10)]
    elif family == "uni_fix_n":
        plan = [(250, m) for m in range(5, 101, 5)]
    else:
        raise ValueError(f"unknown family {family!r}; expected one of {', '.join(FAMILIES)}")
    if scale == "small":
        if family == "uni_fix_n":
            plan = [(SMALL_SCALE_MAX_N, m) for _, m in plan if m <= SMALL_SCALE_MAX_N]
        else:
            plan = [(n, m) for n, m in plan if n <= SMALL_SCALE_MAX_N]
    elif scale != "full":
        raise ValueError(f"unknown scale {scale!r}")
    return plan


def make_suite(family: str, base_seed: int = 0, scale: str = "full",
               cfg: GeneratorConfig = GeneratorConfig()) -> list[Instance]:
    out = []
    for si, (n, m) in enumerate(suite_plan(family, scale)):
        for rep in range(REPLICATES):
            seed = derive_seed(base_seed, family, si, rep)
            c = GeneratorConfig(cfg.width, cfg.height, cfg.kappa_choices, seed)
            out.append(generate(n, m, c, name=f"{family}_n{n}_m{m}_r{rep}"))
    return out


def dumps(inst: Instance) -> str:
    return json.dumps(inst.to_dict(), indent=1) + "\n"


def loads(text: str) -> Instance:
    try:
        d = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceError(f"malformed JSON: {exc}") from exc
    if not isinstance(d, dict):
        raise InstanceError("instance JSON must be an object")
    return Instance.from_dict(d)


def save(inst: Instance, path) -> None:
    Path(path).write_text(dumps(inst), encoding="utf-8")


def load(path) -> Instance:
    return loads(Path(path).read_text(encoding="utf-8"))
