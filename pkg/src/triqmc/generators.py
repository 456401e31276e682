"""One descriptor type for the four point-set generators."""

from __future__ import annotations

from dataclasses import dataclass, field

from .geometry import SampleSet, Triangle, reference_triangle
from .lattice import LatticeConfig, QuadraticIrrationalTangent, default_angle, kronecker_on_triangle
from .vdc import DEFAULT_DEPTH, ScrambleSeed, scrambled_vdc, vdc_sequence

GENERATOR_KINDS = ("vdc", "vdc-scrambled", "lattice", "lattice-shifted")


def _equilateral() -> Triangle:
    return reference_triangle("equilateral_unit_area")


@dataclass(frozen=True)
class Generator:
    kind: str
    domain: Triangle = field(default_factory=_equilateral)
    angle: QuadraticIrrationalTangent | float = default_angle()
    unsafe_angle: bool = False
    depth: int = DEFAULT_DEPTH
    leaf: str = "uniform_leaf"
    exact_count: bool = False
    start: int = 0

    def __post_init__(self):
        if self.kind not in GENERATOR_KINDS:
            raise ValueError(f"unknown generator {self.kind!r}; choose from {GENERATOR_KINDS}")

    @property
    def randomized(self) -> bool:
        return self.kind in ("vdc-scrambled", "lattice-shifted")

    def sample(self, n: int, seed: int | None = None) -> SampleSet:
        """Draw ``n`` points (the lattice kinds treat ``n`` as the target count)."""
        if self.randomized and seed is None:
            raise ValueError(f"{self.kind} needs a seed")
        if self.kind == "vdc":
            return vdc_sequence(self.domain, n, self.start)
        if self.kind == "vdc-scrambled":
            return scrambled_vdc(self.domain, n, ScrambleSeed(seed, self.depth), self.start, self.leaf)
        cfg = LatticeConfig(
            n,
            self.angle,
            exact_count=self.exact_count,
            seed=seed if self.kind == "lattice-shifted" else None,
            unsafe_angle=self.unsafe_angle,
        )
        return kronecker_on_triangle(cfg, self.domain)
