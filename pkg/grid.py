"""Uniform lattices in (x, y, p, q) and bicomplex samples on them.

Cartesian chart: z1 = x + i1*y, z2 = p + i1*q. Idempotent chart: the same
coordinates are read as P1 = x + i1*y and P2 = p + i1*q, so a grid in that
chart samples a T-cartesian set D1 x_e D2.

Values are kept flat, row-major over the active axes. Frozen axes hold a
single coordinate and do not contribute to the shape.
"""

from __future__ import annotations

import logging
import math
import re
from dataclasses import dataclass, replace
from enum import Enum
from typing import Callable, Dict, Mapping, Optional, Tuple

import numpy as np

from bicomplex import Bicomplex
from errors import ConfigError, EvaluationError
from expressions import Expr, evaluate

logger = logging.getLogger("bvk.grid")

AXES = ("x", "y", "p", "q")

# Second differences lose accuracy like eps/h^2, so their step is eps^(1/4);
# first differences use eps^(1/3).
FIRST_STEP = float(np.finfo(float).eps) ** (1.0 / 3.0)
SECOND_STEP = float(np.finfo(float).eps) ** 0.25

_AXIS_SPEC = re.compile(
    r"^\s*(?P<name>[xypq])\s*=\s*(?P<lo>[-+]?[\d.eE+-]+)\s*(?::\s*(?P<hi>[-+]?[\d.eE+-]+)\s*:\s*(?P<count>\d+))?\s*$"
)


class Chart(str, Enum):
    CARTESIAN = "cartesian"
    IDEMPOTENT = "idempotent"


class Plane(str, Enum):
    """Restriction planes: C(i2) (y = q = 0) and the hyperbolic plane D (y = p = 0)."""

    C_I2 = "C_i2"
    D = "D"

    @classmethod
    def parse(cls, value: str) -> Plane:
        key = value.strip().lower()
        if key in ("c2", "c_i2", "ci2"):
            return cls.C_I2
        if key in ("d", "hyperbolic"):
            return cls.D
        raise ConfigError(f"unknown plane {value!r}; expected c2 or d")

    @property
    def frozen(self) -> Tuple[str, str]:
        return ("y", "q") if self is Plane.C_I2 else ("y", "p")


@dataclass(frozen=True)
class AxisSpec:
    lo: float = -1.0
    hi: float = 1.0
    count: int = 9
    frozen: Optional[float] = None

    @property
    def active(self) -> bool:
        return self.frozen is None

    @property
    def step(self) -> float:
        return (self.hi - self.lo) / (self.count - 1) if self.active else 0.0

    def nodes(self) -> np.ndarray:
        if not self.active:
            return np.array([float(self.frozen)])
        return np.linspace(self.lo, self.hi, self.count)

    def describe(self) -> str:
        if not self.active:
            return repr(float(self.frozen))
        return f"{self.lo!r}:{self.hi!r}:{self.count}"


@dataclass(frozen=True)
class GridDomain:
    x: AxisSpec = AxisSpec()
    y: AxisSpec = AxisSpec()
    p: AxisSpec = AxisSpec()
    q: AxisSpec = AxisSpec()
    chart: Chart = Chart.CARTESIAN

    def __post_init__(self) -> None:
        for name in AXES:
            spec = self.axis(name)
            if spec.active:
                if spec.count < 3:
                    raise ConfigError(f"axis {name} needs at least 3 samples, got {spec.count}")
                if not (math.isfinite(spec.lo) and math.isfinite(spec.hi)) or spec.hi <= spec.lo:
                    raise ConfigError(f"axis {name} needs finite min < max, got {spec.lo}..{spec.hi}")
            elif not math.isfinite(float(spec.frozen)):
                raise ConfigError(f"axis {name} frozen at a non-finite value")

    # -- construction ---------------------------------------------------
    @classmethod
    def parse(cls, text: str, chart: Chart = Chart.CARTESIAN) -> GridDomain:
        """Read ``"x=-1:1:9,y=-1:1:9,p=0,q=-1:1:5"``; omitted axes keep the default."""
        axes: Dict[str, AxisSpec] = {}
        for chunk in filter(None, (c.strip() for c in text.split(","))):
            m = _AXIS_SPEC.match(chunk)
            if m is None:
                raise ConfigError(f"malformed grid axis {chunk!r}")
            name = m.group("name")
            if name in axes:
                raise ConfigError(f"axis {name} given twice")
            try:
                if m.group("hi") is None:
                    axes[name] = AxisSpec(frozen=float(m.group("lo")))
                else:
                    axes[name] = AxisSpec(float(m.group("lo")), float(m.group("hi")), int(m.group("count")))
            except ValueError as exc:
                raise ConfigError(f"malformed grid axis {chunk!r}: {exc}") from None
        return cls(chart=chart, **axes)

    @classmethod
    def planar(cls, lo: float = -1.0, hi: float = 1.0, count: int = 9,
               ylo: Optional[float] = None, yhi: Optional[float] = None) -> GridDomain:
        """A grid of the z1-plane (p = q = 0), used for classical complex pairs."""
        ylo = lo if ylo is None else ylo
        yhi = hi if yhi is None else yhi
        return cls(
            x=AxisSpec(lo, hi, count),
            y=AxisSpec(ylo, yhi, count),
            p=AxisSpec(frozen=0.0),
            q=AxisSpec(frozen=0.0),
        )

    def axis(self, name: str) -> AxisSpec:
        return getattr(self, name)

    def with_axis(self, name: str, spec: AxisSpec) -> GridDomain:
        return replace(self, **{name: spec})

    def refine(self, times: int = 1) -> GridDomain:
        """Halve every active spacing ``times`` times; old nodes stay nodes."""
        if times < 0:
            raise ConfigError("refine count must be non-negative")
        factor = 2 ** times
        out = self
        for name in AXES:
            spec = self.axis(name)
            if spec.active:
                out = out.with_axis(name, replace(spec, count=factor * (spec.count - 1) + 1))
        return out

    # -- geometry --------------------------------------------------------
    @property
    def active_axes(self) -> Tuple[str, ...]:
        return tuple(n for n in AXES if self.axis(n).active)

    @property
    def shape(self) -> Tuple[int, ...]:
        return tuple(self.axis(n).count for n in self.active_axes)

    @property
    def full_shape(self) -> Tuple[int, int, int, int]:
        return tuple(len(self.axis(n).nodes()) for n in AXES)  # type: ignore[return-value]

    @property
    def size(self) -> int:
        return int(np.prod(self.full_shape))

    def spacing(self) -> Dict[str, float]:
        return {n: self.axis(n).step for n in self.active_axes}

    def scale(self) -> float:
        """Largest coordinate magnitude, at least 1; sets finite-difference steps."""
        bounds = [abs(v) for n in AXES for v in (self.axis(n).nodes()[0], self.axis(n).nodes()[-1])]
        return max(1.0, max(bounds))

    def coordinates(self) -> Dict[str, np.ndarray]:
        mesh = np.meshgrid(*(self.axis(n).nodes() for n in AXES), indexing="ij")
        return {n: m.ravel() for n, m in zip(AXES, mesh)}

    def env(self, coords: Optional[Mapping[str, np.ndarray]] = None) -> Dict[str, Bicomplex]:
        """Variable bindings z1, z2, cz1, cz2 at every grid point."""
        return env_from_coordinates(coords if coords is not None else self.coordinates(), self.chart)

    def omega(self) -> Bicomplex:
        env = self.env()
        return env["z1"] + env["z2"] * Bicomplex(0.0, 0.0, 1.0)

    def describe(self) -> str:
        return ",".join(f"{n}={self.axis(n).describe()}" for n in AXES)

    def metadata(self) -> Dict[str, object]:
        return {"spec": self.describe(), "chart": self.chart.value, "points": self.size}


def env_from_coordinates(coords: Mapping[str, np.ndarray], chart: Chart = Chart.CARTESIAN) -> Dict[str, Bicomplex]:
    first = np.asarray(coords["x"]) + 1j * np.asarray(coords["y"])
    second = np.asarray(coords["p"]) + 1j * np.asarray(coords["q"])
    if chart is Chart.IDEMPOTENT:
        z1 = (first + second) / 2.0
        z2 = -0.5j * (second - first)
    else:
        z1, z2 = first, second
    return {
        "z1": Bicomplex.coerce(z1),
        "z2": Bicomplex.coerce(z2),
        "cz1": Bicomplex.coerce(np.conj(z1)),
        "cz2": Bicomplex.coerce(np.conj(z2)),
    }


def restrict_plane(grid: GridDomain, plane: Plane | str) -> GridDomain:
    """Freeze the two axes that leave the named plane at 0."""
    plane = plane if isinstance(plane, Plane) else Plane.parse(plane)
    out = grid
    for name in plane.frozen:
        out = out.with_axis(name, AxisSpec(frozen=0.0))
    logger.debug("Restricted grid | plane=%s | grid=%s", plane.value, out.describe())
    return out


def e_product(d1: GridDomain, d2: GridDomain) -> GridDomain:
    """T-cartesian set D1 x_e D2 from two z1-plane grids (P1 over D1, P2 over D2)."""
    return GridDomain(x=d1.x, y=d1.y, p=d2.x, q=d2.y, chart=Chart.IDEMPOTENT)


# ----------------------------------------------------------------------
# Sampled fields
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class SampledField:
    domain: GridDomain
    values: Bicomplex

    def __post_init__(self) -> None:
        n = int(np.prod(self.values.shape)) if self.values.shape else 1
        if n != self.domain.size:
            raise ValueError(f"{n} samples for a grid of {self.domain.size} points")

    def grid_values(self) -> Tuple[np.ndarray, ...]:
        """Components reshaped to the full (x, y, p, q) lattice."""
        full = self.values.broadcast()
        return tuple(np.reshape(c, self.domain.full_shape) for c in full.components())

    def max_norm(self) -> float:
        return float(np.max(self.values.norm()))

    def second_difference(self, axis: str) -> Bicomplex:
        """Central second difference along ``axis`` on the interior lattice."""
        if not self.domain.axis(axis).active:
            raise ValueError(f"axis {axis} is frozen")
        k = AXES.index(axis)
        h = self.domain.axis(axis).step
        parts = []
        for c in self.grid_values():
            lead = np.take(c, range(2, c.shape[k]), axis=k)
            mid = np.take(c, range(1, c.shape[k] - 1), axis=k)
            lag = np.take(c, range(0, c.shape[k] - 2), axis=k)
            parts.append(_interior((lead - 2.0 * mid + lag) / (h * h), self.domain, skip=k).ravel())
        return Bicomplex(*parts)

    def interior(self) -> Bicomplex:
        """Values at points with a full stencil on every active axis."""
        return Bicomplex(*(_interior(c, self.domain).ravel() for c in self.grid_values()))


def _interior(array: np.ndarray, domain: GridDomain, skip: Optional[int] = None) -> np.ndarray:
    for k, name in enumerate(AXES):
        if k == skip or not domain.axis(name).active:
            continue
        array = np.take(array, range(1, array.shape[k] - 1), axis=k)
    return array


def sample(e: Expr, grid: GridDomain) -> SampledField:
    values = evaluate(e, grid.env())
    if values.is_scalar:
        values = values + Bicomplex(np.zeros(grid.size))
    return SampledField(grid, values.broadcast())


# ----------------------------------------------------------------------
# Pointwise stencils on an expression (independent of the grid spacing)
# ----------------------------------------------------------------------
Sampler = Callable[[Mapping[str, np.ndarray]], Bicomplex]


def sampler(e: Expr, chart: Chart = Chart.CARTESIAN) -> Sampler:
    def at(coords: Mapping[str, np.ndarray]) -> Bicomplex:
        return evaluate(e, env_from_coordinates(coords, chart))

    return at


def _shift(coords: Mapping[str, np.ndarray], **delta: float) -> Dict[str, np.ndarray]:
    return {n: np.asarray(coords[n]) + delta.get(n, 0.0) for n in AXES}


def first_difference(f: Sampler, coords: Mapping[str, np.ndarray], axis: str, h: float) -> Bicomplex:
    return (f(_shift(coords, **{axis: h})) - f(_shift(coords, **{axis: -h}))).scale(1.0 / (2.0 * h))


def second_difference(f: Sampler, coords: Mapping[str, np.ndarray], axis: str, h: float) -> Bicomplex:
    centre = f(coords)
    ahead = f(_shift(coords, **{axis: h}))
    behind = f(_shift(coords, **{axis: -h}))
    return (ahead - centre.scale(2.0) + behind).scale(1.0 / (h * h))


def mixed_difference(f: Sampler, coords: Mapping[str, np.ndarray], a: str, b: str, h: float) -> Bicomplex:
    pp = f(_shift(coords, **{a: h, b: h}))
    pm = f(_shift(coords, **{a: h, b: -h}))
    mp = f(_shift(coords, **{a: -h, b: h}))
    mm = f(_shift(coords, **{a: -h, b: -h}))
    return (pp - pm - mp + mm).scale(1.0 / (4.0 * h * h))


def max_residual(difference: Bicomplex, *references: Bicomplex) -> Tuple[float, float, int]:
    """(max, mean, argmax) of the pointwise Euclidean norm of ``difference``.

    With ``references`` the norm is divided by max(1, |r1|, |r2|, ...).
    """
    norm = np.atleast_1d(np.asarray(difference.norm(), dtype=float))
    if references:
        scale = np.ones_like(norm)
        for ref in references:
            scale = np.maximum(scale, np.atleast_1d(np.asarray(ref.norm(), dtype=float)))
        norm = norm / scale
    if not np.all(np.isfinite(norm)):
        bad = int(np.flatnonzero(~np.isfinite(norm))[0])
        raise EvaluationError("non-finite residual", bad)
    k = int(np.argmax(norm))
    return float(norm[k]), float(np.mean(norm)), k
