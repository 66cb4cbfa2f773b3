"""Action of the cyclic group of prime order p on polynomials and points.

The representation is a direct sum of unipotent Jordan blocks over a field of
characteristic p.  On coordinates the generator fixes each block's first
variable and sends every later one to itself plus its predecessor; the same
substitution defines the action on polynomials.  delta = sigma - id is the
difference operator whose kernel is the invariant ring.
"""

from dataclasses import dataclass
from functools import cached_property

from .poly import Polynomial, VariableTable
from .rings import Ring, Scalar, is_prime


class BlockExceedsP(Exception):
    """A Jordan block larger than p is not unipotent of order p."""


class NotSingleBlock(Exception):
    """Operation defined only for single-block representations."""


class BlockTooSmall(Exception):
    """Operation needs a block of size at least 2."""


@dataclass(frozen=True)
class RepresentationSpec:
    """Prime p together with the Jordan block sizes, each in 1..p."""

    p: int
    blocks: tuple

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"p must be prime, got {self.p}")
        object.__setattr__(self, "blocks", tuple(int(s) for s in self.blocks))
        if not self.blocks:
            raise ValueError("at least one block is required")
        for s in self.blocks:
            if s < 1:
                raise ValueError(f"block sizes must be positive, got {s}")
            if s > self.p:
                raise BlockExceedsP("block size exceeds p")

    @cached_property
    def n(self) -> int:
        return sum(self.blocks)

    @cached_property
    def m(self) -> int:
        """Number of nontrivial blocks (size >= 2)."""
        return sum(1 for s in self.blocks if s >= 2)

    @cached_property
    def r(self) -> int:
        """Number of trivial blocks (size 1)."""
        return sum(1 for s in self.blocks if s == 1)

    @cached_property
    def table(self) -> VariableTable:
        return VariableTable(self.blocks)


# ---------------------------------------------------------------------------
# Action on polynomials.


def _sigma_images(f: Polynomial) -> dict:
    table = f.table
    images = {}
    for i in range(table.n):
        _, pos = table.positions[i]
        xi = Polynomial.variable(f.ring, table, i)
        if pos == 1:
            images[i] = xi
        else:
            # the predecessor within the block is the previous flat variable
            images[i] = Polynomial.variable(f.ring, table, i - 1) + xi
    return images


def sigma(f: Polynomial) -> Polynomial:
    """Generator action: first variable of each block fixed, later ones sent
    to themselves plus their predecessor."""
    return f.substitute(_sigma_images(f))


def delta(f: Polynomial) -> Polynomial:
    """sigma(f) - f; zero exactly on invariants."""
    return sigma(f) - f


def delta_component(f: Polynomial, d: int) -> Polynomial:
    """Weight-d homogeneous part of delta(f)."""
    return delta(f).weight_components().get(d, Polynomial.zero(f.ring, f.table))


# ---------------------------------------------------------------------------
# Action on points.


@dataclass(frozen=True)
class PointVector:
    """A point of the representation over a finite field (raw coordinates)."""

    spec: RepresentationSpec
    ring: Ring
    coords: tuple

    def __post_init__(self):
        if len(self.coords) != self.spec.n:
            raise ValueError(f"{len(self.coords)} coordinates for n={self.spec.n}")
        if getattr(self.ring, "p", None) != self.spec.p:
            raise ValueError(f"field characteristic must be {self.spec.p}")

    def scalars(self):
        return tuple(Scalar(self.ring, c) for c in self.coords)

    def render(self) -> str:
        texts = [self.ring.render(c) for c in self.coords]
        if any("," in t for t in texts):
            texts = [f"({t})" for t in texts]
        return ",".join(texts)


def act_raw(blocks, ring: Ring, coords: tuple) -> tuple:
    """Generator action on raw coordinates, block by block."""
    out = list(coords)
    offset = 0
    for size in blocks:
        for j in range(size - 1, 0, -1):
            out[offset + j] = ring.add(coords[offset + j - 1], coords[offset + j])
        offset += size
    return tuple(out)


def orbit_raw(blocks, ring: Ring, coords: tuple) -> list:
    """Full orbit, starting at coords; length is 1 or p."""
    out = [coords]
    nxt = act_raw(blocks, ring, coords)
    while nxt != coords:
        out.append(nxt)
        nxt = act_raw(blocks, ring, nxt)
    return out


def in_b_raw(blocks, ring: Ring, coords: tuple) -> bool:
    """Whether every nontrivial block has a nonzero leading coordinate."""
    zero = ring.zero()
    offset = 0
    for size in blocks:
        if size >= 2 and coords[offset] == zero:
            return False
        offset += size
    return True


def act_point(v: PointVector) -> PointVector:
    return PointVector(v.spec, v.ring, act_raw(v.spec.blocks, v.ring, v.coords))


def orbit(v: PointVector) -> list:
    return [PointVector(v.spec, v.ring, c) for c in orbit_raw(v.spec.blocks, v.ring, v.coords)]


def orbit_rep_raw(blocks, ring: Ring, coords: tuple) -> tuple:
    """Canonical representative: the lexicographically smallest orbit point."""
    return min(orbit_raw(blocks, ring, coords), key=lambda c: tuple(ring.sort_key(x) for x in c))


def in_open_set_B(v: PointVector) -> bool:
    return in_b_raw(v.spec.blocks, v.ring, v.coords)


def project_phi(v: PointVector) -> PointVector:
    """Drop the last coordinate of a single-block point (n >= 2)."""
    if len(v.spec.blocks) != 1:
        raise NotSingleBlock("projection is defined for a single block")
    n = v.spec.n
    if n < 2:
        raise BlockTooSmall("projection needs a block of size at least 2")
    return PointVector(RepresentationSpec(v.spec.p, (n - 1,)), v.ring, v.coords[:-1])
