"""Fan of projective space and its weight combinatorics.

The fan of P^n lives in N = Z^n with rays

    u_1 = e_1, ..., u_n = e_n,    u_0 = -(e_1 + ... + e_n),

and cones sigma_I spanned by {u_i : i in I} for every subset
I of {0, ..., n} with |I| <= n (all such subsets are cones of the fan;
|I| = n + 1 is excluded because the rays are not independent).

Cones are represented by sorted tuples of ray indices.  A character
m in M = Z^n is a length-n integer tuple; its class in M/(sigma^perp & M)
is stored as the tuple of pairings (<m, u_rho>) for rho in the cone,
in sorted ray order.  The componentwise order on those coordinate
tuples is exactly the cone order m <=_sigma m' (difference lies in the
dual cone).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterator

Cone = tuple[int, ...]
Weight = tuple[int, ...]


def _check_cone(n: int, cone: Cone) -> Cone:
    cone = tuple(cone)
    if list(cone) != sorted(set(cone)):
        raise ValueError(f"cone rays must be sorted and distinct: {cone!r}")
    if cone and not (0 <= cone[0] and cone[-1] <= n):
        raise ValueError(f"ray index out of range for P^{n}: {cone!r}")
    if len(cone) > n:
        raise ValueError(
            f"no {len(cone)}-dimensional cones in the fan of P^{n}: {cone!r}"
        )
    return cone


@dataclass(frozen=True, slots=True)
class Fan:
    """The complete fan of P^n (n >= 1)."""

    n: int

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("P^n needs n >= 1")

    @property
    def rays(self) -> range:
        """Ray indices 0..n; ray 0 is u_0 = -(e_1 + ... + e_n)."""
        return range(self.n + 1)

    def ray_vector(self, ray: int) -> tuple[int, ...]:
        """The primitive generator u_ray as a vector in N = Z^n."""
        if not 0 <= ray <= self.n:
            raise ValueError(f"ray {ray} out of range for P^{self.n}")
        if ray == 0:
            return (-1,) * self.n
        return tuple(1 if i == ray - 1 else 0 for i in range(self.n))

    def cones(self, k: int) -> list[Cone]:
        """All k-dimensional cones, lexicographically sorted."""
        if not 0 <= k <= self.n:
            raise ValueError(f"no {k}-cones in the fan of P^{self.n}")
        return [tuple(c) for c in combinations(range(self.n + 1), k)]

    def all_cones(self, min_dim: int = 0) -> Iterator[Cone]:
        """All cones of dimension >= min_dim, by (dimension, lex) order."""
        for k in range(min_dim, self.n + 1):
            yield from self.cones(k)

    def dim(self, cone: Cone) -> int:
        return len(_check_cone(self.n, cone))

    def codim(self, cone: Cone) -> int:
        return self.n - len(_check_cone(self.n, cone))

    def u_sigma(self, cone: Cone) -> tuple[int, ...]:
        """Sum of the ray generators of the cone (a vector in N)."""
        _check_cone(self.n, cone)
        total = [0] * self.n
        for ray in cone:
            for i, v in enumerate(self.ray_vector(ray)):
                total[i] += v
        return tuple(total)

    def pairing(self, m: Weight, ray: int) -> int:
        """<m, u_ray> for a character m in M = Z^n."""
        if len(m) != self.n:
            raise ValueError(f"character must have length {self.n}: {m!r}")
        if ray == 0:
            return -sum(m)
        if not 1 <= ray <= self.n:
            raise ValueError(f"ray {ray} out of range for P^{self.n}")
        return m[ray - 1]

    def weight_class(self, cone: Cone, m: Weight) -> Weight:
        """Coordinates of [m] in M/(sigma^perp & M): (<m, u_rho>)_{rho in cone}."""
        _check_cone(self.n, cone)
        return tuple(self.pairing(m, ray) for ray in cone)

    def facets(self, cone: Cone) -> list[Cone]:
        """Codimension-one faces of the cone, one per omitted ray, in
        the cone's ray order."""
        cone = _check_cone(self.n, cone)
        return [cone[:i] + cone[i + 1 :] for i in range(len(cone))]

    def cofaces(self, cone: Cone) -> list[Cone]:
        """All cones containing `cone` (itself included), by (dim, lex)."""
        cone = _check_cone(self.n, cone)
        rest = [r for r in range(self.n + 1) if r not in cone]
        out = []
        for extra in range(self.n - len(cone) + 1):
            grown = [tuple(sorted(cone + more)) for more in combinations(rest, extra)]
            out.extend(sorted(grown))
        return out


def le_componentwise(a: Weight, b: Weight) -> bool:
    """Componentwise <=; on cone coordinates this is the order <=_sigma."""
    if len(a) != len(b):
        raise ValueError("cannot compare coordinate tuples of different length")
    return all(x <= y for x, y in zip(a, b))


def lt_componentwise(a: Weight, b: Weight) -> bool:
    """Strictly below: componentwise <= and not equal."""
    return le_componentwise(a, b) and a != b
