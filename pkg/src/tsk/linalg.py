"""Exact linear algebra for subspaces of C^r with rational coordinates.

All subspace data in this library is defined over Q (lines with rational
slope, spans of rational vectors), so a subspace is stored as a reduced
row-echelon basis with Fraction entries.  Equality of subspaces is
literal equality of the canonical RREF rows.

Rank 2 is the hot case: there a subspace is Zero, a Line, or Full, and
`line2` canonicalizes a line to a coprime integer pair with positive
first nonzero entry, so meets/joins reduce to tuple comparisons.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

Scalar = int | Fraction

Vector = tuple[Fraction, ...]


def _rref(rows: Iterable[Sequence[Scalar]], width: int) -> tuple[Vector, ...]:
    """Reduced row echelon form; returns the nonzero rows, canonical."""
    mat = [[Fraction(x) for x in row] for row in rows]
    for row in mat:
        if len(row) != width:
            raise ValueError(f"expected vectors of length {width}")
    pivot_row = 0
    for col in range(width):
        pivot = next(
            (r for r in range(pivot_row, len(mat)) if mat[r][col] != 0), None
        )
        if pivot is None:
            continue
        mat[pivot_row], mat[pivot] = mat[pivot], mat[pivot_row]
        inv = mat[pivot_row][col]
        mat[pivot_row] = [x / inv for x in mat[pivot_row]]
        for r in range(len(mat)):
            if r != pivot_row and mat[r][col] != 0:
                factor = mat[r][col]
                mat[r] = [a - factor * b for a, b in zip(mat[r], mat[pivot_row])]
        pivot_row += 1
        if pivot_row == len(mat):
            break
    return tuple(tuple(row) for row in mat[:pivot_row] if any(x != 0 for x in row))


def line2(p: int, q: int) -> tuple[int, int]:
    """Canonical coprime representative of the line C*(p, q) in C^2."""
    if p == 0 and q == 0:
        raise ValueError("the zero vector spans no line")
    g = gcd(p, q)
    p, q = p // g, q // g
    if p < 0 or (p == 0 and q < 0):
        p, q = -p, -q
    return (p, q)


class Subspace:
    """A linear subspace of C^r with rational RREF basis.

    Immutable and hashable.  `rows` is the canonical reduced
    row-echelon basis (tuple of Fraction tuples), so two Subspace
    instances are equal iff they are the same subspace.
    """

    __slots__ = ("r", "rows")

    def __init__(self, r: int, rows: Iterable[Sequence[Scalar]] = ()) -> None:
        if r < 1:
            raise ValueError("ambient rank must be >= 1")
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "rows", _rref(rows, r))

    def __setattr__(self, *_: object) -> None:
        raise AttributeError("Subspace is immutable")

    # -- constructors ---------------------------------------------------

    @classmethod
    def zero(cls, r: int) -> "Subspace":
        return _ZERO.setdefault(r, cls(r))

    @classmethod
    def full(cls, r: int) -> "Subspace":
        try:
            return _FULL[r]
        except KeyError:
            basis = [[1 if i == j else 0 for j in range(r)] for i in range(r)]
            return _FULL.setdefault(r, cls(r, basis))

    @classmethod
    def line(cls, p: int, q: int) -> "Subspace":
        """The line C*(p, q) in C^2 (canonicalized)."""
        key = line2(p, q)
        try:
            return _LINE[key]
        except KeyError:
            return _LINE.setdefault(key, cls(2, [key]))

    @classmethod
    def span(cls, r: int, vectors: Iterable[Sequence[Scalar]]) -> "Subspace":
        return cls(r, vectors)

    # -- basic protocol -------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.r == other.r and self.rows == other.rows

    def __hash__(self) -> int:
        return hash((self.r, self.rows))

    def __repr__(self) -> str:
        if self.dim == 0:
            return f"Subspace.zero({self.r})"
        if self.dim == self.r:
            return f"Subspace.full({self.r})"
        if self.r == 2:
            p, q = self.line_pair()
            return f"Subspace.line({p}, {q})"
        return f"Subspace({self.r}, {[list(row) for row in self.rows]!r})"

    @property
    def dim(self) -> int:
        return len(self.rows)

    def line_pair(self) -> tuple[int, int]:
        """The canonical coprime (p, q) of a line in C^2."""
        if self.r != 2 or self.dim != 1:
            raise ValueError(f"{self!r} is not a line in C^2")
        (a, b), = self.rows
        return line2(
            a.numerator * b.denominator, b.numerator * a.denominator
        )

    # -- lattice operations ----------------------------------------------

    def _match(self, other: "Subspace") -> None:
        if not isinstance(other, Subspace):
            raise TypeError(f"expected Subspace, got {other!r}")
        if self.r != other.r:
            raise ValueError("subspaces live in different ambient spaces")

    def __le__(self, other: "Subspace") -> bool:
        """Containment self <= other."""
        self._match(other)
        if self.dim > other.dim:
            return False
        if self.dim == 0 or self.rows == other.rows:
            return True
        if other.dim == other.r:
            return True
        return _rref(self.rows + other.rows, self.r) == other.rows

    def join(self, other: "Subspace") -> "Subspace":
        """Sum of subspaces."""
        self._match(other)
        if self.dim == 0 or other.rows == self.rows:
            return other
        if other.dim == 0:
            return self
        if self.dim == self.r:
            return self
        if other.dim == other.r:
            return other
        return Subspace(self.r, self.rows + other.rows)

    def meet(self, other: "Subspace") -> "Subspace":
        """Intersection of subspaces."""
        self._match(other)
        if self.dim == 0 or other.rows == self.rows:
            return self
        if other.dim == 0:
            return other
        if self.dim == self.r:
            return other
        if other.dim == other.r:
            return self
        if self.r == 2:
            # Two distinct lines in C^2 meet in zero.
            return Subspace.zero(2)
        return _meet_general(self, other)

    def codim_in(self, other: "Subspace") -> int:
        if not self <= other:
            raise ValueError(f"{self!r} is not contained in {other!r}")
        return other.dim - self.dim


def _meet_general(a: Subspace, b: Subspace) -> Subspace:
    """Intersection via the kernel of the stacked coefficient system.

    Solve x in row-space(a) and x in row-space(b) by parametrizing
    x = s*A = t*B and solving s*A - t*B = 0 with Gaussian elimination
    over Q on the stacked matrix [A; -B]^T kernel.
    """
    r = a.r
    rows_a, rows_b = a.rows, b.rows
    k, l = len(rows_a), len(rows_b)
    # Kernel of the (k+l) x r matrix M with rows from A and -B, i.e.
    # coefficient vectors (s, t) with s*A = t*B.
    mat = [[rows_a[i][c] if i < k else -rows_b[i - k][c] for i in range(k + l)]
           for c in range(r)]
    kernel = _nullspace(mat, k + l)
    vectors = []
    for coeffs in kernel:
        vec = [Fraction(0)] * r
        for i in range(k):
            if coeffs[i]:
                for c in range(r):
                    vec[c] += coeffs[i] * rows_a[i][c]
        vectors.append(vec)
    return Subspace(r, vectors)


def _nullspace(mat: list[list[Fraction]], width: int) -> list[list[Fraction]]:
    """Basis of the right kernel of `mat` (rows are equations)."""
    reduced = list(_rref(mat, width))
    pivots = []
    for row in reduced:
        pivots.append(next(i for i, x in enumerate(row) if x != 0))
    free = [i for i in range(width) if i not in pivots]
    basis = []
    for f in free:
        vec = [Fraction(0)] * width
        vec[f] = Fraction(1)
        for row, p in zip(reduced, pivots):
            vec[p] = -row[f]
        basis.append(vec)
    return basis


def join_all(r: int, spaces: Iterable[Subspace]) -> Subspace:
    out = Subspace.zero(r)
    for s in spaces:
        out = out.join(s)
        if out.dim == r:
            break
    return out


def meet_all(r: int, spaces: Iterable[Subspace]) -> Subspace:
    out = Subspace.full(r)
    for s in spaces:
        out = out.meet(s)
        if out.dim == 0:
            break
    return out


def echelon_hyperplane(big: Subspace, small: Subspace) -> Subspace:
    """The echelon-first hyperplane H with small <= H < big, codim 1.

    Extends a basis of `small` by rows of big's RREF basis (in order)
    until dimension dim(big) - 1 is reached.  Deterministic; in rank 2
    this returns Zero below a line and the unique/echelon-first line
    below the full space.
    """
    if not small <= big:
        raise ValueError("small subspace not contained in big subspace")
    if big.dim - small.dim < 1:
        raise ValueError("no room for a hyperplane between equal subspaces")
    rows = list(small.rows)
    current = small
    for row in big.rows:
        if len(rows) == big.dim - 1:
            break
        candidate = Subspace(big.r, rows + [row])
        if candidate.dim > current.dim:
            rows.append(row)
            current = candidate
    return current


_ZERO: dict[int, Subspace] = {}
_FULL: dict[int, Subspace] = {}
_LINE: dict[tuple[int, int], Subspace] = {}
