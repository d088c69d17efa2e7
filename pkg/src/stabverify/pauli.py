"""Signed Pauli strings, graph-state generators, stabilizer groups, local frames.

Conventions used throughout the package:
  * qubits are numbered 1..n; bit q-1 of any mask or index refers to qubit q
    (little endian);
  * a PauliString stores X/Z bit masks plus an overall sign; the qubit factor
    for mask bits (x, z) is I, X, Z, Y for (0,0), (1,0), (0,1), (1,1);
  * stabilizer group elements are indexed by k in [0, 2^n): bit a-1 of k says
    whether generator a enters the product, so k = k1 + 2*k2 + 4*k3 + ...;
  * text serialization puts qubit 1 leftmost, e.g. "-ZZII".
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field


class NotTwoColorableError(ValueError):
    """Raised when a graph contains an odd cycle."""


_CHAR_TO_BITS = {"I": (0, 0), "X": (1, 0), "Z": (0, 1), "Y": (1, 1)}
_BITS_TO_CHAR = {v: k for k, v in _CHAR_TO_BITS.items()}


@dataclass(frozen=True)
class PauliString:
    """Signed n-qubit Pauli operator in bit-mask form."""

    n: int
    x: int
    z: int
    sign: int = 1

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("need at least one qubit")
        mask = (1 << self.n) - 1
        if self.x & ~mask or self.z & ~mask:
            raise ValueError("mask has bits outside the qubit range")
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")

    @classmethod
    def identity(cls, n: int) -> "PauliString":
        return cls(n, 0, 0, 1)

    @classmethod
    def from_string(cls, text: str) -> "PauliString":
        s = text.strip()
        sign = 1
        if s.startswith("-"):
            sign = -1
            s = s[1:]
        elif s.startswith("+"):
            s = s[1:]
        if not s:
            raise ValueError(f"empty Pauli string: {text!r}")
        x = z = 0
        for q, ch in enumerate(s, start=1):
            try:
                bx, bz = _CHAR_TO_BITS[ch.upper()]
            except KeyError:
                raise ValueError(f"invalid Pauli letter {ch!r} in {text!r}") from None
            x |= bx << (q - 1)
            z |= bz << (q - 1)
        return cls(len(s), x, z, sign)

    def to_string(self) -> str:
        chars = [
            _BITS_TO_CHAR[((self.x >> (q - 1)) & 1, (self.z >> (q - 1)) & 1)]
            for q in range(1, self.n + 1)
        ]
        return ("-" if self.sign < 0 else "") + "".join(chars)

    def __str__(self):
        return self.to_string()

    @property
    def weight(self) -> int:
        return (self.x | self.z).bit_count()

    @property
    def y_count(self) -> int:
        return (self.x & self.z).bit_count()

    def commutes_with(self, other: "PauliString") -> bool:
        _check_same_n(self, other)
        return ((self.x & other.z).bit_count() + (self.z & other.x).bit_count()) % 2 == 0


def _check_same_n(p: PauliString, q: PauliString):
    if p.n != q.n:
        raise ValueError(f"qubit counts differ: {p.n} vs {q.n}")


def _bare_product(p: PauliString, q: PauliString):
    """Masks of p*q with the accumulated power of i (mod 4).

    Each factor is taken in the convention P = i^{x.z} X^x Z^z per qubit,
    which makes the (1,1) factor equal to Y.
    """
    x3 = p.x ^ q.x
    z3 = p.z ^ q.z
    phase = (
        (p.x & p.z).bit_count()
        + (q.x & q.z).bit_count()
        - (x3 & z3).bit_count()
        + 2 * (p.z & q.x).bit_count()
    ) % 4
    return x3, z3, phase


def multiply(p: PauliString, q: PauliString) -> PauliString:
    """Signed product of two commuting Pauli strings.

    Anticommuting inputs would produce a factor +/-i, which never occurs
    among stabilizer elements of a graph state, so they are rejected.
    """
    _check_same_n(p, q)
    x3, z3, phase = _bare_product(p, q)
    if phase % 2:
        raise ValueError(
            f"anticommuting product {p} * {q} carries an imaginary phase"
        )
    sign = p.sign * q.sign * (1 if phase == 0 else -1)
    return PauliString(p.n, x3, z3, sign)


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices 1..n."""

    n: int
    edges: frozenset[tuple[int, int]]

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("graph needs at least one vertex")
        norm = set()
        for e in self.edges:
            a, b = e
            if a == b:
                raise ValueError(f"self-loop at vertex {a}")
            if not (1 <= a <= self.n and 1 <= b <= self.n):
                raise ValueError(f"edge {e} outside vertex range 1..{self.n}")
            norm.add((min(a, b), max(a, b)))
        object.__setattr__(self, "edges", frozenset(norm))

    @classmethod
    def from_edges(cls, n: int, edges) -> "Graph":
        return cls(n, frozenset(tuple(e) for e in edges))

    @classmethod
    def path(cls, n: int) -> "Graph":
        return cls.from_edges(n, [(a, a + 1) for a in range(1, n)])

    def neighbors(self, a: int) -> set[int]:
        out = set()
        for u, v in self.edges:
            if u == a:
                out.add(v)
            elif v == a:
                out.add(u)
        return out

    def to_json_dict(self) -> dict:
        return {"n": self.n, "edges": sorted(list(e) for e in self.edges)}

    @classmethod
    def from_json_dict(cls, d: dict) -> "Graph":
        try:
            return cls.from_edges(int(d["n"]), d.get("edges", []))
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed graph object: {d!r}") from exc


_SIGNED_TOKENS = {}
for _s, _sv in (("+", 1), ("-", -1), ("", 1)):
    for _c, _bits in _CHAR_TO_BITS.items():
        if _c != "I":
            _SIGNED_TOKENS[_s + _c] = (_bits[0], _bits[1], _sv)


def _parse_signed_pauli(token: str):
    try:
        return _SIGNED_TOKENS[token.strip().upper()]
    except KeyError:
        raise ValueError(f"invalid signed Pauli token {token!r}") from None


def _format_signed_pauli(bits):
    bx, bz, s = bits
    return ("+" if s > 0 else "-") + _BITS_TO_CHAR[(bx, bz)]


@dataclass(frozen=True)
class LocalFrame:
    """Per-qubit signed substitution of X and Z (a local Clifford action).

    images[q-1] is a pair ((x-image), (z-image)); each image is a tuple
    (x_bit, z_bit, sign) encoding a signed single-qubit Pauli.
    """

    n: int
    images: tuple

    def __post_init__(self):
        if len(self.images) != self.n:
            raise ValueError("need one image pair per qubit")
        for q, (ix, iz) in enumerate(self.images, start=1):
            for im in (ix, iz):
                bx, bz, s = im
                if (bx, bz) == (0, 0) or s not in (1, -1):
                    raise ValueError(f"invalid image {im} on qubit {q}")
            # images of X and Z must anticommute for a valid Clifford action
            if (ix[0] & iz[1]) ^ (ix[1] & iz[0]) != 1:
                raise ValueError(
                    f"images on qubit {q} commute; not a valid frame"
                )

    @classmethod
    def identity(cls, n: int) -> "LocalFrame":
        return cls(n, tuple(((1, 0, 1), (0, 1, 1)) for _ in range(n)))

    @classmethod
    def from_tokens(cls, pairs) -> "LocalFrame":
        """pairs: iterable of (x_token, z_token), e.g. ("-Z", "+X")."""
        images = tuple(
            (_parse_signed_pauli(tx), _parse_signed_pauli(tz)) for tx, tz in pairs
        )
        return cls(len(images), images)

    def to_json_list(self) -> list:
        return [
            {"X": _format_signed_pauli(ix), "Z": _format_signed_pauli(iz)}
            for ix, iz in self.images
        ]

    @classmethod
    def from_json_list(cls, items) -> "LocalFrame":
        try:
            return cls.from_tokens((d["X"], d["Z"]) for d in items)
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed frame list: {items!r}") from exc

    def is_identity(self) -> bool:
        return self == LocalFrame.identity(self.n)


def apply_frame(frame: LocalFrame, p: PauliString) -> PauliString:
    """Image of p under the frame substitution, with the exact sign."""
    if frame.n != p.n:
        raise ValueError(f"qubit counts differ: {frame.n} vs {p.n}")
    n = p.n
    # split p into an X-part and a Z-part, mapping each qubit factor through
    # the frame; the i^{y_count} prefactor accounts for Y = i X Z per qubit
    xs_x = xs_z = zs_x = zs_z = 0
    sign = p.sign
    for q in range(1, n + 1):
        bit = 1 << (q - 1)
        ix, iz = frame.images[q - 1]
        if p.x & bit:
            xs_x |= ix[0] << (q - 1)
            xs_z |= ix[1] << (q - 1)
            sign *= ix[2]
        if p.z & bit:
            zs_x |= iz[0] << (q - 1)
            zs_z |= iz[1] << (q - 1)
            sign *= iz[2]
    xpart = PauliString(n, xs_x, xs_z, 1)
    zpart = PauliString(n, zs_x, zs_z, 1)
    x3, z3, phase = _bare_product(xpart, zpart)
    phase = (phase + p.y_count) % 4
    if phase % 2:
        raise ValueError("frame image carries an imaginary phase (invalid frame)")
    sign *= 1 if phase == 0 else -1
    return PauliString(n, x3, z3, sign)


def generators(graph: Graph) -> list[PauliString]:
    """Graph-state generators: X on vertex a, Z on each neighbor, sign +1."""
    out = []
    for a in range(1, graph.n + 1):
        z = 0
        for b in graph.neighbors(a):
            z |= 1 << (b - 1)
        out.append(PauliString(graph.n, 1 << (a - 1), z, 1))
    return out


def stabilizer_group(gens: list[PauliString]) -> list[PauliString]:
    """All 2^n products of the generators, indexed by the generator bit mask.

    Element k equals the product of generator a over set bits a-1 of k;
    index 0 is the identity.
    """
    if not gens:
        raise ValueError("need at least one generator")
    n = gens[0].n
    for i, g in enumerate(gens):
        for h in gens[i + 1:]:
            if not g.commutes_with(h):
                raise ValueError("generators must commute pairwise")
    group = [PauliString.identity(n)] * (1 << len(gens))
    for k in range(1, 1 << len(gens)):
        low = k & (-k)
        group[k] = multiply(gens[low.bit_length() - 1], group[k ^ low])
    seen = {(g.x, g.z) for g in group}
    if len(seen) != len(group):
        raise ValueError("generators are dependent (duplicate group elements)")
    return group


def transformed_generators(graph: Graph, frame: LocalFrame) -> list[PauliString]:
    return [apply_frame(frame, g) for g in generators(graph)]


@dataclass(frozen=True)
class TwoColoring:
    """Bipartition of the vertices with no edge inside either class."""

    amber: frozenset[int]
    blue: frozenset[int]

    def __post_init__(self):
        if len(self.amber) < len(self.blue):
            raise ValueError("amber must be the larger class")

    @property
    def b_size(self) -> int:
        return len(self.blue)


def two_coloring(graph: Graph) -> TwoColoring:
    """BFS two-coloring; |blue| <= |amber|.  Requires a connected graph."""
    color = {1: 0}
    queue = [1]
    while queue:
        v = queue.pop()
        for u in graph.neighbors(v):
            if u not in color:
                color[u] = 1 - color[v]
                queue.append(u)
            elif color[u] == color[v]:
                raise NotTwoColorableError(
                    "graph is not two-colorable (odd cycle)"
                )
    if len(color) != graph.n:
        raise ValueError("graph is not connected")
    c0 = frozenset(v for v, c in color.items() if c == 0)
    c1 = frozenset(v for v, c in color.items() if c == 1)
    if len(c0) < len(c1):
        c0, c1 = c1, c0
    return TwoColoring(amber=c0, blue=c1)


def graph_to_json(graph: Graph) -> str:
    return json.dumps(graph.to_json_dict())


def graph_from_json(text: str) -> Graph:
    return Graph.from_json_dict(json.loads(text))
