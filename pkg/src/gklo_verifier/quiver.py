"""Quivers with a fixed-point-free involution, their dimension vectors and Cartan data."""

from __future__ import annotations

from collections import Counter
from collections.abc import Iterable, Mapping
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from .errors import IndexOutOfRange

Edge = tuple[int, int]


@dataclass(frozen=True)
class Violation:
    axiom: str
    subject: str
    message: str

    def __str__(self) -> str:
        return f"[{self.axiom}] {self.subject}: {self.message}"


@dataclass(frozen=True)
class QuiverWithInvolution:
    vertices: tuple[int, ...]
    edges: tuple[Edge, ...]
    tau: tuple[tuple[int, int], ...]
    plus: tuple[int, ...] | None = None

    @classmethod
    def build(
        cls,
        vertices: Iterable[int],
        edges: Iterable[Edge],
        tau: Mapping[int, int] | Iterable[tuple[int, int]],
        plus: Iterable[int] | None = None,
    ) -> QuiverWithInvolution:
        """Build from loose data; tau may list each orbit once."""
        pairs = tau.items() if isinstance(tau, Mapping) else tau
        mapping: dict[int, int] = {}
        for a, b in pairs:
            mapping.setdefault(a, b)
            mapping.setdefault(b, a)
        return cls(
            vertices=tuple(vertices),
            edges=tuple((int(s), int(t)) for s, t in edges),
            tau=tuple(sorted(mapping.items())),
            plus=tuple(sorted(plus)) if plus is not None else None,
        )

    @cached_property
    def tau_map(self) -> dict[int, int]:
        return dict(self.tau)

    def check_vertex(self, i: int) -> None:
        if i not in self.tau_map or i not in self.vertices:
            raise IndexOutOfRange(f"unknown vertex {i}")

    def involution(self, i: int) -> int:
        self.check_vertex(i)
        return self.tau_map[i]

    def edge_involution(self, edge: Edge) -> Edge:
        s, t = edge
        return (self.involution(t), self.involution(s))

    @cached_property
    def plus_vertices(self) -> tuple[int, ...]:
        if self.plus is not None:
            return self.plus
        return tuple(sorted({min(i, self.tau_map[i]) for i in self.vertices if i in self.tau_map}))

    @cached_property
    def minus_vertices(self) -> tuple[int, ...]:
        plus = set(self.plus_vertices)
        return tuple(i for i in sorted(self.vertices) if i not in plus)

    def is_plus(self, i: int) -> bool:
        self.check_vertex(i)
        return i in self.plus_vertices

    def is_fixed(self, edge: Edge) -> bool:
        s, t = edge
        return self.tau_map.get(s) == t

    @cached_property
    def fixed_edges(self) -> tuple[Edge, ...]:
        return tuple(h for h in self.edges if self.is_fixed(h))

    @cached_property
    def plus_edges(self) -> tuple[Edge, ...]:
        """Q1+: the lexicographically smaller edge of each non-fixed orbit."""
        return tuple(h for h in self.edges if not self.is_fixed(h) and h < self.edge_involution(h))

    def edges_from(self, i: int) -> tuple[Edge, ...]:
        return tuple(h for h in self.edges if h[0] == i)

    def edges_into(self, i: int) -> tuple[Edge, ...]:
        return tuple(h for h in self.edges if h[1] == i)

    def cartan(self, i: int, j: int) -> int:
        self.check_vertex(i)
        self.check_vertex(j)
        if i == j:
            return 2
        return -sum(1 for s, t in self.edges if {s, t} == {i, j})

    def delta_arrow(self, i: int) -> int:
        """1 when there is an edge from i to its involution image."""
        return 1 if (i, self.involution(i)) in self.edges else 0


@dataclass(frozen=True)
class DimensionData:
    v: tuple[tuple[int, int], ...]
    w: tuple[tuple[int, int], ...] = ()

    @classmethod
    def build(cls, v: Mapping[int, int], w: Mapping[int, int] | None = None) -> DimensionData:
        return cls(tuple(sorted(v.items())), tuple(sorted((w or {}).items())))

    @cached_property
    def _v(self) -> dict[int, int]:
        return dict(self.v)

    @cached_property
    def _w(self) -> dict[int, int]:
        return dict(self.w)

    def dim_v(self, i: int) -> int:
        return self._v.get(i, 0)

    def dim_w(self, i: int) -> int:
        return self._w.get(i, 0)


def validate(q: QuiverWithInvolution, d: DimensionData) -> list[Violation]:
    violations: list[Violation] = []
    known = set(q.vertices)

    for vertex, count in sorted(Counter(q.vertices).items()):
        if count > 1:
            violations.append(Violation("vertices", f"vertex {vertex}", "listed more than once"))

    tau = q.tau_map
    for i in q.vertices:
        if i not in tau:
            violations.append(Violation("involution", f"vertex {i}", "has no involution image"))
    for i, j in q.tau:
        if i not in known or j not in known:
            violations.append(Violation("involution", f"pair {i}:{j}", "mentions an unknown vertex"))
            continue
        if i == j:
            violations.append(Violation("fixed-point-free", f"vertex {i}", "is fixed by the involution"))
        elif tau.get(j) != i:
            violations.append(Violation("involution", f"vertex {i}", f"tau(tau({i})) = {tau.get(j)}"))

    pairs: Counter[frozenset[int]] = Counter()
    for s, t in q.edges:
        subject = f"edge {s}>{t}"
        if s not in known or t not in known:
            violations.append(Violation("edges", subject, "mentions an unknown vertex"))
            continue
        if s == t:
            violations.append(Violation("no-loops", subject, "is a self-loop"))
            continue
        pairs[frozenset((s, t))] += 1
        if s in tau and t in tau and (tau[t], tau[s]) not in q.edges:
            violations.append(
                Violation("edge-involution", subject, f"has no partner edge {tau[t]}>{tau[s]}")
            )
    for pair, count in sorted(pairs.items(), key=lambda item: sorted(item[0])):
        if count > 1:
            a, b = sorted(pair)
            violations.append(
                Violation("multiplicity", f"vertices {a},{b}", f"joined by {count} edges, at most one allowed")
            )

    for label, items in (("dims_v", d.v), ("dims_w", d.w)):
        for i, n in items:
            if i not in known:
                violations.append(Violation(label, f"vertex {i}", "is not a vertex"))
            if n < 0:
                violations.append(Violation(label, f"vertex {i}", f"negative dimension {n}"))
    for i in q.vertices:
        j = tau.get(i)
        if j is not None and j in known and d.dim_v(i) != d.dim_v(j):
            violations.append(
                Violation("tau-invariant-v", f"vertex {i}", f"v_{i} = {d.dim_v(i)} but v_{j} = {d.dim_v(j)}")
            )

    if q.plus is not None:
        chosen = set(q.plus)
        for i in sorted(chosen - known):
            violations.append(Violation("plus", f"vertex {i}", "is not a vertex"))
        for i in sorted(known):
            j = tau.get(i)
            if j is None or i > j:
                continue
            picked = len({i, j} & chosen)
            if picked != 1:
                violations.append(
                    Violation("plus", f"orbit {i}:{j}", f"must contribute exactly one vertex, got {picked}")
                )
    return violations


def parity_sign(exponent: int) -> int:
    """(-1) ** exponent as an int, negative exponents included."""
    return -1 if exponent % 2 else 1


def mu_pairing(q: QuiverWithInvolution, d: DimensionData, i: int) -> int:
    """The pairing of the simple root at i with the shift coweight."""
    ti = q.involution(i)
    return (
        -q.cartan(i, ti)
        + d.dim_w(i)
        + d.dim_w(ti)
        - 2 * d.dim_v(i)
        + sum(d.dim_v(t) for _, t in q.edges_from(i))
        + sum(d.dim_v(t) for _, t in q.edges_from(ti))
    )


def zeta(q: QuiverWithInvolution, d: DimensionData, i: int) -> Fraction:
    """hbar times the boundary parameter at i."""
    exponent = d.dim_v(i) - 1 + q.delta_arrow(i) + d.dim_w(i) + sum(d.dim_v(t) for _, t in q.edges_from(i))
    return Fraction(2) ** (-q.cartan(i, q.involution(i))) * parity_sign(exponent)


def theorem_sign(q: QuiverWithInvolution, d: DimensionData, i: int) -> int:
    """Sign relating the dressed monopole closed forms to the B modes at i."""
    exponent = 1
    for h in q.edges_from(i):
        exponent += d.dim_v(i) - 1 if q.is_fixed(h) else d.dim_v(h[1])
    return parity_sign(exponent)


@dataclass(frozen=True)
class CartanData:
    c: dict[tuple[int, int], int]
    mu: dict[int, int]
    hbar_zeta: dict[int, Fraction]
    delta: dict[int, int]
    signs: dict[int, int]

    @classmethod
    def from_quiver(cls, q: QuiverWithInvolution, d: DimensionData) -> CartanData:
        vertices = sorted(q.vertices)
        return cls(
            c={(i, j): q.cartan(i, j) for i in vertices for j in vertices},
            mu={i: mu_pairing(q, d, i) for i in vertices},
            hbar_zeta={i: zeta(q, d, i) for i in vertices},
            delta={i: q.delta_arrow(i) for i in vertices},
            signs={i: theorem_sign(q, d, i) for i in vertices},
        )

    def _lookup(self, table: dict, key):
        try:
            return table[key]
        except KeyError:
            raise IndexOutOfRange(f"unknown vertex in {key}") from None

    def cartan(self, i: int, j: int) -> int:
        return self._lookup(self.c, (i, j))

    def mu_pairing(self, i: int) -> int:
        return self._lookup(self.mu, i)

    def zeta(self, i: int) -> Fraction:
        return self._lookup(self.hbar_zeta, i)

    def delta_arrow(self, i: int) -> int:
        return self._lookup(self.delta, i)

    def theorem_sign(self, i: int) -> int:
        return self._lookup(self.signs, i)


def aiii(n: int, plus: Iterable[int] | None = None) -> QuiverWithInvolution:
    """Type AIII: a path on 2n vertices folded by i -> 2n+1-i, odd vertices as sources."""
    if n < 1:
        raise ValueError("aiii needs n >= 1")
    vertices = tuple(range(1, 2 * n + 1))
    edges = []
    for a in range(1, 2 * n):
        edges.append((a, a + 1) if a % 2 else (a + 1, a))
    tau = {i: 2 * n + 1 - i for i in range(1, n + 1)}
    return QuiverWithInvolution.build(vertices, edges, tau, plus)
