"""Colour assignments, list assignments, and the audited certificate.

Every engine's output is checked against :func:`audit`; the certificate is
the single source of truth for a colouring's defect, clustering, and
path-component structure.  All values here are immutable and audit is pure.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Sequence

from .errors import DefclustError, PartialColouringError
from .graphs import Graph


class Colouring:
    """Total mapping vertex -> colour id (small integer)."""

    __slots__ = ("values",)

    def __init__(self, values: Iterable[Optional[int]]):
        self.values = tuple(values)

    def __getitem__(self, v: int) -> Optional[int]:
        return self.values[v]

    def __len__(self) -> int:
        return len(self.values)

    def __eq__(self, other):
        return isinstance(other, Colouring) and self.values == other.values

    def __hash__(self):
        return hash(self.values)

    def __repr__(self):
        return f"Colouring({list(self.values)})"

    def uncoloured(self) -> tuple[int, ...]:
        return tuple(v for v, c in enumerate(self.values) if c is None)

    def is_total(self) -> bool:
        return not self.uncoloured()

    def used_colours(self) -> tuple[int, ...]:
        return tuple(sorted({c for c in self.values if c is not None}))

    @property
    def k(self) -> int:
        """Number of colours used."""
        return len(self.used_colours())

    def compact(self) -> "Colouring":
        """Relabel colours to 0..k-1 in order of first appearance."""
        remap: dict[int, int] = {}
        out = []
        for c in self.values:
            if c is None:
                out.append(None)
                continue
            if c not in remap:
                remap[c] = len(remap)
            out.append(remap[c])
        return Colouring(out)

    def classes(self) -> list[tuple[int, ...]]:
        """Colour classes in colour order (compact colourings only)."""
        buckets: dict[int, list[int]] = {}
        for v, c in enumerate(self.values):
            if c is not None:
                buckets.setdefault(c, []).append(v)
        return [tuple(buckets[c]) for c in sorted(buckets)]


def compact_colouring(values: Sequence[Optional[int]]) -> Colouring:
    return Colouring(values).compact()


class ListAssignment:
    """Per-vertex non-empty admissible colour sets."""

    __slots__ = ("lists",)

    def __init__(self, lists: Iterable[Iterable[int]]):
        self.lists = tuple(frozenset(l) for l in lists)
        for v, l in enumerate(self.lists):
            if not l:
                raise DefclustError(f"empty list at vertex {v}")

    def __getitem__(self, v: int) -> frozenset[int]:
        return self.lists[v]

    def __len__(self) -> int:
        return len(self.lists)

    def min_size(self) -> int:
        return min((len(l) for l in self.lists), default=0)

    def is_k_list_assignment(self, k: int) -> bool:
        return all(len(l) >= k for l in self.lists)

    @staticmethod
    def uniform(n: int, k: int) -> "ListAssignment":
        return ListAssignment([range(k)] * n)


@dataclass(frozen=True)
class Certificate:
    """Audited facts about one colouring of one graph."""

    k: int
    defect: int
    clustering: int
    components: tuple[tuple[int, ...], ...]
    all_paths: bool

    def __post_init__(self):
        if self.clustering >= 1 and not self.defect <= self.clustering - 1:
            raise DefclustError("certificate broke defect <= clustering - 1")


def audit(G: Graph, chi: Colouring) -> Certificate:
    """Compute the exact defect/clustering certificate for a total colouring."""
    if len(chi) != G.n:
        raise DefclustError(f"colouring has {len(chi)} entries for n={G.n}")
    missing = chi.uncoloured()
    if missing:
        raise PartialColouringError(missing)

    defect = 0
    for v in range(G.n):
        same = sum(1 for w in G.neighbours(v) if chi[w] == chi[v])
        if same > defect:
            defect = same

    seen = [False] * G.n
    comps: list[tuple[int, ...]] = []
    clustering = 0
    all_paths = True
    for s in range(G.n):
        if seen[s]:
            continue
        seen[s] = True
        comp = [s]
        stack = [s]
        while stack:
            v = stack.pop()
            for w in G.neighbours(v):
                if not seen[w] and chi[w] == chi[s]:
                    seen[w] = True
                    comp.append(w)
                    stack.append(w)
        comp.sort()
        cs = set(comp)
        inner_deg = [sum(1 for w in G.neighbours(v) if w in cs) for v in comp]
        inner_edges = sum(inner_deg) // 2
        # a path is exactly: connected, acyclic, max degree <= 2
        if inner_edges != len(comp) - 1 or any(d > 2 for d in inner_deg):
            all_paths = False
        comps.append(tuple(comp))
        if len(comp) > clustering:
            clustering = len(comp)
    return Certificate(
        k=chi.k,
        defect=defect,
        clustering=clustering,
        components=tuple(comps),
        all_paths=all_paths,
    )


def list_violations(chi: Colouring, L: ListAssignment) -> tuple[int, ...]:
    """Vertices whose colour is outside their list (witnesses)."""
    if len(chi) != len(L):
        raise DefclustError("colouring and list assignment domains differ")
    return tuple(v for v in range(len(chi)) if chi[v] not in L[v])


def respects_lists(chi: Colouring, L: ListAssignment) -> bool:
    return not list_violations(chi, L)


def product_colouring(chi1: Colouring, per_class: Sequence[Colouring]) -> Colouring:
    """Refine chi1 by a colouring of each colour class's induced subgraph.

    ``per_class[i]`` colours the vertices of chi1's class i, indexed by
    their position in the sorted class.  The result uses at most k1*k2
    colours and every monochromatic component of it lies inside a single
    class-colouring component.
    """
    if not chi1.is_total():
        raise PartialColouringError(chi1.uncoloured())
    classes = chi1.classes()
    if len(per_class) != len(classes):
        raise DefclustError(f"need {len(classes)} class colourings, got {len(per_class)}")
    values: list[Optional[int]] = [None] * len(chi1)
    for i, cls in enumerate(classes):
        sub = per_class[i]
        if len(sub) != len(cls):
            raise DefclustError(f"class {i} has {len(cls)} vertices but colouring has {len(sub)}")
        if not sub.is_total():
            raise PartialColouringError(sub.uncoloured())
        for pos, v in enumerate(cls):
            values[v] = (i, sub[pos])  # type: ignore[assignment]
    # flatten pairs deterministically
    pairs = sorted({p for p in values})  # type: ignore[arg-type]
    code = {p: i for i, p in enumerate(pairs)}
    return Colouring([code[p] for p in values])  # type: ignore[index]


class ColourAllocator:
    """Monotone source of fresh colour ids, carried through recursions."""

    def __init__(self, start: int = 0):
        self._next = start

    def fresh(self) -> int:
        c = self._next
        self._next += 1
        return c

    def peek(self) -> int:
        return self._next
