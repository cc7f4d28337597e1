"""Finite groups given by a multiplication oracle, plus dense subgroups.

A :class:`FiniteGroup` is described by an identity, a list of generators and
a product function on hashable, totally ordered payloads.  When the order is
below the enumeration cap the elements are materialised lazily, sorted by
payload, and given indices ``0..order-1`` (the identity always gets 0).

Subgroups of an enumerated group are stored as Python ints used as bit
vectors over that index.  Meet is a single ``&``.
"""

from __future__ import annotations

import os
import threading
from dataclasses import dataclass, field
from typing import Any, Callable, Hashable, Iterable, Iterator, Sequence

Payload = Hashable

ENUM_CAP = int(os.environ.get("MAXDIM_ENUM_CAP", 100_000))
TABLE_CAP = int(os.environ.get("MAXDIM_TABLE_CAP", 1500))


class GroupError(Exception):
    """Base class for errors raised by this package."""


class CapExceeded(GroupError):
    """An operation would need to enumerate more than the configured cap."""


class NotAMember(GroupError):
    pass


def iter_bits(bits: int) -> Iterator[int]:
    """Yield the positions of the set bits of ``bits`` in increasing order."""
    while bits:
        low = bits & -bits
        yield low.bit_length() - 1
        bits ^= low


def bits_of(indices: Iterable[int]) -> int:
    out = 0
    for i in indices:
        out |= 1 << i
    return out


class FiniteGroup:
    """A finite group with a payload-level multiplication oracle.

    ``mul(a, b)`` must be associative on the closure of ``generators``.
    ``inv`` is optional; without it inverses are found by powering.
    """

    def __init__(
        self,
        spec: str,
        identity: Payload,
        generators: Sequence[Payload],
        mul: Callable[[Any, Any], Any],
        inv: Callable[[Any], Any] | None = None,
        *,
        order: int | None = None,
        enum_cap: int | None = None,
        fmt: Callable[[Any], str] | None = None,
    ):
        self.spec = spec
        self.identity = identity
        self.generators = [g for g in generators]
        self._mul = mul
        self._inv = inv
        self._declared_order = order
        self.enum_cap = ENUM_CAP if enum_cap is None else enum_cap
        self._fmt = fmt or repr
        self._lock = threading.RLock()
        self._elements: list | None = None
        self._index: dict | None = None
        self._rtabs: dict[int, list[int]] = {}
        self._table: list[list[int]] | None = None
        self._inv_idx: list[int] | None = None
        self.meta: dict[str, Any] = {}

    def __repr__(self) -> str:
        return f"FiniteGroup({self.spec!r})"

    # payload level

    def mul(self, a, b):
        return self._mul(a, b)

    def inv(self, a):
        if self._inv is not None:
            return self._inv(a)
        prev, cur = self.identity, a
        while cur != self.identity:
            prev, cur = cur, self._mul(cur, a)
        return prev

    def pow(self, a, k: int):
        if k < 0:
            a, k = self.inv(a), -k
        out = self.identity
        while k:
            if k & 1:
                out = self._mul(out, a)
            a = self._mul(a, a)
            k >>= 1
        return out

    def element_order(self, a) -> int:
        n, cur = 1, a
        while cur != self.identity:
            cur = self._mul(cur, a)
            n += 1
        return n

    def fmt(self, a) -> str:
        return self._fmt(a)

    # enumeration

    @property
    def order(self) -> int:
        if self._declared_order is not None:
            return self._declared_order
        return len(self.elements)

    @property
    def enumerable(self) -> bool:
        return self.order <= self.enum_cap

    @property
    def elements(self) -> list:
        if self._elements is None:
            with self._lock:
                if self._elements is None:
                    self._enumerate()
        return self._elements

    def _enumerate(self) -> None:
        if self._declared_order is not None and self._declared_order > self.enum_cap:
            raise CapExceeded(
                f"{self.spec}: order {self._declared_order} exceeds enumeration cap {self.enum_cap}"
            )
        seen = {self.identity}
        frontier = [self.identity]
        mul = self._mul
        gens = self.generators
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = mul(x, g)
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            if len(seen) > self.enum_cap:
                raise CapExceeded(f"{self.spec}: more than {self.enum_cap} elements")
            frontier = nxt
        elements = sorted(seen)
        if elements[0] != self.identity:
            # keep identity at index 0 even if the payload order disagrees
            elements.remove(self.identity)
            elements.insert(0, self.identity)
        if self._declared_order is not None and len(elements) != self._declared_order:
            raise GroupError(
                f"{self.spec}: generators give {len(elements)} elements, expected {self._declared_order}"
            )
        self._index = {e: i for i, e in enumerate(elements)}
        self._elements = elements

    @property
    def index(self) -> dict:
        self.elements
        return self._index

    def idx(self, a) -> int:
        try:
            return self.index[a]
        except KeyError:
            raise NotAMember(f"{a!r} is not an element of {self.spec}") from None

    def __contains__(self, a) -> bool:
        return a in self.index

    def __len__(self) -> int:
        return self.order

    def __iter__(self):
        return iter(self.elements)

    # index level

    def rtab(self, j: int) -> list[int]:
        """Right multiplication by element ``j`` as a list ``i -> i*j``."""
        tab = self._rtabs.get(j)
        if tab is None:
            if self._table is not None:
                tab = [row[j] for row in self._table]
            else:
                el, ix, mul = self.elements, self.index, self._mul
                g = el[j]
                tab = [ix[mul(x, g)] for x in el]
            self._rtabs[j] = tab
        return tab

    @property
    def table(self) -> list[list[int]]:
        """Full Cayley table ``table[i][j] = index(e_i * e_j)``."""
        if self._table is None:
            with self._lock:
                if self._table is None:
                    if self.order > TABLE_CAP:
                        raise CapExceeded(
                            f"{self.spec}: Cayley table refused above order {TABLE_CAP}"
                        )
                    el, ix, mul = self.elements, self.index, self._mul
                    self._table = [[ix[mul(a, b)] for b in el] for a in el]
        return self._table

    def mul_idx(self, i: int, j: int) -> int:
        if self._table is not None:
            return self._table[i][j]
        if self.order <= TABLE_CAP:
            return self.table[i][j]
        return self.index[self._mul(self.elements[i], self.elements[j])]

    @property
    def inv_idx(self) -> list[int]:
        if self._inv_idx is None:
            with self._lock:
                if self._inv_idx is None:
                    el, ix = self.elements, self.index
                    self._inv_idx = [ix[self.inv(x)] for x in el]
        return self._inv_idx

    @property
    def gen_idx(self) -> list[int]:
        return [self.idx(g) for g in self.generators]

    def conj_idx(self, a: int, g: int) -> int:
        """``g^-1 a g`` on indices."""
        return self.mul_idx(self.mul_idx(self.inv_idx[g], a), g)

    def comm_idx(self, a: int, b: int) -> int:
        """``a^-1 b^-1 a b`` on indices."""
        iv = self.inv_idx
        return self.mul_idx(self.mul_idx(iv[a], iv[b]), self.mul_idx(a, b))

    @property
    def whole(self) -> "Subgroup":
        return Subgroup(self, (1 << self.order) - 1, tuple(self.gen_idx))

    @property
    def trivial(self) -> "Subgroup":
        return Subgroup(self, 1, ())

    def subgroup(self, gens: Iterable) -> "Subgroup":
        """Closure of payload generators."""
        return closure(self, [self.idx(g) for g in gens])


@dataclass(frozen=True, eq=False)
class Subgroup:
    """Subgroup of an enumerated group, stored as a bit vector of indices.

    ``gens`` is an optional generating tuple of indices; it is computed on
    demand when absent.
    """

    group: FiniteGroup
    bits: int
    _gens: tuple | None = field(default=None, compare=False, repr=False)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Subgroup)
            and self.group is other.group
            and self.bits == other.bits
        )

    def __hash__(self) -> int:
        return hash(self.bits)

    def __repr__(self) -> str:
        return f"<Subgroup of {self.group.spec} order={self.order}>"

    @property
    def order(self) -> int:
        return self.bits.bit_count()

    def __len__(self) -> int:
        return self.order

    def __contains__(self, i: int) -> bool:
        return (self.bits >> i) & 1 == 1

    def __le__(self, other: "Subgroup") -> bool:
        return self.bits & other.bits == self.bits

    def __lt__(self, other: "Subgroup") -> bool:
        return self.bits != other.bits and self <= other

    def __and__(self, other: "Subgroup") -> "Subgroup":
        return intersect(self, other)

    def witness_outside(self, smaller: "Subgroup"):
        """A payload in ``self`` but not in ``smaller``."""
        rest = self.bits & ~smaller.bits
        if not rest:
            raise GroupError("no element outside the smaller subgroup")
        return self.group.elements[(rest & -rest).bit_length() - 1]

    @property
    def members(self) -> list[int]:
        return list(iter_bits(self.bits))

    def payloads(self) -> list:
        el = self.group.elements
        return [el[i] for i in iter_bits(self.bits)]

    @property
    def gens(self) -> tuple:
        if self._gens is None:
            object.__setattr__(self, "_gens", greedy_generators(self))
        return self._gens

    @property
    def key(self) -> tuple:
        """Canonical sort key: sorted member indices, compared lexicographically."""
        return tuple(iter_bits(self.bits))

    def is_trivial(self) -> bool:
        return self.bits == 1

    def is_whole(self) -> bool:
        return self.order == self.group.order

    def serialize(self) -> list[str]:
        return sorted(self.group.fmt(x) for x in self.payloads())


def closure(G: FiniteGroup, gens: Sequence[int], start: Subgroup | None = None) -> Subgroup:
    """Smallest subgroup containing ``gens`` (indices), and ``start`` if given.

    Saturates under right multiplication by the generators; in a finite
    group the result is closed under inverses as well.  With ``start`` the
    saturation runs over right cosets of it: S r s is the image of S r
    under s, so each coset costs one probe per generator.
    """
    if start is not None:
        gens = tuple(start.gens) + tuple(g for g in gens if not (start.bits >> g) & 1)
        if len(gens) == len(start.gens):
            return start
        base = start.members
        bits = start.bits
    else:
        gens = tuple(g for g in gens if g != 0)
        base = [0]
        bits = 1
    tabs = [G.rtab(g) for g in gens]
    cosets = [base]
    k = 0
    while k < len(cosets):
        coset = cosets[k]
        r = coset[0]
        k += 1
        for t in tabs:
            y = t[r]
            if not (bits >> y) & 1:
                image = [t[x] for x in coset]
                for z in image:
                    bits |= 1 << z
                cosets.append(image)
    return Subgroup(G, bits, tuple(dict.fromkeys(gens)))


def greedy_generators(S: Subgroup) -> tuple:
    """A generating tuple for ``S`` picked greedily in index order."""
    G = S.group
    cur = G.trivial
    gens: list[int] = []
    rest = S.bits & ~1
    while rest:
        low = rest & -rest
        g = low.bit_length() - 1
        gens.append(g)
        cur = closure(G, gens)
        if cur.bits == S.bits:
            break
        rest = S.bits & ~cur.bits
    return tuple(gens)


def intersect(A: Subgroup, B: Subgroup) -> Subgroup:
    if A.group is not B.group:
        raise GroupError("subgroups belong to different groups")
    return Subgroup(A.group, A.bits & B.bits)


def join(A: Subgroup, B: Subgroup) -> Subgroup:
    if A.group is not B.group:
        raise GroupError("subgroups belong to different groups")
    if B <= A:
        return A
    if A <= B:
        return B
    return closure(A.group, B.gens, start=A)


def conjugate(A: Subgroup, g: int) -> Subgroup:
    """``A^g = {g^-1 a g}`` for an element index ``g``."""
    G = A.group
    if g == 0:
        return A
    bits = 0
    for a in iter_bits(A.bits):
        bits |= 1 << G.conj_idx(a, g)
    return Subgroup(G, bits)


def is_normal(N: Subgroup, within: Subgroup | None = None) -> bool:
    G = N.group
    gens = G.gen_idx if within is None else within.gens
    for g in gens:
        for s in N.gens:
            if not (N.bits >> G.conj_idx(s, g)) & 1:
                return False
    return True


def normal_closure(G: FiniteGroup, gens: Sequence[int]) -> Subgroup:
    S = closure(G, gens)
    gg = G.gen_idx
    changed = True
    while changed:
        changed = False
        for g in gg:
            extra = [G.conj_idx(s, g) for s in S.gens]
            extra = [x for x in extra if not (S.bits >> x) & 1]
            if extra:
                S = closure(G, extra, start=S)
                changed = True
    return S


def cyclic(G: FiniteGroup, g: int) -> Subgroup:
    return closure(G, [g])


def payload_closure(mul, identity, gens) -> frozenset:
    """Closure of payload generators under ``mul``, for groups never indexed."""
    seen = {identity}
    queue = [identity]
    for x in queue:
        for g in gens:
            y = mul(x, g)
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return frozenset(seen)
