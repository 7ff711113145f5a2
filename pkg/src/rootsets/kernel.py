"""Exact arithmetic on finite groups given by Cayley tables.

Element 0 is always the identity.  Tables are validated on construction:
identity row/column, Latin square, uniqueness of names, and associativity
(full check up to ``ASSOC_FULL_BOUND``, random sampling above it).
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from functools import reduce
from pathlib import Path
from typing import Iterable, Iterator, Sequence

import numpy as np

ASSOC_FULL_BOUND = 512
ASSOC_SAMPLE_FACTOR = 10


class GroupError(Exception):
    """Base class for structural errors in group data."""


class InvalidElementError(GroupError):
    pass


class TableFormatError(GroupError):
    pass


class NotASubgroupError(GroupError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NotNormalError(GroupError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NotBijectiveError(GroupError):
    pass


class NotHomomorphicError(GroupError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class FiniteGroupTable:
    """A finite group as an identity-indexed Cayley table with named elements."""

    def __init__(self, table, names=None, *, label="", assoc_bound=ASSOC_FULL_BOUND, seed=0):
        tab = np.asarray(table, dtype=np.int64)
        if tab.ndim != 2 or tab.shape[0] != tab.shape[1]:
            raise TableFormatError("table must be a square matrix")
        n = tab.shape[0]
        if n < 1:
            raise TableFormatError("group order must be at least 1")
        self.order = n
        self.table = tab
        self.label = label
        if names is None:
            names = [str(i) for i in range(n)]
        names = list(names)
        if len(names) != n:
            raise TableFormatError(f"expected {n} names, got {len(names)}")
        if len(set(names)) != n:
            raise TableFormatError("element names are not unique")
        self.names = names
        self._index = {nm: i for i, nm in enumerate(names)}
        self.meta = {}
        self._validate(assoc_bound, seed)
        self._inv = self._compute_inverses()

    def _validate(self, assoc_bound, seed):
        n = self.order
        tab = self.table
        if tab.min() < 0 or tab.max() >= n:
            raise TableFormatError("table entries out of range")
        idx = np.arange(n)
        if not np.array_equal(tab[0], idx):
            raise TableFormatError("row 0 does not act as identity")
        if not np.array_equal(tab[:, 0], idx):
            raise TableFormatError("column 0 does not act as identity")
        for i in range(n):
            if len(np.unique(tab[i])) != n:
                raise TableFormatError(f"row {i} is not a permutation")
        for j in range(n):
            if len(np.unique(tab[:, j])) != n:
                raise TableFormatError(f"column {j} is not a permutation")
        if n <= assoc_bound:
            for a in range(n):
                left = tab[tab[a]]          # (a*b)*c
                right = tab[a][tab]         # a*(b*c)
                if not np.array_equal(left, right):
                    b, c = map(int, np.argwhere(left != right)[0])
                    raise TableFormatError(f"associativity fails at ({a},{b},{c})")
            self.meta["associativity"] = "full"
        else:
            rng = random.Random(seed)
            for _ in range(ASSOC_SAMPLE_FACTOR * n):
                a, b, c = (rng.randrange(n) for _ in range(3))
                if tab[tab[a, b], c] != tab[a, tab[b, c]]:
                    raise TableFormatError(f"associativity fails at ({a},{b},{c})")
            self.meta["associativity"] = "sampled"

    def _compute_inverses(self):
        inv = np.empty(self.order, dtype=np.int64)
        rows, cols = np.nonzero(self.table == 0)
        inv[rows] = cols
        return inv

    @property
    def identity(self):
        return 0

    def check_element(self, g):
        g = int(g)
        if not 0 <= g < self.order:
            raise InvalidElementError(f"element index {g} out of range for order {self.order}")
        return g

    def mul(self, a, b):
        return int(self.table[self.check_element(a), self.check_element(b)])

    def inv(self, a):
        return int(self._inv[self.check_element(a)])

    def elements(self):
        return range(self.order)

    def id_of(self, name):
        try:
            return self._index[name]
        except KeyError:
            raise InvalidElementError(f"unknown element name {name!r}") from None

    def __repr__(self):
        lab = f" {self.label}" if self.label else ""
        return f"<FiniteGroupTable{lab} order={self.order}>"


class OracleGroup:
    """A group given by a multiplication oracle instead of a materialized table.

    Used where the full table would be wasteful (tree groups of depth >= 3,
    large tower levels).  Supports the enumeration-style kernel operations.
    """

    def __init__(self, order, mul, *, name_of=None, label=""):
        self.order = order
        self._mul = mul
        self._name_of = name_of
        self.label = label
        self.meta = {"oracle": True}

    @property
    def identity(self):
        return 0

    def check_element(self, g):
        g = int(g)
        if not 0 <= g < self.order:
            raise InvalidElementError(f"element index {g} out of range for order {self.order}")
        return g

    def mul(self, a, b):
        return self._mul(self.check_element(a), self.check_element(b))

    def inv(self, a):
        # last power before the cycle closes
        a = self.check_element(a)
        prev, cur = a, self.mul(a, a)
        while cur != 0:
            prev, cur = cur, self.mul(cur, a)
        return prev

    def elements(self):
        return range(self.order)

    def name_of(self, g):
        if self._name_of is not None:
            return self._name_of(g)
        return str(g)

    def __repr__(self):
        lab = f" {self.label}" if self.label else ""
        return f"<OracleGroup{lab} order={self.order}>"


@dataclass(frozen=True)
class Subset:
    """A subset of a group's elements, kept as a sorted index tuple."""

    owner: object
    indices: tuple

    @classmethod
    def of(cls, owner, members):
        idx = sorted({owner.check_element(g) for g in members})
        return cls(owner, tuple(idx))

    def __contains__(self, g):
        return int(g) in self._as_set()

    def __iter__(self):
        return iter(self.indices)

    def __len__(self):
        return len(self.indices)

    def _as_set(self):
        cached = self.__dict__.get("_set")
        if cached is None:
            cached = frozenset(self.indices)
            object.__setattr__(self, "_set", cached)
        return cached

    def names(self):
        return [self.owner.names[i] for i in self.indices]


@dataclass(frozen=True)
class Homomorphism:
    """A validated homomorphism between table groups."""

    source: FiniteGroupTable
    target: FiniteGroupTable
    map: tuple

    @classmethod
    def validated(cls, source, target, mapping):
        m = np.asarray(list(mapping), dtype=np.int64)
        if m.shape != (source.order,):
            raise NotHomomorphicError(
                f"map has length {m.shape[0]}, expected {source.order}")
        if m.min() < 0 or m.max() >= target.order:
            raise InvalidElementError("map image out of range")
        if m[0] != 0:
            raise NotHomomorphicError("map does not send identity to identity")
        left = m[source.table]
        right = target.table[np.ix_(m, m)]
        if not np.array_equal(left, right):
            a, b = map(int, np.argwhere(left != right)[0])
            raise NotHomomorphicError(
                f"homomorphism law fails at ({source.names[a]},{source.names[b]})",
                witness=(a, b))
        return cls(source, target, tuple(int(x) for x in m))

    def __call__(self, g):
        return self.map[self.source.check_element(g)]

    def is_injective(self):
        return len(set(self.map)) == self.source.order

    def image(self):
        return Subset.of(self.target, self.map)


# ---------------------------------------------------------------------------
# operations

def order_of(G, g):
    """Least n >= 1 with g^n = identity."""
    g = G.check_element(g)
    n, cur = 1, g
    while cur != 0:
        cur = G.mul(cur, g)
        n += 1
    if isinstance(G, FiniteGroupTable) and G.order % n != 0:
        raise GroupError(f"element order {n} does not divide group order {G.order}")
    return n


def cyclic_subgroup(G, g):
    g = G.check_element(g)
    members = [0]
    cur = g
    while cur != 0:
        members.append(cur)
        cur = G.mul(cur, g)
    return Subset.of(G, members)


def closure(G, seed):
    """Least subgroup containing ``seed`` (breadth-first product closure)."""
    members = {0}
    frontier = [0]
    for g in seed:
        g = G.check_element(g)
        if g not in members:
            members.add(g)
            frontier.append(g)
    while frontier:
        new = []
        for a in frontier:
            for b in list(members):
                for prod in (G.mul(a, b), G.mul(b, a)):
                    if prod not in members:
                        members.add(prod)
                        new.append(prod)
        frontier = new
    return Subset.of(G, members)


def centralizer(G, S):
    members = [g for g in G.elements()
               if all(G.mul(g, s) == G.mul(s, g) for s in S)]
    return Subset.of(G, members)


def center(G):
    return centralizer(G, Subset.of(G, G.elements()))


def commutator(G, a, b):
    return G.mul(G.mul(G.inv(a), G.inv(b)), G.mul(a, b))


def derived_subgroup(G):
    comms = {commutator(G, a, b) for a in G.elements() for b in G.elements()}
    return closure(G, comms)


def omega1(G, p):
    if not _is_prime(p):
        raise GroupError(f"{p} is not prime")
    return closure(G, [g for g in G.elements() if order_of(G, g) == p])


def exponent(G):
    return reduce(math.lcm, (order_of(G, g) for g in G.elements()), 1)


def order_profile(G):
    """Map element order -> count; the isomorphism-insensitive fingerprint used here."""
    profile = {}
    for g in G.elements():
        n = order_of(G, g)
        profile[n] = profile.get(n, 0) + 1
    return profile


def is_subgroup(G, S):
    if len(S) == 0:
        return False
    for a in S:
        for b in S:
            if G.mul(a, b) not in S:
                return False
    return True


def check_normal(G, N):
    """Raise with a witness unless N is a normal subgroup of G."""
    if not len(N) or 0 not in N:
        raise NotASubgroupError("subset does not contain the identity")
    for a in N:
        for b in N:
            if G.mul(a, b) not in N:
                raise NotASubgroupError(
                    f"not closed: {G.names[a]}*{G.names[b]}", witness=(a, b))
    for g in G.elements():
        gi = G.inv(g)
        for n in N:
            if G.mul(G.mul(gi, n), g) not in N:
                raise NotNormalError(
                    f"not normal: conjugate of {G.names[n]} by {G.names[g]} escapes",
                    witness=(g, n))


def quotient(G, N):
    """Coset group G/N with its canonical projection.

    Coset representatives are minimal element indices; the identity coset
    comes first and the rest follow in representative order.
    """
    check_normal(G, N)
    n = G.order
    coset_of = [-1] * n
    reps = []
    for g in range(n):
        if coset_of[g] != -1:
            continue
        idx = len(reps)
        reps.append(g)
        for x in N:
            coset_of[G.mul(g, x)] = idx
    q = len(reps)
    table = [[coset_of[G.mul(reps[i], reps[j])] for j in range(q)] for i in range(q)]
    names = [f"[{G.names[r]}]" for r in reps]
    Q = FiniteGroupTable(table, names, label=f"{G.label}/N" if G.label else "quotient")
    proj = Homomorphism.validated(G, Q, coset_of)
    return Q, proj


def subgroup_table(G, S):
    """Reindex a subgroup as its own table group, identity first.

    Returns the table and the list mapping new indices to old ones.
    """
    if not is_subgroup(G, S):
        raise NotASubgroupError("subset is not closed under multiplication")
    old = [0] + [g for g in S if g != 0]
    pos = {g: i for i, g in enumerate(old)}
    table = [[pos[G.mul(a, b)] for b in old] for a in old]
    names = [G.names[g] for g in old]
    return FiniteGroupTable(table, names, label=f"{G.label}-sub" if G.label else "subgroup"), old


def direct_product(G, H):
    ng, nh = G.order, H.order
    table = np.kron(G.table, np.ones((nh, nh), dtype=np.int64)) * nh \
        + np.tile(H.table, (ng, ng))
    names = [f"{a}|{b}" for a in G.names for b in H.names]
    label = f"{G.label}x{H.label}" if G.label and H.label else ""
    return FiniteGroupTable(table, names, label=label)


def validate_automorphism(G, mapping):
    m = list(mapping)
    if len(m) != G.order:
        raise NotBijectiveError(f"map has length {len(m)}, expected {G.order}")
    if len(set(m)) != G.order:
        raise NotBijectiveError("map is not a bijection")
    return Homomorphism.validated(G, G, m)


def _is_prime(p):
    if p < 2:
        return False
    for d in range(2, int(p ** 0.5) + 1):
        if p % d == 0:
            return False
    return True


# ---------------------------------------------------------------------------
# Cayley table file format
#
# UTF-8 text.  Line 1: order n.  Line 2: n whitespace-separated element names.
# Then n rows of n indices, row-major table[i][j] = i*j.  Lines starting with
# '#' are comments.

def loads_table(text, *, label=""):
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines:
        raise TableFormatError("empty table file")
    try:
        n = int(lines[0].strip())
    except ValueError:
        raise TableFormatError(f"bad order line: {lines[0]!r}") from None
    if len(lines) < n + 2:
        raise TableFormatError(f"expected {n + 2} content lines, got {len(lines)}")
    names = lines[1].split()
    if len(names) != n:
        raise TableFormatError(f"expected {n} names, got {len(names)}")
    rows = []
    for i in range(n):
        row = lines[2 + i].split()
        if len(row) != n:
            raise TableFormatError(f"row {i} has {len(row)} entries, expected {n}")
        try:
            rows.append([int(x) for x in row])
        except ValueError:
            raise TableFormatError(f"non-integer entry in row {i}") from None
    return FiniteGroupTable(rows, names, label=label)


def load_table(path):
    path = Path(path)
    return loads_table(path.read_text(encoding="utf-8"), label=path.stem)


def dumps_table(G):
    lines = [str(G.order), " ".join(G.names)]
    for i in range(G.order):
        lines.append(" ".join(str(int(x)) for x in G.table[i]))
    return "\n".join(lines) + "\n"


def save_table(G, path):
    Path(path).write_text(dumps_table(G), encoding="utf-8")
