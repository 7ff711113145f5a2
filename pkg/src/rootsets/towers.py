"""Ascending chains of finite groups and level-wise root-set stabilization.

The infinite groups of interest (quasicyclic groups, central amalgams, their
index-2 inverting extensions, generalized quaternion limits) are represented
as towers: for each level k a finite group, plus name-stable embeddings into
the next level.  Membership in K is reported as a stabilization certificate
for the level-wise eta sets, never as a proof; the classification statements
provide the expected answers the reports are compared against.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .kernel import (
    FiniteGroupTable,
    GroupError,
    Homomorphism,
    InvalidElementError,
    center,
    order_of,
)

EMBED_FULL_PAIR_BOUND = 1 << 24
DEFAULT_MAX_LEVEL = 8
DEFAULT_WINDOW = 2
DEFAULT_BIRTH_CAP = 4
DEFAULT_MEMBER_CAP = 128
# how many levels past the base to look for a named generator before giving
# up; levels grow geometrically, so a deep search would materialize huge name
# lists just to report a typo
GENERATOR_SEARCH_DEPTH = 8


class TowerError(GroupError):
    pass


class CoherenceError(GroupError):
    """Level-wise eta sets disagree with their restriction law: a kernel bug."""


class ExtensionConditionsFailed(GroupError):
    def __init__(self, condition, level):
        super().__init__(f"extension condition failed at level {level}: {condition}")
        self.condition = condition
        self.level = level


# ---------------------------------------------------------------------------
# Prufer elements

@dataclass(frozen=True)
class PruferElement:
    """An element of Z_{p^infinity} as a normalized fraction num / p^k mod 1."""

    p: int
    num: int
    k: int

    @classmethod
    def of(cls, p, num, k):
        num %= p ** k
        while k > 0 and num % p == 0:
            num //= p
            k -= 1
        if num == 0:
            k = 0
        return cls(p, num, k)

    @property
    def order(self):
        return self.p ** self.k

    @property
    def name(self):
        if self.k == 0:
            return "0"
        return f"{self.num}/{self.p ** self.k}"

    def __add__(self, other):
        if self.p != other.p:
            raise TowerError("mixed primes in Prufer arithmetic")
        k = max(self.k, other.k)
        num = self.num * self.p ** (k - self.k) + other.num * self.p ** (k - other.k)
        return PruferElement.of(self.p, num, k)

    def __neg__(self):
        return PruferElement.of(self.p, -self.num, self.k)


def prufer_name(num, p, k):
    return PruferElement.of(p, num, k).name


# ---------------------------------------------------------------------------
# levels

class Level:
    """One finite level of a tower: named elements with vectorized arithmetic."""

    def __init__(self, n, names, mul_vec, inv_vec, label=""):
        self.n = n
        self.names = names
        self._mul_vec = mul_vec
        self._inv_vec = inv_vec
        self.label = label
        self._index = None
        self._group = None

    @property
    def index(self):
        if self._index is None:
            self._index = {nm: i for i, nm in enumerate(self.names)}
        return self._index

    def id_of(self, name):
        try:
            return self.index[name]
        except KeyError:
            raise InvalidElementError(f"unknown element name {name!r} at {self.label}") from None

    def has(self, name):
        return name in self.index

    def mul_vec(self, a, b):
        return self._mul_vec(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64))

    def inv_vec(self, a):
        return self._inv_vec(np.asarray(a, dtype=np.int64))

    def mul(self, a, b):
        return int(self.mul_vec(a, b))

    def inv(self, a):
        return int(self.inv_vec(a))

    def group(self, *, cap=4096):
        """Materialize the level as a validated Cayley table."""
        if self._group is None:
            if self.n > cap:
                raise TowerError(f"level of order {self.n} exceeds materialization cap {cap}")
            idx = np.arange(self.n, dtype=np.int64)
            rows = self.mul_vec(np.repeat(idx, self.n), np.tile(idx, self.n))
            table = rows.reshape(self.n, self.n)
            self._group = FiniteGroupTable(table, self.names, label=self.label)
        return self._group


class Tower:
    """Base class: level caching, name-stable embeddings, birth levels."""

    kind = "tower"
    theory_tag = None

    def __init__(self):
        self._levels = {}
        self._embeds = {}

    @property
    def k0(self):
        raise NotImplementedError

    def _build_level(self, k):
        raise NotImplementedError

    def level(self, k):
        if k < self.k0:
            raise TowerError(f"{self.kind} tower starts at level {self.k0}, got {k}")
        if k not in self._levels:
            self._levels[k] = self._build_level(k)
        return self._levels[k]

    def embed_ids(self, k):
        """Validated embedding level(k) -> level(k+1), as an index array.

        Names are the stable addressing, so the embedding is name lookup;
        the homomorphism law is checked on all pairs below a size bound and
        on random samples above it.
        """
        if k not in self._embeds:
            src, tgt = self.level(k), self.level(k + 1)
            try:
                emb = np.fromiter((tgt.id_of(nm) for nm in src.names),
                                  dtype=np.int64, count=src.n)
            except InvalidElementError as exc:
                raise TowerError(f"embedding broken at level {k}: {exc}") from exc
            if len(set(emb.tolist())) != src.n:
                raise TowerError(f"embedding at level {k} is not injective")
            self._check_embed_hom(src, tgt, emb, k)
            self._embeds[k] = emb
        return self._embeds[k]

    def _check_embed_hom(self, src, tgt, emb, k):
        n = src.n
        if n * n <= EMBED_FULL_PAIR_BOUND:
            idx = np.arange(n, dtype=np.int64)
            a = np.repeat(idx, n)
            b = np.tile(idx, n)
        else:
            rng = np.random.default_rng(k)
            a = rng.integers(0, n, size=10 * n)
            b = rng.integers(0, n, size=10 * n)
        if not np.array_equal(emb[src.mul_vec(a, b)], tgt.mul_vec(emb[a], emb[b])):
            raise TowerError(f"embedding at level {k} is not a homomorphism")

    def embedding_hom(self, k):
        """The embedding as a kernel Homomorphism between materialized levels."""
        return Homomorphism.validated(self.level(k).group(), self.level(k + 1).group(),
                                      self.embed_ids(k).tolist())

    def birth_level(self, name, max_level):
        for k in range(self.k0, max_level + 1):
            if self.level(k).has(name):
                return k
        return None

    def new_names(self, k):
        """Elements appearing first at level k."""
        if k == self.k0:
            return list(self.level(k).names)
        prev = set(self.level(k - 1).names)
        return [nm for nm in self.level(k).names if nm not in prev]

    def theory_names(self, k):
        """Expected K members among level-k names, when the kind predicts one."""
        return None


# ---------------------------------------------------------------------------
# tower kinds

class PruferTower(Tower):
    """Z_{p^infinity} as the union of the cyclic groups of order p^k."""

    kind = "prufer"
    theory_tag = "K = whole group (abelian quasicyclic case)"

    def __init__(self, p):
        super().__init__()
        if not _is_prime(p):
            raise TowerError(f"{p} is not prime")
        self.p = p

    @property
    def k0(self):
        return 1

    def _build_level(self, k):
        p, n = self.p, self.p ** k
        names = [prufer_name(m, p, k) for m in range(n)]
        return Level(n, names,
                     lambda a, b, n=n: (a + b) % n,
                     lambda a, n=n: (-a) % n,
                     label=f"prufer-{p}^{k}")

    def c_involution_name(self):
        if self.p != 2:
            raise TowerError("the distinguished involution needs p = 2")
        return "1/2"

    def transversal_names(self):
        return ["0"]

    def c_part_count(self, k):
        return self.p ** k

    def _alpha_map(self, k, recipe):
        lvl = self.level(k)
        base = np.arange(lvl.n, dtype=np.int64)
        rep_name, (num, den) = recipe["0"]
        if rep_name != "0":
            raise TowerError("prufer recipe must fix the trivial transversal")
        off = num * lvl.n // den
        return (off - base) % lvl.n

    def theory_names(self, k):
        return set(self.level(k).names)


def prufer_tower(p):
    return PruferTower(p)


class T1Tower(Tower):
    """Central amalgam (H x C)_A: levels (H x Z_{p^k}) / <(a_gen, -1/p^n)>.

    Canonical elements are pairs (transversal rep of the A-coset, Prufer part);
    transversal representatives are minimal element indices in H.
    """

    kind = "t1"
    theory_tag = "K = C (central quasicyclic part)"

    def __init__(self, H, p, a_gen, *, label=""):
        super().__init__()
        if not _is_prime(p):
            raise TowerError(f"{p} is not prime")
        a_gen = H.check_element(a_gen)
        if a_gen not in center(H):
            raise TowerError(f"amalgam generator {H.names[a_gen]} is not central in H")
        a_order = order_of(H, a_gen)
        n = 0
        t = a_order
        while t % p == 0:
            t //= p
            n += 1
        if t != 1:
            raise TowerError(f"amalgam generator has order {a_order}, not a power of {p}")
        self.H = H
        self.p = p
        self.a_gen = a_gen
        self.n = n
        self.label = label
        self._setup_transversal()

    def _setup_transversal(self):
        H, a = self.H, self.a_gen
        a_order = self.p ** self.n
        nH = H.order
        dec_t = np.full(nH, -1, dtype=np.int64)
        dec_j = np.full(nH, -1, dtype=np.int64)
        reps = []
        for h in range(nH):
            if dec_t[h] != -1:
                continue
            t = len(reps)
            reps.append(h)
            cur = h
            for j in range(a_order):
                dec_t[cur] = t
                dec_j[cur] = j
                cur = H.mul(cur, a)
        self.reps = np.array(reps, dtype=np.int64)
        self.dec_t = dec_t
        self.dec_j = dec_j
        self.t_count = len(reps)

    @property
    def k0(self):
        return max(self.n, 1)

    def _build_level(self, k):
        p, n = self.p, self.n
        ck = p ** k
        u = p ** (k - n)
        Ht = self.H.table
        Hinv = np.array([self.H.inv(h) for h in range(self.H.order)], dtype=np.int64)
        reps, dec_t, dec_j = self.reps, self.dec_t, self.dec_j
        names = [f"{self.H.names[reps[t]]}.{prufer_name(m, p, k)}"
                 for t in range(self.t_count) for m in range(ck)]

        def mul_vec(a, b):
            t1, m1 = np.divmod(a, ck)
            t2, m2 = np.divmod(b, ck)
            h = Ht[reps[t1], reps[t2]]
            return dec_t[h] * ck + (m1 + m2 + dec_j[h] * u) % ck

        def inv_vec(a):
            t, m = np.divmod(a, ck)
            hi = Hinv[reps[t]]
            return dec_t[hi] * ck + (dec_j[hi] * u - m) % ck

        lvl = Level(self.t_count * ck, names, mul_vec, inv_vec,
                    label=f"{self.label or 't1'}-level{k}")
        assert lvl.n == self.H.order * ck // (p ** n)
        return lvl

    def c_part_count(self, k):
        return self.p ** k

    def c_involution_name(self):
        if self.p != 2:
            raise TowerError("the distinguished involution needs p = 2")
        return f"{self.H.names[self.reps[0]]}.1/2"

    def transversal_names(self):
        return [self.H.names[r] for r in self.reps]

    def _alpha_map(self, k, recipe):
        """Automorphism candidate from a per-transversal recipe.

        The C part is central, so a map inverting C is determined by its
        values on transversal representatives: rep -> (rep', fractional offset).
        """
        lvl = self.level(k)
        ck = self.p ** k
        t_img = np.empty(self.t_count, dtype=np.int64)
        off = np.empty(self.t_count, dtype=np.int64)
        rep_names = self.transversal_names()
        rep_pos = {nm: t for t, nm in enumerate(rep_names)}
        for t, nm in enumerate(rep_names):
            try:
                tgt_name, (num, den) = recipe[nm]
            except KeyError:
                raise TowerError(f"recipe missing transversal rep {nm!r}") from None
            if ck % den:
                raise TowerError(f"recipe offset {num}/{den} not expressible at level {k}")
            t_img[t] = rep_pos[tgt_name]
            off[t] = (num * (ck // den)) % ck
        base = np.arange(lvl.n, dtype=np.int64)
        t, m = np.divmod(base, ck)
        return t_img[t] * ck + (off[t] - m) % ck

    def theory_names(self, k):
        ck = self.p ** k
        return set(self.level(k).names[:ck])


def t1_tower(H, p, a_gen, *, label=""):
    return T1Tower(H, p, a_gen, label=label)


def inversion_recipe(base):
    """The recipe fixing every transversal rep: alpha(h c) = h c^{-1}."""
    return {nm: (nm, (0, 1)) for nm in base.transversal_names()}


class T2Tower(Tower):
    """Index-2 inverting extension of a p=2 amalgam tower.

    Elements are (eps, g) with the distinguished generator x = (1, identity);
    the product twists by a per-level automorphism alpha and by y = x^2.
    The extension conditions (alpha fixes y, inverts the quasicyclic part,
    and squares to conjugation by y) are verified computationally per level.
    """

    kind = "t2"
    theory_tag = "K = <a> (unique involution of the quasicyclic part)"

    def __init__(self, base, y_name, m, recipe, *, label=""):
        super().__init__()
        if base.p != 2:
            raise TowerError("t2 extensions require p = 2")
        self.base = base
        self.y_name = y_name
        self.m = int(m)
        if self.m < 1:
            raise TowerError("m must be >= 1")
        self.recipe = recipe
        self.label = label
        self.a_name = base.c_involution_name()
        self._k0 = None

    @property
    def k0(self):
        if self._k0 is None:
            birth = self.base.birth_level(self.y_name, self.base.k0 + GENERATOR_SEARCH_DEPTH)
            if birth is None:
                raise TowerError(f"y element {self.y_name!r} never appears in the base tower")
            self._k0 = max(self.base.k0, birth, 1)
        return self._k0

    @property
    def x_name(self):
        return f"x.{self.base.level(self.k0).names[0]}"

    def _build_level(self, k):
        blvl = self.base.level(k)
        nb = blvl.n
        alpha = self.base._alpha_map(k, self.recipe)
        y_id = blvl.id_of(self.y_name)
        a_id = blvl.id_of(self.a_name)
        self._check_conditions(blvl, alpha, y_id, a_id, k)
        y_inv = blvl.inv(y_id)

        def mul_vec(a, b):
            e1, g1 = np.divmod(a, nb)
            e2, g2 = np.divmod(b, nb)
            g1t = np.where(e2 == 1, alpha[g1], g1)
            r = blvl.mul_vec(g1t, g2)
            both = (e1 & e2) == 1
            if np.any(both):
                r = np.where(both, blvl.mul_vec(r, np.int64(y_id)), r)
            return (e1 ^ e2) * nb + r

        def inv_vec(a):
            e, g = np.divmod(a, nb)
            plain = blvl.inv_vec(g)
            twisted = blvl.mul_vec(blvl.inv_vec(alpha[g]), np.int64(y_inv))
            return e * nb + np.where(e == 1, twisted, plain)

        names = list(blvl.names) + [f"x.{nm}" for nm in blvl.names]
        return Level(2 * nb, names, mul_vec, inv_vec,
                     label=f"{self.label or 't2'}-level{k}")

    def _check_conditions(self, blvl, alpha, y_id, a_id, k):
        nb = blvl.n
        if alpha[0] != 0 or len(np.unique(alpha)) != nb:
            raise ExtensionConditionsFailed("alpha is not a bijection fixing identity", k)
        if nb * nb <= EMBED_FULL_PAIR_BOUND:
            idx = np.arange(nb, dtype=np.int64)
            a = np.repeat(idx, nb)
            b = np.tile(idx, nb)
        else:
            rng = np.random.default_rng(k)
            a = rng.integers(0, nb, size=10 * nb)
            b = rng.integers(0, nb, size=10 * nb)
        if not np.array_equal(alpha[blvl.mul_vec(a, b)],
                              blvl.mul_vec(alpha[a], alpha[b])):
            raise ExtensionConditionsFailed("alpha is not a homomorphism", k)
        c_ids = np.arange(self.base.c_part_count(k), dtype=np.int64)
        if not np.array_equal(alpha[c_ids], blvl.inv_vec(c_ids)):
            raise ExtensionConditionsFailed("alpha does not invert the C part", k)
        if alpha[y_id] != y_id:
            raise ExtensionConditionsFailed("alpha does not fix y", k)
        g = np.arange(nb, dtype=np.int64)
        conj = blvl.mul_vec(blvl.mul_vec(np.full(nb, blvl.inv(y_id), dtype=np.int64), g),
                            np.full(nb, y_id, dtype=np.int64))
        if not np.array_equal(alpha[alpha], conj):
            raise ExtensionConditionsFailed("alpha squared is not conjugation by y", k)
        # y^m must be the distinguished involution, making x^{2m} = a
        cur = 0
        for _ in range(self.m):
            cur = blvl.mul(cur, y_id)
        if cur != a_id:
            raise ExtensionConditionsFailed(f"y^{self.m} is not the involution a", k)

    def c_names(self, k):
        return self.base.level(k).names[: self.base.c_part_count(k)]

    def theory_names(self, k):
        lvl = self.level(k)
        return {lvl.names[0], self.a_name}


def t2_tower(base, y_name, m, recipe, *, label=""):
    return T2Tower(base, y_name, m, recipe, label=label)


def example_t2_tower():
    """The m = 2 extension of <z> x C built from the order-4 twist recipe."""
    z2 = FiniteGroupTable([[0, 1], [1, 0]], ["e", "z"], label="Z2")
    base = T1Tower(z2, 2, 0, label="z2xC")  # trivial amalgam: plain direct product
    recipe = {"e": ("e", (0, 1)), "z": ("z", (1, 2))}
    return T2Tower(base, "z.1/4", 2, recipe, label="example-4-2-ii")


class QuaternionTower(Tower):
    """Generalized quaternion groups Q_{2^{k+1}} with their natural inclusions."""

    kind = "quaternion"
    theory_tag = "K = <a> (unique involution)"
    m = 1
    x_name = "x.0"
    a_name = "1/2"

    @property
    def k0(self):
        return 2

    def _build_level(self, k):
        ck = 2 ** k
        half = ck // 2

        def mul_vec(a, b):
            e1, m1 = np.divmod(a, ck)
            e2, m2 = np.divmod(b, ck)
            m = (np.where(e2 == 1, -m1, m1) + m2 + (e1 & e2) * half) % ck
            return (e1 ^ e2) * ck + m

        def inv_vec(a):
            e, m = np.divmod(a, ck)
            return e * ck + np.where(e == 1, (m + half) % ck, (-m) % ck)

        names = [prufer_name(m, 2, k) for m in range(ck)] \
            + [f"x.{prufer_name(m, 2, k)}" for m in range(ck)]
        return Level(2 * ck, names, mul_vec, inv_vec, label=f"Q{2 ** (k + 1)}")

    def c_names(self, k):
        return self.level(k).names[: 2 ** k]

    def theory_names(self, k):
        return {"0", "1/2"}


def quaternion_tower():
    return QuaternionTower()


class QuotientTower(Tower):
    """Level-wise quotient of a tower by the finite subgroup its names generate.

    The generated subgroup must be the same set of names at every level, and
    normal at every level.  Coset names are the lexicographically least member
    name, which is stable across levels.
    """

    kind = "quotient-of-tower"

    def __init__(self, base, gen_names, *, label=""):
        super().__init__()
        self.base = base
        self.gen_names = list(gen_names)
        self.label = label
        self._n_names = None
        births = []
        for nm in self.gen_names:
            b = base.birth_level(nm, base.k0 + GENERATOR_SEARCH_DEPTH)
            if b is None:
                raise TowerError(f"generator {nm!r} never appears in the base tower")
            births.append(b)
        self._k0 = max([base.k0] + births)

    @property
    def k0(self):
        return self._k0

    @property
    def theory_tag(self):
        return self.base.theory_tag and f"image of: {self.base.theory_tag}"

    def _subgroup_at(self, k):
        blvl = self.base.level(k)
        members = {0}
        frontier = [blvl.id_of(nm) for nm in self.gen_names]
        for g in frontier:
            members.add(g)
        while frontier:
            new = []
            for a in frontier:
                for b in list(members):
                    for prod in (blvl.mul(a, b), blvl.mul(b, a)):
                        if prod not in members:
                            members.add(prod)
                            new.append(prod)
            frontier = new
        names = {blvl.names[g] for g in members}
        if self._n_names is None:
            self._n_names = names
        elif names != self._n_names:
            raise TowerError(
                f"quotient subgroup is not stable: differs at level {k}")
        return sorted(members)

    def _build_level(self, k):
        blvl = self.base.level(k)
        N = np.array(self._subgroup_at(k), dtype=np.int64)
        n_set = set(N.tolist())
        all_ids = np.arange(blvl.n, dtype=np.int64)
        inv_all = blvl.inv_vec(all_ids)
        for nn in N.tolist():
            conj = blvl.mul_vec(blvl.mul_vec(inv_all, np.int64(nn)), all_ids)
            bad = ~np.isin(conj, N)
            if bad.any():
                g = int(all_ids[bad][0])
                raise TowerError(
                    f"not normal at level {k}: conjugate of {blvl.names[nn]} "
                    f"by {blvl.names[g]} escapes")
        cmap = np.full(blvl.n, -1, dtype=np.int64)
        cosets = []
        for g in range(blvl.n):
            if cmap[g] != -1:
                continue
            members = blvl.mul_vec(np.full(len(N), g, dtype=np.int64), N)
            cmap[members] = len(cosets)
            cosets.append(members)
        order = [0] + sorted(range(1, len(cosets)),
                             key=lambda i: min(blvl.names[int(g)] for g in cosets[i]))
        relabel = np.empty(len(cosets), dtype=np.int64)
        for new, old in enumerate(order):
            relabel[old] = new
        cmap = relabel[cmap]
        reps = np.empty(len(cosets), dtype=np.int64)
        names = [None] * len(cosets)
        for old, members in enumerate(cosets):
            new = int(relabel[old])
            reps[new] = members.min()
            names[new] = f"[{min(blvl.names[int(g)] for g in members)}]"

        def mul_vec(a, b):
            return cmap[blvl.mul_vec(reps[a], reps[b])]

        def inv_vec(a):
            return cmap[blvl.inv_vec(reps[a])]

        lvl = Level(len(cosets), names, mul_vec, inv_vec,
                    label=f"{self.label or 'quotient'}-level{k}")
        lvl.projection = cmap  # base level id -> coset id
        return lvl

    def theory_names(self, k):
        base_theory = self.base.theory_names(k)
        if base_theory is None:
            return None
        lvl = self.level(k)
        blvl = self.base.level(k)
        if not self._n_names <= base_theory:
            return None  # quotient subgroup is not inside the predicted K
        return {lvl.names[int(lvl.projection[blvl.id_of(nm)])] for nm in base_theory}


def quotient_tower(base, gen_names, *, label=""):
    return QuotientTower(base, gen_names, label=label)


# ---------------------------------------------------------------------------
# eta by levels

@dataclass
class LevelEta:
    level: int
    size: int
    members: list = None  # names, kept only when small


@dataclass
class EtaReport:
    element: str
    tower_kind: str
    per_level: list
    stabilized: bool
    certificate: tuple = None  # (level k*, window w): sets agreed on k*..k*+w
    stable_set: list = None

    def to_json(self):
        doc = {
            "element": self.element,
            "tower_kind": self.tower_kind,
            "per_level": [{"level": pl.level, "size": pl.size,
                           **({"members": pl.members} if pl.members is not None else {})}
                          for pl in self.per_level],
            "stabilized": self.stabilized,
        }
        if self.certificate is not None:
            doc["certificate"] = {"level": self.certificate[0], "window": self.certificate[1]}
        if self.stable_set is not None:
            doc["stable_set"] = self.stable_set
        return doc


def _roots_cols(level, target_ids):
    """Boolean matrix R with R[h, j] true iff target j lies in <h>."""
    n = level.n
    T = len(target_ids)
    R = np.zeros((n, T), dtype=bool)
    tmap = np.full(n, -1, dtype=np.int64)
    tmap[np.asarray(target_ids, dtype=np.int64)] = np.arange(T)
    if tmap[0] >= 0:
        R[:, tmap[0]] = True  # identity is a power of everything
    act = np.arange(n, dtype=np.int64)
    cur = act.copy()
    while act.size:
        t = tmap[cur]
        hit = t >= 0
        if hit.any():
            R[act[hit], t[hit]] = True
        cur = level.mul_vec(cur, act)
        keep = cur != 0
        act, cur = act[keep], cur[keep]
    return R


def _eta_engine(tower, names, max_level, window, member_cap):
    """Compute per-level eta for the named elements, with coherence checks."""
    names = list(names)
    k0 = tower.k0
    levels = {k: tower.level(k) for k in range(k0, max_level + 1)}
    # eta vectors per level: cols[k] is (n_k, T) boolean, column j = eta(names[j])
    cols = {}
    present = {}
    for k in range(k0, max_level + 1):
        lvl = levels[k]
        ids = [lvl.id_of(nm) if lvl.has(nm) else -1 for nm in names]
        live = [j for j, i in enumerate(ids) if i >= 0]
        R = _roots_cols(lvl, [ids[j] for j in live])
        eta_vecs = ~R
        # an element is never in its own eta, nor is the identity of eta(identity)
        full = np.zeros((lvl.n, len(names)), dtype=bool)
        for col, j in enumerate(live):
            full[:, j] = eta_vecs[:, col]
        cols[k] = full
        present[k] = set(live)
    for k in range(k0, max_level):
        emb = tower.embed_ids(k)
        shared = sorted(present[k] & present[k + 1])
        if shared:
            if not np.array_equal(cols[k][:, shared], cols[k + 1][emb][:, shared]):
                raise CoherenceError(
                    f"eta at level {k} disagrees with its restriction from level {k + 1}")
    reports = {}
    for j, nm in enumerate(names):
        lives = sorted(k for k in range(k0, max_level + 1) if j in present[k])
        if not lives:
            raise InvalidElementError(f"element {nm!r} not born by level {max_level}")
        birth = lives[0]
        per_level = []
        sizes = {}
        for k in lives:
            size = int(cols[k][:, j].sum())
            sizes[k] = size
            members = None
            if size <= member_cap:
                members = sorted(levels[k].names[int(i)]
                                 for i in np.nonzero(cols[k][:, j])[0])
            per_level.append(LevelEta(k, size, members))
        cert = None
        for k_star in range(birth, max_level - window + 1):
            if all(sizes[k_star + i] == sizes[k_star] for i in range(window + 1)):
                cert = (k_star, window)
                break
        if cert is not None:
            k_star = cert[0]
            stable = sorted(levels[k_star].names[int(i)]
                            for i in np.nonzero(cols[k_star][:, j])[0])
            reports[nm] = EtaReport(nm, tower.kind, per_level, True, cert, stable)
        else:
            reports[nm] = EtaReport(nm, tower.kind, per_level, False)
    return reports


def eta_stabilized(tower, name, max_level=DEFAULT_MAX_LEVEL, window=DEFAULT_WINDOW,
                   *, member_cap=DEFAULT_MEMBER_CAP):
    """Level-wise eta for one element, with a stabilization certificate.

    A report that is not stabilized never claims non-membership of K, only
    that eta kept changing within the examined levels.
    """
    if tower.birth_level(name, max_level) is None:
        raise InvalidElementError(f"unknown element name {name!r} up to level {max_level}")
    return _eta_engine(tower, [name], max_level, window, member_cap)[name]


@dataclass
class KReport:
    tower_kind: str
    max_level: int
    window: int
    birth_level: int
    members: list
    growing: list
    undetermined: list
    theory: list = None
    theory_tag: str = None
    agrees: bool = None
    eta_reports: dict = field(default_factory=dict)

    def to_json(self):
        doc = {
            "tower_kind": self.tower_kind,
            "max_level": self.max_level,
            "window": self.window,
            "birth_level": self.birth_level,
            "members": self.members,
            "growing": self.growing,
            "undetermined": self.undetermined,
        }
        if self.theory is not None:
            doc["theory"] = self.theory
            doc["agrees"] = self.agrees
        if self.theory_tag:
            doc["theory_tag"] = self.theory_tag
        return doc


def k_estimate(tower, max_level=DEFAULT_MAX_LEVEL, window=DEFAULT_WINDOW,
               birth_cap=DEFAULT_BIRTH_CAP, *, member_cap=DEFAULT_MEMBER_CAP):
    """Partition the elements born by the birth cap into stabilized and growing.

    Stabilized elements form the K-estimate; when the tower kind predicts the
    answer, the estimate is compared against it and disagreement is reported
    (not raised) -- the classification theorems are the regression alarm.
    """
    bl = min(max(birth_cap, tower.k0), max_level)
    targets = list(tower.level(bl).names)
    reports = _eta_engine(tower, targets, max_level, window, member_cap)
    members, growing, undetermined = [], [], []
    for nm in targets:
        rep = reports[nm]
        if rep.stabilized:
            members.append(nm)
            continue
        tail = [pl.size for pl in rep.per_level][-(window + 1):]
        if all(a < b for a, b in zip(tail, tail[1:])):
            growing.append(nm)
        else:
            undetermined.append(nm)
    theory = tower.theory_names(bl)
    agrees = None
    theory_list = None
    if theory is not None:
        theory_list = sorted(theory & set(targets))
        agrees = set(members) == set(theory_list)
    return KReport(tower.kind, max_level, window, bl,
                   sorted(members), sorted(growing), sorted(undetermined),
                   theory_list, tower.theory_tag, agrees, reports)


def _is_prime(p):
    if p < 2:
        return False
    return all(p % d for d in range(2, int(p ** 0.5) + 1))
