"""Finite abelian groups, subgroups, quotients, characters, annihilators.

Group elements are plain int tuples reduced modulo the group's moduli, so
they can be dict keys and sort lexicographically.  Subgroups store their
full element sets; the desk-scale cap makes cosets and annihilators exact
and cheap.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dfield
from functools import reduce
from itertools import product
from math import gcd, lcm

from .errors import DimensionMismatch, NoSuchRoot, NotHomomorphism
from .fields import Field
from .linalg import Matrix


@dataclass(frozen=True)
class FinAbGroup:
    """Product of cyclic groups Z_{n_1} x ... x Z_{n_k}."""

    moduli: tuple

    def __post_init__(self):
        object.__setattr__(self, "moduli", tuple(int(n) for n in self.moduli))
        if any(n < 1 for n in self.moduli):
            raise ValueError("moduli must be >= 1")

    @property
    def order(self):
        return reduce(lambda a, b: a * b, self.moduli, 1)

    @property
    def exponent(self):
        return reduce(lcm, self.moduli, 1)

    def identity(self):
        return (0,) * len(self.moduli)

    def elements(self):
        return [tuple(t) for t in product(*(range(n) for n in self.moduli))]

    def reduce_elem(self, coords):
        if len(coords) != len(self.moduli):
            raise DimensionMismatch(f"element {coords} does not match moduli {self.moduli}")
        return tuple(int(c) % n for c, n in zip(coords, self.moduli))

    def add(self, a, b):
        return tuple((x + y) % n for x, y, n in zip(a, b, self.moduli))

    def neg(self, a):
        return tuple((-x) % n for x, n in zip(a, self.moduli))

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def scale(self, k, a):
        return tuple((k * x) % n for x, n in zip(a, self.moduli))

    def elem_order(self, a):
        return reduce(lcm, (n // gcd(x, n) for x, n in zip(a, self.moduli)), 1)

    def describe(self):
        return " x ".join(f"Z{n}" for n in self.moduli) or "Z1"


@dataclass(frozen=True)
class Subgroup:
    parent: FinAbGroup
    elements: frozenset
    generators: tuple

    @property
    def order(self):
        return len(self.elements)

    def contains(self, a):
        return a in self.elements

    def sorted_elements(self):
        return sorted(self.elements)

    def is_trivial(self):
        return self.order == 1

    def is_full(self):
        return self.order == self.parent.order

    def describe(self):
        return "{" + ", ".join(str(e) for e in self.sorted_elements()) + "}"


def subgroup_generate(group: FinAbGroup, gens) -> Subgroup:
    """Smallest subgroup containing gens, by breadth-first closure."""
    gens = tuple(group.reduce_elem(g) for g in gens)
    seen = {group.identity()}
    frontier = [group.identity()]
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                s = group.add(a, g)
                if s not in seen:
                    seen.add(s)
                    nxt.append(s)
        frontier = nxt
    return Subgroup(group, frozenset(seen), gens)


def trivial_subgroup(group):
    return subgroup_generate(group, [])


def full_subgroup(group):
    gens = []
    k = len(group.moduli)
    for i, n in enumerate(group.moduli):
        if n > 1:
            gens.append(tuple(1 if j == i else 0 for j in range(k)))
    return subgroup_generate(group, gens)


def all_subgroups(group: FinAbGroup):
    """Every subgroup, deterministically ordered by (order, sorted elements)."""
    rank = max(1, len(group.moduli))
    seen = {}
    elems = group.elements()
    # subgroups of a product of k cyclic factors need at most k generators
    def rec(start, chosen):
        sg = subgroup_generate(group, chosen)
        seen.setdefault(sg.elements, sg)
        if len(chosen) >= rank:
            return
        for i in range(start, len(elems)):
            rec(i + 1, chosen + [elems[i]])

    rec(0, [])
    return sorted(seen.values(), key=lambda s: (s.order, s.sorted_elements()))


@dataclass(frozen=True)
class QuotientGroup:
    """Q/P with canonical (lexicographically least) coset representatives."""

    parent: FinAbGroup
    subgroup: Subgroup
    rep_of: dict = dfield(compare=False, default=None)
    reps: tuple = dfield(compare=False, default=None)

    @classmethod
    def make(cls, parent, subgroup):
        rep_of = {}
        reps = []
        for a in parent.elements():
            if a in rep_of:
                continue
            coset = sorted(parent.add(a, b) for b in subgroup.elements)
            r = coset[0]
            reps.append(r)
            for c in coset:
                rep_of[c] = r
        return cls(parent, subgroup, rep_of, tuple(sorted(reps)))

    @property
    def order(self):
        return len(self.reps)

    def rep(self, a):
        return self.rep_of[self.parent.reduce_elem(a)]

    def add(self, a, b):
        return self.rep(self.parent.add(a, b))

    def neg(self, a):
        return self.rep(self.parent.neg(a))


@dataclass(frozen=True)
class Character:
    """Character of Q valued in the roots of unity of a field.

    Evaluation uses a fixed primitive root omega of order exponent(Q):
    f(a) = omega^(sum_i e_i * a_i * (E / n_i)) with E = exponent(Q).
    """

    group: FinAbGroup
    exponents: tuple
    field: Field
    _powers: tuple = dfield(compare=False, default=None)

    @classmethod
    def make(cls, group, exponents, field, omega=None):
        E = group.exponent
        if omega is None:
            omega = field.root_of_unity(E)
        powers = [field.one()]
        for _ in range(E - 1):
            powers.append(field.mul(powers[-1], omega))
        return cls(group, tuple(int(e) % n for e, n in zip(exponents, group.moduli)), field, tuple(powers))

    def value(self, a):
        E = self.group.exponent
        acc = 0
        for e, x, n in zip(self.exponents, a, self.group.moduli):
            acc += e * x * (E // n)
        return self._powers[acc % E]

    def is_trivial(self):
        return all(e == 0 for e in self.exponents)

    def mul(self, other: "Character"):
        exps = tuple((a + b) % n for a, b, n in zip(self.exponents, other.exponents, self.group.moduli))
        return Character(self.group, exps, self.field, self._powers)

    def inv(self):
        exps = tuple((-a) % n for a, n in zip(self.exponents, self.group.moduli))
        return Character(self.group, exps, self.field, self._powers)

    def order(self):
        return reduce(lcm, (n // gcd(e, n) for e, n in zip(self.exponents, self.group.moduli)), 1)

    def kernel_contains(self, subgroup: Subgroup):
        one = self.field.one()
        return all(self.value(a) == one for a in subgroup.elements)


def characters(group: FinAbGroup, field: Field):
    """All |Q| characters of Q over the field; NoSuchRoot if the field is too small."""
    E = group.exponent
    omega = field.root_of_unity(E)  # raises NoSuchRoot when unavailable
    powers = [field.one()]
    for _ in range(E - 1):
        powers.append(field.mul(powers[-1], omega))
    powers = tuple(powers)
    out = []
    for exps in product(*(range(n) for n in group.moduli)):
        out.append(Character(group, tuple(exps), field, powers))
    return out


def trivial_character(group, field):
    return Character.make(group, (0,) * len(group.moduli), field)


def annihilator(chars, subgroup: Subgroup):
    """P-perp: characters trivial on the subgroup."""
    return [f for f in chars if f.kernel_contains(subgroup)]


def fixed_subgroup(group: FinAbGroup, chars):
    """Dual annihilator: elements on which every given character is 1."""
    if not chars:
        return full_subgroup(group)
    one = chars[0].field.one()
    fixed = [a for a in group.elements() if all(f.value(a) == one for f in chars)]
    return subgroup_generate(group, fixed)


def character_matrix(field, chars, betas, alpha=None):
    """Matrix (f(alpha + beta)) with rows indexed by chars, columns by betas."""
    if len(chars) != len(betas):
        raise DimensionMismatch("character matrix must be square")
    group = chars[0].group if chars else None
    rows = []
    for f in chars:
        row = []
        for b in betas:
            arg = group.add(alpha, b) if alpha is not None else b
            row.append(f.value(arg))
        rows.append(row)
    return Matrix(field, rows)


def character_coset_reps(chars, inv_chars):
    """One representative per coset of the subgroup inv_chars inside the full list."""
    inv_keys = {f.exponents for f in inv_chars}
    seen = set()
    reps = []
    for f in chars:
        coset = frozenset(
            tuple((f.exponents[i] + g[i]) % n for i, n in enumerate(f.group.moduli))
            for g in inv_keys
        )
        if coset not in seen:
            seen.add(coset)
            reps.append(f)
    return reps


def order_multiset(group: FinAbGroup):
    return sorted(group.elem_order(a) for a in group.elements())


def character_group_order_multiset(chars):
    return sorted(f.order() for f in chars)


@dataclass(frozen=True)
class GroupIso:
    """Bijective homomorphism between two finite abelian groups, as a full table."""

    source: FinAbGroup
    target: FinAbGroup
    table: dict

    @classmethod
    def from_table(cls, source, target, table):
        iso = cls(source, target, dict(table))
        iso.verify()
        return iso

    @classmethod
    def identity(cls, group):
        return cls(group, group, {a: a for a in group.elements()})

    def apply(self, a):
        return self.table[self.source.reduce_elem(a)]

    def verify(self):
        elems = self.source.elements()
        if sorted(self.table) != sorted(elems):
            raise NotHomomorphism("table does not cover the source group")
        images = set(self.table.values())
        if len(images) != self.target.order or self.source.order != self.target.order:
            raise NotHomomorphism("map is not bijective")
        for a in elems:
            for b in elems:
                if self.table[self.source.add(a, b)] != self.target.add(self.table[a], self.table[b]):
                    raise NotHomomorphism(f"additivity fails at {a}, {b}")
        return True

    def maps_subgroup_onto(self, P: Subgroup, P2: Subgroup):
        return {self.table[a] for a in P.elements} == set(P2.elements)
