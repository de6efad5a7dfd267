"""Full subgroup lattice of a small group.

Enumeration seeds with all cyclic subgroups and closes under joins; joins are
only formed between conjugacy-class representatives and prime-power cyclic
"atoms" (every subgroup is generated by its prime-power cyclic subgroups, and
conjugating a representative's joins yields the joins of the whole class), and
each new subgroup is immediately expanded to its conjugacy class.  The result
is exactly the set of all subgroups, found once each.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import config
from .errors import LatticeBudgetExceeded
from .groups import Group
from .subgroups import (
    SubgroupRef,
    as_ref,
    bits,
    closure_mask,
    conjugacy_orbit,
    prime_factors,
    subgroup_from_mask,
)


@dataclass
class SubgroupLattice:
    """All subgroups of the ambient group, with containment and conjugacy data."""

    ambient: Group
    refs: tuple[SubgroupRef, ...]
    index_of_mask: dict[int, int]
    class_id: tuple[int, ...]
    classes: tuple[tuple[int, ...], ...]
    sup_rows: list[int] = field(repr=False)  # bit j set: refs[i] <= refs[j]
    sub_rows: list[int] = field(repr=False)  # bit j set: refs[j] <= refs[i]
    memo: dict = field(default_factory=dict, repr=False)

    def __len__(self) -> int:
        return len(self.refs)

    def index_of(self, ref: SubgroupRef) -> int:
        return self.index_of_mask[ref.mask]

    def subgroups_of(self, ref: SubgroupRef) -> list[SubgroupRef]:
        i = self.index_of(ref)
        return [self.refs[j] for j in bits(self.sub_rows[i])]

    def overgroups_of(self, ref: SubgroupRef) -> list[SubgroupRef]:
        i = self.index_of(ref)
        return [self.refs[j] for j in bits(self.sup_rows[i])]

    def maximal_subgroup_idxs(self, i: int) -> list[int]:
        """Indices of the maximal proper subgroups of refs[i]."""
        key = ("maximals", i)
        cached = self.memo.get(key)
        if cached is None:
            below = self.sub_rows[i] & ~(1 << i)
            out = []
            for j in bits(below):
                # j is maximal in i iff nothing lies strictly between
                between = self.sup_rows[j] & below & ~(1 << j)
                if not between:
                    out.append(j)
            cached = out
            self.memo[key] = cached
        return cached

    def conjugacy_class_of(self, ref: SubgroupRef) -> list[SubgroupRef]:
        i = self.index_of(ref)
        return [self.refs[j] for j in self.classes[self.class_id[i]]]


def _enumerate_subgroups(G: Group) -> list[int]:
    """Masks of all subgroups of G."""
    G.elements()
    n = G.order
    e = G.identity_idx
    full_mask = (1 << n) - 1
    divisors = [d for d in range(1, n) if n % d == 0]
    largest_proper = max(divisors) if divisors else 1

    # seed: all cyclic subgroups; atoms: the prime-power ones
    cyclic_masks: dict[int, int] = {}
    atoms: list[tuple[int, int]] = []  # (mask, generator index)
    atom_masks: set[int] = set()
    for x in range(n):
        if x == e:
            continue
        m = closure_mask(G, [x])
        if m not in cyclic_masks:
            cyclic_masks[m] = x
            o = G.elt_order(x)
            if len(prime_factors(o)) == 1 and m not in atom_masks:
                atom_masks.add(m)
                atoms.append((m, x))

    found: set[int] = {1 << e}
    rep_gens: dict[int, tuple[int, ...]] = {}
    queue: list[int] = []

    def add_class(mask: int, gens: tuple[int, ...]) -> None:
        if mask in found:
            return
        found.add(mask)
        if len(found) > config.LATTICE_SUBGROUP_BUDGET:
            raise LatticeBudgetExceeded(
                f"more than {config.LATTICE_SUBGROUP_BUDGET} subgroups"
            )
        rep_gens[mask] = gens
        queue.append(mask)
        for cm in conjugacy_orbit(G, mask):
            found.add(cm)

    add_class(full_mask, G.gen_idxs())
    for m in sorted(cyclic_masks):
        add_class(m, (cyclic_masks[m],))

    joins = 0
    while queue:
        rep = queue.pop()
        gens = rep_gens[rep]
        for amask, agen in atoms:
            if amask & ~rep == 0:
                continue
            joins += 1
            if joins > config.LATTICE_JOIN_BUDGET:
                raise LatticeBudgetExceeded("join budget exhausted")
            joined = closure_mask(G, list(gens) + [agen], stop_above=largest_proper)
            add_class(joined, tuple(sorted(set(gens) | {agen})))
    return sorted(found, key=lambda m: (m.bit_count(), m))


def all_subgroups(G: Group | SubgroupRef) -> SubgroupLattice:
    """The full subgroup lattice (memoized on the ambient group)."""
    if isinstance(G, SubgroupRef):
        G = G.ambient
    if G._lattice is not None:
        return G._lattice
    masks = _enumerate_subgroups(G)
    refs = tuple(subgroup_from_mask(G, m) for m in masks)
    index_of_mask = {m: i for i, m in enumerate(masks)}

    count = len(refs)
    orders = [m.bit_count() for m in masks]
    sup_rows = [0] * count
    sub_rows = [0] * count
    for i, mi in enumerate(masks):
        oi = orders[i]
        for j in range(i, count):
            if orders[j] % oi == 0 and mi & ~masks[j] == 0:
                sup_rows[i] |= 1 << j
                sub_rows[j] |= 1 << i

    class_id = [-1] * count
    classes: list[tuple[int, ...]] = []
    for i, m in enumerate(masks):
        if class_id[i] != -1:
            continue
        orbit = conjugacy_orbit(G, m)
        cid = len(classes)
        members = tuple(sorted(index_of_mask[cm] for cm in orbit))
        classes.append(members)
        for j in members:
            class_id[j] = cid

    lattice = SubgroupLattice(
        ambient=G,
        refs=refs,
        index_of_mask=index_of_mask,
        class_id=tuple(class_id),
        classes=tuple(classes),
        sup_rows=sup_rows,
        sub_rows=sub_rows,
    )
    G._lattice = lattice
    return lattice


def maximal_subgroups(X: Group | SubgroupRef) -> list[SubgroupRef]:
    """The maximal proper subgroups of X (via the ambient lattice)."""
    X = as_ref(X)
    lat = all_subgroups(X.ambient)
    i = lat.index_of(X)
    return [lat.refs[j] for j in lat.maximal_subgroup_idxs(i)]


def frattini(X: Group | SubgroupRef) -> SubgroupRef:
    """Frattini subgroup: intersection of all maximal subgroups (X if trivial)."""
    X = as_ref(X)
    maxes = maximal_subgroups(X)
    mask = X.mask
    for m in maxes:
        mask &= m.mask
    return subgroup_from_mask(X.ambient, mask)


def lattice_summary(G: Group) -> dict:
    """Subgroup counts by order and conjugacy-class counts (CLI support)."""
    lat = all_subgroups(G)
    by_order: dict[int, int] = {}
    for ref in lat.refs:
        by_order[ref.order] = by_order.get(ref.order, 0) + 1
    return {
        "order": G.order,
        "subgroups": len(lat.refs),
        "conjugacy_classes": len(lat.classes),
        "by_order": dict(sorted(by_order.items())),
    }
