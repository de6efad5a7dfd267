"""Subgroups of a fixed ambient group, stored as element-index bitmasks.

A :class:`SubgroupRef` identifies a subgroup by the bitmask of its element
indices inside the ambient group's sorted element list; the mask doubles as
the canonical fingerprint.  All operators here work at index level and need
the ambient group's elements (and usually its multiplication table).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .errors import NotASubgroup
from .groups import Group, quotient


def bits(mask: int) -> Iterator[int]:
    """Iterate set bit positions in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def popcount(mask: int) -> int:
    return mask.bit_count()


@dataclass(frozen=True)
class SubgroupRef:
    """A subgroup of ``ambient`` as an element-index bitmask plus generators."""

    ambient: Group
    mask: int
    gen_idxs: tuple[int, ...]

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, SubgroupRef)
            and self.ambient is other.ambient
            and self.mask == other.mask
        )

    def __hash__(self) -> int:
        return hash((id(self.ambient), self.mask))

    @property
    def order(self) -> int:
        return self.mask.bit_count()

    @property
    def fingerprint(self) -> tuple[int, ...]:
        return tuple(bits(self.mask))

    @property
    def is_trivial(self) -> bool:
        return self.order == 1

    @property
    def is_full(self) -> bool:
        return self.order == self.ambient.order

    def element_idxs(self) -> Iterator[int]:
        return bits(self.mask)

    def contains(self, other: "SubgroupRef") -> bool:
        return other.mask & ~self.mask == 0

    def generators(self):
        return [self.ambient.perm_at(i) for i in self.gen_idxs]

    def __repr__(self) -> str:
        return f"<Subgroup order {self.order} of {self.ambient.name or self.ambient.degree}>"


# ---------------------------------------------------------------------------
# Closure and construction
# ---------------------------------------------------------------------------


def closure_mask(G: Group, seed_idxs: Iterable[int], stop_above: int | None = None) -> int:
    """Bitmask of the subgroup generated by the given element indices.

    If ``stop_above`` is given and the closure grows past it, returns the full
    group mask immediately (caller guarantees the bound, e.g. the largest
    proper divisor of |G|).
    """
    e = G.identity_idx
    mask = 1 << e
    members = [e]
    seeds = []
    for i in seed_idxs:
        if not (mask >> i) & 1:
            mask |= 1 << i
            members.append(i)
            seeds.append(i)
    if not seeds:
        return mask
    table = G._table if G._ensure_table() else None
    frontier = list(members)
    count = len(members)
    if table is not None:
        rows = [table[s] for s in seeds]
        while frontier:
            nxt = []
            for x in frontier:
                for row in rows:
                    y = row[x]
                    if not (mask >> y) & 1:
                        mask |= 1 << y
                        nxt.append(y)
                        count += 1
            if stop_above is not None and count > stop_above:
                return (1 << G.order) - 1
            frontier = nxt
        return mask
    while frontier:
        nxt = []
        for x in frontier:
            for s in seeds:
                y = G.mul(x, s)
                if not (mask >> y) & 1:
                    mask |= 1 << y
                    nxt.append(y)
                    count += 1
        if stop_above is not None and count > stop_above:
            return (1 << G.order) - 1
        frontier = nxt
    return mask


def gens_for_mask(G: Group, mask: int) -> tuple[int, ...]:
    """A small deterministic generating set for the subgroup with this mask."""
    e = G.identity_idx
    if mask == 1 << e:
        return ()
    gens: list[int] = []
    have = 1 << e
    # greedy: repeatedly adjoin the lowest-index element of maximal order
    while have != mask:
        candidates = [i for i in bits(mask & ~have)]
        pick = max(candidates, key=lambda i: (G.elt_order(i), -i))
        gens.append(pick)
        have = closure_mask(G, gens)
    return tuple(sorted(gens))


def subgroup_from_idxs(G: Group, idxs: Sequence[int]) -> SubgroupRef:
    mask = closure_mask(G, idxs)
    gens = tuple(sorted(i for i in idxs if i != G.identity_idx))
    return SubgroupRef(G, mask, gens)


def subgroup_from_mask(G: Group, mask: int, gen_idxs: Sequence[int] | None = None) -> SubgroupRef:
    if gen_idxs is None:
        gen_idxs = gens_for_mask(G, mask)
    return SubgroupRef(G, mask, tuple(gen_idxs))


def trivial_subgroup(G: Group) -> SubgroupRef:
    G.elements()
    return SubgroupRef(G, 1 << G.identity_idx, ())


def full_subgroup(G: Group) -> SubgroupRef:
    G.elements()
    return SubgroupRef(G, (1 << G.order) - 1, G.gen_idxs())


def as_ref(X: Group | SubgroupRef) -> SubgroupRef:
    return X if isinstance(X, SubgroupRef) else full_subgroup(X)


def subgroup_to_group(ref: SubgroupRef) -> Group:
    """The subgroup as a Group in its own right (same degree, cached per mask)."""
    G = ref.ambient
    cached = G._subgroup_groups.get(ref.mask)
    if cached is None:
        if ref.is_full:
            cached = G
        else:
            cached = Group(G.degree, [G.perm_at(i) for i in ref.gen_idxs])
        G._subgroup_groups[ref.mask] = cached
    return cached


def _require_subgroup(X: SubgroupRef, H: SubgroupRef) -> None:
    if H.ambient is not X.ambient:
        raise NotASubgroup("operands live in different ambient groups")
    if not X.contains(H):
        raise NotASubgroup("not a subgroup of the given ambient")


# ---------------------------------------------------------------------------
# Elementary operators
# ---------------------------------------------------------------------------


def normalizer(X: Group | SubgroupRef, H: SubgroupRef) -> SubgroupRef:
    """N_X(H) = {g in X : H^g = H}."""
    X = as_ref(X)
    G = X.ambient
    if H.ambient is not G:
        raise NotASubgroup("operands live in different ambient groups")
    hmask = H.mask
    hgens = H.gen_idxs
    out = 0
    table = G._table if G._ensure_table() else None
    if table is not None:
        inv = G._inv
        for g in bits(X.mask):
            row_g = table[g]
            ginv = inv[g]
            if all((hmask >> row_g[table[h][ginv]]) & 1 for h in hgens):
                out |= 1 << g
    else:
        for g in bits(X.mask):
            if all((hmask >> G.conj(h, g)) & 1 for h in hgens):
                out |= 1 << g
    return subgroup_from_mask(G, out)


def centralizer(X: Group | SubgroupRef, H: SubgroupRef) -> SubgroupRef:
    """C_X(H) = {g in X : gh = hg for all h in H}."""
    X = as_ref(X)
    G = X.ambient
    if H.ambient is not G:
        raise NotASubgroup("operands live in different ambient groups")
    out = 0
    for g in bits(X.mask):
        if all(G.mul(g, h) == G.mul(h, g) for h in H.gen_idxs):
            out |= 1 << g
    return subgroup_from_mask(G, out)


def centralizer_of_factor(
    X: Group | SubgroupRef, H: SubgroupRef, K: SubgroupRef
) -> SubgroupRef:
    """C_X(H/K) = {g : [g, H] <= K}; requires K <= H with both normal in X."""
    X = as_ref(X)
    G = X.ambient
    if not H.contains(K):
        raise NotASubgroup("factor floor is not contained in its ceiling")
    kmask = K.mask
    hgens = H.gen_idxs
    out = 0
    table = G._table if G._ensure_table() else None
    if table is not None:
        inv = G._inv
        hrows = [(h, inv[h]) for h in hgens]
        for g in bits(X.mask):
            ginv = inv[g]
            row_g = table[g]
            ok = True
            for h, hinv in hrows:
                # [g, h] = g^-1 h^-1 g h
                comm = table[h][row_g[table[hinv][ginv]]]
                if not (kmask >> comm) & 1:
                    ok = False
                    break
            if ok:
                out |= 1 << g
        return subgroup_from_mask(G, out)
    for g in bits(X.mask):
        ginv = G.inv(g)
        ok = True
        for h in H.gen_idxs:
            comm = G.mul(G.mul(ginv, G.inv(h)), G.mul(g, h))
            if not (kmask >> comm) & 1:
                ok = False
                break
        if ok:
            out |= 1 << g
    return subgroup_from_mask(G, out)


def conjugate_mask(G: Group, mask: int, g: int) -> int:
    row = G.conj_row(g)
    out = 0
    for x in bits(mask):
        out |= 1 << row[x]
    return out


def conjugacy_orbit(X: Group | SubgroupRef, mask: int) -> list[int]:
    """Orbit of a subgroup mask under conjugation by X (via X's generators)."""
    X = as_ref(X)
    G = X.ambient
    gen_idxs = X.gen_idxs
    seen = {mask}
    frontier = [mask]
    while frontier:
        nxt = []
        for m in frontier:
            for g in gen_idxs:
                c = conjugate_mask(G, m, g)
                if c not in seen:
                    seen.add(c)
                    nxt.append(c)
        frontier = nxt
    return sorted(seen)


def core(X: Group | SubgroupRef, H: SubgroupRef) -> SubgroupRef:
    """Largest X-normal subgroup of H: the intersection of the X-conjugates of H."""
    X = as_ref(X)
    _require_subgroup(X, H)
    out = H.mask
    for m in conjugacy_orbit(X, H.mask):
        out &= m
    return subgroup_from_mask(X.ambient, out)


def is_normal_in(H: SubgroupRef, X: Group | SubgroupRef) -> bool:
    X = as_ref(X)
    G = X.ambient
    hmask = H.mask
    return all(
        (hmask >> G.conj(h, g)) & 1 for g in X.gen_idxs for h in H.gen_idxs
    )


def commutator_subgroup(A: SubgroupRef, B: SubgroupRef) -> SubgroupRef:
    """[A, B], generated by all commutators of elements of A with elements of B."""
    if A.ambient is not B.ambient:
        raise NotASubgroup("operands live in different ambient groups")
    G = A.ambient
    comms = set()
    for a in bits(A.mask):
        ainv = G.inv(a)
        for b in bits(B.mask):
            comms.add(G.mul(G.mul(ainv, G.inv(b)), G.mul(a, b)))
    return subgroup_from_mask(G, closure_mask(G, sorted(comms)))


def join(A: SubgroupRef, B: SubgroupRef) -> SubgroupRef:
    if A.ambient is not B.ambient:
        raise NotASubgroup("operands live in different ambient groups")
    if B.mask & ~A.mask == 0:
        return A
    if A.mask & ~B.mask == 0:
        return B
    mask = closure_mask(A.ambient, list(A.gen_idxs) + list(B.gen_idxs))
    return subgroup_from_mask(A.ambient, mask)


def intersect(A: SubgroupRef, B: SubgroupRef) -> SubgroupRef:
    if A.ambient is not B.ambient:
        raise NotASubgroup("operands live in different ambient groups")
    return subgroup_from_mask(A.ambient, A.mask & B.mask)


def product_mask(G: Group, A: SubgroupRef, B: SubgroupRef) -> int:
    """The set product AB = {ab} as a mask (a subgroup iff AB = BA)."""
    out = 0
    for a in bits(A.mask):
        for b in bits(B.mask):
            out |= 1 << G.mul(a, b)
    return out


# ---------------------------------------------------------------------------
# Sylow and primary structure
# ---------------------------------------------------------------------------


def prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def p_part(n: int, p: int) -> int:
    q = 1
    while n % p == 0:
        q *= p
        n //= p
    return q


def sylow_subgroup(X: Group | SubgroupRef, p: int) -> SubgroupRef:
    """One Sylow p-subgroup of X, grown through normalizers; trivial if p ∤ |X|."""
    X = as_ref(X)
    G = X.ambient
    target = p_part(X.order, p)
    current = trivial_subgroup(G)
    while current.order < target:
        N = normalizer(X, current)
        nmask = N.mask & X.mask
        grown = False
        for x in bits(nmask & ~current.mask):
            o = G.elt_order(x)
            if o % p == 0:
                # p-part power of x normalises current and extends it p-fold
                m = o
                while m % p == 0:
                    m //= p
                xp = x
                # xp = x^m via index powering
                xp = _idx_pow(G, x, m)
                if not (current.mask >> xp) & 1:
                    new_mask = closure_mask(G, list(current.gen_idxs) + [xp])
                    if new_mask.bit_count() == current.order * p:
                        current = subgroup_from_mask(G, new_mask, tuple(sorted((*current.gen_idxs, xp))))
                        grown = True
                        break
        if not grown:  # pragma: no cover - theory guarantees growth below target
            raise RuntimeError("Sylow growth stalled")
    return current


def _idx_pow(G: Group, x: int, n: int) -> int:
    result = G.identity_idx
    base = x
    while n:
        if n & 1:
            result = G.mul(result, base)
        base = G.mul(base, base)
        n >>= 1
    return result


def sylow_subgroups(X: Group | SubgroupRef, p: int) -> list[SubgroupRef]:
    """All Sylow p-subgroups (the unit group alone when p does not divide |X|)."""
    X = as_ref(X)
    G = X.ambient
    if X.order % p != 0:
        return [trivial_subgroup(G)]
    P = sylow_subgroup(X, p)
    return [subgroup_from_mask(G, m) for m in conjugacy_orbit(X, P.mask)]


def cyclic_primary_subgroups(X: Group | SubgroupRef) -> list[SubgroupRef]:
    """All cyclic subgroups of prime-power order, including the trivial one."""
    X = as_ref(X)
    G = X.ambient
    masks = {trivial_subgroup(G).mask}
    out = [trivial_subgroup(G)]
    for x in bits(X.mask):
        o = G.elt_order(x)
        if o > 1 and len(prime_factors(o)) == 1:
            m = closure_mask(G, [x])
            if m not in masks:
                masks.add(m)
                out.append(subgroup_from_mask(G, m, (x,)))
    out.sort(key=lambda r: (r.order, r.mask))
    return out


# ---------------------------------------------------------------------------
# Normal-subgroup machinery (mask level)
# ---------------------------------------------------------------------------


def normal_closure_mask(X: SubgroupRef, seed_idxs: Iterable[int]) -> int:
    """Mask of the normal closure of <seeds> inside the subgroup X."""
    G = X.ambient
    e = G.identity_idx
    mask = 1 << e
    gens = list(X.gen_idxs)
    frontier = []
    seeds = set()
    for s in seed_idxs:
        if not (mask >> s) & 1:
            mask |= 1 << s
            frontier.append(s)
            seeds.add(s)
    # close under conjugation by X and under products
    pending = list(frontier)
    while pending:
        s = pending.pop()
        for g in gens:
            c = G.conj(s, g)
            if c not in seeds:
                seeds.add(c)
                pending.append(c)
    return closure_mask(G, sorted(seeds))


def normal_subgroup_masks(X: Group | SubgroupRef) -> tuple[int, ...]:
    """All X-normal subgroups of X as masks (join closure of element closures)."""
    X = as_ref(X)
    G = X.ambient
    if X.is_full and G._normal_masks is not None:
        return G._normal_masks
    cached = G._normal_masks_by_mask.get(X.mask)
    if cached is not None:
        return cached
    e = G.identity_idx
    atoms = set()
    seen_elts = 1 << e
    conj_rows = [G.conj_row(g) for g in X.gen_idxs]
    for x in bits(X.mask):
        if (seen_elts >> x) & 1:
            continue
        # conjugate elements have the same normal closure; mark the whole class
        orbit = [x]
        orbit_mask = 1 << x
        pending = [x]
        while pending:
            y = pending.pop()
            for row in conj_rows:
                c = row[y]
                if not (orbit_mask >> c) & 1:
                    orbit_mask |= 1 << c
                    orbit.append(c)
                    pending.append(c)
        seen_elts |= orbit_mask
        atoms.add(closure_mask(G, orbit))
    result = {1 << e} | atoms
    frontier = sorted(atoms)
    while frontier:
        nxt = []
        for a in frontier:
            for b in sorted(result):
                if a | b in result:
                    continue
                joined = closure_mask(G, list(bits(a | b)))
                if joined not in result:
                    result.add(joined)
                    nxt.append(joined)
        frontier = nxt
    masks = tuple(sorted(result, key=lambda m: (m.bit_count(), m)))
    if X.is_full:
        G._normal_masks = masks
    G._normal_masks_by_mask[X.mask] = masks
    return masks


# ---------------------------------------------------------------------------
# O_pi, O^pi, O_{p',p}
# ---------------------------------------------------------------------------


def o_pi(X: Group | SubgroupRef, pi: Iterable[int]) -> SubgroupRef:
    """O_pi(X): the largest normal pi-subgroup, as the join of all of them."""
    X = as_ref(X)
    G = X.ambient
    pi = frozenset(pi)
    best = trivial_subgroup(G).mask
    candidates = [
        m
        for m in normal_subgroup_masks(X)
        if all(p in pi for p in prime_factors(m.bit_count()))
    ]
    for m in candidates:
        best |= m
    joined = closure_mask(G, list(bits(best)))
    for m in candidates:
        if m & ~joined:
            raise NotASubgroup("normal pi-subgroups failed to join")  # pragma: no cover
    return subgroup_from_mask(G, joined)


def o_pi_up(X: Group | SubgroupRef, pi: Iterable[int]) -> SubgroupRef:
    """O^pi(X): smallest normal subgroup with pi-quotient (intersection of all)."""
    X = as_ref(X)
    pi = frozenset(pi)
    order = X.order
    result = X.mask
    for m in normal_subgroup_masks(X):
        if all(p in pi for p in prime_factors(order // m.bit_count())):
            result &= m
    # the intersection is itself such a subgroup (the family is closed under it)
    if any(p not in pi for p in prime_factors(order // result.bit_count())):
        raise NotASubgroup("O^pi intersection left the family")  # pragma: no cover
    return subgroup_from_mask(X.ambient, result)


def o_pi_up_fast_mask(X: SubgroupRef, pi: frozenset[int]) -> int:
    """O^pi(X) computed directly as <all q-elements of X, q outside pi>."""
    G = X.ambient
    seeds = []
    for x in bits(X.mask):
        o = G.elt_order(x)
        primes = prime_factors(o)
        if len(primes) == 1 and primes[0] not in pi:
            seeds.append(x)
    return closure_mask(G, seeds)


def o_pp(X: Group | SubgroupRef, p: int) -> SubgroupRef:
    """O_{p',p}(X), defined by O_{p',p}/O_{p'} = O_p(X / O_{p'})."""
    X = as_ref(X)
    G = X.ambient
    opprime = o_pi(X, [q for q in prime_factors(X.order) if q != p])
    if X.is_full:
        qm = quotient(G, opprime.mask, opprime.gen_idxs)
        inner = o_pi(qm.group, [p])
        return subgroup_from_mask(G, qm.preimage_mask(inner.mask))
    sub = subgroup_to_group(X)
    sub_idx = {i: sub.idx_of(G.perm_at(i)) for i in bits(X.mask)}
    back = {v: k for k, v in sub_idx.items()}
    sub_mask = 0
    for i in bits(opprime.mask):
        sub_mask |= 1 << sub_idx[i]
    qm = quotient(sub, sub_mask, [sub_idx[i] for i in opprime.gen_idxs])
    inner = o_pi(qm.group, [p])
    pre = qm.preimage_mask(inner.mask)
    out = 0
    for i in bits(pre):
        out |= 1 << back[i]
    return subgroup_from_mask(G, out)
