"""Normal structure: normal subgroups, chief series, central and derived series."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import FlabError, InternalCheckFailure
from .groups import Group, quotient
from .subgroups import (
    SubgroupRef,
    as_ref,
    bits,
    closure_mask,
    full_subgroup,
    normal_subgroup_masks,
    o_pi,
    prime_factors,
    subgroup_from_mask,
    subgroup_to_group,
    trivial_subgroup,
)


def normal_subgroups(X: Group | SubgroupRef) -> list[SubgroupRef]:
    """All normal subgroups, sorted by (order, fingerprint)."""
    X = as_ref(X)
    return [subgroup_from_mask(X.ambient, m) for m in normal_subgroup_masks(X)]


def minimal_normal_subgroups(X: Group | SubgroupRef) -> list[SubgroupRef]:
    """Minimal nontrivial normal subgroups; errors on the trivial group."""
    X = as_ref(X)
    if X.order == 1:
        raise FlabError("the trivial group has no minimal normal subgroups")
    masks = normal_subgroup_masks(X)
    trivial = 1 << X.ambient.identity_idx
    nontrivial = [m for m in masks if m != trivial]
    out = [
        m
        for m in nontrivial
        if not any(other != m and other & ~m == 0 for other in nontrivial)
    ]
    return [subgroup_from_mask(X.ambient, m) for m in out]


@dataclass(frozen=True)
class ChiefFactor:
    """A chief factor H/K (K < H, both normal, nothing normal strictly between).

    ``ambient`` names the group whose element indexing the masks use; for a
    factor of a proper subgroup the normality is relative to that subgroup.
    """

    ambient: Group
    below: SubgroupRef
    above: SubgroupRef

    @property
    def order(self) -> int:
        return self.above.order // self.below.order

    def primes(self) -> list[int]:
        return prime_factors(self.order)

    def verify(self) -> None:
        """Assert the factor is chief: no normal subgroup strictly between."""
        for m in normal_subgroup_masks(full_subgroup(self.ambient)):
            if (
                self.below.mask & ~m == 0
                and m & ~self.above.mask == 0
                and m != self.below.mask
                and m != self.above.mask
            ):
                raise InternalCheckFailure("factor is not chief")
        if self.order > 1 and len(self.primes()) == 1:
            p = self.primes()[0]
            G = self.ambient
            kmask = self.below.mask
            for x in bits(self.above.mask & ~kmask):
                xp = x
                for _ in range(p - 1):
                    xp = G.mul(xp, x)
                if not (kmask >> xp) & 1:
                    raise InternalCheckFailure("abelian chief factor is not elementary")


def _minimal_normal_above(G: Group, floor_mask: int) -> list[int]:
    """Masks of the normal subgroups minimal among those strictly above the floor."""
    masks = [m for m in normal_subgroup_masks(full_subgroup(G)) if floor_mask & ~m == 0 and m != floor_mask]
    return [
        m
        for m in masks
        if not any(other != m and floor_mask & ~other == 0 and other & ~m == 0 for other in masks)
    ]


def chief_series(X: Group | SubgroupRef) -> list[SubgroupRef]:
    """A chief series, built bottom-up with a deterministic choice rule.

    At each step the minimal normal subgroup of the quotient with the smallest
    order (ties broken by least fingerprint) is chosen.
    """
    X = as_ref(X)
    G = X.ambient
    if not X.is_full:
        return _chief_series_subgroup(X)
    series = [trivial_subgroup(G)]
    current = series[0].mask
    full = full_subgroup(G).mask
    while current != full:
        candidates = _minimal_normal_above(G, current)
        pick = min(candidates, key=lambda m: (m.bit_count(), tuple(bits(m))))
        series.append(subgroup_from_mask(G, pick))
        current = pick
    return series


def _chief_series_subgroup(X: SubgroupRef) -> list[SubgroupRef]:
    sub = subgroup_to_group(X)
    inner = chief_series(full_subgroup(sub))
    idx_map = {i: X.ambient.idx_of(sub.perm_at(i)) for i in range(sub.order)}
    out = []
    for ref in inner:
        mask = 0
        for i in bits(ref.mask):
            mask |= 1 << idx_map[i]
        out.append(subgroup_from_mask(X.ambient, mask))
    return out


def chief_factors(X: Group | SubgroupRef) -> list[ChiefFactor]:
    X = as_ref(X)
    series = chief_series(X)
    return [
        ChiefFactor(X.ambient, below, above)
        for below, above in zip(series, series[1:])
    ]


def upper_central_series(X: Group | SubgroupRef) -> list[SubgroupRef]:
    """1 = Z_0 <= Z_1 <= ... up to the stable term (the hypercenter of X)."""
    X = as_ref(X)
    G = X.ambient
    series = [trivial_subgroup(G)]
    while True:
        z = series[-1].mask
        nxt = 0
        for g in bits(X.mask):
            ginv = G.inv(g)
            if all(
                (z >> G.mul(G.mul(ginv, G.inv(s)), G.mul(g, s))) & 1
                for s in X.gen_idxs
            ):
                nxt |= 1 << g
        if nxt == z:
            return series
        series.append(subgroup_from_mask(G, nxt))


def derived_subgroup(X: SubgroupRef) -> SubgroupRef:
    """[X, X] as the normal closure in X of the generator commutators."""
    from .subgroups import gens_for_mask, normal_closure_mask

    G = X.ambient
    seeds = set()
    gens = X.gen_idxs
    for a_pos, a in enumerate(gens):
        ainv = G.inv(a)
        for b in gens[a_pos + 1:]:
            seeds.add(G.mul(G.mul(ainv, G.inv(b)), G.mul(a, b)))
    seeds.discard(G.identity_idx)
    mask = normal_closure_mask(X, sorted(seeds))
    return subgroup_from_mask(G, mask)


def derived_series(X: Group | SubgroupRef) -> list[SubgroupRef]:
    """X >= X' >= X'' >= ... down to the stable term."""
    X = as_ref(X)
    series = [X]
    while True:
        current = series[-1]
        derived = derived_subgroup(current)
        if derived.mask == current.mask:
            return series
        series.append(derived)


def is_soluble(X: Group | SubgroupRef) -> bool:
    return derived_series(X)[-1].is_trivial


def fitting_subgroup(X: Group | SubgroupRef) -> SubgroupRef:
    """F(X): the join of the O_p(X) over primes dividing |X|."""
    X = as_ref(X)
    G = X.ambient
    mask = trivial_subgroup(G).mask
    for p in prime_factors(X.order):
        mask |= o_pi(X, [p]).mask
    return subgroup_from_mask(G, closure_mask(G, list(bits(mask))))


def nilpotent_length(X: Group | SubgroupRef) -> int:
    """Length of the Fitting series; requires a soluble group."""
    X = as_ref(X)
    if not is_soluble(X):
        raise FlabError("nilpotent length is defined for soluble groups only")
    length = 0
    current = subgroup_to_group(X) if not X.is_full else X.ambient
    while current.order > 1:
        fit = fitting_subgroup(current)
        if fit.is_trivial:  # pragma: no cover - impossible for soluble groups
            raise InternalCheckFailure("trivial Fitting subgroup in a soluble group")
        qm = quotient(current, fit.mask, fit.gen_idxs)
        current = qm.group
        length += 1
    return length


def is_nilpotent(X: Group | SubgroupRef) -> bool:
    """Nilpotency via normality of all Sylow subgroups."""
    from .subgroups import is_normal_in, sylow_subgroup

    X = as_ref(X)
    for p in prime_factors(X.order):
        if not is_normal_in(sylow_subgroup(X, p), X):
            return False
    return True
