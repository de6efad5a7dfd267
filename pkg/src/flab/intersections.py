"""Intersection constructions over the subgroup lattice.

Covers maximal members of a class and the intersections of those subgroups
and of their normalizers, the Sylow-normalizer intersection, class
subnormality with subnormalizers and their intersections, the intersection of
abnormal maximal subgroups, and the "all Sylow / all cyclic primary subgroups
subnormal" membership tests.

Intersections over an empty family return the ambient group.  Subnormality
steps compare the class residual of the chain top against the core of the
maximal subgroup (the quotient lies in the class iff the residual lies inside
the kernel), which keeps the recursion at bitmask level; the test suite
cross-checks residuals against the quotient-based definition.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import NotASubgroup
from .formations import (
    FormationExpr,
    formation_key,
    formation_member,
    residual_mask,
)
from .groups import Group
from .lattice import SubgroupLattice, all_subgroups
from .subgroups import (
    SubgroupRef,
    as_ref,
    bits,
    conjugacy_orbit,
    conjugate_mask,
    full_subgroup,
    normalizer,
    prime_factors,
    subgroup_from_mask,
    sylow_subgroup,
    sylow_subgroups,
    cyclic_primary_subgroups,
    trivial_subgroup,
)


# ---------------------------------------------------------------------------
# Subgroup functors
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SubgroupFunctor:
    """A conjugation-closed assignment of subgroup families to groups."""

    tag: str  # "sylow" | "cyclic-primary" | "maximal" | "f-maximal"
    formation: FormationExpr | None = None

    def __call__(self, X: Group | SubgroupRef) -> list[SubgroupRef]:
        X = as_ref(X)
        if self.tag == "sylow":
            out: list[SubgroupRef] = [trivial_subgroup(X.ambient)]
            for p in prime_factors(X.order):
                out.extend(sylow_subgroups(X, p))
            return out
        if self.tag == "cyclic-primary":
            return cyclic_primary_subgroups(X)
        if self.tag == "maximal":
            from .lattice import maximal_subgroups

            return maximal_subgroups(X)
        if self.tag == "f-maximal":
            assert self.formation is not None
            return f_maximal_subgroups(self.formation, X)
        raise ValueError(f"unknown functor {self.tag!r}")


SYLOW = SubgroupFunctor("sylow")
CYCLIC_PRIMARY = SubgroupFunctor("cyclic-primary")
MAXIMAL = SubgroupFunctor("maximal")


def f_maximal_functor(F: FormationExpr) -> SubgroupFunctor:
    return SubgroupFunctor("f-maximal", F)


# ---------------------------------------------------------------------------
# Members of a class that are maximal among members
# ---------------------------------------------------------------------------


def _nil_residual_idx(lat: SubgroupLattice, i: int) -> int:
    """Index of the lower-central-limit subgroup of refs[i] (cached)."""
    table = lat.memo.setdefault("nil-residual", {})
    cached = table.get(i)
    if cached is None:
        from .formations import residual_mask
        from .formations import NIL as _NIL

        mask = residual_mask(_NIL, lat.refs[i])
        cached = lat.index_of_mask[mask]
        table[i] = cached
    return cached


def _fitting_length_idx(lat: SubgroupLattice, i: int) -> int | None:
    """Fitting length of refs[i]; None when the subgroup is not soluble.

    Computed through iterated lower-central limits: the length is the number
    of iterations until the limit is trivial (cached per subgroup, shared by
    the soluble and bounded-length membership tests).
    """
    table = lat.memo.setdefault("fitting-length", {})
    if i in table:
        return table[i]
    chain = []
    current = i
    while current not in table:
        if lat.refs[current].is_trivial:
            table[current] = 0
            break
        nxt = _nil_residual_idx(lat, current)
        if nxt == current:
            table[current] = None  # perfect nontrivial limit: not soluble
            break
        chain.append(current)
        current = nxt
    for j in reversed(chain):
        below = table[_nil_residual_idx(lat, j)]
        table[j] = None if below is None else below + 1
    return table[i]


def _member_idx(lat: SubgroupLattice, F: FormationExpr, i: int) -> bool:
    """Class membership for lattice members, with index-level fast paths.

    The fast paths (Fitting-length table for nilpotent / soluble / bounded
    length, prime-index maximal subgroups for supersoluble) are checked
    against the definitional tests by the test suite.
    """
    key = ("member", formation_key(F))
    table = lat.memo.get(key)
    if table is None:
        table = {}
        lat.memo[key] = table
    cached = table.get(i)
    if cached is None:
        from .formations import Nil as _Nil, NilPow as _NilPow, Sol as _Sol, Supersoluble as _U

        if isinstance(F, _Nil):
            length = _fitting_length_idx(lat, i)
            cached = length is not None and length <= 1
        elif isinstance(F, _NilPow):
            length = _fitting_length_idx(lat, i)
            cached = length is not None and length <= F.r
        elif isinstance(F, _Sol):
            cached = _fitting_length_idx(lat, i) is not None
        elif isinstance(F, _U):
            # prime-index criterion: supersoluble iff every maximal subgroup
            # has prime index
            order = lat.refs[i].order
            cached = all(
                len(prime_factors(order // lat.refs[j].order)) == 1
                and prime_factors(order // lat.refs[j].order)[0]
                == order // lat.refs[j].order
                for j in lat.maximal_subgroup_idxs(i)
            )
        else:
            cached = formation_member(F, lat.refs[i])
        table[i] = cached
    return cached


def f_maximal_subgroups(F: FormationExpr, X: Group | SubgroupRef) -> list[SubgroupRef]:
    """Members of the class that no larger member of the class contains."""
    X = as_ref(X)
    lat = all_subgroups(X.ambient)
    xi = lat.index_of(X)
    inside = lat.sub_rows[xi]
    member_bits = 0
    for i in bits(inside):
        if _member_idx(lat, F, i):
            member_bits |= 1 << i
    out = []
    for i in bits(member_bits):
        if lat.sup_rows[i] & inside & member_bits & ~(1 << i):
            continue
        out.append(lat.refs[i])
    return out


def f_maximal_intersection(F: FormationExpr, X: Group | SubgroupRef) -> SubgroupRef:
    """Intersection of all class-maximal members (the whole group if none)."""
    X = as_ref(X)
    mask = X.mask
    for ref in f_maximal_subgroups(F, X):
        mask &= ref.mask
    return subgroup_from_mask(X.ambient, mask)


def _normalizer_class_intersection(X: SubgroupRef, refs: list[SubgroupRef]) -> int:
    """Intersection of N_X(M) over the given subgroups.

    Conjugation permutes the family's normalizers (N_X(M^g) = N_X(M)^g and M
    is recovered from N as its unique "normal copy"), so one normalizer per
    X-conjugacy class is computed by scanning and the rest by conjugating it.
    """
    G = X.ambient
    mask = X.mask
    seen: set[int] = set()
    for ref in refs:
        if ref.mask in seen:
            continue
        n_ref = normalizer(X, ref)
        orbit_pairs = {ref.mask: n_ref.mask}
        frontier = [(ref.mask, n_ref.mask)]
        while frontier:
            nxt = []
            for m, nm in frontier:
                for g in X.gen_idxs:
                    cm = conjugate_mask(G, m, g)
                    if cm not in orbit_pairs:
                        cnm = conjugate_mask(G, nm, g)
                        orbit_pairs[cm] = cnm
                        nxt.append((cm, cnm))
            frontier = nxt
        for m, nm in orbit_pairs.items():
            seen.add(m)
            mask &= nm
    return mask


def f_maximal_normalizer_intersection(F: FormationExpr, X: Group | SubgroupRef) -> SubgroupRef:
    """Intersection of the normalizers (in X) of all class-maximal members."""
    X = as_ref(X)
    mask = _normalizer_class_intersection(X, f_maximal_subgroups(F, X))
    return subgroup_from_mask(X.ambient, mask)


def sylow_normalizer_intersection(X: Group | SubgroupRef) -> SubgroupRef:
    """Intersection of the normalizers of all Sylow subgroups (lattice-free)."""
    X = as_ref(X)
    G = X.ambient
    mask = X.mask
    for p in prime_factors(X.order):
        mask &= _normalizer_class_intersection(X, [sylow_subgroup(X, p)])
    return subgroup_from_mask(G, mask)


# ---------------------------------------------------------------------------
# Subnormality
# ---------------------------------------------------------------------------


def _core_mask(lat: SubgroupLattice, t_idx: int, m_idx: int) -> int:
    """Core of refs[m_idx] in refs[t_idx] (cached)."""
    key = ("core", t_idx, m_idx)
    cached = lat.memo.get(key)
    if cached is None:
        G = lat.ambient
        top = lat.refs[t_idx]
        mask = lat.refs[m_idx].mask
        out = mask
        seen = {mask}
        frontier = [mask]
        while frontier:
            nxt = []
            for m in frontier:
                for g in top.gen_idxs:
                    row = G.conj_row(g)
                    c = 0
                    for x in bits(m):
                        c |= 1 << row[x]
                    if c not in seen:
                        seen.add(c)
                        nxt.append(c)
                        out &= c
            frontier = nxt
        cached = out
        lat.memo[key] = cached
    return cached


def _residual_idx(lat: SubgroupLattice, F: FormationExpr, i: int) -> int:
    key = ("residual", formation_key(F))
    table = lat.memo.get(key)
    if table is None:
        table = {}
        lat.memo[key] = table
    cached = table.get(i)
    if cached is None:
        from .formations import Nil as _Nil, NilPow as _NilPow

        if _member_idx(lat, F, i):
            cached = 1 << lat.ambient.identity_idx
        elif isinstance(F, _Nil):
            cached = lat.refs[_nil_residual_idx(lat, i)].mask
        elif isinstance(F, _NilPow):
            j = i
            for _ in range(F.r):
                j = _nil_residual_idx(lat, j)
            cached = lat.refs[j].mask
        else:
            cached = residual_mask(F, lat.refs[i])
        table[i] = cached
    return cached


def _step_ok(lat: SubgroupLattice, F: FormationExpr, t_idx: int, m_idx: int) -> bool:
    """Whether refs[t_idx] / Core(refs[m_idx]) lies in the class."""
    return _residual_idx(lat, F, t_idx) & ~_core_mask(lat, t_idx, m_idx) == 0


def is_f_subnormal(
    F: FormationExpr,
    H: SubgroupRef,
    X: Group | SubgroupRef,
    maximal_chains: bool = True,
) -> bool:
    """Whether H is joined to X by a chain whose step quotients-by-core are members.

    With ``maximal_chains`` (the default) each chain step must be a maximal
    subgroup of the next; with ``maximal_chains=False`` any proper step is
    allowed (diagnostic variant).
    """
    X = as_ref(X)
    if H.ambient is not X.ambient or not X.contains(H):
        raise NotASubgroup("chain bottom is not a subgroup of the chain top")
    lat = all_subgroups(X.ambient)
    return _subnormal(lat, F, lat.index_of(H), lat.index_of(X), maximal_chains)


def _subnormal(
    lat: SubgroupLattice, F: FormationExpr, h_idx: int, t_idx: int, maximal_chains: bool
) -> bool:
    key = ("subnormal", formation_key(F), maximal_chains)
    table = lat.memo.get(key)
    if table is None:
        table = {}
        lat.memo[key] = table
    cached = table.get((h_idx, t_idx))
    if cached is not None:
        return cached
    if h_idx == t_idx:
        result = True
    elif _member_idx(lat, F, t_idx):
        # hereditary catalog: every subgroup of a member is subnormal in it
        result = True
    else:
        result = False
        h_sup = lat.sup_rows[h_idx]
        if maximal_chains:
            steps = lat.maximal_subgroup_idxs(t_idx)
        else:
            steps = list(bits(lat.sub_rows[t_idx] & ~(1 << t_idx)))
        for m_idx in steps:
            if not (h_sup >> m_idx) & 1:
                continue
            if _step_ok(lat, F, t_idx, m_idx) and _subnormal(
                lat, F, h_idx, m_idx, maximal_chains
            ):
                result = True
                break
    table[(h_idx, t_idx)] = result
    return result


@dataclass(frozen=True)
class SubnormalizerSet:
    """The containment-maximal subgroups in which the target is subnormal."""

    target: SubgroupRef
    carriers: tuple[SubgroupRef, ...]

    def __post_init__(self) -> None:
        if not self.carriers:
            raise NotASubgroup("a subnormalizer always exists (the target itself)")


def f_subnormalizers(
    F: FormationExpr, H: SubgroupRef, X: Group | SubgroupRef
) -> SubnormalizerSet:
    """All subnormalizers of H inside X (maximal carriers; not necessarily unique)."""
    X = as_ref(X)
    if H.ambient is not X.ambient or not X.contains(H):
        raise NotASubgroup("target is not a subgroup of the ambient")
    lat = all_subgroups(X.ambient)
    xi = lat.index_of(X)
    hi = lat.index_of(H)
    inside = lat.sub_rows[xi]
    candidate_bits = 0
    for t in bits(lat.sup_rows[hi] & inside):
        if _subnormal(lat, F, hi, t, True):
            candidate_bits |= 1 << t
    carriers = []
    for t in bits(candidate_bits):
        if lat.sup_rows[t] & inside & candidate_bits & ~(1 << t):
            continue
        carriers.append(lat.refs[t])
    return SubnormalizerSet(H, tuple(carriers))


def subnormalizer_intersection(
    F: FormationExpr, sigma: SubgroupFunctor, X: Group | SubgroupRef
) -> SubgroupRef:
    """Intersection of all subnormalizers of all subgroups from the functor."""
    X = as_ref(X)
    mask = X.mask
    for H in sigma(X):
        for carrier in f_subnormalizers(F, H, X).carriers:
            mask &= carrier.mask
    return subgroup_from_mask(X.ambient, mask)


def abnormal_maximal_intersection(F: FormationExpr, X: Group | SubgroupRef) -> SubgroupRef:
    """Intersection of the maximal subgroups M with X/Core(M) outside the class."""
    X = as_ref(X)
    lat = all_subgroups(X.ambient)
    xi = lat.index_of(X)
    mask = X.mask
    for m_idx in lat.maximal_subgroup_idxs(xi):
        if not _step_ok(lat, F, xi, m_idx):
            mask &= lat.refs[m_idx].mask
    return subgroup_from_mask(X.ambient, mask)


def all_sigma_f_subnormal(F: FormationExpr, X: Group | SubgroupRef, mode: str) -> bool:
    """Whether every Sylow ("w") or cyclic primary ("v") subgroup is subnormal in X."""
    sigma = {"w": SYLOW, "v": CYCLIC_PRIMARY}[mode]
    X = as_ref(X)
    lat = all_subgroups(X.ambient)
    xi = lat.index_of(X)
    return all(
        _subnormal(lat, F, lat.index_of(H), xi, True) for H in sigma(X)
    )
