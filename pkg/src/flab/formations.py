"""The group-class catalog: membership, residuals, local definitions.

Supported classes: pi-groups ``Gpi{..}``, nilpotent ``N``, bounded Fitting
length ``N^r``, soluble ``Sol``, supersoluble ``U``, and cross products
``cross[{..}:gpi;..]`` over a partition of the primes (unlisted primes act as
implicit singleton pi-blocks, so ``N`` is the cross product with no listed
blocks).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

from . import config
from .errors import (
    CapExceeded,
    InternalCheckFailure,
    LocalDefinitionUnavailable,
    SpecParseError,
)
from .groups import (
    Group,
    is_nilpotent_chain,
    is_soluble_chain,
    nilpotent_residual_gens,
    quotient,
)
from .subgroups import (
    SubgroupRef,
    as_ref,
    bits,
    closure_mask,
    normal_subgroup_masks,
    o_pi_up_fast_mask,
    prime_factors,
    subgroup_from_mask,
    subgroup_to_group,
)


# ---------------------------------------------------------------------------
# Expressions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Gpi:
    """All pi-groups for an explicit finite prime set."""

    primes: frozenset[int]


@dataclass(frozen=True)
class Nil:
    """All nilpotent groups."""


@dataclass(frozen=True)
class NilPow:
    """Soluble groups of Fitting length at most r."""

    r: int


@dataclass(frozen=True)
class Sol:
    """All soluble groups."""


@dataclass(frozen=True)
class Supersoluble:
    """All supersoluble groups (every chief factor of prime order)."""


@dataclass(frozen=True)
class SolPi:
    """All soluble pi-groups (block kind; also usable standalone in probes)."""

    primes: frozenset[int]


@dataclass(frozen=True)
class CrossBlock:
    primes: frozenset[int]
    soluble: bool  # True: soluble pi-groups in this block; False: all pi-groups


@dataclass(frozen=True)
class Cross:
    """Direct products over a prime partition: G = product of its O_pi parts.

    Primes not covered by a listed block act as implicit singleton blocks of
    all-pi-group kind.
    """

    blocks: tuple[CrossBlock, ...]

    def __post_init__(self) -> None:
        seen: set[int] = set()
        for block in self.blocks:
            if seen & block.primes:
                raise SpecParseError("cross blocks must have disjoint prime sets")
            seen |= block.primes


FormationExpr = Union[Gpi, Nil, NilPow, Sol, Supersoluble, Cross, SolPi]

NIL = Nil()
SOL = Sol()
SUPERSOLUBLE = Supersoluble()


def format_formation(F: FormationExpr) -> str:
    if isinstance(F, Gpi):
        return "Gpi{" + ",".join(map(str, sorted(F.primes))) + "}"
    if isinstance(F, SolPi):
        return "Spi{" + ",".join(map(str, sorted(F.primes))) + "}"
    if isinstance(F, Nil):
        return "N"
    if isinstance(F, NilPow):
        return f"N^{F.r}"
    if isinstance(F, Sol):
        return "Sol"
    if isinstance(F, Supersoluble):
        return "U"
    if isinstance(F, Cross):
        parts = []
        for block in sorted(F.blocks, key=lambda b: min(b.primes)):
            primes = "{" + ",".join(map(str, sorted(block.primes))) + "}"
            parts.append(primes + (":spi" if block.soluble else ":gpi"))
        return "cross[" + ";".join(parts) + "]"
    raise TypeError(f"not a formation expression: {F!r}")


_PRIMESET_RE = re.compile(r"\{\s*(\d+(?:\s*,\s*\d+)*)\s*\}")


def _parse_primeset(text: str) -> frozenset[int]:
    m = _PRIMESET_RE.fullmatch(text.strip())
    if not m:
        raise SpecParseError(f"bad prime set {text!r}")
    primes = frozenset(int(tok) for tok in m.group(1).split(","))
    for p in primes:
        if p < 2 or any(p % d == 0 for d in range(2, int(p ** 0.5) + 1)):
            raise SpecParseError(f"{p} is not prime")
    return primes


def parse_formation(text: str) -> FormationExpr:
    text = text.strip()
    if text == "N":
        return NIL
    if text == "Sol":
        return SOL
    if text == "U":
        return SUPERSOLUBLE
    if text.startswith("N^"):
        try:
            r = int(text[2:])
        except ValueError as exc:
            raise SpecParseError(f"bad class expression {text!r}") from exc
        if r < 1:
            raise SpecParseError("N^r needs r >= 1")
        return NilPow(r)
    if text.startswith("Gpi{") and text.endswith("}"):
        return Gpi(_parse_primeset(text[3:]))
    if text.startswith("cross[") and text.endswith("]"):
        body = text[6:-1].strip()
        blocks = []
        if body:
            for part in body.split(";"):
                part = part.strip()
                primes_text, colon, kind = part.partition(":")
                kind = kind.strip() if colon else "gpi"
                if kind not in ("gpi", "spi"):
                    raise SpecParseError(f"unknown block kind {kind!r}")
                blocks.append(CrossBlock(_parse_primeset(primes_text), kind == "spi"))
        return Cross(tuple(blocks))
    raise SpecParseError(f"unrecognised class expression {text!r}")


def formation_key(F: FormationExpr) -> str:
    return format_formation(F)


def pi_support(F: FormationExpr) -> frozenset[int] | None:
    """Primes of the class; None means "all primes"."""
    if isinstance(F, (Gpi, SolPi)):
        return F.primes
    return None


def cross_block_primes(F: Cross | Nil, p: int) -> frozenset[int]:
    """The block of the partition containing p (implicit singleton if unlisted)."""
    if isinstance(F, Cross):
        for block in F.blocks:
            if p in block.primes:
                return block.primes
    return frozenset([p])


def partition_blocks_for(F: Cross | Nil, primes: list[int]) -> list[tuple[frozenset[int], bool]]:
    """The blocks (with kinds) meeting the given primes, implicit singletons included."""
    out: list[tuple[frozenset[int], bool]] = []
    remaining = set(primes)
    if isinstance(F, Cross):
        for block in F.blocks:
            if block.primes & remaining:
                out.append((block.primes, block.soluble))
                remaining -= block.primes
    for p in sorted(remaining):
        out.append((frozenset([p]), False))
    return out


# ---------------------------------------------------------------------------
# Membership
# ---------------------------------------------------------------------------


def _burnside_small(primes: frozenset[int]) -> bool:
    # every {p,q}-group is soluble, so insoluble members need >= 3 block primes
    return len(primes) <= 2


def formation_member(F: FormationExpr, X: Group | SubgroupRef) -> bool:
    """Membership test for the catalog classes."""
    if isinstance(X, Group) and X.order > config.ELEMENT_CAP:
        return _member_large_group(F, X)
    return _member_ref(F, as_ref(X))


def _member_large_group(F: FormationExpr, G: Group) -> bool:
    """Membership without element enumeration (chain-based), where possible."""
    if isinstance(F, Gpi):
        return all(p in F.primes for p in prime_factors(G.order))
    if isinstance(F, SolPi):
        return all(p in F.primes for p in prime_factors(G.order)) and is_soluble_chain(G)
    if isinstance(F, Sol):
        return is_soluble_chain(G)
    if isinstance(F, Nil):
        return is_nilpotent_chain(G)
    if isinstance(F, NilPow):
        if not is_soluble_chain(G):
            return False
        gens = list(G.generators)
        for _ in range(F.r):
            gens = nilpotent_residual_gens(gens, G.degree)
            if not gens:
                return True
        from .groups import StabilizerChain

        return StabilizerChain(G.degree, gens).order() == 1
    if isinstance(F, Supersoluble):
        if not is_soluble_chain(G):
            return False
        raise CapExceeded(
            f"supersolubility test needs element enumeration; order {G.order}"
        )
    if isinstance(F, Cross):
        relevant = partition_blocks_for(F, prime_factors(G.order))
        if all(_burnside_small(primes) for primes, _ in relevant):
            if not is_soluble_chain(G):
                return False
        raise CapExceeded(f"cross membership needs element enumeration; order {G.order}")
    raise TypeError(f"not a formation expression: {F!r}")


def _member_ref(F: FormationExpr, X: SubgroupRef) -> bool:
    if isinstance(F, Gpi):
        return all(p in F.primes for p in prime_factors(X.order))
    if isinstance(F, SolPi):
        if any(p not in F.primes for p in prime_factors(X.order)):
            return False
        from .series import is_soluble

        return is_soluble(X)
    if isinstance(F, Nil):
        from .series import is_nilpotent

        return is_nilpotent(X)
    if isinstance(F, Sol):
        from .series import is_soluble

        return is_soluble(X)
    if isinstance(F, NilPow):
        from .series import is_soluble

        return is_soluble(X) and _iterated_nil_residual(X, F.r).bit_count() == 1
    if isinstance(F, Supersoluble):
        from .series import chief_factors, is_soluble

        if not is_soluble(X):
            return False
        return all(_is_prime_int(f.order) for f in chief_factors(X))
    if isinstance(F, Cross):
        return _cross_member_ref(F, X)
    raise TypeError(f"not a formation expression: {F!r}")


def _is_prime_int(n: int) -> bool:
    factors = prime_factors(n)
    return len(factors) == 1 and factors[0] == n


def _cross_member_ref(F: Cross, X: SubgroupRef) -> bool:
    """X is the direct product of its O_pi parts over the partition blocks."""
    from .subgroups import o_pi
    from .series import is_soluble

    order = X.order
    if order == 1:
        return True
    total = 1
    parts = []
    for primes, soluble in partition_blocks_for(F, prime_factors(order)):
        part = o_pi(X, primes)
        parts.append((part, soluble))
        total *= part.order
    if total != order:
        return False
    return all(not soluble or is_soluble(part) for part, soluble in parts)


# ---------------------------------------------------------------------------
# Residuals
# ---------------------------------------------------------------------------


def formation_residual(F: FormationExpr, X: Group | SubgroupRef) -> SubgroupRef:
    """Smallest normal subgroup with quotient in the class.

    Computed as the intersection of all normal subgroups with member quotient;
    the quotient by the result is then re-verified to lie in the class.
    """
    X = as_ref(X)
    G = X.ambient
    result = X.mask
    for m in normal_subgroup_masks(X):
        if _quotient_member(F, X, m):
            result &= m
    out = subgroup_from_mask(G, result)
    if not _quotient_member(F, X, result):
        raise InternalCheckFailure(
            f"residual verification failed for {format_formation(F)}"
        )
    return out


def _quotient_member(F: FormationExpr, X: SubgroupRef, normal_mask: int) -> bool:
    """Whether X / (subgroup with this mask) lies in the class."""
    if normal_mask == X.mask:
        return True  # trivial quotient is in every catalog class
    sub = subgroup_to_group(X)
    G = X.ambient
    if sub is G:
        sub_mask = normal_mask
    else:
        # translate the mask into the subgroup's own element indexing
        trans = {i: sub.idx_of(G.perm_at(i)) for i in bits(X.mask)}
        sub_mask = 0
        for i in bits(normal_mask):
            sub_mask |= 1 << trans[i]
    from .subgroups import gens_for_mask

    qm = quotient(sub, sub_mask, gens_for_mask(sub, sub_mask))
    return formation_member(F, qm.group)


def _iterated_nil_residual(X: SubgroupRef, r: int) -> int:
    """Mask of the N^r-residual: the lower-central limit iterated r times."""
    mask = X.mask
    gens = list(X.gen_idxs)
    G = X.ambient
    for _ in range(r):
        mask, gens = _nil_residual_step(G, mask, gens)
        if mask.bit_count() == 1:
            break
    return mask


def _nil_residual_step(G: Group, mask: int, gen_idxs: list[int]) -> tuple[int, list[int]]:
    """Lower-central-series limit of the subgroup <gen_idxs>, at index level."""
    sub_gens = list(gen_idxs)
    current = sub_gens
    ref = SubgroupRef(G, mask, tuple(sub_gens))
    prev_order = mask.bit_count()
    while True:
        comms = set()
        for a in current:
            ainv = G.inv(a)
            for b in sub_gens:
                comms.add(G.mul(G.mul(ainv, G.inv(b)), G.mul(a, b)))
        comms.discard(G.identity_idx)
        from .subgroups import normal_closure_mask

        ncl = normal_closure_mask(ref, sorted(comms))
        size = ncl.bit_count()
        if size == prev_order:
            from .subgroups import gens_for_mask

            return ncl, list(gens_for_mask(G, ncl))
        prev_order = size
        from .subgroups import gens_for_mask

        current = list(gens_for_mask(G, ncl))


def residual_mask(F: FormationExpr, X: SubgroupRef) -> int:
    """Fast residual at index level (no quotient construction where avoidable).

    Cross-checked against :func:`formation_residual` by the test suite.
    """
    G = X.ambient
    if isinstance(F, Gpi):
        return o_pi_up_fast_mask(X, F.primes)
    if isinstance(F, SolPi):
        from .series import derived_series

        piece = o_pi_up_fast_mask(X, F.primes) | derived_series(X)[-1].mask
        return closure_mask(G, list(bits(piece)))
    if isinstance(F, Nil):
        return _iterated_nil_residual(X, 1)
    if isinstance(F, NilPow):
        return _iterated_nil_residual(X, F.r)
    if isinstance(F, Sol):
        from .series import derived_series

        return derived_series(X)[-1].mask
    if isinstance(F, Cross):
        # residual of an intersection of formations is the join of residuals;
        # each block contributes O^pi(O^pi'(X)) * O^pi'(O^pi(X)) (plus the
        # solubility residual of the pi-part for soluble-kind blocks)
        pieces = 0
        for primes, soluble in partition_blocks_for(F, prime_factors(X.order)):
            complement = frozenset(p for p in prime_factors(X.order) if p not in primes)
            a_mask = o_pi_up_fast_mask(X, complement)  # <pi-elements>
            b_mask = o_pi_up_fast_mask(X, primes)  # <pi'-elements>
            a_ref = subgroup_from_mask(G, a_mask)
            b_ref = subgroup_from_mask(G, b_mask)
            pieces |= o_pi_up_fast_mask(a_ref, primes)
            pieces |= o_pi_up_fast_mask(b_ref, complement)
            if soluble:
                from .series import derived_series

                pieces |= derived_series(a_ref)[-1].mask
        return closure_mask(G, list(bits(pieces)))
    if isinstance(F, Supersoluble):
        return formation_residual(F, X).mask
    raise TypeError(f"not a formation expression: {F!r}")


# ---------------------------------------------------------------------------
# Local membership and the boundary search
# ---------------------------------------------------------------------------


def supports_local_definition(F: FormationExpr) -> bool:
    if isinstance(F, (Nil, Supersoluble)):
        return True
    if isinstance(F, Cross):
        return all(not block.soluble for block in F.blocks)
    return False


def local_def_member(F: FormationExpr, p: int, X: Group | SubgroupRef) -> bool:
    """Membership in the canonical local class at the prime p.

    Supported: nilpotent (p-groups), all-pi cross products (block pi-groups),
    supersoluble (G / O_p(G) abelian of exponent dividing p - 1).
    """
    if not supports_local_definition(F):
        raise LocalDefinitionUnavailable(
            f"local definition unavailable for {format_formation(F)}"
        )
    X = as_ref(X)
    if isinstance(F, (Nil, Cross)):
        block = cross_block_primes(F, p)
        return all(q in block for q in prime_factors(X.order))
    # supersoluble: X / O_p(X) abelian of exponent dividing p - 1
    from .subgroups import o_pi

    G = X.ambient
    op = o_pi(X, [p])
    sub = subgroup_to_group(X)
    if sub is not G:
        trans = {i: sub.idx_of(G.perm_at(i)) for i in bits(X.mask)}
        op_mask = 0
        for i in bits(op.mask):
            op_mask |= 1 << trans[i]
    else:
        op_mask = op.mask
    from .subgroups import gens_for_mask

    qm = quotient(sub, op_mask, gens_for_mask(sub, op_mask))
    quo = qm.group
    elems = quo.elements()
    for a in elems:
        if a.order() > 1 and (p - 1) % a.order() != 0:
            return False
    for a in quo.generators:
        for b in quo.generators:
            if a * b != b * a:
                return False
    return True


def boundary_counterexample_search(
    F: FormationExpr,
    universe: frozenset[int] | None,
    groups: list[tuple[str, Group]],
) -> list[tuple[str, int]]:
    """Find (group, p) with G a universe-group outside the class whose maximal
    subgroups all lie in the local class at p.

    The prime p ranges over the primes dividing |G| (larger primes only relax
    the local class further for the supported catalog, and the report is
    corpus-bounded anyway).  Returns (name, p) pairs.
    """
    if not supports_local_definition(F):
        raise LocalDefinitionUnavailable(
            f"local definition unavailable for {format_formation(F)}"
        )
    from .lattice import maximal_subgroups

    out = []
    local_cache: dict[tuple[int, int, int], bool] = {}
    for name, G in groups:
        primes = prime_factors(G.order)
        if universe is not None and any(p not in universe for p in primes):
            continue
        if G.order == 1 or formation_member(F, G):
            continue
        maxes = maximal_subgroups(G)
        for p in primes:
            ok = True
            for M in maxes:
                key = (id(G), M.mask, p)
                verdict = local_cache.get(key)
                if verdict is None:
                    verdict = local_def_member(F, p, M)
                    local_cache[key] = verdict
                if not verdict:
                    ok = False
                    break
            if ok:
                out.append((name, p))
    return out
