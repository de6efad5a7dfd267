"""Permutation groups: stabilizer chains, named constructors, products, quotients.

A :class:`Group` is an immutable value defined by its degree and generator
list.  Order and membership come from a deterministic Schreier-Sims
stabilizer chain; element enumeration, the index multiplication table and
other caches are populated lazily and written once.
"""

from __future__ import annotations

from array import array
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from . import config
from .errors import (
    ActionError,
    CapExceeded,
    InternalCheckFailure,
    NotNormal,
    SpecParseError,
)
from .perms import Permutation


# ---------------------------------------------------------------------------
# Stabilizer chain (deterministic Schreier-Sims)
# ---------------------------------------------------------------------------


class _Level:
    __slots__ = ("point", "own_gens", "transversal")

    def __init__(self, point: int, degree: int):
        self.point = point
        self.own_gens: list[Permutation] = []
        self.transversal: dict[int, Permutation] = {point: Permutation.identity(degree)}


class StabilizerChain:
    """Base and strong generating set for a permutation group.

    Transversal entries map the base point to the orbit point:
    ``transversal[p](base) == p``.
    """

    def __init__(self, degree: int, generators: Iterable[Permutation] = ()):
        self.degree = degree
        self.levels: list[_Level] = []
        for g in generators:
            self.extend(g)

    # generators valid at level i are those fixing the first i base points
    def _gens_at(self, i: int) -> list[Permutation]:
        out: list[Permutation] = []
        for lvl in self.levels[i:]:
            out.extend(lvl.own_gens)
        return out

    def _sift(self, g: Permutation, start: int = 0) -> tuple[Permutation, int]:
        """Reduce g through levels >= start; return (residue, stuck_level)."""
        for i in range(start, len(self.levels)):
            lvl = self.levels[i]
            p = g(lvl.point)
            if p == lvl.point:
                continue
            u = lvl.transversal.get(p)
            if u is None:
                return g, i
            g = g * u.inverse()
        return g, len(self.levels)

    def extend(self, g: Permutation) -> bool:
        """Add a generator; returns True if the group grew."""
        if g.degree != self.degree:
            raise ValueError("degree mismatch")
        residue, level = self._sift(g)
        if residue.is_identity:
            return False
        self._install(level, residue)
        for i in range(level, -1, -1):
            if i < len(self.levels):
                self._close_level(i)
        return True

    def _install(self, level: int, g: Permutation) -> None:
        if level == len(self.levels):
            point = min(i for i, v in enumerate(g.images) if v != i)
            self.levels.append(_Level(point, self.degree))
        self.levels[level].own_gens.append(g)

    def _rebuild_orbit(self, i: int) -> None:
        lvl = self.levels[i]
        gens = self._gens_at(i)
        lvl.transversal = {lvl.point: Permutation.identity(self.degree)}
        frontier = [lvl.point]
        while frontier:
            nxt = []
            for p in frontier:
                u = lvl.transversal[p]
                for g in gens:
                    q = g(p)
                    if q not in lvl.transversal:
                        lvl.transversal[q] = u * g
                        nxt.append(q)
            frontier = nxt

    def _close_level(self, i: int) -> None:
        """Sift all Schreier generators of level i; install residues deeper."""
        pending = True
        while pending:
            pending = False
            self._rebuild_orbit(i)
            lvl = self.levels[i]
            gens = self._gens_at(i)
            for p in sorted(lvl.transversal):
                u_p = lvl.transversal[p]
                for g in gens:
                    q = g(p)
                    schreier = u_p * g * lvl.transversal[q].inverse()
                    if schreier.is_identity:
                        continue
                    residue, level = self._sift(schreier, i + 1)
                    if residue.is_identity:
                        continue
                    self._install(level, residue)
                    for k in range(level, i, -1):
                        if k < len(self.levels):
                            self._close_level(k)
                    pending = True
                    break
                if pending:
                    break

    def order(self) -> int:
        n = 1
        for lvl in self.levels:
            n *= len(lvl.transversal)
        return n

    def contains(self, g: Permutation) -> bool:
        if g.degree != self.degree:
            return False
        residue, _ = self._sift(g)
        return residue.is_identity


# ---------------------------------------------------------------------------
# Group
# ---------------------------------------------------------------------------


class Group:
    """A finite permutation group on points 0..degree-1.

    Instances are immutable; all lazy caches are write-once and idempotent,
    so sharing a Group between threads is safe in the benign-race sense.
    """

    def __init__(self, degree: int, generators: Iterable[Permutation], name: str | None = None):
        gens: list[Permutation] = []
        for g in generators:
            if g.degree != degree:
                raise ValueError("generator degree mismatch")
            if not g.is_identity and g not in gens:
                gens.append(g)
        self.degree = degree
        self.generators: tuple[Permutation, ...] = tuple(gens)
        self.name = name
        self._chain: StabilizerChain | None = None
        self._order: int | None = None
        self._elements: tuple[Permutation, ...] | None = None
        self._index: dict[Permutation, int] | None = None
        self._identity_idx: int | None = None
        self._table: list[array] | None = None
        self._table_built = False
        self._inv: array | None = None
        self._elt_orders: array | None = None
        self._conj_rows: dict[int, array] = {}
        self._lattice = None
        self._normal_masks: tuple[int, ...] | None = None
        self._subgroup_groups: dict[int, "Group"] = {}
        self._quotients: dict[int, "QuotientMap"] = {}
        self._hypercenters: dict = {}
        self._normal_masks_by_mask: dict[int, tuple[int, ...]] = {}
        self._factor_products: dict[tuple[int, int], "Group"] = {}

    # -- basic structure ----------------------------------------------------

    @property
    def chain(self) -> StabilizerChain:
        if self._chain is None:
            self._chain = StabilizerChain(self.degree, self.generators)
        return self._chain

    @property
    def order(self) -> int:
        if self._order is None:
            self._order = self.chain.order()
        return self._order

    @property
    def is_trivial(self) -> bool:
        return not self.generators

    def __contains__(self, g: Permutation) -> bool:
        return self.chain.contains(g)

    def identity(self) -> Permutation:
        return Permutation.identity(self.degree)

    def __repr__(self) -> str:
        label = self.name or f"degree {self.degree}"
        return f"<Group {label}, order {self.order}>"

    # -- element enumeration -------------------------------------------------

    def elements(self, limit: int | None = None) -> tuple[Permutation, ...]:
        """All elements, sorted by image tuple; errors if order exceeds the cap."""
        if self._elements is None:
            cap = config.ELEMENT_CAP if limit is None else limit
            if self.order > cap:
                raise CapExceeded(f"order {self.order} exceeds element cap {cap}")
            seen = {self.identity()}
            frontier = [self.identity()]
            while frontier:
                nxt = []
                for x in frontier:
                    for g in self.generators:
                        y = x * g
                        if y not in seen:
                            seen.add(y)
                            nxt.append(y)
                frontier = nxt
            if len(seen) != self.order:
                raise InternalCheckFailure("closure count disagrees with chain order")
            self._elements = tuple(sorted(seen))
            self._index = {p: i for i, p in enumerate(self._elements)}
            self._identity_idx = self._index[self.identity()]
        elif limit is not None and len(self._elements) > limit:
            raise CapExceeded(f"order {self.order} exceeds element cap {limit}")
        return self._elements

    def element_index(self) -> dict[Permutation, int]:
        self.elements()
        assert self._index is not None
        return self._index

    @property
    def identity_idx(self) -> int:
        self.elements()
        assert self._identity_idx is not None
        return self._identity_idx

    def idx_of(self, p: Permutation) -> int:
        return self.element_index()[p]

    def perm_at(self, i: int) -> Permutation:
        return self.elements()[i]

    # -- index arithmetic ------------------------------------------------------

    def _build_table(self) -> None:
        """Dense right-multiplication table via the regular representation.

        Row ``r_g`` satisfies ``r_g[x] == index(elem[x] * elem[g])``; rows for
        products compose as index arrays, so the whole table costs O(|G|^2)
        array lookups after the generator rows.
        """
        elems = self.elements()
        n = len(elems)
        idx = self.element_index()
        typecode = "h" if n < 32768 else "l"
        rows: list[array | None] = [None] * n
        e = self.identity_idx
        rows[e] = array(typecode, range(n))
        frontier = [e]
        gen_idx = [idx[g] for g in self.generators]
        gen_rows = {}
        for gi in gen_idx:
            g = elems[gi]
            gen_rows[gi] = array(typecode, (idx[x * g] for x in elems))
        while frontier:
            nxt = []
            for a in frontier:
                ra = rows[a]
                assert ra is not None
                for gi in gen_idx:
                    b = gen_rows[gi][a]  # index of elem[a] * gen
                    if rows[b] is None:
                        rg = gen_rows[gi]
                        rows[b] = array(typecode, (rg[x] for x in ra))
                        nxt.append(b)
            frontier = nxt
        self._table = rows  # type: ignore[assignment]
        self._inv = array(typecode, (idx[p.inverse()] for p in elems))
        self._table_built = True

    def _ensure_table(self) -> bool:
        if not self._table_built and self.order <= config.MUL_TABLE_CAP:
            self._build_table()
        return self._table is not None

    def mul(self, i: int, j: int) -> int:
        """Index of elements[i] * elements[j]."""
        if self._ensure_table():
            return self._table[j][i]  # type: ignore[index]
        return self.idx_of(self.perm_at(i) * self.perm_at(j))

    def inv(self, i: int) -> int:
        if self._inv is None:
            elems = self.elements()
            idx = self.element_index()
            typecode = "h" if len(elems) < 32768 else "l"
            self._inv = array(typecode, (idx[p.inverse()] for p in elems))
        return self._inv[i]

    def conj(self, h: int, g: int) -> int:
        """Index of g^-1 * h * g."""
        return self.mul(self.mul(self.inv(g), h), g)

    def conj_row(self, g: int) -> array:
        """Conjugation by g as an index map (cached)."""
        row = self._conj_rows.get(g)
        if row is None:
            n = self.order
            typecode = "h" if n < 32768 else "l"
            ginv = self.inv(g)
            if self._ensure_table():
                table = self._table
                assert table is not None
                rg = table[g]
                row = array(typecode, (rg[table[x][ginv]] for x in range(n)))
            else:
                row = array(typecode, (self.conj(x, g) for x in range(n)))
            self._conj_rows[g] = row
        return row

    def elt_order(self, i: int) -> int:
        if self._elt_orders is None:
            elems = self.elements()
            self._elt_orders = array("l", (p.order() for p in elems))
        return self._elt_orders[i]

    def gen_idxs(self) -> tuple[int, ...]:
        idx = self.element_index()
        return tuple(idx[g] for g in self.generators)


# ---------------------------------------------------------------------------
# Chain-level normal closures (no element enumeration required)
# ---------------------------------------------------------------------------


def normal_closure_gens(G: Group, seeds: Sequence[Permutation]) -> list[Permutation]:
    """Generators of the normal closure of <seeds> in G, via sifting."""
    gens: list[Permutation] = []
    chain = StabilizerChain(G.degree)
    queue: list[Permutation] = []
    for s in seeds:
        if chain.extend(s):
            gens.append(s)
            queue.append(s)
    while queue:
        s = queue.pop()
        for g in G.generators:
            c = s.conjugate(g)
            if chain.extend(c):
                gens.append(c)
                queue.append(c)
    return gens


def derived_subgroup_gens(gens: Sequence[Permutation], degree: int) -> list[Permutation]:
    """Generators of the derived subgroup of <gens> (normal closure of commutators)."""
    sub = Group(degree, gens)
    seeds = []
    for i, a in enumerate(sub.generators):
        for b in sub.generators[i + 1:]:
            seeds.append(a.commutator(b))
    return normal_closure_gens(sub, seeds)


def is_soluble_chain(G: Group) -> bool:
    """Solubility via the derived series, computed with stabilizer chains."""
    gens: Sequence[Permutation] = G.generators
    order = G.order
    while order > 1:
        gens = derived_subgroup_gens(gens, G.degree)
        new_order = StabilizerChain(G.degree, gens).order()
        if new_order == order:
            return False
        order = new_order
    return True


def is_nilpotent_chain(G: Group) -> bool:
    """Nilpotency via the lower central series, computed with stabilizer chains."""
    current: Sequence[Permutation] = G.generators
    order = G.order
    while order > 1:
        seeds = [a.commutator(b) for a in current for b in G.generators]
        current = normal_closure_gens(G, seeds)
        new_order = StabilizerChain(G.degree, current).order()
        if new_order == order:
            return False
        order = new_order
    return True


def nilpotent_residual_gens(gens: Sequence[Permutation], degree: int) -> list[Permutation]:
    """Generators of the lower-central-series limit of <gens>."""
    G = Group(degree, gens)
    current: Sequence[Permutation] = G.generators
    order = G.order
    while True:
        seeds = [a.commutator(b) for a in current for b in G.generators]
        current = normal_closure_gens(G, seeds)
        new_order = StabilizerChain(G.degree, current).order()
        if new_order == order:
            return list(current)
        order = new_order


# ---------------------------------------------------------------------------
# Named constructors
# ---------------------------------------------------------------------------


def _prime_power_parts(n: int) -> list[int]:
    parts = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            q = 1
            while n % d == 0:
                q *= d
                n //= d
            parts.append(q)
        d += 1
    if n > 1:
        parts.append(n)
    return parts


def trivial_group() -> Group:
    return Group(1, [], name="1")


def cyclic(n: int) -> Group:
    """C_n acting on one cycle per prime-power part (minimal faithful degree)."""
    if n < 1:
        raise ValueError("n must be positive")
    if n == 1:
        return trivial_group()
    parts = _prime_power_parts(n)
    degree = sum(parts)
    cycles = []
    offset = 0
    for q in parts:
        cycles.append(list(range(offset, offset + q)))
        offset += q
    return Group(degree, [Permutation.from_cycles(degree, cycles)], name=f"C{n}")


def dihedral(order: int) -> Group:
    """Dihedral group of the given (even, >= 4) order."""
    if order < 4 or order % 2:
        raise ValueError("dihedral order must be an even integer >= 4")
    n = order // 2
    if n == 2:
        gens = [Permutation.from_cycles(4, [[0, 1]]), Permutation.from_cycles(4, [[2, 3]])]
        return Group(4, gens, name="D4")
    parts = _prime_power_parts(n)
    degree = sum(parts)
    rot_cycles = []
    refl = list(range(degree))
    offset = 0
    for q in parts:
        rot_cycles.append(list(range(offset, offset + q)))
        for i in range(q):  # inversion x -> -x on each component
            refl[offset + i] = offset + (-i) % q
        offset += q
    r = Permutation.from_cycles(degree, rot_cycles)
    s = Permutation(refl)
    return Group(degree, [r, s], name=f"D{order}")


def symmetric(n: int) -> Group:
    if n < 1:
        raise ValueError("n must be positive")
    if n == 1:
        return trivial_group()
    gens = [Permutation.from_cycles(n, [[0, 1]])]
    if n > 2:
        gens.append(Permutation.from_cycles(n, [list(range(n))]))
    return Group(n, gens, name=f"S{n}")


def alternating(n: int) -> Group:
    if n < 1:
        raise ValueError("n must be positive")
    if n <= 2:
        return trivial_group()
    gens = [Permutation.from_cycles(n, [[i, i + 1, i + 2]]) for i in range(n - 2)]
    return Group(n, gens, name=f"A{n}")


def quaternion8() -> Group:
    """Q8 acting on {1,-1,i,-i,j,-j,k,-k} by right multiplication."""
    gi = Permutation([2, 3, 1, 0, 7, 6, 4, 5])
    gj = Permutation([4, 5, 6, 7, 1, 0, 3, 2])
    return Group(8, [gi, gj], name="Q8")


def special_linear_2_3() -> Group:
    """SL(2,3) acting on the 8 nonzero vectors of F_3^2."""
    vectors = [(x, y) for x in range(3) for y in range(3) if (x, y) != (0, 0)]
    index = {v: i for i, v in enumerate(vectors)}

    def matrix_perm(a: int, b: int, c: int, d: int) -> Permutation:
        return Permutation(
            index[((a * x + b * y) % 3, (c * x + d * y) % 3)] for x, y in vectors
        )

    return Group(8, [matrix_perm(1, 1, 0, 1), matrix_perm(1, 0, 1, 1)], name="SL(2,3)")


def elementary_abelian(p: int, k: int) -> Group:
    """(C_p)^k on k disjoint p-cycles."""
    if k < 1 or p < 2:
        raise ValueError("need p >= 2 and k >= 1")
    degree = p * k
    gens = [
        Permutation.from_cycles(degree, [list(range(i * p, (i + 1) * p))])
        for i in range(k)
    ]
    return Group(degree, gens, name=f"E({p}^{k})")


def from_generators(degree: int, perms: Sequence[Permutation], name: str | None = None) -> Group:
    return Group(degree, perms, name=name)


# ---------------------------------------------------------------------------
# Products
# ---------------------------------------------------------------------------


def direct_product(a: Group, b: Group, name: str | None = None) -> Group:
    """Direct product on deg(a) + deg(b) points."""
    degree = a.degree + b.degree
    gens = []
    for g in a.generators:
        gens.append(Permutation(list(g.images) + list(range(a.degree, degree))))
    for g in b.generators:
        gens.append(Permutation(list(range(a.degree)) + [a.degree + v for v in g.images]))
    out = Group(degree, gens, name=name or f"{a.name} x {b.name}")
    if out.order != a.order * b.order:
        raise InternalCheckFailure("direct product order mismatch")
    return out


def _extend_elementwise_map(
    N: Group, gen_images: Sequence[Permutation]
) -> list[int]:
    """Extend generator images to a map on all of N; verify it is an automorphism.

    Returns the map as a list over element indices.  Raises ActionError if the
    assignment does not define an automorphism.
    """
    elems = N.elements()
    idx = N.element_index()
    for img in gen_images:
        if img not in N:
            raise ActionError("generator image lies outside the target group")
    fmap: list[int | None] = [None] * len(elems)
    e = N.identity_idx
    fmap[e] = e
    frontier = [e]
    gen_pairs = [(idx[g], idx[img]) for g, img in zip(N.generators, gen_images)]
    while frontier:
        nxt = []
        for x in frontier:
            fx = fmap[x]
            assert fx is not None
            for gi, fi in gen_pairs:
                y = N.mul(x, gi)
                fy = N.mul(fx, fi)
                if fmap[y] is None:
                    fmap[y] = fy
                    nxt.append(y)
                elif fmap[y] != fy:
                    raise ActionError("images do not respect the relations of N")
        frontier = nxt
    result = [v for v in fmap if v is not None]
    if len(result) != len(elems) or len(set(result)) != len(elems):
        raise ActionError("image map is not a bijection of N")
    # full homomorphism check on the multiplication table (desk scale)
    out = [v for v in fmap]  # type: ignore[misc]
    n = len(elems)
    for x in range(n):
        for y in range(n):
            if out[N.mul(x, y)] != N.mul(out[x], out[y]):  # type: ignore[index,arg-type]
                raise ActionError("map is not a homomorphism of N")
    return out  # type: ignore[return-value]


def semidirect_product(
    N: Group,
    H: Group,
    action: Sequence[Sequence[Permutation]],
    name: str | None = None,
) -> Group:
    """Semidirect product N x| H.

    ``action[j][i]`` is the image of ``N.generators[i]`` under the automorphism
    attached to ``H.generators[j]``; the assignment must extend to a
    homomorphism H -> Aut(N), which is verified on the multiplication tables.
    The result acts faithfully on the disjoint union of the element sets of N
    and H; conjugation by the embedded H-generator j realises exactly
    ``action[j]`` on the embedded copy of N.
    """
    if len(action) != len(H.generators):
        raise ActionError("need one automorphism per generator of H")
    auto_maps = []
    for images in action:
        if len(images) != len(N.generators):
            raise ActionError("each automorphism must list one image per generator of N")
        auto_maps.append(_extend_elementwise_map(N, images))

    n_elems = N.elements()
    h_elems = H.elements()
    n_idx = N.element_index()
    h_idx = H.element_index()
    n_count, h_count = len(n_elems), len(h_elems)

    # verify the assignment extends to a homomorphism H -> Aut(N)
    phi: list[tuple[int, ...] | None] = [None] * h_count
    ident_map = tuple(range(n_count))
    phi[H.identity_idx] = ident_map
    frontier = [H.identity_idx]
    h_gen_pairs = [(h_idx[g], tuple(m)) for g, m in zip(H.generators, auto_maps)]
    while frontier:
        nxt = []
        for y in frontier:
            py = phi[y]
            assert py is not None
            for gj, fj in h_gen_pairs:
                z = H.mul(y, gj)
                pz = tuple(fj[v] for v in py)  # apply phi(y) then phi(gen)
                if phi[z] is None:
                    phi[z] = pz
                    nxt.append(z)
                elif phi[z] != pz:
                    raise ActionError("action does not extend to a homomorphism H -> Aut(N)")
        frontier = nxt

    degree = n_count + h_count
    gens = []
    for g in N.generators:
        gi = n_idx[g]
        images = [N.mul(x, gi) for x in range(n_count)]
        images += list(range(n_count, degree))
        gens.append(Permutation(images))
    for (gj, fj), g in zip(h_gen_pairs, H.generators):
        images = list(fj)
        images += [n_count + H.mul(y, gj) for y in range(h_count)]
        gens.append(Permutation(images))
    label = name or f"sd({N.name},{H.name})"
    out = Group(degree, gens, name=label)
    if out.order != N.order * H.order:
        raise InternalCheckFailure("semidirect product order mismatch")
    return out


# ---------------------------------------------------------------------------
# Quotients
# ---------------------------------------------------------------------------


@dataclass
class QuotientMap:
    """A quotient group together with the projection onto coset points."""

    source: Group
    group: Group
    coset_of: tuple[int, ...]  # source element index -> coset id (= point)
    reps: tuple[int, ...]  # coset id -> least source element index in the coset
    _elem_image: list[int] | None = field(default=None, repr=False)

    def _images(self) -> list[int]:
        if self._elem_image is None:
            src, quo = self.source, self.group
            qidx = quo.element_index()
            m = len(self.reps)
            images = []
            for i in range(src.order):
                perm = Permutation(self.coset_of[src.mul(self.reps[c], i)] for c in range(m))
                images.append(qidx[perm])
            self._elem_image = images
        return self._elem_image

    def image_index(self, i: int) -> int:
        return self._images()[i]

    def image_mask(self, mask: int) -> int:
        images = self._images()
        out = 0
        m = mask
        while m:
            low = m & -m
            out |= 1 << images[low.bit_length() - 1]
            m ^= low
        return out

    def preimage_mask(self, mask: int) -> int:
        images = self._images()
        out = 0
        for i, q in enumerate(images):
            if (mask >> q) & 1:
                out |= 1 << i
        return out


def quotient(G: Group, normal_mask: int, normal_gen_idxs: Sequence[int]) -> QuotientMap:
    """Quotient of G by a normal subgroup given as an element-index mask.

    The quotient acts faithfully on the right cosets; coset ids are assigned
    in order of least contained element index, so the construction is
    deterministic.  Maps are cached on the source group per normal subgroup.
    """
    cached = G._quotients.get(normal_mask)
    if cached is not None:
        return cached
    G.elements()
    n = G.order
    for g in G.gen_idxs():
        for h in normal_gen_idxs:
            if not (normal_mask >> G.conj(h, g)) & 1:
                raise NotNormal("subgroup is not normal in the ambient group")
    coset_of = [-1] * n
    reps: list[int] = []
    members = []
    m = normal_mask
    while m:
        low = m & -m
        members.append(low.bit_length() - 1)
        m ^= low
    for i in range(n):
        if coset_of[i] != -1:
            continue
        cid = len(reps)
        reps.append(i)
        for x in members:
            coset_of[G.mul(x, i)] = cid
    count = len(reps)
    qgens = []
    for g in G.gen_idxs():
        qgens.append(Permutation(coset_of[G.mul(reps[c], g)] for c in range(count)))
    quo = Group(max(count, 1), qgens, name=f"{G.name}/N" if G.name else None)
    if quo.order * len(members) != n:
        raise InternalCheckFailure("quotient order mismatch")
    qm = QuotientMap(G, quo, tuple(coset_of), tuple(reps))
    G._quotients[normal_mask] = qm
    return qm


# ---------------------------------------------------------------------------
# Group-spec mini-language
# ---------------------------------------------------------------------------
#
# spec    := atom (' x ' atom)*
# atom    := C<n> | D<2n> | S<n> | A<n> | Q8 | SL(2,3) | E(<p>^<k>)
#          | sd(<spec>,<spec>,<action>) | perm(<n>; <cycles>; ...)
# action  := block ('|' block)*          one block per H-generator
# block   := nI->word (',' nJ->word)*    one assignment per N-generator
# word    := '1' | factor ('*' factor)*  factor := n<i>('^'<int>)?


def _split_top_level(text: str, sep: str) -> list[str]:
    parts = []
    depth = 0
    current = []
    for ch in text:
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        if ch == sep and depth == 0:
            parts.append("".join(current))
            current = []
        else:
            current.append(ch)
    parts.append("".join(current))
    return parts


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def _parse_word(word: str, N: Group) -> Permutation:
    word = word.strip()
    ident = N.identity()
    if word == "1":
        return ident
    result = ident
    for factor in word.split("*"):
        factor = factor.strip()
        if "^" in factor:
            base, _, exp = factor.partition("^")
            power = int(exp)
        else:
            base, power = factor, 1
        if not base.startswith("n"):
            raise SpecParseError(f"bad action factor {factor!r}")
        try:
            gi = int(base[1:])
        except ValueError as exc:
            raise SpecParseError(f"bad action factor {factor!r}") from exc
        if not 0 <= gi < len(N.generators):
            raise SpecParseError(f"no generator n{gi} in the normal factor")
        result = result * (N.generators[gi] ** power)
    return result


def _parse_action(text: str, N: Group, H: Group) -> list[list[Permutation]]:
    blocks = [b for b in _split_top_level(text, "|")]
    if len(blocks) != len(H.generators):
        raise SpecParseError(
            f"action lists {len(blocks)} generator blocks, H has {len(H.generators)} generators"
        )
    action = []
    for block in blocks:
        images: dict[int, Permutation] = {}
        for assignment in _split_top_level(block, ","):
            lhs, arrow, rhs = assignment.partition("->")
            if not arrow:
                raise SpecParseError(f"bad action assignment {assignment!r}")
            lhs = lhs.strip()
            if not lhs.startswith("n"):
                raise SpecParseError(f"bad action assignment {assignment!r}")
            gi = int(lhs[1:])
            if not 0 <= gi < len(N.generators):
                raise SpecParseError(f"no generator n{gi} in the normal factor")
            if gi in images:
                raise SpecParseError(f"generator n{gi} assigned twice")
            images[gi] = _parse_word(rhs, N)
        if len(images) != len(N.generators):
            raise SpecParseError("each action block must assign every N-generator")
        action.append([images[i] for i in range(len(N.generators))])
    return action


def _parse_atom(text: str) -> Group:
    text = text.strip()
    if text == "Q8":
        return quaternion8()
    if text == "SL(2,3)":
        return special_linear_2_3()
    if text.startswith("E(") and text.endswith(")"):
        body = text[2:-1]
        p_str, sep, k_str = body.partition("^")
        if not sep:
            raise SpecParseError(f"bad elementary-abelian spec {text!r}")
        p, k = int(p_str), int(k_str)
        if not _is_prime(p):
            raise SpecParseError(f"{p} is not prime in {text!r}")
        return elementary_abelian(p, k)
    if text.startswith("sd(") and text.endswith(")"):
        body = text[3:-1]
        parts = _split_top_level(body, ",")
        if len(parts) < 3:
            raise SpecParseError(f"sd(...) needs a normal factor, a complement and an action: {text!r}")
        n_spec = parts[0]
        h_spec = parts[1]
        action_text = ",".join(parts[2:])
        N = _parse_spec(n_spec)
        H = _parse_spec(h_spec)
        action = _parse_action(action_text, N, H)
        return semidirect_product(N, H, action, name=text)
    if text.startswith("perm(") and text.endswith(")"):
        body = text[5:-1]
        segments = _split_top_level(body, ";")
        if len(segments) < 2:
            raise SpecParseError(f"perm(...) needs a degree and at least one generator: {text!r}")
        try:
            degree = int(segments[0])
        except ValueError as exc:
            raise SpecParseError(f"bad degree in {text!r}") from exc
        gens = [Permutation.parse(degree, seg) for seg in segments[1:]]
        return Group(degree, gens, name=text)
    for prefix, builder in (("C", cyclic), ("D", dihedral), ("S", symmetric), ("A", alternating)):
        if text.startswith(prefix) and text[len(prefix):].isdigit():
            try:
                return builder(int(text[len(prefix):]))
            except ValueError as exc:
                raise SpecParseError(str(exc)) from exc
    raise SpecParseError(f"unrecognised group spec {text!r}")


def _parse_spec(text: str) -> Group:
    text = text.strip()
    if not text:
        raise SpecParseError("empty group spec")
    factors = []
    depth = 0
    current: list[str] = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        if depth == 0 and ch == "x" and i > 0 and text[i - 1] == " " and i + 1 < len(text) and text[i + 1] == " ":
            factors.append("".join(current))
            current = []
            i += 1
        else:
            current.append(ch)
        i += 1
    factors.append("".join(current))
    groups = [_parse_atom(f) for f in factors]
    result = groups[0]
    for g in groups[1:]:
        result = direct_product(result, g)
    result.name = text
    return result


def make_group(spec: str, order_cap: int | None = None) -> Group:
    """Parse a group spec and construct the group; enforces the order cap."""
    group = _parse_spec(spec)
    cap = config.ORDER_CAP if order_cap is None else order_cap
    if group.order > cap:
        raise CapExceeded(f"group order {group.order} exceeds cap {cap}")
    return group
