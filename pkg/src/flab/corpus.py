"""The builtin verification corpus and corpus-file loading."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from . import config
from .errors import SpecParseError
from .groups import Group, make_group

# Fixed direct and semidirect products (name, spec).  The module-style
# entries E27:A4 and E49:S3 are elementary-abelian groups acted on by a
# point-stabilizer-free complement; they are the designated stress cases for
# the subnormalizer checks.
_FIXED_PRODUCTS: tuple[tuple[str, str], ...] = (
    ("C2xC6", "C2 x C6"),
    ("C2xQ8", "C2 x Q8"),
    ("C3xS3", "C3 x S3"),
    ("S3xC5", "S3 x C5"),
    ("C2xS4", "C2 x S4"),
    ("C5:C4", "sd(C5,C4,n0->n0^2)"),
    ("C7:C3", "sd(C7,C3,n0->n0^2)"),
    ("C7:C6", "sd(C7,C6,n0->n0^3)"),
    ("E9:C2", "sd(E(3^2),C2,n0->n0^2,n1->n1^2)"),
    ("V4:S3", "sd(E(2^2),S3,n0->n1,n1->n0|n0->n1,n1->n0*n1)"),
    ("Q8:C3", "sd(Q8,C3,n0->n1,n1->n0*n1)"),
    ("E25:C4", "sd(E(5^2),C4,n0->n1,n1->n0^4)"),
    ("E49:S3", "sd(E(7^2),S3,n0->n0^6,n1->n0*n1|n0->n1,n1->n0^6*n1^6)"),
    ("E27:A4", "sd(E(3^3),A4,n0->n1,n1->n0^2*n1^2,n2->n0*n1*n2|n0->n0*n1,n1->n2,n2->n1^2*n2^2)"),
)

_ELEMENTARY = ("E(2^2)", "E(2^3)", "E(2^4)", "E(3^2)", "E(3^3)", "E(5^2)", "E(7^2)")


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    spec: str
    group: Group
    provenance: str  # "builtin" | "file" | "extra"


@dataclass
class Corpus:
    entries: tuple[CorpusEntry, ...]

    def __iter__(self):
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def names(self) -> list[str]:
        return [e.name for e in self.entries]

    def get(self, name: str) -> CorpusEntry:
        for e in self.entries:
            if e.name == name:
                return e
        raise KeyError(name)


def build_corpus(max_order: int | None = None, extra: list[str] | None = None) -> Corpus:
    """The builtin corpus: cyclic and dihedral families, small symmetric and
    alternating groups, Q8 and SL(2,3), elementary abelians, and a fixed list
    of direct and semidirect products, all filtered to orders <= max_order.
    """
    max_order = config.CORPUS_MAX_ORDER if max_order is None else max_order
    specs: list[tuple[str, str]] = []
    specs.append(("C1", "C1"))
    for n in range(2, max_order + 1):
        specs.append((f"C{n}", f"C{n}"))
    for order in range(4, max_order + 1, 2):
        specs.append((f"D{order}", f"D{order}"))
    for n in range(3, 6):
        specs.append((f"S{n}", f"S{n}"))
        specs.append((f"A{n}", f"A{n}"))
    specs.append(("Q8", "Q8"))
    specs.append(("SL(2,3)", "SL(2,3)"))
    for spec in _ELEMENTARY:
        specs.append((spec, spec))
    specs.extend(_FIXED_PRODUCTS)

    entries: list[CorpusEntry] = []
    seen: set[str] = set()
    for name, spec in specs:
        if name in seen:
            raise SpecParseError(f"duplicate corpus name {name!r}")
        group = make_group(spec)
        if group.order > max_order:
            continue
        seen.add(name)
        group.name = name
        entries.append(CorpusEntry(name, spec, group, "builtin"))
    for spec in extra or []:
        name = spec
        if name in seen:
            raise SpecParseError(f"duplicate corpus name {name!r}")
        seen.add(name)
        group = make_group(spec)
        group.name = name
        entries.append(CorpusEntry(name, spec, group, "extra"))
    entries.sort(key=lambda e: (e.group.order, e.name))
    return Corpus(tuple(entries))


def load_corpus_file(path: str | Path, max_order: int | None = None) -> Corpus:
    """One group spec per line; '#' starts a comment."""
    max_order = config.CORPUS_MAX_ORDER if max_order is None else max_order
    entries = []
    seen: set[str] = set()
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line in seen:
            raise SpecParseError(f"duplicate corpus spec {line!r}")
        seen.add(line)
        group = make_group(line)
        if group.order > max_order:
            continue
        group.name = line
        entries.append(CorpusEntry(line, line, group, "file"))
    entries.sort(key=lambda e: (e.group.order, e.name))
    return Corpus(tuple(entries))
