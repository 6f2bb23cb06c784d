"""Built-in small-group catalog and enumeration of connection multisets.

The base catalog covers cyclic groups up to order 16, dihedral groups up to
order 16, dicyclic groups up to order 16, direct products up to order 16 and
the tables ``A4``/``S4`` (which fail the hypotheses). :func:`extended_catalog`
adds a few larger groups that reach the rarer branches of the construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations_with_replacement
from typing import Iterator

from .cayley import ConnectionMultiset
from .groups import (
    FiniteGroup,
    alternating4,
    cyclic,
    dicyclic,
    dihedral,
    direct_product,
    generated_subgroup,
    semidirect_product,
    symmetric4,
)

__all__ = ["CatalogEntry", "base_catalog", "extended_catalog", "connection_units", "enumerate_connections", "DEFAULT_CAP"]

DEFAULT_CAP = 500


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    group: FiniteGroup
    negative_control: bool = False


def _power_action(n: int, k: int) -> list[int]:
    return [(k * i) % n for i in range(n)]


def base_catalog() -> list[CatalogEntry]:
    out = [CatalogEntry(f"Z{n}", cyclic(n)) for n in range(2, 17)]
    out += [CatalogEntry(f"D{n}", dihedral(n)) for n in range(2, 9)]
    out += [CatalogEntry(f"Dic{n}", dicyclic(n)) for n in range(2, 5)]
    Z = cyclic
    prods = [
        ("Z2xZ2", Z(2), Z(2)),
        ("Z2xZ4", Z(2), Z(4)),
        ("Z2xZ6", Z(2), Z(6)),
        ("Z2xZ8", Z(2), Z(8)),
        ("Z3xZ3", Z(3), Z(3)),
        ("Z3xZ5", Z(3), Z(5)),
        ("Z4xZ4", Z(4), Z(4)),
        ("Z2xZ2xZ2", direct_product(Z(2), Z(2)), Z(2)),
        ("Z2xZ2xZ4", direct_product(Z(2), Z(2)), Z(4)),
        ("Z2^4", direct_product(direct_product(Z(2), Z(2)), Z(2)), Z(2)),
        ("Z2xD3", Z(2), dihedral(3)),
        ("Z2xD4", Z(2), dihedral(4)),
        ("Z2xQ8", Z(2), dicyclic(2)),
        ("Z3xZ4", Z(3), Z(4)),
        ("Z2xZ2xZ3", direct_product(Z(2), Z(2)), Z(3)),
    ]
    out += [CatalogEntry(name, direct_product(a, b)) for name, a, b in prods]
    out += [CatalogEntry("A4", alternating4(), True), CatalogEntry("S4", symmetric4(), True)]
    return out


def extended_catalog() -> list[CatalogEntry]:
    """Groups beyond order 16 whose connection sets exercise the rarer branches."""
    return [
        CatalogEntry("D15", dihedral(15)),
        CatalogEntry("Z3:Z6", semidirect_product(cyclic(3), cyclic(6), _power_action(3, 2))),
        CatalogEntry("Z5:Z4", semidirect_product(cyclic(5), cyclic(4), _power_action(5, 2))),
        CatalogEntry("D7xZ4", direct_product(dihedral(7), cyclic(4))),
    ]


def connection_units(G: FiniteGroup) -> list[tuple[int, ...]]:
    """Inverse-closed building blocks: each involution alone, each ``{x, x^-1}`` pair."""
    units = []
    for x in range(1, G.order):
        xi = G.inv(x)
        if xi == x:
            units.append((x,))
        elif x < xi:
            units.append((x, xi))
    return units


def _all_connections(G: FiniteGroup, cardinality: int) -> Iterator[ConnectionMultiset]:
    units = connection_units(G)
    for r in range(1, cardinality + 1):
        for combo in combinations_with_replacement(range(len(units)), r):
            els = [x for i in combo for x in units[i]]
            if len(els) == cardinality:
                yield ConnectionMultiset.of(G, els)


def enumerate_connections(
    G: FiniteGroup, cardinalities: tuple[int, ...] = (4, 5), cap: int = DEFAULT_CAP, generating: bool = True
) -> list[ConnectionMultiset]:
    """Distinct inverse-closed multisets of the given cardinalities.

    When more than ``cap`` qualify, an evenly spaced deterministic sample of
    ``cap`` of them is returned, so every region of the ordering is represented.
    """
    found = []
    for c in cardinalities:
        for X in _all_connections(G, c):
            if generating and generated_subgroup(G, X.support).order != G.order:
                continue
            found.append(X)
    if len(found) <= cap:
        return found
    step = len(found) / cap
    return [found[int(i * step)] for i in range(cap)]
