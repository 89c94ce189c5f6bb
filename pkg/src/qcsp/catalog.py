"""Built-in structures, gadgets, and verified measurement families.

Entries are constructed on demand and deterministically.  Measurement
families re-verify on every load, so a successful get() doubles as a
check.  Flags come from a fixed tag list:

  qpol-eq-qcpol     every quantum polymorphism is a direct sum of
                    classical ones (oracular closure)
  qnopol-eq-qcpol   the same with QH2 dropped (non-oracular closure;
                    implies qpol-eq-qcpol by containment)
  tree              the gadget's underlying structure is a tree
  has-contextual-polymorphisms
                    a concrete contextual polymorphism exists
  no-commutativity-gadget
                    no structure can force commutation at a marked pair
                    without cutting classical extensions

Flag assignments: cliques on >= 3 vertices carry qpol-eq-qcpol; odd
cycles carry both closure flags; one-in-k translate structures with
k >= 3 carry both; K2 carries the two negative tags (its contextual
arity-2 polymorphism is the k2_contextual_poly entry).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from . import boolean, qhom
from .qlinalg import QMat, QuantumFunction, quantum_function, render_qfun
from .structures import (GadgetSpec, Structure, build, clique, cycle,
                         direct_power, render_structure)
from .gadgets import render_gadget

FLAG_TAGS = (
    "qpol-eq-qcpol",
    "qnopol-eq-qcpol",
    "tree",
    "has-contextual-polymorphisms",
    "no-commutativity-gadget",
)

Payload = Union[Structure, GadgetSpec, qhom.QHomCandidate]


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    payload: Payload
    flags: frozenset

    def __post_init__(self):
        object.__setattr__(self, "flags", frozenset(self.flags))
        bad = self.flags - set(FLAG_TAGS)
        if bad:
            raise ValueError(f"unknown flags: {sorted(bad)}")

    @property
    def kind(self) -> str:
        if isinstance(self.payload, Structure):
            return "structure"
        if isinstance(self.payload, GadgetSpec):
            return "gadget"
        return "candidate"

    def export_text(self) -> str:
        if isinstance(self.payload, Structure):
            return render_structure(self.payload)
        if isinstance(self.payload, GadgetSpec):
            return render_gadget(self.payload)
        return render_qfun(self.payload.qf)


# ---------------------------------------------------------------------------
# shared matrices (dimension 2)
# ---------------------------------------------------------------------------

_P0 = QMat(((1, 0), (0, 0)))
_P1 = QMat(((0, 0), (0, 1)))
_HP = QMat((("1/2", "1/2"), ("1/2", "1/2")))
_HM = QMat((("1/2", "-1/2"), ("-1/2", "1/2")))
_I2 = QMat.identity(2)


# ---------------------------------------------------------------------------
# entry builders
# ---------------------------------------------------------------------------

def _clique_entry(m: int) -> CatalogEntry:
    flags = set()
    if m >= 3:
        flags.add("qpol-eq-qcpol")
    if m == 2:
        flags.add("has-contextual-polymorphisms")
        flags.add("no-commutativity-gadget")
    return CatalogEntry(f"clique({m})", clique(m), frozenset(flags))


def _cycle_entry(m: int) -> CatalogEntry:
    flags = set()
    if m % 2 == 1:
        flags.update(("qpol-eq-qcpol", "qnopol-eq-qcpol"))
    return CatalogEntry(f"cycle({m})", cycle(m), frozenset(flags))


def _o_t_entry(k: int, word: str) -> CatalogEntry:
    st = boolean.o_t_structure(k, word)
    flags = frozenset(("qpol-eq-qcpol", "qnopol-eq-qcpol")) if k >= 3 \
        else frozenset()
    return CatalogEntry(f"o_t({k},{word})", st, flags)


def _b_entry() -> CatalogEntry:
    return CatalogEntry("b_structure", boolean.build_b(),
                        frozenset(("has-contextual-polymorphisms",)))


def _verified(name: str, cand: qhom.QHomCandidate, flags=()) -> CatalogEntry:
    report = qhom.verify(cand)
    if not report.verdict:
        raise ValueError(f"catalog entry {name} failed verification")
    return CatalogEntry(name, cand, frozenset(flags))


def _k2_poly_entry() -> CatalogEntry:
    """Arity-2 polymorphism of K2 with noncommuting projectors at (0,0)
    and (1,0); the reason K2 has no commutativity gadget."""
    K2 = clique(2)
    src = ((0, 0), (1, 1), (1, 0), (0, 1))
    blocks = {
        ((0, 0), 0): _P0, ((0, 0), 1): _P1,
        ((1, 1), 0): _P1, ((1, 1), 1): _P0,
        ((1, 0), 0): _HP, ((1, 0), 1): _HM,
        ((0, 1), 0): _HM, ((0, 1), 1): _HP,
    }
    qf = quantum_function(src, (0, 1), 2, blocks)
    cand = qhom.QHomCandidate(direct_power(K2, 2), K2, qf, "oracular")
    return _verified("k2_contextual_poly", cand)


def _c7_to_c5_entry() -> CatalogEntry:
    """Contextual homomorphism from the 7-cycle onto a 5-cycle carried
    by two noncommuting rank-1 projectors; dimension 2."""
    C7 = cycle(7)
    edges = [(0, 1), (1, 2), (2, 5), (5, 6), (6, 0)]
    C5b = build("C5b", (0, 1, 2, 5, 6), {"E": 2},
                {"E": edges + [(b, a) for a, b in edges]})
    blocks = {
        (0, 2): _P0, (0, 5): _P1,
        (1, 5): _P0, (1, 2): _P1,
        (2, 6): _P0, (2, 1): _P1,
        (3, 0): _I2,
        (4, 1): _HP, (4, 6): _HM,
        (5, 0): _I2,
        (6, 1): _P0, (6, 6): _P1,
    }
    qf = quantum_function(tuple(range(7)), (0, 1, 2, 5, 6), 2, blocks)
    cand = qhom.QHomCandidate(C7, C5b, qf, "oracular")
    return _verified("c7_to_c5", cand)


def _b4_entry() -> CatalogEntry:
    """The default arity-4 contextual polymorphism of the three-relation
    Boolean structure."""
    B = boolean.build_b()
    sqf = boolean.build_arity4_contextual()
    qf = boolean.to_quantum_function(sqf, B)
    cand = qhom.QHomCandidate(direct_power(B, 4), B, qf, "oracular")
    return _verified("b4_contextual", cand)


def _km_power_gadget_entry(m: int, n: int) -> CatalogEntry:
    """Commutativity gadget for K_m: its n-th power with distinguished
    tuples agreeing in the first coordinate and nowhere else."""
    if m < 3:
        raise ValueError("power gadgets need cliques on >= 3 vertices")
    if n < 2:
        raise ValueError("power gadget exponent must be >= 2")
    u = (0,) * n
    v = (0,) + (1,) * (n - 1)
    spec = GadgetSpec(direct_power(clique(m), n), (u, v))
    return CatalogEntry(f"km_power_gadget({m},{n})", spec, frozenset())


def _path_gadget_entry(length: int) -> CatalogEntry:
    """Oriented path with `length` edges; distinguished endpoints.  Over
    a symmetric target it defines the pairs joined by a walk of that
    length, and its orientation keeps the incidence structure acyclic."""
    if length < 1:
        raise ValueError("path length must be >= 1")
    P = build(f"P{length}", range(length + 1), {"E": 2},
              {"E": [(i, i + 1) for i in range(length)]}, by_index=True)
    spec = GadgetSpec(P, (0, length))
    return CatalogEntry(f"path_gadget({length})", spec, frozenset(("tree",)))


# ---------------------------------------------------------------------------
# lookup
# ---------------------------------------------------------------------------

_PLAIN = {
    "b_structure": _b_entry,
    "k2_contextual_poly": _k2_poly_entry,
    "c7_to_c5": _c7_to_c5_entry,
    "b4_contextual": _b4_entry,
}

_PARAMETRIC = {
    "clique": (_clique_entry, (int,)),
    "cycle": (_cycle_entry, (int,)),
    "o_t": (_o_t_entry, (int, str)),
    "km_power_gadget": (_km_power_gadget_entry, (int, int)),
    "path_gadget": (_path_gadget_entry, (int,)),
}


def get(name: str) -> CatalogEntry:
    """Look up an entry by name, e.g. clique(3), o_t(3,100),
    km_power_gadget(5,3), k2_contextual_poly."""
    name = name.strip()
    head, sep, rest = name.partition("(")
    head = head.strip()
    if not sep:
        maker = _PLAIN.get(head)
        if maker is None:
            raise ValueError(f"unknown catalog name {name!r}")
        return maker()
    if not rest.endswith(")"):
        raise ValueError(f"malformed catalog name {name!r}")
    maker_types = _PARAMETRIC.get(head)
    if maker_types is None:
        raise ValueError(f"unknown catalog name {name!r}")
    maker, types = maker_types
    raw = [a.strip() for a in rest[:-1].split(",")]
    if len(raw) != len(types):
        raise ValueError(f"{head} takes {len(types)} parameter(s)")
    args = []
    for tok, typ in zip(raw, types):
        if typ is int:
            try:
                args.append(int(tok))
            except ValueError:
                raise ValueError(f"bad integer {tok!r} in {name!r}") from None
        else:
            args.append(tok)
    return maker(*args)


DEFAULT_NAMES = (
    "clique(2)",
    "clique(3)",
    "clique(4)",
    "clique(5)",
    "cycle(4)",
    "cycle(5)",
    "cycle(7)",
    "o_t(3,100)",
    "b_structure",
    "k2_contextual_poly",
    "c7_to_c5",
    "b4_contextual",
    "km_power_gadget(3,2)",
    "km_power_gadget(5,3)",
    "path_gadget(3)",
)


def list_entries() -> tuple:
    """The default roster, fully constructed (so measurement entries are
    re-verified as a side effect)."""
    return tuple(get(name) for name in DEFAULT_NAMES)
