"""Gadget-substitution compilers for CSP instances.

An instance X over the source signature is rewritten into an instance
over the target signature by replacing every constraint tuple with a
fresh copy of the gadget registered for its symbol, gluing the copy's
distinguished vertices onto the tuple's vertices.  The non-oracular
variant additionally glues one commutativity-gadget copy per directed
edge of the Gaifman graph of X, forcing the measurements of adjacent
variables to commute.

Output vertices are named `x:<label>` for originals, `g:<sym>:<i>:<w>`
for the internals of the i-th copy for symbol sym, and `h:<x>-<y>:<w>`
for commutativity internals, so provenance is readable off the name.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Mapping, Optional
import os

from . import gadgets as gd
from . import homsearch, qhom
from .gadgets import Certificate, CertificateStore, CommGadget, flat_label
from .structures import (ClassicalHom, GadgetSpec, Signature, Structure,
                         build, classical_hom, clique, gaifman)

BRUTE_CAP = 10 ** 7


@dataclass(frozen=True)
class ReductionRecipe:
    """Per-symbol gadgets over a common target signature, an optional
    commutativity gadget, and the compile mode.  File-sourced
    certificates may ride along and take precedence when present."""

    gadgets: tuple          # ((sym, GadgetSpec), ...) sorted by symbol
    comm: Optional[CommGadget]
    mode: str
    file_certs: tuple = ()  # ((name, Certificate), ...); "comm" for the comm part

    def __post_init__(self):
        if self.mode not in qhom.MODES:
            raise ValueError(f"mode must be one of {qhom.MODES}")
        items = tuple(sorted(dict(self.gadgets).items()))
        object.__setattr__(self, "gadgets", items)
        object.__setattr__(self, "file_certs", tuple(dict(self.file_certs).items()))
        if not items:
            raise ValueError("recipe needs at least one gadget")
        if self.mode == "nonoracular" and self.comm is None:
            raise ValueError("non-oracular recipes need a commutativity gadget")
        sig = items[0][1].structure.signature
        for _, spec in items:
            if spec.structure.signature != sig:
                raise ValueError("gadgets must share one target signature")
        if self.comm is not None and self.comm.structure.signature != sig:
            raise ValueError("commutativity gadget signature disagrees")

    @property
    def gadget_map(self) -> dict:
        return dict(self.gadgets)

    @property
    def source_signature(self) -> Signature:
        return Signature.of([(sym, spec.arity) for sym, spec in self.gadgets])

    @property
    def target_signature(self) -> Signature:
        return self.gadgets[0][1].structure.signature

    def file_cert(self, name: str) -> Optional[Certificate]:
        return dict(self.file_certs).get(name)


@dataclass(frozen=True)
class CompiledInstance:
    """A compiled instance, the origin of every output vertex, and the
    certificates gathered for the gadgets used."""

    instance: Structure
    provenance: tuple       # ((vertex, tag), ...) covering the domain
    certificates: tuple     # ((name, Certificate | None), ...)
    mode: str

    @cached_property
    def _origin(self) -> dict:
        return dict(self.provenance)

    def origin(self, vertex) -> tuple:
        return self._origin[vertex]

    @property
    def certified(self) -> bool:
        certs = dict(self.certificates)
        return bool(certs) and all(c is not None and c.positive
                                   for c in certs.values())

    def stamp(self) -> str:
        return "certified" if self.certified else "uncertified"


def _check_signature(X: Structure, recipe: ReductionRecipe) -> None:
    want = recipe.source_signature
    if X.signature != want:
        raise ValueError(
            f"instance signature {X.signature.arities} does not match "
            f"recipe {want.arities}")


def _xname(lab) -> str:
    return f"x:{flat_label(lab)}"


def _compile_core(X: Structure, recipe: ReductionRecipe):
    """Vertices, relation tuples, and provenance for the gadget-copy
    part shared by both modes."""
    domain = [_xname(lab) for lab in X.domain]
    prov = {_xname(lab): ("x", lab) for lab in X.domain}
    target_sig = recipe.target_signature
    rel_map: dict = {sym: [] for sym in target_sig.symbols()}
    expected = X.size
    for sym, spec in recipe.gadgets:
        G = spec.structure
        internals = [w for w in G.domain if w not in spec.distinguished]
        expected += len(X.rel(sym)) * len(internals)
        for ti, t in enumerate(X.rel_labels(sym)):
            ren = dict(zip(spec.distinguished, (_xname(lab) for lab in t)))
            for w in internals:
                fresh = f"g:{sym}:{ti}:{flat_label(w)}"
                ren[w] = fresh
                domain.append(fresh)
                prov[fresh] = ("g", sym, ti, w)
            for gsym in G.signature.symbols():
                for gt in G.rel_labels(gsym):
                    rel_map[gsym].append(tuple(ren[w] for w in gt))
    return domain, rel_map, prov, expected


def _finish(X, recipe, domain, rel_map, prov, expected, certs, mode):
    Y = build(f"{X.name}.compiled", domain, recipe.target_signature, rel_map)
    if Y.size != expected:
        raise AssertionError("vertex naming collision in compiled instance")
    provenance = tuple(sorted(prov.items()))
    return CompiledInstance(Y, provenance, tuple(sorted(certs.items())), mode)


def _gadget_certs(recipe: ReductionRecipe, mode: str,
                  target: Optional[Structure],
                  store: Optional[CertificateStore]):
    """One certificate per symbol (q2 of its gadget for its own defined
    relation) plus the comm gadget's c2 when present.  File-sourced
    certificates win.  Without a target structure nothing can be
    recomputed, so unfiled entries stay None (uncertified)."""
    import warnings
    certs: dict = {}
    for sym, spec in recipe.gadgets:
        filed = recipe.file_cert(sym)
        if filed is not None:
            certs[sym] = filed
        elif target is None:
            certs[sym] = None
        else:
            S = gd.defined_relation(spec, target)
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                certs[sym] = gd.check_q2(spec, target, S, mode=mode, store=store)
    if recipe.comm is not None:
        filed = recipe.file_cert("comm")
        if filed is not None:
            certs["comm"] = filed
        elif target is None:
            certs["comm"] = None
        else:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                certs["comm"] = gd.check_c2(recipe.comm, target, mode=mode,
                                            store=store)
    return certs


def compile_oracular(X: Structure, recipe: ReductionRecipe,
                     target: Optional[Structure] = None,
                     store: Optional[CertificateStore] = None) -> CompiledInstance:
    """One gadget copy per constraint tuple, distinguished vertices glued
    onto the tuple.  Output size is |X| plus, for each symbol, (number
    of tuples) times (gadget size minus its arity).  Passing the target
    structure lets the compiler recompute certificates; otherwise only
    file-sourced ones count."""
    if recipe.mode != "oracular":
        raise ValueError("recipe is not oracular")
    _check_signature(X, recipe)
    domain, rel_map, prov, expected = _compile_core(X, recipe)
    certs = _gadget_certs(recipe, "oracular", target, store)
    return _finish(X, recipe, domain, rel_map, prov, expected, certs, "oracular")


def compile_nonoracular(X: Structure, recipe: ReductionRecipe,
                        dedupe_pairs: bool = False,
                        target: Optional[Structure] = None,
                        store: Optional[CertificateStore] = None) -> CompiledInstance:
    """As compile_oracular, plus one commutativity copy per directed
    Gaifman edge of X (following the construction literally; with
    dedupe_pairs=True, one copy per unordered pair instead)."""
    if recipe.mode != "nonoracular":
        raise ValueError("recipe is not non-oracular")
    _check_signature(X, recipe)
    domain, rel_map, prov, expected = _compile_core(X, recipe)
    H = recipe.comm
    internals = [w for w in H.structure.domain if w not in (H.u, H.v)]
    gaif = gaifman(X)
    esym = gaif.signature.symbols()[0]
    edges = gaif.rel_labels(esym)
    if dedupe_pairs:
        edges = tuple(e for e in edges if X.index(e[0]) < X.index(e[1]))
    expected += len(edges) * len(internals)
    for xe, ye in edges:
        ren = {H.u: _xname(xe), H.v: _xname(ye)}
        tag = f"{flat_label(xe)}-{flat_label(ye)}"
        for w in internals:
            fresh = f"h:{tag}:{flat_label(w)}"
            ren[w] = fresh
            domain.append(fresh)
            prov[fresh] = ("h", (xe, ye), w)
        for hsym in H.structure.signature.symbols():
            for ht in H.structure.rel_labels(hsym):
                rel_map[hsym].append(tuple(ren[w] for w in ht))
    certs = _gadget_certs(recipe, "nonoracular", target, store)
    return _finish(X, recipe, domain, rel_map, prov, expected, certs, "nonoracular")


def compile_instance(X: Structure, recipe: ReductionRecipe,
                     dedupe_pairs: bool = False,
                     target: Optional[Structure] = None,
                     store: Optional[CertificateStore] = None) -> CompiledInstance:
    if recipe.mode == "oracular":
        return compile_oracular(X, recipe, target=target, store=store)
    return compile_nonoracular(X, recipe, dedupe_pairs=dedupe_pairs,
                               target=target, store=store)


# ---------------------------------------------------------------------------
# clique lifting
# ---------------------------------------------------------------------------

def clique_lift(X: Structure, m: int, H: Optional[CommGadget]) -> CompiledInstance:
    """Lift a 3-coloring instance to an m-coloring instance: add fresh
    vertices y4..ym, make each original vertex complete to them (and
    them to each other), then glue one commutativity copy between every
    yi and every other vertex.  m = 3 returns X unchanged apart from
    vertex renaming."""
    if m < 3:
        raise ValueError("m must be at least 3")
    syms = X.signature.symbols()
    if len(syms) != 1 or X.signature.arity(syms[0]) != 2:
        raise ValueError("expected a graph instance with one binary symbol")
    esym = syms[0]
    edges = set(X.rel(esym))
    if any(i == j for i, j in edges):
        raise ValueError("instance must be loopless")
    touched = {i for e in edges for i in e}
    if len(touched) != X.size:
        raise ValueError("instance must have no isolated vertices")
    domain = [_xname(lab) for lab in X.domain]
    prov = {_xname(lab): ("x", lab) for lab in X.domain}
    out_edges = [(_xname(X.domain[i]), _xname(X.domain[j])) for i, j in edges]
    ys = []
    for k in range(4, m + 1):
        yk = f"y:{k}"
        ys.append(yk)
        domain.append(yk)
        prov[yk] = ("y", k)
    for a in range(len(ys)):
        for b in range(len(ys)):
            if a != b:
                out_edges.append((ys[a], ys[b]))
    for lab in X.domain:
        for yk in ys:
            out_edges.append((_xname(lab), yk))
            out_edges.append((yk, _xname(lab)))
    expected = X.size + len(ys)
    if ys:
        if H is None:
            raise ValueError("m > 3 needs a commutativity gadget")
        if H.structure.signature != Signature.of({esym: 2}):
            raise ValueError("commutativity gadget signature disagrees")
        internals = [w for w in H.structure.domain if w not in (H.u, H.v)]
        fixed = [_xname(lab) for lab in X.domain] + ys
        pairs = []
        for yk in ys:
            for other in fixed:
                if other == yk:
                    continue
                if other in ys and ys.index(other) < ys.index(yk):
                    continue  # one copy per unordered y pair
                pairs.append((yk, other))
        expected += len(pairs) * len(internals)
        for yk, other in pairs:
            ren = {H.u: yk, H.v: other}
            tag = f"{flat_label(yk)}-{flat_label(other)}"
            for w in internals:
                fresh = f"h:{tag}:{flat_label(w)}"
                ren[w] = fresh
                domain.append(fresh)
                prov[fresh] = ("h", (yk, other), w)
            for ht in H.structure.rel_labels(esym):
                out_edges.append(tuple(ren[w] for w in ht))
    Y = build(f"{X.name}.lifted", domain, {esym: 2}, {esym: out_edges})
    if Y.size != expected:
        raise AssertionError("vertex naming collision in lifted instance")
    if ys:
        import warnings
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            certs = (("comm", gd.check_c2(H, clique(m), mode="oracular")),)
    else:
        certs = (("lift", gd.Certificate("classical-exact", "identity")),)
    return CompiledInstance(Y, tuple(sorted(prov.items())), certs, "oracular")


# ---------------------------------------------------------------------------
# desk-scale classical oracles
# ---------------------------------------------------------------------------

def classical_equivalence_check(X: Structure, recipe: ReductionRecipe,
                                B: Structure, A: Structure) -> bool:
    """Do X -> B and compiled(X) -> A agree classically?

    The feasibility gate |B|^|X| <= 10^7 bounds the declared brute-force
    budget on the input side; the actual searches run through the
    propagating solver, which is complete either way.
    """
    if B.size ** X.size > BRUTE_CAP:
        raise ValueError(f"brute-force cap exceeded: {B.size}^{X.size} > {BRUTE_CAP}")
    comp = compile_instance(X, recipe)
    left = homsearch.find_any(X, B) is not None
    right = homsearch.find_any(comp.instance, A) is not None
    return left == right


def lift_classical(X: Structure, recipe: ReductionRecipe, A: Structure,
                   h: ClassicalHom,
                   comp: Optional[CompiledInstance] = None) -> ClassicalHom:
    """Lift a homomorphism X -> B through the recipe to compiled(X) -> A,
    by extending it across every gadget copy (this is the dimension-1
    half of the reduction's completeness).  Fails if some copy admits no
    extension, which means the gadget's classical precheck fails for a
    tuple image."""
    if comp is None:
        comp = compile_instance(X, recipe)
    gm = recipe.gadget_map
    mapping: dict = {}
    copy_homs: dict = {}
    for vertex in comp.instance.domain:
        tag = comp.origin(vertex)
        if tag[0] == "x":
            mapping[vertex] = h(tag[1])
            continue
        if tag[0] == "g":
            _, sym, ti, w = tag
            key = ("g", sym, ti)
            if key not in copy_homs:
                spec = gm[sym]
                t = X.rel_labels(sym)[ti]
                pins = {gi: h(xi) for gi, xi in zip(spec.distinguished, t)}
                ext = homsearch.find_any(spec.structure, A, pins)
                if ext is None:
                    raise ValueError(
                        f"no extension for {sym} tuple {ti} under the lift")
                copy_homs[key] = ext
            mapping[vertex] = copy_homs[key](w)
            continue
        _, edge, w = tag
        key = ("h", edge)
        if key not in copy_homs:
            H = recipe.comm
            pins = {H.u: h(edge[0]), H.v: h(edge[1])}
            ext = homsearch.find_any(H.structure, A, pins)
            if ext is None:
                raise ValueError(f"no commutativity extension for edge {edge}")
            copy_homs[key] = ext
        mapping[vertex] = copy_homs[key](w)
    return classical_hom(comp.instance, A, mapping)


# ---------------------------------------------------------------------------
# recipe files
# ---------------------------------------------------------------------------

def load_recipe(path: str) -> ReductionRecipe:
    """Read a TOML recipe: `mode`, a `[gadgets]` table of symbol ->
    gadget file, and optionally `comm` naming the commutativity gadget
    file.  Relative paths resolve against the recipe's directory."""
    try:
        import tomllib
    except ModuleNotFoundError:  # Python 3.10
        import tomli as tomllib
    with open(path, "rb") as fh:
        data = tomllib.load(fh)
    base = os.path.dirname(os.path.abspath(path))

    def resolve(p):
        return p if os.path.isabs(p) else os.path.join(base, p)

    mode = data.get("mode")
    if mode not in qhom.MODES:
        raise ValueError(f"recipe mode must be one of {qhom.MODES}")
    table = data.get("gadgets")
    if not isinstance(table, dict) or not table:
        raise ValueError("recipe needs a [gadgets] table")
    gadget_items = []
    file_certs = {}
    for sym, p in sorted(table.items()):
        spec, cert = gd.read_gadget(resolve(p))
        gadget_items.append((sym, spec))
        if cert is not None:
            file_certs[sym] = cert
    comm = None
    if "comm" in data:
        spec, cert = gd.read_gadget(resolve(data["comm"]))
        if spec.arity != 2:
            raise ValueError("commutativity gadget needs exactly two "
                             "distinguished vertices")
        comm = CommGadget(spec.structure, *spec.distinguished)
        if cert is not None:
            file_certs["comm"] = cert
    return ReductionRecipe(tuple(gadget_items), comm, mode,
                           tuple(file_certs.items()))
