"""Commutativity gadgets, q-definitions, and their certificates.

A gadget defines a relation over a target A: the tuples are the images
of its distinguished elements under classical homomorphisms into A.
Two families of conditions matter here:

* the classical halves (c1: every pair of target elements extends to a
  homomorphism pinning the two distinguished vertices; q1: the defined
  relation equals a given one).  Both are decided exactly by pinned
  search.
* the quantum halves (c2: the distinguished projectors commute in every
  quantum homomorphism into A; q2: every quantum homomorphism selects
  only defined tuples).  These quantify over all finite-dimensional
  quantum homomorphisms and are undecidable in general, so they are
  handled through certificates: a positive certificate cites a proved
  closure property of the target (or the tree shape of the gadget), a
  negative one carries an explicit refuting candidate.

Certificate kinds: classical-exact (decided by exhaustive search),
tree-backed, theorem-backed, witness-refuted.  None means inconclusive.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Optional, Sequence
import itertools
import warnings

from . import homsearch, qhom
from .structures import (FormatError, GadgetSpec, Label, Structure,
                         _parse_blocks, compose_homs, direct_power, is_tree,
                         render_label, render_structure)

POWER_CAP = 10_000   # largest power-structure domain we will build or search


@dataclass(frozen=True)
class CommGadget:
    """A structure with two distinguished elements u, v."""

    structure: Structure
    u: Label
    v: Label

    def __post_init__(self):
        if self.u == self.v:
            raise ValueError("distinguished elements must be distinct")
        self.structure.index(self.u)
        self.structure.index(self.v)

    def as_spec(self) -> GadgetSpec:
        return GadgetSpec(self.structure, (self.u, self.v))


@dataclass(frozen=True)
class GeneratorSet:
    """Candidate generating pairs for A^2 under the polymorphisms of A."""

    pairs: tuple[tuple[Label, Label], ...]

    def __post_init__(self):
        if not self.pairs:
            raise ValueError("need at least one pair")


@dataclass(frozen=True)
class Certificate:
    kind: str
    tag: str
    detail: tuple = ()

    KINDS = ("classical-exact", "tree-backed", "theorem-backed", "witness-refuted")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ValueError(f"unknown certificate kind {self.kind!r}")

    @property
    def positive(self) -> bool:
        return self.kind != "witness-refuted"

    def as_dict(self) -> dict:
        return {"kind": self.kind, "tag": self.tag, "detail": list(self.detail)}


class CertificateStore:
    """Certificates accumulated per (gadget, target, question) key.

    Recording is monotone: a witness-refuted entry is permanent and is
    never replaced, since an explicit counterexample cannot be undone
    by later inconclusive or positive runs.
    """

    def __init__(self):
        self._entries: dict = {}

    def get(self, key) -> Optional[Certificate]:
        return self._entries.get(key)

    def record(self, key, cert: Optional[Certificate]) -> Optional[Certificate]:
        old = self._entries.get(key)
        if old is not None and old.kind == "witness-refuted":
            return old
        if cert is None:
            return old
        self._entries[key] = cert
        return cert

    def __len__(self):
        return len(self._entries)


# ---------------------------------------------------------------------------
# defined relations by pinned search
# ---------------------------------------------------------------------------

@lru_cache(maxsize=128)
def _ext_table(G: Structure, dist: tuple, A: Structure) -> dict:
    """For every tuple t over A: does a homomorphism G -> A pin the
    distinguished elements to t?  One search per orbit of tuples under
    the target's automorphisms; hits are transported by composing the
    found homomorphism with the automorphism and re-validated."""
    r = len(dist)
    if A.size ** r > POWER_CAP:
        raise ValueError(f"extension table of size {A.size}^{r} exceeds {POWER_CAP}")
    autos = homsearch.automorphisms(A)
    table: dict = {}
    for t in itertools.product(range(A.size), repeat=r):
        if t in table:
            continue
        pins = {dist[k]: A.domain[t[k]] for k in range(r)}
        h = homsearch.find_any(G, A, pins)
        if h is None:
            for s in autos:
                table.setdefault(tuple(s.image[x] for x in t), False)
        else:
            for s in autos:
                t2 = tuple(s.image[x] for x in t)
                if t2 in table:
                    continue
                moved = compose_homs(s, h)
                if not moved.is_valid():
                    raise AssertionError("automorphism transport broke a homomorphism")
                table[t2] = True
    return table


def defined_relation(gadget: GadgetSpec, A: Structure) -> frozenset:
    """Label tuples selected by the gadget over A."""
    table = _ext_table(gadget.structure, tuple(gadget.distinguished), A)
    return frozenset(tuple(A.domain[i] for i in t)
                     for t, hit in table.items() if hit)


def check_c1(gadget: CommGadget, A: Structure) -> bool:
    """Does every pair over A extend to a classical homomorphism with
    u, v pinned?  Exact: failing for some pair rules the gadget out in
    dimension 1, and holding for all pairs extends any commuting
    measurement pair by direct sums."""
    table = _ext_table(gadget.structure, (gadget.u, gadget.v), A)
    return all(table.values())


def check_q1(gadget: GadgetSpec, A: Structure, S: Iterable[tuple]) -> bool:
    """Does the gadget define exactly the relation S over A?"""
    want = frozenset(tuple(t) for t in S)
    return defined_relation(gadget, A) == want


def check_generators(A: Structure, gens: GeneratorSet):
    """Do the pairs generate A^2 under the polymorphisms of A?

    Returns (ok, witnesses) where witnesses maps each (c, d) in A^2 to
    the realizing polymorphism: ("projection", i) when pair i is
    literally (c, d), else a homomorphism from the n-th power pinned at
    the two generator tuples, else None.  ok means no None entries.
    """
    n = len(gens.pairs)
    pos: dict = {}
    for i, (a, b) in enumerate(gens.pairs, 1):
        pos.setdefault((A.domain[A.index(a)], A.domain[A.index(b)]), i)
    all_pairs = [(c, d) for c in A.domain for d in A.domain]
    witnesses: dict = {p: ("projection", pos[p]) for p in all_pairs if p in pos}
    if len(witnesses) < len(all_pairs):
        if A.size ** n > POWER_CAP:
            raise ValueError(
                f"generator check needs the power {A.name}^{n}, which exceeds "
                f"the {POWER_CAP}-vertex cap")
        P = direct_power(A, n)
        u = tuple(a for a, _ in gens.pairs)
        v = tuple(b for _, b in gens.pairs)
        for c, d in all_pairs:
            if (c, d) in witnesses:
                continue
            if u == v:
                # equal generator tuples can only ever reach the diagonal
                witnesses[(c, d)] = (homsearch.find_any(P, A, {u: c})
                                     if c == d else None)
            else:
                witnesses[(c, d)] = homsearch.find_any(P, A, {u: c, v: d})
    ok = all(w is not None for w in witnesses.values())
    return ok, witnesses


def build_power_comm_gadget(A: Structure, gens: GeneratorSet) -> CommGadget:
    """The n-th power of A with the generator tuples distinguished.
    Fails if the power would exceed the size cap or the pairs do not
    generate A^2."""
    n = len(gens.pairs)
    if A.size ** n > POWER_CAP:
        raise ValueError(
            f"power gadget would have {A.size}^{n} vertices; cap is {POWER_CAP}")
    u = tuple(a for a, _ in gens.pairs)
    v = tuple(b for _, b in gens.pairs)
    for lab in u + v:
        A.index(lab)
    if u == v:
        raise ValueError("generator pairs give equal distinguished tuples")
    ok, _ = check_generators(A, gens)
    if not ok:
        raise ValueError("pairs do not generate A^2 under the polymorphisms")
    return CommGadget(direct_power(A, n), u, v)


# ---------------------------------------------------------------------------
# closure properties of targets
# ---------------------------------------------------------------------------

def _degree_profile(A: Structure):
    """(symmetric, loopless, neighbour sets) for a single binary symbol,
    else None."""
    syms = A.signature.symbols()
    if len(syms) != 1 or A.signature.arity(syms[0]) != 2:
        return None
    edges = set(A.rel(syms[0]))
    if any(i == j for i, j in edges):
        return None
    if any((j, i) not in edges for i, j in edges):
        return None
    neigh = [set() for _ in range(A.size)]
    for i, j in edges:
        neigh[i].add(j)
    return neigh


def is_clique_structure(A: Structure) -> bool:
    neigh = _degree_profile(A)
    return (neigh is not None and A.size >= 2
            and all(len(s) == A.size - 1 for s in neigh))


def is_odd_cycle_structure(A: Structure) -> bool:
    neigh = _degree_profile(A)
    if neigh is None or A.size < 3 or A.size % 2 == 0:
        return False
    if not all(len(s) == 2 for s in neigh):
        return False
    from .structures import is_connected
    return is_connected(A)


def closure_flags(A: Structure) -> frozenset:
    """Published closure properties this package recognizes.

    "oracular-closure": every quantum polymorphism of A decomposes into
    classical polymorphisms.  Recognized for cliques of size >= 3, odd
    cycles, and Boolean structures with some relation not preserved by
    the majority operation.
    "nonoracular-closure": the same for candidates only required to
    satisfy the product condition.  Recognized for odd cycles and
    non-majority Boolean structures (not for cliques).
    """
    flags = set()
    if is_clique_structure(A) and A.size >= 3:
        flags.add("clique")
        flags.add("oracular-closure")
    if is_odd_cycle_structure(A):
        flags.add("odd-cycle")
        flags.add("oracular-closure")
        flags.add("nonoracular-closure")
    if _boolean_no_majority(A):
        flags.add("boolean-no-majority")
        flags.add("oracular-closure")
        flags.add("nonoracular-closure")
    return frozenset(flags)


def _boolean_no_majority(A: Structure) -> bool:
    """Domain {0, 1} and some relation is not majority-preserved."""
    if tuple(A.domain) != (0, 1):
        return False
    from . import boolean
    for sym in A.signature.symbols():
        rel = boolean.relation_of(A, sym)
        ok, _ = boolean.majority_preserves(rel)
        if not ok:
            return True
    return False


def _is_power_of(G: Structure, A: Structure) -> Optional[int]:
    """The exponent n with G == A^n (same tuple labels), or None."""
    if G.size == A.size and G == A:
        return 1
    n = 1
    size = A.size
    while size < G.size:
        size *= A.size
        n += 1
    if size != G.size or size > POWER_CAP:
        return None
    return n if direct_power(A, n) == G else None


# ---------------------------------------------------------------------------
# quantum-side certificates
# ---------------------------------------------------------------------------

def _usable_candidates(gadget_structure: Structure, A: Structure, mode: str,
                       candidates: Sequence[qhom.QHomCandidate]):
    """Verified candidates matching the gadget, target, and mode.  A
    non-oracular candidate cannot refute an oracular claim, so it is
    skipped there; unverified candidates are an error."""
    out = []
    for cand in candidates:
        if cand.source != gadget_structure or cand.target != A:
            raise ValueError("candidate does not match the gadget and target")
        if mode == "oracular" and cand.mode != "oracular":
            continue
        if not qhom.verify(cand).verdict:
            raise ValueError("refutation candidates must verify")
        out.append(cand)
    return out


def _noncommuting_witness(cand: qhom.QHomCandidate, dist: Sequence[Label]):
    """First noncommuting outcome pair over two distinguished elements."""
    from . import qlinalg
    A = cand.target
    for i, j in itertools.combinations(range(len(dist)), 2):
        u, v = dist[i], dist[j]
        for a in A.domain:
            for b in A.domain:
                c = qlinalg.commutator(cand.qf.mat(u, a), cand.qf.mat(v, b))
                if not c.is_zero():
                    return ((u, a), (v, b))
    return None


def _selection_witness(cand: qhom.QHomCandidate, dist: Sequence[Label],
                       want: frozenset):
    """First tuple outside `want` with a nonzero projector product along
    the distinguished elements."""
    A = cand.target
    for bt in itertools.product(A.domain, repeat=len(dist)):
        if bt in want:
            continue
        prod = cand.qf.mat(dist[0], bt[0])
        for k in range(1, len(dist)):
            if prod.is_zero():
                break
            prod = prod @ cand.qf.mat(dist[k], bt[k])
        if not prod.is_zero():
            return (tuple(dist), bt)
    return None


def check_c2(gadget: CommGadget, A: Structure, mode: str = "oracular",
             candidates: Sequence[qhom.QHomCandidate] = (),
             store: Optional[CertificateStore] = None) -> Optional[Certificate]:
    """Certificate for: the distinguished projectors commute in every
    quantum homomorphism of the gadget into A.

    Positive route: the gadget is a power of A and A has the closure
    property matching the mode (every quantum homomorphism out of a
    power is a polymorphism, and closure makes polymorphisms block
    diagonal, hence commuting).  Negative route: a verified candidate
    with a nonzero commutator at (u, v).  Anything else is inconclusive
    (None), with a warning: the condition quantifies over all finite
    dimensions and is not decidable here.
    """
    if mode not in qhom.MODES:
        raise ValueError(f"mode must be one of {qhom.MODES}")
    key = ("c2", gadget.structure, gadget.u, gadget.v, A, mode)
    if store is not None:
        old = store.get(key)
        if old is not None:
            return old
    cert = _c2_uncached(gadget, A, mode, candidates)
    if store is not None:
        return store.record(key, cert)
    if cert is None:
        warnings.warn(f"c2 for gadget over {A.name} is inconclusive", stacklevel=2)
    return cert


def _c2_uncached(gadget, A, mode, candidates):
    dist = (gadget.u, gadget.v)
    for cand in _usable_candidates(gadget.structure, A, mode, candidates):
        pair = _noncommuting_witness(cand, dist)
        if pair is not None:
            return Certificate("witness-refuted", "noncommuting-candidate",
                               detail=(pair,))
    return _power_closure_cert(gadget.structure, A, mode)


def _power_closure_cert(G: Structure, A: Structure, mode: str):
    flags = closure_flags(A)
    needed = "oracular-closure" if mode == "oracular" else "nonoracular-closure"
    if needed in flags and _is_power_of(G, A) is not None:
        tag = next(f for f in ("odd-cycle", "clique", "boolean-no-majority")
                   if f in flags)
        return Certificate("theorem-backed", tag, detail=(f"power-of-{A.name}",))
    return None


def check_q2(gadget: GadgetSpec, A: Structure, S: Iterable[tuple],
             mode: str = "nonoracular",
             candidates: Sequence[qhom.QHomCandidate] = (),
             store: Optional[CertificateStore] = None) -> Optional[Certificate]:
    """Certificate for: every quantum homomorphism of the gadget into A
    selects only tuples of S at the distinguished elements (nonzero
    projector products never land outside S; in oracular mode the
    distinguished projectors must moreover commute pairwise).

    Refutations are exact when classical homomorphisms already select
    outside S (dimension-1 candidates), and otherwise come from supplied
    verified candidates.  Positive routes: a two-element tree gadget in
    non-oracular mode; a power of A under a matching closure flag; or a
    gadget built by build_qdef whose commutativity part certifies.
    """
    if mode not in qhom.MODES:
        raise ValueError(f"mode must be one of {qhom.MODES}")
    want = frozenset(tuple(t) for t in S)
    key = ("q2", gadget.structure, tuple(gadget.distinguished), A, want, mode)
    if store is not None:
        old = store.get(key)
        if old is not None:
            return old
    cert = _q2_uncached(gadget, A, want, mode, candidates, store)
    if store is not None:
        return store.record(key, cert)
    if cert is None:
        warnings.warn(f"q2 for gadget over {A.name} is inconclusive", stacklevel=2)
    return cert


def _q2_uncached(gadget, A, want, mode, candidates, store):
    dist = tuple(gadget.distinguished)
    extra = sorted(defined_relation(gadget, A) - want)
    if extra:
        # a classical homomorphism already selects outside S
        return Certificate("witness-refuted", "classical-selection-outside",
                           detail=(extra[0],))
    for cand in _usable_candidates(gadget.structure, A, mode, candidates):
        viol = _selection_witness(cand, dist, want)
        if viol is not None:
            return Certificate("witness-refuted", "undefined-tuple-selected",
                               detail=(viol,))
        if mode == "oracular":
            pair = _noncommuting_witness(cand, dist)
            if pair is not None:
                return Certificate("witness-refuted", "noncommuting-candidate",
                                   detail=(pair,))
    if mode == "nonoracular" and gadget.arity == 2 and is_tree(gadget.structure):
        return Certificate("tree-backed", "tree-gadget")
    cert = _power_closure_cert(gadget.structure, A, mode)
    if cert is not None:
        return cert
    prov = _QDEF_PROVENANCE.get(gadget.structure)
    if prov is not None and prov.target == A and prov.defined <= want:
        comm_cert = check_c2(prov.comm, A, mode=mode, candidates=(), store=store)
        if comm_cert is not None and comm_cert.positive:
            return Certificate("theorem-backed", "comm-gadget-substitution",
                               detail=(comm_cert.tag,))
    return None


def check_nonoracular_variants(kind: str, gadget, A: Structure,
                               S: Optional[Iterable[tuple]] = None,
                               candidates: Sequence[qhom.QHomCandidate] = (),
                               store: Optional[CertificateStore] = None):
    """The c1/c2/q1/q2 checks with quantum sides run in non-oracular
    mode.  The classical halves (c1, q1) do not depend on the mode."""
    if kind == "c1":
        return check_c1(gadget, A)
    if kind == "c2":
        return check_c2(gadget, A, mode="nonoracular",
                        candidates=candidates, store=store)
    if kind == "q1":
        return check_q1(gadget, A, S)
    if kind == "q2":
        return check_q2(gadget, A, S, mode="nonoracular",
                        candidates=candidates, store=store)
    raise ValueError(f"unknown kind {kind!r}")


# ---------------------------------------------------------------------------
# gluing
# ---------------------------------------------------------------------------

def flat_label(lab: Label) -> str:
    """Labels flattened for embedding in composite vertex names."""
    return (render_label(lab).replace("(", "").replace(")", "")
            .replace(",", "."))


@dataclass(frozen=True)
class _QDefOrigin:
    base: GadgetSpec
    comm: CommGadget
    target: Structure
    defined: frozenset


# glued structures remember their parts so certificates can propagate
_QDEF_PROVENANCE: dict = {}


def build_qdef(gadget: GadgetSpec, comm: CommGadget,
               A: Optional[Structure] = None,
               S: Optional[Iterable[tuple]] = None) -> GadgetSpec:
    """Glue one commutativity-gadget copy onto every unordered pair of
    distinct gadget vertices (u to the smaller, v to the larger, in
    domain order).  The result has |G| + C(|G|, 2) * (|H| - 2) vertices.

    When the target A (and optionally the intended relation S) is given,
    the classical-gadget precheck runs first: the glued structure must
    define over A the same relation as the original (and exactly S, if
    given).  Successful prechecked builds are remembered so check_q2 can
    later certify the output through the commutativity part.
    """
    G = gadget.structure
    H = comm.structure
    if set(G.signature.arities) != set(H.signature.arities):
        raise ValueError("gadget and commutativity gadget signatures disagree")
    domain = list(G.domain)
    rel_map = {sym: [list(t) for t in G.rel_labels(sym)]
               for sym in G.signature.symbols()}
    internals = [w for w in H.domain if w != comm.u and w != comm.v]
    for i, j in itertools.combinations(range(G.size), 2):
        x, y = G.domain[i], G.domain[j]
        ren = {comm.u: x, comm.v: y}
        for w in internals:
            fresh = f"q:{flat_label(x)}-{flat_label(y)}:{flat_label(w)}"
            ren[w] = fresh
            domain.append(fresh)
        for sym in H.signature.symbols():
            for t in H.rel_labels(sym):
                rel_map.setdefault(sym, []).append([ren[w] for w in t])
    sig = {sym: G.signature.arity(sym) for sym in G.signature.symbols()}
    for sym in H.signature.symbols():
        sig.setdefault(sym, H.signature.arity(sym))
    from .structures import build
    out = GadgetSpec(build(f"{G.name}+comm", domain, sig, rel_map),
                     gadget.distinguished)
    if A is not None:
        want = (frozenset(tuple(t) for t in S) if S is not None
                else defined_relation(gadget, A))
        if defined_relation(gadget, A) != want:
            raise ValueError("base gadget does not define the stated relation")
        if defined_relation(out, A) != want:
            raise ValueError("gluing changed the defined relation")
        _QDEF_PROVENANCE[out.structure] = _QDefOrigin(gadget, comm, A, want)
    return out


# ---------------------------------------------------------------------------
# text format
# ---------------------------------------------------------------------------

def parse_gadget(text: str):
    """Parse a gadget file: structure lines plus a `distinguished` line
    and an optional `certificate <kind> <tag>` stanza.

    Returns (GadgetSpec, Certificate or None).
    """
    st, extras = _parse_blocks(text, allow_extras=True)
    dist = extras.get("distinguished")
    if not dist:
        raise FormatError("gadget file needs a 'distinguished' line")
    try:
        spec = GadgetSpec(st, tuple(dist))
    except (ValueError, KeyError) as e:
        raise FormatError(str(e)) from None
    cert = None
    if "certificate" in extras:
        toks = extras["certificate"]
        if len(toks) < 2:
            raise FormatError("certificate stanza needs a kind and a tag")
        try:
            cert = Certificate(toks[0], toks[1], detail=tuple(toks[2:]))
        except ValueError as e:
            raise FormatError(str(e)) from None
    return spec, cert


def render_gadget(gadget: GadgetSpec, cert: Optional[Certificate] = None) -> str:
    extras: dict = {"distinguished": list(gadget.distinguished)}
    if cert is not None:
        extras["certificate"] = [cert.kind, cert.tag] + [str(x) for x in cert.detail]
    return render_structure(gadget.structure, extras)


def read_gadget(path):
    with open(path, "r", encoding="utf-8") as fh:
        return parse_gadget(fh.read())


def write_gadget(gadget: GadgetSpec, path, cert: Optional[Certificate] = None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(render_gadget(gadget, cert))
