"""Finite relational structures: construction, products, graph views, text IO.

Conventions used throughout the package:

* A structure is immutable: a named domain of labels plus one tuple set
  per signature symbol.  Tuples are stored as sorted 0-based index
  tuples in domain order; the API surface speaks labels.
* Labels are ints, strings, or nested tuples of labels (powers and
  products produce tuple labels).  String labels must survive the text
  format, so they may not contain whitespace, parens, commas or '#',
  and may not look like ints.
* "Digraph" means a structure with a single binary symbol.  Undirected
  graphs are encoded as symmetric loopless digraphs: both orientations
  of every edge are present.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Union
import itertools
import math

Label = Union[int, str, tuple]

CORE_MAX = 8  # exhaustive retract search is exponential in the domain size


class FormatError(ValueError):
    """Raised when structure/gadget/qfun text cannot be parsed."""


# ---------------------------------------------------------------------------
# labels and tokens
# ---------------------------------------------------------------------------

_FORBIDDEN = set("()#, \t\n\r")


def _check_str_label(s: str) -> None:
    if not s or any(c in _FORBIDDEN for c in s):
        raise ValueError(f"bad string label {s!r}")
    try:
        int(s)
    except ValueError:
        return
    raise ValueError(f"string label {s!r} would re-parse as an int")


def render_label(lab: Label) -> str:
    """Text form of a label; inverse of parse_label."""
    if isinstance(lab, bool):
        raise ValueError("bool labels are not supported")
    if isinstance(lab, int):
        return str(lab)
    if isinstance(lab, str):
        _check_str_label(lab)
        return lab
    if isinstance(lab, tuple):
        return "(" + ",".join(render_label(x) for x in lab) + ")"
    raise ValueError(f"unsupported label type {type(lab).__name__}")


def parse_label(token: str) -> Label:
    token = token.strip()
    if not token:
        raise FormatError("empty label token")
    if token.startswith("("):
        if not token.endswith(")"):
            raise FormatError(f"unbalanced parens in {token!r}")
        inner = token[1:-1]
        parts = []
        depth = 0
        cur = []
        for c in inner:
            if c == "(":
                depth += 1
            elif c == ")":
                depth -= 1
                if depth < 0:
                    raise FormatError(f"unbalanced parens in {token!r}")
            if c == "," and depth == 0:
                parts.append("".join(cur))
                cur = []
            else:
                cur.append(c)
        if depth:
            raise FormatError(f"unbalanced parens in {token!r}")
        if cur or parts:
            parts.append("".join(cur))
        return tuple(parse_label(p) for p in parts)
    try:
        return int(token)
    except ValueError:
        pass
    _check_str_label(token)
    return token


def tokenize_line(line: str) -> list[str]:
    """Split a line into whitespace-separated tokens, keeping parens balanced."""
    out: list[str] = []
    cur: list[str] = []
    depth = 0
    for c in line:
        if c == "#" and depth == 0:
            break
        if c == "(":
            depth += 1
        elif c == ")":
            depth -= 1
            if depth < 0:
                raise FormatError(f"unbalanced parens in line {line!r}")
        if c.isspace() and depth == 0:
            if cur:
                out.append("".join(cur))
                cur = []
        else:
            cur.append(c)
    if depth:
        raise FormatError(f"unbalanced parens in line {line!r}")
    if cur:
        out.append("".join(cur))
    return out


# ---------------------------------------------------------------------------
# signatures and structures
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Signature:
    """Relational signature: symbol names with arities, canonically
    sorted by symbol so equal content compares equal."""

    arities: tuple[tuple[str, int], ...]

    def __post_init__(self):
        seen = set()
        for sym, ar in self.arities:
            if sym in seen:
                raise ValueError(f"duplicate symbol {sym!r}")
            if not isinstance(ar, int) or ar < 1:
                raise ValueError(f"arity of {sym!r} must be a positive int")
            seen.add(sym)
        object.__setattr__(self, "arities", tuple(sorted(self.arities)))

    @staticmethod
    def of(spec: Union["Signature", Mapping[str, int], Iterable[tuple[str, int]]]) -> "Signature":
        if isinstance(spec, Signature):
            return spec
        if isinstance(spec, Mapping):
            return Signature(tuple(spec.items()))
        return Signature(tuple(spec))

    def arity(self, symbol: str) -> int:
        for sym, ar in self.arities:
            if sym == symbol:
                return ar
        raise KeyError(symbol)

    def symbols(self) -> tuple[str, ...]:
        return tuple(sym for sym, _ in self.arities)

    def __contains__(self, symbol: str) -> bool:
        return any(sym == symbol for sym, _ in self.arities)

    def __len__(self) -> int:
        return len(self.arities)


@dataclass(frozen=True)
class Structure:
    """Immutable finite relational structure.

    relations is aligned with signature order: one (symbol, tuples)
    entry per symbol, each tuples entry a sorted tuple of index tuples.
    """

    name: str
    domain: tuple[Label, ...]
    signature: Signature
    relations: tuple[tuple[str, tuple[tuple[int, ...], ...]], ...]
    _index: dict = field(default=None, compare=False, repr=False)
    _relsets: dict = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if len(set(self.domain)) != len(self.domain):
            raise ValueError("domain labels must be unique")
        if not self.domain:
            raise ValueError("domain must be nonempty")
        for lab in self.domain:
            render_label(lab)  # validates
        if tuple(sym for sym, _ in self.relations) != self.signature.symbols():
            raise ValueError("relations must be aligned with signature order")
        n = len(self.domain)
        canon = []
        for sym, tuples in self.relations:
            ar = self.signature.arity(sym)
            seen = set()
            for t in tuples:
                if len(t) != ar:
                    raise ValueError(f"tuple {t} has wrong arity for {sym!r}")
                if any(not isinstance(i, int) or not 0 <= i < n for i in t):
                    raise ValueError(f"tuple {t} of {sym!r} out of range")
                seen.add(tuple(t))
            canon.append((sym, tuple(sorted(seen))))
        object.__setattr__(self, "relations", tuple(canon))
        object.__setattr__(self, "_index", {lab: i for i, lab in enumerate(self.domain)})
        object.__setattr__(self, "_relsets",
                           {sym: frozenset(ts) for sym, ts in self.relations})

    # -- basic access -------------------------------------------------------

    @property
    def size(self) -> int:
        return len(self.domain)

    def index(self, label: Label) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise KeyError(f"{label!r} is not in the domain of {self.name}") from None

    def rel(self, symbol: str) -> tuple[tuple[int, ...], ...]:
        """Index tuples of a relation, sorted."""
        for sym, ts in self.relations:
            if sym == symbol:
                return ts
        raise KeyError(symbol)

    def rel_labels(self, symbol: str) -> tuple[tuple[Label, ...], ...]:
        return tuple(tuple(self.domain[i] for i in t) for t in self.rel(symbol))

    def has_tuple(self, symbol: str, idx_tuple: tuple[int, ...]) -> bool:
        return idx_tuple in self._relsets[symbol]

    def total_tuples(self) -> int:
        return sum(len(ts) for _, ts in self.relations)


def build(name: str,
          domain: Iterable[Label],
          signature: Union[Signature, Mapping[str, int], Iterable[tuple[str, int]]],
          relations: Mapping[str, Iterable[tuple]] = (),
          by_index: bool = False) -> Structure:
    """Construct a structure from label tuples (or index tuples if by_index)."""
    dom = tuple(domain)
    sig = Signature.of(signature)
    rel_map = dict(relations) if relations else {}
    unknown = set(rel_map) - set(sig.symbols())
    if unknown:
        raise ValueError(f"relations for unknown symbols: {sorted(unknown)}")
    idx = {lab: i for i, lab in enumerate(dom)}
    rels = []
    for sym in sig.symbols():
        tuples = []
        for t in rel_map.get(sym, ()):
            if by_index:
                tuples.append(tuple(t))
            else:
                try:
                    tuples.append(tuple(idx[x] for x in t))
                except KeyError as exc:
                    raise FormatError(
                        f"unknown label {exc.args[0]!r} in relation {sym!r}") from None
        rels.append((sym, tuple(tuples)))
    return Structure(name, dom, sig, tuple(rels))


# ---------------------------------------------------------------------------
# classical homomorphisms
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ClassicalHom:
    """A map source -> target given as target indices in source domain order."""

    source: Structure
    target: Structure
    image: tuple[int, ...]

    def __post_init__(self):
        if len(self.image) != self.source.size:
            raise ValueError("image length must match the source domain")
        m = self.target.size
        if any(not 0 <= v < m for v in self.image):
            raise ValueError("image values out of target range")

    def __call__(self, label: Label) -> Label:
        return self.target.domain[self.image[self.source.index(label)]]

    def as_dict(self) -> dict:
        return {lab: self.target.domain[self.image[i]]
                for i, lab in enumerate(self.source.domain)}

    def is_valid(self) -> bool:
        """Every source tuple must land in the target relation."""
        for sym, tuples in self.source.relations:
            if sym not in self.target.signature:
                return False
            if self.source.signature.arity(sym) != self.target.signature.arity(sym):
                return False
            for t in tuples:
                if not self.target.has_tuple(sym, tuple(self.image[i] for i in t)):
                    return False
        return True

    def is_bijective(self) -> bool:
        return (self.source.size == self.target.size
                and len(set(self.image)) == self.source.size)


def classical_hom(source: Structure, target: Structure,
                  mapping: Mapping[Label, Label]) -> ClassicalHom:
    """Build and validate a homomorphism from a label mapping."""
    image = tuple(target.index(mapping[lab]) for lab in source.domain)
    h = ClassicalHom(source, target, image)
    if not h.is_valid():
        raise ValueError("mapping is not a homomorphism")
    return h


def compose_homs(outer: ClassicalHom, inner: ClassicalHom) -> ClassicalHom:
    if inner.target is not outer.source and inner.target != outer.source:
        raise ValueError("homs do not compose")
    return ClassicalHom(inner.source, outer.target,
                        tuple(outer.image[v] for v in inner.image))


# ---------------------------------------------------------------------------
# products and powers
# ---------------------------------------------------------------------------

def direct_power(A: Structure, n: int) -> Structure:
    """n-th direct power.  Domain = n-tuples of labels in lex order; a tuple
    of power elements satisfies R iff every coordinate projection does."""
    if n < 1:
        raise ValueError("power exponent must be >= 1")
    base = A.domain
    dom = tuple(itertools.product(base, repeat=n))
    elems = list(itertools.product(range(A.size), repeat=n))
    rels = []
    for sym, _ in A.relations:
        r = A.signature.arity(sym)
        allowed = A._relsets[sym]
        tuples = []
        # a power tuple is r elements of A^n; check the n rows
        for combo in itertools.product(range(len(elems)), repeat=r):
            rows = [elems[c] for c in combo]
            if all(tuple(rows[j][k] for j in range(r)) in allowed for k in range(n)):
                tuples.append(combo)
        rels.append((sym, tuple(tuples)))
    return Structure(f"{A.name}^{n}", dom, A.signature, tuple(rels))


def product(A: Structure, B: Structure) -> Structure:
    """Categorical product over a shared signature."""
    if A.signature != B.signature:
        raise ValueError("product requires equal signatures")
    dom = tuple(itertools.product(A.domain, B.domain))
    nb = B.size
    rels = []
    for sym, _ in A.relations:
        ta = A.rel(sym)
        tb = B.rel(sym)
        tuples = []
        for u in ta:
            for v in tb:
                tuples.append(tuple(u[j] * nb + v[j] for j in range(len(u))))
        rels.append((sym, tuple(tuples)))
    return Structure(f"{A.name}x{B.name}", dom, A.signature, tuple(rels))


# ---------------------------------------------------------------------------
# graph views
# ---------------------------------------------------------------------------

def gaifman(X: Structure) -> Structure:
    """Gaifman graph: symmetric loopless digraph connecting distinct
    elements that occur together in some tuple."""
    edges = set()
    for _, tuples in X.relations:
        for t in tuples:
            for i in t:
                for j in t:
                    if i != j:
                        edges.add((i, j))
    return Structure(f"gaifman({X.name})", X.domain,
                     Signature.of({"E": 2}), (("E", tuple(sorted(edges))),))


def undirected_reduct(X: Structure) -> Structure:
    """Forget orientation of a digraph: symmetric closure, one symbol."""
    syms = X.signature.symbols()
    if len(syms) != 1 or X.signature.arity(syms[0]) != 2:
        raise ValueError("undirected_reduct expects a single binary symbol")
    edges = set()
    for (i, j) in X.rel(syms[0]):
        edges.add((i, j))
        edges.add((j, i))
    return Structure(f"{X.name}u", X.domain,
                     Signature.of({syms[0]: 2}), ((syms[0], tuple(sorted(edges))),))


def _adjacency(X: Structure) -> list[list[int]]:
    g = gaifman(X)
    adj: list[list[int]] = [[] for _ in range(X.size)]
    for (i, j) in g.rel("E"):
        adj[i].append(j)
    return adj


def _bfs(adj: list[list[int]], start: int) -> list[float]:
    dist: list[float] = [math.inf] * len(adj)
    dist[start] = 0
    q = deque([start])
    while q:
        u = q.popleft()
        for v in adj[u]:
            if dist[v] == math.inf:
                dist[v] = dist[u] + 1
                q.append(v)
    return dist


def distance(X: Structure, x: Label, y: Label):
    """BFS distance in the Gaifman graph; math.inf when disconnected."""
    adj = _adjacency(X)
    d = _bfs(adj, X.index(x))[X.index(y)]
    return d if d == math.inf else int(d)


def diameter(X: Structure):
    """Max Gaifman distance over all pairs; math.inf when disconnected."""
    adj = _adjacency(X)
    best = 0
    for s in range(X.size):
        d = max(_bfs(adj, s))
        if d == math.inf:
            return math.inf
        best = max(best, int(d))
    return best


def is_connected(X: Structure) -> bool:
    return diameter(X) != math.inf


# ---------------------------------------------------------------------------
# homomorphism search (delegates to the solver module)
# ---------------------------------------------------------------------------

def hom_search(X: Structure, A: Structure,
               pins: Optional[Mapping[Label, Label]] = None) -> Optional[ClassicalHom]:
    """Lexicographically least homomorphism X -> A, or None.

    Least under source domain order with target values compared by
    domain index.  pins force source label -> target label.
    """
    from . import homsearch
    return homsearch.lex_first(X, A, pins)


def hom_enumerate(X: Structure, A: Structure,
                  pins: Optional[Mapping[Label, Label]] = None) -> list[ClassicalHom]:
    """All homomorphisms X -> A in lexicographic order."""
    from . import homsearch
    return list(homsearch.lex_all(X, A, pins))


def hom_exists(X: Structure, A: Structure,
               pins: Optional[Mapping[Label, Label]] = None) -> bool:
    from . import homsearch
    return homsearch.find_any(X, A, pins) is not None


def polymorphisms(A: Structure, n: int) -> list[ClassicalHom]:
    """All homomorphisms A^n -> A (the n-ary polymorphisms)."""
    return hom_enumerate(direct_power(A, n), A)


# ---------------------------------------------------------------------------
# cores
# ---------------------------------------------------------------------------

def induced(X: Structure, keep: Iterable[Label], name: Optional[str] = None) -> Structure:
    """Induced substructure on the given labels (kept in X's domain order)."""
    keep_set = {X.index(lab) for lab in keep}
    order = [i for i in range(X.size) if i in keep_set]
    remap = {old: new for new, old in enumerate(order)}
    dom = tuple(X.domain[i] for i in order)
    rels = []
    for sym, tuples in X.relations:
        kept = tuple(tuple(remap[i] for i in t) for t in tuples
                     if all(i in keep_set for i in t))
        rels.append((sym, kept))
    return Structure(name or f"{X.name}|{len(order)}", dom, X.signature, tuple(rels))


def core(X: Structure) -> tuple[Structure, ClassicalHom]:
    """Smallest retract of X, as (induced substructure, retraction).

    Exhaustive: scans vertex subsets by size then lexicographically, so
    the returned substructure sits on the lexicographically least
    minimal vertex set.  Limited to domains of size <= CORE_MAX.
    """
    n = X.size
    if n > CORE_MAX:
        raise ValueError(f"core search is limited to {CORE_MAX} elements, got {n}")
    for s in range(1, n):
        for subset in itertools.combinations(range(n), s):
            sub = induced(X, [X.domain[i] for i in subset])
            pins = {X.domain[i]: X.domain[i] for i in subset}
            r = hom_search(X, sub, pins)
            if r is not None:
                return sub, r
    return X, ClassicalHom(X, X, tuple(range(n)))


def is_core(X: Structure) -> bool:
    """True iff X has no proper retract (every endomorphism is injective
    on some copy); decided by quotient maps, so no size limit."""
    for i in range(X.size):
        for j in range(i + 1, X.size):
            if hom_exists(_quotient(X, i, j), X):
                return False
    return True


def _quotient(X: Structure, i: int, j: int) -> Structure:
    # identify j with i; relabel with fresh int labels to avoid clashes
    keep = [k for k in range(X.size) if k != j]
    remap = {old: new for new, old in enumerate(keep)}
    remap[j] = remap[i]
    rels = []
    for sym, tuples in X.relations:
        rels.append((sym, tuple(tuple(remap[v] for v in t) for t in tuples)))
    return Structure(f"{X.name}/~", tuple(range(len(keep))), X.signature, tuple(rels))


# ---------------------------------------------------------------------------
# expansions, trees, pp formulas
# ---------------------------------------------------------------------------

def with_relation(X: Structure, symbol: str, tuples: Iterable[tuple],
                  arity: Optional[int] = None, by_index: bool = False) -> Structure:
    """Expansion of X by one extra relation."""
    if symbol in X.signature:
        raise ValueError(f"symbol {symbol!r} already present")
    tlist = [tuple(t) for t in tuples]
    if arity is None:
        if not tlist:
            raise ValueError("arity required for an empty relation")
        arity = len(tlist[0])
    if by_index:
        idx_tuples = tlist
    else:
        idx_tuples = [tuple(X.index(x) for x in t) for t in tlist]
    sig = Signature(X.signature.arities + ((symbol, arity),))
    rels = tuple(sorted(X.relations + ((symbol, tuple(idx_tuples)),)))
    return Structure(f"{X.name}+{symbol}", X.domain, sig, rels)


def is_tree(X: Structure) -> bool:
    """Acyclic incidence multigraph.

    Each tuple occurrence is its own node joined to the elements it
    mentions, so a repeated element inside a tuple is a multi-edge
    (a cycle), and the same tuple under two symbols gives two nodes
    (also a cycle through any two shared elements).
    """
    parent = list(range(X.size))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for _, tuples in X.relations:
        for t in tuples:
            if len(set(t)) != len(t):
                return False
            roots = [find(i) for i in set(t)]
            if len(set(roots)) != len(roots):
                return False
            r0 = roots[0]
            for r in roots[1:]:
                parent[r] = r0
    return True


@dataclass(frozen=True)
class PPFormula:
    """Primitive positive formula: exists (bound) . AND of atoms.

    Atoms are (symbol, variable names); variables are the strings in
    free + bound.
    """

    free: tuple[str, ...]
    bound: tuple[str, ...]
    atoms: tuple[tuple[str, tuple[str, ...]], ...]

    def __post_init__(self):
        all_vars = self.free + self.bound
        if len(set(all_vars)) != len(all_vars):
            raise ValueError("variable names must be distinct")
        used = {v for _, vs in self.atoms for v in vs}
        if not used <= set(all_vars):
            raise ValueError("atom uses an undeclared variable")


@dataclass(frozen=True)
class GadgetSpec:
    """A structure with distinguished elements defining a relation by
    homomorphism images of the distinguished tuple."""

    structure: Structure
    distinguished: tuple[Label, ...]

    def __post_init__(self):
        if not self.distinguished:
            raise ValueError("need at least one distinguished element")
        if len(set(self.distinguished)) != len(self.distinguished):
            raise ValueError("distinguished elements must be distinct")
        for lab in self.distinguished:
            self.structure.index(lab)  # raises if absent

    @property
    def arity(self) -> int:
        return len(self.distinguished)


def pp_to_gadget(phi: PPFormula, signature, name: str = "pp") -> GadgetSpec:
    """Canonical structure of a pp formula; free variables distinguished.

    The defined relation of the gadget over any A equals the set of
    free-variable tuples satisfying phi in A.
    """
    sig = Signature.of(signature)
    rel_map: dict[str, list] = {sym: [] for sym in sig.symbols()}
    for sym, vs in phi.atoms:
        if sym not in sig:
            raise ValueError(f"atom symbol {sym!r} not in signature")
        if sig.arity(sym) != len(vs):
            raise ValueError(f"atom {sym!r}{vs} has wrong arity")
        rel_map[sym].append(vs)
    st = build(name, phi.free + phi.bound, sig, rel_map)
    return GadgetSpec(st, phi.free)


# ---------------------------------------------------------------------------
# text format
# ---------------------------------------------------------------------------

_KEYWORDS = {"structure", "domain", "relation", "distinguished", "certificate"}


def _parse_blocks(text: str, allow_extras: bool = False):
    """Parse the line format; returns (Structure, extras dict).

    extras collects `distinguished` label lists and `certificate`
    token lists when allow_extras is set (gadget files use both).
    """
    name = None
    domain: Optional[list] = None
    sig_pairs: list[tuple[str, int]] = []
    rel_map: dict[str, list] = {}
    current: Optional[str] = None
    extras: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        toks = tokenize_line(raw)
        if not toks:
            continue
        head = toks[0]
        if head == "structure":
            if name is not None:
                raise FormatError(f"line {lineno}: duplicate structure header")
            if len(toks) != 2:
                raise FormatError(f"line {lineno}: structure needs one name")
            name = toks[1]
        elif head == "domain":
            if domain is not None:
                raise FormatError(f"line {lineno}: duplicate domain")
            domain = [parse_label(t) for t in toks[1:]]
            current = None
        elif head == "relation":
            if len(toks) != 3:
                raise FormatError(f"line {lineno}: relation needs symbol and arity")
            sym = toks[1]
            try:
                ar = int(toks[2])
            except ValueError:
                raise FormatError(f"line {lineno}: bad arity {toks[2]!r}") from None
            sig_pairs.append((sym, ar))
            rel_map[sym] = []
            current = sym
        elif head == "distinguished":
            if not allow_extras:
                raise FormatError(f"line {lineno}: unexpected 'distinguished'")
            extras["distinguished"] = [parse_label(t) for t in toks[1:]]
            current = None
        elif head == "certificate":
            if not allow_extras:
                raise FormatError(f"line {lineno}: unexpected 'certificate'")
            extras["certificate"] = toks[1:]
            current = None
        elif head in _KEYWORDS:
            raise FormatError(f"line {lineno}: misplaced keyword {head!r}")
        else:
            if current is None:
                raise FormatError(f"line {lineno}: tuples outside a relation block")
            for t in toks:
                lab = parse_label(t)
                if not isinstance(lab, tuple):
                    raise FormatError(f"line {lineno}: expected a tuple, got {t!r}")
                rel_map[current].append(lab)
    if name is None:
        raise FormatError("missing 'structure' header")
    if domain is None:
        raise FormatError("missing 'domain' line")
    try:
        st = build(name, domain, Signature(tuple(sig_pairs)), rel_map)
    except (ValueError, KeyError) as e:
        raise FormatError(str(e)) from None
    return st, extras


def parse_structure(text: str) -> Structure:
    st, _ = _parse_blocks(text, allow_extras=False)
    return st


def render_structure(X: Structure, extras: Optional[dict] = None) -> str:
    """Serialize; parse_structure(render_structure(X)) matches X up to
    name sanitization (names are cosmetic and not part of any check)."""
    safe = "".join("_" if c in _FORBIDDEN else c for c in X.name) or "_"
    lines = [f"structure {safe}"]
    lines.append("domain " + " ".join(render_label(x) for x in X.domain))
    for sym, _ in X.relations:
        ar = X.signature.arity(sym)
        lines.append(f"relation {sym} {ar}")
        row: list[str] = []
        width = 0
        for t in X.rel_labels(sym):
            tok = render_label(tuple(t))
            if width and width + len(tok) + 1 > 76:
                lines.append("  " + " ".join(row))
                row, width = [], 0
            row.append(tok)
            width += len(tok) + 1
        if row:
            lines.append("  " + " ".join(row))
    if extras:
        if "distinguished" in extras:
            lines.append("distinguished "
                         + " ".join(render_label(x) for x in extras["distinguished"]))
        if "certificate" in extras:
            lines.append("certificate " + " ".join(extras["certificate"]))
    return "\n".join(lines) + "\n"


def read_structure(path) -> Structure:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_structure(fh.read())


def write_structure(X: Structure, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(render_structure(X))


# ---------------------------------------------------------------------------
# standard graphs
# ---------------------------------------------------------------------------

def clique(m: int) -> Structure:
    """K_m as a symmetric loopless digraph on 0..m-1."""
    if m < 1:
        raise ValueError("clique size must be >= 1")
    edges = [(i, j) for i in range(m) for j in range(m) if i != j]
    return build(f"K{m}", range(m), {"E": 2}, {"E": edges}, by_index=True)


def cycle(m: int) -> Structure:
    """C_m as a symmetric loopless digraph on 0..m-1."""
    if m < 3:
        raise ValueError("cycle length must be >= 3")
    edges = []
    for i in range(m):
        j = (i + 1) % m
        edges.append((i, j))
        edges.append((j, i))
    return build(f"C{m}", range(m), {"E": 2}, {"E": edges}, by_index=True)


def path_graph(length: int) -> Structure:
    """Path with `length` edges (length+1 vertices), symmetric digraph."""
    if length < 1:
        raise ValueError("path length must be >= 1")
    edges = []
    for i in range(length):
        edges.append((i, i + 1))
        edges.append((i + 1, i))
    return build(f"P{length}", range(length + 1), {"E": 2}, {"E": edges}, by_index=True)
