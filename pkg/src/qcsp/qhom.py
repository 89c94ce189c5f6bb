"""Verification of quantum homomorphism candidates.

A candidate assigns one projective measurement per source element,
outcomes indexed by target elements.  Two conditions are checked:

* QH1: for every relation tuple of the source and every non-tuple of
  the target (same symbol), the position-ordered product of the chosen
  projectors vanishes.
* QH2: projectors at source elements that share a tuple (Gaifman
  adjacency) commute, for all outcome pairs.

An "oracular" candidate must satisfy both; a "nonoracular" one only
QH1.  All checks are exact; a violation is a nonzero rational matrix.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional
import itertools
import math

from . import qlinalg
from .structures import (ClassicalHom, Label, Structure, direct_power, gaifman,
                         is_core, diameter)
from .qlinalg import QMat, QuantumFunction

MODES = ("oracular", "nonoracular")


@dataclass(frozen=True)
class QHomCandidate:
    source: Structure
    target: Structure
    qf: QuantumFunction
    mode: str

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")
        if set(self.qf.source_labels) != set(self.source.domain):
            raise ValueError("measurement labels disagree with the source domain")
        if set(self.qf.target_labels) != set(self.target.domain):
            raise ValueError("outcome labels disagree with the target domain")
        if set(self.source.signature.arities) != set(self.target.signature.arities):
            raise ValueError("source and target signatures disagree")


@dataclass(frozen=True)
class VerificationReport:
    verdict: bool
    mode: str
    qh1_violations: tuple
    qh2_violations: tuple

    def as_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "mode": self.mode,
            "qh1_violations": [
                {"symbol": sym, "source_tuple": list(a), "target_tuple": list(b)}
                for sym, a, b in self.qh1_violations],
            "qh2_violations": [
                {"pair": [[x, b], [x2, b2]]}
                for (x, b), (x2, b2) in self.qh2_violations],
        }


def verify(cand: QHomCandidate) -> VerificationReport:
    """Check QH1 (and QH2 when oracular); collects all violations in
    deterministic scan order."""
    cand.qf.validate()
    X, A, qf = cand.source, cand.target, cand.qf
    qmat = [[qf.mat(x, y) for y in A.domain] for x in X.domain]
    qh1 = []
    for sym, tuples in X.relations:
        r = X.signature.arity(sym)
        good = set(A.rel(sym))
        bad = [bt for bt in itertools.product(range(A.size), repeat=r)
               if bt not in good]
        for at in tuples:
            for bt in bad:
                prod = qmat[at[0]][bt[0]]
                for k in range(1, r):
                    if prod.is_zero():
                        break
                    prod = prod @ qmat[at[k]][bt[k]]
                if not prod.is_zero():
                    qh1.append((sym,
                                tuple(X.domain[i] for i in at),
                                tuple(A.domain[j] for j in bt)))
    qh2 = []
    if cand.mode == "oracular":
        edges = {(i, j) for (i, j) in gaifman(X).rel("E") if i < j}
        for i, j in sorted(edges):
            for bi in range(A.size):
                for bj in range(A.size):
                    if not qlinalg.commutator(qmat[i][bi], qmat[j][bj]).is_zero():
                        qh2.append(((X.domain[i], A.domain[bi]),
                                    (X.domain[j], A.domain[bj])))
    return VerificationReport(not qh1 and not qh2, cand.mode,
                              tuple(qh1), tuple(qh2))


def is_quantum_polymorphism(A: Structure, n: int, qf: QuantumFunction,
                            mode: str = "oracular") -> VerificationReport:
    """Verify qf as a candidate A^n => A.  The measurement labels must be
    exactly the n-tuples over A's domain (any order)."""
    return verify(QHomCandidate(direct_power(A, n), A, qf, mode))


def in_quantum_closure(cand: QHomCandidate):
    """(True, decomposition) when the candidate splits into classical
    homomorphisms on a joint eigenbasis; (False, witness) otherwise.

    Candidates passing verify always split when noncontextual; a
    noncontextual candidate whose components fail to be homomorphisms
    violates QH1, and that is reported as an error.
    """
    ok, witness = qlinalg.is_noncontextual(cand.qf)
    if not ok:
        return False, witness
    dec = qlinalg.decompose_noncontextual(cand.qf)
    src_order = [cand.qf.source_labels.index(lab) for lab in cand.source.domain]
    for comp in dec.components:
        image = tuple(cand.target.index(comp[i]) for i in src_order)
        h = ClassicalHom(cand.source, cand.target, image)
        if not h.is_valid():
            raise ValueError(
                f"component {dict(zip(cand.source.domain, (comp[i] for i in src_order)))} "
                "is not a homomorphism; the candidate fails QH1")
    return True, dec


def core_column_sums(cand: QHomCandidate) -> bool:
    """For an endomorphism candidate on a core: does every outcome's
    column of projectors sum to the identity?"""
    if cand.source != cand.target:
        raise ValueError("column sums apply to endomorphism candidates")
    if not is_core(cand.source):
        raise ValueError("column sums require a core")
    ok, witness = qlinalg.is_noncontextual(cand.qf)
    if not ok:
        raise ValueError(f"candidate is contextual; witness {witness}")
    eye = QMat.identity(cand.qf.dim)
    for y in cand.target.domain:
        total = QMat.zeros(cand.qf.dim)
        for x in cand.source.domain:
            total = total + cand.qf.mat(x, y)
        if total != eye:
            return False
    return True


# ---------------------------------------------------------------------------
# walk orthogonality
# ---------------------------------------------------------------------------

def _single_binary_symbol(X: Structure) -> str:
    syms = X.signature.symbols()
    if len(syms) != 1 or X.signature.arity(syms[0]) != 2:
        raise ValueError("this check needs a single binary symbol")
    return syms[0]


def _walk_reach(X: Structure, sym: str, lmax: int) -> list[list[list[bool]]]:
    """reach[l][i][j] = directed walk of length l from i to j, l = 0..lmax."""
    n = X.size
    adj = [[False] * n for _ in range(n)]
    for (i, j) in X.rel(sym):
        adj[i][j] = True
    reach = [[[i == j for j in range(n)] for i in range(n)]]
    cur = reach[0]
    for _ in range(lmax):
        nxt = [[False] * n for _ in range(n)]
        for i in range(n):
            row = cur[i]
            for k in range(n):
                if row[k]:
                    arow = adj[k]
                    nrow = nxt[i]
                    for j in range(n):
                        if arow[j]:
                            nrow[j] = True
        reach.append(nxt)
        cur = nxt
    return reach


def walk_orthogonality_check(cand: QHomCandidate, l_max: int) -> list[tuple]:
    """Products that should vanish by the walk obstruction but do not.

    For every l <= l_max: an l-walk x -> x2 in the source without a
    matching l-walk y -> y2 in the target forces Q_{x,y} Q_{x2,y2} = 0
    for verified oracular candidates.  Returns offending
    (l, x, y, x2, y2) tuples; expected empty.
    """
    sym = _single_binary_symbol(cand.source)
    if _single_binary_symbol(cand.target) != sym:
        raise ValueError("source and target symbols disagree")
    if cand.mode != "oracular":
        raise ValueError("walk orthogonality applies to oracular candidates")
    X, A, qf = cand.source, cand.target, cand.qf
    rx = _walk_reach(X, sym, l_max)
    ra = _walk_reach(A, sym, l_max)
    qmat = [[qf.mat(x, y) for y in A.domain] for x in X.domain]
    bad = []
    for l in range(1, l_max + 1):
        for i in range(X.size):
            for i2 in range(X.size):
                if not rx[l][i][i2]:
                    continue
                for j in range(A.size):
                    for j2 in range(A.size):
                        if ra[l][j][j2]:
                            continue
                        if not (qmat[i][j] @ qmat[i2][j2]).is_zero():
                            bad.append((l, X.domain[i], A.domain[j],
                                        X.domain[i2], A.domain[j2]))
    return bad


# ---------------------------------------------------------------------------
# bifurcations
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Bifurcation:
    """A simple path whose endpoints carry two labels each, all pairwise
    products nonzero except (optionally) between the two primed labels."""

    path: tuple[Label, ...]
    labels: tuple[tuple[Label, ...], ...]   # per path vertex; endpoints doubled
    length: int

    def as_dict(self) -> dict:
        return {"path": list(self.path),
                "labels": [list(l) for l in self.labels],
                "length": self.length}


def find_bifurcation(cand: QHomCandidate) -> Optional[Bifurcation]:
    """Smallest, lexicographically least bifurcation of a verified
    oracular candidate on a connected source.

    Searches path lengths 2..diameter; for a contextual candidate on a
    connected source a bifurcation in that range always exists.
    """
    sym = _single_binary_symbol(cand.source)
    _single_binary_symbol(cand.target)
    if cand.mode != "oracular":
        raise ValueError("bifurcation search applies to oracular candidates")
    X, A, qf = cand.source, cand.target, cand.qf
    diam = diameter(X)
    if diam == math.inf:
        raise ValueError("bifurcation search needs a connected source")
    qmat = [[qf.mat(x, y) for y in A.domain] for x in X.domain]
    nonzero_cache: dict = {}

    def prod_nonzero(x, a, x2, a2) -> bool:
        key = (x, a, x2, a2)
        hit = nonzero_cache.get(key)
        if hit is None:
            hit = not (qmat[x][a] @ qmat[x2][a2]).is_zero()
            nonzero_cache[key] = hit
        return hit

    adj = [[] for _ in range(X.size)]
    for (i, j) in gaifman(X).rel("E"):
        adj[i].append(j)
    for row in adj:
        row.sort()
    for omega in range(2, diam + 1):
        for path in _simple_paths(adj, omega):
            hit = _label_path(path, prod_nonzero, A)
            if hit is not None:
                return Bifurcation(tuple(X.domain[i] for i in path),
                                   hit, omega)
    return None


def _simple_paths(adj: list[list[int]], omega: int):
    """All simple paths with omega edges, lexicographic by vertex tuple."""
    n = len(adj)
    path: list[int] = []
    used = [False] * n

    def extend():
        if len(path) == omega + 1:
            yield tuple(path)
            return
        for nb in adj[path[-1]]:
            if not used[nb]:
                used[nb] = True
                path.append(nb)
                yield from extend()
                path.pop()
                used[nb] = False

    for start in range(n):
        used[start] = True
        path.append(start)
        yield from extend()
        path.pop()
        used[start] = False


def _label_path(path: tuple[int, ...], prod_nonzero, A: Structure):
    """First label assignment making the path a bifurcation, or None.

    Labels scan in target order: endpoint pairs (a, a2) with a != a2,
    interior labels singly.  The product condition is checked over the
    full labelled vertex set with the primed endpoint pair exempt.
    """
    m = A.size
    omega = len(path) - 1
    ends = [(a, a2) for a in range(m) for a2 in range(m) if a != a2]
    interior = list(itertools.product(range(m), repeat=omega - 1))
    for a0, a0p in ends:
        for mids in interior:
            for aw, awp in ends:
                entries = [(path[0], a0), (path[0], a0p)]
                entries += [(path[k + 1], mids[k]) for k in range(omega - 1)]
                entries += [(path[omega], aw), (path[omega], awp)]
                exempt = {((path[0], a0p), (path[omega], awp)),
                          ((path[omega], awp), (path[0], a0p))}
                if _all_products_nonzero(entries, exempt, prod_nonzero):
                    labels = [(A.domain[a0], A.domain[a0p])]
                    labels += [(A.domain[v],) for v in mids]
                    labels += [(A.domain[aw], A.domain[awp])]
                    return tuple(labels)
    return None


def _all_products_nonzero(entries, exempt, prod_nonzero) -> bool:
    for (x, a) in entries:
        for (x2, a2) in entries:
            if x == x2:
                continue
            if ((x, a), (x2, a2)) in exempt:
                continue
            if not prod_nonzero(x, a, x2, a2):
                return False
    return True
