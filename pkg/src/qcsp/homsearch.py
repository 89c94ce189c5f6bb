"""Backtracking homomorphism search over compiled constraint networks.

One compiled network per (source, target) pair, cached; two search modes
on top of it:

* lex: static variable order (source domain order), values ascending by
  target index, forward checking only.  The first solution found is the
  lexicographically least homomorphism, which callers rely on for
  deterministic output.
* mrv: smallest-domain-first with arc consistency maintained after every
  assignment.  Used for existence and pinned extension checks where
  order is irrelevant but speed is not.

Domains are bitmasks over target indices, so all pruning is int ops.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Mapping, Optional

from .structures import ClassicalHom, Structure


@dataclass(frozen=True, eq=False)
class _Net:
    n: int                      # source size
    m: int                      # target size
    unary: tuple[int, ...]      # per-variable initial masks
    tables: dict                # (i, j) -> tuple over a of mask of allowed b
    neigh: tuple[tuple[int, ...], ...]
    kcons: tuple                # (vars, allowed frozenset) with len(vars) >= 3
    kby: tuple[tuple[int, ...], ...]   # var -> indices into kcons


@lru_cache(maxsize=256)
def _compile(X: Structure, A: Structure) -> _Net:
    """Constraint network for homomorphisms X -> A."""
    if set(X.signature.arities) != set(A.signature.arities):
        raise ValueError(f"signature mismatch between {X.name} and {A.name}")
    n, m = X.size, A.size
    full = (1 << m) - 1
    unary = [full] * n
    tables: dict = {}
    kcons: list = []
    for sym, tuples in X.relations:
        allowed = set(A.rel(sym))
        for t in tuples:
            vs: list[int] = []
            for i in t:
                if i not in vs:
                    vs.append(i)
            proj = set()
            for at in allowed:
                # at must be consistent with the repetition pattern of t
                val = {}
                ok = True
                for pos, i in enumerate(t):
                    if i in val:
                        if val[i] != at[pos]:
                            ok = False
                            break
                    else:
                        val[i] = at[pos]
                if ok:
                    proj.add(tuple(val[i] for i in vs))
            if len(vs) == 1:
                mask = 0
                for (a,) in proj:
                    mask |= 1 << a
                unary[vs[0]] &= mask
            elif len(vs) == 2:
                i, j = vs
                fwd = [0] * m
                bwd = [0] * m
                for a, b in proj:
                    fwd[a] |= 1 << b
                    bwd[b] |= 1 << a
                _merge_table(tables, i, j, fwd, m)
                _merge_table(tables, j, i, bwd, m)
            else:
                kcons.append((tuple(vs), frozenset(proj)))
    neigh = [set() for _ in range(n)]
    for (i, j) in tables:
        neigh[i].add(j)
    kby = [[] for _ in range(n)]
    for idx, (vs, _) in enumerate(kcons):
        for v in vs:
            kby[v].append(idx)
    return _Net(n, m, tuple(unary), tables,
                tuple(tuple(sorted(s)) for s in neigh),
                tuple(kcons), tuple(tuple(k) for k in kby))


def _merge_table(tables, i, j, tab, m):
    key = (i, j)
    if key in tables:
        old = tables[key]
        tables[key] = tuple(old[a] & tab[a] for a in range(m))
    else:
        tables[key] = tuple(tab)


def _pin_masks(net: _Net, X: Structure, A: Structure,
               pins: Optional[Mapping]) -> Optional[list[int]]:
    dom = list(net.unary)
    if pins:
        for src_lab, tgt_lab in pins.items():
            i = X.index(src_lab)
            bit = 1 << A.index(tgt_lab)
            dom[i] &= bit
    if any(d == 0 for d in dom):
        return None
    return dom


# ---------------------------------------------------------------------------
# arc consistency
# ---------------------------------------------------------------------------

def _ac3(net: _Net, dom: list[int], queue: deque) -> bool:
    tables = net.tables
    while queue:
        i, j = queue.popleft()
        tab = tables[(i, j)]
        di = dom[i]
        dj = dom[j]
        new = 0
        rest = di
        while rest:
            low = rest & -rest
            if tab[low.bit_length() - 1] & dj:
                new |= low
            rest ^= low
        if new != di:
            if not new:
                return False
            dom[i] = new
            for k in net.neigh[i]:
                if k != j:
                    queue.append((k, i))
    return True


def _kary_sweep(net: _Net, dom: list[int], touched=None) -> Optional[list[int]]:
    """Forward-check non-binary constraints; returns pruned vars or None
    on wipeout.  Only constraints with <= 1 open variable do anything."""
    pruned = []
    idxs = range(len(net.kcons)) if touched is None else touched
    for ci in idxs:
        vs, allowed = net.kcons[ci]
        open_vars = [v for v in vs if dom[v].bit_count() > 1]
        if len(open_vars) > 1:
            continue
        if not open_vars:
            vals = tuple(dom[v].bit_length() - 1 for v in vs)
            if vals not in allowed:
                return None
            continue
        ov = open_vars[0]
        mask = 0
        for cand in allowed:
            ok = True
            for v, a in zip(vs, cand):
                if v != ov and dom[v] != (1 << a):
                    ok = False
                    break
            if ok:
                mask |= 1 << cand[vs.index(ov)]
        new = dom[ov] & mask
        if not new:
            return None
        if new != dom[ov]:
            dom[ov] = new
            pruned.append(ov)
    return pruned


def _propagate_root(net: _Net, dom: list[int]) -> bool:
    while True:
        queue = deque(net.tables.keys())
        if not _ac3(net, dom, queue):
            return False
        pruned = _kary_sweep(net, dom)
        if pruned is None:
            return False
        if not pruned:
            return True


def _assign_propagate(net: _Net, dom: list[int], var: int) -> bool:
    queue = deque((j, var) for j in net.neigh[var])
    stack = [var]
    while True:
        if not _ac3(net, dom, queue):
            return False
        touched = set()
        for v in stack:
            touched.update(net.kby[v])
        stack = []
        if not touched:
            return True
        pruned = _kary_sweep(net, dom, sorted(touched))
        if pruned is None:
            return False
        if not pruned:
            return True
        for v in pruned:
            for j in net.neigh[v]:
                queue.append((j, v))
        stack = pruned


def _kary_full_ok(net: _Net, dom: list[int]) -> bool:
    for vs, allowed in net.kcons:
        vals = tuple(dom[v].bit_length() - 1 for v in vs)
        if vals not in allowed:
            return False
    return True


# ---------------------------------------------------------------------------
# mrv search
# ---------------------------------------------------------------------------

def _pick(net: _Net, dom: list[int]) -> Optional[int]:
    best, best_c = None, None
    for i in range(net.n):
        c = dom[i].bit_count()
        if c > 1 and (best_c is None or c < best_c):
            best, best_c = i, c
            if c == 2:
                break
    return best


def find_any(X: Structure, A: Structure,
             pins: Optional[Mapping] = None) -> Optional[ClassicalHom]:
    """Some homomorphism X -> A honoring pins, or None.  Not ordered."""
    net = _compile(X, A)
    dom = _pin_masks(net, X, A, pins)
    if dom is None or not _propagate_root(net, dom):
        return None
    frames: list = []
    var = _pick(net, dom)
    if var is None:
        if _kary_full_ok(net, dom):
            return _to_hom(X, A, dom)
        return None
    mask = dom[var]
    while True:
        if mask:
            low = mask & -mask
            mask ^= low
            child = dom.copy()
            child[var] = low
            if _assign_propagate(net, child, var):
                nxt = _pick(net, child)
                if nxt is None:
                    if _kary_full_ok(net, child):
                        return _to_hom(X, A, child)
                else:
                    frames.append((dom, var, mask))
                    dom, var, mask = child, nxt, child[nxt]
        else:
            if not frames:
                return None
            dom, var, mask = frames.pop()


def _to_hom(X: Structure, A: Structure, dom: list[int]) -> ClassicalHom:
    return ClassicalHom(X, A, tuple(d.bit_length() - 1 for d in dom))


# ---------------------------------------------------------------------------
# lex search
# ---------------------------------------------------------------------------

def _lex_iter(net: _Net, X: Structure, A: Structure,
              dom: list[int]) -> Iterator[ClassicalHom]:
    """All solutions, static variable order, ascending values: yields
    homomorphisms in lexicographic order of their image tuples."""
    n = net.n
    image = [0] * n
    # frames: (var, remaining value mask, saved domains before assignment)
    frames: list = []
    var = 0
    mask = dom[0]
    saved = dom.copy()
    while True:
        advanced = False
        while mask:
            low = mask & -mask
            mask ^= low
            a = low.bit_length() - 1
            child = saved.copy()
            child[var] = low
            if _forward(net, child, var):
                image[var] = a
                if var + 1 == n:
                    if _kary_full_ok(net, child):
                        yield ClassicalHom(X, A, tuple(image))
                    continue
                frames.append((var, mask, saved))
                var += 1
                saved = child
                mask = child[var]
                advanced = True
                break
        if not advanced:
            if not frames:
                return
            var, mask, saved = frames.pop()


def _forward(net: _Net, dom: list[int], var: int) -> bool:
    """Forward checking after dom[var] became a singleton."""
    a = dom[var].bit_length() - 1
    for j in net.neigh[var]:
        tab = net.tables.get((j, var))
        if tab is None:
            continue
        dj = dom[j]
        new = 0
        rest = dj
        while rest:
            low = rest & -rest
            if tab[low.bit_length() - 1] & dom[var]:
                new |= low
            rest ^= low
        if not new:
            return False
        dom[j] = new
    return _kary_sweep(net, dom, net.kby[var]) is not None


def lex_all(X: Structure, A: Structure,
            pins: Optional[Mapping] = None) -> Iterator[ClassicalHom]:
    net = _compile(X, A)
    dom = _pin_masks(net, X, A, pins)
    if dom is None:
        return
    # no root AC here: pruning cannot drop solutions, but keeping the
    # plain masks makes the enumeration order obviously lexicographic
    yield from _lex_iter(net, X, A, dom)


def lex_first(X: Structure, A: Structure,
              pins: Optional[Mapping] = None) -> Optional[ClassicalHom]:
    for h in lex_all(X, A, pins):
        return h
    return None


# ---------------------------------------------------------------------------
# automorphisms
# ---------------------------------------------------------------------------

@lru_cache(maxsize=128)
def automorphisms(A: Structure) -> tuple[ClassicalHom, ...]:
    """All bijective endomorphisms whose inverse is also a homomorphism."""
    out = []
    for h in lex_all(A, A):
        if not h.is_bijective():
            continue
        inv = [0] * A.size
        for i, v in enumerate(h.image):
            inv[v] = i
        g = ClassicalHom(A, A, tuple(inv))
        if g.is_valid():
            out.append(h)
    return tuple(out)
