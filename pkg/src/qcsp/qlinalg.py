"""Exact rational matrices, projective measurements, quantum functions.

Everything is computed over the rationals with fractions.Fraction; a
check passes only when the relevant matrix is exactly zero.  Matrices
are real symmetric throughout, so "projector" means symmetric idempotent
and simultaneous diagonalization stays inside rational arithmetic: the
joint eigenspaces of a commuting family of projectors are cut out by
images and kernels, never by characteristic polynomials.

The measurement dimension is capped (default 64) to keep dense rational
arithmetic honest; override with the QCSP_DIM_CAP environment variable.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence
import itertools
import os

from .structures import ClassicalHom, FormatError, Label, parse_label, render_label, tokenize_line


def dim_cap() -> int:
    try:
        cap = int(os.environ.get("QCSP_DIM_CAP", "64"))
    except ValueError:
        raise ValueError("QCSP_DIM_CAP must be an int") from None
    if cap < 1:
        raise ValueError("QCSP_DIM_CAP must be >= 1")
    return cap


# ---------------------------------------------------------------------------
# matrices
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class QMat:
    """Immutable rational matrix (tuple of row tuples of Fraction)."""

    rows: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        if not self.rows or not self.rows[0]:
            raise ValueError("matrix must be nonempty")
        w = len(self.rows[0])
        canon = tuple(tuple(Fraction(x) for x in row) for row in self.rows)
        if any(len(r) != w for r in canon):
            raise ValueError("ragged rows")
        object.__setattr__(self, "rows", canon)

    @staticmethod
    def identity(d: int) -> "QMat":
        one, zero = Fraction(1), Fraction(0)
        return QMat(tuple(tuple(one if i == j else zero for j in range(d))
                          for i in range(d)))

    @staticmethod
    def zeros(d: int, w: Optional[int] = None) -> "QMat":
        zero = Fraction(0)
        return QMat(tuple(tuple(zero for _ in range(w or d)) for _ in range(d)))

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), len(self.rows[0])

    def __add__(self, other: "QMat") -> "QMat":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return QMat(tuple(tuple(a + b for a, b in zip(r, s))
                          for r, s in zip(self.rows, other.rows)))

    def __sub__(self, other: "QMat") -> "QMat":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return QMat(tuple(tuple(a - b for a, b in zip(r, s))
                          for r, s in zip(self.rows, other.rows)))

    def __neg__(self) -> "QMat":
        return QMat(tuple(tuple(-a for a in r) for r in self.rows))

    def scale(self, c) -> "QMat":
        c = Fraction(c)
        return QMat(tuple(tuple(c * a for a in r) for r in self.rows))

    def __matmul__(self, other: "QMat") -> "QMat":
        n, k = self.shape
        k2, m = other.shape
        if k != k2:
            raise ValueError("shape mismatch")
        cols = tuple(zip(*other.rows))
        return QMat(tuple(tuple(sum(a * b for a, b in zip(row, col))
                                for col in cols)
                          for row in self.rows))

    def transpose(self) -> "QMat":
        return QMat(tuple(zip(*self.rows)))

    def is_zero(self) -> bool:
        return all(a == 0 for r in self.rows for a in r)

    def is_symmetric(self) -> bool:
        n, m = self.shape
        return n == m and all(self.rows[i][j] == self.rows[j][i]
                              for i in range(n) for j in range(i + 1, n))


def is_projector(M: QMat) -> bool:
    """Symmetric idempotent: M = M^T and M = M @ M."""
    return M.is_symmetric() and M @ M == M


def is_pvm(mats: Sequence[QMat], dim: Optional[int] = None) -> bool:
    """Projectors (zero allowed) summing to the identity."""
    if not mats:
        return False
    d = mats[0].shape[0]
    if dim is not None and d != dim:
        return False
    if any(M.shape != (d, d) for M in mats):
        return False
    if any(not is_projector(M) for M in mats):
        return False
    total = QMat.zeros(d)
    for M in mats:
        total = total + M
    return total == QMat.identity(d)


def commutator(M: QMat, N: QMat) -> QMat:
    return M @ N - N @ M


def kron(M: QMat, N: QMat) -> QMat:
    (a, b), (c, d) = M.shape, N.shape
    return QMat(tuple(
        tuple(M.rows[i][j] * N.rows[k][l] for j in range(b) for l in range(d))
        for i in range(a) for k in range(c)))


def block_diag(M: QMat, N: QMat) -> QMat:
    (a, b), (c, d) = M.shape, N.shape
    zero = Fraction(0)
    top = tuple(r + (zero,) * d for r in M.rows)
    bot = tuple((zero,) * b + r for r in N.rows)
    return QMat(top + bot)


# ---------------------------------------------------------------------------
# quantum functions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class QuantumFunction:
    """One d-dimensional projective measurement per source element, with
    outcomes indexed by target elements.

    mats[i][j] is the projector for source_labels[i], target_labels[j].
    The order of source_labels is data: deterministic scans follow it.
    """

    source_labels: tuple[Label, ...]
    target_labels: tuple[Label, ...]
    dim: int
    mats: tuple[tuple[QMat, ...], ...]

    def __post_init__(self):
        if len(set(self.source_labels)) != len(self.source_labels):
            raise ValueError("duplicate source labels")
        if len(set(self.target_labels)) != len(self.target_labels):
            raise ValueError("duplicate target labels")
        if not 1 <= self.dim <= dim_cap():
            raise ValueError(f"dimension {self.dim} outside 1..{dim_cap()}")
        if len(self.mats) != len(self.source_labels):
            raise ValueError("one matrix row per source element required")
        for row in self.mats:
            if len(row) != len(self.target_labels):
                raise ValueError("one matrix per target element required")
            for M in row:
                if M.shape != (self.dim, self.dim):
                    raise ValueError("matrix shape disagrees with dim")

    def src_index(self, label: Label) -> int:
        return self.source_labels.index(label)

    def mat(self, src: Label, tgt: Label) -> QMat:
        return self.mats[self.source_labels.index(src)][self.target_labels.index(tgt)]

    def pvm(self, src: Label) -> tuple[QMat, ...]:
        return self.mats[self.source_labels.index(src)]

    def validate(self) -> None:
        """Every source element must carry a genuine measurement."""
        for i, lab in enumerate(self.source_labels):
            if not is_pvm(self.mats[i], self.dim):
                raise ValueError(f"projectors at {lab!r} do not form a measurement")


def quantum_function(source_labels: Iterable[Label],
                     target_labels: Iterable[Label],
                     dim: int,
                     blocks: Mapping[tuple, QMat],
                     validate: bool = True) -> QuantumFunction:
    """Build from a sparse (source, target) -> matrix mapping; omitted
    pairs are zero."""
    src = tuple(source_labels)
    tgt = tuple(target_labels)
    z = QMat.zeros(dim)
    grid = [[z] * len(tgt) for _ in src]
    si = {lab: i for i, lab in enumerate(src)}
    ti = {lab: j for j, lab in enumerate(tgt)}
    for (a, b), M in blocks.items():
        if a not in si:
            raise ValueError(f"unknown source label {a!r}")
        if b not in ti:
            raise ValueError(f"unknown target label {b!r}")
        grid[si[a]][ti[b]] = M
    qf = QuantumFunction(src, tgt, dim, tuple(tuple(r) for r in grid))
    if validate:
        qf.validate()
    return qf


# ---------------------------------------------------------------------------
# the algebra of quantum functions
# ---------------------------------------------------------------------------

def direct_sum(F: QuantumFunction, G: QuantumFunction) -> QuantumFunction:
    """Block-diagonal join of two quantum functions with the same shape."""
    if F.source_labels != G.source_labels or F.target_labels != G.target_labels:
        raise ValueError("direct_sum needs identical source and target labels")
    mats = tuple(tuple(block_diag(F.mats[i][j], G.mats[i][j])
                       for j in range(len(F.target_labels)))
                 for i in range(len(F.source_labels)))
    return QuantumFunction(F.source_labels, F.target_labels, F.dim + G.dim, mats)


def tensor(F: QuantumFunction, G: QuantumFunction) -> QuantumFunction:
    """Pointwise Kronecker product; the target becomes the label pairs
    (b, c) in product order."""
    if F.source_labels != G.source_labels:
        raise ValueError("tensor needs identical source labels")
    tgt = tuple(itertools.product(F.target_labels, G.target_labels))
    mats = []
    for i in range(len(F.source_labels)):
        row = []
        for b in range(len(F.target_labels)):
            for c in range(len(G.target_labels)):
                row.append(kron(F.mats[i][b], G.mats[i][c]))
        mats.append(tuple(row))
    return QuantumFunction(F.source_labels, tgt, F.dim * G.dim, tuple(mats))


def compose(R: QuantumFunction, Q: QuantumFunction) -> QuantumFunction:
    """Composite of Q: A => B then R: B => C.

    (R after Q)_{a,c} = sum_b R_{b,c} (x) Q_{a,b}, with the R factor on
    the left of each Kronecker product.
    """
    if Q.target_labels != R.source_labels:
        raise ValueError("compose needs Q's target to be R's source")
    d = R.dim * Q.dim
    mats = []
    for a in range(len(Q.source_labels)):
        row = []
        for c in range(len(R.target_labels)):
            acc = QMat.zeros(d)
            for b in range(len(Q.target_labels)):
                acc = acc + kron(R.mats[b][c], Q.mats[a][b])
            row.append(acc)
        mats.append(tuple(row))
    return QuantumFunction(Q.source_labels, R.target_labels, d, tuple(mats))


def from_classical_family(homs: Sequence[ClassicalHom]) -> QuantumFunction:
    """Diagonal quantum function whose i-th diagonal slot follows homs[i]."""
    if not homs:
        raise ValueError("need at least one homomorphism")
    src = homs[0].source
    tgt = homs[0].target
    for h in homs:
        if h.source != src or h.target != tgt:
            raise ValueError("family members must share source and target")
    d = len(homs)
    zero, one = Fraction(0), Fraction(1)
    mats = []
    for i in range(src.size):
        row = []
        for j in range(tgt.size):
            row.append(QMat(tuple(
                tuple(one if (k == l and homs[k].image[i] == j) else zero
                      for l in range(d))
                for k in range(d))))
        mats.append(tuple(row))
    return QuantumFunction(src.domain, tgt.domain, d, tuple(mats))


# ---------------------------------------------------------------------------
# contextuality and decomposition
# ---------------------------------------------------------------------------

def is_noncontextual(qf: QuantumFunction):
    """Do all projectors at distinct source elements commute?

    Scans outcome pairs in target order first, then source pairs in
    source-label order, and reports the first non-commuting quadruple as
    ((a, b), (a2, b2)); the scan order is part of the contract so that
    reports are reproducible.
    """
    ns, nt = len(qf.source_labels), len(qf.target_labels)
    for bj in range(nt):
        for bk in range(nt):
            for i in range(ns):
                for j in range(i + 1, ns):
                    if not commutator(qf.mats[i][bj], qf.mats[j][bk]).is_zero():
                        return False, ((qf.source_labels[i], qf.target_labels[bj]),
                                       (qf.source_labels[j], qf.target_labels[bk]))
    return True, None


@dataclass(frozen=True)
class ClassicalDecomposition:
    """Joint eigenbasis presentation of a noncontextual quantum function.

    components[i] lists, aligned with source_labels, the target label
    selected on the i-th basis vector; basis[i] is that vector, scaled
    so its first nonzero entry is 1, orthogonal within each joint
    eigenspace.
    """

    source_labels: tuple[Label, ...]
    target_labels: tuple[Label, ...]
    components: tuple[tuple[Label, ...], ...]
    basis: tuple[tuple[Fraction, ...], ...]

    @property
    def dim(self) -> int:
        return len(self.basis)

    def component_maps(self) -> tuple[dict, ...]:
        return tuple({a: comp[i] for i, a in enumerate(self.source_labels)}
                     for comp in self.components)

    def to_quantum_function(self) -> QuantumFunction:
        """Rebuild sum_i [h_i(a) = b] * (v_i v_i^T / <v_i, v_i>)."""
        d = self.dim
        ti = {lab: j for j, lab in enumerate(self.target_labels)}
        grid = [[QMat.zeros(d) for _ in self.target_labels]
                for _ in self.source_labels]
        for comp, vec in zip(self.components, self.basis):
            nrm = sum(x * x for x in vec)
            P = QMat(tuple(tuple(x * y / nrm for y in vec) for x in vec))
            for i in range(len(self.source_labels)):
                grid[i][ti[comp[i]]] = grid[i][ti[comp[i]]] + P
        return QuantumFunction(self.source_labels, self.target_labels, d,
                               tuple(tuple(r) for r in grid))


def _row_echelon_basis(vectors: list[tuple[Fraction, ...]]) -> list[tuple[Fraction, ...]]:
    """Independent spanning rows in echelon form, deterministic."""
    rows = [list(v) for v in vectors]
    out: list[list[Fraction]] = []
    d = len(rows[0]) if rows else 0
    pivots: list[int] = []
    for row in rows:
        r = row[:]
        for piv, base in zip(pivots, out):
            if r[piv] != 0:
                c = r[piv] / base[piv]
                r = [a - c * b for a, b in zip(r, base)]
        lead = next((k for k in range(d) if r[k] != 0), None)
        if lead is None:
            continue
        out.append(r)
        pivots.append(lead)
    order = sorted(range(len(out)), key=lambda t: pivots[t])
    return [tuple(out[t]) for t in order]


def _vec_mat(v: Sequence[Fraction], M: QMat) -> tuple[Fraction, ...]:
    cols = list(zip(*M.rows))
    return tuple(sum(a * b for a, b in zip(v, col)) for col in cols)


def decompose_noncontextual(qf: QuantumFunction) -> ClassicalDecomposition:
    """Split a noncontextual quantum function into classical components.

    Joint eigenspaces are refined by taking images and kernels of every
    projector in scan order; within each final eigenspace the basis is
    orthogonalized (Gram-Schmidt, no normalization) and scaled to a
    first-nonzero-entry of 1, so the rebuilt projectors are exact.
    """
    ok, witness = is_noncontextual(qf)
    if not ok:
        raise ValueError(f"not noncontextual; witness {witness}")
    d = qf.dim
    one = Fraction(1)
    eye = [tuple(one if i == j else Fraction(0) for j in range(d)) for i in range(d)]
    spaces: list[list[tuple[Fraction, ...]]] = [eye]
    for i in range(len(qf.source_labels)):
        for j in range(len(qf.target_labels)):
            P = qf.mats[i][j]
            if P.is_zero() or P == QMat.identity(d):
                continue
            nxt: list[list[tuple[Fraction, ...]]] = []
            for V in spaces:
                if len(V) == 1:
                    nxt.append(V)
                    continue
                img = _row_echelon_basis([_vec_mat(v, P) for v in V])
                ker = _row_echelon_basis(
                    [tuple(a - b for a, b in zip(v, _vec_mat(v, P))) for v in V])
                if len(img) + len(ker) != len(V):
                    raise ValueError("projector does not preserve a joint eigenspace")
                if img:
                    nxt.append(img)
                if ker:
                    nxt.append(ker)
            spaces = nxt
    basis: list[tuple[Fraction, ...]] = []
    for V in spaces:
        ortho: list[tuple[Fraction, ...]] = []
        for v in V:
            w = list(v)
            for u in ortho:
                c = sum(a * b for a, b in zip(w, u)) / sum(a * a for a in u)
                w = [a - c * b for a, b in zip(w, u)]
            ortho.append(tuple(w))
        for w in ortho:
            lead = next(x for x in w if x != 0)
            basis.append(tuple(x / lead for x in w))
    components = []
    for v in basis:
        comp = []
        for i, a in enumerate(qf.source_labels):
            hit = None
            for j, b in enumerate(qf.target_labels):
                w = _vec_mat(v, qf.mats[i][j])
                if w == v:
                    hit = b
                    break
                if any(x != 0 for x in w):
                    raise ValueError("vector is not a joint eigenvector")
            if hit is None:
                raise ValueError(f"no outcome selected at {a!r}")
            comp.append(hit)
        components.append(tuple(comp))
    return ClassicalDecomposition(qf.source_labels, qf.target_labels,
                                  tuple(components), tuple(basis))


# ---------------------------------------------------------------------------
# text format
# ---------------------------------------------------------------------------

def _parse_fraction(tok: str) -> Fraction:
    try:
        return Fraction(tok)
    except (ValueError, ZeroDivisionError):
        raise FormatError(f"bad rational {tok!r}") from None


def parse_qfun(text: str, validate: bool = True) -> QuantumFunction:
    """Parse the qfun text format.

    Layout: a `qfun d=<dim>` header, `source` and `target` label lines,
    then `Q <source-label> <target-label>` blocks each followed by d
    rows of d rationals.  Omitted blocks are zero matrices.
    """
    lines = text.splitlines()
    dim = None
    src: Optional[list] = None
    tgt: Optional[list] = None
    blocks: dict = {}
    i = 0
    n = len(lines)
    while i < n:
        toks = tokenize_line(lines[i])
        i += 1
        if not toks:
            continue
        head = toks[0]
        if head == "qfun":
            if dim is not None:
                raise FormatError("duplicate qfun header")
            if len(toks) != 2 or not toks[1].startswith("d="):
                raise FormatError("qfun header must be 'qfun d=<dim>'")
            try:
                dim = int(toks[1][2:])
            except ValueError:
                raise FormatError(f"bad dimension {toks[1]!r}") from None
        elif head == "source":
            src = [parse_label(t) for t in toks[1:]]
        elif head == "target":
            tgt = [parse_label(t) for t in toks[1:]]
        elif head == "Q":
            if dim is None or src is None or tgt is None:
                raise FormatError("Q block before header lines")
            if len(toks) != 3:
                raise FormatError("Q block needs source and target labels")
            a, b = parse_label(toks[1]), parse_label(toks[2])
            rows = []
            while len(rows) < dim:
                if i >= n:
                    raise FormatError(f"matrix for {toks[1]} {toks[2]} is truncated")
                row_toks = tokenize_line(lines[i])
                i += 1
                if not row_toks:
                    continue
                if len(row_toks) != dim:
                    raise FormatError(f"expected {dim} entries per matrix row")
                rows.append(tuple(_parse_fraction(t) for t in row_toks))
            if (a, b) in blocks:
                raise FormatError(f"duplicate block for {toks[1]} {toks[2]}")
            blocks[(a, b)] = QMat(tuple(rows))
        else:
            raise FormatError(f"unexpected line {lines[i - 1]!r}")
    if dim is None or src is None or tgt is None:
        raise FormatError("qfun file needs qfun/source/target lines")
    try:
        return quantum_function(src, tgt, dim, blocks, validate=validate)
    except ValueError as e:
        raise FormatError(str(e)) from None


def render_qfun(qf: QuantumFunction) -> str:
    lines = [f"qfun d={qf.dim}",
             "source " + " ".join(render_label(x) for x in qf.source_labels),
             "target " + " ".join(render_label(x) for x in qf.target_labels)]
    for i, a in enumerate(qf.source_labels):
        for j, b in enumerate(qf.target_labels):
            M = qf.mats[i][j]
            if M.is_zero():
                continue
            lines.append(f"Q {render_label(a)} {render_label(b)}")
            for row in M.rows:
                lines.append("  " + " ".join(str(x) for x in row))
    return "\n".join(lines) + "\n"


def read_qfun(path, validate: bool = True) -> QuantumFunction:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_qfun(fh.read(), validate=validate)


def write_qfun(qf: QuantumFunction, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(render_qfun(qf))
