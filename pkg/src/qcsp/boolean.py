"""Boolean relations and the machinery around one-in-k translates.

A k-ary relation over {0, 1} is stored as a set of k-bit masks where
the first coordinate is the most significant bit, so "110" means the
tuple (1, 1, 0).  Subsets of [n] = {1, ..., n} index the projectors of
an n-ary polymorphism family; there the mask convention is bit (i - 1)
for element i, and a subset S stands for its characteristic tuple
(x_1, ..., x_n) with x_i = 1 iff i in S.  Only the outcome-1 projector
Q_S is stored; the outcome-0 projector is I - Q_S.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Union
import itertools

from . import qhom
from .qlinalg import QMat, QuantumFunction, is_projector, quantum_function
from .structures import Structure, build, direct_power

MaskLike = Union[int, str, Sequence[int]]


@dataclass(frozen=True)
class BoolRelation:
    arity: int
    masks: frozenset

    def __post_init__(self):
        if self.arity < 1:
            raise ValueError("arity must be positive")
        object.__setattr__(self, "masks", frozenset(self.masks))
        for m in self.masks:
            if not isinstance(m, int) or not 0 <= m < (1 << self.arity):
                raise ValueError(f"mask {m!r} out of range for arity {self.arity}")

    def __contains__(self, mask: int) -> bool:
        return mask in self.masks

    def tuples(self) -> tuple:
        return tuple(bits_of(m, self.arity) for m in sorted(self.masks))

    def words(self) -> tuple:
        return tuple(format(m, f"0{self.arity}b") for m in sorted(self.masks))


def mask_of(bits: Sequence[int]) -> int:
    m = 0
    for b in bits:
        if b not in (0, 1):
            raise ValueError(f"bit {b!r} is not 0/1")
        m = (m << 1) | b
    return m


def bits_of(mask: int, k: int) -> tuple:
    return tuple((mask >> (k - 1 - i)) & 1 for i in range(k))


def _coerce_mask(t: MaskLike, k: int) -> int:
    if isinstance(t, int):
        if not 0 <= t < (1 << k):
            raise ValueError(f"mask {t} out of range for arity {k}")
        return t
    if isinstance(t, str):
        if len(t) != k or any(c not in "01" for c in t):
            raise ValueError(f"expected a {k}-bit word, got {t!r}")
        return int(t, 2)
    bits = tuple(t)
    if len(bits) != k:
        raise ValueError(f"expected {k} bits, got {len(bits)}")
    return mask_of(bits)


def relation(k: int, members: Iterable[MaskLike]) -> BoolRelation:
    """Relation from masks, binary words, or bit tuples."""
    return BoolRelation(k, frozenset(_coerce_mask(m, k) for m in members))


def relation_of(A: Structure, sym: str) -> BoolRelation:
    """Extract one relation of a Boolean structure as masks."""
    if tuple(A.domain) != (0, 1):
        raise ValueError("structure is not Boolean")
    k = A.signature.arity(sym)
    return BoolRelation(k, frozenset(mask_of(t) for t in A.rel(sym)))


def structure_of(name: str, rel: BoolRelation, sym: str = "R") -> Structure:
    return build(name, (0, 1), {sym: rel.arity},
                 {sym: [bits_of(m, rel.arity) for m in sorted(rel.masks)]})


def r_one_in_k(k: int) -> BoolRelation:
    """Tuples with exactly one 1."""
    if k < 1:
        raise ValueError("k must be positive")
    return BoolRelation(k, frozenset(1 << i for i in range(k)))


def translate(rel: BoolRelation, t: MaskLike) -> BoolRelation:
    """Add t to every tuple, componentwise mod 2."""
    tm = _coerce_mask(t, rel.arity)
    return BoolRelation(rel.arity, frozenset(m ^ tm for m in rel.masks))


def o_t_structure(k: int, t: MaskLike) -> Structure:
    tm = _coerce_mask(t, k)
    word = format(tm, f"0{k}b")
    return structure_of(f"O_{word}", translate(r_one_in_k(k), tm))


# ---------------------------------------------------------------------------
# majority and projections
# ---------------------------------------------------------------------------

def _maj(a: int, b: int, c: int) -> int:
    return (a & b) | (a & c) | (b & c)


def majority_preserves(rel: BoolRelation):
    """(True, None) or (False, first triple whose componentwise majority
    leaves the relation), scanning triples in ascending mask order."""
    masks = sorted(rel.masks)
    for a, b, c in itertools.product(masks, repeat=3):
        if _maj(a, b, c) not in rel.masks:
            return False, (a, b, c)
    return True, None


def projection(rel: BoolRelation, coords: Sequence[int]) -> BoolRelation:
    """Project onto 1-based coordinates, kept in the given order."""
    k = rel.arity
    if not coords or any(not 1 <= i <= k for i in coords):
        raise ValueError(f"coordinates must be within 1..{k}")
    out = set()
    for m in rel.masks:
        bits = bits_of(m, k)
        out.add(mask_of(tuple(bits[i - 1] for i in coords)))
    return BoolRelation(len(coords), frozenset(out))


def binary_projection_full(rel: BoolRelation, i: int, j: int) -> bool:
    if not 1 <= i < j <= rel.arity:
        raise ValueError("need 1 <= i < j <= arity")
    return len(projection(rel, (i, j)).masks) == 4


def has_full_binary_projection(rel: BoolRelation) -> bool:
    return any(binary_projection_full(rel, i, j)
               for i, j in itertools.combinations(range(1, rel.arity + 1), 2))


def proper_projections_majority(rel: BoolRelation) -> bool:
    """Majority preserves every projection onto a nonempty proper
    coordinate set."""
    k = rel.arity
    for size in range(1, k):
        for coords in itertools.combinations(range(1, k + 1), size):
            ok, _ = majority_preserves(projection(rel, coords))
            if not ok:
                return False
    return True


def property_triple(rel: BoolRelation) -> bool:
    """Not majority-preserved, every proper projection is, and no binary
    projection is full.  For arity >= 3 this holds exactly for the
    translates of one-in-k."""
    ok, _ = majority_preserves(rel)
    if ok:
        return False
    return proper_projections_majority(rel) and not has_full_binary_projection(rel)


def classify_translate(rel: BoolRelation) -> Optional[int]:
    """The unique t with rel = translate(one-in-k, t), as a mask, or None.

    Restricted to arity >= 3: binary relations are all majority-closed,
    so the classification this mirrors starts at k = 3 (and at k = 2 the
    translate is not even unique: t and its complement agree).
    """
    k = rel.arity
    if k < 3 or len(rel.masks) != k:
        return None
    base = min(rel.masks)
    want = r_one_in_k(k).masks
    for i in range(k - 1, -1, -1):
        t = base ^ (1 << i)
        if {m ^ t for m in rel.masks} == want:
            return t
    return None


# ---------------------------------------------------------------------------
# subset-indexed polymorphism families
# ---------------------------------------------------------------------------

def subset_mask(S: Iterable[int], n: int) -> int:
    m = 0
    for i in S:
        if not 1 <= i <= n:
            raise ValueError(f"element {i} outside 1..{n}")
        m |= 1 << (i - 1)
    return m


def mask_subset(mask: int) -> frozenset:
    return frozenset(i + 1 for i in range(mask.bit_length()) if mask >> i & 1)


@dataclass(frozen=True)
class SubsetIndexedQF:
    """Outcome-1 projectors of an n-ary Boolean polymorphism family,
    indexed by subset mask (bit i-1 for element i)."""

    n: int
    dim: int
    mats: tuple

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be positive")
        object.__setattr__(self, "mats", tuple(self.mats))
        if len(self.mats) != 1 << self.n:
            raise ValueError(f"need {1 << self.n} projectors, got {len(self.mats)}")
        for m in self.mats:
            if m.shape != (self.dim, self.dim):
                raise ValueError("projector dimension mismatch")
            if not is_projector(m):
                raise ValueError("subset-indexed entries must be projectors")

    def proj(self, S) -> QMat:
        mask = S if isinstance(S, int) else subset_mask(S, self.n)
        return self.mats[mask]

    def chi(self, mask: int) -> tuple:
        return tuple((mask >> i) & 1 for i in range(self.n))


def to_quantum_function(sqf: SubsetIndexedQF, target: Structure) -> QuantumFunction:
    """The measurement family over target^n, outcomes 0/1."""
    if tuple(target.domain) != (0, 1):
        raise ValueError("target is not Boolean")
    src = direct_power(target, sqf.n).domain
    eye = QMat.identity(sqf.dim)
    blocks = {}
    for lab in src:
        mask = sum(1 << i for i, bit in enumerate(lab) if bit)
        blocks[(lab, 1)] = sqf.mats[mask]
        blocks[(lab, 0)] = eye - sqf.mats[mask]
    return quantum_function(src, (0, 1), sqf.dim, blocks)


def from_quantum_function(qf: QuantumFunction) -> SubsetIndexedQF:
    """Inverse of to_quantum_function."""
    if tuple(qf.target_labels) != (0, 1):
        raise ValueError("target labels must be (0, 1)")
    n = None
    for lab in qf.source_labels:
        if not isinstance(lab, tuple) or any(b not in (0, 1) for b in lab):
            raise ValueError("source labels must be binary tuples")
        if n is None:
            n = len(lab)
        elif len(lab) != n:
            raise ValueError("source labels have mixed lengths")
    if n is None or len(qf.source_labels) != 1 << n:
        raise ValueError("source labels must cover all binary tuples")
    mats = [None] * (1 << n)
    for lab in qf.source_labels:
        mask = sum(1 << i for i, bit in enumerate(lab) if bit)
        mats[mask] = qf.mat(lab, 1)
    return SubsetIndexedQF(n, qf.dim, tuple(mats))


def flip_dual(sqf: SubsetIndexedQF) -> SubsetIndexedQF:
    """Replace Q_S with I - Q_{complement of S}.  An involution; carries
    polymorphism families of a translate to those of the complementary
    translate and preserves contextuality."""
    full = (1 << sqf.n) - 1
    eye = QMat.identity(sqf.dim)
    return SubsetIndexedQF(sqf.n, sqf.dim,
                           tuple(eye - sqf.mats[full ^ m] for m in range(full + 1)))


def check_polys100(sqf: SubsetIndexedQF) -> list:
    """Identity suite for polymorphism families of the one-in-three
    translate by (1, 0, 0).

    The input must verify as a polymorphism family of O_100 (product
    condition only); then the following hold and any exact failure is
    reported as (identity number, S, T or None):

      1. disjoint S, T: Q_S Q_T = 0
      2. disjoint S, T: Q_(S u T) = Q_(S u T) (Q_S + Q_T)
      3. all S, T: Q_S = Q_(S u T) Q_S
      4. all S: Q_S = sum of Q_{i} over i in S
    """
    target = o_t_structure(3, "100")
    report = qhom.is_quantum_polymorphism(target, sqf.n, to_quantum_function(sqf, target),
                                          mode="nonoracular")
    if not report.verdict:
        raise ValueError("input does not verify over the one-in-three translate")
    mats = sqf.mats
    zero = QMat.zeros(sqf.dim)
    failures = []
    size = 1 << sqf.n
    for s in range(size):
        for t in range(s, size):
            if s & t == 0:
                if mats[s] @ mats[t] != zero:
                    failures.append((1, mask_subset(s), mask_subset(t)))
                u = s | t
                if mats[u] != mats[u] @ (mats[s] + mats[t]):
                    failures.append((2, mask_subset(s), mask_subset(t)))
    for s in range(size):
        for t in range(size):
            if mats[s] != mats[s | t] @ mats[s]:
                failures.append((3, mask_subset(s), mask_subset(t)))
    for s in range(size):
        acc = zero
        for i in range(sqf.n):
            if s >> i & 1:
                acc = acc + mats[1 << i]
        if mats[s] != acc:
            failures.append((4, mask_subset(s), None))
    return failures


# ---------------------------------------------------------------------------
# the three-relation structure forcing commutation
# ---------------------------------------------------------------------------

def build_b() -> Structure:
    """({0,1}; S00, S11, S10) where S_ab omits exactly the pair (a, b).
    Its classical polymorphisms are the smallest clone with majority."""
    pairs = list(itertools.product((0, 1), repeat=2))
    rels = {}
    for a, b in ((0, 0), (1, 1), (1, 0)):
        rels[f"S{a}{b}"] = [p for p in pairs if p != (a, b)]
    return build("B", (0, 1), {sym: 2 for sym in rels}, rels)


def forced_commutation_cover(n: int):
    """Unordered subset pairs (S, T) of [n] such that neither (S, T) nor
    (T, S) lies in any relation of the n-th power of the three-relation
    structure.  Projectors at such pairs escape the commutation forced
    on pairs inside a relation.  Empty for n <= 3."""
    if n < 1:
        raise ValueError("n must be positive")
    full = (1 << n) - 1
    out = []
    for s in range(full + 1):
        for t in range(s + 1, full + 1):
            # in S00^n: no common zero; S11^n: no common one; S10^n: s <= t
            if (s | t) == full or (s & t) == 0:
                continue
            if (s & ~t & full) == 0 or (t & ~s & full) == 0:
                continue
            out.append((mask_subset(s), mask_subset(t)))
    return out


def build_arity4_contextual(A: Optional[QMat] = None,
                            B: Optional[QMat] = None,
                            C: Optional[QMat] = None) -> SubsetIndexedQF:
    """A 4-ary polymorphism family of the three-relation structure:
    identity on subsets of size >= 3, A, B, C at {1,2}, {1,3}, {1,4},
    complements elsewhere.  Contextual whenever two of A, B, C fail to
    commute; the defaults use two reflections that do not."""
    if A is None:
        A = QMat(((1, 0), (0, 0)))
    if B is None:
        B = _half_plus()
    if C is None:
        C = _half_minus()
    mats = {}
    for M in (A, B, C):
        if not is_projector(M):
            raise ValueError("inputs must be projectors")
    if not (A.shape == B.shape == C.shape):
        raise ValueError("inputs must share a dimension")
    d = A.shape[0]
    eye = QMat.identity(d)
    full = 0b1111
    assigned = {0b0011: A, 0b0101: B, 0b1001: C}
    grid = [None] * 16
    for m in range(16):
        if bin(m).count("1") >= 3:
            grid[m] = eye
    for m, mat in assigned.items():
        grid[m] = mat
    for m in range(16):
        if grid[m] is None:
            grid[m] = eye - grid[full ^ m]
    return SubsetIndexedQF(4, d, tuple(grid))


def _half_plus() -> QMat:
    from fractions import Fraction
    h = Fraction(1, 2)
    return QMat(((h, h), (h, h)))


def _half_minus() -> QMat:
    from fractions import Fraction
    h = Fraction(1, 2)
    return QMat(((h, -h), (-h, h)))


# ---------------------------------------------------------------------------
# primitive-positive steps used by the translate classification
# ---------------------------------------------------------------------------

def pp_define_zero(k: int):
    """zero(a) := R(a, ..., a) over the translate of one-in-k by
    (1, 0, ..., 0); the all-equal tuple lands in the relation only at 0."""
    from .structures import PPFormula
    return PPFormula(free=("a",), bound=(), atoms=(("R", ("a",) * k),))


def pp_restrict_oneink(k: int):
    """R3(x, y, z) := exists c: R(x, y, z, c, ..., c) and zero(c), the
    arity-reduction step from k to 3 (k >= 4)."""
    from .structures import PPFormula
    if k < 4:
        raise ValueError("restriction step needs k >= 4")
    return PPFormula(free=("x", "y", "z"), bound=("c",),
                     atoms=(("R", ("x", "y", "z") + ("c",) * (k - 3)),
                            ("Z", ("c",))))


def pp_define_neq(k: int, l: int):
    """The inequality step for the translate by the weight-l prefix
    tuple, 2 <= l <= k - 2: R_t(x, ..., x, y, ..., y) with l + 1 leading
    x's.  Note the formula itself picks out exactly the pair (1, 0)
    over O_t; it stands in for inequality in the weight-lowering chain,
    where only products of equal outcomes must vanish."""
    from .structures import PPFormula
    if not 2 <= l <= k - 2:
        raise ValueError("need 2 <= l <= k - 2")
    return PPFormula(free=("x", "y"), bound=(),
                     atoms=(("R", ("x",) * (l + 1) + ("y",) * (k - l - 1)),))


def pp_define_shift(k: int):
    """R'(s1, ..., sk) := exists q: R(q, s2, ..., sk) and neq(q, s1),
    lowering the translate weight by one."""
    from .structures import PPFormula
    svars = tuple(f"s{i}" for i in range(1, k + 1))
    return PPFormula(free=svars, bound=("q",),
                     atoms=(("R", ("q",) + svars[1:]), ("N", ("q", svars[0]))))
