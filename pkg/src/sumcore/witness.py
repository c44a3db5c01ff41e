"""Productset witnesses: square, triangular, greedy, Ramsey, definable.

The central objects are

* ``SquareWitness``      B, C with every product b*c in A (|B| = |C| = k);
* ``TriangularWitness``  sequences with b_i*c_j in A for i <= j only;
* ``ramsey_upgrade``     a greedy pivot-walk that turns a triangular
  witness into either a square witness or an order-property ladder by
  extracting a color-homogeneous index set from the below-diagonal
  pairs, with the usual (1/2) log2 size guarantee;
* ``definable_witness_search``  witnesses drawn from parameterized
  arithmetic families (intervals / progressions) instead of arbitrary
  element sets.

Exact searches are canonical: the witness returned is lexicographically
least (B extended before C), so outcomes are reproducible and
independent of any internal parallelism.
"""

from dataclasses import dataclass

import numpy as np

from .errors import InvalidInput, ModelMismatch
from .ladder import LadderCertificate
from .model import DenseSet, ZWindow, iter_bits, quotient
from .setspec import splitmix_stream


@dataclass(frozen=True)
class SquareWitness:
    b: tuple
    c: tuple

    @property
    def k(self):
        return len(self.b)


@dataclass(frozen=True)
class TriangularWitness:
    b: tuple
    c: tuple

    @property
    def m(self):
        return len(self.b)


@dataclass(frozen=True)
class NotFound:
    exhaustive: bool


@dataclass(frozen=True)
class Stuck:
    """Greedy non-answer: the partial witness when a candidate pool emptied."""

    b: tuple
    c: tuple


@dataclass(frozen=True)
class FamilyDescriptor:
    start: int
    step: int
    length: int

    def elements(self):
        return tuple(self.start + i * self.step for i in range(self.length))


@dataclass(frozen=True)
class DefinableWitness:
    family: str  # "intervals" or "aps"
    theta1: FamilyDescriptor
    theta2: FamilyDescriptor

    @property
    def set1(self):
        return self.theta1.elements()

    @property
    def set2(self):
        return self.theta2.elements()


@dataclass(frozen=True)
class UpgradeResult:
    tag: str        # "square" or "ladder"
    indices: tuple  # homogeneous index set I (0-based positions into tri)
    square: object  # SquareWitness when tag == "square"
    ladder: object  # LadderCertificate when tag == "ladder"


class _Budget:
    __slots__ = ("left", "exhausted")

    def __init__(self, limit):
        self.left = limit
        self.exhausted = False

    def spend(self):
        if self.left is None:
            return True
        if self.left <= 0:
            self.exhausted = True
            return False
        self.left -= 1
        return True


def _left_q(A, b, domain, cache):
    # ZWindow quotients are single shifts; caching would only cost memory
    if isinstance(A.model, ZWindow):
        return (A.bits >> b) & domain
    if b not in cache:
        cache[b] = quotient(A, b, "left").bits & domain
    return cache[b]


def _right_q(A, c, domain, cache):
    if isinstance(A.model, ZWindow):
        return (A.bits >> c) & domain
    if c not in cache:
        cache[c] = quotient(A, c, "right").bits & domain
    return cache[c]


# When the surviving pool is small, any further b must hit it, so the
# candidates are confined to the union of right quotients of the pool
# members.  This turns exhaustive refutations on sparse sets (powers of
# two and the like) from quadratic scans into near-linear ones.
_POOL_UNION_LIMIT = 64


def _pool_union(A, pool, domain, rcache):
    cand = 0
    for c in iter_bits(pool):
        cand |= _right_q(A, c, domain, rcache)
    return cand


def _smallest_k(bits, k):
    out = []
    for i in iter_bits(bits):
        out.append(i)
        if len(out) == k:
            break
    return tuple(out)


# --- square witnesses ---------------------------------------------------------


def find_square_witness(A: DenseSet, model, k: int, mode="exact", budget=None):
    """Search for B, C of size k with B*C inside A.

    Exact mode extends B one element at a time in increasing order,
    maintaining the surviving candidate pool for C as the intersection
    of left quotients; it prunes as soon as the pool drops below k.  The
    first complete B is lexicographically least, and C is then the k
    smallest pool elements.  With sufficient budget the outcome is a
    witness or ``NotFound(exhaustive=True)``.

    Heuristic mode delegates to the greedy back-and-forth construction
    and never claims exhaustiveness.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if mode == "heuristic":
        res = greedy_back_and_forth(A, model, k)
        if isinstance(res, SquareWitness):
            return res
        return NotFound(exhaustive=False)
    if mode != "exact":
        raise ValueError(f"unknown mode {mode!r}")

    domain = model.operand_mask
    if domain.bit_count() < k:
        return NotFound(exhaustive=True)
    bud = _Budget(budget)
    lcache = {}
    rcache = {}

    def extend(chosen, pool, min_next):
        """DFS over increasing b's; pool = surviving C candidates."""
        if len(chosen) == k:
            return SquareWitness(tuple(chosen), _smallest_k(pool, k))
        cand = (domain >> min_next) << min_next
        if chosen and pool.bit_count() <= _POOL_UNION_LIMIT:
            cand &= _pool_union(A, pool, domain, rcache)
        for b in iter_bits(cand):
            if not bud.spend():
                return None
            np_ = pool & _left_q(A, b, domain, lcache)
            if np_.bit_count() < k:
                continue
            chosen.append(b)
            got = extend(chosen, np_, b + 1)
            chosen.pop()
            if got is not None or bud.exhausted:
                return got
        return None

    got = extend([], domain, 0)
    if got is not None:
        return got
    return NotFound(exhaustive=not bud.exhausted)


def verify_square_witness(w: SquareWitness, A: DenseSet, model) -> bool:
    """Direct product enumeration check."""
    if A.model != model:
        raise ModelMismatch("set and model disagree")
    k = len(w.b)
    if k == 0 or len(w.c) != k:
        return False
    if len(set(w.b)) != k or len(set(w.c)) != k:
        return False
    domain = model.operand_mask
    if any(not (domain >> x) & 1 for x in w.b + w.c):
        return False
    if isinstance(model, ZWindow) and k > 64:
        # operands below L keep every sum inside the carrier
        bs = np.asarray(w.b, dtype=np.int64)
        cs = np.asarray(w.c, dtype=np.int64)
        return bool(A.to_numpy()[bs[:, None] + cs[None, :]].all())
    for b in w.b:
        for c in w.c:
            prod = model.op(b, c)
            if prod is None or not A.contains(prod):
                return False
    return True


# --- triangular witnesses -----------------------------------------------------


def find_triangular_witness(A: DenseSet, model, m: int, scorer=None, budget=None):
    """Witness with b_i * c_j in A for all i <= j (nothing below diagonal).

    With ``scorer`` set, delegates to the scorer-guided greedy (a square
    witness is a fortiori triangular; Stuck maps to a non-exhaustive
    NotFound).  Otherwise runs an exact backtracking search: the b's are
    chosen first, tracking the nested pools P_j = ∩_{i<=j} {c : b_i*c in A};
    by a Hall argument over nested pools, distinct c's exist iff
    |P_j| >= m - j for every j, so the c-phase rarely backtracks.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    if scorer is not None:
        res = greedy_back_and_forth(A, model, m, scorer=scorer)
        if isinstance(res, SquareWitness):
            return TriangularWitness(res.b, res.c)
        return NotFound(exhaustive=False)

    domain = model.operand_mask
    bud = _Budget(budget)
    lcache = {}
    rcache = {}

    def pick_cs(pools, used, acc):
        j = len(acc)
        if j == m:
            return tuple(acc)
        # Hall feasibility over the remaining nested pools
        for t in range(j, m):
            if (pools[t] & ~used).bit_count() < m - t:
                return None
        for c in iter_bits(pools[j] & ~used):
            if not bud.spend():
                return None
            acc.append(c)
            got = pick_cs(pools, used | (1 << c), acc)
            acc.pop()
            if got is not None or bud.exhausted:
                return got
        return None

    def extend(bs, pools, used_b):
        i = len(bs)
        if i == m:
            got = pick_cs(pools, 0, [])
            if got is None:
                return None
            return TriangularWitness(tuple(bs), got)
        prev = pools[-1] if pools else domain
        if i > 0 and prev.bit_count() <= _POOL_UNION_LIMIT:
            cand = _pool_union(A, prev, domain, rcache) & domain & ~used_b
        else:
            cand = domain & ~used_b
        for b in iter_bits(cand):
            if not bud.spend():
                return None
            np_ = prev & _left_q(A, b, domain, lcache)
            if np_.bit_count() < m - i:
                continue
            bs.append(b)
            pools.append(np_)
            got = extend(bs, pools, used_b | (1 << b))
            bs.pop()
            pools.pop()
            if got is not None or bud.exhausted:
                return got
        return None

    got = extend([], [], 0)
    if got is not None:
        return got
    return NotFound(exhaustive=not bud.exhausted)


def verify_triangular_witness(w: TriangularWitness, A: DenseSet, model) -> bool:
    if A.model != model:
        raise ModelMismatch("set and model disagree")
    m = len(w.b)
    if m == 0 or len(w.c) != m:
        return False
    if len(set(w.b)) != m or len(set(w.c)) != m:
        return False
    domain = model.operand_mask
    if any(not (domain >> x) & 1 for x in w.b + w.c):
        return False
    if isinstance(model, ZWindow) and m > 64:
        # vectorized check for large witnesses
        bs = np.asarray(w.b, dtype=np.int64)
        cs = np.asarray(w.c, dtype=np.int64)
        prods = bs[:, None] + cs[None, :]
        mem = A.to_numpy()[prods]
        iu = np.triu_indices(m)
        return bool(mem[iu].all())
    for i, b in enumerate(w.b):
        for j in range(i, m):
            prod = model.op(b, w.c[j])
            if prod is None or not A.contains(prod):
                return False
    return True


# --- greedy back-and-forth ----------------------------------------------------


def greedy_back_and_forth(A: DenseSet, model, k: int, scorer="pool_size", seed=0):
    """Alternating greedy construction of a square witness.

    The b-pool is the intersection of right quotients of the chosen c's,
    the c-pool the intersection of left quotients of the chosen b's
    (each minus already-chosen elements).  The scorer replaces the
    selection rule of the underlying existence proof, which offers no
    effective choice:

    * ``pool_size``        pick the element keeping the opposite pool largest;
    * ``density_weighted`` like pool_size but count only pool members in A;
    * ``random``           uniform pick from the current pool (seeded).

    Ties break toward the smallest element.  Returns ``Stuck`` with the
    partial witness when a pool empties; Stuck does NOT imply that no
    witness exists.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    domain = model.operand_mask
    lcache = {}
    rcache = {}
    rng = splitmix_stream(seed) if scorer == "random" else None

    def pick(pool, opposite, quot):
        if scorer == "random":
            size = pool.bit_count()
            r = next(rng) % size
            for i, g in enumerate(iter_bits(pool)):
                if i == r:
                    return g
        best_g, best_score = -1, -1
        for g in iter_bits(pool):
            surviving = opposite & quot(g)
            if scorer == "pool_size":
                score = surviving.bit_count()
            elif scorer == "density_weighted":
                score = (surviving & A.bits).bit_count()
            else:
                raise ValueError(f"unknown scorer {scorer!r}")
            if score > best_score:
                best_g, best_score = g, score
        return best_g

    bs, cs = [], []
    pool_b, pool_c = domain, domain
    used_b, used_c = 0, 0
    for _ in range(k):
        avail_b = pool_b & ~used_b
        if not avail_b:
            return Stuck(tuple(bs), tuple(cs))
        b = pick(avail_b, pool_c & ~used_c, lambda g: _left_q(A, g, domain, lcache))
        bs.append(b)
        used_b |= 1 << b
        pool_c &= _left_q(A, b, domain, lcache)

        avail_c = pool_c & ~used_c
        if not avail_c:
            return Stuck(tuple(bs), tuple(cs))
        c = pick(avail_c, pool_b & ~used_b, lambda g: _right_q(A, g, domain, rcache))
        cs.append(c)
        used_c |= 1 << c
        pool_b &= _right_q(A, c, domain, rcache)
    return SquareWitness(tuple(bs), tuple(cs))


# --- Ramsey upgrade -----------------------------------------------------------


def ramsey_upgrade(tri: TriangularWitness, A: DenseSet, model) -> UpgradeResult:
    """Extract a homogeneous index set from the below-diagonal coloring.

    Pairs i > j are 2-colored by whether b_i * c_j lands in A.  A pivot
    walk builds a chain: the smallest remaining index becomes a pivot
    labelled with the majority color of the pairs it forms with the rest,
    and the walk recurses into that majority class.  Chain elements of
    the majority label (plus the final unlabelled pivot) form the
    homogeneous set I, of size at least floor(log2(m)/2).

    Homogeneous color "in A" gives a full square witness on I (pairs on
    or above the diagonal are already in A); color "not in A" gives an
    order-property ladder restricted to I.
    """
    if not verify_triangular_witness(tri, A, model):
        raise InvalidInput("input does not verify as a triangular witness")
    m = tri.m

    if isinstance(model, ZWindow) and m > 64:
        # vectorized coloring: one membership gather per pivot level
        bs_arr = np.asarray(tri.b, dtype=np.int64)
        cs_arr = np.asarray(tri.c, dtype=np.int64)
        mem = A.to_numpy()

        def colors_of(pivot, others):
            return mem[bs_arr[others] + cs_arr[pivot]]
    else:
        def colors_of(pivot, others):
            c = tri.c[pivot]
            return [A.contains(model.op(tri.b[i], c)) for i in others]

    chain = []        # (index, label) pairs; label None for the last pivot
    rest = list(range(m))
    while rest:
        pivot = rest[0]
        others = rest[1:]
        if not others:
            chain.append((pivot, None))
            break
        flags = colors_of(pivot, others)
        hot = [i for i, f in zip(others, flags) if f]
        cold = [i for i, f in zip(others, flags) if not f]
        if len(hot) >= len(cold):
            chain.append((pivot, True))
            rest = hot
        else:
            chain.append((pivot, False))
            rest = cold

    labelled = [(i, lab) for i, lab in chain if lab is not None]
    hot_count = sum(1 for _, lab in labelled if lab)
    cold_count = len(labelled) - hot_count
    take_hot = hot_count >= cold_count
    indices = [i for i, lab in labelled if lab == take_hot]
    tail_i, tail_lab = chain[-1]
    if tail_lab is None:
        indices.append(tail_i)
    indices = tuple(sorted(indices))

    bs = tuple(tri.b[i] for i in indices)
    cs = tuple(tri.c[i] for i in indices)
    if take_hot:
        return UpgradeResult("square", indices, SquareWitness(bs, cs), None)
    return UpgradeResult("ladder", indices, None, LadderCertificate(bs, cs))


def verify_upgrade(res: UpgradeResult, A: DenseSet, model) -> bool:
    from .ladder import verify_ladder

    if res.tag == "square":
        return verify_square_witness(res.square, A, model)
    if res.tag == "ladder":
        return verify_ladder(res.ladder, A, model)
    return False


# --- definable witnesses --------------------------------------------------------


def definable_witness_search(A: DenseSet, model, family, n: int,
                             budget=None, step_max=None):
    """Witness search restricted to arithmetic families.

    ``family`` is ``"intervals"`` (contiguous runs) or ``"aps"``
    (arithmetic progressions with step up to ``step_max``).  Both sides
    use length exactly n; parameters are scanned in canonical order
    (step1, start1, step2, start2 ascending) so the first hit is
    deterministic.  Only ZWindow models are supported: the families are
    arithmetic.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if not isinstance(model, ZWindow):
        raise ModelMismatch("definable families require a ZWindow model")
    if family == "intervals":
        steps = [1]
    elif family == "aps":
        if step_max is None:
            step_max = 64
        steps = list(range(1, step_max + 1))
    else:
        raise ValueError(f"unknown family {family!r}")

    L = model.operand_bound
    bud = _Budget(budget)
    domain = model.operand_mask

    # Parameters scan in canonical order (step1, start1, step2, start2).
    # For each left progression, the survivors V = ∩_i (A - (s1 + i*d1))
    # are computed once as a bitset; the right progression must start
    # inside V, which keeps the inner scan near-linear.
    for d1 in steps:
        span1 = (n - 1) * d1
        if span1 >= L:
            break
        for s1 in range(L - span1):
            if not bud.spend():
                return NotFound(exhaustive=False)
            V = domain
            for i in range(n):
                V &= A.bits >> (s1 + i * d1)
                if V.bit_count() < n:
                    break
            if V.bit_count() < n:
                continue
            for d2 in steps:
                span2 = (n - 1) * d2
                if span2 >= L:
                    break
                for s2 in iter_bits(V):
                    if s2 + span2 >= L:
                        break
                    if not bud.spend():
                        return NotFound(exhaustive=False)
                    if all((V >> (s2 + j * d2)) & 1 for j in range(1, n)):
                        return DefinableWitness(
                            family,
                            FamilyDescriptor(s1, d1, n),
                            FamilyDescriptor(s2, d2, n),
                        )
    return NotFound(exhaustive=True)


def verify_definable_witness(w: DefinableWitness, A: DenseSet, model) -> bool:
    if not isinstance(model, ZWindow) or A.model != model:
        raise ModelMismatch("definable witnesses live over ZWindow models")
    t1, t2 = w.theta1, w.theta2
    if t1.length < 1 or t2.length < 1 or t1.step < 1 or t2.step < 1:
        return False
    for x in t1.elements():
        for y in t2.elements():
            prod = model.op(x, y)
            if prod is None or not A.contains(prod):
                return False
    return True


# --- growth curve ---------------------------------------------------------------


@dataclass(frozen=True)
class GrowthPoint:
    k: int
    found: bool
    witness: object  # SquareWitness or None
    exhaustive: bool


def growth_curve(A: DenseSet, model, k_max: int, mode="exact", budget=None):
    """find_square_witness at each k = 1..k_max.

    The found-column is monotone: any witness at k restricts to one at
    every smaller k, so after the first exhaustive NotFound the
    remaining entries are filled without searching.
    """
    if k_max < 1:
        raise ValueError("k_max must be >= 1")
    out = []
    dead = False
    for k in range(1, k_max + 1):
        if dead:
            out.append(GrowthPoint(k, False, None, True))
            continue
        res = find_square_witness(A, model, k, mode=mode, budget=budget)
        if isinstance(res, SquareWitness):
            out.append(GrowthPoint(k, True, res, True))
        else:
            out.append(GrowthPoint(k, False, None, res.exhaustive))
            if res.exhaustive:
                dead = True
    return out
