"""Minimal translate covers (finite syndeticity).

A set A is syndetic at scale t when t translates of A cover the core
region.  On a finite group the core is the whole carrier and all group
elements are candidate shifts.  On an integer window, translates slide
sets off the edges, so covering is demanded only on a declared core
subwindow with shifts drawn from a declared range.

``min_translate_cover`` solves minimum set cover exactly by branch and
bound (greedy-seeded, desk scale) or approximately by the standard
greedy rule; either way the certificate records, for every core
element, which translate covers it, so covers re-verify element by
element.
"""

from dataclasses import dataclass
from math import ceil

from .errors import BadCore, ModelMismatch
from .model import CayleyGroup, DenseSet, ZWindow, iter_bits, translate


@dataclass(frozen=True)
class CoverCertificate:
    translates: tuple      # chosen shifts g_1 < ... < g_t
    core: tuple            # (lo, hi) covered region
    witness_index: tuple   # for core element lo+i: index into translates
    optimal: bool          # exact branch-and-bound vs greedy
    method: str

    @property
    def t(self):
        return len(self.translates)


@dataclass(frozen=True)
class Infeasible:
    lower_bound: object        # counting bound, or exact optimum if known
    uncovered_element: object  # core element no translate reaches, or None


def _translate_sets(A, model, core, shifts):
    lo, hi = core
    core_bits = ((1 << hi) - 1) ^ ((1 << lo) - 1)
    sets = {}
    for g in shifts:
        sets[g] = translate(A, g).bits & core_bits
    return core_bits, sets


def min_translate_cover(A: DenseSet, model, core=None, shifts=None,
                        t_max=16, mode="exact"):
    """Cover the core with at most t_max translates of A.

    ZWindow models require an explicit ``core = (lo, hi)``; ``shifts``
    defaults to the symmetric range (-(hi-1), hi) but may be any
    iterable of integer shifts.  CayleyGroup models cover the whole
    group with left translates g*A over all g.

    Returns a CoverCertificate, or Infeasible carrying the counting
    lower bound ceil(|core| / max_g |gA ∩ core|) and, if some core
    element lies in no translate, that element as a failure witness.
    """
    if A.model != model:
        raise ModelMismatch("set and model disagree")
    if isinstance(model, CayleyGroup):
        core = (0, model.order)
        shift_list = list(range(model.order))
    elif isinstance(model, ZWindow):
        if core is None:
            raise BadCore("ZWindow cover needs an explicit core region")
        lo, hi = core
        if not (0 <= lo < hi <= model.carrier_size):
            raise BadCore(f"core [{lo},{hi}) not inside the carrier")
        if shifts is None:
            shift_list = list(range(-(hi - 1), hi))
        else:
            shift_list = sorted(set(int(g) for g in shifts))
    else:
        raise ModelMismatch(f"unsupported model {model!r}")

    core_bits, sets = _translate_sets(A, model, core, shift_list)
    core_size = core_bits.bit_count()

    union = 0
    max_cover = 0
    for g in shift_list:
        union |= sets[g]
        max_cover = max(max_cover, sets[g].bit_count())
    if union != core_bits:
        missing = (core_bits & ~union)
        elem = (missing & -missing).bit_length() - 1
        lb = None if max_cover == 0 else ceil(core_size / max_cover)
        return Infeasible(lower_bound=lb, uncovered_element=elem)

    counting_lb = ceil(core_size / max_cover)

    def greedy():
        chosen = []
        covered = 0
        while covered != core_bits:
            best_g, best_gain = None, 0
            for g in shift_list:
                gain = (sets[g] & ~covered).bit_count()
                if gain > best_gain:
                    best_g, best_gain = g, gain
            chosen.append(best_g)
            covered |= sets[best_g]
        return chosen

    greedy_cover = greedy()

    if mode == "greedy":
        if len(greedy_cover) > t_max:
            return Infeasible(lower_bound=counting_lb, uncovered_element=None)
        return _certificate(sorted(greedy_cover), sets, core, core_bits,
                            optimal=False, method="greedy")
    if mode != "exact":
        raise ValueError(f"unknown mode {mode!r}")

    # branch and bound, seeded by the greedy cover and capped at t_max:
    # covers longer than t_max are reported Infeasible, so there is no
    # point proving an exact optimum beyond that.
    if len(greedy_cover) <= t_max:
        best = {"size": len(greedy_cover), "cover": sorted(greedy_cover)}
    else:
        best = {"size": t_max + 1, "cover": None}
    order = sorted(shift_list)
    covers_elem = {}
    for g in order:
        for e in iter_bits(sets[g]):
            covers_elem.setdefault(e, []).append(g)

    def bound(uncovered):
        # tightest single-translate gain against what is still uncovered
        gain = max((sets[g] & uncovered).bit_count() for g in order)
        return ceil(uncovered.bit_count() / gain)

    def bnb(chosen, covered):
        if covered == core_bits:
            if len(chosen) < best["size"] or (
                len(chosen) == best["size"]
                and (best["cover"] is None or sorted(chosen) < best["cover"])
            ):
                best["size"] = len(chosen)
                best["cover"] = sorted(chosen)
            return
        if len(chosen) + bound(core_bits & ~covered) > best["size"]:
            return
        if len(chosen) + 1 > best["size"]:
            return
        # branch on the uncovered element with the fewest covering translates
        uncovered = core_bits & ~covered
        elem, options = None, None
        for e in iter_bits(uncovered):
            opts = covers_elem[e]
            if options is None or len(opts) < len(options):
                elem, options = e, opts
                if len(opts) == 1:
                    break
        for g in options:
            if g in chosen:
                continue
            chosen.append(g)
            bnb(chosen, covered | sets[g])
            chosen.pop()

    bnb([], 0)
    if best["cover"] is None or best["size"] > t_max:
        # the exhaustive search found no cover of size <= t_max
        return Infeasible(lower_bound=max(counting_lb, t_max + 1),
                          uncovered_element=None)

    # lexicographically least optimal cover, for thread-independent output
    t_star = best["size"]
    final = _lex_min_cover(order, sets, core_bits, t_star, best["cover"])
    return _certificate(final, sets, core, core_bits, optimal=True, method="exact")


def _exists_cover(order, sets, core_bits, fixed, covered, size_limit, covers_left):
    """Is there a cover of <= size_limit translates extending ``fixed``?"""
    if covered == core_bits:
        return True
    if size_limit == 0:
        return False
    uncovered = core_bits & ~covered
    gain = max((sets[g] & uncovered).bit_count() for g in order)
    if gain == 0 or -(-uncovered.bit_count() // gain) > size_limit:
        return False
    elem, options = None, None
    for e in iter_bits(uncovered):
        opts = covers_left[e]
        if options is None or len(opts) < len(options):
            elem, options = e, opts
            if len(opts) <= 1:
                break
    for g in options:
        if g in fixed:
            continue
        if _exists_cover(order, sets, core_bits, fixed + [g],
                         covered | sets[g], size_limit - 1, covers_left):
            return True
    return False


def _lex_min_cover(order, sets, core_bits, t_star, fallback):
    covers_left = {}
    for g in order:
        for e in iter_bits(sets[g]):
            covers_left.setdefault(e, []).append(g)
    chosen = []
    covered = 0
    for _ in range(t_star):
        for g in order:
            if g in chosen:
                continue
            if _exists_cover(order, sets, core_bits, chosen + [g],
                             covered | sets[g], t_star - len(chosen) - 1,
                             covers_left):
                chosen.append(g)
                covered |= sets[g]
                break
        else:
            return sorted(fallback)  # should not happen; keep a valid cover
        if covered == core_bits:
            break
    return chosen if covered == core_bits else sorted(fallback)


def _certificate(chosen, sets, core, core_bits, optimal, method):
    lo, hi = core
    witness = []
    for e in range(lo, hi):
        if not (core_bits >> e) & 1:
            witness.append(-1)
            continue
        for idx, g in enumerate(chosen):
            if (sets[g] >> e) & 1:
                witness.append(idx)
                break
    return CoverCertificate(tuple(chosen), core, tuple(witness),
                            optimal=optimal, method=method)


def verify_cover(cert: CoverCertificate, A: DenseSet, model) -> bool:
    """Element-by-element recheck of a cover certificate."""
    if A.model != model:
        raise ModelMismatch("set and model disagree")
    lo, hi = cert.core
    if not (0 <= lo < hi <= model.carrier_size):
        return False
    if len(cert.witness_index) != hi - lo:
        return False
    tsets = [translate(A, g).bits for g in cert.translates]
    for offset, idx in enumerate(cert.witness_index):
        e = lo + offset
        if not (0 <= idx < len(tsets)):
            return False
        if not (tsets[idx] >> e) & 1:
            return False
    return True


def counting_lower_bound(A: DenseSet, model, core, shifts=None) -> int:
    """ceil(|core| / max_g |gA ∩ core|), a lower bound on any cover size."""
    if isinstance(model, CayleyGroup):
        core = (0, model.order)
        shift_list = list(range(model.order))
    else:
        lo, hi = core
        shift_list = (list(range(-(hi - 1), hi)) if shifts is None
                      else sorted(set(int(g) for g in shifts)))
    core_bits, sets = _translate_sets(A, model, core, shift_list)
    best = max((s.bit_count() for s in sets.values()), default=0)
    if best == 0:
        raise BadCore("no translate meets the core")
    return ceil(core_bits.bit_count() / best)
