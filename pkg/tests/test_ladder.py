import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sumcore import (
    DenseSet,
    LadderCertificate,
    ModelMismatch,
    Multiples,
    Threshold,
    build_model,
    cyclic_table,
    generate_set,
    max_ladder,
    verify_ladder,
)

from .oracles import brute_max_ladder


def zw(M, L):
    return build_model({"kind": "zwindow", "M": M, "L": L})


def zn(n):
    return build_model({"kind": "cayley", "table": [list(r) for r in cyclic_table(n)]})


class TestMaxLadder:
    def test_empty_set(self):
        m = zw(100, 50)
        A = DenseSet(m, 0)
        res = max_ladder(A, m, 3)
        assert res.k == 0
        assert res.certificate is None

    def test_multiples3_is_one(self):
        # k=2 is impossible: three sums divisible by 3 force the fourth
        m = zw(300, 150)
        A = generate_set(m, Multiples(3))
        res = max_ladder(A, m, 2)
        assert res.k == 1
        assert not res.lower_bound_only
        assert verify_ladder(res.certificate, A, m)

    def test_threshold_reaches_kmax(self):
        m = zw(256, 128)
        A = generate_set(m, Threshold(64))
        res = max_ladder(A, m, 8)
        assert res.k == 8
        assert verify_ladder(res.certificate, A, m)
        # frozen canonical certificate
        assert res.certificate == LadderCertificate(
            (127, 63, 62, 61, 60, 59, 58, 57), (0, 1, 2, 3, 4, 5, 6, 7))

    def test_budget_exhaustion_flagged(self):
        m = zw(300, 150)
        A = generate_set(m, Multiples(3))
        res = max_ladder(A, m, 2, budget=10)
        assert res.lower_bound_only
        assert res.k <= 1

    def test_monotone_in_kmax(self):
        m = zw(256, 128)
        A = generate_set(m, Threshold(64))
        ks = [max_ladder(A, m, k_max).k for k_max in (1, 2, 4, 6)]
        assert ks == sorted(ks)

    def test_oracle_equivalence_groups(self):
        # exhaustive over all subsets of Z_n for small n, k <= 3
        for n in (3, 4, 5):
            m = zn(n)
            for bits in range(1 << n):
                A = DenseSet(m, bits)
                got = max_ladder(A, m, 3)
                assert not got.lower_bound_only
                assert got.k == brute_max_ladder(A, m, 3), (n, bits)

    def test_oracle_equivalence_larger_groups_sampled(self):
        import random

        rng = random.Random(7)
        for n in (6, 7, 8):
            m = zn(n)
            for _ in range(25):
                A = DenseSet(m, rng.getrandbits(n))
                assert max_ladder(A, m, 3).k == brute_max_ladder(A, m, 3)

    @given(st.integers(1, 2 ** 12 - 1))
    @settings(max_examples=60, deadline=None)
    def test_oracle_equivalence_zwindow(self, bits):
        m = zw(12, 6)
        A = DenseSet(m, bits)
        got = max_ladder(A, m, 3)
        assert got.k == brute_max_ladder(A, m, 3)
        if got.certificate is not None:
            assert verify_ladder(got.certificate, A, m)

    def test_coset_stability(self):
        # cosets of subgroups have equal-or-disjoint translates, which
        # rules out any 2-ladder
        for n in range(2, 13):
            m = zn(n)
            for d in range(1, n + 1):
                if n % d:
                    continue
                for g in range(d):
                    A = DenseSet.from_members(m, [(g + h) % n for h in range(0, n, d)])
                    assert max_ladder(A, m, 3).k <= 1

    def test_general_coset_union_can_climb(self):
        # a union of two cosets of {0,4} in Z_8 carries a 2-ladder, so
        # the stability guarantee is really about single cosets
        m = zn(8)
        A = DenseSet.from_members(m, [0, 1, 4, 5])
        res = max_ladder(A, m, 3)
        assert res.k == 2
        assert verify_ladder(res.certificate, A, m)


class TestVerifyLadder:
    def test_round_trip(self):
        m = zw(256, 128)
        A = generate_set(m, Threshold(64))
        res = max_ladder(A, m, 3)
        assert verify_ladder(res.certificate, A, m)

    def test_swap_breaks_pattern(self):
        m = zw(256, 128)
        A = generate_set(m, Threshold(64))
        cert = max_ladder(A, m, 3).certificate
        b = list(cert.b)
        b[0], b[1] = b[1], b[0]
        assert not verify_ladder(LadderCertificate(tuple(b), cert.c), A, m)

    def test_k1_vacuous(self):
        m = zw(100, 50)
        A = DenseSet.from_members(m, [10])
        assert verify_ladder(LadderCertificate((3,), (7,)), A, m)

    def test_distinctness_required(self):
        m = zw(100, 50)
        A = DenseSet.from_members(m, range(100))
        assert not verify_ladder(LadderCertificate((1, 1), (2, 3)), A, m)

    def test_out_of_carrier_raises(self):
        m = zw(100, 50)
        A = DenseSet.from_members(m, [10])
        with pytest.raises(ModelMismatch):
            verify_ladder(LadderCertificate((120,), (0,)), A, m)

    def test_length_mismatch(self):
        m = zw(100, 50)
        A = DenseSet.from_members(m, range(100))
        assert not verify_ladder(LadderCertificate((1, 2), (3,)), A, m)
