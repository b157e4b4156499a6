import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, strategies as st

from paretosub import (
    GuaranteeSpec,
    NumericDomainError,
    chernoff_tail,
    guarantee_ratio,
    h_value,
    m_value,
    q_index,
    t_bound_bpo,
    t_bound_bposc,
    t_bound_kbpo,
    t_bound_po,
    t_bound_posc,
)
from paretosub.bounds import all_bounds

mp.mp.dps = 60
e = mp.e


def ln_inv(x):
    return mp.log(1 / mp.mpf(x))


def ulp_close(got, exact):
    return abs(mp.mpf(got) - exact) <= mp.mpf(math.ulp(float(exact)))


# high-precision references, evaluated on the same float inputs
def ref_po(n, P, eps):
    return int(mp.ceil(max(2 * e * n * P, 8 * e * n * P * ln_inv(eps))))


def ref_M(P, xi):
    return max(1, int(mp.ceil(mp.log(P) / ln_inv(xi))))


def ref_bpo(n, P, p, eps, xi):
    M = ref_M(P, xi)
    return int(mp.ceil(max(2 * e * ln_inv(eps) / mp.mpf(p) * n * M, 8 / mp.mpf(p) * mp.log(n) * M)))


def ref_kbpo(n, p, eps):
    return int(mp.ceil(max(2 * e * n * ln_inv(eps) / mp.mpf(p), 8 * mp.log(n) / mp.mpf(p))))


def ref_posc(n, delta):
    return int(mp.ceil(8 * e * n * n * ln_inv(delta)))


def ref_bposc(n, P, p, eps, xi, delta):
    M = ref_M(P, xi)
    a = 2 * e * n * ln_inv(delta) * ln_inv(eps) * M / (mp.mpf(xi) * mp.mpf(p) * (1 - mp.mpf(eps)))
    return int(mp.ceil(max(a, 8 * e * mp.log(n) * M / mp.mpf(p))))


class TestIterationBounds:
    def test_po(self):
        assert t_bound_po(10, 5, 0.5) == ref_po(10, 5, 0.5) == 754
        assert t_bound_po(1, 1, 0.5) == ref_po(1, 1, 0.5) == 16

    def test_po_balanced(self):
        eps = math.exp(-0.25)
        assert float(8 * e * 50 * ln_inv(eps)) == pytest.approx(float(2 * e * 50), rel=1e-14)
        assert t_bound_po(10, 5, eps) == math.ceil(2 * math.e * 50)

    def test_bpo(self):
        assert m_value(100, 0.5) == 7
        assert t_bound_bpo(100, 100, 0.5, 0.1, 0.5) == ref_bpo(100, 100, 0.5, 0.1, 0.5) == 17526

    def test_bpo_p_scaling(self):
        half = 2 * math.e * math.log(10) / 0.5 * 100 * 7
        full = 2 * math.e * math.log(10) / 1.0 * 100 * 7
        assert full == pytest.approx(half / 2)
        assert t_bound_bpo(100, 100, 1.0, 0.1, 0.5) == math.ceil(full)

    def test_bpo_rejects_xi_one(self):
        with pytest.raises(NumericDomainError):
            t_bound_bpo(10, 5, 0.5, 0.1, 1.0)

    def test_kbpo(self):
        assert t_bound_kbpo(100, 0.5, 0.1) == ref_kbpo(100, 0.5, 0.1) == 2504
        assert t_bound_kbpo(3, 1.0, 0.99) == ref_kbpo(3, 1.0, 0.99) == 9
        assert t_bound_kbpo(1, 1.0, math.exp(-1)) == 6

    def test_posc(self):
        assert t_bound_posc(10, 0.5) == ref_posc(10, 0.5) == 1508
        assert t_bound_posc(10, 1.0) == 0
        assert t_bound_posc(1, math.exp(-1)) == 22

    def test_bposc(self):
        assert m_value(10, 0.5) == 4
        assert t_bound_bposc(10, 10, 0.5, 0.2, 0.5, 0.5) == ref_bposc(10, 10, 0.5, 0.2, 0.5, 0.5) == 1213
        assert t_bound_bposc(10, 10, 0.5, 0.2, 0.5, 1.0) == math.ceil(8 * math.e * math.log(10) * 4 / 0.5)

    @pytest.mark.parametrize("bad", [dict(eps=1.0), dict(xi=0.0), dict(p=0.0), dict(p=1.5)])
    def test_bposc_domain(self, bad):
        args = dict(n=10, P=10, p=0.5, eps=0.2, xi=0.5, delta=0.5)
        args.update(bad)
        with pytest.raises(NumericDomainError):
            t_bound_bposc(**args)


class TestScheduleConstants:
    def test_m(self):
        assert m_value(100, 0.5) == 7
        assert m_value(100, 0.1) == 2
        assert m_value(1, 0.5) == 1

    def test_h(self):
        h = h_value(1, math.exp(-1), 0.5)
        assert ulp_close(h, e * ln_inv(math.exp(-1)) / mp.mpf(0.5))
        assert h == pytest.approx(5.43656, abs=1e-5)

    def test_q(self):
        q = q_index(100, 0.5, 10)
        assert q == 4 and 0.5 ** 4 * 100 < 10 <= 0.5 ** 3 * 100

    def test_q_domain(self):
        with pytest.raises(NumericDomainError):
            q_index(10, 0.5, 11)

    @pytest.mark.parametrize("xi", [0.3, 0.5, 0.7])
    def test_q_brackets_size_exhaustively(self, xi):
        for P in range(2, 201):
            M = m_value(P, xi)
            for size in range(2, P + 1):
                q = q_index(P, xi, size)
                assert 1 <= q <= M
                assert xi ** q * P < size <= xi ** (q - 1) * P


class TestRatios:
    def test_po(self):
        r = guarantee_ratio(GuaranteeSpec("PO", eps=0.1))
        assert ulp_close(r, (1 - mp.mpf(0.1)) * (1 - 1 / e))
        assert r == pytest.approx(0.568909, abs=1e-6)

    def test_bpo(self):
        r = guarantee_ratio(GuaranteeSpec("BPO", eps=0.1))
        assert ulp_close(r, (1 - mp.mpf(0.1)) * (1 - 1 / e - mp.mpf(0.1)))
        assert r == pytest.approx(0.478909, abs=1e-6)

    def test_gamma_one_is_submodular(self):
        assert guarantee_ratio(GuaranteeSpec("PO", eps=0.2, gamma=1.0)) == \
            pytest.approx((1 - 0.2) * (1 - 1 / math.e), rel=1e-15)
        assert guarantee_ratio(GuaranteeSpec("PO", eps=0.2, gamma=0.5)) < \
            guarantee_ratio(GuaranteeSpec("PO", eps=0.2))

    def test_cover_weaker_form(self):
        assert guarantee_ratio(GuaranteeSpec("POSC", delta=0.5)) == 0.25
        assert guarantee_ratio(GuaranteeSpec("BPOSC", delta=0.1, n=5)) == pytest.approx(0.8 * 0.9)

    def test_baselines(self):
        assert guarantee_ratio(GuaranteeSpec("GREEDY")) == pytest.approx(1 - 1 / math.e)
        assert guarantee_ratio(GuaranteeSpec("SG", eps=0.2)) == pytest.approx(1 - 1 / math.e - 0.2)

    def test_vacuous(self):
        with pytest.raises(NumericDomainError):
            guarantee_ratio(GuaranteeSpec("BPO", eps=0.7))
        with pytest.raises(NumericDomainError):
            guarantee_ratio(GuaranteeSpec("PO"))


class TestChernoff:
    def test_one_over_ten(self):
        rho = 8 * math.log(10) / 100
        got = chernoff_tail(100, rho, 0.5)
        assert ulp_close(got, mp.e ** (-mp.mpf(0.25) * 100 * mp.mpf(rho) / 2))
        assert got == pytest.approx(0.1, rel=1e-14)

    def test_vacuous(self):
        assert chernoff_tail(50, 0.0, 0.5) == 1.0

    def test_e_inverse(self):
        got = chernoff_tail(8, 1.0, 0.5)
        assert ulp_close(got, mp.e ** -1) and got == pytest.approx(0.367879, abs=1e-6)

    @given(st.integers(0, 10**6), st.floats(0, 1), st.floats(1e-3, 10))
    def test_range(self, T, rho, eta):
        assert 0.0 <= chernoff_tail(T, rho, eta) <= 1.0


def test_all_bounds_po():
    out = all_bounds(GuaranteeSpec("po", n=10, P=5, eps=0.5))
    assert out["T"] == 754 and out["ratio"] == pytest.approx(0.5 * (1 - 1 / math.e))


def test_ratio_in_unit_interval_on_grid():
    rng = np.random.default_rng(0)
    for _ in range(2000):
        algo = rng.choice(["PO", "BPO", "KBPO", "POSC", "BPOSC", "GREEDY", "SG"])
        spec = GuaranteeSpec(str(algo), n=int(rng.integers(2, 100)), eps=float(rng.uniform(0.01, 0.99)),
                             delta=float(rng.uniform(0.01, 0.99)), gamma=float(rng.uniform(0.01, 1)))
        try:
            r = guarantee_ratio(spec)
        except NumericDomainError:
            continue
        assert 0.0 < r < 1.0
