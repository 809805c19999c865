import numpy as np
import pytest
from scipy.integrate import quad

from moltwave import (SweepLine, direct_convolve, fast_convolve,
                      local_integrals, local_weights, make_params)
from moltwave.errors import NonPositiveNu


def kernel_moment(nu, g):
    """Oracle: nu * int_0^1 g(s) exp(-nu*s) ds by adaptive quadrature."""
    return nu * quad(lambda s: g(s) * np.exp(-nu * s), 0.0, 1.0, limit=200)[0]


class TestLocalWeights:
    def test_frozen_values_nu1(self):
        # closed forms evaluated in extended precision
        p, q, r = local_weights(1.0)
        assert p == pytest.approx(0.36787944117144233, abs=1e-15)
        assert q == pytest.approx(0.26424111765711533, abs=1e-15)
        assert r == pytest.approx(-0.05181916175716348, abs=1e-15)

    def test_against_quadrature_oracle(self):
        # integrate the quadratic Lagrange basis on stencil (-1, 0, 1),
        # local coordinate s in [0, 1] measured from the near node:
        # f(near)=f(0), f(far)=f(1), curvature basis s(s+1)/2 - ... --
        # equivalently check the three moment combinations directly.
        for nu in (0.02, 0.3, 1.0, 4.0, 20.0):
            p, q, r = local_weights(nu)
            m0 = kernel_moment(nu, lambda s: 1.0)
            m1 = kernel_moment(nu, lambda s: s)
            m2 = kernel_moment(nu, lambda s: s * s)
            assert p == pytest.approx(m0 - m1, abs=1e-12)
            assert q == pytest.approx(m1, abs=1e-12)
            assert r == pytest.approx((m2 - m1) / 2.0, abs=1e-12)

    def test_identities(self):
        for nu in np.geomspace(1e-3, 50.0, 40):
            p, q, r = local_weights(nu)
            assert p + q == pytest.approx(1.0 - np.exp(-nu), abs=1e-13)
            assert q == pytest.approx((1.0 - np.exp(-nu) * (1.0 + nu)) / nu, abs=1e-13)

    def test_rejects_nonpositive(self):
        with pytest.raises(NonPositiveNu):
            local_weights(0.0)
        with pytest.raises(NonPositiveNu):
            local_weights(-1.0)


class TestLocalIntegrals:
    def setup_method(self):
        self.params = make_params(1.0, 0.005, beta=2.0)  # alpha = 400, nu = 2 on h = 1/200
        self.line = SweepLine.uniform(0.0, 1.0, 200)

    def test_constant_field(self):
        jl, jr = local_integrals(np.ones(len(self.line)), self.params, self.line)
        nu = self.params.alpha * self.line.h
        expect = 0.5 * (1.0 - np.exp(-nu))
        assert np.allclose(jl[1:], expect, atol=1e-14)
        assert np.allclose(jr[:-1], expect, atol=1e-14)
        assert jl[0] == 0.0 and jr[-1] == 0.0

    def test_zero_field(self):
        jl, jr = local_integrals(np.zeros(len(self.line)), self.params, self.line)
        assert not jl.any() and not jr.any()

    def test_quadratic_exact(self):
        x = self.line.nodes
        f = 3.0 * x**2 - 2.0 * x + 0.5
        jl, jr = local_integrals(f, self.params, self.line)
        a = self.params.alpha
        h = self.line.h
        for j in (1, 2, 57, 199, 200):
            exact = 0.5 * a * quad(lambda y: (3 * (x[j] - y) ** 2 - 2 * (x[j] - y) + 0.5)
                                   * np.exp(-a * y), 0.0, h)[0]
            assert jl[j] == pytest.approx(exact, abs=1e-12)
        for j in (0, 1, 57, 198, 199):
            exact = 0.5 * a * quad(lambda y: (3 * (x[j] + y) ** 2 - 2 * (x[j] + y) + 0.5)
                                   * np.exp(-a * y), 0.0, h)[0]
            assert jr[j] == pytest.approx(exact, abs=1e-12)


class TestConvolve:
    def test_fast_equals_direct_random(self):
        rng = np.random.default_rng(42)
        for n in (16, 257, 1024):
            line = SweepLine.uniform(-1.0, 2.0, n)
            params = make_params(1.0, 2.0 * line.h / 2.0, beta=2.0)  # nu = 1
            for _ in range(5):
                f = rng.standard_normal(len(line))
                cf = fast_convolve(f, params, line)
                cd = direct_convolve(f, params, line)
                assert np.max(np.abs(cf.I - cd.I)) <= 1e-12 * np.max(np.abs(f))

    def test_minimal_two_node_line(self):
        # single cell: hand-expandable sums
        line = SweepLine(np.array([0.0, 0.25]))
        params = make_params(1.0, 0.125, beta=2.0)  # alpha = 16, nu = 4
        f = np.array([2.0, -3.0])
        cf = fast_convolve(f, params, line)
        cd = direct_convolve(f, params, line)
        p, q, _ = local_weights(4.0)
        # I_L[1] = J_L[1], I_R[0] = J_R[0]; linear 2-pt rule, halved
        assert cf.I_L[1] == pytest.approx(0.5 * (p * f[1] + q * f[0]), abs=1e-15)
        assert cf.I_R[0] == pytest.approx(0.5 * (p * f[0] + q * f[1]), abs=1e-15)
        assert np.allclose(cf.I, cd.I, atol=1e-15)

    def test_constant_field_closed_form(self):
        line = SweepLine.uniform(0.0, 3.0, 300)
        params = make_params(1.0, 0.02, beta=2.0)  # alpha = 100
        cf = fast_convolve(np.ones(len(line)), params, line)
        x = line.nodes
        exact = 1.0 - 0.5 * np.exp(-100.0 * x) - 0.5 * np.exp(-100.0 * (3.0 - x))
        assert np.max(np.abs(cf.I - exact)) < 5e-14

    def test_partial_sums_and_mu(self):
        line = SweepLine.uniform(0.0, 1.0, 64)
        params = make_params(1.0, line.h, beta=2.0)
        f = np.sin(2 * np.pi * line.nodes)
        cf = fast_convolve(f, params, line)
        assert cf.I_L[0] == 0.0
        assert cf.I_R[-1] == 0.0
        assert np.allclose(cf.I, cf.I_L + cf.I_R)
        assert cf.mu == pytest.approx(np.exp(-params.alpha), rel=1e-14)

    def test_linearity(self):
        rng = np.random.default_rng(3)
        line = SweepLine.uniform(0.0, 1.0, 128)
        params = make_params(1.0, line.h, beta=1.5)
        f, g = rng.standard_normal((2, len(line)))
        lhs = fast_convolve(2.5 * f - 1.75 * g, params, line).I
        rhs = 2.5 * fast_convolve(f, params, line).I - 1.75 * fast_convolve(g, params, line).I
        assert np.max(np.abs(lhs - rhs)) < 1e-13 * max(np.max(np.abs(f)), np.max(np.abs(g)))

    def test_spike_decay(self):
        line = SweepLine.uniform(0.0, 1.0, 100)
        params = make_params(1.0, line.h / 1.0, beta=1.0)  # nu = 1
        k = 50
        f = np.zeros(len(line))
        f[k] = 1.0
        cf = fast_convolve(f, params, line)
        # away from the spike's 3-node stencil footprint, I decays by exactly
        # exp(-alpha*h) per node
        a = params.alpha
        for j in range(k + 3, len(line) - 1):
            assert cf.I[j + 1] == pytest.approx(cf.I[j] * np.exp(-a * line.h), rel=1e-12)

    def test_positivity_of_assembled_operator(self):
        # nonnegative fields map to nonnegative convolutions: everywhere at
        # nu = 1, and away from the one-sided end stencils for larger nu
        # (end rows acquire small negative entries once nu exceeds ~1.7;
        # the curvature weight itself is negative for all nu, as expected)
        line = SweepLine.uniform(0.0, 1.0, 40)
        assert local_weights(0.5)[2] < 0.0
        for nu in (1.0, 2.0, 5.0):
            params = make_params(1.0, line.h * 2.0 / nu, beta=2.0)
            for k in range(len(line)):
                e = np.zeros(len(line))
                e[k] = 1.0
                I = fast_convolve(e, params, line).I
                assert I[3:-3].min() > -1e-15
                if nu == 1.0:
                    assert I.min() > -1e-15

    def test_embedded_endpoints_constant_exact(self):
        # irregular end cells: constant field still reproduces the closed form
        h = 0.01
        inner = np.arange(0.0, 1.0 + h / 2, h)
        nodes = np.concatenate(([-0.4 * h], inner, [1.0 + 0.7 * h]))
        line = SweepLine(nodes, h=h)
        params = make_params(1.0, 0.005, beta=2.0)
        cf = fast_convolve(np.ones(len(line)), params, line)
        a = params.alpha
        exact = 1.0 - 0.5 * np.exp(-a * (nodes - line.a)) - 0.5 * np.exp(-a * (line.b - nodes))
        assert np.max(np.abs(cf.I - exact)) < 1e-13

    def test_embedded_endpoints_fast_equals_direct(self):
        rng = np.random.default_rng(11)
        h = 1.0 / 57
        inner = np.linspace(0.0, 1.0, 58)
        nodes = np.concatenate(([-0.25 * h], inner, [1.0 + 0.9 * h]))
        line = SweepLine(nodes, h=h)
        params = make_params(1.0, h, beta=2.0)
        f = rng.standard_normal(len(line))
        cf = fast_convolve(f, params, line)
        cd = direct_convolve(f, params, line)
        assert np.max(np.abs(cf.I - cd.I)) <= 1e-12 * np.max(np.abs(f))

    def test_backends_agree(self):
        from moltwave import _scan_py
        from moltwave.convolve import build_line_plan

        rng = np.random.default_rng(5)
        line = SweepLine.uniform(0.0, 1.0, 97)
        params = make_params(1.0, line.h, beta=2.0)
        f = rng.standard_normal(len(line))
        cf = fast_convolve(f, params, line)
        plan = build_line_plan(line.nodes, params.alpha, h=line.h)
        il = np.empty(f.size)
        ir = np.empty(f.size)
        _scan_py.scan_lines(f, plan.wl, plan.sl, plan.wr, plan.sr, plan.dl, plan.dr,
                            np.array([0, f.size], dtype=np.int64), il, ir)
        assert np.max(np.abs(il + ir - cf.I)) < 1e-14
