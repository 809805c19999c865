import numpy as np
import pytest

from moltwave import SweepLine, make_params
from moltwave.errors import SourceOutsideLine
from moltwave.sources import PointSource, source_field, source_field_2d


class TestSourceField:
    def setup_method(self):
        self.line = SweepLine.uniform(0.0, 1.0, 100)
        self.params = make_params(1.0, 0.02, beta=2.0)

    def test_zero_waveform(self):
        src = PointSource(0.5, lambda t: 0.0)
        assert not source_field([src], self.line, self.params, 0.0).any()

    def test_peak_value(self):
        # unit strength, beta = 2: peak c*dt/4 at the source
        src = PointSource(0.5, lambda t: 1.0)
        f = source_field([src], self.line, self.params, 0.0)
        assert f.max() == pytest.approx(self.params.c * self.params.dt / 4.0, rel=1e-14)
        assert self.line.nodes[np.argmax(f)] == pytest.approx(0.5)

    def test_offgrid_symmetry(self):
        xs = 0.505  # midway between nodes
        src = PointSource(xs, lambda t: 1.0)
        f = source_field([src], self.line, self.params, 0.0)
        x = self.line.nodes
        # pair up nodes mirrored about xs
        for k in range(1, 40):
            j_left = np.argmin(np.abs(x - (xs - (k - 0.5) * self.line.h)))
            j_right = np.argmin(np.abs(x - (xs + (k - 0.5) * self.line.h)))
            assert f[j_left] == pytest.approx(f[j_right], rel=1e-12)

    def test_soft_source_rate(self):
        # soft strength is (2/c) sigma'(t); analytic and centered-difference
        # derivatives agree for quadratic sigma
        sigma = lambda t: 3.0 * t * t
        rate = lambda t: 6.0 * t
        s_a = PointSource(0.3, sigma, kind="soft", rate=rate)
        s_n = PointSource(0.3, sigma, kind="soft")
        t = 0.7
        fa = source_field([s_a], self.line, self.params, t)
        fn = source_field([s_n], self.line, self.params, t)
        assert np.allclose(fa, fn, rtol=1e-12)
        assert fa.max() == pytest.approx(
            self.params.c * self.params.dt / 4.0 * 2.0 / self.params.c * 6.0 * t, rel=1e-12)

    def test_outside_line(self):
        with pytest.raises(SourceOutsideLine):
            source_field([PointSource(1.5, lambda t: 1.0)], self.line, self.params, 0.0)

    def test_superposition(self):
        s1 = PointSource(0.25, lambda t: 1.0)
        s2 = PointSource(0.75, lambda t: -2.0)
        f12 = source_field([s1, s2], self.line, self.params, 0.0)
        f1 = source_field([s1], self.line, self.params, 0.0)
        f2 = source_field([s2], self.line, self.params, 0.0)
        assert np.allclose(f12, f1 + f2)


class TestSourceField2D:
    def test_separable_product(self):
        params = make_params(1.0, 0.02, beta=2.0)
        x = np.linspace(0, 1, 21)
        X, Y = np.meshgrid(x, x)
        src = PointSource((0.4, 0.6), lambda t: 2.0)
        f = source_field_2d([src], X, Y, params, 0.0)
        expect = 0.5 * np.exp(-params.alpha * (np.abs(X - 0.4) + np.abs(Y - 0.6)))
        assert np.allclose(f, expect, rtol=1e-13)
