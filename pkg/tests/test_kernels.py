import numpy as np
import pytest

from rainbowpath import _slowcore, kernels
from rainbowpath import model as M

try:
    from rainbowpath import _fastcore
except ImportError:
    _fastcore = None

BACKENDS = [("numpy", _slowcore)] + ([("cython", _fastcore)] if _fastcore else [])


def _layout_arrays(k):
    lay = M.Layout(k)
    pi = np.array([i - 1 for i, j in lay.pairs], dtype=np.int32)
    pj = np.array([j - 1 for i, j in lay.pairs], dtype=np.int32)
    return lay, pi, pj


@pytest.mark.parametrize("name,impl", BACKENDS)
class TestBatchDensities:
    def test_matches_model(self, name, impl):
        rng = np.random.default_rng(3)
        for k in (1, 2, 4, 9):
            lay, pi, pj = _layout_arrays(k)
            W = rng.dirichlet(np.ones(lay.dim), size=64)
            D = impl.densities_batch(W, k, pi, pj)
            for r in range(0, 64, 16):
                g = lay.to_graph(W[r])
                ref = np.array([float(v) for v in M.density_form(k, dict(g.b), g.a, g.x)])
                assert np.allclose(D[r], ref, atol=1e-13)

    def test_min_density(self, name, impl):
        rng = np.random.default_rng(4)
        lay, pi, pj = _layout_arrays(5)
        W = rng.dirichlet(np.ones(lay.dim), size=32)
        assert np.allclose(impl.min_density_batch(W, 5, pi, pj),
                           impl.densities_batch(W, 5, pi, pj).min(axis=1))


@pytest.mark.parametrize("name,impl", BACKENDS)
class TestBestTransfer:
    def test_beats_dense_sampling(self, name, impl):
        rng = np.random.default_rng(5)
        for k in (2, 3, 6):
            lay, pi, pj = _layout_arrays(k)
            for _ in range(25):
                w = rng.dirichlet(np.ones(lay.dim))
                src, dst, step, val = impl.best_transfer(w, k, pi, pj)
                assert 0 <= src < lay.dim and 0 <= dst < lay.dim and src != dst
                assert 0.0 <= step <= w[src] + 1e-15
                ss = np.linspace(0, w[src], 200)
                WW = np.repeat(w[None, :], len(ss), axis=0)
                WW[:, src] -= ss
                WW[:, dst] += ss
                assert val >= _slowcore.min_density_batch(WW, k, pi, pj).max() - 1e-10

    def test_extremal_points_are_stationary(self, name, impl):
        for k in (3, 5, 7):
            for fam in M.families_for(k):
                lay, pi, pj = _layout_arrays(k)
                w = np.array(lay.to_vector(M.extremal(k, fam).as_float()))
                _, _, _, val = impl.best_transfer(w, k, pi, pj)
                assert val <= float(M.f(k)) + 1e-12


@pytest.mark.skipif(_fastcore is None, reason="compiled kernels not built")
class TestBackendAgreement:
    def test_same_values(self):
        rng = np.random.default_rng(6)
        for k in (2, 4, 8):
            lay, pi, pj = _layout_arrays(k)
            W = rng.dirichlet(np.ones(lay.dim), size=100)
            assert np.allclose(_slowcore.densities_batch(W, k, pi, pj),
                               _fastcore.densities_batch(W, k, pi, pj), atol=1e-14)
            for r in range(0, 100, 10):
                rs = _slowcore.best_transfer(W[r], k, pi, pj)
                rf = _fastcore.best_transfer(W[r], k, pi, pj)
                assert abs(rs[3] - rf[3]) < 1e-12


def test_dispatch_exposes_backend():
    assert kernels.get_backend() in ("numpy", "cython")
    assert callable(kernels.best_transfer)
