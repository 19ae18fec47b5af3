import numpy as np
import pytest

from fbcount import _kernels_py as py
from fbcount import kernels
from fbcount.parallel import get_threads, pmap, set_threads


def _curve(n, seed):
    rng = np.random.default_rng(seed)
    t = np.linspace(0, 2 * np.pi, n, endpoint=False)
    F = np.column_stack([np.cos(t), np.sin(t), 0.3 * np.sin(3 * t + rng.uniform())])
    return F / np.linalg.norm(F, axis=1, keepdims=True), np.ones(n)


@pytest.mark.skipif(kernels.BACKEND != "compiled", reason="compiled kernels not built")
def test_compiled_matches_fallback():
    from fbcount import _kernels as cy
    a, sa = _curve(256, 1)
    b, sb = _curve(256, 2)
    args = (a, b, sa, sb, 2 * np.pi / 256, 4.0, 2, False)
    assert np.array_equal(py.grid_seeds(*args), cy.grid_seeds(*args))
    rng = np.random.default_rng(0)
    P = rng.normal(size=(2001, 3))
    P /= np.linalg.norm(P, axis=1, keepdims=True)
    ci, cj = rng.integers(0, 2000, 5000), rng.integers(0, 2000, 5000)
    keep = ci != cj
    mp, up, vp = py.arc_pairs(P, P, ci[keep], cj[keep])
    mc, uc, vc = cy.arc_pairs(P, P, ci[keep], cj[keep])
    assert np.array_equal(mp, mc)
    assert np.allclose(up[mp], uc[mc]) and np.allclose(vp[mp], vc[mc])


def test_arc_pairs_finds_a_crossing():
    P = np.array([[1.0, -0.1, 1], [1.0, 0.1, 1]])
    Q = np.array([[0.9, 0.0, 1], [1.1, 0.0, 1]])
    P /= np.linalg.norm(P, axis=1, keepdims=True)
    Q /= np.linalg.norm(Q, axis=1, keepdims=True)
    m, u, v = kernels.arc_pairs(P, Q, np.array([0]), np.array([0]))
    assert m[0] and 0 < u[0] < 1 and 0 < v[0] < 1


def test_thread_cap(monkeypatch):
    monkeypatch.setenv("FBCOUNT_THREADS", "3")
    set_threads(None)
    assert get_threads() == 3
    set_threads(2)
    try:
        assert get_threads() == 2
        assert pmap(lambda x: x * x, range(10)) == [x * x for x in range(10)]
    finally:
        set_threads(None)
    with pytest.raises(ValueError):
        set_threads(0)
    monkeypatch.setenv("FBCOUNT_THREADS", "many")
    with pytest.raises(ValueError):
        get_threads()
