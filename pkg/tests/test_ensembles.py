import numpy as np
import pytest

from dst.ensembles import Ensemble, generate
from dst.errors import BadRank, ConfigError
from dst.kuelbs import LpSpace, build_kuelbs
from dst.linalg import herm, hermitian_eigen


def test_determinism():
    a = generate(Ensemble("hermitian", 4, 3, 42))
    b = generate(Ensemble("hermitian", 4, 3, 42))
    for x, y in zip(a, b):
        assert np.array_equal(x, y)
    c = generate(Ensemble("hermitian", 4, 3, 43))
    assert not np.array_equal(a[0], c[0])


def test_hermitian_kind():
    for m in generate(Ensemble("hermitian", 5, 3, 7)):
        assert np.array_equal(m, herm(m))


def test_negdef_eigenvalues():
    for m in generate(Ensemble("negdef", 5, 3, 7)):
        assert np.all(hermitian_eigen(m).values < 0.0)


def test_rankdef_numerical_rank():
    for m in generate(Ensemble("rankdef", 5, 3, 7, rank=2)):
        s = np.linalg.svd(m, compute_uv=False)
        assert s[1] > 1e-8
        assert s[2] <= 1e-12 * s[0]


def test_h_selfadjoint_kind():
    emb = build_kuelbs(LpSpace(4, 3.0))
    for m in generate(Ensemble("h_selfadjoint", 4, 3, 7, gram=emb.gram)):
        gm = emb.gram @ m
        assert np.linalg.norm(gm - herm(gm)) <= 1e-12 * (1 + np.linalg.norm(gm))


def test_validation():
    with pytest.raises(ConfigError):
        Ensemble("weird", 4, 1, 0)
    with pytest.raises(BadRank):
        Ensemble("rankdef", 4, 1, 0, rank=5)
    with pytest.raises(ConfigError):
        Ensemble("rankdef", 4, 1, 0)
    with pytest.raises(ConfigError):
        Ensemble("h_selfadjoint", 4, 1, 0)
