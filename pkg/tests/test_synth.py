import math

import mpmath
import numpy as np
import pytest

from lrdscale.ingest import ReturnSeries
from lrdscale.synth import (
    EmbeddingError,
    FgnSpec,
    fbm_from_fgn,
    fgn_autocovariance,
    fgn_sample,
    generate_fgn,
    generate_white_noise,
    periodogram_slope,
    replicate_rng,
    spectral_constant,
    tail_constant,
)
from lrdscale import synth


def test_autocovariance_examples():
    assert fgn_autocovariance(0.5, 1.0, 1) == 0.0
    for H in (0.1, 0.5, 0.93):
        assert fgn_autocovariance(H, 2.5, 0) == 2.5
    ref = float(mpmath.mpf("0.5") * (mpmath.power(2, mpmath.mpf("1.6")) - 2))
    assert fgn_autocovariance(0.8, 1.0, 1) == pytest.approx(ref, rel=1e-14)
    assert fgn_autocovariance(0.8, 1.0, 1) == pytest.approx(0.51572, abs=1e-5)


def test_autocovariance_symmetric_and_vectorised():
    k = np.arange(-5, 6)
    g = fgn_autocovariance(0.7, 1.0, k)
    np.testing.assert_allclose(g, g[::-1])


@pytest.mark.parametrize("H", [0.0, 1.0, -0.2, 1.2])
def test_autocovariance_domain(H):
    with pytest.raises(ValueError):
        fgn_autocovariance(H, 1.0, 1)


def test_tail_law():
    H = 0.8
    k = 1000
    ratio = fgn_autocovariance(H, 1.0, k) / (tail_constant(H, 1.0) * k ** (-(2 - 2 * H)))
    assert abs(ratio - 1) < 0.02


def test_spectral_constant_value():
    sc = spectral_constant(1.0, 0.75)
    ref = mpmath.gamma(mpmath.mpf("0.5")) * mpmath.sin(mpmath.pi * 0.75) / mpmath.pi
    assert sc.c_f == pytest.approx(float(ref), rel=1e-13)
    assert sc.c_f == pytest.approx(1 / math.sqrt(2 * math.pi), rel=1e-13)
    assert sc.c_f == pytest.approx(0.39894, abs=1e-5)


def test_spectral_constant_linear_and_limits():
    assert spectral_constant(2.0, 0.7).c_f == pytest.approx(2 * spectral_constant(1.0, 0.7).c_f, rel=1e-15)
    tail = [spectral_constant(1.0, H).c_f for H in (0.99, 0.999, 0.9999)]
    assert tail[0] > tail[1] > tail[2] > 0 and tail[2] < 1e-3
    with pytest.raises(ValueError, match="pole"):
        spectral_constant(1.0, 0.5)
    with pytest.raises(ValueError):
        spectral_constant(1.0, 0.3)


def test_fgn_spec_validation():
    with pytest.raises(ValueError):
        FgnSpec(H=1.2, n=16)
    with pytest.raises(ValueError):
        FgnSpec(H=0.5, n=1)
    with pytest.raises(ValueError):
        FgnSpec(H=0.5, n=16, sigma2=0.0)


def test_fgn_deterministic():
    spec = FgnSpec(H=0.8, n=4096, seed=7)
    a, b = generate_fgn(spec), generate_fgn(spec)
    assert a.values.tobytes() == b.values.tobytes()
    assert not np.array_equal(a.values, generate_fgn(FgnSpec(H=0.8, n=4096, seed=8)).values)


def test_fgn_small_n():
    x = fgn_sample(0.9, 2, np.random.default_rng(0))
    assert x.shape == (2,)


def _lag1(x):
    return float(np.dot(x[:-1], x[1:]) / (x.size - 1))


def test_white_limit_lag1():
    x = generate_fgn(FgnSpec(H=0.5, n=4096, seed=3)).values
    assert abs(_lag1(x)) < 3 / math.sqrt(4096)


def test_fgn_lag1_within_three_se():
    target = fgn_autocovariance(0.8, 1.0, 1)
    reps = np.array([_lag1(fgn_sample(0.8, 4096, replicate_rng(21, i))) for i in range(200)])
    se = reps.std(ddof=1)
    single = _lag1(generate_fgn(FgnSpec(H=0.8, n=4096, seed=0)).values)
    assert abs(single - target) < 3 * se
    assert abs(reps.mean() - target) < 3 * se / math.sqrt(reps.size)


@pytest.mark.slow
def test_embedding_exact_covariance():
    H, n, reps = 0.8, 256, 2000
    lags = range(6)
    stats = np.empty((reps, len(lags)))
    for i in range(reps):
        x = fgn_sample(H, n, replicate_rng(33, i), sigma2=2.0)
        stats[i] = [np.dot(x[: n - k], x[k:]) / (n - k) for k in lags]
    mean = stats.mean(axis=0)
    se = stats.std(axis=0, ddof=1) / math.sqrt(reps)
    expected = fgn_autocovariance(H, 2.0, np.arange(6))
    assert np.all(np.abs(mean - expected) < 4 * se)


def test_embedding_guard(monkeypatch):
    synth._embedding_sqrt.cache_clear()
    real = synth.fgn_autocovariance

    def broken(H, sigma2=1.0, k=0):
        g = np.asarray(real(H, sigma2, k), dtype=float).copy()
        g[1:] = 1.5  # not a covariance
        return g

    monkeypatch.setattr(synth, "fgn_autocovariance", broken)
    with pytest.raises(EmbeddingError, match="nonnegative-definite"):
        fgn_sample(0.7, 64, np.random.default_rng(0))
    synth._embedding_sqrt.cache_clear()


def test_white_noise():
    assert len(generate_white_noise(4, seed=1)) == 4
    a = generate_white_noise(100, seed=9).values
    assert np.array_equal(a, generate_white_noise(100, seed=9).values)
    n = 10**6
    x = generate_white_noise(n, sigma2=4.0, seed=2).values
    assert abs(x.mean()) < 4 * math.sqrt(4.0 / n)


@pytest.mark.parametrize("inp, out", [([1, 1, 1], [1, 2, 3]), ([0, 0], [0, 0])])
def test_fbm_cumsum(inp, out):
    assert fbm_from_fgn(ReturnSeries(np.array(inp, dtype=float))).values.tolist() == out


def test_fbm_differencing_recovers_fgn():
    x = generate_fgn(FgnSpec(H=0.7, n=512, seed=4))
    b = fbm_from_fgn(x).values
    np.testing.assert_allclose(np.diff(b), x.values[1:], atol=1e-12)
    assert b[0] == x.values[0]


def test_replicate_streams_are_order_independent():
    fwd = [replicate_rng(5, i).standard_normal(3) for i in range(4)]
    back = [replicate_rng(5, i).standard_normal(3) for i in reversed(range(4))][::-1]
    for a, b in zip(fwd, back):
        assert np.array_equal(a, b)
    assert not np.array_equal(fwd[0], fwd[1])


def test_periodogram_slope_white():
    x = np.vstack([np.random.default_rng([1, i]).standard_normal(4096) for i in range(100)])
    assert abs(periodogram_slope(x, 32)) < 0.1
