"""Independent brute-force references used by the tests.

Nothing here imports the package: Haar details come from explicit block
sums, the regression from the closed-form 2x2 weighted normal equations,
and digamma/trigamma from their integer-argument series.
"""

import math

EULER_GAMMA = 0.5772156649015329


def haar_details(x, j_max):
    """d(j, k) = 2**(-j/2) * (sum of first half of block k - sum of second half)."""
    n = len(x)
    out = {}
    for j in range(1, j_max + 1):
        block = 2**j
        half = block // 2
        row = []
        for k in range(n // block):
            s = 0.0
            for t in range(block * k, block * k + half):
                s += x[t]
            for t in range(block * k + half, block * (k + 1)):
                s -= x[t]
            row.append(s * 2.0 ** (-j / 2.0))
        out[j] = row
    return out


def mean_square(values):
    return sum(v * v for v in values) / len(values)


def digamma_int(q):
    """digamma at a positive integer."""
    return -EULER_GAMMA + sum(1.0 / k for k in range(1, q))


def trigamma_int(q):
    """zeta(2, q) at a positive integer."""
    return math.pi**2 / 6.0 - sum(1.0 / k**2 for k in range(1, q))


def log2_point(v, n_j):
    """Bias-corrected log2 variance and its variance, for even n_j."""
    q = n_j // 2
    y = math.log2(v) + math.log2(q) - digamma_int(q) / math.log(2.0)
    s2 = trigamma_int(q) / math.log(2.0) ** 2
    return y, s2


def weighted_line(js, ys, s2):
    """Closed-form weighted least squares; returns slope, intercept, slope variance."""
    w = [1.0 / s for s in s2]
    S = sum(w)
    Sx = sum(wi * j for wi, j in zip(w, js))
    Sy = sum(wi * y for wi, y in zip(w, ys))
    Sxx = sum(wi * j * j for wi, j in zip(w, js))
    Sxy = sum(wi * j * y for wi, j, y in zip(w, js, ys))
    det = S * Sxx - Sx * Sx
    slope = (S * Sxy - Sx * Sy) / det
    intercept = (Sxx * Sy - Sx * Sxy) / det
    return slope, intercept, S / det


def chi2_sf_even(q, dof):
    """Chi-square survival function for even degrees of freedom (Poisson sum)."""
    assert dof % 2 == 0
    half = q / 2.0
    return math.exp(-half) * sum(half**k / math.factorial(k) for k in range(dof // 2))
