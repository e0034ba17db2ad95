"""Heath-Brown's identity for the von Mangoldt function, evaluated term by term.

With ``M_z = sum_{m<=z} mu(m) m^-s`` the series ``1 - zeta M_z`` has no
coefficients on 1..z, so ``(1 - zeta M_z)^k`` vanishes on n <= z^k and

    Lambda = sum_{j=1}^{k} (-1)^(j-1) C(k, j) log * 1^{*(j-1)} * (mu 1_{<=z})^{*j}

there. The integer factors of each term are convolved exactly; each term
is then convolved with log separately and the k terms are added in
floating point, so the cancellation between them is actually exercised.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .. import sieve
from ..arith import iroot
from ..errors import ArgumentError, DomainError

MAX_K = 4


def dirichlet_convolve(f: np.ndarray, g: np.ndarray, n: int) -> np.ndarray:
    """``(f * g)(m)`` for m <= n; arrays are indexed from 0 with index 0 unused."""
    out = np.zeros(n + 1, dtype=np.result_type(f, g))
    # loop over the sparser support of f
    for d in np.flatnonzero(f[1 : n + 1]) + 1:
        top = n // d
        out[d :: d][:top] += f[d] * g[1 : top + 1]
    return out


def default_cutoff(n_limit: int, k: int) -> int:
    """Smallest z with ``z^k >= 2 n_limit``."""
    target = 2 * max(n_limit, 1)
    z = iroot(target, k)
    return z if z**k >= target else z + 1


@dataclass(frozen=True)
class HeathBrownResult:
    n_limit: int
    k: int
    z: int
    values: np.ndarray  # identity evaluated at n = 0..n_limit (index 0 unused)
    lam: np.ndarray  # sieve Lambda(n)
    coefficients: np.ndarray  # integer sum of the signed term coefficients
    term_sizes: tuple  # max |term_j(n)| per j, for the cancellation scale

    @property
    def residuals(self) -> np.ndarray:
        return np.abs(self.values - self.lam)

    @property
    def max_residual(self) -> float:
        if self.n_limit < 1:
            return 0.0
        return float(self.residuals[1:].max())

    @property
    def worst_n(self) -> Optional[int]:
        if self.n_limit < 1:
            return None
        return int(np.argmax(self.residuals[1:])) + 1


def heath_brown_decompose(n_limit: int, k: int = 4, z: Optional[int] = None) -> HeathBrownResult:
    """Evaluate the k-fold identity for every n <= n_limit and compare with the sieve."""
    if not 1 <= k <= MAX_K:
        raise ArgumentError(f"k must be in 1..{MAX_K}, got {k}")
    if n_limit < 0:
        raise DomainError(f"n_limit must be non-negative, got {n_limit}")
    z = default_cutoff(n_limit, k) if z is None else int(z)
    if z < 1:
        raise ArgumentError(f"cutoff z must be positive, got {z}")
    if z**k < n_limit:
        raise ArgumentError(f"cutoff too small: need z^k >= n_limit, got z={z}, k={k}, z^k={z**k} < {n_limit}")
    n = n_limit
    if n < 1:
        empty = np.zeros(n + 1)
        return HeathBrownResult(n_limit, k, z, empty, empty.copy(), np.zeros(n + 1, dtype=np.int64), ())

    mu_z = np.zeros(n + 1, dtype=np.int64)
    top = min(z, n)
    mu_z[1 : top + 1] = sieve.mobius_upto(top)[1 : top + 1]
    ones = np.zeros(n + 1, dtype=np.int64)
    ones[1:] = 1

    logs = np.zeros(n + 1)
    logs[1:] = np.log(np.arange(1, n + 1, dtype=np.float64))
    combo = np.zeros(n + 1, dtype=np.int64)
    terms, sizes = [], []
    mu_pow = mu_z.copy()  # (mu 1_{<=z})^{*j}
    one_pow = np.zeros(n + 1, dtype=np.int64)  # 1^{*(j-1)}
    one_pow[1] = 1
    for j in range(1, k + 1):
        if j > 1:
            mu_pow = dirichlet_convolve(mu_z, mu_pow, n)
            one_pow = dirichlet_convolve(one_pow, ones, n)
        c_j = dirichlet_convolve(mu_pow, one_pow, n)
        coef = (-1) ** (j - 1) * math.comb(k, j)
        combo += coef * c_j
        t = coef * dirichlet_convolve(c_j, logs, n)
        terms.append(t)
        sizes.append(float(np.abs(t).max()))
    values = np.zeros(n + 1)
    for t in terms:
        values += t
    lam = np.zeros(n + 1)
    lam[1:] = sieve.mangoldt_upto(n)[1 : n + 1]
    return HeathBrownResult(n_limit, k, z, values, lam, combo, tuple(sizes))
