"""Per-sample capture-fraction kernels.

Each kernel has a numba-compiled loop and a vectorised numpy twin. The
backend is picked once at import: numba when it is importable, unless
``PADDLESAT_NUMBA=0`` is set. Both paths return identical arrays for the same
inputs (checked in the test suite), so reports do not depend on the backend.
"""

from __future__ import annotations

import math
import os

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover
    numba = None

NUMBA_AVAILABLE = numba is not None
USE_NUMBA = NUMBA_AVAILABLE and os.environ.get("PADDLESAT_NUMBA", "1").strip().lower() not in (
    "0",
    "false",
    "no",
    "off",
)
BACKEND = "numba" if USE_NUMBA else "numpy"

# Cephes Chebyshev coefficients for exp(-x) I0(x): A on [0, 8], B on (8, inf).
_I0E_A = np.array([
    -4.41534164647933937950e-18, 3.33079451882223809783e-17, -2.43127984654795469359e-16,
    1.71539128555513303061e-15, -1.16853328779934516808e-14, 7.67618549860493561688e-14,
    -4.85644678311192946090e-13, 2.95505266312963983461e-12, -1.72682629144155570723e-11,
    9.67580903537323691224e-11, -5.18979560163526290666e-10, 2.65982372468238665035e-09,
    -1.30002500998624804212e-08, 6.04699502254191894932e-08, -2.67079385394061173391e-07,
    1.11738753912010371815e-06, -4.41673835845875056359e-06, 1.64484480707288970893e-05,
    -5.75419501008210370398e-05, 1.88502885095841655729e-04, -5.76375574538582365885e-04,
    1.63947561694133579842e-03, -4.32430999505057594430e-03, 1.05464603945949983183e-02,
    -2.37374148058994688156e-02, 4.93052842396707084878e-02, -9.49010970480476444210e-02,
    1.71620901522208775349e-01, -3.04682672343198398683e-01, 6.76795274409476084995e-01,
])
_I0E_B = np.array([
    -7.23318048787475395456e-18, -4.83050448594418207126e-18, 4.46562142029675999901e-17,
    3.46122286769746109310e-17, -2.82762398051658348494e-16, -3.42548561967721913462e-16,
    1.77256013305652638360e-15, 3.81168066935262242075e-15, -9.55484669882830764870e-15,
    -4.15056934728722208663e-14, 1.54008621752140982691e-14, 3.85277838274214270114e-13,
    7.18012445138366623367e-13, -1.79417853150680611778e-12, -1.32158118404477131188e-11,
    -3.14991652796324136454e-11, 1.18891471078464383424e-11, 4.94060238822496958910e-10,
    3.39623202570838634515e-09, 2.26666899049817806459e-08, 2.04891858946906374183e-07,
    2.89137052083475648297e-06, 6.88975834691682398426e-05, 3.36911647825569408990e-03,
    8.04490411014108831608e-01,
])

# Gaussian capture integrates the radial density over [d - k*s, d + k*s] clipped
# to the receiver; beyond k = 9 the integrand is below 1e-17 of its peak.
_GAUSS_SPAN = 9.0
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(96)


def _chbevl_scalar(x, coef):
    b0 = coef[0]
    b1 = 0.0
    b2 = 0.0
    for i in range(1, coef.shape[0]):
        b2 = b1
        b1 = b0
        b0 = x * b1 - b2 + coef[i]
    return 0.5 * (b0 - b2)


def _i0e_scalar(x):
    x = abs(x)
    if x <= 8.0:
        return _chbevl_scalar(x / 2.0 - 2.0, _I0E_A)
    return _chbevl_scalar(32.0 / x - 2.0, _I0E_B) / math.sqrt(x)


def _flat_top_scalar(beam_r, rx_r, d):
    """Fraction of a uniform disk (radius beam_r) inside a disk of radius rx_r at distance d."""
    if beam_r <= 0.0:
        return 1.0 if d < rx_r else 0.0
    if d >= beam_r + rx_r:
        return 0.0
    if d <= abs(beam_r - rx_r):
        if rx_r >= beam_r:
            return 1.0
        return (rx_r * rx_r) / (beam_r * beam_r)
    c1 = (d * d + beam_r * beam_r - rx_r * rx_r) / (2.0 * d * beam_r)
    c2 = (d * d + rx_r * rx_r - beam_r * beam_r) / (2.0 * d * rx_r)
    c1 = min(1.0, max(-1.0, c1))
    c2 = min(1.0, max(-1.0, c2))
    k = (-d + beam_r + rx_r) * (d + beam_r - rx_r) * (d - beam_r + rx_r) * (d + beam_r + rx_r)
    area = beam_r * beam_r * math.acos(c1) + rx_r * rx_r * math.acos(c2) - 0.5 * math.sqrt(max(k, 0.0))
    frac = area / (math.pi * beam_r * beam_r)
    return min(1.0, max(0.0, frac))


def _gaussian_scalar(sigma, rx_r, d, nodes, weights):
    """Power fraction of a circular Gaussian (per-axis std sigma) inside an offset disk."""
    if sigma <= 0.0:
        return 1.0 if d < rx_r else 0.0
    lo = max(0.0, d - _GAUSS_SPAN * sigma)
    hi = min(rx_r, d + _GAUSS_SPAN * sigma)
    if hi <= lo:
        return 0.0
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    inv_var = 1.0 / (sigma * sigma)
    total = 0.0
    for i in range(nodes.shape[0]):
        rho = mid + half * nodes[i]
        u = rho - d
        total += weights[i] * rho * inv_var * math.exp(-0.5 * u * u * inv_var) * _i0e_scalar(rho * d * inv_var)
    frac = total * half
    return min(1.0, max(0.0, frac))


def _flat_top_loop(beam_r, rx_r, offsets):
    out = np.empty(offsets.shape[0])
    for i in range(offsets.shape[0]):
        out[i] = _flat_top_scalar(beam_r, rx_r, offsets[i])
    return out


def _gaussian_loop(sigma, rx_r, offsets, nodes, weights):
    out = np.empty(offsets.shape[0])
    for i in range(offsets.shape[0]):
        out[i] = _gaussian_scalar(sigma, rx_r, offsets[i], nodes, weights)
    return out


# --- numpy twins -----------------------------------------------------------


def _chbevl_np(x, coef):
    b0 = np.full_like(x, coef[0])
    b1 = np.zeros_like(x)
    b2 = np.zeros_like(x)
    for c in coef[1:]:
        b2 = b1
        b1 = b0
        b0 = x * b1 - b2 + c
    return 0.5 * (b0 - b2)


def i0e_numpy(x):
    x = np.abs(np.asarray(x, dtype=float))
    small = x <= 8.0
    out = np.empty_like(x)
    out[small] = _chbevl_np(x[small] / 2.0 - 2.0, _I0E_A)
    xb = x[~small]
    out[~small] = _chbevl_np(32.0 / xb - 2.0, _I0E_B) / np.sqrt(xb)
    return out


def flat_top_capture_numpy(beam_r: float, rx_r: float, offsets: np.ndarray) -> np.ndarray:
    d = np.asarray(offsets, dtype=float)
    if beam_r <= 0.0:
        return np.where(d < rx_r, 1.0, 0.0)
    out = np.zeros_like(d)
    inside = d <= abs(beam_r - rx_r)
    out[inside] = 1.0 if rx_r >= beam_r else (rx_r * rx_r) / (beam_r * beam_r)
    lens = ~inside & (d < beam_r + rx_r)
    dl = d[lens]
    c1 = np.clip((dl * dl + beam_r * beam_r - rx_r * rx_r) / (2.0 * dl * beam_r), -1.0, 1.0)
    c2 = np.clip((dl * dl + rx_r * rx_r - beam_r * beam_r) / (2.0 * dl * rx_r), -1.0, 1.0)
    k = (-dl + beam_r + rx_r) * (dl + beam_r - rx_r) * (dl - beam_r + rx_r) * (dl + beam_r + rx_r)
    area = beam_r * beam_r * np.arccos(c1) + rx_r * rx_r * np.arccos(c2) - 0.5 * np.sqrt(np.maximum(k, 0.0))
    out[lens] = np.clip(area / (math.pi * beam_r * beam_r), 0.0, 1.0)
    return out


def gaussian_capture_numpy(sigma: float, rx_r: float, offsets: np.ndarray) -> np.ndarray:
    d = np.asarray(offsets, dtype=float)
    if sigma <= 0.0:
        return np.where(d < rx_r, 1.0, 0.0)
    lo = np.maximum(0.0, d - _GAUSS_SPAN * sigma)
    hi = np.minimum(rx_r, d + _GAUSS_SPAN * sigma)
    ok = hi > lo
    out = np.zeros_like(d)
    if not ok.any():
        return out
    lo, hi, dd = lo[ok], hi[ok], d[ok]
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    inv_var = 1.0 / (sigma * sigma)
    # accumulate node by node to keep the same summation order as the loop kernel
    total = np.zeros_like(dd)
    for node, weight in zip(_GL_NODES, _GL_WEIGHTS):
        rho = mid + half * node
        u = rho - dd
        total += weight * rho * inv_var * np.exp(-0.5 * u * u * inv_var) * i0e_numpy(rho * dd * inv_var)
    out[ok] = np.clip(total * half, 0.0, 1.0)
    return out


if NUMBA_AVAILABLE:
    _jit = numba.njit(cache=False, nogil=True)
    _chbevl_scalar = _jit(_chbevl_scalar)
    _i0e_scalar = _jit(_i0e_scalar)
    _flat_top_scalar = _jit(_flat_top_scalar)
    _gaussian_scalar = _jit(_gaussian_scalar)
    _flat_top_loop_jit = _jit(_flat_top_loop)
    _gaussian_loop_jit = _jit(_gaussian_loop)

    def flat_top_capture_numba(beam_r: float, rx_r: float, offsets: np.ndarray) -> np.ndarray:
        return _flat_top_loop_jit(float(beam_r), float(rx_r), np.ascontiguousarray(offsets, dtype=np.float64))

    def gaussian_capture_numba(sigma: float, rx_r: float, offsets: np.ndarray) -> np.ndarray:
        return _gaussian_loop_jit(
            float(sigma), float(rx_r), np.ascontiguousarray(offsets, dtype=np.float64), _GL_NODES, _GL_WEIGHTS
        )

else:  # pragma: no cover
    flat_top_capture_numba = None
    gaussian_capture_numba = None


if USE_NUMBA:
    flat_top_capture = flat_top_capture_numba
    gaussian_capture = gaussian_capture_numba
else:
    flat_top_capture = flat_top_capture_numpy
    gaussian_capture = gaussian_capture_numpy
