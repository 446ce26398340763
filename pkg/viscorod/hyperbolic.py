"""
Overflow-guarded hyperbolic quotients.

All helpers work on numpy complex arrays.  For Re z >= 0 the large factor
e^{kappa z} is pulled out; for Re z < 0 the parity of sinh/cosh and the
evenness of  z sinh(kappa z) + kappa cosh(kappa z)  are used instead, so no
intermediate exponential ever has a positive real exponent except the
returned scale of `scaled_f`.
"""
import numpy as np


def _fold(z):
    z = np.asarray(z, dtype=complex)
    flip = z.real < 0
    return np.where(flip, -z, z), flip


def _reduced_denominator(zz, kappa):
    # (z sinh(kz) + k cosh(kz)) * 2 e^{-kz}, for Re zz >= 0
    e2 = np.exp(-2.0 * kappa * zz)
    return zz * (1.0 - e2) + kappa * (1.0 + e2)


def scaled_f(z, kappa):
    """Return (scale, g) with  z sinh(kz) + k cosh(kz) = exp(scale) * g.

    `scale` is ±kappa*z (minus log 2 folded in) so that Re(scale) >= -log 2
    and |g| stays moderate.
    """
    zz, _ = _fold(z)
    g = _reduced_denominator(zz, kappa)
    scale = kappa * zz - np.log(2.0)
    return scale, g


def sinh_ratio(z, kappa, x):
    """sinh(k x z) / (z sinh(k z) + k cosh(k z)) for x in [0, 1]."""
    zz, flip = _fold(z)
    num = np.exp(kappa * (x - 1.0) * zz) * (1.0 - np.exp(-2.0 * kappa * x * zz))
    ratio = num / _reduced_denominator(zz, kappa)
    # sinh is odd, the denominator is even
    return np.where(flip, -ratio, ratio)


def cosh_ratio(z, kappa, x):
    """cosh(k x z) / (z sinh(k z) + k cosh(k z)) for x in [0, 1]."""
    zz, _ = _fold(z)
    num = np.exp(kappa * (x - 1.0) * zz) * (1.0 + np.exp(-2.0 * kappa * x * zz))
    return num / _reduced_denominator(zz, kappa)
