"""
Argument-principle zero count of f on a keyhole domain.

The contour runs counter-clockwise around |s| = R, inward along the upper
edge of the cut, clockwise around a small circle about the origin and back
out along the lower edge.  The phase of f is accumulated from the scaled
form exp(scale) * g so that no sample has to be exponentiated.
"""
import numpy as np

from ..constitutive import eval_M, eval_M_on_cut
from ..errors import DomainError
from ..hyperbolic import scaled_f

INNER_RADIUS = 1e-6


def pole_disc_radius(c_inf: float, kappa: float, n: int) -> float:
    """Radius (n − ½)π / (c∞ κ), halfway between branches n − 1 and n."""
    return (n - 0.5) * np.pi / (c_inf * kappa)


def _log_phase(z: np.ndarray, kappa: float) -> np.ndarray:
    scale, g = scaled_f(z, kappa)
    return scale.imag + np.angle(g)


def count_zeros(model, kappa: float, radius: float, n_points: int = 4096) -> int:
    """Number of zeros of f inside |s| < radius, cut excluded."""
    if radius <= INNER_RADIUS:
        raise DomainError("radius must exceed the keyhole inner radius")
    theta = -np.pi + (np.arange(n_points) + 0.5) * (2.0 * np.pi / n_points)
    big = radius * np.exp(1j * theta)

    n_edge = max(n_points // 2, 256)
    q_in = np.logspace(np.log10(radius), np.log10(INNER_RADIUS), n_edge)
    q_out = q_in[::-1]
    n_small = 64
    phi = np.pi - (np.arange(n_small) + 0.5) * (2.0 * np.pi / n_small)
    small = INNER_RADIUS * np.exp(1j * phi)

    z = np.concatenate([
        big * eval_M(model, big),
        -q_in * eval_M_on_cut(model, q_in, "upper"),
        small * eval_M(model, small),
        -q_out * eval_M_on_cut(model, q_out, "lower"),
    ])
    z = np.append(z, z[0])
    phase = np.unwrap(_log_phase(z, kappa))
    return int(round((phase[-1] - phase[0]) / (2.0 * np.pi)))
