"""Numerical spherical harmonics (Condon-Shortley phase)."""

from __future__ import annotations

import math

import numpy as np
from scipy.special import lpmv


def sph_harm(l: int, m: int, theta, phi):
    """Complex ``Y_lm(theta, phi)``; theta is the polar angle."""
    if abs(m) > l:
        return np.zeros(np.broadcast(theta, phi).shape, dtype=complex)
    am = abs(m)
    norm = math.sqrt((2 * l + 1) / (4 * math.pi)
                     * math.factorial(l - am) / math.factorial(l + am))
    # lpmv already includes the (-1)^m Condon-Shortley factor
    y = norm * lpmv(am, l, np.cos(theta)) * np.exp(1j * am * np.asarray(phi))
    if m < 0:
        y = (-1) ** am * np.conj(y)
    return y


def real_sph_harm(l: int, m: int, theta, phi):
    """Real combination of ``Y_l,+-m``; an eigenfunction of the sphere Laplacian."""
    y = sph_harm(l, abs(m), theta, phi)
    if m > 0:
        return math.sqrt(2) * y.real
    if m < 0:
        return math.sqrt(2) * y.imag
    return y.real


def unit_vector(theta, phi):
    return np.stack([np.sin(theta) * np.cos(phi),
                     np.sin(theta) * np.sin(phi),
                     np.cos(theta)], axis=-1)
