"""Pure numpy implementation of the geometry kernels.

Mirrors the compiled module ``_kernels`` function for function; the package
falls back to it when the extension is not built.
"""

import numpy as np


def coupled_inverse_metric_batch(points, I_L, I_S, inv_I_LS):
    """Inverse metric of the coupled rotor at each row ``(theta, phi, theta', phi')``."""
    points = np.ascontiguousarray(points, dtype=float)
    th, ph, thp, php = points.T
    d = ph - php
    cot, cotp = 1.0 / np.tan(th), 1.0 / np.tan(thp)
    n = points.shape[0]
    G = np.zeros((n, 4, 4))
    G[:, 0, 0] = 1.0 / I_L
    G[:, 1, 1] = 1.0 / (I_L * np.sin(th) ** 2)
    G[:, 2, 2] = 1.0 / I_S
    G[:, 3, 3] = 1.0 / (I_S * np.sin(thp) ** 2)
    cross = np.empty((n, 2, 2))
    cross[:, 0, 0] = np.cos(d)
    cross[:, 0, 1] = cotp * np.sin(d)
    cross[:, 1, 0] = -cot * np.sin(d)
    cross[:, 1, 1] = cot * cotp * np.cos(d) + 1.0
    cross *= inv_I_LS
    G[:, :2, 2:] = cross
    G[:, 2:, :2] = np.transpose(cross, (0, 2, 1))
    return G


def coupled_metric_batch(points, I_L, I_S, inv_I_LS):
    """Return ``(g, ginv)`` stacks; ``g`` is symmetrised after inversion."""
    G = coupled_inverse_metric_batch(points, I_L, I_S, inv_I_LS)
    g = np.linalg.inv(G)
    g = 0.5 * (g + np.transpose(g, (0, 2, 1)))
    return g, G


def curvature_from_jets(g, dg, ddg):
    """Christoffel symbols, Ricci tensor and scalar curvature from metric jets.

    ``dg[k, i, j]`` is ``d_k g_ij`` and ``ddg[k, l, i, j]`` is ``d_k d_l g_ij``.
    Returns ``(Gamma, Ricci, R)`` with ``Gamma[r, b, c] = Gamma^r_bc``.
    """
    g = np.asarray(g, dtype=float)
    gi = np.linalg.inv(g)
    gi = 0.5 * (gi + gi.T)
    # first-kind symbols Gamma_abc = (d_b g_ac + d_c g_ab - d_a g_bc)/2
    Gl = 0.5 * (np.einsum("bac->abc", dg) + np.einsum("cab->abc", dg) - dg)
    Gu = np.einsum("ra,abc->rbc", gi, Gl)
    dGl = 0.5 * (np.einsum("mbac->mabc", ddg) + np.einsum("mcab->mabc", ddg) - ddg)
    dgi = -np.einsum("ra,mab,bs->mrs", gi, dg, gi)
    dGu = np.einsum("mra,abc->mrbc", dgi, Gl) + np.einsum("ra,mabc->mrbc", gi, dGl)
    # R_sn = d_r G^r_ns - d_n G^r_rs + G^r_rl G^l_ns - G^r_nl G^l_rs
    ricci = (np.einsum("rrns->sn", dGu) - np.einsum("nrrs->sn", dGu)
             + np.einsum("rrl,lns->sn", Gu, Gu) - np.einsum("rnl,lrs->sn", Gu, Gu))
    R = float(np.einsum("sn,sn->", gi, ricci))
    return Gu, ricci, R
