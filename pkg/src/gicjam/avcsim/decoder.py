"""Typicality-filtered minimum-distance decoder.

Receiver ``i`` searches all triples ``(m_ic, m_ip, m_jc)``. A triple survives
the typicality filter when the three codewords have empirical powers within
``eps`` (relative) of their codebook variances, are pairwise uncorrelated to
within ``eps`` (normalized correlation), and the residual
``y - h_ii x_ic - h_ii x_ip - h_ij x_jc`` is uncorrelated with each of them to
within ``eps``. Among survivors the closest triple wins; exact ties go to the
lexicographically smallest index.

Everything is computed from inner products: codeword Gram blocks are fixed per
codebook, so a received word only costs one matrix product per codebook.
"""
from __future__ import annotations

import numpy as np

from ..params import ChannelConfig
from .codebook import Codebooks

EVENTS = ("E0", "E1", "E2", "E3", "E4")


class Decoder:
    def __init__(self, cb: Codebooks, cfg: ChannelConfig, rx: int, epsilon: float):
        i, j = rx, 3 - rx
        self.rx = rx
        self.n = n = cb.n
        self.eps = float(epsilon)
        self.hii = hii = cfg.gain(i, i)
        self.hij = hij = cfg.gain(i, j)
        self.Xc = Xc = cb.common[i - 1]
        self.Xp = Xp = cb.private[i - 1]
        self.Xj = Xj = cb.common[j - 1]
        self.Mc, self.Mp = Xp.shape[:2]
        self.Mj = Xj.shape[0]
        self.vc, self.vp, self.vj = cb.var_common[i - 1], cb.var_private[i - 1], cb.var_common[j - 1]

        nc = np.einsum("mn,mn->m", Xc, Xc)
        npv = np.einsum("mkn,mkn->mk", Xp, Xp)
        nj = np.einsum("ln,ln->l", Xj, Xj)
        Gcp = np.einsum("mn,mkn->mk", Xc, Xp)
        Gcc = Xc @ Xj.T
        Gpc = np.einsum("mkn,ln->mkl", Xp, Xj)

        eps = self.eps
        self.static = (
            self._power_ok(nc, self.vc)[:, None, None]
            & self._power_ok(npv, self.vp)[:, :, None]
            & self._power_ok(nj, self.vj)[None, None, :]
            & (np.abs(Gcp) <= eps * n * np.sqrt(self.vc * self.vp))[:, :, None]
            & (np.abs(Gcc) <= eps * n * np.sqrt(self.vc * self.vj))[:, None, :]
            & (np.abs(Gpc) <= eps * n * np.sqrt(self.vp * self.vj))
        )
        # y-independent parts of ||r||^2 and <x, r>
        self.K0 = (hii * hii * (nc[:, None, None] + npv[:, :, None] + 2 * Gcp[:, :, None])
                   + hij * hij * nj[None, None, :]
                   + 2 * hii * hij * (Gcc[:, None, :] + Gpc))
        self.Kc = hii * (nc[:, None] + Gcp)[:, :, None] + hij * Gcc[:, None, :]
        self.Kp = hii * (Gcp + npv)[:, :, None] + hij * Gpc
        self.Kj = hii * (Gcc[:, None, :] + Gpc) + hij * nj[None, None, :]
        self.size = self.Mc * self.Mp * self.Mj

    def _power_ok(self, norms, var):
        return np.abs(norms / self.n - var) <= self.eps * var

    @property
    def shape(self):
        return self.Mc, self.Mp, self.Mj

    def flat_index(self, mc, mp, mj):
        return (np.asarray(mc) * self.Mp + np.asarray(mp)) * self.Mj + np.asarray(mj)

    def unflatten(self, k):
        return np.unravel_index(k, self.shape)

    def evaluate(self, Y: np.ndarray):
        """Squared residual norms and typical-set flags, shape ``(T, K)``."""
        Y = np.atleast_2d(np.asarray(Y, dtype=float))
        T, n = Y.shape
        sc = Y @ self.Xc.T
        sp = (Y @ self.Xp.reshape(-1, n).T).reshape(T, self.Mc, self.Mp)
        sj = Y @ self.Xj.T
        yy = np.einsum("tn,tn->t", Y, Y)
        dist = (yy[:, None, None, None]
                - 2 * self.hii * (sc[:, :, None, None] + sp[..., None])
                - 2 * self.hij * sj[:, None, None, :]
                + self.K0)
        np.maximum(dist, 0.0, out=dist)
        eps_n = self.eps * np.sqrt(n * dist)
        # roundoff allowance relative to ||y|| ||x||, so a zero residual passes
        ulp = 1e-9 * np.sqrt(n * yy)[:, None, None, None]
        ok = np.broadcast_to(self.static, dist.shape).copy()
        for s, K, v in ((sc[:, :, None, None], self.Kc, self.vc), (sp[..., None], self.Kp, self.vp),
                        (sj[:, None, None, :], self.Kj, self.vj)):
            ok &= np.abs(s - K) <= (eps_n + ulp) * np.sqrt(v)
        return dist.reshape(T, -1), ok.reshape(T, -1)

    def decode_batch(self, Y: np.ndarray, true_triples=None):
        """Decode each row of ``Y``.

        Returns flat winner indices (``-1`` for decode failure) and, when
        ``true_triples`` is given, a ``(T, 5)`` boolean array of error events
        E0..E4 relative to the true triples.
        """
        dist, ok = self.evaluate(Y)
        masked = np.where(ok, dist, np.inf)
        best = np.argmin(masked, axis=1)
        found = np.isfinite(masked[np.arange(len(best)), best])
        best = np.where(found, best, -1)
        if true_triples is None:
            return best, None
        tt = np.asarray(true_triples)
        kt = self.flat_index(tt[:, 0], tt[:, 1], tt[:, 2])
        rows = np.arange(len(kt))
        d_true = dist[rows, kt]
        in_T = ok & (dist <= d_true[:, None])
        mc, mp, mj = (a.ravel() for a in np.indices(self.shape))
        wc = mc[None, :] != tt[:, :1]
        wp = mp[None, :] != tt[:, 1:2]
        wj = mj[None, :] != tt[:, 2:3]
        events = np.stack([
            ~ok[rows, kt],
            (in_T & ~wc & wp & ~wj).any(axis=1),
            (in_T & wc & ~wj).any(axis=1),
            (in_T & ~wc & wp & wj).any(axis=1),
            (in_T & wc & wj).any(axis=1),
        ], axis=1)
        return best, events

    def decode(self, y: np.ndarray):
        """Decoded ``(m_ic, m_ip, m_jc)`` or ``None`` on decode failure."""
        k = int(self.decode_batch(y)[0][0])
        if k < 0:
            return None
        return tuple(int(v) for v in self.unflatten(k))


def decode(cb: Codebooks, y: np.ndarray, cfg: ChannelConfig, epsilon: float, rx: int = 1):
    return Decoder(cb, cfg, rx, epsilon).decode(y)
