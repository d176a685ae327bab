"""Adjacency spectra of regular graphs and the spectral set-count bounds."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse.linalg as sla

from rlab.graph import Graph, GraphError

DENSE_LIMIT = 2000


@dataclass(frozen=True)
class SpectralReport:
    n: int
    lambda1: float
    lambda2: float
    lambdan: float
    method: str
    residual: float

    @property
    def lam(self) -> float:
        """Second largest absolute eigenvalue max(|λ2|, |λn|)."""
        return max(abs(self.lambda2), abs(self.lambdan))

    def as_dict(self) -> dict:
        return {"n": self.n, "d": self.lambda1, "lambda": self.lam, "lambda2": self.lambda2,
                "lambdan": self.lambdan, "method": self.method, "residual": self.residual}


def spectrum(g: Graph) -> np.ndarray:
    """Full ascending adjacency spectrum (dense)."""
    return np.linalg.eigvalsh(g.sparse.toarray())


def lambda_report(g: Graph, tol: float = 1e-8, *, force_iterative: bool = False) -> SpectralReport:
    """λ(g) for a regular graph.

    Dense ``eigvalsh`` up to ``DENSE_LIMIT`` vertices; above that Lanczos
    (ARPACK) on the adjacency operator restricted to the complement of the
    all-ones vector, for both ends of the spectrum.
    """
    if tol <= 0:
        raise GraphError("tol must be positive")
    if not g.is_regular():
        raise GraphError("spectral bounds need a regular graph")
    n = g.n
    if n < 2:
        raise GraphError("need at least two vertices")
    d = float(g.max_degree)
    if n <= DENSE_LIMIT and not force_iterative:
        ev = spectrum(g)
        # the all-ones eigenvalue d is the top one; drop one copy of it
        rest = np.delete(ev, int(np.argmin(np.abs(ev - d))))
        return SpectralReport(n, float(ev[-1]), float(rest[-1]), float(rest[0]), "dense-eigvalsh",
                              float(abs(ev.sum())))
    A = g.sparse
    ones = np.full(n, 1.0 / math.sqrt(n))

    def mv(x):
        x = x - ones * (ones @ x)
        y = A @ x
        return y - ones * (ones @ y)

    op = sla.LinearOperator((n, n), matvec=mv, dtype=np.float64)
    rng = np.random.default_rng(0)
    v0 = rng.standard_normal(n)
    v0 -= ones * (ones @ v0)
    try:
        hi, vh = sla.eigsh(op, k=1, which="LA", tol=tol, v0=v0, maxiter=20 * n)
        lo, vl = sla.eigsh(op, k=1, which="SA", tol=tol, v0=v0, maxiter=20 * n)
    except sla.ArpackNoConvergence as exc:
        raise RuntimeError("eigensolver did not converge") from exc
    res = max(np.linalg.norm(mv(vh[:, 0]) - hi[0] * vh[:, 0]), np.linalg.norm(mv(vl[:, 0]) - lo[0] * vl[:, 0]))
    return SpectralReport(n, d, float(hi[0]), float(lo[0]), "lanczos-deflated", float(res))


def lam(g: Graph, tol: float = 1e-8) -> float:
    return lambda_report(g, tol).lam


@dataclass(frozen=True)
class BoundCheck:
    actual: float
    bound: float
    ok: bool


_SLACK = 1e-9


def mixing_check(g: Graph, lam_value: float, U, W) -> BoundCheck:
    """|e(U,W) - |U||W|d/n| against (λ/n)·sqrt(|U|(n-|U|)|W|(n-|W|))."""
    U = list(U)
    W = list(W)
    if not U or not W:
        raise GraphError("U and W must be nonempty")
    if set(U) & set(W):
        raise GraphError("U and W must be disjoint")
    n, d = g.n, g.max_degree
    u, w = len(U), len(W)
    dev = abs(g.e_between(U, W) - u * w * d / n)
    bound = lam_value / n * math.sqrt(u * (n - u) * w * (n - w))
    return BoundCheck(dev, bound, dev <= bound + _SLACK)


def boundary_bound(g: Graph, lam_value: float, U) -> BoundCheck:
    """e(U, V∖U) against (d-λ)|U|(n-|U|)/n."""
    U = list(U)
    n, d = g.n, g.max_degree
    rest = np.setdiff1d(np.arange(n), U)
    actual = g.e_between(U, rest) if len(U) and len(rest) else 0
    bound = (d - lam_value) * len(U) * (n - len(U)) / n
    return BoundCheck(actual, bound, actual >= bound - _SLACK)


def density_bound(g: Graph, lam_value: float, U) -> BoundCheck:
    """e(U) against (d/n)C(|U|,2) + (λ/n)|U|(n-|U|/2)."""
    U = list(U)
    n, d = g.n, g.max_degree
    u = len(U)
    actual = g.e_inside(U)
    bound = d / n * u * (u - 1) / 2 + lam_value / n * u * (n - u / 2)
    return BoundCheck(actual, bound, actual <= bound + _SLACK)


def batch_mixing_violations(g: Graph, lam_value: float, rng: np.random.Generator, pairs: int) -> int:
    """Count violations of all three bounds over ``pairs`` random disjoint (U, W).

    Vectorised: subsets are indicator columns and every count is one sparse
    product, so 10⁴ pairs cost a handful of matrix multiplications.
    """
    n, d = g.n, g.max_degree
    A = g.sparse
    bad = 0
    chunk = 500
    done = 0
    while done < pairs:
        b = min(chunk, pairs - done)
        labels = np.zeros((n, b), dtype=np.int8)
        # random sizes, random labels in {0: neither, 1: U, 2: W}
        pu = rng.uniform(0.01, 0.6, size=b)
        pw = rng.uniform(0.01, 0.6, size=b) * (1 - pu)
        r = rng.random((n, b))
        labels[r < pu] = 1
        labels[(r >= pu) & (r < pu + pw)] = 2
        X = (labels == 1).astype(np.float64)
        Y = (labels == 2).astype(np.float64)
        u = X.sum(axis=0)
        w = Y.sum(axis=0)
        AX = A @ X
        e_uw = np.einsum("ij,ij->j", AX, Y)
        e_in = np.einsum("ij,ij->j", AX, X) / 2
        e_out = u * d - 2 * e_in
        valid = (u > 0) & (w > 0)
        dev = np.abs(e_uw - u * w * d / n)
        mix_b = lam_value / n * np.sqrt(u * (n - u) * w * (n - w))
        bnd_b = (d - lam_value) * u * (n - u) / n
        den_b = d / n * u * (u - 1) / 2 + lam_value / n * u * (n - u / 2)
        bad += int(np.sum(valid & (dev > mix_b + _SLACK)))
        bad += int(np.sum(e_out < bnd_b - _SLACK))
        bad += int(np.sum(e_in > den_b + _SLACK))
        done += b
    return bad
