"""Small dense linear algebra: exact rational elimination and a Jacobi symmetric eigensolver.

Nonsymmetric spectral radii are only ever computed through an explicit diagonal
similarity that makes the matrix symmetric; there is no general eigensolver here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from occucert.config import TOL

RationalMatrix = list[list[Fraction]]

SYMMETRY_TOL = 1e-12
SIMILARITY_TOL = 1e-10
JACOBI_TOL = 1e-12


class SingularMatrixError(ValueError):
    def __init__(self, rank: int, size: int):
        super().__init__(f"matrix is singular (rank {rank} < {size})")
        self.rank = rank
        self.size = size


class AsymmetricMatrixError(ValueError):
    pass


class SpectralRadiusError(ValueError):
    """Raised when a series needs spectral radius < 1 and the operator does not have it."""


def rational_matrix(rows: Sequence[Sequence]) -> RationalMatrix:
    m = [[x if isinstance(x, Fraction) else Fraction(x) for x in row] for row in rows]
    if not m or any(len(r) != len(m[0]) for r in m) or not m[0]:
        raise ValueError("rational matrix must be nonempty and rectangular")
    return m


def matvec_exact(m: Sequence[Sequence[Fraction]], x: Sequence[Fraction]) -> list[Fraction]:
    return [sum((a * b for a, b in zip(row, x)), Fraction(0)) for row in m]


def matmul_exact(a: Sequence[Sequence[Fraction]], b: Sequence[Sequence[Fraction]]) -> RationalMatrix:
    cols = list(zip(*b))
    return [[sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in cols] for row in a]


def _eliminate(m: RationalMatrix, rhs: RationalMatrix) -> RationalMatrix:
    """Gauss-Jordan with full pivoting on ``[m | rhs]``; returns the solution block."""
    n = len(m)
    if any(len(r) != n for r in m):
        raise ValueError("matrix must be square")
    a = [list(r) for r in m]
    b = [list(r) for r in rhs]
    col_perm = list(range(n))
    for k in range(n):
        pivot = None
        best = Fraction(0)
        for i in range(k, n):
            for j in range(k, n):
                if abs(a[i][j]) > best:
                    best, pivot = abs(a[i][j]), (i, j)
        if pivot is None:
            raise SingularMatrixError(k, n)
        pi, pj = pivot
        a[k], a[pi] = a[pi], a[k]
        b[k], b[pi] = b[pi], b[k]
        if pj != k:
            for row in a:
                row[k], row[pj] = row[pj], row[k]
            col_perm[k], col_perm[pj] = col_perm[pj], col_perm[k]
        inv = 1 / a[k][k]
        a[k] = [x * inv for x in a[k]]
        b[k] = [x * inv for x in b[k]]
        for i in range(n):
            f = a[i][k]
            if i != k and f:
                a[i] = [x - f * y for x, y in zip(a[i], a[k])]
                b[i] = [x - f * y for x, y in zip(b[i], b[k])]
    out = [None] * n
    for k in range(n):
        out[col_perm[k]] = b[k]
    return out


def solve_exact(m: Sequence[Sequence], b: Sequence) -> list[Fraction]:
    """Exact solution of ``m x = b`` over the rationals."""
    mm = rational_matrix(m)
    if len(b) != len(mm):
        raise ValueError("right-hand side length does not match matrix")
    sol = _eliminate(mm, [[Fraction(x)] for x in b])
    return [row[0] for row in sol]


def inverse_exact(m: Sequence[Sequence]) -> RationalMatrix:
    mm = rational_matrix(m)
    n = len(mm)
    ident = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    return _eliminate(mm, ident)


@dataclass(frozen=True)
class Spectrum:
    eigenvalues: np.ndarray  # ascending
    vectors: np.ndarray  # columns are orthonormal eigenvectors


def _check_symmetric(m: np.ndarray, tol: float = SYMMETRY_TOL) -> np.ndarray:
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise AsymmetricMatrixError("expected a square matrix")
    scale = max(1.0, float(np.max(np.abs(m)))) if m.size else 1.0
    if m.size and np.max(np.abs(m - m.T)) > tol * scale:
        raise AsymmetricMatrixError(f"matrix not symmetric (max |M - M^T| = {np.max(np.abs(m - m.T)):.3g})")
    return m


def symmetric_spectrum(m: np.ndarray, tol: float = JACOBI_TOL, max_sweeps: int = 100) -> Spectrum:
    """Full eigendecomposition by cyclic Jacobi rotations."""
    a = _check_symmetric(m).copy()
    a = (a + a.T) / 2
    n = a.shape[0]
    q = np.eye(n)
    target = tol * max(1.0, float(np.linalg.norm(a)))
    for _ in range(max_sweeps):
        off = float(np.linalg.norm(a - np.diag(np.diag(a))))
        if off <= target:
            break
        for p in range(n - 1):
            for r in range(p + 1, n):
                apr = a[p, r]
                if apr == 0.0:
                    continue
                theta = (a[r, r] - a[p, p]) / (2.0 * apr)
                if abs(theta) > 1e150:
                    t = 0.5 / theta
                else:
                    t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                ap, ar = a[:, p].copy(), a[:, r].copy()
                a[:, p] = c * ap - s * ar
                a[:, r] = s * ap + c * ar
                ap, ar = a[p, :].copy(), a[r, :].copy()
                a[p, :] = c * ap - s * ar
                a[r, :] = s * ap + c * ar
                a[p, r] = a[r, p] = 0.0
                qp, qr = q[:, p].copy(), q[:, r].copy()
                q[:, p] = c * qp - s * qr
                q[:, r] = s * qp + c * qr
    else:
        raise RuntimeError("Jacobi iteration did not converge")
    vals = np.diag(a).copy()
    order = np.argsort(vals, kind="stable")
    return Spectrum(vals[order], q[:, order])


def spectral_radius_symmetric(m: np.ndarray) -> float:
    if np.asarray(m).size == 0:
        return 0.0
    vals = symmetric_spectrum(m).eigenvalues
    return float(max(abs(vals[0]), abs(vals[-1])))


def spectral_radius_similar(t: np.ndarray, symmetrizer: Sequence[float]) -> float:
    """rho(T) via S = P T P^{-1}, P = diag(symmetrizer)^{1/2}, which must come out symmetric."""
    t = np.asarray(t, dtype=float)
    sym = np.asarray(symmetrizer, dtype=float)
    if np.any(sym <= 0):
        raise ValueError("symmetrizer entries must be positive")
    p = np.sqrt(sym)
    s = p[:, None] * t / p[None, :]
    scale = max(1.0, float(np.max(np.abs(s)))) if s.size else 1.0
    if s.size and np.max(np.abs(s - s.T)) > SIMILARITY_TOL * scale:
        raise AsymmetricMatrixError("conjugated matrix is not symmetric; wrong symmetrizer")
    return spectral_radius_symmetric((s + s.T) / 2)


def operator_norm(m: np.ndarray) -> float:
    """Largest singular value, from the spectrum of M^T M."""
    m = np.asarray(m, dtype=float)
    if m.size == 0:
        return 0.0
    gram = m.T @ m
    top = float(symmetric_spectrum((gram + gram.T) / 2).eigenvalues[-1])
    return math.sqrt(max(top, 0.0))


def neumann_partial_sums(
    t: np.ndarray, b: Sequence[float], k: int, symmetrizer: Sequence[float] | None = None
) -> list[np.ndarray]:
    """Partial sums x_j = sum_{i<=j} T^i b for j = 0..k.

    rho(T) < 1 is checked through ``symmetrizer`` when given, directly when T is
    symmetric, and otherwise through the bound rho(T) <= ||T||.
    """
    t = np.asarray(t, dtype=float)
    if symmetrizer is not None:
        rho = spectral_radius_similar(t, symmetrizer)
    elif t.size and np.allclose(t, t.T, atol=SYMMETRY_TOL, rtol=0):
        rho = spectral_radius_symmetric(t)
    else:
        rho = operator_norm(t)
    if rho >= 1 - TOL.strict_margin:
        raise SpectralRadiusError(f"Neumann series needs spectral radius < 1, got {rho:.12g}")
    term = np.asarray(b, dtype=float).copy()
    total = term.copy()
    out = [total.copy()]
    for _ in range(k):
        term = t @ term
        total = total + term
        out.append(total.copy())
    return out


@dataclass(frozen=True)
class PSDResult:
    ok: bool
    min_eigenvalue: float
    tolerance: float
    witness: np.ndarray | None  # eigenvector of the offending eigenvalue

    def __bool__(self) -> bool:
        return self.ok


def psd_check(m: np.ndarray, abs_tol: float = TOL.abs_tol) -> PSDResult:
    m = _check_symmetric(m)
    if m.size == 0:
        return PSDResult(True, 0.0, abs_tol, None)
    spec = symmetric_spectrum(m)
    norm = float(max(abs(spec.eigenvalues[0]), abs(spec.eigenvalues[-1])))
    tol = abs_tol * (1 + norm)
    lo = float(spec.eigenvalues[0])
    if lo >= -tol:
        return PSDResult(True, lo, tol, None)
    return PSDResult(False, lo, tol, spec.vectors[:, 0].copy())


def to_json_rational(m: Sequence[Sequence[Fraction]]) -> list[list[str]]:
    return [[str(x) for x in row] for row in m]
