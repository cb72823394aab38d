"""Transition matrices between the two eigenbases and the polynomial family
that fills them.

The entries are values of a terminating q-hypergeometric polynomial family
R_M evaluated on the second eigenvalue sequence.  Three independent
evaluation routes are provided: the defining series, propagation of the
three-term recurrence, and gauge-invariant double ratios of eigenvector
scalar products.  Cross-route agreement is a primary correctness check.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .leonard import GAUGE_THETA, GAUGE_THETA_STAR, EigenFamily, TridiagonalRealization, build, coeff
from .model import GenericityError, ModelParams, spectrum
from .qnum import bfun, phi43, qpoch

__all__ = [
    "TransitionData",
    "racah",
    "racah_matrix",
    "racah_by_recurrence",
    "normalizers",
    "build_transition",
    "verify_recurrences",
    "orthogonality_residuals",
    "racah_from_scalar_products",
    "NORMALIZER_KINDS",
    "bethe_normalizer",
]

_DEN_TOL = 1e-12


@dataclass(frozen=True)
class TransitionData:
    """Series-route polynomial table R[M, N], the two normalization
    sequences, the overall scale nu0, and the transition pair P, Pinv."""

    R: np.ndarray
    k_seq: np.ndarray
    k_seq_dual: np.ndarray
    nu0: complex
    P: np.ndarray
    Pinv: np.ndarray


def racah(M: int, N: int, p: ModelParams) -> complex:
    """Series-route value R_M at the N-th second eigenvalue."""
    n = p.two_s
    if not (0 <= M <= n and 0 <= N <= n):
        raise ValueError(f"racah: indices ({M}, {N}) outside 0..{n}")
    q = p.base.q
    q2 = p.base.q2
    z2 = p.zeta**2
    numer = [
        q ** (-2 * M),
        (p.b / p.c) * q ** (2 * M),
        q ** (-2 * N),
        (p.b_star / p.c_star) * q ** (2 * N),
    ]
    denom = [
        -(p.b / p.c_star) * q ** (n + 1) * z2,
        -(p.b_star / p.c) * q ** (n + 1) / z2,
        q ** (-2 * n),
    ]
    return phi43(numer, denom, q2, q2, terms=min(M, N) + 1)


def racah_matrix(p: ModelParams) -> np.ndarray:
    """Full series-route table, R[M, N] for 0 <= M, N <= two_s."""
    D = p.dim
    R = np.empty((D, D), dtype=complex)
    for M in range(D):
        for N in range(D):
            R[M, N] = racah(M, N, p)
    return R


def racah_by_recurrence(p: ModelParams) -> np.ndarray:
    """Table built by propagating the three-term recurrence up from row 0.

    Row 0 is all ones; row 1 inverts the recurrence at M = 0; higher rows
    propagate with the tridiagonal coefficients.  Independent of the series
    route except for sharing the coefficient formulas.
    """
    D = p.dim
    sp = spectrum(p)
    R = np.ones((D, D), dtype=complex)
    if D == 1:
        return R
    for M in range(D - 1):
        up = coeff("Astar", M, M + 1, p)
        if abs(up) <= _DEN_TOL:
            raise GenericityError("racah_by_recurrence: vanishing up-coupling")
        diag = coeff("Astar", M, M, p)
        rhs = (sp.theta_star - diag) * R[M]
        if M > 0:
            rhs = rhs - coeff("Astar", M, M - 1, p) * R[M - 1]
        R[M + 1] = rhs / up
    return R


def _k_sequence(q, two_s: int, b, c, bs, cs, zeta) -> np.ndarray:
    q2 = q * q
    D = two_s + 1
    num_params = (
        -(bs / c) * q ** (two_s + 1) / zeta**2,
        -(b / cs) * q ** (two_s + 1) * zeta**2,
        bs / cs,
        q ** (-2 * two_s),
    )
    den_params = (
        -(bs / b) * q ** (1 - two_s) / zeta**2,
        -(c / cs) * q ** (1 - two_s) * zeta**2,
        (bs / cs) * q ** (2 * two_s + 2),
    )
    pref_den = 1.0 - bs / cs
    if abs(pref_den) <= _DEN_TOL:
        raise GenericityError("normalizers: coupling ratio bs/cs is numerically 1")
    out = np.empty(D, dtype=complex)
    ratio = b / c
    for N in range(D):
        num = 1.0 + 0j
        for a in num_params:
            num *= qpoch(a, q2, N)
        den = qpoch(q2, q2, N)
        for a in den_params:
            den *= qpoch(a, q2, N)
        if abs(den) <= _DEN_TOL:
            raise GenericityError("normalizers: vanishing denominator factor")
        out[N] = num / den * (1.0 - (bs / cs) * q ** (4 * N)) / (ratio**N * pref_den)
    return out


def normalizers(p: ModelParams) -> tuple[np.ndarray, np.ndarray, complex]:
    """Normalization sequences k_seq, k_seq_dual and the overall scale nu0."""
    q = p.base.q
    n = p.two_s
    q2 = p.base.q2
    k_seq = _k_sequence(q, n, p.b, p.c, p.b_star, p.c_star, p.zeta)
    k_seq_dual = _k_sequence(q, n, p.b_star, p.c_star, p.b, p.c, 1.0 / p.zeta)
    num = qpoch((p.b / p.c) * q2, q2, n) * qpoch((p.b_star / p.c_star) * q2, q2, n)
    den = (
        (-(p.b_star / p.c) * q ** (n + 1) / p.zeta**2) ** n
        * qpoch(-(p.b / p.b_star) * q ** (1 - n) * p.zeta**2, q2, n)
        * qpoch(-(p.c / p.c_star) * q ** (1 - n) * p.zeta**2, q2, n)
    )
    if abs(den) <= _DEN_TOL:
        raise GenericityError("normalizers: vanishing nu0 denominator")
    return k_seq, k_seq_dual, num / den


def build_transition(p: ModelParams) -> TransitionData:
    """Transition pair P, Pinv from the series table and the normalizers."""
    R = racah_matrix(p)
    k_seq, k_seq_dual, nu0 = normalizers(p)
    P = R * k_seq[None, :]
    Pinv = (R.T * k_seq_dual[None, :]) / nu0
    return TransitionData(R=R, k_seq=k_seq, k_seq_dual=k_seq_dual, nu0=nu0, P=P, Pinv=Pinv)


def _coeff_matrix(kind: str, p: ModelParams) -> np.ndarray:
    D = p.dim
    out = np.zeros((D, D), dtype=complex)
    for col in range(D):
        for row in range(max(0, col - 1), min(D, col + 2)):
            out[row, col] = coeff(kind, row, col, p)
    return out


def verify_recurrences(td: TransitionData, p: ModelParams) -> tuple[float, float]:
    """Residuals of the three-term recurrence in M and the q-difference
    relation in N over the whole table, each relative to the largest
    eigenvalue-weighted table entry on its own side."""
    sp = spectrum(p)
    R = td.R
    lhs_rec = R * sp.theta_star[None, :]
    rec = np.max(np.abs(lhs_rec - _coeff_matrix("Astar", p) @ R)) / np.max(np.abs(lhs_rec))
    lhs_qd = sp.theta[:, None] * R
    qd = np.max(np.abs(lhs_qd - R @ _coeff_matrix("A", p).T)) / np.max(np.abs(lhs_qd))
    return float(rec), float(qd)


def orthogonality_residuals(td: TransitionData) -> tuple[float, float]:
    """Worst-case residuals of the two discrete orthogonality sums, each
    entry normalized by the larger of the two diagonal terms it involves."""
    out = []
    for R, w, other in (
        (td.R, td.k_seq, td.k_seq_dual),
        (td.R.T, td.k_seq_dual, td.k_seq),
    ):
        gram = R @ (w[:, None] * R.T)  # sum over the weighted index
        diag = td.nu0 / other
        expect = np.diag(diag)
        denom = np.maximum(np.abs(diag)[:, None], np.abs(diag)[None, :])
        out.append(float(np.max(np.abs(gram - expect) / denom)))
    return out[0], out[1]


def racah_from_scalar_products(fam: EigenFamily, M: int, N: int, form: str = "rac1") -> complex:
    """Double-ratio route through eigenvector scalar products.

    ``fam`` is the eigen family of the tridiagonal generator in the gauge
    where the second generator is diagonal, so standard basis vectors play
    the second eigenbasis.  Both forms are invariant under rescaling any
    eigenvector or covector, which is verified in tests.
    """
    if form == "rac1":
        w = fam.left
        num = w[M, N] * w[0, 0]
        den = w[0, N] * w[M, 0]
    elif form == "rac2":
        v = fam.right
        num = v[N, M] * v[0, 0]
        den = v[0, M] * v[N, 0]
    else:
        raise ValueError(f"racah_from_scalar_products: unknown form {form!r}")
    scale = max(abs(num), abs(den))
    if abs(den) <= 1e-14 * max(1.0, scale):
        raise ValueError("racah_from_scalar_products: vanishing scalar product in denominator")
    return num / den


NORMALIZER_KINDS = (
    "minus_hom",
    "plus_hom",
    "dual_minus_hom",
    "dual_plus_hom",
    "minus_inhom",
    "plus_inhom",
    "dual_minus_inhom",
    "dual_plus_inhom",
)


def _hom_normalizer(kind: str, roots, real: TridiagonalRealization) -> complex:
    p = real.params
    q = p.base.q
    out = 1.0 + 0j
    for k, u in enumerate(roots, start=1):
        if abs(u) < 1e-150:
            raise ValueError("bethe_normalizer: zero root")
        bu = bfun(u * u)
        if kind == "minus_hom":
            factor = q * u * bu * coeff("Astar", k, k - 1, p)
        elif kind == "plus_hom":
            factor = -(1.0 / q) * (1.0 / u) * bu * coeff("A", k, k - 1, p)
        elif kind == "dual_minus_hom":
            factor = (1.0 / q) * u * bu * coeff("Astar_dual", k, k - 1, p, xi=real.xi)
        else:  # dual_plus_hom
            factor = -q * (1.0 / u) * bu * coeff("A_dual", k, k - 1, p, xi_star=real.xi_star)
        if factor == 0:
            raise ValueError("bethe_normalizer: vanishing factor in the product")
        out /= factor
    return out


def bethe_normalizer(
    kind: str,
    roots,
    td: TransitionData,
    real: TridiagonalRealization,
    index: int,
) -> complex:
    """Normalization scalar attached to an on-shell Bethe root set.

    The four ``*_hom`` kinds take a level-``index`` root set (one factor per
    root, so ``index`` must equal ``len(roots)``).  The four ``*_inhom``
    kinds take a full-size root set (two_s roots), combine the matching
    homogeneous product with a transition-matrix entry at ``index``, and for
    the dual kinds a ratio of the gauge scales.
    """
    p = real.params
    n = p.two_s
    if kind not in NORMALIZER_KINDS:
        raise ValueError(f"bethe_normalizer: unknown kind {kind!r}")
    if kind.endswith("_hom"):
        if index != len(roots):
            raise ValueError("bethe_normalizer: level index must equal the root count")
        if not 0 <= index <= n:
            raise ValueError(f"bethe_normalizer: index {index} outside 0..{n}")
        return _hom_normalizer(kind, roots, real)
    if len(roots) != n:
        raise ValueError("bethe_normalizer: inhomogeneous kinds need two_s roots")
    if not 0 <= index <= n:
        raise ValueError(f"bethe_normalizer: index {index} outside 0..{n}")
    if kind == "minus_inhom":
        return _hom_normalizer("plus_hom", roots, real) * td.Pinv[n, index]
    if kind == "plus_inhom":
        return _hom_normalizer("minus_hom", roots, real) * td.P[n, index]
    if kind == "dual_minus_inhom":
        return (
            _hom_normalizer("dual_plus_hom", roots, real)
            * td.P[index, n]
            * real.xi[index]
            / real.xi_star[n]
        )
    return (
        _hom_normalizer("dual_minus_hom", roots, real)
        * td.Pinv[index, n]
        * real.xi_star[index]
        / real.xi[n]
    )
