"""Model parameters, algebra structure constants, eigenvalue sequences, and
genericity screening.

A parameter set consists of a deformation base q, a nonnegative half-integer
spin encoded as the integer two_s = 2s, four nonzero couplings b, c, b_star,
c_star constrained by b*c = b_star*c_star, a nonzero twist zeta, an integer
offset m0, a free nonzero scale chi, and two gauge weights alpha, beta that
are normally populated by :func:`fix_alpha_beta`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .qnum import QBase

__all__ = [
    "GenericityError",
    "ModelParams",
    "StructureConstants",
    "Spectrum",
    "structure_constants",
    "spectrum",
    "fix_alpha_beta",
    "FIX_MODES",
    "validate_genericity",
]


class GenericityError(ValueError):
    """Parameters sit on (or numerically too close to) a degenerate locus."""


_COUPLING_REL_TOL = 1e-10


@dataclass(frozen=True)
class ModelParams:
    """Validated parameter set; immutable once constructed."""

    base: QBase
    two_s: int
    b: complex
    c: complex
    b_star: complex
    c_star: complex
    zeta: complex
    m0: int = 0
    chi: complex = 1.0 + 0j
    alpha: complex = 0j
    beta: complex = 0j
    degeneracy_tol: float = 1e-8

    def __post_init__(self):
        if not isinstance(self.two_s, int) or self.two_s < 1:
            raise ValueError("ModelParams: two_s must be an integer >= 1")
        for name in ("b", "c", "b_star", "c_star", "zeta", "chi"):
            val = complex(getattr(self, name))
            object.__setattr__(self, name, val)
            if val == 0:
                raise ValueError(f"ModelParams: {name} must be nonzero")
        object.__setattr__(self, "alpha", complex(self.alpha))
        object.__setattr__(self, "beta", complex(self.beta))
        lhs = self.b * self.c
        rhs = self.b_star * self.c_star
        if abs(lhs - rhs) > _COUPLING_REL_TOL * max(abs(lhs), abs(rhs)):
            raise ValueError(
                "ModelParams: coupling constraint b*c = b_star*c_star violated: "
                f"|b*c - b_star*c_star| = {abs(lhs - rhs):.3e}"
            )

    @property
    def dim(self) -> int:
        """Dimension of the module, two_s + 1."""
        return self.two_s + 1


@dataclass(frozen=True)
class StructureConstants:
    """Coefficients of the quadratic algebra relations."""

    rho: complex
    omega: complex
    eta: complex
    eta_star: complex


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalue sequences of the two generators."""

    theta: np.ndarray
    theta_star: np.ndarray


def structure_constants(p: ModelParams) -> StructureConstants:
    """Structure constants determined by the couplings and the twist."""
    q = p.base.q
    n = p.two_s
    z2 = p.zeta**2
    zsum = z2 + 1.0 / z2
    qq = q * q
    d2 = (qq - 1.0 / qq) ** 2  # (q^2 - q^-2)^2
    d1sq = (q - 1.0 / q) ** 2  # (q - q^-1)^2
    ths = p.b * q**n + p.c * q**-n          # theta at the midpoint shift
    ths_star = p.b_star * q**n + p.c_star * q**-n
    qs = q ** (n + 1) + q ** (-n - 1)        # q^(2s+1) + q^-(2s+1)
    bc = p.b * p.c
    rho = -bc * d2
    omega = d1sq * (bc * zsum * qs - ths * ths_star)
    pref = -d2 / (q + 1.0 / q)
    eta = pref * bc * (ths * zsum - ths_star * qs)
    eta_star = pref * p.b_star * p.c_star * (ths_star * zsum - ths * qs)
    return StructureConstants(rho=rho, omega=omega, eta=eta, eta_star=eta_star)


def spectrum(p: ModelParams) -> Spectrum:
    """Eigenvalue sequences; raises GenericityError on numerical degeneracy."""
    q = p.base.q
    idx = np.arange(p.dim)
    qq = q ** (2 * idx)
    theta = p.b * qq + p.c / qq
    theta_star = p.b_star * qq + p.c_star / qq
    for name, vals in (("theta", theta), ("theta_star", theta_star)):
        scale = np.max(np.abs(vals))
        diff = np.abs(vals[:, None] - vals[None, :])
        diff[np.diag_indices(p.dim)] = np.inf
        i, j = np.unravel_index(np.argmin(diff), diff.shape)
        if diff[i, j] <= p.degeneracy_tol * max(1.0, scale):
            raise GenericityError(
                f"spectrum: {name}[{i}] and {name}[{j}] numerically coincide "
                f"(gap {diff[i, j]:.3e})"
            )
    return Spectrum(theta=theta, theta_star=theta_star)


FIX_MODES = (
    "minus_vacuum",
    "plus_vacuum",
    "dual_minus",
    "dual_plus",
    "lemma33_B_plus",
    "lemma33_B_minus",
    "lemma33_C_plus",
    "lemma33_C_minus",
)


def fix_alpha_beta(p: ModelParams, mode: str) -> tuple[complex, complex]:
    """Gauge weights (alpha, beta) for the requested reference-state mode.

    Each mode pins one weight through a linear condition and zeroes the
    other.  The defining conditions, with d = q^2 - q^-2 and k = chi:

    - minus_vacuum:     d * alpha * b * q^-m0 / k = -1, beta = 0
    - plus_vacuum:      d * alpha * c_star * q^m0 / k = 1, beta = 0
    - dual_minus:       d * beta * c * q^(m0-2) / k = -1, alpha = 0
    - dual_plus:        d * beta * b_star * q^(2-m0) / k = 1, alpha = 0
    - lemma33_B_plus:   d * beta * b_star * q^-m0 / k = 1, alpha = 0
    - lemma33_B_minus:  d * beta * c * q^m0 / k = -1, alpha = 0
    - lemma33_C_plus:   d * alpha * c_star * q^m0 / k = 1, beta = 0
    - lemma33_C_minus:  d * alpha * b * q^-m0 / k = -1, beta = 0
    """
    if p.chi == 0:
        raise ValueError("fix_alpha_beta: chi must be nonzero")
    q = p.base.q
    d = p.base.q2 - 1.0 / p.base.q2
    m0 = p.m0
    if mode == "minus_vacuum":
        return -p.chi * q**m0 / (d * p.b), 0j
    if mode == "plus_vacuum":
        return p.chi / (d * p.c_star * q**m0), 0j
    if mode == "dual_minus":
        return 0j, -p.chi / (d * p.c * q ** (m0 - 2))
    if mode == "dual_plus":
        return 0j, p.chi / (d * p.b_star * q ** (2 - m0))
    if mode == "lemma33_B_plus":
        return 0j, p.chi * q**m0 / (d * p.b_star)
    if mode == "lemma33_B_minus":
        return 0j, -p.chi / (d * p.c * q**m0)
    if mode == "lemma33_C_plus":
        return p.chi / (d * p.c_star * q**m0), 0j
    if mode == "lemma33_C_minus":
        return -p.chi * q**m0 / (d * p.b), 0j
    raise ValueError(f"fix_alpha_beta: unknown mode {mode!r}; choose one of {FIX_MODES}")


def _series_denominator_params(p: ModelParams) -> list[tuple[str, complex]]:
    """Base-q^2 parameters whose shifted factorials appear in denominators."""
    q = p.base.q
    n = p.two_s
    z2 = p.zeta**2
    return [
        ("k_seq denominator (twist, minus branch)", -(p.b_star / p.b) * q ** (1 - n) / z2),
        ("k_seq denominator (twist, plus branch)", -(p.c / p.c_star) * q ** (1 - n) * z2),
        ("k_seq denominator (ratio)", (p.b_star / p.c_star) * q ** (2 * n + 2)),
        ("k_seq_dual denominator (twist, minus branch)", -(p.b / p.b_star) * q ** (1 - n) * z2),
        ("k_seq_dual denominator (twist, plus branch)", -(p.c_star / p.c) * q ** (1 - n) / z2),
        ("k_seq_dual denominator (ratio)", (p.b / p.c) * q ** (2 * n + 2)),
        ("series denominator (twist, plus branch)", -(p.b / p.c_star) * q ** (n + 1) * z2),
        ("series denominator (twist, minus branch)", -(p.b_star / p.c) * q ** (n + 1) / z2),
    ]


def validate_genericity(p: ModelParams, tol: float = 1e-8) -> list[str]:
    """Diagnostics for every non-generic condition found; empty means generic.

    Checked conditions: q**(2k) = 1 within the working range, coincident
    eigenvalues, vanishing tridiagonal denominators c - b*q^(2k) and
    c_star - b_star*q^(2k) (k = 0 covers b = c and b_star = c_star), and
    vanishing normalization and series denominator parameters.
    """
    issues: list[str] = []
    q = p.base.q
    n = p.two_s

    for k in p.base.unit_power_violations(2 * n + 2, tol):
        issues.append(f"q^(2k) = 1 at k = {k}")

    try:
        spectrum(p)
    except GenericityError as exc:
        issues.append(str(exc))

    for label, x, y in (("c - b*q^(2k)", p.c, p.b), ("c_star - b_star*q^(2k)", p.c_star, p.b_star)):
        for k in range(2 * n + 1):
            d = x - y * q ** (2 * k)
            if abs(d) <= tol * max(abs(x), abs(y * q ** (2 * k))):
                issues.append(f"{label} vanishes at k = {k}")

    for label, a in _series_denominator_params(p):
        # orders 0..two_s-1 occur inside (a; q^2)_N factors with N <= two_s
        for j in range(n):
            d = 1.0 - a * p.base.q2**j
            if abs(d) <= tol * max(1.0, abs(a * p.base.q2**j)):
                issues.append(f"{label} parameter hits 1 at order {j}")

    # deduplicate while preserving order
    seen: set[str] = set()
    out = []
    for msg in issues:
        if msg not in seen:
            seen.add(msg)
            out.append(msg)
    return out
