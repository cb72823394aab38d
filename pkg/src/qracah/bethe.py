"""Bethe equation systems attached to the generator pair, a deterministic
multistart Newton solver, and eigenvalue reconstruction from roots.

Six system kinds are supported.  The two homogeneous kinds carry one
equation per root at any level 0..two_s; the four inhomogeneous kinds (two
direct, two dual) always carry two_s roots and an extra inhomogeneity term.
On-shell root sets reproduce entries of the eigenvalue sequences: the
homogeneous kinds through a probe-point evaluation of an eigenvalue
functional whose on-shell value is probe-independent, the inhomogeneous
kinds through closed-form symmetric functions of the roots.

The solver runs damped Newton iterations from seeded random starts in an
annulus around the unit circle, deduplicates converged root sets modulo
permutations and individual sign flips, filters by admissibility, and
matches reconstructed eigenvalues against the closed-form spectrum.  Every
step is deterministic for a fixed config, so repeated runs return
byte-identical results.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import ModelParams, StructureConstants, spectrum, structure_constants
from .qnum import qnumber

__all__ = [
    "KINDS",
    "HOM_KINDS",
    "INHOM_KINDS",
    "PoleError",
    "SolverConfig",
    "BetheSystem",
    "BetheSolution",
    "CoverageEntry",
    "CoverageReport",
    "lambda12",
    "exchange_fh",
    "gamma_eps",
    "etabar",
    "residual",
    "solve",
    "eigenvalue_from_roots",
    "hom_eigenvalue_functional",
    "dual_eigenvalue_functional",
    "symmetrize_roots",
    "coverage",
]

KINDS = (
    "hom_minus",
    "hom_plus",
    "inhom_plus",
    "inhom_minus",
    "dual_inhom_plus",
    "dual_inhom_minus",
)
HOM_KINDS = KINDS[:2]
INHOM_KINDS = KINDS[2:]

# sign epsilon entering the vacuum eigenvalue pair for each kind
_KIND_EPS = {
    "hom_minus": -1,
    "hom_plus": 1,
    "inhom_plus": 1,
    "inhom_minus": -1,
    "dual_inhom_plus": 1,
    "dual_inhom_minus": -1,
}

# which eigenvalue sequence an on-shell root set reproduces
TARGET_SPECTRUM = {
    "hom_minus": "theta",
    "hom_plus": "theta_star",
    "inhom_plus": "theta",
    "inhom_minus": "theta_star",
    "dual_inhom_plus": "theta",
    "dual_inhom_minus": "theta_star",
}


class PoleError(ValueError):
    """Evaluation requested too close to a pole of the coupling functions."""


@dataclass(frozen=True)
class SolverConfig:
    """Deterministic solver settings.

    Residual convergence is measured relative to the largest magnitude term
    entering each equation, so ``tol`` is scale-free across parameter draws.
    """

    starts: int = 400
    max_iter: int = 200
    seed: int = 42
    tol: float = 1e-10
    dedup_tol: float = 1e-6
    match_tol: float = 1e-6
    radius_lo: float = 0.35
    radius_hi: float = 2.85
    pole_margin: float = 1e-3
    probe_tol: float = 1e-8
    fd_step: float = 1e-7
    max_stall: int = 3


@dataclass(frozen=True)
class BetheSystem:
    """One system instance: kind, root count, and the parameter set."""

    kind: str
    level: int
    params: ModelParams

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"BetheSystem: unknown kind {self.kind!r}; choose one of {KINDS}")
        n = self.params.two_s
        if self.kind in HOM_KINDS:
            if not 0 <= self.level <= n:
                raise ValueError(f"BetheSystem: homogeneous level must lie in 0..{n}")
        elif self.level != n:
            raise ValueError(f"BetheSystem: inhomogeneous kinds need level == two_s == {n}")


@dataclass
class BetheSolution:
    """One deduplicated converged root set with its diagnostics."""

    roots: np.ndarray
    residual_max: float
    symmetrized: np.ndarray
    admissible: bool
    reconstructed_eigenvalue: complex | None
    matched_index: int | None
    match_error: float


@dataclass
class CoverageEntry:
    index: int
    hit: bool
    match_error: float
    solution: BetheSolution | None


@dataclass
class CoverageReport:
    kind: str
    entries: list[CoverageEntry]

    @property
    def all_hit(self) -> bool:
        return all(e.hit for e in self.entries)


# ---------------------------------------------------------------------------
# elementary kernels; they accept scalars or numpy arrays interchangeably


def _b(x):
    return x - 1.0 / x


def _lam1(eps: int, u, p: ModelParams):
    q = p.base.q
    n = p.two_s
    pref = q ** (-(n + 1)) * u ** (-eps)
    f1 = q ** (n + 1) * u / p.zeta - p.zeta / u
    f2 = q ** (n + 1) * u * p.zeta - 1.0 / (p.zeta * u)
    f3 = u * p.c_star * q ** (-n) + p.b * q**n / u
    if eps == 1:
        f4 = u + (p.b_star / p.b) / u
    else:
        f4 = u * (p.c / p.c_star) + 1.0 / u
    return pref * f1 * f2 * f3 * f4


def _lam2(eps: int, u, p: ModelParams):
    q = p.base.q
    n = p.two_s
    u2 = u * u
    pref = _b(u2) * q ** (-(n + 1)) / (u**eps * _b(q * u2))
    f1 = q ** (n - 1) * p.zeta / u - u / p.zeta
    f2 = q ** (n - 1) / (p.zeta * u) - u * p.zeta
    f3 = q * q * u * p.b * q**n + p.c_star * q ** (-n) / u
    if eps == 1:
        f4 = q * q * u * (p.b_star / p.b) + 1.0 / u
    else:
        f4 = q * q * u + (p.c / p.c_star) / u
    return pref * f1 * f2 * f3 * f4


def _f(u, v, q):
    return _b(q * v / u) * _b(u * v) / (_b(v / u) * _b(q * u * v))


def _h(u, v, q):
    return _b(q * q * u * v) * _b(q * u / v) / (_b(q * u * v) * _b(u / v))


def _inh_product(u, p: ModelParams):
    """Product over the inhomogeneity ladder; branch-independent because the
    factor count is even."""
    q = p.base.q
    n = p.two_s
    x = complex(q) ** ((1.0 - n) / 2.0)
    out = np.ones_like(u) if isinstance(u, np.ndarray) else 1.0 + 0j
    for _ in range(n + 1):
        out = out * _b(x * p.zeta * u) * _b(x * u / p.zeta)
        x *= q
    return out


def _etabar(u, sc: StructureConstants, q):
    return (q + 1.0 / q) / sc.rho * (sc.eta * u + sc.eta_star / u)


# ---------------------------------------------------------------------------
# public scalar wrappers


def lambda12(eps: int, u: complex, p: ModelParams) -> tuple[complex, complex]:
    """Vacuum eigenvalue pair at spectral point u for branch eps = +-1."""
    if eps not in (-1, 1):
        raise ValueError("lambda12: eps must be +1 or -1")
    if abs(u) < 1e-150:
        raise PoleError("lambda12: u too close to 0")
    if abs(_b(p.base.q * u * u)) < 1e-12 * max(1.0, abs(u) ** 2):
        raise PoleError("lambda12: second member evaluated at its pole")
    return complex(_lam1(eps, u, p)), complex(_lam2(eps, u, p))


def exchange_fh(u: complex, v: complex, p: ModelParams) -> tuple[complex, complex]:
    """Coupling pair (f, h) between spectral points u and v."""
    q = p.base.q
    scale = max(1.0, abs(u), abs(v))
    for den in (_b(v / u), _b(q * u * v), _b(u / v)):
        if abs(den) < 1e-12 * scale:
            raise PoleError("exchange_fh: coupling pole between u and v")
    return complex(_f(u, v, q)), complex(_h(u, v, q))


def gamma_eps(eps: int, u: complex, m: int, p: ModelParams) -> complex:
    """Off-diagonal gauge weight combination for branch eps = +-1."""
    if eps not in (-1, 1):
        raise ValueError("gamma_eps: eps must be +1 or -1")
    q = p.base.q
    if eps == 1:
        lead, trail = p.beta, p.alpha
    else:
        lead, trail = p.alpha, p.beta
    return lead * q ** (-m) * u - trail * q**m / u


def etabar(u: complex, sc: StructureConstants, p: ModelParams) -> complex:
    """Degree-one combination of the inhomogeneous structure constants."""
    if abs(u) < 1e-150:
        raise PoleError("etabar: u too close to 0")
    return complex(_etabar(u, sc, p.base.q))


# ---------------------------------------------------------------------------
# batched residual evaluation; rows are independent candidate root sets


def _pair_products(U: np.ndarray, q):
    S, L = U.shape
    F = np.ones((S, L), dtype=complex)
    H = np.ones((S, L), dtype=complex)
    for i in range(L):
        ui = U[:, i]
        for j in range(L):
            if j == i:
                continue
            uj = U[:, j]
            F[:, i] *= _f(ui, uj, q)
            H[:, i] *= _h(ui, uj, q)
    return F, H


def _coupling_denominator(U: np.ndarray, q):
    S, L = U.shape
    D = np.ones((S, L), dtype=complex)
    for i in range(L):
        ui = U[:, i]
        for j in range(L):
            if j == i:
                continue
            uj = U[:, j]
            D[:, i] *= _b(ui / uj) * _b(q * ui * uj)
    return D


def _residual_terms(kind: str, U: np.ndarray, p: ModelParams) -> list[np.ndarray]:
    q = p.base.q
    n = p.two_s
    eps = _KIND_EPS[kind]
    F, H = _pair_products(U, q)
    bU = _b(U * U)
    ratio = bU / _b(q * U * U)
    if kind in HOM_KINDS:
        return [-ratio * F * _lam1(eps, U, p), H * _lam2(eps, U, p)]
    inh = _inh_product(U, p) / _coupling_denominator(U, q)
    if kind in ("inhom_plus", "inhom_minus"):
        nu = q ** (-1 - 2 * n) * p.c_star if eps == 1 else q ** (1 + 2 * n) * p.b
        t1 = ratio * U**eps * F * _lam1(eps, U, p)
        t2 = -((q * q * U**3) ** (-eps)) * H * _lam2(eps, U, p)
        t3 = nu * U ** (-2 * eps) * bU / _b(q) * inh
        return [t1, t2, t3]
    nu = q ** (1 + 2 * n) * p.b_star if eps == 1 else q ** (-1 - 2 * n) * p.c
    t1 = ratio * U ** (-eps) * F * _lam1(eps, U, p)
    t2 = -((q * q * U**3) ** eps) * H * _lam2(eps, U, p)
    t3 = nu * bU / _b(q) * inh
    return [t1, t2, t3]


def _residual_batch(kind: str, U: np.ndarray, p: ModelParams):
    with np.errstate(all="ignore"):
        terms = _residual_terms(kind, U, p)
        E = terms[0]
        scale = np.abs(terms[0])
        for t in terms[1:]:
            E = E + t
            scale = np.maximum(scale, np.abs(t))
    return E, scale


def _scaled_norm(E: np.ndarray, scale: np.ndarray) -> np.ndarray:
    with np.errstate(all="ignore"):
        r = np.abs(E) / scale
    r = np.where(np.isfinite(r), r, np.inf)
    return r.max(axis=1)


def residual(sys: BetheSystem, roots, i: int) -> complex:
    """Value of equation i of the system at the given candidate roots.

    Raises PoleError when the evaluation point sits on a coupling or vacuum
    pole, and ValueError on index or length mismatches.
    """
    roots = np.asarray(roots, dtype=complex)
    if roots.shape != (sys.level,):
        raise ValueError(f"residual: expected {sys.level} roots, got {roots.shape}")
    if not 0 <= i < sys.level:
        raise ValueError(f"residual: equation index {i} outside 0..{sys.level - 1}")
    p = sys.params
    q = p.base.q
    scale = max(1.0, float(np.max(np.abs(roots))))
    if np.min(np.abs(roots)) < 1e-150:
        raise PoleError("residual: root too close to 0")
    if abs(_b(q * roots[i] ** 2)) < 1e-12 * scale:
        raise PoleError("residual: vacuum pole at root")
    for j in range(sys.level):
        if j == i:
            continue
        for den in (_b(roots[i] / roots[j]), _b(q * roots[i] * roots[j])):
            if abs(den) < 1e-12 * scale:
                raise PoleError("residual: coupling pole between roots")
    if sys.kind in INHOM_KINDS and abs(_b(roots[i] ** 2)) < 1e-150:
        raise PoleError("residual: inhomogeneity pole at root")
    E, _ = _residual_batch(sys.kind, roots[None, :], p)
    return complex(E[0, i])


# ---------------------------------------------------------------------------
# eigenvalue reconstruction


def symmetrize_roots(roots: np.ndarray, p: ModelParams) -> np.ndarray:
    """Sign-invariant per-root combination used for dedup and matching."""
    q = p.base.q
    r2 = np.asarray(roots, dtype=complex) ** 2
    return (q * r2 + 1.0 / (q * r2)) / (q + 1.0 / q)


def hom_eigenvalue_functional(eps: int, u: complex, roots, p: ModelParams,
                              sc: StructureConstants | None = None) -> complex:
    """Probe-point eigenvalue functional for the homogeneous kinds.

    On-shell (roots solving the level-L homogeneous system of branch eps)
    the value is independent of the probe u and equals the L-th entry of
    the matching eigenvalue sequence; off-shell it varies with u.
    """
    if sc is None:
        sc = structure_constants(p)
    q = p.base.q
    pf = 1.0 + 0j
    ph = 1.0 + 0j
    for v in np.asarray(roots, dtype=complex):
        pf *= _f(u, v, q)
        ph *= _h(u, v, q)
    b2 = _b(u * u)
    core = u**eps * (
        _lam1(eps, u, p) * pf / (b2 * _b(q * u * u))
        + _lam2(eps, u, p) * ph / (b2 * _b(q * q * u * u))
    )
    if eps == -1:
        tail = q * u * _etabar(u, sc, q) + _etabar(1.0 / u, sc, q) / (q * u)
    else:
        tail = q * u * _etabar(1.0 / u, sc, q) + _etabar(u, sc, q) / (q * u)
    return complex(core + tail / (b2 * _b(q * q * u * u)))


def dual_eigenvalue_functional(u: complex, roots, p: ModelParams,
                               sc: StructureConstants | None = None) -> complex:
    """Probe-point eigenvalue functional for dual_inhom_plus root sets.

    Independent route to the same eigenvalue as the closed-form
    reconstruction; on-shell the two agree and the value is probe-free.
    """
    if sc is None:
        sc = structure_constants(p)
    q = p.base.q
    n = p.two_s
    delta = p.b_star * q ** (2 * n)
    pf = 1.0 + 0j
    ph = 1.0 + 0j
    den = 1.0 + 0j
    for v in np.asarray(roots, dtype=complex):
        pf *= _f(u, v, q)
        ph *= _h(u, v, q)
        den *= _b(u / v) * _b(q * u * v)
    b2 = _b(u * u)
    t1 = (1.0 / u) * _lam1(1, u, p) * pf / (b2 * _b(q * u * u))
    t2 = q * q * u**3 * _lam2(1, u, p) * ph / (b2 * _b(q * q * u * u))
    t3 = -q * delta * _inh_product(u, p) / den
    t4 = (q * u * _etabar(u, sc, q) + _etabar(1.0 / u, sc, q) / (q * u)) / (b2 * _b(q * q * u * u))
    return complex(t1 + t2 + t3 + t4)


def _closed_form_eigenvalue(kind: str, roots: np.ndarray, p: ModelParams) -> complex:
    q = p.base.q
    n = p.two_s
    z = p.zeta**2 + 1.0 / p.zeta**2
    qn = qnumber(n, p.base)
    r2 = roots**2
    S = complex(np.sum(q * r2 + 1.0 / (q * r2)))
    if kind == "inhom_plus":
        return q ** (-2 * n) * (p.c_star * z * qn + q**n * (p.b * q**n + p.c * q**-n) - q * p.c_star * S)
    if kind == "inhom_minus":
        return q ** (2 * n) * (p.b * z * qn + q**-n * (p.b_star * q**n + p.c_star * q**-n) - p.b * S / q)
    if kind == "dual_inhom_plus":
        return q ** (2 * n) * (p.b_star * z * qn + q**-n * (p.b * q**n + p.c * q**-n) - p.b_star * S / q)
    return q ** (-2 * n) * (p.c * z * qn + q**n * (p.b_star * q**n + p.c_star * q**-n) - q * p.c * S)


def _probe_points(roots: np.ndarray, p: ModelParams, count: int = 3) -> list[complex]:
    """Deterministic pole-avoiding probe points in the sampling annulus."""
    q = p.base.q
    rng = np.random.default_rng(716213)
    out: list[complex] = []
    for _ in range(500):
        if len(out) == count:
            break
        r = float(np.exp(rng.uniform(np.log(0.6), np.log(1.7))))
        a = float(rng.uniform(0.0, 2.0 * np.pi))
        u = complex(r * np.cos(a), r * np.sin(a))
        ok = all(abs(_b(x)) > 1e-3 for x in (u * u, q * u * u, q * q * u * u))
        for v in roots:
            if not ok:
                break
            ok = abs(_b(u / v)) > 1e-3 and abs(_b(q * u * v)) > 1e-3
        if ok:
            out.append(u)
    if len(out) < count:
        raise ValueError("eigenvalue_from_roots: could not place probe points")
    return out


def eigenvalue_from_roots(sys: BetheSystem, roots, probe_tol: float = 1e-8) -> complex:
    """Eigenvalue reconstructed from an on-shell root set.

    Homogeneous kinds evaluate the probe functional at three points and
    insist on probe-independence within ``probe_tol``; inhomogeneous kinds
    use the closed-form symmetric function of the roots.
    """
    roots = np.asarray(roots, dtype=complex)
    if roots.shape != (sys.level,):
        raise ValueError(f"eigenvalue_from_roots: expected {sys.level} roots")
    p = sys.params
    if sys.kind in INHOM_KINDS:
        return _closed_form_eigenvalue(sys.kind, roots, p)
    sc = structure_constants(p)
    eps = _KIND_EPS[sys.kind]
    vals = [hom_eigenvalue_functional(eps, u, roots, p, sc) for u in _probe_points(roots, p)]
    spread = max(abs(a - b) for a in vals for b in vals)
    if spread > probe_tol * max(1.0, abs(vals[0])):
        raise ValueError(
            "eigenvalue_from_roots: probe dependence above tolerance "
            f"({spread:.3e}); roots are off shell"
        )
    return vals[0]


# ---------------------------------------------------------------------------
# multistart Newton solver


def _symmetrized_matrix(U: np.ndarray, q) -> np.ndarray:
    r2 = U**2
    return (q * r2 + 1.0 / (q * r2)) / (q + 1.0 / q)


def _near_poles(U: np.ndarray, p: ModelParams, margin: float) -> np.ndarray:
    q = p.base.q
    S, L = U.shape
    with np.errstate(all="ignore"):
        bad = ~np.isfinite(U).all(axis=1)
        bad |= np.abs(U).min(axis=1) < margin
        bad |= np.abs(_b(U * U)).min(axis=1) < margin
        bad |= np.abs(_b(q * U * U)).min(axis=1) < margin
        sym = _symmetrized_matrix(U, q)
        for i in range(L):
            for j in range(i + 1, L):
                bad |= np.abs(sym[:, i] - sym[:, j]) < margin
                bad |= np.abs(_b(U[:, i] / U[:, j])) < margin
                bad |= np.abs(_b(q * U[:, i] * U[:, j])) < margin
    return bad


def _sample_starts(rng, count: int, L: int, p: ModelParams, cfg: SolverConfig) -> np.ndarray:
    def draw(rows):
        rad = np.exp(rng.uniform(np.log(cfg.radius_lo), np.log(cfg.radius_hi), (rows, L)))
        ang = rng.uniform(0.0, 2.0 * np.pi, (rows, L))
        return rad * np.exp(1j * ang)

    U = draw(count)
    for _ in range(100):
        bad = _near_poles(U, p, cfg.pole_margin)
        if not bad.any():
            break
        U[bad] = draw(int(bad.sum()))
    return U


def _jacobian(kind: str, U: np.ndarray, p: ModelParams, fd: float) -> np.ndarray:
    S, L = U.shape
    J = np.empty((S, L, L), dtype=complex)
    for k in range(L):
        h = fd * np.maximum(1.0, np.abs(U[:, k]))
        Up = U.copy()
        Um = U.copy()
        Up[:, k] += h
        Um[:, k] -= h
        Ep, _ = _residual_batch(kind, Up, p)
        Em, _ = _residual_batch(kind, Um, p)
        J[:, :, k] = (Ep - Em) / (2.0 * h[:, None])
    return J


def _newton_step(J: np.ndarray, E: np.ndarray) -> np.ndarray:
    ok = np.isfinite(J).all(axis=(1, 2)) & np.isfinite(E).all(axis=1)
    delta = np.zeros_like(E)
    if ok.any():
        Jok = J[ok]
        Eok = E[ok]
        try:
            delta[ok] = np.linalg.solve(Jok, -Eok[:, :, None])[:, :, 0]
        except np.linalg.LinAlgError:
            out = np.zeros_like(Eok)
            for s in range(Jok.shape[0]):
                try:
                    out[s] = np.linalg.solve(Jok[s], -Eok[s])
                except np.linalg.LinAlgError:
                    out[s] = np.linalg.lstsq(Jok[s], -Eok[s], rcond=None)[0]
            delta[ok] = out
    return delta


def _canonical_roots(u: np.ndarray) -> np.ndarray:
    flip = (u.real < 0) | ((u.real == 0) & (u.imag < 0))
    v = np.where(flip, -u, u)
    order = np.lexsort((v.imag, v.real))
    return v[order]


def _sort_key(sym: np.ndarray) -> tuple:
    order = np.lexsort((sym.imag, sym.real))
    s = sym[order]
    return tuple(x for z in s for x in (z.real, z.imag))


def _match(lam: complex, targets: np.ndarray) -> tuple[int, float]:
    d = np.abs(targets - lam) / np.maximum(1.0, np.abs(targets))
    idx = int(np.argmin(d))
    return idx, float(d[idx])


def solve(sys: BetheSystem, cfg: SolverConfig = SolverConfig()) -> list[BetheSolution]:
    """All deduplicated converged root sets found from cfg.starts starts.

    Solutions are canonicalized (individual signs and ordering), then
    deduplicated on the symmetrized multiset, admissibility-filtered, and
    eigenvalue-matched.  The returned order is deterministic.
    """
    p = sys.params
    L = sys.level
    sp = spectrum(p)
    targets = getattr(sp, TARGET_SPECTRUM[sys.kind])

    if L == 0:
        lam = eigenvalue_from_roots(sys, np.empty(0, dtype=complex), cfg.probe_tol)
        idx, err = _match(lam, targets)
        empty = np.empty(0, dtype=complex)
        return [
            BetheSolution(
                roots=empty,
                residual_max=0.0,
                symmetrized=empty,
                admissible=True,
                reconstructed_eigenvalue=lam,
                matched_index=idx if err <= cfg.match_tol else None,
                match_error=err,
            )
        ]

    rng = np.random.default_rng(cfg.seed)
    U = _sample_starts(rng, cfg.starts, L, p, cfg)
    S = cfg.starts
    status = np.zeros(S, dtype=int)  # 0 active, 1 converged, 2 dead
    stall = np.zeros(S, dtype=int)

    for _ in range(cfg.max_iter):
        act = np.flatnonzero(status == 0)
        if act.size == 0:
            break
        Ua = U[act]
        E, scale = _residual_batch(sys.kind, Ua, p)
        r = _scaled_norm(E, scale)
        conv = r <= cfg.tol
        status[act[conv]] = 1
        dead = ~conv & (~np.isfinite(r) | (np.abs(Ua).max(axis=1) > 1e6) | (np.abs(Ua).min(axis=1) < 1e-6))
        status[act[dead]] = 2
        work = act[~conv & ~dead]
        if work.size == 0:
            continue
        sel = ~conv & ~dead
        Uw = Ua[sel]
        Ew = E[sel]
        rw = r[sel]
        J = _jacobian(sys.kind, Uw, p, cfg.fd_step)
        step = _newton_step(J, Ew)
        accepted = np.zeros(Uw.shape[0], dtype=bool)
        Unew = Uw.copy()
        for _half in range(11):
            trial = Uw + step
            Et, st = _residual_batch(sys.kind, trial, p)
            rt = _scaled_norm(Et, st)
            better = ~accepted & (rt < rw)
            Unew[better] = trial[better]
            accepted |= better
            if accepted.all():
                break
            step[~accepted] *= 0.5
        U[work] = Unew
        stall[work] = np.where(accepted, 0, stall[work] + 1)
        status[work[stall[work] >= cfg.max_stall]] = 2

    found = np.flatnonzero(status == 1)
    q = p.base.q
    candidates = []
    for s in found:
        roots = _canonical_roots(U[s])
        E, scale = _residual_batch(sys.kind, roots[None, :], p)
        res = float(_scaled_norm(E, scale)[0])
        if not np.isfinite(res) or res > cfg.tol:
            continue
        sym = symmetrize_roots(roots, p)
        order = np.lexsort((sym.imag, sym.real))
        candidates.append((roots, sym[order], res))
    candidates.sort(key=lambda c: (_sort_key(c[1]), c[2]))

    reps: list[list] = []
    for roots, sym, res in candidates:
        placed = False
        for rep in reps:
            ref = rep[1]
            tol = cfg.dedup_tol * max(1.0, float(np.max(np.abs(ref))), float(np.max(np.abs(sym))))
            if np.max(np.abs(sym - ref)) <= tol:
                if res < rep[2]:
                    rep[0], rep[1], rep[2] = roots, sym, res
                placed = True
                break
        if not placed:
            reps.append([roots, sym, res])

    out = []
    for roots, sym, res in reps:
        adm = bool(
            np.min(np.abs(roots)) > cfg.dedup_tol
            and np.min(np.abs(_b(roots**2))) > cfg.dedup_tol
        )
        if adm and L > 1:
            gaps = np.abs(sym[:, None] - sym[None, :])[np.triu_indices(L, 1)]
            adm = bool(np.min(gaps) > cfg.dedup_tol * max(1.0, float(np.max(np.abs(sym)))))
        lam = None
        idx = None
        err = np.inf
        if adm:
            try:
                lam = eigenvalue_from_roots(sys, roots, cfg.probe_tol)
            except ValueError:
                adm = False
            else:
                idx, err = _match(lam, targets)
                if err > cfg.match_tol:
                    idx = None
        out.append(
            BetheSolution(
                roots=roots,
                residual_max=res,
                symmetrized=sym,
                admissible=adm,
                reconstructed_eigenvalue=lam,
                matched_index=idx,
                match_error=err,
            )
        )
    out.sort(
        key=lambda s: (
            not s.admissible,
            s.matched_index if s.matched_index is not None else len(targets),
            _sort_key(s.symmetrized),
        )
    )
    return out


def coverage(kind: str, p: ModelParams, cfg: SolverConfig = SolverConfig()) -> CoverageReport:
    """Spectrum coverage sweep for one system kind.

    Homogeneous kinds solve every level and ask the level-L solution to
    reproduce the L-th eigenvalue; inhomogeneous kinds solve once at full
    size and ask the solution set to cover every index.  Misses are
    reported, not raised.
    """
    if kind not in KINDS:
        raise ValueError(f"coverage: unknown kind {kind!r}")
    entries: list[CoverageEntry] = []
    if kind in HOM_KINDS:
        for level in range(p.two_s + 1):
            sols = solve(BetheSystem(kind, level, p), cfg)
            best = None
            for s in sols:
                if s.admissible and s.matched_index == level:
                    if best is None or s.match_error < best.match_error:
                        best = s
            entries.append(
                CoverageEntry(level, best is not None,
                              best.match_error if best else np.inf, best)
            )
    else:
        sols = solve(BetheSystem(kind, p.two_s, p), cfg)
        for index in range(p.dim):
            best = None
            for s in sols:
                if s.admissible and s.matched_index == index:
                    if best is None or s.match_error < best.match_error:
                        best = s
            entries.append(
                CoverageEntry(index, best is not None,
                              best.match_error if best else np.inf, best)
            )
    return CoverageReport(kind=kind, entries=entries)
