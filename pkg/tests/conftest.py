"""Shared helpers: seeded generic parameter draws used across the suite."""

import numpy as np

from qracah.model import ModelParams, validate_genericity
from qracah.qnum import QBase


def _unit_phase(rng):
    phi = rng.uniform(0.0, 2.0 * np.pi)
    return complex(np.cos(phi), np.sin(phi))


def draw_params(two_s, rng, margin=1e-2, qmod=(1.06, 1.22)):
    """One generic parameter draw; rejection-sampled against the genericity
    screen with a safety margin so downstream denominators stay bounded."""
    for _ in range(200):
        q = float(np.exp(rng.uniform(np.log(qmod[0]), np.log(qmod[1])))) * _unit_phase(rng)
        b = float(np.exp(rng.uniform(np.log(0.6), np.log(1.6)))) * _unit_phase(rng)
        c = float(np.exp(rng.uniform(np.log(0.6), np.log(1.6)))) * _unit_phase(rng)
        b_star = float(np.exp(rng.uniform(np.log(0.6), np.log(1.6)))) * _unit_phase(rng)
        zeta = float(np.exp(rng.uniform(np.log(0.7), np.log(1.4)))) * _unit_phase(rng)
        p = ModelParams(
            base=QBase(q),
            two_s=two_s,
            b=b,
            c=c,
            b_star=b_star,
            c_star=b * c / b_star,
            zeta=zeta,
        )
        if not validate_genericity(p, tol=margin):
            return p
    raise RuntimeError("draw_params: no generic draw found in 200 attempts")


def draw_many(two_s, n, seed, **kw):
    rng = np.random.default_rng(seed)
    return [draw_params(two_s, rng, **kw) for _ in range(n)]
