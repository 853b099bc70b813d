"""Phenomenological T1/T2 relaxation of deviation density matrices.

Populations decay exponentially toward the thermal deviation state with a
single T1. Each single-quantum coherence decays with the T2 of its own
transition; multiple-quantum coherences have no dedicated rate and default
to the outer-transition T2 (overridable via t2_multi_s).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .prep import equilibrium_state
from .system import SpinSystem, Transition, transition_table

# Defaults: one T1 for all lines; the outer lines relax much faster than the
# central one because order-parameter fluctuations hit them to first order.
DEFAULT_T1_S = 16e-3
DEFAULT_T2_CENTRAL_S = 14e-3
DEFAULT_T2_OUTER_S = 4e-3


@dataclass(frozen=True)
class RelaxationParams:
    t1_s: float = DEFAULT_T1_S
    t2_central_s: float = DEFAULT_T2_CENTRAL_S
    t2_outer_s: float = DEFAULT_T2_OUTER_S
    t2_multi_s: float | None = None   # None -> t2_outer_s

    def __post_init__(self):
        for name in ("t1_s", "t2_central_s", "t2_outer_s"):
            value = getattr(self, name)
            if not (np.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be positive and finite, got {value}")
        if self.t2_multi_s is not None and not (np.isfinite(self.t2_multi_s)
                                                and self.t2_multi_s > 0):
            raise ValueError("t2_multi_s must be positive and finite")

    @property
    def multi_quantum_t2_s(self) -> float:
        return self.t2_outer_s if self.t2_multi_s is None else self.t2_multi_s


def transition_t2_s(params: RelaxationParams, sys: SpinSystem, tr: Transition) -> float:
    return params.t2_central_s if tr.is_central(sys) else params.t2_outer_s


def apply_relaxation(rho: np.ndarray, dt_s: float, params: RelaxationParams,
                     sys: SpinSystem) -> np.ndarray:
    """Relax a deviation matrix for a time dt (exact exponential map).

    The map is a semigroup in dt, preserves Hermiticity and the trace, and
    has equilibrium_state(sys) as its fixed point.
    """
    if dt_s < 0:
        raise ValueError("relaxation interval must be nonnegative")
    rho = np.asarray(rho, dtype=complex)
    out = rho.copy()

    eq = np.diag(equilibrium_state(sys)).real
    decay1 = np.exp(-dt_s / params.t1_s)
    pops = np.diag(rho).real
    np.fill_diagonal(out, eq + (pops - eq) * decay1)

    t2 = np.empty((sys.dim, sys.dim))
    t2.fill(params.multi_quantum_t2_s)
    for tr in transition_table(sys):
        i, j = tr.upper_index, tr.lower_index
        t2[i, j] = t2[j, i] = transition_t2_s(params, sys, tr)
    off = ~np.eye(sys.dim, dtype=bool)
    out[off] = rho[off] * np.exp(-dt_s / t2[off])
    return out
