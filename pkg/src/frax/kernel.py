"""Fractional Poisson kernel, its radial Fourier profile, and derived constants.

The kernel of order ``s`` on R^n is

    p_t^s(x) = c(n,s) t^s / (|x|^2 + t^2)^((n+s)/2),
    c(n,s)   = Gamma((n+s)/2) / (pi^(n/2) Gamma(s/2)),

normalized so that p_t^s integrates to one.  Its Fourier transform is radial,

    FT[p_t^s](xi) = G_s(t |xi|) / Gamma(s/2),
    G_s(r)        = int_0^inf lam^(s/2-1) exp(-lam - r^2/(4 lam)) dlam,

and every scalar constant of the weighted-energy identities is a weighted
moment of G_s or of its derivative G_s'.  This module evaluates G_s by a
fixed positive quadrature rule and the moments by composite log-spaced
quadrature with analytic endpoint corrections.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gamma as _gamma

from .errors import DivergentMomentError, ParameterDomainError

__all__ = [
    "Params",
    "LaguerreRule",
    "KernelConstants",
    "default_rule",
    "eval_G",
    "eval_G_prime",
    "poisson_kernel",
    "fourier_symbol",
    "moment_constant",
    "energy_constant_dt",
    "energy_constant_grad",
    "energy_constant_frac",
    "constant_convergence",
]


@dataclass(frozen=True)
class Params:
    """Analytic parameter bundle shared by all modules.

    n      spatial dimension (1, 2 or 3)
    s      extension order, 0 < s < 2
    beta   derivative order of the boundary norm, > 0
    gamma  auxiliary fractional order, >= 0
    p, q, q0  integrability exponents (q may be inf)
    alpha  weight exponent of sigma(x,t) = t^alpha, >= 0
    """

    n: int = 1
    s: float = 1.0
    beta: float = 1.0
    gamma: float = 1.0
    p: float = 2.0
    q: float = 2.0
    q0: float = 2.0
    alpha: float = 0.0

    def __post_init__(self):
        if self.n not in (1, 2, 3):
            raise ParameterDomainError(f"n must be 1, 2 or 3, got {self.n}")
        if not 0.0 < self.s < 2.0:
            raise ParameterDomainError(f"s must lie in (0, 2), got {self.s}")
        if not self.beta > 0.0:
            raise ParameterDomainError(f"beta must be positive, got {self.beta}")
        if self.gamma < 0.0:
            raise ParameterDomainError(f"gamma must be nonnegative, got {self.gamma}")
        if not self.p > 0.0:
            raise ParameterDomainError(f"p must be positive, got {self.p}")
        if not self.q > 0.0:
            raise ParameterDomainError(f"q must be positive, got {self.q}")
        if not self.q0 > 0.0:
            raise ParameterDomainError(f"q0 must be positive, got {self.q0}")
        if self.alpha < 0.0:
            raise ParameterDomainError(f"alpha must be nonnegative, got {self.alpha}")


# Panel layout for the lambda-integral in u = ln(lambda) coordinates:
# (u_lo, u_hi, number of panels, Gauss-Legendre nodes per panel).  The range
# [-24, -1] resolves the exp(-r^2/(4 lam)) transition for every r >= 1e-4
# (smaller r switch to the series branch below); the top panels resolve the
# saddle lam ~ r/2 up to r ~ 60, beyond which G_s is below 1e-26; the head
# panels widen geometrically, matching the e^(u s/2) decay of the mass left
# of each edge.
_PANELS = (
    (-140.0, -66.0, 1, 3),
    (-66.0, -44.0, 1, 3),
    (-44.0, -32.0, 1, 4),
    (-32.0, -24.0, 1, 5),
    (-24.0, -14.0, 4, 10),
    (-14.0, -1.0, 5, 12),
    (-1.0, 1.4, 3, 13),
    (1.4, 2.8, 2, 13),
    (2.8, 4.3, 2, 10),
)
_BASE_COUNT = sum(np_ * m for _, _, np_, m in _PANELS)

# Below this r the quadrature hands over to the two-term small-argument
# expansion of G_s, whose truncation error is O(r^4) ~ 1e-16.
_R_SERIES = 1e-4

# Radial moment integrals: composite log-spaced Gauss-Legendre on
# [R_MIN, R_MAX] plus an analytic head on [0, R_MIN); the tail beyond R_MAX
# is below e^(-2*R_MAX) ~ 1e-53 by the exponential decay of G_s.
_R_MIN = 1e-8
_R_MAX = 60.0
_R_PANELS = 30
_R_NODES = 12


@dataclass(frozen=True)
class LaguerreRule:
    """Positive quadrature rule for integrals int_0^inf e^(-lam) g(lam) dlam.

    Nodes are placed by composite Gauss-Legendre panels in ln(lambda), with
    the weight e^(-lam) and the Jacobian folded into the weights, so that
    sum(w_k * g(lam_k)) approximates the integral.  All weights are strictly
    positive and nodes strictly increasing, which makes every G_s evaluation
    structurally positive and strictly decreasing in r.
    """

    nodes: np.ndarray
    weights: np.ndarray
    count: int

    @classmethod
    def build(cls, count: int = 200) -> "LaguerreRule":
        if count < 50:
            raise ParameterDomainError(f"rule needs at least 50 nodes, got {count}")
        scale = count / _BASE_COUNT
        nodes, weights = [], []
        for (a, b, npan, m) in _PANELS:
            m_eff = max(2, int(round(m * scale)))
            x, wq = np.polynomial.legendre.leggauss(m_eff)
            width = (b - a) / npan
            for k in range(npan):
                pa = a + width * k
                u = 0.5 * width * x + pa + 0.5 * width
                lam = np.exp(u)
                nodes.append(lam)
                weights.append(0.5 * width * wq * lam * np.exp(-lam))
        lam = np.concatenate(nodes)
        w = np.concatenate(weights)
        order = np.argsort(lam)
        lam, w = lam[order], w[order]
        if not (w > 0.0).all() or not (np.diff(lam) > 0.0).all():
            raise ParameterDomainError("rule construction produced invalid nodes/weights")
        return cls(nodes=lam, weights=w, count=len(lam))

    def self_test(self) -> float:
        """Relative error on int_0^inf e^(-lam) dlam = 1."""
        return abs(float(self.weights.sum()) - 1.0)

    def doubled(self) -> "LaguerreRule":
        return LaguerreRule.build(2 * self.count)


_DEFAULT_RULE: LaguerreRule | None = None


def default_rule() -> LaguerreRule:
    global _DEFAULT_RULE
    if _DEFAULT_RULE is None:
        _DEFAULT_RULE = LaguerreRule.build(200)
    return _DEFAULT_RULE


@dataclass(frozen=True)
class KernelConstants:
    """Scalar normalizations attached to a parameter bundle."""

    c_ns: float
    C_ns: float
    gamma_s_half: float

    @classmethod
    def from_params(cls, prm: Params) -> "KernelConstants":
        g = math.gamma(prm.s / 2.0)
        c_ns = math.gamma((prm.n + prm.s) / 2.0) / (math.pi ** (prm.n / 2.0) * g)
        return cls(c_ns=c_ns, C_ns=1.0 / g, gamma_s_half=g)


def _check_s(s: float) -> None:
    if not 0.0 < s < 2.0:
        raise ParameterDomainError(f"s must lie in (0, 2), got {s}")


def _eval_G_array(s: float, r: np.ndarray, rule: LaguerreRule) -> np.ndarray:
    out = np.empty_like(r)
    small = r < _R_SERIES
    if small.any():
        rs = r[small]
        nu = s / 2.0
        out[small] = _gamma(nu) * (1.0 + (rs * rs / 4.0) / (1.0 - nu)) + _gamma(-nu) * (
            rs / 2.0
        ) ** s * (1.0 + (rs * rs / 4.0) / (1.0 + nu))
    big = ~small
    if big.any():
        lam, w = rule.nodes, rule.weights
        coef = w * lam ** (s / 2.0 - 1.0)
        rb = r[big]
        vals = np.empty(rb.shape)
        # chunked so the (r, lambda) outer product stays below ~32 MB
        step = max(1, (1 << 22) // lam.size)
        for i in range(0, rb.size, step):
            block = rb[i : i + step, None]
            vals[i : i + step] = np.exp(-(block * block) / (4.0 * lam[None, :])) @ coef
        out[big] = vals
    return out


def eval_G(s: float, r, rule: LaguerreRule | None = None):
    """Radial Fourier profile G_s(r); scalar in, scalar out; array in, array out.

    Strictly positive and strictly decreasing in r (underflows to zero past
    r ~ 745).  At r = 0 the integral reduces to Gamma(s/2).
    """
    _check_s(s)
    rule = rule or default_rule()
    arr = np.asarray(r, dtype=float)
    if (arr < 0.0).any():
        raise ParameterDomainError("r must be nonnegative")
    flat = _eval_G_array(s, arr.reshape(-1), rule).reshape(arr.shape)
    if arr.ndim == 0:
        return float(flat)
    return flat


def eval_G_prime(s: float, r, rule: LaguerreRule | None = None):
    """Derivative G_s'(r) = -(r/2) int lam^(s/2-2) exp(-lam - r^2/(4 lam)) dlam.

    Evaluated through the substitution v = r^2/(4 lam), which turns the
    integral into -(r/2)^(s-1) G_{2-s}(r) exactly and removes the small-r
    blowup of the raw integrand.  Defined for r > 0 only; the bounded
    quantity is r^(1-s) G_s'(r) -> -Gamma(1 - s/2) 2^(1-s) as r -> 0.
    """
    _check_s(s)
    rule = rule or default_rule()
    arr = np.asarray(r, dtype=float)
    if (arr <= 0.0).any():
        raise ParameterDomainError("eval_G_prime requires r > 0")
    flat = arr.reshape(-1)
    vals = -((flat / 2.0) ** (s - 1.0)) * _eval_G_array(2.0 - s, flat, rule)
    vals = vals.reshape(arr.shape)
    if arr.ndim == 0:
        return float(vals)
    return vals


def poisson_kernel(prm: Params, x, t: float):
    """Fractional Poisson kernel p_t^s(x) for x of shape (..., n) (or scalars when n = 1)."""
    if t <= 0.0:
        raise ParameterDomainError(f"t must be positive, got {t}")
    consts = KernelConstants.from_params(prm)
    arr = np.asarray(x, dtype=float)
    scalar = arr.ndim == 0
    if prm.n == 1 and (arr.ndim == 0 or arr.shape[-1] != 1):
        arr = arr.reshape(arr.shape + (1,))
    if arr.shape[-1] != prm.n:
        raise ParameterDomainError(f"x must have {prm.n} components, got shape {arr.shape}")
    r2 = np.sum(arr * arr, axis=-1)
    vals = consts.c_ns * t ** prm.s * (r2 + t * t) ** (-(prm.n + prm.s) / 2.0)
    if scalar:
        return float(vals)
    return vals


def fourier_symbol(prm: Params, t: float, xi_norm, rule: LaguerreRule | None = None):
    """Fourier multiplier of p_t^s at frequency radius |xi|: G_s(t|xi|)/Gamma(s/2).

    Equals exactly 1 at xi = 0 (the kernel has unit mass) and lies in (0, 1].
    """
    if t <= 0.0:
        raise ParameterDomainError(f"t must be positive, got {t}")
    arr = np.asarray(xi_norm, dtype=float)
    if (arr < 0.0).any():
        raise ParameterDomainError("xi_norm must be nonnegative")
    consts = KernelConstants.from_params(prm)
    r = t * arr
    vals = np.where(
        r == 0.0,
        1.0,
        consts.C_ns * eval_G(prm.s, np.where(r == 0.0, 1.0, r), rule),
    )
    if arr.ndim == 0:
        return float(vals)
    return vals


def _radial_moment(
    s: float,
    a: float,
    rule: LaguerreRule,
    derivative: bool,
    panels: int = _R_PANELS,
    gl_nodes: int = _R_NODES,
) -> float:
    """int_0^inf F(r)^2 r^a dr with F = G_s or G_s', log-spaced panels + analytic head.

    Head on [0, R_MIN) from the small-argument expansion:
      G_s(r)^2  ~ Gamma(s/2)^2 + 2 Gamma(s/2) Gamma(-s/2) (r/2)^s
      G_s'(r)^2 ~ (r/2)^(2s-2) * [Gamma(1-s/2)^2 + 2 Gamma(1-s/2) Gamma(s/2-1) (r/2)^(2-s)]
    The tail past R_MAX is bounded by e^(-2 R_MAX) and dropped.
    """
    nu = s / 2.0
    if derivative:
        # integrand (r/2)^(2s-2) G_{2-s}(r)^2 r^a
        lead_pow = a + 2.0 * s - 1.0  # exponent of r in the head integral + 1
        if lead_pow <= 0.0:
            raise DivergentMomentError(
                f"derivative moment diverges: need a > 1 - 2s, got a={a}, s={s}"
            )
        head = (0.25 ** (s - 1.0)) * (
            _gamma(1.0 - nu) ** 2 * _R_MIN ** lead_pow / lead_pow
            + 2.0
            * _gamma(1.0 - nu)
            * _gamma(nu - 1.0)
            * 2.0 ** (s - 2.0)
            * _R_MIN ** (lead_pow + 2.0 - s)
            / (lead_pow + 2.0 - s)
        )

        def f(r):
            return (r / 2.0) ** (s - 1.0) * _eval_G_array(2.0 - s, r, rule)

    else:
        lead_pow = a + 1.0
        if a <= -(s + 1.0):
            raise DivergentMomentError(
                f"moment diverges: need a > -(s+1), got a={a}, s={s}"
            )
        head = (
            _gamma(nu) ** 2 * _R_MIN ** lead_pow / lead_pow
            + 2.0
            * _gamma(nu)
            * _gamma(-nu)
            * 2.0 ** (-s)
            * _R_MIN ** (lead_pow + s)
            / (lead_pow + s)
        )

        def f(r):
            return _eval_G_array(s, r, rule)

    x, wq = np.polynomial.legendre.leggauss(gl_nodes)
    edges = np.linspace(math.log(_R_MIN), math.log(_R_MAX), panels + 1)
    total = head
    for pa, pb in zip(edges[:-1], edges[1:]):
        u = 0.5 * (pb - pa) * x + 0.5 * (pa + pb)
        du = 0.5 * (pb - pa) * wq
        r = np.exp(u)
        total += float((f(r) ** 2 * r ** (a + 1.0) * du).sum())
    return total


def moment_constant(prm: Params, a: float, rule: LaguerreRule | None = None) -> float:
    """C(n,s,a) = Gamma(s/2)^(-2) int_0^inf G_s(r)^2 r^a dr.

    This is the constant of the weighted second-moment identity
    int_0^inf |FT[p_t^s](xi)|^2 t^a dt = C(n,s,a) |xi|^(-(a+1)).
    """
    _check_s(prm.s)
    rule = rule or default_rule()
    val = _radial_moment(prm.s, a, rule, derivative=False)
    return val / math.gamma(prm.s / 2.0) ** 2


def energy_constant_dt(prm: Params, rule: LaguerreRule | None = None) -> float:
    """a(n,s,beta) = Gamma(s/2)^(-2) int G_s'(r)^2 r^(1-beta) dr, for 0 < beta < 2s."""
    _check_s(prm.s)
    if not 0.0 < prm.beta < 2.0 * prm.s:
        raise DivergentMomentError(
            f"time-derivative energy needs beta in (0, 2s); got beta={prm.beta}, s={prm.s}"
        )
    rule = rule or default_rule()
    val = _radial_moment(prm.s, 1.0 - prm.beta, rule, derivative=True)
    return val / math.gamma(prm.s / 2.0) ** 2


def energy_constant_grad(prm: Params, rule: LaguerreRule | None = None) -> float:
    """Gamma(s/2)^(-2) [int G_s^2 r^(1-beta) dr + int G_s'^2 r^(1-beta) dr].

    Exact constant of the full-gradient identity: the spatial part contributes
    the G_s moment, the t-derivative part the G_s' moment.
    """
    _check_s(prm.s)
    if not 0.0 < prm.beta < 2.0 * prm.s:
        raise DivergentMomentError(
            f"gradient energy needs beta in (0, 2s); got beta={prm.beta}, s={prm.s}"
        )
    rule = rule or default_rule()
    g2 = math.gamma(prm.s / 2.0) ** 2
    grad_part = _radial_moment(prm.s, 1.0 - prm.beta, rule, derivative=False)
    dt_part = _radial_moment(prm.s, 1.0 - prm.beta, rule, derivative=True)
    return (grad_part + dt_part) / g2


def energy_constant_frac(prm: Params, rule: LaguerreRule | None = None) -> float:
    """Gamma(s/2)^(-2) int G_s(r)^2 r^(2*gamma - beta - 1) dr.

    Admissibility is that of moment_constant with a = 2*gamma - beta - 1,
    equivalently gamma > (beta - s)/2.
    """
    a = 2.0 * prm.gamma - prm.beta - 1.0
    if a <= -(prm.s + 1.0):
        raise DivergentMomentError(
            "fractional energy needs gamma > (beta - s)/2; got "
            f"gamma={prm.gamma}, beta={prm.beta}, s={prm.s}"
        )
    return moment_constant(prm, a, rule)


def constant_convergence(prm: Params, rule: LaguerreRule | None = None) -> dict:
    """Relative change of every kernel constant when the rule count doubles.

    The returned map is the non-convergence report: any entry above 1e-8
    means the quadrature has not settled at this parameter point.
    """
    rule = rule or default_rule()
    big = rule.doubled()
    out = {}
    for name, fn in (
        ("moment_a0", lambda r: moment_constant(prm, 0.0, r)),
        ("moment_a1", lambda r: moment_constant(prm, 1.0, r)),
        ("energy_dt", lambda r: energy_constant_dt(prm, r)),
        ("energy_grad", lambda r: energy_constant_grad(prm, r)),
        ("energy_frac", lambda r: energy_constant_frac(prm, r)),
    ):
        try:
            v1, v2 = fn(rule), fn(big)
        except DivergentMomentError:
            continue
        out[name] = abs(v1 / v2 - 1.0) if v2 != 0.0 else abs(v1 - v2)
    return out
