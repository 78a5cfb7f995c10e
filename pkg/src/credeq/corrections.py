"""Asymptotic price corrections, the eight Greeks, and the combined price.

The corrected price is P0 plus a fast-scale and a slow-scale adjustment,
each a linear combination of Greeks of the closed-form P0 with calibrated
group coefficients:

    fast = V1*g1 + V2*g2 + l*V3*g3 + V4*g4 + V5*g5 + V6*g6
    slow = V1'*g7 + l*V2'*g8

where l is the structural loss rate of the instrument: options on the
defaultable stock always carry l = 1 (the stock is wiped out at default),
bonds carry their recovery-of-market-value loss rate. The Greeks are

    g1 = -tau * x^2 P0_xx            g5 = x P0_eta,x
    g2 = -tau * x d/dx (x^2 P0_xx)   g6 = x P0_alpha,x
    g3 = d/dalpha (x P0_x - P0)      g7 = tau^2/2 * x^2 P0_xx
    g4 = x^2 P0_xx,alpha             g8 = (1/beta)[ g6 - P0_alpha
                                          + tau^2/2 (x^2 P0_xx - x P0_x + P0)
                                          - tau (x P0_rx - P0_r) ]

For the bond the x-derivatives vanish and the two surviving combinations
are taken in the bond-curve convention used by the calibration:

    g3_bond = dBc/dalpha
    g8_bond = (1/beta)[ -dBc/dalpha + tau^2/2 Bc + tau dBc/dr ].

All call Greeks are closed-form; put Greeks follow from put = call - x + K*B
(only g3 and g8 pick up extra terms). A finite-difference engine with
Richardson extrapolation over the same closed forms serves as an
independent cross-check.

Variants: ``seven_param`` uses all eight coefficients; ``three_param``
(constant volatility) keeps {V1, V3, V1', V2'}; ``index`` (no default risk,
lambda = 0) keeps {V1, V2, V4, V5, V6} and drops the slow correction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ConfigurationError, NumericalError, ValidationError
from .pricing import (
    PricingInputs,
    call_p0,
    defaultable_bond_p0,
    norm_cdf,
    norm_pdf,
    put_p0,
    variance_v,
    _survival_bond,
    _log_survival_bond,
)
from .rates import (
    VasicekParams,
    factor_a_deta,
    factor_b,
    int_b,
    int_b_squared,
    riskless_bond,
)

__all__ = [
    "CorrectionParams",
    "GreekVector",
    "VARIANTS",
    "greeks",
    "greeks_fd",
    "p0_partials",
    "correction_fast",
    "correction_slow",
    "price_full",
    "price_p0",
]

VARIANTS = ("seven_param", "three_param", "index")


@dataclass(frozen=True)
class CorrectionParams:
    """Fast-scale (v1..v6) and slow-scale (w1, w2) group coefficients.

    Signs are unconstrained; calibrated values are routinely negative.
    """

    v1: float = 0.0
    v2: float = 0.0
    v3: float = 0.0
    v4: float = 0.0
    v5: float = 0.0
    v6: float = 0.0
    w1: float = 0.0
    w2: float = 0.0

    def __post_init__(self):
        for name in ("v1", "v2", "v3", "v4", "v5", "v6", "w1", "w2"):
            if not math.isfinite(getattr(self, name)):
                raise ValidationError(f"correction coefficient {name} must be finite")


@dataclass(frozen=True)
class GreekVector:
    g1: float
    g2: float
    g3: float
    g4: float
    g5: float
    g6: float
    g7: float
    g8: float

    def as_tuple(self):
        return (self.g1, self.g2, self.g3, self.g4, self.g5, self.g6, self.g7, self.g8)


def _structural_loss(inputs: PricingInputs, kind: str) -> float:
    """Options lose the full stock at default; bonds lose their loss-rate fraction."""
    if kind in ("call", "put"):
        return 1.0
    if kind == "bond":
        return inputs.credit.l
    raise ValidationError(f"unknown instrument kind {kind!r}")


def price_p0(inputs: PricingInputs, kind: str) -> float:
    """Leading-order price of the given instrument kind."""
    if kind == "call":
        return call_p0(inputs)
    if kind == "put":
        return put_p0(inputs)
    if kind == "bond":
        return defaultable_bond_p0(inputs)
    raise ValidationError(f"unknown instrument kind {kind!r}")


def p0_partials(inputs: PricingInputs, kind: str):
    """Analytic (P0, x*dP0/dx, dP0/dalpha, dP0/dr) for the closed forms."""
    va, tau = inputs.vasicek, inputs.tau
    b = factor_b(va.beta, tau)
    big_a = int_b(va.beta, tau)
    if kind == "bond":
        bond = defaultable_bond_p0(inputs)
        return bond, 0.0, -big_a * bond, -b * bond
    if kind not in ("call", "put"):
        raise ValidationError(f"unknown instrument kind {kind!r}")
    bbar = _survival_bond(inputs)
    v = variance_v(inputs)
    sv = math.sqrt(v)
    x_eff, strike = inputs.x_eff, inputs.strike
    log_ratio = math.log(x_eff / strike) - _log_survival_bond(inputs)
    d1 = (log_ratio + 0.5 * v) / sv
    d2 = (log_ratio - 0.5 * v) / sv
    kb = strike * bbar
    p0 = x_eff * norm_cdf(d1) - kb * norm_cdf(d2)
    x_dpdx = x_eff * norm_cdf(d1)
    dp_dalpha = kb * big_a * norm_cdf(d2)
    dp_dr = kb * b * norm_cdf(d2)
    if kind == "put":
        kb0 = strike * riskless_bond(va, tau)
        p0 += -x_eff + kb0
        x_dpdx -= x_eff
        dp_dalpha -= kb0 * big_a
        dp_dr -= kb0 * b
    return p0, x_dpdx, dp_dalpha, dp_dr


def greeks(inputs: PricingInputs, kind: str) -> GreekVector:
    """Closed-form Greek vector g1..g8 for a call, put, or bond."""
    if kind == "bond":
        return _bond_greeks(inputs)
    if kind not in ("call", "put"):
        raise ValidationError(f"unknown instrument kind {kind!r}")
    if inputs.strike is None:
        raise ValidationError("option greeks require a strike")
    if inputs.tau <= 0:
        raise ValidationError("option greeks require tau > 0")

    va = inputs.vasicek
    tau, strike = inputs.tau, inputs.strike
    x_eff = inputs.x_eff
    bbar = _survival_bond(inputs)
    v = variance_v(inputs)
    sv = math.sqrt(v)
    log_ratio = math.log(x_eff / strike) - _log_survival_bond(inputs)
    d1 = (log_ratio + 0.5 * v) / sv
    d2 = (log_ratio - 0.5 * v) / sv

    b = factor_b(va.beta, tau)
    big_a = int_b(va.beta, tau)  # -(da/dalpha) = (tau - b)/beta
    a_eta = factor_a_deta(va, tau)
    # dv/deta at fixed rho1*sigma2 coupling.
    v_eta = 2 * va.eta * int_b_squared(va.beta, tau) + 2 * inputs.equity.rho1 * inputs.equity.sigma2 * int_b(va.beta, tau)

    gamma2 = x_eff * norm_pdf(d1) / sv  # x^2 P0_xx
    kb = strike * bbar

    g1 = -tau * gamma2
    g2 = -tau * gamma2 * (1 - d1 / sv)
    g3 = -kb * big_a * (norm_cdf(d2) - norm_pdf(d2) / sv)
    g4 = -gamma2 * d1 * big_a / sv
    g5 = x_eff * norm_pdf(d1) * (-a_eta / sv + v_eta * (0.25 / sv - 0.5 * log_ratio / (v * sv)))
    g6 = gamma2 * big_a
    g7 = 0.5 * tau * tau * gamma2

    p0 = x_eff * norm_cdf(d1) - kb * norm_cdf(d2)  # call value
    dp_dalpha = kb * big_a * norm_cdf(d2)
    x_dpdx = x_eff * norm_cdf(d1)
    dp_dr = kb * b * norm_cdf(d2)
    x_dpdrdx = b * gamma2

    if kind == "put":
        riskless = riskless_bond(va, tau)
        kb0 = strike * riskless
        g3 = g3 + kb0 * big_a  # -K * dB/dalpha
        p0 = p0 - x_eff + kb0
        dp_dalpha = dp_dalpha - kb0 * big_a
        x_dpdx = x_dpdx - x_eff
        dp_dr = dp_dr - kb0 * b

    g8 = (
        g6
        - dp_dalpha
        + 0.5 * tau * tau * (gamma2 - x_dpdx + p0)
        - tau * (x_dpdrdx - dp_dr)
    ) / va.beta

    return GreekVector(g1, g2, g3, g4, g5, g6, g7, g8)


def _bond_greeks(inputs: PricingInputs) -> GreekVector:
    va, tau = inputs.vasicek, inputs.tau
    bond = defaultable_bond_p0(inputs)
    b = factor_b(va.beta, tau)
    big_a = int_b(va.beta, tau)
    g3 = -big_a * bond  # dBc/dalpha
    g8 = bond * (big_a + 0.5 * tau * tau - tau * b) / va.beta
    return GreekVector(0.0, 0.0, g3, 0.0, 0.0, 0.0, 0.0, g8)


def correction_fast(inputs: PricingInputs, coeffs: CorrectionParams, kind: str) -> float:
    """Fast-scale price adjustment V1*g1 + V2*g2 + l*V3*g3 + V4*g4 + V5*g5 + V6*g6."""
    g = greeks(inputs, kind)
    l_eff = _structural_loss(inputs, kind)
    return (
        coeffs.v1 * g.g1
        + coeffs.v2 * g.g2
        + l_eff * coeffs.v3 * g.g3
        + coeffs.v4 * g.g4
        + coeffs.v5 * g.g5
        + coeffs.v6 * g.g6
    )


def correction_slow(inputs: PricingInputs, coeffs: CorrectionParams, kind: str) -> float:
    """Slow-scale price adjustment V1'*g7 + l*V2'*g8.

    The first-order (1-l) term of the general slow correction vanishes for
    both supported cases: options carry l = 1 and the bond price has no
    x-dependence.
    """
    g = greeks(inputs, kind)
    l_eff = _structural_loss(inputs, kind)
    return coeffs.w1 * g.g7 + l_eff * coeffs.w2 * g.g8


def _check_variant(inputs: PricingInputs, coeffs: CorrectionParams, variant: str) -> None:
    if variant not in VARIANTS:
        raise ConfigurationError(f"unknown variant {variant!r}; expected one of {VARIANTS}")
    if variant == "index":
        if inputs.credit.lam != 0.0:
            raise ConfigurationError("index variant requires zero default intensity")
        bad = [n for n in ("v3", "w1", "w2") if getattr(coeffs, n) != 0.0]
        if bad:
            raise ConfigurationError(
                f"index variant ignores coefficients {bad}; pass them as zero"
            )
    elif variant == "three_param":
        bad = [n for n in ("v2", "v4", "v5", "v6") if getattr(coeffs, n) != 0.0]
        if bad:
            raise ConfigurationError(
                f"three_param variant ignores coefficients {bad}; pass them as zero"
            )


def price_full(
    inputs: PricingInputs,
    coeffs: CorrectionParams,
    kind: str,
    variant: str = "seven_param",
) -> float:
    """P0 plus the variant's applicable corrections. Never clamps the result.

    ``index`` omits the slow correction entirely; the result is bit-identical
    to ``seven_param`` with lambda = 0 and v3 = w1 = w2 = 0.
    """
    _check_variant(inputs, coeffs, variant)
    p0 = price_p0(inputs, kind)
    fast = correction_fast(inputs, coeffs, kind)
    if variant == "index":
        price = p0 + fast
    else:
        price = p0 + fast + correction_slow(inputs, coeffs, kind)
    if not math.isfinite(price):
        raise NumericalError(f"corrected {kind} price is not finite")
    return price


# ---------------------------------------------------------------------------
# Finite-difference cross-check engine
# ---------------------------------------------------------------------------

# Richardson-extrapolated central differences over the closed-form P0.
# Step sizes grow with derivative order: roundoff in a k-th order stencil
# scales like eps / h^k, so h = 1e-4 is reserved for first derivatives and
# nested/higher stencils use wider steps (the closed forms vary on O(1)
# parameter scales, so the Richardson truncation stays ~h^4).
FD_STEP_FIRST = 1e-4
FD_STEP_SECOND = 2e-3
FD_STEP_PARAM = 5e-3
FD_STEP_THIRD = 6e-3


def _richardson_d1(f, x0: float, h: float) -> float:
    def central(step):
        return (f(x0 + step) - f(x0 - step)) / (2 * step)

    if h <= 0 or x0 + h == x0:
        raise NumericalError("finite-difference step underflowed")
    return (4 * central(h / 2) - central(h)) / 3


def _richardson_d2(f, x0: float, h: float) -> float:
    def central(step):
        return (f(x0 + step) - 2 * f(x0) + f(x0 - step)) / (step * step)

    if h <= 0 or x0 + h == x0:
        raise NumericalError("finite-difference step underflowed")
    return (4 * central(h / 2) - central(h)) / 3


def _reprice(inputs: PricingInputs, kind: str, *, x=None, alpha=None, eta=None, r=None):
    va, eq = inputs.vasicek, inputs.equity
    va2 = VasicekParams(
        alpha=va.alpha if alpha is None else alpha,
        beta=va.beta,
        eta=va.eta if eta is None else eta,
        r=va.r if r is None else r,
    )
    eq2 = eq if x is None else _with_spot(eq, x)
    pin = PricingInputs(va2, eq2, inputs.credit, inputs.tau, inputs.strike)
    return price_p0(pin, kind)


def _with_spot(eq, x: float):
    from dataclasses import replace

    return replace(eq, x=x)


def greeks_fd(inputs: PricingInputs, kind: str) -> GreekVector:
    """Greek vector from Richardson central differences of the closed forms.

    Independent of the analytic derivative algebra; intended as an oracle
    for :func:`greeks` and for payoffs whose analytic partials are in doubt.
    """
    tau = inputs.tau
    va = inputs.vasicek
    x0 = inputs.equity.x
    hx = FD_STEP_FIRST * x0
    ha = FD_STEP_PARAM
    hr = FD_STEP_PARAM
    # eta must stay nonnegative across the stencil
    he = min(FD_STEP_SECOND, 0.9 * va.eta)
    if kind != "bond" and he <= 0:
        raise NumericalError("finite differences in eta require eta > 0")

    def p_of_x(x):
        return _reprice(inputs, kind, x=x)

    if kind == "bond":
        bond = defaultable_bond_p0(inputs)
        d_alpha = _richardson_d1(lambda a: _reprice(inputs, kind, alpha=a), va.alpha, ha)
        d_r = _richardson_d1(lambda r: _reprice(inputs, kind, r=r), va.r, hr)
        g3 = d_alpha
        g8 = (-d_alpha + 0.5 * tau * tau * bond + tau * d_r) / va.beta
        return GreekVector(0.0, 0.0, g3, 0.0, 0.0, 0.0, 0.0, g8)

    p0 = price_p0(inputs, kind)
    dx = _richardson_d1(p_of_x, x0, hx)
    dxx = _richardson_d2(p_of_x, x0, FD_STEP_SECOND * x0)
    gamma2 = x0 * x0 * dxx

    # Third x-derivative via a wider 5-point stencil (noise ~ eps/h^3).
    h3 = FD_STEP_THIRD * x0

    def d3(step):
        return (
            p_of_x(x0 + 2 * step)
            - 2 * p_of_x(x0 + step)
            + 2 * p_of_x(x0 - step)
            - p_of_x(x0 - 2 * step)
        ) / (2 * step**3)

    dxxx = (4 * d3(h3 / 2) - d3(h3)) / 3

    def dx_at(**kw):
        return _richardson_d1(lambda x: _reprice(inputs, kind, x=x, **kw), x0, hx)

    def dxx_at(**kw):
        return _richardson_d2(
            lambda x: _reprice(inputs, kind, x=x, **kw), x0, FD_STEP_SECOND * x0
        )

    d_alpha = _richardson_d1(lambda a: _reprice(inputs, kind, alpha=a), va.alpha, ha)
    d_r = _richardson_d1(lambda r: _reprice(inputs, kind, r=r), va.r, hr)
    dx_dalpha = _richardson_d1(lambda a: dx_at(alpha=a), va.alpha, ha)
    dx_deta = _richardson_d1(lambda e: dx_at(eta=e), va.eta, he)
    dx_dr = _richardson_d1(lambda r: dx_at(r=r), va.r, hr)
    dxx_dalpha = _richardson_d1(lambda a: dxx_at(alpha=a), va.alpha, ha)

    g1 = -tau * gamma2
    g2 = -tau * x0 * (2 * x0 * dxx + x0 * x0 * dxxx)
    g3 = x0 * dx_dalpha - d_alpha
    g4 = x0 * x0 * dxx_dalpha
    g5 = x0 * dx_deta
    g6 = x0 * dx_dalpha
    g7 = 0.5 * tau * tau * gamma2
    g8 = (
        g6 - d_alpha + 0.5 * tau * tau * (gamma2 - x0 * dx + p0) - tau * (x0 * dx_dr - d_r)
    ) / va.beta
    return GreekVector(g1, g2, g3, g4, g5, g6, g7, g8)
