"""Two-step daily calibration to corporate bonds and equity options.

Step 1 (bonds): for each candidate product l*lambda on a uniform grid over
[0, M1], the two remaining bond coefficients {l*V3, l*W2} solve a linear
least-squares system in the bond-curve Greeks; the grid point minimizing
the summed squared price errors wins.

Step 2 (options): for each candidate loss rate l on a uniform grid over
[l_min, 1], the bond products are converted to per-unit coefficients
(lambda = l_lambda/l, V3 = l_V3/l, W2 = l_W2/l) and the remaining
coefficients solve a vega-weighted linear least squares against option
price residuals. The grid-l minimizing the weighted objective wins.

Weighted systems are solved by SVD-based least squares (never normal
equations; the Greek columns are highly collinear) and each fit reports
the design-matrix condition number. Ties on a grid break toward the
smaller grid value. The l grid starts at l_min > 0 because lambda =
(l*lambda)/l blows up as l -> 0.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import asdict, dataclass

import numpy as np

from .corrections import CorrectionParams, greeks, price_p0
from .errors import CalibrationError, NumericalError, ValidationError
from .implied_vol import VEGA_FLOOR_FACTOR, bs_vega, implied_vol
from .errors import DomainError
from .pricing import CreditParams, PricingInputs
from .rates import EquityParams, VasicekParams, vasicek_yield

__all__ = [
    "BondFit",
    "OptionFit",
    "ModelFit",
    "fit_bonds",
    "fit_options",
    "calibrate_index",
    "quotes_digest",
    "build_report",
]

DEFAULT_M1 = 1.0
DEFAULT_BOND_GRID = 201
DEFAULT_L_MIN = 0.05
DEFAULT_L_GRID = 96

# Linear unknowns per variant, as (coefficient name, greek index) pairs.
_VARIANT_COLUMNS = {
    "seven_param": (("v1", 0), ("v2", 1), ("v4", 3), ("v5", 4), ("v6", 5), ("w1", 6)),
    "three_param": (("v1", 0), ("w1", 6)),
    "index": (("v1", 0), ("v2", 1), ("v4", 3), ("v5", 4), ("v6", 5)),
}


@dataclass(frozen=True)
class BondFit:
    """Step-1 products and diagnostics."""

    l_lambda: float
    l_v3: float
    l_w2: float
    residual: float
    condition_number: float

    def __post_init__(self):
        if self.residual < 0:
            raise ValidationError("residual must be >= 0")


@dataclass(frozen=True)
class OptionFit:
    """Step-2 separated parameters and diagnostics."""

    l: float
    lam: float
    coeffs: CorrectionParams
    weighted_residual: float
    condition_number: float


@dataclass(frozen=True)
class ModelFit:
    """A fully calibrated model: everything pricing and CDS output need."""

    vasicek: VasicekParams
    equity: EquityParams
    credit: CreditParams
    coeffs: CorrectionParams
    variant: str = "seven_param"

    def to_dict(self) -> dict:
        return {
            "vasicek": asdict(self.vasicek),
            "equity": asdict(self.equity),
            "credit": asdict(self.credit),
            "corrections": asdict(self.coeffs),
            "variant": self.variant,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ModelFit":
        src = d.get("parameters", d)  # accept a full report or its parameter block
        try:
            return cls(
                vasicek=VasicekParams(**src["vasicek"]),
                equity=EquityParams(**src["equity"]),
                credit=CreditParams(**src["credit"]),
                coeffs=CorrectionParams(**src["corrections"]),
                variant=src.get("variant", "seven_param"),
            )
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"malformed fit parameters: {exc}") from None


def _bond_design(bonds, vasicek: VasicekParams, l_lambda: float):
    """Model prices and the (g3, g8) columns at a fixed l*lambda product."""
    credit = CreditParams(l=1.0, lam=l_lambda)
    p0 = np.empty(len(bonds))
    cols = np.empty((len(bonds), 2))
    for i, q in enumerate(bonds):
        pin = PricingInputs(vasicek, _UNIT_EQUITY, credit, q.maturity)
        g = greeks(pin, "bond")
        p0[i] = price_p0(pin, "bond")
        cols[i, 0] = g.g3
        cols[i, 1] = g.g8
    return p0, cols


# The bond formulas never look at the equity block; any valid one will do.
_UNIT_EQUITY = EquityParams(x=1.0, sigma2=0.2, rho1=0.0)


def fit_bonds(
    bonds,
    vasicek: VasicekParams,
    m1: float = DEFAULT_M1,
    n_grid: int = DEFAULT_BOND_GRID,
) -> BondFit:
    """Fit {l*lambda, l*V3, l*W2} to a corporate bond curve.

    Parameters
    ----------
    bonds : list of BondQuote
        At least 3 quotes (three unknowns).
    vasicek : VasicekParams
        Riskless curve parameters fitted beforehand.
    m1, n_grid : float, int
        The l*lambda grid is ``n_grid`` uniform points on [0, m1].
    """
    if len(bonds) < 3:
        raise ValidationError(f"need at least 3 bond quotes, got {len(bonds)}")
    prices = np.asarray([q.price for q in bonds])
    grid = np.linspace(0.0, m1, n_grid)

    best = None
    for l_lambda in grid:
        p0, cols = _bond_design(bonds, vasicek, float(l_lambda))
        rhs = prices - p0
        theta, _, rank, sing = np.linalg.lstsq(cols, rhs, rcond=None)
        if rank < 2:
            raise CalibrationError(
                "bond design matrix is rank deficient (distinct maturities required)",
                best=None,
            )
        resid = float(np.sum((rhs - cols @ theta) ** 2))
        if best is None or resid < best[0]:
            cond = float(sing[0] / sing[-1]) if sing[-1] > 0 else math.inf
            best = (resid, float(l_lambda), float(theta[0]), float(theta[1]), cond)

    resid, l_lambda, l_v3, l_w2, cond = best
    return BondFit(
        l_lambda=l_lambda, l_v3=l_v3, l_w2=l_w2, residual=resid, condition_number=cond
    )


def _quote_weights(options, vasicek: VasicekParams, equity: EquityParams):
    """1 / max(market BS vega, floor) per quote.

    The market vega is evaluated at the quote's own implied volatility,
    quoted against the model zero yield at its maturity. Quotes whose
    price cannot be inverted (outside BS bounds) fall back to the floor.
    """
    x = equity.x
    floor = VEGA_FLOOR_FACTOR * x
    weights = np.empty(len(options))
    for i, q in enumerate(options):
        rate = vasicek_yield(vasicek, q.maturity)
        try:
            iv = implied_vol(q.price, x, q.strike, q.maturity, rate, q.kind)
            vega = bs_vega(x, q.strike, q.maturity, rate, iv)
        except DomainError:
            vega = 0.0
        weights[i] = 1.0 / max(vega, floor)
    return weights


def _option_rows(options, vasicek, equity, lam: float, columns):
    """P0, known-Greek pair (g3, g8), and linear columns for every quote."""
    n = len(options)
    p0 = np.empty(n)
    known = np.empty((n, 2))
    cols = np.empty((n, len(columns)))
    credit = CreditParams(l=1.0, lam=lam)
    for i, q in enumerate(options):
        pin = PricingInputs(vasicek, equity, credit, q.maturity, q.strike)
        g = greeks(pin, q.kind)
        gt = g.as_tuple()
        if not all(math.isfinite(t) for t in gt):
            raise NumericalError(
                f"non-finite greeks for quote kind={q.kind} K={q.strike} T={q.maturity}"
            )
        p0[i] = price_p0(pin, q.kind)
        known[i, 0] = g.g3
        known[i, 1] = g.g8
        cols[i] = [gt[j] for _, j in columns]
    return p0, known, cols


def fit_options(
    options,
    bond_fit: BondFit,
    vasicek: VasicekParams,
    equity: EquityParams,
    l_min: float = DEFAULT_L_MIN,
    n_l_grid: int = DEFAULT_L_GRID,
    variant: str = "seven_param",
) -> OptionFit:
    """Fit the loss rate and the option-side coefficients to option quotes.

    Grid over l; per l the bond products fix {lambda, V3, W2} and the
    variant's linear coefficients solve a vega-weighted least squares on
    price residuals. Requires one more quote than there are unknowns.
    """
    if variant not in ("seven_param", "three_param"):
        raise ValidationError(f"unsupported calibration variant {variant!r}")
    columns = _VARIANT_COLUMNS[variant]
    n_unknowns = len(columns) + 1  # + the l grid dimension
    if len(options) < n_unknowns:
        raise ValidationError(
            f"{variant} fit needs at least {n_unknowns} option quotes, got {len(options)}"
        )
    prices = np.asarray([q.price for q in options])
    weights = _quote_weights(options, vasicek, equity)

    best = None
    for l in np.linspace(l_min, 1.0, n_l_grid):
        lam = bond_fit.l_lambda / l
        v3 = bond_fit.l_v3 / l
        w2 = bond_fit.l_w2 / l
        p0, known, cols = _option_rows(options, vasicek, equity, lam, columns)
        rhs = prices - p0 - v3 * known[:, 0] - w2 * known[:, 1]
        wcols = cols * weights[:, None]
        wrhs = rhs * weights
        theta, _, rank, sing = np.linalg.lstsq(wcols, wrhs, rcond=None)
        if rank < len(columns):
            raise CalibrationError(
                "option design matrix is rank deficient; spread strikes/maturities",
                best=None,
            )
        resid = float(np.sum((wrhs - wcols @ theta) ** 2))
        if best is None or resid < best[0]:
            cond = float(sing[0] / sing[-1]) if sing[-1] > 0 else math.inf
            best = (resid, float(l), lam, v3, w2, theta.copy(), cond)

    resid, l, lam, v3, w2, theta, cond = best
    fitted = dict(zip((name for name, _ in columns), (float(t) for t in theta)))
    coeffs = CorrectionParams(v3=v3, w2=w2, **fitted)
    return OptionFit(
        l=l, lam=lam, coeffs=coeffs, weighted_residual=resid, condition_number=cond
    )


def calibrate_index(options, vasicek: VasicekParams, equity: EquityParams) -> OptionFit:
    """Single weighted least squares for index options (no default risk).

    lambda is pinned to zero, there is no l grid, and only the five
    fast-scale coefficients {v1, v2, v4, v5, v6} are fitted.
    """
    columns = _VARIANT_COLUMNS["index"]
    if len(options) < 5:
        raise ValidationError(f"index fit needs at least 5 quotes, got {len(options)}")
    prices = np.asarray([q.price for q in options])
    weights = _quote_weights(options, vasicek, equity)
    p0, _, cols = _option_rows(options, vasicek, equity, 0.0, columns)
    rhs = prices - p0
    wcols = cols * weights[:, None]
    wrhs = rhs * weights
    theta, _, rank, sing = np.linalg.lstsq(wcols, wrhs, rcond=None)
    if rank < len(columns):
        raise CalibrationError("index design matrix is rank deficient", best=None)
    resid = float(np.sum((wrhs - wcols @ theta) ** 2))
    cond = float(sing[0] / sing[-1]) if sing[-1] > 0 else math.inf
    fitted = dict(zip((name for name, _ in columns), (float(t) for t in theta)))
    return OptionFit(
        l=1.0,
        lam=0.0,
        coeffs=CorrectionParams(**fitted),
        weighted_residual=resid,
        condition_number=cond,
    )


# ---------------------------------------------------------------------------
# Report
# ---------------------------------------------------------------------------


def quotes_digest(quotes) -> str:
    """Order-sensitive sha256 over the quote values."""
    h = hashlib.sha256()
    for q in quotes:
        h.update(repr(sorted(asdict(q).items())).encode())
    return h.hexdigest()


def build_report(
    bond_fit: BondFit,
    option_fit: OptionFit,
    vasicek: VasicekParams,
    equity: EquityParams,
    variant: str,
    digests: dict,
    config: dict,
) -> dict:
    """One JSON-shaped calibration record per day."""
    fit = ModelFit(
        vasicek=vasicek,
        equity=equity,
        credit=CreditParams(l=option_fit.l, lam=option_fit.lam),
        coeffs=option_fit.coeffs,
        variant=variant,
    )
    return {
        "inputs_digest": digests,
        "parameters": fit.to_dict(),
        "bond_fit": {
            "l_lambda": bond_fit.l_lambda,
            "l_v3": bond_fit.l_v3,
            "l_w2": bond_fit.l_w2,
            "residual": bond_fit.residual,
            "condition_number": bond_fit.condition_number,
        },
        "option_fit": {
            "weighted_residual": option_fit.weighted_residual,
            "condition_number": option_fit.condition_number,
        },
        "config": config,
    }


def report_json(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True)
