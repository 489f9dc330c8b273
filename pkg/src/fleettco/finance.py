"""Discounting, levelization, loan amortization, and technology-learning math.

All amounts are real base-year dollars; no inflation indexing is applied
anywhere in the engine. Year index i = 1 is the first full year after
acquisition; i = 0 carries time-zero flows such as a down payment.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .errors import InvalidInputError


@dataclass(frozen=True)
class FinancialParams:
    """Discounting and loan terms shared by all cost modules."""

    discount_rate: float = 0.07
    interest_rate: float = 0.04
    loan_term_years: int = 5
    down_payment_ratio: float = 0.20
    analysis_period_years: int = 5

    def __post_init__(self):
        if not 0.0 <= self.discount_rate < 1.0:
            raise InvalidInputError(f"discount_rate must be in [0, 1): {self.discount_rate}")
        if not 0.0 <= self.interest_rate < 1.0:
            raise InvalidInputError(f"interest_rate must be in [0, 1): {self.interest_rate}")
        if not 0.0 <= self.down_payment_ratio <= 1.0:
            raise InvalidInputError(f"down_payment_ratio must be in [0, 1]: {self.down_payment_ratio}")
        if self.loan_term_years < 1:
            raise InvalidInputError(f"loan_term_years must be >= 1: {self.loan_term_years}")
        if self.analysis_period_years < 1:
            raise InvalidInputError(f"analysis_period_years must be >= 1: {self.analysis_period_years}")


@dataclass(frozen=True)
class CashFlowSeries:
    """Per-year flows in real dollars, indexed i = 1..N from ``base_year``."""

    base_year: int
    flows: tuple[float, ...]

    def __post_init__(self):
        if len(self.flows) < 1:
            raise InvalidInputError("cash flow series must contain at least one year")
        for i, f in enumerate(self.flows):
            if not math.isfinite(f):
                raise InvalidInputError(f"cash flow at index {i + 1} is not finite: {f}")


@dataclass(frozen=True)
class LearningParams:
    """Base-year cost and its annual fractional reduction rate."""

    base_cost: float
    annual_reduction_rate: float

    def __post_init__(self):
        if self.base_cost < 0:
            raise InvalidInputError(f"base_cost must be >= 0: {self.base_cost}")
        if not 0.0 <= self.annual_reduction_rate < 1.0:
            raise InvalidInputError(
                f"annual_reduction_rate must be in [0, 1): {self.annual_reduction_rate}"
            )


def discount_sum(flows: Sequence[float], discount_rate: float, first_index: int = 1) -> float:
    """Present value of per-year flows: sum of C_i / (1 + d)^i.

    ``first_index`` is the year index of flows[0]; the default of 1 places
    the first flow one full year out. Pass 0 for series that include a
    time-zero flow.
    """
    if len(flows) == 0:
        raise InvalidInputError("cannot discount an empty flow series")
    if not 0.0 <= discount_rate < 1.0:
        raise InvalidInputError(f"discount rate must be in [0, 1): {discount_rate}")
    total = 0.0
    for offset, flow in enumerate(flows):
        if not math.isfinite(flow):
            raise InvalidInputError(f"flow at index {first_index + offset} is not finite: {flow}")
        total += flow / (1.0 + discount_rate) ** (first_index + offset)
    return total


def discounted_vmt(vmt_flows: Sequence[float], discount_rate: float) -> float:
    """Discounted sum of vehicle miles traveled, years i = 1..N."""
    return discount_sum(vmt_flows, discount_rate, first_index=1)


def levelize(amount: float, vmt_flows: Sequence[float], discount_rate: float) -> float:
    """Convert a discounted cost into $/mile against discounted VMT.

    Additive: levelizing a sum of cost components equals the sum of the
    levelized components for the same VMT series and rate.
    """
    denom = discounted_vmt(vmt_flows, discount_rate)
    if denom <= 0.0:
        raise InvalidInputError("discounted VMT must be positive to levelize")
    return amount / denom


@dataclass(frozen=True)
class LoanSchedule:
    """Down payment plus a constant annual payment over the loan term."""

    price: float
    down_payment: float
    annual_payment: float
    term_years: int
    interest_rate: float
    discounted_capex: float

    def payment_flows(self, n_years: int) -> list[float]:
        """Acquisition outflows indexed 0..n_years (year 0 = down payment).

        If the analysis period ends before the loan does, the remaining
        principal is settled as an additional final-year outflow.
        """
        flows = [0.0] * (n_years + 1)
        flows[0] = self.down_payment
        for i in range(1, min(self.term_years, n_years) + 1):
            flows[i] += self.annual_payment
        if n_years < self.term_years:
            flows[n_years] += self.remaining_principal(n_years)
        return flows

    def remaining_principal(self, after_year: int) -> float:
        """Outstanding principal after ``after_year`` annual payments."""
        principal = self.price - self.down_payment
        r = self.interest_rate
        for _ in range(after_year):
            principal = principal * (1.0 + r) - self.annual_payment
        return max(principal, 0.0)


def loan_payments(price: float, params: FinancialParams) -> LoanSchedule:
    """Split a purchase price into a down payment and a level annuity.

    annual payment = principal * r (1+r)^T / ((1+r)^T - 1), with the
    zero-interest limit principal / T. ``discounted_capex`` is the down
    payment plus the payments discounted at the discount rate.
    """
    if not math.isfinite(price) or price < 0:
        raise InvalidInputError(f"price must be finite and >= 0: {price}")
    down = price * params.down_payment_ratio
    principal = price - down
    r = params.interest_rate
    term = params.loan_term_years
    if principal == 0.0:
        payment = 0.0
    elif r < 1e-12:
        # Zero-interest limit: equal principal installments. Rates this
        # small also hit float quantization in the annuity ratio.
        payment = principal / term
    else:
        # expm1/log1p keep (1+r)^T - 1 accurate for rates near zero.
        growth_minus_one = math.expm1(term * math.log1p(r))
        payment = principal * r * (growth_minus_one + 1.0) / growth_minus_one
    d = params.discount_rate
    discounted = down + discount_sum([payment] * term, d, first_index=1)
    return LoanSchedule(
        price=price,
        down_payment=down,
        annual_payment=payment,
        term_years=term,
        interest_rate=r,
        discounted_capex=discounted,
    )


def learned_cost(base_cost: float, annual_reduction_rate: float, year: int, base_year: int) -> float:
    """Cost after compounding an annual fractional reduction from base_year.

    Returns base_cost * (1 - rate)^(year - base_year); non-increasing in
    ``year`` and strictly positive whenever base_cost is.
    """
    if year < base_year:
        raise InvalidInputError(f"year {year} precedes base year {base_year}")
    lp = LearningParams(base_cost=base_cost, annual_reduction_rate=annual_reduction_rate)
    return lp.base_cost * (1.0 - lp.annual_reduction_rate) ** (year - base_year)
