"""Capital recovery and credit-duration derating."""

from __future__ import annotations

from dataclasses import dataclass

from fuelpath.errors import InvalidYears, InvariantViolation, PolicyExceedsLife


def annuity_factor(wacc: float, years: int) -> float:
    """Present value of 1 per year for ``years`` years at rate ``wacc``."""
    if years < 1:
        raise InvalidYears(f"annuity needs at least one year, got {years}")
    if wacc == 0:
        return float(years)
    return (1.0 - (1.0 + wacc) ** -years) / wacc


def crf(wacc: float, years: int) -> float:
    """Capital recovery factor r(1+r)^n / ((1+r)^n - 1); 1/n when r = 0."""
    if years < 1:
        raise InvalidYears(f"capital recovery needs at least one year, got {years}")
    if wacc < 0:
        raise ValueError("wacc must be non-negative")
    return 1.0 / annuity_factor(wacc, years)


def derating_factor(wacc: float, policy_years: int, book_life: int) -> float:
    """Levelized share of a credit paid for ``policy_years`` of a ``book_life`` asset.

    A zero-year credit is worth nothing.  Durations past the book life are an
    error rather than being clamped.
    """
    if book_life < 1:
        raise InvalidYears(f"book life must be at least one year, got {book_life}")
    if policy_years > book_life:
        raise PolicyExceedsLife(f"credit lasts {policy_years} years but the asset only {book_life}")
    if policy_years < 0:
        raise InvalidYears(f"credit duration cannot be negative, got {policy_years}")
    if policy_years == 0:
        return 0.0
    return annuity_factor(wacc, policy_years) / annuity_factor(wacc, book_life)


@dataclass(frozen=True)
class FinancialParams:
    """Financing assumptions shared by every plant.

    ``crf`` may be pinned to a rounded value; it must stay within 1e-3 of the
    closed form.  ``capacity_factor`` is the default for technologies that do
    not carry their own.
    """

    wacc: float = 0.1
    book_life_years: int = 15
    capacity_factor: float = 0.85
    crf: float | None = None

    def __post_init__(self):
        if not 0 < self.wacc < 1:
            raise InvariantViolation(f"wacc must lie in (0, 1), got {self.wacc}")
        if self.book_life_years < 1:
            raise InvariantViolation("book life must be at least one year")
        if not 0 < self.capacity_factor <= 1:
            raise InvariantViolation(f"capacity factor must lie in (0, 1], got {self.capacity_factor}")
        closed = crf(self.wacc, self.book_life_years)
        if self.crf is None:
            object.__setattr__(self, "crf", closed)
        elif abs(self.crf - closed) > 1e-3:
            raise InvariantViolation(f"pinned crf {self.crf} is more than 1e-3 from {closed:.5f}")

    def df(self, policy_years: int) -> float:
        return derating_factor(self.wacc, policy_years, self.book_life_years)
