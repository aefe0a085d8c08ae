"""How much probability mass do the top-K hypotheses hold?

The normaliser over all hypotheses is the permanent. Dividing the top-K
cumulative weight by the upper end of a Roos interval gives a guaranteed
lower bound on the captured fraction; dividing by the lower end gives an
upper bound (capped at 1, and uninformative when the lower end is 0).
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field

from .assignment import murty_kbest
from .matrices import to_thin
from .permanent import PermanentInfeasible, permanent_exact
from .roos import approx_first, approx_second, diagnostics


@dataclass
class TruncationReport:
    order: str
    K_values: list
    cumulative_weight: list
    roos_estimate: float
    roos_lower: float
    roos_upper: float
    mass_fraction_lower: list
    mass_fraction_upper: list
    upper_informative: list
    permanent_exact: float | None = None
    mass_fraction_exact: list | None = None
    assignments: list = field(default_factory=list, repr=False)
    diagnostics: dict = field(default_factory=dict, repr=False)

    def guaranteed_fraction(self, K):
        """Fraction of total mass the top-K is certain to hold."""
        return self.mass_fraction_lower[self._index(K)]

    def possible_fraction(self, K):
        return self.mass_fraction_upper[self._index(K)]

    def _index(self, K):
        if not 1 <= K <= len(self.K_values):
            raise IndexError(f"K={K} outside 1..{len(self.K_values)}")
        return K - 1

    def to_dict(self):
        return {
            "order": self.order,
            "K": self.K_values,
            "cumulative_weight": self.cumulative_weight,
            "permanent_exact": self.permanent_exact,
            "roos_estimate": self.roos_estimate,
            "roos_lower": self.roos_lower,
            "roos_upper": None if math.isinf(self.roos_upper) else self.roos_upper,
            "mass_fraction_lower": self.mass_fraction_lower,
            "mass_fraction_upper": self.mass_fraction_upper,
            "upper_informative": self.upper_informative,
            "mass_fraction_exact": self.mass_fraction_exact,
            "assignments": [a.to_dict() for a in self.assignments],
            "diagnostics": self.diagnostics,
        }

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2) + "\n"

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["K", "cumulative_weight", "mass_lower", "mass_upper", "mass_exact"])
        for i, K in enumerate(self.K_values):
            exact = "" if self.mass_fraction_exact is None else repr(self.mass_fraction_exact[i])
            w.writerow([K, repr(self.cumulative_weight[i]), repr(self.mass_fraction_lower[i]),
                        repr(self.mass_fraction_upper[i]), exact])
        return buf.getvalue()


def mass_fractions(cumulative, lower, upper):
    """Per-K (guaranteed, possible, informative) captured-mass fractions."""
    lo, hi, informative = [], [], []
    for c in cumulative:
        lo.append(0.0 if math.isinf(upper) or upper <= 0 else min(1.0, c / upper))
        if lower > 0:
            hi.append(min(1.0, c / lower))
            informative.append(True)
        else:
            hi.append(1.0)
            informative.append(False)
    return lo, hi, informative


def truncation_report(L, K_max, order=2, with_exact=True, **exact_kwargs):
    """Top-K cumulative curve bracketed by a Roos interval on the permanent.

    If ``with_exact`` is set but no exact method is feasible, the exact
    fields stay ``None`` and the report is still produced.
    """
    if K_max < 1:
        raise ValueError("K_max must be >= 1")
    kbest = murty_kbest(L, K_max)
    cumulative = kbest.cumulative_weights
    Z = to_thin(L)
    order_key = 1 if order in (1, "1", "first") else 2
    diag = diagnostics(Z, orders=(order_key,))
    est = approx_first(Z, diag) if order_key == 1 else approx_second(Z, diag)
    lo, hi, informative = mass_fractions(cumulative, est.lower, est.upper)

    exact = exact_frac = None
    if with_exact:
        try:
            exact = permanent_exact(Z, **exact_kwargs).value
        except PermanentInfeasible:
            exact = None
        if exact is not None:
            exact_frac = [min(1.0, c / exact) if exact > 0 else 1.0 for c in cumulative]

    return TruncationReport(
        order=est.order,
        K_values=list(range(1, len(cumulative) + 1)),
        cumulative_weight=cumulative,
        roos_estimate=est.estimate,
        roos_lower=est.lower,
        roos_upper=est.upper,
        mass_fraction_lower=lo,
        mass_fraction_upper=hi,
        upper_informative=informative,
        permanent_exact=exact,
        mass_fraction_exact=exact_frac,
        assignments=kbest.assignments,
        diagnostics=diag.to_dict(),
    )
