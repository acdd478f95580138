"""Branching measures: admissibility, integral tests, scaling.

A branching measure is a finite collection of weighted branch-event atoms
(rate, displacement sequence), optionally extended by a parametric family of
zero-displacement cluster atoms p_n = c / (n^alpha * log(n)^beta) whose tail
beyond the materialization cutoff is handled analytically in the integral
tests. Sigma-finite measures outside this class are out of scope; simulation
always uses the truncated (finite total mass) part.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad

from .points import PointSequence, canonicalize, exp_sum, xexp_sum, exp_xexp_sum


def log_plus(v: float) -> float:
    """max(0, log v), with log_plus(v) = 0 for v <= 1 (covers v <= 0 too)."""
    return math.log(v) if v > 1.0 else 0.0


class InadmissibleMeasureError(ValueError):
    pass


@dataclass(frozen=True)
class ZeroClusterFamily:
    """Cluster atoms: n zero displacements with rate p_n = c / (n^alpha log(n)^beta).

    Atom n is a branch event with parent jump 0 and n-1 children at the parent
    position. Atoms n <= cutoff are materialized (simulable); the n > cutoff
    tail enters only the integral tests, analytically.
    """

    c: float
    alpha: float
    beta: float
    n_min: int = 3
    cutoff: int = 10_000

    def __post_init__(self):
        if self.c <= 0 or self.n_min < 3 or self.cutoff < self.n_min:
            raise ValueError("need c > 0, n_min >= 3, cutoff >= n_min")

    def ns(self) -> np.ndarray:
        return np.arange(self.n_min, self.cutoff + 1, dtype=np.int64)

    def weights(self, n: np.ndarray) -> np.ndarray:
        n = np.asarray(n, dtype=float)
        return self.c / (n ** self.alpha * np.log(n) ** self.beta)

    def materialized_mass(self) -> float:
        return float(self.weights(self.ns()).sum())

    # --- partial sums of the condition-(H) integrand over n <= N ---

    def h_integrand(self, n: np.ndarray) -> np.ndarray:
        """Per-atom value of Y log_+(Y-1)^2 with Y = n (the Ytilde term vanishes)."""
        n = np.asarray(n, dtype=float)
        return self.weights(n) * n * np.log(n - 1.0) ** 2

    def h_partial_sum(self, upto: int) -> float:
        n = np.arange(self.n_min, upto + 1, dtype=np.int64)
        return float(self.h_integrand(n).sum())

    def tail_converges(self) -> bool:
        # integrand ~ c n^(1-alpha) log(n)^(2-beta)
        if self.alpha > 2.0:
            return True
        if self.alpha == 2.0:
            return self.beta > 3.0
        return False

    def h_tail_bracket(self) -> tuple[float, float]:
        """Bracket [lo, hi] for the n > cutoff remainder of the (H) integrand.

        Integral test on the (eventually decreasing) integrand; requires
        tail_converges().
        """
        if not self.tail_converges():
            raise ValueError("tail diverges; no finite bracket")
        N = self.cutoff

        def g(x):
            return self.c * x ** (1.0 - self.alpha) * np.log(x - 1.0) ** 2 / np.log(x) ** self.beta

        if self.alpha == 2.0 and self.beta > 3.0:
            # closed form up to the log(x-1)/log(x) correction:
            # int_N^inf dx / (x log(x)^(beta-2)) = log(N)^(3-beta) / (beta-3)
            def base(x0):
                return self.c * math.log(x0) ** (3.0 - self.beta) / (self.beta - 3.0)

            hi = base(N)
            lo = base(N + 1) * (1.0 - 1.0 / ((N - 1) * math.log(N))) ** 2
            return lo, hi
        hi = quad(g, N, np.inf, limit=200)[0]
        lo = quad(g, N + 1, np.inf, limit=200)[0]
        return min(lo, hi), max(lo, hi)

    def divergence_rate(self) -> float:
        """Growth of partial sums per doubling of the cutoff (divergent case)."""
        n = np.arange(max(self.n_min, self.cutoff // 2 + 1), self.cutoff + 1, dtype=np.int64)
        return float(self.h_integrand(n).sum())

    def to_dict(self) -> dict:
        return {
            "kind": "zero_cluster",
            "params": {"c": self.c, "alpha": self.alpha, "beta": self.beta, "n_min": self.n_min},
            "cutoff": self.cutoff,
        }


@dataclass(frozen=True)
class BranchingMeasure:
    """Finite discrete branching measure, optionally with a zero-cluster family tail."""

    atoms: tuple[tuple[float, PointSequence], ...]
    family: ZeroClusterFamily | None = None

    def __post_init__(self):
        for w, seq in self.atoms:
            if not (w > 0.0 and math.isfinite(w)):
                raise ValueError(f"atom weight must be positive and finite, got {w!r}")
            if len(seq) == 0:
                raise ValueError("empty atom sequences (particle death) are out of scope")

    @property
    def total_mass(self) -> float:
        m = math.fsum(w for w, _ in self.atoms)
        if self.family is not None:
            m += self.family.materialized_mass()
        return m

    def iter_materialized(self):
        """Yield (weight, sequence) over generic atoms and materialized family atoms.

        Family sequences are built lazily; avoid in hot paths (simulation uses
        the compact event table in the ensemble kernel instead).
        """
        yield from self.atoms
        if self.family is not None:
            ws = self.family.weights(self.family.ns())
            for n, w in zip(self.family.ns(), ws):
                yield float(w), PointSequence((0.0,) * int(n))

    def sim_atoms(self):
        """Compact event table: list of (rate, parent_jump, children_displacements).

        children_displacements is either a small float array or an
        (count, value) pair for constant clusters.
        """
        out = []
        for w, seq in self.atoms:
            out.append((w, seq.atoms[0], np.asarray(seq.atoms[1:], dtype=float)))
        if self.family is not None:
            ws = self.family.weights(self.family.ns())
            for n, w in zip(self.family.ns(), ws):
                out.append((float(w), 0.0, (int(n) - 1, 0.0)))
        return out


def measure(atoms, family: ZeroClusterFamily | None = None) -> BranchingMeasure:
    """Build a measure from (weight, displacement list) pairs."""
    packed = tuple((float(w), s if isinstance(s, PointSequence) else canonicalize(s)) for w, s in atoms)
    return BranchingMeasure(packed, family)


EMPTY = BranchingMeasure(())


# ---------------------------------------------------------------------------
# admissibility and plain integration
# ---------------------------------------------------------------------------

@dataclass
class AdmissibilityReport:
    ok: bool
    theta: float
    exp_moment: float     # int (e^{-theta x1} 1_{x1<-1} + sum_{j>=2} e^{-theta xj}) dLambda
    quad_moment: float    # int 1 ^ x1^2 dLambda


def check_admissibility(m: BranchingMeasure, theta: float) -> AdmissibilityReport:
    if theta <= 0:
        raise ValueError("theta must be positive")
    with np.errstate(over="ignore"):
        total = 0.0
        quad_m = 0.0
        for w, seq in m.atoms:
            x1 = seq.atoms[0]
            v = math.exp(-theta * x1) if x1 < -1.0 else 0.0
            v += math.fsum(math.exp(-theta * xj) for xj in seq.atoms[1:])
            total += w * v
            quad_m += w * min(1.0, x1 * x1)
        if m.family is not None:
            ws = m.family.weights(m.family.ns())
            total += float((ws * (m.family.ns() - 1)).sum())
    return AdmissibilityReport(ok=math.isfinite(total), theta=theta, exp_moment=total, quad_moment=quad_m)


def integrate(m: BranchingMeasure, g) -> float:
    """Exact quadrature sum_i w_i g(x_i); non-finite g values propagate as +/-inf."""
    total = 0.0
    for w, seq in m.iter_materialized():
        v = g(seq)
        if not math.isfinite(v):
            return math.inf if v > 0 else -math.inf
        total += w * v
    return total


def second_tail_mass(m: BranchingMeasure) -> float:
    """int sum_{k>=2} (1 + x_k 1_{x_k>=0}) e^{-x_k} dLambda (finite under the variance condition)."""
    total = 0.0
    for w, seq in m.atoms:
        total += w * math.fsum((1.0 + max(xk, 0.0)) * math.exp(-xk) for xk in seq.atoms[1:])
    if m.family is not None:
        ns = m.family.ns()
        total += float((m.family.weights(ns) * (ns - 1)).sum())
    return total


def scale_pushforward(m: BranchingMeasure, theta: float) -> BranchingMeasure:
    """Pushforward under componentwise scaling x -> theta * x; weights unchanged."""
    if theta <= 0:
        raise ValueError("theta must be positive")
    atoms = tuple((w, PointSequence(tuple(theta * v for v in seq.atoms))) for w, seq in m.atoms)
    return BranchingMeasure(atoms, m.family)  # zero clusters are fixed points of the scaling


# ---------------------------------------------------------------------------
# condition (H): the offspring-tail integral test, in its three forms
# ---------------------------------------------------------------------------

@dataclass
class IntegralValue:
    finite: bool
    value: float                 # the integral if finite, else the last partial sum
    tail_error: float = 0.0
    growth_rate: float | None = None   # divergent case: increment per cutoff doubling
    note: str = ""

    def to_dict(self) -> dict:
        d = {"finite": self.finite, "value": self.value, "tail_error": self.tail_error}
        if self.growth_rate is not None:
            d["growth_rate"] = self.growth_rate
        if self.note:
            d["note"] = self.note
        return d


@dataclass
class ConditionHReport:
    value_h: IntegralValue
    value_ybar_form: IntegralValue
    value_pr_form: IntegralValue
    verdict: str                      # "holds" | "fails"
    y_part: IntegralValue | None = None
    ytilde_part: IntegralValue | None = None
    partial_sums: list[tuple[int, float]] = field(default_factory=list)

    def to_dict(self) -> dict:
        d = {
            "value_H": self.value_h.to_dict(),
            "value_Ybar_form": self.value_ybar_form.to_dict(),
            "value_Pr_form": self.value_pr_form.to_dict(),
            "verdict": self.verdict,
        }
        if self.y_part is not None:
            d["value_H_Y_part"] = self.y_part.to_dict()
        if self.ytilde_part is not None:
            d["value_H_Ytilde_part"] = self.ytilde_part.to_dict()
        if self.partial_sums:
            d["partial_sums"] = [[int(n), s] for n, s in self.partial_sums]
        return d


def atom_h_terms(seq: PointSequence) -> tuple[float, float, float, float]:
    """Per-atom integrand pieces: (Y-part, Ytilde-part, Ybar-form, Pr-form)."""
    y = exp_sum(seq)
    yt = xexp_sum(seq)
    lyb = log_plus(y + yt - 1.0)
    y_term = y * log_plus(y - 1.0) ** 2
    yt_term = yt * log_plus(yt - 1.0)
    ybar_term = y * lyb * lyb
    pr_term = 4.5 * y * lyb * lyb + 3.0 * yt * lyb
    return y_term, yt_term, ybar_term, pr_term


def condition_h(m: BranchingMeasure, checkpoints=(1_000, 10_000, 100_000)) -> ConditionHReport:
    """Evaluate the derivative-martingale convergence test on the measure.

    Returns the defining form, the combined-weight (Ybar) form, and the
    closed-form double-integral (Pr) form, with the family tail beyond the
    materialization cutoff summed analytically (finite case) or reported as a
    divergence with its per-doubling growth rate.
    """
    adm = check_admissibility(m, 1.0)
    if not adm.ok:
        raise InadmissibleMeasureError("measure is not exponentially integrable at theta=1")

    sy = syt = sybar = spr = 0.0
    for w, seq in m.atoms:
        y_t, yt_t, yb_t, pr_t = atom_h_terms(seq)
        sy += w * y_t
        syt += w * yt_t
        sybar += w * yb_t
        spr += w * pr_t

    partials: list[tuple[int, float]] = []
    fam = m.family
    tail_finite = True
    tail_lo = tail_hi = 0.0
    rate = None
    if fam is not None:
        base = sy  # family contributes to the Y part only (Ytilde = 0 on clusters)
        fam_sum = fam.h_partial_sum(fam.cutoff)
        for n in checkpoints:
            partials.append((n, base + fam.h_partial_sum(min(n, 10**9))))
        sy += fam_sum
        sybar += fam_sum      # Ybar = Y on zero clusters
        spr += 4.5 * fam_sum
        tail_finite = fam.tail_converges()
        if tail_finite:
            tail_lo, tail_hi = fam.h_tail_bracket()
        else:
            rate = fam.divergence_rate()

    tail_mid = 0.5 * (tail_lo + tail_hi)
    tail_err = 0.5 * (tail_hi - tail_lo)
    finite = tail_finite and math.isfinite(sy + syt)

    def iv(total, fam_scale):
        if finite:
            return IntegralValue(True, total + fam_scale * tail_mid, fam_scale * tail_err)
        return IntegralValue(False, total, growth_rate=(None if rate is None else fam_scale * rate),
                             note="diverges; value is the partial sum at the cutoff")

    value_h = iv(sy + syt, 1.0)
    ybar_form = iv(sybar, 1.0)
    pr_form = iv(spr, 4.5)
    y_part = iv(sy, 1.0)
    yt_part = IntegralValue(True, syt, 0.0)  # clusters never contribute here

    return ConditionHReport(
        value_h=value_h,
        value_ybar_form=ybar_form,
        value_pr_form=pr_form,
        verdict="holds" if value_h.finite else "fails",
        y_part=y_part,
        ytilde_part=yt_part,
        partial_sums=partials,
    )


# ---------------------------------------------------------------------------
# JSON wire format
# ---------------------------------------------------------------------------

def measure_to_dict(m: BranchingMeasure) -> dict:
    d = {"atoms": [{"weight": w, "seq": seq.to_json()} for w, seq in m.atoms]}
    if m.family is not None:
        d["family"] = m.family.to_dict()
    return d


def measure_from_dict(d: dict) -> BranchingMeasure:
    atoms = tuple((float(a["weight"]), canonicalize(a["seq"])) for a in d.get("atoms", []))
    fam = None
    if d.get("family") is not None:
        f = d["family"]
        if f.get("kind") != "zero_cluster":
            raise ValueError(f"unknown family kind {f.get('kind')!r}")
        p = f["params"]
        fam = ZeroClusterFamily(c=float(p["c"]), alpha=float(p["alpha"]), beta=float(p["beta"]),
                                n_min=int(p.get("n_min", 3)), cutoff=int(f["cutoff"]))
    return BranchingMeasure(atoms, fam)
