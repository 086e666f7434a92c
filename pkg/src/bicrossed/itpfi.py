"""Type classification of infinite tensor products of type I factors (ITPFI).

A factor ``(x)_n (M_n, phi_n)`` is described by the decreasing eigenvalue
lists ``lambda_{n,0} >= lambda_{n,1} >= ...`` of the density matrices.
Three series decide the type:

    I    iff  sum_n |1 - lambda_{n,0}| < oo
    II   iff  all dims finite and sum_{n,i} |dim_n^{-1/2} - lambda_{n,i}^{1/2}|^2 < oo
    III  iff  sum_{n,i} lambda_{n,i} min(|lambda_{n,0}/lambda_{n,i} - 1|^2, C) = oo
              (given lambda_{n,0} >= delta for all n)

The third series is used in its weighted form; the unweighted form with
"III iff the sum converges" is available as ``criterion3="unweighted"`` and
contradicts the prime family verdicts (that is what the cross-check in
:func:`classify_prime_family` guards against).

Infinite series are never decided from partial sums. A verdict needs a
:class:`ConvergenceEvidence` for the reference series ``sum_n r_n`` with
``r_n = 1 - lambda_{n,0}``; criterion sums are compared with it factor by
factor through exact bounds. The second series has its own optional
evidence, since it is not controlled by the reference series.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
import sympy

BANNER = ("criterion 3 evaluated in the weighted Araki-Woods form: type III iff "
          "sum_{n,i} lambda_{n,i} min(|lambda_{n,0}/lambda_{n,i} - 1|^2, C) diverges; "
          "the unweighted statement with convergence would contradict the prime-family verdicts")

JUSTIFICATIONS = ("finite-list", "geometric-minorant", "all-primes-in-order", "user-asserted")


class ScheduleError(ValueError):
    pass


class EvidenceError(ValueError):
    pass


class ConsistencyError(RuntimeError):
    """Criterion evaluation disagrees with the known verdict for a prime family."""


def _q(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise ScheduleError(f"floating point entry {x!r}; use exact rationals")
    return Fraction(str(x).strip())


# -- prime sequences ----------------------------------------------------------

@dataclass(frozen=True)
class PrimeSequence:
    """``kind``: 'all' (2, 3, 5, ...), 'above_powers' (smallest prime > base^n, n = 1, 2, ...)
    or 'list' (an explicit finite list)."""
    kind: str
    base: int = 3
    primes: tuple = ()

    @property
    def finite(self) -> bool:
        return self.kind == "list"

    def prefix(self, n_max: int) -> list[int]:
        if self.kind == "all":
            return [int(sympy.prime(n)) for n in range(1, n_max + 1)]
        if self.kind == "above_powers":
            return [int(sympy.nextprime(self.base ** n)) for n in range(1, n_max + 1)]
        if self.kind == "list":
            return list(self.primes[:n_max])
        raise ScheduleError(f"unknown prime sequence kind {self.kind!r}")

    def to_document(self):
        if self.kind == "list":
            return {"kind": "list", "primes": list(self.primes)}
        if self.kind == "above_powers":
            return {"kind": "above_powers", "base": self.base}
        return {"kind": "all"}


def parse_primes(desc) -> PrimeSequence:
    if isinstance(desc, str):
        desc = {"kind": desc}
    if isinstance(desc, (list, tuple)):
        desc = {"kind": "list", "primes": list(desc)}
    if not isinstance(desc, dict) or "kind" not in desc:
        raise ScheduleError(f"bad prime descriptor {desc!r}")
    kind = desc["kind"]
    if kind == "all":
        return PrimeSequence("all")
    if kind == "above_powers":
        base = int(desc.get("base", 3))
        if base < 2:
            raise ScheduleError("base must be at least 2")
        return PrimeSequence("above_powers", base=base)
    if kind == "list":
        ps = tuple(int(p) for p in desc.get("primes", []))
        _validate_primes(ps)
        return PrimeSequence("list", primes=ps)
    raise ScheduleError(f"unknown prime sequence kind {kind!r}")


def _validate_primes(ps):
    seen = set()
    for p in ps:
        if not sympy.isprime(p):
            raise ScheduleError(f"{p} is not prime")
        if p in seen:
            raise ScheduleError(f"repeated prime {p}")
        seen.add(p)


# -- schedules ----------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class EigenvalueSchedule:
    """Finite prefix of the factor sequence.

    ``tails[n]`` is the mass of eigenvalues not listed for factor n
    (each of them at most the last listed one). ``dims[n]`` is None for an
    infinite-dimensional factor. ``infinite`` marks a factor sequence that
    continues past the prefix; ``generator`` describes it.

    ``top_lower`` and ``ratio_gap`` are structural bounds valid for every
    factor of the full sequence, not just the prefix:
    ``lambda_{n,0} >= top_lower`` and ``lambda_{n,0}/lambda_{n,i} >= 1 + ratio_gap``
    for i >= 1. They are what lets a divergent reference series certify
    divergence of the third criterion.
    """
    factors: tuple
    tails: tuple
    dims: tuple
    infinite: bool = False
    generator: dict | None = None
    top_lower: Fraction | None = None
    ratio_gap: Fraction | None = None
    primes: tuple = ()

    def __post_init__(self):
        if not (len(self.factors) == len(self.tails) == len(self.dims)):
            raise ScheduleError("factors, tails and dims must have equal length")
        for n, (lam, tail, d) in enumerate(zip(self.factors, self.tails, self.dims)):
            if not lam:
                raise ScheduleError(f"factor {n} has no eigenvalues")
            if any(x <= 0 for x in lam):
                raise ScheduleError(f"factor {n} has a non-positive eigenvalue")
            if any(a < b for a, b in zip(lam, lam[1:])):
                raise ScheduleError(f"factor {n} is not nonincreasing")
            if tail < 0:
                raise ScheduleError(f"factor {n} has negative tail mass")
            if sum(lam) + tail != 1:
                raise ScheduleError(f"factor {n} does not sum to 1")
            if d is not None:
                if tail != 0 or len(lam) > d:
                    raise ScheduleError(f"factor {n}: finite dimension {d} inconsistent with the list")

    @property
    def length(self) -> int:
        return len(self.factors)

    def reference_terms(self) -> list[Fraction]:
        return [1 - lam[0] for lam in self.factors]

    def to_document(self) -> dict:
        doc = {
            "factors": [[str(x) for x in lam] for lam in self.factors],
            "tails": [str(t) for t in self.tails],
            "dims": [d if d is not None else "inf" for d in self.dims],
            "infinite": self.infinite,
        }
        if self.generator is not None:
            doc["generator"] = self.generator
        return doc


def prime_schedule(primes, n_max: int, k_max: int) -> EigenvalueSchedule:
    """``lambda_{n,k} = (1 - 1/p_n) p_n^{-k}`` for k = 0..k_max, with tail mass ``p_n^{-(k_max+1)}``."""
    seq = primes if isinstance(primes, PrimeSequence) else parse_primes(primes)
    if n_max < 0 or k_max < 0:
        raise ScheduleError("truncations must be non-negative")
    ps = seq.prefix(n_max)
    _validate_primes(ps)
    factors, tails = [], []
    for p in ps:
        factors.append(tuple((1 - Fraction(1, p)) * Fraction(1, p ** k) for k in range(k_max + 1)))
        tails.append(Fraction(1, p ** (k_max + 1)))
    return EigenvalueSchedule(
        tuple(factors), tuple(tails), tuple(None for _ in ps),
        infinite=not seq.finite,
        generator={"family": "prime_geometric", "primes": seq.to_document(), "k_max": k_max},
        # lambda_{n,0} = 1 - 1/p >= 1/2 and lambda_{n,0}/lambda_{n,i} = p^i >= 2
        top_lower=Fraction(1, 2), ratio_gap=Fraction(1),
        primes=tuple(ps),
    )


def explicit_schedule(factors, dims=None, tails=None, infinite=False) -> EigenvalueSchedule:
    fac = tuple(tuple(_q(x) for x in lam) for lam in factors)
    if tails is None:
        tails = [1 - sum(lam) for lam in fac]
    tl = tuple(_q(t) for t in tails)
    if dims is None:
        dims = [len(lam) if t == 0 else None for lam, t in zip(fac, tl)]
    dm = tuple(None if d in (None, "inf") else int(d) for d in dims)
    return EigenvalueSchedule(fac, tl, dm, infinite=infinite)


# -- evidence -----------------------------------------------------------------

@dataclass(frozen=True)
class ConvergenceEvidence:
    """Behaviour of the reference series ``sum_n (1 - lambda_{n,0})`` over the full sequence."""
    verdict: str          # "convergent" | "divergent"
    justification: str
    parameters: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.verdict not in ("convergent", "divergent"):
            raise EvidenceError(f"unknown verdict {self.verdict!r}")
        if self.justification not in JUSTIFICATIONS:
            raise EvidenceError(f"unknown justification {self.justification!r}")

    def to_document(self) -> dict:
        return {"verdict": self.verdict, "justification": self.justification,
                "parameters": {k: str(v) for k, v in sorted(self.parameters.items())}}


def validate_evidence(s: EigenvalueSchedule, ev: ConvergenceEvidence) -> dict:
    """Check the evidence against the materialized prefix; returns certified tail bounds."""
    r = s.reference_terms()
    if ev.justification == "finite-list":
        if ev.verdict != "convergent":
            raise EvidenceError("a finite list of factors cannot be divergent")
        if s.infinite:
            raise EvidenceError("finite-list evidence on an infinite factor sequence")
        return {"tail_upper": Fraction(0)}
    if ev.justification == "geometric-minorant":
        if ev.verdict != "convergent":
            raise EvidenceError("a geometric minorant proves convergence, not divergence")
        a, b = _q(ev.parameters.get("a", 1)), _q(ev.parameters.get("b", 0))
        if a <= 0 or b <= 1:
            raise EvidenceError("geometric minorant needs a > 0 and b > 1")
        # p_n >= a b^n  <=>  r_n <= 1/(a b^n), n counted from 1
        for n, rn in enumerate(r, start=1):
            if rn * a * b ** n > 1:
                raise EvidenceError(f"minorant p_n >= a b^n fails at n = {n}")
        n_max = len(r)
        return {"tail_upper": 1 / (a * b ** n_max * (b - 1))}
    if ev.justification == "all-primes-in-order":
        if ev.verdict != "divergent":
            raise EvidenceError("the reciprocal prime series diverges")
        expected = [Fraction(1, int(sympy.prime(n))) for n in range(1, len(r) + 1)]
        if r != expected:
            raise EvidenceError("reference terms are not 1/p_n over the primes in order")
        return {}
    return {}  # user-asserted: taken as given


# -- classification -----------------------------------------------------------

@dataclass
class TypeVerdict:
    type: str
    criteria: dict
    truncation: int
    evidence: dict | None
    banner: str = BANNER

    def to_document(self) -> dict:
        return {"type": self.type, "truncation": self.truncation, "criteria": self.criteria,
                "evidence": self.evidence, "banner": self.banner}


def _criterion3_factor(lam, tail, C, weighted=True):
    """Exact lower/upper bounds of one factor's contribution to the third series."""
    lo = hi = Fraction(0)
    top = lam[0]
    for x in lam[1:]:
        t = min((top / x - 1) ** 2, C)
        if weighted:
            t *= x
        lo += t
        hi += t
    if tail:
        if not weighted:
            return lo, None  # infinitely many positive unweighted terms
        gap = min((top / lam[-1] - 1) ** 2, C)
        lo += tail * gap
        hi += tail * C
    return lo, hi


def _criterion2_factor(lam, d):
    """Interval enclosure of sum_i |d^{-1/2} - lambda_i^{1/2}|^2 (unlisted eigenvalues are 0)."""
    iv = mpmath.iv
    old = iv.prec
    iv.prec = 120
    try:
        rd = 1 / iv.sqrt(iv.mpf(d))
        total = iv.mpf(0)
        for x in lam:
            total += (rd - iv.sqrt(iv.mpf(x.numerator) / x.denominator)) ** 2
        total += (d - len(lam)) * rd ** 2
        return total
    finally:
        iv.prec = old


def validate_criterion2_evidence(s: EigenvalueSchedule, ev: ConvergenceEvidence) -> None:
    if any(d is None for d in s.dims):
        raise EvidenceError("criterion 2 needs every factor finite-dimensional")
    if ev.justification == "finite-list":
        if s.infinite or ev.verdict != "convergent":
            raise EvidenceError("finite-list evidence needs a finite, convergent list")
    elif ev.justification != "user-asserted":
        raise EvidenceError(f"{ev.justification} evidence does not apply to criterion 2")


def classify_type(s: EigenvalueSchedule, evidence: ConvergenceEvidence | None = None,
                  C=Fraction(1), delta=Fraction(1, 2), criterion3: str = "weighted",
                  criterion2_evidence: ConvergenceEvidence | None = None) -> TypeVerdict:
    C, delta = _q(C), _q(delta)
    if C <= 0 or delta <= 0:
        raise ScheduleError("C and delta must be positive")
    weighted = criterion3 == "weighted"
    if criterion3 not in ("weighted", "unweighted"):
        raise ScheduleError(f"unknown criterion-3 reading {criterion3!r}")
    if evidence is None and not s.infinite:
        evidence = ConvergenceEvidence("convergent", "finite-list")
    bounds = validate_evidence(s, evidence) if evidence is not None else {}
    if criterion2_evidence is not None:
        validate_criterion2_evidence(s, criterion2_evidence)

    r = s.reference_terms()
    crit1 = sum(r, Fraction(0))
    c3_lo, c3_hi, c3_finite = Fraction(0), Fraction(0), True
    per_factor_ratio_ok = True
    for lam, tail, rn in zip(s.factors, s.tails, r):
        lo, hi = _criterion3_factor(lam, tail, C, weighted)
        c3_lo += lo
        if hi is None:
            c3_finite = False
        else:
            c3_hi += hi
            # term_n <= C r_n always holds in the weighted form
            per_factor_ratio_ok &= hi <= C * rn
    all_finite = all(d is not None for d in s.dims)
    crit2 = None
    if all_finite:
        tot = mpmath.iv.mpf(0)
        for lam, d in zip(s.factors, s.dims):
            tot += _criterion2_factor(lam, d)
        crit2 = [mpmath.nstr(mpmath.mpf(tot.a.a), 20), mpmath.nstr(mpmath.mpf(tot.b.b), 20)]
    top_ok_prefix = all(lam[0] >= delta for lam in s.factors)
    top_ok = top_ok_prefix and (not s.infinite or (s.top_lower is not None and s.top_lower >= delta))
    criteria = {
        "criterion1": {"partial_sum": str(crit1), "terms": len(r)},
        "criterion2": ({"partial_sum_enclosure": crit2} if all_finite
                       else {"applicable": False, "reason": "infinite-dimensional factor"}),
        "criterion3": {"reading": criterion3, "C": str(C), "delta": str(delta),
                       "partial_sum_lower": str(c3_lo),
                       "partial_sum_upper": str(c3_hi) if c3_finite else "inf",
                       "top_eigenvalue_at_least_delta": top_ok},
    }
    if "tail_upper" in bounds:
        criteria["criterion1"]["full_sum_upper"] = str(crit1 + bounds["tail_upper"])

    if evidence is None:
        return TypeVerdict("inconclusive", criteria, s.length, None)

    if evidence.verdict == "convergent":
        # criterion 1 is the reference series itself
        return TypeVerdict("I", criteria, s.length, evidence.to_document())

    # the reference series diverges: not type I
    verdict = "inconclusive"
    if criterion2_evidence is not None and criterion2_evidence.verdict == "convergent":
        verdict = "II"
    if weighted:
        gap = s.ratio_gap if s.infinite else _prefix_gap(s)
        if top_ok and gap is not None and gap > 0:
            kappa = min(gap ** 2, C)
            criteria["criterion3"]["minorant"] = f"term_n >= {kappa} (1 - lambda_n0)"
            verdict = _combine(verdict, "III")
    else:
        # every factor with infinitely many eigenvalues makes the unweighted sum infinite,
        # so the unweighted reading can never certify III here
        if c3_finite and not s.infinite:
            verdict = _combine(verdict, "III")
    doc = evidence.to_document()
    if criterion2_evidence is not None:
        criteria["criterion2"]["evidence"] = criterion2_evidence.to_document()
    return TypeVerdict(verdict, criteria, s.length, doc)


def _combine(verdict: str, new: str) -> str:
    if verdict not in ("inconclusive", new):
        raise EvidenceError(f"evidence certifies both {verdict} and {new}")
    return new


def _prefix_gap(s: EigenvalueSchedule):
    gaps = [lam[0] / x - 1 for lam in s.factors for x in lam[1:]]
    return min(gaps) if gaps else None


def theorem_verdict(series_convergent: bool) -> dict:
    """Known types of the pair (M, M^) for the prime family, from the convergence of sum 1/p_n."""
    if series_convergent:
        return {"M": "I", "M_hat": "II", "pair": "(I_inf, II_inf)", "invertibles": "complement of measure zero"}
    return {"M": "III", "M_hat": "III", "pair": "(III, III)", "invertibles": "measure zero"}


def evidence_for(seq: PrimeSequence) -> ConvergenceEvidence:
    if seq.kind == "all":
        return ConvergenceEvidence("divergent", "all-primes-in-order")
    if seq.kind == "above_powers":
        return ConvergenceEvidence("convergent", "geometric-minorant", {"a": 1, "b": seq.base})
    return ConvergenceEvidence("convergent", "finite-list")


def classify_prime_family(primes, n_max: int = 20, k_max: int = 20, C=Fraction(1),
                          delta=Fraction(1, 2), criterion3: str = "weighted") -> dict:
    seq = primes if isinstance(primes, PrimeSequence) else parse_primes(primes)
    s = prime_schedule(seq, n_max, k_max)
    ev = evidence_for(seq)
    v = classify_type(s, ev, C, delta, criterion3)
    recip = sum((Fraction(1, p) for p in s.primes), Fraction(0))
    if Fraction(v.criteria["criterion1"]["partial_sum"]) != recip:
        raise ConsistencyError("criterion-1 partial sum differs from sum 1/p_n")
    out = {"primes": seq.to_document(), "prefix": list(s.primes), "n_max": n_max, "k_max": k_max,
           "verdict": v.to_document(), "reciprocal_sum_prefix": str(recip)}
    if seq.finite:
        out["known"] = {"M": "I", "reason": "finite tensor product of type I factors"}
    else:
        out["known"] = theorem_verdict(ev.verdict == "convergent")
    out["agrees"] = v.type == out["known"]["M"]
    if not out["agrees"]:
        raise ConsistencyError(f"criteria give {v.type}, expected {out['known']['M']}")
    return out


def invertible_measure(primes, n_max: int) -> dict:
    """Exact partial products ``prod_{n <= n_max} (1 - 1/p_n)``.

    This is the measure of the invertible elements of ``prod_n Z_{p_n}``
    (each ``Z_p \\ Z_p^x = pZ_p`` has measure 1/p).
    """
    seq = primes if isinstance(primes, PrimeSequence) else parse_primes(primes)
    ps = seq.prefix(n_max)
    _validate_primes(ps)
    partial, acc = [], Fraction(1)
    for p in ps:
        acc *= 1 - Fraction(1, p)
        partial.append(acc)
    seq_mono = all(b < a for a, b in zip([Fraction(1)] + partial, partial))
    out = {"primes": seq.to_document(), "prefix": ps, "n_max": len(ps),
           "measure": str(acc), "enclosure": [str(acc), str(acc)],
           "partial_products": [str(x) for x in partial],
           "strictly_decreasing": seq_mono}
    if not seq.finite:
        out["annotation"] = ("the infinite product is 0 iff sum 1/p_n diverges; "
                             + ("this sequence diverges, so the limit is 0" if seq.kind == "all"
                                else "this sequence converges, so the limit is positive"))
    return out


def parse_schedule(doc: dict):
    """Returns ``(schedule, evidence, prime_sequence_or_None)``."""
    try:
        if doc.get("family") == "prime_geometric":
            seq = parse_primes(doc["primes"])
            n_max = int(doc.get("n_max", 20))
            s = prime_schedule(seq, n_max, int(doc.get("k_max", 20)))
            ev = _parse_evidence(doc["evidence"]) if "evidence" in doc else evidence_for(seq)
            return s, ev, seq
        if "factors" in doc:
            s = explicit_schedule(doc["factors"], doc.get("dims"), doc.get("tails"),
                                  bool(doc.get("infinite", False)))
            ev = _parse_evidence(doc["evidence"]) if "evidence" in doc else None
            return s, ev, None
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        if isinstance(exc, (ScheduleError, EvidenceError)):
            raise
        raise ScheduleError(str(exc)) from exc
    raise ScheduleError("schedule needs 'factors' or 'family': 'prime_geometric'")


def parse_criterion2_evidence(doc: dict) -> ConvergenceEvidence | None:
    if "criterion2_evidence" not in doc:
        return None
    try:
        return _parse_evidence(doc["criterion2_evidence"])
    except (KeyError, TypeError) as exc:
        raise EvidenceError(f"bad criterion-2 evidence: {exc}") from exc


def _parse_evidence(doc: dict) -> ConvergenceEvidence:
    return ConvergenceEvidence(doc["verdict"], doc["justification"], dict(doc.get("parameters", {})))
