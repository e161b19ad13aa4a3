"""Independent re-verification of certificate files.

Nothing here calls into the certification code. The only shared piece is
the system builder, which turns the SYSTEM line back into polynomials; the
derivatives, norms, residual and the inequality itself are recomputed from
the polynomial terms. Rational certificates are re-checked in exact
arithmetic and every recorded quantity must match. Interval certificates
are re-checked with mpmath interval arithmetic over the epsilon box.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from mpmath import iv

from .systems import SpaceDescriptor, build_system

# hypotheses that are not polynomial equations, restated here on purpose
_FOURTH_POWER_WINDOW = {"HP2_15": Fraction(1, 10**6), "OP2_27": Fraction(1, 10**7)}


@dataclass
class VerifyReport:
    verdict: str
    problems: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        """True when the certificate proves what it claims."""
        return self.verdict == "PROVEN" and not self.problems


def _partials(poly) -> dict:
    """{variable: {monomial: coefficient}} by differentiating each term directly."""
    out: dict = {}
    for mono, c in poly.terms.items():
        seen = set()
        for pos, v in enumerate(mono):
            if v in seen:
                continue
            seen.add(v)
            power = mono.count(v)
            rest = mono[:pos] + mono[pos + 1:]
            d = out.setdefault(v, {})
            d[rest] = d.get(rest, 0) + Fraction(c) * power
    return out


def _eval_terms(terms: dict, x, coerce=Fraction):
    total = coerce(Fraction(0))
    for mono, c in terms.items():
        t = coerce(Fraction(c))
        for v in mono:
            t = t * x[v]
        total = total + t
    return total


def _side_problems(cs, x0, eps) -> list:
    desc = cs.descriptor
    out = []
    if desc.kind in _FOURTH_POWER_WINDOW:
        win = _FOURTH_POWER_WINDOW[desc.kind]
        for i, slot in enumerate(cs.layout):
            if slot[0] == "v" and abs(x0[i] - 1) + eps > win:
                out.append(f"fourth power variable {slot[1]} is not within {win} of 1 on the box")
    if desc.kind == "GRASS_CYCLIC":
        for i, slot in enumerate(cs.layout):
            if slot[0] == "eta":
                m = desc.m
                if x0[i] - eps <= Fraction(m, m + 1) or (m > 1 and x0[i] + eps >= Fraction(m, m - 1)):
                    out.append("eta leaves its open window on the box")
    return out


def _exact_check(cert, cs, rep: VerifyReport) -> None:
    f = cs.system
    x0, T, eps = cert.x0, cert.T, cert.epsilon
    n = f.n
    resid = Fraction(0)
    defect = Fraction(0)
    coef_norm = Fraction(0)
    degree = 0
    for i, p in enumerate(f.components):
        resid = max(resid, abs(_eval_terms(p.terms, x0)))
        coef_norm = max(coef_norm, sum((abs(Fraction(c)) for c in p.terms.values()), Fraction(0)))
        degree = max([degree] + [len(mono) for mono in p.terms])
        grad = {v: _eval_terms(t, x0) for v, t in _partials(p).items()}
        row_sum = Fraction(0)
        for k in range(n):
            s = sum((g * T[v][k] for v, g in grad.items() if g), Fraction(0))
            if k == i:
                s -= 1
            row_sum += abs(s)
        defect = max(defect, row_sum)
    norm_T = max((sum((abs(v) for v in row), Fraction(0)) for row in T), default=Fraction(0))
    eta = max(Fraction(1), max(abs(v) for v in x0) + eps)
    variation = eps * coef_norm * degree * (degree - 1) * eta ** max(degree - 2, 0)
    margin = 1 - norm_T * resid / eps - defect - variation * norm_T
    recomputed = {"NORM_T": (cert.norm_T, norm_T), "RESID": (cert.resid, resid), "DEFECT": (cert.defect, defect),
                  "VARIATION": (cert.variation, variation), "MARGIN": (cert.margin, margin)}
    for name, (recorded, mine) in recomputed.items():
        if recorded != mine:
            rep.problems.append(f"{name} recorded {float(recorded):.6e} but recomputes to {float(mine):.6e}")
    rep.verdict = "PROVEN" if margin > 0 else "FAILED"


def _ival(q: Fraction):
    return iv.mpf(q.numerator) / q.denominator


def _interval_check(cert, cs, rep: VerifyReport, prec: int) -> None:
    f = cs.system
    n = f.n
    eps = cert.epsilon
    saved = iv.prec
    iv.prec = prec
    try:
        box = [iv.mpf([_ival(v - eps).a, _ival(v + eps).b]) for v in cert.x0]
        point = [_ival(v) for v in cert.x0]
        T = [[_ival(v) if v else None for v in row] for row in cert.T]
        sup_defect = iv.mpf(0)
        resid = iv.mpf(0)
        for i, p in enumerate(f.components):
            resid = iv.mpf(max(resid.b, abs(_eval_terms(p.terms, point, _ival)).b))
            grad = {v: _eval_terms(t, box, _ival) for v, t in _partials(p).items()}
            row_sum = iv.mpf(0)
            for k in range(n):
                s = iv.mpf(-1) if k == i else iv.mpf(0)
                for v, g in grad.items():
                    t = T[v][k]
                    if t is not None:
                        s = s + g * t
                row_sum = row_sum + abs(s)
            if row_sum.b > sup_defect.b:
                sup_defect = iv.mpf(row_sum.b)
        norm_T = iv.mpf(0)
        for row in T:
            s = iv.mpf(0)
            for t in row:
                if t is not None:
                    s = s + abs(t)
            if s.b > norm_T.b:
                norm_T = iv.mpf(s.b)
        rhs = 1 - norm_T * resid / _ival(eps)
        proven = bool(sup_defect.b < rhs.a)
    finally:
        iv.prec = saved
    rep.verdict = "PROVEN" if proven else "FAILED"


def verify_certificate(cert, prec: int = 80) -> VerifyReport:
    """Re-derive the verdict of a certificate without trusting its recorded numbers."""
    rep = VerifyReport("FAILED")
    cs = build_system(SpaceDescriptor.parse(cert.descriptor))
    f = cs.system
    if (cert.nvars, cert.neqs) != (f.m, f.n):
        rep.problems.append(f"VARS/EQNS {cert.nvars}/{cert.neqs} do not match the system ({f.m}/{f.n})")
        return rep
    if len(cert.x0) != f.m or len(cert.T) != f.m or any(len(r) != f.n for r in cert.T):
        rep.problems.append("X0 or T has the wrong size")
        return rep
    if cert.epsilon <= 0:
        rep.problems.append("EPSILON must be positive")
        return rep
    if cert.backend == "interval":
        _interval_check(cert, cs, rep, prec)
    else:
        _exact_check(cert, cs, rep)
    side = _side_problems(cs, cert.x0, cert.epsilon)
    rep.problems.extend(side)
    if side:
        rep.verdict = "FAILED"
    if rep.verdict != cert.verdict:
        rep.problems.append(f"recorded verdict {cert.verdict} but re-verification gives {rep.verdict}")
    return rep
