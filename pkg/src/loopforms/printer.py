"""Text rendering of jet expressions in the same grammar the parser reads."""

from __future__ import annotations

from .ratfun import RatFun, format_ratfun


def _jet_name(names, i: int, s: int) -> str:
    return f"{names[i]}_{s}"


def format_monomial(names, m) -> str:
    parts = []
    for (i, s), e in m:
        v = _jet_name(names, i, s)
        parts.append(v if e == 1 else f"{v}^{e}")
    return "*".join(parts)


def _term(names, m, c: RatFun) -> tuple[bool, str]:
    """(negative, body) for one term c*m."""
    neg = False
    if c.num.leading_coeff() < 0 and len(c.num.terms) == 1:
        neg, c = True, -c
    cs = format_ratfun(c)
    if not m:
        return neg, cs
    mono = format_monomial(names, m)
    if c == 1:
        return neg, mono
    if len(c.num.terms) > 1 and c.den.is_one():
        cs = f"({cs})"
    elif not c.den.is_one() and not cs.startswith("("):
        cs = f"({cs})"
    return neg, f"{cs}*{mono}"


def _sort_key(m):
    return (sum(e for _, e in m), [(s, i, e) for (i, s), e in m])


def format_jet(e) -> str:
    if not e.terms:
        return "0"
    names = e.ring.names
    out = []
    for m in sorted(e.terms, key=_sort_key):
        neg, body = _term(names, m, e.terms[m])
        if not out:
            out.append(f"-{body}" if neg else body)
        elif neg:
            out.append(f" - {body}")
        elif body.startswith("-"):
            out.append(f" + ({body})")
        else:
            out.append(f" + {body}")
    return "".join(out)
