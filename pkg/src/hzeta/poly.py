"""Dense integer polynomials as coefficient tuples, constant term first."""

from __future__ import annotations


def trim(a) -> tuple[int, ...]:
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return tuple(a)


def add(a, b):
    n = max(len(a), len(b))
    return trim((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n))


def mul(a, b, degree: int | None = None):
    """Product of a and b, optionally truncated to terms of degree <= degree."""
    if not a or not b:
        return ()
    n = len(a) + len(b) - 1
    if degree is not None:
        n = min(n, degree + 1)
    out = [0] * n
    for i, x in enumerate(a):
        if x == 0 or i >= n:
            continue
        for j, y in enumerate(b[: n - i]):
            out[i + j] += x * y
    return trim(out)


def power(a, k: int, degree: int | None = None):
    out = (1,)
    base = tuple(a)
    while k:
        if k & 1:
            out = mul(out, base, degree)
        k >>= 1
        if k:
            base = mul(base, base, degree)
    return out


def divmod_monic(a, b):
    """Quotient and remainder of a by a polynomial b with leading coefficient +-1."""
    b = trim(b)
    if not b or b[-1] not in (1, -1):
        raise ValueError("divisor must have leading coefficient 1 or -1")
    rem = list(trim(a))
    db = len(b) - 1
    if len(rem) - 1 < db:
        return (), tuple(rem)
    quot = [0] * (len(rem) - db)
    lead = b[-1]
    for k in range(len(rem) - 1, db - 1, -1):
        c = rem[k] * lead
        if c:
            quot[k - db] = c
            for i, y in enumerate(b):
                rem[k - db + i] -= c * y
    return trim(quot), trim(rem[:db])


def one_minus_t_power(f: int) -> tuple[int, ...]:
    """The polynomial 1 - T**f."""
    return (1,) + (0,) * (f - 1) + (-1,)


def evaluate(a, t):
    acc = 0
    for c in reversed(a):
        acc = acc * t + c
    return acc


def to_string(a, var: str = "T") -> str:
    terms = []
    for k, c in enumerate(a):
        if c == 0:
            continue
        mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
        if mono and abs(c) == 1:
            coeff = "-" if c < 0 else "+"
            terms.append(f"{coeff}{mono}")
        else:
            terms.append(f"{c:+d}{'*' + mono if mono else ''}")
    if not terms:
        return "0"
    s = " ".join(terms)
    return s[1:] if s.startswith("+") else s
