"""Exact linear feasibility over Q(sqrt 2).

Phase-one primal simplex on a dense tableau with Bland's rule, so it cannot
cycle.  Only feasibility is needed by the rest of the package: regularity
certificates, separating hyperplanes and improper-intersection witnesses.
"""

from __future__ import annotations

from typing import Sequence

from .exact import ONE, ZERO, Scalar, as_scalar

__all__ = ["feasible_point"]


def feasible_point(
    nvars: int,
    ge: Sequence[tuple[Sequence, object]] = (),
    eq: Sequence[tuple[Sequence, object]] = (),
    nonneg: Sequence[int] = (),
) -> list[Scalar] | None:
    """Find ``x`` with ``a.x >= b`` for ``(a, b)`` in ``ge`` and ``a.x == b`` in ``eq``.

    Variables listed in ``nonneg`` are constrained to be ``>= 0``; all others
    are free.  Returns one exact solution (a basic one) or ``None``.
    """
    nonneg = set(nonneg)
    # column layout: for each original var a "plus" column, and a "minus"
    # column for free vars; then one slack per >= row.
    col_of: list[tuple[int, int]] = []  # (var, sign)
    plus = {}
    minus = {}
    for j in range(nvars):
        plus[j] = len(col_of)
        col_of.append((j, 1))
        if j not in nonneg:
            minus[j] = len(col_of)
            col_of.append((j, -1))
    nstruct = len(col_of)
    nslack = len(ge)
    ncols = nstruct + nslack

    rows: list[list[Scalar]] = []
    rhs: list[Scalar] = []
    slack_col: list[int | None] = []
    for k, (a, b) in enumerate(list(ge) + list(eq)):
        a = [as_scalar(x) for x in a]
        if len(a) != nvars:
            raise ValueError("constraint length does not match nvars")
        row = [ZERO] * ncols
        for j, v in enumerate(a):
            row[plus[j]] = v
            if j in minus:
                row[minus[j]] = -v
        sc = None
        if k < nslack:
            sc = nstruct + k
            row[sc] = -ONE
        b = as_scalar(b)
        if b.sign() < 0:
            row = [-x for x in row]
            b = -b
        rows.append(row)
        rhs.append(b)
        slack_col.append(sc if sc is not None and row[sc] == ONE else None)

    m = len(rows)
    if m == 0:
        return [ZERO] * nvars

    # basis: usable slack or an artificial column
    basis: list[int] = []
    art = []
    for i in range(m):
        if slack_col[i] is not None:
            basis.append(slack_col[i])
        else:
            basis.append(ncols + len(art))
            art.append(i)
    total = ncols + len(art)
    for i in range(m):
        rows[i].extend([ZERO] * len(art))
    for t, i in enumerate(art):
        rows[i][ncols + t] = ONE

    # minimize sum of artificials; reduced costs of nonbasic columns
    cost = [ZERO] * total
    obj = ZERO
    for i in art:
        for j in range(total):
            cost[j] = cost[j] - rows[i][j]
        obj = obj - rhs[i]
    for t in range(len(art)):
        cost[ncols + t] = ZERO

    while True:
        enter = next((j for j in range(total) if cost[j].sign() < 0 and j not in basis), None)
        if enter is None:
            break
        best = None
        for i in range(m):
            a = rows[i][enter]
            if a.sign() > 0:
                ratio = rhs[i] / a
                key = (ratio, basis[i])
                if best is None or key[0] < best[0] or (key[0] == best[0] and key[1] < best[1]):
                    best = (ratio, basis[i], i)
        if best is None:
            break  # cannot happen for a phase-one objective bounded below by 0
        r = best[2]
        piv = rows[r][enter]
        inv = piv.inverse()
        rows[r] = [x * inv if x else x for x in rows[r]]
        rhs[r] = rhs[r] * inv
        support = [j for j, y in enumerate(rows[r]) if y]
        prow = rows[r]
        for i in range(m):
            if i != r:
                f = rows[i][enter]
                if f:
                    row = rows[i]
                    for j in support:
                        row[j] = row[j] - f * prow[j]
                    rhs[i] = rhs[i] - f * rhs[r]
        f = cost[enter]
        if f:
            for j in support:
                cost[j] = cost[j] - f * prow[j]
            obj = obj - f * rhs[r]
        basis[r] = enter

    if obj.sign() != 0:
        return None
    values = [ZERO] * total
    for i, bcol in enumerate(basis):
        values[bcol] = rhs[i]
    if any(values[ncols + t] for t in range(len(art))):
        return None
    x = [ZERO] * nvars
    for c in range(nstruct):
        j, s = col_of[c]
        if values[c]:
            x[j] = x[j] + values[c] if s > 0 else x[j] - values[c]
    return x
