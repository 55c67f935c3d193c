"""Graphviz text for Hasse diagrams and sheaf bases."""
from __future__ import annotations

import json


def covers(leq) -> list:
    """Pairs (x, y) with x < y and nothing strictly between, in index order."""
    n = len(leq)
    out = []
    for x in range(n):
        for y in range(n):
            if x == y or not leq[x][y]:
                continue
            if not any(z not in (x, y) and leq[x][z] and leq[z][y] for z in range(n)):
                out.append((x, y))
    return out


def _q(s) -> str:
    return json.dumps(str(s), ensure_ascii=False)


def hasse(leq, labels=None, name: str = "hasse", extra=None) -> str:
    """Hasse diagram with edges drawn from each element up to its covers."""
    n = len(leq)
    labels = labels or [str(i) for i in range(n)]
    lines = [f"digraph {name} {{", "  rankdir=BT;", "  node [shape=plaintext];"]
    for i in range(n):
        text = labels[i] if extra is None else labels[i] + "\n" + extra[i]
        lines.append(f"  n{i} [label={_q(text)}];")
    for x, y in covers(leq):
        lines.append(f"  n{x} -> n{y} [arrowhead=none];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def lattice_dot(L) -> str:
    L = L.lattice
    return hasse(L.leq, L.labels, "lattice")


def site_dot(S) -> str:
    return hasse(S.leq, S.labels, "site")


def sheaf_dot(S) -> str:
    """Base space of a sheaf, each point annotated with its stalk size."""
    labels = [S.base.point_label(i) for i in range(S.n_points)] if getattr(S, "base", None) \
        else [str(i) for i in range(S.n_points)]
    return hasse(S.order, labels, "sheaf", [f"|stalk|={G.size}" for G in S.stalks])
