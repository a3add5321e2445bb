#!/usr/bin/env python3
"""Brute-force exponential of two finite spaces over a Goedel chain.

Writes the carrier, the number of quantale tables and the hat relation of
A => B. Independent of the C++ workbench; used as the golden file for its
exponential construction.
"""
import itertools
import json
import sys


def load(path):
    with open(path) as f:
        s = json.load(f)
    q = s["quantale"]
    assert q["preset"] == "godel"
    n = q["size"]
    names = [f"g{i}" for i in range(n)]
    rel = {(x, y): names.index(v) for x, row in s["relation"].items() for y, v in row.items()}
    return s["carrier"], n, names, rel


def main(a_path, b_path, out_path):
    ca, na, _, ra = load(a_path)
    cb, nb, names_b, rb = load(b_path)
    # on a chain the predicate is down-closed below the hat value
    mono = [m for m in itertools.product(range(nb), repeat=na) if all(m[i] <= m[i + 1] for i in range(na - 1))]
    tables = [sum(pick, ()) for pick in itertools.product(mono, repeat=len(ca))]
    funcs = list(itertools.product(range(len(cb)), repeat=len(ca)))
    triples = [(x, a, y) for x in range(len(ca)) for y in range(len(ca)) for a in range(na) if a <= ra[(ca[x], ca[y])]]

    def ok(f, t, g):
        return all(t[x * na + a] <= rb[(cb[f[x]], cb[g[y]])] for x, a, y in triples)

    label = lambda f: "[" + ",".join(cb[i] for i in f) + "]"
    hat = {}
    for f in funcs:
        for g in funcs:
            good = [t for t in tables if ok(f, t, f) and ok(f, t, g)]
            top = tuple(max(col) for col in zip(*good)) if good else tuple(0 for _ in tables[0])
            assert not good or top in good
            cells = [names_b[v] for v in top]
            w = na
            hat.setdefault(label(f), {})[label(g)] = "|".join(",".join(cells[i:i + w]) for i in range(0, len(cells), w))
    out = {"inputs": [a_path.split("/")[-1], b_path.split("/")[-1]], "carrier": [label(f) for f in funcs],
           "tables": len(tables), "relation": hat}
    with open(out_path, "w") as f:
        json.dump(out, f, indent=2, sort_keys=True)
        f.write("\n")


if __name__ == "__main__":
    main(*sys.argv[1:4])
