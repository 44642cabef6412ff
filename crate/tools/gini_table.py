#!/usr/bin/env python3
"""Exact Gini tables for the 8-row CART fixture, using fractions.

Prints the root candidate table (feature, threshold, weighted child Gini)
and the pre-order split sequence of the fully grown tree with
min_samples_leaf = 1.
"""

from fractions import Fraction as F

X = [(1, 7), (2, 3), (3, 8), (4, 1), (5, 6), (6, 2), (7, 5), (8, 4)]
Y = [0, 0, 1, 0, 1, 1, 0, 1]


def gini(ys):
    if not ys:
        return F(0)
    p = F(sum(ys), len(ys))
    return 1 - p * p - (1 - p) * (1 - p)


def table(rows):
    out = []
    for f in range(2):
        vals = sorted({X[i][f] for i in rows})
        for a, b in zip(vals, vals[1:]):
            t = F(a + b, 2)
            left = [Y[i] for i in rows if X[i][f] <= t]
            right = [Y[i] for i in rows if X[i][f] > t]
            w = F(len(left), len(rows)) * gini(left) + F(len(right), len(rows)) * gini(right)
            out.append((f, t, w))
    return out


def grow(rows, splits):
    ys = [Y[i] for i in rows]
    if len(set(ys)) < 2:
        return
    best = None
    for f, t, w in table(rows):
        if w < gini(ys) and (best is None or w < best[2]):
            best = (f, t, w)
    if best is None:
        return
    f, t, _ = best
    splits.append((f, t))
    grow([i for i in rows if X[i][f] <= t], splits)
    grow([i for i in rows if X[i][f] > t], splits)


rows = list(range(8))
print("root gini", gini([Y[i] for i in rows]))
for f, t, w in table(rows):
    print(f, float(t), w)
splits = []
grow(rows, splits)
print("splits", [(f, float(t)) for f, t in splits])
