#!/usr/bin/env python3
# Copyright 2026 The lirelab Authors
# SPDX-License-Identifier: Apache-2.0

# Independent high-precision evaluation of the frozen expected values used in
# tests/test_policy.cpp and tests/test_objectives.cpp. Uses mpmath only; shares
# no code with the C++ implementation.
import mpmath as mp

mp.mp.dps = 40

# V = 3 (EOS = 2), Q = 1. TABLE[prev][next]; row 2 doubles as the BOS row.
TABLE = [
    [mp.mpf("0.5"), mp.mpf("-1.0"), mp.mpf("0.25")],
    [mp.mpf("1.0"), mp.mpf("0.0"), mp.mpf("-0.5")],
    [mp.mpf("0.2"), mp.mpf("0.7"), mp.mpf("-0.3")],
]
EOS = 2


def log_softmax_entry(row, t):
    z = mp.log(mp.fsum(mp.e ** v for v in row))
    return row[t] - z


def seq_log_prob(tokens):
    prev, total = EOS, mp.mpf(0)
    for t in tokens:
        total += log_softmax_entry(TABLE[prev], t)
        prev = t
    return total


def softmax(xs):
    m = max(xs)
    e = [mp.e ** (x - m) for x in xs]
    s = mp.fsum(e)
    return [v / s for v in e]


def lire_value(responses, raw_rewards, temperature):
    r = softmax(raw_rewards)
    lp = [seq_log_prob(y) / temperature for y in responses]
    p = softmax(lp)
    return -mp.fsum(pj * rj for pj, rj in zip(p, r))


print("seq_log_prob([0,1])          =", mp.nstr(seq_log_prob([0, 1]), 20))
print("seq_log_prob([1,0,2])        =", mp.nstr(seq_log_prob([1, 0, 2]), 20))
print("normalize([0, ln3])          =", [mp.nstr(v, 20) for v in softmax([0, mp.log(3)])])
print("cand(T=0.5,[ln.1, ln.3])     =",
      [mp.nstr(v, 20) for v in softmax([mp.log(mp.mpf("0.1")) / mp.mpf("0.5"),
                                        mp.log(mp.mpf("0.3")) / mp.mpf("0.5")])])

POOL = [[0, 2], [1, 0, 2], [2]]
RAW = [mp.mpf("1.0"), mp.mpf("-0.5"), mp.mpf("0.3")]
for T in (mp.mpf(1), mp.mpf(2), mp.mpf("0.5")):
    print(f"lire_value(T={T})            =", mp.nstr(lire_value(POOL, RAW, T), 20))
