"""Independent high-precision oracle for the frozen constants in tests/derived_values.hpp."""
from mpmath import mp, mpf, acos, log, ceil

mp.dps = 40


def out(name, v):
    print(f"inline constexpr double {name} = {mp.nstr(v, 20)};")


out("kBeta045", mpf("0.45") / (1 - mpf("0.45")))

E, l, v = mpf(6371), mpf(780), mpf("7.46")
tg = acos(E / (E + l))
out("kGeocentricAngleDefault", tg)
out("kCoverageTimeDefault", 2 * tg * (E + l) / v)
E2, l2, te = mpf(6371), mpf(550), mpf(10) * mp.pi / 180
tg2 = acos(E2 / (E2 + l2) * mp.cos(te)) - te
out("kCoverageTime550km10deg", 2 * tg2 * (E2 + l2) / mpf("7.6"))

B, s2, p = mpf(20e6), mpf("1e-13"), mpf("0.2")
g1, g2 = mpf("1e-10"), mpf("5e-11")
r1 = B * log(1 + g1 * p / (g2 * p + s2), 2)
r2 = B * log(1 + g2 * p / (g1 * p + s2), 2)
out("kUplinkTwoUserFirst", r1)
out("kUplinkTwoUserSecond", r2)
out("kUplinkTwoUserMean", (r1 + r2) / 2)
out("kUplinkSingleUser", B * log(1 + g1 * p / s2, 2))

out("kAmbiguityBound", 2 * (mpf("0.2") / mpf("0.8")) * (mpf("0.1") / mpf("0.9")) * (mpf("0.3") / mpf("0.7")))
out("kLengthThreshold09", ceil(log(mpf("0.3")) / log(mpf("0.9"))))

beta = mpf("0.3") / mpf("0.7")
out("kAccuracyLlama200", mpf("0.777") * 200 * log(1 / beta))
out("kUnitAccuracyLlama200", (1 - mpf("0.777")) / (200 * log(1 / beta)))
out("kComputeExample", mpf(600) * 130 / 19440)

d_bits = mpf(100) * 8 * 10**6
out("kTransmissionExample", 3 * (mpf("1e-4") * d_bits / mpf("2.5e7") + d_bits / mpf("1e8") * mpf("0.5")))

# Finite latent model: two contexts, two intentions, alphabet of three.
prior = [mpf("0.5"), mpf("0.5")]
intent = [[mpf("0.7"), mpf("0.3")], [mpf("0.2"), mpf("0.8")]]
emit = [[mpf("0.6"), mpf("0.3"), mpf("0.1")], [mpf("0.1"), mpf("0.3"), mpf("0.6")]]
examples = [[0, 0, 1], [0, 2, 0]]
task = [0, 1, 0]
cont = [[2, 2]]


def emis(x, th):
    r = mpf(1)
    for s in x:
        r *= emit[th][s]
    return r


def lik(x, c):
    return sum(intent[c][th] * emis(x, th) for th in range(2))


def amb(x):
    ev = sum(prior[c] * lik(x, c) for c in range(2))
    return 1 - prior[0] * intent[0][0] * emis(x, 0) / ev


joint = []
cq = []
for c in range(2):
    j = prior[c] * lik(task, c)
    for e in examples:
        j *= lik(e, c)
    joint.append(j)
    d = mpf(1)
    for x in cont:
        d *= lik(x, c)
    cq.append(d)
post = [j / sum(joint) for j in joint]
pm = sum(post[c] * cq[c] for c in range(2))
out("kLatentGapLhs", abs(pm - cq[0]))
odds = lambda e: e / (1 - e)
rhs = 2 * odds(amb(task))
for e in examples:
    rhs *= odds(amb(e))
out("kLatentGapRhs", rhs)
out("kLatentTaskAmbiguity", amb(task))

out("kAccuracyHalfBeta", mpf("0.777") * 2 * log(2))
out("kAmbiguityBoundTwoExamples",
    2 * (mpf("0.2") / mpf("0.8")) * (mpf("0.3") / mpf("0.7")) * (mpf("0.25") / mpf("0.75")))
out("kRhoAction9", mpf(10) ** (mpf(9) / 10))

# Contract price over samples {2, 4, 6} with v0 = 5: expected profit of each candidate.
samples = [mpf(2), mpf(4), mpf(6)]
profit = {x: sum((5 - x) for s in samples if s <= x) / len(samples) for x in samples}
out("kContractPriceExample", max(samples, key=lambda x: (profit[x], -x)))

# Proportional and subtractive AoT after 10 cached slots, kappa_0 = 0, delta = 50.
kp, ks = mpf(0), mpf(0)
for _ in range(10):
    kp = (1 - mpf("0.6")) * kp + 50
    ks = max(ks + 50 - 30, 0)
out("kAotProportional10", kp)
out("kAotSubtractive10", ks)
