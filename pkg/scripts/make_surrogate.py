"""Build the synthetic stand-in for the survey degree extract.

The survey extract is not redistributed with this package, so the bundled
sequences are synthetic histograms constructed to reproduce the published
summaries of the diary and job-contact data:

diary (n=2029): sum 19722 (mean 9.72), median 8, population sd 6.56,
    175 respondents at >= 20 contacts, 36 at >= 30, maximum 40.
job extras (n=257): sum 14971 (mean ~58), median 29 (published: 30),
    190 respondents at >= 17, two reports of 500 and three of 999; combined
    with the diary and capped at 134 the sequence has mean 14.89, median 9 and
    sd 19.12 (published realized values: 14.87, 9, 19.58).

Run from the repository root:  python scripts/make_surrogate.py
"""

from pathlib import Path

import numpy as np
from scipy import stats

OUT = Path(__file__).resolve().parents[1] / "src" / "hubsim" / "data"

N = 2029
TOTAL = 19722
NB_SHAPE, NB_P = 2.6, 0.24
JOB_ALPHA, JOB_TOP = 2.0, 330
SUMSQ = round(N * (6.56**2 + (TOTAL / N) ** 2))


def diary_histogram():
    tail_x = np.arange(20, 41)
    w = tail_x**-4.0
    tail = np.round(175 * w / w.sum()).astype(int)
    tail[tail_x == 29] -= 1
    tail[tail_x == 30] += 1
    assert tail.sum() == 175 and tail[tail_x >= 30].sum() == 36

    body_x = np.arange(1, 20)
    pmf = stats.nbinom.pmf(body_x - 1, NB_SHAPE, NB_P)
    body = np.floor((N - 175) * pmf / pmf.sum()).astype(int)
    body[np.argmax(body)] += (N - 175) - body.sum()

    x = [int(v) for v in np.concatenate([body_x, tail_x])]
    c = [int(v) for v in np.concatenate([body, tail])]

    # Shift single respondents between body values until sum and sum of squares hit
    # their targets; the tail is left alone.
    def err(c):
        s1 = sum(ci * xi for ci, xi in zip(c, x))
        s2 = sum(ci * xi * xi for ci, xi in zip(c, x))
        return abs(s1 - TOTAL) * 40 + abs(s2 - SUMSQ)

    for _ in range(20000):
        best = None
        e0 = err(c)
        for i in range(19):
            if c[i] == 0:
                continue
            for j in range(19):
                if i == j:
                    continue
                c[i] -= 1
                c[j] += 1
                e = err(c)
                if e < e0 and (best is None or e < best[0]):
                    best = (e, i, j)
                c[i] += 1
                c[j] -= 1
        if best is None:
            break
        c[best[1]] -= 1
        c[best[2]] += 1

    # Sum-preserving pair moves (one respondent up a step, another down a step) to
    # trim the remaining sum-of-squares gap.
    for _ in range(20000):
        gap = SUMSQ - sum(ci * xi * xi for ci, xi in zip(c, x))
        if gap == 0:
            break
        moved = False
        for i in range(1, 18):
            for j in range(1, 18):
                if i == j or c[i] == 0 or c[j] == 0:
                    continue
                delta = 2 * (x[i] - x[j]) + 2
                if 0 < delta <= gap or gap <= delta < 0:
                    c[i] -= 1
                    c[i + 1] += 1
                    c[j] -= 1
                    c[j - 1] += 1
                    moved = True
                    break
            if moved:
                break
        if not moved:
            break
    return np.array(x), np.array(c)


def expand(x, c, rng):
    seq = np.repeat(x, c)
    rng.shuffle(seq)
    return seq


def job_extras(diary, rng):
    big = [999, 999, 999, 500, 500]
    tail_x = np.arange(17, JOB_TOP)
    w = tail_x**-JOB_ALPHA
    cdf = np.cumsum(w) / w.sum()
    # Deterministic quantiles of a discrete power law for the 185 non-extreme tail
    # reports, plus 67 reports below 17.
    q = (np.arange(185) + 0.5) / 185
    tail = tail_x[np.searchsorted(cdf, q)]
    low = np.repeat(np.arange(5, 17), [5, 5, 5, 6, 6, 6, 6, 6, 5, 6, 5, 6])
    extras = np.concatenate([low, tail, big]).astype(int)
    # scale the mid-range so that the grand total matches 14971
    gap = 14971 - extras.sum()
    order = np.argsort(extras, kind="stable")
    k = 0
    while gap != 0:
        idx = order[67 + (k % 120)]
        step = 1 if gap > 0 else -1
        if 17 <= extras[idx] + step <= 400:
            extras[idx] += step
            gap -= step
        k += 1
    employed = np.flatnonzero(diary <= 30)
    who = np.sort(rng.choice(employed, size=len(extras), replace=False))
    rng.shuffle(extras)
    return who, extras


def main():
    rng = np.random.default_rng(20120101)
    x, c = diary_histogram()
    diary = expand(x, c, rng)
    who, extras = job_extras(diary, rng)

    OUT.mkdir(parents=True, exist_ok=True)
    with open(OUT / "diary_surrogate.txt", "w") as fh:
        fh.write("# synthetic diary degree sequence (see scripts/make_surrogate.py)\n")
        fh.writelines(f"{d}\n" for d in diary)
    with open(OUT / "job_surrogate.txt", "w") as fh:
        fh.write("# synthetic job-related extra contacts: <index> <extra>\n")
        fh.writelines(f"{i} {e}\n" for i, e in zip(who, extras))

    combined = diary.copy()
    combined[who] = np.minimum(diary[who] + extras, 134)
    print("diary: n=%d mean=%.4f median=%g sd=%.4f >=20:%d >=30:%d max=%d" % (
        len(diary), diary.mean(), np.median(diary), diary.std(),
        (diary >= 20).sum(), (diary >= 30).sum(), diary.max()))
    print("extras: n=%d sum=%d median=%g >=17:%d" % (
        len(extras), extras.sum(), np.median(extras), (extras >= 17).sum()))
    print("combined: mean=%.4f median=%g sd=%.4f sum=%d" % (
        combined.mean(), np.median(combined), combined.std(), combined.sum()))


if __name__ == "__main__":
    main()
