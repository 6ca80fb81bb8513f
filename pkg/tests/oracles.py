"""Independent reference implementations used to check derived values.

Everything in here is written the slow, obvious way and shares no code
with the package under test. The point is disagreement detection: if a
fast implementation and one of these ever diverge, the test fails and a
human decides who is right.
"""

from __future__ import annotations

import math
from itertools import count

import mpmath


# -- ranking metrics --------------------------------------------------------


def prefix_pr_points(ranked_positives: list[bool]) -> list[tuple[float, float]]:
    """(recall, precision) after each prefix of a ranked relevance list."""
    total_pos = sum(ranked_positives)
    points = []
    tp = 0
    for i, is_pos in enumerate(ranked_positives, start=1):
        if is_pos:
            tp += 1
        points.append((tp / total_pos if total_pos else 0.0, tp / i))
    return points


def envelope_average_precision(points: list[tuple[float, float]]) -> float:
    """Exact area under the precision envelope max{p : r' >= r}.

    Walks the distinct recall levels in order and sums rectangle areas,
    interpolating precision as the best precision at any recall at or
    beyond the level.
    """

    def interp(r: float) -> float:
        best = 0.0
        for rr, pp in points:
            if rr >= r - 1e-12 and pp > best:
                best = pp
        return best

    recalls = sorted({r for r, _ in points})
    area = 0.0
    prev = 0.0
    for r in recalls:
        if r > prev:
            area += (r - prev) * interp(r)
            prev = r
    return area


def average_precision_of_scores(scored: list[tuple[float, bool]]) -> float:
    """AP for (score, truth) pairs ranked by descending score.

    Ties in score keep input order, matching a stable sort.
    """
    ranked = [t for _, t in sorted(scored, key=lambda st: -st[0])]
    return envelope_average_precision(prefix_pr_points(ranked))


def auc_by_pairs(scored: list[tuple[float, bool]]) -> float:
    """ROC AUC as the probability a positive outranks a negative.

    Counts concordant pairs, with ties worth half.
    """
    pos = [s for s, t in scored if t]
    neg = [s for s, t in scored if not t]
    if not pos or not neg:
        raise ValueError("need both classes")
    wins = 0.0
    for p in pos:
        for n in neg:
            if p > n:
                wins += 1.0
            elif p == n:
                wins += 0.5
    return wins / (len(pos) * len(neg))


# -- object detection -------------------------------------------------------


def box_iou(a: tuple[float, float, float, float],
            b: tuple[float, float, float, float]) -> float:
    ax, ay, aw, ah = a
    bx, by, bw, bh = b
    ix = max(0.0, min(ax + aw, bx + bw) - max(ax, bx))
    iy = max(0.0, min(ay + ah, by + bh) - max(ay, by))
    inter = ix * iy
    union = aw * ah + bw * bh - inter
    return inter / union if union > 0 else 0.0


def match_prefix(dets, gts, threshold):
    """Greedy matching of a detection list against ground truth.

    `dets` are (image, cls, confidence, box) already restricted to the
    prefix under evaluation; `gts` are (image, cls, box). Returns the
    per-detection hit flags in confidence order.
    """
    order = sorted(range(len(dets)), key=lambda i: -dets[i][2])
    taken: set[int] = set()
    hits = [False] * len(dets)
    for i in order:
        image, cls, _conf, dbox = dets[i]
        best_j = -1
        best_iou = -1.0
        for j, (gimage, gcls, gbox) in enumerate(gts):
            if j in taken or gimage != image or gcls != cls:
                continue
            iou = box_iou(dbox, gbox)
            if iou >= threshold and iou > best_iou:
                best_iou = iou
                best_j = j
        if best_j >= 0:
            taken.add(best_j)
            hits[i] = True
    return hits


def detection_ap_by_prefix(dets, gts, threshold):
    """AP computed by re-matching every confidence prefix from scratch.

    Slow but assumption-free: it never relies on greedy matching being
    incremental across prefixes.
    """
    if not gts:
        raise ValueError("no ground truth")
    order = sorted(range(len(dets)), key=lambda i: -dets[i][2])
    points = []
    for k in range(1, len(order) + 1):
        prefix = [dets[i] for i in order[:k]]
        hits = match_prefix(prefix, gts, threshold)
        tp = sum(hits)
        points.append((tp / len(gts), tp / k))
    return envelope_average_precision(points)


# -- conservative Bayesian inference ----------------------------------------


def cbi_posterior_exact(atoms, masses, k, n, p) -> float:
    """P(rate <= p | k failures in n) for a discrete prior, in high precision."""
    with mpmath.workdps(60):
        total = mpmath.mpf(0)
        below = mpmath.mpf(0)
        for x, m in zip(atoms, masses):
            xm = mpmath.mpf(x)
            term = mpmath.mpf(m) * xm**k * (1 - xm) ** (n - k)
            total += term
            if x <= p:
                below += term
        return float(below / total)


def cbi_worst_two_atom(theta, g, pl, p, n, grid=200) -> float:
    """Infimum of the posterior over two-atom priors, by brute grid.

    One atom sits in [pl, g] carrying mass theta, the other in (g, 1)
    carrying the rest. Returns the smallest posterior seen.
    """
    worst = 1.0
    for i in range(grid):
        x1 = pl * (g / pl) ** (i / (grid - 1)) if grid > 1 else g
        for j in range(1, grid + 1):
            x2 = g * (1.0 / g) ** (j / (grid + 1))
            if x2 >= 1.0:
                continue
            post = cbi_posterior_exact([x1, x2], [theta, 1 - theta], 0, n, p)
            if post < worst:
                worst = post
    return worst


def cbi_closed_form_k0(theta, g, p, n) -> float:
    """Worst-case posterior for zero failures, from the closed form.

    The infimum puts the in-bound atom at g and the out-of-bound atom
    just above p, giving theta(1-g)^n / (theta(1-g)^n + (1-theta)(1-p)^n).
    """
    a = theta * (1 - g) ** n
    b = (1 - theta) * (1 - p) ** n
    return a / (a + b)


def required_n_closed_form(theta, g, p, conf) -> int:
    """Smallest n with the k=0 closed form meeting conf, by linear scan."""
    for n in count(0):
        if cbi_closed_form_k0(theta, g, p, n) >= conf:
            return n
        if n > 10**7:
            raise RuntimeError("scan blew past any plausible answer")
    raise AssertionError


# -- conformal prediction ---------------------------------------------------


def nn_distance(others: list[float], z: float) -> float:
    best = math.inf
    for o in others:
        d = abs(o - z)
        if d < best:
            best = d
    return best


def conformal_p_value(training: list[float], candidate: float) -> float:
    """Plain nearest-neighbour conformal p-value for 1-D points.

    Each training score is its distance to the nearest other training
    point; the candidate's score is its distance to the nearest
    training point.
    """
    scores = []
    for i, z in enumerate(training):
        others = training[:i] + training[i + 1:]
        scores.append(nn_distance(others, z))
    cand = nn_distance(training, candidate)
    below = sum(1 for s in scores if s <= cand)
    return (1 + below) / (len(training) + 1)


def label_ratio_score(same: list[float], other: list[float], z: float) -> float:
    """Same-label to other-label nearest distance ratio for 1-D points."""
    d_same = nn_distance(same, z)
    if d_same == 0.0:
        return 0.0
    if not other:
        return 0.0
    d_other = nn_distance(other, z)
    if d_other == 0.0:
        return math.inf
    return d_same / d_other


def conformal_label_p_value(points: list[tuple[float, str]], candidate: float,
                            label: str) -> float:
    """Ratio-measure conformal p-value for assigning `label` to `candidate`.

    Training points are scored against the training set minus
    themselves; the candidate is scored against the full training set
    under the hypothesised label.
    """
    train_scores = []
    for i, (z, lab) in enumerate(points):
        rest = points[:i] + points[i + 1:]
        same = [x for x, l in rest if l == lab]
        other = [x for x, l in rest if l != lab]
        train_scores.append(label_ratio_score(same, other, z))
    cand_score = label_ratio_score(
        [x for x, l in points if l == label],
        [x for x, l in points if l != label],
        candidate,
    )
    below = sum(1 for s in train_scores if s <= cand_score)
    return (1 + below) / (len(points) + 1)


# -- small helpers ----------------------------------------------------------


def binomial_majority(votes: int, p: float) -> float:
    """Probability that more than half of `votes` independent channels
    are correct."""
    total = 0.0
    for i in range(votes // 2 + 1, votes + 1):
        total += math.comb(votes, i) * p**i * (1 - p) ** (votes - i)
    return total
