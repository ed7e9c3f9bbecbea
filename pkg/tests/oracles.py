"""Reference computations written independently of the package."""

import itertools
import math

# exact SI values; hbar-based constants agree to ~1e-9 relative
PLANCK = 6.62607015e-34
BOLTZMANN = 1.380649e-23


def bose_einstein(f, t):
    return 1.0 / (math.exp(PLANCK * f / (BOLTZMANN * t)) - 1.0)


def _bern(p):
    return [(1, p), (0, 1.0 - p)]


def _survival(n, eta):
    """All survival patterns of n photons with their probabilities."""
    for pattern in itertools.product((0, 1), repeat=n):
        pr = 1.0
        for s in pattern:
            pr *= eta if s else 1.0 - eta
        yield pattern, pr


def type1_exact(p1, pth, eta):
    """(fidelity, herald probability) of the single-click event model."""
    tp = fp = 0.0
    for (sa, psa), (sb, psb), (ta, pta), (tb, ptb) in itertools.product(
            _bern(p1), _bern(p1), _bern(pth), _bern(pth)):
        photons = ["s"] * (sa + sb) + ["t"] * (ta + tb)
        base = psa * psb * pta * ptb
        for pattern, pr in _survival(len(photons), eta):
            clicks = [ph for ph, s in zip(photons, pattern) if s]
            if len(clicks) == 1:
                if clicks[0] == "s" and sa + sb == 1:
                    tp += base * pr
                else:
                    fp += base * pr
    return tp / (tp + fp), tp + fp


def type2_exact(p1, pth, eta):
    """(fidelity, herald probability) of the early/late time-bin model."""
    tp = fp = 0.0
    sig = [("E", p1 / 2), ("L", p1 / 2), (None, 1.0 - p1)]
    for (sa, psa), (sb, psb) in itertools.product(sig, sig):
        for th in itertools.product((0, 1), repeat=4):
            pt = 1.0
            for t in th:
                pt *= pth if t else 1.0 - pth
            photons = []
            if sa:
                photons.append(("s", "A", sa))
            if sb:
                photons.append(("s", "B", sb))
            for t, node, b in zip(th, "AABB", "ELEL"):
                if t:
                    photons.append(("t", node, b))
            for pattern, pr in _survival(len(photons), eta):
                clicks = [ph for ph, s in zip(photons, pattern) if s]
                early = [c for c in clicks if c[2] == "E"]
                late = [c for c in clicks if c[2] == "L"]
                if len(early) == 1 and len(late) == 1:
                    w = psa * psb * pt * pr
                    if early[0][0] == "s" and late[0][0] == "s" and early[0][1] != late[0][1]:
                        tp += w
                    else:
                        fp += w
    return tp / (tp + fp), tp + fp


def blue_exact(p0, p1, eta):
    """(false-herald probability per attempt, herald probability); multi = 2 packets."""
    pm = 1.0 - p0 - p1
    dist = [(0, p0), (1, p1), (2, pm)]
    fp = herald = 0.0
    for (na, pa), (nb, pb) in itertools.product(dist, dist):
        for pattern, pr in _survival(na + nb, eta):
            if sum(pattern) == 1:
                herald += pa * pb * pr
                if na + nb != 1:
                    fp += pa * pb * pr
    return fp, herald
