import random

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from regexlen.alphabet import Alphabet
from regexlen.harness.generate import random_regex
from regexlen.reference import matches, words_upto
from regexlen.regex import Comp, Concat, Lit, Star, Union

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

AB = Alphabet("ab")
ABC = Alphabet("abc")


def regexes(chars="ab", max_leaves=4, complement=True):
    """Hypothesis strategy for small regex ASTs."""
    leaf = st.text(alphabet=chars, max_size=2).map(Lit)

    def extend(children):
        ops = [
            st.builds(Concat, children, children),
            st.builds(Union, children, children),
            st.builds(Star, children),
        ]
        if complement:
            ops.append(st.builds(Comp, children))
        return st.one_of(*ops)

    return st.recursive(leaf, extend, max_leaves=max_leaves)


def seeded_regexes(seed, count, chars="abc", size=8, complement_prob=0.0):
    rng = random.Random(seed)
    return [random_regex(rng, chars, rng.randint(1, size), complement_prob) for _ in range(count)]


def language(re, chars, max_len):
    """Brute-force language slice, via the reference evaluator."""
    return {w for w in words_upto(chars, max_len) if matches(w, re)}


def random_lia_system(rng, max_vars=4, coef=5, box=50, max_points=12_000):
    """A random conjunction whose variables are all boxed inside [-box, box].

    Returns (constraints, blocks, variables, ranges); the brute force only has
    to scan the product of ``ranges``.
    """
    from regexlen.lia import LinearConstraint as LC

    nv = rng.randint(1, max_vars)
    vs = ["x", "y", "z", "w"][:nv]
    width = max(1, int(max_points ** (1 / nv)) - 1)
    ranges = {}
    for v in vs:
        lo = rng.randint(-box, box - min(width, 2 * box))
        ranges[v] = (lo, min(box, lo + rng.randint(0, width)))
    cons = []
    for v, (lo, hi) in ranges.items():
        cons += [LC.ge({v: 1}, lo), LC.le({v: 1}, hi)]
    for _ in range(rng.randint(1, 4)):
        co = {v: rng.randint(-coef, coef) for v in rng.sample(vs, rng.randint(1, nv))}
        mid = sum(c * (ranges[v][0] + ranges[v][1]) // 2 for v, c in co.items())
        k = mid + rng.randint(-6, 6)
        cons.append(rng.choice((LC.le, LC.ge, LC.eq, LC.eq))(co, k))
    blocks = []
    for _ in range(rng.randint(0, 2)):
        blocks.append({v: rng.randint(*ranges[v]) for v in rng.sample(vs, rng.randint(1, nv))})
    return cons, blocks, vs, ranges


def lia_brute_force(cons, blocks, vs, ranges):
    import itertools

    from regexlen.lia import block_violated

    out = []
    for p in itertools.product(*(range(ranges[v][0], ranges[v][1] + 1) for v in vs)):
        m = dict(zip(vs, p))
        if all(c.holds(m) for c in cons) and not any(block_violated(b, m) for b in blocks):
            out.append(m)
    return out


# one pass/fail line per acceptance criterion, collected by tests/test_acceptance.py
ACCEPTANCE_LINES: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])
