"""The ten acceptance criteria, each at its stated tolerance.

Every test records one PASS/FAIL line; the lines are repeated in the pytest
terminal summary under "acceptance criteria".
"""

import itertools
import random
import time

import pytest

from scottkit import dinfty, domain as dm, dyadics as D, ideals as I, opsem, pcf, scott
from scottkit.domain import MonoMap
from scottkit.wtree import PCF_TYPE_SIGNATURE, decide_equal, validate_tree

from .acceptance_log import record
from .helpers import (
    CORPUS,
    SAMPLE_SIGNATURE,
    all_natural_posets,
    copy_tree,
    count_monotone,
    least_fixed_point_oracle,
    mutate,
    random_dag_poset,
    random_term,
    random_type,
    random_wtree,
    structural_eq,
)

TIME_LIMIT = 60.0


def finish(number, title, failures, detail, started):
    elapsed = time.perf_counter() - started
    ok = not failures and elapsed < TIME_LIMIT
    extra = f"; first failure: {failures[0]}" if failures else ""
    record(number, title, ok, f"{detail}, {elapsed:.1f}s{extra}")
    assert not failures, failures[:5]
    assert elapsed < TIME_LIMIT


@pytest.fixture(scope="module")
def tower3():
    return dinfty.build_tower(3)


def test_c01_poset_laws_and_way_below_collapse():
    t0 = time.perf_counter()
    rng = random.Random(2024)
    posets = [random_dag_poset(rng, 6) for _ in range(500)]
    posets += [dm.chain(n) for n in range(1, 7)] + [dm.diamond(), dm.lift_flat(1), dm.lift_flat(2),
                                                    dm.lift_flat(3)]
    failures = []
    pairs = 0
    for p in posets:
        if dm.validate(p):
            failures.append(("validate", p.names))
        for x in p:
            if not dm.is_compact(p, x):
                failures.append(("compact", p.names, x))
            for y in p:
                pairs += 1
                if dm.way_below(p, x, y) != p.leq(x, y):
                    failures.append(("way-below", p.names, x, y))
    finish(1, "poset laws and way-below collapse", failures,
           f"{len(posets)} posets, {pairs} pairs", t0)


def test_c02_tower_cardinalities_and_laws(tower3):
    t0 = time.perf_counter()
    failures = []
    sizes = [len(p) for p in tower3.levels]
    expected = [2, 3, 10, 120549]
    if sizes != expected:
        failures.append(("sizes", sizes))
    for n in range(3):
        p = tower3[n]
        counted = count_monotone(list(p), p.leq, list(p), p.leq)
        if counted != sizes[n + 1]:
            failures.append(("independent count", n + 1, counted))
    for r in range(3):
        rep = dinfty.verify_laws(dinfty.build_tower(r), sample=None)
        failures += [("rank", r, str(v)) for v in rep.violations]
    rep3 = dinfty.verify_laws(tower3, sample=1000, seed=7)
    failures += [("rank 3", str(v)) for v in rep3.violations]
    finish(2, "tower cardinalities and ep-pair laws", failures,
           f"sizes {sizes}, ranks 0-2 exhaustive, rank 3 on 1000 samples", t0)


def test_c03_least_fixed_points(tower3):
    t0 = time.perf_counter()
    failures = []
    d1, d2 = tower3[1], tower3[2]
    candidates = list(itertools.product(range(len(d1)), repeat=len(d1)))
    monotone = [t for t in candidates
                if all(d1.leq(t[x], t[y]) for x in d1 for y in d1 if d1.leq(x, y))]
    sampled = random.Random(11).sample(tower3[3].maps, 1000)
    cases = [(d1, t) for t in monotone] + [(d2, t) for t in sampled]
    for p, table in cases:
        if not all(p.leq(table[x], table[y]) for x in p for y in p if p.leq(x, y)):
            failures.append(("sample not monotone", table))
            continue
        r = dm.lfp(MonoMap(p, p, table))
        if table[r.element] != r.element:
            failures.append(("not fixed", table))
        if r.element != least_fixed_point_oracle(list(p), p.leq, table):
            failures.append(("not least", table))
        if r.iterations > len(p):
            failures.append(("too many iterations", table, r.iterations))
    finish(3, "least fixed points", failures,
           f"{len(monotone)} of {len(candidates)} D_1 tables monotone, {len(sampled)} D_2 endomaps", t0)


def test_c04_adequacy_corpus():
    t0 = time.perf_counter()
    failures = []
    divergent = 0
    for name, term, expected in CORPUS:
        rep = scott.check_adequacy(term, fuel=200, steps=10_000)
        op = rep.operational
        op_value = op.value if isinstance(op, opsem.Defined) else None
        if not rep.agree or op_value != expected or rep.denotational_value != expected:
            failures.append((name, rep.lines()))
        if isinstance(op, opsem.Stuck):
            failures.append((name, "stuck"))
        divergent += expected is None
    finish(4, "adequacy corpus", failures,
           f"{len(CORPUS)} programs ({divergent} divergent), 10^4 steps, fuel <= 200", t0)


def test_c05_lifting_monad_laws():
    t0 = time.perf_counter()
    rng = random.Random(5)
    fuels = range(0, 101)
    failures = []

    def random_pn():
        if rng.random() < 0.2:
            return scott.bottom_pn()
        start, v = rng.randrange(0, 120), rng.randrange(0, 40)
        return scott.PartialNat(lambda k: v if k >= start else None)

    def random_fn():
        a, b, shift = rng.randrange(4), rng.randrange(6), rng.randrange(80)
        if rng.random() < 0.1:
            return lambda n: scott.bottom_pn()
        return lambda n: scott.PartialNat(lambda k: a * n + b if k >= shift + n % 5 else None)

    samples = 250
    for _ in range(samples):
        x, f, g, n = random_pn(), random_fn(), random_fn(), rng.randrange(40)
        if not scott.kleisli(scott.eta, x).agrees_with(x, fuels):
            failures.append("right unit")
        if not scott.kleisli(f, scott.eta(n)).agrees_with(f(n), fuels):
            failures.append("left unit")
        lhs = scott.kleisli(g, scott.kleisli(f, x))
        rhs = scott.kleisli(lambda m: scott.kleisli(g, f(m)), x)
        if not lhs.agrees_with(rhs, fuels):
            failures.append("associativity")
    finish(5, "lifting monad laws", failures, f"{samples} samples at fuels 0..100", t0)


def test_c06_dyadics():
    t0 = time.perf_counter()
    xs = D.enumerate_depth(4)
    prec = D.prec
    failures = []
    if len(xs) != 31:
        failures.append(("size", len(xs)))
    failures += [("irreflexive", str(x)) for x in xs if prec(x, x)]
    for x, y, z in itertools.product(xs, repeat=3):
        if prec(x, y) and prec(y, z) and not prec(x, z):
            failures.append(("transitive", str(x), str(y), str(z)))
    basis = D.dyadic_basis(sample_depth=4)
    for x, y in itertools.product(xs, repeat=2):
        if prec(x, y) + (x == y) + prec(y, x) != 1:
            failures.append(("trichotomy", str(x), str(y)))
        if prec(x, y):
            z = D.interpolant(x, y)
            if not (prec(x, z) and prec(z, y)):
                failures.append(("interpolant", str(x), str(y)))
        wb = I.idl_way_below(basis, I.PrincipalIdeal(basis, x), I.PrincipalIdeal(basis, y))
        if wb != prec(x, y):
            failures.append(("principal way-below", str(x), str(y)))
    for x in xs:
        lo, hi = D.endpoints(x)
        if not (prec(lo, x) and prec(x, hi)) or (lo, hi) != (D.left(x), D.right(x)):
            failures.append(("endpoints", str(x)))
        if I.idl_way_below(basis, I.PrincipalIdeal(basis, x), I.PrincipalIdeal(basis, x)):
            failures.append(("compact principal ideal", str(x)))
    rep = I.check_abstract_basis(basis)
    failures += [("basis", str(v)) for v in rep.violations]
    finish(6, "dyadics", failures, "31 elements, 961 pairs, 29791 triples", t0)


def test_c07_ideal_completion():
    t0 = time.perf_counter()
    failures = []
    count = 0
    for n in range(1, 6):
        for p in all_natural_posets(n):
            count += 1
            b = I.basis_of_poset(p)
            c = I.idl_finite(b)
            if not I.is_order_isomorphism(c.principal_map(p)):
                failures.append(("isomorphism", n, p.matrix()))
            for ideal in c.ideals:
                union = frozenset().union(*(I.principal_set(b, x) for x in ideal))
                if union != ideal:
                    failures.append(("union", n, sorted(ideal)))
                if not I.is_rounded(b, ideal):
                    failures.append(("rounded", n, sorted(ideal)))
            for x in p:
                k = c.principal_ideal(x)
                if k is None or not dm.is_compact(c.poset, k):
                    failures.append(("principal compact", n, x))
    finish(7, "ideal completion", failures, f"{count} posets of 1-5 elements", t0)


def test_c08_step_function_basis():
    t0 = time.perf_counter()
    failures = []
    sizes = []
    for n in (3, 2):
        p = dm.chain(n)
        e = dm.exponential(p, p)
        sizes.append(len(e))
        step_elems = {}
        for d in p:
            for v in p:
                step_elems[(d, v)] = e.element(I.step_function(p, p, d, v))
        for f in e:
            fmap = e.as_map(f)
            parts = I.decompose_into_step_functions(fmap)
            rebuilt = I.join_maps(p, p, [I.step_function(p, p, d, v) for d, v in parts])
            if rebuilt != fmap:
                failures.append(("reconstruct", n, e.name(f)))
            for (d, v), s in step_elems.items():
                if e.leq(s, f) != p.leq(v, fmap(d)):
                    failures.append(("step law", n, d, v, e.name(f)))
        for (d, v), s in step_elems.items():
            if not dm.is_compact(e, s):
                failures.append(("compact", n, d, v))
    if sizes != [10, 3]:
        failures.append(("sizes", sizes))
    finish(8, "step-function basis", failures, f"exponentials of sizes {sizes}", t0)


def test_c09_operational_decision_procedures():
    t0 = time.perf_counter()
    failures = []
    window = 40
    checked = 0
    for name, term, _ in CORPUS:
        result = opsem.run(term, 10_000)
        if isinstance(result, opsem.Stuck):
            failures.append((name, "stuck"))
        trace = result.trace
        for t in trace[:-1]:
            reducts = opsem.all_reducts(t)
            if len(reducts) != 1 or not pcf.term_eq(reducts[0].result, opsem.step(t)):
                failures.append((name, "single-valuedness", [r.rule for r in reducts]))
        if isinstance(result, opsem.Defined) and opsem.all_reducts(trace[-1]):
            failures.append((name, "numeral reduces"))
        prefix = trace[:window]
        for i, j in itertools.combinations_with_replacement(range(len(prefix)), 2):
            gap = j - i
            for k in {gap - 1, gap, gap + 1} - {-1}:
                exact = i + k < len(trace) and pcf.term_eq(trace[i + k], prefix[j])
                reach = any(pcf.term_eq(trace[i + m], prefix[j]) for m in range(min(k, len(trace) - 1 - i) + 1))
                checked += 1
                if opsem.k_step_exact(prefix[i], prefix[j], k) != exact:
                    failures.append((name, "exact", i, j, k))
                if bool(opsem.k_step_at_most(prefix[i], prefix[j], k)) != reach:
                    failures.append((name, "at most", i, j, k))
    finish(9, "operational decision procedures", failures,
           f"{len(CORPUS)} traces, {checked} closure queries", t0)


def test_c10_wtree_equality():
    t0 = time.perf_counter()
    rng = random.Random(10)
    failures = []
    pairs = 10_000
    equal = 0
    for _ in range(pairs):
        sort = rng.choice(["a", "b"])
        depth = rng.randint(1, 6)
        a = random_wtree(rng, SAMPLE_SIGNATURE, sort, depth)
        b = copy_tree(a) if rng.random() < 0.4 else mutate(rng, SAMPLE_SIGNATURE, a, depth)
        if not (validate_tree(SAMPLE_SIGNATURE, sort, a) and validate_tree(SAMPLE_SIGNATURE, sort, b)):
            failures.append(("ill-sorted sample", str(a), str(b)))
            continue
        truth = structural_eq(a, b)
        equal += truth
        if decide_equal(SAMPLE_SIGNATURE, a, b).equal != truth:
            failures.append(("tree", str(a), str(b)))
    for _ in range(1000):
        s, t = random_type(rng, 4), random_type(rng, 4)
        if decide_equal(PCF_TYPE_SIGNATURE, pcf.type_to_wtree(s), pcf.type_to_wtree(t)).equal != pcf.type_eq(s, t):
            failures.append(("type", str(s), str(t)))
        x = random_term(rng, pcf.NAT, 3)
        y = x if rng.random() < 0.3 else random_term(rng, pcf.NAT, 3)
        sig = pcf.term_signature(x, y)
        if decide_equal(sig, pcf.term_to_wtree(x), pcf.term_to_wtree(y)).equal != pcf.term_eq(x, y):
            failures.append(("term", pcf.render(x), pcf.render(y)))
    finish(10, "W-tree equality", failures,
           f"{pairs} tree pairs ({equal} equal), 1000 type pairs, 1000 term pairs", t0)
