import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from scottkit import opsem, pcf, scott
from scottkit.pcf import NAT
from scottkit.scott import PartialNat

from .helpers import CORPUS, random_term


def src(s):
    return pcf.compile_source(s)


@pytest.mark.parametrize("name,term,expected", CORPUS, ids=[c[0] for c in CORPUS])
def test_adequacy_corpus(name, term, expected):
    rep = scott.check_adequacy(term)
    assert rep.agree, rep.lines()
    assert rep.denotational_value == expected


def test_fix_needs_one_unrolling():
    d = scott.denote(src("fix (k zero)"))
    assert d(0) is None and d(1) == 0
    assert d.first_defined(10) == (1, 0)


def test_approximants_are_monotone():
    for _, t, _ in CORPUS:
        assert scott.denote(t).is_stable(range(0, 40))


def test_soundness_along_traces():
    for _, t, expected in CORPUS:
        if expected is None:
            continue
        r = opsem.run(t, 10_000)
        for mid in r.trace[:: max(1, len(r.trace) // 5)]:
            assert scott.check_soundness(t, mid).agree


def test_soundness_precondition():
    with pytest.raises(scott.PreconditionError):
        scott.check_soundness(src("#1"), src("#2"))


def test_function_denotations_are_observed_by_application():
    f = scott.denote_at(src("s k k"), 0)
    assert isinstance(f, scott.FuncVal)
    assert f(scott.BaseVal(4)).value == 4
    assert scott.bottom_at(f.type)(scott.BaseVal(1)).value is None


def test_pred_of_zero_is_zero():
    assert scott.denote(src("pred zero"))(0) == 0


@given(st.integers(0, 2**32 - 1), st.integers(1, 4))
@settings(max_examples=150, deadline=None)
def test_adequacy_on_random_terms(seed, depth):
    t = random_term(random.Random(seed), NAT, depth)
    rep = scott.check_adequacy(t, fuel=5, steps=2_000)
    assert rep.agree


def partial_nats():
    # defined from some fuel on, or never
    return st.one_of(
        st.builds(lambda start, v: PartialNat(lambda k: v if k >= start else None),
                  st.integers(0, 120), st.integers(0, 50)),
        st.just(scott.bottom_pn()),
    )


def kleisli_functions():
    return st.builds(
        lambda a, b, start: (lambda n: PartialNat(lambda k: (a * n + b) if k >= start + n % 3 else None)),
        st.integers(0, 3), st.integers(0, 5), st.integers(0, 60))


@given(partial_nats(), kleisli_functions(), kleisli_functions(), st.integers(0, 50))
@settings(max_examples=100, deadline=None)
def test_monad_laws(x, f, g, n):
    fuels = range(0, 101)
    assert scott.kleisli(scott.eta, x).agrees_with(x, fuels)
    assert scott.kleisli(f, scott.eta(n)).agrees_with(f(n), fuels)
    lhs = scott.kleisli(g, scott.kleisli(f, x))
    rhs = scott.kleisli(lambda m: scott.kleisli(g, f(m)), x)
    assert lhs.agrees_with(rhs, fuels)


def test_information_order():
    x = PartialNat(lambda k: 3 if k >= 5 else None)
    assert scott.information_leq(scott.bottom_pn(), x, range(20))
    assert scott.information_leq(x, scott.eta(3), range(20))
    assert not scott.information_leq(scott.eta(3), x, range(20))
