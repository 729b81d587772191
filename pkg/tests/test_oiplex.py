from __future__ import annotations

import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import APPENDIX
from pareto_par.model import nondominated_filter
from pareto_par.oiplex import (OipSpec, all_permutations, check_drop_k, check_permutation,
                               identity, lex_key, oip_filter, suffix_agreement)

INF = math.inf


def test_filter_two_free_bound_on_third():
    spec = OipSpec((1, 2, 3), 2, (52,))
    assert oip_filter(APPENDIX, spec) == {(50, 24, 44), (46, 41, 41), (37, 44, 42)}


def test_filter_one_free_two_bounds():
    spec = OipSpec((1, 2, 3), 1, (48, 43))
    assert oip_filter(APPENDIX, spec) == {(37, 44, 42)}


def test_filter_second_objective_first():
    # bounds follow positions 2..3 of (2,1,3): f_1 <= 48, f_3 <= 52
    spec = OipSpec((2, 1, 3), 1, (48, 52))
    assert oip_filter(APPENDIX, spec) == {(46, 41, 41)}
    # the alternative reading (48, 43) selects the same vector
    assert oip_filter(APPENDIX, OipSpec((2, 1, 3), 1, (48, 43))) == {(46, 41, 41)}


def test_filter_third_objective_breaks_tie():
    spec = OipSpec((1, 3, 2), 1, (51, 50))
    assert oip_filter(APPENDIX, spec) == {(37, 46, 37)}


def test_spec_validation():
    with pytest.raises(ValueError):
        OipSpec((1, 1, 2), 1, (0, 0))
    with pytest.raises(ValueError):
        OipSpec((1, 2, 3), 1, (0,))
    with pytest.raises(ValueError):
        OipSpec((1, 2, 3), 4, ())
    spec = OipSpec((3, 1, 2), 1, (7, INF))
    assert spec.bound_at(2) == 7 and spec.bound_at(3) == INF
    assert spec.objective_bounds() == (7, INF, INF)
    with pytest.raises(KeyError):
        spec.bound_at(1)


def test_filter_dimension_mismatch():
    with pytest.raises(ValueError):
        oip_filter([(1, 2)], OipSpec((1, 2, 3), 3, ()))


def test_k_zero_is_lexicographic_selection():
    spec = OipSpec((2, 1, 3), 0, (INF, INF, INF))
    assert oip_filter(APPENDIX, spec) == {(50, 24, 44)}
    spec = OipSpec((2, 1, 3), 0, (INF, 40, INF))
    assert oip_filter(APPENDIX, spec) == {(32, 39, 54)}


def test_suffix_agreement_examples():
    assert suffix_agreement((4, 1, 2, 3), (1, 4, 2, 3)) == 2
    assert suffix_agreement((1, 2, 3), (1, 2, 3)) == 3
    assert suffix_agreement((1, 2), (2, 1)) == 0
    with pytest.raises(ValueError):
        suffix_agreement((1, 2), (1, 2, 3))


def test_check_drop_k_examples():
    a = OipSpec((1, 2, 3), 1, (48, 43))
    b = OipSpec((1, 2, 3), 2, (43,))
    assert oip_filter(APPENDIX, a) == {(37, 44, 42)}
    assert check_drop_k(APPENDIX, a, b)
    loose = OipSpec((1, 2, 3), 1, (INF, INF))
    assert check_drop_k(APPENDIX, loose, OipSpec((1, 2, 3), 2, (INF,)))


def test_check_drop_k_rejects_mismatched_specs():
    with pytest.raises(ValueError):
        check_drop_k(APPENDIX, OipSpec((1, 2, 3), 1, (4, 5)), OipSpec((2, 1, 3), 2, (5,)))
    with pytest.raises(ValueError):
        check_drop_k(APPENDIX, OipSpec((1, 2, 3), 1, (4, 5)), OipSpec((1, 2, 3), 2, (6,)))
    with pytest.raises(ValueError):
        check_drop_k(APPENDIX, OipSpec((1, 2, 3), 0, (4, 5, 6)), OipSpec((1, 2, 3), 2, (6,)))


def test_permutation_helpers():
    assert check_permutation([2, 1]) == (2, 1)
    with pytest.raises(ValueError):
        check_permutation((0, 1))
    assert identity(3) == (1, 2, 3)
    assert len(all_permutations(4)) == 24
    assert lex_key((5, 6, 7), (3, 1, 2)) == (7, 5, 6)
    assert lex_key((5, 6, 7), (3, 1, 2), 1) == (5, 6)


perm3 = st.permutations([1, 2, 3]).map(tuple)
vecs = st.lists(st.tuples(*[st.integers(0, 9)] * 3), max_size=10)
bound = st.one_of(st.just(INF), st.integers(0, 9))


@given(vecs)
def test_all_free_equals_nondominated(vs):
    for p in all_permutations(3):
        assert oip_filter(vs, OipSpec(p, 3, ())) == nondominated_filter(vs)


@given(vecs, perm3, st.integers(0, 3), st.lists(bound, min_size=3, max_size=3))
def test_filter_is_subset_of_front_of_survivors(vs, p, k, bs):
    spec = OipSpec(p, k, tuple(bs[:3 - k]))
    ub = spec.objective_bounds()
    survivors = [v for v in vs if all(x <= b for x, b in zip(v, ub))]
    assert oip_filter(vs, spec) <= nondominated_filter(survivors)


@given(perm3, perm3)
def test_suffix_agreement_symmetric(s, t):
    a = suffix_agreement(s, t)
    assert a == suffix_agreement(t, s)
    assert (a == 3) == (s == t)
