from __future__ import annotations

import math
import random
import time

import pytest

from conftest import APPENDIX, infeasible_instance, single_point_instance
from pareto_par.instgen import GenSpec, generate
from pareto_par.ipsolve import IpCounter
from pareto_par.model import nondominated_filter
from pareto_par.oiplex import OipSpec, all_permutations, oip_filter
from pareto_par.oracle import enumerate_vectors, oracle_front
from pareto_par.recursion import (RecursionContext, RelaxationCache, TimeLimitExceeded,
                                  relaxation_lookup, run_aira)

INF = math.inf


def test_infeasible_gives_empty_front():
    a = run_aira(infeasible_instance())
    assert len(a) == 0 and a.stats.ips_solved >= 1


def test_single_point():
    assert run_aira(single_point_instance()).vectors() == {(4, 5, 5)}


def test_appendix_selection(appendix_instance):
    a = run_aira(appendix_instance)
    assert a.vectors() == set(APPENDIX)
    assert a.stats.ips_solved >= len(APPENDIX)


def test_witnesses_are_feasible(knapsack_fixture):
    from pareto_par.model import evaluate_objectives, verify_witness
    for v, w in run_aira(knapsack_fixture).entries:
        assert verify_witness(knapsack_fixture, w)
        assert evaluate_objectives(knapsack_fixture, w) == v


def test_knapsack_fixture_matches_oracle(knapsack_fixture):
    a = run_aira(knapsack_fixture)
    assert a.vectors() == oracle_front(knapsack_fixture)
    assert a.stats.ips_solved >= len(a)


@pytest.mark.parametrize("family,size,n,seed", [
    ("knapsack", 9, 4, 3), ("assignment", 4, 3, 8), ("tsp", 5, 3, 2), ("assignment", 3, 4, 1),
])
def test_families_match_oracle(family, size, n, seed):
    inst = generate(GenSpec(family, size, n, seed))
    assert run_aira(inst).vectors() == oracle_front(inst)


def test_cache_examples():
    cache = RelaxationCache()
    spec = OipSpec((1, 2, 3), 2, (52,))
    assert relaxation_lookup(cache, spec) is None
    result = frozenset({(50, 24, 44), (46, 41, 41)})
    cache.store((2,), (INF, INF, 52), result)
    assert relaxation_lookup(cache, spec) == result
    # cached with f_3 unbounded; every member has f_3 <= 44
    cache = RelaxationCache()
    cache.store((2,), (INF, INF, INF), result)
    assert relaxation_lookup(cache, OipSpec((1, 2, 3), 2, (43,))) is None
    assert relaxation_lookup(cache, OipSpec((1, 2, 3), 2, (44,))) == result
    # a different suffix never matches
    assert relaxation_lookup(cache, OipSpec((1, 3, 2), 2, (44,))) is None


def test_cache_tighter_cached_bound_is_not_reused():
    cache = RelaxationCache()
    cache.store((2,), (INF, INF, 40), frozenset({(1, 1, 40)}))
    assert relaxation_lookup(cache, OipSpec((1, 2, 3), 2, (52,))) is None


_pool = {}


def _vectors():
    if not _pool:
        inst = generate(GenSpec("knapsack", 8, 4, 11))
        _pool["inst"] = inst
        _pool["vecs"] = set(enumerate_vectors(inst))
    return _pool["inst"], _pool["vecs"]


def _random_spec(rng, vecs, n=4):
    perm = tuple(rng.sample(range(1, n + 1), n))
    k = rng.randint(0, n)
    pool = sorted(vecs)
    bounds = []
    for pos in perm[k:]:
        if rng.random() < 0.3:
            bounds.append(INF)
        else:
            bounds.append(rng.choice(pool)[pos - 1])
    return OipSpec(perm, k, tuple(bounds))


@pytest.mark.parametrize("use_cache", [True, False])
def test_solve_oip_matches_reference_filter(use_cache):
    inst, vecs = _vectors()
    rng = random.Random(5 + use_cache)
    for _ in range(60):
        spec = _random_spec(rng, vecs)
        ctx = RecursionContext(inst, use_cache=use_cache)
        assert ctx.solve_oip(spec) == oip_filter(vecs, spec), spec


def test_shared_context_reuses_cache_transparently():
    inst, vecs = _vectors()
    rng = random.Random(17)
    ctx = RecursionContext(inst, use_cache=True)
    for _ in range(60):
        spec = _random_spec(rng, vecs)
        assert ctx.solve_oip(spec) == oip_filter(vecs, spec)
    assert ctx.stats.cache_hits > 0


@pytest.mark.parametrize("seed", [1, 2, 3])
def test_cache_changes_work_not_answers(seed):
    inst = generate(GenSpec("knapsack", 9, 4, seed))
    on = run_aira(inst, use_cache=True)
    off = run_aira(inst, use_cache=False)
    assert on.vectors() == off.vectors()
    assert on.stats.ips_solved <= off.stats.ips_solved
    assert off.stats.cache_hits == 0


def test_every_root_order_gives_the_front():
    inst = generate(GenSpec("knapsack", 8, 3, 4))
    want = nondominated_filter(enumerate_vectors(inst))
    for p in all_permutations(3):
        ctx = RecursionContext(inst, p)
        assert ctx.solve_oip(OipSpec(p, 3, ())) == want
        assert ctx.archive.vectors() == want


class _Spy:
    """Hooks that record each loop's attained value at every boundary."""

    def __init__(self):
        self.seen = {}
        self.frames = []  # keeps frames alive so their ids stay unique

    def exchange(self, ctx):
        pass

    def publish(self, ctx):
        f = ctx.stack[-1]
        if f.attained is not None:
            self.frames.append(f)
            self.seen.setdefault(id(f), []).append((f.attained, f.bound))


def test_attained_values_strictly_decrease():
    inst = generate(GenSpec("knapsack", 9, 4, 6))
    spy = _Spy()
    ctx = RecursionContext(inst, hooks=spy)
    ctx.solve_oip(OipSpec((1, 2, 3, 4), 4, ()))
    assert spy.seen
    for seq in spy.seen.values():
        attained = [a for a, _ in seq]
        assert all(x > y for x, y in zip(attained, attained[1:]))
        assert all(b == a - 1 for a, b in seq)


def test_shared_counter_sees_every_ip(knapsack_fixture):
    c = IpCounter()
    a = run_aira(knapsack_fixture, counter=c)
    assert c.value == a.stats.ips_solved


def test_deadline_in_the_past_stops():
    inst = generate(GenSpec("knapsack", 8, 3, 4))
    with pytest.raises(TimeLimitExceeded):
        run_aira(inst, deadline=time.monotonic() - 1)


def test_spec_size_mismatch(knapsack_fixture):
    with pytest.raises(ValueError):
        RecursionContext(knapsack_fixture).solve_oip(OipSpec((1, 2), 2, ()))
