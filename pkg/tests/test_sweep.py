import random

import pytest

from qutil.errors import ConfigurationError, ConsistencyError
from qutil.rng import XorShift64Star
from qutil.sweep import (
    GroupKey,
    SweepConfig,
    aggregate,
    evaluate,
    expand_parameters,
    run_sweep,
)


def small_cfg(**kw):
    base = dict(
        archs=("falcon-r4",), qubits=(3, 5), depths=(4,), ratios=((1, 1),), levels=(1, 2),
        layouts=("trivial", "sabre"), mg=2, mt=2, global_seed=11,
    )
    base.update(kw)
    return SweepConfig(**base)


def test_expansion_counts_and_order():
    cfg = SweepConfig(("falcon-r4",), (6,), (20,), ((1, 1),), (2,), ("sabre",), mg=2, mt=2, global_seed=5)
    ps = expand_parameters(cfg)
    assert len(ps) == 4
    assert len({p.seeds for p in ps}) == 4
    rng = XorShift64Star(5)
    assert [p.seeds for p in ps] == [(rng.next_u64(), rng.next_u64()) for _ in range(4)]
    assert [p.ordinal for p in ps] == [0, 1, 2, 3]


def test_expansion_product_order():
    ps = expand_parameters(small_cfg())
    assert len(ps) == 2 * 1 * 1 * 2 * 2 * 4
    groups = [p.group for p in ps[::4]]
    assert groups == [
        GroupKey("falcon-r4", q, 4, (1, 1), O, L) for q in (3, 5) for O in (1, 2) for L in ("trivial", "sabre")
    ]
    assert expand_parameters(small_cfg()) == ps


def test_expansion_restarts_per_architecture():
    ps = expand_parameters(small_cfg(archs=("falcon-r4", "line:6")))
    half = len(ps) // 2
    assert [p.seeds for p in ps[:half]] == [p.seeds for p in ps[half:]]
    assert {p.arch_ref for p in ps[half:]} == {"line:6"}


def test_validation():
    with pytest.raises(ConfigurationError):
        expand_parameters(small_cfg(layouts=()))
    with pytest.raises(ConfigurationError):
        expand_parameters(small_cfg(mg=0))
    with pytest.raises(ConfigurationError):
        expand_parameters(small_cfg(layouts=("random",)))
    with pytest.raises(ConfigurationError):
        expand_parameters(small_cfg(qubits=(28,)))
    with pytest.raises(ConfigurationError):
        expand_parameters(small_cfg(qubits=(1,)))


def test_evaluate_examples():
    cfg = SweepConfig(("falcon-r4",), (11,), (20,), ((4, 1),), (2,), ("trivial",), mg=6, global_seed=3)
    for p in expand_parameters(cfg):
        act = evaluate(p)
        assert act <= set(range(15))
        assert len(act & set(range(11))) >= 10
    empty = SweepConfig(("falcon-r4",), (4,), (0,), ((1, 1),), (1,), ("sabre",))
    assert evaluate(expand_parameters(empty)[0]) == frozenset()


def test_evaluate_full_width():
    cfg = SweepConfig(("falcon-r4",), (27,), (30,), ((1, 0),), (1,), ("trivial",), mg=1)
    assert evaluate(expand_parameters(cfg)[0]) == frozenset(range(27))


def test_aggregate_order_independent_and_frequencies():
    ps = expand_parameters(small_cfg())
    results = [(p, evaluate(p)) for p in ps]
    table = aggregate(results)
    shuffled = results[:]
    random.Random(1).shuffle(shuffled)
    assert aggregate(shuffled) == table
    for key in table.keys():
        stats = table[key]
        assert stats.total == 4
        assert all(0.0 <= f <= 1.0 for f in stats.frequencies())
    # hand-built frequencies
    p = ps[0]
    fake = [(q, frozenset({0}) if i % 2 else frozenset()) for i, q in enumerate(ps[:4])]
    t = aggregate(fake)
    assert t[p.group].frequency(0) == 0.5 and t[p.group].frequency(5) == 0.0


def test_aggregate_failures_and_mixing():
    ps = expand_parameters(small_cfg())
    t = aggregate([(ps[0], None), (ps[1], frozenset({1}))])
    assert t[ps[0].group].total == 1
    other = expand_parameters(small_cfg(global_seed=12))
    with pytest.raises(ConsistencyError):
        aggregate([(ps[0], frozenset()), (other[1], frozenset())])
    with pytest.raises(ConsistencyError):
        aggregate([(ps[0], frozenset()), (ps[0], frozenset())])


def test_run_sweep_worker_independent():
    cfg = small_cfg()
    a = run_sweep(cfg, workers=1)
    b = run_sweep(cfg, workers=3, chunk_size=5)
    assert a.table == b.table
    assert a.failures == b.failures == []
    assert a.manifest["evaluations"] == len(expand_parameters(cfg))
    assert all(g["total"] == 4 for g in a.manifest["groups"])


def test_run_sweep_records_failures(monkeypatch):
    import qutil.sweep as sweep_mod

    real = sweep_mod.evaluate
    calls = {}

    def flaky(p):
        calls[p.ordinal] = calls.get(p.ordinal, 0) + 1
        if p.ordinal == 2:
            raise RuntimeError("boom")
        return real(p)

    monkeypatch.setattr(sweep_mod, "evaluate", flaky)
    out = run_sweep(small_cfg(), workers=1)
    assert [f.ordinal for f in out.failures] == [2]
    assert calls[2] == 2  # retried once
    assert out.manifest["failures"] == [2]
    assert out.table[out.params[2].group].total == 3
