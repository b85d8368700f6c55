import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qutil.circuit import (
    Circuit,
    CircuitParseError,
    Instruction,
    active_qubits,
    compose,
    depth,
    empty,
    from_text,
    instr,
)
from qutil.errors import ParameterArityError, UnsupportedGateError


def brute_depth(c: Circuit) -> int:
    """Longest path in the dependency DAG, by exhaustive relaxation."""
    ins = c.instructions
    longest = [1] * len(ins)
    for j in range(len(ins)):
        for i in range(j):
            if set(ins[i].qubits) & set(ins[j].qubits):
                longest[j] = max(longest[j], longest[i] + 1)
    return max(longest, default=0)


def test_depth_examples():
    assert depth(empty(3)) == 0
    assert depth(Circuit(1, [instr("H", 0), instr("H", 0)])) == 2
    c = Circuit(2, [instr("H", 0), instr("X", 1), instr("CX", 0, 1)])
    assert depth(c) == 2 == brute_depth(c)


def test_active_qubits_examples():
    c = Circuit(27, [instr("CX", 3, 5), instr("H", 3)])
    assert active_qubits(c) == {3, 5}
    assert active_qubits(empty(27)) == frozenset()
    routed = Circuit(27, [instr("SWAP", 6, 7), instr("CX", 6, 10)])
    assert 7 in active_qubits(routed)


def test_slack_not_counted_as_activity():
    c = Circuit(3, [instr("H", 0)], slack=[0, 1, 1])
    assert active_qubits(c) == {0}
    assert c.depth() == 1


def test_compose():
    c = compose(empty(2), instr("H", 0))
    assert c.width == 2 and len(c) == 1 and c.depth() == 1
    c2 = compose(compose(empty(2), instr("CX", 0, 1)), instr("CX", 0, 1))
    assert c2.depth() == 2
    with pytest.raises(IndexError):
        compose(empty(2), instr("CX", 0, 0))
    with pytest.raises(IndexError):
        compose(empty(2), instr("H", 2))


def test_instruction_validation():
    with pytest.raises(UnsupportedGateError):
        Circuit(2, [instr("Foo", 0)])
    with pytest.raises(UnsupportedGateError):
        Circuit(2, [instr("CX", 0)])
    with pytest.raises(ParameterArityError):
        Circuit(2, [instr("Rz", 0)])
    with pytest.raises(ValueError):
        Circuit(0)
    with pytest.raises(ValueError):
        Circuit(2, slack=[1])


def test_text_roundtrip():
    c = Circuit(
        3,
        [instr("H", 0), instr("Rz", 2, params=[0.1 + 1e-17]), instr("U", 1, params=[1, 2, 3]), instr("CX", 0, 1)],
        slack=[0, 2, 1],
    )
    text = c.to_text()
    assert text.splitlines()[0] == "width 3"
    assert from_text(text) == c


def test_text_grammar():
    c = from_text("# comment\nwidth 2\n\nH 0   # trailing\nCP(0.5) 1, 0\n")
    assert c.instructions == (Instruction("H", (), (0,)), Instruction("CP", (0.5,), (1, 0)))
    with pytest.raises(CircuitParseError):
        from_text("H 0\n")
    with pytest.raises(CircuitParseError):
        from_text("width 1\nH zero\n")
    with pytest.raises(CircuitParseError):
        from_text("")


random_circuits = st.integers(1, 5).flatmap(
    lambda w: st.lists(
        st.one_of(
            st.tuples(st.just("H"), st.integers(0, w - 1)),
            st.tuples(st.just("CX"), st.integers(0, w - 1), st.integers(0, w - 1)).filter(lambda t: t[1] != t[2])
            if w > 1
            else st.tuples(st.just("X"), st.integers(0, 0)),
        ),
        max_size=25,
    ).map(lambda items: Circuit(w, [Instruction(t[0], (), tuple(t[1:])) for t in items]))
)


@settings(max_examples=150, deadline=None)
@given(random_circuits)
def test_depth_matches_brute_force(c):
    assert depth(c) == brute_depth(c)
    assert active_qubits(c) <= set(range(c.width))
    assert len(active_qubits(c)) <= c.width


@settings(max_examples=100, deadline=None)
@given(random_circuits, st.randoms(use_true_random=False))
def test_active_set_order_invariant(c, r):
    ins = list(c.instructions)
    r.shuffle(ins)
    assert active_qubits(c.with_instructions(ins)) == active_qubits(c)


@settings(max_examples=100, deadline=None)
@given(random_circuits)
def test_depth_invariant_under_disjoint_swaps(c):
    ins = list(c.instructions)
    for i in range(len(ins) - 1):
        if not set(ins[i].qubits) & set(ins[i + 1].qubits):
            swapped = ins[:i] + [ins[i + 1], ins[i]] + ins[i + 2:]
            assert depth(c.with_instructions(swapped)) == depth(c)


def test_compose_depth_non_decreasing():
    c = empty(3)
    last = 0
    for q in itertools.islice(itertools.cycle([(0,), (1, 2), (2,), (0, 1)]), 12):
        c = compose(c, instr("CX" if len(q) == 2 else "X", *q))
        assert c.depth() >= last
        last = c.depth()
