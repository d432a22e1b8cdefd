import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from app.errors import (
    FilteredToZeroError,
    PipelineError,
    PipelineEvalError,
    PipelineSemanticError,
    PipelineSyntaxError,
)
from app.models.models import Subsystem
from app.services.states import one_param_state, validate_density
from unruh_filter_lab import pipeline as pipeline_module
from unruh_filter_lab.pipeline import (
    PipelineExpr,
    eval_pipeline,
    evaluate,
    parse_pipeline,
    print_pipeline,
    tokenize,
)

CORPUS = [
    "state(mu=0) | negativity",
    "state(mu=0.5)",
    "state(mu=0.25) | accel(part=qubit, r=0.6) | filter(part=qutrit, Q=0.5, mode=postselect) | negativity",
    "state(mu=0.1)|accel(part=qutrit,r=pi/4)|dump",
    "state( mu = 0.3 ) | accel( part = qubit , r = 0 ) | negativity",
    "state(mu=0.2) | accel(part=qubit, r=pi/4) | accel(part=qutrit, r=pi/4) | negativity",
    "state(mu=0.2) | filter(part=qubit, kappa=0.3) | negativity",
    "state(mu=0.2) | filter(part=qutrit, Q=0.7, mode=channel) | dump",
    "state(mu=0.2) | accel(part=qutrit, r=0.5) | filter(part=qutrit, Q=0.7, pair=keep) | negativity",
    "state(mu=0.4) | accel(part=qubit, a=2.5) | negativity",
    "state(mu=0.4) | accel(part=qubit, a=2.5, omega=0.5, c=2) | negativity",
    "state(mu=1e-1) | accel(part=qubit, r=2.5E-1) | negativity",
    "state(mu=.5) | negativity",
    "state(mu=0) | filter(part=qubit, kappa=0.9) | filter(part=qutrit, Q=0.1) | negativity",
    "state(mu=0)\n|\taccel(part=qutrit, r=pi/4)",
    "state(mu=0.5) | filter(part=qutrit, Q=0.81, mode=postselect) | negativity",
    "state(mu=0.05) | accel(part=qutrit, r=0.1) | accel(part=qubit, r=0.2) | dump",
    "state(mu=0.3) | dump",
    "state(mu=0.3) | accel(part=qubit, r=0.785) | filter(part=qutrit, Q=0.99, mode=channel, pair=keep)",
    "state(mu=0.35)|filter(part=qutrit,Q=0.5)|filter(part=qutrit,Q=0.5)|negativity()",
]

MALFORMED = [
    ("", 0),
    ("state(mu=0", 10),
    ("state(mu=0) |", 13),
    ("state(mu=0) negativity", 12),
    ("state(mu 0)", 9),
    ("state(mu=0))", 11),
    ("state(mu=#)", 9),
    ("state(mu=0) | accel(part=qubit, r=pi/3)", 37),
    ("state(,)", 6),
    ("|", 0),
]

SEMANTIC = [
    ("state(mu=0.7)", 9),
    ("state(mu=-0.1)", 9),
    ("negativity | state(mu=0)", 0),
    ("state(mu=0) | frob", 14),
    ("state(mu=0) | accel(part=qubit) | negativity", 14),
    ("state(mu=0) | accel(part=qubit, r=0.1) | accel(part=qubit, r=0.2)", 41),
    ("state(mu=0) | negativity | dump", 14),
    ("state(mu=0) | filter(part=qubit, Q=0.5)", 14),
    ("state(mu=0) | filter(part=qutrit, Q=0.5, mode=channel, pair=discard)", 14),
    ("state(mu=0) | state(mu=0)", 14),
    ("state(mu=0) | accel(part=photon, r=0.1)", 25),
    ("state(mu=0) | accel(part=qubit, r=1.0)", 34),
    ("state(mu=0, mu=0.1)", 12),
    ("state(nu=0)", 6),
    ("state(mu=qubit)", 9),
]


def test_parse_example():
    expr = parse_pipeline(CORPUS[2])
    assert [stage.name for stage in expr.stages] == ["state", "accel", "filter", "negativity"]
    accel = expr.stages[1]
    assert accel.resolved["part"] == Subsystem.QUBIT
    assert accel.resolved["r"] == 0.6
    assert accel.span.start == 17


def test_pi_literals():
    expr = parse_pipeline("state(mu=0) | accel(part=qubit, r=pi/4)")
    assert expr.stages[1].resolved["r"] == math.pi / 4


@pytest.mark.parametrize("text", CORPUS)
def test_round_trip(text):
    expr = parse_pipeline(text)
    printed = print_pipeline(expr)
    again = parse_pipeline(printed)
    assert again == expr
    assert print_pipeline(again) == printed


@pytest.mark.parametrize("text, offset", MALFORMED)
def test_syntax_errors(text, offset):
    with pytest.raises(PipelineSyntaxError) as info:
        parse_pipeline(text)
    assert info.value.offset == offset
    assert f"at byte {offset}" in str(info.value)


@pytest.mark.parametrize("text, offset", SEMANTIC)
def test_semantic_errors(text, offset):
    with pytest.raises(PipelineSemanticError) as info:
        parse_pipeline(text)
    assert info.value.offset == offset


def test_error_details():
    with pytest.raises(PipelineSemanticError) as info:
        parse_pipeline("state(mu=0.7)")
    assert "mu out of range [0, 0.5]" in str(info.value)
    assert info.value.to_dict() == {
        "error": "mu out of range [0, 0.5]",
        "offset": 9,
        "expected": [],
        "lexeme": "0.7",
    }
    with pytest.raises(PipelineSyntaxError) as info:
        parse_pipeline("state(mu=0")
    assert set(info.value.expected) == {"','", "')'"}


def test_offsets_are_bytes():
    # two-byte character before the error
    with pytest.raises(PipelineSyntaxError) as info:
        parse_pipeline("state(mu=0) | é")
    assert info.value.offset == 14
    with pytest.raises(PipelineSyntaxError) as info:
        parse_pipeline("é".encode("utf-8") + b" x")
    assert info.value.offset == 0


def _check_never_crashes(data: bytes) -> None:
    try:
        result = parse_pipeline(data)
    except PipelineError as e:
        assert 0 <= e.offset <= len(data)
    else:
        assert isinstance(result, PipelineExpr)


def test_random_byte_fuzz():
    rng = np.random.default_rng(7)
    alphabet = np.frombuffer(
        b"state(mu=0.5)|accel,part=qubit r pi/4 filter Q kappa negativity dump", dtype=np.uint8
    )
    for i in range(100_000):
        size = int(rng.integers(0, 48))
        if i % 2:
            data = rng.integers(0, 256, size=size, dtype=np.uint8).tobytes()
        else:
            data = rng.choice(alphabet, size=size).tobytes()
        _check_never_crashes(data)


@settings(max_examples=300, deadline=None)
@given(st.binary(max_size=80))
def test_arbitrary_bytes(data):
    _check_never_crashes(data)


@settings(max_examples=300, deadline=None)
@given(st.text(alphabet="state(mu=0.1)|accel,part=qutrit,r=pi/4 filter Q=0.5 negativity", max_size=60))
def test_near_miss_text(text):
    _check_never_crashes(text.encode("utf-8"))


def test_tokenize_spans():
    tokens = tokenize(b"state (mu=0)")
    assert [t.kind for t in tokens] == ["IDENT", "'('", "IDENT", "'='", "NUMBER", "')'", "EOF"]
    assert tokens[1].span.start == 6
    assert tokens[-1].span.start == 12


def test_eval_examples():
    assert evaluate("state(mu=0) | negativity").value == pytest.approx(1.0, abs=1e-9)
    value = evaluate("state(mu=0.5) | filter(part=qutrit, Q=0.81, mode=postselect) | negativity")
    assert value.value == pytest.approx(2 * 0.9 / 2.19, abs=1e-9)
    at_rest = evaluate("state(mu=0.3) | accel(part=qubit, r=0) | negativity").value
    assert at_rest == pytest.approx(evaluate("state(mu=0.3) | negativity").value, abs=1e-14)


def test_acceleration_from_physical_parameters():
    by_a = evaluate("state(mu=0.2) | accel(part=qubit, a=pi) | negativity").value
    by_r = evaluate(f"state(mu=0.2) | accel(part=qubit, r={math.atan(math.exp(-1))!r}) | negativity")
    assert by_a == pytest.approx(by_r.value, abs=1e-12)


def test_eval_dump_and_implicit_dump():
    result = evaluate("state(mu=0.3) | accel(part=qutrit, r=pi/4) | dump")
    assert result.kind == "dump"
    assert result.state.dims == (2, 4)
    implicit = evaluate("state(mu=0.3)")
    assert implicit.kind == "dump"
    assert implicit.state.allclose(one_param_state(0.3))


def test_eval_error_carries_stage_span(monkeypatch):
    def fail(rho, spec):
        raise FilteredToZeroError(0.0)

    monkeypatch.setattr(pipeline_module, "apply_filter", fail)
    with pytest.raises(PipelineEvalError) as info:
        evaluate("state(mu=0.2) | filter(part=qutrit, Q=0.5) | negativity")
    assert info.value.offset == 16
    assert info.value.lexeme == "filter"


def _random_pipeline(rng: np.random.Generator) -> str:
    stages = [f"state(mu={rng.uniform(0, 0.5)!r})"]
    middle = []
    for part in ("qubit", "qutrit"):
        if rng.random() < 0.6:
            middle.append(f"accel(part={part}, r={rng.uniform(0, math.pi / 4)!r})")
    for _ in range(int(rng.integers(0, 3))):
        strength = float(rng.uniform(0.01, 0.99))
        if rng.random() < 0.5:
            middle.append(f"filter(part=qubit, kappa={strength!r})")
        elif rng.random() < 0.5:
            middle.append(f"filter(part=qutrit, Q={strength!r}, mode=channel)")
        else:
            pair = "keep" if rng.random() < 0.5 else "discard"
            middle.append(f"filter(part=qutrit, Q={strength!r}, pair={pair})")
    rng.shuffle(middle)
    return " | ".join(stages + middle + ["dump"])


def test_random_pipelines_yield_valid_states():
    rng = np.random.default_rng(11)
    for _ in range(200):
        text = _random_pipeline(rng)
        result = eval_pipeline(parse_pipeline(text))
        assert validate_density(result.state).passed, text
