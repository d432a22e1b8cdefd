"""Channel-pipeline expressions.

    pipeline := stage ('|' stage)*
    stage    := IDENT ('(' (arg (',' arg)*)? ')')?
    arg      := IDENT '=' (NUMBER | IDENT | 'pi' ('/' NUMBER)?)

Whitespace is insignificant. Offsets in errors are byte offsets into the
UTF-8 source.
"""
import logging
import math
import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Tuple, Union

from app.errors import LabError, PipelineEvalError, PipelineSemanticError, PipelineSyntaxError
from app.models.models import FilterSpec, Subsystem
from app.models.quantum import DensityMatrix
from app.services.filters import apply_filter
from app.services.measures import negativity
from app.services.rindler import accelerate, rindler_parameter_from_acceleration
from app.services.states import one_param_state

from .stages import STAGE_MAP, Stage

logger = logging.getLogger(__name__)

_TOKEN_RE = re.compile(
    rb"(?P<ws>[ \t\r\n]+)"
    rb"|(?P<NUMBER>-?(?:[0-9]+(?:\.[0-9]*)?|\.[0-9]+)(?:[eE][+-]?[0-9]+)?)"
    rb"|(?P<IDENT>[A-Za-z_][A-Za-z0-9_]*)"
    rb"|(?P<punct>[()|,=/])"
)
_PUNCT_KIND = {b"(": "'('", b")": "')'", b"|": "'|'", b",": "','", b"=": "'='", b"/": "'/'"}
_PI_DIVISORS = {"2": 2.0, "4": 4.0}

Value = Union[float, str]


@dataclass(frozen=True)
class Span:
    start: int
    end: int


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    span: Span


@dataclass(frozen=True)
class ArgNode:
    name: str
    value: Value
    span: Span = field(compare=False)
    value_span: Span = field(compare=False)


@dataclass(frozen=True)
class StageNode:
    name: str
    args: Tuple[ArgNode, ...]
    span: Span = field(compare=False)
    resolved: Dict[str, Any] = field(default_factory=dict, compare=False, hash=False)


@dataclass(frozen=True)
class PipelineExpr:
    stages: Tuple[StageNode, ...]


@dataclass(frozen=True, eq=False)
class EvalResult:
    kind: str
    state: DensityMatrix
    value: Optional[float] = None


def tokenize(data: bytes) -> List[Token]:
    tokens = []
    pos = 0
    while pos < len(data):
        match = _TOKEN_RE.match(data, pos)
        if match is None:
            lexeme = data[pos : pos + 1].decode("latin-1")
            raise PipelineSyntaxError(
                "unexpected character",
                pos,
                expected=("IDENT", "NUMBER", "'('", "')'", "'|'", "','", "'='"),
                lexeme=lexeme,
            )
        kind = match.lastgroup
        if kind != "ws":
            text = match.group().decode("ascii")
            if kind == "punct":
                kind = _PUNCT_KIND[match.group()]
            tokens.append(Token(kind, text, Span(match.start(), match.end())))
        pos = match.end()
    tokens.append(Token("EOF", "", Span(len(data), len(data))))
    return tokens


class _Parser:
    def __init__(self, tokens: List[Token]):
        self.tokens = tokens
        self.index = 0

    @property
    def current(self) -> Token:
        return self.tokens[self.index]

    def advance(self) -> Token:
        token = self.current
        self.index += 1
        return token

    def expect(self, *kinds: str) -> Token:
        token = self.current
        if token.kind not in kinds:
            raise PipelineSyntaxError(
                "unexpected end of input" if token.kind == "EOF" else "unexpected token",
                token.span.start,
                expected=kinds,
                lexeme=token.text or None,
            )
        return self.advance()

    def pipeline(self) -> PipelineExpr:
        stages = [self.stage()]
        while self.current.kind == "'|'":
            self.advance()
            stages.append(self.stage())
        self.expect("'|'", "EOF")
        return PipelineExpr(tuple(stages))

    def stage(self) -> StageNode:
        name = self.expect("IDENT")
        end = name.span.end
        args: List[ArgNode] = []
        if self.current.kind == "'('":
            self.advance()
            if self.current.kind != "')'":
                args.append(self.arg())
                while self.current.kind == "','":
                    self.advance()
                    args.append(self.arg())
            end = self.expect("','", "')'").span.end
        return StageNode(name.text, tuple(args), Span(name.span.start, end))

    def arg(self) -> ArgNode:
        name = self.expect("IDENT")
        self.expect("'='")
        token = self.expect("NUMBER", "IDENT")
        value_span = token.span
        if token.kind == "NUMBER":
            value: Value = float(token.text)
        elif token.text == "pi":
            value = math.pi
            if self.current.kind == "'/'":
                self.advance()
                divisor = self.expect("NUMBER")
                if divisor.text not in _PI_DIVISORS:
                    raise PipelineSyntaxError(
                        "only pi, pi/2 and pi/4 are supported",
                        divisor.span.start,
                        expected=tuple(_PI_DIVISORS),
                        lexeme=divisor.text,
                    )
                value = math.pi / _PI_DIVISORS[divisor.text]
                value_span = Span(token.span.start, divisor.span.end)
        else:
            value = token.text
        return ArgNode(name.text, value, Span(name.span.start, value_span.end), value_span)


def _resolve_args(stage: Stage, node: StageNode) -> Dict[str, Any]:
    """Type-check, range-check and default the arguments of one stage."""
    given: Dict[str, Any] = {}
    for arg in node.args:
        spec = stage.arg(arg.name)
        if spec is None:
            raise PipelineSemanticError(
                f"unknown argument '{arg.name}' for stage '{stage.name}'",
                arg.span.start,
                expected=tuple(a.name for a in stage.args),
                lexeme=arg.name,
            )
        if arg.name in given:
            raise PipelineSemanticError(
                f"duplicate argument '{arg.name}'", arg.span.start, lexeme=arg.name
            )
        if spec.choices:
            if not isinstance(arg.value, str) or arg.value not in spec.choices:
                raise PipelineSemanticError(
                    f"bad value for '{arg.name}'",
                    arg.value_span.start,
                    expected=spec.choices,
                    lexeme=str(arg.value),
                )
            given[arg.name] = spec.type(arg.value)
        else:
            if not isinstance(arg.value, float):
                raise PipelineSemanticError(
                    f"'{arg.name}' must be a number",
                    arg.value_span.start,
                    expected=("NUMBER",),
                    lexeme=arg.value,
                )
            if spec.out_of_range(arg.value):
                raise PipelineSemanticError(
                    f"{arg.name} out of range {spec.bounds_text}",
                    arg.value_span.start,
                    lexeme=repr(arg.value),
                )
            given[arg.name] = arg.value

    resolved = dict(given)
    for spec in stage.args:
        if spec.name in resolved:
            continue
        if spec.required:
            raise PipelineSemanticError(
                f"missing required argument '{spec.name}' for stage '{stage.name}'",
                node.span.start,
                expected=(spec.name,),
                lexeme=node.name,
            )
        if spec.default is not None:
            resolved[spec.name] = spec.default
    if stage.check is not None:
        problem = stage.check(given, resolved)
        if problem:
            raise PipelineSemanticError(problem, node.span.start, lexeme=node.name)
    return resolved


def _validate(expr: PipelineExpr) -> PipelineExpr:
    stages = []
    accelerated = set()
    last = len(expr.stages) - 1
    for position, node in enumerate(expr.stages):
        stage = STAGE_MAP.get(node.name)
        if stage is None:
            raise PipelineSemanticError(
                f"unknown stage '{node.name}'",
                node.span.start,
                expected=tuple(STAGE_MAP),
                lexeme=node.name,
            )
        if (position == 0) != (node.name == "state"):
            message = (
                "pipeline must start with state" if position == 0 else "state must be the first stage"
            )
            raise PipelineSemanticError(message, node.span.start, lexeme=node.name)
        if stage.terminal and position != last:
            raise PipelineSemanticError(
                f"'{node.name}' must be the last stage", node.span.start, lexeme=node.name
            )
        resolved = _resolve_args(stage, node)
        if node.name == "accel":
            part = resolved["part"]
            if part in accelerated:
                raise PipelineSemanticError(
                    f"{part.value} is accelerated more than once", node.span.start, lexeme=node.name
                )
            accelerated.add(part)
        stages.append(StageNode(node.name, node.args, node.span, resolved))
    return PipelineExpr(tuple(stages))


def parse_pipeline(text: Union[str, bytes]) -> PipelineExpr:
    """Parse and validate a pipeline; raises PipelineSyntaxError or PipelineSemanticError."""
    if isinstance(text, str):
        data = text.encode("utf-8")
    else:
        data = bytes(text)
    expr = _Parser(tokenize(data)).pipeline()
    return _validate(expr)


def _format_value(value: Value) -> str:
    if isinstance(value, Enum):
        return str(value.value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


def print_pipeline(expr: PipelineExpr) -> str:
    """Canonical text for ``expr``; parsing it yields an equal expression."""
    parts = []
    for node in expr.stages:
        if node.args:
            args = ", ".join(f"{arg.name}={_format_value(arg.value)}" for arg in node.args)
            parts.append(f"{node.name}({args})")
        else:
            parts.append(node.name)
    return " | ".join(parts)


def _run_stage(node: StageNode, rho: Optional[DensityMatrix]) -> DensityMatrix:
    args = node.resolved
    if node.name == "state":
        return one_param_state(args["mu"])
    if node.name == "accel":
        r = args.get("r")
        if r is None:
            r = rindler_parameter_from_acceleration(args["a"], args["omega"], args["c"])
        return accelerate(rho, args["part"], r)
    if node.name == "filter":
        part = args["part"]
        strength = args["kappa"] if part == Subsystem.QUBIT else args["Q"]
        spec = FilterSpec(
            target=part, strength=strength, mode=args["mode"], pair_policy=args.get("pair")
        )
        return apply_filter(rho, spec)
    return rho


def eval_pipeline(expr: PipelineExpr) -> EvalResult:
    """Fold the stages left to right over a density matrix.

    A trailing ``negativity`` yields a scalar; ``dump`` or no terminal stage
    yields the final state.
    """
    rho: Optional[DensityMatrix] = None
    for node in expr.stages:
        try:
            if node.name == "negativity":
                return EvalResult(kind="scalar", state=rho, value=negativity(rho))
            rho = _run_stage(node, rho)
        except LabError as e:
            logger.debug("stage '%s' failed: %s", node.name, e)
            raise PipelineEvalError(
                f"stage '{node.name}' failed: {e}", node.span.start, lexeme=node.name
            ) from e
    return EvalResult(kind="dump", state=rho)


def evaluate(text: Union[str, bytes]) -> EvalResult:
    return eval_pipeline(parse_pipeline(text))
