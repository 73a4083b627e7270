"""
builtin_programs.py

Programs shipped with chasekit and the registry behind `--builtin`.

Functions:
    fll_rules(): The F-Logic Lite axiomatization (eleven TGDs and one EGD).
    grid_rules(): Rules that grow an infinite grid from index(0).
    load_builtin(name): Program registered under a name.
    builtin_names(): Registered names.
"""

from collections.abc import Callable

from program_io.parser import Program, parse_program
from reasoning.errors import UsageError
from rulesets.coloring import GraphSpec, coloring_program

FLL_PROGRAM = """\
% F-Logic Lite
tgd type(O,A,T), data(O,A,V) -> member(V,T).
tgd sub(C1,C3), sub(C3,C2) -> sub(C1,C2).
tgd member(O,C), sub(C,C1) -> member(O,C1).
egd data(O,A,V), data(O,A,W), funct(A,O) -> V = W.
tgd mandatory(A,O) -> exists V: data(O,A,V).
tgd member(O,C), type(C,A,T) -> type(O,A,T).
tgd sub(C,C1), type(C1,A,T) -> type(C,A,T).
tgd type(C,A,T1), sub(T1,T) -> type(C,A,T).
tgd sub(C,C1), mandatory(A,C1) -> mandatory(A,C).
tgd member(O,C), mandatory(A,C) -> mandatory(A,O).
tgd sub(C,C1), funct(A,C1) -> funct(A,C).
tgd member(O,C), funct(A,C) -> funct(A,O).
"""

GRID_PROGRAM = """\
% infinite grid: only the last rule is unguarded
fact index(0).
tgd index(X) -> exists Y: next(X,Y).
tgd next(X,Y) -> index(Y).
tgd trans(T), next(X1,X2), next(Y1,Y2) -> grid(T,X1,Y1,X2,Y2).
"""


def fll_rules() -> Program:
    return parse_program(FLL_PROGRAM)


def grid_rules() -> Program:
    return parse_program(GRID_PROGRAM)


def _triangle() -> GraphSpec:
    return GraphSpec(("v1", "v2", "v3"), (("v1", "v2"), ("v2", "v3"), ("v1", "v3")))


def _k4() -> GraphSpec:
    vertices = ("v1", "v2", "v3", "v4")
    edges = tuple((a, b) for i, a in enumerate(vertices) for b in vertices[i + 1:])
    return GraphSpec(vertices, edges)


def _c5() -> GraphSpec:
    vertices = tuple(f"v{i}" for i in range(1, 6))
    return GraphSpec(vertices, tuple((vertices[i], vertices[(i + 1) % 5]) for i in range(5)))


BUILTINS: dict[str, Callable[[], Program]] = {
    "fll": fll_rules,
    "grid": grid_rules,
    "3col": lambda: coloring_program(_triangle(), fll_rules()),
    "3col-k3": lambda: coloring_program(_triangle(), fll_rules()),
    "3col-k4": lambda: coloring_program(_k4(), fll_rules()),
    "3col-c5": lambda: coloring_program(_c5(), fll_rules()),
}


def builtin_names() -> list[str]:
    return list(BUILTINS)


def load_builtin(name: str) -> Program:
    """
    Returns a fresh copy of the program registered under `name`.

    Raises:
        UsageError: For unknown names.
    """
    factory = BUILTINS.get(name)
    if factory is None:
        raise UsageError(f"unknown builtin {name!r}; choose from {', '.join(BUILTINS)}")
    return factory()
