import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from sttx.core import (  # noqa: E402
    PROP, App, CstDecl, CstDefn, Fun, Imp, Signature, TVar, Var, arrow, forall, lam,
    poly_term, poly_type,
)

X = TVar("X")


def leibniz_defn() -> CstDefn:
    body = lam("x", X, lam("y", X, forall("P", Fun(X, PROP),
                                          Imp(App(Var("P"), Var("x")), App(Var("P"), Var("y"))))))
    return CstDefn("leibniz", poly_type(["X"], arrow(X, X, PROP)), poly_term(["X"], body))


@pytest.fixture(scope="session")
def leibniz_sig() -> Signature:
    return Signature().extend(leibniz_defn())


@pytest.fixture(scope="session")
def mininat():
    from gen import mininat

    return mininat()


@pytest.fixture
def declared_sig() -> Signature:
    return Signature().extend(CstDecl("c", poly_type([], PROP)))


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
