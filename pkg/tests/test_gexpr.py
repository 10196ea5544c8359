import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dst.errors import EvalError, ExprSyntaxError, UnknownFunction, UnknownIdentifier
from dst.gexpr import BinOp, Call, Neg, Number, Var, evaluate, parse, to_source


def ev(src, lam=0.0):
    return evaluate(parse(src), lam)


def test_ast_shapes():
    assert parse("lambda^2") == BinOp("^", Var(), Number(complex(2)))
    assert parse("2*lambda + 1") == BinOp("+", BinOp("*", Number(complex(2)), Var()), Number(complex(1)))
    assert parse("exp(-lambda)*sin(lambda)") == BinOp(
        "*", Call("exp", Neg(Var())), Call("sin", Var())
    )


def test_eval_basics():
    assert ev("lambda^2", 3) == pytest.approx(9)
    assert ev("exp(-lambda)", 0) == pytest.approx(1)
    assert ev("sqrt(lambda)", 4) == pytest.approx(2)
    assert ev("i*i") == pytest.approx(-1)
    assert ev("abs(-3)") == pytest.approx(3)
    assert ev("re(i) + im(i)") == pytest.approx(1)
    assert ev("conj(i)") == pytest.approx(-1j)


def test_precedence():
    assert ev("2+3*4") == pytest.approx(14)
    assert ev("2^3^2") == pytest.approx(512)  # right associative
    assert ev("-2^2") == pytest.approx(-4)  # unary minus looser than power
    assert ev("2^-1") == pytest.approx(0.5)
    assert ev("(2^3)^2") == pytest.approx(64)
    assert ev("6/3/2") == pytest.approx(1)  # left associative


def test_numbers():
    assert ev("1e-3") == pytest.approx(0.001)
    assert ev(".5") == pytest.approx(0.5)
    assert ev("2.5E+1") == pytest.approx(25)


def test_syntax_errors_carry_offsets():
    with pytest.raises(ExprSyntaxError) as err:
        parse("1 + $")
    assert err.value.offset == 4
    with pytest.raises(ExprSyntaxError):
        parse("2lambda")  # no implicit multiplication
    with pytest.raises(ExprSyntaxError):
        parse("")
    with pytest.raises(ExprSyntaxError):
        parse("(1+2")
    with pytest.raises(UnknownFunction):
        parse("foo(lambda)")
    with pytest.raises(UnknownIdentifier):
        parse("lambda + mu")


def test_eval_errors():
    with pytest.raises(EvalError):
        ev("1/lambda", 0)
    with pytest.raises(EvalError):
        ev("log(lambda)", 0)
    with pytest.raises(EvalError):
        ev("exp(exp(exp(lambda)))", 50)  # overflow surfaces as EvalError


CORPUS = [
    "lambda",
    "i",
    "2",
    "2.5",
    "1e-3",
    "-lambda",
    "--lambda",
    "lambda + 1",
    "lambda - 1",
    "1 - lambda - 2",
    "2*lambda",
    "lambda/3",
    "6/3/2",
    "lambda^2",
    "2^3^2",
    "(2^3)^2",
    "-2^2",
    "2^-1",
    "-(lambda + 1)",
    "(lambda + 1)*(lambda - 1)",
    "lambda*(1 + lambda)",
    "exp(lambda)",
    "exp(-lambda)",
    "log(lambda + 1)",
    "sin(lambda)*cos(lambda)",
    "sqrt(lambda^2 + 1)",
    "abs(-lambda)",
    "re(lambda + i)",
    "im(2*i*lambda)",
    "conj(lambda + i)",
    "exp(-lambda)*sin(lambda)",
    "1 + 2*lambda + 3*lambda^2",
    "(1 + lambda)^3",
    "lambda^2/(1 + lambda^2)",
    "i*lambda",
    "2 + 3*4",
    "(2 + 3)*4",
    "lambda - -1",
    "-lambda^2 + 1",
    "exp(i*lambda)",
    "sqrt(abs(lambda))",
    "cos(lambda)^2 + sin(lambda)^2",
    "1/(1 + exp(-lambda))",
    "lambda*lambda*lambda",
    "((lambda))",
    "2^lambda",
    "lambda^lambda",
    "log(exp(lambda))",
    "1.5*lambda + 2.5",
    "sin(cos(lambda))",
]


@pytest.mark.parametrize("src", CORPUS)
def test_print_parse_idempotent(src):
    tree = parse(src)
    printed = to_source(tree)
    assert parse(printed) == tree
    # printing is a fixed point after one round
    assert to_source(parse(printed)) == printed


@pytest.mark.parametrize("src", CORPUS)
def test_eval_survives_printing(src):
    tree = parse(src)
    lam = 0.7
    assert evaluate(parse(to_source(tree)), lam) == evaluate(tree, lam)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.floats(-100, 100), min_size=1, max_size=7), st.floats(-10, 10))
def test_polynomials_match_horner(coeffs, lam):
    src = " + ".join(f"{abs(c)!r}*lambda^{k}" if c >= 0 else f"-{abs(c)!r}*lambda^{k}" for k, c in enumerate(coeffs))
    got = evaluate(parse(src), lam)
    want = 0.0
    for c in reversed(coeffs):
        want = want * lam + c
    assert got.real == pytest.approx(want, rel=1e-13, abs=1e-10)
    assert got.imag == pytest.approx(0.0, abs=1e-12)
