import math

import pytest
from hypothesis import given, strategies as st

from pennyforge import formula as F


class TestParse:
    def test_single_inv(self):
        f = F.parse("vars x; x * x = 1;")
        assert f.variables == ("x",)
        assert len(f.constraints) == 1
        assert f.constraints[0].kind == "inv"

    def test_add(self):
        f = F.parse("vars x,y,z; x + y = z;")
        assert f.variables == ("x", "y", "z")
        assert f.constraints[0] == F.Add("x", "y", "z")

    def test_undeclared(self):
        with pytest.raises(F.ParseError) as e:
            F.parse("vars x; x + y = x;")
        assert "y" in str(e.value)

    def test_duplicate_declaration(self):
        with pytest.raises(F.ParseError):
            F.parse("vars x, x;")

    def test_malformed(self):
        with pytest.raises(F.ParseError):
            F.parse("vars x; x ** x = 1;")

    def test_roundtrip(self):
        f = F.parse("vars a, b, c; a + b = c; a * c = 1; b * b = 1;")
        assert F.parse(F.print_formula(f)) == f

    def test_json_roundtrip(self):
        f = F.parse("vars x, y; x * y = 1;")
        assert F.from_json(F.to_json(f)) == f
        assert F.load(F.to_json(f)) == f


class TestEvaluate:
    def test_inv_true(self):
        f = F.Formula(("x", "y"), (F.Inv("x", "y"),))
        assert F.evaluate(f, {"x": 2.0, "y": 0.5})

    def test_add_paper_instance(self):
        f = F.Formula(("x", "y", "z"), (F.Add("x", "y", "z"),))
        assert F.evaluate(f, {"x": 1.2, "y": 0.7, "z": 1.9})

    def test_range_contradiction(self):
        # x+y=z and y+z=x force z = -z, impossible in [1/2, 2].
        f = F.Formula(("x", "y", "z"), (F.Add("x", "y", "z"), F.Add("y", "z", "x")))
        assert not F.evaluate(f, {"x": 1.0, "y": 0.5, "z": 1.5})

    def test_out_of_range(self):
        f = F.Formula(("x",), ())
        assert not F.evaluate(f, {"x": 2.5})

    def test_missing(self):
        f = F.Formula(("x",), ())
        with pytest.raises(KeyError):
            F.evaluate(f, {})


class TestBruteSolve:
    def test_unique_root(self):
        f = F.Formula(("x",), (F.Inv("x", "x"),))
        a = F.brute_solve(f)
        assert a is not None and abs(a["x"] - 1.0) < 1e-6

    def test_sqrt2_solution(self):
        # x*y=1 and y+y=x  =>  2y^2 = 1.
        f = F.Formula(("x", "y"), (F.Inv("x", "y"), F.Add("y", "y", "x")))
        a = F.brute_solve(f)
        assert a is not None
        assert abs(a["y"] - math.sqrt(0.5)) < 1e-5
        assert abs(a["x"] - math.sqrt(2.0)) < 1e-5

    def test_unsat(self):
        f = F.Formula(("x", "y", "z"), (F.Add("x", "y", "z"), F.Add("y", "z", "x")))
        assert F.brute_solve(f) is None

    def test_solutions_evaluate(self):
        f = F.Formula(("a", "b", "c"), (F.Add("a", "a", "b"), F.Inv("b", "c")))
        a = F.brute_solve(f)
        assert a is not None and F.evaluate(f, a)

    def test_too_many_vars(self):
        f = F.Formula(("a", "b", "c", "d", "e"), ())
        with pytest.raises(ValueError):
            F.brute_solve(f)


@given(st.lists(st.sampled_from(["x", "y", "z"]), min_size=3, max_size=3, unique=True))
def test_printer_roundtrip_random_constraints(names):
    f = F.Formula(tuple(names), (F.Add(*names), F.Inv(names[0], names[2])))
    assert F.parse(F.print_formula(f)) == f
