import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stepcross.blocks import SmoothParams, compositions, hyperbolic_cross
from stepcross.extremal import dirichlet_shell
from stepcross.poly import (AliasingError, GridBudgetError, GridSpec, TrigPoly,
                            blocks_of, eval_grid, mixed_difference,
                            project_cross, read_jsonl, sharp_block, write_jsonl)

coeff_st = st.complex_numbers(min_magnitude=1e-6, max_magnitude=10,
                              allow_nan=False, allow_infinity=False)


def random_poly_st(d):
    freq = st.tuples(*[st.integers(-40, 40).filter(lambda x: x != 0)] * d)
    return st.dictionaries(freq, coeff_st, min_size=1, max_size=12).map(
        lambda c: TrigPoly(d, c))


class TestTrigPolyBasics:
    def test_canonical_drops_tiny(self):
        f = TrigPoly(1, {(1,): 1e-31, (2,): 1.0})
        assert f.coeffs == {(2,): 1.0}

    def test_zero_after_cancellation(self):
        f = TrigPoly(2, {(1, 2): 3.0})
        assert (f - f).is_zero()

    def test_dimension_checked(self):
        with pytest.raises(ValueError):
            TrigPoly(2, {(1,): 1.0})

    def test_immutable(self):
        f = TrigPoly.exponential((1,))
        with pytest.raises(AttributeError):
            f.d = 3

    def test_degree_and_mean_zero(self):
        f = TrigPoly(2, {(3, -5): 1.0, (-7, 1): 2.0})
        assert f.degree() == (7, 5)
        assert f.is_mean_zero()
        assert not TrigPoly(2, {(0, 1): 1.0}).is_mean_zero()

    def test_scalar_algebra(self):
        f = TrigPoly(1, {(1,): 2.0, (3,): -1.0})
        assert (0.5 * f).coeffs == {(1,): 1.0, (3,): -0.5}
        assert (-f + f).is_zero()

    def test_evaluate_matches_definition(self):
        f = TrigPoly(2, {(1, 2): 1 + 1j, (-3, 1): 2.0})
        x = (0.3, 1.1)
        want = (1 + 1j) * np.exp(1j * (x[0] + 2 * x[1])) + 2 * np.exp(1j * (-3 * x[0] + x[1]))
        assert f.evaluate(x) == pytest.approx(want, rel=1e-12)


class TestEvalGrid:
    def test_single_exponential_quarter_points(self):
        vals = eval_grid(TrigPoly.exponential((1,)), (4,))
        assert np.allclose(vals, [1, 1j, -1, -1j], atol=1e-14)

    def test_constant(self):
        vals = eval_grid(TrigPoly(1, {(0,): 1.0}), (8,))
        assert np.allclose(vals, np.ones(8), atol=1e-14)

    def test_shell_poly_peak_at_origin(self):
        # every coefficient is 1, so f(0) equals the term count and is the max
        f = dirichlet_shell(5, 2)
        vals = eval_grid(f, GridSpec())
        assert vals[0, 0] == pytest.approx(f.nnz, rel=1e-12)
        assert np.max(np.abs(vals)) == pytest.approx(f.nnz, rel=1e-12)

    def test_matches_direct_evaluation(self):
        f = TrigPoly(2, {(1, 2): 1 + 2j, (-3, 4): -0.5, (2, -1): 0.25j})
        dims = (16, 16)
        vals = eval_grid(f, dims)
        for idx in ((0, 0), (3, 7), (10, 1)):
            x = (2 * math.pi * idx[0] / dims[0], 2 * math.pi * idx[1] / dims[1])
            assert vals[idx] == pytest.approx(f.evaluate(x), abs=1e-12)

    def test_aliasing_rejected(self):
        with pytest.raises(AliasingError):
            eval_grid(TrigPoly.exponential((2,)), (4,))

    def test_budget_guard(self):
        f = TrigPoly.exponential((1000, 1000))
        with pytest.raises(GridBudgetError):
            eval_grid(f, GridSpec(max_points=1000))

    @settings(max_examples=30, deadline=None)
    @given(random_poly_st(2))
    def test_parseval_on_grid(self, f):
        vals = eval_grid(f, GridSpec())
        quad = float(np.mean(np.abs(vals) ** 2))
        exact = sum(abs(c) ** 2 for c in f.coeffs.values())
        assert quad == pytest.approx(exact, rel=1e-12)


class TestSharpBlocks:
    def test_example_keep(self):
        f = TrigPoly(1, {(0,): 1.0, (1,): 1.0})
        assert sharp_block(f, (1,)) == TrigPoly.exponential((1,))

    def test_example_drop(self):
        assert sharp_block(TrigPoly.exponential((3,)), (1,)).is_zero()

    def test_idempotent_and_orthogonal(self):
        f = TrigPoly(1, {(1,): 1.0, (2,): 2.0, (5,): 3.0})
        b = sharp_block(f, (2,))
        assert sharp_block(b, (2,)) == b
        assert sharp_block(b, (3,)).is_zero()

    @settings(max_examples=40, deadline=None)
    @given(random_poly_st(2), st.integers(1, 6), st.integers(1, 6))
    def test_linear_exact(self, f, s1, s2):
        s = (s1, s2)
        g = 2.5j * f
        assert sharp_block(g, s) == 2.5j * sharp_block(f, s)
        assert sharp_block(f + g, s) == sharp_block(f, s) + sharp_block(g, s)

    @settings(max_examples=40, deadline=None)
    @given(random_poly_st(2))
    def test_blocks_partition_exactly(self, f):
        total = TrigPoly.zero(2)
        for _, comp in blocks_of(f).items():
            total = total + comp
        assert total == f  # disjoint supports, so addition is exact

    def test_blocks_of_rejects_zero_component(self):
        with pytest.raises(ValueError, match="zero component"):
            blocks_of(TrigPoly(2, {(0, 1): 1.0}))


class TestProjectCross:
    def test_fixed_point(self):
        params = SmoothParams((1.0, 1.0))
        q = hyperbolic_cross(4, params)
        f = TrigPoly(2, {(1, 1): 1.0, (-2, 1): 2.0})
        assert project_cross(f, q) == f

    def test_membership_example(self):
        # (1,1) lies in block (1,1); (8,8) in block (4,4) with (s,1)=8 >= 4
        params = SmoothParams((1.0, 1.0))
        q = hyperbolic_cross(4, params)
        f = TrigPoly(2, {(1, 1): 1.0, (8, 8): 1.0})
        assert project_cross(f, q) == TrigPoly(2, {(1, 1): 1.0})

    def test_shell_annihilation(self):
        params = SmoothParams((1.0, 1.0))
        for n in (3, 5):
            g = dirichlet_shell(n, 2)
            assert project_cross(g, hyperbolic_cross(n, params, "ones")).is_zero()

    @settings(max_examples=30, deadline=None)
    @given(random_poly_st(2))
    def test_idempotent(self, f):
        q = hyperbolic_cross(5, SmoothParams((1.0, 1.5)))
        p = project_cross(f, q)
        assert project_cross(p, q) == p


class TestMixedDifference:
    def test_first_order_factor(self):
        h = 0.7
        out = mixed_difference(TrigPoly.exponential((1,)), (1,), (h,))
        assert out.coeffs[(1,)] == pytest.approx(np.exp(1j * h) - 1, rel=1e-14)

    def test_second_order_at_pi(self):
        out = mixed_difference(TrigPoly.exponential((1,)), (2,), (math.pi,))
        assert out.coeffs[(1,)] == pytest.approx(4.0, abs=1e-12)

    def test_zero_step_annihilates(self):
        f = TrigPoly(2, {(1, 2): 1.0, (3, 4): 2.0})
        assert mixed_difference(f, (1, 1), (0.0, 0.5)).is_zero()

    def test_order_validated(self):
        with pytest.raises(ValueError):
            mixed_difference(TrigPoly.exponential((1,)), (0,), (1.0,))

    @settings(max_examples=30, deadline=None)
    @given(random_poly_st(1), st.floats(0.01, 6.0))
    def test_linear(self, f, h):
        g = mixed_difference(f + f, (1,), (h,))
        assert g.allclose(mixed_difference(f, (1,), (h,)) * 2.0, tol=1e-12)

    def test_matches_pointwise_difference(self):
        # oracle: evaluate f(x+h) - f(x) directly
        f = TrigPoly(1, {(1,): 1.0, (4,): -2.0j})
        h = 0.37
        g = mixed_difference(f, (1,), (h,))
        for x in (0.0, 1.2):
            want = f.evaluate((x + h,)) - f.evaluate((x,))
            assert g.evaluate((x,)) == pytest.approx(want, rel=1e-12)


def test_jsonl_roundtrip(tmp_path):
    f = TrigPoly(2, {(1, -3): 0.5 + 0.25j, (2, 2): -1.0})
    path = tmp_path / "poly.jsonl"
    write_jsonl(path, f)
    assert read_jsonl(path) == f
    header = path.read_text().splitlines()[0]
    assert '"d": 2' in header
