import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from cport.errors import DomainError, NullVectorError, ValidationError
from cport.metrics import (
    Bundle,
    CPortVector,
    InnovationMatrix,
    StandardsLedger,
    TrlStage,
    WeightKind,
    WeightVector,
    angle_degrees,
    cport_vector,
    normalize_weights,
    rank_ports,
    squared_share,
    standardization_merit,
    total_investment,
    trl_stage,
)
from table1 import BIENNIA_ANGLE, FIRST_BIENNIUM, SECOND_BIENNIUM

A4 = WeightKind.BUSINESS_SPECIFICITY
W3 = WeightKind.INNOVATION_REWARD
UNIFORM_A = WeightVector.uniform(A4)
UNIFORM_W = WeightVector.uniform(W3)

costs = st.floats(min_value=0.0, max_value=1e4, allow_nan=False, allow_infinity=False)
matrices = arrays(np.float64, (4, 3), elements=costs)
positive = st.floats(min_value=1e-3, max_value=1e3, allow_nan=False)


def row_matrix(row_sums):
    """Put each bundle's total in the Demo column."""
    cells = np.zeros((4, 3))
    cells[:, 1] = row_sums
    return InnovationMatrix(cells)


@pytest.mark.parametrize(
    "trl,stage",
    [(1, TrlStage.PROTOTYPE), (5, TrlStage.PROTOTYPE), (6, TrlStage.DEMO),
     (7, TrlStage.DEMO), (8, TrlStage.RELEASED), (9, TrlStage.RELEASED)],
)
def test_trl_stage_buckets(trl, stage):
    assert trl_stage(trl) is stage


@pytest.mark.parametrize("bad", [0, 10, -1, 5.0, True, "5"])
def test_trl_stage_rejects(bad):
    with pytest.raises(DomainError, match=str(bad) if not isinstance(bad, bool) else "True"):
        trl_stage(bad)


def test_enum_orders():
    assert [b.value for b in Bundle] == ["Nv", "Fr", "Mb", "St"]
    assert [s.value for s in TrlStage] == ["P", "D", "R"]
    assert [b.letter for b in Bundle] == ["A", "B", "C", "D"]
    assert Bundle.from_letter("C") is Bundle.MOBILITY
    with pytest.raises(DomainError):
        Bundle.from_letter("")


class TestStandardizationMerit:
    def test_full(self):
        assert standardization_merit(StandardsLedger({"s1", "s2"}, {"s1", "s2"})) == 1.0

    def test_none_adopted(self):
        assert standardization_merit(StandardsLedger({"s1", "s2"}, set())) == 0.0

    def test_three_of_four(self):
        ledger = StandardsLedger({"s1", "s2", "s3", "s4"}, {"s1", "s2", "s3"})
        assert standardization_merit(ledger) == 0.75

    def test_empty_applicable_is_zero(self):
        assert standardization_merit(StandardsLedger(set(), set())) == 0.0

    def test_extraneous_adopted_listed(self):
        with pytest.raises(ValidationError, match="s9"):
            StandardsLedger({"s1"}, {"s1", "s9"})


class TestNormalizeWeights:
    def test_uniform_four(self):
        assert normalize_weights([1, 1, 1, 1], A4).tolist() == [2.0, 2.0, 2.0, 2.0]

    def test_uniform_three(self):
        np.testing.assert_allclose(normalize_weights([1, 1, 1], W3).values, [math.sqrt(3)] * 3, rtol=1e-12)

    def test_ratio_example(self):
        v = normalize_weights([1, 2, 2, 2], A4).values
        k = math.sqrt(1 + 3 * 0.25)
        np.testing.assert_allclose(v, [k, 2 * k, 2 * k, 2 * k], rtol=1e-12)
        assert v[1] / v[0] == pytest.approx(2.0, rel=1e-12)
        assert np.sum(1 / v**2) == pytest.approx(1.0, rel=1e-12)

    @pytest.mark.parametrize("raw,kind", [([1, 0, 1, 1], A4), ([1, -2, 1], W3), ([1, 1, 1], A4), ([1, 1, 1, 1], W3)])
    def test_rejects(self, raw, kind):
        with pytest.raises(DomainError):
            normalize_weights(raw, kind)

    def test_weight_vector_enforces_constraint(self):
        with pytest.raises(DomainError, match="normalize_weights"):
            WeightVector(np.array([1.0, 1.0, 1.0, 1.0]), A4)

    @given(st.lists(positive, min_size=4, max_size=4))
    def test_closure_and_ratios(self, raw):
        v = normalize_weights(raw, A4).values
        assert math.isclose(float(np.sum(1 / v**2)), 1.0, rel_tol=1e-9)
        for i in range(4):
            for j in range(4):
                assert math.isclose(v[i] / v[j], raw[i] / raw[j], rel_tol=1e-9)


class TestCPortVector:
    def test_rho_zero_is_null(self):
        c = InnovationMatrix(np.full((4, 3), 5.0))
        v = cport_vector(0.0, UNIFORM_A, c, UNIFORM_W)
        assert v.is_null and v.components.tolist() == [0.0] * 4

    def test_zero_matrix_is_null(self):
        assert cport_vector(1.0, UNIFORM_A, InnovationMatrix.zeros(), UNIFORM_W).is_null

    def test_livorno_first_biennium(self):
        sums = np.array(FIRST_BIENNIUM) / 1000
        v = cport_vector(1.0, UNIFORM_A, row_matrix(sums), UNIFORM_W)
        np.testing.assert_allclose(v.components, 2 * math.sqrt(3) * sums, rtol=1e-9)

    def test_entrywise_formula(self):
        # brute-force double loop over the definition
        rng = np.random.default_rng(7)
        c = InnovationMatrix(rng.uniform(0, 3, (4, 3)))
        a = normalize_weights([1, 2, 3, 4], A4)
        w = normalize_weights([3, 2, 1], W3)
        expected = [
            0.6 * sum(a.values[i] * c.cells[i, j] * w.values[j] for j in range(3)) for i in range(4)
        ]
        np.testing.assert_allclose(cport_vector(0.6, a, c, w).components, expected, rtol=1e-12)

    def test_rejects_bad_rho_and_swapped_weights(self):
        c = InnovationMatrix.zeros()
        with pytest.raises(DomainError):
            cport_vector(1.5, UNIFORM_A, c, UNIFORM_W)
        with pytest.raises(DomainError):
            cport_vector(1.0, UNIFORM_W, c, UNIFORM_A)

    def test_matrix_rejects_negative_and_shape(self):
        cells = np.ones((4, 3))
        cells[2, 1] = -1
        with pytest.raises(DomainError, match="Mb/D"):
            InnovationMatrix(cells)
        with pytest.raises(DomainError):
            InnovationMatrix(np.ones((3, 4)))

    def test_immutable(self):
        c = InnovationMatrix(np.ones((4, 3)))
        with pytest.raises(ValueError):
            c.cells[0, 0] = 3.0

    @settings(max_examples=200)
    @given(matrices, st.floats(min_value=1e-3, max_value=1e3))
    def test_positive_homogeneity(self, cells, lam):
        c = InnovationMatrix(cells)
        base = cport_vector(0.8, UNIFORM_A, c, UNIFORM_W)
        scaled = cport_vector(0.8, UNIFORM_A, c.scaled(lam), UNIFORM_W)
        np.testing.assert_allclose(scaled.components, lam * base.components, rtol=1e-9, atol=1e-300)
        assert scaled.magnitude == pytest.approx(lam * base.magnitude, rel=1e-9, abs=1e-300)

    @given(matrices, st.lists(positive, min_size=4, max_size=4), st.lists(positive, min_size=3, max_size=3))
    def test_null_standards_nullity(self, cells, a_raw, w_raw):
        v = cport_vector(0.0, normalize_weights(a_raw, A4), InnovationMatrix(cells), normalize_weights(w_raw, W3))
        assert not np.any(v.components)

    @settings(max_examples=200)
    @given(arrays(np.float64, 4, elements=st.floats(min_value=0.01, max_value=1e4)), st.integers(0, 2**32 - 1))
    def test_uniform_w_collapse(self, row_sums, seed):
        rng = np.random.default_rng(seed)
        split = rng.dirichlet(np.ones(3), size=4) * row_sums[:, None]
        v = cport_vector(1.0, UNIFORM_A, InnovationMatrix(split), UNIFORM_W)
        np.testing.assert_allclose(v.components / v.magnitude, row_sums / np.linalg.norm(row_sums), rtol=1e-9, atol=1e-12)


class TestTotalInvestment:
    def test_ones(self):
        assert total_investment(InnovationMatrix(np.ones((4, 3)))) == pytest.approx(12.0, rel=1e-12)

    def test_zero(self):
        assert total_investment(InnovationMatrix.zeros()) == 0.0

    def test_first_biennium(self):
        assert total_investment(row_matrix(np.array(FIRST_BIENNIUM) / 1000)) == pytest.approx(6.223, rel=1e-12)

    def test_negative_raw_array(self):
        with pytest.raises(DomainError, match="non-negative"):
            total_investment(-np.ones((4, 3)))

    @given(matrices)
    def test_trace_identity(self, cells):
        assert math.isclose(total_investment(InnovationMatrix(cells)), math.fsum(cells.ravel()), rel_tol=1e-12, abs_tol=1e-300)


class TestAngle:
    def test_self(self):
        assert angle_degrees([1.0, 2.0, 3.0, 4.0], [1.0, 2.0, 3.0, 4.0]) == 0.0

    def test_orthogonal(self):
        assert angle_degrees([1, 0, 0, 0], [0, 1, 0, 0]) == pytest.approx(90.0, rel=1e-12)

    def test_livorno_biennia(self):
        v1 = cport_vector(0.5, UNIFORM_A, row_matrix(np.array(FIRST_BIENNIUM) / 1000), UNIFORM_W)
        v2 = cport_vector(0.5, UNIFORM_A, row_matrix(np.array(SECOND_BIENNIUM) / 1000), UNIFORM_W)
        assert angle_degrees(v1, v2) == pytest.approx(BIENNIA_ANGLE, rel=1e-9)

    def test_null_raises(self):
        with pytest.raises(NullVectorError, match="angle undefined for null C-Port Vector"):
            angle_degrees([0, 0, 0, 0], [1, 0, 0, 0])

    def test_clamp_near_parallel(self):
        v = np.array([0.1, 0.2, 0.3, 1e-9])
        assert not math.isnan(angle_degrees(v, v * 3.000000000001))

    @given(
        arrays(np.float64, 4, elements=st.floats(min_value=0, max_value=1e6)),
        arrays(np.float64, 4, elements=st.floats(min_value=0, max_value=1e6)),
    )
    def test_axioms(self, x, y):
        if not np.any(x) or not np.any(y):
            with pytest.raises(NullVectorError):
                angle_degrees(x, y)
            return
        a = angle_degrees(x, y)
        assert 0.0 <= a <= 180.0
        assert a == angle_degrees(y, x)
        assert angle_degrees(x, x) == pytest.approx(0.0, abs=1e-5)

    @given(matrices, matrices, st.floats(min_value=1e-3, max_value=1.0), st.floats(min_value=1e-3, max_value=1.0))
    def test_rho_independence(self, c1, c2, r1, r2):
        m1, m2 = InnovationMatrix(c1), InnovationMatrix(c2)
        if not np.any(c1) or not np.any(c2):
            return
        base = [cport_vector(1.0, UNIFORM_A, m, UNIFORM_W) for m in (m1, m2)]
        scaled = [cport_vector(r, UNIFORM_A, m, UNIFORM_W) for r, m in ((r1, m1), (r2, m2))]
        # below the normal float range rho scaling itself loses digits or underflows to zero
        assume(all(
            not v.is_null and np.all((v.components == 0) | (v.components > 1e-300)) for v in base + scaled
        ))
        ref = angle_degrees(*base)
        got = angle_degrees(*scaled)
        # arccos is ill-conditioned near 0 deg, hence the absolute floor
        assert math.isclose(got, ref, rel_tol=1e-9, abs_tol=1e-5)


    @pytest.mark.parametrize("scale", [1e-250, 1e-160, 1e160, 1e250])
    def test_extreme_scales(self, scale):
        x, y = np.array([1.0, 2.0, 0.0, 0.0]), np.array([2.0, 1.0, 0.0, 0.0])
        assert angle_degrees(x * scale, y * scale) == pytest.approx(angle_degrees(x, y), rel=1e-12)
        assert CPortVector(x * scale).magnitude == pytest.approx(5**0.5 * scale, rel=1e-12)
        np.testing.assert_allclose(squared_share(x * scale), [0.2, 0.8, 0, 0], rtol=1e-12)


class TestSquaredShare:
    def test_uniform(self):
        np.testing.assert_allclose(squared_share([1, 1, 1, 1]), [0.25] * 4, rtol=1e-12)

    def test_table2_rows(self):
        assert [round(s, 2) for s in squared_share(FIRST_BIENNIUM)] == [0.01, 0.09, 0.04, 0.86]
        assert [round(s, 2) for s in squared_share(SECOND_BIENNIUM)] == [0.37, 0.01, 0.00, 0.62]

    def test_null(self):
        with pytest.raises(NullVectorError):
            squared_share(CPortVector(np.zeros(4)))

    @given(arrays(np.float64, 4, elements=st.floats(min_value=1e-6, max_value=1e6)))
    def test_sums_to_one(self, x):
        assert math.isclose(float(np.sum(squared_share(x))), 1.0, rel_tol=1e-12)


class TestRankPorts:
    def test_bigger_first(self):
        ranked = rank_ports([("A", CPortVector([1, 0, 0, 0])), ("B", CPortVector([2, 0, 0, 0]))])
        assert [(r.rank, r.port_id) for r in ranked] == [(1, "B"), (2, "A")]

    def test_single(self):
        assert rank_ports([("only", CPortVector([0, 1, 0, 0]))])[0].rank == 1

    def test_tie_break_by_id(self):
        ranked = rank_ports([("z", CPortVector([0, 1, 0, 0])), ("a", CPortVector([1, 0, 0, 0]))])
        assert [r.port_id for r in ranked] == ["a", "z"]

    @given(
        st.lists(arrays(np.float64, 4, elements=st.floats(min_value=0, max_value=1e6)), min_size=1, max_size=8),
        st.integers(-20, 20),
    )
    def test_scale_invariance(self, vecs, exponent):
        # power-of-two factors scale exactly, so near-ties cannot collapse
        lam = 2.0**exponent
        ports = [(f"p{i}", CPortVector(v)) for i, v in enumerate(vecs)]
        scaled = [(pid, CPortVector(v.components * lam)) for pid, v in ports]
        assert [r.port_id for r in rank_ports(ports)] == [r.port_id for r in rank_ports(scaled)]
