import numpy as np
import pytest
from conftest import ALL_ONES_2, CHAIN, CYCLE_3, ZERO_DIAG_3, mat, matrices, random_matrices
from hypothesis import given, settings
from hypothesis import strategies as st
from oracles import c_matrix_loops, cells_of, rectangle_closed

from dgdual import (
    c_matrix,
    canonical_check,
    canonicalize,
    cyclomatic_number,
    delta_n,
    minor,
    quasicanonical_check,
    quasinormalize,
    replay,
    s_matrix,
)
from dgdual.errors import MalformedInput, NotARelation, TraceMismatch
from dgdual.normal_form import Step, TransformTrace, format_trace, parse_trace

# s = 6 at (q2, q3); row q2 minimum 5, column q3 minimum 4
EXCESS_ANCHOR = [[0, 0, 1], [1, 1, 1], [1, 1, 1]]


class TestSMatrix:
    def test_zero_diag(self):
        s = s_matrix(mat(ZERO_DIAG_3))
        assert s.tolist() == [[0, 4, 4], [4, 0, 4], [4, 4, 0]]

    def test_chain(self):
        assert s_matrix(mat(CHAIN))[0, 1] == 2

    def test_zero(self):
        assert not s_matrix(mat(np.zeros((3, 3)))).any()


class TestCMatrix:
    def test_excess_anchor(self):
        m = mat(EXCESS_ANCHOR)
        s = s_matrix(m)
        assert s[1, 2] == 6
        assert min(v for v in s[1] if v) == 5
        assert min(v for v in s[:, 2] if v) == 4
        assert c_matrix(m)[1, 2] == 3

    def test_dummy_is_clean(self):
        assert not c_matrix(mat(ZERO_DIAG_3)).any()

    def test_upper_triangle(self):
        # s = [[3,4],[0,3]] -> only the corner carries excess
        assert c_matrix(mat([[1, 1], [0, 1]])).tolist() == [[0, 2], [0, 0]]

    def test_minor_example_agrees(self):
        assert c_matrix(minor(mat(ZERO_DIAG_3), 3, 1)).tolist() == [[0, 2], [0, 0]]

    @given(matrices(max_n=7))
    def test_matches_loop_oracle(self, m):
        assert c_matrix(m).tolist() == c_matrix_loops(cells_of(m))

    @given(st.lists(st.tuples(st.integers(1, 3), st.integers(1, 3)), min_size=1, max_size=4),
           st.randoms(use_true_random=False))
    def test_block_unions_are_clean(self, shapes, rnd):
        # disjoint all-ones k x p blocks placed on shuffled rows/columns
        n = sum(max(k, p) for k, p in shapes)
        rows = list(range(n))
        cols = list(range(n))
        rnd.shuffle(rows)
        rnd.shuffle(cols)
        cells = np.zeros((n, n), dtype=int)
        for k, p in shapes:
            r, rows = rows[:k], rows[k:]
            c, cols = cols[:p], cols[p:]
            cells[np.ix_(r, c)] = 1
        m = mat(cells)
        assert not c_matrix(m).any()
        assert quasicanonical_check(m).passed


class TestQuasicanonicalCheck:
    def test_dummy_fails_on_minor(self):
        report = quasicanonical_check(mat(ZERO_DIAG_3))
        assert not report.passed
        assert all(w.kind == "minor-c" for w in report.violations)
        w = [w for w in report.violations if w.minor_of == ("q3", "q1")]
        assert len(w) == 1
        assert w[0].cell == ("q1", "q3")
        assert w[0].value == 2

    @pytest.mark.parametrize("n", [2, 3, 4, 5])
    def test_all_ones_pass(self, n):
        assert quasicanonical_check(mat(np.ones((n, n), dtype=int))).passed

    def test_chain_passes(self):
        report = quasicanonical_check(mat(CHAIN))
        assert report.passed and report.violations == ()

    def test_one_by_one(self):
        assert quasicanonical_check(mat([[0]])).passed
        # the minor of a lone loop is empty
        assert quasicanonical_check(mat([[1]])).passed

    def test_full_matrix_witness(self):
        report = quasicanonical_check(mat(EXCESS_ANCHOR))
        full = [w for w in report.violations if w.kind == "full-matrix-c"]
        assert ("q2", "q3") in [w.cell for w in full]

    @given(matrices(max_n=5))
    def test_witnesses_sit_on_ones(self, m):
        for w in quasicanonical_check(m).violations:
            if w.minor_of is None:
                assert m.get(*w.cell) == 1
            else:
                assert m.get(*w.minor_of) == 1
                assert w.cell[0] != w.minor_of[0] and w.cell[1] != w.minor_of[1]
                assert m.get(*w.cell) == 1

    @settings(max_examples=300)
    @given(matrices(min_n=2, max_n=5))
    def test_agrees_with_rectangle_closure(self, m):
        assert quasicanonical_check(m).passed == rectangle_closed(cells_of(m))

    def test_witness_order_is_row_major(self):
        report = quasicanonical_check(mat(ZERO_DIAG_3))
        keys = [w.minor_of for w in report.violations]
        assert keys == sorted(keys, key=lambda c: (int(c[0][1:]), int(c[1][1:])))


class TestCanonicalCheck:
    def test_all_ones_2(self):
        report = canonical_check(mat(ALL_ONES_2))
        assert not report.passed
        assert [w.kind for w in report.violations] == ["complicated-block"] * 4

    def test_cycle_passes(self):
        assert canonical_check(mat(CYCLE_3)).passed

    def test_chain_passes(self):
        assert canonical_check(mat(CHAIN)).passed

    @given(matrices(max_n=6))
    def test_canonical_implies_quasicanonical(self, m):
        if canonical_check(m).passed:
            assert quasicanonical_check(m).passed


class TestDeltaN:
    def test_zero_diag(self):
        m = mat(ZERO_DIAG_3)
        out, step = delta_n(m, "q1", "q2")
        assert out.labels == ("q1", "q2", "q3", "t1")
        assert out.get("q1", "q2") == 0
        assert out.get("q1", "t1") == 1 and out.get("t1", "q2") == 1
        assert out.ones == m.ones + 1
        assert out.cells[:3, :3].sum() == 5
        assert step == Step("subdivide", "q1", "q2", "t1")

    def test_loop_becomes_contour(self):
        out, _ = delta_n(mat([[1]]), "q1", "q1")
        assert out.tolist() == [[0, 1], [1, 0]]

    def test_not_a_relation(self):
        with pytest.raises(NotARelation):
            delta_n(mat(CHAIN), "q2", "q1")

    def test_label_clash(self):
        with pytest.raises(MalformedInput):
            delta_n(mat(CHAIN), "q1", "q2", new_label="q2")

    @settings(max_examples=500)
    @given(matrices(max_n=8), st.data())
    def test_preserves_cyclomatic_number(self, m, data):
        ones = m.nonzero()
        if not ones:
            return
        i, j = data.draw(st.sampled_from(ones))
        out, _ = delta_n(m, m.labels[i], m.labels[j])
        assert cyclomatic_number(out) == cyclomatic_number(m)


class TestQuasinormalize:
    def test_zero_diag(self):
        m = mat(ZERO_DIAG_3)
        out, trace = quasinormalize(m)
        assert quasicanonical_check(out).passed
        assert cyclomatic_number(out) == cyclomatic_number(m) == 4
        assert replay(m, trace) == out
        assert trace.subdivisions <= 8

    def test_chain_unchanged(self):
        out, trace = quasinormalize(mat(CHAIN))
        assert out == mat(CHAIN) and len(trace) == 0

    def test_all_ones_unchanged(self):
        out, trace = quasinormalize(mat(ALL_ONES_2))
        assert out == mat(ALL_ONES_2) and len(trace) == 0

    def test_lone_loop_unchanged(self):
        out, trace = quasinormalize(mat([[1]]))
        assert out.tolist() == [[1]] and len(trace) == 0

    @settings(max_examples=120, deadline=None)
    @given(matrices(max_n=7))
    def test_properties(self, m):
        out, trace = quasinormalize(m)
        assert quasicanonical_check(out).passed
        assert replay(m, trace) == out
        assert trace.subdivisions <= m.n * m.n - 1
        assert cyclomatic_number(out) == cyclomatic_number(m)
        new = trace.new_labels
        assert len(set(new)) == len(new) and not set(new) & set(m.labels)
        again, trace2 = quasinormalize(out)
        assert again == out and len(trace2) == 0

    def test_scan_order_irrelevant_for_correctness(self):
        for m in random_matrices(60, 7, seed=11):
            a, _ = quasinormalize(m, order="row")
            b, _ = quasinormalize(m, order="column")
            assert quasicanonical_check(a).passed and quasicanonical_check(b).passed
            assert cyclomatic_number(a) == cyclomatic_number(b) == cyclomatic_number(m)

    def test_deterministic(self):
        m = mat(ZERO_DIAG_3)
        assert quasinormalize(m) == quasinormalize(m)


class TestCanonicalize:
    def test_all_ones_2(self):
        m = mat(ALL_ONES_2)
        out, trace = canonicalize(m)
        assert canonical_check(out).passed
        assert cyclomatic_number(out) == cyclomatic_number(m) == 3
        assert replay(m, trace) == out

    def test_cycle_unchanged(self):
        out, trace = canonicalize(mat(CYCLE_3))
        assert out == mat(CYCLE_3) and len(trace) == 0

    def test_chain_unchanged(self):
        out, trace = canonicalize(mat(CHAIN))
        assert out == mat(CHAIN) and len(trace) == 0

    @settings(max_examples=80, deadline=None)
    @given(matrices(max_n=7), st.sampled_from(["row", "column"]))
    def test_properties(self, m, order):
        out, trace = canonicalize(m, order=order)
        assert canonical_check(out).passed
        assert replay(m, trace) == out
        assert cyclomatic_number(out) == cyclomatic_number(m)
        assert trace.subdivisions <= max(m.n * m.n, 1)


class TestTraceFormat:
    def test_round_trip(self):
        m = mat(ZERO_DIAG_3)
        _, trace = quasinormalize(m)
        text = format_trace(trace)
        assert text.startswith(b"trace v1\nS ")
        assert parse_trace(text, m.labels) == trace

    def test_contract_line(self):
        tr = parse_trace("trace v1\nC a c b\n")
        assert tr.steps == (Step("contract", "a", "c", "b"),)

    @pytest.mark.parametrize("text", ["", "trace v2\n", "trace v1\nS a b\n", "trace v1\nX a b c\n"])
    def test_malformed(self, text):
        with pytest.raises(MalformedInput):
            parse_trace(text)

    def test_replay_mismatch(self):
        bad = TransformTrace((Step("subdivide", "q2", "q1", "t1"),), ("q1", "q2"))
        with pytest.raises(TraceMismatch):
            replay(mat(CHAIN), bad)
