import random
from itertools import combinations

import pytest
from hypothesis import given, strategies as st

from gridpilot import analysis
from gridpilot.analysis import (
    DegenerateSpec,
    DegenerateWorkbook,
    ExactModeUnavailable,
    blank_jump_time,
    coverage,
    errors_found,
    marks_from_log,
    rank_sum_test,
    ref_nav_time,
    scan_region_stats,
)
from gridpilot.session import AuditSession
from gridpilot.tcat import ActivityEvent, EventKind, EventLog, Technology
from gridpilot.workbook import CellAddress, number, text

from conftest import single_sheet_workbook


def ten_cell_workbook():
    return single_sheet_workbook({f"A{r}": number(str(r)) for r in range(1, 11)})


def visit_log(visit_spec, technology=Technology.IVOICE):
    """Log from (addr, enter_t, leave_t) triples."""
    log = EventLog("t", technology)
    for addr, enter_t, leave_t in visit_spec:
        log.record(ActivityEvent(enter_t, EventKind.CELL_ENTER, addr))
        log.record(ActivityEvent(leave_t, EventKind.CELL_LEAVE, addr))
    return log


def a(row, col=1, sheet="Sheet1"):
    return CellAddress(sheet, col, row)


class TestCoverage:
    def test_full_coverage(self):
        wb = ten_cell_workbook()
        log = visit_log([(a(r), (r - 1) * 2000, (r - 1) * 2000 + 1000) for r in range(1, 11)])
        assert coverage(log, wb) == 100.0

    def test_exactly_300ms_not_covered(self):
        wb = ten_cell_workbook()
        log = visit_log([(a(1), 0, 300)])
        assert coverage(log, wb) == 0.0
        assert coverage(visit_log([(a(1), 0, 301)]), wb) == 10.0

    def test_text_cells_do_not_count(self):
        wb = single_sheet_workbook({"A1": number("1"), "A2": text("note")})
        log = visit_log([(a(1), 0, 1000), (a(2), 1000, 9000)])
        assert coverage(log, wb) == 100.0  # A2 ineligible, so 1/1

    def test_degenerate_workbook(self):
        wb = single_sheet_workbook({"A1": text("only text")})
        with pytest.raises(DegenerateWorkbook):
            coverage(visit_log([]), wb)

    def test_cumulative_mode_differs(self):
        wb = ten_cell_workbook()
        spec = [(a(1), 0, 200), (a(2), 200, 400), (a(1), 400, 600)]
        assert coverage(visit_log(spec), wb) == 0.0
        assert coverage(visit_log(spec), wb, cumulative=True) == 10.0

    def test_matches_bruteforce_on_random_logs(self):
        rng = random.Random(7)
        wb = ten_cell_workbook()
        for _ in range(150):
            t = 0
            spec = []
            for _ in range(rng.randint(0, 25)):
                row = rng.randint(1, 12)  # may visit ineligible empty cells
                dwell = rng.choice([0, 100, 299, 300, 301, 1000])
                spec.append((a(row), t, t + dwell))
                t += dwell + rng.randint(0, 50)
            addrs = {addr for addr, _, _ in spec}
            log = visit_log(spec)
            # oracle: raw per-cell max over the triple list
            eligible = {a(r) for r in range(1, 11)}
            covered = {
                addr
                for addr in addrs
                if addr in eligible
                and max(lv - en for ad, en, lv in spec if ad == addr) > 300
            }
            assert coverage(log, wb) == pytest.approx(100.0 * len(covered) / 10)


class TestErrorsFound:
    def test_all_twelve(self):
        seeded = {a(r) for r in range(1, 13)}
        result = errors_found(set(seeded), seeded)
        assert result.pct == 100.0 and result.false_marks == 0

    def test_no_marks(self):
        assert errors_found(set(), {a(1)}).pct == 0.0

    def test_partial_with_false_marks(self):
        seeded = {a(r) for r in range(1, 13)}
        marks = {a(r) for r in range(1, 8)} | {a(50), a(51), a(52)}
        result = errors_found(marks, seeded)
        assert result.pct == pytest.approx(58.33, abs=0.01)
        assert result.hits == 7 and result.false_marks == 3

    def test_empty_seeded_rejected(self):
        with pytest.raises(DegenerateSpec):
            errors_found(set(), set())

    def test_marks_from_log_respects_unmark(self):
        log = EventLog("t", Technology.IVOICE)
        log.record(ActivityEvent(0, EventKind.MARK_ERROR, a(1)))
        log.record(ActivityEvent(1, EventKind.MARK_ERROR, a(2)))
        log.record(ActivityEvent(2, EventKind.UNMARK_ERROR, a(1)))
        assert marks_from_log(log) == {a(2)}


def ivoice_scan_log(regions=4, cells=5, dwell=1000):
    """Engine-generated log: `regions` scans of `cells` advances each."""
    wb = single_sheet_workbook({f"A{r}": number(str(r)) for r in range(1, 60)})
    s = AuditSession(wb, dwell_ms=dwell)
    t = 0
    for _ in range(regions):
        s.issue("scan down", t)
        t += dwell * cells
        s.tick(t)
        t += 500
        s.issue("stop", t)
        t += 2000
    s.end(t)
    return s.log


class TestScanRegions:
    def test_ivoice_mean_matches_dwell(self):
        stats = scan_region_stats(ivoice_scan_log(regions=4, cells=5, dwell=1000))
        assert stats.regions == 4
        assert stats.mean_s == pytest.approx(1.0, abs=0.001)

    def test_exact_dwell_within_one_ms(self):
        for dwell in (250, 750, 1250):
            stats = scan_region_stats(ivoice_scan_log(regions=3, cells=6, dwell=dwell))
            assert abs(stats.mean_s - dwell / 1000) <= 0.001

    def test_two_regions_is_undefined(self):
        stats = scan_region_stats(ivoice_scan_log(regions=2, cells=5))
        assert stats.mean_s is None
        assert stats.regions == 2

    def test_small_regions_discarded(self):
        # one advance per scan = two cells per region: below the minimum
        stats = scan_region_stats(ivoice_scan_log(regions=5, cells=1))
        assert stats.regions == 0 and stats.mean_s is None

    def test_baseline_constructed_gaps(self):
        # single-step column walk, 2.62 s per cell, three runs
        log = EventLog("t", Technology.BASELINE)
        t = 0
        for start_row in (1, 20, 40):
            for i in range(5):
                addr = a(start_row + i)
                log.record(ActivityEvent(t, EventKind.CELL_ENTER, addr))
                t += 2620
                log.record(ActivityEvent(t, EventKind.CELL_LEAVE, addr))
            t += 30_000  # long gap separates runs
        stats = scan_region_stats(log)
        assert stats.regions == 3
        assert stats.mean_s == pytest.approx(2.62)

    def test_baseline_first_cell_dwell_discarded(self):
        log = EventLog("t", Technology.BASELINE)
        t = 0
        dwells = [9000, 2000, 2000, 2000]  # first cell much longer
        for i, dwell in enumerate(dwells):
            log.record(ActivityEvent(t, EventKind.CELL_ENTER, a(1 + i)))
            t += dwell
            log.record(ActivityEvent(t, EventKind.CELL_LEAVE, a(1 + i)))
        for start in (20, 40):  # two more qualifying runs
            for i in range(4):
                log.record(ActivityEvent(t, EventKind.CELL_ENTER, a(start + i)))
                t += 2000
                log.record(ActivityEvent(t, EventKind.CELL_LEAVE, a(start + i)))
            t += 30_000
        stats = scan_region_stats(log)
        assert stats.mean_s == pytest.approx(2.0)


class TestRefNavTime:
    def test_ivoice_jump_is_instant(self, cross_sheet_workbook):
        from gridpilot.workbook import parse_address

        s = AuditSession(cross_sheet_workbook, start=parse_address("Sales and Profit!F6"))
        s.issue("jump pink", 1000)
        s.issue("jump back", 5000)
        s.issue("jump pink", 9000)
        timings = ref_nav_time(s.log)
        assert timings.times_s == [0.0, 0.0, 0.0]
        assert timings.mean_s == 0.0

    def test_baseline_constructed_journeys(self):
        # remote checks through one intermediate sheet: 4.1 s out, 2.7 s back
        log = EventLog("t", Technology.BASELINE)

        def emit(t, kind, addr=None, payload=None):
            log.record(ActivityEvent(t, kind, addr, payload))

        t = 0
        for _ in range(3):
            emit(t, EventKind.CELL_ENTER, a(6, 6, "Sales"))
            t += 3000  # review the formula, then dictate the first hop
            emit(t, EventKind.COMMAND_ISSUED, None, "next worksheet")
            emit(t, EventKind.CELL_LEAVE, a(6, 6, "Sales"))
            emit(t, EventKind.CELL_ENTER, a(6, 6, "Purchases"))
            emit(t + 2050, EventKind.COMMAND_ISSUED, None, "next worksheet")
            emit(t + 2050, EventKind.CELL_LEAVE, a(6, 6, "Purchases"))
            emit(t + 2050, EventKind.CELL_ENTER, a(6, 6, "Stock"))
            emit(t + 4100, EventKind.COMMAND_ISSUED, None, "go to cell D6")
            emit(t + 4100, EventKind.CELL_LEAVE, a(6, 6, "Stock"))
            emit(t + 4100, EventKind.CELL_ENTER, a(6, 4, "Stock"))
            t += 4100 + 5000  # check the referenced value
            emit(t, EventKind.COMMAND_ISSUED, None, "previous worksheet")
            emit(t, EventKind.CELL_LEAVE, a(6, 4, "Stock"))
            emit(t, EventKind.CELL_ENTER, a(6, 4, "Purchases"))
            emit(t + 2700, EventKind.COMMAND_ISSUED, None, "previous worksheet")
            emit(t + 2700, EventKind.CELL_LEAVE, a(6, 4, "Purchases"))
            emit(t + 2700, EventKind.CELL_ENTER, a(6, 4, "Sales"))
            t += 2700 + 1000
            emit(t, EventKind.COMMAND_ISSUED, None, "mark error")  # breaks the journey
            emit(t, EventKind.CELL_LEAVE, a(6, 4, "Sales"))
        timings = ref_nav_time(log)
        assert timings.times_s == pytest.approx([4.1, 2.7] * 3)
        assert timings.mean_s == pytest.approx((4.1 + 2.7) / 2)

    def test_under_three_occurrences_flagged(self, cross_sheet_workbook):
        from gridpilot.workbook import parse_address

        s = AuditSession(cross_sheet_workbook, start=parse_address("Sales and Profit!F6"))
        s.issue("jump pink", 1000)
        timings = ref_nav_time(s.log)
        assert timings.times_s == [0.0]
        assert timings.mean_s is None

    def test_within_sheet_jumps_ignored(self, cross_sheet_workbook):
        from gridpilot.workbook import parse_address

        s = AuditSession(cross_sheet_workbook, start=parse_address("Sales and Profit!F6"))
        s.issue("jump green", 1000)  # E6, same sheet
        assert ref_nav_time(s.log).times_s == []


class TestBlankJumpTime:
    def test_ivoice_jump_blank_is_instant(self):
        wb = single_sheet_workbook({"A1": number("1"), "E1": number("2"), "J1": number("3")})
        s = AuditSession(wb)
        s.issue("jump right", 1000)
        s.issue("jump right", 5000)
        s.issue("jump left", 9000)
        timings = blank_jump_time(s.log, wb)
        assert timings.times_s == [0.0, 0.0, 0.0]
        assert timings.mean_s == 0.0

    def test_baseline_constructed_gap(self):
        wb = single_sheet_workbook({"A1": number("1"), "E1": number("2")})
        log = EventLog("t", Technology.BASELINE)
        log.record(ActivityEvent(0, EventKind.CELL_ENTER, a(1, 1)))
        log.record(ActivityEvent(4000, EventKind.CELL_LEAVE, a(1, 1)))
        log.record(ActivityEvent(5300, EventKind.CELL_ENTER, a(1, 5)))
        log.record(ActivityEvent(9000, EventKind.CELL_LEAVE, a(1, 5)))
        timings = blank_jump_time(log, wb)
        assert timings.times_s == [1.3]

    def test_stepping_through_blanks(self):
        wb = single_sheet_workbook({"A1": number("1"), "D1": number("2")})
        log = EventLog("t", Technology.BASELINE)
        spec = [(a(1, 1), 0, 1000), (a(1, 2), 1000, 1400), (a(1, 3), 1400, 1800), (a(1, 4), 1800, 4000)]
        for addr, enter_t, leave_t in spec:
            log.record(ActivityEvent(enter_t, EventKind.CELL_ENTER, addr))
            log.record(ActivityEvent(leave_t, EventKind.CELL_LEAVE, addr))
        timings = blank_jump_time(log, wb)
        assert timings.times_s == [0.8]

    def test_adjacent_moves_are_not_traversals(self):
        wb = single_sheet_workbook({"A1": number("1"), "B1": number("2")})
        log = visit_log([(a(1, 1), 0, 1000), (a(1, 2), 1000, 2000)], Technology.BASELINE)
        assert blank_jump_time(log, wb).times_s == []

    def test_no_traversals_empty(self):
        wb = single_sheet_workbook({"A1": number("1")})
        log = visit_log([(a(1, 1), 0, 1000)])
        assert blank_jump_time(log, wb).times_s == []


def enumeration_oracle(sample_a, sample_b):
    """Full enumeration over subset choices of pooled midranks."""
    pooled = list(sample_a) + list(sample_b)
    ranks = analysis._midranks(pooled)
    n = len(sample_a)
    observed = sum(ranks[:n])
    indices = range(len(pooled))
    hits = total = 0
    for combo in combinations(indices, n):
        total += 1
        if sum(ranks[i] for i in combo) >= observed - 1e-12:
            hits += 1
    return hits / total


class TestRankSum:
    def test_three_vs_three_separated(self):
        result = rank_sum_test([4, 5, 6], [1, 2, 3])
        assert result.p_one_sided == pytest.approx(1 / 20)
        assert result.statistic == 15

    def test_single_swap_minimum(self):
        assert rank_sum_test([1], [2]).p_one_sided == 1.0

    def test_six_vs_six_all_above(self):
        result = rank_sum_test(list(range(7, 13)), list(range(1, 7)))
        assert result.p_one_sided == pytest.approx(1 / 924, abs=1e-15)

    def test_matches_enumeration_with_and_without_ties(self):
        rng = random.Random(99)
        for n in range(1, 8):
            for m in range(1, 8):
                tie_free = rng.sample(range(1000), n + m)
                with_ties = [rng.randint(0, 3) for _ in range(n + m)]
                for pooled in (tie_free, with_ties):
                    sample_a, sample_b = pooled[:n], pooled[n:]
                    got = rank_sum_test(sample_a, sample_b).p_one_sided
                    want = enumeration_oracle(sample_a, sample_b)
                    assert got == pytest.approx(want, abs=1e-12)

    @given(
        st.sets(st.integers(0, 10_000), min_size=2, max_size=12),
        st.data(),
    )
    def test_monotone_in_sample_a_without_ties(self, pooled, data):
        # The monotonicity theorem needs a fixed null distribution, i.e.
        # tie-free data before and after the perturbation (see the tied
        # counterexample below). Distinct ints bumped by k+0.5 stay distinct.
        values = sorted(pooled)
        n = data.draw(st.integers(1, len(values) - 1))
        sample_a, sample_b = [float(v) for v in values[:n]], [float(v) for v in values[n:]]
        idx = data.draw(st.integers(0, n - 1))
        bump = data.draw(st.integers(0, 25)) + 0.5
        p_before = rank_sum_test(sample_a, sample_b).p_one_sided
        raised = list(sample_a)
        raised[idx] += bump
        p_after = rank_sum_test(raised, sample_b).p_one_sided
        assert p_after <= p_before + 1e-12

    def test_tie_creation_can_raise_p(self):
        # Known midrank effect: a bump that lands on an opposing value
        # reshapes the pooled ranks, and the exact p may grow. Pinned so a
        # future "fix" does not silently change the test's definition.
        before = rank_sum_test([0, 1, 1, 1], [0, 2]).p_one_sided
        after = rank_sum_test([1, 1, 1, 1], [0, 2]).p_one_sided
        assert before == pytest.approx(9 / 15)
        assert after == pytest.approx(11 / 15)

    def test_exact_mode_size_limit(self):
        with pytest.raises(ExactModeUnavailable):
            rank_sum_test(list(range(11)), list(range(10)))

    def test_statistic_bounds(self):
        result = rank_sum_test([2, 2], [2, 2, 2])
        min_stat = 1 + 2  # smallest two ranks
        max_stat = 4 + 5
        assert min_stat <= result.statistic <= max_stat
        assert 0 < result.p_one_sided <= 1


class TestMetricsBundle:
    def test_full_bundle_from_session(self, retail):
        s = AuditSession(retail, start=None)
        s.issue("jump down", 500)
        s.issue("mark error", 2000)
        s.issue("scan down", 3000)
        s.tick(8000)
        s.issue("stop", 8100)
        s.end(9000)
        metrics = analysis.audit_metrics(s.log, retail)
        assert 0 <= metrics.coverage_pct <= 100
        # the log closes at its last event (the stop), not at end()
        assert metrics.duration_min == pytest.approx(8100 / 60000)
        assert metrics.errors_found_pct is not None
