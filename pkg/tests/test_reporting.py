import re
from datetime import date, timedelta

import numpy as np
import pytest

from crisismon import (CategorySet, EventRecord, HeatmapSpec, Series,
                       StageWindow, TokenizedDoc, annotate_peaks, crime_view,
                       load_events_csv, load_stages_csv, make_lexicon,
                       render_heatmap, stage_prevalence_table)
from crisismon.series import Peak
from crisismon.reporting import write_stage_table_csv

from oracles import naive_stage_table

D0 = date(2020, 3, 1)


def S(values):
    return Series(start=D0, values=np.asarray(values, dtype=np.float64))


def spec_for(markers, n_days, **kw):
    return HeatmapSpec(
        markers=markers, start=D0, end=D0 + timedelta(days=n_days - 1), **kw
    )


def cell_fills(svg: bytes) -> list[str]:
    fills = re.findall(r'<rect [^>]*fill="([^"]+)"/>', svg.decode("utf-8"))
    return [f for f in fills if f.startswith(("rgb(", "url("))]


def lum(fill: str) -> float:
    return float(re.match(r"rgb\(([0-9.]+)%", fill).group(1))


class TestRenderHeatmap:
    def test_three_cells_strictly_darker_with_value(self):
        svg = render_heatmap({"m": S([0.0, 50.0, 100.0])}, spec_for(["m"], 3))
        fills = cell_fills(svg)
        assert len(fills) == 3
        lums = [lum(f) for f in fills]
        assert lums[0] > lums[1] > lums[2]

    def test_all_equal_values_render_midpoint(self):
        svg = render_heatmap({"m": S([7.0, 7.0, 7.0])}, spec_for(["m"], 3))
        fills = cell_fills(svg)
        assert len(set(fills)) == 1
        spec = spec_for(["m"], 3)
        assert lum(fills[0]) == pytest.approx((spec.light + spec.dark) / 2)

    def test_byte_identical_across_runs(self):
        series = {"a": S([1, 2, 3]), "b": S([3, 2, 1])}
        spec = spec_for(["a", "b"], 3)
        assert render_heatmap(series, spec) == render_heatmap(series, spec)

    def test_empty_marker_list_errors(self):
        with pytest.raises(ValueError):
            render_heatmap({"m": S([1])}, spec_for([], 1))

    def test_unknown_marker_errors(self):
        with pytest.raises(ValueError, match="unknown"):
            render_heatmap({"m": S([1])}, spec_for(["nope"], 1))

    def test_missing_cells_get_hatch_style(self):
        svg = render_heatmap({"m": S([1.0, np.nan, 3.0])}, spec_for(["m"], 3))
        fills = cell_fills(svg)
        assert fills[1] == "url(#missing)"
        assert fills[0].startswith("rgb(")

    def test_row_permutation_keeps_cell_colors(self):
        series = {"a": S([0.0, 5.0]), "b": S([10.0, 2.0])}
        svg_ab = render_heatmap(series, spec_for(["a", "b"], 2))
        svg_ba = render_heatmap(series, spec_for(["b", "a"], 2))
        ab = cell_fills(svg_ab)
        ba = cell_fills(svg_ba)
        assert ab[0:2] == ba[2:4]  # row "a"
        assert ab[2:4] == ba[0:2]  # row "b"

    def test_month_labels_present(self):
        n = 40  # spans March into April
        svg = render_heatmap({"m": S(list(range(n)))}, spec_for(["m"], n))
        text = svg.decode("utf-8")
        assert "2020-03" in text and "2020-04" in text
        assert ">m</text>" in text

    def test_normalization_shared_across_rows(self):
        # per-heatmap min-max: the single maximum is the only darkest cell
        series = {"a": S([0.0, 1.0]), "b": S([2.0, 8.0])}
        svg = render_heatmap(series, spec_for(["a", "b"], 2))
        fills = cell_fills(svg)
        lums = [lum(f) for f in fills]
        assert min(lums) == lums[3]  # the 8.0 cell
        assert max(lums) == lums[0]  # the 0.0 cell


class TestAnnotatePeaks:
    def _peak(self, d):
        return Peak(date=d, index=0, height=1.0, prominence=1.0)

    def test_window_rule(self):
        peak = self._peak(date(2020, 5, 10))
        events = [
            EventRecord(date(2020, 5, 7), "inside"),
            EventRecord(date(2020, 5, 12), "after the peak"),
            EventRecord(date(2020, 5, 3), "too early"),
        ]
        ((_, matched),) = annotate_peaks([peak], events, lead=6)
        assert [e.description for e in matched] == ["inside"]

    def test_no_events_yields_empty_lists(self):
        peaks = [self._peak(date(2020, 5, 10)), self._peak(date(2020, 6, 1))]
        annotated = annotate_peaks(peaks, [], lead=6)
        assert [len(m) for _, m in annotated] == [0, 0]

    def test_matches_sorted_by_date(self):
        peak = self._peak(date(2020, 5, 10))
        events = [
            EventRecord(date(2020, 5, 9), "b"),
            EventRecord(date(2020, 5, 5), "a"),
        ]
        ((_, matched),) = annotate_peaks([peak], events)
        assert [e.date for e in matched] == [date(2020, 5, 5), date(2020, 5, 9)]

    def test_negative_lead_errors(self):
        with pytest.raises(ValueError):
            annotate_peaks([], [], lead=-1)

    def test_boundary_dates_inclusive(self):
        peak = self._peak(date(2020, 5, 10))
        events = [
            EventRecord(date(2020, 5, 4), "left edge"),
            EventRecord(date(2020, 5, 10), "peak day"),
        ]
        ((_, matched),) = annotate_peaks([peak], events, lead=6)
        assert len(matched) == 2

    def test_march_8_peak_matches_six_fixture_events(self, data_dir):
        events = load_events_csv(data_dir / "events" / "mental_health.csv")
        peak = self._peak(date(2020, 3, 8))
        ((_, matched),) = annotate_peaks([peak], events, lead=6)
        assert len(matched) == 6
        assert matched[0].date == date(2020, 3, 3)
        assert matched[-1].date == date(2020, 3, 8)


class TestStagePrevalenceTable:
    def test_fifty_percent_above_median(self):
        # 9 days at 4.0 with one 6.0 inside the stage: median 4, max diff 50%
        values = [4.0] * 9
        values[4] = 6.0
        stages = [StageWindow("s", D0 + timedelta(days=3), D0 + timedelta(days=5))]
        ((_, _, cell),) = stage_prevalence_table({"m": S(values)}, stages)
        assert cell == pytest.approx(50.0)

    def test_constant_series_gives_zero_everywhere(self):
        stages = [
            StageWindow("a", D0, D0 + timedelta(days=4)),
            StageWindow("b", D0 + timedelta(days=5), D0 + timedelta(days=9)),
        ]
        rows = stage_prevalence_table({"m": S([3.0] * 10)}, stages)
        assert [cell for _, _, cell in rows] == [0.0, 0.0]

    def test_zero_median_is_undefined(self):
        stages = [StageWindow("s", D0, D0 + timedelta(days=2))]
        ((_, _, cell),) = stage_prevalence_table({"m": S([0.0, 0.0, 0.0])}, stages)
        assert cell is None

    def test_stage_outside_series_is_undefined(self):
        stages = [StageWindow("s", D0 + timedelta(days=100), D0 + timedelta(days=120))]
        ((_, _, cell),) = stage_prevalence_table({"m": S([1.0, 2.0])}, stages)
        assert cell is None

    def test_120_day_fixture_matches_naive_double_loop(self):
        rng = np.random.default_rng(53)
        stages = [
            ("A", D0, D0 + timedelta(days=39)),
            ("B", D0 + timedelta(days=40), D0 + timedelta(days=79)),
            ("C", D0 + timedelta(days=80), D0 + timedelta(days=119)),
        ]
        values_by_marker = {}
        for mi in range(4):
            v = rng.normal(5, 1, 120)
            v[rng.integers(0, 120, size=6)] = np.nan
            values_by_marker[f"m{mi}"] = v
        series = {k: S(v) for k, v in values_by_marker.items()}
        got = stage_prevalence_table(
            series, [StageWindow(n, s, e) for n, s, e in stages]
        )
        expect = naive_stage_table(
            {k: [None if np.isnan(x) else float(x) for x in v]
             for k, v in values_by_marker.items()},
            D0,
            stages,
        )
        for marker, stage, cell in got:
            ref = expect[(marker, stage)]
            if ref is None:
                assert cell is None
            else:
                assert cell == pytest.approx(ref, abs=1e-9)

    def test_scale_invariance(self):
        rng = np.random.default_rng(59)
        v = rng.uniform(1, 9, 60)
        stages = [StageWindow("s", D0 + timedelta(days=10), D0 + timedelta(days=20))]
        ((_, _, a),) = stage_prevalence_table({"m": S(v)}, stages)
        ((_, _, b),) = stage_prevalence_table({"m": S(3.7 * v)}, stages)
        assert a == pytest.approx(b, rel=1e-9)

    def test_csv_writer_blank_for_undefined(self, tmp_path):
        rows = [("m", "s", 12.5), ("m", "t", None)]
        path = tmp_path / "stage.csv"
        write_stage_table_csv(path, rows)
        lines = path.read_text().splitlines()
        assert lines[0] == "marker,stage,max_pct_diff"
        assert lines[1] == "m,s,12.5"
        assert lines[2] == "m,t,"


class TestCrimeView:
    def _setup(self):
        cats = CategorySet(
            name="demo",
            categories={
                "crime": make_lexicon("crime", ["robo"]),
                "government": make_lexicon("government", ["gobierno"]),
                "health": make_lexicon("health", ["salud"]),
            },
        )
        docs = [
            TokenizedDoc("a", D0, ("hubo", "un", "robo")),
            TokenizedDoc("b", D0, ("el", "gobierno", "habló")),
            TokenizedDoc("c", D0 + timedelta(days=1), ("salud", "pública")),
        ]
        return cats, docs

    def test_two_category_subset_renders_two_rows(self):
        cats, docs = self._setup()
        agg, svg = crime_view(
            cats, docs, D0, D0 + timedelta(days=1), ["crime", "government"]
        )
        assert set(agg.prevalence) == {"crime", "government"}
        text = svg.decode("utf-8")
        assert ">crime</text>" in text and ">government</text>" in text
        assert ">health</text>" not in text

    def test_empty_subset_errors(self):
        cats, docs = self._setup()
        with pytest.raises(ValueError):
            crime_view(cats, docs, D0, D0, [])

    def test_unknown_category_errors(self):
        cats, docs = self._setup()
        with pytest.raises(ValueError, match="unknown"):
            crime_view(cats, docs, D0, D0, ["narcotráfico"])

    def test_full_subset_equals_general_heatmap(self):
        cats, docs = self._setup()
        names = sorted(cats.categories)
        end = D0 + timedelta(days=1)
        agg, svg = crime_view(cats, docs, D0, end, names)
        from crisismon import aggregate_daily, build_matcher

        general = aggregate_daily(docs, build_matcher(cats), D0, end)
        svg_general = render_heatmap(
            {n: p.to_series() for n, p in general.prevalence.items()},
            HeatmapSpec(markers=names, start=D0, end=end),
        )
        assert svg == svg_general


class TestCsvLoaders:
    def test_events_fixture_loads(self, data_dir):
        events = load_events_csv(data_dir / "events" / "mental_health.csv")
        assert len(events) == 34
        assert all(e.description for e in events)

    def test_stage_fixture_loads_with_overlap(self, data_dir):
        stages = load_stages_csv(data_dir / "stages" / "argentina_2020.csv")
        assert [w.stage for w in stages] == ["preparedness", "response", "recovery"]
        # response and recovery overlap by design
        assert stages[2].start < stages[1].end

    def test_bad_events_header(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("when,what\n2020-01-01,x\n")
        from crisismon.errors import FormatError

        with pytest.raises(FormatError):
            load_events_csv(path)

    def test_bad_stage_dates(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("stage,start,end\ns,2020-01-05,2020-01-01\n")
        from crisismon.errors import FormatError

        with pytest.raises(FormatError):
            load_stages_csv(path)
