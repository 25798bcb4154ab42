import pytest

from codeprobe._util import CodeProbeError
from codeprobe.probe import ProbeEntry, ProbeResults
from codeprobe.report import (
    emit_curve_plot,
    emit_layer_plot,
    emit_table,
    write_report,
)
from codeprobe.tasks import TaskKind


def _entry(task, layer, size, test_acc, train_acc=1.0, seed=0):
    return ProbeEntry(task, layer, size, seed, train_acc, test_acc)


def _full_results():
    entries = []
    for task in TaskKind:
        for layer in range(3):
            entries.append(_entry(task, layer, 100, 0.5 + 0.1 * layer))
    return ProbeResults(entries)


class TestTable:
    def test_naive_row_values(self):
        md, csv_text = emit_table([], [])
        naive_md = [l for l in md.splitlines() if l.startswith("| Naive")][0]
        assert naive_md == "| Naive | 20.00 | 5.00 | 10.00 | 50.00 |"
        assert csv_text.splitlines()[1] == "Naive,20.00,5.00,10.00,50.00"

    def test_header_task_order(self):
        md, csv_text = emit_table([], [])
        assert csv_text.splitlines()[0] == "Model,LEN,AST,CPX,TYP"
        assert md.splitlines()[0] == "| Model | LEN | AST | CPX | TYP |"

    def test_best_layer_policy_picks_max(self):
        res = ProbeResults(
            [
                _entry(TaskKind.LEN, 0, 100, 0.40),
                _entry(TaskKind.LEN, 1, 100, 0.73),
                _entry(TaskKind.LEN, 2, 100, 0.60),
            ]
        )
        _, csv_text = emit_table([res], ["run"])
        assert csv_text.splitlines()[2].startswith("run,73.00,")

    def test_last_layer_policy(self):
        res = ProbeResults(
            [
                _entry(TaskKind.LEN, 0, 100, 0.90),
                _entry(TaskKind.LEN, 2, 100, 0.55),
            ]
        )
        _, csv_text = emit_table([res], ["run"], policy="last-layer")
        assert csv_text.splitlines()[2].startswith("run,55.00,")

    def test_highest_train_size_wins(self):
        res = ProbeResults(
            [
                _entry(TaskKind.LEN, 0, 100, 0.95),
                _entry(TaskKind.LEN, 0, 1000, 0.70),
            ]
        )
        _, csv_text = emit_table([res], ["run"])
        assert csv_text.splitlines()[2].startswith("run,70.00,")

    def test_missing_task_em_dash(self):
        res = ProbeResults([_entry(TaskKind.TYP, 0, 100, 0.80)])
        _, csv_text = emit_table([res], ["run"])
        assert csv_text.splitlines()[2] == "run,—,—,—,80.00"

    def test_label_count_mismatch(self):
        with pytest.raises(CodeProbeError):
            emit_table([ProbeResults()], [])

    def test_unknown_policy(self):
        res = ProbeResults([_entry(TaskKind.LEN, 0, 100, 0.5)])
        with pytest.raises(CodeProbeError, match="policy"):
            emit_table([res], ["run"], policy="median")


class TestPlots:
    def test_layer_plot_is_valid_svg_with_series(self):
        res = _full_results()
        svg = emit_layer_plot([res], ["run"], TaskKind.AST)
        assert svg.startswith("<svg ")
        assert svg.rstrip().endswith("</svg>")
        assert svg.count("<polyline") == 1
        assert "run" in svg
        assert "AST" in svg

    def test_layer_plot_no_data_fatal(self):
        with pytest.raises(CodeProbeError, match="no layer results"):
            emit_layer_plot([ProbeResults()], ["run"], TaskKind.LEN)

    def test_layer_plot_deterministic(self):
        res = _full_results()
        assert emit_layer_plot([res], ["r"], TaskKind.LEN) == emit_layer_plot(
            [res], ["r"], TaskKind.LEN
        )

    def test_curve_plot_one_series_per_size(self):
        entries = []
        for size in (100, 1000):
            for layer in range(3):
                entries.append(_entry(TaskKind.CPX, layer, size, 0.3 + 0.05 * layer))
        svg, warnings = emit_curve_plot(ProbeResults(entries), TaskKind.CPX)
        assert svg.count("<polyline") == 2
        assert "n=100" in svg and "n=1000" in svg
        assert warnings == []

    def test_curve_plot_single_size_warns(self):
        svg, warnings = emit_curve_plot(_full_results(), TaskKind.LEN)
        assert svg.count("<polyline") == 1
        assert warnings and "one train size" in warnings[0]

    def test_curve_plot_no_data_fatal(self):
        with pytest.raises(CodeProbeError, match="no results"):
            emit_curve_plot(ProbeResults(), TaskKind.TYP)


class TestWriteReport:
    def test_writes_expected_files(self, tmp_path):
        res = _full_results()
        written = write_report([res], ["run"], tmp_path)
        names = sorted(p.name for p in written)
        assert "table.md" in names and "table.csv" in names
        for task in ("len", "ast", "cpx", "typ"):
            assert f"layers_{task}.svg" in names
        # single train size: no curve plots
        assert not any(n.startswith("curves_") for n in names)

    def test_curve_files_when_multiple_sizes(self, tmp_path):
        entries = []
        for size in (100, 1000):
            for layer in range(2):
                entries.append(_entry(TaskKind.LEN, layer, size, 0.5))
        written = write_report([ProbeResults(entries)], ["run"], tmp_path)
        assert any(p.name == "curves_len.svg" for p in written)

    def test_byte_deterministic(self, tmp_path):
        res = _full_results()
        d1, d2 = tmp_path / "a", tmp_path / "b"
        files1 = write_report([res], ["run"], d1)
        files2 = write_report([res], ["run"], d2)
        for p1, p2 in zip(files1, files2):
            assert p1.read_bytes() == p2.read_bytes()
