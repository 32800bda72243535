"""Edge-list file parsing and writing."""

import pytest

from linkclust.edgelist import LoadOptions, load_edge_list, parse_edge_lines, save_edge_list
from linkclust.graph import build_graph


class TestParse:
    def test_basic_pairs(self):
        pairs = parse_edge_lines(["1 2", "2 3"], "mem")
        assert pairs == [(1, 2), (2, 3)]

    def test_comments_and_blanks_skipped(self):
        pairs = parse_edge_lines(["# header", "", "  ", "1 2", "# trailing"], "mem")
        assert pairs == [(1, 2)]

    def test_tabs_and_extra_whitespace(self):
        pairs = parse_edge_lines(["1\t2", "  3   4  "], "mem")
        assert pairs == [(1, 2), (3, 4)]

    def test_wrong_token_count_rejected(self):
        with pytest.raises(ValueError, match=r"mem:1: malformed edge line"):
            parse_edge_lines(["1 2 3"], "mem")

    def test_non_integer_rejected(self):
        with pytest.raises(ValueError, match=r"mem:2: malformed edge line"):
            parse_edge_lines(["1 2", "a b"], "mem")

    def test_error_reports_one_based_line_number(self):
        with pytest.raises(ValueError, match=r"mem:4:"):
            parse_edge_lines(["# c", "1 2", "", "oops"], "mem")


class TestLoadSave:
    def test_round_trip_preserves_labels(self, tmp_path):
        g = build_graph([(10, 30), (30, 20)])
        path = tmp_path / "g.txt"
        save_edge_list(g, path)
        h = load_edge_list(path)
        assert h.labels == g.labels
        assert sorted(h.edges) == sorted(g.edges)

    def test_reciprocal_mentions_collapse(self, tmp_path):
        path = tmp_path / "g.txt"
        path.write_text("1 2\n2 1\n")
        g = load_edge_list(path)
        assert g.num_edges == 1

    def test_self_loops_dropped(self, tmp_path):
        path = tmp_path / "g.txt"
        path.write_text("1 1\n1 2\n")
        g = load_edge_list(path)
        assert g.num_edges == 1
        assert g.num_nodes == 2

    def test_drop_isolates_option(self, tmp_path):
        path = tmp_path / "g.txt"
        path.write_text("1 1\n2 3\n")
        g = load_edge_list(path, LoadOptions(drop_isolates=True))
        assert g.num_nodes == 2
        assert g.labels == (2, 3)

    def test_keeping_self_loops_unsupported(self):
        with pytest.raises(ValueError):
            LoadOptions(drop_self_loops=False)

    def test_missing_file_raises_oserror(self, tmp_path):
        with pytest.raises(OSError):
            load_edge_list(tmp_path / "missing.txt")

    def test_empty_file_rejected(self, tmp_path):
        path = tmp_path / "g.txt"
        path.write_text("# nothing here\n")
        with pytest.raises(ValueError, match="empty graph"):
            load_edge_list(path)

    def test_saved_file_is_reparsable_text(self, tmp_path):
        g = build_graph([(7, 9), (9, 8)])
        path = tmp_path / "g.txt"
        save_edge_list(g, path)
        lines = path.read_text().strip().splitlines()
        body = [ln for ln in lines if not ln.startswith("#")]
        assert body == ["7 9", "8 9"]
