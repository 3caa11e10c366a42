import io
from contextlib import redirect_stdout

from nutgraphs.cli import main
from nutgraphs.codec import from_graph6, to_graph6
from nutgraphs.graphs import build_graph


def run_cli(*argv):
    buf = io.StringIO()
    with redirect_stdout(buf):
        status = main(list(argv))
    return status, buf.getvalue()


def kv(output):
    out = {}
    for line in output.splitlines():
        key, _, value = line.partition(":")
        out[key.strip()] = value.strip()
    return out


FRUCHT = "KhCWKCBAH?w@"
NUT7 = build_graph(7, [(0, 3), (0, 5), (1, 4), (1, 6), (2, 5), (2, 6), (3, 6), (4, 6)])


def test_group_order_printed_generators():
    status, out = run_cli(
        "group-order",
        "--gens", "(1,2,3)(4,5)(6,7,8);(1,8)(2,7)(3,6)(4,9)(5,10);(7,8)",
        "--degree", "10",
    )
    assert status == 0
    assert kv(out)["order"] == "288"


def test_verify_nut_exits_zero(tmp_path):
    path = tmp_path / "g.g6"
    path.write_text(to_graph6(NUT7) + "\n")
    status, out = run_cli("verify", "--in", str(path))
    fields = kv(out)
    assert status == 0
    assert fields["graph.0.nullity"] == "1"
    assert fields["graph.0.full"] == "true"


def test_verify_non_nut_exits_nonzero(tmp_path):
    path = tmp_path / "g.g6"
    path.write_text(to_graph6(build_graph(3, [(0, 1), (1, 2)])) + "\n")
    status, out = run_cli("verify", "--in", str(path))
    assert status == 1
    assert kv(out)["graph.0.reason"] == "zero entry at vertex 1"


def test_aut_frucht(tmp_path):
    path = tmp_path / "g.g6"
    path.write_text(FRUCHT + "\n")
    status, out = run_cli("aut", "--in", str(path))
    assert status == 0
    assert kv(out)["graph.0.aut-order"] == "1"


def test_multiplier_command(tmp_path):
    path = tmp_path / "c4.g6"
    path.write_text(to_graph6(build_graph(4, [(0, 1), (1, 2), (2, 3), (0, 3)])) + "\n")
    status, out = run_cli("multiplier", "--in", str(path))
    fields = kv(out)
    assert status == 0
    assert fields["output.0.order"] == "12"
    assert fields["output.0.aut-order"] == "128"
    assert fields["output.0.nut"] == "true"


def test_construct_and_reverify(tmp_path):
    k5 = build_graph(5, [(u, v) for u in range(5) for v in range(u + 1, 5)])
    g6 = tmp_path / "k5.g6"
    g6.write_text(to_graph6(k5) + "\n")
    report = tmp_path / "report.txt"
    status, out = run_cli(
        "construct", "--in", str(g6), "--sigma", "0", "--out", str(report)
    )
    fields = kv(out)
    assert status == 0
    assert fields["order-actual"] == str(19 * 5)
    assert fields["nut"] == "true"
    status2, out2 = run_cli("verify", "--report", str(report))
    assert status2 == 0
    assert kv(out2)["verified"] == "true"


def test_construct_regular_command(tmp_path):
    k5 = build_graph(5, [(u, v) for u in range(5) for v in range(u + 1, 5)])
    g6 = tmp_path / "k5.g6"
    g6.write_text(to_graph6(k5) + "\n")
    status, out = run_cli("construct-regular", "--in", str(g6), "--d", "8")
    fields = kv(out)
    assert status == 0
    assert fields["omega"] == "53"
    assert fields["restriction-equal"] == "true"


def test_search_gadgets_seeded_identical_output():
    s1, out1 = run_cli("search-gadgets", "--kind", "apex", "--d", "8",
                       "--count", "2", "--seed", "5")
    s2, out2 = run_cli("search-gadgets", "--kind", "apex", "--d", "8",
                       "--count", "2", "--seed", "5")
    assert s1 == s2 == 0
    assert out1 == out2


def test_search_gadgets_requires_seed():
    status, _ = run_cli("search-gadgets", "--kind", "apex", "--d", "8", "--count", "1")
    assert status == 2


def test_census_command():
    status, out = run_cli("census", "--max-n", "7", "--filter", "nut")
    fields = kv(out)
    assert status == 0
    assert fields["nut.6"] == "0"
    assert fields["nut.7"] == "3"


def test_census_regular_witnesses():
    status, out = run_cli(
        "census", "--max-n", "8", "--filter", "regular", "--d", "4", "--witnesses"
    )
    assert status == 0
    lines = [ln for ln in out.splitlines() if not ln.startswith(("regular", "summary"))]
    graphs = [from_graph6(ln) for ln in lines]
    assert len(graphs) == 1 + 1 + 2 + 6
    assert all(set(g.degrees) == {4} for g in graphs)
    # census lines re-encode bit-exactly
    assert [to_graph6(g) for g in graphs] == lines


def test_minimal_command():
    status, out = run_cli(
        "minimal", "--gens", "(1,2);(3,4)", "--degree", "4",
        "--predicate", "nut", "--max-n", "7",
    )
    fields = kv(out)
    assert status == 0
    assert fields["min-order"] == "7"


def test_bad_flag_is_reported():
    status, _ = run_cli("verify", "--in", "/nonexistent/file.g6")
    assert status == 2
