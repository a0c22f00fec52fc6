import os

import pytest

from orbitcount_figures import cli, plots
from orbitcount_figures.plots import SchemaError, build_figure, read_rows

DATA = os.path.join(os.path.dirname(__file__), "..", "data")
UNI = os.path.join(DATA, "unitriangular_q2.csv")
MS = os.path.join(DATA, "multiset_n20.csv")
REPS = os.path.join(DATA, "multiset_reps.csv")


@pytest.mark.parametrize("kind,csv_in", [
    ("logcount", UNI),
    ("ratio", UNI),
    ("multiset", MS),
    ("rephist", REPS),
])
def test_all_kinds_render(kind, csv_in, tmp_path):
    out = str(tmp_path / f"{kind}.png")
    plots.plot(kind, csv_in, out)
    assert os.path.getsize(out) > 0


def test_ratio_has_reference_curves():
    fig = build_figure("ratio", read_rows(UNI, "ratio"))
    labels = {line.get_label() for line in fig.axes[0].get_lines()}
    assert "1/12" in labels
    assert "(n+6)/(12n)" in labels


def test_multiset_has_two_curves():
    fig = build_figure("multiset", read_rows(MS, "multiset"))
    labels = {line.get_label() for line in fig.axes[0].get_lines()}
    assert "log true count" in labels
    assert "log estimate" in labels


def test_read_rows_values():
    rows = read_rows(MS, "multiset")
    assert len(rows) == 19
    assert {int(r["k"]) for r in rows} == set(range(2, 21))


def test_empty_csv_is_schema_error(tmp_path):
    empty = tmp_path / "empty.csv"
    empty.write_text("")
    with pytest.raises(SchemaError, match="empty"):
        read_rows(str(empty), "multiset")


def test_header_only_is_schema_error(tmp_path):
    f = tmp_path / "hdr.csv"
    f.write_text("n,k,log_true,log_est,rep\n")
    with pytest.raises(SchemaError, match="no data rows"):
        read_rows(str(f), "multiset")


def test_wrong_header_is_schema_error(tmp_path):
    f = tmp_path / "bad.csv"
    f.write_text("a,b\n1,2\n")
    with pytest.raises(SchemaError, match="does not match"):
        read_rows(str(f), "logcount")


def test_non_numeric_is_schema_error(tmp_path):
    f = tmp_path / "bad.csv"
    f.write_text("n,k,log_true,log_est,rep\n20,2,x,3.0,0\n")
    with pytest.raises(SchemaError, match="non-numeric"):
        read_rows(str(f), "multiset")


def test_unknown_kind():
    with pytest.raises(SchemaError, match="unknown figure kind"):
        read_rows(MS, "surface")


def test_cli_success(tmp_path):
    out = str(tmp_path / "fig.png")
    rc = cli.main(["ratio", "--csv", UNI, "--out", out])
    assert rc == cli.EXIT_OK
    assert os.path.getsize(out) > 0


def test_cli_schema_error(tmp_path, capsys):
    empty = tmp_path / "empty.csv"
    empty.write_text("")
    rc = cli.main(["multiset", "--csv", str(empty),
                   "--out", str(tmp_path / "x.png")])
    assert rc == cli.EXIT_SCHEMA
    assert "error:" in capsys.readouterr().err


def test_cli_missing_input(tmp_path):
    rc = cli.main(["multiset", "--csv", str(tmp_path / "nope.csv"),
                   "--out", str(tmp_path / "x.png")])
    assert rc == cli.EXIT_SCHEMA
