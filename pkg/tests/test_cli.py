import pytest

from src.harness.formats import write_gr
from src.main import main
from tests.helpers import path_graph


@pytest.fixture
def p6_file(tmp_path):
    path = tmp_path / "p6.gr"
    path.write_text(write_gr(path_graph(6)))
    return str(path)


def test_generate_writes_a_graph(tmp_path):
    output = tmp_path / "p5.gr"
    assert main(["generate", "path", "--n", "5", "--output", str(output)]) == 0
    assert output.read_text() == "p tds 5 4\n1 2\n2 3\n3 4\n4 5\n"


def test_generate_to_stdout(capsys):
    assert main(["generate", "star", "--n", "3"]) == 0
    assert capsys.readouterr().out == "p tds 3 2\n1 2\n1 3\n"


def test_decompose(p6_file, capsys):
    assert main(["decompose", "--graph", p6_file]) == 0
    out = capsys.readouterr().out
    assert out.startswith("s td ")
    assert out.splitlines()[0].split()[3] == "2"


def test_kernelize_prints_csv(p6_file, capsys):
    assert main(["kernelize", "--problem", "ds", "--graph", p6_file, "--exact-opt"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].startswith("instance_id,n,m,width")
    assert lines[1].startswith(f"{p6_file},6,5,1,2,ds,1,exact,2,2,1.0,1,6,")


def test_kernelize_with_decomposition_and_trace(p6_file, tmp_path, capsys):
    td_file = tmp_path / "p6.td"
    assert main(["decompose", "--graph", p6_file, "--nice", "--output", str(td_file)]) == 0
    trace_file = tmp_path / "trace.jsonl"
    code = main(["kernelize", "--problem", "cds", "--epsilon", "1/2", "--graph", p6_file, "--td", str(td_file),
                 "--trace", str(trace_file)])
    assert code == 0
    assert len(trace_file.read_text().splitlines()) == 2
    assert ",cds,1/2,exact,4," in capsys.readouterr().out


def test_kernelize_capacitated(p6_file, capsys):
    assert main(["kernelize", "--problem", "capds", "--graph", p6_file, "--exact-opt"]) == 0
    assert ",capds,1,exact,2,2," in capsys.readouterr().out


def test_kernelize_several_graphs(p6_file, tmp_path, capsys):
    other = tmp_path / "p4.gr"
    other.write_text(write_gr(path_graph(4)))
    code = main(["kernelize", "--problem", "ids", "--oracle", "greedy", "--graph", p6_file, str(other),
                 "--parallel-workers", "2"])
    assert code == 0
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 3
    assert lines[1].startswith(str(other)) and lines[2].startswith(p6_file)


def test_parse_error_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.gr"
    bad.write_text("p tds 2 1\n1 1\n")
    assert main(["kernelize", "--problem", "ds", "--graph", str(bad)]) == 2
    assert "error: line 2: self-loop" in capsys.readouterr().err


def test_disconnected_cds_exit_code(tmp_path, capsys):
    split = tmp_path / "split.gr"
    split.write_text("p tds 4 2\n1 2\n3 4\n")
    assert main(["kernelize", "--problem", "cds", "--graph", str(split)]) == 1
    assert "connected" in capsys.readouterr().err


def test_failed_job_sets_the_exit_code(p6_file, tmp_path, capsys):
    split = tmp_path / "split.gr"
    split.write_text("p tds 4 2\n1 2\n3 4\n")
    assert main(["kernelize", "--problem", "cds", "--graph", p6_file, str(split)]) == 1
    captured = capsys.readouterr()
    assert len(captured.out.splitlines()) == 2
    assert str(split) in captured.err


def test_invalid_epsilon(p6_file):
    assert main(["kernelize", "--problem", "ds", "--epsilon", "0", "--graph", p6_file]) == 1


def test_verify_passes(capsys):
    assert main(["verify", "nice", "--count", "2", "--max-n", "6"]) == 0
    assert capsys.readouterr().out.splitlines() == ["suite,checked,passed,failed_seeds", "nice,2,2,"]


def test_verify_negative_control(capsys):
    code = main(["verify", "combine-cds", "--count", "2", "--max-n", "8", "--bound-offset", "-100"])
    assert code == 4
    captured = capsys.readouterr()
    assert "combine-cds,2,0,0 1" in captured.out
    assert "seeds 0, 1" in captured.err


def test_unknown_problem_is_rejected_by_argparse(p6_file):
    with pytest.raises(SystemExit):
        main(["kernelize", "--problem", "hs", "--graph", p6_file])
