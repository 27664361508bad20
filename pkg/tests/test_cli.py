"""
Unit tests for disruptkit.

Test functions from module cli.
"""

import json
import pathlib

import pytest

from disruptkit import cli


DIR_DATA = "test_data"
PATH_ROOT_DATA = pathlib.Path(__file__).parent / DIR_DATA
NODES = str(PATH_ROOT_DATA / "six_nodes.jsonl")
EDGES = str(PATH_ROOT_DATA / "six_edges.csv")
FOCAL = str(PATH_ROOT_DATA / "focal_ids.txt")


def ingest(tmpdir, edges=EDGES):
    """Build the graph cache of the 6-paper corpus in `tmpdir`."""
    out = str(tmpdir / "six.dkg")
    return cli.dispatch(["ingest", "--nodes", NODES, "--edges", edges, "--out", out]), out


def read_lines(path):
    with open(path, encoding="utf-8") as f:
        return f.read().splitlines()


class TestIngest():
    """Test class for the ingest command."""

    def test_ingest(self, tmpdir):
        """Test the cache and its manifest.

        Parameters
        ----------
        tmpdir: function
            pytest callback which return a unique directory.
        """
        code, out = ingest(tmpdir)
        assert code == cli.EXIT_OK
        assert pathlib.Path(out).is_file()
        with open(f"{out}.manifest.json", encoding="utf-8") as f:
            manifest = json.load(f)
        assert manifest["command"] == "ingest"
        assert manifest["rows"] == 6
        assert manifest["extra"]["stats"]["n_edges"] == 6
        assert manifest["extra"]["coverage"]["n_missing_elements"] == 1

    def test_bad_edges(self, tmpdir):
        """A malformed edge file is a data error."""
        code, _ = ingest(tmpdir, str(PATH_ROOT_DATA / "bad_header_edges.csv"))
        assert code == cli.EXIT_DATA

    def test_missing_file(self, tmpdir):
        """A missing input file is a usage error."""
        code, _ = ingest(tmpdir, str(tmpdir / "nowhere.csv"))
        assert code == cli.EXIT_USAGE


class TestCompute():
    """Test class for the compute command."""

    def test_focal_file(self, tmpdir, capfd):
        """P0 scores 0 with one F, one B and one R paper; r1 has no reference.

        Parameters
        ----------
        tmpdir: function
            pytest callback which return a unique directory.
        capfd: function
            pytest fixture capturing the standard output.
        """
        _, graph = ingest(tmpdir)
        code = cli.dispatch(["compute", "--graph", graph, "--focal", FOCAL])
        assert code == cli.EXIT_OK
        lines = capfd.readouterr().out.splitlines()
        assert lines[0] == "fp_id,indicator,window,value,n_f,n_b,n_r,t_r,c,r,m_t,n_t,warnings"
        assert len(lines) == 3
        assert lines[1].startswith("P0,di1,unbounded,0.00000000000,1,1,1,")
        assert lines[2].startswith("r1,di1,unbounded,NA,,,,,,,,,")
        assert lines[2].endswith("zero_reference_artifact")

    def test_out_and_manifest(self, tmpdir):
        """Scores go to --out with a manifest next to them."""
        _, graph = ingest(tmpdir)
        out = str(tmpdir / "scores.csv")
        code = cli.dispatch(["compute", "--graph", graph, "--focal", FOCAL,
                             "--indicator", "dep", "--window", "rel3", "--out", out])
        assert code == cli.EXIT_OK
        assert read_lines(out)[1].startswith("P0,dep,rel3,0.500000000000,")
        with open(f"{out}.manifest.json", encoding="utf-8") as f:
            manifest = json.load(f)
        assert manifest["config"]["label"] == "dep"
        assert manifest["rows"] == 2
        assert manifest["warnings"]["zero_reference_artifact"] == 1
        assert manifest["extra"]["short_window"] is False

    def test_no_eligible_paper(self, tmpdir, capfd):
        """Default thresholds leave a header-only file."""
        _, graph = ingest(tmpdir)
        assert cli.dispatch(["compute", "--graph", graph]) == cli.EXIT_OK
        assert capfd.readouterr().out.splitlines() == [
            "fp_id,indicator,window,value,n_f,n_b,n_r,t_r,c,r,m_t,n_t,warnings"]

    def test_jobs(self, tmpdir):
        """One or two workers write the same bytes."""
        _, graph = ingest(tmpdir)
        outputs = []
        for jobs in ("1", "2"):
            out = str(tmpdir / f"scores_{jobs}.csv")
            code = cli.dispatch(["compute", "--graph", graph, "--min-refs", "0",
                                 "--min-cites", "0", "--jobs", jobs, "--out", out])
            assert code == cli.EXIT_OK
            with open(out, "rb") as f:
                outputs.append(f.read())
        assert outputs[0] == outputs[1]
        assert outputs[0].count(b"\n") == 5

    @pytest.mark.parametrize('flags', [
        ["--indicator", "nonsense"],
        ["--window", "rel0"],
        ["--l", "1"],
        ["--indicator", "ed", "--alpha", "2"],
        ["--jobs", "0"],
        ["--indicator", "dep", "--no-r"],
    ])
    def test_usage_errors(self, tmpdir, flags):
        """Test for bad flags.

        Parameters
        ----------
        tmpdir: function
            pytest callback which return a unique directory.
        flags : list of str
            Extra flags of the compute command.
        """
        _, graph = ingest(tmpdir)
        assert cli.dispatch(["compute", "--graph", graph] + flags) == cli.EXIT_USAGE

    def test_bad_jobs_variable(self, tmpdir, monkeypatch):
        """An invalid DISRUPTKIT_JOBS is a usage error.

        Parameters
        ----------
        tmpdir: function
            pytest callback which return a unique directory.
        monkeypatch: function
            pytest fixture setting environment variables.
        """
        _, graph = ingest(tmpdir)
        monkeypatch.setenv(cli.JOBS_VARIABLE, "many")
        assert cli.dispatch(["compute", "--graph", graph]) == cli.EXIT_USAGE

    def test_unknown_focal(self, tmpdir):
        """Unknown focal ids are a data error."""
        _, graph = ingest(tmpdir)
        focal = tmpdir / "ids.txt"
        focal.write_text("P0\nnope\n", encoding="utf-8")
        assert cli.dispatch(["compute", "--graph", graph, "--focal", str(focal)]) == \
            cli.EXIT_DATA

    def test_not_a_cache(self, tmpdir):
        """A file that is not a graph cache is a data error."""
        assert cli.dispatch(["compute", "--graph", EDGES]) == cli.EXIT_DATA


def test_trajectory(tmpdir, capfd):
    """c1 arrives at t=1, c2 at t=2 and c3 at t=3.

    Parameters
    ----------
    tmpdir: function
        pytest callback which return a unique directory.
    capfd: function
        pytest fixture capturing the standard output.
    """
    _, graph = ingest(tmpdir)
    code = cli.dispatch(["trajectory", "--graph", graph, "--focal", FOCAL, "--max-t", "3"])
    assert code == cli.EXIT_OK
    lines = capfd.readouterr().out.splitlines()
    assert lines[0] == "fp_id,indicator,t,value,warnings"
    assert lines[1:4] == ["P0,di1,1,1.00000000000,",
                          "P0,di1,2,0.00000000000,",
                          "P0,di1,3,0.00000000000,"]
    assert len(lines) == 7
    assert lines[4:] == ["r1,di1,1,NA,zero_reference_artifact",
                         "r1,di1,2,NA,zero_reference_artifact",
                         "r1,di1,3,NA,zero_reference_artifact"]


class TestClassify():
    """Test class for the classify command."""

    def test_wei(self, tmpdir, capfd):
        """P0: DI_1 = 0 and two citations."""
        _, graph = ingest(tmpdir)
        code = cli.dispatch(["classify", "--graph", graph, "--scheme", "wei",
                             "--focal", FOCAL])
        assert code == cli.EXIT_OK
        assert capfd.readouterr().out.splitlines() == [
            "fp_id,scheme,x,y,label",
            "P0,wei,0,2,low_impact_incremental",
            "r1,,NA,2,NA"]

    def test_chen(self, tmpdir):
        """Labels and default cuts in the manifest."""
        _, graph = ingest(tmpdir)
        out = str(tmpdir / "labels.csv")
        code = cli.dispatch(["classify", "--graph", graph, "--scheme", "chen",
                             "--focal", FOCAL, "--out", out])
        assert code == cli.EXIT_OK
        lines = read_lines(out)
        assert lines[0] == "fp_id,scheme,x,y,label"
        assert lines[1].startswith("P0,chen,")
        assert lines[2] == "r1,,NA,NA,NA"
        with open(f"{out}.manifest.json", encoding="utf-8") as f:
            manifest = json.load(f)
        assert manifest["extra"]["scheme"] == "chen"
        assert manifest["extra"]["cuts"]["default_medians"] is True

    def test_missing_scheme(self, tmpdir):
        """--scheme is required."""
        _, graph = ingest(tmpdir)
        assert cli.dispatch(["classify", "--graph", graph]) == cli.EXIT_USAGE


def test_rank(tmpdir):
    """Percentiles and inverse DEP of a score file.

    Parameters
    ----------
    tmpdir: function
        pytest callback which return a unique directory.
    """
    _, graph = ingest(tmpdir)
    scores = str(tmpdir / "scores.csv")
    cli.dispatch(["compute", "--graph", graph, "--focal", FOCAL, "--indicator", "dep",
                  "--out", scores])
    out = str(tmpdir / "ranks.csv")
    code = cli.dispatch(["rank", "--scores", scores, "--inverse-dep", "--out", out])
    assert code == cli.EXIT_OK
    assert read_lines(out) == ["fp_id,indicator,value,percentile,inverse_dep",
                               "P0,dep,0.500000000000,50.0000000000,1.00000000000",
                               "r1,dep,NA,NA,NA"]


def test_rank_bad_file(tmpdir):
    """A score file without value column is a data error."""
    scores = tmpdir / "scores.csv"
    scores.write_text("fp_id,indicator\nA,di1\n", encoding="utf-8")
    assert cli.dispatch(["rank", "--scores", str(scores)]) == cli.EXIT_DATA


def test_validate(capfd):
    """Every golden vector passes.

    Parameters
    ----------
    capfd: function
        pytest fixture capturing the standard output.
    """
    assert cli.dispatch(["validate"]) == cli.EXIT_OK
    out = capfd.readouterr().out
    assert out.count("PASS  ") == 12
    assert out.endswith("12/12 golden vectors passed.\n")
