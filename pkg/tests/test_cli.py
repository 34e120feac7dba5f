from __future__ import annotations

import io
import subprocess
import sys

import pytest

from conftest import MULTI_CORES, MULTI_TABLE
from rdca.cli import main
from rdca.reactions import dumps_reaction, from_table, mirror_reaction
from rdca.simulate import DEFAULT_SEED


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


@pytest.fixture
def multi_file(tmp_path):
    path = tmp_path / "multi.txt"
    path.write_text(dumps_reaction(from_table(30, 3, MULTI_TABLE)))
    return str(path)


class TestValidate:
    def test_pass(self, multi_file):
        assert run("validate", multi_file) == (0, "PASS\n")

    def test_fail(self, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("7 3\n0 1 1 3 7 7 7 7\n")
        assert run("validate", str(path)) == (1, "FAIL f(u)<u violated at u=1\n")

    def test_generated_truncated(self):
        code, text = run("validate", "--truncated", "--K", "20", "--a", "5", "--lambda", "0.05", "--print")
        assert code == 0 and text.endswith("PASS\n") and text.startswith("20 5\n")

    def test_io_errors(self, tmp_path):
        assert run("validate", str(tmp_path / "missing.txt"))[0] == 2
        path = tmp_path / "junk.txt"
        path.write_text("seven three\n")
        assert run("validate", str(path))[0] == 2


class TestConstruct:
    def test_all_fronts(self, multi_file):
        code, text = run("construct", "--reaction", multi_file, "--delta", "5", "--all")
        assert code == 0
        cores = {tuple(int(t) for t in ln.split()[2:]) for ln in text.splitlines()}
        assert cores == MULTI_CORES
        assert all(ln.split()[:2] == ["30", "7"] for ln in text.splitlines())

    def test_first_only(self, multi_file):
        code, text = run("construct", "--reaction", multi_file, "--delta", "5")
        assert code == 0 and text == "30 7 5 11 20 24 28 29\n"

    def test_nonexistence(self):
        assert run("construct", "--maximal", "--K", "7", "--a", "3", "--delta", "3") == (3, "")

    def test_right_side_on_mirror(self, tmp_path):
        path = tmp_path / "mirror.txt"
        path.write_text(dumps_reaction(mirror_reaction(from_table(30, 3, MULTI_TABLE))))
        code, text = run("construct", "--reaction", str(path), "--delta", "5", "--side", "right", "--all")
        assert code == 0
        mirrored = {tuple(30 - v for v in reversed(c)) for c in MULTI_CORES}
        assert {tuple(int(t) for t in ln.split()[2:]) for ln in text.splitlines()} == mirrored

    def test_limit_exit(self, multi_file):
        assert run("construct", "--reaction", multi_file, "--delta", "5", "--branch-limit", "1")[0] == 4

    def test_missing_delta(self, multi_file):
        assert run("construct", "--reaction", multi_file)[0] == 2


class TestOtherCommands:
    def test_pinned(self):
        code, text = run("pinned", "--maximal", "--K", "8", "--a", "4", "--delta", "4", "--all")
        assert code == 0 and "8 4 2 4 6" in text.splitlines()
        assert run("pinned", "--maximal", "--K", "7", "--a", "3", "--delta", "3")[0] == 3

    def test_detect(self):
        code, text = run("detect", "--maximal", "--K", "7", "--a", "3", "--delta", "3", "--core", "3,4",
                         "--m-max", "6", "--t-max", "40", "--pad", "30")
        assert code == 0 and text.splitlines()[0] == "-1 2 -1 2"

    def test_detect_window_too_small(self):
        code, _ = run("detect", "--maximal", "--K", "7", "--a", "3", "--delta", "3", "--core", "3,4", "--pad", "3")
        assert code == 4

    def test_detect_window_file(self, tmp_path):
        path = tmp_path / "w.txt"
        path.write_text("0 7 " + " ".join(["0"] * 30 + ["3", "4"] + ["7"] * 30) + "\n")
        code, text = run("detect", "--maximal", "--K", "7", "--a", "3", "--delta", "3", "--window", str(path),
                         "--m-max", "6", "--t-max", "40")
        assert code == 0 and text.startswith("-1 2 ")

    def test_atlas(self):
        code, text = run("atlas", "--maximal", "--K", "7")
        lines = text.splitlines()
        assert code == 0 and lines[1].split() == ["2", "3", "4", "5"]
        rows = {ln.split()[0]: ln.split()[1:] for ln in lines[2:]}
        assert rows["d=1"] == ["P", "P", "P", "P"]
        assert rows["d=3"] == ["L", "Z", "Z", "R"]
        assert rows["d=10"] == ["L", "Z", "Z", "R"]

    def test_atlas_check(self):
        for K in ("7", "8", "9"):
            assert run("atlas", "--maximal", "--K", K, "--check")[0] == 0
            assert run("atlas", "--maximal", "--K", K, "--generic", "--check")[0] == 0

    def test_render(self, tmp_path):
        pgm = tmp_path / "out.pgm"
        code, text = run("render", "--maximal", "--K", "7", "--a", "3", "--delta", "3", "--core", "3,4",
                         "--pad", "6", "--steps", "4", "--pgm", str(pgm))
        rows = text.splitlines()
        assert code == 0 and len(rows) == 5 and rows[2] == rows[0][1:] + "@"
        assert pgm.read_text().startswith("P2\n14 5\n255\n")


SWEEP = ("sweep", "--K", "12", "--a", "2:4", "--delta", "1:3", "--lambda", "0.1", "0.001", "--replicates", "2")


class TestSweep:
    def test_csv_to_stdout(self):
        code, text = run(*SWEEP)
        lines = text.splitlines()
        assert code == 0 and len(lines) == 1 + 3 * 3 * 2 * 2
        assert lines[0] == "K,a,delta,lambda,replicate,seed,kind,c,m,gamma_num,gamma_den"

    def test_jobs_byte_identical(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        assert run(*SWEEP, "--out", str(a))[0] == 0
        assert run(*SWEEP, "--out", str(b), "--jobs", "4")[0] == 0
        assert a.read_bytes() == b.read_bytes()
        assert (tmp_path / "a.meta").read_text() == (tmp_path / "b.meta").read_text()

    def test_seed_sources(self, tmp_path, monkeypatch):
        default = run(*SWEEP)[1]
        assert f",{DEFAULT_SEED}," not in default  # per-replicate seeds are mixed
        monkeypatch.setenv("RDCA_SEED", "42")
        env = run(*SWEEP)[1]
        assert env != default
        assert run(*SWEEP, "--seed", "42")[1] == env
        cfg = tmp_path / "c.cfg"
        cfg.write_text("seed=7\n")
        from_config = run("--config", str(cfg), *SWEEP)[1]
        assert from_config == run(*SWEEP, "--seed", "7")[1]
        # flag beats config beats environment/default
        assert run("--config", str(cfg), *SWEEP, "--seed", "42")[1] == env

    def test_config_supplies_everything(self, tmp_path):
        cfg = tmp_path / "c.cfg"
        cfg.write_text("# sweep setup\nK=12\na=2:4\ndelta=1:3\nlambda=0.1 0.001\nreplicates=2\n")
        assert run("--config", str(cfg), "sweep")[1] == run(*SWEEP)[1]

    def test_bad_config(self, tmp_path):
        cfg = tmp_path / "c.cfg"
        cfg.write_text("not a pair\n")
        assert run("--config", str(cfg), *SWEEP)[0] == 2

    def test_summary(self, tmp_path):
        code, text = run(*SWEEP, "--out", str(tmp_path / "s.csv"), "--summary")
        assert code == 0 and "lambda=0.1 a=2 delta=1" in text

    def test_missing_options(self):
        assert run("sweep", "--K", "12")[0] == 2


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "rdca", "construct", "--maximal", "--K", "7", "--a", "3", "--delta", "3"],
        capture_output=True,
    )
    assert proc.returncode == 3
