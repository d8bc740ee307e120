import io
import json
import os
import subprocess
import sys

import pytest

from glob_coherator import cli
from glob_coherator import groups as gr
from glob_coherator import models as md

SMALL = ["--max-table-len", "3", "--max-entry", "1"]


def run(*argv):
    buf = io.BytesIO()
    code = cli.run(list(argv), buf)
    return code, buf.getvalue()


def report(*argv):
    code, out = run(*argv)
    return code, json.loads(out)


@pytest.fixture
def files(tmp_path):
    iso = md.groupoid_to_model(md.walking_iso())
    pt = md.groupoid_to_model(md.point())
    (tmp_path / "iso.model").write_text(md.write_model(iso))
    (tmp_path / "pt.model").write_text(md.write_model(pt))
    (tmp_path / "z3.model").write_text(md.write_model(md.groupoid_to_model(md.group_as_groupoid(gr.cyclic(3)))))
    (tmp_path / "into.json").write_text(json.dumps({"dom": "pt.model", "cod": "iso.model",
                                                    "cells": {"x": "x", "1x": "1x"}}))
    (tmp_path / "collapse.json").write_text(json.dumps({"dom": "iso.model", "cod": "pt.model",
                                                        "cells": {"x": "x", "y": "x", "1x": "1x", "a": "1x",
                                                                  "a'": "1x", "1y": "1x"}}))
    (tmp_path / "two.model").write_text(md.write_model(md.groupoid_to_model(md.discrete_groupoid(["x", "y"]))))
    (tmp_path / "miss.json").write_text(json.dumps({"dom": "pt.model", "cod": "two.model",
                                                    "cells": {"x": "x", "1x": "1x"}}))
    (tmp_path / "typo.json").write_text(json.dumps({"dom": "pt.model", "cod": "two.model",
                                                    "cells": {"x": "zz", "1x": "1x"}}))
    (tmp_path / "glob.json").write_text(json.dumps({"dims": [["x", "y"], ["a"]], "src": [{"a": "x"}],
                                                    "tgt": [{"a": "y"}]}))
    (tmp_path / "bad.json").write_text('{"dims": [["x"]],\n  "src": oops}')
    # one entry short, so i1 is no longer total
    text = md.write_model(iso).replace("((a)) -> a', ", "")
    (tmp_path / "partial.model").write_text(text)
    return tmp_path


def test_theta_hom_counts():
    code, r = report("theta-hom", "(1,0,1)", "(1)")
    assert code == 0 and r["count"] == 2


def test_theta_hom_zigzag_is_invalid_input():
    code, r = report("theta-hom", "(1,2,1)", "(1)")
    assert code == 2 and "zig-zag" in r["message"]


@pytest.mark.slow
def test_yang_baxter_golden():
    code, r = report("law-check", "yang-baxter", "--i", "0", "--j", "1", "--k", "2", "--depth", "2")
    assert code == 0 and r["reports"][0]["counts"]["distinct"] == 0


def test_law_check_mutation_exits_one():
    code, out = run("law-check", "unit-triangle-2", "--i", "0", "--j", "1", *SMALL, "--mutation", "lambda-swap",
                    "--composite", "20", "--format", "text")
    assert code == 1
    # counterexample terms appear verbatim in the text report
    assert b"counterexamples[0].term: comp(gen(L0:(1)#" in out


def test_unknown_law_is_invalid():
    assert run("law-check", "nope")[0] == 2


def test_pushout_sweep_golden():
    code, r = report("pushout-sweep", "--level", "1", "--max-objects", "3")
    assert code == 0 and r["verdict"] == "pass" and r["rows"] == []


def test_empty_sweep_is_vacuous():
    code, r = report("pushout-sweep", "--level", "1", "--max-objects", "0")
    assert code == 0 and r["vacuous"] is True and r["rows"] == []


def test_pushout_at_level_two_is_invalid():
    assert run("pushout-sweep", "--level", "2")[0] == 2


@pytest.mark.parametrize("argv,code", [(["--sat-depth", "1"], 3), (["--sat-depth", "3"], 0),
                                       (["--mutation", "drop-inverse"], 1), (["--k", "1"], 0)])
def test_free_pushout_exit_codes(argv, code):
    got, r = report("free-pushout", "--level", "1", *argv)
    assert got == code
    assert "flag" not in r


def test_tower_and_chain(files):
    code, r = report("tower-build", "--depth", "2", *SMALL)
    assert code == 0 and [s["lifts"] for s in r["stages"]] == [0, 14, 90]
    assert r["budget"]["max_table_len"] == 3
    code, r = report("chain-build", "--n", "1", *SMALL)
    assert code == 0 and r["stages"][-1]["stage"] == "IC_2^<=1"


def test_globset_validate(files):
    code, r = report("globset-validate", str(files / "glob.json"))
    assert code == 0 and r["counts"] == [2, 1]
    code, r = report("globset-validate", str(files / "bad.json"))
    assert code == 2 and r["line"] == 2


def test_model_validate(files):
    code, r = report("model-validate", str(files / "iso.model"), "--level", "1")
    assert code == 0
    assert report("model-validate", str(files / "iso.model"), "--level", "2")[0] == 2
    code, r = report("model-validate", str(files / "partial.model"))
    assert code == 2 and "not total" in r["message"]
    assert run("model-validate", str(files / "missing.model"))[0] == 2


def test_homotopy_commands(files):
    code, r = report("homotopy", "pi0", str(files / "iso.model"))
    assert code == 0 and r["components"] == [["x", "y"]]
    code, r = report("homotopy", "pik", str(files / "z3.model"), "--k", "1")
    assert code == 0 and r["groups"][0]["order"] == 3
    code, r = report("homotopy", "we", str(files / "into.json"))
    assert code == 0 and r["result"] == "WeakEquivalence"
    # the walking iso is contractible, so collapsing it is an equivalence
    code, r = report("homotopy", "we", str(files / "collapse.json"))
    assert code == 0
    code, r = report("homotopy", "we", str(files / "miss.json"))
    assert code == 1 and r["result"] == "Not"
    code, r = report("homotopy", "we", str(files / "typo.json"))
    assert code == 2 and "zz" in r["message"]
    assert run("homotopy", "pik", str(files / "z3.model"), "--x", "nowhere")[0] == 2


def test_pushout_sweep_on_a_model_file(files):
    code, r = report("pushout-sweep", "--model", str(files / "z3.model"), "--rows")
    assert code == 0 and len(r["rows"]) == 1 + 3 + 3


def test_reports_are_deterministic():
    a = run("free-pushout", "--sat-depth", "3", "--format", "text")
    assert a == run("free-pushout", "--sat-depth", "3", "--format", "text", "--seed", "7")


def test_bad_arguments():
    assert run()[0] == 2
    assert run("theta-hom")[0] == 2
    assert run("free-pushout", "--mutation", "other")[0] == 2


def test_module_entry_point():
    env = dict(os.environ)
    p = subprocess.run([sys.executable, "-m", "glob_coherator", "theta-hom", "(1)", "(0)"], capture_output=True,
                       env=env)
    assert p.returncode == 0 and json.loads(p.stdout)["count"] == 2
