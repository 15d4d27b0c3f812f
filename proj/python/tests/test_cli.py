# Copyright (c) 2026 wdmtwin authors
# SPDX-License-Identifier: Apache-2.0
"""End-to-end checks of the command line tool (probe -> train -> predict ->
optimize -> evaluate), exit codes, and file format contracts."""

import json
import os
import subprocess

import pytest

import wdmtwin as wt

CLI = os.environ.get("WDMTWIN_CLI")

pytestmark = pytest.mark.skipif(CLI is None, reason="WDMTWIN_CLI not set")


def run(*args, expect=0):
    proc = subprocess.run([CLI, *map(str, args)], capture_output=True,
                          text=True)
    assert proc.returncode == expect, proc.stderr
    return proc


@pytest.fixture(scope="module")
def workdir(tmp_path_factory):
    d = tmp_path_factory.mktemp("cli")
    wt.default_scenario(str(d))
    return d


def header_of(path):
    with open(path) as f:
        for line in f:
            if not line.startswith("#"):
                return line.strip()
    return ""


def test_full_workflow(workdir):
    topo = workdir / "topology.json"
    cfg = workdir / "train.json"
    cfg.write_text(json.dumps({"n_train": 10, "n_val": 3, "epochs": 6}))

    run("probe", "--topology", topo, "--path", "train", "--count", 13,
        "--config", cfg, "--out", workdir / "probes.csv")
    run("train", "--topology", topo, "--path", "train", "--probes",
        workdir / "probes.csv", "--config", cfg, "--out",
        workdir / "model.json", "--curve", workdir / "curve.csv")

    opt_cfg = workdir / "opt.json"
    opt_cfg.write_text(json.dumps({"tau_schedule": [1.0, 4.0],
                                   "iters_per_stage": 15}))
    run("optimize", "--topology", topo, "--path", "short", "--model",
        workdir / "model.json", "--variant", "full", "--config", opt_cfg,
        "--out", workdir / "profile.csv", "--trace", workdir / "trace.csv")

    run("predict", "--topology", topo, "--path", "short", "--model",
        workdir / "model.json", "--profile", workdir / "profile.csv",
        "--toggles", "full", "--out", workdir / "report_twin.csv")
    run("evaluate", "--topology", topo, "--path", "short", "--profile",
        workdir / "profile.csv", "--out", workdir / "report_truth.csv")

    # both reports share the same header and row count
    h1 = header_of(workdir / "report_twin.csv")
    h2 = header_of(workdir / "report_truth.csv")
    assert h1 == h2 == ("ch,f_thz,lambda_nm,p_dbm,ase_dbm,nli_dbm,"
                        "osnr_db,snr_db,margin_db")
    n1 = sum(1 for l in open(workdir / "report_twin.csv")
             if not l.startswith("#")) - 1
    assert n1 == 48


def test_exit_codes(workdir, tmp_path):
    # usage error
    proc = subprocess.run([CLI, "predict"], capture_output=True, text=True)
    assert proc.returncode == 1
    # unknown subcommand
    proc = subprocess.run([CLI, "bogus"], capture_output=True, text=True)
    assert proc.returncode == 1
    # schema error
    bad = tmp_path / "bad.json"
    bad.write_text('{"grid": {"n_ch": 48}}')
    proc = subprocess.run(
        [CLI, "probe", "--topology", str(bad), "--path", "train", "--out",
         str(tmp_path / "x.csv")], capture_output=True, text=True)
    assert proc.returncode == 2
    assert "grid" in proc.stderr
    # unknown path id is a validation error
    proc = subprocess.run(
        [CLI, "evaluate", "--topology", str(workdir / "topology.json"),
         "--path", "nope", "--out", str(tmp_path / "y.csv")],
        capture_output=True, text=True)
    assert proc.returncode == 2


def test_repro_quick_determinism(tmp_path):
    a = tmp_path / "a"
    b = tmp_path / "b"
    run("repro-paper", "--workdir", a, "--quick")
    run("repro-paper", "--workdir", b, "--quick")
    names = sorted(p.name for p in a.iterdir())
    assert names == sorted(p.name for p in b.iterdir())
    for n in names:
        assert (a / n).read_bytes() == (b / n).read_bytes(), n
    assert (a / "summary.csv").exists()
