import subprocess
import sys

import numpy as np
import pytest

from matroidnet.cli import run
from matroidnet.fileio import (data_files, manifest_text, read_manifest, read_matroid, read_sinks,
                               verify_manifest, write_matroid)
from matroidnet.matroid import VectorMatroid
from matroidnet.network import read_network, write_code, write_network
from matroidnet.reproduce import EXAMPLES, rebuild

from conftest import mat


def cli(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def final_multicast(tmp_path):
    r = rebuild(EXAMPLES["fig3"])
    net = tmp_path / "net.txt"
    code = tmp_path / "code.txt"
    net.write_text(write_network(r.net))
    code.write_text(write_code(r.code))
    return str(net), str(code)


def test_manifest_is_current():
    assert verify_manifest() == []
    assert sorted(read_manifest()) == data_files()
    assert manifest_text().count("\n") == len(data_files())


def test_matroid_file_round_trip():
    m = VectorMatroid(mat([[1, 0, 1], [0, 1, 1]], "gf8"), ["a", "b", 7])
    text = write_matroid(m)
    assert text.splitlines()[-1] == "labels a b 7"
    back = read_matroid(text)
    assert back.ground == ["a", "b", 7]
    assert np.array_equal(back.rep.a, m.rep.a)
    plain = VectorMatroid(mat([[1, 1]]))
    assert "labels" not in write_matroid(plain)
    assert read_matroid(write_matroid(plain)).ground == [1, 2]


def test_read_sinks():
    assert read_sinks("t2 7 8  # wiring\n\nt3 1\n") == {"t2": [6, 7], "t3": [0]}


def test_verify_pass(capsys, final_multicast):
    net, code = final_multicast
    rc, out, _ = cli(capsys, "verify", "--network", net, "--code", code, "--alpha", "1")
    assert rc == 0 and out == "PASS β=2\n"
    rc, out, _ = cli(capsys, "verify", "--network", net, "--code", code, "--beta", "2",
                     "--as-matroid", "--decoders")
    assert rc == 0 and "conditions hold" in out and "decoder t1" in out


def test_verify_failure_prints_witness(capsys, final_multicast):
    net, code = final_multicast
    rc, out, _ = cli(capsys, "verify", "--network", net, "--code", code, "--beta", "3")
    assert rc == 1 and out.startswith("FAIL sink=")


def test_usage_errors(capsys, tmp_path):
    rc, _, err = cli(capsys, "verify", "--network", str(tmp_path / "missing"), "--alpha", "1")
    assert rc == 2 and "cannot read" in err
    assert cli(capsys, "verify", "--network", "x")[0] == 2          # no alpha/beta
    assert cli(capsys, "reproduce", "--example", "nope")[0] == 2
    assert cli(capsys, "construct", "unicast", "--field", "gf6")[0] == 2
    bad = tmp_path / "bad.net"
    bad.write_text("1 1 2 1 gf2\ns source 1\nt sink 1\n2 s t\n")
    rc, _, err = cli(capsys, "verify", "--network", str(bad), "--alpha", "0")
    assert rc == 2 and "bad edge line" in err


def test_construct_writes_outputs(capsys, tmp_path):
    outs = {k: tmp_path / k for k in ("net", "mat", "trace")}
    rc, out, _ = cli(capsys, "construct", "unicast", "--n", "3", "--alpha", "1", "--nc", "2",
                     "--seed", "4", "--out-network", str(outs["net"]), "--out-matroid",
                     str(outs["mat"]), "--out-trace", str(outs["trace"]))
    assert rc == 0 and out.splitlines()[-1] == "verify: PASS β=2"
    net, code = read_network(outs["net"].read_text())
    assert code is not None and len(net.sinks) == 3
    assert read_matroid(outs["mat"].read_text()).full_rank == net.n + len(net.eligible)
    rc2, out2, _ = cli(capsys, "construct", "unicast", "--n", "3", "--alpha", "1",
                       "--replay", str(outs["trace"]))
    assert rc2 == 0 and out2.splitlines()[1:] == out.splitlines()[1:]


def test_construct_failure(capsys):
    rc, out, _ = cli(capsys, "construct", "multicast", "--field", "gf2", "--sinks", "2", "--nc", "3")
    assert rc == 1 and out.startswith("FAIL construction: no extension found")


def test_reproduce_example(capsys):
    rc, out, _ = cli(capsys, "reproduce", "--example", "fig5")
    assert rc == 0 and out.startswith("fig5: PASS")
    assert "[FAIL]" not in out


def test_export_dot(capsys, final_multicast, tmp_path):
    net, code = final_multicast
    rc, out, _ = cli(capsys, "export-dot", "--network", net, "--code", code, "--labels")
    assert rc == 0 and out.startswith("digraph network {")
    dest = tmp_path / "g.dot"
    assert cli(capsys, "export-dot", "--network", net, "--code", code, "--labels", "-o", str(dest))[0] == 0
    assert dest.read_text() == out


def test_console_entry_point(final_multicast):
    net, code = final_multicast
    p = subprocess.run([sys.executable, "-m", "matroidnet.cli", "verify", "--network", net,
                        "--code", code, "--alpha", "1"], capture_output=True, text=True)
    assert p.returncode == 0 and p.stdout == "PASS β=2\n"
