import json
import shutil
import threading
import time

import numpy as np
import pytest

import walkgate as wg
from walkgate.cli import build_parser, main

from test_gate import ROW_SUMS_X1


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_truth_table_json(capsys, u, enc):
    code, out, err = run_cli(capsys, "truth-table", "--x", "1")
    assert code == 0 and err == ""
    body = json.loads(out)
    np.testing.assert_allclose(body["success"], ROW_SUMS_X1, atol=1e-12)
    assert [int(np.argmax(row)) for row in body["matrix"]] == [0, 1, 3, 2]
    assert body["encoding"]["aux"] == [1, 6]


def test_truth_table_x0_matches_library(capsys, u, enc):
    code, out, _ = run_cli(capsys, "truth-table", "--x", "0")
    assert code == 0
    body = json.loads(out)
    expected = wg.logical_transfer_matrix(u, enc, x=0.0).probs
    np.testing.assert_allclose(body["matrix"], expected, atol=1e-15)


def test_truth_table_csv_header(capsys):
    code, out, _ = run_cli(capsys, "truth-table", "--format", "csv")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "input,out_00,out_01,out_10,out_11,success,phase_rad"
    assert len(lines) == 5


def test_identical_invocations_are_byte_identical(capsys):
    outputs = []
    for _ in range(2):
        code, out, _ = run_cli(capsys, "bell", "--x", "0.5", "--counts", "999", "--seed", "4",
                               "--format", "csv")
        assert code == 0
        outputs.append(out)
    assert outputs[0] == outputs[1]
    outputs = []
    for _ in range(2):
        code, out, _ = run_cli(capsys, "design", "--format", "json")
        assert code == 0
        outputs.append(out)
    assert outputs[0] == outputs[1]


def test_evolve_first_mode_stays_in_decoupled_pair(capsys):
    code, out, _ = run_cli(capsys, "evolve", "--input", "1", "--steps", "9")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "z,i_1,i_2,i_3,i_4,i_5,i_6"
    for line in lines[1:]:
        cells = line.split(",")
        assert cells[3:] == ["0.0", "0.0", "0.0", "0.0"]


def test_evolve_pair_emits_pair_columns(capsys):
    code, out, _ = run_cli(capsys, "evolve", "--input", "3,4", "--steps", "5")
    assert code == 0
    lines = out.splitlines()
    assert len(lines[0].split(",")) == 22
    for line in lines[1:]:
        assert sum(float(v) for v in line.split(",")[1:]) == pytest.approx(1.0, abs=1e-9)


def test_hom_scan_zero_visibility_is_flat(capsys):
    code, out, _ = run_cli(capsys, "hom-scan", "--input", "3,4", "--steps", "7",
                           "--visibility", "0")
    assert code == 0
    rows = [line.split(",")[2:] for line in out.splitlines()[1:]]
    assert all(row == rows[0] for row in rows)


def test_hom_scan_has_dip_at_center(capsys):
    code, out, _ = run_cli(capsys, "hom-scan", "--input", "3,4", "--steps", "5")
    assert code == 0
    lines = out.splitlines()
    col = lines[0].split(",").index("p_3_4")
    values = [float(line.split(",")[col]) for line in lines[1:]]
    assert values[2] < 0.1 * values[0]


def test_validation_exit_codes(capsys, tmp_path):
    assert run_cli(capsys, "truth-table", "--x", "2")[0] == 2
    assert run_cli(capsys, "evolve", "--input", "3", "--steps", "1")[0] == 2
    assert run_cli(capsys, "evolve", "--input", "3;4")[0] == 2
    assert run_cli(capsys, "hom-scan", "--input", "3,4", "--tau-min-ps", "2",
                   "--tau-max-ps", "-2")[0] == 2
    assert run_cli(capsys, "sample", "--probs", "0.6,0.6", "--total", "10")[0] == 2
    assert run_cli(capsys, "sample", "--probs", "0.5,0.5", "--probs-file", "x.csv",
                   "--total", "10")[0] == 2
    assert run_cli(capsys, "fidelity", str(tmp_path / "nope.csv"), str(tmp_path / "nope.csv"))[0] == 2
    assert run_cli(capsys, "design", "--builtin", "qft")[0] == 2
    assert run_cli(capsys, "design", "--reference-mode", "7")[0] == 2


def test_validation_errors_go_to_stderr(capsys):
    code, out, err = run_cli(capsys, "truth-table", "--x", "2")
    assert code == 2
    assert out == ""
    assert err.startswith("error:")


def test_fidelity_shape_mismatch_is_validation_error(capsys, tmp_path):
    a = tmp_path / "a.csv"
    b = tmp_path / "b.csv"
    a.write_text("1.0,0.0\n0.0,1.0\n")
    b.write_text("1.0,0.0\n")
    assert run_cli(capsys, "fidelity", str(a), str(b))[0] == 2


def test_fidelity_negative_entries_are_domain_error(capsys, tmp_path):
    a = tmp_path / "a.csv"
    a.write_text("1.0,-0.5\n")
    assert run_cli(capsys, "fidelity", str(a), str(a))[0] == 3


def test_fidelity_identical_files(capsys, tmp_path):
    a = tmp_path / "a.csv"
    a.write_text("# transfer matrix\n0.25,0.0\n0.5,0.25\n")
    code, out, _ = run_cli(capsys, "fidelity", str(a), str(a))
    assert code == 0
    assert out == "1.0\n"


def test_design_infeasible_target_is_domain_error(capsys, tmp_path):
    target = tmp_path / "target.json"
    target.write_text(json.dumps({"beta": [0.0] * 6, "kappa": [-40, -1, -1, -1, -1]}))
    code, _, err = run_cli(capsys, "design", "--target", str(target))
    assert code == 3
    assert "error:" in err


def test_design_target_file_matching_builtin(capsys, tmp_path, ht):
    target = tmp_path / "target.json"
    target.write_text(json.dumps({"beta": list(ht.beta), "kappa": list(ht.kappa)}))
    code, from_file, _ = run_cli(capsys, "design", "--target", str(target))
    assert code == 0
    code, from_builtin, _ = run_cli(capsys, "design", "--builtin", "cnot")
    assert code == 0
    assert from_file == from_builtin


def test_design_csv_shape(capsys):
    code, out, _ = run_cli(capsys, "design", "--L", "700", "--format", "csv")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "waveguide,width_um,gap_after_um"
    assert len(lines) == 7
    assert lines[2].split(",")[2] == "20.0"
    assert lines[6].endswith(",")


def test_design_table_dir_override(capsys, tmp_path, monkeypatch):
    for kind in ("beta_vs_width", "kappa_vs_gap"):
        shutil.copy(wg.default_table_path(kind), tmp_path / f"{kind}.csv")
    code, default_out, _ = run_cli(capsys, "design")
    assert code == 0
    monkeypatch.setenv("WALKGATE_TABLE_DIR", str(tmp_path))
    code, env_out, _ = run_cli(capsys, "design")
    assert code == 0
    assert env_out == default_out
    monkeypatch.delenv("WALKGATE_TABLE_DIR")
    code, flag_out, _ = run_cli(capsys, "design", "--table-dir", str(tmp_path))
    assert code == 0
    assert flag_out == default_out


def test_sample_from_file(capsys, tmp_path):
    probs = tmp_path / "probs.csv"
    probs.write_text("0.25\n0.0\n0.5\n0.25\n")
    code, from_file, _ = run_cli(capsys, "sample", "--probs-file", str(probs),
                                 "--total", "100", "--seed", "8")
    assert code == 0
    code, inline, _ = run_cli(capsys, "sample", "--probs", "0.25,0,0.5,0.25",
                              "--total", "100", "--seed", "8")
    assert code == 0
    assert from_file == inline
    assert sum(json.loads(inline)["counts"]) == 100


def test_serve_is_available():
    help_text = build_parser().format_help()
    assert "serve" in help_text


@pytest.fixture(scope="module")
def server_url():
    import uvicorn

    from walkgate.service.app import create_app

    config = uvicorn.Config(create_app(), host="127.0.0.1", port=0, log_level="error")
    server = uvicorn.Server(config)
    thread = threading.Thread(target=server.run, daemon=True)
    thread.start()
    deadline = time.monotonic() + 10.0
    while not server.started:
        if time.monotonic() > deadline:
            raise RuntimeError("test service did not start")
        time.sleep(0.02)
    port = server.servers[0].sockets[0].getsockname()[1]
    yield f"http://127.0.0.1:{port}"
    server.should_exit = True
    thread.join(timeout=5)


def test_server_mode_matches_in_process(capsys, server_url):
    code, local, _ = run_cli(capsys, "truth-table", "--x", "0.7")
    assert code == 0
    code, remote, _ = run_cli(capsys, "truth-table", "--x", "0.7", "--server", server_url)
    assert code == 0
    assert remote == local
    code, local, _ = run_cli(capsys, "bell", "--counts", "500", "--seed", "2", "--format", "csv")
    assert code == 0
    code, remote, _ = run_cli(capsys, "bell", "--counts", "500", "--seed", "2",
                              "--format", "csv", "--server", server_url)
    assert code == 0
    assert remote == local


def test_server_mode_maps_http_errors(capsys, server_url, tmp_path):
    target = tmp_path / "target.json"
    target.write_text(json.dumps({"beta": [0.0] * 6, "kappa": [-40, -1, -1, -1, -1]}))
    code, _, err = run_cli(capsys, "design", "--target", str(target), "--server", server_url)
    assert code == 3
    assert "error:" in err


def test_server_unreachable_is_exit_three(capsys):
    code, _, err = run_cli(capsys, "truth-table", "--server", "http://127.0.0.1:9")
    assert code == 3
    assert "could not reach" in err
