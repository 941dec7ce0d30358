import json
import subprocess
import sys

import numpy as np
import pytest

from pnkparity.cli import PAPER_TABLE, main, read_config


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


class TestTable:
    def test_k10_matches(self, capsys, tmp_path):
        code, out, _ = run(capsys, "table", "--k-max", "10", "--format", "json", "--out", str(tmp_path))
        assert code == 0
        rows = json.loads(out)["rows"]
        assert [r["odd_density"] for r in rows] == ["1", "1/2", "5/12", "11/24", "1/2",
                                                    "29/60", "23/56", "1/2", "27/56", "1/2"]
        assert all(r["status"] == "match" for r in rows)
        assert (tmp_path / "table.json").exists()

    def test_k1(self, capsys):
        code, out, _ = run(capsys, "table", "--k-max", "1", "--format", "csv")
        assert code == 0
        assert out.splitlines()[1:] == ["1,1,1,1,match"]

    def test_beyond_paper(self, capsys):
        code, out, _ = run(capsys, "table", "--k-max", "12")
        assert code == 0
        lines = out.splitlines()
        assert "beyond paper" in lines[11] and "beyond paper" in lines[12]
        assert "307/616" in lines[11] and "329/660" in lines[12]

    def test_mismatch_exit_code(self, capsys):
        code, out, _ = run(capsys, "table", "--k-max", "3", "--expected-table", "1,1/2,1/3")
        assert code == 2
        assert out.splitlines()[3].endswith("MISMATCH")

    def test_mismatch_via_config(self, capsys, tmp_path):
        cfg = tmp_path / "c.cfg"
        cfg.write_text("expected_table = 1, 1/2, 1/3\n")
        code, out, _ = run(capsys, "table", "--k-max", "3", "--config", str(cfg))
        assert code == 2
        assert "MISMATCH" in out

    def test_embedded_table(self):
        assert [str(PAPER_TABLE[k]) for k in range(1, 11)] == [
            "1", "1/2", "5/12", "11/24", "1/2", "29/60", "23/56", "1/2", "27/56", "1/2"]


class TestPeriod:
    def test_k2(self, capsys, tmp_path):
        code, out, _ = run(capsys, "period", "--k", "2", "--mod", "2", "--verify", "--out", str(tmp_path))
        assert code == 0
        assert "L=4" in out and "verified" in out
        doc = json.loads((tmp_path / "period_k2_m2.json").read_text())
        assert doc["L"] == 4 and doc["minimal"]

    def test_k1_mod9(self, capsys, tmp_path):
        code, out, _ = run(capsys, "period", "--k", "1", "--mod", "9", "--out", str(tmp_path))
        assert code == 0 and "L=1 " in out

    def test_k4(self, capsys, tmp_path):
        code, out, _ = run(capsys, "period", "--k", "4", "--out", str(tmp_path))
        assert code == 0 and "L=24 " in out

    def test_needs_k(self, capsys):
        code, _, err = run(capsys, "period")
        assert code == 1 and "--k" in err


class TestDensityRuns:
    def test_density(self, capsys):
        code, out, _ = run(capsys, "density", "--k", "7")
        assert code == 0 and "odd_density=23/56" in out

    def test_density_range_csv(self, capsys):
        code, out, _ = run(capsys, "density", "--k", "1..4", "--format", "csv")
        assert out.splitlines()[1:] == ["1,2,1,odd_density,1", "2,2,4,odd_density,1/2",
                                        "3,2,12,odd_density,5/12", "4,2,24,odd_density,11/24"]

    def test_nonzero_density_labeled(self, capsys):
        code, out, _ = run(capsys, "density", "--k", "3", "--mod", "3")
        assert code == 0 and "nonzero_density" in out and "extension" in out

    def test_runs(self, capsys):
        code, out, _ = run(capsys, "runs", "--k", "1..6", "--format", "json")
        assert code == 0
        docs = json.loads(out)
        assert [d["max_even_run"] for d in docs] == [0, 2, 5, 9, 14, 20]


class TestStream:
    def test_text(self, capsys):
        code, out, _ = run(capsys, "stream", "--k", "3", "--start", "0", "--count", "12")
        lines = out.splitlines()
        assert code == 0
        assert lines[0].startswith("#") and "bit_order=lsb-first" in lines[0]
        assert lines[1] == "110101100000"
        assert lines[2] == "# popcount=5"

    def test_k1(self, capsys):
        _, out, _ = run(capsys, "stream", "--k", "1", "--count", "8")
        assert out.splitlines()[1] == "11111111"

    def test_k7_popcount_trailer(self, capsys):
        _, out, _ = run(capsys, "stream", "--k", "7", "--count", "1680")
        assert out.splitlines()[-1] == "# popcount=690"
        _, out, _ = run(capsys, "stream", "--k", "7", "--count", "840")
        assert out.splitlines()[-1] == "# popcount=348"

    def test_csv_and_json(self, capsys):
        _, out, _ = run(capsys, "stream", "--k", "3", "--start", "5", "--count", "3", "--format", "csv")
        assert out.splitlines()[1:] == ["n,value", "5,1", "6,1", "7,0"]
        _, out, _ = run(capsys, "stream", "--k", "3", "--count", "12", "--format", "json")
        doc = json.loads(out)
        assert doc["values"] == [1, 1, 0, 1, 0, 1, 1, 0, 0, 0, 0, 0] and doc["popcount"] == 5

    def test_residues(self, capsys):
        _, out, _ = run(capsys, "stream", "--k", "3", "--count", "8", "--mod", "5")
        p3 = [1, 1, 2, 3, 4, 5, 7, 8]  # p(n, 3), n = 0..7
        assert out.splitlines()[1] == "".join(str(v % 5) for v in p3)

    def test_raw(self, tmp_path, capsys):
        code, _, _ = run(capsys, "stream", "--k", "9", "--count", "1000", "--format", "raw",
                         "--out", str(tmp_path))
        assert code == 0
        blob = (tmp_path / "stream_k9_m2_0_1000.bin").read_bytes()
        head, words = blob.split(b"\n", 1)
        header = json.loads(head)
        assert header["bit_order"] == "lsb-first" and header["word_bits"] == 64
        arr = np.frombuffer(words, dtype="<u8")
        bits = np.unpackbits(arr.view(np.uint8), bitorder="little")[:1000]
        from pnkparity.engines import PartitionParams, mod_values

        assert np.array_equal(bits, mod_values(PartitionParams(9, 2), 0, 1000).values)

    def test_raw_needs_parity(self, capsys):
        code, _, _ = run(capsys, "stream", "--k", "3", "--count", "8", "--mod", "3", "--format", "raw")
        assert code == 1

    def test_cap_abort(self, capsys):
        code, _, err = run(capsys, "stream", "--k", "3", "--count", "5000", "--max-residues", "100")
        assert code == 3 and "resource" in err


class TestVerify:
    def test_default_passes(self, capsys, tmp_path):
        code, out, _ = run(capsys, "verify", "--k-max", "10", "--out", str(tmp_path), "--canonical")
        assert code == 0 and "all checks passed" in out
        summary = json.loads((tmp_path / "summary.json").read_text())
        assert summary["all_passed"]
        assert set(summary["results"]["5"]) == {"table", "period_m2", "density", "runs", "lemma31",
                                                "thm12", "thm13", "residual"}
        assert (tmp_path / "report.csv").read_text().startswith(
            "k,L,odd_num,odd_den,max_run,run_at_period_end,lemma31_holds,thm13_holds\n")

    def test_single_k(self, capsys):
        code, out, _ = run(capsys, "verify", "--k", "1..1", "--format", "json")
        assert code == 0
        assert json.loads(out)["all_passed"]

    def test_corrupted_table(self, capsys):
        code, out, _ = run(capsys, "verify", "--k", "1..4", "--expected-table", "1,1/2,5/12,1/2",
                           "--format", "json")
        assert code == 2
        doc = json.loads(out)
        assert not doc["results"]["4"]["table"]["ok"] and doc["results"]["3"]["table"]["ok"]

    def test_multiple_moduli(self, capsys):
        code, out, _ = run(capsys, "verify", "--k", "1..5", "--mod", "2,3,6", "--checks", "period",
                           "--format", "json")
        assert code == 0
        res = json.loads(out)["results"]["5"]
        assert set(res) == {"period_m2", "period_m3", "period_m6"}

    def test_resource_abort(self, capsys):
        code, _, _ = run(capsys, "verify", "--k-max", "10", "--max-residues", "1000")
        assert code == 3

    def test_unknown_check(self, capsys):
        code, _, _ = run(capsys, "verify", "--k-max", "2", "--checks", "nope")
        assert code == 1

    def test_usage_error_exit_code(self):
        with pytest.raises(SystemExit) as exc:
            main(["verify", "--no-such-flag"])
        assert exc.value.code == 1

    def test_certificate_round_trip(self, capsys, tmp_path):
        run(capsys, "period", "--k", "5", "--mod", "3", "--out", str(tmp_path))
        cert = tmp_path / "period_k5_m3.json"
        code, out, _ = run(capsys, "verify", "--k", "1..1", "--cert", str(cert), "--format", "json")
        assert code == 0
        assert json.loads(out)["certificates"][0]["ok"]
        doc = json.loads(cert.read_text())
        doc["L"] += 1
        cert.write_text(json.dumps(doc))
        code, out, _ = run(capsys, "verify", "--k", "1..1", "--cert", str(cert), "--format", "json")
        assert code == 2

    def test_config_file_and_override(self, capsys, tmp_path):
        cfg = tmp_path / "campaign.cfg"
        cfg.write_text("# campaign\nk = 1..3\nchecks = table,runs\nformat = json\n")
        code, out, _ = run(capsys, "verify", "--config", str(cfg))
        assert code == 0
        assert sorted(json.loads(out)["results"]) == ["1", "2", "3"]
        code, out, _ = run(capsys, "verify", "--config", str(cfg), "--k", "2..2")
        assert sorted(json.loads(out)["results"]) == ["2"]

    def test_bad_config(self, tmp_path):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text("colour = blue\n")
        with pytest.raises(Exception):
            read_config(cfg)
        assert main(["verify", "--config", str(cfg)]) == 1

    def test_canonical_deterministic_across_jobs(self, capsys, tmp_path):
        outs = []
        for i, jobs in enumerate(("1", "3")):
            d = tmp_path / f"run{i}"
            run(capsys, "verify", "--k-max", "8", "--mod", "2,3", "--canonical", "--jobs", jobs,
                "--out", str(d))
            outs.append({p.name: p.read_bytes() for p in d.iterdir()})
        assert outs[0] == outs[1]

    def test_non_canonical_has_timings(self, capsys):
        _, out, _ = run(capsys, "verify", "--k", "1..2", "--format", "json")
        assert "timings_s" in json.loads(out)


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "pnkparity", "stream", "--k", "2", "--count", "8"],
                          capture_output=True, text=True, cwd=tmp_path)
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[1] == "11001100"
