import importlib.util
import pathlib

import pytest

from pigeonroots import kernels

BENCH = pathlib.Path(__file__).resolve().parents[1] / "benchmarks" / "bench_kernels.py"


@pytest.mark.skipif(kernels.compiled is None, reason="compiled kernels not built")
def test_benchmark_runs(tmp_path, capsys):
    spec = importlib.util.spec_from_file_location("bench_kernels", BENCH)
    mod = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(mod)
    assert mod.main(["--n", "10", "--pipeline-n", "14", "--repeat", "1", "--json", str(tmp_path / "b.json")]) == 0
    assert "speedup" in capsys.readouterr().out


def test_pure_backend_selected_by_env(monkeypatch):
    import subprocess
    import sys

    code = "from pigeonroots import kernels; print(kernels.BACKEND)"
    out = subprocess.run([sys.executable, "-c", code], env={"PIGEONROOTS_PURE": "1", "PATH": ""},
                         capture_output=True, text=True)
    assert out.stdout.strip() == "python"
