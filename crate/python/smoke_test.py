"""Smoke test for the counterprop_py extension.

Build the extension first:

    cargo build --release -p counterprop-py

then run `python3 python/smoke_test.py`. The script imports an installed
`counterprop_py` if there is one, otherwise it loads the freshly built
shared library from target/release.
"""

import cmath
import importlib.util
import json
import math
import pathlib
import shutil
import sys
import tempfile

ROOT = pathlib.Path(__file__).resolve().parent.parent


def load_module():
    try:
        import counterprop_py

        return counterprop_py
    except ImportError:
        pass
    for name in ("libcounterprop_py.so", "libcounterprop_py.dylib", "counterprop_py.dll"):
        built = ROOT / "target" / "release" / name
        if built.exists():
            break
    else:
        sys.exit("counterprop_py not found; run `cargo build --release -p counterprop-py`")
    suffix = ".pyd" if built.suffix == ".dll" else ".so"
    tmp = pathlib.Path(tempfile.mkdtemp()) / f"counterprop_py{suffix}"
    shutil.copy(built, tmp)
    spec = importlib.util.spec_from_file_location("counterprop_py", tmp)
    module = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(module)
    return module


def main():
    cp = load_module()
    ktp = cp.Material.load(str(ROOT / "crates" / "core" / "data" / "ktp.toml"))
    assert 1.8 < ktp.refractive_index("z", 0.655, 25.0) < 1.9

    deg = cp.design_source(ktp, 0.655)
    print(deg)
    assert deg.l == 31 and deg.duty2 == "15/31"
    assert abs(deg.temperature_c - 75.0) < 2.0
    assert max(abs(r) for r in deg.residuals) < 1e-6

    figs = cp.analyze(ktp, deg)
    assert figs["concurrence"] == 1.0
    ghz = figs["bandwidth_hv_rad_s"] / (2 * math.pi) / 1e9
    assert abs(ghz - 3.66) / 3.66 < 0.02, ghz

    nondeg = cp.design_source(ktp, 0.532, signal_um=0.8073)
    assert nondeg.l == 21
    figs = cp.analyze(ktp, nondeg)
    assert abs(figs["concurrence"] - 0.9978) < 5e-4, figs["concurrence"]
    assert abs(figs["concurrence"] - figs["concurrence_oracle"]) < 1e-3

    assert cp.h_function(0.0) == 1.0
    assert abs(cmath.phase(cp.h_function(1.0)) + 0.5) < 1e-12
    g = cp.grating_coefficient(3, 1, 1.056, 16.36, 15, 31)
    assert abs(abs(g) - 0.13488) < 1e-4, g

    try:
        cp.design_source(ktp, 0.655, l_range=(3, 5))
    except RuntimeError as e:
        print("expected failure:", e)
    else:
        raise AssertionError("infeasible l range should fail")

    sheet = json.loads(cp.datasheet_json(str(ROOT / "configs" / "degenerate.toml")))
    assert sheet["design"]["l"]["value"] == 31
    print("smoke test passed")


if __name__ == "__main__":
    main()
