"""Smoke test for the pylpflux extension.

Uses an installed `pylpflux` if importable; otherwise builds the extension
with cargo and loads it from the target directory.
"""

import importlib.util
import math
import os
import shutil
import subprocess
import sys
import tempfile

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))


def load_module():
    try:
        import pylpflux

        return pylpflux
    except ImportError:
        pass
    subprocess.run(["cargo", "build", "--release", "-p", "pylpflux"], cwd=ROOT, check=True)
    target = os.environ.get("CARGO_TARGET_DIR", os.path.join(ROOT, "target"))
    built = os.path.join(target, "release", "libpylpflux.so")
    staging = tempfile.mkdtemp()
    so = os.path.join(staging, "pylpflux.so")
    shutil.copy(built, so)
    spec = importlib.util.spec_from_file_location("pylpflux", so)
    module = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(module)
    return module


def main():
    lp = load_module()

    grid = lp.Grid([128, 128, 4])
    bank = lp.FilterBank(grid)
    assert bank.partition_residual() <= 1e-12
    u = lp.eyink_energy_field(grid, 1, 5)
    pi = lp.energy_flux(u, 3, bank) / grid.volume
    assert pi >= 4.0, pi
    print(f"normalized energy flux at Q=3: {pi:.6f}")

    small = lp.Grid([16, 16, 16])
    sbank = lp.FilterBank(small)
    v = lp.random_spectrum_field(small, [1.0, 0.7], 3)
    fft = lp.energy_flux(v, 0, sbank)
    oracle = lp.triad_energy_flux(v, 0, sbank)
    assert abs(fft - oracle) <= 1e-10 * max(1.0, abs(fft)), (fft, oracle)
    assert abs(lp.trilinear(v, v, v)) <= 1e-12
    coeffs = lp.dyadic_coefficients(v, 1.0 / 3.0, 3.0, sbank)
    assert coeffs[0][0] == -1 and all(math.isfinite(c) for _, c in coeffs)
    print(f"oracle agreement: {fft:.6e} vs {oracle:.6e}")

    with tempfile.TemporaryDirectory() as tmp:
        path = os.path.join(tmp, "v.lpf")
        v.save(path)
        back = lp.Field.load(path)
        assert back.physical() == v.physical()
        assert lp.run_cli(["flux", "--in", path, "--kind", "energy", "--q-range", "0..1", "--out", os.path.join(tmp, "f.csv")]) == 0
        assert lp.run_cli(["flux", "--in", os.path.join(tmp, "missing.lpf"), "--kind", "energy"]) == 2

    try:
        lp.Grid([0, 4])
    except ValueError:
        pass
    else:
        raise AssertionError("invalid grid accepted")
    print("smoke test passed")
    return 0


if __name__ == "__main__":
    sys.exit(main())
