"""Smoke test for the cartier_codes extension module.

Builds the shared library with cargo when it is not importable yet:

    python3 python/smoke_test.py
"""

import importlib
import os
import shutil
import subprocess
import sys
import tempfile

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))


def load():
    try:
        return importlib.import_module("cartier_codes")
    except ImportError:
        pass
    subprocess.run(
        ["cargo", "build", "--release", "-p", "cartier-py", "--features", "extension-module"],
        cwd=ROOT,
        check=True,
    )
    out = tempfile.mkdtemp()
    shutil.copy(os.path.join(ROOT, "target", "release", "libcartier_codes.so"), os.path.join(out, "cartier_codes.so"))
    sys.path.insert(0, out)
    return importlib.import_module("cartier_codes")


def main():
    cc = load()

    f8 = cc.Field(2, 3, [1, 1, 0, 1])
    assert f8.size == 8
    assert f8.pth_root("w") == "w^2+w"
    f4 = cc.Field(2, 2)
    assert f4.trace("w", 2) == "1"

    g = cc.GoppaInstance(f4, ["0", "1", "w^2"], ["w", "1"])
    code = g.code()
    assert code.params() == "[3, 1, 3]_2", code.params()
    assert code.to_bits() == "code q=2 n=3 k=1\n111\n"
    holds, k1, k2, designed = g.check_identity()
    assert holds and k1 == k2 == 1 and designed == 3
    assert g.check_ag_example().holds
    assert g.check_cartier().holds

    klein = cc.Curve.klein()
    assert klein.genus == 3
    assert len(klein.rational_points()) == 24
    assert klein.cartier("1") == "0"

    line = cc.Curve.projective_line(cc.Field(2))
    assert line.cartier("x^3") == "(x)dx"

    codes = dict(cc.klein_codes())
    assert codes["Car_2(D,G0-G-)"] == "[21, 6, 8]_2"
    assert codes["C_Omega(D,2G0-G-)|F_2"] == "[21, 6, 8]_2"

    g0 = "\n".join(p + " 1" for p in klein.places_of_degree(2)[:3])
    inst = cc.AgInstance(klein, g0)
    assert inst.n == 24
    assert inst.check_equality().holds
    assert inst.check_bounds().holds

    try:
        cc.Field(4)
    except ValueError:
        pass
    else:
        raise AssertionError("F_4 with p = 4 accepted")

    for name, params in sorted(codes.items()):
        print(f"{name:24} {params}")
    print("smoke test passed")


if __name__ == "__main__":
    main()
