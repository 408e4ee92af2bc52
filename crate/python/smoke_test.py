#!/usr/bin/env python3
"""Smoke test for the `qmod` Python extension.

Build the module first:

    cargo build -p qmod-py --release

The script locates the compiled library under target/, copies it next to
itself as `qmod.so` when needed, and exercises the main entry points.
"""

import pathlib
import shutil
import sys
from fractions import Fraction

HERE = pathlib.Path(__file__).resolve().parent
ROOT = HERE.parent


def locate_extension() -> pathlib.Path:
    local = HERE / "qmod.so"
    candidates = [
        ROOT / "target" / "release" / "libqmod.so",
        ROOT / "target" / "debug" / "libqmod.so",
    ]
    built = [c for c in candidates if c.exists()]
    if built and (
        not local.exists() or built[0].stat().st_mtime > local.stat().st_mtime
    ):
        shutil.copy2(built[0], local)
    if not local.exists():
        sys.exit(
            "qmod.so not found — run `cargo build -p qmod-py --release` first"
        )
    return local


def approx(a, b, tol):
    return abs(a - b) < tol


def main() -> None:
    locate_extension()
    sys.path.insert(0, str(HERE))
    import qmod

    # exact signature values and the shear-difference identity
    assert qmod.sigma2_exact(1, 3) == 4
    assert qmod.sigma2_exact(1, 5) == 20
    assert qmod.sigma2_exact(3, 5) == 12
    report = qmod.verify_main_theorem(25)
    assert report["failures"] == [], report
    assert report["pairs_checked"] > 0

    # the three floating routes agree with the integer
    assert approx(qmod.sigma2_trig(5, 7), 32.0, 1e-9)
    assert approx(qmod.sigma2_cot3(5, 7), 32.0, 1e-9)
    assert approx(qmod.sigma2_radial(1, 3), 4.0, 1e-3)

    # exact Dedekind sums come back as fractions
    assert qmod.s_odd_exact(0, 1, 3) == Fraction(2, 3)
    assert qmod.s_odd_exact(2, 1, 3) == Fraction(16, 27)
    assert approx(qmod.s_odd_float(0, 1, 3), 2 / 3, 1e-12)

    # reciprocity defect vanishes exactly; period polynomial matches
    assert qmod.reciprocity_defect_exact(2, (1, 0, 2, 1), 1, 3) == Fraction(0)
    poly = qmod.period_polynomial(2, (1, 0, 2, 1))
    assert poly["pole"] == 0
    assert poly["coefficients"] == [
        Fraction(1, 16),
        Fraction(1, 8),
        Fraction(1, 8),
    ]

    # general-level L-machinery
    chi = [0, 0.7 + 0.1j, -0.3 + 0.4j]
    psi = [0, 0.2 - 0.5j, 0.6 + 0.3j]
    s = qmod.gen_dedekind_sum(3, chi, psi, 1, 4)
    l = qmod.lhat_value(3, 2, chi, psi, 1, 4)
    assert abs(s - l) < 1e-12  # S_f = Lhat(k-1)
    a0 = qmod.cusp_constant(4, [0, 1], [0, 1], 1, 3)
    assert approx(a0.real, 2 * (-1 / 32), 1e-12)  # full level-2 pair, odd x

    # q-series side
    t3 = qmod.theta(3, 1j)
    assert approx(t3.real, 1.0864348112133080, 1e-12)
    e0 = qmod.e_minus_g_odd(0, 10j)
    assert approx(e0.real, 2.718281828459045 ** (-31.41592653589793), 1e-15)
    rep = qmod.asymptotic_check(0, 1, 3)
    assert rep["deviation"] < 1e-4, rep

    print("qmod smoke test: all assertions passed")


if __name__ == "__main__":
    main()
