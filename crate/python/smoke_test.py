"""Smoke test for the tcfec_py extension.

Build and install first:
    cd crates/python && maturin build --release -o dist && pip install dist/*.whl
"""

import math
import random
from pathlib import Path

import tcfec_py

ROOT = Path(__file__).resolve().parents[1]


def main():
    p = tcfec_py.Pipeline({"family": "bch", "n": 63, "k": 56}, {"algo": "viterbi"})
    assert (p.n, p.k, p.code_label, p.decoder_label) == (63, 56, "bch63_56", "viterbi")

    rng = random.Random(3)
    info = [rng.randint(0, 1) for _ in range(p.k)]
    cw = p.encode(info)
    llr = [(4.0 if b == 0 else -4.0) for b in cw]
    llr[10] = -llr[10] * 0.2
    out = p.decode(llr)
    assert out["info_bits"] == info and out["status"] == "success", out

    ldpc = tcfec_py.Pipeline({"family": "ldpc_builtin"}, {"algo": "spa", "iterations": 50})
    assert (ldpc.n, ldpc.k) == (128, 64)

    rows = tcfec_py.simulate(
        {"family": "bch", "n": 63, "k": 56},
        {"algo": "hard"},
        [5.0, 6.0],
        seed=11,
        min_frame_errors=50,
    )
    assert [r["ebn0_db"] for r in rows] == [5.0, 6.0]
    for r in rows:
        assert r["frame_errors"] >= 50
        assert r["ci_low"] <= r["cer"] <= r["ci_high"]
    again = tcfec_py.simulate(
        {"family": "bch", "n": 63, "k": 56}, {"algo": "hard"}, [5.0, 6.0], seed=11,
        min_frame_errors=50, workers=2,
    )
    strip = lambda rs: [{k: v for k, v in r.items() if k != "elapsed_s"} for r in rs]
    assert strip(rows) == strip(again)

    exact = tcfec_py.analytic_hard(63, 56, 1, [5.0, 6.0])
    assert exact[0][1] > exact[1][1] > 0.0

    sp = tcfec_py.sp59(128, 64, [2.0, 3.0])
    assert sp[0][1] > sp[1][1] > 0.0
    tub = tcfec_py.tub(str(ROOT / "crates/core/data/ebch128_64.ws"), 50, [3.0])
    assert tub[0][1] > sp[1][1]

    lo, hi = tcfec_py.confidence_interval(10, 1000)
    assert math.isclose(lo, 0.004805511, rel_tol=1e-6)
    assert math.isclose(hi, 0.018313243, rel_tol=1e-6)

    for bad in ({"family": "bch", "n": 63, "k": 55}, {"family": "nope"}):
        try:
            tcfec_py.Pipeline(bad, {"algo": "hard"})
        except ValueError:
            pass
        else:
            raise AssertionError(f"{bad} accepted")
    try:
        tcfec_py.tub("/nonexistent.ws", 10, [3.0])
    except OSError:
        pass
    else:
        raise AssertionError("missing spectrum accepted")

    print("tcfec_py", tcfec_py.__version__, "smoke test OK")


if __name__ == "__main__":
    main()
