"""Quick end-to-end check of the Python bindings.

Build and install first:
    pip install maturin
    pip install --no-build-isolation -e crates/py
"""

import json
import math
import sys

import triwork as tw


def close(a, b, tol):
    return abs(a - b) <= tol


def main():
    checks = []

    def check(name, ok, detail=""):
        checks.append(ok)
        print(f"{'ok  ' if ok else 'FAIL'} {name} {detail}")

    ghz, w = tw.DensityMatrix.ghz(), tw.DensityMatrix.w()
    z, x = tw.Direction.z(), tw.Direction.x()
    zz = tw.DensityMatrix.product([z, z])

    xi = tw.xi_capital(zz)["value"]
    check("great-circle average of |00>", close(xi, 0.4427, 1e-3), f"{xi:.6f}")
    xi_bs = tw.xi_capital_sphere(zz)["value"]
    check("sphere average of |00>", close(xi_bs, 0.2787, 1e-3), f"{xi_bs:.6f}")

    rep = tw.work_W(w, z)
    check("W state along z", close(rep["w_max"], 7 / 9, 1e-6), f"{rep['w_max']:.6f}")
    check("work report keys", set(rep) == {"z", "per_axis_work", "w_phi", "w_max", "argmax_phi"})
    check("GHZ along x, x", close(tw.work_zu(ghz, x, x), 1.0, 1e-12))

    lo = tw.scan(ghz, "min")
    check("GHZ minimum", close(lo["value"], 0.1619, 2e-3), f"{lo['value']:.5f}")
    check("classify W", tw.classify(w)["class"] == "W-CONSISTENT")

    b3 = tw.max_mermin(w)["value"]
    check("Mermin maximum for W", close(b3, 3.046, 5e-3), f"{b3:.6f}")

    t = tw.find_threshold("GHZ", "mermin")
    check("GHZ Mermin threshold", close(t["p_star"], 0.5, 5e-3), f"{t['p_star']:.5f}")

    sim = tw.simulate_tripartite(ghz, x, x, shots=20000, seed=3)
    again = tw.simulate_tripartite(ghz, x, x, shots=20000, seed=3)
    check("simulation", sim["abs_error"] <= 0.01 and sim == again)

    rho = tw.DensityMatrix.from_json(w.to_json())
    check("JSON round trip", close(rho.purity(), 1.0, 1e-12) and rho.n_qubits == 3)
    noisy = tw.DensityMatrix.werner("W", 0.5)
    check("Werner mixture purity", noisy.purity() < 1.0, f"{noisy.purity():.4f}")

    try:
        tw.simulate_bipartite(tw.DensityMatrix.singlet(), x, x, shots=3)
        check("odd shots rejected", False)
    except ValueError as e:
        check("odd shots rejected", "even" in str(e))
    try:
        tw.DensityMatrix.from_json(json.dumps({"n_qubits": 3}))
        check("malformed state rejected", False)
    except ValueError:
        check("malformed state rejected", True)

    print(f"{sum(checks)}/{len(checks)} checks passed")
    return 0 if all(checks) else 1


if __name__ == "__main__":
    sys.exit(main())
