"""Smoke test for the optomech Python extension.

Build and install first:

    pip install --no-build-isolation -e crates/python
    python python/smoke_test.py
"""

import math

import optomech as om


def close(a, b, tol):
    assert abs(a - b) <= tol, (a, b, tol)


def main():
    p = om.SystemParams1D(omega_b=1.0, kappa=0.2, g_o=0.4)
    exact = om.backaction_1d(p)
    close(exact["n_bar"], 0.1870, 1e-4)
    close(exact["purity"], 0.7278, 1e-4)
    close(exact["n_bar_0"], 0.2209, 1e-4)

    ly = om.lyapunov_1d(p)
    close(ly["n_bar"], exact["n_bar"], 1e-10)
    assert ly["labels"][:2] == ["x_b", "p_b"]
    sp = om.spectral_1d(p)
    close(sp["xx"], exact["xx"], 1e-8)
    close(sp["commutator"], 0.5, 1e-8)
    assert om.position_psd(1.0, p) > 0.0

    # thermal oscillator: occupation equals the bath occupation
    hot = om.SystemParams1D(g_o=0.0, gamma_b=0.01, n_b=3.0)
    close(om.lyapunov_1d(hot)["n_bar"], 3.0, 1e-9)

    assert om.is_stable(om.SystemParams1D(g_o=0.5))
    assert not om.is_stable(om.SystemParams1D(g_o=0.51))
    try:
        om.backaction_1d(om.SystemParams1D(g_o=0.6))
    except om.UnstableError as e:
        assert "omega_b^2 <= 2 g_o^2" in str(e)
    else:
        raise AssertionError("expected UnstableError")

    strong = om.strong_coupling(om.SystemParams1D(kappa=0.002, g_o=0.1))
    close(strong["n_bar"], om.backaction_1d(om.SystemParams1D(kappa=0.002, g_o=0.1))["n_bar"], 1e-4)
    try:
        om.strong_coupling(om.SystemParams1D(delta=0.9, g_o=0.1))
    except om.RegimeError:
        pass
    else:
        raise AssertionError("expected RegimeError")
    weak = om.weak_coupling(om.SystemParams1D(g_o=0.002, gamma_b=1e-6, n_b=10.0))
    assert weak["n_bar"] < 10.0

    q = om.SystemParams2D.diagonal_resonant(1.0, 0.2 / math.sqrt(2), 0.2, 1.0, 0.2)
    cf = om.backaction_2d(q)
    close(1 - cf["purity_2d"], 0.0808, 1e-3)
    close(1 - cf["purity_product"], 0.1030, 1e-3)
    l2 = om.lyapunov_2d(q)
    close(l2["purity_2d"], cf["purity_2d"], 1e-10)
    m = l2["matrix"]
    block = [[m[i][j] for j in range(4)] for i in range(4)]
    close(om.purity_2d(block)["purity_2d"], cf["purity_2d"], 1e-12)
    close(om.purity_2d_reduced(block), cf["purity_2d"], 1e-10)

    kappa = 1e-3
    r = om.SystemParamsRWA(1.0, kappa, 1e-9 * kappa, 5e7, 5 * kappa, 5 * kappa / math.sqrt(2))
    rw = om.lyapunov_rwa(r)
    assert 0.8 < rw["purity_2d"] <= 1.0
    close(om.rwa_optimum(r)["g_m_opt"], 5 * kappa / math.sqrt(2), 1e-12)
    assert r.cooperativity() > 1e9

    n, mu = om.occupation_and_purity(0.5, 0.5)
    close(n, 0.0, 1e-15)
    close(mu, 1.0, 1e-15)
    try:
        om.occupation_and_purity(0.1, 0.1)
    except ValueError:
        pass
    else:
        raise AssertionError("uncertainty violation not raised")

    print("python smoke test: ok")


if __name__ == "__main__":
    main()
