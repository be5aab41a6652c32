"""Quick check of the Python extension. Build it with

    pip install maturin
    maturin build --release -m crates/py/Cargo.toml -o dist
    pip install dist/fockbench-*.whl
"""

import cmath
import math

import fockbench as fb


def close(a, b, tol):
    assert abs(a - b) <= tol, (a, b)


alpha = 1.2 - 0.5j
psi = fb.coherent_state(alpha, dim=64)
close(psi.norm(), 1.0, 1e-12)
mean, var = psi.photon_statistics()
close(mean, abs(alpha) ** 2, 1e-10)
close(var, abs(alpha) ** 2, 1e-10)
p = psi.photon_distribution()
n2 = abs(alpha) ** 2
close(p[3], math.exp(-n2) * n2**3 / 6, 1e-12)

q = fb.coherent_state(2.0).quadrature_report()
close(q["product"], 0.25, 1e-10)

phase, residual = fb.displacement_compose(0.3 + 0.2j, -0.4 + 0.1j, dim=64)
# D(a+b) = exp(-i Im(a b*)) D(a) D(b)
close(phase, cmath.exp(-1j * ((0.3 + 0.2j) * (-0.4 - 0.1j)).imag), 1e-10)
assert residual < 1e-10

later = fb.evolve_coherent(alpha, t=0.7)
close(later.fidelity(fb.coherent_state(alpha * cmath.exp(-0.7j))), 1.0, 1e-10)

sq = fb.squeezed_vacuum(0.8, phi=0.0, dim=96)
report = sq.quadrature_report()
close(report["var_x"], 0.5 * math.exp(1.6), 1e-8)
close(report["product"], 0.25, 1e-8)
close(fb.theta_vacuum(0.8, dim=96).fidelity(sq), 1.0, 1e-8)

tm = fb.two_mode_squeezed_vacuum(0.6, dim=40)
assert tm.off_diagonal_mass() < 1e-20
close(sum(map(sum, tm.joint_distribution())), 1.0, 1e-10)

pc = fb.pair_coherent(1 + 1j, q=1, dim=24)
assert pc.dims == (25, 24)
joint = pc.joint_distribution()
assert all(joint[i][j] == 0.0 for i in range(25) for j in range(24) if i - j != 1)

per = fb.perelomov_state(1.0, 0.3j, dim=48)
close(per.norm(), 1.0, 1e-12)
close(fb.phase_squeezed(0.5, m=2).norm(), 1.0, 1e-12)

assert "ho-algebra" in fb.suites()
out = fb.verify("ho-algebra", dim=32)
assert out["pass"] and out["checks"]
assert not fb.verify("coherent", alpha=1.0, tol=0.0)["pass"]

try:
    fb.verify("no-such-suite")
except ValueError:
    pass
else:
    raise AssertionError("unknown suite accepted")

try:
    fb.FockState([1 + 0j])
except ValueError:
    pass
else:
    raise AssertionError("one-level state accepted")

print("python smoke test ok")
