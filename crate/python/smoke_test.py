"""Smoke test for the pyspinform extension module.

Build and install first, e.g. `maturin develop -m crates/py/Cargo.toml`.
"""

import math

import pyspinform as sf


def close(a, b, tol=1e-12):
    return abs(a - b) <= tol


def main():
    assert close(sf.flip_state([1, 0])[1], 1j)
    assert close(sf.bilinear_form([1, 0], [0, 1]), -1j)

    h = 1 / math.sqrt(2)
    bell = [h, 0, 0, h]
    assert close(sf.tangle(bell), 1.0)
    assert close(sf.concurrence(bell), 1.0)
    assert close(sf.tangle([1, 0, 0, 0]), 0.0)
    assert sf.tangle(sf.random_state(3, 7)) == 0.0

    passed, hilbert, form = sf.check_biorthonormal(sf.magic_basis(4))
    assert passed and hilbert <= 1e-10 and form <= 1e-10
    assert sf.check_biorthonormal(sf.product_basis(3))[0]
    assert not sf.check_biorthonormal([[1, 0], [0, 1]])[0]

    cnot = [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]]
    ok, residual = sf.is_form_preserving(cnot)
    assert not ok and close(residual, 2 * math.sqrt(2), 1e-9)
    assert sf.is_form_preserving([[0, 1], [-1, 0]])[0]

    psi = sf.maxent_generate(2, 0.3, [0.6, 0.8, 0, 0])
    assert sf.is_maximally_entangled(psi)
    assert not sf.is_maximally_entangled([1, 0, 0, 0])

    s = sf.State.random(4, 1)
    assert s.n == 4 and len(s) == 16 and close(s.norm(), 1.0)
    back = s.flip().flip()
    assert all(close(a, b) for a, b in zip(back.amplitudes, s.amplitudes))
    assert close(s.form(s), sf.bilinear_form(s.amplitudes, s.amplitudes))

    tight = sf.Tolerances(tol_residual=1e-14)
    assert tight.tol_residual == 1e-14

    try:
        sf.tangle([1, 0, 0])
    except ValueError:
        pass
    else:
        raise AssertionError("length 3 must be rejected")

    print(f"pyspinform {sf.__version__}: smoke test passed")


if __name__ == "__main__":
    main()
