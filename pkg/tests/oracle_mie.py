"""Independent extended-precision Mie oracle.

Evaluates the scattering coefficients straight from their textbook
definitions in terms of half-integer Bessel functions at 60 significant
digits, with no recurrences shared with the package implementation:

    psi_n(z) = sqrt(pi z / 2) J_{n+1/2}(z)
    chi_n(z) = -sqrt(pi z / 2) Y_{n+1/2}(z)
    xi_n     = psi_n - i chi_n
    f'_n     = f_{n-1} - (n/z) f_n

    a_n = (m psi_n(mx) psi'_n(x) - psi_n(x) psi'_n(mx))
        / (m psi_n(mx) xi'_n(x)  - xi_n(x)  psi'_n(mx))
    b_n = (psi_n(mx) psi'_n(x) - m psi_n(x) psi'_n(mx))
        / (psi_n(mx) xi'_n(x)  - m xi_n(x)  psi'_n(mx))

Run as a script to regenerate the frozen tables used by the test suite:

    python3 tests/oracle_mie.py
"""

import mpmath as mp

mp.mp.dps = 60


def _psi(n, z):
    return mp.sqrt(mp.pi * z / 2) * mp.besselj(n + mp.mpf(1) / 2, z)


def _chi(n, z):
    return -mp.sqrt(mp.pi * z / 2) * mp.bessely(n + mp.mpf(1) / 2, z)


def _xi(n, z):
    return _psi(n, z) - 1j * _chi(n, z)


def _dpsi(n, z):
    return _psi(n - 1, z) - n / z * _psi(n, z)


def _dxi(n, z):
    return _xi(n - 1, z) - n / z * _xi(n, z)


def oracle_ab(n: int, x, m):
    """(a_n, b_n) as mpmath complex numbers."""
    x = mp.mpf(x)
    m = mp.mpf(m)
    mx = m * x
    pm, px = _psi(n, mx), _psi(n, x)
    dpm, dpx = _dpsi(n, mx), _dpsi(n, x)
    xx, dxx = _xi(n, x), _dxi(n, x)
    a = (m * pm * dpx - px * dpm) / (m * pm * dxx - xx * dpm)
    b = (pm * dpx - m * px * dpm) / (pm * dxx - m * xx * dpm)
    return a, b


def oracle_efficiencies(x, m, n_max: int):
    """(Q_ext, Q_rad) summed to n_max in extended precision."""
    x = mp.mpf(x)
    coeffs = [oracle_ab(n, x, m) for n in range(1, n_max + 2)]
    q_ext = mp.mpf(0)
    cross = mp.mpf(0)
    for n in range(1, n_max + 1):
        a, b = coeffs[n - 1]
        a1, b1 = coeffs[n]
        q_ext += (2 * n + 1) * (a + b).real
        cross += (n * (n + 2) / mp.mpf(n + 1)) * (
            (a * mp.conj(a1)).real + (b * mp.conj(b1)).real
        ) + ((2 * n + 1) / mp.mpf(n * (n + 1))) * (a * mp.conj(b)).real
    q_ext *= 2 / x**2
    q_rad = q_ext - 4 / x**2 * cross
    return q_ext, q_rad


def _cutoff(x) -> int:
    return int(mp.ceil(x + 4 * mp.cbrt(x) + 2))


if __name__ == "__main__":
    pairs = [(x, m) for x in (1.0, 10.0, 40.5) for m in (1.45, 1.5)]
    print("# frozen efficiency table: (x, m): (q_ext, q_rad)")
    for x, m in pairs:
        qe, qr = oracle_efficiencies(x, m, _cutoff(x) + 12)
        print(f"    ({x}, {m}): ({mp.nstr(qe, 17)!r}, {mp.nstr(qr, 17)!r}),")
    print("# frozen coefficients at x=1, m=1.5")
    a1, b1 = oracle_ab(1, 1.0, 1.5)
    print(f"    a1 = {mp.nstr(a1, 17)}")
    print(f"    b1 = {mp.nstr(b1, 17)}")
