"""Independent reference computations in extended precision (mpmath)."""

import mpmath


def erf_maclaurin(z, extra_digits=30):
    """erf via its Maclaurin series, summed to convergence in extended precision.

    Working precision grows with |z|^2 so the alternating series cancellation
    (terms up to ~exp(|z|^2)) never eats the digits that matter.
    """
    z = complex(z)
    digits = extra_digits + int(abs(z) ** 2 / 2.302585) + 5
    with mpmath.workdps(digits):
        zm = mpmath.mpc(z.real, z.imag)
        z2 = zm * zm
        term = zm
        total = zm
        k = 0
        eps = mpmath.mpf(10) ** (-(digits - 2))
        while True:
            k += 1
            term = term * (-z2) / k
            contrib = term / (2 * k + 1)
            total += contrib
            if abs(contrib) <= eps * abs(total) and k > abs(z2):
                break
        return complex(2 / mpmath.sqrt(mpmath.pi) * total)


def erfc_real(x, digits=50):
    with mpmath.workdps(digits):
        return float(mpmath.erfc(mpmath.mpf(x)))


def selu_neg(x, lam=1.0507, alpha=1.67326, digits=50):
    with mpmath.workdps(digits):
        return float(mpmath.mpf(lam) * mpmath.mpf(alpha) * (mpmath.exp(mpmath.mpf(x)) - 1))
