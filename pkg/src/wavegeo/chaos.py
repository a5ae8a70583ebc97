"""Hermite-expansion coefficient families for the length, area and sign
functionals: beta_l(z), the swinging-factorial polynomials p_N, the norm
coefficients alpha_{2n,2m}, indicator coefficients J_q(z) and the sign
(defect) coefficients J_{2k+1}.
"""

import math
from fractions import Fraction

from .specfun import gauss_cdf, gauss_pdf, hermite

_SQRT_PI_2 = math.sqrt(math.pi / 2.0)

_beta_cache = {}
_alpha_cache = {}


def beta(l, z):
    """beta_l(z) = phi(z) H_l(z)."""
    key = (l, z)
    v = _beta_cache.get(key)
    if v is None:
        v = gauss_pdf(z) * hermite(l, z)
        _beta_cache[key] = v
    return v


def p_poly_exact(N, x):
    """p_N(x) with exact arithmetic; x may be a Fraction.

    p_N(x) = sum_j (-1)^j (-1)^N C(N,j) (2j+1)!/(j!)^2 x^j.  The alternating
    sum loses all precision in floats for N beyond ~12, hence Fractions.
    """
    if N < 0:
        raise ValueError(f"order must be >= 0, got {N}")
    acc = Fraction(0)
    xf = Fraction(x)
    sign = (-1) ** N
    for j in range(N + 1):
        c = Fraction(math.comb(N, j) * math.factorial(2 * j + 1), math.factorial(j) ** 2)
        acc += (-1) ** j * sign * c * xf ** j
    return acc


def p_poly(N, x):
    """p_N(x) as a float (exact rational evaluation, one final rounding)."""
    return float(p_poly_exact(N, Fraction(x).limit_denominator(10 ** 15)
                              if isinstance(x, float) else Fraction(x)))


def alpha_exact(a, b):
    """Rational part of alpha_{a,b}: alpha = sqrt(pi/2) * alpha_exact(a, b).

    Zero unless both orders are even; symmetric in (a, b).
    """
    if a < 0 or b < 0:
        raise ValueError("orders must be >= 0")
    if a % 2 or b % 2:
        return Fraction(0)
    n, m = a // 2, b // 2
    r = Fraction(math.factorial(2 * n) * math.factorial(2 * m),
                 math.factorial(n) * math.factorial(m))
    return r * Fraction(1, 2 ** (n + m)) * p_poly_exact(n + m, Fraction(1, 4))


def alpha(a, b):
    """Norm-expansion coefficient alpha_{a,b} (0 for odd orders)."""
    key = (a, b) if a <= b else (b, a)
    v = _alpha_cache.get(key)
    if v is None:
        v = _SQRT_PI_2 * float(alpha_exact(a, b))
        _alpha_cache[key] = v
    return v


def indicator_chaos(q, z):
    """Coefficient J_q of the chaos expansion of the indicator 1(. > z).

    J_0 = 1 - Phi(z); J_q = phi(z) H_{q-1}(z) for q >= 1.
    """
    if q < 0:
        raise ValueError(f"order must be >= 0, got {q}")
    if q == 0:
        return 1.0 - gauss_cdf(z)
    return gauss_pdf(z) * hermite(q - 1, z)


def defect_chaos(k):
    """Sign-functional coefficient J_{2k+1} = sqrt(2/pi) (-1)^k / (2k)!!."""
    if k < 1:
        raise ValueError(f"index must be >= 1, got {k}")
    double_fact = 2 ** k * math.factorial(k)  # (2k)!!
    return math.sqrt(2.0 / math.pi) * (-1) ** k / double_fact


def defect_chaos_order(order):
    """Sign-functional coefficient by chaos order; even orders vanish."""
    if order < 1:
        raise ValueError(f"order must be >= 1, got {order}")
    if order % 2 == 0:
        return 0.0
    if order == 1:
        # the sign functional has no first-order term on the sphere
        # (ell >= 1 harmonics integrate to zero), but the Hermite
        # coefficient itself is J_1 = sqrt(2/pi)
        return math.sqrt(2.0 / math.pi)
    return defect_chaos((order - 1) // 2)


def table_rows(alpha_max=8, beta_max=6, levels=(0.0, 1.0), j_max=8):
    """Rows (family, index1, index2, z, value) for the CSV table dump."""
    rows = []
    for a in range(0, alpha_max + 1, 2):
        for b in range(a, alpha_max + 1, 2):
            rows.append(("alpha", a, b, "", alpha(a, b)))
    for z in levels:
        for l in range(beta_max + 1):
            rows.append(("beta", l, "", z, beta(l, z)))
        for q in range(j_max + 1):
            rows.append(("indicator_J", q, "", z, indicator_chaos(q, z)))
    for k in range(1, j_max + 1):
        rows.append(("defect_J", 2 * k + 1, "", "", defect_chaos(k)))
    return rows
