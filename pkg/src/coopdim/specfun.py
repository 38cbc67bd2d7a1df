"""Real-order cylinder functions and their cardinal variants.

Bessel functions J_a, Y_a and the Hankel function H1_a = J_a + iY_a for a
real order -0.5 <= a <= 3 and real argument 0 < x <= 1e4, plus the
"cardinal" forms C_a(x) / x**a used throughout the coupling formulas.

Evaluation regimes (vectorised over ``x``, the order is a scalar):

* ``x <= 2``: ascending series for J, Temme's series for Y.
* ``2 < x < 30``: Steed's method; continued fraction CF1 gives J'/J, CF2
  gives (J' + iY')/(J + iY), the Wronskian fixes the normalisation.
* ``x >= 30``: Hankel asymptotic expansion.

Temme's series and CF2 both work at a reduced order |mu| <= 1/2 and Y is
carried up to the requested order by forward recurrence, which is stable
for Y. Near-integer orders need no special casing.
"""
from dataclasses import dataclass
import math

import numpy as np

ORDER_MIN = -0.5
ORDER_MAX = 3.0
X_MAX = 1.0e4
SERIES_MAX = 2.0
ASYMPTOTIC_MIN = 30.0

_EPS = np.finfo(float).eps
_TINY = 1.0e-300
_MAXIT = 10000

# Lanczos approximation, g = 7, nine terms.
_LANCZOS_G = 7.0
_LANCZOS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_GAMMA_MAX = 171.0
_FACTORIALS = np.array([float(math.factorial(n)) for n in range(171)])

# Taylor coefficients of 1/Gamma(1 + z) about z = 0.
_RGAMMA1 = (
    1.0,
    0.577215664901532861,
    -0.655878071520253881,
    -0.0420026350340952355,
    0.16653861138229149,
    -0.0421977345555443367,
    -0.00962197152787697356,
    0.00721894324666309954,
    -0.00116516759185906511,
    -0.000215241674114950973,
    0.000128050282388116186,
    -0.0000201348547807882387,
    -1.25049348214267066e-6,
    1.13302723198169588e-6,
    -2.0563384169776071e-7,
    6.11609510448141582e-9,
    5.00200764446922293e-9,
    -1.18127457048702014e-9,
    1.04342671169110051e-10,
    7.78226343990507125e-12,
    -3.69680561864220571e-12,
    5.10037028745447598e-13,
    -2.05832605356650678e-14,
    -5.34812253942301798e-15,
    1.22677862823826079e-15,
    -1.18125930169745877e-16,
    1.18669225475160033e-18,
)


class DomainError(ValueError):
    """Argument or order outside the supported range."""


@dataclass(frozen=True)
class CylinderValue:
    """J, Y and H1 = J + iY at one (order, argument) pair."""

    j: float
    y: float
    h1: complex


def _check_order(alpha):
    alpha = float(alpha)
    if not (ORDER_MIN <= alpha <= ORDER_MAX):
        raise DomainError(f"order {alpha} outside [{ORDER_MIN}, {ORDER_MAX}]")
    return alpha


def _check_x(x, allow_zero=False):
    arr = np.asarray(x, dtype=float)
    bad = ~(arr >= 0.0) if allow_zero else ~(arr > 0.0)
    if np.any(bad):
        raise DomainError("argument must be positive" + (" or zero" if allow_zero else ""))
    if np.any(arr > X_MAX):
        raise DomainError(f"argument exceeds supported maximum {X_MAX:g}")
    return arr


def _out(arr, scalar):
    if scalar:
        return arr.item()
    return arr


def gamma_real(x):
    """Gamma function for real ``0 < x <= 171``.

    Lanczos approximation for x >= 1/2 and one step of Gamma(x) = Gamma(x+1)/x
    below that. Relative error is a few ulp over the whole range; positive
    integers return the correctly rounded factorial.
    """
    scalar = np.ndim(x) == 0
    x = np.asarray(x, dtype=float)
    if np.any(~(x > 0.0)):
        raise DomainError("gamma_real requires x > 0")
    if np.any(x > _GAMMA_MAX):
        raise DomainError(f"gamma_real overflows for x > {_GAMMA_MAX:g}")
    small = x < 0.5
    z = np.where(small, x + 1.0, x) - 1.0
    acc = np.full_like(z, _LANCZOS[0])
    for k in range(1, len(_LANCZOS)):
        acc = acc + _LANCZOS[k] / (z + k)
    t = z + _LANCZOS_G + 0.5
    # split the power so t**(z + 1/2) cannot overflow before exp(-t) applies
    half = np.power(t, 0.5 * (z + 0.5))
    g = math.sqrt(2.0 * math.pi) * half * (half * np.exp(-t)) * acc
    g = np.where(small, g / x, g)
    whole = x == np.floor(x)
    if np.any(whole):
        g = np.where(whole, _FACTORIALS[np.where(whole, x, 1.0).astype(int) - 1], g)
    return _out(g, scalar)


def _temme_gammas(mu):
    """(1/G(1-mu) - 1/G(1+mu)) / (2 mu) and (1/G(1-mu) + 1/G(1+mu)) / 2."""
    gam1 = 0.0
    gam2 = 0.0
    for k in reversed(range(len(_RGAMMA1))):
        if k % 2:
            gam1 = gam1 * mu * mu - _RGAMMA1[k]
        else:
            gam2 = gam2 * mu * mu + _RGAMMA1[k]
    return gam1, gam2


def _temme_y(mu, x):
    """Y_mu and Y_{mu+1} for |mu| <= 1/2 and 0 < x <= 2 (Temme's series)."""
    x2 = 0.5 * x
    pimu = math.pi * mu
    fact = 1.0 if abs(pimu) < _EPS else pimu / math.sin(pimu)
    d = -np.log(x2)
    e = mu * d
    with np.errstate(invalid="ignore", divide="ignore"):
        fact2 = np.where(np.abs(e) < _EPS, 1.0, np.sinh(e) / e)
    gam1, gam2 = _temme_gammas(mu)
    gampl = gam2 - mu * gam1
    gammi = gam2 + mu * gam1
    ff = 2.0 / math.pi * fact * (gam1 * np.cosh(e) + gam2 * fact2 * d)
    e = np.exp(e)
    p = e / (gampl * math.pi)
    q = 1.0 / (e * math.pi * gammi)
    pimu2 = 0.5 * pimu
    fact3 = 1.0 if abs(pimu2) < _EPS else math.sin(pimu2) / pimu2
    r = math.pi * pimu2 * fact3 * fact3
    c = np.ones_like(x)
    dd = -x2 * x2
    total = ff + r * q
    total1 = p.copy()
    for i in range(1, _MAXIT):
        ff = (i * ff + p + q) / (i * i - mu * mu)
        c = c * dd / i
        p = p / (i - mu)
        q = q / (i + mu)
        delta = c * (ff + r * q)
        total = total + delta
        delta1 = c * p - i * delta
        total1 = total1 + delta1
        if np.all(np.abs(delta) < (1.0 + np.abs(total)) * _EPS) and np.all(
            np.abs(delta1) < (1.0 + np.abs(total1)) * _EPS
        ):
            break
    else:  # pragma: no cover
        raise ArithmeticError("Temme series failed to converge")
    return -total, -total1 * 2.0 / x


def _cf1(nu, x):
    """J'_nu / J_nu by modified Lentz, plus the sign of J_nu."""
    xi = 1.0 / x
    xi2 = 2.0 * xi
    h = nu * xi
    h = np.where(np.abs(h) < _TINY, _TINY, h)
    b = xi2 * nu
    d = np.zeros_like(x)
    c = h.copy()
    sign = np.ones_like(x)
    active = np.ones(x.shape, dtype=bool)
    for _ in range(_MAXIT):
        b = b + xi2
        d_new = b - d
        d_new = np.where(np.abs(d_new) < _TINY, _TINY, d_new)
        c_new = b - 1.0 / c
        c_new = np.where(np.abs(c_new) < _TINY, _TINY, c_new)
        d_new = 1.0 / d_new
        delta = c_new * d_new
        d = np.where(active, d_new, d)
        c = np.where(active, c_new, c)
        h = np.where(active, h * delta, h)
        sign = np.where(active & (d_new < 0.0), -sign, sign)
        active &= np.abs(delta - 1.0) > _EPS
        if not active.any():
            break
    else:  # pragma: no cover
        raise ArithmeticError("CF1 failed to converge")
    return h, sign


def _cf2(mu, x):
    """p + iq = (J'_mu + iY'_mu) / (J_mu + iY_mu) by Steed's algorithm."""
    xi = 1.0 / x
    a = 0.25 - mu * mu
    p = np.full_like(x, -0.5) * xi
    q = np.ones_like(x)
    br = 2.0 * x
    bi = 2.0
    fact = a * xi / (p * p + q * q)
    cr = br + q * fact
    ci = bi + p * fact
    den = br * br + bi * bi
    dr = br / den
    di = -bi / den
    dlr = cr * dr - ci * di
    dli = cr * di + ci * dr
    p, q = p * dlr - q * dli, p * dli + q * dlr
    active = np.ones(x.shape, dtype=bool)
    for i in range(1, _MAXIT):
        a += 2 * i
        bi += 2.0
        dr = a * dr + br
        di = a * di + bi
        dr = np.where(np.abs(dr) + np.abs(di) < _TINY, _TINY, dr)
        fact = a / (cr * cr + ci * ci)
        cr = br + cr * fact
        ci = bi - ci * fact
        cr = np.where(np.abs(cr) + np.abs(ci) < _TINY, _TINY, cr)
        den = dr * dr + di * di
        dr = dr / den
        di = -di / den
        dlr = cr * dr - ci * di
        dli = cr * di + ci * dr
        p_new = p * dlr - q * dli
        q_new = p * dli + q * dlr
        p = np.where(active, p_new, p)
        q = np.where(active, q_new, q)
        active &= np.abs(dlr - 1.0) + np.abs(dli) > _EPS
        if not active.any():
            break
    else:  # pragma: no cover
        raise ArithmeticError("CF2 failed to converge")
    return p, q


def _reduced_order(nu):
    nl = int(math.floor(nu + 0.5))
    return nl, nu - nl


def _y_upward(mu, nl, x, y_mu, y_mu1):
    """Forward recurrence Y_mu, Y_{mu+1} -> Y_{mu+nl}, Y_{mu+nl+1}."""
    xi2 = 2.0 / x
    for i in range(1, nl + 1):
        y_mu, y_mu1 = y_mu1, (mu + i) * xi2 * y_mu1 - y_mu
    return y_mu, y_mu1


def _cardinal_j_series(nu, x):
    z = -0.25 * x * x
    term = np.full_like(x, 1.0 / (2.0**nu * gamma_real(nu + 1.0)))
    total = term.copy()
    for k in range(1, 200):
        term = term * z / (k * (nu + k))
        total = total + term
        if np.all(np.abs(term) <= _EPS * np.abs(total)):
            break
    return total


def _jy_small(nu, x):
    nl, mu = _reduced_order(nu)
    y_mu, y_mu1 = _temme_y(mu, x)
    y, _ = _y_upward(mu, nl, x, y_mu, y_mu1)
    j = _cardinal_j_series(nu, x) * np.power(x, nu)
    return j, y


def _jy_steed(nu, x):
    nl, mu = _reduced_order(nu)
    xi = 1.0 / x
    f_nu, sign = _cf1(nu, x)
    # unnormalised downward recurrence of (J, J') from nu to mu
    rjl = sign.copy()
    rjpl = f_nu * rjl
    fact = nu * xi
    for _ in range(nl):
        rjtemp = fact * rjl + rjpl
        fact -= xi
        rjpl = fact * rjtemp - rjl
        rjl = rjtemp
    rjl = np.where(rjl == 0.0, _EPS, rjl)
    f_mu = rjpl / rjl
    p, q = _cf2(mu, x)
    w = 2.0 / (math.pi * x)
    gam = (p - f_mu) / q
    j_mu = np.copysign(np.sqrt(w / ((p - f_mu) * gam + q)), rjl)
    y_mu = j_mu * gam
    yp_mu = p * y_mu + q * j_mu
    y_mu1 = mu * xi * y_mu - yp_mu
    y, y1 = _y_upward(mu, nl, x, y_mu, y_mu1)
    yp = nu * xi * y - y1
    j = w / (yp - f_nu * y)
    return j, y


def _hankel_asymptotic_sum(nu, x):
    """sum_k i^k a_k(nu) / x^k of the Hankel expansion (complex array)."""
    mu4 = 4.0 * nu * nu
    term = np.ones_like(x, dtype=complex)
    total = term.copy()
    for k in range(1, 200):
        term = term * (1j * (mu4 - (2 * k - 1) ** 2) / (8.0 * k)) / x
        total = total + term
        if np.all(np.abs(term) <= _EPS * np.abs(total)):
            break
    return total


def _h1_asymptotic(nu, x):
    phase = 0.5 * nu * math.pi + 0.25 * math.pi
    carrier = (np.cos(x) + 1j * np.sin(x)) * complex(math.cos(phase), -math.sin(phase))
    return np.sqrt(2.0 / (math.pi * x)) * carrier * _hankel_asymptotic_sum(nu, x)


def _jy(nu, x):
    j = np.empty_like(x)
    y = np.empty_like(x)
    small = x <= SERIES_MAX
    large = x >= ASYMPTOTIC_MIN
    mid = ~(small | large)
    if small.any():
        j[small], y[small] = _jy_small(nu, x[small])
    if mid.any():
        j[mid], y[mid] = _jy_steed(nu, x[mid])
    if large.any():
        h = _h1_asymptotic(nu, x[large])
        j[large], y[large] = h.real, h.imag
    return j, y


def bessel_jy(alpha, x):
    """J_alpha(x) and Y_alpha(x) together; ``x > 0``."""
    alpha = _check_order(alpha)
    scalar = np.ndim(x) == 0
    arr = np.atleast_1d(_check_x(x))
    j, y = _jy(alpha, arr)
    if scalar:
        return j[0].item(), y[0].item()
    return j.reshape(np.shape(x)), y.reshape(np.shape(x))


def bessel_j(alpha, x):
    """Bessel function of the first kind J_alpha(x), ``x > 0``."""
    return bessel_jy(alpha, x)[0]


def bessel_y(alpha, x):
    """Bessel function of the second kind Y_alpha(x), ``x > 0``."""
    return bessel_jy(alpha, x)[1]


def hankel1(alpha, x):
    """Hankel function of the first kind, J_alpha(x) + i Y_alpha(x)."""
    j, y = bessel_jy(alpha, x)
    return j + 1j * y


def cylinder_value(alpha, x):
    """:class:`CylinderValue` at a single point."""
    j, y = bessel_jy(alpha, float(x))
    return CylinderValue(j=j, y=y, h1=complex(j, y))


def cardinal_j(alpha, x):
    """J_alpha(x) / x**alpha, analytic at the origin (``x >= 0``).

    ``cardinal_j(alpha, 0) == 1 / (2**alpha * Gamma(alpha + 1))``.
    """
    alpha = _check_order(alpha)
    scalar = np.ndim(x) == 0
    arr = np.atleast_1d(_check_x(x, allow_zero=True))
    out = np.empty_like(arr)
    small = arr <= SERIES_MAX
    if small.any():
        out[small] = _cardinal_j_series(alpha, arr[small])
    if (~small).any():
        xs = arr[~small]
        j, _ = _jy(alpha, xs)
        out[~small] = j / np.power(xs, alpha)
    return out[0].item() if scalar else out.reshape(np.shape(x))


def cardinal_y(alpha, x):
    """Y_alpha(x) / x**alpha for ``x > 0`` (singular at the origin)."""
    alpha = _check_order(alpha)
    scalar = np.ndim(x) == 0
    arr = np.atleast_1d(_check_x(x))
    _, y = _jy(alpha, arr)
    out = y / np.power(arr, alpha)
    return out[0].item() if scalar else out.reshape(np.shape(x))


def cardinal_h1(alpha, x):
    """H1_alpha(x) / x**alpha for ``x > 0``."""
    alpha = _check_order(alpha)
    scalar = np.ndim(x) == 0
    arr = np.atleast_1d(_check_x(x))
    j, y = _jy(alpha, arr)
    scale = np.power(arr, alpha)
    small = arr <= SERIES_MAX
    jc = np.where(small, 0.0, j / scale)
    if small.any():
        jc[small] = _cardinal_j_series(alpha, arr[small])
    out = jc + 1j * (y / scale)
    return out[0].item() if scalar else out.reshape(np.shape(x))


def far_field_cardinal_h1(d, x):
    """Leading large-x form of the cardinal Hankel function of order d/2 - 1.

    sqrt(2/pi) * exp(i[x - (pi/4)(d - 1)]) / x**((d - 1)/2).
    """
    x = np.asarray(x, dtype=float)
    phase = 0.25 * math.pi * (d - 1.0)
    carrier = (np.cos(x) + 1j * np.sin(x)) * complex(math.cos(phase), -math.sin(phase))
    return math.sqrt(2.0 / math.pi) * carrier / np.power(x, 0.5 * (d - 1.0))
