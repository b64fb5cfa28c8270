"""Fourier grid, spectral fields, dyadic cut-offs, and Sobolev norms on the torus.

Conventions (used consistently across the package):

* The domain is the 2*pi-periodic torus, sampled at ``phys_points`` equispaced
  collocation points.
* A field is stored by its Fourier coefficients ``c[n]``, |n| <= max_mode,
  with the constant-free synthesis ``u(x) = sum_n c[n] exp(i n x)``.
  Products of fields are then plain coefficient convolutions with no 2*pi
  factors, which is the normalization in which all nonlinear-term constants
  below are exact.
* Sobolev norms are sequence-side: ``||u||_{H^s}^2 = sum <n>^{2s} |c[n]|^2``
  with ``<n> = sqrt(1+n^2)``.  Physical integrals over [0, 2*pi] (used by the
  Hamiltonians) therefore carry an explicit 2*pi relative to these norms:
  ``integral |u|^2 dx = 2*pi * sum |c[n]|^2``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.fft as sfft

from .errors import ConfigurationError, ParameterError, SymmetryError

TWO_PI = 2.0 * np.pi

#: Default padding factor: a 5-fold product of band-limited factors is
#: alias-free on the retained band once phys_points >= 3*(2*max_mode+1).
DEFAULT_DEALIAS_FACTOR = 3.0

_FAST_SIZES = None


def _next_fast_len(n: int) -> int:
    return sfft.next_fast_len(int(n), real=True)


@dataclass(frozen=True)
class GridSpec:
    """Collocation grid for a 2*pi-periodic real field.

    max_mode: largest retained |n|.
    phys_points: number of collocation points; must be at least
        dealias_factor * (2*max_mode + 1) so quintic products are alias-free.
    dealias_factor: padding rule, >= 3 for the quintic nonlinearity.
    """

    max_mode: int
    phys_points: int = 0
    dealias_factor: float = DEFAULT_DEALIAS_FACTOR
    domain_length: float = field(default=TWO_PI)

    def __post_init__(self):
        if self.max_mode < 1:
            raise ConfigurationError(f"max_mode must be positive, got {self.max_mode}")
        if self.dealias_factor < 3.0:
            raise ConfigurationError(
                f"dealias_factor must be >= 3 for quintic products, got {self.dealias_factor}"
            )
        min_pts = int(np.ceil(self.dealias_factor * (2 * self.max_mode + 1)))
        if self.phys_points == 0:
            object.__setattr__(self, "phys_points", _next_fast_len(min_pts))
        if self.phys_points < min_pts:
            raise ConfigurationError(
                f"phys_points={self.phys_points} < dealias_factor*(2*max_mode+1)={min_pts}"
            )
        if abs(self.domain_length - TWO_PI) > 1e-15:
            raise ConfigurationError("domain_length is fixed to 2*pi")

    @property
    def modes(self) -> np.ndarray:
        """Retained mode numbers, ordered -max_mode ... max_mode."""
        return np.arange(-self.max_mode, self.max_mode + 1)

    @property
    def x(self) -> np.ndarray:
        """Collocation points x_j = 2*pi*j/phys_points."""
        return TWO_PI * np.arange(self.phys_points) / self.phys_points


@dataclass
class SpectralField:
    """Dense truncated Fourier coefficients on a GridSpec.

    ``coeff[i]`` is the coefficient of ``exp(i n x)`` with ``n = i - max_mode``
    (ordered -max_mode..max_mode).  Real evolution states satisfy the
    Hermitian symmetry ``coeff[-n] = conj(coeff[n])``; the ill-posedness
    counterexample data intentionally violate it and are handled as genuinely
    complex fields.
    """

    grid: GridSpec
    coeff: np.ndarray

    def __post_init__(self):
        n = 2 * self.grid.max_mode + 1
        c = np.asarray(self.coeff, dtype=np.complex128)
        if c.shape != (n,):
            raise ConfigurationError(f"coeff must have shape ({n},), got {c.shape}")
        self.coeff = c

    @classmethod
    def zeros(cls, grid: GridSpec) -> "SpectralField":
        return cls(grid, np.zeros(2 * grid.max_mode + 1, dtype=np.complex128))

    @classmethod
    def from_modes(cls, grid: GridSpec, values: dict) -> "SpectralField":
        """Build a field from a mapping n -> coefficient."""
        f = cls.zeros(grid)
        for n, v in values.items():
            if abs(n) > grid.max_mode:
                raise ConfigurationError(f"mode {n} outside |n| <= {grid.max_mode}")
            f.coeff[n + grid.max_mode] = v
        return f

    def get(self, n: int) -> complex:
        if abs(n) > self.grid.max_mode:
            return 0.0 + 0.0j
        return complex(self.coeff[n + self.grid.max_mode])

    def copy(self) -> "SpectralField":
        return SpectralField(self.grid, self.coeff.copy())

    def hermitian_defect(self) -> float:
        """max_n |coeff(-n) - conj(coeff(n))|, zero for real fields."""
        return float(np.max(np.abs(self.coeff[::-1] - np.conj(self.coeff))))

    def is_real(self, tol: float = 1e-10) -> bool:
        scale = max(1.0, float(np.max(np.abs(self.coeff))))
        return self.hermitian_defect() <= tol * scale

    def require_real(self, tol: float = 1e-8, what: str = "field"):
        if not self.is_real(tol):
            raise SymmetryError(
                f"{what} violates Hermitian symmetry (defect {self.hermitian_defect():.3e})"
            )


# ---------------------------------------------------------------------------
# analyze / synthesize
# ---------------------------------------------------------------------------

def synthesize_values(grid: GridSpec, coeff: np.ndarray) -> np.ndarray:
    """Pointwise values of sum_n coeff[n] e^{inx} on the collocation grid.

    Works for arbitrary complex coefficient arrays (returns complex values);
    use :func:`synthesize` for the real-field contract.
    """
    M, P = grid.max_mode, grid.phys_points
    buf = np.zeros(P, dtype=np.complex128)
    buf[: M + 1] = coeff[M:]
    buf[P - M:] = coeff[:M]
    return sfft.ifft(buf) * P


def synthesize(field: SpectralField) -> np.ndarray:
    """Real collocation samples of a Hermitian-symmetric field."""
    field.require_real(what="synthesize input")
    M, P = field.grid.max_mode, field.grid.phys_points
    half = np.zeros(P // 2 + 1, dtype=np.complex128)
    half[: M + 1] = field.coeff[M:]
    return sfft.irfft(half, P) * P


def analyze(grid: GridSpec, samples: np.ndarray) -> SpectralField:
    """Truncated Fourier coefficients of real collocation samples.

    Inverse of :func:`synthesize` on band-limited fields.
    """
    samples = np.asarray(samples)
    if samples.shape != (grid.phys_points,):
        raise ConfigurationError(
            f"samples must have length phys_points={grid.phys_points}, got {samples.shape}"
        )
    if np.iscomplexobj(samples):
        if np.max(np.abs(samples.imag)) > 1e-12 * max(1.0, np.max(np.abs(samples.real))):
            raise ConfigurationError("analyze expects real-valued samples")
        samples = samples.real
    M, P = grid.max_mode, grid.phys_points
    half = sfft.rfft(samples) / P
    coeff = np.empty(2 * M + 1, dtype=np.complex128)
    coeff[M:] = half[: M + 1]
    coeff[:M] = np.conj(half[1: M + 1][::-1])
    return SpectralField(grid, coeff)


def analyze_complex(grid: GridSpec, values: np.ndarray) -> np.ndarray:
    """Truncated coefficients of complex pointwise values (no symmetry assumed)."""
    values = np.asarray(values, dtype=np.complex128)
    if values.shape != (grid.phys_points,):
        raise ConfigurationError("values length must equal phys_points")
    M, P = grid.max_mode, grid.phys_points
    full = sfft.fft(values) / P
    coeff = np.empty(2 * M + 1, dtype=np.complex128)
    coeff[M:] = full[: M + 1]
    coeff[:M] = full[P - M:]
    return coeff


# ---------------------------------------------------------------------------
# Smooth dyadic cut-offs
# ---------------------------------------------------------------------------

def _g(t):
    """exp(-1/t) for t > 0, 0 otherwise (smooth transition kernel)."""
    t = np.asarray(t, dtype=float)
    out = np.zeros_like(t)
    pos = t > 0
    out[pos] = np.exp(-1.0 / t[pos])
    return out


def _g_prime(t):
    t = np.asarray(t, dtype=float)
    out = np.zeros_like(t)
    pos = t > 0
    out[pos] = np.exp(-1.0 / t[pos]) / t[pos] ** 2
    return out


def eta0(x):
    """Smooth bump: 1 on [-1,1], supported in [-2,2].

    eta0(x) = g(2-|x|) / (g(2-|x|) + g(|x|-1)) with g(t) = exp(-1/t) (t>0).
    """
    x = np.abs(np.asarray(x, dtype=float))
    num = _g(2.0 - x)
    den = num + _g(x - 1.0)
    return np.where(den > 0, num / np.where(den > 0, den, 1.0), 0.0)


def eta0_prime(x):
    """d/dx of eta0 (odd function; closed form, no differencing)."""
    x = np.asarray(x, dtype=float)
    ax = np.abs(x)
    sgn = np.sign(x)
    ga = _g(2.0 - ax)
    gb = _g(ax - 1.0)
    dga = -_g_prime(2.0 - ax)   # d/d|x| g(2-|x|)
    dgb = _g_prime(ax - 1.0)    # d/d|x| g(|x|-1)
    den = ga + gb
    with np.errstate(divide="ignore", invalid="ignore"):
        d = (dga * gb - ga * dgb) / den**2
    d = np.where(den > 0, d, 0.0)
    return sgn * np.where((ax > 1.0) & (ax < 2.0), d, 0.0)


def chi(k: int, n) -> np.ndarray:
    """Dyadic cut-off chi_k(n): chi_0 = eta0, chi_k = eta0(n/2^k) - eta0(n/2^{k-1})."""
    if k < 0:
        raise ParameterError(f"dyadic index k must be >= 0, got {k}")
    n = np.asarray(n, dtype=float)
    if k == 0:
        return eta0(n)
    return eta0(n / 2.0**k) - eta0(n / 2.0 ** (k - 1))


def psi(k: int, n) -> np.ndarray:
    """psi_k(n) = n * chi_k'(n); psi_0 := n * eta0'(n).  Even and real."""
    if k < 0:
        raise ParameterError(f"dyadic index k must be >= 0, got {k}")
    n = np.asarray(n, dtype=float)
    if k == 0:
        return n * eta0_prime(n)
    dchi = eta0_prime(n / 2.0**k) / 2.0**k - eta0_prime(n / 2.0 ** (k - 1)) / 2.0 ** (k - 1)
    return n * dchi


def eval_chi_psi(k: int, n: int) -> tuple:
    """(chi_k(n), psi_k(n)) at a single integer frequency."""
    return float(chi(k, n)), float(psi(k, n))


@dataclass(frozen=True)
class CutoffFamily:
    """Precomputed chi_k / psi_k tables over a grid's retained modes."""

    grid: GridSpec

    def k_max(self) -> int:
        """Largest k whose annulus intersects the retained band."""
        M = self.grid.max_mode
        return max(0, int(np.ceil(np.log2(max(M, 1)))) + 1)

    def chi_table(self, k: int) -> np.ndarray:
        return chi(k, self.grid.modes)

    def psi_table(self, k: int) -> np.ndarray:
        return psi(k, self.grid.modes)


def project_pk(field: SpectralField, k: int) -> SpectralField:
    """Littlewood-Paley projection P_k: multiply coefficients by chi_k(n)."""
    w = chi(k, field.grid.modes)
    return SpectralField(field.grid, field.coeff * w)


def sobolev_norm(field: SpectralField, s: float) -> float:
    """(sum_n <n>^{2s} |coeff(n)|^2)^{1/2} with <n> = sqrt(1+n^2)."""
    n = field.grid.modes.astype(float)
    w = (1.0 + n * n) ** s
    return float(np.sqrt(np.sum(w * np.abs(field.coeff) ** 2)))


def l2_norm_sq(coeff: np.ndarray) -> float:
    """Sequence-side L^2 norm squared, sum |c[n]|^2."""
    return float(np.sum(np.abs(coeff) ** 2))
