"""
Jacobi theta and Weierstrass sigma/zeta functions on a rectangular lattice.

Only what the genus-one fortress field needs: the q-series of theta_1 and
its derivatives, and sigma/zeta through their theta representations.
"""
import cmath
import math
from dataclasses import dataclass, field

from .errors import DomainError, NomeDomainError, PoleError

SERIES_RTOL = 1e-18
MAX_TERMS = 200


def _series(v: complex, q: complex, order: int, max_terms: int = MAX_TERMS) -> complex:
    """
    order-th derivative in v of theta_1(v, q) = 2 sum (-1)^n q^((n+1/2)^2) sin((2n+1) v).

    Terms are added until one falls below SERIES_RTOL times the partial sum.
    """
    q = complex(q)
    if abs(q) >= 1.0:
        raise NomeDomainError(f"Nome must satisfy |q| < 1, got |q|={abs(q)}")
    if q == 0:
        return 0j
    log_q = cmath.log(q)
    total = 0j
    for n in range(max_terms):
        k = 2 * n + 1
        weight = cmath.exp(log_q * (n + 0.5) ** 2) * k ** order
        # d^order/dv^order sin(k v) cycles through sin, cos, -sin, -cos
        phase = order % 4
        if phase == 0:
            trig = cmath.sin(k * v)
        elif phase == 1:
            trig = cmath.cos(k * v)
        elif phase == 2:
            trig = -cmath.sin(k * v)
        else:
            trig = -cmath.cos(k * v)
        total += 2.0 * (-1) ** n * weight * trig
        # Bound the term by its modulus envelope so accidental zeros of sin do not stop early
        bound = 2.0 * abs(weight) * math.exp(k * abs(complex(v).imag))
        if bound <= SERIES_RTOL * abs(total) or bound < 1e-300:
            break
    return total


def theta1(v: complex, q: complex, max_terms: int = MAX_TERMS) -> complex:
    """Jacobi theta_1(v | q) from its q-series."""
    return _series(complex(v), q, 0, max_terms)


def theta1_prime(v: complex, q: complex) -> complex:
    return _series(complex(v), q, 1)


@dataclass(frozen=True)
class RectLattice:
    """Lattice generated by 2*omega1 (real) and 2*omega3 (purely imaginary)."""

    omega1: float
    omega3: complex
    nome: complex = field(init=False)
    eta1: float = field(init=False)
    _theta1_prime_0: complex = field(init=False, repr=False)

    def __post_init__(self):
        omega3 = complex(self.omega3)
        if self.omega1 <= 0 or omega3.real != 0 or omega3.imag <= 0:
            raise DomainError("Rectangular lattice needs omega1 > 0 and omega3 on the positive imaginary axis")
        object.__setattr__(self, "omega3", omega3)
        q = cmath.exp(1j * math.pi * omega3 / self.omega1)
        if abs(q) >= 1:
            raise NomeDomainError(f"Lattice nome |q|={abs(q)} is not inside the unit disc")
        d1 = _series(0j, q, 1)
        d3 = _series(0j, q, 3)
        object.__setattr__(self, "nome", q)
        object.__setattr__(self, "_theta1_prime_0", d1)
        object.__setattr__(self, "eta1", float((-(math.pi ** 2) / (12.0 * self.omega1) * d3 / d1).real))

    @classmethod
    def square(cls) -> "RectLattice":
        """The tau = 1 lattice generated by 2 and 2i."""
        return cls(1.0, 1j)

    @property
    def eta3(self) -> complex:
        """zeta(omega3)."""
        return wzeta(self.omega3, self)

    def legendre_residual(self) -> float:
        """|eta1 omega3 - eta3 omega1 - i pi/2|."""
        return abs(self.eta1 * self.omega3 - self.eta3 * self.omega1 - 0.5j * math.pi)

    def is_lattice_point(self, z: complex, tol: float = 1e-12) -> bool:
        m = z.real / (2 * self.omega1)
        n = z.imag / (2 * self.omega3.imag)
        return abs(m - round(m)) * 2 * self.omega1 < tol and abs(n - round(n)) * 2 * self.omega3.imag < tol


def wsigma(z: complex, lattice: RectLattice) -> complex:
    """Weierstrass sigma via sigma(z) = (2w1/pi) exp(eta1 z^2 / (2w1)) theta1(pi z / (2w1)) / theta1'(0)."""
    z = complex(z)
    w1 = lattice.omega1
    v = math.pi * z / (2 * w1)
    return (2 * w1 / math.pi) * cmath.exp(lattice.eta1 * z * z / (2 * w1)) * theta1(v, lattice.nome) / lattice._theta1_prime_0


def wzeta(z: complex, lattice: RectLattice) -> complex:
    """Weierstrass zeta, the logarithmic derivative of sigma."""
    z = complex(z)
    if lattice.is_lattice_point(z):
        raise PoleError(f"zeta has a pole at lattice point {z}")
    w1 = lattice.omega1
    v = math.pi * z / (2 * w1)
    return lattice.eta1 * z / w1 + (math.pi / (2 * w1)) * theta1_prime(v, lattice.nome) / theta1(v, lattice.nome)
