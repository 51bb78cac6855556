"""Spectral collocation machinery on the unit disk.

Angle: equispaced Fourier grid, derivatives via FFT. Radius: Chebyshev
points on [-1, 1] with an odd polynomial degree so the origin is excluded,
folded to the positive half using the disk identification
v(-r, theta) = v(r, theta + pi); an angular mode of parity p then sees the
even- or odd-folded differentiation matrix. This is the standard way to
avoid both the coordinate singularity at r = 0 and any 1/r evaluation there.

Row 0 of every (n_r x n_theta) field array is the boundary r = 1; radii are
stored descending.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import lu_factor, lu_solve

from .errors import ValidationError


def chebyshev_matrix(N):
    """Differentiation matrix on the N+1 Chebyshev points cos(j pi / N)."""
    x = np.cos(np.pi * np.arange(N + 1) / N)
    c = np.ones(N + 1)
    c[0] = c[-1] = 2.0
    c *= (-1.0) ** np.arange(N + 1)
    dx = x[:, None] - x[None, :] + np.eye(N + 1)
    D = np.outer(c, 1.0 / c) / dx
    np.fill_diagonal(D, 0.0)
    np.fill_diagonal(D, -D.sum(axis=1))
    return D, x


@dataclass(frozen=True)
class DiskGrid:
    n_r: int = 64        # positive radial collocation nodes (incl. boundary)
    n_theta: int = 128
    r: np.ndarray = field(init=False, repr=False, compare=False)
    theta: np.ndarray = field(init=False, repr=False, compare=False)
    k: np.ndarray = field(init=False, repr=False, compare=False)
    D_even: np.ndarray = field(init=False, repr=False, compare=False)
    D_odd: np.ndarray = field(init=False, repr=False, compare=False)
    D2_even: np.ndarray = field(init=False, repr=False, compare=False)
    D2_odd: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.n_theta % 2:
            raise ValidationError("n_theta must be even")
        if self.n_r < 4:
            raise ValidationError("n_r must be at least 4")
        N = 2 * self.n_r - 1
        D, x = chebyshev_matrix(N)
        D2 = D @ D
        n = self.n_r
        refl = N - np.arange(n)
        object.__setattr__(self, "r", x[:n])
        object.__setattr__(self, "theta", 2.0 * np.pi * np.arange(self.n_theta) / self.n_theta)
        object.__setattr__(self, "k",
                           np.fft.fftfreq(self.n_theta, d=1.0 / self.n_theta).astype(int))
        object.__setattr__(self, "D_even", D[:n, :n] + D[:n, refl])
        object.__setattr__(self, "D_odd", D[:n, :n] - D[:n, refl])
        object.__setattr__(self, "D2_even", D2[:n, :n] + D2[:n, refl])
        object.__setattr__(self, "D2_odd", D2[:n, :n] - D2[:n, refl])

    @property
    def even_cols(self):
        return np.abs(self.k) % 2 == 0

    def radial_matrix(self, parity):
        return self.D_even if parity == 0 else self.D_odd

    def radial_matrix2(self, parity):
        return self.D2_even if parity == 0 else self.D2_odd

    def fold_derivative(self, Vh, order=1):
        """Apply the parity-correct radial derivative to a theta-spectrum array."""
        out = np.empty_like(Vh)
        even = self.even_cols
        De = self.D_even if order == 1 else self.D2_even
        Do = self.D_odd if order == 1 else self.D2_odd
        out[:, even] = De @ Vh[:, even]
        out[:, ~even] = Do @ Vh[:, ~even]
        return out

    def mode_operator(self, q, potential=None):
        """Radial collocation operator for angular mode q with Dirichlet row.

        Returns the (n_r x n_r) matrix of r**2 d2/dr2 + r d/dr - q**2
        minus the diagonal potential (already carrying the r**2 scaling of
        the mapped operator), with row 0 replaced by the identity
        (boundary value row).
        """
        q = abs(int(q))
        p = q % 2
        L = (np.diag(self.r**2) @ self.radial_matrix2(p)
             + np.diag(self.r) @ self.radial_matrix(p)
             - float(q**2) * np.eye(self.n_r))
        if potential is not None:
            L = L - np.diag(potential)
        L[0, :] = 0.0
        L[0, 0] = 1.0
        return L


def theta_derivative(values, order=1):
    """Spectral derivative of a periodic sample array along its last axis."""
    values = np.asarray(values, dtype=float)
    n = values.shape[-1]
    k = np.fft.rfftfreq(n, d=1.0 / n)
    spec = np.fft.rfft(values, axis=-1) * (1j * k) ** order
    if order % 2 and n % 2 == 0:
        spec[..., -1] = 0.0  # drop the unpaired Nyquist mode for odd derivatives
    return np.fft.irfft(spec, n=n, axis=-1)


def dealias(values):
    """2/3-rule truncation along the last (angular) axis."""
    values = np.asarray(values, dtype=float)
    n = values.shape[-1]
    spec = np.fft.rfft(values, axis=-1)
    cutoff = n // 3
    spec[..., cutoff + 1:] = 0.0
    return np.fft.irfft(spec, n=n, axis=-1)


@dataclass
class MappedCoefficients:
    """Coefficient arrays of the Laplacian under the blended radial map.

    The physical radius is s = R phi(r, theta) with

        phi = r (1 + E(theta) + r O(theta)),

    where E and O are the even and odd parts of rho under the half-turn
    theta -> theta + pi. The blend makes the map parity consistent,
    phi(-r, theta) = -phi(r, theta + pi), so the folded radial
    differentiation stays exact when rho has odd modes, and phi is
    polynomial in r, so each folded column remains analytic. With
    J = phi_r and g = phi_theta / J the scaled operator reads

        R**2 phi**2 Delta = a_rr v_rr + a_r v_r + v_tt + a_rt v_rt,
        a_rr = (phi/J)**2 + g**2,   a_rt = -2 g,
        a_r  = -phi**2 J_r / J**3 + phi/J - g_theta + g g_r.

    It is invertible on the whole admissible set: J >= 1 - 3 sup|rho| > 0.
    """
    phi: np.ndarray      # (n_r, n_theta) mapped radius / R
    a_rr: np.ndarray
    a_r: np.ndarray
    a_rt: np.ndarray
    scale: np.ndarray    # R**2 phi**2, multiplies the physical right-hand side
    h: np.ndarray        # 1 + rho on the boundary
    beta: np.ndarray     # rho' / h on the boundary
    J1: np.ndarray       # phi_r at r = 1
    R: float

    @classmethod
    def from_boundary(cls, rho, rho_p, rho_pp, R, r_nodes):
        half = len(rho) // 2
        E = 0.5 * (rho + np.roll(rho, half))
        O = 0.5 * (rho - np.roll(rho, half))
        Ep = theta_derivative(E, 1)
        Op = theta_derivative(O, 1)
        Epp = theta_derivative(E, 2)
        Opp = theta_derivative(O, 2)

        r = np.asarray(r_nodes, dtype=float)[:, None]
        phi = r * (1.0 + E + r * O)
        J = 1.0 + E + 2.0 * r * O
        J_r = 2.0 * O[None, :] + np.zeros_like(phi)
        phi_t = r * Ep + r**2 * Op

        g = dealias(phi_t / J)
        g_r = dealias((Ep + 2.0 * r * Op - 2.0 * g * O) / J)
        g_t = dealias((r * Epp + r**2 * Opp - g * (Ep + 2.0 * r * Op)) / J)

        a_rr = dealias((phi / J) ** 2 + g**2)
        a_rt = -2.0 * g
        a_r = dealias(-(phi**2) * J_r / J**3 + phi / J - g_t + g * g_r)

        h = 1.0 + rho
        return cls(phi=phi, a_rr=a_rr, a_r=a_r, a_rt=a_rt,
                   scale=(R * phi) ** 2, h=h, beta=dealias(rho_p / h),
                   J1=1.0 + E + 2.0 * O, R=float(R))


def apply_mapped_laplacian(grid: DiskGrid, coefs: MappedCoefficients, V):
    """Scaled Laplacian R**2 phi**2 * Delta acting on mapped-grid samples."""
    Vh = np.fft.fft(V, axis=1)
    Vrh = grid.fold_derivative(Vh, order=1)
    Vrrh = grid.fold_derivative(Vh, order=2)
    ik = 1j * grid.k
    Vr = np.fft.ifft(Vrh, axis=1).real
    Vrr = np.fft.ifft(Vrrh, axis=1).real
    Vtt = np.fft.ifft(-grid.k**2 * Vh, axis=1).real
    Vrt = np.fft.ifft(ik * Vrh, axis=1).real
    return coefs.a_rr * Vrr + coefs.a_r * Vr + Vtt + coefs.a_rt * Vrt


def mapped_radius(coefs: MappedCoefficients, s_over_R, theta_index):
    """Invert the blended map: mapped r with R phi(r, theta) = s.

    theta_index selects the angular column; s_over_R = s / R must lie in
    [0, phi(1, theta)].
    """
    half = coefs.h.shape[0] // 2
    E = 0.5 * (coefs.h - 1.0 + np.roll(coefs.h - 1.0, half))[theta_index]
    O = 0.5 * (coefs.h - 1.0 - np.roll(coefs.h - 1.0, half))[theta_index]
    c1 = 1.0 + E
    if abs(O) < 1e-15:
        return s_over_R / c1
    disc = c1 * c1 + 4.0 * O * s_over_R
    return (-c1 + np.sqrt(disc)) / (2.0 * O)


def boundary_radial_derivative(grid: DiskGrid, V):
    """d/dr at r = 1 of a mapped-grid field."""
    Vh = np.fft.fft(V, axis=1)
    Vrh = grid.fold_derivative(Vh, order=1)
    return np.fft.ifft(Vrh, axis=1).real[0, :]


class ModePreconditioner:
    """Per-angular-mode LU factorizations of the radial collocation operator.

    Exact for angularly constant coefficients; used as the preconditioner of
    the Krylov solves of the mapped (variable-coefficient) problems.
    """

    def __init__(self, grid: DiskGrid, potential=None):
        self.grid = grid
        self._lu = {}
        for q in range(grid.n_theta // 2 + 1):
            self._lu[q] = lu_factor(grid.mode_operator(q, potential))

    def solve_interior(self, residual):
        """Solve with zero boundary data; residual has n_r - 1 interior rows."""
        grid = self.grid
        n = grid.n_theta
        Rh = np.fft.fft(residual, axis=1)
        out = np.empty_like(Rh)
        for q in range(n // 2 + 1):
            cols = [q] if q in (0, n // 2) else [q, n - q]
            rhs = np.zeros((grid.n_r, len(cols)), dtype=complex)
            rhs[1:, :] = Rh[:, cols]
            out[:, cols] = lu_solve(self._lu[q], rhs, check_finite=False)[1:, :]
        return np.fft.ifft(out, axis=1).real


def harmonic_extension(grid: DiskGrid, boundary):
    """Poisson-kernel extension r^|k| of boundary data; exact disk harmonic."""
    gh = np.fft.fft(np.asarray(boundary, dtype=float))
    powers = grid.r[:, None] ** np.abs(grid.k)[None, :]
    return np.fft.ifft(powers * gh[None, :], axis=1).real


def eval_field_columns(grid: DiskGrid, V, radii):
    """Barycentric evaluation of each theta-column at a per-column radius.

    Uses the parity identification to extend each column to the full
    Chebyshev point set before interpolating, so the result is spectrally
    accurate for any radius in (0, 1].
    """
    n = grid.n_r
    N = 2 * n - 1
    x = np.cos(np.pi * np.arange(N + 1) / N)
    w = (-1.0) ** np.arange(N + 1)
    w[0] *= 0.5
    w[-1] *= 0.5
    shift = grid.n_theta // 2
    out = np.empty(grid.n_theta)
    for j in range(grid.n_theta):
        col = np.empty(N + 1)
        col[:n] = V[:, j]
        col[n:] = V[::-1, (j + shift) % grid.n_theta]
        t = radii[j] if np.ndim(radii) else radii
        diff = t - x
        hit = np.abs(diff) < 1e-14
        if np.any(hit):
            out[j] = col[np.argmax(hit)]
        else:
            ww = w / diff
            out[j] = np.dot(ww, col) / ww.sum()
    return out
