"""Independent oracles used by the test suite.

Everything here deliberately avoids the library's own code paths: node
generation comes from numpy's leggauss, Legendre evaluation from Clenshaw
recursion in numpy.polynomial, projections from dense quadrature, spline
answers from naive kernel sums or dense linear solves, and physical rates
from the kinetic dispersion relation.
"""

from __future__ import annotations

import numpy as np
from numpy.polynomial import legendre as npleg
from scipy.special import wofz


def oracle_legendre_orthonormal(degree: int, x):
    """p_0..p_degree at x via numpy's Clenshaw evaluation, orthonormal scaling."""
    x = np.asarray(x, dtype=float)
    cols = []
    for k in range(degree + 1):
        c = np.zeros(k + 1)
        c[k] = 1.0
        cols.append(npleg.legval(x, c) * np.sqrt((2 * k + 1) / 2.0))
    return np.stack(cols, axis=-1)


def oracle_project_dense(func, degree: int, n_quad: int = 1000):
    """Legendre coefficients of func on (-1,1) by dense Gauss quadrature."""
    xq, wq = npleg.leggauss(n_quad)
    vals = func(xq)
    basis = oracle_legendre_orthonormal(degree, xq)
    return basis.T @ (wq * vals)


def oracle_advect_row(row: np.ndarray, delta: float, h: float, degree: int,
                      n_quad: int = 400) -> np.ndarray:
    """Brute-force reconstruct / translate / project for one periodic dG row.

    Rebuilds the piecewise polynomial from node values, evaluates it at
    shifted points (periodic wrap), and projects onto each target cell by
    dense quadrature split at the interior kink, then returns node values.
    """
    k = degree + 1
    n_cells = row.size // k
    length = n_cells * h
    gl_nodes, _ = npleg.leggauss(k)
    vand = oracle_legendre_orthonormal(degree, gl_nodes)
    coeffs = np.linalg.solve(vand, row.reshape(n_cells, k).T).T

    def eval_field(x):
        x = np.mod(x, length)
        cell = np.minimum((x / h).astype(int), n_cells - 1)
        xi = 2.0 * (x / h - cell) - 1.0
        basis = oracle_legendre_orthonormal(degree, xi)
        return np.einsum("pk,pk->p", coeffs[cell], basis)

    xq, wq = npleg.leggauss(n_quad)
    beta = np.mod(delta / h, 1.0)
    xi_break = -1.0 + 2.0 * beta
    out = np.empty((n_cells, k))
    for i in range(n_cells):
        cell_left = i * h
        acc = np.zeros(k)
        for a, b in ((-1.0, xi_break), (xi_break, 1.0)):
            if b - a < 1e-14:
                continue
            xi_q = 0.5 * (a + b) + 0.5 * (b - a) * xq
            x_q = cell_left + 0.5 * h * (1.0 + xi_q)
            vals = eval_field(x_q - delta)
            basis = oracle_legendre_orthonormal(degree, xi_q)
            acc += 0.5 * (b - a) * (basis.T @ (wq * vals))
        out[i] = vand @ acc
    return out.ravel()


def oracle_spline_kernel(x: float, h: float) -> float:
    """The cubic B-spline kernel 6S(x) = 4 - 6(x/h)^2 + 3|x/h|^3 etc."""
    ax = abs(x) / h
    if ax <= 1.0:
        return (4.0 - 6.0 * ax ** 2 + 3.0 * ax ** 3) / 6.0
    if ax <= 2.0:
        return (2.0 - ax) ** 3 / 6.0
    return 0.0


def oracle_spline_eval(omega: np.ndarray, h: float, x0: float, x: float) -> float:
    """Naive sum over every kernel and its periodic images."""
    n = omega.size
    length = n * h
    total = 0.0
    for k in range(n):
        xk = x0 + k * h
        for shift in (-length, 0.0, length):
            total += omega[k] * oracle_spline_kernel(x - xk + shift, h)
    return total


def oracle_cyclic_solve(data: np.ndarray) -> np.ndarray:
    """Dense solve of the periodic (1,4,1)/6 interpolation system."""
    n = data.size
    a = np.zeros((n, n))
    for i in range(n):
        a[i, i] = 4.0 / 6.0
        a[i, (i - 1) % n] = 1.0 / 6.0
        a[i, (i + 1) % n] = 1.0 / 6.0
    return np.linalg.solve(a, data)


def plasma_dispersion(zeta):
    return 1j * np.sqrt(np.pi) * wofz(zeta)


def landau_root(k: float, guess: complex = 1.4 - 0.15j) -> complex:
    """Least-damped root of 1 + (1 + zeta Z(zeta))/k^2 = 0 for a unit Maxwellian."""

    def eps(omega):
        zeta = omega / (np.sqrt(2.0) * k)
        return 1.0 + (1.0 + zeta * plasma_dispersion(zeta)) / k ** 2

    omega = guess
    for _ in range(200):
        d = 1e-7
        step = eps(omega) / ((eps(omega + d) - eps(omega - d)) / (2 * d))
        omega -= step
        if abs(step) < 1e-14:
            break
    return omega


def landau_damping_rate(k: float) -> float:
    """Field-amplitude damping rate (positive) of the dominant Landau mode."""
    return -landau_root(k).imag


def dense_mass_2d(func, x_span, v_span, n_quad: int = 400) -> float:
    """Dense tensor Gauss-Legendre integral of func(x, v) over the box."""
    xq, wq = npleg.leggauss(n_quad)
    x = 0.5 * (x_span[0] + x_span[1]) + 0.5 * (x_span[1] - x_span[0]) * xq
    v = 0.5 * (v_span[0] + v_span[1]) + 0.5 * (v_span[1] - v_span[0]) * xq
    jac = 0.25 * (x_span[1] - x_span[0]) * (v_span[1] - v_span[0])
    vals = func(x[None, :], v[:, None])
    vals = np.broadcast_to(vals, (n_quad, n_quad))
    return jac * float(wq @ vals @ wq)


def weighted_l2(f) -> float:
    """Quadrature L2 norm of a DistributionField's raw values."""
    g = f.grid
    return float(np.sqrt(g.v_weights @ (f.values * f.values) @ g.x_weights))
