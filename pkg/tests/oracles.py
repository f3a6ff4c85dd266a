"""Independent numerical oracles for the test suite.

Everything here avoids the jet engine on purpose: derivatives come from
central finite differences, flows from explicit RK4 integration.  These are
the second opinions the exact machinery is checked against.
"""

import numpy as np


def fd1(fn, x, v, h=1e-3):
    """5-point central first derivative of fn along coordinate v."""
    e = np.zeros_like(x, dtype=float)
    e[v] = 1.0
    return (-fn(x + 2 * h * e) + 8 * fn(x + h * e)
            - 8 * fn(x - h * e) + fn(x - 2 * h * e)) / (12 * h)


def fd_multi(fn, x, alpha, h=1e-2):
    """Mixed partial d^alpha fn by nested 5-point stencils."""
    fn_cur = fn
    for v, rep in enumerate(alpha):
        for _ in range(rep):
            fn_prev = fn_cur
            fn_cur = (lambda y, f=fn_prev, vv=v: fd1(f, y, vv, h))
    return fn_cur(np.asarray(x, float))


def metric_at(geometry, x):
    from ctlab.exprlang import eval_expr
    m = geometry.dim
    g = np.empty((m, m))
    for i in range(m):
        for j in range(m):
            g[i, j] = eval_expr(geometry.spec.metric_exprs[i][j], x)
    return g


def christoffel_fd(geometry, p, h=1e-3):
    """Gamma^l_{jk} from finite differences of the metric entries."""
    m = geometry.dim
    dg = np.empty((m, m, m))  # dg[a,b,v] = d_v g_ab
    for v in range(m):
        dg[:, :, v] = fd1(lambda y: metric_at(geometry, y), p, v, h)
    ginv = np.linalg.inv(metric_at(geometry, p))
    b = dg.transpose(0, 2, 1) + dg - dg.transpose(2, 0, 1)
    return 0.5 * np.einsum("lr,rjk->ljk", ginv, b)


def scalar_field(geometry, text):
    from ctlab.exprlang import eval_expr, parse_expr
    expr = parse_expr(text, geometry.spec.coords)
    return lambda x: eval_expr(expr, x)


def hessian_fd(geometry, p, field_text, h=1e-3):
    """Covariant Hessian: FD of the gradient components corrected by the
    FD Christoffel symbols."""
    m = geometry.dim
    f = scalar_field(geometry, field_text)
    grad = lambda y: np.array([fd1(f, y, v, h) for v in range(m)])
    dgrad = np.empty((m, m))  # dgrad[i,j] = d_j grad_i
    for j in range(m):
        dgrad[:, j] = fd1(grad, p, j, h)
    gam = christoffel_fd(geometry, p, h)
    g1 = grad(np.asarray(p, float))
    return dgrad - np.einsum("kij,k->ij", gam, g1)


def laplacian_fd(geometry, p, field_text, h=1e-3):
    hess = hessian_fd(geometry, p, field_text, h)
    return float(np.einsum("ij,ij->",
                           np.linalg.inv(metric_at(geometry, p)), hess))


def flow_rk4(x_fn, p, t, steps=32):
    """Integrate the flow of the vector field x_fn from p for time t."""
    y = np.asarray(p, float).copy()
    dt = t / steps
    for _ in range(steps):
        k1 = x_fn(y)
        k2 = x_fn(y + 0.5 * dt * k1)
        k3 = x_fn(y + 0.5 * dt * k2)
        k4 = x_fn(y + dt * k3)
        y = y + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
    return y


def lie_metric_fd(geometry, p, x_fn, t=1e-3, hx=1e-4):
    """(L_X g)_ij at p by differentiating the pullback of g along the flow
    of X: central difference in flow time, Jacobians by FD in space."""
    m = geometry.dim

    def pullback(t_val):
        phi = lambda y: flow_rk4(x_fn, y, t_val)
        jac = np.empty((m, m))  # jac[k,i] = d phi^k / d x^i
        for i in range(m):
            jac[:, i] = fd1(phi, p, i, hx)
        g_at = metric_at(geometry, phi(np.asarray(p, float)))
        return np.einsum("kl,ki,lj->ij", g_at, jac, jac)

    return (pullback(t) - pullback(-t)) / (2 * t)
