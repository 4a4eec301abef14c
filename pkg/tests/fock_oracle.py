"""Brute-force truncated-Fock-space oracle.

Independent of the covariance-matrix engine: states are vectors or density
matrices over a finite photon-number basis, gates act by exponentiating
their generators with sparse linear algebra, and every figure of merit is
computed from the density matrix directly.  Truncation error is controlled
by keeping excitation levels far above the populated range.
"""

import numpy as np
from scipy.sparse import diags, identity, kron
from scipy.sparse.linalg import expm_multiply


def destroy(dim):
    return diags(np.sqrt(np.arange(1.0, dim)), 1, format="csc", dtype=complex)


def op_on(op, which, n_modes, dim):
    """Embed a single-mode operator at position ``which`` of a register."""
    factors = [identity(dim, format="csc", dtype=complex)] * n_modes
    factors[which] = op
    out = factors[0]
    for f in factors[1:]:
        out = kron(out, f, format="csc")
    return out


def vacuum_vector(n_modes, dim):
    psi = np.zeros(dim**n_modes, dtype=complex)
    psi[0] = 1.0
    return psi


def generator_squeezer(s, mode, n_modes, dim):
    """exp of this generator squeezes one mode by ``s``."""
    a = op_on(destroy(dim), mode, n_modes, dim)
    ad = a.conj().T
    return 0.5 * s * (ad @ ad - a @ a)


def generator_beamsplitter(theta, mode_pair, n_modes, dim):
    j, k = mode_pair
    a = op_on(destroy(dim), j, n_modes, dim)
    b = op_on(destroy(dim), k, n_modes, dim)
    return theta * (a.conj().T @ b - a @ b.conj().T)


def generator_two_mode_squeezer(r, mode_pair, n_modes, dim):
    j, k = mode_pair
    a = op_on(destroy(dim), j, n_modes, dim)
    b = op_on(destroy(dim), k, n_modes, dim)
    return r * (a.conj().T @ b.conj().T - a @ b)


def apply_generator(psi, gen):
    return expm_multiply(gen, psi)


def run_circuit(gates, n_modes, dim):
    """Evolve the vacuum through a gate list.

    Each gate is a tuple ``("sms", s, mode)``, ``("bs", theta, (j, k))`` or
    ``("tms", r, (j, k))``, applied left to right.
    """
    psi = vacuum_vector(n_modes, dim)
    for kind, param, where in gates:
        if kind == "sms":
            gen = generator_squeezer(param, where, n_modes, dim)
        elif kind == "bs":
            gen = generator_beamsplitter(param, where, n_modes, dim)
        elif kind == "tms":
            gen = generator_two_mode_squeezer(param, where, n_modes, dim)
        else:
            raise ValueError(f"unknown gate kind {kind!r}")
        psi = apply_generator(psi, gen)
    return psi


def mode_operators(n_modes, dim):
    """Dense ``(a_1..a_N, a_1^dag..a_N^dag)`` in register order."""
    lowering = [op_on(destroy(dim), k, n_modes, dim).toarray() for k in range(n_modes)]
    return lowering + [a.conj().T for a in lowering]


def moments_from_vector(psi, n_modes, dim):
    """First moments and symmetrized covariance in (a, a^dag) ordering."""
    ops = mode_operators(n_modes, dim)
    n2 = 2 * n_modes
    first = np.array([np.vdot(psi, op @ psi) for op in ops])
    sigma = np.zeros((n2, n2), dtype=complex)
    for i in range(n2):
        for j in range(n2):
            # adjoint of component j of the operator vector
            dag_j = ops[(j + n_modes) % n2]
            anti = ops[i] @ (dag_j @ psi)
            anti2 = dag_j @ (ops[i] @ psi)
            sigma[i, j] = np.vdot(psi, anti) + np.vdot(psi, anti2)
            sigma[i, j] -= 2.0 * first[i] * np.conj(first[j])
    return first, sigma


def moments_from_density(rho, n_modes, dim):
    ops = mode_operators(n_modes, dim)
    n2 = 2 * n_modes
    first = np.array([np.trace(rho @ op) for op in ops])
    sigma = np.zeros((n2, n2), dtype=complex)
    for i in range(n2):
        for j in range(n2):
            dag_j = ops[(j + n_modes) % n2]
            sigma[i, j] = np.trace(rho @ (ops[i] @ dag_j + dag_j @ ops[i]))
            sigma[i, j] -= 2.0 * first[i] * np.conj(first[j])
    return first, sigma


def reduce_to_modes_01(psi, dim):
    """Density matrix of the first two modes of a four-mode pure state."""
    t = psi.reshape(dim, dim, dim, dim)
    rho = np.einsum("abcd,efcd->abef", t, t.conj())
    return rho.reshape(dim * dim, dim * dim)


def thermal_density(nbar, dim):
    n = np.arange(dim)
    p = (nbar**n) / (1.0 + nbar) ** (n + 1)
    return np.diag(p / p.sum()).astype(complex)


def _psd_sqrt(rho):
    vals, vecs = np.linalg.eigh(rho)
    vals = np.clip(vals, 0.0, None)
    return (vecs * np.sqrt(vals)) @ vecs.conj().T


def fidelity(rho_a, rho_b):
    """Squared Uhlmann fidelity ``(Tr sqrt(sqrt(a) b sqrt(a)))**2``."""
    root = _psd_sqrt(rho_a)
    inner = root @ rho_b @ root
    vals = np.linalg.eigvalsh(inner)
    vals = np.clip(vals, 0.0, None)
    return float(np.sum(np.sqrt(vals)) ** 2)


def sld_qfi(rho, drho, support_tol=1e-12):
    """Fisher information from the symmetric logarithmic derivative.

    Uses the spectral formula ``H = sum 2 |<i|drho|j>|^2 / (p_i + p_j)``
    over eigenpairs with non-negligible combined population.
    """
    vals, vecs = np.linalg.eigh(rho)
    mat = vecs.conj().T @ drho @ vecs
    h = 0.0
    for i in range(len(vals)):
        for j in range(len(vals)):
            denom = vals[i] + vals[j]
            if denom > support_tol:
                h += 2.0 * abs(mat[i, j]) ** 2 / denom
    return float(h)
