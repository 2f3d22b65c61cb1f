"""Brute-force reference implementations, independent of the library's code
paths: everything here works on raw numpy arrays via explicit dense matrix
arithmetic (chained projector products, Taylor-series exponentials)."""

import numpy as np


def taylor_expm(matrix: np.ndarray) -> np.ndarray:
    """Matrix exponential by scaled Taylor series with repeated squaring."""
    m = np.asarray(matrix, dtype=complex)
    norm = np.linalg.norm(m, 1)
    squarings = max(0, int(np.ceil(np.log2(norm))) + 1) if norm > 0 else 0
    scaled = m / (2**squarings)
    d = m.shape[0]
    term = np.eye(d, dtype=complex)
    total = np.eye(d, dtype=complex)
    for k in range(1, 60):
        term = term @ scaled / k
        total = total + term
        if np.abs(term).max() < 1e-20:
            break
    for _ in range(squarings):
        total = total @ total
    return total


def rank1_projector(column: np.ndarray) -> np.ndarray:
    v = np.asarray(column, dtype=complex).reshape(-1, 1)
    return v @ v.conj().T


def chained_probability(psi: np.ndarray, *projectors: np.ndarray) -> float:
    """``|| P_n ... P_1 psi ||^2`` by explicit matrix products."""
    vec = np.asarray(psi, dtype=complex)
    for proj in projectors:
        vec = np.asarray(proj, dtype=complex) @ vec
    return float(np.real(np.vdot(vec, vec)))


def sequential_table(psi, first_projs, second_projs) -> np.ndarray:
    """Joint probabilities p(a, b) = ||P_b P_a psi||^2 for all ordered pairs."""
    return np.array(
        [
            [chained_probability(psi, pa, pb) for pb in second_projs]
            for pa in first_projs
        ]
    )


def interference(psi, target_proj, partition_projs) -> tuple[float, float, float]:
    """(direct, classical sum, difference) via chained projector products:
    the classical branch weight p(B_k) p(A|B_k) collapses to ||T P_k psi||^2."""
    direct = chained_probability(psi, target_proj)
    classical = sum(chained_probability(psi, pk, target_proj) for pk in partition_projs)
    return direct, classical, direct - classical


def expectation(psi, operator) -> float:
    vec = np.asarray(psi, dtype=complex)
    return float(np.real(np.vdot(vec, np.asarray(operator, dtype=complex) @ vec)))


def uncertainty_sides(psi, op_a, op_b) -> tuple[float, float]:
    """(dA*dB, 0.5|<[A,B]>|) via dense expectation values."""
    a = np.asarray(op_a, dtype=complex)
    b = np.asarray(op_b, dtype=complex)

    def spread(op):
        return np.sqrt(max(expectation(psi, op @ op) - expectation(psi, op) ** 2, 0.0))

    vec = np.asarray(psi, dtype=complex)
    comm_mean = np.vdot(vec, (a @ b - b @ a) @ vec)
    return spread(a) * spread(b), 0.5 * abs(complex(comm_mean))


# ---------------------------------------------------------------------------
# Random instance generation (seeded by callers)


def random_state_array(rng: np.random.Generator, dim: int) -> np.ndarray:
    vec = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return vec / np.linalg.norm(vec)


def random_unitary(rng: np.random.Generator, dim: int) -> np.ndarray:
    gauss = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(gauss)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_hermitian(rng: np.random.Generator, dim: int) -> np.ndarray:
    gauss = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return (gauss + gauss.conj().T) / 2.0
