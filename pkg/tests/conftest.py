import numpy as np
import pytest

ACCEPTANCE_RESULTS = []


def loop_partial_transpose(A, M, N):
    """Entry-by-entry reference: out[(i,j),(k,l)] = A[(i,l),(k,j)]."""
    out = np.empty_like(A)
    for i in range(M):
        for j in range(N):
            for k in range(M):
                for l in range(N):
                    out[i * N + j, k * N + l] = A[i * N + l, k * N + j]
    return out


def random_psd_toeplitz_blocks(rng, M, N, K, repeat_frac=0.0):
    """First block row of sum_k Z_k Z_k^H (x) L_k L_k^H with unit-modulus z_k."""
    z = np.exp(2j * np.pi * rng.random(K))
    n_rep = int(repeat_frac * K)
    if n_rep > 1:
        z[:n_rep] = z[0]
    L = rng.normal(size=(K, N)) + 1j * rng.normal(size=(K, N))
    return [
        sum(z[k] ** (-m) * np.outer(L[k], L[k].conj()) for k in range(K)) for m in range(M)
    ]


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def record():
    """Collect one pass/fail line per acceptance criterion."""

    def _record(name, ok, detail=""):
        ACCEPTANCE_RESULTS.append((name, bool(ok), detail))
        return ok

    return _record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in ACCEPTANCE_RESULTS:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}  {detail}")
