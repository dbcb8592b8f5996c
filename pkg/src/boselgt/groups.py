"""Unitary group utilities: norms, orthonormal algebra bases, exp and log.

Matrices are plain complex ndarrays; nothing in this module wraps them.
Group elements of U(N) or SU(N) are validated with `assert_unitary`.
Lie algebra elements are real coefficient vectors over an orthonormal
Hermitian basis (trace inner product), held in `AlgebraElement`.

The matrix logarithm used everywhere is the principal spectral one: each
eigenvalue e^{i lam} gets lam in (-pi, pi], with the branch cut value -pi
mapped to +pi. For SU(N) inputs the principal angles can sum to +-2*pi
(e.g. three angles near 2*pi/3), so the logarithm is expressed over the
full U(N) basis, identity direction included; that keeps the coefficient
norm equal to the angle norm in all cases.
"""

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .errors import UsageError

GROUP_KINDS = ("U", "SU")

# Default tolerance for membership checks (max entrywise deviation).
UNITARY_TOL = 1e-10


def hs_norm(m):
    """Hilbert-Schmidt (Frobenius) norm sqrt(tr m^dag m)."""
    return float(np.linalg.norm(np.asarray(m)))


def op_norm(m):
    """Operator norm, the largest singular value of m."""
    return float(np.linalg.norm(np.asarray(m), ord=2))


def is_unitary(u, kind="U", tol=UNITARY_TOL):
    """True if u^dag u = 1 to tolerance; kind "SU" also requires det u = 1."""
    u = np.asarray(u)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        return False
    n = u.shape[0]
    dev = np.max(np.abs(u.conj().T @ u - np.eye(n)))
    if dev > tol:
        return False
    if kind == "SU":
        return abs(np.linalg.det(u) - 1.0) <= tol
    return True


def assert_unitary(u, kind="U", tol=UNITARY_TOL):
    """Raise ValueError if u is not in U(N) (or SU(N)) to tolerance."""
    u = np.asarray(u)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {u.shape}")
    n = u.shape[0]
    dev = float(np.max(np.abs(u.conj().T @ u - np.eye(n))))
    if dev > tol:
        raise ValueError(f"matrix is not unitary: max |u^dag u - 1| = {dev:.3e} > {tol:.1e}")
    if kind == "SU":
        det_dev = abs(np.linalg.det(u) - 1.0)
        if det_dev > tol:
            raise ValueError(f"matrix is not special: |det - 1| = {det_dev:.3e} > {tol:.1e}")
    return u


def project_unitary(m, kind="U"):
    """Re-orthonormalize m to the nearest unitary via polar decomposition.

    This is never applied implicitly; call it when accumulated round-off in
    long products needs cleaning.  For kind "SU" the determinant phase is
    removed evenly across the diagonal (global phase det^{-1/N}), which is
    the nearest special unitary in Frobenius distance.
    """
    m = np.asarray(m, dtype=complex)
    w, _, vh = np.linalg.svd(m)
    u = w @ vh
    if kind == "SU":
        n = m.shape[0]
        theta = np.angle(np.linalg.det(u))
        u = u * np.exp(-1j * theta / n)
    return u


def group_dim(kind, n):
    """Real dimension of the group: N^2 for U(N), N^2 - 1 for SU(N)."""
    if kind == "U":
        return n * n
    if kind == "SU":
        return n * n - 1
    raise UsageError(f"unknown group kind {kind!r}, expected one of {GROUP_KINDS}")


def make_basis(kind, n):
    """Orthonormal Hermitian basis of the Lie algebra, shape (dim, n, n).

    Generalized Gell-Mann construction, normalized to tr(t_a t_b) = delta_ab.
    Ordering: symmetric off-diagonal pairs (j<k lexicographic), then
    antisymmetric pairs, then the n-1 diagonal traceless matrices, and for
    kind "U" the identity/sqrt(n) appended last.  For SU(2) this gives the
    Pauli matrices over sqrt(2).
    """
    if kind not in GROUP_KINDS:
        raise UsageError(f"unknown group kind {kind!r}, expected one of {GROUP_KINDS}")
    if n < 1:
        raise UsageError(f"matrix size must be >= 1, got {n}")
    mats = []
    for j in range(n):
        for k in range(j + 1, n):
            s = np.zeros((n, n), dtype=complex)
            s[j, k] = s[k, j] = 1.0 / np.sqrt(2.0)
            mats.append(s)
    for j in range(n):
        for k in range(j + 1, n):
            a = np.zeros((n, n), dtype=complex)
            a[j, k] = -1j / np.sqrt(2.0)
            a[k, j] = 1j / np.sqrt(2.0)
            mats.append(a)
    for l in range(1, n):
        d = np.zeros((n, n), dtype=complex)
        d[np.arange(l), np.arange(l)] = 1.0
        d[l, l] = -l
        mats.append(d / np.sqrt(l * (l + 1)))
    if kind == "U":
        mats.append(np.eye(n, dtype=complex) / np.sqrt(n))
    return np.array(mats)


@dataclass(frozen=True)
class AlgebraElement:
    """Lie algebra element as real coefficients over make_basis(kind, n).

    norm_sq is the Euclidean norm of the coefficients, which equals
    tr(X^2) for the Hermitian matrix X the coefficients represent.
    """

    n: int
    kind: str
    coeffs: np.ndarray = field(repr=False)

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=float)
        expect = group_dim(self.kind, self.n)
        if c.shape != (expect,):
            raise ValueError(f"expected {expect} coefficients for {self.kind}({self.n}), got shape {c.shape}")
        object.__setattr__(self, "coeffs", c)

    @property
    def norm_sq(self):
        return float(self.coeffs @ self.coeffs)

    def matrix(self):
        """The Hermitian matrix sum_a x_a t_a."""
        basis = make_basis(self.kind, self.n)
        return np.tensordot(self.coeffs, basis, axes=(0, 0))


def exp_map(x):
    """Unitary e^{iX} for a Hermitian X (matrix or AlgebraElement).

    Computed by eigendecomposition so the result is unitary to round-off
    even for large coefficient norms.
    """
    if isinstance(x, AlgebraElement):
        x = x.matrix()
    x = np.asarray(x, dtype=complex)
    lam, v = np.linalg.eigh((x + x.conj().T) / 2.0)
    return (v * np.exp(1j * lam)) @ v.conj().T


def angular_eigenvalues(u, kind="U", tol=UNITARY_TOL):
    """Principal angles of the spectrum of u, sorted descending.

    Each eigenvalue e^{i lam} is mapped to lam in (-pi, pi]; an eigenvalue
    exactly at -1 gives +pi.  The Schur form is used instead of np.linalg.eig
    because for normal matrices it yields an orthonormal eigenbasis, which
    keeps the reconstruction in log_map_spectral stable under degeneracies.
    """
    u = assert_unitary(u, kind=kind, tol=tol)
    t, v = scipy.linalg.schur(np.asarray(u, dtype=complex), output="complex")
    lam = np.angle(np.diagonal(t))
    lam = np.where(lam <= -np.pi, np.pi, lam)  # branch cut convention
    # Stable sort: equal angles keep their Schur order, and the reconstructed
    # matrix V diag(lam) V^dag is invariant under mixing inside a degenerate
    # cluster, so the output does not depend on how ties are resolved.
    order = np.argsort(-lam, kind="stable")
    return lam[order], v[:, order]


def log_map_spectral(u, kind="U", tol=UNITARY_TOL):
    """Principal logarithm of a unitary: u = e^{iX}, returned over the U(N) basis.

    Returns (element, angles) where element is an AlgebraElement with kind
    "U" (see the module docstring for why SU inputs also use the full basis)
    and angles are the principal eigenvalue angles, descending.  The
    coefficient norm satisfies |x|^2 = |lam|^2 <= N pi^2.
    """
    lam, v = angular_eigenvalues(u, kind=kind, tol=tol)
    x = (v * lam) @ v.conj().T
    x = (x + x.conj().T) / 2.0  # remove the anti-Hermitian round-off part
    n = x.shape[0]
    basis = make_basis("U", n)
    coeffs = np.real(np.einsum("aij,ji->a", basis, x))
    return AlgebraElement(n=n, kind="U", coeffs=coeffs), lam
