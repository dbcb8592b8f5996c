"""Partition values: exact Bose determinants, gauge Monte Carlo, one-bond
integrals, and the transfer-kernel (chain) constructions.

All Gaussian integrals use the measure with a factor (2 pi)^{-1/2} per real
field component, so a decoupled site integrates to exactly 1 and the Bose
partition value is det(Q)^{-1/2} per real flavor, with Q the quadratic form
of the action.  Complex fields are handled through the standard embedding
of C^N into R^{2N}: a unitary g becomes the orthogonal 2N x 2N block matrix
[[Re g, -Im g], [Im g, Re g]], the determinant of the real form is the
square of the Hermitian one, and a complex flavor contributes det^{-1}.

Values that can leave the double range are carried as logarithms; Estimate
keeps both, with log_value authoritative.
"""

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from . import mc
from .errors import NotPositiveDefiniteError, NumericError, UsageError
from .haar import haar_sample, peaked_cue_integral, weyl_integrate
from .lattice import GaugeFixing, Lattice
from .su2 import su2_haar, su2_to_matrix

# Couplings up to this value integrate fine on the periodic grid; beyond it
# the peak needs the rescaled Gauss-Legendre route.
PERIODIC_GRID_MAX_COUPLING = 4.0

METHODS = ("exact-determinant", "quadrature", "monte-carlo")


@dataclass(frozen=True)
class Estimate:
    """A partition value (or similar scalar) with provenance.

    log_value is always finite and authoritative; value is exp(log_value)
    when that fits in a double and 0.0 / inf otherwise.  std_error is the
    standard error of value (0 for deterministic methods).  For Monte Carlo
    estimates n_samples and seed identify the run.
    """

    log_value: float
    std_error: float
    method: str
    n_samples: int = 0
    seed: int | None = None

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"method must be one of {METHODS}, got {self.method!r}")
        if self.std_error < 0.0:
            raise ValueError(f"std_error must be >= 0, got {self.std_error}")

    @property
    def value(self):
        if self.log_value > 709.0:
            return np.inf
        if self.log_value < -745.0:
            return 0.0
        return float(np.exp(self.log_value))

    @property
    def rel_error(self):
        """Standard error relative to the value (meaningful for MC)."""
        v = self.value
        return self.std_error / v if v not in (0.0, np.inf) else np.nan

    @classmethod
    def exact(cls, log_value, method="exact-determinant"):
        return cls(log_value=float(log_value), std_error=0.0, method=method)

    @classmethod
    def from_moments(cls, moments, seed):
        m = moments
        if m.mean <= 0.0:
            raise NotPositiveDefiniteError(
                "Monte Carlo mean of a positive quantity came out nonpositive",
                m.mean)
        return cls(log_value=float(np.log(m.mean)), std_error=m.std_error,
                   method="monte-carlo", n_samples=m.n, seed=seed)


# ----------------------------------------------------------- Bose sector

def _real_coupling_block(g, field_kind):
    """Per-bond hopping block: Re g for real fields, the R^{2N} embedding else."""
    if field_kind == "real":
        return np.real(g)
    re, im = np.real(g), np.imag(g)
    return np.block([[re, -im], [im, re]])


def bose_quadratic_form(params, config):
    """Real symmetric Q with S_Bose = phi^T Q phi / 2 (site-major blocks).

    Shape (M, M) with M = n_sites * N for real fields and 2 N otherwise.
    Diagonal blocks are the identity; each bond contributes -kappa^2 times
    its coupling block and the transpose on the mirrored position.
    """
    lat = params.lattice
    width = params.n if params.field_kind == "real" else 2 * params.n
    m = lat.n_sites * width
    q = np.eye(m)
    kappa_sq = params.scaling.kappa_sq
    for b in range(lat.n_bonds):
        blk = kappa_sq * _real_coupling_block(config.bonds[b], params.field_kind)
        i = lat.bond_tail[b] * width
        j = lat.bond_head[b] * width
        q[i:i + width, j:j + width] -= blk
        q[j:j + width, i:i + width] -= blk.T
    return q


def logdet_posdef(q, context="quadratic form"):
    """log det of a symmetric positive definite matrix via Cholesky.

    The Gershgorin bound says eigenvalues are at least 1 - 2 d kappa^2 times
    the largest coupling row sum, so well inside the hopping range the
    factorization cannot fail; if it does (e.g. at the massless edge with
    round-off), an LDL^T pass names the smallest pivot in the error.
    """
    try:
        chol = np.linalg.cholesky(q)
    except np.linalg.LinAlgError:
        # Bunch-Kaufman D may hold 2x2 blocks whose raw diagonal hides the
        # negative direction, so diagnose with its eigenvalues instead.
        _, d, _ = scipy.linalg.ldl(q)
        raise NotPositiveDefiniteError(
            f"{context} is not positive definite",
            float(np.min(np.linalg.eigvalsh(d)))) from None
    return 2.0 * float(np.sum(np.log(np.diagonal(chol))))


def z_bose_exact(params, config):
    """Exact scaled Bose partition value det(Q)^{-n_flavors/2} as an Estimate.

    For complex fields Q is the real embedding, giving det^{-n_flavors}
    of the Hermitian form automatically.
    """
    q = bose_quadratic_form(params, config)
    logdet = logdet_posdef(q, context="Bose quadratic form")
    return Estimate.exact(-0.5 * params.n_flavors * logdet)


def z_bose_exact_unscaled(params, config):
    """Unscaled Bose value; equals s_B^{-N n_f Lambda_s} (x2 complex) times scaled."""
    q = bose_quadratic_form(params, config)
    s = params.scaling
    # Q_u = s_B^2 Q exactly, so log det shifts by (matrix size) * log s_B^2.
    logdet = logdet_posdef(s.bose_scale**2 * q, context="unscaled Bose form")
    return Estimate.exact(-0.5 * params.n_flavors * logdet)


# ---------------------------------------------------------- gauge sector

def _sample_bonds(rng, n_bonds, n, kind, count):
    """count configurations of Haar bond matrices, shape (count, n_bonds, n, n)."""
    if kind == "SU" and n == 2:
        return su2_to_matrix(su2_haar(rng, (count, n_bonds)))
    return haar_sample(rng, n, kind=kind, size=(count, n_bonds))


def z_wilson_mc(params, n_samples, seed, n_workers=1, gauge_fixed=False,
                block_size=mc.DEFAULT_BLOCK_SIZE):
    """Monte Carlo mean of e^{-S_w} over Haar bond configurations.

    With gauge_fixed=True only the bonds outside the enhanced temporal tree
    are sampled (tree bonds stay at the identity), which leaves the value
    unchanged by gauge invariance and cuts the sampled volume; the variance
    is comparable either way.  Warns when the relative standard error
    exceeds 10%.
    """
    lat = params.lattice
    if gauge_fixed:
        fixing = GaugeFixing.enhanced_temporal(lat)
        active = fixing.retained_bonds
    else:
        active = np.arange(lat.n_bonds)
    coupling = params.scaling.coupling
    plaq = lat.plaq_bonds
    n = params.n

    def block(rng, count):
        bonds = np.broadcast_to(
            np.eye(n, dtype=complex), (count, lat.n_bonds, n, n)).copy()
        bonds[:, active] = _sample_bonds(rng, len(active), n, params.kind, count)
        g1 = bonds[:, plaq[:, 0]]
        g2 = bonds[:, plaq[:, 1]]
        g3 = bonds[:, plaq[:, 2]]
        g4 = bonds[:, plaq[:, 3]]
        dag = lambda m: np.conj(np.swapaxes(m, -1, -2))
        hol = g1 @ g2 @ dag(g3) @ dag(g4)
        tr = np.trace(hol, axis1=-2, axis2=-1)
        action = coupling * np.sum(2.0 * (n - np.real(tr)), axis=-1)
        return np.exp(-action)

    moments = mc.sample_mean(block, n_samples, seed,
                             n_workers=n_workers, block_size=block_size)
    est = Estimate.from_moments(moments, seed)
    if est.std_error > 0.1 * moments.mean:
        warnings.warn(
            f"gauge Monte Carlo relative error {est.std_error / moments.mean:.1%} "
            "exceeds 10%; increase n_samples", stacklevel=2)
    return est


# -------------------------------------------------------- one-bond values

def z_single_bond(c, n=1, kind="U", rtol=1e-9):
    """One-bond gauge partition value at coupling c = a^{d-4} / g^2.

    The Haar average of e^{-c |1 - g|_HS^2} written over eigenvalue angles.
    U(N) up to N = 3 and SU(2) are supported; mild couplings use the
    periodic grid, peaked ones the rescaled Gauss-Legendre route.
    """
    if c <= 0.0:
        raise UsageError(f"coupling must be positive, got {c}")
    if kind == "SU" and n != 2:
        raise UsageError("one-bond values for SU(N) are implemented for N = 2 only")
    # The angle action 2c sum(1 - cos lam) is evaluated as 4c sum sin^2(lam/2):
    # same number, but free of the 1 - cos cancellation that otherwise floods
    # the convergence check with round-off noise once c is large and the
    # relevant angles shrink like 1/sqrt(c).
    def action(lam):
        half = np.sin(lam / 2.0)
        return 4.0 * c * np.sum(half * half, axis=-1)

    if kind == "SU":
        # Angles (lam, -lam) with density 4 sin^2(lam); the generic weyl
        # route covers mild c, a dedicated radial integral the peaked range.
        if c <= PERIODIC_GRID_MAX_COUPLING:
            return weyl_integrate(
                lambda lam: np.exp(-action(lam)), n, kind="SU",
                rtol=max(rtol, 1e-10))
        from .su2 import su2_z_weyl_coupling
        return su2_z_weyl_coupling(c)
    if c <= PERIODIC_GRID_MAX_COUPLING:
        return weyl_integrate(
            lambda lam: np.exp(-action(lam)), n, kind="U",
            rtol=max(rtol, 1e-10))
    return peaked_cue_integral(action, n, peak_scale=c, rtol=rtol)


def z_wilson_d2_exact(params):
    """For d = 2 the gauge partition value factorizes over retained bonds.

    Column-by-column Haar integration removes one bond per plaquette, so
    Z_w equals z_single_bond^{(L-1)^2} exactly; returned in log form.
    """
    if params.d != 2:
        raise UsageError(f"exact factorization requires d = 2, got {params.d}")
    z = z_single_bond(params.scaling.coupling, params.n, params.kind)
    n_ret = GaugeFixing.enhanced_temporal(params.lattice).n_retained
    return Estimate.exact(n_ret * float(np.log(z)), method="quadrature")


# ----------------------------------------------------- chain and kernels

def chain_partition(length, n, d, gauge_list=None, kappa_sq=None):
    """Gaussian chain value det(1 - d kappa^2 A)^{-1/2} on an open line.

    A is the symmetrized adjacency with one orthogonal block per link (the
    identity when gauge_list is None).  The value does not depend on the
    gauge blocks at all, which is asserted cheaply via the similarity
    transform structure in the tests.  kappa_sq defaults to the massless
    hopping 1/(2d); the closed form for length 2, N = 1 is
    (1 - d^2 kappa^4)^{-1/2}.
    """
    if length < 2:
        raise UsageError(f"chain length must be >= 2, got {length}")
    if kappa_sq is None:
        kappa_sq = 1.0 / (2.0 * d)
    blocks = gauge_list
    if blocks is None:
        blocks = [np.eye(n)] * (length - 1)
    if len(blocks) != length - 1:
        raise ValueError(f"need {length - 1} gauge blocks, got {len(blocks)}")
    m = length * n
    q = np.eye(m)
    for i, g in enumerate(blocks):
        g = np.asarray(g, dtype=float)
        if g.shape != (n, n):
            raise ValueError(f"gauge blocks must be {n} x {n}, got {g.shape}")
        q[i * n:(i + 1) * n, (i + 1) * n:(i + 2) * n] -= d * kappa_sq * g
        q[(i + 1) * n:(i + 2) * n, i * n:(i + 1) * n] -= d * kappa_sq * g.T
    logdet = logdet_posdef(q, context="chain quadratic form")
    return float(np.exp(-0.5 * logdet))


def transfer_kernel_matrix(d_kappa_sq=0.5, g=1.0, n_points=512, x_max=8.0):
    """Symmetrized discretization of the one-bond transfer kernel (N = 1 real).

    T(x, y) = e^{-x^2/4} e^{d kappa^2 x g y} e^{-y^2/4} on [-x_max, x_max],
    midpoint grid, scaled by the cell width so singular values approximate
    the L2(R) operator norm.  At d kappa^2 = 1/2 and g = 1 the kernel is
    e^{-(x-y)^2/4} whose exact norm is sqrt(4 pi).
    """
    step = 2.0 * x_max / n_points
    x = -x_max + step * (np.arange(n_points) + 0.5)
    kernel = np.exp(-x[:, None] ** 2 / 4.0
                    + d_kappa_sq * g * x[:, None] * x[None, :]
                    - x[None, :] ** 2 / 4.0)
    return step * kernel


def transfer_kernel_norm(d_kappa_sq=0.5, g=1.0, n_points=512, x_max=8.0):
    """Largest singular value of the discretized one-bond kernel."""
    k = transfer_kernel_matrix(d_kappa_sq, g, n_points, x_max)
    return float(np.linalg.norm(k, ord=2))


def complex_embedding_blocks(g):
    """(M, L) for a unitary g: M = [[g, ig], [-ig, g]] and L = M + conj(M).

    L is real and equals twice the real embedding [[Re g, -Im g], [Im g,
    Re g]], which is orthogonal, so L^T L = 4 * identity; the tests assert
    this numerically for random unitaries.
    """
    g = np.asarray(g, dtype=complex)
    m = np.block([[g, 1j * g], [-1j * g, g]])
    l = m + np.conj(m)
    return m, np.real(l)


def transfer_kernel_norm_complex(d_kappa_sq=0.5, theta=0.3, n_points=96,
                                 x_max=9.0, rtol=1e-10, max_iter=500):
    """Norm of the complex-field kernel for U(1), discretized on R^2.

    The field has two real components; the coupling rotates by theta.  The
    exact norm at d kappa^2 = 1/2 is 4 pi (the square of the real case).

    The grid operator is n_points^2 square, far too large to materialize, but
    the kernel factors into four one-axis coupling matrices

        K(x, y) = f(x1) f(x2) prod_{ij} exp(t R_ij x_i y_j) f(y1) f(y2),

    so one matvec is two tensor contractions of O(n_points^3) memory.  The
    top singular value comes from power iteration on K^T K (K itself is not
    symmetric for theta != 0), stopped at relative change rtol.
    """
    step = 2.0 * x_max / n_points
    x = -x_max + step * (np.arange(n_points) + 0.5)
    rot = np.array([[np.cos(theta), -np.sin(theta)],
                    [np.sin(theta), np.cos(theta)]])
    t = d_kappa_sq
    e = {(i, j): np.exp(t * rot[i, j] * np.outer(x, x)) for i in (0, 1)
         for j in (0, 1)}
    f = np.exp(-x * x / 4.0)

    def apply_kernel(v, transpose):
        # v indexed (y1, y2); contract y2 first, then y1; transpose swaps
        # the roles of R and R^T, i.e. mirrors the (i, j) indices.
        def blk(i, j):
            return e[(j, i)] if transpose else e[(i, j)]
        u = (f[:, None] * f[None, :]) * v
        w = np.einsum("ad,bd,cd->abc", blk(0, 1), blk(1, 1), u, optimize=True)
        out = np.einsum("ac,bc,abc->ab", blk(0, 0), blk(1, 0), w, optimize=True)
        return (f[:, None] * f[None, :]) * out * step**2

    # Deterministic positive start; the top eigenfunction has no nodes.
    v = np.exp(-(x[:, None] ** 2 + x[None, :] ** 2) / 8.0)
    v /= np.linalg.norm(v)
    sigma_sq_prev = 0.0
    for _ in range(max_iter):
        w = apply_kernel(apply_kernel(v, False), True)
        sigma_sq = float(np.linalg.norm(w))
        v = w / sigma_sq
        if abs(sigma_sq - sigma_sq_prev) <= rtol * sigma_sq:
            return float(np.sqrt(sigma_sq))
        sigma_sq_prev = sigma_sq
    raise NumericError("power iteration for the complex kernel norm "
                       f"did not converge in {max_iter} steps")
