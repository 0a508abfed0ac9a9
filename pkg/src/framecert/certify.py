"""Phase retrievability certification.

The central quantity is the spectral injectivity margin

    a0 = min over unit xi of (second-smallest eigenvalue of r_matrix(rf, xi))

A frame in C^n is phase retrievable exactly when a0 > 0.  The margin is
estimated by multistart block descent (``estimate_a0``); because numerical
minimization can only ever over-estimate a minimum, the returned value is an
upper bound on the true margin and never by itself a certificate.

Verdict thresholds:

* a0 > TAU_PR (1e-6): Retrievable, after cross-validation of the magnitude
  separation inequality on random pairs
* a0 < TAU_NPR (1e-10) and a verified rank-deficiency witness: NotRetrievable
* anything else: Inconclusive

The deliberately wide gap between the two thresholds is the honesty band: a
margin of, say, 1e-8 is distinguishable from zero in double precision but
not robustly, so it stays Inconclusive rather than being forced either way.

For real frames the complement property gives an exact combinatorial route
(``complement_property``): every bipartition of the family must contain a
spanning side.

All operations are pure; randomized ones take an explicit seed and are
deterministic given it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import (
    RANK_RTOL,
    ComplexFrame,
    RealifiedFrame,
    r_matrix,
    rank_by_svd,
    realify,
    unrealify,
)
from .errors import AsymmetricInput, NotRealFrame, TooLarge, ZeroXi

__all__ = [
    "TAU_PR",
    "TAU_NPR",
    "KERNEL_ANGLE_TOL",
    "COMPLEMENT_MAX_M",
    "VERDICT_RETRIEVABLE",
    "VERDICT_NOT_RETRIEVABLE",
    "VERDICT_INCONCLUSIVE",
    "CertificationReport",
    "RankKernelResult",
    "ComplementResult",
    "CardinalityBounds",
    "eigenvalue_2n_minus_1",
    "estimate_a0",
    "rank_kernel_check",
    "magnitude_separation_check",
    "certify_complex",
    "certify_real",
    "complement_property",
    "hmw_lower_bound",
    "injectivity_sampling_oracle",
]

# Verdict thresholds on the estimated margin.
TAU_PR = 1e-6
TAU_NPR = 1e-10

# A one-dimensional kernel counts as the phase direction if it is within
# this angle (radians) of span{J xi}.
KERNEL_ANGLE_TOL = 1e-6

# Exhaustive bipartition checks are refused above this many vectors.
COMPLEMENT_MAX_M = 30

# Random pairs used to cross-validate a Retrievable verdict.
CROSS_CHECK_PAIRS = 100

# Counterexample acceptance for the sampling oracle: measurement match and
# minimum distance between rays.
ORACLE_MATCH_TOL = 1e-8
ORACLE_RAY_TOL = 1e-4

VERDICT_RETRIEVABLE = "Retrievable"
VERDICT_NOT_RETRIEVABLE = "NotRetrievable"
VERDICT_INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class CertificationReport:
    """Outcome of a certification run.

    ``method`` records which route produced the verdict: "cardinality"
    (too few vectors), "not-a-frame", "eigen" (spectral margin), or
    "complement" (real bipartition check).  ``witness_xi`` is the unit
    realified direction achieving the reported margin; ``kernel_excess`` is
    a direction at which the kernel of r_matrix was verified to have
    dimension >= 2, when one was found.  ``failing_partition`` is set only
    by the complement route.
    """

    verdict: str
    a0: Optional[float]
    witness_xi: Optional[np.ndarray]
    kernel_excess: Optional[np.ndarray]
    method: str
    starts: int
    tol: float
    seed: int
    failing_partition: Optional[tuple[int, ...]] = None

    def to_dict(self) -> dict:
        doc = {
            "verdict": self.verdict,
            "a0": self.a0,
            "witness_xi": None if self.witness_xi is None else [float(v) for v in self.witness_xi],
            "method": self.method,
            "starts": self.starts,
            "tol": self.tol,
            "seed": self.seed,
            "kernel_excess": None if self.kernel_excess is None else [float(v) for v in self.kernel_excess],
        }
        if self.method == "complement":
            doc["failing_partition"] = (
                None if self.failing_partition is None else list(self.failing_partition)
            )
        return doc


@dataclass(frozen=True)
class RankKernelResult:
    """Numerical rank of r_matrix at a direction, with a kernel basis and a
    flag telling whether the kernel is exactly the phase line span{J xi}."""

    rank: int
    kernel_dim: int
    kernel_basis: np.ndarray
    kernel_is_span_jxi: bool


@dataclass(frozen=True)
class ComplementResult:
    """Outcome of the exhaustive bipartition check.

    ``failing_partition`` is a 0/1 tuple of length m (1 marks the side
    containing the first vector) for the first failing bipartition in
    ascending mask order, or None when the property holds.
    """

    holds: bool
    failing_partition: Optional[tuple[int, ...]]


@dataclass(frozen=True)
class CardinalityBounds:
    """Cardinality landscape for phase retrieval in C^n: the parity-corrected
    topological lower bound, the trivial 2n bound, the conjectured critical
    count 4n-4, and the generic sufficient count 4n-2."""

    n: int
    hmw_lower: int
    two_n: int
    conjectured_critical: int
    generic_upper: int

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "hmw_lower": self.hmw_lower,
            "two_n": self.two_n,
            "conjectured_critical": self.conjectured_critical,
            "generic_upper": self.generic_upper,
        }


def eigenvalue_2n_minus_1(M: np.ndarray, asym_rtol: float = 1e-10) -> float:
    """Second-smallest eigenvalue of a symmetric 2n x 2n matrix, i.e. the
    (2n-1)-th largest of its 2n eigenvalues.

    Raises AsymmetricInput when ||M - M^T|| > asym_rtol * ||M||.
    """
    M = np.asarray(M, dtype=np.float64)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"M must be square, got shape {M.shape}")
    if M.shape[0] % 2 != 0 or M.shape[0] < 2:
        raise ValueError(f"M must be 2n x 2n with n >= 1, got shape {M.shape}")
    scale = np.linalg.norm(M)
    if np.linalg.norm(M - M.T) > asym_rtol * scale:
        raise AsymmetricInput("matrix is not symmetric within tolerance")
    w = np.linalg.eigvalsh((M + M.T) / 2.0)
    return float(w[1])


def _unit_rows(X: np.ndarray) -> np.ndarray:
    return X / np.linalg.norm(X, axis=1, keepdims=True)


def _block_min_eig(Phi: np.ndarray, J: np.ndarray, X: np.ndarray):
    """One block update of the alternating descent.

    For each row xi of X, form R = r_matrix at xi, deflate the phase
    direction J xi upward, and return the eigenvector of the smallest
    remaining eigenvalue together with that eigenvalue.  The eigenvector is
    the exact minimizer of w^T R w over unit w orthogonal to J xi, which is
    the second-smallest eigenvalue of R because J xi is always in the
    kernel.
    """
    prods = np.einsum("kij,sj->ski", Phi, X)
    R = np.einsum("ski,skl->sil", prods, prods)
    U = _unit_rows(X @ J.T)
    # trace + 1 strictly dominates the largest eigenvalue of a PSD matrix
    c = np.einsum("sii->s", R) + 1.0
    R_def = R + c[:, None, None] * U[:, :, None] * U[:, None, :]
    vals, vecs = np.linalg.eigh(R_def)
    return vecs[:, :, 0], vals[:, 0]


def estimate_a0(rf: RealifiedFrame, starts: int = 64, max_iter: int = 2000,
                tol: float = 1e-10, seed: int = 42) -> tuple[float, np.ndarray]:
    """Estimate the spectral injectivity margin a0 and return it with the
    unit direction achieving it.

    Multistart block descent: the margin is the minimum over unit pairs
    (xi, w) with w orthogonal to J xi of sum_k <Phi_k xi, w>^2, a smooth
    quartic that is symmetric in xi and w.  Each half step minimizes one
    block exactly through a constrained eigenvector computation and
    renormalizes, so the objective is nonincreasing; a start stops when its
    decrease per iteration falls below tol, its value reaches the floor of
    double precision, or max_iter is hit.  Start i draws its initial
    direction from a generator seeded with seed + i, so serial and parallel
    schedules agree and reruns are bit identical.

    The result is an upper bound on the true margin (a minimizer may have
    been missed), so a tiny value suggests, but never proves, that the
    frame is not retrievable; see rank_kernel_check for the verification
    step.
    """
    if starts < 1:
        raise ValueError(f"starts must be >= 1, got {starts}")
    if max_iter < 1:
        raise ValueError(f"max_iter must be >= 1, got {max_iter}")
    if tol <= 0:
        raise ValueError(f"tol must be positive, got {tol}")
    Phi, J = rf.Phi, rf.J
    two_n = rf.two_n
    X = np.empty((starts, two_n))
    for i in range(starts):
        rng = np.random.default_rng(seed + i)
        v = rng.standard_normal(two_n)
        while np.linalg.norm(v) == 0.0:
            v = rng.standard_normal(two_n)
        X[i] = v / np.linalg.norm(v)
    vals = np.full(starts, np.inf)
    active = np.arange(starts)
    for _ in range(max_iter):
        if active.size == 0:
            break
        Xa = X[active]
        Xa, _ = _block_min_eig(Phi, J, Xa)
        Xa, v = _block_min_eig(Phi, J, Xa)
        X[active] = Xa
        decrease = vals[active] - v
        vals[active] = v
        active = active[(decrease > tol) & (v > 1e-18)]
    # report the definitional quantity at each final direction
    prods = np.einsum("kij,sj->ski", Phi, X)
    R_all = np.einsum("ski,skl->sil", prods, prods)
    finals = np.linalg.eigvalsh(R_all)[:, 1]
    best = int(np.argmin(finals))
    a0 = float(max(finals[best], 0.0))
    witness = X[best] / np.linalg.norm(X[best])
    return a0, witness


def rank_kernel_check(rf: RealifiedFrame, xi: np.ndarray,
                      rank_rtol: float = RANK_RTOL,
                      angle_tol: float = KERNEL_ANGLE_TOL) -> RankKernelResult:
    """Numerical rank and kernel of r_matrix at the direction xi.

    An eigenvalue counts as zero when it is <= rank_rtol times the largest.
    ``kernel_is_span_jxi`` is True exactly when the kernel is one
    dimensional and within angle_tol radians of the phase line span{J xi}.
    A kernel of dimension >= 2 is the rank-deficiency witness used to back
    a NotRetrievable verdict.
    """
    xi = np.asarray(xi, dtype=np.float64).reshape(-1)
    if np.linalg.norm(xi) == 0.0:
        raise ZeroXi("direction xi must be nonzero")
    R = r_matrix(rf, xi)
    w, V = np.linalg.eigh(R)
    lam_max = max(float(w[-1]), 0.0)
    thresh = rank_rtol * lam_max
    zero = w <= thresh
    rank = int(np.count_nonzero(~zero))
    kernel = V[:, zero]
    kernel.setflags(write=False)
    is_phase_line = False
    if kernel.shape[1] == 1:
        jxi = rf.J @ xi
        cosang = abs(float(kernel[:, 0] @ jxi)) / np.linalg.norm(jxi)
        is_phase_line = float(np.arccos(min(cosang, 1.0))) <= angle_tol
    return RankKernelResult(
        rank=rank,
        kernel_dim=kernel.shape[1],
        kernel_basis=kernel,
        kernel_is_span_jxi=is_phase_line,
    )


def magnitude_separation_check(fr: ComplexFrame, a0: float, x: np.ndarray,
                               y: np.ndarray) -> bool:
    """Check the magnitude separation inequality at a pair (x, y):

        sum_k ( |<x, f_k>|^2 - |<y, f_k>|^2 )^2
            >= a0 * ( ||x - y||^2 ||x + y||^2 - 4 Im(<x, y>)^2 )

    with additive slack 1e-9 * (1 + right factor).  The right factor is the
    squared nuclear norm of the rank-two difference x x* - y y*, so it is
    nonnegative up to rounding and vanishes exactly when y is a unimodular
    multiple of x.  A phase retrievable frame satisfies the inequality for
    every pair with its true margin; a violation at the estimated margin
    means the estimate is too optimistic.
    """
    x = np.asarray(x, dtype=np.complex128).reshape(-1)
    y = np.asarray(y, dtype=np.complex128).reshape(-1)
    V = fr.vectors
    mx = np.abs(V.conj() @ x) ** 2
    my = np.abs(V.conj() @ y) ** 2
    left = float(np.sum((mx - my) ** 2))
    u = x - y
    v = x + y
    inner = complex(np.sum(x * y.conj()))
    factor = float(
        np.linalg.norm(u) ** 2 * np.linalg.norm(v) ** 2 - 4.0 * inner.imag ** 2
    )
    return left >= a0 * factor - 1e-9 * (1.0 + abs(factor))


def _random_complex(rng: np.random.Generator, n: int) -> np.ndarray:
    return (rng.standard_normal(n) + 1j * rng.standard_normal(n)) / np.sqrt(2.0)


def certify_complex(fr: ComplexFrame, starts: int = 64, max_iter: int = 2000,
                    tol: float = 1e-10, seed: int = 42,
                    cross_pairs: int = CROSS_CHECK_PAIRS) -> CertificationReport:
    """Full certification pipeline for a frame treated over C.

    Order of checks:

    1. For n >= 2, m < 2n can never be retrievable: verdict NotRetrievable,
       method "cardinality", no minimization.  (In one dimension a single
       nonzero vector already determines |x|, so the gate does not apply.)
    2. A family that does not span cannot be retrievable: method
       "not-a-frame".
    3. Estimate the margin.  Above TAU_PR the verdict is Retrievable after
       the separation inequality survives ``cross_pairs`` random pairs; a
       violation downgrades the margin to the worst empirical ratio and the
       verdict is re-decided.  Below TAU_NPR the verdict is NotRetrievable
       only when rank_kernel_check verifies a kernel of dimension >= 2 at
       the witness; a tiny margin alone is never enough.  Everything else
       is Inconclusive.
    """
    if fr.n >= 2 and fr.m < 2 * fr.n:
        return CertificationReport(
            verdict=VERDICT_NOT_RETRIEVABLE, a0=None, witness_xi=None,
            kernel_excess=None, method="cardinality", starts=starts,
            tol=tol, seed=seed,
        )
    if not fr.is_frame:
        return CertificationReport(
            verdict=VERDICT_NOT_RETRIEVABLE, a0=None, witness_xi=None,
            kernel_excess=None, method="not-a-frame", starts=starts,
            tol=tol, seed=seed,
        )
    rf = RealifiedFrame.from_frame(fr)
    a0, witness = estimate_a0(rf, starts=starts, max_iter=max_iter, tol=tol, seed=seed)
    kernel_info = rank_kernel_check(rf, witness)
    kernel_excess = witness if kernel_info.kernel_dim >= 2 else None

    if a0 > TAU_PR:
        rng = np.random.default_rng(seed)
        worst_ratio = np.inf
        violated = False
        for _ in range(cross_pairs):
            x = _random_complex(rng, fr.n)
            y = _random_complex(rng, fr.n)
            if not magnitude_separation_check(fr, a0, x, y):
                violated = True
            u, v = x - y, x + y
            inner = complex(np.sum(x * y.conj()))
            factor = float(
                np.linalg.norm(u) ** 2 * np.linalg.norm(v) ** 2
                - 4.0 * inner.imag ** 2
            )
            if factor > 1e-12:
                mags = (np.abs(fr.vectors.conj() @ x) ** 2
                        - np.abs(fr.vectors.conj() @ y) ** 2)
                worst_ratio = min(worst_ratio, float(np.sum(mags ** 2)) / factor)
        if violated and worst_ratio < a0:
            a0 = worst_ratio
        verdict = VERDICT_RETRIEVABLE if a0 > TAU_PR else VERDICT_INCONCLUSIVE
    elif a0 < TAU_NPR and kernel_excess is not None:
        verdict = VERDICT_NOT_RETRIEVABLE
    else:
        verdict = VERDICT_INCONCLUSIVE

    return CertificationReport(
        verdict=verdict, a0=a0, witness_xi=witness, kernel_excess=kernel_excess,
        method="eigen", starts=starts, tol=tol, seed=seed,
    )


def certify_real(fr: ComplexFrame, starts: int = 64, tol: float = 1e-10,
                 seed: int = 42) -> CertificationReport:
    """Certification of a real frame through the complement property.

    The check is exact and combinatorial, so the report carries no margin
    and no spectral witness; starts, tol and seed are recorded solely to
    keep report provenance uniform.
    """
    result = complement_property(fr)
    verdict = VERDICT_RETRIEVABLE if result.holds else VERDICT_NOT_RETRIEVABLE
    return CertificationReport(
        verdict=verdict, a0=None, witness_xi=None, kernel_excess=None,
        method="complement", starts=starts, tol=tol, seed=seed,
        failing_partition=result.failing_partition,
    )


def complement_property(fr: ComplexFrame) -> ComplementResult:
    """Exhaustive complement-property check for a real frame.

    The property: for every bipartition of the family, at least one side
    spans R^n.  It characterizes injectivity of the magnitude measurement
    map for real frames.  Bipartitions are enumerated as masks 0 ..
    2^(m-1) - 1 with the first vector pinned to side one (bit i of the mask
    puts vector i+1 on side one), ascending, and the scan short-circuits at
    the first failure.

    Raises NotRealFrame when any entry has a nonzero imaginary part and
    TooLarge when m exceeds COMPLEMENT_MAX_M.
    """
    if np.any(fr.vectors.imag != 0.0):
        raise NotRealFrame("complement property is defined for real frames only")
    if fr.m > COMPLEMENT_MAX_M:
        raise TooLarge(
            f"exhaustive bipartition check caps at m={COMPLEMENT_MAX_M}, got m={fr.m}"
        )
    V = fr.vectors.real
    m, n = fr.m, fr.n
    for mask in range(2 ** (m - 1)):
        side_one = np.zeros(m, dtype=bool)
        side_one[0] = True
        for i in range(m - 1):
            if mask >> i & 1:
                side_one[i + 1] = True
        if rank_by_svd(V[side_one]) == n:
            continue
        if rank_by_svd(V[~side_one]) == n:
            continue
        return ComplementResult(
            holds=False,
            failing_partition=tuple(int(b) for b in side_one),
        )
    return ComplementResult(holds=True, failing_partition=None)


def hmw_lower_bound(n: int) -> CardinalityBounds:
    """Cardinality bounds for phase retrieval in C^n.

    The lower bound is 4n - 2 - 2b plus a parity correction, where b is the
    number of ones in the binary expansion of n - 1: add 2 when n is odd
    and b = 3 mod 4, add 1 when n is odd and b = 2 mod 4, else add 0.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    b = (n - 1).bit_count()
    correction = 0
    if n % 2 == 1 and b % 4 == 3:
        correction = 2
    elif n % 2 == 1 and b % 4 == 2:
        correction = 1
    return CardinalityBounds(
        n=n,
        hmw_lower=4 * n - 2 - 2 * b + correction,
        two_n=2 * n,
        conjectured_critical=4 * n - 4,
        generic_upper=4 * n - 2,
    )


def _ray_distance(x: np.ndarray, y: np.ndarray) -> float:
    """min over unimodular c of ||x - c y||."""
    gap = (np.linalg.norm(x) ** 2 + np.linalg.norm(y) ** 2
           - 2.0 * abs(complex(np.sum(x * y.conj()))))
    return float(np.sqrt(max(gap, 0.0)))


def _plain_magnitudes(vectors, x) -> list[float]:
    """Squared magnitudes computed entry by entry in scalar arithmetic,
    independent of the vectorized path."""
    out = []
    for row in vectors:
        acc = 0j
        for xj, fj in zip(x, row):
            acc += complex(xj) * complex(fj).conjugate()
        out.append(abs(acc) ** 2)
    return out


def injectivity_sampling_oracle(fr: ComplexFrame, trials: int = 1000,
                                seed: int = 42) -> Optional[tuple[np.ndarray, np.ndarray]]:
    """Search for a concrete injectivity counterexample by sampling.

    Each trial samples a target x, then descends from a random start on the
    smooth objective sum_k (|<x, f_k>|^2 - |<y, f_k>|^2)^2 over y.  A pair
    counts as a counterexample when the squared measurements agree within
    ORACLE_MATCH_TOL while the rays stay ORACLE_RAY_TOL apart; both
    conditions are re-verified in plain scalar arithmetic before the pair
    is returned.  Returns None when no trial produces one.

    Finding nothing is evidence, not proof, of injectivity; a returned pair
    is a certified non-injectivity witness.
    """
    from scipy.optimize import minimize

    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    rng = np.random.default_rng(seed)
    rf = RealifiedFrame.from_frame(fr)
    Phi = rf.Phi
    n = fr.n
    for _ in range(trials):
        x = _random_complex(rng, n)
        targets = np.abs(fr.vectors.conj() @ x) ** 2

        def objective(eta: np.ndarray) -> float:
            prods = Phi @ eta
            quad = np.einsum("ki,i->k", prods, eta)
            diff = quad - targets
            return float(diff @ diff)

        def gradient(eta: np.ndarray) -> np.ndarray:
            prods = Phi @ eta
            quad = np.einsum("ki,i->k", prods, eta)
            return 4.0 * ((quad - targets) @ prods)

        eta0 = rng.standard_normal(2 * n)
        res = minimize(objective, eta0, jac=gradient, method="L-BFGS-B",
                       options={"maxiter": 200, "ftol": 1e-18, "gtol": 1e-14})
        y = unrealify(res.x)
        measured = np.abs(fr.vectors.conj() @ y) ** 2
        if np.linalg.norm(targets - measured) > ORACLE_MATCH_TOL:
            continue
        if _ray_distance(x, y) < ORACLE_RAY_TOL:
            continue
        # plain-arithmetic re-verification before certifying the pair
        px = _plain_magnitudes(fr.vectors.tolist(), x.tolist())
        py = _plain_magnitudes(fr.vectors.tolist(), y.tolist())
        match = sum((a - b) ** 2 for a, b in zip(px, py)) ** 0.5
        inner = sum(complex(a) * complex(b).conjugate()
                    for a, b in zip(x.tolist(), y.tolist()))
        nx = sum(abs(complex(a)) ** 2 for a in x.tolist())
        ny = sum(abs(complex(b)) ** 2 for b in y.tolist())
        apart = max(nx + ny - 2.0 * abs(inner), 0.0) ** 0.5
        if match <= ORACLE_MATCH_TOL and apart >= ORACLE_RAY_TOL:
            return x, y
    return None
