"""Spin-1/2 chain models: exact thermal correlators and critical couplings.

Three periodic chains (sigma are Pauli matrices, site L+1 = site 1):

  xxz        H = sum_j (sx_j sx_j+1 + sy_j sy_j+1 + Delta sz_j sz_j+1)
  xxz_field  H = xxz  -  (h/2) sum_j sz_j
  xy         H = -(lam/4) sum_j [(1+gamma) sx_j sx_j+1 + (1-gamma) sy_j sy_j+1]
                 - (1/2) sum_j sz_j

Finite chains are diagonalized exactly; the canonical ensemble
rho = exp(-H/kT)/Z then yields the one-site magnetization z = <sz> and the
nearest-neighbour correlators xx, yy, zz that parameterize the pair X state.
Diagonalization can run dense or per symmetry sector (total magnetization for
the xxz families, global spin-flip parity for xy); both routes agree to
rounding because the thermal trace is block diagonal either way.

The xy family also has a closed thermodynamic-limit solution via free
fermions, used both as an oracle for the finite-L pipeline and as the L = inf
sweep backend.  Critical couplings for the field-carrying xxz chain:

  Delta_1 = h/4 - 1                      (saturation line, coupling J = 1)
  h(Delta_2) = 4 sinh(eta) sum_j (-1)^j / cosh(j eta),   eta = arccosh(Delta_2)

the latter inverted numerically for Delta_2(h).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.integrate
import scipy.linalg
import scipy.sparse

from .xstate import Correlators

FAMILIES = ("xxz", "xxz_field", "xy")

DEFAULT_L_MAX = 12

# Degeneracy window for the kT = 0 ground-space average, relative to
# max(1, |E0|).
GROUND_STATE_WINDOW = 1e-10


@dataclass(frozen=True)
class ModelSpec:
    """A chain family with its couplings, length, and temperature.

    ``L = None`` selects the thermodynamic limit, available only for the xy
    family (free-fermion solution).  Finite ``L`` must be even, between 4 and
    ``l_max``: odd rings frustrate the antiferromagnet and a 2-site ring
    double-counts its single bond.
    """

    family: str
    L: int | None
    kT: float
    delta: float = 0.0  # xxz anisotropy
    h: float = 0.0  # xxz_field longitudinal field
    lam: float = 0.0  # xy coupling strength
    gamma: float = 1.0  # xy anisotropy in [0, 1]
    l_max: int = DEFAULT_L_MAX

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"family must be one of {FAMILIES}, got {self.family!r}")
        if not (self.kT >= 0.0):
            raise ValueError(f"kT must be >= 0, got {self.kT}")
        if self.L is None:
            if self.family != "xy":
                raise ValueError("L = None (thermodynamic limit) requires family 'xy'")
        else:
            if self.L % 2 != 0 or not (4 <= self.L <= self.l_max):
                raise ValueError(
                    f"L must be even with 4 <= L <= {self.l_max}, got {self.L}"
                )


def xxz_delta1(h: float, j: float = 1.0) -> float:
    """Saturation-line critical anisotropy: h = 4 j (1 + Delta_1)."""
    if j == 0.0:
        raise ValueError("coupling j must be nonzero")
    return h / (4.0 * j) - 1.0


def _sech(x: float) -> float:
    """Overflow-safe 1/cosh."""
    ax = abs(x)
    if ax > 700.0:
        # 2 e^-ax to double precision; the correction term underflows.
        return 2.0 * math.exp(-ax) if ax < 745.0 else 0.0
    return 1.0 / math.cosh(ax)

_POISSON_SWITCH = 1.0


def _alternating_sech_sum(eta: float) -> float:
    """S(eta) = sum_{j=-inf}^{inf} (-1)^j / cosh(j eta), for eta > 0.

    For eta >= 1 the alternating series converges quickly and is summed
    directly, truncating once a term drops below 1e-15.  For small eta the
    direct series suffers catastrophic cancellation (S is exponentially
    small), so the Poisson-resummed form

        S(eta) = (2 pi / eta) sum_{m>=0} sech((2m+1) pi^2 / (2 eta))

    is used instead; its terms fall so fast that a relative cutoff of 1e-15
    needs only a couple of them.
    """
    if eta >= _POISSON_SWITCH:
        total = 1.0
        j = 1
        while True:
            term = 2.0 * _sech(j * eta)
            if term < 1e-15:
                break
            total += term if j % 2 == 0 else -term
            j += 1
        return total
    total = 0.0
    m = 0
    while True:
        term = (2.0 * math.pi / eta) * _sech((2 * m + 1) * math.pi**2 / (2.0 * eta))
        total += term
        if term < 1e-15 * total or term == 0.0:
            break
        m += 1
    return total


def _field_of_eta(eta: float) -> float:
    """The critical field h(eta) = 4 sinh(eta) S(eta) on Delta = cosh(eta) > 1."""
    return 4.0 * math.sinh(eta) * _alternating_sech_sum(eta)


def xxz_delta2(h: float) -> float:
    """Invert h(Delta_2) for the upper critical anisotropy, h > 0.

    Bisection on eta = arccosh(Delta_2) to |h(eta) - h| < 1e-10.  Because
    h(eta) is exponentially flat near eta = 0, that residual alone would
    accept a wide range of eta for small h, so the bracket must also have
    collapsed below 1e-10 before the residual test can stop the search; for
    extreme h where an absolute 1e-10 is finer than double spacing, the
    bracket criterion alone terminates.  Raises ValueError if h does not
    bracket.
    """
    if not (h > 0.0) or not math.isfinite(h):
        raise ValueError(f"h must be positive and finite, got {h}")
    lo, hi = 1e-8, 60.0
    f_lo, f_hi = _field_of_eta(lo) - h, _field_of_eta(hi) - h
    if not (f_lo < 0.0 < f_hi):
        raise ValueError(f"h = {h} not bracketed by eta in [{lo}, {hi}]")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        f_mid = _field_of_eta(mid) - h
        width = hi - lo
        if (abs(f_mid) < 1e-10 and width < 1e-10) or width < 1e-16 * max(1.0, mid):
            return math.cosh(mid)
        if f_mid < 0.0:
            lo = mid
        else:
            hi = mid
    return math.cosh(0.5 * (lo + hi))


# ---------------------------------------------------------------------------
# Exact diagonalization
# ---------------------------------------------------------------------------


def _bond_list(L: int) -> list[tuple[int, int]]:
    return [(j, (j + 1) % L) for j in range(L)]


def build_hamiltonian(spec: ModelSpec) -> scipy.sparse.csr_matrix:
    """Sparse 2^L x 2^L Hamiltonian in the sz product basis (bit j = site j+1).

    Bit value 0 encodes sz = +1.  Matrix elements: a bond's sx sx + sy sy
    contributes 2 between states whose two bond bits differ; sx sx - sy sy
    contributes 2 between states whose bond bits agree; sz terms are diagonal.
    """
    if spec.L is None:
        raise ValueError("build_hamiltonian needs a finite L")
    L = spec.L
    dim = 1 << L
    states = np.arange(dim, dtype=np.int64)
    bits = (states[:, None] >> np.arange(L)) & 1
    sz = 1.0 - 2.0 * bits  # +1 for bit 0

    diag = np.zeros(dim)
    rows: list[np.ndarray] = []
    cols: list[np.ndarray] = []
    vals: list[np.ndarray] = []

    if spec.family in ("xxz", "xxz_field"):
        hop_amp, pair_amp = 2.0, 0.0  # (sx sx + sy sy) + Delta sz sz
        zz_coef = spec.delta
        if spec.family == "xxz_field":
            diag -= 0.5 * spec.h * sz.sum(axis=1)
    else:  # xy
        hop_amp = -0.5 * spec.lam  # coefficient of the differ-bit flip
        pair_amp = -0.5 * spec.lam * spec.gamma  # coefficient of the equal-bit flip
        zz_coef = 0.0
        diag -= 0.5 * sz.sum(axis=1)

    for p, q in _bond_list(L):
        diag += zz_coef * sz[:, p] * sz[:, q]
        mask = np.int64((1 << p) | (1 << q))
        differ = bits[:, p] != bits[:, q]
        if hop_amp != 0.0:
            src = states[differ]
            rows.append(src ^ mask)
            cols.append(src)
            vals.append(np.full(src.size, hop_amp))
        if pair_amp != 0.0:
            src = states[~differ]
            rows.append(src ^ mask)
            cols.append(src)
            vals.append(np.full(src.size, pair_amp))

    rows.append(states)
    cols.append(states)
    vals.append(diag)
    mat = scipy.sparse.coo_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
        shape=(dim, dim),
    )
    return mat.tocsr()


def _pair_flip_triplets(L: int, p: int, q: int, equal_bits: bool, sign_equal: float):
    """COO triplets for a two-site flip operator on sites p, q (0-based bits).

    With equal_bits False and sign +1 this is the matrix of sx_p sx_q
    restricted to differ-bit flips; see callers for how sx sx and sy sy are
    assembled.
    """
    dim = 1 << L
    states = np.arange(dim, dtype=np.int64)
    bp = (states >> p) & 1
    bq = (states >> q) & 1
    mask = np.int64((1 << p) | (1 << q))
    sel = (bp == bq) if equal_bits else (bp != bq)
    src = states[sel]
    return src ^ mask, src, np.full(src.size, sign_equal)


def _pair_operators(L: int, site: int) -> dict[str, object]:
    """Observables for the pair (site, site+1), 1-based site index.

    Returns diagonal arrays for sz_1 and sz_1 sz_2 and sparse matrices for
    sx_1 sx_2 and sy_1 sy_2.  sx sx flips the two bits with amplitude +1
    regardless of alignment; sy sy flips with +1 on differing bits and -1 on
    equal bits.
    """
    p = site - 1
    q = site % L
    dim = 1 << L
    states = np.arange(dim, dtype=np.int64)
    sz_p = 1.0 - 2.0 * ((states >> p) & 1)
    sz_q = 1.0 - 2.0 * ((states >> q) & 1)

    r1, c1, v1 = _pair_flip_triplets(L, p, q, equal_bits=False, sign_equal=1.0)
    r2, c2, v2 = _pair_flip_triplets(L, p, q, equal_bits=True, sign_equal=1.0)
    sxsx = scipy.sparse.coo_matrix(
        (np.concatenate([v1, v2]), (np.concatenate([r1, r2]), np.concatenate([c1, c2]))),
        shape=(dim, dim),
    ).tocsr()
    sysy = scipy.sparse.coo_matrix(
        (np.concatenate([v1, -v2]), (np.concatenate([r1, r2]), np.concatenate([c1, c2]))),
        shape=(dim, dim),
    ).tocsr()
    return {"z": sz_p, "zz": sz_p * sz_q, "xx": sxsx, "yy": sysy}


def _sector_indices(spec: ModelSpec, method: str) -> list[np.ndarray]:
    """Basis-index groups diagonalizing H in blocks.

    'dense' yields one group with everything.  'sector' groups by conserved
    quantum number: total magnetization for the xxz families, global
    spin-flip parity for xy.
    """
    dim = 1 << spec.L
    states = np.arange(dim, dtype=np.int64)
    popcount = np.zeros(dim, dtype=np.int64)
    for j in range(spec.L):
        popcount += (states >> j) & 1
    if method == "dense":
        return [states]
    if spec.family in ("xxz", "xxz_field"):
        return [np.flatnonzero(popcount == m) for m in range(spec.L + 1)]
    return [np.flatnonzero(popcount % 2 == r) for r in (0, 1)]


@dataclass
class ThermalSolution:
    """Eigendecomposition of a finite chain plus per-eigenstate observables.

    ``energies`` concatenates all symmetry sectors; ``expectations`` maps each
    correlator name to <n|O|n> aligned with ``energies``.  Eigenvectors are
    kept per sector (with their basis index lists) when requested.  Thermal
    weights never exponentiate anything above zero: weights are relative to
    the ground energy, so low temperatures cannot overflow.
    """

    spec: ModelSpec
    energies: np.ndarray
    expectations: dict[str, np.ndarray]
    e0: float
    eigenvectors: list[tuple[np.ndarray, np.ndarray]] | None = None

    def weights(self, kT: float) -> np.ndarray:
        """Unnormalized Boltzmann weights exp(-(E - E0)/kT); kT = 0 gives an
        equal-weight indicator of the ground window."""
        if kT < 0.0:
            raise ValueError("kT must be >= 0")
        gap = self.energies - self.e0
        if kT == 0.0:
            return (gap <= GROUND_STATE_WINDOW * max(1.0, abs(self.e0))).astype(float)
        return np.exp(-gap / kT)

    def correlators(self, kT: float) -> Correlators:
        w = self.weights(kT)
        norm = w.sum()
        avg = {k: float(np.dot(w, v) / norm) for k, v in self.expectations.items()}
        return Correlators(z=avg["z"], xx=avg["xx"], yy=avg["yy"], zz=avg["zz"])

    def log_partition_function(self, kT: float) -> float:
        """ln Z, stable at any kT > 0."""
        if kT <= 0.0:
            raise ValueError("partition function defined for kT > 0")
        return float(-self.e0 / kT + math.log(np.exp(-(self.energies - self.e0) / kT).sum()))

    def partition_function(self, kT: float) -> float:
        """Z = sum_n exp(-E_n / kT); may overflow to inf for very small kT."""
        log_z = self.log_partition_function(kT)
        return math.exp(log_z) if log_z < 709.0 else math.inf


def diagonalize(
    spec: ModelSpec,
    method: str = "auto",
    pair_site: int = 1,
    store_vectors: bool = False,
) -> ThermalSolution:
    """Exactly diagonalize the chain and cache per-eigenstate observables.

    ``method``: 'dense' (single block), 'sector' (symmetry blocks), or 'auto'
    (sectors; they agree with dense to rounding and win above L ~ 8).
    ``pair_site`` selects which nearest-neighbour pair the two-site
    observables live on (translation invariance makes the choice immaterial;
    exposing it lets tests verify exactly that).
    """
    if spec.L is None:
        raise ValueError("diagonalize needs a finite L; use xy_thermo_correlators")
    if method not in ("auto", "dense", "sector"):
        raise ValueError(f"method must be auto|dense|sector, got {method!r}")
    ham = build_hamiltonian(spec)
    ops = _pair_operators(spec.L, pair_site)
    groups = _sector_indices(spec, "dense" if method == "dense" else "sector")

    energies = []
    expect = {name: [] for name in ("z", "xx", "yy", "zz")}
    vectors = [] if store_vectors else None
    ham_csc = ham.tocsc()
    for idx in groups:
        block = ham_csc[:, idx].tocsr()[idx, :].toarray()
        evals, evecs = scipy.linalg.eigh(block, driver="evd", check_finite=False)
        energies.append(evals)
        for name in ("z", "zz"):
            diag_vals = ops[name][idx]
            expect[name].append((evecs * evecs).T @ diag_vals)
        for name in ("xx", "yy"):
            op_block = ops[name].tocsc()[:, idx].tocsr()[idx, :]
            expect[name].append(np.einsum("in,in->n", evecs, op_block @ evecs))
        if store_vectors:
            vectors.append((idx, evecs))

    energies = np.concatenate(energies)
    expectations = {k: np.concatenate(v) for k, v in expect.items()}
    return ThermalSolution(
        spec=spec,
        energies=energies,
        expectations=expectations,
        e0=float(energies.min()),
        eigenvectors=vectors,
    )


def thermal_correlators(spec: ModelSpec, method: str = "auto") -> Correlators:
    """Canonical-ensemble correlators (z, xx, yy, zz) for the pair (1, 2).

    Finite L runs exact diagonalization; L = None dispatches to the xy
    thermodynamic-limit solution.
    """
    if spec.L is None:
        return xy_thermo_correlators(spec.lam, spec.gamma, spec.kT)
    return diagonalize(spec, method=method).correlators(spec.kT)


# ---------------------------------------------------------------------------
# xy chain in the thermodynamic limit (free fermions)
# ---------------------------------------------------------------------------


def _xy_integrals(lam: float, gamma: float, kT: float) -> tuple[float, float, float]:
    """The three k-integrals behind the xy correlators.

    With xi(k) = 1 - lam cos k, D(k) = lam gamma sin k, E = sqrt(xi^2 + D^2)
    and t(k) = tanh(E / (2 kT)) (t = 1 at kT = 0):

      z  = (1/pi) int_0^pi (xi/E) t dk
      Ic = (1/pi) int_0^pi cos(k) (xi/E) t dk
      Is = (1/pi) int_0^pi sin(k) (D /E) t dk
    """

    def thermal(e: float) -> float:
        if kT == 0.0:
            return 1.0
        if kT == math.inf:
            return 0.0
        return math.tanh(0.5 * e / kT)

    def ratio_xi(k: float) -> float:
        xi = 1.0 - lam * math.cos(k)
        en = math.hypot(xi, lam * gamma * math.sin(k))
        if en < 1e-300:
            return 0.0
        return (xi / en) * thermal(en)

    def ratio_delta(k: float) -> float:
        xi = 1.0 - lam * math.cos(k)
        dd = lam * gamma * math.sin(k)
        en = math.hypot(xi, dd)
        if en < 1e-300:
            return 0.0
        return (dd / en) * thermal(en)

    # Interior zero of xi (a gap closing when gamma = 0, a near-kink
    # otherwise): hand it to the quadrature as a breakpoint.
    points = None
    if abs(lam) > 1.0:
        k0 = math.acos(1.0 / lam) if lam > 0 else math.acos(-1.0 / abs(lam))
        if 1e-12 < k0 < math.pi - 1e-12:
            points = [k0]

    opts = dict(epsabs=1e-10, epsrel=1e-10, limit=200, points=points)
    z = scipy.integrate.quad(ratio_xi, 0.0, math.pi, **opts)[0] / math.pi
    ic = (
        scipy.integrate.quad(lambda k: math.cos(k) * ratio_xi(k), 0.0, math.pi, **opts)[0]
        / math.pi
    )
    is_ = (
        scipy.integrate.quad(
            lambda k: math.sin(k) * ratio_delta(k), 0.0, math.pi, **opts
        )[0]
        / math.pi
    )
    return z, ic, is_


def xy_thermo_correlators(lam: float, gamma: float, kT: float) -> Correlators:
    """Thermodynamic-limit xy correlators from the free-fermion solution.

    xx = Is - Ic, yy = -Is - Ic, zz = z^2 - xx yy, with the integrals of
    ``_xy_integrals``.  Exact for all kT >= 0 (quadrature tolerance 1e-10).
    """
    if not (kT >= 0.0):
        raise ValueError(f"kT must be >= 0, got {kT}")
    z, ic, is_ = _xy_integrals(lam, gamma, kT)
    xx = is_ - ic
    yy = -is_ - ic
    return Correlators(z=z, xx=xx, yy=yy, zz=z * z - xx * yy)
