"""Harmonic chain with a substrate potential and one defect bond.

The chain has ``2M`` atoms labelled ``-M+1 .. M``, coupled by
nearest-neighbour (NN) springs ``k1`` and next-nearest-neighbour (NNN)
springs ``k2``, and pinned to substrate wells by a quadratic on-site term
``k0``.  Atoms with label ``<= 0`` sit in wells ``(i - 1) a0``, atoms with
label ``>= 1`` in wells ``i a0``, so the well spacing jumps by one ``a0``
between atoms 0 and 1: that gap is the defect the error estimators track.

Three model flavors share one quadratic-energy shape

    E(y) = 1/2 (y - a)^T D^T E D (y - a) + 1/2 (y - b)^T K (y - b)

with a bidiagonal difference map ``D``, a tridiagonal interaction matrix
``E`` on bonds (or coarse segments), and a misfit matrix ``K``:

* ``atomistic``  - exact NN/NNN interactions on the full chain,
* ``ac``         - full chain, but atoms flagged continuum use the local
                   Cauchy-Born density ``k12 = k1 + 4 k2`` instead of the
                   nonlocal NNN coupling,
* ``qc``         - the ac model restricted to a subset of representative
                   atoms, with piecewise linear interpolation in between.

Index conventions used throughout: an atom id ``i`` maps to array position
``i + M - 1``; bond ``i`` connects atoms ``i`` and ``i + 1`` and maps to the
same array position.  Boundary conditions clamp the two outermost atoms on
each side, so the free unknowns are atoms ``-M+3 .. M-2``.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from . import banded
from .banded import Array, BandedSpdMatrix

FLAVORS = ("atomistic", "ac", "qc")


@dataclass(frozen=True)
class ChainParams:
    """Chain size, spring constants, and clamped boundary positions.

    ``bc`` holds the prescribed positions of atoms ``(-M+1, -M+2, M-1, M)``.
    The default stretches the chain by one extra spacing, which is what
    forces a dislocation into the interior.
    """

    m: int
    k0: float = 1.0
    k1: float = 2.0
    k2: float = 2.0
    a0: float = 1.0
    bc: tuple[float, float, float, float] | None = None

    def __post_init__(self):
        if self.m < 3:
            raise ValueError(f"m must be >= 3, got {self.m}")
        if self.k0 <= 0 or self.k1 <= 0 or self.k2 < 0:
            raise ValueError("spring constants must satisfy k0 > 0, k1 > 0, k2 >= 0")
        if self.a0 <= 0:
            raise ValueError(f"a0 must be positive, got {self.a0}")
        if self.bc is None:
            m, a0 = self.m, self.a0
            object.__setattr__(
                self, "bc", (-m * a0, (-m + 1) * a0, (m - 1) * a0, m * a0)
            )
        elif len(self.bc) != 4:
            raise ValueError("bc must give positions for the 4 clamped atoms")

    @property
    def k12(self) -> float:
        """Cauchy-Born NN density equivalent to the NN+NNN pair."""
        return self.k1 + 4.0 * self.k2

    @property
    def n_atoms(self) -> int:
        return 2 * self.m

    @property
    def n_bonds(self) -> int:
        return 2 * self.m - 1

    @property
    def n_free(self) -> int:
        return 2 * self.m - 4


def atom_ids(params: ChainParams) -> Array:
    """All atom labels -M+1 .. M in order."""
    return np.arange(-params.m + 1, params.m + 1)


def lattice_sites(params: ChainParams) -> Array:
    """Reference positions a_i = i a0 (bond stretch is measured from these)."""
    return atom_ids(params) * params.a0


def well_positions(params: ChainParams, ids: Array | None = None) -> Array:
    """Substrate well centers: (i-1) a0 left of the defect, i a0 right of it."""
    if ids is None:
        ids = atom_ids(params)
    ids = np.asarray(ids)
    return (ids - (ids <= 0)) * params.a0


@dataclass(frozen=True)
class Partition:
    """Atomistic/continuum flags plus the representative-atom grid.

    ``delta_a`` flags every atom of the full chain; ``rep`` lists the
    retained atom ids in increasing order.  ``nu`` are the segment lengths
    between consecutive representatives and ``omega`` the per-segment
    continuum weights (0 inside atomistic regions, nu in fully continuum
    ones, 1/2 on interface segments).
    """

    m: int
    delta_a: Array
    rep: Array
    nu: Array
    omega: Array

    @property
    def n_rep(self) -> int:
        return len(self.rep)

    @property
    def n_segments(self) -> int:
        return len(self.rep) - 1

    @property
    def rep_pos(self) -> Array:
        return self.rep + self.m - 1

    @property
    def is_fully_refined(self) -> bool:
        return self.n_rep == 2 * self.m

    def atomistic_ids(self) -> Array:
        return np.flatnonzero(self.delta_a) - self.m + 1


def make_partition(
    params: ChainParams,
    atomistic=(),
    repatoms=None,
) -> Partition:
    """Validate and build a partition.

    ``atomistic`` lists atom ids treated exactly; everything else is
    continuum.  ``repatoms`` lists the retained atoms (default: all of them,
    i.e. no coarsening).  Rules enforced here:

    * the four clamped boundary atoms are always representatives,
    * every atomistic atom and its NNN neighbourhood (ids within 2) stays
      uncoarsened, so exact interactions never reach across a coarse segment,
    * a coarse segment may not straddle the defect bond between atoms 0 and
      1, because the wells of its interior atoms would be ambiguous.
    """
    m = params.m
    lo, hi = -m + 1, m
    atom_arr = np.unique(np.asarray(list(atomistic), dtype=int))
    if atom_arr.size and (atom_arr[0] < lo or atom_arr[-1] > hi):
        bad = atom_arr[0] if atom_arr[0] < lo else atom_arr[-1]
        raise ValueError(f"atomistic atom {bad} outside chain range [{lo}, {hi}]")
    delta_a = np.zeros(2 * m, dtype=bool)
    delta_a[atom_arr + m - 1] = True

    if repatoms is None:
        rep = np.arange(lo, hi + 1)
    else:
        rep = np.unique(np.asarray(list(repatoms), dtype=int))
        if rep.size and (rep[0] < lo or rep[-1] > hi):
            bad = rep[0] if rep[0] < lo else rep[-1]
            raise ValueError(f"repatom {bad} outside chain range [{lo}, {hi}]")
        for b in (lo, lo + 1, hi - 1, hi):
            if b not in rep:
                raise ValueError(f"boundary atom {b} must be a repatom")
        rep_set = set(rep.tolist())
        for i in atom_arr.tolist():
            if i not in rep_set:
                raise ValueError(f"atomistic atom {i} must be a repatom")
            for j in range(max(i - 2, lo), min(i + 2, hi) + 1):
                if j not in rep_set:
                    raise ValueError(
                        f"atom {j} in the NNN buffer of atomistic atom {i} "
                        f"must stay uncoarsened"
                    )

    nu = np.diff(rep)
    straddle = (nu > 1) & (rep[:-1] <= 0) & (rep[1:] >= 1)
    if straddle.any():
        p = int(np.flatnonzero(straddle)[0])
        raise ValueError(
            f"coarse segment [{rep[p]}, {rep[p + 1]}] straddles the defect "
            f"bond (0, 1); keep that region uncoarsened"
        )

    dc_rep = 1.0 - delta_a[rep + m - 1].astype(float)
    omega = 0.5 * nu * (dc_rep[:-1] + dc_rep[1:])
    return Partition(m=m, delta_a=delta_a, rep=rep, nu=nu, omega=omega)


def interval_partition(params: ChainParams, k: int) -> Partition:
    """Uncoarsened partition with atoms -K+1 .. K atomistic (K = 0: none)."""
    if k < 0 or k > params.m - 2:
        raise ValueError(f"k must be in [0, {params.m - 2}], got {k}")
    return make_partition(params, atomistic=range(-k + 1, k + 1))


@dataclass(frozen=True)
class QuadraticModel:
    """Assembled quadratic energy 1/2|D(y-a)|_E^2 + 1/2|y-b|_K^2.

    ``inv_nu`` scales each difference row of ``D`` (all ones unless the
    flavor is qc), ``ids`` labels the degrees of freedom by atom id.
    """

    flavor: str
    ids: Array
    inv_nu: Array
    e_mat: BandedSpdMatrix
    k_mat: BandedSpdMatrix
    a_eq: Array
    b_eq: Array

    @property
    def n_points(self) -> int:
        return len(self.ids)


def d_apply(model: QuadraticModel, v: Array) -> Array:
    """Scaled difference map: row j is (v[j+1] - v[j]) / nu_j."""
    return model.inv_nu * np.diff(v)


def dt_apply(model: QuadraticModel, w: Array) -> Array:
    """Adjoint of d_apply."""
    out = np.zeros(model.n_points)
    sw = model.inv_nu * w
    out[:-1] -= sw
    out[1:] += sw
    return out


def _nn_bond_bands(params: ChainParams, da: Array) -> BandedSpdMatrix:
    """Bond interaction matrix for the full chain given atomistic flags.

    Per-bond NN stiffness blends k1 (atomistic side) with the Cauchy-Born
    k12 (continuum side); NNN pairs couple neighbouring bonds only where an
    atomistic atom participates.  Pairs that would reach past a chain end
    are dropped entirely.
    """
    k1, k2, k12 = params.k1, params.k2, params.k12
    nb = len(da) - 1
    dc = 1.0 - da
    bands = banded.zeros_like_band(nb, 1)
    diag = bands[0]
    diag += 0.5 * k12 * (dc[:-1] + dc[1:]) + 0.5 * k1 * (da[:-1] + da[1:])
    pair = da[0 : nb - 1] + da[2 : nb + 1]  # NNN pair over bonds (p, p+1)
    diag[1:] += 0.5 * k2 * pair
    diag[:-1] += 0.5 * k2 * pair
    bands[1, : nb - 1] = 0.5 * k2 * pair
    return BandedSpdMatrix(bands)


def _segment_bands(params: ChainParams, part: Partition) -> BandedSpdMatrix:
    """Segment interaction matrix on the repatom grid.

    Continuum stretch energy enters through the omega weights; exact NN/NNN
    terms only appear where the flags are atomistic, and the NNN buffer rule
    guarantees those segments all have nu = 1.
    """
    k1, k2, k12 = params.k1, params.k2, params.k12
    ns = part.n_segments
    da = part.delta_a[part.rep_pos].astype(float)
    bands = banded.zeros_like_band(ns, 1)
    diag = bands[0]
    diag += part.omega * k12 + 0.5 * k1 * (da[:-1] + da[1:])
    pair = da[0 : ns - 1] + da[2 : ns + 1]
    diag[1:] += 0.5 * k2 * pair
    diag[:-1] += 0.5 * k2 * pair
    bands[1, : ns - 1] = 0.5 * k2 * pair
    return BandedSpdMatrix(bands)


def _misfit_diag_bands(params: ChainParams, da: Array) -> BandedSpdMatrix:
    """On-site misfit matrix for the full chain.

    Interior atoms carry the full k0.  A continuum atom at a chain end only
    bounds one segment, so it carries half weight; that keeps the matrix
    consistent with the segment-based energy and with the qc flavor at
    nu = 1.
    """
    n = len(da)
    bands = banded.zeros_like_band(n, 0)
    bands[0] = params.k0
    for p in (0, n - 1):
        if not da[p]:
            bands[0, p] = 0.5 * params.k0
    return BandedSpdMatrix(bands)


def _misfit_segment_bands(params: ChainParams, part: Partition) -> BandedSpdMatrix:
    """Misfit matrix on the repatom grid.

    A continuum segment of length nu contributes the quadratic form of the
    interpolated misfit sum: (2 nu + 1/nu) k0 / 6 to each endpoint diagonal
    and (nu - 1/nu) k0 / 6 to the coupling.  Atomistic repatoms keep the
    plain k0 on-site term instead.
    """
    k0 = params.k0
    nr = part.n_rep
    nu = part.nu.astype(float)
    da = part.delta_a[part.rep_pos]
    w = (2.0 * nu + 1.0 / nu) / 6.0
    bands = banded.zeros_like_band(nr, 1)
    diag = bands[0]
    diag[:-1] += k0 * w
    diag[1:] += k0 * w
    diag[da] = k0
    off = k0 * (nu - 1.0 / nu) / 6.0
    off[da[:-1] | da[1:]] = 0.0  # only fully continuum segments couple wells
    bands[1, : nr - 1] = off
    return BandedSpdMatrix(bands)


def assemble(params: ChainParams, part: Partition, flavor: str) -> QuadraticModel:
    """Build the quadratic model of the requested flavor.

    ``atomistic`` and ``ac`` live on the full chain (``atomistic`` ignores
    the partition flags); ``qc`` lives on the repatom grid.
    """
    if flavor not in FLAVORS:
        raise ValueError(f"flavor must be one of {FLAVORS}, got {flavor!r}")
    if flavor == "qc":
        ids = part.rep.copy()
        e_mat = _segment_bands(params, part)
        k_mat = _misfit_segment_bands(params, part)
        inv_nu = 1.0 / part.nu.astype(float)
    else:
        ids = atom_ids(params)
        da = (
            np.ones(2 * params.m)
            if flavor == "atomistic"
            else part.delta_a.astype(float)
        )
        e_mat = _nn_bond_bands(params, da)
        k_mat = _misfit_diag_bands(params, da)
        inv_nu = np.ones(2 * params.m - 1)
    a_eq = ids * params.a0
    b_eq = well_positions(params, ids)
    return QuadraticModel(
        flavor=flavor,
        ids=ids,
        inv_nu=inv_nu,
        e_mat=e_mat,
        k_mat=k_mat,
        a_eq=a_eq,
        b_eq=b_eq,
    )


def stiffness_bands(model: QuadraticModel) -> BandedSpdMatrix:
    """Full Hessian D^T E D + K as a pentadiagonal band matrix."""
    n = model.n_points
    ed = model.e_mat.bands[0]
    eo = model.e_mat.bands[1, : n - 2]
    s = model.inv_nu
    se = s[:-1] * s[1:] * eo

    bands = banded.zeros_like_band(n, 2)
    diag, off1, off2 = bands[0], bands[1, : n - 1], bands[2, : n - 2]
    s2ed = s * s * ed
    diag[:-1] += s2ed
    diag[1:] += s2ed
    diag[1:-1] -= 2.0 * se
    off1 -= s2ed
    off1[1:] += se
    off1[:-1] += se
    off2 -= se

    diag += model.k_mat.bands[0]
    if model.k_mat.bandwidth >= 1:
        off1 += model.k_mat.bands[1, : n - 1]
    return BandedSpdMatrix(bands)


@dataclass(frozen=True)
class LinearSystem:
    """Reduced equilibrium system on the free (unclamped) degrees of freedom.

    ``rhs`` is the load for absolute positions; ``rhs_wells`` is the same
    load rewritten for well-relative displacements ``u = y - b``, which is
    the numerically quiet way to solve (positions are O(M a0) while the
    physics lives at O(a0)).  ``lift`` is the full-length vector holding the
    clamped boundary positions and zeros elsewhere.
    """

    flavor: str
    mat: BandedSpdMatrix
    rhs: Array
    rhs_wells: Array
    wells_free: Array
    lift: Array
    free_index: Array


def reduce_system(params: ChainParams, model: QuadraticModel) -> LinearSystem:
    """Clamp the two outermost atoms on each side and form the free system."""
    n = model.n_points
    if n < 6:
        raise ValueError("need at least 6 points to have free unknowns")
    full = stiffness_bands(model)
    bands = banded.zeros_like_band(n - 4, 2)
    bands[0] = full.bands[0][2:-2]
    bands[1, : n - 5] = full.bands[1][2 : n - 3]
    bands[2, : n - 6] = full.bands[2][2 : n - 4]
    mat = BandedSpdMatrix(bands)

    lift = np.zeros(n)
    lift[[0, 1, -2, -1]] = params.bc

    def load(shift: Array) -> Array:
        w = d_apply(model, shift)
        t = dt_apply(model, banded.matvec(model.e_mat, w))
        return t

    # absolute-position load: -J^T [D^T E D (lift - a) + K (lift - b)]
    f_full = -(load(lift - model.a_eq) + banded.matvec(model.k_mat, lift - model.b_eq))
    # well-relative load: substitute y = u + b and keep u as the unknown
    w_bc = np.zeros(n)
    for p in (0, 1, -2, -1):
        w_bc[p] = lift[p] - model.b_eq[p]
    fw_full = -(load(w_bc + model.b_eq - model.a_eq) + banded.matvec(model.k_mat, w_bc))

    return LinearSystem(
        flavor=model.flavor,
        mat=mat,
        rhs=f_full[2:-2],
        rhs_wells=fw_full[2:-2],
        wells_free=model.b_eq[2:-2],
        lift=lift,
        free_index=model.ids[2:-2],
    )


def solve_displacements(system: LinearSystem) -> Array:
    """Equilibrium displacements from the wells on the free points."""
    return banded.factor_solve(system.mat, system.rhs_wells)


def solve_positions(system: LinearSystem) -> Array:
    """Equilibrium absolute positions on the free points."""
    return solve_displacements(system) + system.wells_free


def interpolate(part: Partition, y_rep: Array) -> Array:
    """Piecewise linear extension from repatom values to the full chain."""
    y_rep = np.asarray(y_rep, dtype=float)
    if len(y_rep) != part.n_rep:
        raise ValueError(f"expected {part.n_rep} repatom values, got {len(y_rep)}")
    ids = np.arange(-part.m + 1, part.m + 1)
    return np.interp(ids, part.rep, y_rep)


def restrict(part: Partition, y_full: Array) -> Array:
    """Sample a full-chain vector at the repatoms (left inverse of interpolate)."""
    y_full = np.asarray(y_full, dtype=float)
    if len(y_full) != 2 * part.m:
        raise ValueError(f"expected {2 * part.m} atom values, got {len(y_full)}")
    return y_full[part.rep_pos]


def misfit_segment_energy(
    params: ChainParams,
    ell_lo: int,
    ell_hi: int,
    y_lo: float,
    y_hi: float,
    side: str,
) -> float:
    """Misfit energy of one continuum segment under linear interpolation.

    The interpolated misfit sum over the nu+1 atoms of the segment (with
    half weight at both end atoms, since those are shared with the
    neighbouring segments) collapses to a closed form in the endpoint
    displacements:

        k0 / (2 nu^2) * (alpha (u_lo^2 + u_hi^2) + 2 beta u_lo u_hi),
        alpha = (2 nu^3 + nu) / 6,   beta = (nu^3 - nu) / 6.

    All atoms covered by the segment must share one well family, so the
    caller states the ``side`` ("left" of the defect or "right") and we
    refuse geometries that contradict it.
    """
    nu = ell_hi - ell_lo
    if nu < 1:
        raise ValueError(f"segment endpoints must increase, got [{ell_lo}, {ell_hi}]")
    if side == "right":
        if ell_lo < 1:
            raise ValueError(
                f"segment [{ell_lo}, {ell_hi}] is not entirely right of the defect"
            )
        shift = 0.0
    elif side == "left":
        if ell_hi > 0:
            raise ValueError(
                f"segment [{ell_lo}, {ell_hi}] is not entirely left of the defect"
            )
        shift = -params.a0
    else:
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    u_lo = y_lo - (ell_lo * params.a0 + shift)
    u_hi = y_hi - (ell_hi * params.a0 + shift)
    alpha = (2.0 * nu**3 + nu) / 6.0
    beta = (nu**3 - nu) / 6.0
    return params.k0 / (2.0 * nu**2) * (
        alpha * (u_lo * u_lo + u_hi * u_hi) + 2.0 * beta * u_lo * u_hi
    )


def _check_wells(params: ChainParams, u: Array, what: str) -> None:
    off = np.abs(u) > 0.5 * params.a0
    if off.any():
        warnings.warn(
            f"{int(off.sum())} {what} sit more than a0/2 from their assigned "
            f"wells; the harmonic well model is questionable there",
            stacklevel=3,
        )


def _energy_atomistic(params: ChainParams, y: Array) -> float:
    k0, k1, k2, a0 = params.k0, params.k1, params.k2, params.a0
    u = y - well_positions(params)
    nn = y[1:] - y[:-1] - a0
    nnn = y[2:] - y[:-2] - 2.0 * a0
    return float(
        0.5 * k1 * np.dot(nn, nn)
        + 0.5 * k2 * np.dot(nnn, nnn)
        + 0.5 * k0 * np.dot(u, u)
    )


def _energy_blended(params: ChainParams, part: Partition, y: Array) -> float:
    """Energy of the ac/qc flavors by walking the repatom grid.

    Atomistic repatoms contribute their exact per-atom NN/NNN/misfit share
    (quarter weights on bonds and spans, which all live on nu = 1 segments
    thanks to the buffer rule).  Continuum segments contribute the
    Cauchy-Born stretch energy plus the interpolated misfit closed form;
    an interface segment contributes half a bond energy and the continuum
    endpoint's misfit half.
    """
    k0, k2, a0, k12 = params.k0, params.k2, params.a0, params.k12
    quarter_k1 = 0.25 * params.k1
    rep = part.rep
    nu = part.nu
    nr = part.n_rep
    da = part.delta_a[part.rep_pos]
    dy = np.diff(y)
    u = y - well_positions(params, rep)

    at_lo, at_hi = da[:-1], da[1:]
    cont_seg = ~at_lo & ~at_hi
    iface = at_lo ^ at_hi

    rbar = dy / nu
    phi = 0.5 * k12 * (rbar - a0) ** 2
    total = float(np.dot(nu[cont_seg], phi[cont_seg]) + 0.5 * phi[iface].sum())

    # continuum misfit: refined segments pointwise, coarse ones closed form
    fine_cont = cont_seg & (nu == 1)
    if fine_cont.any():
        p = np.flatnonzero(fine_cont)
        total += 0.25 * k0 * float(np.dot(u[p], u[p]) + np.dot(u[p + 1], u[p + 1]))
    for p in np.flatnonzero(cont_seg & (nu > 1)):
        side = "right" if rep[p] >= 1 else "left"
        total += misfit_segment_energy(
            params, int(rep[p]), int(rep[p + 1]), float(y[p]), float(y[p + 1]), side
        )
    if iface.any():
        p = np.flatnonzero(iface)
        cont_end = np.where(at_lo[p], p + 1, p)
        total += 0.25 * k0 * float(np.dot(u[cont_end], u[cont_end]))

    # exact share of the atomistic repatoms
    ja = np.flatnonzero(da)
    if ja.size:
        stretch2 = (dy - nu * a0) ** 2
        for j in ja:
            if j - 1 >= 0:
                total += quarter_k1 * stretch2[j - 1]
            if j <= nr - 2:
                total += quarter_k1 * stretch2[j]
            if j - 2 >= 0:
                span = y[j] - y[j - 2] - (nu[j - 2] + nu[j - 1]) * a0
                total += 0.25 * k2 * span * span
            if j + 2 <= nr - 1:
                span = y[j + 2] - y[j] - (nu[j] + nu[j + 1]) * a0
                total += 0.25 * k2 * span * span
        total += 0.5 * k0 * float(np.dot(u[ja], u[ja]))
    return total


def energy_direct(
    params: ChainParams,
    part: Partition,
    flavor: str,
    y: Array,
    check_wells: bool = True,
) -> float:
    """Total energy evaluated term by term, bypassing the assembled matrices.

    This is the bookkeeping route the matrix assembly must agree with
    (``1/2 (y-a)^T D^T E D (y-a) + 1/2 (y-b)^T K (y-b)`` matches it to
    round-off); keeping both routes makes each one testable against the
    other.
    """
    if flavor not in FLAVORS:
        raise ValueError(f"flavor must be one of {FLAVORS}, got {flavor!r}")
    y = np.asarray(y, dtype=float)
    want = part.n_rep if flavor == "qc" else 2 * params.m
    if len(y) != want:
        raise ValueError(f"flavor {flavor!r} expects {want} values, got {len(y)}")
    if flavor == "atomistic":
        if check_wells:
            _check_wells(params, y - well_positions(params), "atoms")
        return _energy_atomistic(params, y)
    if flavor == "ac":
        full = make_partition(
            params, atomistic=part.atomistic_ids()
        )  # same flags, no coarsening
        if check_wells:
            _check_wells(params, y - well_positions(params), "atoms")
        return _energy_blended(params, full, y)
    if check_wells:
        _check_wells(params, y - well_positions(params, part.rep), "repatoms")
    return _energy_blended(params, part, y)


def energy_matrix(params: ChainParams, model: QuadraticModel, y: Array) -> float:
    """Same energy through the assembled bands (cross-check for the above)."""
    y = np.asarray(y, dtype=float)
    w = d_apply(model, y - model.a_eq)
    v = y - model.b_eq
    return 0.5 * float(
        np.dot(w, banded.matvec(model.e_mat, w))
        + np.dot(v, banded.matvec(model.k_mat, v))
    )
