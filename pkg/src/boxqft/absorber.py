"""Double-sum identities for real currents coupled through the kernels.

Implements the discrete analogue of two currents interacting through a
propagator kernel,

    S[a, b; K] = sum_{x, y} a(x) K(x - y) b(y) (dt dx)^2,

with x and y running over the full spacetime grid, and uses it to
verify the claims that hold only under full symmetric double
summation:

* summing the Hadamard combination (D+ - D-)/2 over *all* ordered
  current pairs equals summing D+ alone (the antisymmetry of the
  Wightman pair cancels the odd part);
* the same full double sum is blind to the direction of the kernel
  argument, S[D+(x-y)] = S[D+(y-x)];
* the per-mode emission energies E_n = |J_tilde(w_n, k_n)|^2
  (dt dx)^2 / (2 w_n L) are manifestly nonnegative and reassemble the
  D+ double sum exactly (a discrete Parseval identity);
* a current with zero on-shell Fourier content emits nothing — the
  "sealed box" configuration — and such a current can be constructed
  from any current by least-squares projection.

Restricting any of these sums to a proper subset of current pairs
breaks the identities, which the shipped negative controls demonstrate.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

import numpy as np

from .lattice import Lattice, LatticeSpec, ValidationError, build_lattice
from .propagators import KernelKind, kernel_values

__all__ = [
    "CurrentDistribution",
    "EmissionSpectrum",
    "current_from_csv",
    "dplus_direction_equivalence",
    "emitted_spectrum",
    "free_field_identity",
    "interaction_sum",
    "kernel_difference_table",
    "light_tight_check",
    "project_light_tight",
    "random_current",
    "spectrum_consistency_residual",
]


@dataclass(frozen=True)
class CurrentDistribution:
    """Real current amplitudes j(t_i, x_j) on the full spacetime grid.

    Samples must be real (the emission-positivity argument needs real
    currents) and are stored read-only.
    """

    samples: np.ndarray

    def __post_init__(self) -> None:
        arr = np.asarray(self.samples)
        if np.iscomplexobj(arr):
            if np.any(arr.imag != 0):
                raise ValidationError("current samples must be real")
            arr = arr.real
        arr = np.array(arr, dtype=float)
        if arr.ndim != 2:
            raise ValidationError(
                f"current samples must be a 2-d (time, space) array, got shape {arr.shape}"
            )
        arr.setflags(write=False)
        object.__setattr__(self, "samples", arr)

    @property
    def shape(self) -> tuple[int, int]:
        return self.samples.shape

    @property
    def support(self) -> tuple[int, int, int, int] | None:
        """Inclusive bounding index box (t_lo, t_hi, x_lo, x_hi) of the
        nonzero samples, or None for the zero current."""
        rows, cols = np.nonzero(self.samples)
        if rows.size == 0:
            return None
        return int(rows.min()), int(rows.max()), int(cols.min()), int(cols.max())

    def scaled(self, factor: float) -> "CurrentDistribution":
        return CurrentDistribution(self.samples * float(factor))

    def to_csv(self, path: str | Path) -> None:
        """Write the nonzero samples as rows `t_index,x_index,value`."""
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["t_index", "x_index", "value"])
            for i, j in zip(*np.nonzero(self.samples)):
                writer.writerow([int(i), int(j), repr(float(self.samples[i, j]))])


def current_from_csv(path: str | Path, n_time: int, n_space: int) -> CurrentDistribution:
    """Load a current from rows `t_index,x_index,value` onto an empty grid."""
    samples = np.zeros((n_time, n_space))
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        required = {"t_index", "x_index", "value"}
        if reader.fieldnames is None or not required.issubset(reader.fieldnames):
            raise ValidationError(
                f"current CSV must have header t_index,x_index,value, got {reader.fieldnames}"
            )
        for row in reader:
            i, j = int(row["t_index"]), int(row["x_index"])
            if not (0 <= i < n_time and 0 <= j < n_space):
                raise ValidationError(
                    f"current sample index ({i}, {j}) outside grid ({n_time}, {n_space})"
                )
            samples[i, j] += float(row["value"])
    return CurrentDistribution(samples)


def random_current(lattice: Lattice, rng: np.random.Generator) -> CurrentDistribution:
    """Standard-normal current on the lattice grid (seeded by the caller)."""
    return CurrentDistribution(
        rng.standard_normal((lattice.spec.n_time, lattice.spec.n_space))
    )


def _check_on_lattice(current: CurrentDistribution, lattice: Lattice, name: str) -> None:
    expected = (lattice.spec.n_time, lattice.spec.n_space)
    if current.shape != expected:
        raise ValidationError(
            f"current {name} has grid {current.shape}, lattice expects {expected}"
        )


@lru_cache(maxsize=32)
def _difference_table(spec: LatticeSpec, kind: KernelKind) -> np.ndarray:
    """Kernel values on every grid difference: shape (2 n_time - 1, n_space).

    Row r holds time difference (r - (n_time - 1)) * dt; column c holds
    space difference c * dx (differences reduced modulo the box).  The
    equal-time row uses the kernels' continuous extension.
    """
    lattice = build_lattice(spec)
    n_t, n_x = spec.n_time, spec.n_space
    dts = (np.arange(-(n_t - 1), n_t) * spec.dt)[:, None]
    dxs = np.arange(n_x) * lattice.dx
    table = kernel_values(
        lattice.momenta,
        lattice.frequencies,
        spec.box_length,
        kind,
        dts,
        dxs,
        step_at_zero=True,
    )
    table = np.asarray(table, dtype=complex)
    table.setflags(write=False)
    return table


def kernel_difference_table(
    lattice: Lattice, kind: KernelKind, reverse_argument: bool = False
) -> np.ndarray:
    """Kernel on all grid differences; optionally with the argument negated.

    ``reverse_argument`` returns the table of K(y - x) instead of
    K(x - y), i.e. the original table with both difference axes negated
    (space negation taken modulo the grid).
    """
    table = _difference_table(lattice.spec, kind)
    if not reverse_argument:
        return table
    n_x = lattice.spec.n_space
    space_neg = (-np.arange(n_x)) % n_x
    return table[::-1][:, space_neg]


def interaction_sum(
    a: CurrentDistribution,
    b: CurrentDistribution,
    kind: KernelKind,
    lattice: Lattice,
    reverse_argument: bool = False,
) -> complex:
    """Discrete double integral sum_{x,y} a(x) K(x-y) b(y) (dt dx)^2.

    ``reverse_argument`` evaluates the kernel at (y - x) instead,
    which matters for kernels that are not even under full reflection.
    """
    _check_on_lattice(a, lattice, "a")
    _check_on_lattice(b, lattice, "b")
    table = kernel_difference_table(lattice, kind, reverse_argument)
    n_t, n_x = lattice.spec.n_time, lattice.spec.n_space
    # jdiff[j, j'] = (j - j') mod n_x indexes the space-difference axis
    idx = np.arange(n_x)
    jdiff = (idx[:, None] - idx[None, :]) % n_x
    times = np.arange(n_t)
    acc = 0.0 + 0.0j
    for i_prime in range(n_t):
        rows = table[times - i_prime + n_t - 1]          # (n_t, n_x) over dt
        gathered = rows[:, jdiff]                        # (n_t, n_x, n_x)
        field_at_y = np.einsum("ij,ijk->k", a.samples, gathered)
        acc += field_at_y @ b.samples[i_prime]
    measure = (lattice.spec.dt * lattice.dx) ** 2
    return complex(acc * measure)


def _all_ordered_pairs(n: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(n) for j in range(n)]


def free_field_identity(
    currents: list[CurrentDistribution],
    lattice: Lattice,
    pairs: list[tuple[int, int]] | None = None,
) -> float:
    """|S1 - S2| where S1 sums the Hadamard kernel and S2 sums D+ over pairs.

    Over *all* ordered current pairs the two agree up to rounding: the
    difference kernel (D+ + D-)/2 is odd under full reflection, so the
    symmetric double sum annihilates it.  Restricting ``pairs`` to a
    proper subset (the negative control) breaks the cancellation.
    """
    if not currents:
        raise ValidationError("at least one current is required")
    chosen = _all_ordered_pairs(len(currents)) if pairs is None else list(pairs)
    s_hadamard = 0.0 + 0.0j
    s_plus = 0.0 + 0.0j
    for i, j in chosen:
        s_hadamard += interaction_sum(currents[i], currents[j], KernelKind.HADAMARD, lattice)
        s_plus += interaction_sum(currents[i], currents[j], KernelKind.WIGHTMAN_PLUS, lattice)
    return abs(s_hadamard - s_plus)


def dplus_direction_equivalence(
    currents: list[CurrentDistribution],
    lattice: Lattice,
    pairs: list[tuple[int, int]] | None = None,
) -> float:
    """|sum D+(x-y) - sum D+(y-x)| over the chosen current pairs.

    Under the full symmetric double sum the two argument directions are
    interchangeable; a single unsymmetrized pair (the negative control)
    shows they are not interchangeable pointwise.
    """
    if not currents:
        raise ValidationError("at least one current is required")
    chosen = _all_ordered_pairs(len(currents)) if pairs is None else list(pairs)
    forward = 0.0 + 0.0j
    backward = 0.0 + 0.0j
    for i, j in chosen:
        forward += interaction_sum(
            currents[i], currents[j], KernelKind.WIGHTMAN_PLUS, lattice
        )
        backward += interaction_sum(
            currents[i], currents[j], KernelKind.WIGHTMAN_PLUS, lattice, reverse_argument=True
        )
    return abs(forward - backward)


@dataclass(frozen=True)
class EmissionSpectrum:
    """Per-mode emission energies E_n >= 0 indexed by the lattice momenta."""

    momenta: np.ndarray
    frequencies: np.ndarray
    energies: np.ndarray

    def __post_init__(self) -> None:
        for name in ("momenta", "frequencies", "energies"):
            arr = np.array(getattr(self, name), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        if not (self.momenta.shape == self.frequencies.shape == self.energies.shape):
            raise ValidationError("spectrum arrays must have matching shapes")

    @property
    def total(self) -> float:
        return float(self.energies.sum())

    def to_csv(self, path: str | Path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["k", "omega", "energy"])
            for k, w, e in zip(self.momenta, self.frequencies, self.energies):
                writer.writerow([repr(float(k)), repr(float(w)), repr(float(e))])


def _onshell_transform(lattice: Lattice, total: np.ndarray) -> np.ndarray:
    """J_tilde_n = sum_{i,j} J(t_i, x_j) exp(+i(w_n t_i - k_n x_j)).

    Direct exponential sums: the on-shell frequencies w_n do not lie on
    uniform transform bins, so no FFT applies.
    """
    times = np.asarray(lattice.times())
    positions = np.asarray(lattice.positions())
    time_phases = np.exp(1j * np.multiply.outer(times, np.asarray(lattice.frequencies)))
    space_phases = np.exp(-1j * np.multiply.outer(positions, np.asarray(lattice.momenta)))
    return np.einsum("ij,in,jn->n", total, time_phases, space_phases)


def emitted_spectrum(
    currents: list[CurrentDistribution], lattice: Lattice
) -> EmissionSpectrum:
    """Per-mode energies of the total current J = sum of the inputs.

    E_n = |J_tilde(w_n, k_n)|^2 (dt dx)^2 / (2 w_n L): the D+ double
    sum decomposed by mode, hence nonnegative term by term.
    """
    n_t, n_x = lattice.spec.n_time, lattice.spec.n_space
    total = np.zeros((n_t, n_x))
    for idx, current in enumerate(currents):
        _check_on_lattice(current, lattice, f"#{idx}")
        if np.iscomplexobj(current.samples) and np.any(current.samples.imag != 0):
            raise ValidationError(f"current #{idx} has nonzero imaginary part")
        total = total + current.samples
    transform = _onshell_transform(lattice, total)
    measure = (lattice.spec.dt * lattice.dx) ** 2
    frequencies = np.asarray(lattice.frequencies)
    energies = (np.abs(transform) ** 2) * measure / (
        2.0 * frequencies * lattice.spec.box_length
    )
    return EmissionSpectrum(
        momenta=np.asarray(lattice.momenta), frequencies=frequencies, energies=energies
    )


def spectrum_consistency_residual(
    currents: list[CurrentDistribution], lattice: Lattice
) -> float:
    """|sum_n E_n - S[J, J; D+]|: the mode decomposition against the
    direct double sum over the total current (discrete Parseval)."""
    if not currents:
        return 0.0
    total = CurrentDistribution(sum(c.samples for c in currents))
    spectrum = emitted_spectrum(currents, lattice)
    double_sum = interaction_sum(total, total, KernelKind.WIGHTMAN_PLUS, lattice)
    return abs(spectrum.total - double_sum)


def light_tight_check(
    currents: list[CurrentDistribution], lattice: Lattice
) -> float:
    """Total emission of the summed currents; ~0 for a sealed configuration."""
    if not currents:
        return 0.0
    return emitted_spectrum(currents, lattice).total


def _onshell_basis(lattice: Lattice) -> np.ndarray:
    """Real basis of on-shell grid functions: columns cos(w t - k x) and
    sin(w t - k x) for every mode, flattened over the grid."""
    times = lattice.times()
    positions = lattice.positions()
    tt = times[:, None, None]
    xx = positions[None, :, None]
    ww = np.asarray(lattice.frequencies)[None, None, :]
    kk = np.asarray(lattice.momenta)[None, None, :]
    angles = ww * tt - kk * xx                       # (n_t, n_x, modes)
    flat = angles.reshape(times.size * positions.size, -1)
    return np.hstack([np.cos(flat), np.sin(flat)])


def project_light_tight(
    current: CurrentDistribution, lattice: Lattice
) -> CurrentDistribution:
    """Remove every on-shell Fourier component from a current.

    Least-squares projection onto the orthogonal complement of the
    on-shell cosine/sine grid functions; the residual current has zero
    overlap with each of them, hence (numerically) zero emission in
    every mode, while remaining real.
    """
    _check_on_lattice(current, lattice, "current")
    basis = _onshell_basis(lattice)
    flat = current.samples.ravel()
    coeffs, *_ = np.linalg.lstsq(basis, flat, rcond=None)
    residual = flat - basis @ coeffs
    return CurrentDistribution(residual.reshape(current.shape))
