"""Waveguide geometry from dispersion tables, and back.

The physical knobs are waveguide widths (setting the propagation constant
beta) and edge-to-edge gaps (setting the evanescent coupling kappa). Both
relations enter as sampled single-wavelength tables; a monotone cubic
interpolant (PCHIP) gives smooth forward curves, and bisection on the
interpolant inverts them. The inverse problem maps a target
Hamiltonian-length product onto widths and gaps for a chosen array length.
"""

from __future__ import annotations

import importlib.resources
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.interpolate import PchipInterpolator

from .errors import DomainError, InputError
from .gate import find_encoding, fidelity, logical_transfer_matrix
from .walk import Hamiltonian, build_hamiltonian, dense_hamiltonian, unitary

TABLE_KINDS = ("beta_vs_width", "kappa_vs_gap")
DEFAULT_DECOUPLE_GAP_UM = 20.0
_INVERSE_RESIDUAL_TOL = 1e-9
_CSV_HEADER = "abscissa_um,ordinate"


@dataclass(frozen=True)
class DispersionTable:
    """Sampled monotone curve: beta(width) in rad/mm or kappa(gap) in 1/mm."""

    kind: str
    abscissa_um: np.ndarray
    ordinate: np.ndarray
    wavelength_um: float = 1.55
    _interp: PchipInterpolator = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.kind not in TABLE_KINDS:
            raise InputError(f"table kind must be one of {TABLE_KINDS}, got {self.kind!r}")
        x = np.asarray(self.abscissa_um, dtype=float)
        y = np.asarray(self.ordinate, dtype=float)
        if x.ndim != 1 or x.shape != y.shape:
            raise InputError("abscissa and ordinate must be 1-D vectors of equal length")
        if x.size < 4:
            raise InputError(f"table needs at least 4 samples, got {x.size}")
        if not np.all(np.isfinite(x)) or not np.all(np.isfinite(y)):
            raise InputError("table contains non-finite values")
        dx = np.diff(x)
        if np.any(dx <= 0):
            raise InputError("abscissae must be strictly increasing")
        dy = np.diff(y)
        if not (np.all(dy > 0) or np.all(dy < 0)):
            raise InputError("ordinates must be strictly monotone")
        x.flags.writeable = False
        y.flags.writeable = False
        object.__setattr__(self, "abscissa_um", x)
        object.__setattr__(self, "ordinate", y)
        object.__setattr__(self, "_interp", PchipInterpolator(x, y, extrapolate=False))

    @property
    def increasing(self) -> bool:
        return bool(self.ordinate[-1] > self.ordinate[0])

    def forward(self, x_um: float) -> float:
        """Interpolated ordinate at abscissa x_um; no extrapolation."""
        lo, hi = self.abscissa_um[0], self.abscissa_um[-1]
        if not lo <= x_um <= hi:
            raise DomainError(
                f"{self.kind}: abscissa {x_um} um outside table range [{lo}, {hi}] um"
            )
        return float(self._interp(x_um))

    def inverse(self, y_target: float) -> float:
        """Abscissa whose ordinate matches y_target, by bisection.

        Converges until the ordinate residual is below 1e-9 and the
        bracket is at floating-point resolution.
        """
        y0, y1 = float(self.ordinate[0]), float(self.ordinate[-1])
        lo_y, hi_y = min(y0, y1), max(y0, y1)
        if not lo_y <= y_target <= hi_y:
            raise DomainError(
                f"{self.kind}: target ordinate {y_target} outside table range [{lo_y}, {hi_y}]"
            )
        a, b = float(self.abscissa_um[0]), float(self.abscissa_um[-1])
        fa = y0 - y_target
        if fa == 0.0:
            return a
        for _ in range(200):
            mid = 0.5 * (a + b)
            fm = float(self._interp(mid)) - y_target
            if abs(fm) < _INVERSE_RESIDUAL_TOL and (b - a) <= 1e-12 * max(1.0, abs(mid)):
                return mid
            if (fm < 0) == (fa < 0):
                a, fa = mid, fm
            else:
                b = mid
            if a == b:
                break
        mid = 0.5 * (a + b)
        if abs(float(self._interp(mid)) - y_target) > _INVERSE_RESIDUAL_TOL:
            raise DomainError(f"{self.kind}: bisection failed to reach residual tolerance")
        return mid


def load_table(path) -> DispersionTable:
    """Parse a dispersion CSV: '# key=value' comments, then 'abscissa_um,ordinate' rows."""
    p = Path(path)
    if not p.is_file():
        raise InputError(f"table file not found: {p}")
    meta: dict[str, str] = {}
    rows: list[tuple[float, float]] = []
    header_seen = False
    for lineno, raw in enumerate(p.read_text().splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line.lstrip("#").strip()
            if "=" in body:
                key, _, value = body.partition("=")
                meta[key.strip()] = value.strip()
            continue
        if not header_seen:
            if line.replace(" ", "") != _CSV_HEADER:
                raise InputError(f"{p}:{lineno}: expected header {_CSV_HEADER!r}, got {line!r}")
            header_seen = True
            continue
        parts = line.split(",")
        if len(parts) != 2:
            raise InputError(f"{p}:{lineno}: expected two comma-separated values")
        try:
            rows.append((float(parts[0]), float(parts[1])))
        except ValueError as exc:
            raise InputError(f"{p}:{lineno}: {exc}") from exc
    if "kind" not in meta:
        raise InputError(f"{p}: missing '# kind=...' comment")
    wavelength = float(meta.get("wavelength_um", 1.55))
    data = np.array(rows, dtype=float).reshape(-1, 2)
    return DispersionTable(
        kind=meta["kind"],
        abscissa_um=data[:, 0],
        ordinate=data[:, 1],
        wavelength_um=wavelength,
    )


def _require_kind(table: DispersionTable, kind: str):
    if table.kind != kind:
        raise InputError(f"expected a {kind} table, got {table.kind}")


def beta_from_width(table: DispersionTable, width_um: float) -> float:
    """Propagation constant (rad/mm) at a waveguide width."""
    _require_kind(table, "beta_vs_width")
    return table.forward(width_um)


def kappa_from_gap(table: DispersionTable, gap_um: float) -> float:
    """Coupling rate (1/mm) at an edge-to-edge gap."""
    _require_kind(table, "kappa_vs_gap")
    return table.forward(gap_um)


def width_from_beta(table: DispersionTable, beta_target: float) -> float:
    _require_kind(table, "beta_vs_width")
    return table.inverse(beta_target)


def gap_from_kappa(table: DispersionTable, kappa_target: float) -> float:
    _require_kind(table, "kappa_vs_gap")
    return table.inverse(kappa_target)


def default_table_path(kind: str) -> Path:
    """Path of the packaged synthetic table for the given kind."""
    if kind not in TABLE_KINDS:
        raise InputError(f"table kind must be one of {TABLE_KINDS}, got {kind!r}")
    return Path(str(importlib.resources.files("walkgate.data") / f"{kind}.csv"))


def default_tables(table_dir=None) -> tuple[DispersionTable, DispersionTable]:
    """(beta, kappa) tables from a directory, or the packaged synthetic ones.

    The packaged tables are synthetic, physically plausible curves meant
    as swappable placeholders for solver output; see the data directory.
    """
    if table_dir is None:
        return (
            load_table(default_table_path("beta_vs_width")),
            load_table(default_table_path("kappa_vs_gap")),
        )
    d = Path(table_dir)
    return (
        load_table(d / "beta_vs_width.csv"),
        load_table(d / "kappa_vs_gap.csv"),
    )


@dataclass(frozen=True)
class GeometrySpec:
    """Solved array geometry: widths, gaps, length, and the reference mode."""

    widths_um: np.ndarray
    gaps_um: np.ndarray
    length_um: float
    reference_mode: int = 0
    decouple_gap_um: float = DEFAULT_DECOUPLE_GAP_UM

    def __post_init__(self):
        w = np.asarray(self.widths_um, dtype=float)
        g = np.asarray(self.gaps_um, dtype=float)
        if w.ndim != 1 or w.size < 2 or g.shape != (w.size - 1,):
            raise InputError(
                f"need N widths and N-1 gaps, got {w.shape} widths and {g.shape} gaps"
            )
        if w.min() <= 0 or g.min() <= 0 or self.length_um <= 0:
            raise InputError("widths, gaps, and length must be positive")
        if not 0 <= self.reference_mode < w.size:
            raise InputError(f"reference_mode out of range: {self.reference_mode}")
        w.flags.writeable = False
        g.flags.writeable = False
        object.__setattr__(self, "widths_um", w)
        object.__setattr__(self, "gaps_um", g)

    @property
    def n_modes(self) -> int:
        return self.widths_um.size


def _tridiagonal_parts(ht) -> tuple[np.ndarray, np.ndarray]:
    if isinstance(ht, Hamiltonian):
        return ht.beta.copy(), ht.kappa.copy()
    m = dense_hamiltonian(ht)
    site = np.diag(m).copy()
    hop = np.diag(m, 1).copy()
    off = m - np.diag(site)
    idx = np.arange(m.shape[0] - 1)
    off[idx, idx + 1] = 0.0
    off[idx + 1, idx] = 0.0
    if np.abs(off).max() > 0:
        raise InputError("target Hamiltonian must be tridiagonal")
    return site, hop


def synthesize_geometry(
    ht_target,
    length_um: float,
    beta_table: DispersionTable,
    kappa_table: DispersionTable,
    reference_mode: int = 0,
    reference_width_um: float = 1.5,
    decouple_gap_um: float = DEFAULT_DECOUPLE_GAP_UM,
) -> GeometrySpec:
    """Solve widths and gaps so that h(geometry) * L matches the target.

    On-site targets are realized as width offsets relative to the reference
    waveguide, whose width is prescribed; a global shift of the diagonal is
    an unobservable phase, so only differences to the reference mode count.
    Coupling targets use magnitudes: the sign of a hopping term is a gauge
    choice (a diagonal +-1 relabeling), while physical evanescent coupling
    is positive. Zero coupling targets get the decoupling gap.
    """
    if length_um <= 0:
        raise InputError(f"length must be positive, got {length_um}")
    site, hop = _tridiagonal_parts(ht_target)
    n = site.size
    if not 0 <= reference_mode < n:
        raise InputError(f"reference_mode out of range: {reference_mode}")
    length_mm = length_um / 1000.0
    beta_ref = beta_from_width(beta_table, reference_width_um)

    widths = np.empty(n)
    for i in range(n):
        if i == reference_mode:
            widths[i] = reference_width_um
            continue
        target = beta_ref + (site[i] - site[reference_mode]) / length_mm
        try:
            widths[i] = width_from_beta(beta_table, target)
        except DomainError as exc:
            raise DomainError(f"beta target for mode {i} infeasible: {exc}") from exc

    gaps = np.empty(n - 1)
    for m in range(n - 1):
        kappa_target = abs(hop[m]) / length_mm
        if kappa_target < 1e-12:
            gaps[m] = decouple_gap_um
            continue
        try:
            gaps[m] = gap_from_kappa(kappa_table, kappa_target)
        except DomainError as exc:
            raise DomainError(f"kappa target for pair ({m},{m + 1}) infeasible: {exc}") from exc

    return GeometrySpec(
        widths_um=widths,
        gaps_um=gaps,
        length_um=length_um,
        reference_mode=reference_mode,
        decouple_gap_um=decouple_gap_um,
    )


def hamiltonian_from_geometry(
    geom: GeometrySpec,
    beta_table: DispersionTable,
    kappa_table: DispersionTable,
) -> Hamiltonian:
    """Forward model: geometry to the Hamiltonian-length product h*L.

    The diagonal is reference-subtracted, off-diagonal couplings carry the
    negative sign convention, and any gap at or beyond the decoupling gap
    maps to exactly zero coupling rather than interpolating the far tail.
    """
    length_mm = geom.length_um / 1000.0
    beta_ref = beta_from_width(beta_table, float(geom.widths_um[geom.reference_mode]))
    site = np.array(
        [(beta_from_width(beta_table, float(w)) - beta_ref) * length_mm for w in geom.widths_um]
    )
    hop = np.empty(geom.n_modes - 1)
    for m, gap in enumerate(geom.gaps_um):
        if gap >= geom.decouple_gap_um:
            hop[m] = 0.0
        else:
            hop[m] = -kappa_from_gap(kappa_table, float(gap)) * length_mm
    return build_hamiltonian(site, hop)


@dataclass(frozen=True)
class SweepResult:
    """Fidelity statistics of a geometry-jitter Monte Carlo run."""

    fidelities: np.ndarray
    mean: float
    std: float
    min: float
    n_trials: int
    n_skipped: int
    seed: int


def perturbation_sweep(
    geom: GeometrySpec,
    beta_table: DispersionTable,
    kappa_table: DispersionTable,
    sigma_width_um: float,
    sigma_gap_um: float,
    n_trials: int,
    seed: int,
) -> SweepResult:
    """Gaussian fabrication jitter on widths and gaps, scored by gate fidelity.

    Each trial perturbs the geometry, rebuilds the walk, and compares the
    x=1 transfer matrix against the unperturbed one (same encoding). Gaps
    at the decoupling value are left alone: that pair is designed to be
    insensitive. Trials whose jittered geometry leaves a table's range are
    skipped and counted. Deterministic for a fixed seed.
    """
    if n_trials < 1:
        raise InputError(f"n_trials must be at least 1, got {n_trials}")
    if sigma_width_um < 0 or sigma_gap_um < 0:
        raise InputError("jitter sigmas must be nonnegative")
    ht0 = hamiltonian_from_geometry(geom, beta_table, kappa_table)
    u0 = unitary(ht0, 1.0)
    enc = find_encoding(u0)
    ref = logical_transfer_matrix(u0, enc, x=1.0).probs

    coupled = geom.gaps_um < geom.decouple_gap_um
    rng = np.random.default_rng(seed)
    fids = []
    skipped = 0
    for _ in range(n_trials):
        dw = rng.normal(0.0, sigma_width_um, geom.n_modes) if sigma_width_um > 0 else 0.0
        dg = rng.normal(0.0, sigma_gap_um, geom.n_modes - 1) if sigma_gap_um > 0 else 0.0
        gaps = geom.gaps_um + np.where(coupled, dg, 0.0)
        try:
            trial_geom = GeometrySpec(
                widths_um=geom.widths_um + dw,
                gaps_um=gaps,
                length_um=geom.length_um,
                reference_mode=geom.reference_mode,
                decouple_gap_um=geom.decouple_gap_um,
            )
            ht = hamiltonian_from_geometry(trial_geom, beta_table, kappa_table)
        except (DomainError, InputError):
            skipped += 1
            continue
        probs = logical_transfer_matrix(unitary(ht, 1.0), enc, x=1.0).probs
        fids.append(fidelity(probs, ref))

    fid_arr = np.array(fids)
    if fid_arr.size == 0:
        raise DomainError("all perturbation trials left the table range; nothing to report")
    return SweepResult(
        fidelities=fid_arr,
        mean=float(fid_arr.mean()),
        std=float(fid_arr.std()),
        min=float(fid_arr.min()),
        n_trials=n_trials,
        n_skipped=skipped,
        seed=seed,
    )
