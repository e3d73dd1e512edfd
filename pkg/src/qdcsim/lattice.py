"""Single-excitation Hamiltonians for chain, grid and six-site-coupler devices.

Every device is a set of identical sites with uniform on-site energy ``epsilon``
and real (possibly signed) couplings between pairs of sites.  With exactly one
excitation present the dynamics live in a space spanned by one basis vector per
site, so a device is fully described by a real symmetric matrix.

Sites are labelled ``(row, col)`` with 1-based indices.  Row 1 is the source
channel, row ``M`` the drain channel, and anything in between belongs to the
coupler.  Basis ordering is row-major: ``index = (row - 1) * N + (col - 1)``.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Any, Hashable, Sequence

import numpy as np

DEVICES = ("chain", "grid", "coupler")


@dataclass(frozen=True, order=True)
class SiteLabel:
    row: int
    col: int

    def __post_init__(self):
        if self.row < 1 or self.col < 1:
            raise ValueError(f"site indices are 1-based, got {self.row, self.col}")

    def index(self, n_cols: int) -> int:
        return (self.row - 1) * n_cols + (self.col - 1)

    def name(self, n_rows: int) -> str:
        """Short column name used in CSV headers: ``s3``, ``d3`` or ``r2c3``."""
        if self.row == 1:
            return f"s{self.col}"
        if self.row == n_rows:
            return f"d{self.col}"
        return f"r{self.row}c{self.col}"


@dataclass(frozen=True)
class DeviceConfig:
    """One device instance.

    ``device`` selects which controls are meaningful: ``grid`` uses ``k`` and
    ``coupler`` uses ``g`` and ``kappa``.  A chain has no control at all.
    """

    device: str
    n_cols: int
    n_rows: int = 1
    omega: float = 1.0
    epsilon: float = 0.0
    k: float | None = None
    g: float | None = None
    kappa: float | None = None

    def __post_init__(self):
        if self.device not in DEVICES:
            raise ValueError(f"unknown device {self.device!r}; expected one of {DEVICES}")
        if self.n_cols < 2:
            raise ValueError(f"need at least 2 sites per channel, got N={self.n_cols}")
        if self.n_rows < 1:
            raise ValueError(f"need at least one row, got M={self.n_rows}")
        if not (math.isfinite(self.omega) and self.omega > 0):
            raise ValueError(f"omega must be a positive finite number, got {self.omega}")
        if not math.isfinite(self.epsilon):
            raise ValueError("epsilon must be finite")

        if self.device == "chain":
            if self.n_rows != 1:
                raise ValueError("a chain has exactly one row")
            self._forbid("k", "g", "kappa")
        elif self.device == "grid":
            if self.n_rows < 2:
                raise ValueError(f"a grid device needs M >= 2, got M={self.n_rows}")
            self._require("k")
            self._forbid("g", "kappa")
        else:
            if self.n_rows != 2:
                raise ValueError("the six-site coupler joins exactly two channels (M=2)")
            if self.n_cols % 2 == 0 or self.n_cols <= 3:
                raise ValueError(f"the coupler needs odd N > 3, got N={self.n_cols}")
            self._require("g", "kappa")
            self._forbid("k")

    def _require(self, *names):
        for name in names:
            value = getattr(self, name)
            if value is None or not math.isfinite(value):
                raise ValueError(f"{self.device} device needs a finite {name!r}")

    def _forbid(self, *names):
        for name in names:
            if getattr(self, name) is not None:
                raise ValueError(f"{name!r} is not a control of the {self.device} device")

    @property
    def dim(self) -> int:
        return self.n_rows * self.n_cols

    @property
    def transfer_time(self) -> float:
        return math.pi / (2 * self.omega)

    def basis(self) -> tuple[SiteLabel, ...]:
        return tuple(
            SiteLabel(i, j)
            for i in range(1, self.n_rows + 1)
            for j in range(1, self.n_cols + 1)
        )

    def check_label(self, label: SiteLabel) -> None:
        if not (1 <= label.row <= self.n_rows and 1 <= label.col <= self.n_cols):
            raise ValueError(f"{label} is outside the {self.n_rows}x{self.n_cols} device")

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "device": self.device,
            "n_cols": self.n_cols,
            "n_rows": self.n_rows,
            "omega": self.omega,
            "epsilon": self.epsilon,
        }
        if self.device == "grid":
            out["K"] = self.k
        elif self.device == "coupler":
            out["g"] = self.g
            out["kappa"] = self.kappa
        return out


@dataclass(frozen=True, eq=False)
class ExcitationHamiltonian:
    """A Hamiltonian restricted to the one-excitation sector.

    ``matrix`` is stored read-only; ``basis`` gives the label of each row.
    """

    basis: tuple[Hashable, ...]
    matrix: np.ndarray
    builder: str
    config: Any = None
    _index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        matrix = np.array(self.matrix)
        if matrix.shape != (len(self.basis), len(self.basis)):
            raise ValueError(f"matrix shape {matrix.shape} does not match basis size {len(self.basis)}")
        matrix.setflags(write=False)
        object.__setattr__(self, "matrix", matrix)
        object.__setattr__(self, "basis", tuple(self.basis))
        object.__setattr__(self, "_index", {label: a for a, label in enumerate(self.basis)})
        if len(self._index) != len(self.basis):
            raise ValueError("basis labels must be unique")

    @property
    def dim(self) -> int:
        return len(self.basis)

    def index(self, label: Hashable) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise ValueError(f"{label!r} is not in the basis of this {self.builder} Hamiltonian") from None


def pst_coupling(j: int, n_cols: int, omega: float) -> float:
    """Engineered coupling between sites ``j`` and ``j+1`` of a perfect-transfer chain."""
    if not 1 <= j <= n_cols - 1:
        raise ValueError(f"bond index j={j} outside 1..{n_cols - 1}")
    return omega * math.sqrt((n_cols - j) * j)


def _set_pair(h: np.ndarray, a: int, b: int, value: float) -> None:
    h[a, b] = value
    h[b, a] = value


def build_chain(config: DeviceConfig) -> ExcitationHamiltonian:
    if config.device != "chain":
        raise ValueError(f"build_chain needs a chain config, got {config.device!r}")
    n = config.n_cols
    h = np.zeros((n, n))
    np.fill_diagonal(h, config.epsilon)
    for j in range(1, n):
        _set_pair(h, j - 1, j, pst_coupling(j, n, config.omega))
    return ExcitationHamiltonian(config.basis(), h, "build_chain", config)


def build_grid_qdc(config: DeviceConfig) -> ExcitationHamiltonian:
    """M x N grid: PST couplings along each row, ``K*sqrt(i(M-i))`` between rows i, i+1."""
    if config.device != "grid":
        raise ValueError(f"build_grid_qdc needs a grid config, got {config.device!r}")
    m, n = config.n_rows, config.n_cols
    h = np.zeros((m * n, m * n))
    np.fill_diagonal(h, config.epsilon)
    for i in range(1, m + 1):
        for j in range(1, n):
            _set_pair(h, SiteLabel(i, j).index(n), SiteLabel(i, j + 1).index(n),
                      pst_coupling(j, n, config.omega))
    for i in range(1, m):
        vertical = config.k * math.sqrt(i * (m - i))
        for j in range(1, n + 1):
            _set_pair(h, SiteLabel(i, j).index(n), SiteLabel(i + 1, j).index(n), vertical)
    return ExcitationHamiltonian(config.basis(), h, "build_grid_qdc", config)


def coupler_columns(n_cols: int) -> tuple[int, int, int]:
    """Columns ``(j_minus, j_centre, j_plus)`` occupied by the six-site coupler."""
    centre = (n_cols + 1) // 2
    return centre - 1, centre, centre + 1


def build_coupler_qdc(config: DeviceConfig) -> ExcitationHamiltonian:
    """Two PST channels joined by the six-site coupler around the middle column.

    Inside the coupler both channels use the bond ``g`` on (j-, jc) and (jc, j+).
    Cross couplings are ``+kappa`` from source to drain along increasing column
    and ``-kappa`` from drain to source, so the two coupler paths pick up
    opposite signs and interfere.
    """
    if config.device != "coupler":
        raise ValueError(f"build_coupler_qdc needs a coupler config, got {config.device!r}")
    n = config.n_cols
    jm, jc, jp = coupler_columns(n)
    s, d = 1, 2

    h = np.zeros((2 * n, 2 * n))
    np.fill_diagonal(h, config.epsilon)
    for i in (s, d):
        for j in range(1, n):
            value = config.g if j in (jm, jc) else pst_coupling(j, n, config.omega)
            _set_pair(h, SiteLabel(i, j).index(n), SiteLabel(i, j + 1).index(n), value)

    kappa = config.kappa
    cross = [
        (SiteLabel(s, jm), SiteLabel(d, jc), kappa),
        (SiteLabel(d, jm), SiteLabel(s, jc), -kappa),
        (SiteLabel(s, jc), SiteLabel(d, jp), kappa),
        (SiteLabel(d, jc), SiteLabel(s, jp), -kappa),
    ]
    for a, b, value in cross:
        _set_pair(h, a.index(n), b.index(n), value)
    return ExcitationHamiltonian(config.basis(), h, "build_coupler_qdc", config)


_BUILDERS = {"chain": build_chain, "grid": build_grid_qdc, "coupler": build_coupler_qdc}


def build_device(config: DeviceConfig) -> ExcitationHamiltonian:
    return _BUILDERS[config.device](config)


def kronecker_sum(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """``a (+) b = a x I + I x b``; the first factor indexes the slow (row) coordinate."""
    return np.kron(a, np.eye(b.shape[0])) + np.kron(np.eye(a.shape[0]), b)


def channel_names(config: DeviceConfig, basis: Sequence[SiteLabel] | None = None) -> list[str]:
    basis = config.basis() if basis is None else basis
    return [label.name(config.n_rows) for label in basis]


# JSON config ---------------------------------------------------------------

_LATTICE_KEYS = {
    "chain": {"device", "n_cols", "n_rows", "omega", "epsilon"},
    "grid": {"device", "n_cols", "n_rows", "omega", "epsilon", "K"},
    "coupler": {"device", "n_cols", "n_rows", "omega", "epsilon", "g", "kappa"},
}


def config_from_dict(doc: dict[str, Any]) -> DeviceConfig:
    if not isinstance(doc, dict):
        raise ValueError("config must be a JSON object")
    device = doc.get("device")
    if device not in _LATTICE_KEYS:
        raise ValueError(f"unknown device {device!r}")
    unknown = set(doc) - _LATTICE_KEYS[device]
    if unknown:
        raise ValueError(f"unknown keys for {device} config: {sorted(unknown)}")
    if "n_cols" not in doc:
        raise ValueError("config is missing 'n_cols'")

    default_rows = {"chain": 1, "grid": 2, "coupler": 2}[device]
    return DeviceConfig(
        device=device,
        n_cols=_as_int(doc["n_cols"], "n_cols"),
        n_rows=_as_int(doc.get("n_rows", default_rows), "n_rows"),
        omega=_as_float(doc.get("omega", 1.0), "omega"),
        epsilon=_as_float(doc.get("epsilon", 0.0), "epsilon"),
        k=_as_float(doc["K"], "K") if "K" in doc else None,
        g=_as_float(doc["g"], "g") if "g" in doc else None,
        kappa=_as_float(doc["kappa"], "kappa") if "kappa" in doc else None,
    )


def _as_int(value, key):
    if isinstance(value, bool) or not isinstance(value, int):
        raise ValueError(f"{key!r} must be an integer, got {value!r}")
    return value


def _as_float(value, key):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ValueError(f"{key!r} must be a number, got {value!r}")
    return float(value)


def load_config(path) -> DeviceConfig:
    with open(path) as fh:
        return config_from_dict(json.load(fh))
