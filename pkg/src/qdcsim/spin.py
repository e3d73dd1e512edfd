"""Angular-momentum picture of the coupler devices.

A channel of N sites maps onto a spin J_h = (N-1)/2 via m_h = j - (N+1)/2, and
the M rows map onto a second spin J_v = (M-1)/2 via m_v = i - (M+1)/2.  Half
integers are stored doubled (``two_j``, ``two_m``) so basis labels stay exact.

Spin matrices use the Condon-Shortley convention in the basis ordered by
increasing m.  With that ordering the composite basis |m_v> (x) |m_h> coincides
with the row-major site ordering of :mod:`qdcsim.lattice`.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .lattice import DeviceConfig, ExcitationHamiltonian, SiteLabel

FORMS = ("separable-x", "yy-product")


@dataclass(frozen=True)
class SpinQuantum:
    two_j: int

    def __post_init__(self):
        if isinstance(self.two_j, bool) or not isinstance(self.two_j, int) or self.two_j < 0:
            raise ValueError(f"two_j must be a nonnegative integer, got {self.two_j!r}")

    @classmethod
    def from_sites(cls, n_sites: int) -> "SpinQuantum":
        return cls(n_sites - 1)

    @property
    def j(self) -> float:
        return self.two_j / 2

    @property
    def dim(self) -> int:
        return self.two_j + 1

    def two_ms(self) -> range:
        return range(-self.two_j, self.two_j + 1, 2)


def _half(two_x: int) -> str:
    return str(two_x // 2) if two_x % 2 == 0 else f"{two_x}/2"


@dataclass(frozen=True, order=True)
class SpinKet:
    """Product ket |J_v, m_v; J_h, m_h>, projections stored doubled."""

    two_m_v: int
    two_m_h: int

    @property
    def name(self) -> str:
        return f"v{_half(self.two_m_v)}_h{_half(self.two_m_h)}"


@dataclass(frozen=True)
class SpinModelConfig:
    j_h: SpinQuantum
    j_v: SpinQuantum
    omega: float = 1.0
    k: float = 0.0
    eps_h: float = 0.0
    eps_v: float = 0.0
    coupling_form: str = "separable-x"

    def __post_init__(self):
        if self.coupling_form not in FORMS:
            raise ValueError(f"unknown coupling form {self.coupling_form!r}; expected one of {FORMS}")
        for name in ("omega", "k", "eps_h", "eps_v"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")

    @property
    def is_extrapolation(self) -> bool:
        """True for a yy-product model other than J_v=1/2, J_h=1."""
        return self.coupling_form == "yy-product" and (self.j_v.two_j, self.j_h.two_j) != (1, 2)

    @property
    def transfer_time(self) -> float:
        return math.pi / (2 * self.omega)

    def basis(self) -> tuple[SpinKet, ...]:
        return tuple(SpinKet(mv, mh) for mv in self.j_v.two_ms() for mh in self.j_h.two_ms())

    def check_label(self, label) -> None:
        if label not in self.basis():
            raise ValueError(f"{label!r} is not a valid ket for this spin model")

    def to_dict(self) -> dict:
        return {
            "device": "am-separable" if self.coupling_form == "separable-x" else "am-yy",
            "n_cols": self.j_h.dim,
            "n_rows": self.j_v.dim,
            "omega": self.omega,
            "K": self.k,
            "eps_h": self.eps_h,
            "eps_v": self.eps_v,
        }


def spin_matrices(j: SpinQuantum):
    """Return ``(Jx, Jy, Jz, Jsq)`` for spin ``j`` in the increasing-m basis."""
    two_ms = np.arange(-j.two_j, j.two_j + 1, 2)
    m = two_ms / 2
    jj = j.j * (j.j + 1)
    # <m+1|J+|m> = sqrt(J(J+1) - m(m+1))
    raising = np.diag(np.sqrt(jj - m[:-1] * (m[:-1] + 1)), k=-1)
    lowering = raising.T
    jx = (raising + lowering).astype(complex) / 2
    jy = (raising - lowering) / 2j
    jz = np.diag(m)
    jsq = jj * np.eye(j.dim)
    return jx, jy, jz, jsq


def to_spin_index(label: SiteLabel, config: DeviceConfig) -> tuple[int, int]:
    """Map a site to doubled projections ``(2 m_v, 2 m_h)``.

    Row 1 (source) lands on m_v = -J_v and row M (drain) on m_v = +J_v.
    """
    config.check_label(label)
    return 2 * label.row - (config.n_rows + 1), 2 * label.col - (config.n_cols + 1)


def from_spin_index(two_m_v: int, two_m_h: int, config: DeviceConfig) -> SiteLabel:
    row2, col2 = two_m_v + config.n_rows + 1, two_m_h + config.n_cols + 1
    if row2 % 2 or col2 % 2:
        raise ValueError("projection has the wrong half-integer class for this device")
    label = SiteLabel(row2 // 2, col2 // 2)
    config.check_label(label)
    return label


def site_permutation(config: DeviceConfig) -> list[int]:
    """For each spin-basis position, the index of the matching site."""
    n = config.n_cols
    return [
        from_spin_index(ket.two_m_v, ket.two_m_h, config).index(n)
        for ket in spin_config_for(config).basis()
    ]


def spin_config_for(config: DeviceConfig, coupling_form: str = "separable-x") -> SpinModelConfig:
    """Spin model with the same channel/row sizes as ``config``.

    The Casimir weights are chosen so the J_h^2 term carries the whole on-site
    energy, i.e. eps_h = epsilon / (J_h (J_h + 1)) and eps_v = 0.
    """
    j_h = SpinQuantum.from_sites(config.n_cols)
    j_v = SpinQuantum.from_sites(config.n_rows)
    eps_h = config.epsilon / (j_h.j * (j_h.j + 1))
    return SpinModelConfig(j_h, j_v, config.omega, config.k or 0.0, eps_h, 0.0, coupling_form)


def casimir_shift(config: SpinModelConfig) -> float:
    """Constant diagonal contributed by eps_h J_h^2 + eps_v J_v^2."""
    jh, jv = config.j_h.j, config.j_v.j
    return config.eps_h * jh * (jh + 1) + config.eps_v * jv * (jv + 1)


def _casimir_part(config: SpinModelConfig) -> np.ndarray:
    *_, jsq_h = spin_matrices(config.j_h)
    *_, jsq_v = spin_matrices(config.j_v)
    return (config.eps_h * np.kron(np.eye(config.j_v.dim), jsq_h)
            + config.eps_v * np.kron(jsq_v, np.eye(config.j_h.dim)))


def _real(matrix: np.ndarray, builder: str) -> np.ndarray:
    if np.any(matrix.imag != 0):
        raise ArithmeticError(f"{builder}: expected a real matrix in the m-basis")
    return np.ascontiguousarray(matrix.real)


def build_am_separable(config: SpinModelConfig) -> ExcitationHamiltonian:
    """eps_h J_h^2 + eps_v J_v^2 + 2 omega J_h,x + 2 K J_v,x on |m_v> (x) |m_h>."""
    if config.coupling_form != "separable-x":
        raise ValueError("build_am_separable needs coupling_form='separable-x'")
    jx_h = spin_matrices(config.j_h)[0]
    jx_v = spin_matrices(config.j_v)[0]
    eye_h, eye_v = np.eye(config.j_h.dim), np.eye(config.j_v.dim)
    h = (_casimir_part(config)
         + 2 * config.omega * np.kron(eye_v, jx_h)
         + 2 * config.k * np.kron(jx_v, eye_h))
    return ExcitationHamiltonian(config.basis(), _real(h, "build_am_separable"),
                                 "build_am_separable", config)


def build_am_yy(config: SpinModelConfig) -> ExcitationHamiltonian:
    """eps_h J_h^2 + eps_v J_v^2 + 2 omega J_h,x + K J_v,y J_h,y on |m_v> (x) |m_h>."""
    if config.coupling_form != "yy-product":
        raise ValueError("build_am_yy needs coupling_form='yy-product'")
    if config.is_extrapolation:
        warnings.warn(
            f"yy-product model with J_v={config.j_v.j}, J_h={config.j_h.j} is an extrapolation "
            "beyond the J_v=1/2, J_h=1 instance",
            stacklevel=2,
        )
    jx_h, jy_h, _, _ = spin_matrices(config.j_h)
    jy_v = spin_matrices(config.j_v)[1]
    eye_v = np.eye(config.j_v.dim)
    # Jy (x) Jy is a product of two imaginary factors, hence real
    h = (_casimir_part(config)
         + 2 * config.omega * np.kron(eye_v, jx_h)
         + config.k * np.kron(jy_v, jy_h))
    return ExcitationHamiltonian(config.basis(), _real(h, "build_am_yy"), "build_am_yy", config)


def build_spin_model(config: SpinModelConfig) -> ExcitationHamiltonian:
    if config.coupling_form == "separable-x":
        return build_am_separable(config)
    return build_am_yy(config)


def _two_m(m_final) -> int:
    doubled = Fraction(m_final) * 2
    if doubled.denominator != 1:
        raise ValueError(f"m={m_final!r} is neither integer nor half-integer")
    return int(doubled)


def wigner_amplitude(j: SpinQuantum, m_final, theta: float) -> float:
    """|d^J_{m,-J}(theta)|: amplitude to reach ``m_final`` from m = -J.

    Closed form ``sqrt(C(2J, J+m)) |cos(theta/2)|^(J-m) |sin(theta/2)|^(J+m)``.
    Pass ``m_final`` as an int, a ``Fraction`` or a float such as 0.5.
    """
    two_m = _two_m(m_final)
    if abs(two_m) > j.two_j or (j.two_j - two_m) % 2:
        raise ValueError(f"m={m_final} is not a projection of J={j.j}")
    up = (j.two_j + two_m) // 2    # J + m
    down = (j.two_j - two_m) // 2  # J - m
    c, s = abs(math.cos(theta / 2)), abs(math.sin(theta / 2))
    return math.sqrt(math.comb(j.two_j, up)) * c**down * s**up


_SPIN_KEYS = {"device", "n_cols", "n_rows", "omega", "K", "eps_h", "eps_v"}


def spin_config_from_dict(doc: dict) -> SpinModelConfig:
    device = doc.get("device")
    forms = {"am-separable": "separable-x", "am-yy": "yy-product"}
    if device not in forms:
        raise ValueError(f"unknown spin device {device!r}")
    unknown = set(doc) - _SPIN_KEYS
    if unknown:
        raise ValueError(f"unknown keys for {device} config: {sorted(unknown)}")
    defaults = {"am-separable": (None, 2), "am-yy": (3, 2)}[device]
    n_cols = doc.get("n_cols", defaults[0])
    n_rows = doc.get("n_rows", defaults[1])
    for key, value in (("n_cols", n_cols), ("n_rows", n_rows)):
        if isinstance(value, bool) or not isinstance(value, int) or value < 1:
            raise ValueError(f"{key!r} must be a positive integer, got {value!r}")
    numbers = {}
    for key, default in (("omega", 1.0), ("K", 0.0), ("eps_h", 0.0), ("eps_v", 0.0)):
        value = doc.get(key, default)
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ValueError(f"{key!r} must be a number, got {value!r}")
        numbers[key] = float(value)
    return SpinModelConfig(
        SpinQuantum.from_sites(n_cols), SpinQuantum.from_sites(n_rows),
        numbers["omega"], numbers["K"], numbers["eps_h"], numbers["eps_v"], forms[device],
    )
