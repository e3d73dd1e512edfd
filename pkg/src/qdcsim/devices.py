"""Named routing scenarios and switching sweeps built on the lattice and spin models."""
from __future__ import annotations

import dataclasses
import json
import math
from dataclasses import dataclass
from typing import Hashable, NamedTuple, Sequence, Union

from .evolution import EvolutionTrace, QuantumState, diagonalize, trace, transfer_fidelity
from .lattice import DeviceConfig, ExcitationHamiltonian, SiteLabel, build_device, config_from_dict
from .spin import SpinKet, SpinModelConfig, SpinQuantum, build_spin_model, spin_config_from_dict

AnyConfig = Union[DeviceConfig, SpinModelConfig]

SCENARIO_NAMES = (
    "chain-pst",
    "grid-source",
    "grid-drain",
    "spin-yy",
    "coupler-source",
    "coupler-drain",
)
DEFAULT_TOLERANCE = 1e-6


@dataclass(frozen=True)
class Scenario:
    name: str
    config: AnyConfig
    input: Hashable
    expected_output: Hashable
    expected_time: float
    claim: str
    expected_fidelity: float = 1.0
    tolerance: float = DEFAULT_TOLERANCE
    # retry with K -> -K when the stated sign misses the target
    allow_sign_flip: bool = False

    def __post_init__(self):
        if not self.expected_time > 0:
            raise ValueError(f"{self.name}: expected_time must be positive")
        self.config.check_label(self.input)
        self.config.check_label(self.expected_output)

    @property
    def threshold(self) -> float:
        return self.expected_fidelity - self.tolerance


class ScenarioResult(NamedTuple):
    fidelity: float
    trace: EvolutionTrace
    scenario: Scenario  # the scenario actually run; differs from the input only after a sign flip

    @property
    def passed(self) -> bool:
        return self.fidelity >= self.scenario.threshold


class SweepRow(NamedTuple):
    control: float
    f_source: float
    f_drain: float


def build_hamiltonian(config: AnyConfig) -> ExcitationHamiltonian:
    if isinstance(config, SpinModelConfig):
        return build_spin_model(config)
    return build_device(config)


def config_from_document(doc: dict) -> AnyConfig:
    if isinstance(doc, dict) and str(doc.get("device", "")).startswith("am-"):
        return spin_config_from_dict(doc)
    return config_from_dict(doc)


def load_config(path) -> AnyConfig:
    with open(path) as fh:
        return config_from_document(json.load(fh))


def coupler_controls(n_cols: int, ratio: float, omega: float = 1.0) -> tuple[float, float]:
    """``(g, kappa)`` with ``kappa/g = ratio`` on the circle g^2 + kappa^2 = omega^2 (N^2-1)/4.

    ``ratio=0`` gives the source-routing setting g = omega sqrt((N^2-1)/4), kappa = 0,
    and ``ratio=1`` the drain-routing setting g = kappa = omega sqrt((N^2-1)/8).
    """
    radius = omega * math.sqrt((n_cols**2 - 1) / 4)
    g = radius / math.sqrt(1 + ratio**2)
    return g, ratio * g


def get_scenario(name: str, n: int = 7, m: int = 2, omega: float = 1.0) -> Scenario:
    """Build one named routing claim for channels of ``n`` sites and ``m`` grid rows.

    ``m`` only affects the grid entries; spin-yy has fixed sizes.
    """
    tau = math.pi / (2 * omega)
    src = SiteLabel(1, 1)

    if name == "chain-pst":
        return Scenario(name, DeviceConfig("chain", n, 1, omega), src, SiteLabel(1, n), tau,
                        "engineered chain moves the excitation end to end at tau")
    if name == "grid-source":
        return Scenario(name, DeviceConfig("grid", n, m, omega, k=0.0), src, SiteLabel(1, n), tau,
                        "uncoupled grid rows keep the excitation in the source channel")
    if name == "grid-drain":
        return Scenario(name, DeviceConfig("grid", n, m, omega, k=omega), src, SiteLabel(m, n), tau,
                        "grid with K = omega rotates both spins and delivers to the drain output")
    if name == "spin-yy":
        yy = SpinModelConfig(SpinQuantum(2), SpinQuantum(1), omega, -4 * omega,
                             coupling_form="yy-product")
        return Scenario(name, yy, SpinKet(-1, -2), SpinKet(1, 2), tau / math.sqrt(2),
                        "spin-1/2 x spin-1 with K Jy Jy coupling, K = -4 omega, "
                        "flips both spins at tau/sqrt(2)",
                        allow_sign_flip=True)
    if name == "coupler-source":
        g, kappa = coupler_controls(n, 0.0, omega)
        return Scenario(name, DeviceConfig("coupler", n, 2, omega, g=g, kappa=kappa),
                        src, SiteLabel(1, n), tau,
                        "six-site coupler with kappa = 0 acts as two independent PST channels")
    if name == "coupler-drain":
        g, kappa = coupler_controls(n, 1.0, omega)
        return Scenario(name, DeviceConfig("coupler", n, 2, omega, g=g, kappa=kappa),
                        src, SiteLabel(2, n), tau,
                        "six-site coupler with g = kappa routes the excitation to the drain output")
    raise KeyError(f"unknown scenario {name!r}; expected one of {SCENARIO_NAMES}")


def scenario_catalog(n: int = 7, m: int = 2, omega: float = 1.0) -> list[Scenario]:
    """All six routing claims.  The coupler entries need odd ``n > 3``."""
    return [get_scenario(name, n, m, omega) for name in SCENARIO_NAMES]


def flip_sign(s: Scenario) -> Scenario:
    config = dataclasses.replace(s.config, k=-s.config.k)
    return dataclasses.replace(s, config=config)


def _run_once(s: Scenario, steps: int) -> ScenarioResult:
    p = diagonalize(build_hamiltonian(s.config))
    psi0 = QuantumState.localized(p.basis, s.input)
    fidelity = transfer_fidelity(p, s.input, s.expected_output, s.expected_time)
    return ScenarioResult(fidelity, trace(p, psi0, s.expected_time, steps), s)


def run_scenario(s: Scenario, steps: int = 200) -> ScenarioResult:
    """Evolve to ``s.expected_time`` and report fidelity with the expected output.

    With ``allow_sign_flip`` a miss is retried with the coupling sign reversed;
    the returned ``scenario`` records which sign was used.
    """
    result = _run_once(s, steps)
    if result.passed or not s.allow_sign_flip:
        return result
    flipped = _run_once(flip_sign(s), steps)
    return flipped if flipped.fidelity > result.fidelity else result


def switching_sweep(family: str, n: int, control_grid: Sequence[float],
                    omega: float = 1.0, m: int = 2) -> list[SweepRow]:
    """Port fidelities at tau as the inter-channel control is varied.

    ``grid``: control is K/omega.  ``coupler``: control is kappa/g along
    :func:`coupler_controls`, so 0 and 1 hit the two routing settings.
    """
    controls = [float(c) for c in control_grid]
    if not controls:
        raise ValueError("control grid is empty")
    if not all(math.isfinite(c) for c in controls):
        raise ValueError("control grid must be finite")
    if family not in ("grid", "coupler"):
        raise ValueError(f"unknown sweep family {family!r}")

    tau = math.pi / (2 * omega)
    rows = []
    for c in controls:
        if family == "grid":
            config = DeviceConfig("grid", n, m, omega, k=c * omega)
        else:
            g, kappa = coupler_controls(n, c, omega)
            config = DeviceConfig("coupler", n, 2, omega, g=g, kappa=kappa)
        p = diagonalize(build_device(config))
        source, drain = SiteLabel(1, n), SiteLabel(config.n_rows, n)
        rows.append(SweepRow(
            c,
            transfer_fidelity(p, SiteLabel(1, 1), source, tau),
            transfer_fidelity(p, SiteLabel(1, 1), drain, tau),
        ))
    return rows
