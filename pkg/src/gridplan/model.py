"""Shared domain types, validation, and the capital-annualization primitive.

Everything here is an immutable value type: construction either succeeds and
yields an object safe to share across threads, or raises ``ValueError``.
``validate`` is the exception - it never raises, it returns a report.

Unit conventions used throughout the package: power in MW, energy in MWh on a
1-hour grid (so hourly energy equals average power numerically), money in
dollars. Capital costs are quoted per kW (or per kWh for storage energy) in
inputs and converted to per-MW / per-MWh once, at formulation time.
"""

from __future__ import annotations

import numbers
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

HOURS_PER_YEAR = 8760
HOURS_PER_DAY = 24

#: Heat-rate constant converting electrical MWh to fuel MMBTU at unit efficiency.
HEAT_RATE_MMBTU_PER_MWH = 3.412

_POTENTIAL_TOL = 1e-9


def _frozen_array(values) -> np.ndarray:
    arr = np.array(values, dtype=float)
    arr.setflags(write=False)
    return arr


def _freeze_series(mapping: Mapping[str, np.ndarray] | None):
    if mapping is None:
        return None
    return {k: _frozen_array(v) for k, v in mapping.items()}


@dataclass(frozen=True)
class NodeSpec:
    """Existing capacities, resource caps, and per-node operating limits."""

    id: str
    onshore_existing_mw: float = 0.0
    offshore_existing_mw: float = 0.0
    us_solar_existing_mw: float = 0.0
    btm_solar_existing_mw: float = 0.0
    gas_existing_mw: float = 0.0
    hydro_fixed_mw: float = 0.0
    hydro_flex_mw: float = 0.0
    hydro_flex_hourly_max_mwh: float = 0.0
    nuclear_mw: float = 0.0
    nuclear_gen_mwh_per_h: float = 0.0
    biofuel_mw: float = 0.0
    biofuel_daily_mwh: float = 0.0
    battery_energy_existing_mwh: float = 0.0
    battery_power_existing_mw: float = 0.0
    import_limit_mwh: float = 0.0
    onshore_max_mw: float = 0.0
    us_solar_max_mw: float = 0.0
    btm_fraction: float = 0.0
    existing_tx_flow_mwh: float = 0.0

    @property
    def eligible_existing_cap_mw(self) -> float:
        """Existing capacity subject to the fixed maintenance charge.

        Covers all existing hydro, nuclear, fossil, and biofuel capacity.
        """
        return (
            self.hydro_fixed_mw
            + self.hydro_flex_mw
            + self.nuclear_mw
            + self.gas_existing_mw
            + self.biofuel_mw
        )

    _CAPACITY_FIELDS = (
        "onshore_existing_mw",
        "offshore_existing_mw",
        "us_solar_existing_mw",
        "btm_solar_existing_mw",
        "gas_existing_mw",
        "hydro_fixed_mw",
        "hydro_flex_mw",
        "hydro_flex_hourly_max_mwh",
        "nuclear_mw",
        "nuclear_gen_mwh_per_h",
        "biofuel_mw",
        "biofuel_daily_mwh",
        "battery_energy_existing_mwh",
        "battery_power_existing_mw",
        "import_limit_mwh",
        "onshore_max_mw",
        "us_solar_max_mw",
        "existing_tx_flow_mwh",
    )


@dataclass(frozen=True)
class InterfaceSpec:
    """A transmission interface between two nodes.

    Existing limits may differ by direction; new capacity built on the
    interface raises both directional limits equally.
    """

    node_a: str
    node_b: str
    distance_mi: float
    existing_fwd_mw: float = 0.0  # flow limit a -> b
    existing_rev_mw: float = 0.0  # flow limit b -> a

    @property
    def key(self) -> str:
        return f"{self.node_a}:{self.node_b}"


@dataclass(frozen=True)
class NetworkSpec:
    nodes: tuple[NodeSpec, ...]
    interfaces: tuple[InterfaceSpec, ...]
    offshore_cap_total_mw: float = 0.0

    def __init__(self, nodes, interfaces=(), offshore_cap_total_mw=0.0):
        object.__setattr__(self, "nodes", tuple(nodes))
        object.__setattr__(self, "interfaces", tuple(interfaces))
        object.__setattr__(self, "offshore_cap_total_mw", float(offshore_cap_total_mw))

    @property
    def node_ids(self) -> list[str]:
        return [n.id for n in self.nodes]

    def node(self, node_id: str) -> NodeSpec:
        for n in self.nodes:
            if n.id == node_id:
                return n
        raise KeyError(node_id)


@dataclass(frozen=True)
class CostTable:
    """All cost inputs, keyed per node (or per interface for transmission).

    Capital costs are $/kW ($/kWh for storage energy); fixed O&M $/kW-yr
    ($/MW-yr for transmission); variable O&M and energy prices $/MWh; fuel
    $/MMBTU; ramping $/MW-h. A node may build a technology only when it
    appears in that technology's capital-cost map.

    ``ex_tx`` is quoted per MWh of the fixed historical annual interface
    flow; the product with that flow is treated as a plain $/yr charge.
    """

    cap_on: Mapping[str, float] = field(default_factory=dict)
    cap_off: Mapping[str, float] = field(default_factory=dict)
    cap_us_solar: Mapping[str, float] = field(default_factory=dict)
    cap_batt_e: Mapping[str, float] = field(default_factory=dict)
    cap_batt_p: Mapping[str, float] = field(default_factory=dict)
    cap_h2_e: Mapping[str, float] = field(default_factory=dict)
    cap_h2_p: Mapping[str, float] = field(default_factory=dict)
    cap_ff: Mapping[str, float] = field(default_factory=dict)
    cap_tx: Mapping[str, float] = field(default_factory=dict)
    omf_on: Mapping[str, float] = field(default_factory=dict)
    omf_off: Mapping[str, float] = field(default_factory=dict)
    omf_us_solar: Mapping[str, float] = field(default_factory=dict)
    omf_batt_e: Mapping[str, float] = field(default_factory=dict)
    omf_batt_p: Mapping[str, float] = field(default_factory=dict)
    omf_h2_e: Mapping[str, float] = field(default_factory=dict)
    omf_h2_p: Mapping[str, float] = field(default_factory=dict)
    omf_ff: Mapping[str, float] = field(default_factory=dict)
    omf_tx: Mapping[str, float] = field(default_factory=dict)
    omv_ff: float = 0.0
    c_ff: Mapping[str, float] = field(default_factory=dict)
    c_hydro: Mapping[str, float] = field(default_factory=dict)
    c_nuc: Mapping[str, float] = field(default_factory=dict)
    c_bio: Mapping[str, float] = field(default_factory=dict)
    c_imp: Mapping[str, float] = field(default_factory=dict)
    c_existing_ramp: float = 0.0
    c_new_ramp: float = 0.0
    ex_cap: Mapping[str, float] = field(default_factory=dict)
    ex_tx: Mapping[str, float] = field(default_factory=dict)
    nominal_storage_charge: float = 0.01
    nominal_tx_charge: float = 0.01

    _PER_NODE_FIELDS = (
        "cap_on", "cap_off", "cap_us_solar", "cap_batt_e", "cap_batt_p",
        "cap_h2_e", "cap_h2_p", "cap_ff", "omf_on", "omf_off",
        "omf_us_solar", "omf_batt_e", "omf_batt_p", "omf_h2_e", "omf_h2_p",
        "omf_ff", "c_ff", "c_hydro", "c_nuc", "c_bio", "c_imp", "ex_cap",
        "ex_tx",
    )
    _PER_IFACE_FIELDS = ("cap_tx", "omf_tx")
    _SCALAR_FIELDS = (
        "omv_ff", "c_existing_ramp", "c_new_ramp",
        "nominal_storage_charge", "nominal_tx_charge",
    )


@dataclass(frozen=True)
class TechParams:
    """Technology performance parameters and financial settings."""

    eta_ff_existing: float = 0.428
    eta_ff_new: float = 0.344
    eta_batt: float = 0.946
    eta_h2: float = 0.592
    eta_veh: float = 1.0
    kappa: float = 0.001
    tx_loss: float = 0.03
    reserve_margin: float = 0.189
    phi_batt_min: float = 0.25
    phi_batt_max: float = 0.25
    p_years: Mapping[str, int] = field(
        default_factory=lambda: {"generation": 20, "storage": 10,
                                 "transmission": 20}
    )
    interest_rate: float = 0.05
    n_years: float = 1.0

    _FRACTION_FIELDS = (
        "eta_ff_existing", "eta_ff_new", "eta_batt", "eta_h2", "eta_veh",
        "kappa", "tx_loss",
    )


@dataclass(frozen=True)
class TimeSeriesSet:
    """Hourly (and a few daily/monthly) input series, one array per node.

    Hourly arrays all share one length T. ``e_veh_daily_full`` and
    ``h_flex_daily`` are per-day arrays of length T/24; ``h_monthly`` is a
    per-month array used only when hydro arrives at monthly resolution.
    """

    d_elec: Mapping[str, np.ndarray]
    d_heat_full: Mapping[str, np.ndarray]
    w_on: Mapping[str, np.ndarray]
    w_off: Mapping[str, np.ndarray]
    w_us_solar: Mapping[str, np.ndarray]
    w_btm_solar: Mapping[str, np.ndarray]
    h_fix: Mapping[str, np.ndarray]
    nuclear: Mapping[str, np.ndarray]
    d_veh_full: Mapping[str, np.ndarray] | None = None
    e_veh_daily_full: Mapping[str, np.ndarray] | None = None
    h_flex_daily: Mapping[str, np.ndarray] | None = None
    h_monthly: Mapping[str, np.ndarray] | None = None

    _HOURLY_FIELDS = (
        "d_elec", "d_heat_full", "d_veh_full", "w_on", "w_off",
        "w_us_solar", "w_btm_solar", "h_fix", "nuclear",
    )
    _POTENTIAL_FIELDS = ("w_on", "w_off", "w_us_solar", "w_btm_solar")

    def __post_init__(self):
        for name in ("d_elec", "d_heat_full", "w_on", "w_off", "w_us_solar",
                     "w_btm_solar", "h_fix", "nuclear", "d_veh_full",
                     "e_veh_daily_full", "h_flex_daily", "h_monthly"):
            object.__setattr__(self, name, _freeze_series(getattr(self, name)))

    @property
    def n_hours(self) -> int:
        return len(next(iter(self.d_elec.values())))

    def modal_hours(self) -> int:
        """Most common hourly-series length; robust to one bad series."""
        lengths: dict[int, int] = {}
        for name in self._HOURLY_FIELDS:
            mapping = getattr(self, name)
            if mapping is None:
                continue
            for arr in mapping.values():
                lengths[len(arr)] = lengths.get(len(arr), 0) + 1
        return max(lengths, key=lambda n: (lengths[n], n))


@dataclass(frozen=True)
class EVFlexConfig:
    """Flexible-EV charging settings: daily window and flexibility split."""

    y_flex: float
    h_start: int
    h_end: int
    h_min: int = 4

    def __post_init__(self):
        if not 0.0 <= self.y_flex <= 1.0:
            raise ValueError(f"y_flex must be in [0, 1], got {self.y_flex}")
        if not (0 <= self.h_start <= self.h_end <= 23):
            raise ValueError(
                "charging window must satisfy 0 <= h_start <= h_end <= 23 "
                f"(windows crossing midnight are not supported), got "
                f"[{self.h_start}, {self.h_end}]"
            )
        if self.h_min < 1:
            raise ValueError(f"h_min must be >= 1, got {self.h_min}")

    @property
    def window_hours(self) -> int:
        return self.h_end - self.h_start + 1


_MODES = ("lcp+hve", "ghg+hve", "ghg+lcp", "min-lcoe")


def _check_fraction(name: str, value) -> None:
    if value is None:
        return
    if isinstance(value, Mapping):
        for node, v in value.items():
            if not 0.0 <= float(v) <= 1.0:
                raise ValueError(f"{name}[{node}] must be in [0, 1], got {v}")
        return
    if not 0.0 <= float(value) <= 1.0:
        raise ValueError(f"{name} must be in [0, 1], got {value}")


@dataclass(frozen=True)
class ScenarioConfig:
    """A scenario pins exactly two of: supply target, electrification, and
    emissions reduction. The third is left to the optimizer (or, in
    ``min-lcoe`` mode, to an outer search that pins only the emissions
    reduction)."""

    mode: str
    lcp: float | None = None
    p_heat: float | Mapping[str, float] | None = None
    p_veh: float | Mapping[str, float] | None = None
    omega: float | None = None
    rgt: float | None = None
    include_nuclear: bool = True
    include_h2: bool = False
    ev_flex: EVFlexConfig | None = None
    btm_year: int | None = None

    def __post_init__(self):
        if self.mode not in _MODES:
            raise ValueError(f"unknown mode {self.mode!r}; expected one of {_MODES}")
        has_p = self.p_heat is not None or self.p_veh is not None
        full_p = self.p_heat is not None and self.p_veh is not None
        if self.mode == "lcp+hve":
            if self.lcp is None or not full_p or self.omega is not None:
                raise ValueError(
                    "lcp+hve mode requires lcp and both electrification rates, "
                    "and leaves the emissions reduction free"
                )
        elif self.mode == "ghg+hve":
            if self.omega is None or not full_p or self.lcp is not None:
                raise ValueError(
                    "ghg+hve mode requires omega and both electrification "
                    "rates, and leaves the supply target free"
                )
        elif self.mode == "ghg+lcp":
            if self.omega is None or self.lcp is None or has_p:
                raise ValueError(
                    "ghg+lcp mode requires omega and lcp, and leaves the "
                    "electrification rates free"
                )
        elif self.mode == "min-lcoe":
            if self.omega is None or self.lcp is not None or has_p:
                raise ValueError(
                    "min-lcoe mode pins only the emissions reduction"
                )
        _check_fraction("lcp", self.lcp)
        _check_fraction("p_heat", self.p_heat)
        _check_fraction("p_veh", self.p_veh)
        _check_fraction("rgt", self.rgt)
        if self.omega is not None and self.omega > 1.0:
            raise ValueError(f"omega cannot exceed 1, got {self.omega}")

    def p_heat_for(self, node_id: str) -> float:
        return _per_node_fraction(self.p_heat, node_id)

    def p_veh_for(self, node_id: str) -> float:
        return _per_node_fraction(self.p_veh, node_id)


def _per_node_fraction(value, node_id: str) -> float:
    if value is None:
        raise ValueError("electrification rate is free in this mode")
    if isinstance(value, Mapping):
        return float(value[node_id])
    return float(value)


def annualization_rate(period_years: int, interest_rate: float) -> float:
    """Per-year capital recovery factor for a repayment period and rate.

    Returns ``j(1+j)^P / ((1+j)^P - 1)``; at ``j = 0`` the continuous limit
    ``1/P`` is returned rather than raising, so rate sweeps can include zero.
    """
    if isinstance(period_years, numbers.Real) and not float(period_years).is_integer():
        raise ValueError(f"annualization period must be an integer, got {period_years}")
    p = int(period_years)
    if p < 1:
        raise ValueError(f"annualization period must be >= 1, got {period_years}")
    j = float(interest_rate)
    if j < 0.0:
        raise ValueError(f"interest rate must be >= 0, got {interest_rate}")
    if j == 0.0:
        return 1.0 / p
    growth = (1.0 + j) ** p
    return j * growth / (growth - 1.0)


def _series_report(violations, label, mapping, node_ids, n_hours,
                   length=None, is_potential=False):
    if mapping is None:
        return
    expected = n_hours if length is None else length
    for node in node_ids:
        arr = mapping.get(node)
        if arr is None:
            violations.append(f"series {label} missing for node {node}")
            continue
        if len(arr) != expected:
            violations.append(
                f"series {label}[{node}] length {len(arr)} != expected {expected}"
            )
            continue
        if np.any(arr < 0.0):
            violations.append(f"series {label}[{node}] contains negative values")
        if is_potential and np.any(arr > 1.0 + _POTENTIAL_TOL):
            violations.append(
                f"series {label}[{node}] potential exceeds unity "
                f"(max {float(arr.max()):.6g})"
            )


def validate(network: NetworkSpec, series: TimeSeriesSet, costs: CostTable,
             params: TechParams) -> list[str]:
    """Check every structural invariant; return one message per violation.

    Report-only: never raises, never mutates. An empty list means the inputs
    are ready for formulation.
    """
    v: list[str] = []
    ids = network.node_ids

    if len(set(ids)) != len(ids):
        dupes = sorted({i for i in ids if ids.count(i) > 1})
        v.append(f"duplicate node ids: {dupes}")

    for iface in network.interfaces:
        if iface.node_a not in ids or iface.node_b not in ids:
            v.append(f"interface {iface.key} references an unknown node")
        if iface.node_a == iface.node_b:
            v.append(f"interface {iface.key} joins a node to itself")
        if iface.distance_mi <= 0.0:
            v.append(f"interface {iface.key} distance must be > 0")
        if iface.existing_fwd_mw < 0.0 or iface.existing_rev_mw < 0.0:
            v.append(f"interface {iface.key} has a negative existing limit")

    if network.offshore_cap_total_mw < 0.0:
        v.append("negative regional offshore capacity limit")

    for node in network.nodes:
        for name in NodeSpec._CAPACITY_FIELDS:
            if getattr(node, name) < 0.0:
                v.append(f"node {node.id}: negative {name}")
        if node.hydro_flex_hourly_max_mwh > 0.0 and node.hydro_flex_mw == 0.0:
            v.append(
                f"node {node.id}: flexible-hydro hourly cap set with no "
                "flexible hydro capacity"
            )

    n_hours = series.modal_hours()
    n_days, rem = divmod(n_hours, HOURS_PER_DAY)
    if rem:
        v.append(f"horizon of {n_hours} hours is not a whole number of days")
    for name in TimeSeriesSet._HOURLY_FIELDS:
        _series_report(v, name, getattr(series, name), ids, n_hours,
                       is_potential=name in TimeSeriesSet._POTENTIAL_FIELDS)
    if series.d_veh_full is None and series.e_veh_daily_full is None:
        v.append("no vehicle demand series supplied (hourly or daily)")
    _series_report(v, "e_veh_daily_full", series.e_veh_daily_full, ids,
                   n_hours, length=n_days)
    _series_report(v, "h_flex_daily", series.h_flex_daily, ids, n_hours,
                   length=n_days)

    for name in CostTable._PER_NODE_FIELDS:
        for node, value in getattr(costs, name).items():
            if value < 0.0:
                v.append(f"cost {name}[{node}] is negative")
    for name in CostTable._PER_IFACE_FIELDS:
        for key, value in getattr(costs, name).items():
            if value < 0.0:
                v.append(f"cost {name}[{key}] is negative")
    for name in CostTable._SCALAR_FIELDS:
        if getattr(costs, name) < 0.0:
            v.append(f"cost {name} is negative")
    for cap_name, omf_name in (
        ("cap_on", "omf_on"), ("cap_off", "omf_off"),
        ("cap_us_solar", "omf_us_solar"), ("cap_batt_e", "omf_batt_e"),
        ("cap_batt_p", "omf_batt_p"), ("cap_h2_e", "omf_h2_e"),
        ("cap_h2_p", "omf_h2_p"), ("cap_ff", "omf_ff"),
        ("cap_tx", "omf_tx"),
    ):
        missing = set(getattr(costs, cap_name)) - set(getattr(costs, omf_name))
        for key in sorted(missing):
            v.append(f"{cap_name}[{key}] has no matching {omf_name} entry")
    for node in network.nodes:
        checks = (
            (node.gas_existing_mw, "c_ff"),
            (node.hydro_fixed_mw + node.hydro_flex_mw, "c_hydro"),
            (node.nuclear_gen_mwh_per_h, "c_nuc"),
            (node.biofuel_mw, "c_bio"),
            (node.import_limit_mwh, "c_imp"),
        )
        for quantity, cost_name in checks:
            if quantity > 0.0 and node.id not in getattr(costs, cost_name):
                v.append(f"node {node.id} uses {cost_name} but has no entry")

    for name in TechParams._FRACTION_FIELDS:
        value = getattr(params, name)
        if not 0.0 <= value <= 1.0:
            v.append(f"parameter {name}={value} outside [0, 1]")
    if params.reserve_margin < 0.0:
        v.append("reserve margin must be >= 0")
    if params.phi_batt_min > params.phi_batt_max:
        v.append("phi_batt_min exceeds phi_batt_max")
    if params.phi_batt_min < 0.0:
        v.append("phi_batt_min must be >= 0")
    for cls, years in params.p_years.items():
        if years < 1:
            v.append(f"annualization period for {cls} must be >= 1")
    if params.interest_rate < 0.0:
        v.append("interest rate must be >= 0")
    if abs(params.n_years * HOURS_PER_YEAR - n_hours) > HOURS_PER_DAY + 1e-6:
        v.append(
            f"n_years={params.n_years} inconsistent with a {n_hours}-hour "
            "horizon (more than one leap-day apart)"
        )

    return v
