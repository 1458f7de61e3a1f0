"""Linear-program assembly: the canonical LP container plus the builder
that turns validated grid inputs into variables, bounds, rows, and an
objective.

The container types (LPRow, LPInstance) are deliberately dumb: plain
arrays with names attached. Everything that knows about grids lives in
the builder; everything that knows about simplex lives in the solver.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from gridplan.emissions import EmissionsCalibration
from gridplan.model import (
    HEAT_RATE_MMBTU_PER_MWH,
    HOURS_PER_DAY,
    annualization_rate,
)
from gridplan.resources import BiofuelLimits

LE = "<="
GE = ">="
EQ = "="

_SENSES = (LE, GE, EQ)


class LPError(ValueError):
    """Raised for malformed LP data or inconsistent build inputs."""


def _frozen(arr, dtype) -> np.ndarray:
    out = np.array(arr, dtype=dtype, copy=True)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class LPRow:
    """One sparse constraint row: sum(val[k] * x[idx[k]]) sense rhs."""

    idx: np.ndarray
    val: np.ndarray
    sense: str
    rhs: float
    name: str
    tag: str = ""

    def __post_init__(self):
        idx = _frozen(self.idx, np.int64)
        val = _frozen(self.val, np.float64)
        object.__setattr__(self, "idx", idx)
        object.__setattr__(self, "val", val)
        object.__setattr__(self, "rhs", float(self.rhs))
        if self.sense not in _SENSES:
            raise LPError(f"row {self.name!r}: unknown sense {self.sense!r}")
        if idx.ndim != 1 or val.shape != idx.shape:
            raise LPError(f"row {self.name!r}: idx/val shape mismatch")
        if idx.size != np.unique(idx).size:
            raise LPError(f"row {self.name!r}: repeated column index")
        if not np.all(np.isfinite(val)) or not np.isfinite(self.rhs):
            raise LPError(f"row {self.name!r}: non-finite coefficient or rhs")

    def activity(self, x: np.ndarray) -> float:
        return float(self.val @ x[self.idx])


@dataclass(frozen=True)
class LPInstance:
    """A complete minimization LP with named columns and rows.

    ``lower``/``upper`` are per-column bounds (upper may be +inf);
    ``offset`` is a constant added to the objective value; ``audit``
    counts rows (and bound-encoded constraints) per constraint-family
    tag for coverage checks.
    """

    n_cols: int
    objective: np.ndarray
    rows: tuple
    lower: np.ndarray
    upper: np.ndarray
    col_names: tuple
    offset: float = 0.0
    audit: Mapping[str, int] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "objective", _frozen(self.objective, np.float64))
        object.__setattr__(self, "lower", _frozen(self.lower, np.float64))
        object.__setattr__(self, "upper", _frozen(self.upper, np.float64))
        object.__setattr__(self, "rows", tuple(self.rows))
        object.__setattr__(self, "col_names", tuple(self.col_names))
        object.__setattr__(self, "offset", float(self.offset))

    @property
    def n_rows(self) -> int:
        return len(self.rows)

    def validate(self) -> None:
        """Raise LPError if the instance is internally inconsistent."""
        n = self.n_cols
        for name, arr in (("objective", self.objective),
                          ("lower", self.lower), ("upper", self.upper)):
            if arr.shape != (n,):
                raise LPError(f"{name} has shape {arr.shape}, expected ({n},)")
        if len(self.col_names) != n:
            raise LPError("one name required per column")
        if len(set(self.col_names)) != n:
            raise LPError("column names must be unique")
        if not np.all(np.isfinite(self.objective)):
            raise LPError("objective has non-finite coefficients")
        if not np.isfinite(self.offset):
            raise LPError("objective offset must be finite")
        if not np.all(np.isfinite(self.lower)):
            raise LPError("lower bounds must be finite")
        if np.any(np.isnan(self.upper)) or np.any(self.upper == -np.inf):
            raise LPError("upper bounds must be finite or +inf")
        if np.any(self.lower > self.upper):
            j = int(np.argmax(self.lower > self.upper))
            raise LPError(
                f"column {self.col_names[j]!r}: lower {self.lower[j]} "
                f"exceeds upper {self.upper[j]}"
            )
        for row in self.rows:
            if row.idx.size and (row.idx.min() < 0 or row.idx.max() >= n):
                raise LPError(f"row {row.name!r} references unknown column")

    def column_index(self, name: str) -> int:
        index = self.__dict__.get("_name_to_col")
        if index is None:
            index = {c: j for j, c in enumerate(self.col_names)}
            object.__setattr__(self, "_name_to_col", index)
        return index[name]

    def dense_matrix(self) -> np.ndarray:
        a = np.zeros((self.n_rows, self.n_cols))
        for i, row in enumerate(self.rows):
            a[i, row.idx] = row.val
        return a

    def rhs_vector(self) -> np.ndarray:
        return np.array([row.rhs for row in self.rows])

    def senses(self) -> tuple:
        return tuple(row.sense for row in self.rows)

    def row_names(self) -> tuple:
        return tuple(row.name for row in self.rows)

    def objective_value(self, x: np.ndarray) -> float:
        return float(self.objective @ x) + self.offset

    def serialize(self) -> bytes:
        """Canonical byte form, used for determinism checks."""
        parts = [f"cols={self.n_cols} rows={self.n_rows} "
                 f"offset={self.offset!r}".encode()]
        parts.append(b"names:" + "\x00".join(self.col_names).encode())
        parts.append(b"c:" + self.objective.tobytes())
        parts.append(b"lo:" + self.lower.tobytes())
        parts.append(b"up:" + self.upper.tobytes())
        for row in self.rows:
            head = f"{row.name}|{row.tag}|{row.sense}|{row.rhs!r}".encode()
            parts.append(head + b"#" + row.idx.tobytes() + b"#"
                         + row.val.tobytes())
        for tag in sorted(self.audit):
            parts.append(f"audit:{tag}={self.audit[tag]}".encode())
        return b"\n".join(parts)


def make_lp(objective: Sequence[float],
            rows: Sequence[tuple],
            *,
            upper=None,
            lower=None,
            col_names=None,
            offset: float = 0.0,
            audit=None) -> LPInstance:
    """Construct an LPInstance from dense per-row coefficient lists.

    Each row is (coefficients, sense, rhs) or (coefficients, sense,
    rhs, name). Intended for small hand-written problems; the grid
    builder constructs rows sparsely.
    """
    c = np.asarray(objective, dtype=float)
    n = c.size
    if col_names is None:
        col_names = tuple(f"x{j}" for j in range(n))
    if lower is None:
        lower = np.zeros(n)
    if upper is None:
        upper = np.full(n, np.inf)
    built = []
    for i, spec_row in enumerate(rows):
        if len(spec_row) == 4:
            coeffs, sense, rhs, name = spec_row
        else:
            coeffs, sense, rhs = spec_row
            name = f"r{i}"
        coeffs = np.asarray(coeffs, dtype=float)
        (nz,) = np.nonzero(coeffs)
        built.append(LPRow(idx=nz, val=coeffs[nz], sense=sense,
                           rhs=float(rhs), name=name))
    lp = LPInstance(n_cols=n, objective=c, rows=tuple(built),
                    lower=np.asarray(lower, dtype=float),
                    upper=np.asarray(upper, dtype=float),
                    col_names=tuple(col_names), offset=offset,
                    audit=dict(audit or {}))
    lp.validate()
    return lp


# ---------------------------------------------------------------------------
# variable catalog


def _window_hours(window: tuple[int, int], n_hours: int) -> tuple[int, ...]:
    h_start, h_end = window
    return tuple(
        day * HOURS_PER_DAY + h
        for day in range(n_hours // HOURS_PER_DAY)
        for h in range(h_start, h_end + 1)
    )


@dataclass(frozen=True)
class VariableCatalog:
    """Canonical column naming and ordering for one scenario's LP.

    Families appear in alphabetical order; within a family, nodes are
    sorted and hours ascend. Interface flows are grouped by sorted
    interface key with the forward direction first. Fixing the order here
    keeps solver vectors, exported files, and reports mutually comparable.
    """

    names: tuple[str, ...]
    node_ids: tuple[str, ...]
    interface_keys: tuple[str, ...]
    n_hours: int

    def __post_init__(self):
        index = {name: i for i, name in enumerate(self.names)}
        if len(index) != len(self.names):
            raise LPError("duplicate column names in the variable catalog")
        object.__setattr__(self, "_index", index)

    @property
    def n_cols(self) -> int:
        return len(self.names)

    def index_of(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise LPError(f"unknown column {name!r}") from None

    def get(self, name: str) -> int | None:
        """Column index, or None when the variable does not exist."""
        return self._index.get(name)

    def __contains__(self, name: str) -> bool:
        return name in self._index


def _make_catalog(inp: "BuildInputs") -> VariableCatalog:
    T = inp.n_hours
    names: list[str] = []

    def hourly(fam, nodes):
        names.extend(f"{fam}[{n},{t}]" for n in nodes for t in range(T))

    def per_node(fam, nodes):
        names.extend(f"{fam}[{n}]" for n in nodes)

    hourly("batt_charge", inp.battery_nodes)
    hourly("batt_discharge", inp.battery_nodes)
    hourly("batt_soc", inp.battery_nodes)
    hourly("biofuel", inp.bio_nodes)
    per_node("cap_battery_energy", inp.battery_build)
    per_node("cap_battery_power", inp.battery_build)
    per_node("cap_fossil", inp.fossil_build)
    per_node("cap_h2_energy", inp.h2_nodes)
    per_node("cap_h2_power", inp.h2_nodes)
    per_node("cap_offshore", inp.offshore_build)
    per_node("cap_onshore", inp.onshore_build)
    names.extend(f"cap_tx[{key}]" for key in inp.tx_build)
    per_node("cap_us_solar", inp.us_solar_build)
    for n in inp.ev_nodes:
        names.extend(f"ev_flex[{n},{t}]" for t in inp.ev_hours[n])
    for key in inp.interface_keys:
        iface = inp.iface_by_key[key]
        fwd = f"{iface.node_a}>{iface.node_b}"
        rev = f"{iface.node_b}>{iface.node_a}"
        names.extend(f"flow[{fwd},{t}]" for t in range(T))
        names.extend(f"flow[{rev},{t}]" for t in range(T))
    hourly("fossil_ex", inp.fossil_ex_nodes)
    hourly("fossil_new", inp.fossil_build)
    hourly("h2_charge", inp.h2_nodes)
    hourly("h2_discharge", inp.h2_nodes)
    hourly("h2_soc", inp.h2_nodes)
    hourly("hydro_flex", inp.hydro_nodes)
    hourly("imports", inp.import_nodes)
    hourly("ramp_ex", inp.fossil_ex_nodes)
    hourly("ramp_new", inp.fossil_build)
    if inp.free_p:
        names.append("rate_heat")
        names.append("rate_veh")
    return VariableCatalog(
        names=tuple(names),
        node_ids=inp.node_ids,
        interface_keys=inp.interface_keys,
        n_hours=T,
    )


# ---------------------------------------------------------------------------
# input resolution


class BuildInputs:
    """Scenario inputs resolved, cross-checked, and classified.

    Resolves hydro and biofuel operating limits (explicit overrides win over
    series and node defaults), decides which nodes own which variable
    families, verifies that every priced activity has a cost entry, and
    derives the variable catalog. All failures raise LPError before any row
    is assembled.
    """

    def __init__(self, config, network, series, costs, params, demand,
                 hydro=None, biofuel=None, emissions=None):
        self.config = config
        self.network = network
        self.series = series
        self.costs = costs
        self.params = params
        self.demand = demand
        self.emissions = emissions
        self.free_p = bool(demand.free_p)
        self.node_ids = tuple(sorted(network.node_ids))
        self.n_hours = int(series.n_hours)

        self.iface_by_key = {iface.key: iface for iface in network.interfaces}
        if len(self.iface_by_key) != len(network.interfaces):
            raise LPError("duplicate interface keys in the network")
        self.interface_keys = tuple(sorted(self.iface_by_key))

        self._check_series()
        self._check_params()
        self._resolve_hydro(dict(hydro or {}))
        self._resolve_biofuel(dict(biofuel or {}))
        self._classify()
        self._check_daily_alignment()
        self._check_costs()
        self._check_emissions()
        self.catalog = _make_catalog(self)

    # -- checks and resolution ----------------------------------------------

    def _check_series(self):
        T = self.n_hours
        required = ("d_elec", "d_heat_full", "w_on", "w_off", "w_us_solar",
                    "w_btm_solar", "h_fix", "nuclear")
        for name in required:
            mapping = getattr(self.series, name)
            for n in self.node_ids:
                arr = mapping.get(n)
                if arr is None:
                    raise LPError(f"series {name} missing for node {n}")
                if len(arr) != T:
                    raise LPError(
                        f"series {name}[{n}] has {len(arr)} hours, "
                        f"expected {T}"
                    )
        for label, mapping in (("d_heat", self.demand.d_heat),
                               ("d_veh_fix", self.demand.d_veh_fix)):
            for n in self.node_ids:
                arr = mapping.get(n)
                if arr is None or len(arr) != T:
                    raise LPError(
                        f"demand bundle {label} missing or misaligned "
                        f"for node {n}"
                    )

    def _check_params(self):
        p = self.params
        if p.reserve_margin < 0.0:
            raise LPError("reserve margin must be >= 0")
        if p.phi_batt_min > p.phi_batt_max:
            raise LPError("phi_batt_min exceeds phi_batt_max")
        if p.phi_batt_min < 0.0:
            raise LPError("phi_batt_min must be >= 0")
        if not 0.0 <= p.tx_loss < 1.0:
            raise LPError("transmission loss must be in [0, 1)")
        if p.n_years <= 0.0:
            raise LPError("n_years must be > 0")

    def _resolve_hydro(self, overrides):
        for key in overrides:
            if key not in self.node_ids:
                raise LPError(f"hydro override names unknown node {key!r}")
        self.hydro_fix: dict[str, np.ndarray] = {}
        self.hydro_daily: dict[str, np.ndarray] = {}
        self.hydro_hourly_max: dict[str, float] = {}
        flex_nodes = []
        for n in self.node_ids:
            node = self.network.node(n)
            prof = overrides.get(n)
            if prof is not None:
                fix = np.asarray(prof.h_fix_hourly, dtype=float)
                daily = np.asarray(prof.h_flex_daily, dtype=float)
                hourly_max = float(prof.hourly_max_mwh)
            else:
                fix = np.asarray(self.series.h_fix[n], dtype=float)
                raw = (self.series.h_flex_daily or {}).get(n)
                daily = None if raw is None else np.asarray(raw, dtype=float)
                hourly_max = float(node.hydro_flex_hourly_max_mwh)
            if len(fix) != self.n_hours:
                raise LPError(
                    f"fixed-hydro series for node {n} has {len(fix)} hours, "
                    f"expected {self.n_hours}"
                )
            self.hydro_fix[n] = fix
            has_flex = prof is not None or node.hydro_flex_mw > 0.0 or (
                daily is not None and float(np.max(daily, initial=0.0)) > 0.0)
            if has_flex and daily is None:
                raise LPError(
                    f"node {n} has flexible hydro capacity but no daily "
                    "energy series"
                )
            if has_flex:
                flex_nodes.append(n)
                self.hydro_daily[n] = daily
                self.hydro_hourly_max[n] = hourly_max
        self.hydro_nodes = tuple(flex_nodes)

    def _resolve_biofuel(self, overrides):
        for key in overrides:
            if key not in self.node_ids:
                raise LPError(f"biofuel override names unknown node {key!r}")
        self.bio_limits: dict[str, BiofuelLimits] = {}
        for n in self.node_ids:
            node = self.network.node(n)
            lim = overrides.get(n)
            if lim is None and (node.biofuel_mw > 0.0
                                or node.biofuel_daily_mwh > 0.0):
                lim = BiofuelLimits(
                    daily_mwh=float(node.biofuel_daily_mwh),
                    hourly_max_mwh=float(node.biofuel_mw),
                    constrained_below_daily=bool(
                        node.biofuel_mw * HOURS_PER_DAY
                        < node.biofuel_daily_mwh - 1e-9),
                )
            if lim is not None:
                self.bio_limits[n] = lim
        self.bio_nodes = tuple(sorted(self.bio_limits))

    def _classify(self):
        costs, config = self.costs, self.config
        fossil_ex, batt_nodes, batt_build, h2 = [], [], [], []
        import_nodes, ev_nodes = [], []
        for n in self.node_ids:
            node = self.network.node(n)
            if node.gas_existing_mw > 0.0:
                fossil_ex.append(n)
            in_e, in_p = n in costs.cap_batt_e, n in costs.cap_batt_p
            if in_e != in_p:
                raise LPError(
                    f"node {n} appears in only one of cap_batt_e/cap_batt_p; "
                    "battery build needs both capital costs"
                )
            if in_e and in_p:
                batt_build.append(n)
            if (in_e and in_p) or node.battery_energy_existing_mwh > 0.0 \
                    or node.battery_power_existing_mw > 0.0:
                batt_nodes.append(n)
            if config.include_h2:
                in_he, in_hp = n in costs.cap_h2_e, n in costs.cap_h2_p
                if in_he != in_hp:
                    raise LPError(
                        f"node {n} appears in only one of cap_h2_e/cap_h2_p; "
                        "hydrogen build needs both capital costs"
                    )
                if in_he and in_hp:
                    h2.append(n)
            if node.import_limit_mwh > 0.0:
                import_nodes.append(n)
            if self.demand.ev_envelopes.get(n) is not None:
                ev_nodes.append(n)
        self.fossil_ex_nodes = tuple(fossil_ex)
        self.fossil_build = tuple(
            n for n in self.node_ids if n in costs.cap_ff)
        self.onshore_build = tuple(
            n for n in self.node_ids if n in costs.cap_on)
        self.offshore_build = tuple(
            n for n in self.node_ids if n in costs.cap_off)
        self.us_solar_build = tuple(
            n for n in self.node_ids if n in costs.cap_us_solar)
        self.battery_nodes = tuple(batt_nodes)
        self.battery_build = tuple(batt_build)
        self.h2_nodes = tuple(h2)
        self.import_nodes = tuple(import_nodes)
        self.ev_nodes = tuple(ev_nodes)
        self.tx_build = tuple(
            k for k in self.interface_keys if k in costs.cap_tx)
        self.ev_hours = {
            n: _window_hours(self.demand.ev_envelopes[n].window, self.n_hours)
            for n in ev_nodes
        }
        p = self.params
        if self.fossil_ex_nodes and p.eta_ff_existing <= 0.0:
            raise LPError("eta_ff_existing must be > 0")
        if self.fossil_build and p.eta_ff_new <= 0.0:
            raise LPError("eta_ff_new must be > 0")
        if self.battery_nodes and p.eta_batt <= 0.0:
            raise LPError("eta_batt must be > 0")
        if self.h2_nodes and p.eta_h2 <= 0.0:
            raise LPError("eta_h2 must be > 0")

    def _check_daily_alignment(self):
        T = self.n_hours
        if not (self.hydro_nodes or self.bio_nodes or self.ev_nodes):
            return
        if T % HOURS_PER_DAY:
            raise LPError(
                "daily hydro, biofuel, and EV structures need an hourly "
                f"horizon that is a multiple of 24, got {T}"
            )
        n_days = T // HOURS_PER_DAY
        for n in self.hydro_nodes:
            daily = self.hydro_daily[n]
            if len(daily) != n_days:
                raise LPError(
                    f"flexible-hydro daily series for node {n} has "
                    f"{len(daily)} days, expected {n_days}"
                )
            hourly_max = self.hydro_hourly_max[n]
            worst = float(np.max(daily, initial=0.0))
            if worst > hourly_max * HOURS_PER_DAY + 1e-9:
                warnings.warn(
                    f"node {n}: flexible-hydro daily energy {worst:g} MWh "
                    f"exceeds the {hourly_max * HOURS_PER_DAY:g} MWh that "
                    "the hourly cap can deliver in a day",
                    UserWarning,
                    stacklevel=2,
                )
        for n in self.ev_nodes:
            env = self.demand.ev_envelopes[n]
            if len(env.required_mwh) != n_days:
                raise LPError(
                    f"EV charging envelope for node {n} has "
                    f"{len(env.required_mwh)} days, expected {n_days}"
                )

    def _check_costs(self):
        costs = self.costs

        def need(field_name: str, key: str, why: str):
            if key not in getattr(costs, field_name):
                raise LPError(f"missing cost {field_name}[{key}] for {why}")

        omf_needs = (
            (self.onshore_build, "omf_on", "onshore wind fixed O&M"),
            (self.offshore_build, "omf_off", "offshore wind fixed O&M"),
            (self.us_solar_build, "omf_us_solar", "utility solar fixed O&M"),
            (self.fossil_build, "omf_ff", "new fossil fixed O&M"),
            (self.battery_build, "omf_batt_e", "battery energy fixed O&M"),
            (self.battery_build, "omf_batt_p", "battery power fixed O&M"),
            (self.h2_nodes, "omf_h2_e", "hydrogen energy fixed O&M"),
            (self.h2_nodes, "omf_h2_p", "hydrogen power fixed O&M"),
        )
        for nodes, field_name, why in omf_needs:
            for n in nodes:
                need(field_name, n, why)
        for n in self.node_ids:
            node = self.network.node(n)
            if n in self.fossil_ex_nodes or n in self.fossil_build:
                need("c_ff", n, "fossil fuel")
            if n in self.hydro_nodes or float(np.sum(self.hydro_fix[n])) > 0.0:
                need("c_hydro", n, "hydro energy")
            if self.config.include_nuclear \
                    and float(np.sum(self.series.nuclear[n])) > 0.0:
                need("c_nuc", n, "nuclear energy")
            if n in self.bio_nodes:
                need("c_bio", n, "biofuel energy")
            if n in self.import_nodes:
                need("c_imp", n, "imported energy")
            eligible = node.eligible_existing_cap_mw
            if not self.config.include_nuclear:
                eligible -= node.nuclear_mw
            if eligible > 0.0:
                need("ex_cap", n, "existing-capacity maintenance")
            if node.existing_tx_flow_mwh > 0.0:
                need("ex_tx", n, "existing-transmission charges")
        for key in self.tx_build:
            need("omf_tx", key, "transmission fixed O&M")
        if (self.onshore_build or self.offshore_build or self.us_solar_build
                or self.fossil_build):
            self._need_period("generation")
        if self.battery_build or self.h2_nodes:
            self._need_period("storage")
        if self.tx_build:
            self._need_period("transmission")

    def _need_period(self, kind: str):
        if kind not in self.params.p_years:
            raise LPError(f"p_years has no annualization period for {kind!r}")

    def _check_emissions(self):
        if self.config.omega is None:
            return
        if self.emissions is None:
            raise LPError(
                "a GHG-reduction target needs an emissions calibration "
                "(pass emissions=...)"
            )
        for field_name in ("f_heat_tot_mj", "f_veh_tot_mj"):
            keys = set(getattr(self.emissions, field_name))
            if keys != set(self.node_ids):
                raise LPError(
                    f"emissions calibration {field_name} covers "
                    f"{sorted(keys)} but the network has nodes "
                    f"{list(self.node_ids)}"
                )


# ---------------------------------------------------------------------------
# row assembly


class LPBuilder:
    """Mutable accumulator for rows, bounds, objective, and the audit."""

    def __init__(self, catalog: VariableCatalog):
        n = catalog.n_cols
        self.catalog = catalog
        self.objective = np.zeros(n)
        self.lower = np.zeros(n)
        self.upper = np.full(n, np.inf)
        self.offset = 0.0
        self.rows: list[LPRow] = []
        self.audit: dict[str, int] = {}

    def col(self, name: str) -> int:
        return self.catalog.index_of(name)

    def tally(self, tag: str, count: int = 1) -> None:
        self.audit[tag] = self.audit.get(tag, 0) + count

    def add_row(self, coeffs: Mapping[int, float], sense: str, rhs: float,
                name: str, tag: str) -> None:
        live = sorted((i, v) for i, v in coeffs.items() if v != 0.0)
        idx = np.fromiter((i for i, _ in live), dtype=np.int64,
                          count=len(live))
        val = np.fromiter((v for _, v in live), dtype=np.float64,
                          count=len(live))
        self.rows.append(LPRow(idx=idx, val=val, sense=sense, rhs=float(rhs),
                               name=name, tag=tag))
        self.tally(tag)

    def set_upper(self, name: str, bound: float, tag: str) -> None:
        self.upper[self.col(name)] = float(bound)
        self.tally(tag)

    def instance(self) -> LPInstance:
        audit = dict(sorted(self.audit.items()))
        audit["nonneg"] = self.catalog.n_cols
        lp = LPInstance(
            n_cols=self.catalog.n_cols,
            objective=self.objective,
            rows=tuple(self.rows),
            lower=self.lower,
            upper=self.upper,
            col_names=tuple(self.catalog.names),
            offset=self.offset,
            audit=audit,
        )
        lp.validate()
        return lp


_BALANCE_SIGNS = (
    ("fossil_ex", 1.0),
    ("fossil_new", 1.0),
    ("hydro_flex", 1.0),
    ("biofuel", 1.0),
    ("imports", 1.0),
    ("batt_discharge", 1.0),
    ("batt_charge", -1.0),
    ("h2_discharge", 1.0),
    ("h2_charge", -1.0),
)


def add_energy_balance(builder: LPBuilder, inp: BuildInputs) -> None:
    """One >= row per node-hour: supply and net imports must cover net load.

    Must-run resources (run-of-river hydro, nuclear, behind-the-meter solar,
    and other existing renewables) are folded into the right-hand side, so
    each row prices only decisions.
    """
    T = inp.n_hours
    cat = builder.catalog
    series = inp.series
    dem = inp.demand
    receive = 1.0 - inp.params.tx_loss
    rate_heat = cat.get("rate_heat")
    rate_veh = cat.get("rate_veh")

    inflow: dict[str, list[str]] = {n: [] for n in inp.node_ids}
    outflow: dict[str, list[str]] = {n: [] for n in inp.node_ids}
    for key in inp.interface_keys:
        iface = inp.iface_by_key[key]
        fwd = f"{iface.node_a}>{iface.node_b}"
        rev = f"{iface.node_b}>{iface.node_a}"
        outflow[iface.node_a].append(fwd)
        inflow[iface.node_b].append(fwd)
        outflow[iface.node_b].append(rev)
        inflow[iface.node_a].append(rev)

    for n in inp.node_ids:
        node = inp.network.node(n)
        rhs = (
            np.asarray(series.d_elec[n], dtype=float)
            - inp.hydro_fix[n]
            - dem.x_btm_mw[n] * series.w_btm_solar[n]
            - node.onshore_existing_mw * series.w_on[n]
            - node.offshore_existing_mw * series.w_off[n]
            - node.us_solar_existing_mw * series.w_us_solar[n]
        )
        if inp.config.include_nuclear:
            rhs = rhs - series.nuclear[n]
        if not inp.free_p:
            rhs = rhs + dem.d_heat[n] + dem.d_veh_fix[n]
        ev_window = frozenset(inp.ev_hours.get(n, ()))
        for t in range(T):
            coeffs: dict[int, float] = {}
            for fam, sign in _BALANCE_SIGNS:
                i = cat.get(f"{fam}[{n},{t}]")
                if i is not None:
                    coeffs[i] = sign
            for fam, w in (("cap_onshore", series.w_on[n]),
                           ("cap_offshore", series.w_off[n]),
                           ("cap_us_solar", series.w_us_solar[n])):
                i = cat.get(f"{fam}[{n}]")
                if i is not None:
                    coeffs[i] = float(w[t])
            if t in ev_window:
                coeffs[cat.index_of(f"ev_flex[{n},{t}]")] = -1.0
            for direction in inflow[n]:
                coeffs[cat.index_of(f"flow[{direction},{t}]")] = receive
            for direction in outflow[n]:
                coeffs[cat.index_of(f"flow[{direction},{t}]")] = -1.0
            if rate_heat is not None:
                coeffs[rate_heat] = -float(dem.d_heat[n][t])
                coeffs[rate_veh] = -float(dem.d_veh_fix[n][t])
            builder.add_row(coeffs, GE, float(rhs[t]),
                            f"balance[{n},{t}]", "balance")


def add_fossil_constraints(builder: LPBuilder, inp: BuildInputs) -> None:
    """Reserve-margin derating and hourly ramp linearization.

    Existing units get a simple derated upper bound. New units tie dispatch
    to built capacity through a row so the reserve requirement prices
    capacity. Ramp rows make each absolute output change chargeable, with
    hour 0 wrapping against the final hour.
    """
    T = inp.n_hours
    sigma = inp.params.reserve_margin
    for n in inp.node_ids:
        node = inp.network.node(n)
        if n in inp.fossil_ex_nodes:
            derated = node.gas_existing_mw / (1.0 + sigma)
            for t in range(T):
                builder.set_upper(f"fossil_ex[{n},{t}]", derated,
                                  "reserve-existing")
        if n in inp.fossil_build:
            cap = builder.col(f"cap_fossil[{n}]")
            for t in range(T):
                gen = builder.col(f"fossil_new[{n},{t}]")
                builder.add_row({gen: 1.0 + sigma, cap: -1.0}, LE, 0.0,
                                f"reserve_new[{n},{t}]", "reserve-new")
        for fam, suffix, tag in (("fossil_ex", "ex", "ramp-existing"),
                                 ("fossil_new", "new", "ramp-new")):
            if builder.catalog.get(f"{fam}[{n},0]") is None:
                continue
            for t in range(T):
                prev = (t - 1) % T
                gen_t = builder.col(f"{fam}[{n},{t}]")
                gen_p = builder.col(f"{fam}[{n},{prev}]")
                ramp = builder.col(f"ramp_{suffix}[{n},{t}]")
                up: dict[int, float] = {ramp: -1.0}
                up[gen_t] = up.get(gen_t, 0.0) + 1.0
                up[gen_p] = up.get(gen_p, 0.0) - 1.0
                builder.add_row(up, LE, 0.0,
                                f"ramp_up_{suffix}[{n},{t}]", tag)
                dn: dict[int, float] = {ramp: -1.0}
                dn[gen_p] = dn.get(gen_p, 0.0) + 1.0
                dn[gen_t] = dn.get(gen_t, 0.0) - 1.0
                builder.add_row(dn, LE, 0.0,
                                f"ramp_dn_{suffix}[{n},{t}]", tag)


def _headroom(max_mw: float, existing_mw: float, label: str,
              node_id: str) -> float:
    if existing_mw > max_mw:
        warnings.warn(
            f"existing {label} capacity {existing_mw:g} MW at node {node_id} "
            f"exceeds the stated maximum {max_mw:g} MW; no new build allowed",
            UserWarning,
            stacklevel=3,
        )
        return 0.0
    return max_mw - existing_mw


def add_resource_caps(builder: LPBuilder, inp: BuildInputs) -> None:
    """Resource-potential limits on new builds.

    Onshore wind and utility solar headroom are per-node bounds; offshore
    wind shares one regional budget row net of everything already standing.
    """
    for n in inp.onshore_build:
        node = inp.network.node(n)
        ub = _headroom(node.onshore_max_mw, node.onshore_existing_mw,
                       "onshore wind", n)
        builder.set_upper(f"cap_onshore[{n}]", ub, "resource-onshore")
    for n in inp.us_solar_build:
        node = inp.network.node(n)
        ub = _headroom(node.us_solar_max_mw, node.us_solar_existing_mw,
                       "utility solar", n)
        builder.set_upper(f"cap_us_solar[{n}]", ub, "resource-us-solar")
    if inp.offshore_build:
        existing = sum(inp.network.node(n).offshore_existing_mw
                       for n in inp.node_ids)
        total = inp.network.offshore_cap_total_mw
        rhs = total - existing
        if rhs < 0.0:
            warnings.warn(
                f"existing offshore capacity {existing:g} MW exceeds the "
                f"regional maximum {total:g} MW; no new build allowed",
                UserWarning,
                stacklevel=2,
            )
            rhs = 0.0
        coeffs = {builder.col(f"cap_offshore[{n}]"): 1.0
                  for n in inp.offshore_build}
        builder.add_row(coeffs, LE, rhs, "resource_offshore",
                        "resource-offshore")


def add_transmission(builder: LPBuilder, inp: BuildInputs) -> None:
    """Directional interface limits; rows when capacity can be added."""
    T = inp.n_hours
    for key in inp.interface_keys:
        iface = inp.iface_by_key[key]
        cap = builder.catalog.get(f"cap_tx[{key}]")
        directions = (
            (f"{iface.node_a}>{iface.node_b}", iface.existing_fwd_mw),
            (f"{iface.node_b}>{iface.node_a}", iface.existing_rev_mw),
        )
        for direction, limit in directions:
            if cap is None:
                for t in range(T):
                    builder.set_upper(f"flow[{direction},{t}]", limit,
                                      "tx-limit")
            else:
                for t in range(T):
                    flow = builder.col(f"flow[{direction},{t}]")
                    builder.add_row({flow: 1.0, cap: -1.0}, LE, limit,
                                    f"tx_limit[{direction},{t}]", "tx-limit")


def add_storage(builder: LPBuilder, inp: BuildInputs, kind: str) -> None:
    """State-of-charge recursion plus energy and power capacity limits.

    The state row charges the one-way efficiency on both legs and a
    per-hour standing loss on the carried state; hour 0 wraps against the
    final hour so the horizon is self-consistent. Battery sizing couples
    the two new-build capacity variables; hydrogen storage has no existing
    capacity and no sizing couple.
    """
    if kind == "battery":
        nodes, build_set = inp.battery_nodes, frozenset(inp.battery_build)
        eta, prefix, tag = inp.params.eta_batt, "batt", "battery"
        cap_e_fam, cap_p_fam = "cap_battery_energy", "cap_battery_power"
    elif kind == "hydrogen":
        nodes, build_set = inp.h2_nodes, frozenset(inp.h2_nodes)
        eta, prefix, tag = inp.params.eta_h2, "h2", "h2"
        cap_e_fam, cap_p_fam = "cap_h2_energy", "cap_h2_power"
    else:
        raise LPError(f"unknown storage kind {kind!r}")
    if not nodes:
        return
    carry = 1.0 - inp.params.kappa
    T = inp.n_hours
    for n in nodes:
        node = inp.network.node(n)
        if kind == "battery":
            e_ex = node.battery_energy_existing_mwh
            p_ex = node.battery_power_existing_mw
        else:
            e_ex = p_ex = 0.0
        for t in range(T):
            coeffs: dict[int, float] = {
                builder.col(f"{prefix}_discharge[{n},{t}]"): 1.0 / eta,
                builder.col(f"{prefix}_charge[{n},{t}]"): -eta,
            }
            soc_t = builder.col(f"{prefix}_soc[{n},{t}]")
            soc_p = builder.col(f"{prefix}_soc[{n},{(t - 1) % T}]")
            coeffs[soc_t] = coeffs.get(soc_t, 0.0) + 1.0
            coeffs[soc_p] = coeffs.get(soc_p, 0.0) - carry
            builder.add_row(coeffs, EQ, 0.0, f"{prefix}_state[{n},{t}]",
                            f"{tag}-soc")
        if n in build_set:
            cap_e = builder.col(f"{cap_e_fam}[{n}]")
            cap_p = builder.col(f"{cap_p_fam}[{n}]")
            for t in range(T):
                soc = builder.col(f"{prefix}_soc[{n},{t}]")
                builder.add_row({soc: 1.0, cap_e: -1.0}, LE, e_ex,
                                f"{prefix}_energy_cap[{n},{t}]",
                                f"{tag}-energy-cap")
            for t in range(T):
                charge = builder.col(f"{prefix}_charge[{n},{t}]")
                discharge = builder.col(f"{prefix}_discharge[{n},{t}]")
                builder.add_row({charge: 1.0, cap_p: -1.0}, LE, p_ex,
                                f"{prefix}_charge_cap[{n},{t}]",
                                f"{tag}-power-cap")
                builder.add_row({discharge: 1.0, cap_p: -1.0}, LE, p_ex,
                                f"{prefix}_discharge_cap[{n},{t}]",
                                f"{tag}-power-cap")
            if kind == "battery":
                builder.add_row(
                    {cap_p: 1.0, cap_e: -inp.params.phi_batt_min}, GE, 0.0,
                    f"batt_size_min[{n}]", "battery-sizing")
                builder.add_row(
                    {cap_p: 1.0, cap_e: -inp.params.phi_batt_max}, LE, 0.0,
                    f"batt_size_max[{n}]", "battery-sizing")
        else:
            for t in range(T):
                builder.set_upper(f"{prefix}_soc[{n},{t}]", e_ex,
                                  f"{tag}-energy-cap")
            for t in range(T):
                builder.set_upper(f"{prefix}_charge[{n},{t}]", p_ex,
                                  f"{tag}-power-cap")
                builder.set_upper(f"{prefix}_discharge[{n},{t}]", p_ex,
                                  f"{tag}-power-cap")


def add_dispatchables(builder: LPBuilder, inp: BuildInputs) -> None:
    """Hydro daily budgets, biofuel limits, import caps, and EV charging."""
    T = inp.n_hours
    cat = builder.catalog
    for n in inp.hydro_nodes:
        daily = inp.hydro_daily[n]
        for d in range(len(daily)):
            coeffs = {
                builder.col(f"hydro_flex[{n},{d * HOURS_PER_DAY + h}]"): 1.0
                for h in range(HOURS_PER_DAY)
            }
            builder.add_row(coeffs, EQ, float(daily[d]),
                            f"hydro_daily[{n},{d}]", "hydro-daily")
        hourly_max = inp.hydro_hourly_max[n]
        for t in range(T):
            builder.set_upper(f"hydro_flex[{n},{t}]", hourly_max,
                              "hydro-hourly")
    for n in inp.bio_nodes:
        lim = inp.bio_limits[n]
        for d in range(T // HOURS_PER_DAY):
            coeffs = {
                builder.col(f"biofuel[{n},{d * HOURS_PER_DAY + h}]"): 1.0
                for h in range(HOURS_PER_DAY)
            }
            builder.add_row(coeffs, LE, lim.daily_mwh,
                            f"biofuel_daily[{n},{d}]", "biofuel-daily")
        for t in range(T):
            builder.set_upper(f"biofuel[{n},{t}]", lim.hourly_max_mwh,
                              "biofuel-hourly")
    for n in inp.import_nodes:
        limit = inp.network.node(n).import_limit_mwh
        for t in range(T):
            builder.set_upper(f"imports[{n},{t}]", limit, "import-limit")
    rate_veh = cat.get("rate_veh")
    for n in inp.ev_nodes:
        env = inp.demand.ev_envelopes[n]
        h_start, h_end = env.window
        for d in range(len(env.required_mwh)):
            hours = range(d * HOURS_PER_DAY + h_start,
                          d * HOURS_PER_DAY + h_end + 1)
            coeffs = {builder.col(f"ev_flex[{n},{t}]"): 1.0 for t in hours}
            if inp.free_p:
                coeffs[rate_veh] = -float(env.required_mwh[d])
                builder.add_row(coeffs, EQ, 0.0, f"ev_daily[{n},{d}]",
                                "ev-daily")
                for t in hours:
                    builder.add_row(
                        {builder.col(f"ev_flex[{n},{t}]"): 1.0,
                         rate_veh: -float(env.hourly_cap_mwh[d])},
                        LE, 0.0, f"ev_rate[{n},{t}]", "ev-rate")
            else:
                builder.add_row(coeffs, EQ, float(env.required_mwh[d]),
                                f"ev_daily[{n},{d}]", "ev-daily")
                for t in hours:
                    builder.set_upper(f"ev_flex[{n},{t}]",
                                      float(env.hourly_cap_mwh[d]),
                                      "ev-rate")


def _supply_share_row(builder: LPBuilder, inp: BuildInputs, frac: float, *,
                      subtract_nuclear: bool, name: str, tag: str) -> None:
    """Cap the non-qualifying supply share at (1 - frac) of served load.

    Fossil and biofuel generation count in full; imports count only for
    their non-qualifying share. Flexible EV charging (and, when
    electrification rates are decision variables, the rate-driven loads)
    enlarge the served load, so they appear on the left with negative
    (1 - frac) weights. For a renewables-only share, nuclear energy also
    stops qualifying and moves across as a right-hand constant.
    """
    cat = builder.catalog
    T = inp.n_hours
    dem = inp.demand
    co = 1.0 - frac
    coeffs: dict[int, float] = {}
    base = 0.0
    heat_total = 0.0
    veh_total = 0.0
    for n in inp.node_ids:
        for t in range(T):
            for fam, weight in (("fossil_ex", 1.0), ("fossil_new", 1.0),
                                ("biofuel", 1.0), ("imports", co)):
                i = cat.get(f"{fam}[{n},{t}]")
                if i is not None:
                    coeffs[i] = weight
        for t in inp.ev_hours.get(n, ()):
            coeffs[cat.index_of(f"ev_flex[{n},{t}]")] = -co
        base += float(
            np.sum(inp.series.d_elec[n])
            - dem.x_btm_mw[n] * np.sum(inp.series.w_btm_solar[n])
        )
        if inp.free_p:
            heat_total += float(np.sum(dem.d_heat[n]))
            veh_total += float(np.sum(dem.d_veh_fix[n]))
        else:
            base += float(np.sum(dem.d_heat[n]) + np.sum(dem.d_veh_fix[n]))
    if inp.free_p:
        coeffs[cat.index_of("rate_heat")] = -co * heat_total
        coeffs[cat.index_of("rate_veh")] = -co * veh_total
    rhs = co * base
    if subtract_nuclear and inp.config.include_nuclear:
        rhs -= float(sum(np.sum(inp.series.nuclear[n])
                         for n in inp.node_ids))
    builder.add_row(coeffs, LE, rhs, name, tag)


def _ghg_row(builder: LPBuilder, inp: BuildInputs) -> None:
    """Annualized emissions cap in MMT across electricity and end uses."""
    cat = builder.catalog
    cal = inp.emissions
    params = inp.params
    scale = 1e-6 / params.n_years
    weights = (
        ("fossil_ex",
         cal.theta_ff_t_per_mwh / params.eta_ff_existing * scale),
        ("fossil_new", cal.theta_ff_t_per_mwh / params.eta_ff_new * scale),
        ("imports", cal.theta_imp_t_per_mwh * scale),
    )
    coeffs: dict[int, float] = {}
    for n in inp.node_ids:
        for t in range(inp.n_hours):
            for fam, weight in weights:
                i = cat.get(f"{fam}[{n},{t}]")
                if i is not None:
                    coeffs[i] = weight
    if inp.free_p:
        eps_heat, eps_veh = cal.sector_constants(0.0, 0.0)
        coeffs[cat.index_of("rate_heat")] = -eps_heat
        coeffs[cat.index_of("rate_veh")] = -eps_veh
    else:
        eps_heat, eps_veh = cal.sector_constants(inp.demand.p_heat,
                                                 inp.demand.p_veh)
    rhs = ((1.0 - inp.config.omega) * cal.reference_mmt - eps_heat - eps_veh
           - cal.eps_transp_other_mmt - cal.eps_industrial_mmt)
    builder.add_row(coeffs, LE, rhs, "policy_ghg", "policy-ghg")


def add_policy_constraints(builder: LPBuilder, inp: BuildInputs) -> None:
    """System-wide target rows: low-carbon share, renewable share, GHG cap.

    A zero or absent target adds no row. When both share targets are set
    and the renewable one is stricter, it dominates; both rows are still
    added so their duals stay inspectable.
    """
    config = inp.config
    lcp = config.lcp if config.lcp else None
    rgt = config.rgt if config.rgt else None
    if lcp is not None and rgt is not None and rgt > lcp:
        warnings.warn(
            f"renewable share target {rgt:g} exceeds the low-carbon share "
            f"target {lcp:g} and dominates it",
            UserWarning,
            stacklevel=2,
        )
    if lcp is not None:
        _supply_share_row(builder, inp, lcp, subtract_nuclear=False,
                          name="policy_lcp", tag="policy-lcp")
    if rgt is not None:
        _supply_share_row(builder, inp, rgt, subtract_nuclear=True,
                          name="policy_rgt", tag="policy-rgt")
    if config.omega is not None:
        _ghg_row(builder, inp)


def build_objective(builder: LPBuilder, inp: BuildInputs) -> None:
    """Total-cost objective: annualized new capacity, dispatch, and fixed
    charges for what already exists (carried in the offset)."""
    costs = inp.costs
    params = inp.params
    obj = builder.objective
    cat = builder.catalog
    rate_j = params.interest_rate

    def cap_coeff(cap_per_kw: float, omf_per_kw: float, kind: str) -> float:
        rate = annualization_rate(params.p_years[kind], rate_j)
        return params.n_years * (rate * cap_per_kw * 1000.0
                                 + omf_per_kw * 1000.0)

    capacity_families = (
        ("cap_onshore", inp.onshore_build, costs.cap_on, costs.omf_on,
         "generation"),
        ("cap_offshore", inp.offshore_build, costs.cap_off, costs.omf_off,
         "generation"),
        ("cap_us_solar", inp.us_solar_build, costs.cap_us_solar,
         costs.omf_us_solar, "generation"),
        ("cap_fossil", inp.fossil_build, costs.cap_ff, costs.omf_ff,
         "generation"),
        ("cap_battery_energy", inp.battery_build, costs.cap_batt_e,
         costs.omf_batt_e, "storage"),
        ("cap_battery_power", inp.battery_build, costs.cap_batt_p,
         costs.omf_batt_p, "storage"),
        ("cap_h2_energy", inp.h2_nodes, costs.cap_h2_e, costs.omf_h2_e,
         "storage"),
        ("cap_h2_power", inp.h2_nodes, costs.cap_h2_p, costs.omf_h2_p,
         "storage"),
    )
    for fam, nodes, cap_map, omf_map, kind in capacity_families:
        for n in nodes:
            obj[cat.index_of(f"{fam}[{n}]")] = cap_coeff(
                cap_map[n], omf_map[n], kind)
    for key in inp.tx_build:
        iface = inp.iface_by_key[key]
        rate = annualization_rate(params.p_years["transmission"], rate_j)
        obj[cat.index_of(f"cap_tx[{key}]")] = params.n_years * (
            rate * costs.cap_tx[key] * iface.distance_mi * 1000.0
            + costs.omf_tx[key]
        )

    T = inp.n_hours

    def price_hours(fam: str, n: str, price: float) -> None:
        for t in range(T):
            obj[cat.index_of(f"{fam}[{n},{t}]")] = price

    for n in inp.fossil_ex_nodes:
        fuel = (HEAT_RATE_MMBTU_PER_MWH * costs.c_ff[n]
                / params.eta_ff_existing)
        price_hours("fossil_ex", n, fuel)
        price_hours("ramp_ex", n, costs.c_existing_ramp)
    for n in inp.fossil_build:
        fuel = (HEAT_RATE_MMBTU_PER_MWH * costs.c_ff[n] / params.eta_ff_new
                + costs.omv_ff)
        price_hours("fossil_new", n, fuel)
        price_hours("ramp_new", n, costs.c_new_ramp)
    for n in inp.hydro_nodes:
        price_hours("hydro_flex", n, costs.c_hydro[n])
    for n in inp.bio_nodes:
        price_hours("biofuel", n, costs.c_bio[n])
    for n in inp.import_nodes:
        price_hours("imports", n, costs.c_imp[n])
    for n in inp.battery_nodes:
        price_hours("batt_charge", n, costs.nominal_storage_charge)
        price_hours("batt_discharge", n, costs.nominal_storage_charge)
    for n in inp.h2_nodes:
        price_hours("h2_charge", n, costs.nominal_storage_charge)
        price_hours("h2_discharge", n, costs.nominal_storage_charge)
    for key in inp.interface_keys:
        iface = inp.iface_by_key[key]
        for direction in (f"{iface.node_a}>{iface.node_b}",
                          f"{iface.node_b}>{iface.node_a}"):
            for t in range(T):
                obj[cat.index_of(f"flow[{direction},{t}]")] = \
                    costs.nominal_tx_charge

    offset = 0.0
    for n in inp.node_ids:
        node = inp.network.node(n)
        eligible = node.eligible_existing_cap_mw
        if not inp.config.include_nuclear:
            eligible -= node.nuclear_mw
        offset += params.n_years * (
            costs.ex_cap.get(n, 0.0) * eligible * 1000.0
            + costs.ex_tx.get(n, 0.0) * node.existing_tx_flow_mwh
        )
        offset += float(np.sum(inp.hydro_fix[n])) * costs.c_hydro.get(n, 0.0)
        if inp.config.include_nuclear:
            offset += float(np.sum(inp.series.nuclear[n])) * costs.c_nuc.get(
                n, 0.0)
    builder.offset = offset


def assemble(inp: BuildInputs) -> tuple[LPInstance, VariableCatalog]:
    """Assemble the LP for already-resolved inputs.

    Exposed separately from ``build`` so callers that need the resolved
    inputs afterwards (reporting, the scenario runner) can construct
    ``BuildInputs`` once and keep it.
    """
    builder = LPBuilder(inp.catalog)
    if inp.free_p:
        # Electrification rates are adoption fractions.
        builder.upper[builder.col("rate_heat")] = 1.0
        builder.upper[builder.col("rate_veh")] = 1.0
    add_energy_balance(builder, inp)
    add_fossil_constraints(builder, inp)
    add_resource_caps(builder, inp)
    add_transmission(builder, inp)
    add_storage(builder, inp, "battery")
    add_storage(builder, inp, "hydrogen")
    add_dispatchables(builder, inp)
    add_policy_constraints(builder, inp)
    build_objective(builder, inp)
    return builder.instance(), inp.catalog


def build(config, network, series, costs, params, demand,
          hydro=None, biofuel=None, *,
          emissions: EmissionsCalibration | None = None,
          ) -> tuple[LPInstance, VariableCatalog]:
    """Assemble the least-cost scenario LP.

    ``hydro`` and ``biofuel`` optionally override per-node operating limits
    (mappings of node id to HydroProfile / BiofuelLimits); otherwise limits
    come from the series and node specs. ``emissions`` supplies the
    calibration required whenever a GHG-reduction target is set.

    Returns the immutable LP plus the variable catalog naming its columns.
    """
    inp = BuildInputs(config, network, series, costs, params, demand,
                      hydro=hydro, biofuel=biofuel, emissions=emissions)
    return assemble(inp)
