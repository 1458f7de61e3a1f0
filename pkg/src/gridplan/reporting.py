"""Turn a solved scenario into numbers someone can act on.

Everything here is post-processing: cost attribution by resource, levelized
cost of delivered electricity, curtailment split across the variable
resources that could have produced it, realized policy metrics (low-carbon
share, emissions), and flat CSV / nested JSON serialization.

Two closure checks keep the bookkeeping honest. Cost closure requires the
per-resource buckets plus the nominal activity charges to re-add to the
optimizer's objective. Energy closure rebuilds each node-hour balance from
the raw inputs and the solution vector, without touching the constraint
matrix, and measures the worst residual against the recorded row slack.
"""

from __future__ import annotations

import csv
import dataclasses
import io
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .emissions import EmissionsLedger, electricity_emissions, ghg_reduction
from .formulation import BuildInputs, LPInstance
from .solver import Solution

__all__ = [
    "CSV_COLUMNS",
    "CurtailmentReport",
    "ExcessReport",
    "ScenarioReport",
    "attribute_curtailment",
    "compute_lcoe",
    "csv_row",
    "curtailment_series",
    "energy_closure",
    "excess_low_carbon",
    "excess_percent",
    "excess_series",
    "net_demand_mwh",
    "realized_emissions",
    "realized_low_carbon_share",
    "report_json_dict",
    "summarize",
    "unit_cost",
    "write_operations_csv",
    "write_report_csv",
]


# --------------------------------------------------------------------------
# scalar primitives


def compute_lcoe(total_cost_usd: float, net_demand_mwh: float) -> float:
    """Levelized cost of energy in $/MWh over the net served demand."""
    if net_demand_mwh <= 0.0:
        raise ValueError(
            f"net demand must be positive to level costs, got {net_demand_mwh!r}")
    return total_cost_usd / net_demand_mwh


def unit_cost(cost_usd: float, delivered_mwh: float) -> float | None:
    """Attributed cost per delivered MWh, or None when nothing was delivered.

    An idle resource has no meaningful unit cost; returning None (serialized
    as an empty field) keeps it distinct from a genuinely free resource.
    """
    if delivered_mwh <= 0.0:
        return None
    return cost_usd / delivered_mwh


def attribute_curtailment(slack_mwh: float,
                          potentials: Mapping[str, float]) -> dict[str, float]:
    """Split one hour of curtailed energy across resources by potential.

    Each resource receives a share proportional to what it could have
    produced that hour. When nothing had potential the whole slack lands in
    an ``"other"`` bucket rather than being divided by zero.
    """
    out = {key: 0.0 for key in potentials}
    total = float(sum(potentials.values()))
    if total <= 0.0:
        out["other"] = float(slack_mwh)
    else:
        for key, value in potentials.items():
            out[key] = float(slack_mwh) * float(value) / total
        out["other"] = 0.0
    return out


def excess_series(potential, demand) -> np.ndarray:
    """Hourly low-carbon energy beyond concurrent demand (never negative)."""
    pot = np.asarray(potential, dtype=float)
    dem = np.asarray(demand, dtype=float)
    return np.maximum(pot - dem, 0.0)


def excess_percent(potential, demand) -> float:
    """Excess low-carbon energy as a percentage of low-carbon potential."""
    pot = np.asarray(potential, dtype=float)
    total = float(pot.sum())
    if total <= 0.0:
        return 0.0
    return 100.0 * float(excess_series(pot, demand).sum()) / total


# --------------------------------------------------------------------------
# solution access helpers


def _col_series(inp: BuildInputs, x: np.ndarray, fam: str, n: str) -> np.ndarray:
    """Hourly values of one variable family at one node (zeros if absent)."""
    cat = inp.catalog
    out = np.zeros(inp.n_hours)
    for t in range(inp.n_hours):
        j = cat.get(f"{fam}[{n},{t}]")
        if j is not None:
            out[t] = x[j]
    return out


def _col_scalar(inp: BuildInputs, x: np.ndarray, name: str) -> float:
    j = inp.catalog.get(name)
    return float(x[j]) if j is not None else 0.0


def _require_x(solution: Solution) -> np.ndarray:
    if solution.x is None:
        raise ValueError(
            f"no solution values to report (status={solution.status})")
    return solution.x


def _solved_rates(inp: BuildInputs, x: np.ndarray) -> tuple[float, float]:
    r_heat = float(x[inp.catalog.index_of("rate_heat")])
    r_veh = float(x[inp.catalog.index_of("rate_veh")])
    return r_heat, r_veh


def _weighted_rate(value, weights: Mapping[str, float]) -> float:
    """Energy-weighted mean of a per-node fraction (scalar passes through)."""
    if value is None:
        return 0.0
    if not isinstance(value, Mapping):
        return float(value)
    total = float(sum(weights.get(n, 0.0) for n in value))
    if total <= 0.0:
        return float(np.mean([float(v) for v in value.values()])) if value else 0.0
    return sum(float(value[n]) * weights.get(n, 0.0) for n in value) / total


def _electrified_rates(inp: BuildInputs, x: np.ndarray) -> tuple[float, float]:
    if inp.free_p:
        return _solved_rates(inp, x)
    series = inp.series
    heat_w = {n: float(np.sum(series.d_heat_full[n])) for n in inp.node_ids} \
        if series.d_heat_full is not None else {}
    if series.d_veh_full is not None:
        veh_w = {n: float(np.sum(series.d_veh_full[n])) for n in inp.node_ids}
    elif series.e_veh_daily_full is not None:
        veh_w = {n: float(np.sum(series.e_veh_daily_full[n]))
                 for n in inp.node_ids}
    else:
        veh_w = {}
    return (_weighted_rate(inp.config.p_heat, heat_w),
            _weighted_rate(inp.config.p_veh, veh_w))


def _flow_directions(inp: BuildInputs):
    """Per-node lists of flow directions entering and leaving the node."""
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
    return inflow, outflow


def _vre_potentials(inp: BuildInputs, x: np.ndarray,
                    n: str) -> dict[str, np.ndarray]:
    """Hourly producible energy per variable resource at one node."""
    node = inp.network.node(n)
    series = inp.series
    built = {
        "onshore": _col_scalar(inp, x, f"cap_onshore[{n}]"),
        "offshore": _col_scalar(inp, x, f"cap_offshore[{n}]"),
        "us-solar": _col_scalar(inp, x, f"cap_us_solar[{n}]"),
    }
    return {
        "onshore": (node.onshore_existing_mw + built["onshore"])
        * np.asarray(series.w_on[n], dtype=float),
        "offshore": (node.offshore_existing_mw + built["offshore"])
        * np.asarray(series.w_off[n], dtype=float),
        "us-solar": (node.us_solar_existing_mw + built["us-solar"])
        * np.asarray(series.w_us_solar[n], dtype=float),
        "btm-solar": inp.demand.x_btm_mw[n]
        * np.asarray(series.w_btm_solar[n], dtype=float),
    }


def _hourly_load(inp: BuildInputs, x: np.ndarray, n: str) -> np.ndarray:
    """Consumer load (grid demand plus electrified end uses) per hour."""
    dem = inp.demand
    load = np.asarray(inp.series.d_elec[n], dtype=float).copy()
    heat = np.asarray(dem.d_heat[n], dtype=float)
    veh = np.asarray(dem.d_veh_fix[n], dtype=float)
    if inp.free_p:
        r_heat, r_veh = _solved_rates(inp, x)
        load += r_heat * heat + r_veh * veh
    else:
        load += heat + veh
    for t in inp.ev_hours.get(n, ()):
        load[t] += float(x[inp.catalog.index_of(f"ev_flex[{n},{t}]")])
    return load


def _balance_slacks(inp: BuildInputs, lp: LPInstance,
                    solution: Solution) -> dict[str, np.ndarray]:
    """Signed surplus of every node-hour balance row (the curtailment)."""
    x = _require_x(solution)
    out = {n: np.zeros(inp.n_hours) for n in inp.node_ids}
    for i, row in enumerate(lp.rows):
        if row.tag != "balance":
            continue
        n, t = row.name[len("balance["):-1].rsplit(",", 1)
        if solution.slacks is not None:
            out[n][int(t)] = solution.slacks[i]
        else:
            out[n][int(t)] = row.activity(x) - row.rhs
    return out


# --------------------------------------------------------------------------
# realized metrics


def net_demand_mwh(inp: BuildInputs, solution: Solution) -> float:
    """Total served demand net of behind-the-meter generation, in MWh.

    Grid demand plus electrified heating, fixed vehicle charging, and the
    flexible vehicle charging the optimizer placed, minus behind-the-meter
    solar output. This is the denominator every levelized cost uses.
    """
    x = _require_x(solution)
    series = inp.series
    dem = inp.demand
    total = 0.0
    for n in inp.node_ids:
        total += float(np.sum(series.d_elec[n]))
        total -= dem.x_btm_mw[n] * float(np.sum(series.w_btm_solar[n]))
        heat = float(np.sum(dem.d_heat[n]))
        veh = float(np.sum(dem.d_veh_fix[n]))
        if inp.free_p:
            r_heat, r_veh = _solved_rates(inp, x)
            heat *= r_heat
            veh *= r_veh
        total += heat + veh
        for t in inp.ev_hours.get(n, ()):
            total += float(x[inp.catalog.index_of(f"ev_flex[{n},{t}]")])
    return total


def realized_low_carbon_share(inp: BuildInputs, solution: Solution) -> float:
    """Share of in-state supply that came from low-carbon sources.

    Uses the same algebra as the policy row, so when that row binds this
    equals the configured target: fossil and biofuel generation count
    against the served load net of imports.
    """
    x = _require_x(solution)
    non_qualifying = 0.0
    imports = 0.0
    for n in inp.node_ids:
        for fam in ("fossil_ex", "fossil_new", "biofuel"):
            non_qualifying += float(_col_series(inp, x, fam, n).sum())
        imports += float(_col_series(inp, x, "imports", n).sum())
    denom = net_demand_mwh(inp, solution) - imports
    if denom <= 0.0:
        return 1.0
    return 1.0 - non_qualifying / denom


def realized_emissions(inp: BuildInputs,
                       solution: Solution) -> EmissionsLedger | None:
    """Emissions ledger at the solved operating point, or None when the
    scenario carries no emissions calibration."""
    cal = inp.emissions
    if cal is None:
        return None
    x = _require_x(solution)
    params = inp.params
    gen_ex = gen_new = imports = 0.0
    for n in inp.node_ids:
        gen_ex += float(_col_series(inp, x, "fossil_ex", n).sum())
        gen_new += float(_col_series(inp, x, "fossil_new", n).sum())
        imports += float(_col_series(inp, x, "imports", n).sum())
    eps_elec = electricity_emissions(
        gen_ex, gen_new, imports,
        eta_existing=params.eta_ff_existing,
        eta_new=params.eta_ff_new,
        theta_ff_t_per_mwh=cal.theta_ff_t_per_mwh,
        theta_imp_t_per_mwh=cal.theta_imp_t_per_mwh,
        n_years=params.n_years,
    )
    if inp.free_p:
        r_heat, r_veh = _solved_rates(inp, x)
        # keep solver round-off from producing a (tiny) negative emission
        p_heat = min(max(r_heat, 0.0), 1.0)
        p_veh = min(max(r_veh, 0.0), 1.0)
    else:
        p_heat, p_veh = inp.demand.p_heat, inp.demand.p_veh
    eps_heat, eps_veh = cal.sector_constants(p_heat, p_veh)
    return EmissionsLedger(
        eps_elec=eps_elec,
        eps_heat=eps_heat,
        eps_veh=eps_veh,
        eps_transp_other=cal.eps_transp_other_mmt,
        eps_ind=cal.eps_industrial_mmt,
        eps_reference=cal.reference_mmt,
    )


# --------------------------------------------------------------------------
# curtailment and excess


@dataclass(frozen=True)
class CurtailmentReport:
    """Hourly curtailed energy by node, attributed across resources."""

    by_node: Mapping[str, np.ndarray]
    attribution: Mapping[str, Mapping[str, np.ndarray]]
    total_mwh: float
    by_bucket_mwh: Mapping[str, float]


_CURTAIL_BUCKETS = ("onshore", "offshore", "us-solar", "btm-solar", "other")


def curtailment_series(inp: BuildInputs, lp: LPInstance,
                       solution: Solution) -> CurtailmentReport:
    """Read the balance-row surplus as curtailment and attribute it.

    Each node-hour's surplus is split across the variable resources in
    proportion to their producible energy that hour; surplus with no
    variable potential behind it (must-run units) lands in ``"other"``.
    """
    x = _require_x(solution)
    slacks = _balance_slacks(inp, lp, solution)
    attribution = {b: {n: np.zeros(inp.n_hours) for n in inp.node_ids}
                   for b in _CURTAIL_BUCKETS}
    for n in inp.node_ids:
        pots = _vre_potentials(inp, x, n)
        for t in range(inp.n_hours):
            slack = max(float(slacks[n][t]), 0.0)
            shares = attribute_curtailment(
                slack, {b: float(pots[b][t]) for b in pots})
            for bucket, value in shares.items():
                attribution[bucket][n][t] = value
    totals = {b: float(sum(arr.sum() for arr in attribution[b].values()))
              for b in _CURTAIL_BUCKETS}
    return CurtailmentReport(
        by_node=slacks,
        attribution=attribution,
        total_mwh=float(sum(totals.values())),
        by_bucket_mwh=totals,
    )


@dataclass(frozen=True)
class ExcessReport:
    """System-wide low-carbon energy beyond concurrent demand."""

    series_mwh: np.ndarray
    total_mwh: float
    potential_mwh: float
    percent: float


def excess_low_carbon(inp: BuildInputs, lp: LPInstance,
                      solution: Solution) -> ExcessReport:
    """Hourly low-carbon potential in excess of total load, system-wide.

    Potential counts the variable resources at full producibility plus
    must-run hydro, flexible hydro as dispatched, and nuclear when it
    qualifies. Demand is the gross consumer load (storage and flows are
    internal to the system and excluded from both sides).
    """
    x = _require_x(solution)
    T = inp.n_hours
    potential = np.zeros(T)
    load = np.zeros(T)
    for n in inp.node_ids:
        for arr in _vre_potentials(inp, x, n).values():
            potential += arr
        potential += inp.hydro_fix[n]
        potential += _col_series(inp, x, "hydro_flex", n)
        if inp.config.include_nuclear:
            potential += np.asarray(inp.series.nuclear[n], dtype=float)
        load += _hourly_load(inp, x, n)
    series = excess_series(potential, load)
    total_potential = float(potential.sum())
    total_excess = float(series.sum())
    pct = 100.0 * total_excess / total_potential if total_potential > 0.0 else 0.0
    return ExcessReport(series_mwh=series, total_mwh=total_excess,
                        potential_mwh=total_potential, percent=pct)


# --------------------------------------------------------------------------
# energy closure


def energy_closure(inp: BuildInputs, lp: LPInstance,
                   solution: Solution) -> float:
    """Worst node-hour residual of supply - curtailment - load, in MWh.

    Supply and load are rebuilt from the inputs and the solution vector
    alone; curtailment comes from the recorded row slacks. The two routes
    only agree when the solution vector, the slacks, and this module's
    reading of the system all describe the same physics.
    """
    x = _require_x(solution)
    slacks = _balance_slacks(inp, lp, solution)
    receive = 1.0 - inp.params.tx_loss
    inflow, outflow = _flow_directions(inp)
    worst = 0.0
    for n in inp.node_ids:
        supply = np.zeros(inp.n_hours)
        for fam in ("fossil_ex", "fossil_new", "hydro_flex", "biofuel",
                    "imports", "batt_discharge", "h2_discharge"):
            supply += _col_series(inp, x, fam, n)
        for arr in _vre_potentials(inp, x, n).values():
            supply += arr
        supply += inp.hydro_fix[n]
        if inp.config.include_nuclear:
            supply += np.asarray(inp.series.nuclear[n], dtype=float)
        for direction in inflow[n]:
            for t in range(inp.n_hours):
                supply[t] += receive * float(
                    x[inp.catalog.index_of(f"flow[{direction},{t}]")])
        load = _hourly_load(inp, x, n)
        load += _col_series(inp, x, "batt_charge", n)
        load += _col_series(inp, x, "h2_charge", n)
        for direction in outflow[n]:
            for t in range(inp.n_hours):
                load[t] += float(
                    x[inp.catalog.index_of(f"flow[{direction},{t}]")])
        residual = supply - load - slacks[n]
        worst = max(worst, float(np.max(np.abs(residual))))
    return worst


# --------------------------------------------------------------------------
# cost attribution


COST_KEYS = (
    "onshore", "offshore", "us-solar", "btm-solar", "fossil-existing",
    "fossil-new", "hydro", "nuclear", "biofuel", "imports", "battery",
    "hydrogen", "transmission", "existing-capacity",
)

LCOE_KEYS = (
    "onshore", "offshore", "us-solar", "btm-solar", "fossil-existing",
    "fossil-new", "hydro", "nuclear", "biofuel", "imports", "battery",
    "hydrogen",
)

CAPACITY_KEYS = (
    "onshore", "offshore", "us-solar", "btm-solar", "fossil-existing",
    "fossil-new", "hydro", "nuclear", "battery-power", "battery-energy",
    "h2-power", "h2-energy", "new-transmission",
)

GENERATION_KEYS = (
    "onshore", "offshore", "us-solar", "btm-solar", "hydro-fixed",
    "hydro-flex", "nuclear", "fossil-existing", "fossil-new", "biofuel",
    "imports", "battery-discharge", "h2-discharge",
)

# column families carrying real costs, mapped to their reporting bucket
_FAMILY_BUCKET = {
    "cap_onshore": "onshore",
    "cap_offshore": "offshore",
    "cap_us_solar": "us-solar",
    "cap_fossil": "fossil-new",
    "fossil_new": "fossil-new",
    "ramp_new": "fossil-new",
    "fossil_ex": "fossil-existing",
    "ramp_ex": "fossil-existing",
    "hydro_flex": "hydro",
    "biofuel": "biofuel",
    "imports": "imports",
    "cap_battery_energy": "battery",
    "cap_battery_power": "battery",
    "cap_h2_energy": "hydrogen",
    "cap_h2_power": "hydrogen",
    "cap_tx": "transmission",
}

# families whose only cost is the nominal anti-churn charge
_NOMINAL_FAMILIES = frozenset(
    {"batt_charge", "batt_discharge", "h2_charge", "h2_discharge", "flow"})


def _family_of(col_name: str) -> str:
    head, _, _ = col_name.partition("[")
    return head


def _cost_buckets(inp: BuildInputs, lp: LPInstance,
                  x: np.ndarray) -> tuple[dict[str, float], float]:
    """(per-resource costs, nominal activity charges); sums to the objective.

    Variable columns contribute objective-coefficient times value; the
    objective's constant offset is re-derived from the inputs and split
    between the existing-capacity charge and the must-run energy buckets.
    """
    buckets = {key: 0.0 for key in COST_KEYS}
    nominal = 0.0
    for j, name in enumerate(lp.col_names):
        coeff = float(lp.objective[j])
        if coeff == 0.0:
            continue
        cost = coeff * float(x[j])
        fam = _family_of(name)
        if fam in _NOMINAL_FAMILIES:
            nominal += cost
        else:
            buckets[_FAMILY_BUCKET[fam]] += cost
    costs = inp.costs
    n_years = inp.params.n_years
    for n in inp.node_ids:
        node = inp.network.node(n)
        eligible = node.eligible_existing_cap_mw
        if not inp.config.include_nuclear:
            eligible -= node.nuclear_mw
        buckets["existing-capacity"] += n_years * (
            costs.ex_cap.get(n, 0.0) * eligible * 1000.0
            + costs.ex_tx.get(n, 0.0) * node.existing_tx_flow_mwh)
        buckets["hydro"] += float(np.sum(inp.hydro_fix[n])) \
            * costs.c_hydro.get(n, 0.0)
        if inp.config.include_nuclear:
            buckets["nuclear"] += float(np.sum(inp.series.nuclear[n])) \
                * costs.c_nuc.get(n, 0.0)
    return buckets, nominal


def _delivered_mwh(inp: BuildInputs, x: np.ndarray,
                   curtail: CurtailmentReport) -> dict[str, float]:
    """Delivered energy per resource key, matching the cost buckets."""
    out = {key: 0.0 for key in LCOE_KEYS}
    for n in inp.node_ids:
        pots = _vre_potentials(inp, x, n)
        for bucket in ("onshore", "offshore", "us-solar", "btm-solar"):
            out[bucket] += float(pots[bucket].sum()) \
                - float(curtail.attribution[bucket][n].sum())
        out["fossil-existing"] += float(_col_series(inp, x, "fossil_ex", n).sum())
        out["fossil-new"] += float(_col_series(inp, x, "fossil_new", n).sum())
        out["hydro"] += float(inp.hydro_fix[n].sum()) \
            + float(_col_series(inp, x, "hydro_flex", n).sum())
        if inp.config.include_nuclear:
            out["nuclear"] += float(np.sum(inp.series.nuclear[n]))
        out["biofuel"] += float(_col_series(inp, x, "biofuel", n).sum())
        out["imports"] += float(_col_series(inp, x, "imports", n).sum())
        out["battery"] += float(_col_series(inp, x, "batt_discharge", n).sum())
        out["hydrogen"] += float(_col_series(inp, x, "h2_discharge", n).sum())
    return out


def _capacity_gw(inp: BuildInputs, x: np.ndarray) -> dict[str, float]:
    """Installed capacity after the build decisions, in GW (energy in GWh)."""
    out = {key: 0.0 for key in CAPACITY_KEYS}
    for n in inp.node_ids:
        node = inp.network.node(n)
        out["onshore"] += node.onshore_existing_mw \
            + _col_scalar(inp, x, f"cap_onshore[{n}]")
        out["offshore"] += node.offshore_existing_mw \
            + _col_scalar(inp, x, f"cap_offshore[{n}]")
        out["us-solar"] += node.us_solar_existing_mw \
            + _col_scalar(inp, x, f"cap_us_solar[{n}]")
        out["btm-solar"] += inp.demand.x_btm_mw[n]
        out["fossil-existing"] += node.gas_existing_mw
        out["fossil-new"] += _col_scalar(inp, x, f"cap_fossil[{n}]")
        out["hydro"] += node.hydro_fixed_mw + node.hydro_flex_mw
        out["nuclear"] += node.nuclear_mw if inp.config.include_nuclear else 0.0
        out["battery-power"] += node.battery_power_existing_mw \
            + _col_scalar(inp, x, f"cap_battery_power[{n}]")
        out["battery-energy"] += node.battery_energy_existing_mwh \
            + _col_scalar(inp, x, f"cap_battery_energy[{n}]")
        out["h2-power"] += _col_scalar(inp, x, f"cap_h2_power[{n}]")
        out["h2-energy"] += _col_scalar(inp, x, f"cap_h2_energy[{n}]")
    for key in inp.interface_keys:
        out["new-transmission"] += _col_scalar(inp, x, f"cap_tx[{key}]")
    return {key: value / 1000.0 for key, value in out.items()}


def _generation_avg(inp: BuildInputs, x: np.ndarray,
                    curtail: CurtailmentReport) -> dict[str, float]:
    """Average delivered output per resource in GWh per hour."""
    per_hour = 1.0 / (inp.n_hours * 1000.0)
    out = {key: 0.0 for key in GENERATION_KEYS}
    for n in inp.node_ids:
        pots = _vre_potentials(inp, x, n)
        for bucket in ("onshore", "offshore", "us-solar", "btm-solar"):
            out[bucket] += float(pots[bucket].sum()) \
                - float(curtail.attribution[bucket][n].sum())
        out["hydro-fixed"] += float(inp.hydro_fix[n].sum())
        out["hydro-flex"] += float(_col_series(inp, x, "hydro_flex", n).sum())
        if inp.config.include_nuclear:
            out["nuclear"] += float(np.sum(inp.series.nuclear[n]))
        out["fossil-existing"] += float(_col_series(inp, x, "fossil_ex", n).sum())
        out["fossil-new"] += float(_col_series(inp, x, "fossil_new", n).sum())
        out["biofuel"] += float(_col_series(inp, x, "biofuel", n).sum())
        out["imports"] += float(_col_series(inp, x, "imports", n).sum())
        out["battery-discharge"] += float(
            _col_series(inp, x, "batt_discharge", n).sum())
        out["h2-discharge"] += float(
            _col_series(inp, x, "h2_discharge", n).sum())
    return {key: value * per_hour for key, value in out.items()}


# --------------------------------------------------------------------------
# the scenario report


@dataclass(frozen=True)
class ScenarioReport:
    """Everything reported for one solved scenario.

    ``None`` means "not defined here" (no emissions calibration, resource
    that delivered nothing) and serializes as an empty CSV field or JSON
    null, never as zero.
    """

    label: str
    mode: str
    status: str
    lcp_target: float | None
    rgt_target: float | None
    omega_target: float | None
    heat_electrified: float
    vehicle_electrified: float
    lcp_realized: float
    ghg_reduction: float | None
    ghg_change_percent: float | None
    net_demand_mwh: float
    avg_load_gwh_per_hour: float
    total_cost_usd: float
    nominal_cost_usd: float
    lcoe_usd_per_mwh: float
    battery_throughput_gwh: float
    capacity: Mapping[str, float]
    generation_avg_gwh_per_hour: Mapping[str, float]
    cost_usd: Mapping[str, float]
    resource_lcoe_usd_per_mwh: Mapping[str, float | None]
    curtailment: CurtailmentReport
    excess: ExcessReport
    emissions: EmissionsLedger | None


def summarize(inp: BuildInputs, lp: LPInstance, solution: Solution,
              label: str = "") -> ScenarioReport:
    """Assemble the full report for a solved scenario."""
    x = _require_x(solution)
    curtail = curtailment_series(inp, lp, solution)
    buckets, nominal = _cost_buckets(inp, lp, x)
    delivered = _delivered_mwh(inp, x, curtail)
    resource_lcoe = {key: unit_cost(buckets[key], delivered[key])
                     for key in LCOE_KEYS}
    net_demand = net_demand_mwh(inp, solution)
    ledger = realized_emissions(inp, solution)
    reduction = ghg_reduction(ledger) if ledger is not None else None
    r_heat, r_veh = _electrified_rates(inp, x)
    return ScenarioReport(
        label=label,
        mode=inp.config.mode,
        status=solution.status,
        lcp_target=inp.config.lcp,
        rgt_target=inp.config.rgt,
        omega_target=inp.config.omega,
        heat_electrified=r_heat,
        vehicle_electrified=r_veh,
        lcp_realized=realized_low_carbon_share(inp, solution),
        ghg_reduction=reduction,
        ghg_change_percent=(
            -100.0 * reduction if reduction is not None else None),
        net_demand_mwh=net_demand,
        avg_load_gwh_per_hour=net_demand / (inp.n_hours * 1000.0),
        total_cost_usd=float(solution.objective),
        nominal_cost_usd=nominal,
        lcoe_usd_per_mwh=compute_lcoe(float(solution.objective), net_demand),
        battery_throughput_gwh=delivered["battery"] / 1000.0,
        capacity=_capacity_gw(inp, x),
        generation_avg_gwh_per_hour=_generation_avg(inp, x, curtail),
        cost_usd=buckets,
        resource_lcoe_usd_per_mwh=resource_lcoe,
        curtailment=curtail,
        excess=excess_low_carbon(inp, lp, solution),
        emissions=ledger,
    )


# --------------------------------------------------------------------------
# serialization


_SCALAR_COLUMNS = (
    "label", "mode", "status", "lcp_target", "rgt_target", "omega_target",
    "heat_electrified", "vehicle_electrified", "lcp_realized",
    "ghg_reduction", "ghg_change_percent", "net_demand_mwh",
    "avg_load_gwh_per_hour", "total_cost_usd", "nominal_cost_usd",
    "lcoe_usd_per_mwh", "battery_throughput_gwh", "curtailment_gwh",
    "excess_low_carbon_percent",
)

CSV_COLUMNS = (
    _SCALAR_COLUMNS
    + tuple(f"cap[{key}]" for key in CAPACITY_KEYS)
    + tuple(f"gen[{key}]" for key in GENERATION_KEYS)
    + tuple(f"cost[{key}]" for key in COST_KEYS)
    + tuple(f"lcoe[{key}]" for key in LCOE_KEYS)
)


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def csv_row(report: ScenarioReport) -> dict[str, str]:
    """One flat CSV row; None becomes an empty field, floats use repr."""
    row = {
        "label": report.label,
        "mode": report.mode,
        "status": report.status,
        "lcp_target": report.lcp_target,
        "rgt_target": report.rgt_target,
        "omega_target": report.omega_target,
        "heat_electrified": report.heat_electrified,
        "vehicle_electrified": report.vehicle_electrified,
        "lcp_realized": report.lcp_realized,
        "ghg_reduction": report.ghg_reduction,
        "ghg_change_percent": report.ghg_change_percent,
        "net_demand_mwh": report.net_demand_mwh,
        "avg_load_gwh_per_hour": report.avg_load_gwh_per_hour,
        "total_cost_usd": report.total_cost_usd,
        "nominal_cost_usd": report.nominal_cost_usd,
        "lcoe_usd_per_mwh": report.lcoe_usd_per_mwh,
        "battery_throughput_gwh": report.battery_throughput_gwh,
        "curtailment_gwh": report.curtailment.total_mwh / 1000.0,
        "excess_low_carbon_percent": report.excess.percent,
    }
    for key in CAPACITY_KEYS:
        row[f"cap[{key}]"] = report.capacity[key]
    for key in GENERATION_KEYS:
        row[f"gen[{key}]"] = report.generation_avg_gwh_per_hour[key]
    for key in COST_KEYS:
        row[f"cost[{key}]"] = report.cost_usd[key]
    for key in LCOE_KEYS:
        row[f"lcoe[{key}]"] = report.resource_lcoe_usd_per_mwh[key]
    return {key: _cell(value) for key, value in row.items()}


def render_report_csv(items) -> str:
    """The report CSV as a string: one row per scenario.

    ``items`` may mix ScenarioReport objects with pre-rendered mappings
    (used for cells that failed to solve); missing fields are left empty.
    """
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=CSV_COLUMNS,
                            lineterminator="\n")
    writer.writeheader()
    for item in items:
        if isinstance(item, ScenarioReport):
            row = csv_row(item)
        else:
            row = {key: _cell(item.get(key)) for key in CSV_COLUMNS}
        writer.writerow(row)
    return buffer.getvalue()


def write_report_csv(path, items) -> None:
    """Write one CSV row per scenario (see render_report_csv)."""
    with open(path, "w", newline="") as fh:
        fh.write(render_report_csv(items))


def _jsonify(value):
    if isinstance(value, np.ndarray):
        return [float(v) for v in value]
    if isinstance(value, (np.floating, np.integer)):
        return float(value)
    if dataclasses.is_dataclass(value) and not isinstance(value, type):
        return {f.name: _jsonify(getattr(value, f.name))
                for f in dataclasses.fields(value)}
    if isinstance(value, Mapping):
        return {str(k): _jsonify(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonify(v) for v in value]
    return value


def report_json_dict(report: ScenarioReport) -> dict:
    """The full nested report as plain JSON-serializable types."""
    return _jsonify(report)


def write_operations_csv(path, inp: BuildInputs, lp: LPInstance,
                         solution: Solution) -> None:
    """Dump hourly operation as (node, t, resource, mwh) rows.

    Every dispatch decision, must-run output, variable-resource potential,
    storage state, load, curtailment, and both ends of every interface flow
    (sent and delivered) appear; rows are sorted by node, hour, and
    resource name so repeat writes are byte-identical.
    """
    x = _require_x(solution)
    T = inp.n_hours
    slacks = _balance_slacks(inp, lp, solution)
    receive = 1.0 - inp.params.tx_loss
    rows: list[tuple[str, int, str, float]] = []

    def add_series(n: str, resource: str, values) -> None:
        arr = np.asarray(values, dtype=float)
        rows.extend((n, t, resource, float(arr[t])) for t in range(T))

    for n in inp.node_ids:
        node = inp.network.node(n)
        pots = _vre_potentials(inp, x, n)
        if node.onshore_existing_mw or inp.catalog.get(f"cap_onshore[{n}]"):
            add_series(n, "onshore", pots["onshore"])
        if node.offshore_existing_mw or inp.catalog.get(f"cap_offshore[{n}]"):
            add_series(n, "offshore", pots["offshore"])
        if node.us_solar_existing_mw or inp.catalog.get(f"cap_us_solar[{n}]"):
            add_series(n, "us-solar", pots["us-solar"])
        if inp.demand.x_btm_mw[n] > 0.0:
            add_series(n, "btm-solar", pots["btm-solar"])
        if n in inp.fossil_ex_nodes:
            add_series(n, "fossil-existing", _col_series(inp, x, "fossil_ex", n))
        if n in inp.fossil_build:
            add_series(n, "fossil-new", _col_series(inp, x, "fossil_new", n))
        if np.any(inp.hydro_fix[n] != 0.0):
            add_series(n, "hydro-fixed", inp.hydro_fix[n])
        if n in inp.hydro_nodes:
            add_series(n, "hydro-flex", _col_series(inp, x, "hydro_flex", n))
        if inp.config.include_nuclear and np.any(
                np.asarray(inp.series.nuclear[n]) != 0.0):
            add_series(n, "nuclear", inp.series.nuclear[n])
        if n in inp.bio_nodes:
            add_series(n, "biofuel", _col_series(inp, x, "biofuel", n))
        if n in inp.import_nodes:
            add_series(n, "imports", _col_series(inp, x, "imports", n))
        if n in inp.battery_nodes:
            add_series(n, "battery-charge", _col_series(inp, x, "batt_charge", n))
            add_series(n, "battery-discharge",
                       _col_series(inp, x, "batt_discharge", n))
            add_series(n, "battery-soc", _col_series(inp, x, "batt_soc", n))
        if n in inp.h2_nodes:
            add_series(n, "h2-charge", _col_series(inp, x, "h2_charge", n))
            add_series(n, "h2-discharge", _col_series(inp, x, "h2_discharge", n))
            add_series(n, "h2-soc", _col_series(inp, x, "h2_soc", n))
        if n in inp.ev_nodes:
            ev = np.zeros(T)
            for t in inp.ev_hours.get(n, ()):
                ev[t] = float(x[inp.catalog.index_of(f"ev_flex[{n},{t}]")])
            add_series(n, "ev-charging", ev)
        add_series(n, "load", _hourly_load(inp, x, n))
        add_series(n, "curtailment", np.maximum(slacks[n], 0.0))

    for key in inp.interface_keys:
        iface = inp.iface_by_key[key]
        for direction in (f"{iface.node_a}>{iface.node_b}",
                          f"{iface.node_b}>{iface.node_a}"):
            sender = direction.split(">", 1)[0]
            receiver = direction.split(">", 1)[1]
            sent = np.array([
                float(x[inp.catalog.index_of(f"flow[{direction},{t}]")])
                for t in range(T)])
            rows.extend((sender, t, f"flow-out[{direction}]", float(sent[t]))
                        for t in range(T))
            rows.extend(
                (receiver, t, f"flow-in[{direction}]", float(receive * sent[t]))
                for t in range(T))

    rows.sort(key=lambda r: (r[0], r[1], r[2]))
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["node", "t", "resource", "mwh"])
        for n, t, resource, mwh in rows:
            writer.writerow([n, t, resource, repr(mwh)])
