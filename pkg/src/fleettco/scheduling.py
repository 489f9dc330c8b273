"""Depot station minimization: schedule refueling/charging within dwell windows.

Finds the minimum number of stations (dispensers or chargers) such that
every vehicle receives its required service time inside its dwell window,
services on one station never overlap, and no service runs past the
station's operational limit. The solver is exact: it tries station counts
from a lower bound upward and proves feasibility with a complete
depth-first search; a set-partition brute force serves as an independent
oracle for small instances.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .errors import InfeasibleScheduleError, InvalidInputError, SizeLimitError

# Times are continuous hours; keys and tie-breaks round to this resolution
# so results are reproducible across platforms.
RESOLUTION_H = 0.01

BRUTE_FORCE_MAX_VEHICLES = 8


@dataclass(frozen=True)
class Vehicle:
    """One vehicle's depot visit: arrival, dwell window, required service."""

    id: str
    arrival_h: float
    dwell_h: float
    required_h: float


@dataclass(frozen=True)
class FleetInstance:
    """A scheduling instance: vehicles plus the station operational limit."""

    vehicles: tuple[Vehicle, ...]
    max_operational_h: float = 24.0

    def __post_init__(self):
        if self.max_operational_h <= 0:
            raise InvalidInputError("max_operational_h must be positive")
        for v in self.vehicles:
            if not (0.0 <= v.arrival_h < 24.0):
                raise InvalidInputError(f"vehicle {v.id}: arrival_h must be in [0, 24)")
            if v.dwell_h <= 0:
                raise InvalidInputError(f"vehicle {v.id}: dwell_h must be positive")
            if v.required_h <= 0:
                raise InvalidInputError(f"vehicle {v.id}: required_h must be positive")


@dataclass(frozen=True)
class Assignment:
    vehicle_id: str
    station: int
    start_h: float
    end_h: float


@dataclass(frozen=True)
class Schedule:
    station_count: int
    assignments: tuple[Assignment, ...]


def _deadline(v: Vehicle, max_op: float) -> float:
    return min(v.arrival_h + v.dwell_h, max_op)


def _infeasible_vehicles(instance: FleetInstance) -> list[str]:
    bad = []
    for v in instance.vehicles:
        if v.arrival_h + v.required_h > _deadline(v, instance.max_operational_h) + 1e-9:
            bad.append(v.id)
    return bad


def _round(t: float) -> float:
    return round(t / RESOLUTION_H) * RESOLUTION_H


def forced_overlap_lower_bound(instance: FleetInstance) -> int:
    """Stations needed at the worst instant, counting vehicles whose every
    feasible placement covers that instant (mandatory-interval overlap)."""
    events = []
    for v in instance.vehicles:
        latest_start = _deadline(v, instance.max_operational_h) - v.required_h
        earliest_end = v.arrival_h + v.required_h
        if latest_start < earliest_end - 1e-12:
            events.append((latest_start, 1))
            events.append((earliest_end, -1))
    if not events:
        return 1 if instance.vehicles else 0
    events.sort()
    best = depth = 0
    for _, delta in events:
        depth += delta
        best = max(best, depth)
    return max(best, 1)


def _head_capacity_feasible(instance: FleetInstance, k: int) -> bool:
    """Necessary condition: k stations can serve at most the sum of the
    capacities of the k earliest-arriving head vehicles, where a head
    arriving at ``a`` bounds its station's workload by the time left
    until the latest deadline."""
    vehicles = instance.vehicles
    n = len(vehicles)
    if n == 0:
        return True
    limit = min(instance.max_operational_h, max(_deadline(v, instance.max_operational_h) for v in vehicles))
    req_sorted = sorted(v.required_h for v in vehicles)
    prefix = [0.0]
    for r in req_sorted:
        prefix.append(prefix[-1] + r)

    def capacity(arrival: float) -> int:
        window = limit - arrival
        m = 0
        while m < n and prefix[m + 1] <= window + 1e-9:
            m += 1
        return m

    arrivals = sorted(v.arrival_h for v in vehicles)
    total = sum(capacity(a) for a in arrivals[:k])
    return total >= n


def _search_assignment(instance: FleetInstance, k: int) -> list[tuple[int, int, float]] | None:
    """Complete DFS for a feasible k-station schedule.

    Returns [(vehicle_index, station, start)] or None. Branches over
    (vehicle, station) pairs; symmetric stations and dominated placements
    are skipped, which preserves completeness: among stations free before
    a vehicle's arrival only the latest-finishing one needs trying, and
    stations with identical finish times are interchangeable.
    """
    vehicles = instance.vehicles
    n = len(vehicles)
    max_op = instance.max_operational_h
    order = sorted(
        range(n),
        key=lambda i: (_deadline(vehicles[i], max_op), vehicles[i].arrival_h, vehicles[i].id),
    )
    arrivals = [vehicles[i].arrival_h for i in range(n)]
    required = [vehicles[i].required_h for i in range(n)]
    deadlines = [_deadline(vehicles[i], max_op) for i in range(n)]

    finish = [0.0] * k
    placed: list[tuple[int, int, float]] = []
    visited: set[tuple[int, tuple[float, ...]]] = set()

    def remaining_fits(mask: int) -> bool:
        # Every unscheduled vehicle must still fit on some station, and the
        # total remaining work must fit into the total remaining open time.
        rem = 0.0
        latest = 0.0
        for pos in range(n):
            if not (mask >> pos) & 1:
                continue
            i = order[pos]
            rem += required[i]
            latest = max(latest, deadlines[i])
            ok = False
            for f in finish:
                if max(arrivals[i], f) + required[i] <= deadlines[i] + 1e-9:
                    ok = True
                    break
            if not ok:
                return False
        open_time = sum(max(latest - f, 0.0) for f in finish)
        return rem <= open_time + 1e-9

    def candidates(i: int) -> list[int]:
        # Distinct stations worth trying for vehicle i, dominant ones first.
        by_finish: dict[float, int] = {}
        for j, f in enumerate(finish):
            key = _round(f)
            if key not in by_finish:
                by_finish[key] = j
        free_before = [f for f in by_finish if f <= arrivals[i] + 1e-9]
        out: list[int] = []
        if free_before:
            out.append(by_finish[max(free_before)])
        for f in sorted(by_finish):
            if f > arrivals[i] + 1e-9:
                out.append(by_finish[f])
        return out

    def dfs(mask: int) -> bool:
        if mask == 0:
            return True
        key = (mask, tuple(sorted(_round(f) for f in finish)))
        if key in visited:
            return False
        if not remaining_fits(mask):
            visited.add(key)
            return False
        # Branch over every (vehicle, station) pair; vehicle order is EDF so
        # the first dive mirrors a deadline-greedy construction.
        for pos in range(n):
            if not (mask >> pos) & 1:
                continue
            i = order[pos]
            for j in candidates(i):
                start = max(arrivals[i], finish[j])
                end = start + required[i]
                if end > deadlines[i] + 1e-9 or end > max_op + 1e-9:
                    continue
                old = finish[j]
                finish[j] = end
                placed.append((i, j, start))
                if dfs(mask & ~(1 << pos)):
                    return True
                placed.pop()
                finish[j] = old
        visited.add(key)
        return False

    full_mask = (1 << n) - 1
    if dfs(full_mask):
        return list(placed)
    return None


def min_stations(instance: FleetInstance) -> Schedule:
    """Minimum-station schedule, deterministic for a fixed instance.

    Raises InfeasibleScheduleError naming any vehicle whose required time
    cannot fit in its own window or the operational limit.
    """
    bad = _infeasible_vehicles(instance)
    if bad:
        raise InfeasibleScheduleError("no feasible schedule", vehicle_ids=bad)
    n = len(instance.vehicles)
    if n == 0:
        return Schedule(station_count=0, assignments=())
    lb = forced_overlap_lower_bound(instance)
    for k in range(lb, n + 1):
        if not _head_capacity_feasible(instance, k):
            continue
        result = _search_assignment(instance, k)
        if result is not None:
            return _canonical_schedule(instance, k, result)
    raise InfeasibleScheduleError("no feasible schedule up to one station per vehicle")


def _canonical_schedule(
    instance: FleetInstance, k: int, placements: list[tuple[int, int, float]]
) -> Schedule:
    # Relabel stations by first service start so output is stable.
    first_start: dict[int, float] = {}
    for i, j, start in placements:
        first_start[j] = min(first_start.get(j, math.inf), start)
    label = {
        j: rank
        for rank, j in enumerate(sorted(first_start, key=lambda j: (first_start[j], j)))
    }
    assignments = [
        Assignment(
            vehicle_id=instance.vehicles[i].id,
            station=label[j],
            start_h=_round(start),
            end_h=_round(start + instance.vehicles[i].required_h),
        )
        for i, j, start in placements
    ]
    assignments.sort(key=lambda a: (a.station, a.start_h, a.vehicle_id))
    return Schedule(station_count=k, assignments=tuple(assignments))


def brute_force_min_stations(instance: FleetInstance) -> int:
    """Exhaustive set-partition search; exact optimum for small instances."""
    n = len(instance.vehicles)
    if n > BRUTE_FORCE_MAX_VEHICLES:
        raise SizeLimitError(
            f"brute force handles at most {BRUTE_FORCE_MAX_VEHICLES} vehicles, got {n}"
        )
    bad = _infeasible_vehicles(instance)
    if bad:
        raise InfeasibleScheduleError("no feasible schedule", vehicle_ids=bad)
    if n == 0:
        return 0
    vehicles = instance.vehicles
    max_op = instance.max_operational_h

    def block_feasible(block: tuple[int, ...]) -> bool:
        # One station: search service orders, earliest-start semantics.
        def rec(remaining: frozenset[int], time: float) -> bool:
            if not remaining:
                return True
            for i in remaining:
                start = max(vehicles[i].arrival_h, time)
                end = start + vehicles[i].required_h
                if end <= _deadline(vehicles[i], max_op) + 1e-9 and end <= max_op + 1e-9:
                    if rec(remaining - {i}, end):
                        return True
            return False

        return rec(frozenset(block), 0.0)

    feasible_cache: dict[tuple[int, ...], bool] = {}

    def check(block: tuple[int, ...]) -> bool:
        if block not in feasible_cache:
            feasible_cache[block] = block_feasible(block)
        return feasible_cache[block]

    best = n

    def extend(idx: int, blocks: list[list[int]]):
        nonlocal best
        if idx == n:
            best = min(best, len(blocks))
            return
        if len(blocks) >= best:
            return
        for b in blocks:
            b.append(idx)
            if check(tuple(b)):
                extend(idx + 1, blocks)
            b.pop()
        blocks.append([idx])
        extend(idx + 1, blocks)
        blocks.pop()

    extend(0, [])
    return best


def utilization(schedule: Schedule, horizon_hours: float) -> float:
    """Busy hours divided by available station-hours over the horizon."""
    if horizon_hours <= 0:
        raise InvalidInputError("horizon_hours must be positive")
    if schedule.station_count == 0:
        return 0.0
    busy = sum(a.end_h - a.start_h for a in schedule.assignments)
    return busy / (schedule.station_count * horizon_hours)


def verify_schedule(instance: FleetInstance, schedule: Schedule) -> list[str]:
    """Re-check every constraint on a returned schedule; [] means valid."""
    problems: list[str] = []
    tol = 1e-6
    by_vehicle: dict[str, list[Assignment]] = {}
    for a in schedule.assignments:
        by_vehicle.setdefault(a.vehicle_id, []).append(a)
    for v in instance.vehicles:
        assigned = by_vehicle.get(v.id, [])
        if len(assigned) != 1:
            problems.append(f"vehicle {v.id} assigned {len(assigned)} times")
            continue
        a = assigned[0]
        if a.start_h < v.arrival_h - tol:
            problems.append(f"vehicle {v.id} starts before arrival")
        if a.end_h > v.arrival_h + v.dwell_h + RESOLUTION_H + tol:
            problems.append(f"vehicle {v.id} ends after its dwell window")
        if a.end_h > instance.max_operational_h + RESOLUTION_H + tol:
            problems.append(f"vehicle {v.id} ends after the operational limit")
        if abs((a.end_h - a.start_h) - v.required_h) > RESOLUTION_H + tol:
            problems.append(f"vehicle {v.id} service duration mismatch")
    extra = set(by_vehicle) - {v.id for v in instance.vehicles}
    for vid in sorted(extra):
        problems.append(f"unknown vehicle {vid} in schedule")
    by_station: dict[int, list[Assignment]] = {}
    for a in schedule.assignments:
        by_station.setdefault(a.station, []).append(a)
    for station, items in sorted(by_station.items()):
        items.sort(key=lambda a: a.start_h)
        for prev, cur in zip(items, items[1:]):
            if cur.start_h < prev.end_h - tol:
                problems.append(
                    f"station {station}: {prev.vehicle_id} and {cur.vehicle_id} overlap"
                )
    if len(by_station) > schedule.station_count:
        problems.append("more stations used than station_count")
    return problems


INSTANCE_FIELDS = ["id", "arrival_h", "dwell_h", "required_h"]
SCHEDULE_FIELDS = ["vehicle", "station", "start_h", "end_h"]


def read_instance(path: str | Path, max_operational_h: float = 24.0) -> FleetInstance:
    """Read a fleet instance from a CSV of (id, arrival_h, dwell_h, required_h)."""
    vehicles = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        missing = [f for f in INSTANCE_FIELDS if f not in (reader.fieldnames or [])]
        if missing:
            raise InvalidInputError(f"instance file missing columns: {missing}")
        for row in reader:
            vehicles.append(
                Vehicle(
                    id=row["id"],
                    arrival_h=float(row["arrival_h"]),
                    dwell_h=float(row["dwell_h"]),
                    required_h=float(row["required_h"]),
                )
            )
    return FleetInstance(vehicles=tuple(vehicles), max_operational_h=max_operational_h)


def write_instance(path: str | Path, instance: FleetInstance) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(INSTANCE_FIELDS)
        for v in instance.vehicles:
            writer.writerow([v.id, f"{v.arrival_h:.4f}", f"{v.dwell_h:.4f}", f"{v.required_h:.4f}"])


def schedule_rows(schedule: Schedule) -> list[list[str]]:
    """Schedule as delimited rows (vehicle, station, start_h, end_h)."""
    return [
        [a.vehicle_id, str(a.station), f"{a.start_h:.4f}", f"{a.end_h:.4f}"]
        for a in schedule.assignments
    ]
