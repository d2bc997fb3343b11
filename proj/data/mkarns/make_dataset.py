#!/usr/bin/env python3
"""Writes the bundled 30-port instance into this directory.

Published tables (rates, unit costs, per-port capacities) are copied verbatim.
Everything else (river miles, counties, distances, unit capacities, rail flags,
volumes and scenario demand levels) is synthetic and drawn from a fixed seed.
Run from any directory:  python3 data/mkarns/make_dataset.py
"""

import csv
import math
import os
import random

OUT = os.path.dirname(os.path.abspath(__file__))
rng = random.Random(20190401)

# ---- published tables -------------------------------------------------------

RATES = [("truck", 0, 0.185), ("rail", 22.65, 0.033), ("barge", 0, 0.0089)]

# id, unit cost, tons per month per unit (capacity synthetic, sized so one unit
# pays back one to two times its price over the horizon when it binds)
EQUIPMENT = [
    ("conveyor", 18723, 2400),
    ("crane", 300000, 25000),
    ("hopper", 18723, 2000),
    ("forklift", 96738, 9000),
    ("petroleum_tank", 1109090, 7624),
    ("chemical_tank", 1109090, 7624),
]

# id, unit cost, tons per unit (capacity synthetic, converted from the published specification)
STORAGE = [
    ("grain_elevator", 227866, 19500),
    ("unpaved_storage", 692769, 54700),
    ("paved_storage", 307065, 28800),
    ("warehouse", 5663854, 7700),
    ("chemical_storage_tank", 1109090, 18750),
    ("petroleum_storage_tank", 1109090, 18750),
]

# Port: crane/conveyor/hopper/forklift, crane/forklift, petroleum tank, chemical tank (ton/month)
PROCESSING = [
    (32400, 0, 0, 7624), (34425, 0, 0, 0), (30375, 0, 0, 0), (30000, 0, 0, 0), (0, 150000, 0, 7624),
    (0, 0, 0, 0), (30000, 0, 0, 0), (50250, 9300, 0, 0), (30000, 0, 0, 0), (0, 210000, 0, 0),
    (30000, 0, 0, 0), (30375, 0, 0, 0), (38700, 200700, 0, 0), (0, 0, 38120, 0), (129300, 21600, 7624, 0),
    (0, 0, 0, 22872), (105000, 0, 0, 0), (0, 58500, 0, 0), (26250, 0, 0, 0), (52500, 0, 0, 0),
    (30000, 0, 0, 0), (26250, 0, 0, 0), (4050, 0, 0, 0), (52500, 0, 0, 0), (15000, 0, 0, 0),
    (0, 90000, 0, 0), (76650, 30000, 0, 0), (20250, 0, 0, 0), (34425, 0, 0, 0), (105000, 0, 0, 0),
]

# Port: grain elevator, unpaved, paved, warehouse, chemical tank, petroleum tank (ton)
STORAGE_CAP = [
    (118800, 18687, 0, 4182, 0, 3600), (15984, 0, 0, 0, 0, 0), (61992, 0, 0, 0, 0, 0), (11556, 0, 0, 0, 0, 0),
    (0, 0, 0, 15410, 0, 0), (0, 0, 0, 0, 0, 26250), (11214, 0, 0, 0, 0, 0), (324, 0, 0, 48956, 0, 0),
    (0, 176380, 0, 0, 0, 0), (0, 115352, 0, 3679, 0, 0), (0, 0, 0, 4594, 0, 0), (113400, 0, 0, 0, 0, 0),
    (0, 143749, 191602, 5906, 0, 0), (0, 0, 0, 0, 29700, 0), (56700, 0, 5748048, 10731, 7950, 0),
    (0, 0, 0, 0, 0, 27300), (0, 261766, 0, 0, 0, 0), (0, 9793, 45646, 0, 0, 0), (0, 48243, 0, 0, 0, 0),
    (0, 50614, 188185, 0, 0, 0), (13500, 0, 0, 1254, 0, 0), (0, 0, 316559, 0, 0, 0), (17550, 0, 0, 10073, 0, 0),
    (0, 1069815, 0, 0, 0, 0), (0, 0, 1322985, 4534, 0, 0), (0, 0, 0, 10047, 0, 0), (0, 0, 492369, 13922, 0, 0),
    (22950, 0, 0, 0, 0, 0), (0, 125172, 0, 0, 0, 0), (0, 0, 0, 25988, 0, 0),
]
STORAGE_COLUMNS = ["grain_elevator", "unpaved_storage", "paved_storage", "warehouse",
                   "chemical_storage_tank", "petroleum_storage_tank"]

# Ten scenario weights: 2009-2016 and two projections.
SCENARIOS = [("y2009", 0.065), ("y2010", 0.07), ("y2011", 0.075), ("y2012", 0.08), ("y2013", 0.085),
             ("y2014", 0.09), ("y2015", 0.095), ("y2016", 0.1), ("proj_low", 0.2), ("proj_high", 0.14)]

# ---- synthetic parts --------------------------------------------------------

COMMODITIES = [("grain", 0.6), ("iron_steel", 1.2), ("chemicals", 1.8), ("petroleum", 1.5)]
COMPAT = [
    ("equipment", "conveyor", "grain"), ("equipment", "hopper", "grain"),
    ("equipment", "crane", "iron_steel"), ("equipment", "forklift", "iron_steel"),
    ("equipment", "chemical_tank", "chemicals"), ("equipment", "petroleum_tank", "petroleum"),
    ("storage", "grain_elevator", "grain"), ("storage", "unpaved_storage", "grain"),
    ("storage", "paved_storage", "iron_steel"), ("storage", "warehouse", "iron_steel"),
    ("storage", "chemical_storage_tank", "chemicals"), ("storage", "petroleum_storage_tank", "petroleum"),
]
PERIODS = 2
N_ORIGIN, N_DEST = 8, 8
CIRCUITY = 1.2

ports = [f"P{k:02d}" for k in range(1, 31)]
# Port 1 furthest upstream; about fifteen river miles apart.
river_mile = [round(445 - 15 * k + rng.uniform(-5, 5), 1) for k in range(30)]
port_rail = [1 if rng.random() < 0.5 else 0 for _ in ports]
origin_ports = list(range(0, 15))
dest_ports = list(range(15, 30))


def place(port_range):
    i = rng.choice(port_range)
    return river_mile[i] + rng.uniform(-25, 25), rng.uniform(15, 60) * rng.choice([-1, 1])


counties, cxy, crole = [], [], []
for k in range(N_ORIGIN):
    counties.append(f"O{k + 1:02d}")
    cxy.append(place(origin_ports))
    crole.append("origin")
for k in range(N_DEST):
    counties.append(f"D{k + 1:02d}")
    cxy.append(place(dest_ports))
    crole.append("destination")
county_rail = [1 if rng.random() < 0.5 else 0 for _ in counties]


def road(a, b):
    return round(CIRCUITY * math.hypot(a[0] - b[0], a[1] - b[1]), 1)


arcs = []
for j, xy in enumerate(cxy):
    pool = origin_ports if crole[j] == "origin" else dest_ports
    near = sorted(pool, key=lambda i: abs(river_mile[i] - xy[0]))[:3]
    for i in near:
        miles = road(xy, (river_mile[i], 0.0))
        arcs.append((counties[j], ports[i], "truck", miles))
        if county_rail[j] and port_rail[i]:
            arcs.append((counties[j], ports[i], "rail", miles))
for i in origin_ports:
    for k in dest_ports:
        arcs.append((ports[i], ports[k], "barge", round(abs(river_mile[i] - river_mile[k]), 1)))
for j in range(N_ORIGIN):
    for m in range(N_ORIGIN, N_ORIGIN + N_DEST):
        miles = round(road(cxy[j], cxy[m]) + 10.0, 1)
        arcs.append((counties[j], counties[m], "truck", miles))
        if county_rail[j] and county_rail[m]:
            arcs.append((counties[j], counties[m], "rail", miles))

# Monthly tons: each destination county takes two or three commodities.
BASE_DEMAND = {"grain": 40000, "iron_steel": 30000, "chemicals": 6000, "petroleum": 6000}
wants = []
for m in range(N_DEST):
    picks = {"grain", "iron_steel"} if m % 2 == 0 else {"grain", rng.choice(["chemicals", "petroleum"])}
    if rng.random() < 0.4:
        picks.add(rng.choice(["iron_steel", "chemicals", "petroleum"]))
    wants.append(picks)
base = {}
for m in range(N_DEST):
    for c, _ in COMMODITIES:
        for p in range(1, PERIODS + 1):
            base[(m, c, p)] = round(BASE_DEMAND[c] * rng.uniform(0.6, 1.4) * (1.15 if p == 2 else 1.0)) if c in wants[m] else 0
level = {s: round(0.8 + 0.035 * k + rng.uniform(-0.05, 0.05), 3) for k, (s, _) in enumerate(SCENARIOS[:8])}
level["proj_low"], level["proj_high"] = 1.2, 1.45


def write(name, header, rows):
    with open(os.path.join(OUT, name), "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


write("rates.csv", ["mode", "fixed_per_ton", "per_ton_mile"], RATES)
write("equipment.csv", ["id", "unit_cost", "unit_capacity"], EQUIPMENT)
write("storage.csv", ["id", "unit_cost", "unit_capacity"], STORAGE)
write("commodities.csv", ["id", "holding_cost"], COMMODITIES)
write("compat.csv", ["type", "kind", "commodity", "norm"], [(t, k, c, 1) for t, k, c in COMPAT])
write("groups.csv", ["group", "equipment"],
      [("bulk_handling", e) for e in ("crane", "conveyor", "hopper", "forklift")] +
      [("heavy_lift", e) for e in ("crane", "forklift")])
write("group_capacity.csv", ["group", "port", "tons"],
      [(g, ports[i], row[col]) for col, g in ((0, "bulk_handling"), (1, "heavy_lift"))
       for i, row in enumerate(PROCESSING) if row[col]])
caps = []
for i in range(30):
    if PROCESSING[i][2]:
        caps.append((ports[i], "equipment", "petroleum_tank", PROCESSING[i][2]))
    if PROCESSING[i][3]:
        caps.append((ports[i], "equipment", "chemical_tank", PROCESSING[i][3]))
    for f, tons in zip(STORAGE_COLUMNS, STORAGE_CAP[i]):
        if tons:
            caps.append((ports[i], "storage", f, tons))
write("capacities.csv", ["port", "type", "kind", "tons"], caps)
nodes = [(c, "county", int(r == "origin"), int(r == "destination"), county_rail[j])
         for j, (c, r) in enumerate(zip(counties, crole))]
nodes += [(p, "port", int(i in origin_ports), int(i in dest_ports), port_rail[i]) for i, p in enumerate(ports)]
write("nodes.csv", ["id", "kind", "origin", "destination", "rail"], nodes)
write("arcs.csv", ["from", "to", "mode", "miles"], arcs)
write("scenarios.csv", ["id", "probability"], SCENARIOS)
write("params.csv", ["key", "value"], [("periods", PERIODS), ("budget", 2000000)])

volumes = []
for s, _ in SCENARIOS:
    for m in range(N_DEST):
        for c, _ in COMMODITIES:
            for p in range(1, PERIODS + 1):
                d = round(base[(m, c, p)] * level[s])
                if d:
                    volumes.append((s, counties[N_ORIGIN + m], c, p, 0, d))
    # Origin supply covers the largest scenario with room to spare.
    for j in range(N_ORIGIN):
        for c, _ in COMMODITIES:
            for p in range(1, PERIODS + 1):
                total = sum(base[(m, c, p)] for m in range(N_DEST)) * 1.45
                volumes.append((s, counties[j], c, p, round(total * 1.2 / N_ORIGIN), 0))
write("volumes.csv", ["scenario", "county", "commodity", "period", "supply", "demand"], volumes)
