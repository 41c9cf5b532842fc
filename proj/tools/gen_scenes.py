#!/usr/bin/env python3
"""Regenerates the bundled scene and scenario files under scenes/.

Geometry is desk-scale and illustrative: a 0.8 m gap between two climbing
walls, and for the traverse a 1.0 m wall with a 45 degree ramp at its base.
All pyramids are 4-sided with mu = 0.8.
"""
import json
import math
import pathlib

OUT = pathlib.Path(__file__).resolve().parent.parent / "scenes"
MU, SIDES, MASS, G = 0.8, 4, 60.0, [0.0, 0.0, -9.81]


def r(x):
    return round(x, 6)


def contact(p, n):
    return {"point": [r(c) for c in p], "normal": [r(c) for c in n],
            "mu": MU, "sides": SIDES}


def rect(center, t1, t2, half1, half2, n):
    out = []
    for s1 in (-1, 1):
        for s2 in (-1, 1):
            p = [center[i] + s1 * half1 * t1[i] + s2 * half2 * t2[i]
                 for i in range(3)]
            out.append(contact(p, n))
    return out


def scene(contacts, com):
    return {"mass": MASS, "gravity": G, "com": [r(c) for c in com],
            "contacts": contacts}


def write(name, obj):
    (OUT / name).write_text(json.dumps(obj, indent=2) + "\n")


X, Y, Z = [1, 0, 0], [0, 1, 0], [0, 0, 1]
S2 = 1 / math.sqrt(2)

# Basic scenes.
write("single_contact.json", scene([contact([0, 0, 0], Z)], [0.0, 0.0, 0.8]))
write("flat_foot.json",
      scene(rect([0, 0, 0], X, Y, 0.1, 0.05, Z), [0.02, 0.01, 0.8]))
# Three contacts on a line straight below the CoM: the 5D point set is flat.
write("coplanar_line.json",
      scene([contact([x, 0, 0], Z) for x in (-0.1, 0.0, 0.15)],
            [0.0, 0.0, 0.8]))

# Two facing vertical walls at x = -0.4 (normal +x) and x = +0.4 (normal -x):
# one foot edge (two points) and one hand on each wall.
WALL = 0.4


def foot_edge(side, z, y=0.0):
    n = [side * -1.0, 0, 0]
    return [contact([side * WALL, y + dy, z], n) for dy in (-0.05, 0.05)]


def hand(side, z, y=0.0):
    n = [side * -1.0, 0, 0]
    return rect([side * WALL, y, z], Y, Z, 0.03, 0.03, n)


two_walls = foot_edge(-1, 0.3) + foot_edge(1, 0.3) + \
    [contact([-WALL, 0.1, 1.4], X), contact([WALL, -0.1, 1.4], [-1, 0, 0])]
write("two_walls.json", scene(two_walls, [0.0, 0.0, 1.0]))


def trajectory(t0, com0, com1, n=8, accel=(0.0, 0.0, 0.0), l_dot=True):
    out = []
    for k in range(n):
        a = k / (n - 1)
        s = {"t": r(t0 + 0.1 * k),
             "com": [r(com0[i] + a * (com1[i] - com0[i])) for i in range(3)],
             "accel": list(accel)}
        if l_dot:
            s["l_dot"] = [0.0, 0.0, 0.0]
        out.append(s)
    return out


# Climbing: phases alternate transition (12), hands only (8), transition,
# feet edges only (4), transition, hands only.
phases = []
feet_z, hands_z, com_z, t = 0.2, 1.2, 0.8, 0.0
schedule = ["both", "hands", "both", "feet", "both", "hands"]
for i, kind in enumerate(schedule):
    if kind == "hands":
        feet_z += 0.3  # feet are repositioned while hanging on the hands
    if kind == "feet":
        hands_z += 0.3
    contacts = []
    if kind in ("both", "feet"):
        contacts += foot_edge(-1, feet_z) + foot_edge(1, feet_z)
    if kind in ("both", "hands"):
        contacts += hand(-1, hands_z, 0.1) + hand(1, hands_z, -0.1)
    com0 = [0.0, 0.0, com_z]
    com_z += 0.1
    com1 = [0.02, 0.0, com_z]
    phases.append({"name": f"climb{i + 1}_{kind}",
                   "scene": scene(contacts, com0),
                   "com_trajectory": trajectory(t, com0, com1,
                                                accel=(0.0, 0.0, 0.5))})
    t += 1.0
write("climbing.json", {"phases": phases})

# Traverse along a wall: face at x = 0 (normal -x), horizontal top at
# z = 1.0 (normal +z), ground z = 0, ramp z = x + 0.3 for x in [-0.3, 0].
RAMP_N = [-S2, 0, S2]
RAMP_T = [S2, 0, S2]


def foot(kind, y):
    if kind == "ground":
        return rect([-0.45, y, 0.0], X, Y, 0.1, 0.05, Z)
    if kind == "inclined":
        return rect([-0.15, y, 0.15], RAMP_T, Y, 0.1, 0.05, RAMP_N)
    if kind == "vertical":  # front edge of the foot only
        return [contact([0.0, y + dy, 0.45], [-1, 0, 0])
                for dy in (-0.05, 0.05)]
    raise ValueError(kind)


def top_hand(y):
    return rect([0.1, y, 1.0], X, Y, 0.04, 0.03, Z)


# Per phase: right foot, left foot, right hand, left hand.
table = [
    ("inclined", "ground", None, None),
    ("inclined", None, "top", "top"),
    ("inclined", "vertical", "top", None),
    (None, "vertical", "top", "top"),
    ("inclined", None, "top", "top"),
    (None, "ground", "top", "top"),
]
phases = []
t = 0.0
for i, (rf, lf, rh, lh) in enumerate(table):
    y0 = 0.05 * i  # the robot drifts sideways (+y) phase by phase
    contacts = []
    if rf:
        contacts += foot(rf, y0 - 0.12)
    if lf:
        contacts += foot(lf, y0 + 0.12)
    if rh:
        contacts += top_hand(y0 - 0.2)
    if lh:
        contacts += top_hand(y0 + 0.2)
    com0 = [-0.25, y0, 0.75]
    com1 = [-0.23, y0 + 0.05, 0.77]
    name = f"traverse_p{i + 1}.json"
    write(name, scene(contacts, com0))
    phases.append({"name": f"phase{i + 1}", "scene": name,
                   "com_trajectory": trajectory(t, com0, com1, n=10)})
    t += 1.0
write("traverse.json", {"phases": phases})
