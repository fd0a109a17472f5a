"""Floor-division solver against greedy list coloring and soft frequency reuse.

Sweeps either the edge density or the effective vertex density (expected
active points per cell).
"""
from _common import parser, run

from mgcolor.sweep import SweepPoint, parse_values

if __name__ == "__main__":
    p = parser(__doc__, "comparison.csv")
    p.add_argument("--axis", choices=("Ed", "Vd"), default="Ed")
    p.add_argument("--values", default=None)
    p.add_argument("--pf", type=float, default=1.0)
    p.add_argument("--floor-height", type=int, default=3)
    p.add_argument("--algorithms", default="mgc,greedy,sfr")
    ns = p.parse_args()
    values = ns.values or ("0.2,0.4,0.6,0.8,1.0" if ns.axis == "Ed" else "0.4,0.8,1.2,1.6,2.0")
    base = SweepPoint(M=ns.m, N=ns.n, colors=ns.colors, p_f=ns.pf, L=ns.floor_height)
    run(ns.axis, parse_values(values), base, ns, ns.algorithms.split(","))
