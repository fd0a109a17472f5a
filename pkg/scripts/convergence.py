"""Mean reuse ratio as the number of columns grows; the curve should flatten."""
from _common import parser, run

from mgcolor.sweep import SweepPoint, parse_values

if __name__ == "__main__":
    p = parser(__doc__, "convergence.csv")
    p.add_argument("--values", default="1..40", help='column counts, "1..40" or a comma list')
    p.add_argument("--edge-density", type=float, default=0.6)
    p.add_argument("--floor-height", type=int, default=3)
    ns = p.parse_args()
    base = SweepPoint(M=ns.m, colors=ns.colors, edge_density=ns.edge_density, L=ns.floor_height)
    run("N", parse_values(ns.values), base, ns)
