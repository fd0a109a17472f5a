"""Mean reuse ratio against the floor height L, at a few edge densities."""

from _common import parser, run

from mgcolor.sweep import SweepPoint, parse_values

if __name__ == "__main__":
    p = parser(__doc__, "floor_height.csv")
    p.add_argument("--values", default="2..6")
    p.add_argument("--edge-densities", default="0.4,0.6,0.8")
    ns = p.parse_args()
    out = ns.out
    for ed in parse_values(ns.edge_densities):
        ns.out = out.with_name(f"{out.stem}_Ed{ed:g}{out.suffix}")
        print(f"edge density {ed:g}")
        run("L", parse_values(ns.values), SweepPoint(M=ns.m, N=ns.n, colors=ns.colors,
                                                     edge_density=ed), ns)
