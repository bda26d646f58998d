"""Print the finite packing facts checked by the acceptance suite as a table.

    python scripts/packing_instances.py
"""

from fractions import Fraction

from tripack.graph import complement, complete_graph, complete_minus_matching, cycle_graph, disjoint_union
from tripack.lp import certified
from tripack.packing import (
    co_bipartite_lower_bound,
    critical_lower_bound,
    critical_packing,
    decompose_complete_minus_matching,
    f_small,
    is_critical,
    verify_packing,
)


def show(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}" if q.denominator != 1 else str(q.numerator)


def main() -> None:
    print("K_n minus a k-matching: edges, constructed packing, LP optimum")
    for n in range(7, 13):
        for k in range(n // 2 + 1):
            g = complete_minus_matching(n, k)
            rep = verify_packing(g, decompose_complete_minus_matching(n, k))
            print(f"  n={n:2d} k={k} e={g.num_edges:3d} built={show(rep.size):>3} "
                  f"tight={rep.tight_edges:3d} nu*={show(certified(g).nu_star)}")

    print("two disjoint cliques K_a + K_(n-a) against n(n-2)/4")
    for n in range(6, 13):
        row = [show(certified(disjoint_union(complete_graph(a), complete_graph(n - a))).nu_star)
               for a in range(n // 2 + 1)]
        print(f"  n={n:2d} bound={show(co_bipartite_lower_bound(n)):>5} values={' '.join(row)}")

    print("complements of odd cycles: explicit packing, LP optimum, (n^2-17)/4, n(n-1)/4")
    for n in range(19, 26, 2):
        g = complement(cycle_graph(n))
        rep = verify_packing(g, critical_packing(g, is_critical(g)))
        print(f"  n={n} packing={show(rep.size)} nu*={show(certified(g).nu_star)} "
              f"bound={show(critical_lower_bound(n))} quarter={show(Fraction(n * (n - 1), 4))}")

    print("smallest guaranteed monochromatic packing over 2-colourings of K_n")
    for n in range(7):
        print(f"  f({n}) = {f_small(n)}")


if __name__ == "__main__":
    main()
