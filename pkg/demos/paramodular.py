"""The paramodular side: Atkin-Lehner relations and the T1*T2 expansion,
which picks up an extra Atkin-Lehner term when p divides N."""

from parahecke import symplectic as sp
from parahecke.hecke import HeckeElement
from parahecke.verify import t1_t2_expansions


def show(x: HeckeElement) -> str:
    return " + ".join(f"{c}*[{lab}]" for lab, c in x.items()) or "0"


def main():
    for N in (2, 3):
        one = HeckeElement.unit(N, "param")
        w = sp.sigma_W(N, N)
        t1, t2 = sp.sigma_T1(N, N), sp.sigma_T2(N, N)
        print(f"N={N}")
        print("  W_N^2           =", show(w * w))
        print("  (W_N-1)(W_N+1)  =", show((w - one) * (w + one)))
        print("  W_N T2 - T2 W_N =", show(w * t2 - t2 * w))
        print("  W_N T1 - T1 W_N =", show(w * t1 - t1 * w))
        print("  T1*T2           =", show(t1 * t2))
        print("  T2*T1           =", show(t2 * t1))
    print("\np not dividing N:")
    for N, p in ((1, 2), (3, 2)):
        shapes = t1_t2_expansions(N, p)
        print(f"  N={N} p={p} commutative: {shapes['T1*T2'] == shapes['T2*T1']}")
    M = sp.diagonal(1, 1, 2, 12, 6)
    print("\nimage of (1/sqrt 12) diag(1,2,12,6):", sp.to_orthogonal(M))


if __name__ == "__main__":
    main()
