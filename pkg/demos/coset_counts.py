"""Right coset counts of T1(p) and T2(p) next to the closed formulas."""

from parahecke.hecke import enumerate_right_cosets, prime_power_label


def formula(N, p, which):
    if which == "T1":
        return 1 + p + p**2 + p**3 if N % p else p + 2 * p**2 + p**3
    return p + p**2 + p**3 + p**4 if N % p else 2 * p**3 + 2 * p**4


def main():
    print(f"{'N':>3} {'p':>3} {'op':>3} {'count':>6} {'formula':>8}")
    for N in (1, 2, 3, 5, 6):
        for p in (2, 3):
            for which, s in (("T1", 1), ("T2", 0)):
                n = enumerate_right_cosets(prime_power_label(p, 1, s), N).count
                print(f"{N:>3} {p:>3} {which:>3} {n:>6} {formula(N, p, which):>8}")


if __name__ == "__main__":
    main()
