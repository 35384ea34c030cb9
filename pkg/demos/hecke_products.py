"""Products of double cosets for the orthogonal group and the expression of
every coset with denominator p^2 as a polynomial in T1(p), T2(p)."""

from parahecke.hecke import T1, T2, HeckeElement, express_in_generators, reduced_labels_dividing
from parahecke.verify import poly_str


def main():
    for N, p in ((1, 2), (2, 2), (3, 3)):
        a, b = T1(N, p), T2(N, p)
        print(f"N={N} p={p}")
        print("  T1*T2 =", a * b)
        print("  T2*T1 =", b * a)
    print("\ncoprime denominators give one coset:", T1(1, 2) * T1(1, 3))
    for N in (1, 2):
        print(f"\ngenerators at N={N}, p=2")
        for lab in reduced_labels_dividing(4):
            poly = express_in_generators(HeckeElement.basis(N, lab), 2)
            print(f"  {lab} = {poly_str(poly)}")


if __name__ == "__main__":
    main()
