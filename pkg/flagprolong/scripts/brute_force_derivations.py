#!/usr/bin/env python3
"""
Niezależne wyliczenie wymiaru derywacji algebry Heisenberga.

Builds the grading-preserving derivation equations of heis(2k+1) directly from
the symplectic form with sympy and stores the nullspace dimension as a test
fixture. Nothing from the engine is used apart from writing the file.

Użycie:
    python brute_force_derivations.py                 # heis(5) -> tests/fixtures
    python brute_force_derivations.py --dim 7         # inny wymiar
    python brute_force_derivations.py --output out.json
"""

import argparse
import json
import logging
import os
import sys

import sympy

DEFAULT_OUTPUT = os.path.join(
    os.path.dirname(__file__), "..", "tests", "fixtures", "derivations_heis5.json"
)


def setup_logging():
    """Skonfiguruj logowanie."""
    logging.basicConfig(level=logging.INFO, format="%(asctime)s - %(levelname)s - %(message)s")


def standard_form(k: int) -> sympy.Matrix:
    return sympy.Matrix(2 * k, 2 * k, lambda r, c: 1 if c == r + k else (-1 if r == c + k else 0))


def derivation_dimension(total_dim: int) -> int:
    """dim of {D = (A on g^-1, d on z) : d omega(a, b) = omega(Aa, b) + omega(a, Ab)}."""
    k = (total_dim - 1) // 2
    n = 2 * k
    omega = standard_form(k)
    unknowns = n * n + 1

    def a_index(row: int, col: int) -> int:
        return row * n + col

    rows = []
    for a in range(n):
        for b in range(a + 1, n):
            row = [0] * unknowns
            row[n * n] = omega[a, b]
            for u in range(n):
                row[a_index(u, a)] -= omega[u, b]
                row[a_index(u, b)] -= omega[a, u]
            rows.append(row)
    system = sympy.Matrix(rows)
    return len(system.nullspace())


def main():
    """Główna funkcja skryptu."""
    parser = argparse.ArgumentParser(description="Wymiar derywacji heis(2k+1) liczony przez sympy")
    parser.add_argument("--dim", type=int, default=5, help="Wymiar algebry Heisenberga (nieparzysty)")
    parser.add_argument("--output", default=DEFAULT_OUTPUT, help="Ścieżka pliku JSON")
    args = parser.parse_args()

    setup_logging()

    if args.dim < 3 or args.dim % 2 == 0:
        print(f"❌ Wymiar musi być nieparzysty i >= 3, podano {args.dim}")
        sys.exit(1)

    dim = derivation_dimension(args.dim)
    with open(args.output, "w", encoding="utf-8") as handle:
        json.dump({"algebra": f"heisenberg{args.dim}", "dim": dim}, handle, indent=2)
        handle.write("\n")
    logging.info("Zapisano %s", args.output)
    print(f"✅ heisenberg({args.dim}): dim der0 = {dim}")


if __name__ == "__main__":
    main()
