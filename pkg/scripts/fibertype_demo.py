"""Fiber-type completions of the figure configurations and braid arrangements."""

from grassfold.arrangement import (
    CentralArrangement,
    base_derived,
    factor_poincare,
    fiber_type_completion,
    is_fiber_type,
    poincare_polynomial,
)
from grassfold.fixtures import FIGURE1, FIGURE2, config, generic4


def describe(name, a):
    ft, _ = is_fiber_type(a)
    pi = poincare_polynomial(a)
    print(f"{name}: {len(a.normals)} hyperplanes, fiber type {ft}, pi = {pi}, factors {factor_poincare(pi)}")


def main():
    for name, coords in (("figure1", FIGURE1), ("figure2", FIGURE2)):
        x = config(coords)
        describe(f"{name} base", CentralArrangement.cone(base_derived(x)))
        describe(f"{name} completed", CentralArrangement.cone(fiber_type_completion(x).configuration))
    for n in range(2, 6):
        describe(f"braid {n}", CentralArrangement.braid(n))
    describe("generic4", generic4())


if __name__ == "__main__":
    main()
